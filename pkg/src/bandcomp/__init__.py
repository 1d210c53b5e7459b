"""Curvature comparison machinery for Riemannian bands.

Warped-product curvature profiles and the model catalog, the extremal
mean-curvature ODE with closed-form width bounds, discrete 2-D bands with
prescribed-mean-curvature minimizers, and the curve stability spectrum.
"""

__version__ = "0.1.0"

from .warp import (ConstructionError, CurvatureProfile, DomainError,
                   LogConcavity, ModelSpace, WarpingFunction,
                   boundary_mean_curvatures, eval_warp, load_sampled_csv,
                   log_concavity_classify, mean_curvature_profile,
                   model_catalog, scalar_curvature_profile,
                   warped_identity_residual)
from .riccati import (ClosedFormTag, ComparisonProblem, RiccatiSolution,
                      VerdictKind, WidthVerdict, closed_form_width,
                      compare_warped_products, ode_comparison_check,
                      scaling_transform, solve_riccati, width_bound)
from .mesh import (BandMap, Curve, DiscreteBand, band_width,
                   build_flat_cylinder, build_warped_band, lipschitz_band_map,
                   read_band, separation_check, structural_check, write_band)
from .bubble import (MinimizerReport, PrescriptionField, constant_field,
                     first_variation_check, functional_A_h, minimize,
                     minimize_warped, second_variation_value, tan_profile,
                     warped_functional_A_u_h)
from .spectral import (DiscreteClosedCurve, SpectrumReport, Verdict,
                       conformal_verdict, dense_spectrum, lambda1,
                       stability_pipeline)

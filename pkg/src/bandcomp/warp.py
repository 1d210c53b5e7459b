"""Warping functions and curvature profiles of warped-product band metrics.

A warped product over a closed base manifold carries the metric
``phi(t)^2 * g_N + dt^2`` on ``N x [a, b]``.  Everything geometric about it
is encoded in the warping function ``phi``: the scalar curvature profile

    Sc(t) = Sc_N / phi^2 - 2(n-1) phi''/phi - (n-1)(n-2) (phi'/phi)^2

and the mean curvature of the slice ``N x {t}``

    h(t) = (n-1) phi'(t) / phi(t).

The two are tied together by the governing identity

    Sc(t) + n/(n-1) h(t)^2 + 2 h'(t) = Sc_N / phi(t)^2,

which every function in this module is ultimately tested against.

Units are geometric: lengths are abstract, curvatures 1/length^2, mean
curvatures 1/length.  All objects are immutable after construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "ConstructionError",
    "LogConcavity",
    "WarpingFunction",
    "ModelSpace",
    "CurvatureProfile",
    "eval_warp",
    "scalar_curvature_profile",
    "mean_curvature_profile",
    "mean_curvature_derivative",
    "boundary_mean_curvatures",
    "warped_identity_residual",
    "log_concavity_classify",
    "curvature_profile",
    "model_catalog",
    "cos_model",
    "power_model",
    "sinh_model",
    "constant_model",
    "exp_model",
    "sphere_annulus",
    "euclidean_annulus",
    "hyperbolic_annulus",
    "sampled_copy",
    "load_sampled_csv",
]


class DomainError(ValueError):
    """Evaluation point outside the warping function's domain."""


class ConstructionError(ValueError):
    """Invalid parameters for a warping function or model space."""


class LogConcavity(enum.Enum):
    STRICTLY_LOG_CONCAVE = "strictly_log_concave"
    LOG_CONSTANT = "log_constant"
    NEITHER = "neither"


@dataclass(frozen=True)
class WarpingFunction:
    """Positive function on a closed interval with two derivatives.

    ``kind`` is either ``"closed_form"`` (analytic callables) or
    ``"sampled"`` (uniform grid of values; derivatives by second-order
    finite differences, one-sided at the endpoints).
    """

    a: float
    b: float
    kind: str
    label: str = "warp"
    _f: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    _d1: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    _d2: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    _grid: np.ndarray | None = field(default=None, repr=False)
    _values: np.ndarray | None = field(default=None, repr=False)
    _dv1: np.ndarray | None = field(default=None, repr=False)
    _dv2: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ConstructionError(f"invalid domain [{self.a}, {self.b}]")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def closed_form(label: str, domain: tuple[float, float],
                    f: Callable, d1: Callable, d2: Callable) -> "WarpingFunction":
        w = WarpingFunction(a=float(domain[0]), b=float(domain[1]),
                            kind="closed_form", label=label, _f=f, _d1=d1, _d2=d2)
        w._check_positive()
        return w

    @staticmethod
    def from_samples(t: Sequence[float], values: Sequence[float],
                     label: str = "sampled") -> "WarpingFunction":
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != values.shape or t.size < 8:
            raise ConstructionError("sampled warp needs a 1-d grid of >= 8 points")
        dt = np.diff(t)
        if np.any(dt <= 0):
            raise ConstructionError("grid must be strictly increasing")
        if np.max(np.abs(dt - dt[0])) > 1e-9 * max(abs(t[0]), abs(t[-1]), dt[0]):
            raise ConstructionError("grid must be uniformly spaced (1e-9 relative)")
        if np.any(values <= 0):
            raise ConstructionError("warping function must be positive")
        h = float(dt[0])
        d1 = np.gradient(values, h, edge_order=2)
        d2 = np.empty_like(values)
        d2[1:-1] = (values[2:] - 2 * values[1:-1] + values[:-2]) / h**2
        # second-order one-sided second derivative at the endpoints
        d2[0] = (2 * values[0] - 5 * values[1] + 4 * values[2] - values[3]) / h**2
        d2[-1] = (2 * values[-1] - 5 * values[-2] + 4 * values[-3] - values[-4]) / h**2
        return WarpingFunction(a=float(t[0]), b=float(t[-1]), kind="sampled",
                               label=label, _grid=t, _values=values, _dv1=d1, _dv2=d2)

    def _check_positive(self, samples: int = 257) -> None:
        t = np.linspace(self.a, self.b, samples)
        if np.any(self.eval(t)[0] <= 0):
            raise ConstructionError(f"warping function '{self.label}' is not positive on its domain")

    # -- evaluation --------------------------------------------------------

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        eps = 1e-12 * max(1.0, abs(self.a), abs(self.b))
        if np.any(t < self.a - eps) or np.any(t > self.b + eps):
            raise DomainError(f"t outside domain [{self.a}, {self.b}]")
        return np.clip(t, self.a, self.b)

    def eval(self, t):
        """Return ``(phi(t), phi'(t), phi''(t))``; accepts scalars or arrays."""
        scalar = np.isscalar(t) or (isinstance(t, np.ndarray) and t.ndim == 0)
        t = self._check_domain(t)
        if self.kind == "closed_form":
            out = (np.asarray(self._f(t), dtype=float),
                   np.asarray(self._d1(t), dtype=float),
                   np.asarray(self._d2(t), dtype=float))
        else:
            # linear interpolation of the tabulated values and derivatives
            out = tuple(np.interp(t, self._grid, arr)
                        for arr in (self._values, self._dv1, self._dv2))
        if scalar:
            return tuple(float(o) for o in out)
        return out

    def __call__(self, t):
        return self.eval(t)[0]


def eval_warp(w: WarpingFunction, t):
    """Evaluate ``(phi, phi', phi'')`` at ``t``; raises DomainError outside [a, b]."""
    return w.eval(t)


@dataclass(frozen=True)
class ModelSpace:
    """Warped product over a constant-scalar-curvature base.

    ``n`` is the total dimension, ``base_scalar`` the (constant) scalar
    curvature of the base, ``warp`` the warping function on [a, b].
    """

    n: int
    base_scalar: float
    warp: WarpingFunction
    name: str = "model"

    def __post_init__(self):
        if self.n < 2:
            raise ConstructionError("dimension must be >= 2")

    @property
    def domain(self) -> tuple[float, float]:
        return (self.warp.a, self.warp.b)


@dataclass(frozen=True)
class CurvatureProfile:
    """Tabulated Sc and h profiles plus boundary mean curvatures.

    Sign convention: H_minus = -h(a) and H_plus = h(b), so that the unit
    sphere bounding a euclidean ball has mean curvature n-1 with respect
    to the inner normal.
    """

    t: np.ndarray
    sc: np.ndarray
    h: np.ndarray
    H_minus: float
    H_plus: float


def scalar_curvature_profile(m: ModelSpace, t):
    """Scalar curvature of the warped product at coordinate t."""
    phi, d1, d2 = m.warp.eval(t)
    n = m.n
    return (m.base_scalar / phi**2
            - 2.0 * (n - 1) * d2 / phi
            - (n - 1) * (n - 2) * (d1 / phi) ** 2)


def mean_curvature_profile(m: ModelSpace, t):
    """Slice mean curvature h(t) = (n-1) phi'/phi."""
    phi, d1, _ = m.warp.eval(t)
    return (m.n - 1) * d1 / phi


def mean_curvature_derivative(m: ModelSpace, t):
    """h'(t) = (n-1) (phi''/phi - (phi'/phi)^2)."""
    phi, d1, d2 = m.warp.eval(t)
    return (m.n - 1) * (d2 / phi - (d1 / phi) ** 2)


def boundary_mean_curvatures(m: ModelSpace) -> tuple[float, float]:
    """(H_minus, H_plus) with respect to the inner normal on each side."""
    h_a = mean_curvature_profile(m, m.warp.a)
    h_b = mean_curvature_profile(m, m.warp.b)
    return (-float(h_a), float(h_b))


def warped_identity_residual(m: ModelSpace, t):
    """Residual of Sc + n/(n-1) h^2 + 2 h' - Sc_N/phi^2 (zero for exact data).

    For sampled warps the h' term is obtained by differencing the tabulated
    mean-curvature profile, so the residual genuinely measures the grid
    error (second order) instead of cancelling algebraically.
    """
    phi, _, _ = m.warp.eval(t)
    n = m.n
    if m.warp.kind == "sampled":
        grid = m.warp._grid
        h_arr = (n - 1) * m.warp._dv1 / m.warp._values
        hp_arr = np.gradient(h_arr, float(grid[1] - grid[0]), edge_order=2)
        hp = np.interp(np.asarray(t, dtype=float), grid, hp_arr)
    else:
        hp = mean_curvature_derivative(m, t)
    return (scalar_curvature_profile(m, t)
            + n / (n - 1) * mean_curvature_profile(m, t) ** 2
            + 2.0 * hp
            - m.base_scalar / phi**2)


def log_concavity_classify(w: WarpingFunction, tol: float | None = None,
                           samples: int = 4001) -> LogConcavity:
    """Classify (phi'/phi)' on a dense grid.

    LOG_CONSTANT if max |q| <= tol, STRICTLY_LOG_CONCAVE if q < -tol
    everywhere, NEITHER otherwise.  Default tol is 1e-10 for analytic
    warps and 10*dt^2 for sampled ones.
    """
    if tol is None:
        if w.kind == "sampled":
            dt = float(w._grid[1] - w._grid[0])
            tol = 10.0 * dt * dt
        else:
            tol = 1e-10
    t = np.linspace(w.a, w.b, samples)
    phi, d1, d2 = w.eval(t)
    q = d2 / phi - (d1 / phi) ** 2
    if np.max(np.abs(q)) <= tol:
        return LogConcavity.LOG_CONSTANT
    if np.max(q) < -tol:
        return LogConcavity.STRICTLY_LOG_CONCAVE
    return LogConcavity.NEITHER


def curvature_profile(m: ModelSpace, samples: int = 1001) -> CurvatureProfile:
    t = np.linspace(m.warp.a, m.warp.b, samples)
    H_minus, H_plus = boundary_mean_curvatures(m)
    return CurvatureProfile(t=t,
                            sc=np.asarray(scalar_curvature_profile(m, t)),
                            h=np.asarray(mean_curvature_profile(m, t)),
                            H_minus=H_minus, H_plus=H_plus)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConstructionError(msg)


def cos_model(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """phi = cos(nt/2)^(2/n) over a scalar-flat base; Sc = n(n-1)."""
    lim = math.pi / n
    _require(-lim < l_minus < l_plus < lim,
             f"cos model needs -pi/n < l_minus < l_plus < pi/n (pi/{n} = {lim:.6g})")
    a = 2.0 / n

    def f(t):
        return np.cos(n * t / 2.0) ** a

    def d1(t):
        c = np.cos(n * t / 2.0)
        return -np.sin(n * t / 2.0) * c ** (a - 1.0)

    def d2(t):
        c = np.cos(n * t / 2.0)
        s = np.sin(n * t / 2.0)
        return -(n / 2.0) * c ** a - ((n - 2) / 2.0) * s**2 * c ** (a - 2.0)

    w = WarpingFunction.closed_form("cos", (l_minus, l_plus), f, d1, d2)
    return ModelSpace(n=n, base_scalar=0.0, warp=w, name="cos")


def power_model(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """phi = t^(2/n) over a scalar-flat base; scalar flat."""
    _require(0 < l_minus < l_plus, "power model needs 0 < l_minus < l_plus")
    a = 2.0 / n
    w = WarpingFunction.closed_form(
        "power", (l_minus, l_plus),
        lambda t: t**a,
        lambda t: a * t ** (a - 1.0),
        lambda t: a * (a - 1.0) * t ** (a - 2.0))
    return ModelSpace(n=n, base_scalar=0.0, warp=w, name="power")


def sinh_model(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """phi = sinh(nt/2)^(2/n) over a scalar-flat base; Sc = -n(n-1)."""
    _require(0 < l_minus < l_plus, "sinh model needs 0 < l_minus < l_plus")
    a = 2.0 / n

    def f(t):
        return np.sinh(n * t / 2.0) ** a

    def d1(t):
        s = np.sinh(n * t / 2.0)
        return np.cosh(n * t / 2.0) * s ** (a - 1.0)

    def d2(t):
        s = np.sinh(n * t / 2.0)
        c = np.cosh(n * t / 2.0)
        return (n / 2.0) * s ** a - ((n - 2) / 2.0) * c**2 * s ** (a - 2.0)

    w = WarpingFunction.closed_form("sinh", (l_minus, l_plus), f, d1, d2)
    return ModelSpace(n=n, base_scalar=0.0, warp=w, name="sinh")


def constant_model(n: int, l_minus: float = 0.0, l_plus: float = 1.0) -> ModelSpace:
    """phi = 1; the product metric, scalar flat."""
    _require(l_minus < l_plus, "constant model needs l_minus < l_plus")
    w = WarpingFunction.closed_form(
        "const", (l_minus, l_plus),
        lambda t: np.ones_like(np.asarray(t, dtype=float)),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    return ModelSpace(n=n, base_scalar=0.0, warp=w, name="const")


def exp_model(n: int, l_minus: float = 0.0, l_plus: float = 1.0) -> ModelSpace:
    """phi = exp(t) over a scalar-flat base; Sc = -n(n-1), h = n-1."""
    _require(l_minus < l_plus, "exp model needs l_minus < l_plus")
    w = WarpingFunction.closed_form("exp", (l_minus, l_plus),
                                    np.exp, np.exp, np.exp)
    return ModelSpace(n=n, base_scalar=0.0, warp=w, name="exp")


def sphere_annulus(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """Annulus in the unit n-sphere: phi = cos t over the unit (n-1)-sphere."""
    _require(-math.pi / 2 < l_minus < l_plus < math.pi / 2,
             "sphere annulus needs -pi/2 < l_minus < l_plus < pi/2")
    w = WarpingFunction.closed_form(
        "sphere_annulus", (l_minus, l_plus),
        np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))
    return ModelSpace(n=n, base_scalar=float((n - 1) * (n - 2)), warp=w,
                      name="sphere_annulus")


def euclidean_annulus(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """Annulus in euclidean space: phi = t over the unit (n-1)-sphere."""
    _require(0 < l_minus < l_plus, "euclidean annulus needs 0 < l_minus < l_plus")
    w = WarpingFunction.closed_form(
        "euclidean_annulus", (l_minus, l_plus),
        lambda t: np.asarray(t, dtype=float),
        lambda t: np.ones_like(np.asarray(t, dtype=float)),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    return ModelSpace(n=n, base_scalar=float((n - 1) * (n - 2)), warp=w,
                      name="euclidean_annulus")


def hyperbolic_annulus(n: int, l_minus: float, l_plus: float) -> ModelSpace:
    """Annulus in hyperbolic space: phi = sinh t over the unit (n-1)-sphere."""
    _require(0 < l_minus < l_plus, "hyperbolic annulus needs 0 < l_minus < l_plus")
    w = WarpingFunction.closed_form(
        "hyperbolic_annulus", (l_minus, l_plus),
        np.sinh, np.cosh, np.sinh)
    return ModelSpace(n=n, base_scalar=float((n - 1) * (n - 2)), warp=w,
                      name="hyperbolic_annulus")


def model_catalog() -> dict[str, Callable[..., ModelSpace]]:
    """Parameterized constructors for the eight catalog families."""
    return {
        "cos": cos_model,
        "power": power_model,
        "sinh": sinh_model,
        "const": constant_model,
        "exp": exp_model,
        "sphere_annulus": sphere_annulus,
        "euclidean_annulus": euclidean_annulus,
        "hyperbolic_annulus": hyperbolic_annulus,
    }


def sampled_copy(m: ModelSpace, num: int) -> ModelSpace:
    """Resample a model's warp onto a uniform grid (finite-difference access)."""
    t = np.linspace(m.warp.a, m.warp.b, num)
    vals = m.warp.eval(t)[0]
    w = WarpingFunction.from_samples(t, vals, label=m.warp.label + "_sampled")
    return ModelSpace(n=m.n, base_scalar=m.base_scalar, warp=w,
                      name=m.name + "_sampled")


def load_sampled_csv(path) -> WarpingFunction:
    """Load a sampled warping function from a two-column CSV (t, phi(t)).

    A single header line is tolerated; t must be strictly increasing and
    uniformly spaced within 1e-9 relative tolerance.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except (ValueError, IndexError):
                if not rows:
                    continue  # header
                raise ConstructionError(f"malformed CSV line: {line!r}")
    if len(rows) < 8:
        raise ConstructionError("CSV must contain at least 8 sample rows")
    arr = np.asarray(rows, dtype=float)
    return WarpingFunction.from_samples(arr[:, 0], arr[:, 1], label="csv")

"""Command-line interface: model inspection, width bounds, bubbles, verify.

Exit codes: 0 success, 2 argument or configuration error, 3 verification
failure.  Every command emits a JSON envelope (tool version, command echo,
wall clock, results, warnings); repeated runs produce byte-identical
payloads apart from the wall-clock field.  Files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

import numpy as np

from . import __version__
from . import bubble as bu
from . import mesh as me
from . import riccati as rc
from . import spectral as sp
from . import verify as vf
from . import warp as wp

OUTDIR_ENV = "BANDCOMP_OUTDIR"


class CliError(ValueError):
    """Bad command-line arguments or configuration (exit code 2)."""


def _resolve(path: str | None) -> str | None:
    if path is None:
        return None
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(args, results: dict, warnings: list[str], started: float) -> None:
    envelope = {
        "tool": "bandcomp",
        "version": __version__,
        "command": args._argv,
        "wall_clock_s": time.time() - started,
        "results": results,
        "warnings": warnings,
    }
    text = json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    out = _resolve(getattr(args, "out", None))
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: str, rows: list[str]) -> None:
    _atomic_write(path, "\n".join([header] + rows) + "\n")


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

def _build_model(family: str, n: int, l_minus: float | None,
                 l_plus: float | None) -> wp.ModelSpace:
    catalog = wp.model_catalog()
    if family not in catalog:
        raise CliError(f"unknown family {family!r}; choose from {sorted(catalog)}")
    if l_minus is None or l_plus is None:
        if family in ("const", "exp"):
            l_minus = 0.0 if l_minus is None else l_minus
            l_plus = 1.0 if l_plus is None else l_plus
        else:
            raise CliError(f"family {family!r} needs --l-minus and --l-plus")
    try:
        return catalog[family](n, l_minus, l_plus)
    except wp.ConstructionError as exc:
        raise CliError(str(exc)) from exc


def cmd_model(args) -> int:
    started = time.time()
    m = _build_model(args.family, args.n, args.l_minus, args.l_plus)
    t = np.linspace(m.warp.a, m.warp.b, args.samples)
    phi = m.warp.eval(t)[0]
    sc = np.asarray(wp.scalar_curvature_profile(m, t))
    h = np.asarray(wp.mean_curvature_profile(m, t))
    res = np.asarray(wp.warped_identity_residual(m, t))
    H_minus, H_plus = wp.boundary_mean_curvatures(m)
    classification = wp.log_concavity_classify(m.warp).value
    results = {
        "family": m.name,
        "n": m.n,
        "domain": [m.warp.a, m.warp.b],
        "base_scalar": m.base_scalar,
        "H_minus": H_minus,
        "H_plus": H_plus,
        "sc_mean": float(np.mean(sc)),
        "sc_spread": float(np.max(sc) - np.min(sc)),
        "log_concavity": classification,
        "identity_residual_max": float(np.max(np.abs(res))),
        "samples": args.samples,
    }
    if args.profile_csv:
        rows = [",".join(repr(float(col[i])) for col in (t, phi, h, sc, res))
                for i in range(t.size)]
        _write_csv(_resolve(args.profile_csv), "t,phi,h,sc,identity_residual", rows)
        results["profile_csv"] = args.profile_csv
    _emit(args, results, [], started)
    return 0


# ---------------------------------------------------------------------------
# width
# ---------------------------------------------------------------------------

def cmd_width(args) -> int:
    started = time.time()
    if args.sweep:
        problems = rc.parse_sweep_config(args.sweep)
        results_list = rc.run_sweep(problems, jobs=args.jobs)
        rows = rc.sweep_csv_rows(results_list)
        if not args.csv:
            raise CliError("--sweep requires --csv for the results table")
        _write_csv(_resolve(args.csv), rows[0], rows[1:])
        finite = sum(1 for _, v in results_list if v.is_finite)
        results = {"sweep": args.sweep, "instances": len(problems),
                   "finite": finite, "csv": args.csv}
        _emit(args, results, [], started)
        return 0
    for name in ("n", "sigma", "h_minus", "h_plus"):
        if getattr(args, name) is None:
            raise CliError(f"--{name.replace('_', '-')} is required (or use --sweep)")
    p = rc.ComparisonProblem(args.n, args.sigma, args.h_minus, args.h_plus)
    verdict = rc.width_bound(p, tol=args.tol)
    results = {
        "n": p.n, "sigma": p.sigma, "H_minus": p.H_minus, "H_plus": p.H_plus,
        "verdict": verdict.kind.value,
        "width": verdict.width,
        "certificate": verdict.certificate,
    }
    if args.emit_profile:
        if not verdict.is_finite:
            raise CliError("profile emission needs a finite width verdict")
        t, h = rc.extremal_profile(p)
        _write_csv(_resolve(args.emit_profile), "t,h",
                   [f"{float(t[i])!r},{float(h[i])!r}" for i in range(t.size)])
        results["profile_csv"] = args.emit_profile
    _emit(args, results, [], started)
    return 0


# ---------------------------------------------------------------------------
# bubble
# ---------------------------------------------------------------------------

def _parse_band(spec: str) -> me.DiscreteBand:
    kind, _, rest = spec.partition(":")
    try:
        if kind == "cylinder":
            L, r, nu, nv = rest.split(",")
            return me.build_flat_cylinder(float(L), float(r), int(nu), int(nv))
        if kind == "warped":
            family, l1, l2, nu, nv = rest.split(",")
            m = _build_model(family, 2, float(l1), float(l2))
            return me.build_warped_band(m, int(nu), int(nv))
        if kind == "file":
            return me.read_band(rest)
    except (ValueError, OSError) as exc:
        raise CliError(f"bad band spec {spec!r}: {exc}") from exc
    raise CliError(f"unknown band kind {kind!r} (cylinder:|warped:|file:)")


def _parse_h(spec: str, b: me.DiscreteBand, bmap):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "const":
            return bu.constant_field(b, float(rest)), None
        if kind == "tan":
            return bu.tan_profile(b, float(rest)), None
        if kind == "model":
            family, l1, l2 = rest.split(",")
            m = _build_model(family, 2, float(l1), float(l2))
            if bmap is None:
                raise CliError("--h model:... needs --map (lipschitz:MARGIN or identity)")
            return bu.model_pullback_field(b, m, bmap(m)), m
    except CliError:
        raise
    except ValueError as exc:
        raise CliError(f"bad prescription spec {spec!r}: {exc}") from exc
    raise CliError(f"unknown prescription kind {kind!r} (const:|tan:|model:)")


def _parse_map(spec: str | None, b: me.DiscreteBand):
    if spec is None:
        return None
    kind, _, rest = spec.partition(":")
    if kind == "identity":
        def build(m):
            a, bb = m.domain
            vals = np.tile(np.linspace(a, bb, b.nu + 1)[:, None], (1, b.n_vcols))
            return me.BandMap(values=vals, interval=(a, bb), lipschitz=1.0)
        return build
    if kind == "lipschitz":
        margin = float(rest) if rest else 0.25
        def build(m):
            try:
                return me.lipschitz_band_map(b, m.warp.a, m.warp.b, margin)
            except me.PreconditionError as exc:
                raise CliError(str(exc)) from exc
        return build
    raise CliError(f"unknown map spec {spec!r} (lipschitz:MARGIN or identity)")


def _parse_u(spec: str | None, b: me.DiscreteBand):
    if spec is None:
        return None
    kind, _, rest = spec.partition(":")
    try:
        if kind == "const":
            return np.full((b.nu, b.nv), float(rest))
        if kind == "ramp":
            c0, c1 = (float(x) for x in rest.split(","))
            ramp = np.linspace(c0, c1, b.nu)
            return np.tile(ramp[:, None], (1, b.nv))
    except ValueError as exc:
        raise CliError(f"bad u spec {spec!r}: {exc}") from exc
    raise CliError(f"unknown u spec {spec!r} (const:C or ramp:C0,C1)")


def _run_oracle(b: me.DiscreteBand, h: bu.PrescriptionField, mode: str,
                rep: bu.MinimizerReport, u=None) -> bool:
    if mode == "exhaustive":
        if (b.nu - 2) * b.nv > 16:
            raise CliError("exhaustive oracle limited to bands with <= 16 free cells")
        best = min(bu.cut_energy(b, r, h, u)
                   for r in bu.enumerate_admissible_regions(b))
    elif mode == "exhaustive-monotone":
        best = min(bu.cut_energy(b, bu.prefix_region(b, k), h, u)
                   for k in range(1, b.nu))
    else:
        raise CliError(f"unknown oracle {mode!r}")
    return rep.cut_value <= best + 1e-12


def cmd_bubble(args) -> int:
    started = time.time()
    warnings: list[str] = []
    b = _parse_band(args.band)
    map_builder = _parse_map(args.map, b)
    h, model = _parse_h(args.h, b, map_builder)
    u = _parse_u(args.u, b)
    if u is None:
        rep = bu.minimize(b, h)
    else:
        rep = bu.minimize_warped(b, u, h)

    checks: dict[str, object] = {}
    checks["first_variation"] = bool(bu.first_variation_check(rep, args.fv_tol))
    checks["separation"] = bool(me.separation_check(b, rep.curves))
    if model is not None:
        bmap = map_builder(model)
        margins = [me.structural_margin(b, bmap, model, c) for c in rep.curves]
        margin_min = float(min(np.min(mg) for mg in margins))
        checks["structural"] = bool(margin_min >= -args.structural_tol)
        checks["structural_margin_min"] = margin_min
        try:
            srep = sp.stability_pipeline(b, rep, model, bmap)
            checks["lambda1"] = srep.lambda1
            checks["stability"] = bool(srep.lambda1 >= -args.structural_tol)
            checks["conformal_verdict"] = sp.conformal_verdict(srep).value
        except ValueError as exc:
            warnings.append(f"spectral step skipped: {exc}")
    if args.oracle:
        checks["oracle_match"] = _run_oracle(b, h, args.oracle, rep, u)

    results = {"report": bu.report_to_dict(rep), "checks": checks,
               "band": args.band, "fv_tol": args.fv_tol}
    if args.plot_csv:
        rows = [f"{float(x)!r},{float(y)!r},{tag}" for x, y, tag in bu.report_plot_rows(rep)]
        _write_csv(_resolve(args.plot_csv), "x,y,tag", rows)
        results["plot_csv"] = args.plot_csv
    _emit(args, results, warnings, started)
    failed = [k for k, v in checks.items() if isinstance(v, bool) and not v]
    return 3 if failed else 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    started = time.time()
    try:
        checks = vf.run_suite(args.suite, max_cells=args.max_cells)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    for c in checks:
        print(c.line())
    results = {
        "suite": args.suite,
        "passed": sum(1 for c in checks if c.passed),
        "failed": sum(1 for c in checks if not c.passed),
        "checks": [{"name": c.name, "passed": c.passed, "value": c.value,
                    "detail": c.detail} for c in checks],
    }
    _emit(args, results, [], started)
    return 0 if results["failed"] == 0 else 3


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bandcomp",
        description="Band curvature comparison: warped-product models, width "
                    "bounds, prescribed-mean-curvature minimizers, spectra.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("model", help="evaluate a catalog model's profiles")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l-minus", type=float, default=None)
    p.add_argument("--l-plus", type=float, default=None)
    p.add_argument("--samples", type=int, default=512)
    p.add_argument("--profile-csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("width", help="band width bound from comparison data")
    p.add_argument("--n", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--h-minus", type=float)
    p.add_argument("--h-plus", type=float)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--emit-profile")
    p.add_argument("--sweep", help="key-value sweep config file")
    p.add_argument("--csv", help="sweep results CSV path")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("bubble", help="prescribed-mean-curvature minimizer")
    p.add_argument("--band", required=True,
                   help="cylinder:L,r,nu,nv | warped:family,l-,l+,nu,nv | file:PATH")
    p.add_argument("--h", required=True,
                   help="const:C | tan:ELL | model:family,l-,l+")
    p.add_argument("--map", help="lipschitz:MARGIN | identity (for model h)")
    p.add_argument("--u", help="const:C | ramp:C0,C1 (weighted functional)")
    p.add_argument("--fv-tol", type=float, default=0.1)
    p.add_argument("--structural-tol", type=float, default=0.5)
    p.add_argument("--oracle", choices=["exhaustive", "exhaustive-monotone"])
    p.add_argument("--plot-csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bubble)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all",
                   choices=["identities", "widths", "bubbles", "spectral",
                            "pipeline", "all"])
    p.add_argument("--max-cells", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    # accept scientific notation in negative option values (e.g. -1e6)
    matcher = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")
    for parser in [ap] + list(sub.choices.values()):
        parser._negative_number_matcher = matcher
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = argv
    try:
        return args.func(args)
    except (CliError, rc.InfeasibleModelError, rc.UnsupportedModelError,
            wp.ConstructionError, wp.DomainError, me.PreconditionError,
            bu.RegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

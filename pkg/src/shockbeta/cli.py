"""Command-line front end.

Subcommands: profile | aux | beta | scan | compare.  Options mirror the
config-file keys and override file values.  Exit codes: 0 success, 2 invalid
configuration, 3 solver failure (diagnostics on standard error).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .auxiliary import AuxMethod
from .beta import (
    STUDY_DECAY_TOL,
    STUDY_TAIL_TOL,
    beta_convergence_study,
    compute_beta,
)
from .config import RunConfig, apply_overrides, build_model, parse_config_file
from .coupled import continuation_scan, solve_coupled
from .errors import ContinuationStalled, SolverError, ValidationError
from .integrating_factor import solve_auxiliary_if
from .model import FluxKind
from .profile import DEFAULT_TAIL_TOL, Grid, exact_burgers_profile, solve_profile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _add_common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="run-configuration file (key = value lines)")
    p.add_argument("--flux", help="flux kind", default=None)
    p.add_argument("--sine-freq", dest="sine_freq", default=None)
    p.add_argument("--f1-coeffs", dest="f1_coeffs", default=None)
    p.add_argument("--f2-coeffs", dest="f2_coeffs", default=None)
    p.add_argument("--u-minus", dest="u_minus", default=None)
    p.add_argument("--u-plus", dest="u_plus", default=None)
    p.add_argument("--xi0", default=None)
    p.add_argument("--tau0", default=None)
    p.add_argument("--L", dest="L", default=None, help="half-width; comma list for beta")
    p.add_argument("--N", dest="N", default=None, help="output grid interval count")
    p.add_argument("--method", default=None, help="if | coupled | both")
    p.add_argument("--quadrature", default=None, help="trapezoid | simpson")
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--u-minus-list", dest="u_minus_list", default=None)
    p.add_argument("--tol", default=None)
    p.add_argument("--tail-tol", dest="tail_tol", default=None)
    p.add_argument("--decay-tol", dest="decay_tol", default=None)


def _load_config(args: argparse.Namespace) -> RunConfig:
    rc = parse_config_file(args.config) if args.config else RunConfig()
    overrides = {
        key: getattr(args, key)
        for key in (
            "flux", "sine_freq", "f1_coeffs", "f2_coeffs", "u_minus", "u_plus",
            "xi0", "tau0", "L", "N", "method", "quadrature", "out_dir",
            "u_minus_list", "tol", "tail_tol", "decay_tol",
        )
        if hasattr(args, key)
    }
    return apply_overrides(rc, overrides)


def _out_dir(rc: RunConfig) -> Path:
    out = Path(rc.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _solve_pair(rc, flux, cfg, freq, method: AuxMethod, L: float):
    """Profile plus correction by the requested method on the output grid."""
    tail = rc.tail_tol if rc.tail_tol is not None else DEFAULT_TAIL_TOL
    if method is AuxMethod.INTEGRATING_FACTOR:
        profile = solve_profile(cfg, Grid.make(L, rc.N), tail_tol=tail)
        aux = solve_auxiliary_if(flux, freq, profile, decay_tol=rc.decay_tol)
        return profile, aux
    res = solve_coupled(
        cfg, flux, freq, L, rc.N, tol=rc.tol, tail_tol=tail, decay_tol=rc.decay_tol
    )
    return res.profile, res.aux


def cmd_profile(rc: RunConfig, args: argparse.Namespace) -> int:
    flux, cfg, _ = build_model(rc)
    out = _out_dir(rc)
    grid = Grid.make(rc.L_single, rc.N)
    if args.exact:
        if flux.kind not in (FluxKind.BURGERS, FluxKind.QUADRATIC_TRANSVERSE,
                             FluxKind.SINE_TRANSVERSE) or (
            cfg.u_minus, cfg.u_plus, cfg.s
        ) != (1.0, -1.0, 0.0):
            raise ValidationError(
                "--exact requires the quadratic longitudinal flux with "
                "u_minus = 1, u_plus = -1"
            )
        ps = exact_burgers_profile(grid)
    else:
        tail = rc.tail_tol if rc.tail_tol is not None else DEFAULT_TAIL_TOL
        ps = solve_profile(cfg, grid, tail_tol=tail)
    path = out / "profile.csv"
    serialize.write_profile_csv(path, ps, flux)
    print(path)
    return EXIT_OK


def cmd_aux(rc: RunConfig, args: argparse.Namespace) -> int:
    flux, cfg, freq = build_model(rc)
    out = _out_dir(rc)
    for method in rc.methods():
        profile, aux = _solve_pair(rc, flux, cfg, freq, method, rc.L_single)
        ppath = out / f"profile_{method.value}.csv"
        apath = out / f"aux_{method.value}.csv"
        serialize.write_profile_csv(ppath, profile, flux)
        serialize.write_aux_csv(apath, aux, profile, flux)
        print(ppath)
        print(apath)
    return EXIT_OK


def cmd_beta(rc: RunConfig, args: argparse.Namespace) -> int:
    flux, cfg, freq = build_model(rc)
    out = _out_dir(rc)
    tail = rc.tail_tol if rc.tail_tol is not None else STUDY_TAIL_TOL
    decay = rc.decay_tol if rc.decay_tol is not None else STUDY_DECAY_TOL
    study = beta_convergence_study(
        cfg, flux, freq, list(rc.L), methods=rc.methods(), N=rc.N, tol=rc.tol,
        quadrature=rc.quad(), tail_tol=tail, decay_tol=decay,
    )
    table = out / "beta_table.csv"
    serialize.write_beta_table_csv(table, study)
    entries = [
        serialize.beta_result_dict(r)
        for (_, _), r in sorted(
            study.results.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
        )
    ]
    manifest = {
        "L_values": list(rc.L),
        "methods": [m.value for m in study.methods],
        "entries": entries,
        "failures": {
            f"{m.value},L={L}": msg for (m, L), msg in study.failures.items()
        },
        "sign_stable": study.sign_stable(),
    }
    serialize.write_manifest(out / "beta_manifest.json", manifest)
    print(table)
    if not study.results:
        print("all table entries failed", file=sys.stderr)
        for key, msg in study.failures.items():
            print(f"  {key}: {msg}", file=sys.stderr)
        return EXIT_SOLVER
    for (method, L), msg in sorted(
        study.failures.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
    ):
        print(f"entry {method.value} L={L} failed: {msg}", file=sys.stderr)
    return EXIT_OK


def cmd_scan(rc: RunConfig, args: argparse.Namespace) -> int:
    flux, cfg0, _ = build_model(rc)
    if not rc.u_minus_list:
        raise ValidationError("field 'u_minus_list': required for scan")
    out = _out_dir(rc)
    tail = rc.tail_tol if rc.tail_tol is not None else DEFAULT_TAIL_TOL
    stall_index = None
    stall_cause = None
    try:
        points = continuation_scan(
            cfg0, flux, rc.xi0, list(rc.u_minus_list), rc.L_single, rc.N,
            tol=rc.tol, tail_tol=tail, decay_tol=rc.decay_tol,
        )
    except ContinuationStalled as exc:
        points = exc.results
        stall_index = exc.index
        stall_cause = str(exc.cause)
        print(exc, file=sys.stderr)

    manifest_points = []
    for k, pt in enumerate(points):
        r = compute_beta(flux, pt.profile, pt.aux, rc.quad())
        path = out / f"point_{k:03d}.csv"
        serialize.write_point_csv(path, pt.profile, pt.aux, flux)
        manifest_points.append(
            {
                "file": path.name,
                "u_minus": pt.config.u_minus,
                "u_plus": pt.config.u_plus,
                "s": pt.config.s,
                "tau0": pt.freq.tau0,
                "xi0": pt.freq.xi0,
                "newton_iters": pt.result.bvp.newton_iters,
                "residual_norm": pt.result.bvp.residual_norm,
                "mesh_size": int(pt.result.bvp.mesh.size),
                "beta": [r.beta.real, r.beta.imag],
                "sign_re_beta": r.sign_re_beta,
                "aux_tail": pt.aux.tail_magnitudes(),
            }
        )
    manifest = {
        "L": rc.L_single,
        "N": rc.N,
        "xi0": rc.xi0,
        "u_minus_list": list(rc.u_minus_list),
        "points": manifest_points,
        "stall_index": stall_index,
        "stall_cause": stall_cause,
    }
    serialize.write_manifest(out / "scan_manifest.json", manifest)
    print(out / "scan_manifest.json")
    return EXIT_OK if stall_index is None else EXIT_SOLVER


def cmd_compare(rc: RunConfig, args: argparse.Namespace) -> int:
    flux, cfg, freq = build_model(rc)
    exact_case = (
        flux.kind is FluxKind.QUADRATIC_TRANSVERSE
        and (cfg.u_minus, cfg.u_plus, cfg.s) == (1.0, -1.0, 0.0)
        and (freq.tau0, freq.xi0) == (0.0, 1.0)
    )
    if not exact_case:
        raise ValidationError(
            "no exact solution for this configuration (needs the quadratic "
            "transverse flux, u_minus = 1, u_plus = -1, xi0 = 1)"
        )
    out = _out_dir(rc)
    grid = Grid.make(rc.L_single, rc.N)
    x = grid.x
    u_exact = -np.tanh(x / 2.0)
    w_exact = np.zeros_like(x)
    v_exact = -x / np.cosh(x / 2.0) ** 2
    h = grid.h

    rows = []
    for method in rc.methods():
        profile, aux = _solve_pair(rc, flux, cfg, freq, method, rc.L_single)
        for name, num, ref in (
            ("ubar", profile.ubar, u_exact),
            ("w", aux.w, w_exact),
            ("v", aux.v, v_exact),
        ):
            e2 = float(np.sqrt(np.sum((num - ref) ** 2)))
            rows.append((method.value, name, e2, np.sqrt(h) * e2))

    path = out / "compare.csv"
    lines = ["# type = compare", f"# L = {serialize.fmt(grid.L)}",
             f"# N = {grid.N}", "method,quantity,norm2,norm2_weighted"]
    for method, name, e2, e2w in rows:
        lines.append(f"{method},{name},{serialize.fmt(e2)},{serialize.fmt(e2w)}")
    path.write_text("\n".join(lines) + "\n")
    for method, name, e2, e2w in rows:
        print(f"{method:8s} |{name:5s}- exact|_2 = {e2:.6e}   (h-weighted {e2w:.6e})")
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shockbeta",
        description=(
            "Refined stability coefficient of planar viscous shock profiles "
            "for scalar conservation laws in two space dimensions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="compute and export the viscous profile")
    _add_common_options(p)
    p.add_argument("--exact", action="store_true",
                   help="emit the closed-form profile of the standard case")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("aux", help="compute the correction pair (w, v)")
    _add_common_options(p)
    p.set_defaults(func=cmd_aux)

    p = sub.add_parser("beta", help="stability coefficient over a list of L")
    _add_common_options(p)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("scan", help="continuation sweep over u_minus")
    _add_common_options(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("compare", help="error norms against the exact solution")
    _add_common_options(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = _load_config(args)
        return args.func(rc, args)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit status: 0 on success, 2 on invalid input, 3 when a quadrature or
series fails to converge.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import basis, diagram, difference, oscillatory, vertex
from .config import RunConfig, load_config
from .errors import OutOfRegimeError, QuadratureError, SingularPointError, ValidationError
from .greens import kernels, scans
from .serialize import dumps_csv, dumps_json, dumps_rows_json

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _site(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("a lattice site has three components")
    return vals


def _grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid is START:STOP:STEPS")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def _tabular(cfg: RunConfig, header, rows) -> str:
    return dumps_csv(header, rows) if cfg.output_format == "csv" else dumps_rows_json(header, rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_basis(args, cfg: RunConfig) -> str:
    if args.steps < 1:
        raise ValidationError("steps must be at least 1")
    ks = np.linspace(args.k_min, args.k_max, args.steps)
    f = basis.eval_zeta if args.asymptotic else basis.eval_xi
    rows = []
    for k in ks:
        v = complex(f(args.n, float(k)))
        rows.append((args.n, float(k), v.real, v.imag))
    return _tabular(cfg, ("n", "k", "re", "im"), rows)


def _grid_report(g: difference.GridFunction, limit: int) -> dict:
    v = g.values[: limit + 1]
    return {"re": v.real, "im": v.imag}


def cmd_toy(args, cfg: RunConfig) -> str:
    quad = cfg.quad()
    nmax = args.nmax if args.nmax is not None else cfg.nmax
    L = args.L
    if args.rep == "continuous":
        if args.model == "linear":
            rep = difference.perturb_linear_continuous(args.e, L, args.alpha, args.x)
        else:
            rep = difference.perturb_nonlinear_continuous(args.e, args.alpha, args.x, L)
        orders = rep.orders[: args.order + 1]
        resummed = sum(rep.unit ** j * c for j, c in enumerate(orders))
        return dumps_json(
            {
                "model": args.model,
                "rep": "continuous",
                "e": args.e,
                "x": args.x,
                "L": list(rep.L_values),
                "orders": orders,
                "divergent_flags": [None, None, {"cutoff_terms": rep.cutoff_terms, "growth_exponent": rep.growth_exponent}][
                    : args.order + 1
                ],
                "exact": rep.exact,
                "resummation_error": abs(resummed - rep.exact),
            }
        )
    if args.model == "linear":
        ser = difference.perturb_linear_discrete(args.e, args.order, nmax, quad, args.alpha)
        exact = args.alpha * basis.xi_table(nmax, args.e)
        err = np.abs(ser.resummed() - exact)[: args.show + 1]
        resum = {"per_n": err, "max": float(err.max())}
    else:
        if args.order != 2:
            raise ValidationError("the nonlinear discrete model is computed through order 2")
        ser = difference.perturb_nonlinear_discrete(args.e, nmax, quad, args.alpha)
        resum = None
    flags = []
    for f in ser.divergent_flags:
        flags.append(None if f is None else {"order": f.order, "description": f.description, "growth_exponent": f.growth_exponent})
    return dumps_json(
        {
            "model": args.model,
            "rep": "discrete",
            "e": args.e,
            "nmax": nmax,
            "shown_up_to_n": args.show,
            "orders": [_grid_report(o, args.show) for o in ser.orders],
            "divergent_flags": flags,
            "resummation_error": resum,
        }
    )


def _vertex_points(args):
    if args.grid is None:
        return [(args.p, args.q, args.k)]
    a, b, n = args.grid
    if n < 1:
        raise ValidationError("grid needs at least one step")
    return [(args.p, args.q, float(k)) for k in np.linspace(a, b, n)]


def cmd_vertex(args, cfg: RunConfig) -> str:
    header = ("p", "q", "k", "re", "im", "channel_flags")
    rows = []
    if args.mode == "distinctness":
        rep = vertex.theorem_a1_distinctness(args.m, args.p, args.q, args.N, cfg.quad())
        rows.append((args.p, args.q, "", rep.pairing.real, rep.pairing.imag, "pairing"))
        rows.append((args.p, args.q, "", rep.dirac_value.real, rep.dirac_value.imag, "dirac"))
        rows.append((args.p, args.q, "", rep.difference, 0.0, "difference"))
        return _tabular(cfg, header, rows)
    for p, q, k in _vertex_points(args):
        if args.mode == "partial":
            v = vertex.delta_sharp_partial(p, q, k, args.N)
            rows.append((p, q, k, v.real, v.imag, ""))
            continue
        dist = vertex.d_sharp(p, q, k) if args.mode == "dsharp" else vertex.sigma_N(p, q, k, args.N)
        near = dist.near_spikes()
        try:
            v = dist.smooth()
            flag = ";".join(f"near:{c}" for c in near)
        except SingularPointError:
            v = complex(float("nan"), float("nan"))
            flag = ";".join(f"singular:{c}" for c in near)
        rows.append((p, q, k, v.real, v.imag, flag))
    return _tabular(cfg, header, rows)


def cmd_series(args, cfg: RunConfig) -> str:
    if args.kind == "tail":
        res = oscillatory.tail_integral(args.k, args.N, args.max_segments)
        out = {"value_re": res.value.real, "value_im": res.value.imag, "error": res.error_estimate, "converged": res.converged}
        try:
            asy = oscillatory.tail_asymptotic(args.k, args.N)
            out["asymptotic"] = {"smooth": asy.smooth, "spike_weight": asy.spike_weight, "spike": asy.spike_tag}
        except OutOfRegimeError as exc:
            out["asymptotic"] = {"out_of_regime": str(exc)}
        if not res.converged:
            raise QuadratureError(f"tail integral did not converge (error {res.error_estimate:.3g})")
        return dumps_json(out)
    fn = oscillatory.segment_sum_sin if args.kind == "sin" else oscillatory.segment_sum_exp
    r = fn(args.k, args.beta, args.max_segments)
    if not r.converged:
        raise QuadratureError(f"segment sum did not converge in {args.max_segments} segments")
    out = {
        "value_re": r.accumulated.real,
        "value_im": r.accumulated.imag,
        "error": r.error_estimate,
        "segments_used": r.segments_used,
        "alternation_verified": r.alternation_verified,
    }
    if r.spike is not None:
        out["spikes"] = r.spike.spike_inventory()
    return dumps_json(out)


def cmd_diagram(args, cfg: RunConfig) -> str:
    header = ("E_F", "E_B", "j", "I_F", "I_B", "kappa", "kappa_hat", "verdict")
    if args.enumerate:
        rows = []
        for spec in diagram.enumerate_feasible(args.max_j):
            r = diagram.classify(spec)
            rows.append((r.E_F, r.E_B, r.j, r.I_F, r.I_B, r.kappa, r.kappa_hat, r.verdict))
        return _tabular(cfg, header, rows)
    if args.ef is None or args.eb is None or args.j is None:
        raise ValidationError("diagram needs --ef, --eb and --j (or --enumerate)")
    spec = diagram.DiagramSpec(args.ef, args.eb, args.j, args.loops, args.sigma, args.charge)
    r = diagram.classify(spec)
    row = (r.E_F, r.E_B, r.j, r.I_F, r.I_B, r.kappa, r.kappa_hat, r.verdict, diagram.prefactor(spec))
    return _tabular(cfg, header + ("prefactor",), [row])


def _scan_report(s: scans.CutoffScan) -> dict:
    return {
        "label": s.label,
        "lambdas": s.lambdas,
        "values": s.values,
        "fit": s.fit,
        "symbolic_tags": list(s.tags),
        "components": s.components,
    }


def cmd_greens(args, cfg: RunConfig) -> str:
    quad = cfg.quad()
    if args.kind == "potential":
        r = kernels.potential_greens(args.n, args.n_hat or args.n, quad)
        return dumps_json({"kind": "potential", "n": args.n, "n_hat": args.n_hat or args.n, "result": r.require_converged()})
    if args.kind == "kg":
        r = kernels.kg_coincidence_spatial(args.n, args.mu, quad)
        return dumps_json({"kind": "kg", "n": args.n, "mu": args.mu, "result": r.require_converged()})
    if args.kind == "dplus":
        n_hat = args.n_hat or args.n
        r = kernels.dplus_direct(args.n, n_hat, args.tau, quad).require_converged()
        out = {"kind": "dplus", "n": args.n, "n_hat": n_hat, "tau": args.tau, "direct": r}
        try:
            out["series"] = kernels.dplus_series_term(args.n, n_hat, args.tau)
        except OutOfRegimeError as exc:
            out["series"] = {"out_of_regime": str(exc)}
        return dumps_json(out)
    lam = args.lambdas or list(scans.DEFAULT_LAMBDAS)
    if args.kind == "scanA":
        out = {"kind": "scanA", "scan": _scan_report(scans.cutoff_scan_A(args.mass, lam))}
        if args.deep:
            out["deep"] = [_scan_report(scans.cutoff_scan_channels(ax, args.mass, lam, seed=cfg.seed)) for ax in (1, 2, 3)]
    else:
        out = {"kind": "scanPhoton", "scan": _scan_report(scans.cutoff_scan_continuous_photon(args.mass, lam))}
    return dumps_json(out)


def cmd_repro(args, cfg: RunConfig) -> str:
    from .repro import CRITERIA, write_tables

    if args.all:
        nums = sorted(CRITERIA)
    elif args.criterion is not None:
        if args.criterion not in CRITERIA:
            raise ValidationError(f"criterion must be one of {sorted(CRITERIA)}")
        nums = [args.criterion]
    else:
        raise ValidationError("repro needs --all or --criterion N")
    out_dir = Path(args.out) if args.out else Path("out")
    paths = write_tables(out_dir, nums, cfg.quad(), cfg.seed, args.deep)
    return "".join(f"{p}\n" for p in paths)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="key = value configuration file")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS, help="tabular output format")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (directory for repro)")

    parser = argparse.ArgumentParser(prog="dpsqed", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", parents=[common], help="tabulate basis functions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-min", type=float, default=-5.0)
    p.add_argument("--k-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--asymptotic", action="store_true", help="large-n counterpart instead of the exact basis")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("toy", parents=[common], help="toy-model perturbation series")
    p.add_argument("--model", choices=("linear", "nonlinear"), default="linear")
    p.add_argument("--rep", choices=("continuous", "discrete"), default="discrete")
    p.add_argument("--e", type=float, default=0.1)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--x", type=float, default=0.5)
    p.add_argument("--L", type=_floats, default=[10.0, 100.0, 1000.0])
    p.add_argument("--show", type=int, default=10, help="largest n printed for discrete orders")
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("vertex", parents=[common], help="vertex distribution")
    p.add_argument("--mode", choices=("partial", "dsharp", "sigma", "distinctness"), default="partial")
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--k", type=float, default=0.0)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--grid", type=_grid, default=None, help="sweep k over START:STOP:STEPS")
    p.set_defaults(func=cmd_vertex)

    p = sub.add_parser("series", parents=[common], help="oscillatory integrals")
    p.add_argument("--kind", choices=("sin", "exp", "tail"), default="sin")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--N", type=float, default=100.0)
    p.add_argument("--max-segments", type=int, default=oscillatory.DEFAULT_MAX_SEGMENTS)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("diagram", parents=[common], help="power counting")
    p.add_argument("--ef", type=int)
    p.add_argument("--eb", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--loops", type=int, default=0)
    p.add_argument("--sigma", type=int, default=1)
    p.add_argument("--charge", type=Fraction, default=Fraction(-1))
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--max-j", type=int, default=6)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("greens", parents=[common], help="Green's functions and cutoff scans")
    p.add_argument("--kind", choices=("potential", "kg", "dplus", "scanA", "scanPhoton"), default="potential")
    p.add_argument("--n", type=_site, default=(0, 0, 0))
    p.add_argument("--n-hat", type=_site, default=None)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--lambdas", type=_floats, default=None)
    p.add_argument("--deep", action="store_true", help="add the channel-weighted Monte Carlo scans")
    p.set_defaults(func=cmd_greens)

    p = sub.add_parser("repro", parents=[common], help="regenerate acceptance tables")
    p.add_argument("--all", action="store_true")
    p.add_argument("--criterion", type=int, default=None)
    p.add_argument("--deep", action="store_true")
    p.set_defaults(func=cmd_repro)
    return parser


def dispatch(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(getattr(args, "config", None))
        cfg = cfg.merged(output_format=getattr(args, "format", None))
        out = args.func(args, cfg)
    except QuadratureError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NONCONVERGED
    except (ValidationError, OutOfRegimeError, SingularPointError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    target = getattr(args, "out", None)
    if target and args.command != "repro":
        Path(target).write_text(out)
    else:
        stdout.write(out)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()

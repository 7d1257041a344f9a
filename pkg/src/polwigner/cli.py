"""Command-line front end: ``polwigner {figure,verify,stokes,grid}``.

Defaults may come from a key=value config file (``--config`` or the
``POLWIGNER_CONFIG`` environment variable); output files without an explicit
``--out`` go to ``POLWIGNER_OUTDIR`` (or the ``outdir`` config key, or the
current directory). Command-line flags override both.

Exit codes: 0 success, 1 usage, 2 I/O, 3 verification bound failed,
4 truncation failure.
"""

import argparse
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import output
from .config import TOL, TruncationError
from .kernel import PolarizationIndex
from .oracle import DEFAULT_SEED, compare_closed_form, convergence_scan, ecs_setup, random_points
from .states import ModePair, cat_factor, criterion_residual, even_ecs, polarization_index, stokes_closed
from .wigner import WignerParams, count_in_domain, find_peaks, sample_grid

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_BOUND, EXIT_TRUNC = 0, 1, 2, 3, 4
ENV_OUTDIR = "POLWIGNER_OUTDIR"
ENV_CONFIG = "POLWIGNER_CONFIG"

BUILTIN = {"res": 64, "dim": 32, "seed": DEFAULT_SEED, "points": 100, "format": "csv",
           "outdir": ".", "beta": "0.7", "gamma": "0.7", "sweep": "0:5:26"}


@dataclass(frozen=True)
class FigurePreset:
    id: str
    phi_beta: float
    delta_HS: float
    m: int
    l: int
    alpha_mod: float = 0.8
    beta_mod: float = 0.7

    def params(self):
        return WignerParams.from_delta_hs(self.beta_mod, self.phi_beta, self.delta_HS, self.l)

    def grid(self, res=64):
        extra = {"preset": self.id, "delta_HS": self.delta_HS, "phi_beta": self.phi_beta}
        return sample_grid(self.params(), ("delta", "phi_x"), res, alpha_mod=self.alpha_mod,
                           m=self.m, l=self.l, evaluator="poincare", extra=extra)


PI = math.pi
PRESETS = {
    "1a": FigurePreset("1a", 0.0, 0.0, 1, 0),
    "1b": FigurePreset("1b", PI / 6, PI / 6, 1, 0),
    "1c": FigurePreset("1c", PI / 2, PI / 2, 1, 0),
    "1d": FigurePreset("1d", PI / 2, PI, 1, 0),
    "1e": FigurePreset("1e", PI, 0.0, 1, 0),
    "1f": FigurePreset("1f", PI / 6, PI / 2, 1, 1),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_config(path):
    """Read a key=value file; blank lines and '#' comments are ignored."""
    cfg = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            cfg[key.replace("-", "_")] = val
    return cfg


def parse_complex(text):
    """'0.7', '0.5+0.2j' or polar 'r@phase' (radians)."""
    text = str(text).strip()
    try:
        if "@" in text:
            r, ph = text.split("@", 1)
            return float(r) * complex(math.cos(float(ph)), math.sin(float(ph)))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _sweep(text):
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise UsageError(f"sweep must be start:stop:count, got {text!r}") from None
    if count < 2 or stop <= start or start < 0:
        raise UsageError(f"bad sweep {text!r}")
    return [start + (stop - start) * i / (count - 1) for i in range(count)]


def _write(text, out, default_name, outdir):
    if out == "-":
        sys.stdout.write(text)
        return "-"
    path = out or os.path.join(outdir, default_name)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _emit_grid(grid, fmt, peaks=None):
    if fmt == "csv":
        return output.grid_to_csv(grid)
    if fmt == "json":
        return output.grid_to_json(grid, peaks)
    if fmt == "svg":
        return output.grid_to_svg(grid)
    raise UsageError(f"unknown format {fmt!r}")


def cmd_figure(args):
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
    grid = PRESETS[args.preset].grid(int(args.res))
    if not grid.all_positive():
        raise ArithmeticError("non-positive Wigner value on the figure grid")
    peaks = find_peaks(grid)
    text = _emit_grid(grid, args.format, peaks)
    path = _write(text, args.out, f"figure_{args.preset}.{args.format}", args.outdir)
    print(f"figure {args.preset}: {len(peaks)} peaks, {count_in_domain(peaks)} in "
          f"[0,2pi)x[0,pi) -> {path}", file=sys.stderr)
    return EXIT_OK


def _verify_report(dim, npoints, seed, beta_mod):
    rng = np.random.default_rng(seed)
    beta_phase, phs_phase = (float(x) for x in rng.uniform(0, 2 * math.pi, size=2))
    params = WignerParams(beta_mod, beta_phase, 1.0, 1.0, phs_phase)
    points = random_points(npoints, seed=seed + 1)
    check_dims = (dim - 8, dim, dim + 8) if dim > 10 else None
    cmp = compare_closed_form(params, points, dim, check_dims=check_dims, seed=seed)

    modes = params.modes(0)
    p2 = polarization_index(modes, 2)
    res_dims = sorted({max(dim // 2, 2), max(3 * dim // 4, 2), dim})
    residuals = {d: criterion_residual(even_ecs(modes, d), 2, p2, d) for d in res_dims}
    scan = convergence_scan(ecs_setup(modes, 2, 0.8 * np.exp(0.3j), PolarizationIndex(2, 1.0)),
                            res_dims) if len(res_dims) >= 3 else None
    r = [residuals[d] for d in res_dims]
    checks = [
        {"name": "oracle_max_rel_error", "value": cmp.max_rel_error, "bound": 1e-6,
         "passed": cmp.max_rel_error < 1e-6},
        {"name": "oracle_truncation_converged", "value": cmp.converged, "bound": TOL.converge,
         "passed": bool(cmp.converged) and check_dims is not None},
        {"name": "criterion_residual", "value": r[-1], "bound": 1e-8, "passed": r[-1] < 1e-8},
        {"name": "criterion_monotone", "value": r, "bound": None,
         "passed": all(b < a for a, b in zip(r, r[1:]))},
        {"name": "truncation_scan", "value": None if scan is None else scan.max_rel_error,
         "bound": TOL.converge, "passed": scan is not None and scan.converged},
    ]
    return {
        "dim": dim, "points": npoints, "seed": seed,
        "params": asdict(params),
        "comparison": cmp.to_dict() | {"values": None},
        "criterion_residuals": {str(d): v for d, v in residuals.items()},
        "convergence_scan": None if scan is None else scan.to_dict(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def cmd_verify(args):
    dim, npoints, seed = int(args.dim), int(args.points), int(args.seed)
    if npoints < 1:
        raise UsageError("--points must be >= 1")
    if dim < 2:
        raise UsageError("--dim must be >= 2")
    try:
        report = _verify_report(dim, npoints, seed, float(args.beta_mod))
    except TruncationError as exc:
        print(f"verify failed: truncation: {exc}", file=sys.stderr)
        text = output.dumps({"dim": dim, "points": npoints, "seed": seed, "passed": False,
                             "failed": ["truncation"], "error": str(exc)})
        _write(text, args.out, "verify.json", args.outdir)
        return EXIT_TRUNC
    report["failed"] = [c["name"] for c in report["checks"] if not c["passed"]]
    path = _write(output.dumps(report), args.out, "verify.json", args.outdir)
    if report["passed"]:
        print(f"verify passed: max rel error {report['comparison']['max_rel_error']:.3g} -> {path}",
              file=sys.stderr)
        return EXIT_OK
    names = ", ".join(report["failed"])
    if any(n in ("oracle_truncation_converged", "truncation_scan") for n in report["failed"]):
        print(f"verify failed: truncation ({names})", file=sys.stderr)
        return EXIT_TRUNC
    print(f"verify failed: {names}", file=sys.stderr)
    return EXIT_BOUND


def stokes_table(beta, gamma, scales):
    scales = sorted(set(scales) | {0.0})
    rows = []
    for t in scales:
        modes = ModePair(t * beta, t * gamma)
        sv = stokes_closed(modes)
        rows.append({"scale": t, "beta_mod": abs(modes.beta), "gamma_mod": abs(modes.gamma),
                     "j_sum": modes.j_sum(), "s0": sv.s0, "s1": sv.s1, "s2": sv.s2, "s3": sv.s3,
                     "cat_factor": cat_factor(modes.j_sum()), "regime": ""})
    rows[0]["regime"] = "few-photon"
    rows[-1]["regime"] = "intense"
    return rows


STOKES_COLUMNS = ["scale", "beta_mod", "gamma_mod", "j_sum", "s0", "s1", "s2", "s3", "cat_factor", "regime"]


def cmd_stokes(args):
    beta, gamma = parse_complex(args.beta), parse_complex(args.gamma)
    rows = stokes_table(beta, gamma, _sweep(args.sweep))
    meta = {"beta": output.fmt(beta), "gamma": output.fmt(gamma), "sweep": args.sweep,
            "state": "even entangled coherent state"}
    text = output.table_to_csv(STOKES_COLUMNS, rows, meta)
    _write(text, args.out, "stokes.csv", args.outdir)
    return EXIT_OK


def cmd_grid(args):
    axes = tuple(a.strip() for a in args.axes.split(","))
    params = WignerParams(float(args.beta_mod), float(args.beta_phase), float(args.p2_mod),
                          float(args.phs_mod), float(args.phs_phase))
    evaluator = args.evaluator
    if evaluator == "auto":
        evaluator = "poincare" if params.p2_mod == 1 and params.pHS_mod == 1 else "closed"
    try:
        grid = sample_grid(params, axes, int(args.res), alpha_mod=float(args.alpha_mod),
                           phi_x=float(args.phi_x), delta=float(args.delta), m=args.m, l=args.l,
                           k=args.k, evaluator=evaluator, order=int(args.order))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not grid.all_positive():
        raise ArithmeticError("non-positive Wigner value on the grid")
    text = _emit_grid(grid, args.format)
    _write(text, args.out, f"grid_order{args.order}.{args.format}", args.outdir)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="polwigner", description=__doc__.split("\n")[0])
    p.add_argument("--config", help="key=value defaults file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--out", help="output path ('-' for stdout)")
        if fmt:
            sp.add_argument("--format", choices=["csv", "json", "svg"])

    f = sub.add_parser("figure", help="grid for one of the six figure presets")
    f.add_argument("preset")
    f.add_argument("--res", type=int)
    common(f)
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("verify", help="closed forms against the brute-force oracle")
    v.add_argument("--dim", type=int)
    v.add_argument("--points", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--beta-mod", type=float, default=0.7)
    common(v, fmt=False)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stokes", help="Stokes parameters of the even entangled coherent state")
    s.add_argument("--beta")
    s.add_argument("--gamma")
    s.add_argument("--sweep", help="amplitude scale start:stop:count")
    common(s, fmt=False)
    s.set_defaults(func=cmd_stokes)

    g = sub.add_parser("grid", help="grid for arbitrary parameters")
    g.add_argument("--order", type=int, choices=[2, 3], default=2)
    g.add_argument("--axes", default="delta,phi_x")
    g.add_argument("--res", type=int)
    g.add_argument("--evaluator", choices=["auto", "poincare", "closed"], default="auto",
                   help="auto: unit-sphere form when both index moduli are 1")
    for name, default in (("beta-mod", 0.7), ("beta-phase", 0.0), ("p2-mod", 1.0), ("phs-mod", 1.0),
                          ("phs-phase", 0.0), ("alpha-mod", 0.8), ("phi-x", 0.0), ("delta", 0.0)):
        g.add_argument(f"--{name}", type=float, default=default)
    for name in ("m", "l", "k"):
        g.add_argument(f"--{name}", type=int, choices=[0, 1], default=None if name == "k" else 0)
    common(g)
    g.set_defaults(func=cmd_grid)
    return p


def _resolve(args):
    cfg = {}
    path = args.config or os.environ.get(ENV_CONFIG)
    if path:
        try:
            cfg = load_config(path)
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
    env_out = os.environ.get(ENV_OUTDIR)
    for key, default in BUILTIN.items():
        if getattr(args, key, None) is None:
            if key == "outdir" and env_out:
                value = env_out
            else:
                value = cfg.get(key, default)
            setattr(args, key, value)
    if getattr(args, "format", None) not in (None, "csv", "json", "svg"):
        raise UsageError(f"unknown format {args.format!r}")
    return args


def main(argv=None):
    parser = build_parser()
    try:
        args = _resolve(parser.parse_args(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArithmeticError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: evaluation tables, figure data, precision study, self-check.

Exit codes: 0 ok, 1 invariant failure, 2 usage, 3 tolerance, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction as Q

import mpmath

from . import asymptotics, oracle
from .hyperf import expr_eval
from .kernels import Case, build_bank, correlation, density, kernel
from .numeric import DomainError, InvalidParams, NumericError, PrecisionContext, ToleranceNotMet

log = logging.getLogger("pearcey_kernels")

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_TOLERANCE, EXIT_IO = 0, 1, 2, 3, 4

FUNCTIONS = ("phi", "psi", "kernel", "density", "correlation")
METHODS = ("exact", "quadrature", "mellin-barnes", "asymptotic-large", "asymptotic-small")

# (xmin, xmax, step) per figure when the grid is not overridden
FIGURE_GRIDS = {i: ("0", "10", "0.01") for i in (1, 2, 3, 4, 6, 7)}
FIGURE_GRIDS[5] = ("0", "50", "0.05")
FIGURE_GRIDS[8] = FIGURE_GRIDS[9] = ("0", "20", "0.02")
FIGURE3_SECTIONS = (Q(1, 2), Q(1), Q(3, 2), Q(2), Q(5, 2))
PRECISION_STUDY_Y0 = {8: Q(1, 6), 9: Q(6)}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    case: str = "quartic"
    function: str = "phi"
    xmin: Q = Q(0)
    xmax: Q = Q(0)
    step: Q = Q(1)
    precision_digits: int = 30
    methods: tuple = ("exact",)
    output_path: str = "-"
    y: Q | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.case not in (c.value for c in Case):
            raise ConfigError(f"unknown case {self.case!r}")
        if self.function not in FUNCTIONS:
            raise ConfigError(f"unknown function {self.function!r}")
        if self.xmin > self.xmax:
            raise ConfigError("xmin must not exceed xmax")
        if self.step <= 0:
            raise ConfigError("step must be positive")
        if self.precision_digits < 1:
            raise ConfigError("digits must be a positive integer")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}")
            if (self.case, self.function, m) not in _SUPPORTED:
                raise ConfigError(f"method {m} is not available for {self.case} {self.function}")
        if self.function == "kernel" and self.y is None:
            raise ConfigError("kernel needs --y")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    @property
    def grid(self) -> list:
        return make_grid(self.xmin, self.xmax, self.step)

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.precision_digits)


def make_grid(xmin, xmax, step) -> list:
    n = int((xmax - xmin) / step)
    return [xmin + i * step for i in range(n + 1)]


def parse_number(text) -> Q:
    if isinstance(text, Q):
        return text
    try:
        return Q(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def read_config_file(path) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


# -- per-point evaluators ---------------------------------------------------

def _quad(case, function):
    table = {("quartic", "phi"): oracle.quad_phi4, ("quartic", "psi"): oracle.quad_psi4,
             ("sextic", "phi"): oracle.quad_phi6, ("sextic", "psi"): oracle.quad_psi6}
    return table[(case, function)]


def _exact(case, function, x, y, ctx):
    bank = build_bank(case)
    if function in ("phi", "psi"):
        r = expr_eval(bank.phi if function == "phi" else bank.psi, x, ctx)
        return r.value, r.abs_error_estimate
    if function == "kernel":
        k = kernel(bank, x, y, ctx)
        return k.value, k.error_estimate
    r = (density if function == "density" else correlation)(bank, x, ctx)
    return r.value, r.abs_error_estimate


def _asymptotic(case, function, method, x, ctx):
    if method == "asymptotic-large":
        if function == "density":
            return asymptotics.density_asym_leading(case, x, ctx)
        fn = {("quartic", "phi"): asymptotics.phi4_asym_large, ("quartic", "psi"): asymptotics.psi4_asym_large,
              ("sextic", "phi"): asymptotics.phi6_asym_large, ("sextic", "psi"): asymptotics.psi6_asym_large}
        return fn[(case, function)](x, ctx).value
    if function == "phi":
        return asymptotics.phi6_small(x, 30, ctx)
    return asymptotics.psi6_small(x, ctx)


def evaluate_point(case, function, method, x, y, ctx):
    """(value, error) for one grid point.

    Asymptotic methods carry no intrinsic error estimate; their error column
    is the deviation from the exact value.
    """
    if method == "exact":
        return _exact(case, function, x, y, ctx)
    if method == "quadrature":
        r = _quad(case, function)(x, ctx)
        return r.value, r.abs_error_estimate
    if method == "mellin-barnes":
        r = (oracle.mb_phi4 if case == "quartic" else oracle.mb_phi6)(x, ctx)
        return r.value, r.abs_error_estimate
    val = _asymptotic(case, function, method, x, ctx)
    ref, _ = _exact(case, function, x, y, ctx)
    with mpmath.workdps(ctx.working_digits):
        return val, abs(val - ref)


_SUPPORTED = set()
for _c in ("quartic", "sextic"):
    for _f in FUNCTIONS:
        _SUPPORTED.add((_c, _f, "exact"))
    for _f in ("phi", "psi"):
        _SUPPORTED.add((_c, _f, "quadrature"))
        _SUPPORTED.add((_c, _f, "asymptotic-large"))
    _SUPPORTED.add((_c, "phi", "mellin-barnes"))
    _SUPPORTED.add((_c, "density", "asymptotic-large"))
_SUPPORTED.add(("sextic", "phi", "asymptotic-small"))
_SUPPORTED.add(("sextic", "psi", "asymptotic-small"))


def _row_task(args):
    cfg, x = args
    out = []
    for m in cfg.methods:
        out.extend(evaluate_point(cfg.case, cfg.function, m, x, cfg.y, cfg.ctx))
    return out


def _map_points(fn, items, jobs: int) -> list:
    """Evaluate in order; with jobs > 1 points run in worker processes (mpmath state is per process)."""
    if jobs <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# -- CSV --------------------------------------------------------------------

def fmt(v, digits: int) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(v), digits)


def fmt_x(x) -> str:
    return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 15) if isinstance(x, Q) else str(x)


def render_csv(header, xs, rows, digits: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for x, vals in zip(xs, rows):
        w.writerow([fmt_x(x)] + [fmt(v, digits) for v in vals])
    return buf.getvalue()


def value_columns(names) -> list:
    out = ["x"]
    for n in names:
        out += [n, n + "_err"]
    return out


def write_output(text: str, path: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- commands ---------------------------------------------------------------

def cmd_eval(config: RunConfig) -> int:
    xs = config.grid
    rows = _map_points(_row_task, [(config, x) for x in xs], config.jobs)
    names = [f"{m.replace('-', '_')}_{config.function}" for m in config.methods]
    write_output(render_csv(value_columns(names), xs, rows, config.precision_digits), config.output_path)
    return EXIT_OK


def _figure_task(args):
    fig, x, digits = args
    ctx = PrecisionContext(digits)
    q, s = build_bank("quartic"), build_bank("sextic")
    vals = []

    def add(r):
        vals.extend((r.value, r.abs_error_estimate))

    if fig == 1:
        add(expr_eval(q.phi, x, ctx))
        add(expr_eval(s.phi, x, ctx))
    elif fig == 2:
        add(expr_eval(q.psi, x, ctx))
        add(expr_eval(s.psi, x, ctx))
    elif fig == 3:
        for y0 in FIGURE3_SECTIONS:
            k = kernel(q, x, y0, ctx)
            vals.extend((k.value, k.error_estimate))
    elif fig in (4, 5):
        add(density(q, x, ctx))
        add(density(s, x, ctx))
        if fig == 5:
            for case in (Case.QUARTIC, Case.SEXTIC):
                vals.extend((asymptotics.density_asym_leading(case, x, ctx), 0))
    elif fig in (6, 7):
        r = correlation(q if fig == 6 else s, x, ctx)
        with mpmath.workdps(ctx.working_digits):
            vals.extend((-r.value, r.abs_error_estimate))
    return vals


def figure_header(fig: int, p_values=(10, 15)) -> list:
    names = {
        1: ["exact_phihat", "exact_phi"],
        2: ["exact_psihat", "exact_psi"],
        3: [f"exact_khat_y{float(y):g}" for y in FIGURE3_SECTIONS],
        4: ["exact_rhohat", "exact_rho"],
        5: ["exact_rhohat", "exact_rho", "leading_rhohat", "leading_rho"],
        6: ["exact_neg_rhohat_c"],
        7: ["exact_neg_rho_c"],
    }
    if fig in names:
        return value_columns(names[fig])
    return precision_header(p_values)


def cmd_figure(fig: int, output_path: str = "-", digits: int = 30, grid=None, jobs: int = 1) -> int:
    if fig not in range(1, 10):
        raise ConfigError(f"figure id must be 1..9, got {fig}")
    xmin, xmax, step = grid or tuple(parse_number(v) for v in FIGURE_GRIDS[fig])
    if fig in PRECISION_STUDY_Y0:
        return cmd_precision_study(PRECISION_STUDY_Y0[fig], (10, 15), (xmin, xmax, step), output_path,
                                   digits=digits, jobs=jobs)
    if step <= 0 or xmin > xmax:
        raise ConfigError("invalid grid")
    xs = make_grid(xmin, xmax, step)
    rows = _map_points(_figure_task, [(fig, x, digits) for x in xs], jobs)
    write_output(render_csv(figure_header(fig), xs, rows, digits), output_path)
    return EXIT_OK


def precision_header(p_values) -> list:
    cols = ["x", "reference_khat", "reference_khat_err"]
    for p in p_values:
        cols += [f"p{p}_khat", f"p{p}_khat_err", f"p{p}_khat_dev"]
    return cols


def _precision_task(args):
    x, y0, p_values, digits = args
    bank = build_bank("quartic")
    ref = kernel(bank, x, y0, PrecisionContext(digits))
    vals = [ref.value, ref.error_estimate]
    for p in p_values:
        k = kernel(bank, x, y0, PrecisionContext.capped(p))
        with mpmath.workdps(digits + 10):
            dev = abs(k.value - ref.value)
        vals += [k.value, k.error_estimate, dev]
    return vals


def agreement_range(xs, devs, threshold):
    """Longest run of grid points from the first one with deviation <= threshold, as (lo, hi) or None."""
    hi = None
    for x, d in zip(xs, devs):
        if d > threshold:
            break
        hi = x
    return None if hi is None else (xs[0], hi)


def precision_study(y0, p_values, grid, digits: int = 30, jobs: int = 1):
    """Rows of reference vs capped-precision K-hat(x, y0) and the per-p agreement ranges at 1e-4."""
    xmin, xmax, step = grid
    if step <= 0 or xmin > xmax:
        raise ConfigError("invalid grid")
    p_values = tuple(int(p) for p in p_values)
    if not p_values or min(p_values) < 1:
        raise ConfigError("p values must be positive integers")
    xs = make_grid(xmin, xmax, step)
    rows = _map_points(_precision_task, [(x, y0, p_values, digits) for x in xs], jobs)
    ranges = {}
    for i, p in enumerate(p_values):
        devs = [r[2 + 3 * i + 2] for r in rows]
        ranges[p] = agreement_range(xs, devs, mpmath.mpf("1e-4"))
    return xs, rows, ranges


def cmd_precision_study(y0, p_values, grid, output_path: str = "-", digits: int = 30, jobs: int = 1) -> int:
    xs, rows, ranges = precision_study(parse_number(y0), p_values, grid, digits, jobs)
    for p, r in ranges.items():
        span = "empty" if r is None else f"[{float(r[0]):g}, {float(r[1]):g}]"
        log.info("p=%d agrees with the reference to 1e-4 on %s", p, span)
    write_output(render_csv(precision_header(ranges), xs, rows, digits), output_path)
    return EXIT_OK


def cmd_selfcheck(stream=None) -> int:
    from .selfcheck import run_invariants

    stream = stream or sys.stdout
    failed = 0
    for name, ok, detail in run_invariants():
        stream.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        failed += not ok
    stream.write(f"{failed} invariant(s) failed\n" if failed else "all invariants passed\n")
    return EXIT_INVARIANT if failed else EXIT_OK


# -- argument handling ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="significant digits (default 30)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output CSV path ('-' for stdout)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value file; flags override it")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--xmin", default=argparse.SUPPRESS)
    grid.add_argument("--xmax", default=argparse.SUPPRESS)
    grid.add_argument("--step", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="pearcey", parents=[common],
                                     description="Exact quartic and sextic kernels, densities and correlators.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common, grid], help="tabulate a function on a grid")
    ev.add_argument("case", nargs="?", default=None, choices=[c.value for c in Case])
    ev.add_argument("function", nargs="?", default=None, choices=FUNCTIONS)
    ev.add_argument("--x", default=argparse.SUPPRESS, help="single point (sets xmin = xmax)")
    ev.add_argument("--y", default=argparse.SUPPRESS, help="second kernel argument")
    ev.add_argument("--methods", default=argparse.SUPPRESS, help="comma-separated: " + ",".join(METHODS))

    fig = sub.add_parser("figure", parents=[common, grid], help="tabulate figure data set 1 to 9")
    fig.add_argument("id", type=int)

    ps = sub.add_parser("precision-study", parents=[common, grid], help="capped vs adaptive precision")
    ps.add_argument("--y0", default=argparse.SUPPRESS)
    ps.add_argument("--p", nargs="+", type=int, default=argparse.SUPPRESS, dest="p_values")

    sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    return parser


def _merged(ns: argparse.Namespace) -> dict:
    opts = {}
    if hasattr(ns, "config"):
        opts.update(read_config_file(ns.config))
    opts.update({k: v for k, v in vars(ns).items() if k != "config" and v is not None})
    return opts


def _grid_from(opts, default):
    if "x" in opts:
        x = parse_number(opts["x"])
        return x, x, Q(1)
    vals = [opts.get(k, d) for k, d in zip(("xmin", "xmax", "step"), default)]
    return tuple(parse_number(v) for v in vals)


def _config_from(opts) -> RunConfig:
    xmin, xmax, step = _grid_from(opts, ("0", "0", "1"))
    methods = opts.get("methods", "exact")
    if isinstance(methods, str):
        methods = tuple(m.strip() for m in methods.split(",") if m.strip())
    y = opts.get("y")
    return RunConfig(case=opts.get("case", "quartic"), function=opts.get("function", "phi"),
                     xmin=xmin, xmax=xmax, step=step, precision_digits=int(opts.get("digits", 30)),
                     methods=tuple(methods), output_path=opts.get("out", "-"),
                     y=None if y is None else parse_number(y), jobs=int(opts.get("jobs", 1)))


def _dispatch(opts) -> int:
    cmd = opts["command"]
    digits = int(opts.get("digits", 30))
    jobs = int(opts.get("jobs", 1))
    if digits < 1 or jobs < 1:
        raise ConfigError("digits and jobs must be positive")
    out = opts.get("out", "-")
    if cmd == "eval":
        return cmd_eval(_config_from(opts))
    if cmd == "figure":
        fig = int(opts["id"])
        if fig not in range(1, 10):
            raise ConfigError(f"figure id must be 1..9, got {fig}")
        grid = None
        if any(k in opts for k in ("xmin", "xmax", "step")):
            grid = _grid_from(opts, FIGURE_GRIDS[fig])
        return cmd_figure(fig, out, digits, grid, jobs)
    if cmd == "precision-study":
        p_values = opts.get("p_values", (10, 15))
        if isinstance(p_values, str):
            p_values = [int(p) for p in p_values.replace(",", " ").split()]
        grid = _grid_from(opts, FIGURE_GRIDS[8])
        return cmd_precision_study(opts.get("y0", "1/6"), p_values, grid, out, digits, jobs)
    return cmd_selfcheck()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if getattr(ns, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return _dispatch(_merged(ns))
    except (ConfigError, InvalidParams, DomainError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except ToleranceNotMet as exc:
        log.error("tolerance not met: %s", exc)
        return EXIT_TOLERANCE
    except NumericError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_TOLERANCE
    except OSError as exc:
        log.error("cannot write output: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

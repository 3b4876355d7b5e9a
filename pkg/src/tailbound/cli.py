"""Command-line front end: evaluate bounds, sweep grids, emit comparison
tables, exercise the extremal construction, and run the validation suites.

All numeric output is CSV on stdout (header row, scientific notation,
12 significant digits by default); diagnostics go to stderr.  Output is
deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import bounds as bd
from .distributions import BoundParams, TwoPointRV
from .errors import DomainError, TailboundError
from .oracle import (TestFunction, enumerate_expectation, extremal_sum_spec,
                     hp_counterexample_gap, mc_expectation, mc_tail,
                     mixture_expectation_f, random_sum_spec)
from .posmoments import PosMomentMethod, pos_moment
from .special import DEFAULT_TOL, Tolerance, normal_tail

__all__ = ["run", "main"]

_BOUNDS = ("bh", "pu", "be", "pin", "ca", "en", "ea", "lc3")
# flags each bound actually consumes, beyond --x
_NEEDS = {
    "bh": ("sigma", "y"),
    "pu": ("sigma", "y", "eps"),
    "be": ("sigma", "y"),
    "pin": ("sigma", "y", "eps"),
    "lc3": ("sigma", "y", "eps"),
    "ca": ("sigma",),
    "en": ("sigma",),
    "ea": (),
}


def main() -> None:
    sys.exit(run(sys.argv[1:]))


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        tol = _tol_from_env()
        return args.func(args, tol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TailboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _tol_from_env() -> Tolerance:
    raw = os.environ.get("TAILBOUND_TOL_REL")
    if raw is None:
        return DEFAULT_TOL
    try:
        rel = float(raw)
    except ValueError as exc:
        raise DomainError(f"TAILBOUND_TOL_REL is not a number: {raw!r}") from exc
    return Tolerance(rel=rel, abs=DEFAULT_TOL.abs, max_iter=DEFAULT_TOL.max_iter)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailbound",
        description="Sharp tail bounds for sums of bounded random variables.")
    sub = parser.add_subparsers(dest="command")
    parser.set_defaults(command=None)

    def add_budgets(p: argparse.ArgumentParser, with_eps: bool = True) -> None:
        p.add_argument("--sigma", type=float, default=None)
        p.add_argument("--y", type=float, default=None)
        if with_eps:
            p.add_argument("--eps", type=float, default=None)

    p_eval = sub.add_parser("eval", help="evaluate one bound at one point")
    p_eval.add_argument("--bound", required=True, choices=_BOUNDS)
    add_budgets(p_eval)
    p_eval.add_argument("--x", type=float, required=True)
    p_eval.add_argument("--digits", type=int, default=12)
    p_eval.set_defaults(func=_cmd_eval)

    p_sweep = sub.add_parser("sweep", help="evaluate one bound over an x grid")
    p_sweep.add_argument("--bound", required=True, choices=_BOUNDS)
    add_budgets(p_sweep)
    p_sweep.add_argument("--x-min", type=float, required=True)
    p_sweep.add_argument("--x-max", type=float, required=True)
    p_sweep.add_argument("--points", type=int, required=True)
    p_sweep.add_argument("--parametric", action="store_true",
                         help="sweep the optimal shift t instead of solving "
                              "it per x (be/pin only)")
    p_sweep.add_argument("--digits", type=int, default=12)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cmp = sub.add_parser("compare", help="all bounds side by side")
    add_budgets(p_cmp)
    p_cmp.add_argument("--x-max", type=float, required=True)
    p_cmp.add_argument("--points", type=int, required=True)
    p_cmp.add_argument("--digits", type=int, default=12)
    p_cmp.set_defaults(func=_cmd_compare)

    p_ext = sub.add_parser("extremal",
                           help="near-extremal sum: MC tail vs the Pin bound")
    add_budgets(p_ext)
    p_ext.add_argument("--m", type=int, required=True)
    p_ext.add_argument("--x", type=float, required=True)
    p_ext.add_argument("--samples", type=int, required=True)
    p_ext.add_argument("--seed", type=int, required=True)
    p_ext.add_argument("--digits", type=int, default=12)
    p_ext.set_defaults(func=_cmd_extremal)

    p_val = sub.add_parser("validate", help="run the self-check suite")
    p_val.add_argument("--suite", required=True, choices=("quick", "full"))
    p_val.add_argument("--seed", type=int, required=True)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def _fmt(value: float, digits: int) -> str:
    return f"%.{digits}e" % value


def _require(args: argparse.Namespace, bound: str) -> BoundParams | None:
    """Check the flags this bound needs and build BoundParams when it
    takes the full triple (eps defaults to 1/2 where unused)."""
    needed = _NEEDS[bound]
    for name in needed:
        if getattr(args, name, None) is None:
            raise DomainError(f"--{name} is required for --bound {bound}")
    if "y" not in needed:
        return None
    eps = args.eps if "eps" in needed else 0.5
    return BoundParams(args.sigma, args.y, eps)


def _eval_one(bound: str, params: BoundParams | None,
              args: argparse.Namespace, x: float, tol: Tolerance) -> float:
    if bound == "bh":
        return bd.bh(args.sigma, args.y, x, tol).value
    if bound == "pu":
        return bd.pu(params, x, tol).value
    if bound == "be":
        return bd.be(params, x, tol=tol).value
    if bound == "pin":
        return bd.pin(params, x, tol=tol).value
    if bound == "lc3":
        return bd.lc3_bound(params, x, tol)
    if bound == "ca":
        return bd.ca(args.sigma, x)
    if bound == "en":
        return bd.en(args.sigma, x)
    if bound == "ea":
        return bd.ea(x, tol)
    raise DomainError(f"unknown bound {bound!r}")


def _cmd_eval(args: argparse.Namespace, tol: Tolerance) -> int:
    params = _require(args, args.bound)
    value = _eval_one(args.bound, params, args, args.x, tol)
    print("value")
    print(_fmt(value, args.digits))
    return 0


def _cmd_sweep(args: argparse.Namespace, tol: Tolerance) -> int:
    if not (args.x_min < args.x_max):
        raise DomainError("--x-min must be below --x-max")
    if args.points < 2:
        raise DomainError("--points must be at least 2")
    params = _require(args, args.bound)
    print("x,value")
    if args.parametric:
        for x, v in _parametric_rows(args, params, tol):
            print(f"{_fmt(x, args.digits)},{_fmt(v, args.digits)}")
        return 0
    for i in range(args.points):
        x = args.x_min + (args.x_max - args.x_min) * i / (args.points - 1)
        v = _eval_one(args.bound, params, args, x, tol)
        print(f"{_fmt(x, args.digits)},{_fmt(v, args.digits)}")
    return 0


def _parametric_rows(args: argparse.Namespace, params: BoundParams,
                     tol: Tolerance):
    """Sweep the shift t = u - 1/u on a uniform u grid instead of solving
    t_x per point: each row is (m(t), E(eta-t)_+^a / (m(t)-t)^a), which
    traces the same curve with two root solves total instead of one per
    grid point."""
    if args.bound not in ("be", "pin"):
        raise DomainError("--parametric applies to be and pin only")
    if args.bound == "pin":
        rv, alpha = params.mixture(), 3.0
    else:
        from .distributions import MixtureRV
        rv = MixtureRV(v=0.0, y=params.y, theta=params.sigma**2 / params.y**2)
        alpha = 2.0
    if args.x_min <= 0.0:
        raise DomainError("parametric sweeps need 0 < x-min")
    from scipy.optimize import brentq

    def u_of_x(x: float) -> float:
        t = bd.solve_t_x(rv, alpha, x, tol)
        # invert t = u - 1/u for the positive branch
        return 0.5 * (t + math.sqrt(t * t + 4.0))

    u_lo, u_hi = u_of_x(args.x_min), u_of_x(args.x_max)
    for i in range(args.points):
        u = u_lo + (u_hi - u_lo) * i / (args.points - 1)
        t = u - 1.0 / u
        x = bd.m_function(rv, alpha, t, tol)
        val = min(1.0, pos_moment(rv, t, alpha, tol=tol) / (x - t) ** alpha)
        yield x, val


def _cmd_compare(args: argparse.Namespace, tol: Tolerance) -> int:
    for name in ("sigma", "y", "eps"):
        if getattr(args, name) is None:
            raise DomainError(f"--{name} is required for compare")
    if args.points < 2:
        raise DomainError("--points must be at least 2")
    params = BoundParams(args.sigma, args.y, args.eps)
    d = args.digits
    print("x,bh,pu,be,pin,ca,en,log10_be_bh,log10_pin_bh,log10_pu_bh")
    for i in range(args.points):
        x = args.x_max * i / (args.points - 1)
        vbh = bd.bh(args.sigma, args.y, x, tol).value
        vpu = bd.pu(params, x, tol).value
        vbe = bd.be(params, x, tol=tol).value
        vpin = bd.pin(params, x, tol=tol).value
        vca = bd.ca(args.sigma, x)
        ven = bd.en(args.sigma, x)
        floor = 1e-300
        row = [x, vbh, vpu, vbe, vpin, vca, ven,
               math.log10(max(vbe, floor) / max(vbh, floor)),
               math.log10(max(vpin, floor) / max(vbh, floor)),
               math.log10(max(vpu, floor) / max(vbh, floor))]
        print(",".join(_fmt(v, d) for v in row))
    return 0


def _cmd_extremal(args: argparse.Namespace, tol: Tolerance) -> int:
    for name in ("sigma", "y", "eps"):
        if getattr(args, name) is None:
            raise DomainError(f"--{name} is required for extremal")
    params = BoundParams(args.sigma, args.y, args.eps)
    spec = extremal_sum_spec(params, args.m, tol)
    est = mc_tail(spec, args.x, args.samples, args.seed)
    vpin = bd.pin(params, args.x, tol=tol).value
    d = args.digits
    print("m,x,n,seed,p_hat,stderr,pin")
    print(f"{args.m},{_fmt(args.x, d)},{est.n},{est.seed},"
          f"{_fmt(est.p_hat, d)},{_fmt(est.stderr, d)},{_fmt(vpin, d)}")
    return 0


def _cmd_validate(args: argparse.Namespace, tol: Tolerance) -> int:
    checks = _quick_checks(args.seed, tol)
    if args.suite == "full":
        checks += _full_checks(args.seed, tol)
    failures = 0
    print("check,status")
    for name, fn in checks:
        try:
            ok = fn()
        except Exception as exc:  # a crashed check is a failed check
            print(f"{name}: {exc}", file=sys.stderr)
            ok = False
        print(f"{name},{'pass' if ok else 'FAIL'}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} of {len(checks)} checks failed", file=sys.stderr)
        return 1
    return 0


def _comparison_holds(spec, params, funcs, tol: Tolerance) -> bool:
    for f in funcs:
        lhs = enumerate_expectation(spec, f)
        rhs = mixture_expectation_f(params, f, tol)
        if lhs > rhs * (1.0 + 1e-6):
            return False
    return True


def _quick_checks(seed: int, tol: Tolerance):
    p = BoundParams(1.0, 1.0, 0.5)
    mix = BoundParams(1.0, 1.0, 0.1).mixture()

    def pu_vs_numeric() -> bool:
        for sig in (0.5, 1.0):
            for y in (0.5, 1.0):
                for eps in (0.2, 0.8):
                    pp = BoundParams(sig, y, eps)
                    for x in (0.5, 2.0, 5.0):
                        a = bd.pu(pp, x, tol).value
                        b = bd.pu_numeric(pp, x, tol).value
                        if abs(a - b) > 1e-8 * b:
                            return False
        return True

    def ordering() -> bool:
        pp = BoundParams(1.0, 1.0, 0.3)
        for i in range(8):
            x = 0.5 * (i + 1)
            vbh = bd.bh(1.0, 1.0, x, tol).value
            vpu = bd.pu(pp, x, tol).value
            vpin = bd.pin(pp, x, tol=tol).value
            vbe = bd.be(pp, x, tol=tol).value
            if not (vpin <= vpu * (1 + 1e-8) and vpu <= vbh * (1 + 1e-12)):
                return False
            if not vbe <= min(bd.ca(1.0, x), vbh) * (1 + 1e-8):
                return False
        return True

    def two_point_closed() -> bool:
        from .distributions import two_point_palpha_closed
        tp = TwoPointRV(1.0, 3.0)
        got = bd.p_alpha(tp, 2.0, 1.0, tol=tol).value
        if abs(got - 0.75) > 1e-10:
            return False
        return abs(bd.m_function(tp, 1.2, -1.0, tol) - 3.0) < 1e-9 and \
            abs(two_point_palpha_closed(tp, 2.0, 1.0) - 0.75) < 1e-12

    def posmoment_routes() -> bool:
        ser = pos_moment(mix, 1.0, 3.0, PosMomentMethod.series(), tol)
        lap = pos_moment(mix, 1.0, 3.0, PosMomentMethod.laplace(), tol)
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            chf = pos_moment(mix, 1.0, 3.0, PosMomentMethod.charfn(), tol)
        return abs(lap - ser) <= 1e-6 * ser and abs(chf - ser) <= 1e-5 * ser

    def comparison_small() -> bool:
        funcs = [TestFunction.power_part(t) for t in (-1.0, 0.0, 1.0)] \
            + [TestFunction.exponential(1.0)]
        for i in range(10):
            spec = random_sum_spec(8, seed + i)
            if not _comparison_holds(spec, spec.aggregate_params(), funcs, tol):
                return False
        return True

    def mc_determinism() -> bool:
        spec = random_sum_spec(6, seed)
        a = mc_tail(spec, 0.3, 10_000, seed)
        b = mc_tail(spec, 0.3, 10_000, seed)
        return a.p_hat == b.p_hat and a.stderr == b.stderr

    def split_identity() -> bool:
        x = 2.0
        ax = bd.alpha_x_split(p, x, tol)
        s2e = p.eps * p.sigma**2
        lhs = bd.en(math.sqrt((1 - p.eps)) * p.sigma, (1 - ax) * x) \
            * bd.bh(math.sqrt(s2e), p.y, ax * x, tol).value
        return abs(lhs - bd.pu(p, x, tol).value) <= 1e-8 * lhs

    return [
        ("pu_vs_numeric", pu_vs_numeric),
        ("ordering", ordering),
        ("two_point_closed", two_point_closed),
        ("posmoment_routes", posmoment_routes),
        ("comparison_small", comparison_small),
        ("mc_determinism", mc_determinism),
        ("split_identity", split_identity),
    ]


def _full_checks(seed: int, tol: Tolerance):
    def comparison_full() -> bool:
        funcs = [TestFunction.power_part(t) for t in (-2.0, -1.0, 0.0, 1.0, 2.0)] \
            + [TestFunction.exponential(lam) for lam in (0.5, 1.0, 2.0)]
        for i in range(100):
            spec = random_sum_spec(4 + (i % 9), seed + 1000 + i)
            if not _comparison_holds(spec, spec.aggregate_params(), funcs, tol):
                return False
        return True

    def tightness() -> bool:
        params = BoundParams(1.0, 1.0, 0.1)
        f = TestFunction.power_part(1.0, 3.0)
        rhs = mixture_expectation_f(params, f, tol)
        gaps = []
        for m in (400, 1600):
            spec = extremal_sum_spec(params, m, tol)
            mean, _ = mc_expectation(spec, f, 10**6, seed)
            gaps.append(abs(mean / rhs - 1.0))
        return gaps[1] < gaps[0] and gaps[1] <= 0.1

    def mc_consistency() -> bool:
        params = BoundParams(1.0, 1.0, 0.1)
        spec = extremal_sum_spec(params, 400, tol)
        est = mc_tail(spec, 3.0, 10**6, seed)
        vpin = bd.pin(params, 3.0, tol=tol).value
        upper = est.p_hat <= vpin + 4.0 * est.stderr
        lower = est.p_hat >= vpin / (1e3 * 3.0**2.5)
        return upper and lower

    def oscillation() -> bool:
        from .distributions import MixtureRV
        from .special import poisson_tail
        rv = MixtureRV(0.0, 1.0, 0.6)
        x = 15.0 - 0.6
        r1 = bd.p_alpha(rv, 2.0, x, tol=tol).value / poisson_tail(0.6, 15.0)
        r2 = poisson_tail(0.6, 15.0) / (15.0 / 0.6 * poisson_tail(0.6, 16.0))
        return 1.0 <= r1 <= 1.15 and 0.85 <= r2 <= 1.15

    def normal_constant() -> bool:
        from .distributions import MixtureRV
        rv = MixtureRV(1.0, 1.0, 0.0)
        ratio = bd.p_alpha(rv, 3.0, 8.0, tol=tol).value / normal_tail(1.0, 8.0)
        return 0.9 * bd.c_const(3.0, 0.0) <= ratio <= 1.1 * bd.c_const(3.0, 0.0)

    def u_crossing() -> bool:
        lo, hi = 0.1, 10.0
        g = lambda x: bd.ca(1.0, x) - bd.en(1.0, x)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if g(lo) * g(mid) <= 0.0:
                hi = mid
            else:
                lo = mid
        return 1.585 < 0.5 * (lo + hi) < 1.586

    def hp_gap() -> bool:
        g_small = hp_counterexample_gap(2.5, 0.01, tol)
        g_big = hp_counterexample_gap(2.5, 0.05, tol)
        pred = (2.0**1.5 - 3.5) * 1e-4
        return g_small < 0.0 and 0.5 < g_small / pred < 2.0 and \
            12.5 < g_big / g_small < 50.0 and \
            hp_counterexample_gap(3.0, 0.01, tol) >= -1e-6

    return [
        ("comparison_full", comparison_full),
        ("tightness", tightness),
        ("mc_consistency", mc_consistency),
        ("oscillation", oscillation),
        ("normal_constant", normal_constant),
        ("u_crossing", u_crossing),
        ("hp_gap", hp_gap),
    ]

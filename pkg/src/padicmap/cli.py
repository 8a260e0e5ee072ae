"""Command-line interface: ``padicmap <command> [options]``.

Every command prints one JSON document (sorted keys) on stdout. Exit codes:
0 ok, 1 verification failure, 2 invalid input, 3 precision exhausted,
4 regime mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import decomposition as dec
from . import symbolic as sym
from . import verify
from .dynamics import (
    MapParams,
    apply,
    Regime,
    classify,
    classify_reasons,
    escape_test,
    finite_fixed_points,
    fixed_points,
    orbit,
    period_two_points,
    taylor_coeffs,
)
from .errors import (
    InvalidInput,
    InvalidPrime,
    NotASquare,
    PadicMapError,
    PoleTooClose,
    PrecisionExhausted,
    Unsupported,
    WellDefinednessViolation,
    WrongRegime,
)
from .padic_core import (
    DEFAULT_PRECISION,
    PadicScalar,
    check_prime,
    from_rational,
    parse_rational,
    valuation,
)
from .projective import ProjPoint, point

log = logging.getLogger("padicmap")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PRECISION, EXIT_REGIME = 0, 1, 2, 3, 4

# defaults applied after the config file; flags left unset fall through to these
DEFAULTS = {
    "p": None, "a": None, "x": None, "precision": DEFAULT_PRECISION, "depth": 8, "kmax": None,
    "samples": None, "pairs": None, "seed": 0, "suite": "all", "out": None, "json": True,
    "word": None, "order": 8, "iterate": 2,
}


class UsageError(InvalidInput):
    pass


def load_config(path: str) -> dict:
    """Flat key-value document: a JSON object, or ``key = value`` lines."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
        if not isinstance(data, dict):
            raise UsageError("config JSON must be an object")
        return {k.replace("-", "_"): v for k, v in data.items()}
    except json.JSONDecodeError:
        pass
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise UsageError(f"config line {n}: expected key = value")
        k, v = (s.strip() for s in line.split(sep, 1))
        out[k.replace("-", "_")] = v
    return out


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over config over defaults."""
    cfg = load_config(args.config) if args.config else {}
    unknown = set(cfg) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    for key in ("p", "precision", "depth", "kmax", "samples", "pairs", "seed", "order", "iterate"):
        val = getattr(args, key)
        if val is not None and not isinstance(val, int):
            try:
                setattr(args, key, int(val))
            except ValueError:
                raise UsageError(f"--{key} must be an integer, got {val!r}") from None
    if isinstance(args.json, str):
        args.json = args.json.strip().lower() not in ("0", "false", "no", "off")
    return args


def _params(args) -> MapParams:
    if args.p is None or args.a is None:
        raise UsageError("--p and --a are required")
    check_prime(args.p)
    if args.precision < 1:
        raise UsageError("--precision must be positive")
    return MapParams(args.p, parse_rational(args.a), precision=args.precision)


def _parse_x(params: MapParams, text) -> ProjPoint:
    """A rational, ``inf``, ``fixed:1|2`` (finite fixed points) or ``period2:1|2``."""
    if text is None:
        raise UsageError("--x is required")
    s = str(text).strip()
    for prefix, fn in (("fixed:", finite_fixed_points), ("period2:", period_two_points)):
        if s.startswith(prefix):
            pts = fn(params)
            try:
                i = int(s[len(prefix):])
            except ValueError:
                raise UsageError(f"bad point index in {s!r}") from None
            if not 1 <= i <= len(pts):
                raise UsageError(f"{s!r}: only {len(pts)} such points exist in Q_{params.p}")
            return point(pts[i - 1])
    return point(s)


def _require(params: MapParams, *regimes: Regime) -> Regime:
    got = classify(params)
    if got not in regimes:
        raise WrongRegime(regimes if len(regimes) > 1 else regimes[0], got)
    return got


def _header(params: MapParams) -> dict:
    return {"p": params.p, "a": str(params.a), "regime": str(classify(params))}


def _as_padic(params: MapParams, P: ProjPoint, steps: int) -> ProjPoint:
    """Keep a rational exact when its orbit stays small for ``steps`` steps;
    otherwise expand it to --precision digits (exact heights double per step)."""
    if P.is_infinity or isinstance(P.value, PadicScalar) or P.value == 0:
        return P
    cap = 16 * params.precision * params.p.bit_length()
    Q = P
    for _ in range(steps):
        Q = apply(params, Q)
        if Q.is_infinity or Q.value == 0:
            return P
        if max(abs(Q.value.numerator), Q.value.denominator).bit_length() > cap:
            return ProjPoint(from_rational(P.value, params.p, params.precision))
    return P


# -- commands ------------------------------------------------------------------


def cmd_classify(args) -> tuple[dict, int]:
    params = _params(args)
    out = _header(params)
    reasons = classify_reasons(params)
    for k in ("p", "a", "regime"):
        reasons.pop(k, None)
    out["reasons"] = reasons
    return out, EXIT_OK


def cmd_orbit(args):
    params = _params(args)
    x = _as_padic(params, _parse_x(params, args.x), args.depth)
    pts = orbit(params, x, args.depth)
    out = _header(params)
    out["orbit"] = [P.to_json(params.p) for P in pts]
    out["valuations"] = ["inf" if P.is_infinity else _val_json(P, params.p) for P in pts]
    out["escape"] = escape_test(params, x, max_steps=max(args.depth, 1)).to_json()
    return out, EXIT_OK


def _val_json(P, p):
    v = valuation(P.value, p)
    return "inf" if v == float("inf") else v


def cmd_itinerary(args):
    params = _params(args)
    regime = _require(params, Regime.FULL_SHIFT_TWO, Regime.CHAOTIC_SFT)
    x = _as_padic(params, _parse_x(params, args.x), args.depth)
    if args.depth < 1:
        raise UsageError("--depth must be positive")
    fn = sym.itinerary2 if regime is Regime.FULL_SHIFT_TWO else sym.itinerary4
    it = fn(params, x, args.depth)
    out = _header(params)
    out.update(it.to_json())
    return out, EXIT_OK


def cmd_cylinder(args):
    params = _params(args)
    _require(params, Regime.FULL_SHIFT_TWO)
    if not args.word:
        raise UsageError("--word is required, e.g. --word 1,2,1")
    try:
        w = [int(s) for s in str(args.word).replace(" ", "").split(",") if s]
    except ValueError:
        raise UsageError(f"bad word {args.word!r}") from None
    c = sym.cylinder(params, sym.Word(tuple(w), 2))
    out = _header(params)
    out.update(c.to_json())
    return out, EXIT_OK


def cmd_fixed_points(args):
    params = _params(args)
    out = _header(params)
    out["fixed_points"] = [fp.to_json(params.p) for fp in fixed_points(params)]
    out["period_two"] = [ProjPoint(x).to_json(params.p) for x in period_two_points(params)]
    return out, EXIT_OK


def cmd_entropy(args):
    er = sym.entropy(sym.transition_matrix4(), tol=1e-13)
    out = er.to_json()
    out["matrix"] = sym.transition_matrix4().to_json()
    return out, EXIT_OK


def cmd_escape(args):
    params = _params(args)
    x = _as_padic(params, _parse_x(params, args.x), args.depth)
    out = _header(params)
    out.update(escape_test(params, x, max_steps=max(args.depth, 1)).to_json())
    return out, EXIT_OK


def cmd_taylor(args):
    params = _params(args)
    x = _parse_x(params, args.x)
    tc = taylor_coeffs(params, args.iterate, x, args.order)
    out = _header(params)
    out.update(tc.to_json(params.p))
    return out, EXIT_OK


def cmd_decompose(args):
    params = _params(args)
    _require(params, *dec.SUPPORTED)
    kmax = args.kmax
    if kmax is not None and kmax < 2:
        raise UsageError("--kmax must be at least 2")
    report = dec.decompose_report(params, kmax, samples=args.samples or 200, seed=args.seed)
    return report.to_json(), EXIT_OK


def cmd_verify(args):
    names = list(verify.SUITES) if args.suite in (None, "all") else \
        [s.strip() for s in str(args.suite).split(",")]
    bad = [n for n in names if n not in verify.SUITES]
    if bad:
        raise UsageError(f"unknown suite(s) {bad}; choose from {sorted(verify.SUITES)}")
    opts = {"samples": args.samples, "pairs": args.pairs}
    reports = verify.run_all(names, seed=args.seed, inject_fault=args.inject_fault, **opts)
    out = {
        "seed": args.seed,
        "suites": [r.to_json(timing=args.timing) for r in reports],
        "passed": all(r.passed for r in reports),
        "failed_suites": [r.suite for r in reports if not r.passed],
    }
    if args.inject_fault:
        out["inject_fault"] = True
    return out, EXIT_OK if out["passed"] else EXIT_VERIFY


COMMANDS = {
    "classify": (cmd_classify, "regime of phi(x) = ax + 1/x over Q_p"),
    "orbit": (cmd_orbit, "orbit of --x for --depth steps"),
    "itinerary": (cmd_itinerary, "symbolic itinerary (FullShiftTwo or ChaoticSFT)"),
    "cylinder": (cmd_cylinder, "cylinder disk of --word (FullShiftTwo)"),
    "fixed-points": (cmd_fixed_points, "fixed points, multipliers and period-two points"),
    "entropy": (cmd_entropy, "entropy of the four-region transition matrix"),
    "escape": (cmd_escape, "escape certificate for --x"),
    "taylor": (cmd_taylor, "Taylor coefficients of phi or phi^2 at --x"),
    "decompose": (cmd_decompose, "finite-level decomposition report"),
    "verify": (cmd_verify, "run verification suites"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--p", type=int, help="odd prime")
    g.add_argument("--a", help="rational parameter, e.g. 1/25 or -25")
    g.add_argument("--x", help="point: rational, inf, fixed:1|2 or period2:1|2")
    g.add_argument("--precision", type=int, help=f"p-adic digits (default {DEFAULT_PRECISION})")
    g.add_argument("--depth", type=int, help="orbit steps / itinerary length (default 8)")
    g.add_argument("--kmax", type=int, help="deepest level for decompose")
    g.add_argument("--samples", type=int, help="sample count")
    g.add_argument("--pairs", type=int, help="pair count (scaling-type suites)")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--suite", help="verify: suite name(s), comma separated, or 'all'")
    g.add_argument("--word", help="cylinder word, e.g. 1,2,1")
    g.add_argument("--order", type=int, help="taylor: number of coefficients (default 8)")
    g.add_argument("--iterate", type=int, choices=(1, 2), help="taylor: phi or phi^2 (default 2)")
    g.add_argument("--out", help="also write the JSON report to this file")
    g.add_argument("--json", action=argparse.BooleanOptionalAction, default=None,
                   help="JSON output (default); --no-json prints key: value lines")
    g.add_argument("--config", help="flat key-value config file; flags take precedence")
    g.add_argument("--inject-fault", action="store_true",
                   help="verify: flip A[4][1] to exercise the failure path")
    g.add_argument("--timing", action="store_true", help="verify: include wall times")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="padicmap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_, description=help_)
    return parser


def render(obj, as_json: bool) -> str:
    if as_json:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, o):
        if isinstance(o, dict):
            for k in sorted(o):
                walk(f"{prefix}.{k}" if prefix else str(k), o[k])
        else:
            lines.append(f"{prefix}: {json.dumps(o)}")

    walk("", obj)
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    fn, _ = COMMANDS[args.command]
    t0 = time.perf_counter()
    try:
        resolve(args)
        obj, code = fn(args)
    except (InvalidPrime, InvalidInput, NotASquare, Unsupported, PoleTooClose, OSError) as exc:
        return _error(exc, EXIT_INPUT)
    except PrecisionExhausted as exc:
        step = f" at step {exc.step}" if exc.step is not None else ""
        return _error(f"precision exhausted{step}: {exc} (retry with a larger --precision)",
                      EXIT_PRECISION)
    except WrongRegime as exc:
        return _error(exc, EXIT_REGIME)
    except WellDefinednessViolation as exc:
        return _error(exc, EXIT_VERIFY)
    except PadicMapError as exc:
        return _error(exc, EXIT_INPUT)
    log.debug("%s finished in %.3fs", args.command, time.perf_counter() - t0)
    text = render(obj, args.json)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(render(obj, True))
        except OSError as exc:
            return _error(exc, EXIT_INPUT)
    sys.stdout.write(text)
    return code


def _error(exc, code: int) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

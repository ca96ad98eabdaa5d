"""Command-line front end.

Every subcommand builds its parameters from ``--preset`` or from explicit
``--A/--B`` (real case) or ``--A1/--A2`` (symmetric family) flags, runs one
library pipeline and writes JSON (or CSV) with all numbers as decimal
strings.  Output goes to ``--out`` or, when that is omitted, to stdout.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._precision import default_bits, hp_default_bits
from .approximants import recover_two_sheets, two_sheet_system
from .continuation import PathSpec, continue_via_hp, oracle_continue, oracle_sheet_values_real
from .errors import BoundaryError, HermitePadeError, InvalidInputError, InvalidPathError
from .hp_core import (MultiIndex, germ_powers, hp_type1, hp_type2, pade_pair, pade_report, partial_sum_zeros,
                      polys_to_json, roots_to_json, s_polys)
from .potential import empirical_measure, measure_distance, robin_density, solve_equilibrium
from .presets import get_preset, preset_names
from .series import (AT_INFINITY, AT_ZERO, SZParams, default_order, germ_at_infinity, germ_at_zero,
                     germ_from_json, germ_to_json)

__all__ = ["main", "build_parser", "ZERO_FAMILIES"]

ZERO_FAMILIES = ("pade", "pade_zeros", "partial", "hp2_2", "hp2_3", "hp1_2", "hp1_3", "s2n", "s2n_2")
_SCHEME_NAMES = {"pade": "Pade", "two-sheet": "TwoSheet", "three-sheet": "ThreeSheet"}
_VERIFY_TARGETS = ("pade", "hp2_3", "hp1_3", "s2n")
_USAGE_ERRORS = (InvalidInputError, InvalidPathError, BoundaryError)


class UsageError(Exception):
    """Bad combination of command-line options."""


# ---------------------------------------------------------------------------
# option parsing


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("common options")
    g.add_argument("--n", type=int, default=50, help="approximation order (default 50)")
    g.add_argument("--bits", type=int, default=None, help="working precision in bits (default depends on n)")
    g.add_argument("--preset", default=None, help=f"parameter preset: {', '.join(preset_names())}")
    g.add_argument("--out", default=None, help="output file (directory for zeros/equilibrium); stdout if omitted")
    g.add_argument("--A", type=float, default=None, help="real case: first branch parameter")
    g.add_argument("--B", type=float, default=None, help="real case: second branch parameter")
    g.add_argument("--A1", type=float, default=None, help="symmetric family: A = A1 + i A2, B = -A1 + i A2")
    g.add_argument("--A2", type=float, default=None)
    g.add_argument("--a", type=float, default=None, help="variable change z = (1/zeta - a) i / b")
    g.add_argument("--b", type=float, default=None)
    g.add_argument("--at", choices=(AT_ZERO, AT_INFINITY), default=None,
                   help="expansion point of the germ (default: zero when a, b are known)")
    g.add_argument("--order", type=int, default=None, help="germ order (default 4n + 8)")
    g.add_argument("--germ", default=None, help="read the germ from this JSON file instead of building it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hermite-pade", allow_abbrev=False,
                                     description="Pade and Hermite-Pade approximants of multivalued germs.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_, allow_abbrev=False)

    add("germ", "Taylor coefficients of the germ")
    add("pade", "diagonal Pade polynomials [n/n]")
    p = add("hp1", "type I Hermite-Pade polynomials for [1, f, ..., f^m]")
    p.add_argument("--m", type=int, default=2, help="highest power of f (default 2)")
    p.add_argument("--index", default=None, help="comma-separated degree bounds (default n for every polynomial)")
    p = add("hp2", "type II Hermite-Pade polynomials for [f, ..., f^m]")
    p.add_argument("--m", type=int, default=2, help="highest power of f (default 2)")
    add("spolys", "S-polynomials from the neighbouring type I solutions")
    p = add("zeros", "zero sets of approximant families, one file per family")
    p.add_argument("--families", required=True, help=f"comma-separated subset of {', '.join(ZERO_FAMILIES)}")
    p.add_argument("--partial-degree", type=int, default=None,
                   help="degree of the partial sum (default 2n, the coefficients used by [n/n])")
    p = add("continue", "continue the germ at zeta = 0 along a straight path")
    p.add_argument("--scheme", choices=tuple(_SCHEME_NAMES), default="pade")
    p.add_argument("--to", type=_complex, default=None, help="endpoint (default: the preset's endpoint)")
    p.add_argument("--max-step", type=float, default=0.05, help="step bound of the path (default 0.05)")
    p.add_argument("--compare", action="store_true", help="also run the closed-form oracle and report the difference")
    p = add("equilibrium", "equilibrium measure of the real case and derived measures")
    p.add_argument("--N", type=int, default=64, help="Chebyshev coefficients of the density (default 64)")
    p.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"), default=None,
                   help="support [LO, HI] given directly instead of through A, B")
    p.add_argument("--verify-zeros", choices=_VERIFY_TARGETS, default=None,
                   help="Kolmogorov distance of a zero family to its predicted limit")
    add("verify", "quick self-checks of the installation")
    return parser


# ---------------------------------------------------------------------------
# configuration


def _params(args, required: bool = True) -> SZParams | None:
    explicit = [args.A, args.B, args.A1, args.A2]
    if args.preset is not None:
        if any(v is not None for v in explicit):
            raise UsageError("--preset cannot be combined with --A/--B/--A1/--A2")
        return get_preset(args.preset).params
    if args.A1 is not None or args.A2 is not None:
        if None in (args.A1, args.A2, args.a, args.b):
            raise UsageError("the symmetric family needs --A1, --A2, --a and --b")
        return SZParams.symmetric(args.A1, args.A2, args.a, args.b)
    if args.A is not None or args.B is not None:
        if None in (args.A, args.B):
            raise UsageError("the real case needs both --A and --B")
        p = SZParams.real_case(args.A, args.B)
        if args.a is not None or args.b is not None:
            if None in (args.a, args.b):
                raise UsageError("give both --a and --b")
            p = SZParams(p.A_list, p.alpha_list, args.a, args.b)
        return p
    if required:
        raise UsageError("give --preset or the parameters --A/--B or --A1/--A2/--a/--b")
    return None


def _center(args, params: SZParams) -> str:
    center = args.at or (AT_ZERO if params.a is not None else AT_INFINITY)
    if center == AT_ZERO and params.a is None:
        raise UsageError("a germ at zeta = 0 needs --a and --b")
    return center


def _check_n(args):
    if args.n < 1:
        raise UsageError("--n must be positive")


def _germ(args, hp: bool):
    """Germ from ``--germ`` or from the parameters, at the precision the command needs."""
    _check_n(args)
    bits = args.bits or (hp_default_bits(args.n) if hp else default_bits(args.n))
    if args.germ is not None:
        try:
            text = Path(args.germ).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.germ}: {exc}") from None
        return germ_from_json(text)
    params = _params(args)
    order = args.order if args.order is not None else default_order(args.n)
    if _center(args, params) == AT_ZERO:
        return germ_at_zero(params, order, bits)
    return germ_at_infinity(params, order, bits)


def _emit(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    path = Path(args.out)
    path.write_text(text if text.endswith("\n") else text + "\n")


def _pair(z: complex) -> list[str]:
    return [repr(complex(z).real), repr(complex(z).imag)]


# ---------------------------------------------------------------------------
# commands


def cmd_germ(args) -> int:
    _emit(args, germ_to_json(_germ(args, hp=False)))
    return 0


def cmd_pade(args) -> int:
    rep = pade_report(_germ(args, hp=False), args.n)
    _emit(args, polys_to_json("pade", args.n, rep.polynomials, degrees=rep.degrees))
    return 0


def cmd_hp1(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be at least 1")
    if args.index is None:
        idx = MultiIndex.diagonal(args.n, args.m)
    else:
        try:
            degs = tuple(int(s) for s in args.index.split(","))
        except ValueError:
            raise UsageError(f"--index must be comma-separated integers, got {args.index!r}") from None
        if len(degs) != args.m + 1:
            raise UsageError(f"--index needs {args.m + 1} degree bounds for m = {args.m}")
        idx = MultiIndex(degs)
    rep = hp_type1(germ_powers(_germ(args, hp=True), args.m), idx)
    _emit(args, polys_to_json(f"hp1_Qn{args.m}", args.n, rep.polynomials, degrees=rep.degrees))
    return 0


def cmd_hp2(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be at least 1")
    rep = hp_type2(germ_powers(_germ(args, hp=True), args.m)[1:], args.n)
    _emit(args, polys_to_json(f"hp2_Q{args.m}n", args.n, rep.polynomials, degrees=rep.degrees))
    return 0


def cmd_spolys(args) -> int:
    g = germ_powers(_germ(args, hp=True), 3)
    S1, S2 = s_polys(hp_type1(g, MultiIndex.stepped(args.n, 1)), hp_type1(g, MultiIndex.stepped(args.n, 2)))
    _emit(args, polys_to_json("S2n", args.n, [S1, S2]))
    return 0


class _Families:
    """Lazily built approximants shared by the zero families of one run."""

    def __init__(self, germ, n: int):
        self.germ, self.n, self._cache = germ, n, {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def pade(self):
        return self._get("pade", lambda: pade_pair(self.germ, self.n))

    def powers(self):
        return self._get("powers", lambda: germ_powers(self.germ, 3))

    def type2(self, m):
        return self._get(("hp2", m), lambda: hp_type2(self.powers()[1:m + 1], self.n).polynomials[0])

    def type1(self, m):
        return self._get(("hp1", m), lambda: hp_type1(self.powers()[:m + 1],
                                                      MultiIndex.diagonal(self.n, m)).polynomials[-1])

    def spolys(self):
        g = self.powers()
        return self._get("s", lambda: s_polys(hp_type1(g, MultiIndex.stepped(self.n, 1)),
                                              hp_type1(g, MultiIndex.stepped(self.n, 2))))

    def points(self, family: str, partial_degree: int):
        """``(kind, points)`` for one family name."""
        if family == "pade":
            return "pade_Q", self.pade()[1].roots()
        if family == "pade_zeros":
            return "pade_P", self.pade()[0].roots()
        if family == "partial":
            return f"partial_S{partial_degree}", partial_sum_zeros(self.germ, partial_degree)
        if family in ("hp2_2", "hp2_3"):
            m = int(family[-1])
            return f"hp2_Q{m}n", self.type2(m).roots()
        if family in ("hp1_2", "hp1_3"):
            m = int(family[-1])
            return f"hp1_Qn{m}", self.type1(m).roots()
        if family == "s2n":
            return "S2n1", self.spolys()[0].roots()
        return "S2n2", self.spolys()[1].roots()


def _parse_families(text: str) -> list[str]:
    fams = [f.strip() for f in text.split(",") if f.strip()]
    if not fams:
        raise UsageError("--families is empty")
    bad = [f for f in fams if f not in ZERO_FAMILIES]
    if bad:
        raise UsageError(f"unknown families {', '.join(bad)}; choose from {', '.join(ZERO_FAMILIES)}")
    return list(dict.fromkeys(fams))


def cmd_zeros(args) -> int:
    fams = _parse_families(args.families)
    hp = any(f not in ("pade", "pade_zeros", "partial") for f in fams)
    germ = _germ(args, hp=hp)
    pdeg = args.partial_degree if args.partial_degree is not None else 2 * args.n
    if "partial" in fams and not 1 <= pdeg <= germ.order:
        raise UsageError(f"partial-sum degree {pdeg} must lie in [1, {germ.order}]")
    built = _Families(germ, args.n)
    docs = {}
    for fam in fams:
        try:
            kind, pts = built.points(fam, pdeg)
        except HermitePadeError as exc:
            exc.args = (f"family {fam}: {exc}",) + exc.args[1:]
            raise
        docs[fam] = roots_to_json(kind, args.n, pts, germ.bits)
    if args.out is None:
        sys.stdout.write(json.dumps({k: json.loads(v) for k, v in docs.items()}, indent=1) + "\n")
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fam, text in docs.items():
        (out / f"{fam}.json").write_text(text + "\n")
    return 0


def cmd_continue(args) -> int:
    params = _params(args)
    if params.a is None:
        raise UsageError("continuation needs a germ at zeta = 0 (parameters with a, b)")
    to = args.to
    if to is None:
        endpoint = get_preset(args.preset).endpoint if args.preset else None
        if endpoint is None:
            raise UsageError("give the endpoint with --to")
        to = complex(endpoint)
    if args.max_step <= 0:
        raise UsageError("--max-step must be positive")
    path = PathSpec.segment(0, to, args.max_step)
    germ = _germ(args, hp=args.scheme != "pade")
    if germ.center != AT_ZERO:
        raise UsageError("continuation needs a germ at zeta = 0")
    res = continue_via_hp(germ, params, path, args.n, _SCHEME_NAMES[args.scheme])
    doc = json.loads(res.to_json())
    if args.compare:
        ref = oracle_continue(params, path)
        doc["oracle"] = _pair(ref)
        doc["difference"] = repr(abs(res.value - ref))
    _emit(args, json.dumps(doc, indent=1))
    return 0


def _interval(args) -> tuple[float, float]:
    if args.interval is not None:
        if args.preset is not None or args.A is not None or args.B is not None:
            raise UsageError("--interval cannot be combined with a preset or --A/--B")
        return tuple(args.interval)
    params = _params(args)
    if not params.is_real or len(params.A_list) != 2:
        raise UsageError("the equilibrium problem is posed for the real case (--A, --B)")
    return params.interval2()


def _measure_doc(mu) -> dict:
    return {"interval": [repr(mu.lo), repr(mu.hi)], "mass": repr(mu.mass),
            "chebyshev_coeffs": [repr(float(c)) for c in mu.coeffs]}


def cmd_equilibrium(args) -> int:
    lo, hi = _interval(args)
    if args.N < 4:
        raise UsageError("--N must be at least 4")
    sol = solve_equilibrium(lo, hi, args.N)
    doc = {"a": repr(sol.a), "b": repr(sol.b), "N": sol.N, "gamma": repr(sol.gamma),
           "residual": repr(sol.residual),
           "lambda": _measure_doc(sol.lam), "lambda1": _measure_doc(sol.lam1), "lambda2": _measure_doc(sol.lam2)}
    if args.verify_zeros is not None:
        if args.interval is not None:
            raise UsageError("--verify-zeros needs the germ parameters --A, --B")
        fam = args.verify_zeros
        germ = _germ(args, hp=fam != "pade")
        if germ.center != AT_INFINITY:
            raise UsageError("--verify-zeros uses the germ at infinity")
        kind, pts = _Families(germ, args.n).points(fam, 2 * args.n)
        target = {"pade": robin_density(), "hp2_3": sol.lam2, "hp1_3": sol.lam1, "s2n": sol.lam}[fam]
        limit = {"pade": "arcsine", "hp2_3": "lambda2", "hp1_3": "lambda1", "s2n": "lambda"}[fam]
        doc["verify_zeros"] = {"family": fam, "kind": kind, "n": args.n, "count": len(pts), "limit": limit,
                               "kolmogorov_distance": repr(measure_distance(empirical_measure(pts), target))}
    text = json.dumps(doc, indent=1)
    if args.out is None:
        sys.stdout.write(text + "\n")
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "equilibrium.json").write_text(text + "\n")
    for name, mu in (("lambda", sol.lambda_), ("lambda1", sol.lambda1), ("lambda2", sol.lambda2)):
        (out / f"{name}.csv").write_text(mu.to_csv())
    return 0


def _self_checks():
    """``(name, passed, detail)`` for a handful of fast end-to-end checks."""
    real = SZParams.real_case(2, 3)
    g = germ_at_infinity(real, 48, 320)
    c0 = complex(g.coeffs[0])
    yield "germ at infinity starts at 1/sqrt(AB)", abs(c0 - 6 ** -0.5) < 1e-15, f"c0 = {c0.real!r}"

    P, Q = pade_pair(g, 10)
    z = 2j
    f1 = oracle_sheet_values_real(real, z)[0]
    err = abs(complex(P(z) / Q(z)) - f1)
    yield "Pade [10/10] at z = 2i", err < 1e-8, f"error {err:.3g}"

    gz = germ_at_infinity(real, default_order(12), hp_default_bits(12))
    f = oracle_sheet_values_real(real, 3 + 1j)
    r1, r2 = recover_two_sheets(two_sheet_system(gz, 12), 3 + 1j)
    err = max(abs(r1 - f[0]), abs(r2 - f[1]))
    yield "two-sheet recovery at z = 3 + i", err < 1e-3, f"error {err:.3g}"

    lo, hi = real.interval2()
    sol = solve_equilibrium(lo, hi, 48)
    yield "equilibrium residual", sol.residual < 1e-8, f"residual {sol.residual:.3g}"

    ex1 = get_preset("example1").params
    gz = germ_at_zero(ex1, default_order(20), default_bits(20))
    path = PathSpec.segment(0, 6.0, 0.05)
    err = abs(continue_via_hp(gz, ex1, path, 20).value - oracle_continue(ex1, path))
    yield "example1: Pade [20/20] continuation to zeta = 6 matches the oracle", err < 1e-5, f"error {err:.3g}"


def cmd_verify(args) -> int:
    ok = True
    lines = []
    for name, passed, detail in _self_checks():
        ok &= bool(passed)
        lines.append(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    _emit(args, "\n".join(lines))
    return 0 if ok else 1


_COMMANDS = {
    "germ": cmd_germ, "pade": cmd_pade, "hp1": cmd_hp1, "hp2": cmd_hp2, "spolys": cmd_spolys,
    "zeros": cmd_zeros, "continue": cmd_continue, "equilibrium": cmd_equilibrium, "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except _USAGE_ERRORS as exc:
        print(f"hermite-pade: error: {exc}", file=sys.stderr)
        return 2
    except HermitePadeError as exc:
        kind = "sheet-unreachable" if type(exc).__name__ == "SheetUnreachableError" else type(exc).__name__
        extra = f" (family {exc.family})" if getattr(exc, "family", None) else ""
        print(f"hermite-pade: {kind}{extra}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface. Every command prints one JSON document.

Exit status: 0 on success or a passing verification, 1 on a failed
verification, 2 on a usage or domain error.

Gram matrices are given as ``2I3`` (scalar times identity), ``diag:2,2,4`` or
inline JSON such as ``[[2,1],[1,2]]``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .arith import ExactScalar, fmt_rational
from .config import DEFAULT_CAP, DomainError, Report, RunConfig
from .ffspace import FpQuadSpace, Rstar, classify, isotropic_count, zero_space
from .gauss import (
    BlockShape,
    alpha_closed,
    alpha_oracle,
    alpha_prime,
    gauss_expr_to_cyc,
    gtilde_closed,
    gtilde_oracle,
    gyd_closed,
    gyd_oracle,
)
from .hecke import (
    HeckeParams,
    apply_Tj,
    apply_Tprime,
    apply_Ttilde,
    diagonal_bounded,
    exponent_M,
    lambda_j,
    params_for,
    verify_annihilation,
    verify_eichler,
    within_bound,
)
from .intmat import det, snf_invariants
from .jacobi import (
    hecke_image,
    jacobi_indices,
    lift_from_siegel,
    psi_projection,
    store_from_json,
    verify_jacobi_correspondence,
)
from .lattice import level_of, neighbor_count_formula, neighbors, parse_gram, sublattices_between
from .theta import ThetaSource, cached_coeff_table, repr_count, table_to_json
from .verify import SUITES, run_suite


class UsageError(DomainError):
    pass


def _scalar(x) -> object:
    if isinstance(x, ExactScalar):
        return fmt_rational(x.a) if x.is_rational() else x.to_json()
    return fmt_rational(x)


def _gram_list(T) -> list:
    return [list(r) for r in T]


def _json_arg(text: str, flag: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: not valid JSON: {text!r}") from exc


def _ints(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}") from exc


def _targets(args, n: int) -> list:
    if args.at:
        return [parse_gram(t).entries for t in args.at]
    return diagonal_bounded(n, args.bound)


def _report(rep: Report) -> tuple[dict, int]:
    return rep.to_json(), 0 if rep.passed else 1


# -- gauss -------------------------------------------------------------------------------------


def cmd_gauss(args) -> tuple[dict, int]:
    p = args.p
    if args.which == "gyd":
        shape = BlockShape(*_ints(args.shape, "--shape"))
        Y = _json_arg(args.Y, "--Y")
        r0, r1 = shape.r0, shape.r1
        y1 = [row[r0:r0 + r1] for row in Y[r0:r0 + r1]]
        closed = gauss_expr_to_cyc(gyd_closed(shape, det(y1) if r1 else 1, p), p * p)
        oracle = gyd_oracle(Y, shape.D(p), args.cap, p=p)
        return {"closed": closed.to_json(), "oracle": oracle.to_json(), "match": closed == oracle}, 0
    V = FpQuadSpace(p, parse_gram(args.gram).entries)
    if args.which == "twisted":
        closed = gtilde_closed(classify(V))
        oracle = gtilde_oracle(V, args.cap)
    else:
        closed = Fraction(alpha_closed(V))
        oracle = alpha_oracle(V, args.cap)
        out = {"closed": fmt_rational(closed), "oracle": fmt_rational(oracle), "match": closed == oracle,
               "alpha_prime": fmt_rational(alpha_prime(V, args.cap))}
        return out, 0
    return {"closed": fmt_rational(closed), "oracle": fmt_rational(oracle), "match": closed == oracle}, 0


# -- ff ----------------------------------------------------------------------------------------


def cmd_ff(args) -> tuple[dict, int]:
    p = args.p
    V = FpQuadSpace(p, parse_gram(args.gram).entries)
    if args.which == "classify":
        return classify(V).to_json(), 0
    if args.which == "rstar":
        if args.sub is None:
            raise UsageError("--sub is required for ff rstar")
        W = FpQuadSpace(p, parse_gram(args.sub).entries)
        return {"rstar": Rstar(V, W, args.cap)}, 0
    enumerated = Rstar(V, zero_space(p, args.a), args.cap)
    closed = isotropic_count(classify(V), args.a)
    return {"a": args.a, "closed": closed, "enumerated": enumerated, "match": closed == enumerated}, 0


# -- lattice -----------------------------------------------------------------------------------


def cmd_lattice(args) -> tuple[dict, int]:
    if args.which == "snf":
        M = _json_arg(args.matrix, "--matrix")
        return {"invariants": snf_invariants(M)}, 0
    L = parse_gram(args.gram)
    if args.which == "level":
        return {"n": L.n, "gram": _gram_list(L.entries), "det": L.det, "level": level_of(L)}, 0
    if args.which == "between":
        typ = tuple(_ints(args.type, "--type")) if args.type else None
        subs = sublattices_between(L, args.p, typ, args.even, args.cap)
        return {"count": len(subs), "sublattices": [s.to_json() for s in subs]}, 0
    k = (L.n - 1) // 2
    nb = neighbors(L, args.p, args.j, args.cap)
    return {"count": len(nb), "formula": neighbor_count_formula(k, args.j, args.p),
            "neighbors": [K.to_json() for K in nb]}, 0


# -- theta -------------------------------------------------------------------------------------


def cmd_theta(args) -> tuple[dict, int]:
    Q = parse_gram(args.gram)
    if args.which == "repr":
        T = parse_gram(args.T)
        return {"T": _gram_list(T.entries), "count": repr_count(Q, T.entries, args.cap)}, 0
    table = cached_coeff_table(Q, args.n, args.bound, args.cache_dir)
    return {"gram": _gram_list(Q.entries), "n": args.n, "bound": args.bound, "coefficients": table_to_json(table)}, 0


# -- hecke -------------------------------------------------------------------------------------


def _params(args) -> HeckeParams:
    return HeckeParams(args.p, args.j, args.k, args.n, args.chi, args.p_divides_level)


def cmd_hecke(args) -> tuple[dict, int]:
    if args.which == "eigenvalue":
        return {"lambda": fmt_rational(lambda_j(_params(args)))}, 0
    if args.which == "bound":
        params = _params(args)
        lam = Fraction(args.value) if args.value is not None else lambda_j(params)
        M = exponent_M(args.n, args.j, args.k, Fraction(args.gamma))
        ok = within_bound(lam, args.n, args.j, args.k, args.p, Fraction(args.gamma))
        return {"lambda": fmt_rational(lam), "M": fmt_rational(M), "pass": ok}, 0 if ok else 1
    L = parse_gram(args.gram)
    if args.which == "verify-eichler":
        return _report(verify_eichler(L, args.p, args.j, args.n, _targets(args, args.n), args.cap))
    if args.which == "verify-annihilate":
        return _report(verify_annihilation(L, args.p, args.a, args.n, _targets(args, args.n), args.cap))
    src = ThetaSource(L, args.cap)
    params = params_for(src, args.p, args.j, args.n)
    op = {"T": lambda T: apply_Tj(src, T, params, args.cap),
          "Ttilde": lambda T: apply_Ttilde(src, T, params, cap=args.cap),
          "Tprime": lambda T: apply_Tprime(src, T, params, args.cap)}[args.op]
    rows = [{"T": _gram_list(T), "c": fmt_rational(src(T)), "value": _scalar(op(T))}
            for T in _targets(args, args.n)]
    return {"op": args.op, "p": args.p, "j": args.j, "n": args.n, "k": src.k,
            "p_divides_level": params.p_divides_level,
            "chi_prime": None if params.p_divides_level else params.chi_prime_p,
            "per_coefficient": rows}, 0


# -- jacobi ------------------------------------------------------------------------------------


def _store_json(store, keys) -> list:
    return store.to_json(keys)


def cmd_jacobi(args) -> tuple[dict, int]:
    keys = jacobi_indices(args.n, args.bound, args.rbound)
    if args.which == "psi":
        if args.store is None:
            raise UsageError("--store is required for jacobi psi")
        with open(args.store) as fh:
            data = json.load(fh)
        store = store_from_json(args.n, data, even=False, policy="zero-outside")
        keys = sorted({(tuple(map(tuple, e["T"])), tuple(e["R"])) for e in data})
        return {"store": _store_json(psi_projection(store), keys)}, 0
    src = ThetaSource(parse_gram(args.gram), args.cap)
    if args.which == "lift":
        return {"store": _store_json(lift_from_siegel(src, args.n), keys)}, 0
    if args.which == "verify":
        return _report(verify_jacobi_correspondence(src, args.p, args.j, args.n, keys, args.cap))
    params = params_for(src, args.p, args.j, args.n)
    image = hecke_image(lift_from_siegel(src, args.n), params, args.variant, args.cap)
    if args.psi:
        image = psi_projection(image)
    return {"variant": args.variant, "psi": args.psi, "store": _store_json(image, keys)}, 0


# -- suite -------------------------------------------------------------------------------------


def cmd_suite(args) -> tuple[dict, int]:
    cfg = RunConfig(cap=args.cap, cache_dir=args.cache_dir, out=args.out)
    result = run_suite(args.name, cfg)
    return result, 0 if result["pass"] else 1


# -- parser ------------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration size cap")
    c.add_argument("--out", help="also write the JSON result to this file")
    c.add_argument("--cache-dir", help="directory for cached theta coefficient tables")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="halfhecke", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="command", required=True)

    g = top.add_parser("gauss", help="exponential sums").add_subparsers(dest="which", required=True)
    s = g.add_parser("gyd", parents=[common])
    s.add_argument("--shape", required=True, help="r0,r1,r2,r3")
    s.add_argument("--Y", required=True, help="Y as a JSON matrix")
    s.add_argument("--p", type=int, required=True)
    for name in ("twisted", "alpha"):
        s = g.add_parser(name, parents=[common])
        s.add_argument("--gram", required=True)
        s.add_argument("--p", type=int, required=True)

    f = top.add_parser("ff", help="quadratic spaces over F_p").add_subparsers(dest="which", required=True)
    for name in ("classify", "rstar", "iso"):
        s = f.add_parser(name, parents=[common])
        s.add_argument("--gram", required=True)
        s.add_argument("--p", type=int, required=True)
        if name == "rstar":
            s.add_argument("--sub", help="Gram of the subspace type W")
        if name == "iso":
            s.add_argument("--a", type=int, required=True)

    lt = top.add_parser("lattice", help="lattices and sublattices").add_subparsers(dest="which", required=True)
    s = lt.add_parser("level", parents=[common])
    s.add_argument("--gram", required=True)
    s = lt.add_parser("snf", parents=[common])
    s.add_argument("--matrix", required=True)
    s = lt.add_parser("between", parents=[common])
    s.add_argument("--gram", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--type", help="n0,n1,n2")
    s.add_argument("--even", action="store_true")
    s = lt.add_parser("neighbors", parents=[common])
    s.add_argument("--gram", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--j", type=int, required=True)

    t = top.add_parser("theta", help="theta series coefficients").add_subparsers(dest="which", required=True)
    s = t.add_parser("coeffs", parents=[common])
    s.add_argument("--gram", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bound", type=int, default=8)
    s = t.add_parser("repr", parents=[common])
    s.add_argument("--gram", required=True)
    s.add_argument("--T", required=True)

    h = top.add_parser("hecke", help="Hecke operators").add_subparsers(dest="which", required=True)
    for name in ("eigenvalue", "bound"):
        s = h.add_parser(name, parents=[common])
        for flag in ("--k", "--n", "--j", "--p"):
            s.add_argument(flag, type=int, required=True)
        s.add_argument("--chi", type=int, default=1, choices=(1, -1), help="chi'(p)")
        s.add_argument("--p-divides-level", action="store_true")
        if name == "bound":
            s.add_argument("--value", help="eigenvalue to test (default: the genus eigenvalue)")
            s.add_argument("--gamma", default="0")
    for name in ("apply", "verify-eichler", "verify-annihilate"):
        s = h.add_parser(name, parents=[common])
        s.add_argument("--gram", required=True, help="lattice L of the theta series")
        s.add_argument("--p", type=int, required=True)
        s.add_argument("--n", type=int, required=True)
        if name == "verify-annihilate":
            s.add_argument("--a", type=int, default=1)
        else:
            s.add_argument("--j", type=int, required=True)
        if name == "apply":
            s.add_argument("--op", choices=("T", "Ttilde", "Tprime"), default="Ttilde")
        s.add_argument("--at", action="append", help="target Lambda (repeatable)")
        s.add_argument("--bound", type=int, default=8, help="diagonal bound when --at is absent")

    jc = top.add_parser("jacobi", help="index-1 Jacobi forms").add_subparsers(dest="which", required=True)
    for name in ("lift", "psi", "apply", "verify"):
        s = jc.add_parser(name, parents=[common])
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--bound", type=int, default=6)
        s.add_argument("--rbound", type=int, default=2)
        if name == "psi":
            s.add_argument("--store", help="JSON store file")
            continue
        s.add_argument("--gram", required=True)
        if name in ("apply", "verify"):
            s.add_argument("--p", type=int, required=True)
            s.add_argument("--j", type=int, required=True)
        if name == "apply":
            s.add_argument("--variant", choices=("Tj", "Ttilde", "Ttilde-combination"), default="Tj")
            s.add_argument("--psi", action="store_true")

    s = top.add_parser("suite", parents=[common], help="bundled verification suites")
    s.add_argument("name", choices=sorted(SUITES))
    return ap


COMMANDS = {"gauss": cmd_gauss, "ff": cmd_ff, "lattice": cmd_lattice, "theta": cmd_theta,
            "hecke": cmd_hecke, "jacobi": cmd_jacobi, "suite": cmd_suite}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, status = COMMANDS[args.command](args)
    except (DomainError, ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, separators=(",", ":")))
        return 2
    text = json.dumps(result, separators=(",", ":"))
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())

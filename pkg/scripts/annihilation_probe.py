"""Probe theta^{(2)}(L) | T'_{k+1}(p^2) for rank-3 lattices.

For each (L, p) the script reports how many coefficients vanish and whether the
coefficients agree with (2/p) times the p-neighbour theta sum, the value the
Eichler relation would give if its coefficient at j = 2 were extended formally.

    python3 scripts/annihilation_probe.py --bound 6
"""

import argparse
import json
from fractions import Fraction

from halfhecke.arith import fmt_rational
from halfhecke.hecke import apply_Tprime, diagonal_bounded, params_for
from halfhecke.lattice import neighbors, parse_gram
from halfhecke.theta import ThetaSource, repr_count

LATTICES = ("2I3", "diag:2,2,4")


def probe(gram: str, p: int, bound: int) -> dict:
    L = parse_gram(gram)
    src = ThetaSource(L)
    params = params_for(src, p, src.k + 1, 2)
    nbrs = neighbors(L, p, 1)
    targets = list(diagonal_bounded(2, bound))
    nonzero = agree = 0
    first = None
    for T in targets:
        lhs = apply_Tprime(src, T, params)
        if lhs != 0:
            nonzero += 1
            first = first or {"Lambda": T, "value": str(lhs)}
        rhs = Fraction(2, p) * sum(repr_count(K, T) for K in nbrs) if params.chi_prime_p == 1 else 0
        agree += lhs == rhs
    return {"lattice": gram, "p": p, "chi_prime": params.chi_prime_p, "targets": len(targets),
            "nonzero": nonzero, "matches_extension": agree, "first_nonzero": first,
            "v1": fmt_rational(Fraction(2, p)) if params.chi_prime_p == 1 else "0"}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=6)
    ap.add_argument("--primes", type=int, nargs="*", default=[3, 5, 7])
    args = ap.parse_args(argv)
    rows = [probe(g, p, args.bound) for g in LATTICES for p in args.primes]
    print(json.dumps(rows, indent=1))


if __name__ == "__main__":
    main()

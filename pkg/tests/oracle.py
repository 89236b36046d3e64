"""Brute-force Chevalley-Eilenberg Betti numbers, independent of solvcoh.

Cochains are dicts keyed by sorted index tuples; the differential is evaluated
straight from the textbook formula on ordered argument lists and ranks come
from sympy.  Nothing here imports the package under test.

Run as a script to regenerate ``fixtures/betti.json``.
"""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

import sympy


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


def _eval_basis(subset, args):
    """Value of e_subset^* on an ordered tuple of basis indices."""
    if sorted(args) != list(subset):
        return 0
    return _perm_sign(args)


def betti(dim, brackets, action=None, mdim=1):
    """Betti numbers of H^*(g, M).

    ``brackets`` maps (i, j) with i < j to a dict {k: coeff}; ``action`` is a
    list of mdim x mdim nested lists (one per basis element), default trivial.
    """
    def br(i, j):
        if i == j:
            return {}
        if i < j:
            return brackets.get((i, j), {})
        return {k: -c for k, c in brackets.get((j, i), {}).items()}

    if action is None:
        action = [[[0] * mdim for _ in range(mdim)] for _ in range(dim)]
    subsets = {n: list(itertools.combinations(range(dim), n)) for n in range(dim + 2)}
    ranks = {}
    for n in range(dim + 1):
        src = [(m, s) for m in range(mdim) for s in subsets[n]]
        tgt = [(m, s) for m in range(mdim) for s in subsets[n + 1]]
        mat = sympy.zeros(len(tgt), len(src))
        for col, (m, s) in enumerate(src):
            for row, (mo, t) in enumerate(tgt):
                ys = list(t)
                val = sympy.Integer(0)
                for i in range(n + 1):
                    rest = ys[:i] + ys[i + 1:]
                    coeff = _eval_basis(s, rest)
                    if coeff:
                        val += (-1) ** i * coeff * sympy.Rational(action[ys[i]][mo][m])
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        rest = [y for k, y in enumerate(ys) if k not in (i, j)]
                        for k, c in br(ys[i], ys[j]).items():
                            coeff = _eval_basis(s, [k] + rest)
                            if coeff and mo == m:
                                val += (-1) ** (i + j) * coeff * sympy.Rational(c)
                mat[row, col] = val
        ranks[n] = mat.rank() if mat.shape[0] and mat.shape[1] else 0
    out = []
    for n in range(dim + 1):
        cdim = mdim * len(subsets[n])
        prev = ranks[n - 1] if n > 0 else 0
        out.append(cdim - ranks[n] - prev)
    return out


# Named algebras, indices 0-based, u-block first then torus.
CASES = {
    # h3 with basis (x, z, y), [x, y] = z
    "h3": dict(dim=3, brackets={(0, 2): {1: 1}}),
    "abelian1": dict(dim=1, brackets={}),
    "abelian2": dict(dim=2, brackets={}),
    "abelian3": dict(dim=3, brackets={}),
    "abelian4": dict(dim=4, brackets={}),
    "abelian5": dict(dim=5, brackets={}),
    # Q x| Q with basis (u, D), [D, u] = u  ->  [u, D] = -u
    "bs_hull": dict(dim=2, brackets={(0, 1): {0: -1}}),
    # h3 x| Q with D = diag(1, 2, 1) on (x, z, y)
    "heis_hull": dict(
        dim=4,
        brackets={(0, 2): {1: 1}, (0, 3): {0: -1}, (1, 3): {1: -2}, (2, 3): {2: -1}},
    ),
    # bs hull with the affine 2-dim module: u -> E12, D -> E11
    "bs_hull_affine": dict(
        dim=2,
        brackets={(0, 1): {0: -1}},
        mdim=2,
        action=[[[0, 1], [0, 0]], [[1, 0], [0, 0]]],
    ),
    # same module twisted by the weight-1 character: D -> diag(2, 1)
    "bs_hull_weight": dict(
        dim=2,
        brackets={(0, 1): {0: -1}},
        mdim=2,
        action=[[[0, 1], [0, 0]], [[2, 0], [0, 1]]],
    ),
    # h3 with the standard 3-dim representation (x -> E12, z -> E13, y -> E23)
    "h3_standard": dict(
        dim=3,
        brackets={(0, 2): {1: 1}},
        mdim=3,
        action=[
            [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
            [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
            [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
        ],
    ),
}


def main(out: Path) -> None:
    data = {name: betti(**kw) for name, kw in CASES.items()}
    out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(json.dumps(data, sort_keys=True))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "fixtures" / "betti.json")

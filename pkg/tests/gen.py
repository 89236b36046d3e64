"""Random nilpotent Lie algebras and modules for the structural tests."""

from __future__ import annotations

import random
from fractions import Fraction

from solvcoh.cecoh import build_complex
from solvcoh.exactla import RatMatrix, Subspace, kernel_basis
from solvcoh.liealg import LieAlgebra, LieModule


def _rand_coeffs(rng: random.Random, n: int, lo: int = -2, hi: int = 2) -> list:
    return [Fraction(rng.randint(lo, hi)) for _ in range(n)]


def random_nilpotent(rng: random.Random, dim: int) -> LieAlgebra:
    """Iterated central extension of an abelian algebra by random 2-cocycles."""
    start = rng.randint(1, min(3, dim))
    h = LieAlgebra.abelian(start)
    while h.dim < dim:
        n = h.dim
        c = build_complex(h, check=False)
        omega = [Fraction(0)] * c.space_dim(2)
        if omega:
            z = kernel_basis(c.d(2))
            for v in z.basis:
                k = Fraction(rng.randint(-2, 2))
                omega = [a + k * b for a, b in zip(omega, v)]
        brackets = {}
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                old = list(h.bracket_basis(i, j)) if j < n else [Fraction(0)] * n
                w = omega[c.index(2, 0, (1 << i) | (1 << j))] if j < n else Fraction(0)
                coeffs = old + [w]
                if any(coeffs):
                    brackets[(i, j)] = coeffs
        h = LieAlgebra.from_brackets(n + 1, brackets)
    return h


def random_module(rng: random.Random, h: LieAlgebra, max_dim: int = 3) -> LieModule:
    """ρ(x) = f0(x)·1 + f1(x)·N + f2(x)·N², f_i vanishing on [h, h]."""
    m = rng.randint(1, max_dim)
    full = Subspace.full(h.dim)
    ann = h.bracket_span(full, full).annihilator()
    funcs = []
    for _ in range(3):
        f = [Fraction(0)] * h.dim
        for row in range(ann.rows):
            k = Fraction(rng.randint(-2, 2))
            f = [a + k * b for a, b in zip(f, ann.row(row))]
        funcs.append(f)
    if rng.random() < 0.7:
        funcs[0] = [Fraction(0)] * h.dim
    eye = RatMatrix.identity(m)
    N = RatMatrix.of([[1 if j == i + 1 else 0 for j in range(m)] for i in range(m)], m)
    N2 = N @ N
    mats = [eye.scale(funcs[0][x]) + N.scale(funcs[1][x]) + N2.scale(funcs[2][x]) for x in range(h.dim)]
    return LieModule.of(h, mats)


def random_cochain(rng: random.Random, size: int) -> tuple:
    return tuple(_rand_coeffs(rng, size, -3, 3))

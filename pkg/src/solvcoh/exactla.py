"""Exact linear algebra over Q.

Everything here works on :class:`fractions.Fraction` entries and never
rounds.  Matrices are small (a few hundred rows at most) and dense; the
algorithms are plain Gauss-Jordan elimination with the leftmost nonzero entry
as pivot, so every result is a deterministic function of the input.

Vectors are tuples of Fractions.  Subspaces are stored by their reduced row
echelon basis, which makes equality of subspaces equality of bases.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Sequence

from .errors import NonCommutingError, NotQSplitError, PreconditionError, SolvcohError

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple  # tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return str(q)


def vec(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return not any(v)


def add_vectors(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in v)


def linear_combination(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


@dataclass(frozen=True)
class RatMatrix:
    """Dense rational matrix, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entry count does not match shape {self.rows}x{self.cols}")

    @classmethod
    def of(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls.of([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Fraction]], rows: int) -> "RatMatrix":
        cols = len(columns)
        return cls(rows, cols, tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} applied to {self.rows}x{self.cols} matrix")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), ZERO) for r in self.entries)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.cols
        orows = other.entries
        out = []
        for r in self.entries:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(orows[k]):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return RatMatrix(self.rows, ocols, tuple(out))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return self.scale(-ONE)

    def scale(self, c) -> "RatMatrix":
        c = as_fraction(c)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.entries))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(min(self.rows, self.cols))), ZERO)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(rows), len(cols), tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return RatMatrix(self.rows, self.cols + other.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def kron(self, other: "RatMatrix") -> "RatMatrix":
        rows = []
        for r in self.entries:
            for s in other.entries:
                rows.append(tuple(a * b for a in r for b in s))
        return RatMatrix(self.rows * other.rows, self.cols * other.cols, tuple(rows))

    def commutator(self, other: "RatMatrix") -> "RatMatrix":
        return self @ other - other @ self

    def rank(self) -> int:
        return rref(self)[2]

    def to_json(self) -> list:
        return [[format_rational(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data, cols: int | None = None) -> "RatMatrix":
        return cls.of(data, cols)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def _rref_rows(rows: list, ncols: int):
    """In-place Gauss-Jordan on a list of row lists. Returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r]
        inv = ONE / piv[c]
        if inv != ONE:
            piv = [x * inv for x in piv]
            rows[r] = piv
        nzc = [(k, x) for k, x in enumerate(piv) if x and k >= c]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for k, x in nzc:
                        row[k] -= f * x
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(m: RatMatrix):
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)``; pivots are chosen leftmost-first, so the
    output depends only on the input entries.

    >>> R, piv, rk = rref(RatMatrix.of([[2, 4], [1, 2]]))
    >>> R.to_json(), piv, rk
    ([['1', '2'], ['0', '0']], (0,), 1)
    """
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(rows, m.cols)
    return RatMatrix(m.rows, m.cols, tuple(tuple(r) for r in rows)), tuple(pivots), len(pivots)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n held by its reduced echelon basis."""

    ambient_dim: int
    basis: tuple
    pivots: tuple = ()

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError(f"vector of length {len(r)} in Q^{ambient_dim}")
        pivots = _rref_rows(rows, ambient_dim)
        basis = tuple(tuple(r) for r in rows[: len(pivots)])
        return cls(ambient_dim, basis, tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        """Remainder of ``v`` after clearing every pivot coordinate."""
        out = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = out[c]
            if f:
                for k, x in enumerate(row):
                    if x:
                        out[k] -= f * x
        return tuple(out)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of ``v`` in the echelon basis; ``v`` must lie in the subspace."""
        if not self.contains(v):
            raise PreconditionError("vector is not in the subspace")
        return tuple(v[c] for c in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    __le__ = is_subspace_of

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient_dim, self.basis + other.basis)

    def annihilator(self) -> RatMatrix:
        """Matrix ``A`` with ``A v = 0`` exactly for ``v`` in this subspace."""
        if not self.basis:
            return RatMatrix.identity(self.ambient_dim)
        ker = kernel_basis(RatMatrix(self.dim, self.ambient_dim, self.basis))
        return RatMatrix(ker.dim, self.ambient_dim, ker.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        ann = other.annihilator()
        # v = sum c_i b_i lies in other iff ann (B^T c) = 0
        bt = RatMatrix.from_columns(self.basis, self.ambient_dim)
        coeffs = kernel_basis(ann @ bt)
        return Subspace.span(self.ambient_dim, (linear_combination(c, self.basis, self.ambient_dim) for c in coeffs.basis))

    def image_under(self, m: RatMatrix) -> "Subspace":
        return Subspace.span(m.rows, (m.apply(b) for b in self.basis))

    def matrix(self) -> RatMatrix:
        """Basis vectors as columns."""
        return RatMatrix.from_columns(self.basis, self.ambient_dim)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [[format_rational(x) for x in b] for b in self.basis]}


def preimage(m: RatMatrix, target: Subspace, domain: Subspace | None = None) -> Subspace:
    """{x in domain : m x in target}."""
    if domain is None:
        domain = Subspace.full(m.cols)
    if not domain.basis:
        return domain
    ann = target.annihilator()
    bt = domain.matrix()
    coeffs = kernel_basis(ann @ (m @ bt))
    return Subspace.span(m.cols, (linear_combination(c, domain.basis, m.cols) for c in coeffs.basis))


def kernel_basis(m: RatMatrix) -> Subspace:
    """Null space of ``m`` with its canonical echelon basis.

    >>> kernel_basis(RatMatrix.of([[1, 1]])).basis
    ((Fraction(1, 1), Fraction(-1, 1)),)
    """
    R, pivots, rank = rref(m)
    pivset = set(pivots)
    vectors = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R.entries[i][f]
        vectors.append(v)
    return Subspace.span(m.cols, vectors)


def image_basis(m: RatMatrix) -> Subspace:
    return Subspace.span(m.rows, m.columns())


def quotient_basis(big: Subspace, small: Subspace) -> list:
    """Representatives of a basis of ``big / small``.

    The small basis is completed greedily by walking big's echelon basis in
    order and keeping each vector that is independent of what came before.
    """
    if big.ambient_dim != small.ambient_dim:
        raise PreconditionError("subspaces live in different ambient spaces")
    for i, v in enumerate(small.basis):
        if not big.contains(v):
            raise PreconditionError(f"small-basis vector {i} {tuple(str(x) for x in v)} is not contained in big")
    current = small
    reps = []
    for v in big.basis:
        if not current.contains(v):
            reps.append(v)
            current = Subspace.span(big.ambient_dim, current.basis + (v,))
    return reps


class CoordinateMap:
    """Coordinates with respect to a list of independent vectors.

    Picks rows on which the basis is invertible once, then each lookup is a
    small matrix-vector product followed by a membership check.
    """

    def __init__(self, vectors: Sequence[Sequence[Fraction]], ambient_dim: int):
        self.vectors = [tuple(v) for v in vectors]
        self.ambient_dim = ambient_dim
        r = len(self.vectors)
        if r == 0:
            self._rows = ()
            self._inv = RatMatrix.zeros(0, 0)
            return
        _, rows, rank = rref(RatMatrix(r, ambient_dim, tuple(self.vectors)))
        if rank != r:
            raise PreconditionError("coordinate vectors are linearly dependent")
        self._rows = rows
        square = RatMatrix(r, r, tuple(tuple(self.vectors[j][i] for j in range(r)) for i in rows))
        self._inv = inverse(square)

    def __call__(self, v: Sequence[Fraction], check: bool = True) -> Vector:
        c = self._inv.apply(tuple(v[i] for i in self._rows))
        if check:
            back = linear_combination(c, self.vectors, self.ambient_dim)
            if back != tuple(v):
                raise PreconditionError("vector is not in the span")
        return c


def solve(m: RatMatrix, b: Sequence[Fraction]):
    """One solution of ``m x = b`` or None."""
    aug = [list(r) + [bb] for r, bb in zip(m.entries, b)]
    pivots = _rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for i, p in enumerate(pivots):
        x[p] = aug[i][m.cols]
    return tuple(x)


def inverse(m: RatMatrix) -> RatMatrix:
    if not m.is_square():
        raise PreconditionError("only square matrices are invertible")
    n = m.rows
    aug = [list(r) + list(unit_vector(n, i)) for i, r in enumerate(m.entries)]
    pivots = _rref_rows(aug, n)
    if len(pivots) != n or pivots[-1] >= n:
        raise PreconditionError("matrix is singular")
    return RatMatrix(n, n, tuple(tuple(r[n:]) for r in aug))


def det(m: RatMatrix) -> Fraction:
    if not m.is_square():
        raise PreconditionError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    rows = [list(r) for r in m.entries]
    d = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if rows[i][c]), None)
        if pr is None:
            return ZERO
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            d = -d
        piv = rows[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f / piv
                for k in range(c, n):
                    rows[i][k] -= f * rows[c][k]
    return d


def charpoly(m: RatMatrix) -> tuple:
    """Coefficients (c_0, ..., c_n) of det(x I - m), Faddeev-LeVerrier."""
    if not m.is_square():
        raise PreconditionError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    ident = RatMatrix.identity(n)
    mk = RatMatrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return tuple(coeffs)


def prime_bound() -> int:
    return int(os.environ.get("SOLVCOH_PRIME_BOUND", 10**6))


def factor_integer(n: int, bound: int | None = None) -> dict:
    """Prime factorization of ``|n|`` by trial division up to ``bound``.

    Raises SolvcohError if a cofactor survives that could hide a prime above
    the bound.
    """
    if bound is None:
        bound = prime_bound()
    n = abs(int(n))
    if n == 0:
        raise ValueError("0 has no factorization")
    out: dict = {}
    p = 2
    while p * p <= n:
        if p > bound:
            raise SolvcohError(f"factorization of {n} needs primes above the bound {bound} (set SOLVCOH_PRIME_BOUND)")
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        if n > bound and n > bound * bound:
            raise SolvcohError(f"cofactor {n} exceeds the factorization bound {bound}")
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list:
    fac = factor_integer(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _poly_eval(coeffs, x):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """Divide by (x - root); coeffs low-to-high, exact division assumed."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    carry = ZERO
    for k in range(n, 0, -1):
        carry = coeffs[k] + carry * root
        out[k - 1] = carry
    return out


def rational_roots(coeffs: Sequence[Fraction]):
    """Rational roots with multiplicity, plus the degree of the leftover factor.

    ``coeffs`` run from the constant term upward.
    """
    coeffs = [as_fraction(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    roots: dict = {}
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots[ZERO] = roots.get(ZERO, 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) > 1:
        den = 1
        for c in coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        candidates = sorted(
            {Fraction(s * p, q) for p in _divisors(ints[0]) for q in _divisors(ints[-1]) for s in (1, -1)}
        )
        for cand in candidates:
            while len(coeffs) > 1 and _poly_eval(coeffs, cand) == 0:
                roots[cand] = roots.get(cand, 0) + 1
                coeffs = _deflate(coeffs, cand)
    return dict(sorted(roots.items())), len(coeffs) - 1


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def eigenspaces(m: RatMatrix) -> list:
    """``[(eigenvalue, Subspace)]`` for a matrix diagonalizable over Q."""
    roots, leftover = rational_roots(charpoly(m))
    if leftover:
        raise NotQSplitError(f"not Q-split: characteristic polynomial has a factor of degree {leftover} without rational roots")
    out = []
    n = m.rows
    for lam, mult in roots.items():
        space = kernel_basis(m - RatMatrix.identity(n).scale(lam))
        if space.dim != mult:
            raise NotQSplitError(
                f"not Q-split: eigenvalue {lam} has algebraic multiplicity {mult} but geometric multiplicity {space.dim}"
            )
        out.append((lam, space))
    return out


def simultaneous_eigenspaces(ops: Sequence[RatMatrix], dim: int | None = None) -> list:
    """Joint eigenspace decomposition of commuting Q-diagonalizable operators.

    Returns ``[(weight, Subspace)]`` with weights as tuples of Fractions in
    lexicographic order.  With no operators the whole space has weight ().
    """
    ops = list(ops)
    if dim is None:
        if not ops:
            raise PreconditionError("ambient dimension is required when no operators are given")
        dim = ops[0].rows
    for k, op in enumerate(ops):
        if op.shape != (dim, dim):
            raise PreconditionError(f"operator {k} has shape {op.shape}, expected {(dim, dim)}")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not ops[i].commutator(ops[j]).is_zero():
                raise NonCommutingError(i, j)
    pieces = [((), Subspace.full(dim))]
    for op in ops:
        spaces = eigenspaces(op)
        refined = []
        for w, piece in pieces:
            for lam, sp in spaces:
                inter = piece.intersection(sp)
                if inter.dim:
                    refined.append((w + (lam,), inter))
        pieces = refined
    pieces.sort(key=lambda t: t[0])
    return pieces


def rational_power(base: Fraction, exponent: Fraction) -> Fraction:
    """``base ** exponent`` when the result is rational, else NotQSplitError."""
    base = as_fraction(base)
    exponent = as_fraction(exponent)
    if exponent.denominator == 1:
        return base ** int(exponent)
    q = exponent.denominator
    if base < 0 and q % 2 == 0:
        raise NotQSplitError(f"{base}^{exponent} is not rational")
    num = _int_root(abs(base.numerator), q)
    den = _int_root(base.denominator, q)
    if num is None or den is None:
        raise NotQSplitError(f"{base}^{exponent} is not rational")
    root = Fraction(num, den) * (-1 if base < 0 else 1)
    return root ** exponent.numerator


def _int_root(n: int, k: int):
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**k
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def matrix_from_eigendata(pieces: Sequence, scalars: Sequence[Fraction], dim: int) -> RatMatrix:
    """The operator acting on each listed subspace by the matching scalar."""
    cols = []
    diag = []
    for (_, sp), s in zip(pieces, scalars):
        for b in sp.basis:
            cols.append(b)
            diag.append(s)
    if len(cols) != dim:
        raise PreconditionError("eigenspaces do not span the ambient space")
    P = RatMatrix.from_columns(cols, dim)
    return P @ RatMatrix.diag(diag) @ inverse(P)


def all_rational_vectors(n: int, values: Sequence[int]):
    """Every vector in Q^n with entries from ``values`` (tests and searches)."""
    for t in _cartesian(values, repeat=n):
        yield tuple(Fraction(x) for x in t)

"""Chevalley-Eilenberg cochains, cohomology and cup products.

Basis of C^n(h, M): pairs (m, S) with m a module basis index and S an
n-element subset of the h-basis, written as a bitmask.  The basis cochain
e_S*⊗v_m takes the value v_m on the sorted tuple (e_s for s in S) and is
extended alternatingly.  Coordinates are ordered module index first, then
masks in increasing numeric value.

Signs all come from one rule: moving e_k past the elements of a sorted set R
costs (-1)^{#{r in R : r < k}}, a popcount below k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from .errors import PairingLawError, PreconditionError
from .exactla import (
    ONE,
    ZERO,
    CoordinateMap,
    RatMatrix,
    Subspace,
    det,
    format_rational,
    image_basis,
    kernel_basis,
    quotient_basis,
    unit_vector,
)
from .liealg import LieAlgebra, LieModule


def popcount(x: int) -> int:
    return bin(x).count("1")


def below(mask: int, k: int) -> int:
    """Number of elements of ``mask`` smaller than ``k``."""
    return popcount(mask & ((1 << k) - 1))


def mask_of(indices: Sequence[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def shuffle_sign(s: int, t: int) -> int:
    """Sign of the shuffle placing S before T, for disjoint masks."""
    inv = 0
    m = s
    while m:
        low = m & -m
        inv += popcount(t & (low - 1))
        m ^= low
    return -1 if inv & 1 else 1


def masks_of_degree(dim: int, n: int) -> tuple:
    if n < 0 or n > dim:
        return ()
    return tuple(sorted(mask_of(c) for c in combinations(range(dim), n)))


class CochainComplex:
    """C*(h, M) with its differentials, verified d∘d = 0 on construction."""

    def __init__(self, algebra: LieAlgebra, module: LieModule, check: bool = True):
        if module.algebra.dim != algebra.dim:
            raise PreconditionError("module is not a module over this algebra")
        self.algebra = algebra
        self.module = module
        self.dim = algebra.dim
        self.masks = tuple(masks_of_degree(self.dim, n) for n in range(self.dim + 1))
        self._pos = tuple({m: k for k, m in enumerate(ms)} for ms in self.masks)
        self.diffs = tuple(self._differential(n) for n in range(self.dim + 1))
        if check:
            for n in range(self.dim):
                if not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                    raise AssertionError(f"d∘d != 0 in degree {n}")
        self._cohomology: dict = {}

    def space_dim(self, n: int) -> int:
        if n < 0 or n > self.dim:
            return 0
        return self.module.dim * len(self.masks[n])

    def index(self, n: int, m: int, mask: int) -> int:
        return m * len(self.masks[n]) + self._pos[n][mask]

    def basis_label(self, n: int, k: int) -> tuple:
        size = len(self.masks[n])
        return k // size, self.masks[n][k % size]

    def d(self, n: int) -> RatMatrix:
        """d^n : C^n -> C^{n+1} (a zero matrix outside 0..dim)."""
        if 0 <= n <= self.dim:
            return self.diffs[n]
        return RatMatrix.zeros(self.space_dim(n + 1), self.space_dim(n))

    def apply_d(self, n: int, v: Sequence[Fraction]) -> tuple:
        return self.d(n).apply(v)

    def _differential(self, n: int) -> RatMatrix:
        g = self.algebra
        dim = self.dim
        mdim = self.module.dim
        rows = self.space_dim(n + 1)
        cols = self.space_dim(n)
        if rows == 0:
            return RatMatrix.zeros(0, cols)
        out = [[ZERO] * cols for _ in range(rows)]
        rho = self.module.action
        brackets = g.brackets
        for s_mask in self.masks[n]:
            # terms Y_i·φ(...Ŷ_i...): T = S ∪ {t}
            for t in range(dim):
                if s_mask >> t & 1:
                    continue
                t_mask = s_mask | (1 << t)
                sign = -1 if below(s_mask, t) & 1 else 1
                mat = rho[t]
                for m in range(mdim):
                    col = self.index(n, m, s_mask)
                    for mp in range(mdim):
                        a = mat.entries[mp][m]
                        if a:
                            out[self.index(n + 1, mp, t_mask)][col] += sign * a
            # terms φ([Y_i, Y_j], ...): pick k in S, R = S \ {k}, and a < b outside R
            for k in indices_of(s_mask):
                r_mask = s_mask ^ (1 << k)
                sign_k = -1 if below(r_mask, k) & 1 else 1
                for (a, b), coords in brackets:
                    c = coords[k]
                    if not c or (r_mask >> a & 1) or (r_mask >> b & 1):
                        continue
                    t_mask = r_mask | (1 << a) | (1 << b)
                    ia = below(t_mask, a)
                    ib = below(t_mask, b)
                    sign = sign_k * (-1 if (ia + ib) & 1 else 1)
                    for m in range(mdim):
                        out[self.index(n + 1, m, t_mask)][self.index(n, m, s_mask)] += sign * c
        return RatMatrix(rows, cols, tuple(tuple(r) for r in out))

    def cohomology(self, n: int) -> "CohomologySpace":
        if n < 0:
            raise PreconditionError(f"cohomological degree must be nonnegative, got {n}")
        if n not in self._cohomology:
            self._cohomology[n] = _compute_cohomology(self, n)
        return self._cohomology[n]

    def betti(self) -> tuple:
        return tuple(self.cohomology(n).dim for n in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.space_dim(n) for n in range(self.dim + 1))

    def cochain_to_json(self, n: int, v: Sequence[Fraction]) -> dict:
        coeffs = []
        for k, c in enumerate(v):
            if c:
                m, mask = self.basis_label(n, k)
                coeffs.append([m, list(indices_of(mask)), format_rational(c)])
        return {"degree": n, "coefficients": coeffs}

    def cochain_from_json(self, data: dict) -> tuple:
        n = int(data["degree"])
        v = [ZERO] * self.space_dim(n)
        for m, subset, c in data["coefficients"]:
            if len(subset) != n or len(set(subset)) != n:
                raise PreconditionError(f"subset {subset} is not an {n}-element set")
            v[self.index(n, int(m), mask_of(subset))] += Fraction(c)
        return tuple(v)

    def basis_cochain(self, n: int, subset: Sequence[int], m: int = 0) -> tuple:
        return unit_vector(self.space_dim(n), self.index(n, m, mask_of(subset)))


def build_complex(h: LieAlgebra, M: LieModule | None = None, check: bool = True) -> CochainComplex:
    if M is None:
        M = LieModule.trivial(h)
    elif check:
        M.validate()
    return CochainComplex(h, M, check=check)


@dataclass
class CohomologySpace:
    degree: int
    ambient_dim: int
    representatives: list
    kernel: Subspace
    image: Subspace
    ambient_coords: list | None = None  # set for subspaces of a larger H^n
    _cmap: CoordinateMap | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, cocycle: Sequence[Fraction]) -> tuple:
        """Class of ``cocycle`` in the representative basis."""
        if self._cmap is None:
            self._cmap = CoordinateMap(list(self.representatives) + list(self.image.basis), self.ambient_dim)
        return self._cmap(cocycle)[: self.dim]

    def is_coboundary(self, v: Sequence[Fraction]) -> bool:
        return self.image.contains(v)

    def to_json(self, complex_: CochainComplex | None = None) -> dict:
        if complex_ is not None:
            reps = [complex_.cochain_to_json(self.degree, r) for r in self.representatives]
        else:
            reps = [[format_rational(x) for x in r] for r in self.representatives]
        return {"degree": self.degree, "dim": self.dim, "representatives": reps}


def _compute_cohomology(c: CochainComplex, n: int) -> CohomologySpace:
    size = c.space_dim(n)
    if size == 0:
        z = Subspace.zero(0)
        return CohomologySpace(n, 0, [], z, z)
    ker = kernel_basis(c.d(n))
    img = image_basis(c.d(n - 1)) if n > 0 else Subspace.zero(size)
    reps = quotient_basis(ker, img)
    return CohomologySpace(n, size, reps, ker, img)


def cohomology(c: CochainComplex, n: int) -> CohomologySpace:
    return c.cohomology(n)


# ---------------------------------------------------------------- actions


def _check_ideal(c: CochainComplex, ambient: LieAlgebra):
    h = c.algebra
    n = h.dim
    if ambient.dim < n:
        raise PreconditionError("ambient algebra is smaller than the cochain algebra")
    for i in range(n):
        for j in range(i + 1, n):
            if ambient.bracket_basis(i, j) != h.bracket_basis(i, j) + (ZERO,) * (ambient.dim - n):
                raise PreconditionError(f"ambient bracket [{i},{j}] differs from the subalgebra's")
    for x in range(ambient.dim):
        for j in range(n):
            v = ambient.bracket_basis(x, j)
            if any(v[n:]):
                raise PreconditionError(f"[e_{x}, e_{j}] leaves the subalgebra: not an ideal")


def _ambient_module(c: CochainComplex, ambient: LieAlgebra, module: LieModule | None) -> LieModule:
    if module is not None:
        if module.dim != c.module.dim or module.algebra.dim != ambient.dim:
            raise PreconditionError("ambient module does not match the complex")
        return module
    if c.module.is_trivial():
        return LieModule.trivial(ambient, c.module.dim)
    raise PreconditionError("a nontrivial module needs its ambient extension")


def ambient_action_matrix(
    c: CochainComplex, ambient: LieAlgebra, X: Sequence[Fraction], n: int, module: LieModule | None = None, check: bool = True
) -> RatMatrix:
    """Matrix of φ ↦ X·φ on C^n(h, M), with h the first dim h basis vectors of ambient."""
    if check:
        _check_ideal(c, ambient)
    mod = _ambient_module(c, ambient, module)
    hd = c.dim
    size = c.space_dim(n)
    if size == 0:
        return RatMatrix.zeros(0, 0)
    # A[s][j] = coefficient of e_s in [X, e_j]
    cols = [ambient.bracket(X, unit_vector(ambient.dim, j))[:hd] for j in range(hd)]
    rho = mod.act(X)
    mdim = c.module.dim
    out = [[ZERO] * size for _ in range(size)]
    for s_mask in c.masks[n]:
        for m in range(mdim):
            col = c.index(n, m, s_mask)
            for mp in range(mdim):
                a = rho.entries[mp][m]
                if a:
                    out[c.index(n, mp, s_mask)][col] += a
            for s in indices_of(s_mask):
                rest = s_mask ^ (1 << s)
                pos = below(rest, s)
                for j in range(hd):
                    a = cols[j][s]
                    if not a or (rest >> j & 1):
                        continue
                    sign = -1 if (below(rest, j) - pos) & 1 else 1
                    out[c.index(n, m, rest | (1 << j))][col] -= sign * a
    return RatMatrix(size, size, tuple(tuple(r) for r in out))


def ambient_action(
    X: Sequence[Fraction], phi: Sequence[Fraction], c: CochainComplex, ambient: LieAlgebra, n: int, module: LieModule | None = None
) -> tuple:
    """(X·φ)(Y_1..Y_n) = X·φ(Y_1..Y_n) − Σ φ(Y_1..[X,Y_i]..Y_n)."""
    return ambient_action_matrix(c, ambient, X, n, module).apply(phi)


def induced_matrix(H: CohomologySpace, cochain_map: RatMatrix) -> RatMatrix:
    """Matrix of the map a chain map induces on H (representative basis)."""
    cols = [H.coordinates(cochain_map.apply(r)) for r in H.representatives]
    return RatMatrix.from_columns(cols, H.dim)


def torus_indices(c: CochainComplex, ambient: LieAlgebra) -> range:
    return range(c.dim, ambient.dim)


def invariant_cohomology(c: CochainComplex, ambient: LieAlgebra, module: LieModule | None = None) -> list:
    """Per degree, the classes in H^n(h, M) killed by every ambient basis element outside h."""
    _check_ideal(c, ambient)
    out = []
    for n in range(c.dim + 1):
        H = c.cohomology(n)
        ops = [
            induced_matrix(H, ambient_action_matrix(c, ambient, unit_vector(ambient.dim, x), n, module, check=False))
            for x in torus_indices(c, ambient)
        ]
        out.append(joint_kernel_space(H, ops))
    return out


def joint_kernel_space(H: CohomologySpace, ops: Sequence[RatMatrix]) -> CohomologySpace:
    if ops and H.dim:
        stacked = RatMatrix(sum(o.rows for o in ops), H.dim, tuple(r for o in ops for r in o.entries))
        fixed = kernel_basis(stacked)
    else:
        fixed = Subspace.full(H.dim)
    reps = [_combine(coords, H.representatives, H.ambient_dim) for coords in fixed.basis]
    return CohomologySpace(H.degree, H.ambient_dim, reps, H.kernel, H.image, ambient_coords=list(fixed.basis))


def _combine(coords, vectors, n):
    out = [ZERO] * n
    for c, v in zip(coords, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    out[k] += c * x
    return tuple(out)


def exterior_power_matrix(A: RatMatrix, n: int) -> RatMatrix:
    """∧^n of ``A`` on masks of size n: entry [S, T] = det A[S, T]."""
    masks = masks_of_degree(A.rows, n)
    idx = [indices_of(m) for m in masks]
    rows = tuple(tuple(det(A.submatrix(s, t)) for t in idx) for s in idx)
    return RatMatrix(len(masks), len(masks), rows)


def group_action_matrix(c: CochainComplex, ad_inverse: RatMatrix, rho: RatMatrix, n: int) -> RatMatrix:
    """(s·φ)(Y) = ρ(s) φ(Ad(s)^{-1} Y_1, ..., Ad(s)^{-1} Y_n) on C^n(h, M).

    The entry at ((m', T), (m, S)) is ρ[m', m] · det(Ad^{-1}[S, T]).
    """
    size = c.space_dim(n)
    if size == 0:
        return RatMatrix.zeros(0, 0)
    wedge = exterior_power_matrix(ad_inverse, n)
    nm = len(c.masks[n])
    mdim = c.module.dim
    rows = [[ZERO] * size for _ in range(size)]
    for mp in range(mdim):
        for m in range(mdim):
            r = rho.entries[mp][m]
            if not r:
                continue
            for ti in range(nm):
                for si in range(nm):
                    w = wedge.entries[si][ti]
                    if w:
                        rows[mp * nm + ti][m * nm + si] += r * w
    return RatMatrix(size, size, tuple(tuple(r) for r in rows))


# ------------------------------------------------------------- cup products


@dataclass(frozen=True)
class Pairing:
    """Bilinear M × N → P given on basis vectors: table[a][b] is a vector of P."""

    left: LieModule
    right: LieModule
    target: LieModule
    table: tuple

    @classmethod
    def scalar(cls, algebra: LieAlgebra) -> "Pairing":
        triv = LieModule.trivial(algebra)
        return cls(triv, triv, triv, (((ONE,),),))

    @classmethod
    def tensor(cls, left: LieModule, right: LieModule) -> "Pairing":
        from .liealg import tensor_module

        target = tensor_module(left, right)
        n = right.dim
        table = tuple(tuple(unit_vector(target.dim, a * n + b) for b in range(right.dim)) for a in range(left.dim))
        return cls(left, right, target, table)

    @classmethod
    def module_scalar(cls, module: LieModule) -> "Pairing":
        """Q × M → M, for a trivial 1-dimensional left factor."""
        triv = LieModule.trivial(module.algebra)
        table = (tuple(unit_vector(module.dim, b) for b in range(module.dim)),)
        return cls(triv, module, module, table)

    def apply(self, a: int, b: int) -> tuple:
        return self.table[a][b]

    def law_failure(self):
        """First (x, a, b) where X·(m∪n) != (X·m)∪n + m∪(X·n), or None."""
        g = self.left.algebra
        for x in range(g.dim):
            rl, rr, rt = self.left.action[x], self.right.action[x], self.target.action[x]
            for a in range(self.left.dim):
                for b in range(self.right.dim):
                    lhs = rt.apply(self.table[a][b])
                    rhs = [ZERO] * self.target.dim
                    for a2 in range(self.left.dim):
                        c = rl.entries[a2][a]
                        if c:
                            rhs = [u + c * v for u, v in zip(rhs, self.table[a2][b])]
                    for b2 in range(self.right.dim):
                        c = rr.entries[b2][b]
                        if c:
                            rhs = [u + c * v for u, v in zip(rhs, self.table[a][b2])]
                    if tuple(rhs) != lhs:
                        return (x, a, b)
        return None

    def validate(self) -> "Pairing":
        bad = self.law_failure()
        if bad is not None:
            raise PairingLawError(f"pairing law fails for algebra basis {bad[0]} on module basis pair ({bad[1]}, {bad[2]})")
        return self


def cup(
    phi: Sequence[Fraction],
    i: int,
    psi: Sequence[Fraction],
    j: int,
    c_left: CochainComplex,
    c_right: CochainComplex | None = None,
    c_target: CochainComplex | None = None,
    pairing: Pairing | None = None,
) -> tuple:
    """Shuffle product of an i-cochain and a j-cochain.

    (φ∪ψ)(Y_1..Y_{i+j}) = Σ over (i,j)-shuffles σ of sgn(σ) φ(Y_σ(1..i)) ∪ ψ(Y_σ(i+1..i+j)).
    """
    c_right = c_right or c_left
    c_target = c_target or c_left
    n = c_left.dim
    if i + j > n:
        return ()
    out = [ZERO] * c_target.space_dim(i + j)
    left = [(c_left.basis_label(i, k), x) for k, x in enumerate(phi) if x]
    right = [(c_right.basis_label(j, k), y) for k, y in enumerate(psi) if y]
    for (ma, sa), x in left:
        for (mb, sb), y in right:
            if sa & sb:
                continue
            coef = x * y * shuffle_sign(sa, sb)
            u = sa | sb
            if pairing is None:
                out[c_target.index(i + j, 0, u)] += coef
            else:
                for p, val in enumerate(pairing.table[ma][mb]):
                    if val:
                        out[c_target.index(i + j, p, u)] += coef * val
    return tuple(out)


# ------------------------------------------------------------ graded rings


@dataclass
class GradedRing:
    """Finite graded ring by structure constants.

    ``products[(i, j)]`` has shape dims[i+j] × (dims[i]·dims[j]); column
    a·dims[j] + b holds the product of basis classes a (degree i) and b
    (degree j).  ``unit`` is the unit's coordinate vector in degree 0.
    """

    dims: tuple
    products: dict
    unit: tuple | None = None
    labels: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def multiply(self, i: int, x: Sequence[Fraction], j: int, y: Sequence[Fraction]) -> tuple:
        if i + j > self.top:
            return ()
        P = self.products[(i, j)]
        bj = self.dims[j]
        out = [ZERO] * self.dims[i + j]
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if yb:
                    col = a * bj + b
                    for r in range(P.rows):
                        v = P.entries[r][col]
                        if v:
                            out[r] += xa * yb * v
        return tuple(out)

    def basis_product(self, i: int, a: int, j: int, b: int) -> tuple:
        if i + j > self.top:
            return ()
        return self.products[(i, j)].column(a * self.dims[j] + b)

    def associativity_failure(self):
        for i in range(len(self.dims)):
            for j in range(len(self.dims) - i):
                for k in range(len(self.dims) - i - j):
                    for a in range(self.dims[i]):
                        for b in range(self.dims[j]):
                            ab = self.basis_product(i, a, j, b)
                            for c in range(self.dims[k]):
                                left = self.multiply(i + j, ab, k, unit_vector(self.dims[k], c))
                                bc = self.basis_product(j, b, k, c)
                                right = self.multiply(i, unit_vector(self.dims[i], a), j + k, bc)
                                if left != right:
                                    return ((i, a), (j, b), (k, c))
        return None

    def commutativity_failure(self):
        for i in range(len(self.dims)):
            for j in range(len(self.dims) - i):
                sign = -1 if (i * j) & 1 else 1
                for a in range(self.dims[i]):
                    for b in range(self.dims[j]):
                        x = self.basis_product(i, a, j, b)
                        y = self.basis_product(j, b, i, a)
                        if x != tuple(sign * t for t in y):
                            return ((i, a), (j, b))
        return None

    def unit_failure(self):
        if self.unit is None:
            return None
        for n in range(len(self.dims)):
            for a in range(self.dims[n]):
                e = unit_vector(self.dims[n], a)
                if self.multiply(0, self.unit, n, e) != e or self.multiply(n, e, 0, self.unit) != e:
                    return (n, a)
        return None

    def verify(self) -> "GradedRing":
        for name, fn in (
            ("associativity", self.associativity_failure),
            ("graded commutativity", self.commutativity_failure),
            ("unit", self.unit_failure),
        ):
            bad = fn()
            if bad is not None:
                raise AssertionError(f"{name} fails at {bad}")
        return self

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "products": {f"{i},{j}": m.to_json() for (i, j), m in sorted(self.products.items())},
        }


def ring_from_spaces(
    spaces: Sequence[CohomologySpace], c: CochainComplex, pairing: Pairing | None = None, unit: tuple | None = None
) -> GradedRing:
    """Structure constants of the cup product on the given representative bases.

    The spaces must be closed under cup (a subring), which is checked through
    the coordinate lookup.
    """
    dims = tuple(s.dim for s in spaces)
    top = len(dims) - 1
    products = {}
    for i in range(top + 1):
        for j in range(top + 1 - i):
            target = spaces[i + j]
            cols = []
            for x in spaces[i].representatives:
                for y in spaces[j].representatives:
                    prod = cup(x, i, y, j, c, pairing=pairing)
                    cols.append(_coords_in(target, prod))
            products[(i, j)] = RatMatrix.from_columns(cols, target.dim) if cols else RatMatrix.zeros(target.dim, 0)
    return GradedRing(dims, products, unit)


def _coords_in(space: CohomologySpace, cocycle) -> tuple:
    return space.coordinates(cocycle)


def ring_structure(c: CochainComplex, pairing: Pairing | None = None, verify: bool = True) -> GradedRing:
    """Cohomology ring of a complex with trivial 1-dim coefficients or a self-pairing."""
    if pairing is None and not (c.module.dim == 1 and c.module.is_trivial()):
        raise PreconditionError("ring structure needs trivial coefficients or an explicit self-pairing")
    spaces = [c.cohomology(n) for n in range(c.dim + 1)]
    unit = None
    if pairing is None:
        unit = spaces[0].coordinates((ONE,)) if spaces[0].dim else None
    ring = ring_from_spaces(spaces, c, pairing, unit)
    if verify and pairing is None:
        ring.verify()
    return ring


def invariant_ring(c: CochainComplex, ambient: LieAlgebra, verify: bool = True) -> tuple:
    """(invariant spaces, ring on them) for trivial coefficients."""
    spaces = invariant_cohomology(c, ambient)
    unit = spaces[0].coordinates((ONE,)) if spaces[0].dim else None
    ring = ring_from_spaces(spaces, c, None, unit)
    if verify:
        ring.verify()
    return spaces, ring


def exterior_ring(k: int) -> GradedRing:
    """∧(Q^k) with basis of degree n the n-subsets in mask order."""
    masks = [masks_of_degree(k, n) for n in range(k + 1)]
    pos = [{m: i for i, m in enumerate(ms)} for ms in masks]
    dims = tuple(len(ms) for ms in masks)
    products = {}
    for i in range(k + 1):
        for j in range(k + 1 - i):
            cols = []
            for s in masks[i]:
                for t in masks[j]:
                    col = [ZERO] * dims[i + j]
                    if not s & t:
                        col[pos[i + j][s | t]] = Fraction(shuffle_sign(s, t))
                    cols.append(tuple(col))
            products[(i, j)] = RatMatrix.from_columns(cols, dims[i + j])
    return GradedRing(dims, products, (ONE,))


def tensor_rings(A: GradedRing, B: GradedRing, top: int | None = None) -> GradedRing:
    """A ⊗ B with (x⊗a)(y⊗b) = (-1)^{|a||y|} xy ⊗ ab.

    Degree n basis: blocks for i = 0..n (i = degree in A), inside a block
    the A-index is major.
    """
    if top is None:
        top = A.top + B.top
    layout = []
    for n in range(top + 1):
        entries = []
        for i in range(n + 1):
            j = n - i
            for a in range(A.dim(i)):
                for b in range(B.dim(j)):
                    entries.append((i, a, j, b))
        layout.append(entries)
    index = [{e: k for k, e in enumerate(ents)} for ents in layout]
    dims = tuple(len(e) for e in layout)
    products = {}
    for n1 in range(top + 1):
        for n2 in range(top + 1 - n1):
            cols = []
            for (i1, a1, j1, b1) in layout[n1]:
                for (i2, a2, j2, b2) in layout[n2]:
                    col = [ZERO] * dims[n1 + n2]
                    if i1 + i2 <= A.top and j1 + j2 <= B.top:
                        xa = A.basis_product(i1, a1, i2, a2)
                        yb = B.basis_product(j1, b1, j2, b2)
                        sign = -1 if (j1 * i2) & 1 else 1
                        for p, u in enumerate(xa):
                            if not u:
                                continue
                            for q, w in enumerate(yb):
                                if w:
                                    col[index[n1 + n2][(i1 + i2, p, j1 + j2, q)]] += sign * u * w
                    cols.append(tuple(col))
            products[(n1, n2)] = RatMatrix.from_columns(cols, dims[n1 + n2])
    unit = None
    if A.unit is not None and B.unit is not None:
        u = [ZERO] * dims[0]
        for (i, a, j, b), k in index[0].items():
            u[k] = A.unit[a] * B.unit[b]
        unit = tuple(u)
    ring = GradedRing(dims, products, unit)
    ring.labels["layout"] = layout
    return ring


# ------------------------------------------------------------ fingerprints


@dataclass(frozen=True)
class Fingerprint:
    poincare: tuple
    cup_power_ranks: tuple
    product_ranks: tuple  # ((i, j, rank), ...)

    def to_json(self) -> dict:
        return {
            "poincare": list(self.poincare),
            "cup_power_ranks": list(self.cup_power_ranks),
            "product_ranks": [list(t) for t in self.product_ranks],
        }


def ring_invariants(r: GradedRing) -> Fingerprint:
    """Poincaré series, ranks of ∧^a H^1 → H^a and of every H^i ⊗ H^j → H^{i+j}."""
    top = r.top
    powers = []
    b1 = r.dim(1)
    for a in range(top + 1):
        if a == 0:
            powers.append(1 if r.dim(0) and r.unit is not None and any(r.unit) else 0)
            continue
        vecs = []
        for combo in combinations(range(b1), a):
            v = unit_vector(b1, combo[0])
            deg = 1
            for g in combo[1:]:
                v = r.multiply(deg, v, 1, unit_vector(b1, g))
                deg += 1
            if v:
                vecs.append(v)
        powers.append(Subspace.span(r.dim(a), vecs).dim if vecs else 0)
    ranks = []
    for i in range(top + 1):
        for j in range(top + 1 - i):
            m = r.products[(i, j)]
            ranks.append((i, j, m.rank() if m.rows and m.cols else 0))
    return Fingerprint(tuple(r.dims), tuple(powers), tuple(ranks))


def ring_map_failure(A: GradedRing, B: GradedRing, maps: Sequence[RatMatrix]):
    """First obstruction to ``maps`` being a graded ring isomorphism A → B, or None."""
    if A.dims != B.dims:
        return ("dims", A.dims, B.dims)
    for n, f in enumerate(maps):
        if f.shape != (B.dim(n), A.dim(n)):
            return ("shape", n)
        if f.rows and f.rank() != f.rows:
            return ("not invertible", n)
    for i in range(A.top + 1):
        for j in range(A.top + 1 - i):
            for a in range(A.dim(i)):
                for b in range(A.dim(j)):
                    lhs = maps[i + j].apply(A.basis_product(i, a, j, b))
                    rhs = B.multiply(i, maps[i].column(a), j, maps[j].column(b))
                    if lhs != rhs:
                        return ("product", (i, a), (j, b))
    return None


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0

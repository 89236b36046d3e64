"""Finite-dimensional Lie algebras over Q, their modules and semidirect sums.

A Lie algebra is given by structure constants on a fixed basis e_0..e_{n-1}:
``brackets[(i, j)]`` is the coordinate vector of [e_i, e_j] and is stored
only for i < j.  Antisymmetry is therefore built in and only Jacobi has to be
checked.

Semidirect sums u ⋊ t always put the basis of u first and the torus basis
last.  Downstream code (the Hochschild-Serre filtration, the bitmask cochain
basis) relies on that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import DerivationError, JacobiError, ModuleLawError, NonCommutingError, PreconditionError
from .exactla import (
    ZERO,
    RatMatrix,
    Subspace,
    as_fraction,
    eigenspaces,
    simultaneous_eigenspaces,
    unit_vector,
    zero_vector,
)


def _default_names(dim: int) -> tuple:
    return tuple(f"e{i}" for i in range(dim))


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    brackets: tuple  # ((i, j), coords) pairs with i < j and nonzero coords
    basis_names: tuple = ()

    def __post_init__(self):
        if not self.basis_names:
            object.__setattr__(self, "basis_names", _default_names(self.dim))
        if len(self.basis_names) != self.dim:
            raise PreconditionError(f"{len(self.basis_names)} basis names for a {self.dim}-dimensional algebra")

    @classmethod
    def from_brackets(cls, dim: int, brackets, names: Sequence[str] | None = None) -> "LieAlgebra":
        """Build from ``{(i, j): coords}`` or ``[[i, j, coords], ...]``.

        Pairs with i > j are accepted and flipped with a sign; [e_i, e_i]
        must vanish.
        """
        items = brackets.items() if isinstance(brackets, Mapping) else ((tuple(b[:2]), b[2]) for b in brackets)
        table: dict = {}
        for (i, j), coords in items:
            i, j = int(i), int(j)
            if isinstance(coords, Mapping):
                v = [ZERO] * dim
                for k, c in coords.items():
                    v[int(k)] = as_fraction(c)
                coords = v
            v = tuple(as_fraction(c) for c in coords)
            if len(v) != dim:
                raise PreconditionError(f"bracket [{i},{j}] has {len(v)} coordinates, expected {dim}")
            if not (0 <= i < dim and 0 <= j < dim):
                raise PreconditionError(f"bracket index ({i},{j}) out of range for dimension {dim}")
            if i == j:
                if any(v):
                    raise PreconditionError(f"[e_{i}, e_{i}] must be zero")
                continue
            if i > j:
                i, j, v = j, i, tuple(-c for c in v)
            if (i, j) in table:
                raise PreconditionError(f"bracket ({i},{j}) given twice")
            if any(v):
                table[(i, j)] = v
        return cls(dim, tuple(sorted(table.items())), tuple(names) if names else ())

    @classmethod
    def abelian(cls, dim: int, names: Sequence[str] | None = None) -> "LieAlgebra":
        return cls(dim, (), tuple(names) if names else ())

    @cached_property
    def _table(self) -> dict:
        return dict(self.brackets)

    def bracket_basis(self, i: int, j: int) -> tuple:
        if i < j:
            return self._table.get((i, j), zero_vector(self.dim))
        if i > j:
            v = self._table.get((j, i))
            return tuple(-c for c in v) if v else zero_vector(self.dim)
        return zero_vector(self.dim)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for (i, j), v in self.brackets:
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for k, a in enumerate(v):
                    if a:
                        out[k] += c * a
        return tuple(out)

    @cached_property
    def ad_basis(self) -> tuple:
        """ad(e_i) as matrices; column j is [e_i, e_j]."""
        return tuple(
            RatMatrix.from_columns([self.bracket_basis(i, j) for j in range(self.dim)], self.dim)
            for i in range(self.dim)
        )

    def ad(self, x: Sequence) -> RatMatrix:
        cols = [self.bracket(x, unit_vector(self.dim, j)) for j in range(self.dim)]
        return RatMatrix.from_columns(cols, self.dim)

    def is_abelian(self) -> bool:
        return not self.brackets

    def bracket_span(self, a: Subspace, b: Subspace) -> Subspace:
        return Subspace.span(self.dim, (self.bracket(x, y) for x in a.basis for y in b.basis))

    def is_ideal(self, sub: Subspace) -> bool:
        full = Subspace.full(self.dim)
        return self.bracket_span(full, sub).is_subspace_of(sub)

    def generated_subalgebra(self, vectors: Sequence[Sequence]) -> Subspace:
        current = Subspace.span(self.dim, vectors)
        while True:
            nxt = current + self.bracket_span(current, current)
            if nxt.dim == current.dim:
                return current
            current = nxt

    def to_json(self) -> dict:
        from .exactla import format_rational

        return {
            "dim": self.dim,
            "brackets": [[i, j, [format_rational(c) for c in v]] for (i, j), v in self.brackets],
        }


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple | None = None
    residual: tuple | None = None

    def __bool__(self):
        return self.ok

    def raise_if_failed(self):
        if not self.ok:
            raise JacobiError(self.triple, self.residual)


def validate_jacobi(g: LieAlgebra) -> JacobiReport:
    """Check Jacobi on every basis triple i < j < k; report the first failure."""
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                r1 = g.bracket(unit_vector(n, i), g.bracket_basis(j, k))
                r2 = g.bracket(unit_vector(n, j), g.bracket_basis(k, i))
                r3 = g.bracket(unit_vector(n, k), g.bracket_basis(i, j))
                res = tuple(a + b + c for a, b, c in zip(r1, r2, r3))
                if any(res):
                    return JacobiReport(False, (i, j, k), res)
    return JacobiReport(True)


@dataclass(frozen=True)
class LieModule:
    algebra: LieAlgebra
    dim: int
    action: tuple  # one RatMatrix per basis element of the algebra

    def __post_init__(self):
        if len(self.action) != self.algebra.dim:
            raise PreconditionError(f"{len(self.action)} action matrices for a {self.algebra.dim}-dimensional algebra")
        for k, m in enumerate(self.action):
            if m.shape != (self.dim, self.dim):
                raise PreconditionError(f"action matrix {k} has shape {m.shape}, expected {(self.dim, self.dim)}")

    @classmethod
    def of(cls, algebra: LieAlgebra, matrices: Sequence, validate: bool = True, dim: int | None = None) -> "LieModule":
        mats = tuple(m if isinstance(m, RatMatrix) else RatMatrix.of(m) for m in matrices)
        if dim is None:
            dim = mats[0].rows if mats else 1
        mod = cls(algebra, dim, mats)
        if validate:
            mod.validate()
        return mod

    @classmethod
    def trivial(cls, algebra: LieAlgebra, dim: int = 1) -> "LieModule":
        z = RatMatrix.zeros(dim, dim)
        return cls(algebra, dim, (z,) * algebra.dim)

    @classmethod
    def adjoint(cls, algebra: LieAlgebra) -> "LieModule":
        return cls(algebra, algebra.dim, algebra.ad_basis)

    def is_trivial(self) -> bool:
        return all(m.is_zero() for m in self.action)

    def act(self, x: Sequence) -> RatMatrix:
        out = RatMatrix.zeros(self.dim, self.dim)
        for c, m in zip(x, self.action):
            if c:
                out = out + m.scale(c)
        return out

    def law_failure(self):
        """First pair (i, j) with rho([e_i,e_j]) != [rho(e_i), rho(e_j)], or None."""
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.act(g.bracket_basis(i, j))
                if lhs != self.action[i].commutator(self.action[j]):
                    return (i, j)
        return None

    def validate(self) -> "LieModule":
        bad = self.law_failure()
        if bad is not None:
            raise ModuleLawError(bad)
        return self

    def restrict(self, sub: LieAlgebra, count: int | None = None) -> "LieModule":
        """Restriction to the subalgebra spanned by the first ``count`` basis vectors."""
        count = sub.dim if count is None else count
        return LieModule(sub, self.dim, self.action[:count])


def tensor_module(m: LieModule, n: LieModule) -> LieModule:
    """M ⊗ N with x acting as x⊗1 + 1⊗x; basis index a*dim N + b."""
    if m.algebra != n.algebra:
        raise PreconditionError("tensor product of modules over different algebras")
    im = RatMatrix.identity(m.dim)
    inn = RatMatrix.identity(n.dim)
    return LieModule(m.algebra, m.dim * n.dim, tuple(a.kron(inn) + im.kron(b) for a, b in zip(m.action, n.action)))


@dataclass(frozen=True)
class SemidirectPresentation:
    """u ⋊ t with t abelian acting on u through commuting derivations."""

    u: LieAlgebra
    derivations: tuple = ()
    t_names: tuple = ()

    def __post_init__(self):
        ders = tuple(d if isinstance(d, RatMatrix) else RatMatrix.of(d) for d in self.derivations)
        object.__setattr__(self, "derivations", ders)
        if not self.t_names:
            k = len(ders)
            object.__setattr__(self, "t_names", ("D",) if k == 1 else tuple(f"D{a + 1}" for a in range(k)))

    @property
    def t_dim(self) -> int:
        return len(self.derivations)

    @property
    def dim(self) -> int:
        return self.u.dim + self.t_dim

    def validate(self) -> "SemidirectPresentation":
        u = self.u
        n = u.dim
        for a, D in enumerate(self.derivations):
            if D.shape != (n, n):
                raise DerivationError(f"derivation {a} has shape {D.shape}, expected {(n, n)}")
            for i in range(n):
                for j in range(i + 1, n):
                    lhs = D.apply(u.bracket_basis(i, j))
                    rhs = tuple(
                        p + q
                        for p, q in zip(u.bracket(D.column(i), unit_vector(n, j)), u.bracket(unit_vector(n, i), D.column(j)))
                    )
                    if lhs != rhs:
                        raise DerivationError(f"derivation {a} violates the Leibniz rule on basis pair ({i},{j})")
        for a in range(self.t_dim):
            for b in range(a + 1, self.t_dim):
                if not self.derivations[a].commutator(self.derivations[b]).is_zero():
                    raise NonCommutingError(a, b, f"derivations {a} and {b} do not commute")
        for D in self.derivations:
            eigenspaces(D)
        return self


def semidirect(p: SemidirectPresentation, validate: bool = True) -> LieAlgebra:
    """The Lie algebra u ⋊ t, u-basis first, with [t_a, u_i] = D_a(u_i)."""
    if validate:
        p.validate()
        validate_jacobi(p.u).raise_if_failed()
    n = p.u.dim
    total = p.dim
    table = {}
    for (i, j), v in p.u.brackets:
        table[(i, j)] = v + (ZERO,) * p.t_dim
    for a, D in enumerate(p.derivations):
        for i in range(n):
            col = D.column(i)
            if any(col):
                # [u_i, t_a] = -D_a(u_i)
                table[(i, n + a)] = tuple(-c for c in col) + (ZERO,) * p.t_dim
    g = LieAlgebra.from_brackets(total, table, tuple(p.u.basis_names) + tuple(p.t_names))
    return g


def lower_central_series(g: LieAlgebra) -> list:
    """g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ... listed until it stops shrinking."""
    full = Subspace.full(g.dim)
    series = [full]
    while True:
        nxt = g.bracket_span(full, series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


def derived_series(g: LieAlgebra) -> list:
    series = [Subspace.full(g.dim)]
    while True:
        nxt = g.bracket_span(series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1].dim == 0


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g)[-1].dim == 0


def weight_decomposition(p: SemidirectPresentation) -> list:
    """Joint eigenspaces of the derivations on u, as (weight, Subspace)."""
    return simultaneous_eigenspaces(list(p.derivations), p.u.dim)


def module_weights(t_action: Sequence[RatMatrix], dim: int) -> list:
    return simultaneous_eigenspaces(list(t_action), dim)


def center(g: LieAlgebra, within: Subspace | None = None) -> Subspace:
    """Elements of ``within`` (default g) commuting with all of g."""
    from .exactla import kernel_basis

    n = g.dim
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append(tuple(g.bracket_basis(i, j)[k] for j in range(n)))
    ker = kernel_basis(RatMatrix(len(rows), n, tuple(rows)) if rows else RatMatrix.zeros(0, n))
    return ker if within is None else ker.intersection(within)


def quotient_algebra_center(g: LieAlgebra, ideal: Subspace) -> Subspace:
    """Preimage in g of the center of g / ideal."""
    from .exactla import preimage

    n = g.dim
    # x is central mod I iff [e_i, x] in I for every i
    result = Subspace.full(n)
    for i in range(n):
        result = preimage(g.ad_basis[i], ideal, result)
    return result


__all__ = [
    "LieAlgebra",
    "LieModule",
    "JacobiReport",
    "SemidirectPresentation",
    "validate_jacobi",
    "semidirect",
    "lower_central_series",
    "derived_series",
    "is_nilpotent",
    "is_solvable",
    "weight_decomposition",
    "tensor_module",
    "center",
    "quotient_algebra_center",
    "module_weights",
]

"""Desk-scale models of dense subgroups Γ = Δ ⋊ Γ_T of U ⋊ T.

Δ ≤ U(Q) is recorded through the logarithms of its generators (coordinates
in u).  Γ_T is recorded as a list of points of T(Q) = (Q*)^k; a point s acts
on the u-weight space of weight w by the scalar s_1^{w_1} ... s_k^{w_k}.

The certifiers here decide the hypotheses needed downstream: density of Δ
(Lie closure of the logs), density and discreteness of Γ_T (prime exponent
lattices), and the bookkeeping for polyrational series and Hirsch length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Sequence

from .errors import DensityError, NonDiscreteError, PreconditionError
from .exactla import (
    ONE,
    ZERO,
    RatMatrix,
    Subspace,
    as_fraction,
    factor_integer,
    format_rational,
    kernel_basis,
    matrix_from_eigendata,
    rational_power,
    simultaneous_eigenspaces,
    solve,
)
from .liealg import LieModule, SemidirectPresentation, quotient_algebra_center, weight_decomposition


@dataclass(frozen=True)
class Certificate:
    check: str
    verdict: str  # "YES", "NO" or "UNKNOWN"
    witness: object = None
    justification: str = ""

    @property
    def yes(self) -> bool:
        return self.verdict == "YES"

    def to_json(self) -> dict:
        return {"check": self.check, "verdict": self.verdict, "witness": self.witness, "justification": self.justification}


@dataclass(frozen=True)
class DenseSubgroupData:
    hull: SemidirectPresentation
    delta_logs: tuple
    torus_gens: tuple = ()
    automorphisms: tuple = ()  # integral automorphisms of Δ standing in for torus generators
    representation: tuple | None = None  # u basis -> nilpotent matrices, when Δ came as matrices
    labels: tuple = ()

    def __post_init__(self):
        n = self.hull.u.dim
        logs = tuple(tuple(as_fraction(x) for x in v) for v in self.delta_logs)
        for i, v in enumerate(logs):
            if len(v) != n:
                raise PreconditionError(f"delta generator {i} has {len(v)} log coordinates, expected {n}")
        object.__setattr__(self, "delta_logs", logs)
        gens = tuple(tuple(as_fraction(x) for x in s) for s in self.torus_gens)
        for i, s in enumerate(gens):
            if len(s) != self.hull.t_dim:
                raise PreconditionError(f"torus generator {i} has {len(s)} entries, expected {self.hull.t_dim}")
            if any(x == 0 for x in s):
                raise PreconditionError(f"torus generator {i} has a zero entry")
        object.__setattr__(self, "torus_gens", gens)
        auts = tuple(a if isinstance(a, RatMatrix) else RatMatrix.of(a) for a in self.automorphisms)
        object.__setattr__(self, "automorphisms", auts)

    @property
    def k(self) -> int:
        return len(self.torus_gens)

    @classmethod
    def from_matrices(
        cls,
        hull: SemidirectPresentation,
        representation: Sequence,
        delta_matrices: Sequence,
        torus_gens: Sequence = (),
        automorphisms: Sequence = (),
        labels: Sequence = (),
    ) -> "DenseSubgroupData":
        rep = tuple(m if isinstance(m, RatMatrix) else RatMatrix.of(m) for m in representation)
        logs = [unipotent_log(m if isinstance(m, RatMatrix) else RatMatrix.of(m), rep) for m in delta_matrices]
        return cls(hull, tuple(logs), tuple(torus_gens), tuple(automorphisms), rep, tuple(labels))


# ------------------------------------------------------------ log and exp


def _nilpotency_index(N: RatMatrix) -> int | None:
    P = N
    for k in range(1, N.rows + 1):
        if P.is_zero():
            return k
        P = P @ N
    return None if not P.is_zero() else N.rows + 1


def matrix_log(m: RatMatrix) -> RatMatrix:
    """log(I + N) = Σ (-1)^{k+1} N^k / k, a finite sum for nilpotent N."""
    n = m.rows
    N = m - RatMatrix.identity(n)
    if _nilpotency_index(N) is None:
        raise PreconditionError("matrix is not unipotent")
    out = RatMatrix.zeros(n, n)
    P = N
    k = 1
    while not P.is_zero():
        out = out + P.scale(Fraction((-1) ** (k + 1), k))
        P = P @ N
        k += 1
    return out


def matrix_exp(N: RatMatrix) -> RatMatrix:
    if _nilpotency_index(N) is None:
        raise PreconditionError("matrix is not nilpotent")
    n = N.rows
    out = RatMatrix.identity(n)
    P = N
    k = 1
    while not P.is_zero():
        out = out + P.scale(Fraction(1, factorial(k)))
        P = P @ N
        k += 1
    return out


def unipotent_log(m: RatMatrix, representation: Sequence[RatMatrix] | None = None) -> tuple:
    """Log coordinates of a unipotent matrix in the basis given by ``representation``.

    Without a representation the flattened log matrix is returned.
    """
    L = matrix_log(m)
    flat = tuple(x for r in L.entries for x in r)
    if representation is None:
        return flat
    cols = [tuple(x for r in R.entries for x in r) for R in representation]
    A = RatMatrix.from_columns(cols, len(flat))
    sol = solve(A, flat)
    if sol is None:
        raise PreconditionError("log of the matrix is not in the span of the representation")
    return sol


def unipotent_exp(coords: Sequence[Fraction], representation: Sequence[RatMatrix]) -> RatMatrix:
    n = representation[0].rows
    N = RatMatrix.zeros(n, n)
    for c, R in zip(coords, representation):
        if c:
            N = N + R.scale(c)
    return matrix_exp(N)


# ----------------------------------------------------------------- density


def is_zariski_dense_unipotent(d: DenseSubgroupData) -> Certificate:
    """Δ is dense in U iff the logs of its generators generate u as a Lie algebra.

    The witness lists bracket words whose values form a basis of u.
    """
    u = d.hull.u
    n = u.dim
    words = []
    span = Subspace.zero(n)
    for i, v in enumerate(d.delta_logs):
        if not span.contains(v):
            words.append((f"g{i}", v))
            span = Subspace.span(n, span.basis + (v,))
    frontier = list(words)
    while frontier and span.dim < n:
        new = []
        for wa, va in words:
            for wb, vb in frontier:
                w = u.bracket(va, vb)
                if not span.contains(w):
                    new.append((f"[{wa},{wb}]", w))
                    span = Subspace.span(n, span.basis + (w,))
        words.extend(new)
        frontier = new
    witness = [{"word": w, "log": [format_rational(x) for x in v]} for w, v in words]
    if span.dim == n:
        return Certificate("density", "YES", witness, f"bracket words of generator logs span u (dim {n})")
    return Certificate(
        "density",
        "NO",
        {"subalgebra": [[format_rational(x) for x in b] for b in span.basis], "words": witness},
        f"generator logs generate a proper subalgebra of dimension {span.dim} < {n}",
    )


def _exponent_columns(gens: Sequence[Sequence[Fraction]], k: int):
    """Per generator and coordinate, the prime-exponent dict and the sign."""
    primes: set = set()
    data = []
    for s in gens:
        row = []
        for x in s:
            num = factor_integer(x.numerator) if abs(x.numerator) != 1 else {}
            den = factor_integer(x.denominator) if x.denominator != 1 else {}
            e = dict(num)
            for p, c in den.items():
                e[p] = e.get(p, 0) - c
            primes.update(e)
            row.append((e, x < 0))
        data.append(row)
    return sorted(primes), data


def _primitive_integer(v: Sequence[Fraction]) -> tuple:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def torus_density_check(torus_gens: Sequence[Sequence], k: int) -> Certificate:
    """⟨v_1..v_m⟩ ≤ (Q*)^k is dense iff no nonzero character a ∈ Z^k kills every v_i.

    A character a kills v iff Σ_j a_j·ord_p(v_j) = 0 for every prime p and
    Π_j sign(v_j)^{a_j} = 1.
    """
    gens = [tuple(as_fraction(x) for x in s) for s in torus_gens]
    if k == 0:
        return Certificate("torus_density", "YES", None, "the trivial torus")
    primes, data = _exponent_columns(gens, k)
    rows = [[Fraction(data[i][j][0].get(p, 0)) for j in range(k)] for i in range(len(gens)) for p in primes]
    E = RatMatrix.of(rows, k) if rows else RatMatrix.zeros(0, k)
    ker = kernel_basis(E)
    if ker.dim == 0:
        return Certificate("torus_density", "YES", None, "prime-exponent matrix has trivial kernel: no character is trivial on the subgroup")
    a = _primitive_integer(ker.basis[0])
    for i in range(len(gens)):
        if sum(a[j] for j in range(k) if data[i][j][1]) % 2:
            a = tuple(2 * x for x in a)
            break
    return Certificate("torus_density", "NO", {"character": list(a)}, f"character {list(a)} is trivial on every generator")


def _axis_rank(data, primes, gens_count: int, k: int, j: int) -> int:
    """Rank of {γ ∈ Γ_T : log|γ| lies on coordinate axis j}."""
    others = [jj for jj in range(k) if jj != j]
    rows = [[Fraction(data[i][jj][0].get(p, 0)) for i in range(gens_count)] for jj in others for p in primes]
    K = kernel_basis(RatMatrix.of(rows, gens_count)) if rows else Subspace.full(gens_count)
    if K.dim == 0:
        return 0
    along = [[sum((Fraction(data[i][j][0].get(p, 0)) * v[i] for i in range(gens_count)), ZERO) for p in primes] for v in K.basis]
    if not primes:
        return 0
    return RatMatrix.of(along, len(primes)).rank()


def torus_discreteness_check(torus_gens: Sequence[Sequence], k: int) -> Certificate:
    """Is the subgroup generated discrete in (R*)^k?

    log|·| embeds Γ_T (mod signs) in R^k with abstract rank r equal to the
    rank of the prime-exponent matrix, since logs of primes are linearly
    independent over Q.  Decided cases: r > k; r ≤ 1; k = 1; an axis carrying a
    rank ≥ 2 subgroup; and the decoupled case where the axis subgroups have
    rank ≤ 1 each and together reach rank r.  Everything else is UNKNOWN.
    """
    gens = [tuple(as_fraction(x) for x in s) for s in torus_gens]
    m = len(gens)
    if m == 0 or k == 0:
        return Certificate("discreteness", "YES", {"rank": 0}, "trivial torus part")
    primes, data = _exponent_columns(gens, k)
    rows = [[Fraction(data[i][j][0].get(p, 0)) for j in range(k) for p in primes] for i in range(m)]
    r = RatMatrix.of(rows, k * len(primes)).rank() if primes else 0
    if r > k:
        return Certificate(
            "discreteness", "NO", {"rank": r, "k": k}, f"abstract rank {r} exceeds the dimension {k} of the log space"
        )
    if r <= 1:
        return Certificate("discreteness", "YES", {"rank": r, "k": k}, f"rank {r} ≤ 1: the log image is cyclic")
    if k == 1:
        return Certificate("discreteness", "NO", {"rank": r, "k": 1}, f"rank {r} subgroup of the log line is dense")
    axis = [_axis_rank(data, primes, m, k, j) for j in range(k)]
    for j, a in enumerate(axis):
        if a >= 2:
            return Certificate(
                "discreteness",
                "NO",
                {"rank": r, "axis": j, "axis_rank": a},
                f"coordinate {j} alone carries a rank {a} subgroup of a line",
            )
    if sum(axis) == r:
        return Certificate(
            "discreteness",
            "YES",
            {"rank": r, "axis_ranks": axis},
            "coordinates decouple: axis subgroups of rank ≤ 1 have finite index",
        )
    return Certificate(
        "discreteness", "UNKNOWN", {"rank": r, "axis_ranks": axis}, "coupled coordinates; no decision procedure applies"
    )


# ----------------------------------------------------------------- torus action


def weight_multiplier(weight: Sequence[Fraction], s: Sequence[Fraction]) -> Fraction:
    out = ONE
    for w, x in zip(weight, s):
        if w:
            out *= rational_power(x, w)
    return out


def torus_adjoint(hull: SemidirectPresentation, s: Sequence[Fraction]) -> RatMatrix:
    """Ad(s) on u for s ∈ T(Q)."""
    n = hull.u.dim
    if hull.t_dim == 0:
        return RatMatrix.identity(n)
    pieces = weight_decomposition(hull)
    return matrix_from_eigendata(pieces, [weight_multiplier(w, s) for w, _ in pieces], n)


def torus_on_module(module: LieModule | None, u_dim: int, s: Sequence[Fraction]) -> RatMatrix:
    """The action of s ∈ T(Q) on a g-module, through the weights of its t-action."""
    if module is None:
        return RatMatrix.identity(1)
    t_action = list(module.action[u_dim:])
    if not t_action or all(m.is_zero() for m in t_action):
        return RatMatrix.identity(module.dim)
    pieces = simultaneous_eigenspaces(t_action, module.dim)
    return matrix_from_eigendata(pieces, [weight_multiplier(w, s) for w, _ in pieces], module.dim)


def torus_full_density(d: DenseSubgroupData) -> Certificate:
    """Density of Γ in U ⋊ T: Δ dense in U, Γ_T dense in T, multipliers rational."""
    dense_u = is_zariski_dense_unipotent(d)
    dense_t = torus_density_check(d.torus_gens, d.hull.t_dim)
    try:
        for s in d.torus_gens:
            torus_adjoint(d.hull, s)
        weights_ok = True
    except Exception:  # noqa: BLE001 - any failure means the multipliers are not rational
        weights_ok = False
    ok = dense_u.yes and dense_t.yes and weights_ok
    return Certificate(
        "full_density",
        "YES" if ok else "NO",
        {"unipotent": dense_u.verdict, "torus": dense_t.verdict, "rational_multipliers": weights_ok},
        "conjunction of unipotent density, torus density and rational weight multipliers",
    )


# --------------------------------------------------------- series and length


@dataclass(frozen=True)
class PolyrationalSeries:
    flags: tuple  # ascending Subspaces of u, starting at 0
    quotients: tuple = field(default=())

    @property
    def length(self) -> int:
        return len(self.flags) - 1

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "flags": [[[format_rational(x) for x in b] for b in f.basis] for f in self.flags],
            "quotients": list(self.quotients),
        }


def polyrational_series(d: DenseSubgroupData) -> PolyrationalSeries:
    """Ascending central series of u refined to one-dimensional steps.

    Each step adds the first echelon vector of the center of u / I that is not
    already in I, so every flag is an ideal and every quotient Δ_{i+1}/Δ_i is
    a subgroup of Q.
    """
    cert = is_zariski_dense_unipotent(d)
    if not cert.yes:
        raise DensityError(f"polyrational series needs a dense Δ: {cert.justification}")
    u = d.hull.u
    current = Subspace.zero(u.dim)
    flags = [current]
    while current.dim < u.dim:
        z = quotient_algebra_center(u, current)
        v = next(b for b in z.basis if not current.contains(b))
        current = Subspace.span(u.dim, current.basis + (v,))
        flags.append(current)
    return PolyrationalSeries(tuple(flags), ("subgroup of Q",) * (len(flags) - 1))


def declared_hirsch_length(d: DenseSubgroupData) -> int:
    """dim u plus one for each declared torus (or automorphism) generator."""
    return d.hull.u.dim + len(d.torus_gens) + len(d.automorphisms)


def hirsch_length(d: DenseSubgroupData) -> int:
    cert = torus_discreteness_check(d.torus_gens, d.hull.t_dim)
    if not cert.yes:
        raise NonDiscreteError(
            f"torus part is not certified discrete ({cert.verdict}: {cert.justification}); "
            f"see torus_discreteness_check. Declared Hirsch length would be {declared_hirsch_length(d)}"
        )
    return declared_hirsch_length(d)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvcoh.errors import NonCommutingError, NotQSplitError, PreconditionError, SolvcohError
from solvcoh.exactla import (
    CoordinateMap,
    RatMatrix,
    Subspace,
    as_fraction,
    charpoly,
    det,
    eigenspaces,
    factor_integer,
    image_basis,
    inverse,
    kernel_basis,
    matrix_from_eigendata,
    preimage,
    quotient_basis,
    rational_power,
    rational_roots,
    rref,
    simultaneous_eigenspaces,
    solve,
)

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def matrices(rows=None, cols=None, max_dim=4):
    r = st.integers(1, max_dim) if rows is None else st.just(rows)
    c = st.integers(1, max_dim) if cols is None else st.just(cols)
    return st.tuples(r, c).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]).map(
            lambda rows_: RatMatrix.of(rows_, rc[1])
        )
    )


square = st.integers(1, 4).flatmap(lambda n: matrices(n, n))


def test_as_fraction_rejects_floats_and_bools():
    assert as_fraction("2/4") == Fraction(1, 2)
    assert as_fraction(" -3 ") == -3
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_rref_pivots_leftmost():
    m = RatMatrix.of([[0, 2, 4], [0, 1, 3], [0, 0, 0]])
    R, pivots, rank = rref(m)
    assert list(pivots) == [1, 2]
    assert rank == 2
    assert R.row(0) == (0, 1, 0)


@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert ker.dim + m.rank() == m.cols
    for v in ker.basis:
        assert m.apply(v) == (0,) * m.rows
    assert image_basis(m).dim == m.rank()


@given(matrices())
def test_rref_idempotent(m):
    R, _, rank = rref(m)
    R2, _, rank2 = rref(R)
    assert R == R2 and rank == rank2


@given(square)
def test_inverse_and_det(m):
    if det(m) == 0:
        with pytest.raises(PreconditionError):
            inverse(m)
        return
    assert m @ inverse(m) == RatMatrix.identity(m.rows)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(matrices(n, n), matrices(n, n))))
def test_det_multiplicative(pair):
    a, b = pair
    assert det(a @ b) == det(a) * det(b)


@given(square)
def test_cayley_hamilton(m):
    coeffs = charpoly(m)
    n = m.rows
    acc = RatMatrix.zeros(n, n)
    power = RatMatrix.identity(n)
    for c in coeffs:
        acc = acc + power.scale(c)
        power = power @ m
    assert acc.is_zero()
    assert coeffs[-1] == 1
    assert coeffs[n - 1] == -m.trace()


@given(matrices(), st.data())
def test_solve_finds_solution_when_consistent(m, data):
    x = tuple(data.draw(st.lists(small, min_size=m.cols, max_size=m.cols)))
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


def test_solve_inconsistent():
    assert solve(RatMatrix.of([[1, 1], [1, 1]]), (1, 2)) is None


@given(matrices(max_dim=4), matrices(max_dim=4))
def test_subspace_sum_and_intersection_dims(a, b):
    n = max(a.cols, b.cols)
    U = Subspace.span(n, [tuple(r) + (0,) * (n - a.cols) for r in a.entries])
    V = Subspace.span(n, [tuple(r) + (0,) * (n - b.cols) for r in b.entries])
    assert (U + V).dim + U.intersection(V).dim == U.dim + V.dim
    assert U.intersection(V).is_subspace_of(U)


@given(matrices(max_dim=4))
def test_quotient_basis_completes(m):
    big = Subspace.full(m.cols)
    small_ = Subspace.span(m.cols, m.entries)
    reps = quotient_basis(big, small_)
    assert len(reps) == big.dim - small_.dim
    assert Subspace.span(m.cols, list(small_.basis) + reps).dim == m.cols


def test_quotient_basis_rejects_non_subspace():
    big = Subspace.span(2, [(1, 0)])
    with pytest.raises(PreconditionError, match="vector 0"):
        quotient_basis(big, Subspace.span(2, [(0, 1)]))


@given(matrices(max_dim=4))
def test_coordinate_map_round_trip(m):
    sp = Subspace.span(m.cols, m.entries)
    cm = CoordinateMap(sp.basis, m.cols)
    for r in m.entries:
        c = cm(r)
        back = tuple(sum(c[k] * sp.basis[k][i] for k in range(sp.dim)) for i in range(m.cols))
        assert back == tuple(r)


def test_coordinate_map_rejects_outside_vector():
    cm = CoordinateMap([(1, 0, 0)], 3)
    with pytest.raises(PreconditionError):
        cm((0, 1, 0))


def test_preimage():
    m = RatMatrix.of([[1, 0], [0, 0]])
    pre = preimage(m, Subspace.zero(2))
    assert pre.dim == 1 and pre.contains((0, 1))


def test_factor_and_roots():
    assert factor_integer(360) == {2: 3, 3: 2, 5: 1}
    roots, rest = rational_roots([Fraction(-1, 2), Fraction(1, 2), 0, 1])  # x^3 + x/2 - 1/2
    assert roots == {} and rest == 3
    roots, rest = rational_roots([0, 0, Fraction(-1, 4), 0, 1])  # x^2 (x - 1/2)(x + 1/2)
    assert roots == {Fraction(-1, 2): 1, 0: 2, Fraction(1, 2): 1} and rest == 0
    roots, rest = rational_roots([6, -5, 1])
    assert roots == {2: 1, 3: 1} and rest == 0
    roots, rest = rational_roots([-2, 0, 1])
    assert roots == {} and rest == 2


def test_factor_bound(monkeypatch):
    monkeypatch.setenv("SOLVCOH_PRIME_BOUND", "10")
    with pytest.raises(SolvcohError):
        factor_integer(1009 * 1013)


def test_eigenspaces_and_not_split():
    sp = eigenspaces(RatMatrix.diag([2, 1, 2]))
    assert [(lam, s.dim) for lam, s in sp] == [(1, 1), (2, 2)]
    with pytest.raises(NotQSplitError, match="not Q-split"):
        eigenspaces(RatMatrix.of([[2, 1], [1, 1]]))
    with pytest.raises(NotQSplitError, match="geometric multiplicity"):
        eigenspaces(RatMatrix.of([[1, 1], [0, 1]]))


def test_simultaneous_eigenspaces():
    a = RatMatrix.diag([1, 1, 2])
    b = RatMatrix.diag([3, 4, 3])
    pieces = simultaneous_eigenspaces([a, b])
    assert [w for w, _ in pieces] == [(1, 3), (1, 4), (2, 3)]
    with pytest.raises(NonCommutingError) as err:
        simultaneous_eigenspaces([RatMatrix.of([[1, 1], [0, 2]]), RatMatrix.of([[0, 1], [2, 0]])])
    assert err.value.indices == (0, 1)


def test_matrix_from_eigendata_rebuilds():
    m = RatMatrix.of([[2, 1], [0, 3]])
    sp = eigenspaces(m)
    assert matrix_from_eigendata(sp, [lam for lam, _ in sp], 2) == m


def test_rational_power():
    assert rational_power(Fraction(4, 9), Fraction(1, 2)) == Fraction(2, 3)
    assert rational_power(-8, Fraction(2, 3)) == 4
    with pytest.raises(NotQSplitError):
        rational_power(2, Fraction(1, 2))


@settings(max_examples=30)
@given(matrices())
def test_matrix_json_round_trip(m):
    assert RatMatrix.from_json(m.to_json(), m.cols) == m

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvcoh.errors import DensityError, NonDiscreteError
from solvcoh.exactla import RatMatrix
from solvcoh.grouphull import (
    DenseSubgroupData,
    declared_hirsch_length,
    hirsch_length,
    is_zariski_dense_unipotent,
    matrix_exp,
    matrix_log,
    polyrational_series,
    torus_adjoint,
    torus_density_check,
    torus_discreteness_check,
    torus_full_density,
    torus_on_module,
    unipotent_exp,
    unipotent_log,
    weight_multiplier,
)
from solvcoh.liealg import LieAlgebra, LieModule, SemidirectPresentation, semidirect

H3 = LieAlgebra.from_brackets(3, {(0, 2): {1: 1}}, ["x", "z", "y"])
REP = [
    RatMatrix.of([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
    RatMatrix.of([[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
    RatMatrix.of([[0, 0, 0], [0, 0, 1], [0, 0, 0]]),
]
HEIS = SemidirectPresentation(H3, (RatMatrix.diag([1, 2, 1]),))
BS = SemidirectPresentation(LieAlgebra.abelian(1, ["u"]), (RatMatrix.of([[1]]),))


def test_log_exp_inverse():
    m = RatMatrix.of([[1, 2, 3], [0, 1, 4], [0, 0, 1]])
    assert matrix_exp(matrix_log(m)) == m
    coords = unipotent_log(m, REP)
    assert unipotent_exp(coords, REP) == m
    # log = N - N²/2 and N² has the single entry 2·4 in the corner
    assert coords == (2, -1, 4)


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=3, max_size=3))
def test_exp_log_round_trip(coords):
    m = unipotent_exp(coords, REP)
    assert unipotent_log(m, REP) == tuple(coords)


def test_density_h3_with_bracket_witness():
    d = DenseSubgroupData.from_matrices(HEIS, REP, [REP[0] + RatMatrix.identity(3), REP[2] + RatMatrix.identity(3)], [(2,)])
    cert = is_zariski_dense_unipotent(d)
    assert cert.yes
    assert [w["word"] for w in cert.witness] == ["g0", "g1", "[g0,g1]"]


def test_density_fails_for_abelian_subgroup():
    d = DenseSubgroupData(SemidirectPresentation(H3), [(1, 0, 0), (0, 1, 0)])
    cert = is_zariski_dense_unipotent(d)
    assert cert.verdict == "NO"
    with pytest.raises(DensityError):
        polyrational_series(d)


def test_discreteness_examples():
    assert torus_discreteness_check([(2,), (3,)], 1).verdict == "NO"
    assert torus_discreteness_check([(Fraction(3, 2),)], 1).verdict == "YES"
    assert torus_discreteness_check([(2, 1), (1, 3)], 2).verdict == "YES"
    assert torus_discreteness_check([(2, 3)], 2).verdict == "YES"
    assert torus_discreteness_check([(2, 1), (3, 1)], 2).verdict == "NO"
    assert torus_discreteness_check([(2, 1), (1, 2)], 2).verdict == "YES"
    assert torus_discreteness_check([(2, 3), (3, 2)], 2).verdict == "UNKNOWN"
    assert torus_discreteness_check([(4,), (8,)], 1).verdict == "YES"


@settings(max_examples=40)
@given(st.lists(st.integers(2, 30), min_size=1, max_size=3))
def test_discreteness_one_dimensional_matches_exponent_rank(values):
    import sympy

    primes = sorted({p for v in values for p in sympy.factorint(v)})
    rank = sympy.Matrix([[sympy.factorint(v).get(p, 0) for p in primes] for v in values]).rank()
    cert = torus_discreteness_check([(v,) for v in values], 1)
    assert cert.verdict == ("YES" if rank <= 1 else "NO")


def test_torus_density():
    assert torus_density_check([(2,)], 1).yes
    assert torus_density_check([(-1,)], 1).witness == {"character": [2]}
    cert = torus_density_check([(2, 2)], 2)
    assert cert.verdict == "NO" and cert.witness == {"character": [1, -1]}
    assert torus_density_check([], 0).yes


def test_torus_adjoint_and_module():
    assert torus_adjoint(HEIS, (2,)) == RatMatrix.diag([2, 4, 2])
    assert torus_adjoint(BS, (Fraction(1, 3),)) == RatMatrix.of([[Fraction(1, 3)]])
    assert weight_multiplier((1, 2), (2, 3)) == 18
    g = semidirect(BS)
    M = LieModule.of(g, [RatMatrix.of([[0, 1], [0, 0]]), RatMatrix.diag([2, 1])])
    assert torus_on_module(M, 1, (2,)) == RatMatrix.diag([4, 2])


def test_full_density():
    d = DenseSubgroupData(BS, [(1,)], [(2,)])
    assert torus_full_density(d).yes


def test_polyrational_series_and_hirsch():
    d = DenseSubgroupData.from_matrices(HEIS, REP, [REP[0] + RatMatrix.identity(3), REP[2] + RatMatrix.identity(3)], [(2,)])
    series = polyrational_series(d)
    assert series.length == 3
    assert series.flags[1].contains((0, 1, 0))  # the center comes first
    assert hirsch_length(d) == 4
    bad = DenseSubgroupData(BS, [(1,)], [(2,), (3,)])
    assert declared_hirsch_length(bad) == 3
    with pytest.raises(NonDiscreteError, match="torus_discreteness_check"):
        hirsch_length(bad)

import json
import random
from math import comb
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_module, random_nilpotent
from oracle import betti as oracle_betti
from solvcoh.cecoh import (
    Pairing,
    ambient_action,
    build_complex,
    cup,
    exterior_ring,
    group_action_matrix,
    invariant_cohomology,
    ring_invariants,
    ring_structure,
    shuffle_sign,
    tensor_rings,
)
from solvcoh.errors import PairingLawError, PreconditionError
from solvcoh.exactla import RatMatrix, inverse
from solvcoh.liealg import LieAlgebra, LieModule, SemidirectPresentation, semidirect

H3 = LieAlgebra.from_brackets(3, {(0, 2): {1: 1}}, ["x", "z", "y"])
U1 = LieAlgebra.abelian(1, ["u"])
BS = semidirect(SemidirectPresentation(U1, (RatMatrix.of([[1]]),)))
HEIS = semidirect(SemidirectPresentation(H3, (RatMatrix.diag([1, 2, 1]),)))

FIXTURES = Path(__file__).parent / "fixtures"


def test_abelian_differential_vanishes():
    c = build_complex(LieAlgebra.abelian(1))
    assert all(c.d(n).is_zero() for n in range(2))


def test_h3_first_differential():
    c = build_complex(H3)
    x, z, y = (c.basis_cochain(1, [i]) for i in range(3))
    assert c.apply_d(1, x) == (0, 0, 0)
    assert c.apply_d(1, y) == (0, 0, 0)
    # -x*∧y*
    assert c.apply_d(1, z) == tuple(-v for v in c.basis_cochain(2, [0, 2]))


def test_bs_first_differential():
    c = build_complex(BS)
    u, D = c.basis_cochain(1, [0]), c.basis_cochain(1, [1])
    # d u* = -D*∧u* = u*∧D*
    assert c.apply_d(1, u) == c.basis_cochain(2, [0, 1])
    assert c.apply_d(1, D) == (0,)


def test_betti_examples():
    assert build_complex(H3).betti() == (1, 2, 2, 1)
    assert build_complex(BS).betti() == (1, 1, 0)
    assert build_complex(HEIS).betti() == (1, 1, 0, 0, 0)
    for n in range(1, 5):
        assert build_complex(LieAlgebra.abelian(n)).betti() == tuple(comb(n, k) for k in range(n + 1))
    H1 = build_complex(BS).cohomology(1)
    assert H1.representatives == [(0, 1)]


def test_degree_range():
    c = build_complex(H3)
    with pytest.raises(PreconditionError):
        c.cohomology(-1)
    assert c.cohomology(7).dim == 0


def test_euler_characteristic():
    c = build_complex(HEIS)
    assert c.euler_characteristic() == sum((-1) ** n * b for n, b in enumerate(c.betti())) == 0


def test_ambient_action_examples():
    cu = build_complex(U1)
    # D·u* = -u*
    assert ambient_action((0, 1), (1,), cu, BS, 1) == (-1,)
    assert ambient_action((0, 0), (1,), cu, BS, 1) == (0,)
    c = build_complex(H3)
    for n in range(4):
        for rep in c.cohomology(n).representatives:
            assert c.cohomology(n).is_coboundary(ambient_action((1, 0, 0), rep, c, H3, n))


def test_ambient_action_requires_ideal():
    c = build_complex(LieAlgebra.abelian(1))
    bad = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}})
    with pytest.raises(PreconditionError):
        ambient_action((0, 1), (1,), c, bad, 1)


def test_invariant_cohomology_dims():
    assert [s.dim for s in invariant_cohomology(build_complex(H3), HEIS)] == [1, 0, 0, 0]
    assert [s.dim for s in invariant_cohomology(build_complex(U1), BS)] == [1, 0]
    assert [s.dim for s in invariant_cohomology(build_complex(H3), H3)] == [1, 2, 2, 1]


def test_cup_examples():
    c = build_complex(LieAlgebra.abelian(2))
    x, y = c.basis_cochain(1, [0]), c.basis_cochain(1, [1])
    xy = c.basis_cochain(2, [0, 1])
    assert cup(x, 1, y, 1, c) == xy
    assert cup(y, 1, x, 1, c) == tuple(-v for v in xy)
    assert cup((1,), 0, x, 1, c) == x
    assert cup(x, 1, xy, 2, c) == ()

    h = build_complex(H3)
    xs, ys = h.basis_cochain(1, [0]), h.basis_cochain(1, [2])
    assert h.cohomology(2).is_coboundary(cup(xs, 1, ys, 1, h))
    xz = h.basis_cochain(2, [0, 1])
    assert cup(xs, 1, xz, 2, h) == (0,)
    # y*·(x*∧z*) = x*∧z*∧y* = -(x*∧y*∧z*)
    assert cup(ys, 1, xz, 2, h) == h.basis_cochain(3, [0, 1, 2])


def test_shuffle_sign():
    assert shuffle_sign(0b01, 0b10) == 1
    assert shuffle_sign(0b10, 0b01) == -1
    assert shuffle_sign(0b100, 0b011) == 1


def test_h3_ring():
    r = ring_structure(build_complex(H3))
    fp = ring_invariants(r)
    assert fp.poincare == (1, 2, 2, 1)
    ranks = {(i, j): k for i, j, k in fp.product_ranks}
    assert ranks[(1, 1)] == 0
    assert ranks[(1, 2)] == 1
    assert fp.cup_power_ranks == (1, 2, 0, 0)


def test_abelian_ring_is_exterior():
    r = ring_structure(build_complex(LieAlgebra.abelian(3)))
    assert ring_invariants(r) == ring_invariants(exterior_ring(3))
    assert r.products == exterior_ring(3).products


def test_tensor_of_exterior_rings():
    t = tensor_rings(exterior_ring(1), exterior_ring(2)).verify()
    assert ring_invariants(t) == ring_invariants(exterior_ring(3))


def test_pairing_law():
    M = LieModule.of(BS, [RatMatrix.of([[0, 1], [0, 0]]), RatMatrix.diag([2, 1])])
    Pairing.module_scalar(M).validate()
    triv2 = LieModule.trivial(BS, 2)
    bad = Pairing(M, M, triv2, tuple(tuple((1, 0) for _ in range(2)) for _ in range(2)))
    with pytest.raises(PairingLawError):
        bad.validate()


def test_group_action_commutes_with_d():
    # diag(2, 6, 3) on (x, z, y) is an automorphism of h3
    A = RatMatrix.diag([2, 6, 3])
    c = build_complex(H3)
    rho = RatMatrix.identity(1)
    mats = [group_action_matrix(c, inverse(A), rho, n) for n in range(4)]
    for n in range(3):
        assert c.d(n) @ mats[n] == mats[n + 1] @ c.d(n)


def test_cochain_json_round_trip():
    c = build_complex(HEIS)
    v = tuple(Fraction(k, 3) for k in range(c.space_dim(2)))
    data = json.loads(json.dumps(c.cochain_to_json(2, v)))
    assert c.cochain_from_json(data) == v


def test_fixture_cases_match():
    from oracle import CASES

    frozen = json.loads((FIXTURES / "betti.json").read_text())
    assert set(frozen) == set(CASES)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_betti_matches_brute_force(seed):
    rng = random.Random(seed)
    h = random_nilpotent(rng, rng.randint(1, 4))
    M = random_module(rng, h, 2)
    brackets = {ij: {k: c for k, c in enumerate(v) if c} for ij, v in h.brackets}
    action = [[[m.entries[r][s] for s in range(M.dim)] for r in range(M.dim)] for m in M.action]
    assert list(build_complex(h, M).betti()) == oracle_betti(h.dim, brackets, action, M.dim)

import pytest

from solvcoh.catalog import get_entry
from solvcoh.errors import DensityError, NonCommutingError, NonDiscreteError
from solvcoh.exactla import RatMatrix
from solvcoh.groupcoh import compare_with_lie, koszul_Zk_cohomology, lie_dims, unipotent_group_cohomology, wang_tower
from solvcoh.grouphull import DenseSubgroupData
from solvcoh.liealg import LieAlgebra, SemidirectPresentation, semidirect


def test_koszul_examples():
    assert koszul_Zk_cohomology([RatMatrix.identity(1)])[0] == (1, 1)
    assert koszul_Zk_cohomology([RatMatrix.of([[2]])])[0] == (0, 0)
    assert koszul_Zk_cohomology([RatMatrix.identity(1)] * 2)[0] == (1, 2, 1)
    assert koszul_Zk_cohomology([], dim=2)[0] == (2,)
    with pytest.raises(NonCommutingError):
        koszul_Zk_cohomology([RatMatrix.of([[1, 1], [0, 1]]), RatMatrix.diag([1, 2])])


@pytest.mark.parametrize(
    "name, dims",
    [
        ("h3", (1, 2, 2, 1)),
        ("abelian2", (1, 2, 1)),
        ("abelian_t", (1, 2, 1)),
        ("bs_hull2", (1, 1, 0)),
        ("bs_hull5", (1, 1, 0)),
        ("heis_hull3", (1, 1, 0, 0, 0)),
        ("bs_hull2_weight", (0, 1, 1)),
        ("anosov_tower", (1, 1, 1, 1)),
    ],
)
def test_wang_dims(name, dims):
    e = get_entry(name)
    model = wang_tower(e.subgroup, e.module)
    assert model.dims == dims


def test_ring_model_and_flags():
    assert wang_tower(get_entry("bs_hull3").subgroup).ring is not None
    anosov = wang_tower(get_entry("anosov_tower").subgroup)
    assert anosov.ring is None and "diagonalizably" in anosov.flag
    weight = get_entry("bs_hull2_weight")
    assert "trivial coefficients" in wang_tower(weight.subgroup, weight.module).flag


def test_unipotent_actions_bs():
    uc = unipotent_group_cohomology(get_entry("bs_hull2").subgroup)
    # s = 2 acts on u* by 1/2
    assert uc.actions[0][1] == RatMatrix.of([["1/2"]])


def test_compare_with_lie_all_split_entries():
    for name in ("h3", "abelian3", "abelian_t", "bs_hull2", "bs_hull2_weight", "heis_hull2"):
        e = get_entry(name)
        v = compare_with_lie(wang_tower(e.subgroup, e.module), e.algebra, e.module)
        assert v.passed, (name, v.witness)


def test_two_generator_tower_matches_product():
    hull = SemidirectPresentation(LieAlgebra.abelian(2), (RatMatrix.diag([1, 0]), RatMatrix.diag([0, 1])))
    d = DenseSubgroupData(hull, [(1, 0), (0, 1)], [(2, 1), (1, 3)])
    model = wang_tower(d)
    g = semidirect(hull)
    assert lie_dims(g) == (1, 2, 1, 0, 0)
    assert model.dims == (1, 2, 1, 0, 0)
    assert compare_with_lie(model, g).passed


def test_preconditions():
    with pytest.raises(NonDiscreteError):
        wang_tower(get_entry("multi_prime2").subgroup)
    h3 = LieAlgebra.from_brackets(3, {(0, 2): {1: 1}})
    with pytest.raises(DensityError):
        wang_tower(DenseSubgroupData(SemidirectPresentation(h3), [(1, 0, 0)]))


def test_model_json_shape():
    data = wang_tower(get_entry("bs_hull2").subgroup).to_json()
    assert data["dims"] == [1, 1, 0]
    assert data["ring"]["poincare"] == [1, 1, 0]
    assert data["provenance"]["steps"][0]["generator"] == "t0"

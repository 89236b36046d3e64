import pytest

from solvcoh.catalog import get_entry
from solvcoh.errors import PreconditionError
from solvcoh.liealg import LieAlgebra
from solvcoh.specseq import (
    abutment_check,
    comparison,
    decomposition_check,
    e2_identification,
    hs_filtration,
    kunneth_decomposition,
    page_multiplicativity_check,
    pages,
    phi_ring_map,
    restriction_injectivity,
    stabilization_page,
)


def _ss(name):
    e = get_entry(name)
    return e, pages(hs_filtration(e.algebra, e.module, e.u_dim))


def test_filtration_examples():
    bs = get_entry("bs_hull2")
    fc = hs_filtration(bs.algebra, None, 1)
    c = fc.complex
    assert fc.F(1, 1).dim == 1 and fc.F(1, 1).contains(c.basis_cochain(1, [1]))
    assert fc.F(2, 1).dim == 0
    ab = get_entry("abelian3")
    fc = hs_filtration(ab.algebra, None, 3)
    assert fc.F(0, 2).dim == 3 and fc.F(1, 2).dim == 0
    heis = get_entry("heis_hull2")
    assert hs_filtration(heis.algebra, None, 3).F(1, 2).dim == 3


def test_filtration_needs_u_first():
    bs = get_entry("bs_hull2").algebra
    swapped = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}})  # t first, then u
    hs_filtration(bs, None, 1)
    with pytest.raises(PreconditionError):
        hs_filtration(swapped, None, 1)


def test_bs_pages():
    _, ss = _ss("bs_hull2")
    e2 = ss.page(2).dims()
    assert e2.get((0, 0)) == 1 and e2.get((1, 0)) == 1
    assert e2.get((0, 1), 0) == 0 and e2.get((1, 1), 0) == 0
    assert stabilization_page(ss) <= 2


def test_heis_e2_concentrated():
    _, ss = _ss("heis_hull2")
    nonzero = {k: v for k, v in ss.page(2).dims().items() if v}
    assert nonzero == {(0, 0): 1, (1, 0): 1}


def test_trivial_filtration_pages_constant():
    _, ss = _ss("abelian3")
    dims0 = ss.page(0).dims()
    assert all(p.dims() == dims0 for p in ss.pages)


@pytest.mark.parametrize("name", ["bs_hull2", "heis_hull2", "abelian2", "abelian_t", "bs_hull2_weight"])
def test_suite_passes(name):
    e, ss = _ss(name)
    assert e2_identification(ss, e.algebra, e.module, e.u_dim).passed
    v = abutment_check(ss, e.algebra, e.module)
    assert v.passed
    assert v.witness["betti"] == list(get_entry(name).expected["lie_dims"])


def test_multiplicativity():
    for name in ("bs_hull2", "heis_hull2"):
        _, ss = _ss(name)
        assert page_multiplicativity_check(ss).passed
    _, ss = _ss("abelian_t")
    v = page_multiplicativity_check(ss)
    assert v.passed and v.witness["nonzero_products"] > 0


def test_comparison_and_phi():
    for name in ("bs_hull2", "heis_hull2", "abelian3"):
        e, ss = _ss(name)
        assert comparison(ss, e.algebra, e.subgroup).verdict.passed
        assert phi_ring_map(e.algebra, e.subgroup).verdict.passed


def test_comparison_refuses_non_discrete():
    e, ss = _ss("multi_prime2")
    v = comparison(ss, e.algebra, e.subgroup).verdict
    assert not v.passed
    assert v.witness["declared_hirsch_length"] == 3
    assert v.witness["hull_dimension"] == 2


def test_kunneth_examples():
    heis = get_entry("heis_hull2")
    t = kunneth_decomposition(heis.algebra, None, 1, 3)
    assert [r for r in t.rows if r[2]] == [(0, 1, 1, 1)]
    assert t.total == t.betti == 1
    bs = get_entry("bs_hull2")
    assert kunneth_decomposition(bs.algebra, None, 2, 1).total == 0
    h3 = get_entry("h3")
    t = kunneth_decomposition(h3.algebra, None, 2, 3)
    assert t.rows == [(2, 0, 2, 1)]


def test_decomposition_and_restriction():
    for name in ("bs_hull2_weight", "heis_hull3", "abelian_t"):
        e = get_entry(name)
        assert decomposition_check(e.algebra, e.module, e.u_dim).passed
        assert restriction_injectivity(e.algebra, e.module, e.u_dim, e.subgroup).passed

"""Spectral sequences of filtered cochain complexes, and the Lie/group comparison.

Pages are kept as explicit subquotients inside the cochain spaces:

    Z_r^{p,n} = {x in F^p C^n : dx in F^{p+r} C^{n+1}}
    E_r^{p,n} = Z_r^{p,n} / (Z_{r-1}^{p+1,n} + d Z_{r-1}^{p-r+1,n-1})

with Z_{-1}^{p} = F^p.  d_r is "lift, apply d, reduce".  Cells are indexed by
(p, q) with total degree n = p + q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .cecoh import (
    CochainComplex,
    Pairing,
    build_complex,
    cup,
    exterior_ring,
    induced_matrix,
    ambient_action_matrix,
    invariant_cohomology,
    popcount,
    ring_map_failure,
    ring_structure,
    tensor_rings,
)
from .errors import PreconditionError
from .exactla import (
    ZERO,
    CoordinateMap,
    RatMatrix,
    Subspace,
    image_basis,
    kernel_basis,
    preimage,
    quotient_basis,
    simultaneous_eigenspaces,
    unit_vector,
)
from .groupcoh import koszul_Zk_cohomology, unipotent_group_cohomology, wang_tower
from .grouphull import (
    DenseSubgroupData,
    declared_hirsch_length,
    is_zariski_dense_unipotent,
    torus_density_check,
    torus_discreteness_check,
)
from .liealg import LieAlgebra, LieModule
from .report import Verdict


@dataclass
class FilteredComplex:
    """A bounded decreasing filtration on a cochain complex.

    ``filtration[n][p]`` is F^p C^n for p = 0..n+1 (F^0 = C^n, F^{n+1} = 0 is
    the canonical bound; the stored list may stop earlier at 0).
    """

    dims: tuple
    diffs: tuple  # diffs[n]: C^n -> C^{n+1}
    filtration: tuple
    complex: CochainComplex | None = None

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def F(self, p: int, n: int) -> Subspace:
        if n < 0 or n > self.top:
            return Subspace.zero(0)
        if p <= 0:
            return Subspace.full(self.dims[n])
        levels = self.filtration[n]
        if p >= len(levels):
            return Subspace.zero(self.dims[n])
        return levels[p]

    def d(self, n: int) -> RatMatrix:
        if 0 <= n <= self.top:
            return self.diffs[n]
        return RatMatrix.zeros(self.dim(n + 1), self.dim(n))

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n <= self.top else 0

    def max_p(self) -> int:
        return max(len(levels) for levels in self.filtration)

    def check(self) -> "FilteredComplex":
        for n in range(self.top + 1):
            for p in range(self.max_p() + 1):
                if not self.F(p + 1, n).is_subspace_of(self.F(p, n)):
                    raise PreconditionError(f"filtration is not decreasing at p={p}, n={n}")
                if n < self.top:
                    img = self.F(p, n).image_under(self.d(n))
                    if not img.is_subspace_of(self.F(p, n + 1)):
                        raise PreconditionError(f"d does not preserve F^{p} in degree {n}")
        return self


def hs_filtration(g: LieAlgebra, M: LieModule | None, u_dim: int, complex_: CochainComplex | None = None) -> FilteredComplex:
    """F^p C^n(g, M): span of basis cochains with at least p torus indices.

    Needs the u-first basis convention: torus indices are u_dim..dim g - 1.
    """
    if not 0 <= u_dim <= g.dim:
        raise PreconditionError("u_dim outside 0..dim g")
    for i in range(u_dim):
        for j in range(i + 1, g.dim):
            if any(g.bracket_basis(i, j)[u_dim:]):
                raise PreconditionError("the first u_dim basis vectors do not span an ideal (u-first convention)")
    c = complex_ or build_complex(g, M)
    tmask = ((1 << g.dim) - 1) ^ ((1 << u_dim) - 1)
    filtration = []
    for n in range(g.dim + 1):
        size = c.space_dim(n)
        counts = [popcount(c.basis_label(n, k)[1] & tmask) for k in range(size)]
        levels = []
        for p in range(n + 2):
            levels.append(Subspace.span(size, (unit_vector(size, k) for k in range(size) if counts[k] >= p)))
        filtration.append(tuple(levels))
    return FilteredComplex(tuple(c.space_dim(n) for n in range(g.dim + 1)), c.diffs, tuple(filtration), c).check()


@dataclass
class Cell:
    p: int
    n: int
    Z: Subspace
    D: Subspace
    reps: list
    _cmap: CoordinateMap | None = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.n - self.p

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, v) -> tuple:
        """Class of v (an element of Z) in this cell."""
        if self._cmap is None:
            self._cmap = CoordinateMap(list(self.reps) + list(self.D.basis), self.Z.ambient_dim)
        return self._cmap(v)[: self.dim]


@dataclass
class Page:
    r: int
    cells: dict  # (p, q) -> Cell
    d: dict  # (p, q) -> RatMatrix to (p + r, q - r + 1)

    def dims(self) -> dict:
        return {k: c.dim for k, c in self.cells.items()}

    def to_json(self) -> dict:
        cells = []
        for (p, q) in sorted(self.cells):
            m = self.d.get((p, q))
            cells.append({"p": p, "q": q, "dim": self.cells[(p, q)].dim, "d_r_rank": m.rank() if m is not None and m.rows and m.cols else 0})
        return {"r": self.r, "cells": cells}


@dataclass
class SpectralSequence:
    fc: FilteredComplex
    pages: list
    infinity: dict  # (p, q) -> Cell

    def page(self, r: int) -> Page:
        return self.pages[r]

    def infinity_dims(self) -> dict:
        return {k: c.dim for k, c in self.infinity.items()}

    def to_json(self) -> list:
        return [p.to_json() for p in self.pages]


def _Z(fc: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    if r < 0:
        return fc.F(p, n)
    F = fc.F(p, n)
    if n >= fc.top:
        return F
    return preimage(fc.d(n), fc.F(p + r, n + 1), F)


def _dZ(fc: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    """d Z_r^{p, n-1}, a subspace of C^n."""
    if n - 1 < 0:
        return Subspace.zero(fc.dim(n))
    return _Z(fc, r, p, n - 1).image_under(fc.d(n - 1))


def _cell(fc: FilteredComplex, r: int, p: int, n: int) -> Cell:
    Z = _Z(fc, r, p, n)
    D = _Z(fc, r - 1, p + 1, n) + _dZ(fc, r - 1, p - r + 1, n)
    if not D.is_subspace_of(Z):
        raise AssertionError(f"page {r}: boundary part not inside cycles at ({p},{n - p})")
    return Cell(p, n, Z, D, quotient_basis(Z, D))


def _infinity_cell(fc: FilteredComplex, p: int, n: int) -> Cell:
    ker = kernel_basis(fc.d(n)) if n <= fc.top else Subspace.zero(0)
    img = image_basis(fc.d(n - 1)) if n > 0 else Subspace.zero(fc.dim(n))
    Z = fc.F(p, n).intersection(ker)
    D = fc.F(p + 1, n).intersection(ker) + fc.F(p, n).intersection(img)
    return Cell(p, n, Z, D, quotient_basis(Z, D))


def pages(fc: FilteredComplex, r_max: int | None = None) -> SpectralSequence:
    """All pages E_0..E_{r_max} plus E_∞, with d_r matrices and page-to-page checks."""
    if r_max is None:
        r_max = fc.top + 2
    pmax = fc.max_p()
    out = []
    for r in range(r_max + 1):
        cells = {}
        for n in range(fc.top + 1):
            for p in range(0, min(n, pmax) + 1):
                cells[(p, n - p)] = _cell(fc, r, p, n)
        dmaps = {}
        for (p, q), cell in cells.items():
            n = p + q
            tgt = cells.get((p + r, q - r + 1))
            if tgt is None:
                if any(any(fc.d(n).apply(x)) and not _zero_target(fc, r, p, n, x) for x in cell.reps):
                    raise AssertionError(f"d_{r} leaves the page grid at ({p},{q})")
                dmaps[(p, q)] = RatMatrix.zeros(0, cell.dim)
                continue
            cols = []
            for x in cell.reps:
                dx = fc.d(n).apply(x)
                if not tgt.Z.contains(dx):
                    raise AssertionError(f"d_{r} is not well defined at ({p},{q})")
                cols.append(tgt.coordinates(dx))
            dmaps[(p, q)] = RatMatrix.from_columns(cols, tgt.dim) if cols else RatMatrix.zeros(tgt.dim, 0)
        out.append(Page(r, cells, dmaps))
    inf = {}
    for n in range(fc.top + 1):
        for p in range(0, min(n, pmax) + 1):
            inf[(p, n - p)] = _infinity_cell(fc, p, n)
    ss = SpectralSequence(fc, out, inf)
    _check_pages(ss)
    return ss


def _zero_target(fc, r, p, n, x) -> bool:
    # d x lands in F^{p+r}; if that filtration level is 0, the image is zero anyway.
    return fc.F(p + r, n + 1).dim == 0


def _check_pages(ss: SpectralSequence) -> None:
    """d_r ∘ d_r = 0 and dim E_{r+1} = dim ker d_r - rank of the incoming d_r."""
    for page in ss.pages:
        r = page.r
        for (p, q), m in page.d.items():
            nxt = page.d.get((p + r, q - r + 1))
            if nxt is not None and m.rows and nxt.cols == m.rows and nxt.rows:
                if not (nxt @ m).is_zero():
                    raise AssertionError(f"d_{r}∘d_{r} != 0 at ({p},{q})")
        if r + 1 < len(ss.pages):
            following = ss.pages[r + 1]
            for (p, q), cell in page.cells.items():
                out = page.d[(p, q)]
                ker = cell.dim - (out.rank() if out.rows and out.cols else 0)
                inc = page.d.get((p - r, q + r - 1))
                inc_rank = inc.rank() if inc is not None and inc.rows and inc.cols else 0
                if following.cells[(p, q)].dim != ker - inc_rank:
                    raise AssertionError(f"E_{r + 1}({p},{q}) is not the cohomology of d_{r}")


def stabilization_page(ss: SpectralSequence) -> int | None:
    """Smallest r from which every page equals E_∞ dimensionwise."""
    inf = ss.infinity_dims()
    found = None
    for page in reversed(ss.pages):
        if page.dims() == inf and all(not m.rows or not m.cols or m.is_zero() for m in page.d.values()):
            found = page.r
        else:
            break
    return found


# ------------------------------------------------------------- verifications


def _u_part(g: LieAlgebra, u_dim: int) -> LieAlgebra:
    table = {}
    for (i, j), v in g.brackets:
        if j < u_dim:
            table[(i, j)] = v[:u_dim]
    return LieAlgebra.from_brackets(u_dim, table, g.basis_names[:u_dim])


def _u_module(M: LieModule | None, u: LieAlgebra) -> LieModule:
    if M is None:
        return LieModule.trivial(u)
    return LieModule(u, M.dim, M.action[: u.dim])


def torus_actions_on_u_cohomology(g: LieAlgebra, M: LieModule | None, u_dim: int):
    """(complex of u, per degree list of t-basis action matrices on H^q(u, M))."""
    u = _u_part(g, u_dim)
    cu = build_complex(u, _u_module(M, u))
    acts = []
    for q in range(u_dim + 1):
        H = cu.cohomology(q)
        acts.append(
            [
                induced_matrix(H, ambient_action_matrix(cu, g, unit_vector(g.dim, x), q, M))
                for x in range(u_dim, g.dim)
            ]
        )
    return cu, acts


def e2_identification(ss: SpectralSequence, g: LieAlgebra, M: LieModule | None, u_dim: int) -> Verdict:
    """dim E_2^{pq} = dim H^p(t, H^q(u, M)), the latter by a separate CE computation."""
    k = g.dim - u_dim
    cu, acts = torus_actions_on_u_cohomology(g, M, u_dim)
    t = LieAlgebra.abelian(k)
    e2 = ss.page(2).dims()
    table = []
    for q in range(u_dim + 1):
        b = cu.cohomology(q).dim
        mod = LieModule(t, b, tuple(acts[q])) if b else None
        dims = build_complex(t, mod).betti() if b else (0,) * (k + 1)
        inv = kernel_basis(RatMatrix(sum(a.rows for a in acts[q]), b, tuple(r for a in acts[q] for r in a.entries))).dim if acts[q] and b else b
        for p in range(k + 1):
            lie_page = e2.get((p, q), 0)
            table.append({"p": p, "q": q, "E2": lie_page, "H_p(t,H_q(u))": dims[p], "binom_times_invariants": comb(k, p) * inv})
            if lie_page != dims[p] or dims[p] != comb(k, p) * inv:
                return Verdict("e2_identification", False, table[-1], detail={"table": table})
    return Verdict("e2_identification", True, {"cells": len(table)}, detail={"table": table})


def abutment_check(ss: SpectralSequence, g: LieAlgebra, M: LieModule | None) -> Verdict:
    """Σ_p dim E_∞^{p,n-p} = dim H^n(g, M), and each F^pH^n/F^{p+1}H^n matches E_∞^{p,n-p}."""
    fc = ss.fc
    c = fc.complex or build_complex(g, M)
    betti = c.betti()
    rows = []
    for n in range(fc.top + 1):
        total = sum(cell.dim for (p, q), cell in ss.infinity.items() if p + q == n)
        ker = kernel_basis(fc.d(n))
        img = image_basis(fc.d(n - 1)) if n > 0 else Subspace.zero(fc.dim(n))

        def fh(p):
            return fc.F(p, n).intersection(ker).dim - fc.F(p, n).intersection(img).dim

        for p in range(0, n + 1):
            sub = fh(p) - fh(p + 1)
            cell = ss.infinity.get((p, n - p))
            if cell is not None and cell.dim != sub:
                return Verdict("abutment", False, {"n": n, "p": p, "E_inf": cell.dim, "subquotient": sub})
        rows.append({"n": n, "sum_E_inf": total, "betti": betti[n]})
        if total != betti[n]:
            return Verdict("abutment", False, rows[-1], detail={"rows": rows})
    return Verdict("abutment", True, {"betti": list(betti)}, detail={"rows": rows})


def _page_product(page: Page, c: CochainComplex, a: tuple, x_coords, b: tuple, y_coords):
    """Product of two page classes, returned as coordinates in the target cell (or None)."""
    (p1, q1), (p2, q2) = a, b
    tgt = page.cells.get((p1 + p2, q1 + q2))
    if tgt is None:
        return None
    x = _lift(page.cells[a], x_coords)
    y = _lift(page.cells[b], y_coords)
    prod = cup(x, p1 + q1, y, p2 + q2, c)
    if not tgt.Z.contains(prod):
        raise AssertionError("product of page cycles leaves Z_r")
    return tgt.coordinates(prod)


def _lift(cell: Cell, coords) -> tuple:
    out = [ZERO] * cell.Z.ambient_dim
    for cf, v in zip(coords, cell.reps):
        if cf:
            for k, x in enumerate(v):
                if x:
                    out[k] += cf * x
    return tuple(out)


def page_multiplicativity_check(ss: SpectralSequence, r_values: Sequence[int] = (0, 1, 2)) -> Verdict:
    """d_r(xy) = d_r(x) y + (-1)^n x d_r(y) on page representatives, n the total degree of x.

    Also checks that the product is well defined on the subquotients: a
    cycle times a boundary-part element stays in the boundary part.
    """
    c = ss.fc.complex
    if c is None or c.module.dim != 1 or not c.module.is_trivial():
        raise PreconditionError("page products need trivial coefficients")
    nonzero = 0
    for r in r_values:
        if r >= len(ss.pages):
            break
        page = ss.pages[r]
        for a, ca in page.cells.items():
            for b, cb in page.cells.items():
                tgt = page.cells.get((a[0] + b[0], a[1] + b[1]))
                if tgt is None:
                    continue
                na = a[0] + a[1]
                nb = b[0] + b[1]
                for x in ca.reps:
                    for w in cb.D.basis:
                        prod = cup(x, na, w, nb, c)
                        if not tgt.D.contains(prod):
                            return Verdict("page_multiplicativity", False, {"r": r, "cells": [a, b], "issue": "product not defined on classes"})
                for i in range(ca.dim):
                    for j in range(cb.dim):
                        xi = unit_vector(ca.dim, i)
                        yj = unit_vector(cb.dim, j)
                        xy = _page_product(page, c, a, xi, b, yj)
                        if any(xy):
                            nonzero += 1
                        dtarget = (a[0] + b[0] + r, a[1] + b[1] - r + 1)
                        if dtarget not in page.cells:
                            continue
                        lhs = page.d[(a[0] + b[0], a[1] + b[1])].apply(xy)
                        sign = -1 if na & 1 else 1
                        rhs = [ZERO] * page.cells[dtarget].dim
                        ta = (a[0] + r, a[1] - r + 1)
                        if ta in page.cells:
                            dx = page.d[a].apply(xi)
                            t1 = _page_product(page, c, ta, dx, b, yj)
                            if t1 is not None:
                                rhs = [u + v for u, v in zip(rhs, t1)]
                        tb = (b[0] + r, b[1] - r + 1)
                        if tb in page.cells:
                            dy = page.d[b].apply(yj)
                            t2 = _page_product(page, c, a, xi, tb, dy)
                            if t2 is not None:
                                rhs = [u + sign * v for u, v in zip(rhs, t2)]
                        if tuple(rhs) != tuple(lhs):
                            return Verdict("page_multiplicativity", False, {"r": r, "cells": [a, b], "pair": [i, j]})
    return Verdict("page_multiplicativity", True, {"nonzero_products": nonzero})


# ----------------------------------------------------------- Lie vs group


def hypothesis_certificates(d: DenseSubgroupData) -> dict:
    return {
        "density": is_zariski_dense_unipotent(d),
        "torus_density": torus_density_check(d.torus_gens, d.hull.t_dim),
        "discreteness": torus_discreteness_check(d.torus_gens, d.hull.t_dim),
    }


def _refusal(check: str, d: DenseSubgroupData, certs: dict) -> Verdict | None:
    failed = [name for name, cert in certs.items() if not cert.yes]
    if not failed:
        return None
    witness = {"failed_hypotheses": failed, "certificates": {k: v.to_json() for k, v in certs.items()}}
    if "discreteness" in failed:
        witness["declared_hirsch_length"] = declared_hirsch_length(d)
        witness["hull_dimension"] = d.hull.dim
        witness["note"] = (
            f"declared Hirsch length {declared_hirsch_length(d)} differs from dim G = {d.hull.dim}; "
            "Γ_T is not a lattice in T"
        )
    return Verdict(check, False, witness, status="FAIL")


@dataclass
class ComparisonResult:
    verdict: Verdict
    f2: dict  # (p, q) -> RatMatrix


def _fixed_basis(spaces_dim: int, actions: Sequence[RatMatrix]) -> Subspace:
    if not actions or spaces_dim == 0:
        return Subspace.full(spaces_dim)
    stacked = [a - RatMatrix.identity(spaces_dim) for a in actions]
    return kernel_basis(RatMatrix(sum(s.rows for s in stacked), spaces_dim, tuple(r for s in stacked for r in s.entries)))


def _inv_basis(spaces_dim: int, actions: Sequence[RatMatrix]) -> Subspace:
    if not actions or spaces_dim == 0:
        return Subspace.full(spaces_dim)
    return kernel_basis(RatMatrix(sum(a.rows for a in actions), spaces_dim, tuple(r for a in actions for r in a.entries)))


def comparison(ss_lie: SpectralSequence, g: LieAlgebra, d: DenseSubgroupData, M: LieModule | None = None) -> ComparisonResult:
    """f_2 : E_2(g ⊇ u) → E'_2(Γ ⊇ Δ) and the resulting abutment comparison.

    E_2^{pq} = ∧^p t* ⊗ H^q(u,M)^t and E'_2^{pq} = ∧^p (Z^k)* ⊗ H^q(Δ,M)^{Γ_T};
    f_2 is the exterior basis identification tensored with the identity on
    H^q(u, M) = H^q(Δ, M).
    """
    certs = hypothesis_certificates(d)
    refused = _refusal("comparison", d, certs)
    if refused is not None:
        return ComparisonResult(refused, {})
    u_dim = d.hull.u.dim
    k = d.hull.t_dim
    if len(d.torus_gens) != k or d.automorphisms:
        return ComparisonResult(Verdict("comparison", False, {"issue": "Γ_T rank differs from dim T"}), {})
    cu, lie_acts = torus_actions_on_u_cohomology(g, M, u_dim)
    uc = unipotent_group_cohomology(d, M)
    e2 = ss_lie.page(2).dims()
    f2 = {}
    for q in range(u_dim + 1):
        b = cu.cohomology(q).dim
        inv = _inv_basis(b, lie_acts[q])
        fix = _fixed_basis(b, [a[q] for a in uc.actions])
        grp_dims = koszul_Zk_cohomology([a[q] for a in uc.actions], b)[0] if b else (0,) * (k + 1)
        if inv.dim != fix.dim:
            return ComparisonResult(Verdict("comparison", False, {"q": q, "lie_invariants": inv.dim, "group_fixed": fix.dim}), f2)
        cmap = CoordinateMap(fix.basis, b)
        try:
            block = RatMatrix.from_columns([cmap(v) for v in inv.basis], fix.dim) if inv.dim else RatMatrix.zeros(0, 0)
        except PreconditionError:
            return ComparisonResult(Verdict("comparison", False, {"q": q, "issue": "t-invariant class not fixed by Γ_T"}), f2)
        for p in range(k + 1):
            m = RatMatrix.identity(comb(k, p)).kron(block)
            f2[(p, q)] = m
            if m.rows != m.cols or (m.rows and m.rank() != m.rows):
                return ComparisonResult(Verdict("comparison", False, {"p": p, "q": q, "issue": "f_2 not invertible"}), f2)
            if e2.get((p, q), 0) != m.cols or grp_dims[p] != m.rows:
                return ComparisonResult(
                    Verdict("comparison", False, {"p": p, "q": q, "E2": e2.get((p, q), 0), "E2_group": grp_dims[p], "model": m.cols}),
                    f2,
                )
    lie = build_complex(g, M).betti()
    model = wang_tower(d, M)
    a = tuple(lie) + (0,) * max(0, len(model.dims) - len(lie))
    bdims = tuple(model.dims) + (0,) * max(0, len(lie) - len(model.dims))
    if a != bdims:
        return ComparisonResult(Verdict("comparison", False, {"lie_dims": list(a), "group_dims": list(bdims)}), f2)
    return ComparisonResult(Verdict("comparison", True, {"dims": list(a), "f2_cells": len(f2)}), f2)


def _weight_zero_projector(cu: CochainComplex, g: LieAlgebra, n: int, M: LieModule | None):
    """Projection of C^n(u, M) onto the joint kernel of t along the other weight spaces."""
    size = cu.space_dim(n)
    ops = [ambient_action_matrix(cu, g, unit_vector(g.dim, x), n, M, check=False) for x in range(cu.dim, g.dim)]
    if not ops or size == 0:
        return lambda v: tuple(v)
    pieces = simultaneous_eigenspaces(ops, size)
    vectors = [b for _, sp in pieces for b in sp.basis]
    zero_count = []
    for w, sp in pieces:
        zero_count.extend([not any(w)] * sp.dim)
    cmap = CoordinateMap(vectors, size)

    def project(v):
        coords = cmap(v)
        out = [ZERO] * size
        for cf, keep, vec in zip(coords, zero_count, vectors):
            if keep and cf:
                for k, x in enumerate(vec):
                    if x:
                        out[k] += cf * x
        return tuple(out)

    return project


def _extend(cu: CochainComplex, cg: CochainComplex, n: int, v) -> tuple:
    """A u-cochain viewed as a g-cochain vanishing when any argument is in t."""
    out = [ZERO] * cg.space_dim(n)
    for k, x in enumerate(v):
        if x:
            m, mask = cu.basis_label(n, k)
            out[cg.index(n, m, mask)] = x
    return tuple(out)



@dataclass
class PhiResult:
    verdict: Verdict
    maps: list  # Φ in degree n: H^n(g) rep basis -> group model basis
    psi: list
    lie_ring: object = None
    group_ring: object = None


def psi_matrices(g: LieAlgebra, u_dim: int, cg: CochainComplex, inv_spaces, cu: CochainComplex, M: LieModule | None, layout) -> list:
    """Ψ(x ⊗ a) = x̃ ∪ ã in H^n(g, M), columns following ``layout``.

    x̃ is the weight-zero part of an invariant cocycle extended by zero on
    t, ã an exterior class on t extended by zero on u.
    """
    k = g.dim - u_dim
    projectors = [_weight_zero_projector(cu, g, i, M) for i in range(u_dim + 1)]
    tmasks = [sorted(m for m in range(1 << k) if popcount(m) == j) for j in range(k + 1)]
    out = []
    for n, entries in enumerate(layout):
        H = cg.cohomology(n)
        cols = []
        for (i, a, j, b) in entries:
            x = projectors[i](inv_spaces[i].representatives[a])
            xt = _extend(cu, cg, i, x)
            tm = tmasks[j][b]
            at = cg.basis_cochain(j, [u_dim + s for s in range(k) if tm >> s & 1])
            if M is None or (M.dim == 1 and M.is_trivial()):
                prod = cup(xt, i, at, j, cg)
            else:
                right = LieModule.trivial(g)
                pairing = Pairing(M, right, M, tuple((unit_vector(M.dim, m),) for m in range(M.dim)))
                cg_right = build_complex(g, right)
                prod = cup(xt, i, at, j, cg, cg_right, cg, pairing)
            cols.append(H.coordinates(prod))
        out.append(RatMatrix.from_columns(cols, H.dim) if cols else RatMatrix.zeros(H.dim, 0))
    return out


def phi_ring_map(g: LieAlgebra, d: DenseSubgroupData, M: LieModule | None = None) -> PhiResult:
    """Φ = ι ∘ Ψ^{-1} : H*(g) → H*(Γ) in the model, checked against cup products."""
    if M is not None and not (M.dim == 1 and M.is_trivial()):
        raise PreconditionError("phi_ring_map is implemented for trivial coefficients")
    certs = hypothesis_certificates(d)
    refused = _refusal("phi_ring_map", d, certs)
    if refused is not None:
        return PhiResult(refused, [], [])
    model = wang_tower(d, None)
    if model.ring is None:
        return PhiResult(Verdict("phi_ring_map", False, {"unsupported": model.flag}), [], [])
    u_dim = d.hull.u.dim
    k = d.hull.t_dim
    cg = build_complex(g)
    cu = model.unipotent.complex
    lie_ring = ring_structure(cg)
    inv_spaces = invariant_cohomology(cu, g)
    layout = model.ring.labels.get("layout") if k else [[(n, a, 0, 0) for a in range(model.ring.dim(n))] for n in range(model.ring.top + 1)]
    psi = psi_matrices(g, u_dim, cg, inv_spaces, cu, None, layout)
    # ι : Inv^i ⊗ ∧^j → Fix^i ⊗ ∧^j, coordinates of invariant classes in the fixed basis
    iota_blocks = []
    for i in range(u_dim + 1):
        fixed = model.fixed_spaces[i]
        cmap = CoordinateMap(fixed.ambient_coords, cu.cohomology(i).dim) if fixed.dim else None
        iota_blocks.append([cmap(v) for v in inv_spaces[i].ambient_coords] if cmap else [])
    maps = []
    for n, entries in enumerate(layout):
        P = psi[n]
        if P.rows != P.cols or (P.rows and P.rank() != P.rows):
            return PhiResult(Verdict("phi_ring_map", False, {"degree": n, "issue": "Ψ is not an isomorphism"}), [], psi)
        index = {e: pos for pos, e in enumerate(entries)}
        cols = []
        for (i, a, j, b) in entries:
            col = [ZERO] * len(entries)
            for a2, cf in enumerate(iota_blocks[i][a]):
                if cf:
                    col[index[(i, a2, j, b)]] += cf
            cols.append(tuple(col))
        iota = RatMatrix.from_columns(cols, len(entries)) if cols else RatMatrix.zeros(0, 0)
        from .exactla import inverse

        maps.append(iota @ inverse(P) if P.rows else RatMatrix.zeros(0, 0))
    top = lie_ring.top
    padded = list(maps) + [RatMatrix.zeros(0, 0)] * (top + 1 - len(maps))
    group_ring = model.ring
    fail = ring_map_failure(lie_ring, _truncate(group_ring, top), padded[: top + 1])
    if fail is not None:
        return PhiResult(Verdict("phi_ring_map", False, {"failure": [str(x) for x in fail]}), maps, psi, lie_ring, group_ring)
    pairs = sum(lie_ring.dim(i) * lie_ring.dim(j) for i in range(top + 1) for j in range(top + 1 - i))
    return PhiResult(Verdict("phi_ring_map", True, {"dims": list(lie_ring.dims), "basis_pairs_checked": pairs}), maps, psi, lie_ring, group_ring)


def _truncate(ring, top):
    from .cecoh import GradedRing

    dims = tuple(ring.dim(n) for n in range(top + 1))
    products = {}
    for i in range(top + 1):
        for j in range(top + 1 - i):
            if (i, j) in ring.products:
                products[(i, j)] = ring.products[(i, j)]
            else:
                products[(i, j)] = RatMatrix.zeros(dims[i + j], dims[i] * dims[j])
    return GradedRing(dims, products, ring.unit)


# ------------------------------------------------------------ decomposition


@dataclass
class Decomposition:
    degree: int
    rows: list  # (i, j, dim H^i(u,M)^t, C(k, j))
    total: int
    betti: int

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "rows": [{"i": i, "j": j, "invariants": a, "binomial": b} for i, j, a, b in self.rows],
            "total": self.total,
            "betti": self.betti,
        }


def kunneth_decomposition(g: LieAlgebra, M: LieModule | None, n: int, u_dim: int, inv_dims: Sequence[int] | None = None) -> Decomposition:
    """Σ_{i+j=n} dim H^i(u,M)^t · C(k, j) against dim H^n(g, M)."""
    k = g.dim - u_dim
    if inv_dims is None:
        u = _u_part(g, u_dim)
        cu = build_complex(u, _u_module(M, u))
        inv_dims = [s.dim for s in invariant_cohomology(cu, g, M)]
    rows = []
    for i in range(0, n + 1):
        j = n - i
        if i <= u_dim and j <= k:
            rows.append((i, j, inv_dims[i], comb(k, j)))
    total = sum(a * b for _, _, a, b in rows)
    betti = build_complex(g, M).cohomology(n).dim if n <= g.dim else 0
    return Decomposition(n, rows, total, betti)


def decomposition_check(g: LieAlgebra, M: LieModule | None, u_dim: int) -> Verdict:
    """Dimension count in every degree plus the product sign rule on representatives.

    The sign rule: Ψ(x⊗a) ∪ Ψ(y⊗b) = (-1)^{|a||y|} Ψ((x∪y)⊗(a∧b)), with y
    running over invariant classes with trivial coefficients so that the
    module pairing is M × Q → M.
    """
    u = _u_part(g, u_dim)
    cu = build_complex(u, _u_module(M, u))
    inv = invariant_cohomology(cu, g, M)
    tables = [kunneth_decomposition(g, M, n, u_dim, [s.dim for s in inv]) for n in range(g.dim + 1)]
    for t in tables:
        if t.total != t.betti:
            return Verdict("decomposition", False, t.to_json(), detail={"tables": [x.to_json() for x in tables]})
    signs = _sign_rule(g, M, u_dim, cu, inv)
    if signs is not True:
        return Verdict("decomposition", False, {"sign_rule": signs}, detail={"tables": [x.to_json() for x in tables]})
    return Verdict("decomposition", True, {"totals": [t.total for t in tables]}, detail={"tables": [x.to_json() for x in tables]})


def _sign_rule(g, M, u_dim, cu, inv):
    k = g.dim - u_dim
    trivial_coeff = M is None or (M.dim == 1 and M.is_trivial())
    cg = build_complex(g, M)
    u = cu.algebra
    cu_q = cu if trivial_coeff else build_complex(u)
    inv_q = inv if trivial_coeff else invariant_cohomology(cu_q, g)
    cg_q = cg if trivial_coeff else build_complex(g)
    proj = [_weight_zero_projector(cu, g, i, M) for i in range(u_dim + 1)]
    proj_q = proj if trivial_coeff else [_weight_zero_projector(cu_q, g, i, None) for i in range(u_dim + 1)]
    pairing = None
    if not trivial_coeff:
        pairing = Pairing(M, LieModule.trivial(g), M, tuple((unit_vector(M.dim, m),) for m in range(M.dim)))
        pairing.validate()
        pair_u = Pairing(_u_module(M, u), LieModule.trivial(u), _u_module(M, u), pairing.table)
    tm = [sorted(m for m in range(1 << k) if popcount(m) == j) for j in range(k + 1)]

    def psi(cx_u, cx_g, projs, i, x, j, mask):
        xt = _extend(cx_u, cx_g, i, projs[i](x))
        at = cx_g.basis_cochain(j, [u_dim + s for s in range(k) if mask >> s & 1])
        if cx_g is cg and not trivial_coeff:
            return cup(xt, i, at, j, cg, cg_q, cg, pairing)
        return cup(xt, i, at, j, cx_g)

    checked = 0
    for i in range(u_dim + 1):
        for x in inv[i].representatives:
            for j in range(k + 1):
                for a in tm[j]:
                    left = psi(cu, cg, proj, i, x, j, a)
                    for i2 in range(u_dim + 1):
                        for y in inv_q[i2].representatives:
                            for j2 in range(k + 1):
                                n = i + j + i2 + j2
                                if n > g.dim:
                                    continue
                                for b in tm[j2]:
                                    right = psi(cu_q, cg_q, proj_q, i2, y, j2, b)
                                    if trivial_coeff:
                                        lhs = cup(left, i + j, right, i2 + j2, cg)
                                    else:
                                        lhs = cup(left, i + j, right, i2 + j2, cg, cg_q, cg, pairing)
                                    H = cg.cohomology(n)
                                    if a & b:
                                        rhs_cls = (ZERO,) * H.dim
                                    else:
                                        if trivial_coeff:
                                            xy = cup(proj[i](x), i, proj_q[i2](y), i2, cu)
                                        else:
                                            xy = cup(proj[i](x), i, proj_q[i2](y), i2, cu, cu_q, cu, pair_u)
                                        from .cecoh import shuffle_sign

                                        ab = cg.basis_cochain(j + j2, [u_dim + s for s in range(k) if (a | b) >> s & 1]) if trivial_coeff else cg_q.basis_cochain(j + j2, [u_dim + s for s in range(k) if (a | b) >> s & 1])
                                        ab = tuple(shuffle_sign(a, b) * v for v in ab)
                                        xyt = _extend(cu, cg, i + i2, xy)
                                        if trivial_coeff:
                                            rhs = cup(xyt, i + i2, ab, j + j2, cg)
                                        else:
                                            rhs = cup(xyt, i + i2, ab, j + j2, cg, cg_q, cg, pairing)
                                        sign = -1 if (j * i2) & 1 else 1
                                        rhs_cls = tuple(sign * v for v in H.coordinates(rhs))
                                    if H.coordinates(lhs) != rhs_cls:
                                        return {"x": [i, j], "y": [i2, j2]}
                                    checked += 1
    return True


def restriction_injectivity(g: LieAlgebra, M: LieModule | None, u_dim: int, d: DenseSubgroupData | None = None) -> Verdict:
    """H*(u,M)^t → H*(u,M) (= H*(Δ,M)) is injective in every degree.

    With subgroup data the image must also be fixed by Γ_T, so the map lands
    in the degree-(n, 0) part of the group model.
    """
    u = _u_part(g, u_dim)
    cu = build_complex(u, _u_module(M, u))
    inv = invariant_cohomology(cu, g, M)
    actions = None
    if d is not None and not d.automorphisms:
        actions = unipotent_group_cohomology(d, M).actions
    kernels = []
    for n, space in enumerate(inv):
        b = cu.cohomology(n).dim
        m = RatMatrix.from_columns(space.ambient_coords, b) if space.dim else RatMatrix.zeros(b, 0)
        kernel = space.dim - (m.rank() if m.rows and m.cols else 0)
        kernels.append(kernel)
        if kernel:
            return Verdict("restriction", False, {"degree": n, "kernel_dim": kernel})
        if actions:
            for a in actions:
                for v in space.ambient_coords:
                    if a[n].apply(v) != tuple(v):
                        return Verdict("restriction", False, {"degree": n, "issue": "image not fixed by Γ_T"})
    return Verdict("restriction", True, {"kernel_dims": kernels, "invariant_dims": [s.dim for s in inv]})

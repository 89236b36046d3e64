"""Group cohomology of Γ = Δ ⋊ Z^k at desk scale.

No group cochains are ever built.  H*(Δ, M) is taken to be H*(u, M) (valid
for Zariski dense Δ in U), each generator of Γ_T acts on it through Ad and
its action on M, and the Z^k extension is handled one generator at a time by
the Wang sequence

    0 → coker(φ - 1 | H^{n-1}) → H^n(Γ') → ker(φ - 1 | H^n) → 0,

which splits over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cecoh import (
    CochainComplex,
    build_complex,
    exterior_ring,
    group_action_matrix,
    induced_matrix,
    ring_from_spaces,
    ring_invariants,
    ring_structure,
    tensor_rings,
    joint_kernel_space,
)
from .errors import DensityError, NonDiscreteError, NotQSplitError, PreconditionError
from .exactla import (
    ONE,
    CoordinateMap,
    RatMatrix,
    Subspace,
    eigenspaces,
    image_basis,
    inverse,
    kernel_basis,
    quotient_basis,
)
from .grouphull import (
    DenseSubgroupData,
    is_zariski_dense_unipotent,
    torus_adjoint,
    torus_discreteness_check,
    torus_on_module,
)
from .liealg import LieAlgebra, LieModule
from .report import Verdict


@dataclass
class UnipotentCohomology:
    complex: CochainComplex
    spaces: list
    actions: list  # actions[g][n]: matrix of generator g on H^n
    labels: list

    @property
    def dims(self) -> tuple:
        return tuple(s.dim for s in self.spaces)


def _u_module(d: DenseSubgroupData, M: LieModule | None) -> LieModule:
    u = d.hull.u
    if M is None:
        return LieModule.trivial(u)
    return LieModule(u, M.dim, M.action[: u.dim])


def generator_actions(d: DenseSubgroupData, M: LieModule | None = None) -> list:
    """(label, Ad on u, action on M) for each torus and automorphism generator."""
    gens = []
    mdim = 1 if M is None else M.dim
    for i, s in enumerate(d.torus_gens):
        gens.append((f"t{i}", torus_adjoint(d.hull, s), torus_on_module(M, d.hull.u.dim, s)))
    for i, A in enumerate(d.automorphisms):
        if M is not None and not M.is_trivial():
            raise PreconditionError("automorphism generators only support trivial coefficients")
        gens.append((f"a{i}", A, RatMatrix.identity(mdim)))
    return gens


def unipotent_group_cohomology(d: DenseSubgroupData, M: LieModule | None = None, check_density: bool = True) -> UnipotentCohomology:
    """H*(Δ, M) as H*(u, M) together with the action of every generator of Γ/Δ."""
    if check_density:
        cert = is_zariski_dense_unipotent(d)
        if not cert.yes:
            raise DensityError(f"Δ is not Zariski dense in U: {cert.justification}")
    c = build_complex(d.hull.u, _u_module(d, M))
    spaces = [c.cohomology(n) for n in range(c.dim + 1)]
    actions = []
    labels = []
    for label, ad, rho in generator_actions(d, M):
        ad_inv = inverse(ad)
        actions.append([induced_matrix(spaces[n], group_action_matrix(c, ad_inv, rho, n)) for n in range(c.dim + 1)])
        labels.append(label)
    return UnipotentCohomology(c, spaces, actions, labels)


def koszul_Zk_cohomology(ops: Sequence[RatMatrix], dim: int | None = None) -> tuple:
    """H*(Z^k, V) for V with commuting operators φ_1..φ_k.

    Realized as the Chevalley-Eilenberg complex of the abelian k-dimensional
    algebra acting by φ_i - 1, which is the Koszul complex on (φ_i - 1).
    Returns (dims, complex).
    """
    ops = list(ops)
    if dim is None:
        if not ops:
            raise PreconditionError("dimension of V is required when there are no operators")
        dim = ops[0].rows
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not ops[i].commutator(ops[j]).is_zero():
                from .errors import NonCommutingError

                raise NonCommutingError(i, j)
    k = len(ops)
    ab = LieAlgebra.abelian(k)
    ident = RatMatrix.identity(dim)
    mod = LieModule(ab, dim, tuple(op - ident for op in ops))
    c = CochainComplex(ab, mod)
    return c.betti(), c


@dataclass
class WangStep:
    generator: str
    kernel_dims: tuple
    coker_dims: tuple
    dims: tuple
    diagonalizable: bool

    def to_json(self) -> dict:
        return {
            "generator": self.generator,
            "invariant_dims": list(self.kernel_dims),
            "coinvariant_dims": list(self.coker_dims),
            "dims": list(self.dims),
            "diagonalizable_over_Q": self.diagonalizable,
        }


@dataclass
class GroupCohModel:
    source: DenseSubgroupData
    dims: tuple
    steps: list
    unipotent: UnipotentCohomology
    ring: object = None  # GradedRing or None
    fixed_spaces: list = field(default_factory=list)
    flag: str | None = None

    def fingerprint(self):
        return ring_invariants(self.ring) if self.ring is not None else None

    def to_json(self) -> dict:
        ring = None
        if self.ring is not None:
            fp = self.fingerprint()
            ring = {"poincare": list(fp.poincare), "fingerprints": fp.to_json()}
        return {
            "dims": list(self.dims),
            "ring": ring,
            "provenance": {
                "unipotent_dims": list(self.unipotent.dims),
                "steps": [s.to_json() for s in self.steps],
                "flag": self.flag,
            },
        }


def _is_q_diagonalizable(m: RatMatrix) -> bool:
    if m.rows == 0:
        return True
    try:
        eigenspaces(m)
        return True
    except NotQSplitError:
        return False


def _wang_step(spaces_dims: Sequence[int], phi: Sequence[RatMatrix], others: Sequence[Sequence[RatMatrix]]):
    """One Z-extension.  Returns new dims, new operator lists, kernel and coker dims."""
    top = len(spaces_dims)
    kers = []
    cokers = []
    for n in range(top):
        b = spaces_dims[n]
        A = phi[n] - RatMatrix.identity(b)
        ker = kernel_basis(A)
        img = image_basis(A)
        reps = quotient_basis(Subspace.full(b), img)
        kers.append((ker, b))
        cokers.append((reps, img, b))
    new_dims = []
    for n in range(top + 1):
        kd = kers[n][0].dim if n < top else 0
        cd = len(cokers[n - 1][0]) if n >= 1 else 0
        new_dims.append(kd + cd)
    new_ops = []
    for ops in others:
        per_degree = []
        for n in range(top + 1):
            blocks = []
            if n < top:
                ker, b = kers[n]
                cm = CoordinateMap(ker.basis, b)
                blocks.append([cm(ops[n].apply(v)) for v in ker.basis])
            else:
                blocks.append([])
            if n >= 1:
                reps, img, b = cokers[n - 1]
                cm = CoordinateMap(list(reps) + list(img.basis), b)
                blocks.append([cm(ops[n - 1].apply(v))[: len(reps)] for v in reps])
            else:
                blocks.append([])
            size = new_dims[n]
            cols = []
            offset = 0
            for blk in blocks:
                w = len(blk)
                for col in blk:
                    full = [0] * size
                    for i, x in enumerate(col):
                        full[offset + i] = x
                    cols.append(full)
                offset += w
            per_degree.append(RatMatrix.of([[cols[j][i] for j in range(size)] for i in range(size)], size) if size else RatMatrix.zeros(0, 0))
        new_ops.append(per_degree)
    return (
        tuple(new_dims),
        new_ops,
        tuple(k.dim for k, _ in kers),
        tuple(len(c[0]) for c in cokers),
    )


def wang_tower(
    d: DenseSubgroupData, M: LieModule | None = None, require_discrete: bool = True, check_density: bool = True
) -> GroupCohModel:
    """H*(Γ, M) for Γ = Δ ⋊ Z^k by iterated Wang sequences.

    The ring H*(u,M)^{Γ_T} ⊗ ∧(Z^k) is assembled for trivial coefficients
    when every generator acts diagonalizably over Q; otherwise only the
    dimensions are reported and ``flag`` says why.
    """
    if require_discrete and d.torus_gens:
        cert = torus_discreteness_check(d.torus_gens, d.hull.t_dim)
        if not cert.yes:
            raise NonDiscreteError(f"Γ_T is not certified discrete ({cert.verdict}): {cert.justification}")
    uc = unipotent_group_cohomology(d, M, check_density=check_density)
    dims = uc.dims
    ops = [list(a) for a in uc.actions]
    steps = []
    all_diag = True
    for g in range(len(ops)):
        phi = ops[0]
        diag = all(_is_q_diagonalizable(m) for m in phi)
        all_diag = all_diag and diag
        dims, rest, kd, cd = _wang_step(dims, phi, ops[1:])
        ops = rest
        steps.append(WangStep(uc.labels[g], kd, cd, dims, diag))
    model = GroupCohModel(d, dims, steps, uc)
    trivial = M is None or (M.dim == 1 and M.is_trivial())
    if not all_diag:
        bad = next(s.generator for s in steps if not s.diagonalizable)
        model.flag = f"generator {bad} does not act diagonalizably over Q on H*(Δ): ring omitted, dims only"
        return model
    if not trivial:
        model.flag = "ring assembly needs trivial coefficients; dims only"
        return model
    fixed = [joint_kernel_space(uc.spaces[n], [a[n] - RatMatrix.identity(uc.spaces[n].dim) for a in uc.actions]) for n in range(len(uc.spaces))]
    unit = fixed[0].coordinates((ONE,)) if fixed[0].dim else None
    fix_ring = ring_from_spaces(fixed, uc.complex, None, unit)
    k = len(uc.actions)
    ring = tensor_rings(fix_ring, exterior_ring(k)) if k else fix_ring
    if ring.dims[: len(dims)] != dims[: len(ring.dims)] or any(ring.dims[len(dims):]) or any(dims[len(ring.dims):]):
        raise AssertionError(f"ring model dims {ring.dims} disagree with Wang dims {dims}")
    ring.verify()
    model.ring = ring
    model.fixed_spaces = fixed
    return model


def lie_dims(g: LieAlgebra, M: LieModule | None = None) -> tuple:
    return build_complex(g, M).betti()


def compare_with_lie(model: GroupCohModel, g: LieAlgebra, M: LieModule | None = None) -> Verdict:
    """Degreewise dims (and fingerprints when both rings exist) against H*(g, M)."""
    c = build_complex(g, M)
    lie = c.betti()
    top = max(len(lie), len(model.dims))
    a = tuple(lie) + (0,) * (top - len(lie))
    b = tuple(model.dims) + (0,) * (top - len(model.dims))
    for n in range(top):
        if a[n] != b[n]:
            return Verdict("compare_with_lie", False, {"degree": n, "lie": a[n], "group": b[n]}, detail={"lie_dims": list(a), "group_dims": list(b)})
    witness = {"dims": list(a)}
    if model.ring is not None and (M is None or (M.dim == 1 and M.is_trivial())):
        fl = ring_invariants(ring_structure(c))
        fg = ring_invariants(model.ring)
        if _pad_fp(fl) != _pad_fp(fg):
            return Verdict("compare_with_lie", False, {"fingerprint_lie": fl.to_json(), "fingerprint_group": fg.to_json()})
        witness["fingerprint"] = fl.to_json()
    return Verdict("compare_with_lie", True, witness)


def _pad_fp(fp):
    """Fingerprint data with trailing zero degrees dropped."""
    poincare = list(fp.poincare)
    while poincare and poincare[-1] == 0:
        poincare.pop()
    powers = list(fp.cup_power_ranks)
    while powers and powers[-1] == 0:
        powers.pop()
    ranks = sorted((i, j, r) for i, j, r in fp.product_ranks if r)
    return (tuple(poincare), tuple(powers), tuple(ranks))

"""Carnot model-space test, nilpotentization and kernel comparison.

A Carnot algebra n = f_{n,r}/a is a model space exactly when the ideal a is
stable under psi(q) for every orthogonal q.  O(n) is generated by its
identity component and one reflection, so it is enough to test the induced
derivations D_A (A in the o(n) basis) and psi(diag(-1, 1, ..., 1)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import so_basis, so_pairs
from .freenilp import FreeNilpotent, build_free, canonical_surjection, induced_derivation, induced_endomorphism
from .holonomy import HomogeneousModelData
from .liecore import LieAlgebra, LinearMap, flag_growth, graded_violation, is_ideal, jacobi_check
from .ratlin import Mat, Subspace, Vec, complement_in, inverse, span, subspace_sum

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


class NotBracketGenerating(ValueError):
    def __init__(self, message: str, dims: tuple[int, ...]):
        super().__init__(message)
        self.dims = dims


@dataclass(frozen=True)
class Witness:
    """``kind`` is "derivation" (with the o(n) pair) or "reflection"."""

    kind: str
    generator: tuple[int, int] | None
    vector: Vec
    image: Vec


@dataclass(frozen=True)
class ModelCheckReport:
    verdict: bool
    witness: Witness | None
    invariance_dims: tuple[int, int]
    kernel: Subspace | None = None

    def __bool__(self) -> bool:
        return self.verdict


def reflection(n: int) -> Mat:
    return Mat.diag([-1] + [1] * (n - 1))


def o_action(F: FreeNilpotent) -> list[tuple[str, tuple[int, int] | None, LinearMap]]:
    """The maps whose common invariant subspaces are the O(n)-subrepresentations."""
    acts = [
        ("derivation", pair, induced_derivation(F, a))
        for pair, a in zip(so_pairs(F.n), so_basis(F.n))
    ]
    acts.append(("reflection", None, induced_endomorphism(F, reflection(F.n))))
    return acts


def orbit_closure(F: FreeNilpotent, a: Subspace, acts=None) -> Subspace:
    acts = acts if acts is not None else o_action(F)
    cur = a
    while True:
        nxt = subspace_sum(cur, span((m(v) for _, _, m in acts for v in cur.basis), F.dim))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def carnot_model_check(F: FreeNilpotent, a: Subspace) -> ModelCheckReport:
    if not is_ideal(F.algebra, a):
        raise ValueError("subspace is not an ideal of the free algebra")
    acts = o_action(F)
    witness = None
    for kind, pair, m in acts:
        for v in a.basis:
            w = m(v)
            if not a.contains(w):
                witness = Witness(kind, pair, v, w)
                break
        if witness:
            break
    closure = orbit_closure(F, a, acts)
    return ModelCheckReport(witness is None, witness, (a.dim, closure.dim), a)


def verify_witness(F: FreeNilpotent, report: ModelCheckReport) -> bool:
    """Re-apply the witness map and confirm the image leaves the ideal."""
    w = report.witness
    if w is None or report.kernel is None:
        return False
    if w.kind == "reflection":
        m = induced_endomorphism(F, reflection(F.n))
    else:
        m = induced_derivation(F, so_basis(F.n)[so_pairs(F.n).index(w.generator)])
    img = m(w.vector)
    return report.kernel.contains(w.vector) and img == w.image and not report.kernel.contains(img)


def _require_stratified(L: LieAlgebra) -> None:
    if L.layers is None:
        raise ValueError("algebra carries no grading")
    if graded_violation(L) is not None:
        raise ValueError("brackets do not respect the grading")
    flag = flag_growth(L, L.layer_space(1))
    if flag.top.dim != L.dim:
        raise NotBracketGenerating("algebra is not generated by its first layer", flag.dims)


def lie_model_check(L: LieAlgebra, max_dim: int | None = None) -> tuple[ModelCheckReport, FreeNilpotent]:
    """Model-space test for a stratified algebra with orthonormal layer-1 basis."""
    _require_stratified(L)
    n = len(L.layer_indices(1))
    r = L.step
    F = build_free(n, r) if max_dim is None else build_free(n, r, max_dim=max_dim)
    _, ker = canonical_surjection(F, L)
    return carnot_model_check(F, ker), F


@dataclass(frozen=True)
class Nilpotentization:
    algebra: LieAlgebra
    layer_dims: tuple[int, ...]
    gram: Mat
    representatives: tuple[Vec, ...]  # vectors of g lifting each new basis element


def nilpotentize(H: HomogeneousModelData) -> Nilpotentization:
    """Graded algebra on (p^j + k)/(p^{j-1} + k) with induced brackets."""
    g, k = H.g, H.k
    flag = flag_growth(g, H.p1)
    filt = [k]
    for s in flag.spaces:
        nxt = subspace_sum(s, k)
        if nxt.dim == filt[-1].dim:
            break
        filt.append(nxt)
    dims = tuple(b.dim - a.dim for a, b in zip(filt, filt[1:]))
    if filt[-1].dim != g.dim:
        raise NotBracketGenerating(
            f"horizontal flag stabilizes at dim {filt[-1].dim - k.dim} of g/k (dim {g.dim - k.dim})",
            tuple(f.dim - k.dim for f in filt[1:]),
        )
    reps: list[Vec] = []
    layers: list[int] = []
    for j in range(1, len(filt)):
        if j == 1:
            block = list(H.p1.basis)
        else:
            block = list(complement_in(filt[j - 1], filt[j]).basis)
        reps += block
        layers += [j] * len(block)
    # coordinates of any vector of g in the adapted basis (k, reps)
    adapted = list(k.basis) + reps
    m = Mat.from_columns(adapted, rows=g.dim)
    inv = inverse(m)
    off = k.dim
    dim = len(reps)
    br = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            target = layers[a] + layers[b]
            if target >= len(filt):
                continue
            coords = inv.apply(g.bracket(reps[a], reps[b]))
            c = {t: coords[off + t] for t in range(dim) if layers[t] == target and coords[off + t]}
            if c:
                br[(a, b)] = c
    labels = [f"n{layers[t]}_{t + 1}" for t in range(dim)]
    nil = LieAlgebra(dim, br, labels, layers)
    return Nilpotentization(nil, dims, H.gram, tuple(reps))


def carnot_isomorphic(
    gr: LieAlgebra,
    target: LieAlgebra,
    gr_gram: Mat | None = None,
    target_gram: Mat | None = None,
) -> str:
    """Compare two stratified algebras through their kernels in f_{n,r}.

    Layer-1 basis vectors are taken as orthonormal; a non-identity Gram
    matrix makes the comparison inconclusive.
    """
    for L in (gr, target):
        _require_stratified(L)
    dims_a = [len(gr.layer_indices(m)) for m in range(1, gr.step + 1)]
    dims_b = [len(target.layer_indices(m)) for m in range(1, target.step + 1)]
    if dims_a != dims_b:
        return NO
    for gm in (gr_gram, target_gram):
        if gm is not None and gm != Mat.identity(dims_a[0]):
            return INCONCLUSIVE
    F = build_free(dims_a[0], gr.step)
    _, ka = canonical_surjection(F, gr)
    _, kb = canonical_surjection(F, target)
    if ka == kb:
        return YES
    if ka.dim != kb.dim:
        return NO
    if carnot_model_check(F, ka).verdict or carnot_model_check(F, kb).verdict:
        return NO
    return INCONCLUSIVE


def is_stratified(L: LieAlgebra) -> bool:
    try:
        _require_stratified(L)
    except ValueError:
        return False
    return jacobi_check(L).ok


__all__ = [
    "ModelCheckReport",
    "Nilpotentization",
    "NotBracketGenerating",
    "Witness",
    "carnot_isomorphic",
    "carnot_model_check",
    "lie_model_check",
    "nilpotentize",
    "orbit_closure",
    "verify_witness",
]

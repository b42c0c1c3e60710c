"""Homogeneous model data (g, k, p1, gram) and the holonomy dichotomy.

Everything here is algebraic: K-invariance is checked infinitesimally,
holonomy is read off from the subalgebra generated by p1, and growth is
measured on g/k.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .liecore import LieAlgebra, Flag, bracket_space, flag_growth, is_subalgebra, subalgebra_generated
from .ratlin import (
    Mat,
    Subspace,
    det,
    full_space,
    intersect,
    subspace_sum,
    zero_space,
)

TRIVIAL = "trivial"
FULL = "full"


class DichotomyError(ValueError):
    """p-hat is neither complementary to k nor all of g."""


@dataclass(frozen=True)
class HomogeneousModelData:
    g: LieAlgebra
    k: Subspace
    p1: Subspace
    gram: Mat
    parts: dict = field(default_factory=dict, compare=False)

    @classmethod
    def carnot(cls, g: LieAlgebra, horizontal: Subspace | None = None) -> HomogeneousModelData:
        """Data with trivial isotropy; horizontal defaults to layer 1."""
        p1 = horizontal if horizontal is not None else g.layer_space(1)
        return cls(g, zero_space(g.dim), p1, Mat.identity(p1.dim))

    def p1_vectors(self) -> list[tuple]:
        return list(self.p1.basis)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _positive_definite(m: Mat) -> bool:
    for size in range(1, m.rows + 1):
        minor = Mat((r[:size] for r in m.entries[:size]), cols=size)
        if det(minor) <= 0:
            return False
    return True


def _coords(p1: Subspace, v) -> tuple:
    return p1.coordinates(v)


def validate(H: HomogeneousModelData) -> ValidationReport:
    g, k, p1, gram = H.g, H.k, H.p1, H.gram
    bad: list[str] = []
    if k.ambient_dim != g.dim or p1.ambient_dim != g.dim:
        return ValidationReport(False, ("subspaces do not live in g",))
    if not is_subalgebra(g, k):
        bad.append("k is not a subalgebra: [k, k] not contained in k")
    if intersect(k, p1).dim:
        bad.append("k and p1 intersect nontrivially")
    if not bracket_space(g, k, p1) <= p1:
        bad.append("p1 is not k-invariant: [k, p1] not contained in p1")
    if gram.shape != (p1.dim, p1.dim):
        bad.append(f"gram has shape {gram.shape}, expected {(p1.dim, p1.dim)}")
    else:
        if gram != gram.T:
            bad.append("gram is not symmetric")
        elif not _positive_definite(gram):
            bad.append("gram is not positive definite")
        elif not bad:
            # <[C,x], y> + <x, [C,y]> = 0, written as M^T G + G M = 0
            for c in k.basis:
                cols = [_coords(p1, g.bracket(c, v)) for v in p1.basis]
                m = Mat.from_columns(cols, rows=p1.dim)
                if not (m.T @ gram + gram @ m).is_zero():
                    bad.append("gram is not ad(k)-invariant")
                    break
    return ValidationReport(not bad, tuple(bad))


@dataclass(frozen=True)
class HolonomyResult:
    verdict: str
    generated: Subspace
    decomposition_kind: str


def holonomy_dichotomy(H: HomogeneousModelData) -> HolonomyResult:
    phat = subalgebra_generated(H.g, H.p1)
    full = full_space(H.g.dim)
    if intersect(phat, H.k).dim == 0 and subspace_sum(phat, H.k) == full:
        return HolonomyResult(TRIVIAL, phat, "g = p^ + k (direct)")
    if phat == full:
        return HolonomyResult(FULL, phat, "g = p^")
    raise DichotomyError(
        f"generated subalgebra has dim {phat.dim}, meets k in dim "
        f"{intersect(phat, H.k).dim}, and spans dim {subspace_sum(phat, H.k).dim} with k "
        f"(g has dim {H.g.dim}); not model-space data"
    )


@dataclass(frozen=True)
class FlatnessResult:
    is_flat: bool
    subalgebra: Subspace | None


def flatness_check(H: HomogeneousModelData) -> FlatnessResult:
    res = holonomy_dichotomy(H)
    if res.verdict == TRIVIAL:
        return FlatnessResult(True, res.generated)
    return FlatnessResult(False, None)


def frame_lift(H: HomogeneousModelData) -> HomogeneousModelData:
    """The same structure on the full group: isotropy dropped."""
    return replace(H, k=zero_space(H.g.dim))


@dataclass(frozen=True)
class Growth:
    dims: tuple[int, ...]
    flag: Flag
    exhausts: bool

    @property
    def step(self) -> int:
        return len(self.dims)


def step_and_growth(H: HomogeneousModelData) -> Growth:
    """Growth vector of the horizontal flag on g/k, repeated tail dropped."""
    flag = flag_growth(H.g, H.p1)
    dims: list[int] = []
    for s in flag.spaces:
        d = subspace_sum(s, H.k).dim - H.k.dim
        if dims and d == dims[-1]:
            break
        dims.append(d)
    return Growth(tuple(dims), flag, dims[-1] == H.g.dim - H.k.dim)

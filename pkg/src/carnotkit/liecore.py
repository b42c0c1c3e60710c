"""Finite-dimensional Lie algebras over Q given by structure constants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .ratlin import (
    ZERO,
    DimensionError,
    Mat,
    Subspace,
    Vec,
    complement_in,
    full_space,
    is_zero,
    q,
    q_str,
    rank,
    span,
    subspace_sum,
    unit_vec,
    vec,
    zero_space,
)

Brackets = dict  # dict[tuple[int, int], dict[int, Fraction]], keyed with i < j


class NotAnIdeal(ValueError):
    pass


class LieAlgebra:
    """Lie algebra on a named basis; only ``[e_i, e_j]`` with ``i < j`` is stored."""

    __slots__ = ("dim", "labels", "brackets", "layers", "_partners")

    def __init__(
        self,
        dim: int,
        brackets: Brackets | None = None,
        labels: Sequence[str] | None = None,
        layers: Sequence[int] | None = None,
    ):
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.labels) != dim:
            raise DimensionError("one label per basis element is required")
        clean: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket key ({i}, {j}) must satisfy 0 <= i < j < dim")
            c = {k: q(x) for k, x in coeffs.items() if q(x)}
            if c:
                clean[(i, j)] = c
        self.brackets = clean
        if layers is not None:
            layers = tuple(int(x) for x in layers)
            if len(layers) != dim or any(x < 1 for x in layers):
                raise ValueError("layers must assign a positive integer to each basis element")
        self.layers = layers
        partners: dict[int, list[tuple[int, int, dict]]] = {}
        for (i, j), c in clean.items():
            partners.setdefault(i, []).append((j, 1, c))
            partners.setdefault(j, []).append((i, -1, c))
        self._partners = partners

    @classmethod
    def from_function(
        cls,
        dim: int,
        bracket_fn: Callable[[int, int], Sequence],
        labels: Sequence[str] | None = None,
        layers: Sequence[int] | None = None,
    ) -> LieAlgebra:
        """Build structure constants by evaluating ``bracket_fn(i, j)`` for i < j."""
        br = {}
        for i, j in itertools.combinations(range(dim), 2):
            v = bracket_fn(i, j)
            c = {k: q(x) for k, x in enumerate(v) if x}
            if c:
                br[(i, j)] = c
        return cls(dim, br, labels, layers)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self.brackets == other.brackets
            and self.labels == other.labels
            and self.layers == other.layers
        )

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, nonzero_brackets={len(self.brackets)})"

    def basis_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: -x for k, x in self.brackets.get((j, i), {}).items()}

    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionError(f"vectors must have length {self.dim}")
        out = [ZERO] * self.dim
        ynz = {j: b for j, b in enumerate(y) if b}
        if not ynz:
            return tuple(out)
        for i, a in enumerate(x):
            if not a:
                continue
            for j, sign, c in self._partners.get(i, ()):
                b = ynz.get(j)
                if b:
                    f = a * b if sign > 0 else -(a * b)
                    for k, z in c.items():
                        out[k] += f * z
        return tuple(out)

    def ad(self, x: Sequence) -> Mat:
        cols = [self.bracket(x, unit_vec(self.dim, j)) for j in range(self.dim)]
        return Mat.from_columns(cols, rows=self.dim)

    def basis_vector(self, i: int) -> Vec:
        return unit_vec(self.dim, i)

    def layer_indices(self, m: int) -> list[int]:
        if self.layers is None:
            raise ValueError("algebra carries no grading")
        return [i for i, x in enumerate(self.layers) if x == m]

    def layer_space(self, m: int) -> Subspace:
        return span((unit_vec(self.dim, i) for i in self.layer_indices(m)), self.dim)

    @property
    def step(self) -> int:
        return max(self.layers) if self.layers else 0


@dataclass(frozen=True)
class LinearMap:
    matrix: Mat

    @property
    def source_dim(self) -> int:
        return self.matrix.cols

    @property
    def target_dim(self) -> int:
        return self.matrix.rows

    def __call__(self, v: Sequence) -> Vec:
        return self.matrix.apply(v)

    def compose(self, other: LinearMap) -> LinearMap:
        """``self ∘ other``."""
        return LinearMap(self.matrix @ other.matrix)

    @classmethod
    def identity(cls, n: int) -> LinearMap:
        return cls(Mat.identity(n))

    @classmethod
    def from_images(cls, images: Sequence[Sequence], target_dim: int) -> LinearMap:
        return cls(Mat.from_columns([vec(v) for v in images], rows=target_dim))

    @property
    def rank(self) -> int:
        return rank(self.matrix)


# --- checks ------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiResult:
    ok: bool
    triple: tuple[int, int, int] | None = None
    residual: Vec | None = None

    def __bool__(self) -> bool:
        return self.ok


def graded_violation(L: LieAlgebra) -> tuple[int, int, int] | None:
    """First ``(i, j, k)`` with ``[e_i, e_j]`` having support at k outside layer i+j."""
    if L.layers is None:
        return None
    for (i, j), c in sorted(L.brackets.items()):
        target = L.layers[i] + L.layers[j]
        for k in sorted(c):
            if L.layers[k] != target:
                return (i, j, k)
    return None


def jacobi_check(L: LieAlgebra) -> JacobiResult:
    """Exhaustive Jacobi identity over basis triples i < j < k.

    For a correctly graded algebra, triples whose layer sum exceeds the top
    layer vanish identically and are skipped.
    """
    top = None
    if L.layers is not None and graded_violation(L) is None:
        top = max(L.layers)
    n = L.dim
    e = [unit_vec(n, i) for i in range(n)]
    br = [[None] * n for _ in range(n)]

    def b(i, j):
        v = br[i][j]
        if v is None:
            v = L.bracket(e[i], e[j])
            br[i][j] = v
        return v

    active = {i for i in range(n) if L._partners.get(i)}
    order = sorted(range(n), key=lambda i: L.layers[i]) if top is not None else list(range(n))
    lay = [L.layers[i] for i in order] if top is not None else [0] * n
    limit = top if top is not None else 0
    for a in range(n):
        for b_ in range(a + 1, n):
            if top is not None and lay[a] + 2 * lay[b_] > limit:
                break
            for c in range(b_ + 1, n):
                if top is not None and lay[a] + lay[b_] + lay[c] > limit:
                    break
                i, j, k = order[a], order[b_], order[c]
                if i not in active and j not in active and k not in active:
                    continue
                t1 = L.bracket(b(i, j), e[k])
                t2 = L.bracket(b(j, k), e[i])
                t3 = L.bracket(b(k, i), e[j])
                res = tuple(x + y + z for x, y, z in zip(t1, t2, t3))
                if not is_zero(res):
                    return JacobiResult(False, (i, j, k), res)
    return JacobiResult(True)


def bracket_space(L: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    return span((L.bracket(x, y) for x in a.basis for y in b.basis), L.dim)


def is_subalgebra(L: LieAlgebra, s: Subspace) -> bool:
    return bracket_space(L, s, s) <= s


def is_ideal(L: LieAlgebra, s: Subspace) -> bool:
    return bracket_space(L, full_space(L.dim), s) <= s


def subalgebra_generated(L: LieAlgebra, seed: Subspace) -> Subspace:
    if seed.ambient_dim != L.dim:
        raise DimensionError("seed lives in the wrong ambient space")
    cur = seed
    while True:
        nxt = subspace_sum(cur, bracket_space(L, cur, cur))
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


@dataclass(frozen=True)
class Flag:
    spaces: tuple[Subspace, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)

    @property
    def step(self) -> int:
        return len(self.spaces)

    @property
    def top(self) -> Subspace:
        return self.spaces[-1]


def flag_growth(L: LieAlgebra, horizontal: Subspace) -> Flag:
    """Flag p^1 ⊆ p^2 ⊆ ... with p^{j+1} = p^j + [p^1, p^j], up to stabilization."""
    if horizontal.ambient_dim != L.dim:
        raise DimensionError("horizontal subspace lives in the wrong ambient space")
    spaces = [horizontal]
    while True:
        nxt = subspace_sum(spaces[-1], bracket_space(L, horizontal, spaces[-1]))
        if nxt.dim == spaces[-1].dim:
            return Flag(tuple(spaces))
        spaces.append(nxt)


def quotient(L: LieAlgebra, ideal: Subspace) -> tuple[LieAlgebra, LinearMap]:
    """Quotient on the canonical complement of ``ideal`` and its projection."""
    if not is_ideal(L, ideal):
        raise NotAnIdeal("subspace is not an ideal")
    keep = [i for i in range(L.dim) if i not in set(ideal.pivots)]
    m = len(keep)

    def project(v: Sequence) -> Vec:
        r = ideal.reduce(v)
        return tuple(r[i] for i in keep)

    br = {}
    for a, b in itertools.combinations(range(m), 2):
        v = project(L.bracket(unit_vec(L.dim, keep[a]), unit_vec(L.dim, keep[b])))
        c = {k: x for k, x in enumerate(v) if x}
        if c:
            br[(a, b)] = c
    layers = None
    if L.layers is not None:
        layers = [L.layers[i] for i in keep]
    Q = LieAlgebra(m, br, [L.labels[i] for i in keep], layers)
    if layers is not None and graded_violation(Q) is not None:
        Q = LieAlgebra(m, br, Q.labels, None)
    proj = LinearMap.from_images([project(unit_vec(L.dim, i)) for i in range(L.dim)], m)
    return Q, proj


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    failing_pair: tuple[int, int] | None = None
    is_isomorphism: bool = False

    def __bool__(self) -> bool:
        return self.ok


def homomorphism_check(phi: LinearMap, src: LieAlgebra, dst: LieAlgebra) -> HomCheck:
    if phi.source_dim != src.dim or phi.target_dim != dst.dim:
        raise DimensionError("map shape does not match the algebras")
    images = [phi.matrix.col(j) for j in range(src.dim)]
    for i, j in itertools.combinations(range(src.dim), 2):
        lhs = phi(src.bracket(unit_vec(src.dim, i), unit_vec(src.dim, j)))
        rhs = dst.bracket(images[i], images[j])
        if lhs != rhs:
            return HomCheck(False, (i, j))
    iso = src.dim == dst.dim and phi.rank == src.dim
    return HomCheck(True, None, iso)


def direct_sum(algebras: Sequence[LieAlgebra]) -> LieAlgebra:
    br = {}
    labels: list[str] = []
    layers: list[int] | None = []
    off = 0
    for idx, L in enumerate(algebras):
        for (i, j), c in L.brackets.items():
            br[(i + off, j + off)] = {k + off: x for k, x in c.items()}
        labels += [f"{lab}#{idx + 1}" for lab in L.labels]
        if layers is not None and L.layers is not None:
            layers += list(L.layers)
        else:
            layers = None
        off += L.dim
    return LieAlgebra(off, br, labels, layers)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {})


# --- JSON --------------------------------------------------------------------

def to_json(L: LieAlgebra) -> dict:
    out: dict = {"dim": L.dim, "basis": list(L.labels)}
    if L.layers is not None:
        out["layers"] = list(L.layers)
    out["brackets"] = [
        {"i": i, "j": j, "coeffs": {str(k): q_str(x) for k, x in sorted(c.items())}}
        for (i, j), c in sorted(L.brackets.items())
    ]
    return out


def from_json(data: dict) -> LieAlgebra:
    dim = int(data["dim"])
    br: dict = {}
    for entry in data.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        coeffs = {int(k): q(v) for k, v in entry["coeffs"].items()}
        if i == j:
            if any(coeffs.values()):
                raise ValueError("[e_i, e_i] must vanish")
            continue
        if i > j:
            i, j = j, i
            coeffs = {k: -v for k, v in coeffs.items()}
        if (i, j) in br:
            raise ValueError(f"duplicate bracket entry ({i}, {j})")
        br[(i, j)] = coeffs
    return LieAlgebra(dim, br, data.get("basis"), data.get("layers"))


def vectors_to_json(vs: Iterable[Sequence]) -> list[list[str]]:
    return [[q_str(x) for x in v] for v in vs]


def vectors_from_json(rows: Iterable[Sequence]) -> list[Vec]:
    return [vec(r) for r in rows]


__all__ = [
    "LieAlgebra",
    "LinearMap",
    "Flag",
    "HomCheck",
    "JacobiResult",
    "NotAnIdeal",
    "abelian",
    "bracket_space",
    "complement_in",
    "direct_sum",
    "flag_growth",
    "from_json",
    "graded_violation",
    "homomorphism_check",
    "is_ideal",
    "is_subalgebra",
    "jacobi_check",
    "quotient",
    "subalgebra_generated",
    "to_json",
    "zero_space",
]

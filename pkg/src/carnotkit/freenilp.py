"""Free nilpotent Lie algebras f_{n,r} on a Hall basis.

Basis words are ordered by degree, then lexicographically by the indices
of their (left, right) factors.  A bracket ``[u, v]`` is a basis word when
``u < v`` and, if ``v = [x, y]``, also ``x <= u``.  Products of basis words
are rewritten into the basis with the Jacobi identity

    [u, [x, y]] = [[u, x], y] + [x, [u, y]]

and everything of degree above r is dropped.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .liecore import LieAlgebra, LinearMap, homomorphism_check
from .ratlin import ZERO, Mat, Subspace, Vec, kernel, span, unit_vec, vec

DEFAULT_MAX_DIM = 500


class ResourceLimitError(RuntimeError):
    pass


class SurjectionError(ValueError):
    pass


class HallWord(NamedTuple):
    degree: int
    generator: int | None  # set for degree-1 words
    left: int | None  # basis indices of the factors otherwise
    right: int | None


def mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_ranks(n: int, r: int) -> list[int]:
    """Layer dimensions (1/k) sum_{d | k} mu(d) n^(k/d) for k = 1..r."""
    out = []
    for k in range(1, r + 1):
        total = sum(mobius(d) * n ** (k // d) for d in range(1, k + 1) if k % d == 0)
        out.append(total // k)
    return out


@dataclass(frozen=True)
class FreeNilpotent:
    n: int
    r: int
    words: tuple[HallWord, ...]
    algebra: LieAlgebra

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def layer_ranks(self) -> list[int]:
        counts = [0] * self.r
        for w in self.words:
            counts[w.degree - 1] += 1
        return counts

    def generator_vector(self, i: int) -> Vec:
        return unit_vec(self.dim, i)

    def label(self, i: int) -> str:
        return self.algebra.labels[i]


def _label(words: list[HallWord], i: int) -> str:
    w = words[i]
    if w.generator is not None:
        return f"A{w.generator + 1}"
    return f"[{_label(words, w.left)},{_label(words, w.right)}]"


def _enumerate(n: int, r: int) -> list[HallWord]:
    words = [HallWord(1, i, None, None) for i in range(n)]
    by_degree: dict[int, list[int]] = {1: list(range(n))}
    for d in range(2, r + 1):
        new = []
        for du in range(1, d):
            dv = d - du
            for u in by_degree[du]:
                for v in by_degree[dv]:
                    if u >= v:
                        continue
                    wv = words[v]
                    if wv.generator is None and wv.left > u:
                        continue
                    new.append((u, v))
        new.sort()
        by_degree[d] = []
        for u, v in new:
            by_degree[d].append(len(words))
            words.append(HallWord(d, None, u, v))
    return words


def build_free(n: int, r: int, max_dim: int = DEFAULT_MAX_DIM) -> FreeNilpotent:
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 generators and step r >= 1")
    expected = sum(witt_ranks(n, r))
    if expected > max_dim:
        raise ResourceLimitError(f"f_{{{n},{r}}} has dimension {expected} > limit {max_dim}")
    words = _enumerate(n, r)
    index = {(w.left, w.right): i for i, w in enumerate(words) if w.generator is None}
    deg = [w.degree for w in words]
    memo: dict[tuple[int, int], dict[int, Fraction]] = {}

    def br(u: int, v: int) -> dict[int, Fraction]:
        if u == v or deg[u] + deg[v] > r:
            return {}
        key = (u, v)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if u > v:
            res = {k: -x for k, x in br(v, u).items()}
        else:
            wv = words[v]
            if wv.generator is not None or wv.left <= u:
                res = {index[(u, v)]: Fraction(1)}
            else:
                x, y = wv.left, wv.right
                acc: dict[int, Fraction] = {}
                for w, c in br(u, x).items():
                    for k, z in br(w, y).items():
                        acc[k] = acc.get(k, ZERO) + c * z
                for w, c in br(u, y).items():
                    for k, z in br(x, w).items():
                        acc[k] = acc.get(k, ZERO) + c * z
                res = {k: z for k, z in acc.items() if z}
        memo[key] = res
        return res

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        brackets = {}
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                c = br(i, j)
                if c:
                    brackets[(i, j)] = c
    finally:
        sys.setrecursionlimit(old)
    labels = [_label(words, i) for i in range(len(words))]
    alg = LieAlgebra(len(words), brackets, labels, deg)
    return FreeNilpotent(n, r, tuple(words), alg)


def _extend(F: FreeNilpotent, images: Sequence[Vec], bracket) -> list[Vec]:
    out: list[Vec] = []
    for w in F.words:
        if w.generator is not None:
            out.append(images[w.generator])
        else:
            out.append(bracket(out[w.left], out[w.right]))
    return out


def induced_endomorphism(F: FreeNilpotent, qmat: Mat) -> LinearMap:
    """Graded endomorphism psi(q) with psi(q)|f_1 = q (leaf substitution)."""
    if qmat.shape != (F.n, F.n):
        raise ValueError(f"expected a {F.n}x{F.n} matrix")
    gens = [tuple(qmat[k, i] for k in range(F.n)) + (ZERO,) * (F.dim - F.n) for i in range(F.n)]
    cols = _extend(F, gens, F.algebra.bracket)
    return LinearMap.from_images(cols, F.dim)


def induced_derivation(F: FreeNilpotent, amat: Mat) -> LinearMap:
    """Derivation D_A with D_A|f_1 = A, extended by the Leibniz rule."""
    if amat.shape != (F.n, F.n):
        raise ValueError(f"expected a {F.n}x{F.n} matrix")
    L = F.algebra
    cols: list[Vec] = []
    for i, w in enumerate(F.words):
        if w.generator is not None:
            cols.append(tuple(amat[k, w.generator] for k in range(F.n)) + (ZERO,) * (F.dim - F.n))
        else:
            el, er = unit_vec(F.dim, w.left), unit_vec(F.dim, w.right)
            a = L.bracket(cols[w.left], er)
            b = L.bracket(el, cols[w.right])
            cols.append(tuple(x + y for x, y in zip(a, b)))
    return LinearMap.from_images(cols, F.dim)


def generator_map(F: FreeNilpotent, target: LieAlgebra, images: Sequence[Sequence]) -> LinearMap:
    """Evaluate every Hall word in ``target`` after substituting generator images."""
    if len(images) != F.n:
        raise ValueError(f"need {F.n} generator images")
    imgs = [vec(v) for v in images]
    for v in imgs:
        if len(v) != target.dim:
            raise ValueError("generator image has the wrong length")
    return LinearMap.from_images(_extend(F, imgs, target.bracket), target.dim)


def canonical_surjection(
    F: FreeNilpotent, target: LieAlgebra, images: Sequence[Sequence] | None = None
) -> tuple[LinearMap, Subspace]:
    """Graded homomorphism f_{n,r} -> target sending generator i to images[i].

    ``images`` defaults to the target's layer-1 basis vectors in order.
    """
    if target.layers is None:
        raise SurjectionError("target must carry a stratification (layers)")
    layer1 = target.layer_indices(1)
    if images is None:
        images = [unit_vec(target.dim, i) for i in layer1]
    if len(images) != F.n:
        raise SurjectionError(f"target layer 1 has rank {len(layer1)} but F has {F.n} generators")
    if span(images, target.dim) != target.layer_space(1):
        raise SurjectionError("generator images do not span the target's first layer")
    phi = generator_map(F, target, images)
    check = homomorphism_check(phi, F.algebra, target)
    if not check.ok:
        i, j = check.failing_pair
        raise SurjectionError(
            f"induced map is not a homomorphism at ({F.label(i)}, {F.label(j)}); "
            "target is not a quotient of this free algebra"
        )
    if phi.rank != target.dim:
        raise SurjectionError("induced map is not surjective (target not generated by layer 1)")
    return phi, span(kernel(phi.matrix), F.dim)

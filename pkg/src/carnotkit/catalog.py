"""Constructors for the concrete algebras and homogeneous data.

Conventions used throughout:

* o(n) basis: pairs (i, j), i < j, in lexicographic order; the element for
  (i, j) is E_ji - E_ij, the image of e_i ∧ e_j under x ∧ y -> y x^T - x y^T.
* x ∧ y has coordinate x_i y_j - x_j y_i on the pair (i, j).
* o(n) acts on R^n by matrix multiplication and on itself by commutators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .freenilp import build_free
from .holonomy import HomogeneousModelData
from .liecore import LieAlgebra, LinearMap, direct_sum, quotient
from .ratlin import (
    ZERO,
    DimensionError,
    Mat,
    Subspace,
    Vec,
    commutator,
    coordinate_space,
    det,
    inverse,
    kernel,
    q,
    span,
    unit_vec,
    vec,
)

# --- o(n) and exterior powers --------------------------------------------------


@lru_cache(maxsize=None)
def so_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


def so_dim(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def so_basis(n: int) -> tuple[Mat, ...]:
    out = []
    for i, j in so_pairs(n):
        m = [[0] * n for _ in range(n)]
        m[j][i] = 1
        m[i][j] = -1
        out.append(Mat(m))
    return tuple(out)


def so_matrix(n: int, coords: Sequence) -> Mat:
    m = [[ZERO] * n for _ in range(n)]
    for c, (i, j) in zip(coords, so_pairs(n)):
        c = q(c)
        m[j][i] += c
        m[i][j] -= c
    return Mat(m)


def so_coords(a: Mat) -> Vec:
    return tuple(a[j, i] for i, j in so_pairs(a.rows))


def wedge_coords(x: Sequence, y: Sequence) -> Vec:
    return tuple(q(x[i]) * q(y[j]) - q(x[j]) * q(y[i]) for i, j in so_pairs(len(x)))


def wedge_to_so(n: int, x: Sequence, y: Sequence) -> Mat:
    """y x^T - x y^T."""
    if len(x) != n or len(y) != n:
        raise DimensionError(f"vectors must have length {n}")
    x, y = vec(x), vec(y)
    return Mat([[y[i] * x[j] - x[i] * y[j] for j in range(n)] for i in range(n)])


def rational_orthogonal(a: Mat) -> Mat:
    """Cayley transform (I - A)(I + A)^-1 of an antisymmetric rational A."""
    n = a.rows
    i = Mat.identity(n)
    return (i - a) @ inverse(i + a)


def signed_permutation(perm: Sequence[int], signs: Sequence[int]) -> Mat:
    n = len(perm)
    m = [[0] * n for _ in range(n)]
    for col, (row, s) in enumerate(zip(perm, signs)):
        m[row][col] = s
    return Mat(m)


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def exterior_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), k))


def hodge_star(n: int, k: int) -> LinearMap:
    """Star on the standard basis of wedge^k R^n: e_I -> sign(I, I^c) e_{I^c}."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    src = exterior_basis(n, k)
    dst = exterior_basis(n, n - k)
    pos = {s: i for i, s in enumerate(dst)}
    cols = []
    for s in src:
        comp = tuple(i for i in range(n) if i not in s)
        v = [ZERO] * len(dst)
        v[pos[comp]] = Fraction(_perm_sign(s + comp))
        cols.append(v)
    return LinearMap(Mat.from_columns(cols, rows=len(dst)))


def wedge_k(n: int, vectors: Sequence[Sequence]) -> Vec:
    """Coordinates of v_1 ∧ ... ∧ v_k in the sorted-subset basis."""
    k = len(vectors)
    out = []
    for s in exterior_basis(n, k):
        out.append(det(Mat([[q(v[i]) for i in s] for v in vectors])) if k else Fraction(1))
    return tuple(out)


# --- helpers for algebras described by component tuples ---------------------------


class _Layout:
    """Named blocks of coordinates: ('x', n) for R^n, ('A', so(n)) for o(n)."""

    def __init__(self, n: int, blocks: Sequence[tuple[str, str]]):
        self.n = n
        self.blocks = list(blocks)
        self.offsets = {}
        off = 0
        for name, kind in self.blocks:
            self.offsets[name] = off
            off += n if kind == "vec" else so_dim(n)
        self.dim = off

    def size(self, name: str) -> int:
        kind = dict(self.blocks)[name]
        return self.n if kind == "vec" else so_dim(self.n)

    def split(self, v: Sequence) -> dict:
        out = {}
        for name, kind in self.blocks:
            o = self.offsets[name]
            part = v[o : o + self.size(name)]
            out[name] = vec(part) if kind == "vec" else so_matrix(self.n, part)
        return out

    def join(self, parts: dict) -> Vec:
        v = [ZERO] * self.dim
        for name, kind in self.blocks:
            val = parts.get(name)
            if val is None:
                continue
            coords = vec(val) if kind == "vec" else so_coords(val)
            o = self.offsets[name]
            for i, c in enumerate(coords):
                v[o + i] = c
        return tuple(v)

    def indices(self, name: str) -> list[int]:
        o = self.offsets[name]
        return list(range(o, o + self.size(name)))

    def labels(self, names: dict[str, str]) -> list[str]:
        out = []
        for name, kind in self.blocks:
            stem = names.get(name, name)
            if kind == "vec":
                out += [f"{stem}{i + 1}" for i in range(self.n)]
            else:
                out += [f"{stem}{i + 1}{j + 1}" for i, j in so_pairs(self.n)]
        return out

    def algebra(self, fn, labels=None, layers=None) -> LieAlgebra:
        e = [unit_vec(self.dim, i) for i in range(self.dim)]
        return LieAlgebra.from_function(
            self.dim, lambda i, j: self.join(fn(self.split(e[i]), self.split(e[j]))), labels, layers
        )

    def space(self, *names: str) -> Subspace:
        return coordinate_space(self.dim, (i for nm in names for i in self.indices(nm)))


def _mv(a: Mat, x: Vec) -> Vec:
    return a.apply(x)


def _vadd(*vs: Vec) -> Vec:
    return tuple(sum(t, ZERO) for t in zip(*vs))


def _vs(c, x: Vec) -> Vec:
    c = q(c)
    return tuple(c * t for t in x)


def _w(n: int, x: Vec, y: Vec) -> Mat:
    return wedge_to_so(n, x, y)


# --- Riemannian models and their rolling sums -----------------------------------


def riemannian_model(n: int, rho) -> HomogeneousModelData:
    """g_n(rho) on R^n ⊕ o(n): [(x,A),(y,B)] = (Ay - Bx, [A,B] + rho x∧y)."""
    if n < 2:
        raise ValueError("need n >= 2")
    rho = q(rho)
    lay = _Layout(n, [("x", "vec"), ("A", "so")])

    def fn(a, b):
        x, A = a["x"], a["A"]
        y, B = b["x"], b["A"]
        return {"x": _vadd(_mv(A, y), _vs(-1, _mv(B, x))), "A": commutator(A, B) + _w(n, x, y).scale(rho)}

    g = lay.algebra(fn, lay.labels({"x": "X", "A": "R"}))
    p = lay.space("x")
    k = lay.space("A")
    return HomogeneousModelData(g, k, p, Mat.identity(n), {"translations": p, "rotations": k})


@dataclass(frozen=True)
class RollingSpec:
    n: int
    rhos: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 2 or not self.rhos:
            raise ValueError("need n >= 2 and at least one curvature")
        object.__setattr__(self, "rhos", tuple(q(r) for r in self.rhos))


@dataclass(frozen=True)
class RollingSum:
    spec: RollingSpec
    data: HomogeneousModelData

    @property
    def algebra(self) -> LieAlgebra:
        return self.data.g

    def _factor_dim(self) -> int:
        return self.spec.n + so_dim(self.spec.n)

    def x_of(self, x: Sequence, u: Sequence) -> Vec:
        """x(u): component u_j x in the j-th factor."""
        n, fd = self.spec.n, self._factor_dim()
        v = [ZERO] * (fd * len(self.spec.rhos))
        for j, uj in enumerate(u):
            for i in range(n):
                v[j * fd + i] = q(uj) * q(x[i])
        return tuple(v)

    def A_of(self, a: Mat, u: Sequence) -> Vec:
        n, fd = self.spec.n, self._factor_dim()
        coords = so_coords(a)
        v = [ZERO] * (fd * len(self.spec.rhos))
        for j, uj in enumerate(u):
            for i, c in enumerate(coords):
                v[j * fd + n + i] = q(uj) * c
        return tuple(v)

    def ones(self) -> tuple[Fraction, ...]:
        return (Fraction(1),) * len(self.spec.rhos)

    def rho_power(self, m: int) -> tuple[Fraction, ...]:
        return tuple(r**m for r in self.spec.rhos)


def rolling_sum_algebra(spec: RollingSpec) -> RollingSum:
    n = spec.n
    factors = [riemannian_model(n, r) for r in spec.rhos]
    g = direct_sum([f.g for f in factors])
    tmp = RollingSum(spec, None)  # type: ignore[arg-type]
    one = tmp.ones()
    p = span((tmp.x_of(unit_vec(n, i), one) for i in range(n)), g.dim)
    k = span((tmp.A_of(a, one) for a in so_basis(n)), g.dim)
    data = HomogeneousModelData(g, k, p, Mat.identity(n), {"factors": len(spec.rhos)})
    return RollingSum(spec, data)


def vandermonde(rhos: Sequence, shift: int = 0) -> Mat:
    """(rho_i^(j-1+shift)) with 0^0 = 1."""
    r = len(rhos)
    return Mat([[q(x) ** (j + shift) for j in range(r)] for x in rhos])


# --- Carnot algebras ---------------------------------------------------------------


def _carnot_c_layout(n: int, r: int) -> tuple[list[tuple[str, int]], dict]:
    """Ordered basis of c_{n,r}: list of (kind, level) blocks and an index map."""
    blocks = []
    for m in range(1, r + 1):
        j = (m + 1) // 2
        blocks.append(("x" if m % 2 else "A", j))
    index = {}
    off = 0
    for kind, j in blocks:
        size = n if kind == "x" else so_dim(n)
        index[(kind, j)] = off
        off += size
    return blocks, {"index": index, "dim": off}


def carnot_c(n: int, r: int) -> HomogeneousModelData:
    """C_{n,r}: layers alternate R^n and o(n) with

    [x(i), y(j)] = (x∧y)(i+j-1), [A(i), x(j)] = (Ax)(i+j), [A(i), B(j)] = [A,B](i+j).
    """
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")
    blocks, info = _carnot_c_layout(n, r)
    index, dim = info["index"], info["dim"]
    s = so_dim(n)
    where: list[tuple[str, int, int]] = []  # (kind, level, local index)
    labels, layers = [], []
    for m, (kind, j) in enumerate(blocks, start=1):
        size = n if kind == "x" else s
        for t in range(size):
            where.append((kind, j, t))
            layers.append(m)
            if kind == "x":
                labels.append(f"x{t + 1}({j})")
            else:
                a, b = so_pairs(n)[t]
                labels.append(f"A{a + 1}{b + 1}({j})")

    def put(kind: str, level: int, coords: Sequence) -> Vec:
        v = [ZERO] * dim
        if (kind, level) in index:
            o = index[(kind, level)]
            for t, c in enumerate(coords):
                v[o + t] = q(c)
        return tuple(v)

    basis_so = so_basis(n)

    def fn(a: int, b: int) -> Vec:
        ka, la, ta = where[a]
        kb, lb, tb = where[b]
        if ka == "x" and kb == "x":
            return put("A", la + lb - 1, wedge_coords(unit_vec(n, ta), unit_vec(n, tb)))
        if ka == "A" and kb == "x":
            return put("x", la + lb, basis_so[ta].apply(unit_vec(n, tb)))
        if ka == "x" and kb == "A":
            return tuple(-c for c in put("x", la + lb, basis_so[tb].apply(unit_vec(n, ta))))
        return put("A", la + lb, so_coords(commutator(basis_so[ta], basis_so[tb])))

    g = LieAlgebra.from_function(dim, fn, labels, layers)
    return HomogeneousModelData.carnot(g)


def carnot_c_index(n: int, r: int, kind: str, level: int) -> int | None:
    """Offset of the x(level) or A(level) block in carnot_c(n, r), None if truncated."""
    _, info = _carnot_c_layout(n, r)
    return info["index"].get((kind, level))


def c3_quotient(n: int) -> tuple[HomogeneousModelData, Subspace, object]:
    """c_{n,3} = f_{n,3}/a with a = {sum [A_k, x_k] : sum A_k x_k = 0}.

    Returns (quotient data, the ideal a in f_{n,3}, the free algebra).
    """
    F = build_free(n, 3)
    L = F.algebra
    gens = [unit_vec(F.dim, i) for i in range(n)]
    # identify o(n) with f_2: e_i ∧ e_j -> [A_i, A_j]
    so_in_f = []
    for i, j in so_pairs(n):
        so_in_f.append(L.bracket(gens[i], gens[j]))
    pairs = [(b, t) for b in range(so_dim(n)) for t in range(n)]
    # evaluation (B ⊗ x) -> Bx and bracket (B ⊗ x) -> [B, x]
    ev = Mat.from_columns([so_basis(n)[b].apply(unit_vec(n, t)) for b, t in pairs], rows=n)
    ker = kernel(ev)
    brs = [L.bracket(so_in_f[b], gens[t]) for b, t in pairs]
    ideal_vecs = []
    for kv in ker:
        acc = [ZERO] * F.dim
        for c, w in zip(kv, brs):
            if c:
                for idx, x in enumerate(w):
                    if x:
                        acc[idx] += c * x
        ideal_vecs.append(tuple(acc))
    a = span(ideal_vecs, F.dim)
    Qalg, _ = quotient(L, a)
    return HomogeneousModelData.carnot(Qalg), a, F


def heisenberg(k: int) -> HomogeneousModelData:
    """h[k]: X_1..X_k, Y_1..Y_k, Z with [X_i, Y_j] = δ_ij Z."""
    if k < 1:
        raise ValueError("need k >= 1")
    dim = 2 * k + 1
    br = {(i, k + i): {2 * k: 1} for i in range(k)}
    labels = [f"X{i + 1}" for i in range(k)] + [f"Y{i + 1}" for i in range(k)] + ["Z"]
    g = LieAlgebra(dim, br, labels, [1] * (2 * k) + [2])
    return HomogeneousModelData.carnot(g)


def engel() -> HomogeneousModelData:
    """[X1, X2] = Z1, [X1, Z1] = Z2."""
    g = LieAlgebra(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, ["X1", "X2", "Z1", "Z2"], [1, 1, 2, 3])
    return HomogeneousModelData.carnot(g)


# --- the step-3 family M(n, a1, a2) ----------------------------------------------

MODEL_M_CONSTANTS = ("a1", "b1", "c2", "a2", "b2", "c1", "d1", "d2")


def model_m_constants(a1, a2) -> dict[str, Fraction]:
    a1, a2 = q(a1), q(a2)
    return {
        "a1": a1, "b1": a1, "c2": a1,
        "a2": a2, "b2": a2, "c1": a2,
        "d1": a2 + a1 * a1, "d2": a1 * a2,
    }


def model_m(n: int, a1=0, a2=0, constants: dict | None = None) -> HomogeneousModelData:
    """g(n, a1, a2) on a1 ⊕ a2 ⊕ a3 ⊕ k = R^n ⊕ o(n) ⊕ R^n ⊕ o(n).

    For (x,A,u,0), (y,B,v,0):
      a1: c1 (Av - Bu)
      a2: x∧y + a1 (x∧v + u∧y) + b1 [A,B] + d1 u∧v
      a3: Ay - Bx + c2 (Av - Bu)
      k : a2 (x∧v + u∧y) + b2 [A,B] + d2 u∧v
    and k acts by (Cx, [C,A], Cu, [C,C']).

    ``constants`` overrides any of MODEL_M_CONSTANTS (for perturbation tests).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    c = model_m_constants(a1, a2)
    if constants:
        unknown = set(constants) - set(MODEL_M_CONSTANTS)
        if unknown:
            raise ValueError(f"unknown constants {sorted(unknown)}")
        c.update({key: q(val) for key, val in constants.items()})
    lay = _Layout(n, [("x", "vec"), ("A", "so"), ("u", "vec"), ("C", "so")])

    def fn(p, s):
        x, A, u, C = p["x"], p["A"], p["u"], p["C"]
        y, B, v, D = s["x"], s["A"], s["u"], s["C"]
        cross = _w(n, x, v) + _w(n, u, y)
        AB = commutator(A, B)
        uv = _w(n, u, v)
        avbu = _vadd(_mv(A, v), _vs(-1, _mv(B, u)))
        out_x = _vs(c["c1"], avbu)
        out_A = _w(n, x, y) + cross.scale(c["a1"]) + AB.scale(c["b1"]) + uv.scale(c["d1"])
        out_u = _vadd(_mv(A, y), _vs(-1, _mv(B, x)), _vs(c["c2"], avbu))
        out_C = cross.scale(c["a2"]) + AB.scale(c["b2"]) + uv.scale(c["d2"])
        # isotropy acts standardly on every slot
        out_x = _vadd(out_x, _mv(C, y), _vs(-1, _mv(D, x)))
        out_A = out_A + commutator(C, B) - commutator(D, A)
        out_u = _vadd(out_u, _mv(C, v), _vs(-1, _mv(D, u)))
        out_C = out_C + commutator(C, D)
        return {"x": out_x, "A": out_A, "u": out_u, "C": out_C}

    g = lay.algebra(fn, lay.labels({"x": "X", "A": "A", "u": "U", "C": "C"}))
    parts = {
        "a1": lay.space("x"),
        "a2": lay.space("A"),
        "a3": lay.space("u"),
        "k": lay.space("C"),
        "constants": dict(c),
    }
    return HomogeneousModelData(g, lay.space("C"), lay.space("x"), Mat.identity(n), parts)


def model_m_element(n: int, x=None, A: Mat | None = None, u=None, C: Mat | None = None) -> Vec:
    lay = _Layout(n, [("x", "vec"), ("A", "so"), ("u", "vec"), ("C", "so")])
    return lay.join({"x": x, "A": A, "u": u, "C": C})

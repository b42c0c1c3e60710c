"""Spaces of O(n)- and SO(n)-equivariant linear maps.

A representation is given by the action of the o(n) basis plus, for O(n),
the action of the reflection s = diag(-1, 1, ..., 1).  Intertwiners are the
exact kernel of L ρ1(X) - ρ2(X) L = 0 over all generators X (and s).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .catalog import hodge_star, so_basis, so_coords, so_dim, wedge_coords
from .ratlin import ZERO, Mat, commutator, kron, nullspace_sparse, rank, span

O, SO = "O", "SO"


class RepresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Representation:
    n: int
    module_dim: int
    generators: tuple[Mat, ...]
    reflection: Mat | None
    group: str
    name: str = ""

    def __post_init__(self):
        if self.group not in (O, SO):
            raise RepresentationError(f"group must be O or SO, got {self.group!r}")
        if self.group == O and self.reflection is None:
            raise RepresentationError("an O(n) representation needs the reflection")


def _reflection(n: int) -> Mat:
    return Mat.diag([-1] + [1] * (n - 1))


def _adjoint_matrix(n: int, a: Mat) -> Mat:
    cols = [so_coords(commutator(a, b)) for b in so_basis(n)]
    return Mat.from_columns(cols, rows=so_dim(n))


def vector_rep(n: int, group: str = O) -> Representation:
    s = _reflection(n)
    return Representation(n, n, so_basis(n), s if group == O else None, group, f"vector:{n}")


def adjoint_rep(n: int, group: str = O) -> Representation:
    gens = tuple(_adjoint_matrix(n, a) for a in so_basis(n))
    refl = None
    if group == O:
        s = _reflection(n)
        cols = [so_coords(s @ b @ s) for b in so_basis(n)]
        refl = Mat.from_columns(cols, rows=so_dim(n))
    return Representation(n, so_dim(n), gens, refl, group, f"adjoint:{n}")


def _match(r1: Representation, r2: Representation) -> None:
    if r1.n != r2.n or r1.group != r2.group:
        raise RepresentationError(f"incompatible representations {r1.name} and {r2.name}")


def tensor_rep(r1: Representation, r2: Representation) -> Representation:
    _match(r1, r2)
    i1, i2 = Mat.identity(r1.module_dim), Mat.identity(r2.module_dim)
    gens = tuple(kron(a, i2) + kron(i1, b) for a, b in zip(r1.generators, r2.generators))
    refl = kron(r1.reflection, r2.reflection) if r1.group == O else None
    return Representation(
        r1.n, r1.module_dim * r2.module_dim, gens, refl, r1.group, f"tensor:{r1.name},{r2.name}"
    )


def _wedge2_matrix(m: Mat, derivation: bool) -> Mat:
    """Action on wedge^2 of the module: as a derivation or as a group element."""
    d = m.rows
    pairs = list(itertools.combinations(range(d), 2))
    cols = []
    for a, b in pairs:
        ea = [ZERO] * d
        eb = [ZERO] * d
        ea[a] = Fraction(1)
        eb[b] = Fraction(1)
        ma, mb = m.apply(ea), m.apply(eb)
        if derivation:
            v = [x + y for x, y in zip(wedge_coords(ma, eb), wedge_coords(ea, mb))]
        else:
            v = list(wedge_coords(ma, mb))
        cols.append(v)
    size = len(pairs)
    return Mat.from_columns(cols, rows=size) if cols else Mat.zeros(0, 0)


def wedge2_rep(r: Representation) -> Representation:
    gens = tuple(_wedge2_matrix(a, True) for a in r.generators)
    refl = _wedge2_matrix(r.reflection, False) if r.group == O else None
    d = r.module_dim
    return Representation(r.n, d * (d - 1) // 2, gens, refl, r.group, f"wedge2:{r.name}")


def check_representation(r: Representation) -> list[str]:
    """Violated invariants: o(n) relations, reflection^2 = id, reflection compatibility."""
    problems = []
    basis = so_basis(r.n)
    for i, j in itertools.combinations(range(len(basis)), 2):
        c = so_coords(commutator(basis[i], basis[j]))
        expect = Mat.zeros(r.module_dim, r.module_dim)
        for t, x in enumerate(c):
            if x:
                expect = expect + r.generators[t].scale(x)
        if commutator(r.generators[i], r.generators[j]) != expect:
            problems.append(f"generators {i},{j} break the o(n) relations")
    if r.reflection is not None:
        if r.reflection @ r.reflection != Mat.identity(r.module_dim):
            problems.append("reflection does not square to the identity")
        s = _reflection(r.n)
        for t, a in enumerate(basis):
            conj = so_coords(s @ a @ s)
            expect = Mat.zeros(r.module_dim, r.module_dim)
            for u, x in enumerate(conj):
                if x:
                    expect = expect + r.generators[u].scale(x)
            if r.reflection @ r.generators[t] @ r.reflection != expect:
                problems.append(f"reflection is incompatible with generator {t}")
    return problems


@dataclass(frozen=True)
class EquivariantSpace:
    basis: tuple[Mat, ...]
    source_dim: int
    target_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: Mat) -> bool:
        if not self.basis:
            return m.is_zero()
        vs = [_flat(b) for b in self.basis]
        return rank(Mat(vs + [_flat(m)])) == rank(Mat(vs))


def _flat(m: Mat) -> tuple:
    return tuple(x for row in m.entries for x in row)


def _intertwiner_rows(a: Mat, b: Mat, d1: int, d2: int) -> list[dict[int, Fraction]]:
    """Equations for L a - b L = 0 with L (d2 x d1) flattened row-major."""
    a_cols = [[(k, a[k, j]) for k in range(d1) if a[k, j]] for j in range(d1)]
    b_rows = [[(k, b[i, k]) for k in range(d2) if b[i, k]] for i in range(d2)]
    rows = []
    for i in range(d2):
        for j in range(d1):
            eq: dict[int, Fraction] = {}
            for k, x in a_cols[j]:
                idx = i * d1 + k
                eq[idx] = eq.get(idx, ZERO) + x
            for k, x in b_rows[i]:
                idx = k * d1 + j
                eq[idx] = eq.get(idx, ZERO) - x
            eq = {c: x for c, x in eq.items() if x}
            if eq:
                rows.append(eq)
    return rows


def equivariant_maps(src: Representation, dst: Representation) -> EquivariantSpace:
    _match(src, dst)
    d1, d2 = src.module_dim, dst.module_dim
    rows: list[dict[int, Fraction]] = []
    for a, b in zip(src.generators, dst.generators):
        rows += _intertwiner_rows(a, b, d1, d2)
    if src.group == O:
        rows += _intertwiner_rows(src.reflection, dst.reflection, d1, d2)
    sol = nullspace_sparse(rows, d1 * d2)
    canon = span(sol, d1 * d2).basis
    basis = tuple(Mat([v[i * d1 : (i + 1) * d1] for i in range(d2)], cols=d1) for v in canon)
    space = EquivariantSpace(basis, d1, d2)
    for m in space.basis:
        if not is_intertwiner(m, src, dst):
            raise AssertionError("solver returned a map that fails the intertwining equations")
    return space


def is_intertwiner(m: Mat, src: Representation, dst: Representation) -> bool:
    for a, b in zip(src.generators, dst.generators):
        if m @ a != b @ m:
            return False
    if src.group == O and m @ src.reflection != dst.reflection @ m:
        return False
    return True


def commutant_dim(rep: Representation) -> int:
    return equivariant_maps(rep, rep).dim


# --- canonical maps of the tensor lemma ------------------------------------------


def bracket_on_wedge2(n: int) -> Mat:
    """W: wedge^2 o(n) -> o(n), A ∧ B -> [A, B]."""
    basis = so_basis(n)
    cols = [so_coords(commutator(basis[a], basis[b])) for a, b in itertools.combinations(range(len(basis)), 2)]
    return Mat.from_columns(cols, rows=so_dim(n)) if cols else Mat.zeros(so_dim(n), 0)


def action_on_vectors(n: int) -> Mat:
    """T: o(n) ⊗ R^n -> R^n, A ⊗ x -> Ax."""
    basis = so_basis(n)
    cols = [basis[a].col(t) for a in range(len(basis)) for t in range(n)]
    return Mat.from_columns(cols, rows=n)


@dataclass(frozen=True)
class TensorLemmaReport:
    n: int
    dims: tuple[int, int, int]
    proportional: tuple[bool, bool, bool]

    @property
    def expected_dims(self) -> tuple[int, int, int]:
        return (1, 1, 0) if self.n == 2 else (1, 1, 1)

    @property
    def ok(self) -> bool:
        return self.dims == self.expected_dims and all(self.proportional)


def _proportional(space: EquivariantSpace, canonical: Mat) -> bool:
    if space.dim == 0:
        return canonical.is_zero() or canonical.cols == 0
    if space.dim != 1:
        return False
    return rank(Mat([_flat(space.basis[0]), _flat(canonical)])) == 1


def verify_tensor_lemma(n: int, group: str = O) -> TensorLemmaReport:
    ad = adjoint_rep(n, group)
    vr = vector_rep(n, group)
    s_space = equivariant_maps(ad, ad)
    t_space = equivariant_maps(tensor_rep(ad, vr), vr)
    w_space = equivariant_maps(wedge2_rep(ad), ad)
    dims = (s_space.dim, t_space.dim, w_space.dim)
    prop = (
        _proportional(s_space, Mat.identity(so_dim(n))),
        _proportional(t_space, action_on_vectors(n)),
        _proportional(w_space, bracket_on_wedge2(n)),
    )
    return TensorLemmaReport(n, dims, prop)


def hodge_on_adjoint(n: int) -> Mat:
    """Star on wedge^2 R^n (n = 4) read as an endomorphism of o(n)."""
    return hodge_star(n, 2).matrix


def parse_rep(text: str, group: str) -> Representation:
    """``vector:n``, ``adjoint:n``, ``tensor:<rep>,<rep>``, ``wedge2:<rep>``."""
    text = text.strip()
    if text.startswith("tensor:"):
        body = text[len("tensor:"):]
        left, right = _split_top(body, group)
        return tensor_rep(left, right)
    if text.startswith("wedge2:"):
        return wedge2_rep(parse_rep(text[len("wedge2:"):], group))
    kind, _, num = text.partition(":")
    try:
        n = int(num)
    except ValueError:
        raise RepresentationError(f"cannot parse representation {text!r}") from None
    if n < 2:
        raise RepresentationError("need n >= 2")
    if kind == "vector":
        return vector_rep(n, group)
    if kind == "adjoint":
        return adjoint_rep(n, group)
    raise RepresentationError(f"unknown representation kind {kind!r}")


def _split_top(body: str, group: str) -> tuple[Representation, Representation]:
    for i, ch in enumerate(body):
        if ch != ",":
            continue
        try:
            return parse_rep(body[:i], group), parse_rep(body[i + 1 :], group)
        except RepresentationError:
            continue
    raise RepresentationError(f"cannot split tensor factors in {body!r}")


def rep_summary(reps: Sequence[Representation]) -> list[dict]:
    return [{"name": r.name, "module_dim": r.module_dim, "group": r.group} for r in reps]

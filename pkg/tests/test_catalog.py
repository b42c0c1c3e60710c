from __future__ import annotations

import itertools
import random

import pytest

from carnotkit import catalog as cat
from carnotkit.claims import random_antisymmetric
from carnotkit.freenilp import build_free, canonical_surjection
from carnotkit.holonomy import step_and_growth, validate
from carnotkit.liecore import LieAlgebra, flag_growth, graded_violation, jacobi_check
from carnotkit.modelcheck import YES, carnot_isomorphic
from carnotkit.ratlin import Mat, det, unit_vec, vadd


def e(n, i):
    return unit_vec(n, i)


def test_wedge_examples():
    assert cat.wedge_to_so(2, e(2, 0), e(2, 1)) == Mat([[0, -1], [1, 0]])
    x = (1, -2, 3)
    assert cat.wedge_to_so(3, x, x).is_zero()
    w = cat.wedge_to_so(3, e(3, 0), e(3, 1))
    assert w == Mat([[0, -1, 0], [1, 0, 0], [0, 0, 0]])


def test_wedge_bilinear_antisymmetric():
    x, y, z = (1, 2, 0, -1), (0, 1, 3, 1), (2, -1, 1, 0)
    w = cat.wedge_to_so
    assert w(4, x, y) == w(4, y, x).scale(-1)
    assert w(4, vadd(x, z), y) == w(4, x, y) + w(4, z, y)
    assert cat.so_coords(w(4, x, y)) == cat.wedge_coords(x, y)


def test_so_basis_convention():
    # basis pair (i, j) is E_ji - E_ij, i.e. e_i ∧ e_j
    for n in (2, 3, 4):
        for (i, j), a in zip(cat.so_pairs(n), cat.so_basis(n)):
            assert a == cat.wedge_to_so(n, e(n, i), e(n, j))
        assert len(cat.so_basis(n)) == cat.so_dim(n) == n * (n - 1) // 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rational_orthogonal(n):
    rng = random.Random(n)
    for _ in range(5):
        g = cat.rational_orthogonal(random_antisymmetric(n, rng))
        assert g.T @ g == Mat.identity(n)
        assert det(g) == 1


def test_hodge_examples():
    star = cat.hodge_star(3, 1)
    assert star(e(3, 0)) == (0, 0, 1)  # e2∧e3 is the last basis pair
    assert cat.hodge_star(3, 2).compose(star).matrix == Mat.identity(3)
    s42 = cat.hodge_star(4, 2)
    assert s42(e(6, 0)) == e(6, 5)  # e1∧e2 -> e3∧e4


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_hodge_star_square_and_defining_identity(n):
    for k in range(n + 1):
        star = cat.hodge_star(n, k)
        back = cat.hodge_star(n, n - k)
        sign = (-1) ** (k * (n - k))
        assert back.compose(star).matrix == Mat.identity(star.source_dim).scale(sign)
        # a ∧ ⋆b = <a, b> vol on basis elements
        basis_k = cat.exterior_basis(n, k)
        basis_c = cat.exterior_basis(n, n - k)
        for i, s in enumerate(basis_k):
            for j, _ in enumerate(basis_k):
                img = star(e(len(basis_k), j))
                total = 0
                for t, c in enumerate(img):
                    if c:
                        vecs = [e(n, a) for a in s] + [e(n, b) for b in basis_c[t]]
                        total += c * cat.wedge_k(n, vecs)[0]
                assert total == (1 if i == j else 0)


def test_riemannian_examples():
    flat = cat.riemannian_model(3, 0)
    g = flat.g
    assert all(not any(g.bracket(x, y)) for x in flat.p1.basis for y in flat.p1.basis)
    H = cat.riemannian_model(2, 1)
    g = H.g
    assert g.bracket(e(3, 0), e(3, 1)) == (0, 0, 1)
    # [R12, X1] = R12 e1 = e2
    assert g.bracket(e(3, 2), e(3, 0)) == (0, 1, 0)
    assert jacobi_check(cat.riemannian_model(3, -1).g).ok
    assert H.g.dim == 3 and cat.riemannian_model(4, 2).g.dim == 10


@pytest.mark.parametrize("n,r", [(2, 1), (2, 2), (2, 5), (3, 3), (3, 4), (4, 3)])
def test_carnot_c_layers_and_flag(n, r):
    g = cat.carnot_c(n, r).g
    dims = [len(g.layer_indices(m)) for m in range(1, r + 1)]
    assert dims == [n if m % 2 else n * (n - 1) // 2 for m in range(1, r + 1)]
    assert graded_violation(g) is None and jacobi_check(g).ok
    flag = flag_growth(g, g.layer_space(1))
    assert list(flag.dims) == list(itertools.accumulate(dims))


def test_carnot_c_examples():
    c22 = cat.carnot_c(2, 2).g
    assert canonical_surjection(build_free(2, 2), c22)[1].dim == 0
    assert cat.carnot_c(2, 3).g.dim == 5
    assert cat.carnot_c(3, 3).g.dim == 9 != build_free(3, 3).dim


def test_carnot_c_bracket_rules():
    n, r = 3, 5
    g = cat.carnot_c(n, r).g
    idx = lambda kind, j: cat.carnot_c_index(n, r, kind, j)  # noqa: E731
    x, y = (1, 2, 0), (0, 1, -1)
    A = cat.so_basis(3)[1]

    def place(kind, j, coords):
        v = [0] * g.dim
        for t, c in enumerate(coords):
            v[idx(kind, j) + t] = c
        return tuple(v)

    assert g.bracket(place("x", 1, x), place("x", 2, y)) == place("A", 2, cat.wedge_coords(x, y))
    assert g.bracket(place("A", 1, cat.so_coords(A)), place("x", 2, y)) == place("x", 3, A.apply(y))
    B = cat.so_basis(3)[2]
    assert g.bracket(place("A", 1, cat.so_coords(A)), place("A", 1, cat.so_coords(B))) == place(
        "A", 2, cat.so_coords(cat.commutator(A, B))
    )
    assert idx("A", 3) is None


def test_c3_quotient_examples():
    H2, a2, F2 = cat.c3_quotient(2)
    assert a2.dim == 0 and H2.g.dim == F2.dim == 5
    H3, a3, _ = cat.c3_quotient(3)
    assert a3.dim == 5 and H3.g.dim == 9
    assert jacobi_check(H3.g).ok
    assert carnot_isomorphic(H3.g, cat.carnot_c(3, 3).g) == YES


def test_model_m_dims_and_validation():
    for n in (2, 3, 4):
        H = cat.model_m(n, 1, -1)
        assert H.g.dim == n * (n + 1)
        assert validate(H).ok
    assert jacobi_check(cat.model_m(2, 1, 1).g).ok
    assert not jacobi_check(cat.model_m(2, 1, 1, constants={"d2": 0}).g).ok
    with pytest.raises(ValueError):
        cat.model_m(2, constants={"zz": 1})


def horizontal_part(H) -> LieAlgebra:
    """The subalgebra a1 ⊕ a2 ⊕ a3 of M(n, 0, 0), graded 1, 2, 3."""
    g = H.g
    keep = [i for i in range(g.dim) if not H.parts["k"].contains(unit_vec(g.dim, i))]
    pos = {i: t for t, i in enumerate(keep)}
    layers = []
    for i in keep:
        v = unit_vec(g.dim, i)
        layers.append(1 if H.parts["a1"].contains(v) else 2 if H.parts["a2"].contains(v) else 3)
    br = {}
    for a, b in itertools.combinations(range(len(keep)), 2):
        out = g.bracket(unit_vec(g.dim, keep[a]), unit_vec(g.dim, keep[b]))
        assert all(out[i] == 0 for i in range(g.dim) if i not in pos)
        c = {pos[i]: x for i, x in enumerate(out) if x}
        if c:
            br[(a, b)] = c
    return LieAlgebra(len(keep), br, layers=layers)


@pytest.mark.parametrize("n", [2, 3])
def test_model_m_zero_is_c_n3(n):
    h = horizontal_part(cat.model_m(n, 0, 0))
    assert graded_violation(h) is None and jacobi_check(h).ok
    assert carnot_isomorphic(h, cat.carnot_c(n, 3).g) == YES


def test_heisenberg_and_engel():
    assert cat.heisenberg(1).g.dim == 3 and step_and_growth(cat.heisenberg(1)).dims == (2, 3)
    assert cat.heisenberg(2).g.dim == 5 and step_and_growth(cat.heisenberg(2)).dims == (4, 5)
    assert cat.engel().g.dim == 4 and step_and_growth(cat.engel()).dims == (2, 3, 4)


def test_rolling_sum_examples():
    single = cat.rolling_sum_algebra(cat.RollingSpec(2, (0,)))
    assert single.algebra.brackets == cat.riemannian_model(2, 0).g.brackets
    assert single.data.p1 == cat.riemannian_model(2, 0).p1
    rs = cat.rolling_sum_algebra(cat.RollingSpec(2, (1, -1)))
    assert rs.algebra.dim == 6
    one = rs.ones()
    lhs = rs.algebra.bracket(rs.x_of(e(2, 0), one), rs.x_of(e(2, 1), one))
    assert lhs == rs.A_of(cat.wedge_to_so(2, e(2, 0), e(2, 1)), rs.rho_power(1))
    assert cat.rolling_sum_algebra(cat.RollingSpec(3, (0, 1, 2))).algebra.dim == 18


@pytest.mark.parametrize("n,rhos", [(2, (1, -1)), (3, (0, 1, 2)), (2, (2, 1, 3))])
def test_rolling_sum_bracket_laws(n, rhos):
    rs = cat.rolling_sum_algebra(cat.RollingSpec(n, rhos))
    L = rs.algebra
    us = [rs.ones(), rs.rho_power(1), rs.rho_power(2)]
    had = lambda u, v: tuple(a * b for a, b in zip(u, v))  # noqa: E731
    rho = rs.rho_power(1)
    for u, v in itertools.product(us, us):
        for i, j in itertools.product(range(n), range(n)):
            x, y = e(n, i), e(n, j)
            assert L.bracket(rs.x_of(x, u), rs.x_of(y, v)) == rs.A_of(cat.wedge_to_so(n, x, y), had(rho, had(u, v)))
        for A in cat.so_basis(n):
            for j in range(n):
                y = e(n, j)
                assert L.bracket(rs.A_of(A, u), rs.x_of(y, v)) == rs.x_of(A.apply(y), had(u, v))
            for B in cat.so_basis(n):
                assert L.bracket(rs.A_of(A, u), rs.A_of(B, v)) == rs.A_of(cat.commutator(A, B), had(u, v))


def test_vandermonde():
    assert det(cat.vandermonde((1, 1))) == 0
    assert det(cat.vandermonde((1, 0), shift=1)) == 0
    assert det(cat.vandermonde((1, 2, 3))) == 2
    assert cat.vandermonde((0, 2)) == Mat([[1, 0], [1, 2]])


@pytest.mark.parametrize(
    "H",
    [
        cat.riemannian_model(3, 2),
        cat.carnot_c(3, 4),
        cat.heisenberg(3),
        cat.engel(),
        cat.model_m(3, 2, -1),
        cat.rolling_sum_algebra(cat.RollingSpec(3, (1, 2, 3))).data,
        cat.c3_quotient(4)[0],
    ],
    ids=["riem", "c34", "h3", "engel", "mm", "rolling", "c3q4"],
)
def test_every_constructor_is_valid(H):
    assert jacobi_check(H.g).ok
    assert validate(H).ok

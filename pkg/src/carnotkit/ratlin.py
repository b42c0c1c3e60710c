"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable row-major
grids; subspaces are stored by the reduced row echelon form of a basis, so
equal subspaces compare equal.

Elimination works on sparse dict rows internally, which keeps the large but
very sparse intertwiner systems cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction
Vec = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    pass


def q(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def q_str(x: Fraction) -> str:
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable) -> Vec:
    return tuple(q(x) for x in xs)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def vadd(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} != {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch {len(a)} != {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    c = q(c)
    return tuple(c * x for x in a)


def vcomb(terms: Iterable[tuple], n: int) -> Vec:
    """Linear combination of ``(coefficient, vector)`` pairs."""
    out = [ZERO] * n
    for c, v in terms:
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return tuple(out)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


class Mat:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        ents = tuple(vec(r) for r in entries)
        if cols is None:
            cols = len(ents[0]) if ents else 0
        for r in ents:
            if len(r) != cols:
                raise DimensionError("ragged matrix")
        self.entries = ents
        self.rows = len(ents)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Mat:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> Mat:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diag(cls, ds: Sequence) -> Mat:
        n = len(ds)
        return cls([[ds[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> Mat:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(zip(*columns), cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.entries)

    @property
    def T(self) -> Mat:
        return Mat(zip(*self.entries), cols=self.rows) if self.rows else Mat.zeros(self.cols, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(q_str(x) for x in r) + "]" for r in self.entries)
        return f"Mat([{body}])"

    def __add__(self, other: Mat) -> Mat:
        self._same_shape(other)
        return Mat((vadd(a, b) for a, b in zip(self.entries, other.entries)), cols=self.cols)

    def __sub__(self, other: Mat) -> Mat:
        self._same_shape(other)
        return Mat((vsub(a, b) for a, b in zip(self.entries, other.entries)), cols=self.cols)

    def __neg__(self) -> Mat:
        return self.scale(-1)

    def scale(self, c) -> Mat:
        return Mat((vscale(c, r) for r in self.entries), cols=self.cols)

    def __matmul__(self, other: Mat) -> Mat:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self.entries:
            acc = [ZERO] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(other.entries[k]):
                        if b:
                            acc[j] += a * b
            out.append(acc)
        return Mat(out, cols=other.cols)

    def apply(self, v: Sequence) -> Vec:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for matrix {self.shape}")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), ZERO) for r in self.entries)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def _same_shape(self, other: Mat) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} != {other.shape}")


def kron(a: Mat, b: Mat) -> Mat:
    rows = []
    for ra in a.entries:
        for rb in b.entries:
            rows.append([x * y for x in ra for y in rb])
    return Mat(rows, cols=a.cols * b.cols)


def commutator(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


# --- elimination -----------------------------------------------------------

def _rref_sparse(rows: list[dict[int, Fraction]]) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Gauss-Jordan on sparse rows.  Returns the nonzero RREF rows and pivots."""
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {c: x for c, x in row.items() if x}
        # pivot rows vanish on each other's pivot columns, so one pass suffices
        for c in [c for c in r if c in pivot_rows]:
            f = r.get(c)
            if not f:
                continue
            for cc, x in pivot_rows[c].items():
                y = r.get(cc, ZERO) - f * x
                if y:
                    r[cc] = y
                else:
                    r.pop(cc, None)
        if not r:
            continue
        lead = min(r)
        inv = 1 / r[lead]
        r = {c: x * inv for c, x in r.items()}
        for prow in pivot_rows.values():
            f = prow.get(lead)
            if f:
                for c, x in r.items():
                    y = prow.get(c, ZERO) - f * x
                    if y:
                        prow[c] = y
                    else:
                        prow.pop(c, None)
        pivot_rows[lead] = r
    pivots = sorted(pivot_rows)
    return [pivot_rows[p] for p in pivots], pivots


def _to_sparse(m: Mat) -> list[dict[int, Fraction]]:
    return [{j: x for j, x in enumerate(r) if x} for r in m.entries]


def _from_sparse(rows: list[dict[int, Fraction]], cols: int) -> Mat:
    return Mat(([r.get(j, ZERO) for j in range(cols)] for r in rows), cols=cols)


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with zero rows kept at the bottom."""
    rows, pivots = _rref_sparse(_to_sparse(m))
    out = _from_sparse(rows, m.cols)
    pad = [[ZERO] * m.cols for _ in range(m.rows - len(rows))]
    return Mat(list(out.entries) + pad, cols=m.cols), pivots


def rank(m: Mat) -> int:
    return len(_rref_sparse(_to_sparse(m))[1])


def nullspace_sparse(rows: list[dict[int, Fraction]], ncols: int) -> list[Vec]:
    """Kernel basis of a sparse system, one vector per free column."""
    red, pivots = _rref_sparse(rows)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for p, r in zip(pivots, red):
            x = r.get(free)
            if x:
                v[p] = -x
        basis.append(tuple(v))
    return basis


def kernel(m: Mat) -> list[Vec]:
    return nullspace_sparse(_to_sparse(m), m.cols)


@dataclass(frozen=True)
class AffineSolution:
    particular: Vec
    kernel: tuple[Vec, ...]


def solve_linear(system: Mat, rhs: Mat | Sequence) -> AffineSolution | None:
    """Solve ``system @ x = rhs``; ``None`` when the system is inconsistent."""
    if isinstance(rhs, Mat):
        if rhs.cols != 1:
            raise DimensionError("rhs must be a single column")
        b = rhs.col(0)
    else:
        b = vec(rhs)
    if len(b) != system.rows:
        raise DimensionError(f"rhs length {len(b)} != {system.rows} equations")
    n = system.cols
    aug = []
    for r, x in zip(system.entries, b):
        d = {j: y for j, y in enumerate(r) if y}
        if x:
            d[n] = x
        aug.append(d)
    red, pivots = _rref_sparse(aug)
    if n in pivots:
        return None
    part = [ZERO] * n
    for p, r in zip(pivots, red):
        part[p] = r.get(n, ZERO)
    return AffineSolution(tuple(part), tuple(kernel(system)))


def det(m: Mat) -> Fraction:
    if m.rows != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    a = [list(r) for r in m.entries]
    n = m.rows
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return d


def inverse(m: Mat) -> Mat:
    n = m.rows
    if n != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    aug = Mat([list(r) + list(e) for r, e in zip(m.entries, Mat.identity(n).entries)])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Mat((r[n:] for r in red.entries), cols=n)


# --- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held by its RREF basis rows."""

    ambient_dim: int
    basis: tuple[Vec, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> Mat:
        return Mat(self.basis, cols=self.ambient_dim)

    def reduce(self, v: Sequence) -> Vec:
        """Normal form of ``v`` modulo this subspace (zero at pivot columns)."""
        v = list(vec(v))
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        for p, r in zip(self.pivots, self.basis):
            f = v[p]
            if f:
                for j, x in enumerate(r):
                    if x:
                        v[j] -= f * x
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return is_zero(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vec:
        """Coordinates of ``v`` in the RREF basis; raises if ``v`` is outside."""
        v = vec(v)
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def __le__(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def __contains__(self, v) -> bool:
        return self.contains(v)


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient mismatch {a.ambient_dim} != {b.ambient_dim}")


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    rows = []
    for v in vectors:
        if len(v) != ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient {ambient_dim}")
        rows.append({j: q(x) for j, x in enumerate(v) if x})
    red, pivots = _rref_sparse(rows)
    basis = tuple(tuple(r.get(j, ZERO) for j in range(ambient_dim)) for r in red)
    return Subspace(ambient_dim, basis, tuple(pivots))


def zero_space(n: int) -> Subspace:
    return Subspace(n, (), ())


def full_space(n: int) -> Subspace:
    return span((unit_vec(n, i) for i in range(n)), n)


def coordinate_space(n: int, indices: Iterable[int]) -> Subspace:
    return span((unit_vec(n, i) for i in indices), n)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return span(a.basis + b.basis, a.ambient_dim)


def annihilator(a: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product."""
    rows = [{j: x for j, x in enumerate(r) if x} for r in a.basis]
    return span(nullspace_sparse(rows, a.ambient_dim), a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_space(a.ambient_dim)
    return annihilator(subspace_sum(annihilator(a), annihilator(b)))


def complement_in(a: Subspace, b: Subspace) -> Subspace:
    """Canonical complement of ``a`` inside ``b``, chosen greedily from b's RREF rows."""
    _check_ambient(a, b)
    if not a <= b:
        raise ValueError("complement_in requires a to be contained in b")
    chosen: list[Vec] = []
    current = a
    for r in b.basis:
        if current.dim == b.dim:
            break
        if not current.contains(r):
            chosen.append(r)
            current = subspace_sum(current, span([r], a.ambient_dim))
    return span(chosen, a.ambient_dim)


def image(m: Mat, a: Subspace) -> Subspace:
    if m.cols != a.ambient_dim:
        raise DimensionError("map/subspace mismatch")
    return span((m.apply(v) for v in a.basis), m.rows)

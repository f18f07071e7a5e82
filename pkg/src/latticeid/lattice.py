"""Exact 2x2 integer linear algebra and the quotient groups Z^2 / M Z^2.

Vectors are plain ``(x, y)`` tuples. A :class:`Mat2` is stored by its two
generator columns, which is also how matrices are written on the command
line: ``"28,4;-4,28"`` is the matrix with columns (28, 4) and (-4, 28).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Optional, Tuple

import numpy as np

Vec2 = Tuple[int, int]

INT64_MAX = 2**63 - 1


class SingularMatrixError(ValueError):
    """Raised when a singular matrix is used as a lattice basis."""


def _checked(*values: int) -> None:
    for v in values:
        if abs(v) > INT64_MAX:
            raise OverflowError(f"integer {v} does not fit in 64 bits")


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class Mat2:
    """2x2 integer matrix given by its columns."""

    col1: Vec2
    col2: Vec2

    def __post_init__(self):
        object.__setattr__(self, "col1", (int(self.col1[0]), int(self.col1[1])))
        object.__setattr__(self, "col2", (int(self.col2[0]), int(self.col2[1])))
        _checked(*self.col1, *self.col2)

    @classmethod
    def from_rows(cls, a: int, b: int, c: int, d: int) -> "Mat2":
        """Build ``[[a, b], [c, d]]`` (row-major)."""
        return cls((a, c), (b, d))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls((1, 0), (0, 1))

    @classmethod
    def diag(cls, a: int, b: int) -> "Mat2":
        return cls((a, 0), (0, b))

    @classmethod
    def parse(cls, text: str) -> "Mat2":
        """Parse the ``"g1x,g1y;g2x,g2y"`` column format."""
        try:
            cols = [part.split(",") for part in text.strip().split(";")]
            if len(cols) != 2 or any(len(c) != 2 for c in cols):
                raise ValueError
            (a, b), (c, d) = [[int(s) for s in col] for col in cols]
        except ValueError:
            raise ValueError(
                f"malformed matrix {text!r}; expected 'g1x,g1y;g2x,g2y'"
            ) from None
        return cls((a, b), (c, d))

    def to_text(self) -> str:
        return f"{self.col1[0]},{self.col1[1]};{self.col2[0]},{self.col2[1]}"

    @property
    def rows(self) -> Tuple[Vec2, Vec2]:
        return (self.col1[0], self.col2[0]), (self.col1[1], self.col2[1])

    def det(self) -> int:
        d = self.col1[0] * self.col2[1] - self.col2[0] * self.col1[1]
        _checked(d)
        return d

    def adj(self) -> "Mat2":
        """Adjugate, so that ``m @ m.adj() == det(m) * I``."""
        (a, b), (c, d) = self.rows
        return Mat2.from_rows(d, -b, -c, a)

    def apply(self, v: Vec2) -> Vec2:
        (a, b), (c, d) = self.rows
        x, y = v
        out = (a * x + b * y, c * x + d * y)
        _checked(*out)
        return out

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(self.apply(other.col1), self.apply(other.col2))
        return self.apply(other)

    def scale(self, k: int) -> "Mat2":
        return Mat2((k * self.col1[0], k * self.col1[1]), (k * self.col2[0], k * self.col2[1]))

    def __str__(self) -> str:
        (a, b), (c, d) = self.rows
        return f"[[{a}, {b}], [{c}, {d}]]"


def det(m: Mat2) -> int:
    return m.det()


def _require_nonsingular(m: Mat2) -> int:
    d = m.det()
    if d == 0:
        raise SingularMatrixError(f"matrix {m.to_text()} is singular")
    return d


def hnf(m: Mat2) -> Mat2:
    """Column-style Hermite normal form of the lattice spanned by ``m``.

    The result has columns ``(h11, h21)`` and ``(0, h22)`` with ``h11 > 0``,
    ``h22 > 0`` and ``0 <= h21 < h22``; it is unique for the lattice.
    """
    d = _require_nonsingular(m)
    (a, b), (c, e) = m.col1, m.col2
    g, s, t = xgcd(a, c)
    # unimodular column operation [[s, -c/g], [t, a/g]] zeroes the first row
    h21 = s * b + t * e
    h22 = abs(d) // g
    return Mat2((g, h21 % h22), (0, h22))


def congruent(v1: Vec2, v2: Vec2, M: Mat2) -> bool:
    """True iff ``v1 - v2`` lies in the lattice ``M Z^2``."""
    d = _require_nonsingular(M)
    x, y = M.adj().apply((v1[0] - v2[0], v1[1] - v2[1]))
    return x % d == 0 and y % d == 0


class QuotientGroup:
    """The finite Abelian group Z^2 / M Z^2 with canonical coset labels.

    Representatives are the points of the box ``[0, h11) x [0, h22)`` where
    ``h11, h22`` are the diagonal entries of the Hermite normal form; the
    dense index of ``(x, y)`` is ``x * h22 + y``.
    """

    def __init__(self, basis: Mat2):
        self.basis = basis
        self.hnf = hnf(basis)
        self.order = abs(basis.det())
        self._h11 = self.hnf.col1[0]
        self._h21 = self.hnf.col1[1]
        self._h22 = self.hnf.col2[1]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"QuotientGroup({self.basis.to_text()!r}, order={self.order})"

    def canonical(self, v: Vec2) -> Vec2:
        x, y = v
        k = x // self._h11
        return x - k * self._h11, (y - k * self._h21) % self._h22

    def index(self, v: Vec2) -> int:
        x, y = self.canonical(v)
        return x * self._h22 + y

    def element(self, i: int) -> Vec2:
        return divmod(i, self._h22)

    def elements(self) -> list:
        return [(x, y) for x in range(self._h11) for y in range(self._h22)]

    def __iter__(self) -> Iterator[Vec2]:
        return iter(self.elements())

    def index_array(self, xs, ys) -> np.ndarray:
        """Vectorized :meth:`index` over integer arrays."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        k = np.floor_divide(xs, self._h11)
        x = xs - k * self._h11
        y = np.mod(ys - k * self._h21, self._h22)
        return x * self._h22 + y

    def coords(self) -> Tuple[np.ndarray, np.ndarray]:
        """Arrays ``(xs, ys)`` of all representatives in index order."""
        idx = np.arange(self.order, dtype=np.int64)
        return idx // self._h22, idx % self._h22


def canonical_rep(v: Vec2, q: QuotientGroup) -> Vec2:
    return q.canonical(v)


def enumerate_group(M: Mat2) -> list:
    return QuotientGroup(M).elements()


def divides(C: Mat2, M: Mat2) -> Optional[Mat2]:
    """Return the integer ``Q`` with ``M == C @ Q``, or None if there is none."""
    d = _require_nonsingular(C)
    p = C.adj() @ M
    entries = (*p.col1, *p.col2)
    if any(e % d for e in entries):
        return None
    return Mat2((p.col1[0] // d, p.col1[1] // d), (p.col2[0] // d, p.col2[1] // d))


def smith_normal_form(A: Mat2) -> Tuple[Mat2, Mat2, Mat2]:
    """Return ``(U, S, V)`` with ``U @ A @ V == S`` diagonal, ``S[0] | S[1]``.

    ``U`` and ``V`` are unimodular. Diagonal entries are nonnegative.
    """
    a = [list(r) for r in A.rows]
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]

    def swap_rows():
        a[0], a[1] = a[1], a[0]
        u[0], u[1] = u[1], u[0]

    def swap_cols():
        for m in (a, v):
            for row in m:
                row[0], row[1] = row[1], row[0]

    def add_row(dst, src, k):
        for m in (a, u):
            m[dst] = [m[dst][j] + k * m[src][j] for j in range(2)]

    def add_col(dst, src, k):
        for m in (a, v):
            for row in m:
                row[dst] += k * row[src]

    while True:
        nonzero = [(abs(a[i][j]), i, j) for i in range(2) for j in range(2) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        if i:
            swap_rows()
        if j:
            swap_cols()
        p = a[0][0]
        add_row(1, 0, -(a[1][0] // p))
        add_col(1, 0, -(a[0][1] // p))
        if a[1][0] or a[0][1]:
            continue
        if a[1][1] % p:
            add_row(0, 1, 1)
            continue
        break

    for i in range(2):
        if a[i][i] < 0:
            for m in (a, u):
                m[i] = [-x for x in m[i]]
    to_mat = lambda m: Mat2.from_rows(m[0][0], m[0][1], m[1][0], m[1][1])  # noqa: E731
    return to_mat(u), to_mat(a), to_mat(v)


def kernel_lattice(B: Mat2, M: Mat2) -> Mat2:
    """HNF basis of ``{lam in Z^2 : B @ lam in M Z^2}``.

    With ``B``'s columns as the generators ``a1, a2`` this is the kernel of
    ``lam -> lam1*a1 + lam2*a2 (mod M)``, i.e. the matrix of the ``G(M')``
    isomorphic to the Cayley graph of Z^2 / M Z^2 with adjacency ``{±a1, ±a2}``
    (when the generators span the whole group).
    """
    _require_nonsingular(B)
    D = abs(_require_nonsingular(M))
    A = M.adj() @ B
    _, S, V = smith_normal_form(A)
    f1 = D // gcd(S.col1[0], D)
    f2 = D // gcd(S.col2[1], D)
    return hnf(V @ Mat2.diag(f1, f2))


def same_lattice(A: Mat2, B: Mat2) -> bool:
    return hnf(A) == hnf(B)

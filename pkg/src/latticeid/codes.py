"""The two-generator lattice codes C(t, d) = <(t, t+d), (-(t+d), t)>.

The identifying radius depends only on ``g = gcd(2t, d)``:

* ``g == 1``: ``r = t^2 + d t + (d^2 - 1) / 2``  (so ``N = 2r + 1``)
* ``g == 2``: ``r = t^2 + d t + d^2 / 2``        (so ``N = 2r``)
* ``g >= 3``: not identifying for any radius.

The nominal covering radius is ``t + d``; measured on the mesh it is exact
only for even ``N`` and one less for odd ``N`` (``tight_covering_radius``).
``d == 1`` codes are ``t``-perfect.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from .graph import shortest_cycle
from .lattice import Mat2, QuotientGroup, Vec2, divides


class InadmissibleError(ValueError):
    """A code cannot be placed on (or lacks the requested property for) a graph."""


@dataclass(frozen=True)
class LatticeCode:
    t: int
    d: int

    def __post_init__(self):
        if self.t < 1 or self.d < 1:
            raise ValueError(f"t and d must be positive integers, got t={self.t}, d={self.d}")

    @property
    def generator_matrix(self) -> Mat2:
        t, d = self.t, self.d
        return Mat2((t, t + d), (-(t + d), t))

    @property
    def order_N(self) -> int:
        return self.t**2 + (self.t + self.d) ** 2

    @property
    def gcd_case(self) -> int:
        return gcd(2 * self.t, self.d)

    @property
    def covering_radius(self) -> int:
        return self.t + self.d

    @property
    def tight_covering_radius(self) -> int:
        """Measured covering radius: ``t + d`` for even ``N``, ``t + d - 1`` for odd ``N``."""
        return self.t + self.d - (self.order_N % 2)

    @property
    def identifying_radius(self) -> Optional[int]:
        t, d = self.t, self.d
        g = self.gcd_case
        if g == 1:
            return t * t + d * t + (d * d - 1) // 2
        if g == 2:
            return t * t + d * t + d * d // 2
        return None

    @property
    def is_perfect_family(self) -> bool:
        return self.d == 1

    def is_codeword(self, v: Vec2) -> bool:
        """Membership in the infinite-mesh code: ``adj(C) v == 0 (mod N)``."""
        N = self.order_N
        x, y = self.generator_matrix.adj().apply(v)
        return x % N == 0 and y % N == 0

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "d": self.d,
            "N": self.order_N,
            "covering_radius": self.covering_radius,
            "tight_covering_radius": self.tight_covering_radius,
            "identifying_radius": self.identifying_radius,
            "gcd_case": self.gcd_case,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeCode":
        code = cls(int(data["t"]), int(data["d"]))
        if "N" in data and data["N"] != code.order_N:
            raise ValueError(f"descriptor N={data['N']} disagrees with t, d")
        return code


def construct(t: int, d: int) -> LatticeCode:
    return LatticeCode(t, d)


def covering_radius(code: LatticeCode) -> int:
    return code.covering_radius


def is_codeword_mesh(code: LatticeCode, v: Vec2) -> bool:
    return code.is_codeword(v)


def codewords_on(code: LatticeCode, M: Mat2) -> list:
    """Canonical labels of the codewords of ``code`` inside Z^2 / M Z^2."""
    C = code.generator_matrix
    Q = divides(C, M)
    if Q is None:
        raise InadmissibleError(f"{M.to_text()} is not a right multiple of C({code.t},{code.d})")
    target = QuotientGroup(M)
    # the code in the quotient is C Z^2 / M Z^2, indexed by Z^2 / Q Z^2
    words = {target.canonical(C.apply(lam)) for lam in QuotientGroup(Q).elements()}
    return sorted(words)


def density(code: LatticeCode) -> Fraction:
    return Fraction(1, code.order_N)


@dataclass(frozen=True)
class Admission:
    """Outcome of the periodicity + girth test.

    ``admitted`` is the published condition (cycle > 2r + 1). It is not
    sufficient on small tori; ``guaranteed`` uses cycle > 4r, which is.
    """

    q_exists: bool
    cycle_length: int
    threshold: int
    admitted: bool
    Q: Optional[Mat2] = None
    guaranteed: bool = False

    def to_dict(self) -> dict:
        return {
            "q_exists": self.q_exists,
            "Q": self.Q.to_text() if self.Q is not None else None,
            "cycle_length": self.cycle_length,
            "threshold": self.threshold,
            "admitted": self.admitted,
            "guaranteed": self.guaranteed,
        }


def admits_identifying_on(code: LatticeCode, M: Mat2) -> Admission:
    """Periodicity and girth test for ``code`` as an r-identifying code on ``G(M)``.

    ``M`` must be ``C Q`` for an integer ``Q`` and the shortest cycle of
    ``G(M)`` must exceed ``2r + 1``.

    If two vertices ``u, v`` had equal signatures on the torus, take lifts at
    minimal distance and a codeword ``c`` separating them in the mesh; its
    translate ``c + M g`` near the other lift forces ``||M g||_1 <= 4r``. So a
    shortest cycle above ``4r`` rules this out, which is what ``guaranteed``
    reports.
    """
    r = code.identifying_radius
    if r is None:
        raise InadmissibleError(
            f"C({code.t},{code.d}) has gcd(2t, d) = {code.gcd_case} >= 3 and no identifying radius"
        )
    Q = divides(code.generator_matrix, M)
    cycle = shortest_cycle(M)
    threshold = 2 * r + 1
    periodic = Q is not None
    return Admission(
        periodic, cycle, threshold, periodic and cycle > threshold, Q, periodic and cycle > 4 * r
    )


def smallest_guaranteed_multiple(code: LatticeCode) -> int:
    """Least ``k`` such that ``G(k C)`` meets the ``guaranteed`` condition."""
    r = code.identifying_radius
    if r is None:
        raise InadmissibleError(f"C({code.t},{code.d}) has no identifying radius")
    k = 1
    while shortest_cycle(code.generator_matrix.scale(k)) <= 4 * r:
        k += 1
    return k


def perfect_params(t: int) -> Tuple[int, int]:
    """``(perfect radius, identifying radius)`` of ``C(t, 1)``."""
    if t < 1:
        raise ValueError("t must be positive")
    return t, t * (t + 1)


def diagonal_residue(code: LatticeCode) -> int:
    """``gcd(2t, d)``; every codeword ``(x, y)`` has ``y - x`` divisible by it."""
    return code.gcd_case

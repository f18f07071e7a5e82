"""Degree-4 Cayley graphs ``G(M; A)`` on Z^2 / M Z^2.

Distances are taken from a BFS table rooted at the zero coset; by
vertex-transitivity ``d(u, v) = d(0, v - u)``. For the standard generators
the closed form ``min ||v + M g||_1`` is available as an independent route.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .lattice import Mat2, QuotientGroup, Vec2, _require_nonsingular

E1: Vec2 = (0, 1)
E2: Vec2 = (1, 0)
STANDARD_ADJACENCY: Tuple[Vec2, Vec2] = (E1, E2)


class DegenerateAdjacencyError(ValueError):
    """The generators do not give a simple 4-regular graph."""


def l1(v: Vec2) -> int:
    return abs(v[0]) + abs(v[1])


def _gamma_window(M: Mat2, bound: int) -> int:
    """Largest ``|g_i|`` for which ``||M g||_1 <= bound`` is possible.

    From ``g = adj(M) w / det(M)``: ``|g_i| <= ||w||_1 * max|adj| / |det|``.
    """
    D = abs(_require_nonsingular(M))
    biggest = max(abs(e) for e in (*M.col1, *M.col2))
    return (bound * biggest) // D


def lattice_distance(M: Mat2, v: Vec2) -> int:
    """Closed-form distance ``min_g ||v + M g||_1`` from 0 to ``v`` in ``G(M)``."""
    D = M.det()
    if D == 0:
        raise ValueError("singular matrix")
    # start from the rounded real solution of v + M g = 0
    ax, ay = M.adj().apply(v)
    g0 = (-round(ax / D), -round(ay / D))
    w0 = (v[0] + M.col1[0] * g0[0] + M.col2[0] * g0[1], v[1] + M.col1[1] * g0[0] + M.col2[1] * g0[1])
    best = l1(w0)
    K = _gamma_window(M, 2 * best)
    for i in range(-K, K + 1):
        for j in range(-K, K + 1):
            n = abs(w0[0] + M.col1[0] * i + M.col2[0] * j) + abs(w0[1] + M.col1[1] * i + M.col2[1] * j)
            if n < best:
                best = n
    return best


def shortest_cycle_window(M: Mat2) -> int:
    """Search half-width for :func:`shortest_cycle`.

    Any lattice vector no longer than the shorter column has coefficients
    bounded by this value, so the window provably contains the minimum.
    """
    return _gamma_window(M, min(l1(M.col1), l1(M.col2)))


def shortest_cycle(M: Mat2) -> int:
    """Minimum l1 norm of a nonzero vector of ``M Z^2``.

    This is the length of the shortest non-contractible cycle of ``G(M)``.
    """
    K = shortest_cycle_window(M)
    best = min(l1(M.col1), l1(M.col2))
    for i in range(-K, K + 1):
        for j in range(-K, K + 1):
            if i == 0 and j == 0:
                continue
            n = abs(M.col1[0] * i + M.col2[0] * j) + abs(M.col1[1] * i + M.col2[1] * j)
            if n < best:
                best = n
    return best


def mesh_ball_size(r: int) -> int:
    return 2 * r * r + 2 * r + 1


class CayleyGraph:
    """Cayley graph on Z^2 / M Z^2 where ``u ~ u ± a`` for ``a`` in the adjacency."""

    def __init__(self, M: Mat2, adjacency: Optional[Sequence[Vec2]] = None):
        self.M = M
        self.group = QuotientGroup(M)
        self.adjacency: Tuple[Vec2, Vec2] = tuple(
            tuple(a) for a in (adjacency if adjacency is not None else STANDARD_ADJACENCY)
        )
        if len(self.adjacency) != 2:
            raise DegenerateAdjacencyError("exactly two generators are required")
        steps = []
        for a in self.adjacency:
            steps += [a, (-a[0], -a[1])]
        self.steps: Tuple[Vec2, ...] = tuple(steps)
        labels = [self.group.canonical(s) for s in steps]
        if (0, 0) in labels or len(set(labels)) != 4:
            raise DegenerateAdjacencyError(
                f"generators {self.adjacency} modulo {M.to_text()} give neighbour "
                f"labels {labels}; need four distinct nonzero vertices"
            )
        self._dist0: Optional[np.ndarray] = None
        self._nbr: Optional[np.ndarray] = None

    @property
    def standard(self) -> bool:
        """True when the neighbourhoods coincide with those of ``e1, e2``."""
        unit = ((0, 1), (0, -1), (1, 0), (-1, 0))
        return {self.canonical(s) for s in self.steps} == {self.canonical(s) for s in unit}

    @property
    def order(self) -> int:
        return self.group.order

    def __len__(self) -> int:
        return self.group.order

    def __repr__(self) -> str:
        return f"CayleyGraph({self.M.to_text()!r}, adjacency={self.adjacency})"

    def vertices(self) -> list:
        return self.group.elements()

    def canonical(self, v: Vec2) -> Vec2:
        return self.group.canonical(v)

    def index(self, v: Vec2) -> int:
        return self.group.index(v)

    def neighbors(self, v: Vec2) -> list:
        x, y = v
        return [self.group.canonical((x + s[0], y + s[1])) for s in self.steps]

    def neighbor_table(self) -> np.ndarray:
        """``(order, 4)`` array of neighbour indices."""
        if self._nbr is None:
            xs, ys = self.group.coords()
            self._nbr = np.stack(
                [self.group.index_array(xs + s[0], ys + s[1]) for s in self.steps], axis=1
            )
        return self._nbr

    def distances_from_zero(self) -> np.ndarray:
        """BFS distances from the zero coset, indexed by vertex index."""
        if self._dist0 is None:
            nbr = self.neighbor_table().tolist()
            dist = [-1] * self.order
            dist[0] = 0
            queue = deque([0])
            while queue:
                u = queue.popleft()
                du = dist[u] + 1
                for w in nbr[u]:
                    if dist[w] < 0:
                        dist[w] = du
                        queue.append(w)
            if min(dist) < 0:
                raise DegenerateAdjacencyError("generators do not span the group; graph is disconnected")
            self._dist0 = np.asarray(dist, dtype=np.int64)
        return self._dist0

    def distance(self, v1: Vec2, v2: Vec2) -> int:
        return int(self.distances_from_zero()[self.index((v2[0] - v1[0], v2[1] - v1[1]))])

    def closed_form_distance(self, v1: Vec2, v2: Vec2) -> int:
        if not self.standard:
            raise ValueError("closed-form distance only holds for the generators e1, e2")
        return lattice_distance(self.M, (v1[0] - v2[0], v1[1] - v2[1]))

    def distance_matrix(self, rows: Sequence[Vec2], cols: Sequence[Vec2]) -> np.ndarray:
        """``D[i, j] = d(rows[i], cols[j])`` via the zero-rooted table."""
        dist0 = self.distances_from_zero()
        rx = np.asarray([v[0] for v in rows], dtype=np.int64)[:, None]
        ry = np.asarray([v[1] for v in rows], dtype=np.int64)[:, None]
        cx = np.asarray([v[0] for v in cols], dtype=np.int64)[None, :]
        cy = np.asarray([v[1] for v in cols], dtype=np.int64)[None, :]
        return dist0[self.group.index_array(cx - rx, cy - ry)].reshape(len(rows), len(cols))

    def diameter(self) -> int:
        return int(self.distances_from_zero().max())

    def ball(self, v: Vec2, r: int) -> set:
        """All vertices within distance ``r`` of ``v`` (canonical labels)."""
        dist0 = self.distances_from_zero()
        q = self.group
        return {q.canonical((v[0] + w[0], v[1] + w[1])) for i, w in enumerate(q.elements()) if dist0[i] <= r}

    def mesh_ball(self, v: Vec2, r: int) -> set:
        """Image of the mesh ball ``{v + a*s1 + b*s2 : |a|+|b| <= r}``."""
        (a1, a2) = self.adjacency
        out = set()
        for a in range(-r, r + 1):
            rest = r - abs(a)
            for b in range(-rest, rest + 1):
                out.add(self.canonical((v[0] + a * a1[0] + b * a2[0], v[1] + a * a1[1] + b * a2[1])))
        return out

    def minimal_rep(self, v: Vec2) -> Vec2:
        """Member of the coset of ``v`` closest to the origin (ties: lexicographic)."""
        M = self.M
        target = lattice_distance(M, v) if self.standard else None
        c = self.canonical(v)
        if target is None:
            return c
        K = _gamma_window(M, 2 * (l1(c) + 1))
        best = None
        for i in range(-K, K + 1):
            for j in range(-K, K + 1):
                w = (c[0] + M.col1[0] * i + M.col2[0] * j, c[1] + M.col1[1] * i + M.col2[1] * j)
                if l1(w) == target and (best is None or w < best):
                    best = w
        return best

    def distance_histogram(self) -> Dict[int, int]:
        values, counts = np.unique(self.distances_from_zero(), return_counts=True)
        return {int(k): int(c) for k, c in zip(values, counts)}

    def histogram_json(self) -> str:
        return json.dumps(
            {
                "matrix": self.M.to_text(),
                "adjacency": [list(a) for a in self.adjacency],
                "order": self.order,
                "diameter": self.diameter(),
                "histogram": {str(k): c for k, c in self.distance_histogram().items()},
            },
            sort_keys=True,
        )

    def to_dot(self, codewords: Optional[Iterable[Vec2]] = None, name: str = "G") -> str:
        """Undirected DOT graph; codewords (if given) are filled."""
        marked = {self.canonical(c) for c in codewords} if codewords is not None else set()
        lines = [f"graph {name} {{", "  node [shape=circle, fontsize=8];"]
        for v in self.vertices():
            style = ', style=filled, fillcolor="black", fontcolor="white"' if v in marked else ""
            lines.append(f'  "{v[0]},{v[1]}" [pos="{v[0]},{v[1]}!"{style}];')
        for i, v in enumerate(self.vertices()):
            for w in self.neighbors(v)[::2]:
                lines.append(f'  "{v[0]},{v[1]}" -- "{w[0]},{w[1]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PeripheralSets:
    """The eight sets splitting the boundary of an r-ball in the infinite mesh."""

    center: Vec2
    radius: int
    UR_minus: frozenset
    UL_minus: frozenset
    BR_minus: frozenset
    BL_minus: frozenset
    UR_plus: frozenset
    UL_plus: frozenset
    BR_plus: frozenset
    BL_plus: frozenset

    def fixing_unions(self) -> Tuple[frozenset, frozenset, frozenset, frozenset]:
        return (
            self.UR_minus | self.BL_plus,
            self.UL_minus | self.BR_plus,
            self.BR_minus | self.UL_plus,
            self.BL_minus | self.UR_plus,
        )

    @property
    def minus_sets(self) -> Tuple[frozenset, ...]:
        return self.UR_minus, self.UL_minus, self.BR_minus, self.BL_minus

    @property
    def plus_sets(self) -> Tuple[frozenset, ...]:
        return self.UR_plus, self.UL_plus, self.BR_plus, self.BL_plus


def _sphere(n: int) -> list:
    pts = []
    for x in range(-n, n + 1):
        rest = n - abs(x)
        pts.append((x, rest))
        if rest:
            pts.append((x, -rest))
    return pts


def peripheral_sets(v: Vec2, r: int) -> PeripheralSets:
    if r < 1:
        raise ValueError("radius must be positive")
    inner = _sphere(r)
    outer = _sphere(r + 1)

    def pick(points, pred):
        return frozenset((v[0] + x, v[1] + y) for x, y in points if pred(x, y))

    return PeripheralSets(
        center=tuple(v),
        radius=r,
        UR_minus=pick(inner, lambda x, y: x >= 0 and y >= 0),
        UL_minus=pick(inner, lambda x, y: x <= 0 <= y),
        BR_minus=pick(inner, lambda x, y: y <= 0 <= x),
        BL_minus=pick(inner, lambda x, y: x <= 0 and y <= 0),
        UR_plus=pick(outer, lambda x, y: x > 0 and y > 0),
        UL_plus=pick(outer, lambda x, y: x < 0 < y),
        BR_plus=pick(outer, lambda x, y: y < 0 < x),
        BL_plus=pick(outer, lambda x, y: x < 0 and y < 0),
    )


def is_ball_fixed(code_membership: Callable[[Vec2], bool], v: Vec2, r: int) -> bool:
    """True iff every one of the four fixing unions around ``v`` holds a codeword."""
    sets = peripheral_sets(v, r)
    return all(any(code_membership(p) for p in s) for s in sets.fixing_unions())

"""Brute-force oracles for identifying, perfect and covering properties.

Everything here works from graph distances only (BFS table), never from the
closed-form radii in :mod:`latticeid.codes`, so the two can be compared.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .codes import LatticeCode
from .graph import CayleyGraph, is_ball_fixed, peripheral_sets
from .lattice import Vec2

LOCAL_OFFSETS: Tuple[Vec2, ...] = ((0, 1), (1, 0), (-1, 1), (1, 1))


@dataclass(frozen=True)
class Signature:
    """``K_r(center)``: the codewords within distance ``radius``."""

    center: Vec2
    radius: int
    codewords: Tuple[Vec2, ...]


@dataclass
class Verdict:
    holds: bool
    witness: Optional[tuple] = None
    checked_count: int = 0
    claim: str = ""
    parameters: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "parameters": self.parameters,
            "holds": self.holds,
            "witness": _witness_to_json(self.witness),
            "checked_count": self.checked_count,
            "elapsed_ms": self.elapsed_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        return cls(
            holds=bool(data["holds"]),
            witness=_witness_from_json(data.get("witness")),
            checked_count=int(data.get("checked_count", 0)),
            claim=data.get("claim", ""),
            parameters=dict(data.get("parameters", {})),
            elapsed_ms=float(data.get("elapsed_ms", 0.0)),
        )


def _witness_to_json(w):
    if w is None:
        return None
    if isinstance(w[0], tuple):
        return [list(p) for p in w]
    return list(w)


def _witness_from_json(w):
    if w is None:
        return None
    if isinstance(w[0], list):
        return tuple(tuple(p) for p in w)
    return tuple(w)


def _canonical_codewords(g: CayleyGraph, codewords: Iterable[Vec2]) -> list:
    return sorted({g.canonical(c) for c in codewords})


def _cover_matrix(g: CayleyGraph, words: Sequence[Vec2], r: int, workers: int = 1) -> np.ndarray:
    """Boolean ``(order, len(words))``: vertex i is within ``r`` of word j."""
    verts = g.vertices()
    if not words:
        return np.zeros((len(verts), 0), dtype=bool)
    if workers <= 1 or len(verts) < 2 * workers:
        return g.distance_matrix(verts, words) <= r
    chunks = np.array_split(np.arange(len(verts)), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda ix: g.distance_matrix([verts[i] for i in ix], words) <= r, chunks))
    return np.concatenate(parts, axis=0)


def signature(g: CayleyGraph, codewords: Iterable[Vec2], v: Vec2, r: int) -> Signature:
    words = _canonical_codewords(g, codewords)
    v = g.canonical(v)
    inside = tuple(c for c in words if g.distance(v, c) <= r)
    return Signature(v, r, inside)


def _ball_signature(g: CayleyGraph, words: set, v: Vec2, r: int) -> frozenset:
    # separate route for witness re-checks: explicit ball, not the distance matrix
    return frozenset(g.ball(v, r) & words)


def _timed(verdict: Verdict, start: float) -> Verdict:
    verdict.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    return verdict


def is_identifying(g: CayleyGraph, codewords: Iterable[Vec2], r: int, workers: int = 1) -> Verdict:
    """All signatures nonempty and pairwise distinct.

    On failure the witness is an uncovered vertex ``(x, y)`` or a pair of
    vertices with equal signatures.
    """
    start = time.perf_counter()
    words = _canonical_codewords(g, codewords)
    params = {"matrix": g.M.to_text(), "radius": r, "codewords": len(words)}
    verts = g.vertices()
    cover = _cover_matrix(g, words, r, workers)
    packed = np.packbits(cover, axis=1)
    wordset = set(words)

    empty = np.flatnonzero(~cover.any(axis=1))
    if empty.size:
        v = verts[int(empty[0])]
        if _ball_signature(g, wordset, v, r):
            raise RuntimeError(f"witness re-check failed: {v} is covered")
        return _timed(Verdict(False, v, int(empty[0]) + 1, "identifying", params), start)

    seen = {}
    for i, row in enumerate(packed):
        key = row.tobytes()
        j = seen.setdefault(key, i)
        if j != i:
            pair = (verts[j], verts[i])
            if _ball_signature(g, wordset, pair[0], r) != _ball_signature(g, wordset, pair[1], r):
                raise RuntimeError(f"witness re-check failed: {pair} are separated")
            return _timed(Verdict(False, pair, i + 1, "identifying", params), start)
    return _timed(Verdict(True, None, len(verts), "identifying", params), start)


def is_perfect(g: CayleyGraph, codewords: Iterable[Vec2], rho: int) -> Verdict:
    """Every vertex has exactly one codeword within ``rho``."""
    start = time.perf_counter()
    words = _canonical_codewords(g, codewords)
    params = {"matrix": g.M.to_text(), "radius": rho, "codewords": len(words)}
    counts = _cover_matrix(g, words, rho).sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        v = g.vertices()[int(bad[0])]
        return _timed(Verdict(False, v, int(bad[0]) + 1, "perfect", params), start)
    return _timed(Verdict(True, None, len(counts), "perfect", params), start)


def covering_radius_bruteforce(g: CayleyGraph, codewords: Iterable[Vec2]) -> int:
    words = _canonical_codewords(g, codewords)
    if not words:
        raise ValueError("covering radius of an empty code is undefined")
    return int(g.distance_matrix(g.vertices(), words).min(axis=1).max())


def check_covering_radius(g: CayleyGraph, codewords: Iterable[Vec2], expected: int) -> Verdict:
    """Brute-force covering radius equals ``expected``; witness is a farthest vertex."""
    start = time.perf_counter()
    words = _canonical_codewords(g, codewords)
    nearest = g.distance_matrix(g.vertices(), words).min(axis=1)
    far = int(nearest.argmax())
    actual = int(nearest[far])
    params = {"matrix": g.M.to_text(), "radius": expected, "measured": actual, "codewords": len(words)}
    holds = actual == expected
    witness = None if holds else g.vertices()[far]
    return _timed(Verdict(holds, witness, len(nearest), "covering-radius", params), start)


def min_identifying_radius(
    g: CayleyGraph, codewords: Iterable[Vec2], r_max: Optional[int] = None
) -> Optional[int]:
    words = _canonical_codewords(g, codewords)
    if r_max is None:
        r_max = g.diameter()
    for r in range(r_max + 1):
        if is_identifying(g, words, r).holds:
            return r
    return None


def find_unseparated_pair(
    g: CayleyGraph, codewords: Iterable[Vec2], r: int
) -> Optional[Tuple[Vec2, Vec2]]:
    """A pair of distinct vertices with equal signatures, or None.

    Pairs ``(w, w + s)`` with ``s`` a unit or diagonal step are tried first,
    then every pair.
    """
    words = _canonical_codewords(g, codewords)
    verts = g.vertices()
    packed = np.packbits(_cover_matrix(g, words, r), axis=1)
    q = g.group
    xs, ys = q.coords()
    own = np.arange(len(verts))
    for dx, dy in LOCAL_OFFSETS:
        other = q.index_array(xs + dx, ys + dy)
        same = np.flatnonzero((packed == packed[other]).all(axis=1) & (other != own))
        if same.size:
            i = int(same[0])
            return verts[i], verts[int(other[i])]
    seen = {}
    for i, row in enumerate(packed):
        j = seen.setdefault(row.tobytes(), i)
        if j != i:
            return verts[j], verts[i]
    return None


def check_fixed_everywhere(code: LatticeCode, r: int, window: int) -> Verdict:
    """Every ball ``B_r(v)``, ``v`` in ``[-window, window]^2``, is r-fixed in the mesh."""
    start = time.perf_counter()
    params = {"t": code.t, "d": code.d, "radius": r, "window": window}
    count = 0
    for v in product(range(-window, window + 1), repeat=2):
        count += 1
        if not is_ball_fixed(code.is_codeword, v, r):
            return _timed(Verdict(False, v, count, "r-fixed", params), start)
    return _timed(Verdict(True, None, count, "r-fixed", params), start)


def check_strong_fixed(code: LatticeCode, r: int, window: int) -> Verdict:
    """Each ball has codewords in all four minus-sets or in all four plus-sets."""
    start = time.perf_counter()
    params = {"t": code.t, "d": code.d, "radius": r, "window": window}
    count = 0
    for v in product(range(-window, window + 1), repeat=2):
        count += 1
        sets = peripheral_sets(v, r)
        hit = lambda group: all(any(code.is_codeword(p) for p in s) for s in group)  # noqa: E731
        if not (hit(sets.minus_sets) or hit(sets.plus_sets)):
            return _timed(Verdict(False, v, count, "strong-fixed", params), start)
    return _timed(Verdict(True, None, count, "strong-fixed", params), start)

"""Two-stage adaptive fault identification with a perfect + identifying code.

Stage 1 asks every codeword ``c`` "is the fault in B_t(c)?"; with a t-perfect
code at most one answer is positive. Stage 2 runs a binary decision tree of
"is the fault in B_r(c)?" questions over the ``2t^2 + 2t + 1`` candidates of
the detected ball, using the same code at its identifying radius ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .codes import InadmissibleError, LatticeCode, admits_identifying_on, codewords_on
from .graph import CayleyGraph
from .lattice import Vec2

Oracle = Callable[[Vec2, int], bool]

EXACT_LIMIT = 32


class ProtocolError(RuntimeError):
    """Answers inconsistent with a single fault."""


class InseparableError(ValueError):
    def __init__(self, pair: Tuple[Vec2, Vec2], radius: int):
        super().__init__(f"candidates {pair[0]} and {pair[1]} cannot be separated at radius {radius}")
        self.pair = pair


@dataclass
class Query:
    center: Vec2
    radius: int
    answer: Optional[bool] = None

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius, "answer": self.answer}

    @classmethod
    def from_dict(cls, data: dict) -> "Query":
        return cls(tuple(data["center"]), int(data["radius"]), data.get("answer"))


@dataclass(frozen=True)
class Leaf:
    identified: Vec2


@dataclass(frozen=True)
class Node:
    center: Vec2
    radius: int
    covers: frozenset  # candidates of this subtree inside B_radius(center)
    yes: "DecisionTree"
    no: "DecisionTree"


DecisionTree = Union[Node, Leaf]


def truthful_oracle(g: CayleyGraph, fault: Optional[Vec2]) -> Oracle:
    if fault is None:
        return lambda center, radius: False
    fault = g.canonical(fault)
    return lambda center, radius: g.distance(center, fault) <= radius


def stage1_sweep(
    g: CayleyGraph,
    codewords: Sequence[Vec2],
    t: int,
    oracle: Oracle,
    log: Optional[List[Query]] = None,
) -> Optional[Vec2]:
    """Query ``B_t(c)`` for every codeword; return the one answering yes."""
    hits = []
    for c in codewords:
        answer = bool(oracle(c, t))
        if log is not None:
            log.append(Query(c, t, answer))
        if answer:
            hits.append(c)
    if len(hits) > 1:
        raise ProtocolError(f"fault reported in {len(hits)} radius-{t} balls: {hits}; code is not perfect")
    return hits[0] if hits else None


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def _query_masks(
    g: CayleyGraph, cands: Sequence[Vec2], codewords: Iterable[Vec2], r: int
) -> List[Tuple[Vec2, int]]:
    """Informative queries as ``(center, bitmask over cands)``, deduplicated."""
    words = sorted({g.canonical(c) for c in codewords})
    full = (1 << len(cands)) - 1
    inside = g.distance_matrix(cands, words) <= r if words else None
    out, seen = [], set()
    for j, c in enumerate(words):
        mask = sum(1 << i for i in range(len(cands)) if inside[i, j])
        if mask in (0, full) or mask in seen or (full ^ mask) in seen:
            continue
        seen.add(mask)
        out.append((c, mask))
    return out


def _unsplit_pair(S: int, cands, masks) -> Tuple[Vec2, Vec2]:
    members = [i for i in range(len(cands)) if S >> i & 1]
    for a in members:
        for b in members:
            if a < b and all((m >> a & 1) == (m >> b & 1) for _, m in masks):
                return cands[a], cands[b]
    return cands[members[0]], cands[members[1]]


def build_tree(
    g: CayleyGraph,
    candidates: Iterable[Vec2],
    codewords: Iterable[Vec2],
    r: int,
    exact: bool = False,
) -> DecisionTree:
    """Decision tree over ``candidates`` using codeword ball queries of radius ``r``.

    The greedy tree picks the query whose larger branch is smallest (ties by
    codeword order). ``exact=True`` finds a minimum-depth tree by memoized
    search; it is limited to ``EXACT_LIMIT`` candidates.
    """
    cands = sorted({g.canonical(v) for v in candidates})
    if not cands:
        raise ValueError("empty candidate set")
    if exact and len(cands) > EXACT_LIMIT:
        raise ValueError(f"exact search supports at most {EXACT_LIMIT} candidates, got {len(cands)}")
    masks = _query_masks(g, cands, codewords, r)

    def split_choice_greedy(S: int) -> int:
        best, choice = None, None
        for k, (_, m) in enumerate(masks):
            a = S & m
            if a == 0 or a == S:
                continue
            worst = max(_popcount(a), _popcount(S ^ a))
            if best is None or worst < best:
                best, choice = worst, k
        if choice is None:
            raise InseparableError(_unsplit_pair(S, cands, masks), r)
        return choice

    memo: Dict[int, Tuple[int, int]] = {}

    def solve(S: int) -> int:
        if S & (S - 1) == 0:
            return 0
        if S in memo:
            return memo[S][0]
        n = _popcount(S)
        floor = _ceil_log2(n)
        options = []
        for k, (_, m) in enumerate(masks):
            a = S & m
            if a and a != S:
                options.append((max(_popcount(a), n - _popcount(a)), k, a))
        if not options:
            raise InseparableError(_unsplit_pair(S, cands, masks), r)
        options.sort()
        best, choice = None, None
        for worst, k, a in options:
            if best is not None and 1 + _ceil_log2(worst) >= best:
                continue
            da = solve(a)
            if best is not None and 1 + da >= best:
                continue
            d = 1 + max(da, solve(S ^ a))
            if best is None or d < best:
                best, choice = d, k
                if best == floor:
                    break
        memo[S] = (best, choice)
        return best

    def assemble(S: int) -> DecisionTree:
        if S & (S - 1) == 0:
            return Leaf(cands[S.bit_length() - 1])
        if exact:
            solve(S)
            k = memo[S][1]
        else:
            k = split_choice_greedy(S)
        center, m = masks[k]
        a = S & m
        covers = frozenset(cands[i] for i in range(len(cands)) if a >> i & 1)
        return Node(center, r, covers, assemble(a), assemble(S ^ a))

    return assemble((1 << len(cands)) - 1)


def tree_depth(tree: DecisionTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.yes), tree_depth(tree.no))


def tree_leaves(tree: DecisionTree) -> List[Vec2]:
    if isinstance(tree, Leaf):
        return [tree.identified]
    return tree_leaves(tree.yes) + tree_leaves(tree.no)


def identify(
    tree: DecisionTree, oracle: Oracle, log: Optional[List[Query]] = None
) -> Tuple[Vec2, int]:
    """Walk the tree with the oracle's answers; return ``(vertex, queries)``."""
    path = []
    node = tree
    while isinstance(node, Node):
        answer = bool(oracle(node.center, node.radius))
        path.append((node, answer))
        if log is not None:
            log.append(Query(node.center, node.radius, answer))
        node = node.yes if answer else node.no
    v = node.identified
    for n, answer in path:
        if (v in n.covers) != answer:
            raise ProtocolError(f"leaf {v} contradicts answer {answer} for B_{n.radius}({n.center})")
    return v, len(path)


def translate_tree(tree: DecisionTree, g: CayleyGraph, shift: Vec2) -> DecisionTree:
    """The tree for the translated candidate set (valid for subgroup codes)."""
    move = lambda v: g.canonical((v[0] + shift[0], v[1] + shift[1]))  # noqa: E731
    if isinstance(tree, Leaf):
        return Leaf(move(tree.identified))
    return Node(
        move(tree.center),
        tree.radius,
        frozenset(move(v) for v in tree.covers),
        translate_tree(tree.yes, g, shift),
        translate_tree(tree.no, g, shift),
    )


def tree_to_dict(tree: DecisionTree) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": list(tree.identified)}
    return {
        "query": {"center": list(tree.center), "radius": tree.radius},
        "covers": sorted(list(v) for v in tree.covers),
        "yes": tree_to_dict(tree.yes),
        "no": tree_to_dict(tree.no),
    }


def tree_from_dict(data: dict) -> DecisionTree:
    if "leaf" in data:
        return Leaf(tuple(data["leaf"]))
    q = data["query"]
    return Node(
        tuple(q["center"]),
        int(q["radius"]),
        frozenset(tuple(v) for v in data["covers"]),
        tree_from_dict(data["yes"]),
        tree_from_dict(data["no"]),
    )


def tree_to_dot(tree: DecisionTree, label: Optional[Callable[[Vec2], Vec2]] = None) -> str:
    """DOT digraph with ``B_r(c)`` query nodes and yes/no edges."""
    label = label or (lambda v: v)
    lines = ["digraph tree {", "  node [fontsize=10];"]
    counter = [0]

    def walk(node) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        if isinstance(node, Leaf):
            x, y = label(node.identified)
            lines.append(f'  {name} [shape=box, label="{x},{y}"];')
            return name
        x, y = label(node.center)
        lines.append(f'  {name} [shape=ellipse, label="B_{node.radius}({x},{y})"];')
        yes = walk(node.yes)
        no = walk(node.no)
        lines.append(f'  {name} -> {yes} [label="yes"];')
        lines.append(f'  {name} -> {no} [label="no"];')
        return name

    walk(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class SimulationReport:
    fault: Optional[Vec2]
    stage1_queries: int
    stage2_queries: int
    detected_codeword: Optional[Vec2]
    identified: Optional[Vec2]
    query_log: List[Query] = field(default_factory=list)
    baseline_queries: int = 0
    t: int = 0
    r: int = 0
    matrix: str = ""

    def to_dict(self) -> dict:
        opt = lambda v: list(v) if v is not None else None  # noqa: E731
        return {
            "matrix": self.matrix,
            "t": self.t,
            "r": self.r,
            "fault": opt(self.fault),
            "stage1_queries": self.stage1_queries,
            "stage2_queries": self.stage2_queries,
            "detected_codeword": opt(self.detected_codeword),
            "identified": opt(self.identified),
            "baseline_queries": self.baseline_queries,
            "query_log": [q.to_dict() for q in self.query_log],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationReport":
        opt = lambda v: tuple(v) if v is not None else None  # noqa: E731
        return cls(
            fault=opt(data["fault"]),
            stage1_queries=int(data["stage1_queries"]),
            stage2_queries=int(data["stage2_queries"]),
            detected_codeword=opt(data["detected_codeword"]),
            identified=opt(data["identified"]),
            query_log=[Query.from_dict(q) for q in data.get("query_log", [])],
            baseline_queries=int(data.get("baseline_queries", 0)),
            t=int(data.get("t", 0)),
            r=int(data.get("r", 0)),
            matrix=data.get("matrix", ""),
        )


class Protocol:
    """A graph and a perfect + identifying code, with decision trees cached per codeword."""

    def __init__(self, g: CayleyGraph, code: LatticeCode, exact: bool = True):
        if not code.is_perfect_family:
            raise InadmissibleError(f"C({code.t},{code.d}) is not a perfect code (needs d = 1)")
        if not g.standard:
            raise InadmissibleError("the protocol needs the standard generators e1, e2")
        admission = admits_identifying_on(code, g.M)
        if not admission.admitted:
            raise InadmissibleError(
                f"C({code.t},{code.d}) is not admissible on {g.M.to_text()}: {admission.to_dict()}"
            )
        self.g = g
        self.code = code
        self.exact = exact
        self.t = code.t
        self.r = code.identifying_radius
        self.codewords = codewords_on(code, g.M)
        self._trees: Dict[Vec2, DecisionTree] = {}

    def tree_for(self, c: Vec2) -> DecisionTree:
        c = self.g.canonical(c)
        if c not in self._trees:
            cands = self.g.ball(c, self.t)
            self._trees[c] = build_tree(self.g, cands, self.codewords, self.r, exact=self.exact)
        return self._trees[c]

    def run(self, fault: Optional[Vec2] = None, oracle: Optional[Oracle] = None) -> SimulationReport:
        g = self.g
        if fault is not None:
            fault = g.canonical(fault)
        oracle = oracle or truthful_oracle(g, fault)
        log: List[Query] = []
        detected = stage1_sweep(g, self.codewords, self.t, oracle, log)
        stage1 = len(log)
        identified, stage2 = None, 0
        if detected is not None:
            identified, stage2 = identify(self.tree_for(detected), oracle, log)
        return SimulationReport(
            fault=fault,
            stage1_queries=stage1,
            stage2_queries=stage2,
            detected_codeword=detected,
            identified=identified,
            query_log=log,
            baseline_queries=len(self.codewords),
            t=self.t,
            r=self.r,
            matrix=g.M.to_text(),
        )


def simulate(
    g: CayleyGraph,
    code: LatticeCode,
    fault: Optional[Vec2] = None,
    exact: bool = True,
) -> SimulationReport:
    return Protocol(g, code, exact=exact).run(fault)

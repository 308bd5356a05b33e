"""
Pivot tournaments and feedback arc sets

A feedback arc set is represented implicitly by a vertex ordering: its back
arcs (arcs pointing right to left) form the set, and the ordering itself is a
topological order of what remains.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..errors import InvalidPartition, TooLarge
from ..utils.validators import validate_point
from .instance import Instance

logger = logging.getLogger(__name__)

FAS_EXACT_CAP = 16


class FasMethod(str, Enum):
    INDEGREE = "indegree"
    INDEGREE_LOCAL = "indegree_local"
    EXACT = "exact"


class Tournament:
    """
    Complete digraph on m labelled vertices.

    ``adjacency[a, b]`` is True iff the arc labels[a] -> labels[b] is present;
    for a != b exactly one of adjacency[a, b], adjacency[b, a] holds.
    """

    def __init__(self, labels: Sequence[int], adjacency: np.ndarray):
        adjacency = np.asarray(adjacency, dtype=bool)
        m = len(labels)
        if adjacency.shape != (m, m):
            raise ValueError(f"Adjacency must be {m}x{m}, got {adjacency.shape}")
        off_diagonal = ~np.eye(m, dtype=bool)
        if np.any(np.diag(adjacency)) or not np.all((adjacency ^ adjacency.T)[off_diagonal]):
            raise ValueError("Adjacency does not describe a tournament")
        self.labels: Tuple[int, ...] = tuple(int(x) for x in labels)
        self.adjacency = adjacency.copy()
        self.adjacency.setflags(write=False)
        self._index = {label: i for i, label in enumerate(self.labels)}

    @classmethod
    def from_arcs(cls, labels: Sequence[int], arcs: Sequence[Tuple[int, int]]) -> "Tournament":
        index = {int(label): i for i, label in enumerate(labels)}
        adjacency = np.zeros((len(labels), len(labels)), dtype=bool)
        for tail, head in arcs:
            adjacency[index[tail], index[head]] = True
        return cls(labels, adjacency)

    @property
    def m(self) -> int:
        return len(self.labels)

    def has_arc(self, tail: int, head: int) -> bool:
        return bool(self.adjacency[self._index[tail], self._index[head]])

    def arcs(self) -> List[Tuple[int, int]]:
        tails, heads = np.nonzero(self.adjacency)
        return [(self.labels[a], self.labels[b]) for a, b in zip(tails.tolist(), heads.tolist())]

    def indegrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=0)

    def positions_of(self, ordering: Sequence[int]) -> np.ndarray:
        """Vertex indices (into labels) of an ordering given by labels"""
        if len(ordering) != self.m or set(ordering) != set(self.labels):
            raise InvalidPartition("Ordering must be a permutation of the tournament's vertices")
        return np.asarray([self._index[int(label)] for label in ordering], dtype=np.int64)

    def back_arcs(self, ordering: Sequence[int]) -> int:
        """Number of arcs (x, y) with x placed after y"""
        perm = self.positions_of(ordering)
        permuted = self.adjacency[np.ix_(perm, perm)]
        return int(np.count_nonzero(np.tril(permuted, k=-1)))

    def to_digraph(self, ordering: Optional[Sequence[int]] = None) -> nx.DiGraph:
        """Arcs as a networkx digraph, without the back arcs of ``ordering`` when given"""
        adjacency = self.adjacency
        if ordering is not None:
            perm = self.positions_of(ordering)
            rank = np.empty(self.m, dtype=np.int64)
            rank[perm] = np.arange(self.m)
            adjacency = adjacency & (rank[:, None] < rank[None, :])
        tails, heads = np.nonzero(adjacency)
        graph = nx.DiGraph()
        graph.add_nodes_from(self.labels)
        graph.add_edges_from((self.labels[a], self.labels[b]) for a, b in zip(tails.tolist(), heads.tolist()))
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_digraph())

    def __repr__(self) -> str:
        return f"Tournament(m={self.m})"


@dataclass(frozen=True)
class FasResult:
    ordering: Tuple[int, ...]
    back_arcs: int
    method: FasMethod


def pivot_tournament(inst: Instance, p: int) -> Tournament:
    """Tournament on [n] minus {p} with arc i -> j iff (p, i, j) is asserted"""
    p = validate_point(p, inst.n)
    labels = [x for x in range(inst.n) if x != p]
    matrix = inst.closer_matrix(p)
    return Tournament(labels, matrix[np.ix_(labels, labels)])


def _result(t: Tournament, perm: np.ndarray, method: FasMethod) -> FasResult:
    ordering = tuple(t.labels[i] for i in perm.tolist())
    return FasResult(ordering=ordering, back_arcs=t.back_arcs(ordering), method=method)


def fas_indegree(t: Tournament) -> FasResult:
    """Vertices by ascending indegree, ties by ascending label"""
    if t.m < 1:
        raise ValueError("Tournament must have at least one vertex")
    perm = np.lexsort((np.asarray(t.labels), t.indegrees()))
    return _result(t, perm, FasMethod.INDEGREE)


def _reinsertion_deltas(permuted: np.ndarray) -> np.ndarray:
    """
    delta[i, j]: change in back arcs when the vertex at position i moves to
    position j (all others keep their relative order)
    """
    m = permuted.shape[0]
    signed = permuted.astype(np.int64) - permuted.T.astype(np.int64)
    prefix = np.cumsum(signed, axis=1)
    rows = np.arange(m)
    diagonal = prefix[rows, rows]
    left = np.zeros((m, m), dtype=np.int64)
    left[:, 1:] = prefix[:, :-1]
    before_diagonal = np.where(rows > 0, prefix[rows, np.maximum(rows - 1, 0)], 0)

    cols = np.arange(m)
    forward = prefix - diagonal[:, None]
    backward = left - before_diagonal[:, None]
    return np.where(cols[None, :] > rows[:, None], forward, np.where(cols[None, :] < rows[:, None], backward, 0))


def fas_local(t: Tournament, start: FasResult, max_rounds: int = 1000) -> FasResult:
    """
    Best single-vertex reinsertion until no move lowers the back-arc count or
    max_rounds moves were applied
    """
    perm = t.positions_of(start.ordering)
    labels = np.asarray(t.labels)

    for _ in range(max_rounds):
        permuted = t.adjacency[np.ix_(perm, perm)]
        deltas = _reinsertion_deltas(permuted)
        best = int(deltas.min())
        if best >= 0:
            break
        # ties: smallest moving label, then leftmost target
        candidates = np.argwhere(deltas == best)
        order = np.lexsort((candidates[:, 1], labels[perm[candidates[:, 0]]]))
        i, j = (int(x) for x in candidates[order[0]])
        vertex = perm[i]
        perm = np.insert(np.delete(perm, i), j, vertex)
    else:
        logger.debug(f"fas_local stopped after max_rounds={max_rounds}")

    result = _result(t, perm, FasMethod.INDEGREE_LOCAL)
    if result.back_arcs > start.back_arcs:
        raise AssertionError("local search increased the back-arc count")
    return result


def fas_exact(t: Tournament) -> FasResult:
    """
    Minimum back arcs over all orderings by subset dynamic programming;
    the lexicographically smallest optimal ordering (by label) is returned
    """
    m = t.m
    if m > FAS_EXACT_CAP:
        raise TooLarge("fas_exact tournament", m, FAS_EXACT_CAP)
    if m == 0:
        return FasResult(ordering=(), back_arcs=0, method=FasMethod.EXACT)

    by_label = sorted(range(m), key=lambda i: t.labels[i])
    # out_mask[i]: vertices (by sorted position) that vertex i points to
    out_mask = []
    for i in by_label:
        mask = 0
        for bit, j in enumerate(by_label):
            if t.adjacency[i, j]:
                mask |= 1 << bit
        out_mask.append(mask)

    full = (1 << m) - 1
    # remaining[S]: fewest back arcs to complete an ordering whose prefix set is S
    remaining = [0] * (1 << m)
    for subset in range(full - 1, -1, -1):
        best = None
        free = full & ~subset
        while free:
            low = free & -free
            v = low.bit_length() - 1
            cost = bin(out_mask[v] & subset).count("1") + remaining[subset | low]
            if best is None or cost < best:
                best = cost
            free ^= low
        remaining[subset] = best

    ordering = []
    subset = 0
    for _ in range(m):
        for v in range(m):
            if subset >> v & 1:
                continue
            cost = bin(out_mask[v] & subset).count("1") + remaining[subset | (1 << v)]
            if cost == remaining[subset]:
                ordering.append(t.labels[by_label[v]])
                subset |= 1 << v
                break

    return FasResult(ordering=tuple(ordering), back_arcs=remaining[0], method=FasMethod.EXACT)


def solve_fas(t: Tournament, method: FasMethod = FasMethod.INDEGREE_LOCAL, max_rounds: int = 1000) -> FasResult:
    method = FasMethod(method)
    if method is FasMethod.EXACT:
        return fas_exact(t)
    start = fas_indegree(t)
    if method is FasMethod.INDEGREE:
        return start
    return fas_local(t, start, max_rounds=max_rounds)


def topological_order(fas: FasResult, t: Tournament) -> List[int]:
    """
    Topological order of the tournament minus the back arcs of ``fas``.
    What remains is a transitive tournament, so the order is unique and
    equals the FAS ordering.
    """
    if len(fas.ordering) != t.m or set(fas.ordering) != set(t.labels):
        raise InvalidPartition("FAS result does not belong to this tournament")
    graph = t.to_digraph(fas.ordering)
    if not nx.is_directed_acyclic_graph(graph):
        raise InvalidPartition("Removing the back arcs left a cycle")
    rank = {label: i for i, label in enumerate(fas.ordering)}
    return list(nx.lexicographical_topological_sort(graph, key=rank.__getitem__))

"""
Digraph representation and the homology-preserving preprocessing steps.

A Digraph has vertices 0..n-1 and a set of arcs (u, v) with u != v. External
labels (user IDs, names from an edge list) live in a VertexMap next to it.

This module handles:
- Normalization: loop stripping and merging of parallel arcs
- Splitting into weakly connected components
- Pruning of nonbranching limbs
- Transposition (reversing every arc)
"""
import heapq
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

import networkx as nx

from pathhom.utils.logger import log_diagnostic

Arc = Tuple[int, int]


def _label_key(label: Any) -> Tuple[int, Any]:
    # Integers sort numerically and before everything else; other labels by text.
    if isinstance(label, int) and not isinstance(label, bool):
        return (0, label)
    return (1, str(label))


@dataclass(frozen=True)
class VertexMap:
    """
    Bijection between external labels and internal vertex indices.

    ``backward[i]`` is the external label of internal vertex ``i``.
    """
    backward: Tuple[Hashable, ...]
    forward: Dict[Hashable, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        forward = {label: i for i, label in enumerate(self.backward)}
        if len(forward) != len(self.backward):
            raise ValueError("vertex labels must be distinct")
        object.__setattr__(self, "forward", forward)

    @classmethod
    def identity(cls, n: int) -> "VertexMap":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.backward)

    def label(self, index: int) -> Hashable:
        return self.backward[index]

    def index(self, label: Hashable) -> int:
        return self.forward[label]

    def labels(self, path: Sequence[int]) -> Tuple[Hashable, ...]:
        return tuple(self.backward[v] for v in path)

    def through(self, outer: "VertexMap") -> "VertexMap":
        """
        Compose with the map of the digraph this one was cut from.

        ``self`` maps indices of a sub-digraph to indices of a parent digraph;
        ``outer`` maps the parent's indices to its labels. The result maps the
        sub-digraph's indices straight to the parent's labels.
        """
        return VertexMap(tuple(outer.backward[i] for i in self.backward))


@dataclass(frozen=True)
class Digraph:
    """
    Loopless digraph without parallel arcs on vertices 0..n-1.

    Instances are immutable. Use ``Digraph.build`` (or ``from_arcs``) to
    construct one from raw arcs; it strips loops and merges duplicates.
    """
    n: int
    arcs: FrozenSet[Arc]
    _succ: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _pred: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        succ: List[List[int]] = [[] for _ in range(self.n)]
        pred: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {(u, v)} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}; use Digraph.build to strip loops")
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "_succ", tuple(tuple(sorted(s)) for s in succ))
        object.__setattr__(self, "_pred", tuple(tuple(sorted(p)) for p in pred))

    @classmethod
    def build(cls, n: int, arcs: Iterable[Arc]) -> "Digraph":
        return cls(n, frozenset((u, v) for u, v in arcs if u != v))

    @classmethod
    def empty(cls) -> "Digraph":
        return cls(0, frozenset())

    def sorted_arcs(self) -> List[Arc]:
        return sorted(self.arcs)

    def successors(self, v: int) -> Tuple[int, ...]:
        return self._succ[v]

    def predecessors(self, v: int) -> Tuple[int, ...]:
        return self._pred[v]

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def out_degree(self, v: int) -> int:
        return len(self._succ[v])

    def in_degree(self, v: int) -> int:
        return len(self._pred[v])

    def degree(self, v: int) -> int:
        """Total degree: each incident arc counted once."""
        return len(self._succ[v]) + len(self._pred[v])

    def __len__(self) -> int:
        return self.n


def from_arcs(arcs: Iterable[Tuple[Hashable, Hashable]], report_loops: bool = True) -> Tuple[Digraph, VertexMap]:
    """
    Build a digraph from labeled arcs.

    Internal indices are assigned by sorting the external labels, so the
    same arc list always produces the same digraph.

    Args:
        arcs: (source label, target label) pairs; loops and duplicates allowed
        report_loops: Emit a LOOPS_STRIPPED diagnostic when loops are dropped

    Returns:
        (digraph, vertex map)
    """
    arcs = list(arcs)
    labels = sorted({label for arc in arcs for label in arc}, key=_label_key)
    vmap = VertexMap(tuple(labels))
    loops = sum(1 for u, v in arcs if u == v)
    if loops and report_loops:
        log_diagnostic("LOOPS_STRIPPED", f"removed {loops} loop(s) from {len(arcs)} arc(s)")
    digraph = Digraph.build(len(labels), ((vmap.forward[u], vmap.forward[v]) for u, v in arcs))
    return digraph, vmap


def induced_subgraph(d: Digraph, keep: Iterable[int]) -> Tuple[Digraph, VertexMap]:
    """
    Restrict ``d`` to the vertices in ``keep``, reindexed in increasing order.

    The returned map sends new indices to the corresponding indices of ``d``.
    """
    kept = sorted(set(keep))
    position = {v: i for i, v in enumerate(kept)}
    arcs = [(position[u], position[v]) for u, v in d.arcs if u in position and v in position]
    return Digraph(len(kept), frozenset(arcs)), VertexMap(tuple(kept))


def weak_components(d: Digraph) -> List[Tuple[Digraph, VertexMap]]:
    """
    Split ``d`` into weakly connected components.

    Components are ordered by their smallest vertex index, which is also
    their smallest external label because indices follow label order.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(d.n))
    graph.add_edges_from(d.arcs)
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    return [induced_subgraph(d, component) for component in components]


def prune_limbs_with_map(d: Digraph) -> Tuple[Digraph, VertexMap]:
    """
    Remove nonbranching limbs, returning the pruned digraph and its index map.

    Vertices of total degree 1 are deleted one at a time (smallest index
    first) until none remain. A vertex whose degree drops to 0 stays, so a
    tree collapses to a single vertex and component counts are preserved.
    """
    degree = [d.degree(v) for v in range(d.n)]
    alive = [True] * d.n
    leaves = [v for v in range(d.n) if degree[v] == 1]
    heapq.heapify(leaves)

    while leaves:
        v = heapq.heappop(leaves)
        if not alive[v] or degree[v] != 1:
            continue
        neighbour = next(w for w in d.successors(v) + d.predecessors(v) if alive[w])
        alive[v] = False
        degree[v] = 0
        degree[neighbour] -= 1
        if degree[neighbour] == 1:
            heapq.heappush(leaves, neighbour)

    return induced_subgraph(d, (v for v in range(d.n) if alive[v]))


def prune_limbs(d: Digraph) -> Digraph:
    return prune_limbs_with_map(d)[0]


def transpose(d: Digraph) -> Digraph:
    """Reverse every arc."""
    return Digraph(d.n, frozenset((v, u) for u, v in d.arcs))

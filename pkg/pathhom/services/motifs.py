"""
Named digraph families.

- dyad_up(n): mutual dyad a <-> b with both a and b pointing at n leaves
- dyad_down(n): the transpose (n leaves pointing at both a and b)
- torsion_cycle(n): directed 2n-cycle linked alternately to two outside
  vertices; its integer homology has Z/n torsion in dimension 1
- square_trivial / square_hole: the two 4-vertex squares, one filled by an
  invariant 2-path and one with a hole in dimension 1
- er: Erdős–Rényi digraph on n vertices (q and seed from the spec)

Also the helpers used to read motifs back out of cycle representatives.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from pathhom.core.digraph import Digraph, from_arcs, transpose
from pathhom.core.homology import Chain
from pathhom.errors import UsageError


class MotifName(str, Enum):
    DYAD_UP = "dyad_up"
    DYAD_DOWN = "dyad_down"
    TORSION_CYCLE = "torsion_cycle"
    SQUARE_TRIVIAL = "square_trivial"
    SQUARE_HOLE = "square_hole"
    ER = "er"


TORSION_LINKS = ("both", "out", "in")

_PARAMETERIZED = {MotifName.DYAD_UP, MotifName.DYAD_DOWN, MotifName.TORSION_CYCLE, MotifName.ER}


@dataclass(frozen=True)
class MotifSpec:
    """
    A named family member.

    ``parameter`` is n for the dyads and the torsion family and the vertex
    count for er; the squares ignore it. ``link`` only applies to
    torsion_cycle, ``q`` and ``seed`` only to er.
    """
    name: str
    parameter: int = 1
    link: str = "both"
    q: float = 0.5
    seed: int = 1

    def validated(self) -> "MotifSpec":
        try:
            name = MotifName(self.name)
        except ValueError:
            known = ", ".join(m.value for m in MotifName)
            raise UsageError(f"unknown motif {self.name!r}; expected one of {known}", error_code="UNKNOWN_MOTIF")
        if name in _PARAMETERIZED and self.parameter < 1:
            raise UsageError(f"{name.value} needs a parameter >= 1, got {self.parameter}",
                             error_code="INVALID_PARAMETER")
        if name is MotifName.TORSION_CYCLE and self.link not in TORSION_LINKS:
            raise UsageError(f"unknown link direction {self.link!r}", error_code="INVALID_PARAMETER")
        if name is MotifName.ER and not 0 <= self.q <= 1:
            raise UsageError(f"q must lie in [0, 1], got {self.q}", error_code="INVALID_PARAMETER")
        return self


def dyad_up(n: int) -> Digraph:
    """Vertices a=0, b=1 and leaves 2..n+1."""
    arcs = [(0, 1), (1, 0)]
    for leaf in range(2, n + 2):
        arcs += [(0, leaf), (1, leaf)]
    return Digraph.build(n + 2, arcs)


def dyad_down(n: int) -> Digraph:
    return transpose(dyad_up(n))


def torsion_cycle(n: int, link: str = "both") -> Digraph:
    """
    Central cycle c_0 -> ... -> c_{2n-1} -> c_0 on vertices 0..2n-1 with
    outside vertices x = 2n (even positions) and y = 2n+1 (odd positions).

    Args:
        n: Half the cycle length
        link: "out" for c_j -> x/y, "in" for x/y -> c_j, "both" for a
            reciprocal pair. Only "both" carries Z/n torsion.
    """
    if link not in TORSION_LINKS:
        raise UsageError(f"unknown link direction {link!r}", error_code="INVALID_PARAMETER")
    size = 2 * n
    x, y = size, size + 1
    arcs = [(j, (j + 1) % size) for j in range(size)]
    for j in range(size):
        outside = x if j % 2 == 0 else y
        if link in ("out", "both"):
            arcs.append((j, outside))
        if link in ("in", "both"):
            arcs.append((outside, j))
    return Digraph.build(size + 2, arcs)


def square_hole() -> Digraph:
    """1->2, 1->3, 4->2, 4->3: no invariant 2-path fills the square."""
    return from_arcs([(1, 2), (1, 3), (4, 2), (4, 3)])[0]


def square_trivial() -> Digraph:
    """1->2, 1->3, 2->4, 3->4: the difference of the two 2-paths fills it."""
    return from_arcs([(1, 2), (1, 3), (2, 4), (3, 4)])[0]


def erdos_renyi(n: int, q: float, rng: np.random.Generator) -> Digraph:
    """Include each ordered pair (u, v), u != v, independently with probability q."""
    mask = rng.random((n, n)) < q
    np.fill_diagonal(mask, False)
    sources, targets = np.nonzero(mask)
    return Digraph.build(n, zip(sources.tolist(), targets.tolist()))


def build(spec: MotifSpec) -> Digraph:
    spec = spec.validated()
    name = MotifName(spec.name)
    if name is MotifName.DYAD_UP:
        return dyad_up(spec.parameter)
    if name is MotifName.DYAD_DOWN:
        return dyad_down(spec.parameter)
    if name is MotifName.TORSION_CYCLE:
        return torsion_cycle(spec.parameter, spec.link)
    if name is MotifName.SQUARE_TRIVIAL:
        return square_trivial()
    if name is MotifName.SQUARE_HOLE:
        return square_hole()
    return erdos_renyi(spec.parameter, spec.q, np.random.default_rng(spec.seed))


def representative_arcs(chain: Chain) -> List[Tuple]:
    """Arcs traversed by the paths in a chain's support, sorted."""
    arcs: Set[Tuple] = set()
    for path in chain.support:
        arcs.update(zip(path, path[1:]))
    return sorted(arcs)


@dataclass(frozen=True)
class DyadMatch:
    """
    A mutual dyad read off 2-cycle representatives.

    ``orientation`` is "up" when the pair points at the leaves and "down"
    when the leaves point at the pair. ``representatives`` counts the cycles
    that were merged; a complete W_n contributes n - 1 of them.
    """
    pair: Tuple
    leaves: Tuple
    orientation: str
    representatives: int = 1

    @property
    def n(self) -> int:
        return len(self.leaves)

    @property
    def accounts_for_cycles(self) -> bool:
        return self.n >= 2 and self.representatives == self.n - 1


def match_dyad(chain: Chain) -> Optional[DyadMatch]:
    """
    Recognize a 2-cycle supported on a single mutual dyad.

    Every path must be (a, b, leaf) / (b, a, leaf) for one pair {a, b}
    (uplinked), or (leaf, a, b) / (leaf, b, a) (downlinked).
    """
    support = chain.support
    if not support or any(len(path) != 3 for path in support):
        return None
    for orientation, pair_of, leaf_of in (
        ("up", lambda path: path[:2], lambda path: path[2]),
        ("down", lambda path: path[1:], lambda path: path[0]),
    ):
        pairs = {frozenset(pair_of(path)) for path in support}
        if len(pairs) != 1:
            continue
        pair = next(iter(pairs))
        leaves = {leaf_of(path) for path in support}
        if len(pair) == 2 and not leaves & pair:
            return DyadMatch(pair=tuple(sorted(pair)), leaves=tuple(sorted(leaves)), orientation=orientation)
    return None


def group_dyads(chains: List[Chain]) -> List[DyadMatch]:
    """Merge dyad matches that share a pair and orientation."""
    grouped: Dict[Tuple, DyadMatch] = {}
    for chain in chains:
        match = match_dyad(chain)
        if match is None:
            continue
        key = (match.pair, match.orientation)
        if key in grouped:
            seen = grouped[key]
            leaves = tuple(sorted(set(seen.leaves) | set(match.leaves)))
            grouped[key] = DyadMatch(match.pair, leaves, match.orientation, seen.representatives + 1)
        else:
            grouped[key] = match
    return [grouped[key] for key in sorted(grouped)]

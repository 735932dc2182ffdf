"""
Census of small digraphs up to isomorphism.

Canonical form: the adjacency bit-string over ordered pairs (i, j), i != j,
in row-major order (first pair most significant), minimized over all n!
relabelings. The integer value of that string is the canonical code.

Enumeration walks the labeled candidates of a family in increasing order.
The first unseen candidate starts a new class; all of its relabelings are
then marked as seen, so each class is canonicalized exactly once.
"""
import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from pathhom.config.settings import settings
from pathhom.core.digraph import Digraph
from pathhom.core.homology import betti_curve, transpose_defect
from pathhom.errors import CensusLimitError, UsageError
from pathhom.services.workers import map_ordered
from pathhom.utils.logger import log_diagnostic, logger

MAX_CENSUS_DIM = 4


class Family(str, Enum):
    DIGRAPH = "digraph"
    DAG = "dag"
    UNDIRECTED = "undirected"

    @classmethod
    def parse(cls, value) -> "Family":
        try:
            return cls(value)
        except ValueError:
            raise UsageError(f"unknown census family {value!r}; expected digraph, dag or undirected",
                             error_code="UNKNOWN_FAMILY")


# codes are int64 bit vectors over the n(n-1) ordered pairs
MAX_CODE_BITS = 63
MAX_CANONICAL_VERTICES = 8


@dataclass(frozen=True)
class _Tables:
    pairs: Tuple[Tuple[int, int], ...]
    upper: Tuple[Tuple[int, int], ...]
    # weights[pi, k]: contribution of pair k to the code after relabeling by pi
    weights: np.ndarray
    # upper_weights[pi, u]: contribution of upper pair u to the candidate index after relabeling
    upper_weights: np.ndarray
    # upper_down[pi, u]: 1 when relabeling turns upper pair u into a downward arc
    upper_down: np.ndarray


@lru_cache(maxsize=None)
def _tables(n: int) -> _Tables:
    if n * (n - 1) >= MAX_CODE_BITS:
        raise UsageError(
            f"canonical codes are limited to {MAX_CANONICAL_VERTICES} vertices, got {n}",
            details={"vertices": n, "limit": MAX_CANONICAL_VERTICES},
            error_code="CANONICAL_SIZE_OVER_LIMIT",
        )
    pairs = tuple((i, j) for i in range(n) for j in range(n) if i != j)
    upper = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)

    pair_pos = np.zeros((n, n), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        pair_pos[i, j] = k
    upper_pos = np.zeros((n, n), dtype=np.int64)
    for u, (i, j) in enumerate(upper):
        upper_pos[i, j] = upper_pos[j, i] = u

    pair_power = np.int64(1) << (len(pairs) - 1 - np.arange(len(pairs), dtype=np.int64))
    upper_power = np.int64(1) << (len(upper) - 1 - np.arange(len(upper), dtype=np.int64))

    weights = np.zeros((len(perms), len(pairs)), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        weights[:, k] = pair_power[pair_pos[perms[:, i], perms[:, j]]]
    upper_weights = np.zeros((len(perms), len(upper)), dtype=np.int64)
    upper_down = np.zeros((len(perms), len(upper)), dtype=np.int64)
    for u, (i, j) in enumerate(upper):
        upper_weights[:, u] = upper_power[upper_pos[perms[:, i], perms[:, j]]]
        upper_down[:, u] = perms[:, i] > perms[:, j]
    return _Tables(pairs, upper, weights, upper_weights, upper_down)


def _bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.int64)


def digraph_bits(d: Digraph) -> np.ndarray:
    """Adjacency bit vector over the ordered pairs of ``d``."""
    return np.array([int(d.has_arc(i, j)) for i, j in _tables(d.n).pairs], dtype=np.int64)


def canonical_code(d: Digraph) -> int:
    """Minimal adjacency code of ``d`` over all relabelings."""
    if d.n == 0:
        return 0
    return int((_tables(d.n).weights @ digraph_bits(d)).min())


def decode(code: int, n: int) -> Digraph:
    """Digraph on n vertices whose adjacency code is ``code``."""
    pairs = _tables(n).pairs
    bits = _bits(code, len(pairs))
    return Digraph.build(n, (pair for pair, bit in zip(pairs, bits) if bit))


def canonical_form(d: Digraph) -> Digraph:
    return decode(canonical_code(d), d.n)


def _check_size(family: Family, vertices: int):
    if vertices < 1:
        raise UsageError(f"--vertices must be >= 1, got {vertices}", error_code="INVALID_VERTICES")
    limit = settings.MAX_DIGRAPH_CENSUS_VERTICES if family is Family.DIGRAPH else settings.MAX_CENSUS_VERTICES
    if vertices > limit:
        raise CensusLimitError(
            f"{family.value} census is limited to {limit} vertices, got {vertices}",
            details={"family": family.value, "vertices": vertices, "limit": limit},
        )


def class_codes(family, vertices: int) -> List[int]:
    """
    Canonical codes of every isomorphism class in a family, ascending.

    Args:
        family: Family or its name
        vertices: Vertex count (at most 5 for digraphs, 7 otherwise)

    Raises:
        CensusLimitError: vertices over the family's limit
    """
    family = Family.parse(family)
    _check_size(family, vertices)
    tables = _tables(vertices)
    width = len(tables.pairs) if family is Family.DIGRAPH else len(tables.upper)
    if family is Family.UNDIRECTED:
        expand = np.zeros((len(tables.upper), len(tables.pairs)), dtype=np.int64)
        for u, (i, j) in enumerate(tables.upper):
            expand[u, tables.pairs.index((i, j))] = 1
            expand[u, tables.pairs.index((j, i))] = 1
    elif family is Family.DAG:
        expand = np.zeros((len(tables.upper), len(tables.pairs)), dtype=np.int64)
        for u, pair in enumerate(tables.upper):
            expand[u, tables.pairs.index(pair)] = 1

    seen = np.zeros(1 << width, dtype=bool)
    codes = []
    for candidate in range(1 << width):
        if seen[candidate]:
            continue
        bits = _bits(candidate, width)
        if family is Family.DIGRAPH:
            images = tables.weights @ bits
            seen[images] = True
        else:
            images = tables.weights @ (bits @ expand)
            relabeled = tables.upper_weights @ bits
            if family is Family.DAG:
                relabeled = relabeled[(tables.upper_down @ bits) == 0]
            seen[relabeled] = True
        codes.append(int(images.min()))
    codes.sort()
    logger.debug(f"{family.value} census on {vertices} vertices: {len(codes)} classes")
    return codes


def enumerate_classes(family, vertices: int) -> Iterator[Digraph]:
    """One canonical digraph per isomorphism class, in canonical-code order."""
    for code in class_codes(family, vertices):
        yield decode(code, vertices)


_TERM = re.compile(r"^\s*b(\d+)\s*(>=|<=|==|!=|>|<|=)\s*(-?\d+)\s*$")
_OPS: Dict[str, Callable[[int, int], bool]] = {
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def parse_filter(expression: Optional[str], max_dim: int) -> Callable[[Sequence[int]], bool]:
    """
    Turn "b2>0" or "b2>0,b3==0" (also "and") into a predicate on reduced Betti vectors.

    Raises:
        UsageError: unparsable term or a dimension above max_dim
    """
    if not expression or not expression.strip():
        return lambda betti: True
    terms = []
    for raw in re.split(r",|\band\b", expression):
        match = _TERM.match(raw)
        if not match:
            raise UsageError(f"cannot parse filter term {raw.strip()!r}", error_code="INVALID_FILTER")
        dim, op, value = int(match.group(1)), match.group(2), int(match.group(3))
        if dim > max_dim:
            raise UsageError(f"filter uses b{dim} but --max-dim is {max_dim}", error_code="INVALID_FILTER")
        terms.append((dim, _OPS[op], value))
    return lambda betti: all(op(betti[dim], value) for dim, op, value in terms)


@dataclass(frozen=True)
class CensusQuery:
    family: str
    vertices: int
    max_dim: int = 2
    filter: Optional[str] = None

    def validated(self) -> "CensusQuery":
        family = Family.parse(self.family)
        _check_size(family, self.vertices)
        if not 0 <= self.max_dim <= MAX_CENSUS_DIM:
            raise UsageError(f"census --max-dim must lie in 0..{MAX_CENSUS_DIM}, got {self.max_dim}",
                             error_code="INVALID_MAX_DIM")
        parse_filter(self.filter, self.max_dim)
        return self


@dataclass(frozen=True)
class CensusMatch:
    code: int
    arcs: Tuple[Tuple[int, int], ...]
    reduced_betti: Tuple[int, ...]


@dataclass(frozen=True)
class CensusResult:
    """
    ``histogram`` maps each reduced Betti vector to its class count and is
    ordered by Betti vector; ``matches`` are ordered by canonical code.
    """
    query: CensusQuery
    total_classes: int
    matches: Tuple[CensusMatch, ...]
    histogram: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    transpose_defects: Tuple[int, ...] = ()

    def histogram_dict(self):
        return [{"reduced_betti": list(betti), "classes": count} for betti, count in self.histogram.items()]


def _census_job(job) -> List[Tuple[int, Tuple[int, ...], bool]]:
    vertices, max_dim, codes, check = job
    rows = []
    for code in codes:
        d = decode(code, vertices)
        defect = check and any(transpose_defect(d, max_dim))
        rows.append((code, betti_curve(d, max_dim), defect))
    return rows


def run_census(query: CensusQuery, threads: Optional[int] = None, transpose_check: bool = False) -> CensusResult:
    """
    Compute the reduced Betti vector of every class and collect the matches.

    Args:
        query: Family, size, dimension and optional filter
        threads: Worker count (None: PATHHOM_THREADS)
        transpose_check: Also compare every class with its transpose

    Returns:
        CensusResult; identical for every worker count
    """
    query = query.validated()
    keep = parse_filter(query.filter, query.max_dim)
    codes = class_codes(query.family, query.vertices)
    size = settings.CHUNK_SIZE
    jobs = (
        (query.vertices, query.max_dim, codes[start:start + size], transpose_check)
        for start in range(0, len(codes), size)
    )

    histogram: Counter = Counter()
    matches = []
    defects = []
    for rows in map_ordered(_census_job, jobs, threads):
        for code, betti, defect in rows:
            histogram[betti] += 1
            if defect:
                defects.append(code)
                log_diagnostic("TRANSPOSE_DEFECT", f"class {code} on {query.vertices} vertices", severity="ERROR")
            if keep(betti):
                matches.append(CensusMatch(code, tuple(decode(code, query.vertices).sorted_arcs()), betti))

    logger.info(f"Census {query.family} n={query.vertices}: {len(codes)} classes, {len(matches)} matches")
    return CensusResult(
        query=query,
        total_classes=len(codes),
        matches=tuple(matches),
        histogram=dict(sorted(histogram.items())),
        transpose_defects=tuple(defects),
    )

"""
Erdős–Rényi digraph sampling and empirical Betti distributions.

Trials are split into fixed-size chunks; chunk c draws from
numpy.random.default_rng(seed + c). The chunking does not depend on the
worker count, so a seed always reproduces the same distribution.
"""
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from pathhom.config.settings import settings
from pathhom.core.digraph import Arc, Digraph
from pathhom.core.homology import betti_curve
from pathhom.errors import UsageError
from pathhom.services.census import canonical_code
from pathhom.services.motifs import erdos_renyi
from pathhom.services.workers import map_ordered
from pathhom.utils.logger import logger


@dataclass(frozen=True)
class ERSpec:
    n: int
    q: float
    trials: int
    seed: int = 1
    max_dim: int = 2

    def validated(self) -> "ERSpec":
        if self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}", error_code="INVALID_PARAMETER")
        if not 0 <= self.q <= 1:
            raise UsageError(f"--q must lie in [0, 1], got {self.q}", error_code="INVALID_PARAMETER")
        if self.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {self.trials}", error_code="INVALID_PARAMETER")
        if self.max_dim < 0:
            raise UsageError(f"--max-dim must be >= 0, got {self.max_dim}", error_code="INVALID_MAX_DIM")
        return self


@dataclass(frozen=True)
class BettiDistribution:
    """
    Distribution of reduced Betti numbers over the trials.

    ``counts[p][value]`` is the number of trials with reduced Betti number
    ``value`` in dimension p. Frequencies are exact fractions of ``trials``.
    """
    spec: ERSpec
    trials: int
    counts: Dict[int, Dict[int, int]] = field(default_factory=dict)

    def frequencies(self, p: int) -> Dict[int, Fraction]:
        return {value: Fraction(count, self.trials) for value, count in sorted(self.counts[p].items())}

    def mean(self, p: int) -> Fraction:
        return sum((value * freq for value, freq in self.frequencies(p).items()), Fraction(0))

    def rows(self) -> List[Tuple[int, int, Fraction]]:
        """(dimension, betti_value, frequency) in dimension then value order."""
        return [
            (p, value, freq)
            for p in sorted(self.counts)
            for value, freq in self.frequencies(p).items()
        ]


def _sample_chunk(job) -> Dict[int, Dict[int, int]]:
    n, q, max_dim, seed, size = job
    rng = np.random.default_rng(seed)
    cache: Dict[FrozenSet[Arc], Tuple[int, ...]] = {}
    counts = {p: Counter() for p in range(max_dim + 1)}
    for _ in range(size):
        d = erdos_renyi(n, q, rng)
        if d.arcs not in cache:
            cache[d.arcs] = betti_curve(d, max_dim)
        for p, value in enumerate(cache[d.arcs]):
            counts[p][value] += 1
    return {p: dict(c) for p, c in counts.items()}


def sample_er(spec: ERSpec, threads: Optional[int] = None) -> BettiDistribution:
    """
    Sample ``spec.trials`` digraphs and tally their reduced Betti numbers.

    Repeated samples share one homology computation (keyed by arc set
    within a chunk).
    """
    spec = spec.validated()
    size = settings.CHUNK_SIZE
    jobs = [
        (spec.n, spec.q, spec.max_dim, spec.seed + index, min(size, spec.trials - start))
        for index, start in enumerate(range(0, spec.trials, size))
    ]
    totals = {p: Counter() for p in range(spec.max_dim + 1)}
    for partial in map_ordered(_sample_chunk, jobs, threads):
        for p, counts in partial.items():
            totals[p].update(counts)
    logger.info(f"Sampled {spec.trials} ER digraphs (n={spec.n}, q={spec.q}) in {len(jobs)} chunks")
    return BettiDistribution(spec=spec, trials=spec.trials,
                             counts={p: dict(sorted(c.items())) for p, c in totals.items()})


def exact_distribution(n: int, q: Fraction, max_dim: int = 2) -> Dict[int, Dict[int, Fraction]]:
    """
    Exact Betti distribution of the ER model by enumerating every labeled digraph.

    Each digraph with k arcs has probability q^k (1-q)^(n(n-1)-k). Feasible
    for n <= 4 (4096 digraphs).
    """
    q = Fraction(q)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    cache: Dict[int, Tuple[int, ...]] = {}
    result = {p: Counter() for p in range(max_dim + 1)}
    for mask in itertools.product((0, 1), repeat=len(pairs)):
        d = Digraph.build(n, (pair for pair, bit in zip(pairs, mask) if bit))
        code = canonical_code(d)
        if code not in cache:
            cache[code] = betti_curve(d, max_dim)
        k = sum(mask)
        weight = q ** k * (1 - q) ** (len(pairs) - k)
        for p, value in enumerate(cache[code]):
            result[p][value] += weight
    return {p: {value: weight for value, weight in sorted(c.items()) if weight} for p, c in result.items()}

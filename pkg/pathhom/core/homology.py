"""
Homology of digraphs: Betti numbers, torsion and cycle representatives.

The pipeline for one digraph:
1. prune nonbranching limbs (homology-invariant)
2. split into weak components
3. per component: build the invariant path complex up to max_dim + 1
4. Betti numbers by rank-nullity, torsion from Smith normal forms
5. merge components and reduce in dimension 0
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pathhom.core.digraph import Digraph, VertexMap, _label_key, prune_limbs_with_map, transpose, weak_components
from pathhom.core.exactla import ExactMatrix, Ring, kernel_basis, pivot_columns, rank, smith_normal_form
from pathhom.core.pathcomplex import Path, PathComplex, build_path_complex
from pathhom.services.workers import map_ordered


@dataclass(frozen=True)
class Chain:
    """
    Integral combination of allowed paths.

    Terms are sorted by path; coefficients are coprime and the first one is
    positive.
    """
    dim: int
    terms: Tuple[Tuple[Path, int], ...]

    @property
    def support(self) -> Tuple[Path, ...]:
        return tuple(path for path, _ in self.terms)

    def as_dict(self) -> Dict[Path, int]:
        return dict(self.terms)

    def relabel(self, vmap: VertexMap) -> "Chain":
        """Rewrite vertex indices through ``vmap``; terms are ordered by label key."""
        terms = ((vmap.labels(path), c) for path, c in self.terms)
        return Chain(self.dim, tuple(sorted(terms, key=lambda term: [_label_key(v) for v in term[0]])))

    def to_dict(self, vmap: Optional[VertexMap] = None) -> Dict[str, Any]:
        terms = []
        for path, coef in self.terms:
            shown = list(vmap.labels(path)) if vmap is not None else list(path)
            terms.append({"path": shown, "coef": coef})
        return {"dim": self.dim, "terms": terms}


@dataclass(frozen=True)
class HomologySummary:
    """
    Homology of a digraph in dimensions 0..max_dim.

    ``betti`` is unreduced; ``reduced_betti`` differs only in dimension 0
    (one less, unless the digraph is empty). ``torsion`` maps a dimension to
    its invariant factors greater than 1 (integer ring only).
    ``representatives`` maps a dimension >= 1 to one cycle per reduced Betti
    number, in the input digraph's vertex indices.
    """
    max_dim: int
    ring: Ring
    betti: Tuple[int, ...]
    reduced_betti: Tuple[int, ...]
    torsion: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    representatives: Optional[Dict[int, Tuple[Chain, ...]]] = None

    def to_dict(self, vmap: Optional[VertexMap] = None) -> Dict[str, Any]:
        summary: Dict[str, Any] = {
            "max_dim": self.max_dim,
            "ring": self.ring.value,
            "betti": list(self.betti),
            "reduced_betti": list(self.reduced_betti),
            "torsion": {str(p): list(factors) for p, factors in sorted(self.torsion.items()) if factors},
        }
        if self.representatives is not None:
            summary["representatives"] = {
                str(p): [chain.to_dict(vmap) for chain in chains]
                for p, chains in sorted(self.representatives.items())
            }
        return summary


def _normalize(vector: Sequence) -> List[int]:
    den = 1
    for x in vector:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    values = [int(x * den) for x in vector]
    g = 0
    for x in values:
        g = gcd(g, x)
    if g > 1:
        values = [x // g for x in values]
    first = next((x for x in values if x), 0)
    if first < 0:
        values = [-x for x in values]
    return values


def representatives(complex_: PathComplex, p: int) -> List[Chain]:
    """
    One cycle per Betti number in dimension p (1 <= p < complex_.p_max).

    Cycles are taken greedily from the kernel basis of d_p after the
    boundaries im d_{p+1}, so the chosen cycles are independent modulo
    boundaries. Each is returned in allowed-path coordinates.
    """
    if not 1 <= p < complex_.p_max:
        raise ValueError(f"representatives need 1 <= p < {complex_.p_max}")
    cycles = kernel_basis(complex_.boundary(p))
    if cycles.cols == 0:
        return []
    boundaries = complex_.boundary(p + 1)
    stacked = boundaries.to_ring(Ring.RATIONAL).hstack(cycles)
    chosen = [j - boundaries.cols for j in pivot_columns(stacked) if j >= boundaries.cols]

    omega = complex_.omegas[p]
    allowed = complex_.paths.paths[p]
    result = []
    for j in chosen:
        coords = omega @ cycles.select_columns([j])
        values = _normalize([row[0] for row in coords.entries])
        terms = tuple((allowed[i], c) for i, c in enumerate(values) if c)
        result.append(Chain(dim=p, terms=terms))
    return result


@dataclass
class _ComponentResult:
    betti: List[int]
    torsion: Dict[int, Tuple[int, ...]]
    representatives: Dict[int, List[Chain]]


def _component_homology(d: Digraph, max_dim: int, ring: Ring, rep_dims: Sequence[int]) -> _ComponentResult:
    complex_ = build_path_complex(d, max_dim + 1, ring)
    ranks = [0]
    torsion: Dict[int, Tuple[int, ...]] = {}
    for p in range(1, max_dim + 2):
        boundary = complex_.boundary(p)
        if ring is Ring.INTEGER:
            snf = smith_normal_form(boundary)
            ranks.append(snf.rank)
            if snf.torsion:
                torsion[p - 1] = snf.torsion
        else:
            ranks.append(rank(boundary))
    ranks.append(0)
    betti = [complex_.omega_dim(p) - ranks[p] - ranks[p + 1] for p in range(max_dim + 1)]
    reps = {p: representatives(complex_, p) for p in rep_dims if 1 <= p <= max_dim}
    return _ComponentResult(betti, torsion, reps)


def _component_job(job) -> _ComponentResult:
    return _component_homology(*job)


def homology(
    d: Digraph,
    max_dim: int = 2,
    ring=Ring.RATIONAL,
    want_reps: bool = False,
    rep_dims: Optional[Iterable[int]] = None,
    threads: Optional[int] = 1,
) -> HomologySummary:
    """
    Homology of ``d`` in dimensions 0..max_dim.

    Args:
        d: Any digraph (loops already stripped)
        max_dim: Highest homology dimension reported
        ring: Ring.RATIONAL or Ring.INTEGER ('q' / 'z' accepted)
        want_reps: Also return cycle representatives for dimensions >= 1
        rep_dims: Restrict representatives to these dimensions
        threads: Workers for the weak components (see resolve_threads)

    Returns:
        HomologySummary; representatives use the vertex indices of ``d``
    """
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    ring = Ring.parse(ring)
    dims = sorted(set(rep_dims)) if rep_dims is not None else list(range(1, max_dim + 1))
    if not want_reps:
        dims = []

    pruned, prune_map = prune_limbs_with_map(d)
    betti = [0] * (max_dim + 1)
    factors: Dict[int, List[int]] = {}
    reps: Dict[int, List[Chain]] = {p: [] for p in dims if 1 <= p <= max_dim}

    components = weak_components(pruned)
    jobs = [(component, max_dim, ring, dims) for component, _ in components]
    results = map_ordered(_component_job, jobs, threads if len(jobs) > 1 else 1)
    for (_, component_map), result in zip(components, results):
        betti = [a + b for a, b in zip(betti, result.betti)]
        for p, values in result.torsion.items():
            factors.setdefault(p, []).extend(values)
        to_input = component_map.through(prune_map)
        for p, chains in result.representatives.items():
            reps[p].extend(chain.relabel(to_input) for chain in chains)

    reduced = list(betti)
    if d.n > 0:
        reduced[0] -= 1

    return HomologySummary(
        max_dim=max_dim,
        ring=ring,
        betti=tuple(betti),
        reduced_betti=tuple(reduced),
        # The torsion of a direct sum is the sorted union of the parts.
        torsion={p: tuple(sorted(values)) for p, values in sorted(factors.items())},
        representatives={p: tuple(chains) for p, chains in reps.items()} if want_reps else None,
    )


def betti_curve(d: Digraph, max_dim: int = 2) -> Tuple[int, ...]:
    """Reduced rational Betti numbers of ``d`` in dimensions 0..max_dim."""
    return homology(d, max_dim).reduced_betti


def transpose_defect(d: Digraph, max_dim: int = 2) -> Tuple[int, ...]:
    """
    Difference between the reduced Betti numbers of ``d`` and its transpose.

    Path homology is invariant under reversing all arcs, so this is all
    zeros; a nonzero entry points at a bug.
    """
    forward = betti_curve(d, max_dim)
    backward = betti_curve(transpose(d), max_dim)
    return tuple(a - b for a, b in zip(forward, backward))

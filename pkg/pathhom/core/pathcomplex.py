"""
Allowed paths, the boundary split, invariant spaces and the chain complex.

An allowed p-path is a vertex sequence (v0, ..., vp) whose consecutive pairs
are all arcs. Paths of each length are kept in lexicographic order; every
matrix in this module indexes its rows and columns in that order.

The boundary of an allowed p-path is the alternating sum of its faces (one
vertex dropped). Faces that are themselves allowed make up the Delta block,
faces that are not make up the Nabla block. Invariant p-paths are the
combinations whose Nabla part cancels; on them the boundary lands in the
invariant (p-1)-paths.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pathhom.core.digraph import Digraph
from pathhom.core.exactla import (
    ExactMatrix,
    Ring,
    integer_kernel_basis,
    kernel_basis,
    rank,
    solve,
)

Path = Tuple[int, ...]


@dataclass(frozen=True)
class AllowedPaths:
    """Allowed paths of lengths 0..p_max, each length in lexicographic order."""
    n: int
    paths: Tuple[Tuple[Path, ...], ...]
    _positions: Tuple[Dict[Path, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_positions", tuple({path: i for i, path in enumerate(level)} for level in self.paths))

    @property
    def p_max(self) -> int:
        return len(self.paths) - 1

    def count(self, p: int) -> int:
        return len(self.paths[p]) if 0 <= p <= self.p_max else 0

    def position(self, p: int, path: Path) -> int:
        return self._positions[p][path]

    def is_allowed(self, path: Path) -> bool:
        p = len(path) - 1
        return 0 <= p <= self.p_max and path in self._positions[p]

    def index(self, path: Path) -> int:
        """Radix-n integer encoding of a path, v0 most significant."""
        value = 0
        for v in path:
            value = value * self.n + v
        return value

    def indices(self, p: int) -> List[int]:
        return [self.index(path) for path in self.paths[p]]


@dataclass(frozen=True)
class BoundaryBlocks:
    """
    The two parts of the boundary on allowed p-paths.

    ``delta`` has one row per allowed (p-1)-path. ``nabla`` has one row per
    non-allowed face that actually occurs, listed in ``nabla_faces``.
    """
    p: int
    delta: ExactMatrix
    nabla: ExactMatrix
    nabla_faces: Tuple[Path, ...]


@dataclass(frozen=True)
class PathComplex:
    """
    Chain complex of invariant paths up to ``p_max``.

    ``omegas[p]`` has columns spanning the invariant p-paths in allowed-path
    coordinates. ``boundaries[p]`` is d_p in invariant coordinates
    (dim Omega_{p-1} x dim Omega_p); ``boundaries[0]`` is the zero map out of
    Omega_0.
    """
    digraph: Digraph
    ring: Ring
    paths: AllowedPaths
    blocks: Tuple[BoundaryBlocks, ...]
    omegas: Tuple[ExactMatrix, ...]
    boundaries: Tuple[ExactMatrix, ...]

    @property
    def p_max(self) -> int:
        return self.paths.p_max

    def omega_dim(self, p: int) -> int:
        return self.omegas[p].cols if 0 <= p <= self.p_max else 0

    def boundary(self, p: int) -> ExactMatrix:
        return self.boundaries[p]


def enumerate_allowed(d: Digraph, p_max: int) -> AllowedPaths:
    """
    List the allowed paths of every length up to ``p_max``.

    Extending each (p-1)-path by the sorted successors of its last vertex
    keeps every level in lexicographic order.
    """
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    levels: List[Tuple[Path, ...]] = [tuple((v,) for v in range(d.n))]
    for _ in range(p_max):
        levels.append(tuple(path + (w,) for path in levels[-1] for w in d.successors(path[-1])))
    return AllowedPaths(d.n, tuple(levels))


def boundary_blocks(d: Digraph, paths: AllowedPaths, p: int) -> BoundaryBlocks:
    """
    Split the boundary on allowed p-paths into its Delta and Nabla blocks.

    Face j of a path drops vertex j and carries the sign (-1)^j. At p = 0
    both blocks are empty.

    Args:
        d: Digraph the paths were enumerated from
        paths: Allowed paths with p_max >= p
        p: Path length

    Returns:
        BoundaryBlocks with integer entries in {-1, 0, 1}
    """
    if paths.n != d.n:
        raise ValueError("allowed paths were enumerated from a different digraph")
    columns = paths.paths[p]
    if p == 0:
        return BoundaryBlocks(
            p=0,
            delta=ExactMatrix.zeros(0, len(columns), Ring.INTEGER),
            nabla=ExactMatrix.zeros(0, len(columns), Ring.INTEGER),
            nabla_faces=(),
        )

    delta_rows = [[0] * len(columns) for _ in range(paths.count(p - 1))]
    nabla_entries: Dict[Path, Dict[int, int]] = {}
    for col, path in enumerate(columns):
        for j in range(p + 1):
            face = path[:j] + path[j + 1:]
            sign = -1 if j % 2 else 1
            if paths.is_allowed(face):
                delta_rows[paths.position(p - 1, face)][col] += sign
            else:
                entry = nabla_entries.setdefault(face, {})
                entry[col] = entry.get(col, 0) + sign

    # Faces whose contributions cancel leave no row behind.
    faces = sorted(face for face, entry in nabla_entries.items() if any(entry.values()))
    nabla_rows = []
    for face in faces:
        row = [0] * len(columns)
        for col, value in nabla_entries[face].items():
            row[col] = value
        nabla_rows.append(row)

    return BoundaryBlocks(
        p=p,
        delta=ExactMatrix._trusted(len(delta_rows), len(columns), delta_rows, Ring.INTEGER),
        nabla=ExactMatrix._trusted(len(nabla_rows), len(columns), nabla_rows, Ring.INTEGER),
        nabla_faces=tuple(faces),
    )


def invariant_basis(blocks: BoundaryBlocks, ring=Ring.RATIONAL) -> ExactMatrix:
    """
    Basis of the invariant p-paths: the kernel of the Nabla block.

    Over the integers the basis spans the saturated lattice of integral
    invariant paths. When Nabla has no rows (always for p <= 1) the basis is
    the identity.
    """
    ring = Ring.parse(ring)
    size = blocks.delta.cols
    if blocks.nabla.rows == 0:
        return ExactMatrix.identity(size, ring)
    if ring is Ring.INTEGER:
        return integer_kernel_basis(blocks.nabla)
    return kernel_basis(blocks.nabla)


def chain_boundary(omega_prev: ExactMatrix, delta: ExactMatrix, omega: ExactMatrix) -> ExactMatrix:
    """
    Boundary map between invariant spaces.

    Solves omega_prev @ X = delta @ omega. Every column is solvable because
    the boundary of an invariant path is invariant.

    Raises:
        InconsistentSystemError: only if the inputs are not a valid complex
    """
    ring = Ring.INTEGER if omega.ring is omega_prev.ring is Ring.INTEGER else Ring.RATIONAL
    if omega.cols == 0 or omega_prev.cols == 0:
        return ExactMatrix.zeros(omega_prev.cols, omega.cols, ring)
    image = delta @ omega
    result = solve(omega_prev, image)
    return result.to_ring(ring)


def build_path_complex(d: Digraph, p_max: int, ring=Ring.RATIONAL) -> PathComplex:
    """
    Build invariant spaces and boundary maps for dimensions 0..p_max.

    Args:
        d: Digraph (usually one pruned weak component)
        p_max: Highest path length; homology is exact up to p_max - 1
        ring: Ring.RATIONAL or Ring.INTEGER

    Returns:
        PathComplex with p_max + 1 invariant bases and boundary maps
    """
    ring = Ring.parse(ring)
    paths = enumerate_allowed(d, p_max)
    blocks = []
    omegas = []
    boundaries = []
    for p in range(p_max + 1):
        block = boundary_blocks(d, paths, p)
        omega = invariant_basis(block, ring)
        if p == 0:
            boundary = ExactMatrix.zeros(0, omega.cols, ring)
        else:
            boundary = chain_boundary(omegas[p - 1], block.delta, omega)
        blocks.append(block)
        omegas.append(omega)
        boundaries.append(boundary)
    return PathComplex(
        digraph=d,
        ring=ring,
        paths=paths,
        blocks=tuple(blocks),
        omegas=tuple(omegas),
        boundaries=tuple(boundaries),
    )


def describe(complex_: PathComplex, labels: Optional[Sequence] = None, with_paths: bool = False) -> Dict[str, Any]:
    """
    Per-dimension sizes of a complex, for debugging and --dump-paths.

    Args:
        complex_: Built path complex
        labels: External label of each vertex (default: the indices)
        with_paths: Also list the allowed paths of every dimension
    """
    dimensions = []
    for p in range(complex_.p_max + 1):
        entry = {
            "p": p,
            "allowed": complex_.paths.count(p),
            "nabla_rows": complex_.blocks[p].nabla.rows,
            "invariant": complex_.omega_dim(p),
            "boundary_rank": rank(complex_.boundary(p)),
        }
        if with_paths:
            entry["paths"] = [
                [labels[v] if labels is not None else v for v in path] for path in complex_.paths.paths[p]
            ]
        dimensions.append(entry)
    return {
        "vertices": complex_.digraph.n,
        "arcs": len(complex_.digraph.arcs),
        "ring": complex_.ring.value,
        "dimensions": dimensions,
    }

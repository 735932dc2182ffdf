"""
Exact linear algebra over the rationals and the integers.

Matrices hold Python ints and fractions.Fraction values only; floats are
rejected on construction. Elimination is fraction-free: rows are scaled to
integers and kept primitive (content divided out), so intermediate growth
stays bounded and no rounding ever happens.

Provided operations:
- rank (fraction-free Bareiss elimination)
- kernel_basis (rational kernel from the reduced row echelon form)
- integer_kernel_basis (saturated lattice kernel in Hermite normal form)
- solve (exact A X = B, raising InconsistentSystemError off the column span)
- smith_normal_form (invariant factors, optionally with unimodular transforms)
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pathhom.errors import InconsistentSystemError, UsageError

Scalar = Union[int, Fraction]


class Ring(str, Enum):
    RATIONAL = "rational"
    INTEGER = "integer"

    @classmethod
    def parse(cls, value) -> "Ring":
        """Accept a Ring, 'q'/'rational' or 'z'/'integer'."""
        if isinstance(value, Ring):
            return value
        key = str(value).strip().lower()
        if key in ("q", "rational", "rationals"):
            return cls.RATIONAL
        if key in ("z", "integer", "integers"):
            return cls.INTEGER
        raise UsageError(f"unknown ring {value!r}; expected 'q' or 'z'", error_code="UNKNOWN_RING")


def _exact(value) -> Scalar:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        raise TypeError(f"floating-point entry {value!r} is not exact")
    if not isinstance(value, Fraction):
        value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


def _ratio(num: int, den: int) -> Scalar:
    if num % den == 0:
        return num // den
    return Fraction(num, den)


@dataclass(frozen=True)
class ExactMatrix:
    """
    Dense exact matrix.

    Entries are ints or Fractions in lowest terms (integral values are stored
    as ints). An INTEGER matrix holds ints only.
    """
    rows: int
    cols: int
    entries: Tuple[Tuple[Scalar, ...], ...]
    ring: Ring = Ring.RATIONAL

    def __post_init__(self):
        ring = Ring.parse(self.ring)
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")
        entries = tuple(tuple(_exact(x) for x in row) for row in self.entries)
        if ring is Ring.INTEGER and any(isinstance(x, Fraction) for row in entries for x in row):
            raise ValueError("integer matrix has a non-integral entry")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def _trusted(cls, rows: int, cols: int, entries, ring: Ring) -> "ExactMatrix":
        # Internal constructor for entries that are already normalized.
        matrix = object.__new__(cls)
        object.__setattr__(matrix, "rows", rows)
        object.__setattr__(matrix, "cols", cols)
        object.__setattr__(matrix, "entries", tuple(tuple(row) for row in entries))
        object.__setattr__(matrix, "ring", ring)
        return matrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ring=Ring.RATIONAL, cols: Optional[int] = None) -> "ExactMatrix":
        rows = [tuple(row) for row in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols is required for a matrix without rows")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows), Ring.parse(ring))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int, ring=Ring.RATIONAL) -> "ExactMatrix":
        columns = [tuple(c) for c in columns]
        entries = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(rows, len(columns), entries, Ring.parse(ring))

    @classmethod
    def zeros(cls, rows: int, cols: int, ring=Ring.RATIONAL) -> "ExactMatrix":
        return cls._trusted(rows, cols, ([0] * cols for _ in range(rows)), Ring.parse(ring))

    @classmethod
    def identity(cls, n: int, ring=Ring.RATIONAL) -> "ExactMatrix":
        return cls._trusted(n, n, ([int(i == j) for j in range(n)] for i in range(n)), Ring.parse(ring))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[Scalar, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> List[List[Scalar]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._trusted(self.cols, self.rows, self.columns(), self.ring)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def is_integral(self) -> bool:
        return not any(isinstance(x, Fraction) for row in self.entries for x in row)

    def to_ring(self, ring) -> "ExactMatrix":
        ring = Ring.parse(ring)
        if ring is Ring.INTEGER and not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return ExactMatrix._trusted(self.rows, self.cols, self.entries, ring)

    def select_columns(self, indices: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted(
            self.rows, len(indices), ([row[j] for j in indices] for row in self.entries), self.ring
        )

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ValueError(f"cannot stack {self.shape} next to {other.shape}")
        ring = Ring.INTEGER if self.ring is other.ring is Ring.INTEGER else Ring.RATIONAL
        return ExactMatrix._trusted(
            self.rows, self.cols + other.cols, (a + b for a, b in zip(self.entries, other.entries)), ring
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        product = []
        for row in self.entries:
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in enumerate(other.entries[k]):
                    if b:
                        acc[j] += a * b
            product.append([_exact(x) for x in acc])
        ring = Ring.INTEGER if self.ring is other.ring is Ring.INTEGER else Ring.RATIONAL
        return ExactMatrix._trusted(self.rows, other.cols, product, ring)


@dataclass(frozen=True)
class SmithForm:
    """
    Smith normal form of an integer matrix.

    ``factors`` are the nonzero diagonal entries d1 | d2 | ... (all positive).
    When transforms were requested, ``left @ M @ right`` is the diagonal form.
    """
    factors: Tuple[int, ...]
    rank: int
    left: Optional[ExactMatrix] = None
    right: Optional[ExactMatrix] = None

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(f for f in self.factors if f > 1)


def _integer_row(row: Iterable[Scalar]) -> List[int]:
    row = list(row)
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    if den == 1:
        return row
    return [int(x * den) for x in row]


def _primitive(row: List[int]) -> List[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def _combine(row: List[int], factor: int, other: List[int]) -> List[int]:
    return [x - factor * y for x, y in zip(row, other)]


def _bareiss_rank(rows: List[List[int]], ncols: int) -> int:
    a = [list(row) for row in rows if any(row)]
    m = len(a)
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == m:
            break
        pivot = next((i for i in range(rank, m) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        prow = a[rank]
        p = prow[col]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[col]
            for j in range(col + 1, ncols):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def _gauss_jordan(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    """
    Fraction-free reduced echelon form, pivoting only in the first ``ncols`` columns.

    Returns the transformed rows (pivot rows first, in pivot order) and the
    pivot columns. Rows after the pivot rows are zero in the first ``ncols``
    columns.
    """
    a = list(rows)
    m = len(a)
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        prow = a[r]
        p = prow[col]
        for i in range(m):
            if i == r:
                continue
            f = a[i][col]
            if not f:
                continue
            g = gcd(p, f)
            a[i] = _primitive([(p // g) * x - (f // g) * y for x, y in zip(a[i], prow)])
        pivots.append(col)
        r += 1
    return a, pivots


def _hermite_rows(rows: List[List[int]], ncols: int) -> List[List[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows``."""
    a = [list(row) for row in rows]
    m = len(a)
    r = 0
    for col in range(ncols):
        if r == m:
            break
        found = False
        while True:
            nonzero = [i for i in range(r, m) if a[i][col]]
            if not nonzero:
                break
            found = True
            i0 = min(nonzero, key=lambda i: abs(a[i][col]))
            a[r], a[i0] = a[i0], a[r]
            p = a[r][col]
            clean = True
            for i in range(r + 1, m):
                f = a[i][col]
                if f:
                    a[i] = _combine(a[i], f // p, a[r])
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        p = a[r][col]
        for i in range(r):
            q = a[i][col] // p
            if q:
                a[i] = _combine(a[i], q, a[r])
        r += 1
    return a[:r]


def rank(m: ExactMatrix) -> int:
    """Exact rank (identical over Q and Z)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return _bareiss_rank([_integer_row(row) for row in m.entries], m.cols)


def pivot_columns(m: ExactMatrix) -> List[int]:
    """
    Indices of the columns that are independent of the columns before them.

    These are the pivot columns of the reduced row echelon form.
    """
    if m.rows == 0 or m.cols == 0:
        return []
    _, pivots = _gauss_jordan([_integer_row(row) for row in m.entries if any(row)], m.cols)
    return pivots


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """
    Rational kernel basis of ``m`` as the columns of a cols x k matrix.

    One basis vector per free column of the reduced row echelon form, with a
    1 in that free position.
    """
    if m.rows == 0:
        return ExactMatrix.identity(m.cols)
    reduced, pivots = _gauss_jordan([_integer_row(row) for row in m.entries if any(row)], m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vector: List[Scalar] = [0] * m.cols
        vector[free] = 1
        for i, col in enumerate(pivots):
            if reduced[i][free]:
                vector[col] = _ratio(-reduced[i][free], reduced[i][col])
        basis.append(vector)
    return ExactMatrix._trusted(m.cols, len(basis), zip(*basis) if basis else ([] for _ in range(m.cols)),
                                Ring.RATIONAL)


def integer_kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """
    Basis of the lattice Z^cols ∩ ker(m), returned as columns.

    Column operations reduce ``m`` to echelon form while the same unimodular
    operations are applied to an identity matrix; its trailing columns span
    the kernel lattice. The result is put in Hermite normal form so that it
    does not depend on the elimination order.
    """
    c = m.cols
    rows = [_integer_row(row) for row in m.entries if any(row)]
    work = [[row[j] for row in rows] for j in range(c)]
    transform = [[int(i == j) for i in range(c)] for j in range(c)]
    k = 0
    for i in range(len(rows)):
        if k == c:
            break
        while True:
            nonzero = [j for j in range(k, c) if work[j][i]]
            if not nonzero:
                break
            j0 = min(nonzero, key=lambda j: abs(work[j][i]))
            work[k], work[j0] = work[j0], work[k]
            transform[k], transform[j0] = transform[j0], transform[k]
            p = work[k][i]
            clean = True
            for j in range(k + 1, c):
                f = work[j][i]
                if f:
                    q = f // p
                    work[j] = _combine(work[j], q, work[k])
                    transform[j] = _combine(transform[j], q, transform[k])
                    if work[j][i]:
                        clean = False
            if clean:
                k += 1
                break
    basis = _hermite_rows(transform[k:], c)
    return ExactMatrix._trusted(c, len(basis), zip(*basis) if basis else ([] for _ in range(c)), Ring.INTEGER)


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """
    Solve A X = B exactly.

    Free variables are set to zero, so the solution is unique whenever A has
    full column rank.

    Args:
        a: Coefficient matrix (m x n)
        b: Right-hand sides (m x k)

    Returns:
        X (n x k); an INTEGER matrix when A and B are integer and X is integral

    Raises:
        InconsistentSystemError: some column of B is not in the column span of A
    """
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    both_integer = a.ring is b.ring is Ring.INTEGER
    if b.cols == 0:
        return ExactMatrix.zeros(a.cols, 0, Ring.INTEGER if both_integer else Ring.RATIONAL)

    augmented = [_integer_row(list(ra) + list(rb)) for ra, rb in zip(a.entries, b.entries)]
    reduced, pivots = _gauss_jordan(augmented, a.cols)

    bad = [j for row in reduced[len(pivots):] for j in range(b.cols) if row[a.cols + j]]
    if bad:
        raise InconsistentSystemError(min(bad))

    x: List[List[Scalar]] = [[0] * b.cols for _ in range(a.cols)]
    for i, col in enumerate(pivots):
        row = reduced[i]
        for j in range(b.cols):
            if row[a.cols + j]:
                x[col][j] = _ratio(row[a.cols + j], row[col])

    result = ExactMatrix._trusted(a.cols, b.cols, x, Ring.RATIONAL)
    if both_integer and result.is_integral():
        return result.to_ring(Ring.INTEGER)
    return result


def smith_normal_form(m: ExactMatrix, transforms: bool = False) -> SmithForm:
    """
    Invariant factors of an integer matrix.

    Args:
        m: Matrix with integral entries (either ring tag)
        transforms: Also return unimodular U, V with U @ m @ V diagonal

    Returns:
        SmithForm with positive factors, each dividing the next
    """
    if not m.is_integral():
        raise ValueError("Smith normal form needs an integer matrix")
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    left = [[int(i == j) for j in range(r)] for i in range(r)] if transforms else None
    right = [[int(i == j) for j in range(c)] for i in range(c)] if transforms else None

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if left is not None:
            left[t], left[i] = left[i], left[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            if right is not None:
                for row in right:
                    row[t], row[j] = row[j], row[t]

        p = a[t][t]
        dirty = False
        for i in range(t + 1, r):
            f = a[i][t]
            if f:
                q = f // p
                a[i] = _combine(a[i], q, a[t])
                if left is not None:
                    left[i] = _combine(left[i], q, left[t])
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, c):
            f = a[t][j]
            if f:
                q = f // p
                for row in a:
                    row[j] -= q * row[t]
                if right is not None:
                    for row in right:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue

        # Every remaining entry must be a multiple of the pivot.
        offender = next(
            (i for i in range(t + 1, r) if any(a[i][j] % p for j in range(t + 1, c))), None
        )
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            if left is not None:
                left[t] = [x + y for x, y in zip(left[t], left[offender])]
            continue

        if p < 0:
            a[t] = [-x for x in a[t]]
            if left is not None:
                left[t] = [-x for x in left[t]]
        t += 1

    factors = tuple(a[i][i] for i in range(t))
    if not transforms:
        return SmithForm(factors=factors, rank=t)
    return SmithForm(
        factors=factors,
        rank=t,
        left=ExactMatrix._trusted(r, r, left, Ring.INTEGER),
        right=ExactMatrix._trusted(c, c, right, Ring.INTEGER),
    )

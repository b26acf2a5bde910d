"""Exact rational linear algebra and ordered-index bookkeeping.

Everything here runs over Fraction; no floats anywhere.  Echelon forms and
determinants use fraction-free (Bareiss) elimination on denominator-cleared
integer rows, and pivots are always the first nonzero entry in scan order,
so repeated runs yield byte-identical bases.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

Vector = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Coerce int, str ("a/b" or "a"), or Fraction to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "a/b", or "a" when the denominator is 1."""
    return str(value)


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct comparables."""
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def shuffle_sign(a: Sequence[int], b: Sequence[int]):
    """Merge two strictly increasing index tuples.

    Returns (sign, merged) where sign is the parity of the interleaving, or
    None if the tuples share an element.
    """
    out = []
    inv = 0
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining entries of a
            inv += len(a) - i
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inv % 2 else 1), tuple(out)


class QMatrix:
    """Immutable dense matrix over Fraction. Rows may be empty; pass ncols
    explicitly for matrices with zero rows."""

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: Optional[int] = None):
        data = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
            ncols = width
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "QMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: Optional[int] = None) -> "QMatrix":
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            nrows = 0
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(nrows)],
                   ncols=len(cols))

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.nrows))

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.data[i][j] for i in range(self.nrows)]
                        for j in range(self.ncols)], ncols=self.nrows)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.data, other.data)], ncols=self.ncols)

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-x for x in r] for r in self.data], ncols=self.ncols)

    def scale(self, c) -> "QMatrix":
        c = as_fraction(c)
        return QMatrix([[c * x for x in r] for r in self.data], ncols=self.ncols)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return QMatrix(
            [[sum((self.data[i][k] * other.data[k][j] for k in range(self.ncols)),
                  Fraction(0)) for j in range(other.ncols)]
             for i in range(self.nrows)],
            ncols=other.ncols)

    def matvec(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError("length mismatch")
        vv = [as_fraction(x) for x in v]
        return tuple(sum((r[k] * vv[k] for k in range(self.ncols)), Fraction(0))
                     for r in self.data)

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.ncols:
            raise ValueError("width mismatch")
        return QMatrix(self.data + other.data, ncols=self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.ncols == other.ncols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.ncols, self.data))

    def __repr__(self) -> str:
        return f"QMatrix({[[str(x) for x in r] for r in self.data]}, ncols={self.ncols})"

    def to_json_obj(self):
        return [[rat_str(x) for x in row] for row in self.data]


def _int_rows(m: QMatrix) -> list[list[int]]:
    """Clear denominators row by row. Row scaling preserves row space, rank,
    kernel, and pivot positions."""
    out = []
    for row in m.data:
        mult = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * mult) for x in row])
    return out


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """In-place fraction-free echelon reduction; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                rows[i][j] = (rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]) // prev
            rows[i][c] = 0
        prev = rows[r][c]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: QMatrix) -> tuple[list[Vector], tuple[int, ...]]:
    """Reduced row echelon form with unit pivots; deterministic."""
    rows, pivots = _bareiss_echelon(_int_rows(m))
    reduced = [[Fraction(x) for x in rows[r]] for r in range(len(pivots))]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        inv = Fraction(1, 1) / reduced[r][c]
        reduced[r] = [x * inv for x in reduced[r]]
        for i in range(r):
            f = reduced[i][c]
            if f:
                reduced[i] = [a - f * b for a, b in zip(reduced[i], reduced[r])]
    return [tuple(row) for row in reduced], tuple(pivots)


def rank(m: QMatrix) -> int:
    _, pivots = _bareiss_echelon(_int_rows(m))
    return len(pivots)


def det(m: QMatrix) -> Fraction:
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if m.nrows == 0:
        return Fraction(1)
    scale = Fraction(1)
    rows = []
    for row in m.data:
        mult = lcm(*(x.denominator for x in row))
        scale *= mult
        rows.append([int(x * mult) for x in row])
    n = m.nrows
    sign = 1
    prev = 1
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                rows[i][j] = (rows[c][c] * rows[i][j] - rows[i][c] * rows[c][j]) // prev
            rows[i][c] = 0
        prev = rows[c][c]
    return Fraction(sign * rows[n - 1][n - 1], 1) / scale


def kernel_basis(m: QMatrix) -> list[Vector]:
    """Basis of the right kernel; one vector per free column, unit at the
    free position, in increasing column order."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(tuple(v))
    return basis


def solve(m: QMatrix, b: Sequence) -> Optional[Vector]:
    """One exact solution of m x = b with free variables set to 0, or None."""
    target = [as_fraction(x) for x in b]
    if len(target) != m.nrows:
        raise ValueError("length mismatch")
    aug = QMatrix([list(row) + [target[i]] for i, row in enumerate(m.data)],
                  ncols=m.ncols + 1)
    reduced, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [Fraction(0)] * m.ncols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][m.ncols]
    return tuple(x)


def span_rank(vectors: Sequence[Sequence], length: int) -> int:
    return rank(QMatrix(vectors, ncols=length))


def in_span(vectors: Sequence[Sequence], v: Sequence, length: int) -> bool:
    base = span_rank(vectors, length)
    return span_rank(list(vectors) + [list(v)], length) == base


def quotient_dim(sub: Sequence[Sequence], ambient: Sequence[Sequence], length: int) -> int:
    """dim(span(ambient) / span(sub)); raises if sub is not contained."""
    ra = span_rank(ambient, length)
    if span_rank(list(ambient) + list(sub), length) != ra:
        raise ValueError("subspace is not contained in the ambient span")
    return ra - span_rank(sub, length)


def extend_basis(sub: Sequence[Vector], vectors: Sequence[Vector],
                 length: int) -> list[Vector]:
    """Pick vectors (in order) that extend span(sub) to span(sub + vectors).

    The returned representatives are a deterministic transversal basis of the
    quotient span(sub + vectors) / span(sub).
    """
    chosen: list[Vector] = []
    current = list(sub)
    r = span_rank(current, length)
    for v in vectors:
        if span_rank(current + [v], length) > r:
            chosen.append(tuple(as_fraction(x) for x in v))
            current.append(v)
            r += 1
    return chosen

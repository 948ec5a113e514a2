"""Sparse exact linear algebra over the rationals.

Everything downstream (differentials, coproducts, connection data) is
eventually a matrix with Fraction entries, and every answer the package
gives is a rank, a kernel, or a choice of coset representatives.  This
module is the only place elimination happens, so determinism lives here:
reduced row echelon form is canonical, and every basis or representative
we hand out is derived from it in a fixed order.

Floats are rejected loudly.  If you have measured data, this is the wrong
tool; if you have exact data, losing it to binary rounding is a bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class ExactLinError(Exception):
    """Base class for errors raised by this module."""


class InexactInputError(ExactLinError):
    """A scalar was not exactly representable (e.g. a float)."""


class NonComposableError(ExactLinError):
    """Matrix shapes do not line up for the requested operation."""


class NotAComplexError(ExactLinError):
    """Composite of consecutive differentials is nonzero."""


def as_scalar(value) -> Fraction:
    """Coerce to Fraction, rejecting anything that is not exact."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise InexactInputError(
        f"expected an int or Fraction, got {type(value).__name__}: {value!r}"
    )


def scalar_to_str(q: Fraction) -> str:
    """Serialize exactly: 'p' for integers, 'p/q' otherwise."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def scalar_from_str(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InexactInputError(f"not an exact rational literal: {text!r}") from exc


def vec_is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise NonComposableError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise NonComposableError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, v: Sequence[Fraction]) -> Vector:
    c = as_scalar(c)
    return tuple(c * x for x in v)


class Matrix:
    """Immutable sparse matrix over the rationals.

    Entries are stored as a dict {(row, col): Fraction} holding only the
    nonzero positions.  Shapes with zero rows or zero columns are legal
    and common (empty graded pieces), so nothing here assumes rows*cols
    is positive.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), value in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside shape ({rows}, {cols})")
                q = as_scalar(value)
                if q != 0:
                    clean[(i, j)] = q
        self.entries = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        nrows = len(data)
        if cols is None:
            cols = len(data[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError(f"row {i} has length {len(row)}, expected {cols}")
            for j, value in enumerate(row):
                q = as_scalar(value)
                if q != 0:
                    entries[(i, j)] = q
        return cls(nrows, cols, entries)

    @classmethod
    def from_cols(cls, data: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        ncols = len(data)
        if rows is None:
            rows = len(data[0]) if ncols else 0
        entries = {}
        for j, col in enumerate(data):
            if len(col) != rows:
                raise ValueError(f"column {j} has length {len(col)}, expected {rows}")
            for i, value in enumerate(col):
                q = as_scalar(value)
                if q != 0:
                    entries[(i, j)] = q
        return cls(rows, ncols, entries)

    # -- access ------------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), ZERO)

    def row_dict(self, i: int) -> dict[int, Fraction]:
        return {j: v for (r, j), v in self.entries.items() if r == i}

    def col_vector(self, j: int) -> Vector:
        col = [ZERO] * self.rows
        for (i, c), v in self.entries.items():
            if c == j:
                col[i] = v
        return tuple(col)

    def to_rows(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    # -- arithmetic --------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise NonComposableError(f"cannot add {self.shape} and {other.shape}")
        entries = dict(self.entries)
        for key, v in other.entries.items():
            s = entries.get(key, ZERO) + v
            if s == 0:
                entries.pop(key, None)
            else:
                entries[key] = s
        return Matrix(self.rows, self.cols, entries)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        if c == 0:
            return Matrix(self.rows, self.cols)
        return Matrix(
            self.rows, self.cols, {key: c * v for key, v in self.entries.items()}
        )

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise NonComposableError(
                f"cannot compose {self.shape} with {other.shape}"
            )
        # bucket the right factor by row so the product walks nonzeros only
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), w in other.entries.items():
            by_row.setdefault(k, []).append((j, w))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                key = (i, j)
                s = acc.get(key, ZERO) + v * w
                if s == 0:
                    acc.pop(key, None)
                else:
                    acc[key] = s
        return Matrix(self.rows, other.cols, acc)

    def apply(self, vec: Sequence[Fraction]) -> Vector:
        if len(vec) != self.cols:
            raise NonComposableError(
                f"matrix has {self.cols} columns, vector has length {len(vec)}"
            )
        out = [ZERO] * self.rows
        for (i, j), v in self.entries.items():
            x = vec[j]
            if x != 0:
                out[i] += v * x
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    @staticmethod
    def hstack(blocks: Sequence["Matrix"]) -> "Matrix":
        if not blocks:
            raise ValueError("hstack of nothing")
        rows = blocks[0].rows
        entries = {}
        offset = 0
        for b in blocks:
            if b.rows != rows:
                raise NonComposableError("hstack row mismatch")
            for (i, j), v in b.entries.items():
                entries[(i, j + offset)] = v
            offset += b.cols
        return Matrix(rows, offset, entries)

    @staticmethod
    def vstack(blocks: Sequence["Matrix"]) -> "Matrix":
        if not blocks:
            raise ValueError("vstack of nothing")
        cols = blocks[0].cols
        entries = {}
        offset = 0
        for b in blocks:
            if b.cols != cols:
                raise NonComposableError("vstack column mismatch")
            for (i, j), v in b.entries.items():
                entries[(i + offset, j)] = v
            offset += b.rows
        return Matrix(offset, cols, entries)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


# -- elimination -----------------------------------------------------
#
# Reduced row echelon form is unique, so everything derived from it
# (pivot set, kernel basis, solve output) is canonical no matter how we
# pick pivots.  Columns are processed left to right; within a column the
# pivot row is the one with the smallest |numerator|, then smallest
# denominator, then lowest original position.  That choice only limits
# coefficient growth, it cannot change the answer.


def _axpy(target: dict[int, Fraction], coeff: Fraction, source: dict[int, Fraction]):
    # target += coeff * source, in place, dropping zeros
    for j, v in source.items():
        s = target.get(j, ZERO) + coeff * v
        if s == 0:
            target.pop(j, None)
        else:
            target[j] = s


def _rref_rows(
    row_dicts: Iterable[dict[int, Fraction]], cols: int
) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Return (reduced rows ordered by pivot column, pivot columns)."""
    work = [dict(r) for r in row_dicts if r]
    reduced: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    for c in range(cols):
        if not work:
            break
        best = None
        for k, r in enumerate(work):
            v = r.get(c)
            if v is None:
                continue
            key = (abs(v.numerator), v.denominator, k)
            if best is None or key < best[0]:
                best = (key, k)
        if best is None:
            continue
        piv = work.pop(best[1])
        inv = ONE / piv[c]
        piv = {j: inv * v for j, v in piv.items()}
        for r in work:
            v = r.get(c)
            if v is not None:
                _axpy(r, -v, piv)
        for r in reduced:
            v = r.get(c)
            if v is not None:
                _axpy(r, -v, piv)
        work = [r for r in work if r]
        reduced.append(piv)
        pivots.append(c)
    return reduced, pivots


def rref(m: Matrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    row_dicts: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in m.entries.items():
        row_dicts.setdefault(i, {})[j] = v
    return _rref_rows(row_dicts.values(), m.cols)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullity(m: Matrix) -> int:
    return m.cols - rank(m)


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical kernel basis: one vector per free column, in column order.

    The vector for free column f has a 1 at f and minus the reduced row
    entry at each pivot column.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        vec = [ZERO] * m.cols
        vec[f] = ONE
        for p, row in zip(pivots, reduced):
            v = row.get(f)
            if v is not None:
                vec[p] = -v
        basis.append(tuple(vec))
    return basis


def image_basis(m: Matrix) -> list[Vector]:
    """Columns of m at the pivot positions of its RREF (canonical)."""
    _, pivots = rref(m)
    return [m.col_vector(j) for j in pivots]


def solve(m: Matrix, b: Sequence[Fraction]) -> Vector | None:
    """One solution of m x = b, or None.  Free variables are set to 0."""
    if len(b) != m.rows:
        raise NonComposableError(
            f"matrix has {m.rows} rows, right side has length {len(b)}"
        )
    row_dicts: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in m.entries.items():
        row_dicts.setdefault(i, {})[j] = v
    for i, value in enumerate(b):
        q = as_scalar(value)
        if q != 0:
            row_dicts.setdefault(i, {})[m.cols] = q
    reduced, pivots = _rref_rows(row_dicts.values(), m.cols + 1)
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for p, row in zip(pivots, reduced):
        x[p] = row.get(m.cols, ZERO)
    return tuple(x)


class _Span:
    """Incremental echelon span for independence tests.

    Rows are kept keyed by leading index.  Not reduced (membership and
    independence do not need back-substitution).
    """

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _residual(self, vec: Sequence[Fraction]) -> dict[int, Fraction]:
        r = {j: as_scalar(v) for j, v in enumerate(vec) if v != 0}
        while r:
            lead = min(r)
            row = self.rows.get(lead)
            if row is None:
                return r
            _axpy(r, -r[lead], row)
        return r

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not self._residual(vec)

    def add(self, vec: Sequence[Fraction]) -> bool:
        """Insert if independent; return True when the span grew."""
        r = self._residual(vec)
        if not r:
            return False
        lead = min(r)
        inv = ONE / r[lead]
        self.rows[lead] = {j: inv * v for j, v in r.items()}
        return True


class Subspace:
    """Subspace of a coordinate space, held in canonical (RREF) form."""

    def __init__(self, ambient: int, vectors: Iterable[Sequence[Fraction]] = ()):
        self.ambient = ambient
        row_dicts = []
        for vec in vectors:
            vec = tuple(vec)
            if len(vec) != ambient:
                raise NonComposableError(
                    f"vector length {len(vec)} in ambient dimension {ambient}"
                )
            row_dicts.append({j: as_scalar(v) for j, v in enumerate(vec) if v != 0})
        self._rows, self._pivots = _rref_rows(row_dicts, ambient)

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def basis(self) -> list[Vector]:
        out = []
        for row in self._rows:
            vec = [ZERO] * self.ambient
            for j, v in row.items():
                vec[j] = v
            out.append(tuple(vec))
        return out

    def reduce(self, vec: Sequence[Fraction]) -> Vector:
        """Canonical coset representative of vec modulo this subspace."""
        if len(vec) != self.ambient:
            raise NonComposableError(
                f"vector length {len(vec)} in ambient dimension {self.ambient}"
            )
        r = {j: as_scalar(v) for j, v in enumerate(vec) if v != 0}
        for p, row in zip(self._pivots, self._rows):
            v = r.get(p)
            if v is not None:
                _axpy(r, -v, row)
        out = [ZERO] * self.ambient
        for j, v in r.items():
            out[j] = v
        return tuple(out)

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return vec_is_zero(self.reduce(vec))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._rows == other._rows

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


@dataclass(frozen=True)
class CohomologySlice:
    """Kernel-mod-image data at one spot of a complex.

    representatives: cocycles projecting to a basis of the quotient,
    chosen canonically (first kernel basis vectors independent modulo
    the boundaries).
    """

    dim: int
    ambient: int
    representatives: tuple[Vector, ...]
    cycle_dim: int
    boundary_dim: int
    _cycles: tuple[Vector, ...]
    _boundaries: tuple[Vector, ...]

    def express(self, vec: Sequence[Fraction]) -> Vector | None:
        """Coordinates of a cocycle in the representative basis, or None.

        None means: not in the span of cycles at all (not a cocycle).
        A coboundary comes back as the zero tuple.
        """
        if len(vec) != self.ambient:
            raise NonComposableError(
                f"vector length {len(vec)} in ambient dimension {self.ambient}"
            )
        columns = list(self.representatives) + list(self._boundaries)
        m = Matrix.from_cols(columns, rows=self.ambient)
        x = solve(m, vec)
        if x is None:
            return None
        return tuple(x[: self.dim])


def cohomology_at(d_in: Matrix, d_out: Matrix) -> CohomologySlice:
    """Cohomology at the middle of  prev --d_in--> here --d_out--> next.

    Raises NotAComplexError unless d_out * d_in = 0.
    """
    if d_out.cols != d_in.rows:
        raise NonComposableError(
            f"d_in lands in dimension {d_in.rows}, d_out starts at {d_out.cols}"
        )
    if not (d_out * d_in).is_zero():
        raise NotAComplexError("d_out * d_in != 0")
    cycles = kernel_basis(d_out)
    boundaries = image_basis(d_in)
    span = _Span()
    for b in boundaries:
        span.add(b)
    reps = [z for z in cycles if span.add(z)]
    dim = len(cycles) - len(boundaries)
    if dim != len(reps):
        raise ExactLinError("representative count disagrees with rank count")
    return CohomologySlice(
        dim=dim,
        ambient=d_out.cols,
        representatives=tuple(reps),
        cycle_dim=len(cycles),
        boundary_dim=len(boundaries),
        _cycles=tuple(cycles),
        _boundaries=tuple(boundaries),
    )

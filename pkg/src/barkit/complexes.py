"""Graded spaces, graded maps, complexes and double complexes.

Bases are labeled: a graded space is a degree-indexed family of ordered
label lists, and all matrices downstream are expressed in those orders.
Labels can be any hashable value; modules higher up use tuples that
describe the basis element (an index word, a tensor pair, and so on),
which keeps reports readable and lookups cheap.

Sign conventions used throughout the package live here:

- sign_pow(k) is (-1)^k;
- a tensor product of maps picks up (-1)^{deg(second map) * deg(first
  argument)} when the second map crosses the first tensor factor;
- the differential on a tensor product is d(x) ⊗ y + (-1)^{deg x} x ⊗ d(y);
- a degree p map f between complexes has differential
  D(f) = d_target ∘ f - (-1)^p f ∘ d_source;
- the total differential of a double complex twists the outer (first
  index) differential by (-1)^{inner degree}, and the two directions are
  required to commute;
- shifting a complex moves degrees (shift(i) puts old degree i+j in new
  degree j) and leaves the differential untouched.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .exactlin import (
    Matrix,
    NonComposableError,
    NotAComplexError,
    Vector,
    ZERO,
    as_scalar,
    cohomology_at,
    CohomologySlice,
)

Label = Hashable

# Degrees live in a bounded window so runaway constructions fail loudly
# instead of looping.  Adjust DEGREE_BOUND before building if a legitimate
# instance needs more room.
DEGREE_BOUND = 16


class DegreeWindowError(Exception):
    """A graded component fell outside the allowed degree window."""


def sign_pow(k: int) -> int:
    return -1 if k & 1 else 1


def koszul_swap_sign(deg_a: int, deg_b: int) -> int:
    """Sign for exchanging adjacent factors of the given degrees."""
    return sign_pow(deg_a * deg_b)


class GradedSpace:
    """Finite dimensional graded vector space with ordered labeled bases."""

    def __init__(self, basis_by_degree: dict[int, Sequence[Label]]):
        self._basis: dict[int, tuple[Label, ...]] = {}
        self._index: dict[int, dict[Label, int]] = {}
        for n, labels in basis_by_degree.items():
            labels = tuple(labels)
            if not labels:
                continue
            if abs(n) > DEGREE_BOUND:
                raise DegreeWindowError(
                    f"degree {n} outside the window [-{DEGREE_BOUND}, {DEGREE_BOUND}]"
                )
            lookup = {lab: i for i, lab in enumerate(labels)}
            if len(lookup) != len(labels):
                raise ValueError(f"duplicate basis label in degree {n}")
            self._basis[n] = labels
            self._index[n] = lookup

    @classmethod
    def empty(cls) -> "GradedSpace":
        return cls({})

    def degrees(self) -> list[int]:
        return sorted(self._basis)

    def dim(self, n: int) -> int:
        return len(self._basis.get(n, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self._basis.values())

    def basis(self, n: int) -> tuple[Label, ...]:
        return self._basis.get(n, ())

    def index_of(self, n: int, label: Label) -> int:
        try:
            return self._index[n][label]
        except KeyError:
            raise KeyError(f"no basis label {label!r} in degree {n}") from None

    def has(self, n: int, label: Label) -> bool:
        return label in self._index.get(n, {})

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self._basis == other._basis

    def __repr__(self):
        dims = {n: self.dim(n) for n in self.degrees()}
        return f"GradedSpace({dims})"


def tensor_space(left: GradedSpace, right: GradedSpace) -> GradedSpace:
    """Tensor product; basis labels are (left label, right label) pairs.

    At each total degree the order is left-degree ascending, then left
    basis order, then right basis order.
    """
    basis: dict[int, list[Label]] = {}
    for m in left.degrees():
        for n in right.degrees():
            labels = basis.setdefault(m + n, [])
            for a in left.basis(m):
                for b in right.basis(n):
                    labels.append((a, b))
    return GradedSpace(basis)


class GradedMap:
    """Degree-homogeneous linear map between graded spaces.

    Blocks are matrices source degree n -> target degree n + shift.
    Missing blocks are zero.
    """

    def __init__(
        self,
        source: GradedSpace,
        target: GradedSpace,
        shift: int,
        blocks: dict[int, Matrix] | None = None,
    ):
        self.source = source
        self.target = target
        self.shift = shift
        self._blocks: dict[int, Matrix] = {}
        if blocks:
            for n, m in blocks.items():
                expected = (target.dim(n + shift), source.dim(n))
                if m.shape != expected:
                    raise NonComposableError(
                        f"block at degree {n} has shape {m.shape}, expected {expected}"
                    )
                if not m.is_zero():
                    self._blocks[n] = m

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, shift: int) -> "GradedMap":
        return cls(source, target, shift)

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(
            space,
            space,
            0,
            {n: Matrix.identity(space.dim(n)) for n in space.degrees()},
        )

    @classmethod
    def from_basis_action(
        cls,
        source: GradedSpace,
        target: GradedSpace,
        shift: int,
        action: Callable[[int, Label], Iterable[tuple[Label, Fraction]]],
    ) -> "GradedMap":
        """Build from the action on basis labels.

        action(degree, label) yields (target label, coefficient) pairs;
        target labels must exist in degree degree+shift.  Repeated labels
        accumulate.
        """
        blocks = {}
        for n in source.degrees():
            rows = target.dim(n + shift)
            entries: dict[tuple[int, int], Fraction] = {}
            for j, label in enumerate(source.basis(n)):
                for tlabel, coeff in action(n, label):
                    c = as_scalar(coeff)
                    if c == 0:
                        continue
                    i = target.index_of(n + shift, tlabel)
                    key = (i, j)
                    s = entries.get(key, ZERO) + c
                    if s == 0:
                        entries.pop(key, None)
                    else:
                        entries[key] = s
            blocks[n] = Matrix(rows, source.dim(n), entries)
        return cls(source, target, shift, blocks)

    def block(self, n: int) -> Matrix:
        b = self._blocks.get(n)
        if b is None:
            return Matrix.zero(self.target.dim(n + self.shift), self.source.dim(n))
        return b

    def nonzero_degrees(self) -> list[int]:
        return sorted(self._blocks)

    def apply_at(self, n: int, vec: Sequence[Fraction]) -> Vector:
        return self.block(n).apply(vec)

    def apply_label(self, n: int, label: Label) -> list[tuple[Label, Fraction]]:
        """Image of a basis vector, as (target label, coefficient) pairs."""
        j = self.source.index_of(n, label)
        block = self.block(n)
        out = []
        tbasis = self.target.basis(n + self.shift)
        for (i, jj), v in sorted(block.entries.items()):
            if jj == j:
                out.append((tbasis[i], v))
        return out

    def is_zero(self) -> bool:
        return not self._blocks

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_parallel(other)
        degrees = set(self._blocks) | set(other._blocks)
        return GradedMap(
            self.source,
            self.target,
            self.shift,
            {n: self.block(n) + other.block(n) for n in degrees},
        )

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + other.scale(-1)

    def scale(self, c) -> "GradedMap":
        c = as_scalar(c)
        return GradedMap(
            self.source,
            self.target,
            self.shift,
            {n: b.scale(c) for n, b in self._blocks.items()},
        )

    def compose(self, first: "GradedMap") -> "GradedMap":
        """self ∘ first (apply first, then self)."""
        if first.target is not self.source and first.target != self.source:
            raise NonComposableError("composition target/source mismatch")
        blocks = {}
        for n in first.source.degrees():
            blocks[n] = self.block(n + first.shift) * first.block(n)
        return GradedMap(
            first.source, self.target, self.shift + first.shift, blocks
        )

    def _check_parallel(self, other: "GradedMap"):
        if (
            self.shift != other.shift
            or self.source != other.source
            or self.target != other.target
        ):
            raise NonComposableError("maps are not parallel")

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.shift != other.shift:
            return False
        degrees = set(self._blocks) | set(other._blocks)
        return all(self.block(n) == other.block(n) for n in degrees)

    def __repr__(self):
        return f"GradedMap(shift {self.shift}, blocks at {self.nonzero_degrees()})"


def tensor_map(f: GradedMap, g: GradedMap, floor_space=None) -> GradedMap:
    """f ⊗ g with the crossing sign (-1)^{deg g * (degree of f's argument)}.

    Source and target are the tensor spaces of the factors (built here;
    label layout matches tensor_space).
    """
    src = tensor_space(f.source, g.source)
    dst = tensor_space(f.target, g.target)
    shift = f.shift + g.shift
    blocks: dict[int, Matrix] = {}
    # walk source bidegrees, scatter into target label positions
    entries_by_degree: dict[int, dict[tuple[int, int], Fraction]] = {}
    for m in f.source.degrees():
        fb = f.block(m)
        f_targets = f.target.basis(m + f.shift)
        f_cols: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), v in fb.entries.items():
            f_cols.setdefault(j, []).append((i, v))
        for n in g.source.degrees():
            gb = g.block(n)
            g_targets = g.target.basis(n + g.shift)
            g_cols: dict[int, list[tuple[int, Fraction]]] = {}
            for (i, j), v in gb.entries.items():
                g_cols.setdefault(j, []).append((i, v))
            cross = sign_pow(g.shift * m)
            N = m + n
            ent = entries_by_degree.setdefault(N, {})
            for ja, a in enumerate(f.source.basis(m)):
                fa = f_cols.get(ja)
                if not fa:
                    continue
                for jb, b in enumerate(g.source.basis(n)):
                    gbcol = g_cols.get(jb)
                    if not gbcol:
                        continue
                    col = src.index_of(N, (a, b))
                    for ia, va in fa:
                        for ib, vb in gbcol:
                            row = dst.index_of(
                                N + shift, (f_targets[ia], g_targets[ib])
                            )
                            key = (row, col)
                            s = ent.get(key, ZERO) + cross * va * vb
                            if s == 0:
                                ent.pop(key, None)
                            else:
                                ent[key] = s
    for N, ent in entries_by_degree.items():
        blocks[N] = Matrix(dst.dim(N + shift), src.dim(N), ent)
    return GradedMap(src, dst, shift, blocks)


def hom_differential(
    f: GradedMap, d_source: GradedMap, d_target: GradedMap
) -> GradedMap:
    """Differential of f as a degree f.shift map of complexes:
    d_target ∘ f - (-1)^{f.shift} f ∘ d_source."""
    return d_target.compose(f) - f.compose(d_source).scale(sign_pow(f.shift))


hom_d = hom_differential


# -- flattening maps to vectors (for solving linear problems in map space)


def map_support(source: GradedSpace, target: GradedSpace, shift: int) -> list[int]:
    return [
        n
        for n in source.degrees()
        if source.dim(n) > 0 and target.dim(n + shift) > 0
    ]


def map_space_dim(source: GradedSpace, target: GradedSpace, shift: int) -> int:
    return sum(
        source.dim(n) * target.dim(n + shift)
        for n in map_support(source, target, shift)
    )


def pack_map(f: GradedMap) -> Vector:
    """Flatten blocks (degree ascending, row-major) into one vector."""
    out: list[Fraction] = []
    for n in map_support(f.source, f.target, f.shift):
        b = f.block(n)
        rows = b.to_rows()
        for row in rows:
            out.extend(row)
    return tuple(out)

def unpack_map(
    source: GradedSpace, target: GradedSpace, shift: int, vec: Sequence[Fraction]
) -> GradedMap:
    blocks = {}
    pos = 0
    for n in map_support(source, target, shift):
        rows = target.dim(n + shift)
        cols = source.dim(n)
        entries = {}
        for i in range(rows):
            for j in range(cols):
                v = as_scalar(vec[pos])
                pos += 1
                if v != 0:
                    entries[(i, j)] = v
        blocks[n] = Matrix(rows, cols, entries)
    if pos != len(vec):
        raise NonComposableError(
            f"vector length {len(vec)} does not match map space dimension {pos}"
        )
    return GradedMap(source, target, shift, blocks)


class Complex:
    """Cochain complex: graded space plus a square-zero degree +1 map."""

    def __init__(self, space: GradedSpace, d: GradedMap, check: bool = True):
        if d.shift != 1:
            raise NonComposableError(f"differential has shift {d.shift}, expected 1")
        if d.source != space or d.target != space:
            raise NonComposableError("differential endpoints differ from the space")
        self.space = space
        self.d = d
        if check:
            self.validate()

    def validate(self):
        dd = self.d.compose(self.d)
        if not dd.is_zero():
            bad = dd.nonzero_degrees()
            raise NotAComplexError(f"d∘d nonzero starting at degrees {bad}")

    def degrees(self) -> list[int]:
        return self.space.degrees()

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def cohomology(self, n: int) -> CohomologySlice:
        return cohomology_at(self.d.block(n - 1), self.d.block(n))

    def cohomology_dims(self) -> dict[int, int]:
        out = {}
        lo = min(self.degrees(), default=0)
        hi = max(self.degrees(), default=0)
        for n in range(lo, hi + 1):
            h = self.cohomology(n)
            if h.dim:
                out[n] = h.dim
        return out

    def shift(self, i: int) -> "Complex":
        """Degree shift: new degree j holds old degree i + j.  The
        differential is reused without sign."""
        basis = {n - i: self.space.basis(n) for n in self.space.degrees()}
        space = GradedSpace(basis)
        blocks = {n - i: self.d.block(n) for n in self.space.degrees()}
        return Complex(space, GradedMap(space, space, 1, blocks), check=False)

    def __repr__(self):
        dims = {n: self.dim(n) for n in self.degrees()}
        return f"Complex({dims})"


def is_chain_map(f: GradedMap, source: Complex, target: Complex) -> bool:
    if f.shift != 0:
        raise NonComposableError("chain map test is for degree 0 maps")
    return hom_d(f, source.d, target.d).is_zero()


def induced_cohomology_matrix(
    f: GradedMap, source: Complex, target: Complex, n: int
) -> Matrix:
    """Matrix of H^n(f) in the canonical representative bases.

    Requires f to be a chain map; raises if a representative's image
    fails to be a cocycle in the target.
    """
    hs = source.cohomology(n)
    ht = target.cohomology(n + f.shift)
    cols = []
    for rep in hs.representatives:
        img = f.apply_at(n, rep)
        coords = ht.express(img)
        if coords is None:
            raise NotAComplexError("image of a cocycle is not a cocycle")
        cols.append(coords)
    return Matrix.from_cols(cols, rows=ht.dim)


def is_quasi_isomorphism(
    f: GradedMap, source: Complex, target: Complex, degrees: Iterable[int]
) -> bool:
    for n in degrees:
        hs = source.cohomology(n)
        ht = target.cohomology(n + f.shift)
        if hs.dim != ht.dim:
            return False
        m = induced_cohomology_matrix(f, source, target, n)
        from .exactlin import rank as _rank

        if _rank(m) != hs.dim:
            return False
    return True


class DoubleComplex:
    """Bigraded space with commuting outer (+1, 0) and inner (0, +1)
    differentials.  The total complex twists the outer one by
    (-1)^{inner degree}."""

    def __init__(
        self,
        basis: dict[tuple[int, int], Sequence[Label]],
        outer_blocks: dict[tuple[int, int], Matrix],
        inner_blocks: dict[tuple[int, int], Matrix],
        check: bool = True,
    ):
        self._basis = {pq: tuple(v) for pq, v in basis.items() if v}
        self._outer = outer_blocks
        self._inner = inner_blocks
        if check:
            self.validate()

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self._basis)

    def dim(self, p: int, q: int) -> int:
        return len(self._basis.get((p, q), ()))

    def basis(self, p: int, q: int) -> tuple[Label, ...]:
        return self._basis.get((p, q), ())

    def outer(self, p: int, q: int) -> Matrix:
        b = self._outer.get((p, q))
        if b is None:
            return Matrix.zero(self.dim(p + 1, q), self.dim(p, q))
        return b

    def inner(self, p: int, q: int) -> Matrix:
        b = self._inner.get((p, q))
        if b is None:
            return Matrix.zero(self.dim(p, q + 1), self.dim(p, q))
        return b

    def validate(self):
        for (p, q) in self.bidegrees():
            if not (self.outer(p + 1, q) * self.outer(p, q)).is_zero():
                raise NotAComplexError(f"outer² nonzero at {(p, q)}")
            if not (self.inner(p, q + 1) * self.inner(p, q)).is_zero():
                raise NotAComplexError(f"inner² nonzero at {(p, q)}")
            lhs = self.inner(p + 1, q) * self.outer(p, q)
            rhs = self.outer(p, q + 1) * self.inner(p, q)
            if lhs != rhs:
                raise NotAComplexError(f"differentials do not commute at {(p, q)}")

    def total(self) -> Complex:
        """Total complex; basis labels are (p, q, original label)."""
        basis: dict[int, list[Label]] = {}
        for (p, q) in self.bidegrees():
            labels = basis.setdefault(p + q, [])
            for lab in self.basis(p, q):
                labels.append((p, q, lab))
        space = GradedSpace(basis)

        def action(n: int, label: Label):
            p, q, lab = label
            j = self._basis[(p, q)].index(lab)
            out = []
            ib = self.inner(p, q)
            tb = self.basis(p, q + 1)
            for (i, jj), v in ib.entries.items():
                if jj == j:
                    out.append(((p, q + 1, tb[i]), v))
            ob = self.outer(p, q)
            tbo = self.basis(p + 1, q)
            tw = sign_pow(q)
            for (i, jj), v in ob.entries.items():
                if jj == j:
                    out.append(((p + 1, q, tbo[i]), tw * v))
            return out

        d = GradedMap.from_basis_action(space, space, 1, action)
        return Complex(space, d, check=True)

    def row_complex(self, q: int) -> Complex:
        """The row at inner degree q, as a complex in the outer index."""
        basis = {p: self.basis(p, q) for (p, qq) in self.bidegrees() if qq == q}
        space = GradedSpace(basis)
        blocks = {
            p: self.outer(p, q) for (p, qq) in self.bidegrees() if qq == q
        }
        return Complex(space, GradedMap(space, space, 1, blocks), check=False)

    def column_complex(self, p: int) -> Complex:
        basis = {q: self.basis(p, q) for (pp, q) in self.bidegrees() if pp == p}
        space = GradedSpace(basis)
        blocks = {
            q: self.inner(p, q) for (pp, q) in self.bidegrees() if pp == p
        }
        return Complex(space, GradedMap(space, space, 1, blocks), check=False)

    def total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q) in self.bidegrees():
            out[p + q] = out.get(p + q, 0) + self.dim(p, q)
        return out


def tensor_complex(a: Complex, b: Complex) -> Complex:
    """Tensor product of complexes, d = d_a ⊗ 1 + 1 ⊗ d_b with the
    (-1)^{left degree} crossing sign supplied by tensor_map."""
    ia = GradedMap.identity(a.space)
    ib = GradedMap.identity(b.space)
    d = tensor_map(a.d, ib) + tensor_map(ia, b.d)
    return Complex(d.source, d, check=True)


def select_subcomplex(c: Complex, keep: Callable[[int, Label], bool]) -> Complex:
    """Restrict a complex to the labels picked by keep(degree, label).

    The selection must be a direct summand in the d direction: any
    differential entry from a kept label into a dropped one raises
    NotAComplexError.  Entries out of dropped labels are discarded.
    """
    kept: dict[int, list[Label]] = {}
    kept_index: dict[int, dict[int, int]] = {}
    for n in c.space.degrees():
        rows = []
        idx = {}
        for j, lab in enumerate(c.space.basis(n)):
            if keep(n, lab):
                idx[j] = len(rows)
                rows.append(lab)
        if rows:
            kept[n] = rows
            kept_index[n] = idx
    space = GradedSpace(kept)
    blocks: dict[int, Matrix] = {}
    for n, idx in kept_index.items():
        tidx = kept_index.get(n + 1, {})
        entries: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in c.d.block(n).entries.items():
            if j not in idx:
                continue
            if i not in tidx:
                lab = c.space.basis(n)[j]
                raise NotAComplexError(
                    f"selection is not closed under d: leak from {lab!r} at degree {n}"
                )
            entries[(tidx[i], idx[j])] = v
        blocks[n] = Matrix(space.dim(n + 1), space.dim(n), entries)
    return Complex(space, GradedMap(space, space, 1, blocks), check=False)


def solve_homotopy(
    f: GradedMap, g: GradedMap, d_source: GradedMap, d_target: GradedMap
) -> GradedMap | None:
    """A map h with hom_differential(h) = f - g, or None.

    f and g must be parallel; h has degree one less.  Existence says f
    and g are homotopic as maps of complexes.
    """
    f._check_parallel(g)
    src, dst = f.source, f.target
    shift = f.shift - 1
    dim = map_space_dim(src, dst, shift)
    target_vec = pack_map(f - g)
    cols = []
    for k in range(dim):
        unit = [ZERO] * dim
        unit[k] = Fraction(1)
        e = unpack_map(src, dst, shift, unit)
        cols.append(pack_map(hom_differential(e, d_source, d_target)))
    m = Matrix.from_cols(cols, rows=len(target_vec))
    from .exactlin import solve as _solve

    x = _solve(m, target_vec)
    if x is None:
        return None
    return unpack_map(src, dst, shift, x)


def tensor_double(a: DoubleComplex, b: DoubleComplex) -> DoubleComplex:
    """Tensor product of double complexes.

    Outer and inner act independently: each crosses the left factor with
    the sign of its own index only (outer uses the left outer degree,
    inner the left inner degree).  This keeps the two directions
    commuting, as required by DoubleComplex.
    """
    basis: dict[tuple[int, int], list[Label]] = {}
    for (p1, q1) in a.bidegrees():
        for (p2, q2) in b.bidegrees():
            labels = basis.setdefault((p1 + p2, q1 + q2), [])
            for la in a.basis(p1, q1):
                for lb in b.basis(p2, q2):
                    labels.append(((p1, q1, la), (p2, q2, lb)))
    index: dict[tuple[int, int], dict[Label, int]] = {
        pq: {lab: i for i, lab in enumerate(labs)} for pq, labs in basis.items()
    }

    def build(direction: str) -> dict[tuple[int, int], Matrix]:
        blocks: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {}
        dp, dq = (1, 0) if direction == "outer" else (0, 1)
        for (p, q), labs in basis.items():
            ent = blocks.setdefault((p, q), {})
            tgt = index.get((p + dp, q + dq), {})
            for col, (left, right) in enumerate(labs):
                p1, q1, la = left
                p2, q2, lb = right
                mat_a = a.outer(p1, q1) if direction == "outer" else a.inner(p1, q1)
                ja = a.basis(p1, q1).index(la)
                ta = a.basis(p1 + dp, q1 + dq)
                for (i, jj), v in mat_a.entries.items():
                    if jj == ja:
                        lab = ((p1 + dp, q1 + dq, ta[i]), right)
                        ent[(tgt[lab], col)] = ent.get((tgt[lab], col), ZERO) + v
                mat_b = b.outer(p2, q2) if direction == "outer" else b.inner(p2, q2)
                jb = b.basis(p2, q2).index(lb)
                tb = b.basis(p2 + dp, q2 + dq)
                sign = sign_pow(p1 if direction == "outer" else q1)
                for (i, jj), v in mat_b.entries.items():
                    if jj == jb:
                        lab = (left, (p2 + dp, q2 + dq, tb[i]))
                        ent[(tgt[lab], col)] = ent.get((tgt[lab], col), ZERO) + sign * v
        out = {}
        for (p, q), ent in blocks.items():
            rows = len(basis.get((p + dp, q + dq), ()))
            cols = len(basis[(p, q)])
            ent = {k: v for k, v in ent.items() if v != 0}
            out[(p, q)] = Matrix(rows, cols, ent)
        return out

    return DoubleComplex(basis, build("outer"), build("inner"), check=True)


def tensor_total_iso(a: DoubleComplex, b: DoubleComplex) -> GradedMap:
    """The interchange isomorphism total(a) ⊗ total(b) -> total(a ⊗ b).

    On a basis pair it is the relabeling times (-1)^{(left outer degree)
    * (right inner degree)}.  A chain isomorphism; its inverse uses the
    same sign.
    """
    source = tensor_complex(a.total(), b.total())
    target = tensor_double(a, b).total()

    def action(n: int, label: Label):
        left, right = label
        p1, q1, la = left
        p2, q2, lb = right
        sign = sign_pow(p1 * q2)
        return [(((p1 + p2, q1 + q2, (left, right))), Fraction(sign))]

    return GradedMap.from_basis_action(source.space, target.space, 0, action)

"""Bounded twisted complexes over an algebra-valued morphism category.

A twisted complex places finitely many cochain complexes at integer
positions and connects them by upward structure maps valued in a fixed
dg algebra: the component from position j to position i > j is a linear
map M^j -> A (x) M^i that raises degree by j - i + 1.  Morphisms between
two such objects are matrices of algebra-valued components, composed by
multiplying in the algebra after passing the outer map across the inner
algebra factor with the usual crossing sign.

Positions enter signs through a placement twist: re-grade each fiber so
its degree-n part sits in degree n + position, and scale the degree-n
block of a component between positions q and r by (-1)^{n(r - q)}.  In
the placed picture the structure equation, the morphism differential,
and composition are the plain sign-free formulas; unplacing them
produces explicit position-dependent signs on the stored components.
The validator below computes both pictures independently and insists
they agree, so a sign error in either path is caught by the other.

Everything here is bounded and finite dimensional, so morphism spaces
are honest direct sums of elementary-matrix lines and the total
morphism complex of a pair of objects is an ordinary `Complex` whose
square-zero property is proved at construction time.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .complexes import (
    Complex,
    GradedMap,
    GradedSpace,
    Label,
    hom_differential,
    map_space_dim,
    pack_map,
    select_subcomplex,
    sign_pow,
    tensor_complex,
    tensor_map,
    unpack_map,
)
from .dga import DgaPresentation, ValidationReport
from .exactlin import Matrix, ONE, solve


class TwistedError(Exception):
    pass


class InvalidInputError(TwistedError):
    """An object fails its structure equation or shape contract."""


class ShapeMismatchError(TwistedError):
    """Morphism endpoints or component shapes do not line up."""


class NotClosedError(TwistedError):
    """Inverse solving was asked for a morphism that is not a closed
    degree-0 morphism."""


# -- placement twist ---------------------------------------------------


def placed_space(space: GradedSpace, k: int) -> GradedSpace:
    """The same basis with degree n re-labeled as n + k."""
    return GradedSpace({n + k: list(space.basis(n)) for n in space.degrees()})


def placed_complex(c: Complex, k: int) -> Complex:
    """Fiber re-graded by its position; the differential is reused
    without sign."""
    return c.shift(-k)


def placed_component(f: GradedMap, r: int, q: int) -> GradedMap:
    """Rewrite a component between positions q (source) and r (target)
    in the placed picture.

    The degree-n block is moved to degree n + q and scaled by
    (-1)^{n (r - q)}.  Placement is involutive up to the same twist and
    commutes with the per-block differential, which is what makes the
    placed structure equation equivalent to the raw one.
    """
    src = placed_space(f.source, q)
    dst = placed_space(f.target, r)
    blocks = {
        n + q: f.block(n).scale(Fraction(sign_pow(n * (r - q))))
        for n in f.nonzero_degrees()
    }
    return GradedMap(src, dst, f.shift + r - q, blocks)


# -- composition through the algebra -----------------------------------


def algebra_compose(
    a: DgaPresentation, outer: GradedMap, inner: GradedMap
) -> GradedMap:
    """Compose two algebra-valued maps U -> A (x) V and V -> A (x) W.

    The outer map crosses the inner algebra factor (tensor_map supplies
    the (-1)^{deg a * deg outer} sign) and the two algebra slots are
    multiplied.  The result is again algebra-valued, U -> A (x) W.
    """
    acx = a.complex()
    step = tensor_map(GradedMap.identity(acx.space), outer)

    def collapse(n: int, lab: Label) -> Iterable[tuple[Label, Fraction]]:
        x, (y, w) = lab
        return [((z, w), c) for z, c in a.mul(x, y).items()]

    multiply = GradedMap.from_basis_action(step.target, outer.target, 0, collapse)
    return multiply.compose(step).compose(inner)


def unit_embedding(a: DgaPresentation, c: Complex) -> GradedMap:
    """v |-> 1 (x) v, the identity viewed as an algebra-valued map."""
    target = tensor_complex(a.complex(), c)

    def act(n: int, lab: Label) -> Iterable[tuple[Label, Fraction]]:
        return [((u, lab), cu) for u, cu in a.unit.items()]

    return GradedMap.from_basis_action(c.space, target.space, 0, act)


# -- objects ------------------------------------------------------------


class TwistedComplex:
    """Finitely many fiber complexes joined by algebra-valued maps.

    objects: position -> Complex (the fiber at that position).
    maps: (i, j) with i > j -> GradedMap fiber^j -> A (x) fiber^i of
        degree j - i + 1.  Absent keys are zero.
    weights: optional position -> integer, for the homogeneous variant;
        validation then pins each component to algebra weight
        weights[i] - weights[j].

    Construction checks shapes only; the structure equation is a
    property of the data and is checked by validate_mc.
    """

    def __init__(
        self,
        algebra: DgaPresentation,
        objects: dict[int, Complex],
        maps: dict[tuple[int, int], GradedMap] | None = None,
        weights: dict[int, int] | None = None,
    ):
        if not objects:
            raise InvalidInputError("at least one position is required")
        self.algebra = algebra
        self.objects = dict(objects)
        self.maps = {k: f for k, f in (maps or {}).items() if not f.is_zero()}
        acx = algebra.complex()
        self._tensor = {
            i: tensor_complex(acx, fib) for i, fib in self.objects.items()
        }
        for (i, j), f in self.maps.items():
            if i not in self.objects or j not in self.objects:
                raise InvalidInputError(f"map key ({i}, {j}) names a missing position")
            if i <= j:
                raise InvalidInputError(
                    f"map key ({i}, {j}) must point upward in position"
                )
            if f.shift != j - i + 1:
                raise InvalidInputError(
                    f"component ({i}, {j}) has degree {f.shift}, expected {j - i + 1}"
                )
            if f.source != self.objects[j].space or f.target != self._tensor[i].space:
                raise InvalidInputError(f"component ({i}, {j}) endpoints mismatch")
        if weights is None:
            self.weights = None
        else:
            missing = sorted(i for i in self.objects if i not in weights)
            if missing:
                raise InvalidInputError(f"positions {missing} carry no weight")
            self.weights = {i: int(weights[i]) for i in self.objects}
        self._validated = False

    def positions(self) -> list[int]:
        return sorted(self.objects)

    def fiber(self, i: int) -> Complex:
        return self.objects[i]

    def tensor_fiber(self, i: int) -> Complex:
        """A (x) fiber^i, with the tensor differential."""
        return self._tensor[i]

    def map_at(self, i: int, j: int) -> GradedMap:
        f = self.maps.get((i, j))
        if f is None:
            return GradedMap.zero(
                self.objects[j].space, self._tensor[i].space, j - i + 1
            )
        return f

    def __repr__(self):
        dims = {i: dict(zip(c.degrees(), (c.dim(n) for n in c.degrees())))
                for i, c in sorted(self.objects.items())}
        return f"TwistedComplex(positions {sorted(self.objects)}, fibers {dims})"


def point_object(
    a: DgaPresentation, position: int = 0, degree: int = 0, label: Label = "pt"
) -> TwistedComplex:
    """One-dimensional fiber at a single position, zero differential."""
    space = GradedSpace({degree: [label]})
    fiber = Complex(space, GradedMap.zero(space, space, 1), check=False)
    return TwistedComplex(a, {position: fiber})


# -- structure equation -------------------------------------------------


def validate_mc(m: TwistedComplex) -> ValidationReport:
    """Check the structure equation of a twisted complex, both ways.

    For every pair of positions i > j the raw form

        d(d_{ij}) + sum over j < p < i of
            (-1)^{(i-p)(p-j+1)} d_{ip} * d_{pj}

    must vanish, where d(-) is the algebra-valued morphism differential
    and * is composition through the algebra.  Independently, the
    placed components must satisfy the sign-free equation
    d(d^_{ij}) + sum d^_{ip} * d^_{pj} = 0 computed entirely in the
    placed picture, and placing the raw left side must reproduce the
    placed left side.  Weighted objects additionally have every
    component entry checked for algebra weight w_i - w_j.
    """
    a = m.algebra
    rep = ValidationReport()
    pos = m.positions()
    placed_fibers = {i: placed_complex(m.objects[i], i) for i in pos}
    placed_tensors = {i: placed_complex(m._tensor[i], i) for i in pos}
    for j in pos:
        for i in pos:
            if i <= j:
                continue
            raw = hom_differential(m.map_at(i, j), m.objects[j].d, m._tensor[i].d)
            sharp = hom_differential(
                placed_component(m.map_at(i, j), i, j),
                placed_fibers[j].d,
                placed_tensors[i].d,
            )
            for p in pos:
                if not (j < p < i):
                    continue
                term = algebra_compose(a, m.map_at(i, p), m.map_at(p, j))
                raw = raw + term.scale(sign_pow((i - p) * (p - j + 1)))
                sharp = sharp + algebra_compose(
                    a,
                    placed_component(m.map_at(i, p), i, p),
                    placed_component(m.map_at(p, j), p, j),
                )
            if not raw.is_zero():
                rep.add(
                    "structure-raw",
                    (i, j),
                    f"raw structure equation fails at ({i}, {j})",
                )
            if not sharp.is_zero():
                rep.add(
                    "structure-placed",
                    (i, j),
                    f"placed structure equation fails at ({i}, {j})",
                )
            if placed_component(raw, i, j) != sharp:
                rep.add(
                    "placed-raw-agreement",
                    (i, j),
                    "the raw and placed left sides disagree after placement",
                )
    if m.weights is not None:
        if a.weights is None:
            rep.add(
                "graded-weights",
                m.algebra.name,
                "object carries weights but the algebra is not weighted",
            )
        else:
            for (i, j), f in sorted(m.maps.items()):
                want = m.weights[i] - m.weights[j]
                tspace = m._tensor[i].space
                for n in f.nonzero_degrees():
                    tbasis = tspace.basis(n + f.shift)
                    for (row, _col), _v in sorted(f.block(n).entries.items()):
                        alab = tbasis[row][0]
                        got = a.weight_of(alab)
                        if got != want:
                            rep.add(
                                "graded-weights",
                                (i, j),
                                f"entry in algebra weight {got}, expected {want}",
                            )
    if rep.ok:
        m._validated = True
    return rep


def _require_valid(m: TwistedComplex, role: str):
    if m._validated:
        return
    rep = validate_mc(m)
    if not rep.ok:
        raise InvalidInputError(f"{role} fails its structure equation: {rep.summary()}")


# -- morphisms ----------------------------------------------------------


class TwistedHom:
    """Degree-homogeneous morphism of twisted complexes.

    components: (r, q) -> GradedMap fiber^q of the source ->
        A (x) fiber^r of the target, of raw degree  degree + q - r.
    Zero components may be omitted; shapes are checked.
    """

    def __init__(
        self,
        source: TwistedComplex,
        target: TwistedComplex,
        degree: int,
        components: dict[tuple[int, int], GradedMap] | None = None,
    ):
        if source.algebra is not target.algebra:
            raise ShapeMismatchError("source and target live over different algebras")
        self.source = source
        self.target = target
        self.degree = degree
        self.components: dict[tuple[int, int], GradedMap] = {}
        for (r, q), f in (components or {}).items():
            if q not in source.objects or r not in target.objects:
                raise ShapeMismatchError(
                    f"component ({r}, {q}) names a missing position"
                )
            if f.shift != degree + q - r:
                raise ShapeMismatchError(
                    f"component ({r}, {q}) has degree {f.shift}, "
                    f"expected {degree + q - r}"
                )
            if (
                f.source != source.objects[q].space
                or f.target != target.tensor_fiber(r).space
            ):
                raise ShapeMismatchError(f"component ({r}, {q}) endpoints mismatch")
            if not f.is_zero():
                self.components[(r, q)] = f

    def component(self, r: int, q: int) -> GradedMap:
        f = self.components.get((r, q))
        if f is None:
            return GradedMap.zero(
                self.source.objects[q].space,
                self.target.tensor_fiber(r).space,
                self.degree + q - r,
            )
        return f

    def is_zero(self) -> bool:
        return not self.components

    def scale(self, c) -> "TwistedHom":
        return TwistedHom(
            self.source,
            self.target,
            self.degree,
            {k: f.scale(c) for k, f in self.components.items()},
        )

    def __add__(self, other: "TwistedHom") -> "TwistedHom":
        if (
            other.source is not self.source
            or other.target is not self.target
            or other.degree != self.degree
        ):
            raise ShapeMismatchError("sum of non-parallel morphisms")
        keys = set(self.components) | set(other.components)
        return TwistedHom(
            self.source,
            self.target,
            self.degree,
            {(r, q): self.component(r, q) + other.component(r, q) for r, q in keys},
        )

    def __sub__(self, other: "TwistedHom") -> "TwistedHom":
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, TwistedHom):
            return NotImplemented
        return (
            self.source is other.source
            and self.target is other.target
            and self.degree == other.degree
            and (self - other).is_zero()
        )

    def __repr__(self):
        keys = sorted(self.components)
        return f"TwistedHom(degree {self.degree}, components at {keys})"


def identity_hom(m: TwistedComplex) -> TwistedHom:
    """Unit embeddings on the diagonal; the identity of composition."""
    a = m.algebra
    comps = {
        (i, i): unit_embedding(a, fib) for i, fib in m.objects.items()
    }
    return TwistedHom(m, m, 0, comps)


def compose(psi: TwistedHom, phi: TwistedHom) -> TwistedHom:
    """psi after phi.

    Blockwise: the (p, q) component is the sum over middle positions r
    of (-1)^{(p - r) deg(phi_{r,q})} psi_{p,r} * phi_{r,q}, composition
    through the algebra.  The sign is what unplacing the sign-free
    placed composition produces.
    """
    if psi.source is not phi.target:
        raise ShapeMismatchError("composition endpoints do not meet")
    a = psi.source.algebra
    comps: dict[tuple[int, int], GradedMap] = {}
    for (p, r), g in psi.components.items():
        for (r2, q), f in phi.components.items():
            if r2 != r:
                continue
            term = algebra_compose(a, g, f).scale(sign_pow((p - r) * f.shift))
            key = (p, q)
            comps[key] = term if key not in comps else comps[key] + term
    return TwistedHom(phi.source, psi.target, psi.degree + phi.degree, comps)


def twisted_differential(f: TwistedHom) -> TwistedHom:
    """Differential of a morphism of twisted complexes.

    Componentwise it is the algebra-valued morphism differential plus
    post-composition by the target's structure maps and (with the sign
    -(-1)^{deg f} and the unplacing factors) pre-composition by the
    source's.  Squares to zero; hom_complex proves that on a basis.
    """
    m, n, deg = f.source, f.target, f.degree
    a = m.algebra
    out: dict[tuple[int, int], GradedMap] = {}

    def add(key: tuple[int, int], g: GradedMap):
        out[key] = g if key not in out else out[key] + g

    for (r, q), comp in f.components.items():
        add((r, q), hom_differential(comp, m.objects[q].d, n.tensor_fiber(r).d))
        for big in n.positions():
            if big > r and (big, r) in n.maps:
                g = algebra_compose(a, n.maps[(big, r)], comp)
                add((big, q), g.scale(sign_pow((big - r) * comp.shift)))
        for low in m.positions():
            if low < q and (q, low) in m.maps:
                g = algebra_compose(a, comp, m.maps[(q, low)])
                sign = -sign_pow(deg) * sign_pow((r - q) * (low - q + 1))
                add((r, low), g.scale(sign))
    return TwistedHom(m, n, deg + 1, out)


# -- the total morphism complex -----------------------------------------


def hom_complex(m: TwistedComplex, n: TwistedComplex, graded: bool = False) -> Complex:
    """Total morphism complex of two twisted complexes.

    Basis labels are elementary maps
        (target position r, source position q,
         (source degree u, source label), (target degree v, target label))
    sitting in total degree (v - u) + (r - q).  The differential is the
    one twisted_differential implements; building the Complex proves it
    squares to zero.  Both objects must satisfy their structure
    equations, else InvalidInputError.

    With graded=True both objects must carry weights over a weighted
    algebra; the result is the subcomplex of weight-matched lines, and
    the subcomplex selection doubles as a proof that the differential
    preserves the weight constraint.
    """
    _require_valid(m, "source")
    _require_valid(n, "target")
    if m.algebra is not n.algebra:
        raise InvalidInputError("the two objects live over different algebras")
    a = m.algebra

    basis: dict[int, list[Label]] = {}
    for q in m.positions():
        for r in n.positions():
            src = m.objects[q].space
            dst = n.tensor_fiber(r).space
            for u in src.degrees():
                for v in dst.degrees():
                    deg = (v - u) + (r - q)
                    row = basis.setdefault(deg, [])
                    for s in src.basis(u):
                        for t in dst.basis(v):
                            row.append((r, q, (u, s), (v, t)))
    space = GradedSpace(basis)

    def scatter(
        out: list, g: GradedMap, r: int, q: int, coeff
    ):
        for u in g.nonzero_degrees():
            sb = g.source.basis(u)
            tb = g.target.basis(u + g.shift)
            for (row, col), val in g.block(u).entries.items():
                out.append(
                    ((r, q, (u, sb[col]), (u + g.shift, tb[row])), coeff * val)
                )

    def act(deg: int, lab: Label) -> Iterable[tuple[Label, Fraction]]:
        r, q, (u, s), (v, t) = lab
        src = m.objects[q]
        dst = n.tensor_fiber(r)
        p = v - u
        elem = GradedMap(
            src.space,
            dst.space,
            p,
            {u: Matrix(
                dst.space.dim(v),
                src.space.dim(u),
                {(dst.space.index_of(v, t), src.space.index_of(u, s)): ONE},
            )},
        )
        out: list[tuple[Label, Fraction]] = []
        scatter(out, hom_differential(elem, src.d, dst.d), r, q, ONE)
        for big in n.positions():
            if big > r and (big, r) in n.maps:
                g = algebra_compose(a, n.maps[(big, r)], elem)
                scatter(out, g, big, q, Fraction(sign_pow((big - r) * p)))
        for low in m.positions():
            if low < q and (q, low) in m.maps:
                g = algebra_compose(a, elem, m.maps[(q, low)])
                coeff = -sign_pow(deg) * sign_pow((r - q) * (low - q + 1))
                scatter(out, g, r, low, Fraction(coeff))
        return out

    d = GradedMap.from_basis_action(space, space, 1, act)
    total = Complex(space, d, check=True)
    if not graded:
        return total
    if a.weights is None:
        raise InvalidInputError("graded morphism complex needs a weighted algebra")
    if m.weights is None or n.weights is None:
        raise InvalidInputError("graded morphism complex needs weighted objects")

    def keep(_deg: int, lab: Label) -> bool:
        r, q, _sl, (v, t) = lab
        return a.weight_of(t[0]) == n.weights[r] - m.weights[q]

    return select_subcomplex(total, keep)


def hom_coordinates(f: TwistedHom) -> dict[Label, Fraction]:
    """Coefficients of a morphism on the hom_complex basis lines."""
    out: dict[Label, Fraction] = {}
    for (r, q), comp in f.components.items():
        for u in comp.nonzero_degrees():
            sb = comp.source.basis(u)
            tb = comp.target.basis(u + comp.shift)
            for (row, col), val in comp.block(u).entries.items():
                out[(r, q, (u, sb[col]), (u + comp.shift, tb[row]))] = val
    return out


# -- invertibility ------------------------------------------------------


def is_isomorphism(f: TwistedHom) -> TwistedHom | None:
    """Two-sided inverse of a closed degree-0 morphism, or None.

    Raises NotClosedError unless f has degree 0 and zero differential.
    The inverse is found by exact linear solving: unknowns are the
    entries of a candidate g, equations say g after f and f after g are
    the identities.  Any solution of those equations is automatically
    closed, so no further check is needed (one is asserted anyway).
    """
    if f.degree != 0:
        raise NotClosedError("only degree-0 morphisms can be inverted")
    if not twisted_differential(f).is_zero():
        raise NotClosedError("the morphism is not closed")
    m, n = f.source, f.target

    slots = []
    for r in m.positions():
        for q in n.positions():
            src = n.objects[q].space
            dst = m.tensor_fiber(r).space
            shift = q - r
            count = map_space_dim(src, dst, shift)
            if count:
                slots.append((r, q, src, dst, shift, count))
    total = sum(count for *_rest, count in slots)

    def pack_pair(gf: TwistedHom, fg: TwistedHom) -> list[Fraction]:
        vec: list[Fraction] = []
        for r in m.positions():
            for q in m.positions():
                vec.extend(pack_map(gf.component(r, q)))
        for r in n.positions():
            for q in n.positions():
                vec.extend(pack_map(fg.component(r, q)))
        return vec

    b = pack_pair(identity_hom(m), identity_hom(n))
    entries: dict[tuple[int, int], Fraction] = {}
    col = 0
    for (r, q, src, dst, shift, count) in slots:
        for k in range(count):
            unit = [Fraction(0)] * count
            unit[k] = ONE
            g_k = TwistedHom(n, m, 0, {(r, q): unpack_map(src, dst, shift, unit)})
            column = pack_pair(compose(g_k, f), compose(f, g_k))
            for i, v in enumerate(column):
                if v != 0:
                    entries[(i, col)] = v
            col += 1
    system = Matrix(len(b), total, entries)
    x = solve(system, b)
    if x is None:
        return None
    comps: dict[tuple[int, int], GradedMap] = {}
    pos = 0
    for (r, q, src, dst, shift, count) in slots:
        comp = unpack_map(src, dst, shift, x[pos : pos + count])
        pos += count
        if not comp.is_zero():
            comps[(r, q)] = comp
    g = TwistedHom(n, m, 0, comps)
    assert twisted_differential(g).is_zero()
    return g

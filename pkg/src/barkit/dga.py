"""Presentations of differential graded algebras.

A presentation is a labeled basis per degree, a sparse structure-constant
table for the product, a sparse differential table, a unit (a degree 0
combination, usually a single label), and optionally a weight per label.
Tables are kept raw so that validation can report every broken axiom with
a witness instead of failing on construction; the checked Complex object
is built on demand once an instance is known to be valid.

Elements are sparse combinations {label: coefficient}.  Homogeneity is
assumed where the operation requires it and checked where cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .complexes import (
    Complex,
    GradedMap,
    GradedSpace,
    induced_cohomology_matrix,
    sign_pow,
)
from .exactlin import CohomologySlice, Matrix, ONE, ZERO, Vector, as_scalar

Label = Hashable
Combo = dict[Label, Fraction]


class DgaError(Exception):
    pass


class NotConnectedError(DgaError):
    pass


class ReducedModelError(DgaError):
    pass


class InvalidMorphismError(DgaError):
    pass


def combo_of(label: Label) -> Combo:
    return {label: ONE}


def add_term(acc: Combo, label: Label, coeff: Fraction) -> None:
    s = acc.get(label, ZERO) + coeff
    if s == 0:
        acc.pop(label, None)
    else:
        acc[label] = s


def combo_add(a: Combo, b: Combo, scale: Fraction = ONE) -> Combo:
    out = dict(a)
    for lab, c in b.items():
        add_term(out, lab, scale * c)
    return out


def combo_scale(c, a: Combo) -> Combo:
    c = as_scalar(c)
    if c == 0:
        return {}
    return {lab: c * v for lab, v in a.items()}


def normalize_combo(raw: Mapping[Label, object]) -> Combo:
    out: Combo = {}
    for lab, c in raw.items():
        q = as_scalar(c)
        if q != 0:
            out[lab] = q
    return out


@dataclass
class ValidationIssue:
    axiom: str
    witness: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom} at {self.witness}: {self.detail}"


class ValidationReport:
    def __init__(self):
        self.issues: list[ValidationIssue] = []

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, axiom: str, witness: tuple, detail: str):
        self.issues.append(ValidationIssue(axiom, witness, detail))

    def merge(self, other: "ValidationReport"):
        self.issues.extend(other.issues)

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(i) for i in self.issues)

    def __repr__(self):
        return f"ValidationReport({len(self.issues)} issues)"


class DgaPresentation:
    def __init__(
        self,
        name: str,
        space: GradedSpace,
        unit: Combo,
        product: dict[tuple[Label, Label], Combo],
        differential: dict[Label, Combo],
        weights: dict[Label, int] | None = None,
    ):
        self.name = name
        self.space = space
        self.unit = normalize_combo(unit)
        self.product = {
            pair: normalize_combo(c) for pair, c in product.items() if c
        }
        self.differential = {
            lab: normalize_combo(c) for lab, c in differential.items() if c
        }
        self.weights = dict(weights) if weights is not None else None
        self.degree_of: dict[Label, int] = {}
        for n in space.degrees():
            for lab in space.basis(n):
                self.degree_of[lab] = n
        self._complex: Complex | None = None

    # -- construction helpers -----------------------------------------

    @classmethod
    def build(
        cls,
        name: str,
        basis: Iterable[tuple],
        unit,
        products: Mapping[tuple[Label, Label], Mapping[Label, object]] = (),
        differential: Mapping[Label, Mapping[Label, object]] = (),
        weights: Mapping[Label, int] | None = None,
        fill_unit: bool = True,
    ) -> "DgaPresentation":
        """basis: iterable of (label, degree); unit: a label or a combo.

        With fill_unit (and a single-label unit), product entries with
        the unit that the table leaves out are inserted as the identity
        action; an explicit wrong entry still gets flagged by validate.
        """
        by_degree: dict[int, list[Label]] = {}
        for lab, deg in basis:
            by_degree.setdefault(deg, []).append(lab)
        space = GradedSpace(by_degree)
        if isinstance(unit, dict):
            unit_combo = normalize_combo(unit)
        else:
            unit_combo = combo_of(unit)
        table = {
            pair: normalize_combo(c) for pair, c in dict(products).items()
        }
        if fill_unit and len(unit_combo) == 1:
            (ulabel, ucoeff), = unit_combo.items()
            if ucoeff == 1:
                all_labels = [lab for lab, _ in basis]
                for lab in all_labels:
                    table.setdefault((ulabel, lab), combo_of(lab))
                    table.setdefault((lab, ulabel), combo_of(lab))
        diff = {lab: normalize_combo(c) for lab, c in dict(differential).items()}
        return cls(
            name,
            space,
            unit_combo,
            table,
            diff,
            dict(weights) if weights is not None else None,
        )

    # -- raw structure access -------------------------------------------

    def labels(self) -> list[Label]:
        out = []
        for n in self.space.degrees():
            out.extend(self.space.basis(n))
        return out

    def mul(self, x: Label, y: Label) -> Combo:
        return self.product.get((x, y), {})

    def mul_combo(self, a: Combo, b: Combo) -> Combo:
        out: Combo = {}
        for x, cx in a.items():
            for y, cy in b.items():
                for z, cz in self.mul(x, y).items():
                    add_term(out, z, cx * cy * cz)
        return out

    def d_label(self, x: Label) -> Combo:
        return self.differential.get(x, {})

    def d_combo(self, a: Combo) -> Combo:
        out: Combo = {}
        for x, c in a.items():
            for y, cy in self.d_label(x).items():
                add_term(out, y, c * cy)
        return out

    def combo_degree(self, a: Combo) -> int | None:
        """Degree of a homogeneous combination; None for 0; raises on mixed."""
        degs = {self.degree_of[lab] for lab in a}
        if not degs:
            return None
        if len(degs) > 1:
            raise DgaError(f"combination is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def combo_to_vec(self, n: int, a: Combo) -> Vector:
        vec = [ZERO] * self.space.dim(n)
        for lab, c in a.items():
            vec[self.space.index_of(n, lab)] = c
        return tuple(vec)

    def vec_to_combo(self, n: int, vec) -> Combo:
        out: Combo = {}
        for j, c in enumerate(vec):
            if c != 0:
                out[self.space.basis(n)[j]] = as_scalar(c)
        return out

    def weight_of(self, lab: Label) -> int:
        if self.weights is None:
            raise DgaError(f"{self.name} carries no weights")
        return self.weights[lab]

    # -- derived objects -------------------------------------------------

    def d_map(self) -> GradedMap:
        return GradedMap.from_basis_action(
            self.space,
            self.space,
            1,
            lambda n, lab: list(self.d_label(lab).items()),
        )

    def complex(self) -> Complex:
        if self._complex is None:
            self._complex = Complex(self.space, self.d_map(), check=True)
        return self._complex

    def __repr__(self):
        dims = {n: self.space.dim(n) for n in self.space.degrees()}
        return f"DgaPresentation({self.name!r}, dims {dims})"


@dataclass
class Augmentation:
    """Algebra map to the ground field: values on degree 0 labels, zero
    in all other degrees."""

    name: str
    values: dict[Label, Fraction]

    def of_label(self, a: DgaPresentation, lab: Label) -> Fraction:
        if a.degree_of.get(lab) != 0:
            return ZERO
        return self.values.get(lab, ZERO)

    def of_combo(self, a: DgaPresentation, c: Combo) -> Fraction:
        return sum((v * self.of_label(a, lab) for lab, v in c.items()), ZERO)


# -- validation ---------------------------------------------------------


def validate(a: DgaPresentation) -> ValidationReport:
    """Exhaustive axiom check; the report lists every violation."""
    rep = ValidationReport()
    labels = a.labels()
    label_set = set(labels)

    def check_combo(c: Combo, expected_degree, axiom, witness):
        for lab in c:
            if lab not in label_set:
                rep.add(axiom, witness, f"unknown label {lab!r}")
                return False
            if a.degree_of[lab] != expected_degree:
                rep.add(
                    axiom,
                    witness,
                    f"target {lab!r} has degree {a.degree_of[lab]}, expected {expected_degree}",
                )
                return False
        return True

    # unit shape
    try:
        udeg = a.combo_degree(a.unit)
    except DgaError as exc:
        rep.add("unit", (), str(exc))
        udeg = None
    if not a.unit:
        rep.add("unit", (), "unit is zero")
    elif udeg not in (0, None):
        rep.add("unit", (), f"unit has degree {udeg}")

    # table degree coherence
    degree_ok = True
    for (x, y), c in a.product.items():
        if x not in label_set or y not in label_set:
            rep.add("product-degree", (x, y), "unknown factor label")
            degree_ok = False
            continue
        if not check_combo(
            c, a.degree_of[x] + a.degree_of[y], "product-degree", (x, y)
        ):
            degree_ok = False
    for x, c in a.differential.items():
        if x not in label_set:
            rep.add("differential-degree", (x,), "unknown label")
            degree_ok = False
            continue
        if not check_combo(c, a.degree_of[x] + 1, "differential-degree", (x,)):
            degree_ok = False
    if not degree_ok:
        return rep  # the remaining checks assume coherent degrees

    # d squared
    for x in labels:
        dd = a.d_combo(a.d_label(x))
        if dd:
            rep.add("d-squared", (x,), f"d(d({x!r})) = {dd}")

    # two-sided unit
    for x in labels:
        left = a.mul_combo(a.unit, combo_of(x))
        if left != combo_of(x):
            rep.add("unit-left", (x,), f"1*{x!r} = {left}")
        right = a.mul_combo(combo_of(x), a.unit)
        if right != combo_of(x):
            rep.add("unit-right", (x,), f"{x!r}*1 = {right}")

    # associativity, exhaustive on basis triples
    for x in labels:
        for y in labels:
            xy = a.mul(x, y)
            for z in labels:
                lhs = a.mul_combo(xy, combo_of(z))
                rhs = a.mul_combo(combo_of(x), a.mul(y, z))
                if lhs != rhs:
                    rep.add(
                        "associativity",
                        (x, y, z),
                        f"({x!r}{y!r}){z!r} = {lhs} but {x!r}({y!r}{z!r}) = {rhs}",
                    )

    # Leibniz on basis pairs
    for x in labels:
        for y in labels:
            lhs = a.d_combo(a.mul(x, y))
            rhs = combo_add(
                a.mul_combo(a.d_label(x), combo_of(y)),
                a.mul_combo(combo_of(x), a.d_label(y)),
                scale=as_scalar(sign_pow(a.degree_of[x])),
            )
            if lhs != rhs:
                rep.add(
                    "leibniz",
                    (x, y),
                    f"d({x!r}{y!r}) = {lhs} but Leibniz gives {rhs}",
                )

    # weights
    if a.weights is not None:
        for lab in labels:
            w = a.weights.get(lab)
            if w is None or not isinstance(w, int) or w < 0:
                rep.add("weight", (lab,), f"missing or invalid weight {w!r}")
        for lab in a.unit:
            if a.weights.get(lab, 0) != 0:
                rep.add("weight-unit", (lab,), "unit component has weight != 0")
        for (x, y), c in a.product.items():
            want = a.weights.get(x, 0) + a.weights.get(y, 0)
            for z in c:
                if a.weights.get(z, 0) != want:
                    rep.add(
                        "weight-product",
                        (x, y, z),
                        f"weight {a.weights.get(z)} != {want}",
                    )
        for x, c in a.differential.items():
            for z in c:
                if a.weights.get(z, 0) != a.weights.get(x, 0):
                    rep.add(
                        "weight-differential",
                        (x, z),
                        "differential does not preserve weight",
                    )
    return rep


def validate_augmentation(a: DgaPresentation, eps: Augmentation) -> ValidationReport:
    rep = ValidationReport()
    for lab in eps.values:
        if a.degree_of.get(lab) != 0:
            rep.add("augmentation-support", (lab,), "value on a non-degree-0 label")
    if eps.of_combo(a, a.unit) != 1:
        rep.add("augmentation-unit", (), f"ε(1) = {eps.of_combo(a, a.unit)}")
    labels = a.labels()
    for x in labels:
        for y in labels:
            lhs = eps.of_combo(a, a.mul(x, y))
            rhs = eps.of_label(a, x) * eps.of_label(a, y)
            if lhs != rhs:
                rep.add(
                    "augmentation-product",
                    (x, y),
                    f"ε({x!r}{y!r}) = {lhs} != ε({x!r})ε({y!r}) = {rhs}",
                )
    for x in labels:
        if a.degree_of[x] == -1:
            val = eps.of_combo(a, a.d_label(x))
            if val != 0:
                rep.add("augmentation-d", (x,), f"ε(d {x!r}) = {val}")
    return rep


# -- connectedness and the reduced model -------------------------------


def is_connected(a: DgaPresentation) -> bool:
    """H^i = 0 for i < 0 and H^0 spanned by the class of the unit."""
    cx = a.complex()
    degrees = cx.degrees()
    lo = min(degrees, default=0)
    for n in range(lo, 0):
        if cx.cohomology(n).dim != 0:
            return False
    h0 = cx.cohomology(0)
    if h0.dim != 1:
        return False
    coords = h0.express(a.combo_to_vec(0, a.unit))
    return coords is not None and any(c != 0 for c in coords)


def reduced_model(a: DgaPresentation) -> tuple["DgaPresentation", "DgaMorphism"]:
    """Small quasi-isomorphic sub-DGA: ground field in degree 0, a
    complement of the degree-1 coboundaries inside the cocycles in degree
    1, everything unchanged from degree 2 up.

    The construction only works when the inclusion really is a
    quasi-isomorphism, which is checked degreewise; a failure raises
    ReducedModelError rather than returning a wrong model.  Weights are
    not carried over (the representative choice need not be
    weight-homogeneous).
    """
    degrees = a.space.degrees()
    if degrees and min(degrees) < 0:
        raise ReducedModelError("input has components in negative degrees")
    if not is_connected(a):
        raise NotConnectedError(a.name)

    cx = a.complex()
    h1 = cx.cohomology(1)
    unit_label = ("one",)
    basis: list[tuple[Label, int]] = [(unit_label, 0)]
    inclusion_values: dict[Label, Combo] = {unit_label: dict(a.unit)}
    line_labels = []
    for k, vec in enumerate(h1.representatives):
        lab = ("line", k)
        line_labels.append(lab)
        basis.append((lab, 1))
        inclusion_values[lab] = a.vec_to_combo(1, vec)
    high_labels = []
    for n in degrees:
        if n >= 2:
            for lab in a.space.basis(n):
                basis.append((lab, n))
                high_labels.append(lab)
                inclusion_values[lab] = combo_of(lab)

    # structure constants of the sub-DGA, expressed via the inclusion:
    # degree >= 2 targets are original labels, so products of included
    # elements land in the included basis on the nose
    products: dict[tuple[Label, Label], Combo] = {}
    sub_labels = [unit_label] + line_labels + high_labels

    def include(lab: Label) -> Combo:
        return inclusion_values[lab]

    for x in sub_labels:
        for y in sub_labels:
            if x == unit_label or y == unit_label:
                continue
            img = a.mul_combo(include(x), include(y))
            if img:
                products[(x, y)] = img  # degrees >= 2: original labels

    differential: dict[Label, Combo] = {}
    for lab in high_labels:
        img = a.d_label(lab)
        if img:
            differential[lab] = img
    # unit and the degree 1 lines are closed by construction

    sub = DgaPresentation.build(
        f"{a.name}.reduced",
        basis,
        unit_label,
        products,
        differential,
        weights=None,
        fill_unit=True,
    )
    inclusion = DgaMorphism(f"include:{sub.name}->{a.name}", sub, a, inclusion_values)
    issues = validate(sub)
    if not issues.ok:
        raise ReducedModelError(issues.summary())
    morph_issues = validate_morphism(inclusion)
    if not morph_issues.ok:
        raise ReducedModelError(morph_issues.summary())
    # degreewise quasi-isomorphism check; this is where inputs with a
    # nonzero differential out of degree 1 get rejected
    f = inclusion.as_graded_map()
    lo = 0
    hi = max(a.space.degrees(), default=0) + 1
    for n in range(lo, hi + 1):
        hs = sub.complex().cohomology(n)
        ht = a.complex().cohomology(n)
        if hs.dim != ht.dim:
            raise ReducedModelError(
                f"H^{n} changes: {hs.dim} in the model vs {ht.dim} in the input"
            )
        m = induced_cohomology_matrix(f, sub.complex(), a.complex(), n)
        from .exactlin import rank as _rank

        if _rank(m) != hs.dim:
            raise ReducedModelError(f"inclusion is not injective on H^{n}")
    return sub, inclusion


def opposite(a: DgaPresentation) -> DgaPresentation:
    """Same space and differential, product reversed with the degree sign."""
    products: dict[tuple[Label, Label], Combo] = {}
    for (x, y), c in a.product.items():
        sign = sign_pow(a.degree_of[x] * a.degree_of[y])
        products[(y, x)] = combo_scale(sign, c)
    return DgaPresentation(
        f"{a.name}^op",
        a.space,
        a.unit,
        products,
        a.differential,
        a.weights,
    )


# -- morphisms ----------------------------------------------------------


@dataclass
class DgaMorphism:
    name: str
    source: DgaPresentation
    target: DgaPresentation
    values: dict[Label, Combo]  # sparse; missing label maps to 0

    def apply_label(self, lab: Label) -> Combo:
        return self.values.get(lab, {})

    def apply_combo(self, c: Combo) -> Combo:
        out: Combo = {}
        for lab, v in c.items():
            for t, w in self.apply_label(lab).items():
                add_term(out, t, v * w)
        return out

    def as_graded_map(self) -> GradedMap:
        return GradedMap.from_basis_action(
            self.source.space,
            self.target.space,
            0,
            lambda n, lab: list(self.apply_label(lab).items()),
        )


def validate_morphism(f: DgaMorphism) -> ValidationReport:
    rep = ValidationReport()
    a, b = f.source, f.target
    for lab, img in f.values.items():
        if lab not in a.degree_of:
            rep.add("morphism-domain", (lab,), "unknown source label")
            continue
        for t in img:
            if t not in b.degree_of:
                rep.add("morphism-range", (lab, t), "unknown target label")
            elif b.degree_of[t] != a.degree_of[lab]:
                rep.add("morphism-degree", (lab, t), "degree not preserved")
    if not rep.ok:
        return rep
    if f.apply_combo(a.unit) != b.unit:
        rep.add("morphism-unit", (), f"f(1) = {f.apply_combo(a.unit)}")
    labels = a.labels()
    for x in labels:
        lhs = f.apply_combo(a.d_label(x))
        rhs = b.d_combo(f.apply_label(x))
        if lhs != rhs:
            rep.add("morphism-differential", (x,), f"f(dx) = {lhs}, d(fx) = {rhs}")
    for x in labels:
        for y in labels:
            lhs = f.apply_combo(a.mul(x, y))
            rhs = b.mul_combo(f.apply_label(x), f.apply_label(y))
            if lhs != rhs:
                rep.add(
                    "morphism-product", (x, y), f"f(xy) = {lhs}, f(x)f(y) = {rhs}"
                )
    if a.weights is not None and b.weights is not None:
        for lab, img in f.values.items():
            for t in img:
                if b.weights.get(t, 0) != a.weights.get(lab, 0):
                    rep.add("morphism-weight", (lab, t), "weight not preserved")
    return rep


# -- fiber products ------------------------------------------------------


@dataclass
class FiberProductDga:
    """Two algebras glued along maps into a third.

    The total object has components tagged "a1", "a2" (same degree) and
    "a12" (degree shifted up by one).  The connecting differential is
    d(x1, x2, x12) = (d x1, d x2, u1(x1) - u2(x2) - d x12); the product's
    third component is u1(x1) * y12 + (-1)^{deg y} x12 * u2(y2).  This is
    the standard cone convention; reports carry a one-line note since
    other sign choices exist.
    """

    a1: DgaPresentation
    a2: DgaPresentation
    a12: DgaPresentation
    u1: DgaMorphism
    u2: DgaMorphism
    total: DgaPresentation

    CONVENTION_NOTE = (
        "cone convention: d(x1,x2,x12) = (dx1, dx2, u1(x1) - u2(x2) - dx12)"
    )

    def embed(self, part: str, c: Combo) -> Combo:
        return {(part, lab): v for lab, v in c.items()}

    def project(self, part: str, c: Combo) -> Combo:
        return {lab: v for (tag, lab), v in c.items() if tag == part}


def fiber_product(
    a1: DgaPresentation,
    a2: DgaPresentation,
    a12: DgaPresentation,
    u1: DgaMorphism,
    u2: DgaMorphism,
) -> FiberProductDga:
    for u, src in ((u1, a1), (u2, a2)):
        if u.source is not src and u.source != src:
            raise InvalidMorphismError(f"{u.name} does not start at the expected algebra")
        if u.target is not a12 and u.target != a12:
            raise InvalidMorphismError(f"{u.name} does not land in the glue algebra")
        issues = validate_morphism(u)
        if not issues.ok:
            raise InvalidMorphismError(f"{u.name}: {issues.summary()}")

    basis: list[tuple[Label, int]] = []
    weights: dict[Label, int] = {}
    weighted = all(x.weights is not None for x in (a1, a2, a12))
    for tag, alg, shift in (("a1", a1, 0), ("a2", a2, 0), ("a12", a12, 1)):
        for n in alg.space.degrees():
            for lab in alg.space.basis(n):
                basis.append(((tag, lab), n + shift))
                if weighted:
                    weights[(tag, lab)] = alg.weights[lab]

    products: dict[tuple[Label, Label], Combo] = {}

    def put(pair, combo: Combo):
        if combo:
            products[pair] = combo

    for x in a1.labels():
        for y in a1.labels():
            put((("a1", x), ("a1", y)), {("a1", z): v for z, v in a1.mul(x, y).items()})
    for x in a2.labels():
        for y in a2.labels():
            put((("a2", x), ("a2", y)), {("a2", z): v for z, v in a2.mul(x, y).items()})
    # third-component action: glue elements eat algebra elements through u
    for x in a1.labels():
        for z in a12.labels():
            img = a12.mul_combo(u1.apply_label(x), combo_of(z))
            put((("a1", x), ("a12", z)), {("a12", t): v for t, v in img.items()})
    for z in a12.labels():
        for y in a2.labels():
            img = a12.mul_combo(combo_of(z), u2.apply_label(y))
            sign = sign_pow(a2.degree_of[y])
            put(
                (("a12", z), ("a2", y)),
                {("a12", t): sign * v for t, v in img.items()},
            )

    differential: dict[Label, Combo] = {}
    for x in a1.labels():
        img: Combo = {("a1", z): v for z, v in a1.d_label(x).items()}
        for t, v in u1.apply_label(x).items():
            add_term(img, ("a12", t), v)
        if img:
            differential[("a1", x)] = img
    for y in a2.labels():
        img = {("a2", z): v for z, v in a2.d_label(y).items()}
        for t, v in u2.apply_label(y).items():
            add_term(img, ("a12", t), -v)
        if img:
            differential[("a2", y)] = img
    for z in a12.labels():
        img = {("a12", t): -v for t, v in a12.d_label(z).items()}
        if img:
            differential[("a12", z)] = img

    unit: Combo = {}
    for lab, v in a1.unit.items():
        add_term(unit, ("a1", lab), v)
    for lab, v in a2.unit.items():
        add_term(unit, ("a2", lab), v)

    total = DgaPresentation(
        f"fiber({a1.name},{a2.name};{a12.name})",
        GradedSpace(_group_by_degree(basis)),
        unit,
        products,
        differential,
        weights if weighted else None,
    )
    issues = validate(total)
    if not issues.ok:
        raise DgaError(f"fiber product fails validation:\n{issues.summary()}")
    return FiberProductDga(a1, a2, a12, u1, u2, total)


def _group_by_degree(basis: Iterable[tuple[Label, int]]) -> dict[int, list[Label]]:
    by_degree: dict[int, list[Label]] = {}
    for lab, deg in basis:
        by_degree.setdefault(deg, []).append(lab)
    return by_degree


def fiber_augmentation(
    fp: FiberProductDga, eps: Augmentation, part: str
) -> Augmentation:
    """Augmentation of the total algebra through one projection."""
    if part not in ("a1", "a2"):
        raise DgaError("augmentations come from the a1 or a2 projection")
    values = {}
    alg = fp.a1 if part == "a1" else fp.a2
    for lab, v in eps.values.items():
        if alg.degree_of.get(lab) == 0:
            values[(part, lab)] = v
    return Augmentation(f"{eps.name}@{part}", values)


# -- cohomology algebra ---------------------------------------------------


def cohomology_dga(
    a: DgaPresentation,
) -> tuple[DgaPresentation, dict[int, CohomologySlice]]:
    """H(A) as an algebra with zero differential.

    Basis labels are ("h", degree, k) for the canonical representatives;
    products are computed on representatives and re-expressed in the
    canonical basis (well defined since the product of cocycles is a
    cocycle and coboundaries form an ideal of cocycles).
    """
    cx = a.complex()
    degrees = cx.degrees()
    lo = min(degrees, default=0)
    hi = max(degrees, default=0)
    slices: dict[int, CohomologySlice] = {}
    basis: list[tuple[Label, int]] = []
    for n in range(lo, hi + 1):
        h = cx.cohomology(n)
        slices[n] = h
        for k in range(h.dim):
            basis.append((("h", n, k), n))

    products: dict[tuple[Label, Label], Combo] = {}
    for n1, h1 in slices.items():
        for k1 in range(h1.dim):
            c1 = a.vec_to_combo(n1, h1.representatives[k1])
            for n2, h2 in slices.items():
                target = slices.get(n1 + n2)
                if target is None or target.dim == 0:
                    continue
                for k2 in range(h2.dim):
                    c2 = a.vec_to_combo(n2, h2.representatives[k2])
                    prod = a.mul_combo(c1, c2)
                    coords = target.express(a.combo_to_vec(n1 + n2, prod))
                    if coords is None:
                        raise DgaError("product of cocycles is not a cocycle")
                    combo = {
                        ("h", n1 + n2, k): v for k, v in enumerate(coords) if v != 0
                    }
                    if combo:
                        products[(("h", n1, k1), ("h", n2, k2))] = combo

    h0 = slices.get(0)
    unit: Combo = {}
    if h0 is not None and h0.dim:
        coords = h0.express(a.combo_to_vec(0, a.unit))
        if coords is None:
            raise DgaError("unit is not a cocycle")
        unit = {("h", 0, k): v for k, v in enumerate(coords) if v != 0}
    hdga = DgaPresentation(
        f"H({a.name})",
        GradedSpace(_group_by_degree(basis)),
        unit,
        products,
        {},
        None,
    )
    return hdga, slices


def induce_augmentation(
    a: DgaPresentation,
    eps: Augmentation,
    hdga: DgaPresentation,
    slices: dict[int, CohomologySlice],
) -> Augmentation:
    """ε on H(A): evaluate on degree 0 representatives (well defined
    because ε kills coboundaries)."""
    values = {}
    h0 = slices.get(0)
    if h0 is not None:
        for k in range(h0.dim):
            c = a.vec_to_combo(0, h0.representatives[k])
            v = eps.of_combo(a, c)
            if v != 0:
                values[("h", 0, k)] = v
    return Augmentation(f"{eps.name}@H", values)

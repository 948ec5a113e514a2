"""Algebra presentations: validation, connectedness, reduced models,
opposites, fiber products, cohomology algebras."""

from __future__ import annotations

from fractions import Fraction

import pytest

from barkit.dga import (
    Augmentation,
    DgaError,
    DgaMorphism,
    DgaPresentation,
    NotConnectedError,
    ReducedModelError,
    cohomology_dga,
    fiber_augmentation,
    fiber_product,
    induce_augmentation,
    is_connected,
    opposite,
    reduced_model,
    validate,
    validate_augmentation,
    validate_morphism,
)

from instances import (
    eps_circle,
    eps_k,
    make_broken,
    make_circle,
    make_contractible,
    make_dualnumbers,
    make_k,
    make_two_aug,
    make_wedge2,
    trivial_fiber,
)

F = Fraction


@pytest.mark.parametrize(
    "factory",
    [make_k, make_circle, make_wedge2, make_contractible, make_dualnumbers],
)
def test_corpus_instances_validate(factory):
    a = factory()
    report = validate(a)
    assert report.ok, report.summary()


def test_validate_flags_broken_instance():
    a = make_broken()
    report = validate(a)
    # d(e) = 1 breaks nothing structural here, but the augmentation does fail
    assert report.ok, report.summary()
    eps = Augmentation("eps", {"1": F(1)})
    rep2 = validate_augmentation(a, eps)
    assert not rep2.ok
    assert any(i.axiom == "augmentation-d" for i in rep2.issues)


def test_validate_flags_leibniz_violation():
    # d(x) = y but d(x*x) = 0 while Leibniz demands xy + yx = 2xy
    a = DgaPresentation.build(
        "bad",
        [("1", 0), ("x", 0), ("y", 1)],
        "1",
        {("1", "1"): {"1": 1}, ("x", "x"): {"x": 1}},
        {"x": {"y": 1}},
    )
    report = validate(a)
    assert not report.ok
    assert any(i.axiom == "leibniz" and i.witness == ("x", "x") for i in report.issues)


def test_validate_flags_associativity():
    a = DgaPresentation.build(
        "nonassoc",
        [("1", 0), ("x", 0)],
        "1",
        {("1", "1"): {"1": 1}, ("x", "x"): {"1": 1, "x": 1}},
    )
    report = validate(a)
    # (xx)x vs x(xx) for this table: check the validator catches any failure
    lhs = a.mul_combo(a.mul("x", "x"), {"x": F(1)})
    rhs = a.mul_combo({"x": F(1)}, a.mul("x", "x"))
    if lhs == rhs:
        assert report.ok
    else:
        assert any(i.axiom == "associativity" for i in report.issues)


def test_validate_degree_additivity():
    a = DgaPresentation.build(
        "degbad",
        [("1", 0), ("e", 1)],
        "1",
        {("1", "1"): {"1": 1}, ("e", "e"): {"e": 1}},  # e*e should sit in degree 2
    )
    report = validate(a)
    assert any(i.axiom == "product-degree" for i in report.issues)


def test_augmentation_validation():
    a = make_circle()
    assert validate_augmentation(a, eps_circle()).ok
    a2 = make_dualnumbers()
    bad = Augmentation("bad", {"1": F(1), "x": F(1)})
    rep = validate_augmentation(a2, bad)
    assert any(i.axiom == "augmentation-product" for i in rep.issues)
    good = Augmentation("good", {"1": F(1)})
    assert validate_augmentation(a2, good).ok


def test_two_augmentations_of_the_split_algebra():
    a, eps1, eps2 = make_two_aug()
    assert validate(a).ok
    assert validate_augmentation(a, eps1).ok
    assert validate_augmentation(a, eps2).ok
    assert eps1.of_label(a, "p") == 0
    assert eps2.of_label(a, "p") == 1


def test_is_connected():
    assert is_connected(make_k())
    assert is_connected(make_circle())
    assert is_connected(make_contractible())
    assert not is_connected(make_dualnumbers())


def test_reduced_model_circle_is_itself():
    a = make_circle()
    sub, incl = reduced_model(a)
    assert sub.space.dim(0) == 1
    assert sub.space.dim(1) == 1
    assert validate(sub).ok
    assert validate_morphism(incl).ok
    # the line in degree 1 includes as the generator e
    assert incl.apply_label(("line", 0)) == {"e": F(1)}


def test_reduced_model_contractible_collapses():
    a = make_contractible()
    sub, incl = reduced_model(a)
    assert sub.space.total_dim() == 1
    assert validate(sub).ok


def test_reduced_model_rejects_disconnected():
    with pytest.raises(NotConnectedError):
        reduced_model(make_dualnumbers())


def test_reduced_model_rejects_when_not_quasi_iso():
    # degree-1 differential hits degree 2: the naive submodel changes H^2
    a = DgaPresentation.build(
        "d1nonzero",
        [("1", 0), ("a", 1), ("b", 2)],
        "1",
        {("1", "1"): {"1": 1}},
        {"a": {"b": 1}},
    )
    assert validate(a).ok and is_connected(a)
    with pytest.raises(ReducedModelError):
        reduced_model(a)


def test_opposite_involutive_and_valid():
    for factory in (make_circle, make_wedge2, make_contractible):
        a = factory()
        op = opposite(a)
        assert validate(op).ok, op.name
        opop = opposite(op)
        assert opop.product == a.product
        assert opop.differential == a.differential


def test_opposite_of_commutative_degree0_is_itself():
    a = make_dualnumbers()
    op = opposite(a)
    assert op.product == a.product


def test_fiber_product_trivial_triple():
    a1, a2, a12, u1, u2 = trivial_fiber()
    fp = fiber_product(a1, a2, a12, u1, u2)
    t = fp.total
    assert validate(t).ok
    assert t.space.dim(0) == 2
    assert t.space.dim(1) == 1
    cx = t.complex()
    assert cx.cohomology(0).dim == 1  # the diagonal survives
    assert cx.cohomology(1).dim == 0
    # d on the a1 copy of 1 carries the connecting term
    assert t.d_label(("a1", "1")) == {("a12", "1"): F(1)}
    assert t.d_label(("a2", "1")) == {("a12", "1"): F(-1)}


def test_fiber_product_augmentations():
    a1, a2, a12, u1, u2 = trivial_fiber()
    fp = fiber_product(a1, a2, a12, u1, u2)
    e1 = fiber_augmentation(fp, eps_k(), "a1")
    e2 = fiber_augmentation(fp, eps_k(), "a2")
    assert validate_augmentation(fp.total, e1).ok
    assert validate_augmentation(fp.total, e2).ok
    assert e1.of_combo(fp.total, fp.total.unit) == 1


def test_fiber_product_rejects_bad_morphism():
    a1, a2, a12, u1, _ = trivial_fiber()
    bad = DgaMorphism("bad", a2, a12, {"1": {"1": F(2)}})  # not unit-preserving
    from barkit.dga import InvalidMorphismError

    with pytest.raises(InvalidMorphismError):
        fiber_product(a1, a2, a12, u1, bad)


def test_fiber_product_third_component_leibniz_witness():
    # a degree-0 element of the first factor maps to (dx, 0, u1(x))
    a1, a2, a12, u1, u2 = trivial_fiber()
    fp = fiber_product(a1, a2, a12, u1, u2)
    img = fp.total.d_label(("a1", "1"))
    assert img == {("a12", "1"): F(1)}


def test_cohomology_dga_circle():
    a = make_circle()
    h, slices = cohomology_dga(a)
    assert validate(h).ok
    assert h.space.dim(0) == 1 and h.space.dim(1) == 1
    # e has square zero in cohomology too
    (e_label,) = h.space.basis(1)
    assert h.mul(e_label, e_label) == {}
    eps_h = induce_augmentation(a, eps_circle(), h, slices)
    assert validate_augmentation(h, eps_h).ok


def test_cohomology_dga_contractible():
    a = make_contractible()
    h, _ = cohomology_dga(a)
    assert h.space.total_dim() == 1
    assert validate(h).ok


def test_morphism_validation():
    a = make_circle()
    k = make_k()
    to_k = DgaMorphism("eps", a, k, {"1": {"1": F(1)}})
    assert validate_morphism(to_k).ok
    bad = DgaMorphism("bad", a, k, {"1": {"1": F(1)}, "e": {"1": F(1)}})
    rep = validate_morphism(bad)
    assert any(i.axiom == "morphism-degree" for i in rep.issues)

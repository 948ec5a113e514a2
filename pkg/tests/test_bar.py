"""Bar layer: word complexes, homotopy, coalgebra, reduced side, weights."""

from fractions import Fraction

import pytest

from barkit.bar import (
    AugmentationMismatchError,
    bar_E1,
    bar_homotopy_check,
    BarTruncation,
    build_augmented_bar,
    build_free_bar,
    build_kml,
    build_reduced_bar,
    compare_cohomology,
    comparison_map,
    copath,
    copath_augmentations,
    copath_checks,
    coproduct,
    counit,
    counit_contract,
    free_outer_terms,
    free_word_act,
    homogeneous_bar,
    InvalidParametersError,
    NotWeightedError,
    ShapeMismatchError,
    TruncationError,
    weight_component,
    weight_dims,
)
from barkit.complexes import GradedMap, is_chain_map, tensor_map
from barkit.dga import Augmentation, DgaPresentation, fiber_product
from instances import (
    eps_circle,
    eps_contractible,
    eps_k,
    make_circle,
    make_contractible,
    make_k,
    make_two_aug,
    make_wedge2,
    trivial_fiber,
)

ONE = Fraction(1)


def test_truncation_validation():
    with pytest.raises(TruncationError):
        BarTruncation((), 1)
    with pytest.raises(TruncationError):
        BarTruncation((1, 1), 1)
    with pytest.raises(TruncationError):
        BarTruncation((0, 1), -1)
    t = BarTruncation.span(0, 3, 2)
    assert t.window == (0, 1, 2, 3)


def test_free_bar_of_ground_field_dims():
    fb = build_free_bar(make_k(), BarTruncation((0, 1), 1))
    assert {pq: fb.double.dim(*pq) for pq in fb.double.bidegrees()} == {
        (0, 0): 2,
        (-1, 0): 1,
    }
    assert fb.total().cohomology_dims() == {0: 1}


def test_free_outer_drop_sign_on_three_indices():
    # dropping the middle index of a three-index word flips the sign
    c = make_circle()
    word = ((0, 1, 2), ("1", "1", "1", "1"))
    terms = dict(free_outer_terms(c, word))
    assert terms[((0, 2), ("1", "1", "1"))] == -1
    assert terms[((1, 2), ("1", "1", "1"))] == 1
    assert terms[((0, 1), ("1", "1", "1"))] == 1


def test_free_bar_squares_to_zero_on_corpus():
    t = BarTruncation((0, 1, 2), 2)
    for a in (make_k(), make_circle(), make_wedge2(), make_contractible()):
        inst = build_free_bar(a, t)
        inst.total()  # validates d*d = 0 on construction


def test_two_sided_action_commutes_with_index_drops():
    for a in (make_circle(), make_wedge2()):
        t = BarTruncation((0, 1, 2), 2)
        inst = build_free_bar(a, t)
        labels = a.labels()
        for (_, _), w in inst.words():
            for y in labels:
                for z in labels:
                    lhs: dict = {}
                    for tw, c in free_word_act(a, y, w, z):
                        for ttw, cc in free_outer_terms(a, tw):
                            lhs[ttw] = lhs.get(ttw, 0) + c * cc
                    rhs: dict = {}
                    for tw, c in free_outer_terms(a, w):
                        for ttw, cc in free_word_act(a, y, tw, z):
                            rhs[ttw] = rhs.get(ttw, 0) + c * cc
                    assert {k: v for k, v in lhs.items() if v} == {
                        k: v for k, v in rhs.items() if v
                    }


def test_prepend_homotopy_exhaustive():
    rep = bar_homotopy_check(make_circle(), BarTruncation((1, 2), 2), 0)
    assert rep["ok"] and rep["words_checked"] == 16
    assert rep["checked_by_length"] == {0: 8, 1: 8}
    rep = bar_homotopy_check(make_k(), BarTruncation((1, 2, 3), 2), 0)
    assert rep["ok"] and set(rep["checked_by_length"]) == {0, 1, 2}


def test_prepend_index_must_precede_window():
    with pytest.raises(TruncationError):
        bar_homotopy_check(make_k(), BarTruncation((0, 1), 1), 0)


def test_augmented_bar_of_ground_field():
    inst = build_augmented_bar(make_k(), eps_k(), eps_k(), BarTruncation((0, 1), 1))
    assert inst.double.total_dims() == {0: 2, -1: 1}
    assert inst.total().cohomology_dims() == {0: 1}


def test_augmented_head_and_tail_terms():
    # unit letter: the two end drops survive with coefficients +1 and -1
    c = make_circle()
    inst = build_augmented_bar(c, eps_circle(), eps_circle(), BarTruncation((0, 1), 1))
    tot = inst.total()
    j = tot.space.index_of(-1, (-1, 0, ((0, 1), ("1",))))
    img = {
        tot.space.basis(0)[i]: v
        for (i, jj), v in tot.d.block(-1).entries.items()
        if jj == j
    }
    assert img == {
        (0, 0, ((1,), ())): ONE,
        (0, 0, ((0,), ())): -ONE,
    }


def test_augmented_two_augmentations_asymmetry():
    a, e1, e2 = make_two_aug()
    inst = build_augmented_bar(a, e1, e2, BarTruncation((0, 1), 1))
    tot = inst.total()
    j = tot.space.index_of(-1, (-1, 0, ((0, 1), ("p",))))
    img = {
        tot.space.basis(0)[i]: v
        for (i, jj), v in tot.d.block(-1).entries.items()
        if jj == j
    }
    # head vanishes (e1(p) = 0), tail drops with sign (-1)^1 and e2(p) = 1
    assert img == {(0, 0, ((0,), ())): -ONE}


@pytest.mark.parametrize("length", [1, 2, 3])
def test_circle_h0_counts_words(length):
    t = BarTruncation.span(0, length, length)
    inst = build_augmented_bar(make_circle(), eps_circle(), eps_circle(), t)
    assert inst.total().cohomology(0).dim == length + 1


def test_coproduct_trivial_and_single_letter_splits():
    c = make_circle()
    t = BarTruncation((0, 1, 2), 2)
    inst = build_augmented_bar(c, eps_circle(), eps_circle(), t)
    cp = coproduct(inst)
    w0 = (0, 0, ((1,), ()))
    assert cp.map.apply_label(0, w0) == [((w0, w0), ONE)]
    w1 = (-1, 1, ((0, 1), ("e",)))
    pairs = cp.map.apply_label(0, w1)
    assert sorted(pairs, key=repr) == sorted(
        [
            (((0, 0, ((0,), ())), w1), ONE),
            ((w1, (0, 0, ((1,), ()))), ONE),
        ],
        key=repr,
    )


def test_coproduct_is_chain_map_and_counital():
    for a, eps in (
        (make_circle(), eps_circle()),
        (make_contractible(), eps_contractible()),
    ):
        t = BarTruncation((0, 1, 2), 2)
        inst = build_augmented_bar(a, eps, eps, t)
        cp = coproduct(inst)
        assert is_chain_map(cp.map, cp.source, cp.target)
        ident = GradedMap.identity(cp.source.space)
        assert counit_contract(cp, "left") == ident
        assert counit_contract(cp, "right") == ident


def test_coproduct_coassociative():
    for a, eps in ((make_circle(), eps_circle()), (make_wedge2(), None)):
        if eps is None:
            eps = Augmentation("at0", {"1": ONE})
        t = BarTruncation((0, 1, 2), 2)
        inst = build_augmented_bar(a, eps, eps, t)
        cp = coproduct(inst)
        ident = GradedMap.identity(inst.total().space)
        lhs = tensor_map(cp.map, ident).compose(cp.map)
        rhs = tensor_map(ident, cp.map).compose(cp.map)
        for n in inst.total().space.degrees():
            for lab in inst.total().space.basis(n):
                flat_l = sorted(
                    (((x, y, z), c) for ((x, y), z), c in lhs.apply_label(n, lab)),
                    key=repr,
                )
                flat_r = sorted(
                    (((x, y, z), c) for (x, (y, z)), c in rhs.apply_label(n, lab)),
                    key=repr,
                )
                assert flat_l == flat_r


def test_counit_needs_matching_augmentations():
    a, e1, e2 = make_two_aug()
    inst = build_augmented_bar(a, e1, e2, BarTruncation((0, 1), 1))
    with pytest.raises(AugmentationMismatchError):
        counit(inst)


def test_counit_values():
    inst = build_augmented_bar(
        make_circle(), eps_circle(), eps_circle(), BarTruncation((0, 1, 2), 2)
    )
    u = counit(inst)
    assert all(len(lab[2][0]) == 1 and v == 1 for lab, v in u.items())
    assert len(u) == 3


def test_middle_augmentation_coproduct_shape():
    # splitting through a different middle augmentation still gives a
    # chain map into the mixed-ends tensor product
    a, e1, e2 = make_two_aug()
    t = BarTruncation((0, 1), 1)
    inst = build_augmented_bar(a, e1, e2, t)
    cp = coproduct(inst, middle=e2)
    assert cp.left is inst and cp.right is not inst
    assert is_chain_map(cp.map, cp.source, cp.target)


def test_page_one_of_zero_differential_algebra_is_the_bar_itself():
    c = make_circle()
    t = BarTruncation((0, 1, 2), 2)
    page = bar_E1(c, eps_circle(), eps_circle(), t)
    inst = build_augmented_bar(c, eps_circle(), eps_circle(), t)
    assert page.entry_dims == {
        pq: inst.double.dim(*pq) for pq in inst.double.bidegrees()
    }
    for pq in inst.double.bidegrees():
        assert page.d1[pq] == inst.double.outer(*pq)


def test_page_two_circle_counts():
    t = BarTruncation.span(0, 3, 3)
    page = bar_E1(make_circle(), eps_circle(), eps_circle(), t)
    assert page.e2_total_dims() == {0: 4}
    # the length filtration does not degenerate at page one here: unit
    # letters produce nonzero d1 rows
    assert any(not m.is_zero() for m in page.d1.values())
    # but unit-free words are d1-cycles
    hbar = page.instance
    for (p, q), w in hbar.words():
        if all(x != ("h", 0, 0) for x in w[1]):
            col = hbar.double.basis(p, q).index(w)
            assert all(
                jj != col for (i, jj) in hbar.double.outer(p, q).entries
            )


def test_page_two_contractible_concentrated():
    t = BarTruncation.span(0, 3, 3)
    page = bar_E1(make_contractible(), eps_contractible(), eps_contractible(), t)
    assert page.cohomology_algebra.space.total_dim() == 1
    assert page.e2_total_dims() == {0: 1}


def test_reduced_bar_ground_field():
    rb = build_reduced_bar(make_k(), eps_k(), 3)
    assert rb.letters == ()
    assert rb.total().cohomology_dims() == {0: 1}


@pytest.mark.parametrize("length", [1, 2, 3])
def test_reduced_bar_circle_counts(length):
    rb = build_reduced_bar(make_circle(), eps_circle(), length)
    tot = rb.total()
    assert tot.dim(0) == length + 1
    assert tot.cohomology(0).dim == length + 1


def test_reduced_bar_wedge_count():
    eps = Augmentation("at0", {"1": ONE})
    rb = build_reduced_bar(make_wedge2(), eps, 2)
    assert rb.total().cohomology(0).dim == 2 ** 3 - 1


def test_reduced_bar_contractible():
    rb = build_reduced_bar(make_contractible(), eps_contractible(), 3)
    dims = rb.total().cohomology_dims()
    assert dims.get(0, 0) == 1 and dims.get(1, 0) == 0


def test_comparison_map_is_chain_map_and_kills_unit_letters():
    c = make_circle()
    t = BarTruncation((0, 1, 2), 2)
    inst = build_augmented_bar(c, eps_circle(), eps_circle(), t)
    rb = build_reduced_bar(c, eps_circle(), 2)
    comp = comparison_map(inst, rb)
    assert is_chain_map(comp, inst.total(), rb.total())
    # a word with a unit letter dies
    assert comp.apply_label(-1, (-1, 0, ((0, 1), ("1",)))) == []
    # no-letter words land on the ground-field column generator
    assert comp.apply_label(0, (0, 0, ((1,), ()))) == [((0, 0, ()), ONE)]


def test_comparison_shape_guards():
    c = make_circle()
    inst = build_augmented_bar(
        c, eps_circle(), eps_circle(), BarTruncation((0, 1, 2), 2)
    )
    rb_short = build_reduced_bar(c, eps_circle(), 1)
    with pytest.raises(ShapeMismatchError):
        comparison_map(inst, rb_short)
    other = build_reduced_bar(make_wedge2(), Augmentation("at0", {"1": ONE}), 2)
    with pytest.raises(ShapeMismatchError):
        comparison_map(inst, other)


def test_compare_cohomology_circle_stabilizes_across_widths():
    # same cardinality, increasing span: the differentials only see the
    # relative order of the indices, so the dims must not move
    report = compare_cohomology(
        make_circle(),
        eps_circle(),
        3,
        [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 5)],
    )
    assert report["reduced_h0"] == 4
    assert report["stable"]
    assert all(r["two_sided_h0"] == 4 and r["h0_iso"] for r in report["windows"])


def test_compare_cohomology_reports_cardinality_inflation():
    # growing the index count past the length cap inflates the two-sided
    # side (top-length words lose their incoming differentials); the
    # report must show it rather than paper over it
    report = compare_cohomology(
        make_circle(), eps_circle(), 3, [range(0, 4), range(0, 5)]
    )
    h0s = [r["two_sided_h0"] for r in report["windows"]]
    assert h0s == [4, 8]
    assert not report["stable"]
    assert [r["h0_rank"] for r in report["windows"]] == [4, 4]


def test_compare_cohomology_contractible():
    report = compare_cohomology(
        make_contractible(), eps_contractible(), 2, [range(0, 3), range(0, 4)]
    )
    assert report["reduced_h0"] == 1 and report["reduced_h1"] == 0
    assert all(
        r["two_sided_h0"] == 1 and r["two_sided_h1"] == 0 and r["h0_iso"]
        for r in report["windows"]
    )


def test_kml_suite_small():
    for m, l in [(0, 0), (1, 0), (2, 1), (3, 2)]:
        K = build_kml(m, l)
        assert K.cohomology == {-l: 1}
        assert all(K.checks.values()), (m, l, K.checks)
    with pytest.raises(InvalidParametersError):
        build_kml(1, 2)


def test_kml_one_dimensional_at_equal_parameters():
    K = build_kml(2, 2)
    assert {n: K.complex.dim(n) for n in K.complex.degrees()} == {-2: 1}
    assert K.checks["ground_field_at_m_equals_l"]


def _weighted_wedge():
    return DgaPresentation.build(
        name="weighted-wedge",
        basis=[("1", 0), ("e1", 1), ("e2", 1)],
        unit="1",
        products={
            ("e1", "e1"): {},
            ("e1", "e2"): {},
            ("e2", "e1"): {},
            ("e2", "e2"): {},
        },
        weights={"1": 0, "e1": 1, "e2": 2},
    )


def test_homogeneous_bar_weight_splitting():
    a = _weighted_wedge()
    eps = Augmentation("at0", {"1": ONE})
    t = BarTruncation((0, 1, 2), 2)
    inst = homogeneous_bar(a, eps, eps, t)
    per_degree = weight_dims(inst)
    for n, per in per_degree.items():
        assert sum(per.values()) == inst.total().dim(n)
    # extracting a slice revalidates closure under d
    comp = weight_component(inst, 3)
    assert comp.space.total_dim() == sum(
        1 for _, w in inst.words() if inst.word_weight[w] == 3
    )


def test_homogeneous_bar_coproduct_preserves_weight():
    a = _weighted_wedge()
    eps = Augmentation("at0", {"1": ONE})
    inst = homogeneous_bar(a, eps, eps, BarTruncation((0, 1, 2), 2))
    cp = coproduct(inst)
    for n in cp.map.source.degrees():
        for lab in cp.map.source.basis(n):
            w = inst.word_weight[lab[2]]
            for (l, r), _ in cp.map.apply_label(n, lab):
                assert inst.word_weight[l[2]] + inst.word_weight[r[2]] == w


def test_homogeneous_bar_guards():
    with pytest.raises(NotWeightedError):
        homogeneous_bar(
            make_circle(), eps_circle(), eps_circle(), BarTruncation((0, 1), 1)
        )
    # augmentation hitting a positive-weight label is rejected up front
    b = DgaPresentation.build(
        name="pos-weight",
        basis=[("1", 0), ("p", 0)],
        unit="1",
        products={("p", "p"): {"p": 1}},
        weights={"1": 0, "p": 1},
    )
    eps = Augmentation("atp", {"1": ONE, "p": ONE})
    with pytest.raises(NotWeightedError):
        homogeneous_bar(b, eps, eps, BarTruncation((0, 1), 1))


def test_all_zero_weights_match_plain_instance():
    a = DgaPresentation.build(
        name="zero-weighted-circle",
        basis=[("1", 0), ("e", 1)],
        unit="1",
        products={("e", "e"): {}},
        weights={"1": 0, "e": 0},
    )
    eps = Augmentation("at0", {"1": ONE})
    t = BarTruncation((0, 1, 2), 2)
    plain = build_augmented_bar(a, eps, eps, t)
    weighted = homogeneous_bar(a, eps, eps, t)
    assert weighted.double.total_dims() == plain.double.total_dims()
    assert set(weighted.word_weight.values()) == {0}


def test_copath_values_and_pairing():
    fp = fiber_product(*trivial_fiber())
    eps = Augmentation("glue", {"1": ONE})
    e1, e2 = copath_augmentations(fp, eps)
    b = build_augmented_bar(fp.total, e1, e2, BarTruncation((0, 1, 2), 2))
    func = copath(fp, eps, b)
    no_letter = [lab for lab in func if len(lab[2][0]) == 1]
    glue_letter = [lab for lab in func if len(lab[2][0]) == 2]
    assert len(no_letter) == 3 and all(func[lab] == 1 for lab in no_letter)
    assert len(glue_letter) == 3 and all(func[lab] == -1 for lab in glue_letter)
    assert copath_checks(fp, eps, b)["ok"]


def test_copath_worked_kernel_element():
    fp = fiber_product(*trivial_fiber())
    eps = Augmentation("glue", {"1": ONE})
    e1, e2 = copath_augmentations(fp, eps)
    b = build_augmented_bar(fp.total, e1, e2, BarTruncation((0, 1, 2), 2))
    func = copath(fp, eps, b)
    tot = b.total()
    lab = (-1, 0, ((0, 1), (("a1", "1"),)))
    j = tot.space.index_of(-1, lab)
    img = {
        tot.space.basis(0)[i]: v
        for (i, jj), v in tot.d.block(-1).entries.items()
        if jj == j
    }
    assert img, "the worked element has a nonzero differential"
    assert sum(func.get(l, Fraction(0)) * v for l, v in img.items()) == 0


def test_copath_requires_matching_algebra():
    fp = fiber_product(*trivial_fiber())
    eps = Augmentation("glue", {"1": ONE})
    inst = build_augmented_bar(
        make_circle(), eps_circle(), eps_circle(), BarTruncation((0, 1), 1)
    )
    with pytest.raises(ShapeMismatchError):
        copath(fp, eps, inst)

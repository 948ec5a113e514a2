"""Bar complexes of an augmented DGA, in exact arithmetic.

A bar word is a pair (alpha, letters): alpha is a strictly increasing
tuple of integers and letters a tuple of algebra basis labels.  Two word
shapes appear:

- end-free words carry one more letter than alpha has entries
  (x0 over-alpha0 x1 ... over-alphan x_{n+1});
- two-sided words carry one letter less, the ends being ground-field
  slots (1 over-alpha0 x1 ... over-alphan 1).

Words sit in a double complex at bidegree (p, q) with p = -(len(alpha)-1)
and q the sum of the letter degrees.  The outer differential drops the
index at position i (counted from the left, 0-based) with sign (-1)^i and
contracts the two neighbouring slots: an interior drop multiplies
adjacent letters, an end drop feeds the outermost letter to the matching
augmentation.  The inner differential acts letterwise with the usual
prefix sign.  Everything downstream (the prepend homotopy, the splitting
coproduct, the copath pairing) is checked against these two rules, so
they are the single source of truth for bar signs in this package.

The infinite direct sum over all alpha is modelled by a finite window of
admissible index values plus a cap on len(alpha); dropping an index stays
inside the truncation, so the truncated object is an honest subcomplex in
the outer direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (
    Complex,
    DoubleComplex,
    GradedMap,
    GradedSpace,
    induced_cohomology_matrix,
    is_quasi_isomorphism,
    Label,
    select_subcomplex,
    sign_pow,
    tensor_complex,
)
from .dga import (
    Augmentation,
    cohomology_dga,
    Combo,
    combo_add,
    DgaPresentation,
    FiberProductDga,
    induce_augmentation,
    validate_augmentation,
)
from .exactlin import (
    CohomologySlice,
    Matrix,
    ONE,
    rank,
    solve,
    ZERO,
)


class BarError(Exception):
    pass


class TruncationError(BarError):
    """Window or length cap unusable for the requested construction."""


class AugmentationMismatchError(BarError):
    pass


class ShapeMismatchError(BarError):
    pass


class NotWeightedError(BarError):
    pass


class InvalidParametersError(BarError):
    pass


# -- truncation ---------------------------------------------------------


@dataclass(frozen=True)
class BarTruncation:
    """Finite model: index entries from `window`, len(alpha)-1 <= max_length."""

    window: tuple[int, ...]
    max_length: int

    def __post_init__(self):
        if len(self.window) < 1:
            raise TruncationError("index window must contain at least one value")
        if any(b <= a for a, b in zip(self.window, self.window[1:])):
            raise TruncationError("index window must be strictly increasing")
        if self.max_length < 0:
            raise TruncationError("max_length must be nonnegative")

    @classmethod
    def span(cls, lo: int, hi: int, max_length: int) -> "BarTruncation":
        return cls(tuple(range(lo, hi + 1)), max_length)

    def index_tuples(self, entries: int):
        return itertools.combinations(self.window, entries)


# -- word calculus ------------------------------------------------------
#
# All three term generators return [(word, coefficient)] lists with the
# sign conventions from the module docstring baked in.  They are shared
# by the matrix builders, the homotopy checker and the tests.


def _letters_degree(a: DgaPresentation, letters) -> int:
    return sum(a.degree_of[x] for x in letters)


def free_outer_terms(a: DgaPresentation, word, allow_empty: bool = False):
    """Index drops on an end-free word; merging the last two slots lands
    on a bare algebra element (alpha = ()) and is only emitted when the
    caller models that column."""
    alpha, letters = word
    if len(alpha) == 0 or (len(alpha) == 1 and not allow_empty):
        return []
    out = []
    for i in range(len(alpha)):
        s = sign_pow(i)
        new_alpha = alpha[:i] + alpha[i + 1 :]
        for lab, c in a.mul(letters[i], letters[i + 1]).items():
            out.append(((new_alpha, letters[:i] + (lab,) + letters[i + 2 :]), s * c))
    return out


def aug_outer_terms(a: DgaPresentation, eps1: Augmentation, eps2: Augmentation, word):
    alpha, letters = word
    n = len(letters)
    out = []
    if n == 0:
        return out
    c = eps1.of_label(a, letters[0])
    if c != 0:
        out.append(((alpha[1:], letters[1:]), c))
    for i in range(1, n):
        s = sign_pow(i)
        new_alpha = alpha[:i] + alpha[i + 1 :]
        for lab, cz in a.mul(letters[i - 1], letters[i]).items():
            out.append(((new_alpha, letters[: i - 1] + (lab,) + letters[i + 1 :]), s * cz))
    c = eps2.of_label(a, letters[-1])
    if c != 0:
        out.append(((alpha[:-1], letters[:-1]), sign_pow(n) * c))
    return out


def inner_terms(a: DgaPresentation, word):
    alpha, letters = word
    out = []
    prefix = 0
    for k, x in enumerate(letters):
        s = sign_pow(prefix)
        for lab, c in a.d_label(x).items():
            out.append(((alpha, letters[:k] + (lab,) + letters[k + 1 :]), s * c))
        prefix += a.degree_of[x]
    return out


def free_word_act(a: DgaPresentation, y: Label, word, z: Label):
    """Two-sided action y . word . z on an end-free word: multiply into
    the outermost slots.  No crossing signs: nothing is passed over."""
    alpha, letters = word
    out = []
    for lab0, c0 in a.mul(y, letters[0]).items():
        for lab1, c1 in a.mul(letters[-1], z).items():
            out.append(((alpha, (lab0,) + letters[1:-1] + (lab1,)), c0 * c1))
    return out


# -- instances ----------------------------------------------------------


@dataclass(eq=False)
class BarComplexInstance:
    kind: str  # "free" | "augmented" | "homogeneous"
    dga: DgaPresentation
    eps1: Augmentation | None
    eps2: Augmentation | None
    truncation: BarTruncation
    double: DoubleComplex
    word_weight: dict | None = None
    _total: Complex | None = field(default=None, repr=False)

    def total(self) -> Complex:
        if self._total is None:
            self._total = self.double.total()
        return self._total

    def words(self):
        """All basis words with their bidegree, in basis order."""
        for p, q in self.double.bidegrees():
            for w in self.double.basis(p, q):
                yield (p, q), w

    def weight_of_word(self, word) -> int:
        if self.word_weight is None:
            raise NotWeightedError("instance carries no weights")
        return self.word_weight[word]


def _bucket(a: DgaPresentation, words):
    buckets: dict[tuple[int, int], list] = {}
    for w in words:
        alpha, letters = w
        pq = (-(len(alpha) - 1), _letters_degree(a, letters))
        buckets.setdefault(pq, []).append(w)
    return buckets


def _assemble_double(a, buckets, outer_of, inner_of) -> DoubleComplex:
    index = {pq: {w: i for i, w in enumerate(ws)} for pq, ws in buckets.items()}
    outer_blocks: dict[tuple[int, int], Matrix] = {}
    inner_blocks: dict[tuple[int, int], Matrix] = {}
    for (p, q), ws in buckets.items():
        oidx = index.get((p + 1, q))
        iidx = index.get((p, q + 1))
        oentries: dict[tuple[int, int], Fraction] = {}
        ientries: dict[tuple[int, int], Fraction] = {}
        for j, w in enumerate(ws):
            for tw, c in outer_of(w):
                if oidx is None or tw not in oidx:
                    raise BarError(f"outer image of {w!r} left the enumeration")
                key = (oidx[tw], j)
                s = oentries.get(key, ZERO) + c
                if s == 0:
                    oentries.pop(key, None)
                else:
                    oentries[key] = s
            for tw, c in inner_of(w):
                if iidx is None or tw not in iidx:
                    raise BarError(f"inner image of {w!r} left the enumeration")
                key = (iidx[tw], j)
                s = ientries.get(key, ZERO) + c
                if s == 0:
                    ientries.pop(key, None)
                else:
                    ientries[key] = s
        if oentries:
            outer_blocks[(p, q)] = Matrix(len(buckets[(p + 1, q)]), len(ws), oentries)
        if ientries:
            inner_blocks[(p, q)] = Matrix(len(buckets[(p, q + 1)]), len(ws), ientries)
    return DoubleComplex(buckets, outer_blocks, inner_blocks)


def build_free_bar(a: DgaPresentation, t: BarTruncation) -> BarComplexInstance:
    """End-free bar double complex over the truncation.

    The bare-algebra column (alpha = ()) is not part of the public
    object; merges of single-index words are therefore zero here.  The
    homotopy checker models that column internally, which is exactly
    what makes the prepend identity close up.
    """
    labels = tuple(a.labels())
    words = []
    top = min(t.max_length + 1, len(t.window))
    for entries in range(1, top + 1):
        for alpha in t.index_tuples(entries):
            for letters in itertools.product(labels, repeat=entries + 1):
                words.append((alpha, letters))
    buckets = _bucket(a, words)
    double = _assemble_double(
        a,
        buckets,
        lambda w: free_outer_terms(a, w),
        lambda w: inner_terms(a, w),
    )
    return BarComplexInstance("free", a, None, None, t, double)


def build_augmented_bar(
    a: DgaPresentation,
    eps1: Augmentation,
    eps2: Augmentation,
    t: BarTruncation,
    check_augmentations: bool = True,
) -> BarComplexInstance:
    if check_augmentations:
        for eps in (eps1, eps2):
            report = validate_augmentation(a, eps)
            if not report.ok:
                raise BarError(f"augmentation {eps.name}: {report.summary()}")
    labels = tuple(a.labels())
    words = []
    top = min(t.max_length + 1, len(t.window))
    for entries in range(1, top + 1):
        for alpha in t.index_tuples(entries):
            for letters in itertools.product(labels, repeat=entries - 1):
                words.append((alpha, letters))
    buckets = _bucket(a, words)
    double = _assemble_double(
        a,
        buckets,
        lambda w: aug_outer_terms(a, eps1, eps2, w),
        lambda w: inner_terms(a, w),
    )
    return BarComplexInstance("augmented", a, eps1, eps2, t, double)


# -- prepend homotopy ---------------------------------------------------


def _combo_accumulate(acc: dict, word, coeff):
    s = acc.get(word, ZERO) + coeff
    if s == 0:
        acc.pop(word, None)
    else:
        acc[word] = s


def bar_homotopy_check(a: DgaPresentation, t: BarTruncation, prepend_at: int) -> dict:
    """Verify (theta d + d theta)(w) = w for every end-free word.

    theta prepends the unit with a new leftmost index `prepend_at`, which
    must precede the whole window.  The verification runs inside the
    enlarged truncation (window plus the new index, length cap plus one,
    bare-algebra column included); the identity holds word by word and
    does not mix index counts, so the report also breaks the count down
    by len(alpha).
    """
    if prepend_at >= min(t.window):
        raise TruncationError(
            f"prepend index {prepend_at} must precede the window {t.window}"
        )

    def theta(word, coeff):
        alpha, letters = word
        return [
            (((prepend_at,) + alpha, (u,) + letters), coeff * cu)
            for u, cu in a.unit.items()
        ]

    labels = tuple(a.labels())
    checked = 0
    by_length: dict[int, int] = {}
    failures = []
    top = min(t.max_length + 1, len(t.window))
    for entries in range(1, top + 1):
        for alpha in t.index_tuples(entries):
            for letters in itertools.product(labels, repeat=entries + 1):
                word = (alpha, letters)
                acc: dict = {}
                # d(theta w), with the merge-to-bare column admitted
                for tw, c in theta(word, ONE):
                    for ttw, cc in free_outer_terms(a, tw, allow_empty=True):
                        _combo_accumulate(acc, ttw, c * cc)
                # theta(d w)
                for tw, c in free_outer_terms(a, word, allow_empty=True):
                    for ttw, cc in theta(tw, c):
                        _combo_accumulate(acc, ttw, cc)
                _combo_accumulate(acc, word, -ONE)
                checked += 1
                by_length[entries - 1] = by_length.get(entries - 1, 0) + 1
                if acc and len(failures) < 3:
                    failures.append({"word": word, "residue": sorted(acc.items(), key=repr)})
    return {
        "window": list(t.window),
        "max_length": t.max_length,
        "prepend_index": prepend_at,
        "words_checked": checked,
        "checked_by_length": by_length,
        "ok": not failures,
        "failures": failures,
    }


# -- coalgebra structure -------------------------------------------------


def _same_augmentation(e1: Augmentation, e2: Augmentation) -> bool:
    return {k: v for k, v in e1.values.items() if v != 0} == {
        k: v for k, v in e2.values.items() if v != 0
    }


@dataclass(eq=False)
class CoproductMap:
    map: GradedMap
    source: Complex
    target: Complex
    left: BarComplexInstance
    right: BarComplexInstance


def coproduct(
    b: BarComplexInstance,
    middle: Augmentation | None = None,
    left: BarComplexInstance | None = None,
    right: BarComplexInstance | None = None,
) -> CoproductMap:
    """Word-splitting coproduct on a two-sided instance.

    Splitting at index position i shares that index between the two
    fragments.  At the double-complex level the map carries no signs;
    passing to total complexes inserts (-1)^{i * (right fragment inner
    degree)}, the same twist the tensor-total isomorphism uses.  The
    middle augmentation only selects the target instances (the formula
    never evaluates it), so the diagonal case reuses `b` for both
    factors.
    """
    if b.kind == "free":
        raise ShapeMismatchError("splitting needs ground-field end slots")
    if middle is None:
        middle = b.eps1
    if left is None:
        left = (
            b
            if _same_augmentation(middle, b.eps2)
            else build_augmented_bar(b.dga, b.eps1, middle, b.truncation)
        )
    if right is None:
        right = (
            b
            if _same_augmentation(middle, b.eps1)
            else build_augmented_bar(b.dga, middle, b.eps2, b.truncation)
        )
    a = b.dga
    source = b.total()
    target = tensor_complex(left.total(), right.total())

    def action(n: int, tlabel):
        p, q, (alpha, letters) = tlabel
        out = []
        for i in range(len(alpha)):
            lw = (alpha[: i + 1], letters[:i])
            rw = (alpha[i:], letters[i:])
            q1 = _letters_degree(a, letters[:i])
            q2 = q - q1
            lab = ((-i, q1, lw), (-(len(alpha) - 1 - i), q2, rw))
            out.append((lab, Fraction(sign_pow(i * q2))))
        return out

    delta = GradedMap.from_basis_action(source.space, target.space, 0, action)
    return CoproductMap(delta, source, target, left, right)


def counit(b: BarComplexInstance) -> dict:
    """The length-zero projection, as {total label: coefficient}.

    Only defined when both end augmentations agree; every no-letter word
    contributes 1 and everything else pairs to zero.
    """
    if b.eps1 is None or b.eps2 is None or not _same_augmentation(b.eps1, b.eps2):
        raise AugmentationMismatchError("counit needs matching end augmentations")
    out = {}
    for (p, q), w in b.words():
        if len(w[0]) == 1:
            out[(p, q, w)] = ONE
    return out


def counit_contract(cp: CoproductMap, side: str) -> GradedMap:
    """(u ⊗ 1) ∘ Δ or (1 ⊗ u) ∘ Δ as a map on the source total complex."""
    if side == "left":
        u = counit(cp.left)
        back = cp.right
    elif side == "right":
        u = counit(cp.right)
        back = cp.left
    else:
        raise ValueError("side must be 'left' or 'right'")

    def action(n: int, pair):
        l, r = pair
        if side == "left":
            c = u.get(l, ZERO)
            keep = r
        else:
            c = u.get(r, ZERO)
            keep = l
        return [(keep, c)] if c != 0 else []

    collapse = GradedMap.from_basis_action(
        cp.target.space, back.total().space, 0, action
    )
    return collapse.compose(cp.map)


# -- spectral page -------------------------------------------------------


@dataclass(eq=False)
class SpectralPage:
    truncation: BarTruncation
    cohomology_algebra: DgaPresentation
    instance: BarComplexInstance
    entry_dims: dict[tuple[int, int], int]
    d1: dict[tuple[int, int], Matrix]
    e2: dict[tuple[int, int], CohomologySlice]

    def e2_total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), h in self.e2.items():
            if h.dim:
                out[p + q] = out.get(p + q, 0) + h.dim
        return out


def bar_E1(
    a: DgaPresentation, eps1: Augmentation, eps2: Augmentation, t: BarTruncation
) -> SpectralPage:
    """First page of the index-length filtration: the bar construction
    over the cohomology algebra, with the induced outer differential.
    The second page is its row cohomology."""
    hdga, slices = cohomology_dga(a)
    heps1 = induce_augmentation(a, eps1, hdga, slices)
    heps2 = induce_augmentation(a, eps2, hdga, slices)
    hbar = build_augmented_bar(hdga, heps1, heps2, t)
    entry_dims = {pq: hbar.double.dim(*pq) for pq in hbar.double.bidegrees()}
    d1 = {pq: hbar.double.outer(*pq) for pq in hbar.double.bidegrees()}
    e2: dict[tuple[int, int], CohomologySlice] = {}
    for q in sorted({q for (_, q) in entry_dims}):
        row = hbar.double.row_complex(q)
        for p in row.degrees():
            e2[(p, q)] = row.cohomology(p)
    return SpectralPage(t, hdga, hbar, entry_dims, d1, e2)


# -- reduced bar ---------------------------------------------------------


@dataclass(eq=False)
class ReducedBar:
    """Columns ground-field, I, I⊗I, ... for I the augmentation ideal.

    Ideal letters are the original labels away from degree zero and
    ("i0", j) kernel-basis labels in degree zero.  The outer
    differential merges adjacent letters with sign (-1)^p, p the 1-based
    merge position; the inner one acts letterwise.
    """

    dga: DgaPresentation
    eps: Augmentation
    max_length: int
    letters: tuple[Label, ...]
    letter_degree: dict[Label, int]
    letter_combo: dict[Label, Combo]
    double: DoubleComplex = field(repr=False)
    _total: Complex | None = field(default=None, repr=False)

    def total(self) -> Complex:
        if self._total is None:
            self._total = self.double.total()
        return self._total

    def include_letter_combo(self, c: Combo) -> Combo:
        out: Combo = {}
        for lab, v in c.items():
            out = combo_add(out, self.letter_combo[lab], v)
        return out

    def ideal_coords(self, n: int, combo: Combo) -> Combo:
        """Express a homogeneous algebra combination in ideal letters.

        Raises when the combination is not in the ideal (nonzero
        augmentation value), which doubles as a guard on upstream
        multiplicativity."""
        a = self.dga
        if n != 0:
            return dict(combo)
        letters0 = [lab for lab in self.letters if self.letter_degree[lab] == 0]
        cols = [a.combo_to_vec(0, self.letter_combo[lab]) for lab in letters0]
        m = Matrix.from_cols(cols, rows=a.space.dim(0))
        x = solve(m, a.combo_to_vec(0, combo))
        if x is None:
            raise BarError("combination is not in the augmentation ideal")
        return {letters0[j]: c for j, c in enumerate(x) if c != 0}

    def letter_mul(self, x: Label, y: Label) -> Combo:
        a = self.dga
        prod = a.mul_combo(self.letter_combo[x], self.letter_combo[y])
        return self.ideal_coords(self.letter_degree[x] + self.letter_degree[y], prod)

    def letter_d(self, x: Label) -> Combo:
        a = self.dga
        return self.ideal_coords(
            self.letter_degree[x] + 1, a.d_combo(self.letter_combo[x])
        )

    def project_letter(self, x: Label) -> Combo:
        """x - eps(x)·1 of an algebra label, in ideal letters."""
        a = self.dga
        n = a.degree_of[x]
        c = combo_add({x: ONE}, a.unit, -self.eps.of_label(a, x))
        if not c:
            return {}
        return self.ideal_coords(n, c)


def _ideal_letters(a: DgaPresentation, eps: Augmentation):
    from .exactlin import kernel_basis

    letters: list[Label] = []
    degree: dict[Label, int] = {}
    combo: dict[Label, Combo] = {}
    for n in a.space.degrees():
        if n != 0:
            for lab in a.space.basis(n):
                letters.append(lab)
                degree[lab] = n
                combo[lab] = {lab: ONE}
            continue
        dim0 = a.space.dim(0)
        row = Matrix(
            1,
            dim0,
            {
                (0, j): eps.of_label(a, lab)
                for j, lab in enumerate(a.space.basis(0))
                if eps.of_label(a, lab) != 0
            },
        )
        for j, vec in enumerate(kernel_basis(row)):
            lab = ("i0", j)
            if a.space.has(0, lab):
                raise BarError("label ('i0', j) collides with an algebra label")
            letters.append(lab)
            degree[lab] = 0
            combo[lab] = a.vec_to_combo(0, vec)
    return tuple(letters), degree, combo


def build_reduced_bar(a: DgaPresentation, eps: Augmentation, max_length: int) -> ReducedBar:
    report = validate_augmentation(a, eps)
    if not report.ok:
        raise BarError(f"augmentation {eps.name}: {report.summary()}")
    letters, degree, combo = _ideal_letters(a, eps)
    rb = ReducedBar(a, eps, max_length, letters, degree, combo, None)

    words = []
    for s in range(max_length + 1):
        words.extend(itertools.product(letters, repeat=s))
    buckets: dict[tuple[int, int], list] = {}
    for w in words:
        pq = (-len(w), sum(degree[x] for x in w))
        buckets.setdefault(pq, []).append(w)

    def outer_of(w):
        out = []
        for pnum in range(1, len(w)):
            s = sign_pow(pnum)
            for lab, c in rb.letter_mul(w[pnum - 1], w[pnum]).items():
                out.append((w[: pnum - 1] + (lab,) + w[pnum + 1 :], s * c))
        return out

    def inner_of(w):
        out = []
        prefix = 0
        for k, x in enumerate(w):
            s = sign_pow(prefix)
            for lab, c in rb.letter_d(x).items():
                out.append((w[:k] + (lab,) + w[k + 1 :], s * c))
            prefix += degree[x]
        return out

    index = {pq: {w: i for i, w in enumerate(ws)} for pq, ws in buckets.items()}
    outer_blocks: dict[tuple[int, int], Matrix] = {}
    inner_blocks: dict[tuple[int, int], Matrix] = {}
    for (p, q), ws in buckets.items():
        oidx = index.get((p + 1, q))
        iidx = index.get((p, q + 1))
        oentries: dict[tuple[int, int], Fraction] = {}
        ientries: dict[tuple[int, int], Fraction] = {}
        for j, w in enumerate(ws):
            for tw, c in outer_of(w):
                key = (oidx[tw], j)
                s = oentries.get(key, ZERO) + c
                if s == 0:
                    oentries.pop(key, None)
                else:
                    oentries[key] = s
            for tw, c in inner_of(w):
                key = (iidx[tw], j)
                s = ientries.get(key, ZERO) + c
                if s == 0:
                    ientries.pop(key, None)
                else:
                    ientries[key] = s
        if oentries:
            outer_blocks[(p, q)] = Matrix(len(buckets[(p + 1, q)]), len(ws), oentries)
        if ientries:
            inner_blocks[(p, q)] = Matrix(len(buckets[(p, q + 1)]), len(ws), ientries)
    rb.double = DoubleComplex(buckets, outer_blocks, inner_blocks)
    return rb


def comparison_map(simp: BarComplexInstance, red: ReducedBar) -> GradedMap:
    """Two-sided word ↦ [π(x1)|...|π(xn)], π the ideal projection.

    Degree-preserving; collapses all index data.  Unit letters die under
    π, so words containing the unit map to zero.
    """
    if simp.kind == "free":
        raise ShapeMismatchError("comparison starts from a two-sided instance")
    if simp.dga is not red.dga:
        raise ShapeMismatchError("instances are over different algebras")
    if not (
        _same_augmentation(simp.eps1, simp.eps2)
        and _same_augmentation(simp.eps1, red.eps)
    ):
        raise ShapeMismatchError("comparison needs one augmentation on both sides")
    if red.max_length < simp.truncation.max_length:
        raise ShapeMismatchError("reduced side is shorter than the truncation")
    projections = {x: red.project_letter(x) for x in simp.dga.labels()}

    def action(n: int, tlabel):
        p, q, (alpha, letters) = tlabel
        out = []
        for choice in itertools.product(*(projections[x].items() for x in letters)):
            labs = tuple(l for l, _ in choice)
            coeff = ONE
            for _, c in choice:
                coeff *= c
            out.append(((p, q, labs), coeff))
        return out

    return GradedMap.from_basis_action(
        simp.total().space, red.total().space, 0, action
    )


def compare_cohomology(a: DgaPresentation, eps: Augmentation, max_length: int, windows) -> dict:
    """H⁰/H¹ of the truncated two-sided bar against the reduced one,
    window by window, with induced ranks and a stabilization flag."""
    red = build_reduced_bar(a, eps, max_length)
    rtot = red.total()
    red_h0 = rtot.cohomology(0).dim
    red_h1 = rtot.cohomology(1).dim
    rows = []
    for w in windows:
        t = BarTruncation(tuple(w), max_length)
        simp = build_augmented_bar(a, eps, eps, t)
        stot = simp.total()
        comp = comparison_map(simp, red)
        h0 = stot.cohomology(0).dim
        h1 = stot.cohomology(1).dim
        r0 = rank(induced_cohomology_matrix(comp, stot, rtot, 0))
        r1 = rank(induced_cohomology_matrix(comp, stot, rtot, 1))
        rows.append(
            {
                "window": list(t.window),
                "two_sided_h0": h0,
                "two_sided_h1": h1,
                "h0_rank": r0,
                "h1_rank": r1,
                "h0_iso": h0 == red_h0 == r0,
                "h1_iso": h1 == red_h1 == r1,
            }
        )
    stable = len({(r["two_sided_h0"], r["two_sided_h1"]) for r in rows}) <= 1
    return {
        "algebra": a.name,
        "max_length": max_length,
        "reduced_h0": red_h0,
        "reduced_h1": red_h1,
        "windows": rows,
        "stable": stable,
    }


# -- the square-zero letter-count complexes ------------------------------


def _square_zero_algebra() -> tuple[DgaPresentation, Augmentation]:
    a = DgaPresentation.build(
        name="k[x]/(x^2)",
        basis=[("1", 0), ("x", 0)],
        unit="1",
        products={("x", "x"): {}},
    )
    return a, Augmentation("at-zero", {"1": ONE})


def _kml_core(m: int, l: int) -> Complex:
    a, eps = _square_zero_algebra()
    t = BarTruncation.span(0, m, m)
    inst = build_augmented_bar(a, eps, eps, t, check_augmentations=False)

    def keep(n, tlabel):
        _, _, (alpha, letters) = tlabel
        return sum(1 for x in letters if x == "x") == l

    return select_subcomplex(inst.total(), keep)


@dataclass(eq=False)
class KmlComplex:
    m: int
    l: int
    window: tuple[int, ...]
    complex: Complex
    cohomology: dict[int, int]
    checks: dict[str, bool]
    note: str = "index entries run over {0..m}: m+1 values, so the all-x column exists at m = l"


def build_kml(m: int, l: int) -> KmlComplex:
    """Letter-count-l piece of the two-sided bar of the square-zero
    algebra on one degree-0 generator, windowed over {0..m}.

    Verifies: at m = l the complex is one ground-field line; the
    coefficient-sum functional on the all-x column extends the complex
    acyclically; widening the window by one is a quasi-isomorphism.
    """
    if not (0 <= l <= m):
        raise InvalidParametersError(f"need 0 <= l <= m, got l={l} m={m}")
    sub = _kml_core(m, l)
    dims = sub.cohomology_dims()
    checks: dict[str, bool] = {}

    if m == l:
        checks["ground_field_at_m_equals_l"] = (
            {n: sub.dim(n) for n in sub.degrees()} == {-l: 1} and dims == {-l: 1}
        )

    # coefficient-sum functional as an added top row; Complex() proves it
    # pairs to zero with d, and empty cohomology proves acyclicity
    basis = {n: list(sub.space.basis(n)) for n in sub.space.degrees()}
    if -l + 1 in basis:
        raise BarError("unexpected words above the all-x column")
    basis[-l + 1] = [("sum",)]
    space = GradedSpace(basis)
    blocks = {n: sub.d.block(n) for n in sub.space.degrees() if n != -l}
    blocks[-l] = Matrix(1, sub.dim(-l), {(0, j): ONE for j in range(sub.dim(-l))})
    aug = Complex(space, GradedMap(space, space, 1, blocks), check=True)
    checks["augmented_acyclic"] = not aug.cohomology_dims()

    bigger = _kml_core(m + 1, l)
    include = GradedMap.from_basis_action(
        sub.space, bigger.space, 0, lambda n, lab: [(lab, ONE)]
    )
    checks["inclusion_quasi_iso"] = is_quasi_isomorphism(
        include, sub, bigger, range(-m - 2, 2)
    )

    return KmlComplex(m, l, tuple(range(m + 1)), sub, dims, checks)


# -- weighted variant ----------------------------------------------------


def homogeneous_bar(
    a: DgaPresentation, eps1: Augmentation, eps2: Augmentation, t: BarTruncation
) -> BarComplexInstance:
    """Two-sided instance with word weights (sum of letter weights).

    Requires a weighted algebra and augmentations supported on weight
    zero; both differentials preserve the weight, which is re-checked
    entry by entry during assembly.
    """
    if a.weights is None:
        raise NotWeightedError(f"{a.name} carries no weights")
    for eps in (eps1, eps2):
        for lab, v in eps.values.items():
            if v != 0 and a.degree_of.get(lab) == 0 and a.weight_of(lab) != 0:
                raise NotWeightedError(
                    f"augmentation {eps.name} is nonzero on weight {a.weight_of(lab)}"
                )
    inst = build_augmented_bar(a, eps1, eps2, t)
    weight = {}
    for _, w in inst.words():
        weight[w] = sum(a.weight_of(x) for x in w[1])
    for (p, q), w in inst.words():
        for tw, _ in aug_outer_terms(a, eps1, eps2, w):
            if weight[tw] != weight[w]:
                raise NotWeightedError(f"index drop changes weight on {w!r}")
        for tw, _ in inner_terms(a, w):
            if weight[tw] != weight[w]:
                raise NotWeightedError(f"letter differential changes weight on {w!r}")
    inst.kind = "homogeneous"
    inst.word_weight = weight
    return inst


def weight_component(b: BarComplexInstance, w: int) -> Complex:
    if b.word_weight is None:
        raise NotWeightedError("instance carries no weights")
    return select_subcomplex(
        b.total(), lambda n, lab: b.word_weight[lab[2]] == w
    )


def weight_dims(b: BarComplexInstance) -> dict[int, dict[int, int]]:
    """degree -> weight -> dimension bookkeeping for the splitting."""
    out: dict[int, dict[int, int]] = {}
    for (p, q), word in b.words():
        per = out.setdefault(p + q, {})
        w = b.word_weight[word]
        per[w] = per.get(w, 0) + 1
    return out


# -- copaths over glued algebras ------------------------------------------


def copath_augmentations(
    fp: FiberProductDga, eps: Augmentation
) -> tuple[Augmentation, Augmentation]:
    """The two end augmentations a copath couples: eps pulled through
    each leg and extended to the glued algebra by the projections."""
    vals1 = {}
    vals2 = {}
    for lab in fp.a1.space.basis(0) if 0 in fp.a1.space.degrees() else ():
        v = eps.of_combo(fp.a12, fp.u1.apply_label(lab))
        if v != 0:
            vals1[("a1", lab)] = v
    for lab in fp.a2.space.basis(0) if 0 in fp.a2.space.degrees() else ():
        v = eps.of_combo(fp.a12, fp.u2.apply_label(lab))
        if v != 0:
            vals2[("a2", lab)] = v
    return (
        Augmentation(f"{eps.name}.leg1", vals1),
        Augmentation(f"{eps.name}.leg2", vals2),
    )


def copath(fp: FiberProductDga, eps: Augmentation, b: BarComplexInstance) -> dict:
    """Degree-0 functional on the bar of the glued algebra.

    No-letter words pair to 1; a single-letter word pairs to minus the
    eps-value of its glue component (the glue tag raises degree by one,
    so the relevant letters are the degree-1 ones with a degree-0 glue
    label).  Everything else pairs to zero.  The minus sign is what makes
    the pairing with the total differential vanish; the plain sum does
    not close up.
    """
    if b.dga is not fp.total:
        raise ShapeMismatchError("instance is not over the glued algebra")
    out: dict = {}
    for (p, q), w in b.words():
        if p + q != 0:
            continue
        alpha, letters = w
        if len(alpha) == 1:
            out[(p, q, w)] = ONE
        elif len(alpha) == 2:
            (x,) = letters
            if isinstance(x, tuple) and len(x) == 2 and x[0] == "a12":
                v = eps.of_label(fp.a12, x[1])
                if v != 0:
                    out[(p, q, w)] = -v
    return out


def copath_checks(fp: FiberProductDga, eps: Augmentation, b: BarComplexInstance) -> dict:
    """Pair the copath with every total differential out of degree -1."""
    func = copath(fp, eps, b)
    tot = b.total()
    labels0 = tot.space.basis(0)
    vec = [func.get(lab, ZERO) for lab in labels0]
    block = tot.d.block(-1)
    bad = []
    for j, lab in enumerate(tot.space.basis(-1)):
        s = ZERO
        for (i, jj), v in block.entries.items():
            if jj == j:
                s += vec[i] * v
        if s != 0:
            bad.append({"word": lab, "pairing": s})
    return {
        "degree_minus_one_dim": tot.dim(-1),
        "ok": not bad,
        "failures": bad[:3],
    }

"""Graded layer: spaces, maps, tensor signs, total complexes."""

from __future__ import annotations

from fractions import Fraction

import pytest

from barkit.complexes import (
    Complex,
    DegreeWindowError,
    DoubleComplex,
    GradedMap,
    GradedSpace,
    hom_d,
    induced_cohomology_matrix,
    is_chain_map,
    is_quasi_isomorphism,
    koszul_swap_sign,
    map_space_dim,
    pack_map,
    sign_pow,
    solve_homotopy,
    tensor_complex,
    tensor_double,
    tensor_map,
    tensor_space,
    tensor_total_iso,
    unpack_map,
)
from barkit.exactlin import Matrix, NotAComplexError

F = Fraction


def test_sign_helpers():
    assert [sign_pow(k) for k in range(-2, 3)] == [1, -1, 1, -1, 1]
    assert koszul_swap_sign(1, 1) == -1
    assert koszul_swap_sign(2, 1) == 1
    assert koszul_swap_sign(0, 5) == 1


def test_graded_space_basics():
    s = GradedSpace({0: ["a", "b"], 2: ["c"], 5: []})
    assert s.degrees() == [0, 2]
    assert s.dim(0) == 2
    assert s.dim(1) == 0
    assert s.total_dim() == 3
    assert s.index_of(0, "b") == 1
    assert s.has(2, "c") and not s.has(2, "a")
    with pytest.raises(KeyError):
        s.index_of(0, "c")
    with pytest.raises(ValueError):
        GradedSpace({0: ["a", "a"]})


def test_tensor_space_layout():
    s = GradedSpace({0: ["1"], 1: ["x"]})
    t = tensor_space(s, s)
    assert t.dim(0) == 1 and t.dim(1) == 2 and t.dim(2) == 1
    # degree 1: left degree ascending, so ("1","x") before ("x","1")
    assert t.basis(1) == (("1", "x"), ("x", "1"))


def _two_step():
    # single complex a0 -> a1, d(a0) = a1
    space = GradedSpace({0: ["a0"], 1: ["a1"]})
    d = GradedMap.from_basis_action(
        space, space, 1, lambda n, lab: [("a1", F(1))] if lab == "a0" else []
    )
    return Complex(space, d)


def test_graded_map_algebra():
    c = _two_step()
    ident = GradedMap.identity(c.space)
    assert ident.compose(c.d) == c.d
    assert c.d.compose(ident) == c.d
    assert (c.d - c.d).is_zero()
    assert c.d.apply_label(0, "a0") == [("a1", F(1))]
    assert c.d.apply_label(1, "a1") == []


def test_tensor_differential_koszul_sign():
    c = _two_step()
    ident = GradedMap.identity(c.space)
    d_total = tensor_map(c.d, ident) + tensor_map(ident, c.d)
    # second summand crosses a degree 1 element: d(a1 ⊗ a0) = -a1 ⊗ a1
    assert d_total.apply_label(1, ("a1", "a0")) == [(("a1", "a1"), F(-1))]
    assert d_total.apply_label(1, ("a0", "a1")) == [(("a1", "a1"), F(1))]
    # and the total squares to zero
    assert d_total.compose(d_total).is_zero()


def test_hom_d_of_chain_map_vanishes():
    c = _two_step()
    ident = GradedMap.identity(c.space)
    assert hom_d(ident, c.d, c.d).is_zero()
    assert is_chain_map(ident, c, c)
    # a degree 0 map that is not a chain map
    f = GradedMap.from_basis_action(
        c.space, c.space, 0, lambda n, lab: [(lab, F(2))] if n == 0 else []
    )
    assert not hom_d(f, c.d, c.d).is_zero()


def test_complex_rejects_bad_differential():
    space = GradedSpace({0: ["a"], 1: ["b"], 2: ["c"]})
    d = GradedMap.from_basis_action(
        space,
        space,
        1,
        lambda n, lab: [("b", F(1))] if lab == "a" else ([("c", F(1))] if lab == "b" else []),
    )
    with pytest.raises(NotAComplexError):
        Complex(space, d)


def test_shift_moves_degrees_without_sign():
    c = _two_step()
    sh = c.shift(1)
    assert sh.degrees() == [-1, 0]
    assert sh.d.block(-1) == c.d.block(0)
    assert sh.cohomology(-1).dim == c.cohomology(0).dim


def test_cohomology_dims():
    c = _two_step()
    assert c.cohomology_dims() == {}
    space = GradedSpace({0: ["a"], 1: ["b"]})
    z = Complex(space, GradedMap.zero(space, space, 1))
    assert z.cohomology_dims() == {0: 1, 1: 1}


def test_pack_unpack_round_trip():
    c = _two_step()
    f = GradedMap.from_basis_action(
        c.space, c.space, 0,
        lambda n, lab: [(lab, F(3) if n == 0 else F(-1, 2))],
    )
    vec = pack_map(f)
    assert len(vec) == map_space_dim(c.space, c.space, 0) == 2
    g = unpack_map(c.space, c.space, 0, vec)
    assert g == f


def _square_double():
    basis = {
        (0, 0): ["x"],
        (1, 0): ["y"],
        (0, 1): ["u"],
        (1, 1): ["v"],
    }
    one = Matrix.from_rows([[1]])
    outer = {(0, 0): one, (0, 1): one}
    inner = {(0, 0): one, (1, 0): one}
    return DoubleComplex(basis, outer, inner)


def test_double_complex_total():
    dc = _square_double()
    assert dc.total_dims() == {0: 1, 1: 2, 2: 1}
    tot = dc.total()
    # outer component at inner degree 1 is twisted by -1
    labels = dict(tot.d.apply_label(1, (0, 1, "u")))
    assert labels == {(1, 1, "v"): F(-1)}
    labels = dict(tot.d.apply_label(1, (1, 0, "y")))
    assert labels == {(1, 1, "v"): F(1)}
    assert tot.cohomology_dims() == {}


def test_double_complex_requires_commuting():
    basis = {
        (0, 0): ["x"],
        (1, 0): ["y"],
        (0, 1): ["u"],
        (1, 1): ["v"],
    }
    one = Matrix.from_rows([[1]])
    outer = {(0, 0): one, (0, 1): one.scale(-1)}  # anticommuting square
    inner = {(0, 0): one, (1, 0): one}
    with pytest.raises(NotAComplexError):
        DoubleComplex(basis, outer, inner)


def test_row_and_column_complexes():
    dc = _square_double()
    row0 = dc.row_complex(0)
    assert row0.degrees() == [0, 1]
    assert row0.cohomology_dims() == {}
    col1 = dc.column_complex(1)
    assert col1.cohomology_dims() == {}


def test_degree_window_guard():
    with pytest.raises(DegreeWindowError):
        GradedSpace({17: ["too far"]})
    with pytest.raises(DegreeWindowError):
        GradedSpace({-17: ["too far"]})
    GradedSpace({16: ["edge"]})  # boundary is allowed


def test_tensor_complex_unit_and_acyclic():
    unit_space = GradedSpace({0: ["1"]})
    unit = Complex(unit_space, GradedMap.zero(unit_space, unit_space, 1))
    c = _two_step()
    t = tensor_complex(unit, c)
    assert [t.dim(n) for n in (0, 1)] == [c.dim(0), c.dim(1)]
    assert t.cohomology_dims() == c.cohomology_dims()
    # acyclic ⊗ acyclic stays acyclic
    tt = tensor_complex(c, c)
    assert tt.cohomology_dims() == {}
    assert tt.dim(1) == 2


def test_solve_homotopy():
    c = _two_step()
    ident = GradedMap.identity(c.space)
    zero = GradedMap.zero(c.space, c.space, 0)
    h = solve_homotopy(ident, zero, c.d, c.d)
    assert h is not None
    assert hom_d(h, c.d, c.d) == ident
    # with zero differential the identity is not null-homotopic
    space = GradedSpace({0: ["a"], 1: ["b"]})
    z = Complex(space, GradedMap.zero(space, space, 1))
    assert solve_homotopy(GradedMap.identity(space), GradedMap.zero(space, space, 0), z.d, z.d) is None


def test_tensor_double_and_interchange_iso():
    dc = _square_double()
    prod = tensor_double(dc, dc)
    assert prod.dim(1, 1) == 4  # (1,0)x(0,1), (0,1)x(1,0), (0,0)x(1,1), (1,1)x(0,0)
    nu = tensor_total_iso(dc, dc)
    src = tensor_complex(dc.total(), dc.total())
    dst = tensor_double(dc, dc).total()
    assert is_chain_map(nu, src, dst)
    # bijective with signs +-1: composing with itself transposed gives identity blocks
    for n in src.degrees():
        block = nu.block(n)
        assert block.rows == block.cols == src.dim(n)
        prod_mat = block.transpose() * block
        assert prod_mat == Matrix.identity(src.dim(n))


def test_induced_map_and_quasi_iso():
    c = _two_step()
    space = GradedSpace({0: ["a"], 1: ["b"]})
    z = Complex(space, GradedMap.zero(space, space, 1))
    ident = GradedMap.identity(z.space)
    assert is_quasi_isomorphism(ident, z, z, [0, 1])
    zero_map = GradedMap.zero(z.space, z.space, 0)
    assert not is_quasi_isomorphism(zero_map, z, z, [0, 1])
    m = induced_cohomology_matrix(ident, z, z, 0)
    assert m == Matrix.identity(1)
    # quasi-iso respects dimension mismatch
    assert not is_quasi_isomorphism(
        GradedMap.zero(c.space, z.space, 0), c, z, [0]
    )

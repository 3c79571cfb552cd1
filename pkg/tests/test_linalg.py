from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import F2, F3, Q, Z
from stackhom.linalg import (
    Coefficients,
    ExactMatrix,
    FieldEchelon,
    GradedModulePresentation,
    HomologyBasis,
    HomologyGroup,
    determinant,
    homology_at,
    invariant_factors,
    nullspace,
    rank,
    rank_over_field,
    snf,
)


def matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def test_coefficient_parsing():
    assert Coefficients.parse("z") == Z
    assert Coefficients.parse("Q") == Q
    assert Coefficients.parse("f3") == F3
    assert F2.label == "F2" and Z.label == "Z" and not Z.is_field
    for bad in ("f4", "r", "f"):
        with pytest.raises(ValueError):
            Coefficients.parse(bad)


def test_prime_field_reduction_and_inverse():
    assert F3.reduce(-1) == 2
    assert F3.reduce(Fraction(1, 2)) == 2
    assert F3.inverse(2) == 2
    assert Q.inverse(3) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        Z.inverse(2)


def test_matrix_arithmetic():
    a = ExactMatrix.from_dense([[1, 2], [3, 4]])
    b = ExactMatrix.identity(2)
    assert (a @ b) == a
    assert (a - a).is_zero()
    assert a.T.to_dense() == [[1, 3], [2, 4]]
    assert a.apply([1, 1]) == [3, 7]
    assert a.reduce(F2).to_dense() == [[1, 0], [1, 0]]
    blk = ExactMatrix.block([2, 1], [1, 2], {(0, 1): a, (1, 0): ExactMatrix.from_dense([[5]])})
    assert blk.to_dense() == [[0, 1, 2], [0, 3, 4], [5, 0, 0]]


def test_snf_small_example():
    m = ExactMatrix.from_dense([[2, 4], [6, 8]])
    U, D, V = snf(m)
    assert (U @ m @ V) == D
    assert D.to_dense() == [[2, 0], [0, 4]]
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_is_a_unimodular_diagonalization(rows):
    m = ExactMatrix.from_dense(rows)
    U, D, V = snf(m)
    assert (U @ m @ V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    assert all(D[i, j] == 0 for i, j, _ in D.items() if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert nonzero == oracles.invariant_factors(rows, len(rows[0]))


@settings(max_examples=60, deadline=None)
@given(matrices(6, 6))
def test_invariant_factors_match_sympy(rows):
    assert invariant_factors(ExactMatrix.from_dense(rows)) == oracles.invariant_factors(rows, len(rows[0]))


@settings(max_examples=60, deadline=None)
@given(matrices(6, 6), st.sampled_from([None, 2, 3, 5]))
def test_rank_matches_sympy(rows, p):
    c = Q if p is None else Coefficients.prime_field(p)
    assert rank_over_field(ExactMatrix.from_dense(rows), c) == oracles.rank(rows, len(rows[0]), p)


def test_rank_over_integers_is_rational_rank():
    m = ExactMatrix.from_dense([[2, 0], [0, 2]])
    assert rank(m, Z) == 2
    assert rank(m, F2) == 0
    with pytest.raises(ValueError, match="field required"):
        rank_over_field(m, Z)


def test_determinant():
    assert determinant(ExactMatrix.from_dense([[0, 1], [1, 0]])) == -1
    assert determinant(ExactMatrix.from_dense([[2, 1, 0], [1, 2, 1], [0, 1, 2]])) == 4
    assert determinant(ExactMatrix.zeros(0, 0)) == 1


def test_homology_at_detects_non_complexes():
    d = ExactMatrix.from_dense([[1]])
    with pytest.raises(ValueError, match="not a complex"):
        homology_at(d, d, Z)


def test_homology_at_torsion():
    # Z --2--> Z : cokernel Z/2
    d_in = ExactMatrix.from_dense([[2]])
    d_out = ExactMatrix.zeros(0, 1)
    assert homology_at(d_in, d_out, Z) == (0, [2])
    assert homology_at(d_in, d_out, F2) == (1, [])
    assert homology_at(d_in, d_out, F3) == (0, [])


def test_group_descriptions():
    assert HomologyGroup(2, (2, 4)).describe(Z) == "Z^2 ⊕ Z/2 ⊕ Z/4"
    assert HomologyGroup().describe(Q) == "0"
    assert HomologyGroup(1).describe(F2) == "F2"
    with pytest.raises(ValueError):
        HomologyGroup(0, (2, 3))


def test_presentation_window_and_shift():
    g = GradedModulePresentation(Z, {0: HomologyGroup(1)}, (-2, 1))
    assert g.degrees() == [-2, -1, 0, 1]
    assert g.shifted(2)[2] == HomologyGroup(1)
    strict = GradedModulePresentation(Z, {0: HomologyGroup(1)}, (0, 0), unknown_outside=True)
    with pytest.raises(KeyError):
        strict[5]


def test_field_echelon_solves():
    e = FieldEchelon(F3)
    assert e.add([1, 1, 0])
    assert e.add([0, 1, 1])
    assert not e.add([1, 2, 1])
    combo = e.solve([1, 0, 2])
    vec = [0, 0, 0]
    basis = {0: [1, 1, 0], 1: [0, 1, 1], 2: [1, 2, 1]}
    for k, v in combo.items():
        vec = [(a + v * b) % 3 for a, b in zip(vec, basis[k])]
    assert vec == [1, 0, 2]


@settings(max_examples=40, deadline=None)
@given(matrices(5, 6), st.sampled_from([None, 2, 3]))
def test_nullspace_is_kernel(rows, p):
    c = Q if p is None else Coefficients.prime_field(p)
    m = ExactMatrix.from_dense(rows)
    ker = nullspace(m, c)
    assert len(ker) == m.cols - rank_over_field(m, c)
    for z in ker:
        assert all(c.reduce(v) == 0 for v in m.apply(z))


def test_homology_basis_integral_coordinates():
    # hexagon-free example: C_1 = Z^2 -> C_0 = Z with boundary, torsion from d_2 = [2, 0]^T
    d_in = ExactMatrix.from_dense([[2], [0]])
    d_out = ExactMatrix.zeros(0, 2)
    hb = HomologyBasis(d_in, d_out, Z)
    assert hb.group() == HomologyGroup(1, (2,))
    assert hb.is_boundary([2, 0])
    assert not hb.is_boundary([1, 0])


def test_homology_basis_field_coordinates_after_dependent_kernel_vectors():
    # RP^2-style situation: boundaries span part of the kernel before generators are chosen
    d_in = ExactMatrix.from_dense([[1], [1], [0]])
    d_out = ExactMatrix.zeros(0, 3)
    hb = HomologyBasis(d_in, d_out, F2)
    assert len(hb.generators) == 2
    for i, z in enumerate(hb.generators):
        coords = hb.coords(z)
        assert coords == [1 if j == i else 0 for j in range(2)]

import pytest

import oracles
from conftest import F2, F3, Q, Z
from stackhom.groups import FiniteGroup, GroupAction
from stackhom.linalg import HomologyGroup
from stackhom.resolutions import (
    BorelManifoldModel,
    bar_resolution,
    choose_resolution,
    periodic_resolution,
    reduced_resolution,
)
from stackhom.simplicial import SimplicialComplex


def test_group_axioms_checked():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [0, 1]])


def test_cyclic_and_symmetric_groups():
    c4 = FiniteGroup.cyclic(4)
    assert c4.is_cyclic and c4.element_order(c4.generator()) == 4
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6 and not s3.is_cyclic
    assert sorted(s3.element_order(g) for g in range(6)) == [1, 2, 2, 2, 3, 3]
    for g in range(6):
        assert s3.mul(g, s3.inverse(g)) == s3.identity


def test_action_must_preserve_complex():
    tri = SimplicialComplex(["0", "1", "2"], [["0", "1"], ["1", "2"]])
    with pytest.raises(ValueError, match="action does not preserve the complex"):
        GroupAction.from_generators(FiniteGroup.cyclic(3), tri, {1: [1, 2, 0]})


def test_bar_resolution_trivial_group():
    r = bar_resolution(FiniteGroup.trivial(), Z, 4)
    assert r.ranks == [1] * 5
    assert r.check_exact()
    # alternating zero / identity differentials
    assert [r.matrix(p).to_dense() for p in range(1, 5)] == [[[0]], [[1]], [[0]], [[1]]]


def test_bar_resolution_z2_ranks_and_exactness():
    r = bar_resolution(FiniteGroup.cyclic(2), F2, 4)
    assert r.ranks == [1, 2, 4, 8, 16]
    assert r.check_exact() and r.check_equivariant()


def test_bar_resolution_exactness_matches_oracle_ranks():
    r = bar_resolution(FiniteGroup.cyclic(3), Q, 3)
    cx = r.underlying_complex()
    dims = dict(cx.dims)
    diffs = {k: m.to_dense() for k, m in cx.d.items()}
    for k in range(-1, 3):
        assert oracles.homology(dims, diffs, k) == 0


def test_periodic_resolution_z2_f2_all_differentials_equal():
    r = periodic_resolution(2, F2, 6)
    mats = [r.matrix(p).to_dense() for p in range(1, 7)]
    assert all(m == [[1, 1], [1, 1]] for m in mats)
    assert r.check_exact()


def test_periodic_resolution_z3_alternates():
    r = periodic_resolution(3, Z, 4)
    g = r.group.generator()
    assert r.differentials[1][(0, 0)] == {g: 1, 0: -1}
    assert r.differentials[2][(0, 0)] == {0: 1, g: 1, r.group.power(g, 2): 1}
    assert r.check_exact() and r.check_equivariant()
    with pytest.raises(ValueError):
        periodic_resolution(1, Z, 3)


@pytest.mark.parametrize("c", [Z, F2, F3, Q])
def test_reduced_resolution_s3_is_exact(c):
    r = reduced_resolution(FiniteGroup.symmetric(3), c, 5)
    assert r.check_exact() and r.check_equivariant()
    assert r.ranks[0] == 1


def test_choose_resolution_auto():
    assert choose_resolution(FiniteGroup.cyclic(5), F2, 3).kind == "periodic"
    assert choose_resolution(FiniteGroup.trivial(), F2, 3).kind == "bar"
    assert choose_resolution(FiniteGroup.symmetric(3), F2, 3).kind == "reduced"


def test_truncate():
    r = periodic_resolution(2, F2, 6).truncate(3)
    assert r.length == 3 and r.check_exact()
    with pytest.raises(ValueError):
        r.truncate(5)


@pytest.mark.parametrize("stage", [1, 2, 3, 4])
def test_projective_model_dimensions(stage):
    m = BorelManifoldModel(2, stage, F2)
    assert m.dimension == stage - 1
    q = m.quotient_complex()
    # RP^{n-1} over F2: F2 in every degree 0..n-1
    assert [q.homology(k) for k in range(stage)] == [HomologyGroup(1)] * stage


@pytest.mark.parametrize("stage", [1, 2, 3])
def test_lens_model_dimensions(stage):
    m = BorelManifoldModel(3, stage, Z)
    assert m.dimension == 2 * stage - 1
    q = m.quotient_complex()
    d = m.dimension
    # lens space L^{2n-1}(3): Z, Z/3 in odd degrees below the top, Z on top
    assert q.homology(0) == HomologyGroup(1)
    assert q.homology(d) == HomologyGroup(1)
    for k in range(1, d, 2):
        assert q.homology(k) == HomologyGroup(0, (3,))
    sphere = m.sphere_complex()
    assert sphere.homology(0) == HomologyGroup(1) and sphere.homology(d) == HomologyGroup(1)
    assert all(sphere.homology(k).is_zero for k in range(1, d))

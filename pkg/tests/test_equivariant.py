import pytest

from conftest import F2, F3, Q, Z
from stackhom.chains import GroupAlgebraComplex
from stackhom.equivariant import (
    StabilizationError,
    borel_comparison,
    derived_fixed_points,
    equivariant_bm_homology,
    equivariant_chain_complex,
    equivariant_homology,
    homotopy_orbit_chains,
    orbit_complex,
)
from stackhom.groups import FiniteGroup, GroupAction
from stackhom.linalg import HomologyGroup
from stackhom.resolutions import bar_resolution
from stackhom.simplicial import SimplicialPair, boundary_complex, relative_complex
from stackhom.theories import compute

ONE = HomologyGroup(1)


def trivial(space, order=2):
    return GroupAction.trivial(FiniteGroup.cyclic(order), space.complex)


def test_trivial_action_on_point(space):
    ec = equivariant_chain_complex(space("point").pair, trivial(space("point")), F2)
    assert ec.gcomplex.matrix(0, 1).to_dense() == [[1]]
    assert not ec.regularized


def test_antipodal_circle_is_free(space):
    s = space("circle_antipodal")
    ec = equivariant_chain_complex(s.pair, s.action, Z)
    assert ec.is_free and ec.stabilizers == {1: 12}


def test_reflection_triggers_regularization(space):
    s = space("circle_flip")
    ec = equivariant_chain_complex(s.pair, s.action, F2)
    assert ec.regularized
    assert ec.action.is_regular()
    assert ec.stabilizers[2] > 0


def test_unstable_at_infinity_rejected():
    from stackhom.simplicial import SimplicialComplex

    edge = SimplicialComplex(["0", "1"], [["0", "1"]])
    pair = SimplicialPair(edge, edge.subcomplex([["0"]]))
    flip = GroupAction.from_generators(FiniteGroup.cyclic(2), edge, {1: [1, 0]})
    with pytest.raises(ValueError, match="at_infinity not G-stable"):
        equivariant_chain_complex(pair, flip, F2)


def test_z2_point_f2(space):
    rep = equivariant_homology(space("point").pair, trivial(space("point")), F2, (-4, 0))
    assert all(rep.groups[k] == ONE for k in range(-4, 1))
    assert "stabilized at N=6" in rep.meta["note"]
    assert rep.passed


def test_sphere2_antipodal_matches_rp2(space):
    s = space("sphere2_antipodal")
    rep = equivariant_homology(s.pair, s.action, F2, (-2, 2))
    assert [rep.groups[k] for k in range(-2, 3)] == [HomologyGroup(), HomologyGroup(), ONE, ONE, ONE]
    assert rep.passed


def test_trivial_group_gives_ordinary_homology(space):
    s = space("torus")
    a = GroupAction.trivial(FiniteGroup.trivial(), s.complex)
    rep = equivariant_homology(s.pair, a, Z, (-2, 2))
    assert rep.groups == compute(s.pair, "chains", Z).groups


def test_z3_point_integral_cohomology(space):
    rep = equivariant_homology(space("point").pair, trivial(space("point"), 3), Z, (-6, 0))
    assert rep.groups[0] == ONE
    for k in (-2, -4, -6):
        assert rep.groups[k] == HomologyGroup(0, (3,))
    for k in (-1, -3, -5):
        assert rep.groups[k].is_zero


def test_s3_point_integral_cohomology(space):
    # H^*(S3; Z) = Z, 0, Z/2, 0, Z/6 in degrees 0..4
    a = GroupAction.trivial(FiniteGroup.symmetric(3), space("point").complex)
    rep = equivariant_homology(space("point").pair, a, Z, (-4, 0))
    assert [rep.groups[k] for k in (0, -1, -2, -3, -4)] == [
        ONE, HomologyGroup(), HomologyGroup(0, (2,)), HomologyGroup(), HomologyGroup(0, (6,))]


def test_s3_rational_and_bar_versus_periodic(space):
    from stackhom.chains import ChainComplex, hom_over_group_ring, total_complex

    G = FiniteGroup.symmetric(3)
    r = bar_resolution(G, Q, 3)
    pt = GroupAlgebraComplex.trivial_action(ChainComplex(Q, {0: 1}), G)
    tot = total_complex(hom_over_group_ring(r, pt))
    assert [tot.homology(k) for k in (0, -1, -2)] == [ONE, HomologyGroup(), HomologyGroup()]
    p = space("point")
    per = equivariant_homology(p.pair, trivial(p), F2, (-3, 0), resolution="periodic")
    bar = equivariant_homology(p.pair, trivial(p), F2, (-3, 0), resolution="bar")
    assert per.groups == bar.groups


def test_line_flip_bm(space):
    s = space("line_flip")
    rep = equivariant_bm_homology(s.pair, s.action, F2, (-3, 1))
    assert rep.groups[1] == ONE
    assert all(rep.groups[k] == ONE for k in range(-3, 2))


def test_compact_bm_equals_chains_variant(space):
    s = space("circle_flip")
    a = equivariant_homology(s.pair, s.action, F2, (-2, 1))
    b = equivariant_bm_homology(s.pair, s.action, F2, (-2, 1))
    assert a.groups == b.groups


def test_compact_model_required(space):
    s = space("line_flip")
    with pytest.raises(ValueError, match="theory requires compact model"):
        equivariant_homology(s.pair, s.action, F2, (-1, 1))


def test_stabilization_cap_reports_partial(space):
    p = space("point")
    with pytest.raises(StabilizationError) as info:
        # a cap below the starting length means nothing can be compared
        equivariant_homology(p.pair, trivial(p), F2, (-4, 0), cap=1)
    assert "no stabilization" in str(info.value)


@pytest.mark.parametrize("name", ["circle_antipodal", "circle_rotation3", "sphere2_antipodal"])
def test_free_action_collapse(name, space):
    s = space(name)
    rep = equivariant_homology(s.pair, s.action, Z, (-3, s.complex.dimension))
    ec = equivariant_chain_complex(s.pair, s.action, Z)
    oc, proj = orbit_complex(ec)
    assert proj.is_chain_map()
    for k in range(0, s.complex.dimension + 1):
        assert rep.groups[k] == oc.homology(k)
    assert all(rep.groups[k].is_zero for k in range(-3, 0))


@pytest.mark.parametrize("name", ["circle_flip", "circle_rotation3", "circle_d3"])
def test_rational_orbit_homology(name, space):
    s = space(name)
    rep = equivariant_homology(s.pair, s.action, Q, (-3, 1))
    ec = equivariant_chain_complex(s.pair, s.action, Q)
    oc, _ = orbit_complex(ec)
    for k in (0, 1):
        assert rep.groups[k] == oc.homology(k)
    assert all(rep.groups[k].is_zero for k in range(-3, 0))


def test_homotopy_orbits(space):
    p = space("point")
    rep = homotopy_orbit_chains(p.pair, trivial(p), F2, 6)
    assert [rep.groups[k] for k in range(5)] == [ONE] * 5
    s = space("circle_antipodal")
    rep = homotopy_orbit_chains(s.pair, s.action, Z, 4)
    assert rep.groups[0] == ONE and rep.groups[1] == ONE and rep.passed
    t = space("circle")
    rep = homotopy_orbit_chains(t.pair, GroupAction.trivial(FiniteGroup.trivial(), t.complex), Z, 4)
    assert rep.groups == compute(t.pair, "chains", Z).groups


def test_borel_comparison_examples(space):
    p = space("point")
    rep = borel_comparison(p.pair, trivial(p, 3), F3, 4, (-4, 0))
    assert rep.meta["result"] == "match"
    rep = borel_comparison(p.pair, trivial(p), F2, None, (-6, 0))
    assert rep.meta["result"] == "match"
    c = space("circle")
    rep = borel_comparison(c.pair, trivial(c), F2, None, (-3, 1))
    assert rep.meta["result"] == "match"


def test_borel_comparison_errors(space):
    p = space("point")
    with pytest.raises(ValueError, match="field required"):
        borel_comparison(p.pair, trivial(p), Z, 3, (-1, 0))
    s3 = GroupAction.trivial(FiniteGroup.symmetric(3), p.complex)
    with pytest.raises(ValueError, match="model/group mismatch"):
        borel_comparison(p.pair, s3, F2, 3, (-1, 0))
    with pytest.raises(ValueError, match="window exceeds model acyclicity range"):
        borel_comparison(p.pair, trivial(p), F2, 2, (-5, 0))


def test_derived_fixed_points_window_and_lengths(space):
    p = space("point")
    ec = equivariant_chain_complex(p.pair, trivial(p), F2)
    pres, n1, n2, kind = derived_fixed_points(ec, (-4, 0))
    assert (n1, n2, kind) == (6, 8, "periodic")

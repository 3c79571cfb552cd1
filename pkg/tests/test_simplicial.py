import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import F2, F3, Q, Z
from stackhom.builtins import builtin_names
from stackhom.linalg import ExactMatrix, HomologyGroup
from stackhom.simplicial import (
    SimplicialComplex,
    SimplicialPair,
    barycentric_subdivision,
    boundary_complex,
    ez_aw,
    fundamental_chain,
    orient,
    product,
    relative_complex,
    simplicial_map,
    subdivide_pair,
)


def complex_from_index_facets(facets, n):
    return SimplicialComplex([str(i) for i in range(n)], [[str(v) for v in f] for f in facets])


def oracle_groups(cx):
    dims, diffs = oracles.simplicial_boundaries([tuple(cx.index[v] for v in f) for f in cx.facet_labels()])
    return {k: oracles.homology(dims, diffs, k, integral=True) for k in dims}


def test_malformed_facets():
    with pytest.raises(ValueError, match="malformed facet list"):
        SimplicialComplex(["0", "1"], [["0", "0"]])
    with pytest.raises(ValueError, match="malformed facet list"):
        SimplicialComplex(["0"], [["0", "7"]])


def test_f_vector_and_euler():
    tet = complex_from_index_facets([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], 4)
    assert tet.f_vector == [4, 6, 4]
    assert tet.euler_characteristic() == 2


@pytest.mark.parametrize("name", builtin_names())
def test_builtin_homology_matches_oracle(name, space):
    s = space(name)
    pres = boundary_complex(s.complex, Z).homology_all()
    for k, (free, tors) in oracle_groups(s.complex).items():
        assert pres[k] == HomologyGroup(free, tuple(tors))


def test_known_homology_values(space):
    # values frozen from the sympy oracle
    rp2 = boundary_complex(space("rp2").complex, Z).homology_all()
    assert [rp2[k] for k in range(3)] == [HomologyGroup(1), HomologyGroup(0, (2,)), HomologyGroup()]
    torus = boundary_complex(space("torus").complex, Z).homology_all()
    assert [torus[k].free_rank for k in range(3)] == [1, 2, 1]
    rp2f = boundary_complex(space("rp2").complex, F2).homology_all()
    assert [rp2f[k].free_rank for k in range(3)] == [1, 1, 1]


def test_relative_complex_of_open_line(space):
    pair = space("line_pair").pair
    assert relative_complex(pair, Z).homology_all().nonzero_degrees() == [1]
    disk = space("disk_pair").pair
    assert relative_complex(disk, Z).homology_all()[2] == HomologyGroup(1)


def test_pair_requires_subcomplex():
    a = complex_from_index_facets([(0, 1)], 2)
    b = SimplicialComplex(["0", "9"], [["0", "9"]])
    with pytest.raises(ValueError, match="A not a subcomplex"):
        SimplicialPair(a, b)


def test_full_subcomplex():
    tri = complex_from_index_facets([(0, 1), (1, 2), (0, 2)], 3)
    edge_pts = tri.subcomplex([["0"], ["1"]])
    assert not tri.is_full_subcomplex(edge_pts)
    assert tri.is_full_subcomplex(tri.full_subcomplex(["0", "1"]))


@pytest.mark.parametrize("name", ["triangle", "sphere2", "rp2", "disk_pair"])
def test_subdivision_preserves_presentations(name, space):
    s = space(name)
    pair, _ = subdivide_pair(s.pair)
    for c in (Z, F2):
        assert relative_complex(pair, c).homology_all() == relative_complex(s.pair, c).homology_all()


def test_subdivision_maps_are_chain_maps_and_inverse_on_homology(space):
    sub = barycentric_subdivision(space("sphere2").complex, Z)
    assert sub.forward.is_chain_map() and sub.backward.is_chain_map()
    comp = sub.forward.compose(sub.backward)
    for k in range(3):
        m = comp.induced(k)
        assert m == ExactMatrix.identity(m.rows)


def test_simplicial_map_of_collapse():
    edge = complex_from_index_facets([(0, 1)], 2)
    pt = complex_from_index_facets([(0,)], 1)
    f = simplicial_map(edge, pt, {0: 0, 1: 0}, Z)
    assert f.is_chain_map()


@pytest.mark.parametrize("pair", [("triangle", "triangle"), ("circle", "interval"), ("rp2", "triangle")])
def test_kunneth_over_field(pair, space):
    x, y = (space(n).complex for n in pair)
    for c in (Q, F2):
        hx = boundary_complex(x, c).homology_all()
        hy = boundary_complex(y, c).homology_all()
        hxy = boundary_complex(product(x, y), c).homology_all()
        top = x.dimension + y.dimension
        for n in range(top + 1):
            expected = sum(hx[p].free_rank * hy[n - p].free_rank for p in range(n + 1))
            assert hxy[n].free_rank == expected


def test_ez_aw_composite_is_identity(space):
    pc = ez_aw(space("triangle").complex, space("interval").complex, Z)
    assert pc.ez.is_chain_map() and pc.aw.is_chain_map()
    comp = pc.ez.compose(pc.aw)
    for k in pc.tensor.dims:
        assert comp.component(k) == ExactMatrix.identity(pc.tensor.dim(k))


def test_orientation_and_fundamental_chain(space):
    torus = space("torus").complex
    o = orient(torus)
    f = fundamental_chain(torus, o, Z)
    assert all(abs(v) == 1 for v in f)
    rp2 = space("rp2").complex
    with pytest.raises(ValueError, match="not a closed oriented manifold model"):
        orient(rp2)
    assert len([v for v in fundamental_chain(rp2, None, F2) if v]) == 10
    with pytest.raises(ValueError):
        fundamental_chain(rp2, None, Z)


@st.composite
def random_complexes(draw):
    n = draw(st.integers(2, 6))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True),
                           min_size=1, max_size=7))
    used = sorted({v for f in facets for v in f})
    remap = {v: i for i, v in enumerate(used)}
    return complex_from_index_facets([tuple(remap[v] for v in f) for f in facets], len(used))


@settings(max_examples=40, deadline=None)
@given(random_complexes())
def test_random_complex_homology_matches_oracle(cx):
    pres = boundary_complex(cx, Z).homology_all()
    for k, (free, tors) in oracle_groups(cx).items():
        assert pres[k] == HomologyGroup(free, tuple(tors))


@settings(max_examples=25, deadline=None)
@given(random_complexes())
def test_euler_characteristic_equals_alternating_betti(cx):
    for c in (Q, F3):
        pres = boundary_complex(cx, c).homology_all()
        assert sum((-1) ** k * pres[k].free_rank for k in range(cx.dimension + 1)) == cx.euler_characteristic()


@settings(max_examples=15, deadline=None)
@given(random_complexes())
def test_subdivision_invariance_random(cx):
    sd = barycentric_subdivision(cx).subdivided
    assert boundary_complex(sd, Z).homology_all() == boundary_complex(cx, Z).homology_all()

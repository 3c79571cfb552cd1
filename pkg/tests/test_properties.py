"""Property tests of the four theories on random small complexes and pairs."""

from hypothesis import given, settings, strategies as st

from conftest import F2, F3, Q, Z
from stackhom.simplicial import SimplicialComplex, SimplicialPair, product
from stackhom.theories import (
    compute,
    forget_supports_check,
    graded_commutativity_check,
    localization_check,
)


@st.composite
def random_complexes(draw, max_vertices=6, max_facet=4):
    n = draw(st.integers(2, max_vertices))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=max_facet, unique=True),
                           min_size=1, max_size=7))
    used = sorted({v for f in facets for v in f})
    remap = {v: str(i) for i, v in enumerate(used)}
    return SimplicialComplex([str(i) for i in range(len(used))], [[remap[v] for v in f] for f in facets])


@st.composite
def random_pairs(draw):
    x = draw(random_complexes())
    faces = x.facet_labels() + [[v] for v in x.vertices]
    chosen = draw(st.lists(st.sampled_from(faces), max_size=3))
    if not chosen:
        return SimplicialPair(x)
    return SimplicialPair(x, x.subcomplex(chosen))


@settings(max_examples=40, deadline=None)
@given(random_pairs(), st.sampled_from([Q, F2, F3]))
def test_duality_dimension_law_random(pair, c):
    bm = compute(pair, "borel-moore", c).groups
    cohc = compute(pair, "compact-cochains", c).groups
    for i in range(pair.ambient.dimension + 1):
        assert bm[i].free_rank == cohc[-i].free_rank
    ch = compute(pair.ambient, "chains", c).groups
    co = compute(pair.ambient, "cochains", c).groups
    for i in range(pair.ambient.dimension + 1):
        assert ch[i].free_rank == co[-i].free_rank


@settings(max_examples=30, deadline=None)
@given(random_complexes())
def test_integral_and_rational_free_ranks_agree(cx):
    z = compute(cx, "chains", Z).groups
    q = compute(cx, "chains", Q).groups
    for k in range(cx.dimension + 1):
        assert z[k].free_rank == q[k].free_rank


@settings(max_examples=30, deadline=None)
@given(random_complexes(), st.data())
def test_localization_exact_on_random_full_subcomplexes(cx, data):
    ids = data.draw(st.lists(st.sampled_from(list(cx.vertices)), min_size=1, unique=True))
    c = data.draw(st.sampled_from([Q, F2, Z]))
    rep = localization_check(cx, cx.full_subcomplex(ids), c)
    assert rep.passed, [ch.line() for ch in rep.checks if not ch.passed]


@settings(max_examples=25, deadline=None)
@given(random_complexes())
def test_forget_supports_on_compact_random(cx):
    assert forget_supports_check(SimplicialPair(cx), Z).passed


@settings(max_examples=15, deadline=None)
@given(random_complexes(max_vertices=4, max_facet=2), random_complexes(max_vertices=4, max_facet=2),
       st.sampled_from([Q, F2]))
def test_kunneth_dimensions(x, y, c):
    hx = compute(x, "chains", c).groups
    hy = compute(y, "chains", c).groups
    hxy = compute(product(x, y), "chains", c).groups
    for n in range(x.dimension + y.dimension + 1):
        want = sum(hx[p].free_rank * hy[n - p].free_rank for p in range(n + 1))
        assert hxy[n].free_rank == want


@settings(max_examples=15, deadline=None)
@given(random_complexes(max_vertices=5, max_facet=3), st.sampled_from([F2, F3, Q]))
def test_cup_graded_commutative_random(cx, c):
    assert graded_commutativity_check(cx, c).passed

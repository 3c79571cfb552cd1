"""Library of small spaces, pairs and actions."""

from __future__ import annotations

from .simplicial import SimplicialComplex, barycentric_subdivision, orient, product
from .spacefile import SpaceFile, SpaceFileError

__all__ = ["BUILTINS", "builtin_names", "builtin_space_file"]


def _ids(n: int) -> list[str]:
    return [str(i) for i in range(n)]


def _hexagon_edges() -> list[list[str]]:
    return [sorted([str(i), str((i + 1) % 6)], key=int) for i in range(6)]


def _orientation_of(cx: SimplicialComplex):
    o = orient(cx)
    return [(o.signs[s], cx.labels(s)) for s in cx.simplices(cx.dimension)]


def _file(name, cx: SimplicialComplex, **kw) -> SpaceFile:
    return SpaceFile(name, list(cx.vertices), cx.facet_labels(), **kw)


def _point():
    return SpaceFile("point", ["0"], [["0"]])


def _interval():
    return SpaceFile("interval", ["0", "1"], [["0", "1"]])


def _line_pair():
    return SpaceFile("line_pair", ["0", "1"], [["0", "1"]], at_infinity=[["0"], ["1"]])


def _line_flip():
    return SpaceFile("line_flip", ["0", "1"], [["0", "1"]], at_infinity=[["0"], ["1"]],
                     group_kind="cyclic", group_size=2, action={1: ["1", "0"]})


def _triangle():
    return SpaceFile("triangle", _ids(3), [["0", "1"], ["0", "2"], ["1", "2"]])


def _hexagon() -> SimplicialComplex:
    return SimplicialComplex(_ids(6), _hexagon_edges(), name="circle")


def _circle():
    cx = _hexagon()
    return _file("circle", cx, orientation=_orientation_of(cx))


def _circle_action(name, kind, size, action):
    cx = _hexagon()
    return _file(name, cx, group_kind=kind, group_size=size, action=action)


def _rotate(k):
    return [str((v + k) % 6) for v in range(6)]


def _circle_antipodal():
    return _circle_action("circle_antipodal", "cyclic", 2, {1: _rotate(3)})


def _circle_flip():
    return _circle_action("circle_flip", "cyclic", 2, {1: [str((1 - v) % 6) for v in range(6)]})


def _circle_rotation3():
    return _circle_action("circle_rotation3", "cyclic", 3, {1: _rotate(2)})


def _circle_d3():
    # element 1 swaps 1 and 2, element 3 is the 3-cycle 0->1->2->0
    return _circle_action("circle_d3", "symmetric", 3,
                          {1: [str((1 - v) % 6) for v in range(6)], 3: _rotate(2)})


def _disk_pair():
    facets = [sorted([str(i), str((i + 1) % 6)], key=int) + ["c"] for i in range(6)]
    return SpaceFile("disk_pair", _ids(6) + ["c"], facets, at_infinity=_hexagon_edges())


def _tetra_boundary() -> SimplicialComplex:
    return SimplicialComplex(_ids(4), [["0", "1", "2"], ["0", "1", "3"], ["0", "2", "3"], ["1", "2", "3"]],
                             name="sphere2")


def _sphere2():
    cx = _tetra_boundary()
    return _file("sphere2", cx, orientation=_orientation_of(cx))


def _sphere2_antipodal():
    sub = barycentric_subdivision(_tetra_boundary())
    sd = sub.subdivided
    full = (0, 1, 2, 3)
    perm = []
    for b in range(len(sd.vertices)):
        s = next(t for t, i in sub.barycenter.items() if i == b)
        comp = tuple(v for v in full if v not in s)
        perm.append(sd.vertices[sub.barycenter[comp]])
    return _file("sphere2_antipodal", sd, orientation=_orientation_of(sd),
                 group_kind="cyclic", group_size=2, action={1: perm})


def _torus():
    cx = product(_hexagon(), _hexagon())
    return _file("torus", cx, orientation=_orientation_of(cx))


_RP2_FACETS = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
               (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


def _rp2():
    cx = SimplicialComplex(_ids(6), [[str(v) for v in f] for f in _RP2_FACETS], name="rp2")
    return _file("rp2", cx)


BUILTINS = {
    "point": _point,
    "interval": _interval,
    "line_pair": _line_pair,
    "line_flip": _line_flip,
    "triangle": _triangle,
    "circle": _circle,
    "circle_antipodal": _circle_antipodal,
    "circle_flip": _circle_flip,
    "circle_rotation3": _circle_rotation3,
    "circle_d3": _circle_d3,
    "disk_pair": _disk_pair,
    "sphere2": _sphere2,
    "sphere2_antipodal": _sphere2_antipodal,
    "torus": _torus,
    "rp2": _rp2,
}

DESCRIPTIONS = {
    "point": "a single vertex",
    "interval": "closed interval [0, 1]",
    "line_pair": "interval with both endpoints at infinity (the open line)",
    "line_flip": "line_pair with Z/2 swapping the endpoints",
    "triangle": "hollow triangle, 3-vertex circle",
    "circle": "hexagon circle, oriented",
    "circle_antipodal": "hexagon with Z/2 acting by v -> v+3 (free)",
    "circle_flip": "hexagon with Z/2 acting by v -> 1-v (reflection)",
    "circle_rotation3": "hexagon with Z/3 acting by v -> v+2 (free)",
    "circle_d3": "hexagon with the symmetric group S3 acting as a dihedral group",
    "disk_pair": "cone on the hexagon with the hexagon at infinity (the open disk)",
    "sphere2": "boundary of the 3-simplex, oriented",
    "sphere2_antipodal": "subdivided 2-sphere with the free complement involution",
    "torus": "product of two hexagons, oriented",
    "rp2": "6-vertex real projective plane",
}


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


def builtin_space_file(name: str) -> SpaceFile:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise SpaceFileError(f"unknown builtin {name!r}") from None

"""Line-oriented text format for spaces, pairs, orientations and group actions.

Example::

    NAME circle_antipodal
    VERTICES
    0 1 2 3 4 5
    FACETS
    0 1
    1 2
    ...
    GROUP cyclic 2
    ACTION
    1: 3 4 5 0 1 2

Sections start with a keyword line.  ``VERTICES`` may span several lines.
Each ``FACETS`` / ``AT_INFINITY`` line is one face; each ``ORIENTATION``
line is a sign followed by a top simplex.  ``GROUP`` is ``cyclic m``,
``symmetric n`` or ``table n`` followed by ``n`` rows of the
multiplication table (identity is element 0).  ``ACTION`` lines
``g: images`` give the image of every vertex, in ``VERTICES`` order, under
group element ``g``; elements that are not listed are generated.
``#`` starts a comment.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .groups import FiniteGroup, GroupAction
from .simplicial import Orientation, SimplicialComplex, SimplicialPair

__all__ = ["SpaceFile", "SpaceFileError", "Space", "parse_space", "load_space"]

_SECTIONS = ("NAME", "VERTICES", "FACETS", "AT_INFINITY", "ORIENTATION", "GROUP", "ACTION")


class SpaceFileError(ValueError):
    """Malformed space description."""


@dataclass
class SpaceFile:
    name: str
    vertices: list[str]
    facets: list[list[str]]
    at_infinity: list[list[str]] | None = None
    orientation: list[tuple[int, list[str]]] | None = None
    group_kind: str | None = None
    group_size: int | None = None
    group_table: list[list[int]] | None = None
    action: dict[int, list[str]] = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"NAME {self.name}", "VERTICES", " ".join(self.vertices), "FACETS"]
        lines.extend(" ".join(f) for f in self.facets)
        if self.at_infinity:
            lines.append("AT_INFINITY")
            lines.extend(" ".join(f) for f in self.at_infinity)
        if self.orientation:
            lines.append("ORIENTATION")
            lines.extend(f"{'+' if s > 0 else '-'} {' '.join(f)}" for s, f in self.orientation)
        if self.group_kind:
            lines.append(f"GROUP {self.group_kind} {self.group_size}")
            if self.group_kind == "table":
                lines.extend(" ".join(str(x) for x in row) for row in self.group_table)
            if self.action:
                lines.append("ACTION")
                lines.extend(f"{g}: {' '.join(img)}" for g, img in sorted(self.action.items()))
        return "\n".join(lines) + "\n"

    @property
    def digest(self) -> str:
        return "sha256:" + hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def build(self) -> "Space":
        try:
            cx = SimplicialComplex(self.vertices, self.facets, name=self.name)
            pair = SimplicialPair(cx)
            if self.at_infinity:
                pair = SimplicialPair(cx, cx.subcomplex(self.at_infinity))
            orientation = None
            if self.orientation:
                signs = {}
                for s, f in self.orientation:
                    t = tuple(sorted(cx.index[v] for v in f))
                    if len(t) - 1 != cx.dimension or t not in cx:
                        raise SpaceFileError(f"orientation entry {f} is not a top simplex")
                    signs[t] = s
                orientation = Orientation(signs)
            group = self.make_group()
            action = None
            if group is not None:
                gens = {}
                for g, img in self.action.items():
                    if not 0 <= g < group.order:
                        raise SpaceFileError(f"group element {g} out of range")
                    if len(img) != len(self.vertices):
                        raise SpaceFileError(f"action of {g} lists {len(img)} images")
                    gens[g] = [cx.index[v] for v in img]
                if gens:
                    action = GroupAction.from_generators(group, cx, gens)
                else:
                    action = GroupAction.trivial(group, cx)
        except SpaceFileError:
            raise
        except (ValueError, KeyError) as err:
            raise SpaceFileError(str(err)) from None
        return Space(self, cx, pair, orientation, group, action)

    def make_group(self) -> FiniteGroup | None:
        if not self.group_kind:
            return None
        if self.group_kind == "cyclic":
            return FiniteGroup.cyclic(self.group_size)
        if self.group_kind == "symmetric":
            return FiniteGroup.symmetric(self.group_size)
        if self.group_kind == "table":
            return FiniteGroup(self.group_table, 0)
        raise SpaceFileError(f"unknown group kind {self.group_kind!r}")


@dataclass
class Space:
    """A parsed space file turned into working objects."""

    source: SpaceFile
    complex: SimplicialComplex
    pair: SimplicialPair
    orientation: Orientation | None
    group: FiniteGroup | None
    action: GroupAction | None

    @property
    def digest(self) -> str:
        return self.source.digest

    @property
    def name(self) -> str:
        return self.source.name


def parse_space(text: str) -> SpaceFile:
    name = None
    vertices: list[str] = []
    facets: list[list[str]] = []
    at_inf: list[list[str]] | None = None
    orientation: list | None = None
    gkind = gsize = None
    gtable: list[list[int]] | None = None
    action: dict[int, list[str]] = {}
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head in _SECTIONS:
            if head in seen:
                raise SpaceFileError(f"line {lineno}: duplicate section {head}")
            seen.add(head)
            section = head
            rest = rest.strip()
            if head == "NAME":
                if not rest:
                    raise SpaceFileError(f"line {lineno}: NAME needs a value")
                name = rest
            elif head == "GROUP":
                parts = rest.split()
                if len(parts) != 2 or parts[0] not in ("cyclic", "symmetric", "table"):
                    raise SpaceFileError(f"line {lineno}: expected GROUP cyclic|symmetric|table <n>")
                try:
                    gkind, gsize = parts[0], int(parts[1])
                except ValueError:
                    raise SpaceFileError(f"line {lineno}: group size must be an integer") from None
                if gsize < 1:
                    raise SpaceFileError(f"line {lineno}: group size must be positive")
                if gkind == "table":
                    gtable = []
            elif head == "AT_INFINITY":
                at_inf = []
            elif head == "ORIENTATION":
                orientation = []
            elif rest:
                raise SpaceFileError(f"line {lineno}: unexpected text after {head}")
            continue
        tokens = line.split()
        if section == "VERTICES":
            vertices.extend(tokens)
        elif section == "FACETS":
            facets.append(tokens)
        elif section == "AT_INFINITY":
            at_inf.append(tokens)
        elif section == "ORIENTATION":
            if tokens[0] not in ("+", "-") or len(tokens) < 2:
                raise SpaceFileError(f"line {lineno}: orientation lines look like '+ v0 v1 ...'")
            orientation.append((1 if tokens[0] == "+" else -1, tokens[1:]))
        elif section == "GROUP" and gkind == "table":
            try:
                gtable.append([int(t) for t in tokens])
            except ValueError:
                raise SpaceFileError(f"line {lineno}: table rows must be integers") from None
        elif section == "ACTION":
            g, sep, imgs = line.partition(":")
            if not sep:
                raise SpaceFileError(f"line {lineno}: action lines look like 'g: images'")
            try:
                gi = int(g.strip())
            except ValueError:
                raise SpaceFileError(f"line {lineno}: group element must be an integer") from None
            if gi in action:
                raise SpaceFileError(f"line {lineno}: element {gi} given twice")
            action[gi] = imgs.split()
        else:
            raise SpaceFileError(f"line {lineno}: data outside a section")
    if name is None:
        raise SpaceFileError("missing NAME")
    if not vertices:
        raise SpaceFileError("missing VERTICES")
    if len(set(vertices)) != len(vertices):
        raise SpaceFileError("duplicate vertex identifiers")
    declared = set(vertices)
    for f in facets + (at_inf or []) + [f for _, f in (orientation or [])]:
        bad = [v for v in f if v not in declared]
        if bad:
            raise SpaceFileError(f"undeclared vertices {bad}")
    if action and not gkind:
        raise SpaceFileError("ACTION without GROUP")
    if gkind == "table" and len(gtable) != gsize:
        raise SpaceFileError(f"group table has {len(gtable)} rows, expected {gsize}")
    for g, img in action.items():
        bad = [v for v in img if v not in declared]
        if bad:
            raise SpaceFileError(f"action of {g} uses undeclared vertices {bad}")
    return SpaceFile(name, vertices, facets, at_inf or None, orientation or None,
                     gkind, gsize, gtable, action)


def load_space(spec: str) -> Space:
    """Load ``builtin:<name>`` or a file path."""
    from .builtins import builtin_space_file

    if spec.startswith("builtin:"):
        return builtin_space_file(spec[len("builtin:"):]).build()
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise SpaceFileError(f"cannot read {spec}: {err.strerror}") from None
    return parse_space(text).build()

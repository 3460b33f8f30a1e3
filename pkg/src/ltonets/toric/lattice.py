"""Edge-lattice geometry for the Toric Code.

Vertices are integer points; edge (x, y, "e") joins (x, y)-(x+1, y) and edge
(x, y, "n") joins (x, y)-(x, y+1).  A region is a vertex box
[x0, x1] x [y0, y1] with a boundary kind per side:

    smooth  the boundary line of edges belongs to the region;
    rough   the boundary line is removed, leaving dangling perpendicular edges.

A region's boundary sites on a side are the dangling edges (rough) or the
boundary-line edges (smooth), listed in increasing order along the side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

from ..errors import ParseError, ValidationError
from .pauli import Edge, PauliMonomial, edge_bit, edges_mask

ROUGH = "rough"
SMOOTH = "smooth"
SIDES = ("west", "east", "south", "north")


def edge_between(v1: tuple[int, int], v2: tuple[int, int]) -> Edge:
    (a, b), (c, d) = sorted((v1, v2))
    if b == d and c == a + 1:
        return (a, b, "e")
    if a == c and d == b + 1:
        return (a, b, "n")
    raise ValueError(f"{v1} and {v2} are not adjacent")


def edge_vertices(edge: Edge) -> tuple[tuple[int, int], tuple[int, int]]:
    x, y, d = edge
    return (x, y), ((x + 1, y) if d == "e" else (x, y + 1))


def star_edges(v: tuple[int, int]) -> tuple[Edge, ...]:
    x, y = v
    return ((x, y, "e"), (x - 1, y, "e"), (x, y, "n"), (x, y - 1, "n"))


def plaquette_edges(p: tuple[int, int]) -> tuple[Edge, ...]:
    x, y = p
    return ((x, y, "e"), (x, y + 1, "e"), (x, y, "n"), (x + 1, y, "n"))


@dataclass(frozen=True)
class LatticeRegion:
    """Vertex box with per-side boundary kinds."""

    x0: int
    y0: int
    x1: int
    y1: int
    west: str = ROUGH
    east: str = ROUGH
    south: str = ROUGH
    north: str = ROUGH

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValidationError(f"malformed rectangle {self.x0, self.y0, self.x1, self.y1}")
        for side in SIDES:
            if getattr(self, side) not in (ROUGH, SMOOTH):
                raise ValidationError(f"bad boundary kind {getattr(self, side)!r} on {side}")

    @classmethod
    def rect(cls, x0: int, y0: int, x1: int, y1: int, kinds: str | tuple = ROUGH) -> "LatticeRegion":
        if isinstance(kinds, str):
            kinds = (kinds,) * 4
        return cls(x0, y0, x1, y1, *kinds)

    def kind(self, side: str) -> str:
        return getattr(self, side)

    @property
    def kinds(self) -> tuple[str, str, str, str]:
        return tuple(getattr(self, s) for s in SIDES)

    @cached_property
    def edges(self) -> frozenset:
        out = set()
        for y in range(self.y0, self.y1 + 1):
            if (y == self.y0 and self.south == ROUGH) or (y == self.y1 and self.north == ROUGH):
                continue
            for x in range(self.x0, self.x1):
                out.add((x, y, "e"))
        for x in range(self.x0, self.x1 + 1):
            if (x == self.x0 and self.west == ROUGH) or (x == self.x1 and self.east == ROUGH):
                continue
            for y in range(self.y0, self.y1):
                out.add((x, y, "n"))
        return frozenset(out)

    @cached_property
    def mask(self) -> int:
        return edges_mask(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: (e[1], e[0], e[2]))

    def __contains__(self, edge: Edge) -> bool:
        return edge in self.edges

    def contains_all(self, edges) -> bool:
        return all(e in self.edges for e in edges)

    def is_empty(self) -> bool:
        return not self.edges

    def margins(self, outer: "LatticeRegion") -> dict[str, int]:
        return {
            "west": self.x0 - outer.x0,
            "east": outer.x1 - self.x1,
            "south": self.y0 - outer.y0,
            "north": outer.y1 - self.y1,
        }

    def __str__(self) -> str:
        kinds = self.kinds
        tail = kinds[0] if len(set(kinds)) == 1 else " ".join(kinds)
        return f"rect {self.x0} {self.y0} {self.x1} {self.y1} {tail}"


_RECT = re.compile(r"^rect\s+(-?\d+)\s+(-?\d+)\s+(-?\d+)\s+(-?\d+)((?:\s+(?:rough|smooth))*)\s*$")


def parse_region(text: str) -> LatticeRegion:
    """Parse "rect x0 y0 x1 y1 [kind | west east south north]"."""
    m = _RECT.match(text.strip())
    if not m:
        raise ParseError(f"bad region {text!r}; expected 'rect x0 y0 x1 y1 [kinds]'")
    x0, y0, x1, y1 = (int(v) for v in m.groups()[:4])
    kinds = m.group(5).split()
    if len(kinds) == 0:
        kinds = [ROUGH]
    if len(kinds) == 1:
        kinds = kinds * 4
    if len(kinds) != 4:
        raise ParseError("give one boundary kind or four (west east south north)")
    return LatticeRegion(x0, y0, x1, y1, *kinds)


# -- stabilizers -----------------------------------------------------------


class Stabilizer(NamedTuple):
    """A star (kind "A", site = vertex) or plaquette (kind "B", site = lower-left vertex)."""

    kind: str
    site: tuple[int, int]
    pauli: PauliMonomial

    @property
    def name(self) -> str:
        return f"{self.kind}{self.site}"


def star(v: tuple[int, int]) -> Stabilizer:
    return Stabilizer("A", v, PauliMonomial.from_edges(x_edges=star_edges(v)))


def plaquette(p: tuple[int, int]) -> Stabilizer:
    return Stabilizer("B", p, PauliMonomial.from_edges(z_edges=plaquette_edges(p)))


def stabilizer_generators(region: LatticeRegion) -> list[Stabilizer]:
    """All stars and plaquettes whose four edges lie in the region."""
    return list(_stabilizers(region))


@lru_cache(maxsize=512)
def _stabilizers(region: LatticeRegion) -> tuple[Stabilizer, ...]:
    if region.is_empty():
        return ()
    out = []
    for y in range(region.y0, region.y1 + 1):
        for x in range(region.x0, region.x1 + 1):
            if region.contains_all(star_edges((x, y))):
                out.append(star((x, y)))
    for y in range(region.y0, region.y1):
        for x in range(region.x0, region.x1):
            if region.contains_all(plaquette_edges((x, y))):
                out.append(plaquette((x, y)))
    return tuple(out)


# -- frames: move a side to the east ---------------------------------------


class Frame:
    """Lattice symmetry taking a chosen side of a region to the east side.

    ``to_global`` maps local vertices to global ones; edges are transported
    through their endpoints so directions are handled uniformly.
    """

    _VERTEX = {
        "east": (lambda p, q: (p, q), lambda x, y: (x, y)),
        "west": (lambda p, q: (-p, q), lambda x, y: (-x, y)),
        "north": (lambda p, q: (q, p), lambda x, y: (y, x)),
        "south": (lambda p, q: (q, -p), lambda x, y: (-y, x)),
    }
    # local side -> global side
    _SIDES = {
        "east": {"east": "east", "west": "west", "north": "north", "south": "south"},
        "west": {"east": "west", "west": "east", "north": "north", "south": "south"},
        "north": {"east": "north", "west": "south", "north": "east", "south": "west"},
        "south": {"east": "south", "west": "north", "north": "east", "south": "west"},
    }

    def __init__(self, side: str):
        if side not in self._VERTEX:
            raise ValidationError(f"unknown side {side!r}")
        self.side = side
        self._to_global, self._to_local = self._VERTEX[side]

    def vertex_to_global(self, v):
        return self._to_global(*v)

    def vertex_to_local(self, v):
        return self._to_local(*v)

    def edge_to_global(self, edge: Edge) -> Edge:
        a, b = edge_vertices(edge)
        return edge_between(self._to_global(*a), self._to_global(*b))

    def edge_to_local(self, edge: Edge) -> Edge:
        a, b = edge_vertices(edge)
        return edge_between(self._to_local(*a), self._to_local(*b))

    def region_to_local(self, region: LatticeRegion) -> LatticeRegion:
        corners = [self._to_local(x, y) for x in (region.x0, region.x1) for y in (region.y0, region.y1)]
        xs = [c[0] for c in corners]
        ys = [c[1] for c in corners]
        kinds = {loc: region.kind(glob) for loc, glob in self._SIDES[self.side].items()}
        local = LatticeRegion(min(xs), min(ys), max(xs), max(ys), **kinds)
        return local

    def pauli_to_local(self, p: PauliMonomial) -> PauliMonomial:
        return p.remap(self.edge_to_local)

    def pauli_to_global(self, p: PauliMonomial) -> PauliMonomial:
        return p.remap(self.edge_to_global)

    def stabilizer_to_global(self, kind: str, local_site) -> Stabilizer:
        if kind == "A":
            return star(self.vertex_to_global(local_site))
        corners = [self.vertex_to_global((local_site[0] + dx, local_site[1] + dy)) for dx in (0, 1) for dy in (0, 1)]
        return plaquette((min(c[0] for c in corners), min(c[1] for c in corners)))


# -- boundary intervals ----------------------------------------------------


@dataclass(frozen=True)
class BoundaryInterval:
    """The boundary sites of ``region`` on ``side`` with their generators.

    Attributes:
        region: the inner region Lambda.
        side: which side of Lambda is shared with Delta.
    """

    region: LatticeRegion
    side: str

    @property
    def kind(self) -> str:
        return self.region.kind(self.side)

    @cached_property
    def frame(self) -> Frame:
        return Frame(self.side)

    @cached_property
    def local_region(self) -> LatticeRegion:
        return self.frame.region_to_local(self.region)

    @cached_property
    def local_sites(self) -> tuple[Edge, ...]:
        R = self.local_region
        if self.kind == ROUGH:
            sites = [(R.x1 - 1, y, "e") for y in range(R.y0, R.y1 + 1) if (R.x1 - 1, y, "e") in R.edges]
        else:
            sites = [(R.x1, y, "n") for y in range(R.y0, R.y1) if (R.x1, y, "n") in R.edges]
        return tuple(sites)

    @cached_property
    def sites(self) -> tuple[Edge, ...]:
        return tuple(self.frame.edge_to_global(e) for e in self.local_sites)

    @property
    def n_sites(self) -> int:
        return len(self.local_sites)

    @cached_property
    def local_x_generators(self) -> tuple[PauliMonomial, ...]:
        if self.kind == ROUGH:
            return tuple(PauliMonomial.from_edges(x_edges=[e]) for e in self.local_sites)
        return tuple(PauliMonomial.from_edges(z_edges=[e]) for e in self.local_sites)

    @cached_property
    def local_y_supports(self) -> tuple[tuple[Edge, ...], ...]:
        sites = self.local_sites
        out = []
        for s, t in zip(sites, sites[1:]):
            if self.kind == ROUGH:
                # truncated plaquette: two dangling edges and the vertical between them
                out.append((s, t, (s[0], s[1], "n")))
            else:
                # truncated star at the vertex between two boundary edges
                out.append((s, t, (t[0] - 1, t[1], "e")))
        return tuple(out)

    @cached_property
    def local_y_generators(self) -> tuple[PauliMonomial, ...]:
        if self.kind == ROUGH:
            return tuple(PauliMonomial.from_edges(z_edges=s) for s in self.local_y_supports)
        return tuple(PauliMonomial.from_edges(x_edges=s) for s in self.local_y_supports)

    @cached_property
    def x_generators(self) -> tuple[PauliMonomial, ...]:
        return tuple(self.frame.pauli_to_global(p) for p in self.local_x_generators)

    @cached_property
    def y_generators(self) -> tuple[PauliMonomial, ...]:
        return tuple(self.frame.pauli_to_global(p) for p in self.local_y_generators)

    @cached_property
    def extra_bits(self) -> tuple[int, ...]:
        """Bit of the one edge of each y-generator that is not a site."""
        return tuple(edge_bit(self.frame.edge_to_global(s[2])) for s in self.local_y_supports)

    @cached_property
    def local_tilde(self) -> frozenset:
        """I together with the adjacent row/column of Lambda."""
        out = set(self.local_sites)
        for supp in self.local_y_supports:
            out.update(supp)
        return frozenset(out)

    @cached_property
    def tilde_mask(self) -> int:
        return edges_mask(self.frame.edge_to_global(e) for e in self.local_tilde)

    def monomial(self, a: int, b: int) -> PauliMonomial:
        """Realization of x^a y^b (bit i of a is x_{i+1}, bit j of b is y_{j+1})."""
        out = PauliMonomial()
        for i, g in enumerate(self.x_generators):
            if (a >> i) & 1:
                out = out * g
        for j, g in enumerate(self.y_generators):
            if (b >> j) & 1:
                out = out * g
        return out


class CompletelySurrounds(NamedTuple):
    s: int


class SurroundsWithSharedBoundary(NamedTuple):
    s: int
    interval: BoundaryInterval


@lru_cache(maxsize=1024)
def region_relation(inner: LatticeRegion, outer: LatticeRegion, s: int):
    """Classify inner << _s outer, inner shares one side with outer, or None."""
    if s < 1:
        raise ValidationError("surrounding constant must be positive")
    if inner.is_empty() or not inner.edges <= outer.edges:
        return None
    margins = inner.margins(outer)
    if any(m < 0 for m in margins.values()):
        return None
    shared = [side for side, m in margins.items() if m == 0]
    for side in shared:
        if inner.kind(side) != outer.kind(side):
            return None
    if len(shared) > 1:
        return None
    others = [m for side, m in margins.items() if side not in shared]
    if any(m < s for m in others):
        return None
    if not shared:
        return CompletelySurrounds(s)
    interval = BoundaryInterval(inner, shared[0])
    if interval.n_sites == 0:
        return None
    return SurroundsWithSharedBoundary(s, interval)


# -- half-translation duality ----------------------------------------------


def half_translate(edge: Edge) -> Edge:
    """Shift by (1/2, 1/2): horizontal edges become vertical and vice versa.

    Stars map to plaquettes at the same label and plaquettes at p to stars at
    p + (1, 1); combined with X <-> Z this preserves the stabilizer group.
    """
    x, y, d = edge
    return (x + 1, y, "n") if d == "e" else (x, y + 1, "e")


def dualize(p: PauliMonomial) -> PauliMonomial:
    """Half-translate and swap X with Z (phase adjusted for the reordering)."""
    moved = p.remap(half_translate)
    # X^x Z^z -> Z^x X^z = (-1)^{|x&z|} X^z Z^x
    return PauliMonomial(moved.phase + 2 * (moved.x & moved.z).bit_count(), moved.z, moved.x)

"""Pauli monomials in the binary symplectic representation.

A monomial is i^k X^x Z^z where x, z are bit masks over lattice edges and the
X factor is written to the left of the Z factor on every edge.  Edges are
mapped to bits by a fixed injective encoding of Z^2 x {e, n}, so monomials
built on different windows compare directly.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable

from ..errors import ParseError

Edge = tuple[int, int, str]
DIRECTIONS = ("e", "n")


def _zigzag(v: int) -> int:
    return 2 * v if v >= 0 else -2 * v - 1


def _unzigzag(v: int) -> int:
    return v // 2 if v % 2 == 0 else -(v + 1) // 2


@lru_cache(maxsize=1 << 16)
def edge_bit(edge: Edge) -> int:
    """Bit position of an edge (Cantor pairing of zigzag coordinates)."""
    x, y, d = edge
    a, b = _zigzag(x), _zigzag(y)
    pair = (a + b) * (a + b + 1) // 2 + b
    return 2 * pair + DIRECTIONS.index(d)


def bit_edge(bit: int) -> Edge:
    pair, d = divmod(bit, 2)
    # invert the Cantor pairing
    w = int(((8 * pair + 1) ** 0.5 - 1) // 2)
    while (w + 1) * (w + 2) // 2 <= pair:
        w += 1
    while w * (w + 1) // 2 > pair:
        w -= 1
    b = pair - w * (w + 1) // 2
    a = w - b
    return (_unzigzag(a), _unzigzag(b), DIRECTIONS[d])


def edges_mask(edges: Iterable[Edge]) -> int:
    mask = 0
    for e in edges:
        mask |= 1 << edge_bit(e)
    return mask


def mask_edges(mask: int) -> list[Edge]:
    out = []
    while mask:
        low = mask & -mask
        out.append(bit_edge(low.bit_length() - 1))
        mask ^= low
    return sorted(out, key=lambda e: (e[1], e[0], e[2]))


@dataclass(frozen=True)
class PauliMonomial:
    """i^phase * prod_e X_e^{x_e} Z_e^{z_e}."""

    phase: int = 0
    x: int = 0
    z: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_edges(cls, x_edges: Iterable[Edge] = (), z_edges: Iterable[Edge] = (), phase: int = 0):
        return cls(phase, edges_mask(x_edges), edges_mask(z_edges))

    @classmethod
    def identity(cls) -> "PauliMonomial":
        return cls()

    def __mul__(self, other: "PauliMonomial") -> "PauliMonomial":
        # Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        sign = 2 * ((self.z & other.x).bit_count() & 1)
        return PauliMonomial(self.phase + other.phase + sign, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PauliMonomial") -> bool:
        return symplectic_form(self, other) == 0

    @property
    def support(self) -> int:
        return self.x | self.z

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def normalized_phase(self) -> int:
        """Phase when written with Y = iXZ on edges carrying both X and Z."""
        return (self.phase - (self.x & self.z).bit_count()) % 4

    def is_hermitian(self) -> bool:
        return self.normalized_phase % 2 == 0

    def adjoint(self) -> "PauliMonomial":
        return PauliMonomial(-self.phase + 2 * (self.x & self.z).bit_count(), self.x, self.z)

    def restrict(self, mask: int) -> "PauliMonomial":
        return PauliMonomial(0, self.x & mask, self.z & mask)

    def on_edge(self, edge: Edge) -> tuple[int, int]:
        bit = edge_bit(edge)
        return (self.x >> bit) & 1, (self.z >> bit) & 1

    def remap(self, fn) -> "PauliMonomial":
        """Apply an edge map (preserving the X-before-Z convention)."""
        return PauliMonomial(
            self.phase,
            edges_mask(fn(e) for e in mask_edges(self.x)),
            edges_mask(fn(e) for e in mask_edges(self.z)),
        )

    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase]

    def __str__(self) -> str:
        return format_monomial(self)


def symplectic_form(p: PauliMonomial, q: PauliMonomial) -> int:
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def product(monomials: Iterable[PauliMonomial]) -> PauliMonomial:
    out = PauliMonomial()
    for m in monomials:
        out = out * m
    return out


def format_monomial(p: PauliMonomial) -> str:
    edges = sorted(set(mask_edges(p.x)) | set(mask_edges(p.z)), key=lambda e: (e[1], e[0], e[2]))
    parts = []
    k = p.normalized_phase
    if k:
        parts.append(f"i^{k}")
    for e in edges:
        xb, zb = p.on_edge(e)
        letter = "Y" if xb and zb else ("X" if xb else "Z")
        parts.append(f"{letter}@({e[0]},{e[1]},{e[2]})")
    return " ".join(parts) if parts else "I"


_TOKEN = re.compile(r"^([XYZ])@\((-?\d+),(-?\d+),([en])\)$")


def parse_monomial(text: str) -> PauliMonomial:
    """Parse e.g. "i^1 X@(3,4,e) Z@(2,2,n)"; "I" is the identity."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty monomial")
    phase = 0
    out = PauliMonomial()
    for i, tok in enumerate(tokens):
        if tok == "I":
            continue
        if i == 0 and tok.startswith("i^"):
            try:
                phase = int(tok[2:])
            except ValueError:
                raise ParseError(f"bad phase {tok!r}") from None
            continue
        m = _TOKEN.match(tok.replace(" ", ""))
        if not m:
            raise ParseError(f"bad monomial token {tok!r}")
        letter, x, y, d = m.groups()
        edge = (int(x), int(y), d)
        bit = 1 << edge_bit(edge)
        if out.support & bit:
            raise ParseError(f"edge {edge} appears twice")
        if letter == "X":
            out = out * PauliMonomial(0, bit, 0)
        elif letter == "Z":
            out = out * PauliMonomial(0, 0, bit)
        else:
            # Y = i X Z
            out = out * PauliMonomial(1, bit, bit)
    return PauliMonomial(out.phase + phase, out.x, out.z)


# -- F2 linear algebra on int rows -------------------------------------------


def f2_rank(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                break
    return len(pivots)


def f2_nullspace(rows: list[int], ncols: int) -> list[int]:
    """Basis of {v in F2^ncols : <row, v> = 0 for every row}."""
    pivots: dict[int, int] = {}
    for r in rows:
        for col, prow in pivots.items():
            if (r >> col) & 1:
                r ^= prow
        if not r:
            continue
        col = (r & -r).bit_length() - 1
        for c in list(pivots):
            if (pivots[c] >> col) & 1:
                pivots[c] ^= r
        pivots[col] = r
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = 1 << f
        for col, prow in pivots.items():
            if (prow >> f) & 1:
                v |= 1 << col
        basis.append(v)
    return basis

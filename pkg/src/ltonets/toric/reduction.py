"""Reduction of Delta-commuting Pauli monomials to boundary operators.

Given P supported in Lambda, with Lambda completely surrounded by Delta or
sharing one side J with it, P either anticommutes with some stabilizer of
Delta (then p P p = 0) or factors as

    P = g_1 ... g_k * i^phase * x^a y^b

with g's stabilizers inside Lambda and x^a y^b a canonical boundary monomial
on the sites of J (trivial when there is no shared side).

The factors are found by peeling Lambda column by column, working in the
frame where J is the east side.  A rough west column of dangling edges is
cleared of X by the stars just east of it; a smooth west column of vertical
edges is cleared of Z by the plaquettes just east of it.  Peeling stops once
the support's bounding box fits the two-column band next to J, where the
remainder is read off in terms of the boundary generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from ..errors import LtoError, ValidationError
from .boundary import BoundaryElement
from .lattice import (
    ROUGH,
    SMOOTH,
    BoundaryInterval,
    CompletelySurrounds,
    Frame,
    LatticeRegion,
    Stabilizer,
    plaquette_edges,
    _stabilizers,
    region_relation,
    star_edges,
)
from .pauli import PauliMonomial, edge_bit, f2_nullspace, product

SURROUND = 2


class AlgorithmError(LtoError):
    """An internal invariant of the reduction failed (a bug, not bad input)."""


@dataclass(frozen=True)
class NotCommuting:
    """P anticommutes with ``witness``, a stabilizer of Delta."""

    witness: Stabilizer


@dataclass(frozen=True)
class ReductionResult:
    """P = prod(word) * i^phase * x^a y^b.

    Attributes:
        word: stabilizers of Lambda, in multiplication order.
        phase: power of i.
        boundary: (a, b) canonical monomial, (0, 0) when trivial.
        interval: the shared boundary interval, or None.
    """

    word: tuple[Stabilizer, ...]
    phase: int
    boundary: tuple[int, int]
    interval: BoundaryInterval | None

    @property
    def trivial_boundary(self) -> bool:
        return self.boundary == (0, 0)

    def boundary_monomial(self) -> PauliMonomial:
        if self.interval is None:
            return PauliMonomial()
        return self.interval.monomial(*self.boundary)

    def reconstruct(self) -> PauliMonomial:
        rest = self.boundary_monomial()
        return product(g.pauli for g in self.word) * PauliMonomial(self.phase, 0, 0) * rest

    def key(self) -> tuple:
        """Comparable summary (used for Delta-independence checks)."""
        return (tuple(g.name for g in self.word), self.phase, self.boundary)


def _relation(inner: LatticeRegion, outer: LatticeRegion, surround: int = SURROUND):
    rel = region_relation(inner, outer, surround)
    if rel is None:
        raise ValidationError(
            f"Lambda must be completely surrounded by Delta or share exactly one side with it (s = {surround})"
        )
    return rel


def first_anticommuting(p: PauliMonomial, stabilizers: Iterable[Stabilizer]) -> Stabilizer | None:
    px, pz = p.x, p.z
    for g in stabilizers:
        q = g.pauli
        if ((px & q.z).bit_count() + (pz & q.x).bit_count()) & 1:
            return g
    return None


@lru_cache(maxsize=256)
def _touching(outer: LatticeRegion, inner: LatticeRegion) -> tuple[Stabilizer, ...]:
    """Stabilizers of outer meeting inner; the others commute with anything inside inner."""
    mask = inner.mask
    return tuple(g for g in _stabilizers(outer) if g.pauli.support & mask)


def _doubled_x(edge) -> int:
    return 2 * edge[0] + (1 if edge[2] == "e" else 0)


def pauli_reduce(p: PauliMonomial, inner: LatticeRegion, outer: LatticeRegion, surround: int = SURROUND):
    """Reduce p (supported in inner) relative to outer; see the module docstring.

    Returns:
        ReductionResult, or NotCommuting with the first anticommuting stabilizer.

    Raises:
        ValidationError: p is not supported in inner, or the regions do not
            stand in a surrounding relation.
    """
    if p.support & ~inner.mask:
        raise ValidationError("monomial support escapes Lambda")
    rel = _relation(inner, outer, surround)
    witness = first_anticommuting(p, _touching(outer, inner))
    if witness is not None:
        return NotCommuting(witness)
    interval = None if isinstance(rel, CompletelySurrounds) else rel.interval
    return _reduce_commuting(p, inner, interval)


@dataclass(frozen=True)
class _Check:
    bit: int
    peel_x: bool  # rough column: X is peeled, Z must be absent; smooth: the reverse
    stabilizer: Stabilizer | None  # None at a corner, where the edge must be clear
    edge: tuple


@dataclass(frozen=True)
class _Plan:
    columns: tuple[tuple[_Check, ...], ...]
    west_mask: int  # edges west of the boundary band (all edges without a shared side)


@lru_cache(maxsize=256)
def _plan(inner: LatticeRegion, interval: BoundaryInterval | None) -> _Plan:
    """Peeling schedule for a region, in global coordinates."""
    frame = interval.frame if interval is not None else Frame("east")
    region = frame.region_to_local(inner)
    x1 = region.x1
    shared_kind = region.east if interval is not None else None
    if shared_kind == ROUGH:
        band = 2 * x1 - 2
    elif shared_kind is not None:
        band = 2 * x1 - 1
    else:
        band = None
    west_mask = 0
    for e in region.edges:
        if band is None or _doubled_x(e) < band:
            west_mask |= 1 << edge_bit(frame.edge_to_global(e))

    columns = []
    a, west = region.x0, region.west
    while True:
        box = LatticeRegion(a, region.y0, x1, region.y1, west, region.east, region.south, region.north)
        checks = []
        if west == ROUGH:
            if a + 1 >= x1:
                break
            for y in range(region.y0, region.y1 + 1):
                e = (a, y, "e")
                if e in box.edges:
                    stab = frame.stabilizer_to_global("A", (a + 1, y)) if box.contains_all(star_edges((a + 1, y))) else None
                    g = frame.edge_to_global(e)
                    checks.append(_Check(edge_bit(g), True, stab, g))
            a, west = a + 1, SMOOTH
        else:
            if a + 1 > x1 or (a + 1 == x1 and region.east == ROUGH):
                break
            for y in range(region.y0, region.y1):
                e = (a, y, "n")
                if e in box.edges:
                    stab = frame.stabilizer_to_global("B", (a, y)) if box.contains_all(plaquette_edges((a, y))) else None
                    g = frame.edge_to_global(e)
                    checks.append(_Check(edge_bit(g), False, stab, g))
            west = ROUGH
        columns.append(tuple(checks))
    return _Plan(tuple(columns), west_mask)


def _reduce_commuting(p: PauliMonomial, inner: LatticeRegion, interval: BoundaryInterval | None) -> ReductionResult:
    plan = _plan(inner, interval)
    word: list[Stabilizer] = []
    current = p
    for column in plan.columns:
        # base case: the support's bounding box already fits the band
        if not current.support & plan.west_mask:
            break
        for check in column:
            xb = (current.x >> check.bit) & 1
            zb = (current.z >> check.bit) & 1
            peel, other = (xb, zb) if check.peel_x else (zb, xb)
            if other:
                raise AlgorithmError(f"operator on boundary edge {check.edge} survived commutation")
            if not peel:
                continue
            if check.stabilizer is None:
                raise AlgorithmError(f"non-trivial operator on corner edge {check.edge}")
            word.append(check.stabilizer)
            current = check.stabilizer.pauli * current
    return _read_boundary(p, current, word, interval)


def _read_boundary(original, current, word, interval) -> ReductionResult:
    """Express the band remainder through the boundary generators (the base case)."""
    if interval is None:
        if not current.is_identity():
            raise AlgorithmError(f"non-trivial remainder {current} with no shared boundary")
        result = ReductionResult(tuple(word), current.phase, (0, 0), None)
    else:
        rest = current
        b = 0
        ys = interval.y_generators
        for j, bit in enumerate(interval.extra_bits):
            if not (rest.support >> bit) & 1:
                continue
            rest = ys[j] * rest
            b |= 1 << j
        a = 0
        for i, g in enumerate(interval.x_generators):
            if rest.support & g.support:
                if (rest.x & g.support, rest.z & g.support) != (g.x, g.z):
                    raise AlgorithmError(f"unexpected operator on boundary site {interval.sites[i]}")
                rest = g * rest
                a |= 1 << i
        if not rest.is_identity():
            raise AlgorithmError(f"remainder {rest} outside the boundary band")
        # current = i^k * x^a y^b  with  rest = x^a-part * y^b-part * current
        monomial = interval.monomial(a, b)
        phase = (current.phase - monomial.phase) % 4
        result = ReductionResult(tuple(word), phase, (a, b), interval)
    # rest was built by left-multiplying, so re-derive the phase from scratch
    got = result.reconstruct()
    if (got.x, got.z) != (original.x, original.z):
        raise AlgorithmError("reconstruction support mismatch")
    if got.phase != original.phase:
        result = ReductionResult(result.word, (result.phase + original.phase - got.phase) % 4, result.boundary, interval)
        if result.reconstruct().phase != original.phase:
            raise AlgorithmError("phase bookkeeping failed")
    return result


def boundary_channel(
    terms, inner: LatticeRegion, outer: LatticeRegion, surround: int = SURROUND
) -> BoundaryElement | complex:
    """The conditional expectation of a combination of monomials.

    ``terms`` is an iterable of (coefficient, PauliMonomial) pairs or a single
    monomial.  Anticommuting monomials contribute 0, the others their phase
    times the boundary monomial.  Returns a BoundaryElement when Lambda shares
    a side with Delta, and a scalar when it is completely surrounded.
    """
    if isinstance(terms, PauliMonomial):
        terms = [(1, terms)]
    rel = _relation(inner, outer, surround)
    stabilizers = _touching(outer, inner)
    interval = None if isinstance(rel, CompletelySurrounds) else rel.interval
    total: dict = {}
    for coeff, p in terms:
        if p.support & ~inner.mask:
            raise ValidationError("monomial support escapes Lambda")
        if first_anticommuting(p, stabilizers) is not None:
            continue
        r = _reduce_commuting(p, inner, interval)
        total[r.boundary] = total.get(r.boundary, 0) + coeff * (1, 1j, -1, -1j)[r.phase]
    total = {m: _tidy(c) for m, c in total.items()}
    if interval is None:
        return total.get((0, 0), 0)
    return BoundaryElement(interval.n_sites, total, interval)


def _tidy(c):
    """Drop a vanishing imaginary part so real results stay real."""
    if isinstance(c, complex) and c.imag == 0:
        return c.real
    return c


def commuting_monomial_basis(inner: LatticeRegion, outer: LatticeRegion) -> list[PauliMonomial]:
    """F2 basis of the inner-supported monomials commuting with every outer stabilizer."""
    edges = inner.sorted_edges()
    bits = [edge_bit(e) for e in edges]
    n = len(bits)
    rows = []
    for g in _stabilizers(outer):
        row = 0
        for i, b in enumerate(bits):
            if (g.pauli.z >> b) & 1:
                row |= 1 << i
            if (g.pauli.x >> b) & 1:
                row |= 1 << (n + i)
        rows.append(row)
    out = []
    for v in f2_nullspace(rows, 2 * n):
        x = sum(1 << bits[i] for i in range(n) if (v >> i) & 1)
        z = sum(1 << bits[i] for i in range(n) if (v >> (n + i)) & 1)
        out.append(PauliMonomial(0, x, z))
    return out


def random_commuting_monomials(inner: LatticeRegion, outer: LatticeRegion, rng, count: int) -> list[PauliMonomial]:
    """Uniform samples from the commuting group, with uniformly random phases."""
    basis = commuting_monomial_basis(inner, outer)
    out = []
    for _ in range(count):
        x = z = 0
        for g in basis:
            if rng.random() < 0.5:
                x ^= g.x
                z ^= g.z
        out.append(PauliMonomial(rng.randrange(4), x, z))
    return out


def random_monomials(region: LatticeRegion, rng, count: int) -> list[PauliMonomial]:
    """Uniformly random monomials supported in region."""
    bits = [edge_bit(e) for e in region.sorted_edges()]
    out = []
    for _ in range(count):
        x = z = 0
        for b in bits:
            k = rng.randrange(4)
            x |= (k & 1) << b
            z |= (k >> 1) << b
        out.append(PauliMonomial(rng.randrange(4), x, z))
    return out

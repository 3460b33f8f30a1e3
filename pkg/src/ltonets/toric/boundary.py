"""Toric Code boundary algebras and their fusion-net description.

The abstract algebra on an interval with n+1 sites is generated by
self-adjoint unitaries x_1..x_{n+1} and y_1..y_n; the x's commute with each
other, so do the y's, y_j anticommutes with x_j and x_{j+1} and commutes with
every other x.  Canonical monomials x^a y^b (x's first, each in increasing
order) are indexed by bit masks a (n+1 bits) and b (n bits), with

    x^a y^b . x^c y^d = (-1)^{|b & c| + |b & (c >> 1)|} x^{a^c} y^{b^d}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import ValidationError
from .lattice import ROUGH, SMOOTH, BoundaryInterval, LatticeRegion
from .pauli import PauliMonomial, f2_nullspace, f2_rank, symplectic_form

MAX_SITES = 8


def _check_sites(n_sites: int) -> None:
    if n_sites < 1:
        raise ValidationError("an interval needs at least one site")


def monomial_sign(b: int, c: int) -> int:
    """Exponent of -1 picked up when y^b is moved past x^c."""
    return ((b & c).bit_count() + (b & (c >> 1)).bit_count()) & 1


def canonical_product(m1: tuple[int, int], m2: tuple[int, int]) -> tuple[int, tuple[int, int]]:
    """(sign exponent, monomial) of the product of two canonical monomials."""
    (a, b), (c, d) = m1, m2
    return monomial_sign(b, c), (a ^ c, b ^ d)


def canonical_monomials(n_sites: int) -> list[tuple[int, int]]:
    _check_sites(n_sites)
    return [(a, b) for b in range(1 << (n_sites - 1)) for a in range(1 << n_sites)]


def format_canonical(m: tuple[int, int]) -> str:
    a, b = m
    parts = [f"x{i + 1}" for i in range(a.bit_length()) if (a >> i) & 1]
    parts += [f"y{j + 1}" for j in range(b.bit_length()) if (b >> j) & 1]
    return "*".join(parts) if parts else "1"


# -- elements --------------------------------------------------------------


@dataclass
class BoundaryElement:
    """Linear combination of canonical monomials on an interval of n_sites sites.

    Coefficients are Python numbers (int, Fraction or complex); phases from
    Pauli reductions are powers of i and enter as exact complex values.
    """

    n_sites: int
    terms: dict = field(default_factory=dict)
    interval: BoundaryInterval | None = None

    def __post_init__(self):
        _check_sites(self.n_sites)
        self.terms = {m: c for m, c in self.terms.items() if c != 0}
        for a, b in self.terms:
            if a >> self.n_sites or b >> (self.n_sites - 1):
                raise ValidationError(f"monomial {(a, b)} does not fit {self.n_sites} sites")

    @classmethod
    def scalar(cls, n_sites: int, c=1, interval=None) -> "BoundaryElement":
        return cls(n_sites, {(0, 0): c}, interval)

    @classmethod
    def monomial(cls, n_sites: int, a: int, b: int, c=1, interval=None) -> "BoundaryElement":
        return cls(n_sites, {(a, b): c}, interval)

    def _same(self, other: "BoundaryElement") -> None:
        if other.n_sites != self.n_sites:
            raise ValidationError("boundary elements on intervals of different length")

    def __add__(self, other: "BoundaryElement") -> "BoundaryElement":
        self._same(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return BoundaryElement(self.n_sites, terms, self.interval or other.interval)

    def __sub__(self, other: "BoundaryElement") -> "BoundaryElement":
        return self + other.scale(-1)

    def scale(self, c) -> "BoundaryElement":
        return BoundaryElement(self.n_sites, {m: c * v for m, v in self.terms.items()}, self.interval)

    def __mul__(self, other):
        if not isinstance(other, BoundaryElement):
            return self.scale(other)
        self._same(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, m = canonical_product(m1, m2)
                out[m] = out.get(m, 0) + (-1) ** sign * c1 * c2
        return BoundaryElement(self.n_sites, out, self.interval or other.interval)

    def __rmul__(self, c):
        return self.scale(c)

    def adjoint(self) -> "BoundaryElement":
        # (x^a y^b)^* = y^b x^a = (-1)^{sign(b, a)} x^a y^b
        out = {}
        for (a, b), c in self.terms.items():
            conj = c.conjugate() if hasattr(c, "conjugate") else c
            out[(a, b)] = (-1) ** monomial_sign(b, a) * conj
        return BoundaryElement(self.n_sites, out, self.interval)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoundaryElement) and self.n_sites == other.n_sites and self.terms == other.terms

    def is_scalar(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def scalar_value(self):
        if not self.is_scalar():
            raise ValidationError("boundary element is not a scalar")
        return self.terms.get((0, 0), 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{format_canonical(m)}" for m, c in sorted(self.terms.items()))


# -- realizations ----------------------------------------------------------


def _chain_site(i: int):
    return (i, 0, "e")


def chain_generators(n_sites: int, kind: str) -> tuple[list[PauliMonomial], list[PauliMonomial]]:
    """Generators on n+1 bare qubits.

    rough:  x_i = X_i, y_j = Z_j Z_{j+1};  smooth: x_i = Z_i, y_j = X_j X_{j+1}.
    """
    _check_sites(n_sites)
    if kind not in (ROUGH, SMOOTH):
        raise ValidationError(f"unknown boundary kind {kind!r}")
    single, pair = ("x_edges", "z_edges") if kind == ROUGH else ("z_edges", "x_edges")
    xs = [PauliMonomial.from_edges(**{single: [_chain_site(i)]}) for i in range(n_sites)]
    ys = [PauliMonomial.from_edges(**{pair: [_chain_site(j), _chain_site(j + 1)]}) for j in range(n_sites - 1)]
    return xs, ys


def realize(m: tuple[int, int], xs, ys) -> PauliMonomial:
    a, b = m
    out = PauliMonomial()
    for i, g in enumerate(xs):
        if (a >> i) & 1:
            out = out * g
    for j, g in enumerate(ys):
        if (b >> j) & 1:
            out = out * g
    return out


def standard_interval(n_sites: int, kind: str) -> BoundaryInterval:
    """A fixed east-side interval of n_sites sites of the given kind."""
    _check_sites(n_sites)
    if kind == ROUGH:
        region = LatticeRegion(0, 0, 2, n_sites - 1, west=SMOOTH, east=ROUGH, south=SMOOTH, north=SMOOTH)
    elif kind == SMOOTH:
        region = LatticeRegion(0, 0, 2, n_sites, west=SMOOTH, east=SMOOTH, south=ROUGH, north=ROUGH)
    else:
        raise ValidationError(f"unknown boundary kind {kind!r}")
    interval = BoundaryInterval(region, "east")
    assert interval.n_sites == n_sites
    return interval


def interval_generators(interval: BoundaryInterval) -> tuple[list[PauliMonomial], list[PauliMonomial]]:
    return list(interval.x_generators), list(interval.y_generators)


def presentation_form(n_sites: int) -> list[int]:
    """Commutation form of the abstract generators x_1..x_{n+1}, y_1..y_n as F2 rows."""
    k = 2 * n_sites - 1
    rows = [0] * k
    for j in range(n_sites - 1):
        yj = n_sites + j
        for i in (j, j + 1):
            rows[yj] |= 1 << i
            rows[i] |= 1 << yj
    return rows


def generator_form(gens: list[PauliMonomial]) -> list[int]:
    rows = []
    for g in gens:
        row = 0
        for i, h in enumerate(gens):
            if symplectic_form(g, h):
                row |= 1 << i
        rows.append(row)
    return rows


def check_relations(xs, ys) -> list[str]:
    """Violations of the defining relations by concrete generators (empty if none)."""
    problems = []
    n_sites = len(xs)
    for name, g in [(f"x{i + 1}", g) for i, g in enumerate(xs)] + [(f"y{j + 1}", g) for j, g in enumerate(ys)]:
        if not g.is_hermitian():
            problems.append(f"{name} is not self-adjoint")
        sq = g * g
        if not (sq.is_identity() and sq.phase == 0):
            problems.append(f"{name} does not square to 1")
    if generator_form(list(xs) + list(ys)) != presentation_form(n_sites):
        problems.append("commutation pattern differs from the presentation")
    return problems


# -- the algebra -----------------------------------------------------------


@dataclass
class BoundaryAlgebraReport:
    n_sites: int
    kind: str
    basis: list
    dimension: int
    expected_dimension: int
    center: list
    block_sizes: tuple[int, int]
    relations_ok: bool
    structure_ok: bool

    @property
    def blocks(self) -> str:
        return f"M{self.block_sizes[0]}+M{self.block_sizes[1]}"

    def summary(self) -> str:
        return f"dim={self.dimension} blocks={self.blocks}"

    def as_dict(self) -> dict:
        return {
            "sites": self.n_sites,
            "kind": self.kind,
            "dimension": self.dimension,
            "expected_dimension": self.expected_dimension,
            "center": [format_canonical(m) for m in self.center],
            "blocks": self.blocks,
            "relations_ok": self.relations_ok,
            "structure_ok": self.structure_ok,
        }


def span_dimension(monomials: Iterable[PauliMonomial]) -> int:
    """Dimension of the span of Pauli monomials (distinct supports are independent)."""
    return len({(p.x, p.z) for p in monomials})


def realize_all(n_sites: int, xs, ys) -> dict:
    """Realizations of every canonical monomial, built from the x- and y-parts."""
    x_part = [PauliMonomial()]
    for g in xs:
        x_part += [p * g for p in x_part]
    y_part = [PauliMonomial()]
    for g in ys:
        y_part += [p * g for p in y_part]
    return {(a, b): x_part[a] * y_part[b] for a, b in canonical_monomials(n_sites)}


def _compact(gens: list[PauliMonomial]) -> list[tuple[int, int, int]]:
    """Generators as (phase, x, z) with their joint support packed into low bits."""
    support = 0
    for g in gens:
        support |= g.support
    bits = [i for i in range(support.bit_length()) if (support >> i) & 1]
    if len(bits) > 62:
        raise ValidationError("realization support too large for packed arithmetic")

    def pack(mask: int) -> int:
        return sum(1 << j for j, i in enumerate(bits) if (mask >> i) & 1)

    return [(g.phase, pack(g.x), pack(g.z)) for g in gens]


def _parts(gens: list[tuple[int, int, int]]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All ordered products of subsets of gens, indexed by the subset mask."""
    P, X, Z = np.zeros(1, np.int64), np.zeros(1, np.int64), np.zeros(1, np.int64)
    for gp, gx, gz in gens:
        # (i^p X^x Z^z)(i^gp X^gx Z^gz) picks up (-1)^{|z & gx|}
        flip = 2 * (np.bitwise_count(Z & gx).astype(np.int64) & 1)
        P = np.concatenate([P, (P + gp + flip) % 4])
        X = np.concatenate([X, X ^ gx])
        Z = np.concatenate([Z, Z ^ gz])
    return P, X, Z


def realize_arrays(n_sites: int, xs, ys) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(phase, x, z) of every canonical monomial, indexed by (b << n_sites) | a."""
    packed = _compact(list(xs) + list(ys))
    xp, xx, xz = _parts(packed[:n_sites])
    yp, yx, yz = _parts(packed[n_sites:])
    a = np.tile(np.arange(1 << n_sites), 1 << (n_sites - 1))
    b = np.repeat(np.arange(1 << (n_sites - 1)), 1 << n_sites)
    flip = 2 * (np.bitwise_count(xz[a] & yx[b]).astype(np.int64) & 1)
    return (xp[a] + yp[b] + flip) % 4, xx[a] ^ yx[b], xz[a] ^ yz[b]


def structure_constants_match(n_sites: int, xs, ys, left: Iterable[tuple[int, int]] | None = None) -> bool:
    """Realized products m1 * m2 agree with the canonical multiplication rule, phases included.

    m1 runs over ``left`` (default: the whole basis), m2 over the whole basis.
    """
    basis = canonical_monomials(n_sites)
    P, X, Z = realize_arrays(n_sites, xs, ys)
    c = np.tile(np.arange(1 << n_sites), 1 << (n_sites - 1))
    d = np.repeat(np.arange(1 << (n_sites - 1)), 1 << n_sites)
    for a, b in basis if left is None else left:
        i = (b << n_sites) | a
        got_p = (P[i] + P + 2 * (np.bitwise_count(Z[i] & X).astype(np.int64) & 1)) % 4
        sign = (np.bitwise_count(b & c).astype(np.int64) + np.bitwise_count(b & (c >> 1)).astype(np.int64)) & 1
        j = ((b ^ d) << n_sites) | (a ^ c)
        if not (
            np.array_equal(X[i] ^ X, X[j]) and np.array_equal(Z[i] ^ Z, Z[j]) and np.array_equal(got_p, (P[j] + 2 * sign) % 4)
        ):
            return False
    return True


def boundary_algebra(n_sites: int, kind: str = ROUGH, interval: BoundaryInterval | None = None) -> BoundaryAlgebraReport:
    """Canonical basis, dimension, center and block structure."""
    _check_sites(n_sites)
    if n_sites > MAX_SITES + 4:
        raise ValidationError(f"at most {MAX_SITES + 4} sites supported")
    interval = interval or standard_interval(n_sites, kind)
    xs, ys = interval_generators(interval)
    basis = canonical_monomials(n_sites)
    _, X, Z = realize_arrays(n_sites, xs, ys)
    # distinct supports are linearly independent
    dimension = len(set(zip(X.tolist(), Z.tolist())))
    relations_ok = not check_relations(xs, ys)
    # products of generators only; the full table is quadratic in 4^n
    gens = [(1 << i, 0) for i in range(n_sites)] + [(0, 1 << j) for j in range(n_sites - 1)]
    structure_ok = structure_constants_match(n_sites, xs, ys, gens)

    form = presentation_form(n_sites)
    kernel = f2_nullspace(form, 2 * n_sites - 1)
    center = [(0, 0)] + [(v & ((1 << n_sites) - 1), v >> n_sites) for v in kernel]
    rank = f2_rank(form)
    block = 1 << (rank // 2)
    return BoundaryAlgebraReport(
        n_sites,
        kind,
        basis,
        dimension,
        1 << (2 * n_sites - 1),
        center,
        (block, block) if len(center) == 2 else (block, 0),
        relations_ok,
        structure_ok,
    )


# -- isomorphism with the Hilb(Z/2) fusion net ------------------------------


@dataclass
class IsoReport:
    n_sites: int
    kind: str
    dictionary: dict
    relations_ok: bool
    pauli_structure_ok: bool
    path_structure_ok: bool
    image_dimension: int
    ambient_dimension: int
    parity_subalgebra: bool
    markov_gram_identity: bool

    @property
    def ok(self) -> bool:
        return (
            self.relations_ok
            and self.pauli_structure_ok
            and self.path_structure_ok
            and self.parity_subalgebra
            and self.markov_gram_identity
            and 2 * self.image_dimension == self.ambient_dimension
        )

    def as_dict(self) -> dict:
        return {
            "sites": self.n_sites,
            "kind": self.kind,
            "dictionary": self.dictionary,
            "relations_ok": self.relations_ok,
            "pauli_structure_ok": self.pauli_structure_ok,
            "path_structure_ok": self.path_structure_ok,
            "image_dimension": self.image_dimension,
            "ambient_dimension": self.ambient_dimension,
            "parity_subalgebra": self.parity_subalgebra,
            "markov_gram_identity": self.markov_gram_identity,
            "ok": self.ok,
        }


def _all_paulis(n_sites: int):
    for x in range(1 << n_sites):
        for z in range(1 << n_sites):
            yield x, z


def path_generators(n_sites: int):
    """Images of u_i, v_j in the level-(n+1) path algebra of Hilb(Z/2) with X = 1 + g."""
    from .. import path_net
    from ..fusion_ring import builtin_ring

    ring = builtin_ring("hilb_z2")
    graph = path_net.fusion_graph(ring)
    paths = path_net.enumerate_paths(graph, n_sites)
    by_labels = {p.labels(graph): p for p in paths}
    one = ring.scalar(1)
    us = []
    for i in range(n_sites):
        terms = {(p, p): (-one if p.labels(graph)[i] else one) for p in paths}
        us.append(path_net.PathPairOperator(graph, n_sites, terms))
    vs = []
    for j in range(n_sites - 1):
        terms = {}
        for p in paths:
            lab = list(p.labels(graph))
            lab[j] ^= 1
            lab[j + 1] ^= 1
            terms[(by_labels[tuple(lab)], p)] = one
        vs.append(path_net.PathPairOperator(graph, n_sites, terms))
    return graph, us, vs


def _path_realize(m, us, vs, identity):
    a, b = m
    out = identity
    for i, g in enumerate(us):
        if (a >> i) & 1:
            out = out * g
    for j, g in enumerate(vs):
        if (b >> j) & 1:
            out = out * g
    return out


def fusion_net_iso(n_sites: int, kind: str = ROUGH) -> IsoReport:
    """Match the boundary generators with the Hilb(Z/2) path algebra and verify."""
    from .. import path_net

    _check_sites(n_sites)
    if n_sites > 4 + MAX_SITES:
        raise ValidationError("interval too long")
    xs, ys = chain_generators(n_sites, kind)
    single, pair = ("X", "Z") if kind == ROUGH else ("Z", "X")
    dictionary = {f"u{i + 1}": f"{single}{i + 1}" for i in range(n_sites)}
    dictionary.update({f"v{j + 1}": f"{pair}{j + 1}{pair}{j + 2}" for j in range(n_sites - 1)})

    relations_ok = not check_relations(xs, ys)
    pauli_ok = structure_constants_match(n_sites, xs, ys)
    basis = canonical_monomials(n_sites)
    image = {(p.x, p.z) for p in realize_all(n_sites, xs, ys).values()}
    # parity operator: product of the single-site generators
    parity = realize(((1 << n_sites) - 1, 0), xs, ys)
    commuting = set()
    for x, z in _all_paulis(n_sites):
        p = PauliMonomial(0, _spread(x), _spread(z))
        if not symplectic_form(p, parity):
            commuting.add((p.x, p.z))
    parity_ok = image == commuting

    graph, us, vs = path_generators(n_sites)
    identity = path_net.PathPairOperator.identity(graph, n_sites)
    images = {m: _path_realize(m, us, vs, identity) for m in basis}
    gens = [(1 << i, 0) for i in range(n_sites)] + [(0, 1 << j) for j in range(n_sites - 1)]
    # generator-by-basis products and the diagonal Gram entries go through path_net itself
    path_ok = all(
        images[g] * images[m] == images[canonical_product(g, m)[1]].scale((-1) ** canonical_product(g, m)[0])
        for g in gens
        for m in basis
    )
    gram_ok = all(path_net.markov_trace(path_net.adjoint(images[m]) * images[m]) == 1 for m in basis)
    # every image is a signed permutation of paths, so the full tables can be
    # compared on that compact form
    perms = {m: _signed_permutation(images[m]) for m in basis}
    if path_ok and all(p is not None for p in perms.values()):
        for m1 in basis:
            for m2 in basis:
                sign, m = canonical_product(m1, m2)
                prod = _compose(perms[m1], perms[m2])
                if prod != tuple((r, (-1) ** sign * c) for r, c in perms[m]):
                    path_ok = False
                if m1 != m2 and _trace(_compose(_inverse(perms[m1]), perms[m2])) != 0:
                    gram_ok = False
    else:
        path_ok = False
    return IsoReport(
        n_sites,
        kind,
        dictionary,
        relations_ok,
        pauli_ok,
        path_ok,
        len(image),
        4**n_sites,
        parity_ok,
        gram_ok,
    )


def _signed_permutation(op):
    """Column -> (row, +-1) for a signed permutation operator, else None."""
    paths = sorted({eta for _, eta in op.terms} | {xi for xi, _ in op.terms})
    index = {p: i for i, p in enumerate(paths)}
    cols = {}
    for (xi, eta), c in op.terms.items():
        if eta in cols or c not in (1, -1):
            return None
        cols[eta] = (index[xi], int(c))
    if len(cols) != len(paths):
        return None
    return tuple(cols[p] for p in paths)


def _compose(p, q):
    return tuple((p[r][0], p[r][1] * c) for r, c in q)


def _inverse(p):
    out = [None] * len(p)
    for col, (row, c) in enumerate(p):
        out[row] = (col, c)
    return tuple(out)


def _trace(p) -> int:
    return sum(c for col, (row, c) in enumerate(p) if row == col)


def _spread(mask: int) -> int:
    """Bit mask over chain sites -> edge-bit mask used by chain_generators."""
    from .pauli import edges_mask

    return edges_mask(_chain_site(i) for i in range(mask.bit_length()) if (mask >> i) & 1)


# -- states ----------------------------------------------------------------


def toric_boundary_state(e: BoundaryElement):
    """psi_B: the coefficient of the identity monomial."""
    return e.terms.get((0, 0), 0)


def phi_z(e: BoundaryElement):
    """Product state |0...0> through x_i -> Z_i, y_j -> X_j X_{j+1}: keeps monomials without y."""
    return sum((c for (a, b), c in e.terms.items() if b == 0), 0)


def phi_x(e: BoundaryElement):
    """Product state |+...+> through the same realization: keeps monomials without x."""
    return sum((c for (a, b), c in e.terms.items() if a == 0), 0)


def phi_z_pauli(p: PauliMonomial) -> complex:
    """<0|P|0> on the support of P."""
    return p.value() if p.x == 0 else 0


def phi_x_pauli(p: PauliMonomial) -> complex:
    """<+|P|+> on the support of P."""
    return p.value() if p.z == 0 else 0


# -- rotated lattice -------------------------------------------------------


def diagonal_generators(n_sites: int) -> list[PauliMonomial]:
    """Boundary generators along a 45-degree cut: XX on (1,2), ZZ on (2,3), XX on (3,4), ...

    Odd-numbered generators play the role of the x's and even ones of the
    y's, so m sites carry the presentation with m-1 generators.
    """
    if n_sites < 2 or n_sites % 2:
        raise ValidationError("the diagonal cut needs an even number of sites >= 2")
    out = []
    for k in range(n_sites - 1):
        edges = [_chain_site(k), _chain_site(k + 1)]
        out.append(PauliMonomial.from_edges(x_edges=edges) if k % 2 == 0 else PauliMonomial.from_edges(z_edges=edges))
    return out


def check_diagonal(n_sites: int) -> list[str]:
    gens = diagonal_generators(n_sites)
    xs, ys = gens[0::2], gens[1::2]
    return check_relations(xs, ys)

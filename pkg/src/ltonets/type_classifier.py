"""Factor type of the boundary algebra from the fusion graph of a ring.

The weighted graph has the simples as vertices (weight d_c) and, for every
pair (a, b), one edge c1 -> c2 per copy of c2 in a (x) c1 (x) b, weighted
d_a d_b.  The ratio set is generated by d_a d_b / d_c over admissible triples;
its closure is {1} (type II_1), lambda^Z (type III_lambda) or all of R_{>0}
(type III_1).

Arithmetic paths, in order of preference:
    pointed ring          -> II_1, exact
    integral dims         -> prime-exponent lattice rank, exact
    dims sqrt(q), q in Z  -> same lattice argument on squared ratios, exact
    otherwise             -> continued-fraction commensurability of logs, numeric
"""

from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

import mpmath
import sympy

from .errors import InconclusiveError, ValidationError
from .fusion_ring import FusionRing, admissible_triples, is_pointed

II1 = "II1"
III_LAMBDA = "III_lambda"
III_1 = "III_1"


class WeightedEdge(NamedTuple):
    source: int
    range: int
    weight: Any
    count: int
    label: tuple[int, int]


@dataclass(frozen=True)
class WeightedGraph:
    """Finite oriented graph with vertex and edge weights.

    Edges sharing (source, range, label) are stored once with a count.
    """

    vertex_weights: tuple
    edges: tuple[WeightedEdge, ...]
    delta: Any
    distinguished: int = 0

    @property
    def size(self) -> int:
        return len(self.vertex_weights)


def build_weighted_graph(ring: FusionRing, dims: tuple | None = None) -> WeightedGraph:
    """Two-sided fusion graph of ``ring``.

    Args:
        ring: a fusion ring.
        dims: optional override of the dimension vector (e.g. sympy numbers
            for symbolic checks); defaults to the ring's computed dims.
    """
    d = ring.require_dims() if dims is None else tuple(dims)
    k = ring.rank
    N = ring.fusion
    edges = []
    for c1 in range(k):
        for a in range(k):
            for b in range(k):
                for c2 in range(k):
                    count = sum(int(N[a, c1, e]) * int(N[e, b, c2]) for e in range(k))
                    if count:
                        edges.append(WeightedEdge(c1, c2, d[a] * d[b], count, (a, b)))
    D = sum(x * x for x in d)
    graph = WeightedGraph(tuple(d), tuple(edges), D * D)
    validate_weighted_graph(graph)
    return graph


def validate_weighted_graph(graph: WeightedGraph) -> None:
    """Every ordered vertex pair must be joined by an edge."""
    present = {(e.source, e.range) for e in graph.edges if e.count > 0}
    for v1 in range(graph.size):
        for v2 in range(graph.size):
            if (v1, v2) not in present:
                raise ValidationError(f"no edge {v1} -> {v2}; the graph is not complete")


def weight_sums(graph: WeightedGraph) -> list:
    """sum over edges out of v of count * w(e) * w(r(e))."""
    sums = [0] * graph.size
    for e in graph.edges:
        sums[e.source] = sums[e.source] + e.count * e.weight * graph.vertex_weights[e.range]
    return sums


def check_weight_condition(graph: WeightedGraph) -> list:
    """Per-vertex residuals |sum_e w(e) w(r(e)) - delta w(v)|."""
    return [abs(s - graph.delta * w) for s, w in zip(weight_sums(graph), graph.vertex_weights)]


# -- ratio generators ------------------------------------------------------


@dataclass
class RatioGenerator:
    ratio: Any
    triples: list[tuple[int, int, int]] = field(default_factory=list)
    squared: Fraction | None = None


def ratio_generators(ring: FusionRing) -> list[RatioGenerator]:
    """Distinct values of d_a d_b / d_c over admissible triples, ascending."""
    dims = ring.require_dims()
    found: list[RatioGenerator] = []
    for a, b, c in admissible_triples(ring):
        if ring.exact:
            r = Fraction(dims[a] * dims[b], dims[c])
        else:
            r = dims[a] * dims[b] / dims[c]
        for g in found:
            if (g.ratio == r) if ring.exact else abs(g.ratio - r) <= ring.tolerance:
                g.triples.append((a, b, c))
                break
        else:
            found.append(RatioGenerator(r, [(a, b, c)]))
    found.sort(key=lambda g: g.ratio)
    return found


# -- exact lattice analysis ------------------------------------------------


def _exponents(values: list[Fraction]) -> tuple[list[int], list[list[int]]]:
    primes: set[int] = set()
    factored = []
    for q in values:
        num = sympy.factorint(q.numerator)
        den = sympy.factorint(q.denominator)
        primes.update(num)
        primes.update(den)
        factored.append((num, den))
    plist = sorted(primes)
    vectors = [[num.get(p, 0) - den.get(p, 0) for p in plist] for num, den in factored]
    return plist, vectors


def lattice_analysis(values: list[Fraction]):
    """Rank of the subgroup of Q_{>0} generated by ``values``.

    Returns:
        (rank, generator, multiples): for rank 1, ``generator`` > 1 generates
        the group and values[i] = generator ** multiples[i]; otherwise the
        last two entries are None.
    """
    plist, vectors = _exponents(values)
    nonzero = [v for v in vectors if any(v)]
    if not nonzero:
        return 0, None, [0] * len(values)
    rank = sympy.Matrix(nonzero).rank()
    if rank > 1:
        return rank, None, None
    first = nonzero[0]
    g = math.gcd(*first)
    u = [x // g for x in first]
    base = Fraction(1)
    for p, e in zip(plist, u):
        base *= Fraction(p) ** e
    if base < 1:
        u = [-x for x in u]
        base = 1 / base
    multiples = []
    pivot = next(i for i, x in enumerate(u) if x)
    for v in vectors:
        m = v[pivot] // u[pivot]
        if [m * x for x in u] != v:
            raise AssertionError("rank-1 lattice vector is not a multiple of the primitive vector")
        multiples.append(m)
    step = math.gcd(*multiples)
    return 1, base ** step, [m // step for m in multiples]


def surd_squares(ring: FusionRing) -> tuple[int, ...] | None:
    """Integers q_a with d_a = sqrt(q_a), certified exactly, or None."""
    if ring.exact:
        return tuple(d * d for d in ring.dims)
    qs = []
    for d in ring.dims:
        q = int(mpmath.nint(d * d))
        if q < 1 or abs(d * d - q) > ring.tolerance:
            return None
        qs.append(q)
    roots = [sympy.sqrt(q) for q in qs]
    k = ring.rank
    for a in range(k):
        for b in range(k):
            lhs = roots[a] * roots[b]
            rhs = sum(int(ring.fusion[a, b, c]) * roots[c] for c in range(k))
            if sympy.expand(lhs - rhs) != 0:
                return None
    return tuple(qs)


# -- classification --------------------------------------------------------


@dataclass
class GeneratorEvidence:
    triple: tuple[int, int, int]
    ratio: Any
    Z: int | None


@dataclass
class TypeLabel:
    """Classification result.

    ``lam`` is the III_lambda parameter (Fraction when rational and exact,
    otherwise an mpmath float); ``lam_squared`` is set on the surd path.
    Exponents follow ratio = lam ** Z, so Z <= 0.
    """

    variant: str
    lam: Any = None
    exact: bool = True
    precision: int | None = None
    tolerance: Any = None
    generators: list[GeneratorEvidence] = field(default_factory=list)
    method: str = ""
    lam_squared: Fraction | None = None
    numeric_check: Any = None

    def __post_init__(self):
        if self.variant not in (II1, III_LAMBDA, III_1):
            raise ValueError(f"unrepresentable type {self.variant!r}")
        if self.variant == III_LAMBDA and not 0 < self.lam < 1:
            raise ValueError("lambda must lie strictly between 0 and 1")


def _evidence(gens: list[RatioGenerator], zs: list[int | None]) -> list[GeneratorEvidence]:
    out = []
    for g, z in zip(gens, zs):
        for t in g.triples:
            out.append(GeneratorEvidence(t, g.ratio, z))
    out.sort(key=lambda e: e.triple)
    return out


def _numeric_commensurability(ring: FusionRing, ratios: list):
    """Continued-fraction search for a common generator of the log ratios.

    Returns:
        (lam, [Z_i]) or None when the logs are not commensurate.
    """
    ctx = ring.ctx
    prec = ring.precision
    tol = ctx.mpf(10) ** (-(prec // 2))
    max_den = 10 ** max(6, prec // 8)
    # convergents of an irrational with q <= max_den sit near 1/q^2 >= max_den^-2;
    # only errors far below that are evidence of a rational ratio
    loose = min(ctx.mpf(10) ** (-(prec // 3)), ctx.mpf(max_den) ** -3)
    logs = [ctx.log(ctx.convert(r)) for r in ratios]
    nonzero = [x for x in logs if abs(x) > tol]
    if not nonzero:
        return None
    base = min(abs(x) for x in nonzero)
    dens = []
    for x in nonzero:
        q = x / base
        man, exp = ctx.mpf(q).man_exp
        exact_q = Fraction(int(man)) * (Fraction(2) ** int(exp)) if exp >= 0 else Fraction(int(man), 2 ** int(-exp))
        approx = exact_q.limit_denominator(max_den)
        err = abs(q - ctx.mpf(approx.numerator) / approx.denominator)
        if err > loose:
            return None
        if err > tol:
            raise InconclusiveError(
                f"log ratio {ctx.nstr(q, 20)} is within {ctx.nstr(err, 3)} of {approx}; precision exhausted"
            )
        dens.append(approx.denominator)
    L = math.lcm(*dens)
    g_log = base / L
    ms = [int(ctx.nint(x / g_log)) for x in logs]
    step = math.gcd(*ms)
    g_log *= step
    ms = [m // step for m in ms]
    for x, m in zip(logs, ms):
        if abs(x - m * g_log) > tol * (1 + abs(m)):
            return None
    return ctx.exp(-g_log), [-m for m in ms]


def classify_type(ring: FusionRing) -> TypeLabel:
    """II_1 / III_lambda / III_1 label with an exactness marker."""
    gens = ratio_generators(ring)
    if is_pointed(ring):
        return TypeLabel(II1, exact=True, generators=_evidence(gens, [0] * len(gens)), method="pointed")

    if ring.exact:
        values = [Fraction(g.ratio) for g in gens]
        rank, generator, multiples = lattice_analysis(values)
        if rank >= 2:
            return TypeLabel(III_1, exact=True, generators=_evidence(gens, [None] * len(gens)), method="integral")
        if rank == 0:
            raise AssertionError("non-pointed ring with trivial ratio group")
        lam = 1 / generator
        return TypeLabel(
            III_LAMBDA, lam=lam, exact=True,
            generators=_evidence(gens, [-m for m in multiples]), method="integral",
        )

    squares = surd_squares(ring)
    if squares is not None:
        try:
            numeric = _numeric_commensurability(ring, [g.ratio for g in gens])
        except InconclusiveError:
            numeric = "inconclusive"
        squared = []
        for g in gens:
            a, b, c = g.triples[0]
            g.squared = Fraction(squares[a] * squares[b], squares[c])
            squared.append(g.squared)
        rank, generator, multiples = lattice_analysis(squared)
        if rank >= 2:
            label = TypeLabel(III_1, exact=True, generators=_evidence(gens, [None] * len(gens)), method="surd")
        else:
            # ratio_i = sqrt(h)^{m_i} with h = generator; lambda^2 = 1/h
            lam_sq = 1 / generator
            lam = _exact_sqrt(lam_sq)
            if lam is None:
                lam = ring.ctx.sqrt(ring.ctx.mpf(lam_sq.numerator) / lam_sq.denominator)
            label = TypeLabel(
                III_LAMBDA, lam=lam, exact=True, lam_squared=lam_sq,
                generators=_evidence(gens, [-m for m in multiples]), method="surd",
            )
        label.precision = ring.precision
        if numeric == "inconclusive":
            # the exact route stands on its own
            label.numeric_check = numeric
            return label
        label.numeric_check = None if numeric is None else numeric[0]
        if (numeric is None) != (label.variant == III_1):
            raise InconclusiveError("numeric and surd classifications disagree")
        return label

    numeric = _numeric_commensurability(ring, [g.ratio for g in gens])
    tol = ring.ctx.mpf(10) ** (-(ring.precision // 2))
    if numeric is None:
        return TypeLabel(
            III_1, exact=False, precision=ring.precision, tolerance=tol,
            generators=_evidence(gens, [None] * len(gens)), method="numeric",
        )
    lam, zs = numeric
    return TypeLabel(
        III_LAMBDA, lam=lam, exact=False, precision=ring.precision, tolerance=tol,
        generators=_evidence(gens, zs), method="numeric",
    )


def _exact_sqrt(q: Fraction) -> Fraction | None:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


# -- reporting -------------------------------------------------------------


def decimal_string(x, digits: int = 50) -> str:
    """Decimal text; exact for terminating fractions."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        d = x.denominator
        for p in (2, 5):
            while d % p == 0:
                d //= p
        ctx = decimal.Context(prec=max(digits, 60))
        value = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
        if d == 1:
            return format(value.normalize(ctx), "f")
        return format(decimal.Context(prec=digits).plus(value), "f")
    return mpmath.nstr(x, digits, strip_zeros=False)


def type_report(ring: FusionRing, label: TypeLabel) -> dict:
    digits = ring.precision
    return {
        "ring": ring.name,
        "type": label.variant,
        "lambda": None if label.lam is None else decimal_string(label.lam, digits),
        "exact": label.exact,
        "generators": [
            {"triple": list(e.triple), "ratio": decimal_string(e.ratio, digits), "Z": e.Z}
            for e in label.generators
        ],
    }


def type_text(label: TypeLabel, digits: int = 50) -> str:
    if label.variant == II1:
        return f"II_1 exact={'true' if label.exact else 'false'}"
    exactness = "true" if label.exact else "false(numeric)"
    if label.variant == III_1:
        return f"III_1 exact={exactness}"
    return f"III_lambda lambda={decimal_string(label.lam, digits)} exact={exactness}"


def report_json(ring: FusionRing, label: TypeLabel) -> str:
    return json.dumps(type_report(ring, label), indent=2, sort_keys=True)

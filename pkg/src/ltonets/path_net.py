"""Fusion-categorical boundary nets as labeled-path matrix algebras.

The algebra at level n is End(X^n), realized as the span of matrix units
E_{xi,eta} = |xi><eta| where xi, eta are length-n paths in the fusion graph of
X starting at the unit and ending at the same simple.  Inclusion into level
n+1 is tensoring with id_X on the right.

States:
    canonical  psi(E_xx) = D_X^-n w(xi) d_r(xi)
    markov     tr(E_xx)  = d_X^-n d_r(xi)
    unit       coefficient of the all-unit path
    regular_q  |G|^-n times the sum of all coefficients (pointed rings)

The modular flow of psi follows the boundary-Hamiltonian convention
sigma_t(E_xi,eta) = (w(eta)/w(xi))^{it} E_xi,eta, for which psi is KMS at
beta = +1.  The appendix dynamics is the inverse flow (beta = -1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .errors import LtoError, ParseError, ResourceError, UnsupportedError, ValidationError
from .fusion_ring import FusionRing, is_pointed

POINTED_LEVEL_CAP = 12
DEFAULT_LEVEL_CAP = 8


class Step(NamedTuple):
    """One edge of a path: target vertex, component of X, multiplicity slot."""

    target: int
    comp: int
    slot: int


class LabeledPath:
    """A path from the unit vertex; compares and hashes by its steps."""

    __slots__ = ("steps", "range", "weight", "_hash")

    def __init__(self, steps: tuple[Step, ...], range_: int, weight):
        self.steps = steps
        self.range = range_
        self.weight = weight
        self._hash = hash(steps)

    def __len__(self) -> int:
        return len(self.steps)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledPath) and self.steps == other.steps

    def __lt__(self, other: "LabeledPath") -> bool:
        return self.steps < other.steps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LabeledPath({[tuple(s) for s in self.steps]})"

    def labels(self, graph: "FusionGraph") -> tuple[int, ...]:
        """Simple-object labels along the path."""
        return tuple(graph.components[s.comp] for s in self.steps)


@dataclass(eq=False)
class FusionGraph:
    """Fusion graph of tensoring by X on the right.

    Attributes:
        ring: the fusion ring (dimensions required).
        components: X as a tuple of simple indices, with repetition.
        level_cap: largest level that may be enumerated.
    """

    ring: FusionRing
    components: tuple[int, ...]
    level_cap: int
    edges: tuple[tuple[Step, ...], ...] = field(init=False)
    _paths: dict = field(init=False, default_factory=dict, repr=False)
    _projectors: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        ring = self.ring
        table = []
        for c1 in range(ring.rank):
            out = []
            for c2 in range(ring.rank):
                for j, x in enumerate(self.components):
                    for k in range(ring.N(c1, x, c2)):
                        out.append(Step(c2, j, k))
            table.append(tuple(sorted(out)))
        self.edges = tuple(table)

    @property
    def dims(self) -> tuple:
        return self.ring.require_dims()

    def comp_weight(self, j: int):
        return self.dims[self.components[j]]

    @property
    def d_X(self):
        return _sum(self.ring, (self.comp_weight(j) for j in range(len(self.components))))

    @property
    def D_X(self):
        return _sum(self.ring, (self.comp_weight(j) ** 2 for j in range(len(self.components))))

    def adjacency(self) -> np.ndarray:
        """Integer matrix A[c2, c1] = number of edges c1 -> c2."""
        k = self.ring.rank
        A = np.zeros((k, k), dtype=object)
        for c1 in range(k):
            for step in self.edges[c1]:
                A[step.target, c1] += 1
        return A

    def check_level(self, n: int) -> None:
        if n < 0:
            raise ValidationError("level must be non-negative")
        if n > self.level_cap:
            raise ResourceError(f"level {n} exceeds cap {self.level_cap}")

    @property
    def empty_path(self) -> LabeledPath:
        return LabeledPath((), 0, self.ring.scalar(1) if self.ring.exact else self.ring.ctx.mpf(1))

    def extend(self, path: LabeledPath, step: Step) -> LabeledPath:
        return LabeledPath(path.steps + (step,), step.target, path.weight * self.comp_weight(step.comp))


def fusion_graph(ring: FusionRing, X: Iterable[int] | None = None, level_cap: int | None = None) -> FusionGraph:
    """Fusion graph for X (default: one copy of every simple)."""
    ring.require_dims()
    components = tuple(range(ring.rank)) if X is None else tuple(int(x) for x in X)
    if not components:
        raise ValidationError("X must contain at least one simple")
    if any(not 0 <= x < ring.rank for x in components):
        raise ValidationError("X contains an index outside the ring")
    if level_cap is None:
        level_cap = POINTED_LEVEL_CAP if is_pointed(ring) else DEFAULT_LEVEL_CAP
    if level_cap < 1:
        raise ValidationError("level cap must be positive")
    return FusionGraph(ring, components, level_cap)


def _sum(ring: FusionRing, values):
    total = Fraction(0) if ring.exact else ring.ctx.mpf(0)
    for v in values:
        total += v
    return total


def enumerate_paths(graph: FusionGraph, n: int) -> list[LabeledPath]:
    """All length-n paths from the unit, lexicographic in (target, comp, slot)."""
    graph.check_level(n)
    cache = graph._paths
    if n in cache:
        return cache[n]
    if n == 0:
        cache[0] = [graph.empty_path]
        return cache[0]
    out = []
    for path in enumerate_paths(graph, n - 1):
        for step in graph.edges[path.range]:
            out.append(graph.extend(path, step))
    cache[n] = out
    return out


def paths_by_range(graph: FusionGraph, n: int) -> dict[int, list[LabeledPath]]:
    groups: dict[int, list[LabeledPath]] = {}
    for p in enumerate_paths(graph, n):
        groups.setdefault(p.range, []).append(p)
    return groups


def level_dims(graph: FusionGraph, n: int) -> tuple[tuple[int, ...], int]:
    """Per-vertex path multiplicities A^n e_unit and the algebra dimension."""
    if n < 0:
        raise ValidationError("level must be non-negative")
    A = graph.adjacency()
    v = np.zeros(graph.ring.rank, dtype=object)
    v[0] = 1
    for _ in range(n):
        v = A.dot(v)
    mult = tuple(int(x) for x in v)
    return mult, sum(m * m for m in mult)


# -- operators -------------------------------------------------------------


class PathPairOperator:
    """Sparse linear combination of matrix units at a fixed level."""

    __slots__ = ("graph", "level", "terms")

    def __init__(self, graph: FusionGraph, level: int, terms: dict | None = None, check: bool = True):
        self.graph = graph
        self.level = level
        self.terms = {} if terms is None else {k: v for k, v in terms.items() if v != 0}
        if check:
            for xi, eta in self.terms:
                if len(xi) != level or len(eta) != level:
                    raise ValidationError("path length does not match operator level")
                if xi.range != eta.range:
                    raise ValidationError("matrix unit with mismatched ranges")

    @classmethod
    def unit(cls, graph: FusionGraph, xi: LabeledPath, eta: LabeledPath, coeff=1) -> "PathPairOperator":
        return cls(graph, len(xi), {(xi, eta): graph.ring.scalar(coeff)})

    @classmethod
    def identity(cls, graph: FusionGraph, n: int) -> "PathPairOperator":
        one = graph.ring.scalar(1)
        return cls(graph, n, {(p, p): one for p in enumerate_paths(graph, n)}, check=False)

    def _same(self, other: "PathPairOperator") -> None:
        if not isinstance(other, PathPairOperator):
            raise TypeError("expected a PathPairOperator")
        if other.graph is not self.graph:
            raise ValidationError("operators live on different fusion graphs")
        if other.level != self.level:
            raise ValidationError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other: "PathPairOperator") -> "PathPairOperator":
        self._same(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return PathPairOperator(self.graph, self.level, terms, check=False)

    def __neg__(self) -> "PathPairOperator":
        return self.scale(-1)

    def __sub__(self, other: "PathPairOperator") -> "PathPairOperator":
        return self + (-other)

    def scale(self, c) -> "PathPairOperator":
        return PathPairOperator(self.graph, self.level, {k: c * v for k, v in self.terms.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, PathPairOperator):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PathPairOperator) or other.level != self.level:
            return False
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def norm1(self):
        """Sum of absolute values of coefficients."""
        return sum((abs(v) for v in self.terms.values()), 0)

    def __repr__(self) -> str:
        return f"PathPairOperator(level={self.level}, terms={len(self.terms)})"


def multiply(x: PathPairOperator, y: PathPairOperator) -> PathPairOperator:
    """Matrix-unit product E_ab E_cd = delta_bc E_ad, extended bilinearly."""
    x._same(y)
    by_ket: dict[LabeledPath, list] = {}
    for (c, d), v in y.terms.items():
        by_ket.setdefault(c, []).append((d, v))
    out: dict = {}
    for (a, b), u in x.terms.items():
        for d, v in by_ket.get(b, ()):
            key = (a, d)
            out[key] = out.get(key, 0) + u * v
    return PathPairOperator(x.graph, x.level, out, check=False)


def adjoint(x: PathPairOperator) -> PathPairOperator:
    return PathPairOperator(
        x.graph, x.level, {(b, a): v.conjugate() for (a, b), v in x.terms.items()}, check=False
    )


def include(op: PathPairOperator) -> PathPairOperator:
    """Right inclusion E_{xi,eta} -> sum_e E_{xi e, eta e}."""
    g = op.graph
    g.check_level(op.level + 1)
    out = {}
    for (xi, eta), v in op.terms.items():
        for step in g.edges[xi.range]:
            out[(g.extend(xi, step), g.extend(eta, step))] = v
    return PathPairOperator(g, op.level + 1, out, check=False)


def label_projector(graph: FusionGraph, labels: Iterable[int]) -> PathPairOperator:
    """Projection onto paths whose simple-label sequence equals ``labels``."""
    labels = tuple(int(c) for c in labels)
    cached = graph._projectors.get(labels)
    if cached is not None:
        return cached
    support = set(graph.components)
    for c in labels:
        if c not in support:
            raise ValidationError(f"label {c} does not occur in X")
    n = len(labels)
    one = graph.ring.scalar(1)
    terms = {(p, p): one for p in enumerate_paths(graph, n) if p.labels(graph) == labels}
    graph._projectors[labels] = PathPairOperator(graph, n, terms, check=False)
    return graph._projectors[labels]


def matrix_unit_basis(graph: FusionGraph, n: int) -> list[tuple[LabeledPath, LabeledPath]]:
    """All (xi, eta) with equal ranges, ordered by xi then eta."""
    groups = paths_by_range(graph, n)
    basis = []
    for xi in enumerate_paths(graph, n):
        for eta in groups[xi.range]:
            basis.append((xi, eta))
    return basis


# -- states ----------------------------------------------------------------


def _power(ring: FusionRing, base, n: int):
    if ring.exact:
        return Fraction(base) ** n
    return base ** n


def categorical_trace(op: PathPairOperator):
    """tr_C with tr_C(E_xx) = d_r(x) (trace of a minimal projection)."""
    dims = op.graph.dims
    return _sum(op.graph.ring, (v * dims[xi.range] for (xi, eta), v in op.terms.items() if xi == eta))


def canonical_state(op: PathPairOperator):
    """psi(E_xi,eta) = delta D_X^-n w(xi) d_r(xi)."""
    g = op.graph
    dims = g.dims
    total = _sum(g.ring, (v * xi.weight * dims[xi.range] for (xi, eta), v in op.terms.items() if xi == eta))
    return total / _power(g.ring, g.D_X, op.level)


def canonical_state_via_projectors(op: PathPairOperator):
    """D^-n sum over label words of d_c1...d_cn tr_C(op p_word).

    Only words labelling some bra path of ``op`` can contribute, since
    op p_word = 0 for the others.
    """
    g = op.graph
    ring = g.ring
    dims = g.dims
    words = sorted({eta.labels(g) for _, eta in op.terms})
    total = _sum(ring, ())
    for word in words:
        weight = ring.scalar(1)
        for c in word:
            weight = weight * dims[c]
        total += weight * categorical_trace(multiply(op, label_projector(g, word)))
    return total / _power(ring, g.D_X, op.level)


def markov_trace(op: PathPairOperator):
    """d_X^-n tr_C(op)."""
    g = op.graph
    return categorical_trace(op) / _power(g.ring, g.d_X, op.level)


def unit_state(op: PathPairOperator):
    """Coefficient of E_{xi0,xi0} for the all-unit path xi0."""
    g = op.graph
    try:
        j = g.components.index(0)
    except ValueError:
        raise UnsupportedError("the unit object does not occur in X") from None
    path = g.empty_path
    for _ in range(op.level):
        path = g.extend(path, Step(0, j, 0))
    return op.terms.get((path, path), g.ring.scalar(0))


def regular_q_state(op: PathPairOperator):
    """Regular Q-system state |G|^-n sum of all matrix-unit coefficients."""
    g = op.graph
    if not is_pointed(g.ring):
        raise UnsupportedError("regular Q-system state requires a pointed ring")
    order = len(g.components)
    if sorted(g.components) != list(range(g.ring.rank)):
        raise UnsupportedError("regular Q-system state requires X = sum of all simples")
    total = _sum(g.ring, op.terms.values())
    return total / _power(g.ring, order, op.level)


# -- modular flow and KMS --------------------------------------------------


def _imaginary_part(t):
    """beta when t = i*beta is purely imaginary, else None."""
    if isinstance(t, (int, float, Fraction)):
        return None
    if getattr(t, "real", None) == 0:
        return t.imag
    return None


def imaginary_flow(op: PathPairOperator, beta) -> PathPairOperator:
    """Analytic continuation sigma_{i beta}: E_xi,eta -> (w(xi)/w(eta))^beta E_xi,eta."""
    g = op.graph
    ring = g.ring
    exact_power = ring.exact and (isinstance(beta, int) or (isinstance(beta, Fraction) and beta.denominator == 1))
    out = {}
    for (xi, eta), v in op.terms.items():
        if exact_power:
            factor = Fraction(xi.weight) / Fraction(eta.weight)
            factor = factor ** int(beta)
        else:
            ratio = ring.ctx.mpf(xi.weight) / ring.ctx.mpf(eta.weight)
            factor = ratio ** ring.scalar(beta)
        out[(xi, eta)] = v * factor
    return PathPairOperator(g, op.level, out, check=False)


def modular_flow(op: PathPairOperator, t) -> PathPairOperator:
    """sigma_t(E_xi,eta) = (w(eta)/w(xi))^{it} E_xi,eta.

    A purely imaginary ``t = i beta`` is routed to :func:`imaginary_flow`, which
    keeps exact arithmetic when possible.  Real ``t`` produces phases in the
    ring's mpmath context.
    """
    g = op.graph
    ring = g.ring
    beta = _imaginary_part(t)
    if beta is not None:
        if isinstance(beta, float) and beta.is_integer():
            beta = int(beta)
        return imaginary_flow(op, beta)
    ctx = ring.ctx
    tt = ctx.convert(t) if not isinstance(t, Fraction) else ctx.mpf(t.numerator) / t.denominator
    out = {}
    for (xi, eta), v in op.terms.items():
        log_ratio = ctx.log(ctx.mpf(eta.weight)) - ctx.log(ctx.mpf(xi.weight))
        factor = ctx.expj(tt * log_ratio)
        out[(xi, eta)] = ring.scalar(v) * factor
    return PathPairOperator(g, op.level, out, check=False)


def kms_defect(x: PathPairOperator, y: PathPairOperator, beta=1):
    """|psi(x sigma_{i beta}(y)) - psi(y x)|."""
    x._same(y)
    return abs(canonical_state(multiply(x, imaginary_flow(y, beta))) - canonical_state(multiply(y, x)))


def _linked_pairs(graph: FusionGraph, n: int):
    """Basis pairs (E_ab, E_cd) with b == c or d == a.

    For every other pair both E_ab E_cd and E_cd E_ab vanish, so any defect
    of the form |phi(x f(y)) - phi(y x)| with f diagonal in matrix units is 0.
    """
    basis = matrix_unit_basis(graph, n)
    by_ket: dict = {}
    by_bra: dict = {}
    for a, b in basis:
        by_ket.setdefault(a, []).append((a, b))
        by_bra.setdefault(b, []).append((a, b))
    for a, b in basis:
        seen = set()
        for other in by_ket.get(b, ()) + by_bra.get(a, ()):
            if other not in seen:
                seen.add(other)
                yield (a, b), other


def kms_sweep(graph: FusionGraph, n: int, beta=1):
    """Max KMS defect over all level-n matrix-unit pairs."""
    worst = _sum(graph.ring, ())
    for (a, b), (c, d) in _linked_pairs(graph, n):
        x = PathPairOperator.unit(graph, a, b)
        y = PathPairOperator.unit(graph, c, d)
        worst = max(worst, kms_defect(x, y, beta))
    return worst


def traciality_defect(graph: FusionGraph, n: int):
    """Max |psi(ab) - psi(ba)| over level-n matrix-unit pairs."""
    graph.check_level(n)
    worst = _sum(graph.ring, ())
    for (a, b), (c, d) in _linked_pairs(graph, n):
        x = PathPairOperator.unit(graph, a, b)
        y = PathPairOperator.unit(graph, c, d)
        worst = max(worst, abs(canonical_state(multiply(x, y)) - canonical_state(multiply(y, x))))
    return worst


def gram_matrix(graph: FusionGraph, n: int, state=canonical_state) -> list[list]:
    """[state(x_i* x_j)] over the level-n matrix-unit basis."""
    units = [PathPairOperator.unit(graph, a, b) for a, b in matrix_unit_basis(graph, n)]
    stars = [adjoint(u) for u in units]
    return [[state(multiply(s, u)) for u in units] for s in stars]


# -- serialization ---------------------------------------------------------


def _encode_path(path: LabeledPath) -> list[list[int]]:
    return [[i, s.target, s.comp, s.slot] for i, s in enumerate(path.steps)]


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    import mpmath

    return mpmath.nstr(x, 30)


def operator_to_json(op: PathPairOperator) -> str:
    terms = []
    for (xi, eta), v in sorted(op.terms.items(), key=lambda kv: (kv[0][0].steps, kv[0][1].steps)):
        re = v.real if hasattr(v, "real") else v
        im = v.imag if hasattr(v, "imag") else 0
        terms.append({"ket": _encode_path(xi), "bra": _encode_path(eta), "re": _fmt(re), "im": _fmt(im)})
    return json.dumps({"level": op.level, "terms": terms}, indent=2, sort_keys=True)


def _decode_path(graph: FusionGraph, raw, n: int) -> LabeledPath:
    if not isinstance(raw, list) or len(raw) != n:
        raise ParseError("path length does not match level")
    path = graph.empty_path
    for i, edge in enumerate(raw):
        if not (isinstance(edge, list) and len(edge) == 4 and all(isinstance(v, int) for v in edge)):
            raise ParseError(f"bad edge id {edge!r}")
        pos, target, comp, slot = edge
        step = Step(target, comp, slot)
        if pos != i or step not in graph.edges[path.range]:
            raise ValidationError(f"edge {edge!r} is not a valid step from vertex {path.range}")
        path = graph.extend(path, step)
    return path


def _parse_number(ring: FusionRing, raw):
    if isinstance(raw, bool):
        raise ParseError("boolean coefficient")
    if isinstance(raw, int):
        return Fraction(raw) if ring.exact else ring.ctx.mpf(raw)
    if isinstance(raw, float):
        return ring.ctx.mpf(raw) if not ring.exact else Fraction(raw)
    if isinstance(raw, str):
        try:
            if ring.exact:
                return Fraction(raw)
            return ring.ctx.mpf(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {raw!r}") from None
    raise ParseError(f"bad coefficient {raw!r}")


def operator_from_json(graph: FusionGraph, text: str) -> PathPairOperator:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "level" not in doc or "terms" not in doc:
        raise ParseError("operator document needs 'level' and 'terms'")
    n = doc["level"]
    if not isinstance(n, int) or n < 0:
        raise ParseError("level must be a non-negative integer")
    graph.check_level(n)
    ring = graph.ring
    terms: dict = {}
    for t in doc["terms"]:
        if not isinstance(t, dict) or not {"ket", "bra"} <= set(t):
            raise ParseError("each term needs 'ket' and 'bra'")
        xi = _decode_path(graph, t["ket"], n)
        eta = _decode_path(graph, t["bra"], n)
        re = _parse_number(ring, t.get("re", 0))
        im = _parse_number(ring, t.get("im", 0))
        value = re if im == 0 else ring.ctx.mpc(ring.scalar(re), ring.scalar(im))
        terms[(xi, eta)] = terms.get((xi, eta), 0) + value
    try:
        return PathPairOperator(graph, n, terms)
    except LtoError:
        raise

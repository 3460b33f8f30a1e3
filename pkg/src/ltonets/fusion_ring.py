"""Fusion rings: loading, validation, quantum dimensions.

A fusion ring is stored as its simple labels, the duality involution and the
fusion tensor ``N[a, b, c] = N_{ab}^c``.  Index 0 is always the unit.

Quantum dimensions are computed in one of two arithmetic modes.  When every
Frobenius-Perron dimension is an integer the ring is *exact* and dimensions are
Python ints.  Otherwise they are mpmath floats living in a private
``MPContext`` whose precision is attached to the ring, so no global mpmath
state is touched.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from itertools import permutations

import mpmath
import numpy as np

from .errors import AxiomError, ParseError, ValidationError

DEFAULT_PRECISION = 50
# extra working digits on top of the requested precision
GUARD_DIGITS = 20

BUILTIN_NAMES = ("hilb_z2", "hilb_s3", "rep_s3", "fib", "ising")


def make_context(precision: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = precision + GUARD_DIGITS
    return ctx


@dataclass(frozen=True, eq=False)
class FusionRing:
    """Immutable fusion ring, optionally carrying its quantum dimensions.

    Attributes:
        simples: labels, index 0 is the unit.
        dual: the involution a -> a-bar as a tuple of indices.
        fusion: read-only int array of shape (k, k, k).
        name: optional identifier (built-in name or document name).
        dims: quantum dimensions, ``None`` until computed.
        exact: True when dims are certified integers.
        precision: decimal digits requested for numeric dims.
    """

    simples: tuple[str, ...]
    dual: tuple[int, ...]
    fusion: np.ndarray
    name: str | None = None
    dims: tuple | None = None
    exact: bool = False
    precision: int = DEFAULT_PRECISION
    ctx: mpmath.ctx_mp.MPContext = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return len(self.simples)

    def N(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def index(self, label: str) -> int:
        try:
            return self.simples.index(label)
        except ValueError:
            raise ValidationError(f"unknown simple {label!r}") from None

    def require_dims(self) -> tuple:
        if self.dims is None:
            raise ValidationError("quantum dimensions have not been computed")
        return self.dims

    @property
    def tolerance(self):
        """Comparison tolerance in the ring's arithmetic (0 when exact)."""
        if self.exact:
            return 0
        return self.ctx.mpf(10) ** (-(self.precision - 5))

    def scalar(self, value):
        """Coerce a Python number into the ring's scalar field."""
        if self.exact and isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, complex):
            return self.ctx.mpc(value.real, value.imag)
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator
        return self.ctx.convert(value)

    def with_dimensions(self, precision: int = DEFAULT_PRECISION) -> "FusionRing":
        """Return a copy with quantum dimensions filled in."""
        dims, exact, ctx = _compute_dimensions(self, precision)
        return replace(self, dims=dims, exact=exact, precision=precision, ctx=ctx)


# -- document format -------------------------------------------------------


def _parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("fusion-ring document must be a JSON object")
    unknown = set(doc) - {"name", "simples", "dual", "N"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    for key in ("simples", "dual", "N"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    return doc


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_fusion_ring(text: str) -> FusionRing:
    """Parse and validate a fusion-ring JSON document.

    Args:
        text: ``{"simples": [...], "dual": [...], "N": [[a, b, c, mult], ...]}``.

    Returns:
        A validated ring without dimensions.

    Raises:
        ParseError: malformed JSON or schema.
        AxiomError: a ring axiom fails; names the axiom and the indices.
    """
    doc = _parse_document(text)
    simples = doc["simples"]
    if not isinstance(simples, list) or not simples or not all(isinstance(s, str) for s in simples):
        raise ParseError("'simples' must be a non-empty list of strings")
    if len(set(simples)) != len(simples):
        raise ParseError("duplicate simple labels")
    k = len(simples)
    dual = doc["dual"]
    if not isinstance(dual, list) or len(dual) != k or not all(_is_int(d) and 0 <= d < k for d in dual):
        raise ParseError("'dual' must list one valid index per simple")
    entries = doc["N"]
    if not isinstance(entries, list):
        raise ParseError("'N' must be a list")
    fusion = np.zeros((k, k, k), dtype=np.int64)
    seen = set()
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 4 and all(_is_int(v) for v in entry)):
            raise ParseError(f"bad N entry {entry!r}")
        a, b, c, m = entry
        if not all(0 <= i < k for i in (a, b, c)) or m < 0:
            raise ParseError(f"N entry out of range {entry!r}")
        if (a, b, c) in seen:
            raise ParseError(f"duplicate N entry for {(a, b, c)}")
        seen.add((a, b, c))
        fusion[a, b, c] = m
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("'name' must be a string")
    validate_axioms(fusion, tuple(dual))
    fusion.setflags(write=False)
    return FusionRing(tuple(simples), tuple(dual), fusion, name=name)


def validate_axioms(fusion: np.ndarray, dual: tuple[int, ...]) -> None:
    """Check unit, duality and associativity; raise AxiomError on failure."""
    k = fusion.shape[0]
    if dual[0] != 0:
        raise AxiomError("dual of unit", (0,))
    for a in range(k):
        if dual[dual[a]] != a:
            raise AxiomError("dual involution", (a,))
    eye = np.eye(k, dtype=np.int64)
    for a in range(k):
        for b in range(k):
            if fusion[0, a, b] != eye[a, b] or fusion[a, 0, b] != eye[a, b]:
                raise AxiomError("unit law", (a, b))
    for a in range(k):
        for b in range(k):
            if fusion[a, b, 0] != (1 if b == dual[a] else 0):
                raise AxiomError("duality N_ab^1", (a, b))
            for c in range(k):
                if fusion[a, b, c] != fusion[dual[b], dual[a], dual[c]]:
                    raise AxiomError("duality N_ab^c = N_(b*)(a*)^(c*)", (a, b, c))
    left = np.einsum("abe,ecd->abcd", fusion, fusion)
    right = np.einsum("bcf,afd->abcd", fusion, fusion)
    bad = np.argwhere(left != right)
    if len(bad):
        raise AxiomError("associativity", tuple(int(i) for i in bad[0]))


def dump_fusion_ring(ring: FusionRing) -> str:
    """Canonical JSON text for a ring (stable byte-for-byte)."""
    lines = ["{"]
    if ring.name is not None:
        lines.append(f'  "name": {json.dumps(ring.name)},')
    lines.append(f'  "simples": {json.dumps(list(ring.simples), ensure_ascii=False)},')
    lines.append(f'  "dual": {json.dumps(list(ring.dual))},')
    entries = [
        f"    [{a}, {b}, {c}, {int(ring.fusion[a, b, c])}]"
        for a, b, c in admissible_triples(ring)
    ]
    lines.append('  "N": [')
    lines.append(",\n".join(entries))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- built-in rings --------------------------------------------------------


def _ring_from_products(name, simples, dual, product) -> FusionRing:
    """Build a ring from a function returning {c: mult} for a (x) b."""
    k = len(simples)
    fusion = np.zeros((k, k, k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            for c, m in product(a, b).items():
                fusion[a, b, c] = m
    validate_axioms(fusion, dual)
    fusion.setflags(write=False)
    return FusionRing(tuple(simples), tuple(dual), fusion, name=name)


def _s3_elements() -> list[tuple[int, ...]]:
    # identity, three transpositions, two 3-cycles
    return [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]


def _generate_builtin(name: str) -> FusionRing:
    if name == "hilb_z2":
        return _ring_from_products(name, ["1", "g"], [0, 1], lambda a, b: {(a + b) % 2: 1})
    if name == "hilb_s3":
        elems = _s3_elements()
        labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"]

        def compose(a, b):
            p, q = elems[a], elems[b]
            return elems.index(tuple(p[q[i]] for i in range(3)))

        inverse = [next(b for b in range(6) if compose(a, b) == 0) for a in range(6)]
        return _ring_from_products(name, labels, inverse, lambda a, b: {compose(a, b): 1})
    if name == "rep_s3":
        table = {
            (2, 2): {0: 1, 1: 1, 2: 1},
            (1, 1): {0: 1},
            (1, 2): {2: 1},
            (2, 1): {2: 1},
        }

        def rep_product(a, b):
            if a == 0:
                return {b: 1}
            if b == 0:
                return {a: 1}
            return table[(a, b)]

        return _ring_from_products(name, ["1", "sgn", "rho"], [0, 1, 2], rep_product)
    if name == "fib":
        def fib_product(a, b):
            if a == 0 or b == 0:
                return {a + b: 1}
            return {0: 1, 1: 1}

        return _ring_from_products(name, ["1", "tau"], [0, 1], fib_product)
    if name == "ising":
        def ising_product(a, b):
            if a == 0:
                return {b: 1}
            if b == 0:
                return {a: 1}
            if a == 1 and b == 1:
                return {0: 1}
            if a == 2 and b == 2:
                return {0: 1, 1: 1}
            return {2: 1}

        return _ring_from_products(name, ["1", "psi", "sigma"], [0, 1, 2], ising_product)
    raise ValidationError(f"unknown built-in ring {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def builtin_document(name: str) -> str:
    """The shipped JSON document of a built-in ring."""
    if name not in BUILTIN_NAMES:
        raise ValidationError(f"unknown built-in ring {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return resources.files("ltonets").joinpath("rings", f"{name}.json").read_text(encoding="utf-8")


def builtin_ring(name: str, precision: int = DEFAULT_PRECISION) -> FusionRing:
    """Load a built-in ring and compute its dimensions."""
    return load_fusion_ring(builtin_document(name)).with_dimensions(precision)


# -- dimensions ------------------------------------------------------------


def _total_matrix(ring: FusionRing) -> np.ndarray:
    # T[b, c] = sum_a N_ab^c ; T d = (sum_a d_a) d
    return ring.fusion.sum(axis=0)


def _compute_dimensions(ring: FusionRing, precision: int):
    if precision < 10:
        raise ValidationError("precision must be at least 10 digits")
    k = ring.rank
    T = _total_matrix(ring)
    if np.any(T <= 0):
        raise AxiomError("rigidity (total fusion matrix not positive)", ())

    # power iteration in floats for a starting point
    v = np.ones(k)
    for _ in range(500):
        w = T @ v
        w /= w[0]
        if np.allclose(w, v, rtol=1e-14, atol=0):
            v = w
            break
        v = w
    approx = v / v[0]

    ints = [int(round(x)) for x in approx]
    if all(abs(x - n) < 1e-6 for x, n in zip(approx, ints)) and _is_character(ring, ints):
        ctx = make_context(precision)
        return tuple(ints), True, ctx

    ctx = make_context(precision)
    d = _newton_polish(ctx, T, approx)
    if d is None:
        raise AxiomError("Frobenius-Perron iteration did not converge", ())
    tol = ctx.mpf(10) ** (-(precision + GUARD_DIGITS // 2))
    for a in range(k):
        for b in range(k):
            lhs = d[a] * d[b]
            rhs = ctx.fsum(int(ring.fusion[a, b, c]) * d[c] for c in range(k))
            if abs(lhs - rhs) > tol:
                raise AxiomError("dimension character", (a, b), "residual too large")
    if any(x < 1 - tol for x in d):
        raise AxiomError("dimensions below 1", ())
    return tuple(d), False, ctx


def _is_character(ring: FusionRing, d: list[int]) -> bool:
    if d[0] != 1 or any(x < 1 for x in d):
        return False
    k = ring.rank
    for a in range(k):
        for b in range(k):
            if d[a] * d[b] != sum(int(ring.fusion[a, b, c]) * d[c] for c in range(k)):
                return False
    return True


def _newton_polish(ctx, T: np.ndarray, approx: np.ndarray, max_iter: int = 60):
    """Newton iteration on (T d = lam d, d_0 = 1) in the given context."""
    k = len(approx)
    Tm = ctx.matrix([[int(T[i, j]) for j in range(k)] for i in range(k)])
    d = ctx.matrix([ctx.mpf(float(x)) for x in approx])
    lam = (Tm * d)[0] / d[0]
    target = ctx.mpf(10) ** (-(ctx.dps - 5))
    for _ in range(max_iter):
        r = Tm * d - lam * d
        if ctx.norm(r) < target:
            return [d[i] for i in range(k)]
        J = ctx.zeros(k + 1, k + 1)
        rhs = ctx.zeros(k + 1, 1)
        for i in range(k):
            for j in range(k):
                J[i, j] = Tm[i, j] - (lam if i == j else 0)
            J[i, k] = -d[i]
            rhs[i] = -r[i]
        J[k, 0] = 1
        rhs[k] = -(d[0] - 1)
        step = ctx.lu_solve(J, rhs)
        for i in range(k):
            d[i] += step[i]
        lam += step[k]
    return None


def fp_dimensions(ring: FusionRing, precision: int = DEFAULT_PRECISION) -> tuple:
    """Frobenius-Perron dimension vector (d_1 = 1, positive character)."""
    if ring.dims is not None and ring.precision == precision:
        return ring.dims
    return ring.with_dimensions(precision).dims


def global_dimension(ring: FusionRing):
    """Sum of squared quantum dimensions."""
    dims = ring.require_dims()
    if ring.exact:
        return sum(d * d for d in dims)
    return ring.ctx.fsum(d * d for d in dims)


def is_pointed(ring: FusionRing) -> bool:
    """True iff every fusion matrix N_a is a permutation matrix."""
    totals = ring.fusion.sum(axis=2)
    return bool(np.all(totals == 1) and np.all(ring.fusion <= 1))


def admissible_triples(ring: FusionRing) -> list[tuple[int, int, int]]:
    """All (a, b, c) with N_ab^c >= 1, lexicographic."""
    return [tuple(int(i) for i in t) for t in np.argwhere(ring.fusion > 0)]


def ring_from_group_table(name: str, labels: list[str], compose) -> FusionRing:
    """Pointed ring of a finite group given its composition on indices."""
    k = len(labels)
    inverse = [next(b for b in range(k) if compose(a, b) == 0) for a in range(k)]
    return _ring_from_products(name, labels, inverse, lambda a, b: {compose(a, b): 1})


def symmetric_group_ring(n: int) -> FusionRing:
    """Hilb(S_n) with permutations listed lexicographically."""
    elems = list(permutations(range(n)))

    def compose(a, b):
        p, q = elems[a], elems[b]
        return elems.index(tuple(p[q[i]] for i in range(n)))

    return ring_from_group_table(f"hilb_s{n}", ["".join(map(str, p)) for p in elems], compose)

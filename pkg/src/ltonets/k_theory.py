"""Dimension groups of stationary AF algebras.

A stationary Bratteli diagram is an integer matrix A (columns = source
vertices) together with the class e of the unit at level 0.  K_0 is the
inductive limit of Z^k under A; the unique trace pairs with it through the
left Perron-Frobenius eigenvector tau, normalized by tau . e = 1.

An infinitesimal is a class v with tau . v = 0 whose image A^m v never
vanishes.  Two certificates are accepted for "never vanishes": A invertible
over Q, or A^m v != 0 for m = 2k (once the eventually-nilpotent part is
exhausted, which happens after at most k steps, the orbit cannot reach 0).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from .errors import InconclusiveError, ValidationError
from .fusion_ring import FusionRing, is_pointed

MAX_SEQUENCE_LEVEL = 40


@dataclass(frozen=True)
class StationaryAFData:
    """Integer Bratteli matrix with unit class and trace vector.

    Attributes:
        matrix: A as a tuple of rows, A[target][source].
        e: unit class.
        tau: left PF eigenvector with tau . e = 1 (Fractions when exact).
        fp_eigenvalue: PF eigenvalue (int when exact).
        exact: True when tau is rational.
        label: optional description of how A was obtained.
    """

    matrix: tuple[tuple[int, ...], ...]
    e: tuple[int, ...]
    tau: tuple
    fp_eigenvalue: object
    exact: bool
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.e)

    def sympy_matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.matrix)


def _mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def is_primitive(matrix) -> bool:
    """Some power of the non-negative matrix is strictly positive."""
    A = np.array(matrix, dtype=object)
    k = A.shape[0]
    pattern = (A > 0).astype(np.int64)
    P = pattern.copy()
    # Wielandt bound (k-1)^2 + 1
    for _ in range((k - 1) ** 2 + 1):
        if np.all(P > 0):
            return True
        P = ((P @ pattern) > 0).astype(np.int64)
    return bool(np.all(P > 0))


def stationary_data(matrix, e, label: str = "") -> StationaryAFData:
    """Validate A and compute its trace vector (exactly when rational)."""
    A = tuple(tuple(int(x) for x in row) for row in matrix)
    k = len(A)
    if k == 0 or any(len(row) != k for row in A):
        raise ValidationError("Bratteli matrix must be square and non-empty")
    if any(x < 0 for row in A for x in row):
        raise ValidationError("Bratteli matrix must be non-negative")
    e = tuple(int(x) for x in e)
    if len(e) != k:
        raise ValidationError("unit class has the wrong length")
    if not is_primitive(A):
        raise ValidationError("Bratteli matrix is not primitive")

    M = sympy.Matrix(A)
    floats = np.array(A, dtype=float)
    eigvals = np.linalg.eigvals(floats.T)
    lam_float = max(eigvals.real)
    lam_int = int(round(lam_float))
    tau = None
    exact = False
    lam = None
    if abs(lam_float - lam_int) < 1e-9:
        null = (M.T - lam_int * sympy.eye(k)).nullspace()
        if len(null) == 1:
            vec = [sympy.Rational(x) for x in null[0]]
            if all(x < 0 for x in vec):
                vec = [-x for x in vec]
            if all(x > 0 for x in vec):
                tau = tuple(Fraction(int(x.p), int(x.q)) for x in vec)
                exact = True
                lam = lam_int
    if tau is None:
        ctx = mpmath.MPContext()
        ctx.dps = 50
        w, vl = np.linalg.eig(floats.T)
        i = int(np.argmax(w.real))
        vec = np.abs(vl[:, i].real)
        tau = tuple(ctx.mpf(float(x)) for x in vec)
        lam = ctx.mpf(float(w[i].real))
    norm = sum(t * x for t, x in zip(tau, e))
    if norm == 0:
        raise ValidationError("unit class pairs to zero with the trace")
    tau = tuple(t / norm for t in tau)
    return StationaryAFData(A, e, tau, lam, exact, label)


def one_sided_matrix(ring: FusionRing, X=None) -> list[list[int]]:
    """A[c2][c1] = sum_{x in X} N_{c1 x}^{c2} (tensor by X on the right)."""
    comps = range(ring.rank) if X is None else X
    k = ring.rank
    return [[sum(int(ring.fusion[c1, x, c2]) for x in comps) for c1 in range(k)] for c2 in range(k)]


def two_sided_matrix(ring: FusionRing) -> list[list[int]]:
    """A[c2][c1] = number of copies of c2 in a (x) c1 (x) b summed over a, b."""
    k = ring.rank
    N = ring.fusion
    return [
        [
            sum(int(N[a, c1, e]) * int(N[e, b, c2]) for a in range(k) for b in range(k) for e in range(k))
            for c1 in range(k)
        ]
        for c2 in range(k)
    ]


def ring_af_data(ring: FusionRing, coarse: bool = False) -> StationaryAFData:
    """Stationary data of the boundary algebra of ``ring``.

    ``coarse=False`` is one tensoring step by X = sum of simples;
    ``coarse=True`` is one two-sided step (the appendix graph).
    """
    e = [0] * ring.rank
    e[0] = 1
    if coarse:
        return stationary_data(two_sided_matrix(ring), e, label=f"{ring.name}: two-sided step")
    return stationary_data(one_sided_matrix(ring), e, label=f"{ring.name}: one-sided step")


def dimension_sequence(data: StationaryAFData, n: int) -> list[tuple[int, ...]]:
    """e, Ae, ..., A^n e as exact integer vectors."""
    if n < 0 or n > MAX_SEQUENCE_LEVEL:
        raise ValidationError(f"level must lie in [0, {MAX_SEQUENCE_LEVEL}]")
    seq = [data.e]
    for _ in range(n):
        seq.append(_mat_vec(data.matrix, seq[-1]))
    return seq


def trace_pairing(data: StationaryAFData, v) -> Fraction:
    """tau . v with tau . e = 1."""
    v = tuple(int(x) for x in v)
    if len(v) != data.size:
        raise ValidationError("vector has the wrong length")
    return sum((t * x for t, x in zip(data.tau, v)), Fraction(0) if data.exact else 0)


@dataclass
class InfinitesimalResult:
    witness: tuple[int, ...] | None
    certificate: str
    determinant: int
    orbit: list[tuple[int, ...]]


def find_infinitesimal(data: StationaryAFData, bound: int = 1) -> InfinitesimalResult:
    """First (lexicographic, sup-norm <= bound) certified infinitesimal.

    Returns a result whose ``witness`` is None when the pairing kernel is
    killed by A^k, i.e. K_0 has no infinitesimals.

    Raises:
        InconclusiveError: neither certificate applies.
    """
    if bound < 1:
        raise ValidationError("bound must be at least 1")
    if not data.exact:
        raise InconclusiveError("exact K_0 analysis needs a rational trace vector")
    k = data.size
    M = data.sympy_matrix()
    det = int(M.det())

    def power_orbit(v, m):
        orbit = [tuple(v)]
        for _ in range(m):
            orbit.append(_mat_vec(data.matrix, orbit[-1]))
        return orbit

    kernel = sympy.Matrix([list(data.tau)]).nullspace()
    power = sympy.eye(k)
    for m in range(1, 2 * k + 1):
        power = M * power
        if all(not any(power * vec) for vec in kernel):
            return InfinitesimalResult(None, f"pairing kernel (dim {len(kernel)}) annihilated by A^{m}", det, [])

    for v in itertools.product(range(-bound, bound + 1), repeat=k):
        if not any(v) or trace_pairing(data, v) != 0:
            continue
        if det != 0:
            return InfinitesimalResult(v, "A invertible over Q", det, power_orbit(v, 1))
        orbit = power_orbit(v, 2 * k)
        if any(orbit[-1]):
            return InfinitesimalResult(v, f"A^{2 * k} v != 0", det, orbit)
    raise InconclusiveError(f"no certified infinitesimal with sup-norm <= {bound}")


@dataclass
class UhfReport:
    rank_one: bool
    q: int | None
    primes: tuple[int, ...]
    description: str


def uhf_report(data: StationaryAFData) -> UhfReport:
    """M_{q^infty} when A has rank 1 over Q, else "not rank-1"."""
    M = data.sympy_matrix()
    if M.rank() != 1:
        return UhfReport(False, None, (), "not rank-1")
    q = int(M.trace())
    primes = tuple(sorted(sympy.factorint(q)))
    return UhfReport(True, q, primes, f"M_{{{q}^inf}} (supernatural {'*'.join(f'{p}^inf' for p in primes)})")


def k0_report(data: StationaryAFData, bound: int = 1, levels: int = 4) -> dict:
    try:
        inf = find_infinitesimal(data, bound)
        infinitesimal = {
            "witness": None if inf.witness is None else list(inf.witness),
            "certificate": inf.certificate,
            "determinant": inf.determinant,
        }
    except InconclusiveError as exc:
        infinitesimal = {"witness": None, "certificate": f"inconclusive: {exc}", "determinant": None}
    uhf = uhf_report(data)
    return {
        "label": data.label,
        "matrix": [list(r) for r in data.matrix],
        "e": list(data.e),
        "tau": [str(t) for t in data.tau],
        "fp_eigenvalue": str(data.fp_eigenvalue),
        "sequence": [list(v) for v in dimension_sequence(data, levels)],
        "infinitesimal": infinitesimal,
        "uhf": uhf.description,
    }


def ring_k0_summary(ring: FusionRing, bound: int = 1) -> dict:
    """One-sided and two-sided reports, with the per-step UHF factor."""
    if not ring.exact:
        raise InconclusiveError("exact K_0 analysis is restricted to integral rings")
    out = {"ring": ring.name, "pointed": is_pointed(ring)}
    out["one_sided"] = k0_report(ring_af_data(ring, coarse=False), bound)
    out["two_sided"] = k0_report(ring_af_data(ring, coarse=True), bound)
    return out


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)

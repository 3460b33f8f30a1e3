"""Brute-force state-vector checks for small Toric Code windows.

Everything here works on the 2^E computational basis of a window of E edges
and is independent of the symplectic reduction in ``toric.reduction``; the
two are compared wherever they overlap.

The ground space of a region is built directly: plaquette terms are diagonal,
so the image of p = prod (1+B)/2 prod (1+A)/2 is spanned by the uniform
superpositions over orbits of the star group acting on plaquette-even basis
states.  ``build_projector`` forms the product of projectors literally and is
used to corroborate the orbit construction on small windows.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ResourceError, ValidationError
from .toric.boundary import BoundaryElement
from .toric.lattice import CompletelySurrounds, LatticeRegion, SurroundsWithSharedBoundary, region_relation
from .toric.lattice import _stabilizers
from .toric.pauli import PauliMonomial, edge_bit
from .toric.reduction import boundary_channel, random_commuting_monomials, random_monomials

DEFAULT_CAP = 20
PROJECTOR_NNZ_CAP = 20_000_000
TOL = 1e-10

_PHASES = np.array([1, 1j, -1, -1j])


class DenseWindow:
    """The computational basis of a window's edges.

    Bit i of a basis index is the state of the i-th edge in (y, x, dir) order.
    """

    def __init__(self, region: LatticeRegion, cap: int = DEFAULT_CAP):
        edges = region.sorted_edges()
        if len(edges) > cap:
            raise ResourceError(f"window has {len(edges)} edges, cap is {cap}")
        if not edges:
            raise ValidationError("empty window")
        self.region = region
        self.edges = edges
        self.n = len(edges)
        self._global = [edge_bit(e) for e in edges]
        self._index = {b: i for i, b in enumerate(self._global)}
        self._mask = sum(1 << b for b in self._global)

    @property
    def size(self) -> int:
        return 1 << self.n

    def local(self, p: PauliMonomial) -> tuple[int, int, int]:
        if p.support & ~self._mask:
            raise ValidationError("operator is not supported in the window")
        x = z = 0
        for b, i in self._index.items():
            x |= ((p.x >> b) & 1) << i
            z |= ((p.z >> b) & 1) << i
        return p.phase, x, z

    def local_mask(self, region: LatticeRegion) -> int:
        return sum(1 << self._index[edge_bit(e)] for e in region.edges)

    def pauli_matrix(self, p: PauliMonomial) -> sp.csr_matrix:
        """i^k X^x Z^z as a sparse matrix: |s> -> i^k (-1)^{|z & s|} |s ^ x>."""
        k, x, z = self.local(p)
        s = np.arange(self.size, dtype=np.int64)
        data = _PHASES[k] * (1 - 2 * (np.bitwise_count(s & z).astype(np.int64) & 1))
        return sp.csr_matrix((data.astype(complex), (s ^ x, s)), shape=(self.size, self.size))

    def apply(self, p: PauliMonomial, V: sp.spmatrix) -> sp.csr_matrix:
        """P V without forming P."""
        k, x, z = self.local(p)
        coo = V.tocoo()
        rows = coo.row.astype(np.int64)
        signs = 1 - 2 * (np.bitwise_count(rows & z).astype(np.int64) & 1)
        return sp.csr_matrix((coo.data * _PHASES[k] * signs, (rows ^ x, coo.col)), shape=V.shape)


def _echelon(masks) -> dict[int, int]:
    """Fully reduced F2 echelon form {pivot bit: row}."""
    pivots: dict[int, int] = {}
    for r in masks:
        for piv, row in pivots.items():
            if (r >> piv) & 1:
                r ^= row
        if not r:
            continue
        top = r.bit_length() - 1
        for piv in list(pivots):
            if (pivots[piv] >> top) & 1:
                pivots[piv] ^= r
        pivots[top] = r
    return pivots


@dataclass
class GroundSpace:
    """Orthonormal basis of the image of p_region inside a window."""

    window: DenseWindow
    region: LatticeRegion
    V: sp.csc_matrix
    orbit_size: int
    states: np.ndarray  # ground-supporting basis states
    label: np.ndarray  # orbit of each entry of states
    labels: np.ndarray  # orbit of every basis state, -1 off the support

    @property
    def dim(self) -> int:
        return self.V.shape[1]

    def compress(self, p: PauliMonomial) -> sp.csr_matrix:
        """V^* P V as a sparse dim x dim matrix (one entry per column at most).

        Column j of V is the normalized indicator of an orbit, so the entry
        (label(s ^ x), j) collects i^k (-1)^{|z & s|} / |orbit| over s in orbit j.
        """
        k, x, z = self.window.local(p)
        target = self.labels[self.states ^ x]
        signs = 1 - 2 * (np.bitwise_count(self.states & z).astype(np.int64) & 1)
        inside = target >= 0
        M = sp.csr_matrix(
            (signs[inside] * (_PHASES[k] / self.orbit_size), (target[inside], self.label[inside])),
            shape=(self.dim, self.dim),
        )
        M.data[abs(M.data) < 1e-13] = 0
        M.eliminate_zeros()
        return M

    def compress_via_products(self, p: PauliMonomial) -> sp.csr_matrix:
        """The same compression as a literal sparse product V^* (P V)."""
        return (self.V.conj().T @ self.window.apply(p, self.V)).tocsr()

    def compress_element(self, e: BoundaryElement) -> sp.csr_matrix:
        if e.interval is None:
            raise ValidationError("boundary element has no lattice interval")
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for (a, b), c in e.terms.items():
            out = out + complex(c) * self.compress(e.interval.monomial(a, b))
        return out

    def expectation(self, p: PauliMonomial) -> complex:
        """tr(p P) / tr(p)."""
        return complex(self.compress(p).diagonal().sum()) / self.dim

    def reduced_density(self, sub: LatticeRegion) -> np.ndarray:
        """Tr over the complement of sub of p / tr(p)."""
        keep = [i for i in range(self.window.n) if (self.window.local_mask(sub) >> i) & 1]
        rest = [i for i in range(self.window.n) if i not in keep]
        coo = self.V.tocoo()
        rows = coo.row.astype(np.int64)
        lam = np.zeros_like(rows)
        for j, i in enumerate(keep):
            lam |= ((rows >> i) & 1) << j
        other = np.zeros_like(rows)
        for j, i in enumerate(rest):
            other |= ((rows >> i) & 1) << j
        W = sp.csr_matrix(
            (coo.data, (lam, other * self.dim + coo.col)),
            shape=(1 << len(keep), (1 << len(rest)) * self.dim),
        )
        return (W @ W.conj().T).toarray() / self.dim


def ground_space(region: LatticeRegion, window: DenseWindow) -> GroundSpace:
    """Ground space of the stabilizers of ``region`` on the window's edges."""
    stabs = _stabilizers(region)
    stars, plaquettes = [], []
    for g in stabs:
        _, x, z = window.local(g.pauli)
        (stars if g.kind == "A" else plaquettes).append(x if g.kind == "A" else z)
    s = np.arange(window.size, dtype=np.int64)
    keep = np.ones(window.size, dtype=bool)
    for z in plaquettes:
        keep &= (np.bitwise_count(s & z) & 1) == 0
    s = s[keep]
    rep = s.copy()
    pivots = _echelon(stars)
    for piv, row in pivots.items():
        hit = ((rep >> piv) & 1).astype(bool)
        rep[hit] ^= row
    _, label = np.unique(rep, return_inverse=True)
    orbit = 1 << len(pivots)
    n_orbits = int(label.max()) + 1 if len(label) else 0
    V = sp.csc_matrix(
        (np.full(len(s), 1 / np.sqrt(orbit)), (s, label)), shape=(window.size, n_orbits), dtype=complex
    )
    labels = np.full(window.size, -1, dtype=np.int64)
    labels[s] = label
    return GroundSpace(window, region, V, orbit, s, label, labels)


def build_projector(region: LatticeRegion, window: DenseWindow) -> sp.csr_matrix:
    """prod over stabilizers of (1 + g)/2, as a sparse matrix.

    Raises:
        ResourceError: the product would exceed PROJECTOR_NNZ_CAP nonzeros.
    """
    stabs = _stabilizers(region)
    star_rank = len(_echelon([window.local(g.pauli)[1] for g in stabs if g.kind == "A"]))
    if window.size * (1 << star_rank) > PROJECTOR_NNZ_CAP:
        raise ResourceError("projector too dense for the configured cap")
    eye = sp.identity(window.size, dtype=complex, format="csr")
    P = eye
    for g in stabs:
        P = P @ ((eye + window.pauli_matrix(g.pauli)) * 0.5)
        P.eliminate_zeros()
    return P.tocsr()


def projector_residuals(P: sp.spmatrix) -> dict:
    return {
        "idempotent": float(abs(P @ P - P).max()) if P.nnz else 0.0,
        "selfadjoint": float(abs(P - P.conj().T).max()) if P.nnz else 0.0,
    }


def ground_state_count(region: LatticeRegion, cap: int = DEFAULT_CAP) -> int:
    window = DenseWindow(region, cap)
    return ground_space(region, window).dim


def monotonicity_residual(inner: LatticeRegion, outer: LatticeRegion, cap: int = DEFAULT_CAP) -> float:
    """max |p_inner p_outer - p_outer| on the outer window."""
    window = DenseWindow(outer, cap)
    big = ground_space(outer, window).V
    small = ground_space(inner, window).V
    diff = small @ (small.conj().T @ big) - big
    return float(abs(diff).max()) if diff.nnz else 0.0


# -- axiom checks ----------------------------------------------------------


def _relation(inner, outer, s):
    rel = region_relation(inner, outer, s)
    if rel is None:
        raise ValidationError(f"no surrounding relation at s = {s}")
    return rel


def single_edge_paulis(region: LatticeRegion) -> list[PauliMonomial]:
    out = []
    for e in region.sorted_edges():
        out += [
            PauliMonomial.from_edges(x_edges=[e]),
            PauliMonomial.from_edges(x_edges=[e], z_edges=[e], phase=1),
            PauliMonomial.from_edges(z_edges=[e]),
        ]
    return out


def verify_lto1(inner: LatticeRegion, outer: LatticeRegion, s: int = 2, cap: int = DEFAULT_CAP) -> dict:
    """max || p x p - c p || over single-edge Paulis and stabilizers of inner.

    c is the best scalar tr(V^* x V)/dim; it is compared with the symplectic
    boundary channel.
    """
    rel = _relation(inner, outer, s)
    if not isinstance(rel, CompletelySurrounds):
        raise ValidationError("LTO1 needs inner completely surrounded by outer")
    window = DenseWindow(outer, cap)
    gs = ground_space(outer, window)
    ops = single_edge_paulis(inner) + [g.pauli for g in _stabilizers(inner)]
    deviation = mismatch = 0.0
    eye = sp.identity(gs.dim, dtype=complex, format="csr")
    for p in ops:
        M = gs.compress(p)
        c = M.diagonal().sum() / gs.dim
        # Frobenius norm, an upper bound for the operator norm
        deviation = max(deviation, float(sp.linalg.norm(M - c * eye)))
        mismatch = max(mismatch, abs(c - complex(boundary_channel(p, inner, outer, s))))
    return {
        "inner": str(inner),
        "outer": str(outer),
        "s": s,
        "edges": window.n,
        "ground_dim": gs.dim,
        "operators": len(ops),
        "max_deviation": deviation,
        "max_channel_mismatch": mismatch,
        "ok": deviation < TOL and mismatch < TOL,
    }


def _gram(mats: list[sp.spmatrix], dim: int) -> np.ndarray:
    """Normalized Hilbert-Schmidt Gram matrix tr(M_i^* M_j) / dim."""
    rows, cols, vals = [], [], []
    for i, m in enumerate(mats):
        coo = m.tocoo()
        rows.append(np.full(coo.nnz, i))
        cols.append(coo.row.astype(np.int64) * dim + coo.col)
        vals.append(coo.data)
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(len(mats), dim * dim)
    )
    return (A.conj() @ A.T).toarray() / dim


def _rank(mats: list[sp.spmatrix], dim: int) -> int:
    """Dimension of the span, as the rank of the Gram matrix."""
    if not mats:
        return 0
    return int(np.linalg.matrix_rank(_gram(mats, dim), tol=1e-8, hermitian=True))


def verify_lto234(
    inner: LatticeRegion,
    outer: LatticeRegion,
    outer2: LatticeRegion | None = None,
    samples: int = 64,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> dict:
    """Boundary span (LTO2), stability under enlarging Delta (LTO3), injectivity (LTO4).

    The compressions V^* P V of sampled inner-supported monomials must span
    the same space as the compressions of the 2^{2n+1} canonical boundary
    monomials; the latter must be independent; with a second, larger Delta
    the normalized Gram matrices of the boundary compressions must agree.
    """
    rel = _relation(inner, outer, 2)
    if not isinstance(rel, SurroundsWithSharedBoundary):
        raise ValidationError("LTO2-4 need inner to share exactly one side with outer")
    interval = rel.interval
    rng = random.Random(seed)
    expected = 1 << (2 * interval.n_sites - 1)
    from .toric.boundary import canonical_monomials

    basis = canonical_monomials(interval.n_sites)

    def analyse(delta: LatticeRegion):
        window = DenseWindow(delta, cap)
        gs = ground_space(delta, window)
        boundary = [gs.compress(interval.monomial(a, b)) for a, b in basis]
        sample = random_commuting_monomials(inner, delta, rng, samples) + random_monomials(inner, rng, samples)
        mats = []
        channel_gap = 0.0
        for p in sample:
            M = gs.compress(p)
            mats.append(M)
            e = boundary_channel(p, inner, delta)
            diff = M - gs.compress_element(e) if e.terms else M
            channel_gap = max(channel_gap, float(abs(diff).max()) if diff.nnz else 0.0)
        return window, gs, boundary, mats, channel_gap

    window, gs, boundary, mats, gap = analyse(outer)
    rank_boundary = _rank(boundary, gs.dim)
    rank_sample = _rank(mats, gs.dim)
    rank_union = _rank(boundary + mats, gs.dim)
    # a random nonzero boundary element must not be killed by p
    coeffs = {m: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for m in basis}
    e = BoundaryElement(interval.n_sites, coeffs, interval)
    eV = sum((c * window.apply(interval.monomial(*m), gs.V) for m, c in coeffs.items()), sp.csr_matrix(gs.V.shape))
    report = {
        "inner": str(inner),
        "outer": str(outer),
        "side": interval.side,
        "kind": interval.kind,
        "sites": interval.n_sites,
        "edges": window.n,
        "ground_dim": gs.dim,
        "expected_dim": expected,
        "rank_boundary": rank_boundary,
        "rank_sample": rank_sample,
        "rank_union": rank_union,
        "channel_mismatch": gap,
        "random_element_norm": float(sp.linalg.norm(eV)) if e.terms else 0.0,
    }
    report["lto2"] = rank_union == rank_boundary and gap < TOL
    report["lto4"] = rank_boundary == expected and report["random_element_norm"] > TOL
    if outer2 is not None:
        rel2 = _relation(inner, outer2, 2)
        if not isinstance(rel2, SurroundsWithSharedBoundary) or rel2.interval.side != interval.side:
            raise ValidationError("second Delta must share the same side")
        window2, gs2, boundary2, mats2, gap2 = analyse(outer2)
        g1 = _gram(boundary, gs.dim)
        g2 = _gram(boundary2, gs2.dim)
        report["outer2"] = str(outer2)
        report["edges2"] = window2.n
        report["gram_gap"] = float(abs(g1 - g2).max())
        report["rank_boundary2"] = _rank(boundary2, gs2.dim)
        report["channel_mismatch2"] = gap2
        report["lto3"] = report["gram_gap"] < TOL and report["rank_boundary2"] == expected and gap2 < TOL
    report["ok"] = report["lto2"] and report["lto4"] and report.get("lto3", True)
    return report


def verify_state_uniqueness(
    inner: LatticeRegion,
    outer: LatticeRegion,
    outer2: LatticeRegion,
    s: int = 2,
    sweep: int = 200,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> dict:
    """psi from compression vs the symplectic channel, and TQO2 proportionality.

    ``outer2`` (Gamma) contains ``outer`` (Delta); both completely surround
    ``inner``.  The normalized reduced density matrices of p_Delta and
    p_Gamma on ``inner`` must coincide.
    """
    for delta in (outer, outer2):
        if not isinstance(_relation(inner, delta, s), CompletelySurrounds):
            raise ValidationError("state uniqueness needs inner completely surrounded")
    if not outer.edges <= outer2.edges:
        raise ValidationError("Delta must lie inside Gamma")
    window = DenseWindow(outer2, cap)
    gs_delta = ground_space(outer, window)
    gs_gamma = ground_space(outer2, window)
    rng = random.Random(seed)
    half = sweep // 2
    ops = random_commuting_monomials(inner, outer, rng, half) + random_monomials(inner, rng, sweep - half)
    gap = 0.0
    for p in ops:
        oracle = gs_delta.expectation(p)
        symplectic = complex(boundary_channel(p, inner, outer, s))
        gap = max(gap, abs(oracle - symplectic), abs(gs_gamma.expectation(p) - symplectic))
    unit = gs_delta.expectation(PauliMonomial())
    rho_delta = gs_delta.reduced_density(inner)
    rho_gamma = gs_gamma.reduced_density(inner)
    residual = float(abs(rho_delta - rho_gamma).max())
    return {
        "inner": str(inner),
        "delta": str(outer),
        "gamma": str(outer2),
        "s": s,
        "edges": window.n,
        "sweep": len(ops),
        "max_psi_gap": gap,
        "psi_unit": unit.real,
        "tqo_residual": residual,
        "ok": gap < TOL and abs(unit - 1) < TOL and residual < TOL,
    }


# -- window enumeration ----------------------------------------------------


def enumerate_configurations(max_edges: int = DEFAULT_CAP, s: int = 2, max_side: int = 8) -> dict:
    """All (Lambda, Delta) pairs with Delta anchored at the origin and at most max_edges edges.

    Lambdas with the same edge set and relation are reported once.
    """
    import itertools

    kinds = ("rough", "smooth")
    surrounded, shared = [], []
    for w in range(max_side + 1):
        for h in range(max_side + 1):
            for dk in itertools.product(kinds, repeat=4):
                delta = LatticeRegion(0, 0, w, h, *dk)
                if not delta.edges or len(delta.edges) > max_edges:
                    continue
                seen = set()
                for x0, x1 in itertools.combinations_with_replacement(range(w + 1), 2):
                    for y0, y1 in itertools.combinations_with_replacement(range(h + 1), 2):
                        for lk in itertools.product(kinds, repeat=4):
                            lam = LatticeRegion(x0, y0, x1, y1, *lk)
                            if not lam.edges:
                                continue
                            rel = region_relation(lam, delta, s)
                            if rel is None:
                                continue
                            side = getattr(getattr(rel, "interval", None), "side", None)
                            key = (lam.edges, side)
                            if key in seen:
                                continue
                            seen.add(key)
                            (surrounded if side is None else shared).append((lam, delta))
    return {"completely_surrounds": surrounded, "shared_boundary": shared}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str)

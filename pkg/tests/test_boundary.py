import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltonets.errors import ValidationError
from ltonets.toric.boundary import (
    BoundaryElement,
    boundary_algebra,
    canonical_monomials,
    canonical_product,
    chain_generators,
    check_diagonal,
    check_relations,
    format_canonical,
    fusion_net_iso,
    phi_x,
    phi_x_pauli,
    phi_z,
    phi_z_pauli,
    realize,
    span_dimension,
    standard_interval,
    toric_boundary_state,
)
from ltonets.toric.lattice import ROUGH, SMOOTH
from ltonets.toric.pauli import PauliMonomial


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("kind", [ROUGH, SMOOTH])
def test_dimension_law(n, kind):
    rep = boundary_algebra(n, kind)
    assert rep.dimension == 2 ** (2 * n - 1) == rep.expected_dimension
    assert rep.block_sizes == (2 ** (n - 1), 2 ** (n - 1))
    assert rep.relations_ok and rep.structure_ok
    assert len(rep.center) == 2


def test_summary_string():
    assert boundary_algebra(3).summary() == "dim=32 blocks=M4+M4"


def test_too_many_sites():
    with pytest.raises(ValidationError):
        boundary_algebra(0)


def test_format_canonical():
    assert format_canonical((0, 0)) == "1"
    assert format_canonical((0b101, 0b1)) == "x1*x3*y1"


@pytest.mark.parametrize("kind", [ROUGH, SMOOTH])
def test_chain_relations(kind):
    xs, ys = chain_generators(4, kind)
    assert check_relations(xs, ys) == []


def test_relations_detect_errors():
    xs, ys = chain_generators(3, ROUGH)
    ys[0] = xs[0]
    assert check_relations(xs, ys)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.data())
def test_canonical_product_matches_paulis(n, data):
    xs, ys = chain_generators(n, ROUGH)
    basis = canonical_monomials(n)
    m1 = data.draw(st.sampled_from(basis))
    m2 = data.draw(st.sampled_from(basis))
    sign, m = canonical_product(m1, m2)
    lhs = realize(m1, xs, ys) * realize(m2, xs, ys)
    rhs = realize(m, xs, ys) * PauliMonomial(2 * sign, 0, 0)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.data())
def test_element_algebra(n, data):
    basis = canonical_monomials(n)
    coeff = st.integers(-2, 2)

    def element():
        ms = data.draw(st.lists(st.sampled_from(basis), min_size=1, max_size=3))
        return BoundaryElement(n, {m: data.draw(coeff) for m in ms})

    a, b, c = element(), element(), element()
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()


def test_standard_interval_generators_are_chain_like():
    interval = standard_interval(3, ROUGH)
    assert interval.n_sites == 3
    assert check_relations(list(interval.x_generators), list(interval.y_generators)) == []


def test_span_dimension_counts_distinct():
    ps = [PauliMonomial(0, 1, 0), PauliMonomial(2, 1, 0), PauliMonomial(0, 0, 1)]
    assert span_dimension(ps) == 2


@pytest.mark.parametrize("n", range(1, 4))
@pytest.mark.parametrize("kind", [ROUGH, SMOOTH])
def test_fusion_net_iso(n, kind):
    rep = fusion_net_iso(n, kind)
    assert rep.ok
    assert rep.relations_ok and rep.path_structure_ok and rep.markov_gram_identity


def test_boundary_state_is_identity_coefficient():
    e = BoundaryElement(3, {(0, 0): 5, (1, 0): 2, (0, 1): 3})
    assert toric_boundary_state(e) == 5
    assert phi_z(e) == 7
    assert phi_x(e) == 8


def test_boundary_state_is_tracial():
    n = 3
    rng = random.Random(0)
    basis = canonical_monomials(n)
    for _ in range(50):
        a = BoundaryElement(n, {rng.choice(basis): rng.randint(-3, 3) for _ in range(3)})
        b = BoundaryElement(n, {rng.choice(basis): rng.randint(-3, 3) for _ in range(3)})
        assert toric_boundary_state(a * b) == toric_boundary_state(b * a)


def test_phi_states_on_chain():
    # rough chain: x_i = X, y_j = ZZ
    xs, ys = chain_generators(3, ROUGH)
    for x in xs:
        assert phi_x_pauli(x) == 1 and phi_z_pauli(x) == 0
    for y in ys:
        assert phi_z_pauli(y) == 1 and phi_x_pauli(y) == 0


def test_diagonal_cut():
    assert check_diagonal(4) == []
    with pytest.raises(ValidationError):
        check_diagonal(3)

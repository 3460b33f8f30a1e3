from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ltonets.errors import InconclusiveError, ValidationError
from ltonets.k_theory import (
    dimension_sequence,
    find_infinitesimal,
    is_primitive,
    k0_report,
    report_json,
    ring_af_data,
    ring_k0_summary,
    stationary_data,
    trace_pairing,
    uhf_report,
)

from conftest import ring


def test_hilb_s3_is_uhf_six():
    data = ring_af_data(ring("hilb_s3"))
    assert data.matrix == tuple((1,) * 6 for _ in range(6))
    uhf = uhf_report(data)
    assert uhf.rank_one and uhf.q == 6 and uhf.primes == (2, 3)
    assert find_infinitesimal(data).witness is None


def test_rep_s3_has_infinitesimal():
    data = ring_af_data(ring("rep_s3"))
    assert data.exact
    assert data.tau == (Fraction(1), Fraction(1), Fraction(2))
    res = find_infinitesimal(data)
    assert res.witness is not None
    assert trace_pairing(data, res.witness) == 0
    # the orbit never dies, so the class is a non-zero infinitesimal
    assert any(res.orbit[-1])
    assert res.determinant == int(sympy.Matrix(data.matrix).det())


def test_rep_s3_trace_vector_matches_dims():
    data = ring_af_data(ring("rep_s3"), coarse=True)
    assert data.tau == (1, 1, 2)


def test_fib_sequence_is_fibonacci():
    seq = dimension_sequence(ring_af_data(ring("fib")), 6)
    assert [v[0] for v in seq] == [1, 1, 2, 5, 13, 34, 89]


def test_fib_not_exact():
    data = ring_af_data(ring("fib"))
    assert not data.exact
    with pytest.raises(InconclusiveError):
        find_infinitesimal(data)
    with pytest.raises(InconclusiveError):
        ring_k0_summary(ring("fib"))


def test_invertible_certificate():
    data = stationary_data([[2, 1], [1, 2]], [1, 0])
    res = find_infinitesimal(data)
    assert res.witness == (-1, 1)
    assert res.certificate == "A invertible over Q"
    assert res.determinant == 3


def test_rank_one_kills_kernel():
    data = stationary_data([[1, 1], [1, 1]], [1, 0])
    res = find_infinitesimal(data)
    assert res.witness is None
    assert uhf_report(data).q == 2


@pytest.mark.parametrize(
    "matrix", [[[1, 0], [0, 1]], [[1, -1], [1, 1]], [[1, 1, 1], [1, 1]], []]
)
def test_bad_matrices(matrix):
    with pytest.raises(ValidationError):
        stationary_data(matrix, [1] + [0] * max(len(matrix) - 1, 0))


def test_is_primitive():
    assert is_primitive([[0, 1], [1, 1]])
    assert not is_primitive([[0, 1], [1, 0]])


def test_sequence_level_bounds():
    data = ring_af_data(ring("hilb_z2"))
    with pytest.raises(ValidationError):
        dimension_sequence(data, -1)


def test_report_is_deterministic():
    a = report_json(ring_k0_summary(ring("rep_s3")))
    b = report_json(ring_k0_summary(ring("rep_s3")))
    assert a == b
    rep = k0_report(ring_af_data(ring("hilb_s3")))
    assert rep["uhf"].startswith("M_{6^inf}")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=2, max_size=4))
def test_rank_one_matrices_are_uhf(weights):
    # A = w w^T has rank one and q = |w|^2
    matrix = [[a * b for b in weights] for a in weights]
    data = stationary_data(matrix, [1] + [0] * (len(weights) - 1))
    assert uhf_report(data).q == sum(w * w for w in weights)
    assert find_infinitesimal(data).witness is None


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_pairing_is_linear(v):
    data = ring_af_data(ring("rep_s3"))
    Av = [sum(a * x for a, x in zip(row, v)) for row in data.matrix]
    # tau is a left eigenvector with eigenvalue d_X = 4
    assert trace_pairing(data, Av) == data.fp_eigenvalue * trace_pairing(data, v)

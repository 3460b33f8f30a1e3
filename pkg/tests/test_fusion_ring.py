import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltonets.errors import AxiomError, ParseError, ValidationError
from ltonets.fusion_ring import (
    BUILTIN_NAMES,
    builtin_document,
    dump_fusion_ring,
    fp_dimensions,
    global_dimension,
    is_pointed,
    load_fusion_ring,
    symmetric_group_ring,
)

from conftest import ring

FIB_DOC = builtin_document("fib")


def test_builtin_names():
    assert set(BUILTIN_NAMES) == {"hilb_z2", "hilb_s3", "rep_s3", "fib", "ising"}


@pytest.mark.parametrize(
    "name, dims",
    [("hilb_z2", (1, 1)), ("hilb_s3", (1,) * 6), ("rep_s3", (1, 1, 2))],
)
def test_integral_dims_exact(name, dims):
    r = ring(name)
    assert r.exact
    assert tuple(r.dims) == dims


def test_fib_dims_against_golden_ratio():
    ctx = mpmath.MPContext()
    ctx.dps = 60
    phi = (1 + ctx.sqrt(5)) / 2
    r = ring("fib")
    assert not r.exact
    assert abs(r.dims[1] - phi) < ctx.mpf(10) ** -45


def test_ising_dims():
    ctx = mpmath.MPContext()
    ctx.dps = 60
    r = ring("ising")
    sigma = r.index("sigma")
    assert abs(r.dims[sigma] - ctx.sqrt(2)) < ctx.mpf(10) ** -45


def test_dims_are_a_character(any_ring):
    d = any_ring.dims
    k = any_ring.rank
    for a in range(k):
        for b in range(k):
            rhs = sum(any_ring.N(a, b, c) * d[c] for c in range(k))
            assert abs(d[a] * d[b] - rhs) <= any_ring.tolerance


def test_global_dimension_fib():
    ctx = mpmath.MPContext()
    ctx.dps = 60
    phi = (1 + ctx.sqrt(5)) / 2
    assert abs(global_dimension(ring("fib")) - (2 + phi)) < ctx.mpf(10) ** -40


def test_pointed():
    assert is_pointed(ring("hilb_z2"))
    assert is_pointed(ring("hilb_s3"))
    assert not is_pointed(ring("rep_s3"))
    assert not is_pointed(ring("fib"))


def test_dump_round_trip(any_ring):
    text = dump_fusion_ring(any_ring)
    again = load_fusion_ring(text)
    assert np.array_equal(again.fusion, any_ring.fusion)
    assert again.dual == any_ring.dual
    assert dump_fusion_ring(again) == text


def test_symmetric_group_ring():
    r = symmetric_group_ring(3)
    assert r.rank == 6 and is_pointed(r)
    # S_3 is not abelian
    assert not np.array_equal(r.fusion, r.fusion.transpose(1, 0, 2))
    assert sorted(np.sort(r.fusion.sum(axis=(0, 1)))) == [6] * 6


def test_precision_controls_digits():
    lo = ring("fib", 20)
    hi = ring("fib", 80)
    assert abs(lo.dims[1] - hi.dims[1]) < mpmath.mpf(10) ** -15
    assert hi.precision == 80


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", '{"simples": ["1"], "dual": [0]}', '{"simples": [], "dual": [], "N": []}'],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_fusion_ring(text)


def test_unknown_key_rejected():
    doc = json.loads(FIB_DOC)
    doc["extra"] = 1
    with pytest.raises(ParseError):
        load_fusion_ring(json.dumps(doc))


def test_associativity_violation_named():
    # rep(S_3) with sgn dropped from rho x rho
    doc = json.loads(builtin_document("rep_s3"))
    doc["N"] = [e for e in doc["N"] if e[:3] != [2, 2, 1]]
    with pytest.raises(AxiomError) as info:
        load_fusion_ring(json.dumps(doc))
    assert info.value.invariant


def test_unit_law_violation():
    doc = {"simples": ["1", "a"], "dual": [0, 1], "N": [[0, 0, 0, 1], [1, 1, 0, 1]]}
    with pytest.raises(AxiomError) as info:
        load_fusion_ring(json.dumps(doc))
    assert info.value.invariant == "unit law"


def test_unknown_builtin():
    with pytest.raises(ValidationError):
        builtin_document("nope")


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=7))
def test_cyclic_group_rings(n):
    doc = {
        "simples": [str(i) for i in range(n)],
        "dual": [(-i) % n for i in range(n)],
        "N": [[a, b, (a + b) % n, 1] for a in range(n) for b in range(n)],
    }
    r = load_fusion_ring(json.dumps(doc)).with_dimensions(30)
    assert r.exact and is_pointed(r)
    assert fp_dimensions(r, 30) == (1,) * n
    assert global_dimension(r) == n

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltonets.errors import ParseError, ValidationError
from ltonets.toric.lattice import (
    ROUGH,
    SIDES,
    SMOOTH,
    CompletelySurrounds,
    Frame,
    LatticeRegion,
    SurroundsWithSharedBoundary,
    dualize,
    parse_region,
    plaquette,
    region_relation,
    star,
    stabilizer_generators,
)
from ltonets.toric.pauli import symplectic_form

kinds = st.sampled_from([ROUGH, SMOOTH])
regions = st.builds(
    lambda x0, y0, w, h, k: LatticeRegion(x0, y0, x0 + w, y0 + h, *k),
    st.integers(-5, 5),
    st.integers(-5, 5),
    st.integers(0, 4),
    st.integers(0, 4),
    st.tuples(kinds, kinds, kinds, kinds),
)


def test_edge_counts():
    # all-smooth w x h box: every edge of the vertex box
    r = LatticeRegion.rect(0, 0, 3, 2, SMOOTH)
    assert len(r.edges) == 3 * 3 + 4 * 2
    # rough sides drop the outermost row/column of edges
    r = LatticeRegion.rect(0, 0, 3, 2, ROUGH)
    assert len(r.edges) == 3 * 1 + 2 * 2


@settings(max_examples=80, deadline=None)
@given(regions)
def test_parse_round_trip(r):
    assert parse_region(str(r)) == r


@pytest.mark.parametrize("text", ["rect 1 2 3", "box 0 0 1 1", "rect 0 0 1 1 wobbly", "rect 3 0 1 1"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ValidationError)):
        parse_region(text)


@settings(max_examples=50, deadline=None)
@given(regions)
def test_stabilizers_commute_and_stay_inside(r):
    gens = stabilizer_generators(r)
    for g in gens:
        assert not g.pauli.support & ~r.mask
    for g, h in itertools.combinations(gens, 2):
        assert g.pauli.commutes(h.pauli)


def test_star_and_plaquette_anticommute_with_single_edge():
    from ltonets.toric.pauli import PauliMonomial

    z = PauliMonomial.from_edges(z_edges=[(0, 0, "e")])
    x = PauliMonomial.from_edges(x_edges=[(0, 0, "e")])
    assert not z.commutes(star((0, 0)).pauli)
    assert not x.commutes(plaquette((0, 0)).pauli)
    assert z.commutes(plaquette((0, 0)).pauli)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SIDES), st.integers(-6, 6), st.integers(-6, 6), st.sampled_from("en"))
def test_frame_round_trip(side, x, y, d):
    f = Frame(side)
    e = (x, y, d)
    assert f.edge_to_local(f.edge_to_global(e)) == e
    assert f.vertex_to_local(f.vertex_to_global((x, y))) == (x, y)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SIDES), regions)
def test_frame_maps_stabilizers(side, r):
    f = Frame(side)
    local = f.region_to_local(r)
    assert len(local.edges) == len(r.edges)
    assert {f.edge_to_global(e) for e in local.edges} == set(r.edges)


def test_completely_surrounds():
    inner = LatticeRegion.rect(2, 2, 4, 4)
    outer = LatticeRegion.rect(0, 0, 6, 6)
    assert region_relation(inner, outer, 2) == CompletelySurrounds(2)
    assert region_relation(inner, outer, 3) is None
    assert region_relation(inner, inner, 2) is None


@pytest.mark.parametrize("side", SIDES)
def test_shared_side(side):
    outer = LatticeRegion.rect(0, 0, 8, 8)
    box = {"west": (0, 3, 4, 5), "east": (4, 3, 8, 5), "south": (3, 0, 5, 4), "north": (3, 4, 5, 8)}[side]
    inner = LatticeRegion.rect(*box)
    rel = region_relation(inner, outer, 2)
    assert isinstance(rel, SurroundsWithSharedBoundary)
    assert rel.interval.side == side
    assert rel.interval.n_sites >= 1


def test_shared_side_needs_matching_kind():
    outer = LatticeRegion(0, 0, 8, 8, ROUGH, SMOOTH, ROUGH, ROUGH)
    inner = LatticeRegion(4, 3, 8, 5, ROUGH, ROUGH, ROUGH, ROUGH)
    assert region_relation(inner, outer, 2) is None


@settings(max_examples=60, deadline=None)
@given(regions, st.integers(-3, 3), st.integers(-3, 3))
def test_relation_translation_invariant(r, dx, dy):
    outer = LatticeRegion(r.x0 - 2, r.y0 - 2, r.x1 + 2, r.y1 + 2, *r.kinds)
    shift = lambda q: LatticeRegion(q.x0 + dx, q.y0 + dy, q.x1 + dx, q.y1 + dy, *q.kinds)
    a = region_relation(r, outer, 2)
    b = region_relation(shift(r), shift(outer), 2)
    assert type(a) is type(b)


@settings(max_examples=50, deadline=None)
@given(regions)
def test_dualize_preserves_commutation(r):
    gens = [g.pauli for g in stabilizer_generators(r)]
    for g, h in itertools.combinations(gens[:8], 2):
        assert symplectic_form(dualize(g), dualize(h)) == symplectic_form(g, h)


def test_dualize_star_is_plaquette():
    assert dualize(star((1, 1)).pauli) == plaquette((1, 1)).pauli

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binarygrating.geometry import (
    PERIOD,
    BinaryProfile,
    InvalidProfile,
    RectangularProfile,
    corners_of,
    layer_decomposition,
    validate_profile,
)


@st.composite
def profiles(draw, max_size=6):
    m = draw(st.integers(1, max_size))
    t = sorted(draw(st.lists(st.floats(0, PERIOD - 1e-3), min_size=m, max_size=m, unique=True)))
    t = [v for i, v in enumerate(t) if i == 0 or v - t[i - 1] > 1e-3]
    h = draw(st.lists(st.sampled_from([-0.7, -0.2, 0.0, 0.3, 0.5, 1.0]), min_size=len(t), max_size=len(t)))
    return RectangularProfile.from_unsorted(t, h)


def test_simple_binary_is_valid():
    p = RectangularProfile((0.0, math.pi), (0.0, 1.0))
    rep = validate_profile(p)
    assert rep.valid and rep.invertible
    assert (p.top, p.bottom) == (1.0, 0.0)


def test_equal_adjacent_heights_rejected():
    rep = validate_profile(RectangularProfile((0.0, math.pi), (1.0, 1.0)))
    assert not rep.valid
    assert "distinct_adjacent" in rep.failures()


def test_unsorted_transitions_rejected():
    rep = validate_profile(RectangularProfile((0.0, 2.0, 1.0), (0.0, 1.0, 0.0)))
    assert not rep.valid
    assert "increasing" in rep.failures()


def test_flat_profile_is_forward_only():
    rep = validate_profile(RectangularProfile.flat(0.3))
    assert rep.valid and not rep.invertible


def test_binary_needs_alternation():
    with pytest.raises(InvalidProfile):
        BinaryProfile((0.0, 1.0, 2.0), (0.0, 1.0, 0.0))


def test_corners_of_binary():
    cs = corners_of(RectangularProfile((0.0, math.pi), (0.0, 1.0)))
    assert sorted(c.position for c in cs) == [(0.0, 0.0), (0.0, 1.0), (math.pi, 0.0), (math.pi, 1.0)]
    assert {c.interior_angle for c in cs} == {0.5 * math.pi, 1.5 * math.pi}


def test_corner_counts():
    assert corners_of(RectangularProfile.flat(0.0)) == []
    p = BinaryProfile.from_levels((0.0, math.pi / 2, math.pi, 1.5 * math.pi), 0.0, 1.0)
    assert len(corners_of(p)) == 8


def test_layer_examples():
    (layer,) = layer_decomposition(RectangularProfile((0.0, math.pi), (0.0, 1.0)))
    assert (layer.z_bottom, layer.z_top) == (0.0, 1.0)
    # h = 0 on [0, pi): the slab there is above the graph, i.e. upper medium
    assert layer.indicator([1.0, 4.0]).tolist() == [False, True]
    assert len(layer_decomposition(RectangularProfile((0.0, 2.0, 4.0), (0.0, 0.5, 1.0)))) == 2
    assert layer_decomposition(RectangularProfile.flat(0.0)) == []


def test_json_roundtrip(tmp_path):
    p = BinaryProfile((0.7, 3.9), (0.0, 0.8))
    p.to_json(tmp_path / "p.json")
    q = RectangularProfile.from_json(tmp_path / "p.json")
    assert q == p and isinstance(q, BinaryProfile)


@given(profiles())
def test_from_unsorted_always_valid(p):
    assert validate_profile(p).valid


@given(profiles(), st.floats(0, PERIOD), st.floats(0.01, 3.0))
def test_graph_condition(p, x1, s):
    # a point above the graph stays above it when moved up
    y = float(p.height_at(x1)) + 1e-9
    assert not p.in_lower(x1, y + s)
    assert not p.in_lower(x1, y)


@given(profiles(), st.floats(-10, 10))
def test_shift_moves_corners(p, delta):
    base = sorted((round(math.fmod(c.x1 + delta, PERIOD) % PERIOD, 9) % round(PERIOD, 9), c.x2) for c in corners_of(p))
    moved = sorted((round(c.x1, 9) % round(PERIOD, 9), c.x2) for c in corners_of(p.shifted(delta)))
    assert np.allclose(np.array(base).reshape(-1, 2), np.array(moved).reshape(-1, 2), atol=1e-7)


@given(profiles())
def test_layers_partition_the_slab(p):
    layers = layer_decomposition(p)
    assert math.isclose(sum(l.thickness for l in layers), p.top - p.bottom, abs_tol=1e-12)
    for upper, lower in zip(layers, layers[1:]):
        assert upper.z_bottom == lower.z_top


@given(profiles())
def test_layer_indicator_matches_profile(p):
    x = np.linspace(0, PERIOD, 97, endpoint=False) + 1e-4
    for layer in layer_decomposition(p):
        mid = 0.5 * (layer.z_bottom + layer.z_top)
        assert np.array_equal(layer.indicator(x), p.in_lower(x, mid))


@given(profiles())
def test_mirror_twice_is_identity(p):
    q = p.mirrored().mirrored()
    x = np.linspace(0, PERIOD, 101, endpoint=False) + 1e-4
    assert np.array_equal(q.height_at(x), p.height_at(x))

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binarygrating.radiation import (
    MediumPair,
    NotLossless,
    PlaneWaveIncidence,
    RayleighSpectrum,
    beta_exponent,
    dtn_apply,
    dtn_quadratic_forms,
    efficiencies,
    orders,
)

wavenumbers = st.floats(0.1, 5.0)
alphas = st.floats(-0.5, 0.5)


def test_incidence_derived_quantities():
    inc = PlaneWaveIncidence(2.0, math.pi / 6)
    assert math.isclose(inc.alpha, 1.0)
    assert math.isclose(inc.beta, math.sqrt(3.0))
    with pytest.raises(ValueError):
        PlaneWaveIncidence(1.0, math.pi / 2)


def test_regimes():
    assert MediumPair(1.0, 0.5).regime() == "i"
    assert MediumPair(1.0, 1.5).regime() == "ii"
    assert MediumPair(1.0, 1.5, lam=2.0).regime() == "outside"
    assert MediumPair(1.0, 1.5 + 0.1j).regime() == "lossy"


def test_beta_branches():
    b = beta_exponent(np.array([-2, 0, 1]), 1.0, 0.0)
    assert np.allclose(b, [1j * math.sqrt(3.0), 1.0, 0.0])


@given(wavenumbers, alphas, st.integers(-30, 30))
def test_beta_squares_back(k, alpha, n):
    b = beta_exponent(n, k, alpha)
    assert b.real >= 0 and b.imag >= 0
    assert math.isclose((b * b).real, k * k - (n + alpha) ** 2, rel_tol=1e-12, abs_tol=1e-12)


@given(st.floats(0.5, 3.0), st.floats(0.01, 1.0), alphas)
def test_lossy_beta_in_upper_half_plane(kr, ki, alpha):
    b = beta_exponent(orders(10), complex(kr, ki), alpha)
    assert np.all(b.imag >= 0)


def test_dtn_signs():
    f = np.zeros(5, complex)
    f[2] = 1.0
    assert np.allclose(dtn_apply("+", f, 1.0, 0.0), 1j * f)
    assert np.allclose(dtn_apply("-", f, 1.0, 0.0), -1j * f)


def test_grazing_order_carries_nothing():
    f = np.ones(5, complex)
    out = dtn_apply("+", f, 1.0, 0.0)  # n = +-1 are grazing
    assert out[1] == 0 and out[3] == 0


@given(st.sampled_from("+-"), wavenumbers, alphas, st.integers(0, 2**32 - 1))
def test_dtn_quadratic_form_signs(side, k, alpha, seed):
    r = np.random.default_rng(seed)
    f = r.normal(size=21) + 1j * r.normal(size=21)
    re, im = dtn_quadratic_forms(side, f, k, alpha)
    assert re <= 0.0 and im >= 0.0


def test_flat_fresnel_efficiencies_balance():
    # normal incidence on k1 = 1 | k2 = 2: r = -1/3, t = 2/3
    inc = PlaneWaveIncidence(1.0, 0.0)
    spec = RayleighSpectrum(2, 0.0, 1.0, 2.0, np.array([0, 0, -1 / 3, 0, 0]), np.array([0, 0, 2 / 3, 0, 0]))
    table = efficiencies(spec, inc, MediumPair(1.0, 2.0))
    assert math.isclose(table.side("+")[0], 1 / 9)
    assert math.isclose(table.side("-")[0], 8 / 9)
    assert table.defect < 1e-15


def test_efficiency_csv_roundtrip():
    inc = PlaneWaveIncidence(1.0, 0.0)
    spec = RayleighSpectrum(0, 0.0, 1.0, 2.0, np.array([-1 / 3]), np.array([2 / 3]))
    text = efficiencies(spec, inc, MediumPair(1.0, 2.0)).to_csv()
    header, *rows = text.strip().splitlines()
    assert header == "n,side,beta,abs_A_sq,efficiency"
    assert float(rows[0].split(",")[-1]) == 1 / 9


def test_lossy_efficiencies_refused():
    spec = RayleighSpectrum(0, 0.0, 1.0, 2.0 + 0.1j, np.zeros(1), np.zeros(1))
    with pytest.raises(NotLossless):
        efficiencies(spec, PlaneWaveIncidence(1.0, 0.0), MediumPair(1.0, 2.0 + 0.1j))

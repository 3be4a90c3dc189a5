import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binarygrating.corners import (
    IllConditionedFit,
    NotHarmonic,
    bareiss_determinant,
    build_special_solution,
    corner_clearance,
    default_radii,
    dmatrix,
    dmatrix_determinant,
    entry_B,
    fit_harmonic_expansion,
    laplacian_coefficients,
    lemma_battery,
    polynomial_sector_solve,
    random_harmonic_polynomial,
)
from binarygrating.geometry import BinaryProfile, corners_of
from binarygrating.modal import evaluate_field, solve_forward

coeff = st.floats(-3, 3)


def test_exact_harmonic_recovered():
    fit = fit_harmonic_expansion(lambda x, y: 2 * x * y, (0.0, 0.0))  # r^2 sin 2t
    assert abs(fit.a[2] - 1.0) < 1e-10
    others = np.concatenate([np.delete(fit.a, 2), fit.b])
    assert np.abs(others).max() < 1e-10
    assert fit.m == 2


def test_remainder_exponent():
    fit = fit_harmonic_expansion(lambda x, y: 2 * x * y + (x * x + y * y) ** 2, (0.0, 0.0), n_max=3)
    assert abs(fit.residual_exponent - 4.0) < 1e-6


@given(st.lists(coeff, min_size=4, max_size=4), st.lists(coeff, min_size=4, max_size=4), st.floats(-2, 2), st.floats(-2, 2))
def test_finite_harmonic_series_recovered(a, b, x0, y0):
    a = np.array(a)
    a[0] = 0.0
    b = np.array(b)

    def u(x, y):
        r, t = np.hypot(x - x0, y - y0), np.arctan2(y - y0, x - x0)
        return sum(r**n * (a[n] * np.sin(n * t) + b[n] * np.cos(n * t)) for n in range(4))

    fit = fit_harmonic_expansion(u, (x0, y0), n_max=3)
    assert np.allclose(fit.a, a, atol=1e-10) and np.allclose(fit.b, b, atol=1e-10)
    assert fit.residual_norms.max() < 1e-10


def test_ill_conditioned_fit_detected():
    with pytest.raises(IllConditionedFit):
        fit_harmonic_expansion(lambda x, y: x, (0.0, 0.0), radii=[0.1, 0.1 + 1e-13], n_max=3)


def test_modal_field_has_harmonic_leading_part(reference_binary):
    sol = solve_forward(*reference_binary, N=40)
    prof = reference_binary[0]
    for corner in corners_of(prof):
        radii = default_radii(prof, corner)
        fit = fit_harmonic_expansion(lambda x, y: evaluate_field(sol, np.stack([x, y], -1)), corner, radii)
        assert fit.residual_exponent >= fit.m + 2 - 0.3


def test_clearance_binary():
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    c = corners_of(prof)[0]
    assert math.isclose(corner_clearance(prof, c), 1.0)


# -- special solutions ------------------------------------------------------


def test_zero_data_gives_zero_log_coefficient():
    for bc in ("dirichlet", "neumann"):
        s = build_special_solution(3, 0, 0, (1.0, 2.0), (0.0, 1.0), bc)
        assert s.C == 0


def test_k0_dirichlet_single_sided_source():
    s = build_special_solution(0, 1.0, 0.0)
    assert max(s.residuals(200).values()) < 1e-12
    assert s.C != 0  # one-sided source excites the logarithm


def test_k0_equal_sources_match_polynomial():
    s = build_special_solution(0, 1.0, 1.0)
    assert s.C == 0
    assert s.polynomial_coefficients("+") == s.polynomial_coefficients("-") == [0j, 0j, 0.5 + 0j]


@given(
    st.integers(0, 6),
    st.tuples(coeff, coeff),
    st.tuples(coeff, coeff),
    st.lists(coeff, min_size=7, max_size=7),
    st.lists(coeff, min_size=7, max_size=7),
    st.sampled_from(["dirichlet", "neumann"]),
)
def test_special_solution_residuals(k, cp, cm, pc, ps, bc):
    s = build_special_solution(k, complex(*cp), complex(*cm), pc[: k + 1], ps[: k + 1], bc)
    assert max(s.residuals(200).values()) < 1e-12


@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_special_solution_solves_pde_in_the_plane(bc):
    # independent finite-difference Laplacian in Cartesian coordinates
    s = build_special_solution(2, 0.7 - 0.2j, -1.3, (0.5, 0.0, 1.0), (0.0, 0.3, -0.4), bc)
    h = 1e-3

    def u(x, y):
        return s(np.hypot(x, y), np.arctan2(y, x))

    for r, t in [(0.4, 0.3), (0.6, 1.2), (0.5, 2.0), (0.8, 2.9)]:
        x, y = r * math.cos(t), r * math.sin(t)
        lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4 * u(x, y)) / h**2
        c = s.c_plus if t > math.pi / 2 else s.c_minus
        assert abs(lap - c * r**2 * s.p(t)) < 1e-5


def test_bad_inputs():
    with pytest.raises(ValueError):
        build_special_solution(1, 1, 1, (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        build_special_solution(0, 1, 1, bc="robin")


# -- determinants -----------------------------------------------------------


def test_published_values():
    assert entry_B(0, 2) == 8
    assert dmatrix_determinant(3).determinant == 576 == 24**2


def test_bareiss_against_fraction_elimination():
    for n in range(2, 12):
        D = [[Fraction(v) for v in row] for row in dmatrix(n)]
        det = Fraction(1)
        for k in range(len(D)):
            p = next(i for i in range(k, len(D)) if D[i][k] != 0)
            if p != k:
                D[k], D[p] = D[p], D[k]
                det = -det
            det *= D[k][k]
            for i in range(k + 1, len(D)):
                f = D[i][k] / D[k][k]
                D[i] = [a - f * b for a, b in zip(D[i], D[k])]
        assert det == dmatrix_determinant(n).determinant


def test_bareiss_small():
    assert bareiss_determinant([[2, 1], [1, 3]]) == 5
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0


@pytest.mark.parametrize("n", range(2, 51))
def test_determinant_nonzero_and_identity_exact(n):
    rep = dmatrix_determinant(n)
    assert rep.nonzero and rep.identity_holds


# -- polynomial sector problem ---------------------------------------------


def test_polynomial_examples():
    assert polynomial_sector_solve(0, [1]).q_plus == [0, 0, Fraction(1, 2)]
    rep = polynomial_sector_solve(1, [1, 0])
    assert rep.q_plus == rep.q_minus == [0, 0, Fraction(1, 2), 0]


@pytest.mark.parametrize("n", range(0, 11))
def test_random_harmonic_data_gives_equal_sides(n):
    H = random_harmonic_polynomial(n, np.random.default_rng(n))
    rep = polynomial_sector_solve(n, H)
    assert rep.equal
    assert laplacian_coefficients(rep.q_plus, n + 2) == H


def test_non_harmonic_rejected():
    with pytest.raises(NotHarmonic):
        polynomial_sector_solve(2, [1, 0, 0])


def test_battery_passes():
    assert lemma_battery(12)["all_pass"]

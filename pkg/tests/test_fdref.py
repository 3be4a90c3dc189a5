import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from binarygrating.fdref import (
    FdGrid,
    FdSolution,
    GridMisaligned,
    aligned_grid,
    assemble,
    dtn_matrix,
    fd_solve,
    rellich_check,
)
from binarygrating.geometry import BinaryProfile, RectangularProfile
from binarygrating.modal import near_field_trace, solve_forward
from binarygrating.radiation import MediumPair, PlaneWaveIncidence, dtn_apply


def test_fresnel_on_coarse_grid():
    prof = RectangularProfile.flat(0.0)
    sol = fd_solve(prof, MediumPair(1.0, 2.0), PlaneWaveIncidence(1.0, 0.0), aligned_grid(prof, 64, 64))
    assert abs(sol.rayleigh_plus(0)[0] + 1 / 3) < 1e-3
    assert abs(sol.rayleigh_minus(0)[0] - 2 / 3) < 1e-3


def test_aligned_grid_puts_levels_on_rows():
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    g = aligned_grid(prof, 64, 64)
    assert g.H >= 1.5
    for h in prof.heights:
        r = (h + g.H) / g.h2
        assert abs(r - round(r)) < 1e-9


def test_misaligned_transition_rejected():
    prof = BinaryProfile((1.0, 4.0), (0.0, 1.0))
    with pytest.raises(GridMisaligned):
        aligned_grid(prof, 64, 64)


def test_odd_ny_rejected():
    with pytest.raises(GridMisaligned):
        aligned_grid(RectangularProfile.flat(0.0), 32, 33)


@given(st.integers(4, 40), st.floats(0.2, 3.0), st.floats(-0.5, 0.5), st.integers(-5, 5))
def test_dtn_rows_match_fourier_multiplier(nx, k, alpha, n):
    M = math.ceil(nx / 2) - 1
    if abs(n) > M:
        n = 0
    x = 2 * np.pi * np.arange(nx) / nx
    mode = np.exp(1j * (n + alpha) * x)
    f = np.zeros(2 * M + 1, complex)
    f[n + M] = 1.0
    for side in "+-":
        expected = dtn_apply(side, f, k, alpha)[n + M] * mode
        assert np.allclose(dtn_matrix(nx, k, alpha, side) @ mode, expected, atol=1e-12)


def test_quasi_periodic_wrap_entries():
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    inc = PlaneWaveIncidence(1.0, 0.3)
    g = aligned_grid(prof, 16, 16)
    A, _ = assemble(prof, MediumPair(1.0, 1.5), inc, g)
    A = A.tolil()
    row = 5 * g.nx + g.nx - 1  # last column of an interior row
    east = A[row, 5 * g.nx]
    west_of_first = A[5 * g.nx, row]
    wrap = np.exp(2j * np.pi * inc.alpha)
    # east neighbour across the cell edge carries e^{2 pi i alpha}, west the inverse
    assert np.isclose(east / A[row, row - 1], wrap)
    assert np.isclose(west_of_first / A[5 * g.nx, 5 * g.nx + 1], 1 / wrap)


def test_zero_contrast_scattering_is_discretisation_error():
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    inc = PlaneWaveIncidence(1.0, 0.3)
    errs = []
    for n in (64, 128):
        sol = fd_solve(prof, MediumPair(1.0, 1.0), inc, aligned_grid(prof, n, n))
        errs.append(np.abs(sol.rayleigh_plus(3)).max())
    assert errs[1] < 1e-4
    assert errs[1] < 0.5 * errs[0]


def test_binary_trace_against_modal(reference_binary):
    prof, media, inc = reference_binary
    errs = []
    for n in (64, 128):
        g = aligned_grid(prof, n, n)
        fd = fd_solve(prof, media, inc, g).trace.values
        ref = near_field_trace(solve_forward(prof, media, inc, 40), g.H, n).values
        errs.append(np.linalg.norm(fd - ref) / np.linalg.norm(ref))
    assert errs[1] < 1e-3
    assert errs[1] < 0.5 * errs[0]  # at least first order in h


def test_regression_fd_coefficient(reference_binary):
    prof, media, inc = reference_binary
    sol = fd_solve(prof, media, inc, aligned_grid(prof, 128, 128))
    assert abs(sol.rayleigh_plus(0)[0] - (-0.045807562340212174 + 0.1254192490894191j)) < 1e-10


def _plane_wave_solution(n, c=0.0):
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    inc = PlaneWaveIncidence(1.0, 0.3)
    g = aligned_grid(prof, n, n)
    sol = FdSolution.from_function(prof, MediumPair(1.0, 1.0), inc, g, lambda x, y: np.exp(1j * inc.alpha * x + 1j * inc.beta * y))
    return rellich_check(sol, c)


def test_rellich_manufactured_mode():
    coarse, fine = _plane_wave_solution(64)["defect"], _plane_wave_solution(128)["defect"]
    assert fine < 1e-2
    assert fine < 0.5 * coarse


def test_rellich_shifted_centre():
    assert _plane_wave_solution(128, c=1.0)["defect"] < 1e-2


def test_rellich_zero_field():
    prof = BinaryProfile((0.0, math.pi), (0.0, 1.0))
    g = aligned_grid(prof, 32, 32)
    sol = FdSolution.from_function(prof, MediumPair(1.0, 1.5), PlaneWaveIncidence(1.0, 0.3), g, lambda x, y: 0 * x)
    assert rellich_check(sol)["defect"] == 0.0


def test_rellich_on_solved_field(reference_binary):
    prof, media, inc = reference_binary
    d = [rellich_check(fd_solve(prof, media, inc, aligned_grid(prof, n, n)))["defect"] for n in (64, 128)]
    assert d[1] < 0.5 * d[0]


def test_grid_properties():
    g = FdGrid(8, 4, 1.0)
    assert g.x2[0] == -1.0 and g.x2[-1] == 1.0
    assert g.row_of(0.0) == 2

"""
Checking the modal solver against finite differences
====================================================

The finite-difference solver shares no code with the modal one beyond the
radiation conditions, so agreement between them is a real check.
"""

import math

import numpy as np

from binarygrating import BinaryProfile, MediumPair, PlaneWaveIncidence, solve_forward
from binarygrating.fdref import aligned_grid, fd_solve, rellich_check
from binarygrating.modal import near_field_trace

profile = BinaryProfile((0.0, math.pi), (0.0, 1.0))
media = MediumPair(1.0, 1.5)
inc = PlaneWaveIncidence(1.0, 0.3)

# the grid must put every corner on a node
for n in (64, 128, 256):
    grid = aligned_grid(profile, n, n)
    fd = fd_solve(profile, media, inc, grid)
    ref = near_field_trace(solve_forward(profile, media, inc, 40), grid.H, n)
    err = np.linalg.norm(fd.trace.values - ref.values) / np.linalg.norm(ref.values)
    print(f"{n:4d}^2  trace error {err:.2e}  Rellich defect {rellich_check(fd)['defect']:.2e}")

# corners limit the rate, so expect roughly second order here and no better

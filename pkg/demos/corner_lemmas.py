"""
Local structure at a grating corner
===================================

Fit the solved field near a corner and run the exact algebra behind the
harmonic leading term.
"""

import math

import numpy as np

from binarygrating import BinaryProfile, MediumPair, PlaneWaveIncidence, corners_of, solve_forward
from binarygrating.corners import (
    build_special_solution,
    default_radii,
    dmatrix_determinant,
    fit_harmonic_expansion,
    lemma_battery,
)
from binarygrating.modal import evaluate_field

profile = BinaryProfile((0.0, math.pi), (0.0, 1.0))
sol = solve_forward(profile, MediumPair(1.0, 1.5), PlaneWaveIncidence(1.0, 0.3), 40)

# after removing the harmonic part the remainder decays like r^(m+2)
for corner in corners_of(profile):
    fit = fit_harmonic_expansion(
        lambda x, y: evaluate_field(sol, np.stack([x, y], -1)), corner, default_radii(profile, corner)
    )
    print(corner, "m =", fit.m, "remainder exponent", round(fit.residual_exponent, 3))

# a special solution with a one-sided source needs a logarithm
s = build_special_solution(1, 1.0, 0.0, (1.0, 0.5), (0.0, 0.2))
print("log coefficient", s.C, "max residual", max(s.residuals(200).values()))

# the coefficient matrix is never singular; its determinant is exact
for n in (2, 3, 10):
    rep = dmatrix_determinant(n)
    print(n, rep.determinant, rep.identity_holds)

print("battery passes:", lemma_battery(20)["all_pass"])

"""
A lamellar grating, solved by Fourier modes
===========================================

Solve one binary grating, look at its diffraction orders and check the
energy budget as the truncation grows.
"""

import math

import numpy as np

from binarygrating import BinaryProfile, MediumPair, PlaneWaveIncidence, solve_forward
from binarygrating.modal import convergence_study, near_field_trace

# a groove of depth 1 occupying half the period
profile = BinaryProfile((0.0, math.pi), (0.0, 1.0))
media = MediumPair(1.0, 1.5)
inc = PlaneWaveIncidence(1.0, 0.3)

sol = solve_forward(profile, media, inc, N=40)

# propagating orders and their share of the incoming flux
eff = sol.efficiencies()
for row in eff.rows:
    print(f"order {row['n']:+d} side {row['side']}  efficiency {row['efficiency']:.6f}")
print("sum", eff.total, "defect", eff.defect)

# the defect stays at round-off for every truncation
for r in convergence_study(profile, media, inc, (5, 10, 20, 40)):
    print(f"N={r['N']:3d}  defect {r['defect']:.1e}  A0+ {r['A0_plus']:.6f}")

# the measurement used by the inverse problem: the field on a line above
trace = near_field_trace(sol, 1.5, 16)
print(np.round(np.abs(trace.values), 4))

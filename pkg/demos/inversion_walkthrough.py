"""
Recovering a grating from one near-field measurement
====================================================

Simulate a trace, then search for the profile and lower wavenumber that
reproduce it. Takes a couple of minutes.
"""

from binarygrating.inversion import (
    REFERENCE_B,
    REFERENCE_INCIDENCE,
    REFERENCE_K2,
    REFERENCE_PROFILE,
    InverseProblemSpec,
    ReconstructionConfig,
    identifiability_probe,
    reconstruct,
    synthetic_trace,
)

data = synthetic_trace(REFERENCE_PROFILE, REFERENCE_K2, REFERENCE_INCIDENCE, REFERENCE_B)
spec = InverseProblemSpec(data, M=2)

# swapping the two levels or nudging k2 changes the trace visibly
flipped = type(REFERENCE_PROFILE)(REFERENCE_PROFILE.transitions, REFERENCE_PROFILE.heights[::-1])
print("flipped profile:", identifiability_probe(REFERENCE_PROFILE, flipped, 1.6, 1.6, REFERENCE_INCIDENCE, REFERENCE_B))
print("k2 1.6 vs 1.5:  ", identifiability_probe(REFERENCE_PROFILE, REFERENCE_PROFILE, 1.6, 1.5, REFERENCE_INCIDENCE, REFERENCE_B))

res = reconstruct(spec, ReconstructionConfig(restarts=12, seed=0))
print("truth    ", REFERENCE_PROFILE, REFERENCE_K2)
print("recovered", res.profile, res.k2)
print("misfit", res.misfit, "ambiguous", res.ambiguous, f"{res.seconds:.0f} s")

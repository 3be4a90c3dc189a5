"""Recover a binary profile and the lower wavenumber from one near-field trace."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .geometry import PERIOD, BinaryProfile, InvalidProfile, validate_profile, wrap_abscissa
from .modal import NearFieldTrace, near_field_trace, solve_forward
from .radiation import MediumPair, PlaneWaveIncidence

log = logging.getLogger(__name__)


class NoFeasibleStart(RuntimeError):
    pass


@dataclass(frozen=True)
class InverseProblemSpec:
    """Measured trace plus what is known and where to search.

    Parameter vector: ``(t_0 .. t_{M-1}, h_first, h_second, k2)`` where
    ``h_first`` is the level on ``[t_0, t_1)``.
    """

    data: NearFieldTrace
    M: int = 2
    height_bounds: tuple[float, float] = (-1.0, 1.0)
    k2_bounds: tuple[float, float] = (1.05, 2.5)
    lam: float = 1.0
    noise_level: float = 0.0

    def __post_init__(self):
        if self.M < 2 or self.M % 2:
            raise ValueError("M must be even and at least 2")
        lo, hi = self.height_bounds
        if not lo < hi:
            raise ValueError("empty height bracket")
        if self.data.b <= hi:
            raise ValueError("measurement line must lie above every admissible level")
        klo, khi = self.k2_bounds
        k1 = self.data.k1
        if not 0 < klo < khi:
            raise ValueError("empty k2 bracket")
        margin = 1e-3 * k1
        if not (klo >= k1 + margin or khi <= k1 - margin):
            raise ValueError("k2 bracket must lie strictly on one side of k1 (margin 1e-3 k1)")

    @property
    def incidence(self) -> PlaneWaveIncidence:
        return PlaneWaveIncidence(self.data.k1, self.data.theta)

    @property
    def dimension(self) -> int:
        return self.M + 3

    @property
    def lower(self) -> np.ndarray:
        return np.array([0.0] * self.M + [self.height_bounds[0]] * 2 + [self.k2_bounds[0]])

    @property
    def upper(self) -> np.ndarray:
        return np.array([PERIOD] * self.M + [self.height_bounds[1]] * 2 + [self.k2_bounds[1]])


def pack(profile: BinaryProfile, k2: float) -> np.ndarray:
    return np.array(list(profile.transitions) + [profile.first_level, profile.second_level, float(k2)])


def unpack(x: np.ndarray, M: int) -> tuple[BinaryProfile, float]:
    """Candidate from a parameter vector; transitions are wrapped and sorted."""
    t = np.sort(wrap_abscissa(x[:M]))
    return BinaryProfile.from_levels(tuple(t), float(x[M]), float(x[M + 1])), float(x[M + 2])


def reflect_into(x: np.ndarray, spec: InverseProblemSpec) -> np.ndarray:
    """Transitions wrap (they live on a circle); heights and k2 reflect at the bounds."""
    y = np.array(x, dtype=float)
    M = spec.M
    y[:M] = wrap_abscissa(y[:M])
    lo, hi = spec.lower[M:], spec.upper[M:]
    w = hi - lo
    z = np.mod(y[M:] - lo, 2 * w)
    y[M:] = lo + np.where(z > w, 2 * w - z, z)
    return y


def trace_misfit(model: np.ndarray, data: np.ndarray) -> float:
    return float(np.linalg.norm(model - data) / np.linalg.norm(data))


def model_trace(profile, k2, spec: InverseProblemSpec, N: int) -> np.ndarray:
    sol = solve_forward(profile, MediumPair(spec.data.k1, k2, spec.lam), spec.incidence, N)
    tr = near_field_trace(sol, spec.data.b, spec.data.nsamples)
    return tr.values


def objective(candidate: tuple[BinaryProfile, float], spec: InverseProblemSpec, N: int) -> float:
    """Relative L2 trace misfit; any invalid candidate or solver failure scores +inf."""
    profile, k2 = candidate
    if not validate_profile(profile).invertible:
        return math.inf
    try:
        return trace_misfit(model_trace(profile, k2, spec, N), spec.data.values)
    except Exception as exc:  # noqa: BLE001 -- forward failures are scored, not raised
        log.debug("forward solve failed for %s, k2=%s: %s", profile, k2, exc)
        return math.inf


def objective_vector(x: np.ndarray, spec: InverseProblemSpec, N: int) -> float:
    y = reflect_into(x, spec)
    try:
        cand = unpack(y, spec.M)
    except InvalidProfile:
        return math.inf
    return objective(cand, spec, N)


@dataclass(frozen=True)
class ReconstructionConfig:
    restarts: int = 12
    N_schedule: tuple[int, ...] = (8, 20, 40)
    keep: int = 3
    """Restarts carried from the coarsest stage into the finer ones."""
    maxfev: tuple[int, ...] = (600, 600, 1500)
    xatol: float = 1e-7
    fatol: float = 1e-13
    seed: int = 0
    workers: int = 1
    ambiguity_misfit: float = 1e-6
    ambiguity_distance: float = 1e-2


@dataclass
class RestartRecord:
    index: int
    start: np.ndarray
    x: np.ndarray
    misfit: float
    N: int
    evaluations: int


@dataclass
class ReconstructionResult:
    profile: BinaryProfile
    k2: float
    misfit: float
    N: int
    restarts: list[RestartRecord]
    history: list[tuple[int, int, float]] = field(default_factory=list)
    """(stage N, evaluation index, best misfit so far) during the final polish."""
    residual: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    ambiguous: bool = False
    seconds: float = 0.0

    @property
    def iterations(self) -> int:
        return sum(r.evaluations for r in self.restarts)

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.to_dict(),
            "k2": self.k2,
            "misfit": self.misfit,
            "N": self.N,
            "ambiguous": self.ambiguous,
            "seconds": self.seconds,
            "evaluations": self.iterations,
            "restarts": [
                {"index": r.index, "misfit": r.misfit, "N": r.N, "x": r.x.tolist(), "start": r.start.tolist(), "evaluations": r.evaluations}
                for r in self.restarts
            ],
        }

    def history_csv(self) -> str:
        lines = ["N,evaluation,best_misfit"] + [f"{n},{i},{m!r}" for n, i, m in self.history]
        return "\n".join(lines) + "\n"


def _initial_simplex(x0: np.ndarray, spec: InverseProblemSpec, frac: float) -> np.ndarray:
    steps = frac * (spec.upper - spec.lower)
    simplex = np.tile(x0, (x0.size + 1, 1))
    for i in range(x0.size):
        simplex[i + 1, i] += steps[i]
    return simplex


def _nelder_mead(x0, spec, N, maxfev, frac, xatol, fatol, history=None):
    count = [0]
    best = [math.inf]

    def f(x):
        v = objective_vector(x, spec, N)
        count[0] += 1
        if history is not None and v < best[0]:
            best[0] = v
            history.append((N, count[0], v))
        return v

    res = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _initial_simplex(x0, spec, frac),
            "maxfev": maxfev,
            "xatol": xatol,
            "fatol": fatol,
            "adaptive": True,
        },
    )
    return reflect_into(res.x, spec), float(res.fun), count[0]


def _run_start(args):
    i, x0, spec, N, maxfev, cfg = args
    x, fun, nfev = _nelder_mead(x0, spec, N, maxfev, 0.1, 1e-4, 1e-10)
    return RestartRecord(i, x0, x, fun, N, nfev)


def random_starts(spec: InverseProblemSpec, n: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [spec.lower + rng.random(spec.dimension) * (spec.upper - spec.lower) for _ in range(n)]


def canonical(x: np.ndarray, M: int) -> np.ndarray:
    prof, k2 = unpack(x, M)
    return pack(prof, k2)


def reconstruct(spec: InverseProblemSpec, config: ReconstructionConfig | None = None) -> ReconstructionResult:
    """Multi-start Nelder-Mead over a coarse-to-fine truncation schedule.

    Every restart runs at the coarsest N; the ``keep`` best continue through
    the finer stages and the overall best is polished at the finest N.
    Deterministic for a fixed seed; ties go to the lower restart index.
    """
    cfg = config or ReconstructionConfig()
    t0 = time.perf_counter()
    starts = random_starts(spec, cfg.restarts, cfg.seed)
    Ns = cfg.N_schedule
    jobs = [(i, x0, spec, Ns[0], cfg.maxfev[0], cfg) for i, x0 in enumerate(starts)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            records = list(pool.map(_run_start, jobs))
    else:
        records = [_run_start(j) for j in jobs]
    feasible = [r for r in records if math.isfinite(r.misfit)]
    if not feasible:
        raise NoFeasibleStart("every restart produced an infinite misfit")
    feasible.sort(key=lambda r: (r.misfit, r.index))
    survivors = feasible[: cfg.keep]

    for stage, N in enumerate(Ns[1:-1], start=1):
        nxt = []
        for r in survivors:
            x, fun, nfev = _nelder_mead(r.x, spec, N, cfg.maxfev[stage], 0.02, 1e-6, 1e-12)
            nxt.append(RestartRecord(r.index, r.start, x, fun, N, r.evaluations + nfev))
        survivors = sorted(nxt, key=lambda r: (r.misfit, r.index))

    history: list[tuple[int, int, float]] = []
    N_fine = Ns[-1]
    finals = []
    for r in survivors:
        x, fun, nfev = _nelder_mead(
            r.x, spec, N_fine, cfg.maxfev[-1], 0.002, cfg.xatol, cfg.fatol, history if r is survivors[0] else None
        )
        finals.append(RestartRecord(r.index, r.start, x, fun, N_fine, r.evaluations + nfev))
    finals.sort(key=lambda r: (r.misfit, r.index))
    best = finals[0]

    ambiguous = False
    for other in finals[1:]:
        close = abs(other.misfit - best.misfit) <= cfg.ambiguity_misfit
        far = np.max(np.abs(canonical(other.x, spec.M) - canonical(best.x, spec.M))) > cfg.ambiguity_distance
        ambiguous = ambiguous or (close and far)

    profile, k2 = unpack(best.x, spec.M)
    model = model_trace(profile, k2, spec, N_fine)
    misfit = trace_misfit(model, spec.data.values)
    restarts_out = finals + [r for r in records if r.index not in {f.index for f in finals}]
    return ReconstructionResult(
        profile,
        k2,
        misfit,
        N_fine,
        restarts_out,
        history,
        spec.data.values - model,
        ambiguous,
        time.perf_counter() - t0,
    )


def select_transition_count(data: NearFieldTrace, Ms, config: ReconstructionConfig | None = None, **spec_kwargs) -> dict:
    """Reconstruct for each transition count; choosing among them is left to the caller."""
    return {M: reconstruct(InverseProblemSpec(data, M=M, **spec_kwargs), config) for M in Ms}


def add_noise(trace: NearFieldTrace, level: float, rng: np.random.Generator) -> NearFieldTrace:
    """Additive complex Gaussian noise, per sample, scaled to ``level`` times the trace RMS."""
    rms = np.sqrt(np.mean(np.abs(trace.values) ** 2))
    noise = (rng.normal(size=trace.nsamples) + 1j * rng.normal(size=trace.nsamples)) / math.sqrt(2)
    return NearFieldTrace(trace.x1.copy(), trace.values + level * rms * noise, trace.b, trace.k1, trace.theta)


def synthetic_trace(profile, k2, inc: PlaneWaveIncidence, b: float, N: int = 40, nsamples: int = 128, lam: float = 1.0):
    sol = solve_forward(profile, MediumPair(inc.k1, k2, lam), inc, N)
    return near_field_trace(sol, b, nsamples)


def identifiability_probe(p1, p2, k2a: float, k2b: float, inc: PlaneWaveIncidence, b: float, N: int = 40, nsamples: int = 128) -> float:
    """Symmetric relative L2 distance between the two near-field traces."""
    u1 = synthetic_trace(p1, k2a, inc, b, N, nsamples).values
    u2 = synthetic_trace(p2, k2b, inc, b, N, nsamples).values
    d = np.linalg.norm(u1 - u2)
    if d == 0.0:
        return 0.0
    return float(2.0 * d / (np.linalg.norm(u1) + np.linalg.norm(u2)))


REFERENCE_PROFILE = BinaryProfile((0.7, 3.9), (0.0, 0.8))
REFERENCE_K2 = 1.6
REFERENCE_INCIDENCE = PlaneWaveIncidence(1.0, 0.2)
REFERENCE_B = 1.2

"""Fourier modal solver for TE diffraction by rectangular gratings.

The slab between the lowest and highest level of the profile is cut into
lamellar layers. In each layer the field is expanded in the eigenmodes of the
truncated x1-operator; layers and the two Rayleigh half-spaces are glued with
a scattering-matrix recursion.

Conventions used throughout:

* a downward mode behaves like ``exp(gamma * x2)`` and an upward mode like
  ``exp(-gamma * x2)`` with ``Re gamma >= 0``. In a homogeneous medium
  ``gamma_n = -1j * beta_n``.
* ``F = a(x1) * du/dx2`` is the flux continued across horizontal interfaces,
  with ``a = 1`` above the profile and ``a = lam`` below it.
* every amplitude is referenced at the interface it touches, so only the
  decaying factors ``exp(-gamma * d)`` ever appear.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from .geometry import PERIOD, LamellarLayer, RectangularProfile, layer_decomposition, require_valid
from .radiation import (
    MediumPair,
    PlaneWaveIncidence,
    RayleighSpectrum,
    beta_exponent,
    efficiencies,
    orders,
)

SINGULAR_COND = 1e14


class EigensolverFailure(RuntimeError):
    pass


class SingularMatching(RuntimeError):
    pass


class BelowGratingTop(ValueError):
    pass


# ---------------------------------------------------------------------------
# Layer eigenmodes
# ---------------------------------------------------------------------------


def step_fourier_coefficients(starts, ends, values, j: np.ndarray) -> np.ndarray:
    """Exact Fourier coefficients ``(1/2pi) int f(x) exp(-i j x) dx`` of a step function."""
    j = np.asarray(j)
    out = np.zeros(j.shape, dtype=complex)
    nz = j != 0
    jn = j[nz][:, None]
    s = np.asarray(starts, dtype=float)[None, :]
    e = np.asarray(ends, dtype=float)[None, :]
    v = np.asarray(values, dtype=complex)[None, :]
    out[nz] = np.sum(v * (np.exp(-1j * jn * s) - np.exp(-1j * jn * e)), axis=1) / (2j * np.pi * j[nz])
    out[~nz] = np.sum(v * (e - s)) / PERIOD
    return out


def toeplitz_matrix(layer: LamellarLayer, lower_value, upper_value, N: int) -> np.ndarray:
    """Convolution matrix ``[[f]]_{mn} = f_hat(m - n)`` of the layer's step function."""
    values = np.where(np.asarray(layer.lower), lower_value, upper_value)
    c = step_fourier_coefficients(layer.starts, layer.ends, values, np.arange(-2 * N, 2 * N + 1))
    return sla.toeplitz(c[2 * N :], c[2 * N :: -1])


def _mode_exponents(mu: np.ndarray) -> np.ndarray:
    """``gamma = -1j * beta`` with ``beta^2 = mu`` and ``Im beta >= 0``."""
    if np.isrealobj(mu) or np.all(np.abs(np.imag(mu)) <= 1e-14 * np.maximum(1.0, np.abs(mu))):
        mu = np.real(mu)
        d = np.sqrt(np.abs(mu))
        beta = np.where(mu >= 0, d + 0j, 1j * d)
    else:
        beta = np.sqrt(mu.astype(complex))
        flip = (beta.imag < 0) | ((beta.imag == 0) & (beta.real < 0))
        beta = np.where(flip, -beta, beta)
    return -1j * beta


@dataclass
class LayerModes:
    z_bottom: float
    z_top: float
    mu: np.ndarray
    """Eigenvalues of the layer operator; ``mu = beta^2`` in a homogeneous layer."""
    gamma: np.ndarray
    W: np.ndarray
    V: np.ndarray
    a_matrix: np.ndarray | None
    condition: float

    @property
    def thickness(self) -> float:
        return self.z_top - self.z_bottom


def assemble_layer(layer: LamellarLayer, media: MediumPair, inc: PlaneWaveIncidence, N: int) -> LayerModes:
    """Eigenmodes of ``u'' = -M u`` in the layer, with Fourier factorisation rules.

    ``M = [[a]]^-1 ([[a k^2]] - K [[1/a]]^-1 K)``; for ``lam = 1`` this is the
    Hermitian matrix ``E - K^2`` with ``E`` the Toeplitz matrix of ``k^2``.
    """
    if N < 1:
        raise ValueError("truncation N must be >= 1")
    alpha_n = orders(N) + inc.alpha
    k1sq, k2sq = media.k1**2, complex(media.k2) ** 2
    size = 2 * N + 1
    if layer.is_homogeneous:
        lower = layer.lower[0]
        ksq = k2sq if lower else k1sq
        a = media.lam if lower else 1.0
        mu = ksq - alpha_n**2
        if np.imag(ksq) == 0:
            mu = np.real(mu)
        gamma = _mode_exponents(mu)
        W = np.eye(size, dtype=complex)
        return LayerModes(layer.z_bottom, layer.z_top, mu, gamma, W, a * np.diag(gamma), None, 1.0)

    K = np.diag(alpha_n)
    try:
        if media.lam == 1.0:
            E = toeplitz_matrix(layer, k2sq, k1sq, N)
            M = E - K @ K
            if np.imag(k2sq) == 0:
                mu, W = sla.eigh(M)
            else:
                mu, W = sla.eig(M)
            A = None
        else:
            A = toeplitz_matrix(layer, media.lam, 1.0, N)
            Ainv = toeplitz_matrix(layer, 1.0 / media.lam, 1.0, N)
            B = toeplitz_matrix(layer, media.lam * k2sq, k1sq, N)
            M = np.linalg.solve(A, B - K @ np.linalg.solve(Ainv, K))
            mu, W = sla.eig(M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"layer [{layer.z_bottom}, {layer.z_top}]: {exc}") from exc
    if not np.all(np.isfinite(mu)):
        raise EigensolverFailure("non-finite eigenvalues")
    W = W.astype(complex)
    gamma = _mode_exponents(mu)
    V = W * gamma[None, :]
    if A is not None:
        V = A @ V
    cond = float(np.linalg.cond(W))
    return LayerModes(layer.z_bottom, layer.z_top, mu, gamma, W, V, A, cond)


# ---------------------------------------------------------------------------
# Scattering matrices
# ---------------------------------------------------------------------------
# Blocks map (down-in at top, up-in at bottom) to (up-out at top, down-out at bottom):
#   [u_top; d_bot] = [[S11, S12], [S21, S22]] [d_top; u_bot]


@dataclass
class SMatrix:
    S11: np.ndarray
    S12: np.ndarray
    S21: np.ndarray
    S22: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "SMatrix":
        z = np.zeros((n, n), dtype=complex)
        e = np.eye(n, dtype=complex)
        return cls(z, e, e.copy(), z.copy())

    def star(self, other: "SMatrix") -> "SMatrix":
        """Redheffer product: ``self`` on top of ``other``."""
        n = self.S11.shape[0]
        eye = np.eye(n)
        # (I - A22 B11)^-1 applied to [A21, A22 B12]
        rhs = np.hstack([self.S21, self.S22 @ other.S12])
        sol = np.linalg.solve(eye - self.S22 @ other.S11, rhs)
        m21, m22 = sol[:, :n], sol[:, n:]
        return SMatrix(
            self.S11 + self.S12 @ other.S11 @ m21,
            self.S12 @ (other.S12 + other.S11 @ m22),
            other.S21 @ m21,
            other.S22 + other.S21 @ m22,
        )

    def max_norm(self) -> float:
        return max(np.linalg.norm(b, 2) for b in (self.S11, self.S12, self.S21, self.S22))


def interface_smatrix(upper: tuple[np.ndarray, np.ndarray], lower: tuple[np.ndarray, np.ndarray]) -> tuple[SMatrix, float]:
    """Match ``u`` and ``F`` across a horizontal interface.

    ``upper``/``lower`` are ``(W, V)`` of the regions above and below.
    Returns the S-matrix and the condition number of the matching system.
    """
    W1, V1 = upper
    W2, V2 = lower
    n = W1.shape[0]
    lhs = np.block([[W1, -W2], [-V1, -V2]])
    rhs = np.block([[-W1, W2], [-V1, -V2]])
    cond = float(np.linalg.cond(lhs))
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularMatching(f"interface matching is singular (condition number {cond:.3g})")
    S = np.linalg.solve(lhs, rhs)
    return SMatrix(S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]), cond


def propagation_smatrix(gamma: np.ndarray, thickness: float) -> SMatrix:
    n = gamma.size
    X = np.diag(np.exp(-gamma * thickness))
    z = np.zeros((n, n), dtype=complex)
    return SMatrix(z, X, X.copy(), z.copy())


# ---------------------------------------------------------------------------
# Forward solution
# ---------------------------------------------------------------------------


@dataclass
class LayerField:
    z_bottom: float
    z_top: float
    gamma: np.ndarray
    W: np.ndarray
    d_top: np.ndarray
    u_bottom: np.ndarray
    lower_starts: tuple[float, ...] = ()
    lower_flags: tuple[bool, ...] = ()


@dataclass
class ForwardSolution:
    profile: RectangularProfile
    media: MediumPair
    incidence: PlaneWaveIncidence
    N: int
    spectrum: RayleighSpectrum
    reflected: np.ndarray
    """Upward amplitudes referenced at ``x2 = profile.top``."""
    transmitted: np.ndarray
    """Downward amplitudes referenced at ``x2 = profile.bottom``."""
    layers: list[LayerField]
    diagnostics: dict = field(default_factory=dict)

    @property
    def alpha_n(self) -> np.ndarray:
        return orders(self.N) + self.incidence.alpha

    @property
    def gamma_plus(self) -> np.ndarray:
        return -1j * beta_exponent(orders(self.N), self.media.k1, self.incidence.alpha)

    @property
    def gamma_minus(self) -> np.ndarray:
        return -1j * beta_exponent(orders(self.N), self.media.k2, self.incidence.alpha)

    def efficiencies(self):
        return efficiencies(self.spectrum, self.incidence, self.media)

    # -- persistence --------------------------------------------------------

    def save(self, path: str | Path) -> None:
        arrays = {
            "reflected": self.reflected,
            "transmitted": self.transmitted,
            "A_plus": self.spectrum.A_plus,
            "A_minus": self.spectrum.A_minus,
        }
        for i, lf in enumerate(self.layers):
            arrays[f"layer{i}_gamma"] = lf.gamma
            arrays[f"layer{i}_W"] = lf.W
            arrays[f"layer{i}_d_top"] = lf.d_top
            arrays[f"layer{i}_u_bottom"] = lf.u_bottom
        meta = {
            "profile": self.profile.to_dict(),
            "media": {"k1": self.media.k1, "k2": [complex(self.media.k2).real, complex(self.media.k2).imag], "lam": self.media.lam},
            "incidence": {"k1": self.incidence.k1, "theta": self.incidence.theta},
            "N": self.N,
            "layers": [
                {"z_bottom": lf.z_bottom, "z_top": lf.z_top, "starts": list(lf.lower_starts), "lower": list(lf.lower_flags)}
                for lf in self.layers
            ],
            "diagnostics": _jsonable(self.diagnostics),
        }
        arrays["meta"] = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
        with open(path, "wb") as fh:
            np.savez(fh, **arrays)

    @classmethod
    def load(cls, path: str | Path) -> "ForwardSolution":
        with np.load(path) as data:
            meta = json.loads(bytes(data["meta"]).decode())
            arrays = {k: data[k] for k in data.files if k != "meta"}
        k2 = complex(*meta["media"]["k2"])
        media = MediumPair(meta["media"]["k1"], k2.real if k2.imag == 0 else k2, meta["media"]["lam"])
        inc = PlaneWaveIncidence(meta["incidence"]["k1"], meta["incidence"]["theta"])
        N = int(meta["N"])
        layers = [
            LayerField(
                m["z_bottom"],
                m["z_top"],
                arrays[f"layer{i}_gamma"],
                arrays[f"layer{i}_W"],
                arrays[f"layer{i}_d_top"],
                arrays[f"layer{i}_u_bottom"],
                tuple(m["starts"]),
                tuple(m["lower"]),
            )
            for i, m in enumerate(meta["layers"])
        ]
        spec = RayleighSpectrum(N, inc.alpha, media.k1, media.k2, arrays["A_plus"], arrays["A_minus"])
        return cls(
            RectangularProfile.from_dict(meta["profile"]),
            media,
            inc,
            N,
            spec,
            arrays["reflected"],
            arrays["transmitted"],
            layers,
            meta.get("diagnostics", {}),
        )


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def solve_forward(profile: RectangularProfile, media: MediumPair, inc: PlaneWaveIncidence, N: int = 40) -> ForwardSolution:
    """Rayleigh coefficients and layer amplitudes for a plane wave from above."""
    require_valid(profile)
    if abs(inc.k1 - media.k1) > 1e-14 * media.k1:
        raise ValueError("incidence and media disagree on k1")
    if N < 1:
        raise ValueError("truncation N must be >= 1")
    t0 = time.perf_counter()
    size = 2 * N + 1
    n_idx = orders(N)
    beta_p = beta_exponent(n_idx, media.k1, inc.alpha)
    beta_m = beta_exponent(n_idx, media.k2, inc.alpha)
    gamma_p, gamma_m = -1j * beta_p, -1j * beta_m
    eye = np.eye(size, dtype=complex)
    regions = [(eye, np.diag(gamma_p))]
    layer_modes = []
    for layer in layer_decomposition(profile):
        lm = assemble_layer(layer, media, inc, N)
        layer_modes.append((layer, lm))
        regions.append((lm.W, lm.V))
    regions.append((eye, media.lam * np.diag(gamma_m)))

    # elements alternate: interface, propagation, interface, ..., interface
    elements = []
    conds = []
    for i in range(len(regions) - 1):
        S, c = interface_smatrix(regions[i], regions[i + 1])
        conds.append(c)
        elements.append(S)
        if i < len(layer_modes):
            lm = layer_modes[i][1]
            elements.append(propagation_smatrix(lm.gamma, lm.thickness))

    prefix = [elements[0]]
    for el in elements[1:]:
        prefix.append(prefix[-1].star(el))
    suffix = [elements[-1]]
    for el in reversed(elements[:-1]):
        suffix.append(el.star(suffix[-1]))
    suffix.reverse()
    total = prefix[-1]

    d0 = np.zeros(size, dtype=complex)
    d0[N] = np.exp(-1j * inc.beta * profile.top)
    reflected = total.S11 @ d0
    transmitted = total.S21 @ d0

    def port(k):
        # (down, up) amplitudes between element k and element k+1
        P, Q = prefix[k], suffix[k + 1]
        down = np.linalg.solve(eye - P.S22 @ Q.S11, P.S21 @ d0)
        return down, Q.S11 @ down

    layer_fields = []
    for i, (layer, lm) in enumerate(layer_modes):
        d_top, _ = port(2 * i)
        _, u_bot = port(2 * i + 1)
        layer_fields.append(LayerField(lm.z_bottom, lm.z_top, lm.gamma, lm.W, d_top, u_bot, layer.starts, layer.lower))

    A_plus = reflected * np.exp(-1j * beta_p * profile.top)
    A_minus = transmitted * np.exp(1j * beta_m * profile.bottom)
    spec = RayleighSpectrum(N, inc.alpha, media.k1, media.k2, A_plus, A_minus)
    diagnostics = {
        "interface_condition": conds,
        "eigvec_condition": [lm.condition for _, lm in layer_modes],
        "max_smatrix_norm": max(p.max_norm() for p in prefix),
        "regime": media.regime(),
        "seconds": time.perf_counter() - t0,
    }
    sol = ForwardSolution(profile, media, inc, N, spec, reflected, transmitted, layer_fields, diagnostics)
    sol._total_smatrix = total
    return sol


def propagating_unitarity_defect(sol: ForwardSolution) -> float:
    """``||S^H S - I||`` of the flux-normalised S-matrix on propagating channels.

    Channels: propagating, non-grazing orders above (weight ``beta^+``) and
    below (weight ``lam * beta^-``). For lossless media the restricted matrix
    is unitary.
    """
    S = getattr(sol, "_total_smatrix", None)
    if S is None:
        raise ValueError("solution carries no S-matrix (loaded from disk?)")
    N = sol.N
    bp = beta_exponent(orders(N), sol.media.k1, sol.incidence.alpha)
    bm = beta_exponent(orders(N), sol.media.k2, sol.incidence.alpha)
    tol = 1e-10
    p = np.flatnonzero((np.abs(bp.imag) == 0) & (bp.real > tol * sol.media.k1))
    m = np.flatnonzero((np.abs(bm.imag) == 0) & (bm.real > tol * abs(sol.media.k2)))
    wp = np.sqrt(bp.real[p])
    wm = np.sqrt(sol.media.lam * bm.real[m])
    full = np.block(
        [
            [S.S11[np.ix_(p, p)], S.S12[np.ix_(p, m)]],
            [S.S21[np.ix_(m, p)], S.S22[np.ix_(m, m)]],
        ]
    )
    w = np.concatenate([wp, wm])
    hat = w[:, None] * full / w[None, :]
    return float(np.linalg.norm(hat.conj().T @ hat - np.eye(hat.shape[0]), 2))


# ---------------------------------------------------------------------------
# Field evaluation
# ---------------------------------------------------------------------------


def _layer_coefficients(lf: LayerField, x2: np.ndarray, derivative: bool = False) -> np.ndarray:
    """Fourier coefficients (rows: points) of u or du/dx2 inside a layer."""
    g = lf.gamma[None, :]
    down = np.exp(g * (x2[:, None] - lf.z_top)) * lf.d_top[None, :]
    up = np.exp(-g * (x2[:, None] - lf.z_bottom)) * lf.u_bottom[None, :]
    amp = g * (down - up) if derivative else down + up
    return amp @ lf.W.T


def _region_coefficients(sol: ForwardSolution, region: int, x2: np.ndarray, derivative: bool = False) -> np.ndarray:
    """Coefficients of the scattered-plus-transmitted expansion in a region.

    ``region`` is -1 for the upper half-space (scattered part only),
    ``len(layers)`` for the lower half-space, otherwise a layer index.
    """
    if region == -1:
        g = sol.gamma_plus[None, :]
        amp = np.exp(-g * (x2[:, None] - sol.profile.top)) * sol.reflected[None, :]
        return -g * amp if derivative else amp
    if region == len(sol.layers):
        g = sol.gamma_minus[None, :]
        amp = np.exp(g * (x2[:, None] - sol.profile.bottom)) * sol.transmitted[None, :]
        return g * amp if derivative else amp
    return _layer_coefficients(sol.layers[region], x2, derivative)


def _region_index(sol: ForwardSolution, x2: np.ndarray) -> np.ndarray:
    """-1 above the grating, ``len(layers)`` below it, else the (top-most) layer."""
    idx = np.full(x2.shape, -1, dtype=int)
    idx[x2 < sol.profile.bottom] = len(sol.layers)
    for i in reversed(range(len(sol.layers))):
        lf = sol.layers[i]
        idx[(x2 >= lf.z_bottom) & (x2 <= lf.z_top)] = i
    return idx


def evaluate_field(sol: ForwardSolution, points, region: int | None = None, derivative: bool = False) -> np.ndarray:
    """Total field ``u`` (or ``du/dx2``) at ``points`` of shape ``(..., 2)``.

    The expansion is picked from ``x2`` unless ``region`` forces one (used to
    compare one-sided limits at interfaces).
    """
    pts = np.asarray(points, dtype=float)
    shape = pts.shape[:-1]
    pts = pts.reshape(-1, 2)
    x1, x2 = pts[:, 0], pts[:, 1]
    out = np.zeros(x1.shape, dtype=complex)
    reg = _region_index(sol, x2) if region is None else np.full(x1.shape, region)
    phase = np.exp(1j * np.outer(x1, sol.alpha_n))
    for r in np.unique(reg):
        sel = reg == r
        coef = _region_coefficients(sol, int(r), x2[sel], derivative)
        out[sel] = np.sum(coef * phase[sel], axis=1)
        if r == -1:
            inc = sol.incidence
            ui = np.exp(1j * inc.alpha * x1[sel] - 1j * inc.beta * x2[sel])
            out[sel] += -1j * inc.beta * ui if derivative else ui
    return out.reshape(shape)


@dataclass
class NearFieldTrace:
    x1: np.ndarray
    values: np.ndarray
    b: float
    k1: float
    theta: float

    @property
    def nsamples(self) -> int:
        return self.x1.size

    def to_csv(self, path: str | Path | None = None) -> str:
        lines = [f"# b={self.b!r} k1={self.k1!r} theta={self.theta!r}", "x1,re,im"]
        lines += [f"{float(x)!r},{float(v.real)!r},{float(v.imag)!r}" for x, v in zip(self.x1, self.values)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, path: str | Path) -> "NearFieldTrace":
        header, *rest = Path(path).read_text().splitlines()
        meta = dict(item.split("=") for item in header.lstrip("# ").split())
        rows = np.array([[float(c) for c in line.split(",")] for line in rest[1:] if line.strip()])
        return cls(rows[:, 0], rows[:, 1] + 1j * rows[:, 2], float(meta["b"]), float(meta["k1"]), float(meta["theta"]))


def near_field_trace(sol: ForwardSolution, b: float, nsamples: int = 256) -> NearFieldTrace:
    if b <= sol.profile.top:
        raise BelowGratingTop(f"measurement line b={b} must lie above the grating top {sol.profile.top}")
    x1 = PERIOD * np.arange(nsamples) / nsamples
    pts = np.stack([x1, np.full_like(x1, b)], axis=-1)
    return NearFieldTrace(x1, evaluate_field(sol, pts), float(b), sol.incidence.k1, sol.incidence.theta)


def interface_residuals(sol: ForwardSolution, npoints: int = 64, clearance: float = 0.05) -> dict[str, float]:
    """Largest jumps of ``u`` and of ``a du/dx2`` on the horizontal pieces of the profile.

    Points closer than ``clearance`` to a riser are skipped.
    """
    prof = sol.profile
    t = np.asarray(prof.transitions)
    h = np.asarray(prof.heights)
    ends = np.roll(t, -1) + np.where(np.arange(t.size) == t.size - 1, PERIOD, 0.0)
    if prof.is_flat:
        ends = t + PERIOD
    jump_u, jump_flux = 0.0, 0.0
    L = len(sol.layers)
    for tj, ej, hj in zip(t, ends, h):
        if ej - tj <= 2 * clearance:
            continue
        x1 = np.linspace(tj + clearance, ej - clearance, npoints)
        pts = np.stack([x1, np.full_like(x1, hj)], axis=-1)
        above = next((i for i, lf in enumerate(sol.layers) if lf.z_bottom == hj), -1)
        below = next((i for i, lf in enumerate(sol.layers) if lf.z_top == hj), L)
        u_up = evaluate_field(sol, pts, region=above)
        u_dn = evaluate_field(sol, pts, region=below)
        f_up = evaluate_field(sol, pts, region=above, derivative=True)
        f_dn = sol.media.lam * evaluate_field(sol, pts, region=below, derivative=True)
        scale = max(1.0, float(np.max(np.abs(u_up))))
        jump_u = max(jump_u, float(np.max(np.abs(u_up - u_dn))) / scale)
        jump_flux = max(jump_flux, float(np.max(np.abs(f_up - f_dn))) / scale)
    return {"u": jump_u, "flux": jump_flux}


def convergence_study(profile: RectangularProfile, media: MediumPair, inc: PlaneWaveIncidence, Ns) -> list[dict]:
    """Energy defect and zeroth-order coefficients for each truncation in ``Ns``."""
    rows = []
    for N in Ns:
        sol = solve_forward(profile, media, inc, N)
        eff = sol.efficiencies() if media.lossless else None
        rows.append(
            {
                "N": int(N),
                "defect": float(eff.defect) if eff is not None else math.nan,
                "A0_plus": sol.spectrum.coefficient("+", 0),
                "A0_minus": sol.spectrum.coefficient("-", 0),
                "seconds": sol.diagnostics["seconds"],
            }
        )
    return rows

"""Finite-volume reference solver on the truncated cell ``S_H``.

Second-order five-point scheme for ``div(a grad u) + a k^2 u = 0`` on
``[0, 2pi) x [-H, H]`` with quasi-periodic side conditions and exact
(discrete-Fourier) Dirichlet-to-Neumann closures on ``x2 = +-H``. Entirely
independent of the modal solver apart from the shared ``beta_n`` formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .geometry import PERIOD, RectangularProfile, require_valid
from .modal import NearFieldTrace
from .radiation import MediumPair, PlaneWaveIncidence, beta_exponent, grazing_mask


class GridMisaligned(ValueError):
    pass


class SolverDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class FdGrid:
    nx: int
    ny: int
    H: float

    @property
    def h1(self) -> float:
        return PERIOD / self.nx

    @property
    def h2(self) -> float:
        return 2.0 * self.H / self.ny

    @property
    def x1(self) -> np.ndarray:
        return self.h1 * np.arange(self.nx)

    @property
    def x2(self) -> np.ndarray:
        return -self.H + self.h2 * np.arange(self.ny + 1)

    def row_of(self, height: float) -> int:
        return int(round((height + self.H) / self.h2))

    def column_of(self, x1: float) -> int:
        return int(round(x1 / self.h1)) % self.nx


def default_half_height(profile: RectangularProfile) -> float:
    return max(abs(profile.top), abs(profile.bottom)) + 0.5


def _as_fraction(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**6)


def aligned_grid(profile: RectangularProfile, nx: int, ny: int, H_min: float | None = None) -> FdGrid:
    """Smallest ``H >= H_min`` for which every profile level falls on a grid row."""
    if ny % 2:
        raise GridMisaligned("ny must be even so that x2 = 0 is a grid row")
    H0 = default_half_height(profile) if H_min is None else H_min
    fr = [_as_fraction(h) for h in profile.heights]
    den = reduce(math.lcm, (f.denominator for f in fr), 1)
    g = reduce(math.gcd, (abs(int(f * den)) for f in fr), 0)
    if g == 0:
        grid = FdGrid(nx, ny, H0)
    else:
        step = Fraction(g, den)
        q = math.floor(ny * step / (2 * Fraction(H0).limit_denominator(10**9)))
        if q < 1:
            raise GridMisaligned(f"ny={ny} too small to align the profile levels with H >= {H0}")
        grid = FdGrid(nx, ny, float(ny * step / (2 * q)))
    check_alignment(profile, grid)
    return grid


def check_alignment(profile: RectangularProfile, grid: FdGrid, tol: float = 1e-9) -> None:
    for t in profile.transitions:
        r = t / grid.h1
        if abs(r - round(r)) > tol * max(1.0, abs(r)):
            raise GridMisaligned(f"transition {t} is not a multiple of h1={grid.h1}")
    for h in profile.heights:
        r = (h + grid.H) / grid.h2
        if abs(r - round(r)) > tol * max(1.0, abs(r)):
            raise GridMisaligned(f"level {h} does not fall on a grid row")
        if not 2 <= round(r) <= grid.ny - 2:
            raise GridMisaligned(f"level {h} too close to the DtN boundary")


def dtn_matrix(nx: int, k, alpha: float, side: str = "+") -> np.ndarray:
    """Matrix acting on nodal values ``u(x1_l)``: discrete Fourier, multiply, back.

    Uses orders ``|n| <= ceil(nx/2) - 1``; ``T^+`` multiplies by ``i beta_n``,
    ``T^-`` by ``-i beta_n``.
    """
    M = math.ceil(nx / 2) - 1
    n = np.arange(-M, M + 1)
    beta = beta_exponent(n, k, alpha)
    beta = np.where(grazing_mask(beta, k), 0.0, beta)
    sign = 1 if side == "+" else -1
    x = PERIOD * np.arange(nx) / nx
    E = np.exp(1j * np.outer(x, n + alpha))  # nodes x modes
    return (E * (sign * 1j * beta)[None, :]) @ E.conj().T / nx


@dataclass
class FdSolution:
    profile: RectangularProfile
    media: MediumPair
    incidence: PlaneWaveIncidence
    grid: FdGrid
    u: np.ndarray
    """Nodal field, shape ``(ny + 1, nx)``; row j is ``x2 = -H + j h2``."""

    @property
    def trace(self) -> NearFieldTrace:
        return NearFieldTrace(self.grid.x1, self.u[-1].copy(), self.grid.H, self.incidence.k1, self.incidence.theta)

    def _fourier(self, row: np.ndarray, nmax: int) -> tuple[np.ndarray, np.ndarray]:
        n = np.arange(-nmax, nmax + 1)
        x = self.grid.x1
        f = np.exp(-1j * np.outer(n + self.incidence.alpha, x)) @ row / self.grid.nx
        return n, f

    def rayleigh_plus(self, nmax: int = 3) -> np.ndarray:
        inc, H = self.incidence, self.grid.H
        scat = self.u[-1] - np.exp(1j * inc.alpha * self.grid.x1 - 1j * inc.beta * H)
        n, f = self._fourier(scat, nmax)
        return f * np.exp(-1j * beta_exponent(n, self.media.k1, inc.alpha) * H)

    def rayleigh_minus(self, nmax: int = 3) -> np.ndarray:
        n, f = self._fourier(self.u[0], nmax)
        return f * np.exp(-1j * beta_exponent(n, self.media.k2, self.incidence.alpha) * self.grid.H)

    @classmethod
    def from_function(cls, profile, media, inc, grid: FdGrid, func) -> "FdSolution":
        """Wrap a sampled analytic field, e.g. for manufactured-solution checks."""
        X1, X2 = np.meshgrid(grid.x1, grid.x2)
        return cls(profile, media, inc, grid, np.asarray(func(X1, X2), dtype=complex))


def _cell_coefficients(profile, media, grid):
    xc = grid.x1 + 0.5 * grid.h1
    yc = grid.x2[:-1] + 0.5 * grid.h2
    lower = yc[:, None] < profile.height_at(xc)[None, :]
    a = np.where(lower, media.lam, 1.0)
    ak2 = np.where(lower, media.lam * complex(media.k2) ** 2, media.k1**2 + 0j)
    return a, ak2


def assemble(profile: RectangularProfile, media: MediumPair, inc: PlaneWaveIncidence, grid: FdGrid):
    """Sparse system ``A u = b`` with unknowns ordered row-major (x2 rows)."""
    nx, ny = grid.nx, grid.ny
    h1, h2 = grid.h1, grid.h2
    a, ak2 = _cell_coefficients(profile, media, grid)
    # pad with empty cell rows below and above the domain
    ap = np.zeros((ny + 2, nx))
    ap[1:-1] = a
    kp = np.zeros((ny + 2, nx), dtype=complex)
    kp[1:-1] = ak2
    below, above = ap[:-1], ap[1:]  # cells under / over node row j
    below_l, above_l = np.roll(below, 1, axis=1), np.roll(above, 1, axis=1)

    east = (below + above) * (0.5 * h2 / h1)
    west = (below_l + above_l) * (0.5 * h2 / h1)
    north = (above_l + above) * (0.5 * h1 / h2)
    south = (below_l + below) * (0.5 * h1 / h2)
    mass = (kp[:-1] + np.roll(kp[:-1], 1, axis=1) + kp[1:] + np.roll(kp[1:], 1, axis=1)) * (0.25 * h1 * h2)

    idx = np.arange((ny + 1) * nx).reshape(ny + 1, nx)
    wrap = np.exp(2j * np.pi * inc.alpha)
    i_cols = np.arange(nx)
    east_phase = np.where(i_cols == nx - 1, wrap, 1.0)[None, :] * np.ones((ny + 1, 1))
    west_phase = np.where(i_cols == 0, 1.0 / wrap, 1.0)[None, :] * np.ones((ny + 1, 1))

    rows, cols, vals = [], [], []

    def add(r, c, v):
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.asarray(v, dtype=complex).ravel())

    add(idx, idx, mass - east - west - north - south)
    add(idx, np.roll(idx, -1, axis=1), east * east_phase)
    add(idx, np.roll(idx, 1, axis=1), west * west_phase)
    add(idx[:-1], idx[1:], north[:-1])
    add(idx[1:], idx[:-1], south[1:])

    # DtN closures: outward flux a * du/dn = a * (i beta_n) in Fourier space on both lids
    Tp = dtn_matrix(nx, media.k1, inc.alpha, "+") * h1
    Tm = -dtn_matrix(nx, media.k2, inc.alpha, "-") * (media.lam * h1)
    top, bot = idx[-1], idx[0]
    add(np.repeat(top, nx), np.tile(top, nx), Tp)
    add(np.repeat(bot, nx), np.tile(bot, nx), Tm)

    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(idx.size, idx.size)
    )
    b = np.zeros(idx.size, dtype=complex)
    ui = np.exp(1j * inc.alpha * grid.x1 - 1j * inc.beta * grid.H)
    b[top] = 2j * inc.beta * h1 * ui
    return A, b


def fd_solve(profile: RectangularProfile, media: MediumPair, inc: PlaneWaveIncidence, grid: FdGrid) -> FdSolution:
    require_valid(profile)
    check_alignment(profile, grid)
    A, b = assemble(profile, media, inc, grid)
    try:
        u = spla.spsolve(A.tocsc(), b)
    except RuntimeError as exc:  # SuperLU reports singular factors this way
        raise SolverDiverged(str(exc)) from exc
    if not np.all(np.isfinite(u)):
        raise SolverDiverged("non-finite solution")
    res = np.linalg.norm(A @ u - b) / max(np.linalg.norm(b), 1e-300)
    if res > 1e-6:
        raise SolverDiverged(f"linear residual {res:.3g}")
    return FdSolution(profile, media, inc, grid, u.reshape(grid.ny + 1, grid.nx))


# ---------------------------------------------------------------------------
# Rellich identity
# ---------------------------------------------------------------------------


def _d1_nodes(u, h1, wrap):
    """Central x1-difference on node rows, quasi-periodic."""
    right = np.roll(u, -1, axis=-1)
    right[..., -1] *= wrap
    left = np.roll(u, 1, axis=-1)
    left[..., 0] /= wrap
    return (right - left) / (2 * h1)


def rellich_check(sol: FdSolution, c: float = 0.0) -> dict:
    """Evaluate both Rellich identities ``I^+ = 0`` and ``I^- = 0`` by grid quadrature.

    Multiplier ``(x2 - c) d2 conj(u)``. Returns the two values, the
    absolute defect ``max(|I^+|, |I^-|)`` and the sum of the magnitudes of
    all contributing terms (a scale for relative judgement).
    """
    g, prof = sol.grid, sol.profile
    u = sol.u
    h1, h2 = g.h1, g.h2
    wrap = np.exp(2j * np.pi * sol.incidence.alpha)
    k = {+1: sol.media.k1**2, -1: complex(sol.media.k2) ** 2}

    # volume terms, midpoint rule per cell
    ur = np.roll(u, -1, axis=1)
    ur[:, -1] *= wrap
    uc = 0.25 * (u[:-1] + u[1:] + ur[:-1] + ur[1:])
    d1 = 0.5 * ((ur[:-1] - u[:-1]) + (ur[1:] - u[1:])) / h1
    d2 = 0.5 * ((u[1:] - u[:-1]) + (ur[1:] - ur[:-1])) / h2
    a, _ = _cell_coefficients(prof, sol.media, g)
    lower = a != 1.0 if sol.media.lam != 1.0 else _lower_cells(prof, g)
    vol = {}
    scale = 0.0
    for s, mask in ((+1, ~lower), (-1, lower)):
        integrand = np.abs(d1) ** 2 + np.abs(d2) ** 2 - k[s].real * np.abs(uc) ** 2 - 2 * np.abs(d2) ** 2
        vol[s] = float(np.sum(integrand[mask]) * h1 * h2)
        scale += float(np.sum(np.abs(integrand[mask])) * h1 * h2)

    # lids: nu = (0, +-1); one-sided second-order normal derivative
    def lid(row, sgn, ksq):
        if sgn > 0:
            du2 = (3 * u[row] - 4 * u[row - 1] + u[row - 2]) / (2 * h2)
        else:
            du2 = (-3 * u[row] + 4 * u[row + 1] - u[row + 2]) / (2 * h2)
        du1 = _d1_nodes(u[row], h1, wrap)
        x2 = g.x2[row]
        # -nu2 |grad u|^2 + nu2 k^2 |u|^2 + 2 Re(d2 conj(u) * nu2 d2 u)
        val = sgn * (x2 - c) * (-np.abs(du1) ** 2 + np.abs(du2) ** 2 + ksq.real * np.abs(u[row]) ** 2)
        return float(np.sum(val) * h1), float(np.sum(np.abs(val)) * h1)

    top_val, top_scale = lid(g.ny, +1, k[+1])
    bot_val, bot_scale = lid(0, -1, k[-1])
    scale += top_scale + bot_scale

    lam_plus, lam_minus, lam_scale = _profile_terms(sol, c, k)
    scale += lam_scale
    I_plus = top_val - lam_plus + vol[+1]
    I_minus = bot_val + lam_minus + vol[-1]
    return {"I_plus": I_plus, "I_minus": I_minus, "defect": max(abs(I_plus), abs(I_minus)), "scale": scale}


def _lower_cells(prof, g):
    xc = g.x1 + 0.5 * g.h1
    yc = g.x2[:-1] + 0.5 * g.h2
    return yc[:, None] < prof.height_at(xc)[None, :]


def _profile_terms(sol: FdSolution, c: float, k: dict) -> tuple[float, float, float]:
    """``int_Lambda (x2 - c)[...] ds`` with one-sided traces from above and below."""
    g, prof, u = sol.grid, sol.profile, sol.u
    h1, h2 = g.h1, g.h2
    wrap = np.exp(2j * np.pi * sol.incidence.alpha)
    if prof.is_flat:
        pieces = [(0.0, PERIOD, prof.heights[0])]
    else:
        t = list(prof.transitions)
        ends = t[1:] + [t[0] + PERIOD]
        pieces = list(zip(t, ends, prof.heights))
    plus = minus = scale = 0.0

    def col(i):
        return i % g.nx, (wrap ** (i // g.nx))

    def value(j, i):
        ci, ph = col(i)
        return u[j, ci] * ph

    # horizontal pieces, nu = (0, 1)
    for t0, t1, h in pieces:
        j = g.row_of(h)
        i0 = int(round(t0 / h1))
        i1 = int(round(t1 / h1))
        ii = np.arange(i0, i1 + 1)
        w = np.full(ii.size, h1)
        w[0] = w[-1] = 0.5 * h1
        uu = np.array([value(j, i) for i in ii])
        du1 = np.array([(value(j, i + 1) - value(j, i - 1)) / (2 * h1) for i in ii])
        up = np.array([(-3 * value(j, i) + 4 * value(j + 1, i) - value(j + 2, i)) / (2 * h2) for i in ii])
        dn = np.array([(3 * value(j, i) - 4 * value(j - 1, i) + value(j - 2, i)) / (2 * h2) for i in ii])
        for sgn, du2 in ((+1, up), (-1, dn)):
            ksq = k[sgn].real
            val = (h - c) * (-(np.abs(du1) ** 2 + np.abs(du2) ** 2) + ksq * np.abs(uu) ** 2 + 2 * np.abs(du2) ** 2)
            integral = float(np.sum(w * val))
            scale += float(np.sum(w * np.abs(val)))
            if sgn > 0:
                plus += integral
            else:
                minus += integral

    # risers, nu = (+-1, 0): nu2 = 0 leaves 2 Re(d2 conj(u) * nu1 d1 u)
    if not prof.is_flat:
        for jdx, t0 in enumerate(prof.transitions):
            left, right = prof.heights[jdx - 1], prof.heights[jdx]
            i = int(round(t0 / h1))
            jlo, jhi = g.row_of(min(left, right)), g.row_of(max(left, right))
            nu1 = -1.0 if left < right else 1.0  # upper medium on the low side
            jj = np.arange(jlo, jhi + 1)
            w = np.full(jj.size, h2)
            w[0] = w[-1] = 0.5 * h2
            x2 = g.x2[jj]
            d2 = np.array([(value(j + 1, i) - value(j - 1, i)) / (2 * h2) for j in jj])
            fwd = np.array([(-3 * value(j, i) + 4 * value(j, i + 1) - value(j, i + 2)) / (2 * h1) for j in jj])
            bwd = np.array([(3 * value(j, i) - 4 * value(j, i - 1) + value(j, i - 2)) / (2 * h1) for j in jj])
            # the upper medium lies on the side nu points to
            d1_plus, d1_minus = (bwd, fwd) if nu1 < 0 else (fwd, bwd)
            for sgn, d1 in ((+1, d1_plus), (-1, d1_minus)):
                val = (x2 - c) * 2 * np.real(np.conj(d2) * nu1 * d1)
                integral = float(np.sum(w * val))
                scale += float(np.sum(w * np.abs(val)))
                if sgn > 0:
                    plus += integral
                else:
                    minus += integral
    return plus, minus, scale

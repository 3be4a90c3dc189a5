"""Local analysis at grating corners.

Three independent pieces:

* least-squares harmonic expansions of a field around a corner,
* the explicit special solutions of the sector transmission problem with a
  homogeneous polynomial right-hand side,
* the integer matrices whose nonsingularity forces ``q+ = q-`` for
  biharmonic polynomial data, handled in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .geometry import PERIOD, Corner, RectangularProfile


class IllConditionedFit(RuntimeError):
    pass


class NotHarmonic(ValueError):
    pass


# ---------------------------------------------------------------------------
# harmonic fitting
# ---------------------------------------------------------------------------

DEFAULT_RADII = tuple(0.05 * 1.5**j for j in range(5))
MAX_CONDITION = 1e12


@dataclass
class HarmonicExpansion:
    """``u ~ sum_n r^n (a_n sin n theta + b_n cos n theta)`` around ``center``.

    ``residual_norms[i]`` is the RMS over the circle of radius ``radii[i]`` of
    ``u`` minus the harmonic part; ``residual_exponent`` is the log-log slope
    of those norms.
    """

    center: tuple[float, float]
    a: np.ndarray
    b: np.ndarray
    radii: np.ndarray
    residual_norms: np.ndarray
    residual_exponent: float
    m: int
    misfit: float
    condition: float
    remainder: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.a) - 1

    def __call__(self, r, theta) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        for n in range(self.n_max + 1):
            out = out + r**n * (self.a[n] * np.sin(n * theta) + self.b[n] * np.cos(n * theta))
        return out


def _design(rho, theta, n_max, log_terms):
    """Columns: harmonic terms, then non-harmonic remainder terms.

    The remainder uses ``rho^p`` times ``cos/sin(n theta)`` with ``p - n`` even
    and positive, up to total degree ``n_max + 2``; optionally
    ``rho^p log(rho)`` for ``2 <= p <= n_max + 2``.
    """
    cols, labels = [np.ones_like(rho)], [("b", 0)]
    for n in range(1, n_max + 1):
        cols += [rho**n * np.sin(n * theta), rho**n * np.cos(n * theta)]
        labels += [("a", n), ("b", n)]
    n_harm = len(cols)
    for n in range(n_max + 3):
        for p in range(n + 2, n_max + 3, 2):
            cols.append(rho**p * np.cos(n * theta))
            labels.append(("rc", p, n))
            if n:
                cols.append(rho**p * np.sin(n * theta))
                labels.append(("rs", p, n))
    if log_terms:
        lr = np.log(rho)
        for p in range(2, n_max + 3):
            for n in range(p + 1):
                cols.append(rho**p * lr * np.cos(n * theta))
                labels.append(("lc", p, n))
                if n:
                    cols.append(rho**p * lr * np.sin(n * theta))
                    labels.append(("ls", p, n))
    return np.array(cols).T, labels, n_harm


def fit_harmonic_expansion(
    sampler: Callable[[np.ndarray, np.ndarray], np.ndarray],
    corner: Corner | tuple[float, float],
    radii: Sequence[float] | None = None,
    n_max: int = 3,
    n_theta: int = 64,
    log_terms: bool = False,
    noise_floor: float = 1e-8,
) -> HarmonicExpansion:
    """Fit the harmonic part of ``sampler(x1, x2)`` on circles around ``corner``.

    A pure harmonic fit cannot separate the ``O(r^2)`` non-harmonic part from
    the constant, so remainder columns are fitted alongside and then
    discarded from the reported expansion.
    """
    x0, y0 = corner.position if isinstance(corner, Corner) else corner
    radii = np.asarray(DEFAULT_RADII if radii is None else radii, dtype=float)
    if radii.size < 2 or np.any(radii <= 0):
        raise ValueError("need at least two positive radii")
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    R, T = np.meshgrid(radii, theta, indexing="ij")
    u = np.asarray(sampler(x0 + R * np.cos(T), y0 + R * np.sin(T)), dtype=complex).ravel()

    scale = radii.max()
    A, labels, n_harm = _design((R / scale).ravel(), T.ravel(), n_max, log_terms)
    norms = np.linalg.norm(A, axis=0)
    As = A / norms
    cond = float(np.linalg.cond(As))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedFit(f"design matrix condition {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    cs, *_ = np.linalg.lstsq(As, u, rcond=None)
    c = cs / norms

    a = np.zeros(n_max + 1, dtype=complex)
    b = np.zeros(n_max + 1, dtype=complex)
    remainder = {}
    for coef, lab in zip(c, labels):
        if lab[0] in ("a", "b"):
            n = lab[1]
            (a if lab[0] == "a" else b)[n] = coef / scale**n
        else:
            remainder[f"{lab[0]}_{lab[1]}_{lab[2]}"] = complex(coef)

    harmonic = (A[:, :n_harm] @ c[:n_harm]).reshape(R.shape)
    resid = u.reshape(R.shape) - harmonic
    rnorm = np.sqrt(np.mean(np.abs(resid) ** 2, axis=1))
    misfit = float(np.sqrt(np.mean(np.abs(u - A @ c) ** 2)))

    mag = np.abs(a) + np.abs(b)
    floor = max(noise_floor * mag.max(), 1e-12) if mag.max() > 0 else np.inf
    above = np.nonzero(mag > floor)[0]
    m = int(above[0]) if above.size else -1

    if np.all(rnorm > 0):
        slope = float(np.polyfit(np.log(radii), np.log(rnorm), 1)[0])
    else:
        slope = float("inf")  # residual vanishes identically
    return HarmonicExpansion((x0, y0), a, b, radii, rnorm, slope, m, misfit, cond, remainder)


def _segments(profile: RectangularProfile) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    t = list(profile.transitions)
    h = list(profile.heights)
    segs = []
    for j in range(len(t)):
        end = t[j + 1] if j + 1 < len(t) else t[0] + PERIOD
        segs.append(((t[j], h[j]), (end, h[j])))
        segs.append(((t[j], h[j - 1]), (t[j], h[j])))
    out = []
    for shift in (-PERIOD, 0.0, PERIOD):
        out += [((p[0] + shift, p[1]), (q[0] + shift, q[1])) for p, q in segs]
    return out


def _point_segment_distance(x, y, p, q) -> float:
    px, py = p
    dx, dy = q[0] - px, q[1] - py
    L2 = dx * dx + dy * dy
    s = 0.0 if L2 == 0 else min(1.0, max(0.0, ((x - px) * dx + (y - py) * dy) / L2))
    return math.hypot(x - px - s * dx, y - py - s * dy)


def corner_clearance(profile: RectangularProfile, corner: Corner) -> float:
    """Distance from ``corner`` to the nearest piece of the profile not touching it."""
    x, y = corner.position
    d = math.inf
    for p, q in _segments(profile):
        if _point_segment_distance(x, y, p, q) < 1e-12:
            continue
        d = min(d, _point_segment_distance(x, y, p, q))
    return d


def default_radii(profile: RectangularProfile, corner: Corner, margin: float = 0.05) -> np.ndarray:
    """Geometric radii ``0.05 * 1.5^j`` shrunk so the largest circle keeps ``margin`` clearance."""
    base = np.asarray(DEFAULT_RADII)
    room = corner_clearance(profile, corner) - margin
    if room <= 0:
        raise IllConditionedFit("corner too close to the rest of the profile for a local fit")
    return base * min(1.0, room / base.max())


# ---------------------------------------------------------------------------
# special sector solutions
# ---------------------------------------------------------------------------


def _cos_half_pi(j: int) -> int:
    return (1, 0, -1, 0)[j % 4]


def _sin_half_pi(j: int) -> int:
    return (0, 1, 0, -1)[j % 4]


@dataclass
class SectorSpecialSolution:
    """``u = r^(k+2) f^{+-}(theta) + C * log-term`` on the half disk.

    ``Sigma-`` is ``0 < theta < pi/2``, ``Sigma+`` is ``pi/2 < theta < pi``;
    the boundary condition is imposed on ``theta = 0`` and ``theta = pi``.
    ``f^{+-} = a cos(m theta) + b sin(m theta) + h^{+-}`` with ``m = k + 2``
    and ``h`` the particular solution vanishing to first order at 0.
    """

    k: int
    c_plus: complex
    c_minus: complex
    p_cos: np.ndarray
    p_sin: np.ndarray
    bc: str
    a_plus: complex
    b_plus: complex
    a_minus: complex
    b_minus: complex
    C: complex

    @property
    def m(self) -> int:
        return self.k + 2

    def p(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        j = np.arange(len(self.p_cos))
        return np.cos(np.multiply.outer(theta, j)) @ self.p_cos + np.sin(np.multiply.outer(theta, j)) @ self.p_sin

    def h(self, side: str, theta, deriv: int = 0) -> np.ndarray:
        """Particular solution and its first two derivatives, in closed form."""
        c = self.c_plus if side == "+" else self.c_minus
        theta = np.asarray(theta, dtype=float)
        m = self.m
        out = np.zeros(theta.shape, dtype=complex)
        for j, (ac, as_) in enumerate(zip(self.p_cos, self.p_sin)):
            d = m * m - j * j
            if ac:
                # (cos j t - cos m t) / d
                out = out + c * ac * (_dtrig(np.cos, j, theta, deriv) - _dtrig(np.cos, m, theta, deriv)) / d
            if as_:
                out = out + c * as_ * (_dtrig(np.sin, j, theta, deriv) - (j / m) * _dtrig(np.sin, m, theta, deriv)) / d
        return out

    def f(self, side: str, theta, deriv: int = 0) -> np.ndarray:
        a, b = (self.a_plus, self.b_plus) if side == "+" else (self.a_minus, self.b_minus)
        m = self.m
        return a * _dtrig(np.cos, m, theta, deriv) + b * _dtrig(np.sin, m, theta, deriv) + self.h(side, theta, deriv)

    def log_term(self, r, theta) -> np.ndarray:
        m = self.m
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        if self.bc == "dirichlet":
            return r**m * (np.log(r) * np.sin(m * theta) + theta * np.cos(m * theta))
        return r**m * (np.log(r) * np.cos(m * theta) - theta * np.sin(m * theta))

    def __call__(self, r, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        side_plus = theta > np.pi / 2
        f = np.where(side_plus, self.f("+", theta), self.f("-", theta))
        return np.asarray(r, dtype=float) ** self.m * f + self.C * self.log_term(r, theta)

    def polynomial_coefficients(self, side: str) -> list[complex]:
        """Coefficients ``c_i`` of ``x1^(m-i) x2^i`` for ``r^m f(theta)``.

        Only defined when every frequency in ``f`` has the parity of ``m``.
        """
        m = self.m
        freq = {m: (self.a_plus, self.b_plus) if side == "+" else (self.a_minus, self.b_minus)}
        cpm = self.c_plus if side == "+" else self.c_minus
        for j, (ac, as_) in enumerate(zip(self.p_cos, self.p_sin)):
            d = m * m - j * j
            ca, sa = freq.get(j, (0, 0))
            freq[j] = (ca + cpm * ac / d, sa + cpm * as_ / d)
            ma, mb = freq[m]
            freq[m] = (ma - cpm * ac / d, mb - cpm * as_ * (j / m) / d)
        coeffs = np.zeros(m + 1, dtype=complex)
        for j, (ca, sa) in freq.items():
            if ca == 0 and sa == 0:
                continue
            if (m - j) % 2:
                raise ValueError("frequency parity does not match the degree; not a polynomial")
            # r^m cos/sin(j t) = (x1^2 + x2^2)^((m-j)/2) * Re/Im (x1 + i x2)^j
            zpow = np.array([math.comb(j, i) * 1j**i for i in range(j + 1)])
            s = (m - j) // 2
            rpow = np.zeros(2 * s + 1)
            for i in range(s + 1):
                rpow[2 * i] = math.comb(s, i)
            poly = np.convolve(rpow, ca * zpow.real + sa * zpow.imag)
            coeffs[: poly.size] += poly
        return [complex(v) for v in coeffs]

    def residuals(self, n_theta: int = 200) -> dict[str, float]:
        """Max residuals of the angular system on a grid in each sector."""
        m = self.m
        tm = np.linspace(0, np.pi / 2, n_theta)
        tp = np.linspace(np.pi / 2, np.pi, n_theta)
        pde = max(
            np.max(np.abs(self.f(s, t, 2) + m * m * self.f(s, t) - c * self.p(t)))
            for s, t, c in (("-", tm, self.c_minus), ("+", tp, self.c_plus))
        )
        half = np.array([np.pi / 2])
        trans = max(abs(self.f("+", half)[0] - self.f("-", half)[0]), abs(self.f("+", half, 1)[0] - self.f("-", half, 1)[0]))
        zero, pi = np.array([0.0]), np.array([np.pi])
        sgn = (-1) ** self.k
        if self.bc == "dirichlet":
            bnd = max(abs(self.f("-", zero)[0]), abs(self.f("+", pi)[0] + sgn * self.C * np.pi))
        else:
            bnd = max(abs(self.f("-", zero, 1)[0]), abs(self.f("+", pi, 1)[0] - sgn * self.C * m * np.pi))
        return {"pde": float(pde), "transmission": float(trans), "boundary": float(bnd)}


def _dtrig(fn, j: int, theta, deriv: int):
    theta = np.asarray(theta, dtype=float)
    if deriv == 0:
        return fn(j * theta)
    if deriv == 1:
        return j * np.cos(j * theta) if fn is np.sin else -j * np.sin(j * theta)
    if deriv == 2:
        return -(j**2) * fn(j * theta)
    raise ValueError("deriv must be 0, 1 or 2")


def build_special_solution(
    k: int,
    c_plus: complex,
    c_minus: complex,
    p_cos: Sequence[complex] = (1.0,),
    p_sin: Sequence[complex] = (),
    bc: str = "dirichlet",
) -> SectorSpecialSolution:
    """Explicit special solution for ``Laplace u = c^{+-} r^k p(theta)``.

    ``p(theta) = sum_j p_cos[j] cos(j theta) + p_sin[j] sin(j theta)`` with
    ``j <= k``. Gauge: ``b- = 0`` (Dirichlet) or ``a- = 0`` (Neumann).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    bc = bc.lower()
    if bc not in ("dirichlet", "neumann"):
        raise ValueError("bc must be 'dirichlet' or 'neumann'")
    deg = max(len(p_cos), len(p_sin)) - 1
    if deg > k:
        raise ValueError(f"p has degree {deg} > k = {k}")
    pc = np.zeros(k + 1, dtype=complex)
    ps = np.zeros(k + 1, dtype=complex)
    pc[: len(p_cos)] = p_cos
    ps[: len(p_sin)] = p_sin
    ps[0] = 0.0
    m = k + 2
    sol = SectorSpecialSolution(k, complex(c_plus), complex(c_minus), pc, ps, bc, 0j, 0j, 0j, 0j, 0j)

    # h and h' at pi/2 and pi from exact trig values at multiples of pi/2
    def h_at(side, q, deriv):
        c = sol.c_plus if side == "+" else sol.c_minus
        tot = 0j
        for j in range(k + 1):
            d = m * m - j * j
            if pc[j]:
                tot += c * pc[j] * (_trig_exact("cos", j, q, deriv) - _trig_exact("cos", m, q, deriv)) / d
            if ps[j]:
                tot += c * ps[j] * (_trig_exact("sin", j, q, deriv) - Fraction(j, m) * _trig_exact("sin", m, q, deriv)) / d
        return tot

    p1 = h_at("-", 1, 0) - h_at("+", 1, 0)
    p2 = (h_at("-", 1, 1) - h_at("+", 1, 1)) / m
    cm, sm = _cos_half_pi(m), _sin_half_pi(m)
    da = p1 * cm - p2 * sm
    db = p1 * sm + p2 * cm
    sgn = (-1) ** k
    if bc == "dirichlet":
        sol.a_minus, sol.b_minus = 0j, 0j
        sol.a_plus, sol.b_plus = da, db
        sol.C = -(sgn * sol.a_plus + h_at("+", 2, 0)) / (sgn * math.pi)
    else:
        sol.a_minus, sol.b_minus = 0j, 0j
        sol.a_plus, sol.b_plus = da, db
        sol.C = (m * sgn * sol.b_plus + h_at("+", 2, 1)) / (sgn * m * math.pi)
    return sol


def _trig_exact(kind: str, j: int, q: int, deriv: int):
    """``d^deriv/dtheta^deriv`` of ``cos/sin(j theta)`` at ``theta = q pi / 2``, exactly."""
    c, s = _cos_half_pi(j * q), _sin_half_pi(j * q)
    if kind == "cos":
        vals = (c, -j * s, -j * j * c)
    else:
        vals = (s, j * c, -j * j * s)
    return vals[deriv]


# ---------------------------------------------------------------------------
# integer determinant system
# ---------------------------------------------------------------------------


def entry_A(j: int, n: int) -> int:
    return (n - j - 1) * (n - j) * (n - j + 1) * (n - j + 2)


def entry_B(j: int, n: int) -> int:
    return 2 * (j + 2) * (j + 1) * (n - j - 1) * (n - j)


def entry_C(j: int, n: int) -> int:
    return (j + 4) * (j + 3) * (j + 2) * (j + 1)


def dmatrix(n: int) -> list[list[int]]:
    """The ``(n-1) x (n-1)`` pentadiagonal-pattern matrix acting on ``a_2..a_n``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    size = n - 1
    D = [[0] * size for _ in range(size)]
    for j in range(size):
        D[j][j] = entry_B(j, n)
        if j + 2 < size:
            D[j][j + 2] = entry_C(j, n)
        if j - 2 >= 0:
            D[j][j - 2] = entry_A(j, n)
    return D


def bareiss_determinant(M: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    A = [row[:] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1


@dataclass(frozen=True)
class DeterminantReport:
    n: int
    determinant: int
    nonzero: bool
    identity_residuals: tuple[int, ...]
    """``B_j B_{j-2} - A_j C_{j-2}`` minus the closed-form product, for j = 2..n-2."""

    @property
    def identity_holds(self) -> bool:
        return all(r == 0 for r in self.identity_residuals)


def product_identity_residual(j: int, n: int) -> int:
    lhs = entry_B(j, n) * entry_B(j - 2, n) - entry_A(j, n) * entry_C(j - 2, n)
    rhs = 3 * (j - 1) * j * (j + 1) * (j + 2) * (n - j - 1) * (n - j) * (n - j + 1) * (n - j + 2)
    return lhs - rhs


def dmatrix_determinant(n: int) -> DeterminantReport:
    det = bareiss_determinant(dmatrix(n))
    res = tuple(product_identity_residual(j, n) for j in range(2, n - 1))
    return DeterminantReport(n, det, det != 0, res)


# ---------------------------------------------------------------------------
# polynomial sector problem
# ---------------------------------------------------------------------------


def laplacian_coefficients(coeffs: Sequence, degree: int) -> list:
    """Laplacian of ``sum_j c_j x1^(d-j) x2^j`` as coefficients of degree ``d - 2``."""
    d = degree
    c = list(coeffs)
    return [(d - j) * (d - j - 1) * c[j] + (j + 2) * (j + 1) * c[j + 2] for j in range(d - 1)]


@dataclass
class PolynomialSectorReport:
    n: int
    q_plus: list[Fraction]
    q_minus: list[Fraction]
    difference_system_nonsingular: bool

    @property
    def equal(self) -> bool:
        return self.q_plus == self.q_minus


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact solve of a consistent (possibly overdetermined) system of full column rank."""
    rows, cols = len(A), len(A[0])
    M = [list(map(Fraction, A[i])) + [Fraction(b[i])] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][-1] != 0 for i in range(r, rows)):
        raise ValueError("inconsistent system")
    if len(piv_cols) != cols:
        raise ValueError("system is rank deficient")
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv_cols):
        x[c] = M[i][-1]
    return x


def polynomial_sector_solve(n: int, H: Sequence) -> PolynomialSectorReport:
    """Solve ``Laplace q+- = H`` with matching Cauchy data, in exact rationals.

    ``H[j]`` is the coefficient of ``x1^(n-j) x2^j``; ``q`` coefficients are
    returned the same way for degree ``n + 2``. Unknowns ``a^+, a^-`` are
    solved jointly from: the Laplacian equations, ``q = d2 q = 0`` on
    ``x2 = 0`` and continuity of ``q`` and ``d1 q`` across ``x1 = 0``.
    """
    if n < 0 or len(H) != n + 1:
        raise ValueError("H must have n + 1 coefficients")
    Hf = [Fraction(h) for h in H]
    if n >= 2 and any(v != 0 for v in laplacian_coefficients(Hf, n)):
        raise NotHarmonic("Laplacian of H is not identically zero")
    d = n + 2
    size = d + 1  # coefficients per side
    rows, rhs = [], []

    def row():
        return [Fraction(0)] * (2 * size)

    for side in (0, 1):
        off = side * size
        for j in range(n + 1):
            r = row()
            r[off + j] = Fraction((d - j) * (d - j - 1))
            r[off + j + 2] = Fraction((j + 2) * (j + 1))
            rows.append(r)
            rhs.append(Hf[j])
        for j in (0, 1):  # q and d2 q vanish on x2 = 0
            r = row()
            r[off + j] = Fraction(1)
            rows.append(r)
            rhs.append(Fraction(0))
    for j in (d, d - 1):  # q and d1 q continuous on x1 = 0
        r = row()
        r[j], r[size + j] = Fraction(1), Fraction(-1)
        rows.append(r)
        rhs.append(Fraction(0))
    sol = _solve_exact(rows, rhs)
    nonsingular = True if n < 2 else dmatrix_determinant(n).nonzero
    return PolynomialSectorReport(n, sol[:size], sol[size:], nonsingular)


def random_harmonic_polynomial(n: int, rng: np.random.Generator, bound: int = 9) -> list[Fraction]:
    """Integer combination of ``Re (x1 + i x2)^n`` and ``Im (x1 + i x2)^n``."""
    p, q = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
    coeffs = []
    for j in range(n + 1):
        z = math.comb(n, j) * 1j**j
        coeffs.append(Fraction(round(p * z.real + q * z.imag)))
    return coeffs


def lemma_battery(n_max: int = 20, seed: int = 0) -> dict:
    """All exact corner-lemma checks in one report."""
    rng = np.random.default_rng(seed)
    det = {n: dmatrix_determinant(n) for n in range(2, n_max + 1)}
    poly = {n: polynomial_sector_solve(n, random_harmonic_polynomial(n, rng)) for n in range(0, min(n_max, 10) + 1)}
    special = []
    for _ in range(100):
        k = int(rng.integers(0, 7))
        draw = build_special_solution(
            k,
            complex(*rng.normal(size=2)),
            complex(*rng.normal(size=2)),
            rng.normal(size=k + 1),
            rng.normal(size=k + 1),
            "dirichlet" if rng.random() < 0.5 else "neumann",
        )
        special.append(max(draw.residuals().values()))
    zero = build_special_solution(2, 0, 0, (1.0, 0.5, 0.25), (0.0, 1.0, -1.0))
    report = {
        "B0_2": entry_B(0, 2),
        "det_D2": det[3].determinant if 3 in det else None,
        "determinants_nonzero": all(r.nonzero for r in det.values()),
        "product_identity_exact": all(r.identity_holds for r in det.values()),
        "polynomial_equal": all(r.equal for r in poly.values()),
        "special_max_residual": float(max(special)),
        "special_zero_data_C": abs(zero.C),
    }
    report["all_pass"] = bool(
        report["B0_2"] == 8
        and report["det_D2"] == 576
        and report["determinants_nonzero"]
        and report["product_identity_exact"]
        and report["polynomial_equal"]
        and report["special_max_residual"] < 1e-12
        and report["special_zero_data_C"] == 0
    )
    return report

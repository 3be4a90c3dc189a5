"""Rayleigh-order bookkeeping: vertical wavenumbers, DtN maps and efficiencies."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# |beta_n| below this fraction of k marks a grazing (Wood anomaly) order
GRAZING_TOL = 1e-10


class NotLossless(ValueError):
    """Efficiencies only balance for real wavenumbers."""


@dataclass(frozen=True)
class PlaneWaveIncidence:
    k1: float
    theta: float

    def __post_init__(self):
        if not self.k1 > 0:
            raise ValueError("k1 must be positive")
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise ValueError("theta must lie in (-pi/2, pi/2)")

    @property
    def alpha(self) -> float:
        return self.k1 * math.sin(self.theta)

    @property
    def beta(self) -> float:
        return self.k1 * math.cos(self.theta)


@dataclass(frozen=True)
class MediumPair:
    """Upper/lower wavenumbers and the transmission constant.

    ``lam`` weights the normal derivative from below: ``du+/dnu = lam du-/dnu``.
    ``lam = 1`` is TE polarisation.
    """

    k1: float
    k2: complex
    lam: float = 1.0

    def __post_init__(self):
        if not self.k1 > 0:
            raise ValueError("k1 must be positive")
        if not self.lam > 0:
            raise ValueError("lam must be positive")

    @property
    def lossless(self) -> bool:
        return complex(self.k2).imag == 0.0

    def regime(self) -> str:
        """Which uniqueness condition holds: ``"i"``, ``"ii"`` or ``"outside"``.

        Outside both branches the solver still runs; results are just not
        covered by the known well-posedness argument.
        """
        k2 = complex(self.k2)
        if k2.imag != 0.0:
            return "lossy"
        k1s, k2s = self.k1**2, k2.real**2
        if self.lam >= 1 and k1s > self.lam * k2s:
            return "i"
        if self.lam <= 1 and k1s < self.lam * k2s:
            return "ii"
        return "outside"


def orders(N: int) -> np.ndarray:
    return np.arange(-N, N + 1)


def beta_exponent(n, k, alpha: float) -> complex | np.ndarray:
    """Vertical wavenumber of order n: sqrt(k^2 - a^2) or i*sqrt(a^2 - k^2).

    Uses the two-branch definition directly rather than a complex square
    root of ``k^2 - a^2``, so the result never jumps across a branch cut.
    For complex ``k`` (lossy medium) the root with ``Im >= 0`` is returned.
    """
    a = np.asarray(n, dtype=float) + alpha
    if np.iscomplexobj(k) and np.imag(k) != 0:
        b = np.sqrt(complex(k) ** 2 - a.astype(complex) ** 2)
        b = np.where(b.imag < 0, -b, b)
        return b if b.ndim else complex(b)
    k = float(np.real(k))
    prop = np.abs(a) <= k
    d = np.abs(k * k - a * a)
    b = np.where(prop, np.sqrt(d) + 0j, 1j * np.sqrt(d))
    return b if b.ndim else complex(b)


def grazing_mask(beta: np.ndarray, k) -> np.ndarray:
    return np.abs(beta) < GRAZING_TOL * abs(k)


def dtn_apply(side: str, coeffs: np.ndarray, k, alpha: float) -> np.ndarray:
    """Fourier coefficients of ``T^{side} f`` for ``f_n`` given on n = -N..N.

    ``T^+`` multiplies by ``i beta_n`` and ``T^-`` by ``-i beta_n``; grazing
    orders contribute zero.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    N = (coeffs.shape[-1] - 1) // 2
    beta = beta_exponent(orders(N), k, alpha)
    beta = np.where(grazing_mask(beta, k), 0.0, beta)
    sign = _side_sign(side)
    return sign * 1j * beta * coeffs


def dtn_quadratic_forms(side: str, coeffs: np.ndarray, k, alpha: float) -> tuple[float, float]:
    """Real and imaginary part of ``<(+-)T^{+-} f, f>``.

    The maps are diagonal, so the form is ``sum |f_n|^2 * mult_n``; summing
    that way keeps each term's sign exact instead of relying on cancellation
    in ``conj(f) * (T f)``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    mult = _side_sign(side) * dtn_apply(side, np.ones_like(coeffs), k, alpha)
    w = np.abs(coeffs) ** 2
    return float(np.sum(w * mult.real)), float(np.sum(w * mult.imag))


def _side_sign(side: str) -> int:
    if side in ("+", "upper", "up"):
        return 1
    if side in ("-", "lower", "down"):
        return -1
    raise ValueError(f"unknown side {side!r}")


@dataclass
class RayleighSpectrum:
    """Rayleigh coefficients ``A_n^+`` (reflected) and ``A_n^-`` (transmitted)."""

    N: int
    alpha: float
    k1: float
    k2: complex
    A_plus: np.ndarray
    A_minus: np.ndarray

    @property
    def orders(self) -> np.ndarray:
        return orders(self.N)

    @property
    def alpha_n(self) -> np.ndarray:
        return self.orders + self.alpha

    @property
    def beta_plus(self) -> np.ndarray:
        return beta_exponent(self.orders, self.k1, self.alpha)

    @property
    def beta_minus(self) -> np.ndarray:
        return beta_exponent(self.orders, self.k2, self.alpha)

    @property
    def propagating_plus(self) -> np.ndarray:
        return np.abs(self.alpha_n) <= self.k1

    @property
    def propagating_minus(self) -> np.ndarray:
        return np.abs(self.alpha_n) <= np.real(self.k2)

    def coefficient(self, side: str, n: int) -> complex:
        arr = self.A_plus if _side_sign(side) > 0 else self.A_minus
        return complex(arr[n + self.N])


@dataclass
class EfficiencyTable:
    rows: list[dict] = field(default_factory=list)
    defect: float = float("nan")
    total: float = float("nan")

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "side", "beta", "abs_A_sq", "efficiency"])
        for r in self.rows:
            w.writerow([r["n"], r["side"], repr(r["beta"]), repr(r["abs_A_sq"]), repr(r["efficiency"])])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def summary(self) -> dict:
        return {"defect": self.defect, "total": self.total}

    def summary_json(self) -> str:
        return json.dumps(self.summary())

    def side(self, side: str) -> dict[int, float]:
        return {r["n"]: r["efficiency"] for r in self.rows if r["side"] == side}


def efficiencies(spec: RayleighSpectrum, inc: PlaneWaveIncidence, media: MediumPair) -> EfficiencyTable:
    """Flux-normalised efficiencies of the propagating orders.

    Reflected: ``beta_n^+ / beta |A_n^+|^2``; transmitted:
    ``lam beta_n^- / beta |A_n^-|^2``. Grazing orders carry no flux.
    """
    if not media.lossless:
        raise NotLossless("efficiencies need a real lower wavenumber")
    table = EfficiencyTable()
    beta0 = inc.beta
    total = 0.0
    for side, beta, amps, prop, weight in (
        ("+", spec.beta_plus, spec.A_plus, spec.propagating_plus, 1.0),
        ("-", spec.beta_minus, spec.A_minus, spec.propagating_minus, media.lam),
    ):
        k = spec.k1 if side == "+" else spec.k2
        graze = grazing_mask(beta, k)
        for n, b, a, p, g in zip(spec.orders, beta, amps, prop, graze):
            if not p:
                continue
            e = 0.0 if g else weight * b.real / beta0 * abs(a) ** 2
            total += e
            table.rows.append(
                {"n": int(n), "side": side, "beta": float(b.real), "abs_A_sq": float(abs(a) ** 2), "efficiency": float(e)}
            )
    table.total = float(total)
    table.defect = float(abs(1.0 - total))
    return table

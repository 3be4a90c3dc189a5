"""Rectangular grating profiles, their corners and lamellar layers.

A profile is the 2*pi-periodic graph ``x2 = h(x1)`` of a step function. It is
stored as ``(transitions, heights)``: ``h(x1) = heights[j]`` on
``[transitions[j], transitions[j+1])``, with the last interval wrapping around
to ``transitions[0] + 2*pi``. Everything below the graph is the lower medium,
everything above it the upper medium.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

PERIOD = 2.0 * math.pi
# transitions closer than this are treated as one (zero-width teeth)
ABSCISSA_TOL = 1e-12 * PERIOD


def wrap_abscissa(x) -> np.ndarray:
    """``x mod 2*pi`` in ``[0, 2*pi)``; ``np.mod`` alone can return ``2*pi`` for tiny negatives."""
    t = np.mod(np.asarray(x, dtype=float), PERIOD)
    return np.where(t >= PERIOD, 0.0, t)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of every profile invariant check.

    ``valid`` is what the forward solvers require. ``invertible`` additionally
    demands a non-constant profile, which the inversion search needs.
    """

    checks: dict[str, bool]

    @property
    def valid(self) -> bool:
        return all(v for k, v in self.checks.items() if k != "non_constant")

    @property
    def invertible(self) -> bool:
        return self.valid and self.checks["non_constant"]

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def __bool__(self) -> bool:
        return self.valid


class InvalidProfile(ValueError):
    """Raised when a solver is handed a profile that fails validation."""


@dataclass(frozen=True)
class RectangularProfile:
    transitions: tuple[float, ...]
    heights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(float(t) for t in self.transitions))
        object.__setattr__(self, "heights", tuple(float(h) for h in self.heights))

    @classmethod
    def flat(cls, height: float = 0.0) -> "RectangularProfile":
        return cls((0.0,), (height,))

    @classmethod
    def from_unsorted(cls, transitions: Sequence[float], heights: Sequence[float]) -> "RectangularProfile":
        """Build a profile from transitions in any order, wrapped into [0, 2*pi).

        Each height stays attached to its transition. Transitions closer than
        ``ABSCISSA_TOL`` are merged (the later one wins) and adjacent equal
        heights are fused, so the result is always valid.
        """
        t = wrap_abscissa(transitions)
        h = np.asarray(heights, dtype=float)
        if t.shape != h.shape or t.size == 0:
            raise ValueError("transitions and heights must be non-empty and of equal length")
        order = np.argsort(t, kind="stable")
        t, h = list(t[order]), list(h[order])
        kt, kh = [t[0]], [h[0]]
        for tj, hj in zip(t[1:], h[1:]):
            if tj - kt[-1] <= ABSCISSA_TOL:
                kh[-1] = hj
            else:
                kt.append(tj)
                kh.append(hj)
        if len(kt) > 1 and kt[0] + PERIOD - kt[-1] <= ABSCISSA_TOL:
            kt.pop()
            kh[0] = kh.pop()
        # fuse equal neighbours (cyclically)
        keep = [j for j in range(len(kh)) if len(kh) == 1 or kh[j] != kh[j - 1]]
        if not keep:
            return cls.flat(kh[0])
        return cls(tuple(kt[j] for j in keep), tuple(kh[j] for j in keep))

    # -- basic properties ---------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.transitions)

    @property
    def top(self) -> float:
        """Highest level of the profile (``Lambda^+``)."""
        return max(self.heights)

    @property
    def bottom(self) -> float:
        """Lowest level of the profile (``Lambda^-``)."""
        return min(self.heights)

    @property
    def is_flat(self) -> bool:
        return len(set(self.heights)) == 1

    @property
    def levels(self) -> np.ndarray:
        return np.unique(np.asarray(self.heights))

    def height_at(self, x1) -> np.ndarray:
        x1 = wrap_abscissa(x1)
        t = np.asarray(self.transitions)
        h = np.asarray(self.heights)
        idx = np.searchsorted(t, x1, side="right") - 1
        # idx == -1 means before the first transition: last segment wrapped
        return h[idx]

    def in_lower(self, x1, x2) -> np.ndarray:
        """True where ``(x1, x2)`` lies strictly below the graph."""
        return np.asarray(x2) < self.height_at(x1)

    def shifted(self, delta: float) -> "RectangularProfile":
        return RectangularProfile.from_unsorted(np.asarray(self.transitions) + delta, self.heights)

    def mirrored(self) -> "RectangularProfile":
        """Reflection ``x1 -> -x1`` (mod 2*pi)."""
        if self.is_flat:
            return self
        t = np.asarray(self.transitions)
        h = np.asarray(self.heights)
        # segment [t_j, t_{j+1}) maps to (-t_{j+1}, -t_j]
        return RectangularProfile.from_unsorted(-np.roll(t, -1), h)

    # -- persistence ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "transitions": list(self.transitions),
            "heights": list(self.heights),
            "units": {"transitions": "rad", "heights": "length"},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RectangularProfile":
        prof = cls(data["transitions"], data["heights"])
        if _is_binary(prof):
            return BinaryProfile(prof.transitions, prof.heights)
        return prof

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def from_json(cls, path: str | Path) -> "RectangularProfile":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _is_binary(p: RectangularProfile) -> bool:
    h = p.heights
    return (
        len(h) >= 2
        and len(h) % 2 == 0
        and len(set(h)) == 2
        and all(h[j] == h[j % 2] for j in range(len(h)))
    )


@dataclass(frozen=True)
class BinaryProfile(RectangularProfile):
    """Profile with two alternating levels; ``heights[0]`` starts at ``transitions[0]``."""

    def __post_init__(self):
        super().__post_init__()
        if not _is_binary(self):
            raise InvalidProfile("a binary profile needs an even number of alternating heights")

    @classmethod
    def from_levels(cls, transitions: Sequence[float], first: float, second: float) -> "BinaryProfile":
        m = len(transitions)
        return cls(tuple(transitions), tuple(first if j % 2 == 0 else second for j in range(m)))

    @property
    def first_level(self) -> float:
        return self.heights[0]

    @property
    def second_level(self) -> float:
        return self.heights[1]


def validate_profile(p: RectangularProfile) -> ValidationReport:
    t = np.asarray(p.transitions, dtype=float)
    h = np.asarray(p.heights, dtype=float)
    lengths = t.size == h.size and t.size >= 1
    finite = bool(np.all(np.isfinite(t)) and np.all(np.isfinite(h))) if lengths else False
    in_period = bool(np.all((t >= 0.0) & (t < PERIOD))) if finite else False
    increasing = bool(np.all(np.diff(t) > ABSCISSA_TOL)) if finite else False
    if lengths and t.size > 1:
        distinct = bool(np.all(h != np.roll(h, -1)))
        if finite:
            # the wrap-around gap must not be a zero-width tooth either
            increasing = increasing and (t[0] + PERIOD - t[-1] > ABSCISSA_TOL)
    else:
        distinct = lengths
    return ValidationReport(
        {
            "lengths_match": lengths,
            "finite": finite,
            "in_period": in_period,
            "increasing": increasing,
            "distinct_adjacent": distinct,
            "non_constant": lengths and len(set(p.heights)) > 1,
        }
    )


def require_valid(p: RectangularProfile) -> None:
    report = validate_profile(p)
    if not report.valid:
        raise InvalidProfile(f"profile rejected: failed {', '.join(report.failures())}")


@dataclass(frozen=True)
class Corner:
    x1: float
    x2: float
    interior_angle: float
    """Opening angle of the lower domain at the corner: pi/2 or 3*pi/2."""
    transition_index: int

    @property
    def position(self) -> tuple[float, float]:
        return (self.x1, self.x2)


def corners_of(p: RectangularProfile) -> list[Corner]:
    """Two corners per transition: at the foot and at the head of its riser."""
    require_valid(p)
    if p.is_flat:
        return []
    out = []
    for j, t in enumerate(p.transitions):
        left, right = p.heights[j - 1], p.heights[j]
        lo, hi = min(left, right), max(left, right)
        # Lower domain fills three quadrants at the foot, one at the head.
        out.append(Corner(t, lo, 1.5 * math.pi, j))
        out.append(Corner(t, hi, 0.5 * math.pi, j))
    return out


@dataclass(frozen=True)
class LamellarLayer:
    """Horizontal slab ``z_bottom <= x2 <= z_top`` with x1-dependent material.

    ``starts`` are segment starts in [0, 2*pi) beginning with 0; ``lower[i]``
    says whether segment i belongs to the lower medium.
    """

    z_bottom: float
    z_top: float
    starts: tuple[float, ...]
    lower: tuple[bool, ...]

    @property
    def thickness(self) -> float:
        return self.z_top - self.z_bottom

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.lower)) == 1

    @property
    def ends(self) -> tuple[float, ...]:
        return self.starts[1:] + (PERIOD,)

    def lower_fraction(self) -> float:
        s = np.asarray(self.starts)
        e = np.asarray(self.ends)
        return float(np.sum((e - s)[np.asarray(self.lower)]) / PERIOD)

    def indicator(self, x1) -> np.ndarray:
        x1 = wrap_abscissa(x1)
        idx = np.searchsorted(np.asarray(self.starts), x1, side="right") - 1
        return np.asarray(self.lower)[idx]

    @classmethod
    def homogeneous(cls, z_bottom: float, z_top: float, lower: bool) -> "LamellarLayer":
        return cls(z_bottom, z_top, (0.0,), (lower,))


def layer_decomposition(p: RectangularProfile) -> list[LamellarLayer]:
    """Slabs between consecutive distinct levels, listed top to bottom."""
    require_valid(p)
    levels = p.levels
    layers = []
    t = np.asarray(p.transitions)
    # segment boundaries within [0, 2*pi); if t[0] > 0 the last segment wraps
    bounds = np.concatenate(([0.0], t[t > 0.0]))
    for zb, zt in zip(levels[-2::-1], levels[:0:-1]):
        mid = 0.5 * (zb + zt)
        flags = [bool(f) for f in (p.height_at(bounds) > mid)]
        starts, lower = [bounds[0]], [flags[0]]
        for s, f in zip(bounds[1:], flags[1:]):
            if f != lower[-1]:
                starts.append(float(s))
                lower.append(f)
        layers.append(LamellarLayer(float(zb), float(zt), tuple(starts), tuple(lower)))
    return layers

"""Bounce maps over a plate profile.

Two maps act on impact states ``(t, v)``:

``gs_step``
    the explicit map ``t1 = t0 + 2 v0 / g``, ``v1 = v0 + 2 zeta(t1)``.
``pf_step``
    the physical bounce map. The next impact is the first time the free
    flight parabola meets the plate; the outgoing velocity is the elastic
    reflection off the moving plate.

Both work in exact mode (Fractions) and float mode.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .construction import PlateProfile
from .numeric import EXACT, FLOAT, QuadraticPiece, first_root_after, mode_of

GS = "GS"
PF = "PF"

DEFAULT_TOLERANCE = 1e-12


class NoImpactError(RuntimeError):
    """The ball never comes back to the plate within the search horizon."""


class GrazingWarning(RuntimeWarning):
    pass


class StepError(RuntimeError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"step {index} failed: {cause}")
        self.index = index
        self.cause = cause


class PhaseState(NamedTuple):
    t: Fraction
    v: Fraction


@dataclass
class Trajectory:
    map_kind: str
    states: list
    profile: Optional[PlateProfile] = field(default=None, repr=False)
    residuals: list = field(default_factory=list)

    @property
    def mode(self) -> str:
        return mode_of(*(x for s in self.states for x in s))

    @property
    def times(self) -> list:
        return [s.t for s in self.states]

    @property
    def velocities(self) -> list:
        return [s.v for s in self.states]

    def __len__(self):
        return len(self.states)


def _g(profile: PlateProfile, mode: str):
    return float(profile.g) if mode == FLOAT else profile.g


def _reduce(t):
    return t - math.floor(t)


def plate_height(profile: PlateProfile, t):
    mode_of(t)
    return profile.f_at(_reduce(t))


def plate_velocity(profile: PlateProfile, t):
    mode_of(t)
    return profile.zeta_at(_reduce(t))


def divided_difference(profile: PlateProfile, t1, t0):
    mode_of(t1, t0)
    if t1 == t0:
        raise ZeroDivisionError("divided difference over a degenerate interval")
    return (plate_height(profile, t1) - plate_height(profile, t0)) / (t1 - t0)


def gs_step(profile: PlateProfile, state: PhaseState) -> PhaseState:
    t0, v0 = state
    mode = mode_of(t0, v0)
    t1 = t0 + 2 * v0 / _g(profile, mode)
    return PhaseState(t1, v0 + 2 * plate_velocity(profile, t1))


def _gap_pieces(profile: PlateProfile, t0, v0, mode):
    """Yield ``(s_lo, s_hi, A, B, C, first)`` for the gap ``ball - plate`` in ``s = t - t0``.

    Pieces are produced in time order starting at the one containing ``t0``.
    """
    g = _g(profile, mode)
    pieces = profile.float_pieces if mode == FLOAT else profile.f_pieces
    period = math.floor(t0)
    i = profile.piece_index(t0 - period)
    f0 = pieces[i](t0 - period)
    first = True
    while True:
        p = pieces[i]
        d = t0 - period  # piece variable u = t - period = s + d
        A = -(g / 2 + p.a)
        if first:
            # the ball leaves the plate at s = 0, so C vanishes identically
            B = v0 - p.derivative(d)
            C = 0 * f0
        else:
            B = v0 - (2 * p.a * d + p.b)
            C = f0 - p(d)
        yield period + p.lo - t0, period + p.hi - t0, A, B, C, first
        first = False
        i += 1
        if i == len(pieces):
            i = 0
            period += 1


def pf_step(profile: PlateProfile, state: PhaseState, tolerance: float = DEFAULT_TOLERANCE,
            return_residual: bool = False):
    """Advance one bounce of the physical map.

    The search stops at twice the still-plate flight time and raises
    :class:`NoImpactError` if no impact was found by then. In exact mode the
    impact time must be rational (it is on constructed orbits) or
    :class:`~bounce_escape.numeric.InexactRootError` is raised.

    With ``return_residual`` the result is ``(state, residual)`` where the
    residual is the defect of the implicit time relation.
    """
    t0, v0 = state
    mode = mode_of(t0, v0)
    g = _g(profile, mode)
    if v0 <= 0:
        raise NoImpactError(f"non-positive velocity {v0}")
    horizon = 4 * v0 / g
    # float: a fresh departure can show up as a spurious root at s ~ 1e-16
    s_min = 0 if mode == EXACT else tolerance * max(1.0, abs(t0))
    for s_lo, s_hi, A, B, C, first in _gap_pieces(profile, t0, v0, mode):
        if s_lo > horizon:
            break
        if s_hi <= 0:
            continue
        lo = max(s_lo, 0 * s_lo)
        slack = 0.0 if mode == EXACT else tolerance * max(1.0, abs(t0) + abs(s_hi))
        s = first_root_after(QuadraticPiece(A, B, C, lo, s_hi), s_min, slack=slack) if lo < s_hi else None
        if s is None:
            continue
        disc = B * B - 4 * A * C
        if mode == FLOAT and abs(disc) <= tolerance * max(B * B, abs(4 * A * C), 1.0):
            warnings.warn(f"grazing impact near t={t0 + s}", GrazingWarning, stacklevel=2)
        t1 = t0 + s
        dd = divided_difference(profile, t1, t0)
        v1 = v0 + 2 * plate_velocity(profile, t1) - 2 * dd
        result = PhaseState(t1, v1)
        if return_residual:
            residual = t1 - (t0 + 2 * v0 / g - 2 * dd / g)
            return result, abs(residual)
        return result
    raise NoImpactError(f"no impact within {horizon} after t={t0} (v={v0})")


def orbit(profile: PlateProfile, initial: PhaseState, kind: str = GS, steps: int = 1,
          tolerance: float = DEFAULT_TOLERANCE) -> Trajectory:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    kind = kind.upper()
    if kind not in (GS, PF):
        raise ValueError(f"unknown map kind {kind!r}")
    state = PhaseState(*initial)
    mode = mode_of(*state)
    traj = Trajectory(kind, [state], profile)
    for n in range(steps):
        try:
            if kind == GS:
                state = gs_step(profile, state)
            else:
                state, res = pf_step(profile, state, tolerance, return_residual=True)
                if mode == FLOAT:
                    traj.residuals.append(res)
        except Exception as exc:
            raise StepError(n, exc) from exc
        traj.states.append(state)
    return traj

"""Build the escaping impact sequence and the plate profile that realizes it.

Everything here runs on :class:`fractions.Fraction`; floats only appear
once a caller converts for simulation.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .numeric import QuadraticPiece, exact, mode_of


class ParameterError(ValueError):
    pass


class ConstructionError(RuntimeError):
    """An internal consistency assertion of the construction failed."""


class CollisionError(ValueError):
    """Two impact times land on the same circle position with different targets."""


@dataclass(frozen=True)
class Parameters:
    g: Fraction
    delta: Fraction
    w_scale: int = 1

    def __post_init__(self):
        object.__setattr__(self, "g", exact(self.g))
        object.__setattr__(self, "delta", exact(self.delta))
        if isinstance(self.w_scale, bool) or not isinstance(self.w_scale, int) or self.w_scale < 1:
            raise ParameterError(f"w_scale must be a positive integer, got {self.w_scale!r}")
        if self.g <= 0:
            raise ParameterError("g must be positive")
        if not 0 < self.delta < self.g / 4:
            raise ParameterError(
                f"delta must satisfy 0 < delta < g/4 (g={self.g}, delta={self.delta})"
            )


class Constants(NamedTuple):
    N: int
    V: int
    W: int
    eta: Fraction


class Breakpoint(NamedTuple):
    tau: Fraction
    D: Fraction


class ZetaNode(NamedTuple):
    tau: Fraction
    value: Fraction


@dataclass(frozen=True)
class EscapeBlueprint:
    params: Parameters
    N: int
    V: int
    W: int
    eta: Fraction
    t: tuple
    D: tuple
    v: tuple

    @property
    def initial_state(self):
        from .dynamics import PhaseState

        return PhaseState(self.t[0], self.v[0])


@dataclass(frozen=True)
class PlateProfile:
    """A 1-periodic C^1 plate motion ``f`` with piecewise linear derivative ``zeta``.

    ``g`` rides along because the bounce maps need it and take only the
    profile and a state.
    """

    g: Fraction
    delta: Fraction
    breakpoints: tuple
    zeta_nodes: tuple
    f_pieces: tuple = field(repr=False)

    @cached_property
    def node_taus(self) -> list:
        return [n.tau for n in self.zeta_nodes]

    @cached_property
    def piece_los(self) -> list:
        return [p.lo for p in self.f_pieces]

    @cached_property
    def float_nodes(self) -> tuple:
        return tuple((float(n.tau), float(n.value)) for n in self.zeta_nodes)

    @cached_property
    def float_pieces(self) -> tuple:
        return tuple(p.as_float() for p in self.f_pieces)

    @cached_property
    def height_range(self) -> tuple:
        """Exact ``(min f, max f)`` over one period."""
        values = [p(p.lo) for p in self.f_pieces] + [self.f_pieces[-1](self.f_pieces[-1].hi)]
        for p in self.f_pieces:
            if p.a != 0 and p.lo < -p.b / (2 * p.a) < p.hi:
                values.append(p(-p.b / (2 * p.a)))
        return min(values), max(values)

    def piece_index(self, tau) -> int:
        """Index of the piece whose domain contains ``tau`` in [0, 1)."""
        i = bisect.bisect_right(self.piece_los, tau) - 1
        return min(max(i, 0), len(self.f_pieces) - 1)

    def zeta_at(self, tau):
        """Linear interpolation of the derivative at a reduced position."""
        nodes = self.float_nodes if isinstance(tau, float) else self.zeta_nodes
        i = bisect.bisect_right(self.node_taus, tau) - 1
        i = min(max(i, 0), len(nodes) - 2)
        (x0, z0), (x1, z1) = nodes[i], nodes[i + 1]
        return z0 + (z1 - z0) * (tau - x0) / (x1 - x0)

    def f_at(self, tau):
        i = self.piece_index(tau)
        pieces = self.float_pieces if isinstance(tau, float) else self.f_pieces
        return pieces[i](tau)


def derive_constants(params: Parameters) -> Constants:
    ratio = params.g / (4 * params.delta)
    # smallest integer >= g/(4 delta); keeps 0 < eta <= delta
    N = math.ceil(ratio)
    eta = params.g / 4 - (N - 1) * params.delta
    W = params.w_scale * N * N * (N - 1)
    if not (N > 1 and 0 < eta <= params.delta):
        raise ConstructionError(f"N={N}, eta={eta} out of range")
    return Constants(N=N, V=1, W=W, eta=eta)


def build_impact_times(constants: Constants, params: Parameters) -> tuple:
    N, W = constants.N, constants.W
    g, delta = params.g, params.delta
    step = 4 * delta / g
    t1 = Fraction(W, N) - (N - 1) * 2 * delta / g
    if t1 <= 0:
        raise ConstructionError(f"t1 = {t1} is not positive")
    times = tuple(Fraction(n * (n - 1), 2) * step + n * t1 for n in range(N + 1))
    if times[-1] - times[0] != W:
        raise ConstructionError(f"t_N - t_0 = {times[-1] - times[0]} != W = {W}")
    return times


def assign_targets(constants: Constants, times: Sequence[Fraction], g: Fraction) -> tuple:
    """Derivative targets ``D`` and post-impact velocities ``v`` along the blueprint."""
    N = constants.N
    g = exact(g)
    D = [constants.eta]
    D += [g / 4 * (times[k + 1] - 2 * times[k] + times[k - 1]) for k in range(1, N)]
    D.append(constants.eta)
    v = [g * (times[1] - times[0]) / 2]
    for n in range(N):
        v.append(v[-1] + 2 * D[n + 1])
    if v[-1] != v[0] + g / 2 * constants.V:
        raise ConstructionError(f"velocity gain {v[-1] - v[0]} != g/2 * V")
    return tuple(D), tuple(v)


def reduce_mod_one(times: Sequence[Fraction], targets: Sequence[Fraction]) -> tuple:
    """Fold impact times onto the circle, merging identical (position, target) pairs."""
    if len(times) != len(targets) or len(times) < 2:
        raise ValueError("times and targets must have the same length >= 2")
    mode_of(*times, *targets)
    if times[0] != 0:
        raise ValueError("t_0 must be 0")
    if Fraction(times[-1]).denominator != 1:
        raise ValueError(f"t_N = {times[-1]} is not an integer")
    if targets[0] != targets[-1]:
        raise ValueError("D_0 and D_N must agree")

    reduced = [(t - math.floor(t), k) for k, t in enumerate(times[:-1])]
    reduced.append((Fraction(1), len(times) - 1))
    reduced.sort(key=lambda item: item[0])

    out: list[Breakpoint] = []
    origin: list[int] = []
    for tau, k in reduced:
        D = Fraction(targets[k])
        if out and out[-1].tau == tau:
            if out[-1].D != D:
                raise CollisionError(
                    f"t_{origin[-1]} and t_{k} both reduce to {tau} "
                    f"with targets {out[-1].D} != {D}"
                )
            continue
        out.append(Breakpoint(Fraction(tau), D))
        origin.append(k)
    return tuple(out)


def interval_shape(delta: Fraction, width: Fraction, D_left: Fraction, D_right: Fraction) -> tuple:
    """Ramp width ``L`` and dip depth ``C`` giving zero net area on one interval.

    ``L`` is half of the largest admissible ramp width, so ``C < delta`` holds
    with room to spare.
    """
    L = delta * width / (2 * (D_left + D_right + 2 * delta))
    C = L * (D_left + D_right) / (width - 2 * L)
    return L, C


def build_zeta(breakpoints: Sequence[Breakpoint], delta) -> tuple:
    delta = exact(delta)
    if len(breakpoints) < 2:
        raise ValueError("need at least two breakpoints")
    for (a, Da), (b, Db) in zip(breakpoints, breakpoints[1:]):
        if not a < b:
            raise ValueError(f"breakpoints not strictly increasing at {a}, {b}")
    for bp in breakpoints:
        if not 0 <= bp.D <= delta:
            raise ValueError(f"target {bp.D} at {bp.tau} outside [0, delta]")

    nodes = [ZetaNode(breakpoints[0].tau, breakpoints[0].D)]
    for (a, Da), (b, Db) in zip(breakpoints, breakpoints[1:]):
        width = b - a
        L, C = interval_shape(delta, width, Da, Db)
        nodes += [
            ZetaNode(a + L, Fraction(0)),
            ZetaNode((a + b) / 2, -C),
            ZetaNode(b - L, Fraction(0)),
            ZetaNode(b, Db),
        ]
    return tuple(nodes)


def integrate_zeta(nodes: Sequence[ZetaNode]) -> tuple:
    """Antiderivative of the piecewise linear ``zeta`` with value 0 at the first node."""
    pieces = []
    F0 = Fraction(0)
    for (x0, z0), (x1, z1) in zip(nodes, nodes[1:]):
        k = (z1 - z0) / (x1 - x0)
        # F0 + z0 (t - x0) + k/2 (t - x0)^2 expanded in t
        a = k / 2
        b = z0 - k * x0
        c = F0 - z0 * x0 + a * x0 * x0
        piece = QuadraticPiece(a, b, c, x0, x1)
        pieces.append(piece)
        F0 = piece(x1)
    return tuple(pieces)


def build_profile(g, delta, breakpoints: Sequence[Breakpoint]) -> PlateProfile:
    nodes = build_zeta(breakpoints, delta)
    return PlateProfile(
        g=exact(g),
        delta=exact(delta),
        breakpoints=tuple(breakpoints),
        zeta_nodes=nodes,
        f_pieces=integrate_zeta(nodes),
    )


def zero_profile(g, delta=Fraction(1)) -> PlateProfile:
    """A motionless plate."""
    return build_profile(g, delta, [Breakpoint(Fraction(0), Fraction(0)), Breakpoint(Fraction(1), Fraction(0))])


def construct(params: Parameters) -> tuple:
    """Run the full pipeline and return ``(blueprint, profile)``."""
    constants = derive_constants(params)
    times = build_impact_times(constants, params)
    D, v = assign_targets(constants, times, params.g)
    breakpoints = reduce_mod_one(times, D)
    blueprint = EscapeBlueprint(params, constants.N, constants.V, constants.W, constants.eta, times, D, v)
    return blueprint, build_profile(params.g, params.delta, breakpoints)

"""Machine checks for the escape construction.

Each ``check_*`` function returns a :class:`CheckReport`. Failing items carry
both sides of the violated relation in ``witness`` so a report alone is
enough to reproduce the failure by hand.

Integer claims are only decided in exact mode. Passing floats to an
integrality check raises :class:`~bounce_escape.numeric.ModeError`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .construction import EscapeBlueprint, PlateProfile
from .dynamics import Trajectory, plate_height, plate_velocity
from .numeric import EXACT, FLOAT, ModeError, float_roots, format_scalar, has_root_in_open, mode_of

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class CheckItem:
    id: str
    claim: str
    status: str
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS


@dataclass
class CheckReport:
    items: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    overall = ok

    def add(self, id, claim, passed, **witness):
        self.items.append(CheckItem(id, claim, PASS if passed else FAIL, witness))
        return passed

    def error(self, id, claim, message):
        self.items.append(CheckItem(id, claim, ERROR, {"message": message}))

    def extend(self, other: "CheckReport") -> "CheckReport":
        self.items.extend(other.items)
        return self

    def __getitem__(self, id) -> CheckItem:
        for item in self.items:
            if item.id == id:
                return item
        raise KeyError(id)

    def failed(self) -> list:
        return [item.id for item in self.items if not item.ok]

    def to_dict(self) -> dict:
        return {
            "overall": PASS if self.ok else FAIL,
            "items": [
                {"id": i.id, "claim": i.claim, "status": i.status, "witness": _jsonable(i.witness)}
                for i in self.items
            ],
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary(self) -> str:
        lines = []
        for i in self.items:
            line = f"{i.status.upper():5} {i.id}"
            if not i.ok:
                line += "  " + json.dumps(_jsonable(i.witness))
            lines.append(line)
        lines.append(f"overall: {PASS if self.ok else FAIL}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction) or (isinstance(x, float) and math.isfinite(x)):
        return format_scalar(x)
    return x


def _require_exact(*values):
    if mode_of(*values) != EXACT:
        raise ModeError("this check only runs on exact scalars")


def _positive_integer(x) -> bool:
    return Fraction(x).denominator == 1 and x > 0


def _second_differences(t):
    return [t[k + 1] - 2 * t[k] + t[k - 1] for k in range(1, len(t) - 1)]


def check_lemma1(times: Sequence, zeta: Sequence, g, N: int, W, V) -> CheckReport:
    """Integer conditions on ``t_1 - t_0`` and the derivative sum over one cycle.

    ``times`` holds ``t_0, ..., t_{N-1}`` (more is ignored) and ``zeta``
    the derivative values at those times.
    """
    _require_exact(*times[:N], *zeta[:N], g, W, V)
    rep = CheckReport()
    cond1 = N * (times[1] - times[0]) + Fraction(4) / g * sum((N - k) * zeta[k] for k in range(1, N))
    rep.add("lemma1.cond1", "N(t1-t0) + (4/g) sum_{k=1}^{N-1} (N-k) zeta(t_k) = W, W a positive integer",
            cond1 == W and _positive_integer(W), lhs=cond1, rhs=W)
    cond2 = Fraction(4) / g * sum(zeta[k] for k in range(N))
    rep.add("lemma1.cond2", "(4/g) sum_{k=0}^{N-1} zeta(t_k) = V, V a positive integer",
            cond2 == V and _positive_integer(V), lhs=cond2, rhs=V)
    return rep


def check_prop1(profile: PlateProfile, times: Sequence, g=None, W=None, V=None) -> CheckReport:
    """Four sufficient conditions for an escaping orbit of the physical map.

    ``W`` and ``V`` default to the values implied by ``times``; passing them
    additionally pins those values.
    """
    g = profile.g if g is None else g
    _require_exact(*times, g)
    t = list(times)
    N = len(t) - 1
    rep = CheckReport()

    span = t[N] - t[0]
    rep.add("prop1.cond1", "t_N - t_0 = W, a positive integer",
            _positive_integer(span) and (W is None or span == W), lhs=span, rhs=span if W is None else W)

    gain = Fraction(4) / g * plate_velocity(profile, t[0]) + (t[N] - t[N - 1]) - (t[1] - t[0])
    rep.add("prop1.cond2", "(4/g) zeta(t_0) + (t_N - t_{N-1}) - (t_1 - t_0) = V, a positive integer",
            _positive_integer(gain) and (V is None or gain == V), lhs=gain, rhs=gain if V is None else V)

    heights = [plate_height(profile, t[k]) for k in range(N)]
    bad = [k for k in range(N) if heights[k] != heights[0]]
    rep.add("prop1.cond3", "f(t_0) = f(t_1) = ... = f(t_{N-1})", not bad,
            **({"index": bad[0], "lhs": heights[bad[0]], "rhs": heights[0]} if bad else {}))

    bad4 = None
    for k in range(1, N):
        lhs = plate_velocity(profile, t[k])
        rhs = g / 4 * (t[k + 1] - 2 * t[k] + t[k - 1])
        if lhs != rhs:
            bad4 = {"index": k, "lhs": lhs, "rhs": rhs}
            break
    rep.add("prop1.cond4", "zeta(t_k) = (g/4)(t_{k+1} - 2 t_k + t_{k-1}) for 1 <= k <= N-1",
            bad4 is None, **(bad4 or {}))
    return rep


def check_lemma3(times: Sequence, g, delta, eta, W=None, V=None) -> CheckReport:
    """Conditions on the bare time sequence before any plate exists."""
    _require_exact(*times, g, delta, eta)
    t = list(times)
    N = len(t) - 1
    rep = CheckReport()

    span = t[N] - t[0]
    rep.add("lemma3.cond1", "t_N - t_0 = W, a positive integer",
            _positive_integer(span) and (W is None or span == W), lhs=span, rhs=span if W is None else W)

    gain = Fraction(4) / g * eta + (t[N] - t[N - 1]) - (t[1] - t[0])
    eta_ok = 0 < eta <= delta
    rep.add("lemma3.cond2", "(4/g) eta + (t_N - t_{N-1}) - (t_1 - t_0) = V, a positive integer, 0 < eta <= delta",
            eta_ok and _positive_integer(gain) and (V is None or gain == V),
            lhs=gain, rhs=gain if V is None else V, eta=eta, delta=delta)

    bad = None
    for k, T in enumerate(_second_differences(t), start=1):
        if g / 4 * T != delta:
            bad = {"index": k, "lhs": g / 4 * T, "rhs": delta}
            break
    rep.add("lemma3.cond3", "(g/4)(t_{n+1} - 2 t_n + t_{n-1}) = delta for 1 <= n <= N-1",
            bad is None, **(bad or {}))
    return rep


def _area(nodes, lo, hi):
    """Trapezoid sum of the piecewise linear nodes between positions ``lo`` and ``hi``."""
    total = Fraction(0)
    for (x0, z0), (x1, z1) in zip(nodes, nodes[1:]):
        if x0 >= lo and x1 <= hi:
            total += (z0 + z1) * (x1 - x0) / 2
    return total


def check_profile(profile: PlateProfile, blueprint: Optional[EscapeBlueprint] = None) -> CheckReport:
    """Properties the plate must have for the blueprint orbit to be realized."""
    nodes = profile.zeta_nodes
    _require_exact(*(x for n in nodes for x in n), *(x for b in profile.breakpoints for x in b))
    rep = CheckReport()
    bps = profile.breakpoints

    heights = [profile.f_pieces[-1](bp.tau) if bp.tau == 1 else profile.f_at(bp.tau) for bp in bps]
    bad = [i for i, h in enumerate(heights) if h != 0]
    rep.add("profile.heights", "f vanishes at every breakpoint", not bad,
            **({"tau": bps[bad[0]].tau, "lhs": heights[bad[0]], "rhs": 0} if bad else {}))

    targets = [(bp.tau, profile.zeta_at(bp.tau) if bp.tau < 1 else nodes[-1].value, bp.D) for bp in bps]
    if blueprint is not None:
        for k, t in enumerate(blueprint.t[:-1]):
            targets.append((t, plate_velocity(profile, t), blueprint.D[k]))
    bad = next((x for x in targets if x[1] != x[2]), None)
    rep.add("profile.targets", "zeta equals the assigned target at every breakpoint", bad is None,
            **({"tau": bad[0], "lhs": bad[1], "rhs": bad[2]} if bad else {}))

    peak = max(nodes, key=lambda n: abs(n.value))
    rep.add("profile.bound", "max |zeta| <= delta", abs(peak.value) <= profile.delta,
            tau=peak.tau, lhs=abs(peak.value), rhs=profile.delta)

    bad = None
    for a, b in zip(bps, bps[1:]):
        area = _area(nodes, a.tau, b.tau)
        if area != 0:
            bad = {"interval": [a.tau, b.tau], "lhs": area, "rhs": 0}
            break
    rep.add("profile.area", "signed area of zeta between consecutive breakpoints is 0", bad is None, **(bad or {}))

    rep.add("profile.periodic_zeta", "zeta(0) = zeta(1)", nodes[0].value == nodes[-1].value,
            lhs=nodes[0].value, rhs=nodes[-1].value)
    f0, f1 = profile.f_pieces[0](Fraction(0)), profile.f_pieces[-1](Fraction(1))
    rep.add("profile.periodic_f", "f(1) = f(0)", f0 == f1, lhs=f1, rhs=f0)
    return rep


def check_escape(trajectory: Trajectory, N: int, V, g, mode: Optional[str] = None,
                 tolerance: float = 1e-6) -> CheckReport:
    """Velocity gain ``(g/2) V`` and integer time shift after every ``N`` bounces.

    Float mode compares against ``tolerance`` and never claims integrality;
    the ``tshift`` witness then holds the distance to the nearest integer.
    """
    states = trajectory.states
    if len(states) < 2 * N + 1:
        raise ValueError(f"trajectory has {len(states)} states, need at least {2 * N + 1}")
    data_mode = trajectory.mode
    mode = mode or data_mode
    if mode != data_mode:
        raise ModeError(f"requested {mode} check on a {data_mode} trajectory")
    gain = (float(g) if mode == FLOAT else Fraction(g)) / 2 * V
    rep = CheckReport()
    sigma = []
    worst_v = worst_t = None
    for n in range(len(states) - N):
        dv = states[n + N].v - states[n].v
        dt = states[n + N].t - states[n].t
        if mode == EXACT:
            if worst_v is None and dv != gain:
                worst_v = {"index": n, "lhs": dv, "rhs": gain}
            if Fraction(dt).denominator == 1 and dt >= 0:
                sigma.append(int(dt))
            elif worst_t is None:
                worst_t = {"index": n, "lhs": dt}
        else:
            err = abs(dv - gain)
            if err > tolerance and worst_v is None:
                worst_v = {"index": n, "lhs": dv, "rhs": gain, "error": err}
            nearest = round(dt)
            sigma.append(nearest)
            if (abs(dt - nearest) > tolerance or nearest < 0) and worst_t is None:
                worst_t = {"index": n, "lhs": dt, "distance": abs(dt - nearest)}
    rep.add("escape.vgain", "v_{n+N} - v_n = (g/2) V for every n", worst_v is None, **(worst_v or {}))
    rep.add("escape.tshift", "t_{n+N} - t_n is a non-negative integer for every n", worst_t is None,
            sigma=sigma, **(worst_t or {}))
    return rep


def identity_oracles(times: Sequence, tolerance: float = 1e-9) -> CheckReport:
    """Two telescoping identities for second differences; they hold for any sequence."""
    t = list(times)
    N = len(t) - 1
    if N < 1:
        raise ValueError("need at least two points")
    mode = mode_of(*t)
    T = _second_differences(t)
    lhs1 = sum(T, 0 * t[0])
    rhs1 = (t[N] - t[N - 1]) - (t[1] - t[0])
    lhs2 = sum(((N - k) * T[k - 1] for k in range(1, N)), 0 * t[0])
    rhs2 = (N - 1) * t[0] - N * t[1] + t[N]

    def same(a, b):
        if mode == EXACT:
            return a == b
        return math.isclose(a, b, rel_tol=tolerance, abs_tol=tolerance)

    rep = CheckReport()
    rep.add("identity.fds", "sum_{k=1}^{N-1} T_k = (t_N - t_{N-1}) - (t_1 - t_0)", same(lhs1, rhs1), lhs=lhs1, rhs=rhs1)
    rep.add("identity.tfe", "sum_{k=1}^{N-1} (N-k) T_k = (N-1) t_0 - N t_1 + t_N", same(lhs2, rhs2), lhs=lhs2, rhs=rhs2)
    return rep


def _clear_window(profile: PlateProfile, g, f0, v0, S):
    """Rational ``(s1, s2)`` inside ``(0, S)`` on which the ball clears the highest plate point.

    On ``[s1, s2]`` the bound ``f0 + v0 s - g s^2/2 > max f`` is verified
    exactly at both ends; concavity extends it to the whole window, so only
    the two short stretches next to the impacts need a piecewise scan.
    """
    c = f0 - profile.height_range[1]
    if isinstance(S, float):
        c = float(c)
    roots = float_roots(-float(g) / 2, float(v0), float(c))
    if not roots or len(roots) < 2:
        return None
    r1, r2 = roots
    pad = 1e-6 * (r2 - r1)
    s1, s2 = r1 + pad, r2 - pad
    if isinstance(S, Fraction):
        s1, s2 = Fraction(s1), Fraction(s2)
    if not 0 < s1 < s2 < S:
        return None

    def q(s):
        return c + v0 * s - g / 2 * s * s

    if q(s1) > 0 and q(s2) > 0:
        return s1, s2
    return None


def _scan(profile: PlateProfile, g, t0, v0, f0, S, start, stop, eps):
    """Piecewise certificate on ``(start, stop)``; returns the first offending time or None."""
    pieces = profile.float_pieces if isinstance(t0, float) else profile.f_pieces
    exact = not isinstance(t0, float)
    origin = t0 + start
    period = math.floor(origin)
    i = profile.piece_index(origin - period)
    while True:
        p = pieces[i]
        s_lo, s_hi = period + p.lo - t0, period + p.hi - t0
        lo, hi = max(s_lo, start), min(s_hi, stop)
        if lo >= stop:
            return None
        if lo < hi:
            d = t0 - period
            A = -(g / 2 + p.a)
            B = v0 - (2 * p.a * d + p.b)
            C = f0 - p(d)
            if lo == 0:
                C = 0 * C
            if not exact:
                # the flight ends on a root; keep rounding from reporting it as interior
                if lo == 0:
                    lo = eps
                if hi == S:
                    hi = S - eps
            mid = (lo + hi) / 2
            if has_root_in_open(A, B, C, lo, hi) or (A * mid + B) * mid + C <= 0:
                return t0 + lo
            if 0 < hi < S and (A * hi + B) * hi + C <= 0:
                return t0 + hi
        i += 1
        if i == len(pieces):
            i = 0
            period += 1


def _flight_is_clear(profile: PlateProfile, g, t0, v0, t1):
    """First point of ``(t0, t1)`` where the ball is not strictly above the plate, or None.

    Works piece by piece on the gap ``ball - plate`` as a quadratic in
    ``s = t - t0``: no root inside the piece's part of the flight plus a
    positive value at one interior point and at each interior piece boundary.
    The high middle of a long flight is certified in one step by
    :func:`_clear_window`.
    """
    f0 = plate_height(profile, t0)
    S = t1 - t0
    exact = mode_of(t0, v0, t1) == EXACT
    eps = 0 if exact else 1e-9 * max(1.0, abs(S))
    zero = 0 * S
    window = _clear_window(profile, g, f0, v0, S)
    if window is None:
        return _scan(profile, g, t0, v0, f0, S, zero, S, eps)
    s1, s2 = window
    return (_scan(profile, g, t0, v0, f0, S, zero, s1, eps)
            or _scan(profile, g, t0, v0, f0, S, s2, S, eps))


def check_feasibility(profile: PlateProfile, trajectory: Trajectory, g=None,
                      flights: Optional[int] = None) -> CheckReport:
    """Certify that the ball flies strictly above the plate between impacts.

    In exact mode the certificate is a proof; in float mode the same sign
    analysis is done in floating point and the report says so.
    """
    mode = trajectory.mode
    g = profile.g if g is None else g
    g = float(g) if mode == FLOAT else Fraction(g)
    states = trajectory.states
    count = len(states) - 1 if flights is None else min(flights, len(states) - 1)
    rep = CheckReport()
    bad_v = bad_dep = bad_gap = bad_imp = None
    for n in range(count):
        (t0, v0), (t1, _) = states[n], states[n + 1]
        if v0 <= 0 and bad_v is None:
            bad_v = {"index": n, "lhs": v0, "rhs": 0}
        z0 = plate_velocity(profile, t0)
        if v0 <= z0 and bad_dep is None:
            bad_dep = {"index": n, "lhs": v0, "rhs": z0}
        if bad_gap is None and t1 > t0:
            where = _flight_is_clear(profile, g, t0, v0, t1)
            if where is not None:
                bad_gap = {"index": n, "t": where}
        if bad_imp is None:
            s = t1 - t0
            gap = plate_height(profile, t0) + v0 * s - g / 2 * s * s - plate_height(profile, t1)
            ok = gap == 0 if mode == EXACT else abs(gap) <= 1e-9 * max(1.0, abs(v0 * s))
            if not ok:
                bad_imp = {"index": n, "lhs": gap, "rhs": 0}
    rep.add("feasibility.velocity", "v_n > 0", bad_v is None, **(bad_v or {}))
    rep.add("feasibility.departure", "v_n > zeta(t_n): the ball leaves the plate", bad_dep is None, **(bad_dep or {}))
    rep.add("feasibility.gap", "ball strictly above the plate between consecutive impacts", bad_gap is None,
            **(bad_gap or {"flights": count, "certified": mode == EXACT}))
    rep.add("feasibility.impact", "ball meets the plate at the next impact time", bad_imp is None, **(bad_imp or {}))
    return rep


def verify_instance(blueprint: EscapeBlueprint, profile: PlateProfile, periods: int = 50) -> CheckReport:
    """Run the whole battery on a constructed (or loaded) instance."""
    from .dynamics import GS, orbit

    g, N, V = blueprint.params.g, blueprint.N, blueprint.V
    t = blueprint.t
    rep = CheckReport()
    rep.extend(identity_oracles(t))
    rep.extend(check_lemma3(t, g, blueprint.params.delta, blueprint.eta, blueprint.W, V))
    zeta = [plate_velocity(profile, x) for x in t]
    rep.extend(check_lemma1(t, zeta, g, N, blueprint.W, V))
    rep.extend(check_prop1(profile, t, g, blueprint.W, V))
    rep.extend(check_profile(profile, blueprint))
    traj = orbit(profile, blueprint.initial_state, GS, steps=periods * N)
    rep.extend(check_escape(traj, N, V, g, EXACT))
    rep.extend(check_feasibility(profile, traj, flights=N))
    return rep

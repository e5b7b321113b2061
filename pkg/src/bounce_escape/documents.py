"""Profile documents (JSON) and trajectory tables (CSV).

Exact scalars are written as ``"p/q"`` strings so a document survives a
round trip bit for bit. Floats only appear in float trajectories.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import IO, Union

from .construction import (
    Breakpoint,
    EscapeBlueprint,
    Parameters,
    PlateProfile,
    ZetaNode,
)
from .dynamics import PhaseState, Trajectory
from .numeric import EXACT, FLOAT, QuadraticPiece, format_scalar, parse_scalar

PROFILE_KEYS = ("g", "delta", "w_scale", "N", "V", "W", "eta", "t", "D", "v",
                "breakpoints", "zeta_nodes", "f_pieces")
TRAJECTORY_HEADER = ("n", "t", "v", "t_mod_1", "v_mod_half_g", "residual")


class DocumentError(ValueError):
    """A profile or trajectory file is malformed."""


def profile_document(blueprint: EscapeBlueprint, profile: PlateProfile) -> dict:
    s = format_scalar
    p = blueprint.params
    return {
        "g": s(p.g),
        "delta": s(p.delta),
        "w_scale": p.w_scale,
        "N": blueprint.N,
        "V": blueprint.V,
        "W": blueprint.W,
        "eta": s(blueprint.eta),
        "t": [s(x) for x in blueprint.t],
        "D": [s(x) for x in blueprint.D],
        "v": [s(x) for x in blueprint.v],
        "breakpoints": [{"tau": s(b.tau), "D": s(b.D)} for b in profile.breakpoints],
        "zeta_nodes": [{"tau": s(n.tau), "value": s(n.value)} for n in profile.zeta_nodes],
        "f_pieces": [
            {"lo": s(q.lo), "hi": s(q.hi), "a": s(q.a), "b": s(q.b), "c": s(q.c)}
            for q in profile.f_pieces
        ],
    }


def dumps_profile(blueprint: EscapeBlueprint, profile: PlateProfile) -> str:
    return json.dumps(profile_document(blueprint, profile), indent=2) + "\n"


def _rational(x, where):
    if not isinstance(x, str):
        raise DocumentError(f"{where}: expected a 'p/q' string, got {x!r}")
    try:
        return parse_scalar(x, EXACT)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _integer(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer, got {x!r}")
    return x


def parse_profile(doc: dict) -> tuple:
    """Rebuild ``(blueprint, profile)`` from a document without re-deriving anything.

    Values are taken verbatim, so a hand-edited document is loaded as edited
    and left for the checks to judge.
    """
    if not isinstance(doc, dict):
        raise DocumentError("profile document must be a JSON object")
    missing = [k for k in PROFILE_KEYS if k not in doc]
    if missing:
        raise DocumentError(f"missing keys: {', '.join(missing)}")
    try:
        g = _rational(doc["g"], "g")
        delta = _rational(doc["delta"], "delta")
        params = Parameters(g, delta, _integer(doc["w_scale"], "w_scale"))
        blueprint = EscapeBlueprint(
            params,
            _integer(doc["N"], "N"),
            _integer(doc["V"], "V"),
            _integer(doc["W"], "W"),
            _rational(doc["eta"], "eta"),
            tuple(_rational(x, "t") for x in doc["t"]),
            tuple(_rational(x, "D") for x in doc["D"]),
            tuple(_rational(x, "v") for x in doc["v"]),
        )
        if not len(blueprint.t) == len(blueprint.D) == len(blueprint.v) == blueprint.N + 1:
            raise DocumentError("t, D and v must each have N + 1 entries")
        breakpoints = tuple(
            Breakpoint(_rational(b["tau"], "breakpoints.tau"), _rational(b["D"], "breakpoints.D"))
            for b in doc["breakpoints"]
        )
        nodes = tuple(
            ZetaNode(_rational(n["tau"], "zeta_nodes.tau"), _rational(n["value"], "zeta_nodes.value"))
            for n in doc["zeta_nodes"]
        )
        pieces = tuple(
            QuadraticPiece(*(_rational(q[k], f"f_pieces.{k}") for k in ("a", "b", "c", "lo", "hi")))
            for q in doc["f_pieces"]
        )
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed entry: {exc!r}") from None
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from None
    if len(breakpoints) < 2 or len(nodes) < 2 or not pieces:
        raise DocumentError("profile needs at least two breakpoints, two nodes and one piece")
    if nodes[0].tau != 0 or nodes[-1].tau != 1 or pieces[0].lo != 0 or pieces[-1].hi != 1:
        raise DocumentError("zeta nodes and f pieces must cover [0, 1]")
    if any(a.tau >= b.tau for a, b in zip(nodes, nodes[1:])):
        raise DocumentError("zeta node positions must increase strictly")
    if len(pieces) != len(nodes) - 1 or any(q.lo != n.tau for q, n in zip(pieces, nodes)):
        raise DocumentError("f pieces must follow the zeta nodes")
    profile = PlateProfile(g, delta, breakpoints, nodes, pieces)
    return blueprint, profile


def loads_profile(text: str) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    return parse_profile(doc)


def load_profile(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        return loads_profile(fh.read())


def save_profile(path, blueprint: EscapeBlueprint, profile: PlateProfile) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_profile(blueprint, profile))


def write_trajectory(trajectory: Trajectory, fh: IO[str], g) -> None:
    """Write one row per state. Residuals are only present for float physical-map runs."""
    mode = trajectory.mode
    half_g = float(g) / 2 if mode == FLOAT else Fraction(g) / 2
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    for n, (t, v) in enumerate(trajectory.states):
        residual = ""
        if n > 0 and n - 1 < len(trajectory.residuals):
            residual = format_scalar(trajectory.residuals[n - 1])
        writer.writerow([
            n,
            format_scalar(t),
            format_scalar(v),
            format_scalar(t - math.floor(t)),
            format_scalar(v - half_g * math.floor(v / half_g)),
            residual,
        ])


def dumps_trajectory(trajectory: Trajectory, g) -> str:
    buf = io.StringIO()
    write_trajectory(trajectory, buf, g)
    return buf.getvalue()


def read_trajectory(fh: Union[IO[str], str], map_kind: str = "") -> Trajectory:
    """Parse a trajectory table. The mode follows the data: ``p/q`` cells are exact."""
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRAJECTORY_HEADER:
        raise DocumentError(f"trajectory header must be {','.join(TRAJECTORY_HEADER)}")
    states, residuals = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(TRAJECTORY_HEADER):
            raise DocumentError(f"line {lineno}: expected {len(TRAJECTORY_HEADER)} columns")
        mode = EXACT if "/" in row[1] else FLOAT
        try:
            states.append(PhaseState(parse_scalar(row[1], mode), parse_scalar(row[2], mode)))
            if row[5]:
                residuals.append(parse_scalar(row[5], FLOAT))
        except ValueError as exc:
            raise DocumentError(f"line {lineno}: {exc}") from None
    if not states:
        raise DocumentError("trajectory has no states")
    traj = Trajectory(map_kind, states, None, residuals)
    try:
        traj.mode
    except TypeError:
        raise DocumentError("trajectory mixes exact and float rows") from None
    return traj

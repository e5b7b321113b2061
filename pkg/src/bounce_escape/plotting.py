"""Static SVG figures for a profile and, optionally, an orbit."""
from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .construction import PlateProfile  # noqa: E402
from .dynamics import Trajectory  # noqa: E402

plt.rcParams["svg.hashsalt"] = "bounce-escape"
_SVG_META = {"Date": None, "Creator": None}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    return path


def plot_zeta(profile: PlateProfile, path):
    x = [float(n.tau) for n in profile.zeta_nodes]
    z = [float(n.value) for n in profile.zeta_nodes]
    d = float(profile.delta)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(x, z, "-", color="k", lw=1)
    ax.plot(x, z, "o", ms=3, color="tab:blue", label="nodes")
    bx = [float(b.tau) for b in profile.breakpoints]
    bz = [float(b.D) for b in profile.breakpoints]
    ax.plot(bx, bz, "s", ms=5, mfc="none", color="tab:red", label="impact positions")
    ax.axhline(d, ls="--", lw=0.8, color="gray")
    ax.axhline(-d, ls="--", lw=0.8, color="gray")
    ax.axhline(0, lw=0.5, color="gray")
    ax.set_xlim(0, 1)
    ax.set_xlabel(r"$\tau = t$ mod 1")
    ax.set_ylabel(r"$\dot f(\tau)$")
    ax.legend(loc="upper center", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_f(profile: PlateProfile, path, samples_per_piece=16):
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for q in profile.float_pieces:
        x = np.linspace(q.lo, q.hi, samples_per_piece)
        ax.plot(x, q.a * x**2 + q.b * x + q.c, color="k", lw=1)
    ax.plot([float(b.tau) for b in profile.breakpoints], [0.0] * len(profile.breakpoints),
            "s", ms=5, mfc="none", color="tab:red")
    ax.set_xlim(0, 1)
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel(r"$f(\tau)$")
    fig.tight_layout()
    return _save(fig, path)


def plot_staircase(trajectory: Trajectory, path):
    v = [float(s.v) for s in trajectory.states]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(range(len(v)), v, where="post", color="k", lw=1)
    ax.set_xlabel("bounce")
    ax.set_ylabel("velocity after impact")
    fig.tight_layout()
    return _save(fig, path)


def plot_torus(trajectory: Trajectory, g, path):
    half_g = float(g) / 2
    # reduce in the native mode first; floats of large exact values lose the residue
    tr = [float(s.t - math.floor(s.t)) for s in trajectory.states]
    vr = [float(s.v - (g / 2) * math.floor(s.v / (g / 2))) if not isinstance(s.v, float)
          else s.v % half_g for s in trajectory.states]
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(tr, vr, s=14, c=np.arange(len(tr)), cmap="viridis")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, half_g)
    ax.set_xlabel(r"$t$ mod 1")
    ax.set_ylabel(r"$v$ mod $g/2$")
    fig.tight_layout()
    return _save(fig, path)


def plot_all(profile: PlateProfile, outdir, trajectory: Trajectory = None) -> list:
    os.makedirs(outdir, exist_ok=True)
    paths = [plot_zeta(profile, os.path.join(outdir, "zeta.svg")),
             plot_f(profile, os.path.join(outdir, "f.svg"))]
    if trajectory is not None:
        paths.append(plot_staircase(trajectory, os.path.join(outdir, "velocity.svg")))
        paths.append(plot_torus(trajectory, profile.g, os.path.join(outdir, "torus.svg")))
    return paths

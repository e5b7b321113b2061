"""
A small derivative bound
========================

Take delta much smaller than g. The cycle gets long (N is about g/(4 delta))
and the plate is barely moving, yet one orbit still gains g/2 of velocity
every N bounces.
"""
import os
from fractions import Fraction

from bounce_escape import GS, Parameters, construct, orbit
from bounce_escape.plotting import plot_zeta
from bounce_escape.verification import check_escape, check_feasibility

params = Parameters(Fraction(981, 100), Fraction(1, 20))
bp, profile = construct(params)
lo, hi = profile.height_range
print(f"N = {bp.N}, eta = {bp.eta}, W = {bp.W}")
print(f"distinct impact positions on the circle: {len(profile.breakpoints) - 1}")
print(f"max |f'| = {max(abs(n.value) for n in profile.zeta_nodes)}, f ranges over [{float(lo):.2e}, {float(hi):.2e}]")

traj = orbit(profile, bp.initial_state, GS, steps=10 * bp.N)
print(f"v_0 = {float(traj.velocities[0]):.2f}, v_{10 * bp.N} = {float(traj.velocities[-1]):.2f}")
print(check_escape(traj, bp.N, bp.V, params.g).summary())
print(check_feasibility(profile, traj, flights=bp.N).summary())

outdir = os.path.join(os.path.dirname(__file__), "output", "small_delta")
os.makedirs(outdir, exist_ok=True)
print("wrote", plot_zeta(profile, os.path.join(outdir, "zeta.svg")))

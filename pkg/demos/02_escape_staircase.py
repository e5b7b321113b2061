"""
Unbounded velocity
==================

Iterate the explicit bounce map exactly for 150 bounces from the
constructed initial condition. Every 3 bounces the velocity grows by
g/2 = 5 and the impact time moves by a whole number of plate periods, so
on the torus (t mod 1, v mod g/2) the orbit is a 3-cycle.
"""
import os

from bounce_escape import GS, Parameters, construct, orbit
from bounce_escape.plotting import plot_all
from bounce_escape.verification import check_escape

blueprint, profile = construct(Parameters(10, 1))
traj = orbit(profile, blueprint.initial_state, GS, steps=150)

v = traj.velocities
print("v_0 .. v_9:", [str(x) for x in v[:10]])
print("v_150 =", v[-1])

report = check_escape(traj, blueprint.N, blueprint.V, profile.g)
sigma = report["escape.tshift"].witness["sigma"]
print("integer time shifts sigma_n:", sigma[:10], "...")
print(report.summary())

# torus picture: only three distinct points
cycle = {(s.t - int(s.t), s.v % 5) for s in traj.states}
print("distinct torus points:", sorted((str(a), str(b)) for a, b in cycle))

outdir = os.path.join(os.path.dirname(__file__), "output", "worked")
for path in plot_all(profile, outdir, traj):
    print("wrote", path)

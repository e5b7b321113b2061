"""
The worked instance g = 10, delta = 1
=====================================

Build the escaping impact sequence, fold it onto the circle, shape the
plate derivative and run every check in exact arithmetic.
"""
from fractions import Fraction

from bounce_escape import Parameters, construct, interval_shape, verify_instance

params = Parameters(g=10, delta=1)
blueprint, profile = construct(params)

print("N, V, W, eta:", blueprint.N, blueprint.V, blueprint.W, blueprint.eta)
print("impact times:", [str(t) for t in blueprint.t])
print("targets D:   ", [str(d) for d in blueprint.D])
print("velocities:  ", [str(v) for v in blueprint.v])

# Two of the four times land on 3/5 once reduced mod 1; they ask for the same
# derivative there, so they merge into one breakpoint.
print("breakpoints: ", [(str(b.tau), str(b.D)) for b in profile.breakpoints])

# Between breakpoints the derivative ramps down to 0, dips to -C and ramps
# back up. L is the ramp width, C the dip depth; the net area is zero.
for a, b in zip(profile.breakpoints, profile.breakpoints[1:]):
    L, C = interval_shape(profile.delta, b.tau - a.tau, a.D, b.D)
    print(f"  [{a.tau}, {b.tau}]  L = {L}  C = {C}")

print("max |f'| =", max(abs(n.value) for n in profile.zeta_nodes), "<= delta =", profile.delta)
print("f at 3/35 =", profile.f_at(Fraction(3, 35)))

report = verify_instance(blueprint, profile)
print(report.summary())

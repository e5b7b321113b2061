"""
Physical bounce map versus the explicit map
===========================================

Along the constructed orbit the plate height is the same at every impact,
so the physical (implicit) map and the explicit map produce the same
states. In exact arithmetic the impact times found by first-impact
detection are rational and the two orbits agree exactly. In floating point
the physical map drifts away, and the drift grows exponentially.
"""
from bounce_escape import GS, PF, Parameters, PhaseState, construct, orbit

blueprint, profile = construct(Parameters(10, 1))

exact_gs = orbit(profile, blueprint.initial_state, GS, 60)
exact_pf = orbit(profile, blueprint.initial_state, PF, 60)
print("exact physical map == exact explicit map over 60 bounces:", exact_gs.states == exact_pf.states)

float_pf = orbit(profile, PhaseState(0.0, 28.0), PF, 60)
print(f"{'n':>3} {'|t - t_exact|':>14} {'|v - v_exact|':>14} {'residual':>10}")
for n in range(0, 61, 6):
    (t, v), (te, ve) = float_pf.states[n], exact_gs.states[n]
    res = float_pf.residuals[n - 1] if n else 0.0
    print(f"{n:>3} {abs(t - float(te)):14.3e} {abs(v - float(ve)):14.3e} {res:10.1e}")

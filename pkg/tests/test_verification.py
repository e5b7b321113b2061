import dataclasses
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from bounce_escape import (
    GS,
    PF,
    PhaseState,
    QuadraticPiece,
    ZetaNode,
    check_escape,
    check_feasibility,
    check_lemma1,
    check_lemma3,
    check_profile,
    check_prop1,
    identity_oracles,
    orbit,
    plate_velocity,
    verify_instance,
    zero_profile,
)
from bounce_escape.numeric import ModeError
from conftest import instances, small_rationals


def _zeta(profile, times):
    return [plate_velocity(profile, t) for t in times]


def test_lemma1_worked(worked):
    bp, profile = worked
    rep = check_lemma1(bp.t, _zeta(profile, bp.t), 10, 3, 18, 1)
    assert rep.ok
    assert rep["lemma1.cond1"].witness["lhs"] == 18
    assert rep["lemma1.cond2"].witness["lhs"] == 1


def test_lemma1_free_rotation():
    N, m = 3, 4
    W = N * m
    times = [F(0), F(W, N), F(2 * W, N)]
    rep = check_lemma1(times, [F(0)] * N, 10, N, W, 0)
    assert rep["lemma1.cond1"].ok
    assert not rep["lemma1.cond2"].ok


def test_lemma1_wrong_W(worked):
    bp, profile = worked
    rep = check_lemma1(bp.t, _zeta(profile, bp.t), 10, 3, 17, 1)
    assert rep.failed() == ["lemma1.cond1"]
    w = rep["lemma1.cond1"].witness
    assert (w["lhs"], w["rhs"]) == (18, 17)


def test_lemma1_refuses_floats():
    with pytest.raises(ModeError):
        check_lemma1([0.0, 5.6, 11.6], [0.5, 1.0, 1.0], 10, 3, 18, 1)


def test_prop1_worked(worked, small):
    for bp, profile in (worked, small):
        assert check_prop1(profile, bp.t, bp.params.g, bp.W, bp.V).ok


def _shift_piece(profile, index, amount):
    pieces = list(profile.f_pieces)
    p = pieces[index]
    pieces[index] = QuadraticPiece(p.a, p.b, p.c + amount, p.lo, p.hi)
    return dataclasses.replace(profile, f_pieces=tuple(pieces))


def test_prop1_height_perturbed(worked):
    bp, profile = worked
    # piece 4 starts at the breakpoint 3/5
    assert profile.f_pieces[4].lo == F(3, 5)
    bad = _shift_piece(profile, 4, F(1, 1000))
    rep = check_prop1(bad, bp.t, 10)
    assert rep.failed() == ["prop1.cond3"]
    assert rep["prop1.cond3"].witness["lhs"] == F(1, 1000)


def test_prop1_time_shifted(worked):
    bp, profile = worked
    t = list(bp.t)
    t[1] += F(1, 100)
    rep = check_prop1(profile, t, 10)
    assert "prop1.cond4" in rep.failed()
    assert rep["prop1.cond4"].witness["index"] == 1


def test_lemma3_worked(worked):
    bp, _ = worked
    rep = check_lemma3(bp.t, 10, 1, F(1, 2))
    assert rep.ok
    assert [rep[f"lemma3.cond{i}"].witness["lhs"] for i in (1, 2)] == [18, 1]


def test_lemma3_eta_zero(worked):
    bp, _ = worked
    rep = check_lemma3(bp.t, 10, 1, F(0))
    assert rep.failed() == ["lemma3.cond2"]


def test_lemma3_mismatched_N():
    # times for N = 4 with delta = 1, g = 10 and eta = g/4 - delta
    t1 = F(5)
    t = [F(n * (n - 1), 2) * F(2, 5) + n * t1 for n in range(5)]
    rep = check_lemma3(t, 10, 1, F(10, 4) - 1)
    assert not rep["lemma3.cond2"].ok


def test_profile_worked(worked, small):
    for bp, profile in (worked, small):
        assert check_profile(profile, bp).ok


def _replace_node(profile, index, value):
    nodes = list(profile.zeta_nodes)
    nodes[index] = ZetaNode(nodes[index].tau, value)
    return dataclasses.replace(profile, zeta_nodes=tuple(nodes))


def test_profile_inflated_dip(worked):
    bp, profile = worked
    assert profile.zeta_nodes[2].value == F(-3, 10)
    bad = _replace_node(profile, 2, F(-6, 10))
    rep = check_profile(bad, bp)
    assert rep.failed() == ["profile.area"]
    assert rep["profile.area"].witness["lhs"] != 0


def test_profile_node_above_bound(worked):
    bp, profile = worked
    bad = _replace_node(profile, 2, -(1 + F(1, 1000)))
    rep = check_profile(bad, bp)
    assert "profile.bound" in rep.failed()
    assert rep["profile.bound"].witness["lhs"] == 1 + F(1, 1000)


def test_escape_worked(worked):
    bp, profile = worked
    traj = orbit(profile, bp.initial_state, GS, 6)
    rep = check_escape(traj, 3, 1, 10)
    assert rep.ok
    assert rep["escape.tshift"].witness["sigma"] == [18, 19, 20, 21]


def test_escape_zero_profile():
    traj = orbit(zero_profile(10), PhaseState(F(0), F(28)), GS, 6)
    rep = check_escape(traj, 3, 1, 10)
    assert not rep["escape.vgain"].ok


def test_escape_float_pf(worked):
    bp, profile = worked
    traj = orbit(profile, PhaseState(0.0, 28.0), PF, 6)
    assert check_escape(traj, 3, 1, 10, "float", tolerance=1e-6).ok
    with pytest.raises(ModeError):
        check_escape(traj, 3, 1, 10, "exact")


def test_escape_needs_two_periods(worked):
    bp, profile = worked
    with pytest.raises(ValueError):
        check_escape(orbit(profile, bp.initial_state, GS, 5), 3, 1, 10)


def test_identity_base_case():
    assert identity_oracles([F(0), F(7, 3)]).ok


def test_identity_arithmetic_progression():
    rep = identity_oracles([F(k) for k in range(9)])
    assert rep.ok
    assert rep["identity.fds"].witness["lhs"] == 0


@settings(max_examples=150)
@given(st.lists(small_rationals(), min_size=2, max_size=13))
def test_identities_against_brute_force(t):
    N = len(t) - 1
    rep = identity_oracles(t)
    assert rep.ok
    # independent brute force: expand each T_k into its three terms
    total1 = total2 = F(0)
    for k in range(1, N):
        for j, coeff in ((k + 1, 1), (k, -2), (k - 1, 1)):
            total1 += coeff * t[j]
            total2 += (N - k) * coeff * t[j]
    assert rep["identity.fds"].witness["lhs"] == total1
    assert rep["identity.tfe"].witness["lhs"] == total2


def test_feasibility_worked(worked):
    bp, profile = worked
    traj = orbit(profile, bp.initial_state, GS, 3)
    rep = check_feasibility(profile, traj)
    assert rep.ok
    assert rep["feasibility.gap"].witness["certified"]


def test_feasibility_low_velocity(worked):
    _, profile = worked
    traj = orbit(profile, PhaseState(F(0), F(1, 10)), GS, 1)
    assert not check_feasibility(profile, traj).ok


@given(small_rationals(1, 200, 7))
def test_feasibility_zero_profile(v):
    profile = zero_profile(10)
    traj = orbit(profile, PhaseState(F(0), v), GS, 2)
    assert check_feasibility(profile, traj).ok


def test_feasibility_detects_a_plate_bump(worked):
    bp, profile = worked
    # raise f by 50 on the middle of the first flight: impossible plate, the ball must hit it
    traj = orbit(profile, bp.initial_state, GS, 1)
    bumped = _shift_piece(profile, 2, F(50))
    rep = check_feasibility(bumped, traj)
    assert not rep["feasibility.gap"].ok


def test_feasibility_float(worked):
    bp, profile = worked
    traj = orbit(profile, PhaseState(0.0, 28.0), PF, 3)
    rep = check_feasibility(profile, traj)
    assert rep.ok
    assert rep["feasibility.gap"].witness["certified"] is False


@settings(max_examples=30, deadline=None)
@given(instances(max_N=12))
def test_full_battery_on_random_instances(inst):
    bp, profile = inst
    rep = verify_instance(bp, profile, periods=50)
    assert rep.ok, rep.summary()


def test_report_serialization(worked):
    bp, profile = worked
    rep = verify_instance(bp, profile, periods=2)
    d = rep.to_dict()
    assert d["overall"] == "pass"
    ids = [i["id"] for i in d["items"]]
    assert ids[:2] == ["identity.fds", "identity.tfe"]
    assert "prop1.cond3" in ids and "escape.vgain" in ids
    assert '"lhs": "18/1"' in rep.to_text()

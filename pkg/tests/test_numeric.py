from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bounce_escape.numeric import (
    DomainError,
    InexactRootError,
    ModeError,
    QuadraticPiece,
    eval_quadratic,
    exact,
    first_root_after,
    format_scalar,
    has_root_in_open,
    mode_of,
    parse_scalar,
)
from conftest import small_rationals


def test_eval_constant_piece():
    assert eval_quadratic(QuadraticPiece(F(0), F(0), F(5), F(0), F(1)), F(3, 10)) == 5


def test_eval_square():
    assert eval_quadratic(QuadraticPiece(F(1), F(0), F(0), F(0), F(1)), F(1, 2)) == F(1, 4)


def test_eval_free_flight_lands_at_5_6():
    piece = QuadraticPiece(F(-5), F(28), F(0), F(0), F(10))
    assert eval_quadratic(piece, F(28, 5)) == 0


def test_eval_outside_domain():
    piece = QuadraticPiece(F(1), F(0), F(0), F(0), F(1))
    with pytest.raises(DomainError):
        eval_quadratic(piece, F(1))
    with pytest.raises(DomainError):
        eval_quadratic(piece, F(-1, 100))


def test_mixing_modes_is_an_error():
    with pytest.raises(ModeError):
        mode_of(F(1, 2), 0.5)
    with pytest.raises(ModeError):
        QuadraticPiece(F(1), 0.0, F(0), F(0), F(1))
    with pytest.raises(ModeError):
        eval_quadratic(QuadraticPiece(F(1), F(0), F(0), F(0), F(1)), 0.5)


def test_empty_domain_rejected():
    with pytest.raises(ValueError):
        QuadraticPiece(F(1), F(0), F(0), F(1), F(1))


@pytest.mark.parametrize("a, b, c, expected", [
    (1, 0, -1, F(1)),
    (1, 0, 1, None),
    (-5, 28, 0, F(28, 5)),
])
def test_first_root_after_examples(a, b, c, expected):
    hi = F(10) if a == -5 else F(3)
    assert first_root_after(QuadraticPiece(F(a), F(b), F(c), F(0), hi), F(0)) == expected


def test_first_root_after_float_examples():
    assert first_root_after(QuadraticPiece(-5.0, 28.0, 0.0, 0.0, 10.0), 0.0) == pytest.approx(5.6, abs=1e-14)
    assert first_root_after(QuadraticPiece(1.0, 0.0, 1.0, 0.0, 3.0), 0.0) is None


def test_first_root_respects_half_open_domain():
    piece = QuadraticPiece(F(1), F(0), F(-1), F(0), F(1))
    assert first_root_after(piece, F(0)) is None
    piece = QuadraticPiece(F(1), F(0), F(-1), F(1), F(2))
    assert first_root_after(piece, F(0)) == 1


def test_irrational_exact_root_raises():
    with pytest.raises(InexactRootError):
        first_root_after(QuadraticPiece(F(1), F(0), F(-2), F(0), F(3)), F(0))


def test_irrational_root_outside_domain_is_fine():
    # roots +-sqrt(2) both lie outside [2, 3)
    assert first_root_after(QuadraticPiece(F(1), F(0), F(-2), F(2), F(3)), F(0)) is None


def test_float_roots_avoid_cancellation():
    r = first_root_after(QuadraticPiece(1.0, 1e8, 1.0, -1.0, 0.0), -1.0)
    assert r == pytest.approx(-1e-8, rel=1e-12)


def test_serialization():
    assert format_scalar(F(28, 5)) == "28/5"
    assert format_scalar(F(18)) == "18/1"
    assert format_scalar(F(-3, 10)) == "-3/10"
    assert format_scalar(5.6) == "5.6"
    assert parse_scalar("28/5") == F(28, 5)
    assert parse_scalar("0.9") == F(9, 10)
    assert parse_scalar("-6/4") == F(-3, 2)
    assert parse_scalar("5.6", "float") == 5.6
    with pytest.raises(ModeError):
        exact(0.9)
    with pytest.raises(ValueError):
        parse_scalar("1/0")


@given(small_rationals(), small_rationals())
def test_exact_field_operations(x, y):
    assert (x + y) - y == x
    if y != 0:
        assert (x * y) / y == x
    assert parse_scalar(format_scalar(x)) == x


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_serialization_round_trips(x):
    assert float(format_scalar(x)) == x


def _mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


def _oracle_roots(a, b, c):
    """Roots at 60 digits, computed without any of the code under test."""
    A, B, C = _mp(a), _mp(b), _mp(c)
    if a == 0:
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    s = mpmath.sqrt(disc)
    return [(-B - s) / (2 * A), (-B + s) / (2 * A)]


@settings(max_examples=300)
@given(small_rationals(), small_rationals(), small_rationals(), small_rationals(-10, 10), small_rationals(0, 10))
def test_has_root_in_open_matches_high_precision_oracle(a, b, c, lo, width):
    if (a == 0 and b == 0) or width == 0:
        return
    hi = lo + width
    with mpmath.workdps(60):
        roots = _oracle_roots(a, b, c)
        L, H = _mp(lo), _mp(hi)
        eps = mpmath.mpf(10) ** -40
        # a root within 1e-40 of an end is only decidable exactly; leave those to the exact tests
        if any(abs(r - L) < eps or abs(r - H) < eps for r in roots):
            return
        expected = any(L < r < H for r in roots)
    assert has_root_in_open(a, b, c, lo, hi) == expected


@settings(max_examples=300)
@given(small_rationals(-100, 100), small_rationals(-100, 100), small_rationals(-100, 100), small_rationals(-10, 10))
def test_first_root_float_contract(a, b, c, t_min):
    piece = QuadraticPiece(float(a), float(b), float(c), -10.0, 10.0)
    r = first_root_after(piece, float(t_min))
    if r is None:
        return
    scale = max(abs(float(a)), abs(float(b)), abs(float(c)))
    assert abs((a * F(r) + b) * F(r) + c) <= 2.0 ** -40 * scale
    assert r > float(t_min)


@settings(max_examples=300)
@given(small_rationals(-20, 20, 4), small_rationals(-20, 20, 4), small_rationals(-20, 20, 4), small_rationals(-10, 10, 4))
def test_first_root_exact_contract(r1, r2, a, t_min):
    # build a quadratic with rational roots r1, r2 so the exact path never gives up
    if a == 0:
        return
    b, c = -a * (r1 + r2), a * r1 * r2
    piece = QuadraticPiece(a, b, c, F(-30), F(30))
    r = first_root_after(piece, t_min)
    candidates = sorted(x for x in (r1, r2) if x > t_min)
    assert r == (candidates[0] if candidates else None)
    if r is not None:
        assert piece(r) == 0
        assert not has_root_in_open(a, b, c, t_min, r)


def test_roots_on_the_ends_are_not_interior():
    assert not has_root_in_open(F(1), F(0), F(-1), F(1), F(2))
    assert not has_root_in_open(F(1), F(0), F(-1), F(-1), F(1, 2))
    assert has_root_in_open(F(1), F(0), F(-1), F(-1), F(2))
    # double root exactly at an end
    assert not has_root_in_open(F(1), F(-2), F(1), F(1), F(3))

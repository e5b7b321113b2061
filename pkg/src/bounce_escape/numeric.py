"""Scalar helpers shared by every other module.

Two numeric modes are supported:

* ``exact``: :class:`fractions.Fraction` (plain ``int`` is accepted and
  promoted). Arithmetic is exact and integers are unbounded.
* ``float``: binary64 ``float``. Results carry ordinary machine rounding.

Python silently promotes ``Fraction + float`` to ``float``, so every public
entry point that takes more than one scalar calls :func:`mode_of` first and
refuses mixed input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Optional, Union

EXACT = "exact"
FLOAT = "float"

Scalar = Union[Fraction, float]


class ModeError(TypeError):
    """Exact and float scalars were combined, or the wrong mode was given."""


class DomainError(ValueError):
    """A piece was evaluated outside its half-open domain."""


class InexactRootError(ArithmeticError):
    """An exact-mode root exists but is irrational."""


def mode_of(*values) -> str:
    """Return the common mode of ``values``; raise :class:`ModeError` if mixed."""
    modes = set()
    for x in values:
        if isinstance(x, bool):
            raise ModeError(f"booleans are not scalars: {x!r}")
        if isinstance(x, (int, Fraction)):
            modes.add(EXACT)
        elif isinstance(x, float):
            modes.add(FLOAT)
        else:
            raise ModeError(f"unsupported scalar type {type(x).__name__}")
    if len(modes) > 1:
        raise ModeError("cannot combine exact and float scalars")
    return modes.pop() if modes else EXACT


def exact(x) -> Fraction:
    """Coerce ``x`` to a Fraction.

    Accepts ints, Fractions and strings in ``p/q``, integer or decimal form
    (``"0.9"`` becomes ``9/10``). Floats are refused: a float literal has
    already lost the value the user meant.
    """
    if isinstance(x, bool):
        raise ModeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise ModeError(f"float {x!r} given where an exact scalar is required")
    if isinstance(x, str):
        return parse_scalar(x, EXACT)
    raise ModeError(f"unsupported scalar type {type(x).__name__}")


def parse_scalar(text: str, mode: str = EXACT) -> Scalar:
    text = text.strip()
    if mode == FLOAT:
        if "/" in text:
            return float(parse_scalar(text, EXACT))
        return float(text)
    if mode != EXACT:
        raise ValueError(f"unknown mode {mode!r}")
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ValueError(f"malformed rational {text!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"malformed number {text!r}") from None
    if not d.is_finite():
        raise ValueError(f"non-finite number {text!r}")
    return Fraction(d)


def format_scalar(x: Scalar) -> str:
    """Serialize: ``"p/q"`` for exact values, shortest round-trip repr for floats."""
    if isinstance(x, float):
        return repr(x)
    x = exact(x)
    return f"{x.numerator}/{x.denominator}"


def convert(x: Scalar, mode: str) -> Scalar:
    """Convert ``x`` into ``mode``. Float to exact uses the binary value verbatim."""
    if mode == FLOAT:
        return float(x)
    if isinstance(x, float):
        return Fraction(x)
    return exact(x)


def exact_sqrt(x: Fraction) -> Optional[Fraction]:
    """Rational square root of ``x`` or None when it is irrational."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass(frozen=True)
class QuadraticPiece:
    """``a*t**2 + b*t + c`` restricted to ``[lo, hi)``."""

    a: Scalar
    b: Scalar
    c: Scalar
    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        mode_of(self.a, self.b, self.c, self.lo, self.hi)
        if not self.lo < self.hi:
            raise ValueError(f"empty domain [{self.lo}, {self.hi})")

    @property
    def mode(self) -> str:
        return mode_of(self.a, self.b, self.c, self.lo, self.hi)

    def __call__(self, t):
        # Unchecked evaluation; also used for one-sided limits at ``hi``.
        return (self.a * t + self.b) * t + self.c

    def derivative(self, t):
        return 2 * self.a * t + self.b

    def as_float(self) -> "QuadraticPiece":
        return QuadraticPiece(*(float(x) for x in (self.a, self.b, self.c, self.lo, self.hi)))


def eval_quadratic(piece: QuadraticPiece, t: Scalar) -> Scalar:
    mode_of(piece.a, piece.b, piece.c, piece.lo, piece.hi, t)
    if not piece.lo <= t < piece.hi:
        raise DomainError(f"t={t} outside [{piece.lo}, {piece.hi})")
    return piece(t)


class _Root:
    """A real root ``center + branch*sqrt(rad2)`` compared exactly against rationals."""

    __slots__ = ("center", "rad2", "branch")

    def __init__(self, center: Fraction, rad2: Fraction, branch: int):
        self.center, self.rad2, self.branch = center, rad2, branch

    def cmp(self, x: Fraction) -> int:
        """Sign of ``root - x``."""
        p = self.center - x
        if self.rad2 == 0 or self.branch == 0:
            return (p > 0) - (p < 0)
        # sign of p + branch*sqrt(rad2)
        if p == 0 or (p > 0) == (self.branch > 0):
            return self.branch if p == 0 else (1 if p > 0 else -1)
        # opposite signs: the larger magnitude wins
        diff = p * p - self.rad2
        if diff == 0:
            return 0
        return (1 if p > 0 else -1) if diff > 0 else self.branch

    def value(self) -> Fraction:
        if self.rad2 == 0:
            return self.center
        s = exact_sqrt(self.rad2)
        if s is None:
            raise InexactRootError(
                f"root {self.center} {'+' if self.branch > 0 else '-'} sqrt({self.rad2}) is irrational"
            )
        return self.center + self.branch * s


def _exact_roots(a: Fraction, b: Fraction, c: Fraction) -> Optional[list]:
    """Ascending real roots as :class:`_Root`; None when the polynomial is zero."""
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        return [_Root(-c / b, Fraction(0), 0)]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    center = -b / (2 * a)
    rad2 = disc / (4 * a * a)
    if rad2 == 0:
        return [_Root(center, rad2, 0)]
    return [_Root(center, rad2, -1), _Root(center, rad2, 1)]


def float_roots(a: float, b: float, c: float) -> Optional[list]:
    """Ascending real roots via the cancellation-free form; None for the zero polynomial."""
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        return [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        return [-b / (2 * a)]
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0:  # b == 0 and c == 0
        return [0.0]
    return sorted((q / a, c / q))


def first_root_after(piece: QuadraticPiece, t_min: Scalar, slack: float = 0.0) -> Optional[Scalar]:
    """Smallest root ``r`` of the piece with ``r > t_min`` and ``lo <= r < hi``.

    Returns None if there is none. The identically-zero quadratic has no
    isolated root and also gives None.

    In float mode ``slack`` widens the domain to ``[lo - slack, hi + slack]``
    so that a root sitting on a shared piece boundary is not lost to
    rounding. In exact mode the root must be rational; an irrational first
    root raises :class:`InexactRootError`.
    """
    mode = mode_of(piece.a, piece.b, piece.c, piece.lo, piece.hi, t_min)
    if mode == EXACT:
        a, b, c, lo, hi, t_min = map(Fraction, (piece.a, piece.b, piece.c, piece.lo, piece.hi, t_min))
        roots = _exact_roots(a, b, c)
        if not roots:
            return None
        for r in roots:
            if r.cmp(t_min) > 0 and r.cmp(lo) >= 0 and r.cmp(hi) < 0:
                return r.value()
        return None
    roots = float_roots(piece.a, piece.b, piece.c)
    if not roots:
        return None
    for r in roots:
        if r > t_min and piece.lo - slack <= r <= piece.hi + slack:
            if slack == 0 and r == piece.hi:
                continue
            return r
    return None


def has_root_in_open(a, b, c, lo, hi) -> bool:
    """Whether ``a t^2 + b t + c`` vanishes anywhere in the open interval ``(lo, hi)``.

    Exact in exact mode. The zero polynomial counts as vanishing.
    """
    mode = mode_of(a, b, c, lo, hi)
    if mode == EXACT:
        roots = _exact_roots(*map(Fraction, (a, b, c)))
        if roots is None:
            return True
        lo, hi = Fraction(lo), Fraction(hi)
        return any(r.cmp(lo) > 0 and r.cmp(hi) < 0 for r in roots)
    roots = float_roots(a, b, c)
    if roots is None:
        return True
    return any(lo < r < hi for r in roots)

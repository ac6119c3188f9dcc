"""Computable reals two ways: digit streams and 2^-n approximations.

A digit stream is a machine's emission ledger read as a fraction; a
modulus real is a total procedure n -> q_n with |q_n - x| <= 2^-n.  The
stream-to-modulus direction is plain truncation.  The reverse direction
is deliberately partial: a digit is produced only when some approximation
interval fits strictly inside a single digit cell, and a value sitting on
a cell boundary stays undetermined at every precision.  That asymmetry is
the point; arithmetic therefore lives on the modulus side only.

All arithmetic is exact (fractions.Fraction); the error budgets below are
inequalities over exact rationals, not float estimates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .machine import Machine
from .runner import Budget, Insufficient, RunOutcome, emit_digits

# Exact arbitrary-precision rationals in reduced canonical form.
Rational = Fraction


class InsufficientDigits(Exception):
    """The stream ran out before supplying the digits a precision needs."""

    def __init__(self, have: int, need: int, outcome: RunOutcome):
        super().__init__(f"stream supplied {have} digits, {need} needed")
        self.have = have
        self.need = need
        self.outcome = outcome


class MissingMagnitudeBound(ValueError):
    """Exp needs a caller-supplied rational M with |x| <= M."""


@dataclass(frozen=True)
class DigitStreamReal:
    """integer_part + sum d_i * base^-i over the machine's emissions.

    When the machine stops emitting, the value is a partial number; the
    type permits that and digit_to_modulus flags it on extraction.
    """

    integer_part: int
    digits: Machine

    @property
    def base(self) -> int:
        return self.digits.base


@dataclass(frozen=True)
class ModulusReal:
    """approx(n) must be within 2^-n of the represented value, for every n.

    approx must depend on nothing but n, so calls may come in any order or
    concurrently.
    """

    approx: Callable[[int], Fraction]
    label: str | None = None

    def interval(self, n: int) -> tuple[Fraction, Fraction]:
        q = self.approx(n)
        eps = Fraction(1, 2**n)
        return q - eps, q + eps


def rational_real(q, label: str | None = None) -> ModulusReal:
    v = Fraction(q)
    return ModulusReal(approx=lambda n: v, label=label or str(v))


def digits_for_precision(n: int, base: int) -> int:
    """Smallest k with base^-k <= 2^-n."""
    k, power = 0, 1
    target = 1 << n
    while power < target:
        power *= base
        k += 1
    return k


def digit_to_modulus(d: DigitStreamReal, b: Budget) -> ModulusReal:
    """Truncation: approx(n) keeps k digits with base^-k <= 2^-n.

    The remaining tail is at most (base-1) * sum_{i>k} base^-i = base^-k,
    so the modulus invariant holds whenever the digits exist.  approx
    raises InsufficientDigits when the stream cannot supply them within
    the budget, whether it halted, provably loops without emitting, or
    just ran out of steps; the run outcome rides along on the exception.
    """
    base = d.base
    cache: dict[int, tuple[int, ...]] = {}

    def prefix(k: int) -> tuple[int, ...]:
        if k == 0:
            return ()
        got = cache.get(k)
        if got is None:
            r = emit_digits(d.digits, k, b)
            if isinstance(r, Insufficient):
                raise InsufficientDigits(len(r.digits), k, r.outcome)
            got = r.digits
            cache[k] = got
        return got

    def approx(n: int) -> Fraction:
        k = digits_for_precision(n, base)
        ds = prefix(k)
        return d.integer_part + sum(
            Fraction(digit, base ** (i + 1)) for i, digit in enumerate(ds)
        )

    return ModulusReal(approx=approx, label=d.digits.name)


# --- arithmetic -------------------------------------------------------------


def _joined(tag: str, *parts: ModulusReal) -> str | None:
    if any(p.label is None for p in parts):
        return None
    return f"{tag}({', '.join(p.label for p in parts)})"


def add_mod(x: ModulusReal, y: ModulusReal) -> ModulusReal:
    """Query both at n+1: the two half-errors sum to 2^-n."""
    return ModulusReal(
        approx=lambda n: x.approx(n + 1) + y.approx(n + 1),
        label=_joined("add", x, y),
    )


def neg_mod(x: ModulusReal) -> ModulusReal:
    return ModulusReal(approx=lambda n: -x.approx(n), label=_joined("neg", x))


def _shift_for(bound: Fraction) -> int:
    s = 0
    while (1 << s) < bound:
        s += 1
    return s


def mul_mod(x: ModulusReal, y: ModulusReal) -> ModulusReal:
    """|xy - q_x q_y| <= |x| e_y + |q_y| e_x <= (B_x + B_y + 1) 2^-p.

    B_* = |approx(0)| + 1 bounds the true magnitudes; querying both at
    p = n + s with 2^s >= B_x + B_y + 1 lands the product within 2^-n.
    """
    bx = abs(x.approx(0)) + 1
    by = abs(y.approx(0)) + 1
    s = _shift_for(bx + by + 1)
    return ModulusReal(
        approx=lambda n: x.approx(n + s) * y.approx(n + s),
        label=_joined("mul", x, y),
    )


def _ceil_int(q: Fraction) -> int:
    return -math.floor(-q)


def exp_mod(x: ModulusReal, bound=None) -> ModulusReal:
    """Taylor sum with an explicit remainder budget.

    bound is a rational M with |x| <= M (required: the remainder analysis
    needs it).  Since e < 3, both e^M and the derivative of any partial
    sum on [-M-1, M+1] are at most 3^(ceil(M)+1) =: D.  approx(n) picks K
    with M^(K+1)/(K+1)! * D <= 2^-(n+1) and queries x at p = n + 1 + s,
    2^s >= D, so truncation and argument error each stay under 2^-(n+1).
    """
    if bound is None:
        raise MissingMagnitudeBound("exp_mod needs bound=M with |x| <= M")
    m = Fraction(bound)
    if m < 0:
        raise ValueError("magnitude bound must be non-negative")
    dbound = Fraction(3) ** (_ceil_int(m) + 1)
    s = _shift_for(dbound)

    def approx(n: int) -> Fraction:
        budget = Fraction(1, 2 ** (n + 1))
        k = 0
        tail = m * dbound  # M^(K+1)/(K+1)! * D at K = 0
        while tail > budget:
            k += 1
            tail = tail * m / (k + 1)
        q = x.approx(n + 1 + s)
        total = Fraction(1)
        term = Fraction(1)
        for j in range(1, k + 1):
            term = term * q / j
            total += term
        return total

    return ModulusReal(approx=approx, label=_joined("exp", x))


class Op(enum.Enum):
    ADD = "add"
    NEG = "neg"
    MUL = "mul"
    EXP = "exp"


def modulus_arith(op: Op, *args: ModulusReal, bound=None) -> ModulusReal:
    arity = {Op.ADD: 2, Op.NEG: 1, Op.MUL: 2, Op.EXP: 1}[op]
    if len(args) != arity:
        raise ValueError(f"{op.value} takes {arity} argument(s), got {len(args)}")
    if op is Op.ADD:
        return add_mod(*args)
    if op is Op.NEG:
        return neg_mod(*args)
    if op is Op.MUL:
        return mul_mod(*args)
    return exp_mod(args[0], bound=bound)


# --- digit extraction -------------------------------------------------------


@dataclass(frozen=True)
class Digits:
    digits: tuple[int, ...]


@dataclass(frozen=True)
class Undetermined:
    """No queried interval separated from a cell boundary at ``position``.

    interval is the last (smallest) interval tried — it pins the value to
    the boundary neighborhood that caused the refusal.
    """

    position: int
    interval: tuple[Fraction, Fraction] = field(compare=False)


def modulus_to_digits(
    m: ModulusReal, count: int, base: int = 10, tie_budget: int = 64
) -> Digits | Undetermined:
    """Emit digit i only when an interval sits strictly inside one cell.

    Cells at position i are [c * base^-i, (c+1) * base^-i).  The closed
    interval [q - 2^-p, q + 2^-p] lies strictly inside a cell exactly when
    both endpoints share a floor after scaling by base^i; a value on a
    boundary never separates, and after tie_budget precision increases
    the extractor answers Undetermined rather than pick a side.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if base < 2:
        raise ValueError("base must be at least 2")
    if tie_budget < 1:
        raise ValueError("tie_budget must be positive")
    out: list[int] = []
    p = 0
    for i in range(1, count + 1):
        scale = base**i
        cell = None
        lo = hi = Fraction(0)
        for _ in range(tie_budget):
            p += 1
            q = m.approx(p)
            eps = Fraction(1, 2**p)
            lo, hi = q - eps, q + eps
            c_lo = math.floor(lo * scale)
            if c_lo == math.floor(hi * scale):
                cell = c_lo
                break
        if cell is None:
            return Undetermined(position=i, interval=(lo, hi))
        out.append(cell % base)
    return Digits(digits=tuple(out))


# --- comparison -------------------------------------------------------------


@dataclass(frozen=True)
class Less:
    pass


@dataclass(frozen=True)
class Greater:
    pass


@dataclass(frozen=True)
class Overlapping:
    precision: int


def compare(m1: ModulusReal, m2: ModulusReal, max_precision: int):
    """Less/Greater only on interval separation; Overlapping is honest.

    Equality of reals is undecidable, so equal (or merely close) inputs
    end at Overlapping(max_precision) rather than a verdict.
    """
    for p in range(1, max_precision + 1):
        lo1, hi1 = m1.interval(p)
        lo2, hi2 = m2.interval(p)
        if hi1 < lo2:
            return Less()
        if hi2 < lo1:
            return Greater()
    return Overlapping(precision=max_precision)

"""Bounded execution: run, classify, digit extraction, loop detection.

The engine keeps a mutable dict tape and an incrementally updated 64-bit
fingerprint of the core configuration (state, tape, head).  A fingerprint
hit is only a candidate: the run is replayed to the earlier step and the
cores compared exactly before ProvablyLooping is reported, so hash
collisions can slow the engine down but never corrupt a verdict.  The
fingerprint tables come from a keyed hash, not Python's salted hash(), so
verdicts are identical across processes and runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from hashlib import blake2b

from .codec import decode
from .machine import (
    BLANK,
    HALTMARK,
    Configuration,
    Convention,
    HaltReason,
    Machine,
    MachineError,
    Move,
    StuckUndefinedError,
    _table_of,
)


@dataclass(frozen=True)
class Budget:
    max_steps: int
    max_cells: int | None = None
    max_seen_configs: int = 1_000_000

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.max_cells is not None and self.max_cells <= 0:
            raise ValueError("max_cells must be positive")
        if self.max_seen_configs <= 0:
            raise ValueError("max_seen_configs must be positive")


@dataclass(frozen=True)
class Halted:
    steps: int
    reason: HaltReason


@dataclass(frozen=True)
class ProvablyLooping:
    """The core configuration at first_repeat_step already occurred
    ``period`` steps earlier; both occurrences were compared exactly."""

    first_repeat_step: int
    period: int


@dataclass(frozen=True)
class BudgetExhausted:
    limit: str  # which Budget field ran out: max_steps | max_cells | ...


@dataclass(frozen=True)
class Unknown:
    limit: str


Verdict = Halted | ProvablyLooping | BudgetExhausted


@dataclass(frozen=True)
class RunOutcome:
    verdict: Verdict
    emitted: tuple[int, ...]
    emission_steps: tuple[int, ...]  # 1-based step of each emitted digit
    steps_run: int
    final: Configuration
    trace: tuple[Configuration, ...] | None = None


# --- fingerprint tables ----------------------------------------------------

_KEYS: dict[tuple, int] = {}


def _key(*parts) -> int:
    v = _KEYS.get(parts)
    if v is None:
        v = int.from_bytes(blake2b(repr(parts).encode(), digest_size=8).digest(), "big")
        _KEYS[parts] = v
    return v


def _initial_fingerprint(state: str, tape: dict[int, str], head: int) -> int:
    h = _key("s", state) ^ _key("h", head)
    for pos, sym in tape.items():
        h ^= _key("c", pos, sym)
    return h


def _tape_dict(m: Machine, input_symbols) -> dict[int, str]:
    tape: dict[int, str] = {}
    for i, sym in enumerate(input_symbols):
        if sym not in m.alphabet:
            raise MachineError(f"input symbol {sym!r} not in alphabet")
        if sym != BLANK:
            tape[i] = sym
    return tape


def _core_at(m: Machine, input_symbols, target: int):
    """Replay ``target`` steps and return (state, tape dict, head)."""
    table = _table_of(m)
    tape = _tape_dict(m, input_symbols)
    head = 0
    state = m.start
    for _ in range(target):
        scan = tape.get(head, BLANK)
        rule = table[(state, scan)]
        if rule.write is not None:
            if rule.write == BLANK:
                tape.pop(head, None)
            else:
                tape[head] = rule.write
        head += rule.move.value
        state = rule.goto
    return state, tape, head


def _snapshot(state, tape, head, emitted, steps) -> Configuration:
    return Configuration(
        state=state,
        tape=tuple(sorted(tape.items())),
        head=head,
        emitted=tuple(emitted),
        steps=steps,
    )


def run(
    m: Machine,
    initial_tape=(),
    budget: Budget = Budget(max_steps=1000),
    *,
    keep_trace: bool = False,
) -> RunOutcome:
    """Iterate until halt, verified core repetition, or budget exhaustion.

    Missing rules under the halt-symbol convention raise
    StuckUndefinedError, as in single stepping.
    """
    table = _table_of(m)
    tape = _tape_dict(m, initial_tape)
    head = 0
    state = m.start
    emitted: list[int] = []
    emission_steps: list[int] = []
    halt_symbol = m.convention is Convention.HALT_SYMBOL
    h = _initial_fingerprint(state, tape, head)
    seen: dict[int, int] = {h: 0}
    trace: list[Configuration] | None = None
    if keep_trace:
        trace = [_snapshot(state, tape, head, emitted, 0)]

    def outcome(verdict, steps):
        return RunOutcome(
            verdict=verdict,
            emitted=tuple(emitted),
            emission_steps=tuple(emission_steps),
            steps_run=steps,
            final=_snapshot(state, tape, head, emitted, steps),
            trace=None if trace is None else tuple(trace),
        )

    t = 0
    while t < budget.max_steps:
        scan = tape.get(head, BLANK)
        rule = table.get((state, scan))
        if rule is None:
            if halt_symbol:
                raise StuckUndefinedError(state, scan, t)
            return outcome(Halted(steps=t, reason=HaltReason.NO_RULE), t)
        if rule.write is not None and rule.write != scan:
            if scan != BLANK:
                h ^= _key("c", head, scan)
            if rule.write == BLANK:
                del tape[head]
            else:
                tape[head] = rule.write
                h ^= _key("c", head, rule.write)
        if rule.emit is not None:
            emitted.append(rule.emit)
            emission_steps.append(t + 1)
        if rule.move is not Move.N:
            h ^= _key("h", head)
            head += rule.move.value
            h ^= _key("h", head)
        if rule.goto != state:
            h ^= _key("s", state)
            state = rule.goto
            h ^= _key("s", state)
        t += 1
        if keep_trace:
            trace.append(_snapshot(state, tape, head, emitted, t))
        if halt_symbol and rule.write == HALTMARK:
            return outcome(Halted(steps=t, reason=HaltReason.HALT_SYMBOL), t)
        if budget.max_cells is not None and len(tape) > budget.max_cells:
            return outcome(BudgetExhausted("max_cells"), t)
        earlier = seen.get(h)
        if earlier is not None:
            past_state, past_tape, past_head = _core_at(m, initial_tape, earlier)
            if past_state == state and past_head == head and past_tape == tape:
                return outcome(
                    ProvablyLooping(first_repeat_step=t, period=t - earlier), t
                )
            # fingerprint collision: distinct cores, keep going
        elif len(seen) < budget.max_seen_configs:
            seen[h] = t
        # a full table degrades detection (misses are possible, hits are
        # still exact-verified), so the verdict can only soften to Unknown
    return outcome(BudgetExhausted("max_steps"), budget.max_steps)


def universal(e: int, initial_tape=(), budget: Budget = Budget(max_steps=1000), *, keep_trace: bool = False) -> RunOutcome:
    """Run the machine a description number denotes: run(decode(e), ...)."""
    return run(decode(e), initial_tape, budget, keep_trace=keep_trace)


def classify(m: Machine, initial_tape=(), budget: Budget = Budget(max_steps=1000)):
    """Halted | ProvablyLooping | Unknown; the first two are never wrong."""
    v = run(m, initial_tape, budget).verdict
    if isinstance(v, BudgetExhausted):
        return Unknown(v.limit)
    return v


@dataclass(frozen=True)
class DigitPrefix:
    digits: tuple[int, ...]
    steps: tuple[int, ...]


@dataclass(frozen=True)
class Insufficient:
    digits: tuple[int, ...]
    steps: tuple[int, ...]
    outcome: RunOutcome


def emit_digits(m: Machine, n: int, budget: Budget, initial_tape=()) -> DigitPrefix | Insufficient:
    """First n emitted digits, counting only emissions within max_steps.

    A verified emitting loop lets the engine stop simulating early: the
    cycle's emissions repeat with its period, so the remaining events up to
    max_steps are computed arithmetically.  The answer is exactly what a
    full simulation to max_steps would have produced.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    out = run(m, initial_tape, budget)
    digits = list(out.emitted)
    steps = list(out.emission_steps)
    if isinstance(out.verdict, ProvablyLooping) and len(digits) < n:
        t2 = out.verdict.first_repeat_step
        period = out.verdict.period
        t1 = t2 - period
        cycle = [(s, d) for s, d in zip(steps, digits) if t1 < s <= t2]
        shift = period
        while cycle and len(digits) < n:
            advanced = [(s + shift, d) for s, d in cycle]
            if advanced[0][0] > budget.max_steps:
                break
            for s, d in advanced:
                if s > budget.max_steps or len(digits) >= n:
                    break
                steps.append(s)
                digits.append(d)
            shift += period
    if len(digits) >= n:
        return DigitPrefix(digits=tuple(digits[:n]), steps=tuple(steps[:n]))
    return Insufficient(digits=tuple(digits), steps=tuple(steps), outcome=out)


def trace_records(m: Machine, initial_tape=(), budget: Budget = Budget(max_steps=1000)) -> list[dict]:
    """JSON-ready trace rows: step, state, head, ±8-cell window, action."""
    out = run(m, initial_tape, budget, keep_trace=True)
    table = _table_of(m)
    rows = []
    for c in out.trace:
        cells = dict(c.tape)
        window = "".join(cells.get(p, BLANK) for p in range(c.head - 8, c.head + 9))
        rule = table.get((c.state, c.scan()))
        if isinstance(out.verdict, Halted) and c.steps == out.steps_run:
            action = f"halted ({out.verdict.reason.value})"
        elif rule is None:
            action = "halted (no-rule)" if m.convention is Convention.HALT_STATE else "stuck"
        else:
            parts = []
            if rule.emit is not None:
                parts.append(f"emit {rule.emit}")
            if rule.write is not None:
                parts.append(f"write {rule.write}")
            parts.append(f"move {rule.move.name}")
            parts.append(f"goto {rule.goto}")
            action = " ".join(parts)
        rows.append(
            {
                "step": c.steps,
                "state": c.state,
                "head": c.head,
                "window": window,
                "action": action,
                "emitted_len": len(c.emitted),
            }
        )
    return rows

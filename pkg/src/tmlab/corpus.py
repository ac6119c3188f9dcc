"""Small named machines used across tests, demos and the CLI.

These are fixed reference points: simulator semantics, certificates,
reductions and the reals layer are all exercised against them, so their
behavior is part of the project's contract.
"""

from __future__ import annotations

from .machine import Machine, Move, Rule, make_machine

# Halts immediately: one state, empty table.
M_HALT = make_machine("M_HALT", "q0", {})

# Spins in place forever; the core configuration repeats with period 1.
M_SPIN = make_machine(
    "M_SPIN",
    "q0",
    {("q0", "_"): Rule(move=Move.N, goto="q0")},
)

# Emits 0, 1, 0, 1, ... while walking right.  Never halts, and because the
# head keeps moving the core configuration never repeats either.
M_EMIT01 = make_machine(
    "M_EMIT01",
    "q0",
    {
        ("q0", "_"): Rule(emit=0, move=Move.R, goto="q1"),
        ("q1", "_"): Rule(emit=1, move=Move.R, goto="q0"),
    },
)

# Emits a single 1, then spins silently.
M_EMIT_ONE = make_machine(
    "M_EMIT_ONE",
    "q0",
    {
        ("q0", "_"): Rule(emit=1, move=Move.N, goto="q1"),
        ("q1", "_"): Rule(move=Move.N, goto="q1"),
    },
)

# Walks right forever without writing or emitting.
M_RUN = make_machine(
    "M_RUN",
    "q0",
    {("q0", "_"): Rule(move=Move.R, goto="q0")},
)

# Emits 1, 1, 0 and halts; its third emission (the 0) lands at step 3.
M_PRINT0_AT_3 = make_machine(
    "M_PRINT0_AT_3",
    "q0",
    {
        ("q0", "_"): Rule(emit=1, move=Move.R, goto="q1"),
        ("q1", "_"): Rule(emit=1, move=Move.R, goto="q2"),
        ("q2", "_"): Rule(emit=0, move=Move.R, goto="q3"),
    },
)

NAMED = {
    m.name: m
    for m in (M_HALT, M_SPIN, M_EMIT01, M_EMIT_ONE, M_RUN, M_PRINT0_AT_3)
}


def constant_emitter(digit: int, base: int = 10, name: str | None = None) -> Machine:
    """One digit per step, forever.  constant_emitter(2) stands for 2/9."""
    return make_machine(
        name or f"M_CONST{digit}",
        "q0",
        {("q0", "_"): Rule(emit=digit, move=Move.N, goto="q0")},
        base=base,
    )


def delay_halter(delay: int, name: str | None = None) -> Machine:
    """Halts after exactly ``delay`` steps, emitting nothing.

    A plain chain of states: exact timing matters more than compactness,
    since these calibrate bounded-simulation deciders.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    rules = {
        (f"q{i}", "_"): Rule(move=Move.N, goto=f"q{i + 1}") for i in range(delay)
    }
    return make_machine(name or f"M_HALT_AT_{delay}", "q0", rules)


def delay_looper(delay: int, name: str | None = None) -> Machine:
    """Runs ``delay`` distinct steps, then spins in place forever.

    The first core repetition happens at steps (delay, delay + 1), so a
    loop detector needs a budget beyond ``delay`` to prove anything.
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    rules = {
        (f"q{i}", "_"): Rule(move=Move.N, goto=f"q{i + 1}") for i in range(delay)
    }
    rules[(f"q{delay}", "_")] = Rule(move=Move.N, goto=f"q{delay}")
    return make_machine(name or f"M_LOOP_AT_{delay}", "q0", rules)


def emitter_then_halt(digits: tuple[int, ...], base: int = 2, name: str | None = None) -> Machine:
    """Emits the given digits one per step, then halts."""
    rules = {
        (f"q{i}", "_"): Rule(emit=d, move=Move.N, goto=f"q{i + 1}")
        for i, d in enumerate(digits)
    }
    return make_machine(name or "M_EMIT_THEN_HALT", "q0", rules, base=base)


def prefix_then_constant(
    prefix: tuple[int, ...], tail: int, base: int = 10, name: str | None = None
) -> Machine:
    """Emits ``prefix`` one digit per step, then ``tail`` forever.

    Stays put, so its value is the eventually periodic fraction
    0.p1 p2 ... pk tail tail ... in the given base.
    """
    rules = {
        (f"q{i}", "_"): Rule(emit=d, move=Move.N, goto=f"q{i + 1}")
        for i, d in enumerate(prefix)
    }
    last = f"q{len(prefix)}"
    rules[(last, "_")] = Rule(emit=tail, move=Move.N, goto=last)
    tag = "".join(str(d) for d in prefix) or "e"
    return make_machine(name or f"M_PFX{tag}_{tail}", "q0", rules, base=base)


def delayed_emitter(
    delay: int, digits: tuple[int, ...], base: int = 2, name: str | None = None
) -> Machine:
    """Runs ``delay`` silent steps, emits ``digits`` one per step, halts.

    The first digit lands at step delay + 1; the halt at delay + len(digits).
    """
    if delay < 0:
        raise ValueError("delay must be non-negative")
    rules = {
        (f"q{i}", "_"): Rule(move=Move.N, goto=f"q{i + 1}") for i in range(delay)
    }
    for j, d in enumerate(digits):
        rules[(f"q{delay + j}", "_")] = Rule(emit=d, move=Move.N, goto=f"q{delay + j + 1}")
    return make_machine(name or f"M_DELAY{delay}_EMIT", "q0", rules, base=base)


def _counter_rules(width: int) -> dict[tuple[str, str], Rule]:
    """Binary counter driven through 2**width increments.

    Setup marks cell 0 with S and cell width+1 with E; the counter lives
    between them.  Overflow leaves the head on E in state "carry" with no
    rule, so callers decide what happens there.  A dozen states buy
    thousands of steps, which keeps long-running ladder machines cheap to
    decode and simulate.
    """
    if width < 1:
        raise ValueError("width must be positive")
    rules: dict[tuple[str, str], Rule] = {
        ("m0", "_"): Rule(write="S", move=Move.R, goto="m1")
    }
    for i in range(1, width + 1):
        nxt = f"m{i + 1}" if i < width else "endmark"
        rules[(f"m{i}", "_")] = Rule(move=Move.R, goto=nxt)
    rules[("endmark", "_")] = Rule(write="E", move=Move.L, goto="back")
    for sym in ("_", "0", "1"):
        rules[("back", sym)] = Rule(move=Move.L, goto="back")
    rules[("back", "S")] = Rule(move=Move.R, goto="carry")
    rules[("carry", "_")] = Rule(write="1", move=Move.L, goto="back")
    rules[("carry", "0")] = Rule(write="1", move=Move.L, goto="back")
    rules[("carry", "1")] = Rule(write="0", move=Move.R, goto="carry")
    return rules


def counter_halter(width: int, name: str | None = None) -> Machine:
    """Halts silently after roughly 7 * 2**width steps."""
    return make_machine(name or f"M_COUNT{width}_HALT", "m0", _counter_rules(width))


def counter_emitter(width: int, digit: int, base: int = 2, name: str | None = None) -> Machine:
    """Emits ``digit`` once at overflow time, then halts."""
    rules = _counter_rules(width)
    rules[("carry", "E")] = Rule(emit=digit, move=Move.N, goto="done")
    return make_machine(
        name or f"M_COUNT{width}_EMIT{digit}", "m0", rules, base=base
    )


def counter_looper(width: int, name: str | None = None) -> Machine:
    """Spins in place after overflow; provably looping, but only after
    the whole count has run."""
    rules = _counter_rules(width)
    rules[("carry", "E")] = Rule(move=Move.N, goto="spin")
    rules[("spin", "E")] = Rule(move=Move.N, goto="spin")
    return make_machine(name or f"M_COUNT{width}_LOOP", "m0", rules)


# Predicate machines for the forall-exists construction.  Input protocol:
# the tape holds 1^n | 1^k from the start cell; the machine halts with its
# verdict as the last emitted digit (1 accepts, 0 rejects), staying within
# its input plus the one blank cell after it and never left of the start.

PRED_NEVER = make_machine(
    "PRED_NEVER",
    "z0",
    {
        ("z0", "1"): Rule(emit=0, move=Move.N, goto="z1"),
        ("z0", "|"): Rule(emit=0, move=Move.N, goto="z1"),
        ("z0", "_"): Rule(emit=0, move=Move.N, goto="z1"),
    },
    alphabet=("_", "1", "|"),
)

# accepts exactly n = 0, 1, 2 regardless of k
PRED_SMALL = make_machine(
    "PRED_SMALL",
    "s0",
    {
        ("s0", "1"): Rule(move=Move.R, goto="s1"),
        ("s0", "|"): Rule(emit=1, move=Move.N, goto="sd"),
        ("s1", "1"): Rule(move=Move.R, goto="s2"),
        ("s1", "|"): Rule(emit=1, move=Move.N, goto="sd"),
        ("s2", "1"): Rule(move=Move.R, goto="s3"),
        ("s2", "|"): Rule(emit=1, move=Move.N, goto="sd"),
        ("s3", "1"): Rule(emit=0, move=Move.N, goto="sd"),
        ("s3", "|"): Rule(emit=0, move=Move.N, goto="sd"),
    },
    alphabet=("_", "1", "|"),
)

# accepts iff k == n: crosses off 1s on both sides of the separator
PRED_DIAGONAL = make_machine(
    "PRED_DIAGONAL",
    "m0",
    {
        ("m0", "1"): Rule(write="a", move=Move.R, goto="m1"),
        ("m0", "|"): Rule(move=Move.R, goto="m4"),
        ("m1", "1"): Rule(move=Move.R, goto="m1"),
        ("m1", "|"): Rule(move=Move.R, goto="m2"),
        ("m2", "b"): Rule(move=Move.R, goto="m2"),
        ("m2", "1"): Rule(write="b", move=Move.L, goto="m3"),
        ("m2", "_"): Rule(emit=0, move=Move.N, goto="md"),
        ("m3", "b"): Rule(move=Move.L, goto="m3"),
        ("m3", "|"): Rule(move=Move.L, goto="m3"),
        ("m3", "1"): Rule(move=Move.L, goto="m3"),
        ("m3", "a"): Rule(move=Move.R, goto="m0"),
        ("m4", "b"): Rule(move=Move.R, goto="m4"),
        ("m4", "1"): Rule(emit=0, move=Move.N, goto="md"),
        ("m4", "_"): Rule(emit=1, move=Move.N, goto="md"),
    },
    alphabet=("_", "1", "|", "a", "b"),
)

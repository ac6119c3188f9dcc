"""A corpus of would-be deciders, classifiers and adders for the refuters.

Every entry is total (it answers every instance) and wrong somewhere; the
point of the corpus is that the refutation machinery finds the mistake
and certifies it.  The mistakes are the honest kinds: bounded simulation
that gives up too early, optimism or pessimism about the unknown region,
and heuristics that consult the description instead of the behavior.

``machine_decider`` closes the loop for object-language candidates: a
machine that reads a description number in binary and emits its verdict
as a final digit is wrapped into the same CandidateDecider shape, so the
refuters apply to it unchanged.
"""

from __future__ import annotations

from fractions import Fraction

from .codec import decode, encode
from .corpus import prefix_then_constant
from .diag import (
    Adder,
    CandidateDecider,
    CircleFreeClassifier,
    DTimeout,
    HaltingDecider,
    PrintingDecider,
)
from .machine import Machine, Move, Rule, StuckUndefinedError, make_machine
from .reduce import DecisionProblem, OracleAnswer, ProblemTag
from .runner import (
    Budget,
    DigitPrefix,
    Halted,
    ProvablyLooping,
    Unknown,
    classify,
    emit_digits,
    run,
)

YES = OracleAnswer.YES
NO = OracleAnswer.NO


def _halting(name: str, answer) -> CandidateDecider:
    return CandidateDecider(name, HaltingDecider(), answer)


def _printing(name: str, answer, digit: int = 0) -> CandidateDecider:
    return CandidateDecider(name, PrintingDecider(digit), answer)


def _halts_within(p: DecisionProblem, steps: int) -> OracleAnswer:
    m = decode(p.machine)
    try:
        out = run(m, p.input, Budget(max_steps=steps))
    except StuckUndefinedError:
        return NO
    return YES if isinstance(out.verdict, Halted) else NO


def _sim_halting(steps: int) -> CandidateDecider:
    return _halting(f"sim-{steps}", lambda p: _halts_within(p, steps))


def _classified(p: DecisionProblem, steps: int):
    try:
        return classify(decode(p.machine), p.input, Budget(max_steps=steps))
    except StuckUndefinedError:
        return Unknown(steps)


def _optimistic_no(p: DecisionProblem) -> OracleAnswer:
    return YES if isinstance(_classified(p, 1000), Halted) else NO


def _optimistic_yes(p: DecisionProblem) -> OracleAnswer:
    return NO if isinstance(_classified(p, 1000), ProvablyLooping) else YES


def _emits_means_halts(p: DecisionProblem) -> OracleAnswer:
    got = _emitted_within(p, 500)
    return YES if got else NO


def _emitted_within(p: DecisionProblem, steps: int) -> tuple[int, ...]:
    m = decode(p.machine)
    try:
        got = emit_digits(m, steps + 1, Budget(max_steps=steps), p.input)
    except StuckUndefinedError:
        return ()
    return got.digits


BUILTIN_HALTING: dict[str, CandidateDecider] = {
    d.name: d
    for d in (
        _halting("always-yes", lambda p: YES),
        _halting("always-no", lambda p: NO),
        _sim_halting(100),
        _sim_halting(1000),
        _sim_halting(5000),
        _sim_halting(10000),
        _halting("sim-1000-negated", lambda p: NO if _halts_within(p, 1000) is YES else YES),
        _halting("classify-1000-optimistic-no", _optimistic_no),
        _halting("classify-1000-optimistic-yes", _optimistic_yes),
        _halting("even-number-says-halts", lambda p: YES if p.machine % 2 == 0 else NO),
        _halting("few-states-say-halts", lambda p: YES if len(decode(p.machine).states) <= 2 else NO),
        _halting("emits-means-halts", _emits_means_halts),
    )
}


def _prints_within(p: DecisionProblem, steps: int) -> OracleAnswer:
    return YES if p.param in _emitted_within(p, steps) else NO


def _scan_printing(steps: int) -> CandidateDecider:
    return _printing(f"scan-{steps}", lambda p: _prints_within(p, steps))


def _first_digit_only(p: DecisionProblem) -> OracleAnswer:
    got = _emitted_within(p, 1000)
    return YES if got and got[0] == p.param else NO


def _halt_means_no(p: DecisionProblem) -> OracleAnswer:
    # a silent halt inside the window proves eternal silence; anything
    # still running is optimistically expected to print eventually
    if _prints_within(p, 1000) is YES:
        return YES
    return NO if isinstance(_classified(p, 1000), Halted) else YES


BUILTIN_PRINTING: dict[str, CandidateDecider] = {
    d.name: d
    for d in (
        _printing("always-yes", lambda p: YES),
        _printing("always-no", lambda p: NO),
        _scan_printing(100),
        _scan_printing(1000),
        _scan_printing(5000),
        _scan_printing(10000),
        _printing("scan-1000-negated", lambda p: NO if _prints_within(p, 1000) is YES else YES),
        _printing("first-digit-only", _first_digit_only),
        _printing("halt-means-no", _halt_means_no),
        _printing("odd-number-says-prints", lambda p: YES if p.machine % 2 else NO),
        _printing("many-states-say-prints", lambda p: YES if len(decode(p.machine).states) > 2 else NO),
        _printing("emits-anything", lambda p: YES if _emitted_within(p, 1000) else NO),
    )
}


# --- classifiers for the diagonal --------------------------------------------


def ground_truth_classifier(
    digits: int = 20, budget: Budget = Budget(max_steps=10_000), name: str | None = None
) -> CandidateDecider:
    """Accepts exactly the machines that supply ``digits`` digits within
    ``budget``: truthful on its own bounded notion of circle-free, which
    is all a host procedure can be."""

    def answer(p: DecisionProblem) -> OracleAnswer:
        m = decode(p.machine)
        try:
            got = emit_digits(m, digits, budget)
        except StuckUndefinedError:
            return NO
        return YES if isinstance(got, DigitPrefix) else NO

    return CandidateDecider(
        name or f"emits-{digits}-within-{budget.max_steps}", CircleFreeClassifier(), answer
    )


ACCEPT_EVERYTHING = CandidateDecider("accept-everything", CircleFreeClassifier(), lambda p: YES)
ACCEPT_NOTHING = CandidateDecider("accept-nothing", CircleFreeClassifier(), lambda p: NO)

BUILTIN_CLASSIFIERS: dict[str, CandidateDecider] = {
    d.name: d
    for d in (ground_truth_classifier(), ACCEPT_EVERYTHING, ACCEPT_NOTHING)
}


# --- object-language candidates ----------------------------------------------


def machine_decider(
    kind, number: int, budget: Budget = Budget(max_steps=10_000), name: str | None = None
) -> CandidateDecider:
    """Wrap an object-language verdict machine as a CandidateDecider.

    The machine runs on the instance's description number spelled in
    binary on its tape (on blank tape if its alphabet has no 0/1 cells)
    and its last emitted digit is the verdict, 1 for yes.  Failing to
    halt in budget, or halting without a verdict digit, is a totality
    breach and surfaces as DTimeout when queried.
    """
    m = decode(number)
    dname = name or f"machine-{number % 100000}"

    def answer(p: DecisionProblem) -> OracleAnswer:
        if "0" in m.alphabet and "1" in m.alphabet:
            tape = tuple(format(p.machine, "b"))
        else:
            tape = ()
        try:
            out = run(m, tape, budget)
        except StuckUndefinedError:
            raise DTimeout(dname, 0.0, budget.max_steps)
        if not isinstance(out.verdict, Halted) or not out.emitted:
            raise DTimeout(dname, 0.0, budget.max_steps)
        return YES if out.emitted[-1] == 1 else NO

    return CandidateDecider(dname, kind, answer)


# --- adders -------------------------------------------------------------------


def _digit_machine(digits: tuple[int, ...]) -> int:
    """Description number of a machine emitting ``digits`` then zeros."""
    return encode(prefix_then_constant(digits, 0, name="M_SUM"))


def _stream_prefix(number: int, k: int, budget: Budget) -> tuple[int, ...] | None:
    try:
        got = emit_digits(decode(number), k, budget)
    except StuckUndefinedError:
        return None
    return got.digits if isinstance(got, DigitPrefix) else None


_SILENT_DECIMAL = encode(
    make_machine(
        "M_MUTE10", "q0", {("q0", "_"): Rule(move=Move.N, goto="q0")}, base=10
    )
)


def lookahead_adder(k: int, round_up: bool, name: str | None = None) -> CandidateDecider:
    """Reads k digits of each stream, commits the sum's first value cell.

    The true sum lies in [t, t + 2/10^k) where t is the truncated sum;
    rounding down commits t's cell, rounding up the interval top's cell.
    Sound whenever no carry can reach the committed position, wrong when
    one does: the adversary's switch point at or past k exploits exactly
    that.
    """

    def answer(na: int, nb: int) -> int:
        pa = _stream_prefix(na, k, Budget(max_steps=50_000))
        pb = _stream_prefix(nb, k, Budget(max_steps=50_000))
        if pa is None or pb is None:
            return _SILENT_DECIMAL
        t = sum(Fraction(d, 10 ** (i + 1)) for i, d in enumerate(pa))
        t += sum(Fraction(d, 10 ** (i + 1)) for i, d in enumerate(pb))
        corner = t + (Fraction(2, 10**k) if round_up else 0)
        cell = int(corner * 10)  # 0..19: leading value cell of the sum
        return _digit_machine((cell // 10, cell % 10))

    direction = "up" if round_up else "down"
    return CandidateDecider(name or f"lookahead-{k}-{direction}", Adder(), answer)


BUILTIN_ADDERS: dict[str, CandidateDecider] = {
    d.name: d
    for d in (
        CandidateDecider("eager-nines", Adder(), lambda na, nb: _digit_machine((0, 9))),
        CandidateDecider("eager-one-zero", Adder(), lambda na, nb: _digit_machine((1, 0))),
        lookahead_adder(3, round_up=False),
        lookahead_adder(6, round_up=True),
    )
}

# Total but never productive: the adversary reports this one as AUndecided
# rather than with interval evidence.
WAIT_FOREVER = CandidateDecider(
    "wait-forever", Adder(), lambda na, nb: _SILENT_DECIMAL
)

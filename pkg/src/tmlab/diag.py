"""Diagonalization made executable.

Four constructions share one shape: given a total host procedure that
claims to decide something undecidable, produce a concrete machine whose
certified behavior contradicts the claim.

* refute_halting_decider / refute_printing_decider: the classical "do the
  opposite of the prediction about yourself".  The candidate is a host
  procedure, so its answer is obtained at construction time and the
  contradicting machine is selected rather than self-compiled: the refuter
  scans a ladder of machines with certifiable behavior for one where the
  prediction and the certificate disagree.  The first two rungs are the
  canonical pair (an immediate self-loop, an immediate halt), so a
  constant decider is contradicted exactly the way the textbook q is.
  The self-referential instance "q on q" is realized as the machine's own
  description number with a blank tape.
* diagonal_digits: Cantor's flipped stream over whatever the classifier
  accepts.  A classifier that accepts a machine unable to supply its
  diagonal digit hands us a ClassifierCounterexample, which is the
  construction working, not failing.
* fixed_point: behavioral fixed points of description-number
  transformations, found by following the transformation's orbit and then
  searching a structured pool, verified by emitted-prefix and halting
  status agreement at every tested budget.
* adder_adversary: the carry problem.  b emits 7s while watching what the
  candidate adder claims about a + b, then commits to the tail (8s or 0s)
  that pushes the true sum out of the claimed first-digit cell.

Totality of candidates is enforced cooperatively: each query is wall-
clock-metered against a nominal steps-per-second rate after it returns.
A query that never returns cannot be preempted here; external commands
get real timeouts at the CLI boundary.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .certs import (
    CannotCertify,
    HaltsAt,
    LoopsForever,
    PrintsSymbolAt,
    TraceCertificate,
    Valid,
    canonical_setup,
    check_certificate,
    make_certificate,
)
from .codec import encode, decode, enumerate_machines
from .corpus import (
    M_EMIT01,
    M_EMIT_ONE,
    M_HALT,
    M_RUN,
    M_SPIN,
    constant_emitter,
    counter_emitter,
    counter_halter,
    counter_looper,
    delay_halter,
    delay_looper,
    delayed_emitter,
    emitter_then_halt,
    prefix_then_constant,
)
from .machine import (
    Configuration,
    Machine,
    Move,
    Rule,
    StuckUndefinedError,
    fresh_state,
    make_machine,
    step,
)
from .reduce import DecisionProblem, OracleAnswer, ProblemTag, to_halt_state
from .runner import (
    Budget,
    Halted,
    Insufficient,
    RunOutcome,
    emit_digits,
)

NOMINAL_STEPS_PER_SECOND = 1_000_000


# --- candidate procedures ----------------------------------------------------


@dataclass(frozen=True)
class HaltingDecider:
    pass


@dataclass(frozen=True)
class PrintingDecider:
    digit: int = 0


@dataclass(frozen=True)
class CircleFreeClassifier:
    pass


@dataclass(frozen=True)
class Adder:
    base: int = 10


DeciderKind = HaltingDecider | PrintingDecider | CircleFreeClassifier | Adder


@dataclass(frozen=True)
class CandidateDecider:
    """A total host procedure under test, plus its per-query budget.

    ``answer`` takes the kind's instance shape: a DecisionProblem for the
    decider kinds, two description numbers for an Adder.
    """

    name: str
    kind: DeciderKind
    answer: Callable
    timeout_steps: int = 1_000_000


class TimeoutRefutation(Exception):
    """The candidate broke its totality budget on a concrete query."""

    def __init__(self, name: str, elapsed: float, limit_steps: int):
        super().__init__(
            f"{name} spent {elapsed:.3f}s on one query "
            f"(budget {limit_steps} nominal steps)"
        )
        self.name = name
        self.elapsed = elapsed
        self.limit_steps = limit_steps


class DTimeout(TimeoutRefutation):
    pass


class FTimeout(TimeoutRefutation):
    pass


class ATimeout(TimeoutRefutation):
    pass


class AUndecided(Exception):
    """The adder's output stream never produced the digits being watched."""

    def __init__(self, name: str, have: int, budget: int):
        super().__init__(
            f"{name} emitted {have} digit(s) within {budget} steps; "
            "an adder must be productive"
        )
        self.name = name
        self.have = have
        self.budget = budget


class RefuterExhausted(Exception):
    """No ladder machine contradicted the candidate.

    Cannot happen for the built-in corpus; a candidate correct on every
    rung defeats this desk-scale search even though the classical
    construction would still beat it.
    """

    def __init__(self, name: str, scanned: int):
        super().__init__(f"{name} survived all {scanned} ladder machines")
        self.name = name
        self.scanned = scanned


class FixedPointNotFound(Exception):
    pass


def _expect_kind(cand: CandidateDecider, kind_type) -> None:
    if not isinstance(cand.kind, kind_type):
        raise TypeError(f"{cand.name} has kind {cand.kind!r}, need {kind_type.__name__}")


def _metered(cand: CandidateDecider, err, *args):
    t0 = time.monotonic()
    ans = cand.answer(*args)
    elapsed = time.monotonic() - t0
    if elapsed * NOMINAL_STEPS_PER_SECOND > cand.timeout_steps:
        raise err(cand.name, elapsed, cand.timeout_steps)
    return ans


def _ask(cand: CandidateDecider, problem: DecisionProblem, err=DTimeout) -> OracleAnswer:
    ans = _metered(cand, err, problem)
    if not isinstance(ans, OracleAnswer):
        raise TypeError(f"{cand.name} answered {ans!r}, not an OracleAnswer")
    return ans


# --- refutations -------------------------------------------------------------


@dataclass(frozen=True)
class Refutation:
    """A certified wrong answer.

    ``observed`` validates independently via check_certificate and, per
    ``narrative``, contradicts ``predicted`` on ``problem``.
    """

    decider: str
    problem: DecisionProblem
    counterexample: Machine
    input: tuple[str, ...]
    predicted: OracleAnswer
    observed: TraceCertificate
    narrative: str


def validate_refutation(r: Refutation) -> tuple[bool, str]:
    """Re-derive everything the refutation asserts from its certificate."""
    v = check_certificate(r.observed)
    if not isinstance(v, Valid):
        return False, f"certificate invalid: {v.reason}"
    number, mc, renamed = canonical_setup(r.counterexample, r.input)
    if number != r.observed.machine or number != r.problem.machine:
        return False, "certificate, problem and counterexample name different machines"
    cells = tuple((i, s) for i, s in enumerate(renamed) if s != mc.alphabet[0])
    if r.observed.initial != Configuration(state=mc.start, tape=cells, head=0):
        return False, "certificate initial configuration does not match the input"
    claim = r.observed.claim
    tag = r.problem.tag
    if tag is ProblemTag.HALT:
        if r.predicted is OracleAnswer.YES:
            if isinstance(claim, LoopsForever):
                return True, "said-halts-but-provably-loops"
            return False, "predicted halting needs a loop certificate"
        if isinstance(claim, HaltsAt):
            return True, "said-never-halts-but-halts"
        return False, "predicted non-halting needs a halt certificate"
    if tag is ProblemTag.PRINTS:
        digit = r.problem.param
        if r.predicted is OracleAnswer.NO:
            if isinstance(claim, PrintsSymbolAt) and claim.digit == digit:
                return True, "said-never-prints-but-prints"
            return False, "predicted non-printing needs a prints-digit certificate"
        if not isinstance(claim, HaltsAt):
            return False, "predicted printing needs a halt certificate"
        # halted silently: replay the certified history and inspect the ledger
        cur = r.observed.initial
        for _ in range(claim.step):
            cur = step(mc, cur).config
        if digit in cur.emitted:
            return False, "the machine did emit the digit before halting"
        return True, "said-prints-but-halts-without-it"
    return False, f"no refutation semantics for {tag}"


def _certified_refutation(
    cand: CandidateDecider,
    problem: DecisionProblem,
    m: Machine,
    predicted: OracleAnswer,
    claim,
    budget: Budget,
) -> Refutation:
    cert = make_certificate(m, problem.input, claim, budget)
    if isinstance(cert, CannotCertify):
        raise RuntimeError(f"internal: ladder behavior not certifiable: {cert.reason}")
    r = Refutation(
        decider=cand.name,
        problem=problem,
        counterexample=m,
        input=problem.input,
        predicted=predicted,
        observed=cert,
        narrative="",
    )
    ok, narrative = validate_refutation(r)
    if not ok:
        raise RuntimeError(f"internal: ladder produced a bad refutation: {narrative}")
    return dataclasses.replace(r, narrative=narrative)


_SMALL_DELAYS = (1, 2, 5, 10, 50, 101, 200)
# counter widths whose halt/loop times straddle the common simulation
# budgets 10^2..10^4 while staying inside the 20000-step certificate budget
_COUNTER_WIDTHS = (7, 8, 11, 12)


def _halting_ladder() -> Iterator[tuple[Machine, OracleAnswer]]:
    """Machines with certifiable halting status, canonical pair first.

    YES means the machine halts on blank tape; every rung is either an
    exact halter (halt certificate) or a verified looper (loop
    certificate), well within the refuter's certificate budget.  Long
    running times come from counter machines, not long chains, so every
    rung stays cheap to decode and simulate.
    """
    yield delay_looper(0), OracleAnswer.NO
    yield delay_halter(0), OracleAnswer.YES
    yield constant_emitter(1, base=2), OracleAnswer.NO
    yield emitter_then_halt((1, 0)), OracleAnswer.YES
    for d in _SMALL_DELAYS:
        yield delay_halter(d), OracleAnswer.YES
        yield delay_looper(d), OracleAnswer.NO
    for w in _COUNTER_WIDTHS:
        yield counter_halter(w), OracleAnswer.YES
        yield counter_looper(w), OracleAnswer.NO


def _printing_ladder(digit: int) -> Iterator[tuple[Machine, OracleAnswer]]:
    """Machines whose prints-``digit`` status is certifiable both ways.

    YES rungs emit the digit at a known step; NO rungs halt, so silence
    is permanent and a halt certificate plus an empty ledger settles it.
    """
    other = 1 - digit
    yield M_HALT, OracleAnswer.NO
    yield emitter_then_halt((digit,), name=f"M_EMIT{digit}_NOW"), OracleAnswer.YES
    yield emitter_then_halt((other,), name=f"M_EMIT{other}_NOW"), OracleAnswer.NO
    yield emitter_then_halt((other, digit), name="M_EMIT_LATE"), OracleAnswer.YES
    yield counter_emitter(8, other), OracleAnswer.NO
    yield delayed_emitter(100, (digit,)), OracleAnswer.YES
    yield counter_halter(8), OracleAnswer.NO
    for w in _COUNTER_WIDTHS:
        yield counter_emitter(w, digit), OracleAnswer.YES


def refute_halting_decider(
    cand: CandidateDecider, cert_budget: Budget = Budget(max_steps=20_000)
) -> Refutation:
    """Find a machine whose certified halting behavior contradicts cand.

    A constant Yes is contradicted by the first rung (a stay-put self-loop,
    loop certificate of period 1); a constant No by the second (an
    immediate halt).  Bounded or heuristic deciders fall to deeper rungs.
    """
    _expect_kind(cand, HaltingDecider)
    scanned = 0
    for m, truth in _halting_ladder():
        scanned += 1
        problem = DecisionProblem(ProblemTag.HALT, machine=encode(m), input=())
        predicted = _ask(cand, problem)
        if predicted is truth:
            continue
        claim = HaltsAt() if truth is OracleAnswer.YES else LoopsForever()
        return _certified_refutation(cand, problem, m, predicted, claim, cert_budget)
    raise RefuterExhausted(cand.name, scanned)


def refute_printing_decider(
    cand: CandidateDecider, cert_budget: Budget = Budget(max_steps=20_000)
) -> Refutation:
    """Halting refuter with "halts" replaced by "ever emits the digit"."""
    _expect_kind(cand, PrintingDecider)
    digit = cand.kind.digit
    if digit not in (0, 1):
        raise ValueError("printing refuter works over base-2 digit streams")
    scanned = 0
    for m, truth in _printing_ladder(digit):
        scanned += 1
        problem = DecisionProblem(ProblemTag.PRINTS, machine=encode(m), param=digit)
        predicted = _ask(cand, problem)
        if predicted is truth:
            continue
        claim = PrintsSymbolAt(digit=digit) if truth is OracleAnswer.YES else HaltsAt()
        return _certified_refutation(cand, problem, m, predicted, claim, cert_budget)
    raise RefuterExhausted(cand.name, scanned)


def refute(cand: CandidateDecider, **kw) -> Refutation:
    if isinstance(cand.kind, HaltingDecider):
        return refute_halting_decider(cand, **kw)
    if isinstance(cand.kind, PrintingDecider):
        return refute_printing_decider(cand, **kw)
    raise TypeError(f"no refuter for kind {cand.kind!r}")


# --- the diagonal stream -----------------------------------------------------


@dataclass(frozen=True)
class DiagonalDigits:
    digits: tuple[int, ...]
    machines: tuple[Machine, ...]


@dataclass(frozen=True)
class ClassifierCounterexample:
    """The classifier accepted ``machine`` as p_index, but it cannot supply
    its index-th digit: the accepted list is not a list of circle-free
    machines.  For the test suite this is a success condition."""

    machine: Machine
    index: int
    outcome: RunOutcome


@dataclass(frozen=True)
class EmptyListExhausted:
    scanned: int


def diagonal_digits(
    classifier: CandidateDecider, n: int, b: Budget, scan_cap: int = 5_000
) -> DiagonalDigits | ClassifierCounterexample | EmptyListExhausted:
    """beta: flip the i-th digit of the i-th accepted base-2 machine.

    Machines come from the description-number enumeration; the classifier
    is asked about each base-2 machine in order and the accepted ones form
    p_1, p_2, ...  Digit i of the result is 1 - (i-th digit of p_i) under
    the budget.  An accepted machine that cannot produce its digit is
    returned as a ClassifierCounterexample; a classifier that never
    collects n machines within scan_cap candidates yields
    EmptyListExhausted.
    """
    _expect_kind(classifier, CircleFreeClassifier)
    if n < 1:
        raise ValueError("n must be positive")
    accepted: list[Machine] = []
    digits: list[int] = []
    scanned = 0
    index = 0
    while len(accepted) < n and scanned < scan_cap:
        m = enumerate_machines(index)
        index += 1
        scanned += 1
        if m.base != 2:
            continue
        problem = DecisionProblem(ProblemTag.CIRCLE_FREE, machine=encode(m))
        if _ask(classifier, problem) is OracleAnswer.NO:
            continue
        accepted.append(m)
        i = len(accepted)
        got = emit_digits(m, i, b)
        if isinstance(got, Insufficient):
            return ClassifierCounterexample(machine=m, index=i, outcome=got.outcome)
        digits.append(1 - got.digits[i - 1])
    if len(accepted) < n:
        return EmptyListExhausted(scanned=scanned)
    return DiagonalDigits(digits=tuple(digits), machines=tuple(accepted))


# --- behavioral fixed points -------------------------------------------------


def bounded_behavior(n: int, max_steps: int) -> tuple[str, tuple[int, ...]]:
    """(status, emitted digits) of decode(n) on blank tape within max_steps.

    Status is one of halted/running/stuck; digits are exactly what a full
    simulation to max_steps would have put in the ledger (verified loops
    are extended arithmetically).
    """
    m = decode(n)
    try:
        got = emit_digits(m, max_steps + 1, Budget(max_steps=max_steps))
    except StuckUndefinedError as exc:
        if exc.steps == 0:
            return "stuck", ()
        pre = emit_digits(m, exc.steps + 1, Budget(max_steps=exc.steps))
        return "stuck", pre.digits
    status = "halted" if isinstance(got.outcome.verdict, Halted) else "running"
    return status, got.digits


def behaviorally_equal(e1: int, e2: int, budgets) -> bool:
    return all(bounded_behavior(e1, b) == bounded_behavior(e2, b) for b in budgets)


def fixed_point_pool() -> list[int]:
    """Search pool: silent machines, constant and periodic emitters of both
    conventions' reach, short halters, and an enumeration prefix."""
    named = [
        M_HALT,
        M_SPIN,
        M_RUN,
        M_EMIT01,
        M_EMIT_ONE,
        constant_emitter(0, base=2),
        constant_emitter(1, base=2),
        emitter_then_halt((0,)),
        emitter_then_halt((1,)),
        emitter_then_halt((1, 0)),
        delay_halter(1),
        delay_halter(2),
        delay_halter(3),
        delay_looper(1),
        delay_looper(2),
    ]
    named.extend(constant_emitter(d) for d in range(10))
    pool = [encode(m) for m in named]
    pool.extend(encode(enumerate_machines(i)) for i in range(150))
    return pool


def fixed_point(
    f: Callable[[int], int],
    budgets: tuple[int, ...] = (1_000, 10_000),
    pool: list[int] | None = None,
    orbit_depth: int = 12,
    timeout_steps: int = 10_000_000,
) -> int:
    """A description number e with decode(e) behaviorally equal to
    decode(f(e)): identical emitted digits and halting status on blank
    tape at every budget in ``budgets``.

    Follows f's orbit first (a literal cycle is an exact fixed point;
    constant and idempotent transformations land there), then searches the
    pool for a behavioral fixed point.  FTimeout if one application of f
    overruns its budget; FixedPointNotFound when the search is exhausted.
    """
    wrapped = CandidateDecider("f", HaltingDecider(), f, timeout_steps=timeout_steps)

    def apply(e: int) -> int:
        fe = _metered(wrapped, FTimeout, e)
        if not isinstance(fe, int) or fe < 0:
            raise TypeError(f"transformation returned {fe!r}, not a description number")
        return fe

    # size cap: a growing orbit means f is not settling, and feeding its
    # iterates back in gets expensive fast
    e = encode(M_HALT)
    for _ in range(orbit_depth):
        fe = apply(e)
        if fe == e:
            return e
        if fe.bit_length() > 4_000:
            break
        e = fe
    for e in pool if pool is not None else fixed_point_pool():
        fe = apply(e)
        if fe == e or behaviorally_equal(e, fe, budgets):
            return e
    raise FixedPointNotFound("no behavioral fixed point in the search pool")


def _prepend_digit(d: int) -> Callable[[int], int]:
    """Machine transformation: emit d once, then behave as the original."""

    def f(n: int) -> int:
        m = decode(n)
        if d >= m.base:
            return n
        taken = set(m.states)
        boot = fresh_state("boot", taken)
        rules = {(boot, a): Rule(emit=d, move=Move.N, goto=m.start) for a in m.alphabet}
        rules.update(dict(m.transitions))
        return encode(
            make_machine(
                f"{m.name}+{d}", boot, rules,
                alphabet=m.alphabet, base=m.base, convention=m.convention,
            )
        )

    return f


def _delay_start(k: int) -> Callable[[int], int]:
    """Machine transformation: k silent stay-put steps before the original."""

    def f(n: int) -> int:
        m = decode(n)
        taken = set(m.states)
        chain = [fresh_state(f"warm{i}", taken) for i in range(k)]
        rules = dict(m.transitions)
        for i, s in enumerate(chain):
            nxt = chain[i + 1] if i + 1 < k else m.start
            for a in m.alphabet:
                rules[(s, a)] = Rule(move=Move.N, goto=nxt)
        return encode(
            make_machine(
                f"{m.name}>>{k}", chain[0], rules,
                alphabet=m.alphabet, base=m.base, convention=m.convention,
            )
        )

    return f


def _strip_emissions_num(n: int) -> int:
    import dataclasses

    m = decode(n)
    rules = {k: dataclasses.replace(r, emit=None) for k, r in m.transitions}
    return encode(
        make_machine(
            f"{m.name}:mute", m.start, rules,
            alphabet=m.alphabet, base=m.base, convention=m.convention,
        )
    )


def _swap_binary(n: int) -> int:
    import dataclasses

    m = decode(n)
    if m.base != 2:
        return n
    rules = {
        k: (dataclasses.replace(r, emit=1 - r.emit) if r.emit is not None else r)
        for k, r in m.transitions
    }
    return encode(
        make_machine(
            f"{m.name}:swap", m.start, rules,
            alphabet=m.alphabet, base=m.base, convention=m.convention,
        )
    )


def _double_digits(n: int) -> int:
    """Every emission happens twice: the original step, then an echo step."""
    m = decode(n)
    taken = set(m.states)
    rules: dict[tuple[str, str], Rule] = {}
    echoes: dict[tuple[int, str], str] = {}
    for (s, a), r in m.transitions:
        if r.emit is None:
            rules[(s, a)] = r
            continue
        key = (r.emit, r.goto)
        echo = echoes.get(key)
        if echo is None:
            echo = fresh_state("echo", taken)
            echoes[key] = echo
            for sym in m.alphabet:
                rules[(echo, sym)] = Rule(emit=r.emit, move=Move.N, goto=r.goto)
        rules[(s, a)] = Rule(write=r.write, emit=r.emit, move=r.move, goto=echo)
    return encode(
        make_machine(
            f"{m.name}:x2", m.start, rules,
            alphabet=m.alphabet, base=m.base, convention=m.convention,
        )
    )


def _loopify(n: int) -> int:
    """Remove every way to halt: holes become stay-put self-loops."""
    m = to_halt_state(decode(n))
    rules = dict(m.transitions)
    for s in m.states:
        for a in m.alphabet:
            rules.setdefault((s, a), Rule(move=Move.N, goto=s))
    return encode(
        make_machine(f"{m.name}:inf", m.start, rules, alphabet=m.alphabet, base=m.base)
    )


def transformation_suite() -> list[tuple[str, Callable[[int], int]]]:
    """Named total transformations with findable fixed points."""
    consts = [
        ("const-halt", M_HALT),
        ("const-spin", M_SPIN),
        ("const-run", M_RUN),
        ("const-emit01", M_EMIT01),
        ("const-emit-one", M_EMIT_ONE),
        ("const-zeros", constant_emitter(0, base=2)),
        ("const-ones", constant_emitter(1, base=2)),
        ("const-sevens", constant_emitter(7)),
    ]
    suite: list[tuple[str, Callable[[int], int]]] = [
        (name, (lambda c: lambda _n: encode(c))(m)) for name, m in consts
    ]
    p1 = _prepend_digit(1)
    suite.extend(
        [
            ("identity", lambda n: n),
            ("recode", lambda n: encode(decode(n))),
            ("prepend-0", _prepend_digit(0)),
            ("prepend-1", p1),
            ("prepend-1-twice", lambda n: p1(p1(n))),
            ("delay-1", _delay_start(1)),
            ("delay-2", _delay_start(2)),
            ("delay-5", _delay_start(5)),
            ("strip-emissions", _strip_emissions_num),
            ("swap-binary-digits", _swap_binary),
            ("double-digits", _double_digits),
            ("loopify", _loopify),
            ("to-halt-state", lambda n: encode(to_halt_state(decode(n)))),
            ("const-first-valid", lambda n: encode(enumerate_machines(0))),
        ]
    )
    return suite


# --- the carry-problem adversary ---------------------------------------------


@dataclass(frozen=True)
class CarryEvidence:
    """Exact-rational record of the adder's wrong commitment.

    The claimed interval is the digit cell the adder's first emitted
    digits pin the sum into; the true sum is a + b computed exactly from
    the streams' rational values.  The violation is just
    "true_sum outside [lo, hi)" and can be re-checked with no reference
    to how b was chosen.
    """

    adder: str
    switch: str  # sevens | eights | zeros
    switch_point: int  # sevens emitted before the tail takes over
    claimed_digits: tuple[int, ...]
    claimed_interval: tuple[Fraction, Fraction]
    a_value: Fraction
    b_value: Fraction
    true_sum: Fraction
    sum_number: int
    digits_budget: int


def _claimed_interval(digits: tuple[int, ...]) -> tuple[Fraction, Fraction]:
    """Digit cell of the sum stream's opening.

    A leading 0 or 1 is an integer part and the next digit refines it;
    any other leading digit is already fractional (sums of two proper
    streams stay below 2, so this reading is exhaustive).
    """
    d0 = digits[0]
    if d0 in (0, 1):
        d1 = digits[1]
        lo = d0 + Fraction(d1, 10)
        return lo, lo + Fraction(1, 10)
    return Fraction(d0, 10), Fraction(d0 + 1, 10)


def _reaction(interval: tuple[Fraction, Fraction]) -> str:
    if interval == (Fraction(9, 10), Fraction(1)):
        return "eights"
    if interval == (Fraction(1), Fraction(11, 10)):
        return "zeros"
    return "sevens"


def _needed_digits(digits: tuple[int, ...]) -> bool:
    return len(digits) >= 2 or (len(digits) == 1 and digits[0] not in (0, 1))


def _watch_first_digits(
    name: str, msum: Machine, ladder: tuple[int, ...]
) -> tuple[tuple[int, ...], int]:
    digits: tuple[int, ...] = ()
    for b in ladder:
        got = emit_digits(msum, 2, Budget(max_steps=b))
        digits = got.digits
        if _needed_digits(digits):
            return digits, b
    raise AUndecided(name, have=len(digits), budget=ladder[-1])


def _tail_value(prefix_len: int, tail: int) -> Fraction:
    head = Fraction(7, 9) * (1 - Fraction(1, 10**prefix_len))
    return head + Fraction(tail, 9) / 10**prefix_len


def adder_adversary(
    cand: CandidateDecider,
    base: int = 10,
    switch_points: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64),
    watch_budgets: tuple[int, ...] = (100, 1_000, 10_000, 100_000),
) -> tuple[Machine, Machine, CarryEvidence]:
    """a = 0.222..., b = 7s that switch on the adder's first commitment.

    For each candidate shape of b (all 7s, or j 7s then all 8s / all 0s),
    the adder's output on (a, b) is interpreted under a geometric budget
    ladder.  b is the candidate whose tail matches the reaction its own
    sum provokes: a 0.9-cell commitment demands the 8s tail (true sum
    rises above 1), a 1.0-cell commitment demands the 0s tail (true sum
    stays below 1), anything else keeps the 7s (true sum is exactly 1).
    Bounded-lookahead adders cannot tell these b's apart, so some rung
    matches and its exact rationals convict the commitment.
    """
    _expect_kind(cand, Adder)
    if base != 10:
        raise ValueError("the adversary's policy table is decimal")
    a = constant_emitter(2)
    na = encode(a)
    candidates: list[tuple[str, Machine, Fraction, int]] = [
        ("sevens", constant_emitter(7), Fraction(7, 9), 0)
    ]
    for j in switch_points:
        sevens = (7,) * j
        candidates.append(
            ("eights", prefix_then_constant(sevens, 8), _tail_value(j, 8), j)
        )
        candidates.append(
            ("zeros", prefix_then_constant(sevens, 0), _tail_value(j, 0), j)
        )
    for shape, b, b_value, j in candidates:
        ns = _metered(cand, ATimeout, na, encode(b))
        if not isinstance(ns, int) or ns < 0:
            raise TypeError(f"{cand.name} returned {ns!r}, not a description number")
        digits, used = _watch_first_digits(cand.name, decode(ns), watch_budgets)
        interval = _claimed_interval(digits)
        if _reaction(interval) != shape:
            continue
        ev = CarryEvidence(
            adder=cand.name,
            switch=shape,
            switch_point=j,
            claimed_digits=digits,
            claimed_interval=interval,
            a_value=Fraction(2, 9),
            b_value=b_value,
            true_sum=Fraction(2, 9) + b_value,
            sum_number=ns,
            digits_budget=used,
        )
        ok, why = check_carry_evidence(ev)
        if not ok:
            raise RuntimeError(f"internal: adversary evidence failed its own check: {why}")
        return a, b, ev
    raise RefuterExhausted(cand.name, len(candidates))


def check_carry_evidence(ev: CarryEvidence) -> tuple[bool, str]:
    """Exact re-verification of the interval violation and the replay."""
    lo, hi = ev.claimed_interval
    if _claimed_interval(ev.claimed_digits) != (lo, hi):
        return False, "interval does not match the claimed digits"
    if ev.true_sum != ev.a_value + ev.b_value:
        return False, "true sum is not the sum of the parts"
    if lo <= ev.true_sum < hi:
        return False, "the claimed cell actually contains the true sum"
    got = emit_digits(
        decode(ev.sum_number), len(ev.claimed_digits), Budget(max_steps=ev.digits_budget)
    )
    if isinstance(got, Insufficient) or got.digits != ev.claimed_digits:
        return False, "the adder's output does not replay the claimed digits"
    return True, "interval violation verified"

"""The eight shipping criteria, one test per criterion, budgets pinned.

Each test prints a PASS line once its assertions have gone through, so a
verbose run reads as a checklist.  Every expected value here is either
recomputed by the naive oracles in oracles.py or checked as an exact
rational; nothing is trusted from the code under test.
"""

import math
import time
from fractions import Fraction

from oracles import (
    first_step,
    naive_full_configs,
    naive_trace,
    nth_step,
    stream_rational,
)

from tmlab.certs import (
    CannotCertify,
    EmitsNthDigitAt,
    HaltsAt,
    LoopsForever,
    PrintsSymbolAt,
    Valid,
    cert_from_json,
    cert_to_json,
    check_certificate,
    make_certificate,
)
from tmlab.codec import decode, encode, first_machines, parse_text, render
from tmlab.corpus import (
    NAMED,
    PRED_DIAGONAL,
    PRED_NEVER,
    PRED_SMALL,
    constant_emitter,
    counter_emitter,
    delay_halter,
    delay_looper,
    emitter_then_halt,
)
from tmlab.deciders import (
    ACCEPT_EVERYTHING,
    BUILTIN_ADDERS,
    BUILTIN_HALTING,
    BUILTIN_PRINTING,
    ground_truth_classifier,
)
from tmlab.diag import (
    ClassifierCounterexample,
    DiagonalDigits,
    adder_adversary,
    bounded_behavior,
    diagonal_digits,
    fixed_point,
    refute_halting_decider,
    refute_printing_decider,
    transformation_suite,
    validate_refutation,
)
from tmlab.machine import Convention, StuckUndefinedError
from tmlab.reals import (
    DigitStreamReal,
    Undetermined,
    digit_to_modulus,
    modulus_arith,
    modulus_to_digits,
    Op,
)
from tmlab.reduce import (
    DecisionProblem,
    OracleAnswer,
    ProblemTag,
    ov_halting_to_ndigits,
    ov_halting_to_omd,
    ov_halting_to_printing,
    ov_ndigits_to_halting,
    ov_omd_to_halting,
    ov_printing_to_halting,
    halting_to_ndigits,
    halting_to_omd,
    halting_to_printing,
    ndigits_to_halting,
    omd_to_halting,
    pi02_to_circlefree,
    printing_to_halting,
)
from tmlab.runner import (
    Budget,
    Halted,
    ProvablyLooping,
    Unknown,
    classify,
    run,
    universal,
)

SWEEP_SIZE = 500
BUDGETS = (100, 1_000, 10_000)
SOURCE_HORIZON = 30_000  # past the top budget, for loop-soundness evidence

_CACHE: dict = {}


def sweep_machines():
    """First SWEEP_SIZE valid machines with their naive blank-tape traces."""
    if "sweep" not in _CACHE:
        rows = []
        for m in first_machines(SWEEP_SIZE):
            rows.append((m, naive_trace(m, max_steps=SOURCE_HORIZON)))
        _CACHE["sweep"] = rows
    return _CACHE["sweep"]


# --- criterion 1: reduction soundness sweep ----------------------------------


def _bounded_truth(src_time, tgt_time, ov, ctx):
    """Source event within B iff target event within ov(B), at every B;
    when the source event is inside the horizon, the target time is the
    declared overhead applied to it, exactly."""
    if src_time is not None and src_time <= BUDGETS[-1]:
        assert tgt_time == ov(src_time), f"{ctx}: declared overhead is off"
    for b in BUDGETS:
        src = src_time is not None and src_time <= b
        tgt = tgt_time is not None and tgt_time <= ov(b)
        assert src == tgt, f"{ctx}: truth mismatch at budget {b}"


def test_criterion_1_reduction_soundness_sweep():
    t0 = time.perf_counter()
    top = BUDGETS[-1]
    for m, tr in sweep_machines():
        halted = tr.halted_at
        ems = tr.emissions
        name = m.name

        q = halting_to_printing(m, ())
        qt = naive_trace(q, max_steps=ov_halting_to_printing(top) + 1)
        _bounded_truth(halted, first_step(qt.emissions, digit=0),
                       ov_halting_to_printing, f"halting_to_printing({name})")

        p = printing_to_halting(m, 0)
        pt = naive_trace(p, max_steps=ov_printing_to_halting(top) + 1)
        _bounded_truth(first_step(ems, digit=0), pt.halted_at,
                       ov_printing_to_halting, f"printing_to_halting({name})")

        p = ndigits_to_halting(m, 2)
        pt = naive_trace(p, max_steps=ov_ndigits_to_halting(top, 2) + 1)
        _bounded_truth(nth_step(ems, 2), pt.halted_at,
                       lambda b: ov_ndigits_to_halting(b, 2),
                       f"ndigits_to_halting({name})")

        q = halting_to_ndigits(m, ())
        qt = naive_trace(q, max_steps=ov_halting_to_ndigits(top, 2) + 1)
        _bounded_truth(halted, nth_step(qt.emissions, 2),
                       lambda b: ov_halting_to_ndigits(b, 2),
                       f"halting_to_ndigits({name})")

        p = omd_to_halting(m, 1)
        pt = naive_trace(p, max_steps=ov_omd_to_halting(top, 1) + 1)
        _bounded_truth(first_step(ems, after=1), pt.halted_at,
                       lambda b: ov_omd_to_halting(b, 1),
                       f"omd_to_halting({name})")

        q, t = halting_to_omd(m, ())
        assert t == 0
        qt = naive_trace(q, max_steps=ov_halting_to_omd(top) + 1)
        _bounded_truth(halted, first_step(qt.emissions, after=t),
                       ov_halting_to_omd, f"halting_to_omd({name})")

    elapsed = time.perf_counter() - t0
    assert elapsed < 300, f"sweep took {elapsed:.0f}s, budget is 300s"
    print(f"\nPASS 1: six reductions sound over {SWEEP_SIZE} machines x "
          f"budgets {BUDGETS} in {elapsed:.0f}s")


# --- criterion 2: refuter completeness on the builtin corpus ------------------


def test_criterion_2_refuter_completeness():
    assert len(BUILTIN_HALTING) >= 10
    assert len(BUILTIN_PRINTING) >= 10
    for name, cand in sorted(BUILTIN_HALTING.items()):
        r = refute_halting_decider(cand)  # any escape raises RefuterExhausted
        ok, why = validate_refutation(r)
        assert ok, f"{name}: {why}"
        assert isinstance(check_certificate(r.observed), Valid), name
    for name, cand in sorted(BUILTIN_PRINTING.items()):
        r = refute_printing_decider(cand)
        ok, why = validate_refutation(r)
        assert ok, f"{name}: {why}"
        assert isinstance(check_certificate(r.observed), Valid), name
    print(f"\nPASS 2: {len(BUILTIN_HALTING)} halting + {len(BUILTIN_PRINTING)} "
          "printing deciders refuted, certificates all check, zero escapes")


# --- criterion 3: the carry problem ------------------------------------------


def _claimed_interval(digits):
    """Interval a digit-stream prefix pins its value into, recomputed here
    from scratch: a leading 0 or 1 is an integer part and the next digit
    is the first fractional one; anything else is already fractional."""
    if digits[0] <= 1:
        whole, frac = digits[0], digits[1]
        lo = whole + Fraction(frac, 10)
    else:
        lo = Fraction(digits[0], 10)
    return lo, lo + Fraction(1, 10)


def test_criterion_3_carry_problem():
    b = Budget(max_steps=50_000)
    two_ninths = digit_to_modulus(DigitStreamReal(0, constant_emitter(2)), b)
    seven_ninths = digit_to_modulus(DigitStreamReal(0, constant_emitter(7)), b)
    total = modulus_arith(Op.ADD, two_ninths, seven_ninths)

    for n in range(1, 25):
        q = total.approx(n)
        assert abs(q - 1) <= Fraction(1, 2**n), f"approx({n}) = {q}"

    # the extractor's precision schedule is the same at every tie budget,
    # so failing to separate through the first 2^16 precision raises means
    # failing at every tie_budget <= 2^16; spot-check the separation test
    # itself at the deepest precisions that schedule would reach
    for tb in (1, 2, 64, 1024):
        got = modulus_to_digits(total, 1, tie_budget=tb)
        assert isinstance(got, Undetermined) and got.position == 1, tb
    for p in (4_096, 16_384, 65_536):
        q = total.approx(p)
        eps = Fraction(1, 2**p)
        lo, hi = q - eps, q + eps
        assert lo < 1 <= hi  # truncated streams approach 1 from below
        assert math.floor(lo * 10) != math.floor(hi * 10), p

    assert len(BUILTIN_ADDERS) >= 3
    tails = {"eights": 8, "zeros": 0}
    for name, cand in sorted(BUILTIN_ADDERS.items()):
        a, bb, ev = adder_adversary(cand)
        assert ev.adder == name
        # re-verify the evidence with exact rationals, from scratch
        assert ev.a_value == Fraction(2, 9)
        j, tail = ev.switch_point, tails[ev.switch]
        assert ev.b_value == stream_rational((7,) * j, tail, 10)
        assert ev.true_sum == ev.a_value + ev.b_value
        lo, hi = _claimed_interval(ev.claimed_digits)
        assert (lo, hi) == ev.claimed_interval
        assert not (lo <= ev.true_sum < hi), name
        replay = naive_trace(decode(ev.sum_number), max_steps=ev.digits_budget)
        assert tuple(replay.digits[: len(ev.claimed_digits)]) == ev.claimed_digits
    print(f"\nPASS 3: 2/9 + 7/9 pins to 1 within 2^-24, digit extraction "
          f"refuses through tie budget 2^16, {len(BUILTIN_ADDERS)} adders defeated")


# --- criterion 4: fixed points for a transformation suite ---------------------


def test_criterion_4_fixed_point_suite():
    suite = transformation_suite()
    assert len(suite) >= 20
    for name, f in suite:
        e = fixed_point(f)
        fe = f(e)
        _, a = bounded_behavior(e, 10_000)
        _, bd = bounded_behavior(fe, 10_000)
        assert a[:10] == bd[:10], f"{name}: prefixes disagree"
        assert min(len(a), 10) == min(len(bd), 10), f"{name}: one side ran dry"
    print(f"\nPASS 4: {len(suite)} transformations all admit a fixed point, "
          "10-digit prefix agreement at budget 10^4, zero disagreements")


# --- criterion 5: the diagonal against a truthful classifier ------------------


def test_criterion_5_diagonal_construction():
    b = Budget(max_steps=10_000)
    gt = ground_truth_classifier(digits=20, budget=b)

    # truthfulness over the first 50 machines: the classifier's answer is
    # the naive oracle's answer, machine by machine
    for m in first_machines(50):
        said = gt.answer(DecisionProblem(ProblemTag.CIRCLE_FREE, encode(m)))
        truth = len(naive_trace(m, max_steps=10_000).emissions) >= 20
        assert said is (OracleAnswer.YES if truth else OracleAnswer.NO), m.name

    res = diagonal_digits(gt, 20, b)
    assert isinstance(res, DiagonalDigits)
    assert len(res.digits) == 20
    for i, (digit, m) in enumerate(zip(res.digits, res.machines), start=1):
        stream = naive_trace(m, max_steps=10_000).digits
        assert len(stream) >= i
        assert digit != stream[i - 1], f"position {i} does not differ"
        assert digit in (0, 1) and m.base == 2

    res = diagonal_digits(ACCEPT_EVERYTHING, 20, b)
    assert isinstance(res, ClassifierCounterexample)
    print("\nPASS 5: beta(20) differs from p_i at position i for all i <= 20; "
          "accept-everything yields a counterexample")


# --- criterion 6: the forall-exists construction -------------------------------


def test_criterion_6_forall_exists_emission_counts():
    budget = 100_000
    unbounded = naive_trace(pi02_to_circlefree(PRED_DIAGONAL), max_steps=budget)
    assert len(unbounded.emissions) >= 10
    assert unbounded.halted_at is None and unbounded.stuck_at is None

    three_a = naive_trace(pi02_to_circlefree(PRED_SMALL), max_steps=budget)
    three_b = naive_trace(pi02_to_circlefree(PRED_SMALL), max_steps=2 * budget)
    assert len(three_a.emissions) == len(three_b.emissions) == 3

    silent = naive_trace(pi02_to_circlefree(PRED_NEVER), max_steps=budget)
    assert silent.emissions == []
    assert silent.halted_at is None and silent.stuck_at is None
    print("\nPASS 6: predicate examples emit >= 10 / exactly 3 / exactly 0 "
          f"within {budget} steps")


# --- criterion 7: certificate soundness ----------------------------------------


CERT_CORPUS = [
    (NAMED["M_HALT"], HaltsAt()),
    (NAMED["M_HALT"], HaltsAt(step=0)),
    (delay_halter(7), HaltsAt(step=7)),
    (delay_halter(101), HaltsAt()),
    (NAMED["M_SPIN"], LoopsForever()),
    (delay_looper(3), LoopsForever()),
    (NAMED["M_EMIT01"], PrintsSymbolAt(digit=1)),
    (NAMED["M_PRINT0_AT_3"], PrintsSymbolAt(digit=0, step=3)),
    (NAMED["M_EMIT01"], EmitsNthDigitAt(n=4)),
    (emitter_then_halt((1, 0, 1), name="E101"), EmitsNthDigitAt(n=3, step=3)),
    (counter_emitter(4, 1), PrintsSymbolAt(digit=1)),
]


def _statement_true(cert) -> bool:
    """Replay the tampered statement with a dict-tape simulation that
    honors an arbitrary initial configuration; True iff the claim holds
    of the decoded machine."""
    try:
        m = decode(cert.machine)
    except Exception:
        return False
    table = dict(m.transitions)
    tape = {pos: sym for pos, sym in cert.initial.tape}
    head, state = cert.initial.head, cert.initial.state
    if state not in m.states:
        return False
    claim = cert.claim
    if not isinstance(claim.step, int) or claim.step < 0:
        return False
    period = claim.period if isinstance(claim, LoopsForever) else 0
    if isinstance(claim, LoopsForever) and (
        not isinstance(period, int) or period < 1 or period > claim.step
    ):
        return False
    horizon = claim.step + 1
    hs = m.convention is Convention.HALT_SYMBOL
    snapshots = []
    emissions = []
    halted_at = None
    for t in range(horizon + 1):
        snapshots.append((state, tuple(sorted(tape.items())), head))
        if halted_at is not None:
            break
        rule = table.get((state, tape.get(head, "_")))
        if rule is None:
            if not hs:
                halted_at = t
                continue
            return False  # stuck machines witness nothing
        if rule.write is not None:
            if rule.write == "_":
                tape.pop(head, None)
            else:
                tape[head] = rule.write
        if rule.emit is not None:
            emissions.append((t + 1, rule.emit))
        head += {"L": -1, "R": 1, "N": 0}[rule.move.name]
        state = rule.goto
        if hs and rule.write == "!":
            halted_at = t + 1
    if isinstance(claim, HaltsAt):
        return halted_at == claim.step
    if isinstance(claim, LoopsForever) and halted_at is not None:
        return False
    # a digit emitted during the machine's final step coexists with the
    # halt at that same count, so only an earlier halt falsifies
    if halted_at is not None and halted_at < claim.step:
        return False
    if isinstance(claim, PrintsSymbolAt):
        return (claim.step, claim.digit) in emissions
    if isinstance(claim, EmitsNthDigitAt):
        upto = [s for s, _ in emissions if s <= claim.step]
        return len(upto) == claim.n and upto[-1] == claim.step
    if isinstance(claim, LoopsForever):
        if len(snapshots) <= claim.step:
            return False
        return snapshots[claim.step] == snapshots[claim.step - period]
    return False


def _statement(cert):
    i = cert.initial
    return (cert.machine, i.state, i.tape, i.head, cert.claim)


def test_criterion_7_certificate_soundness():
    documents = []
    for m, claim in CERT_CORPUS:
        cert = make_certificate(m, (), claim, Budget(max_steps=2_000))
        assert not isinstance(cert, CannotCertify), (m.name, claim)
        assert isinstance(check_certificate(cert), Valid), (m.name, claim)
        documents.append((m, cert, cert_to_json(cert)))

    statements = {_statement(c) for _, c, _ in documents}
    flips = accepted_forgeries = accepted_lies = accepted_true = 0
    for m, cert, text in documents:
        raw = text.encode()
        for i in range(len(raw)):
            tampered = raw[:i] + bytes([raw[i] ^ 0x01]) + raw[i + 1:]
            flips += 1
            try:
                c2 = cert_from_json(tampered.decode())
            except Exception:
                continue  # rejected at parse
            if not isinstance(check_certificate(c2), Valid):
                continue  # rejected at replay
            # accepted: it must be a different statement, and a true one
            if _statement(c2) in statements:
                accepted_forgeries += 1
            elif _statement_true(c2):
                accepted_true += 1
            else:
                accepted_lies += 1
    assert accepted_forgeries == 0, "a tampered copy passed as an original"
    assert accepted_lies == 0, "a tampered certificate of a falsehood passed"
    print(f"\nPASS 7: {len(documents)} witnessed claims certify and check; "
          f"{flips} single-byte tampers, 0 accepted forgeries, 0 accepted "
          f"lies ({accepted_true} flips landed on other true statements)")


# --- criterion 8: infrastructure ------------------------------------------------


def full_corpus():
    extra = [
        delay_halter(5), delay_looper(5), constant_emitter(9),
        counter_emitter(5, 1), emitter_then_halt((1, 1, 0), name="E110"),
    ]
    return list(NAMED.values()) + extra


def test_criterion_8_infrastructure():
    for m in full_corpus():
        assert parse_text(render(m)) == m, m.name
        n = encode(m)
        assert encode(decode(n)) == n, m.name

    def outcome(thunk):
        try:
            return thunk()
        except StuckUndefinedError as exc:
            return ("stuck", exc.state, exc.symbol, exc.steps)

    b = Budget(max_steps=2_000)
    for m, _ in sweep_machines()[:200]:
        n = encode(m)
        via_number = outcome(lambda: universal(n, (), b, keep_trace=True))
        direct = outcome(lambda: run(m, (), b, keep_trace=True))
        assert via_number == direct, m.name

    checked = halted = looping = unknown = stuck = 0
    for m, tr in sweep_machines():
        for budget in BUDGETS:
            v = outcome(lambda: classify(m, (), Budget(max_steps=budget)))
            checked += 1
            if isinstance(v, tuple):
                stuck += 1
                assert tr.stuck_at is not None and tr.stuck_at <= budget, m.name
            elif isinstance(v, Halted):
                halted += 1
                assert tr.halted_at == v.steps <= budget, m.name
            elif isinstance(v, ProvablyLooping):
                looping += 1
                assert tr.halted_at is None and tr.stuck_at is None, m.name
                configs = []
                for cfg in naive_full_configs(m, max_steps=v.first_repeat_step):
                    configs.append(cfg[:3])  # drop the emission ledger
                assert configs[v.first_repeat_step] == \
                    configs[v.first_repeat_step - v.period], m.name
            else:
                assert isinstance(v, Unknown)
                unknown += 1
                # no verdict may hide an in-budget halt or hole
                assert tr.halted_at is None or tr.halted_at > budget, m.name
                assert tr.stuck_at is None or tr.stuck_at > budget, m.name
    assert halted + looping + unknown + stuck == checked == 3 * SWEEP_SIZE
    print(f"\nPASS 8: corpus round-trips, universal == run on 200 machines, "
          f"classify sound on {checked} verdicts ({halted} halted / "
          f"{looping} looping / {stuck} stuck / {unknown} open)")

"""Reductions: exact overheads, bounded-truth equivalence, oracle builds."""

import pytest
from hypothesis import given, settings

from oracles import first_step, naive_trace, nth_step
from strategies import machines
from tmlab.codec import decode, encode, parse_text, render
from tmlab.corpus import (
    M_EMIT01,
    M_EMIT_ONE,
    M_HALT,
    M_PRINT0_AT_3,
    M_RUN,
    M_SPIN,
    PRED_DIAGONAL,
    PRED_NEVER,
    PRED_SMALL,
    constant_emitter,
    delay_halter,
    delay_looper,
    emitter_then_halt,
)
from tmlab.machine import Convention, MachineError, Move, Rule, make_machine
from tmlab.reduce import (
    DecisionProblem,
    Inconclusive,
    OracleAnswer,
    ProblemTag,
    circlefree_from_infinite,
    halting_to_ndigits,
    halting_to_omd,
    halting_to_printing,
    infinite_from_printing,
    ndigits_to_halting,
    omd_to_halting,
    ov_halting_to_ndigits,
    ov_halting_to_omd,
    ov_halting_to_printing,
    ov_ndigits_to_halting,
    ov_omd_to_halting,
    ov_printing_to_halting,
    ov_to_halt_symbol,
    ov_variant_pk,
    pi02_to_circlefree,
    printing_to_halting,
    to_halt_state,
    to_halt_symbol,
    variant_pk,
)

BUDGETS = (100, 1_000, 10_000)

# a halt-symbol machine that emits at step 1 and halts at step 2
HS_EMIT = make_machine(
    "HS_EMIT",
    "q0",
    {
        ("q0", "_"): Rule(emit=1, move=Move.R, goto="q1"),
        ("q1", "_"): Rule(write="!", move=Move.N, goto="q1"),
    },
    convention=Convention.HALT_SYMBOL,
)

# malformed under halt-symbol: runs two steps, then no rule matches
HS_STUCK = make_machine(
    "HS_STUCK",
    "q0",
    {
        ("q0", "_"): Rule(write="a", move=Move.N, goto="q1"),
        ("q1", "a"): Rule(move=Move.R, goto="q2"),
    },
    convention=Convention.HALT_SYMBOL,
    alphabet=("_", "!", "a"),
)

# halts after exactly |input| steps: scans rightward to the first blank
SEEK = make_machine(
    "SEEK",
    "q0",
    {
        ("q0", "a"): Rule(move=Move.R, goto="q0"),
        ("q0", "b"): Rule(move=Move.R, goto="q0"),
    },
    alphabet=("_", "a", "b"),
)


class TestOverheadFunctions:
    def test_declared_formulas(self):
        assert ov_halting_to_printing(100) == 8 + 100 + 4
        assert ov_halting_to_printing(100, input_len=2) == 16 + 100 + 4
        assert ov_printing_to_halting(100) == 102
        assert ov_ndigits_to_halting(100, 3) == 108
        assert ov_halting_to_ndigits(100, 1) == 8 + 100 + 6
        assert ov_halting_to_ndigits(100, 5, input_len=1) == 12 + 100 + 14
        assert ov_omd_to_halting(100, 0) == 104
        assert ov_omd_to_halting(100, 7) == 111
        assert ov_halting_to_omd(100) == ov_halting_to_ndigits(100, 1)
        assert ov_variant_pk(100, 4) == 108
        assert ov_to_halt_symbol(100) == 101


class TestConventionTranslations:
    def test_halt_symbol_to_halt_state_is_time_exact(self):
        before = naive_trace(HS_EMIT, max_steps=50)
        after = naive_trace(to_halt_state(HS_EMIT), max_steps=50)
        assert before.halted_at == after.halted_at == 2
        assert before.emissions == after.emissions == [(1, 1)]
        assert to_halt_state(HS_EMIT).convention is Convention.HALT_STATE

    def test_stuck_becomes_never_halting(self):
        t = naive_trace(to_halt_state(HS_STUCK), max_steps=2_000)
        assert t.halted_at is None and t.stuck_at is None

    def test_halt_state_machines_pass_through(self):
        assert to_halt_state(M_HALT) is M_HALT
        assert to_halt_symbol(HS_EMIT) is HS_EMIT

    def test_to_halt_symbol_shifts_halt_by_one(self):
        m = delay_halter(4)
        t = naive_trace(to_halt_symbol(m), max_steps=50)
        assert t.halted_at == 5

    def test_to_halt_symbol_renames_an_ordinary_bang(self):
        m = make_machine(
            "BANGS",
            "q0",
            {("q0", "_"): Rule(write="!", move=Move.R, goto="q1"),
             ("q1", "_"): Rule(move=Move.L, goto="q2"),
             ("q2", "!"): Rule(move=Move.N, goto="q3")},
            alphabet=("_", "!"),
        )
        twin = to_halt_symbol(m)
        src = naive_trace(m, max_steps=50)
        dst = naive_trace(twin, max_steps=50)
        assert src.halted_at == 3 and dst.halted_at == 4

    @settings(max_examples=30)
    @given(machines())
    def test_translation_preserves_halting_time(self, m):
        src = naive_trace(m, max_steps=200)
        dst = naive_trace(to_halt_state(m), max_steps=200)
        assert dst.stuck_at is None
        assert dst.halted_at == src.halted_at
        assert dst.emissions == src.emissions


class TestExactEventTimes:
    def test_halting_to_printing(self):
        tr = naive_trace(halting_to_printing(delay_halter(5)), max_steps=100)
        assert tr.emissions == [(ov_halting_to_printing(0) + 5, 0)]

    def test_halting_to_printing_with_input(self):
        q = halting_to_printing(SEEK, ("a", "b"))
        tr = naive_trace(q, max_steps=100)
        assert tr.emissions == [(ov_halting_to_printing(0, 2) + 2, 0)]

    def test_halting_to_printing_never_fires_for_a_spinner(self):
        tr = naive_trace(halting_to_printing(M_SPIN), max_steps=3_000)
        assert tr.emissions == []

    def test_sources_own_zeros_are_suppressed(self):
        # emits a 0 at step 1 but never halts: q must stay silent
        p = constant_emitter(0, base=2, name="ZEROS")
        tr = naive_trace(halting_to_printing(p), max_steps=3_000)
        assert tr.emissions == []

    def test_printing_to_halting(self):
        p = printing_to_halting(M_PRINT0_AT_3, 0)
        assert naive_trace(p, max_steps=100).halted_at == 3 + 2

    def test_printing_to_halting_spins_when_digit_never_comes(self):
        p = printing_to_halting(M_HALT, 0)
        t = naive_trace(p, max_steps=3_000)
        assert t.halted_at is None and t.stuck_at is None

    def test_ndigits_to_halting(self):
        p = ndigits_to_halting(M_EMIT01, 3)
        assert naive_trace(p, max_steps=100).halted_at == 3 + 2 * 3 + 2

    def test_ndigits_to_halting_needs_all_n(self):
        p = ndigits_to_halting(M_EMIT_ONE, 2)
        assert naive_trace(p, max_steps=3_000).halted_at is None

    def test_halting_to_ndigits(self):
        q = halting_to_ndigits(delay_halter(2))
        tr = naive_trace(q, max_steps=60)
        want = [(ov_halting_to_ndigits(2, n), 1) for n in (1, 2, 3, 4)]
        assert tr.emissions[:4] == want

    def test_omd_to_halting(self):
        # M_PRINT0_AT_3 emits at steps 1, 2, 3
        assert naive_trace(omd_to_halting(M_PRINT0_AT_3, 2), max_steps=100).halted_at == 3 + 2 + 4
        assert naive_trace(omd_to_halting(M_PRINT0_AT_3, 3), max_steps=3_000).halted_at is None
        assert naive_trace(omd_to_halting(M_EMIT01, 0), max_steps=100).halted_at == 1 + 0 + 4

    def test_halting_to_omd(self):
        q, t = halting_to_omd(delay_halter(3))
        assert t == 0
        tr = naive_trace(q, max_steps=60)
        assert first_step(tr.emissions, after=t) == ov_halting_to_omd(3)


SWEEP_CORPUS = [
    (M_HALT, ((),)),
    (M_SPIN, ((),)),
    (M_RUN, ((),)),
    (M_EMIT01, ((),)),
    (M_EMIT_ONE, ((),)),
    (M_PRINT0_AT_3, ((),)),
    (delay_halter(0), ((),)),
    (delay_halter(7), ((),)),
    (delay_halter(100), ((),)),  # halts exactly at the smallest budget
    (delay_halter(101), ((),)),  # and just past it
    (delay_looper(5), ((),)),
    (constant_emitter(0, base=2, name="ZEROS2"), ((),)),
    (constant_emitter(1, base=2, name="ONES2"), ((),)),
    (emitter_then_halt((1, 0, 1), name="E101"), ((),)),
    (emitter_then_halt((0, 0), name="E00"), ((),)),
    (HS_EMIT, ((),)),
    (HS_STUCK, ((),)),
    (SEEK, ((), ("a",), ("a", "b", "a"))),
]


@pytest.fixture(scope="module")
def events():
    """Naive-oracle event data for every source machine and input."""
    data = {}
    for m, inputs in SWEEP_CORPUS:
        for x in inputs:
            tr = naive_trace(m, input_symbols=x, max_steps=BUDGETS[-1])
            data[(m.name, x)] = (m, tr.halted_at, tr.emissions)
    return data


class TestBoundedTruthSweep:
    """Source-problem truth at B iff target-problem truth at ov(B), for
    every reduction, corpus machine, and budget in {1e2, 1e3, 1e4}."""

    def check(self, src_time, tgt_time, ov, ctx):
        if src_time is not None:
            assert tgt_time == ov(src_time), f"{ctx}: exact time"
        for b in BUDGETS:
            src = src_time is not None and src_time <= b
            tgt = tgt_time is not None and tgt_time <= ov(b)
            assert src == tgt, f"{ctx} at budget {b}"

    def test_halting_to_printing(self, events):
        for (name, x), (m, halted, _) in events.items():
            q = halting_to_printing(m, x)
            tr = naive_trace(q, max_steps=ov_halting_to_printing(BUDGETS[-1], len(x)))
            self.check(
                halted,
                first_step(tr.emissions, digit=0),
                lambda b, L=len(x): ov_halting_to_printing(b, L),
                f"halting_to_printing({name}, {x})",
            )

    def test_printing_to_halting(self, events):
        for (name, x), (m, _, emissions) in events.items():
            if x:
                continue  # printing instances take no input
            for s in (0, 1):
                p = printing_to_halting(m, s)
                tr = naive_trace(p, max_steps=ov_printing_to_halting(BUDGETS[-1]))
                self.check(
                    first_step(emissions, digit=s),
                    tr.halted_at,
                    ov_printing_to_halting,
                    f"printing_to_halting({name}, {s})",
                )

    def test_ndigits_to_halting(self, events):
        for (name, x), (m, _, emissions) in events.items():
            if x:
                continue
            for n in (1, 3):
                p = ndigits_to_halting(m, n)
                tr = naive_trace(p, max_steps=ov_ndigits_to_halting(BUDGETS[-1], n))
                self.check(
                    nth_step(emissions, n),
                    tr.halted_at,
                    lambda b, n=n: ov_ndigits_to_halting(b, n),
                    f"ndigits_to_halting({name}, {n})",
                )

    def test_halting_to_ndigits(self, events):
        for (name, x), (m, halted, _) in events.items():
            q = halting_to_ndigits(m, x)
            hi = ov_halting_to_ndigits(BUDGETS[-1], 4, len(x))
            tr = naive_trace(q, max_steps=hi)
            for n in (1, 4):
                self.check(
                    halted,
                    nth_step(tr.emissions, n),
                    lambda b, n=n, L=len(x): ov_halting_to_ndigits(b, n, L),
                    f"halting_to_ndigits({name}, {x}) at n={n}",
                )

    def test_omd_to_halting(self, events):
        for (name, x), (m, _, emissions) in events.items():
            if x:
                continue
            for t in (0, 2):
                p = omd_to_halting(m, t)
                tr = naive_trace(p, max_steps=ov_omd_to_halting(BUDGETS[-1], t))
                self.check(
                    first_step(emissions, after=t),
                    tr.halted_at,
                    lambda b, t=t: ov_omd_to_halting(b, t),
                    f"omd_to_halting({name}, {t})",
                )

    def test_halting_to_omd(self, events):
        for (name, x), (m, halted, _) in events.items():
            q, t = halting_to_omd(m, x)
            assert t == 0
            tr = naive_trace(q, max_steps=ov_halting_to_omd(BUDGETS[-1], len(x)))
            self.check(
                halted,
                first_step(tr.emissions, after=t),
                lambda b, L=len(x): ov_halting_to_omd(b, L),
                f"halting_to_omd({name}, {x})",
            )


class TestVariants:
    def test_replacement_timeline(self):
        pk = variant_pk(constant_emitter(0, base=10, name="Z"), 2)
        assert pk.base == 11
        tr = naive_trace(pk, max_steps=20)
        # two substituted emissions with a 2-step pause after each, then
        # the real zeros run unshifted
        assert tr.emissions[:5] == [(1, 10), (4, 10), (7, 0), (8, 0), (9, 0)]

    def test_k_zero_is_the_same_machine(self):
        assert variant_pk(M_EMIT01, 0) is M_EMIT01
        pk = variant_pk(M_EMIT01, 3)
        assert variant_pk(pk, 0) is pk

    def test_machines_without_zeros_are_behaviorally_unchanged(self):
        p = constant_emitter(1, base=2, name="ONES")
        pk = variant_pk(p, 4)
        a = naive_trace(p, max_steps=100)
        b = naive_trace(pk, max_steps=100)
        assert a.emissions == b.emissions
        assert a.halted_at == b.halted_at

    def test_halt_symbol_source_keeps_its_convention(self):
        pk = variant_pk(HS_EMIT, 2)
        assert pk.convention is Convention.HALT_SYMBOL
        assert naive_trace(pk, max_steps=50).halted_at == 2

    def test_rejects_negative_k(self):
        with pytest.raises(MachineError):
            variant_pk(M_EMIT01, -1)

    @settings(max_examples=30)
    @given(machines())
    def test_first_surviving_zero_lands_at_declared_overhead(self, m):
        k = 2
        src = naive_trace(m, max_steps=300)
        zeros = [step for step, d in src.emissions if d == 0]
        pk = variant_pk(m, k)
        dst = naive_trace(pk, max_steps=ov_variant_pk(300, k))
        got = first_step(dst.emissions, digit=0)
        if len(zeros) > k:
            assert got == ov_variant_pk(zeros[k], k)
        else:
            assert got is None or got > ov_variant_pk(300, k) - 2 * k


class TestInfiniteFromPrinting:
    @staticmethod
    def oracle(budget=500):
        def ask(m):
            tr = naive_trace(m, max_steps=budget)
            hit = any(d == 0 for _, d in tr.emissions)
            return OracleAnswer.YES if hit else OracleAnswer.NO

        return ask

    def test_never_zero_settles_on_the_first_query(self):
        calls = []
        base = self.oracle()

        def spy(m):
            calls.append(m)
            return base(m)

        assert infinite_from_printing(constant_emitter(1, base=2, name="ONES"), spy) is OracleAnswer.NO
        assert len(calls) == 1  # the k=0 variant is the machine itself

    def test_single_zero_settles_on_the_second_query(self):
        calls = []
        base = self.oracle()

        def spy(m):
            calls.append(m)
            return base(m)

        p = emitter_then_halt((0,), name="ONE_ZERO")
        assert infinite_from_printing(p, spy) is OracleAnswer.NO
        assert len(calls) == 2  # the first variant has its only zero replaced

    def test_endless_zeros_exhaust_the_cap(self):
        with pytest.raises(Inconclusive) as exc:
            infinite_from_printing(
                constant_emitter(0, base=2, name="ZEROS"), self.oracle(), cap=8
            )
        assert exc.value.cap == 8

    def test_oracle_type_is_enforced(self):
        with pytest.raises(TypeError):
            infinite_from_printing(M_EMIT01, lambda m: True)


class TestCirclefreeFromInfinite:
    def test_yes_when_either_digit_recurs_forever(self):
        def only_ones(m, d):
            return OracleAnswer.YES if d == 1 else OracleAnswer.NO

        assert circlefree_from_infinite(M_EMIT01, only_ones) is OracleAnswer.YES
        assert circlefree_from_infinite(M_EMIT01, lambda m, d: OracleAnswer.YES) is OracleAnswer.YES

    def test_no_when_both_peter_out(self):
        assert circlefree_from_infinite(M_SPIN, lambda m, d: OracleAnswer.NO) is OracleAnswer.NO

    def test_asks_digit_zero_first_and_short_circuits(self):
        asked = []

        def orc(m, d):
            asked.append(d)
            return OracleAnswer.YES

        circlefree_from_infinite(M_EMIT01, orc)
        assert asked == [0]

    def test_requires_base_two(self):
        with pytest.raises(MachineError):
            circlefree_from_infinite(constant_emitter(2, base=10), lambda m, d: OracleAnswer.NO)

    def test_oracle_type_is_enforced(self):
        with pytest.raises(TypeError):
            circlefree_from_infinite(M_EMIT01, lambda m, d: "yes")


class TestPi02:
    def test_diagonal_predicate_keeps_emitting(self):
        e = pi02_to_circlefree(PRED_DIAGONAL)
        tr = naive_trace(e, max_steps=100_000)
        assert len(tr.emissions) >= 10
        assert all(d == 1 for _, d in tr.emissions)

    def test_small_predicate_emits_exactly_three(self):
        e = pi02_to_circlefree(PRED_SMALL)
        a = naive_trace(e, max_steps=100_000)
        b = naive_trace(e, max_steps=200_000)
        assert len(a.emissions) == len(b.emissions) == 3

    def test_rejecting_predicate_emits_nothing(self):
        e = pi02_to_circlefree(PRED_NEVER)
        tr = naive_trace(e, max_steps=100_000)
        assert tr.emissions == []
        assert tr.halted_at is None and tr.stuck_at is None

    def test_baked_input_shifts_the_pair(self):
        # with a leading 1 baked in, the diagonal predicate sees n+1 vs k,
        # so every round still eventually accepts
        e = pi02_to_circlefree(PRED_DIAGONAL, ("1",))
        tr = naive_trace(e, max_steps=100_000)
        assert len(tr.emissions) >= 5

    def test_halt_symbol_predicate_is_translated(self):
        e = pi02_to_circlefree(to_halt_symbol(PRED_SMALL))
        tr = naive_trace(e, max_steps=100_000)
        assert len(tr.emissions) == 3

    def test_rejects_unusable_baked_symbols(self):
        with pytest.raises(MachineError):
            pi02_to_circlefree(PRED_DIAGONAL, ("_",))
        with pytest.raises(MachineError):
            pi02_to_circlefree(PRED_DIAGONAL, ("?",))

    def test_never_halts_and_never_sticks(self):
        for pred in (PRED_DIAGONAL, PRED_SMALL, PRED_NEVER):
            tr = naive_trace(pi02_to_circlefree(pred), max_steps=20_000)
            assert tr.halted_at is None and tr.stuck_at is None


class TestOutputsStayEncodable:
    SAMPLES = ()

    def outputs(self):
        yield halting_to_printing(M_PRINT0_AT_3)
        yield halting_to_printing(SEEK, ("a", "b"))
        yield printing_to_halting(M_EMIT01, 1)
        yield ndigits_to_halting(M_EMIT01, 2)
        yield halting_to_ndigits(delay_halter(3))
        yield omd_to_halting(M_EMIT01, 2)
        yield halting_to_omd(M_HALT)[0]
        yield variant_pk(M_EMIT01, 2)
        yield variant_pk(HS_EMIT, 1)
        yield to_halt_state(HS_STUCK)
        yield to_halt_symbol(delay_halter(2))
        yield pi02_to_circlefree(PRED_SMALL)

    def test_encode_decode_round_trip(self):
        for m in self.outputs():
            n = encode(m)
            assert encode(decode(n)) == n, m.name

    def test_render_parse_round_trip(self):
        for m in self.outputs():
            src = render(m)
            assert render(parse_text(src)) == src, m.name


class TestDecisionProblem:
    def test_parametric_tags_demand_their_parameter(self):
        with pytest.raises(ValueError):
            DecisionProblem(ProblemTag.PRINTS, machine=22)
        with pytest.raises(ValueError):
            DecisionProblem(ProblemTag.N_DIGITS, machine=22)
        DecisionProblem(ProblemTag.PRINTS, machine=22, param=0)

    def test_plain_tags_reject_parameters(self):
        with pytest.raises(ValueError):
            DecisionProblem(ProblemTag.HALT, machine=22, param=1)
        DecisionProblem(ProblemTag.HALT, machine=22, input=("a",))

    def test_only_halting_takes_an_input(self):
        with pytest.raises(ValueError):
            DecisionProblem(ProblemTag.CIRCLE_FREE, machine=22, input=("a",))
        DecisionProblem(ProblemTag.CIRCLE_FREE, machine=22)

    def test_description_numbers_are_non_negative(self):
        with pytest.raises(ValueError):
            DecisionProblem(ProblemTag.HALT, machine=-1)

"""Machine-to-machine reductions with exact declared overheads.

Every reduction here ships an overhead function, and the overhead is exact
event-time arithmetic, not an upper bound: if the source event happens at
step t, the target event happens at precisely the declared image of t.
That is what makes "source true within B iff target true within ov(B)"
hold at every budget simultaneously, which the sweep tests check.

Halting-problem sources are normalized to the halt-state convention first
(to_halt_state preserves halting times exactly), and a machine that gets
stuck on an undefined rule is translated to one that spins: being stuck is
treated as never halting throughout.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .machine import (
    BLANK,
    HALTMARK,
    Convention,
    Machine,
    MachineError,
    Move,
    Rule,
    fresh_state,
)
from .codec import ov_spec, specialize


class OracleAnswer(enum.Enum):
    YES = "yes"
    NO = "no"


class Inconclusive(Exception):
    """A finitized infinite procedure ran out of iterations, honestly."""

    def __init__(self, cap: int):
        super().__init__(f"no oracle answer after {cap} queries")
        self.cap = cap


class ProblemTag(enum.Enum):
    HALT = "halt"
    PRINTS = "prints"
    CIRCLE_FREE = "circle-free"
    N_DIGITS = "n-digits"
    ONE_MORE_DIGIT = "one-more-digit"
    INFINITE_SYMBOL = "infinite-symbol"


_PARAMETRIC = {
    ProblemTag.PRINTS,
    ProblemTag.N_DIGITS,
    ProblemTag.ONE_MORE_DIGIT,
    ProblemTag.INFINITE_SYMBOL,
}


@dataclass(frozen=True)
class DecisionProblem:
    """A membership question about one encoded machine.

    param carries the tag's parameter: the digit for PRINTS and
    INFINITE_SYMBOL, n for N_DIGITS, t for ONE_MORE_DIGIT.  Only HALT
    instances take an input; the other problems start the machine on a
    blank tape.
    """

    tag: ProblemTag
    machine: int
    input: tuple[str, ...] = ()
    param: int | None = None

    def __post_init__(self):
        if self.machine < 0:
            raise ValueError("description numbers are non-negative")
        if self.tag in _PARAMETRIC and self.param is None:
            raise ValueError(f"{self.tag.value} needs its parameter")
        if self.tag not in _PARAMETRIC and self.param is not None:
            raise ValueError(f"{self.tag.value} takes no parameter")
        if self.input and self.tag is not ProblemTag.HALT:
            raise ValueError(f"{self.tag.value} instances take no input")


# --- symbol plumbing ---------------------------------------------------------


def fresh_symbol(prefix: str, taken: set[str]) -> str:
    if prefix not in taken:
        taken.add(prefix)
        return prefix
    i = 2
    while f"{prefix}{i}" in taken:
        i += 1
    name = f"{prefix}{i}"
    taken.add(name)
    return name


def _holes(m: Machine) -> list[tuple[str, str]]:
    table = m.table()
    return [(s, a) for s in m.states for a in m.alphabet if (s, a) not in table]


def _rename_symbol(m: Machine, old: str, new: str) -> Machine:
    def sub(a):
        return new if a == old else a

    return Machine(
        name=m.name,
        states=m.states,
        start=m.start,
        alphabet=tuple(sub(a) for a in m.alphabet),
        transitions=tuple(
            (
                (s, sub(a)),
                Rule(
                    write=None if r.write is None else sub(r.write),
                    emit=r.emit,
                    move=r.move,
                    goto=r.goto,
                ),
            )
            for (s, a), r in m.transitions
        ),
        base=m.base,
        convention=m.convention,
    )


# --- convention translations -------------------------------------------------


def to_halt_state(m: Machine) -> Machine:
    """Exact-time translation to the halt-state convention.

    Rules that wrote the halt mark keep all their effects but continue
    into a ruleless state, so the halt is detected at the same step
    count.  Undefined (state, symbol) holes, which mean "stuck" under
    halt-symbol, become an eternal spin: stuck is never-halting.
    """
    if m.convention is Convention.HALT_STATE:
        return m
    taken = set(m.states)
    dead = fresh_state("dead", taken)
    spin = fresh_state("spin", taken)
    rules: dict[tuple[str, str], Rule] = {}
    for (s, a), r in m.transitions:
        if r.write == HALTMARK:
            rules[(s, a)] = Rule(write=r.write, emit=r.emit, move=r.move, goto=dead)
        else:
            rules[(s, a)] = r
    for s, a in _holes(m):
        rules[(s, a)] = Rule(move=Move.N, goto=spin)
    for a in m.alphabet:
        rules[(spin, a)] = Rule(move=Move.N, goto=spin)
    return Machine(
        name=f"{m.name}:hs",
        states=m.states + (dead, spin),
        start=m.start,
        alphabet=m.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=m.base,
        convention=Convention.HALT_STATE,
    )


def ov_to_halt_symbol(budget: int) -> int:
    return budget + 1


def to_halt_symbol(m: Machine) -> Machine:
    """Translation to the halt-symbol convention: a halt at t becomes a
    halt at t + 1, through one extra step that writes the halt mark.

    A pre-existing ordinary '!' symbol is renamed out of the way first.
    """
    if m.convention is Convention.HALT_SYMBOL:
        return m
    if HALTMARK in m.alphabet:
        taken = set(m.alphabet)
        m = _rename_symbol(m, HALTMARK, fresh_symbol("h", taken))
    alphabet = m.alphabet + (HALTMARK,)
    rules = dict(m.transitions)
    for s in m.states:
        for a in alphabet:
            if (s, a) not in rules:
                rules[(s, a)] = Rule(write=HALTMARK, move=Move.N, goto=s)
    return Machine(
        name=f"{m.name}:hm",
        states=m.states,
        start=m.start,
        alphabet=alphabet,
        transitions=tuple(sorted(rules.items())),
        base=m.base,
        convention=Convention.HALT_SYMBOL,
    )


def _strip_emissions(m: Machine) -> Machine:
    return Machine(
        name=m.name,
        states=m.states,
        start=m.start,
        alphabet=m.alphabet,
        transitions=tuple(
            ((s, a), Rule(write=r.write, emit=None, move=r.move, goto=r.goto))
            for (s, a), r in m.transitions
        ),
        base=m.base,
        convention=m.convention,
    )


# --- halting <-> printing ----------------------------------------------------


def ov_halting_to_printing(budget: int, input_len: int = 0) -> int:
    return ov_spec(input_len) + budget + 4


def halting_to_printing(p: Machine, x=()) -> Machine:
    """q emits digit 0 at some step iff p halts on x, and never otherwise.

    A halt of p at step t becomes q's 0 at exactly ov_spec(|x|) + t + 4:
    the missing rule is caught one step later, funneled through a short
    delay, and announced by the single emitting rule in the machine.  All
    of p's own emissions are stripped so no other 0 can appear.
    """
    core = _strip_emissions(to_halt_state(p))
    taken = set(core.states)
    h1, h2, h3 = (fresh_state(f"h{i}", taken) for i in (1, 2, 3))
    done = fresh_state("done", taken)
    rules = dict(core.transitions)
    for s, a in _holes(core):
        rules[(s, a)] = Rule(move=Move.N, goto=h1)
    for a in core.alphabet:
        rules[(h1, a)] = Rule(move=Move.N, goto=h2)
        rules[(h2, a)] = Rule(move=Move.N, goto=h3)
        rules[(h3, a)] = Rule(emit=0, move=Move.N, goto=done)
    q = Machine(
        name=f"halt2print({p.name})",
        states=core.states + (h1, h2, h3, done),
        start=core.start,
        alphabet=core.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=2,
        convention=Convention.HALT_STATE,
    )
    return specialize(q, x)


def ov_printing_to_halting(budget: int) -> int:
    return budget + 2


def printing_to_halting(p: Machine, s: int) -> Machine:
    """p' halts iff p ever emits digit s, exactly 2 steps after it does.

    p's own halting (and stuckness) is replaced by a silent spin, so the
    only way for p' to stop is through the emission funnel d1, d2, d3.
    """
    if not 0 <= s < p.base:
        raise MachineError(f"digit {s} out of range for base {p.base}")
    core = to_halt_state(p)
    taken = set(core.states)
    d1, d2, d3 = (fresh_state(f"d{i}", taken) for i in (1, 2, 3))
    park = fresh_state("park", taken)
    rules: dict[tuple[str, str], Rule] = {}
    for (st, a), r in core.transitions:
        if r.emit == s:
            rules[(st, a)] = Rule(write=r.write, emit=r.emit, move=r.move, goto=d1)
        else:
            rules[(st, a)] = r
    for st, a in _holes(core):
        rules[(st, a)] = Rule(move=Move.N, goto=park)
    for a in core.alphabet:
        rules[(park, a)] = Rule(move=Move.N, goto=park)
        rules[(d1, a)] = Rule(move=Move.N, goto=d2)
        rules[(d2, a)] = Rule(move=Move.N, goto=d3)
    return Machine(
        name=f"print2halt({p.name},{s})",
        states=core.states + (d1, d2, d3, park),
        start=core.start,
        alphabet=core.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=core.base,
        convention=Convention.HALT_STATE,
    )


# --- digit-count problems ----------------------------------------------------


def _layer_names(states, count: int, taken: set[str]) -> list[dict[str, str]]:
    return [
        {s: fresh_state(f"{s}~{c}", taken) for s in states} for c in range(count)
    ]


def ov_ndigits_to_halting(budget: int, n: int) -> int:
    return budget + 2 * n + 2


def ndigits_to_halting(e: Machine, n: int) -> Machine:
    """p halts iff e emits at least n digits; the n-th digit at step t
    becomes a halt at exactly t + 2n + 2.

    p simulates e while counting emissions in its state (n layers); the
    n-th emission diverts into a delay chain sized to make the declared
    overhead exact.  e halting with fewer digits out turns into a spin.
    """
    if n < 1:
        raise MachineError("n must be positive")
    core = to_halt_state(e)
    taken: set[str] = set()
    layers = _layer_names(core.states, n, taken)
    park = fresh_state("park", taken)
    chain = [fresh_state(f"d{i}", taken) for i in range(1, 2 * n + 4)]
    rules: dict[tuple[str, str], Rule] = {}
    table = core.table()
    for c in range(n):
        for (st, a), r in table.items():
            if r.emit is None:
                goto = layers[c][r.goto]
            elif c + 1 < n:
                goto = layers[c + 1][r.goto]
            else:
                goto = chain[0]
            rules[(layers[c][st], a)] = Rule(
                write=r.write, emit=r.emit, move=r.move, goto=goto
            )
        for st, a in _holes(core):
            rules[(layers[c][st], a)] = Rule(move=Move.N, goto=park)
    for a in core.alphabet:
        rules[(park, a)] = Rule(move=Move.N, goto=park)
        for d, nxt in zip(chain, chain[1:]):
            rules[(d, a)] = Rule(move=Move.N, goto=nxt)
    states = tuple(layers[c][s] for c in range(n) for s in core.states)
    return Machine(
        name=f"ndigits2halt({e.name},{n})",
        states=states + (park, *chain),
        start=layers[0][core.start],
        alphabet=core.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=core.base,
        convention=Convention.HALT_STATE,
    )


def ov_halting_to_ndigits(budget: int, n: int, input_len: int = 0) -> int:
    return ov_spec(input_len) + budget + 2 * n + 4


def halting_to_ndigits(e: Machine, x=()) -> Machine:
    """q emits digits forever iff e halts on x, and none at all otherwise.

    A halt of e at step t (on x) produces q's n-th digit at exactly
    ov_spec(|x|) + t + 2n + 4: four delay states, then a two-state loop
    emitting a 1 every other step.  e's own emissions are stripped so a
    non-halting e yields a digitless q.
    """
    core = _strip_emissions(to_halt_state(e))
    taken = set(core.states)
    hs = [fresh_state(f"h{i}", taken) for i in (1, 2, 3, 4)]
    e1 = fresh_state("e1", taken)
    e2 = fresh_state("e2", taken)
    rules = dict(core.transitions)
    for s, a in _holes(core):
        rules[(s, a)] = Rule(move=Move.N, goto=hs[0])
    for a in core.alphabet:
        for h, nxt in zip(hs, hs[1:] + [e1]):
            rules[(h, a)] = Rule(move=Move.N, goto=nxt)
        rules[(e1, a)] = Rule(emit=1, move=Move.N, goto=e2)
        rules[(e2, a)] = Rule(move=Move.N, goto=e1)
    q = Machine(
        name=f"halt2digits({e.name})",
        states=core.states + (*hs, e1, e2),
        start=core.start,
        alphabet=core.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=2,
        convention=Convention.HALT_STATE,
    )
    return specialize(q, x)


def ov_omd_to_halting(budget: int, t: int) -> int:
    return budget + t + 4


def omd_to_halting(e: Machine, t: int) -> Machine:
    """p halts iff e emits some digit strictly after step t.

    p tracks e's step count in its state for the first t steps; once past
    that, any emission diverts into a delay chain so an emission at step
    u > t halts p at exactly u + t + 4.
    """
    if t < 0:
        raise MachineError("t must be non-negative")
    core = to_halt_state(e)
    taken: set[str] = set()
    layers = _layer_names(core.states, t + 1, taken)  # the last layer is armed
    park = fresh_state("park", taken)
    chain = [fresh_state(f"d{i}", taken) for i in range(1, t + 6)]
    rules: dict[tuple[str, str], Rule] = {}
    table = core.table()
    for c in range(t + 1):
        armed = c == t
        for (st, a), r in table.items():
            if armed and r.emit is not None:
                goto = chain[0]
            else:
                goto = layers[min(c + 1, t)][r.goto]
            rules[(layers[c][st], a)] = Rule(
                write=r.write, emit=r.emit, move=r.move, goto=goto
            )
        for st, a in _holes(core):
            rules[(layers[c][st], a)] = Rule(move=Move.N, goto=park)
    for a in core.alphabet:
        rules[(park, a)] = Rule(move=Move.N, goto=park)
        for d, nxt in zip(chain, chain[1:]):
            rules[(d, a)] = Rule(move=Move.N, goto=nxt)
    states = tuple(layers[c][s] for c in range(t + 1) for s in core.states)
    return Machine(
        name=f"omd2halt({e.name},{t})",
        states=states + (park, *chain),
        start=layers[0][core.start],
        alphabet=core.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=core.base,
        convention=Convention.HALT_STATE,
    )


def ov_halting_to_omd(budget: int, input_len: int = 0) -> int:
    # first digit of halting_to_ndigits's machine: prefix + t + 6
    return ov_halting_to_ndigits(budget, 1, input_len)


def halting_to_omd(e: Machine, x=()) -> tuple[Machine, int]:
    """e halts on x iff q emits one more digit after time 0."""
    return halting_to_ndigits(e, x), 0


# --- the 0-bar variants and the oracle constructions over them ---------------


def ov_variant_pk(budget: int, k: int) -> int:
    return budget + 2 * k


def variant_pk(p: Machine, k: int) -> Machine:
    """p_k: the first k emissions of digit 0 come out as the substitute
    digit instead (the widened base's new top digit, standing for 0-bar).

    Each replacement also inserts a two-step pause, which makes the
    declared overhead B + 2k exact rather than an estimate: p's step t
    corresponds to p_k's step t + 2 * (replacements made so far).  With
    k = 0 the machine is returned untouched.
    """
    if k < 0:
        raise MachineError("k must be non-negative")
    if k == 0:
        return p
    sub_digit = p.base  # one past the old top digit
    taken: set[str] = set()
    layers = _layer_names(p.states, k + 1, taken)
    rules: dict[tuple[str, str], Rule] = {}
    pauses: dict[str, tuple[str, str]] = {}

    def pause_into(target: str) -> str:
        if target not in pauses:
            pauses[target] = (
                fresh_state(f"{target}%1", taken),
                fresh_state(f"{target}%2", taken),
            )
        return pauses[target][0]

    for c in range(k + 1):
        for (st, a), r in p.transitions:
            if r.emit == 0 and c < k:
                goto = pause_into(layers[c + 1][r.goto])
                rules[(layers[c][st], a)] = Rule(
                    write=r.write, emit=sub_digit, move=r.move, goto=goto
                )
            else:
                rules[(layers[c][st], a)] = Rule(
                    write=r.write, emit=r.emit, move=r.move, goto=layers[c][r.goto]
                )
    for target, (w1, w2) in pauses.items():
        for a in p.alphabet:
            rules[(w1, a)] = Rule(move=Move.N, goto=w2)
            rules[(w2, a)] = Rule(move=Move.N, goto=target)
    states = tuple(layers[c][s] for c in range(k + 1) for s in p.states) + tuple(
        w for pair in pauses.values() for w in pair
    )
    return Machine(
        name=f"{p.name}~bar{k}",
        states=states,
        start=layers[0][p.start],
        alphabet=p.alphabet,
        transitions=tuple(sorted(rules.items())),
        base=p.base + 1,
        convention=p.convention,
    )


def infinite_from_printing(p: Machine, printing_oracle, cap: int = 64) -> OracleAnswer:
    """Decide "p emits infinitely many 0s" given an ever-prints-0 oracle.

    Queries the oracle on variant_pk(p, j) for j = 0, 1, 2, ...: the j-th
    variant prints a 0 exactly when p emits more than j zeros, so the
    first No pins p's zero count below j + 1 and settles the question.
    Against a truthful oracle a Yes can never be concluded from finitely
    many queries; hitting the cap raises Inconclusive instead of guessing.
    """
    for j in range(cap):
        answer = printing_oracle(variant_pk(p, j))
        if not isinstance(answer, OracleAnswer):
            raise TypeError(f"oracle returned {answer!r}, not an OracleAnswer")
        if answer is OracleAnswer.NO:
            return OracleAnswer.NO
    raise Inconclusive(cap)


def circlefree_from_infinite(e: Machine, infinite_oracle) -> OracleAnswer:
    """A base-2 machine is circle-free iff it emits infinitely many 0s or
    infinitely many 1s; asks about digit 0 first, then digit 1."""
    if e.base != 2:
        raise MachineError("circle-free via infinite-symbol needs base 2")
    for digit in (0, 1):
        answer = infinite_oracle(e, digit)
        if not isinstance(answer, OracleAnswer):
            raise TypeError(f"oracle returned {answer!r}, not an OracleAnswer")
        if answer is OracleAnswer.YES:
            return OracleAnswer.YES
    return OracleAnswer.NO


# --- the forall-exists construction ------------------------------------------


def pi02_to_circlefree(pred: Machine, x=()) -> Machine:
    """Build e that emits its (n+1)-th digit upon finding a k with pred
    accepting (n, k): e is circle-free iff for every n some k works.

    pred runs entirely inside e, no host calls.  e keeps master tallies
    of n and k to the left of a guard cell; each round it writes x
    followed by 1^n | 1^k into the zone right of the guard, hands control
    to a renamed copy of pred, and reads the verdict off the last digit
    pred tried to emit (1 accepts, anything else rejects; pred's
    emissions are suppressed, so e's own digits are the only output).
    On accept, e emits one digit, bumps n and resets k; on reject it
    bumps k and retries.  Since pred is total, scanning k upward is a
    faithful unbounded exists-search.

    pred's obligations: halt on every such input with the verdict as its
    last emitted digit, never move left of its start cell, and never move
    past its input's trailing blank.
    """
    core = to_halt_state(pred)
    one, sep = "1", "|"
    sym_taken = set(core.alphabet) | {one, sep, BLANK}
    guard = fresh_symbol("G", sym_taken)
    ncnt = fresh_symbol("N", sym_taken)
    kcnt = fresh_symbol("K", sym_taken)
    nmark = fresh_symbol("M", sym_taken)
    kmark = fresh_symbol("J", sym_taken)
    front = fresh_symbol("F", sym_taken)
    alphabet = tuple(
        dict.fromkeys(
            (BLANK,)
            + core.alphabet
            + (one, sep, guard, ncnt, kcnt, nmark, kmark, front)
        )
    )
    x = tuple(x)
    for sym in x:
        if sym not in core.alphabet or sym == BLANK:
            raise MachineError(f"baked input symbol {sym!r} unusable for pred")

    taken: set[str] = set()

    def st(name: str) -> str:
        return fresh_state(name, taken)

    init = st("init")
    b_home = st("b_home")
    b_scan_n = st("b_scan_n")
    b_ret_n = st("b_ret_n")
    b_put_n = st("b_put_n")
    b_back_n = st("b_back_n")
    b_n_done = st("b_n_done")
    b_sep_seek = st("b_sep_seek")
    b_k_home = st("b_k_home")
    b_scan_k = st("b_scan_k")
    b_ret_k = st("b_ret_k")
    b_put_k = st("b_put_k")
    b_back_k = st("b_back_k")
    u_scan = st("u_scan")
    f_seek = st("f_seek")
    f_put = st("f_put")
    f_back = st("f_back")
    ret_acc = st("ret_acc")
    ret_rej = st("ret_rej")
    acc_scan = st("acc_scan")
    acc_erase = st("acc_erase")
    acc_ret = st("acc_ret")
    k_inc = st("k_inc")
    k_ret = st("k_ret")
    w_scan = st("w_scan")
    w_back = st("w_back")
    xw = [st(f"x_put{i}") for i in range(len(x))]
    xb = [st(f"x_back{i}") for i in range(len(x))]
    # pred's states, one layer per remembered verdict class
    lay_none = {s: st(f"p_{s}") for s in core.states}
    lay_acc = {s: st(f"pA_{s}") for s in core.states}
    lay_rej = {s: st(f"pR_{s}") for s in core.states}

    rules: dict[tuple[str, str], Rule] = {}

    def every(state: str, make):
        for a in alphabet:
            rules[(state, a)] = make(a)

    build_entry = xw[0] if x else b_home
    rules[(init, BLANK)] = Rule(write=guard, move=Move.N, goto=build_entry)

    # write the baked input symbol by symbol at the zone frontier
    for i in range(len(x)):
        nxt = xw[i + 1] if i + 1 < len(x) else b_home
        every(
            xw[i],
            lambda a, i=i: Rule(write=x[i], move=Move.L, goto=xb[i])
            if a == BLANK
            else Rule(move=Move.R, goto=xw[i]),
        )
        every(
            xb[i],
            lambda a, i=i, nxt=nxt: Rule(move=Move.N, goto=nxt)
            if a == guard
            else Rule(move=Move.L, goto=xb[i]),
        )

    # copy n: mark one master tally, write one 1 at the frontier, repeat
    rules[(b_home, guard)] = Rule(move=Move.L, goto=b_scan_n)
    rules[(b_scan_n, nmark)] = Rule(move=Move.L, goto=b_scan_n)
    rules[(b_scan_n, ncnt)] = Rule(write=nmark, move=Move.R, goto=b_ret_n)
    rules[(b_scan_n, kcnt)] = Rule(move=Move.R, goto=b_n_done)
    rules[(b_scan_n, BLANK)] = Rule(move=Move.R, goto=b_n_done)
    rules[(b_ret_n, nmark)] = Rule(move=Move.R, goto=b_ret_n)
    rules[(b_ret_n, guard)] = Rule(move=Move.R, goto=b_put_n)
    every(
        b_put_n,
        lambda a: Rule(write=one, move=Move.L, goto=b_back_n)
        if a == BLANK
        else Rule(move=Move.R, goto=b_put_n),
    )
    every(
        b_back_n,
        lambda a: Rule(move=Move.L, goto=b_scan_n)
        if a == guard
        else Rule(move=Move.L, goto=b_back_n),
    )
    # n exhausted: back to the guard, append the separator, then copy k
    rules[(b_n_done, nmark)] = Rule(move=Move.R, goto=b_n_done)
    rules[(b_n_done, guard)] = Rule(move=Move.R, goto=b_sep_seek)
    every(
        b_sep_seek,
        lambda a: Rule(write=sep, move=Move.L, goto=b_k_home)
        if a == BLANK
        else Rule(move=Move.R, goto=b_sep_seek),
    )
    every(
        b_k_home,
        lambda a: Rule(move=Move.L, goto=b_scan_k)
        if a == guard
        else Rule(move=Move.L, goto=b_k_home),
    )
    rules[(b_scan_k, nmark)] = Rule(move=Move.L, goto=b_scan_k)
    rules[(b_scan_k, kmark)] = Rule(move=Move.L, goto=b_scan_k)
    rules[(b_scan_k, kcnt)] = Rule(write=kmark, move=Move.R, goto=b_ret_k)
    rules[(b_scan_k, BLANK)] = Rule(move=Move.R, goto=u_scan)
    rules[(b_ret_k, nmark)] = Rule(move=Move.R, goto=b_ret_k)
    rules[(b_ret_k, kmark)] = Rule(move=Move.R, goto=b_ret_k)
    rules[(b_ret_k, guard)] = Rule(move=Move.R, goto=b_put_k)
    every(
        b_put_k,
        lambda a: Rule(write=one, move=Move.L, goto=b_back_k)
        if a == BLANK
        else Rule(move=Move.R, goto=b_put_k),
    )
    every(
        b_back_k,
        lambda a: Rule(move=Move.L, goto=b_scan_k)
        if a == guard
        else Rule(move=Move.L, goto=b_back_k),
    )
    # all copied: sweep right unmarking the masters, then place the
    # frontier mark two cells past the written input
    rules[(u_scan, kmark)] = Rule(write=kcnt, move=Move.R, goto=u_scan)
    rules[(u_scan, nmark)] = Rule(write=ncnt, move=Move.R, goto=u_scan)
    rules[(u_scan, guard)] = Rule(move=Move.R, goto=f_seek)
    every(
        f_seek,
        lambda a: Rule(move=Move.R, goto=f_put)
        if a == BLANK
        else Rule(move=Move.R, goto=f_seek),
    )
    rules[(f_put, BLANK)] = Rule(write=front, move=Move.L, goto=f_back)
    every(
        f_back,
        lambda a: Rule(move=Move.R, goto=lay_none[core.start])
        if a == guard
        else Rule(move=Move.L, goto=f_back),
    )

    # pred runs in the zone; its emissions only steer the verdict layer
    table = core.table()
    for layer, verdict_exit in (
        (lay_none, ret_rej),
        (lay_acc, ret_acc),
        (lay_rej, ret_rej),
    ):
        for s in core.states:
            for a in alphabet:
                r = table.get((s, a))
                if r is None:
                    rules[(layer[s], a)] = Rule(move=Move.N, goto=verdict_exit)
                else:
                    nxt = layer if r.emit is None else (
                        lay_acc if r.emit == 1 else lay_rej
                    )
                    rules[(layer[s], a)] = Rule(
                        write=r.write, emit=None, move=r.move, goto=nxt[r.goto]
                    )

    # accept: walk home, emit the round's digit, bump n, reset k
    every(
        ret_acc,
        lambda a: Rule(emit=1, move=Move.L, goto=acc_scan)
        if a == guard
        else Rule(move=Move.L, goto=ret_acc),
    )
    rules[(acc_scan, ncnt)] = Rule(move=Move.L, goto=acc_scan)
    rules[(acc_scan, kcnt)] = Rule(write=ncnt, move=Move.L, goto=acc_erase)
    rules[(acc_scan, BLANK)] = Rule(write=ncnt, move=Move.R, goto=acc_ret)
    rules[(acc_erase, kcnt)] = Rule(write=BLANK, move=Move.L, goto=acc_erase)
    rules[(acc_erase, BLANK)] = Rule(move=Move.R, goto=acc_ret)
    rules[(acc_ret, BLANK)] = Rule(move=Move.R, goto=acc_ret)
    rules[(acc_ret, ncnt)] = Rule(move=Move.R, goto=acc_ret)
    rules[(acc_ret, guard)] = Rule(move=Move.R, goto=w_scan)
    # reject: walk home, bump k
    every(
        ret_rej,
        lambda a: Rule(move=Move.L, goto=k_inc)
        if a == guard
        else Rule(move=Move.L, goto=ret_rej),
    )
    rules[(k_inc, ncnt)] = Rule(move=Move.L, goto=k_inc)
    rules[(k_inc, kcnt)] = Rule(move=Move.L, goto=k_inc)
    rules[(k_inc, BLANK)] = Rule(write=kcnt, move=Move.R, goto=k_ret)
    rules[(k_ret, kcnt)] = Rule(move=Move.R, goto=k_ret)
    rules[(k_ret, ncnt)] = Rule(move=Move.R, goto=k_ret)
    rules[(k_ret, guard)] = Rule(move=Move.R, goto=w_scan)
    # wipe the zone up to and including the frontier mark, then rebuild
    every(
        w_scan,
        lambda a: Rule(write=BLANK, move=Move.L, goto=w_back)
        if a == front
        else (
            Rule(move=Move.R, goto=w_scan)
            if a == BLANK
            else Rule(write=BLANK, move=Move.R, goto=w_scan)
        ),
    )
    rules[(w_back, BLANK)] = Rule(move=Move.L, goto=w_back)
    rules[(w_back, guard)] = Rule(move=Move.N, goto=build_entry)

    harness = [
        init, b_home, b_scan_n, b_ret_n, b_put_n, b_back_n, b_n_done,
        b_sep_seek, b_k_home, b_scan_k, b_ret_k, b_put_k, b_back_k,
        u_scan, f_seek, f_put, f_back, ret_acc, ret_rej, acc_scan,
        acc_erase, acc_ret, k_inc, k_ret, w_scan, w_back, *xw, *xb,
    ]
    states = tuple(harness) + tuple(
        layer[s] for layer in (lay_none, lay_acc, lay_rej) for s in core.states
    )
    return Machine(
        name=f"pi02({pred.name})",
        states=states,
        start=init,
        alphabet=alphabet,
        transitions=tuple(sorted(rules.items())),
        base=2,
        convention=Convention.HALT_STATE,
    )

"""Description numbers, the text format, and input baking.

A machine's description number is the integer reading of a self-delimiting
bit string: 1 bit of convention, then gamma-coded base / state count /
extra-symbol count, then fixed-width rule records until the bits run out.
The bit string <-> integer bijection is the usual one (write n+1 in binary
and drop the leading 1), so every integer is a candidate and validity is a
simple decidable check: the bits must parse exactly, and re-encoding the
parsed machine must give the same integer back.  That second condition
pins each machine table to a single canonical number; encode renames
states and symbols into discovery order first, so isomorphic tables agree.

Nothing here is prime-based on purpose: enumeration scans integers in
order, and a dense packing keeps the first few hundred valid numbers small
enough for exhaustive scanning to be cheap.
"""

from __future__ import annotations

import re
from hashlib import blake2b

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

MOVES = (Move.L, Move.R, Move.N)
_MOVE_INDEX = {mv: i for i, mv in enumerate(MOVES)}


class InvalidEncoding(ValueError):
    """The integer is not the description number of any machine."""


# --- bit plumbing ---------------------------------------------------------


class _BitReader:
    def __init__(self, n: int):
        u = n + 1
        self.length = u.bit_length() - 1
        self.value = u - (1 << self.length)  # bits below the dropped leading 1
        self.pos = 0

    def remaining(self) -> int:
        return self.length - self.pos

    def bit(self) -> int | None:
        if self.pos >= self.length:
            return None
        self.pos += 1
        return (self.value >> (self.length - self.pos)) & 1

    def gamma(self) -> int | None:
        zeros = 0
        while True:
            b = self.bit()
            if b is None:
                return None
            if b:
                break
            zeros += 1
        u = 1
        for _ in range(zeros):
            b = self.bit()
            if b is None:
                return None
            u = (u << 1) | b
        return u - 1

    def fixed(self, radix: int) -> int | None:
        width = (radix - 1).bit_length()
        v = 0
        for _ in range(width):
            b = self.bit()
            if b is None:
                return None
            v = (v << 1) | b
        if v >= radix:
            return None
        return v


class _BitWriter:
    def __init__(self):
        self.value = 1  # running '1' + bits

    def bit(self, b: int) -> None:
        self.value = (self.value << 1) | b

    def gamma(self, v: int) -> None:
        u = v + 1
        width = u.bit_length()
        for _ in range(width - 1):
            self.bit(0)
        for i in range(width - 1, -1, -1):
            self.bit((u >> i) & 1)

    def fixed(self, v: int, radix: int) -> None:
        width = (radix - 1).bit_length()
        for i in range(width - 1, -1, -1):
            self.bit((v >> i) & 1)

    def number(self) -> int:
        return self.value - 1


# --- canonical form -------------------------------------------------------


def canonical_order(m: Machine) -> tuple[list[str], list[str]]:
    """State and symbol orders by discovery from the start state.

    Sweeps (discovered states x discovered symbols) to a fixed point; rules
    reached that way pull in their written symbol and target state.  States
    and symbols that some rule mentions but the sweep never reaches are
    appended in declared order; states and symbols nothing mentions are
    dropped, so decorative padding never yields a second number for the
    same table.
    """
    states = [m.start]
    syms = [BLANK]
    if m.convention is Convention.HALT_SYMBOL:
        syms.append(HALTMARK)
    table = m.table()
    done: set[tuple[str, str]] = set()
    changed = True
    while changed:
        changed = False
        for s in list(states):
            for a in list(syms):
                rule = table.get((s, a))
                if rule is None or (s, a) in done:
                    continue
                done.add((s, a))
                changed = True
                if rule.write is not None and rule.write not in syms:
                    syms.append(rule.write)
                if rule.goto not in states:
                    states.append(rule.goto)
    used_states = {m.start}
    used_syms = set(syms[: 2 if m.convention is Convention.HALT_SYMBOL else 1])
    for (s, a), rule in m.transitions:
        used_states.update((s, rule.goto))
        used_syms.add(a)
        if rule.write is not None:
            used_syms.add(rule.write)
    for s in m.states:
        if s in used_states and s not in states:
            states.append(s)
    for a in m.alphabet:
        if a in used_syms and a not in syms:
            syms.append(a)
    return states, syms


def canonical_base(m: Machine) -> int:
    """The base as encoded: a machine that never emits reads as base 2."""
    if any(rule.emit is not None for _, rule in m.transitions):
        return m.base
    return 2


def encode(m: Machine) -> int:
    """Canonical description number of m's transition table.

    The name plays no part; decode(encode(m)) is m's table with states and
    symbols renamed into discovery order.
    """
    states, syms = canonical_order(m)
    base = canonical_base(m)
    s_idx = {s: i for i, s in enumerate(states)}
    a_idx = {a: i for i, a in enumerate(syms)}
    conv = m.convention is Convention.HALT_SYMBOL
    reserved = 2 if conv else 1
    w = _BitWriter()
    w.bit(1 if conv else 0)
    w.gamma(base - 2)
    w.gamma(len(states) - 1)
    w.gamma(len(syms) - reserved)
    n_states = len(states)
    n_syms = len(syms)
    entries = sorted(
        ((s_idx[s], a_idx[a], r) for (s, a), r in m.transitions),
    )
    for si, ai, rule in entries:
        w.fixed(si, n_states)
        w.fixed(ai, n_syms)
        w.fixed(0 if rule.write is None else a_idx[rule.write] + 1, n_syms + 1)
        w.fixed(0 if rule.emit is None else rule.emit + 1, base + 1)
        w.fixed(_MOVE_INDEX[rule.move], 3)
        w.fixed(s_idx[rule.goto], n_states)
    return w.number()


def _state_name(i: int) -> str:
    return f"q{i}"


_EXTRA_SYMBOLS = "abcdefghijklmnopqrstuvwxyz"


def _symbol_name(i: int, reserved: int) -> str:
    if i == 0:
        return BLANK
    if reserved == 2 and i == 1:
        return HALTMARK
    j = i - reserved
    if j < len(_EXTRA_SYMBOLS):
        return _EXTRA_SYMBOLS[j]
    return f"x{j}"


def _decode_raw(n: int) -> Machine | None:
    if n < 0:
        return None
    r = _BitReader(n)
    conv_bit = r.bit()
    if conv_bit is None:
        return None
    base_extra = r.gamma()
    if base_extra is None:
        return None
    base = 2 + base_extra
    st_extra = r.gamma()
    if st_extra is None:
        return None
    n_states = 1 + st_extra
    sym_extra = r.gamma()
    if sym_extra is None:
        return None
    reserved = 2 if conv_bit else 1
    n_syms = reserved + sym_extra
    rules: dict[tuple[str, str], Rule] = {}
    order: list[tuple[tuple[str, str], Rule]] = []
    while r.remaining():
        si = r.fixed(n_states)
        ai = r.fixed(n_syms)
        wi = r.fixed(n_syms + 1)
        ei = r.fixed(base + 1)
        mi = r.fixed(3)
        gi = r.fixed(n_states)
        if gi is None or None in (si, ai, wi, ei, mi):
            return None
        key = (_state_name(si), _symbol_name(ai, reserved))
        if key in rules:
            return None
        rule = Rule(
            write=None if wi == 0 else _symbol_name(wi - 1, reserved),
            emit=None if ei == 0 else ei - 1,
            move=MOVES[mi],
            goto=_state_name(gi),
        )
        rules[key] = rule
        order.append((key, rule))
    # huge numbers would blow both name length and the int-to-decimal guard
    if n.bit_length() <= 200:
        name = f"m{n}"
    else:
        name = "m~" + blake2b(n.to_bytes((n.bit_length() + 7) // 8, "big"), digest_size=8).hexdigest()
    try:
        return Machine(
            name=name,
            states=tuple(_state_name(i) for i in range(n_states)),
            start=_state_name(0),
            alphabet=tuple(_symbol_name(i, reserved) for i in range(n_syms)),
            transitions=tuple(order),
            base=base,
            convention=Convention.HALT_SYMBOL if conv_bit else Convention.HALT_STATE,
        )
    except MachineError:
        return None


def try_decode(n: int) -> Machine | None:
    """decode that answers None instead of raising; the enumeration scanner."""
    m = _decode_raw(n)
    if m is None or encode(m) != n:
        return None
    return m


def decode(n: int) -> Machine:
    m = try_decode(n)
    if m is None:
        spelled = str(n) if n.bit_length() <= 200 else f"<{n.bit_length()}-bit number>"
        raise InvalidEncoding(f"{spelled} is not a valid description number")
    return m


def same_table(m1: Machine, m2: Machine) -> bool:
    """Transition-table identity up to state/symbol renaming."""
    return encode(m1) == encode(m2)


# --- enumeration ----------------------------------------------------------

_valid_numbers: list[int] = []
_scan_next = 0


def nth_valid_number(i: int) -> int:
    """Description number of the i-th (0-based) valid encoding, ascending."""
    global _scan_next
    if i < 0:
        raise ValueError("index must be non-negative")
    while len(_valid_numbers) <= i:
        if try_decode(_scan_next) is not None:
            _valid_numbers.append(_scan_next)
        _scan_next += 1
    return _valid_numbers[i]


def enumerate_machines(i: int) -> Machine:
    return decode(nth_valid_number(i))


def first_machines(count: int) -> list[Machine]:
    return [enumerate_machines(i) for i in range(count)]


def valid_count_below(limit: int) -> int:
    """How many integers in [0, limit) decode; pinned by golden tests."""
    nth_valid_number(0)
    global _scan_next
    while _scan_next < limit:
        if try_decode(_scan_next) is not None:
            _valid_numbers.append(_scan_next)
        _scan_next += 1
    lo = 0
    hi = len(_valid_numbers)
    while lo < hi:
        mid = (lo + hi) // 2
        if _valid_numbers[mid] < limit:
            lo = mid + 1
        else:
            hi = mid
    return lo


# --- text format ----------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class SemanticError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


_TOKEN = re.compile(r"\S+")


def _tokenize(line: str) -> list[tuple[str, int]]:
    cut = line.find("#")
    if cut >= 0:
        line = line[:cut]
    return [(mt.group(), mt.start() + 1) for mt in _TOKEN.finditer(line)]


def parse_text(source: str, *, name_hint: str | None = None) -> Machine:
    """Parse the line-oriented machine grammar.

    ParseError carries line and column; SemanticError reports rules that
    jump to states never declared (a state is declared by being the start
    state, by appearing on the left of a rule, or by a ``states`` line).
    """
    mname: str | None = name_hint
    base = 2
    convention: Convention | None = None
    start: str | None = None
    declared_states: list[str] = []
    declared_alpha: list[str] = []
    rule_lines: list[tuple[int, list[tuple[str, int]]]] = []

    def fail(msg: str, lineno: int, col: int) -> ParseError:
        return ParseError(msg, lineno, col)

    for lineno, raw in enumerate(source.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        head, col0 = toks[0]
        args = toks[1:]
        if head == "machine":
            if len(args) != 1:
                raise fail("machine wants exactly one name", lineno, col0)
            mname = args[0][0]
        elif head == "base":
            if len(args) != 1 or not args[0][0].isdigit():
                raise fail("base wants one integer", lineno, col0)
            base = int(args[0][0])
        elif head == "convention":
            if len(args) != 1 or args[0][0] not in ("halt-state", "halt-symbol"):
                raise fail("convention is halt-state or halt-symbol", lineno, col0)
            convention = (
                Convention.HALT_STATE
                if args[0][0] == "halt-state"
                else Convention.HALT_SYMBOL
            )
        elif head == "start":
            if len(args) != 1:
                raise fail("start wants exactly one state", lineno, col0)
            start = args[0][0]
        elif head == "states":
            declared_states.extend(t for t, _ in args)
        elif head == "alphabet":
            declared_alpha.extend(t for t, _ in args)
        elif head == "rule":
            rule_lines.append((lineno, toks))
        else:
            raise fail(f"unknown directive {head!r}", lineno, col0)

    if mname is None:
        raise SemanticError("missing machine line")
    if convention is None:
        raise SemanticError("missing convention line")
    if start is None:
        raise SemanticError("missing start line")

    # State order: start, explicitly declared states, then rule sources in
    # order of appearance.  Goto targets never declare a state; that is what
    # makes an undefined-state reference detectable.
    states: list[str] = [start]
    for s in declared_states:
        if s not in states:
            states.append(s)
    alphabet: list[str] = [BLANK]
    if convention is Convention.HALT_SYMBOL:
        alphabet.append(HALTMARK)
    for a in declared_alpha:
        if a not in alphabet:
            alphabet.append(a)

    parsed_rules: list[tuple[int, str, str, Rule]] = []
    for lineno, toks in rule_lines:
        if len(toks) < 3:
            raise fail("rule wants a state and a symbol", lineno, toks[0][1])
        state_tok, _ = toks[1]
        sym_tok, sym_col = toks[2]
        rest = toks[3:]
        if sym_tok.endswith(":"):
            sym_tok = sym_tok[:-1]
            if not sym_tok:
                raise fail("missing scanned symbol before ':'", lineno, sym_col)
        elif rest and rest[0][0] == ":":
            rest = rest[1:]
        else:
            raise fail("expected ':' after the scanned symbol", lineno, sym_col)

        write: str | None = None
        emit: int | None = None
        move = Move.N
        goto: str | None = None
        i = 0

        def take(expected: str) -> tuple[str, int]:
            nonlocal i
            if i >= len(rest):
                raise fail(f"{expected} expected", lineno, len(toks[-1][0]) + toks[-1][1])
            tok = rest[i]
            i += 1
            return tok

        while i < len(rest):
            word, col = take("action")
            if word == "emit":
                tok, tcol = take("emit digit")
                if not tok.isdigit():
                    raise fail("emit wants a digit", lineno, tcol)
                emit = int(tok)
            elif word == "write":
                write, _ = take("write symbol")
            elif word == "erase":
                write = BLANK
            elif word == "move":
                tok, tcol = take("move direction")
                if tok not in ("L", "R", "N"):
                    raise fail("move is L, R or N", lineno, tcol)
                move = {"L": Move.L, "R": Move.R, "N": Move.N}[tok]
            elif word == "goto":
                goto, _ = take("goto state")
            else:
                raise fail(f"unknown action {word!r}", lineno, col)
        if goto is None:
            raise fail("rule is missing goto", lineno, toks[0][1])

        if state_tok not in states:
            states.append(state_tok)
        for sym in (sym_tok, write):
            if sym is not None and sym not in alphabet:
                alphabet.append(sym)
        parsed_rules.append((lineno, state_tok, sym_tok, Rule(write, emit, move, goto)))

    known = set(states)
    for lineno, _, _, rule in parsed_rules:
        if rule.goto not in known:
            raise SemanticError(f"rule jumps to undefined state {rule.goto!r}", lineno)

    seen: set[tuple[str, str]] = set()
    for lineno, st, sym, _ in parsed_rules:
        if (st, sym) in seen:
            raise SemanticError(f"duplicate rule for ({st!r}, {sym!r})", lineno)
        seen.add((st, sym))

    try:
        return Machine(
            name=mname,
            states=tuple(states),
            start=start,
            alphabet=tuple(alphabet),
            transitions=tuple(
                ((st, sym), rule) for _, st, sym, rule in parsed_rules
            ),
            base=base,
            convention=convention,
        )
    except MachineError as exc:
        raise SemanticError(str(exc)) from exc


def render(m: Machine) -> str:
    """Inverse printer: parse_text(render(m)) reproduces m exactly."""
    lines = [
        f"machine {m.name}",
        f"base {m.base}",
        f"convention {m.convention.value}",
        f"start {m.start}",
        f"states {' '.join(m.states)}",
        f"alphabet {' '.join(m.alphabet)}",
    ]
    move_name = {Move.L: "L", Move.R: "R", Move.N: "N"}
    for (state, sym), rule in m.transitions:
        parts = [f"rule {state} {sym}:"]
        if rule.emit is not None:
            parts.append(f"emit {rule.emit}")
        if rule.write == BLANK:
            parts.append("erase")
        elif rule.write is not None:
            parts.append(f"write {rule.write}")
        parts.append(f"move {move_name[rule.move]}")
        parts.append(f"goto {rule.goto}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


# --- input baking ---------------------------------------------------------


def ov_spec(input_length: int) -> int:
    """Exact step count specialize spends before handing over to m."""
    return 4 * input_length + 8


def specialize(m: Machine, input_symbols: str | tuple[str, ...] | list[str]) -> Machine:
    """Bake an input onto the blank tape: the result, started on a blank
    tape, writes ``input_symbols`` at cells 0..L-1, returns the head to 0,
    and then behaves exactly like m started on that input.

    The setup takes exactly ov_spec(L) = 4L + 8 steps (writing, walking
    back, and a calibration chain); reductions lean on that exact figure,
    so it is deliberately not "at most".
    """
    symbols = tuple(input_symbols)
    for sym in symbols:
        if sym not in m.alphabet:
            raise MachineError(f"input symbol {sym!r} not in machine alphabet")
        if m.convention is Convention.HALT_SYMBOL and sym == HALTMARK:
            raise MachineError("cannot bake the halt mark onto the tape")
    L = len(symbols)
    taken = set(m.states)
    writers = [fresh_state(f"w{i}", taken) for i in range(L)]
    backs = [fresh_state(f"b{i}", taken) for i in range(L)]
    pads = [fresh_state(f"p{i}", taken) for i in range(2 * L + 8)]
    chain = writers + backs + pads
    rules: dict[tuple[str, str], Rule] = {}
    for i, w in enumerate(writers):
        nxt = chain[i + 1] if i + 1 < len(chain) else m.start
        rules[(w, BLANK)] = Rule(write=symbols[i], move=Move.R, goto=nxt)
    for j, b in enumerate(backs):
        pos = L + j
        nxt = chain[pos + 1] if pos + 1 < len(chain) else m.start
        for a in m.alphabet:
            rules[(b, a)] = Rule(move=Move.L, goto=nxt)
    for k, p in enumerate(pads):
        pos = L + L + k
        nxt = chain[pos + 1] if pos + 1 < len(chain) else m.start
        for a in m.alphabet:
            rules[(p, a)] = Rule(move=Move.N, goto=nxt)
    rules.update(m.table())
    suffix = "".join(symbols) if symbols else "blank"
    return Machine(
        name=f"{m.name}@{suffix}",
        states=tuple(chain) + m.states,
        start=chain[0],
        alphabet=m.alphabet,
        transitions=tuple(sorted(rules.items(), key=lambda kv: kv[0])),
        base=m.base,
        convention=m.convention,
    )

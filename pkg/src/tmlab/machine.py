"""Single-tape machines with an append-only output ledger.

The work tape is two-way infinite and read-write; emitted digits go to a
separate ledger that nothing can rewrite.  Keeping output out of the tape
is what makes "the machine printed digit d at step t" a stable, certifiable
event: later steps can scribble anywhere on the tape but the ledger only
grows.

Two halting conventions coexist:

* ``HALT_STATE``  -- the machine halts exactly when no rule matches the
  current (state, scanned symbol) pair.
* ``HALT_SYMBOL`` -- the machine halts exactly when a rule writes the
  reserved mark ``!``.  A missing rule under this convention is not a halt
  but an error (the machine is malformed for the convention).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

BLANK = "_"
HALTMARK = "!"


class Move(enum.Enum):
    L = -1
    R = 1
    N = 0


class Convention(enum.Enum):
    HALT_STATE = "halt-state"
    HALT_SYMBOL = "halt-symbol"


class MachineError(ValueError):
    """A structurally ill-formed machine or configuration."""


class StuckUndefinedError(MachineError):
    """No rule matched under HALT_SYMBOL, where a hole is not a halt."""

    def __init__(self, state: str, symbol: str, steps: int):
        super().__init__(
            f"no rule for ({state!r}, {symbol!r}) after {steps} steps; "
            f"under halt-symbol convention this machine is malformed"
        )
        self.state = state
        self.symbol = symbol
        self.steps = steps


@dataclass(frozen=True)
class Rule:
    """One transition: optionally write, optionally emit, move, change state."""

    write: str | None = None
    emit: int | None = None
    move: Move = Move.N
    goto: str = ""


@dataclass(frozen=True)
class Machine:
    name: str
    states: tuple[str, ...]
    start: str
    alphabet: tuple[str, ...]
    transitions: tuple[tuple[tuple[str, str], Rule], ...]
    base: int = 2
    convention: Convention = Convention.HALT_STATE

    def __post_init__(self):
        if not self.states:
            raise MachineError("machine needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise MachineError("duplicate state names")
        if self.start not in self.states:
            raise MachineError(f"start state {self.start!r} not among states")
        if BLANK not in self.alphabet:
            raise MachineError("alphabet must contain the blank symbol")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise MachineError("duplicate alphabet symbols")
        if self.base < 2:
            raise MachineError("digit base must be at least 2")
        if self.convention is Convention.HALT_SYMBOL and HALTMARK not in self.alphabet:
            raise MachineError("halt-symbol machines must carry the halt mark")
        seen: set[tuple[str, str]] = set()
        for (state, scan), rule in self.transitions:
            if (state, scan) in seen:
                raise MachineError(f"duplicate rule for ({state!r}, {scan!r})")
            seen.add((state, scan))
            if state not in self.states:
                raise MachineError(f"rule from unknown state {state!r}")
            if scan not in self.alphabet:
                raise MachineError(f"rule scans unknown symbol {scan!r}")
            if rule.goto not in self.states:
                raise MachineError(f"rule jumps to unknown state {rule.goto!r}")
            if rule.write is not None and rule.write not in self.alphabet:
                raise MachineError(f"rule writes unknown symbol {rule.write!r}")
            if rule.emit is not None and not 0 <= rule.emit < self.base:
                raise MachineError(
                    f"emitted digit {rule.emit} out of range for base {self.base}"
                )

    def table(self) -> dict[tuple[str, str], Rule]:
        return dict(self.transitions)

    def rule_for(self, state: str, symbol: str) -> Rule | None:
        return _table_of(self).get((state, symbol))


# Lookup tables are rebuilt lazily and cached per machine instance; machines
# are frozen, so the cache can never go stale.
_TABLE_CACHE: dict[int, tuple[Machine, dict[tuple[str, str], Rule]]] = {}


def _table_of(m: Machine) -> dict[tuple[str, str], Rule]:
    hit = _TABLE_CACHE.get(id(m))
    if hit is not None and hit[0] is m:
        return hit[1]
    table = dict(m.transitions)
    if len(_TABLE_CACHE) > 4096:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[id(m)] = (m, table)
    return table


def make_machine(
    name: str,
    start: str,
    rules: dict[tuple[str, str], Rule],
    *,
    states: tuple[str, ...] | list[str] | None = None,
    alphabet: tuple[str, ...] | list[str] | None = None,
    base: int = 2,
    convention: Convention | str = Convention.HALT_STATE,
) -> Machine:
    """Build a Machine, deriving state and alphabet order from first use.

    Explicit ``states``/``alphabet`` extend (and order) the derived sets;
    anything mentioned by a rule is always included.
    """
    convention = Convention(convention)
    order: list[str] = [start]
    for s in states or ():
        if s not in order:
            order.append(s)
    syms: list[str] = [BLANK]
    if convention is Convention.HALT_SYMBOL:
        syms.append(HALTMARK)
    for a in alphabet or ():
        if a not in syms:
            syms.append(a)
    for (state, scan), rule in rules.items():
        for s in (state, rule.goto):
            if s not in order:
                order.append(s)
        for a in (scan, rule.write):
            if a is not None and a not in syms:
                syms.append(a)
    return Machine(
        name=name,
        states=tuple(order),
        start=start,
        alphabet=tuple(syms),
        transitions=tuple(sorted(rules.items(), key=lambda kv: kv[0])),
        base=base,
        convention=convention,
    )


@dataclass(frozen=True)
class Configuration:
    """A full instantaneous description, including the output ledger.

    ``tape`` stores only non-blank cells, sorted by position.  ``steps``
    counts executed steps, so two configurations reached at different times
    never compare equal even when the machine is in a loop; loop detection
    compares the core (state, tape, head) projection instead.
    """

    state: str
    tape: tuple[tuple[int, str], ...]
    head: int = 0
    emitted: tuple[int, ...] = ()
    steps: int = 0

    def scan(self) -> str:
        for pos, sym in self.tape:
            if pos == self.head:
                return sym
        return BLANK

    def core(self) -> tuple[str, tuple[tuple[int, str], ...], int]:
        return (self.state, self.tape, self.head)


def initial_configuration(
    m: Machine, input_symbols: str | tuple[str, ...] | list[str] = ()
) -> Configuration:
    """Start configuration: input written left to right from cell 0, head at 0."""
    cells: list[tuple[int, str]] = []
    for i, sym in enumerate(input_symbols):
        if sym not in m.alphabet:
            raise MachineError(f"input symbol {sym!r} not in alphabet")
        if sym != BLANK:
            cells.append((i, sym))
    return Configuration(state=m.start, tape=tuple(cells), head=0)


class HaltReason(enum.Enum):
    NO_RULE = "no-rule"
    HALT_SYMBOL = "halt-symbol"


@dataclass(frozen=True)
class Stepped:
    config: Configuration


@dataclass(frozen=True)
class HaltedHere:
    """The convention's termination condition fired on this step.

    For NO_RULE the configuration is unchanged (nothing executed); for
    HALT_SYMBOL the terminating rule did execute, so the configuration
    carries its write/emit/move effects and the step counts.
    """

    config: Configuration
    reason: HaltReason


StepResult = Stepped | HaltedHere


def _apply(c: Configuration, scan: str, rule: Rule) -> Configuration:
    tape = c.tape
    if rule.write is not None and rule.write != scan:
        cells = [(p, s) for p, s in tape if p != c.head]
        if rule.write != BLANK:
            cells.append((c.head, rule.write))
            cells.sort()
        tape = tuple(cells)
    emitted = c.emitted if rule.emit is None else c.emitted + (rule.emit,)
    return Configuration(
        state=rule.goto,
        tape=tape,
        head=c.head + rule.move.value,
        emitted=emitted,
        steps=c.steps + 1,
    )


def step(m: Machine, c: Configuration) -> StepResult:
    """Execute one step of m from c.

    Raises StuckUndefinedError for a missing rule under HALT_SYMBOL and
    MachineError if the configuration mentions states or symbols the
    machine does not have.
    """
    if c.state not in m.states:
        raise MachineError(f"configuration in unknown state {c.state!r}")
    scan = c.scan()
    if scan not in m.alphabet:
        raise MachineError(f"scanned symbol {scan!r} not in alphabet")
    rule = _table_of(m).get((c.state, scan))
    if rule is None:
        if m.convention is Convention.HALT_STATE:
            return HaltedHere(config=c, reason=HaltReason.NO_RULE)
        raise StuckUndefinedError(c.state, scan, c.steps)
    nxt = _apply(c, scan, rule)
    if m.convention is Convention.HALT_SYMBOL and rule.write == HALTMARK:
        return HaltedHere(config=nxt, reason=HaltReason.HALT_SYMBOL)
    return Stepped(config=nxt)


@dataclass(frozen=True)
class Terminal:
    reason: HaltReason


@dataclass(frozen=True)
class Running:
    pass


def terminal_status(m: Machine, c: Configuration) -> Terminal | Running:
    """Whether c is a stopping configuration, by one-step lookahead.

    Terminal(NO_RULE) under HALT_STATE when no rule matches; under
    HALT_SYMBOL, Terminal(HALT_SYMBOL) when the matching rule is about to
    write the halt mark.  Running otherwise.
    """
    if c.state not in m.states:
        raise MachineError(f"configuration in unknown state {c.state!r}")
    scan = c.scan()
    if scan not in m.alphabet:
        raise MachineError(f"scanned symbol {scan!r} not in alphabet")
    rule = _table_of(m).get((c.state, scan))
    if rule is None:
        if m.convention is Convention.HALT_STATE:
            return Terminal(HaltReason.NO_RULE)
        raise StuckUndefinedError(c.state, scan, c.steps)
    if m.convention is Convention.HALT_SYMBOL and rule.write == HALTMARK:
        return Terminal(HaltReason.HALT_SYMBOL)
    return Running()


def fresh_state(prefix: str, taken: set[str]) -> str:
    if prefix not in taken:
        taken.add(prefix)
        return prefix
    i = 2
    while f"{prefix}{i}" in taken:
        i += 1
    name = f"{prefix}{i}"
    taken.add(name)
    return name

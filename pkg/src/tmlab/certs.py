"""Replayable computation-history certificates.

A certificate pins a bounded claim (halts at t, prints digit d at t, emits
its n-th digit at t, repeats its core configuration with some period) to a
full step-by-step digest chain.  The checker replays the machine from the
recorded initial configuration and recomputes every digest; it trusts
nothing from the producer beyond the bytes of the certificate itself.
Machines are referenced by description number, so a certificate is
self-contained: decode(machine) is the machine it speaks about, in
canonical state/symbol names.

A loops-forever claim is finite evidence for an infinite fact: if the core
(state, tape, head) after step t equals the core after step t - p, and the
history shows a step was executed from the earlier occurrence, determinism
makes the machine retrace that cycle forever.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from hashlib import blake2b

from .codec import InvalidEncoding, canonical_order, decode, encode
from .machine import (
    BLANK,
    Configuration,
    HaltedHere,
    HaltReason,
    Machine,
    MachineError,
    StuckUndefinedError,
    Terminal,
    step,
    terminal_status,
)
from .runner import Budget, ProvablyLooping, run

FORMAT = "tmlab-cert-1"


@dataclass(frozen=True)
class HaltsAt:
    step: int | None = None


@dataclass(frozen=True)
class PrintsSymbolAt:
    digit: int
    step: int | None = None


@dataclass(frozen=True)
class EmitsNthDigitAt:
    n: int
    step: int | None = None


@dataclass(frozen=True)
class LoopsForever:
    """Core configuration after ``step`` equals the one ``period`` earlier."""

    period: int | None = None
    step: int | None = None


Claim = HaltsAt | PrintsSymbolAt | EmitsNthDigitAt | LoopsForever


@dataclass(frozen=True)
class TraceCertificate:
    machine: int
    initial: Configuration
    steps: tuple[tuple[str, str, str], ...]  # (state, scanned, digest hex)
    claim: Claim


@dataclass(frozen=True)
class CannotCertify:
    reason: str


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class Invalid:
    step_index: int | None  # None: structural or claim-level failure
    reason: str


def config_digest(c: Configuration) -> str:
    payload = "|".join(
        (
            c.state,
            str(c.head),
            str(c.steps),
            ",".join(str(d) for d in c.emitted),
            ";".join(f"{pos}:{sym}" for pos, sym in c.tape),
        )
    )
    return blake2b(payload.encode(), digest_size=16).hexdigest()


def _claim_satisfied_now(claim: Claim, before: Configuration, after: Configuration) -> bool:
    grew = len(after.emitted) == len(before.emitted) + 1
    if isinstance(claim, PrintsSymbolAt):
        return grew and after.emitted[-1] == claim.digit
    if isinstance(claim, EmitsNthDigitAt):
        return grew and len(after.emitted) == claim.n
    return False


def canonical_setup(m: Machine, initial_tape=()) -> tuple[int, Machine, tuple[str, ...]]:
    """(description number, canonical machine, renamed tape).

    Certificates name machines by description number, so recorded states
    and symbols are those of decode(encode(m)); the initial tape must be
    renamed the same way.  Inputs using a symbol the canonical form drops
    cannot be certified.
    """
    number = encode(m)
    mc = decode(number)
    _, syms = canonical_order(m)
    sym_map = dict(zip(syms, mc.alphabet))
    try:
        renamed = tuple(sym_map[s] for s in initial_tape)
    except KeyError as exc:
        raise MachineError(
            f"input symbol {exc.args[0]!r} has no canonical counterpart"
        ) from exc
    return number, mc, renamed


def _loop_certificate(
    number: int, mc: Machine, renamed, initial: Configuration, claim: LoopsForever, budget: Budget
) -> TraceCertificate | CannotCertify:
    try:
        out = run(mc, renamed, budget)
    except StuckUndefinedError:
        return CannotCertify("machine is stuck on an undefined rule")
    v = out.verdict
    if not isinstance(v, ProvablyLooping):
        return CannotCertify("no verified core repetition within budget")
    if claim.period is not None and claim.period != v.period:
        return CannotCertify(f"verified period is {v.period}, not {claim.period}")
    if claim.step is not None and claim.step != v.first_repeat_step:
        return CannotCertify(f"first repeat is at step {v.first_repeat_step}")
    cur = initial
    records: list[tuple[str, str, str]] = []
    for _ in range(v.first_repeat_step):
        before = cur
        cur = step(mc, cur).config
        records.append((before.state, before.scan(), config_digest(cur)))
    return TraceCertificate(
        machine=number,
        initial=initial,
        steps=tuple(records),
        claim=LoopsForever(period=v.period, step=v.first_repeat_step),
    )


def make_certificate(
    m: Machine, initial_tape, claim: Claim, budget: Budget
) -> TraceCertificate | CannotCertify:
    """Search for a witness of ``claim`` within budget and record the history."""
    number, mc, renamed = canonical_setup(m, initial_tape)
    cells = tuple(
        (i, sym) for i, sym in enumerate(renamed) if sym != mc.alphabet[0]
    )
    cur = Configuration(state=mc.start, tape=cells, head=0)
    if isinstance(claim, LoopsForever):
        return _loop_certificate(number, mc, renamed, cur, claim, budget)
    initial = cur
    records: list[tuple[str, str, str]] = []

    want_step = claim.step

    def halt_cert() -> TraceCertificate | CannotCertify:
        if isinstance(claim, HaltsAt) and (want_step is None or want_step == cur.steps):
            return TraceCertificate(
                machine=number,
                initial=initial,
                steps=tuple(records),
                claim=HaltsAt(step=cur.steps),
            )
        return CannotCertify("machine halted without witnessing the claim")

    for _ in range(budget.max_steps):
        try:
            r = step(mc, cur)
        except StuckUndefinedError:
            return CannotCertify("machine is stuck on an undefined rule")
        if isinstance(r, HaltedHere) and r.reason is HaltReason.NO_RULE:
            return halt_cert()  # nothing executed; history ends here
        before = cur
        cur = r.config
        records.append((before.state, before.scan(), config_digest(cur)))
        if _claim_satisfied_now(claim, before, cur) and (
            want_step is None or want_step == cur.steps
        ):
            resolved = (
                PrintsSymbolAt(claim.digit, cur.steps)
                if isinstance(claim, PrintsSymbolAt)
                else EmitsNthDigitAt(claim.n, cur.steps)
            )
            return TraceCertificate(
                machine=number, initial=initial, steps=tuple(records), claim=resolved
            )
        if isinstance(r, HaltedHere):
            return halt_cert()
    # a no-rule halt at exactly max_steps is still witnessed within budget
    if isinstance(claim, HaltsAt):
        try:
            if isinstance(terminal_status(mc, cur), Terminal):
                return halt_cert()
        except StuckUndefinedError:
            return CannotCertify("machine is stuck on an undefined rule")
    return CannotCertify("claim not witnessed within budget")


def check_certificate(cert: TraceCertificate) -> Valid | Invalid:
    """Independent replay: digests, rule keys, and the claim must all hold."""
    try:
        mc = decode(cert.machine)
    except InvalidEncoding:
        return Invalid(None, "machine number is not a valid encoding")
    init = cert.initial
    if init.steps != 0 or init.emitted != ():
        return Invalid(None, "initial configuration must be unstepped")
    if init.state not in mc.states:
        return Invalid(None, f"initial state {init.state!r} unknown")
    positions = [pos for pos, _ in init.tape]
    if positions != sorted(set(positions)):
        return Invalid(None, "initial tape positions must be strictly increasing")
    for pos, sym in init.tape:
        if sym not in mc.alphabet:
            return Invalid(None, f"initial tape symbol {sym!r} unknown")
        if sym == BLANK:
            return Invalid(None, "initial tape stores a blank cell explicitly")
    claim = cert.claim
    if claim.step is None:
        return Invalid(None, "claim carries no step")
    earlier_core = None
    if isinstance(claim, LoopsForever):
        if not isinstance(claim.period, int) or not 1 <= claim.period <= claim.step:
            return Invalid(None, "loop period must satisfy 1 <= period <= step")
        if claim.step == claim.period:
            earlier_core = (init.state, init.tape, init.head)

    cur = init
    halted_by_mark = False
    last_grew = False
    last_digit: int | None = None
    for i, (st, sc, digest) in enumerate(cert.steps):
        if halted_by_mark:
            return Invalid(i, "step recorded after the machine halted")
        if cur.state != st or cur.scan() != sc:
            return Invalid(i, "recorded rule key does not match the configuration")
        try:
            r = step(mc, cur)
        except StuckUndefinedError:
            return Invalid(i, "no rule applies at this step")
        if isinstance(r, HaltedHere) and r.reason is HaltReason.NO_RULE:
            return Invalid(i, "machine halts before this step")
        before = cur
        cur = r.config
        if config_digest(cur) != digest:
            return Invalid(i, "digest mismatch")
        last_grew = len(cur.emitted) == len(before.emitted) + 1
        last_digit = cur.emitted[-1] if last_grew else None
        if isinstance(r, HaltedHere):
            halted_by_mark = True
        if isinstance(claim, LoopsForever) and cur.steps == claim.step - claim.period:
            earlier_core = (cur.state, cur.tape, cur.head)

    if cur.steps != claim.step:
        return Invalid(None, "claim step does not match the replayed history")
    if isinstance(claim, HaltsAt):
        if halted_by_mark:
            return Valid()
        try:
            status = terminal_status(mc, cur)
        except StuckUndefinedError:
            return Invalid(None, "machine is stuck, not halted")
        if isinstance(status, Terminal):
            return Valid()
        return Invalid(None, "machine has not halted at the claimed step")
    if isinstance(claim, PrintsSymbolAt):
        if last_grew and last_digit == claim.digit:
            return Valid()
        return Invalid(None, "claimed digit was not emitted at the claimed step")
    if isinstance(claim, EmitsNthDigitAt):
        if last_grew and len(cur.emitted) == claim.n:
            return Valid()
        return Invalid(None, "ledger did not reach the claimed length at the step")
    if isinstance(claim, LoopsForever):
        # the earlier occurrence demonstrably executed a step (its record is
        # part of the verified history), so an equal core cycles forever
        if halted_by_mark:
            return Invalid(None, "machine halted inside the claimed history")
        if earlier_core is None:
            return Invalid(None, "period endpoint missing from the history")
        if (cur.state, cur.tape, cur.head) == earlier_core:
            return Valid()
        return Invalid(None, "core configurations at the period endpoints differ")
    return Invalid(None, f"unsupported claim {claim!r}")


# --- JSON form -------------------------------------------------------------

_CLAIM_KINDS = {
    HaltsAt: "halts-at",
    PrintsSymbolAt: "prints-symbol-at",
    EmitsNthDigitAt: "emits-nth-digit-at",
    LoopsForever: "loops-forever",
}


def _claim_to_json(claim: Claim) -> dict:
    d = {"kind": _CLAIM_KINDS[type(claim)], "step": claim.step}
    if isinstance(claim, PrintsSymbolAt):
        d["digit"] = claim.digit
    if isinstance(claim, EmitsNthDigitAt):
        d["n"] = claim.n
    if isinstance(claim, LoopsForever):
        d["period"] = claim.period
    return d


def _claim_from_json(d: dict) -> Claim:
    kind = d.get("kind")
    if kind == "halts-at":
        return HaltsAt(step=d["step"])
    if kind == "prints-symbol-at":
        return PrintsSymbolAt(digit=d["digit"], step=d["step"])
    if kind == "emits-nth-digit-at":
        return EmitsNthDigitAt(n=d["n"], step=d["step"])
    if kind == "loops-forever":
        return LoopsForever(period=d["period"], step=d["step"])
    raise ValueError(f"unknown claim kind {kind!r}")


def cert_to_json(cert: TraceCertificate) -> str:
    # hex: description numbers of large counterexamples overflow JSON
    # integer practice and CPython's decimal-conversion guard
    doc = {
        "format": FORMAT,
        "machine": f"{cert.machine:x}",
        "initial": {
            "state": cert.initial.state,
            "tape": [[pos, sym] for pos, sym in cert.initial.tape],
            "head": cert.initial.head,
        },
        "steps": [[st, sc, dg] for st, sc, dg in cert.steps],
        "claim": _claim_to_json(cert.claim),
    }
    return json.dumps(doc, indent=2)


def cert_from_json(text: str) -> TraceCertificate:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ValueError(f"unsupported certificate format {doc.get('format')!r}")
    init = doc["initial"]
    return TraceCertificate(
        machine=int(doc["machine"], 16),
        initial=Configuration(
            state=init["state"],
            tape=tuple((int(p), s) for p, s in init["tape"]),
            head=int(init["head"]),
        ),
        steps=tuple((st, sc, dg) for st, sc, dg in doc["steps"]),
        claim=_claim_from_json(doc["claim"]),
    )

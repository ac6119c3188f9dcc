"""Command-line surface over the whole lab.

One executable, twelve subcommands, a fixed exit-code contract:

  0   success (run/classify: the machine halted)
  2   no verdict within budget (BudgetExhausted, Unknown, Undetermined,
      stuck machines, exhausted searches)
  3   proven non-termination (ProvablyLooping)
  4   refutation produced (for refute and beta this is the success path)
  64  usage error
  65  parse or encoding error
  1   a checked certificate failed validation (plain failure, kept apart
      from 65 so piping into `check` distinguishes bad syntax from lies)

Output is deterministic byte-for-byte for identical invocations: JSON is
emitted with sorted keys and no timestamps, and description numbers are
decimal when small, hex when huge (decimal strings of very large numbers
are both unreadable and slow).
"""

from __future__ import annotations

import argparse
import json
import re
import select
import shlex
import subprocess
import sys
from fractions import Fraction

from .certs import (
    CannotCertify,
    EmitsNthDigitAt,
    HaltsAt,
    Invalid,
    LoopsForever,
    PrintsSymbolAt,
    Valid,
    cert_from_json,
    cert_to_json,
    check_certificate,
    make_certificate,
)
from .codec import (
    InvalidEncoding,
    ParseError,
    SemanticError,
    decode,
    encode,
    enumerate_machines,
    parse_text,
    render,
)
from .corpus import NAMED
from .diag import (
    AUndecided,
    CandidateDecider,
    ClassifierCounterexample,
    DiagonalDigits,
    HaltingDecider,
    PrintingDecider,
    Refutation,
    RefuterExhausted,
    TimeoutRefutation,
    adder_adversary,
    diagonal_digits,
    refute_halting_decider,
    refute_printing_decider,
)
from .machine import Machine, StuckUndefinedError
from .reals import (
    DigitStreamReal,
    Digits,
    InsufficientDigits,
    MissingMagnitudeBound,
    Op,
    digit_to_modulus,
    modulus_arith,
    modulus_to_digits,
    rational_real,
)
from .reduce import (
    OracleAnswer,
    halting_to_ndigits,
    halting_to_omd,
    halting_to_printing,
    ndigits_to_halting,
    omd_to_halting,
    printing_to_halting,
    to_halt_state,
    to_halt_symbol,
    variant_pk,
)
from .runner import (
    Budget,
    BudgetExhausted,
    Halted,
    ProvablyLooping,
    Unknown,
    classify,
    run,
    trace_records,
)

EX_OK = 0
EX_CHECK_FAILED = 1
EX_UNDECIDED = 2
EX_LOOPING = 3
EX_REFUTED = 4
EX_USAGE = 64
EX_PARSE = 65

_PARSE_ERRORS = (ParseError, SemanticError, InvalidEncoding, json.JSONDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we own the codes
        raise UsageError(message)


def _fmt_number(n: int) -> str:
    return str(n) if n.bit_length() <= 200 else hex(n)


def _parse_number(s: str) -> int:
    s = s.strip()
    try:
        return int(s, 16) if s.lower().startswith("0x") else int(s, 10)
    except ValueError:
        raise UsageError(f"not a description number: {s!r}")


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_machine(path: str) -> Machine:
    """Machine from a text-grammar file, a corpus name, or stdin."""
    if path in NAMED:
        return NAMED[path]
    source = _read_source(path)
    hint = None if path == "-" else path.rsplit("/", 1)[-1].removesuffix(".tm")
    return parse_text(source, name_hint=hint)


def _budget(args) -> Budget:
    kw = {"max_steps": args.max_steps}
    if getattr(args, "budget_cells", None) is not None:
        kw["max_cells"] = args.budget_cells
    if getattr(args, "max_configs", None) is not None:
        kw["max_seen_configs"] = args.max_configs
    return Budget(**kw)


def _input_symbols(args) -> tuple[str, ...]:
    raw = getattr(args, "input", None)
    return tuple(raw.split()) if raw else ()


def _print_json(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))


def _verdict_doc(v) -> dict:
    if isinstance(v, Halted):
        return {"kind": "halted", "steps": v.steps, "reason": v.reason.value}
    if isinstance(v, ProvablyLooping):
        return {
            "kind": "provably-looping",
            "first_repeat_step": v.first_repeat_step,
            "period": v.period,
        }
    if isinstance(v, (BudgetExhausted, Unknown)):
        kind = "budget-exhausted" if isinstance(v, BudgetExhausted) else "unknown"
        return {"kind": kind, "limit": v.limit}
    raise TypeError(f"no verdict rendering for {v!r}")


def _verdict_exit(v) -> int:
    if isinstance(v, Halted):
        return EX_OK
    if isinstance(v, ProvablyLooping):
        return EX_LOOPING
    return EX_UNDECIDED


# --- run / trace / classify ---------------------------------------------------


def _cmd_run(args) -> int:
    m = _load_machine(args.machine)
    try:
        out = run(m, _input_symbols(args), _budget(args), keep_trace=args.trace)
    except StuckUndefinedError as exc:
        if args.json:
            _print_json({"verdict": {"kind": "stuck", "state": exc.state,
                                     "symbol": exc.symbol, "steps": exc.steps}})
        else:
            print(f"stuck: no rule for ({exc.state}, {exc.symbol}) at step {exc.steps}")
        return EX_UNDECIDED
    if args.json:
        doc = {
            "verdict": _verdict_doc(out.verdict),
            "emitted": list(out.emitted),
            "emission_steps": list(out.emission_steps),
            "steps_run": out.steps_run,
        }
        if args.trace:
            doc["trace"] = trace_records(m, _input_symbols(args), _budget(args))
        _print_json(doc)
    else:
        v = _verdict_doc(out.verdict)
        detail = " ".join(f"{k}={v[k]}" for k in sorted(v) if k != "kind")
        print(f"verdict: {v['kind']} {detail}".rstrip())
        if out.emitted:
            print("emitted:", " ".join(map(str, out.emitted)))
    return _verdict_exit(out.verdict)


def _cmd_trace(args) -> int:
    m = _load_machine(args.machine)
    try:
        rows = trace_records(m, _input_symbols(args), _budget(args))
        out = run(m, _input_symbols(args), _budget(args))
    except StuckUndefinedError as exc:
        print(f"stuck: no rule for ({exc.state}, {exc.symbol}) at step {exc.steps}")
        return EX_UNDECIDED
    if args.json:
        _print_json({"verdict": _verdict_doc(out.verdict), "trace": rows})
    else:
        for r in rows:
            print(f"{r['step']:6d} {r['state']:12s} head={r['head']:4d} "
                  f"[{r['window']}] {r['action']}")
    return _verdict_exit(out.verdict)


def _cmd_classify(args) -> int:
    m = _load_machine(args.machine)
    try:
        v = classify(m, _input_symbols(args), _budget(args))
    except StuckUndefinedError as exc:
        if args.json:
            _print_json({"verdict": {"kind": "stuck", "state": exc.state,
                                     "symbol": exc.symbol, "steps": exc.steps}})
        else:
            print(f"stuck at step {exc.steps}")
        return EX_UNDECIDED
    doc = _verdict_doc(v)
    if args.json:
        _print_json({"verdict": doc})
    else:
        print(doc["kind"])
    return _verdict_exit(v)


# --- encode / decode / enumerate ----------------------------------------------


def _cmd_encode(args) -> int:
    m = _load_machine(args.machine)
    n = encode(m)
    if args.json:
        _print_json({"number": _fmt_number(n), "name": m.name,
                     "states": len(m.states), "base": m.base})
    else:
        print(_fmt_number(n))
    return EX_OK


def _cmd_decode(args) -> int:
    m = decode(_parse_number(args.number))
    if args.json:
        _print_json({"machine": render(m), "name": m.name,
                     "states": len(m.states), "base": m.base})
    else:
        print(render(m), end="")
    return EX_OK


def _cmd_enumerate(args) -> int:
    rows = []
    for i in range(args.count):
        m = enumerate_machines(i)
        rows.append({"index": i, "number": _fmt_number(encode(m)),
                     "name": m.name, "states": len(m.states), "base": m.base})
    if args.json:
        _print_json(rows)
    else:
        for r in rows:
            print(f"{r['index']:5d} {r['number']:>12s} {r['name']:12s} "
                  f"states={r['states']} base={r['base']}")
    return EX_OK


# --- reduce ---------------------------------------------------------------------


def _cmd_reduce(args) -> int:
    m = _load_machine(args.machine)
    t = None
    try:
        if args.kind == "halting-to-printing":
            out = halting_to_printing(m, _input_symbols(args))
        elif args.kind == "printing-to-halting":
            out = printing_to_halting(m, args.symbol)
        elif args.kind == "ndigits-to-halting":
            out = ndigits_to_halting(m, args.n)
        elif args.kind == "halting-to-ndigits":
            out = halting_to_ndigits(m, _input_symbols(args))
        elif args.kind == "omd-to-halting":
            out = omd_to_halting(m, args.t)
        elif args.kind == "halting-to-omd":
            out, t = halting_to_omd(m, _input_symbols(args))
        elif args.kind == "variant-pk":
            out = variant_pk(m, args.k)
        elif args.kind == "to-halt-state":
            out = to_halt_state(m)
        elif args.kind == "to-halt-symbol":
            out = to_halt_symbol(m)
        else:
            raise UsageError(f"unknown reduction {args.kind!r}")
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.json:
        doc = {"machine": render(out), "name": out.name}
        if t is not None:
            doc["t"] = t
        _print_json(doc)
    else:
        if t is not None:
            print(f"t {t}", file=sys.stderr)
        print(render(out), end="")
    return EX_OK


# --- refute ---------------------------------------------------------------------


class _ExternalDecider:
    """Line protocol: machine text, then `%input <symbols>`, then `%end`;
    the command answers one line, `yes` or `no`, per instance."""

    def __init__(self, command: str, timeout_s: float):
        self.timeout_s = timeout_s
        self.proc = subprocess.Popen(
            shlex.split(command), stdin=subprocess.PIPE,
            stdout=subprocess.PIPE, text=True, bufsize=1,
        )

    def __call__(self, problem) -> OracleAnswer:
        m = decode(problem.machine)
        text = render(m)
        self.proc.stdin.write(text if text.endswith("\n") else text + "\n")
        self.proc.stdin.write(f"%input {' '.join(problem.input)}\n%end\n")
        self.proc.stdin.flush()
        ready, _, _ = select.select([self.proc.stdout], [], [], self.timeout_s)
        if not ready:
            self.proc.kill()
            raise TimeoutRefutation("external", self.timeout_s, int(self.timeout_s * 1e6))
        line = self.proc.stdout.readline().strip().lower()
        if line == "yes":
            return OracleAnswer.YES
        if line == "no":
            return OracleAnswer.NO
        raise UsageError(f"external decider answered {line!r}, expected yes/no")

    def close(self):
        if self.proc.poll() is None:
            self.proc.kill()


def _builtin_decider(kind: str, name: str) -> CandidateDecider:
    from .deciders import BUILTIN_ADDERS, BUILTIN_HALTING, BUILTIN_PRINTING

    table = {"halting": BUILTIN_HALTING, "printing": BUILTIN_PRINTING,
             "adder": BUILTIN_ADDERS}[kind]
    if name not in table:
        known = ", ".join(sorted(table))
        raise UsageError(f"no builtin {kind} decider {name!r} (have: {known})")
    return table[name]


def _refutation_doc(r: Refutation) -> dict:
    return {
        "decider": r.decider,
        "narrative": r.narrative,
        "predicted": r.predicted.value,
        "problem": {"tag": r.problem.tag.value,
                    "machine": _fmt_number(r.problem.machine),
                    "param": r.problem.param},
        "machine": render(r.counterexample),
        "input": list(r.input),
        "certificate": json.loads(cert_to_json(r.observed)),
    }


def _cmd_refute(args) -> int:
    spec = args.decider
    external = None
    if args.kind == "adder":
        if not spec.startswith("builtin:"):
            raise UsageError("adder refutation supports builtin adders only")
        cand = _builtin_decider("adder", spec.removeprefix("builtin:"))
        return _refute_adder(cand, args)
    if spec.startswith("builtin:"):
        cand = _builtin_decider(args.kind, spec.removeprefix("builtin:"))
    elif spec.startswith("cmd:"):
        external = _ExternalDecider(spec.removeprefix("cmd:"), args.timeout)
        kind = HaltingDecider() if args.kind == "halting" else PrintingDecider(0)
        cand = CandidateDecider("external", kind, external,
                                timeout_steps=int(args.timeout * 1e6))
    else:
        cand = _builtin_decider(args.kind, spec)
    refuter = refute_halting_decider if args.kind == "halting" else refute_printing_decider
    try:
        r = refuter(cand)
    except TimeoutRefutation as exc:
        if args.json:
            _print_json({"kind": "timeout", "decider": exc.name,
                         "elapsed_s": round(exc.elapsed, 3)})
        else:
            print(f"timeout: {exc}")
        return EX_REFUTED
    except RefuterExhausted as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return EX_UNDECIDED
    finally:
        if external is not None:
            external.close()
    if args.json:
        _print_json(_refutation_doc(r))
    else:
        print(f"refuted {r.decider}: {r.narrative}")
        print(f"counterexample {r.counterexample.name}, predicted {r.predicted.name}")
    return EX_REFUTED


def _carry_doc(ev) -> dict:
    lo, hi = ev.claimed_interval
    return {
        "adder": ev.adder,
        "switch": ev.switch,
        "switch_point": ev.switch_point,
        "claimed_digits": list(ev.claimed_digits),
        "claimed_interval": [str(lo), str(hi)],
        "a": str(ev.a_value),
        "b": str(ev.b_value),
        "true_sum": str(ev.true_sum),
        "sum_machine": _fmt_number(ev.sum_number),
        "digits_budget": ev.digits_budget,
    }


def _refute_adder(cand: CandidateDecider, args) -> int:
    try:
        a, b, ev = adder_adversary(cand)
    except AUndecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EX_UNDECIDED
    except TimeoutRefutation as exc:
        print(f"timeout: {exc}")
        return EX_REFUTED
    if args.json:
        _print_json(_carry_doc(ev))
    else:
        lo, hi = ev.claimed_interval
        print(f"refuted {ev.adder}: claimed sum in [{lo}, {hi}), true sum {ev.true_sum}")
        print(f"b emits {ev.switch_point} sevens then switches to {ev.switch}")
    return EX_REFUTED


# --- beta -----------------------------------------------------------------------


def _cmd_beta(args) -> int:
    from .deciders import ACCEPT_EVERYTHING, ACCEPT_NOTHING, ground_truth_classifier

    if args.classifier == "ground-truth":
        classifier = ground_truth_classifier(args.digits, _budget(args))
    elif args.classifier == "accept-everything":
        classifier = ACCEPT_EVERYTHING
    elif args.classifier == "accept-nothing":
        classifier = ACCEPT_NOTHING
    else:
        raise UsageError(f"unknown classifier {args.classifier!r}")
    res = diagonal_digits(classifier, args.n, _budget(args), scan_cap=args.scan_cap)
    if isinstance(res, DiagonalDigits):
        if args.json:
            _print_json({"kind": "digits", "digits": list(res.digits),
                         "machines": [_fmt_number(encode(m)) for m in res.machines]})
        else:
            print("beta:", " ".join(map(str, res.digits)))
        return EX_OK
    if isinstance(res, ClassifierCounterexample):
        if args.json:
            _print_json({"kind": "counterexample", "index": res.index,
                         "machine": _fmt_number(encode(res.machine)),
                         "verdict": _verdict_doc(res.outcome.verdict)})
        else:
            print(f"counterexample: accepted machine cannot supply digit {res.index}")
        return EX_REFUTED
    print(f"empty: nothing accepted among {res.scanned} machines", file=sys.stderr)
    return EX_UNDECIDED


# --- real -----------------------------------------------------------------------


def _split_call_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_real_expr(s: str, args):
    s = s.strip()
    if s.startswith("rat:"):
        try:
            return rational_real(Fraction(s.removeprefix("rat:")))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad rational literal: {exc}")
    if s.startswith("digits:"):
        spec = s.removeprefix("digits:")
        path, _, ip = spec.partition("@")
        integer_part = int(ip) if ip else 0
        return digit_to_modulus(DigitStreamReal(integer_part, _load_machine(path)),
                                _budget(args))
    m = re.fullmatch(r"(add|mul|neg|exp)\((.*)\)", s, re.DOTALL)
    if not m:
        raise UsageError(f"cannot parse real expression {s!r}")
    op_name, body = m.group(1), m.group(2)
    operands = [_parse_real_expr(p, args) for p in _split_call_args(body)]
    op = {"add": Op.ADD, "mul": Op.MUL, "neg": Op.NEG, "exp": Op.EXP}[op_name]
    arity = 2 if op in (Op.ADD, Op.MUL) else 1
    if len(operands) != arity:
        raise UsageError(f"{op_name} takes {arity} operand(s), got {len(operands)}")
    try:
        if op is Op.EXP:
            return modulus_arith(op, *operands, bound=args.bound)
        return modulus_arith(op, *operands)
    except MissingMagnitudeBound:
        raise UsageError("exp needs --bound (a rational magnitude bound)")


def _cmd_real(args) -> int:
    x = _parse_real_expr(args.expr, args)
    try:
        q = x.approx(args.approx)
    except InsufficientDigits as exc:
        print(f"insufficient digits: have {exc.have}, need {exc.need}", file=sys.stderr)
        return EX_UNDECIDED
    doc = {"approx": {"n": args.approx, "value": str(q)}}
    code = EX_OK
    if args.extract is not None:
        try:
            got = modulus_to_digits(x, args.extract, base=args.base,
                                    tie_budget=args.tie_budget)
        except InsufficientDigits as exc:
            print(f"insufficient digits: have {exc.have}, need {exc.need}",
                  file=sys.stderr)
            return EX_UNDECIDED
        if isinstance(got, Digits):
            doc["extract"] = {"kind": "digits", "base": args.base,
                              "digits": list(got.digits)}
        else:
            lo, hi = got.interval
            doc["extract"] = {"kind": "undetermined", "position": got.position,
                              "interval": [str(lo), str(hi)]}
            code = EX_UNDECIDED
    if args.json:
        _print_json(doc)
    else:
        print(f"approx({args.approx}) = {q}")
        if "extract" in doc:
            e = doc["extract"]
            if e["kind"] == "digits":
                print(f"digits (base {args.base}):", " ".join(map(str, e["digits"])))
            else:
                print(f"undetermined at position {e['position']} "
                      f"in [{e['interval'][0]}, {e['interval'][1]}]")
    return code


# --- certify / check ------------------------------------------------------------


_CLAIM_RE = {
    "halts": re.compile(r"halts(?:@(\d+))?$"),
    "prints": re.compile(r"prints:(\d+)(?:@(\d+))?$"),
    "digit": re.compile(r"digit:(\d+)(?:@(\d+))?$"),
    "loops": re.compile(r"loops(?:@(\d+):(\d+))?$"),
}


def _parse_claim(s: str):
    if m := _CLAIM_RE["halts"].match(s):
        return HaltsAt(step=int(m.group(1)) if m.group(1) else None)
    if m := _CLAIM_RE["prints"].match(s):
        return PrintsSymbolAt(digit=int(m.group(1)),
                              step=int(m.group(2)) if m.group(2) else None)
    if m := _CLAIM_RE["digit"].match(s):
        return EmitsNthDigitAt(n=int(m.group(1)),
                               step=int(m.group(2)) if m.group(2) else None)
    if m := _CLAIM_RE["loops"].match(s):
        step = int(m.group(1)) if m.group(1) else None
        period = int(m.group(2)) if m.group(2) else None
        return LoopsForever(period=period, step=step)
    raise UsageError(
        f"cannot parse claim {s!r}; use halts[@STEP], prints:D[@STEP], "
        "digit:N[@STEP], or loops[@STEP:PERIOD]"
    )


def _cmd_certify(args) -> int:
    m = _load_machine(args.machine)
    claim = _parse_claim(args.claim)
    cert = make_certificate(m, _input_symbols(args), claim, _budget(args))
    if isinstance(cert, CannotCertify):
        print(f"cannot certify: {cert.reason}", file=sys.stderr)
        return EX_UNDECIDED
    print(cert_to_json(cert))
    return EX_OK


def _cmd_check(args) -> int:
    doc = json.loads(_read_source(args.certificate))
    if isinstance(doc, dict) and "certificate" in doc and "format" not in doc:
        doc = doc["certificate"]  # accept refutation JSON directly
    try:
        cert = cert_from_json(json.dumps(doc))
    except (KeyError, TypeError, ValueError) as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return EX_PARSE
    v = check_certificate(cert)
    if isinstance(v, Valid):
        print("valid")
        return EX_OK
    where = "" if v.step_index is None else f" (step {v.step_index})"
    print(f"invalid{where}: {v.reason}")
    return EX_CHECK_FAILED


# --- wiring ---------------------------------------------------------------------


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--max-configs", type=int, default=None)
    p.add_argument("--budget-cells", type=int, default=None)


def build_parser() -> _Parser:
    top = _Parser(prog="tmlab", description=__doc__,
                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="command", required=True)

    def cmd(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(func=fn)
        p.add_argument("--json", action="store_true")
        return p

    p = cmd("run", _cmd_run, help="run a machine and report the verdict")
    p.add_argument("machine")
    p.add_argument("--input", default="")
    p.add_argument("--trace", action="store_true")
    _add_budget_flags(p)

    p = cmd("trace", _cmd_trace, help="print the step-by-step trace")
    p.add_argument("machine")
    p.add_argument("--input", default="")
    _add_budget_flags(p)

    p = cmd("classify", _cmd_classify, help="halted / provably-looping / unknown")
    p.add_argument("machine")
    p.add_argument("--input", default="")
    _add_budget_flags(p)

    p = cmd("encode", _cmd_encode, help="description number of a machine")
    p.add_argument("machine")

    p = cmd("decode", _cmd_decode, help="machine text of a description number")
    p.add_argument("number")

    p = cmd("enumerate", _cmd_enumerate, help="first valid machines in order")
    p.add_argument("count", type=int)

    p = cmd("reduce", _cmd_reduce, help="apply a machine-to-machine reduction")
    p.add_argument("kind", choices=[
        "halting-to-printing", "printing-to-halting", "ndigits-to-halting",
        "halting-to-ndigits", "omd-to-halting", "halting-to-omd",
        "variant-pk", "to-halt-state", "to-halt-symbol",
    ])
    p.add_argument("machine")
    p.add_argument("--input", default="")
    p.add_argument("--symbol", type=int, default=0, help="watched digit")
    p.add_argument("--n", type=int, default=1, help="digit index")
    p.add_argument("--t", type=int, default=0, help="digit count already emitted")
    p.add_argument("--k", type=int, default=1, help="pause factor")

    p = cmd("refute", _cmd_refute, help="find a certified mistake of a decider")
    p.add_argument("kind", choices=["halting", "printing", "adder"])
    p.add_argument("decider", help="builtin:NAME, bare builtin name, or cmd:COMMAND")
    p.add_argument("--timeout", type=float, default=10.0,
                   help="per-query seconds for external commands")

    p = cmd("beta", _cmd_beta, help="diagonal digit stream over accepted machines")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--classifier", default="ground-truth",
                   choices=["ground-truth", "accept-everything", "accept-nothing"])
    p.add_argument("--digits", type=int, default=20,
                   help="ground-truth acceptance threshold")
    p.add_argument("--scan-cap", type=int, default=5_000)
    _add_budget_flags(p)

    p = cmd("real", _cmd_real, help="evaluate a computable-real expression")
    p.add_argument("expr", help="rat:P/Q | digits:FILE[@INT] | add(x,y) | "
                                "neg(x) | mul(x,y) | exp(x)")
    p.add_argument("--approx", type=int, default=8)
    p.add_argument("--extract", type=int, default=None)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--tie-budget", type=int, default=64)
    p.add_argument("--bound", type=Fraction, default=None,
                   help="magnitude bound for exp")
    _add_budget_flags(p)

    p = cmd("certify", _cmd_certify, help="produce a replayable certificate")
    p.add_argument("machine")
    p.add_argument("claim")
    p.add_argument("--input", default="")
    _add_budget_flags(p)

    p = cmd("check", _cmd_check, help="validate a certificate (or refutation) JSON")
    p.add_argument("certificate", help="file or - for stdin")

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except _PARSE_ERRORS as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EX_PARSE
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())

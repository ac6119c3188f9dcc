"""Bounded-truth sweep of the six machine-to-machine reductions.

For each of the first N valid machines (blank tape) and each budget B,
the source problem's truth within B must equal the target problem's
truth within the declared overhead ov(B).  Prints a per-reduction
mismatch count; all zeros is the expected outcome.
"""

import argparse
import time

from tmlab.codec import first_machines
from tmlab.machine import StuckUndefinedError
from tmlab.reduce import (
    halting_to_ndigits,
    halting_to_omd,
    halting_to_printing,
    ndigits_to_halting,
    omd_to_halting,
    ov_halting_to_ndigits,
    ov_halting_to_omd,
    ov_halting_to_printing,
    ov_ndigits_to_halting,
    ov_omd_to_halting,
    ov_printing_to_halting,
    printing_to_halting,
)
from tmlab.runner import Budget, Halted, Insufficient, emit_digits


def events(m, horizon):
    """(halt step or None, [(step, digit), ...]) within the horizon.

    Asking for more digits than the horizon has steps forces Insufficient,
    whose ledger is exactly the full-simulation one (verified loops are
    extended arithmetically), with the final verdict attached.
    """
    try:
        got = emit_digits(m, horizon + 1, Budget(max_steps=horizon))
    except StuckUndefinedError as exc:
        if exc.steps == 0:
            return None, []
        got = emit_digits(m, exc.steps + 1, Budget(max_steps=exc.steps))
        return None, list(zip(got.steps, got.digits))
    assert isinstance(got, Insufficient)
    v = got.outcome.verdict
    halted = got.outcome.steps_run if isinstance(v, Halted) else None
    return halted, list(zip(got.steps, got.digits))


def first(ems, digit=None, after=0):
    for s, d in ems:
        if s > after and (digit is None or d == digit):
            return s
    return None


def nth(ems, n):
    return ems[n - 1][0] if len(ems) >= n else None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--machines", type=int, default=100)
    ap.add_argument("--budgets", type=int, nargs="+",
                    default=[100, 1_000, 10_000])
    args = ap.parse_args()
    budgets = sorted(args.budgets)
    top = budgets[-1]

    plans = [
        ("halting_to_printing",
         lambda m: halting_to_printing(m, ()),
         lambda src: src[0], lambda tgt: first(tgt[1], digit=0),
         ov_halting_to_printing),
        ("printing_to_halting",
         lambda m: printing_to_halting(m, 0),
         lambda src: first(src[1], digit=0), lambda tgt: tgt[0],
         ov_printing_to_halting),
        ("ndigits_to_halting",
         lambda m: ndigits_to_halting(m, 2),
         lambda src: nth(src[1], 2), lambda tgt: tgt[0],
         lambda b: ov_ndigits_to_halting(b, 2)),
        ("halting_to_ndigits",
         lambda m: halting_to_ndigits(m, ()),
         lambda src: src[0], lambda tgt: nth(tgt[1], 2),
         lambda b: ov_halting_to_ndigits(b, 2)),
        ("omd_to_halting",
         lambda m: omd_to_halting(m, 1),
         lambda src: first(src[1], after=1), lambda tgt: tgt[0],
         lambda b: ov_omd_to_halting(b, 1)),
        ("halting_to_omd",
         lambda m: halting_to_omd(m, ())[0],
         lambda src: src[0], lambda tgt: first(tgt[1], after=0),
         ov_halting_to_omd),
    ]

    t0 = time.perf_counter()
    machines = [(m, events(m, top + 1)) for m in first_machines(args.machines)]
    mismatches = {name: 0 for name, *_ in plans}
    for name, build, src_time, tgt_time, ov in plans:
        for m, src in machines:
            tgt = events(build(m), ov(top) + 1)
            s_t, t_t = src_time(src), tgt_time(tgt)
            for b in budgets:
                s = s_t is not None and s_t <= b
                t = t_t is not None and t_t <= ov(b)
                if s != t:
                    mismatches[name] += 1
                    print(f"  MISMATCH {name} on {m.name} at budget {b}: "
                          f"source {s_t}, target {t_t}")
    elapsed = time.perf_counter() - t0

    print(f"swept {args.machines} machines x {len(plans)} reductions x "
          f"budgets {budgets} in {elapsed:.1f}s")
    for name, count in mismatches.items():
        print(f"  {name:22s} {count} mismatches")
    if any(mismatches.values()):
        raise SystemExit(1)


if __name__ == "__main__":
    main()

"""Run every builtin decider into its refuter and print the casualty list.

Each line shows the decider, the counterexample machine, what the decider
predicted, and whether the replay certificate checks out.  Every builtin
is expected to fall; a perfect decider would raise RefuterExhausted.
"""

import argparse
import time

from tmlab.certs import Valid, check_certificate
from tmlab.deciders import BUILTIN_ADDERS, BUILTIN_HALTING, BUILTIN_PRINTING
from tmlab.diag import (
    AUndecided,
    adder_adversary,
    refute_halting_decider,
    refute_printing_decider,
    validate_refutation,
)


def fall(kind, name, refuter, cand):
    t0 = time.perf_counter()
    r = refuter(cand)
    ms = 1000 * (time.perf_counter() - t0)
    ok, why = validate_refutation(r)
    cert = "cert ok" if isinstance(check_certificate(r.observed), Valid) else "CERT BAD"
    flag = "" if ok else f"  INVALID: {why}"
    print(f"{kind:9s} {name:28s} {r.counterexample.name:18s} "
          f"predicted {r.predicted.value:3s} {cert} ({ms:5.0f} ms) "
          f"{r.narrative}{flag}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.parse_args()
    for name, cand in sorted(BUILTIN_HALTING.items()):
        fall("halting", name, refute_halting_decider, cand)
    for name, cand in sorted(BUILTIN_PRINTING.items()):
        fall("printing", name, refute_printing_decider, cand)
    for name, cand in sorted(BUILTIN_ADDERS.items()):
        t0 = time.perf_counter()
        try:
            _, _, ev = adder_adversary(cand)
        except AUndecided as exc:
            print(f"{'adder':9s} {name:28s} undecided: {exc}")
            continue
        ms = 1000 * (time.perf_counter() - t0)
        print(f"{'adder':9s} {name:28s} {'b=' + ev.switch:18s} "
              f"claimed {ev.claimed_digits} true sum {ev.true_sum} "
              f"({ms:5.0f} ms) switch after {ev.switch_point} sevens")


if __name__ == "__main__":
    main()

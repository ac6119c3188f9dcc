"""The carry problem, end to end.

Adds the digit-stream reals 2/9 and 7/9 in the modulus representation,
shows the approximations pinning the sum to 1, shows digit extraction
refusing to commit (every queried interval straddles the cell edge at 1),
then unleashes the adversary on a builtin digit-stream adder.
"""

import argparse
from fractions import Fraction

from tmlab.corpus import constant_emitter
from tmlab.deciders import BUILTIN_ADDERS
from tmlab.diag import adder_adversary
from tmlab.reals import (
    DigitStreamReal,
    Op,
    Undetermined,
    digit_to_modulus,
    modulus_arith,
    modulus_to_digits,
)
from tmlab.runner import Budget


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--adder", default="eager-nines",
                    choices=sorted(BUILTIN_ADDERS))
    ap.add_argument("--precision", type=int, default=24)
    args = ap.parse_args()

    b = Budget(max_steps=50_000)
    a = digit_to_modulus(DigitStreamReal(0, constant_emitter(2)), b)
    c = digit_to_modulus(DigitStreamReal(0, constant_emitter(7)), b)
    total = modulus_arith(Op.ADD, a, c)

    print("0.222... + 0.777... in the modulus representation:")
    for n in (1, 4, 8, 16, args.precision):
        q = total.approx(n)
        print(f"  approx({n:2d}) = {q}   |error| <= 2^-{n} "
              f"(true error {abs(q - 1)})")

    got = modulus_to_digits(total, 1, tie_budget=64)
    assert isinstance(got, Undetermined)
    lo, hi = got.interval
    print(f"\ndigit extraction refuses at position {got.position}: "
          f"every interval straddles 1 (last tried [{lo}, {hi}])")
    print("the first digit would need to choose between 0.999... and 1.000...,")
    print("which no finite prefix of the addends settles")

    cand = BUILTIN_ADDERS[args.adder]
    _, _, ev = adder_adversary(cand)
    lo, hi = ev.claimed_interval
    print(f"\nadversary vs {args.adder}:")
    print(f"  a = 2/9, b opened with {ev.switch_point} sevens; the adder "
          f"committed to digits {ev.claimed_digits}, i.e. sum in [{lo}, {hi})")
    print(f"  b then switched to {ev.switch}: b = {ev.b_value}, "
          f"true sum = {ev.true_sum}")
    inside = lo <= ev.true_sum < hi
    print(f"  true sum inside the committed cell? {inside}")


if __name__ == "__main__":
    main()

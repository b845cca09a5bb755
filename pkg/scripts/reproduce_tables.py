"""Envelope values from the closed forms next to exact integration at a few beta values.

    python3 scripts/reproduce_tables.py [--t -1 -0.5 0 0.5 1]
"""

import argparse

from betabounds.bounds import ENVELOPE_KINDS, beta_bound_copulas, envelope
from betabounds.concordance import measure


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=float, nargs="+", default=[-1.0, -0.5, 0.0, 0.5, 1.0])
    args = ap.parse_args()
    print(f"{'measure':9} {'t':>5} {'lower':>12} {'(integral)':>12} {'upper':>12} {'(integral)':>12}")
    for kind in ENVELOPE_KINDS:
        for t in args.t:
            lo, up = beta_bound_copulas(t)
            print(
                f"{kind.value:9} {t:5.2f} {envelope(kind, 'lower', t):12.8f} {measure(kind, lo):12.8f} "
                f"{envelope(kind, 'upper', t):12.8f} {measure(kind, up):12.8f}"
            )


if __name__ == "__main__":
    main()

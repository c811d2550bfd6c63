"""Tabulate narrow class numbers, minimal-ideal shapes and S_0 sizes for a list of fields."""

import argparse

from heckekms.boundary import minimal_norm_ideals, s_denominator, s_zero
from heckekms.number_field import make_field, narrow_class_group


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ds", nargs="*", type=int, default=[1, 2, 3, 5, -1, -5, -15, -23, 15, 79])
    args = ap.parse_args()
    print(f"{'d':>5} {'h+':>4}  {'shape':<20} {'|S0|':>5} {'den':>5}")
    for d in args.ds:
        f = make_field(d)
        t = minimal_norm_ideals(f)
        print(f"{d:>5} {narrow_class_group(f).order:>4}  {str(t.shape):<20} {len(s_zero(t)):>5} {s_denominator(t):>5}")


if __name__ == "__main__":
    main()

"""Print KMS values over Q approaching the ground value as beta grows."""

import argparse
from fractions import Fraction

from heckekms.hecke import e, mu, mu_star
from heckekms.number_field import make_field
from heckekms.states import ground_point, kms_ground_limit_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--betas", default="2,4,8,16")
    ap.add_argument("--bound", type=int, default=10_000)
    args = ap.parse_args()
    Q = make_field(1)
    p = ground_point(Q, (0, 0), 1, 2)
    betas = [int(b) for b in args.betas.split(",")]
    for name, H in [("mu2 mu2*", mu(Q(2)) * mu_star(Q(2))), ("e_1/2", e(Q(Fraction(1, 2))))]:
        rep = kms_ground_limit_check(p, H, betas, args.bound)
        print(f"{name}: ground value {rep.ground}")
        for b, v, err, gap in zip(rep.betas, rep.values, rep.errors, rep.gaps):
            print(f"  beta={b:>3}  value={complex(v).real:+.12f}  error<={err:.1e}  gap={gap:.3e}")


if __name__ == "__main__":
    main()

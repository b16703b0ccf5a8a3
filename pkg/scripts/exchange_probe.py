"""Exchange probe near the first critical-line zero.

For each offset dt and n, prints |tail ratio| / |growth term| and the relative
distance of the partial-sum ratio from lambda, then fits the decay rate of
that distance in n.  At sigma = 3/4 the distance shrinks like n^-1/4.
"""

import argparse
from fractions import Fraction

from gmpy2 import mpfr

from etalab.limits import Schedule, decay_fit, exchange_report, locate_zero
from etalab.mpcore import scientific, working


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma", default="0.75")
    ap.add_argument("--lo", type=int, default=10**2)
    ap.add_argument("--hi", type=int, default=10**6)
    ap.add_argument("--offsets", default="0,0.001,0.01,0.1")
    ap.add_argument("--bracket", type=float, nargs=2, default=[14, 15])
    ap.add_argument("--prec", type=int, default=192)
    args = ap.parse_args()

    zero = locate_zero(tuple(args.bracket), args.prec)
    print(f"t0 = {zero.t0}  |eta(1/2+i t0)| = {scientific(zero.residual, 3)}")
    offsets = [Fraction(x) for x in args.offsets.split(",")]
    rep = exchange_report(args.sigma, zero.t0, Schedule.geometric(args.lo, args.hi), offsets, args.prec)

    by_offset = {}
    for r in rep.rows:
        with working(args.prec + 16):
            t_over_g = abs(r.tail_ratio) / abs(r.growth)
            dist = None if r.partial_ratio is None else abs(r.partial_ratio - r.lam) / abs(r.lam)
        line = f"dt={float(r.offset):<6g} n={r.n:<9d} |tail/growth|={float(t_over_g):.8f}"
        if dist is not None:
            line += f"  |partial/lambda - 1|={scientific(dist, 4)}"
            by_offset.setdefault(r.offset, []).append((r.n, dist))
        if r.coincidence is not None:
            line += f"  coincidence={scientific(r.coincidence, 3)}"
        print(line + (f"  {r.flag}" if r.flag else ""))

    for dt, pairs in sorted(by_offset.items()):
        if len(pairs) >= 3 and all(d > 0 for _, d in pairs):
            print(f"dt={float(dt):g}: partial-ratio distance decays like n^{decay_fit(pairs).slope:.3f}")


if __name__ == "__main__":
    main()

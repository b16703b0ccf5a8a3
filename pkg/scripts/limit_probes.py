"""Ratio and scaled-error probes along a geometric n schedule, plus the
uniform tail-bound scan on vertical lines.  Prints one table per probe."""

import argparse

from etalab.experiments import DEFAULT_S
from etalab.limits import Schedule, decay_fit, eps_scaled, f_sequence, lemma1_ratios, uniform_bound_scan
from etalab.mpcore import scientific


def show_series(series):
    print(f"{series.name} (limit {series.limit})")
    for row in series.rows:
        dev = "" if row.deviation is None else scientific(row.deviation, 4)
        print(f"  n={row.n:<12d} deviation={dev:<12s} {row.flag or ''}")
    if len(series.rows) >= 3:
        print(f"  log-log slope {decay_fit(series).slope:.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", default=DEFAULT_S)
    ap.add_argument("--lo", type=int, default=10**2)
    ap.add_argument("--hi", type=int, default=10**6)
    ap.add_argument("--prec", type=int, default=192)
    ap.add_argument("--sigmas", nargs="+", default=["0.1234", "0.5", "0.75"])
    ap.add_argument("--scan-n", type=int, nargs="+", default=[10**2, 10**4, 10**6])
    ap.add_argument("--t-max", type=int, default=100)
    args = ap.parse_args()

    sched = Schedule.geometric(args.lo, args.hi)
    probe = lemma1_ratios(args.s, sched, args.prec)
    show_series(probe.prev)
    show_series(probe.next)
    show_series(f_sequence(args.s, sched, args.prec))
    show_series(eps_scaled(args.s, sched, args.prec))

    print(f"uniform scan, t = 0..{args.t_max}")
    for sigma in args.sigmas:
        for n in args.scan_n:
            scan = uniform_bound_scan(sigma, range(0, args.t_max + 1), n, args.prec)
            print(f"  sigma={sigma:<7s} n={n:<9d} sup={scientific(scan.sup_tail, 5)} "
                  f"bound={scientific(scan.bound, 5)} at t={int(scan.t_at_sup)} "
                  f"{'PASS' if scan.passed else 'FAIL'}")


if __name__ == "__main__":
    main()

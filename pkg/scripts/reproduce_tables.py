"""Tail digit blocks and the relative-error table at s = 0.1234+56.789i.

Writes digits.{csv,json} and errors.{csv,json} into --out and prints both
tables.  Errors are shown twice: from full-precision tails and from tails
rounded to --source-digits decimals.
"""

import argparse
from pathlib import Path

from etalab.experiments import DEFAULT_POINTS, DEFAULT_S, digit_blocks, error_decay, relative_errors
from etalab.mpcore import scientific
from etalab.report import Report


def digits_report(s, points, bits, digits) -> Report:
    rep = Report("digits", bits, ["re", "im", "agree_re", "agree_im"], parameters={"s": s})
    for b in digit_blocks(s, points, bits, digits):
        rep.add("R", b.n, re=b.r_re, im=b.r_im)
        rep.add("T", b.n, re=b.t_re, im=b.t_im, agree_re=str(b.agree_re), agree_im=str(b.agree_im))
    return rep


def errors_report(s, points, bits, source_digits) -> Report:
    cols = ["eps_r", "eps_i", "eps_r_rounded_src", "eps_i_rounded_src"]
    rep = Report("errors", bits, cols, parameters={"s": s, "source_digits": str(source_digits)})
    full = relative_errors(s, points, bits)
    src = relative_errors(s, points, bits, source_digits)
    for f, r in zip(full, src):
        rep.add(
            "eps", f.n,
            eps_r=scientific(f.eps_r, 5, nearest=True), eps_i=scientific(f.eps_i, 5, nearest=True),
            eps_r_rounded_src=scientific(r.eps_r, 5, nearest=True),
            eps_i_rounded_src=scientific(r.eps_i, 5, nearest=True),
        )
    if len(full) >= 3:
        (fr, fi), (rr, ri) = error_decay(full), error_decay(src)
        rep.add("slope", None, eps_r=f"{fr.slope:.4f}", eps_i=f"{fi.slope:.4f}",
                eps_r_rounded_src=f"{rr.slope:.4f}", eps_i_rounded_src=f"{ri.slope:.4f}")
    return rep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", default=DEFAULT_S)
    ap.add_argument("--points", type=int, nargs="+", default=list(DEFAULT_POINTS))
    ap.add_argument("--prec", type=int, default=192)
    ap.add_argument("--digits", type=int, default=28)
    ap.add_argument("--source-digits", type=int, default=28)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for name, rep in (
        ("digits", digits_report(args.s, args.points, args.prec, args.digits)),
        ("errors", errors_report(args.s, args.points, args.prec, args.source_digits)),
    ):
        (args.out / f"{name}.csv").write_text(rep.to_csv())
        (args.out / f"{name}.json").write_text(rep.to_json())
        print(rep.to_text())


if __name__ == "__main__":
    main()

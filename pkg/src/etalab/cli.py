"""Command-line entry point: ``etalab <command> [flags]``.

Commands: eval, digits, table1, probe {lemma1,f-seq,eps-scaled,uniform,exchange}
and zeros.  Every flag can also be set in a key=value file passed with
``--config``; flags given on the command line win.

Exit codes: 0 ok, 2 parse/config error, 3 domain or pole error,
4 precision insufficient, 5 no zero found.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from gmpy2 import mpc

from . import experiments
from .errors import (
    BudgetError,
    ConfigError,
    DomainError,
    EtaLabError,
    NoZeroFoundError,
    NonFiniteError,
    ParseError,
    PrecisionError,
)
from .eta import eta_full, eta_hurwitz, partial_sums, zeta_strip
from .limits import (
    Schedule,
    decay_fit,
    eps_scaled,
    exchange_report,
    f_sequence,
    find_zeros,
    lemma1_ratios,
    locate_zero,
    uniform_bound_scan,
)
from .literals import parse_complex, parse_interval, parse_n, parse_offsets, parse_real
from .mpcore import DEFAULT_BITS, Precision, agreement_bits, real, scientific, truncate_digits, working
from .report import Report

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_PRECISION, EXIT_NO_ZERO = 0, 2, 3, 4, 5

FORMATS = ("text", "csv", "json")
PROBES = ("lemma1", "f-seq", "eps-scaled", "uniform", "exchange")
DIGIT_MARGIN = 8
DEFAULT_DIGITS = 28

# command -> defaults for options that have one
COMMAND_DEFAULTS = {
    "eval": {"s": experiments.DEFAULT_S},
    "digits": {"s": experiments.DEFAULT_S, "n": "1e8,1e10,1e12,1e14"},
    "table1": {"s": experiments.DEFAULT_S, "n": "1e8,1e10,1e12,1e14"},
    "lemma1": {"s": experiments.DEFAULT_S, "n": "1e2:1e8"},
    "f-seq": {"s": experiments.DEFAULT_S, "n": "1e2:1e8"},
    "eps-scaled": {"s": experiments.DEFAULT_S, "n": "1e2:1e8"},
    "uniform": {"sigma": "0.5", "n": "1e2", "t-range": "0:100"},
    "exchange": {"sigma": "0.75", "n": "1e2:1e6", "zero-bracket": "14:15", "offsets": "0,0.001,0.01,0.1"},
    "zeros": {"range": "0:30"},
}

# every option a config file may set, with its argparse destination
OPTION_KEYS = {
    "s": "s",
    "sigma": "sigma",
    "n": "n",
    "prec": "prec",
    "digits": "digits",
    "format": "format",
    "zero-bracket": "zero_bracket",
    "offsets": "offsets",
    "out": "out",
    "t0": "t0",
    "t-range": "t_range",
    "range": "range",
    "source-digits": "source_digits",
}


def read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key=value", raw, None)
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-")
        if key not in OPTION_KEYS:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}", raw, 1)
        values[OPTION_KEYS[key]] = value
    return values


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_BITS
    s_literal: str = experiments.DEFAULT_S
    n_schedule: str = ""
    output_format: str = "text"
    digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        try:
            Precision(self.precision_bits)
        except ValueError as exc:
            raise ConfigError(f"--prec: {exc}") from None
        cap = self.max_digits(self.precision_bits)
        if not 1 <= self.digits <= cap:
            need = math.ceil((self.digits + DIGIT_MARGIN) / math.log10(2))
            raise PrecisionError(
                f"{self.digits} digits need at least {need} bits (--prec {need}); "
                f"{self.precision_bits} bits print at most {cap}"
            )

    @staticmethod
    def max_digits(bits: int) -> int:
        return math.floor(bits * math.log10(2)) - DIGIT_MARGIN

    @property
    def prec(self) -> Precision:
        return Precision(self.precision_bits)

    def s(self) -> mpc:
        re, im = parse_complex(self.s_literal)
        with working(self.precision_bits + 32):
            return mpc(real(re), real(im))

    def n_values(self) -> list[int]:
        return parse_n(self.n_schedule) if self.n_schedule else []


def _schedule(values: list[int]) -> Schedule:
    return Schedule(tuple(sorted(set(values))))


# ------------------------------------------------------------ formatting

def _fmt(x, digits: int) -> str:
    return truncate_digits(x, digits)


def _parts(z, digits: int) -> dict[str, str]:
    return {"re": _fmt(z.real, digits), "im": _fmt(z.imag, digits)}


def _sci(x) -> str:
    return "" if x is None else scientific(x, 5)


def _new_report(command: str, cfg: RunConfig, columns: list[str], **params: str) -> Report:
    rep = Report(command, cfg.precision_bits, columns)
    rep.parameters.update({k: v for k, v in params.items() if v is not None})
    rep.parameters["digits"] = str(cfg.digits)
    return rep


# -------------------------------------------------------------- commands

def cmd_eval(cfg: RunConfig, opts: dict) -> Report:
    s = cfg.s()
    rep = _new_report("eval", cfg, ["re", "im", "err_bound"], s=cfg.s_literal)
    eta = eta_full(s, cfg.prec)
    rep.add("eta", None, **_parts(eta.value, cfg.digits), err_bound=_sci(eta.err_bound))
    try:
        other = eta_hurwitz(s, cfg.prec)
    except EtaLabError as exc:
        rep.notes.append(f"second eta route unavailable: {exc}")
    else:
        bits = agreement_bits(eta.value, other.value)
        shown = "full precision" if math.isinf(bits) else f"{int(bits * math.log10(2))} digits"
        rep.notes.append(f"eta by series acceleration and by Hurwitz pair agree to {shown}")
    try:
        zeta = zeta_strip(s, cfg.prec)
    except DomainError as exc:
        rep.notes.append(f"zeta: {exc}")
    else:
        rep.add("zeta", None, **_parts(zeta.value, cfg.digits), err_bound=_sci(zeta.err_bound))
    ns = cfg.n_values()
    if ns:
        for n, res in sorted(partial_sums(s, ns, cfg.prec).items()):
            rep.add("eta_n", n, **_parts(res.value, cfg.digits), err_bound=_sci(res.err_bound))
    return rep


def cmd_digits(cfg: RunConfig, opts: dict) -> Report:
    rep = _new_report("digits", cfg, ["re", "im", "agree_re", "agree_im"], s=cfg.s_literal)
    for b in experiments.digit_blocks(cfg.s(), cfg.n_values(), cfg.prec, cfg.digits):
        rep.add("R", b.n, re=b.r_re, im=b.r_im)
        rep.add("T", b.n, re=b.t_re, im=b.t_im, agree_re=str(b.agree_re), agree_im=str(b.agree_im))
    rep.notes.append("agree_* counts leading digits after the point shared by R and T")
    return rep


def cmd_table1(cfg: RunConfig, opts: dict) -> Report:
    source = opts.get("source_digits")
    source = None if source in (None, "") else int(source)
    rep = _new_report(
        "table1", cfg, ["eps_r", "eps_i"], s=cfg.s_literal,
        source_digits=None if source is None else str(source),
    )
    rows = experiments.relative_errors(cfg.s(), cfg.n_values(), cfg.prec, source)
    for r in rows:
        rep.add("eps", r.n, eps_r=scientific(r.eps_r, 5, nearest=True), eps_i=scientific(r.eps_i, 5, nearest=True))
    if len(rows) >= 3:
        fr, fi = experiments.error_decay(rows)
        rep.add("slope", None, eps_r=f"{fr.slope:.4f}", eps_i=f"{fi.slope:.4f}")
    rep.notes.append("relative errors rounded to 5 significant digits")
    if source is not None:
        rep.notes.append(f"errors formed from R_n and T_n rounded to {source} decimals")
    return rep


def _series_rows(rep: Report, series, digits: int) -> None:
    for row in series.rows:
        vals = {"flag": row.flag or ""}
        if row.quantity is not None:
            vals.update(_parts(row.quantity, digits))
            vals["deviation"] = _sci(row.deviation)
        rep.add(series.name, row.n, **vals)
    devs = [r for r in series.rows if r.deviation is not None and r.deviation > 0]
    if len(devs) >= 3:
        rep.notes.append(f"{series.name}: log-log slope of deviation {decay_fit(series).slope:.4f}")


def cmd_probe(cfg: RunConfig, opts: dict, which: str) -> Report:
    if which in ("lemma1", "f-seq", "eps-scaled"):
        sched = _schedule(cfg.n_values())
        rep = _new_report(f"probe {which}", cfg, ["re", "im", "deviation", "flag"], s=cfg.s_literal)
        s = cfg.s()
        if which == "lemma1":
            probe = lemma1_ratios(s, sched, cfg.prec)
            _series_rows(rep, probe.prev, cfg.digits)
            _series_rows(rep, probe.next, cfg.digits)
        elif which == "f-seq":
            _series_rows(rep, f_sequence(s, sched, cfg.prec), cfg.digits)
        else:
            _series_rows(rep, eps_scaled(s, sched, cfg.prec), cfg.digits)
        return rep
    if which == "uniform":
        return _probe_uniform(cfg, opts)
    if which == "exchange":
        return _probe_exchange(cfg, opts)
    raise ConfigError(f"unknown probe {which!r}; expected one of {PROBES}")


def _probe_uniform(cfg: RunConfig, opts: dict) -> Report:
    sigma = parse_real(opts["sigma"], "sigma")
    lo, hi = parse_interval(opts["t_range"], "t range")
    if lo.denominator != 1 or hi.denominator != 1 or hi < lo:
        raise ParseError("t range: expected integers lo:hi with lo <= hi", opts["t_range"], 1)
    grid = range(int(lo), int(hi) + 1)
    rep = _new_report(
        "probe uniform", cfg, ["sup_tail", "bound", "t_at_sup", "result"],
        sigma=opts["sigma"], t_range=opts["t_range"],
    )
    for n in sorted(set(cfg.n_values())):
        with working(cfg.precision_bits + 32):
            sig = real(sigma)
        scan = uniform_bound_scan(sig, grid, n, cfg.prec)
        rep.add(
            "scan", n, sup_tail=_sci(scan.sup_tail), bound=_sci(scan.bound),
            t_at_sup=str(int(scan.t_at_sup)), result="PASS" if scan.passed else "FAIL",
        )
    return rep


def _probe_exchange(cfg: RunConfig, opts: dict) -> Report:
    sigma = parse_real(opts["sigma"], "sigma")
    prec = cfg.prec
    if opts.get("t0"):
        with working(prec.bits + 32):
            t0 = real(parse_real(opts["t0"], "t0"))
        origin = f"t0 = {opts['t0']}"
    else:
        lo, hi = parse_interval(opts["zero_bracket"], "zero bracket")
        z = locate_zero((lo, hi), prec)
        t0 = z.t0
        origin = f"t0 located in [{opts['zero_bracket']}] with |eta| = {_sci(z.residual)}"
    offsets = parse_offsets(opts["offsets"])
    with working(prec.bits + 32):
        sig = real(sigma)
    res = exchange_report(sig, t0, _schedule(cfg.n_values()), offsets, prec)
    cols = [
        "dt", "partial_re", "partial_im", "tail_re", "tail_im", "growth_re", "growth_im",
        "tail_over_growth", "lambda_re", "lambda_im", "partial_vs_lambda", "coincidence", "flag",
    ]
    rep = _new_report(
        "probe exchange", cfg, cols, sigma=opts["sigma"], t0=_fmt(t0, cfg.digits),
        offsets=opts["offsets"],
    )
    d = cfg.digits
    for r in res.rows:
        with working(prec.bits + 16):
            t_over_g = abs(r.tail_ratio) / abs(r.growth)
            p_vs_l = None if r.partial_ratio is None else abs(r.partial_ratio - r.lam) / abs(r.lam)
        vals = {
            "dt": str(r.offset) if r.offset.denominator == 1 else _decimal_str(r.offset),
            "tail_re": _fmt(r.tail_ratio.real, d), "tail_im": _fmt(r.tail_ratio.imag, d),
            "growth_re": _fmt(r.growth.real, d), "growth_im": _fmt(r.growth.imag, d),
            "tail_over_growth": _fmt(t_over_g, d),
            "lambda_re": _fmt(r.lam.real, d), "lambda_im": _fmt(r.lam.imag, d),
            "partial_vs_lambda": _sci(p_vs_l), "coincidence": _sci(r.coincidence),
            "flag": r.flag or "",
        }
        if r.partial_ratio is not None:
            vals["partial_re"] = _fmt(r.partial_ratio.real, d)
            vals["partial_im"] = _fmt(r.partial_ratio.imag, d)
        rep.add("exchange", r.n, **vals)
    rep.notes.append(origin)
    return rep


def _decimal_str(q: Fraction) -> str:
    # offsets are short terminating decimals; print them exactly
    for k in range(1, 40):
        if (q * 10**k).denominator == 1:
            return truncate_digits(q, k).lstrip("+")
    return str(q)


def cmd_zeros(cfg: RunConfig, opts: dict) -> Report:
    lo, hi = parse_interval(opts["range"], "range")
    rep = _new_report("zeros", cfg, ["t0", "residual"], range=opts["range"])
    for k, z in enumerate(find_zeros(lo, hi, cfg.prec), 1):
        rep.add(f"zero {k}", None, t0=_fmt(z.t0, cfg.digits), residual=_sci(z.residual))
    if not rep.rows:
        rep.notes.append("no critical-line zeros in range")
    return rep


# ------------------------------------------------------------------ main

def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key=value file; keys mirror the long flags")
    p.add_argument("--s", help='complex point, e.g. "0.1234+56.789i"')
    p.add_argument("--sigma", help="real part for probes on a vertical line")
    p.add_argument("--n", help="n values: 1e8, 10^8, lists a,b and ranges lo:hi (x10 steps)")
    p.add_argument("--prec", help=f"working precision in bits (default {DEFAULT_BITS})")
    p.add_argument("--digits", help="truncated decimal digits to print")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--zero-bracket", dest="zero_bracket", help="lo:hi bracket for a critical-line zero")
    p.add_argument("--t0", help="use this t0 instead of locating a zero")
    p.add_argument("--offsets", help="comma list of t offsets for the exchange probe")
    p.add_argument("--t-range", dest="t_range", help="integer t grid lo:hi for the uniform scan")
    p.add_argument("--range", help="t_lo:t_hi for the zero search (width <= 100)")
    p.add_argument("--source-digits", dest="source_digits",
                   help="form table errors from values rounded to this many decimals")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="etalab", description="Dirichlet eta tails and related probes")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="eta(s), zeta(s) and partial sums")
    sub.add_parser("digits", parents=[common], help="truncated digits of R_n and T_n")
    sub.add_parser("table1", parents=[common], help="relative errors of T_n against R_n")
    probe = sub.add_parser("probe", parents=[common], help="limit probes")
    probe.add_argument("which", choices=PROBES)
    sub.add_parser("zeros", parents=[common], help="critical-line zeros in a t range")
    return parser


def resolve(args: argparse.Namespace) -> tuple[RunConfig, dict]:
    """Merge built-in defaults, the config file and explicit flags (in that order)."""
    file_values = read_config_file(args.config) if args.config else {}
    key = args.which if args.command == "probe" else args.command
    merged = {OPTION_KEYS[k]: v for k, v in COMMAND_DEFAULTS[key].items()}
    merged.update(file_values)
    merged.update({k: v for k, v in vars(args).items() if v is not None and k in OPTION_KEYS.values()})

    bits = _int_option(merged.get("prec"), "prec", DEFAULT_BITS)
    default_digits = min(DEFAULT_DIGITS, RunConfig.max_digits(bits))
    cfg = RunConfig(
        precision_bits=bits,
        s_literal=merged.get("s", experiments.DEFAULT_S),
        n_schedule=merged.get("n", ""),
        output_format=merged.get("format", "text"),
        digits=_int_option(merged.get("digits"), "digits", default_digits),
    )
    cfg.s()  # surface literal errors before any computation
    cfg.n_values()
    return cfg, merged


def _int_option(text, name: str, default: int) -> int:
    if text is None:
        return default
    try:
        return int(str(text).strip())
    except ValueError:
        raise ParseError(f"--{name} expects an integer", str(text), 1) from None


def run(argv: list[str] | None = None) -> str:
    args = build_parser().parse_args(argv)
    cfg, opts = resolve(args)
    if args.command == "probe":
        rep = cmd_probe(cfg, opts, args.which)
    else:
        rep = {"eval": cmd_eval, "digits": cmd_digits, "table1": cmd_table1, "zeros": cmd_zeros}[
            args.command
        ](cfg, opts)
    text = rep.render(cfg.output_format)
    if opts.get("out"):
        Path(opts["out"]).write_text(text)
        return ""
    return text


def main(argv: list[str] | None = None) -> int:
    try:
        out = run(argv)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoZeroFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ZERO
    except (PrecisionError, NonFiniteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, BudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

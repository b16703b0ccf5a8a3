"""Parsers for user-facing literals: complex points, n schedules, intervals.

Errors are :class:`ParseError` with a 1-based column into the input text.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


class _Scanner:
    def __init__(self, text: str, what: str):
        self.text, self.pos, self.what = text, 0, what

    def error(self, msg: str):
        raise ParseError(f"{self.what}: {msg}", self.text, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def sign(self) -> int | None:
        c = self.peek()
        if c in "+-":
            self.pos += 1
            return -1 if c == "-" else 1
        return None

    def digits(self) -> str:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        return self.text[start:self.pos]

    def decimal(self) -> Fraction:
        """Unsigned decimal with optional fraction and exponent."""
        start = self.pos
        whole = self.digits()
        frac = ""
        if self.peek() == ".":
            self.pos += 1
            frac = self.digits()
        if not whole and not frac:
            self.pos = start
            self.error("expected a decimal number")
        if self.peek() in ("e", "E"):
            mark = self.pos
            self.pos += 1
            self.sign()
            if not self.digits():
                self.pos = mark + 1
                self.error("exponent needs digits")
        return Fraction(self.text[start:self.pos])

    def end(self):
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.peek()!r}")


def parse_complex(text: str) -> tuple[Fraction, Fraction]:
    """``<decimal>[+|-]<decimal>i`` with optional whitespace; exact parts."""
    sc = _Scanner(text, "complex literal")
    sc.skip_ws()
    sgn = sc.sign() or 1
    sc.skip_ws()
    re = sgn * sc.decimal()
    sc.skip_ws()
    if sc.peek() == "":
        return re, Fraction(0)
    if sc.peek() == "i":
        sc.error("imaginary unit needs a sign and a real part first, e.g. 0+2i")
    sgn = sc.sign()
    if sgn is None:
        sc.error("expected '+' or '-' before the imaginary part")
    sc.skip_ws()
    im = sgn * sc.decimal()
    sc.skip_ws()
    if sc.peek() != "i":
        sc.error("imaginary part must end with 'i'")
    sc.pos += 1
    sc.end()
    return re, im


def parse_real(text: str, what: str = "number") -> Fraction:
    sc = _Scanner(text, what)
    sc.skip_ws()
    sgn = sc.sign() or 1
    value = sgn * sc.decimal()
    sc.end()
    return value


def _parse_count(text: str, offset: int, full: str) -> int:
    # 1e8, 100000000 or 10^8
    item = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if "^" in item:
        base, _, exp = item.partition("^")
        if base.strip().isdigit() and exp.strip().isdigit():
            return int(base) ** int(exp)
        raise ParseError("n value: expected base^exponent with integers", full, lead + 1)
    sc = _Scanner(item, "n value")
    try:
        value = sc.decimal()
        sc.end()
    except ParseError as exc:
        raise ParseError("n value: expected an integer such as 1000 or 1e8", full, lead + (exc.column or 1)) from None
    if value.denominator != 1:
        raise ParseError("n value must be an integer", full, lead + 1)
    return int(value)


def parse_n(text: str) -> list[int]:
    """Comma list of n values; ``lo:hi`` expands to lo, 10 lo, ... <= hi."""
    out: list[int] = []
    offset = 0
    for item in text.split(","):
        if ":" in item:
            lo_txt, hi_txt = item.split(":", 1)
            lo = _parse_count(lo_txt, offset, text)
            hi = _parse_count(hi_txt, offset + len(lo_txt) + 1, text)
            if lo < 1 or hi < lo:
                raise ParseError("n range must satisfy 1 <= lo <= hi", text, offset + 1)
            n = lo
            while n <= hi:
                out.append(n)
                n *= 10
        else:
            out.append(_parse_count(item, offset, text))
        offset += len(item) + 1
    return out


def parse_interval(text: str, what: str) -> tuple[Fraction, Fraction]:
    if ":" not in text:
        raise ParseError(f"{what}: expected lo:hi", text, 1)
    lo_txt, hi_txt = text.split(":", 1)
    try:
        lo = parse_real(lo_txt, what)
    except ParseError as exc:
        raise ParseError(f"{what}: bad lower end", text, exc.column) from None
    try:
        hi = parse_real(hi_txt, what)
    except ParseError as exc:
        raise ParseError(f"{what}: bad upper end", text, len(lo_txt) + 1 + (exc.column or 1)) from None
    return lo, hi


def parse_offsets(text: str) -> list[Fraction]:
    return [parse_real(x, "offset") for x in text.split(",")]

"""Parsers and printers for structure equations and form expressions.

Two textual languages are understood:

* Salamon structure equations, ``"(0,0,0,12,13,23,0)"``: the k-th item is
  de^k and each two-digit token ``ij`` stands for e^i ^ e^j. Items may carry
  rational coefficients and parentheses, as in ``"2*(-16+25+26-34)"``.
* Form expressions, ``"e123+2e257-6/5*e^{1235}"``: signed sums of rational
  multiples of monomials ``e^{ijk}``, ``eijk``, ``e ijk`` or bare ``ijk``.

Indices are single digits 1..9. Unicode minus and middle dot are accepted
alongside ``-`` and ``*``. Errors carry the 0-based offset of the offending
character in the input string.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exterior import KForm

__all__ = [
    "ParseError",
    "SalamonSpec",
    "normalize",
    "parse_form",
    "parse_salamon",
    "render_form",
    "render_salamon",
]

_TRANSLATE = str.maketrans({
    "−": "-",  # minus sign
    "–": "-",  # en dash
    "·": "*",  # middle dot
    "⋅": "*",  # dot operator
    "×": "*",  # multiplication sign
})


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")

    def pretty(self) -> str:
        if not self.text:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.position}^"


def normalize(text: str) -> str:
    """Replace unicode operators by their ASCII equivalents (one char each)."""
    return text.translate(_TRANSLATE)


@dataclass(frozen=True)
class SalamonSpec:
    """Parsed structure equations; ``entries[k-1]`` is de^k as a 2-form."""

    entries: tuple[KForm, ...]

    @property
    def dim(self) -> int:
        return len(self.entries)


class _Parser:
    """Recursive descent over one normalized string.

    Terms accumulate into a dict {unsorted index tuple: coefficient}; sorting
    with signs happens once at the end.
    """

    def __init__(self, text: str, mode: str, max_index: int):
        self.raw = text
        self.s = normalize(text)
        self.pos = 0
        self.mode = mode  # "salamon" or "form"
        self.max_index = max_index
        self.degree: int | None = None
        self.degree_pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, self.pos if pos is None else pos, self.raw)

    def skip_ws(self) -> None:
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.s) and self.s[self.pos].isdigit():
            self.pos += 1
        return self.s[start:self.pos]

    # sum := ['-'|'+'] term (('+'|'-') term)*
    def parse_sum(self) -> dict[tuple[int, ...], Fraction]:
        acc: dict[tuple[int, ...], Fraction] = {}
        sign = 1
        ch = self.peek()
        if ch in "+-" and ch:
            sign = -1 if ch == "-" else 1
            self.pos += 1
        self._add_term(acc, sign)
        while True:
            ch = self.peek()
            if ch in ("+", "-"):
                self.pos += 1
                self._add_term(acc, -1 if ch == "-" else 1)
            else:
                return acc

    def _add_term(self, acc, sign: int) -> None:
        for key, c in self.parse_term().items():
            acc[key] = acc.get(key, Fraction(0)) + sign * c

    # term := [coeff ['*']] factor
    def parse_term(self) -> dict[tuple[int, ...], Fraction]:
        ch = self.peek()
        coeff = Fraction(1)
        if ch.isdigit():
            start = self.pos
            run = self.digits()
            nxt = self.peek()
            if nxt in ("/", "*", "(") or (self.mode == "form" and nxt == "e"):
                coeff = Fraction(int(run))
                if nxt == "/":
                    self.pos += 1
                    self.skip_ws()
                    den_pos = self.pos
                    den = self.digits()
                    if not den:
                        raise self.error("expected denominator")
                    if int(den) == 0:
                        raise self.error("zero denominator", den_pos)
                    coeff /= int(den)
                    nxt = self.peek()
                if nxt == "*":
                    self.pos += 1
            else:
                self.pos = start
                return {self.parse_monomial_digits(): Fraction(1)}
        return {k: coeff * v for k, v in self.parse_factor().items()}

    # factor := '(' sum ')' | monomial
    def parse_factor(self) -> dict[tuple[int, ...], Fraction]:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_sum()
            self.expect(")")
            return inner
        if self.mode == "form" and ch == "e":
            self.pos += 1
            self.skip_ws()
            if self.peek() == "^":
                self.pos += 1
            braced = self.peek() == "{"
            if braced:
                self.pos += 1
            key = self.parse_monomial_digits()
            if braced:
                self.expect("}")
            return {key: Fraction(1)}
        if ch.isdigit():
            return {self.parse_monomial_digits(): Fraction(1)}
        found = ch or "end of input"
        raise self.error(f"expected a monomial or '(', found {found!r}")

    def parse_monomial_digits(self) -> tuple[int, ...]:
        self.skip_ws()
        start = self.pos
        run = self.digits()
        if not run:
            found = self.peek() or "end of input"
            raise self.error(f"expected index digits, found {found!r}")
        if self.mode == "salamon" and len(run) != 2:
            raise self.error(f"expected a two-digit index pair, found {run!r}", start)
        for off, d in enumerate(run):
            if d == "0":
                raise self.error("index 0 is not allowed", start + off)
            if int(d) > self.max_index:
                raise self.error(f"index {d} exceeds dimension {self.max_index}", start + off)
        if self.degree is None:
            self.degree, self.degree_pos = len(run), start
        elif len(run) != self.degree:
            raise self.error(f"mixed degrees: monomial {run!r} has degree {len(run)}, "
                             f"expected {self.degree}", start)
        return tuple(int(d) for d in run)


def _to_kform(acc, ambient_dim: int, degree: int) -> KForm:
    return KForm.from_unsorted(ambient_dim, degree, acc.items())


def _split_items(text: str) -> tuple[list[tuple[int, int]], int]:
    """Locate top-level comma-separated items inside the outer parentheses."""
    s = normalize(text)
    i = 0
    while i < len(s) and s[i].isspace():
        i += 1
    if i >= len(s) or s[i] != "(":
        raise ParseError("expected '('", i, text)
    depth = 0
    spans = []
    start = i + 1
    for j in range(i, len(s)):
        ch = s[j]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                spans.append((start, j))
                tail = s[j + 1:]
                if tail.strip():
                    raise ParseError("unexpected text after ')'", j + 1 + (len(tail) - len(tail.lstrip())), text)
                return spans, j
            if depth < 0:
                raise ParseError("unbalanced ')'", j, text)
        elif ch == "," and depth == 1:
            spans.append((start, j))
            start = j + 1
    raise ParseError("expected ')'", len(s), text)


def parse_salamon(text: str) -> SalamonSpec:
    """Parse Salamon notation into one 2-form per generator."""
    spans, _ = _split_items(text)
    n = len(spans)
    if n > 9:
        raise ParseError("at most 9 generators are supported", 0, text)
    entries = []
    for start, end in spans:
        item = normalize(text)[start:end]
        if not item.strip():
            raise ParseError("empty item", start, text)
        if item.strip() == "0":
            entries.append(KForm(n, 2))
            continue
        p = _Parser(text, "salamon", n)
        p.s = normalize(text)[:end]
        p.pos = start
        acc = p.parse_sum()
        p.skip_ws()
        if p.pos != end:
            raise p.error(f"unexpected {p.s[p.pos]!r}" if p.pos < end else "unexpected end of item")
        entries.append(_to_kform(acc, n, 2))
    return SalamonSpec(tuple(entries))


def parse_form(text: str, ambient_dim: int, degree: int | None = None) -> KForm:
    """Parse a rational form expression.

    ``degree`` is required only to type the literal ``"0"``; when given it
    is also enforced on every monomial.
    """
    p = _Parser(text, "form", ambient_dim)
    if p.peek() == "0" and normalize(text).strip() == "0":
        if degree is None:
            raise ParseError("the zero form needs an explicit degree", 0, text)
        return KForm(ambient_dim, degree)
    if not p.peek():
        raise p.error("empty form expression")
    acc = p.parse_sum()
    if p.peek():
        raise p.error(f"unexpected {p.peek()!r}")
    if degree is not None and p.degree != degree:
        raise ParseError(f"expected a {degree}-form, found degree {p.degree}", p.degree_pos, text)
    return _to_kform(acc, ambient_dim, p.degree)


def _render_coeff(c: Fraction, first: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    if a == 1:
        return sign
    return f"{sign}{a}*"


def render_form(f: KForm) -> str:
    """Canonical text: lexicographic monomials, explicit rational coefficients."""
    if not f:
        return "0"
    parts = []
    for i, (key, c) in enumerate(f.items()):
        mono = "e" + "".join(str(k) for k in key) if key else "1"
        coeff = _render_coeff(c, i == 0)
        if not key:
            parts.append(f"{'-' if c < 0 else ('' if i == 0 else '+')}{abs(c)}")
        else:
            parts.append(coeff + mono)
    return "".join(parts)


def render_salamon(spec: SalamonSpec) -> str:
    items = []
    for de in spec.entries:
        if not de:
            items.append("0")
            continue
        terms = []
        for i, (key, c) in enumerate(de.items()):
            coeff = _render_coeff(c, i == 0)
            terms.append(coeff + f"{key[0]}{key[1]}")
        items.append("".join(terms))
    return "(" + ",".join(items) + ")"

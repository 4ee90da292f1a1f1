# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import re
from fractions import Fraction
from thetaplane.coefficient_ring import (
    G_I,
    ExactScalar,
    GaussianRational,
    NumericScalar,
    PhaseWord,
    Scalar,
    phase_pairs,
)
from thetaplane.errors import ElementSyntaxError, IndexRangeError
from thetaplane.theta_algebra import AlgebraSignature, Element, MultiIndex, generator, linear, mul, star

# Element grammar, whitespace insignificant, no implicit multiplication:
#   expr  := prod (("+" | "-") prod)*
#   prod  := unary ("*" unary)*
#   unary := "-" unary | pow
#   pow   := atom ("^" ["-"] uint)?          negative exponents only on L[k,l]
#   atom  := "z" uint | "zb" uint | "x" | "i" | number | "L[" uint "," uint "]"
#          | "(" expr ")" | "star(" expr ")"
#   number:= uint ("/" uint)? | decimal
_TOKEN = re.compile(
    r"(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)"
    r"|(?P<star>star\()"
    r"|(?P<lam>L\[)"
    r"|(?P<gen>zb|z)(?P<gidx>\d*)"
    r"|(?P<x>x)"
    r"|(?P<i>i)"
    r"|(?P<op>[-+*/^(),\]])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if not match:
            raise ElementSyntaxError(f"unexpected character '{text[pos]}'", position=pos)
        kind = match.lastgroup
        if kind == "gidx":
            kind = "gen"
        tokens.append((kind, match.group(0), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:

    def __init__(self, text: str, sig: AlgebraSignature) -> None:
        self._sig = sig
        self._tokens = _tokenize(text)
        self._i = 0


    def parse(self) -> Element:
        value = self._expr()
        kind, text, pos = self._peek()
        if kind != "end":
            raise ElementSyntaxError(f"unexpected '{text}'", position=pos)

        return value


    def _peek(self) -> tuple[str, str, int]:
        return self._tokens[self._i]


    def _next(self) -> tuple[str, str, int]:
        tok = self._tokens[self._i]
        self._i += 1
        return tok


    def _accept(self, op: str) -> bool:
        kind, text, _ = self._peek()
        if kind == "op" and text == op:
            self._i += 1
            return True

        return False


    def _expect(self, op: str) -> None:
        kind, text, pos = self._peek()
        if not (kind == "op" and text == op):
            found = text or "end of input"
            raise ElementSyntaxError(f"expected '{op}', found '{found}'", position=pos)
        self._i += 1


    def _uint(self) -> tuple[int, int]:
        kind, text, pos = self._next()
        if kind != "num" or not text.isdigit():
            raise ElementSyntaxError(f"expected an unsigned integer, found '{text or 'end of input'}'", position=pos)

        return int(text), pos


    def _expr(self) -> Element:
        value = self._prod()
        while True:
            if self._accept("+"):
                value = linear("add", value, self._prod())
            elif self._accept("-"):
                value = linear("sub", value, self._prod())
            else:
                return value


    def _prod(self) -> Element:
        value = self._unary()
        while self._accept("*"):
            value = mul(value, self._unary())
        return value


    def _unary(self) -> Element:
        if self._accept("-"):
            return linear("scale", self._unary(), -1)

        return self._pow()


    def _pow(self) -> Element:
        start = self._peek()[2]
        value, phase_pair = self._atom()
        if not self._accept("^"):
            return value
        negative = self._accept("-")
        exponent, pos = self._uint()
        if phase_pair is not None:
            word = PhaseWord.from_exponents(self._sig.n, {phase_pair: -exponent if negative else exponent})
            return Element.constant(self._sig, ExactScalar.phase(word))
        if negative:
            raise ElementSyntaxError("negative exponents are only allowed on L[k,l]", position=start)

        return _power(value, exponent)


    # Returns the element and, for a bare L[k,l] atom, its pair
    def _atom(self) -> tuple[Element, tuple[int, int] | None]:
        sig = self._sig
        kind, text, pos = self._next()
        if kind == "num":
            return Element.constant(sig, self._number(text, pos)), None
        if kind == "gen":
            name = "zb" if text.startswith("zb") else "z"
            digits = text[len(name):]
            if not digits:
                raise ElementSyntaxError(f"generator '{name}' needs an index", position=pos)
            k = int(digits)
            if not 1 <= k <= sig.n:
                raise IndexRangeError(f"generator index {k} out of range 1..{sig.n}", position=pos)
            return generator(sig, name, k), None
        if kind == "x":
            if not sig.has_x:
                raise ElementSyntaxError(f"x requires odd m, got m={sig.m}", position=pos)
            return generator(sig, "x"), None
        if kind == "i":
            return Element.constant(sig, G_I if sig.is_exact else 1j), None
        if kind == "lam":
            return self._phase_atom(pos)
        if kind == "star":
            inner = self._expr()
            self._expect(")")
            return star(inner), None
        if kind == "op" and text == "(":
            inner = self._expr()
            self._expect(")")
            return inner, None

        raise ElementSyntaxError(f"unexpected '{text or 'end of input'}'", position=pos)


    def _phase_atom(self, pos: int) -> tuple[Element, tuple[int, int]]:
        sig = self._sig
        if not sig.is_exact:
            raise ElementSyntaxError("L[k,l] is only allowed in exact mode", position=pos)
        k, _ = self._uint()
        self._expect(",")
        l, _ = self._uint()
        self._expect("]")
        if not 1 <= l < k <= sig.n:
            raise IndexRangeError(f"phase L[{k},{l}] needs 1 <= l < k <= {sig.n}", position=pos)
        word = PhaseWord.from_exponents(sig.n, {(k, l): 1})

        return Element.constant(sig, ExactScalar.phase(word)), (k, l)


    def _number(self, text: str, pos: int) -> Fraction | float:
        if text.isdigit():
            value = Fraction(int(text))
            kind, nxt, _ = self._peek()
            if kind == "op" and nxt == "/":
                self._i += 1
                denominator, den_pos = self._uint()
                if denominator == 0:
                    raise ElementSyntaxError("zero denominator", position=den_pos)
                value /= denominator
            return value if self._sig.is_exact else float(value)
        if self._sig.is_exact:
            return Fraction(text)

        return float(text)


def _power(value: Element, exponent: int) -> Element:
    result = Element.one(value.sig)
    base = value
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


def parse_element(text: str, sig: AlgebraSignature) -> Element:
    return _Parser(text, sig).parse()


# --- Printing ---

def _gauss_negative(g: GaussianRational) -> bool:
    return g.re < 0 or (g.re == 0 and g.im < 0)


def _format_gauss(g: GaussianRational) -> str:
    if g.im == 0:
        return str(g.re)
    im = "i" if abs(g.im) == 1 else f"{abs(g.im)}*i"
    if g.re == 0:
        return im if g.im > 0 else f"-{im}"
    sign = "+" if g.im > 0 else "-"

    return f"({g.re} {sign} {im})"


def _format_word(word: PhaseWord) -> str:
    atoms = []
    for (k, l), e in zip(phase_pairs(word.n), word.exps, strict=True):
        if e == 1:
            atoms.append(f"L[{k},{l}]")
        elif e:
            atoms.append(f"L[{k},{l}]^{e}")
    return "*".join(atoms)


def _format_phase_term(word: PhaseWord, g: GaussianRational) -> str:
    parts = []
    if g != GaussianRational(1) or word.is_identity():
        parts.append(_format_gauss(g))
    if not word.is_identity():
        parts.append(_format_word(word))
    return "*".join(parts)


def _join_signed(pieces: list[tuple[bool, str]]) -> str:
    out = []
    for pos, (negative, text) in enumerate(pieces):
        if pos == 0:
            out.append(f"-{text}" if negative else text)
        else:
            out.append(f" - {text}" if negative else f" + {text}")
    return "".join(out)


# (negative, text) with text the magnitude; text is "" for a unit coefficient
def _format_exact(c: ExactScalar) -> tuple[bool, str]:
    if len(c.terms) == 1:
        word, g = c.terms[0]
        negative = _gauss_negative(g)
        if negative:
            g = -g
        if word.is_identity() and g == GaussianRational(1):
            return negative, ""
        return negative, _format_phase_term(word, g)
    pieces = []
    for word, g in c.terms:
        negative = _gauss_negative(g)
        pieces.append((negative, _format_phase_term(word, -g if negative else g)))

    return False, f"({_join_signed(pieces)})"


def _format_numeric(c: NumericScalar) -> tuple[bool, str]:
    v = c.value
    negative = v.real < 0 or (v.real == 0 and v.imag < 0)
    if negative:
        v = -v
    if v == 1:
        return negative, ""
    if v.imag == 0:
        return negative, repr(v.real)
    if v.real == 0:
        return negative, f"{v.imag!r}*i"
    sign = "+" if v.imag > 0 else "-"

    return negative, f"({v.real!r} {sign} {abs(v.imag)!r}*i)"


def format_coefficient(c: Scalar) -> tuple[bool, str]:
    if isinstance(c, ExactScalar):
        return _format_exact(c)

    return _format_numeric(c)


def format_monomial(idx: MultiIndex) -> str:
    atoms = []
    for prefix, exps in (("z", idx.p), ("zb", idx.q)):
        for k, e in enumerate(exps, start=1):
            if e == 1:
                atoms.append(f"{prefix}{k}")
            elif e:
                atoms.append(f"{prefix}{k}^{e}")
    if idx.t == 1:
        atoms.append("x")
    elif idx.t:
        atoms.append(f"x^{idx.t}")
    return "*".join(atoms)


def format_element(a: Element) -> str:
    if not a.terms:
        return "0"
    pieces = []
    for idx, c in a.terms:
        negative, coeff = format_coefficient(c)
        mono = format_monomial(idx)
        if coeff and mono:
            text = f"{coeff} * {mono}"
        else:
            text = coeff or mono or "1"
        pieces.append((negative, text))

    return _join_signed(pieces)


# --- Element files: `name = expr` per line ---

_ASSIGN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$")


def parse_element_file(text: str, sig: AlgebraSignature) -> dict[str, Element]:
    elements: dict[str, Element] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _ASSIGN.match(line)
        if not match:
            raise ElementSyntaxError("expected 'name = expr'", line=line_no)
        name, expr = match.group(1), match.group(2)
        if name in elements:
            raise ElementSyntaxError(f"duplicate element name '{name}'", line=line_no)
        try:
            elements[name] = parse_element(expr, sig)
        except ElementSyntaxError as exc:
            raise exc.at_line(line_no) from exc
    return elements


def format_element_file(elements: dict[str, Element]) -> str:
    return "".join(f"{name} = {format_element(a)}\n" for name, a in elements.items())


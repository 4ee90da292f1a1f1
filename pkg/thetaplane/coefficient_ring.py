# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import cmath
import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Self
from thetaplane.errors import ElementSyntaxError, SignatureMismatchError


# Ordered pairs (k, l) with 1 <= l < k <= n, in the layout used by PhaseWord.
# Index of (k, l) is (k-1)(k-2)/2 + (l-1).
@lru_cache(maxsize=None)
def phase_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((k, l) for k in range(2, n + 1) for l in range(1, k))


def pair_index(k: int, l: int) -> int:
    return (k - 1) * (k - 2) // 2 + (l - 1)


def _check_pair(n: int, k: int, l: int) -> None:
    if not 1 <= l < k <= n:
        raise ValueError(f"phase pair must satisfy 1 <= l < k <= {n}, got ({k},{l})")


def _check_same_n(a_n: int, b_n: int) -> None:
    if a_n != b_n:
        raise SignatureMismatchError(f"operands have different n: {a_n} vs {b_n}")


# --- Θ ---

@dataclass(frozen=True, slots=True)
class ThetaAngle:
    pi_multiple: Fraction | None = Fraction(0)
    decimal: float | None = None

    def __post_init__(self) -> None:
        if (self.pi_multiple is None) == (self.decimal is None):
            raise ValueError("angle needs exactly one of pi_multiple or decimal")
        if self.decimal is not None:
            if not math.isfinite(self.decimal):
                raise ValueError(f"angle must be finite, got {self.decimal}")
            if self.decimal == 0.0:
                object.__setattr__(self, "pi_multiple", Fraction(0))
                object.__setattr__(self, "decimal", None)
        else:
            object.__setattr__(self, "pi_multiple", Fraction(self.pi_multiple))


    @classmethod
    def of(cls, value: "int | Fraction | float | ThetaAngle") -> Self:
        if isinstance(value, ThetaAngle):
            return value
        if isinstance(value, float):
            return cls(pi_multiple=None, decimal=value)

        return cls(pi_multiple=Fraction(value))


    @property
    def radians(self) -> float:
        if self.pi_multiple is not None:
            return float(self.pi_multiple) * math.pi

        return self.decimal


    def is_zero(self) -> bool:
        return self.pi_multiple == 0


@dataclass(frozen=True, slots=True)
class ThetaMatrix:
    n: int
    angles: tuple[ThetaAngle, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        expected = len(phase_pairs(self.n))
        if not self.angles:
            object.__setattr__(self, "angles", (ThetaAngle(),) * expected)
        elif len(self.angles) != expected:
            raise ValueError(f"expected {expected} angles for n={self.n}, got {len(self.angles)}")


    @classmethod
    def zero(cls, n: int) -> Self:
        return cls(n)


    # Build from {(k, l): angle} with k > l; values are π-multiples (int/Fraction) or radians (float)
    @classmethod
    def from_angles(cls, n: int, angles: Mapping[tuple[int, int], "int | Fraction | float"]) -> Self:
        dense = [ThetaAngle()] * len(phase_pairs(n))
        for (k, l), value in angles.items():
            _check_pair(n, k, l)
            dense[pair_index(k, l)] = ThetaAngle.of(value)

        return cls(n, tuple(dense))


    def angle(self, k: int, l: int) -> ThetaAngle:
        _check_pair(self.n, k, l)
        return self.angles[pair_index(k, l)]


    # θ_{k,l} in radians, extended skew-symmetrically
    def theta(self, k: int, l: int) -> float:
        if k == l:
            return 0.0
        if k > l:
            return self.angle(k, l).radians

        return -self.angle(l, k).radians


    def lam(self, k: int, l: int) -> complex:
        return cmath.exp(1j * self.theta(k, l))


    # e^{i Σ e_{k,l} θ_{k,l}}; π-multiples are summed exactly and reduced mod 2 first
    def phase_value(self, exponents: Iterable[int]) -> complex:
        exact = Fraction(0)
        approx = 0.0
        for e, ang in zip(exponents, self.angles, strict=True):
            if not e:
                continue
            if ang.pi_multiple is not None:
                exact += e * ang.pi_multiple
            else:
                approx += e * ang.decimal
        exact -= 2 * math.floor(exact / 2)
        if exact == 0:
            base = 1 + 0j
        elif exact == 1:
            base = -1 + 0j
        elif exact == Fraction(1, 2):
            base = 1j
        elif exact == Fraction(3, 2):
            base = -1j
        else:
            base = cmath.exp(1j * math.pi * float(exact))
        if approx:
            return base * cmath.exp(1j * approx)

        return base


_N_LINE = re.compile(r"^n\s+(\d+)$")
_THETA_LINE = re.compile(r"^theta\s+(-?\d+)\s+(-?\d+)\s+(\S+)$")
_PI_VALUE = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?\*?pi$")


def _parse_angle(token: str, line_no: int) -> ThetaAngle:
    pi_match = _PI_VALUE.match(token)
    if pi_match:
        sign = -1 if pi_match.group(1) == "-" else 1
        rat = pi_match.group(2)
        if rat is None:
            return ThetaAngle(pi_multiple=Fraction(sign))
        try:
            return ThetaAngle(pi_multiple=sign * Fraction(rat))
        except ZeroDivisionError as exc:
            raise ElementSyntaxError(f"zero denominator in angle '{token}'", line=line_no) from exc
    try:
        value = float(token)
    except ValueError as exc:
        raise ElementSyntaxError(f"invalid angle '{token}'", line=line_no) from exc
    if not math.isfinite(value):
        raise ElementSyntaxError(f"angle must be finite, got '{token}'", line=line_no)

    return ThetaAngle.of(value)


# Read the line-based Θ config format
def parse_theta(text: str) -> ThetaMatrix:
    n: int | None = None
    entries: dict[tuple[int, int], ThetaAngle] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            head = _N_LINE.match(line)
            if not head:
                raise ElementSyntaxError("expected 'n <int>' as the first line", line=line_no)
            n = int(head.group(1))
            if n < 1:
                raise ElementSyntaxError(f"n must be >= 1, got {n}", line=line_no)
            continue
        match = _THETA_LINE.match(line)
        if not match:
            raise ElementSyntaxError(f"malformed theta line '{line}'", line=line_no)
        k, l = int(match.group(1)), int(match.group(2))
        if not 1 <= l < k <= n:
            raise ElementSyntaxError(f"theta pair must satisfy 1 <= l < k <= {n}, got ({k},{l})", line=line_no)
        if (k, l) in entries:
            raise ElementSyntaxError(f"duplicate theta pair ({k},{l})", line=line_no)
        entries[(k, l)] = _parse_angle(match.group(3), line_no)
    if n is None:
        raise ElementSyntaxError("missing 'n <int>' line")

    return ThetaMatrix.from_angles(n, entries)


def format_theta(th: ThetaMatrix) -> str:
    lines = [f"n {th.n}"]
    for (k, l), ang in zip(phase_pairs(th.n), th.angles, strict=True):
        if ang.is_zero():
            continue
        if ang.pi_multiple is not None:
            lines.append(f"theta {k} {l} {ang.pi_multiple}pi")
        else:
            lines.append(f"theta {k} {l} {ang.decimal!r}")

    return "\n".join(lines) + "\n"


# --- Phase words ---

@dataclass(frozen=True, slots=True)
class PhaseWord:
    n: int
    exps: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        expected = len(phase_pairs(self.n))
        if not self.exps:
            object.__setattr__(self, "exps", (0,) * expected)
        elif len(self.exps) != expected:
            raise ValueError(f"expected {expected} exponents for n={self.n}, got {len(self.exps)}")


    @classmethod
    def identity(cls, n: int) -> Self:
        return cls(n)


    @classmethod
    def from_exponents(cls, n: int, exponents: Mapping[tuple[int, int], int]) -> Self:
        dense = [0] * len(phase_pairs(n))
        for (k, l), e in exponents.items():
            _check_pair(n, k, l)
            dense[pair_index(k, l)] += e

        return cls(n, tuple(dense))


    # Canonical sparse view: no zero exponents
    @property
    def exponents(self) -> dict[tuple[int, int], int]:
        return {pair: e for pair, e in zip(phase_pairs(self.n), self.exps, strict=True) if e}


    @property
    def sort_key(self) -> tuple[tuple[tuple[int, int], int], ...]:
        return tuple(sorted(self.exponents.items()))


    def is_identity(self) -> bool:
        return not any(self.exps)


    def inverse(self) -> "PhaseWord":
        return PhaseWord(self.n, tuple(-e for e in self.exps))


    def __mul__(self, other: "PhaseWord") -> "PhaseWord":
        return phase_mul(self, other)


def phase_mul(a: PhaseWord, b: PhaseWord) -> PhaseWord:
    _check_same_n(a.n, b.n)
    return PhaseWord(a.n, tuple(x + y for x, y in zip(a.exps, b.exps, strict=True)))


# --- Gaussian rationals ---

@dataclass(frozen=True, slots=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))


    @classmethod
    def of(cls, value: "int | Fraction | GaussianRational") -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value

        return cls(Fraction(value))


    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


    def __bool__(self) -> bool:
        return not self.is_zero()


    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)


    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)


    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )


    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")

        return self * other.conjugate() * GaussianRational(1 / norm)


    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)


    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)


    # |c|^2
    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im


    def l1(self) -> Fraction:
        return abs(self.re) + abs(self.im)


    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


G_ZERO = GaussianRational()
G_ONE = GaussianRational(Fraction(1))
G_I = GaussianRational(Fraction(0), Fraction(1))


# c with |c|^2 = rho, if rho is a sum of two rational squares; bounded search
def gaussian_with_norm(rho: Fraction, max_search: int = 10**12) -> GaussianRational | None:
    rho = Fraction(rho)
    if rho < 0:
        return None
    if rho == 0:
        return G_ZERO
    target = rho.numerator * rho.denominator
    if target > max_search:
        return None
    for x in range(math.isqrt(target), -1, -1):
        rest = target - x * x
        y = math.isqrt(rest)
        if y * y == rest:
            return GaussianRational(Fraction(x, rho.denominator), Fraction(y, rho.denominator))

    return None


# --- Scalars ---

@dataclass(frozen=True, slots=True)
class ExactScalar:
    n: int
    terms: tuple[tuple[PhaseWord, GaussianRational], ...] = ()

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[PhaseWord, GaussianRational]]) -> "ExactScalar":
        acc: dict[tuple[int, ...], GaussianRational] = {}
        for word, coeff in terms:
            _check_same_n(n, word.n)
            prev = acc.get(word.exps)
            acc[word.exps] = coeff if prev is None else prev + coeff
        return cls._from_dense(n, acc)


    @classmethod
    def _from_dense(cls, n: int, acc: Mapping[tuple[int, ...], GaussianRational]) -> "ExactScalar":
        items = [(PhaseWord(n, exps), c) for exps, c in acc.items() if not c.is_zero()]
        items.sort(key=lambda item: item[0].sort_key)
        return cls(n, tuple(items))


    @classmethod
    def zero(cls, n: int) -> "ExactScalar":
        return cls(n)


    @classmethod
    def constant(cls, n: int, value: "int | Fraction | GaussianRational") -> "ExactScalar":
        coeff = GaussianRational.of(value)
        if coeff.is_zero():
            return cls(n)

        return cls(n, ((PhaseWord(n), coeff),))


    @classmethod
    def phase(cls, word: PhaseWord, coeff: "GaussianRational | int" = 1) -> "ExactScalar":
        return cls.from_terms(word.n, [(word, GaussianRational.of(coeff))])


    # Sum of many scalars in one pass
    @classmethod
    def sum(cls, n: int, scalars: Iterable["ExactScalar"]) -> "ExactScalar":
        acc: dict[tuple[int, ...], GaussianRational] = {}
        for s in scalars:
            _check_same_n(n, s.n)
            for word, coeff in s.terms:
                prev = acc.get(word.exps)
                acc[word.exps] = coeff if prev is None else prev + coeff
        return cls._from_dense(n, acc)


    def is_zero(self) -> bool:
        return not self.terms


    def __bool__(self) -> bool:
        return bool(self.terms)


    # Gaussian value when the scalar carries no phase, else None
    def constant_value(self) -> GaussianRational | None:
        if not self.terms:
            return G_ZERO
        if len(self.terms) == 1 and self.terms[0][0].is_identity():
            return self.terms[0][1]

        return None


    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        _check_same_n(self.n, other.n)
        if not other.terms:
            return self
        if not self.terms:
            return other

        return ExactScalar.sum(self.n, (self, other))


    def __neg__(self) -> "ExactScalar":
        return ExactScalar(self.n, tuple((w, -c) for w, c in self.terms))


    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return self + (-other)


    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        _check_same_n(self.n, other.n)
        if not self.terms or not other.terms:
            return ExactScalar(self.n)
        acc: dict[tuple[int, ...], GaussianRational] = {}
        for wa, ca in self.terms:
            for wb, cb in other.terms:
                exps = tuple(x + y for x, y in zip(wa.exps, wb.exps, strict=True))
                prod = ca * cb
                prev = acc.get(exps)
                acc[exps] = prod if prev is None else prev + prod
        return ExactScalar._from_dense(self.n, acc)


    def scale(self, coeff: GaussianRational) -> "ExactScalar":
        if coeff.is_zero():
            return ExactScalar(self.n)

        return ExactScalar(self.n, tuple((w, c * coeff) for w, c in self.terms))


    # Multiply by the phase word; term order is preserved only up to re-sorting
    def shifted(self, word: PhaseWord) -> "ExactScalar":
        if word.is_identity():
            return self
        _check_same_n(self.n, word.n)
        return ExactScalar._from_dense(
            self.n,
            {tuple(x + y for x, y in zip(w.exps, word.exps, strict=True)): c for w, c in self.terms},
        )


    def conjugate(self) -> "ExactScalar":
        return ExactScalar._from_dense(self.n, {w.inverse().exps: c.conjugate() for w, c in self.terms})


    # l1 size of the coefficient vector; zero iff the scalar is zero
    def magnitude(self) -> Fraction:
        return sum((c.l1() for _, c in self.terms), Fraction(0))


@dataclass(frozen=True, slots=True)
class NumericScalar:
    value: complex = 0j

    def __post_init__(self) -> None:
        value = complex(self.value)
        if not cmath.isfinite(value):
            raise ValueError(f"numeric scalar must be finite, got {value}")
        object.__setattr__(self, "value", value)


    def is_zero(self) -> bool:
        return self.value == 0


    def __bool__(self) -> bool:
        return self.value != 0


    def __add__(self, other: "NumericScalar") -> "NumericScalar":
        return NumericScalar(self.value + other.value)


    def __neg__(self) -> "NumericScalar":
        return NumericScalar(-self.value)


    def __sub__(self, other: "NumericScalar") -> "NumericScalar":
        return NumericScalar(self.value - other.value)


    def __mul__(self, other: "NumericScalar") -> "NumericScalar":
        return NumericScalar(self.value * other.value)


    def conjugate(self) -> "NumericScalar":
        return NumericScalar(self.value.conjugate())


    def magnitude(self) -> float:
        return abs(self.value)


Scalar = ExactScalar | NumericScalar


_SCALAR_OPS = ("add", "mul", "conj", "negate")


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    if op not in _SCALAR_OPS:
        raise ValueError(f"op must be one of {_SCALAR_OPS}, got '{op}'")
    if op == "conj":
        return a.conjugate()
    if op == "negate":
        return -a
    if b is None:
        raise ValueError(f"'{op}' needs two operands")
    if type(a) is not type(b):
        raise SignatureMismatchError("cannot mix exact and numeric scalars")
    if op == "add":
        return a + b

    return a * b


def eval_scalar(s: ExactScalar, th: ThetaMatrix) -> NumericScalar:
    _check_same_n(s.n, th.n)
    total = 0j
    for word, coeff in s.terms:
        total += coeff.to_complex() * th.phase_value(word.exps)

    return NumericScalar(total)


# --- Rings: one per algebra signature, so elements never branch on mode ---

class ExactRing:

    def __init__(self, n: int) -> None:
        self.n = n
        self._zero = ExactScalar.zero(n)
        self._one = ExactScalar.constant(n, 1)


    @property
    def zero(self) -> ExactScalar:
        return self._zero


    @property
    def one(self) -> ExactScalar:
        return self._one


    def coerce(self, value: "int | Fraction | GaussianRational | ExactScalar") -> ExactScalar:
        if isinstance(value, ExactScalar):
            _check_same_n(self.n, value.n)
            return value
        if isinstance(value, NumericScalar | complex | float):
            raise TypeError("exact ring does not accept floating-point values")

        return ExactScalar.constant(self.n, value)


    # a * b * λ^word, the unit of work in every product
    def product(self, a: ExactScalar, b: ExactScalar, word: PhaseWord) -> ExactScalar:
        return (a * b).shifted(word)


    def sum(self, scalars: Iterable[ExactScalar]) -> ExactScalar:
        return ExactScalar.sum(self.n, scalars)


    def negligible(self, s: ExactScalar, tol: float = 0.0) -> bool:
        return s.is_zero()


class NumericRing:

    def __init__(self, theta: ThetaMatrix) -> None:
        self.n = theta.n
        self.theta = theta
        self._zero = NumericScalar(0j)
        self._one = NumericScalar(1 + 0j)


    @property
    def zero(self) -> NumericScalar:
        return self._zero


    @property
    def one(self) -> NumericScalar:
        return self._one


    def coerce(self, value: "int | float | complex | Fraction | GaussianRational | Scalar") -> NumericScalar:
        if isinstance(value, NumericScalar):
            return value
        if isinstance(value, ExactScalar):
            return eval_scalar(value, self.theta)
        if isinstance(value, GaussianRational):
            return NumericScalar(value.to_complex())

        return NumericScalar(complex(value))


    def product(self, a: NumericScalar, b: NumericScalar, word: PhaseWord) -> NumericScalar:
        if word.is_identity():
            return NumericScalar(a.value * b.value)

        return NumericScalar(a.value * b.value * self.theta.phase_value(word.exps))


    def sum(self, scalars: Iterable[NumericScalar]) -> NumericScalar:
        return NumericScalar(sum((s.value for s in scalars), 0j))


    def negligible(self, s: NumericScalar, tol: float = 0.0) -> bool:
        return abs(s.value) <= tol


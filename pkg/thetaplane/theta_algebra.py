# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Self
from thetaplane.coefficient_ring import (
    ExactRing,
    GaussianRational,
    NumericRing,
    NumericScalar,
    PhaseWord,
    Scalar,
    ThetaMatrix,
    eval_scalar,
    pair_index,
    phase_pairs,
)
from thetaplane.errors import SignatureMismatchError

DEFAULT_TOL = 1e-9


class Mode(StrEnum):
    EXACT = "exact"
    NUMERIC = "numeric"


@dataclass(frozen=True, slots=True)
class AlgebraSignature:
    n: int
    m: int
    mode: Mode = Mode.EXACT
    theta: ThetaMatrix | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.m not in (2 * self.n, 2 * self.n + 1):
            raise ValueError(f"m must be {2 * self.n} or {2 * self.n + 1} for n={self.n}, got {self.m}")
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is Mode.EXACT:
            # Θ only enters at evaluation time
            object.__setattr__(self, "theta", None)
        elif self.theta is None:
            raise ValueError("numeric mode requires a theta matrix")
        elif self.theta.n != self.n:
            raise ValueError(f"theta has n={self.theta.n}, signature has n={self.n}")


    @classmethod
    def from_m(cls, m: int, mode: Mode | str = Mode.EXACT, theta: ThetaMatrix | None = None) -> Self:
        return cls(m // 2, m, Mode(mode), theta)


    @property
    def has_x(self) -> bool:
        return self.m == 2 * self.n + 1


    @property
    def is_exact(self) -> bool:
        return self.mode is Mode.EXACT


    @property
    def ring(self) -> ExactRing | NumericRing:
        return _ring_for(self)


    def numeric(self, theta: ThetaMatrix) -> "AlgebraSignature":
        return AlgebraSignature(self.n, self.m, Mode.NUMERIC, theta)


@lru_cache(maxsize=64)
def _ring_for(sig: AlgebraSignature) -> ExactRing | NumericRing:
    if sig.mode is Mode.EXACT:
        return ExactRing(sig.n)

    return NumericRing(sig.theta)


@dataclass(frozen=True, slots=True)
class MultiIndex:
    p: tuple[int, ...]
    q: tuple[int, ...]
    t: int = 0

    @classmethod
    def unit(cls, n: int) -> Self:
        return cls((0,) * n, (0,) * n, 0)


    @property
    def n(self) -> int:
        return len(self.p)


    @property
    def degree(self) -> int:
        return sum(self.p) + sum(self.q) + self.t


    # Graded-lexicographic: degree, then p_1..p_n, q_1..q_n, t
    @property
    def key(self) -> tuple:
        return (self.degree, self.p, self.q, self.t)


    def swapped(self) -> "MultiIndex":
        return MultiIndex(self.q, self.p, self.t)


    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(
            tuple(a + b for a, b in zip(self.p, other.p, strict=True)),
            tuple(a + b for a, b in zip(self.q, other.q, strict=True)),
            self.t + other.t,
        )


def check_index(sig: AlgebraSignature, idx: MultiIndex) -> None:
    if len(idx.p) != sig.n or len(idx.q) != sig.n:
        raise SignatureMismatchError(f"multi-index has length {len(idx.p)}/{len(idx.q)}, expected {sig.n}")
    if any(e < 0 for e in idx.p) or any(e < 0 for e in idx.q) or idx.t < 0:
        raise ValueError(f"multi-index exponents must be >= 0, got {idx}")
    if idx.t and not sig.has_x:
        raise SignatureMismatchError(f"x-exponent {idx.t} used with even m={sig.m}")


@lru_cache(maxsize=None)
def _zero_based_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((k - 1, l - 1) for k, l in phase_pairs(n))


def monomial_mul(a: MultiIndex, b: MultiIndex) -> tuple[PhaseWord, MultiIndex]:
    n = len(a.p)
    if len(b.p) != n:
        raise SignatureMismatchError(f"multi-indices have different n: {n} vs {len(b.p)}")
    p, q, r, s = a.p, a.q, b.p, b.q
    exps = tuple(
        p[k] * r[l] + q[k] * s[l] + r[k] * q[l] - q[k] * r[l]
        for k, l in _zero_based_pairs(n)
    )

    return PhaseWord(n, exps), a + b


# Phase of (z^p zb^q)* relative to z^q zb^p: exponent p_r p_s + q_r q_s at (r, s)
def star_phase(idx: MultiIndex) -> PhaseWord:
    p, q = idx.p, idx.q
    return PhaseWord(len(p), tuple(p[k] * p[l] + q[k] * q[l] for k, l in _zero_based_pairs(len(p))))


# --- Elements ---

@dataclass(frozen=True)
class Element:
    sig: AlgebraSignature
    terms: tuple[tuple[MultiIndex, Scalar], ...] = ()

    @classmethod
    def from_map(cls, sig: AlgebraSignature, coeffs: Mapping[MultiIndex, Scalar]) -> Self:
        ring = sig.ring
        cleaned = {}
        for idx, value in coeffs.items():
            check_index(sig, idx)
            scalar = ring.coerce(value)
            if not scalar.is_zero():
                cleaned[idx] = scalar
        return cls._canonical(sig, cleaned)


    # Trusted constructor for indices produced by the algebra itself
    @classmethod
    def _canonical(cls, sig: AlgebraSignature, coeffs: Mapping[MultiIndex, Scalar]) -> Self:
        items = [(idx, c) for idx, c in coeffs.items() if not c.is_zero()]
        items.sort(key=lambda item: item[0].key)
        return cls(sig, tuple(items))


    @classmethod
    def zero(cls, sig: AlgebraSignature) -> Self:
        return cls(sig)


    @classmethod
    def constant(cls, sig: AlgebraSignature, value: "int | Fraction | GaussianRational | complex | Scalar") -> Self:
        return cls.from_map(sig, {MultiIndex.unit(sig.n): value})


    @classmethod
    def one(cls, sig: AlgebraSignature) -> Self:
        return cls.constant(sig, 1)


    @classmethod
    def monomial(
        cls,
        sig: AlgebraSignature,
        p: Iterable[int],
        q: Iterable[int] | None = None,
        t: int = 0,
        coeff: "int | Fraction | GaussianRational | complex | Scalar" = 1,
    ) -> Self:
        p = tuple(p)
        q = tuple(q) if q is not None else (0,) * sig.n
        return cls.from_map(sig, {MultiIndex(p, q, t): coeff})


    @cached_property
    def coeffs(self) -> dict[MultiIndex, Scalar]:
        return dict(self.terms)


    def coefficient(self, idx: MultiIndex) -> Scalar:
        return self.coeffs.get(idx, self.sig.ring.zero)


    def is_zero(self) -> bool:
        return not self.terms


    def __bool__(self) -> bool:
        return bool(self.terms)


    def __add__(self, other: "Element") -> "Element":
        return linear("add", self, other)


    def __sub__(self, other: "Element") -> "Element":
        return linear("sub", self, other)


    def __neg__(self) -> "Element":
        return linear("scale", self, -1)


    def __mul__(self, other: "Element") -> "Element":
        return mul(self, other)


def generator(sig: AlgebraSignature, name: str, k: int = 0) -> Element:
    if name == "x":
        if not sig.has_x:
            raise SignatureMismatchError(f"x does not exist for even m={sig.m}")
        return Element.monomial(sig, (0,) * sig.n, None, 1)
    if not 1 <= k <= sig.n:
        raise ValueError(f"generator index must be 1..{sig.n}, got {k}")
    unit = tuple(1 if j == k - 1 else 0 for j in range(sig.n))
    if name == "z":
        return Element.monomial(sig, unit)
    if name == "zb":
        return Element.monomial(sig, (0,) * sig.n, unit)

    raise ValueError(f"unknown generator '{name}'")


def _check_sig(a: Element, b: Element) -> None:
    if a.sig != b.sig:
        raise SignatureMismatchError(f"signature mismatch: {a.sig} vs {b.sig}")


# Sum of products a_j * b_j. Pairs whose degree sum exceeds max_degree are skipped, which
# gives the same result as truncating afterwards; `only_degree` keeps one homogeneous part.
def mul_sum(
    pairs: Iterable[tuple[Element, Element]],
    max_degree: int | None = None,
    only_degree: int | None = None,
    sig: AlgebraSignature | None = None,
) -> Element:
    cap = only_degree if only_degree is not None else max_degree
    buckets: dict[MultiIndex, list[Scalar]] = defaultdict(list)
    for a, b in pairs:
        _check_sig(a, b)
        if sig is None:
            sig = a.sig
        elif a.sig != sig:
            raise SignatureMismatchError(f"signature mismatch: {a.sig} vs {sig}")
        ring = sig.ring
        for ia, ca in a.terms:
            da = ia.degree
            if cap is not None and da > cap:
                break
            for ib, cb in b.terms:
                total = da + ib.degree
                if cap is not None and total > cap:
                    break
                if only_degree is not None and total < only_degree:
                    continue
                word, idx = monomial_mul(ia, ib)
                buckets[idx].append(ring.product(ca, cb, word))
    if sig is None:
        raise ValueError("mul_sum needs at least one pair or an explicit signature")
    ring = sig.ring

    return Element._canonical(sig, {idx: ring.sum(parts) for idx, parts in buckets.items()})


def mul(a: Element, b: Element, max_degree: int | None = None) -> Element:
    return mul_sum([(a, b)], max_degree=max_degree)


def mul_homogeneous(a: Element, b: Element, d: int) -> Element:
    return mul_sum([(a, b)], only_degree=d)


# --- Generator-word rewriting ---

# Letter ranks fix the normal order z_1..z_n, zb_1..zb_n, x
_Z, _ZB, _X = 0, 1, 2


def _letters(idx: MultiIndex) -> list[tuple[int, int]]:
    word = []
    for k, e in enumerate(idx.p, start=1):
        word.extend([(_Z, k)] * e)
    for k, e in enumerate(idx.q, start=1):
        word.extend([(_ZB, k)] * e)
    word.extend([(_X, 0)] * idx.t)
    return word


# Phase picked up by rewriting the adjacent pair `left right` as `right left`
def _swap_phase(left: tuple[int, int], right: tuple[int, int]) -> tuple[tuple[int, int], int] | None:
    (lk, li), (rk, ri) = left, right
    if lk == _X or rk == _X or li == ri:
        return None
    if lk == rk:
        # z_p z_q = λ_{p,q} z_q z_p and the same for zb, with p > q
        return (li, ri), 1
    # zb_p z_q = λ_{q,p} z_q zb_p
    if ri > li:
        return (ri, li), 1

    return (li, ri), -1


def _normal_order(n: int, word: list[tuple[int, int]]) -> tuple[list[int], list[tuple[int, int]]]:
    exps = [0] * len(phase_pairs(n))
    word = list(word)
    while True:
        for pos in range(len(word) - 1):
            if word[pos] > word[pos + 1]:
                phase = _swap_phase(word[pos], word[pos + 1])
                if phase is not None:
                    (k, l), e = phase
                    exps[pair_index(k, l)] += e
                word[pos], word[pos + 1] = word[pos + 1], word[pos]
                break
        else:
            return exps, word


def _index_of(n: int, word: list[tuple[int, int]]) -> MultiIndex:
    p, q, t = [0] * n, [0] * n, 0
    for kind, k in word:
        if kind == _Z:
            p[k - 1] += 1
        elif kind == _ZB:
            q[k - 1] += 1
        else:
            t += 1
    return MultiIndex(tuple(p), tuple(q), t)


# Reference multiplication: concatenate generator words and normal-order them by
# leftmost adjacent swaps, one relation phase per swap
def mul_rewrite(a: Element, b: Element) -> Element:
    _check_sig(a, b)
    n = a.sig.n
    ring = a.sig.ring
    buckets: dict[MultiIndex, list[Scalar]] = defaultdict(list)
    for ia, ca in a.terms:
        for ib, cb in b.terms:
            exps, word = _normal_order(n, _letters(ia) + _letters(ib))
            buckets[_index_of(n, word)].append(ring.product(ca, cb, PhaseWord(n, tuple(exps))))

    return Element._canonical(a.sig, {idx: ring.sum(parts) for idx, parts in buckets.items()})


def star(a: Element) -> Element:
    ring = a.sig.ring
    out = {}
    for idx, c in a.terms:
        out[idx.swapped()] = ring.product(c.conjugate(), ring.one, star_phase(idx))

    return Element._canonical(a.sig, out)


_LINEAR_OPS = ("add", "sub", "scale")


def linear(op: str, a: Element, b: "Element | int | Fraction | GaussianRational | complex | Scalar") -> Element:
    if op not in _LINEAR_OPS:
        raise ValueError(f"op must be one of {_LINEAR_OPS}, got '{op}'")
    ring = a.sig.ring
    if op == "scale":
        if isinstance(b, Element):
            raise TypeError("scale takes a scalar, not an element")
        factor = ring.coerce(b)
        return Element._canonical(a.sig, {idx: c * factor for idx, c in a.terms})

    if not isinstance(b, Element):
        raise TypeError(f"'{op}' takes two elements")
    _check_sig(a, b)
    out = dict(a.terms)
    for idx, c in b.terms:
        term = c if op == "add" else -c
        prev = out.get(idx)
        out[idx] = term if prev is None else prev + term

    return Element._canonical(a.sig, out)


def degree(a: Element) -> int:
    if not a.terms:
        return -1

    return a.terms[-1][0].degree


def truncate(a: Element, D: int) -> Element:
    if D < 0:
        raise ValueError(f"truncation degree must be >= 0, got {D}")

    return Element(a.sig, tuple(item for item in a.terms if item[0].degree <= D))


def homogeneous_part(a: Element, d: int) -> Element:
    return Element(a.sig, tuple(item for item in a.terms if item[0].degree == d))


# Coefficientwise comparison; exact mode ignores tol
def close(a: Element, b: Element, tol: float = DEFAULT_TOL) -> bool:
    _check_sig(a, b)
    if a.sig.is_exact:
        return a == b
    ring = a.sig.ring

    return all(ring.negligible(c, tol) for _, c in linear("sub", a, b).terms)


def hermitian_test(a: Element, tol: float = DEFAULT_TOL) -> bool:
    return close(star(a), a, tol)


def _abs_value(c: Scalar, th: ThetaMatrix | None) -> float:
    if isinstance(c, NumericScalar):
        return abs(c.value)

    return abs(eval_scalar(c, th).value)


# Finite-truncation stand-in for the Schwartz decay condition
def decay_check(a: Element, r: int, C: Fraction | float, th: ThetaMatrix | None = None) -> bool:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if C <= 0:
        raise ValueError(f"C must be > 0, got {C}")
    if a.sig.is_exact and th is None:
        raise ValueError("exact elements need a theta matrix for decay_check")
    # exact comparison: weight**r is an unbounded int
    bound = Fraction(C)
    for idx, c in a.terms:
        weight = 1 + sum(e * e for e in idx.p) + sum(e * e for e in idx.q) + idx.t * idx.t
        if weight**r * Fraction(_abs_value(c, th)) >= bound:
            return False

    return True


# Exact element -> numeric element under Θ
def evaluate(a: Element, th: ThetaMatrix) -> Element:
    if th.n != a.sig.n:
        raise SignatureMismatchError(f"theta has n={th.n}, element has n={a.sig.n}")
    target = a.sig.numeric(th)
    if not a.sig.is_exact:
        if a.sig == target:
            return a
        raise SignatureMismatchError("element is already numeric under a different theta")

    return Element._canonical(target, {idx: eval_scalar(c, th) for idx, c in a.terms})


# All multi-indices of total degree d, in graded-lex order
def indices_of_degree(sig: AlgebraSignature, d: int) -> list[MultiIndex]:
    slots = 2 * sig.n + (1 if sig.has_x else 0)
    found = []
    for cut in combinations(range(d + slots - 1), slots - 1):
        # stars and bars
        bounds = (-1, *cut, d + slots - 1)
        parts = [bounds[j + 1] - bounds[j] - 1 for j in range(slots)]
        t = parts[2 * sig.n] if sig.has_x else 0
        found.append(MultiIndex(tuple(parts[: sig.n]), tuple(parts[sig.n : 2 * sig.n]), t))
    found.sort(key=lambda idx: idx.key)
    return found

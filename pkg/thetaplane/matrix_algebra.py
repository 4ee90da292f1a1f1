# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Self
from thetaplane.coefficient_ring import Scalar, ThetaMatrix
from thetaplane.element_syntax import format_element, parse_element
from thetaplane.errors import ElementSyntaxError, SignatureMismatchError
from thetaplane.theta_algebra import (
    DEFAULT_TOL,
    AlgebraSignature,
    Element,
    MultiIndex,
    Mode,
    close,
    degree,
    evaluate,
    linear,
    mul_sum,
    star,
    truncate,
)


@dataclass(frozen=True, slots=True)
class JetContext:
    D: int
    tol: float = 0.0

    def __post_init__(self) -> None:
        if self.D < 0:
            raise ValueError(f"D must be >= 0, got {self.D}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")


    # tol is forced to 0 for exact signatures
    @classmethod
    def for_signature(cls, sig: AlgebraSignature, D: int, tol: float = DEFAULT_TOL) -> Self:
        return cls(D, 0.0 if sig.is_exact else tol)


@dataclass(frozen=True)
class AlgMatrix:
    sig: AlgebraSignature
    N: int
    entries: tuple[tuple[Element, ...], ...]

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if len(self.entries) != self.N or any(len(row) != self.N for row in self.entries):
            raise ValueError(f"entries must be {self.N}x{self.N}")
        for row in self.entries:
            for entry in row:
                if entry.sig != self.sig:
                    raise SignatureMismatchError("all entries must share the matrix signature")


    @classmethod
    def from_rows(cls, sig: AlgebraSignature, rows: Sequence[Sequence[Element]]) -> Self:
        return cls(sig, len(rows), tuple(tuple(row) for row in rows))


    @classmethod
    def build(cls, sig: AlgebraSignature, N: int, cell) -> Self:
        return cls(sig, N, tuple(tuple(cell(k, l) for l in range(N)) for k in range(N)))


    @classmethod
    def zeros(cls, sig: AlgebraSignature, N: int) -> Self:
        zero = Element.zero(sig)
        return cls.build(sig, N, lambda k, l: zero)


    @classmethod
    def identity(cls, sig: AlgebraSignature, N: int) -> Self:
        return cls.standard_projector(sig, N, N)


    @classmethod
    def diagonal(cls, sig: AlgebraSignature, values: Sequence[Element]) -> Self:
        zero = Element.zero(sig)
        return cls.build(sig, len(values), lambda k, l: values[k] if k == l else zero)


    # diag(I_r, 0)
    @classmethod
    def standard_projector(cls, sig: AlgebraSignature, N: int, r: int) -> Self:
        if not 0 <= r <= N:
            raise ValueError(f"rank must be 0..{N}, got {r}")
        one, zero = Element.one(sig), Element.zero(sig)
        return cls.build(sig, N, lambda k, l: one if k == l and k < r else zero)


    # Constant matrix from scalar entries
    @classmethod
    def from_constants(cls, sig: AlgebraSignature, rows: Sequence[Sequence[object]]) -> Self:
        return cls.build(sig, len(rows), lambda k, l: Element.constant(sig, rows[k][l]))


    def __getitem__(self, cell: tuple[int, int]) -> Element:
        k, l = cell
        return self.entries[k][l]


    def cells(self) -> Iterable[tuple[int, int, Element]]:
        for k, row in enumerate(self.entries):
            for l, entry in enumerate(row):
                yield k, l, entry


    def map(self, fn) -> "AlgMatrix":
        return AlgMatrix.build(self.sig, self.N, lambda k, l: fn(self.entries[k][l]))


def _check_shapes(A: AlgMatrix, B: AlgMatrix) -> None:
    if A.sig != B.sig:
        raise SignatureMismatchError(f"signature mismatch: {A.sig} vs {B.sig}")
    if A.N != B.N:
        raise ValueError(f"shape mismatch: {A.N}x{A.N} vs {B.N}x{B.N}")


def mat_mul(A: AlgMatrix, B: AlgMatrix, ctx: JetContext | None = None) -> AlgMatrix:
    _check_shapes(A, B)
    cap = ctx.D if ctx is not None else None
    return AlgMatrix.build(
        A.sig,
        A.N,
        lambda k, l: mul_sum(
            ((A.entries[k][j], B.entries[j][l]) for j in range(A.N)),
            max_degree=cap,
            sig=A.sig,
        ),
    )


# Degree-d part of A*B
def mat_mul_homogeneous(A: AlgMatrix, B: AlgMatrix, d: int) -> AlgMatrix:
    _check_shapes(A, B)
    return AlgMatrix.build(
        A.sig,
        A.N,
        lambda k, l: mul_sum(((A.entries[k][j], B.entries[j][l]) for j in range(A.N)), only_degree=d, sig=A.sig),
    )


def mat_adjoint(A: AlgMatrix) -> AlgMatrix:
    return AlgMatrix.build(A.sig, A.N, lambda k, l: star(A.entries[l][k]))


def mat_add(A: AlgMatrix, B: AlgMatrix) -> AlgMatrix:
    _check_shapes(A, B)
    return AlgMatrix.build(A.sig, A.N, lambda k, l: linear("add", A.entries[k][l], B.entries[k][l]))


def mat_sub(A: AlgMatrix, B: AlgMatrix) -> AlgMatrix:
    _check_shapes(A, B)
    return AlgMatrix.build(A.sig, A.N, lambda k, l: linear("sub", A.entries[k][l], B.entries[k][l]))


def mat_scale(A: AlgMatrix, factor: object) -> AlgMatrix:
    return A.map(lambda e: linear("scale", e, factor))


def mat_truncate(A: AlgMatrix, D: int) -> AlgMatrix:
    return A.map(lambda e: truncate(e, D))


def mat_degree(A: AlgMatrix) -> int:
    return max(degree(e) for _, _, e in A.cells())


def mat_close(A: AlgMatrix, B: AlgMatrix, tol: float = DEFAULT_TOL) -> bool:
    _check_shapes(A, B)
    return all(close(a, b, tol) for (_, _, a), (_, _, b) in zip(A.cells(), B.cells(), strict=True))


def _equal_mod(A: AlgMatrix, B: AlgMatrix, ctx: JetContext) -> bool:
    return mat_close(mat_truncate(A, ctx.D), mat_truncate(B, ctx.D), ctx.tol)


def is_projector(P: AlgMatrix, ctx: JetContext) -> bool:
    if not _equal_mod(mat_adjoint(P), P, ctx):
        return False

    return _equal_mod(mat_mul(P, P, ctx), P, ctx)


def is_unitary_mod(U: AlgMatrix, ctx: JetContext) -> bool:
    eye = AlgMatrix.identity(U.sig, U.N)
    adj = mat_adjoint(U)
    if not _equal_mod(mat_mul(U, adj, ctx), eye, ctx):
        return False

    return _equal_mod(mat_mul(adj, U, ctx), eye, ctx)


def direct_sum(P: AlgMatrix, Q: AlgMatrix) -> AlgMatrix:
    if P.sig != Q.sig:
        raise SignatureMismatchError(f"signature mismatch: {P.sig} vs {Q.sig}")
    zero = Element.zero(P.sig)

    def cell(k: int, l: int) -> Element:
        if k < P.N and l < P.N:
            return P.entries[k][l]
        if k >= P.N and l >= P.N:
            return Q.entries[k - P.N][l - P.N]
        return zero

    return AlgMatrix.build(P.sig, P.N + Q.N, cell)


def evaluate_matrix(A: AlgMatrix, th: ThetaMatrix) -> AlgMatrix:
    entries = tuple(tuple(evaluate(e, th) for e in row) for row in A.entries)
    return AlgMatrix(A.sig.numeric(th), A.N, entries)


@dataclass(frozen=True, slots=True)
class Violation:
    relation: str  # "idempotent" (P*P - P) or "hermitian" (P* - P)
    row: int  # 1-based
    col: int
    index: MultiIndex
    value: Scalar


# Nonzero coefficients of P*P - P and P* - P mod degree > D, highest degree first
def projector_violations(P: AlgMatrix, ctx: JetContext) -> list[Violation]:
    ring = P.sig.ring
    found = []
    residuals = (
        ("idempotent", mat_sub(mat_mul(P, P, ctx), mat_truncate(P, ctx.D))),
        ("hermitian", mat_truncate(mat_sub(mat_adjoint(P), P), ctx.D)),
    )
    for relation, R in residuals:
        for k, l, entry in R.cells():
            for idx, value in entry.terms:
                if not ring.negligible(value, ctx.tol):
                    found.append(Violation(relation, k + 1, l + 1, idx, value))
    found.sort(key=lambda v: (-v.index.degree, v.relation != "idempotent", v.row, v.col, v.index.key))
    return found


# --- Matrix files ---

_HEADER = re.compile(r"^matrix\s+N=(\d+)\s+m=(\d+)\s+mode=(\w+)$")
_CELL = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*(.*)$")


def format_matrix(A: AlgMatrix) -> str:
    lines = [f"matrix N={A.N} m={A.sig.m} mode={A.sig.mode}"]
    for k, l, entry in A.cells():
        if entry:
            lines.append(f"[{k + 1},{l + 1}] {format_element(entry)}")
    return "\n".join(lines) + "\n"


def _header_signature(match: re.Match, theta: ThetaMatrix | None, line_no: int) -> tuple[int, AlgebraSignature]:
    N, m, mode = int(match.group(1)), int(match.group(2)), match.group(3)
    if mode not in (Mode.EXACT, Mode.NUMERIC):
        raise ElementSyntaxError(f"mode must be exact or numeric, got '{mode}'", line=line_no)
    if N < 1 or m < 2:
        raise ElementSyntaxError(f"need N >= 1 and m >= 2, got N={N} m={m}", line=line_no)
    if mode == Mode.NUMERIC:
        if theta is None:
            raise ValueError("numeric matrix files need a theta matrix")
        if theta.n != m // 2:
            raise SignatureMismatchError(f"theta has n={theta.n}, matrix has m={m}")

    return N, AlgebraSignature.from_m(m, mode, theta)


def parse_matrix(text: str, theta: ThetaMatrix | None = None) -> AlgMatrix:
    header: tuple[int, AlgebraSignature] | None = None
    cells: dict[tuple[int, int], Element] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            match = _HEADER.match(line)
            if not match:
                raise ElementSyntaxError("expected 'matrix N=<int> m=<int> mode=<exact|numeric>'", line=line_no)
            header = _header_signature(match, theta, line_no)
            continue
        N, sig = header
        match = _CELL.match(line)
        if not match:
            raise ElementSyntaxError(f"malformed cell line '{line}'", line=line_no)
        k, l = int(match.group(1)), int(match.group(2))
        if not (1 <= k <= N and 1 <= l <= N):
            raise ElementSyntaxError(f"cell [{k},{l}] out of range 1..{N}", line=line_no)
        if (k, l) in cells:
            raise ElementSyntaxError(f"duplicate cell [{k},{l}]", line=line_no)
        try:
            cells[(k, l)] = parse_element(match.group(3), sig)
        except ElementSyntaxError as exc:
            raise exc.at_line(line_no) from exc
    if header is None:
        raise ElementSyntaxError("missing matrix header")
    N, sig = header
    zero = Element.zero(sig)

    return AlgMatrix.build(sig, N, lambda k, l: cells.get((k + 1, l + 1), zero))

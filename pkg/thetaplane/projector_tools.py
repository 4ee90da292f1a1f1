# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
import numpy as np
from scipy import linalg
from thetaplane.coefficient_ring import ExactScalar, GaussianRational, PhaseWord
from thetaplane.errors import (
    IdentityCheckError,
    NotAProjectorError,
    ThetaPlaneError,
    UnitarityCompletionError,
)
from thetaplane.matrix_algebra import (
    AlgMatrix,
    JetContext,
    Violation,
    is_projector,
    mat_add,
    mat_adjoint,
    mat_mul,
    mat_mul_homogeneous,
    mat_scale,
    mat_sub,
    mat_truncate,
)
from thetaplane.metrics import PerformanceMetrics
from thetaplane.scalar_matrix import ScalarMatrix, cayley, column_space_basis, orthonormalize
from thetaplane.theta_algebra import (
    DEFAULT_TOL,
    AlgebraSignature,
    Element,
    MultiIndex,
    Mode,
    generator,
    indices_of_degree,
    linear,
    mul,
    star,
    star_phase,
)

logger = logging.getLogger("[ PROJECTOR ]")

# Internal numeric consistency checks allow this multiple of the jet tolerance
_NUMERIC_SLACK = 1e3


# --- Scalar part ---

def scalar_part(P: AlgMatrix) -> ScalarMatrix:
    unit = MultiIndex.unit(P.sig.n)
    rows = []
    for row in P.entries:
        values = []
        for entry in row:
            c = entry.coefficient(unit)
            if isinstance(c, ExactScalar):
                value = c.constant_value()
                if value is None:
                    raise ThetaPlaneError("degree-0 coefficient carries a phase word; it is not a Gaussian rational")
                values.append(value)
            else:
                values.append(c.value)
        rows.append(tuple(values))

    return ScalarMatrix(P.N, tuple(rows), exact=P.sig.is_exact)


def _require_scalar_projector(A: ScalarMatrix, tol: float) -> None:
    if not A.is_hermitian(tol):
        raise NotAProjectorError("scalar part is not hermitian")
    if not A.is_idempotent(tol):
        raise NotAProjectorError("scalar part is not idempotent")


# Unitary Q and rank r with Q A Q* = diag(I_r, 0)
def diagonalize_scalar_projector(A: ScalarMatrix, tol: float = DEFAULT_TOL) -> tuple[ScalarMatrix, int]:
    if A.exact:
        return _diagonalize_exact(A)
    _require_scalar_projector(A, tol)
    evals, evecs = linalg.eigh(A.to_array())
    order = np.argsort(-evals, kind="stable")
    rank = int(np.sum(evals > 0.5))
    Q = ScalarMatrix.from_array(evecs[:, order].conj().T)
    logger.debug("Numeric diagonalization: eigenvalues=%s rank=%d", np.round(evals[order], 12).tolist(), rank)

    return Q, rank


def _diagonalize_exact(A: ScalarMatrix) -> tuple[ScalarMatrix, int]:
    _require_scalar_projector(A, 0.0)
    rank = A.rank()
    target = ScalarMatrix.standard_projector(A.N, rank)
    if A == target:
        return ScalarMatrix.identity(A.N), rank
    # Columns of W: orthonormal bases of range(A) then range(I - A); Q = W*
    complement = ScalarMatrix.identity(A.N) - A
    basis = orthonormalize(column_space_basis(A)) + orthonormalize(column_space_basis(complement))
    W = ScalarMatrix(A.N, tuple(tuple(basis[l][k] for l in range(A.N)) for k in range(A.N)), True)
    Q = W.adjoint()
    if not Q.is_unitary() or A.conjugated_by(Q) != target:
        raise IdentityCheckError("exact diagonalization produced a non-unitary or wrong conjugator")
    logger.info("Exact scalar part diagonalized, rank=%d", rank)

    return Q, rank


# Exact unitary (I - S)(I + S)^-1 from a seeded skew-hermitian S with small Gaussian entries
def cayley_unitary(seed: int, N: int) -> ScalarMatrix:
    rng = random.Random(seed)
    S = [[GaussianRational() for _ in range(N)] for _ in range(N)]
    for k in range(N):
        S[k][k] = GaussianRational(0, Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        for l in range(k + 1, N):
            value = _small_gaussian(rng)
            S[k][l] = value
            S[l][k] = -value.conjugate()

    return cayley(ScalarMatrix(N, tuple(tuple(row) for row in S), True))


def constant_matrix(sig: AlgebraSignature, Q: ScalarMatrix) -> AlgMatrix:
    if Q.exact != sig.is_exact:
        raise ValueError("scalar matrix mode does not match the algebra signature")

    return AlgMatrix.from_constants(sig, Q.entries)


# W P W* for a constant unitary W
def conjugate_constant(P: AlgMatrix, W: ScalarMatrix) -> AlgMatrix:
    Wm = constant_matrix(P.sig, W)
    return mat_mul(mat_mul(Wm, P), mat_adjoint(Wm))


# --- Gram identity ---

def _target_partner(alpha: MultiIndex, M: tuple[int, ...], T: int) -> MultiIndex | None:
    p = tuple(m - q for m, q in zip(M, alpha.q, strict=True))
    q = tuple(m - p_ for m, p_ in zip(M, alpha.p, strict=True))
    t = T - alpha.t
    if min(p, default=0) < 0 or min(q, default=0) < 0 or t < 0:
        return None

    return MultiIndex(p, q, t)


# Phase of a_alpha conj(a_beta) on z^{p+q'} zb^{q+p'}, written out in the exponents directly
def _gram_phase(alpha: MultiIndex, beta: MultiIndex) -> ExactScalar:
    p, q, pp, qq = alpha.p, alpha.q, beta.p, beta.q
    n = len(p)
    exps = {}
    for r in range(n):
        for s in range(r):
            e = pp[r] * pp[s] + qq[r] * qq[s] + p[r] * qq[s] + q[r] * pp[s] + qq[r] * q[s] - q[r] * qq[s]
            if e:
                exps[(r + 1, s + 1)] = e

    return ExactScalar.phase(PhaseWord.from_exponents(n, exps))


# Λ(M) = ∏_{s<r} λ_{r,s}^{M_r M_s}
def split_weight(n: int, M: tuple[int, ...]) -> ExactScalar:
    return ExactScalar.phase(star_phase(MultiIndex(M, (0,) * n, 0)))


def top_gram_check(P: AlgMatrix, k: int, M: tuple[int, ...], t: int = 0) -> ExactScalar:
    sig = P.sig
    if not sig.is_exact:
        raise ThetaPlaneError("top_gram_check runs in exact mode only")
    if len(M) != sig.n:
        raise ValueError(f"M must have {sig.n} components, got {len(M)}")
    if not 1 <= k <= P.N:
        raise ValueError(f"row k must be 1..{P.N}, got {k}")
    if t and not sig.has_x:
        raise ValueError(f"x-exponent {t} needs odd m")
    if mat_adjoint(P) != P:
        raise NotAProjectorError("top_gram_check needs a hermitian matrix")
    M = tuple(M)
    target = MultiIndex(M, M, t)
    row = P.entries[k - 1]

    direct = ExactScalar.sum(sig.n, (mul(entry, star(entry)).coefficient(target) for entry in row))

    weight = split_weight(sig.n, M)
    parts = []
    for entry in row:
        coeffs = entry.coeffs
        for alpha, a in entry.terms:
            beta = _target_partner(alpha, M, t)
            if beta is None or beta not in coeffs:
                continue
            if beta == alpha:
                # split p + q = M with even x-power
                parts.append(a * a.conjugate() * weight)
            else:
                parts.append(a * coeffs[beta].conjugate() * _gram_phase(alpha, beta))
    gram = ExactScalar.sum(sig.n, parts)

    if direct != gram:
        raise IdentityCheckError(f"Gram coefficient mismatch at row {k}, M={M}: {direct} vs {gram}")

    return direct


# Exact P with P*P = P = P*: every positive-degree coefficient must vanish
def assert_scalar_projector_poly(P: AlgMatrix) -> list[Violation]:
    if not P.sig.is_exact:
        raise ThetaPlaneError("assert_scalar_projector_poly runs in exact mode only")
    if mat_adjoint(P) != P:
        raise NotAProjectorError("matrix is not hermitian")
    if mat_mul(P, P) != P:
        raise NotAProjectorError("matrix is not idempotent")
    found = []
    for k, l, entry in P.cells():
        for idx, c in entry.terms:
            if idx.degree > 0:
                found.append(Violation("positive-degree", k + 1, l + 1, idx, c))
    if found:
        logger.warning("Polynomial projector with %d positive-degree coefficients", len(found))

    return found


# --- Rigidity cascade ---

Variable = tuple[int, int, MultiIndex]


@dataclass(frozen=True)
class Elimination:
    degree: int
    row: int  # 1-based
    M: tuple[int, ...]
    t: int
    variables: tuple[Variable, ...]


@dataclass
class RigidityCertificate:
    sig: AlgebraSignature
    N: int
    support_degree: int
    steps: list[Elimination] = field(default_factory=list)
    unresolved: list[Variable] = field(default_factory=list)

    @property
    def only_scalar(self) -> bool:
        return not self.unresolved


    @property
    def eliminated(self) -> int:
        return sum(len(step.variables) for step in self.steps)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    return [(head, *rest) for head in range(total, -1, -1) for rest in _compositions(total - head, parts - 1)]


# Targets z^M zb^M x^T of degree 2d; T > 0 only when x exists
def _targets(sig: AlgebraSignature, d: int) -> list[tuple[tuple[int, ...], int]]:
    found = []
    for T in range(0, 2 * d + 1, 2):
        if T and not sig.has_x:
            break
        found.extend((M, T) for M in _compositions(d - T // 2, sig.n))
    return found


# Form terms of the coefficient of z^M zb^M x^T in Σ_l p_{k,l} p_{k,l}*, restricted to the
# degree-d unknowns: (l, alpha, beta, phase) for c_{k,l,alpha} conj(c_{k,l,beta})
def _gram_form(sig: AlgebraSignature, N: int, d: int, M: tuple[int, ...], T: int) -> list[tuple]:
    terms = []
    for alpha in indices_of_degree(sig, d):
        beta = _target_partner(alpha, M, T)
        if beta is None:
            continue
        phase = _gram_phase(alpha, beta)
        for l in range(N):
            terms.append((l, alpha, beta, phase))
    return terms


# Solve the projector equations for the unknown positive-degree coefficients of an N x N
# polynomial projector of the given support degree. Top degree first: every Gram form whose
# surviving terms are all diagonal is a vanishing sum of |c|^2 (up to the unit Λ(M)).
def solve_projector_coefficients(sig: AlgebraSignature, N: int, support_degree: int) -> RigidityCertificate:
    if not sig.is_exact:
        raise ThetaPlaneError("solve_projector_coefficients runs in exact mode only")
    if support_degree < 0:
        raise ValueError(f"support_degree must be >= 0, got {support_degree}")
    cert = RigidityCertificate(sig, N, support_degree)
    for d in range(support_degree, 0, -1):
        unknown = {(k, l, idx) for k in range(N) for l in range(N) for idx in indices_of_degree(sig, d)}
        zero: set[Variable] = set()
        forms = [
            (k, M, T, _gram_form(sig, N, d, M, T))
            for k in range(N)
            for M, T in _targets(sig, d)
        ]
        changed = True
        while changed:
            changed = False
            for k, M, T, terms in forms:
                live = [(l, a, b, ph) for l, a, b, ph in terms if (k, l, a) not in zero and (k, l, b) not in zero]
                if not live or any(a != b for _, a, b, _ in live):
                    continue
                weight = split_weight(sig.n, M)
                if any(ph != weight for _, _, _, ph in live):
                    raise IdentityCheckError(f"diagonal Gram weight differs from the split weight at M={M}")
                forced = []
                for l, a, _, _ in live:
                    for var in ((k, l, a), (l, k, a.swapped())):
                        if var not in zero:
                            zero.add(var)
                            forced.append(var)
                cert.steps.append(Elimination(d, k + 1, M, T, tuple(forced)))
                changed = True
        remaining = sorted(unknown - zero, key=lambda v: (v[0], v[1], v[2].key))
        logger.debug("Degree %d: %d unknowns, %d forced to zero", d, len(unknown), len(zero))
        if remaining:
            # lower degrees rely on every higher coefficient vanishing
            cert.unresolved = [(k + 1, l + 1, idx) for k, l, idx in remaining]
            break

    return cert


# --- Trivialization ---

@dataclass(frozen=True)
class TrivializationResult:
    U: AlgMatrix
    rank: int
    residual_P: Fraction | float
    residual_U: Fraction | float
    degree: int


def _max_residual(R: AlgMatrix) -> Fraction | float:
    zero = Fraction(0) if R.sig.is_exact else 0.0
    return max((c.magnitude() for _, _, e in R.cells() for _, c in e.terms), default=zero)


def _diagonal_block(k: int, l: int, r: int) -> bool:
    return (k < r) == (l < r)


def _check_small(R: AlgMatrix, cells, slack: float, error: type[Exception], what: str) -> None:
    ring = R.sig.ring
    for k, l in cells:
        for idx, c in R.entries[k][l].terms:
            if not ring.negligible(c, slack):
                raise error(f"{what} at cell ({k + 1},{l + 1}), index {idx}")


def trivialize(P: AlgMatrix, ctx: JetContext, metrics: PerformanceMetrics | None = None) -> TrivializationResult:
    sig, N, D = P.sig, P.N, ctx.D
    metrics = metrics or PerformanceMetrics()
    if not is_projector(P, ctx):
        raise NotAProjectorError(f"input is not a projector modulo degree > {D}")
    slack = 0.0 if sig.is_exact else max(ctx.tol, DEFAULT_TOL) * _NUMERIC_SLACK

    with metrics.measure("diagonalize"):
        Q, r = diagonalize_scalar_projector(scalar_part(P), ctx.tol if ctx.tol > 0 else DEFAULT_TOL)
        Qm = constant_matrix(sig, Q)
        P1 = mat_mul(mat_mul(Qm, P, ctx), mat_adjoint(Qm), ctx)
    E = AlgMatrix.standard_projector(sig, N, r)
    every = [(k, l) for k in range(N) for l in range(N)]
    diag_cells = [(k, l) for k, l in every if _diagonal_block(k, l, r)]
    half = GaussianRational(Fraction(-1, 2)) if sig.is_exact else -0.5

    V = AlgMatrix.identity(sig, N)
    for d in range(1, D + 1):
        with metrics.measure(f"degree_{d}"):
            # intertwining V P1 = E V at degree d fixes the off-diagonal blocks
            T = mat_mul_homogeneous(V, P1, d)
            _check_small(T, diag_cells, slack, IdentityCheckError, "diagonal-block coefficient recursion fails")
            # unitarity V V* = I at degree d fixes the diagonal blocks
            S = mat_mul_homogeneous(V, mat_adjoint(V), d)
            S_adj = mat_adjoint(S)
            _check_small(mat_sub(S, S_adj), diag_cells, slack, UnitarityCompletionError, "S is not self-adjoint")
            def cell(k: int, l: int, T=T, S=S) -> Element:
                if _diagonal_block(k, l, r):
                    return linear("scale", S.entries[k][l], half)
                if k < r:
                    return T.entries[k][l]
                return linear("scale", T.entries[k][l], -1)

            V_d = AlgMatrix.build(sig, N, cell)
            V = mat_add(V, V_d)
            residual = mat_mul_homogeneous(V, mat_adjoint(V), d)
            _check_small(residual, every, slack, UnitarityCompletionError, f"unitarity residual at degree {d}")
            produced = sum(len(e.terms) for _, _, e in V_d.cells())
            metrics.add_coefficients(f"degree_{d}", produced)
            logger.debug("Degree %d completed, %d coefficients", d, produced)

    U = mat_truncate(mat_mul(V, Qm, ctx), D)
    with metrics.measure("residuals"):
        U_adj = mat_adjoint(U)
        residual_P = _max_residual(mat_sub(mat_mul(mat_mul(U, P, ctx), U_adj, ctx), E))
        residual_U = _max_residual(mat_sub(mat_mul(U, U_adj, ctx), AlgMatrix.identity(sig, N)))
    logger.info("Trivialized: N=%d rank=%d degree=%d residual_P=%s residual_U=%s", N, r, D, residual_P, residual_U)

    return TrivializationResult(U, r, residual_P, residual_U, D)


def _format_residual(value: Fraction | float) -> str:
    if isinstance(value, Fraction):
        return str(value)

    return repr(float(value))


def format_report(result: TrivializationResult) -> str:
    return (
        f"rank={result.rank} degree={result.degree} "
        f"residual_P={_format_residual(result.residual_P)} residual_U={_format_residual(result.residual_U)}"
    )


_REPORT = re.compile(r"^rank=(\d+)\s+degree=(\d+)\s+residual_P=(\S+)\s+residual_U=(\S+)$")


def _parse_residual(token: str) -> Fraction | float:
    if re.fullmatch(r"-?\d+(/\d+)?", token):
        return Fraction(token)

    return float(token)


# Returns (rank, degree, residual_P, residual_U)
def parse_report(text: str) -> tuple[int, int, Fraction | float, Fraction | float]:
    match = _REPORT.match(text.strip())
    if not match:
        raise ValueError(f"malformed trivialization report '{text.strip()}'")

    return int(match.group(1)), int(match.group(2)), _parse_residual(match.group(3)), _parse_residual(match.group(4))


# --- Test-input generator ---

def _small_gaussian(rng: random.Random) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-2, 2), rng.randint(1, 2)),
        Fraction(rng.randint(-2, 2), rng.randint(1, 2)),
    )


def _random_linear(sig: AlgebraSignature, rng: random.Random) -> Element:
    names = [("z", k) for k in range(1, sig.n + 1)] + [("zb", k) for k in range(1, sig.n + 1)]
    if sig.has_x:
        names.append(("x", 0))
    total = Element.zero(sig)
    # redraw until nonzero so off-diagonal blocks always move the projector
    while total.is_zero():
        for name, k in names:
            if rng.random() < 0.5:
                total = linear("add", total, linear("scale", generator(sig, name, k), _small_gaussian(rng)))
    return total


# Random skew-adjoint matrix with homogeneous degree-1 entries: A* = -A
def _random_skew_adjoint(sig: AlgebraSignature, N: int, rng: random.Random) -> AlgMatrix:
    cells: dict[tuple[int, int], Element] = {}
    for k in range(N):
        b = _random_linear(sig, rng)
        cells[(k, k)] = linear("sub", b, star(b))
        for l in range(k + 1, N):
            b = _random_linear(sig, rng)
            cells[(k, l)] = b
            cells[(l, k)] = linear("scale", star(b), -1)

    return AlgMatrix.build(sig, N, lambda k, l: cells[(k, l)])


# Seeded projector P = V diag(I_r, 0) V* with V the degree-D truncated exponential of a
# skew-adjoint matrix; returns (P, V)
def make_test_projector(seed: int, n: int, N: int, r: int, D: int, m: int | None = None) -> tuple[AlgMatrix, AlgMatrix]:
    if not 0 <= r <= N:
        raise ValueError(f"r must be 0..{N}, got {r}")
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    sig = AlgebraSignature(n, m if m is not None else 2 * n, Mode.EXACT)
    ctx = JetContext(D)
    rng = random.Random(seed)
    A = _random_skew_adjoint(sig, N, rng)

    V = AlgMatrix.identity(sig, N)
    power = V
    for j in range(1, D + 1):
        power = mat_mul(power, A, ctx)
        V = mat_add(V, mat_scale(power, Fraction(1, factorial(j))))
    E = AlgMatrix.standard_projector(sig, N, r)
    P = mat_truncate(mat_mul(mat_mul(V, E, ctx), mat_adjoint(V), ctx), D)
    logger.debug("Generated test projector seed=%d n=%d N=%d r=%d D=%d", seed, n, N, r, D)

    return P, V

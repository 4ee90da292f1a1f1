# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Self
import numpy as np
from thetaplane.coefficient_ring import G_ONE, G_ZERO, GaussianRational, gaussian_with_norm
from thetaplane.errors import DiagonalizationError

Entry = GaussianRational | complex


# Constant N x N matrix, exact over Q(i) or numeric in complex doubles
@dataclass(frozen=True)
class ScalarMatrix:
    N: int
    entries: tuple[tuple[Entry, ...], ...]
    exact: bool = True

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if len(self.entries) != self.N or any(len(row) != self.N for row in self.entries):
            raise ValueError(f"entries must be {self.N}x{self.N}")


    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], exact: bool = True) -> Self:
        convert = GaussianRational.of if exact else complex
        return cls(len(rows), tuple(tuple(convert(v) for v in row) for row in rows), exact)


    @classmethod
    def from_array(cls, arr: np.ndarray) -> Self:
        arr = np.asarray(arr, dtype=complex)
        return cls(arr.shape[0], tuple(tuple(complex(v) for v in row) for row in arr), exact=False)


    @classmethod
    def identity(cls, N: int, exact: bool = True) -> Self:
        return cls.standard_projector(N, N, exact)


    @classmethod
    def standard_projector(cls, N: int, r: int, exact: bool = True) -> Self:
        one, zero = (G_ONE, G_ZERO) if exact else (1 + 0j, 0j)
        return cls(N, tuple(tuple(one if k == l and k < r else zero for l in range(N)) for k in range(N)), exact)


    # Rows are images: row k of the result is e_{perm[k]}
    @classmethod
    def permutation(cls, perm: Sequence[int], exact: bool = True) -> Self:
        N = len(perm)
        one, zero = (G_ONE, G_ZERO) if exact else (1 + 0j, 0j)
        return cls(N, tuple(tuple(one if perm[k] == l else zero for l in range(N)) for k in range(N)), exact)


    @property
    def _zero(self) -> Entry:
        return G_ZERO if self.exact else 0j


    def __getitem__(self, cell: tuple[int, int]) -> Entry:
        k, l = cell
        return self.entries[k][l]


    def columns(self) -> list[list[Entry]]:
        return [[self.entries[k][l] for k in range(self.N)] for l in range(self.N)]


    def to_array(self) -> np.ndarray:
        if self.exact:
            return np.array([[v.to_complex() for v in row] for row in self.entries], dtype=complex)

        return np.array(self.entries, dtype=complex)


    def _check(self, other: "ScalarMatrix") -> None:
        if self.N != other.N or self.exact != other.exact:
            raise ValueError("scalar matrices differ in size or mode")


    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        if not self.exact:
            return ScalarMatrix.from_array(self.to_array() @ other.to_array())
        rows = []
        for k in range(self.N):
            row = []
            for l in range(self.N):
                acc = G_ZERO
                for j in range(self.N):
                    acc = acc + self.entries[k][j] * other.entries[j][l]
                row.append(acc)
            rows.append(tuple(row))
        return ScalarMatrix(self.N, tuple(rows), True)


    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        return ScalarMatrix(
            self.N,
            tuple(tuple(a + b for a, b in zip(r1, r2, strict=True)) for r1, r2 in zip(self.entries, other.entries, strict=True)),
            self.exact,
        )


    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        return ScalarMatrix(
            self.N,
            tuple(tuple(a - b for a, b in zip(r1, r2, strict=True)) for r1, r2 in zip(self.entries, other.entries, strict=True)),
            self.exact,
        )


    def adjoint(self) -> "ScalarMatrix":
        return ScalarMatrix(
            self.N,
            tuple(tuple(self.entries[l][k].conjugate() for l in range(self.N)) for k in range(self.N)),
            self.exact,
        )


    # Largest entry size: l1 of re/im in exact mode, modulus in numeric mode
    def max_abs(self) -> Fraction | float:
        if self.exact:
            return max(v.l1() for row in self.entries for v in row)

        return float(np.max(np.abs(self.to_array())))


    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return all(v.is_zero() for row in self.entries for v in row)

        return self.max_abs() <= tol


    def is_hermitian(self, tol: float = 0.0) -> bool:
        return (self - self.adjoint()).is_zero(tol)


    def is_idempotent(self, tol: float = 0.0) -> bool:
        return (self @ self - self).is_zero(tol)


    def is_unitary(self, tol: float = 0.0) -> bool:
        eye = ScalarMatrix.identity(self.N, self.exact)
        return (self @ self.adjoint() - eye).is_zero(tol) and (self.adjoint() @ self - eye).is_zero(tol)


    # Q A Q*
    def conjugated_by(self, Q: "ScalarMatrix") -> "ScalarMatrix":
        return Q @ self @ Q.adjoint()


    def rank(self, tol: float = 1e-9) -> int:
        if self.exact:
            return len(row_echelon(self.entries)[1])

        return int(np.linalg.matrix_rank(self.to_array(), tol=tol))


    def inverse(self) -> "ScalarMatrix":
        if not self.exact:
            return ScalarMatrix.from_array(np.linalg.inv(self.to_array()))

        return ScalarMatrix(self.N, tuple(tuple(row) for row in gauss_jordan_inverse(self.entries)), True)


# --- Exact linear algebra over Q(i) ---

# Reduced row echelon form; returns (rows, pivot columns)
def row_echelon(rows: Sequence[Sequence[GaussianRational]]) -> tuple[list[list[GaussianRational]], list[int]]:
    m = [list(row) for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = G_ONE / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r], strict=True)]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def gauss_jordan_inverse(rows: Sequence[Sequence[GaussianRational]]) -> list[list[GaussianRational]]:
    N = len(rows)
    augmented = [list(row) + [G_ONE if j == k else G_ZERO for j in range(N)] for k, row in enumerate(rows)]
    reduced, pivots = row_echelon(augmented)
    if pivots[:N] != list(range(N)):
        raise ZeroDivisionError("matrix is singular")

    return [row[N:] for row in reduced]


def column_space_basis(A: ScalarMatrix) -> list[list[GaussianRational]]:
    _, pivots = row_echelon(A.entries)
    columns = A.columns()
    return [columns[c] for c in pivots]


def inner(u: Sequence[GaussianRational], v: Sequence[GaussianRational]) -> GaussianRational:
    acc = G_ZERO
    for a, b in zip(u, v, strict=True):
        acc = acc + a.conjugate() * b
    return acc


# Exact Gram-Schmidt followed by normalization inside Q(i); fails when a norm
# 1/<u,u> is not a sum of two rational squares
def orthonormalize(vectors: Sequence[Sequence[GaussianRational]]) -> list[list[GaussianRational]]:
    ortho: list[list[GaussianRational]] = []
    norms: list[GaussianRational] = []
    for v in vectors:
        w = list(v)
        for u, nu in zip(ortho, norms, strict=True):
            coeff = inner(u, w) / nu
            w = [a - coeff * b for a, b in zip(w, u, strict=True)]
        nw = inner(w, w)
        if nw.is_zero():
            continue
        ortho.append(w)
        norms.append(nw)
    result = []
    for u, nu in zip(ortho, norms, strict=True):
        scale = gaussian_with_norm(1 / nu.re)
        if scale is None:
            raise DiagonalizationError(
                f"vector norm^2 {nu.re} has no unit rescaling in Q(i); "
                "exact trivialization requires a pre-diagonalized scalar part"
            )
        result.append([a * scale for a in u])
    return result


def cayley(S: ScalarMatrix) -> ScalarMatrix:
    eye = ScalarMatrix.identity(S.N, S.exact)
    return (eye - S) @ (eye + S).inverse()

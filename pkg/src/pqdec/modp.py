"""Dense linear algebra over the prime field F_p (numpy int64).

Gaussian elimination with exact modular arithmetic; p is assumed small
enough that intermediate products fit in int64, which holds for every
desk-scale prime used here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadShape


def _as_modp(matrix: np.ndarray, p: int) -> np.ndarray:
    out = np.array(matrix, dtype=np.int64) % p
    if out.ndim != 2:
        raise BadShape(f"expected a 2-D matrix, got ndim={out.ndim}")
    return out


def row_echelon(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and its pivot column list."""
    a = _as_modp(matrix, p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        mask = a[:, c] != 0
        mask[r] = False
        if mask.any():
            a[mask] = (a[mask] - np.outer(a[mask, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(matrix: np.ndarray, p: int) -> int:
    if p == 2:
        return _rank_gf2(matrix)
    return len(row_echelon(matrix, p)[1])


def _rank_gf2(matrix: np.ndarray) -> int:
    """Rank over F_2 with rows as int bitsets (fast path for hot loops)."""
    a = np.array(matrix, dtype=np.int64) % 2
    rows = [int("".join("1" if b else "0" for b in row), 2) if row.any() else 0 for row in a]
    r = 0
    for bit in range(a.shape[1] - 1, -1, -1):
        mask = 1 << bit
        pivot = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        r += 1
    return r


@dataclass(frozen=True)
class FpInverseResult:
    """Inverse of a square F_p matrix, or an echelon certificate of singularity."""

    inverse: np.ndarray | None
    echelon: np.ndarray
    rank: int

    @property
    def singular(self) -> bool:
        return self.inverse is None


def fp_gauss_invert(matrix: np.ndarray, p: int) -> FpInverseResult:
    """Exact inverse over F_p; singular input is a valid result, not an error."""
    a = _as_modp(matrix, p)
    n, m = a.shape
    if n != m:
        raise BadShape(f"matrix is {n}x{m}, not square")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    ech, pivots = row_echelon(aug, p)
    pivots_in_a = [c for c in pivots if c < n]
    if len(pivots_in_a) < n:
        return FpInverseResult(inverse=None, echelon=ech[:, :n], rank=len(pivots_in_a))
    return FpInverseResult(inverse=ech[:, n:].copy(), echelon=ech[:, :n], rank=n)


@dataclass(frozen=True)
class FpSolveResult:
    """Outcome of solving A x = b over F_p by row reduction.

    status is "unique" (full column rank, consistent), "inconsistent"
    (a zero row with nonzero rhs), or "rank_deficient" (consistent but
    underdetermined).
    """

    status: str
    solution: np.ndarray | None
    rank: int


def fp_solve(matrix: np.ndarray, rhs: np.ndarray, p: int) -> FpSolveResult:
    a = _as_modp(matrix, p)
    b = np.array(rhs, dtype=np.int64).reshape(-1, 1) % p
    if b.shape[0] != a.shape[0]:
        raise BadShape(f"rhs length {b.shape[0]} != row count {a.shape[0]}")
    cols = a.shape[1]
    ech, pivots = row_echelon(np.concatenate([a, b], axis=1), p)
    if cols in pivots:
        return FpSolveResult(status="inconsistent", solution=None, rank=len(pivots) - 1)
    if len(pivots) < cols:
        return FpSolveResult(status="rank_deficient", solution=None, rank=len(pivots))
    x = np.zeros(cols, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = ech[row, cols]
    return FpSolveResult(status="unique", solution=x, rank=cols)


def invertible_fraction(p: int, t: int, trials: int, rng: np.random.Generator) -> float:
    """Empirical invertibility frequency of uniform t x t matrices over F_p."""
    hits = 0
    for _ in range(trials):
        mat = rng.integers(0, p, size=(t, t))
        if rank(mat, p) == t:
            hits += 1
    return hits / trials


def invertibility_product(p: int, terms: int = 64) -> float:
    """Partial product prod_{k<=terms} (1 - p^-k), the infinite-limit oracle."""
    out = 1.0
    for k in range(1, terms + 1):
        out *= 1.0 - float(p) ** (-k)
    return out

"""Linear codes over F_q, instance generation, and brute-force oracles.

A code is given by its generator matrix A (n rows, k columns) over
F_{p^m}; codewords are A @ s for messages s in F_q^k.  The minimum
distance is the minimum *pairwise* Manhattan distance, never the
minimum norm: the metric is not shift invariant, so the two differ.

Message enumeration order is lexicographic on the tuple of coordinate
images (first coordinate most significant); every deterministic
tie-break below refers to that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadShape, BudgetExceeded, LengthMismatch
from .gf import Field, FieldElement
from .metrics import manhattan_dist

DEFAULT_ENUM_BUDGET = 2**20


class LinearCode:
    """Generator matrix over F_q with rank-k columns, optional cached distance."""

    def __init__(
        self,
        field: Field,
        matrix: Sequence[Sequence[FieldElement]],
        d: int | None = None,
    ):
        self.field = field
        self.matrix = tuple(tuple(row) for row in matrix)
        self.n = len(self.matrix)
        self.k = len(self.matrix[0]) if self.n else 0
        if any(len(row) != self.k for row in self.matrix):
            raise BadShape("ragged generator matrix")
        if self.k < 1 or self.n < self.k:
            raise BadShape(f"need n >= k >= 1, got n={self.n}, k={self.k}")
        if _field_rank(self.matrix, field) < self.k:
            raise BadShape("generator columns are linearly dependent over F_q")
        self.d = d

    def encode(self, s: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        """Codeword A @ s."""
        if len(s) != self.k:
            raise LengthMismatch(f"message length {len(s)} != k = {self.k}")
        out = []
        for row in self.matrix:
            acc = self.field.zero
            for a, x in zip(row, s):
                acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def images(self) -> list[list[int]]:
        return [[e.image for e in row] for row in self.matrix]

    def __repr__(self) -> str:
        return f"LinearCode(q={self.field.q}, n={self.n}, k={self.k}, d={self.d})"


def _field_rank(matrix: Sequence[Sequence[FieldElement]], field: Field) -> int:
    rows = [list(r) for r in matrix]
    n, k = len(rows), len(rows[0])
    rank = 0
    for c in range(k):
        pivot = next((r for r in range(rank, n) if rows[r][c].image != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][c].inv()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][c].image != 0:
                coef = rows[r][c]
                rows[r] = [x - coef * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == k:
            break
    return rank


def random_code(
    field: Field, n: int, k: int, seed: int | np.random.Generator
) -> LinearCode:
    """Uniform n x k generator matrix, redrawn until its columns have rank k."""
    if not n >= k >= 1:
        raise BadShape(f"need n >= k >= 1, got n={n}, k={k}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        matrix = [[field.random_element(rng) for _ in range(k)] for _ in range(n)]
        if _field_rank(matrix, field) == k:
            return LinearCode(field, matrix)


# ----------------------------------------------------------------------
# Exhaustive enumeration oracles
# ----------------------------------------------------------------------

def message_images(field: Field, k: int, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """(q^k, k) array of message coordinate images, lexicographic order."""
    q = field.q
    total = q**k
    if total > budget:
        raise BudgetExceeded(f"q^k = {total} exceeds enumeration budget {budget}")
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    cols = [(idx // q ** (k - 1 - c)) % q for c in range(k)]
    return np.stack(cols, axis=1)


def _add_images(a: np.ndarray, b: np.ndarray, p: int, m: int) -> np.ndarray:
    """Digit-wise mod-p addition of integer images (carry-free)."""
    out = np.zeros_like(a)
    pw = 1
    for _ in range(m):
        out += (((a // pw) % p + (b // pw) % p) % p) * pw
        pw *= p
    return out


def codeword_images(code: LinearCode, budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """(q^k, n) array of codeword coordinate images, message-lex order."""
    f = code.field
    q, p, m = f.q, f.p, f.m
    msgs = message_images(f, code.k, budget)
    out = np.zeros((msgs.shape[0], code.n), dtype=np.int64)
    for i in range(code.n):
        acc = np.zeros(msgs.shape[0], dtype=np.int64)
        for j in range(code.k):
            lut = np.array(
                [(code.matrix[i][j] * f.el(v)).image for v in range(q)], dtype=np.int64
            )
            acc = _add_images(acc, lut[msgs[:, j]], p, m)
        out[:, i] = acc
    return out


def min_distance_bruteforce(
    code: LinearCode, budget: int = DEFAULT_ENUM_BUDGET
) -> int | float:
    """Exact minimum pairwise Manhattan distance over all codeword pairs.

    All pairs are compared (cost O(q^2k)); with fewer than two codewords
    the minimum over an empty pair set is +inf.  The result is cached on
    the code.
    """
    imgs = codeword_images(code, budget)
    count = imgs.shape[0]
    if count < 2:
        return math.inf
    best = None
    for i in range(count - 1):
        dists = np.abs(imgs[i + 1 :] - imgs[i]).sum(axis=1)
        cand = int(dists.min())
        if best is None or cand < best:
            best = cand
    code.d = best
    return best


def nearest_codeword_oracle(
    code: LinearCode,
    t: Sequence[FieldElement],
    budget: int = DEFAULT_ENUM_BUDGET,
) -> tuple[tuple[FieldElement, ...], int]:
    """argmin over all messages of the Manhattan distance to t.

    Ties break to the message that comes first in lexicographic image
    order, so repeated calls agree.
    """
    if len(t) != code.n:
        raise LengthMismatch(f"target length {len(t)} != n = {code.n}")
    imgs = codeword_images(code, budget)
    t_imgs = np.array([e.image for e in t], dtype=np.int64)
    dists = np.abs(imgs - t_imgs).sum(axis=1)
    best = int(np.argmin(dists))  # first minimum = lex-smallest message
    msgs = message_images(code.field, code.k, budget)
    s_star = tuple(code.field.el(int(v)) for v in msgs[best])
    return s_star, int(dists[best])


# ----------------------------------------------------------------------
# Decoding instances
# ----------------------------------------------------------------------

@dataclass
class DecodeInstance:
    """A target vector with a promised error budget, optionally planted."""

    code: LinearCode
    t: tuple[FieldElement, ...]
    w: int | None  # None means no bound (infinite promise)
    s_true: tuple[FieldElement, ...] | None = None

    @property
    def field(self) -> Field:
        return self.code.field


def plant_instance(
    code: LinearCode,
    s: Sequence[FieldElement],
    e: Sequence[FieldElement],
    w: int | None = None,
) -> DecodeInstance:
    """Instance t = A s + e with explicit error; w defaults to the actual distance."""
    t = tuple(c + err for c, err in zip(code.encode(s), e))
    actual = manhattan_dist(t, code.encode(s))
    return DecodeInstance(code=code, t=t, w=actual if w is None else w, s_true=tuple(s))


def gen_instance(
    code: LinearCode, w: int, seed: int | np.random.Generator
) -> DecodeInstance:
    """Planted instance with per-coordinate error images uniform on [0, floor(w/n)].

    Bounding each coordinate separately keeps the high digit prefixes of
    t aligned with the planted codeword, which is the property every
    decoder correctness argument uses.  Digit-wise addition can wrap a
    digit and inflate the *image* distance past w for awkward (p, w)
    combinations; the error is then redrawn so the declared bound is
    honest (never triggers for p = 2).
    """
    if w < 0:
        raise BadShape(f"error budget w = {w} must be >= 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    f = code.field
    s = tuple(f.random_element(rng) for _ in range(code.k))
    cw = code.encode(s)
    bound = w // code.n
    for _ in range(1000):
        e = tuple(f.el(int(v)) for v in rng.integers(0, bound + 1, size=code.n))
        t = tuple(c + err for c, err in zip(cw, e))
        if manhattan_dist(t, cw) <= w:
            return DecodeInstance(code=code, t=t, w=w, s_true=s)
    raise BudgetExceeded("could not sample an error meeting the declared bound")


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def instance_to_json(inst: DecodeInstance) -> dict:
    obj: dict = {
        "field": inst.field.to_json(),
        "n": inst.code.n,
        "k": inst.code.k,
        "A": inst.code.images(),
        "t": [e.image for e in inst.t],
        "w": inst.w,
    }
    if inst.s_true is not None:
        obj["s_true"] = [e.image for e in inst.s_true]
    if inst.code.d is not None:
        obj["d"] = inst.code.d
    return obj


def instance_from_json(obj: dict) -> DecodeInstance:
    f = Field.from_json(obj["field"])
    matrix = [[f.el(int(v)) for v in row] for row in obj["A"]]
    code = LinearCode(f, matrix, d=obj.get("d"))
    t = tuple(f.el(int(v)) for v in obj["t"])
    w = obj.get("w")
    s_true = None
    if "s_true" in obj and obj["s_true"] is not None:
        s_true = tuple(f.el(int(v)) for v in obj["s_true"])
    return DecodeInstance(code=code, t=t, w=None if w is None else int(w), s_true=s_true)

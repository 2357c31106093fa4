"""Arithmetic in prime-power fields F_{p^m} with digit-vector elements.

An element is stored as its length-m coefficient vector over F_p,
least-significant digit first: ``digits[i]`` is the coefficient of x^i.
The integer image of an element is the evaluation of that coefficient
polynomial at x = p, i.e. ``sum(digits[i] * p**i)``; it ranges over
[0, q-1] and the map is a bijection.  Python integers keep everything
exact at any size.

Addition is digit-wise mod p (no carries), so it does NOT agree with
integer addition of the images; e.g. in F_16 the images satisfy
1 + 3 == 2.  Multiplication is polynomial multiplication reduced by a
monic degree-m irreducible polynomial, stored as its m low coefficients
(constant term first, leading 1 implicit).

A matrix over F_q also acts as an F_p-linear operator on the stacked
digit vectors; ``expand_operator`` materialises that operator as an
(m*n) x (m*k) matrix over F_p whose (i, j) block is the multiplication
operator of entry (i, j) in the basis (1, x, ..., x^(m-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    OutOfRange,
    Reducible,
)


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine for desk-scale moduli."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ----------------------------------------------------------------------
# Polynomial helpers over F_p (dense int lists, constant term first)
# ----------------------------------------------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    # mod must be monic
    out = list(a)
    dm = len(mod) - 1
    for i in range(len(out) - 1, dm - 1, -1):
        c = out[i]
        if c == 0:
            continue
        out[i] = 0
        for j in range(dm):
            out[i - dm + j] = (out[i - dm + j] - c * mod[j]) % p
    return _poly_trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_rem(a, b, p)
    return a


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    lead_inv = pow(b[-1], -1, p)
    out = list(a)
    db = len(b) - 1
    for i in range(len(out) - 1, db - 1, -1):
        c = (out[i] * lead_inv) % p
        if c == 0:
            continue
        out[i] = 0
        for j in range(db):
            out[i - db + j] = (out[i - db + j] - c * b[j]) % p
    return _poly_trim(out)


def _poly_powmod_x(exponent: int, mod: Sequence[int], p: int) -> list[int]:
    """x**exponent reduced mod the monic polynomial ``mod``."""
    result = [1]
    base = _poly_mod([0, 1], mod, p)
    e = exponent
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _monic_polys_of_degree(d: int, p: int) -> Iterator[list[int]]:
    for enc in range(p**d):
        coeffs = []
        x = enc
        for _ in range(d):
            coeffs.append(x % p)
            x //= p
        yield coeffs + [1]


def is_irreducible(poly_full: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Exhaustive trial division up to degree m/2 for m <= 16; Rabin's
    distinct-degree criterion (via Frobenius powers of x) above.
    """
    m = len(poly_full) - 1
    if m < 1 or poly_full[-1] != 1:
        raise DegreeMismatch("expected a monic polynomial of degree >= 1")
    if m == 1:
        return True
    if poly_full[0] == 0:
        return False  # divisible by x
    if m <= 16:
        for d in range(1, m // 2 + 1):
            for cand in _monic_polys_of_degree(d, p):
                if not _poly_rem(list(poly_full), cand, p):
                    return False
        return True
    # Rabin: x^(p^m) == x mod poly, and gcd(x^(p^(m/l)) - x, poly) == 1
    # for every prime divisor l of m.
    if _poly_powmod_x(p**m, poly_full, p) != _poly_mod([0, 1], poly_full, p):
        return False
    for ell in _prime_divisors(m):
        frob = _poly_powmod_x(p ** (m // ell), poly_full, p)
        diff = _poly_sub(frob, [0, 1], p)
        g = _poly_gcd(list(poly_full), diff, p)
        if len(g) - 1 > 0:
            return False
    return True


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _poly_trim(out)


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def default_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Candidates are ordered by the integer encoding of their m low
    coefficients (constant term least significant), so the choice is
    deterministic and reproducible.  Returns the m low coefficients.
    """
    for enc in range(p**m):
        coeffs = []
        x = enc
        for _ in range(m):
            coeffs.append(x % p)
            x //= p
        if is_irreducible(coeffs + [1], p):
            return tuple(coeffs)
    raise Reducible(f"no irreducible polynomial of degree {m} over F_{p}")  # unreachable


# ----------------------------------------------------------------------
# Field and elements
# ----------------------------------------------------------------------

class Field:
    """The field F_{p^m} for prime p, with a fixed irreducible modulus.

    ``poly`` holds the m low coefficients of the monic modulus,
    constant term first.  If omitted, the lexicographically smallest
    irreducible is selected (x^2+x+1 for F_4, x^2+1 for F_9, x^4+x+1
    for F_16, ...).
    """

    __slots__ = ("p", "m", "q", "poly", "_zero", "_one")

    def __init__(self, p: int, m: int, poly: Sequence[int] | None = None):
        if not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if m < 1:
            raise DegreeMismatch(f"extension degree m = {m} must be >= 1")
        self.p = p
        self.m = m
        self.q = p**m
        if poly is None:
            self.poly = default_irreducible(p, m)
        else:
            if len(poly) != m:
                raise DegreeMismatch(
                    f"modulus needs exactly {m} low coefficients, got {len(poly)}"
                )
            coeffs = tuple(c % p for c in poly)
            if not is_irreducible(list(coeffs) + [1], p):
                raise Reducible(f"x^{m} + {list(coeffs)} is reducible over F_{p}")
            self.poly = coeffs
        self._zero = FieldElement(self, (0,) * m)
        self._one = FieldElement(self, (1,) + (0,) * (m - 1))

    # -- element construction -------------------------------------------------

    def el(self, image: int) -> FieldElement:
        """Element with the given integer image in [0, q-1]."""
        if not 0 <= image < self.q:
            raise OutOfRange(f"image {image} outside [0, {self.q - 1}]")
        digits = []
        x = image
        for _ in range(self.m):
            digits.append(x % self.p)
            x //= self.p
        return FieldElement(self, tuple(digits))

    def from_digits(self, digits: Sequence[int]) -> FieldElement:
        if len(digits) != self.m:
            raise DegreeMismatch(f"expected {self.m} digits, got {len(digits)}")
        return FieldElement(self, tuple(d % self.p for d in digits))

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    def elements(self) -> Iterator[FieldElement]:
        for image in range(self.q):
            yield self.el(image)

    def random_element(self, rng: np.random.Generator) -> FieldElement:
        """Uniform element, drawn digit-wise so huge q never overflows."""
        return FieldElement(self, tuple(int(d) for d in rng.integers(0, self.p, self.m)))

    # -- misc ------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.m == other.m
            and self.poly == other.poly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.poly))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m}, poly={list(self.poly)})"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, obj: dict) -> Field:
        return cls(int(obj["p"]), int(obj["m"]), [int(c) for c in obj["poly"]])


class FieldElement:
    """An element of F_{p^m}: an m-digit vector over F_p, LSB first."""

    __slots__ = ("field", "digits")

    def __init__(self, field: Field, digits: tuple[int, ...]):
        self.field = field
        self.digits = digits

    @property
    def image(self) -> int:
        """Integer image: the digit polynomial evaluated at p."""
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.field.p + d
        return acc

    def _check(self, other: FieldElement) -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.digits, other.digits))
        )

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.digits, other.digits))
        )

    def __neg__(self) -> FieldElement:
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.digits))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        f = self.field
        prod = _poly_mul(self.digits, other.digits, f.p)
        red = _poly_mod(prod, list(f.poly) + [1], f.p)
        red += [0] * (f.m - len(red))
        return FieldElement(f, tuple(red))

    def inv(self) -> FieldElement:
        """Multiplicative inverse via extended Euclid on polynomials."""
        f = self.field
        if self.image == 0:
            raise DivisionByZero("0 has no inverse")
        p = f.p
        # extended Euclid: r0 = modulus, r1 = self
        r0, r1 = list(f.poly) + [1], _poly_trim(list(self.digits))
        t0, t1 = [], [1]
        while r1:
            lead_inv = pow(r1[-1], -1, p)
            q: list[int] = [0] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for i in range(len(rem) - 1, len(r1) - 2, -1):
                c = (rem[i] * lead_inv) % p
                if c == 0:
                    continue
                q[i - (len(r1) - 1)] = c
                for j in range(len(r1)):
                    rem[i - (len(r1) - 1) + j] = (rem[i - (len(r1) - 1) + j] - c * r1[j]) % p
            rem = _poly_trim(rem)
            r0, r1 = r1, rem
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
        # r0 is now a nonzero constant gcd; scale t0 by its inverse
        scale = pow(r0[0], -1, p)
        t0 = [(c * scale) % p for c in t0]
        t0 += [0] * (f.m - len(t0))
        return FieldElement(f, tuple(t0[: f.m]))

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inv() ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scalar_mul(self, ell: int) -> FieldElement:
        """ell-fold field addition: digit-wise multiplication by ell mod p."""
        p = self.field.p
        return FieldElement(self.field, tuple((a * ell) % p for a in self.digits))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElement)
            and self.field == other.field
            and self.digits == other.digits
        )

    def __hash__(self) -> int:
        return hash((self.field, self.digits))

    def __repr__(self) -> str:
        return f"GF({self.field.q})[{self.image}]"


# ----------------------------------------------------------------------
# Digit-expanded linear operators
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExpandedMatrix:
    """An F_q matrix rewritten as an F_p matrix on stacked digit vectors.

    ``entries`` has shape (m*n, m*k); block (i, j) is the m x m
    multiplication-by-A[i][j] operator in the basis (1, x, ..., x^(m-1)),
    rows/columns ordered least-significant digit first.  Row m*i + l is
    the coefficient of x^l of output coordinate i.
    """

    entries: np.ndarray
    n: int
    k: int
    m: int
    p: int


def mul_operator(a: FieldElement) -> np.ndarray:
    """m x m matrix over F_p of multiplication by ``a``, basis (1, x, ...)."""
    f = a.field
    cols = []
    b = a
    x = f.from_digits([0, 1] + [0] * (f.m - 2)) if f.m > 1 else f.one
    for _ in range(f.m):
        cols.append(b.digits)
        b = b * x
    return np.array(cols, dtype=np.int64).T % f.p


def expand_operator(matrix: Sequence[Sequence[FieldElement]], field: Field) -> ExpandedMatrix:
    """Expand an n x k matrix over F_q into its (m*n) x (m*k) F_p operator.

    Defining property: entries @ digits(x) == digits(A x) for every
    x in F_q^k, with digit vectors stacked coordinate-major, LSB first.
    """
    n = len(matrix)
    k = len(matrix[0]) if n else 0
    m = field.m
    out = np.zeros((m * n, m * k), dtype=np.int64)
    for i in range(n):
        for j in range(k):
            a = matrix[i][j]
            if a.field != field:
                raise FieldMismatch("matrix entry from a different field")
            out[i * m : (i + 1) * m, j * m : (j + 1) * m] = mul_operator(a)
    return ExpandedMatrix(entries=out, n=n, k=k, m=m, p=field.p)


def top_digit_submatrix(expanded: ExpandedMatrix, r: int, rows_per_coord: int | None = None) -> np.ndarray:
    """Rows of the expanded operator for the top m-r digits of each output.

    Keeps all m*k columns: the unknown stays the full digit vector of the
    message, only the noisy low-digit rows are dropped.  ``rows_per_coord``
    is redundant (must equal m-r) and is validated when given.
    """
    m = expanded.m
    if not 0 <= r < m:
        raise OutOfRange(f"low-digit cutoff r = {r} outside [0, {m - 1}]")
    if rows_per_coord is not None and rows_per_coord != m - r:
        raise OutOfRange(f"rows_per_coord = {rows_per_coord} != m - r = {m - r}")
    rows = [i * m + ell for i in range(expanded.n) for ell in range(r, m)]
    return expanded.entries[rows, :]


def stack_digits(vec: Sequence[FieldElement]) -> np.ndarray:
    """Concatenated digit vectors of a field vector (coordinate-major, LSB first)."""
    return np.array([d for e in vec for d in e.digits], dtype=np.int64)


def unstack_digits(field: Field, flat: Sequence[int]) -> tuple[FieldElement, ...]:
    """Inverse of :func:`stack_digits`."""
    m = field.m
    if len(flat) % m:
        raise DegreeMismatch(f"digit vector length {len(flat)} not a multiple of m={m}")
    return tuple(
        field.from_digits([int(x) for x in flat[i : i + m]]) for i in range(0, len(flat), m)
    )

"""Exact arithmetic in GF(p^e) for small prime powers.

Elements are coefficient vectors of polynomials of degree < e over GF(p),
constant term first, reduced modulo a canonical monic irreducible. The
canonical modulus is the lexicographically smallest monic irreducible of
degree e, comparing coefficient tuples with the constant term most
significant.

Every element also has an integer *index* ``sum(c_i * p**i)``; the index
order is the global element order used by all enumerations downstream.
Index-coded lookup tables (``tables``) back the vectorised geometry code.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_Q = 16
DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``p**e == q``, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    # m is monic
    a = [c % p for c in a]
    d = len(m) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i in range(d + 1):
                a[k - d + i] = (a[k - d + i] - c * m[i]) % p
    return (a + [0] * d)[:d]


def _has_factor_of_degree(f: tuple[int, ...], p: int, k: int) -> bool:
    for tail in itertools.product(range(p), repeat=k):
        g = tail + (1,)
        if not any(_poly_mod(list(f), g, p)):
            return True
    return False


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Exhaustive factor search; f is monic, constant term first."""
    deg = len(f) - 1
    if deg < 1 or f[-1] != 1:
        return False
    return not any(_has_factor_of_degree(f, p, k) for k in range(1, deg // 2 + 1))


def canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    # product() yields tuples lexicographically with the first entry
    # (the constant term) most significant.
    for tail in itertools.product(range(p), repeat=e):
        f = tail + (1,)
        if is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible of degree {e} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    modulus: tuple[int, ...]
    q: int

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.e)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.e - 1))

    def element(self, index: int) -> FieldElement:
        if not 0 <= index < self.q:
            raise ValueError(f"element index {index} out of range for GF({self.q})")
        coeffs = []
        for _ in range(self.e):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FieldElement(self, tuple(coeffs))

    def __call__(self, value: int | str | FieldElement) -> FieldElement:
        """Coerce an index, a text form, or an element of this field."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return parse_element(self, value)
        return self.element(value)

    def __str__(self) -> str:
        return f"{self.p}^{self.e}" if self.e > 1 else str(self.p)


@dataclass(frozen=True, order=False)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.e or any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise ValueError(f"invalid coefficients {self.coeffs} for GF({self.spec.q})")

    @property
    def index(self) -> int:
        return sum(c * self.spec.p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __lt__(self, other: FieldElement) -> bool:
        _check_same(self, other)
        return self.index < other.index

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __pow__(self, n: int):
        return pow(self, n)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"GF({self.spec.q})[{format_element(self)}]"


def make_field(p: int, e: int = 1, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Build GF(p^e) with the canonical modulus."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("exponent must be at least 1")
    q = p**e
    if q > max_q:
        raise ValueError(f"q = {q} exceeds the supported bound {max_q}")
    return _make_field(p, e)


@functools.cache
def _make_field(p: int, e: int) -> FieldSpec:
    return FieldSpec(p, e, canonical_modulus(p, e), p**e)


def field_of_order(q: int, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    pe = prime_power(q)
    if pe is None:
        raise ValueError(f"{q} is not a prime power")
    return make_field(*pe, max_q=max_q)


def _check_same(a: FieldElement, b: FieldElement) -> None:
    if a.spec != b.spec:
        raise ValueError(f"mismatched fields GF({a.spec.q}) and GF({b.spec.q})")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    p = a.spec.p
    return FieldElement(a.spec, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    p = a.spec.p
    return FieldElement(a.spec, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))


def neg(a: FieldElement) -> FieldElement:
    p = a.spec.p
    return FieldElement(a.spec, tuple(-x % p for x in a.coeffs))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    spec = a.spec
    prod = [0] * (2 * spec.e - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    return FieldElement(spec, tuple(_poly_mod(prod, spec.modulus, spec.p)))


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse by exhaustive search."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in GF(%d)" % a.spec.q)
    one = a.spec.one
    for b in enumerate_elements(a.spec)[1:]:
        if mul(a, b) == one:
            return b
    raise AssertionError("modulus is not irreducible")


def pow(a: FieldElement, n: int) -> FieldElement:
    if n < 0:
        a, n = inv(a), -n
    result = a.spec.one
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


@functools.cache
def enumerate_elements(spec: FieldSpec) -> tuple[FieldElement, ...]:
    return tuple(spec.element(i) for i in range(spec.q))


def format_element(a: FieldElement) -> str:
    """Base-p digits, constant term first; high-order zero digits are dropped."""
    digits = list(a.coeffs)
    while len(digits) > 1 and digits[-1] == 0:
        digits.pop()
    return "".join(DIGITS[d] for d in digits)


def parse_element(spec: FieldSpec, text: str) -> FieldElement:
    text = text.strip().lower()
    if not 1 <= len(text) <= spec.e:
        raise ValueError(f"element {text!r} must have 1 to {spec.e} digits")
    try:
        digits = [DIGITS.index(ch) for ch in text]
    except ValueError:
        raise ValueError(f"bad digit in element {text!r}") from None
    if any(d >= spec.p for d in digits):
        raise ValueError(f"digit out of range for p = {spec.p} in {text!r}")
    return FieldElement(spec, tuple(digits + [0] * (spec.e - len(digits))))


def format_field(spec: FieldSpec) -> str:
    return str(spec)


def parse_field(text: str, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Parse ``"p^e"``, ``"p"`` or a plain prime power such as ``"9"``."""
    text = text.strip()
    if "^" in text:
        p, e = text.split("^", 1)
        return make_field(int(p), int(e), max_q=max_q)
    return field_of_order(int(text), max_q=max_q)


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Index-coded operation tables; entry [i, j] is the index of i op j."""

    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is unused and set to 0


@functools.cache
def tables(spec: FieldSpec) -> FieldTables:
    els = enumerate_elements(spec)
    q = spec.q
    add_t = np.empty((q, q), dtype=np.int64)
    mul_t = np.empty((q, q), dtype=np.int64)
    for a in els:
        for b in els:
            add_t[a.index, b.index] = add(a, b).index
            mul_t[a.index, b.index] = mul(a, b).index
    neg_t = np.array([neg(a).index for a in els], dtype=np.int64)
    inv_t = np.zeros(q, dtype=np.int64)
    for i in range(1, q):
        inv_t[i] = int(np.flatnonzero(mul_t[i] == 1)[0])
    for t in (add_t, mul_t, neg_t, inv_t):
        t.setflags(write=False)
    return FieldTables(add_t, mul_t, neg_t, inv_t)

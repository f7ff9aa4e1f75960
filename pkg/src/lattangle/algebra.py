"""Exact arithmetic: roots of unity, cyclotomic field elements, polynomials.

Elements of Q(zeta_n) are stored in the power basis 1, zeta, ..., zeta^(phi(n)-1)
reduced modulo the n-th cyclotomic polynomial, as an integer numerator vector
over a single positive denominator.  Mixed orders are lifted to the lcm.
"""

from __future__ import annotations

import math
import os
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import mpmath

DEFAULT_ORDER_CAP = 10_000

_order_cap = int(os.environ.get("LATTANGLE_ORDER_CAP", DEFAULT_ORDER_CAP))


class OrderCapExceeded(ValueError):
    pass


def set_order_cap(cap: int) -> None:
    global _order_cap
    if cap < 1:
        raise ValueError("order cap must be positive")
    _order_cap = int(cap)


def order_cap() -> int:
    return _order_cap


def _check_order(n: int) -> None:
    if n > _order_cap:
        raise OrderCapExceeded(f"cyclotomic order {n} exceeds cap {_order_cap}")


def as_fraction(q) -> Fraction:
    """Coerce int / Fraction / "p/q" string to Fraction."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"not a rational: {q!r}")


def fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# integer helpers


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((p, e), ...) ascending."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factorize(n))


def squarefree_part(q: Fraction) -> int:
    """Squarefree integer s with q = s * r^2 for some rational r (sign kept)."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("zero has no squarefree part")
    m = abs(q.numerator * q.denominator)
    s = 1
    for p, e in factorize(m):
        if e % 2:
            s *= p
    return s if q > 0 else -s


def is_rational_square(q: Fraction) -> bool:
    q = as_fraction(q)
    if q < 0:
        return False
    return all(math.isqrt(v) ** 2 == v for v in (q.numerator, q.denominator))


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = as_fraction(q)
    if not is_rational_square(q):
        return None
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


# ---------------------------------------------------------------------------
# roots of unity


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """exp(2*pi*i * num/den), always in reduced form."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError("den must be positive")
        k, n = self.num % self.den, self.den
        g = math.gcd(k, n) if k else n
        if (k // g, n // g) != (self.num, self.den):
            raise ValueError(f"non-canonical root {self.num}/{self.den}; use ru_make")

    @property
    def order(self) -> int:
        return self.den

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        n = lcm(self.den, other.den)
        return ru_make(self.num * (n // self.den) + other.num * (n // other.den), n)

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        return self * other.inverse()

    def __pow__(self, e: int) -> "RootOfUnity":
        return ru_make(self.num * e, self.den)

    def inverse(self) -> "RootOfUnity":
        return ru_make(-self.num, self.den)

    conj = inverse

    def is_one(self) -> bool:
        return self.den == 1

    def sqrt(self) -> "RootOfUnity":
        """The square root with argument in [0, pi)."""
        return ru_make(self.num, 2 * self.den)

    def to_cyclo(self, order: int | None = None) -> "Cyclo":
        n = self.den if order is None else order
        if n % self.den:
            raise ValueError(f"order {n} is not a multiple of {self.den}")
        return Cyclo.root(self.num * (n // self.den), n)

    def amplitude(self) -> Fraction:
        """Angle alpha/pi in [0, 1) with exp(2 i alpha) equal to this root."""
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, data) -> "RootOfUnity":
        return ru_make(int(data["num"]), int(data["den"]))

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        """Parse "k/n" (or "k" meaning k/1)."""
        k, _, n = text.strip().partition("/")
        return ru_make(int(k), int(n) if n else 1)


def ru_make(k: int, n: int) -> RootOfUnity:
    """Reduced representative of exp(2*pi*i*k/n)."""
    if n < 1:
        raise ValueError("n must be positive")
    k %= n
    if k == 0:
        return RootOfUnity(0, 1)
    g = math.gcd(k, n)
    return RootOfUnity(k // g, n // g)


def roots_of_order_dividing(n: int) -> list[RootOfUnity]:
    return [ru_make(k, n) for k in range(n)]


# ---------------------------------------------------------------------------
# cyclotomic polynomials and power tables


_cache_lock = threading.Lock()


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the coordinates of zeta_n^k (k = 0..n-1) in the power basis."""
    _check_order(n)
    with _cache_lock:
        phi = euler_phi(n)
        cp = cyclotomic_poly(n)
        rows = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(n):
            rows.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(phi):
                    cur[j] -= top * cp[j]
        return tuple(rows)


def _normalize(nums: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-v for v in nums]
        den = -den
    g = den
    for v in nums:
        if g == 1:
            break
        g = math.gcd(g, v)
    if g > 1:
        nums = [v // g for v in nums]
        den //= g
    return tuple(nums), den


Scalar = Union[int, Fraction]


class Cyclo:
    """Element of the cyclotomic field Q(zeta_n).

    Equality and hashing are field-level: elements given at different orders
    compare equal when they coincide after lifting to a common order.
    """

    __slots__ = ("order", "nums", "den", "_hash")

    def __init__(self, order: int, coords: Iterable = (), _raw: tuple | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        _check_order(order)
        self.order = order
        self._hash = None
        if _raw is not None:
            self.nums, self.den = _raw
            return
        phi = euler_phi(order)
        coords = [as_fraction(c) for c in coords]
        if len(coords) > phi:
            raise ValueError("too many coordinates for this order; use from_poly")
        coords += [Fraction(0)] * (phi - len(coords))
        den = lcm(*(c.denominator for c in coords)) if coords else 1
        self.nums, self.den = _normalize([c.numerator * (den // c.denominator) for c in coords], den)

    # -- constructors -------------------------------------------------------

    @classmethod
    def _make(cls, order: int, nums: Sequence[int], den: int = 1) -> "Cyclo":
        return cls(order, _raw=_normalize(nums, den))

    @classmethod
    def zero(cls, order: int = 1) -> "Cyclo":
        return cls._make(order, [0] * euler_phi(order))

    @classmethod
    def one(cls, order: int = 1) -> "Cyclo":
        return cls.rational(1, order)

    @classmethod
    def rational(cls, q, order: int = 1) -> "Cyclo":
        q = as_fraction(q)
        nums = [0] * euler_phi(order)
        nums[0] = q.numerator
        return cls._make(order, nums, q.denominator)

    @classmethod
    def root(cls, k: int, n: int) -> "Cyclo":
        """zeta_n^k."""
        return cls._make(n, power_table(n)[k % n])

    @classmethod
    def from_poly(cls, coeffs: Sequence, order: int) -> "Cyclo":
        """sum_j coeffs[j] * zeta_order^j, any length."""
        coeffs = [as_fraction(c) for c in coeffs]
        den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        table = power_table(order)
        acc = [0] * euler_phi(order)
        for j, c in enumerate(coeffs):
            if c:
                v = c.numerator * (den // c.denominator)
                for i, t in enumerate(table[j % order]):
                    if t:
                        acc[i] += v * t
        return cls._make(order, acc, den)

    @classmethod
    def coerce(cls, value, order: int = 1) -> "Cyclo":
        if isinstance(value, Cyclo):
            return value
        if isinstance(value, RootOfUnity):
            return value.to_cyclo()
        return cls.rational(value, order)

    # -- coordinates --------------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.den) for v in self.nums)

    @property
    def phi(self) -> int:
        return len(self.nums)

    def lift(self, order: int) -> "Cyclo":
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} to {order}")
        step = order // self.order
        table = power_table(order)
        acc = [0] * euler_phi(order)
        for j, v in enumerate(self.nums):
            if v:
                for i, t in enumerate(table[(j * step) % order]):
                    if t:
                        acc[i] += v * t
        return Cyclo(order, _raw=(tuple(acc), self.den))

    def _pair(self, other) -> tuple["Cyclo", "Cyclo"]:
        if not isinstance(other, Cyclo):
            other = Cyclo.coerce(other, self.order)
            if other.order != self.order:
                other = other.lift(lcm(self.order, other.order))
        if other.order == self.order:
            return self, other
        n = lcm(self.order, other.order)
        _check_order(n)
        return self.lift(n), other.lift(n)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (Cyclo, int, Fraction, RootOfUnity)):
            return NotImplemented
        a, b = self._pair(other)
        d = lcm(a.den, b.den)
        fa, fb = d // a.den, d // b.den
        return Cyclo._make(a.order, [x * fa + y * fb for x, y in zip(a.nums, b.nums)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, _raw=(tuple(-v for v in self.nums), self.den))

    def __sub__(self, other):
        if not isinstance(other, (Cyclo, int, Fraction, RootOfUnity)):
            return NotImplemented
        return self + (-Cyclo.coerce(other, self.order))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            return Cyclo._make(self.order, [v * q.numerator for v in self.nums], self.den * q.denominator)
        if not isinstance(other, (Cyclo, RootOfUnity)):
            return NotImplemented
        a, b = self._pair(other)
        n = a.order
        phi = len(a.nums)
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        prod[i + j] += x * y
        acc = prod[:phi]
        table = power_table(n)
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for i, t in enumerate(table[k % n]):
                    if t:
                        acc[i] += c * t
        return Cyclo._make(n, acc, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero in Q(zeta)")
            return self * (1 / q)
        if not isinstance(other, (Cyclo, RootOfUnity)):
            return NotImplemented
        return self * Cyclo.coerce(other).inv()

    def __rtruediv__(self, other):
        return Cyclo.coerce(other, self.order) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = Cyclo.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inv(self) -> "Cyclo":
        """Multiplicative inverse via the extended Euclidean algorithm mod Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        f = [Fraction(v, self.den) for v in self.nums]
        g = [Fraction(c) for c in cyclotomic_poly(self.order)]
        # invariant: r0 = s0*f (mod g), r1 = s1*f (mod g)
        r0, s0 = _ptrim(g), [Fraction(0)]
        r1, s1 = _ptrim(f), [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return Cyclo.from_poly([x / c for x in s1], self.order)

    def conj(self) -> "Cyclo":
        """Complex conjugation zeta -> zeta^-1."""
        return self.galois(-1)

    def galois(self, k: int) -> "Cyclo":
        """Automorphism zeta_n -> zeta_n^k (k coprime to n)."""
        n = self.order
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit mod {n}")
        table = power_table(n)
        acc = [0] * len(self.nums)
        for j, v in enumerate(self.nums):
            if v:
                for i, t in enumerate(table[(j * k) % n]):
                    if t:
                        acc[i] += v * t
        return Cyclo(n, _raw=(tuple(acc), self.den))

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.nums[0], self.den)

    def is_real(self) -> bool:
        return self == self.conj()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        if isinstance(other, RootOfUnity):
            other = other.to_cyclo()
        if not isinstance(other, Cyclo):
            return NotImplemented
        if self.order == other.order:
            return self.den == other.den and self.nums == other.nums
        a, b = self._pair(other)
        return a.den == b.den and a.nums == b.nums

    def __hash__(self) -> int:
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r.order, r.nums, r.den)) if not r.is_rational() else hash(r.rational_value())
        return self._hash

    def reduced(self) -> "Cyclo":
        """Same element expressed at the smallest order containing it."""
        if self.is_rational():
            return Cyclo.rational(self.rational_value())
        for d in divisors(self.order)[:-1]:
            if d % 4 == 2:
                continue
            sub = _descend(self, d)
            if sub is not None:
                return sub
        return self

    # -- rendering ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Cyclo({self.order}, [{', '.join(fraction_str(c) for c in self.coords)}])"

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coords):
            if c:
                mono = "" if j == 0 else (f"z{self.order}" if j == 1 else f"z{self.order}^{j}")
                coef = str(c)
                parts.append(coef if not mono else (mono if c == 1 else f"-{mono}" if c == -1 else f"{coef}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def to_json(self) -> dict:
        return {"order": self.order, "coords": [fraction_str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, data) -> "Cyclo":
        return cls(int(data["order"]), [Fraction(c) for c in data["coords"]])


def _descend(x: Cyclo, d: int) -> Cyclo | None:
    """Express x in Q(zeta_d) if it lies there, else None."""
    n = x.order
    step = n // d
    for k in range(1, n):
        if k % d == 1 % d and math.gcd(k, n) == 1 and k != 1:
            if x.galois(k) != x:
                return None
    # solve sum_j c_j zeta_d^j = x with j < phi(d), column j = zeta_n^(j*step)
    table = power_table(n)
    phid = euler_phi(d)
    cols = [table[(j * step) % n] for j in range(phid)]
    sol = solve_rational([list(c) for c in cols], list(x.coords))
    if sol is None:
        return None
    return Cyclo(d, sol)


# ---------------------------------------------------------------------------
# dense polynomial helpers over Q (low-to-high coefficient lists)


def _ptrim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _psub(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    a = list(a)
    b = _ptrim(b)
    if len(a) < len(b):
        return [Fraction(0)], _ptrim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _ptrim(q), _ptrim(a[: len(b) - 1] or [Fraction(0)])


# ---------------------------------------------------------------------------
# exact linear algebra over Q


def row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[as_fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(row_reduce([list(v) for v in vectors])[1])


def solve_rational(columns: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Unique or particular solution c of sum_j c_j columns[j] = rhs, None if inconsistent."""
    ncols = len(columns)
    nrows = len(rhs)
    aug = [[as_fraction(columns[j][i]) for j in range(ncols)] + [as_fraction(rhs[i])] for i in range(nrows)]
    red, piv = row_reduce(aug)
    if ncols in piv:
        return None
    sol = [Fraction(0)] * ncols
    for row, c in zip(red, piv):
        sol[c] = row[-1]
    return sol


def nullspace(columns: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of {c : sum_j c_j columns[j] = 0} over Q."""
    ncols = len(columns)
    if ncols == 0:
        return []
    nrows = len(columns[0])
    mat = [[as_fraction(columns[j][i]) for j in range(ncols)] for i in range(nrows)]
    red, piv = row_reduce(mat) if nrows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, c in zip(red, piv):
            vec[c] = -row[f]
        basis.append(vec)
    return basis


def common_order(*elements) -> int:
    n = 1
    for e in elements:
        if isinstance(e, Cyclo):
            n = lcm(n, e.order)
        elif isinstance(e, RootOfUnity):
            n = lcm(n, e.den)
    return n


def coordinate_matrix(elements: Sequence, order: int | None = None) -> list[list[Fraction]]:
    """Coordinate vectors of the elements in a common power basis."""
    n = order or common_order(*elements)
    return [list(Cyclo.coerce(e).lift(n).coords) for e in elements]


def q_rank(elements: Sequence) -> int:
    """Dimension of the Q-span of the given field elements."""
    return rank(coordinate_matrix(elements))


class _Indeterminate:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INDETERMINATE"

    def __bool__(self) -> bool:
        return False


INDETERMINATE = _Indeterminate()


def rational_ratio(u, v):
    """rho in Q with u = rho*v; INDETERMINATE when u = v = 0; None otherwise."""
    u, v = Cyclo.coerce(u)._pair(v)
    if v.is_zero():
        return INDETERMINATE if u.is_zero() else None
    p = next(i for i, x in enumerate(v.nums) if x)
    rho = Fraction(u.nums[p] * v.den, u.den * v.nums[p])
    if all(a * rho.denominator * v.den == b * rho.numerator * u.den for a, b in zip(u.nums, v.nums)):
        return rho
    return None


def as_root_of_unity(x) -> RootOfUnity | None:
    """The root of unity equal to x, if x is one."""
    x = Cyclo.coerce(x)
    n = lcm(2, x.order)
    table = power_table(n)
    y = x.lift(n)
    if y.den != 1:
        return None
    for k in range(n):
        if table[k] == y.nums:
            return ru_make(k, n)
    return None


# ---------------------------------------------------------------------------
# minimal polynomial


def min_poly(x) -> "MPoly":
    """Monic minimal polynomial of x over Q, as a univariate MPoly in T."""
    x = Cyclo.coerce(x)
    powers = [Cyclo.one(x.order)]
    while True:
        cur = powers[-1] * x
        sol = solve_rational([list(p.coords) for p in powers], list(cur.coords))
        if sol is not None:
            coeffs = [-c for c in sol] + [Fraction(1)]
            return MPoly.univariate(coeffs, "T")
        powers.append(cur)


# ---------------------------------------------------------------------------
# numeric embedding (display and branch selection only)


@dataclass(frozen=True)
class ComplexApprox:
    re: mpmath.mpf
    im: mpmath.mpf
    err: mpmath.mpf

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def abs(self) -> mpmath.mpf:
        return mpmath.sqrt(self.re**2 + self.im**2)

    def im_sign(self) -> int:
        """Sign of the imaginary part, 0 if not certified by the error bound."""
        if self.im > self.err:
            return 1
        if self.im < -self.err:
            return -1
        return 0

    def re_sign(self) -> int:
        if self.re > self.err:
            return 1
        if self.re < -self.err:
            return -1
        return 0


_mp_lock = threading.Lock()


def embed(x, precision: int = 64) -> ComplexApprox:
    """Image of x under zeta_n -> exp(2 pi i/n), with an error bound."""
    if precision < 60:
        raise ValueError("precision must be at least 60 bits")
    x = Cyclo.coerce(x)
    if x.is_zero():
        z = mpmath.mpf(0)
        return ComplexApprox(z, z, z)
    coords = x.coords
    weight = sum(abs(c) for c in coords)
    guard = 16 + max(1, len(coords)).bit_length() + max(1, int(weight)).bit_length()
    with _mp_lock, mpmath.workprec(precision + guard):
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for j, c in enumerate(coords):
            if c:
                cq = mpmath.mpf(c.numerator) / c.denominator
                re += cq * mpmath.cospi(mpmath.mpf(2 * j) / x.order)
                im += cq * mpmath.sinpi(mpmath.mpf(2 * j) / x.order)
    with _mp_lock, mpmath.workprec(precision):
        err = mpmath.ldexp(mpmath.mpf(1), -precision) * max(1, int(weight) + 1)
        re = +re
        im = +im
    return ComplexApprox(re, im, err)


def certified_embed(x, precision: int = 64, max_precision: int = 4096) -> ComplexApprox:
    """Embedding refined until the signs of nonzero real/imaginary parts are certified."""
    x = Cyclo.coerce(x)
    real_zero = (x + x.conj()).is_zero()
    imag_zero = (x - x.conj()).is_zero()
    prec = precision
    while True:
        e = embed(x, prec)
        if (real_zero or e.re_sign()) and (imag_zero or e.im_sign()):
            return e
        if prec >= max_precision:
            raise ArithmeticError("could not certify sign within precision limit")
        prec *= 2


def real_part(x) -> Cyclo:
    x = Cyclo.coerce(x)
    return (x + x.conj()) / 2


def imag_sign(x) -> int:
    """Exact zero test, certified numeric sign otherwise."""
    x = Cyclo.coerce(x)
    if (x - x.conj()).is_zero():
        return 0
    return certified_embed(x).im_sign()


def real_sign(x) -> int:
    x = Cyclo.coerce(x)
    if (x + x.conj()).is_zero():
        return 0
    return certified_embed(x).re_sign()


# ---------------------------------------------------------------------------
# multivariate (Laurent) polynomials


Coeff = Union[Fraction, Cyclo]


def _is_zero_coeff(c) -> bool:
    return c.is_zero() if isinstance(c, Cyclo) else c == 0


class MPoly:
    """Sparse multivariate Laurent polynomial with Fraction or Cyclo coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Coeff] | None = None):
        self.variables = tuple(variables)
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != len(self.variables):
                raise ValueError("exponent vector length mismatch")
            if not isinstance(c, Cyclo):
                c = as_fraction(c)
            if not _is_zero_coeff(c):
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, variables: Sequence[str] = ()) -> "MPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MPoly":
        variables = tuple(variables) if variables else (name,)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {e: Fraction(1)})

    @classmethod
    def gens(cls, *names: str) -> tuple["MPoly", ...]:
        return tuple(cls.var(n, names) for n in names)

    @classmethod
    def univariate(cls, coeffs: Sequence, name: str = "T") -> "MPoly":
        return cls((name,), {(i,): c for i, c in enumerate(coeffs)})

    # -- variable handling --------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        for v in missing:
            i = self.variables.index(v)
            if any(e[i] for e in self.terms):
                raise ValueError(f"variable {v} in use")
        idx = [self.variables.index(v) if v in self.variables else None for v in variables]
        return MPoly(variables, {tuple(e[i] if i is not None else 0 for i in idx): c for e, c in self.terms.items()})

    def _align(self, other) -> tuple["MPoly", "MPoly"]:
        if not isinstance(other, MPoly):
            other = MPoly.const(other, self.variables)
        if other.variables == self.variables:
            return self, other
        merged = list(self.variables) + [v for v in other.variables if v not in self.variables]
        return self.with_variables(merged), other.with_variables(merged)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (MPoly, int, Fraction, Cyclo)):
            return NotImplemented
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out[e] + c if e in out else c
        return MPoly(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (MPoly, int, Fraction, Cyclo)):
            return NotImplemented
        return self + (-other if isinstance(other, MPoly) else -Cyclo.coerce(other) if isinstance(other, Cyclo) else -as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return MPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return MPoly(a.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            inv = (1 / as_fraction(other)) if not isinstance(other, Cyclo) else other.inv()
            return self * inv
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers only for monomials")
            (ex, c), = self.terms.items()
            cinv = c.inv() if isinstance(c, Cyclo) else 1 / c
            return MPoly(self.variables, {tuple(-v for v in ex): cinv}) ** (-e)
        out = MPoly.const(Fraction(1), self.variables)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- predicates and queries --------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Cyclo)):
            other = MPoly.const(other, self.variables)
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def coefficient(self, exps: Sequence[int]) -> Coeff:
        return self.terms.get(tuple(exps), Fraction(0))

    def coeffs_by(self, names: Sequence[str]) -> dict[tuple, "MPoly"]:
        """Group by exponents of `names`; values are polys in the remaining variables."""
        idx = [self.variables.index(n) for n in names]
        rest = [v for v in self.variables if v not in names]
        ridx = [self.variables.index(v) for v in rest]
        groups: dict[tuple, dict] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            groups.setdefault(key, {})[tuple(e[i] for i in ridx)] = c
        return {k: MPoly(rest, t) for k, t in sorted(groups.items())}

    def univariate_coeffs(self) -> list[Coeff]:
        if len(self.variables) != 1:
            raise ValueError("not univariate")
        if not self.terms:
            return [Fraction(0)]
        d = self.degree()
        if min(e[0] for e in self.terms) < 0:
            raise ValueError("Laurent polynomial")
        return [self.terms.get((i,), Fraction(0)) for i in range(d + 1)]

    # -- evaluation and substitution ---------------------------------------

    def eval(self, values: Mapping[str, object]):
        """Evaluate at a point; every variable must be bound."""
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise KeyError(f"unbound variables: {missing}")
        vals = [values[v] for v in self.variables]
        vals = [v.to_cyclo() if isinstance(v, RootOfUnity) else v for v in vals]
        powcache: dict = {}

        def pw(i, k):
            key = (i, k)
            if key not in powcache:
                v = vals[i]
                powcache[key] = v**k if not isinstance(v, int) or k >= 0 else Fraction(v) ** k
            return powcache[key]

        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def substitute(self, mapping: Mapping[str, object]) -> "MPoly":
        """Replace some variables by MPolys or scalars; other variables are kept."""
        keep = [v for v in self.variables if v not in mapping]
        new_vars = list(keep)
        for val in mapping.values():
            if isinstance(val, MPoly):
                new_vars += [v for v in val.variables if v not in new_vars]
        images = []
        for v in self.variables:
            if v in mapping:
                val = mapping[v]
                if isinstance(val, RootOfUnity):
                    val = val.to_cyclo()
                if not isinstance(val, MPoly):
                    val = MPoly.const(val, new_vars)
                images.append(val.with_variables(new_vars))
            else:
                images.append(MPoly.var(v, new_vars))
        out = MPoly(new_vars)
        cache: dict = {}
        for e, c in self.terms.items():
            term = MPoly.const(c, new_vars)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def map_coeffs(self, fn) -> "MPoly":
        return MPoly(self.variables, {e: fn(c) for e, c in self.terms.items()})

    # -- serialization ------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, Coeff]]:
        return sorted(self.terms.items(), key=lambda t: tuple(-x for x in t[0]))

    def to_json(self) -> dict:
        def enc(c):
            return c.to_json() if isinstance(c, Cyclo) else fraction_str(c)

        return {"variables": list(self.variables), "terms": [[list(e), enc(c)] for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data) -> "MPoly":
        def dec(c):
            return Cyclo.from_json(c) if isinstance(c, dict) else Fraction(c)

        return cls(data["variables"], {tuple(e): dec(c) for e, c in data["terms"]})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            cs = f"({c})" if isinstance(c, Cyclo) else str(c)
            parts.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def parse_poly(text: str, variables: Sequence[str]) -> MPoly:
    """Parse an integer-coefficient polynomial expression such as "-a^2 b (a - c)".

    Juxtaposition means multiplication; ^ and ** are powers.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse near {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        tokens.append(("num", int(num)) if num else ("var", name) if name else ("op", "^" if op == "**" else op))
        pos = m.end()
    variables = tuple(variables)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        i += 1
        return tokens[i - 1]

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        out = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            out = out + t if op == "+" else out - t
        return out

    def term():
        out = power()
        while True:
            kind, val = peek()
            if (kind, val) == ("op", "*"):
                take()
                out = out * power()
            elif (kind, val) == ("op", "/"):
                take()
                den = power()
                if den.degree() != 0:
                    raise ValueError("only constant divisors supported")
                out = out / den.coefficient((0,) * len(variables))
            elif kind in ("num", "var") or (kind, val) == ("op", "("):
                out = out * power()
            else:
                return out

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise ValueError("exponent must be an integer literal")
            return base**val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return MPoly.const(Fraction(val), variables)
        if kind == "var":
            if val not in variables:
                raise ValueError(f"unknown variable {val}")
            return MPoly.var(val, variables)
        if (kind, val) == ("op", "("):
            out = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return out
        if (kind, val) == ("op", "-"):
            return -power()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if i != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return result

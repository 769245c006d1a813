"""Exact arithmetic in cyclotomic fields Q(zeta_M), plus valuations of 1 - zeta.

Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) reduced modulo
the M-th cyclotomic polynomial, so equality is plain coefficient equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

from .arith import divisors, euler_phi, factorize, is_prime, multiplicity
from .errors import DivisionByZero, DomainError, ModulusMismatch, NotRational

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# integer polynomials as coefficient tuples, lowest degree first

def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dn)
    for k in range(len(out) - 1, -1, -1):
        c, r = divmod(num[k + dn], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple[int, ...]:
    """Coefficients of Phi_M, constant term first."""
    if M < 1:
        raise ValueError(f"cyclotomic polynomial needs M >= 1, got {M}")
    poly = [-1] + [0] * (M - 1) + [1]
    for d in divisors(M):
        if d != M:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(M: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of z^k for k = 0 .. M-1."""
    phi = euler_phi(M)
    cyc = cyclotomic_polynomial(M)
    table = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(M):
        table.append(tuple(cur))
        # multiply by z, then reduce the z^phi term (Phi_M is monic)
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * cyc[i] for i, c in enumerate(cur)]
    return tuple(table)


def _reduce(M: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    phi = euler_phi(M)
    if len(coeffs) <= phi:
        return tuple(coeffs) + (Fraction(0),) * (phi - len(coeffs))
    cyc = cyclotomic_polynomial(M)
    c = list(coeffs)
    for k in range(len(c) - 1, phi - 1, -1):
        top = c[k]
        if top:
            base = k - phi
            for i in range(phi + 1):
                if cyc[i]:
                    c[base + i] -= top * cyc[i]
    return tuple(c[:phi])


@dataclass(frozen=True)
class CycNumber:
    """An element of Q(zeta_M) in the reduced power basis."""

    modulus: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if len(self.coeffs) != euler_phi(self.modulus):
            raise ValueError(
                f"Q(zeta_{self.modulus}) needs {euler_phi(self.modulus)} coefficients, "
                f"got {len(self.coeffs)}"
            )
        if not all(type(c) is Fraction for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, M: int) -> CycNumber:
        return cls(M, (Fraction(0),) * euler_phi(M))

    @classmethod
    def rational(cls, M: int, value: Rational) -> CycNumber:
        return cls(M, (Fraction(value),) + (Fraction(0),) * (euler_phi(M) - 1))

    @classmethod
    def from_exponents(cls, M: int, weights: dict[int, Rational] | Iterable[tuple[int, Rational]]) -> CycNumber:
        """sum of w * zeta_M^e over the given (exponent, weight) pairs."""
        items = weights.items() if isinstance(weights, dict) else weights
        table = _power_table(M)
        acc = [Fraction(0)] * euler_phi(M)
        for e, w in items:
            if not w:
                continue
            w = Fraction(w)
            for i, c in enumerate(table[e % M]):
                if c:
                    acc[i] += w * c
        return cls(M, tuple(acc))

    # field operations ---------------------------------------------------------
    def _check(self, other: CycNumber) -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatch(
                f"Q(zeta_{self.modulus}) and Q(zeta_{other.modulus}); embed explicitly first"
            )

    def _coerce(self, other) -> CycNumber:
        if isinstance(other, CycNumber):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CycNumber.rational(self.modulus, other)
        return NotImplemented

    def __add__(self, other) -> CycNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNumber(self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycNumber:
        return CycNumber(self.modulus, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> CycNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycNumber(self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> CycNumber:
        return (-self) + other

    def __mul__(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.modulus, tuple(a * other for a in self.coeffs))
        if not isinstance(other, CycNumber):
            return NotImplemented
        self._check(other)
        prod_ = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod_[i + j] += a * b
        return CycNumber(self.modulus, _reduce(self.modulus, prod_))

    __rmul__ = __mul__

    def inverse(self) -> CycNumber:
        return cyc_inv(self)

    def __truediv__(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero in Q(zeta_M)")
            return self * (1 / Fraction(other))
        return self * cyc_inv(other)

    def __pow__(self, k: int) -> CycNumber:
        if k < 0:
            return cyc_inv(self) ** (-k)
        result = CycNumber.rational(self.modulus, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, CycNumber):
            return self.modulus == other.modulus and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.modulus, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # conversions -------------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def embed(self, M: int) -> CycNumber:
        """Image under Q(zeta_m) -> Q(zeta_M), zeta_m -> zeta_M^(M/m)."""
        m = self.modulus
        if M % m:
            raise ModulusMismatch(f"Q(zeta_{m}) does not embed in Q(zeta_{M})")
        step = M // m
        return CycNumber.from_exponents(M, {i * step: c for i, c in enumerate(self.coeffs) if c})

    def conjugate(self) -> CycNumber:
        """Complex conjugate (zeta -> zeta^-1)."""
        M = self.modulus
        return CycNumber.from_exponents(M, {-i: c for i, c in enumerate(self.coeffs) if c})

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.modulus), math.sin(2 * math.pi / self.modulus))
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"CycNumber({self.modulus}, {self})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def cyc_add(a: CycNumber, b: CycNumber) -> CycNumber:
    return a + b


def cyc_mul(a: CycNumber, b: CycNumber) -> CycNumber:
    return a * b


def cyc_inv(a: CycNumber) -> CycNumber:
    """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
    if not a:
        raise DivisionByZero("zero has no inverse in Q(zeta_M)")
    M = a.modulus
    # invariant: s_k * g == r_k (mod Phi_M); stops when r is a nonzero constant
    r0 = [Fraction(c) for c in cyclotomic_polynomial(M)]
    r1 = _trim(list(a.coeffs))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, _trim(rem)
        s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
    if r1[0] == 0:
        raise ArithmeticError(f"non-invertible element in Q(zeta_{M}); Phi_M not irreducible?")
    inv = [c / r1[0] for c in s1]
    return CycNumber(M, _reduce(M, inv))


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + db] / b[-1]
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return q, a[:db] if db else [Fraction(0)]


def zeta_power(M: int, k: int) -> CycNumber:
    """zeta_M^k in the reduced power basis."""
    if M < 1:
        raise ValueError("modulus must be positive")
    return _zeta_power(M, k % M)


@lru_cache(maxsize=4096)
def _zeta_power(M: int, k: int) -> CycNumber:
    return CycNumber(M, tuple(Fraction(c) for c in _power_table(M)[k]))


def rational_part(a: CycNumber) -> Fraction:
    """The value of ``a`` as a rational number; raises NotRational otherwise."""
    if not a.is_rational():
        raise NotRational(f"{a} in Q(zeta_{a.modulus}) is not rational")
    return a.coeffs[0]


# ---------------------------------------------------------------------------
# valuations in Z_p[zeta]

@dataclass(frozen=True)
class RamificationContext:
    """Valuation data for R_p = Z_p[zeta_{N|h|}] with p^n_i exactly dividing N.

    Valuations are normalized so that v(1 - zeta_{p^n_i}) = 1, hence
    v(p) = phi(p^n_i).
    """

    p: int
    n_i: int
    h_order: int = 1
    N: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.n_i < 1:
            raise DomainError("n_i must be at least 1")
        if self.h_order < 1:
            raise DomainError("|h| must be positive")
        N = self.p**self.n_i if self.N is None else self.N
        object.__setattr__(self, "N", N)
        if N % self.p or multiplicity(self.p, N) != self.n_i:
            raise DomainError(f"{self.p}^{self.n_i} does not exactly divide N={N}")
        if gcd(self.h_order, N) != 1:
            raise DomainError(f"h of order {self.h_order} is not {N}-regular")

    @classmethod
    def for_order(cls, N: int, p: int, h_order: int = 1) -> RamificationContext:
        if N < 1 or N % p:
            raise DomainError(f"{p} does not divide {N}")
        return cls(p=p, n_i=multiplicity(p, N), h_order=h_order, N=N)

    @property
    def big_modulus(self) -> int:
        return self.N * self.h_order

    @property
    def vp(self) -> int:
        """v(p) = phi(p^n_i)."""
        return euler_phi(self.p**self.n_i)


def one_minus_zeta_valuation(t: int, ctx: RamificationContext) -> Fraction | float:
    """v(1 - zeta_t) in the normalization of ``ctx``; ``math.inf`` when t = 1."""
    if t < 1 or ctx.big_modulus % t:
        raise DomainError(f"t={t} does not divide N*|h|={ctx.big_modulus}")
    if t == 1:
        return math.inf
    fac = factorize(t)
    if len(fac) > 1 or fac[0][0] != ctx.p:
        return Fraction(0)
    l = fac[0][1]
    if l > ctx.n_i:
        raise DomainError(f"p^{l} exceeds the ramified part p^{ctx.n_i}")
    return Fraction(ctx.vp, euler_phi(ctx.p**l))

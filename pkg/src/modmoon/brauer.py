"""p-Brauer characters of finite length modules and the Hauptmodul coefficients.

A finite length module over Z_p[zeta] with an action of an N-regular element
h is recorded only by its composition factors: each simple factor is the
residue field with h acting by zeta_|h|^m. Its p-Brauer character is

    (1 / v(p)) * sum over factors of zeta_|h|^m.

The super character of the Tate cohomology of g on a lattice A decomposes as
a combination sum_k a_{k,p} Tr(g^k h | A). The coefficients are computed two
ways: the closed form in :func:`coeff_closed_form`, and an inverse discrete
Fourier transform over Z/N of the rank one characters in
:func:`coeff_dft_oracle`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple

from .arith import divisors, euler_phi, is_prime, multiplicity
from .cyclotomic import CycNumber, RamificationContext, rational_part, zeta_power
from .errors import NotAFactor
from .tate import rnm_cohomology

BrauerValue = CycNumber


@dataclass(frozen=True)
class TorsionCycModule:
    """Composition factors ``(eigen_exponent, multiplicity)`` of a finite length module.

    ``ramification`` is the extra ramification index picked up by base change;
    the valuation of p is ``ctx.vp * ramification``.
    """

    ctx: RamificationContext
    factors: tuple[tuple[int, int], ...] = ()
    ramification: int = 1

    def __post_init__(self):
        h = self.ctx.h_order
        clean = []
        for m, mult in self.factors:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult:
                clean.append((m % h, mult))
        object.__setattr__(self, "factors", tuple(clean))
        if self.ramification < 1:
            raise ValueError("ramification index must be >= 1")

    @property
    def length(self) -> int:
        return sum(mult for _, mult in self.factors)

    @property
    def vp(self) -> int:
        return self.ctx.vp * self.ramification

    def direct_sum(self, other: TorsionCycModule) -> TorsionCycModule:
        if (self.ctx, self.ramification) != (other.ctx, other.ramification):
            raise ValueError("modules live over different rings")
        return TorsionCycModule(self.ctx, self.factors + other.factors, self.ramification)

    def composition_multiset(self) -> Counter:
        c: Counter = Counter()
        for m, mult in self.factors:
            c[m] += mult
        return c


def p_brauer_character(M: TorsionCycModule) -> BrauerValue:
    h = M.ctx.h_order
    weights: dict[int, int] = {}
    for m, mult in M.factors:
        weights[m] = weights.get(m, 0) + mult
    total = CycNumber.from_exponents(h, weights)
    return total * Fraction(1, M.vp)


def additivity_check(A: TorsionCycModule, B: TorsionCycModule) -> bool:
    return p_brauer_character(A.direct_sum(B)) == p_brauer_character(A) + p_brauer_character(B)


def base_change(M: TorsionCycModule, e: int) -> TorsionCycModule:
    """Tensor up to an extension with ramification index ``e``.

    Each simple factor becomes a chain of ``e`` copies of the new residue
    field, and v(p) grows by the same factor.
    """
    if e < 1:
        raise ValueError("ramification index must be >= 1")
    return TorsionCycModule(
        M.ctx, tuple((m, mult * e) for m, mult in M.factors), M.ramification * e
    )


def super_brauer_rnm(N: int, n: int, m: int, p: int, h_order: int = 1) -> BrauerValue:
    """p-Brauer character of H^0 - H^1 for the rank one module R_{n,m}."""
    ctx = RamificationContext.for_order(N, p, h_order)
    coh = rnm_cohomology(N, n, m, ctx)
    h0 = TorsionCycModule(ctx, ((coh.eigen_exponent, coh.h0_length),))
    h1 = TorsionCycModule(ctx, ((coh.eigen_exponent, coh.h1_length),))
    return p_brauer_character(h0) - p_brauer_character(h1)


@dataclass(frozen=True)
class CoeffTable:
    N: int
    p: int
    entries: dict[int, Fraction] = field(default_factory=dict)

    @property
    def n_i(self) -> int:
        return multiplicity(self.p, self.N)

    def gcd_class(self, k: int) -> int:
        """gcd(k, p^n_i), the only thing a_{k,p} depends on."""
        return gcd(k, self.p**self.n_i)

    def __getitem__(self, k: int) -> Fraction:
        return self.entries[k]

    def rows(self) -> list[tuple[int, int, Fraction]]:
        return [(k, self.gcd_class(k), self.entries[k]) for k in sorted(self.entries)]


def _check_factor(N: int, p: int) -> int:
    if N < 2 or p < 2 or N % p:
        raise NotAFactor(f"{p} is not a prime factor of {N}")
    if not is_prime(p):
        raise NotAFactor(f"{p} is not prime")
    return multiplicity(p, N)


def coefficient_denominator(N: int, p: int) -> int:
    """sum of phi(N/d) over divisors d of N prime to p."""
    return sum(euler_phi(N // d) for d in divisors(N) if d % p)


def coeff_closed_form(N: int, p: int) -> CoeffTable:
    n_i = _check_factor(N, p)
    denom = coefficient_denominator(N, p)
    pn = p**n_i
    entries = {}
    for k in range(1, N):
        g = gcd(k, pn)
        if g == pn:
            entries[k] = Fraction(0)
            continue
        l = multiplicity(p, g) if g > 1 else 0
        entries[k] = (n_i - l - Fraction(n_i - l - 1, p)) / denom
    return CoeffTable(N, p, entries)


def _dft_coefficient(N: int, k: int, chars: list[BrauerValue]) -> Fraction:
    acc = CycNumber.zero(N)
    for b, chi in enumerate(chars):
        value = rational_part(chi)
        if value:
            acc = acc + zeta_power(N, -k * b) * value
    return rational_part(acc * Fraction(1, N))


def coeff_dft_oracle(N: int, p: int) -> CoeffTable:
    """a_{k,p} = (1/N) sum_b chi(R_{b,0}) zeta_N^(-kb), in exact cyclotomic arithmetic."""
    _check_factor(N, p)
    chars = [super_brauer_rnm(N, b, 0, p) for b in range(N)]
    return CoeffTable(N, p, {k: _dft_coefficient(N, k, chars) for k in range(1, N)})


class HauptmodulTerm(NamedTuple):
    divisor: int
    weight: Fraction

    @property
    def is_zero(self) -> bool:
        return self.weight == 0


def hauptmodul_combination(N: int, p: int, table: CoeffTable | None = None) -> list[HauptmodulTerm]:
    """Weights a_{d,p} * phi(N/d) on T_{g^d h} for proper divisors d of N.

    Zero weights are kept so every proper divisor appears.
    """
    if table is None:
        table = coeff_closed_form(N, p)
    return [HauptmodulTerm(d, table[d] * euler_phi(N // d)) for d in divisors(N) if d != N]


def nonzero_weights(terms: Iterable[HauptmodulTerm]) -> list[Fraction]:
    return [t.weight for t in terms if not t.is_zero]

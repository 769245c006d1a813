import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modmoon.arith import divisors, euler_phi, multiplicity
from modmoon.cyclotomic import (
    CycNumber,
    RamificationContext,
    cyc_add,
    cyc_inv,
    cyc_mul,
    cyclotomic_polynomial,
    one_minus_zeta_valuation,
    rational_part,
    zeta_power,
)
from modmoon.errors import DivisionByZero, DomainError, ModulusMismatch, NotRational


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("M, poly", [(1, (-1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1))])
def test_small_cyclotomic_polynomials(M, poly):
    assert cyclotomic_polynomial(M) == poly


def test_cyclotomic_products_up_to_105():
    for M in range(1, 106):
        phi = cyclotomic_polynomial(M)
        assert len(phi) - 1 == euler_phi(M)
        prod = [1]
        for d in divisors(M):
            prod = poly_mul(prod, list(cyclotomic_polynomial(d)))
        assert prod == [-1] + [0] * (M - 1) + [1]


def test_cyclotomic_roots_numerically():
    for M in (7, 12, 30):
        z = cmath.exp(2j * math.pi / M)
        val = sum(c * z**i for i, c in enumerate(cyclotomic_polynomial(M)))
        assert abs(val) < 1e-9


def test_arithmetic_examples():
    z4 = zeta_power(4, 1)
    assert z4 * z4 == -1
    z3 = zeta_power(3, 1)
    assert (1 - z3) * (1 - z3 * z3) == 3
    assert cyc_inv(zeta_power(8, 1)) == zeta_power(8, 7)


@pytest.mark.parametrize("M, k, value", [(5, 0, 1), (2, 1, -1), (4, 6, -1)])
def test_zeta_power_examples(M, k, value):
    assert zeta_power(M, k) == value


def test_rational_part_examples():
    assert rational_part(CycNumber.rational(7, Fraction(3, 4))) == Fraction(3, 4)
    assert rational_part(zeta_power(3, 1) + zeta_power(3, 2)) == -1
    with pytest.raises(NotRational):
        rational_part(zeta_power(5, 1))


def test_sum_of_all_roots():
    for M in range(1, 40):
        total = sum((zeta_power(M, k) for k in range(M)), CycNumber.zero(M))
        assert total == (1 if M == 1 else 0)


def cyc_numbers(M):
    return st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=6),
        min_size=euler_phi(M),
        max_size=euler_phi(M),
    ).map(lambda cs: CycNumber(M, tuple(cs)))


moduli = st.sampled_from([1, 3, 4, 5, 8, 9, 12, 15])


@given(moduli.flatmap(lambda M: st.tuples(cyc_numbers(M), cyc_numbers(M), cyc_numbers(M))))
def test_field_axioms(abc):
    a, b, c = abc
    assert cyc_add(a, b) == b + a
    assert cyc_mul(a, b) == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * cyc_inv(a) == 1
        assert (b / a) * a == b


@given(moduli.flatmap(lambda M: st.tuples(cyc_numbers(M), cyc_numbers(M))))
def test_complex_embedding_is_a_ring_map(ab):
    a, b = ab
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-6
    assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-9
    assert abs(a.conjugate().to_complex() - a.to_complex().conjugate()) < 1e-9


def test_embedding():
    z3 = zeta_power(3, 1)
    assert z3.embed(12) == zeta_power(12, 4)
    with pytest.raises(ModulusMismatch):
        z3.embed(8)


def test_errors():
    with pytest.raises(DivisionByZero):
        cyc_inv(CycNumber.zero(5))
    with pytest.raises(ModulusMismatch):
        zeta_power(3, 1) + zeta_power(5, 1)
    with pytest.raises(ValueError):
        CycNumber(5, (1, 2))


# --- valuations ------------------------------------------------------------


def norm_valuation(t: int, p: int) -> int:
    """v_p of the absolute norm of 1 - zeta_t, by multiplying all conjugates numerically."""
    prod = 1
    for k in range(1, t):
        if math.gcd(k, t) == 1:
            prod *= 1 - cmath.exp(2j * math.pi * k / t)
    n = round(abs(prod))
    return multiplicity(p, n) if n > 1 else 0


def test_valuation_examples():
    ctx = RamificationContext(p=2, n_i=3)
    assert one_minus_zeta_valuation(2, ctx) == 4
    assert one_minus_zeta_valuation(1, ctx) == math.inf
    ctx6 = RamificationContext.for_order(24, 2)
    assert one_minus_zeta_valuation(3, ctx6) == 0


@pytest.mark.parametrize("N, p", [(8, 2), (9, 3), (12, 2), (25, 5), (30, 3), (27, 3), (16, 2)])
def test_valuation_matches_field_norm(N, p):
    """In Q(zeta_{p^n}) the prime over p is totally ramified, so the normalized
    valuation of x equals v_p(Norm(x)) scaled by the degree of Q(zeta_t) inside it."""
    ctx = RamificationContext.for_order(N, p)
    n = ctx.n_i
    for t in divisors(N):
        if t == 1:
            continue
        got = one_minus_zeta_valuation(t, ctx)
        if t != p ** multiplicity(p, t):
            # the norm is Phi_t(1), which is 1 or a prime other than p
            assert norm_valuation(t, p) == 0
            assert got == 0
            continue
        # v_p(Norm_{Q(zeta_t)/Q}(1 - zeta_t)) = 1, and [Q(zeta_{p^n}) : Q(zeta_t)] = phi(p^n)/phi(t)
        assert norm_valuation(t, p) == 1
        assert got == Fraction(euler_phi(p**n), euler_phi(t))
        # the chain p = unit * (1 - zeta_t)^phi(t)
        assert got * euler_phi(t) == ctx.vp


def test_context_validation():
    with pytest.raises(DomainError):
        RamificationContext(p=4, n_i=1)
    with pytest.raises(DomainError):
        RamificationContext.for_order(15, 2)
    with pytest.raises(DomainError):
        RamificationContext.for_order(15, 3, h_order=5)
    with pytest.raises(DomainError):
        one_minus_zeta_valuation(7, RamificationContext.for_order(15, 3))

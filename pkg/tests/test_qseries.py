import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modmoon.errors import (
    Mod24Error,
    MissingSigma,
    NormalizationError,
    ParseError,
    PrecisionError,
    UnknownClass,
)
from modmoon.qseries import (
    EtaQuotientSpec,
    EtaTerm,
    LaurentQSeries,
    RawSeries,
    SplitKind,
    check_normalization,
    dumps_mt_table,
    eta_quotient_series,
    euler_product,
    h0_h1_split,
    load_mt_table,
    mckay_thompson,
    parse_mt_table,
    series_combine,
    tau_half_shift,
)

Q = LaurentQSeries.from_dict


def series(start_max=3, length=8):
    @st.composite
    def build(draw):
        start = draw(st.integers(-start_max, start_max))
        cs = draw(st.lists(st.fractions(-9, 9, max_denominator=5), min_size=1, max_size=length))
        prec = start + draw(st.integers(len(cs), len(cs) + 3))
        return LaurentQSeries(start, tuple(cs), prec)

    return build()


def unit_series():
    return series().filter(lambda s: not s.is_zero())


# --- the series type --------------------------------------------------------------


def test_canonical_form():
    s = LaurentQSeries(-2, (0, 0, 3, 0), 5)
    assert s.start == 0 and s.valuation == 0 and s[4] == 0
    z = LaurentQSeries.zero(4)
    assert z.is_zero() and z.valuation is None and z.start == 4
    assert LaurentQSeries(0, (1, 2), 4) == Q({0: 1, 1: 2}, 4)
    with pytest.raises(PrecisionError):
        s[5]
    with pytest.raises(ValueError):
        LaurentQSeries(3, (), 2)


def test_display():
    s = Q({-1: 1, 1: 276, 2: -2048}, 3)
    assert str(s) == "q^-1 + 276*q - 2048*q^2 + O(q^3)"
    assert str(LaurentQSeries.zero(2)) == "O(q^2)"
    assert str(Q({0: Fraction(-3, 4), 1: 1}, 2)) == "-3/4 + q + O(q^2)"


def test_precision_tracking():
    a = Q({-1: 1, 0: 2}, 3)
    b = Q({2: 1}, 5)
    assert (a + b).prec == 3
    assert (a * b).prec == min(3 + 2, 5 - 1)
    assert a.inverse().prec == 3 + 2
    with pytest.raises(PrecisionError):
        a.truncate(4)


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    lhs, rhs = (a * b) * c, a * (b * c)
    prec = min(lhs.prec, rhs.prec)
    assert lhs.truncate(prec) == rhs.truncate(prec)
    assert (a - a).is_zero()


@given(unit_series())
def test_inverse(s):
    one = s * s.inverse()
    assert one == LaurentQSeries.constant(1, one.prec)
    assert one.prec == s.prec - s.start
    assert s**-2 * s**2 == LaurentQSeries.constant(1, (s**-2 * s**2).prec)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        LaurentQSeries.zero(3).inverse()


# --- eta products -------------------------------------------------------------------


def pentagonal(order):
    out = {}
    k = 0
    while True:
        hit = False
        for j in ((k,) if k == 0 else (k, -k)):
            n = j * (3 * j - 1) // 2
            if n < order:
                out[n] = (-1) ** (j % 2)
                hit = True
        if not hit:
            return out
        k += 1


@pytest.mark.parametrize("order", [3, 8, 13, 60, 200])
def test_euler_product_is_pentagonal(order):
    assert dict(euler_product(order).items()) == pentagonal(order)


def test_euler_product_examples():
    assert dict(euler_product(3).items()) == {0: 1, 1: -1, 2: -1}
    assert dict(euler_product(8).items()) == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1}
    assert euler_product(13)[12] == -1


def naive_eta_product(factors, order):
    """prod over (d, e) of prod_n (1 - q^(dn))^e by repeated polynomial multiplication."""
    poly = [Fraction(0)] * order
    poly[0] = Fraction(1)
    for d, e in factors:
        base = [Fraction(0)] * order
        base[0] = Fraction(1)
        n = d
        while n < order:
            step = [Fraction(0)] * order
            step[0], step[n] = Fraction(1), Fraction(-1)
            base = [sum(base[i] * step[k - i] for i in range(k + 1)) for k in range(order)]
            n += d
        inv = LaurentQSeries(0, tuple(base), order).inverse().coefficient_list(0)
        factor = base if e > 0 else inv
        for _ in range(abs(e)):
            poly = [sum(poly[i] * factor[k - i] for i in range(k + 1)) for k in range(order)]
    return poly


@pytest.mark.parametrize(
    "factors", [((1, 24), (2, -24)), ((1, 8), (4, -8)), ((2, 8), (4, 8), (1, -8), (8, -8)), ((1, 12), (3, -12))]
)
def test_eta_quotient_against_naive_product(factors):
    order = 10
    s = eta_quotient_series(EtaQuotientSpec.single(factors), order)
    lead = sum(d * e for d, e in factors) // 24
    assert s.coefficient_list(lead) == naive_eta_product(factors, order - lead)


def test_eta_quotient_examples():
    s = eta_quotient_series(EtaQuotientSpec.single(((1, 24), (2, -24)), 24), 3)
    assert dict(s.items()) == {-1: 1, 1: 276, 2: -2048}
    assert eta_quotient_series(EtaQuotientSpec.single(()), 4) == LaurentQSeries.constant(1, 4)
    assert eta_quotient_series(EtaQuotientSpec.single(((1, 1), (1, -1))), 4) == LaurentQSeries.constant(1, 4)


def test_mod24():
    with pytest.raises(Mod24Error):
        eta_quotient_series(EtaQuotientSpec.single(((1, 1),)), 4)
    with pytest.raises(ValueError):
        EtaTerm(((0, 24),))


# --- combinators ---------------------------------------------------------------------


def test_combine_examples():
    T = Q({-1: 1, 1: 276}, 3)
    U = Q({-1: 1, 1: 20}, 3)
    assert series_combine([(T, 1)]) == T
    assert series_combine([(T, 1), (T, -1)]).is_zero()
    mix = series_combine([(T, Fraction(4, 5)), (U, Fraction(1, 5))])
    assert mix[1] == Fraction(4, 5) * 276 + Fraction(1, 5) * 20
    with pytest.raises(ValueError):
        series_combine([])


def test_half_shift_examples():
    T = Q({-1: 1, 1: 276}, 3)
    assert tau_half_shift(T) == Q({-1: -1, 1: -276}, 3)
    c = LaurentQSeries.constant(5, 4)
    assert tau_half_shift(c) == c


@given(series(), series(), st.fractions(-3, 3, max_denominator=4))
def test_half_shift_involution_and_linear(a, b, w):
    assert tau_half_shift(tau_half_shift(a)) == a
    assert tau_half_shift(series_combine([(a, 1), (b, w)])) == series_combine(
        [(tau_half_shift(a), 1), (tau_half_shift(b), w)]
    )


@given(series(), series(), st.sampled_from(list(SplitKind)))
def test_split_difference_is_T(T, S, kind):
    h0, h1 = h0_h1_split(T, kind, S)
    assert h0 - h1 == T.truncate(min(T.prec, S.prec)) if kind is SplitKind.PB_SIGMA else h0 - h1 == T
    if kind is SplitKind.TWO_B:
        assert h0 + h1 == tau_half_shift(T)
    if kind is SplitKind.FRICKE_PRIME:
        assert h0 == T and h1.is_zero()


def test_split_needs_sigma():
    with pytest.raises(MissingSigma):
        h0_h1_split(LaurentQSeries.constant(1, 2), "pB-sigma")


# --- the bundled table --------------------------------------------------------------


@pytest.fixture(scope="module")
def table():
    return load_mt_table()


def j_function(order):
    """E4^3 / Delta - 744 from divisor sums and the Euler product."""
    E4 = [Fraction(1)] + [240 * sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, order + 1)]
    E4 = LaurentQSeries(0, tuple(E4), order + 1)
    delta = LaurentQSeries.monomial(1, order + 2) * euler_product(order + 1) ** 24
    return (E4**3 * delta.inverse() - 744).truncate(order)


def test_raw_1A_matches_j(table):
    assert mckay_thompson(table, "1A", 21) == j_function(21)


def test_every_class_is_normalized(table):
    for label in table.labels():
        check_normalization(label, mckay_thompson(table, label, 12))
        assert table.notes[label], f"{label} has no checked-by note"


@pytest.mark.parametrize(
    "label, coeff", [("1A", 196884), ("2B", 276), ("4C", 20), ("8A", 36), ("3A", 783), ("5A", 134), ("7A", 51)]
)
def test_first_coefficients(table, label, coeff):
    assert mckay_thompson(table, label, 2)[1] == coeff


def test_2B_example(table):
    assert dict(mckay_thompson(table, "2B", 3).items()) == {-1: 1, 1: 276, 2: -2048}


def test_power_map_congruences(table):
    """T_g = T_{g^p} mod p whenever p exactly divides |g|, so g^p is the p'-part of g."""
    order = 21
    checked = 0
    for (label, d), target in table.power.items():
        if d < 2 or any(d % r == 0 for r in range(2, d)):
            continue
        ordg = int("".join(ch for ch in label if ch.isdigit()))
        if ordg % d or (ordg // d) % d == 0:
            continue  # g^p is the p'-part only when p exactly divides the order
        a, b = mckay_thompson(table, label, order), mckay_thompson(table, target, order)
        assert all((x - y) % d == 0 for x, y in zip(a.coefficient_list(-1), b.coefficient_list(-1)))
        checked += 1
    assert checked == 8


@pytest.mark.parametrize("label, target, p", [("2B", "1A", 2), ("4C", "1A", 2), ("8A", "1A", 2)])
def test_two_power_classes_congruent_to_identity(table, label, target, p):
    a, b = mckay_thompson(table, label, 21), mckay_thompson(table, target, 21)
    assert all((x - y) % p == 0 for x, y in zip(a.coefficient_list(-1), b.coefficient_list(-1)))


def test_power_class_lookup(table):
    assert table.power_class("8A", 2) == "4C"
    assert table.power_class("8A", 1) == "8A"
    with pytest.raises(UnknownClass):
        table.power_class("8A", 3)


def test_unknown_class(table):
    with pytest.raises(UnknownClass):
        mckay_thompson(table, "99Z", 3)


def test_raw_entry_precision(table):
    with pytest.raises(PrecisionError):
        mckay_thompson(table, "1A", 40)
    assert RawSeries((1, 0, 5)).series(1) == LaurentQSeries.monomial(-1, 1)


def test_round_trip(table):
    assert parse_mt_table(dumps_mt_table(table)) == table
    raw = parse_mt_table("CLASS X COEFFS 1 0 7/2 -3\n")
    assert parse_mt_table(dumps_mt_table(raw)) == raw
    assert mckay_thompson(raw, "X", 3) == Q({-1: 1, 1: Fraction(7, 2), 2: -3}, 3)


@pytest.mark.parametrize(
    "text, line",
    [
        ("CLASS A CONST 0 ETA 1:24\n\nCLASS B CONST x ETA 1:24\n", 3),
        ("# c\nCLASS A CONST 0 ETA 1:x\n", 2),
        ("CLASS A CONST 0 ETA 1:24\nCLASS A CONST 0 ETA 1:24\n", 2),
        ("CLASS A CONST 0\n", 1),
        ("CLASS A COEFFS\n", 1),
        ("POWER A two B\n", 1),
        ("BOGUS\n", 1),
        ("CLASS A CONST 1/0 ETA 1:24\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_mt_table(text, "t.txt")
    assert err.value.line == line


def test_normalization_errors():
    bad = parse_mt_table("CLASS X CONST 0 ETA 1:24 2:-24\nCLASS Y CONST 0 ETA 1:-48\n")
    with pytest.raises(NormalizationError):
        mckay_thompson(bad, "X", 3)  # constant term -24
    with pytest.raises(NormalizationError):
        mckay_thompson(bad, "Y", 3)  # leading term q^-2


# --- numerical modular invariance ------------------------------------------------------

mpmath.mp.dps = 30


def eta(tau):
    q = mpmath.exp(2j * mpmath.pi * tau)
    return mpmath.exp(2j * mpmath.pi * tau / 24) * mpmath.qp(q)


def evaluate(spec: EtaQuotientSpec, tau):
    total = mpmath.mpc(mpmath.mpf(spec.constant.numerator) / spec.constant.denominator)
    for term in spec.terms:
        prod = mpmath.mpc(1)
        for d, e in term.factors:
            prod *= eta(d * tau) ** e
        total += mpmath.mpf(term.coefficient.numerator) / term.coefficient.denominator * prod
    return total


def moebius(W, tau):
    a, b, c, d = W
    return (a * tau + b) / (c * tau + d)


def near_fixed_point(W):
    a, b, c, d = W
    # c t^2 + (d - a) t - b = 0, upper half plane root
    t = (-(d - a) + mpmath.sqrt((d - a) ** 2 + 4 * b * c + 0j)) / (2 * c)
    if t.imag < 0:
        t = (-(d - a) - mpmath.sqrt((d - a) ** 2 + 4 * b * c + 0j)) / (2 * c)
    return t + mpmath.mpc("0.013", "0.021")


INVOLUTIONS = [
    ("8A", (0, -1, 8, 0)),
    ("3A", (0, -1, 3, 0)),
    ("5A", (0, -1, 5, 0)),
    ("7A", (0, -1, 7, 0)),
    ("15A", (0, -1, 15, 0)),
    ("15A", (6, 1, 15, 3)),
    ("15A", (5, 3, 15, 10)),
    ("21A", (0, -1, 21, 0)),
    ("21A", (15, 1, 42, 3)),
    ("21A", (7, 1, 42, 7)),
]


@pytest.mark.parametrize("label, W", INVOLUTIONS)
def test_atkin_lehner_invariance(table, label, W):
    spec = table.entries[label]
    tau = near_fixed_point(W)
    image = moebius(W, tau)
    assert tau.imag > 0 and image.imag > 0
    x, y = evaluate(spec, tau), evaluate(spec, image)
    assert abs(x - y) < mpmath.mpf(10) ** -15 * (1 + abs(x))
    # and the point is not a trivial fixed point of the function
    assert abs(x - evaluate(spec, tau + mpmath.mpf("0.01"))) > 1e-6


def test_2B_is_not_fricke_invariant(table):
    """2B belongs to Gamma_0(2) itself: the Fricke involution inverts t = T - 24 up to 2^12."""
    spec = table.entries["2B"]
    W = (0, -1, 2, 0)
    tau = near_fixed_point(W)
    t, t_image = evaluate(spec, tau) - 24, evaluate(spec, moebius(W, tau)) - 24
    assert abs(t * t_image - 4096) < 1e-15 * 4096
    assert abs(t - t_image) > 1


def test_numeric_evaluation_matches_expansion(table):
    tau = mpmath.mpc(0.1, 0.8)
    q = mpmath.exp(2j * mpmath.pi * tau)
    for label in ("2B", "15A", "21A"):
        s = mckay_thompson(table, label, 60)
        approx = sum(mpmath.mpf(c.numerator) / c.denominator * q**n for n, c in s.items())
        assert abs(approx - evaluate(table.entries[label], tau)) < 1e-20


def test_single_quotient_is_not_enough_for_15A(table):
    """u alone is only Fricke-invariant; the partial involution w_3 sends u to -1/u."""
    u = EtaQuotientSpec((table.entries["15A"].terms[0],))
    W = (6, 1, 15, 3)
    tau = near_fixed_point(W)
    x, y = evaluate(u, tau), evaluate(u, moebius(W, tau))
    assert abs(x * y + 1) < 1e-15

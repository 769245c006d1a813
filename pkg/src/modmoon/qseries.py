"""Truncated Laurent series in q with exact rational coefficients.

A series knows the exponent below which its coefficients are valid
(``prec``, exclusive). Every operation returns the tightest ``prec`` that
the inputs justify, so a coefficient past the horizon can never be read.

Also here: Dedekind eta quotients, McKay-Thompson tables loaded from a text
file, the tau -> tau + 1/2 operator and the H^0 / H^1 splitting of a graded
trace.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    DataError,
    MissingSigma,
    Mod24Error,
    NormalizationError,
    ParseError,
    PrecisionError,
    UnknownClass,
)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class LaurentQSeries:
    """sum_{n >= start} c_n q^n, known for n < prec.

    ``coeffs[i]`` is the coefficient of ``q^(start + i)``. The representation
    is canonical: leading zeros are stripped, and the zero series has
    ``start == prec`` and no coefficients.
    """

    start: int
    coeffs: tuple[Fraction, ...]
    prec: int

    def __post_init__(self):
        cs = [c if type(c) is Fraction else Fraction(c) for c in self.coeffs]
        span = self.prec - self.start
        if span < 0:
            raise ValueError("start exceeds precision")
        if len(cs) > span:
            cs = cs[:span]
        elif len(cs) < span:
            cs.extend([Fraction(0)] * (span - len(cs)))
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        object.__setattr__(self, "start", self.start + lead)
        object.__setattr__(self, "coeffs", tuple(cs[lead:]))

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, prec: int) -> LaurentQSeries:
        return cls(prec, (), prec)

    @classmethod
    def monomial(cls, exponent: int, prec: int, coeff: Rational = 1) -> LaurentQSeries:
        if exponent >= prec:
            return cls.zero(prec)
        return cls(exponent, (Fraction(coeff),), prec)

    @classmethod
    def constant(cls, c: Rational, prec: int) -> LaurentQSeries:
        return cls.monomial(0, prec, c)

    @classmethod
    def from_dict(cls, terms: Mapping[int, Rational], prec: int) -> LaurentQSeries:
        live = {n: c for n, c in terms.items() if n < prec}
        if not live:
            return cls.zero(prec)
        lo = min(live)
        cs = [Fraction(0)] * (prec - lo)
        for n, c in live.items():
            cs[n - lo] = Fraction(c)
        return cls(lo, tuple(cs), prec)

    # access --------------------------------------------------------------

    def coefficient(self, n: int) -> Fraction:
        if n >= self.prec:
            raise PrecisionError(f"coefficient of q^{n} requested, series known below q^{self.prec}")
        if n < self.start:
            return Fraction(0)
        return self.coeffs[n - self.start]

    __getitem__ = coefficient

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int | None:
        return None if self.is_zero() else self.start

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.start + i, c

    def coefficient_list(self, lo: int) -> list[Fraction]:
        """Coefficients of q^lo ... q^(prec-1)."""
        return [self.coefficient(n) for n in range(lo, self.prec)]

    def truncate(self, prec: int) -> LaurentQSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision from {self.prec} to {prec}")
        start = min(self.start, prec)
        return LaurentQSeries(start, self.coeffs[: prec - start], prec)

    # arithmetic ------------------------------------------------------------

    def _aligned(self, other: LaurentQSeries) -> tuple[int, int, list[Fraction], list[Fraction]]:
        prec = min(self.prec, other.prec)
        lo = min(self.start, other.start, prec)
        return lo, prec, self.coefficient_list_padded(lo, prec), other.coefficient_list_padded(lo, prec)

    def coefficient_list_padded(self, lo: int, hi: int) -> list[Fraction]:
        return [self.coefficient(n) if n >= self.start else Fraction(0) for n in range(lo, hi)]

    def __add__(self, other):
        other = self._coerce(other)
        lo, prec, a, b = self._aligned(other)
        return LaurentQSeries(lo, tuple(x + y for x, y in zip(a, b)), prec)

    __radd__ = __add__

    def __neg__(self) -> LaurentQSeries:
        return LaurentQSeries(self.start, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, w: Rational) -> LaurentQSeries:
        w = Fraction(w)
        if w == 0:
            return LaurentQSeries.zero(self.prec)
        return LaurentQSeries(self.start, tuple(w * c for c in self.coeffs), self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentQSeries):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            # the product of a zero series is known as far as the other factor allows
            va = self.start if not self.is_zero() else self.prec
            vb = other.start if not other.is_zero() else other.prec
            return LaurentQSeries.zero(min(self.prec + vb, other.prec + va))
        start = self.start + other.start
        prec = min(self.prec + other.start, other.prec + self.start)
        n = prec - start
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i in range(min(n, len(a))):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(n - i, len(b))):
                out[i + j] += ai * b[j]
        return LaurentQSeries(start, tuple(out), prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def inverse(self) -> LaurentQSeries:
        """Exact 1/s. Relative precision is preserved: prec = prec(s) - 2 v(s)."""
        if self.is_zero():
            raise ZeroDivisionError("series has no known nonzero coefficient")
        v = self.start
        n = self.prec - v
        a = self.coeffs
        c0 = a[0]
        inv = [Fraction(0)] * n
        inv[0] = 1 / c0
        for k in range(1, n):
            acc = Fraction(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                acc += a[j] * inv[k - j]
            inv[k] = -acc / c0
        return LaurentQSeries(-v, tuple(inv), n - v)

    def __pow__(self, e: int) -> LaurentQSeries:
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentQSeries.constant(1, self.prec - self.start) if e == 0 else None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def _coerce(self, other) -> LaurentQSeries:
        if isinstance(other, LaurentQSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentQSeries.constant(other, self.prec)
        raise TypeError(f"cannot combine a q-series with {type(other).__name__}")

    # display ---------------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for n, c in self.items():
            mag = abs(c)
            if n == 0:
                body = str(mag)
            else:
                power = "q" if n == 1 else f"q^{n}"
                body = power if mag == 1 else f"{mag}*{power}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                text = ("-" if sign == "-" else "") + body
            else:
                text += f" {sign} {body}"
        tail = f"O(q^{self.prec})"
        return f"{text} + {tail}" if text else tail


# ---------------------------------------------------------------------------
# eta products


def euler_product(order: int, step: int = 1) -> LaurentQSeries:
    """prod_{n >= 1} (1 - q^(step*n)), known below q^order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return LaurentQSeries(0, tuple(_euler_ints(order, step, 1)), order)


def _euler_ints(order: int, step: int, power: int) -> list[int]:
    """Integer coefficients of prod (1 - q^(step*n))^power below q^order."""
    s = [0] * order
    s[0] = 1
    m = step
    while m < order:
        for _ in range(abs(power)):
            if power > 0:
                for i in range(order - 1, m - 1, -1):
                    s[i] -= s[i - m]
            else:
                # dividing by (1 - q^m) is a running sum with stride m
                for i in range(m, order):
                    s[i] += s[i - m]
        m += step
    return s


@dataclass(frozen=True)
class EtaTerm:
    """coefficient * prod_d eta(d tau)^e_d."""

    factors: tuple[tuple[int, int], ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        merged: dict[int, int] = {}
        for d, e in self.factors:
            if d < 1:
                raise ValueError(f"eta level must be positive, got {d}")
            merged[d] = merged.get(d, 0) + e
        object.__setattr__(self, "factors", tuple((d, e) for d, e in merged.items() if e))
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))

    @property
    def weighted_order(self) -> int:
        return sum(d * e for d, e in self.factors)

    def leading_power(self) -> int:
        s = self.weighted_order
        if s % 24:
            raise Mod24Error(f"sum d*e = {s} is not divisible by 24")
        return s // 24


@dataclass(frozen=True)
class EtaQuotientSpec:
    """sum of eta terms plus an additive constant.

    Most Hauptmoduls need a single term; ``u - 1/u``-style symmetrizations
    under Atkin-Lehner involutions need two.
    """

    terms: tuple[EtaTerm, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @classmethod
    def single(cls, factors: Iterable[tuple[int, int]], constant: Rational = 0) -> EtaQuotientSpec:
        return cls((EtaTerm(tuple(factors)),), Fraction(constant))

    @property
    def factors(self) -> tuple[tuple[int, int], ...]:
        return self.terms[0].factors if self.terms else ()


def eta_term_series(term: EtaTerm, order: int) -> LaurentQSeries:
    lead = term.leading_power()
    width = order - lead
    if width <= 0:
        return LaurentQSeries.zero(order)
    acc = [0] * width
    acc[0] = 1
    for d, e in term.factors:
        block = _euler_ints(width, d, e)
        acc = [sum(acc[i] * block[k - i] for i in range(k + 1)) for k in range(width)]
    return LaurentQSeries(lead, tuple(term.coefficient * c for c in acc), order)


def eta_quotient_series(spec: EtaQuotientSpec, order: int) -> LaurentQSeries:
    """q-expansion of the spec, known below q^order."""
    total = LaurentQSeries.constant(spec.constant, order)
    for term in spec.terms:
        total = total + eta_term_series(term, order)
    return total


# ---------------------------------------------------------------------------
# combinators


def series_combine(terms: Iterable[tuple[LaurentQSeries, Rational]]) -> LaurentQSeries:
    terms = list(terms)
    if not terms:
        raise ValueError("nothing to combine")
    prec = min(s.prec for s, _ in terms)
    total = LaurentQSeries.zero(prec)
    for s, w in terms:
        total = total + s.scale(w)
    return total


def tau_half_shift(s: LaurentQSeries) -> LaurentQSeries:
    """tau -> tau + 1/2, i.e. q^n -> (-1)^n q^n."""
    cs = tuple(-c if (s.start + i) % 2 else c for i, c in enumerate(s.coeffs))
    return LaurentQSeries(s.start, cs, s.prec)


class SplitKind(enum.Enum):
    FRICKE_PRIME = "fricke-prime"
    TWO_B = "2B"
    PB_SIGMA = "pB-sigma"


def h0_h1_split(
    T: LaurentQSeries, kind: SplitKind | str, T_sigma: LaurentQSeries | None = None
) -> tuple[LaurentQSeries, LaurentQSeries]:
    """Split a graded super trace T into its H^0 and H^1 parts, with h0 - h1 = T."""
    kind = SplitKind(kind)
    if kind is SplitKind.FRICKE_PRIME:
        return T, LaurentQSeries.zero(T.prec)
    if kind is SplitKind.TWO_B:
        other = tau_half_shift(T)
    else:
        if T_sigma is None:
            raise MissingSigma("pB splitting needs the series of the sigma-twisted element")
        other = T_sigma
    half = Fraction(1, 2)
    return series_combine([(T, half), (other, half)]), series_combine([(T, -half), (other, half)])


# ---------------------------------------------------------------------------
# McKay-Thompson tables


@dataclass(frozen=True)
class RawSeries:
    """Coefficients c_{-1}, c_0, c_1, ... of a series given directly."""

    coeffs: tuple[Fraction, ...]

    def series(self, order: int) -> LaurentQSeries:
        known = len(self.coeffs) - 1
        if order > known:
            raise PrecisionError(f"raw entry is known below q^{known}, order {order} requested")
        return LaurentQSeries(-1, self.coeffs, order)


MTEntry = Union[EtaQuotientSpec, RawSeries]


@dataclass(frozen=True)
class MTTable:
    entries: dict[str, MTEntry]
    power: dict[tuple[str, int], str] = field(default_factory=dict)
    notes: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __contains__(self, label: str) -> bool:
        return label in self.entries

    def labels(self) -> list[str]:
        return list(self.entries)

    def power_class(self, label: str, d: int) -> str:
        """Label of the class of g^d for g in ``label``."""
        if label not in self.entries:
            raise UnknownClass(f"unknown class {label!r}")
        if d == 1:
            return label
        try:
            return self.power[(label, d)]
        except KeyError:
            raise UnknownClass(f"no power map entry for {label}^{d}") from None


_RATIONAL = re.compile(r"-?\d+(?:/\d+)?")
_FACTOR = re.compile(r"(\d+):(-?\d+)")
CHECKED_BY = "checked-by:"


def _rational(tok: str, line: int, source: str | None) -> Fraction:
    if not _RATIONAL.fullmatch(tok):
        raise ParseError(f"expected a rational, got {tok!r}", line, source)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {tok!r}", line, source) from None


def _parse_eta(tokens: list[str], line: int, source: str | None) -> tuple[EtaTerm, ...]:
    terms: list[EtaTerm] = []
    i = 0
    while i < len(tokens):
        if tokens[i] != "ETA":
            raise ParseError(f"expected ETA, got {tokens[i]!r}", line, source)
        i += 1
        coeff = Fraction(1)
        if i < len(tokens) and ":" not in tokens[i] and tokens[i] != "ETA":
            coeff = _rational(tokens[i], line, source)
            i += 1
        factors = []
        while i < len(tokens) and tokens[i] != "ETA":
            m = _FACTOR.fullmatch(tokens[i])
            if not m or int(m.group(1)) == 0:
                raise ParseError(f"bad eta factor {tokens[i]!r}", line, source)
            factors.append((int(m.group(1)), int(m.group(2))))
            i += 1
        terms.append(EtaTerm(tuple(factors), coeff))
    if not terms:
        raise ParseError("CLASS record has no ETA factors", line, source)
    return tuple(terms)


def parse_mt_table(text: str, source: str | None = None) -> MTTable:
    entries: dict[str, MTEntry] = {}
    power: dict[tuple[str, int], str] = {}
    notes: dict[str, tuple[str, ...]] = {}
    pending: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith(CHECKED_BY):
                pending.append(body[len(CHECKED_BY):].strip())
            continue
        tok = line.split()
        head = tok[0]
        if head == "CLASS":
            if len(tok) < 3:
                raise ParseError("truncated CLASS record", lineno, source)
            label = tok[1]
            if label in entries:
                raise ParseError(f"duplicate class {label}", lineno, source)
            rest = tok[2:]
            if rest[0] == "COEFFS":
                if len(rest) < 2:
                    raise ParseError("COEFFS needs at least one coefficient", lineno, source)
                entries[label] = RawSeries(tuple(_rational(t, lineno, source) for t in rest[1:]))
            else:
                const = Fraction(0)
                if rest[0] == "CONST":
                    if len(rest) < 2:
                        raise ParseError("CONST needs a value", lineno, source)
                    const = _rational(rest[1], lineno, source)
                    rest = rest[2:]
                entries[label] = EtaQuotientSpec(_parse_eta(rest, lineno, source), const)
            notes[label] = tuple(pending)
            pending = []
        elif head == "POWER":
            if len(tok) != 4 or not tok[2].isdigit() or int(tok[2]) < 1:
                raise ParseError("expected POWER <label> <d> <label>", lineno, source)
            key = (tok[1], int(tok[2]))
            if key in power:
                raise ParseError(f"duplicate power map entry {tok[1]}^{tok[2]}", lineno, source)
            power[key] = tok[3]
        else:
            raise ParseError(f"unknown record type {head!r}", lineno, source)
    return MTTable(entries, power, notes)


def dumps_mt_table(table: MTTable) -> str:
    out = []
    for label, entry in table.entries.items():
        for note in table.notes.get(label, ()):
            out.append(f"# {CHECKED_BY} {note}")
        if isinstance(entry, RawSeries):
            out.append(f"CLASS {label} COEFFS " + " ".join(str(c) for c in entry.coeffs))
            continue
        parts = [f"CLASS {label}", f"CONST {entry.constant}"]
        for term in entry.terms:
            parts.append("ETA")
            if term.coefficient != 1:
                parts.append(str(term.coefficient))
            parts.extend(f"{d}:{e}" for d, e in term.factors)
        out.append(" ".join(parts))
    for (label, d), target in table.power.items():
        out.append(f"POWER {label} {d} {target}")
    return "\n".join(out) + "\n"


def data_dir() -> Path:
    override = os.environ.get("MOONSHINE_DATA_DIR")
    if override:
        return Path(override)
    return Path(str(resources.files("modmoon") / "data"))


def load_mt_table(path: str | os.PathLike | None = None) -> MTTable:
    path = Path(path) if path is not None else data_dir() / "mt_table.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_mt_table(text, str(path))


def check_normalization(label: str, s: LaurentQSeries) -> None:
    if s.start != -1 or s.coefficient(-1) != 1:
        raise NormalizationError(f"{label}: leading term is not q^-1")
    if s.coefficient(0) != 0:
        raise NormalizationError(f"{label}: constant term is {s.coefficient(0)}, not 0")


def mckay_thompson(table: MTTable, label: str, order: int) -> LaurentQSeries:
    """T_g for the class ``label``, known below q^order, in the q^-1 + 0 + O(q) normalization."""
    try:
        entry = table.entries[label]
    except KeyError:
        raise UnknownClass(f"unknown class {label!r}") from None
    work = max(order, 1)
    if isinstance(entry, RawSeries):
        s = entry.series(work)
    else:
        s = eta_quotient_series(entry, work)
    check_normalization(label, s)
    return s.truncate(order) if order < work else s

"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow and no
rounding. The workhorse is :func:`smith_normal_form`, which returns the
unimodular transforms along with the diagonal; kernels, quotients and
integer solves are all read off from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence

from .arith import factorize
from .errors import ContainmentError, InfiniteQuotientError, NoIntegerSolution


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        for x in self.entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"matrix entries must be int, got {type(x).__name__}")

    # construction -----------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int | None = None) -> IntMatrix:
        columns = [list(c) for c in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None):
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data, cols)

    # access -----------------------------------------------------------------
    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def diag(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows([[self[i, j] for j in idx] for i in range(self.rows)], len(idx))

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows([self.row(i) for i in idx], self.cols)

    # arithmetic -------------------------------------------------------------
    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        data = []
        for i in range(self.rows):
            r = self.row(i)
            data.extend(sum(a * b for a, b in zip(r, c)) for c in cols)
        return IntMatrix(self.rows, other.cols, tuple(data))

    def __pow__(self, k: int) -> IntMatrix:
        if not self.is_square or k < 0:
            raise ValueError("only nonnegative powers of square matrices")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return IntMatrix.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols
        )

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __str__(self) -> str:
        if not self.entries:
            return f"[{self.rows}x{self.cols} empty]"
        width = max(len(str(x)) for x in self.entries)
        return "\n".join(" ".join(str(x).rjust(width) for x in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    V: IntMatrix
    D: IntMatrix

    @property
    def invariants(self) -> list[int]:
        return self.D.diag()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.D.diag() if d != 0)


def _canonical_divisors(divs: Iterable[int]) -> tuple[int, ...]:
    return tuple(d for d in divs if d != 1)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group given by its invariant factors d1 | d2 | ... (each >= 2)."""

    elementary_divisors: tuple[int, ...] = ()

    def __post_init__(self):
        divs = tuple(int(d) for d in self.elementary_divisors)
        object.__setattr__(self, "elementary_divisors", divs)
        for d in divs:
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
        for a, b in zip(divs, divs[1:]):
            if b % a:
                raise ValueError(f"invariant factors {divs} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> FiniteAbelianGroup:
        """Canonical form of a direct sum of cyclic groups Z/n1 + Z/n2 + ...

        Orders equal to 0 are rejected (the result would be infinite).
        """
        prime_powers: dict[int, list[int]] = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                raise InfiniteQuotientError("cyclic summand of order 0 is infinite")
            for p, e in factorize(n) if n > 1 else ():
                prime_powers.setdefault(p, []).append(p**e)
        if not prime_powers:
            return cls(())
        length = max(len(v) for v in prime_powers.values())
        factors = [1] * length
        for p, powers in prime_powers.items():
            powers = sorted(powers)
            offset = length - len(powers)
            for i, q in enumerate(powers):
                factors[offset + i] *= q
        return cls(_canonical_divisors(factors))

    @property
    def order(self) -> int:
        return prod(self.elementary_divisors)

    def __len__(self) -> int:
        return self.order

    @property
    def exponent(self) -> int:
        return self.elementary_divisors[-1] if self.elementary_divisors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.elementary_divisors

    def p_part(self, p: int) -> FiniteAbelianGroup:
        return p_part(self, p)

    def __str__(self) -> str:
        if not self.elementary_divisors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.elementary_divisors)


def p_part(G: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    """The p-primary component of ``G``."""
    out = []
    for d in G.elementary_divisors:
        q = 1
        while d % p == 0:
            d //= p
            q *= p
        out.append(q)
    return FiniteAbelianGroup(_canonical_divisors(out))


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    The pivot at each stage is an entry of minimal nonzero absolute value in
    the trailing block; reduction uses rounded quotients. Row operations are
    mirrored into ``U`` and column operations into ``V``.
    """
    m, n = A.rows, A.cols
    a = A.to_lists()
    U = IntMatrix.identity(m).to_lists()
    V = IntMatrix.identity(n).to_lists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        ra, rs = a[dst], a[src]
        for k in range(n):
            if rs[k]:
                ra[k] -= q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(m):
            if us[k]:
                ua[k] -= q * us[k]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        for r in a:
            if r[src]:
                r[dst] -= q * r[src]
        for r in V:
            if r[src]:
                r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(pi, t)
            if pj != t:
                swap_cols(pj, t)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = _round_div(x, piv)
                    add_row(i, t, q)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q = _round_div(x, piv)
                    add_col(j, t, q)
                    if a[t][j]:
                        clean = False
            if not clean:
                continue
            bad_row = None
            for i in range(t + 1, m):
                if any(x % piv for x in a[i][t + 1:]):
                    bad_row = i
                    break
            if bad_row is None:
                break
            # pull the offending row up so a smaller pivot appears in row t
            add_row(t, bad_row, -1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(
        U=IntMatrix.from_rows(U, m),
        V=IntMatrix.from_rows(V, n),
        D=IntMatrix.from_rows(a, n),
    )


def _round_div(x: int, y: int) -> int:
    """Integer nearest to x / y (ties toward floor)."""
    q, r = divmod(x, y)
    if 2 * abs(r) > abs(y):
        q += 1 if (r > 0) == (y > 0) else -1
    return q


def elementary_divisors(A: IntMatrix) -> list[int]:
    """Nonzero Smith invariants of ``A`` (units included)."""
    return [d for d in smith_normal_form(A).invariants if d]


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a saturated basis of ``{x in Z^n : A x = 0}``."""
    n = A.cols
    if A.rows == 0:
        return IntMatrix.identity(n)
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V.select_columns(range(r, n))


def quotient_group(sub_gens: IntMatrix, ambient_gens: IntMatrix) -> FiniteAbelianGroup:
    """Structure of ``L_ambient / L_sub`` for the column lattices of the inputs.

    Generators need not be independent. Raises :class:`ContainmentError` if
    the sub lattice escapes the ambient one, :class:`InfiniteQuotientError`
    if the ranks differ.
    """
    if sub_gens.rows != ambient_gens.rows:
        raise ValueError("generator matrices live in different ambient spaces")
    snf = smith_normal_form(ambient_gens)
    r = snf.rank
    if r == 0:
        if not sub_gens.is_zero():
            raise ContainmentError("nonzero sublattice inside the zero lattice")
        return FiniteAbelianGroup(())
    d = snf.invariants
    S = snf.U @ sub_gens
    coords = []
    for i in range(S.rows):
        row = S.row(i)
        if i >= r:
            if any(row):
                raise ContainmentError("sublattice is not contained in the ambient lattice")
            continue
        if any(x % d[i] for x in row):
            raise ContainmentError("sublattice is not contained in the ambient lattice")
        coords.append([x // d[i] for x in row])
    Y = IntMatrix.from_rows(coords, S.cols)
    inv = smith_normal_form(Y).invariants if Y.cols else []
    nonzero = [x for x in inv if x]
    if len(nonzero) < r:
        raise InfiniteQuotientError(
            f"sublattice has rank {len(nonzero)} but ambient lattice has rank {r}"
        )
    return FiniteAbelianGroup(_canonical_divisors(nonzero))


def solve_integer(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    """An integer ``X`` with ``A @ X == B``; raises if none exists."""
    if A.rows != B.rows:
        raise ValueError("row counts differ")
    snf = smith_normal_form(A)
    d = snf.invariants
    r = snf.rank
    C = snf.U @ B
    Y = [[0] * B.cols for _ in range(A.cols)]
    for i in range(C.rows):
        row = C.row(i)
        if i >= r:
            if any(row):
                raise NoIntegerSolution("system is inconsistent over Q")
            continue
        for j, x in enumerate(row):
            if x % d[i]:
                raise NoIntegerSolution("system has no integral solution")
            Y[i][j] = x // d[i]
    return snf.V @ IntMatrix.from_rows(Y, B.cols)


def hermite_normal_form(A: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form, zero rows dropped.

    The returned rows form a basis of the row lattice of ``A``: echelon
    shape, positive pivots, entries above each pivot reduced into
    ``[0, pivot)``.
    """
    a = A.to_lists()
    m, n = A.rows, A.cols
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        # gcd-combine column c below row r into row r
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = _xgcd(x, y)
            u, v = x // g, y // g
            ra, rb = a[r], a[i]
            a[r] = [s * p + t * q for p, q in zip(ra, rb)]
            a[i] = [-v * p + u * q for p, q in zip(ra, rb)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        piv = a[r][c]
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [p - q * s for p, s in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return IntMatrix.from_rows(a[:r], n)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def determinant(A: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not A.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n == 0:
        return 1
    a = A.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(A: IntMatrix) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises ZeroDivisionError if singular."""
    if not A.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = A.rows
    aug = [[Fraction(x) for x in A.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def lll_reduce(A: IntMatrix) -> IntMatrix:
    """LLL-reduce the rows of ``A`` (delta = 3/4) in pure integer arithmetic.

    Works with the Gram-Schmidt denominators d_i and the scaled
    coefficients lambda_{k,j} = d_j mu_{k,j}, which stay integral, so no
    fractions are ever formed. Rows must be linearly independent.
    """
    b = A.to_lists()
    n = len(b)
    if n <= 1:
        return A

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [0] * (n + 1)  # d[i+1] is the Gram determinant of the first i+1 rows
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (B * t + mu * lam[i][k]) // d[k + 1]
        d[k] = B

    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("rows are linearly dependent")
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("rows are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return IntMatrix.from_rows(b, A.cols)


def parse_matrix(text: str) -> IntMatrix:
    """Parse the ``rows cols`` header + whitespace rows format; ``#`` lines are comments."""
    from .errors import ParseError

    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty matrix file")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("header must be 'rows cols'", no)
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"bad header {header!r}", no) from None
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} rows, found {len(body)}", body[-1][0] if body else no)
    data = []
    for no, ln in body:
        try:
            vals = [int(x) for x in ln.split()]
        except ValueError:
            raise ParseError(f"non-integer entry in {ln!r}", no) from None
        if len(vals) != cols:
            raise ParseError(f"expected {cols} entries, found {len(vals)}", no)
        data.append(vals)
    return IntMatrix.from_rows(data, cols)


def format_matrix(A: IntMatrix) -> str:
    lines = [f"{A.rows} {A.cols}"]
    lines += [" ".join(str(x) for x in A.row(i)) for i in range(A.rows)]
    return "\n".join(lines) + "\n"

"""Tate cohomology of a cyclic group acting on lattices and finite modules.

For G = <g> of order N with norm map Nr = 1 + g + ... + g^(N-1):

    H^0 = Ker(g - 1) / Im(Nr)        H^1 = Ker(Nr) / Im(g - 1)

Negative degrees follow by 2-periodicity, so only these two are computed.
Finite modules are presented as Z^n / L and every kernel is lifted to a
lattice in Z^n before taking quotients, so all work stays in exact integer
linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import element_order
from .cyclotomic import RamificationContext, one_minus_zeta_valuation
from .errors import NoIntegerSolution, NotPreserved, OrderError
from .exactlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    kernel_basis,
    p_part,
    quotient_group,
    solve_integer,
)


@dataclass(frozen=True)
class CyclicAction:
    """An integer matrix ``g`` with ``g**N == I``.

    ``N`` is the order of the acting cyclic group. It may be a multiple of
    the order of the matrix (e.g. the trivial action of Z/N), which changes
    the norm map and hence the cohomology.
    """

    g: IntMatrix
    N: int

    def __post_init__(self):
        if not self.g.is_square:
            raise ValueError("action matrix must be square")
        if self.N < 1:
            raise OrderError("group order must be positive")

    @property
    def rank(self) -> int:
        return self.g.rows

    def verify(self) -> None:
        if self.g ** self.N != IntMatrix.identity(self.rank):
            raise OrderError(f"g^{self.N} is not the identity")

    def matrix_order(self) -> int:
        """Exact order of ``g`` (a divisor of N)."""
        ident = IntMatrix.identity(self.rank)
        power = ident
        for k in range(1, self.N + 1):
            power = power @ self.g
            if power == ident:
                return k
        raise OrderError(f"g has no order dividing {self.N}")

    def norm(self) -> IntMatrix:
        n = self.rank
        acc = IntMatrix.zeros(n, n)
        power = IntMatrix.identity(n)
        for _ in range(self.N):
            acc = acc + power
            power = power @ self.g
        return acc


@dataclass(frozen=True)
class PresentedModule:
    """The module Z^ambient_rank / (column span of ``relations``)."""

    ambient_rank: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.rows != self.ambient_rank:
            raise ValueError("relation vectors must live in Z^ambient_rank")

    @classmethod
    def cyclic(cls, n: int) -> PresentedModule:
        return cls(1, IntMatrix.from_rows([[n]]))

    @classmethod
    def free_mod(cls, rank: int, modulus: int) -> PresentedModule:
        """(Z/modulus)^rank."""
        return cls(rank, IntMatrix.identity(rank).scale(modulus))

    def structure(self) -> FiniteAbelianGroup:
        return quotient_group(self.relations, IntMatrix.identity(self.ambient_rank))


@dataclass(frozen=True)
class TateResult:
    h0: FiniteAbelianGroup
    h1: FiniteAbelianGroup
    N: int

    def __post_init__(self):
        for name, grp in (("h0", self.h0), ("h1", self.h1)):
            if any(self.N % d for d in grp.elementary_divisors):
                raise ArithmeticError(f"{name} = {grp} is not killed by N={self.N}")

    def p_part(self, p: int) -> TateResult:
        return TateResult(p_part(self.h0, p), p_part(self.h1, p), self.N)

    def herbrand_quotient(self) -> Fraction:
        return Fraction(self.h0.order, self.h1.order)


def _preimage_lattice(M: IntMatrix, relations: IntMatrix) -> IntMatrix:
    """Generators of {x in Z^n : M x in L}, L the column span of ``relations``."""
    n = M.cols
    if relations.cols == 0:
        return kernel_basis(M)
    block = M.hstack(-relations)
    K = kernel_basis(block)
    return K.select_rows(range(n))


def _tate(g: IntMatrix, N: int, relations: IntMatrix) -> TateResult:
    n = g.rows
    ident = IntMatrix.identity(n)
    action = CyclicAction(g, N)
    Nr = action.norm()
    g1 = g - ident
    # H^0: lattice {x : (g-1)x in L} modulo Nr Z^n + L
    ker0 = _preimage_lattice(g1, relations)
    im0 = Nr.hstack(relations) if relations.cols else Nr
    ker1 = _preimage_lattice(Nr, relations)
    im1 = g1.hstack(relations) if relations.cols else g1
    h0 = quotient_group(im0, ker0)
    h1 = quotient_group(im1, ker1)
    return TateResult(h0, h1, N)


def tate_free(action: CyclicAction, prime: int | None = None) -> TateResult:
    """H^0 and H^1 of <g> acting on Z^n; p-primary parts only if ``prime`` is given."""
    action.verify()
    n = action.rank
    result = _tate(action.g, action.N, IntMatrix.zeros(n, 0))
    return result.p_part(prime) if prime is not None else result


def check_preserves(g: IntMatrix, module: PresentedModule) -> None:
    try:
        solve_integer(module.relations, g @ module.relations)
    except NoIntegerSolution:
        raise NotPreserved("g does not map the relation lattice into itself") from None


def tate_presented(g: IntMatrix, module: PresentedModule, N: int, prime: int | None = None) -> TateResult:
    """H^0 and H^1 of <g> acting on the finite module Z^n / L."""
    if g.rows != module.ambient_rank or not g.is_square:
        raise ValueError("action matrix does not match the module")
    if N < 1:
        raise OrderError("group order must be positive")
    check_preserves(g, module)
    diff = g ** N - IntMatrix.identity(g.rows)
    try:
        solve_integer(module.relations, diff)
    except NoIntegerSolution:
        raise OrderError(f"g^{N} does not act as the identity on the module") from None
    result = _tate(g, N, module.relations)
    return result.p_part(prime) if prime is not None else result


def herbrand_check(action: CyclicAction, modulus: int) -> bool:
    """|H^0| == |H^1| for the reduction of the lattice modulo ``modulus``."""
    module = PresentedModule.free_mod(action.rank, modulus)
    res = tate_presented(action.g, module, action.N)
    return res.h0.order == res.h1.order


# ---------------------------------------------------------------------------
# rank one modules R_{n,m} over R_p = Z_p[zeta_{N|h|}]

@dataclass(frozen=True)
class RnmCohomology:
    """Lengths of H^0 and H^1 of R_{n,m}, counted in the normalized valuation."""

    h0_length: int
    h1_length: int
    eigen_exponent: int

    def __post_init__(self):
        if self.h0_length and self.h1_length:
            raise ArithmeticError("R_{n,m} cannot have both H^0 and H^1 nonzero")


def rnm_cohomology(N: int, n: int, m: int, ctx: RamificationContext) -> RnmCohomology:
    """Cohomology of the rank one module on which g acts as zeta_N^n and h as zeta_|h|^m.

    H^0 = R_p / N R_p when n = 0, otherwise H^1 = R_p / (1 - zeta_N^n) R_p.
    Only the length matters, and the prime-to-p part of N is a unit.
    """
    if ctx.N != N:
        raise ValueError(f"context was built for N={ctx.N}, not {N}")
    n %= N
    m %= ctx.h_order
    if n == 0:
        return RnmCohomology(h0_length=ctx.n_i * ctx.vp, h1_length=0, eigen_exponent=m)
    t = element_order(n, N)
    val = one_minus_zeta_valuation(t, ctx)
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral length {val}")
    return RnmCohomology(h0_length=0, h1_length=int(val), eigen_exponent=m)


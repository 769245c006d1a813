"""The binary Golay code, the Leech lattice and M24 acting on it.

Coordinates are labelled 0..22 for F_23 and 23 for the point at infinity.
The code is the extended quadratic residue code spanned by the translates
of {nonresidues} + {infinity}; with this labelling x -> x + 1, x -> -1/x and
Conway's x -> x^3/9 (residues), 9x^3 (nonresidues) all preserve it.

Lattice vectors are stored multiplied by sqrt(8), so they are integer
vectors and the inner product is dot(x, y) / 8.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .errors import AxiomError, ConstructionError, DataError, NotAnAutomorphism, NotFound, ParseError
from .exactlinalg import (
    IntMatrix,
    determinant,
    hermite_normal_form,
    lll_reduce,
    rational_inverse,
)
from .tate import CyclicAction, TateResult, tate_free

LENGTH = 24
INFINITY = 23

GOLAY_GENERATOR = (
    "100000000000101011100011",
    "010000000000111110010010",
    "001000000000110100101011",
    "000100000000110001110110",
    "000010000000110011011001",
    "000001000000011001101101",
    "000000100000001100110111",
    "000000010000101101111000",
    "000000001000010110111100",
    "000000000100001011011110",
    "000000000010101110001101",
    "000000000001010111000111",
)

GOLAY_WEIGHTS = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


def _word(bits) -> int:
    w = 0
    for i, b in enumerate(bits):
        if b:
            w |= 1 << i
    return w


@dataclass(frozen=True)
class GolayCode:
    generator: tuple[tuple[int, ...], ...]
    codewords: frozenset[int] = field(repr=False)

    def weight_distribution(self) -> dict[int, int]:
        return dict(sorted(Counter(w.bit_count() for w in self.codewords).items()))

    def __contains__(self, word: int) -> bool:
        return word in self.codewords

    def preserved_by(self, perm: tuple[int, ...]) -> bool:
        return all(_permute_word(perm, w) in self.codewords for w in self.codewords)


def _span(rows: list[int]) -> frozenset[int]:
    words = {0}
    for r in rows:
        words |= {w ^ r for w in words}
    return frozenset(words)


def build_golay(generator: tuple[str, ...] = GOLAY_GENERATOR) -> GolayCode:
    rows = [_word(int(c) for c in row) for row in generator]
    words = _span(rows)
    gen = tuple(tuple(int(c) for c in row) for row in generator)
    code = GolayCode(gen, words)
    if len(words) != 4096:
        raise ConstructionError(f"generator spans {len(words)} words, not 4096")
    dist = code.weight_distribution()
    if dist != GOLAY_WEIGHTS:
        raise ConstructionError(f"weight distribution {dist} is not that of the Golay code")
    for a in rows:
        for b in rows:
            if (a & b).bit_count() % 2:
                raise ConstructionError("generator rows are not mutually orthogonal")
    return code


# ---------------------------------------------------------------------------
# the lattice


@dataclass(frozen=True)
class LeechBasis:
    B: IntMatrix  # rows are basis vectors, scaled by sqrt(8)
    gram: IntMatrix

    @cached_property
    def inverse(self) -> list[list[Fraction]]:
        return rational_inverse(self.B)

    def norms(self) -> list[int]:
        return self.gram.diag()


def _leech_generators(code: GolayCode) -> list[list[int]]:
    gens = [[2 * x for x in row] for row in code.generator]
    for i in range(1, LENGTH):
        for s in (4, -4):
            v = [0] * LENGTH
            v[0] = 4
            v[i] = s
            gens.append(v)
    gens.append([-3] + [1] * (LENGTH - 1))
    return gens


def _leading_minors_positive(G: IntMatrix) -> bool:
    n = G.rows
    return all(determinant(G.select_rows(range(k)).select_columns(range(k))) > 0 for k in range(1, n + 1))


def short_vectors(gram: IntMatrix, bound: int) -> list[tuple[int, ...]]:
    """All nonzero x with x^T gram x <= bound, one of each +-pair (Fincke-Pohst).

    The search tree is pruned in floating point with a safety margin on the
    budget, so rounding can only add candidates, never drop one; each leaf
    is then accepted or rejected by an exact integer evaluation.
    """
    n = gram.rows
    g = gram.to_lists()
    q = [[float(x) for x in row] for row in g]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    slack = 1e-6 * (1 + bound)
    found: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, budget: float) -> None:
        c = sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(budget, 0.0) / q[i][i])
        for xi in range(math.floor(-c - r), math.ceil(-c + r) + 1):
            used = q[i][i] * (xi + c) ** 2
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                nz = [(a, t) for a, t in enumerate(x) if t]
                if nz:
                    norm = sum(g[a][b] * s * t for a, s in nz for b, t in nz)
                    if norm <= bound:
                        found.append(tuple(x))
            else:
                rec(i - 1, budget - used)
        x[i] = 0

    rec(n - 1, bound + slack)
    return [v for v in found if next(t for t in v if t) > 0]


def build_leech(code: GolayCode) -> LeechBasis:
    gens = IntMatrix.from_rows(_leech_generators(code))
    basis = hermite_normal_form(gens)
    if basis.rows != LENGTH:
        raise AxiomError("rank 24", f"generators span rank {basis.rows}")
    B = lll_reduce(basis)
    prod = B @ B.T
    if any(x % 8 for x in prod.entries):
        raise AxiomError("integral", "B B^T is not divisible by 8")
    G = IntMatrix(prod.rows, prod.cols, tuple(x // 8 for x in prod.entries))
    if G != G.T:
        raise AxiomError("symmetric")
    if any(x % 2 for x in G.diag()):
        raise AxiomError("even", "odd norm on the diagonal")
    if not _leading_minors_positive(G):
        raise AxiomError("positive definite")
    det = determinant(G)
    if det != 1:
        raise AxiomError("unimodular", f"det(Gram) = {det}")
    roots = short_vectors(G, 2)
    if roots:
        raise AxiomError("no roots", f"found norm-2 vector {roots[0]}")
    return LeechBasis(B, G)


# ---------------------------------------------------------------------------
# M24


@dataclass(frozen=True)
class PermAutomorphism:
    """perm[i] is the image of coordinate i."""

    perm: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if sorted(self.perm) != list(range(LENGTH)):
            raise ValueError("not a permutation of 0..23")

    @classmethod
    def identity(cls) -> PermAutomorphism:
        return cls(tuple(range(LENGTH)), "1")

    def __mul__(self, other: PermAutomorphism) -> PermAutomorphism:
        """self after other."""
        return PermAutomorphism(tuple(self.perm[other.perm[i]] for i in range(LENGTH)))

    def __pow__(self, k: int) -> PermAutomorphism:
        k %= self.order
        img = list(range(LENGTH))
        for i in range(LENGTH):
            j = i
            for _ in range(k):
                j = self.perm[j]
            img[i] = j
        return PermAutomorphism(tuple(img))

    def cycle_type(self) -> list[int]:
        seen = [False] * LENGTH
        lengths = []
        for i in range(LENGTH):
            if seen[i]:
                continue
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                n += 1
            lengths.append(n)
        return sorted(lengths, reverse=True)

    @property
    def order(self) -> int:
        return math.lcm(*self.cycle_type())

    def apply_vector(self, v) -> list[int]:
        out = [0] * LENGTH
        for i, x in enumerate(v):
            out[self.perm[i]] = x
        return out


def _permute_word(perm: tuple[int, ...], w: int) -> int:
    out = 0
    for i in range(LENGTH):
        if (w >> i) & 1:
            out |= 1 << perm[i]
    return out


def parse_generators(text: str, source: str | None = None) -> list[PermAutomorphism]:
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] != "PERM" or len(tok) != LENGTH + 2:
            raise ParseError("expected PERM <name> <24 images>", lineno, source)
        try:
            images = tuple(int(t) for t in tok[2:])
            gens.append(PermAutomorphism(images, tok[1]))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
    if not gens:
        raise ParseError("no PERM records", None, source)
    return gens


def load_generators(path: str | Path | None = None) -> list[PermAutomorphism]:
    from .qseries import data_dir

    path = Path(path) if path is not None else data_dir() / "m24_generators.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_generators(text, str(path))


def m24_element_of_order(
    code: GolayCode,
    target_order: int,
    seed: int,
    generators: list[PermAutomorphism] | None = None,
    budget: int = 2000,
) -> PermAutomorphism:
    """A code-preserving permutation of exact order ``target_order``.

    Random words in the generators are tried in a fixed seeded order; a word
    w whose order is a multiple of the target gives w^(ord/target).
    """
    if target_order < 1:
        raise ValueError("order must be positive")
    if target_order == 1:
        return PermAutomorphism.identity()
    gens = generators if generators is not None else load_generators()
    for g in gens:
        if not code.preserved_by(g.perm):
            raise NotFound(f"generator {g.name} does not preserve the code")
    rng = random.Random(seed)
    w = PermAutomorphism.identity()
    for _ in range(budget):
        w = w * rng.choice(gens)
        n = w.order
        if n % target_order == 0:
            cand = w ** (n // target_order)
            if cand.order == target_order and code.preserved_by(cand.perm):
                return cand
    raise NotFound(f"no element of order {target_order} after {budget} steps")


def action_on_leech(perm: PermAutomorphism, basis: LeechBasis) -> CyclicAction:
    """Matrix of ``perm`` on lattice coordinates (column vectors).

    If the basis rows are b_k, then perm(b_k) = sum_j X[k][j] b_j and a
    coordinate column c maps to X^T c.
    """
    n = LENGTH
    Bp = [perm.apply_vector(basis.B.row(k)) for k in range(n)]
    inv = basis.inverse
    X = []
    for k in range(n):
        row = []
        for j in range(n):
            v = sum((Bp[k][i] * inv[i][j] for i in range(n)), Fraction(0))
            if v.denominator != 1:
                raise NotAnAutomorphism("permutation does not preserve the lattice")
            row.append(int(v))
        X.append(row)
    P = IntMatrix.from_rows(X).T
    if P.T @ basis.gram @ P != basis.gram:
        raise NotAnAutomorphism("permutation does not preserve the inner product")
    return CyclicAction(P, perm.order)


def h1_lattice_check(perm: PermAutomorphism, basis: LeechBasis) -> TateResult:
    """Tate cohomology of <perm> on the lattice; the caller decides what to assert."""
    return tate_free(action_on_leech(perm, basis))

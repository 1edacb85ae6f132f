"""Exact rational kernel: divisor classes, intersection forms, and the
negative-definite solver everything else is built on.

Rationals are :class:`fractions.Fraction` throughout.  Nothing in this
module touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotNegativeDefinite

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would smuggle rounding into exact data.
    """
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; use 'p/q'")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class DivClass:
    """A numerical class written in the coordinates of a lattice basis."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(to_rational(c) for c in self.coeffs))

    @classmethod
    def of(cls, *values) -> "DivClass":
        return cls(tuple(values))

    @classmethod
    def zero(cls, rank: int) -> "DivClass":
        return cls((Fraction(0),) * rank)

    @classmethod
    def unit(cls, rank: int, index: int) -> "DivClass":
        return cls(tuple(Fraction(int(i == index)) for i in range(rank)))

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other: "DivClass"):
        if len(other.coeffs) != len(self.coeffs):
            raise DimensionMismatch(f"class lengths differ: {len(self)} vs {len(other)}")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        self._check(other)
        return DivClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coeffs))

    def __mul__(self, scalar) -> "DivClass":
        s = to_rational(scalar)
        return DivClass(tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def extended(self, extra: int = 1) -> "DivClass":
        return DivClass(self.coeffs + (Fraction(0),) * extra)


def combine(terms: Iterable[tuple[Fraction, DivClass]], rank: int) -> DivClass:
    """Sum of ``c * D`` over ``terms``; the empty sum is the zero class."""
    acc = [Fraction(0)] * rank
    for c, d in terms:
        if len(d) != rank:
            raise DimensionMismatch(f"expected length {rank}, got {len(d)}")
        if c:
            for i, x in enumerate(d.coeffs):
                acc[i] += c * x
    return DivClass(tuple(acc))


@dataclass(frozen=True)
class NSLattice:
    """Numerical lattice of a smooth projective surface.

    ``gram`` is stored as given; symmetry is audited by
    :func:`logsurf.surface.validate` rather than enforced here, so that a
    malformed input file can be reported instead of crashing the parser.
    """

    gram: tuple[tuple[Fraction, ...], ...]
    canonical: DivClass
    basis: tuple[str, ...] = ()
    # gram scaled to integers, and the scale
    _int_gram: tuple = field(init=False, repr=False, compare=False)
    _den: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gram = tuple(tuple(to_rational(x) for x in row) for row in self.gram)
        n = len(gram)
        if n == 0:
            raise DimensionMismatch("lattice rank must be positive")
        if any(len(row) != n for row in gram):
            raise DimensionMismatch("gram matrix must be square")
        object.__setattr__(self, "gram", gram)
        den = math.lcm(*(x.denominator for row in gram for x in row))
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_int_gram", tuple(tuple(int(x * den) for x in row) for row in gram))
        if len(self.canonical) != n:
            raise DimensionMismatch("canonical class length differs from rank")
        basis = tuple(self.basis) or tuple(f"b{i}" for i in range(n))
        if len(basis) != n:
            raise DimensionMismatch("basis names length differs from rank")
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def is_symmetric(self) -> bool:
        g = self.gram
        return all(g[i][j] == g[j][i] for i in range(self.rank) for j in range(i))

    def basis_class(self, name: str) -> DivClass:
        return DivClass.unit(self.rank, self.basis.index(name))


def intersect(L: NSLattice, a: DivClass, b: DivClass) -> Fraction:
    """Intersection number ``a . b`` under the lattice form."""
    n = L.rank
    if len(a) != n or len(b) != n:
        raise DimensionMismatch(f"classes must have length {n}")
    da = math.lcm(*(x.denominator for x in a.coeffs))
    db = math.lcm(*(x.denominator for x in b.coeffs))
    ia = [int(x * da) for x in a.coeffs]
    ib = [int(x * db) for x in b.coeffs]
    total = 0
    for i, ai in enumerate(ia):
        if ai:
            row = L._int_gram[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(ib) if bj)
    return Fraction(total, da * db * L._den)


def self_intersection(L: NSLattice, a: DivClass) -> Fraction:
    return intersect(L, a, a)


def gram_of(L: NSLattice, classes: Sequence[DivClass]) -> list[list[Fraction]]:
    return [[intersect(L, a, b) for b in classes] for a in classes]


def _diagonalize(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Congruence-diagonalize a symmetric rational matrix; returns the diagonal."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    diag = []
    for k in range(n):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][i] != 0), None)
            if pivot is not None:
                m[k], m[pivot] = m[pivot], m[k]
                for row in m:
                    row[k], row[pivot] = row[pivot], row[k]
            else:
                partner = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if partner is not None:
                    # row/col k += row/col partner makes the pivot 2*m[k][partner]
                    for j in range(n):
                        m[k][j] += m[partner][j]
                    for i in range(n):
                        m[i][k] += m[i][partner]
        p = m[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        for j in range(k + 1, n):
            m[k][j] = Fraction(0)
        for i in range(k + 1, n):
            m[i][k] = Fraction(0)
    return diag


def signature(L: NSLattice) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of the form, computed exactly."""
    diag = _diagonalize(L.gram)
    pos = sum(1 for d in diag if d > 0)
    neg = sum(1 for d in diag if d < 0)
    return pos, neg, len(diag) - pos - neg


def leading_minors(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Leading principal minors via fraction-exact elimination without pivoting.

    Stops early (returning the minors found so far, the last being zero) when a
    minor vanishes, since later pivots are then undefined.
    """
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    minors = []
    det = Fraction(1)
    for k in range(n):
        p = m[k][k]
        det *= p
        minors.append(det)
        if p == 0:
            break
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return minors


def matrix_is_negative_definite(matrix: Sequence[Sequence[Fraction]]) -> bool:
    n = len(matrix)
    if n == 0:
        return True
    minors = leading_minors(matrix)
    if len(minors) < n:
        return False
    # (-1)^k * minor_k > 0 for k = 1..n
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


def is_negative_definite(L: NSLattice, classes: Sequence[DivClass]) -> bool:
    """True iff the Gram matrix of ``classes`` is negative definite.

    The empty list counts as negative definite, so that "nothing contracted"
    needs no special case downstream.
    """
    return matrix_is_negative_definite(gram_of(L, classes))


def solve_linear(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``A x = b`` for square nonsingular ``A`` by Gauss-Jordan."""
    n = len(A)
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for c in range(n):
        r = next((r for r in range(c, n) if m[r][c] != 0), None)
        if r is None:
            raise ZeroDivisionError("singular system")
        m[c], m[r] = m[r], m[c]
        p = m[c][c]
        if p != 1:
            m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


def solve_orthogonal(L: NSLattice, D: DivClass, E: Sequence[DivClass]) -> list[Fraction]:
    """Coefficients ``a`` with ``(D + sum a_j E_j) . E_k = 0`` for every k."""
    if not E:
        return []
    G = gram_of(L, E)
    if not matrix_is_negative_definite(G):
        raise NotNegativeDefinite("classes to be made orthogonal are not negative definite")
    rhs = [-intersect(L, D, e) for e in E]
    return solve_linear(G, rhs)

"""Log surfaces on a fixed smooth model.

A :class:`LogSurface` describes a normal projective surface ``X`` through a
smooth projective surface ``Y``: the lattice and curves live on ``Y`` and
``X`` is obtained by contracting the curves named in ``contracted``.
Contracting therefore only grows a set; no new geometry is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    InvalidMultiplicity,
    NotMinusOneCurve,
    NotNegativeDefinite,
    UnknownCurve,
)
from .ratlattice import (
    DivClass,
    NSLattice,
    intersect,
    matrix_is_negative_definite,
    gram_of,
    signature,
    solve_linear,
    to_rational,
)


def genus_from_adjunction(L: NSLattice, cls: DivClass) -> Fraction:
    """``1 + (C^2 + K.C)/2``; integral for classes of actual curves."""
    return 1 + (intersect(L, cls, cls) + intersect(L, L.canonical, cls)) / 2


@dataclass(frozen=True)
class Curve:
    name: str
    cls: DivClass
    pa: int
    exceptional: bool = False


@dataclass(frozen=True)
class Assumptions:
    snc_resolution: bool = False
    curve_list_complete: bool = False


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


@dataclass(frozen=True)
class LogSurface:
    lattice: NSLattice
    curves: tuple[Curve, ...]
    boundary: Mapping[str, Fraction] = field(default_factory=dict)
    contracted: frozenset = frozenset()
    assumptions: Assumptions = Assumptions()
    # contracted curves allowed to keep a positive boundary coefficient
    boundary_exempt: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(
            self, "boundary", {k: to_rational(v) for k, v in dict(self.boundary).items()}
        )
        object.__setattr__(self, "contracted", frozenset(self.contracted))
        object.__setattr__(self, "boundary_exempt", frozenset(self.boundary_exempt))

    __hash__ = None  # boundary is a dict

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.curves]

    def curve(self, name: str) -> Curve:
        for c in self.curves:
            if c.name == name:
                return c
        raise UnknownCurve(name)

    def has_curve(self, name: str) -> bool:
        return any(c.name == name for c in self.curves)

    def coefficient(self, name: str) -> Fraction:
        return self.boundary.get(name, Fraction(0))

    @property
    def live_curves(self) -> list[Curve]:
        """Curves not contracted on X, in list order."""
        return [c for c in self.curves if c.name not in self.contracted]

    @property
    def contracted_curves(self) -> list[Curve]:
        """Contracted curves, in list order."""
        return [c for c in self.curves if c.name in self.contracted]

    def intersect(self, a: DivClass, b: DivClass) -> Fraction:
        """Intersection on the smooth model Y."""
        return intersect(self.lattice, a, b)

    @cached_property
    def _contracted_inverse(self):
        """Data for projecting onto the orthogonal complement of the contracted set."""
        classes = [c.cls for c in self.contracted_curves]
        if not classes:
            return classes, None
        G = gram_of(self.lattice, classes)
        if not matrix_is_negative_definite(G):
            raise NotNegativeDefinite("contracted curves are not negative definite")
        n = len(classes)
        inv_cols = [solve_linear(G, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
        inverse = [[inv_cols[j][i] for j in range(n)] for i in range(n)]
        return classes, inverse

    def pullback_correction(self, D: DivClass) -> dict[str, Fraction]:
        """Coefficients ``a_j`` making ``D + sum a_j E_j`` orthogonal to every
        contracted curve ``E_j``."""
        classes, inverse = self._contracted_inverse
        if not classes:
            return {}
        rhs = [-self.intersect(D, e) for e in classes]
        names = [c.name for c in self.contracted_curves]
        return {
            name: sum((inverse[i][j] * rhs[j] for j in range(len(rhs))), Fraction(0))
            for i, name in enumerate(names)
        }

    def pullback(self, D: DivClass) -> DivClass:
        """Mumford pullback to Y of the class D pushed forward to X."""
        corr = self.pullback_correction(D)
        out = D
        for c in self.contracted_curves:
            a = corr[c.name]
            if a:
                out = out + c.cls * a
        return out

    def x_intersect(self, a: DivClass, b: DivClass) -> Fraction:
        """Intersection on X: ``f^*a . f^*b`` (only one side needs pulling back)."""
        return self.intersect(self.pullback(a), b)

    def boundary_class(self) -> DivClass:
        """Strict-transform class of the boundary of X (contracted curves dropped)."""
        out = DivClass.zero(self.rank)
        for c in self.live_curves:
            d = self.coefficient(c.name)
            if d:
                out = out + c.cls * d
        return out

    def adjoint_class(self) -> DivClass:
        """``K_Y`` plus the strict transform of the boundary of X."""
        return self.lattice.canonical + self.boundary_class()


# --- presets -----------------------------------------------------------------


def projective_plane(line: bool = True) -> LogSurface:
    """P^2 with hyperplane class H and, optionally, a line named ``L``."""
    lat = NSLattice(((1,),), DivClass.of(-3), ("H",))
    curves = (Curve("L", DivClass.of(1), 0),) if line else ()
    return LogSurface(lat, curves)


def hirzebruch(e: int) -> LogSurface:
    """F_e with negative section ``s`` (s^2 = -e) and fibre ``f``."""
    if e < 0:
        raise ValueError("e must be non-negative")
    lat = NSLattice(((-e, 1), (1, 0)), DivClass.of(-2, -(e + 2)), ("s", "f"))
    curves = (Curve("s", DivClass.of(1, 0), 0), Curve("f", DivClass.of(0, 1), 0))
    return LogSurface(lat, curves)


# --- bookkeeping -------------------------------------------------------------


def _fresh_name(X: LogSurface, stem: str = "E") -> str:
    taken = set(X.names) | set(X.lattice.basis)
    k = 1
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def add_curve(X: LogSurface, name: str, cls: DivClass, pa: int | None = None) -> LogSurface:
    """Append a curve; ``pa`` defaults to the adjunction value.

    The caller asserts that an irreducible curve of this class exists.
    """
    if X.has_curve(name):
        raise ValueError(f"duplicate curve name {name!r}")
    if len(cls) != X.rank:
        raise DimensionMismatch("curve class length differs from lattice rank")
    g = genus_from_adjunction(X.lattice, cls)
    if g.denominator != 1:
        raise InvalidMultiplicity(f"{name}: C^2 + K.C is odd")
    if pa is None:
        pa = int(g)
    if pa < 0:
        raise InvalidMultiplicity(f"{name}: negative arithmetic genus")
    return replace(X, curves=X.curves + (Curve(name, cls, pa),))


def with_boundary(X: LogSurface, boundary: Mapping[str, object]) -> LogSurface:
    merged = dict(X.boundary)
    for k, v in boundary.items():
        X.curve(k)
        merged[k] = to_rational(v)
    return replace(X, boundary={k: v for k, v in merged.items() if v != 0})


def blow_up(X: LogSurface, mults: Mapping[str, int] | None = None, name: str | None = None) -> LogSurface:
    """Blow up one point of the smooth model.

    ``mults`` gives the multiplicity of each listed curve at the centre
    (absent means 0).  Infinitely near centres are encoded by giving
    multiplicity 1 on earlier exceptional curves.  The centre must lie off
    the contracted curves; the caller asserts this.
    """
    mults = dict(mults or {})
    for k, m in mults.items():
        X.curve(k)
        if m < 0:
            raise InvalidMultiplicity(f"{k}: negative multiplicity")
    name = name or _fresh_name(X)
    if X.has_curve(name) or name in X.lattice.basis:
        raise ValueError(f"name {name!r} already in use")
    L = X.lattice
    n = L.rank
    zero = Fraction(0)
    gram = [list(row) + [zero] for row in L.gram]
    gram.append([zero] * n + [Fraction(-1)])
    e = DivClass.unit(n + 1, n)
    lat = NSLattice(tuple(map(tuple, gram)), L.canonical.extended() + e, L.basis + (name,))
    curves = []
    for c in X.curves:
        m = mults.get(c.name, 0)
        pa = c.pa - m * (m - 1) // 2
        if pa < 0:
            raise InvalidMultiplicity(f"{c.name}: multiplicity {m} exceeds what genus {c.pa} allows")
        curves.append(replace(c, cls=c.cls.extended() - e * m, pa=pa))
    curves.append(Curve(name, e, 0, exceptional=True))
    return replace(X, lattice=lat, curves=tuple(curves))


def blow_down(X: LogSurface, name: str) -> LogSurface:
    """Contract a (-1)-curve on the smooth model itself (rank drops by one)."""
    c = X.curve(name)
    L = X.lattice
    e = c.cls
    if not (
        X.intersect(e, e) == -1
        and X.intersect(L.canonical, e) == -1
        and c.pa == 0
        and X.coefficient(name) == 0
        and name not in X.contracted
    ):
        raise NotMinusOneCurve(name)
    k = max(i for i, x in enumerate(e.coeffs) if x != 0)
    keep = [i for i in range(L.rank) if i != k]
    dots = [sum(L.gram[i][j] * e[j] for j in range(L.rank)) for i in range(L.rank)]
    gram = tuple(tuple(L.gram[i][j] + dots[i] * dots[j] for j in keep) for i in keep)

    def project(D: DivClass) -> DivClass:
        # coordinates of D + (D.e)e in the basis {b_i + (b_i.e)e : i != k}
        return DivClass(tuple(D[i] - D[k] * e[i] / e[k] for i in keep))

    canonical = project(L.canonical + e * (-1))
    lat = NSLattice(gram, canonical, tuple(L.basis[i] for i in keep))
    curves = []
    for other in X.curves:
        if other.name == name:
            continue
        cls = project(other.cls)
        curves.append(replace(other, cls=cls, pa=int(genus_from_adjunction(lat, cls))))
    boundary = {k2: v for k2, v in X.boundary.items() if k2 != name}
    return replace(X, lattice=lat, curves=tuple(curves), boundary=boundary)


def contract(X: LogSurface, names: Iterable[str], allow_boundary: bool = False) -> LogSurface:
    """Grow the contracted set; the lattice and curve data are untouched."""
    names = set(names)
    if not names:
        return X
    for n in names:
        X.curve(n)
        if X.coefficient(n) > 0 and not allow_boundary:
            raise ValueError(f"{n} carries boundary coefficient; pass allow_boundary=True")
    target = X.contracted | names
    classes = [c.cls for c in X.curves if c.name in target]
    if not matrix_is_negative_definite(gram_of(X.lattice, classes)):
        raise NotNegativeDefinite(f"cannot contract {sorted(names)}")
    exempt = X.boundary_exempt | {n for n in names if X.coefficient(n) > 0}
    return replace(X, contracted=frozenset(target), boundary_exempt=frozenset(exempt))


def picard_number(X: LogSurface) -> int:
    return X.rank - len(X.contracted)


def contracted_components(X: LogSurface) -> list[tuple[str, ...]]:
    """Connected components of the contracted set (edges: nonzero intersection),
    each listed in curve order, components ordered by first member."""
    members = X.contracted_curves
    seen: set[str] = set()
    comps = []
    for start in members:
        if start.name in seen:
            continue
        comp = {start.name}
        stack = [start]
        while stack:
            cur = stack.pop()
            for other in members:
                if other.name not in comp and X.intersect(cur.cls, other.cls) != 0:
                    comp.add(other.name)
                    stack.append(other)
        seen |= comp
        comps.append(tuple(c.name for c in members if c.name in comp))
    return comps


def validate(X: LogSurface) -> list[Violation]:
    """Audit every LogSurface invariant; an empty list means valid."""
    out: list[Violation] = []
    L = X.lattice
    symmetric = L.is_symmetric()
    if not symmetric:
        out.append(Violation("GramNotSymmetric", "gram matrix is not symmetric"))
    else:
        pos, neg, zero = signature(L)
        if (pos, neg, zero) != (1, L.rank - 1, 0):
            out.append(Violation("SignatureNotHyperbolic", f"signature is {(pos, neg, zero)}"))
    names = X.names
    if len(set(names)) != len(names):
        out.append(Violation("DuplicateCurveName", "curve names are not distinct"))
    for c in X.curves:
        if len(c.cls) != L.rank:
            out.append(Violation("DimensionMismatch", f"{c.name}: class length {len(c.cls)}"))
            continue
        if not symmetric:
            continue
        g = genus_from_adjunction(L, c.cls)
        if g.denominator != 1:
            out.append(Violation("AdjunctionParity", f"{c.name}: C^2 + K.C is odd"))
        elif g < 0:
            out.append(Violation("NegativeGenus", f"{c.name}: adjunction genus {g}"))
        elif g != c.pa:
            out.append(Violation("GenusMismatch", f"{c.name}: pa {c.pa} but adjunction gives {g}"))
    for k, v in sorted(X.boundary.items()):
        if not X.has_curve(k):
            out.append(Violation("BoundaryUnknownCurve", k))
        elif not (0 <= v <= 1):
            out.append(Violation("BoundaryOutOfRange", f"{k}: {v}"))
    unknown = sorted(n for n in X.contracted if not X.has_curve(n))
    for n in unknown:
        out.append(Violation("ContractedUnknownCurve", n))
    if not unknown and symmetric and all(len(c.cls) == L.rank for c in X.curves):
        classes = [c.cls for c in X.contracted_curves]
        if not matrix_is_negative_definite(gram_of(L, classes)):
            out.append(Violation("ContractedNotNegDef", ", ".join(c.name for c in X.contracted_curves)))
    for n in sorted(X.contracted):
        if X.coefficient(n) > 0 and n not in X.boundary_exempt:
            out.append(Violation("ContractedBoundary", n))
    if picard_number(X) < 1:
        out.append(Violation("PicardNumberTooSmall", str(picard_number(X))))
    return out

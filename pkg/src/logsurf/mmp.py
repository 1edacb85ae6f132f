"""The log minimal model program on a fixed smooth model.

Every step contracts one listed curve, so a run is a monotone growth of the
contracted set and terminates after at most ``rho - 1`` steps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    AmbiguousConfiguration,
    LogSurfaceError,
    NotNefAndBig,
    NotPseudoEffective,
    RationalityViolation,
    StartNotNef,
)
from .logpair import has_only_rational_singularities
from .ratlattice import DivClass, combine, gram_of, solve_linear, to_rational
from .surface import LogSurface, contract, picard_number


class RayKind(enum.Enum):
    BIRATIONAL = "Birational"
    FIBER_TYPE = "FiberType"
    FANO_POINT = "FanoPoint"


@dataclass(frozen=True)
class ExtremalRay:
    kind: RayKind
    curve: str
    degree: Fraction  # -(K + Delta) .X curve, always positive


class OutcomeKind(enum.Enum):
    MINIMAL_MODEL = "MinimalModel"
    MFS_OVER_CURVE = "MoriFiberSpaceOverCurve"
    MFS_OVER_POINT = "MoriFiberSpaceOverPoint"


@dataclass(frozen=True)
class MMPStep:
    contracted_curve: str
    degree: Fraction
    rho_before: int
    rho_after: int


@dataclass(frozen=True)
class Decomposition:
    """``K + Delta = pullback_class + sum E[name] * name`` on the initial surface."""

    pullback_class: DivClass
    E: dict[str, Fraction]


@dataclass(frozen=True)
class MMPOutcome:
    kind: OutcomeKind
    initial: LogSurface
    final: LogSurface
    trace: tuple[MMPStep, ...]
    decomposition: Decomposition | None = None
    fiber_class: DivClass | None = None
    witness: ExtremalRay | None = None


TIEBREAKS = ("list", "reversed", "rotated")


def tiebreak_order(X: LogSurface, tiebreak: str | Sequence[str] = "list") -> list[str]:
    """Curve order used to break ties between equally negative curves.

    ``tiebreak`` is ``"list"``, ``"reversed"``, ``"rotated"`` (by one),
    ``"rotated:k"``, or an explicit sequence of curve names.
    """
    names = X.names
    if not isinstance(tiebreak, str):
        order = list(tiebreak)
        return order + [n for n in names if n not in order]
    if tiebreak == "list":
        return names
    if tiebreak == "reversed":
        return names[::-1]
    if tiebreak.startswith("rotated"):
        k = int(tiebreak.split(":", 1)[1]) if ":" in tiebreak else 1
        k = k % len(names) if names else 0
        return names[k:] + names[:k]
    raise ValueError(f"unknown tie-break order {tiebreak!r}")


def adjoint_degrees(X: LogSurface) -> dict[str, Fraction]:
    """``(K + Delta) .X C`` for every non-contracted listed curve."""
    adj = X.pullback(X.adjoint_class())
    return {c.name: X.intersect(adj, c.cls) for c in X.live_curves}


def _is_nef_on_list(X: LogSurface, cls: DivClass) -> bool:
    pulled = X.pullback(cls)
    return all(X.intersect(pulled, c.cls) >= 0 for c in X.live_curves)


def find_extremal(X: LogSurface, tiebreak: str | Sequence[str] = "list") -> ExtremalRay | None:
    """Pick a (K + Delta)-negative extremal ray certified by a listed curve.

    Candidates are the adjoint-negative curves, most negative first, ties in
    ``tiebreak`` order.  The first one that can be certified wins: a curve of
    negative square, or a square-zero curve nef on the list when rho = 2.
    At rho = 1 any negative curve means a Fano contraction to a point.
    """
    rank = {n: i for i, n in enumerate(tiebreak_order(X, tiebreak))}
    degrees = adjoint_degrees(X)
    candidates = sorted((d, rank[n], n) for n, d in degrees.items() if d < 0)
    if not candidates:
        return None
    rho = picard_number(X)
    if rho == 1:
        d, _, n = candidates[0]
        return ExtremalRay(RayKind.FANO_POINT, n, -d)
    for d, _, n in candidates:
        cls = X.curve(n).cls
        square = X.x_intersect(cls, cls)
        if square < 0:
            return ExtremalRay(RayKind.BIRATIONAL, n, -d)
        if square == 0 and rho == 2 and _is_nef_on_list(X, cls):
            return ExtremalRay(RayKind.FIBER_TYPE, n, -d)
    raise AmbiguousConfiguration(
        "adjoint-negative curves exist but none certifies an extremal ray: "
        + ", ".join(n for _, _, n in candidates)
    )


def _decompose_difference(X0: LogSurface, final: LogSurface, pullback_class: DivClass) -> dict[str, Fraction]:
    diff = X0.pullback(X0.adjoint_class()) - pullback_class
    support = final.contracted_curves
    if not support:
        if not diff.is_zero():
            raise LogSurfaceError("adjoint class changed without any contraction")
        return {}
    G = gram_of(final.lattice, [c.cls for c in support])
    coeffs = solve_linear(G, [final.intersect(diff, c.cls) for c in support])
    rebuilt = combine(zip(coeffs, (c.cls for c in support)), final.rank)
    if rebuilt != diff:
        raise LogSurfaceError("adjoint difference is not supported on contracted curves")
    E = {c.name: v for c, v in zip(support, coeffs) if c.name not in X0.contracted}
    if any(v <= 0 for v in E.values()):
        # negativity lemma: every contracted curve appears with positive coefficient
        raise LogSurfaceError(f"non-positive exceptional coefficient in {E}")
    return E


def mmp_run(X: LogSurface, tiebreak: str | Sequence[str] = "list") -> MMPOutcome:
    cur = X
    trace: list[MMPStep] = []
    while True:
        ray = find_extremal(cur, tiebreak)
        if ray is None:
            pullback_class = cur.pullback(cur.adjoint_class())
            E = _decompose_difference(X, cur, pullback_class)
            return MMPOutcome(
                OutcomeKind.MINIMAL_MODEL, X, cur, tuple(trace), Decomposition(pullback_class, E)
            )
        if ray.kind is RayKind.BIRATIONAL:
            rho = picard_number(cur)
            cur = contract(cur, [ray.curve], allow_boundary=True)
            trace.append(MMPStep(ray.curve, ray.degree, rho, picard_number(cur)))
            continue
        if ray.kind is RayKind.FIBER_TYPE:
            fiber = cur.pullback(cur.curve(ray.curve).cls)
            return MMPOutcome(OutcomeKind.MFS_OVER_CURVE, X, cur, tuple(trace), fiber_class=fiber, witness=ray)
        return MMPOutcome(OutcomeKind.MFS_OVER_POINT, X, cur, tuple(trace), witness=ray)


@dataclass(frozen=True)
class BoundCheck:
    label: str
    degree: Fraction
    bound: int
    passed: bool


def check_extremal_bound(outcome: MMPOutcome) -> list[BoundCheck]:
    """Degree bounds for extremal curves along a run.

    Birational steps need ``0 < degree <= 2``; a fibre needs degree <= 2.
    For a Fano endpoint the smallest degree among the listed curves is
    checked against 3, the bound that only P^2 attains; a failure there
    means the list lacks a minimal rational curve.
    """
    checks = [
        BoundCheck(f"step {i}: {s.contracted_curve}", s.degree, 2, 0 < s.degree <= 2)
        for i, s in enumerate(outcome.trace)
    ]
    if outcome.kind is OutcomeKind.MFS_OVER_CURVE:
        d = outcome.witness.degree
        checks.append(BoundCheck(f"fiber: {outcome.witness.curve}", d, 2, 0 < d <= 2))
    elif outcome.kind is OutcomeKind.MFS_OVER_POINT:
        degrees = adjoint_degrees(outcome.final)
        name, d = min(((n, -v) for n, v in degrees.items() if v < 0), key=lambda p: p[1])
        checks.append(BoundCheck(f"fano: {name}", d, 3, 0 < d <= 3))
    return checks


def uniqueness_check(X: LogSurface, tiebreaks: Sequence[str] = TIEBREAKS) -> bool:
    """Run the program under several tie-break orders and compare endpoints."""
    results = [mmp_run(X, t) for t in tiebreaks]
    if any(r.kind is not OutcomeKind.MINIMAL_MODEL for r in results):
        raise NotPseudoEffective("K + Delta is not pseudo-effective relative to the listed curves")
    first = results[0]
    return all(
        r.final.contracted == first.final.contracted and r.decomposition == first.decomposition
        for r in results[1:]
    )


def replay(outcome: MMPOutcome) -> list[LogSurface]:
    """Surfaces ``X_0, ..., X_k`` along the trace."""
    surfaces = [outcome.initial]
    for step in outcome.trace:
        surfaces.append(contract(surfaces[-1], [step.contracted_curve], allow_boundary=True))
    return surfaces


def rationality_trace(outcome: MMPOutcome) -> list[bool]:
    """Whether ``X_i`` has only Artin-rational singularities, for each i."""
    return [has_only_rational_singularities(S) for S in replay(outcome)]


def rationality_preserved(outcome: MMPOutcome) -> bool:
    flags = rationality_trace(outcome)
    return all(b or not a for a, b in zip(flags, flags[1:]))


def canonical_model(X: LogSurface) -> LogSurface:
    """Contract every listed curve that is trivial against a nef and big ``K + Delta``.

    With empty boundary the new singular points are checked to be rational
    whenever the old ones were.
    """
    adj = X.pullback(X.adjoint_class())
    degrees = {c.name: X.intersect(adj, c.cls) for c in X.live_curves}
    if X.intersect(adj, adj) <= 0 or any(d < 0 for d in degrees.values()):
        raise NotNefAndBig("K + Delta is not nef and big on the listed curves")
    trivial = [n for n, d in degrees.items() if d == 0]
    Y = contract(X, trivial, allow_boundary=True)
    no_boundary = not any(X.coefficient(c.name) for c in X.live_curves)
    if no_boundary and has_only_rational_singularities(X) and not has_only_rational_singularities(Y):
        raise RationalityViolation("canonical model acquired a non-rational singularity")
    return Y


def _boundary_class(X: LogSurface, delta: Mapping[str, object]) -> DivClass:
    terms = []
    for name, v in delta.items():
        q = to_rational(v)
        if not 0 <= q <= 1:
            raise ValueError(f"{name}: coefficient {q} outside [0, 1]")
        c = X.curve(name)
        if name in X.contracted:
            raise ValueError(f"{name} is contracted on X")
        terms.append((q, c.cls))
    return combine(terms, X.rank)


def nef_threshold(X: LogSurface, delta_from: Mapping[str, object], delta_to: Mapping[str, object]) -> Fraction:
    """Largest ``t`` in [0, 1] keeping ``K + (1-t) delta_from + t delta_to``
    nef against every listed curve."""
    K = X.lattice.canonical
    start = X.pullback(K + _boundary_class(X, delta_from))
    end = X.pullback(K + _boundary_class(X, delta_to))
    best = Fraction(1)
    for c in X.live_curves:
        a = X.intersect(start, c.cls)
        b = X.intersect(end, c.cls)
        if a < 0:
            raise StartNotNef(f"K + delta_from is negative on {c.name}")
        if b < a:
            best = min(best, a / (a - b))
    return best

"""Discrepancies, singularity classes, thresholds and Artin rationality."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    NotConnected,
    NotNefOnList,
    NotNegativeDefinite,
    ThetaNotEffective,
    UnknownCurve,
)
from .ratlattice import DivClass, combine, matrix_is_negative_definite, gram_of, to_rational
from .surface import LogSurface, contracted_components

INFINITY = math.inf


@dataclass(frozen=True)
class LogPullback:
    """Coefficients of ``Delta_Y`` in ``K_Y + Delta_Y = f^*(K_X + Delta)``.

    ``delta_Y`` covers every listed curve; ``discrepancies`` only the
    contracted ones, with ``a_j = -delta_Y[j]``.
    """

    delta_Y: dict[str, Fraction]
    discrepancies: dict[str, Fraction]


class Kind(enum.Enum):
    KLT = "KLT"
    LC = "LC"
    NON_LC = "NonLC"


@dataclass(frozen=True)
class PairClass:
    """Singularity class of the pair.

    Loci are reported as sets of curve names on the smooth model; the
    zero-dimensional pieces of the loci are not modelled.  ``certified`` is
    False when the curve configuration was not declared a log resolution.
    """

    kind: Kind
    nklt_locus: frozenset
    nlc_locus: frozenset
    certified: bool


def _require_live(X: LogSurface, names) -> None:
    for n in names:
        X.curve(n)
        if n in X.contracted:
            raise UnknownCurve(f"{n} is contracted on X and is not a divisor there")


def log_pullback(X: LogSurface) -> LogPullback:
    adj = X.adjoint_class()
    corr = X.pullback_correction(adj)
    delta = {}
    for c in X.curves:
        delta[c.name] = corr[c.name] if c.name in X.contracted else X.coefficient(c.name)
    return LogPullback(delta, {n: -corr[n] for n in X.names if n in X.contracted})


def mumford_pullback(X: LogSurface, D: DivClass) -> DivClass:
    return X.pullback(D)


def classify(X: LogSurface) -> PairClass:
    coeffs = log_pullback(X).delta_Y
    nklt = frozenset(n for n, b in coeffs.items() if b >= 1)
    nlc = frozenset(n for n, b in coeffs.items() if b > 1)
    if nlc:
        kind = Kind.NON_LC
    elif nklt:
        kind = Kind.LC
    else:
        kind = Kind.KLT
    return PairClass(kind, nklt, nlc, X.assumptions.snc_resolution)


def _affine_pullback(X: LogSurface, theta: Mapping[str, Fraction]):
    """Constant and slope of every ``Delta_Y`` coefficient of ``(X, Delta + t Theta)``."""
    base = log_pullback(X).delta_Y
    theta_cls = combine(((theta[c.name], c.cls) for c in X.live_curves if c.name in theta), X.rank)
    corr = X.pullback_correction(theta_cls)
    slope = {c.name: (corr[c.name] if c.name in X.contracted else theta.get(c.name, Fraction(0)))
             for c in X.curves}
    return base, slope


def lct(X: LogSurface, theta: Mapping[str, object]):
    """Largest ``t`` with ``(X, Delta + t Theta)`` lc outside ``Nlc(X, Delta)``.

    Returns a Fraction, or :data:`INFINITY` when no constraint binds.
    """
    theta = {k: to_rational(v) for k, v in theta.items()}
    if any(v < 0 for v in theta.values()):
        raise ThetaNotEffective("theta has a negative coefficient")
    _require_live(X, theta)
    base, slope = _affine_pullback(X, theta)
    best = INFINITY
    for name in X.names:
        c, m = base[name], slope[name]
        if c > 1 or m <= 0:
            continue
        t = (1 - c) / m
        if best is INFINITY or t < best:
            best = t
    return best


def numerical_dimension(X: LogSurface, D: DivClass) -> int:
    """Numerical dimension of a class nef against the listed curves of X."""
    Dx = X.pullback(D)
    for c in X.live_curves:
        if X.intersect(Dx, c.cls) < 0:
            raise NotNefOnList(f"D . {c.name} < 0")
    if X.intersect(Dx, Dx) > 0:
        return 2
    L = X.lattice
    if all(X.intersect(Dx, DivClass.unit(L.rank, i)) == 0 for i in range(L.rank)):
        return 0
    return 1


def kappa_via_abundance(X: LogSurface) -> int:
    """Kodaira dimension of a nef ``K_X + Delta``.

    This is the numerical dimension; abundance for log surfaces makes the
    two agree.  Valid only as far as the curve list certifies nefness.
    """
    return numerical_dimension(X, X.adjoint_class())


def _component(X: LogSurface, component: Sequence[str]):
    comp = list(dict.fromkeys(component))
    curves = [X.curve(n) for n in comp]
    if not comp:
        raise NotConnected("empty component")
    reached = {comp[0]}
    frontier = [curves[0]]
    while frontier:
        cur = frontier.pop()
        for other in curves:
            if other.name not in reached and X.intersect(cur.cls, other.cls) != 0:
                reached.add(other.name)
                frontier.append(other)
    if len(reached) != len(comp):
        raise NotConnected(f"{sorted(set(comp) - reached)} not connected to {comp[0]}")
    return curves


def fundamental_cycle_multiplicities(X: LogSurface, component: Sequence[str]) -> dict[str, int]:
    """Laufer's algorithm: start from the reduced cycle and add any curve
    meeting the current cycle positively until none does."""
    curves = _component(X, component)
    G = gram_of(X.lattice, [c.cls for c in curves])
    if not matrix_is_negative_definite(G):
        raise NotNegativeDefinite("component is not negative definite")
    n = len(curves)
    z = [1] * n
    while True:
        dots = [sum(z[j] * G[i][j] for j in range(n)) for i in range(n)]
        i = next((i for i in range(n) if dots[i] > 0), None)
        if i is None:
            return {c.name: z[k] for k, c in enumerate(curves)}
        z[i] += 1


def fundamental_cycle(X: LogSurface, component: Sequence[str]) -> DivClass:
    mult = fundamental_cycle_multiplicities(X, component)
    return combine(((Fraction(m), X.curve(n).cls) for n, m in mult.items()), X.rank)


def is_rational_singularity(X: LogSurface, component: Sequence[str]) -> bool:
    """Artin's criterion: the fundamental cycle has arithmetic genus 0."""
    Z = fundamental_cycle(X, component)
    pa = 1 + (X.intersect(Z, Z) + X.intersect(X.lattice.canonical, Z)) / 2
    return pa == 0


def has_only_rational_singularities(X: LogSurface) -> bool:
    return all(is_rational_singularity(X, comp) for comp in contracted_components(X))

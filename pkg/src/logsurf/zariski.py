"""Zariski decomposition on X, relative to the listed curves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotPseudoEffective
from .ratlattice import DivClass, leading_minors, matrix_is_negative_definite, solve_linear
from .surface import LogSurface


@dataclass(frozen=True)
class ZariskiDecomposition:
    """``D = P + N`` with P nef on the list and N effective.

    ``P`` is the Mumford pullback to the smooth model, so it is orthogonal
    to the contracted curves.  ``support_gram`` is the X-level Gram matrix
    of ``supp N`` (in curve order) and ``support_minors`` its leading
    principal minors, which alternate in sign starting negative.
    """

    P: DivClass
    N: dict[str, Fraction]
    support_gram: tuple[tuple[Fraction, ...], ...]
    support_minors: tuple[Fraction, ...]


def _x_gram(X: LogSurface, names: list[str]) -> list[list[Fraction]]:
    pulled = [X.pullback(X.curve(n).cls) for n in names]
    return [[X.intersect(a, X.curve(m).cls) for m in names] for a in pulled]


def _solve_negative_part(X: LogSurface, Dx: DivClass, support: list[str]) -> dict[str, Fraction]:
    """N on ``support`` with ``(D - N) .X C = 0`` for every C in the support."""
    G = _x_gram(X, support)
    if not matrix_is_negative_definite(G):
        raise NotPseudoEffective(
            "working support is not negative definite: not pseudo-effective relative to the listed curves",
            support,
        )
    rhs = [X.intersect(Dx, X.curve(n).cls) for n in support]
    coeffs = solve_linear(G, rhs)
    return dict(zip(support, coeffs))


def zariski_decompose(X: LogSurface, D: DivClass) -> ZariskiDecomposition:
    """Decompose D by growing the negative support to a fixpoint.

    Each round adds, in curve-list order, every listed curve on which the
    current positive part is negative, then re-solves the negative part on
    the enlarged support.
    """
    Dx = X.pullback(D)
    live = [c.name for c in X.live_curves]
    support: list[str] = []
    N: dict[str, Fraction] = {}
    P = Dx
    while True:
        bad = [n for n in live if X.intersect(P, X.curve(n).cls) < 0]
        if not bad:
            break
        chosen = set(support) | set(bad)
        support = [n for n in live if n in chosen]
        N = _solve_negative_part(X, Dx, support)
        if any(v < 0 for v in N.values()):
            raise NotPseudoEffective(
                "negative part acquired a negative coefficient: not pseudo-effective "
                "relative to the listed curves",
                support,
            )
        P = X.pullback(Dx - _combination(X, N))
    N = {n: v for n, v in N.items() if v != 0}
    names = [n for n in live if n in N]
    gram = _x_gram(X, names)
    return ZariskiDecomposition(
        P,
        {n: N[n] for n in names},
        tuple(tuple(r) for r in gram),
        tuple(leading_minors(gram)),
    )


def _combination(X: LogSurface, coeffs: dict[str, Fraction]) -> DivClass:
    out = DivClass.zero(X.rank)
    for n, v in coeffs.items():
        if v:
            out = out + X.curve(n).cls * v
    return out

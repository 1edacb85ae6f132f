import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import bl2p2, four_lines
from logsurf.corpus import random_surface
from logsurf.errors import AmbiguousConfiguration, NotNefAndBig, NotPseudoEffective, StartNotNef
from logsurf.logpair import has_only_rational_singularities, kappa_via_abundance
from logsurf.mmp import (
    MMPStep,
    OutcomeKind,
    RayKind,
    canonical_model,
    check_extremal_bound,
    find_extremal,
    mmp_run,
    nef_threshold,
    rationality_preserved,
    tiebreak_order,
    uniqueness_check,
)
from logsurf.ratlattice import DivClass
from logsurf.surface import add_curve, blow_up, contract, hirzebruch, picard_number, projective_plane, with_boundary


def ambiguous():
    X = blow_up(projective_plane(), {}, "E1")
    X = add_curve(X, "Q", DivClass.of(2, -1))
    return with_boundary(X, {"Q": 1})


def test_tiebreak_orders():
    X = bl2p2()
    assert tiebreak_order(X, "list") == ["E1", "E2", "L12"]
    assert tiebreak_order(X, "reversed") == ["L12", "E2", "E1"]
    assert tiebreak_order(X, "rotated") == ["E2", "L12", "E1"]
    assert tiebreak_order(X, "rotated:2") == ["L12", "E1", "E2"]
    assert tiebreak_order(X, ["L12"]) == ["L12", "E1", "E2"]
    with pytest.raises(ValueError):
        tiebreak_order(X, "sideways")


def test_find_extremal_cases():
    assert find_extremal(projective_plane()).kind is RayKind.FANO_POINT
    assert find_extremal(projective_plane()).degree == 3
    cone = contract(hirzebruch(2), ["s"])
    ray = find_extremal(cone)
    assert (ray.kind, ray.curve, ray.degree) == (RayKind.FANO_POINT, "f", 2)
    assert find_extremal(bl2p2()).kind is RayKind.BIRATIONAL
    assert find_extremal(hirzebruch(0)).kind is RayKind.FIBER_TYPE
    X = mmp_run(four_lines()).final
    assert find_extremal(X) is None
    with pytest.raises(AmbiguousConfiguration):
        find_extremal(ambiguous())


def test_bl2p2_is_a_conic_bundle():
    out = mmp_run(bl2p2())
    assert out.kind is OutcomeKind.MFS_OVER_CURVE
    assert out.trace == (MMPStep("E1", Fraction(1), 3, 2),)
    assert out.fiber_class == DivClass.of(1, 0, -1)
    assert out.witness.degree == 2


def test_four_lines_minimal_model():
    out = mmp_run(four_lines())
    assert out.kind is OutcomeKind.MINIMAL_MODEL
    assert [s.contracted_curve for s in out.trace] == ["E1"]
    assert out.decomposition.pullback_class == DivClass.of(1, 0)
    assert out.decomposition.E == {"E1": 1}
    assert kappa_via_abundance(out.final) == 2
    assert uniqueness_check(four_lines())


def test_disjoint_minus_one_curves_commute():
    X = four_lines(points=2)
    a, b = mmp_run(X, "list"), mmp_run(X, "reversed")
    assert [s.contracted_curve for s in a.trace] == ["E1", "E2"]
    assert [s.contracted_curve for s in b.trace] == ["E2", "E1"]
    assert a.final.contracted == b.final.contracted
    assert uniqueness_check(X)


def test_uniqueness_needs_pseudo_effective():
    with pytest.raises(NotPseudoEffective):
        uniqueness_check(bl2p2())


def test_extremal_bound_report():
    checks = check_extremal_bound(mmp_run(projective_plane()))
    assert [(c.degree, c.bound, c.passed) for c in checks] == [(3, 3, True)]
    out = mmp_run(bl2p2())
    assert all(c.passed for c in check_extremal_bound(out))
    corrupted = replace(out, trace=(MMPStep("E1", Fraction(3), 3, 2),))
    assert not check_extremal_bound(corrupted)[0].passed


def test_canonical_model_contracts_trivial_curves():
    X = four_lines()
    with pytest.raises(NotNefAndBig):
        canonical_model(X)
    Y = mmp_run(X).final
    assert canonical_model(Y) == Y
    # three sections of F_2 in the boundary: K + Delta = s + 2f is trivial on s
    Z = hirzebruch(2)
    for i in range(1, 4):
        Z = add_curve(Z, f"t{i}", DivClass.of(1, 2))
    Z = with_boundary(Z, {"t1": 1, "t2": 1, "t3": 1})
    W = canonical_model(Z)
    assert W.contracted == {"s"}
    assert has_only_rational_singularities(W)


def test_nef_threshold():
    X = four_lines(points=0)
    lines = {f"L{i}": 1 for i in range(1, 5)}
    assert nef_threshold(X, lines, lines) == 1
    assert nef_threshold(X, lines, {}) == Fraction(1, 4)
    assert nef_threshold(X, lines, {"L1": 1, "L2": 1, "L3": 1}) == 1
    with pytest.raises(StartNotNef):
        nef_threshold(X, {}, lines)


def test_ambiguous_configuration_propagates():
    with pytest.raises(AmbiguousConfiguration):
        mmp_run(ambiguous())


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_run_invariants(seed):
    X = random_surface(random.Random(seed))
    try:
        out = mmp_run(X)
    except AmbiguousConfiguration:
        return
    rho = picard_number(X)
    assert len(out.trace) <= rho - 1
    for s in out.trace:
        assert s.rho_after == s.rho_before - 1
        assert 0 < s.degree <= 2
    if out.kind is OutcomeKind.MINIMAL_MODEL:
        dec = out.decomposition
        rebuilt = dec.pullback_class
        for n, v in dec.E.items():
            assert v > 0
            rebuilt = rebuilt + X.curve(n).cls * v
        assert X.pullback(X.adjoint_class() - rebuilt).is_zero()
    if has_only_rational_singularities(X):
        assert rationality_preserved(out)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_negativity_lemma(seed, coeffs):
    # D . E_i >= 0 on a negative-definite set forces the orthogonal correction to be >= 0
    X = random_surface(random.Random(seed), contract_probability=1.0)
    if not X.contracted:
        return
    D = DivClass(tuple(Fraction(c) for c in (coeffs * 3)[: X.rank]))
    if all(X.intersect(D, c.cls) >= 0 for c in X.contracted_curves):
        assert all(v >= 0 for v in X.pullback_correction(D).values())

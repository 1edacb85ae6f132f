import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import bl2p2, cusp
from logsurf.corpus import random_surface
from logsurf.errors import InvalidMultiplicity, NotMinusOneCurve, NotNegativeDefinite, UnknownCurve
from logsurf.ratlattice import DivClass, NSLattice
from logsurf.surface import (
    Curve,
    LogSurface,
    add_curve,
    blow_down,
    blow_up,
    contract,
    contracted_components,
    genus_from_adjunction,
    hirzebruch,
    picard_number,
    projective_plane,
    validate,
    with_boundary,
)

seeds = st.integers(0, 2**32 - 1)


def codes(X):
    return [v.code for v in validate(X)]


def test_presets_are_valid():
    assert codes(projective_plane()) == []
    for e in range(4):
        F = hirzebruch(e)
        assert codes(F) == []
        s, f = F.curve("s").cls, F.curve("f").cls
        assert F.intersect(s, s) == -e
        assert F.intersect(F.lattice.canonical, f) == -2


def test_blow_up_updates_classes_and_genus():
    X = cusp()
    assert X.curve("C").cls == DivClass.of(3, -2, -1, -1)
    assert X.curve("C").pa == 0
    assert X.curve("E1").cls == DivClass.of(0, 1, -1, -1)
    assert X.curve("E2").cls == DivClass.of(0, 0, 1, -1)
    squares = {c.name: X.intersect(c.cls, c.cls) for c in X.curves}
    assert squares == {"C": 3, "E1": -3, "E2": -2, "E3": -1}
    assert X.lattice.canonical == DivClass.of(-3, 1, 1, 1)
    assert codes(X) == []


def test_blow_up_errors():
    X = projective_plane()
    with pytest.raises(InvalidMultiplicity):
        blow_up(X, {"L": 2})
    with pytest.raises(UnknownCurve):
        blow_up(X, {"M": 1})
    with pytest.raises(ValueError):
        blow_up(X, {}, "L")


def test_blow_down_restores_plane():
    X = blow_up(projective_plane(), {"L": 1}, "E1")
    Y = blow_down(X, "E1")
    assert Y == projective_plane()
    with pytest.raises(NotMinusOneCurve):
        blow_down(X, "L")


def test_blow_down_of_non_basis_curve():
    # H - E1 - E2 is a (-1)-curve; blowing it down gives P^1 x P^1
    Y = blow_down(bl2p2(), "L12")
    assert Y.rank == 2
    assert codes(Y) == []
    e1, e2 = Y.curve("E1").cls, Y.curve("E2").cls
    assert (Y.intersect(e1, e1), Y.intersect(e2, e2), Y.intersect(e1, e2)) == (0, 0, 1)


def test_contract_checks_negative_definite():
    X = blow_up(projective_plane(), {"L": 1}, "E1")
    with pytest.raises(NotNegativeDefinite):
        contract(X, ["L"])
    with pytest.raises(ValueError):
        contract(with_boundary(X, {"E1": "1/2"}), ["E1"])
    Y = contract(with_boundary(X, {"E1": "1/2"}), ["E1"], allow_boundary=True)
    assert codes(Y) == [] and picard_number(Y) == 1


def test_quadric_cone_pullback():
    X = contract(hirzebruch(2), ["s"])
    f = X.curve("f").cls
    assert X.pullback_correction(f) == {"s": Fraction(1, 2)}
    assert X.x_intersect(f, f) == Fraction(1, 2)


def test_contracted_components_order():
    X = cusp()
    assert contracted_components(X) == [("E1", "E2", "E3")]


def test_validate_reports_each_violation():
    X = projective_plane()
    bad = LogSurface(NSLattice(((1, 1), (0, -1)), DivClass.of(-3, 1)), ())
    assert codes(bad) == ["GramNotSymmetric"]
    indef = LogSurface(NSLattice(((1, 0), (0, 1)), DivClass.of(-3, 1)), ())
    assert codes(indef) == ["SignatureNotHyperbolic"]
    assert "DuplicateCurveName" in codes(replace(X, curves=X.curves * 2))
    odd = replace(X, curves=(Curve("Q", DivClass.of(1), 0),), lattice=NSLattice(((1,),), DivClass.of(-2)))
    assert "AdjunctionParity" in codes(odd)
    assert "GenusMismatch" in codes(replace(X, curves=(Curve("L", DivClass.of(1), 1),)))
    Y = blow_up(X, {}, "E1")
    assert "NegativeGenus" in codes(replace(Y, curves=(Curve("2E", DivClass.of(0, 2), 0),)))
    assert codes(replace(X, boundary={"L": Fraction(3, 2)})) == ["BoundaryOutOfRange"]
    assert codes(replace(X, boundary={"M": Fraction(1)})) == ["BoundaryUnknownCurve"]
    assert "ContractedNotNegDef" in codes(replace(X, contracted=frozenset({"L"})))
    assert "ContractedUnknownCurve" in codes(replace(X, contracted=frozenset({"M"})))
    assert "PicardNumberTooSmall" in codes(replace(X, contracted=frozenset({"L"})))


def test_add_curve_default_genus():
    X = add_curve(projective_plane(line=False), "C", DivClass.of(3))
    assert X.curve("C").pa == 1
    assert genus_from_adjunction(X.lattice, DivClass.of(4)) == 3


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_random_surfaces_are_valid(seed):
    X = random_surface(random.Random(seed))
    assert validate(X) == []


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(0, 10))
def test_blow_up_blow_down_round_trip(seed, pick):
    rng = random.Random(seed)
    X = random_surface(rng, contract_probability=0)
    names = X.names
    mults = {names[pick % len(names)]: 1} if names and pick % 3 else {}
    Y = blow_up(X, mults, "Enew")
    assert blow_down(Y, "Enew") == X


@settings(max_examples=100, deadline=None)
@given(seeds, st.lists(st.integers(-4, 4), min_size=8, max_size=8))
def test_adjunction_parity(seed, coeffs):
    X = random_surface(random.Random(seed))
    D = DivClass(tuple(Fraction(c) for c in coeffs[: X.rank] + [0] * (X.rank - 8)))
    g = genus_from_adjunction(X.lattice, D)
    assert g.denominator == 1

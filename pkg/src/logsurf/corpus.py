"""Random log surfaces reachable from the presets by blow-ups.

Centres are general points, general points of one listed curve, or an
intersection point of two listed curves.  Starting configurations are snc
and every centre meets at most two smooth curves transversally, so every
generated configuration stays snc.
"""

from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

from .ratlattice import DivClass, gram_of, matrix_is_negative_definite
from .surface import (
    Assumptions,
    LogSurface,
    add_curve,
    blow_up,
    contract,
    hirzebruch,
    projective_plane,
    with_boundary,
)


def _start(rng: random.Random) -> LogSurface:
    if rng.random() < 0.5:
        X = projective_plane(line=False)
        for i in range(rng.randint(1, 5)):
            X = add_curve(X, f"L{i + 1}", DivClass.of(1))
        if rng.random() < 0.4:
            X = add_curve(X, "Q", DivClass.of(2))
        if rng.random() < 0.3:
            X = add_curve(X, "C", DivClass.of(3))
        return X
    e = rng.randint(0, 3)
    X = hirzebruch(e)
    for i in range(rng.randint(0, 3)):
        X = add_curve(X, f"f{i + 2}", DivClass.of(0, 1))
    for i in range(rng.randint(0, 2)):
        X = add_curve(X, f"t{i + 1}", DivClass.of(1, e))
    return X


def _random_blow_up(rng: random.Random, X: LogSurface) -> LogSurface:
    curves = X.curves
    mode = rng.random()
    if mode < 0.2 or not curves:
        return blow_up(X, {})
    pairs = [
        (a.name, b.name)
        for i, a in enumerate(curves)
        for b in curves[i + 1:]
        if X.intersect(a.cls, b.cls) > 0
    ]
    if mode < 0.6 and pairs:
        a, b = rng.choice(pairs)
        return blow_up(X, {a: 1, b: 1})
    return blow_up(X, {rng.choice(curves).name: 1})


def _random_rational(rng: random.Random) -> Fraction:
    q = rng.randint(1, 6)
    if rng.random() < 0.5:
        return Fraction(rng.randint((q + 1) // 2, q), q)
    return Fraction(rng.randint(0, q), q)


def random_surface(rng: random.Random, max_blowups: int = 6, contract_probability: float = 0.3) -> LogSurface:
    X = _start(rng)
    for _ in range(rng.randint(0, max_blowups)):
        X = _random_blow_up(rng, X)
    boundary = {c.name: _random_rational(rng) for c in X.curves if rng.random() < 0.6}
    X = with_boundary(X, boundary)
    if rng.random() < contract_probability:
        candidates = [
            c for c in X.curves if X.coefficient(c.name) == 0 and X.intersect(c.cls, c.cls) < 0
        ]
        rng.shuffle(candidates)
        chosen = []
        for c in candidates:
            trial = chosen + [c]
            if matrix_is_negative_definite(gram_of(X.lattice, [d.cls for d in trial])):
                if rng.random() < 0.7:
                    chosen = trial
        if chosen:
            keep = {c.name for c in chosen}
            X = contract(X, [n for n in X.names if n in keep])
    return replace(X, assumptions=Assumptions(snc_resolution=True, curve_list_complete=False))


def corpus(seed: int, count: int, **kwargs) -> list[LogSurface]:
    rng = random.Random(seed)
    return [random_surface(rng, **kwargs) for _ in range(count)]

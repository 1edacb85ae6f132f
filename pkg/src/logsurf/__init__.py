"""Exact intersection theory and the log minimal model program for surfaces."""

from .errors import AmbiguousConfiguration, LogSurfaceError, NotPseudoEffective
from .logpair import Kind, classify, lct, log_pullback, mumford_pullback
from .mmp import OutcomeKind, RayKind, find_extremal, mmp_run, uniqueness_check
from .ratlattice import DivClass, NSLattice, Rational
from .surface import LogSurface, blow_down, blow_up, contract, hirzebruch, projective_plane, validate
from .zariski import zariski_decompose

__all__ = [
    "AmbiguousConfiguration",
    "DivClass",
    "Kind",
    "LogSurface",
    "LogSurfaceError",
    "NSLattice",
    "NotPseudoEffective",
    "OutcomeKind",
    "Rational",
    "RayKind",
    "blow_down",
    "blow_up",
    "classify",
    "contract",
    "find_extremal",
    "hirzebruch",
    "lct",
    "log_pullback",
    "mmp_run",
    "mumford_pullback",
    "projective_plane",
    "uniqueness_check",
    "validate",
    "zariski_decompose",
]

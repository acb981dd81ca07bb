"""Exact arithmetic for quadrics, formal group laws and Morava K-theory motives."""
__version__ = "0.1.0"

from .errors import MQKError
from .fgl import FormalGroupLaw, MoravaSpec, mk_additive, mk_morava, mk_multiplicative
from .motives import Correspondence, compose, diagonal, kunneth
from .quadric import QuadricClass, QuadricTheory, make_theory
from .series import Base, GradedScalar, RingSpec, TruncSeries
from .weyl import RootDatum, SignedPerm

__all__ = [
    "Base", "Correspondence", "FormalGroupLaw", "GradedScalar", "MQKError", "MoravaSpec",
    "QuadricClass", "QuadricTheory", "RingSpec", "RootDatum", "SignedPerm", "TruncSeries",
    "compose", "diagonal", "kunneth", "make_theory", "mk_additive", "mk_morava",
    "mk_multiplicative",
]

"""Exact equivariant special L-values of Drinfeld modules over F_q[G]."""

from .fields import FqField
from .groups import AbelianGroup, split_sylow
from .groupring import GroupRing, GRElement
from .series import RPoly, RLaurent, monic_test, monic_decompose

__all__ = [
    "FqField",
    "AbelianGroup",
    "split_sylow",
    "GroupRing",
    "GRElement",
    "RPoly",
    "RLaurent",
    "monic_test",
    "monic_decompose",
]

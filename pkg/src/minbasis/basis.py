"""Membership in the basis A = A(W_0) u ... u A(W_{h-1}).

A(W) is the set of positive integers whose binary exponents all lie in W.
The basis element 4 = 2^2 always sits in A(W_0) (strict configs force
m_1 > 2^(h+4) >= 64, so exponent 2 is in W_0); the avoid-4 machinery is
about representing large n without ever using that one element.
"""

from __future__ import annotations

from .errors import ZeroNotInA
from .numeral import to_exponent_set
from .partition import PartitionConfig


def classify_element(cfg: PartitionConfig, n: int) -> int | None:
    """Class j with n in A(W_j), or None when exponents straddle classes."""
    if n == 0:
        raise ZeroNotInA("0 has no binary exponents and is not a basis element")
    if n < 0:
        raise ValueError(f"n must be positive, got {n}")
    classes = {cfg.classify(f) for f in to_exponent_set(n)}
    if len(classes) == 1:
        return classes.pop()
    return None


def is_in_A_W(cfg: PartitionConfig, n: int, j: int) -> bool:
    """Whether n lies in A(W_j)."""
    if not 0 <= j < cfg.h:
        raise ValueError(f"class index must be in [0, {cfg.h}), got {j}")
    return classify_element(cfg, n) == j


def in_basis(cfg: PartitionConfig, n: int) -> bool:
    return classify_element(cfg, n) is not None

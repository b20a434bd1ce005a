"""Shared fixtures data: the loop family and cached state spaces."""

from functools import lru_cache

from lgmirror.fjrw import build_state_space
from lgmirror.qpoly import loop_potential
from lgmirror.symmetry import symmetry_group

LOOPS = [(a1, a2) for a1 in range(2, 8) for a2 in range(2, 8)]
SMALL_LOOPS = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5), (4, 3)]


@lru_cache(maxsize=None)
def loop_space(a1, a2):
    W = loop_potential(a1, a2)
    return build_state_space(W, symmetry_group(W))

"""Diagonal symmetry groups, written additively as phase vectors mod 1.

A diagonal matrix ``diag(exp(2 pi i t_1), ..., exp(2 pi i t_N))`` is stored as
the vector ``(t_1, ..., t_N)`` with every ``t_j`` in ``[0, 1)``.  Group
multiplication becomes addition mod 1 and ``g^k`` becomes ``k * g``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import DegenerateWeights, LengthMismatch, NotInGroup, NotInvertible
from .qpoly import Polynomial, exponent_matrix, format_rational


@dataclass(frozen=True, order=True)
class PhaseVector:
    phases: tuple[Fraction, ...]

    def __init__(self, phases: Iterable):
        object.__setattr__(self, "phases", tuple(Fraction(p) % 1 for p in phases))

    @classmethod
    def identity(cls, n: int) -> PhaseVector:
        return cls((0,) * n)

    def __len__(self) -> int:
        return len(self.phases)

    def __iter__(self):
        return iter(self.phases)

    def __getitem__(self, j: int) -> Fraction:
        return self.phases[j]

    def __add__(self, other: PhaseVector) -> PhaseVector:
        return group_op(self, other)

    def __neg__(self) -> PhaseVector:
        return inverse(self)

    def __sub__(self, other: PhaseVector) -> PhaseVector:
        return group_op(self, inverse(other))

    def __mul__(self, k: int) -> PhaseVector:
        return PhaseVector(k * t for t in self.phases)

    __rmul__ = __mul__

    @property
    def is_identity(self) -> bool:
        return not any(self.phases)

    def to_json(self) -> list[str]:
        return [format_rational(t) for t in self.phases]

    def __str__(self) -> str:
        return "(" + ",".join(format_rational(t) for t in self.phases) + ")"


def group_op(a: PhaseVector, b: PhaseVector) -> PhaseVector:
    if len(a) != len(b):
        raise LengthMismatch(f"phase vectors of length {len(a)} and {len(b)}")
    return PhaseVector(x + y for x, y in zip(a.phases, b.phases))


def inverse(a: PhaseVector) -> PhaseVector:
    return PhaseVector(-x for x in a.phases)


def fixed_locus(g: PhaseVector) -> frozenset[int]:
    """Zero-based indices of the coordinates fixed by ``g``."""
    return frozenset(j for j, t in enumerate(g.phases) if t == 0)


@dataclass(frozen=True)
class DiagonalGroup:
    elements: tuple[PhaseVector, ...]
    generators: tuple[PhaseVector, ...]
    nvars: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> PhaseVector:
        return PhaseVector.identity(self.nvars)

    def __contains__(self, g: PhaseVector) -> bool:
        return g in self._members

    @property
    def _members(self) -> frozenset:
        cache = self.__dict__.get("_member_cache")
        if cache is None:
            cache = frozenset(self.elements)
            object.__setattr__(self, "_member_cache", cache)
        return cache

    def index(self, g: PhaseVector) -> int:
        return self.elements.index(g)

    def denominator(self) -> int:
        d = 1
        for g in self.elements:
            for t in g.phases:
                d = d * t.denominator // _gcd(d, t.denominator)
        return d

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "generators": [g.to_json() for g in self.generators],
            "elements": [g.to_json() for g in self.elements],
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def generate(generators: Sequence[PhaseVector], nvars: int) -> DiagonalGroup:
    """Breadth-first closure of ``generators`` under addition mod 1."""
    start = PhaseVector.identity(nvars)
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for h in generators:
            k = group_op(g, h)
            if k not in seen:
                seen.add(k)
                queue.append(k)
    return DiagonalGroup(tuple(sorted(seen)), tuple(generators), nvars)


def symmetry_group(W: Polynomial) -> DiagonalGroup:
    """All phase vectors ``t`` with ``E t`` integral, ``E`` the exponent matrix."""
    E = exponent_matrix(W)
    if len(E) != W.nvars:
        raise NotInvertible(f"{len(E)} monomials in {W.nvars} variables")
    if linalg.determinant(E) == 0:
        raise DegenerateWeights("exponent matrix is singular")
    inv = linalg.inverse(E)
    gens = tuple(PhaseVector(inv[i][j] for i in range(W.nvars)) for j in range(W.nvars))
    return generate(gens, W.nvars)


def is_symmetry(W: Polynomial, g: PhaseVector) -> bool:
    return all(sum((e * t for e, t in zip(m, g.phases)), Fraction(0)).denominator == 1
               for m, _ in W.items())


def grading_element_J(q: Sequence[Fraction]) -> PhaseVector:
    return PhaseVector(q)


def loop_generators(a1: int, a2: int) -> tuple[PhaseVector, PhaseVector]:
    n = a1 * a2 - 1
    g1 = PhaseVector((Fraction(-1, n), Fraction(a1, n)))
    g2 = PhaseVector((Fraction(a2, n), Fraction(-1, n)))
    return g1, g2


def orbit(g: PhaseVector) -> list[PhaseVector]:
    """``[g^0, g^1, ...]`` up to the first repetition."""
    out = [PhaseVector.identity(len(g))]
    cur = g
    while not cur.is_identity:
        out.append(cur)
        cur = cur + g
    return out


def loop_weights(a1: int, a2: int) -> tuple[Fraction, Fraction]:
    n = a1 * a2 - 1
    return Fraction(a2 - 1, n), Fraction(a1 - 1, n)


@dataclass(frozen=True)
class LoopForm:
    """The element ``J g1^alpha g2^beta`` of a two-variable loop group."""
    alpha: int
    beta: int

    def element(self, a1: int, a2: int) -> PhaseVector:
        g1, g2 = loop_generators(a1, a2)
        return grading_element_J(loop_weights(a1, a2)) + self.alpha * g1 + self.beta * g2

    def addresses_identity(self, a1: int, a2: int) -> bool:
        return (self.alpha, self.beta) in ((a2 - 1, 0), (0, a1 - 1))


@dataclass(frozen=True)
class IdentityMarker:
    """Returned for the identity element, which has two loop forms."""
    forms: tuple[LoopForm, LoopForm]


def loop_forms(a1: int, a2: int) -> list[LoopForm]:
    return [LoopForm(a, b) for a in range(a2) for b in range(a1)]


def unique_loop_form(g: PhaseVector, a1: int, a2: int) -> LoopForm | IdentityMarker:
    if len(g) != 2:
        raise NotInGroup(f"{g} is not a phase vector in two variables")
    if g.is_identity:
        return IdentityMarker((LoopForm(a2 - 1, 0), LoopForm(0, a1 - 1)))
    for form in loop_forms(a1, a2):
        if form.element(a1, a2) == g:
            return form
    raise NotInGroup(f"{g} is not in the symmetry group of loop({a1},{a2})")

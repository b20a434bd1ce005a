"""The orbifold state space ``H_{W,G}``.

Each group element ``g`` contributes a sector: the Milnor ring of ``W``
restricted to the coordinates ``g`` fixes, cut down to the monomials whose
volume-form-twisted phase is invariant under every generator of ``G``.
Elements with an empty fixed locus give one-dimensional (narrow) sectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DegeneratePotential, DegenerateRestriction, MissingJ, OutOfTableRange
from .milnor import GradedQuotient, build_quotient, residue_pairing
from .qpoly import (
    Monomial,
    Polynomial,
    WeightSystem,
    central_charge,
    format_monomial,
    format_rational,
    weights_of,
)
from .symmetry import DiagonalGroup, PhaseVector, fixed_locus, grading_element_J, inverse


@dataclass(frozen=True, eq=False)
class Sector:
    element: PhaseVector
    fixed_vars: tuple[int, ...]
    restricted_potential: Polynomial
    local_quotient: GradedQuotient
    invariant_basis: tuple[Monomial, ...]  # in the fixed variables only

    @property
    def narrow(self) -> bool:
        return not self.fixed_vars

    def ambient(self, local: Monomial, nvars: int) -> Monomial:
        full = [0] * nvars
        for j, e in zip(self.fixed_vars, local):
            full[j] = e
        return tuple(full)


@dataclass(frozen=True)
class StateElement:
    element: PhaseVector
    monomial: Monomial  # ambient exponents, zero outside the fixed locus
    local_monomial: Monomial
    label: str
    sector: Sector = field(compare=False, repr=False, hash=False)

    @property
    def narrow(self) -> bool:
        return self.sector.narrow


def _invariant(local: Monomial, fixed: Sequence[int], h: PhaseVector) -> bool:
    total = sum((h[j] * (b + 1) for j, b in zip(fixed, local)), Fraction(0))
    return total.denominator == 1


def build_sector(W: Polynomial, q: WeightSystem, G: DiagonalGroup, g: PhaseVector) -> Sector:
    fixed = tuple(sorted(fixed_locus(g)))
    restricted = W.restrict(fixed)
    try:
        local = build_quotient(restricted, [q[j] for j in fixed])
    except (DegeneratePotential, OutOfTableRange) as exc:
        raise DegenerateRestriction(f"restriction of W to Fix {g} is degenerate: {exc}") from exc
    basis = tuple(m for m in local.basis
                  if all(_invariant(m, fixed, h) for h in G.generators))
    return Sector(g, fixed, restricted, local, basis)


def _label(g: PhaseVector, monomial: Monomial) -> str:
    mono = format_monomial(monomial)
    sector = f"e_{g}"
    return sector if mono == "1" else f"{mono}*{sector}"


def w_degree(q: Sequence[Fraction], s: StateElement | PhaseVector) -> Fraction:
    g = s.element if isinstance(s, StateElement) else s
    n_fixed = sum(1 for t in g.phases if t == 0)
    return n_fixed + 2 * sum((t - qj for t, qj in zip(g.phases, q)), Fraction(0))


@dataclass(frozen=True, eq=False)
class StateSpace:
    potential: Polynomial
    weights: WeightSystem
    group: DiagonalGroup
    sectors: tuple[Sector, ...]
    basis: tuple[StateElement, ...]
    degrees: tuple[Fraction, ...]
    pairing: tuple[tuple[Fraction, ...], ...]
    _lookup: dict = field(repr=False, default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def central_charge(self) -> Fraction:
        return central_charge(self.weights)

    def index(self, g: PhaseVector, monomial: Monomial | None = None) -> int:
        """Basis index of ``monomial * e_g``; narrow sectors take no monomial."""
        if monomial is None:
            monomial = (0,) * self.potential.nvars
        try:
            return self._lookup[(g, tuple(monomial))]
        except KeyError:
            raise KeyError(f"no basis element {_label(g, tuple(monomial))}") from None

    def broad_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.basis) if not s.narrow]

    def to_json(self) -> dict:
        return {
            "potential": str(self.potential),
            "group_order": self.group.order,
            "basis": [{"label": s.label, "sector_phases": s.element.to_json(),
                       "monomial": format_monomial(s.monomial),
                       "degree": format_rational(d)}
                      for s, d in zip(self.basis, self.degrees)],
            "pairing_matrix": [[format_rational(x) for x in row] for row in self.pairing],
        }


def _pair_elements(a: StateElement, b: StateElement) -> Fraction:
    if b.element != inverse(a.element):
        return Fraction(0)
    # H_g and H_{g^-1} share the restricted quotient; identify them on representatives
    Q = a.sector.local_quotient
    return residue_pairing(Q, {a.local_monomial: Fraction(1)}, {b.local_monomial: Fraction(1)})


def sector_pairing(space: StateSpace, a: StateElement, b: StateElement) -> Fraction:
    return _pair_elements(a, b)


def build_state_space(W: Polynomial, G: DiagonalGroup,
                      q: WeightSystem | None = None) -> StateSpace:
    q = weights_of(W) if q is None else tuple(q)
    sectors, basis = [], []
    for g in G.elements:
        sector = build_sector(W, q, G, g)
        sectors.append(sector)
        for local in sector.invariant_basis:
            full = sector.ambient(local, W.nvars)
            basis.append(StateElement(g, full, local, _label(g, full), sector))
    degrees = tuple(w_degree(q, s) for s in basis)
    n = len(basis)
    pairing = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            pairing[i][j] = pairing[j][i] = _pair_elements(basis[i], basis[j])
    if n and linalg.determinant(pairing) == 0:
        raise DegeneratePotential("state space pairing is degenerate")
    lookup = {(s.element, s.monomial): k for k, s in enumerate(basis)}
    return StateSpace(W, q, G, tuple(sectors), tuple(basis), degrees,
                      tuple(tuple(r) for r in pairing), lookup)


def identity_element(space: StateSpace) -> StateElement:
    J = grading_element_J(space.weights)
    if J not in space.group:
        raise MissingJ(f"J = {J} is not in the group")
    return space.basis[space.index(J)]

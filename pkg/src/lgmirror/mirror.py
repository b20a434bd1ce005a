"""Berglund-Huebsch transposition and the explicit mirror map for loops.

For ``W = x1^a1 x2 + x2^a2 x1`` the dual is presented as
``W^T = y1 y2^a1 + y2 y1^a2`` and its Milnor ring has the monomial grid
``y1^alpha y2^beta`` (``alpha < a2``, ``beta < a1``) as a basis.  Grid
monomials away from the two corners ``y1^(a2-1)`` and ``y2^(a1-1)`` go to the
narrow elements ``e_{J g1^alpha g2^beta}``; the two corners span the broad
sector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .errors import BasisMismatch, NotInvertible, WrongShape
from .fjrw import StateSpace
from .frobenius import GradedFrobeniusAlgebra
from .milnor import GradedQuotient, as_frobenius, build_quotient, normal_form
from .qpoly import (
    Monomial,
    Polynomial,
    WeightSystem,
    central_charge,
    classify,
    exponent_matrix,
    format_monomial,
    format_rational,
    loop_potential,
    require_unit_coefficients,
)
from .symmetry import LoopForm, loop_generators, loop_weights


def loop_parameters(W: Polynomial) -> tuple[int, int]:
    """``(a1, a2)`` when ``W`` is literally ``x1^a1*x2 + x2^a2*x1``."""
    cls = classify(W)
    if cls.kind != "Loop" or W.nvars != 2:
        raise WrongShape(f"{W} is not a two-variable loop")
    a1, a2 = cls.params
    if W != loop_potential(a1, a2):
        raise WrongShape(f"{W} is not of the form x1^a1*x2 + x2^a2*x1")
    return a1, a2


def transpose(W: Polynomial) -> Polynomial:
    require_unit_coefficients(W)
    cls = classify(W)
    if not cls.invertible:
        raise NotInvertible(f"{W} is not an invertible potential")
    if cls.kind == "Loop" and W.nvars == 2:
        a1, a2 = cls.params
        return Polynomial(2, {(1, a1): 1, (a2, 1): 1})
    E = exponent_matrix(W)
    return Polynomial(W.nvars, {tuple(row[i] for row in E): 1 for i in range(W.nvars)})


def dual_weights(a1: int, a2: int) -> WeightSystem:
    n = a1 * a2 - 1
    # a1*qb2 + qb1 = 1 and a2*qb1 + qb2 = 1
    qb = tuple(linalg.solve([[1, a1], [a2, 1]], [1, 1]))
    g1 = (Fraction(-1, n), Fraction(a1, n))
    g2 = (Fraction(a2, n), Fraction(-1, n))
    assert qb == (sum(g1), sum(g2)), "dual weights disagree with generator phase sums"
    return qb


@dataclass(frozen=True)
class MirrorPair:
    source: Polynomial
    dual: Polynomial
    dual_weights: WeightSystem
    generator_phase_sums: tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {
            "source": str(self.source),
            "dual": self.dual.to_string("y"),
            "dual_weights": [format_rational(x) for x in self.dual_weights],
        }


def mirror_pair(a1: int, a2: int) -> MirrorPair:
    W = loop_potential(a1, a2)
    g1, g2 = loop_generators(a1, a2)
    n = a1 * a2 - 1
    sums = (Fraction(a1 - 1, n), Fraction(a2 - 1, n))
    return MirrorPair(W, transpose(W), dual_weights(a1, a2), sums)


def grid(a1: int, a2: int) -> list[Monomial]:
    return [(alpha, beta) for alpha in range(a2) for beta in range(a1)]


def corner_images(a1: int, a2: int, normalized: bool = True) -> dict[Monomial, dict[str, int]]:
    """Images of ``y2^(a1-1)`` and ``y1^(a2-1)`` in the broad basis ``{B1, B2}``.

    ``B1 = x1^(a1-1) e_id`` and ``B2 = x2^(a2-1) e_id``.  The literal
    assignment swaps the corners onto ``B2`` and ``B1``.  The normalized one
    composes that with the integral similitude ``[[-1, a1], [-a2, 1]]``; only
    the normalized map scales the broad pairing block by the same constant as
    the narrow pairs.
    """
    u, v = (0, a1 - 1), (a2 - 1, 0)
    if normalized:
        return {u: {"B1": -1, "B2": -a2}, v: {"B1": a1, "B2": 1}}
    return {u: {"B1": 1}, v: {"B2": 1}}


@dataclass(frozen=True, eq=False)
class MirrorMap:
    a1: int
    a2: int
    normalized: bool
    pair: MirrorPair
    dual_quotient: GradedQuotient
    grid: tuple[Monomial, ...]
    grid_images: tuple[dict, ...]  # A-side vector for each grid monomial
    images: tuple[dict, ...]  # A-side vector for each dual quotient basis element
    basis_aligned: bool

    def mapping(self) -> list[dict]:
        return [dict(v) for v in self.images]

    def dual_algebra(self) -> GradedFrobeniusAlgebra:
        return as_frobenius(self.dual_quotient, "y")

    def to_json(self, space: StateSpace) -> list[dict]:
        out = []
        for m, img in zip(self.dual_quotient.basis, self.images):
            out.append({
                "source": format_monomial(m, "y"),
                "image": {space.basis[k].label: format_rational(c) for k, c in img.items()},
            })
        return out


def mirror_map(space: StateSpace, normalized: bool = True) -> MirrorMap:
    a1, a2 = loop_parameters(space.potential)
    pair = mirror_pair(a1, a2)
    Q = build_quotient(pair.dual, pair.dual_weights)
    cells = grid(a1, a2)
    mu = Q.milnor_number
    if len(cells) != mu:
        raise BasisMismatch(f"grid has {len(cells)} monomials, quotient has dimension {mu}")
    coords = []
    for m in cells:
        nf = normal_form(Q, {m: Fraction(1)})
        coords.append([nf.get(b, Fraction(0)) for b in Q.basis])
    if linalg.rank(coords) != mu:
        raise BasisMismatch("grid monomials are linearly dependent in the dual Milnor ring")

    identity = space.group.identity
    broad = {"B1": space.index(identity, (a1 - 1, 0)), "B2": space.index(identity, (0, a2 - 1))}
    corners = corner_images(a1, a2, normalized)
    grid_images = []
    for alpha, beta in cells:
        if (alpha, beta) in corners:
            img = {broad[k]: Fraction(c) for k, c in corners[(alpha, beta)].items()}
        else:
            g = LoopForm(alpha, beta).element(a1, a2)
            img = {space.index(g): Fraction(1)}
        grid_images.append(dict(sorted(img.items())))

    aligned = set(cells) == set(Q.basis)
    if aligned:
        pos = {m: k for k, m in enumerate(cells)}
        images = [grid_images[pos[b]] for b in Q.basis]
    else:
        # write each echelon basis monomial in grid coordinates, then map linearly
        inv = linalg.inverse(coords)
        images = []
        for r in range(mu):
            acc: dict[int, Fraction] = {}
            for k in range(mu):
                c = inv[r][k]
                if c:
                    for idx, x in grid_images[k].items():
                        acc[idx] = acc.get(idx, Fraction(0)) + c * x
            images.append({k: v for k, v in sorted(acc.items()) if v})
    return MirrorMap(a1, a2, normalized, pair, Q, tuple(cells), tuple(grid_images),
                     tuple(images), aligned)


def push_forward(mm: MirrorMap, element: Mapping[Monomial, Fraction]) -> dict[int, Fraction]:
    """Image of a dual ring element (basis monomial -> coefficient)."""
    acc: dict[int, Fraction] = {}
    for m, c in element.items():
        for k, x in mm.images[mm.dual_quotient.index(m)].items():
            acc[k] = acc.get(k, Fraction(0)) + c * x
    return {k: v for k, v in sorted(acc.items()) if v}


def transported_structure_constants(mm: MirrorMap) -> dict[tuple[int, int], dict[int, Fraction]]:
    """The dual ring's multiplication carried to the state space basis."""
    Q = mm.dual_quotient
    mu = Q.milnor_number
    M = [[img.get(k, Fraction(0)) for k in range(mu)] for img in mm.images]
    Minv = linalg.inverse(M)  # A-basis element -> dual basis coordinates
    pre = [{r: Minv[a][r] for r in range(mu) if Minv[a][r]} for a in range(mu)]
    dual_table: dict[tuple[int, int], dict[Monomial, Fraction]] = {}
    out = {}
    for a in range(mu):
        for b in range(a, mu):
            acc: dict[Monomial, Fraction] = {}
            for r, x in pre[a].items():
                for s, y in pre[b].items():
                    key = (min(r, s), max(r, s))
                    if key not in dual_table:
                        dual_table[key] = normal_form(
                            Q, {tuple(i + j for i, j in zip(Q.basis[r], Q.basis[s])): Fraction(1)})
                    for m, z in dual_table[key].items():
                        acc[m] = acc.get(m, Fraction(0)) + x * y * z
            prod = push_forward(mm, {m: c for m, c in acc.items() if c})
            out[(a, b)] = out[(b, a)] = prod
    return out


@dataclass
class MirrorReport:
    a1: int
    a2: int
    pair: MirrorPair
    dims: tuple[int, int]
    poincare_A: dict
    poincare_B: dict
    iso: object
    crosscheck: object
    relations: object
    degree_checks: int
    validation_A: object
    validation_B: object

    @property
    def passed(self) -> bool:
        return (self.iso.is_iso and self.poincare_A == self.poincare_B
                and self.dims[0] == self.dims[1] and not self.crosscheck.mismatches
                and self.relations.ok and self.validation_A.valid and self.validation_B.valid)

    def to_json(self) -> dict:
        from .frobenius import poincare_to_json
        return {
            "source": str(self.pair.source),
            "dual": self.pair.dual.to_string("y"),
            "dims": {"A": self.dims[0], "B": self.dims[1]},
            "poincare_A": poincare_to_json(self.poincare_A),
            "poincare_B": poincare_to_json(self.poincare_B),
            "iso": self.iso.to_json(),
            "correlator_crosscheck": self.crosscheck.to_json(),
            "relations": self.relations.to_json(),
            "valid_A": self.validation_A.valid,
            "valid_B": self.validation_B.valid,
            "passed": self.passed,
        }


def verify_mirror(a1: int, a2: int, normalized: bool = True) -> MirrorReport:
    """Build both sides for ``loop(a1, a2)`` and compare them through the mirror map."""
    from . import correlators
    from .fjrw import build_state_space, w_degree
    from .frobenius import poincare, validate, verify_isomorphism
    from .symmetry import symmetry_group

    W = loop_potential(a1, a2)
    space = build_state_space(W, symmetry_group(W))
    mm = mirror_map(space, normalized)
    A, crosscheck = correlators.loop_ring_report(space, mm)
    B = mm.dual_algebra()
    iso = verify_isomorphism(B, A, mm.mapping())

    # degree of each narrow image equals twice the dual weighted degree
    qb = mm.pair.dual_weights
    checks = 0
    for (alpha, beta), img in zip(mm.grid, mm.grid_images):
        want = 2 * (alpha * qb[0] + beta * qb[1])
        for k in img:
            if w_degree(space.weights, space.basis[k]) != want:
                raise AssertionError(f"degree mismatch at y1^{alpha}*y2^{beta}")
            checks += 1
    assert central_charge(space.weights) == central_charge(qb)

    relations = correlators.loop_relations_check(space, mm, raise_on_failure=False)
    return MirrorReport(a1, a2, mm.pair, (A.dim, B.dim), poincare(A), poincare(B), iso,
                        crosscheck, relations, checks, validate(A), validate(B))

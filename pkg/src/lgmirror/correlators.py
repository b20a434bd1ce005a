"""Genus-zero correlators from the axioms, and the loop ring built on them.

Three-point values are decided by a fixed cascade of axioms:

1. Dimension: zero unless the insertion degrees sum to ``2 c_hat``.
2. Integer degrees: zero if some line bundle degree ``l_j`` is fractional.
3. Pairing: an insertion of the unit ``e_J`` gives the pairing of the
   other two.
4. Concavity: narrow insertions with every ``l_j < 0`` give 1.

Four-point values replace Pairing by the tabulated index-zero value of the
loop.  Anything the cascade cannot decide is ``UNDETERMINED``; every axiom
that applies is evaluated and disagreement raises ``AxiomConflict``.
"""

from __future__ import annotations

import weakref
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence, Union

from . import linalg
from .errors import (
    AxiomConflict,
    CrossCheckMismatch,
    DomainError,
    PowerRuleViolation,
    RelationViolation,
    WrongShape,
)
from .fjrw import StateElement, StateSpace, w_degree
from .frobenius import GradedFrobeniusAlgebra
from .milnor import normal_form
from .mirror import MirrorMap, loop_parameters, mirror_map, push_forward, transported_structure_constants
from .qpoly import central_charge, format_rational
from .symmetry import PhaseVector, grading_element_J, loop_generators

Vector = dict  # basis index -> Fraction
Insertion = Union[int, StateElement]


@dataclass(frozen=True)
class LineBundleData:
    degrees: tuple[Fraction, ...]
    h0: tuple[int | None, ...]
    h1: tuple[int | None, ...]
    codim: Fraction

    @property
    def integral(self) -> bool:
        return all(l.denominator == 1 for l in self.degrees)

    def to_json(self) -> dict:
        return {"l": [format_rational(l) for l in self.degrees],
                "h0": list(self.h0), "h1": list(self.h1), "D": format_rational(self.codim)}


def line_bundle_degrees(q: Sequence[Fraction], genus: int,
                        insertions: Sequence[PhaseVector]) -> LineBundleData:
    """Degrees ``l_j = q_j (2g - 2 + k) - sum_i theta_j(h_i)`` and the class codimension.

    ``h0``/``h1`` follow the genus-zero case split and are ``None`` when
    ``l_j`` is fractional.
    """
    k = len(insertions)
    if k < 1:
        raise DomainError("at least one insertion is required")
    ls = tuple(qj * (2 * genus - 2 + k) - sum((h[j] for h in insertions), Fraction(0))
               for j, qj in enumerate(q))
    h0, h1 = [], []
    for l in ls:
        if l.denominator != 1 or genus != 0:
            h0.append(None)
            h1.append(None)
        elif l >= 0:
            h0.append(int(l) + 1)
            h1.append(0)
        else:
            h0.append(0)
            h1.append(int(-l) - 1)
    chat = central_charge(q)
    D = chat * (genus - 1) + sum((w_degree(q, h) for h in insertions), Fraction(0)) / 2
    return LineBundleData(ls, tuple(h0), tuple(h1), D)


@dataclass(frozen=True)
class CorrelatorValue:
    value: Fraction | None
    axiom: str | None

    @property
    def determined(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        if not self.determined:
            return {"status": "Undetermined"}
        return {"status": "Determined", "value": format_rational(self.value), "axiom": self.axiom}

    def __repr__(self) -> str:
        if not self.determined:
            return "Undetermined"
        return f"Determined({format_rational(self.value)}, {self.axiom})"


UNDETERMINED = CorrelatorValue(None, None)


def is_undetermined(x) -> bool:
    return x is UNDETERMINED or (isinstance(x, CorrelatorValue) and not x.determined)


class _Tables:
    """Integer-scaled phases and pairing data for fast cascade evaluation."""

    def __init__(self, space: StateSpace):
        self.space = space
        q = space.weights
        d = lcm(space.group.denominator(), *(x.denominator for x in q))
        self.d = d
        self.w = [int(x * d) for x in q]
        self.t = [[int(x * d) for x in s.element.phases] for s in space.basis]
        self.narrow = [s.narrow for s in space.basis]
        self.deg = list(space.degrees)
        self.chat = central_charge(q)
        J = grading_element_J(q)
        self.is_J = [s.element == J and s.narrow for s in space.basis]
        self.eta = space.pairing
        inv = linalg.inverse(space.pairing)
        self.eta_inv = [{b: x for b, x in enumerate(row) if x} for row in inv]
        self.cache: dict[tuple[int, ...], CorrelatorValue] = {}
        self.index_zero: dict[tuple[int, ...], Fraction] = {}
        try:
            a1, a2 = loop_parameters(space.potential)
        except DomainError:
            self.loop = None
        else:
            self.loop = (a1, a2)
            for i in (1, 2):
                try:
                    shape = _index_zero_shape(a1, a2, i)
                except WrongShape:
                    continue
                key = tuple(sorted(space.index(g) for g in shape))
                self.index_zero[key] = loop_index_zero_four_point(a1, a2, i)

    def l_numerators(self, idxs: Sequence[int]) -> list[int]:
        k = len(idxs)
        return [wj * (k - 2) - sum(self.t[i][j] for i in idxs) for j, wj in enumerate(self.w)]

    def evaluate(self, idxs: Sequence[int]) -> CorrelatorValue:
        key = tuple(sorted(idxs))
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._evaluate(key)
        return hit

    def _evaluate(self, idxs: tuple[int, ...]) -> CorrelatorValue:
        k = len(idxs)
        found: list[tuple[str, Fraction]] = []
        D = -self.chat + sum((self.deg[i] for i in idxs), Fraction(0)) / 2
        if D != 0:
            found.append(("Dimension", Fraction(0)))
        lnum = self.l_numerators(idxs)
        integral = all(x % self.d == 0 for x in lnum)
        if not integral:
            found.append(("IntegerDegrees", Fraction(0)))
        if k == 3:
            for p, i in enumerate(idxs):
                if self.is_J[i]:
                    a, b = (idxs[r] for r in range(3) if r != p)
                    found.append(("Pairing", Fraction(self.eta[a][b])))
        if k == 4 and idxs in self.index_zero:
            found.append(("IndexZero", self.index_zero[idxs]))
        if integral and D == 0 and all(self.narrow[i] for i in idxs) and all(x < 0 for x in lnum):
            found.append(("Concavity", Fraction(1)))
        if not found:
            return UNDETERMINED
        values = {v for _, v in found}
        if len(values) > 1:
            labels = [self.space.basis[i].label for i in idxs]
            raise AxiomConflict(f"axioms disagree on <{', '.join(labels)}>: {found}")
        axiom, value = found[0]
        return CorrelatorValue(value, axiom)


_TABLES: "weakref.WeakKeyDictionary[StateSpace, _Tables]" = weakref.WeakKeyDictionary()


def _tables(space: StateSpace) -> _Tables:
    t = _TABLES.get(space)
    if t is None:
        t = _TABLES[space] = _Tables(space)
    return t


def _idx(space: StateSpace, x: Insertion) -> int:
    if isinstance(x, StateElement):
        return space.index(x.element, x.monomial)
    return int(x)


def _vec(space: StateSpace, x) -> Vector:
    if isinstance(x, Mapping):
        return {int(k): Fraction(v) for k, v in x.items() if v}
    return {_idx(space, x): Fraction(1)}


def three_point(space: StateSpace, a: Insertion, b: Insertion, c: Insertion) -> CorrelatorValue:
    return _tables(space).evaluate((_idx(space, a), _idx(space, b), _idx(space, c)))


def four_point(space: StateSpace, a: Insertion, b: Insertion, c: Insertion,
               d: Insertion) -> CorrelatorValue:
    idxs = tuple(_idx(space, x) for x in (a, b, c, d))
    return _tables(space).evaluate(idxs)


def correlator_trace(space: StateSpace, insertions: Sequence[Insertion]) -> dict:
    idxs = [_idx(space, x) for x in insertions]
    elems = [space.basis[i].element for i in idxs]
    lb = line_bundle_degrees(space.weights, 0, elems)
    value = _tables(space).evaluate(idxs)
    return {
        "insertions": [space.basis[i].label for i in idxs],
        "degrees": [format_rational(space.degrees[i]) for i in idxs],
        "l_values": [format_rational(l) for l in lb.degrees],
        "axiom": value.axiom,
        "value": None if value.value is None else format_rational(value.value),
    }


def star_product(space: StateSpace, r, s) -> Vector | CorrelatorValue:
    """``r * s = sum <r, s, alpha> eta^{alpha beta} beta`` or ``UNDETERMINED``."""
    T = _tables(space)
    r, s = _vec(space, r), _vec(space, s)
    acc: dict[int, Fraction] = {}
    for i, x in r.items():
        for j, y in s.items():
            for alpha in range(space.dim):
                v = T.evaluate((i, j, alpha))
                if not v.determined:
                    return UNDETERMINED
                if v.value:
                    for beta, e in T.eta_inv[alpha].items():
                        acc[beta] = acc.get(beta, Fraction(0)) + x * y * v.value * e
    return {k: v for k, v in sorted(acc.items()) if v}


# ---------------------------------------------------------------------------
# loop specifics

def _loop_bound(a1: int, a2: int, i: int) -> int:
    """Order of ``g_i`` modulo the identity form: ``a2`` for ``i = 1``, ``a1`` for ``i = 2``."""
    if i not in (1, 2):
        raise DomainError("generator index must be 1 or 2")
    return a2 if i == 1 else a1


def _h(a1: int, a2: int, i: int, c: int = 1) -> PhaseVector:
    """``J g_i^c``."""
    n = a1 * a2 - 1
    J = PhaseVector((Fraction(a2 - 1, n), Fraction(a1 - 1, n)))
    return J + c * loop_generators(a1, a2)[i - 1]


def loop_power_rule(space: StateSpace, i: int, c: int) -> StateElement:
    """``(e_{J g_i})^c`` by repeated axiomatic star products; must be ``e_{J g_i^c}``."""
    a1, a2 = loop_parameters(space.potential)
    m = _loop_bound(a1, a2, i)
    if not 0 <= c < m - 1:
        raise DomainError(f"power rule needs 0 <= c < {m - 1}, got c = {c}")
    cur: Vector | CorrelatorValue = {space.index(_h(a1, a2, i, 0)): Fraction(1)}
    for step in range(1, c + 1):
        cur = star_product(space, cur, space.index(_h(a1, a2, i)))
        want = {space.index(_h(a1, a2, i, step)): Fraction(1)}
        if is_undetermined(cur) or cur != want:
            raise PowerRuleViolation(f"(e_Jg{i})^{step} = {cur}, expected {want}")
    return space.basis[space.index(_h(a1, a2, i, c))]


def _index_zero_shape(a1: int, a2: int, i: int) -> list[PhaseVector]:
    m = _loop_bound(a1, a2, i)
    if m < 3:
        raise WrongShape(f"J g{i} is the identity for loop({a1},{a2}); no narrow index-zero class")
    return [_h(a1, a2, i, m - 2), _h(a1, a2, i), _h(a1, a2, i), _h(a1, a2, i, m - 2)]


def loop_index_zero_four_point(a1: int, a2: int, i: int,
                               insertions: Sequence[PhaseVector] | None = None) -> Fraction:
    """Tabulated value ``-a2`` (``i = 2``) or ``-a1`` (``i = 1``) of the index-zero class.

    Its line bundle degrees are ``(-2, 0)`` for ``i = 2`` and ``(0, -2)`` for
    ``i = 1``.  The value is taken as given, not derived.
    """
    shape = _index_zero_shape(a1, a2, i)
    if insertions is not None and sorted(insertions) != sorted(shape):
        raise WrongShape("insertions do not form the index-zero pattern")
    return Fraction(-a2 if i == 2 else -a1)


@dataclass
class CrossCheckReport:
    total: int = 0
    determined: int = 0
    nonzero: int = 0
    by_axiom: Counter = field(default_factory=Counter)
    mismatches: list = field(default_factory=list)

    @property
    def checked(self) -> int:
        return self.determined

    def to_json(self) -> dict:
        return {
            "triples": self.total,
            "determined": self.determined,
            "checked": self.checked,
            "nonzero": self.nonzero,
            "by_axiom": dict(sorted(self.by_axiom.items())),
            "mismatches": list(self.mismatches),
        }


def cross_check(space: StateSpace, A: GradedFrobeniusAlgebra) -> CrossCheckReport:
    """Compare every cascade-determined triple with ``eta(x * y, z)`` in ``A``."""
    T = _tables(space)
    n = space.dim
    rep = CrossCheckReport()
    for i in range(n):
        for j in range(i, n):
            prod = A.structure_constants.get((i, j), {})
            for k in range(j, n):
                rep.total += 1
                v = T.evaluate((i, j, k))
                if not v.determined:
                    continue
                rep.determined += 1
                rep.by_axiom[v.axiom] += 1
                if v.value:
                    rep.nonzero += 1
                want = sum((c * A.pairing[l][k] for l, c in prod.items()), Fraction(0))
                if want != v.value:
                    labels = [space.basis[x].label for x in (i, j, k)]
                    rep.mismatches.append({"insertions": labels, "axiom": v.axiom,
                                           "axiom_value": format_rational(v.value),
                                           "ring_value": format_rational(want)})
    return rep


def loop_ring_report(space: StateSpace, mm: MirrorMap | None = None,
                     normalized: bool = True) -> tuple[GradedFrobeniusAlgebra, CrossCheckReport]:
    if mm is None:
        mm = mirror_map(space, normalized)
    table = transported_structure_constants(mm)
    J = grading_element_J(space.weights)
    A = GradedFrobeniusAlgebra(
        basis_labels=tuple(s.label for s in space.basis),
        degrees=tuple(space.degrees),
        unit_index=space.index(J),
        pairing=space.pairing,
        structure_constants=table,
    )
    return A, cross_check(space, A)


def loop_ring(space: StateSpace, normalized: bool = True) -> GradedFrobeniusAlgebra:
    """Multiplication table of ``H_{W,G_W}`` for a loop, carried over from the dual ring.

    Raises ``CrossCheckMismatch`` if any product disagrees with a correlator
    the axioms fix on their own.
    """
    A, rep = loop_ring_report(space, normalized=normalized)
    if rep.mismatches:
        raise CrossCheckMismatch(f"{len(rep.mismatches)} axiom-determined correlators disagree: "
                                 f"{rep.mismatches[:3]}")
    return A


# ---------------------------------------------------------------------------
# the two loop relations

@dataclass
class RelationTerm:
    expression: str
    value: Vector
    provenance: str  # "axiom" or "transported"
    dual_image: Vector

    def to_json(self, space: StateSpace) -> dict:
        return {"expression": self.expression, "provenance": self.provenance,
                "value": _vec_json(space, self.value),
                "matches_dual": self.value == self.dual_image}


@dataclass
class Relation:
    name: str
    coefficient: int
    terms: tuple[RelationTerm, RelationTerm]
    residual: Vector

    @property
    def ok(self) -> bool:
        return not self.residual and all(t.value == t.dual_image for t in self.terms)


@dataclass
class FourPointRecord:
    insertions: tuple[int, ...]
    l_values: tuple[Fraction, ...]
    axiom: str
    value: Fraction
    channels: tuple[Fraction, Fraction]

    @property
    def ok(self) -> bool:
        return self.channels == (self.value, self.value)


@dataclass
class RelationsReport:
    space: StateSpace
    relations: list[Relation]
    four_point: list[FourPointRecord]
    power_rule_checks: int

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.relations) and all(f.ok for f in self.four_point)

    def to_json(self) -> dict:
        sp = self.space
        return {
            "ok": self.ok,
            "power_rule_checks": self.power_rule_checks,
            "relations": [{"name": r.name, "coefficient": r.coefficient,
                           "terms": [t.to_json(sp) for t in r.terms],
                           "residual": _vec_json(sp, r.residual)} for r in self.relations],
            "four_point": [{"insertions": [sp.basis[i].label for i in f.insertions],
                            "l_values": [format_rational(x) for x in f.l_values],
                            "axiom": f.axiom, "value": format_rational(f.value),
                            "channels": [format_rational(x) for x in f.channels]}
                           for f in self.four_point],
        }


def _vec_json(space: StateSpace, v: Vector) -> dict:
    return {space.basis[k].label: format_rational(c) for k, c in sorted(v.items())}


def _add(*parts: tuple[Fraction, Vector]) -> Vector:
    acc: dict[int, Fraction] = {}
    for s, v in parts:
        for k, x in v.items():
            acc[k] = acc.get(k, Fraction(0)) + s * x
    return {k: v for k, v in sorted(acc.items()) if v}


class _RelationContext:
    def __init__(self, space: StateSpace, mm: MirrorMap):
        self.space = space
        self.mm = mm
        self.T = _tables(space)
        self.a1, self.a2 = mm.a1, mm.a2
        self.table = transported_structure_constants(mm)
        pos = {m: k for k, m in enumerate(mm.grid)}
        # e_{h_i} is the image of y_i; for a bound of 2 it lies in the broad sector
        self.P = {1: mm.grid_images[pos[(1, 0)]], 2: mm.grid_images[pos[(0, 1)]]}
        self.bound = {1: self.a2, 2: self.a1}
        self.coef = {1: self.a1, 2: self.a2}
        self.records: dict[tuple[int, ...], FourPointRecord] = {}
        self.power_checks = 0

    def tprod(self, x: Vector, y: Vector) -> Vector:
        acc: dict[int, Fraction] = {}
        for a, s in x.items():
            for b, t in y.items():
                for k, c in self.table[(a, b)].items():
                    acc[k] = acc.get(k, Fraction(0)) + s * t * c
        return {k: v for k, v in sorted(acc.items()) if v}

    def product(self, x: Vector, y: Vector) -> tuple[Vector, str]:
        v = star_product(self.space, x, y)
        if is_undetermined(v):
            return self.tprod(x, y), "transported"
        return v, "axiom"

    def narrow_power(self, i: int, c: int) -> int:
        el = loop_power_rule(self.space, i, c)
        self.power_checks += 1
        return self.space.index(el.element)

    def power(self, i: int, c: int) -> tuple[Vector, str]:
        m = self.bound[i]
        if c <= m - 2:
            return {self.narrow_power(i, c): Fraction(1)}, "axiom"
        if c == 1:
            return dict(self.P[i]), "axiom"
        base, prov = self.power(i, c - 1)
        v, p2 = self.product(base, self.P[i])
        return v, _worst(prov, p2)

    def composed(self, x: int, y: int, z: int) -> Vector | None:
        """``(x * y) * z`` through four-point classes, or ``None`` if one is undetermined."""
        acc: dict[int, Fraction] = {}
        for gamma in range(self.space.dim):
            v = self.T.evaluate((x, y, z, gamma))
            if not v.determined:
                return None
            if v.value:
                self._record((x, y, z, gamma), v)
                for beta, e in self.T.eta_inv[gamma].items():
                    acc[beta] = acc.get(beta, Fraction(0)) + v.value * e
        return {k: c for k, c in sorted(acc.items()) if c}

    def _record(self, idxs: tuple[int, ...], v: CorrelatorValue) -> None:
        if idxs in self.records:
            return
        x, y, z, g = ({i: Fraction(1)} for i in idxs)
        eta = self.T.eta
        pair = lambda u, w: sum((a * b * eta[i][j] for i, a in u.items() for j, b in w.items()),
                                Fraction(0))
        ch1 = pair(self.tprod(self.tprod(x, y), z), g)
        ch2 = pair(self.tprod(self.tprod(x, z), y), g)
        lb = line_bundle_degrees(self.space.weights, 0, [self.space.basis[i].element for i in idxs])
        self.records[idxs] = FourPointRecord(idxs, lb.degrees, v.axiom, v.value, (ch1, ch2))

    def dual(self, exps: tuple[int, int]) -> Vector:
        nf = normal_form(self.mm.dual_quotient, {exps: Fraction(1)})
        return push_forward(self.mm, nf)

    def relation(self, i: int) -> Relation:
        j = 3 - i
        mi, mj = self.bound[i], self.bound[j]
        idx = lambda k, c: self.space.index(_h(self.a1, self.a2, k, c))

        # e_{h_i}^{m_i}
        t1 = None
        if mi >= 3:
            x, h = self.narrow_power(i, mi - 2), idx(i, 1)
            t1 = self.composed(x, h, h)
            prov1 = "axiom"
        if t1 is None:
            t1, prov1 = self.power(i, mi)
        # e_{h_i} * e_{h_j}^{m_j - 1}
        t2 = None
        if mi >= 3 and mj >= 3:
            y = self.narrow_power(j, mj - 2)
            t2 = self.composed(y, idx(j, 1), idx(i, 1))
            prov2 = "axiom"
        if t2 is None:
            pj, p_a = self.power(j, mj - 1)
            t2, p_b = self.product(self.P[i], pj)
            prov2 = _worst(p_a, p_b)

        e1 = (mi, 0) if i == 1 else (0, mi)
        e2 = (1, mj - 1) if i == 1 else (mj - 1, 1)
        terms = (RelationTerm(f"e_h{i}^{mi}", t1, prov1, self.dual(e1)),
                 RelationTerm(f"e_h{i} * e_h{j}^{mj - 1}", t2, prov2, self.dual(e2)))
        k = self.coef[i]
        return Relation(f"e_h{i}^{mi} + {k}*e_h{i}*e_h{j}^{mj - 1}", k, terms,
                        _add((Fraction(1), t1), (Fraction(k), t2)))


def _worst(*provenances: str) -> str:
    return "transported" if "transported" in provenances else "axiom"


def loop_relations_check(space: StateSpace, mm: MirrorMap | None = None,
                         raise_on_failure: bool = True) -> RelationsReport:
    """Evaluate both loop relations from the axioms and compare with the dual ring.

    Each term is also compared with the image of the matching dual monomial
    under the mirror map.  Terms whose evaluation needs a correlator outside
    the axioms' reach use the transported table and are marked as such.
    """
    if mm is None:
        mm = mirror_map(space)
    ctx = _RelationContext(space, mm)
    for i in (1, 2):
        for c in range(ctx.bound[i] - 1):
            ctx.narrow_power(i, c)
    relations = [ctx.relation(2), ctx.relation(1)]
    report = RelationsReport(space, relations, sorted(ctx.records.values(),
                                                      key=lambda r: r.insertions),
                             ctx.power_checks)
    if raise_on_failure and not report.ok:
        bad = [r.name for r in relations if not r.ok]
        bad += [str(f.insertions) for f in report.four_point if not f.ok]
        raise RelationViolation(f"loop relations fail: {bad}")
    return report

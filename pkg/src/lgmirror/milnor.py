"""Graded Milnor rings ``Q[x]/Jac(W)`` of quasi-homogeneous potentials.

The quotient is built one weighted-degree slice at a time: the slice of the
Jacobian ideal is spanned by ``m * dW/dx_i`` and row reduced exactly.  Pivot
monomials get normal forms, the rest form the basis of that slice.

Pivot columns are scanned by decreasing largest single-variable weighted
exponent ``max_i b_i q_i`` (ties in canonical term order).  For loops,
chains' pure powers and Fermat atoms this puts every monomial outside the
exponent box ``b_i < a_i`` ahead of the box, so the box becomes the basis
whenever it is one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import DegeneratePotential, OutOfTableRange
from .frobenius import GradedFrobeniusAlgebra
from .qpoly import (
    Monomial,
    Polynomial,
    WeightSystem,
    central_charge,
    format_monomial,
    milnor_number_formula,
    monomial_key,
    monomial_mul,
    monomials_up_to,
    weighted_degree,
)

RingElement = dict  # basis Monomial -> Fraction, zero coefficients omitted


def jacobian(W: Polynomial) -> list[Polynomial]:
    return [W.diff(i) for i in range(W.nvars)]


def _det(rows: list[list[Polynomial]], nvars: int) -> Polynomial:
    n = len(rows)
    if n == 0:
        return Polynomial.constant(nvars, 1)
    if n == 1:
        return rows[0][0]
    total = Polynomial.zero(nvars)
    for j, entry in enumerate(rows[0]):
        if not entry:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * _det(minor, nvars)
        total = total + term if j % 2 == 0 else total - term
    return total


def hessian(W: Polynomial) -> Polynomial:
    """Determinant of the matrix of second partial derivatives."""
    first = jacobian(W)
    return _det([[f.diff(j) for j in range(W.nvars)] for f in first], W.nvars)


def _pivot_priority(weights: Sequence[Fraction]):
    def key(m: Monomial):
        heaviest = max((e * q for e, q in zip(m, weights)), default=Fraction(0))
        return (-heaviest, monomial_key(m))
    return key


@dataclass(frozen=True, eq=False)
class GradedQuotient:
    source: Polynomial
    weights: WeightSystem
    basis: tuple[Monomial, ...]
    degrees: tuple[Fraction, ...]
    normal_form_table: Mapping[Monomial, RingElement]
    table_range: Fraction
    hessian_top: Fraction
    _index: dict = field(repr=False, default_factory=dict)

    @property
    def nvars(self) -> int:
        return self.source.nvars

    @property
    def central_charge(self) -> Fraction:
        return central_charge(self.weights)

    @property
    def milnor_number(self) -> int:
        return len(self.basis)

    @property
    def top(self) -> Monomial:
        return self.basis[-1]

    @property
    def unit(self) -> Monomial:
        return (0,) * self.nvars

    def index(self, m: Monomial) -> int:
        return self._index[tuple(m)]

    def graded_dimensions(self) -> dict[Fraction, int]:
        dims: dict[Fraction, int] = {}
        for d in self.degrees:
            dims[d] = dims.get(d, 0) + 1
        return dims

    def basis_labels(self, var: str = "x") -> list[str]:
        return [format_monomial(m, var) for m in self.basis]


def build_quotient(W: Polynomial, q: Sequence[Fraction]) -> GradedQuotient:
    q = tuple(Fraction(x) for x in q)
    if len(q) != W.nvars:
        raise ValueError("one weight per variable required")
    if not W.is_quasi_homogeneous(q):
        raise DegeneratePotential("potential is not quasi-homogeneous for the given weights")
    chat = central_charge(q)
    rng = max(2 * chat, chat + max(q, default=Fraction(0)))
    monos = monomials_up_to(q, rng)
    slices: dict[Fraction, list[Monomial]] = {}
    for m in monos:
        slices.setdefault(weighted_degree(m, q), []).append(m)
    partials = jacobian(W)
    partial_deg = [1 - x for x in q]
    priority = _pivot_priority(q)

    table: dict[Monomial, RingElement] = {}
    basis: list[Monomial] = []
    for d in sorted(slices):
        cols = sorted(slices[d], key=priority)
        col_of = {m: k for k, m in enumerate(cols)}
        rows = []
        for i, f in enumerate(partials):
            for m in slices.get(d - partial_deg[i], ()):
                row = [Fraction(0)] * len(cols)
                for mm, c in f.items():
                    row[col_of[monomial_mul(m, mm)]] += c
                rows.append(row)
        reduced, pivots = linalg.rref(rows, len(cols)) if rows else ([], [])
        free = [k for k in range(len(cols)) if k not in set(pivots)]
        for k in free:
            basis.append(cols[k])
        for row, p in zip(reduced, pivots):
            table[cols[p]] = {cols[k]: -row[k] for k in free if row[k] != 0}

    basis.sort(key=lambda m: (weighted_degree(m, q), monomial_key(m)))
    for m in basis:
        table[m] = {m: Fraction(1)}
    degrees = tuple(weighted_degree(m, q) for m in basis)

    mu = milnor_number_formula(q)
    if Fraction(len(basis)) != mu:
        raise DegeneratePotential(f"quotient has dimension {len(basis)} in degrees <= {rng}, "
                                  f"expected Milnor number {mu}")
    if any(d > chat for d in degrees):
        raise DegeneratePotential("quotient has basis elements above the central charge")
    if degrees.count(chat) != 1:
        raise DegeneratePotential(f"top degree {chat} slice has dimension {degrees.count(chat)}")

    Q = GradedQuotient(W, q, tuple(basis), degrees, table, rng, Fraction(0),
                       {m: k for k, m in enumerate(basis)})
    h = normal_form(Q, hessian(W)).get(Q.top, Fraction(0))
    if h == 0:
        raise DegeneratePotential("Hessian vanishes in the Milnor ring")
    object.__setattr__(Q, "hessian_top", h)
    return Q


def _reduce_monomial(Q: GradedQuotient, m: Monomial) -> RingElement:
    hit = Q.normal_form_table.get(m)
    if hit is not None:
        return hit
    if weighted_degree(m, Q.weights) <= Q.table_range:
        raise OutOfTableRange(f"monomial {format_monomial(m)} missing from normal form table")
    # strip variables until a recorded divisor is reached; the table covers
    # (c, c + max q], so the first divisor inside the table has degree above c
    cur = list(m)
    while tuple(cur) not in Q.normal_form_table:
        j = next(i for i, e in enumerate(cur) if e)
        cur[j] -= 1
    if Q.normal_form_table[tuple(cur)]:
        raise OutOfTableRange(f"cannot reduce {format_monomial(m)}: divisor has nonzero normal form")
    return {}


def normal_form(Q: GradedQuotient, p: Polynomial | Mapping[Monomial, Fraction]) -> RingElement:
    if isinstance(p, Polynomial) and p.nvars != Q.nvars:
        if p.nvars > Q.nvars:
            raise ValueError(f"polynomial in {p.nvars} variables, quotient has {Q.nvars}")
        pad = (0,) * (Q.nvars - p.nvars)
        items = [(m + pad, c) for m, c in p.items()]
    else:
        items = p.items()
    out: dict[Monomial, Fraction] = {}
    for m, c in items:
        for b, x in _reduce_monomial(Q, tuple(m)).items():
            out[b] = out.get(b, Fraction(0)) + c * x
    return {b: c for b, c in sorted(out.items(), key=lambda t: Q.index(t[0])) if c != 0}


def ring_product(Q: GradedQuotient, a: Mapping[Monomial, Fraction],
                 b: Mapping[Monomial, Fraction]) -> RingElement:
    prod_terms: dict[Monomial, Fraction] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = monomial_mul(m1, m2)
            prod_terms[m] = prod_terms.get(m, Fraction(0)) + c1 * c2
    return normal_form(Q, prod_terms)


def residue_pairing(Q: GradedQuotient, f: Mapping[Monomial, Fraction],
                    g: Mapping[Monomial, Fraction]) -> Fraction:
    """``mu * lambda / h`` where ``f g = lambda * top + ...`` and ``Hess = h * top``."""
    lam = ring_product(Q, f, g).get(Q.top, Fraction(0))
    return Q.milnor_number * lam / Q.hessian_top


def element(Q: GradedQuotient, m: Monomial) -> RingElement:
    """The basis element (or reduced monomial) ``m`` as a ring element."""
    return normal_form(Q, {tuple(m): Fraction(1)})


def pairing_matrix(Q: GradedQuotient) -> list[list[Fraction]]:
    n = len(Q.basis)
    top_coeff = [[Fraction(0)] * n for _ in range(n)]
    for i, a in enumerate(Q.basis):
        for j, b in enumerate(Q.basis[i:], start=i):
            lam = _reduce_monomial(Q, monomial_mul(a, b)).get(Q.top, Fraction(0))
            top_coeff[i][j] = top_coeff[j][i] = Q.milnor_number * lam / Q.hessian_top
    return top_coeff


def structure_constants(Q: GradedQuotient) -> dict[tuple[int, int], dict[int, Fraction]]:
    table = {}
    for i, a in enumerate(Q.basis):
        for j, b in enumerate(Q.basis):
            nf = _reduce_monomial(Q, monomial_mul(a, b))
            table[(i, j)] = {Q.index(m): c for m, c in nf.items()}
    return table


def as_frobenius(Q: GradedQuotient, var: str = "x") -> GradedFrobeniusAlgebra:
    return GradedFrobeniusAlgebra(
        basis_labels=tuple(Q.basis_labels(var)),
        degrees=tuple(2 * d for d in Q.degrees),
        unit_index=Q.index(Q.unit),
        pairing=tuple(tuple(r) for r in pairing_matrix(Q)),
        structure_constants=structure_constants(Q),
    )

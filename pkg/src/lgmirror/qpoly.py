"""Exact multivariate polynomials with rational coefficients.

Also houses the structural side of invertible potentials: exponent
matrices, weight solving and the Fermat / loop / chain classification.

Monomials are plain tuples of exponents.  The canonical term order sorts by
total degree (ascending) and then lexicographically with the larger exponent
vector first, so ``x1^2*x2`` precedes ``x2^3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm, prod
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .errors import (
    DegenerateWeights,
    NonUnitCoefficients,
    NotInvertible,
    ParseError,
    UnknownVariable,
)

Monomial = tuple[int, ...]
WeightSystem = tuple[Fraction, ...]


def monomial_key(m: Monomial) -> tuple:
    return (sum(m), tuple(-e for e in m))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def weighted_degree(m: Monomial, weights: Sequence[Fraction]) -> Fraction:
    return sum((e * q for e, q in zip(m, weights)), Fraction(0))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_monomial(m: Monomial, var: str = "x") -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"{var}{i + 1}")
        elif e > 1:
            parts.append(f"{var}{i + 1}^{e}")
    return "*".join(parts) if parts else "1"


class Polynomial:
    """Immutable polynomial in ``nvars`` variables over the rationals.

    Terms are kept sorted in canonical order with zero coefficients dropped,
    so two polynomials are equal iff their term tuples are equal.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {nvars} variables")
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(coeff)
        self.nvars = nvars
        self._terms = tuple(sorted(((m, c) for m, c in acc.items() if c != 0),
                                   key=lambda t: monomial_key(t[0])))
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> Polynomial:
        return cls(len(m), {tuple(m): c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> Polynomial:
        return cls.monomial(tuple(int(j == i) for j in range(nvars)))

    # container protocol
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self._terms]

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self._terms))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        return Polynomial(self.nvars, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, [(m, -c) for m, c in self._terms])

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial(self.nvars, [(m, c * x) for m, x in self._terms])
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                m = monomial_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> Polynomial:
        out = []
        for m, c in self._terms:
            if m[i]:
                out.append((m[:i] + (m[i] - 1,) + m[i + 1:], c * m[i]))
        return Polynomial(self.nvars, out)

    def restrict(self, keep: Sequence[int]) -> Polynomial:
        """Set every variable outside ``keep`` to zero and renumber the rest."""
        keep = list(keep)
        drop = [i for i in range(self.nvars) if i not in keep]
        out = []
        for m, c in self._terms:
            if all(m[i] == 0 for i in drop):
                out.append((tuple(m[i] for i in keep), c))
        return Polynomial(len(keep), out)

    def permute(self, perm: Sequence[int]) -> Polynomial:
        """Rename variable ``i`` to variable ``perm[i]``."""
        out = []
        for m, c in self._terms:
            new = [0] * self.nvars
            for i, e in enumerate(m):
                new[perm[i]] = e
            out.append((tuple(new), c))
        return Polynomial(self.nvars, out)

    def is_quasi_homogeneous(self, weights: Sequence[Fraction], degree=1) -> bool:
        return all(weighted_degree(m, weights) == degree for m, _ in self._terms)

    def to_string(self, var: str = "x") -> str:
        if not self._terms:
            return "0"
        pieces = []
        for m, c in self._terms:
            mono = format_monomial(m, var)
            if mono == "1":
                pieces.append(format_rational(c))
            elif c == 1:
                pieces.append(mono)
            else:
                pieces.append(f"{format_rational(c)}*{mono}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r}, nvars={self.nvars})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[+*^/\-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse_potential(text: str) -> Polynomial:
    """Parse ``"x1^2*x2 + x2^3*x1"`` style input into a Polynomial.

    Variables must be ``x1..xN`` with no gaps; omitted coefficients are 1.
    """
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind, value=None):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {value or kind}, found {what}", tok[2])
        i += 1
        return tok

    raw_terms: list[tuple[Fraction, dict[int, int]]] = []
    while True:
        sign = 1
        if peek()[0] == "op" and peek()[1] == "-":
            take("op", "-")
            sign = -1
        coeff = Fraction(sign)
        if peek()[0] == "num":
            num = int(take("num")[1])
            den = 1
            if peek()[:2] == ("op", "/"):
                take("op", "/")
                tok = take("num")
                den = int(tok[1])
                if den == 0:
                    raise ParseError("zero denominator", tok[2])
            coeff = Fraction(sign * num, den)
            take("op", "*")
        elif sign == -1 and peek()[0] != "var":
            take("var")
        exps: dict[int, int] = {}
        while True:
            tok = take("var")
            idx = int(tok[1][1:])
            if idx == 0:
                raise UnknownVariable(f"variable x0 at position {tok[2]}; numbering starts at x1")
            e = 1
            if peek()[:2] == ("op", "^"):
                caret = take("op", "^")
                if peek()[0] != "num":
                    raise ParseError("'^' must be followed by a positive integer", caret[2])
                etok = take("num")
                e = int(etok[1])
                if e == 0:
                    raise ParseError("exponent must be positive", etok[2])
            exps[idx] = exps.get(idx, 0) + e
            if peek()[:2] == ("op", "*"):
                take("op", "*")
                continue
            break
        if coeff == 0:
            raise ParseError("zero coefficient", tokens[i - 1][2])
        raw_terms.append((coeff, exps))
        if peek()[0] == "end":
            break
        take("op", "+")

    used = sorted({v for _, exps in raw_terms for v in exps})
    nvars = used[-1]
    missing = sorted(set(range(1, nvars + 1)) - set(used))
    if missing:
        raise UnknownVariable(f"variables must be x1..x{nvars} without gaps; missing x{missing[0]}")
    return Polynomial(nvars, [(tuple(exps.get(v, 0) for v in range(1, nvars + 1)), c)
                              for c, exps in raw_terms])


# ---------------------------------------------------------------------------
# structure of invertible potentials

def exponent_matrix(W: Polynomial) -> list[list[int]]:
    return [list(m) for m in W.monomials()]


def require_unit_coefficients(W: Polynomial) -> None:
    bad = [c for _, c in W.items() if c != 1]
    if bad:
        raise NonUnitCoefficients(
            f"invertible-potential operations need unit coefficients, got {format_rational(bad[0])}")


def weights_of(W: Polynomial) -> WeightSystem:
    """Solve ``E q = (1, ..., 1)`` for the exponent matrix ``E`` of ``W``."""
    E = exponent_matrix(W)
    if len(E) != W.nvars:
        raise NotInvertible(f"{len(E)} monomials in {W.nvars} variables: exponent matrix is not square")
    if W.nvars == 0:
        return ()
    A = linalg.to_matrix(E)
    if linalg.determinant(A) == 0:
        raise DegenerateWeights("exponent matrix is singular; weights are not unique")
    q = tuple(linalg.solve(A, [Fraction(1)] * W.nvars))
    if any(not (0 < x < 1) for x in q):
        raise DegenerateWeights(
            "weights outside (0,1): " + ", ".join(format_rational(x) for x in q))
    return q


def central_charge(q: Sequence[Fraction]) -> Fraction:
    return sum((1 - 2 * Fraction(x) for x in q), Fraction(0))


def milnor_number_formula(q: Sequence[Fraction]) -> Fraction:
    return prod((1 / Fraction(x) - 1 for x in q), start=Fraction(1))


def weight_denominator(q: Sequence[Fraction]) -> int:
    return lcm(1, *(Fraction(x).denominator for x in q))


@dataclass(frozen=True)
class PotentialClass:
    """Classification of a potential.

    ``kind`` is one of ``Fermat``, ``Loop``, ``Chain``, ``Sum`` or
    ``NotInvertible``.  For atoms, ``variables[k]`` is the (0-based) variable
    carrying exponent ``params[k]``; for sums the atoms are listed in order of
    their smallest variable.
    """

    kind: str
    params: tuple[int, ...] = ()
    variables: tuple[int, ...] = ()
    atoms: tuple[PotentialClass, ...] = field(default=())

    @property
    def invertible(self) -> bool:
        return self.kind != "NotInvertible"

    def __str__(self) -> str:
        if self.kind == "Sum":
            return "Sum[" + ", ".join(str(a) for a in self.atoms) + "]"
        if self.kind == "NotInvertible":
            return "NotInvertible"
        return f"{self.kind}({','.join(map(str, self.params))})"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "Sum":
            out["atoms"] = [a.to_json() for a in self.atoms]
        elif self.kind != "NotInvertible":
            out["params"] = list(self.params)
            out["variables"] = [f"x{v + 1}" for v in self.variables]
        return out


NOT_INVERTIBLE = PotentialClass("NotInvertible")


def _components(W: Polynomial) -> list[tuple[list[int], list[Monomial]]]:
    parent = list(range(W.nvars))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for m in W.monomials():
        support = [i for i, e in enumerate(m) if e]
        for v in support[1:]:
            parent[find(v)] = find(support[0])
    groups: dict[int, list[int]] = {}
    for v in range(W.nvars):
        groups.setdefault(find(v), []).append(v)
    comps = []
    for vs in sorted(groups.values()):
        monos = [m for m in W.monomials() if any(m[v] for v in vs)]
        comps.append((vs, monos))
    return comps


def _classify_atom(vs: list[int], monos: list[Monomial]) -> PotentialClass:
    if len(monos) != len(vs):
        return NOT_INVERTIBLE
    if len(vs) == 1:
        (e,) = [m[vs[0]] for m in monos]
        return PotentialClass("Fermat", (e,), (vs[0],)) if e >= 2 else NOT_INVERTIBLE
    # each monomial must be x_i^{a_i} x_j (pointer i -> j) or x_i^{a_i} (chain end)
    pointer: dict[int, int | None] = {}
    exponent: dict[int, int] = {}
    for m in monos:
        support = [v for v in vs if m[v]]
        if len(support) == 1:
            (i,) = support
            head, nxt = i, None
        elif len(support) == 2:
            ones = [v for v in support if m[v] == 1]
            heavy = [v for v in support if m[v] >= 2]
            if len(ones) != 1 or len(heavy) != 1:
                return NOT_INVERTIBLE
            head, nxt = heavy[0], ones[0]
        else:
            return NOT_INVERTIBLE
        if head in pointer or m[head] < 2:
            return NOT_INVERTIBLE
        pointer[head] = nxt
        exponent[head] = m[head]
    if set(pointer) != set(vs):
        return NOT_INVERTIBLE
    ends = [v for v, n in pointer.items() if n is None]
    if not ends:
        # loop: the pointer map must be a single cycle
        start = min(vs)
        order = [start]
        while (nxt := pointer[order[-1]]) != start:
            if nxt in order:
                return NOT_INVERTIBLE
            order.append(nxt)
        if len(order) != len(vs):
            return NOT_INVERTIBLE
        return PotentialClass("Loop", tuple(exponent[v] for v in order), tuple(order))
    if len(ends) != 1:
        return NOT_INVERTIBLE
    targets = [n for n in pointer.values() if n is not None]
    starts = [v for v in vs if v not in targets]
    if len(starts) != 1 or len(set(targets)) != len(targets):
        return NOT_INVERTIBLE
    order = [starts[0]]
    while pointer[order[-1]] is not None:
        order.append(pointer[order[-1]])
    if len(order) != len(vs):
        return NOT_INVERTIBLE
    return PotentialClass("Chain", tuple(exponent[v] for v in order), tuple(order))


def classify(W: Polynomial) -> PotentialClass:
    require_unit_coefficients(W)
    if W.nvars == 0 or not W:
        return NOT_INVERTIBLE
    atoms = [_classify_atom(vs, monos) for vs, monos in _components(W)]
    if any(not a.invertible for a in atoms):
        return NOT_INVERTIBLE
    if len(atoms) == 1:
        return atoms[0]
    return PotentialClass("Sum", atoms=tuple(atoms),
                          variables=tuple(v for a in atoms for v in a.variables))


# ---------------------------------------------------------------------------
# constructors for the standard families

def loop_potential(a1: int, a2: int) -> Polynomial:
    """``x1^a1*x2 + x2^a2*x1``."""
    return Polynomial(2, {(a1, 1): 1, (1, a2): 1})


def chain_potential(*exponents: int) -> Polynomial:
    n = len(exponents)
    terms = {}
    for i, a in enumerate(exponents):
        m = [0] * n
        m[i] = a
        if i + 1 < n:
            m[i + 1] = 1
        terms[tuple(m)] = 1
    return Polynomial(n, terms)


def fermat_potential(a: int) -> Polynomial:
    return Polynomial(1, {(a,): 1})


def direct_sum(*parts: Polynomial) -> Polynomial:
    """Disjoint-variable sum, variables of later summands shifted right."""
    n = sum(p.nvars for p in parts)
    terms = []
    offset = 0
    for p in parts:
        for m, c in p.items():
            full = [0] * n
            full[offset:offset + p.nvars] = m
            terms.append((tuple(full), c))
        offset += p.nvars
    return Polynomial(n, terms)


def monomials_up_to(weights: Sequence[Fraction], max_degree: Fraction) -> list[Monomial]:
    """All monomials of weighted degree at most ``max_degree``."""
    bounds = [int(Fraction(max_degree) / Fraction(q)) for q in weights]
    out = []
    for m in product(*(range(b + 1) for b in bounds)):
        if weighted_degree(m, weights) <= max_degree:
            out.append(m)
    return out

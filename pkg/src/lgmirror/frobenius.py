"""Graded Frobenius algebras given by structure constants.

This is the common currency of both sides of the mirror: the Milnor ring
and the orbifold state space each export one, and the checks here
(``validate``, ``verify_isomorphism``) never look behind that interface.
Elements are sparse vectors ``{basis index: Fraction}``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .qpoly import format_rational

Vector = dict  # basis index -> Fraction


def add_into(acc: dict, vec: Mapping[int, Fraction], scale=1) -> dict:
    for k, v in vec.items():
        acc[k] = acc.get(k, Fraction(0)) + scale * v
    return acc


def clean(vec: Mapping[int, Fraction]) -> Vector:
    return {k: v for k, v in sorted(vec.items()) if v != 0}


@dataclass(frozen=True)
class GradedFrobeniusAlgebra:
    basis_labels: tuple[str, ...]
    degrees: tuple[Fraction, ...]
    unit_index: int
    pairing: tuple[tuple[Fraction, ...], ...]
    structure_constants: Mapping[tuple[int, int], Mapping[int, Fraction]]

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @property
    def top_degree(self) -> Fraction:
        return max(self.degrees)

    def basis_vector(self, i: int) -> Vector:
        return {i: Fraction(1)}

    def multiply(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vector:
        acc: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                add_into(acc, self.structure_constants.get((i, j), {}), a * b)
        return clean(acc)

    def pair(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
        return sum((a * b * self.pairing[i][j] for i, a in x.items() for j, b in y.items()),
                   Fraction(0))

    def to_json(self) -> dict:
        return {
            "basis": [{"label": l, "degree": format_rational(d)}
                      for l, d in zip(self.basis_labels, self.degrees)],
            "unit_index": self.unit_index,
            "pairing_matrix": [[format_rational(x) for x in row] for row in self.pairing],
            "ring_table": [
                {"i": i, "j": j,
                 "product": {str(k): format_rational(c) for k, c in sorted(v.items())}}
                for (i, j), v in sorted(self.structure_constants.items()) if i <= j and v
            ],
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}


@dataclass
class IsoReport:
    is_iso: bool
    scalar_c: Fraction | None
    violations: list[Violation] = field(default_factory=list)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_json(self) -> dict:
        return {
            "is_iso": self.is_iso,
            "scalar_c": None if self.scalar_c is None else format_rational(self.scalar_c),
            "violations": [v.to_json() for v in self.violations],
        }


def validate(A: GradedFrobeniusAlgebra) -> ValidationReport:
    """Exhaustively check the Frobenius algebra axioms on basis triples."""
    report = ValidationReport()
    bad = report.violations.append
    n = A.dim
    idx = range(n)
    prod = {(i, j): clean(A.structure_constants.get((i, j), {})) for i in idx for j in idx}
    top = A.top_degree

    for i in idx:
        e = {i: Fraction(1)}
        if prod[(A.unit_index, i)] != e or prod[(i, A.unit_index)] != e:
            bad(Violation("UnitViolation", f"unit * {A.basis_labels[i]} != {A.basis_labels[i]}"))
    for i in idx:
        for j in idx:
            if A.pairing[i][j] != A.pairing[j][i]:
                bad(Violation("PairingSymmetryViolation", f"eta({i},{j}) != eta({j},{i})"))
            if A.pairing[i][j] != 0 and A.degrees[i] + A.degrees[j] != top:
                bad(Violation("PairingDegreeViolation",
                              f"eta({i},{j}) != 0 off complementary degrees"))
    if linalg.determinant(A.pairing) == 0:
        bad(Violation("NondegeneracyViolation", "pairing matrix is singular"))
    for i in idx:
        for j in idx:
            if j > i and prod[(i, j)] != prod[(j, i)]:
                bad(Violation("CommutativityViolation", f"e{i}*e{j} != e{j}*e{i}"))
            for k in prod[(i, j)]:
                if A.degrees[k] != A.degrees[i] + A.degrees[j]:
                    bad(Violation("GradingViolation", f"e{i}*e{j} has a component e{k}"))

    eta_rows = [{k: v for k, v in enumerate(row) if v != 0} for row in A.pairing]
    for i in idx:
        for j in idx:
            ij = prod[(i, j)]
            for k in idx:
                left: dict[int, Fraction] = {}
                for l, c in ij.items():
                    add_into(left, prod[(l, k)], c)
                right: dict[int, Fraction] = {}
                for l, c in prod[(j, k)].items():
                    add_into(right, prod[(i, l)], c)
                if clean(left) != clean(right):
                    bad(Violation("AssociativityViolation", f"(e{i}e{j})e{k} != e{i}(e{j}e{k})"))
                f_left = sum((c * eta_rows[l].get(k, 0) for l, c in ij.items()), Fraction(0))
                f_right = sum((c * eta_rows[i].get(l, 0) for l, c in prod[(j, k)].items()),
                              Fraction(0))
                if f_left != f_right:
                    bad(Violation("FrobeniusViolation",
                                  f"eta(e{i}e{j}, e{k}) != eta(e{i}, e{j}e{k})"))
    return report


def tensor(A: GradedFrobeniusAlgebra, B: GradedFrobeniusAlgebra) -> GradedFrobeniusAlgebra:
    nb = B.dim
    labels, degrees = [], []
    for a, da in zip(A.basis_labels, A.degrees):
        for b, db in zip(B.basis_labels, B.degrees):
            labels.append(f"{a}(x){b}")
            degrees.append(da + db)
    pairing = tuple(
        tuple(A.pairing[i][k] * B.pairing[j][l] for k in range(A.dim) for l in range(nb))
        for i in range(A.dim) for j in range(nb))
    table = {}
    for (i, k), va in A.structure_constants.items():
        for (j, l), vb in B.structure_constants.items():
            out = {}
            for p, x in va.items():
                for r, y in vb.items():
                    if x * y:
                        out[p * nb + r] = x * y
            table[(i * nb + j, k * nb + l)] = out
    return GradedFrobeniusAlgebra(tuple(labels), tuple(degrees),
                                  A.unit_index * nb + B.unit_index, pairing, table)


def unit_algebra() -> GradedFrobeniusAlgebra:
    """The one-dimensional algebra, neutral for ``tensor``."""
    return GradedFrobeniusAlgebra(("1",), (Fraction(0),), 0, ((Fraction(1),),),
                                  {(0, 0): {0: Fraction(1)}})


def poincare(A: GradedFrobeniusAlgebra) -> dict[Fraction, int]:
    return dict(sorted(Counter(A.degrees).items()))


def convolve(p: Mapping[Fraction, int], q: Mapping[Fraction, int]) -> dict[Fraction, int]:
    out: Counter = Counter()
    for d1, m1 in p.items():
        for d2, m2 in q.items():
            out[d1 + d2] += m1 * m2
    return dict(sorted(out.items()))


def poincare_to_json(p: Mapping[Fraction, int]) -> dict[str, int]:
    return {format_rational(d): m for d, m in sorted(p.items())}


def _as_images(mapping: Sequence) -> list[Vector]:
    images = []
    for x in mapping:
        if isinstance(x, Mapping):
            images.append(clean({int(k): Fraction(v) for k, v in x.items()}))
        else:
            images.append({int(x): Fraction(1)})
    return images


def _apply(images: Sequence[Vector], x: Mapping[int, Fraction]) -> Vector:
    acc: dict[int, Fraction] = {}
    for i, c in x.items():
        add_into(acc, images[i], c)
    return clean(acc)


def verify_isomorphism(A: GradedFrobeniusAlgebra, B: GradedFrobeniusAlgebra,
                       mapping: Sequence) -> IsoReport:
    """Check that ``mapping`` is a graded ring isomorphism ``A -> B`` that
    scales the pairing by one nonzero constant.

    ``mapping[i]`` is the image of basis element ``i`` of ``A``: either an
    index into ``B``'s basis or a sparse vector over it.
    """
    violations: list[Violation] = []
    bad = violations.append
    images = _as_images(mapping)
    if len(images) != A.dim or A.dim != B.dim:
        bad(Violation("DimensionMismatch", f"dim A={A.dim}, dim B={B.dim}, map size={len(images)}"))
        return IsoReport(False, None, violations)
    n = A.dim
    matrix = [[img.get(j, Fraction(0)) for j in range(n)] for img in images]
    if linalg.rank(matrix) != n:
        bad(Violation("NotBijective", "image vectors are linearly dependent"))

    for i, img in enumerate(images):
        for j in img:
            if B.degrees[j] != A.degrees[i]:
                bad(Violation("DegreeViolation",
                              f"{A.basis_labels[i]} (deg {format_rational(A.degrees[i])}) -> "
                              f"{B.basis_labels[j]} (deg {format_rational(B.degrees[j])})"))
    if images[A.unit_index] != {B.unit_index: Fraction(1)}:
        bad(Violation("UnitViolation", "unit is not mapped to unit"))

    for i in range(n):
        for j in range(i, n):
            lhs = _apply(images, A.multiply({i: Fraction(1)}, {j: Fraction(1)}))
            rhs = B.multiply(images[i], images[j])
            if lhs != rhs:
                bad(Violation("HomomorphismViolation",
                              f"map({A.basis_labels[i]}*{A.basis_labels[j]}) != "
                              f"map({A.basis_labels[i]})*map({A.basis_labels[j]})"))

    c = None
    for i in range(n):
        for j in range(i, n):
            ea = A.pairing[i][j]
            eb = B.pair(images[i], images[j])
            if ea == 0:
                if eb != 0:
                    bad(Violation("PairingViolation",
                                  f"eta_B(map e{i}, map e{j}) = {format_rational(eb)} but eta_A = 0"))
                continue
            ratio = eb / ea
            if c is None:
                c = ratio
            if ratio != c or ratio == 0:
                bad(Violation("PairingViolation",
                              f"pairing ratio {format_rational(ratio)} at ({i},{j}) "
                              f"differs from {format_rational(c)}"))
    return IsoReport(not violations, c, violations)

"""Deformation maps, deformed algebras, graph embeddings, and equivalence.

A deformation map is a module homomorphism from Q into R, stored as a matrix
of ``d``-polynomials.  Checking one, twisting Q by one, and comparing two of
them up to a module automorphism of Q are all basis computations through the
shared evaluation kernel.  Non-equivalence is only ever reported relative to
the family of automorphisms actually searched.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .actions import MatchedPair, action_eval
from .algebra import (
    CheckReport,
    ConformalAlgebra,
    GenElement,
    LIE,
    Violation,
    product_eval,
)
from .poly import D, L1, MultiPoly
from .structure import poly_det

_PD = MultiPoly.var(D)
_PL1 = MultiPoly.var(L1)

Matrix = tuple[tuple[MultiPoly, ...], ...]


def _check_matrix(matrix: Matrix, rows: int, cols: int, what: str) -> None:
    if len(matrix) != rows or any(len(r) != cols for r in matrix):
        raise ValueError(f"{what} matrix must be {rows}x{cols}")
    for row in matrix:
        for entry in row:
            if not entry.variables() <= {D}:
                raise ValueError(f"{what} entry {entry} must be univariate in d")


@dataclass(frozen=True)
class DeformationMap:
    """Module homomorphism Q -> R attached to a matched pair."""

    pair: MatchedPair
    matrix: Matrix  # Q rank rows, R rank columns

    def __post_init__(self):
        _check_matrix(self.matrix, self.pair.Q.rank, self.pair.R.rank, "deformation")

    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.matrix for e in row)


def zero_map(pair: MatchedPair) -> DeformationMap:
    zero = MultiPoly.zero()
    matrix = tuple((zero,) * pair.R.rank for _ in range(pair.Q.rank))
    return DeformationMap(pair, matrix)


@dataclass(frozen=True)
class Morphism:
    """Module map between algebras of the same kind, matrix over d-polynomials."""

    source: ConformalAlgebra
    target: ConformalAlgebra
    matrix: Matrix  # source rank rows, target rank columns

    def __post_init__(self):
        if self.source.kind != self.target.kind:
            raise ValueError("morphism endpoints must have the same kind")
        _check_matrix(self.matrix, self.source.rank, self.target.rank, "morphism")


def identity_morphism(algebra: ConformalAlgebra) -> Morphism:
    n = algebra.rank
    zero = MultiPoly.zero()
    one = MultiPoly.const(1)
    matrix = tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )
    return Morphism(algebra, algebra, matrix)


def apply_matrix(matrix: Matrix, coords: tuple[MultiPoly, ...]) -> tuple[MultiPoly, ...]:
    cols = len(matrix[0]) if matrix else 0
    out = [MultiPoly.zero()] * cols
    for xi, row in zip(coords, matrix):
        if xi.is_zero:
            continue
        for j, entry in enumerate(row):
            if not entry.is_zero:
                out[j] = out[j] + xi * entry
    return tuple(out)


def apply_map(mapping: Morphism | DeformationMap, x: GenElement) -> GenElement:
    """Extend the matrix d-linearly to an arbitrary element."""
    matrix = mapping.matrix
    if len(x.coords) != len(matrix):
        raise ValueError("element rank does not match map source rank")
    return GenElement(apply_matrix(matrix, x.coords))


def _deformation_residuals(mp: MatchedPair, matrix: Matrix):
    """Residuals of the deformation identity on all Q-basis pairs.

    Works for symbolic matrices whose entries carry ansatz unknowns; all
    substitutions act on ``d`` alone, so unknowns ride along inertly.
    """
    nq = mp.Q.rank
    neg = -_PL1 - _PD
    q_basis = [mp.Q.basis_element(i) for i in range(nq)]
    images = [GenElement(apply_matrix(matrix, q.coords)) for q in q_basis]
    for i in range(nq):
        x, fx = q_basis[i], images[i]
        for j in range(nq):
            y, fy = q_basis[j], images[j]
            lhs = GenElement(
                apply_matrix(matrix, product_eval(mp.Q, x, y, _PL1).coords)
            ) - product_eval(mp.R, fx, fy, _PL1)
            if mp.kind == LIE:
                rhs = (
                    GenElement(
                        apply_matrix(matrix, action_eval(mp.lhd, y, fx, neg).coords)
                    )
                    - GenElement(
                        apply_matrix(matrix, action_eval(mp.lhd, x, fy, _PL1).coords)
                    )
                    + action_eval(mp.rhd, x, fy, _PL1)
                    - action_eval(mp.rhd, y, fx, neg)
                )
            else:
                rhs = (
                    action_eval(mp.lhu, fx, y, _PL1)
                    + action_eval(mp.rhd, x, fy, _PL1)
                    - GenElement(
                        apply_matrix(matrix, action_eval(mp.rhu, fx, y, _PL1).coords)
                    )
                    - GenElement(
                        apply_matrix(matrix, action_eval(mp.lhd, x, fy, _PL1).coords)
                    )
                )
            yield i, j, lhs - rhs


def check_deformation_map(mp: MatchedPair, dm: DeformationMap) -> CheckReport:
    """The quadratic identity a map must satisfy to twist Q into a complement."""
    if dm.pair is not mp and dm.pair != mp:
        raise ValueError("map is attached to a different matched pair")
    violations = [
        Violation("deformation", (i, j), residual, mp.R.basis)
        for i, j, residual in _deformation_residuals(mp, dm.matrix)
        if not residual.is_zero
    ]
    return CheckReport(tuple(violations))


def deformed_algebra(mp: MatchedPair, dm: DeformationMap) -> ConformalAlgebra:
    """Q with its product twisted by the map through the cross actions.

    Computed unconditionally so that a failing candidate can still be
    inspected; when the map passes its check the output passes the axioms.
    """
    nq = mp.Q.rank
    neg = -_PL1 - _PD
    q_basis = [mp.Q.basis_element(i) for i in range(nq)]
    images = [GenElement(apply_matrix(dm.matrix, q.coords)) for q in q_basis]
    table = []
    for i in range(nq):
        row = []
        for j in range(nq):
            entry = GenElement(mp.Q.table[i][j])
            if mp.kind == LIE:
                entry = (
                    entry
                    + action_eval(mp.lhd, q_basis[i], images[j], _PL1)
                    - action_eval(mp.lhd, q_basis[j], images[i], neg)
                )
            else:
                entry = (
                    entry
                    + action_eval(mp.lhd, q_basis[i], images[j], _PL1)
                    + action_eval(mp.rhu, images[i], q_basis[j], _PL1)
                )
            row.append(entry.coords)
        table.append(tuple(row))
    return ConformalAlgebra(mp.kind, mp.Q.basis, tuple(table))


def check_morphism(h: Morphism) -> CheckReport:
    """A morphism must intertwine the source and target products."""
    violations = []
    src, tgt = h.source, h.target
    for i in range(src.rank):
        ei = src.basis_element(i)
        hi = apply_map(h, ei)
        for j in range(src.rank):
            ej = src.basis_element(j)
            lhs = apply_map(h, product_eval(src, ei, ej, _PL1))
            rhs = product_eval(tgt, hi, apply_map(h, ej), _PL1)
            residual = lhs - rhs
            if not residual.is_zero:
                violations.append(Violation("morphism", (i, j), residual, tgt.basis))
    return CheckReport(tuple(violations))


def is_isomorphism(h: Morphism) -> bool:
    """True iff the map intertwines products and its matrix is invertible.

    Over the d-polynomial ring a square matrix is invertible exactly when
    its determinant is a nonzero constant.
    """
    if h.source.rank != h.target.rank:
        raise ValueError("isomorphism candidates must have a square matrix")
    det = poly_det(h.matrix)
    if det.constant_value() in (None, Fraction(0)):
        return False
    return check_morphism(h).passed


def graph_embedding_check(mp: MatchedPair, dm: DeformationMap) -> CheckReport:
    """The graph of the map inside the bicrossed product is a subalgebra.

    Checks (i) closure: the product of two graph elements is again the graph
    image of its own Q part, and (ii) that x -> (map(x), x) is a morphism
    from the deformed algebra into the bicrossed product.
    """
    from .actions import build_bicrossed

    big = build_bicrossed(mp)
    nq, nr = mp.Q.rank, mp.R.rank
    zero = MultiPoly.zero()
    one = MultiPoly.const(1)
    embed = tuple(
        tuple(dm.matrix[i]) + tuple(one if j == i else zero for j in range(nq))
        for i in range(nq)
    )
    deformed = deformed_algebra(mp, dm)
    morph = Morphism(deformed, big, embed)
    violations = list(check_morphism(morph).violations)
    for i in range(nq):
        gi = apply_map(morph, deformed.basis_element(i))
        for j in range(nq):
            gj = apply_map(morph, deformed.basis_element(j))
            prod = product_eval(big, gi, gj, _PL1)
            q_part = GenElement(prod.coords[nr:])
            r_part = tuple(prod.coords[:nr])
            expect_r = apply_matrix(dm.matrix, q_part.coords)
            residual = GenElement(
                tuple(a - b for a, b in zip(r_part, expect_r))
            )
            if not residual.is_zero:
                violations.append(
                    Violation("graph-closure", (i, j), residual, mp.R.basis)
                )
    return CheckReport(tuple(violations))


def check_equivalence(
    mp: MatchedPair, phi: DeformationMap, psi: DeformationMap, alpha: Morphism
) -> CheckReport:
    """Whether ``alpha`` witnesses equivalence of the two deformation maps.

    Implemented literally: ``alpha`` is only required to be a module
    isomorphism of Q; the identity below is what makes it an algebra
    isomorphism between the two deformed products.
    """
    det = poly_det(alpha.matrix)
    if det.constant_value() in (None, Fraction(0)):
        raise ValueError("equivalence witness must be an invertible module map")
    nq = mp.Q.rank
    neg = -_PL1 - _PD
    q_basis = [mp.Q.basis_element(i) for i in range(nq)]
    a_img = [apply_map(alpha, q) for q in q_basis]
    psi_a = [GenElement(apply_matrix(psi.matrix, e.coords)) for e in a_img]
    phi_img = [GenElement(apply_matrix(phi.matrix, q.coords)) for q in q_basis]
    violations = []
    for i in range(nq):
        for j in range(nq):
            lhs = apply_map(
                alpha, product_eval(mp.Q, q_basis[i], q_basis[j], _PL1)
            ) - product_eval(mp.Q, a_img[i], a_img[j], _PL1)
            if mp.kind == LIE:
                rhs = (
                    action_eval(mp.lhd, a_img[i], psi_a[j], _PL1)
                    - apply_map(
                        alpha, action_eval(mp.lhd, q_basis[i], phi_img[j], _PL1)
                    )
                    - action_eval(mp.lhd, a_img[j], psi_a[i], neg)
                    + apply_map(
                        alpha, action_eval(mp.lhd, q_basis[j], phi_img[i], neg)
                    )
                )
            else:
                rhs = (
                    action_eval(mp.lhd, a_img[i], psi_a[j], _PL1)
                    - apply_map(
                        alpha, action_eval(mp.lhd, q_basis[i], phi_img[j], _PL1)
                    )
                    + action_eval(mp.rhu, psi_a[i], a_img[j], _PL1)
                    - apply_map(
                        alpha, action_eval(mp.rhu, phi_img[i], q_basis[j], _PL1)
                    )
                )
            residual = lhs - rhs
            if not residual.is_zero:
                violations.append(
                    Violation("equivalence", (i, j), residual, mp.Q.basis)
                )
    return CheckReport(tuple(violations))


def search_equivalence_diagonal(
    mp: MatchedPair,
    phi: DeformationMap,
    psi: DeformationMap,
    values: tuple[Fraction, ...],
) -> list[Morphism]:
    """Exhaust diagonal automorphisms with entries from ``values``.

    Returns every witness found, in deterministic grid order.  An empty
    result means "not found within the searched family", nothing stronger.
    """
    nq = mp.Q.rank
    zero = MultiPoly.zero()
    found = []
    nonzero = [v for v in values if v != 0]
    for diag in iter_product(nonzero, repeat=nq):
        matrix = tuple(
            tuple(MultiPoly.const(diag[i]) if i == j else zero for j in range(nq))
            for i in range(nq)
        )
        alpha = Morphism(mp.Q, mp.Q, matrix)
        if check_equivalence(mp, phi, psi, alpha).passed:
            found.append(alpha)
    return found

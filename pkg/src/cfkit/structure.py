"""Module invariants over the univariate d-polynomial ring.

The ring of polynomials in ``d`` over the rationals is Euclidean, so
submodules of a free module have a unique row-style Hermite normal form:
echelon by pivot column, monic pivots, entries above each pivot reduced to
smaller degree.  Storing that form makes submodule equality a syntactic
comparison, which the derived series and solvability verdicts build on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import ConformalAlgebra, GenElement, LIE, product_eval
from .poly import D, L1, MultiPoly

_PL1 = MultiPoly.var(L1)

PolyRow = tuple[MultiPoly, ...]
PolyMatrix = tuple[PolyRow, ...]


# -- univariate helpers ------------------------------------------------------


def poly_deg(p: MultiPoly) -> int:
    """Degree in d; -1 for the zero polynomial."""
    if p.is_zero:
        return -1
    if not p.variables() <= {D}:
        raise ValueError(f"expected a polynomial in d only: {p}")
    return p.degree(D)


def _ucoeffs(p: MultiPoly) -> list[Fraction]:
    out = [Fraction(0)] * (poly_deg(p) + 1)
    for mono, coeff in p.terms():
        exp = mono[0][1] if mono else 0
        out[exp] = coeff
    return out


def _from_ucoeffs(coeffs: list[Fraction]) -> MultiPoly:
    acc = MultiPoly.zero()
    for exp, c in enumerate(coeffs):
        if c:
            acc = acc + MultiPoly.const(c) * MultiPoly.var(D, exp) if exp else acc + c
    return acc


def poly_divmod(a: MultiPoly, b: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    """Euclidean division in the d-polynomial ring."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    ca, cb = _ucoeffs(a), _ucoeffs(b)
    if len(ca) < len(cb):
        return MultiPoly.zero(), a
    quot = [Fraction(0)] * (len(ca) - len(cb) + 1)
    rem = list(ca)
    lead = cb[-1]
    for k in range(len(quot) - 1, -1, -1):
        factor = rem[k + len(cb) - 1] / lead
        quot[k] = factor
        if factor:
            for i, c in enumerate(cb):
                rem[k + i] -= factor * c
    return _from_ucoeffs(quot), _from_ucoeffs(rem)


def poly_det(matrix: PolyMatrix) -> MultiPoly:
    """Determinant by cofactor expansion (ranks here are tiny)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return MultiPoly.const(1)
    if n == 1:
        return matrix[0][0]
    acc = MultiPoly.zero()
    sign = 1
    for j in range(n):
        entry = matrix[0][j]
        if not entry.is_zero:
            minor = tuple(
                tuple(row[c] for c in range(n) if c != j) for row in matrix[1:]
            )
            acc = acc + sign * entry * poly_det(minor)
        sign = -sign
    return acc


# -- Hermite normal form -----------------------------------------------------


def hermite_normal_form(matrix: PolyMatrix) -> PolyMatrix:
    """Canonical row form under invertible row operations over the d-ring."""
    rows = [list(r) for r in matrix if any(not e.is_zero for e in r)]
    if not rows:
        return ()
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    pivot = 0
    for col in range(ncols):
        if pivot >= len(rows):
            break
        while True:
            live = [r for r in range(pivot, len(rows)) if not rows[r][col].is_zero]
            if not live:
                break
            best = min(live, key=lambda r: poly_deg(rows[r][col]))
            rows[pivot], rows[best] = rows[best], rows[pivot]
            done = True
            for r in range(pivot + 1, len(rows)):
                if rows[r][col].is_zero:
                    continue
                q, _ = poly_divmod(rows[r][col], rows[pivot][col])
                if not q.is_zero:
                    rows[r] = [x - q * y for x, y in zip(rows[r], rows[pivot])]
                if not rows[r][col].is_zero:
                    done = False
            if done:
                break
        if rows[pivot][col].is_zero:
            continue
        lead = _ucoeffs(rows[pivot][col])[-1]
        if lead != 1:
            rows[pivot] = [x / lead for x in rows[pivot]]
        for r in range(pivot):
            if not rows[r][col].is_zero:
                q, _ = poly_divmod(rows[r][col], rows[pivot][col])
                if not q.is_zero:
                    rows[r] = [x - q * y for x, y in zip(rows[r], rows[pivot])]
        pivot += 1
    result = [tuple(r) for r in rows[:pivot] if any(not e.is_zero for e in r)]
    return tuple(result)


@dataclass(frozen=True)
class Submodule:
    """Submodule of a free module, stored by its Hermite-normal generators."""

    ambient_rank: int
    generators: PolyMatrix  # already in normal form; () is the zero submodule

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def generator_elements(self) -> list[GenElement]:
        return [GenElement(row) for row in self.generators]


def full_submodule(rank: int) -> Submodule:
    one = MultiPoly.const(1)
    zero = MultiPoly.zero()
    rows = tuple(
        tuple(one if j == i else zero for j in range(rank)) for i in range(rank)
    )
    return Submodule(rank, rows)


def span(ambient_rank: int, vectors: list[GenElement]) -> Submodule:
    """Canonical submodule generated by vectors with d-polynomial coordinates."""
    rows = []
    for v in vectors:
        if len(v.coords) != ambient_rank:
            raise ValueError("vector rank does not match ambient rank")
        for c in v.coords:
            if not c.variables() <= {D}:
                raise ValueError(f"spectral variable leaked into a generator: {c}")
        rows.append(tuple(v.coords))
    return Submodule(ambient_rank, hermite_normal_form(tuple(rows)))


def member(sub: Submodule, v: GenElement) -> bool:
    """Exact membership by successive division against the pivots."""
    if len(v.coords) != sub.ambient_rank:
        raise ValueError("vector rank does not match ambient rank")
    coords = list(v.coords)
    for c in coords:
        if not c.variables() <= {D}:
            raise ValueError(f"membership is defined for d-vectors only: {c}")
    for row in sub.generators:
        col = next(i for i, e in enumerate(row) if not e.is_zero)
        if coords[col].is_zero:
            continue
        q, rem = poly_divmod(coords[col], row[col])
        if not rem.is_zero:
            return False
        coords = [x - q * y for x, y in zip(coords, row)]
    return all(c.is_zero for c in coords)


def submodule_equals(a: Submodule, b: Submodule) -> bool:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient ranks differ")
    return a.generators == b.generators


def derived_subalgebra(algebra: ConformalAlgebra, sub: Submodule) -> Submodule:
    """Span of all spectral coefficients of products of the generators.

    Sesquilinearity moves d-polynomial coefficients through the product, so
    the spectral coefficients of products of arbitrary submodule elements
    stay inside the span computed from canonical generators alone; the test
    suite asserts this rather than assuming it.
    """
    if sub.ambient_rank != algebra.rank:
        raise ValueError("submodule does not live in the algebra's module")
    gens = sub.generator_elements()
    vectors: list[GenElement] = []
    for g in gens:
        for h in gens:
            prod = product_eval(algebra, g, h, _PL1)
            split = [c.coefficient_list(L1) for c in prod.coords]
            depth = max((len(s) for s in split), default=0)
            for t in range(depth):
                coords = tuple(
                    s[t] if t < len(s) else MultiPoly.zero() for s in split
                )
                vec = GenElement(coords)
                if not vec.is_zero:
                    vectors.append(vec)
    return span(algebra.rank, vectors)


@dataclass(frozen=True)
class Solvability:
    verdict: str  # "solvable" | "not_solvable" | "unknown"
    depth: int | None = None

    def __str__(self) -> str:
        if self.verdict == "solvable":
            return f"solvable({self.depth})"
        return self.verdict


def is_solvable(algebra: ConformalAlgebra, max_depth: int = 10) -> Solvability:
    """Iterate the derived series until zero, stabilization, or the cap.

    Descending chains over the d-polynomial ring need not terminate, so a
    series still strictly shrinking at ``max_depth`` is honestly reported
    as unknown.
    """
    if algebra.kind != LIE:
        raise ValueError("solvability applies to Lie kind only")
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    current = full_submodule(algebra.rank)
    for depth in range(max_depth + 1):
        if current.is_zero:
            return Solvability("solvable", depth)
        if depth == max_depth:
            return Solvability("unknown")
        nxt = derived_subalgebra(algebra, current)
        if submodule_equals(nxt, current):
            return Solvability("not_solvable")
        current = nxt
    return Solvability("unknown")


def is_abelian(algebra: ConformalAlgebra) -> bool:
    return algebra.is_abelian_table()


def change_basis(algebra: ConformalAlgebra, change: PolyMatrix) -> ConformalAlgebra:
    """Rewrite the product table in the basis given by the rows of ``change``.

    The change matrix must be invertible over the d-polynomial ring, i.e.
    have nonzero constant determinant; its inverse is then polynomial.
    """
    n = algebra.rank
    det = poly_det(change).constant_value()
    if det in (None, Fraction(0)):
        raise ValueError("basis change must have unit determinant")
    # adjugate / det gives the exact polynomial inverse
    inv = []
    sign_row = 1
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                tuple(change[r][c] for c in range(n) if c != i)
                for r in range(n)
                if r != j
            )
            sign = 1 if (i + j) % 2 == 0 else -1
            row.append(sign * poly_det(minor) / det)
        inv.append(tuple(row))
        sign_row = -sign_row
    inv = tuple(inv)
    table = []
    for i in range(n):
        gi = GenElement(change[i])
        row = []
        for j in range(n):
            gj = GenElement(change[j])
            prod = product_eval(algebra, gi, gj, _PL1)
            # express the product in the new basis: coords . inv
            coords = tuple(
                sum(
                    (prod.coords[k] * inv[k][t] for k in range(n)),
                    MultiPoly.zero(),
                )
                for t in range(n)
            )
            row.append(coords)
        table.append(tuple(row))
    return ConformalAlgebra(algebra.kind, algebra.basis, tuple(table))

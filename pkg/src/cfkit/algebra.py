"""Conformal algebras: finite free basis, spectral product table, axiom checks.

A single evaluation kernel, :func:`spectral_eval`, implements the two
rewriting rules that extend a basis product table to arbitrary elements: a
``d``-polynomial multiplying the left argument is re-evaluated at the negated
spectral parameter, one multiplying the right argument at ``d`` shifted by
it.  Every nested product in the package is computed through this one rule,
innermost first, which makes the treatment of expressions like a product
evaluated at ``-l - d`` completely uniform.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import D, L1, L2, MultiPoly, Scalar

LIE = "lie"
ASSOCIATIVE = "assoc"
KINDS = (LIE, ASSOCIATIVE)

_PD = MultiPoly.var(D)
_PL1 = MultiPoly.var(L1)
_PL2 = MultiPoly.var(L2)

Table = tuple[tuple[tuple[MultiPoly, ...], ...], ...]


@dataclass(frozen=True)
class GenElement:
    """Element of a free module, as a coordinate vector of polynomials."""

    coords: tuple[MultiPoly, ...]

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coords)

    def __add__(self, other: "GenElement") -> "GenElement":
        if len(self.coords) != len(other.coords):
            raise ValueError("element length mismatch")
        return GenElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GenElement") -> "GenElement":
        return self + (-other)

    def __neg__(self) -> "GenElement":
        return GenElement(tuple(-c for c in self.coords))

    def scale(self, factor: MultiPoly | Scalar) -> "GenElement":
        return GenElement(tuple(c * factor for c in self.coords))

    def __rmul__(self, factor) -> "GenElement":
        return self.scale(factor)


def zero_element(rank: int) -> GenElement:
    return GenElement((MultiPoly.zero(),) * rank)


def element_text(elem: GenElement, names: tuple[str, ...]) -> str:
    """Canonical rendering ``(poly) name + ...``, or ``0``."""
    parts = []
    for coeff, name in zip(elem.coords, names):
        if coeff.is_zero:
            continue
        if coeff == 1:
            parts.append(name)
        else:
            parts.append(f"({coeff}) {name}")
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Violation:
    """One failed identity instance, with the exact residual element."""

    identity: str
    indices: tuple[int, ...]
    residual: GenElement
    basis: tuple[str, ...]

    def text(self) -> str:
        where = ",".join(str(i) for i in self.indices)
        return f"{self.identity}[{where}]: {element_text(self.residual, self.basis)}"


@dataclass(frozen=True)
class CheckReport:
    violations: tuple[Violation, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def describe(self) -> str:
        if self.passed:
            return "pass"
        return "fail: " + "; ".join(v.text() for v in self.violations)


def merge_reports(parts: list[tuple[str, CheckReport]]) -> CheckReport:
    """Combine sub-reports, prefixing each violation's identity name."""
    merged = []
    for prefix, report in parts:
        for v in report.violations:
            merged.append(
                Violation(f"{prefix}:{v.identity}", v.indices, v.residual, v.basis)
            )
    return CheckReport(tuple(merged))


@dataclass(frozen=True)
class ConformalAlgebra:
    """Free finite-rank module with a spectral product table.

    ``table[i][j][k]`` is the coefficient polynomial (in ``d`` and ``l``)
    of the k-th basis element in the product of basis elements i and j.
    """

    kind: str
    basis: tuple[str, ...]
    table: Table

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise ValueError("basis names must be distinct")
        if len(self.table) != n or any(
            len(row) != n or any(len(entry) != n for entry in row)
            for row in self.table
        ):
            raise ValueError("table shape must be rank x rank x rank")
        for row in self.table:
            for entry in row:
                for coeff in entry:
                    if not coeff.variables() <= {D, L1}:
                        raise ValueError(
                            f"table entry {coeff} uses variables other than d, l"
                        )

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self.basis.index(name)
        except ValueError:
            raise ValueError(f"no basis element named {name!r}") from None

    def basis_element(self, i: int) -> GenElement:
        coords = [MultiPoly.zero()] * self.rank
        coords[i] = MultiPoly.const(1)
        return GenElement(tuple(coords))

    def element(self, coeffs: dict[str, MultiPoly | Scalar]) -> GenElement:
        coords = [MultiPoly.zero()] * self.rank
        for name, value in coeffs.items():
            coords[self.index(name)] = MultiPoly.const(0) + value
        return GenElement(tuple(coords))

    def is_abelian_table(self) -> bool:
        return all(
            coeff.is_zero for row in self.table for entry in row for coeff in entry
        )


def abelian(kind: str, names: tuple[str, ...]) -> ConformalAlgebra:
    n = len(names)
    zero = MultiPoly.zero()
    table = tuple(tuple((zero,) * n for _ in range(n)) for _ in range(n))
    return ConformalAlgebra(kind, tuple(names), table)


def require_affine(s: MultiPoly) -> None:
    """Spectral parameters must be affine in d, l, m."""
    if s.degree() > 1 or not s.variables() <= {D, L1, L2}:
        raise ValueError(f"spectral parameter must be affine in d, l, m: {s}")


def spectral_eval(
    table: Table,
    out_rank: int,
    left: tuple[MultiPoly, ...],
    right: tuple[MultiPoly, ...],
    s: MultiPoly,
) -> tuple[MultiPoly, ...]:
    """Evaluate a bilinear spectral product at parameter ``s``.

    ``table[i][j]`` gives the product of the i-th left and j-th right basis
    vectors as a coefficient vector of length ``out_rank``.  Coordinate
    polynomials of the arguments are rewritten by ``d -> -s`` (left) and
    ``d -> d + s`` (right); the table's spectral variable is set to ``s``.
    """
    require_affine(s)
    minus_s = -s
    shifted = _PD + s
    out = [MultiPoly.zero()] * out_rank
    for i, xi in enumerate(left):
        if xi.is_zero:
            continue
        a = xi.substitute(D, minus_s)
        row = table[i]
        for j, yj in enumerate(right):
            if yj.is_zero:
                continue
            entry = row[j]
            factor = None
            for k, coeff in enumerate(entry):
                if coeff.is_zero:
                    continue
                if factor is None:
                    factor = a * yj.substitute(D, shifted)
                out[k] = out[k] + factor * coeff.substitute(L1, s)
    return tuple(out)


def product_eval(
    algebra: ConformalAlgebra,
    x: GenElement,
    y: GenElement,
    s: MultiPoly | Scalar,
) -> GenElement:
    """Product of two elements at spectral parameter ``s``."""
    s = MultiPoly.const(0) + s
    n = algebra.rank
    if len(x.coords) != n or len(y.coords) != n:
        raise ValueError("element rank does not match algebra rank")
    return GenElement(spectral_eval(algebra.table, n, x.coords, y.coords, s))


def check_skew_symmetry(algebra: ConformalAlgebra) -> CheckReport:
    """x_l y + (y x evaluated at -l-d) must vanish on all basis pairs."""
    if algebra.kind != LIE:
        raise ValueError("skew-symmetry applies to Lie kind only")
    violations = []
    neg = -_PL1 - _PD
    for i in range(algebra.rank):
        ei = algebra.basis_element(i)
        for j in range(algebra.rank):
            ej = algebra.basis_element(j)
            residual = product_eval(algebra, ei, ej, _PL1) + product_eval(
                algebra, ej, ei, neg
            )
            if not residual.is_zero:
                violations.append(
                    Violation("skew-symmetry", (i, j), residual, algebra.basis)
                )
    return CheckReport(tuple(violations))


def check_jacobi(algebra: ConformalAlgebra) -> CheckReport:
    if algebra.kind != LIE:
        raise ValueError("the Jacobi identity applies to Lie kind only")
    violations = []
    n = algebra.rank
    basis = [algebra.basis_element(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            ij = product_eval(algebra, basis[i], basis[j], _PL1)
            for k in range(n):
                lhs = product_eval(
                    algebra, basis[i], product_eval(algebra, basis[j], basis[k], _PL2), _PL1
                )
                mid = product_eval(algebra, ij, basis[k], _PL1 + _PL2)
                rhs = product_eval(
                    algebra, basis[j], product_eval(algebra, basis[i], basis[k], _PL1), _PL2
                )
                residual = lhs - mid - rhs
                if not residual.is_zero:
                    violations.append(
                        Violation("jacobi", (i, j, k), residual, algebra.basis)
                    )
    return CheckReport(tuple(violations))


def check_associativity(algebra: ConformalAlgebra) -> CheckReport:
    if algebra.kind != ASSOCIATIVE:
        raise ValueError("associativity applies to associative kind only")
    violations = []
    n = algebra.rank
    basis = [algebra.basis_element(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            ij = product_eval(algebra, basis[i], basis[j], _PL1)
            for k in range(n):
                lhs = product_eval(algebra, ij, basis[k], _PL1 + _PL2)
                rhs = product_eval(
                    algebra, basis[i], product_eval(algebra, basis[j], basis[k], _PL2), _PL1
                )
                residual = lhs - rhs
                if not residual.is_zero:
                    violations.append(
                        Violation("associativity", (i, j, k), residual, algebra.basis)
                    )
    return CheckReport(tuple(violations))


def check_axioms(algebra: ConformalAlgebra) -> CheckReport:
    """Skew-symmetry plus Jacobi for Lie kind, associativity otherwise."""
    if algebra.kind == LIE:
        return merge_reports(
            [("skew", check_skew_symmetry(algebra)), ("jacobi", check_jacobi(algebra))]
        )
    return merge_reports([("assoc", check_associativity(algebra))])

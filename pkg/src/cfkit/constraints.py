"""Compile the deformation identity into exact equations over ansatz unknowns.

Each candidate map entry is a d-polynomial with undetermined rational
coefficients ``u0, u1, ...``.  Running the deformation check symbolically
and collecting the coefficient of every (d, l)-monomial of every residual
coordinate yields a finite system of polynomial equations in the unknowns
alone.  This subsumes ad-hoc specializations like setting the spectral
variable to zero or comparing degrees: every such consequence is one of the
collected coefficients.

Solving is deliberately modest: repeated elimination through equations that
are degree one in some unknown with a constant leading coefficient, then an
exhaustive search of a finite rational grid.  Residual nonlinear systems are
reported as-is; non-existence claims never extend beyond the searched grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product

from .actions import MatchedPair
from .deform import DeformationMap, Matrix, _deformation_residuals
from .poly import (
    D,
    L1,
    Monomial,
    MultiPoly,
    is_unknown,
    scalar_text,
    unknown,
    var_name,
)

Assignment = dict[int, Fraction]


class GridCapExceeded(ValueError):
    """Too many residual unknowns for an exhaustive grid search."""


@dataclass(frozen=True)
class AnsatzSpec:
    """Degree bounds for the candidate map's matrix entries.

    ``degrees[j][i]`` bounds the d-degree of the entry sending the j-th
    Q-generator to the i-th R-generator; -1 means the entry is absent.
    Unknowns are numbered row-major, low powers first.
    """

    q_rank: int
    r_rank: int
    degrees: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.degrees) != self.q_rank or any(
            len(row) != self.r_rank for row in self.degrees
        ):
            raise ValueError("degree grid shape mismatch")

    @classmethod
    def uniform(cls, q_rank: int, r_rank: int, degree: int) -> "AnsatzSpec":
        if degree < 0:
            raise ValueError("degree bound must be non-negative")
        return cls(q_rank, r_rank, tuple((degree,) * r_rank for _ in range(q_rank)))

    def _offsets(self) -> list[list[int | None]]:
        offsets: list[list[int | None]] = []
        k = 0
        for j in range(self.q_rank):
            row: list[int | None] = []
            for i in range(self.r_rank):
                deg = self.degrees[j][i]
                if deg < 0:
                    row.append(None)
                else:
                    row.append(k)
                    k += deg + 1
            offsets.append(row)
        return offsets

    @property
    def unknowns(self) -> tuple[int, ...]:
        count = sum(d + 1 for row in self.degrees for d in row if d >= 0)
        return tuple(unknown(k) for k in range(count))

    def symbolic_matrix(self) -> Matrix:
        offsets = self._offsets()
        rows = []
        for j in range(self.q_rank):
            row = []
            for i in range(self.r_rank):
                off = offsets[j][i]
                if off is None:
                    row.append(MultiPoly.zero())
                    continue
                entry = MultiPoly.zero()
                for t in range(self.degrees[j][i] + 1):
                    entry = entry + MultiPoly.var(unknown(off + t)) * MultiPoly.var(
                        D, t
                    )
                row.append(entry)
            rows.append(tuple(row))
        return tuple(rows)

    def coefficients_of(self, dm: DeformationMap) -> Assignment:
        """Read a concrete map's entries off as an assignment of the unknowns."""
        offsets = self._offsets()
        out: Assignment = {}
        for j in range(self.q_rank):
            for i in range(self.r_rank):
                entry = dm.matrix[j][i]
                off = offsets[j][i]
                bound = self.degrees[j][i]
                if off is None:
                    if not entry.is_zero:
                        raise ValueError("map has an entry outside the ansatz")
                    continue
                coeffs = entry.coefficient_list(D)
                if len(coeffs) > bound + 1:
                    raise ValueError("map entry degree exceeds the ansatz bound")
                for t in range(bound + 1):
                    value = (
                        coeffs[t].constant_value() if t < len(coeffs) else Fraction(0)
                    )
                    if value is None:
                        raise ValueError("map entries must be d-polynomials")
                    out[unknown(off + t)] = value
        return out

    def concrete_map(self, mp: MatchedPair, assignment: Assignment) -> DeformationMap:
        matrix = tuple(
            tuple(_eval_unknowns(entry, assignment) for entry in row)
            for row in self.symbolic_matrix()
        )
        return DeformationMap(mp, matrix)


@dataclass(frozen=True)
class Provenance:
    """Where an equation came from: Q-pair, output coordinate, (d, l) monomial."""

    left: str
    right: str
    coord: str
    monomial: str


@dataclass(frozen=True)
class Equation:
    poly: MultiPoly
    provenance: Provenance


@dataclass(frozen=True)
class ConstraintSystem:
    unknowns: tuple[int, ...]
    equations: tuple[Equation, ...]

    def unknown_names(self) -> tuple[str, ...]:
        return tuple(var_name(v) for v in self.unknowns)


def _eval_unknowns(poly: MultiPoly, assignment: Assignment) -> MultiPoly:
    for var in sorted(poly.variables()):
        if is_unknown(var):
            if var not in assignment:
                raise ValueError(f"assignment is missing {var_name(var)}")
            poly = poly.eval_at(var, assignment[var])
    return poly


def _monomial_text(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(
        var_name(v) if e == 1 else f"{var_name(v)}^{e}" for v, e in mono
    )


def _normalize(poly: MultiPoly) -> MultiPoly:
    lead = poly.leading()[1]
    return poly if lead == 1 else poly / lead


def compile_deformation_constraints(
    mp: MatchedPair, ansatz: AnsatzSpec
) -> ConstraintSystem:
    """Collect every (d, l)-monomial coefficient of every residual coordinate.

    The resulting equations mention the unknowns only and have total degree
    at most two, because the identity is quadratic in the candidate map.
    The system is empty exactly when every map inside the ansatz passes.
    """
    if ansatz.q_rank != mp.Q.rank or ansatz.r_rank != mp.R.rank:
        raise ValueError("ansatz shape does not match the matched pair")
    symbolic = ansatz.symbolic_matrix()
    equations: list[Equation] = []
    seen: set[MultiPoly] = set()
    for i, j, residual in _deformation_residuals(mp, symbolic):
        for k, coord in enumerate(residual.coords):
            buckets: dict[Monomial, dict] = {}
            for mono, coeff in coord.terms():
                dl = tuple((v, e) for v, e in mono if v in (D, L1))
                rest = tuple((v, e) for v, e in mono if v not in (D, L1))
                buckets.setdefault(dl, {})[rest] = coeff
            for dl in sorted(
                buckets, key=lambda m: (sum(e for _, e in m), m), reverse=True
            ):
                eq_poly = MultiPoly(buckets[dl])
                if eq_poly.is_zero:
                    continue
                if not all(is_unknown(v) for v in eq_poly.variables()):
                    raise AssertionError("collected equation still has d/l variables")
                if eq_poly.degree() > 2:
                    raise AssertionError("deformation equations must be quadratic")
                eq_poly = _normalize(eq_poly)
                if eq_poly in seen:
                    continue
                seen.add(eq_poly)
                equations.append(
                    Equation(
                        eq_poly,
                        Provenance(
                            mp.Q.basis[i],
                            mp.Q.basis[j],
                            mp.R.basis[k],
                            _monomial_text(dl),
                        ),
                    )
                )
    return ConstraintSystem(ansatz.unknowns, tuple(equations))


def verify_assignment(system: ConstraintSystem, assignment: Assignment) -> bool:
    """True iff every equation evaluates to exactly zero."""
    for var in system.unknowns:
        if var not in assignment:
            raise ValueError(f"assignment is missing {var_name(var)}")
    return all(eq.poly.evaluate(assignment) == 0 for eq in system.equations)


@dataclass(frozen=True)
class SubstitutionRecord:
    var: int
    replacement: MultiPoly
    provenance: Provenance


@dataclass
class EliminationResult:
    system: ConstraintSystem
    assignment: Assignment
    records: list[SubstitutionRecord] = field(default_factory=list)
    unsatisfiable: Provenance | None = None

    def extend(self, partial: Assignment) -> Assignment:
        """Complete a solution of the residual system to one of the original."""
        full = dict(partial)
        full.update(self.assignment)
        for record in reversed(self.records):
            if record.var in full:
                continue
            value = _eval_unknowns(record.replacement, full).constant_value()
            if value is None:
                raise ValueError("substitution chain did not resolve to a constant")
            full[record.var] = value
        return full


def linear_eliminate(system: ConstraintSystem) -> EliminationResult:
    """Repeatedly solve equations that are degree one in some unknown.

    An equation qualifies when the chosen unknown appears to degree exactly
    one and its coefficient is a nonzero rational constant; the unknown is
    then replaced everywhere by the rest of the equation, which may still
    mention other unknowns.  Unknowns whose substitution chain resolves to a
    constant are additionally reported as a partial assignment.  An equation
    reducing to a nonzero constant marks the system unsatisfiable.
    """
    equations = list(system.equations)
    known = list(system.unknowns)
    records: list[SubstitutionRecord] = []
    unsat: Provenance | None = None
    while unsat is None:
        target = None
        for eq in equations:
            for var in sorted(eq.poly.variables()):
                split = eq.poly.coefficient_list(var)
                if len(split) != 2:
                    continue
                lead = split[1].constant_value()
                if lead is None or lead == 0:
                    continue
                target = (eq, var, -split[0] / lead)
                break
            if target:
                break
        if not target:
            break
        eq, var, replacement = target
        records.append(SubstitutionRecord(var, replacement, eq.provenance))
        known.remove(var)
        updated: list[Equation] = []
        seen: set[MultiPoly] = set()
        for other in equations:
            poly = other.poly.substitute(var, replacement)
            if poly.is_zero:
                continue
            if not poly.variables():
                unsat = other.provenance
                updated.append(Equation(_normalize(poly), other.provenance))
                continue
            poly = _normalize(poly)
            if poly in seen:
                continue
            seen.add(poly)
            updated.append(Equation(poly, other.provenance))
        equations = updated
    result = EliminationResult(
        ConstraintSystem(tuple(known), tuple(equations)), {}, records, unsat
    )
    # resolve whatever chains bottom out in constants
    resolved: Assignment = {}
    progress = True
    while progress:
        progress = False
        for record in records:
            if record.var in resolved:
                continue
            try:
                value = _eval_unknowns(record.replacement, resolved).constant_value()
            except ValueError:
                continue
            if value is not None:
                resolved[record.var] = value
                progress = True
    result.assignment = resolved
    return result


def grid_values(num_bound: int, den_bound: int) -> tuple[Fraction, ...]:
    """All distinct fractions with numerator in -N..N and denominator 1..Dmax."""
    if num_bound < 0 or den_bound < 1:
        raise ValueError("invalid grid bounds")
    values = {
        Fraction(p, q)
        for p in range(-num_bound, num_bound + 1)
        for q in range(1, den_bound + 1)
    }
    return tuple(sorted(values))


def grid_search(
    system: ConstraintSystem,
    values: tuple[Fraction, ...],
    cap: int = 6,
) -> list[Assignment]:
    """Exhaustively test every grid assignment of the system's unknowns."""
    k = len(system.unknowns)
    if k > cap:
        raise GridCapExceeded(
            f"{k} unknowns exceed the exhaustive-search cap of {cap}"
        )
    solutions: list[Assignment] = []
    for combo in iter_product(values, repeat=k):
        assignment = dict(zip(system.unknowns, combo))
        if verify_assignment(system, assignment):
            solutions.append(assignment)
    return solutions


# -- JSON round trip ---------------------------------------------------------


def system_to_json(system: ConstraintSystem) -> dict:
    return {
        "unknowns": list(system.unknown_names()),
        "equations": [
            {
                "poly": str(eq.poly),
                "provenance": {
                    "left": eq.provenance.left,
                    "right": eq.provenance.right,
                    "coord": eq.provenance.coord,
                    "monomial": eq.provenance.monomial,
                },
            }
            for eq in system.equations
        ],
    }


def system_from_json(data: dict) -> ConstraintSystem:
    from .dsl import parse_poly_text

    unknowns = []
    for name in data["unknowns"]:
        if not name.startswith("u") or not name[1:].isdigit():
            raise ValueError(f"bad unknown name {name!r}")
        unknowns.append(unknown(int(name[1:])))
    equations = []
    for item in data["equations"]:
        prov = item["provenance"]
        equations.append(
            Equation(
                parse_poly_text(item["poly"]),
                Provenance(prov["left"], prov["right"], prov["coord"], prov["monomial"]),
            )
        )
    return ConstraintSystem(tuple(unknowns), tuple(equations))


def assignment_text(assignment: Assignment) -> dict[str, str]:
    return {
        var_name(var): scalar_text(value)
        for var, value in sorted(assignment.items())
    }

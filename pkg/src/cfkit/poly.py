"""Exact sparse multivariate polynomial arithmetic over the rationals.

Every structure constant and ansatz coefficient in this package is a value of
:class:`MultiPoly`: a finite map from monomials to nonzero ``Fraction``
coefficients.  Arithmetic is exact, values are immutable, and all operations
are pure functions, so polynomials can be shared freely between threads.

The variable set is fixed once and for all.  Variable ``0`` is the module
generator, rendered ``d``; variables ``1`` and ``2`` are the two spectral
parameters, rendered ``l`` and ``m``; variable ``3 + k`` is the inert ansatz
unknown ``uk``.  The integer ids double as the variable order
``d < l < m < u0 < u1 < ...`` underlying the canonical graded-lexicographic
term order, which in turn fixes iteration order, textual rendering, and
golden-file stability.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping, Union

D = 0
L1 = 1
L2 = 2
_U_BASE = 3

#: A monomial is a tuple of (variable id, exponent) pairs, sorted by variable,
#: with every exponent positive.  The empty tuple is the constant monomial.
Monomial = tuple[tuple[int, int], ...]

Scalar = Union[int, Fraction]


def unknown(k: int) -> int:
    """Variable id of the ansatz unknown ``u<k>``."""
    if k < 0:
        raise ValueError("unknown index must be non-negative")
    return _U_BASE + k


def is_unknown(var: int) -> bool:
    return var >= _U_BASE


def unknown_index(var: int) -> int:
    if not is_unknown(var):
        raise ValueError(f"variable {var} is not an ansatz unknown")
    return var - _U_BASE


def var_name(var: int) -> str:
    """Normative textual name of a variable (``d``, ``l``, ``m``, ``u0``...)."""
    if var == D:
        return "d"
    if var == L1:
        return "l"
    if var == L2:
        return "m"
    if var >= _U_BASE:
        return f"u{var - _U_BASE}"
    raise ValueError(f"invalid variable id {var}")


def scalar_text(value: Fraction) -> str:
    """Render a rational as ``n`` or ``n/d``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class MultiPoly:
    """Immutable sparse polynomial with exact rational coefficients.

    The stored term map never contains a zero coefficient, so two values
    compare equal exactly when they are the same polynomial; no separate
    normalization step is ever needed.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        cleaned: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff == 0:
                    continue
                if any(exp <= 0 for _, exp in mono) or list(mono) != sorted(mono):
                    raise ValueError(f"malformed monomial {mono!r}")
                cleaned[tuple(mono)] = coeff
        object.__setattr__(self, "_terms", cleaned)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return _ZERO

    @classmethod
    def const(cls, value: Scalar) -> "MultiPoly":
        value = _as_fraction(value)
        if value == 0:
            return _ZERO
        return cls({(): value})

    @classmethod
    def var(cls, var: int, exp: int = 1) -> "MultiPoly":
        if exp < 0:
            raise ValueError("exponent must be non-negative")
        if exp == 0:
            return cls.const(1)
        return cls({((var, exp),): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Iterate terms in canonical order: graded-lexicographic, descending."""
        return iter(_ordered(self._terms))

    def variables(self) -> frozenset[int]:
        return frozenset(v for mono in self._terms for v, _ in mono)

    def degree(self, var: int | None = None) -> int:
        """Degree in ``var`` (total degree when ``var`` is None); -1 for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in mono) for mono in self._terms)
        best = 0
        for mono in self._terms:
            for v, e in mono:
                if v == var and e > best:
                    best = e
        return best

    def constant_value(self) -> Fraction | None:
        """The value of a constant polynomial, or None if any variable occurs."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and () in self._terms:
            return self._terms[()]
        return None

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading (monomial, coefficient) in the canonical order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return _ordered(self._terms)[0]

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc = out.get(mono, _F0) + coeff
            if acc == 0:
                out.pop(mono, None)
            else:
                out[mono] = acc
        return _raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "MultiPoly":
        return _raw({mono: -coeff for mono, coeff in self._terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return _ZERO
        out: dict[Monomial, Fraction] = {}
        for mono_a, ca in self._terms.items():
            for mono_b, cb in other._terms.items():
                mono = _mono_mul(mono_a, mono_b)
                acc = out.get(mono, _F0) + ca * cb
                if acc == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = acc
        return _raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        """Division by a nonzero rational (or constant polynomial) only."""
        if isinstance(other, MultiPoly):
            value = other.constant_value()
            if value is None:
                raise ValueError("can only divide by a constant polynomial")
            other = value
        other = _as_fraction(other)
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self * (Fraction(1) / other)

    def __pow__(self, exp: int) -> "MultiPoly":
        if not isinstance(exp, int) or exp < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = MultiPoly.const(1)
        for _ in range(exp):
            out = out * self
        return out

    # -- substitution ------------------------------------------------------

    def substitute(self, var: int, replacement: "MultiPoly | Scalar") -> "MultiPoly":
        """Ring-homomorphic replacement of every occurrence of ``var``."""
        replacement = _coerce_strict(replacement)
        if var not in self.variables():
            return self
        max_exp = self.degree(var)
        powers = [MultiPoly.const(1)]
        for _ in range(max_exp):
            powers.append(powers[-1] * replacement)
        out = _ZERO
        for mono, coeff in self._terms.items():
            exp = 0
            rest = []
            for v, e in mono:
                if v == var:
                    exp = e
                else:
                    rest.append((v, e))
            out = out + _raw({tuple(rest): coeff}) * powers[exp]
        return out

    def eval_at(self, var: int, value: Scalar) -> "MultiPoly":
        """Substitute the constant ``value`` for ``var``."""
        return self.substitute(var, MultiPoly.const(value))

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        """Numeric value under a total assignment of every occurring variable."""
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for var, exp in mono:
                term *= values[var] ** exp
            total += term
        return total

    def coefficient_list(self, var: int) -> list["MultiPoly"]:
        """Decompose as coefficients of powers ``var^0, var^1, ...``.

        Each returned polynomial is free of ``var`` and the decomposition
        reassembles exactly:  ``sum(c_k * var**k) == self``.  The zero
        polynomial yields the empty list.
        """
        if not self._terms:
            return []
        buckets: dict[int, dict[Monomial, Fraction]] = {}
        for mono, coeff in self._terms.items():
            exp = 0
            rest = []
            for v, e in mono:
                if v == var:
                    exp = e
                else:
                    rest.append((v, e))
            buckets.setdefault(exp, {})[tuple(rest)] = coeff
        top = max(buckets)
        return [_raw(dict(buckets.get(k, {}))) for k in range(top + 1)]

    # -- equality / rendering ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiPoly.const(other)._terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for mono, coeff in self.terms():
            body = "*".join(
                var_name(v) if e == 1 else f"{var_name(v)}^{e}" for v, e in mono
            )
            mag = abs(coeff)
            if not body:
                text = scalar_text(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{scalar_text(mag)}*{body}"
            if not chunks:
                chunks.append(("-" if coeff < 0 else "") + text)
            else:
                chunks.append(("- " if coeff < 0 else "+ ") + text)
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


_F0 = Fraction(0)


def _raw(terms: dict[Monomial, Fraction]) -> MultiPoly:
    """Build from a dict already known to be clean (internal fast path)."""
    poly = MultiPoly.__new__(MultiPoly)
    object.__setattr__(poly, "_terms", terms)
    return poly


_ZERO = _raw({})


def _coerce(value) -> "MultiPoly":
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return MultiPoly.const(value)
    return NotImplemented


def _coerce_strict(value) -> MultiPoly:
    poly = _coerce(value)
    if poly is NotImplemented:
        raise TypeError(f"cannot interpret {type(value).__name__} as a polynomial")
    return poly


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[int, int] = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _ordered(terms: dict[Monomial, Fraction]) -> list[tuple[Monomial, Fraction]]:
    if not terms:
        return []
    support = sorted({v for mono in terms for v, _ in mono})
    index = {v: i for i, v in enumerate(support)}

    def key(item):
        mono, _ = item
        vec = [0] * len(support)
        for v, e in mono:
            vec[index[v]] = e
        return (sum(vec), tuple(vec))

    return sorted(terms.items(), key=key, reverse=True)

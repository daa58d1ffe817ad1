"""Sparse multivariate Laurent polynomials over exact rationals.

Terms are keyed by integer exponent vectors aligned with a fixed, ordered
variable list.  Negative exponents are syntactically allowed on any variable;
charts (see :mod:`volform.variety`) restrict them to coordinates flagged
invertible.  The canonical term order is graded lexicographic in the declared
variable order, so equality of canonical forms is plain tuple comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    EvaluationError,
    NotAUnitError,
    UnknownVariableError,
    VariableMismatchError,
)

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]
PolyLike = Union["LaurentPoly", int, Fraction]

Rational = Fraction  # exact rational scalar used throughout the package


def _grlex_key(exps: Exponents) -> tuple[int, Exponents]:
    return (sum(exps), exps)


@dataclass(frozen=True)
class LaurentPoly:
    """Immutable sparse Laurent polynomial with Fraction coefficients.

    ``terms`` is stored already canonicalized: graded-lex descending, no zero
    coefficients.  Use :meth:`from_dict` or the arithmetic operators rather
    than the raw constructor.
    """

    variables: tuple[str, ...]
    terms: tuple[tuple[Exponents, Fraction], ...]

    # ------------------------------------------------------------------ build

    @staticmethod
    def from_dict(variables: Iterable[str], terms: Mapping[Exponents, Scalar]) -> "LaurentPoly":
        vs = tuple(variables)
        nvars = len(vs)
        items = []
        for exps, coeff in terms.items():
            if len(exps) != nvars:
                raise VariableMismatchError(
                    f"exponent vector {exps} has length {len(exps)}, expected {nvars}"
                )
            c = Fraction(coeff)
            if c != 0:
                items.append((tuple(int(e) for e in exps), c))
        items.sort(key=lambda t: _grlex_key(t[0]), reverse=True)
        return LaurentPoly(vs, tuple(items))

    @staticmethod
    def zero(variables: Iterable[str]) -> "LaurentPoly":
        return LaurentPoly(tuple(variables), ())

    @staticmethod
    def constant(variables: Iterable[str], value: Scalar) -> "LaurentPoly":
        vs = tuple(variables)
        c = Fraction(value)
        if c == 0:
            return LaurentPoly(vs, ())
        return LaurentPoly(vs, (((0,) * len(vs), c),))

    @staticmethod
    def one(variables: Iterable[str]) -> "LaurentPoly":
        return LaurentPoly.constant(variables, 1)

    @staticmethod
    def variable(variables: Iterable[str], name: str) -> "LaurentPoly":
        vs = tuple(variables)
        if name not in vs:
            raise UnknownVariableError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in vs)
        return LaurentPoly(vs, ((exps, Fraction(1)),))

    @staticmethod
    def monomial(variables: Iterable[str], exps: Exponents, coeff: Scalar = 1) -> "LaurentPoly":
        return LaurentPoly.from_dict(variables, {tuple(exps): coeff})

    @staticmethod
    def generators(variables: Iterable[str]) -> tuple["LaurentPoly", ...]:
        vs = tuple(variables)
        return tuple(LaurentPoly.variable(vs, v) for v in vs)

    # ------------------------------------------------------------- inspection

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps, _ in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise NotAUnitError(f"{self} is not a constant")
        return self.terms[0][1]

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int | None:
        """Max term degree (sum of exponents), or None for the zero polynomial."""
        if self.is_zero:
            return None
        return max(sum(exps) for exps, _ in self.terms)

    def leading(self) -> tuple[Exponents, Fraction]:
        if self.is_zero:
            raise NotAUnitError("zero polynomial has no leading term")
        return self.terms[0]

    def as_dict(self) -> dict[Exponents, Fraction]:
        return dict(self.terms)

    def support(self) -> frozenset[str]:
        """Variables appearing with a nonzero exponent."""
        used = set()
        for exps, _ in self.terms:
            for v, e in zip(self.variables, exps):
                if e != 0:
                    used.add(v)
        return frozenset(used)

    def degree_in(self, name: str) -> int:
        idx = self._index(name)
        if self.is_zero:
            return 0
        return max(exps[idx] for exps, _ in self.terms)

    def min_degree_in(self, name: str) -> int:
        idx = self._index(name)
        if self.is_zero:
            return 0
        return min(exps[idx] for exps, _ in self.terms)

    def coefficient_in(self, name: str, power: int) -> "LaurentPoly":
        """Coefficient of name**power, as a polynomial in the remaining variables."""
        idx = self._index(name)
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms:
            if exps[idx] == power:
                reduced = exps[:idx] + (0,) + exps[idx + 1:]
                out[reduced] = out.get(reduced, Fraction(0)) + coeff
        return LaurentPoly.from_dict(self.variables, out)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def _check_same_variables(self, other: "LaurentPoly") -> None:
        if self.variables != other.variables:
            raise VariableMismatchError(
                f"variable lists differ: {self.variables} vs {other.variables}"
            )

    # ------------------------------------------------------------- arithmetic

    def _coerce(self, other: PolyLike) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check_same_variables(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.variables, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: PolyLike) -> "LaurentPoly":
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in q.terms:
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return LaurentPoly.from_dict(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: PolyLike) -> "LaurentPoly":
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other: PolyLike) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: PolyLike) -> "LaurentPoly":
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in q.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly.from_dict(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.one(self.variables)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other: PolyLike) -> "LaurentPoly":
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return self * q.unit_inverse()

    def unit_inverse(self) -> "LaurentPoly":
        """Inverse of a single-term monomial; NotAUnitError otherwise."""
        if len(self.terms) != 1:
            raise NotAUnitError(f"{self} is not a single-term monomial")
        exps, coeff = self.terms[0]
        inv = tuple(-e for e in exps)
        return LaurentPoly(self.variables, ((inv, Fraction(1) / coeff),))

    # -------------------------------------------------------------- calculus

    def partial_derivative(self, name: str) -> "LaurentPoly":
        """Formal partial derivative; d(x**n)/dx = n*x**(n-1) for any integer n."""
        idx = self._index(name)
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms:
            n = exps[idx]
            if n == 0:
                continue
            e = exps[:idx] + (n - 1,) + exps[idx + 1:]
            out[e] = out.get(e, Fraction(0)) + coeff * n
        return LaurentPoly.from_dict(self.variables, out)

    def substitute(self, bindings: Mapping[str, PolyLike]) -> "LaurentPoly":
        """Simultaneous substitution of variables by polynomials.

        A variable raised to a negative power may only be replaced by a
        single-term monomial (a unit), otherwise the result would leave the
        Laurent ring.
        """
        images: dict[int, LaurentPoly] = {}
        for name, value in bindings.items():
            idx = self._index(name)
            images[idx] = self._coerce(value)
        result: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms:
            factor = LaurentPoly.constant(self.variables, coeff)
            residual = list(exps)
            for idx, image in images.items():
                e = exps[idx]
                residual[idx] = 0
                if e == 0:
                    continue
                if e < 0 and len(image.terms) != 1:
                    raise NotAUnitError(
                        f"substitution for {self.variables[idx]!r} must be a unit "
                        f"(single-term monomial) to support exponent {e}"
                    )
                factor = factor * image ** e
            factor = factor * LaurentPoly.monomial(self.variables, tuple(residual))
            for e2, c2 in factor.terms:
                result[e2] = result.get(e2, Fraction(0)) + c2
        return LaurentPoly.from_dict(self.variables, result)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a rational point; zero assigned to a negatively
        occurring variable is an error."""
        values: dict[int, Fraction] = {}
        for name, value in point.items():
            values[self._index(name)] = Fraction(value)
        total = Fraction(0)
        for exps, coeff in self.terms:
            term = coeff
            for idx, e in enumerate(exps):
                if e == 0:
                    continue
                if idx not in values:
                    raise UnknownVariableError(
                        f"no value assigned to variable {self.variables[idx]!r}"
                    )
                v = values[idx]
                if v == 0 and e < 0:
                    raise EvaluationError(
                        f"zero assigned to {self.variables[idx]!r}, which occurs "
                        f"with negative exponent {e}"
                    )
                term *= v ** e
            total += term
        return total

    # ------------------------------------------------------- variable surgery

    def rename_variables(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        """Rename variables in place (order preserved)."""
        new_vars = tuple(mapping.get(v, v) for v in self.variables)
        if len(set(new_vars)) != len(new_vars):
            raise VariableMismatchError(f"renaming produces duplicate names: {new_vars}")
        return LaurentPoly(new_vars, self.terms)

    def extend_variables(self, variables: Iterable[str]) -> "LaurentPoly":
        """Re-express over a larger variable list (superset, any order)."""
        vs = tuple(variables)
        positions = []
        for v in self.variables:
            if v not in vs:
                raise UnknownVariableError(f"target variable list is missing {v!r}")
            positions.append(vs.index(v))
        out: dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms:
            e = [0] * len(vs)
            for pos, exp in zip(positions, exps):
                e[pos] = exp
            out[tuple(e)] = coeff
        return LaurentPoly.from_dict(vs, out)

    def drop_variables(self, names: Iterable[str]) -> "LaurentPoly":
        """Remove variables that occur nowhere in the support."""
        doomed = set(names)
        used = self.support()
        clash = doomed & used
        if clash:
            raise VariableMismatchError(f"cannot drop variables still in use: {sorted(clash)}")
        keep = [i for i, v in enumerate(self.variables) if v not in doomed]
        vs = tuple(self.variables[i] for i in keep)
        out = {tuple(exps[i] for i in keep): coeff for exps, coeff in self.terms}
        return LaurentPoly.from_dict(vs, out)

    # -------------------------------------------------------------- rendering

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        chunks: list[str] = []
        for exps, coeff in self.terms:
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                factors.append(v if e == 1 else f"{v}**{e}")
            if not factors:
                body = str(abs(coeff))
            else:
                mag = abs(coeff)
                if mag == 1:
                    body = "*".join(factors)
                else:
                    body = "*".join([str(mag)] + factors)
            sign = "-" if coeff < 0 else "+"
            chunks.append((sign, body))  # type: ignore[arg-type]
        first_sign, first_body = chunks[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)})"

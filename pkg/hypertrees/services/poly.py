"""
Exact univariate polynomial arithmetic over the integers.

IntPoly is a sparse degree -> coefficient map in the variable l (lambda).
FactoredPoly keeps a characteristic polynomial as a product of
(base, exponent) pairs; exponents are Python ints and routinely exceed
anything an expanded polynomial could hold.
"""
import logging
import math
from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from django.conf import settings
from sympy import Poly, Symbol, ZZ
from sympy.polys.polyerrors import ExactQuotientFailed

from .exceptions import DegreeGuardError, PolynomialError

logger = logging.getLogger(__name__)

LAMBDA = Symbol("l")
ZERO_DEGREE = -1

Scalar = int
PolyLike = Union["IntPoly", int]


class IntPoly:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        for degree, coefficient in (coeffs or {}).items():
            degree, coefficient = int(degree), int(coefficient)
            if degree < 0:
                raise PolynomialError(f"negative degree {degree}")
            if coefficient:
                clean[degree] = coefficient
        self._coeffs = clean

    # Constructors

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls()

    @classmethod
    def constant(cls, value: int) -> "IntPoly":
        return cls({0: value})

    @classmethod
    def lam(cls, power: int = 1, coefficient: int = 1) -> "IntPoly":
        """The monomial coefficient * l^power."""
        return cls({power: coefficient})

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[int]) -> "IntPoly":
        """Build from a dense list ordered from the constant term upwards."""
        return cls({i: c for i, c in enumerate(coefficients)})

    # Inspection

    @property
    def coeffs(self) -> Dict[int, int]:
        return dict(self._coeffs)

    def terms(self) -> List[Tuple[int, int]]:
        """(degree, coefficient) pairs, highest degree first."""
        return sorted(self._coeffs.items(), reverse=True)

    @property
    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else ZERO_DEGREE

    @property
    def valuation(self) -> int:
        """Multiplicity of l as a factor (lowest stored degree)."""
        return min(self._coeffs) if self._coeffs else ZERO_DEGREE

    @property
    def leading_coefficient(self) -> int:
        return self._coeffs[self.degree] if self._coeffs else 0

    def coefficient(self, degree: int) -> int:
        return self._coeffs.get(degree, 0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def dense(self) -> List[int]:
        """Coefficients from the leading term down to the constant term."""
        if not self._coeffs:
            return []
        return [self._coeffs.get(d, 0) for d in range(self.degree, -1, -1)]

    def content(self) -> int:
        result = 0
        for c in self._coeffs.values():
            result = math.gcd(result, c)
        return result

    def primitive(self) -> Tuple[int, "IntPoly"]:
        """Split into (signed content, primitive part with positive leading coefficient)."""
        if not self._coeffs:
            raise PolynomialError("zero polynomial has no primitive part")
        content = self.content()
        if self.leading_coefficient < 0:
            content = -content
        return content, IntPoly({d: c // content for d, c in self._coeffs.items()})

    # Arithmetic

    @staticmethod
    def _coerce(other: PolyLike) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.constant(other)
        return NotImplemented

    def __add__(self, other: PolyLike) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result = dict(self._coeffs)
        for d, c in other._coeffs.items():
            result[d] = result.get(d, 0) + c
        return IntPoly(result)

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly({d: -c for d, c in self._coeffs.items()})

    def __sub__(self, other: PolyLike) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: PolyLike) -> "IntPoly":
        return (-self) + other

    def __mul__(self, other: PolyLike) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result: Dict[int, int] = defaultdict(int)
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                result[d1 + d2] += c1 * c2
        return IntPoly(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "IntPoly":
        if exponent < 0:
            raise PolynomialError("negative power of a polynomial")
        if self.is_monomial:
            (d, c), = self._coeffs.items()
            return IntPoly({d * exponent: c ** exponent})
        result, base = IntPoly.constant(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Evaluate at an int, Fraction or anything closed under + and *."""
        value = 0
        for d, c in self._coeffs.items():
            value += c * x ** d
        return value

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient in Z[l]; raises PolynomialError when the division leaves a remainder."""
        if other.is_zero:
            raise PolynomialError("division by the zero polynomial")
        if self.is_zero:
            return IntPoly()
        try:
            quotient = self.to_sympy().exquo(other.to_sympy(), auto=False)
        except ExactQuotientFailed as exc:
            raise PolynomialError(f"{other} does not divide {self}") from exc
        return IntPoly.from_sympy(quotient)

    def divides(self, other: "IntPoly") -> bool:
        try:
            other.exact_div(self)
        except PolynomialError:
            return False
        return True

    # Interop and presentation

    def to_sympy(self) -> Poly:
        if not self._coeffs:
            return Poly(0, LAMBDA, domain=ZZ)
        return Poly.from_dict({(d,): c for d, c in self._coeffs.items()}, LAMBDA, domain=ZZ)

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPoly":
        return cls({monom[0]: int(c) for monom, c in poly.terms()})

    def to_json(self) -> dict:
        return {"terms": [[d, str(c)] for d, c in self.terms()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "IntPoly":
        try:
            return cls({int(d): int(c) for d, c in data["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialError(f"malformed polynomial JSON: {exc}") from exc

    def sort_key(self) -> tuple:
        if self._coeffs == {1: 1}:
            return (0,)
        return (1, -self.degree, tuple(-c for c in self.dense()))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly.constant(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        pieces = []
        for i, (d, c) in enumerate(self.terms()):
            magnitude = abs(c)
            if d == 0:
                body = str(magnitude)
            else:
                monomial = "l" if d == 1 else f"l^{d}"
                body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"IntPoly({self})"


LAM = IntPoly.lam()


def gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """
    Primitive gcd with positive leading coefficient.

    Uses the last nonzero member of the subresultant PRS, which keeps
    intermediate coefficients small.
    """
    if a.is_zero and b.is_zero:
        raise PolynomialError("gcd of two zero polynomials")
    if a.is_zero or b.is_zero:
        return (b if a.is_zero else a).primitive()[1]
    if a.degree < b.degree:
        a, b = b, a
    chain = a.to_sympy().subresultants(b.to_sympy())
    last = IntPoly.from_sympy(chain[-1])
    if last.is_constant:
        return IntPoly.constant(1)
    return last.primitive()[1]


def _power_of_unit_safe(base: int, exponent: int) -> int:
    if base in (1, -1):
        return -1 if base == -1 and exponent % 2 else 1
    if exponent > 4096:
        raise PolynomialError(f"integer content {base}^{exponent} is too large to represent")
    return base ** exponent


class FactoredPoly:
    """
    Product of (base, exponent) pairs in canonical form.

    Bases are primitive with positive leading coefficient, pairwise
    distinct and non-constant; monomial bases are folded into the single
    base l. Any integer factor is kept in ``content``. Order: l first,
    then descending by degree and by the coefficient sequence read from
    the leading term.
    """

    __slots__ = ("_factors", "_content")

    def __init__(self, factors: Iterable[Tuple[IntPoly, int]] = (), content: int = 1):
        if content == 0:
            raise PolynomialError("factored polynomial with zero content")
        merged: Dict[IntPoly, int] = defaultdict(int)
        for base, exponent in factors:
            exponent = int(exponent)
            if exponent < 0:
                raise PolynomialError(f"negative exponent {exponent}")
            if exponent == 0:
                continue
            if base.is_zero:
                raise PolynomialError("zero base in a factored polynomial")
            if base.is_constant:
                content *= _power_of_unit_safe(base.leading_coefficient, exponent)
                continue
            unit, primitive = base.primitive()
            if unit != 1:
                content *= _power_of_unit_safe(unit, exponent)
            if primitive.is_monomial:
                merged[LAM] += exponent * primitive.degree
            else:
                merged[primitive] += exponent
        self._factors = tuple(sorted(merged.items(), key=lambda item: item[0].sort_key()))
        self._content = content

    @classmethod
    def one(cls) -> "FactoredPoly":
        return cls()

    @classmethod
    def from_poly(cls, poly: IntPoly, exponent: int = 1) -> "FactoredPoly":
        return cls([(poly, exponent)])

    @property
    def factors(self) -> Tuple[Tuple[IntPoly, int], ...]:
        return self._factors

    @property
    def content(self) -> int:
        return self._content

    @property
    def bases(self) -> List[IntPoly]:
        return [base for base, _ in self._factors]

    @property
    def degree(self) -> int:
        return sum(base.degree * exponent for base, exponent in self._factors)

    @property
    def lambda_exponent(self) -> int:
        """Exponent of the bare base l."""
        return self.exponent_of(LAM)

    @property
    def valuation(self) -> int:
        """Multiplicity of 0 as a root of the product."""
        return sum(base.valuation * exponent for base, exponent in self._factors)

    def exponent_of(self, base: IntPoly) -> int:
        for candidate, exponent in self._factors:
            if candidate == base:
                return exponent
        return 0

    def __mul__(self, other: "FactoredPoly") -> "FactoredPoly":
        if not isinstance(other, FactoredPoly):
            return NotImplemented
        return mul_factored(self, other)

    def __pow__(self, exponent: int) -> "FactoredPoly":
        if exponent < 0:
            raise PolynomialError("negative power of a factored polynomial")
        return FactoredPoly(
            [(base, e * exponent) for base, e in self._factors],
            _power_of_unit_safe(self._content, exponent),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactoredPoly):
            return NotImplemented
        return self._factors == other._factors and self._content == other._content

    def __hash__(self) -> int:
        return hash((self._factors, self._content))

    def to_json(self) -> dict:
        data = {"factors": [{"base": base.to_json(), "exp": str(e)} for base, e in self._factors]}
        if self._content != 1:
            data["content"] = str(self._content)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "FactoredPoly":
        try:
            factors = [(IntPoly.from_json(f["base"]), int(f["exp"])) for f in data["factors"]]
            content = int(data.get("content", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialError(f"malformed factored polynomial JSON: {exc}") from exc
        return cls(factors, content)

    def __str__(self) -> str:
        pieces = [] if self._content == 1 else [str(self._content)]
        for base, exponent in self._factors:
            if base == LAM:
                pieces.append("l" if exponent == 1 else f"l^{exponent}")
            else:
                pieces.append(f"({base})" if exponent == 1 else f"({base})^{exponent}")
        return " * ".join(pieces) or "1"

    def __repr__(self) -> str:
        return f"FactoredPoly({self})"


def mul_factored(a: FactoredPoly, b: FactoredPoly) -> FactoredPoly:
    """Canonical product; equal bases have their exponents added."""
    return FactoredPoly(a.factors + b.factors, a.content * b.content)


def expand(f: FactoredPoly, degree_guard: Optional[int] = None) -> IntPoly:
    """Multiply out ``f``; refuses when the total degree exceeds the guard."""
    guard = settings.HYPERTREE_EXPAND_GUARD if degree_guard is None else degree_guard
    if f.degree > guard:
        raise DegreeGuardError("expanded degree", guard, f.degree)
    result = IntPoly.constant(f.content)
    for base, exponent in f.factors:
        result = result * base ** exponent
    return result


def gcd_free_basis(polys: Iterable[IntPoly]) -> List[IntPoly]:
    """
    Refine a set of polynomials into pairwise coprime primitive factors.

    Every input (up to an integer unit) is a product of basis elements.
    Each refinement step replaces q and b by gcd(q, b), b/g and q/g, which
    strictly lowers the total degree, so the loop terminates.
    """
    pending = [p.primitive()[1] for p in polys if not p.is_constant]
    basis: List[IntPoly] = []
    while pending:
        q = pending.pop()
        for i, b in enumerate(basis):
            if q == b:
                break
            g = gcd(q, b)
            if not g.is_constant:
                del basis[i]
                for piece in (g, b.exact_div(g), q.exact_div(g)):
                    if not piece.is_constant:
                        pending.append(piece.primitive()[1])
                break
        else:
            basis.append(q)
    return sorted(basis, key=IntPoly.sort_key)


def _exponent_vector(f: FactoredPoly, basis: List[IntPoly]) -> List[int]:
    vector = [0] * len(basis)
    for base, exponent in f.factors:
        remaining = base
        for i, p in enumerate(basis):
            multiplicity = 0
            while not remaining.is_constant and p.divides(remaining):
                remaining = remaining.exact_div(p)
                multiplicity += 1
            vector[i] += multiplicity * exponent
        if not remaining.is_constant:
            raise PolynomialError(f"{base} is not a product of basis elements")
    return vector


def divides(a: FactoredPoly, b: FactoredPoly) -> bool:
    """True iff value(a) divides value(b) in Z[l]."""
    if b.content % a.content:
        return False
    basis = gcd_free_basis(a.bases + b.bases)
    left = _exponent_vector(a, basis)
    right = _exponent_vector(b, basis)
    return all(x <= y for x, y in zip(left, right))


def factored_gcd(a: FactoredPoly, b: FactoredPoly) -> FactoredPoly:
    """Monic-up-to-content gcd of two factored values, computed on a shared basis."""
    basis = gcd_free_basis(a.bases + b.bases)
    left = _exponent_vector(a, basis)
    right = _exponent_vector(b, basis)
    return FactoredPoly(
        [(p, min(x, y)) for p, x, y in zip(basis, left, right)],
        math.gcd(a.content, b.content),
    )

"""Exact polynomial and truncated power-series arithmetic.

Everything here works over Python integers, so coefficients never overflow.
Polynomials live in the fixed variable set ``(s, t, q, w)``; a truncated series
is indexed by its q-degree and carries polynomials in the remaining variables.
"""

from __future__ import annotations

import itertools
import json
from typing import Callable, Iterable, Iterator, Mapping

VARIABLES = ("s", "t", "q", "w")
_Q = VARIABLES.index("q")
_ZERO_EXP = (0, 0, 0, 0)

Exponent = tuple[int, int, int, int]


class SeriesError(ValueError):
    """Raised for ill-posed series operations (bad denominators, inexact division)."""


class FixedPointError(RuntimeError):
    """Raised when a fixed-point iteration fails to stabilise."""


def _exponent(s: int = 0, t: int = 0, q: int = 0, w: int = 0) -> Exponent:
    exp = (s, t, q, w)
    if min(exp) < 0:
        raise SeriesError(f"negative exponent {exp}")
    return exp


class Polynomial:
    """Sparse polynomial in s, t, q, w with integer coefficients.

    Instances are immutable; ``terms`` maps exponent 4-tuples to non-zero ints.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | None = None):
        clean: dict[Exponent, int] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != 4 or min(exp) < 0:
                    raise SeriesError(f"bad exponent vector {exp!r}")
                if coeff:
                    clean[exp] = clean.get(exp, 0) + int(coeff)
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, int]) -> Polynomial:
        # trusted constructor: terms already normalised
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int) -> Polynomial:
        return cls._raw({_ZERO_EXP: c} if c else {})

    @classmethod
    def monomial(cls, coeff: int = 1, *, s: int = 0, t: int = 0, q: int = 0, w: int = 0) -> Polynomial:
        return cls._raw({_exponent(s, t, q, w): coeff} if coeff else {})

    @classmethod
    def var(cls, name: str) -> Polynomial:
        return cls.monomial(**{name: 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> int:
        return self._terms.get(_ZERO_EXP, 0)

    def coefficient(self, *, s: int = 0, t: int = 0, q: int = 0, w: int = 0) -> int:
        return self._terms.get((s, t, q, w), 0)

    def degree(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        i = VARIABLES.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def valuation(self, var: str) -> int:
        i = VARIABLES.index(var)
        return min((e[i] for e in self._terms), default=-1)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial._raw({})
            return Polynomial._raw({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, int] = {}
        for (a0, a1, a2, a3), ca in self._terms.items():
            for (b0, b1, b2, b3), cb in other._terms.items():
                e = (a0 + b0, a1 + b1, a2 + b2, a3 + b3)
                out[e] = out.get(e, 0) + ca * cb
        return Polynomial._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise SeriesError("negative powers are not polynomials")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, *, s: int = 0, t: int = 0, q: int = 0, w: int = 0) -> Polynomial:
        """Multiply by a monomial; negative shifts divide and must be exact."""
        d = (s, t, q, w)
        out = {}
        for e, c in self._terms.items():
            ne = (e[0] + d[0], e[1] + d[1], e[2] + d[2], e[3] + d[3])
            if min(ne) < 0:
                raise SeriesError(f"monomial division is not exact at term {e}")
            out[ne] = c
        return Polynomial._raw(out)

    def specialize(self, **values: int) -> Polynomial:
        """Substitute integer values for some variables (e.g. ``t=1, w=1``)."""
        idx = {VARIABLES.index(k): v for k, v in values.items()}
        out: dict[Exponent, int] = {}
        for e, c in self._terms.items():
            ne = list(e)
            for i, v in idx.items():
                c *= v ** e[i]
                ne[i] = 0
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c
        return Polynomial._raw({e: c for e, c in out.items() if c})

    def q_slices(self) -> dict[int, Polynomial]:
        """Split by q-degree: ``{n: coefficient of q^n as a q-free polynomial}``."""
        parts: dict[int, dict[Exponent, int]] = {}
        for e, c in self._terms.items():
            parts.setdefault(e[_Q], {})[(e[0], e[1], 0, e[3])] = c
        return {n: Polynomial._raw(d) for n, d in parts.items()}

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self._terms.items())

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), key=lambda kv: (kv[0][_Q], kv[0])):
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(VARIABLES, e) if p
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self})"

    # -- serialisation -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "variables": list(VARIABLES),
            "terms": [[list(e), str(c)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> Polynomial:
        if list(obj.get("variables", [])) != list(VARIABLES):
            raise SeriesError(f"unsupported variable list {obj.get('variables')}")
        return cls({tuple(e): int(c) for e, c in obj["terms"]})

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> Polynomial:
        return cls.from_json_obj(json.loads(text))


ZERO = Polynomial.constant(0)
ONE = Polynomial.constant(1)


def naive_convolution(a: Polynomial, b: Polynomial) -> Polynomial:
    """Reference product via explicit dense coefficient arrays.

    Deliberately independent of ``Polynomial.__mul__``; used to cross-check it.
    """
    if a.is_zero() or b.is_zero():
        return ZERO
    dims = [max(a.degree(v), 0) + max(b.degree(v), 0) + 1 for v in VARIABLES]
    dense = {}
    for idx in itertools.product(*(range(d) for d in dims)):
        total = 0
        for ea, ca in a.items():
            eb = tuple(i - x for i, x in zip(idx, ea))
            if min(eb) >= 0:
                total += ca * b.coefficient(**dict(zip(VARIABLES, eb)))
        if total:
            dense[idx] = total
    return Polynomial(dense)


class RationalGF:
    """Quotient num/den of polynomials with den's constant term equal to 1.

    No gcd reduction is attempted; equality is by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | int, den: Polynomial | int = 1):
        num = Polynomial._coerce(num)
        den = Polynomial._coerce(den)
        c = den.constant_term()
        if c == -1:
            num, den = -num, -den
        elif c != 1:
            raise SeriesError(f"denominator constant term must be +-1, got {c}")
        self.num = num
        self.den = den

    def __add__(self, other):
        other = _as_rational(other)
        return RationalGF(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalGF(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rational(other))

    def __rsub__(self, other):
        return _as_rational(other) - self

    def __mul__(self, other):
        other = _as_rational(other)
        return RationalGF(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial)):
            other = RationalGF(other)
        if not isinstance(other, RationalGF):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not structural

    def expand(self, order: int) -> TruncatedSeries:
        return expand_rational(self, order)

    def coefficients(self, order: int) -> list[int]:
        """Integer q-coefficients 0..order of a univariate (q-only) GF."""
        return self.expand(order).integer_coefficients()

    def __repr__(self):
        return f"RationalGF(({self.num}) / ({self.den}))"


def _as_rational(x) -> RationalGF:
    if isinstance(x, RationalGF):
        return x
    return RationalGF(x)


class TruncatedSeries:
    """Power series in q truncated after q^order.

    ``coeffs[n]`` is the coefficient of q^n, a polynomial in s, t, w. Every
    public operation returns a series of order ``min`` of its operands' orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Polynomial | int], order: int):
        if order < 0:
            raise SeriesError("order must be non-negative")
        cs = [Polynomial._coerce(c) for c in itertools.islice(coeffs, order + 1)]
        for c in cs:
            if c.degree("q") > 0:
                raise SeriesError("series coefficients must be free of q")
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list[Polynomial], order: int) -> TruncatedSeries:
        s = cls.__new__(cls)
        s.order = order
        s.coeffs = tuple(coeffs)
        return s

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls._raw([ZERO] * (order + 1), order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls._raw([ONE] + [ZERO] * order, order)

    @classmethod
    def from_polynomial(cls, p: Polynomial | int, order: int) -> TruncatedSeries:
        p = Polynomial._coerce(p)
        cs = [ZERO] * (order + 1)
        for n, part in p.q_slices().items():
            if n <= order:
                cs[n] = part
        return cls._raw(cs, order)

    @classmethod
    def monomial(cls, order: int, coeff: int = 1, *, s: int = 0, t: int = 0, q: int = 0, w: int = 0) -> TruncatedSeries:
        return cls.from_polynomial(Polynomial.monomial(coeff, s=s, t=t, q=q, w=w), order)

    # -- access ------------------------------------------------------------

    def __getitem__(self, n: int) -> Polynomial:
        if n < 0 or n > self.order:
            raise IndexError(f"q^{n} is outside the tracked order {self.order}")
        return self.coeffs[n]

    def coefficient(self, n: int, *, s: int = 0, t: int = 0, w: int = 0) -> int:
        return self[n].coefficient(s=s, t=t, w=w)

    def valuation(self) -> int:
        """Lowest q-degree with a non-zero coefficient (order+1 if none)."""
        for n, c in enumerate(self.coeffs):
            if not c.is_zero():
                return n
        return self.order + 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def integer_coefficients(self) -> list[int]:
        """Coefficients as ints; only valid when every coefficient is constant."""
        out = []
        for n, c in enumerate(self.coeffs):
            if any(e != _ZERO_EXP for e, _ in c.items()):
                raise SeriesError(f"coefficient of q^{n} is not a constant: {c}")
            out.append(c.constant_term())
        return out

    def table(self) -> dict[tuple[int, int], int]:
        """``{(t-degree, q-degree): coefficient}`` for series in t and q only."""
        out = {}
        for n, c in enumerate(self.coeffs):
            for e, v in c.items():
                if e[0] or e[3]:
                    raise SeriesError("table() needs a series in t and q only")
                out[(e[1], n)] = v
        return out

    def specialize(self, **values: int) -> TruncatedSeries:
        if "q" in values:
            raise SeriesError("cannot specialise the truncation variable q")
        return TruncatedSeries._raw([c.specialize(**values) for c in self.coeffs], self.order)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise SeriesError("cannot raise the order of a truncated series")
        return TruncatedSeries._raw(list(self.coeffs[: order + 1]), order)

    def check_degree_bound(self, *variables: str) -> None:
        """Assert that t/w degrees never exceed the q-degree of their term."""
        for var in variables or ("t", "w"):
            for n, c in enumerate(self.coeffs):
                if c.degree(var) > n:
                    raise AssertionError(f"{var}-degree {c.degree(var)} exceeds n={n}")

    # -- arithmetic --------------------------------------------------------

    def _coerce_series(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Polynomial)):
            return TruncatedSeries.from_polynomial(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_series(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        return TruncatedSeries._raw(
            [self.coeffs[i] + other.coeffs[i] for i in range(order + 1)], order
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce_series(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries._raw([c * other for c in self.coeffs], self.order)
        other = self._coerce_series(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        na = [i for i in range(order + 1) if not a[i].is_zero()]
        nb = [j for j in range(order + 1) if not b[j].is_zero()]
        out = [ZERO] * (order + 1)
        for i in na:
            for j in nb:
                if i + j > order:
                    break
                out[i + j] = out[i + j] + a[i] * b[j]
        return TruncatedSeries._raw(out, order)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> TruncatedSeries:
        if n < 0:
            return series_inv(self) ** (-n)
        result = TruncatedSeries.one(self.order)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, other):
        other = self._coerce_series(other)
        if other is NotImplemented:
            return other
        return series_div(self, other)

    def __rtruediv__(self, other):
        return series_div(self._coerce_series(other), self)

    def shift(self, *, t: int = 0, q: int = 0, w: int = 0) -> TruncatedSeries:
        """Multiply by t^t q^q w^w; negative exponents divide and must be exact.

        Dividing by q^m lowers the reliable order by m.
        """
        if q >= 0:
            out = [ZERO] * q + [c.shift(t=t, w=w) for c in self.coeffs]
            return TruncatedSeries._raw(out[: self.order + 1], self.order)
        m = -q
        for n in range(min(m, self.order + 1)):
            if not self.coeffs[n].is_zero():
                raise SeriesError(f"division by q^{m} is not exact (q^{n} term present)")
        out = [c.shift(t=t, w=w) for c in self.coeffs[m:]]
        return TruncatedSeries._raw(out, self.order - m)

    def to_polynomial(self) -> Polynomial:
        out = {}
        for n, c in enumerate(self.coeffs):
            for e, v in c.items():
                out[(e[0], e[1], n, e[3])] = v
        return Polynomial._raw(out)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.coeffs[: order + 1] == other.coeffs[: order + 1]

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self.to_polynomial()} + O(q^{self.order + 1}))"

    def to_json_obj(self) -> dict:
        obj = self.to_polynomial().to_json_obj()
        obj["order"] = self.order
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> TruncatedSeries:
        return cls.from_polynomial(Polynomial.from_json_obj(obj), int(obj["order"]))


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the q^0 coefficient must be exactly 1."""
    if a.coeffs[0] != ONE:
        raise SeriesError(f"series inverse needs constant term 1, got {a.coeffs[0]}")
    order = a.order
    nz = [i for i in range(1, order + 1) if not a.coeffs[i].is_zero()]
    r = [ONE] + [ZERO] * order
    for n in range(1, order + 1):
        acc = ZERO
        for i in nz:
            if i > n:
                break
            if not r[n - i].is_zero():
                acc = acc + a.coeffs[i] * r[n - i]
        r[n] = -acc
    return TruncatedSeries._raw(r, order)


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = min(a.order, b.order)
    return a.truncate(order) * series_inv(b.truncate(order))


def geometric(x: TruncatedSeries) -> TruncatedSeries:
    """1/(1 - x) for x of positive q-valuation."""
    if x.valuation() == 0:
        raise SeriesError("geometric series needs an argument of positive q-valuation")
    return series_inv(1 - x)


def expand_rational(r: RationalGF, order: int) -> TruncatedSeries:
    """Series expansion of num/den to q^order by long division."""
    c = r.den.constant_term()
    if c not in (1, -1):
        raise SeriesError(f"denominator constant term must be +-1, got {c}")
    num = TruncatedSeries.from_polynomial(r.num * c, order)
    den = TruncatedSeries.from_polynomial(r.den * c, order)
    if den.coeffs[0] != ONE:
        raise SeriesError("denominator q^0 coefficient must be the constant 1")
    return num * series_inv(den)


def denominator_recurrence(den: Polynomial) -> list[int]:
    """Coefficients d_0..d_m of a univariate denominator, d_0 = 1.

    The expansion a(n) of num/den then satisfies sum_i d_i a(n-i) = 0 for n > deg(num).
    """
    slices = den.q_slices()
    if any(any(e != _ZERO_EXP for e, _ in p.items()) for p in slices.values()):
        raise SeriesError("denominator is not univariate in q")
    m = max(slices)
    d = [slices.get(i, ZERO).constant_term() for i in range(m + 1)]
    if d[0] == -1:
        d = [-x for x in d]
    if d[0] != 1:
        raise SeriesError("denominator constant term must be +-1")
    return d


def solve_fixed_point(
    f: Callable[[TruncatedSeries], TruncatedSeries],
    order: int,
    max_iter: int | None = None,
) -> TruncatedSeries:
    """Solve S = f(S) to q^order by iterating from S = 0.

    ``f`` must raise the order of agreement of successive iterates at every
    step (true whenever S only appears multiplied by q-positive factors), so at
    most order + 2 iterations are needed.
    """
    limit = order + 2 if max_iter is None else max_iter
    current = TruncatedSeries.zero(order)
    for _ in range(limit):
        nxt = f(current).truncate(order)
        if nxt == current:
            return current
        current = nxt
    raise FixedPointError(f"no fixed point to order {order} after {limit} iterations")

"""Closed-form length generating functions of partially directed snakes.

All functions return :class:`RationalGF` values in the single variable q. The
exact counts come from the linear recurrences encoded by the denominators; the
root-sum formulas are only evaluated numerically, as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .series import Polynomial, RationalGF, SeriesError

q = Polynomial.var("q")


class ClosedFormMismatch(ArithmeticError):
    """A floating-point closed form disagrees with the exact count."""


@dataclass(frozen=True)
class NdParams:
    n_dim: int

    def __post_init__(self):
        if not isinstance(self.n_dim, int) or self.n_dim < 2:
            raise ValueError(f"lattice dimension must be an integer >= 2, got {self.n_dim!r}")


def _dim(p: int | NdParams) -> int:
    return p.n_dim if isinstance(p, NdParams) else NdParams(p).n_dim


def gf_sne() -> RationalGF:
    """North-East snakes: 1/(1 - q - q^2), the shifted Fibonacci numbers."""
    return RationalGF(1, 1 - q - q**2)


def gf_pds_x1plus(p: int | NdParams) -> RationalGF:
    """Snakes using only x1+ and single steps along the other N-1 axes."""
    n = _dim(p)
    return RationalGF(1, 1 - q - (n - 1) * q**2)


def count_pds_x1plus(n: int, p: int | NdParams) -> int:
    dim = _dim(p)
    if n < 0:
        raise ValueError("length must be non-negative")
    a, b = 1, 1
    for _ in range(n):
        a, b = b, b + (dim - 1) * a
    return a


def gf_s1_nd(p: int | NdParams) -> RationalGF:
    """PDS with no two consecutive steps along the monotone axes."""
    n = _dim(p)
    return 2 * gf_pds_x1plus(n) - RationalGF(1, 1 - q) - RationalGF((n - 1) * q**2)


def gf_s2_nd(p: int | NdParams, pds: RationalGF) -> RationalGF:
    """PDS with at least one pair of consecutive monotone-axis steps, given PDS."""
    n = _dim(p)
    head = pds - 1 + RationalGF(q**2, 1 - q)
    tail = 2 * gf_pds_x1plus(n) - 1
    return head * RationalGF((n - 1) ** 2 * q**2) * tail


def gf_pds_nd(p: int | NdParams) -> RationalGF:
    n = _dim(p)
    num = (
        (n - 1) ** 2 * q**5
        + (n - 1) * (n - 2) * q**4
        - (n - 1) * (n - 3) * q**3
        + (n - 1) * q**2
        - n * q
        + 1
    )
    den = (1 - q) * (1 - n * q - (n - 1) ** 2 * q**3)
    return RationalGF(num, den)


def solve_pds_functional_equation(p: int | NdParams) -> RationalGF:
    """Solve PDS = S1 + (PDS - 1 + q^2/(1-q)) * A for PDS, independently of the closed form.

    Here A = (N-1)^2 q^2 (2/(1-q-(N-1)q^2) - 1), so PDS = (S1 + A*(q^2/(1-q) - 1)) / (1 - A).
    """
    n = _dim(p)
    a = RationalGF((n - 1) ** 2 * q**2) * (2 * gf_pds_x1plus(n) - 1)
    top = gf_s1_nd(n) + a * (RationalGF(q**2, 1 - q) - 1)
    one_minus_a = 1 - a
    # top / (1 - A): 1 - A has numerator with constant term 1 because A is q-positive
    return RationalGF(top.num * one_minus_a.den, top.den * one_minus_a.num)


def gf_s1_2d() -> RationalGF:
    return 2 * gf_sne() - RationalGF(1, 1 - q) - RationalGF(q**2)


def gf_s2_2d(pds: RationalGF) -> RationalGF:
    head = pds - 1 + RationalGF(q**2, 1 - q)
    return head * RationalGF(q**2) * (2 * gf_sne() - 1)


def gf_pds_2d() -> RationalGF:
    return RationalGF(q**5 + q**3 + q**2 - 2 * q + 1, (1 - q) * (1 - 2 * q - q**3))


def gf_s1_3d() -> RationalGF:
    return 2 * gf_pds_x1plus(3) - RationalGF(1, 1 - q) - RationalGF(2 * q**2)


def gf_s2_3d(pds: RationalGF) -> RationalGF:
    head = pds - 1 + RationalGF(q**2, 1 - q)
    return head * RationalGF(4 * q**2) * (2 * gf_pds_x1plus(3) - 1)


def gf_pds_3d() -> RationalGF:
    return RationalGF(
        4 * q**5 + 2 * q**4 + 2 * q**2 - 3 * q + 1, (1 - q) * (1 - 3 * q - 4 * q**3)
    )


def lookup(name: str) -> RationalGF:
    """Resolve CLI names: sne, pds2d, pds3d, pdsnd:N, pdsx1:N."""
    key, _, arg = name.partition(":")
    if key == "sne" and not arg:
        return gf_sne()
    if key == "pds2d" and not arg:
        return gf_pds_2d()
    if key == "pds3d" and not arg:
        return gf_pds_3d()
    if key in ("pdsnd", "pdsx1") and arg:
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"bad dimension in {name!r}") from None
        return gf_pds_nd(n) if key == "pdsnd" else gf_pds_x1plus(n)
    raise ValueError(f"unknown generating function {name!r}")


def counts(r: RationalGF, n_max: int) -> list[int]:
    return r.coefficients(n_max)


# -- numeric root-sum formulas ------------------------------------------------

# 50 significant digits: double precision drifts past 0.5 near n = 27 in 3D
_CTX = mpmath.mp.clone()
_CTX.dps = 50


def _root_sum_2d(n: int) -> float:
    roots = _CTX.polyroots([-1, 0, -2, 1])  # 1 - 2a - a^3
    total = sum((13 / a + 11 - 5 * a) * a ** (-n) for a in roots)
    return float(_CTX.re(total) / 59 - 1)


def _root_sum_3d(n: int) -> float:
    roots = _CTX.polyroots([-4, 0, -3, 1])  # 1 - 3a - 4a^3
    total = sum((1 / a + 1) * a ** (-n) for a in roots)
    return float(_CTX.re(total) / 12 - 1)


def _radical_x1plus(n: int, dim: int) -> float:
    r = _CTX.sqrt(4 * dim - 3)
    lo = (2 - 2 * dim) * ((2 - 2 * dim) / (1 - r)) ** n / ((1 - r) * r)
    hi = (2 * dim - 2) * ((2 - 2 * dim) / (1 + r)) ** n / ((1 + r) * r)
    return float(lo + hi)


def eval_closed_form_numeric(formula_id: str, n: int) -> int:
    """Evaluate a root-sum closed form in floating point and round it.

    ``formula_id`` is ``pds2d``, ``pds3d`` or ``pdsx1:N``. The rounded value is
    compared against the exact recurrence count; a gap of 0.5 or more raises
    :class:`ClosedFormMismatch`.
    """
    key, _, arg = formula_id.partition(":")
    if key == "pds2d":
        if n < 2:
            raise ValueError("the 2D root-sum formula holds for n >= 2")
        value, exact = _root_sum_2d(n), gf_pds_2d().coefficients(n)[n]
    elif key == "pds3d":
        if n < 2:
            raise ValueError("the 3D root-sum formula holds for n >= 2")
        value, exact = _root_sum_3d(n), gf_pds_3d().coefficients(n)[n]
    elif key == "pdsx1" and arg:
        dim = int(arg)
        value, exact = _radical_x1plus(n, dim), count_pds_x1plus(n, dim)
    else:
        raise ValueError(f"unknown closed form {formula_id!r}")
    if not abs(value - exact) < 0.5:
        raise ClosedFormMismatch(f"{formula_id}({n}): float {value!r} vs exact {exact}")
    return round(value)


__all__ = [
    "ClosedFormMismatch",
    "NdParams",
    "SeriesError",
    "count_pds_x1plus",
    "counts",
    "eval_closed_form_numeric",
    "gf_pds_2d",
    "gf_pds_3d",
    "gf_pds_nd",
    "gf_pds_x1plus",
    "gf_s1_2d",
    "gf_s1_3d",
    "gf_s1_nd",
    "gf_s2_2d",
    "gf_s2_3d",
    "gf_s2_nd",
    "gf_sne",
    "lookup",
    "solve_pds_functional_equation",
]

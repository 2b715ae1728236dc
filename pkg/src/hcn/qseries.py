"""Truncated q-expansions with exact rational coefficients.

A :class:`QSeries` knows the first ``prec`` coefficients of a power series in
q (exponents 0..prec-1).  Operators follow the usual q-expansion conventions:
``derive`` is q d/dq, ``u_operator`` keeps every d-th coefficient and
``v_operator`` substitutes q -> q^d.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterable, Mapping, Union

import numpy as np

from .hurwitz import HurwitzTable

Number = Union[int, Fraction]

# above this fill ratio a convolution operand is expanded to a dense array
DENSE_THRESHOLD = 0.10


class PrecisionError(ValueError):
    """Raised when a coefficient beyond the known precision is requested."""


class QSeries:
    """Immutable truncated power series sum c(n) q^n, n < prec."""

    __slots__ = ("prec", "_coeffs")

    def __init__(self, coeffs: Union[Mapping[int, Number], Iterable[Number]], prec: int):
        if prec < 1:
            raise ValueError(f"precision must be positive, got {prec}")
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        data = {}
        for n, c in coeffs.items():
            if n < 0:
                raise ValueError(f"negative exponent {n}")
            if n < prec and c != 0:
                data[int(n)] = Fraction(c)
        self.prec = prec
        self._coeffs = data

    @classmethod
    def _raw(cls, data: dict, prec: int) -> "QSeries":
        # trusted constructor: data already clean
        s = cls.__new__(cls)
        s.prec = prec
        s._coeffs = data
        return s

    # -- access ----------------------------------------------------------

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n >= self.prec:
            raise PrecisionError(f"coefficient q^{n} unknown at precision {self.prec}")
        return self._coeffs.get(n, Fraction(0))

    def coefficients(self) -> list[Fraction]:
        """Dense list of the coefficients of q^0 .. q^(prec-1)."""
        out = [Fraction(0)] * self.prec
        for n, c in self._coeffs.items():
            out[n] = c
        return out

    def items(self):
        return sorted(self._coeffs.items())

    def support(self) -> list[int]:
        return sorted(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision {self.prec} to {prec}")
        return QSeries._raw({n: c for n, c in self._coeffs.items() if n < prec}, prec)

    # -- ring structure --------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.prec, frozenset(self._coeffs.items())))

    def __neg__(self) -> "QSeries":
        return QSeries._raw({n: -c for n, c in self._coeffs.items()}, self.prec)

    def __add__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            other = QSeries({0: other}, self.prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        out = {n: c for n, c in self._coeffs.items() if n < prec}
        for n, c in other._coeffs.items():
            if n < prec:
                s = out.get(n, 0) + c
                if s:
                    out[n] = s
                else:
                    out.pop(n, None)
        return QSeries._raw(out, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return QSeries._raw({}, self.prec)
            return QSeries._raw({n: c * other for n, c in self._coeffs.items()}, self.prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    # -- operators -------------------------------------------------------

    def derive(self) -> "QSeries":
        return series_derive(self)

    def u(self, d: int) -> "QSeries":
        return u_operator(self, d)

    def v(self, d: int) -> "QSeries":
        return v_operator(self, d)

    # -- formatting ------------------------------------------------------

    def __repr__(self) -> str:
        return f"QSeries({str(self)})"

    def __str__(self) -> str:
        terms = []
        for n, c in self.items():
            if n == 0:
                terms.append(str(c))
            elif n == 1:
                terms.append(f"{c}*q")
            else:
                terms.append(f"{c}*q^{n}")
        terms.append(f"O(q^{self.prec})")
        return " + ".join(terms)

    def to_json(self) -> str:
        coeffs = {str(n): f"{c.numerator}/{c.denominator}" for n, c in self.items()}
        return json.dumps({"prec": self.prec, "coeffs": coeffs})

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        obj = json.loads(text)
        return cls({int(n): Fraction(c) for n, c in obj["coeffs"].items()}, int(obj["prec"]))


def _scaled_ints(f: QSeries) -> tuple[dict[int, int], int]:
    """Integer coefficients and common denominator L with f = ints / L."""
    L = lcm(*(c.denominator for c in f._coeffs.values())) if f._coeffs else 1
    return {n: c.numerator * (L // c.denominator) for n, c in f._coeffs.items()}, L


def series_mul(f: QSeries, g: QSeries) -> QSeries:
    """Cauchy product truncated at min(f.prec, g.prec).

    Both factors are scaled to integer coefficients over a common
    denominator; the sparser factor drives the loop and the other factor is
    expanded into a dense object array once it is filled above
    ``DENSE_THRESHOLD``.
    """
    prec = min(f.prec, g.prec)
    if len(f) > len(g):
        f, g = g, f
    fi, Lf = _scaled_ints(f)
    gi, Lg = _scaled_ints(g)
    fi = {n: c for n, c in fi.items() if n < prec}
    gi = {n: c for n, c in gi.items() if n < prec}
    L = Lf * Lg
    if prec and len(gi) > DENSE_THRESHOLD * prec:
        dense = np.zeros(prec, dtype=object)
        for n, c in gi.items():
            dense[n] = c
        acc = np.zeros(prec, dtype=object)
        for i, a in fi.items():
            acc[i:] += a * dense[: prec - i]
        out = {n: Fraction(int(c), L) for n, c in enumerate(acc) if c}
    else:
        sums: dict[int, int] = {}
        for i, a in fi.items():
            for j, b in gi.items():
                if i + j < prec:
                    sums[i + j] = sums.get(i + j, 0) + a * b
        out = {n: Fraction(c, L) for n, c in sums.items() if c}
    return QSeries._raw(out, prec)


def series_derive(f: QSeries) -> QSeries:
    """q d/dq: the coefficient of q^n is multiplied by n."""
    return QSeries._raw({n: n * c for n, c in f._coeffs.items() if n}, f.prec)


def u_operator(f: QSeries, d: int) -> QSeries:
    """sum c(d n) q^n, known to precision ceil(prec / d)."""
    if d < 1:
        raise ValueError(f"U_d needs d >= 1, got {d}")
    return QSeries._raw(
        {n // d: c for n, c in f._coeffs.items() if n % d == 0}, -(-f.prec // d)
    )


def v_operator(f: QSeries, d: int) -> QSeries:
    """f(q^d), known to precision d * prec."""
    if d < 1:
        raise ValueError(f"V_d needs d >= 1, got {d}")
    return QSeries._raw({d * n: c for n, c in f._coeffs.items()}, d * f.prec)


def theta_series(kappa: int, m: int, M: int, prec: int) -> QSeries:
    """sum of n^kappa q^(n^2) over integers n = m mod M with n^2 < prec."""
    if M < 1:
        raise ValueError(f"modulus must be positive, got {M}")
    out: dict[int, int] = {}
    r = isqrt(prec - 1) if prec > 0 else -1
    for n in range(-r, r + 1):
        if (n - m) % M == 0:
            out[n * n] = out.get(n * n, 0) + n**kappa
    return QSeries(out, prec)


def _pentagonal(deg: int) -> list[int]:
    """prod (1 - x^n) up to x^deg via Euler's pentagonal number theorem."""
    out = [0] * (deg + 1)
    k = 0
    while True:
        done = True
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e <= deg:
                out[e] += -1 if j % 2 else 1
                done = False
        if done:
            return out
        k += 1


def _jacobi_cube(deg: int) -> list[int]:
    """prod (1 - x^n)^3 up to x^deg via Jacobi's identity."""
    out = [0] * (deg + 1)
    k = 0
    while k * (k + 1) // 2 <= deg:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _poly_mul(a: list[int], b: list[int], deg: int) -> list[int]:
    # sparse-driven: iterate over the nonzero terms of the sparser factor
    if sum(1 for x in a if x) > sum(1 for x in b if x):
        a, b = b, a
    out = [0] * (deg + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(deg + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def eta_quotient_pow8_v3(prec: int) -> QSeries:
    """q prod_{n>=1} (1 - q^(3n))^8, the expansion of eta(3 tau)^8.

    The eighth power is assembled as (prod(1-x^n)^3)^2 (prod(1-x^n))^2 from the
    lacunary Jacobi and Euler series, so each product has a sparse factor.
    """
    if prec < 2:
        raise ValueError(f"prec must be >= 2, got {prec}")
    deg = (prec - 2) // 3
    cube = _jacobi_cube(deg)
    pent = _pentagonal(deg)
    p = _poly_mul(cube, cube, deg)
    p = _poly_mul(p, pent, deg)
    p = _poly_mul(p, pent, deg)
    return QSeries({1 + 3 * i: c for i, c in enumerate(p)}, prec)


def e2_series(prec: int) -> QSeries:
    """E_2 = 1 - 24 sum sigma(n) q^n."""
    if prec < 1:
        raise ValueError(f"prec must be >= 1, got {prec}")
    sigma = [0] * prec
    for d in range(1, prec):
        for n in range(d, prec, d):
            sigma[n] += d
    return QSeries([1] + [-24 * s for s in sigma[1:]], prec)


def hurwitz_series(table: HurwitzTable, prec: int) -> QSeries:
    """Holomorphic class number generating function sum H(n) q^n."""
    if not table.covers(prec - 1):
        raise PrecisionError(f"Hurwitz table to {table.max_n} cannot give precision {prec}")
    return QSeries({n: Fraction(int(table.twelve[n]), 12) for n in range(prec)}, prec)


def binomial(alpha: Number, j: int) -> Fraction:
    """alpha (alpha-1) ... (alpha-j+1) / j! for rational alpha."""
    out = Fraction(1)
    for i in range(j):
        out = out * (Fraction(alpha) - i) / (i + 1)
    return out


def rc_bracket(f: QSeries, g: QSeries, ell: int, kappa1: Number, kappa2: Number) -> QSeries:
    """Rankin-Cohen bracket [f, g]_ell for weights kappa1, kappa2.

    Uses q d/dq for the derivative, so the 1/(2 pi i)^ell normalization is
    already absorbed and all coefficients stay rational.
    """
    if ell < 0:
        raise ValueError(f"bracket order must be >= 0, got {ell}")
    df = [f]
    dg = [g]
    for _ in range(ell):
        df.append(series_derive(df[-1]))
        dg.append(series_derive(dg[-1]))
    total = QSeries._raw({}, min(f.prec, g.prec))
    for j in range(ell + 1):
        w = binomial(Fraction(kappa1) + ell - 1, ell - j) * binomial(Fraction(kappa2) + ell - 1, j)
        if j % 2:
            w = -w
        if w:
            total = total + series_mul(df[j], dg[ell - j]) * w
    return total

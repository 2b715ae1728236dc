"""Moments of Hurwitz class numbers in arithmetic progressions.

H_{kappa,m,M}(n) = sum over t = m mod M of t^kappa H(4n - t^2).  This module
holds the brute-force sums, the hyperbolic sums lambda_{ell,m,M}(n), the
Rankin-Cohen bracket coefficients G_{k,m,M}(n), and the closed formulas for
the zeroth and second moments modulo 3.
"""

from __future__ import annotations

import csv
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt
from typing import Iterable, Optional

from .arith import (
    divisor_power_sum_below_sqrt,
    divisor_sum,
    exact_sqrt,
    is_prime,
    min_divisor_sum,
)
from .hurwitz import HurwitzTable, shared_table
from .qseries import (
    PrecisionError,
    QSeries,
    eta_quotient_pow8_v3,
    hurwitz_series,
    rc_bracket,
    theta_series,
    u_operator,
)

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


@dataclass(frozen=True)
class MomentQuery:
    kappa: int
    m: int
    M: int
    n: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"modulus must be positive, got {self.M}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        object.__setattr__(self, "m", self.m % self.M)


def _table(table: Optional[HurwitzTable], need: int) -> HurwitzTable:
    if table is None:
        return shared_table(need)
    if not table.covers(need):
        raise PrecisionError(f"need H up to {need}, table stops at {table.max_n}")
    return table


def moment_brute(kappa: int, m: int, M: int, n: int, table: Optional[HurwitzTable] = None) -> Fraction:
    """Sum of t^kappa H(4n - t^2) over integers t = m mod M with t^2 <= 4n."""
    q = MomentQuery(kappa, m, M, n)
    T = _table(table, 4 * n)
    r = isqrt(4 * n)
    # first t >= -r in the residue class
    t = -r + (q.m + r) % M
    total = 0
    while t <= r:
        total += t**kappa * T.twelve_h(4 * n - t * t)
        t += M
    return Fraction(total, 12)


def moment_query(q: MomentQuery, table: Optional[HurwitzTable] = None) -> Fraction:
    return moment_brute(q.kappa, q.m, q.M, q.n, table)


def zeroth_moment_all(n: int) -> int:
    """Sum of H(4n - t^2) over all t, equal to 2 sigma(n) - sum min(d, n/d)."""
    return 2 * divisor_sum(n) - min_divisor_sum(n)


# -- hyperbolic sums -------------------------------------------------------


def _hyperbolic_pairs(n: int):
    """All (t, s) with 0 <= s < t and t^2 - s^2 = n."""
    for d in range(1, isqrt(n) + 1):
        if n % d == 0 and (d + n // d) % 2 == 0:
            e = n // d
            yield (d + e) // 2, (e - d) // 2


def lambda_direct(ell: int, m: int, M: int, n: int) -> Fraction:
    """lambda_{ell,m,M}(n): (t - s)^ell over representations t^2 - s^2 = n.

    Summed over both signs of the congruence t = +-m mod M, with the s = 0
    terms weighted 1/2.
    """
    total = Fraction(0)
    for t, s in _hyperbolic_pairs(n):
        hits = ((t - m) % M == 0) + ((t + m) % M == 0)
        if hits:
            w = Fraction((t - s) ** ell)
            total += hits * (w / 2 if s == 0 else w)
    return total


def lambda_series(ell: int, m: int, M: int, prec: int) -> QSeries:
    """Lambda_{ell,m,M} = sum_{n>=1} lambda_{ell,m,M}(n) q^n."""
    return QSeries({n: lambda_direct(ell, m, M, n) for n in range(1, prec)}, prec)


def lambda_closed_4n(m: int, n: int) -> Fraction:
    """lambda_{3,m,3}(4n) as a square term plus a divisor sum."""
    total = Fraction(0)
    r = exact_sqrt(n)
    if r is not None:
        hits = ((2 * r - m) % 3 == 0) + ((2 * r + m) % 3 == 0)
        total += Fraction(hits * (2 * r) ** 3, 2)
    N = 4 * n
    for d in range(1, isqrt(N) + 1):
        if N % d == 0 and d * d < N:
            s = (d + N // d) % 6
            hits = (s == (2 * m) % 6) + (s == (-2 * m) % 6)
            total += hits * d**3
    return total


def lambda_closed_12n(n: int) -> Fraction:
    """lambda_{1,0,3}(12n) = 12 [3|n] sum_{d|n/3, d^2<n/3} d + [12n square] sqrt(12n)."""
    total = 0
    if n % 3 == 0:
        total += 12 * divisor_power_sum_below_sqrt(n // 3, 1)
    r = exact_sqrt(12 * n)
    if r is not None:
        total += r
    return Fraction(total)


# -- Rankin-Cohen bracket coefficients -------------------------------------


def pk_poly(j: int, t: int, n: int) -> int:
    """Coefficient of X^j in 1 / (1 - tX + nX^2)."""
    if j < 0:
        raise ValueError(f"j must be non-negative, got {j}")
    prev, cur = 0, 1
    for _ in range(j):
        prev, cur = cur, t * cur - n * prev
    return cur


def bracket_normalizer(k: int) -> Fraction:
    """(2k)! / (2 k!) for k >= 1; 1 for k = 0, where the bracket is the product."""
    if k == 0:
        return Fraction(1)
    return Fraction(factorial(2 * k), 2 * factorial(k))


_bracket_cache: dict = {}
_bracket_lock = threading.Lock()


def _bracket_cached(k: int, m: int, M: int, prec: int, table: Optional[HurwitzTable]) -> QSeries:
    # returns a cached series with at least ``prec`` coefficients
    T = _table(table, 4 * (prec - 1))
    key = (k, m % M, M, id(T))
    with _bracket_lock:
        hit = _bracket_cache.get(key)
    if hit is not None and hit.prec >= prec:
        return hit
    # grow geometrically so sweeps over n do not rebuild the series each step
    target = prec
    if hit is not None:
        target = max(prec, min(2 * hit.prec, T.max_n // 4 + 1))
    big = 4 * (target - 1) + 1
    H = hurwitz_series(T, big)
    theta = theta_series(0, m, M, big)
    out = u_operator(rc_bracket(H, theta, k, THREE_HALVES, HALF), 4)
    with _bracket_lock:
        _bracket_cache[key] = out
    return out


def bracket_u4_series(k: int, m: int, M: int, prec: int, table: Optional[HurwitzTable] = None) -> QSeries:
    """[H, theta_{0,m,M}]_k | U_4 to ``prec`` coefficients (weights 3/2, 1/2)."""
    return _bracket_cached(k, m, M, prec, table).truncate(prec)


def g_bracket(k: int, m: int, M: int, n: int, table: Optional[HurwitzTable] = None) -> Fraction:
    """G_{k,m,M}(n), defined as the n-th coefficient of [H, theta_{m,M}]_k | U_4
    divided by :func:`bracket_normalizer`.
    """
    return _bracket_cached(k, m, M, n + 1, table)[n] / bracket_normalizer(k)


def g_taylor(k: int, m: int, M: int, n: int, table: Optional[HurwitzTable] = None) -> Fraction:
    """sum over t = m mod M of p_{2k}(t, n) H(4n - t^2)."""
    T = _table(table, 4 * n)
    r = isqrt(4 * n)
    total = sum(pk_poly(2 * k, t, n) * T.twelve_h(4 * n - t * t)
                for t in range(-r, r + 1) if (t - m) % M == 0)
    return Fraction(total, 12)


@dataclass
class Calibration:
    k: int
    m: int
    M: int
    nmax: int
    ratios: dict
    zero_mismatch: list

    @property
    def stable(self) -> bool:
        return len(set(self.ratios.values())) <= 1 and not self.zero_mismatch

    @property
    def constant(self) -> Optional[Fraction]:
        vals = set(self.ratios.values())
        return vals.pop() if len(vals) == 1 else None

    def as_dict(self) -> dict:
        c = self.constant
        return {"k": self.k, "m": self.m, "M": self.M, "nmax": self.nmax,
                "constant": None if c is None else str(c), "stable": self.stable,
                "samples": len(self.ratios)}


def calibrate_pk(k: int, m: int, M: int, nmax: int = 50, table: Optional[HurwitzTable] = None) -> Calibration:
    """Ratio g_bracket / g_taylor for n <= nmax.

    n where the Taylor sum vanishes only count as a mismatch if the bracket
    coefficient is nonzero there.
    """
    series = _bracket_cached(k, m, M, nmax + 1, table)
    norm = bracket_normalizer(k)
    ratios, bad = {}, []
    for n in range(1, nmax + 1):
        g = series[n] / norm
        t = g_taylor(k, m, M, n, table)
        if t:
            ratios[n] = g / t
        elif g:
            bad.append(n)
    return Calibration(k, m % M, M, nmax, ratios, bad)


def moment_recursion_second(m: int, M: int, n: int, table: Optional[HurwitzTable] = None) -> Fraction:
    """H_{2,m,M}(n) from (1/2) G_{1,m,M}(n) + n H_{0,m,M}(n)."""
    return g_bracket(1, m, M, n, table) / 2 + n * moment_brute(0, m, M, n, table)


# -- eta(3 tau)^8 coefficients ---------------------------------------------

_eta: Optional[QSeries] = None
_eta_lock = threading.Lock()


def eta_coefficient(n: int) -> int:
    """a(n), the n-th coefficient of eta(3 tau)^8."""
    global _eta
    with _eta_lock:
        if _eta is None or _eta.prec <= n:
            _eta = eta_quotient_pow8_v3(max(2 * n + 2, 1024))
        c = _eta[n]
    assert c.denominator == 1
    return c.numerator


# -- closed formulas modulo 3 -----------------------------------------------


def _d1(n: int) -> int:
    return divisor_power_sum_below_sqrt(n, 1)


def _d3(n: int) -> int:
    return divisor_power_sum_below_sqrt(n, 3)


def closed_zeroth_m3(m: int, n: int) -> Fraction:
    """H_{m,3}(n) in closed form."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    m %= 3
    if n % 3:
        s = divisor_sum(n)
        if m == 0:
            return Fraction(s, 2) if n % 3 == 1 else Fraction(s - 2 * _d1(n))
        if n % 3 == 1:
            return Fraction(3 * s, 4) - Fraction(min_divisor_sum(n), 2)
        return Fraction(s, 2)
    n1 = n // 3
    inner = _d1(n1 // 3) if n1 % 3 == 0 else 0
    r12 = exact_sqrt(12 * n1)
    if m == 0:
        val = Fraction(2 * divisor_sum(n1) - 6 * inner)
        if r12 is not None:
            val -= exact_sqrt(3 * n1)
        return val
    val = (divisor_sum(n) - Fraction(min_divisor_sum(n), 2) - divisor_sum(n1) + 3 * inner)
    if r12 is not None:
        val += Fraction(r12, 4)
    return Fraction(val)


def closed_second_m3(m: int, n: int) -> Fraction:
    """H_{2,m,3}(n) in closed form, using the coefficients a(n) of eta(3 tau)^8."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    m %= 3
    r = exact_sqrt(n)
    n32 = n * r if r is not None else 0  # n^(3/2) when n is a square
    sigma = divisor_sum(n)
    if n % 3:
        a = eta_coefficient(n)
        if m == 0:
            if n % 3 == 1:
                return Fraction(n * sigma - a, 2)
            return Fraction(-2 * _d3(n) + n * sigma - 2 * n * _d1(n))
        val = Fraction(-n32, 2)
        if n % 3 == 1:
            return (val - _d3(n) + Fraction(3 * n * sigma, 4)
                    - Fraction(n * min_divisor_sum(n), 2) + Fraction(a, 4))
        return val + Fraction(n * sigma, 2)

    s3 = divisor_sum(n // 3)
    ninth3 = _d3(n // 9) if n % 9 == 0 else 0
    ninth1 = _d1(n // 9) if n % 9 == 0 else 0
    if m == 0:
        return Fraction(-n32 - 54 * ninth3 + 2 * n * s3 - 6 * n * ninth1 - n32)
    both3 = sum(d**3 for d in range(3, isqrt(n) + 1, 3)
                if n % d == 0 and d * d < n and (n // d) % 3 == 0)
    return (-(_d3(n) - both3) + n * (sigma - s3) - Fraction(n * min_divisor_sum(n), 2)
            + 3 * n * ninth1 + Fraction(n32, 2))


def _geom(p: int, e: int) -> Fraction:
    """(p^e - 1) / (p - 1)."""
    return Fraction(p**e - 1, p - 1)


def closed_second_primepower(m: int, p: int, r: int) -> Fraction:
    """H_{2,m,3}(p^r) from the prime-power specialization."""
    if not is_prime(p) or r < 1:
        raise ValueError(f"need a prime p and r >= 1, got p={p}, r={r}")
    m %= 3
    n = p**r
    if p == 3:
        j = (r - 1) // 2
        if m == 0:
            sq = 3 ** (3 * r // 2) if r % 2 == 0 else 0
            return (-sq - Fraction(27, 13) * (3 ** (3 * j) - 1) + 3**r * (3**r - 1)
                    - 3 ** (r + 1) * (3**j - 1) - sq)
        return (-1 + 3 ** (2 * r) - Fraction(3**r, 2) * (3 ** ((r + 1) // 2) - 1)
                + Fraction(3 ** (r + 1) * (3**j - 1), 2))

    sig = _geom(p, r + 1)
    a = eta_coefficient(n)
    square_like = m != 0 and (p % 3 == 1 or r % 2 == 0)
    if square_like:
        return (-_geom(p**3, r // 2 + 1) + Fraction(3 * n, 4) * sig
                - n * _geom(p, (r + 1) // 2) + Fraction(a, 4))
    if m == 0 and (p % 3 == 1 or r % 2 == 0):
        return Fraction(n, 2) * sig - Fraction(a, 2)
    if m == 0:
        return -2 * _geom(p**3, (r + 1) // 2) + n * sig - 2 * n * _geom(p, (r + 1) // 2)
    return Fraction(n, 2) * sig


def brown_calkin(p: int) -> Fraction:
    """Closed value of H_{1,5}(p) for a prime p != 5, keyed on p mod 5."""
    r = p % 5
    if r in (1, 2):
        return Fraction(p + 1, 3)
    if r == 3:
        return Fraction(p - 1, 2)
    if r == 4:
        return Fraction(5 * (p + 1), 12)
    raise ValueError("p must not be divisible by 5")


# -- table emitters ----------------------------------------------------------

CSV_FIELDS = ("n", "m", "M", "kappa", "value_num", "value_den")


def moment_rows(kappa: int, m: int, M: int, ns: Iterable[int], table: Optional[HurwitzTable] = None):
    for n in ns:
        v = moment_brute(kappa, m, M, n, table)
        yield (n, m % M, M, kappa, v.numerator, v.denominator)


def write_moment_csv(fh, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    w.writerows(rows)

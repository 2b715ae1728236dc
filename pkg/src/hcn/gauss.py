"""Generalized quadratic Gauss sums G(a, b; c) = sum_{l mod c} e_c(a l^2 + b l).

The exact value is a :class:`CyclotomicSum`, the multiset of exponents j of
e_c(j) = exp(2 pi i j / c).  The closed-form evaluations return Python
complex numbers and are only ever compared against the exact tallies.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd

import numpy as np

from .arith import eps_unit, kronecker_symbol, mod_inverse, valuation


def e(c: int, x) -> complex:
    """e_c(x) = exp(2 pi i x / c); x may be a Fraction."""
    return cmath.exp(2j * math.pi * (x % c) / c)


@dataclass(frozen=True)
class CyclotomicSum:
    """sum_j mult[j] * e_c(j) for j in 0..c-1."""

    modulus: int
    mult: tuple[int, ...]

    def __post_init__(self):
        if len(self.mult) != self.modulus:
            raise ValueError("multiplicity vector must have length c")

    def value(self) -> complex:
        c = self.modulus
        return complex(sum(m * e(c, j) for j, m in enumerate(self.mult) if m))

    def __complex__(self) -> complex:
        return self.value()

    @property
    def terms(self) -> int:
        return sum(self.mult)


def gauss_brute(a: int, b: int, c: int) -> CyclotomicSum:
    """Tally the exponents a l^2 + b l mod c over l = 0..c-1."""
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    mult = [0] * c
    for l in range(c):
        mult[(a * l * l + b * l) % c] += 1
    return CyclotomicSum(c, tuple(mult))


def gauss_brute_values(a: int, bs, c: int) -> np.ndarray:
    """Brute-force G(a, b; c) for every b in ``bs`` at once, as complex values.

    Same tally as :func:`gauss_brute`, vectorized over b for sweeps.
    """
    l = np.arange(c, dtype=np.int64)
    bs = np.asarray(bs, dtype=np.int64)
    expo = (a * l * l)[:, None] + l[:, None] * bs[None, :]
    roots = np.exp(2j * np.pi * np.arange(c) / c)
    return roots[expo % c].sum(axis=0)


def _gauss_odd(a: int, b: int, c: int) -> complex:
    # gcd(a, c) = 1, c odd
    if c == 1:
        return 1 + 0j
    return eps_unit(c) * kronecker_symbol(a, c) * e(c, -mod_inverse(4 * a, c) * b * b) * math.sqrt(c)


def _gauss_two_power(a: int, b: int, beta: int) -> complex:
    # a odd, modulus 2^beta with beta >= 1
    c = 1 << beta
    if b % 2:
        return 2 + 0j if beta == 1 else 0j
    if beta == 1:
        return 0j
    # (1+i) eps_a^{-1}; the unit must be inverted to agree with the tally
    base = (1 + 1j) * eps_unit(a).conjugate() * kronecker_symbol(c, a) * 2 ** (beta / 2)
    return e(c, -mod_inverse(a, c) * (b // 2) ** 2) * base


def gauss_closed(a: int, b: int, c: int) -> complex:
    """G(a, b; c) from the classical evaluation formulas.

    Pull out g = gcd(a, c) (zero unless g | b), split the modulus into its odd
    part and 2-power part by the Chinese remainder theorem, then evaluate each
    factor in closed form.
    """
    if c < 1:
        raise ValueError(f"modulus must be positive, got {c}")
    g = gcd(a, c)
    if b % g:
        return 0j
    a, b, c = a // g, b // g, c // g
    beta = valuation(c, 2)
    odd = c >> beta
    if beta == 0:
        return g * _gauss_odd(a, b, odd)
    if odd == 1:
        return g * _gauss_two_power(a, b, beta)
    return g * _gauss_odd(a << beta, b, odd) * _gauss_two_power(a * odd, b, beta)


def _split_odd(n: int) -> tuple[int, int]:
    """(v, n0) with n = 2^v n0 and n0 odd; n != 0."""
    v = valuation(n, 2)
    return v, n >> v


def theta_growth_closed(h: int, m: int, M: int, k: int) -> complex:
    """e_k(h m^2) G(h M^2, 2 h m M; k) by the five-case closed form.

    With M = 2^alpha M0, m = 2^gamma m0, g1 = gcd(M, k), g2 = gcd(M, k/g1) and
    k = 2^beta g1 g2 k0, the value is sqrt(g1 g2 k) times a root of unity
    depending on beta and gamma.  m = 0 and alpha < gamma are routed through
    :func:`gauss_closed` since the case table does not cover them.
    """
    if k < 1 or M < 1:
        raise ValueError("k and M must be positive")
    if gcd(h, k) != 1:
        raise ValueError(f"gcd(h, k) must be 1, got h={h}, k={k}")
    alpha = valuation(M, 2)
    if m == 0:
        return gauss_closed(h * M * M, 0, k)
    gamma = valuation(m, 2)
    if alpha < gamma:
        return e(k, h * m * m) * gauss_closed(h * M * M, 2 * h * m * M, k)

    g1 = gcd(M, k)
    g2 = gcd(M, k // g1)
    if (2 * m) % g2:
        return 0j
    beta, k0 = _split_odd(k // (g1 * g2))
    A = h * M * M // (g1 * g2)
    scale = math.sqrt(g1 * g2 * k)
    r = g1 // g2
    mm = (2 * m // g2) ** 2
    if beta == 0:
        return scale * eps_unit(k0) * kronecker_symbol(A, k0) * e(4 * r, h * mm * mod_inverse(k0, 4 * r))
    if beta == 1:
        if gamma == alpha - 1:
            return (scale * math.sqrt(2) * eps_unit(k0) * kronecker_symbol(2 * A, k0)
                    * e(8 * r, h * mm * mod_inverse(k0, 8 * r)))
        return 0j
    if gamma == alpha - 1:
        return 0j
    # inverted unit, as in the 2-power Gauss sum; the (-1)^((k0-1)/2) sign
    # then cancels against eps_{k0}^2
    return (scale * (1 + 1j) * eps_unit(A).conjugate() * kronecker_symbol((1 << beta) * k0, A)
            * e(r, h * (m // g2) ** 2 * mod_inverse((1 << beta) * k0, r)))

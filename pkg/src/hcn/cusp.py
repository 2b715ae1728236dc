"""Growth constants of q-series towards rational cusps h/k.

For a weight-2 object f, C_f(h/k) = -lim_{z->0+} z^2 f(h/k + iz/k).  The
functions here return these limits as Python complex numbers.

Branch conventions: i^(3/2) = exp(3 pi i / 4) and i^(-1/2) = exp(-pi i / 4).
"""

from __future__ import annotations

import cmath
import math
from math import gcd
from typing import Callable, NamedTuple

from .arith import eps_unit, kronecker_symbol, mod_inverse
from .gauss import e, gauss_closed, theta_growth_closed

I_THREE_HALVES = cmath.exp(3j * math.pi / 4)
I_MINUS_HALF = cmath.exp(-1j * math.pi / 4)

BRANCHES = {"i^(3/2)": "exp(3*pi*i/4)", "i^(-1/2)": "exp(-pi*i/4)"}


class CuspPoint(NamedTuple):
    h: int
    k: int

    def check(self) -> "CuspPoint":
        if self.k < 1 or gcd(self.h, self.k) != 1:
            raise ValueError(f"not a reduced cusp: {self.h}/{self.k}")
        return self

    @classmethod
    def reduced(cls, h: int, k: int) -> "CuspPoint":
        g = gcd(h, k)
        return cls(h // g, k // g).check()


GrowthFn = Callable[[CuspPoint], complex]


def hhat_growth(p: CuspPoint) -> complex:
    """lim z^(3/2) of the completed class number generating function at h/k."""
    h, k = p.check()
    if k % 2:
        return kronecker_symbol(h, k) * eps_unit(k).conjugate() / (48 * math.sqrt(2))
    if k % 4 == 2:
        return 0j
    return I_MINUS_HALF / 12 * eps_unit(h) * kronecker_symbol(k, h)


def theta_growth(p: CuspPoint, m: int, M: int) -> complex:
    """lim sqrt(z) theta_{m,M}(h/k + iz/k) = e_k(hm^2) G(hM^2, 2hmM; k) / (M sqrt(2k))."""
    h, k = p.check()
    return theta_growth_closed(h, m, M, k) / (M * math.sqrt(2 * k))


def product_growth(p: CuspPoint, m: int, M: int) -> complex:
    """C of theta_{m,M} times the completed class number series."""
    return -theta_growth(p, m, M) * hhat_growth(p)


def push_u(d: int, C: GrowthFn, p: CuspPoint) -> complex:
    """Growth constant of f|U_d at h/k from the growth constants C of f."""
    h, k = p.check()
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    total = 0j
    for j in range(d):
        g = gcd(h + k * j, d)
        total += g * g * C(CuspPoint.reduced((h + k * j) // g, k * d // g))
    return total / d


def c_mM(p: CuspPoint, m: int, M: int, literal_even_phase: bool = False) -> complex:
    """Closed three-case formula for the growth constant of (theta_{m,M} H)|U_4.

    For even k each shifted cusp (h + kj)/(4k) carries the phase
    e_{4k}((h + kj) m^2).  ``literal_even_phase=True`` uses e_k(h m^2) for every
    j instead; for M = 3 that variant disagrees with the U_4 pushforward
    whenever m != 0 mod 3, and it is kept only for reporting.
    """
    h, k = p.check()
    if k % 2 == 0:
        total = 0j
        for j in range(4):
            x = h + k * j
            phase = e(k, h * m * m) if literal_even_phase else e(4 * k, x * m * m)
            total += (eps_unit(x) * kronecker_symbol(k, x) * phase
                      * gauss_closed(x * M * M, 2 * x * m * M, 4 * k))
        return I_THREE_HALVES / (96 * M * math.sqrt(2 * k)) * total

    inv4 = mod_inverse(4, k)
    x0 = h - h * k * k
    assert x0 % 4 == 0, "k odd forces k^2 = 1 mod 8"
    x0 //= 4
    phase = e(k, inv4 * h * m * m)
    first = (-phase / (24 * M * math.sqrt(k)) * kronecker_symbol(h, k) * eps_unit(k).conjugate()
             * gauss_closed(x0 * M * M, 2 * x0 * m * M, k))
    rest = 0j
    for j in (1, 3):
        x = h - h * k * k + k * k * j
        if k % 4 == 1:
            unit = 1j ** ((m * m * j) % 4) * eps_unit(j)
        else:
            unit = 1j ** ((-m * m * j) % 4) * eps_unit(j).conjugate()
        rest += unit * gauss_closed(x * M * M, 2 * x * m * M, 4 * k)
    sym = kronecker_symbol(k, h) if k % 4 == 1 else kronecker_symbol(-k, h)
    return first + I_THREE_HALVES * phase / (96 * M * math.sqrt(2 * k)) * sym * rest

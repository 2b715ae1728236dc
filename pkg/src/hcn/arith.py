"""Scalar number-theoretic kernels.

Everything here works on Python integers, so there is no overflow and no
floating point.  Rationals are :class:`fractions.Fraction` throughout the
package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Optional

__all__ = [
    "Fraction",
    "divisors",
    "divisor_sum",
    "divisor_power_sum_below_sqrt",
    "min_divisor_sum",
    "kronecker_symbol",
    "mod_inverse",
    "eps_unit",
    "exact_sqrt",
    "is_prime",
    "primes_up_to",
    "prime_power",
    "valuation",
]


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of ``n`` by trial division up to sqrt(n)."""
    if n < 1:
        raise ValueError(f"divisors requires n >= 1, got {n}")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def divisor_sum(n: int) -> int:
    """sigma(n), the sum of the positive divisors of n."""
    if n < 1:
        raise ValueError(f"divisor_sum requires n >= 1, got {n}")
    return sum(divisors(n))


def divisor_power_sum_below_sqrt(n: int, e: int) -> int:
    """Sum of d**e over divisors d of n with d*d < n.

    The divisor sqrt(n) of a perfect square is excluded.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0 and d * d < n:
            total += d**e
    return total


def min_divisor_sum(n: int) -> int:
    """Sum of min(d, n/d) over all divisors d of n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            # d and n/d both contribute d, unless they coincide
            total += d if d * d == n else 2 * d
    return total


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), the standard extension of the Jacobi symbol.

    Conventions: (a/0) is 1 for a = +-1 and 0 otherwise; (a/-1) is -1 for
    a < 0 and 1 otherwise; (a/2) is 0 for even a, 1 for a = +-1 mod 8 and
    -1 for a = +-3 mod 8.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def mod_inverse(a: int, b: int) -> int:
    """Inverse of a modulo b in [0, b); returns 0 when b == 1."""
    if b < 1:
        raise ValueError(f"modulus must be positive, got {b}")
    if b == 1:
        return 0
    if gcd(a, b) != 1:
        raise ValueError(f"{a} is not invertible modulo {b}")
    return pow(a, -1, b)


def eps_unit(d: int) -> complex:
    """1 for d = 1 mod 4 and i for d = 3 mod 4."""
    if d % 2 == 0:
        raise ValueError(f"eps_unit is defined for odd d only, got {d}")
    return 1 + 0j if d % 4 == 1 else 1j


def exact_sqrt(n: int) -> Optional[int]:
    """Integer square root of n if n is a perfect square, else None."""
    if n < 0:
        raise ValueError(f"exact_sqrt requires n >= 0, got {n}")
    r = isqrt(n)
    return r if r * r == n else None


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def primes_up_to(n: int) -> Iterator[int]:
    """Primes p <= n via a simple sieve."""
    if n < 2:
        return iter(())
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return (p for p in range(n + 1) if sieve[p])


def prime_power(n: int) -> Optional[tuple[int, int]]:
    """(p, r) with n == p**r and r >= 1, or None if n is not a prime power."""
    if n < 2:
        return None
    for p in range(2, isqrt(n) + 1):
        if n % p == 0:
            r = valuation(n, p)
            return (p, r) if p**r == n else None
    return n, 1

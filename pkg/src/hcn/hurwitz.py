"""Hurwitz class numbers from reduced binary quadratic forms.

H(n) is the number of SL2(Z)-classes of positive definite forms of
discriminant -n, where the classes of a*(x^2 + y^2) count 1/2 and the classes
of a*(x^2 + xy + y^2) count 1/3.  H(0) = -1/12 and H(n) = 0 for n = 1, 2 mod 4.

Tables store the integers 12*H(n) so that bulk arithmetic stays in ints.
"""

from __future__ import annotations

import logging
import os
import re
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from pathlib import Path
from typing import Iterator, NamedTuple, Optional

import numpy as np

log = logging.getLogger(__name__)

CACHE_ENV = "HCN_CACHE_DIR"
MAX_TABLE_SIZE = 50_000_000

_HEADER_RE = re.compile(r"^HURWITZ v1 max=(\d+)$")


class TableTooLarge(MemoryError):
    pass


class QuadraticForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self
        if a <= 0 or self.discriminant >= 0:
            return False
        if not abs(b) <= a <= c:
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def weight12(self) -> int:
        """12/omega_Q for a reduced form: 6 for a(1,0,1), 4 for a(1,1,1), else 12."""
        a, b, c = self
        if b == 0 and a == c:
            return 6
        if a == b == c:
            return 4
        return 12


def reduced_forms(D: int) -> list[QuadraticForm]:
    """All reduced forms of discriminant D < 0, one per SL2(Z)-class.

    Sorted by a, then b descending.
    """
    if D >= 0:
        raise ValueError(f"discriminant must be negative, got {D}")
    if D % 4 not in (0, 1):
        raise ValueError(f"no forms of discriminant {D}: D must be 0 or 1 mod 4")
    forms = []
    bmax = isqrt(-D // 3)
    for b in range(-bmax, bmax + 1):
        if (b - D) % 2:
            continue
        ac, rem = divmod(b * b - D, 4)
        assert rem == 0
        for a in range(max(abs(b), 1), isqrt(ac) + 1):
            if ac % a:
                continue
            Q = QuadraticForm(a, b, ac // a)
            if Q.is_reduced():
                forms.append(Q)
    forms.sort(key=lambda Q: (Q.a, -Q.b))
    return forms


def hurwitz(n: int) -> Fraction:
    """H(n) by enumerating the reduced forms of discriminant -n."""
    if n < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    return Fraction(sum(Q.weight12() for Q in reduced_forms(-n)), 12)


@dataclass(frozen=True, eq=False)
class HurwitzTable:
    """Immutable table of H(0..max_n), stored as the integers 12*H(n)."""

    max_n: int
    twelve: np.ndarray

    def __post_init__(self):
        if self.twelve.shape != (self.max_n + 1,):
            raise ValueError("table length does not match max_n")
        self.twelve.flags.writeable = False

    def __len__(self) -> int:
        return self.max_n + 1

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.max_n:
            raise IndexError(f"H({n}) is outside the table (max_n={self.max_n})")
        return Fraction(int(self.twelve[n]), 12)

    def __iter__(self) -> Iterator[Fraction]:
        return (Fraction(int(v), 12) for v in self.twelve)

    def twelve_h(self, n: int) -> int:
        """12*H(n) as a Python int; 0 for negative n."""
        if n < 0:
            return 0
        if n > self.max_n:
            raise IndexError(f"H({n}) is outside the table (max_n={self.max_n})")
        return int(self.twelve[n])

    @property
    def values(self) -> list[Fraction]:
        return list(self)

    def covers(self, n: int) -> bool:
        return n <= self.max_n

    def validate(self) -> None:
        """Raise ValueError if any table invariant fails."""
        t = self.twelve
        if t[0] != -1:
            raise ValueError("H(0) must be -1/12")
        n = np.arange(len(t))
        r = n % 4
        if np.any(t[(r == 1) | (r == 2)] != 0):
            raise ValueError("H(n) must vanish for n = 1, 2 mod 4")
        pos = ((r == 0) | (r == 3)) & (n > 0)
        if np.any(t[pos] <= 0):
            raise ValueError("H(n) must be positive for n = 0, 3 mod 4, n > 0")


def _sweep(N: int, a_lo: int, a_hi: int) -> np.ndarray:
    out = np.zeros(N + 1, dtype=np.int64)
    for a in range(a_lo, a_hi):
        step = 4 * a
        for b in range(-a + 1, a + 1):
            c0 = a if b >= 0 else a + 1
            n0 = step * c0 - b * b
            if n0 > N:
                continue
            out[n0::step] += 12
        # forms with extra automorphisms sit at c = a
        if 4 * a * a <= N:
            out[4 * a * a] -= 6
        out[3 * a * a] -= 8
    return out


def build_table(N: int, jobs: int = 1, cap: Optional[int] = None) -> HurwitzTable:
    """Table of H(0..N) from one sweep over reduced (a, b, c).

    For each pair (a, b) the admissible c form an arithmetic progression of
    discriminants with step 4a, so each pair costs one strided numpy update.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    cap = MAX_TABLE_SIZE if cap is None else cap
    if N > cap:
        raise TableTooLarge(f"table size {N} exceeds cap {cap}")

    cached = load_cached(N)
    if cached is not None:
        return cached

    amax = isqrt(N // 3)
    if jobs > 1 and amax > 64:
        # split so every chunk has roughly equal work (~a^2 per a)
        bounds = [1 + round(amax * (i / jobs) ** 0.5) for i in range(jobs + 1)]
        bounds[-1] = amax + 1
        with ProcessPoolExecutor(jobs) as ex:
            parts = ex.map(_sweep, [N] * jobs, bounds[:-1], bounds[1:])
            twelve = sum(parts)
    else:
        twelve = _sweep(N, 1, amax + 1)
    twelve[0] = -1
    table = HurwitzTable(N, twelve)
    store_cached(table)
    return table


def _cache_dir() -> Optional[Path]:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def write_table(table: HurwitzTable, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"HURWITZ v1 max={table.max_n}\n")
        for n, v in enumerate(table.twelve):
            fh.write(f"{n},{int(v)}\n")


def read_table(path) -> HurwitzTable:
    """Read a cache file and validate it before returning."""
    with open(path, encoding="ascii") as fh:
        m = _HEADER_RE.match(fh.readline().strip())
        if not m:
            raise ValueError(f"{path}: bad header")
        N = int(m.group(1))
        twelve = np.zeros(N + 1, dtype=np.int64)
        seen = 0
        for line in fh:
            if not line.strip():
                continue
            n, v = line.split(",")
            twelve[int(n)] = int(v)
            seen += 1
    if seen != N + 1:
        raise ValueError(f"{path}: expected {N + 1} rows, found {seen}")
    table = HurwitzTable(N, twelve)
    table.validate()
    return table


def load_cached(N: int) -> Optional[HurwitzTable]:
    """Smallest cached table covering N, truncated to N, if caching is on."""
    d = _cache_dir()
    if d is None or not d.is_dir():
        return None
    best = None
    for p in d.glob("hurwitz_*.txt"):
        try:
            size = int(p.stem.split("_")[1])
        except (IndexError, ValueError):
            continue
        if size >= N and (best is None or size < best[0]):
            best = (size, p)
    if best is None:
        return None
    try:
        table = read_table(best[1])
    except (OSError, ValueError) as exc:
        log.warning("ignoring bad cache file %s: %s", best[1], exc)
        return None
    return HurwitzTable(N, table.twelve[: N + 1].copy())


def store_cached(table: HurwitzTable) -> None:
    d = _cache_dir()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"hurwitz_{table.max_n}.txt"
    if not path.exists():
        tmp = path.with_suffix(".tmp")
        write_table(table, tmp)
        tmp.replace(path)


_shared: Optional[HurwitzTable] = None
_shared_lock = threading.Lock()


def shared_table(n: int) -> HurwitzTable:
    """Process-wide table covering at least H(0..n); grows by doubling."""
    global _shared
    with _shared_lock:
        if _shared is None or _shared.max_n < n:
            size = max(n, 2 * _shared.max_n if _shared else 1024)
            _shared = build_table(size)
        return _shared

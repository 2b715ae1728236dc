import cmath
import math
import random
from math import gcd

import pytest

from hcn.cusp import (
    I_MINUS_HALF,
    I_THREE_HALVES,
    CuspPoint,
    c_mM,
    hhat_growth,
    product_growth,
    push_u,
    theta_growth,
)
from hcn.gauss import e, gauss_brute


def close(a, b, tol=1e-9):
    return abs(complex(a) - complex(b)) < tol


def test_branches():
    assert close(I_THREE_HALVES, cmath.exp(3j * math.pi / 4))
    assert close(I_MINUS_HALF, cmath.exp(-1j * math.pi / 4))


def test_cusp_point():
    assert CuspPoint.reduced(4, 6) == (2, 3)
    with pytest.raises(ValueError):
        CuspPoint(2, 4).check()
    with pytest.raises(ValueError):
        CuspPoint(1, 0).check()


def test_hhat_examples():
    assert close(hhat_growth(CuspPoint(0, 1)), 1 / (48 * math.sqrt(2)))
    assert close(hhat_growth(CuspPoint(1, 2)), 0)
    assert close(hhat_growth(CuspPoint(1, 4)), cmath.exp(-1j * math.pi / 4) / 12)


def test_theta_examples():
    assert close(theta_growth(CuspPoint(0, 1), 0, 1), 1 / math.sqrt(2))
    want = e(2, 1) * gauss_brute(9, 6, 2).value() / (3 * math.sqrt(4))
    assert close(theta_growth(CuspPoint(1, 2), 1, 3), want)
    want = gauss_brute(9, 0, 3).value() / (3 * math.sqrt(6))
    assert close(theta_growth(CuspPoint(1, 3), 0, 3), want)


def test_product_examples():
    assert close(product_growth(CuspPoint(1, 2), 1, 3), 0)
    assert close(product_growth(CuspPoint(0, 1), 0, 1), -1 / 96)
    p = CuspPoint(1, 3)
    assert close(product_growth(p, 1, 3), -theta_growth(p, 1, 3) * hhat_growth(p))


def test_push_u_identity():
    C = lambda p: complex(p.h, p.k)  # noqa: E731
    assert push_u(1, C, CuspPoint(3, 7)) == C(CuspPoint(3, 7))
    with pytest.raises(ValueError):
        push_u(0, C, CuspPoint(0, 1))


@pytest.mark.parametrize("h, k, m", [(0, 1, 0), (1, 2, 1), (1, 3, 0)])
def test_c_mM_examples(h, k, m):
    p = CuspPoint(h, k)
    assert close(c_mM(p, m, 3), push_u(4, lambda q: product_growth(q, m, 3), p))


def test_c_mM_cross_check():
    for k in range(1, 37):
        for h in range(-k, k + 1):
            if gcd(h, k) != 1:
                continue
            p = CuspPoint(h, k)
            for m in range(3):
                want = push_u(4, lambda q: product_growth(q, m, 3), p)
                assert abs(c_mM(p, m, 3) - want) < 1e-9, (h, k, m)


def test_literal_even_phase_differs():
    # the uncorrected phase only agrees when 3 | m
    p = CuspPoint(1, 2)
    want = push_u(4, lambda q: product_growth(q, 1, 3), p)
    assert abs(c_mM(p, 1, 3, literal_even_phase=True) - want) > 1e-6
    assert close(c_mM(p, 0, 3, literal_even_phase=True), c_mM(p, 0, 3))


def test_eisenstein_constant():
    assert close(push_u(3, lambda q: c_mM(q, 0, 3), CuspPoint(1, 1)), -1 / 12)
    rng = random.Random(7)
    pts = [(h, k) for k in range(1, 25) for h in range(-k, k + 1) if gcd(h, k) == 1]
    for h, k in rng.sample(pts, 80):
        assert close(push_u(3, lambda q: c_mM(q, 0, 3), CuspPoint(h, k)), -1 / 12)

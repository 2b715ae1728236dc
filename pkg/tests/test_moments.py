import io
from fractions import Fraction

import pytest

from hcn.arith import divisor_sum, min_divisor_sum
from hcn.moments import (
    MomentQuery,
    bracket_normalizer,
    bracket_u4_series,
    brown_calkin,
    calibrate_pk,
    closed_second_m3,
    closed_second_primepower,
    closed_zeroth_m3,
    eta_coefficient,
    g_bracket,
    g_taylor,
    lambda_closed_12n,
    lambda_closed_4n,
    lambda_direct,
    moment_brute,
    moment_query,
    moment_recursion_second,
    moment_rows,
    pk_poly,
    write_moment_csv,
    zeroth_moment_all,
)
from hcn.qseries import PrecisionError


@pytest.mark.parametrize("args, want", [((0, 0, 1, 5), 10), ((2, 1, 3, 2), 3), ((2, 0, 3, 1), 0),
                                        ((0, 1, 5, 11), 4)])
def test_moment_examples(table, args, want):
    assert moment_brute(*args, table=table) == want


def test_moment_query_normalizes(table):
    q = MomentQuery(2, -2, 3, 2)
    assert q.m == 1
    assert moment_query(q, table) == 3
    for bad in ((0, 0, 0, 1), (0, 0, 1, 0), (-1, 0, 1, 1)):
        with pytest.raises(ValueError):
            MomentQuery(*bad)


def test_moment_needs_table_precision():
    from hcn.hurwitz import build_table
    with pytest.raises(PrecisionError):
        moment_brute(0, 0, 1, 30, build_table(100))


def test_symmetry_and_partition(table):
    for n in range(1, 200):
        for M in (1, 2, 3, 4, 5, 7):
            for m in range(M):
                for kappa in (0, 1, 2, 3):
                    a = moment_brute(kappa, m, M, n, table)
                    b = moment_brute(kappa, M - m, M, n, table)
                    assert a == (b if kappa % 2 == 0 else -b)
            for kappa in (0, 2):
                parts = sum(moment_brute(kappa, m, M, n, table) for m in range(M))
                assert parts == moment_brute(kappa, 0, 1, n, table)


def test_decomposition_mod_three(table):
    for n in range(1, 500):
        for kappa in (0, 2):
            assert moment_brute(kappa, 0, 1, n, table) == (moment_brute(kappa, 0, 3, n, table)
                                                           + 2 * moment_brute(kappa, 1, 3, n, table))


def test_zeroth_moment_all_n(table):
    for n in range(1, 2001):
        assert moment_brute(0, 0, 1, n, table) == 2 * divisor_sum(n) - min_divisor_sum(n)
        assert zeroth_moment_all(n) == 2 * divisor_sum(n) - min_divisor_sum(n)


@pytest.mark.parametrize("args, want", [((1, 0, 3, 12), 0), ((1, 0, 3, 36), 6), ((3, 1, 3, 16), 40)])
def test_lambda_examples(args, want):
    assert lambda_direct(*args) == want


def _lambda_naive(ell, m, M, n):
    total = Fraction(0)
    for t in range(0, n + 1):
        for s in range(0, t):
            if t * t - s * s == n:
                hits = ((t - m) % M == 0) + ((t + m) % M == 0)
                w = Fraction((t - s) ** ell)
                total += hits * (w / 2 if s == 0 else w)
    return total


def test_lambda_direct_against_double_loop():
    for n in range(1, 150):
        for m in range(3):
            assert lambda_direct(3, m, 3, n) == _lambda_naive(3, m, 3, n)
        assert lambda_direct(1, 0, 3, n) == _lambda_naive(1, 0, 3, n)


def test_lambda_closed_examples():
    assert lambda_closed_4n(0, 4) == 0
    assert lambda_closed_4n(1, 4) == 40
    assert lambda_closed_4n(0, 1) == 0
    assert lambda_closed_12n(1) == 0
    assert lambda_closed_12n(3) == 6
    assert lambda_closed_12n(12) == lambda_direct(1, 0, 3, 144) == 24


def test_lambda_closed_forms():
    for n in range(1, 2001):
        for m in range(3):
            assert lambda_closed_4n(m, n) == lambda_direct(3, m, 3, 4 * n)
        assert lambda_closed_12n(n) == lambda_direct(1, 0, 3, 12 * n)


@pytest.mark.parametrize("args, want", [((0, 7, 3), 1), ((1, 5, 2), 5), ((2, 3, 2), 7)])
def test_pk_poly(args, want):
    assert pk_poly(*args) == want


def test_pk_poly_is_taylor_coefficient():
    # 1/(1 - tX + nX^2) expanded by repeated multiplication
    t, n, deg = 3, 5, 8
    coeffs = [0] * (deg + 1)
    base = [1, -t, n]
    inv = [1] + [0] * deg
    for j in range(1, deg + 1):
        inv[j] = -sum(base[i] * inv[j - i] for i in range(1, min(j, 2) + 1))
    coeffs = inv
    assert [pk_poly(j, t, n) for j in range(deg + 1)] == coeffs


def test_bracket_normalizer():
    assert bracket_normalizer(0) == 1
    assert bracket_normalizer(1) == 1
    assert bracket_normalizer(2) == 6
    assert bracket_normalizer(3) == 60


@pytest.mark.parametrize("args, want", [((0, 0, 1, 5), 10), ((1, 0, 3, 1), -1), ((1, 1, 3, 2), 0)])
def test_g_bracket_examples(table, args, want):
    assert g_bracket(*args, table=table) == want


def test_bracket_series_is_prefix_stable(table):
    a = bracket_u4_series(1, 1, 3, 40, table)
    b = bracket_u4_series(1, 1, 3, 400, table)
    assert b.truncate(40) == a


@pytest.mark.parametrize("k, want", [(0, 1), (1, 2), (2, 1), (3, Fraction(1, 3))])
def test_calibration_constants(table, k, want):
    for m, M in ((0, 3), (1, 3), (1, 5), (0, 1)):
        c = calibrate_pk(k, m, M, 50, table)
        assert c.stable
        assert c.constant == want


def test_calibration_reports_taylor_values(table):
    assert g_taylor(0, 0, 1, 5, table) == 10


@pytest.mark.parametrize("args, want", [((0, 3, 1), 0), ((1, 3, 2), 3)])
def test_recursion_examples(table, args, want):
    assert moment_recursion_second(*args, table=table) == want


def test_recursion_matches_brute(table):
    for M in (1, 3, 5):
        for m in range(M):
            for n in range(1, 2001):
                assert moment_recursion_second(m, M, n, table) == moment_brute(2, m, M, n, table)


def test_eta_coefficient():
    assert [eta_coefficient(n) for n in (1, 2, 3, 4, 7)] == [1, 0, 0, -8, 20]
    assert eta_coefficient(3001) == eta_coefficient(3001)


@pytest.mark.parametrize("m, n, want", [(0, 1, Fraction(1, 2)), (1, 2, Fraction(3, 2)), (0, 3, 2)])
def test_closed_zeroth_examples(m, n, want):
    assert closed_zeroth_m3(m, n) == want


@pytest.mark.parametrize("m, n, want", [(0, 1, 0), (1, 2, 3), (0, 3, 6)])
def test_closed_second_examples(m, n, want):
    assert closed_second_m3(m, n) == want


def test_closed_m3_against_brute(table):
    for n in range(1, 2001):
        for m in range(3):
            assert closed_zeroth_m3(m, n) == moment_brute(0, m, 3, n, table)
            assert closed_second_m3(m, n) == moment_brute(2, m, 3, n, table)


@pytest.mark.parametrize("args, want", [((1, 2, 1), 3), ((0, 2, 2), 18), ((0, 3, 1), 6)])
def test_primepower_examples(args, want):
    assert closed_second_primepower(*args) == want


def test_primepower_remark_on_primes():
    # H_{2,1,3}(p) = p(p+1)/2 for primes p = 2 mod 3
    for p in (2, 5, 11, 17, 23, 29, 41, 47):
        assert closed_second_primepower(1, p, 1) == Fraction(p * (p + 1), 2)


def test_primepower_rejects_bad_input():
    with pytest.raises(ValueError):
        closed_second_primepower(0, 4, 1)
    with pytest.raises(ValueError):
        closed_second_primepower(0, 5, 0)


def test_brown_calkin_all_residues(table):
    from hcn.arith import primes_up_to
    for p in primes_up_to(500):
        if p != 5:
            assert moment_brute(0, 1, 5, p, table) == brown_calkin(p)
    with pytest.raises(ValueError):
        brown_calkin(5)


def test_csv_rows(table):
    buf = io.StringIO()
    write_moment_csv(buf, moment_rows(0, 4, 3, [1, 2, 3], table))
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,m,M,kappa,value_num,value_den"
    # H_{1,3}(1) = H(3) + H(0) = 1/4
    assert lines[1] == "1,1,3,0,1,4"
    for line, n in zip(lines[1:], (1, 2, 3)):
        v = closed_zeroth_m3(1, n)
        assert line == f"{n},1,3,0,{v.numerator},{v.denominator}"

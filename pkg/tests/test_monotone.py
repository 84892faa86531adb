import math
from fractions import Fraction as F

import pytest

from stsolve.monotone import (
    ENDPOINT,
    BandRational,
    clausen_terminating_check,
    gegenbauer32_poly,
    gegenbauer_recurrence_check,
    legendre_poly,
    rkl1_coefficient_formula,
    scheme_band,
    stencil_of_poly,
    verify_monotone,
)


def test_legendre_and_gegenbauer_polynomials():
    assert legendre_poly(2).coeffs == (F(-1, 2), F(0), F(3, 2))
    assert gegenbauer32_poly(1).coeffs == (F(0), F(3))
    assert gegenbauer32_poly(2).coeffs == (F(-3, 2), F(0), F(15, 2))
    # C_s^{(3/2)}(1) = (s+1)(s+2)/2
    for s in range(0, 11):
        assert gegenbauer32_poly(s)(F(1)) == F((s + 1) * (s + 2), 2)
    # P_s(1) = 1
    for s in range(0, 16):
        assert legendre_poly(s)(F(1)) == 1


def test_stencil_forward_euler():
    band = stencil_of_poly(legendre_poly(1), F(1, 4))
    assert band.coeffs == (F(1, 4), F(1, 2), F(1, 4))


def test_stencil_p2_at_endpoint():
    # argument 1 + (c/3) T at c = 3/2 gives the exact zero off-diagonal
    band = stencil_of_poly(legendre_poly(2), F(1, 2))
    assert band.coeffs == (F(3, 8), F(0), F(1, 4), F(0), F(3, 8))
    assert band.total() == 1


def test_stencil_constant_poly():
    from stsolve.monotone import RationalPoly

    band = stencil_of_poly(RationalPoly((F(1),)), F(1, 3))
    assert band.coeffs == (F(1),)


def test_band_symmetry_enforced():
    with pytest.raises(ValueError):
        BandRational((F(1), F(0), F(2)))


def test_rkl1_formula_single_term_at_j_equals_s():
    for s in (1, 3, 6):
        x = F(1, 5)
        want = F(math.comb(2 * s, s)) * x**s
        assert rkl1_coefficient_formula(s, s, x) == want


def test_rkl1_formula_center_s2():
    # s=2, j=0, x = c/6 must equal the center coefficient (1-c)^2
    c = F(3, 4)
    x = c / 6
    got = rkl1_coefficient_formula(2, 0, x)
    assert got == (1 - c) ** 2


def test_rkl1_formula_matches_stencil_all_s_through_12():
    for s in range(1, 13):
        poly = legendre_poly(s)
        for x in (F(1, 16), F(1, 8), F(1, 4), F(1, 5), F(3, 16)):
            band = stencil_of_poly(poly, 2 * x)
            for j in range(0, s + 1):
                assert rkl1_coefficient_formula(s, j, x) == band.coef(j), (s, j, x)


def test_rkl1_formula_rejects_bad_offset():
    with pytest.raises(ValueError):
        rkl1_coefficient_formula(3, 4, F(1, 8))


@pytest.mark.parametrize("family", ["rkl1", "rkl2", "rkg1", "rkg2"])
def test_verify_monotone_in_range(family):
    for s in (1, 2, 3, 5, 9, 16):
        cert = verify_monotone(family, s, [F(1, 16), F(1, 8), ENDPOINT])
        assert cert.ok, (family, s, cert.violations)
        for sample in cert.samples:
            assert sample.coefficient_sum == 1


def test_verify_monotone_endpoint_hits_exact_zero():
    # forward Euler at CFL 1/2: center coefficient exactly zero
    cert = verify_monotone("rkl1", 1, [ENDPOINT])
    assert cert.samples[0].min_coefficient == 0
    # s=2 endpoint: offset-1 coefficient exactly zero
    cert = verify_monotone("rkl1", 2, [ENDPOINT])
    assert cert.samples[0].min_coefficient == 0
    assert abs(cert.samples[0].min_offset) == 1


def test_verify_monotone_counterexample_beyond_range():
    cert = verify_monotone("rkl1", 2, [F(17, 64)])
    assert not cert.ok
    bad = cert.violations[0]
    assert bad.min_coefficient < 0
    assert abs(bad.min_offset) == 1


def test_rkg1_s2_full_band_nonnegative():
    # exact expansion of (2/12) C_2^{(3/2)}(1 + w T) at the endpoint w = 1/2
    band = scheme_band("rkg1", 2, ENDPOINT)
    assert band.total() == 1
    assert min(band.coeffs) >= 0


def test_rkl2_band_is_blend_of_identity_and_legendre_band():
    s = 6
    x = F(1, 8)
    b = F(s * s + s - 2, 2 * s * (s + 1))
    inner = stencil_of_poly(legendre_poly(s), 2 * x)
    full = scheme_band("rkl2", s, x)
    for j in range(-s, s + 1):
        want = b * inner.coef(j) + (1 - b if j == 0 else 0)
        assert full.coef(j) == want
    assert 0 < b <= F(1, 2)


def test_clausen_terminating_examples():
    assert clausen_terminating_check(4, 0, F(1, 5))
    assert clausen_terminating_check(6, 2, F(1, 8))
    for s in (2, 5, 9):
        assert clausen_terminating_check(s, s, F(1, 8))  # j = s degenerate


def test_clausen_rejects_odd_difference():
    with pytest.raises(ValueError):
        clausen_terminating_check(3, 0, F(1, 8))


def test_gegenbauer_recurrence_small_cases():
    # s=1: C_1 = 3z equals z*1 + 2*z
    assert gegenbauer_recurrence_check(2)


def test_gegenbauer_recurrence_deep():
    assert gegenbauer_recurrence_check(64)


def test_certificate_serialization():
    cert = verify_monotone("rkl2", 4, [F(1, 8)])
    d = cert.to_dict()
    assert d["family"] == "rkl2" and d["s"] == 4 and d["ok"]
    assert d["samples"][0]["coefficient_sum"] == "1"

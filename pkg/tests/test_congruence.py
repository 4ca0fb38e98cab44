import pytest

from partmod4.congruence import (NotQualifyingError, discriminants_receiving, gauss_sum,
                                 gauss_sum_check, gauss_sum_report, logderiv_series,
                                 normalized_series, twisted_series, verify_theorem1)
from partmod4.exact_arith import Ring, kronecker
from partmod4.hilbert import hilbert_mod
from partmod4.mock_theta import r_components, r_components_fast
from partmod4.qseries import PrecisionError, delta_series, j_series, partition_table


def naive_twisted(D, N):
    p = partition_table(D * N * N // 24 + 1)
    out = [0] * (N + 1)
    for m in range(1, N + 1):
        if (D * m * m + 1) % 24:
            continue
        for n in range(1, N // m + 1):
            out[m * n] += kronecker(-D, n) * kronecker(12, m) * p[(D * m * m + 1) // 24]
    return out


def test_twisted_examples():
    s = twisted_series(23, 30, Ring.INTEGERS).series
    assert s[1] == 1 and s[2] == 1
    assert s.coefficients(0, 30) == naive_twisted(23, 30)


def test_twisted_mod4_reduces_integer_series():
    a = twisted_series(47, 40, Ring.INTEGERS).series.reduce(Ring.MOD4)
    assert a == twisted_series(47, 40, Ring.MOD4).series


def test_logderiv_examples():
    comps = r_components(23 * 20 * 20, Ring.INTEGERS)
    s = logderiv_series(23, 20, Ring.INTEGERS, comps).series
    assert s[1] == 1
    # over Z the two series differ, but not modulo 4
    assert s.reduce(Ring.MOD4).first_difference(twisted_series(23, 20).series, 20) is None


def test_logderiv_needs_enough_components():
    with pytest.raises(PrecisionError):
        logderiv_series(23, 10, Ring.MOD4, r_components_fast(100))


def test_support_on_m_coprime_to_6():
    comps = r_components_fast(23 * 120 * 120)
    for s in (twisted_series(23, 120).series, logderiv_series(23, 120, Ring.MOD4, comps).series):
        for e in s.terms():
            # some divisor m of e with (m, 6) = 1 and e/m coprime to 23
            assert any(e % m == 0 and m % 2 and m % 3 and (e // m) % 23 for m in range(1, e + 1))


@pytest.mark.parametrize("D", [23, 47])
def test_theorem1_definition_path(D):
    report = verify_theorem1(D, 100, source="definition")
    assert report.first_mismatch is None and report.status == "ok" and report.checked == 100


def test_theorem1_composite_d():
    assert verify_theorem1(95, 200).first_mismatch is None


def test_theorem1_fault_injection():
    comps = r_components_fast(23 * 60 * 60)
    bad = comps.with_override(7, 23 * 49, comps.coefficient(7, 23 * 49) + 1)
    report = verify_theorem1(23, 60, components=bad)
    assert report.first_mismatch == 7
    assert report.to_json() == {"D": 23, "N": 60, "ring": "mod4", "status": "mismatch",
                              "first_mismatch": 7, "source": "supplied"}


def test_not_qualifying():
    for D in (24, 19, 23 * 25, 1):
        with pytest.raises(NotQualifyingError):
            twisted_series(D, 10)


def test_normalized_valuation_and_j_route():
    D, h_S, N = 23, 3, 200
    H = hilbert_mod(D)
    norm = normalized_series(D, h_S, N, H).series
    assert norm.valuation >= 1 + h_S - 3
    # second route: P * Delta^h_S * H(j), using j = E4^3/Delta
    M = N + 5
    j = j_series(M, Ring.MOD4)
    hj = sum((j**k * c for k, c in enumerate(H) if c), start=j * 0)
    other = twisted_series(D, M).series * delta_series(M + h_S, Ring.MOD4) ** h_S * hj
    assert norm.first_difference(other, N) is None


def test_normalized_degenerate_polynomial():
    norm = normalized_series(23, 3, 100, (0, 1)).series
    expect = twisted_series(23, 100).series * delta_series(100, Ring.MOD4) ** 2
    assert norm.first_difference(expect, 100) is None


def test_normalized_rejects_small_h():
    with pytest.raises(ValueError):
        normalized_series(47, 3, 50)


def test_gauss_sums():
    assert gauss_sum_check(23)
    assert abs(gauss_sum(23, 23)) < 1e-20
    report = gauss_sum_report(95)
    assert report.ok and report.norm_error < 1e-9 * 95
    assert report.sign == -1


def test_each_partition_number_in_one_series():
    for n0 in range(1, 501):
        assert len(discriminants_receiving(n0)) == 1

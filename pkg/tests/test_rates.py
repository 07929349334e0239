import math

import numpy as np
import pytest

from akmc import (
    BadCurvature,
    PathwayInfo,
    RateTable,
    build_test_system,
    eyring_kramers,
    harmonic_prefactor,
    modified_arrhenius,
    rate_table_from_basin,
)


def _info(barrier=0.25, lam=-1.0, curv_min=2.0):
    return PathwayInfo(label=1, saddle=1.0, barrier=barrier,
                       curvature_at_saddle=lam, curvature_at_min=curv_min)


def test_eyring_kramers_closed_form():
    # (|lam|/pi) * sqrt(|curv_min/lam|) * exp(-beta*barrier), evaluated by hand
    expected = (1.0 / math.pi) * math.sqrt(2.0) * math.exp(-1.0)
    assert eyring_kramers(_info(), beta=4.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.1656, abs=5e-4)


def test_zero_beta_gives_prefactor():
    info = _info()
    g = harmonic_prefactor(info.curvature_at_saddle, info.curvature_at_min, info.curvature_at_saddle)
    assert eyring_kramers(info, beta=0.0) == pytest.approx(g, rel=1e-15)


def test_doubling_beta_squares_boltzmann_factor():
    info = _info(barrier=0.7, lam=-2.0, curv_min=1.5)
    g = eyring_kramers(info, beta=0.0)
    for beta in (0.5, 1.0, 3.0):
        assert eyring_kramers(info, 2.0 * beta) / g == pytest.approx(
            (eyring_kramers(info, beta) / g) ** 2, rel=1e-12
        )


def test_eyring_kramers_monotone_in_beta_and_barrier():
    betas = np.linspace(0.5, 12.0, 24)
    rates = [eyring_kramers(_info(), b) for b in betas]
    assert all(r1 > r2 for r1, r2 in zip(rates, rates[1:]))
    barriers = np.linspace(0.1, 2.0, 20)
    rates_b = [eyring_kramers(_info(barrier=h), 3.0) for h in barriers]
    assert all(r1 > r2 for r1, r2 in zip(rates_b, rates_b[1:]))


def test_lower_barrier_dominates(testbed):
    # below beta ~ 0.74 the larger saddle curvature of the high barrier wins
    # through the prefactor; from beta = 1 on the Boltzmann factor dominates
    _, basin, _ = testbed
    low, high = basin.pathways[1], basin.pathways[0]
    assert low.barrier < high.barrier
    for beta in (1.0, 2.5, 5.0, 10.0, 40.0):
        assert eyring_kramers(low, beta) > eyring_kramers(high, beta)


def test_bad_curvature_rejected():
    with pytest.raises(BadCurvature):
        harmonic_prefactor(1.0, 2.0, 1.0)
    with pytest.raises(BadCurvature):
        harmonic_prefactor(-1.0, -2.0, -1.0)
    with pytest.raises(BadCurvature):
        harmonic_prefactor(-1.0, 2.0, 0.0)


def test_modified_arrhenius_values():
    assert modified_arrhenius(1.0, 1.0, 2.5, 10.0, 0.0) == pytest.approx(
        math.exp(-2.5), rel=1e-15
    )
    assert math.exp(-2.5) == pytest.approx(0.0820850, abs=1e-7)
    # n = 0 recovers the unmodified rate for any prefactor/barrier
    for g, barrier in ((0.3, 0.5), (2.0, 1.7)):
        assert modified_arrhenius(g, barrier, 2.5, 10.0, 0.0) == pytest.approx(
            g * math.exp(-2.5 * barrier), rel=1e-15
        )
    # ratio beta_lo/beta_hi = 4 and n = 1/2 doubles the rate exactly
    assert modified_arrhenius(1.0, 1.0, 2.5, 10.0, 0.5) == pytest.approx(
        2.0 * modified_arrhenius(1.0, 1.0, 2.5, 10.0, 0.0), rel=1e-15
    )


def test_test_system_barrier_ladder():
    rt = build_test_system(0.0)
    assert rt.n_pathways == 20
    assert rt.barriers[0] == pytest.approx(1.0, abs=1e-15)
    assert rt.barriers[19] == pytest.approx(5.0, abs=1e-12)
    assert np.allclose(np.diff(rt.barriers), 4.0 / 19.0)
    assert rt.beta_hi == 2.5 and rt.beta_lo == 10.0


def test_test_system_kappa_matches_k_hi_at_n_zero():
    rt = build_test_system(0.0)
    np.testing.assert_allclose(rt.kappa, rt.k_hi, rtol=1e-15)


def test_test_system_k_lo_strictly_decreasing():
    rt = build_test_system(0.0)
    assert np.all(np.diff(rt.k_lo) < 0.0)


@pytest.mark.parametrize("n", [-0.5, 0.5, 1.3])
def test_test_system_deviation_scaling(n):
    base = build_test_system(0.0)
    rt = build_test_system(n)
    np.testing.assert_allclose(rt.kappa / base.kappa, 4.0**n, rtol=1e-12)


def test_rate_table_total_and_validation():
    rt = build_test_system(0.0)
    assert rt.total_k_lo == pytest.approx(float(np.exp(-10.0 * rt.barriers).sum()), rel=1e-15)
    with pytest.raises(ValueError):
        RateTable(barriers=[1.0], k_lo=[1.0], k_hi=[1.0], beta_lo=1.0, beta_hi=2.0)
    with pytest.raises(ValueError):
        RateTable(barriers=[1.0], k_lo=[-1.0], k_hi=[1.0], beta_lo=10.0, beta_hi=2.5)


def test_rate_table_from_basin(testbed):
    _, basin, rt = testbed
    assert rt.kappa is None
    assert rt.n_pathways == 2
    for j, pw in enumerate(basin.pathways):
        assert rt.k_lo[j] == pytest.approx(eyring_kramers(pw, 10.0), rel=1e-15)
        assert rt.k_hi[j] == pytest.approx(eyring_kramers(pw, 2.5), rel=1e-15)


def test_rate_table_csv_schema(tmp_path):
    rt = build_test_system(0.5)
    path = tmp_path / "rates.csv"
    rt.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "pathway,barrier,k_lo,k_hi,kappa"
    assert len(lines) == 21
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[1]) == 1.0
    assert float(first[4]) == pytest.approx(2.0 * math.exp(-2.5), rel=1e-15)

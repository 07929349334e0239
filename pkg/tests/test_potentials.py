import math

import numpy as np
import pytest

from akmc import (
    Basin,
    DoubleWell,
    InsideBasin,
    NoConvergence,
    PathwayInfo,
    QuadraticWell,
    TwoSaddle,
    WrongSignature,
    classify_exit,
    make_potential,
    stationary_points,
)
from akmc.potentials import refine_stationary_point

from _oracles import central_first_diff, central_second_diff

ALL_FAMILIES = [DoubleWell(), TwoSaddle(c=0.2), TwoSaddle(c=0.0), TwoSaddle(c=0.5), QuadraticWell(omega=2.0)]


def test_double_well_values():
    p = DoubleWell()
    assert p.evaluate(1.0) == pytest.approx(-0.25, abs=1e-15)
    assert p.gradient(0.0) == 0.0
    assert p.gradient(2.0) == pytest.approx(6.0, abs=1e-12)
    assert p.hessian(1.0) == pytest.approx(2.0, abs=1e-12)
    assert p.hessian(0.0) == pytest.approx(-1.0, abs=1e-12)


def test_two_saddle_normalized_at_origin():
    assert TwoSaddle(c=0.2).evaluate(0.0) == 0.0
    assert TwoSaddle(c=0.7).evaluate(0.0) == 0.0


@pytest.mark.parametrize("potential", ALL_FAMILIES, ids=lambda p: f"{p.kind}-{p.parameters()}")
def test_derivatives_match_finite_differences(potential):
    grid = np.linspace(-2.0, 2.0, 101)
    for x in grid:
        g = potential.gradient(x)
        g_fd = central_first_diff(potential.evaluate, x, h=1e-5)
        assert g == pytest.approx(g_fd, abs=1e-6, rel=1e-5)
        h = potential.hessian(x)
        h_fd = central_second_diff(potential.evaluate, x, h=1e-4)
        assert h == pytest.approx(h_fd, abs=1e-5, rel=1e-5)


def test_drift_coefficients_consistent_with_gradient():
    for potential in ALL_FAMILIES:
        d0, d1, d2, d3 = potential.drift_coefficients()
        for x in np.linspace(-1.7, 1.7, 23):
            drift = d0 + x * (d1 + x * (d2 + x * d3))
            assert drift == pytest.approx(-potential.gradient(x), abs=1e-12)


def test_stationary_points_two_saddle_against_quadratic_formula():
    c = 0.2
    basin = stationary_points(TwoSaddle(c=c), (-4.0, 4.0))
    disc = math.sqrt(c * c + 4.0)
    x_left = (-c - disc) / 2.0
    x_right = (-c + disc) / 2.0
    assert basin.minimum == pytest.approx(0.0, abs=1e-12)
    assert basin.a == pytest.approx(x_left, abs=1e-12)
    assert basin.b == pytest.approx(x_right, abs=1e-12)
    assert x_right == pytest.approx(0.905, abs=1e-3)
    assert x_left == pytest.approx(-1.105, abs=1e-3)
    assert [p.label for p in basin.pathways] == [1, 2]


def test_stationary_points_symmetric_case():
    basin = stationary_points(TwoSaddle(c=0.0), (-4.0, 4.0))
    assert basin.a == pytest.approx(-1.0, abs=1e-14)
    assert basin.b == pytest.approx(1.0, abs=1e-14)


def test_barrier_matches_reevaluation(testbed):
    potential, basin, _ = testbed
    for pw in basin.pathways:
        recomputed = potential.evaluate(pw.saddle) - potential.evaluate(basin.minimum)
        assert pw.barrier == pytest.approx(recomputed, abs=1e-14)


@pytest.mark.parametrize("c", [0.0, 0.2, 0.5])
def test_stationary_point_quality(c):
    potential = TwoSaddle(c=c)
    basin = stationary_points(potential, (-4.0, 4.0))
    assert abs(potential.gradient(basin.minimum)) <= 1e-10
    assert potential.hessian(basin.minimum) > 0.0
    for pw in basin.pathways:
        assert abs(potential.gradient(pw.saddle)) <= 1e-10
        assert potential.hessian(pw.saddle) < 0.0
        assert pw.barrier > 0.0


def test_double_well_half_line_basin():
    basin = stationary_points(DoubleWell(), (-0.5, 3.0))
    assert basin.minimum == pytest.approx(1.0, abs=1e-12)
    assert basin.a == pytest.approx(0.0, abs=1e-12)
    assert basin.b == math.inf
    assert len(basin.pathways) == 1
    assert basin.pathways[0].label == 1
    assert classify_exit(basin, -0.2) == 1


def test_stationary_points_rejects_bad_intervals():
    with pytest.raises(ValueError):
        stationary_points(DoubleWell(), (-2.0, 2.0))  # two minima
    with pytest.raises(ValueError):
        stationary_points(QuadraticWell(), (-1.0, 1.0))  # no saddle
    with pytest.raises(ValueError):
        stationary_points(TwoSaddle(), (3.0, 1.0))  # empty interval


def test_classify_exit_labels(testbed):
    _, basin, _ = testbed
    assert classify_exit(basin, basin.a - 0.01) == 1
    assert classify_exit(basin, basin.b + 0.01) == 2
    assert classify_exit(basin, basin.a) == 1
    assert classify_exit(basin, basin.b) == 2
    with pytest.raises(InsideBasin):
        classify_exit(basin, basin.minimum)


def test_classify_exit_total_outside(testbed):
    _, basin, _ = testbed
    labels = {p.label for p in basin.pathways}
    for x in np.linspace(-8.0, 8.0, 400):
        if basin.contains(x):
            continue
        assert classify_exit(basin, x) in labels


def test_newton_no_convergence():
    with pytest.raises(NoConvergence):
        refine_stationary_point(TwoSaddle(), 50.0, max_iter=1)


def test_newton_rejects_flat_curvature():
    # V'' vanishes at x = +-1/sqrt(3) for the double well
    with pytest.raises(NoConvergence):
        refine_stationary_point(DoubleWell(), 1.0 / math.sqrt(3.0), max_iter=1)


def test_pathway_info_sign_validation():
    with pytest.raises(WrongSignature):
        PathwayInfo(label=1, saddle=1.0, barrier=-1.0, curvature_at_saddle=-1.0, curvature_at_min=1.0)
    with pytest.raises(WrongSignature):
        PathwayInfo(label=1, saddle=1.0, barrier=1.0, curvature_at_saddle=0.5, curvature_at_min=1.0)
    with pytest.raises(WrongSignature):
        PathwayInfo(label=1, saddle=1.0, barrier=1.0, curvature_at_saddle=-1.0, curvature_at_min=-2.0)


def test_basin_ordering_validated():
    pw = PathwayInfo(label=1, saddle=0.0, barrier=1.0, curvature_at_saddle=-1.0, curvature_at_min=1.0)
    with pytest.raises(WrongSignature):
        Basin(a=1.0, b=0.5, minimum=0.7, pathways=(pw,))


def test_make_potential():
    assert make_potential("two-saddle", c=0.3) == TwoSaddle(c=0.3)
    assert make_potential("double-well") == DoubleWell()
    with pytest.raises(ValueError):
        make_potential("lennard-jones")

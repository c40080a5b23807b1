import math

import numpy as np
import pytest

from fvdsr import (
    BarrierConfig,
    DeformationModel,
    GridSpec,
    GridTooCoarse,
    GridTooNarrow,
    OscillatorConfig,
    WellConfig,
    barrier_t_ode,
    barrier_transmission,
    oscillator_eigen_fd,
    perturbation_order_check,
    resonance_energies,
    well_eigen_fd,
)

OMEGA_1 = 3.296908309475615
BARRIER_T_SR_15 = 3.667806572256082e-3  # closed form at m=1, V0=2, a=4, E=1.5

WELL = WellConfig(1.0, 1.0, 8)
WELL_GRID = GridSpec(0.0, 1.0, 2001)
BARRIER = BarrierConfig(1.0, 2.0, 4.0)


def osc_grid(count: int, points: int = 2001) -> GridSpec:
    half = math.sqrt(2.0 * count + 1.0) + 5.0
    return GridSpec(-half, half, points)


class TestGridSpec:
    def test_minimum_points(self):
        with pytest.raises(ValueError):
            GridSpec(0.0, 1.0, 32)

    def test_ordering(self):
        with pytest.raises(ValueError):
            GridSpec(1.0, 0.0, 100)


class TestWellEigen:
    def test_matches_closed_form(self):
        vals = well_eigen_fd(WELL, WELL_GRID, 3)
        for n, v in enumerate(vals, start=1):
            assert v == pytest.approx(WELL.omega_n(n), abs=1e-5)

    def test_ground_level_value(self):
        assert well_eigen_fd(WELL, WELL_GRID, 1)[0] == pytest.approx(OMEGA_1, abs=1e-5)

    def test_empty_request(self):
        assert well_eigen_fd(WELL, WELL_GRID, 0) == []

    def test_massless_limit(self):
        cfg = WellConfig(0.0, 1.0, 4)
        assert well_eigen_fd(cfg, WELL_GRID, 1)[0] == pytest.approx(math.pi, abs=1e-5)

    def test_h_halving_reduces_error_4x(self):
        exact = WELL.omega_n(1)
        coarse = abs(well_eigen_fd(WELL, GridSpec(0.0, 1.0, 1001), 1)[0] - exact)
        fine = abs(well_eigen_fd(WELL, GridSpec(0.0, 1.0, 2001), 1)[0] - exact)
        assert 3.5 <= coarse / fine <= 4.5

    def test_grid_too_coarse(self):
        with pytest.raises(GridTooCoarse):
            well_eigen_fd(WELL, GridSpec(0.0, 1.0, 65), 5)

    def test_grid_span_enforced(self):
        with pytest.raises(ValueError):
            well_eigen_fd(WELL, GridSpec(0.0, 2.0, 2001), 1)


class TestOscillatorEigen:
    def test_ground_level(self):
        cfg = OscillatorConfig(1.0, 1.0, 4)
        vals = oscillator_eigen_fd(cfg, osc_grid(1), 1)
        assert vals[0] == pytest.approx(math.sqrt(2), abs=1e-5)

    def test_first_three_levels(self):
        cfg = OscillatorConfig(1.0, 1.0, 4)
        vals = oscillator_eigen_fd(cfg, osc_grid(3), 3)
        for v, expected in zip(vals, (math.sqrt(2), 2.0, math.sqrt(6))):
            assert v == pytest.approx(expected, abs=1e-5)

    def test_frequency_scaling(self):
        cfg = OscillatorConfig(1.0, 2.0, 2)
        vals = oscillator_eigen_fd(cfg, osc_grid(2), 1)
        assert vals[0] == pytest.approx(math.sqrt(3), abs=1e-5)

    def test_grid_too_narrow(self):
        cfg = OscillatorConfig(1.0, 1.0, 8)
        with pytest.raises(GridTooNarrow):
            oscillator_eigen_fd(cfg, GridSpec(-2.0, 2.0, 2001), 8)


class TestBarrierOde:
    def test_deep_tunneling_point(self):
        t = barrier_t_ode(BARRIER, DeformationModel.sr(), 1.5)
        assert t == pytest.approx(BARRIER_T_SR_15, rel=1e-6)

    def test_free_propagation(self):
        free = BarrierConfig(1.0, 0.0, 4.0)
        t = barrier_t_ode(free, DeformationModel.sr(), 1.5)
        assert t == pytest.approx(1.0, abs=1e-10)

    def test_unit_transmission_at_resonance(self):
        e_res = resonance_energies(BARRIER, DeformationModel.sr(), 1)[0]
        t = barrier_t_ode(BARRIER, DeformationModel.sr(), e_res)
        assert t == pytest.approx(1.0, abs=1e-6)

    def test_batch_matches_scalar(self):
        es = np.array([1.5, 2.5, 4.0])
        batch = barrier_t_ode(BARRIER, DeformationModel.sr(), es)
        singles = [barrier_t_ode(BARRIER, DeformationModel.sr(), float(e)) for e in es]
        assert np.allclose(batch, singles, rtol=1e-7)

    def test_agrees_with_closed_form_deformed(self):
        for model in (DeformationModel.dsr(0.06), DeformationModel.gdsr(0.06)):
            for e in (1.5, 2.2, 5.0):
                closed = barrier_transmission(BARRIER, model, e).t_coef
                assert barrier_t_ode(BARRIER, model, e) == pytest.approx(closed, rel=1e-6)

    def test_rejects_non_propagating(self):
        with pytest.raises(ValueError):
            barrier_t_ode(BARRIER, DeformationModel.sr(), 0.5)


class TestOrderCheck:
    LPS = (0.04, 0.02, 0.01, 0.005)

    def test_degenerate_flag(self):
        fit = perturbation_order_check(lambda l: 1.0 + l, lambda l: 1.0 + l, self.LPS)
        assert fit.degenerate and math.isnan(fit.exponent)

    def test_well_rational_first_order(self):
        fit = perturbation_order_check(
            lambda l: OMEGA_1 / (1 + l * OMEGA_1),
            lambda l: OMEGA_1 * (1 - l * OMEGA_1),
            self.LPS,
        )
        assert not fit.degenerate and 1.8 <= fit.exponent <= 2.2

    def test_oscillator_polynomial_first_order(self):
        e0 = math.sqrt(2)
        fit = perturbation_order_check(
            lambda l: 2 * e0 / (1 + math.sqrt(1 + 4 * l * e0)),
            lambda l: e0 * (1 - l * e0),
            self.LPS,
        )
        assert not fit.degenerate and 1.8 <= fit.exponent <= 2.2

    def test_requires_geometric_list(self):
        with pytest.raises(ValueError):
            perturbation_order_check(lambda l: l, lambda l: 0.0, (0.04, 0.02, 0.015))

    def test_requires_three_entries(self):
        with pytest.raises(ValueError):
            perturbation_order_check(lambda l: l, lambda l: 0.0, (0.04, 0.02))

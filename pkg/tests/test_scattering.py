import cmath
import math

import numpy as np
import pytest

from fvdsr import (
    BarrierConfig,
    DeformationModel,
    FvSpinor,
    NoBracket,
    Regime,
    RegimeFlag,
    StepConfig,
    barrier_transmission,
    effective_energy,
    fv_current,
    resonance_energies,
    rt_scan,
    step_coefficients,
    supercritical_threshold,
)
from fvdsr.scattering import SCAN_CSV_HEADER, scan_csv_rows

# independently recomputed anchors
BARRIER_T_SR_15 = 3.667806572256082e-3
STEP_R_SR_16 = 68.54541113134331  # ((k+|q|)/(k-|q|))^2 at m=1, V0=3, E=1.6
THRESHOLD_DSR_02 = 0.9795918367346939  # 2 - 1/(1 - 0.02)
THRESHOLD_GDSR_02 = 0.9791576165635985  # 2 + (-1 + sqrt(0.92))/0.04
RESONANCES_SR = (3.271554275313518, 3.862095889118587, 4.559619595879974)

BARRIER = BarrierConfig(1.0, 2.0, 4.0)
STEP = StepConfig(1.0, 2.0)
KLEIN_STEP = StepConfig(1.0, 3.0)


class TestBarrier:
    def test_deep_tunneling_point(self):
        pt = barrier_transmission(BARRIER, DeformationModel.sr(), 1.5)
        assert pt.flag is RegimeFlag.TUNNELING
        assert pt.inner_value == pytest.approx(math.sqrt(0.75), rel=1e-14)
        assert pt.t_coef == pytest.approx(BARRIER_T_SR_15, rel=1e-12)
        assert pt.r_coef == pytest.approx(1 - BARRIER_T_SR_15, rel=1e-12)

    def test_undeformed_limit_bitwise(self):
        grid = np.linspace(1.05, 9.95, 40)
        sr_pts = rt_scan(BARRIER, DeformationModel.sr(), grid)
        for model in (DeformationModel.dsr(0.0), DeformationModel.gdsr(0.0)):
            for a, b in zip(rt_scan(BARRIER, model, grid), sr_pts):
                assert a.t_coef == b.t_coef and a.r_coef == b.r_coef

    def test_resonance_gives_unit_transmission(self):
        e_res = resonance_energies(BARRIER, DeformationModel.sr(), 1)[0]
        pt = barrier_transmission(BARRIER, DeformationModel.sr(), e_res)
        assert pt.flag is RegimeFlag.ABOVE_BARRIER
        assert pt.t_coef == pytest.approx(1.0, rel=1e-12)

    def test_deformed_tunneling_moves_with_l_p(self):
        t_sr = barrier_transmission(BARRIER, DeformationModel.sr(), 1.5).t_coef
        t_dsr = barrier_transmission(BARRIER, DeformationModel.dsr(0.06), 1.5).t_coef
        assert t_dsr != t_sr and 0 < t_dsr < 1

    def test_non_propagating_incidence_flagged(self):
        pt = barrier_transmission(BARRIER, DeformationModel.sr(), 0.5)
        assert pt.flag is RegimeFlag.NON_PROPAGATING_INCIDENCE
        assert math.isnan(pt.t_coef) and math.isnan(pt.r_coef)

    def test_map_invalid_flagged(self):
        pt = barrier_transmission(BARRIER, DeformationModel.dsr(0.06), 20.0)
        assert pt.flag is RegimeFlag.MAP_INVALID

    def test_evanescent_monotonicity_in_width(self):
        # kappa a >= 2 here; sinh^2 suppression is monotone in the width
        widths = (4.0, 5.0, 6.0, 8.0)
        ts = [
            barrier_transmission(BarrierConfig(1.0, 2.0, a), DeformationModel.sr(), 1.5).t_coef
            for a in widths
        ]
        assert all(b < a for a, b in zip(ts, ts[1:]))

    def test_continuity_at_barrier_top(self):
        eps = 1e-4
        e_below = 2.0 + math.sqrt(1.0 - eps * eps)  # kappa = eps
        e_above = 2.0 + math.sqrt(1.0 + eps * eps)  # q = eps
        t_below = barrier_transmission(BARRIER, DeformationModel.sr(), e_below).t_coef
        t_above = barrier_transmission(BARRIER, DeformationModel.sr(), e_above).t_coef
        assert abs(t_below - t_above) <= 1e-8

    def test_exact_top_uses_common_limit(self):
        pt = barrier_transmission(BARRIER, DeformationModel.sr(), 3.0)
        k2 = 3.0**2 - 1.0
        assert pt.t_coef == pytest.approx(1.0 / (1.0 + k2 * 16.0 / 4.0), rel=1e-12)


class TestStep:
    def test_near_transparent_interface(self):
        pt = step_coefficients(StepConfig(1.0, 1e-12), DeformationModel.sr(), 4.0)
        assert pt.r_coef == pytest.approx(0.0, abs=1e-24)
        assert pt.t_coef == pytest.approx(1.0, rel=1e-12)

    def test_total_reflection_when_evanescent(self):
        pt = step_coefficients(STEP, DeformationModel.sr(), 1.5)
        assert pt.flag is RegimeFlag.TUNNELING
        assert pt.r_coef == 1.0 and pt.t_coef == 0.0

    def test_subcritical_partition(self):
        pt = step_coefficients(STEP, DeformationModel.sr(), 4.0)
        k, q = math.sqrt(15.0), math.sqrt(3.0)
        assert pt.flag is RegimeFlag.ABOVE_BARRIER
        assert pt.r_coef == pytest.approx(((k - q) / (k + q)) ** 2, rel=1e-14)
        assert pt.r_coef + pt.t_coef == pytest.approx(1.0, abs=1e-14)

    def test_supercritical_point(self):
        pt = step_coefficients(KLEIN_STEP, DeformationModel.sr(), 1.6)
        assert pt.flag is RegimeFlag.SUPERCRITICAL
        assert pt.r_coef == pytest.approx(STEP_R_SR_16, rel=1e-12)
        assert pt.t_coef == pytest.approx(1.0 - STEP_R_SR_16, rel=1e-12)
        assert pt.r_coef >= 1.0 and pt.t_coef <= 0.0
        assert pt.r_coef + pt.t_coef == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_momenta_reported_nonfinite(self):
        # k = |q| exactly at E = V0/2; coefficients diverge there
        pt = step_coefficients(KLEIN_STEP, DeformationModel.sr(), 1.5)
        assert pt.flag is RegimeFlag.SUPERCRITICAL
        assert not math.isfinite(pt.r_coef)

    def test_supercritical_zone_scan(self):
        grid = [e for e in np.linspace(1.05, 1.95, 19) if abs(e - 1.5) > 1e-9]
        for pt in rt_scan(KLEIN_STEP, DeformationModel.sr(), grid):
            assert pt.flag is RegimeFlag.SUPERCRITICAL
            assert pt.r_coef >= 1.0 and pt.t_coef <= 0.0
            assert abs(pt.r_coef + pt.t_coef - 1.0) <= 1e-12


class TestStepCurrentOracle:
    """Validate the step formulas against the conserved two-component current.

    The matched solution is  e^{ikx} + r e^{-ikx}  on the left and
    t e^{iqx} on the right, with the global energy fixing the spinor
    structure in both regions; R and T must equal the current ratios.
    """

    @staticmethod
    def _mode_current(e, m, amplitude, p, x=0.7):
        phase = amplitude * cmath.exp(1j * p * x)
        up = 0.5 * (1.0 + e / m) * phase
        lo = 0.5 * (1.0 - e / m) * phase
        s = FvSpinor(up, lo)
        ds = FvSpinor(1j * p * up, 1j * p * lo)
        return fv_current(s, ds, m)

    @staticmethod
    def _total_left_current(e, m, r, k, x=-1.3):
        up_f = 0.5 * (1.0 + e / m)
        lo_f = 0.5 * (1.0 - e / m)
        psi = cmath.exp(1j * k * x) + r * cmath.exp(-1j * k * x)
        dpsi = 1j * k * (cmath.exp(1j * k * x) - r * cmath.exp(-1j * k * x))
        s = FvSpinor(up_f * psi, lo_f * psi)
        ds = FvSpinor(up_f * dpsi, lo_f * dpsi)
        return fv_current(s, ds, m)

    @pytest.mark.parametrize(
        "cfg, e",
        [(STEP, 4.0), (STEP, 7.5), (KLEIN_STEP, 1.6), (KLEIN_STEP, 1.2)],
    )
    def test_coefficients_match_current_ratios(self, cfg, e):
        m = cfg.mass
        pt = step_coefficients(cfg, DeformationModel.sr(), e)
        k = pt.k_out
        q = pt.inner_value if pt.flag is RegimeFlag.ABOVE_BARRIER else -pt.inner_value
        r = (k - q) / (k + q)
        t = 2.0 * k / (k + q)
        j_inc = self._mode_current(e, m, 1.0, k)
        j_ref = self._mode_current(e, m, r, -k)
        j_tr = self._mode_current(e, m, t, q)
        assert abs(j_ref) / j_inc == pytest.approx(pt.r_coef, rel=1e-12)
        assert j_tr / j_inc == pytest.approx(pt.t_coef, rel=1e-12)
        # conservation: total left current equals transmitted current
        assert self._total_left_current(e, m, r, k) == pytest.approx(j_tr, rel=1e-12)

    def test_supercritical_transmitted_flux_is_negative(self):
        pt = step_coefficients(KLEIN_STEP, DeformationModel.sr(), 1.6)
        q = -pt.inner_value
        t = 2.0 * pt.k_out / (pt.k_out + q)
        assert self._mode_current(1.6, 1.0, t, q) < 0.0


class TestThreshold:
    def test_sr_exact(self):
        assert supercritical_threshold(STEP, DeformationModel.sr()) == 1.0

    def test_rational_map_value(self):
        e_star = supercritical_threshold(STEP, DeformationModel.dsr(0.02))
        assert e_star == pytest.approx(THRESHOLD_DSR_02, abs=1e-10)

    def test_polynomial_map_value(self):
        e_star = supercritical_threshold(STEP, DeformationModel.gdsr(0.02))
        assert e_star == pytest.approx(THRESHOLD_GDSR_02, abs=1e-10)

    def test_defining_residual(self):
        for model in (DeformationModel.dsr(0.02), DeformationModel.gdsr(0.02)):
            e_star = supercritical_threshold(STEP, model)
            w = effective_energy(model, e_star - STEP.height)
            assert abs(w.deformed + STEP.mass) <= 1e-10

    def test_regime_flips_at_threshold(self):
        for model in (DeformationModel.sr(), DeformationModel.dsr(0.02)):
            e_star = supercritical_threshold(KLEIN_STEP, model)
            below = step_coefficients(KLEIN_STEP, model, e_star - 1e-6)
            above = step_coefficients(KLEIN_STEP, model, e_star + 1e-6)
            assert below.flag is RegimeFlag.SUPERCRITICAL
            assert above.flag is not RegimeFlag.SUPERCRITICAL

    def test_no_bracket_when_map_saturates(self):
        # the rational map at negative arguments is bounded by -1/l_p
        with pytest.raises(NoBracket):
            supercritical_threshold(STEP, DeformationModel.dsr(1.5))


class TestResonances:
    def test_sr_values(self):
        es = resonance_energies(BARRIER, DeformationModel.sr(), 3)
        for got, expected in zip(es, RESONANCES_SR):
            assert got == pytest.approx(expected, abs=1e-9)

    def test_undeformed_limit(self):
        sr = resonance_energies(BARRIER, DeformationModel.sr(), 3)
        zero = resonance_energies(BARRIER, DeformationModel.gdsr(0.0), 3)
        assert sr == pytest.approx(zero, abs=1e-12)

    def test_deformed_shifts_grow_with_index(self):
        sr = resonance_energies(BARRIER, DeformationModel.sr(), 3)
        dsr = resonance_energies(BARRIER, DeformationModel.dsr(0.02), 3)
        shifts = [abs(a - b) for a, b in zip(dsr, sr)]
        assert all(s > 0 for s in shifts)
        assert shifts[0] < shifts[1] < shifts[2]

    def test_no_bracket_when_interior_momentum_bounded(self):
        # chi < 0 caps the deformed interior energy below the first resonance
        with pytest.raises(NoBracket):
            resonance_energies(BARRIER, DeformationModel.gdsr(0.2, -1.0), 1)


class TestScan:
    def test_single_point_wrapper(self):
        pts = rt_scan(BARRIER, DeformationModel.sr(), [1.5])
        assert len(pts) == 1
        assert pts[0].t_coef == pytest.approx(BARRIER_T_SR_15, rel=1e-12)

    def test_flux_conservation_dense_grid(self):
        grid = np.linspace(1.01, 10.0, 200)
        worst = 0.0
        for pt in rt_scan(BARRIER, DeformationModel.sr(), grid):
            worst = max(worst, abs(pt.r_coef + pt.t_coef - 1.0))
        assert worst <= 1e-12

    def test_grid_order_and_flags_preserved(self):
        grid = np.linspace(0.0, 25.0, 60)
        pts = rt_scan(BARRIER, DeformationModel.dsr(0.06), grid)
        assert [p.energy for p in pts] == pytest.approx(list(grid))
        flags = {p.flag for p in pts}
        assert RegimeFlag.NON_PROPAGATING_INCIDENCE in flags
        assert RegimeFlag.MAP_INVALID in flags  # 1 - l_p E <= 0 beyond E ~ 16.7
        invalid = [p for p in pts if p.flag is RegimeFlag.MAP_INVALID]
        assert all(p.energy >= 1.0 / 0.06 for p in invalid)

    def test_csv_schema(self):
        model = DeformationModel.dsr(0.06)
        rows = scan_csv_rows(model, rt_scan(BARRIER, model, [1.5]))
        assert SCAN_CSV_HEADER == (
            "model", "l_p", "chi", "E", "k", "inner_regime", "inner_value", "R", "T", "flag",
        )
        assert rows[0][0] == "dsr" and rows[0][1] == 0.06
        assert rows[0][5] == Regime.EVANESCENT.value and rows[0][9] == "tunneling"

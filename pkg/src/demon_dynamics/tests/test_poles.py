"""Tests for the demon pole scan."""

import pytest

from demon_dynamics.core.exceptions import DegenerateBandError, PoleScanError, ValidationError
from demon_dynamics.models import ActivationSpec, IntegralMode, PoleReport
from demon_dynamics.services.greens import (
    container_integrals,
    demon_pole_scan,
    evaluate_denominator,
)

pytestmark = pytest.mark.unit

WINDOW = (0.1, 30.0)


@pytest.fixture
def report(box, demon):
    return demon_pole_scan(*WINDOW, box, demon, workers=2)


class TestDemonPoleScan:
    def test_roots_solve_denominator(self, report, box, demon):
        integrals = container_integrals(box, demon, IntegralMode.APPROX)
        assert report.roots
        for root in report.roots:
            assert abs(evaluate_denominator(root.energy, integrals)) < 1e-10
            assert root.residual < 1e-10
            assert root.bracket_width <= 1e-12

    def test_root_between_odd_levels_above_extra_pole(self, report):
        # D runs from +inf to -inf between E_5 and E_7 once E exceeds E_4
        assert any(12.5 < energy < 24.5 for energy in report.energies)

    def test_roots_are_sorted_and_inside_window(self, report):
        energies = report.energies
        assert energies == sorted(energies)
        assert all(WINDOW[0] <= energy <= WINDOW[1] for energy in energies)

    def test_container_levels_are_excluded(self, report):
        assert report.excluded == pytest.approx([0.5, 2.0, 4.5, 8.0, 12.5, 18.0, 24.5])
        for energy in report.energies:
            assert all(abs(energy - level) > 1e-12 for level in report.excluded)

    def test_extra_pole_is_flagged_not_reported(self, report):
        assert report.flagged_extra_pole == pytest.approx(8.0)
        assert all(abs(energy - 8.0) > 1e-12 for energy in report.energies)

    def test_no_flag_below_first_band(self, box):
        report = demon_pole_scan(*WINDOW, box, ActivationSpec(p_ref=1.0, strength=2.0))
        assert report.flagged_extra_pole is None

    def test_switched_off_demon_has_no_poles(self, box, no_demon):
        assert demon_pole_scan(*WINDOW, box, no_demon).roots == []

    def test_roots_are_stable_under_tighter_bisection(self, report, box, demon):
        tighter = demon_pole_scan(*WINDOW, box, demon, bisect_tol=0.5e-12, workers=2)
        assert len(tighter.roots) == len(report.roots)
        for fine, coarse in zip(tighter.energies, report.energies):
            assert fine == pytest.approx(coarse, abs=1e-8)

    def test_worker_count_does_not_change_result(self, report, box, demon):
        serial = demon_pole_scan(*WINDOW, box, demon, workers=1)
        assert serial.energies == report.energies

    def test_report_survives_line_round_trip(self, report):
        assert PoleReport.from_lines(report.to_lines()) == report

    @pytest.mark.parametrize("window", [(0.0, 5.0), (5.0, 1.0), (-1.0, 2.0)])
    def test_rejects_bad_window(self, box, demon, window):
        with pytest.raises(ValidationError):
            demon_pole_scan(*window, box, demon)

    def test_degenerate_band_rejected(self, box):
        with pytest.raises(DegenerateBandError):
            demon_pole_scan(*WINDOW, box, ActivationSpec(p_ref=4.0, strength=2.0))

    def test_non_finite_denominator_raises(self, mocker, box, demon):
        mocker.patch(
            "demon_dynamics.services.greens.poles.evaluate_denominator",
            return_value=complex("nan"),
        )
        with pytest.raises(PoleScanError):
            demon_pole_scan(1.0, 1.5, box, demon, workers=1)

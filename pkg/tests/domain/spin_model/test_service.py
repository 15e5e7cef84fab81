import math

import numpy as np
import pytest

from sgi_nanorotor.domain.params.dto import NanodiamondParams, PhysicalSetup
from sgi_nanorotor.domain.spin_model.dto import FieldAtNV
from sgi_nanorotor.domain.spin_model.eigensolver import jacobi_eigvalsh
from sgi_nanorotor.domain.spin_model.error import ProjectionInvalidError
from sgi_nanorotor.domain.spin_model.service import (
    adiabatic_energies,
    body_frame_field,
    build_effective_matrix,
    build_spin_matrix,
    check_adiabaticity,
    nv_site_field,
    project_field,
)

MU = PhysicalSetup().mu
D = NanodiamondParams().d_zfs


def _random_fields(rng: np.random.Generator, count: int, b_max: float) -> list[FieldAtNV]:
    fields = []
    for _ in range(count):
        magnitude = rng.uniform(0.0, b_max)
        polar = rng.uniform(0.0, math.pi)
        fields.append(
            FieldAtNV(
                b_par=magnitude * math.cos(polar),
                b_perp=magnitude * math.sin(polar),
                gamma_az=rng.uniform(0.0, 2 * math.pi),
            )
        )
    return fields


class TestProjectField:
    def test_field_along_axis(self):
        field = project_field(0.14, 0.0, 0.0, 0.0)
        assert field.b_par == pytest.approx(0.14)
        assert field.b_perp == 0.0

    def test_field_across_tilted_axis(self):
        field = project_field(0.0, 1.0, math.pi / 2, 0.0)
        assert field.b_par == pytest.approx(1.0)
        assert field.b_perp == pytest.approx(0.0, abs=1e-12)

    def test_reference_tilt(self):
        field = project_field(0.14, 0.0, 1e-3, 0.0)
        assert field.b_perp == pytest.approx(1.4e-4, rel=1e-6)

    def test_magnitude_preserved(self):
        rng = np.random.default_rng(3)
        for bx, by, beta, gamma in rng.uniform(-1.0, 1.0, size=(50, 4)):
            field = project_field(bx, by, beta, gamma)
            assert math.hypot(field.b_par, field.b_perp) == pytest.approx(math.hypot(bx, by), rel=1e-12)

    def test_azimuth_reproduces_body_frame_components(self):
        rng = np.random.default_rng(4)
        for bx, by, beta, gamma in rng.uniform(-1.0, 1.0, size=(50, 4)):
            field = project_field(bx, by, beta, gamma)
            b1, b2, b3 = body_frame_field(bx, by, beta, gamma)
            assert field.b2 == pytest.approx(b2, abs=1e-12)
            assert field.b3 == pytest.approx(b3, abs=1e-12)
            assert field.b_par == pytest.approx(b1, abs=1e-12)

    def test_no_transverse_field_keeps_gamma(self):
        assert project_field(0.1, 0.0, 0.0, 1.25).gamma_az == 1.25


class TestNvSiteField:
    def test_centred_nv_sees_com_field(self):
        assert nv_site_field(0.14, 7e-6, -7000.0, 0.0, 1e-3, 0.3) == (0.14, 7e-6)

    def test_offset_along_x(self):
        bx, by = nv_site_field(0.14, 0.0, -7000.0, 1e-8, 0.0, 0.0)
        assert bx == pytest.approx(0.14 - 7e-5)
        assert by == pytest.approx(0.0, abs=1e-20)

    def test_offset_along_y(self):
        bx, by = nv_site_field(0.14, 0.0, -7000.0, 1e-8, math.pi / 2, 0.0)
        assert bx == pytest.approx(0.14, rel=1e-12)
        assert by == pytest.approx(7e-5)

    def test_matches_field_at_displaced_point(self):
        eta, x, y, d, angle = -7000.0, 3e-8, -2e-8, 5e-9, 0.7
        bx, by = nv_site_field(0.14 + eta * x, -eta * y, eta, d, 0.4, angle - 0.4)
        assert bx == pytest.approx(0.14 + eta * (x + d * math.cos(angle)), rel=1e-12)
        assert by == pytest.approx(-eta * (y + d * math.sin(angle)), rel=1e-12)


class TestSpinMatrix:
    def test_hermitian(self):
        for field in _random_fields(np.random.default_rng(1), 20, 0.5):
            matrix = build_spin_matrix(field, D, 1e-26, MU).matrix
            np.testing.assert_allclose(matrix, matrix.conj().T, rtol=0, atol=1e-12 * D)

    def test_no_transverse_field_is_diagonal(self):
        field = FieldAtNV(b_par=0.1, b_perp=0.0, gamma_az=0.0)
        matrix = build_spin_matrix(field, D, 0.0, MU).matrix
        expected = np.diag([MU * 0.1 + D / 3, -2 * D / 3, -MU * 0.1 + D / 3])
        np.testing.assert_allclose(matrix, expected, rtol=1e-15, atol=0)

    def test_trace_is_zero(self):
        field = _random_fields(np.random.default_rng(2), 1, 0.3)[0]
        assert abs(np.trace(build_spin_matrix(field, D, 0.0, MU).matrix)) <= 1e-15 * D


class TestEffectiveMatrix:
    def test_diagonal_without_transverse_field(self):
        field = FieldAtNV(b_par=0.05, b_perp=0.0, gamma_az=0.0)
        effective = build_effective_matrix(field, D, MU)
        expected = np.diag([MU * 0.05 + D / 3, -MU * 0.05 + D / 3])
        np.testing.assert_allclose(effective.matrix, expected, rtol=1e-15, atol=0)

    def test_trace_is_twice_offset(self):
        for field in _random_fields(np.random.default_rng(5), 20, 0.1):
            effective = build_effective_matrix(field, D, MU)
            assert np.trace(effective.matrix).real == pytest.approx(2 * effective.offset, rel=1e-14)

    def test_eigenvalues_match_branch_energies(self):
        for field in _random_fields(np.random.default_rng(6), 50, 0.1):
            effective = build_effective_matrix(field, D, MU)
            energies = adiabatic_energies(field, D, 0.0, MU)
            low, high = np.linalg.eigvalsh(effective.matrix)
            scale = max(abs(energies.v_plus), abs(energies.v_minus))
            assert abs(high - energies.v_plus) <= 1e-12 * scale
            assert abs(low - energies.v_minus) <= 1e-12 * scale

    def test_rotation_shifts_diagonal(self):
        field = FieldAtNV(b_par=0.05, b_perp=0.0, gamma_az=0.0)
        omega0 = 2 * math.pi * 1e4
        shifted = build_effective_matrix(field, D, MU, omega0=omega0).matrix
        plain = build_effective_matrix(field, D, MU).matrix
        hbar_omega = PhysicalSetup().constants.hbar * omega0
        assert (plain[0, 0] - shifted[0, 0]).real == pytest.approx(hbar_omega, rel=1e-6)
        assert (shifted[1, 1] - plain[1, 1]).real == pytest.approx(hbar_omega, rel=1e-6)

    def test_zero_splitting_rejected(self):
        with pytest.raises(ProjectionInvalidError):
            build_effective_matrix(FieldAtNV(0.1, 0.01, 0.0), 0.0, MU)

    def test_weak_gap_logs_warning(self, caplog):
        field = FieldAtNV(b_par=0.0, b_perp=0.05, gamma_az=0.0)
        with caplog.at_level("WARNING", logger="sgi_nanorotor.spin_model"):
            build_effective_matrix(field, D, MU)
        assert "projection_weak_gap" in caplog.text


class TestAdiabaticEnergies:
    def test_tracks_full_three_level_energies(self):
        rng = np.random.default_rng(7)
        checked = 0
        for field in _random_fields(rng, 1000, 0.1):
            if MU * abs(field.b_par) > 0.9 * D:
                continue
            energies = adiabatic_energies(field, D, 0.0, MU)
            _, middle, top = jacobi_eigvalsh(build_spin_matrix(field, D, 0.0, MU).matrix)
            bound = 10 * (MU * field.b_perp / D) ** 2 * D + 1e-12 * D
            assert abs(energies.v_plus - top) <= bound
            assert abs(energies.v_minus - middle) <= bound
            checked += 1
        assert checked > 500

    def test_splitting_identity(self):
        for field in _random_fields(np.random.default_rng(8), 50, 0.1):
            energies = adiabatic_energies(field, D, 0.0, MU)
            k = (MU * field.b_perp) ** 2 / (2 * D)
            expected = 2 * math.sqrt((MU * field.b_par) ** 2 + k**2)
            assert energies.splitting == pytest.approx(expected, rel=1e-12, abs=1e-40)

    def test_branch_swap_under_field_reversal(self):
        field = FieldAtNV(b_par=0.07, b_perp=0.01, gamma_az=0.4)
        reversed_field = FieldAtNV(b_par=-0.07, b_perp=0.01, gamma_az=0.4)
        assert adiabatic_energies(field, D, 0.0, MU) == adiabatic_energies(reversed_field, D, 0.0, MU)

    def test_simplified_form(self):
        field = FieldAtNV(b_par=0.1, b_perp=0.02, gamma_az=0.0)
        energies = adiabatic_energies(field, D, 1e-26, MU, simplified=True)
        half_gap = math.hypot(MU * 0.1, 1e-26)
        assert energies.v_plus == pytest.approx(D / 3 + half_gap, rel=1e-14)
        assert energies.v_minus == pytest.approx(D / 3 - half_gap, rel=1e-14)

    def test_ordering(self):
        for field in _random_fields(np.random.default_rng(9), 50, 0.5):
            energies = adiabatic_energies(field, D, 1e-26, MU)
            assert energies.v_plus >= energies.v_minus


class TestCheckAdiabaticity:
    OMEGA0 = 2 * math.pi * 1e4

    def test_reference_field(self):
        assert check_adiabaticity(self.OMEGA0, 0.14, D, MU)

    def test_either_field_orientation(self):
        assert check_adiabaticity(self.OMEGA0, -0.14, D, MU)

    def test_spin_rate_at_larmor_frequency(self):
        hbar = PhysicalSetup().constants.hbar
        assert not check_adiabaticity(MU * 0.14 / hbar, 0.14, D, MU)

    def test_zero_parallel_field(self):
        assert not check_adiabaticity(self.OMEGA0, 0.0, D, MU)

    def test_at_level_crossing(self):
        assert not check_adiabaticity(self.OMEGA0, D / MU, D, MU)

    @pytest.mark.parametrize("margin", [1.0, 0.5])
    def test_margin_must_exceed_one(self, margin):
        with pytest.raises(ValueError):
            check_adiabaticity(self.OMEGA0, 0.14, D, MU, margin=margin)

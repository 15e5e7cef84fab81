import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceValue:
    """Published headline number with its acceptance tolerance.

    Exactly one of ``rel_tol`` / ``abs_tol`` is set. ``mass`` ties the value to
    a rotor mass (kg) when it depends on one.
    """

    key: str
    label: str
    expected: float
    rel_tol: float | None = None
    abs_tol: float | None = None
    mass: float | None = None
    occupation: int | None = None

    @property
    def tolerance_text(self) -> str:
        if self.rel_tol is not None:
            return f"±{self.rel_tol:.1%}"
        return f"±{self.abs_tol:g}"

    def accepts(self, computed: float) -> bool:
        error = abs(abs(computed) - self.expected)
        if self.rel_tol is not None:
            return error <= self.rel_tol * abs(self.expected)
        assert self.abs_tol is not None
        return error <= self.abs_tol


# Spin rate the mass-dependent mismatch and contrast values were quoted at.
REFERENCE_OMEGA0 = 2 * math.pi * 1e4

# 1e-17 kg, R = 50 nm, B0 = 0.14 T, eta = -7000 T/m, beta0 = 1e-3, y0 = 1 nm, omega0 = 2pi x 10 kHz.
REFERENCE_VALUES: tuple[ReferenceValue, ...] = (
    ReferenceValue("delta_r_max", "max superposition size (m), 1e-17 kg", 0.215e-6, rel_tol=0.02, mass=1e-17),
    ReferenceValue("t_close", "closure time (s)", 0.01275, rel_tol=0.005),
    ReferenceValue("delta_alpha", "|delta alpha| at t_close (rad), 1e-16 kg", 0.00168, rel_tol=0.10, mass=1e-16),
    ReferenceValue("delta_alpha", "|delta alpha| at t_close (rad), 1e-17 kg", 0.09058, rel_tol=0.10, mass=1e-17),
    ReferenceValue("delta_alpha", "|delta alpha| at t_close (rad), 5e-18 kg", 0.22073, rel_tol=0.10, mass=5e-18),
    # Trap frequency sqrt(12.08) rad/s, 1e-17 kg.
    ReferenceValue("zero_point_y0", "zero-point y0 (m), n = 0", 1.23e-9, rel_tol=0.005, occupation=0),
    ReferenceValue("zero_point_y0", "zero-point y0 (m), n = 10", 5.64e-9, rel_tol=0.005, occupation=10),
    ReferenceValue("zero_point_y0", "zero-point y0 (m), n = 100", 1.74e-8, rel_tol=0.005, occupation=100),
    ReferenceValue("contrast", "spin contrast, 1e-16 kg, 5 hbar widths", 0.996, abs_tol=0.004, mass=1e-16),
)


def mass_matches(reference: ReferenceValue, mass: float) -> bool:
    return reference.mass is not None and abs(mass - reference.mass) <= 1e-6 * reference.mass


def omega0_matches(omega0: float) -> bool:
    return abs(omega0 - REFERENCE_OMEGA0) <= 1e-6 * REFERENCE_OMEGA0

import logging
import math

import numpy as np
from scipy import constants as codata

from .dto import BranchEnergies, EffectiveMatrix2, FieldAtNV, SpinMatrix3
from .error import ProjectionInvalidError

logger = logging.getLogger("sgi_nanorotor.spin_model")

# Above this mu*B_perp/D the two-level projection is no longer trustworthy.
PROJECTION_WARN_RATIO = 0.1


def body_frame_field(
    bx: float, by: float, beta0: float, gamma: float
) -> tuple[float, float, float]:
    """Lab field (Bx, By, 0) expressed in the co-moving frame of the rotor.

    Returns:
        (B1, B2, B3) with B1 along the NV axis.
    """
    sb, cb = math.sin(beta0), math.cos(beta0)
    sg, cg = math.sin(gamma), math.cos(gamma)
    b1 = bx * cb + by * sb
    b2 = (bx * sb - by * cb) * sg
    b3 = (-bx * sb + by * cb) * cg
    return b1, b2, b3


def project_field(bx: float, by: float, beta: float, gamma: float) -> FieldAtNV:
    """Resolve the lab field along the NV axis and in its transverse plane.

    The azimuth is that of the body-frame transverse components, so
    ``B2 = B_perp * sin(gamma_az)`` and ``B3 = B_perp * cos(gamma_az)`` hold
    exactly. With no transverse field the azimuth falls back to ``gamma``.

    Example:
        project_field(0.14, 0.0, 1e-3, 0.0).b_perp  # ~1.4e-4 T
    """
    _, b2, b3 = body_frame_field(bx, by, beta, gamma)
    b_par = bx * math.cos(beta) + by * math.sin(beta)
    b_perp = abs(bx * math.sin(beta) - by * math.cos(beta))
    if b_perp == 0.0:
        gamma_az = gamma % (2 * math.pi)
    else:
        gamma_az = math.atan2(b2, b3) % (2 * math.pi)
    return FieldAtNV(b_par=b_par, b_perp=b_perp, gamma_az=gamma_az)


def nv_site_field(
    bx: float,
    by: float,
    eta: float,
    d: float,
    beta: float,
    alpha_prime: float,
) -> tuple[float, float]:
    """Field at an NV sitting a distance ``d`` from the centre of mass.

    The offset points along ``beta + alpha_prime`` in the x-y plane. For the
    linear field (B0 + eta*x, -eta*y) the x component picks up
    ``eta * d * cos(beta + alpha_prime)`` and the y component
    ``-eta * d * sin(beta + alpha_prime)``.
    """
    if d == 0.0:
        return bx, by
    angle = beta + alpha_prime
    return bx + eta * d * math.cos(angle), by - eta * d * math.sin(angle)


def build_spin_matrix(
    field: FieldAtNV, d_zfs: float, e_strain: float, mu: float
) -> SpinMatrix3:
    """3x3 ground-state Hamiltonian in the {|+1>, |0>, |-1>} basis, shifted by D/3."""
    zeeman = mu * field.b_par
    coupling = mu * field.b_perp / math.sqrt(2)
    down = coupling * np.exp(-1j * field.gamma_az)
    up = coupling * np.exp(1j * field.gamma_az)
    matrix = np.array(
        [
            [zeeman, down, e_strain],
            [up, -d_zfs, down],
            [e_strain, up, -zeeman],
        ],
        dtype=np.complex128,
    )
    matrix += (d_zfs / 3) * np.eye(3)
    return SpinMatrix3(matrix=matrix)


def _second_order_shift(field: FieldAtNV, d_zfs: float, mu: float) -> float:
    return (mu * field.b_perp) ** 2 / (2 * d_zfs)


def build_effective_matrix(
    field: FieldAtNV,
    d_zfs: float,
    mu: float,
    omega0: float = 0.0,
    hbar: float = codata.hbar,
) -> EffectiveMatrix2:
    """Feshbach-projected Hamiltonian on {|+1>, |-1>} in the co-moving frame.

    Strain does not enter here. ``omega0`` adds the rotation-induced shift
    ``-hbar*omega0`` to the Zeeman diagonal.

    Raises:
        ProjectionInvalidError: if ``d_zfs`` is zero.
    """
    if d_zfs == 0.0:
        raise ProjectionInvalidError("zero-field splitting is zero, |0> cannot be eliminated")
    ratio = mu * field.b_perp / d_zfs
    if ratio > PROJECTION_WARN_RATIO:
        logger.warning(
            "projection_weak_gap",
            extra={"ratio": ratio, "b_perp": field.b_perp},
        )
    k = _second_order_shift(field, d_zfs, mu)
    offset = d_zfs / 3 + k
    diag = mu * field.b_par - hbar * omega0
    off = k * np.exp(-2j * field.gamma_az)
    matrix = np.array(
        [[diag + offset, off], [np.conj(off), -diag + offset]],
        dtype=np.complex128,
    )
    return EffectiveMatrix2(matrix=matrix, offset=offset)


def adiabatic_energies(
    field: FieldAtNV,
    d_zfs: float,
    e_strain: float,
    mu: float,
    simplified: bool = False,
) -> BranchEnergies:
    """Energies of the two adiabatic branches.

    Args:
        field: Field resolved on the NV axis.
        d_zfs: Axial zero-field splitting (J).
        e_strain: Transverse zero-field splitting (J).
        mu: NV magnetic moment (J/T).
        simplified: Drop the transverse field entirely, leaving
            ``D/3 +- sqrt((mu*B_par)^2 + E^2)``.

    Returns:
        Branch energies with ``v_plus >= v_minus``.
    """
    zeeman = mu * field.b_par
    if simplified:
        half_gap = math.hypot(zeeman, e_strain)
        offset = d_zfs / 3
    else:
        k = _second_order_shift(field, d_zfs, mu)
        epsilon = e_strain + k * complex(math.cos(2 * field.gamma_az), math.sin(2 * field.gamma_az))
        half_gap = math.hypot(zeeman, abs(epsilon))
        offset = d_zfs / 3 + k
    return BranchEnergies(v_plus=offset + half_gap, v_minus=offset - half_gap)


def check_adiabaticity(
    omega0: float,
    b_par: float,
    d_zfs: float,
    mu: float,
    margin: float = 100.0,
    hbar: float = codata.hbar,
) -> bool:
    """True when the spin rate sits ``margin`` times below every spin precession frequency.

    Uses ``|b_par|`` so either field orientation is accepted. The gap to the
    |0> level is ``|D - mu*B_par|``: the default bias field sits above the
    ground-state level crossing.
    """
    if margin <= 1:
        raise ValueError(f"margin must exceed 1, got {margin}")
    zeeman = mu * abs(b_par)
    bound = omega0 * margin * hbar
    return bound < zeeman and bound < abs(d_zfs - zeeman) and bound < d_zfs + zeeman

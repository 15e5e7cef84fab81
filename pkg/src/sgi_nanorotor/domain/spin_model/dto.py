from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class FieldAtNV:
    """Field resolved on the NV axis: parallel part, transverse magnitude, azimuth."""

    b_par: float
    b_perp: float
    gamma_az: float

    @property
    def b2(self) -> float:
        return self.b_perp * float(np.sin(self.gamma_az))

    @property
    def b3(self) -> float:
        return self.b_perp * float(np.cos(self.gamma_az))


@dataclass(frozen=True)
class SpinMatrix3:
    """Spin Hamiltonian in the {|+1>, |0>, |-1>} basis, joules."""

    matrix: ComplexMatrix


@dataclass(frozen=True)
class EffectiveMatrix2:
    """Projected Hamiltonian in the {|+1>, |-1>} basis; ``matrix`` includes ``offset``."""

    matrix: ComplexMatrix
    offset: float


@dataclass(frozen=True)
class BranchEnergies:
    v_plus: float
    v_minus: float

    @property
    def splitting(self) -> float:
        return self.v_plus - self.v_minus

from typing import Literal

import numpy as np
import numpy.typing as npt

Spin = Literal[1, -1]
FloatArray = npt.NDArray[np.float64]

SPINS: tuple[Spin, Spin] = (1, -1)

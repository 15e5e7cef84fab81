from typing import Any

import numpy as np

from .dto import ComplexMatrix, EffectiveMatrix2, SpinMatrix3


class SpinMatrixMapper:
    """JSON views of spin matrices: row-major, each entry as ``[re, im]``."""

    def matrix_to_json_rows(self, matrix: ComplexMatrix) -> list[list[list[float]]]:
        return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]

    def json_rows_to_matrix(self, rows: list[list[list[float]]]) -> ComplexMatrix:
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)

    def spin_matrix_to_json_dict(self, spin_matrix: SpinMatrix3) -> dict[str, Any]:
        return {"basis": ["+1", "0", "-1"], "matrix": self.matrix_to_json_rows(spin_matrix.matrix)}

    def effective_matrix_to_json_dict(self, effective: EffectiveMatrix2) -> dict[str, Any]:
        return {
            "basis": ["+1", "-1"],
            "offset": effective.offset,
            "matrix": self.matrix_to_json_rows(effective.matrix),
        }

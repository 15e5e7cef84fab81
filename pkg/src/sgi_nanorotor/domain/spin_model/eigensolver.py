"""Cyclic Jacobi eigenvalues for small Hermitian matrices.

Independent of LAPACK; used as the oracle for the projected two-level energies.
"""

import numpy as np

from sgi_nanorotor.lib.types import FloatArray

from .dto import ComplexMatrix

MAX_SWEEPS = 64


def _real_embedding(matrix: ComplexMatrix) -> FloatArray:
    # [[Re, -Im], [Im, Re]] is real symmetric; each eigenvalue appears twice.
    re, im = matrix.real, matrix.imag
    return np.block([[re, -im], [im, re]]).astype(np.float64)


def jacobi_eigvalsh_real(matrix: FloatArray, rtol: float = 1e-16) -> FloatArray:
    """Eigenvalues of a real symmetric matrix, ascending.

    Args:
        matrix: Square real symmetric matrix.
        rtol: Stop once the off-diagonal norm falls below ``rtol`` times the
            Frobenius norm.

    Returns:
        Sorted eigenvalues.
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(MAX_SWEEPS):
        off = float(np.sqrt(np.sum(a**2) - np.sum(np.diag(a) ** 2)))
        if off <= rtol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta**2 + 1.0))
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                rotation = np.eye(n)
                rotation[p, p] = c
                rotation[q, q] = c
                rotation[p, q] = s
                rotation[q, p] = -s
                a = rotation.T @ a @ rotation
    return np.sort(np.diag(a))


def jacobi_eigvalsh(matrix: ComplexMatrix, rtol: float = 1e-16) -> FloatArray:
    """Eigenvalues of a complex Hermitian matrix, ascending.

    Example:
        jacobi_eigvalsh(build_spin_matrix(field, d, e, mu).matrix)
    """
    doubled = jacobi_eigvalsh_real(_real_embedding(matrix), rtol=rtol)
    return doubled[::2].copy()

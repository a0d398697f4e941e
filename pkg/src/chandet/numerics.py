"""Dense complex matrix kernel.

Everything else in the package goes through these few helpers so that
dimension checks and the Hermitian eigensolver live in one place. Matrices
are plain ``numpy.ndarray`` objects of dtype ``complex128``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NumericError, ValidationError

HERMITIAN_ATOL = 1e-9


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ms) -> np.ndarray:
    out = as_matrix(ms[0])
    for m in ms[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace(m, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    """Reduce a bipartite operator on ``A (x) B`` to one subsystem.

    Parameters
    ----------
    m : array_like
        Square matrix of side ``dims[0] * dims[1]``.
    dims : (int, int)
        Subsystem dimensions ``(d_A, d_B)``.
    keep : {"A", "B"}
        Subsystem that survives; the other one is traced out.
    """
    m = as_matrix(m)
    d_a, d_b = dims
    if m.shape != (d_a * d_b, d_a * d_b):
        raise ValidationError(
            f"partial_trace: matrix shape {m.shape} incompatible with dims {dims}"
        )
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def hermiticity_residual(h) -> float:
    h = as_matrix(h)
    return float(np.max(np.abs(h - dagger(h))))


def eig_hermitian(h) -> EigenDecomposition:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ValidationError(f"eig_hermitian needs a square matrix, got {h.shape}")
    res = hermiticity_residual(h)
    if res > HERMITIAN_ATOL:
        raise ValidationError(f"matrix is not Hermitian (residual {res:.3e})")
    try:
        w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def mat_fn_trace(a, b) -> complex:
    """Tr[a @ b] without forming the product."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0] or a.shape[0] != b.shape[1]:
        raise ValidationError(f"trace of product undefined for shapes {a.shape}, {b.shape}")
    return complex(np.einsum("ij,ji->", a, b))


def ket(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(-1)


def projector(v) -> np.ndarray:
    v = ket(v)
    return np.outer(v, v.conj())

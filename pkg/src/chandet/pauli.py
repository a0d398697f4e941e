"""Weyl-Heisenberg operators, generalized Bell states and local correlators.

Conventions: ``U_mn = sum_k w**(k m) |k><k+n mod d|`` with ``w = exp(2 pi i/d)``.
Bipartite operators are ordered (system, reference). For qubits
``U_10 = Z``, ``U_01 = X`` and ``U_11 = iY``, so the local setting
``U_11 (x) U_11^*`` equals ``-(Y (x) Y)``; see :data:`QUBIT_SETTING_OF_LABEL`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from .exceptions import ValidationError
from .numerics import dagger, ket, mat_fn_trace, projector

if TYPE_CHECKING:
    from .channels import KrausChannel

MAX_DIM = 8

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": X, "y": Y, "z": Z}

# Weyl label -> (Pauli setting name, sign) with U (x) U^* = sign * sigma (x) sigma.
QUBIT_SETTING_OF_LABEL = {(1, 0): ("zz", 1), (0, 1): ("xx", 1), (1, 1): ("yy", -1)}


def _check_dim(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or not 2 <= d <= MAX_DIM:
        raise ValidationError(f"dimension must be an integer in [2, {MAX_DIM}], got {d!r}")


def _check_label(m: int, n: int, d: int) -> None:
    _check_dim(d)
    if not (0 <= m < d and 0 <= n < d):
        raise ValidationError(f"Weyl label ({m}, {n}) out of range for d={d}")


def labels(d: int, include_identity: bool = True) -> list[tuple[int, int]]:
    out = [(m, n) for m in range(d) for n in range(d)]
    return out if include_identity else out[1:]


def roots_of_unity(d: int) -> np.ndarray:
    w = np.exp(2j * np.pi * np.arange(d) / d)
    # exact 0/+-1 components where they should be (e.g. w = -1 for d = 2)
    w.real[np.abs(w.real) < 1e-15] = 0.0
    w.imag[np.abs(w.imag) < 1e-15] = 0.0
    return w


def weyl(m: int, n: int, d: int) -> np.ndarray:
    _check_label(m, n, d)
    k = np.arange(d)
    u = np.zeros((d, d), dtype=complex)
    u[k, (k + n) % d] = roots_of_unity(d)[(k * m) % d]
    return u


def max_entangled(d: int) -> np.ndarray:
    _check_dim(d)
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def bell_state(m: int, n: int, d: int) -> np.ndarray:
    """``(U_mn (x) I)|phi+>``, keeping the exact phase of that product."""
    return np.kron(weyl(m, n, d), np.eye(d)) @ max_entangled(d)


def bell_basis(d: int) -> np.ndarray:
    """All ``d**2`` generalized Bell states as columns, in :func:`labels` order."""
    return np.column_stack([bell_state(m, n, d) for m, n in labels(d)])


def bell_projector_sum(m: int, n: int, d: int) -> np.ndarray:
    """Bell projector assembled from local Weyl products.

    ``|Phi^mn><Phi^mn| = d**-2 sum_pq w**(n p - m q) U_pq (x) U_pq^*``
    """
    _check_label(m, n, d)
    out = np.zeros((d * d, d * d), dtype=complex)
    for p, q in labels(d):
        u = weyl(p, q, d)
        out += roots_of_unity(d)[(n * p - m * q) % d] * np.kron(u, u.conj())
    return out / d**2


def local_settings(d: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """The ``d**2 - 1`` local observables as ``(U_mn, U_mn^*)`` pairs.

    Ordered like ``labels(d, include_identity=False)``.
    """
    _check_dim(d)
    return [(u, u.conj()) for u in (weyl(m, n, d) for m, n in labels(d, False))]


def qubit_setting_observable(setting: str) -> np.ndarray:
    """sigma_a (x) sigma_a for ``setting`` in {"xx", "yy", "zz"}."""
    if setting not in ("xx", "yy", "zz"):
        raise ValidationError(f"unknown qubit setting {setting!r}")
    s = PAULI[setting[0]]
    return np.kron(s, s)


@dataclass
class CorrelatorTable:
    """Expectations <U_mn (x) U_mn^*> keyed by Weyl label."""

    d: int
    values: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        one = self.values.get((0, 0))
        if one is not None and abs(one - 1) > 1e-9:
            raise ValidationError(f"identity correlator must be 1, got {one}")

    def __getitem__(self, label):
        return self.values[label]

    def missing(self) -> list[tuple[int, int]]:
        return [lab for lab in labels(self.d, False) if lab not in self.values]

    def real_values(self, atol: float = 1e-10) -> dict[tuple[int, int], float]:
        """Real parts, after checking the imaginary parts vanish."""
        out = {}
        for lab, v in self.values.items():
            if abs(v.imag) > atol:
                raise ValidationError(f"correlator {lab} has imaginary part {v.imag:.3e}")
            out[lab] = float(v.real)
        return out

    def as_pauli(self) -> dict[str, float]:
        """Qubit table in the xx/yy/zz labeling."""
        if self.d != 2:
            raise ValidationError("Pauli labeling only exists for d=2")
        real = self.real_values()
        return {name: sign * real[lab] for lab, (name, sign) in QUBIT_SETTING_OF_LABEL.items()}


def correlators_entangled(ch: KrausChannel) -> CorrelatorTable:
    """Correlators on the Choi state: the entangled-input scheme."""
    choi = ch.choi_state()
    d = ch.d
    values = {
        lab: mat_fn_trace(choi, np.kron(u, uc))
        for lab, (u, uc) in zip(labels(d, False), local_settings(d))
    }
    return CorrelatorTable(d, values)


def _eigenbasis_normal(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # complex Schur form of a normal matrix is diagonal with unitary Q, which
    # keeps degenerate eigenspaces orthonormal (np.linalg.eig does not).
    t, q = scipy.linalg.schur(u, output="complex")
    return np.diag(t), q


def correlators_system_only(ch: KrausChannel) -> CorrelatorTable:
    """Correlators from single-system preparations.

    For each label the system is prepared in the eigenstates ``|e_j>`` of
    ``U_mn^dagger`` with probability ``1/d``, sent through the channel, and
    ``U_mn`` is measured. Weighting the outcome average by the prepared
    eigenvalue gives ``Tr[U_mn E(U_mn^dagger)] / d``.
    """
    d = ch.d
    values = {}
    for m, n in labels(d, False):
        u = weyl(m, n, d)
        mu, basis = _eigenbasis_normal(dagger(u))
        # U shares the eigenbasis of U^dagger with conjugate eigenvalues
        nu = mu.conj()
        acc = 0j
        for j in range(d):
            out = ch.apply(projector(basis[:, j]))
            outcome_probs = np.real(np.einsum("ik,ij,jk->k", basis.conj(), out, basis))
            acc += mu[j] * np.dot(outcome_probs, nu)
        values[(m, n)] = complex(acc / d)
    return CorrelatorTable(d, values)


def bell_probabilities(rho_bipartite, d: int) -> np.ndarray:
    """Populations of the generalized Bell basis, in :func:`labels` order."""
    b = bell_basis(d)
    return np.real(np.einsum("ik,ij,jk->k", b.conj(), np.asarray(rho_bipartite), b))


def qubit_bell_quartet() -> dict[str, np.ndarray]:
    """Textbook Bell states Phi+-, Psi+- in the computational basis."""
    s = 1 / np.sqrt(2)
    return {
        "phi+": ket([s, 0, 0, s]),
        "phi-": ket([s, 0, 0, -s]),
        "psi+": ket([0, s, s, 0]),
        "psi-": ket([0, s, -s, 0]),
    }

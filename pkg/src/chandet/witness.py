"""Entanglement-breaking witness and its evaluation.

``W = (d-1)/d**2 I - d**-2 sum_{(m,n) != (0,0)} U_mn (x) U_mn^*`` has a
negative expectation on the Choi state only if the channel is not
entanglement breaking. Because it is a combination of the local settings,
the value follows from the ``d**2 - 1`` correlators alone.

Any Hermitian matrix can be loaded as a witness (see :func:`load_witness`);
no check is made that it is non-negative on separable states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import check_state, decode_matrix
from .exceptions import ParseError, ValidationError
from .numerics import as_matrix, hermiticity_residual, mat_fn_trace
from .pauli import CorrelatorTable, _check_dim, local_settings

# Round-off guard: a value of exactly 0 (the separable boundary) must not certify.
DEFAULT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class WitnessOperator:
    d: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        side = self.d**2
        if m.shape != (side, side):
            raise ValidationError(f"witness must be {side}x{side} for d={self.d}, got {m.shape}")
        res = hermiticity_residual(m)
        if res > 1e-10:
            raise ValidationError(f"witness is not Hermitian (residual {res:.3e})")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class WitnessVerdict:
    value: float
    certified_not_eb: bool
    stderr: float | None = None

    def line(self) -> str:
        err = "" if self.stderr is None else f" stderr={self.stderr:.6f}"
        return f"witness value={self.value:.6f}{err} certified_not_EB={self.certified_not_eb}"


def build_web(d: int) -> WitnessOperator:
    _check_dim(d)
    w = (d - 1) / d**2 * np.eye(d * d, dtype=complex)
    for u, uc in local_settings(d):
        w -= np.kron(u, uc) / d**2
    return WitnessOperator(d, w)


def verdict(value: float, threshold: float = DEFAULT_THRESHOLD) -> WitnessVerdict:
    return WitnessVerdict(float(value), bool(value < -threshold))


def evaluate(w: WitnessOperator, state, threshold: float = DEFAULT_THRESHOLD) -> WitnessVerdict:
    state = check_state(state, w.d**2)
    value = mat_fn_trace(w.matrix, state)
    return verdict(value.real, threshold)


def evaluate_from_correlators(
    d: int, table: CorrelatorTable, threshold: float = DEFAULT_THRESHOLD
) -> WitnessVerdict:
    """Witness value using only the measured local correlators."""
    missing = table.missing()
    if missing:
        raise ValidationError(f"correlator table is missing labels {missing}")
    total = sum(v.real for lab, v in table.values.items() if lab != (0, 0))
    return verdict((d - 1) / d**2 - total / d**2, threshold)


def load_witness(path: str | Path) -> WitnessOperator:
    """Read ``{"d": int, "matrix": [[[re, im], ...], ...]}``."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"d", "matrix"}:
        raise ParseError("witness JSON must have exactly the keys 'd' and 'matrix'")
    d = obj["d"]
    if isinstance(d, bool) or not isinstance(d, int):
        raise ParseError("'d' must be an integer")
    return WitnessOperator(d, decode_matrix(obj["matrix"], (d * d, d * d), "witness"))

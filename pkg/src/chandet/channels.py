"""Quantum channels in Kraus form.

A channel is stored as its list of Kraus operators ``A_k`` acting on a
``d``-dimensional system, ``E(rho) = sum_k A_k rho A_k^dagger``. Four
families are built in (generalized depolarizing / Pauli, qubit dephasing,
qubit amplitude damping); anything else can be supplied as an explicit
operator list, inline or through the JSON channel format::

    {"kind": "kraus", "d": 2, "operators": [[[[1, 0], [0, 0]], ...], ...]}

Every complex number is a ``[re, im]`` pair and matrices are row-major
nested lists. Builtins use ``{"kind": "depolarizing", "d": 3, "p": 0.1}``,
``{"kind": "amplitude_damping", "gamma": 0.25}``,
``{"kind": "pauli", "d": 2, "probs": [[0.7, 0.1], [0.1, 0.1]]}`` and so on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import ParseError, ValidationError
from .numerics import as_matrix, dagger, eig_hermitian, kron, projector
from .pauli import MAX_DIM, Z, labels, max_entangled, weyl

CPT_ATOL = 1e-9
STATE_ATOL = 1e-9

KINDS = ("depolarizing", "pauli", "dephasing", "amplitude_damping", "kraus")
QUBIT_ONLY = ("dephasing", "amplitude_damping")


def cpt_residual(operators, d: int) -> float:
    acc = sum(dagger(a) @ a for a in operators)
    return float(np.max(np.abs(acc - np.eye(d))))


def check_state(rho, d: int | None = None, atol: float = STATE_ATOL) -> np.ndarray:
    """Return ``rho`` as an array after checking it is a density matrix."""
    rho = as_matrix(rho)
    n = rho.shape[0]
    if rho.shape != (n, n) or (d is not None and n != d):
        raise ValidationError(f"state has shape {rho.shape}, expected side {d}")
    if abs(np.trace(rho) - 1) > atol:
        raise ValidationError(f"state trace {np.trace(rho).real:.12g} is not 1")
    lo = eig_hermitian(rho).eigenvalues[0]
    if lo < -atol:
        raise ValidationError(f"state has negative eigenvalue {lo:.3e}")
    return rho


@dataclass(frozen=True)
class KrausChannel:
    d: int
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or not 2 <= self.d <= MAX_DIM:
            raise ValidationError(f"channel dimension must be in [2, {MAX_DIM}], got {self.d!r}")
        ops = tuple(as_matrix(a) for a in self.operators)
        if not 1 <= len(ops) <= self.d**2:
            raise ValidationError(
                f"need between 1 and d^2={self.d**2} Kraus operators, got {len(ops)}"
            )
        for a in ops:
            if a.shape != (self.d, self.d):
                raise ValidationError(f"Kraus operator shape {a.shape} != ({self.d}, {self.d})")
        res = cpt_residual(ops, self.d)
        if res > CPT_ATOL:
            raise ValidationError(
                f"Kraus operators are not trace preserving: "
                f"max|sum A^dag A - I| = {res:.3e} (tolerance {CPT_ATOL:g})"
            )
        object.__setattr__(self, "operators", ops)

    @property
    def cpt_residual(self) -> float:
        return cpt_residual(self.operators, self.d)

    def apply(self, rho, check: bool = True) -> np.ndarray:
        rho = check_state(rho, self.d) if check else as_matrix(rho)
        if rho.shape != (self.d, self.d):
            raise ValidationError(f"state shape {rho.shape} does not match d={self.d}")
        return sum(a @ rho @ dagger(a) for a in self.operators)

    def apply_extended(self, rho_bipartite, check: bool = True) -> np.ndarray:
        """``(E (x) I_R)(rho)`` with the channel on the first (system) factor."""
        side = self.d**2
        rho = check_state(rho_bipartite, side) if check else as_matrix(rho_bipartite)
        if rho.shape != (side, side):
            raise ValidationError(f"bipartite state shape {rho.shape} != ({side}, {side})")
        eye = np.eye(self.d)
        out = np.zeros_like(rho)
        for a in self.operators:
            big = kron(a, eye)
            out += big @ rho @ dagger(big)
        return out

    def choi_state(self) -> np.ndarray:
        return self.apply_extended(projector(max_entangled(self.d)), check=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": "kraus",
            "d": int(self.d),
            "operators": [_encode_matrix(a) for a in self.operators],
        }


@dataclass(frozen=True)
class ChannelSpec:
    """Declarative description of a channel; :func:`build` turns it into Kraus form."""

    kind: str
    d: int = 2
    p: float | None = None
    gamma: float | None = None
    probs: tuple[tuple[float, ...], ...] | None = None
    operators: tuple[Any, ...] | None = field(default=None, repr=False)

    def param(self) -> float | None:
        return self.gamma if self.kind == "amplitude_damping" else self.p


def _unit_interval(name: str, v) -> float:
    if v is None:
        raise ValidationError(f"missing parameter {name!r}")
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"{name}={v} outside [0, 1]")
    return v


def pauli_operators(probs, d: int) -> list[np.ndarray]:
    """``sqrt(p_mn) U_mn`` for every non-zero weight."""
    table = np.asarray(probs, dtype=float)
    if table.shape != (d, d):
        raise ValidationError(f"probability table must be {d}x{d}, got {table.shape}")
    if np.any(table < 0) or np.any(table > 1):
        raise ValidationError("Pauli probabilities must lie in [0, 1]")
    if abs(table.sum() - 1) > 1e-9:
        raise ValidationError(f"Pauli probabilities sum to {table.sum():.12g}, not 1")
    return [np.sqrt(table[m, n]) * weyl(m, n, d) for m, n in labels(d) if table[m, n] > 0]


def depolarizing_table(p: float, d: int) -> np.ndarray:
    table = np.full((d, d), p / (d * d - 1))
    table[0, 0] = 1 - p
    return table


def build(spec: ChannelSpec) -> KrausChannel:
    kind = spec.kind
    if kind not in KINDS:
        raise ValidationError(f"unknown channel kind {kind!r}; expected one of {KINDS}")
    d = spec.d
    if kind in QUBIT_ONLY and d != 2:
        raise ValidationError(f"{kind} is a qubit channel, got d={d}")

    if kind == "depolarizing":
        p = _unit_interval("p", spec.p)
        ops = pauli_operators(depolarizing_table(p, d), d)
    elif kind == "pauli":
        if spec.probs is None:
            raise ValidationError("pauli channel needs a 'probs' table")
        ops = pauli_operators(spec.probs, d)
    elif kind == "dephasing":
        p = _unit_interval("p", spec.p)
        ops = [np.sqrt(1 - p / 2) * np.eye(2), np.sqrt(p / 2) * Z]
        ops = [a for a, w in zip(ops, (1 - p / 2, p / 2)) if w > 0]
    elif kind == "amplitude_damping":
        g = _unit_interval("gamma", spec.gamma)
        a0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
        a1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
        ops = [a0, a1] if g > 0 else [a0]
    else:
        if not spec.operators:
            raise ValidationError("kraus channel needs a non-empty 'operators' list")
        ops = list(spec.operators)
    return KrausChannel(d, tuple(ops))


def depolarizing(p: float, d: int = 2) -> KrausChannel:
    return build(ChannelSpec("depolarizing", d=d, p=p))


def dephasing(p: float) -> KrausChannel:
    return build(ChannelSpec("dephasing", p=p))


def amplitude_damping(gamma: float) -> KrausChannel:
    return build(ChannelSpec("amplitude_damping", gamma=gamma))


def pauli_channel(probs, d: int | None = None) -> KrausChannel:
    """Weyl-Pauli channel from a ``d x d`` table or its flattened ``d**2`` list."""
    probs = np.asarray(probs, dtype=float)
    if d is None:
        d = probs.shape[0] if probs.ndim == 2 else math.isqrt(probs.size)
    if probs.size != d * d:
        raise ValidationError(f"pauli channel needs {d * d} probabilities, got {probs.size}")
    return build(ChannelSpec("pauli", d=d, probs=tuple(map(tuple, probs.reshape(d, d)))))


def identity(d: int = 2) -> KrausChannel:
    return KrausChannel(d, (np.eye(d, dtype=complex),))


# --- serialization -----------------------------------------------------------


def _encode_matrix(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def decode_matrix(obj, shape: tuple[int, int] | None = None, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{what}: expected nested rows of [re, im] pairs, got shape {arr.shape}")
    m = arr[..., 0] + 1j * arr[..., 1]
    if shape is not None and m.shape != shape:
        raise ValidationError(f"{what}: shape {m.shape} != {shape}")
    return m


_ALLOWED_KEYS = {
    "depolarizing": {"kind", "d", "p"},
    "pauli": {"kind", "d", "probs"},
    "dephasing": {"kind", "d", "p"},
    "amplitude_damping": {"kind", "d", "gamma"},
    "kraus": {"kind", "d", "operators"},
}


def _as_int(name: str, v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        raise ParseError(f"{name!r} must be an integer, got {v!r}")
    return int(v)


def _as_float(name: str, v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{name!r} must be a number, got {v!r}")
    return float(v)


def spec_from_json(obj: Any) -> ChannelSpec:
    """Strictly parse the channel JSON object; unknown keys are rejected."""
    if not isinstance(obj, dict):
        raise ParseError("channel JSON must be an object")
    kind = obj.get("kind")
    if kind not in _ALLOWED_KEYS:
        raise ParseError(f"unknown or missing channel kind {kind!r}")
    extra = set(obj) - _ALLOWED_KEYS[kind]
    if extra:
        raise ParseError(f"unknown keys for kind {kind!r}: {sorted(extra)}")
    d = _as_int("d", obj.get("d", 2))
    if kind == "kraus":
        if "d" not in obj or "operators" not in obj:
            raise ParseError("kraus channel needs 'd' and 'operators'")
        ops = obj["operators"]
        if not isinstance(ops, list) or not ops:
            raise ParseError("'operators' must be a non-empty list")
        mats = tuple(decode_matrix(a, (d, d), f"operator {i}") for i, a in enumerate(ops))
        return ChannelSpec("kraus", d=d, operators=mats)
    if kind == "pauli":
        probs = obj.get("probs")
        if not isinstance(probs, list) or not all(isinstance(r, list) for r in probs):
            raise ParseError("'probs' must be a table of rows")
        if "d" not in obj:
            d = len(probs)
        table = tuple(tuple(_as_float("probs", x) for x in row) for row in probs)
        return ChannelSpec("pauli", d=d, probs=table)
    key = "gamma" if kind == "amplitude_damping" else "p"
    if key not in obj:
        raise ParseError(f"{kind} channel needs {key!r}")
    return ChannelSpec(kind, d=d, **{key: _as_float(key, obj[key])})


def parse_inline(text: str) -> ChannelSpec:
    """Parse ``"kind:key=value,key=value"``.

    ``probs`` for the Pauli kind is written row-major with ``;`` separators,
    e.g. ``pauli:d=2,probs=0.7;0.1;0.1;0.1``.
    """
    return spec_from_json(inline_fields(text))


def inline_fields(text: str) -> dict[str, Any]:
    """The JSON-equivalent object of an inline spec, not yet validated."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip()
    if kind not in _ALLOWED_KEYS or kind == "kraus":
        raise ParseError(f"unknown builtin channel kind {kind!r}")
    obj: dict[str, Any] = {"kind": kind}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq:
            raise ParseError(f"expected key=value, got {item!r}")
        try:
            if key == "d":
                obj["d"] = int(value)
            elif key == "probs":
                flat = [float(x) for x in value.split(";")]
                side = int(round(np.sqrt(len(flat))))
                if side * side != len(flat):
                    raise ParseError(f"probs needs a square number of entries, got {len(flat)}")
                obj["probs"] = [flat[i * side : (i + 1) * side] for i in range(side)]
            else:
                obj[key] = float(value)
        except ValueError as exc:
            raise ParseError(f"bad value in {item!r}: {exc}") from exc
    return obj


def load_spec(path: str | Path) -> ChannelSpec:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return spec_from_json(obj)

"""Entropies and detectable capacity lower bounds.

The detectable bound is ``Q_DET = S[E(I/d)] - H(p)``, where ``p`` holds the
populations of the Choi state in some orthonormal bipartite basis. For
qubits, three one-parameter-pair families of bases are reachable from the
``xx``/``yy``/``zz`` settings alone; :func:`qdet_qubit` minimizes ``H(p)``
over them. :func:`qdet_bell_general` uses the generalized Bell basis for
any ``d``.

All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

from .channels import ChannelSpec, KrausChannel, check_state
from .exceptions import ValidationError
from .numerics import eig_hermitian, ket, partial_trace
from .pauli import I2, PAULI, bell_probabilities, qubit_bell_quartet
from .search import golden_section, golden_section_max

PROB_ATOL = 1e-9
GRID_SIZE = 64
SWEEP_TOL = 1e-10
MAX_SWEEPS = 200
TIE_ATOL = 1e-12
GENERALIZED_BELL = "generalized-bell"


# --- entropies ---------------------------------------------------------------


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def normalize_probabilities(p, atol: float = PROB_ATOL) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or np.any(p < -atol):
        raise ValidationError(f"not a probability vector: {p}")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if total <= 0:
        raise ValidationError("probability vector has zero mass")
    return p / total


def shannon(p) -> float:
    p = normalize_probabilities(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def von_neumann(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    w = eig_hermitian(rho).eigenvalues
    if w[0] < -PROB_ATOL:
        raise ValidationError(f"not a state: eigenvalue {w[0]:.3e}")
    return shannon(np.clip(w, 0.0, None))


def purification(rho) -> np.ndarray:
    """``sum_i sqrt(l_i) |v_i>|i>`` with the reference as second factor."""
    eig = eig_hermitian(rho)
    lam = np.clip(eig.eigenvalues, 0.0, None)
    d = len(lam)
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        psi += math.sqrt(lam[i]) * np.kron(eig.eigenvectors[:, i], np.eye(d)[i])
    return psi


def entropy_exchange(ch: KrausChannel, rho) -> float:
    psi = purification(check_state(rho, ch.d))
    return von_neumann(ch.apply_extended(np.outer(psi, psi.conj()), check=False))


def coherent_information(ch: KrausChannel, rho) -> float:
    rho = check_state(rho, ch.d)
    return von_neumann(ch.apply(rho)) - entropy_exchange(ch, rho)


# --- qubit bases reachable from xx, yy, zz -------------------------------------


@dataclass(frozen=True)
class MeasurementBasis:
    """Family 1-3 basis with ``(a, b) = (cos theta, sin theta)``, ``(c, d) = (cos phi, sin phi)``."""

    family: int
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.family not in (1, 2, 3):
            raise ValidationError(f"basis family must be 1, 2 or 3, got {self.family}")

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (math.cos(self.theta), math.sin(self.theta), math.cos(self.phi), math.sin(self.phi))

    def describe(self) -> str:
        a, b, c, d = self.coefficients
        return (
            f"family=B{self.family} theta={self.theta:.6f} phi={self.phi:.6f} "
            f"a={a:.6f} b={b:.6f} c={c:.6f} d={d:.6f}"
        )


BELL_BASIS = MeasurementBasis(1, 0.0, 0.0)


def basis_vectors(b: MeasurementBasis) -> np.ndarray:
    """The four basis states as columns."""
    bell = qubit_bell_quartet()
    pp, pm, sp, sm = bell["phi+"], bell["phi-"], bell["psi+"], bell["psi-"]
    a, bb, c, d = b.coefficients
    if b.family == 1:
        vs = [a * pp + bb * pm, -bb * pp + a * pm, c * sp + d * sm, -d * sp + c * sm]
    elif b.family == 2:
        vs = [a * pp + bb * sp, -bb * pp + a * sp, c * pm + d * sm, -d * pm + c * sm]
    else:
        vs = [a * pp + 1j * bb * sm, 1j * bb * pp + a * sm, c * pm + 1j * d * sp, 1j * d * pm + c * sp]
    return np.column_stack([ket(v) for v in vs])


def basis_probabilities(output, b: MeasurementBasis) -> np.ndarray:
    """Direct populations ``<v_i|rho|v_i>`` of a two-qubit state."""
    rho = np.asarray(output, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"basis probabilities need a two-qubit state, got {rho.shape}")
    v = basis_vectors(b)
    return np.real(np.einsum("ik,ij,jk->k", v.conj(), rho, v))


STAT_NAMES = ("xx", "yy", "zz", "xi", "ix", "yi", "iy", "zi", "iz")


@dataclass(frozen=True)
class PauliStats:
    """Two-qubit expectations obtainable from the xx, yy, zz settings.

    ``xi`` is ``<X (x) I>``, ``ix`` is ``<I (x) X>``, and so on; the
    marginals come from the same setting as the matching correlator.
    """

    xx: float
    yy: float
    zz: float
    xi: float = 0.0
    ix: float = 0.0
    yi: float = 0.0
    iy: float = 0.0
    zi: float = 0.0
    iz: float = 0.0

    @classmethod
    def from_state(cls, rho) -> PauliStats:
        rho = np.asarray(rho, dtype=complex)
        vals = {name: float(np.real(np.trace(rho @ pauli_operator(name)))) for name in STAT_NAMES}
        return cls(**vals)

    def get(self, name: str) -> float:
        return 1.0 if name == "ii" else getattr(self, name)

    @property
    def system_bloch(self) -> np.ndarray:
        return np.array([self.xi, self.yi, self.zi])


def pauli_operator(name: str) -> np.ndarray:
    """Two-qubit Pauli product from a two-letter name such as ``"zi"``."""
    one = {"i": I2, **PAULI}
    return np.kron(one[name[0]], one[name[1]])


# Each pair of basis vectors x|A> + y|B> has projectors
#   const + (x^2 - y^2) * cos_term + x y * sin_term,
# the orthogonal partner following from (x, y) -> (-y, x).
# Entries: (sign of the diagonal correlator, correlator name,
#           [(weight, name), ...] for cos_term, [(weight, name), ...] for 2*sin_term)
_PAIR_TABLE = {
    1: (
        (+1, "zz", [(1, "xx"), (-1, "yy")], [(1, "zi"), (1, "iz")]),
        (-1, "zz", [(1, "xx"), (1, "yy")], [(1, "zi"), (-1, "iz")]),
    ),
    2: (
        (+1, "xx", [(1, "zz"), (-1, "yy")], [(1, "xi"), (1, "ix")]),
        (-1, "xx", [(1, "zz"), (1, "yy")], [(-1, "xi"), (1, "ix")]),
    ),
    3: (
        (-1, "yy", [(1, "zz"), (1, "xx")], [(-1, "yi"), (1, "iy")]),
        (+1, "yy", [(1, "zz"), (-1, "xx")], [(1, "yi"), (1, "iy")]),
    ),
}


def _pair_terms(get: Callable[[str], object], family: int):
    """Per pair: (const, cos-coefficient, sin-coefficient) in the angle 2*theta.

    ``get`` maps a Pauli-product name to either an expectation value or an
    operator, so the same table yields probabilities or projector matrices.
    """
    out = []
    for sign, diag, cos_terms, sin_terms in _PAIR_TABLE[family]:
        const = (get("ii") + sign * get(diag)) / 4
        cos_c = sum(w * get(n) for w, n in cos_terms) / 4
        # x y / 2 = sin(2 theta) / 4
        sin_c = sum(w * get(n) for w, n in sin_terms) / 4
        out.append((const, cos_c, sin_c))
    return out


def pauli_projectors(b: MeasurementBasis) -> list[np.ndarray]:
    """Basis projectors assembled from Pauli products (no state vectors)."""
    (k1, c1, s1), (k2, c2, s2) = _pair_terms(pauli_operator, b.family)
    t, f = 2 * b.theta, 2 * b.phi
    return [
        k1 + math.cos(t) * c1 + math.sin(t) * s1,
        k1 - math.cos(t) * c1 - math.sin(t) * s1,
        k2 + math.cos(f) * c2 + math.sin(f) * s2,
        k2 - math.cos(f) * c2 - math.sin(f) * s2,
    ]


def projector_probabilities(stats: PauliStats, family: int, theta, phi) -> np.ndarray:
    """Basis populations from measured statistics; broadcasts over angle arrays.

    The last axis of the result indexes the four basis vectors.
    """
    (k1, c1, s1), (k2, c2, s2) = _pair_terms(stats.get, family)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    u = c1 * np.cos(2 * theta) + s1 * np.sin(2 * theta)
    v = c2 * np.cos(2 * phi) + s2 * np.sin(2 * phi)
    return np.stack([k1 + u, k1 - u, k2 + v, k2 - v], axis=-1)


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    # negative estimated populations are clipped, then rows renormalized
    p = np.clip(p, 0.0, None)
    p = p / p.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=-1)


def _scalar_objective(stats: PauliStats, family: int):
    (k1, c1, s1), (k2, c2, s2) = _pair_terms(stats.get, family)

    def h(theta: float, phi: float) -> float:
        u = c1 * math.cos(2 * theta) + s1 * math.sin(2 * theta)
        v = c2 * math.cos(2 * phi) + s2 * math.sin(2 * phi)
        ps = [max(k1 + u, 0.0), max(k1 - u, 0.0), max(k2 + v, 0.0), max(k2 - v, 0.0)]
        total = sum(ps)
        return -sum(x / total * math.log2(x / total) for x in ps if x > 0)

    return h


def _canonical_angle(x: float) -> float:
    # x and x + pi/2 describe the same basis with the pair swapped
    y = math.fmod(x, math.pi / 2)
    if y < 0:
        y += math.pi / 2
    if math.pi / 2 - y < 1e-9:
        y = 0.0
    return y


@dataclass(frozen=True)
class FamilyOptimum:
    basis: MeasurementBasis
    entropy: float


def optimize_family(stats: PauliStats, family: int, grid: int = GRID_SIZE) -> FamilyOptimum:
    """Minimize ``H(p)`` over ``(theta, phi)`` for one family.

    Coarse ``grid x grid`` scan of ``[0, pi)^2``, then coordinate-wise
    golden-section refinement inside one grid cell of the best point, until
    a full sweep improves the entropy by less than ``SWEEP_TOL``.
    """
    angles = np.arange(grid) * (math.pi / grid)
    tt, ff = np.meshgrid(angles, angles, indexing="ij")
    hs = _entropy_rows(projector_probabilities(stats, family, tt, ff))
    i, j = np.unravel_index(int(np.argmin(hs)), hs.shape)
    theta, phi = float(angles[i]), float(angles[j])
    h = _scalar_objective(stats, family)
    best = h(theta, phi)
    step = math.pi / grid
    for _ in range(MAX_SWEEPS):
        start = best
        t_new, _ = golden_section(lambda t: h(t, phi), theta - step, theta + step)
        if h(t_new, phi) <= best:
            theta, best = t_new, h(t_new, phi)
        f_new, _ = golden_section(lambda f: h(theta, f), phi - step, phi + step)
        if h(theta, f_new) <= best:
            phi, best = f_new, h(theta, f_new)
        if start - best < SWEEP_TOL:
            break
    theta, phi = _canonical_angle(theta), _canonical_angle(phi)
    # lexicographic tie-break: prefer angle 0 when it is as good
    if h(0.0, phi) <= h(theta, phi) + TIE_ATOL:
        theta = 0.0
    if h(theta, 0.0) <= h(theta, phi) + TIE_ATOL:
        phi = 0.0
    return FamilyOptimum(MeasurementBasis(family, theta, phi), h(theta, phi))


def optimize_basis(stats: PauliStats) -> FamilyOptimum:
    """Best basis over all three families; ties go to the lowest family index."""
    results = [optimize_family(stats, fam) for fam in (1, 2, 3)]
    floor = min(r.entropy for r in results)
    return next(r for r in results if r.entropy <= floor + TIE_ATOL)


# --- reports -------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    d: int
    qdet: float
    output_entropy: float
    best_basis: Union[MeasurementBasis, str]
    pvec: np.ndarray
    certified: bool
    stderr: float | None = None
    clipped_mass: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def ce_lower(self) -> float:
        return math.log2(self.d) + self.qdet

    @property
    def p_lower(self) -> float:
        return self.qdet


def ce_lower(report: BoundReport, d: int) -> float:
    """Entanglement-assisted capacity bound ``log2 d + Q_DET``."""
    return math.log2(d) + report.qdet


def report_from_stats(stats: PauliStats, output_entropy: float, bell_only: bool = False) -> BoundReport:
    if bell_only:
        basis = BELL_BASIS
    else:
        basis = optimize_basis(stats).basis
    raw = projector_probabilities(stats, basis.family, basis.theta, basis.phi)
    clipped = float(-np.sum(np.minimum(raw, 0.0)))
    pvec = np.clip(raw, 0.0, None)
    pvec = pvec / pvec.sum()
    qdet = output_entropy - shannon(pvec)
    return BoundReport(2, qdet, output_entropy, basis, pvec, qdet > 0, clipped_mass=clipped)


def qdet_qubit(ch: KrausChannel, bell_only: bool = False) -> BoundReport:
    """Detectable bound for a qubit channel from the xx/yy/zz statistics of its Choi state."""
    if ch.d != 2:
        raise ValidationError(f"qdet_qubit needs a qubit channel, got d={ch.d}")
    choi = ch.choi_state()
    s_out = von_neumann(partial_trace(choi, (2, 2), keep="A"))
    return report_from_stats(PauliStats.from_state(choi), s_out, bell_only=bell_only)


def qdet_bell_general(ch: KrausChannel) -> BoundReport:
    choi = ch.choi_state()
    d = ch.d
    s_out = von_neumann(partial_trace(choi, (d, d), keep="A"))
    pvec = normalize_probabilities(bell_probabilities(choi, d))
    qdet = s_out - shannon(pvec)
    return BoundReport(d, qdet, s_out, GENERALIZED_BELL, pvec, qdet > 0)


# --- analytic references ---------------------------------------------------------


@dataclass(frozen=True)
class CapacityReference:
    q: float | None = None
    lower: float | None = None
    upper: float | None = None
    note: str = ""


def hashing_bound(p: float, d: int = 2) -> float:
    return math.log2(d) - binary_entropy(p) - p * math.log2(d * d - 1)


def amplitude_damping_capacity(gamma: float) -> float:
    """``max_q H2((1-gamma) q) - H2(gamma q)``, zero for ``gamma >= 1/2``."""
    if gamma >= 0.5:
        return 0.0
    _, q = golden_section_max(
        lambda x: binary_entropy((1 - gamma) * x) - binary_entropy(gamma * x), 0.0, 1.0, tol=1e-10
    )
    return max(q, 0.0)


def analytic_reference(spec: ChannelSpec) -> CapacityReference | None:
    if spec.kind == "dephasing":
        return CapacityReference(q=1 - binary_entropy(spec.p / 2), note="degradable: Q = Q1")
    if spec.kind == "amplitude_damping":
        return CapacityReference(q=amplitude_damping_capacity(spec.gamma), note="degradable: Q = Q1")
    if spec.kind == "depolarizing":
        lower = max(hashing_bound(spec.p, spec.d), 0.0)
        if spec.d == 2:
            return CapacityReference(
                lower=lower, upper=max(1 - 4 * spec.p, 0.0), note="hashing lower, 1-4p upper"
            )
        return CapacityReference(lower=lower, note="hashing lower bound")
    if spec.kind == "pauli":
        table = np.asarray(spec.probs, dtype=float)
        return CapacityReference(
            lower=max(math.log2(spec.d) - shannon(table.reshape(-1)), 0.0), note="hashing lower bound"
        )
    return None


def with_stderr(report: BoundReport, stderr: float, certified: bool) -> BoundReport:
    return replace(report, stderr=stderr, certified=certified)

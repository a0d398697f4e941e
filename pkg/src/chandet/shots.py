"""Finite-statistics simulation of the qubit xx/yy/zz measurement scheme.

Each setting measures ``sigma_a`` on the system and on the reference qubit
of the Choi state; the four joint outcomes are drawn from a multinomial.
Random streams are keyed by ``(seed, setting index)`` through
``numpy.random.SeedSequence`` spawn keys, so one setting's draws never
depend on another's. Bootstrap resampling uses keys ``(seed, 3, b)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .capacity import BoundReport, PauliStats, binary_entropy, report_from_stats, with_stderr
from .channels import KrausChannel, check_state
from .exceptions import ValidationError
from .pauli import PAULI
from .witness import WitnessVerdict

log = logging.getLogger(__name__)

SETTINGS = ("xx", "yy", "zz")
# joint outcomes in count order: (+,+), (+,-), (-,+), (-,-)
OUTCOME_SIGNS = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]])
BOOTSTRAP_KEY = len(SETTINGS)
CERTIFY_SIGMAS = 3.0


@dataclass(frozen=True)
class ShotConfig:
    shots_per_setting: int
    seed: int = 0
    bootstrap: int = 100

    def __post_init__(self):
        if int(self.shots_per_setting) < 1:
            raise ValidationError("shots_per_setting must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SettingCounts:
    setting: str
    counts: tuple[int, int, int, int]

    @property
    def shots(self) -> int:
        return sum(self.counts)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def outcome_probabilities(output, setting: str) -> np.ndarray:
    if setting not in SETTINGS:
        raise ValidationError(f"unknown setting {setting!r}")
    s = PAULI[setting[0]]
    plus, minus = (np.eye(2) + s) / 2, (np.eye(2) - s) / 2
    projs = [np.kron(p, q) for p in (plus, minus) for q in (plus, minus)]
    probs = np.array([np.real(np.trace(output @ p)) for p in projs])
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_setting(output, setting: str, cfg: ShotConfig) -> SettingCounts:
    output = check_state(output, 4)
    probs = outcome_probabilities(output, setting)
    rng = stream(cfg.seed, SETTINGS.index(setting))
    counts = rng.multinomial(int(cfg.shots_per_setting), probs)
    return SettingCounts(setting, tuple(int(c) for c in counts))


def sample_all(output, cfg: ShotConfig) -> dict[str, SettingCounts]:
    return {s: sample_setting(output, s, cfg) for s in SETTINGS}


@dataclass(frozen=True)
class Estimates:
    stats: PauliStats
    stderr: dict[str, float]
    shots: dict[str, int]


def _setting_moments(counts: SettingCounts) -> tuple[float, float, float, int]:
    n = counts.shots
    if n == 0:
        raise ValidationError(f"setting {counts.setting} has zero shots")
    f = np.asarray(counts.counts, dtype=float) / n
    corr = float(f @ (OUTCOME_SIGNS[:, 0] * OUTCOME_SIGNS[:, 1]))
    sys_marg = float(f @ OUTCOME_SIGNS[:, 0])
    ref_marg = float(f @ OUTCOME_SIGNS[:, 1])
    return corr, sys_marg, ref_marg, n


def estimate_statistics(counts: Mapping[str, SettingCounts]) -> Estimates:
    """Correlators and both single-qubit marginals for every setting.

    Marginals ignore the other qubit's outcome. Standard errors are
    ``sqrt((1 - e**2) / n)`` for each estimate ``e``.
    """
    vals: dict[str, float] = {}
    errs: dict[str, float] = {}
    shots: dict[str, int] = {}
    for setting in SETTINGS:
        if setting not in counts:
            raise ValidationError(f"missing counts for setting {setting}")
        corr, sm, rm, n = _setting_moments(counts[setting])
        a = setting[0]
        for name, e in ((setting, corr), (a + "i", sm), ("i" + a, rm)):
            vals[name] = e
            errs[name] = math.sqrt(max(1 - e * e, 0.0) / n)
        shots[setting] = n
    return Estimates(PauliStats(**vals), errs, shots)


def output_entropy_estimate(stats: PauliStats) -> float:
    r = min(float(np.linalg.norm(stats.system_bloch)), 1.0)
    return binary_entropy((1 + r) / 2)


def _report(est: Estimates) -> BoundReport:
    return report_from_stats(est.stats, output_entropy_estimate(est.stats))


def estimate_qdet(ch: KrausChannel, cfg: ShotConfig) -> BoundReport:
    """Detectable bound from simulated counts, with a parametric-bootstrap error bar.

    Certified only when ``qdet - 3 * stderr > 0``.
    """
    if ch.d != 2:
        raise ValidationError("finite-shot simulation is qubit only")
    counts = sample_all(ch.choi_state(), cfg)
    report = _report(estimate_statistics(counts))
    if report.clipped_mass > 0:
        log.info("clipped %.3e of negative estimated probability mass", report.clipped_mass)

    boots = []
    for b in range(cfg.bootstrap):
        rng = stream(cfg.seed, BOOTSTRAP_KEY, b)
        resampled = {
            s: SettingCounts(s, tuple(int(x) for x in rng.multinomial(c.shots, np.asarray(c.counts) / c.shots)))
            for s, c in counts.items()
        }
        boots.append(_report(estimate_statistics(resampled)).qdet)
    stderr = float(np.std(boots, ddof=1)) if len(boots) > 1 else float("nan")
    certified = bool(report.qdet - CERTIFY_SIGMAS * stderr > 0) if len(boots) > 1 else report.qdet > 0
    return with_stderr(report, stderr, certified)


def witness_from_estimates(est: Estimates) -> WitnessVerdict:
    s = est.stats
    value = (1 - s.xx + s.yy - s.zz) / 4
    stderr = math.sqrt(sum(est.stderr[k] ** 2 for k in SETTINGS)) / 4
    return WitnessVerdict(value, bool(value + CERTIFY_SIGMAS * stderr < 0), stderr)


def estimate_witness(ch: KrausChannel, cfg: ShotConfig) -> WitnessVerdict:
    """Qubit entanglement-breaking witness from simulated counts (3-sigma rule)."""
    if ch.d != 2:
        raise ValidationError("finite-shot simulation is qubit only")
    counts = sample_all(ch.choi_state(), cfg)
    return witness_from_estimates(estimate_statistics(counts))

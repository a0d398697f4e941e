import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chandet import channels
from chandet.capacity import (
    BELL_BASIS,
    MeasurementBasis,
    PauliStats,
    amplitude_damping_capacity,
    analytic_reference,
    basis_probabilities,
    basis_vectors,
    binary_entropy,
    ce_lower,
    coherent_information,
    entropy_exchange,
    optimize_basis,
    pauli_projectors,
    projector_probabilities,
    qdet_bell_general,
    qdet_qubit,
    shannon,
    von_neumann,
)
from chandet.channels import ChannelSpec
from chandet.exceptions import ValidationError
from chandet.numerics import projector
from chandet.pauli import Z, max_entangled, qubit_bell_quartet

from conftest import random_channel, random_state

# 30-digit values computed with mpmath from the closed forms
H2_0125 = 0.543564443199596405988
H2_0375 = 0.954434002924964964536
QDET_DEPHASING_05 = 0.188721875540867136090
QDET_DEPOL_01 = 0.372508156338603160601
QDET_AD_025 = 0.410869559725368558548
QDET_DEPOL3_005 = 1.14856554360520005269
BELLVEC_AD_025 = (0.870512701892219323382, 0.00448729810778067661814, 0.0625, 0.0625)
A_AD_025, B_AD_025 = 0.997432533711124500152, 0.0716124339385730385858
Q_AD_025 = 0.415037499278843818546
Q_AD_03 = 0.327954761913956263099


def ad_closed_form(g):
    return binary_entropy((1 - g) / 2) - binary_entropy(g / 2)


def brute_capacity_ad(g, n=200_001):
    # dense grid oracle for the 1-D maximization
    q = np.linspace(0, 1, n)
    h = lambda x: np.where((x > 0) & (x < 1), -x * np.log2(np.clip(x, 1e-300, 1)) - (1 - x) * np.log2(np.clip(1 - x, 1e-300, 1)), 0.0)
    return max(float(np.max(h((1 - g) * q) - h(g * q))), 0.0)


# --- entropies -----------------------------------------------------------------


def test_shannon_examples():
    assert shannon([1, 0, 0, 0]) == 0
    assert shannon([0.25] * 4) == pytest.approx(2)
    assert shannon([0.875, 0, 0.125, 0]) == pytest.approx(H2_0125, abs=1e-12)


def test_shannon_rejects_negative():
    with pytest.raises(ValidationError):
        shannon([1.1, -0.1])


def test_von_neumann_examples():
    assert von_neumann(projector(max_entangled(3))) == pytest.approx(0, abs=1e-12)
    assert von_neumann(np.eye(5) / 5) == pytest.approx(math.log2(5))
    assert von_neumann((np.eye(2) + 0.25 * Z) / 2) == pytest.approx(H2_0375, abs=1e-12)


def test_von_neumann_rejects_non_state():
    with pytest.raises(ValidationError):
        von_neumann(np.diag([1.2, -0.2]))


def test_coherent_information_examples():
    half = np.eye(2) / 2
    assert coherent_information(channels.identity(2), half) == pytest.approx(1)
    # p = 3/4 makes the qubit Choi state I/4
    assert coherent_information(channels.depolarizing(0.75), half) == pytest.approx(-1)
    for p in (0.1, 0.5, 0.9):
        assert coherent_information(channels.dephasing(p), half) == pytest.approx(1 - binary_entropy(p / 2))


def test_entropy_exchange_independent_of_purification(rng):
    ch = random_channel(2, 3, rng)
    rho = random_state(2, rng)
    # alternative purification: rotate the reference by a random unitary
    w, v = np.linalg.eigh(rho)
    u, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    psi = sum(np.sqrt(max(w[i], 0)) * np.kron(v[:, i], u[:, i]) for i in range(2))
    alt = von_neumann(ch.apply_extended(np.outer(psi, psi.conj()), check=False))
    assert entropy_exchange(ch, rho) == pytest.approx(alt, abs=1e-10)


# --- bases -----------------------------------------------------------------------


def test_basis_family1_zero_angles_is_bell():
    b = qubit_bell_quartet()
    expected = np.column_stack([b["phi+"], b["phi-"], b["psi+"], b["psi-"]])
    assert np.allclose(basis_vectors(BELL_BASIS), expected)


def test_basis_damping_eigenbasis():
    g = 0.25
    basis = MeasurementBasis(1, math.atan2(B_AD_025, A_AD_025), math.pi / 4)
    out = channels.amplitude_damping(g).choi_state()
    v = basis_vectors(basis)
    # each basis vector is an eigenvector of the output state
    for k in range(4):
        w = out @ v[:, k]
        lam = np.vdot(v[:, k], w)
        assert np.allclose(w, lam * v[:, k], atol=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(-4, 4), st.floats(-4, 4))
def test_basis_orthonormal(family, theta, phi):
    v = basis_vectors(MeasurementBasis(family, theta, phi))
    assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(0, math.pi), st.floats(0, math.pi))
def test_pauli_projectors_equal_rank_one(family, theta, phi):
    b = MeasurementBasis(family, theta, phi)
    v = basis_vectors(b)
    for k, proj in enumerate(pauli_projectors(b)):
        assert np.max(np.abs(proj - projector(v[:, k]))) <= 1e-10


def test_bad_family():
    with pytest.raises(ValidationError):
        MeasurementBasis(4)


def test_basis_probabilities_damping_bell():
    out = channels.amplitude_damping(0.25).choi_state()
    assert np.allclose(basis_probabilities(out, BELL_BASIS), BELLVEC_AD_025, atol=1e-12)


def test_basis_probabilities_damping_optimal():
    out = channels.amplitude_damping(0.25).choi_state()
    basis = MeasurementBasis(1, math.atan2(B_AD_025, A_AD_025), math.pi / 4)
    assert np.allclose(basis_probabilities(out, basis), [0.875, 0, 0.125, 0], atol=1e-12)


def test_basis_probabilities_identity():
    out = channels.identity(2).choi_state()
    assert np.allclose(basis_probabilities(out, BELL_BASIS), [1, 0, 0, 0])


@pytest.mark.parametrize("family", [1, 2, 3])
def test_probability_paths_agree(rng, family):
    for _ in range(20):
        rho = random_state(4, rng)
        stats = PauliStats.from_state(rho)
        theta, phi = rng.uniform(0, math.pi, 2)
        b = MeasurementBasis(family, theta, phi)
        direct = basis_probabilities(rho, b)
        assembled = projector_probabilities(stats, family, theta, phi)
        assert np.max(np.abs(direct - assembled)) <= 1e-10


# --- detectable bounds -------------------------------------------------------------


def test_qdet_dephasing():
    r = qdet_qubit(channels.dephasing(0.5))
    assert r.qdet == pytest.approx(QDET_DEPHASING_05, abs=1e-10)
    assert r.best_basis == BELL_BASIS


def test_qdet_depolarizing():
    assert qdet_qubit(channels.depolarizing(0.1)).qdet == pytest.approx(QDET_DEPOL_01, abs=1e-10)


def test_qdet_amplitude_damping():
    r = qdet_qubit(channels.amplitude_damping(0.25))
    assert r.qdet == pytest.approx(QDET_AD_025, abs=1e-9)
    assert r.output_entropy == pytest.approx(H2_0375, abs=1e-12)
    a, b, c, d = r.best_basis.coefficients
    assert r.best_basis.family == 1
    assert (a, b) == pytest.approx((A_AD_025, B_AD_025), abs=1e-6)
    assert (c, d) == pytest.approx((1 / math.sqrt(2),) * 2, abs=1e-6)


def test_qdet_needs_qubit():
    with pytest.raises(ValidationError):
        qdet_qubit(channels.depolarizing(0.1, 3))


def test_qdet_general_depolarizing_d3():
    assert qdet_bell_general(channels.depolarizing(0.05, 3)).qdet == pytest.approx(QDET_DEPOL3_005, abs=1e-12)


def test_qdet_general_pauli_is_hashing():
    q = np.array([[0.6, 0.25], [0.1, 0.05]])
    r = qdet_bell_general(channels.pauli_channel(q))
    assert r.qdet == pytest.approx(1 - shannon(q.reshape(-1)), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_qdet_general_identity(d):
    assert qdet_bell_general(channels.identity(d)).qdet == pytest.approx(math.log2(d), abs=1e-10)


def test_report_consistency(rng):
    for ch in (channels.amplitude_damping(0.3), random_channel(2, 2, rng)):
        for r in (qdet_qubit(ch), qdet_qubit(ch, bell_only=True), qdet_bell_general(ch)):
            assert r.qdet == pytest.approx(r.output_entropy - shannon(r.pvec), abs=1e-12)
            assert r.ce_lower == math.log2(r.d) + r.qdet
            assert r.p_lower == r.qdet
            assert ce_lower(r, r.d) == r.ce_lower
            assert abs(r.pvec.sum() - 1) <= 1e-12


def test_ce_lower_examples():
    assert qdet_qubit(channels.identity(2)).ce_lower == pytest.approx(2)
    assert qdet_qubit(channels.amplitude_damping(0.25)).ce_lower == pytest.approx(1 + QDET_AD_025, abs=1e-9)
    assert qdet_qubit(channels.depolarizing(0.1)).ce_lower == pytest.approx(1 + QDET_DEPOL_01, abs=1e-10)


def test_negative_qdet_not_certified():
    r = qdet_qubit(channels.depolarizing(0.3))
    assert r.qdet < 0 and not r.certified


# --- analytic references -------------------------------------------------------------


def test_reference_dephasing():
    assert analytic_reference(ChannelSpec("dephasing", p=0.5)).q == pytest.approx(QDET_DEPHASING_05)


@pytest.mark.parametrize("g,expected", [(0.25, Q_AD_025), (0.3, Q_AD_03)])
def test_reference_amplitude_damping(g, expected):
    assert amplitude_damping_capacity(g) == pytest.approx(expected, abs=1e-10)
    assert amplitude_damping_capacity(g) == pytest.approx(brute_capacity_ad(g), abs=1e-8)


def test_reference_amplitude_damping_zero_beyond_half():
    assert analytic_reference(ChannelSpec("amplitude_damping", gamma=0.5)).q == 0
    assert amplitude_damping_capacity(0.7) == 0


def test_reference_depolarizing_upper():
    ref = analytic_reference(ChannelSpec("depolarizing", p=0.25))
    assert ref.upper == 0 and ref.q is None


def test_reference_kraus_absent():
    assert analytic_reference(ChannelSpec("kraus", operators=(np.eye(2),))) is None


# --- invariants ------------------------------------------------------------------------

BUILTIN_GRID = (
    [channels.dephasing(p) for p in np.linspace(0, 1, 6)]
    + [channels.depolarizing(p) for p in np.linspace(0, 1, 6)]
    + [channels.amplitude_damping(g) for g in np.linspace(0, 1, 6)]
)


@pytest.mark.parametrize("ch", BUILTIN_GRID)
def test_bound_chain(ch):
    r = qdet_qubit(ch)
    ic = coherent_information(ch, np.eye(2) / 2)
    assert r.qdet <= ic + 1e-9


@pytest.mark.parametrize("g", np.linspace(0, 0.5, 11))
def test_bound_chain_against_known_capacity(g):
    ch = channels.amplitude_damping(g)
    assert coherent_information(ch, np.eye(2) / 2) <= amplitude_damping_capacity(g) + 1e-9


def test_entropy_exchange_bound_random(rng):
    for _ in range(20):
        ch = random_channel(2, int(rng.integers(1, 5)), rng)
        se = entropy_exchange(ch, np.eye(2) / 2)
        out = ch.choi_state()
        for _ in range(10):
            b = MeasurementBasis(int(rng.integers(1, 4)), *rng.uniform(0, math.pi, 2))
            assert se <= shannon(basis_probabilities(out, b)) + 1e-9


@pytest.mark.parametrize("p", [round(0.1 * k, 10) for k in range(11)])
def test_dephasing_exact(p):
    assert qdet_qubit(channels.dephasing(p)).qdet == pytest.approx(1 - binary_entropy(p / 2), abs=1e-8)


@pytest.mark.parametrize("g", [round(0.05 * k, 10) for k in range(11)])
def test_amplitude_damping_closed_form(g):
    r = qdet_qubit(channels.amplitude_damping(g))
    assert r.qdet == pytest.approx(ad_closed_form(g), abs=1e-6)
    assert amplitude_damping_capacity(g) - r.qdet <= 0.005 + 1e-6


def test_optimizer_beats_bell(rng):
    for _ in range(15):
        ch = random_channel(2, int(rng.integers(1, 5)), rng)
        assert qdet_qubit(ch).qdet >= qdet_qubit(ch, bell_only=True).qdet - 1e-12


def test_optimizer_against_dense_grid(rng):
    # independent check: exhaustive 400x400 scan of every family
    for _ in range(3):
        stats = PauliStats.from_state(random_channel(2, 3, rng).choi_state())
        best = optimize_basis(stats).entropy
        ang = np.linspace(0, math.pi, 400)
        tt, ff = np.meshgrid(ang, ang, indexing="ij")
        floor = np.inf
        for f in (1, 2, 3):
            p = np.clip(projector_probabilities(stats, f, tt, ff), 1e-300, None)
            floor = min(floor, float(np.min(-(p * np.log2(p)).sum(axis=-1))))
        assert best <= floor + 1e-9

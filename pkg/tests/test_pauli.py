import numpy as np
import pytest

from chandet import channels
from chandet.exceptions import ValidationError
from chandet.numerics import projector
from chandet.pauli import (
    QUBIT_SETTING_OF_LABEL,
    X,
    Y,
    Z,
    bell_basis,
    bell_projector_sum,
    bell_state,
    correlators_entangled,
    correlators_system_only,
    labels,
    local_settings,
    max_entangled,
    qubit_bell_quartet,
    qubit_setting_observable,
    weyl,
)

from conftest import random_channel


def test_weyl_qubit_identification():
    assert np.array_equal(weyl(1, 0, 2), Z)
    assert np.array_equal(weyl(0, 1, 2), X)
    assert np.allclose(weyl(1, 1, 2), 1j * Y)


@pytest.mark.parametrize("d", range(2, 9))
def test_weyl_identity_label(d):
    assert np.array_equal(weyl(0, 0, d), np.eye(d))


def test_weyl_out_of_range():
    with pytest.raises(ValidationError):
        weyl(2, 0, 2)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_weyl_orthogonality(d):
    ops = {lab: weyl(*lab, d) for lab in labels(d)}
    for a, ua in ops.items():
        for b, ub in ops.items():
            expected = d if a == b else 0
            assert abs(np.trace(ua.conj().T @ ub) - expected) <= 1e-12


def test_max_entangled():
    assert np.allclose(max_entangled(2), np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(max_entangled(3), np.eye(3).reshape(-1) / np.sqrt(3))
    for d in range(2, 9):
        assert np.linalg.norm(max_entangled(d)) == pytest.approx(1, abs=1e-14)


def test_bell_state_identity_label():
    assert np.allclose(bell_state(0, 0, 3), max_entangled(3))


def test_qubit_bell_states_match_quartet_up_to_phase():
    quartet = list(qubit_bell_quartet().values())
    for m, n in labels(2):
        v = bell_state(m, n, 2)
        overlaps = [abs(np.vdot(q, v)) for q in quartet]
        assert max(overlaps) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_bell_gram_is_identity(d):
    b = bell_basis(d)
    assert np.max(np.abs(b.conj().T @ b - np.eye(d * d))) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_bell_projector_sum_matches_outer_product(d):
    for m, n in labels(d):
        diff = bell_projector_sum(m, n, d) - projector(bell_state(m, n, d))
        assert np.max(np.abs(diff)) <= 1e-10


def test_bell_projector_sum_qubit_phi_plus():
    zz, xx, yy = (np.kron(s, s) for s in (Z, X, Y))
    expected = (np.eye(4) + zz + xx - yy) / 4
    assert np.allclose(bell_projector_sum(0, 0, 2), expected)


@pytest.mark.parametrize("d", [2, 3])
def test_bell_projector_trace_and_completeness(d):
    total = sum(bell_projector_sum(m, n, d) for m, n in labels(d))
    assert np.allclose(total, np.eye(d * d), atol=1e-12)
    assert np.trace(bell_projector_sum(1, 1, d)) == pytest.approx(1)


def test_local_settings_qubit():
    pairs = local_settings(2)
    assert len(pairs) == 3
    for lab, (u, uc) in zip(labels(2, False), pairs):
        name, sign = QUBIT_SETTING_OF_LABEL[lab]
        assert np.allclose(np.kron(u, uc), sign * qubit_setting_observable(name))


@pytest.mark.parametrize("d", [3, 5])
def test_local_settings_count_and_unitarity(d):
    pairs = local_settings(d)
    assert len(pairs) == d * d - 1
    for u, uc in pairs:
        assert np.allclose(u @ u.conj().T, np.eye(d))
        assert np.allclose(uc @ uc.conj().T, np.eye(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_bipartite_expectation_identity(rng, d):
    phi = max_entangled(d)
    for _ in range(50):
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        c = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        lhs = np.vdot(phi, np.kron(b, c) @ phi)
        assert abs(lhs - np.trace(b @ c.T) / d) <= 1e-10


@pytest.mark.parametrize("d", [2, 3])
def test_identity_channel_correlators(d):
    for table in (correlators_entangled(channels.identity(d)), correlators_system_only(channels.identity(d))):
        assert all(abs(v - 1) < 1e-12 for v in table.values.values())


def test_depolarizing_correlators():
    p = 0.3
    table = correlators_entangled(channels.depolarizing(p, 2))
    assert all(abs(v - (1 - 4 * p / 3)) < 1e-12 for v in table.values.values())


def test_fully_depolarizing_correlators_vanish():
    # p = (d^2-1)/d^2 makes the Choi state I/d^2
    table = correlators_entangled(channels.depolarizing(8 / 9, 3))
    assert all(abs(v) < 1e-12 for v in table.values.values())


def test_dephasing_sigma_x_correlator():
    p = 0.37
    table = correlators_system_only(channels.dephasing(p))
    assert table[(0, 1)] == pytest.approx(1 - p, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_scheme_equivalence_random_channels(rng, d):
    for _ in range(20):
        ch = random_channel(d, int(rng.integers(1, d * d + 1)), rng)
        a, b = correlators_entangled(ch), correlators_system_only(ch)
        assert a.values.keys() == b.values.keys()
        for lab in a.values:
            assert abs(a[lab] - b[lab]) <= 1e-10


def test_scheme_equivalence_degenerate_spectrum(rng):
    # U_20 for d=4 has a doubly degenerate spectrum
    ch = random_channel(4, 3, rng)
    a, b = correlators_entangled(ch), correlators_system_only(ch)
    assert max(abs(a[k] - b[k]) for k in a.values) <= 1e-10


def test_pauli_labeling_and_imaginary_check(rng):
    table = correlators_entangled(channels.amplitude_damping(0.3))
    pauli = table.as_pauli()
    assert set(pauli) == {"xx", "yy", "zz"}
    # <Y(x)Y> on Phi+ is -1; amplitude damping keeps the sign
    assert pauli["yy"] < 0
    assert correlators_entangled(random_channel(3, 2, rng)).d == 3

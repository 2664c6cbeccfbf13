import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohchan.channel import ChannelKind, CorrelatedChannel, apply_channel, apply_phase_flip_fast
from cohchan.coherence import (
    coherence_l1,
    coherence_relative_entropy,
    dephase,
    maximally_coherent_state,
    mutual_information,
    normalized,
    report,
    unlocalized_coherence,
)
from cohchan.errors import DimensionLimitError, NumericalConsistencyError, ValidationError
from cohchan.linalg import von_neumann_entropy

from conftest import dense_channel, entropy_bits, h2, plus_state, random_state

P_GRID = [k / 10 for k in range(11)]
MU_GRID = [0, 0.25, 0.5, 0.75, 1]


def test_maximally_coherent_state():
    np.testing.assert_array_equal(maximally_coherent_state(1), np.full((2, 2), 0.5))
    assert coherence_l1(maximally_coherent_state(2)) == pytest.approx(3, abs=1e-14)
    assert coherence_relative_entropy(maximally_coherent_state(3)) == pytest.approx(3, abs=1e-10)
    np.testing.assert_allclose(maximally_coherent_state(4), plus_state(4), atol=1e-16)
    with pytest.raises(DimensionLimitError):
        maximally_coherent_state(13)


def test_dephase():
    diag = np.diag([0.2, 0.3, 0.1, 0.4]).astype(complex)
    np.testing.assert_array_equal(dephase(diag), diag)
    np.testing.assert_allclose(dephase(plus_state(2)), np.eye(4) / 4)
    rho = random_state(np.random.default_rng(1), 3)
    np.testing.assert_array_equal(dephase(dephase(rho)), dephase(rho))


def test_coherence_l1_examples():
    assert coherence_l1(np.eye(8) / 8) == 0
    assert coherence_l1(plus_state(2)) == pytest.approx(3, abs=1e-14)
    out = dense_channel(plus_state(2), "phaseflip", 0.25, 0.0)
    assert coherence_l1(out) == pytest.approx(1.25, abs=1e-14)
    assert normalized(coherence_l1(out), "l1", 2) == pytest.approx(1.25 / 3, abs=1e-14)


def test_coherence_relative_entropy_examples():
    assert coherence_relative_entropy(np.diag([0.1, 0.2, 0.3, 0.4])) == pytest.approx(0, abs=1e-15)
    for n in (1, 2, 4):
        assert coherence_relative_entropy(plus_state(n)) == pytest.approx(n, abs=1e-10)
    out = dense_channel(plus_state(2), "phaseflip", 0.25, 0.0)
    # oracle: diagonal entropy minus eigenvalue entropy, computed independently
    diag = np.real(np.diag(out))
    oracle = -np.sum(diag * np.log2(diag)) - entropy_bits(out)
    assert coherence_relative_entropy(out) == pytest.approx(oracle, abs=1e-12)
    assert coherence_relative_entropy(out) == pytest.approx(2 * (1 - h2(0.25)), abs=1e-12)
    assert coherence_relative_entropy(out) == pytest.approx(0.377444, abs=1e-5)


def test_normalized():
    assert normalized(3, "l1", 2) == 1
    assert normalized(0, "re", 5) == 0
    assert normalized(1.625, "l1", 2) == pytest.approx(0.541667, abs=1e-6)
    with pytest.raises(ValidationError):
        normalized(1, "robustness", 2)
    with pytest.raises(ValidationError):
        normalized(-1, "l1", 2)


def test_unlocalized_coherence_examples():
    assert unlocalized_coherence(plus_state(3)) == pytest.approx(0, abs=1e-9)
    for n in (2, 3, 4):
        out = apply_phase_flip_fast(plus_state(n), CorrelatedChannel("phaseflip", 0.3, 0.0, n))
        assert unlocalized_coherence(out) == pytest.approx(0, abs=1e-9)
    out = dense_channel(plus_state(3), "phaseflip", 0.25, 1.0)
    assert unlocalized_coherence(out) == pytest.approx(2 * h2(0.25), abs=1e-9)
    assert unlocalized_coherence(out) == pytest.approx(1.622556, abs=1e-5)


def test_mutual_information_examples():
    rho = np.kron(random_state(np.random.default_rng(3), 1), random_state(np.random.default_rng(4), 1))
    assert mutual_information(rho) == pytest.approx(0, abs=1e-9)
    out = dense_channel(plus_state(2), "phaseflip", 0.5, 1.0)
    assert mutual_information(out) == pytest.approx(1, abs=1e-9)
    classical = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    assert mutual_information(classical) == pytest.approx(1, abs=1e-12)


def test_report_examples():
    rep = report(plus_state(2))
    assert rep.c_l1 == pytest.approx(3, abs=1e-12)
    assert rep.c_re == pytest.approx(2, abs=1e-10)
    assert rep.c_l1_normalized == pytest.approx(1, abs=1e-12)
    assert rep.c_re_normalized == pytest.approx(1, abs=1e-10)
    assert rep.uqc == pytest.approx(0, abs=1e-9)
    assert rep.mutual_information == pytest.approx(0, abs=1e-9)

    rep = report(dense_channel(plus_state(2), "phaseflip", 0.25, 1.0))
    assert rep.c_re_normalized == pytest.approx(1 - h2(0.25) / 2, abs=1e-12)
    assert rep.c_re_normalized == pytest.approx(0.594361, abs=1e-6)

    for n in (1, 3):
        ref = report(plus_state(n))
        rep = report(apply_channel(plus_state(n), CorrelatedChannel("bitflip", 0.8, 0.35, n)))
        assert rep.c_l1 == pytest.approx(ref.c_l1, abs=1e-12)
        assert rep.c_re == pytest.approx(ref.c_re, abs=1e-10)


def test_report_field_invariants(rng):
    rho = random_state(rng, 3)
    rep = report(rho)
    assert rep.c_l1_normalized == pytest.approx(rep.c_l1 / 7, abs=1e-15)
    assert rep.c_re_normalized == pytest.approx(rep.c_re / 3, abs=1e-15)
    assert rep.uqc == pytest.approx(rep.c_re - sum(rep.local_c_re), abs=1e-9)
    assert len(rep.local_c_re) == 3
    assert rep.as_dict()["n_qubits"] == 3


def test_negative_entropy_gap_raises(monkeypatch):
    import cohchan.coherence as coh

    monkeypatch.setattr(coh, "von_neumann_entropy", lambda rho: von_neumann_entropy(rho) + 0.01)
    with pytest.raises(NumericalConsistencyError):
        coh.coherence_relative_entropy(np.eye(4) / 4)


@pytest.mark.parametrize("kind", [k.value for k in ChannelKind])
def test_uqc_equals_mutual_information_for_coherent_input(kind):
    for n in range(1, 6):
        for p in P_GRID[::2]:
            for mu in MU_GRID:
                ch = CorrelatedChannel(kind, p, mu, n)
                rep = report(apply_channel(plus_state(n), ch))
                assert abs(rep.uqc - rep.mutual_information) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.sampled_from(P_GRID), st.sampled_from(MU_GRID), st.integers(0, 2 ** 32 - 1))
def test_uqc_change_equals_correlation_gain_for_phase_flip(n, p, mu, seed):
    rho0 = random_state(np.random.default_rng(seed), n)
    before, after = report(rho0), report(apply_phase_flip_fast(rho0, CorrelatedChannel("phaseflip", p, mu, n)))
    gain = after.mutual_information - before.mutual_information
    assert abs((after.uqc - before.uqc) - gain) <= 1e-9


@pytest.mark.parametrize("n", range(1, 6))
def test_phase_flip_symmetric_about_half(n):
    for p in P_GRID:
        for mu in MU_GRID:
            a = report(apply_phase_flip_fast(plus_state(n), CorrelatedChannel("phaseflip", p, mu, n)))
            b = report(apply_phase_flip_fast(plus_state(n), CorrelatedChannel("phaseflip", 1 - p, mu, n)))
            for field in ("c_l1", "c_re", "uqc", "mutual_information"):
                assert abs(getattr(a, field) - getattr(b, field)) <= 1e-12


@pytest.mark.parametrize("n", range(1, 6))
def test_normalized_coherence_nondecreasing_in_mu(n):
    for p in P_GRID[1:-1]:
        prev = None
        for mu in P_GRID:
            rep = report(apply_phase_flip_fast(plus_state(n), CorrelatedChannel("phaseflip", p, mu, n)))
            cur = (rep.c_l1_normalized, rep.c_re_normalized)
            if prev is not None:
                assert cur[0] >= prev[0] - 1e-12
                assert cur[1] >= prev[1] - 1e-12
            prev = cur

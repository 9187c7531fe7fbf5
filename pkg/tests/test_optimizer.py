from __future__ import annotations

import numpy as np
import pytest

from chshmax import (
    TSIRELSON,
    BetaDecomposition,
    DimensionError,
    Observable2,
    ObservableD,
    OptimizerConfig,
    RngStream,
    RotationSO3,
    ValidationError,
    bell_state,
    bell_value,
    bell_value_from_betas,
    bures_qubit_qudit,
    decompose,
    extract_observables,
    horodecki_qubit_qubit,
    lemma_rotation_identity,
    lower_bound,
    max_chsh,
    maximally_mixed,
    objective,
    qutrit_family_betas,
    upper_bound,
    werner_state,
)
from chshmax.linalg import PAULIS

from conftest import random_unitary

FAST = OptimizerConfig(grid_points=12, refine_starts=4)


# -- objective ------------------------------------------------------------------


def test_objective_bell_identity_rotation():
    betas = decompose(bell_state())
    assert objective(betas, RotationSO3(0, 0, 0)) == pytest.approx(2.0, abs=1e-12)


def test_objective_maximally_mixed():
    betas = decompose(maximally_mixed(4))
    assert objective(betas, RotationSO3(0.3, 1.0, 2.0)) == 0.0


@pytest.mark.parametrize("i", range(5))
def test_objective_invariant_under_plane_sign_flip(i):
    betas = decompose(bures_qubit_qudit(3, RngStream(21, i)))
    rot = RotationSO3(0.4 + i, 0.9, 1.7)
    flipped = RotationSO3.from_matrix(np.diag([-1.0, -1.0, 1.0]) @ rot.to_matrix())
    assert objective(betas, rot) == pytest.approx(
        objective(betas, flipped), abs=1e-12
    )


# -- bounds ----------------------------------------------------------------------


def test_lower_bound_bell():
    assert lower_bound(decompose(bell_state())) == pytest.approx(
        TSIRELSON, abs=1e-12
    )


def test_lower_bound_werner():
    eta = 0.61
    assert lower_bound(decompose(werner_state(eta))) == pytest.approx(
        TSIRELSON * eta, abs=1e-12
    )


def test_upper_bound_bell():
    assert upper_bound(decompose(bell_state())) == pytest.approx(
        2.0 * np.sqrt(3.0), abs=1e-12
    )


def test_bounds_vanish_for_maximally_mixed():
    betas = decompose(maximally_mixed(5))
    assert lower_bound(betas) == 0.0
    assert upper_bound(betas) == 0.0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_bound_sandwich_random(d):
    for i in range(15):
        res = max_chsh(decompose(bures_qubit_qudit(d, RngStream(33, i))), FAST)
        assert res.lower - 1e-8 <= res.value <= res.upper + 1e-8


# -- max_chsh ---------------------------------------------------------------------


def test_bell_state_reaches_tsirelson():
    res = max_chsh(decompose(bell_state()))
    assert res.value == pytest.approx(TSIRELSON, abs=1e-8)
    assert res.violates


@pytest.mark.parametrize("eta", [0.5, 1 / np.sqrt(2), 0.9])
def test_werner_values(eta):
    res = max_chsh(decompose(werner_state(eta)))
    assert res.value == pytest.approx(TSIRELSON * eta, abs=1e-6)


def test_werner_violation_threshold():
    eta_c = 1 / np.sqrt(2)
    assert not max_chsh(decompose(werner_state(eta_c * (1 - 1e-7)))).violates
    assert max_chsh(decompose(werner_state(eta_c * (1 + 1e-7)))).violates


def test_qutrit_family_corner_reaches_tsirelson():
    from chshmax import FamilyPoint

    res = max_chsh(qutrit_family_betas(FamilyPoint(1.0, 0.0)))
    assert res.value == pytest.approx(TSIRELSON, abs=1e-8)


def test_maximally_mixed_gives_zero():
    res = max_chsh(decompose(maximally_mixed(3)), FAST)
    assert res.value == 0.0
    assert not res.violates


def test_result_is_deterministic():
    betas = decompose(bures_qubit_qudit(3, RngStream(77, 0)))
    a = max_chsh(betas, FAST)
    b = max_chsh(betas, FAST)
    assert a.value == b.value
    assert a.rotation == b.rotation


@pytest.mark.parametrize("i", range(8))
def test_tsirelson_cap_on_random_states(i):
    res = max_chsh(decompose(bures_qubit_qudit(2 + i % 3, RngStream(55, i))), FAST)
    assert 0.0 <= res.value <= TSIRELSON + 1e-8


@pytest.mark.parametrize("i", range(6))
def test_simultaneous_rotation_invariance(i):
    betas = decompose(bures_qubit_qudit(2, RngStream(91, i)))
    base = max_chsh(betas).value
    rng = np.random.default_rng(i)
    S = RotationSO3(*rng.uniform(0, 2 * np.pi, 3)).to_matrix()
    mixed = np.tensordot(S, betas.triple, axes=([1], [0]))
    rotated = BetaDecomposition(
        d=2, beta0=betas.beta0, beta1=mixed[0], beta2=mixed[1], beta3=mixed[2]
    )
    assert max_chsh(rotated).value == pytest.approx(base, abs=1e-6)


@pytest.mark.parametrize("i", range(4))
def test_local_unitary_invariance_on_qubit(i):
    from chshmax import QubitQuditState

    state = bures_qubit_qudit(2, RngStream(93, i))
    base = max_chsh(decompose(state)).value
    u = random_unitary(400 + i, 2)
    U = np.kron(u, np.eye(2))
    rotated = QubitQuditState(d=2, rho=U @ state.rho @ U.conj().T)
    assert max_chsh(decompose(rotated)).value == pytest.approx(base, abs=1e-6)


def test_internal_consistency_error_when_search_is_sabotaged(monkeypatch):
    import chshmax.optimizer as opt

    betas = BetaDecomposition(
        d=2,
        beta0=np.eye(2, dtype=complex) / 2,
        beta1=np.zeros((2, 2), dtype=complex),
        beta2=np.zeros((2, 2), dtype=complex),
        beta3=PAULIS[2] / 2,
    )
    monkeypatch.setattr(opt, "_search", lambda f, c: (np.zeros(3), 0.0))
    from chshmax import InternalConsistencyError

    with pytest.raises(InternalConsistencyError, match="lower bound"):
        opt.max_chsh(betas)


def test_search_never_misses_axis_permuted_lower_bound():
    # all trace-norm weight in beta3: identity alone would miss the bound
    betas = BetaDecomposition(
        d=2,
        beta0=np.eye(2, dtype=complex) / 2,
        beta1=np.zeros((2, 2), dtype=complex),
        beta2=np.zeros((2, 2), dtype=complex),
        beta3=PAULIS[2] / 2,
    )
    res = max_chsh(betas, OptimizerConfig(grid_points=4, refine_starts=1))
    assert res.value >= res.lower - 1e-8
    assert res.value == pytest.approx(2.0, abs=1e-8)


# -- horodecki ---------------------------------------------------------------------


def test_horodecki_bell():
    assert horodecki_qubit_qubit(decompose(bell_state())) == pytest.approx(
        TSIRELSON, abs=1e-12
    )


def test_horodecki_werner():
    eta = 0.83
    assert horodecki_qubit_qubit(decompose(werner_state(eta))) == pytest.approx(
        TSIRELSON * eta, abs=1e-12
    )


def test_horodecki_rejects_qutrit():
    with pytest.raises(DimensionError):
        horodecki_qubit_qubit(decompose(maximally_mixed(3)))


def test_horodecki_equivalence_structure(bures_pool_d2):
    """The closed form and the search agree wherever the optimum uses
    non-trivial involutions; everywhere it is a lower bound for the search
    (the search additionally covers the B = +-1 branches).  Projecting the
    identity components out of the blocks recovers the closed form exactly.
    """
    for state, betas in bures_pool_d2:
        res = max_chsh(betas)
        h = horodecki_qubit_qubit(betas)
        assert res.value >= h - 1e-9
        if res.value > 2.0:
            assert res.value == pytest.approx(h, abs=1e-6)
        traceless = [b - (np.trace(b) / 2.0) * np.eye(2) for b in betas.triple]
        projected = BetaDecomposition(
            d=2,
            beta0=betas.beta0,
            beta1=traceless[0],
            beta2=traceless[1],
            beta3=traceless[2],
        )
        assert max_chsh(projected).value == pytest.approx(h, abs=1e-6)


# -- observables / bell_value -------------------------------------------------------


def test_observable2_from_direction():
    obs = Observable2.from_direction([0.0, 0.0, 5.0])
    assert np.allclose(obs.matrix, PAULIS[2])
    assert np.allclose(obs.axis, [0.0, 0.0, 2.0])
    assert np.allclose(np.linalg.eigvalsh(obs.matrix), [-1.0, 1.0])


def test_observable2_rejects_bad_axis():
    with pytest.raises(ValidationError):
        Observable2(matrix=PAULIS[2], axis=np.array([0.0, 0.0, 1.0]))


def test_observabled_rejects_non_involution():
    with pytest.raises(ValidationError, match="involutory"):
        ObservableD(matrix=np.diag([1.0, 0.5]).astype(complex))


def test_bell_value_equal_settings_traceless():
    state = maximally_mixed(2)
    A = Observable2.from_direction([0.0, 0.0, 1.0])
    B = ObservableD(np.diag([1.0, -1.0]).astype(complex))
    assert bell_value(state, A, A, B, B) == pytest.approx(0.0, abs=1e-12)


def test_bell_value_equal_bobs_collapses_to_single_term():
    state = bures_qubit_qudit(2, RngStream(2, 5))
    A = Observable2.from_direction([0.3, -1.0, 0.2])
    Ap = Observable2.from_direction([1.0, 0.5, 0.0])
    B = ObservableD(np.diag([1.0, -1.0]).astype(complex))
    got = bell_value(state, A, Ap, B, B)
    direct = 2.0 * np.trace(state.rho @ np.kron(A.matrix, B.matrix)).real
    assert got == pytest.approx(direct, abs=1e-12)


def test_bell_value_textbook_settings():
    state = bell_state()
    A = Observable2.from_direction([0.0, 0.0, 1.0])
    Ap = Observable2.from_direction([1.0, 0.0, 0.0])
    B = ObservableD((PAULIS[2] + PAULIS[0]) / np.sqrt(2.0))
    Bp = ObservableD((PAULIS[2] - PAULIS[0]) / np.sqrt(2.0))
    assert bell_value(state, A, Ap, B, Bp) == pytest.approx(TSIRELSON, abs=1e-12)


def test_bell_value_two_routes_agree(bures_pool_d2):
    rng = np.random.default_rng(8)
    for state, betas in bures_pool_d2[:10]:
        A = Observable2.from_direction(rng.normal(size=3))
        Ap = Observable2.from_direction(rng.normal(size=3))
        U = random_unitary(int(rng.integers(10**6)), 2)
        B = ObservableD((U * np.array([1.0, -1.0])) @ U.conj().T)
        V = random_unitary(int(rng.integers(10**6)), 2)
        Bp = ObservableD((V * np.array([1.0, -1.0])) @ V.conj().T)
        assert bell_value(state, A, Ap, B, Bp) == pytest.approx(
            bell_value_from_betas(betas, A, Ap, B, Bp), abs=1e-10
        )


def test_bell_value_rejects_invalid_observable():
    with pytest.raises(ValidationError):
        bell_value(
            bell_state(),
            np.diag([1.0, 0.0]),  # not an involution
            PAULIS[0],
            PAULIS[2],
            PAULIS[0],
        )


def test_random_observables_never_beat_maximum(bures_pool_d2):
    rng = np.random.default_rng(3)
    for state, betas in bures_pool_d2[:10]:
        cap = max_chsh(betas).value
        for _ in range(20):
            A = Observable2.from_direction(rng.normal(size=3))
            Ap = Observable2.from_direction(rng.normal(size=3))
            U = random_unitary(int(rng.integers(10**6)), 2)
            B = ObservableD((U * np.array([1.0, -1.0])) @ U.conj().T)
            V = random_unitary(int(rng.integers(10**6)), 2)
            Bp = ObservableD((V * np.array([1.0, -1.0])) @ V.conj().T)
            assert abs(bell_value(state, A, Ap, B, Bp)) <= cap + 1e-8


# -- extract_observables -------------------------------------------------------------


def test_extracted_observables_certify_bell_state():
    state = bell_state()
    betas = decompose(state)
    res = max_chsh(betas)
    value = bell_value(state, res.A, res.Aprime, res.B, res.Bprime)
    assert value == pytest.approx(res.value, abs=1e-8)


def test_extracted_observables_certify_werner_half():
    state = werner_state(0.5)
    res = max_chsh(decompose(state))
    value = bell_value(state, res.A, res.Aprime, res.B, res.Bprime)
    assert value == pytest.approx(np.sqrt(2.0), abs=1e-8)
    assert not res.violates


def test_qutrit_corner_observables_are_involutions():
    from chshmax import FamilyPoint

    betas = qutrit_family_betas(FamilyPoint(1.0, 0.0))
    res = max_chsh(betas)
    for obs in (res.B, res.Bprime):
        assert np.abs(obs.matrix @ obs.matrix - np.eye(3)).max() < 1e-10
        assert set(np.round(np.linalg.eigvalsh(obs.matrix)).astype(int)) <= {-1, 1}


def test_degenerate_direction_fallback():
    # all betas zero: both r vectors vanish, canonical axes are used
    betas = decompose(maximally_mixed(2))
    A, Ap, B, Bp = extract_observables(betas, RotationSO3(0, 0, 0))
    assert np.allclose(A.matrix, PAULIS[2])
    assert np.allclose(Ap.matrix, PAULIS[0])
    assert np.allclose(B.matrix, np.eye(2))


@pytest.mark.parametrize("i", range(10))
def test_certificate_on_random_states(i):
    state = bures_qubit_qudit(2 + i % 3, RngStream(44, i))
    betas = decompose(state)
    res = max_chsh(betas)
    value = bell_value(state, res.A, res.Aprime, res.B, res.Bprime)
    assert value == pytest.approx(res.value, abs=1e-8)


# -- lemma ------------------------------------------------------------------------


def test_lemma_collinear():
    v = np.array([0.3, -1.2, 0.8])
    lhs, rhs = lemma_rotation_identity(v, v)
    assert lhs == pytest.approx(4.0 * np.dot(v, v), abs=1e-9)
    assert rhs == pytest.approx(lhs, abs=1e-6)


def test_lemma_orthogonal():
    v = np.array([1.0, 0.0, 0.0])
    w = np.array([0.0, 2.0, 0.0])
    lhs, rhs = lemma_rotation_identity(v, w)
    assert lhs == pytest.approx(rhs, abs=1e-6)


@pytest.mark.parametrize("i", range(25))
def test_lemma_random_pairs(i):
    rng = RngStream(123, i)
    v = rng.normal(3)
    w = rng.normal(3)
    lhs, rhs = lemma_rotation_identity(v, w)
    assert abs(lhs - rhs) / max(lhs, 1e-30) < 1e-6

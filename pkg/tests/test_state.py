import math

import numpy as np
import pytest

from phasekit.state import (
    DensityOperator,
    RegisterLayout,
    StateVector,
    apply_on_segment,
    basis_state,
    equal_up_to_global_phase,
    fidelity,
    mutual_information,
    partial_trace,
    purify,
    random_density,
    random_state,
    reduced_density,
    relabel,
    tensor,
    von_neumann_entropy,
)


def rand_amps(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


# ------------------------------------------------------------------- layout


def test_layout_first_segment_most_significant():
    layout = RegisterLayout((("c", 4), ("a", 2)))
    assert layout.index((3, 1)) == 7
    assert layout.index((0, 1)) == 1
    assert layout.index((1, 0)) == 2
    assert layout.values(7) == (3, 1)


def test_layout_index_roundtrip():
    layout = RegisterLayout((("x", 3), ("y", 5), ("z", 2)))
    for idx in range(layout.total_dim):
        assert layout.index(layout.values(idx)) == idx


def test_layout_strides():
    layout = RegisterLayout((("x", 3), ("y", 5), ("z", 2)))
    assert layout.stride("x") == 10
    assert layout.stride("y") == 2
    assert layout.stride("z") == 1
    assert layout.total_dim == 30
    assert layout.dim("y") == 5
    assert layout.position("z") == 2


def test_layout_validation():
    with pytest.raises(ValueError):
        RegisterLayout((("a", 2), ("a", 3)))
    with pytest.raises(ValueError):
        RegisterLayout((("a", 0),))
    with pytest.raises(ValueError):
        RegisterLayout(())
    layout = RegisterLayout((("a", 2),))
    with pytest.raises(ValueError):
        layout.index((2,))
    with pytest.raises(ValueError):
        layout.index((0, 0))
    with pytest.raises(ValueError):
        layout.dim("b")
    with pytest.raises(ValueError):
        layout.values(2)


# -------------------------------------------------------------------- state


def test_state_normalization_guard():
    layout = RegisterLayout((("a", 2),))
    with pytest.raises(ValueError):
        StateVector(layout, np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        StateVector(layout, np.array([1.0, 0.0, 0.0]))
    state = StateVector(layout, np.array([1.0, 0.0]))
    assert state.norm() == pytest.approx(1.0)


def test_state_amps_are_write_protected():
    state = basis_state(RegisterLayout((("a", 3),)), (1,))
    with pytest.raises(ValueError):
        state.amps[0] = 1.0


def test_state_copies_caller_array():
    layout = RegisterLayout((("a", 2),))
    src = np.array([1.0, 0.0], dtype=np.complex128)
    state = StateVector(layout, src)
    src[0] = 5.0
    assert state.amps[0] == 1.0


def test_basis_state():
    layout = RegisterLayout((("c", 4), ("a", 2)))
    state = basis_state(layout, (3, 1))
    assert state.amps[7] == 1.0
    assert np.count_nonzero(state.amps) == 1
    with pytest.raises(ValueError):
        basis_state(layout, (4, 0))


def test_random_state_is_seed_deterministic():
    a = random_state(8, seed=42)
    b = random_state(8, seed=42)
    c = random_state(8, seed=43)
    assert np.array_equal(a.amps, b.amps)
    assert not np.array_equal(a.amps, c.amps)
    assert a.norm() == pytest.approx(1.0, abs=1e-12)


def test_probabilities_marginal():
    layout = RegisterLayout((("c", 2), ("a", 2)))
    amps = np.array([0.5, 0.5, 0.5, 0.5])
    state = StateVector(layout, amps)
    assert np.allclose(state.probabilities("c"), [0.5, 0.5])
    assert np.allclose(state.probabilities(), [0.25] * 4)


def test_tensor_kron_order():
    a = basis_state(RegisterLayout((("c", 4),)), (3,))
    b = basis_state(RegisterLayout((("a", 2),)), (1,))
    joint = tensor(a, b)
    assert joint.layout.names == ("c", "a")
    assert joint.amps[7] == 1.0
    with pytest.raises(ValueError):
        tensor(a, relabel(b, {"a": "c"}))


# ------------------------------------------------------------------ density


def test_density_guards():
    with pytest.raises(ValueError):
        DensityOperator(np.array([[1.0, 1.0], [0.0, 0.0]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityOperator(np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityOperator(np.diag([1.5, -0.5]))  # negative eigenvalue
    rho = DensityOperator(np.diag([0.25, 0.75]))
    assert rho.dim == 2
    assert rho.rank() == 2
    assert rho.purity() == pytest.approx(0.625)


def test_random_density_properties():
    for seed in range(5):
        for rank in (1, 2, 4):
            rho = random_density(4, rank, seed)
            evals = np.linalg.eigvalsh(rho.mat)
            assert abs(evals.sum() - 1.0) < 1e-12
            assert (evals > 1e-12).sum() == rank
    with pytest.raises(ValueError):
        random_density(4, 5, 0)
    with pytest.raises(ValueError):
        random_density(4, 0, 0)


# ------------------------------------------------- purification and reduction


def test_purify_roundtrip_and_rank():
    rng = np.random.default_rng(5)
    for _ in range(8):
        dim = int(rng.integers(2, 7))
        rank = int(rng.integers(1, dim + 1))
        rho = random_density(dim, rank, int(rng.integers(0, 2**31)))
        pur = purify(rho)
        assert pur.joint.layout.names == ("ancilla", "reference")
        assert pur.joint.layout.dim("reference") == rank
        assert pur.rank == rank
        assert np.all(np.diff(pur.schmidt_coeffs) <= 1e-15)
        back = partial_trace(pur.joint, "ancilla")
        assert np.max(np.abs(back.mat - rho.mat)) < 1e-9


def test_purify_pure_input_gives_unit_reference():
    rho = DensityOperator(np.diag([1.0, 0.0]))
    pur = purify(rho)
    assert pur.rank == 1
    assert pur.joint.dim == 2
    assert abs(pur.joint.amps[0]) == pytest.approx(1.0)


def test_purify_maximally_mixed_coeffs():
    pur = purify(DensityOperator(np.eye(2) / 2))
    assert np.allclose(pur.schmidt_coeffs, [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_partial_trace_against_einsum():
    rng = np.random.default_rng(9)
    layout = RegisterLayout((("x", 3), ("y", 4), ("z", 2)))
    state = StateVector(layout, rand_amps(rng, 24))
    psi = state.amps.reshape(3, 4, 2)
    # reference: rho_y[j, k] = sum_{a,b} psi[a,j,b] * conj(psi[a,k,b])
    want = np.einsum("ajb,akb->jk", psi, psi.conj())
    got = partial_trace(state, "y")
    assert np.max(np.abs(got.mat - want)) < 1e-12
    with pytest.raises(ValueError):
        partial_trace(basis_state(RegisterLayout((("a", 2),)), (0,)), "a")


def test_reduced_density_multi_segment():
    rng = np.random.default_rng(11)
    layout = RegisterLayout((("x", 2), ("y", 3), ("z", 2)))
    state = StateVector(layout, rand_amps(rng, 12))
    psi = state.amps.reshape(2, 3, 2)
    # keep (y, z), trace out x: rho[(j,b), (k,c)] = sum_a psi[a,j,b] conj(psi[a,k,c])
    want = np.einsum("ajb,akc->jbkc", psi, psi.conj()).reshape(6, 6)
    got = reduced_density(state, ("y", "z"))
    assert np.max(np.abs(got - want)) < 1e-12


# ----------------------------------------------------- entropy / information


def test_entropy_is_in_nats():
    assert von_neumann_entropy(DensityOperator(np.eye(2) / 2)) == pytest.approx(
        math.log(2), abs=1e-12
    )
    assert von_neumann_entropy(DensityOperator(np.eye(4) / 4)) == pytest.approx(
        math.log(4), abs=1e-12
    )
    assert von_neumann_entropy(DensityOperator(np.diag([1.0, 0.0]))) == pytest.approx(
        0.0, abs=1e-12
    )


def test_mutual_information_extremes():
    # maximally correlated two-level pair
    pur = purify(DensityOperator(np.eye(2) / 2))
    assert mutual_information(pur.joint, ("ancilla", "reference")) == pytest.approx(
        2 * math.log(2), abs=1e-9
    )
    product = basis_state(RegisterLayout((("ancilla", 2), ("reference", 3))), (1, 2))
    assert mutual_information(product, ("ancilla", "reference")) == pytest.approx(
        0.0, abs=1e-12
    )
    with pytest.raises(ValueError):
        mutual_information(product, ("ancilla", "ancilla"))


def test_mutual_information_local_unitary_invariance():
    rng = np.random.default_rng(3)
    rho = random_density(4, 3, seed=8)
    pur = purify(rho)
    before = mutual_information(pur.joint, ("ancilla", "reference"))
    qa, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    qb, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    rotated = apply_on_segment(pur.joint, "ancilla", qa)
    rotated = apply_on_segment(rotated, "reference", qb)
    after = mutual_information(rotated, ("ancilla", "reference"))
    assert abs(after - before) < 1e-9


# -------------------------------------------------------- comparisons / apply


def test_equal_up_to_global_phase():
    rng = np.random.default_rng(21)
    state = StateVector(RegisterLayout((("a", 5),)), rand_amps(rng, 5))
    shifted = StateVector(state.layout, state.amps * np.exp(0.7j))
    match = equal_up_to_global_phase(state, shifted)
    assert match.equal
    assert match.phase == pytest.approx(0.7, abs=1e-12)
    other = StateVector(state.layout, rand_amps(rng, 5))
    assert not equal_up_to_global_phase(state, other).equal


def test_apply_on_segment_unitary_guard():
    state = basis_state(RegisterLayout((("c", 2), ("a", 2))), (0, 0))
    with pytest.raises(ValueError):
        apply_on_segment(state, "a", np.array([[1.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(ValueError):
        apply_on_segment(state, "a", np.eye(3))
    flipped = apply_on_segment(state, "a", np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert flipped.amps[1] == 1.0


def test_apply_on_segment_acts_on_named_segment_only():
    rng = np.random.default_rng(6)
    layout = RegisterLayout((("x", 2), ("y", 3), ("z", 2)))
    state = StateVector(layout, rand_amps(rng, 12))
    u, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    got = apply_on_segment(state, "y", u)
    want = np.kron(np.kron(np.eye(2), u), np.eye(2)) @ state.amps
    assert np.max(np.abs(got.amps - want)) < 1e-12


def test_fidelity_basics():
    rho = random_density(3, 2, seed=4)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)
    a = DensityOperator(np.diag([1.0, 0.0]))
    b = DensityOperator(np.diag([0.0, 1.0]))
    assert fidelity(a, b) == pytest.approx(0.0, abs=1e-12)
    c = DensityOperator(np.eye(2) / 2)
    assert fidelity(a, c) == pytest.approx(0.5, abs=1e-9)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dephasim.errors import (
    DimensionMismatch,
    NonFiniteError,
    NotHermitianError,
    NotPSDError,
)
from dephasim.fock import FockSpace, coherent_state, fock_state
from dephasim.linalg import (
    dagger,
    expm,
    fidelity,
    fidelity_given_sqrt,
    frobenius,
    hermitian_eig,
    negativity,
    partial_transpose,
    sqrtm_psd,
    trace_distance,
)
from util import (
    PAULI_X,
    random_density,
    random_hermitian,
    random_pure_density,
)

seeds = st.integers(0, 2**32 - 1)


class TestHermitianEig:
    def test_identity(self):
        eig = hermitian_eig(np.eye(3, dtype=complex))
        assert np.allclose(eig.eigenvalues, [1.0, 1.0, 1.0])

    def test_pauli_x(self):
        # by hand: eigenvectors (1, -1)/sqrt(2) and (1, 1)/sqrt(2)
        eig = hermitian_eig(PAULI_X)
        assert np.allclose(eig.eigenvalues, [-1.0, 1.0], atol=1e-12)

    @given(seed=seeds)
    def test_reconstruction_and_unitarity(self, seed):
        m = random_hermitian(np.random.default_rng(seed), 8)
        eig = hermitian_eig(m)
        assert frobenius(eig.reconstruct() - m) <= 1e-10 * frobenius(m)
        u = eig.eigenvectors
        assert frobenius(dagger(u) @ u - np.eye(8)) <= 1e-10

    def test_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NotHermitianError):
            hermitian_eig(m)


class TestExpm:
    def test_zero(self):
        assert np.allclose(expm(np.zeros((3, 3))), np.eye(3))

    def test_pauli_rotation(self):
        theta = 0.3
        expected = np.cos(theta) * np.eye(2) + 1j * np.sin(theta) * PAULI_X
        assert frobenius(expm(1j * theta * PAULI_X) - expected) <= 1e-12

    def test_diagonal(self):
        d = np.array([0.1, -2.0, 3.5])
        assert np.allclose(expm(np.diag(d)), np.diag(np.exp(d)), atol=1e-12)

    def test_rejects_nonfinite(self):
        m = np.array([[np.nan, 0.0], [0.0, 0.0]])
        with pytest.raises(NonFiniteError):
            expm(m)

    @given(seed=seeds, dim=st.integers(2, 12))
    @settings(max_examples=30, deadline=None)
    def test_antihermitian_gives_unitary(self, seed, dim):
        a = 1j * random_hermitian(np.random.default_rng(seed), dim)
        u = expm(a)
        assert frobenius(dagger(u) @ u - np.eye(dim)) <= 1e-10

    @given(seed=seeds)
    @settings(max_examples=30, deadline=None)
    def test_same_generator_composition(self, seed):
        a = 1j * random_hermitian(np.random.default_rng(seed), 6)
        assert frobenius(expm(a) @ expm(a) - expm(2 * a)) <= 1e-9


class TestSqrtmPsd:
    def test_identity(self):
        assert np.allclose(sqrtm_psd(np.eye(4, dtype=complex)), np.eye(4))

    def test_diagonal(self):
        assert np.allclose(sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    @given(seed=seeds, dim=st.integers(2, 16))
    @settings(max_examples=30, deadline=None)
    def test_square_recovers_input(self, seed, dim):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        x = g @ dagger(g)
        s = sqrtm_psd(x)
        assert frobenius(s @ s - x) <= 1e-9 * max(1.0, frobenius(x))
        assert np.linalg.eigvalsh(s)[0] >= -1e-12

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(NotPSDError):
            sqrtm_psd(np.diag([1.0, -1e-6]))

    def test_clamps_tiny_negative(self):
        s = sqrtm_psd(np.diag([1.0, -1e-11]))
        assert np.allclose(s, np.diag([1.0, 0.0]), atol=1e-12)


class TestFidelity:
    def test_self_fidelity(self):
        rho = random_density(np.random.default_rng(7), 8)
        assert abs(fidelity(rho, rho) - 1.0) <= 1e-10

    def test_vacuum_vs_coherent(self):
        # pure-state overlap: |<0|zeta>|^2 = e^{-|zeta|^2}, here e^{-1}
        space = FockSpace(32)
        f = fidelity(fock_state(0, space).matrix, coherent_state(1.0, space).matrix)
        assert abs(f - np.exp(-1.0)) <= 1e-8

    def test_mixed_vs_pure_qubit(self):
        # hand evaluation: sqrt(I/2) = I/sqrt(2), inner sqrt = |0><0|/sqrt(2)
        f = fidelity(np.eye(2) / 2, np.diag([1.0, 0.0]))
        assert abs(f - 0.5) <= 1e-10

    @given(seed=seeds, dim=st.integers(2, 16))
    @settings(max_examples=25, deadline=None)
    def test_symmetry(self, seed, dim):
        rng = np.random.default_rng(seed)
        rho1, rho2 = random_density(rng, dim), random_density(rng, dim)
        assert abs(fidelity(rho1, rho2) - fidelity(rho2, rho1)) <= 1e-9

    @given(seed=seeds, dim=st.integers(2, 12))
    @settings(max_examples=25, deadline=None)
    def test_threshold_pair_with_trace_distance(self, seed, dim):
        # equal pair: F = 1 and d = 0 at tolerance; random pair: both clearly away
        rng = np.random.default_rng(seed)
        rho1, rho2 = random_density(rng, dim), random_density(rng, dim)
        assert abs(fidelity(rho1, rho1) - 1.0) <= 1e-10
        assert trace_distance(rho1, rho1) <= 1e-8
        f, d = fidelity(rho1, rho2), trace_distance(rho1, rho2)
        assert f < 1.0 - 1e-8 and d > 1e-8
        # Fuchs - van de Graaf: 1 - sqrt(F) <= d <= sqrt(1 - F)
        assert 1.0 - np.sqrt(f) <= d + 1e-12
        assert d <= np.sqrt(1.0 - f) + 1e-12

    def test_given_sqrt_matches(self):
        rng = np.random.default_rng(11)
        rho1, rho2 = random_density(rng, 10), random_density(rng, 10)
        direct = fidelity(rho1, rho2)
        via_sqrt = fidelity_given_sqrt(sqrtm_psd(rho1), rho2)
        assert abs(direct - via_sqrt) <= 1e-13

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            fidelity(np.eye(2), np.eye(2) / 2)


class TestTraceDistance:
    def test_equal(self):
        rho = random_density(np.random.default_rng(3), 6)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure(self):
        assert abs(trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) - 1.0) <= 1e-12

    def test_mixed_vs_pure(self):
        # difference has eigenvalues +-1/2
        assert abs(trace_distance(np.eye(2) / 2, np.diag([1.0, 0.0])) - 0.5) <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            trace_distance(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2) / 2)


class TestNegativity:
    def test_product_state(self):
        rng = np.random.default_rng(5)
        sigma = np.kron(random_density(rng, 2), random_density(rng, 3))
        assert negativity(sigma, 2, 3) <= 1e-12

    def test_bell_state(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / np.sqrt(2)
        sigma = np.outer(psi, psi.conj())
        # partial transpose has eigenvalues (1/2, 1/2, 1/2, -1/2)
        assert abs(negativity(sigma, 2, 2) - 0.5) <= 1e-12

    def test_classical_classical_mixture(self):
        rng = np.random.default_rng(9)
        sigma = 0.3 * np.kron(np.diag([1.0, 0.0]), random_density(rng, 2)) + 0.7 * np.kron(
            np.diag([0.0, 1.0]), random_density(rng, 2)
        )
        assert negativity(sigma, 2, 2) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            negativity(np.eye(6) / 6, 2, 2)

    @given(seed=seeds)
    @settings(max_examples=20, deadline=None)
    def test_partial_transpose_involution(self, seed):
        rng = np.random.default_rng(seed)
        sigma = random_density(rng, 6)
        pt = partial_transpose(sigma, 2, 3)
        assert np.allclose(partial_transpose(pt, 2, 3), sigma)

    @given(seed=seeds)
    @settings(max_examples=20, deadline=None)
    def test_npt_states_are_flagged(self, seed):
        # mix a Bell state with a little noise: stays NPT for small mixing
        rng = np.random.default_rng(seed)
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / np.sqrt(2)
        bell = np.outer(psi, psi.conj())
        p = rng.uniform(0.0, 0.2)
        sigma = (1 - p) * bell + p * np.eye(4) / 4
        assert negativity(sigma, 2, 2) > 1e-8

    def test_pure_entangled_pair(self):
        v = np.array([np.sqrt(0.8), 0, 0, np.sqrt(0.2)], dtype=complex)
        sigma = np.outer(v, v.conj())
        # PT negative eigenvalue of a Schmidt pair is -sqrt(p q)
        assert abs(negativity(sigma, 2, 2) - np.sqrt(0.8 * 0.2)) <= 1e-12


def test_operator_validation():
    with pytest.raises(DimensionMismatch):
        hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(NonFiniteError):
        sqrtm_psd(np.array([[np.inf, 0], [0, 1.0]]))


def test_pure_density_helper_traces():
    rho = random_pure_density(np.random.default_rng(2), 5)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    assert abs(np.trace(rho @ rho) - 1.0) < 1e-12

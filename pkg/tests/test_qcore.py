import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames import qcore
from nlgames.errors import DimensionError, NotHermitianError, NotObservableError
from nlgames.qcore import I2, SX, SY, SZ

from .conftest import random_hermitian, random_ket

angles = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)


def kron_by_index(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def test_tensor_identity():
    assert np.array_equal(qcore.tensor(I2, I2), np.eye(4))


def test_tensor_zz_diagonal():
    assert np.array_equal(qcore.tensor(SZ, SZ), np.diag([1, -1, -1, 1]))


def test_tensor_xx_flips_00_to_11():
    out = qcore.tensor(SX, SX) @ qcore.basis_ket(0, 4)
    assert np.array_equal(out, qcore.basis_ket(3, 4))


def test_tensor_matches_index_formula(rng):
    for shape_a, shape_b in [((2, 2), (2, 2)), ((2, 3), (3, 2)), ((1, 4), (2, 2))]:
        a = rng.normal(size=shape_a) + 1j * rng.normal(size=shape_a)
        b = rng.normal(size=shape_b) + 1j * rng.normal(size=shape_b)
        assert np.allclose(qcore.tensor(a, b), kron_by_index(a, b), atol=1e-15)


def test_tensor_associative_and_bilinear(rng):
    for _ in range(50):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        x, y = rng.normal(size=2) + 1j * rng.normal(size=2)
        left = qcore.tensor(qcore.tensor(a, b), c)
        right = qcore.tensor(a, qcore.tensor(b, c))
        assert np.max(np.abs(left - right)) <= 1e-12
        lin = qcore.tensor(x * a + y * d, b)
        assert np.max(np.abs(lin - (x * qcore.tensor(a, b) + y * qcore.tensor(d, b)))) <= 1e-12
        lin = qcore.tensor(a, x * b + y * d)
        assert np.max(np.abs(lin - (x * qcore.tensor(a, b) + y * qcore.tensor(a, d)))) <= 1e-12


def test_expectation_examples():
    zero = qcore.basis_ket(0, 2)
    plus = qcore.ket([1, 1])
    assert qcore.expectation(SZ, zero) == 1.0
    assert abs(qcore.expectation(SZ, plus)) < 1e-15
    ghz = qcore.ket([1, 0, 0, 0, 0, 0, 0, 1])
    assert qcore.expectation(qcore.tensor_all([SX, SX, SX]), ghz) == pytest.approx(1.0, abs=1e-15)


def test_expectation_errors():
    with pytest.raises(DimensionError):
        qcore.expectation(SZ, qcore.basis_ket(0, 4))
    with pytest.raises(NotHermitianError):
        qcore.expectation(np.array([[0, 1], [0, 0]]), qcore.basis_ket(0, 2))


def test_expectation_within_spectrum(rng):
    for n in (2, 4, 8):
        for _ in range(30):
            h = random_hermitian(rng, n)
            psi = random_ket(rng, n)
            lo, hi = np.linalg.eigvalsh(h)[[0, -1]]
            val = qcore.expectation(h, psi)
            assert lo - 1e-12 <= val <= hi + 1e-12


def test_ket_normalized_on_construction(rng):
    for _ in range(20):
        psi = qcore.ket(rng.normal(size=8) * 10)
        assert abs(np.vdot(psi, psi).real - 1.0) <= 1e-12
    with pytest.raises(ValueError):
        qcore.ket([0, 0])
    with pytest.raises(ValueError):
        qcore.ket([np.nan, 1])


def test_matrix_rejects_non_finite():
    with pytest.raises(ValueError):
        qcore.matrix([[np.inf, 0], [0, 1]])


def test_eigen_pauli_spectra():
    vals, _ = qcore.hermitian_eigen(SZ)
    assert np.allclose(vals, [-1, 1], atol=1e-12)
    vals, _ = qcore.hermitian_eigen((SX + SZ) / np.sqrt(2))
    assert np.allclose(vals, [-1, 1], atol=1e-12)


def test_eigen_zeta_operator():
    z = 0.5 * (I2 + SZ) / 2 + 0.5 * (I2 + SX) / 2
    vals, _ = qcore.hermitian_eigen(z)
    assert vals[-1] == pytest.approx(0.5 + 1 / (2 * np.sqrt(2)), abs=1e-12)


def _check_decomposition(h, vals, vecs):
    v = np.array(vecs).T
    assert np.all(np.diff(vals) >= 0)
    for lam, u in zip(vals, vecs):
        assert np.max(np.abs(h @ u - lam * u)) <= 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(len(vals)))) <= 1e-10
    assert np.max(np.abs(v @ np.diag(vals) @ v.conj().T - h)) <= 1e-10


def test_eigen_random_reconstruction(rng):
    dims = (2, 4, 8)
    for k in range(1000):
        h = random_hermitian(rng, dims[k % 3])
        vals, vecs = qcore.hermitian_eigen(h)
        _check_decomposition(h, vals, vecs)
        # independent oracle for the spectrum
        assert np.max(np.abs(vals - np.linalg.eigvalsh(h))) <= 1e-10


def test_eigen_degenerate_spectrum(rng):
    for n in (2, 4, 8):
        q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        d = np.repeat([-1.0, 2.0], n // 2)
        h = q @ np.diag(d) @ q.conj().T
        vals, vecs = qcore.hermitian_eigen(h)
        _check_decomposition(h, vals, vecs)
    vals, vecs = qcore.hermitian_eigen(np.eye(8))
    _check_decomposition(np.eye(8), vals, vecs)


def test_eigen_rejects_bad_input():
    with pytest.raises(NotHermitianError):
        qcore.hermitian_eigen(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionError):
        qcore.hermitian_eigen(np.eye(16))


@pytest.mark.parametrize(
    "theta, phi, expected",
    [(0.0, 0.0, SZ), (np.pi / 2, 0.0, SX), (np.pi / 2, np.pi / 2, SY)],
)
def test_bloch_observable_axes(theta, phi, expected):
    assert np.max(np.abs(qcore.bloch_observable(theta, phi) - expected)) <= 1e-15


@given(angles, angles)
def test_bloch_observable_is_pm1_observable(theta, phi):
    obs = qcore.bloch_observable(theta, phi)
    assert qcore.is_hermitian(obs, 1e-15)
    assert abs(np.trace(obs)) <= 1e-15
    vals = np.linalg.eigvalsh(obs)
    assert np.allclose(vals, [-1, 1], atol=1e-12)


@given(angles, angles)
@settings(max_examples=200)
def test_projectors_sum_to_identity(theta, phi):
    obs = qcore.bloch_observable(theta, phi)
    p0 = qcore.outcome_projector(obs, 0)
    p1 = qcore.outcome_projector(obs, 1)
    assert np.max(np.abs(p0 + p1 - np.eye(2))) <= 1e-15
    assert np.max(np.abs(p0 @ p0 - p0)) <= 1e-10


def test_projector_examples():
    assert np.array_equal(qcore.outcome_projector(SZ, 0), np.diag([1, 0]))
    assert np.array_equal(qcore.outcome_projector(SZ, 1), np.diag([0, 1]))
    assert np.array_equal(qcore.outcome_projector(SX, 0), 0.5 * np.ones((2, 2)))


def test_projector_rejects_non_observable():
    with pytest.raises(NotObservableError):
        qcore.outcome_projector(2 * SZ, 0)


def test_values_are_frozen():
    with pytest.raises(ValueError):
        SZ[0, 0] = 5

import itertools
import math

import numpy as np
import pytest

from stbclab.catalog import (CIOD_ANGLE, PAULI_X, PAULI_Z, cod_weights, diag_sign_set,
                             fgd_seed_set, hermitian_basis, preset, unitary_basis)
from stbclab.linalg import is_hermitian, is_hr_orthogonal, is_unitary, matrix_rank, rank_real_span

I2 = np.eye(2)


def test_hermitian_basis_small():
    assert len(hermitian_basis(1)) == 1
    assert np.array_equal(hermitian_basis(1)[0], [[1]])
    H2 = hermitian_basis(2).members
    expected = [I2, np.diag([1, -1]), PAULI_X, np.array([[0, 1j], [-1j, 0]])]
    for A, B in zip(H2, expected):
        assert np.array_equal(A, B)


def test_hermitian_basis_three_matches_listing():
    # the nine 3x3 matrices in listing order: diagonal sign flips, then for
    # each pair (n, m) the symmetric and the antisymmetric-imaginary swap
    i = 1j
    expected = [
        np.eye(3), np.diag([1, -1, 1]), np.diag([1, 1, -1]),
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[0, i, 0], [-i, 0, 0], [0, 0, 1]],
        [[0, 0, 1], [0, 1, 0], [1, 0, 0]], [[0, 0, i], [0, 1, 0], [-i, 0, 0]],
        [[1, 0, 0], [0, 0, 1], [0, 1, 0]], [[1, 0, 0], [0, 0, i], [0, -i, 0]],
    ]
    H3 = hermitian_basis(3).members
    assert len(H3) == 9
    for A, B in zip(H3, expected):
        assert np.array_equal(A, np.asarray(B))


@pytest.mark.parametrize("k", range(1, 7))
def test_hermitian_basis_properties(k):
    H = hermitian_basis(k).members
    assert len(H) == k * k
    assert all(is_hermitian(A) and is_unitary(A) for A in H)
    assert rank_real_span(H) == k * k


@pytest.mark.parametrize("k", range(1, 7))
def test_unitary_basis_spans(k):
    B = unitary_basis(k).members
    assert len(B) == 2 * k * k
    assert rank_real_span(B) == 2 * k * k


def test_unitary_basis_examples():
    B1 = unitary_basis(1).members
    assert np.array_equal(B1[0], [[1]]) and np.array_equal(B1[1], [[1j]])
    for A in unitary_basis(3):
        s = np.linalg.svd(A, compute_uv=False)
        assert np.allclose(s, 1, atol=1e-9)


def test_basis_rejects_zero():
    with pytest.raises(ValueError):
        hermitian_basis(0)
    with pytest.raises(ValueError):
        unitary_basis(0)
    with pytest.raises(ValueError):
        diag_sign_set(0)


def test_diag_sign_set():
    assert np.array_equal(diag_sign_set(1)[0], [[1]])
    D2 = diag_sign_set(2).members
    assert np.array_equal(D2[0], np.eye(2)) and np.array_equal(D2[1], np.diag([1, -1]))
    diag = np.array([np.diag(A) for A in diag_sign_set(4)]).real
    assert np.array_equal(diag, np.ones((4, 4)) - np.diag([0, 2, 2, 2]))


@pytest.mark.parametrize("m", range(1, 9))
def test_diag_sign_set_properties(m):
    D = diag_sign_set(m).members
    assert rank_real_span(D) == m
    for A, B in itertools.product(D, D):
        assert is_hermitian(A) and np.allclose(A @ B, B @ A)


def test_cod_weights_examples():
    O0 = cod_weights(0).members
    assert [complex(A[0, 0]) for A in O0] == [1, 1j]
    O1 = cod_weights(1).members
    alamouti = preset("alamouti").weights
    for W in (O1, alamouti):
        assert len(W) == 4
        assert all(is_hr_orthogonal(A, B) for A, B in itertools.combinations(W, 2))
    O2 = cod_weights(2).members
    assert len(O2) == 6 and O2[0].shape == (4, 4)


@pytest.mark.parametrize("m", range(0, 5))
def test_cod_weights_properties(m):
    W = cod_weights(m).members
    assert len(W) == 2 * m + 2
    assert all(is_unitary(A) for A in W)
    assert all(is_hr_orthogonal(A, B) for A, B in itertools.combinations(W, 2))
    assert rank_real_span(W) == 2 * m + 2


def test_fgd_seed_set():
    P = fgd_seed_set().members
    expected = [I2, 1j * PAULI_X, 1j * PAULI_Z, PAULI_Z @ PAULI_X, 1j * I2]
    assert all(np.array_equal(A, B) for A, B in zip(P, expected))


def test_presets():
    c = preset("ciod2")
    assert (c.K, c.T, c.N) == (4, 2, 2)
    assert all(matrix_rank(A) == 2 for A in c.weights)
    assert np.isclose(c.weights[0][0, 0], math.cos(CIOD_ANGLE))
    assert np.isclose(c.weights[0][1, 1], 1j * math.sin(CIOD_ANGLE))
    assert np.isclose(CIOD_ANGLE, 0.5536, atol=1e-4)
    a = preset("alamouti")
    assert a.K == 4 and a.groups.sizes == (1, 1, 1, 1)
    s = preset("srinath_rajan_2x2")
    assert s.K == 8 and s.rate == 2
    # last four weights carry the common phase e^{i pi/4}
    ratio = s.weights[4][0, 1] / (1j * math.sin(CIOD_ANGLE))
    assert np.isclose(ratio, np.exp(1j * math.pi / 4))


def test_unknown_preset_lists_names():
    with pytest.raises(ValueError, match="alamouti"):
        preset("golden")

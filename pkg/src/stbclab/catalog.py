"""Primitive matrix families and a few named designs.

Canonical member ordering (fixed so constructions are reproducible):

* ``hermitian_basis(k)``: Z_1..Z_k, then the pairs V_{n,m}, W_{n,m} for
  n < m in lexicographic order of (n, m).
* ``unitary_basis(k)``: the Hermitian basis, then ``1j`` times it.
* ``diag_sign_set(m)``: all-ones diagonal, then a single -1 at position
  2, 3, ..., m.
* ``cod_weights(m)``: identity, then ``1j * gamma_j`` for the 2m+1
  Jordan-Wigner generators gamma_1..gamma_{2m+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import Conditional, Design, GroupStructure
from .linalg import kron_all

__all__ = [
    "MatrixFamily",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "hermitian_basis",
    "unitary_basis",
    "diag_sign_set",
    "cod_weights",
    "fgd_seed_set",
    "preset",
    "PRESETS",
    "CIOD_ANGLE",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

# rotation angle of the 2x2 coordinate-interleaved orthogonal design
CIOD_ANGLE = 0.5 * math.atan(2.0)


@dataclass(frozen=True)
class MatrixFamily:
    name: str
    dimension: int
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def array(self) -> np.ndarray:
        return np.stack(self.members)


def _check_positive(k, what):
    if int(k) != k or k < 1:
        raise ValueError(f"{what} must be a positive integer, got {k}")
    return int(k)


def hermitian_basis(k: int) -> MatrixFamily:
    """k^2 unitary Hermitian matrices, independent over the reals."""
    k = _check_positive(k, "k")
    members = []
    for n in range(k):
        Z = np.eye(k, dtype=complex)
        if n > 0:
            Z[n, n] = -1
        members.append(Z)
    pairs = [(n, m) for n in range(k) for m in range(n + 1, k)]
    for n, m in pairs:
        V = np.eye(k, dtype=complex)
        V[n, n] = V[m, m] = 0
        V[n, m] = V[m, n] = 1
        members.append(V)
        W = np.eye(k, dtype=complex)
        W[n, n] = W[m, m] = 0
        W[n, m] = 1j
        W[m, n] = -1j
        members.append(W)
    return MatrixFamily(f"H_{k}", k, tuple(members))


def unitary_basis(k: int) -> MatrixFamily:
    """Real basis of all k x k complex matrices made of unitary matrices."""
    H = hermitian_basis(k).members
    return MatrixFamily(f"B_{k}", k, tuple(H) + tuple(1j * A for A in H))


def diag_sign_set(m: int) -> MatrixFamily:
    m = _check_positive(m, "m")
    members = []
    for j in range(m):
        d = np.ones(m, dtype=complex)
        if j > 0:
            d[j] = -1
        members.append(np.diag(d))
    return MatrixFamily(f"D_{m}", m, tuple(members))


def _jordan_wigner(m: int) -> list:
    """2m+1 pairwise anticommuting Hermitian unitaries of size 2^m."""
    gammas = []
    for k in range(1, m + 1):
        left = [PAULI_Z] * (k - 1)
        right = [_I2] * (m - k)
        gammas.append(kron_all(*left, PAULI_X, *right))
        gammas.append(kron_all(*left, PAULI_Y, *right))
    gammas.append(kron_all(*([PAULI_Z] * m)))
    return gammas


def cod_weights(m: int) -> MatrixFamily:
    """Weight matrices of a maximal-rate square complex orthogonal design
    for 2^m antennas: 2m+2 unitary, pairwise HR-orthogonal matrices."""
    if int(m) != m or m < 0:
        raise ValueError(f"m must be a non-negative integer, got {m}")
    m = int(m)
    members = [np.eye(2 ** m, dtype=complex)] + [1j * G for G in _jordan_wigner(m)]
    return MatrixFamily(f"O_{m}", 2 ** m, tuple(members))


def fgd_seed_set() -> MatrixFamily:
    """{I2, iX, iZ, ZX, iI2}; the first four are the Alamouti weights."""
    return MatrixFamily("P", 2, (_I2.copy(), 1j * PAULI_X, 1j * PAULI_Z, PAULI_Z @ PAULI_X, 1j * _I2))


def _ciod_weights(phi=CIOD_ANGLE):
    c, s = math.cos(phi), math.sin(phi)
    return [
        np.array([[c, 0], [0, 1j * s]]),
        np.array([[-s, 0], [0, 1j * c]]),
        np.array([[1j * s, 0], [0, c]]),
        np.array([[1j * c, 0], [0, -s]]),
    ]


def _alamouti():
    U = [
        np.eye(2),
        np.array([[1j, 0], [0, -1j]]),
        np.array([[0, 1j], [1j, 0]]),
        np.array([[0, -1], [1, 0]]),
    ]
    return Design(U, GroupStructure(((0,), (1,), (2,), (3,))), "alamouti",
                  {"family": "preset", "source": "alamouti"})


def _ciod2():
    return Design(_ciod_weights(), GroupStructure(((0, 1), (2, 3))), "ciod2",
                  {"family": "preset", "phi": repr(CIOD_ANGLE)})


def _srinath_rajan_2x2(theta=math.pi / 4):
    c, s = math.cos(CIOD_ANGLE), math.sin(CIOD_ANGLE)
    extra = [
        np.array([[0, 1j * s], [c, 0]]),
        np.array([[0, 1j * c], [-s, 0]]),
        np.array([[0, c], [1j * s, 0]]),
        np.array([[0, -s], [1j * c, 0]]),
    ]
    rot = np.exp(1j * theta)
    weights = _ciod_weights() + [rot * A for A in extra]
    # conditioned on x5..x8 the remaining symbols split like the CIOD
    groups = GroupStructure(
        (tuple(range(8)),),
        {0: Conditional((4, 5, 6, 7), GroupStructure(((0, 1), (2, 3))))},
    )
    return Design(weights, groups, "srinath_rajan_2x2",
                  {"family": "preset", "theta": repr(theta)})


PRESETS = {
    "alamouti": _alamouti,
    "ciod2": _ciod2,
    "srinath_rajan_2x2": _srinath_rajan_2x2,
}


def preset(name: str) -> Design:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; valid names: {', '.join(sorted(PRESETS))}") from None

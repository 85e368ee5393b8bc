"""Delay-optimal g-group ML-decodable designs built from block-diagonal
weight matrices, and their vertically stacked (non delay-optimal) variant.

The general recipe takes, for every group l, a set of N_l x N_l matrices
split into a *fixed* part (one matrix A_{l,j} per other group j) and a
*free* part S_l.  Group l of the output places S_l in diagonal block l and
+-A_{j,l} in every other block j, which makes weights of different groups
Hurwitz-Radon orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .catalog import cod_weights, hermitian_basis
from .design import Design, GroupStructure
from .linalg import (DEFAULT_TOL, Tolerance, compose, is_hr_orthogonal, matrix_rank,
                     rank_real_span)

__all__ = [
    "GroupInputSet",
    "ConstructionError",
    "g_plus",
    "g_minus",
    "f_l",
    "build_from_inputs",
    "ag_parameters",
    "build_ag",
    "rate_ag",
    "stack_phi",
    "rate_stacked",
]


class ConstructionError(ValueError):
    pass


def _square_list(S, what="S"):
    S = [np.asarray(A, dtype=complex) for A in S]
    if not S:
        raise ConstructionError(f"{what} must be non-empty")
    n = S[0].shape
    for A in S:
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ConstructionError(f"{what} members must be square, got {A.shape}")
        if A.shape != n:
            raise ConstructionError(f"{what} members must share one size")
    return S


def _square(C):
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ConstructionError(f"C must be square, got {C.shape}")
    return C


def g_plus(S, C, a0_index: int = 0) -> list:
    """{diag(A, C) : A in S} followed by diag(A0, -C)."""
    S = _square_list(S)
    C = _square(C)
    out = [compose("block_diag", [A, C]) for A in S]
    out.append(compose("block_diag", [S[a0_index], -C]))
    return out


def g_minus(S, C, a0_index: int = 0) -> list:
    """{diag(C, A) : A in S} followed by diag(-C, A0)."""
    S = _square_list(S)
    C = _square(C)
    out = [compose("block_diag", [C, A]) for A in S]
    out.append(compose("block_diag", [-C, S[a0_index]]))
    return out


def f_l(S, C_list, l: int) -> list:
    """Place S in block `l` (1-based) of a d-block diagonal, d = len(C_list)+1.

    `C_list` holds C_1..C_{l-1}, C_{l+1}..C_d in block order.  Blocks before
    `l` are prepended with g_minus (nearest first, so block i ends up
    holding +-C_i) and blocks after it are appended with g_plus.  A0 is
    always the first member of the current list.
    """
    d = len(C_list) + 1
    if not 1 <= l <= d:
        raise ConstructionError(f"l must lie in 1..{d}, got {l}")
    cur = _square_list(S)
    before = C_list[: l - 1]
    after = C_list[l - 1:]
    for C in reversed(before):
        cur = g_minus(cur, C)
    for C in after:
        cur = g_plus(cur, C)
    return cur


@dataclass(frozen=True)
class GroupInputSet:
    """Input matrices for one group of the general construction.

    `fixed_part` lists A_{l,j} for the other groups j in increasing order.
    """

    l: int
    fixed_part: tuple
    free_part: tuple

    @property
    def dimension(self) -> int:
        return np.asarray(self.free_part[0]).shape[0]

    def members(self) -> list:
        return list(self.fixed_part) + list(self.free_part)


def _check_inputs(inputs, tol):
    g = len(inputs)
    for pos, inp in enumerate(inputs):
        if inp.l != pos:
            raise ConstructionError(f"input {pos} is labelled for group {inp.l}")
        if len(inp.fixed_part) != g - 1:
            raise ConstructionError(
                f"group {pos}: fixed part has {len(inp.fixed_part)} matrices, need g-1 = {g - 1}")
        if not inp.free_part:
            raise ConstructionError(f"group {pos}: free part is empty")
        mats = _square_list(inp.members(), f"group {pos} inputs")
        n = mats[0].shape[0]
        for k, A in enumerate(mats):
            if matrix_rank(A, tol) < n:
                raise ConstructionError(f"C1 violated in group {pos}: matrix {k} is not full-rank")
        if rank_real_span(mats, tol) != len(mats):
            raise ConstructionError(f"C1 violated in group {pos}: inputs are not R-linearly independent")
        for a, A in enumerate(inp.fixed_part):
            for b, B in enumerate(inp.free_part):
                if not is_hr_orthogonal(A, B, tol):
                    raise ConstructionError(
                        f"C2 violated in group {pos}: fixed {a} and free {b} are not HR-orthogonal")
            for a2 in range(a + 1, g - 1):
                if not is_hr_orthogonal(A, inp.fixed_part[a2], tol):
                    raise ConstructionError(
                        f"C2 violated in group {pos}: fixed {a} and fixed {a2} are not HR-orthogonal")


def build_from_inputs(inputs, name: str = "multigroup", meta=None,
                      tol: Tolerance = DEFAULT_TOL) -> Design:
    """g-group ML-decodable, delay-optimal design from per-group inputs."""
    inputs = list(inputs)
    g = len(inputs)
    if g < 2:
        raise ConstructionError("need at least two groups")
    _check_inputs(inputs, tol)

    def fixed(j, l):
        # A_{j,l}: member of group j's fixed part reserved for group l
        return inputs[j].fixed_part[l if l < j else l - 1]

    weights, partition = [], []
    for l in range(g):
        C_list = [fixed(j, l) for j in range(g) if j != l]
        M = f_l(inputs[l].free_part, C_list, l + 1)
        partition.append(tuple(range(len(weights), len(weights) + len(M))))
        weights.extend(M)
    return Design(weights, GroupStructure(tuple(partition)), name, meta or {})


def ag_parameters(g: int, N: int) -> dict:
    """n, p, t and the orthogonal-design order m for the AG family."""
    if g < 2:
        raise ConstructionError("g must be at least 2")
    m = (g - 1) // 2
    unit = 2 ** m
    if N % unit or N // unit < g:
        raise ConstructionError(
            f"N must equal n*2^floor((g-1)/2) with n >= g (g={g}: N a multiple of {unit}, N >= {g * unit})")
    n = N // unit
    p, t = divmod(n, g)
    return {"g": g, "N": N, "m": m, "n": n, "p": p, "t": t, "unit": unit}


def _ag_inputs(g, prm):
    m, p, t = prm["m"], prm["p"], prm["t"]
    U = cod_weights(m).members
    inputs = []
    for l in range(g):
        q = p + 1 if l < t else p
        Hq = hermitian_basis(q).members[: p * p]
        Iq = np.eye(q)
        if g % 2 == 0:
            fixed = [np.kron(Iq, U[i]) for i in range(2 * m + 1)]
            free = [np.kron(A, U[2 * m + 1]) for A in Hq]
        else:
            fixed = [np.kron(Iq, U[i]) for i in range(2 * m)]
            free = [np.kron(A, B) for A in Hq for B in (U[2 * m], U[2 * m + 1])]
        inputs.append(GroupInputSet(l, tuple(fixed), tuple(free)))
    return inputs


def build_ag(g: int, N: int) -> Design:
    """Asymptotically-good g-group design for N = n 2^floor((g-1)/2), n >= g.

    The t enlarged blocks come first.
    """
    prm = ag_parameters(g, N)
    meta = {"family": "ag", **{k: str(prm[k]) for k in ("g", "n", "p", "t")}}
    return build_from_inputs(_ag_inputs(g, prm), name=f"ag_g{g}_N{N}", meta=meta)


def rate_ag(g: int, N: int) -> Fraction:
    """Exact rate of build_ag(g, N) in complex symbols per channel use."""
    prm = ag_parameters(g, N)
    floor_term = N // (g * prm["unit"])
    even = 1 if g % 2 == 0 else 0
    return Fraction(g * floor_term ** 2, N * (1 + even)) + Fraction(g * g - g, 2 * N)


def rate_stacked(g: int, N_prime: int) -> Fraction:
    """N'/2^(g-1) + (g-1)/(2N') for the stacked family."""
    return Fraction(N_prime, 2 ** (g - 1)) + Fraction(g - 1, 2 * N_prime)


def stack_phi(d: Design, g: int, tol: Tolerance = DEFAULT_TOL) -> Design:
    """Stack the g diagonal blocks of every weight vertically (gk x k)."""
    if d.T != d.N or d.N % g:
        raise ConstructionError(f"need a square design whose size is divisible by g={g}")
    k = d.N // g
    mask = np.ones((d.N, d.N), dtype=bool)
    for b in range(g):
        mask[b * k:(b + 1) * k, b * k:(b + 1) * k] = False
    if np.any(np.abs(d.weights[:, mask]) > tol.zero_eps):
        raise ConstructionError(f"weights are not block-diagonal with {g} blocks of size {k}")
    stacked = np.concatenate(
        [d.weights[:, b * k:(b + 1) * k, b * k:(b + 1) * k] for b in range(g)], axis=1)
    meta = dict(d.meta)
    meta.update({"family": "ag-stacked", "stack_g": str(g), "base": d.name})
    return Design(stacked, d.groups, f"{d.name}_stacked", meta)

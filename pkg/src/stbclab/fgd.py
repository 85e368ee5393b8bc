"""Rate-5/4 fast-group-decodable design for N = 2m antennas and its
punctured versions of rate 1 <= R < 5/4.

Weights are P (x) D_m with P = [I2, iX, iZ, ZX, iI2] taken in that order, so
symbol block b*m .. (b+1)*m-1 belongs to the b-th member of P.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .catalog import diag_sign_set, fgd_seed_set
from .design import Conditional, Design, GroupStructure
from .multigroup import ConstructionError

__all__ = ["build_fgd", "puncture_fgd", "fgd_exponent", "fgd_structure", "FGD_RATE"]

FGD_RATE = Fraction(5, 4)


def _half(N):
    if int(N) != N or N < 2 or N % 2:
        raise ConstructionError(f"FGD designs need an even number of antennas N >= 2, got {N}")
    return int(N) // 2


def fgd_structure(m: int, n_extra: int) -> GroupStructure:
    """Group structure for the four Alamouti blocks plus `n_extra` symbols of
    the iI2 block (which come last).

    With no extra symbols the code is 4-group decodable; otherwise group 2
    is fast-decodable conditioned on the iI2 symbols.
    """
    blocks = [tuple(range(b * m, (b + 1) * m)) for b in range(4)]
    if n_extra == 0:
        return GroupStructure(tuple(blocks))
    extra = tuple(range(4 * m, 4 * m + n_extra))
    inner = GroupStructure(tuple(blocks[1:]))
    second = tuple(i for b in blocks[1:] for i in b) + extra
    return GroupStructure((blocks[0], second), {1: Conditional(extra, inner)})


def build_fgd(N: int) -> Design:
    m = _half(N)
    D = diag_sign_set(m).members
    weights = [np.kron(A, B) for A in fgd_seed_set() for B in D]
    return Design(weights, fgd_structure(m, m), f"fgd_N{N}",
                  {"family": "fgd", "m": str(m), "R": "5/4"})


def puncture_fgd(d: Design, R) -> Design:
    """Keep the Alamouti blocks and the first ceil(4m(R-1)) iI2 symbols."""
    R = Fraction(R)
    if not Fraction(1) <= R <= FGD_RATE:
        raise ConstructionError(f"FGD puncturing needs 1 <= R <= 5/4, got {R}")
    if d.meta.get("family") != "fgd" or d.K != 5 * (d.N // 2):
        raise ConstructionError("puncture_fgd expects an unpunctured design from build_fgd")
    m = d.N // 2
    n_extra = math.ceil(4 * m * (R - 1))
    K = 4 * m + n_extra
    meta = dict(d.meta)
    meta["R"] = str(R)
    return Design(d.weights[:K], fgd_structure(m, n_extra), f"fgd_N{d.N}_R{R.numerator}-{R.denominator}",
                  meta)


def fgd_exponent(N: int, R) -> float:
    """Dominant exponent of M for ML decoding the FGD code: (N/4)(4R-3) - 1/2."""
    _half(N)
    R = Fraction(R)
    if not Fraction(1) < R <= FGD_RATE:
        raise ConstructionError(f"FGD complexity formula needs 1 < R <= 5/4, got {R}")
    return float(Fraction(N, 4) * (4 * R - 3) - Fraction(1, 2))

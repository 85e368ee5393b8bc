from fractions import Fraction

import numpy as np
import pytest

from stbclab.catalog import fgd_seed_set
from stbclab.design import detect_groups, verify_design
from stbclab.fgd import build_fgd, fgd_exponent, puncture_fgd
from stbclab.linalg import matrix_rank, rank_real_span
from stbclab.multigroup import ConstructionError


def test_build_fgd_two():
    d = build_fgd(2)
    assert d.K == 5
    for A, B in zip(d.weights, fgd_seed_set()):
        assert np.array_equal(A, B)


@pytest.mark.parametrize("N", range(2, 13, 2))
def test_build_fgd_properties(N):
    d = build_fgd(N)
    m = N // 2
    assert d.K == 5 * m and d.rate == Fraction(5, 4)
    assert rank_real_span(d.weights) == 5 * m
    assert d.groups.sizes == (m, 4 * m)
    c = d.groups.conditional[1]
    assert c.outer == tuple(range(4 * m, 5 * m)) and c.inner.sizes == (m, m, m)
    assert verify_design(d).passed
    assert all(matrix_rank(A) == N for A in d.weights)


def test_detect_groups_six():
    assert sorted(detect_groups(build_fgd(6)).sizes) == [3, 12]


def test_build_fgd_rejects_odd():
    for N in (0, 3, 5):
        with pytest.raises(ConstructionError):
            build_fgd(N)


def test_puncture_rate_one():
    p = puncture_fgd(build_fgd(8), 1)
    assert p.K == 16 and p.groups.sizes == (4, 4, 4, 4) and not p.groups.conditional
    assert verify_design(p).passed


def test_puncture_nine_eighths():
    d = build_fgd(4)
    p = puncture_fgd(d, Fraction(9, 8))
    assert p.K == 9 and np.array_equal(p.weights, d.weights[:9])
    assert p.groups.conditional[1].outer == (8,)
    assert verify_design(p).passed


def test_puncture_identity_at_full_rate():
    d = build_fgd(6)
    p = puncture_fgd(d, Fraction(5, 4))
    assert np.array_equal(p.weights, d.weights) and p.groups == d.groups


@pytest.mark.parametrize("N", [2, 4, 6, 8, 10])
@pytest.mark.parametrize("R", [Fraction(1), Fraction(17, 16), Fraction(9, 8), Fraction(6, 5)])
def test_puncture_preserves_structure(N, R):
    p = puncture_fgd(build_fgd(N), R)
    m = N // 2
    assert p.K == 4 * m + -(-4 * m * (R - 1) // 1)
    assert verify_design(p).passed


def test_puncture_range():
    with pytest.raises(ConstructionError):
        puncture_fgd(build_fgd(4), Fraction(3, 2))
    with pytest.raises(ConstructionError):
        puncture_fgd(build_fgd(4), Fraction(7, 8))


def test_exponent_values():
    assert fgd_exponent(4, Fraction(5, 4)) == 1.5
    assert fgd_exponent(2, Fraction(5, 4)) == 0.5
    assert fgd_exponent(10, Fraction(5, 4)) == 4.5
    with pytest.raises(ConstructionError):
        fgd_exponent(4, 1)

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stbclab.catalog import preset
from stbclab.design import Design, GroupStructure
from stbclab.diversity import (BUDGET_ENV, BudgetExceededError, PamSpec, find_scalings,
                               is_fully_diverse, pam)
from stbclab.fgd import build_fgd
from stbclab.multigroup import build_ag, stack_phi


def test_pam_values():
    assert np.array_equal(pam(1, 2), [-0.5, 0.5])
    assert np.array_equal(pam(1, 4), [-1.5, -0.5, 0.5, 1.5])
    assert np.array_equal(pam(2, 3), [-2, 0, 2])
    with pytest.raises(ValueError):
        pam(1, 1)
    with pytest.raises(ValueError):
        pam(0, 2)


@given(st.floats(0.1, 10), st.integers(2, 9))
def test_pam_properties(d, Q):
    x = pam(d, Q)
    assert len(x) == Q and abs(x.sum()) < 1e-9 * Q * d
    assert np.allclose(np.diff(x), d)


def test_pamspec_validation():
    with pytest.raises(ValueError):
        PamSpec(1, d=(1,))
    with pytest.raises(ValueError):
        PamSpec(2, d=(1, -1))
    with pytest.raises(ValueError):
        PamSpec(2, alpha=(2,))
    with pytest.raises(ValueError):
        PamSpec(2)
    s = PamSpec(2, alpha=(1, 1j))
    assert PamSpec.from_json(s.to_json()) == s


def _brute_diffs(d, spec):
    """Independent count: all codeword pairs, distinct difference vectors."""
    import itertools
    lv = spec.levels
    words = {tuple(lv[list(i)]) for i in itertools.product(range(spec.Q), repeat=d.K)}
    diffs = {tuple(np.subtract(a, b)) for a in words for b in words if a != b}
    W = d.weights * spec.scalings[:, None, None]
    dets = [abs(np.linalg.det(np.tensordot(np.array(z), W, axes=(0, 0)))) for z in diffs]
    return len(diffs), min(dets)


def test_ciod_full_diversity():
    c = preset("ciod2")
    s2 = is_fully_diverse(c, PamSpec.uniform(4, 2))
    assert (s2.total_diffs, s2.verified, s2.mode) == (80, True, "exhaustive")
    n, mn = _brute_diffs(c, PamSpec.uniform(4, 2))
    assert n == 80 and np.isclose(mn, s2.min_abs_det)
    s4 = is_fully_diverse(c, PamSpec.uniform(4, 4))
    assert s4.total_diffs == 2400 and s4.verified


def test_repeated_weight_not_diverse():
    A = preset("ciod2").weights
    d = Design([A[0], A[1], A[0]], GroupStructure(((0, 1, 2),)), "rep")
    s = is_fully_diverse(d, PamSpec.uniform(3, 2))
    assert not s.verified and s.first_failure is not None


@pytest.mark.parametrize("Q", [2, 3, 4])
def test_alamouti_any_positive_d(Q):
    rng = np.random.default_rng(Q)
    d = tuple(rng.uniform(0.2, 3, 4))
    assert is_fully_diverse(preset("alamouti"), PamSpec(Q, d=d)).verified


@given(st.floats(0.1, 10))
def test_common_scaling_invariance(f):
    c = preset("ciod2")
    a = is_fully_diverse(c, PamSpec.uniform(4, 3))
    b = is_fully_diverse(c, PamSpec.uniform(4, 3, f))
    assert a.verified == b.verified


def test_monotone_in_Q():
    d = build_fgd(2)
    spec = find_scalings(d, 3)
    for Q in (2, 3):
        assert is_fully_diverse(d, PamSpec(Q, d=spec.d)).verified


def test_budget(monkeypatch):
    with pytest.raises(BudgetExceededError, match="sampled"):
        is_fully_diverse(build_fgd(4), PamSpec.uniform(10, 2), budget=1000)
    monkeypatch.setenv(BUDGET_ENV, "50")
    with pytest.raises(BudgetExceededError):
        is_fully_diverse(preset("ciod2"), PamSpec.uniform(4, 2))


def test_sampled_mode_not_certifying():
    s = is_fully_diverse(build_fgd(4), PamSpec.uniform(10, 2), "sampled", n_samples=2000, seed=3)
    assert s.mode == "sampled" and not s.certifying and s.seed == 3
    t = is_fully_diverse(build_fgd(4), PamSpec.uniform(10, 2), "sampled", n_samples=2000, seed=3)
    assert s == t


def test_find_scalings_ciod():
    assert find_scalings(preset("ciod2"), 2).d == (1, 1, 1, 1)


def test_find_scalings_fgd():
    d = build_fgd(2)
    spec = find_scalings(d, 2)
    s = is_fully_diverse(d, spec)
    assert s.verified and s.total_diffs == 242
    # all-ones fails: the pair I2 / iI2 gives a singular difference
    assert not is_fully_diverse(d, PamSpec.uniform(5, 2)).verified


def test_find_scalings_stacked_rank_criterion():
    s = stack_phi(build_ag(2, 4), 2)
    assert s.T != s.N
    spec = find_scalings(s, 2)
    assert is_fully_diverse(s, spec).verified


def test_find_scalings_unit_circle():
    d = preset("srinath_rajan_2x2")
    spec = find_scalings(d, 2, "unit_circle")
    assert spec.alpha is not None and len(spec.alpha) == 8
    assert all(abs(abs(a) - 1) < 1e-12 for a in spec.alpha)
    assert is_fully_diverse(d, spec).verified


def test_find_scalings_exhausted():
    A = np.eye(2)
    d = Design([A, 1j * A, np.diag([1, 0])], GroupStructure(((0, 1, 2),)), "singular")
    with pytest.raises(ValueError, match="symbol 3"):
        find_scalings(d, 2, max_candidates=5)

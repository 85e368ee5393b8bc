"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the ten lines in order.
"""

import io
import math
import os
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from stbclab.catalog import preset
from stbclab.cli import run
from stbclab.design import verify_design
from stbclab.diversity import PamSpec, find_scalings, is_fully_diverse
from stbclab.fd import (build_fd, design_profile, puncture_design,
                        reference_fd_exponent, select_base, tast_exponent)
from stbclab.fgd import build_fgd
from stbclab.multigroup import (ConstructionError, ag_parameters, build_ag, rate_ag, rate_stacked,
                                stack_phi)
from stbclab.sim import Decoder, SimConfig, ber_curve, uncoded_design

from _util import NEW_CODE_EXPONENTS, grid_items

F = Fraction


@contextmanager
def criterion(capsys, n, title, limit=None):
    t0 = time.perf_counter()
    try:
        yield
        dt = time.perf_counter() - t0
        if limit is not None and dt > limit:
            raise AssertionError(f"took {dt:.2f} s, limit {limit} s")
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nFAIL  criterion {n:2d}: {title}  [{type(exc).__name__}: {str(exc)[:120]}]")
        raise
    with capsys.disabled():
        print(f"\nPASS  criterion {n:2d}: {title}  ({time.perf_counter() - t0:.2f} s)")


def _valid_ag_N(g, count):
    out, N = [], 1
    while len(out) < count:
        N += 1
        try:
            ag_parameters(g, N)
            out.append(N)
        except ConstructionError:
            pass
    return out


def _cell_design(N, R):
    cand, _ = select_base(N, R)
    b = cand.design
    if R > b.rate:
        return build_fd(b, R)
    return puncture_design(b, R) if R < b.rate else b


def test_c01_exponent_grid(capsys):
    with criterion(capsys, 1, "least-exponent grid, 54 cells with base labels", limit=1.0):
        bad = []
        for N, R, x, fam in grid_items():
            cand, prof = select_base(N, R, build=False)
            if (float(prof.exponent), cand.family) != (x, fam):
                bad.append((N, str(R), float(prof.exponent), cand.family, x, fam))
        assert len(list(grid_items())) == 54
        assert not bad, bad


def test_c02_comparison(capsys):
    with criterion(capsys, 2, "comparison column and strict-improvement checks", limit=1.0):
        bad = [(k, v) for k, v in NEW_CODE_EXPONENTS.items()
               if float(select_base(k[0], F(k[1]), build=False)[1].exponent) != v]
        assert not bad, bad
        for N in (6, 8, 16, 32):
            for R in (2, 3):
                assert select_base(N, R, build=False)[1].exponent < reference_fd_exponent(N, R), (N, R)
        for N in range(6, 13):
            for R in range(2, N + 1):
                assert select_base(N, R, build=False)[1].exponent < tast_exponent(N, R), (N, R)


def test_c03_rates(capsys):
    with criterion(capsys, 3, "exact rates of the multigroup and stacked families"):
        assert rate_ag(2, 6) == F(5, 3)
        assert rate_ag(3, 12) == F(5, 4)
        assert rate_ag(3, 20) == F(3, 2)
        for m in range(2, 7):
            N = 2 ** m
            assert rate_ag(2, N) == F(N, 4) + F(1, N)
        for g in (2, 3):
            for p in (1, 2, 3):
                d = stack_phi(build_ag(g, g * p * 2 ** ((g - 1) // 2)), g)
                Np = d.N
                assert d.rate == rate_stacked(g, Np) == F(Np, 2 ** (g - 1)) + F(g - 1, 2 * Np)


def test_c04_structural_invariants(capsys):
    with criterion(capsys, 4, "verify_design passes on the full construction grid", limit=30.0):
        designs = []
        for g in (2, 3, 4):
            designs += [build_ag(g, N) for N in _valid_ag_N(g, 3)]
        designs += [build_fgd(N) for N in (2, 4, 6, 8, 10)]
        designs.append(stack_phi(build_ag(3, 12), 3))
        cells = list(grid_items())
        for N, R, x, _ in cells:
            d = _cell_design(N, R)
            assert d.K == math.ceil(2 * R * N) and float(design_profile(d).exponent) == x, (N, R)
            designs.append(d)
        failed = [(d.name, verify_design(d).violations) for d in designs if not verify_design(d).passed]
        assert not failed, failed
        assert len(designs) == 9 + 5 + 1 + 54


def test_c05_asymptotics(capsys):
    with criterion(capsys, 5, "normalized rate approaches 1/(g 2^(g-1))"):
        for g, N_max in ((2, 64), (3, 128)):
            target = F(1, g * 2 ** (g - 1))
            unit = 2 ** ((g - 1) // 2)
            Ns = [n * unit for n in range(g, N_max // unit + 1)]
            err = {N: abs(rate_ag(g, N) / N - target) for N in Ns}
            assert err[N_max] < F(1, 100), (g, float(err[N_max]))
            # within each residue class mod g the error is strictly falling
            # from the middle of the range on
            for r in range(g):
                seq = [err[N] for N in Ns if (N // unit) % g == r and N >= N_max // 2]
                assert all(b < a for a, b in zip(seq, seq[1:])), (g, r)


def test_c06_full_diversity(capsys):
    with criterion(capsys, 6, "exhaustive full-diversity certificates", limit=60.0):
        d = preset("ciod2")
        for Q, count in ((2, 80), (4, 2400)):
            s = is_fully_diverse(d, PamSpec(Q, d=(1, 1, 1, 1)))
            assert s.verified and s.certifying and s.total_diffs == count
        fg = build_fgd(2)
        spec = find_scalings(fg, 2)
        s = is_fully_diverse(fg, spec)
        assert s.verified and s.total_diffs == 242
        st = stack_phi(build_ag(2, 4), 2)
        assert st.T > st.N
        spec = find_scalings(st, 2)
        s = is_fully_diverse(st, spec)
        assert s.verified and s.total_diffs == 3 ** st.K - 1


def test_c07_decoder_equivalence(capsys):
    with criterion(capsys, 7, "structured and exhaustive ML metrics agree", limit=60.0):
        rng = np.random.default_rng(7)
        for d, Q in ((preset("alamouti"), 4), (preset("ciod2"), 2), (build_fgd(2), 2)):
            spec = PamSpec.uniform(d.K, Q)
            s, e = Decoder(d, spec, structured=True), Decoder(d, spec)
            B = 1000
            H = (rng.standard_normal((B, d.N, 1)) + 1j * rng.standard_normal((B, d.N, 1))) / math.sqrt(2)
            W = 0.6 * (rng.standard_normal((B, d.T, 1)) + 1j * rng.standard_normal((B, d.T, 1)))
            Y = s.codewords(rng.integers(0, Q, size=(B, d.K))) @ H + W
            ms, me = s.decode(Y, H)[1], e.decode(Y, H)[1]
            mismatches = int(np.sum(np.abs(ms - me) > 1e-9 * np.maximum(1, me)))
            assert mismatches == 0, (d.name, mismatches)


def test_c08_metric_decomposition(capsys):
    with criterion(capsys, 8, "group metrics add up with vanishing cross terms"):
        rng = np.random.default_rng(8)
        worst = 0.0
        for d in (preset("ciod2"), build_ag(2, 4), build_ag(2, 6), build_ag(3, 6), build_ag(4, 8)):
            parts = [list(p) for p in d.groups.partition]
            for _ in range(100):
                a = rng.standard_normal(d.K)
                H = rng.standard_normal((d.N, 2)) + 1j * rng.standard_normal((d.N, 2))
                Y = rng.standard_normal((d.T, 2)) + 1j * rng.standard_normal((d.T, 2))
                full = np.linalg.norm(Y - np.tensordot(a, d.weights, axes=(0, 0)) @ H) ** 2
                per = sum(np.linalg.norm(Y - np.tensordot(a[p], d.weights[p], axes=(0, 0)) @ H) ** 2
                          for p in parts)
                worst = max(worst, abs(full - per + (len(parts) - 1) * np.linalg.norm(Y) ** 2))
        assert worst < 1e-8, worst


def _slope(points):
    by = {p.snr_db: p.ber for p in points}
    return math.log10(by[20.0]) - math.log10(by[14.0])


def test_c09_ber_slope(capsys):
    with criterion(capsys, 9, "two-antenna BER falls with diversity-two slope", limit=300.0):
        grid = tuple(range(0, 21, 2))
        ala = preset("alamouti")
        pa = ber_curve(SimConfig(ala, PamSpec.uniform(4, 2), 1, grid, 250_000, seed=2024), workers=2)
        un = ber_curve(SimConfig(uncoded_design(), PamSpec.uniform(2, 2), 1, grid, 500_000, seed=2024),
                       workers=2)
        assert all(p.bits >= 10 ** 6 for p in pa + un)
        bers = [p.ber for p in pa]
        assert all(b < a for a, b in zip(bers, bers[1:])), bers
        assert _slope(pa) <= -1.0, _slope(pa)
        assert _slope(un) > _slope(pa), (_slope(un), _slope(pa))


def test_c10_cli_determinism(capsys, tmp_path):
    with criterion(capsys, 10, "CLI outputs identical for 1 and many worker threads"):
        many = max(2, os.cpu_count() or 1)
        outs = {}
        for workers in (1, many):
            d = tmp_path / f"w{workers}"
            d.mkdir()
            steps = [
                ["construct", "--family", "fgd", "--N", "2", "--out", d / "fgd.json"],
                ["diversify", "--in", d / "fgd.json", "--Q", "2"],
                ["construct", "--family", "fd", "--N", "6", "--R", "2", "--out", d / "fd.json"],
                ["analyze", "--N", "6", "--R", "2", "--csv", d / "profile.csv"],
                ["simulate", "--in", d / "fgd.json", "--snr", "0,6,12", "--trials", "9000",
                 "--seed", "11", "--workers", str(workers), "--out", d / "ber.csv"],
                ["tables", "--which", "2", "--which", "3", "--out-dir", d],
            ]
            for argv in steps:
                assert run([str(a) for a in argv], io.StringIO()) == 0, argv
            outs[workers] = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
        assert outs[1].keys() == outs[many].keys()
        diff = [k for k in outs[1] if outs[1][k] != outs[many][k]]
        assert not diff, diff

"""Quasi-static Rayleigh fading simulation with ML decoders.

Received block: Y = s * X H + W, with X = sum_i a_i s_i A_i, H an N x N_r matrix of
i.i.d. CN(0, 1) gains and W i.i.d. CN(0, sigma^2) noise.  The codebook is
scaled to unit average energy per channel use, so with unit-variance
fading the average received energy per receive antenna is 1 and
sigma^2 = 10^(-SNR/10).

Both decoders work in the real model y = G a + w, where column i of G is
the real vectorisation of s_i A_i H.  The metric ||Y - XH||_F^2 equals
||y||^2 + a'Ja - 2 r'a with J = G'G and r = G'y, so everything below is
expressed through (J, r).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .design import Design, GroupStructure, hr_conflicts
from .diversity import BudgetExceededError, PamSpec, default_budget, scaled_weights
from .linalg import DEFAULT_TOL, Tolerance

__all__ = [
    "ChannelRealization",
    "SimConfig",
    "BerPoint",
    "unit_energy_scale",
    "encode",
    "metric",
    "decode_exhaustive",
    "decode_structured",
    "Decoder",
    "gray_bits",
    "ber_curve",
    "uncoded_design",
    "write_ber_csv",
    "BLOCK_TRIALS",
]

# trials per RNG block; fixed so results do not depend on the worker count
BLOCK_TRIALS = 4096


@dataclass(frozen=True)
class ChannelRealization:
    H: np.ndarray
    W: np.ndarray
    seed: int | None = None


def unit_energy_scale(d: Design, spec: PamSpec) -> float:
    """Factor making E||X||_F^2 / T equal to 1 for i.i.d. uniform symbols."""
    var = (spec.Q ** 2 - 1) / 12.0
    W = scaled_weights(d, spec)
    energy = var * float(np.sum(np.abs(W) ** 2))
    return math.sqrt(d.T / energy)


def encode(d: Design, spec: PamSpec, symbol_indices, scale: float | None = None) -> np.ndarray:
    """Codeword for PAM indices; scaled to unit energy unless `scale` is given."""
    idx = np.asarray(symbol_indices)
    if idx.shape[-1] != d.K:
        raise ValueError(f"need {d.K} symbol indices, got {idx.shape[-1]}")
    if np.any(idx < 0) or np.any(idx >= spec.Q):
        raise ValueError(f"symbol indices must lie in 0..{spec.Q - 1}")
    s = unit_energy_scale(d, spec) if scale is None else scale
    a = spec.levels[idx]
    return s * np.tensordot(a, scaled_weights(d, spec), axes=(-1, 0))


def metric(X, Y, H) -> np.ndarray:
    """||Y - X H||_F^2, batched over leading axes."""
    return np.sum(np.abs(Y - X @ H) ** 2, axis=(-2, -1))


def _real_cols(WH):
    # (B, K, T, Nr) -> (B, 2 T Nr, K)
    B, K = WH.shape[:2]
    v = np.concatenate([WH.real.reshape(B, K, -1), WH.imag.reshape(B, K, -1)], axis=2)
    return np.swapaxes(v, 1, 2)


class Decoder:
    """ML decoding of a design under a PAM spec, batched over instances.

    ``structured=True`` exploits the declared group structure; the cost
    terms follow the hard-limit convention: within every leaf group all but
    the last symbol are enumerated and the last is found by quantising its
    unconstrained optimum.
    """

    def __init__(self, d: Design, spec: PamSpec, structured: bool = False, *,
                 budget: int | None = None, tol: Tolerance = DEFAULT_TOL):
        self.design = d
        self.spec = spec
        self.structured = structured
        self.scale = unit_energy_scale(d, spec)
        self.W = self.scale * scaled_weights(d, spec)
        self.levels = spec.levels
        self.Q = spec.Q
        budget = default_budget() if budget is None else budget
        if structured:
            self._check_structure(d.groups, tol)
        elif self.Q ** d.K > budget:
            raise BudgetExceededError(f"codebook of {self.Q}^{d.K} words exceeds the budget of {budget}")
        self.evaluations = 0

    def _check_structure(self, gs: GroupStructure, tol):
        bad = hr_conflicts(self.W, tol)
        for msg in _structure_violations(gs, bad):
            raise ValueError(f"group structure does not hold for the scaled weights: {msg}")

    # -- batched primitives -------------------------------------------------

    def gram(self, Y, H):
        Y = np.asarray(Y, dtype=complex)
        H = np.asarray(H, dtype=complex)
        WH = np.einsum("ktn,bnr->bktr", self.W, H)
        G = _real_cols(WH)
        y = np.concatenate([Y.real.reshape(len(Y), -1), Y.imag.reshape(len(Y), -1)], axis=1)
        J = np.swapaxes(G, 1, 2) @ G
        r = np.einsum("bdk,bd->bk", G, y)
        yy = np.sum(y * y, axis=1)
        return J, r, yy

    def _quantize(self, z):
        q = np.rint(z + (self.Q - 1) / 2).astype(np.int64)
        return np.clip(q, 0, self.Q - 1)

    def _leaf(self, J, r, idx):
        """Best indices and partial metric a'J a - 2 r'a of one leaf group."""
        B = J.shape[0]
        idx = list(idx)
        last, rest = idx[-1], idx[:-1]
        Jll = J[:, last, last]
        combos = np.array(list(itertools.product(range(self.Q), repeat=len(rest))), dtype=np.int64)
        combos = combos.reshape(len(combos), len(rest))
        self.evaluations += len(combos)
        A = self.levels[combos]                                   # (C, k-1)
        Jrr = J[:, rest][:, :, rest]                              # (B, k-1, k-1)
        Jrl = J[:, rest, last]                                    # (B, k-1)
        rr, rl = r[:, rest], r[:, last]
        cross = np.einsum("ck,bk->bc", A, Jrl)                    # (B, C)
        z = (rl[:, None] - cross) / Jll[:, None]
        qi = self._quantize(z)                                    # (B, C)
        al = self.levels[qi]
        quad = np.einsum("ci,bij,cj->bc", A, Jrr, A)
        lin = np.einsum("bk,ck->bc", rr, A)
        m = quad + 2 * al * cross + Jll[:, None] * al * al - 2 * (lin + rl[:, None] * al)
        best = np.argmin(m, axis=1)
        rows = np.arange(B)
        out = np.empty((B, len(idx)), dtype=np.int64)
        out[:, :-1] = combos[best]
        out[:, -1] = qi[rows, best]
        return out, m[rows, best]

    def _decode_structure(self, J, r, gs: GroupStructure):
        B = J.shape[0]
        out = np.zeros((B, self.design.K), dtype=np.int64)
        total = np.zeros(B)
        for j, grp in enumerate(gs.partition):
            c = gs.conditional.get(j)
            if c is None:
                sol, m = self._leaf(J, r, grp)
                out[:, list(grp)] = sol
                total += m
                continue
            outer = list(c.outer)
            best_m = np.full(B, np.inf)
            best = np.zeros((B, len(grp)), dtype=np.int64)
            pos = {i: n for n, i in enumerate(grp)}
            for combo in itertools.product(range(self.Q), repeat=len(outer)):
                a_o = self.levels[list(combo)]
                r_in = r - J[:, :, outer] @ a_o
                sub, m_in = self._decode_structure(J, r_in, c.inner)
                Joo = J[:, outer][:, :, outer]
                m = m_in + np.einsum("i,bij,j->b", a_o, Joo, a_o) - 2 * r[:, outer] @ a_o
                better = m < best_m
                if np.any(better):
                    best_m = np.where(better, m, best_m)
                    cand = np.zeros((B, len(grp)), dtype=np.int64)
                    for i in c.inner.indices:
                        cand[:, pos[i]] = sub[:, i]
                    for n, i in enumerate(outer):
                        cand[:, pos[i]] = combo[n]
                    best[better] = cand[better]
            out[:, list(grp)] = best
            total += best_m
        return out, total

    def _decode_exhaustive(self, J, r, chunk=4096):
        B = J.shape[0]
        K = self.design.K
        best_m = np.full(B, np.inf)
        best = np.zeros((B, K), dtype=np.int64)
        n = self.Q ** K
        self.evaluations += n
        for start in range(0, n, chunk):
            lin = np.arange(start, min(n, start + chunk), dtype=np.int64)
            digits = np.empty((len(lin), K), dtype=np.int64)
            rest = lin.copy()
            for p in range(K - 1, -1, -1):
                digits[:, p] = rest % self.Q
                rest //= self.Q
            A = self.levels[digits]
            m = np.einsum("ci,bij,cj->bc", A, J, A) - 2 * r @ A.T
            k = np.argmin(m, axis=1)
            mk = m[np.arange(B), k]
            better = mk < best_m
            best_m = np.where(better, mk, best_m)
            best[better] = digits[k[better]]
        return best, best_m

    def decode(self, Y, H):
        """Indices (and metric ||Y - XH||^2) for batched or single Y, H."""
        single = np.ndim(Y) == 2
        if single:
            Y, H = np.asarray(Y)[None], np.asarray(H)[None]
        J, r, yy = self.gram(Y, H)
        if self.structured:
            idx, m = self._decode_structure(J, r, self.design.groups)
        else:
            idx, m = self._decode_exhaustive(J, r)
        m = m + yy
        return (idx[0], m[0]) if single else (idx, m)

    def codewords(self, idx):
        a = self.levels[np.asarray(idx)]
        return np.tensordot(a, self.W, axes=(-1, 0))


def _structure_violations(gs, bad, prefix=""):
    out = []
    parts = [list(g) for g in gs.partition]
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            if np.any(bad[np.ix_(parts[a], parts[b])]):
                out.append(f"groups {prefix}{a + 1} and {prefix}{b + 1} interfere")
    for j, c in gs.conditional.items():
        out.extend(_structure_violations(c.inner, bad, f"{prefix}{j + 1}."))
    return out


def decode_exhaustive(d: Design, spec: PamSpec, Y, H, **kw):
    """Exhaustive ML decision; ties go to the lexicographically smallest index tuple."""
    return Decoder(d, spec, structured=False, **kw).decode(Y, H)[0]


def decode_structured(d: Design, spec: PamSpec, Y, H, **kw):
    """ML decision through the group structure of `d`."""
    return Decoder(d, spec, structured=True, **kw).decode(Y, H)[0]


# -- Monte-Carlo ------------------------------------------------------------

def gray_bits(Q: int) -> np.ndarray:
    """(Q, bits) Gray labels of PAM indices; Q must be a power of two."""
    nb = int(round(math.log2(Q)))
    if 2 ** nb != Q:
        raise ValueError("Gray mapping needs Q to be a power of two")
    g = np.arange(Q) ^ (np.arange(Q) >> 1)
    return ((g[:, None] >> np.arange(nb - 1, -1, -1)) & 1).astype(np.int8)


def uncoded_design() -> Design:
    """Single-antenna QAM: x1 + i x2."""
    return Design([np.ones((1, 1)), 1j * np.ones((1, 1))],
                  GroupStructure(((0,), (1,))), "uncoded", {"family": "uncoded"})


@dataclass
class SimConfig:
    design: Design
    pam: PamSpec
    n_rx: int = 1
    snr_db_grid: tuple = (0, 5, 10, 15, 20)
    trials_per_point: int = 10000
    seed: int = 2024
    decoder: str = "structured"

    def __post_init__(self):
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be at least 1")
        if self.decoder not in ("structured", "exhaustive"):
            raise ValueError("decoder must be 'structured' or 'exhaustive'")
        if self.n_rx < 1:
            raise ValueError("n_rx must be at least 1")


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    ber: float
    bits: int
    frame_errors: int
    frames: int


def _run_block(dec: Decoder, cfg: SimConfig, labels, snr_index, block, n):
    rng = np.random.default_rng([cfg.seed, snr_index, block])
    d = cfg.design
    sigma2 = 10.0 ** (-cfg.snr_db_grid[snr_index] / 10.0)
    idx = rng.integers(0, cfg.pam.Q, size=(n, d.K))
    H = (rng.standard_normal((n, d.N, cfg.n_rx)) + 1j * rng.standard_normal((n, d.N, cfg.n_rx))) / math.sqrt(2)
    Wn = (rng.standard_normal((n, d.T, cfg.n_rx)) + 1j * rng.standard_normal((n, d.T, cfg.n_rx))) \
        * math.sqrt(sigma2 / 2)
    Y = dec.codewords(idx) @ H + Wn
    est, _ = dec.decode(Y, H)
    bit_err = int(np.sum(labels[idx] != labels[est]))
    frame_err = int(np.sum(np.any(idx != est, axis=1)))
    return bit_err, frame_err


def ber_curve(cfg: SimConfig, workers: int = 1) -> list:
    """Monte-Carlo bit error rate over the SNR grid.

    Trials are split into fixed blocks of BLOCK_TRIALS, each with its own
    generator seeded by (seed, snr_index, block_index), and block results are
    summed in block order, so output is identical for any worker count.
    """
    dec = Decoder(cfg.design, cfg.pam, structured=cfg.decoder == "structured")
    labels = gray_bits(cfg.pam.Q)
    bps = labels.shape[1]
    n = cfg.trials_per_point
    jobs = []
    for si in range(len(cfg.snr_db_grid)):
        for b, start in enumerate(range(0, n, BLOCK_TRIALS)):
            jobs.append((si, b, min(BLOCK_TRIALS, n - start)))

    def work(job):
        # decoders keep an evaluation counter, so each thread gets its own
        local = Decoder.__new__(Decoder)
        local.__dict__.update(dec.__dict__)
        return _run_block(local, cfg, labels, *job)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]
    out = []
    for si, snr in enumerate(cfg.snr_db_grid):
        errs = [res for job, res in zip(jobs, results) if job[0] == si]
        bits = n * cfg.design.K * bps
        be = sum(e[0] for e in errs)
        fe = sum(e[1] for e in errs)
        out.append(BerPoint(float(snr), be / bits, bits, fe, n))
    return out


def write_ber_csv(points, path_or_file) -> str:
    lines = ["snr_db,ber,bits,frame_errors,frames"]
    lines += [f"{p.snr_db:g},{p.ber:.10g},{p.bits},{p.frame_errors},{p.frames}" for p in points]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    elif path_or_file is not None:
        with open(path_or_file, "w") as fh:
            fh.write(text)
    return text

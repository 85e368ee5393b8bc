"""PAM signal sets, full-diversity checks and per-symbol scaling search.

Symbol i is drawn from the Q-PAM set with spacing d_i, or equivalently the
unit-spacing set with the weight matrix scaled by d_i (or by a unit-modulus
alpha_i).  Every check here works on the scaled weights s_i A_i.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .design import Design
from .linalg import DEFAULT_TOL, Tolerance

__all__ = [
    "BudgetExceededError",
    "PamSpec",
    "DiffSummary",
    "pam",
    "default_budget",
    "scaled_weights",
    "is_fully_diverse",
    "find_scalings",
    "BUDGET_ENV",
]

BUDGET_ENV = "STBCLAB_BUDGET"
_DEFAULT_BUDGET = 10 ** 7


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return _DEFAULT_BUDGET
    try:
        value = int(float(raw))
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be a number, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


def pam(d: float, Q: int) -> np.ndarray:
    """Q equally spaced reals with zero mean and spacing d."""
    if int(Q) != Q or Q < 2:
        raise ValueError(f"Q must be an integer >= 2, got {Q}")
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    return d * (np.arange(Q) - (Q - 1) / 2)


@dataclass(frozen=True)
class PamSpec:
    """Per-symbol PAM scaling: real spacings `d` or unit-modulus `alpha`."""

    Q: int
    d: tuple | None = None
    alpha: tuple | None = None

    def __post_init__(self):
        if int(self.Q) != self.Q or self.Q < 2:
            raise ValueError(f"Q must be an integer >= 2, got {self.Q}")
        if (self.d is None) == (self.alpha is None):
            raise ValueError("give exactly one of d or alpha")
        if self.d is not None:
            object.__setattr__(self, "d", tuple(float(x) for x in self.d))
            if any(not x > 0 for x in self.d):
                raise ValueError("every d_i must be positive")
        else:
            object.__setattr__(self, "alpha", tuple(complex(x) for x in self.alpha))
            if any(abs(abs(a) - 1) > 1e-9 for a in self.alpha):
                raise ValueError("every alpha_i must have unit modulus")

    @classmethod
    def uniform(cls, K: int, Q: int, d: float = 1.0) -> "PamSpec":
        return cls(Q, d=(d,) * K)

    @property
    def K(self) -> int:
        return len(self.d if self.d is not None else self.alpha)

    @property
    def scalings(self) -> np.ndarray:
        return np.asarray(self.d if self.d is not None else self.alpha, dtype=complex)

    @property
    def levels(self) -> np.ndarray:
        """Unit-spacing PAM points; symbol i transmits levels[j] * s_i."""
        return pam(1.0, self.Q)

    def to_json(self) -> dict:
        if self.d is not None:
            return {"Q": self.Q, "d": list(self.d)}
        return {"Q": self.Q, "alpha": [[a.real, a.imag] for a in self.alpha]}

    @classmethod
    def from_json(cls, obj: dict) -> "PamSpec":
        if "d" in obj:
            return cls(int(obj["Q"]), d=tuple(obj["d"]))
        return cls(int(obj["Q"]), alpha=tuple(complex(re, im) for re, im in obj["alpha"]))


@dataclass(frozen=True)
class DiffSummary:
    total_diffs: int
    min_abs_det: float
    verified: bool
    mode: str
    n_samples: int | None = None
    seed: int | None = None
    first_failure: tuple | None = None

    @property
    def certifying(self) -> bool:
        return self.mode == "exhaustive"

    def to_json(self) -> dict:
        out = {"total_diffs": self.total_diffs, "min_abs_det": self.min_abs_det,
               "verified": self.verified, "mode": self.mode, "certifying": self.certifying}
        if self.mode == "sampled":
            out.update({"n_samples": self.n_samples, "seed": self.seed})
        if self.first_failure is not None:
            out["first_failure"] = list(self.first_failure)
        return out


def scaled_weights(d: Design, spec: PamSpec) -> np.ndarray:
    if spec.K != d.K:
        raise ValueError(f"PAM spec has {spec.K} scalings, design has K={d.K}")
    return d.weights * spec.scalings[:, None, None]


def _full_rank_measure(dC: np.ndarray, floor: float, zero_eps: float):
    """Raw |det| (square) or det(dC^H dC) (tall), and a full-rank flag.

    The determinant is compared against zero_eps times the matching power
    of ||dC||_F so the test does not depend on scale; differences whose
    norm is below `floor` count as zero.
    """
    T, N = dC.shape[-2:]
    fro = np.sqrt(np.sum(np.abs(dC) ** 2, axis=(-2, -1)))
    if T == N:
        raw = np.abs(np.linalg.det(dC))
        ok = raw > zero_eps * fro ** N
    else:
        G = np.conj(np.swapaxes(dC, -1, -2)) @ dC
        raw = np.abs(np.linalg.det(G))
        ok = raw > zero_eps * fro ** (2 * N)
    return raw, ok & (fro > floor)


def _floor(W, zero_eps):
    return zero_eps * float(np.sqrt(np.sum(np.abs(W) ** 2, axis=(-2, -1))).max())


def _digits(lin, base, width):
    out = np.empty((lin.size, width), dtype=np.int64)
    rest = lin.copy()
    for pos in range(width - 1, -1, -1):
        out[:, pos] = rest % base
        rest //= base
    return out


def _scan(W, Q, zero_eps, last_nonzero=False, chunk=1 << 15):
    """Exhaustive scan of integer difference vectors in (-(Q-1)..Q-1)^K.

    With `last_nonzero` only vectors whose last entry is nonzero are visited.
    Returns (count, min_raw, ok, first_failure).
    """
    K = W.shape[0]
    base = 2 * Q - 1
    shift = Q - 1
    if last_nonzero:
        head = base ** (K - 1)
        tails = [v for v in range(-shift, shift + 1) if v != 0]
    else:
        head = base ** K
        tails = [None]
    count, min_raw, failure = 0, np.inf, None
    floor = _floor(W, zero_eps)
    width = K - 1 if last_nonzero else K
    for tail in tails:
        for start in range(0, head, chunk):
            lin = np.arange(start, min(head, start + chunk), dtype=np.int64)
            z = _digits(lin, base, width) - shift
            if tail is not None:
                z = np.column_stack([z, np.full(len(z), tail)])
            else:
                z = z[np.any(z != 0, axis=1)]
            if not len(z):
                continue
            dC = np.tensordot(z.astype(float), W, axes=(1, 0))
            raw, ok = _full_rank_measure(dC, floor, zero_eps)
            count += len(z)
            min_raw = min(min_raw, float(raw.min()))
            bad = np.flatnonzero(~ok)
            if bad.size and failure is None:
                failure = tuple(int(x) for x in z[bad[0]])
    return count, min_raw, failure is None, failure


def is_fully_diverse(d: Design, spec: PamSpec, mode: str = "exhaustive", *,
                     budget: int | None = None, n_samples: int = 100_000, seed: int = 0,
                     tol: Tolerance = DEFAULT_TOL) -> DiffSummary:
    """Check that every nonzero codeword difference has full rank.

    ``mode="exhaustive"`` enumerates all (2Q-1)^K - 1 difference vectors and
    certifies the result.  ``mode="sampled"`` draws `n_samples` random
    nonzero difference vectors and never certifies.
    """
    W = scaled_weights(d, spec)
    K, Q = d.K, spec.Q
    if mode == "exhaustive":
        budget = default_budget() if budget is None else budget
        total = (2 * Q - 1) ** K - 1
        if total > budget:
            raise BudgetExceededError(
                f"{total} difference vectors exceed the budget of {budget}; use sampled mode "
                f"or raise {BUDGET_ENV}")
        count, min_raw, ok, failure = _scan(W, Q, tol.zero_eps)
        return DiffSummary(count, min_raw, ok, "exhaustive", first_failure=failure)
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        z = rng.integers(-(Q - 1), Q, size=(n_samples, K))
        z = z[np.any(z != 0, axis=1)]
        min_raw, failure = np.inf, None
        floor = _floor(W, tol.zero_eps)
        for start in range(0, len(z), 1 << 15):
            zz = z[start:start + (1 << 15)]
            raw, ok = _full_rank_measure(np.tensordot(zz.astype(float), W, axes=(1, 0)), floor,
                                         tol.zero_eps)
            min_raw = min(min_raw, float(raw.min()))
            bad = np.flatnonzero(~ok)
            if bad.size and failure is None:
                failure = tuple(int(x) for x in zz[bad[0]])
        return DiffSummary(len(z), min_raw, failure is None, "sampled", n_samples, seed, failure)
    raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")


def _integer_pool():
    yield 1
    found = []
    n = 2
    while True:
        if all(n % p for p in found if p * p <= n):
            found.append(n)
            yield n
        n += 1


def _circle_pool(Nc):
    for k in range(2 * Nc):
        yield complex(np.exp(1j * np.pi * k / Nc))


def find_scalings(d: Design, Q: int, pool: str = "positive_integers", *,
                  budget: int | None = None, max_candidates: int = 64, circle_steps: int = 32,
                  tol: Tolerance = DEFAULT_TOL) -> PamSpec:
    """Pick scalings symbol by symbol so that every partial design is fully
    diverse, then certify the complete design exhaustively.

    Symbol 1 keeps scaling 1.  For symbol i the candidates are tried in pool
    order and the first one making all differences with a nonzero i-th
    entry full-rank is kept.
    """
    budget = default_budget() if budget is None else budget
    K = d.K
    if (2 * Q - 1) ** K - 1 > budget:
        raise BudgetExceededError(
            f"(2Q-1)^K - 1 = {(2 * Q - 1) ** K - 1} exceeds the budget of {budget}")
    if pool not in ("positive_integers", "unit_circle"):
        raise ValueError(f"pool must be 'positive_integers' or 'unit_circle', got {pool!r}")
    chosen = [1.0 if pool == "positive_integers" else 1 + 0j]
    W0 = d.weights[:1]
    if not _scan(W0, Q, tol.zero_eps)[2]:
        raise ValueError("weight 1 is not full-rank")
    for i in range(1, K):
        gen = _integer_pool() if pool == "positive_integers" else _circle_pool(circle_steps)
        for cand in itertools.islice(gen, max_candidates):
            s = np.asarray(chosen + [cand], dtype=complex)
            W = d.weights[: i + 1] * s[:, None, None]
            if _scan(W, Q, tol.zero_eps, last_nonzero=True)[2]:
                chosen.append(cand)
                break
        else:
            raise ValueError(f"no admissible scaling for symbol {i + 1} among {max_candidates} candidates")
    spec = PamSpec(Q, d=tuple(chosen)) if pool == "positive_integers" else PamSpec(Q, alpha=tuple(chosen))
    summary = is_fully_diverse(d, spec, "exhaustive", budget=budget, tol=tol)
    if not summary.verified:
        raise AssertionError("scaling search result failed its exhaustive self-check")
    return spec

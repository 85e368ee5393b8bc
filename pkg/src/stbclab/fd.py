"""High-rate fast-decodable codes from low-complexity base designs.

A base design of rate R_b is either *extended* to rate R > R_b by appending
unitary weights that keep the set independent (the appended symbols become
the conditioning set of a fast-decodable code), or *punctured* to R < R_b
by dropping symbols evenly across its groups.

ML-decoding cost is tracked as powers of M (the complex constellation
size, M = Q^2 for Q-PAM per real symbol).  A group of k real symbols costs
M^((k-1)/2): the last symbol is found by scaling and hard-limiting once the
other k-1 are fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .catalog import CIOD_ANGLE, unitary_basis
from .design import Conditional, Design, GroupStructure
from .fgd import FGD_RATE, build_fgd, fgd_structure, puncture_fgd
from .linalg import DEFAULT_TOL, Tolerance, vectorize_real
from .multigroup import ConstructionError, ag_parameters, build_ag

__all__ = [
    "ComplexityProfile",
    "BaseCandidate",
    "complete_basis",
    "default_rotation",
    "dast_base",
    "build_fd",
    "puncture_design",
    "balanced_keep",
    "structure_terms",
    "profile_from_structure",
    "design_profile",
    "exponent_for",
    "reference_fd_exponent",
    "tast_exponent",
    "family_label",
    "candidate_families",
    "select_base",
    "build_base",
    "target_K",
]


def target_K(R, N: int) -> int:
    """Number of real symbols for rate R on N antennas, ceil(2RN)."""
    return math.ceil(2 * Fraction(R) * N)


# -- basis completion -------------------------------------------------------

def complete_basis(base: Design, basis, K: int, tol: Tolerance = DEFAULT_TOL) -> list:
    """Extend the base weights to K independent matrices using `basis`.

    Walks base weights followed by basis members and drops every member
    that lies in the real span of the members kept before it.  Returns the
    first K - K_b kept basis members.
    """
    N = base.N
    if K > 2 * N * N:
        raise ConstructionError(f"K={K} exceeds 2N^2={2 * N * N}: rate cannot exceed full rate N")
    need = K - base.K
    if need <= 0:
        return []
    members = list(basis)
    Q = np.zeros((2 * base.T * N, 0))

    def residual(v):
        r = v - Q @ (Q.T @ v)
        return r - Q @ (Q.T @ r)

    for k, A in enumerate(base.weights):
        v = vectorize_real(A)
        r = residual(v)
        if np.linalg.norm(r) <= tol.rank_eps * np.linalg.norm(v):
            raise ConstructionError(f"base weight {k} depends on earlier ones")
        Q = np.column_stack([Q, r / np.linalg.norm(r)])
    out = []
    for A in members:
        v = vectorize_real(A)
        r = residual(v)
        if np.linalg.norm(r) > tol.rank_eps * np.linalg.norm(v):
            Q = np.column_stack([Q, r / np.linalg.norm(r)])
            out.append(np.asarray(A, dtype=complex))
            if len(out) == need:
                return out
    raise ConstructionError(f"basis exhausted after {len(out)} of {need} matrices")


# -- DAST base designs ------------------------------------------------------

def default_rotation(N: int) -> np.ndarray:
    """A real orthogonal N x N matrix without zero entries.

    N = 2 uses the rotation by half of arctan(2); larger N use the
    Householder reflection along (1, 2, ..., N).
    """
    if N == 1:
        return np.ones((1, 1))
    if N == 2:
        c, s = math.cos(CIOD_ANGLE), math.sin(CIOD_ANGLE)
        return np.array([[c, -s], [s, c]])
    v = np.arange(1, N + 1, dtype=float)
    return np.eye(N) - 2.0 * np.outer(v, v) / (v @ v)


def dast_base(N: int, rotation=None, tol: Tolerance = DEFAULT_TOL) -> Design:
    """Rate-1, 2-group diagonal design: diag(u_k), then 1j*diag(u_k)."""
    U = default_rotation(N) if rotation is None else np.asarray(rotation, dtype=float)
    if U.shape != (N, N):
        raise ConstructionError(f"rotation must be {N}x{N}")
    if np.any(np.abs(U.T @ U - np.eye(N)) > tol.zero_eps):
        raise ConstructionError("rotation is not orthogonal")
    if np.any(np.abs(U) <= tol.zero_eps):
        raise ConstructionError("rotation has a zero entry; the diagonal weights would be singular")
    weights = [np.diag(U[:, k]).astype(complex) for k in range(N)]
    weights += [1j * np.diag(U[:, k]) for k in range(N)]
    groups = GroupStructure((tuple(range(N)), tuple(range(N, 2 * N))))
    return Design(weights, groups, f"dast_N{N}", {"family": "dast", "N": str(N)})


# -- extension and puncturing ----------------------------------------------

def build_fd(base: Design, R, tol: Tolerance = DEFAULT_TOL) -> Design:
    """Extend `base` to rate R; the appended symbols form the conditioning set."""
    R = Fraction(R)
    if base.T != base.N:
        raise ConstructionError("base design must be square (delay-optimal)")
    if R <= base.rate:
        raise ConstructionError(f"R={R} does not exceed the base rate {base.rate}; use puncture_design")
    K = target_K(R, base.N)
    extra = complete_basis(base, unitary_basis(base.N), K, tol)
    weights = list(base.weights) + extra
    groups = GroupStructure(
        (tuple(range(K)),),
        {0: Conditional(tuple(range(base.K, K)), base.groups)},
    )
    meta = {"family": "fd", "base": base.name, "base_family": base.meta.get("family", ""),
            "R": str(R), "K_b": str(base.K)}
    return Design(weights, groups, f"fd_{base.name}_R{R.numerator}-{R.denominator}", meta)


def balanced_keep(gs: GroupStructure, K: int) -> list:
    """Indices surviving removal down to K symbols.

    One symbol at a time is removed from the currently largest group (ties
    go to the highest group index), always its highest remaining index.
    """
    groups = [list(g) for g in gs.partition]
    total = sum(len(g) for g in groups)
    if not 0 < K <= total:
        raise ConstructionError(f"cannot keep {K} of {total} symbols")
    for _ in range(total - K):
        big = max(range(len(groups)), key=lambda j: (len(groups[j]), j))
        groups[big].pop()
    return sorted(i for g in groups for i in g)


def puncture_design(base: Design, R) -> Design:
    R = Fraction(R)
    if R >= base.rate:
        raise ConstructionError(f"R={R} is not below the base rate {base.rate}; use build_fd")
    if base.meta.get("family") == "fgd" and R >= 1 and base.K == 5 * base.N // 2:
        return puncture_fgd(base, R)
    K = target_K(R, base.N if base.T == base.N else base.T)
    keep = balanced_keep(base.groups, K)
    meta = dict(base.meta)
    meta.update({"punctured_from": base.name, "R": str(R)})
    return Design(base.weights[keep], base.groups.restrict(keep),
                  f"{base.name}_R{R.numerator}-{R.denominator}", meta)


# -- complexity calculus ----------------------------------------------------

@dataclass(frozen=True)
class ComplexityProfile:
    """Decoding cost sum_j multiplier_j * M^exponent_j; `exponent` is the
    dominant power of M."""

    exponent: Fraction
    terms: tuple
    base_family: str
    K: int
    K_b: int
    mode: str
    N: int = 0
    R: Fraction = Fraction(0)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.terms and self.exponent != max(t[1] for t in self.terms):
            raise ValueError("exponent must equal the largest term exponent")

    def evaluations(self, M: int) -> float:
        """Predicted number of metric evaluations for constellation size M."""
        return sum(mult * M ** float(e) for _, e, mult in self.terms)

    def describe(self) -> str:
        lines = [f"N={self.N} R={self.R} K={self.K} K_b={self.K_b} base={self.base_family} "
                 f"mode={self.mode} exponent={float(self.exponent):g}"]
        for label, e, mult in self.terms:
            lines.append(f"  {mult} x M^{float(e):g}  [{label}]")
        for k, v in self.notes.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _leaf_exponent(size: int) -> Fraction:
    return Fraction(size - 1, 2)


def structure_terms(gs: GroupStructure, prefix: str = "") -> list:
    """(label, exponent, multiplier) cost terms of a group structure."""
    terms = []
    for j, grp in enumerate(gs.partition):
        label = f"{prefix}{j + 1}"
        c = gs.conditional.get(j)
        if c is None:
            terms.append((f"group {label}", _leaf_exponent(len(grp)), 1))
            continue
        shift = Fraction(len(c.outer), 2)
        merged = {}
        for _, e, mult in structure_terms(c.inner, prefix=f"{label}."):
            merged[e] = merged.get(e, 0) + mult
        for e, mult in sorted(merged.items()):
            terms.append((f"group {label} given {len(c.outer)} outer symbols", shift + e, mult))
    return terms


def profile_from_structure(gs: GroupStructure, *, base_family="external", K_b=None,
                           mode="base", N=0, R=Fraction(0), notes=None) -> ComplexityProfile:
    terms = tuple(structure_terms(gs))
    K = len(gs.indices)
    return ComplexityProfile(max(t[1] for t in terms), terms, base_family, K,
                             K if K_b is None else K_b, mode, N, Fraction(R), notes or {})


def design_profile(d: Design) -> ComplexityProfile:
    """Cost implied by the declared group structure of any design."""
    return profile_from_structure(d.groups, base_family=d.meta.get("family", "external") or "external",
                                  N=d.N, R=d.rate)


def family_label(family: str, g: int | None = None) -> str:
    if family in ("F_DAST", "F_FGD"):
        return family
    if family.startswith("F_") and family.endswith("AG"):
        inner = family[2:-2]
        if inner.isdigit():
            return family
        if g is None:
            raise ValueError("g is required for the AG family")
        return f"F_{g}AG"
    raise ValueError(f"unknown base family {family!r}")


def _parse_family(family, g):
    label = family_label(family, g)
    if label.endswith("AG"):
        return label, int(label[2:-2])
    return label, None


def _base_structure(label, g, N):
    """Closed-form group structure and symbol count of a base design."""
    if label == "F_DAST":
        return GroupStructure((tuple(range(N)), tuple(range(N, 2 * N)))), 2 * N
    if label == "F_FGD":
        if N % 2:
            raise ConstructionError("F_FGD needs even N")
        m = N // 2
        return fgd_structure(m, m), 5 * m
    prm = ag_parameters(g, N)
    per = prm["p"] ** 2 * (1 if g % 2 == 0 else 2) + g - 1
    return GroupStructure(tuple(tuple(range(j * per, (j + 1) * per)) for j in range(g))), g * per


def exponent_for(family: str, N: int, R, g: int | None = None) -> ComplexityProfile:
    """ML-decoding complexity of the rate-R code on N antennas built from the
    given base family (extended if R exceeds the base rate, else punctured)."""
    R = Fraction(R)
    if R < 1:
        raise ValueError("rates below 1 are not covered")
    label, g = _parse_family(family, g)
    base_gs, K_b = _base_structure(label, g, N)
    K = target_K(R, N)
    if K > 2 * N * N:
        raise ConstructionError(f"R={R} exceeds full rate for N={N}")
    notes = {}
    if K == K_b:
        mode, gs = "base", base_gs
    elif K < K_b:
        mode = "punctured"
        if label == "F_FGD" and K >= 4 * (N // 2):
            gs = fgd_structure(N // 2, K - 4 * (N // 2))
        else:
            keep = balanced_keep(base_gs, K)
            gs = base_gs.restrict(keep)
    else:
        mode = "extended"
        gs = GroupStructure((tuple(range(K)),), {0: Conditional(tuple(range(K_b, K)), base_gs)})
    if label == "F_FGD" and 1 < R <= FGD_RATE:
        notes["large-M approximation"] = f"3 M^{float(Fraction(N, 4) * (4 * R - 3) - Fraction(1, 2)):g}"
    return profile_from_structure(gs, base_family=label, K_b=K_b, mode=mode, N=N, R=R, notes=notes)


def reference_fd_exponent(N: int, R) -> Fraction:
    """(N/4)(4R-3) - 1/2: published cost of the GF(4)-based FD/FGD codes, R > 1."""
    return Fraction(N, 4) * (4 * Fraction(R) - 3) - Fraction(1, 2)


def tast_exponent(N: int, R) -> Fraction:
    """TAST codes are fast-decodable with a DAST base."""
    return exponent_for("F_DAST", N, R).exponent


# -- base selection ---------------------------------------------------------

@dataclass(frozen=True)
class BaseCandidate:
    family: str
    design: Design | None
    base_exponent: Fraction


def candidate_families(N: int) -> list:
    """Square base families available for N antennas, in tie-break order:
    F_FGD, then F_DAST, then F_gAG with larger g first."""
    out = []
    if N % 2 == 0:
        out.append(("F_FGD", None))
    out.append(("F_DAST", None))
    ags = []
    g = 2
    while g <= N:
        try:
            ag_parameters(g, N)
            ags.append(g)
        except ConstructionError:
            pass
        g += 1
    out.extend(("F_AG", g) for g in sorted(ags, reverse=True))
    return out


@lru_cache(maxsize=None)
def build_base(family: str, N: int) -> Design:
    """Base design of a family label such as 'F_FGD', 'F_DAST', 'F_3AG'."""
    label, g = _parse_family(family, None)
    if label == "F_FGD":
        return build_fgd(N)
    if label == "F_DAST":
        return dast_base(N)
    return build_ag(g, N)


def select_base(N: int, R, build: bool = True):
    """Base family giving the least ML-decoding exponent for (N, R).

    Returns ``(BaseCandidate, ComplexityProfile)``; ties keep the earlier
    family in :func:`candidate_families` order.
    """
    R = Fraction(R)
    best = None
    for fam, g in candidate_families(N):
        prof = exponent_for(fam, N, R, g)
        if best is None or prof.exponent < best.exponent:
            best = prof
    label = best.base_family
    base_prof = exponent_for(label, N, Fraction(best.K_b, 2 * N))
    design = build_base(label, N) if build else None
    return BaseCandidate(label, design, base_prof.exponent), best

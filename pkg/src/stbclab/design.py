"""The linear-dispersion design aggregate, its structural verifier and the
versioned design-file format.

Symbol indices are 0-based everywhere in Python; the file format stores
them 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy.sparse.csgraph import connected_components

from .linalg import DEFAULT_TOL, Tolerance, matrix_rank, rank_real_span, stack

__all__ = [
    "Conditional",
    "GroupStructure",
    "Design",
    "VerificationReport",
    "verify_design",
    "detect_groups",
    "hr_conflicts",
    "save",
    "load",
    "dumps",
    "loads",
    "DesignFileError",
    "DesignParseError",
    "DesignVersionError",
    "DesignConsistencyError",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Conditional:
    """Fast-decodable structure inside one group.

    Once the `outer` symbols are fixed, the remaining symbols of the group
    split according to `inner`, whose own groups may be conditional again.
    """

    outer: tuple
    inner: "GroupStructure"

    def __post_init__(self):
        object.__setattr__(self, "outer", tuple(sorted(int(i) for i in self.outer)))


@dataclass(frozen=True)
class GroupStructure:
    partition: tuple
    conditional: Mapping[int, Conditional] = field(default_factory=dict)

    def __post_init__(self):
        part = tuple(tuple(sorted(int(i) for i in grp)) for grp in self.partition)
        if not part or any(len(g) == 0 for g in part):
            raise ValueError("partition needs at least one non-empty group")
        seen = [i for g in part for i in g]
        if len(seen) != len(set(seen)):
            raise ValueError("groups overlap")
        object.__setattr__(self, "partition", part)
        cond = dict(self.conditional)
        for gi, c in cond.items():
            if not 0 <= gi < len(part):
                raise ValueError(f"conditional refers to missing group {gi}")
            members = set(part[gi])
            inner = set(c.inner.indices)
            outer = set(c.outer)
            if outer & inner:
                raise ValueError("conditioning set overlaps its inner groups")
            if outer | inner != members:
                raise ValueError(f"conditional structure of group {gi} does not cover it")
        object.__setattr__(self, "conditional", cond)

    @property
    def g(self) -> int:
        return len(self.partition)

    @property
    def indices(self) -> tuple:
        return tuple(sorted(i for grp in self.partition for i in grp))

    @property
    def sizes(self) -> tuple:
        return tuple(len(grp) for grp in self.partition)

    @classmethod
    def flat(cls, partition) -> "GroupStructure":
        return cls(tuple(partition))

    def restrict(self, keep) -> "GroupStructure":
        """Structure induced on the surviving indices `keep`, renumbered
        0..len(keep)-1 in increasing order.  Emptied groups are dropped."""
        keep = sorted(keep)
        new = {old: k for k, old in enumerate(keep)}
        return self._restrict(new)

    def _restrict(self, new):
        part = []
        cond = {}
        for gi, grp in enumerate(self.partition):
            kept = [new[i] for i in grp if i in new]
            if not kept:
                continue
            c = self.conditional.get(gi)
            if c is not None:
                outer = [new[i] for i in c.outer if i in new]
                inner_idx = [i for i in c.inner.indices if i in new]
                if outer and inner_idx:
                    cond[len(part)] = Conditional(outer, c.inner._restrict(new))
                elif inner_idx:
                    # nothing left to condition on: inner groups become top level
                    sub = c.inner._restrict(new)
                    for sgi, sgrp in enumerate(sub.partition):
                        if sgi in sub.conditional:
                            cond[len(part)] = sub.conditional[sgi]
                        part.append(sgrp)
                    continue
            part.append(tuple(kept))
        return GroupStructure(tuple(part), cond)

    def to_json(self) -> dict:
        out = {"groups": [[i + 1 for i in grp] for grp in self.partition]}
        if self.conditional:
            out["conditional"] = [
                {"group": gi + 1, "outer": [i + 1 for i in c.outer], "inner": c.inner.to_json()}
                for gi, c in sorted(self.conditional.items())
            ]
        return out

    @classmethod
    def from_json(cls, obj) -> "GroupStructure":
        part = [[int(i) - 1 for i in grp] for grp in obj["groups"]]
        cond = {}
        for c in obj.get("conditional") or []:
            cond[int(c["group"]) - 1] = Conditional(
                [int(i) - 1 for i in c["outer"]], cls.from_json(c["inner"])
            )
        return cls(tuple(part), cond)


@dataclass(frozen=True, eq=False)
class Design:
    """X = sum_i x_i A_i with weights stacked as a ``(K, T, N)`` array.

    Real-linear independence of the weights is part of what makes this a
    design, but it is checked by :func:`verify_design` rather than here so
    that foreign design files can still be loaded and audited.
    """

    weights: np.ndarray
    groups: GroupStructure
    name: str = ""
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        W = np.array(stack(self.weights), dtype=complex, copy=True)
        if W.ndim != 3 or W.shape[0] == 0:
            raise ValueError("a design needs at least one weight matrix")
        if not np.all(np.isfinite(W)):
            raise ValueError("weights have non-finite entries")
        W.setflags(write=False)
        object.__setattr__(self, "weights", W)
        if not isinstance(self.groups, GroupStructure):
            object.__setattr__(self, "groups", GroupStructure(tuple(self.groups)))
        if self.groups.indices != tuple(range(W.shape[0])):
            raise ValueError(f"groups must partition symbols 0..{W.shape[0] - 1}")
        object.__setattr__(self, "meta", {str(k): str(v) for k, v in dict(self.meta).items()})

    @property
    def K(self) -> int:
        return self.weights.shape[0]

    @property
    def T(self) -> int:
        return self.weights.shape[1]

    @property
    def N(self) -> int:
        return self.weights.shape[2]

    @property
    def rate(self) -> Fraction:
        return Fraction(self.K, 2 * self.T)

    def codeword(self, x) -> np.ndarray:
        return np.tensordot(np.asarray(x), self.weights, axes=(0, 0))

    def with_groups(self, groups: GroupStructure) -> "Design":
        return Design(self.weights, groups, self.name, self.meta)

    def __eq__(self, other):
        if not isinstance(other, Design):
            return NotImplemented
        return (
            self.weights.shape == other.weights.shape
            and self.weights.tobytes() == other.weights.tobytes()
            and self.groups == other.groups
            and self.name == other.name
            and dict(self.meta) == dict(other.meta)
        )

    __hash__ = None

    def __repr__(self):
        return (f"Design(name={self.name!r}, T={self.T}, N={self.N}, K={self.K}, "
                f"rate={self.rate}, groups={self.groups.sizes})")


# -- verification -----------------------------------------------------------

def hr_conflicts(weights, tol: Tolerance = DEFAULT_TOL, chunk: int = 64) -> np.ndarray:
    """Boolean ``(K, K)`` matrix, True where the pair is *not* HR-orthogonal."""
    W = stack(weights)
    K = W.shape[0]
    out = np.zeros((K, K), dtype=bool)
    Wc = W.conj()
    for a in range(0, K, chunk):
        P = np.einsum("ati,btj->abij", Wc[a:a + chunk], W)
        R = P + np.conj(np.swapaxes(P, -1, -2))
        out[a:a + chunk] = np.abs(R).reshape(R.shape[0], K, -1).max(axis=2) > tol.zero_eps
    return out


@dataclass
class VerificationReport:
    K: int
    rank: int
    independent: bool
    cross_group_violations: list
    conditional_violations: list
    ranks: list
    full_rank: bool

    @property
    def violations(self) -> int:
        return (len(self.cross_group_violations) + len(self.conditional_violations)
                + (0 if self.independent else 1) + (0 if self.full_rank else 1))

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def summary(self) -> str:
        lines = [
            f"independence: rank {self.rank} of K={self.K} -> {'ok' if self.independent else 'FAIL'}",
            f"cross-group HR-orthogonality: {len(self.cross_group_violations)} violating pairs",
        ]
        for i, j in self.cross_group_violations[:20]:
            lines.append(f"  x{i + 1} / x{j + 1}")
        lines.append(f"conditional HR-orthogonality: {len(self.conditional_violations)} violating pairs")
        for i, j in self.conditional_violations[:20]:
            lines.append(f"  x{i + 1} / x{j + 1}")
        bad = [k + 1 for k, r in enumerate(self.ranks) if r < max(self.ranks, default=0)]
        lines.append(f"full-rank weights: {'ok' if self.full_rank else 'FAIL ' + str(bad)}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _cross_pairs(partition, bad):
    out = []
    for a in range(len(partition)):
        for b in range(a + 1, len(partition)):
            for i in partition[a]:
                for j in partition[b]:
                    if bad[i, j] or bad[j, i]:
                        out.append((min(i, j), max(i, j)))
    return out


def _conditional_pairs(gs: GroupStructure, bad):
    out = []
    for c in gs.conditional.values():
        out.extend(_cross_pairs(c.inner.partition, bad))
        out.extend(_conditional_pairs(c.inner, bad))
    return out


def verify_design(d: Design, tol: Tolerance = DEFAULT_TOL) -> VerificationReport:
    """Check independence, declared multigroup and conditional structure,
    and that every weight matrix has full rank ``min(T, N)``."""
    rank = rank_real_span(d.weights, tol)
    bad = hr_conflicts(d.weights, tol)
    cross = sorted(set(_cross_pairs(d.groups.partition, bad)))
    cond = sorted(set(_conditional_pairs(d.groups, bad)))
    ranks = [matrix_rank(A, tol) for A in d.weights]
    return VerificationReport(
        K=d.K,
        rank=rank,
        independent=rank == d.K,
        cross_group_violations=cross,
        conditional_violations=cond,
        ranks=ranks,
        full_rank=all(r == min(d.T, d.N) for r in ranks),
    )


def detect_groups(d: Design, tol: Tolerance = DEFAULT_TOL) -> GroupStructure:
    """Finest flat partition allowed by pairwise HR-orthogonality."""
    bad = hr_conflicts(d.weights, tol)
    bad = bad | bad.T
    n, labels = connected_components(bad, directed=False)
    comps = {}
    for i, lab in enumerate(labels):
        comps.setdefault(lab, []).append(i)
    return GroupStructure(tuple(sorted(comps.values(), key=min)))


# -- file format ------------------------------------------------------------

class DesignFileError(Exception):
    code = "design-file"


class DesignParseError(DesignFileError):
    code = "parse"


class DesignVersionError(DesignFileError):
    code = "version"


class DesignConsistencyError(DesignFileError):
    code = "consistency"


def _num(x: float) -> str:
    s = format(float(x), ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _matrix_text(A) -> str:
    rows = []
    for row in A:
        rows.append("[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row) + "]")
    return "[" + ", ".join(rows) + "]"


def dumps(d: Design, extra: Mapping | None = None) -> str:
    """Serialize to the version-1 text format (JSON)."""
    head = {
        "version": FORMAT_VERSION,
        "name": d.name,
        "T": d.T,
        "N": d.N,
        "K": d.K,
        "rate": {"num": d.rate.numerator, "den": d.rate.denominator},
    }
    gs = d.groups.to_json()
    tail = {"groups": gs["groups"]}
    if "conditional" in gs:
        tail["conditional"] = gs["conditional"]
    tail["meta"] = dict(sorted(d.meta.items()))
    if extra:
        tail.update(extra)
    parts = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    weights = ",\n    ".join(_matrix_text(A) for A in d.weights)
    parts.append(f'  "weights": [\n    {weights}\n  ]')
    parts.extend(f"  {json.dumps(k)}: {json.dumps(v, sort_keys=True)}" for k, v in tail.items())
    return "{\n" + ",\n".join(parts) + "\n}\n"


def loads(text: str) -> tuple:
    """Parse a design document; returns ``(design, raw_document)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DesignParseError(f"malformed design file: {exc}") from exc
    if not isinstance(doc, dict):
        raise DesignParseError("design file must hold a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise DesignVersionError(f"unsupported design format version {doc.get('version')!r}")
    try:
        T, N, K = int(doc["T"]), int(doc["N"]), int(doc["K"])
        raw = doc["weights"]
        groups = GroupStructure.from_json(doc)
        rate = Fraction(int(doc["rate"]["num"]), int(doc["rate"]["den"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DesignParseError(f"missing or invalid field: {exc}") from exc
    if len(raw) != K:
        raise DesignConsistencyError(f"K={K} but {len(raw)} weight matrices given")
    try:
        W = np.array(raw, dtype=float)
    except ValueError as exc:
        raise DesignConsistencyError(f"ragged weight matrices: {exc}") from exc
    if W.shape != (K, T, N, 2):
        raise DesignConsistencyError(f"weights have shape {W.shape[:-1]}, expected {(K, T, N)}")
    if rate != Fraction(K, 2 * T):
        raise DesignConsistencyError(f"stored rate {rate} differs from K/2T = {Fraction(K, 2 * T)}")
    # assign parts separately: re + 1j*im would turn -0.0 into 0.0
    weights = np.empty((K, T, N), dtype=complex)
    weights.real, weights.imag = W[..., 0], W[..., 1]
    try:
        d = Design(weights, groups, str(doc.get("name", "")), doc.get("meta") or {})
    except ValueError as exc:
        raise DesignConsistencyError(str(exc)) from exc
    return d, doc


def save(d: Design, path, extra: Mapping | None = None) -> None:
    Path(path).write_text(dumps(d, extra))


def load(path) -> Design:
    return loads(Path(path).read_text())[0]

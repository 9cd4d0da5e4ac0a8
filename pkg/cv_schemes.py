"""Cross-validation blocking designs for serially dependent data.

Indices are 1-based in every public structure. A ``FoldPlan`` is an ordered
list of (test, train) index tuples plus the evaluation mode used to score
each test block.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import pandas as pd

from errors import InfeasibleSchemeError, InvalidArgumentError

SCHEME_KINDS = ("loo", "kfold", "h-block", "hv-block", "lfo")


class Mode(str, Enum):
    JOINT = "joint"
    POINTWISE = "pointwise"


@dataclass(frozen=True)
class Fold:
    test: tuple[int, ...]
    train: tuple[int, ...]


@dataclass(frozen=True)
class FoldPlan:
    T: int
    folds: tuple[Fold, ...]
    mode: Mode = Mode.JOINT

    @property
    def K(self) -> int:
        return len(self.folds)


@dataclass(frozen=True)
class SchemeSpec:
    kind: str
    mode: Mode = Mode.JOINT
    K: int = 10
    h: int = 0
    v: int = 0
    w: int = 1

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise InvalidArgumentError(f"unknown scheme kind {self.kind!r}")
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.kind == "kfold" and self.K < 2:
            raise InvalidArgumentError("K-fold needs K >= 2")
        if self.h < 0 or self.v < 0:
            raise InvalidArgumentError("h and v must be non-negative")
        if self.w < 1:
            raise InvalidArgumentError("w must be at least 1")
        # singleton test sets: joint and pointwise scores coincide
        if self.kind in ("loo", "h-block"):
            object.__setattr__(self, "mode", Mode.POINTWISE)

    @classmethod
    def loo(cls) -> "SchemeSpec":
        return cls("loo")

    @classmethod
    def kfold(cls, K: int, mode: Mode | str = Mode.JOINT) -> "SchemeSpec":
        return cls("kfold", mode=mode, K=K)

    @classmethod
    def h_block(cls, h: int) -> "SchemeSpec":
        return cls("h-block", h=h)

    @classmethod
    def hv_block(cls, h: int, v: int, mode: Mode | str = Mode.JOINT) -> "SchemeSpec":
        return cls("hv-block", mode=mode, h=h, v=v)

    @classmethod
    def lfo(cls, h: int, v: int, w: int, mode: Mode | str = Mode.JOINT) -> "SchemeSpec":
        return cls("lfo", mode=mode, h=h, v=v, w=w)

    def with_mode(self, mode: Mode | str) -> "SchemeSpec":
        return replace(self, mode=Mode(mode))


def scheme_label(scheme: SchemeSpec) -> str:
    if scheme.kind == "loo":
        core = "loo"
    elif scheme.kind == "kfold":
        core = f"kfold({scheme.K})"
    elif scheme.kind == "h-block":
        core = f"h-block({scheme.h})"
    elif scheme.kind == "hv-block":
        core = f"hv-block({scheme.h},{scheme.v})"
    else:
        core = f"lfo({scheme.h},{scheme.v},{scheme.w})"
    return f"{core}/{scheme.mode.value}"


def scheme_to_dict(scheme: SchemeSpec) -> dict:
    data: dict = {"kind": scheme.kind, "mode": scheme.mode.value}
    if scheme.kind == "kfold":
        data["K"] = scheme.K
    if scheme.kind in ("h-block", "hv-block", "lfo"):
        data["h"] = scheme.h
    if scheme.kind in ("hv-block", "lfo"):
        data["v"] = scheme.v
    if scheme.kind == "lfo":
        data["w"] = scheme.w
    return data


def scheme_from_dict(data: dict) -> SchemeSpec:
    unknown = set(data) - {"kind", "mode", "K", "h", "v", "w"}
    if unknown:
        raise InvalidArgumentError(f"unknown scheme keys: {sorted(unknown)}")
    if "kind" not in data:
        raise InvalidArgumentError("scheme needs a 'kind'")
    return SchemeSpec(
        kind=data["kind"],
        mode=data.get("mode", Mode.JOINT),
        K=int(data.get("K", 10)),
        h=int(data.get("h", 0)),
        v=int(data.get("v", 0)),
        w=int(data.get("w", 1)),
    )


def _tiles(start: int, stop: int, width: int) -> list[tuple[int, int]]:
    """Consecutive [a, b] blocks of ``width`` covering start..stop, last one clipped."""
    return [(a, min(a + width - 1, stop)) for a in range(start, stop + 1, width)]


def _raw_folds(scheme: SchemeSpec, T: int) -> list[tuple[list[int], list[int]]]:
    everything = range(1, T + 1)
    if scheme.kind in ("loo", "h-block"):
        h = scheme.h if scheme.kind == "h-block" else 0
        return [([k], [t for t in everything if abs(t - k) > h]) for k in everything]
    if scheme.kind == "kfold":
        base, extra = divmod(T, scheme.K)
        folds, a = [], 1
        for k in range(scheme.K):
            size = base + (1 if k < extra else 0)
            test = list(range(a, a + size))
            folds.append((test, [t for t in everything if t < a or t >= a + size]))
            a += size
        return folds
    width = 2 * scheme.v + 1
    if scheme.kind == "hv-block":
        return [
            (list(range(a, b + 1)), [t for t in everything if t < a - scheme.h or t > b + scheme.h])
            for a, b in _tiles(1, T, width)
        ]
    return [
        (list(range(a, b + 1)), list(range(1, a - scheme.h)))
        for a, b in _tiles(scheme.w + 1, T, width)
    ]


def make_plan(scheme: SchemeSpec, T: int) -> FoldPlan:
    if T < 1:
        raise InvalidArgumentError("T must be at least 1")
    raw = _raw_folds(scheme, T)
    if not raw:
        raise InfeasibleSchemeError(f"{scheme_label(scheme)} has no test blocks for T={T}")
    for k, (test, train) in enumerate(raw, start=1):
        if not test:
            raise InfeasibleSchemeError(f"empty test in fold {k}", fold=k)
        if not train:
            raise InfeasibleSchemeError(f"empty train in fold {k}", fold=k)
    folds = tuple(Fold(tuple(test), tuple(train)) for test, train in raw)
    return FoldPlan(T=T, folds=folds, mode=scheme.mode)


def selection_indices(fold: Fold) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(train, test) 1-based index lists; S-matrices are never materialized."""
    return fold.train, fold.test


def zero_based(indices) -> np.ndarray:
    return np.asarray(indices, dtype=int) - 1


def validate_plan(plan: FoldPlan) -> list[str]:
    """All invariant violations of ``plan``; an empty list means the plan is valid."""
    problems = []
    for k, fold in enumerate(plan.folds, start=1):
        if not fold.test:
            problems.append(f"empty test in fold {k}")
        if not fold.train:
            problems.append(f"empty train in fold {k}")
        overlap = sorted(set(fold.test) & set(fold.train))
        if overlap:
            problems.append(f"overlap in fold {k}: {overlap}")
        if any(not 1 <= t <= plan.T for t in fold.test + fold.train):
            problems.append(f"index out of range in fold {k}")
        if list(fold.test) != sorted(set(fold.test)) or list(fold.train) != sorted(set(fold.train)):
            problems.append(f"unsorted or repeated indices in fold {k}")
    return problems


def require_valid(plan: FoldPlan) -> FoldPlan:
    problems = validate_plan(plan)
    if problems:
        first = problems[0]
        fold = int(first.split("fold ")[1].split(":")[0]) if "fold " in first else None
        raise InfeasibleSchemeError("; ".join(problems), fold=fold)
    return plan


def plan_to_frame(plan: FoldPlan) -> pd.DataFrame:
    rows = [
        {"fold": k, "role": role, "index": t}
        for k, fold in enumerate(plan.folds, start=1)
        for role, indices in (("test", fold.test), ("train", fold.train))
        for t in indices
    ]
    return pd.DataFrame(rows, columns=["fold", "role", "index"])

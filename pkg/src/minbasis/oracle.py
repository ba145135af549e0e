"""Brute-force window oracles: r_h tables, E_a windows, threshold evidence.

Everything here is finite-window arithmetic over A intersect [1, N]; for
n <= N that agrees with the infinite basis, since parts are positive.  The
oracle is deliberately independent of the certificate builders: it only
needs something that classifies exponents (a PartitionConfig, or an explicit
IntervalPartition for lab partitions the config grammar cannot express).

r_h tables count ordered h-tuples.  Counts accumulate in int64 and are
clipped at a saturation cap after every convolution step, which keeps the
next step overflow-safe; reports carry a `saturated` flag when the cap was
hit (membership questions r >= 1 vs r = 0 are unaffected).

theorem_a_spot_check gathers finite evidence for the minimal-basis theorem:
in the regime 2 <= t <= log2(h) the basis is provably NOT minimal, so the
check refuses to run (ParameterMismatch).  Outside the t > log2(h) guarantee
(e.g. h=2, t=1) it still runs but labels the result as finite-window
evidence only.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ElementNotInA, ParameterMismatch, WindowTooLarge
from .partition import PartitionConfig

DEFAULT_MAX_WINDOW = 1 << 22
SATURATION_CAP = (1 << 32) - 1
BUDGET_ENV_VAR = "NATHANSON_MAX_WINDOW"


def window_budget() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_WINDOW
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{BUDGET_ENV_VAR} must be >= 1, got {value}")
    return value


@dataclass(frozen=True)
class IntervalPartition:
    """Explicit exponent partition: classes[j] lists inclusive intervals.

    Must cover [0, cover] exactly, with no overlaps.
    """

    classes: tuple
    cover: int

    def __post_init__(self):
        seen = []
        for j, ivs in enumerate(self.classes):
            for lo, hi in ivs:
                if lo > hi:
                    raise ValueError(f"class {j} has empty interval [{lo}, {hi}]")
                seen.append((lo, hi, j))
        seen.sort()
        prev_hi = -1
        for lo, hi, j in seen:
            if lo != prev_hi + 1:
                word = "overlap at" if lo <= prev_hi else "gap before"
                raise ValueError(f"intervals must tile [0, {self.cover}]: {word} {lo} (class {j})")
            prev_hi = hi
        if prev_hi != self.cover:
            raise ValueError(f"intervals cover up to {prev_hi}, expected {self.cover}")

    @property
    def h(self) -> int:
        return len(self.classes)

    @cached_property
    def _flat(self) -> tuple:
        rows = []
        for j, ivs in enumerate(self.classes):
            for lo, hi in ivs:
                rows.append((lo, hi, j))
        rows.sort()
        return tuple(rows)

    def classify(self, w: int) -> int:
        if not 0 <= w <= self.cover:
            raise ValueError(f"position {w} outside covered range [0, {self.cover}]")
        rows = self._flat
        idx = bisect_right(rows, (w, self.cover + 1, 0)) - 1
        lo, hi, j = rows[idx]
        if not lo <= w <= hi:
            raise ValueError(f"position {w} not covered")
        return j

    @classmethod
    def alternating(cls, h: int, block_len: int, cover: int) -> "IntervalPartition":
        """Blocks of block_len positions cycling through classes 0..h-1."""
        if h < 1 or block_len < 1:
            raise ValueError("h and block_len must be >= 1")
        classes: list[list] = [[] for _ in range(h)]
        lo = 0
        idx = 0
        while lo <= cover:
            hi = min(lo + block_len - 1, cover)
            classes[idx % h].append((lo, hi))
            lo = hi + 1
            idx += 1
        return cls(classes=tuple(tuple(ivs) for ivs in classes), cover=cover)

    @classmethod
    def from_config(cls, cfg: PartitionConfig, cover: int) -> "IntervalPartition":
        return cls(
            classes=tuple(tuple(tuple(iv) for iv in ivs) for ivs in cfg.class_intervals(cover)),
            cover=cover,
        )


@dataclass(frozen=True)
class WindowReport:
    N: int
    h: int
    counts: tuple  # counts[n] = r_h(A, n), clipped at the cap
    gaps: tuple  # n in [0, N] with count 0
    basis_size: int
    saturated: bool

    def count(self, n: int) -> int:
        return self.counts[n]


@dataclass(frozen=True)
class EWindowReport:
    a: int
    N: int
    h: int
    members: tuple  # n in [0, N] with r_h(A) >= 1 but r_h(A \ {a}) = 0
    saturated: bool


def _check_window(N: int) -> None:
    if N < 1:
        raise ValueError(f"window bound must be >= 1, got {N}")
    budget = window_budget()
    if N > budget:
        raise WindowTooLarge(f"window bound {N} exceeds the budget {budget} (set {BUDGET_ENV_VAR} to raise it)")


def enumerate_A(classifier, N: int) -> list:
    """All basis elements in [1, N], ascending.

    Enumerates per class: submasks of the OR of that class's exponent bits.
    """
    _check_window(N)
    emax = N.bit_length() - 1
    masks: dict[int, int] = {}
    for e in range(emax + 1):
        j = classifier.classify(e)
        masks[j] = masks.get(j, 0) | (1 << e)
    out = []
    for mask in masks.values():
        sub = mask
        while sub:
            if sub <= N:
                out.append(sub)
            sub = (sub - 1) & mask
    out.sort()
    return out


def _convolve_step(counts: np.ndarray, elems: np.ndarray, N: int) -> np.ndarray:
    out = np.zeros(N + 1, dtype=np.int64)
    for a in elems:
        out[a:] += counts[: N + 1 - a]
    return out


def _table_for_elements(elems: list, N: int, h: int, cap: int) -> tuple:
    arr = np.array(elems, dtype=np.int64)
    counts = np.zeros(N + 1, dtype=np.int64)
    if len(arr):
        counts[arr] = 1
    saturated = False
    for _ in range(h - 1):
        counts = _convolve_step(counts, arr, N)
        if counts.max(initial=0) > cap:
            saturated = True
            np.minimum(counts, cap, out=counts)
    return counts, saturated


def r_h_table(classifier, N: int, h: int | None = None, cap: int = SATURATION_CAP) -> WindowReport:
    """Ordered-tuple representation counts r_h(A, n) for all n in [0, N]."""
    if h is None:
        h = classifier.h
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    elems = enumerate_A(classifier, N)
    counts, saturated = _table_for_elements(elems, N, h, cap)
    gaps = tuple(np.flatnonzero(counts == 0).tolist())
    return WindowReport(
        N=N, h=h, counts=tuple(counts.tolist()), gaps=gaps, basis_size=len(elems), saturated=saturated
    )


def e_window(classifier, a: int, N: int, h: int | None = None, cap: int = SATURATION_CAP) -> EWindowReport:
    """Window slice of E_a = hA \\ h(A \\ {a}): n representable only via a."""
    if h is None:
        h = classifier.h
    elems = enumerate_A(classifier, N)
    if a not in elems:
        raise ElementNotInA(f"{a} is not a basis element within [1, {N}]")
    with_a, sat1 = _table_for_elements(elems, N, h, cap)
    without = [x for x in elems if x != a]
    without_a, sat2 = _table_for_elements(without, N, h, cap)
    members = np.flatnonzero((with_a >= 1) & (without_a == 0))
    return EWindowReport(a=a, N=N, h=h, members=tuple(members.tolist()), saturated=sat1 or sat2)


def theorem_a_spot_check(
    classifier, t: int, N: int, h: int | None = None, samples: int = 20, cap: int = SATURATION_CAP
) -> dict:
    """Finite-window evidence that the partitioned basis is minimal of order h.

    Refuses the regime 2 <= t <= log2(h), where splitting 2^t copies of a
    shifted term shows the basis is not minimal.
    """
    if h is None:
        h = classifier.h
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if t >= 2 and (1 << t) <= h:
        raise ParameterMismatch(
            f"t={t} with h={h} satisfies 2 <= t <= log2(h); the basis is provably not minimal there"
        )
    guarantee_applies = (1 << t) > h  # t > log2(h)
    table = r_h_table(classifier, N, h, cap)
    positive_gaps = [n for n in table.gaps if n >= 1]
    threshold = (max(positive_gaps) + 1) if positive_gaps else 1
    elems = enumerate_A(classifier, N)
    sample_rows = []
    all_nonempty = True
    for a in elems[:samples]:
        ew = e_window(classifier, a, N, h, cap)
        nonempty = bool(ew.members)
        all_nonempty = all_nonempty and nonempty
        sample_rows.append(
            {"a": a, "e_window_nonempty": nonempty, "min_member": ew.members[0] if nonempty else None}
        )
    return {
        "evidence": "finite-window",
        "guarantee_applies": guarantee_applies,
        "label": (
            "minimality evidence within [1, N] only"
            if guarantee_applies
            else "outside the t > log2(h) guarantee; finite-window evidence only"
        ),
        "h": h,
        "t": t,
        "N": N,
        "basis_size": table.basis_size,
        "threshold": threshold,
        "represented_above_threshold": not any(n >= threshold for n in positive_gaps),
        "gap_count": len(positive_gaps),
        "samples": sample_rows,
        "all_sampled_e_windows_nonempty": all_nonempty,
        "saturated": table.saturated,
    }

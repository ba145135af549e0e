"""Partition of the non-negative integers into exponent classes W_0..W_{h-1}.

Fix h >= 2, t >= 1 and an increasing sequence m_1 < m_2 < ... with gaps of at
least t.  Directly above each m_i sits a block of t positions
[m_i + 1, m_i + t]; block i belongs to class ((i-1) mod (h-1)) + 1.  W_0 is
everything else: [0, m_1] plus the runs [m_i + t + 1, m_{i+1}] between blocks.

The construction the rest of the package implements needs the strict regime:
t >= 2, m_1 > 2^(h+4), and every gap m_{i+1} - m_i > 2^(h+4).  There the
shift lemma holds: any position w outside W_0 has w > m_1 and w - t in W_0,
because a block is only t wide and the W_0 run below it is much wider.
Non-strict configs are allowed for lab use (mode generic_lab); operations
that rely on the lemma refuse them.

Mode case1 additionally requires h > 2^t, mode case2 requires h = 2^t; these
are the two parameter regimes with dedicated representation builders.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import ConfigError


class Mode(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    GENERIC_LAB = "generic_lab"


@dataclass(frozen=True)
class ArithmeticRule:
    """m_i = first + (i - 1) * step."""

    first: int
    step: int

    def m(self, i: int) -> int:
        if i < 1:
            raise ValueError(f"m-sequence index must be >= 1, got {i}")
        return self.first + (i - 1) * self.step

    def min_gap(self) -> int:
        return self.step


@dataclass(frozen=True)
class ExplicitRule:
    """Listed prefix, then m_{k+j} = values[-1] + j * tail_step."""

    values: tuple
    tail_step: int

    def m(self, i: int) -> int:
        if i < 1:
            raise ValueError(f"m-sequence index must be >= 1, got {i}")
        k = len(self.values)
        if i <= k:
            return self.values[i - 1]
        return self.values[-1] + (i - k) * self.tail_step

    def min_gap(self) -> int:
        gaps = [b - a for a, b in zip(self.values, self.values[1:])]
        gaps.append(self.tail_step)
        return min(gaps)


MRule = ArithmeticRule | ExplicitRule


@dataclass(frozen=True)
class Violation:
    constraint: str
    message: str


@dataclass(frozen=True)
class PartitionConfig:
    h: int
    t: int
    m_rule: MRule
    strict: bool = True
    mode: Mode = Mode.GENERIC_LAB

    def m(self, i: int) -> int:
        return self.m_rule.m(i)

    def block_class(self, i: int) -> int:
        """Class of block i: residues 1..h-2 map to themselves, 0 to h-1."""
        return (i - 1) % (self.h - 1) + 1

    def classify(self, w: int) -> int:
        """Class index of position w (0 means W_0)."""
        if w < 0:
            raise ValueError(f"position must be >= 0, got {w}")
        rule = self.m_rule
        if isinstance(rule, ArithmeticRule):
            if w <= rule.first:
                return 0
            i = (w - 1 - rule.first) // rule.step + 1
            m_i = rule.m(i)
        else:
            vals = rule.values
            if w <= vals[0]:
                return 0
            i = bisect_left(vals, w)
            if i == len(vals):
                k = (w - 1 - vals[-1]) // rule.tail_step
                i = len(vals) + k
            m_i = rule.m(i)
        if w <= m_i + self.t:
            return self.block_class(i)
        return 0

    def shift_into_w0(self, w: int) -> int:
        """For w outside W_0 under a strict config, w - t lands in W_0."""
        from .errors import NotOutsideW0

        if self.classify(w) == 0:
            raise NotOutsideW0(f"position {w} is already in W_0")
        shifted = w - self.t
        if self.strict and self.classify(shifted) != 0:
            # cannot happen when gaps exceed 2^(h+4) > 2t
            from .errors import InvariantViolation

            raise InvariantViolation(f"shift lemma failed at w={w}")
        return shifted

    def w0_intervals(self, upto: int) -> list:
        """Inclusive intervals of W_0 within [0, upto], in order."""
        if upto < 0:
            raise ValueError(f"upto must be >= 0, got {upto}")
        out = []
        m1 = self.m(1)
        if m1 >= 0:
            out.append((0, min(m1, upto)))
        i = 1
        while True:
            lo = self.m(i) + self.t + 1
            if lo > upto:
                break
            hi = min(self.m(i + 1), upto)
            if lo <= hi:
                out.append((lo, hi))
            i += 1
        return out

    def class_intervals(self, upto: int) -> list:
        """Per-class inclusive interval lists covering [0, upto]."""
        out = [[] for _ in range(self.h)]
        out[0] = [list(iv) for iv in self.w0_intervals(upto)]
        i = 1
        while True:
            lo = self.m(i) + 1
            if lo > upto:
                break
            hi = min(self.m(i) + self.t, upto)
            out[self.block_class(i)].append([lo, hi])
            i += 1
        return out


def classify(cfg: PartitionConfig, w: int) -> int:
    return cfg.classify(w)


def shift_into_w0(cfg: PartitionConfig, w: int) -> int:
    return cfg.shift_into_w0(w)


def w0_interval_iter(cfg: PartitionConfig, upto: int) -> Iterator[tuple]:
    return iter(cfg.w0_intervals(upto))


def validate_config(cfg: PartitionConfig) -> list:
    """All violated constraints, empty when the config is usable."""
    v: list[Violation] = []
    if cfg.h < 2:
        v.append(Violation("h_range", f"h must be >= 2, got {cfg.h}"))
    if cfg.t < 1:
        v.append(Violation("t_range", f"t must be >= 1, got {cfg.t}"))
    rule = cfg.m_rule
    if isinstance(rule, ArithmeticRule):
        if rule.first < 0:
            v.append(Violation("m_start", f"m_1 must be >= 0, got {rule.first}"))
        if rule.step < 1:
            v.append(Violation("m_increasing", f"step must be >= 1, got {rule.step}"))
    elif isinstance(rule, ExplicitRule):
        if not rule.values:
            v.append(Violation("m_start", "explicit rule needs at least one value"))
        else:
            if rule.values[0] < 0:
                v.append(Violation("m_start", f"m_1 must be >= 0, got {rule.values[0]}"))
            if any(b <= a for a, b in zip(rule.values, rule.values[1:])):
                v.append(Violation("m_increasing", f"values not strictly increasing: {rule.values}"))
        if rule.tail_step < 1:
            v.append(Violation("m_increasing", f"tail_step must be >= 1, got {rule.tail_step}"))
    else:
        v.append(Violation("m_rule", f"unknown m-rule type {type(rule).__name__}"))
    if v:
        return v

    if cfg.t >= 1 and rule.min_gap() < cfg.t:
        v.append(
            Violation("gap_at_least_t", f"m-gaps must be >= t so blocks stay disjoint; min gap {rule.min_gap()} < t={cfg.t}")
        )

    if cfg.strict:
        bound = 1 << (cfg.h + 4)
        if cfg.t < 2:
            v.append(Violation("strict_t", f"strict configs need t >= 2, got t={cfg.t}"))
        if cfg.m(1) <= bound:
            v.append(Violation("strict_m1", f"strict configs need m_1 > 2^(h+4) = {bound}, got m_1={cfg.m(1)}"))
        if rule.min_gap() <= bound:
            v.append(Violation("strict_gap", f"strict configs need every m-gap > 2^(h+4) = {bound}, got min gap {rule.min_gap()}"))

    if cfg.mode is Mode.CASE1 and cfg.h <= (1 << cfg.t):
        v.append(Violation("mode_case1_h", f"mode case1 needs h > 2^t, got h={cfg.h}, 2^t={1 << cfg.t}"))
    if cfg.mode is Mode.CASE2 and cfg.h != (1 << cfg.t):
        v.append(Violation("mode_case2_h", f"mode case2 needs h = 2^t, got h={cfg.h}, 2^t={1 << cfg.t}"))
    return v


def require_usable(cfg: PartitionConfig, mode: Mode | None = None, strict: bool = False) -> None:
    """Raise ConfigError unless cfg validates (and matches mode/strictness)."""
    v = validate_config(cfg)
    if not v:
        if strict and not cfg.strict:
            v.append(Violation("strict_violation", "operation requires a strict config"))
        if mode is not None and cfg.mode is not mode:
            v.append(Violation("mode_mismatch", f"operation requires mode {mode.value}, config has {cfg.mode.value}"))
    if v:
        raise ConfigError(v)


def config_to_dict(cfg: PartitionConfig) -> dict:
    rule = cfg.m_rule
    if isinstance(rule, ArithmeticRule):
        rd = {"kind": "arithmetic", "first": rule.first, "step": rule.step}
    else:
        rd = {"kind": "explicit", "values": list(rule.values), "tail_step": rule.tail_step}
    return {"h": cfg.h, "t": cfg.t, "m_rule": rd, "strict": cfg.strict, "mode": cfg.mode.value}


def config_from_dict(d: dict) -> PartitionConfig:
    if not isinstance(d, dict):
        raise ValueError(f"config must be an object, got {type(d).__name__}")
    missing = {"h", "t", "m_rule"} - set(d)
    if missing:
        raise ValueError(f"config missing fields: {sorted(missing)}")
    rd = d["m_rule"]
    if not isinstance(rd, dict) or "kind" not in rd:
        raise ValueError("m_rule must be an object with a 'kind' field")
    kind = rd["kind"]
    try:
        if kind == "arithmetic":
            rule: MRule = ArithmeticRule(first=int(rd["first"]), step=int(rd["step"]))
        elif kind == "explicit":
            vals = rd.get("values")
            if not isinstance(vals, list):
                raise ValueError("explicit m_rule needs a 'values' list")
            rule = ExplicitRule(values=tuple(int(x) for x in vals), tail_step=int(rd["tail_step"]))
        else:
            raise ValueError(f"unknown m_rule kind {kind!r}")
    except KeyError as exc:
        raise ValueError(f"m_rule missing field {exc.args[0]!r}") from None
    except TypeError as exc:
        raise ValueError(f"bad m_rule field: {exc}") from None
    mode_text = d.get("mode", Mode.GENERIC_LAB.value)
    try:
        mode = Mode(mode_text)
    except ValueError:
        raise ValueError(f"unknown mode {mode_text!r}") from None
    try:
        return PartitionConfig(h=int(d["h"]), t=int(d["t"]), m_rule=rule, strict=bool(d.get("strict", True)), mode=mode)
    except TypeError as exc:
        raise ValueError(f"bad config field: {exc}") from None


def load_config(path: str) -> PartitionConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {path} is not valid JSON: {exc}") from None
    return config_from_dict(doc)

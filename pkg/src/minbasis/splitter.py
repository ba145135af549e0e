"""Case 1 splitting: h-part representations inside A(W_0) when h > 2^t.

Every n >= 1 is first pushed into W_0 exponents: each binary exponent f
outside W_0 becomes 2^t copies of f - t (shift lemma).  Then terms are split
largest-first.  A term 2^w is splittable when w > 2t+1 and no other exponent
lives in [w - 2t - 1, w - 1]; splitting uses

  rule (a):  2^w = 2 * 2^(w-1)                          if w-1 in W_0
  rule (b):  2^w = (2^t+1) * (2^(w-t-1) + ... + 2^(w-2t)) + 2 * 2^(w-2t-1)
                                                         otherwise

Rule (b) exists because a block outside W_0 is only t wide: when w-1 starts a
block, the t+1 positions from w-t-1 down to w-2t-1 all sit in W_0.  The
process keeps every multiplicity at most 2^t + 1 and, once no split remains,
leaves consecutive distinct exponents (with a sentinel at 0) at most 2t+1
apart.  For n >= h * 2^(h(2t+1)) that forces at least h terms, which
round-robin into h non-empty parts, all inside A(W_0) since h > 2^t means
2^t + 1 <= h copies of a term never land in the same part twice.
"""

from __future__ import annotations

import hashlib
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush

from .certificate import CASE1_TAG, Certificate, build
from .errors import InvariantViolation, NotEligible, RuleBMembershipViolation, TooFewTerms
from .numeral import to_exponent_set, validate_exponents
from .partition import Mode, PartitionConfig, require_usable

RULE_SHIFT = "shift"
RULE_A = "a"
RULE_B = "b"


@dataclass(frozen=True)
class SplitStep:
    rule: str  # "shift" | "a" | "b"
    exponent: int  # the exponent consumed


@dataclass
class SplitState:
    """Mutable working multiset; apply_split edits it in place."""

    cfg: PartitionConfig
    terms: dict = field(default_factory=dict)  # exponent -> multiplicity
    present: list = field(default_factory=list)  # sorted distinct exponents
    trace: list | None = None
    max_multiplicity: int = 0
    steps: int = 0

    def multiset(self) -> dict:
        return dict(self.terms)

    def value(self) -> int:
        # for tests and small states; the engine never calls this
        return sum(c << e for e, c in self.terms.items())


@dataclass(frozen=True)
class SplitResult:
    n_exponents: tuple
    terms: tuple  # sorted ((exponent, multiplicity), ...)
    s: int  # total term count with multiplicity
    steps: int
    max_multiplicity: int
    gap_profile: tuple  # successive differences of distinct exponents, sentinel 0 first
    max_gap: int
    guaranteed: bool  # n >= h * 2^(h(2t+1))
    trace: tuple | None


def guarantee_threshold(cfg: PartitionConfig) -> int:
    return cfg.h << (cfg.h * (2 * cfg.t + 1))


def _add(state: SplitState, e: int, c: int) -> None:
    cur = state.terms.get(e)
    if cur is None:
        state.terms[e] = c
        insort(state.present, e)
        cur = c
    else:
        cur += c
        state.terms[e] = cur
    if cur > (1 << state.cfg.t) + 1:
        raise InvariantViolation(f"multiplicity {cur} at exponent {e} exceeds 2^t + 1")
    if cur > state.max_multiplicity:
        state.max_multiplicity = cur


def _take_one(state: SplitState, e: int) -> None:
    cur = state.terms[e]
    if cur == 1:
        del state.terms[e]
        idx = bisect_left(state.present, e)
        state.present.pop(idx)
    else:
        state.terms[e] = cur - 1


def state_from_multiset(cfg: PartitionConfig, mset: dict, keep_trace: bool = False) -> SplitState:
    """Build a working state directly; lab entry point, no shift applied."""
    state = SplitState(cfg=cfg, trace=[] if keep_trace else None)
    for e, c in sorted(mset.items()):
        if e < 0 or c < 1:
            raise ValueError(f"bad multiset entry {e}: {c}")
        state.terms[e] = c
        state.present.append(e)
        if c > state.max_multiplicity:
            state.max_multiplicity = c
    return state


def initial_shift(cfg: PartitionConfig, exponents, keep_trace: bool = False) -> SplitState:
    """Move every exponent outside W_0 down by t, with 2^t copies."""
    require_usable(cfg, Mode.CASE1, strict=True)
    exps = validate_exponents(exponents)
    if not exps:
        raise ValueError("need at least one exponent (n >= 1)")
    state = SplitState(cfg=cfg, trace=[] if keep_trace else None)
    for f in exps:
        if cfg.classify(f) == 0:
            _add(state, f, 1)
        else:
            _add(state, cfg.shift_into_w0(f), 1 << cfg.t)
            if state.trace is not None:
                state.trace.append(SplitStep(RULE_SHIFT, f))
    return state


def _eligible(state: SplitState, w: int) -> bool:
    win = 2 * state.cfg.t + 1
    if w <= win:
        return False
    idx = bisect_left(state.present, w)
    if idx == 0:
        return True
    return state.present[idx - 1] < w - win


def find_splittable(state: SplitState) -> int | None:
    """Largest splittable exponent, by direct scan. None at the fixpoint."""
    for w in reversed(state.present):
        if _eligible(state, w):
            return w
    return None


def apply_split(state: SplitState, w: int) -> SplitState:
    """Split one copy of 2^w by rule (a) or (b). Mutates and returns state."""
    cfg = state.cfg
    t = cfg.t
    if state.terms.get(w, 0) < 1:
        raise NotEligible(f"no term with exponent {w}")
    if not _eligible(state, w):
        raise NotEligible(f"exponent {w} is not splittable here")
    if cfg.classify(w - 1) == 0:
        _take_one(state, w)
        _add(state, w - 1, 2)
        rule = RULE_A
    else:
        targets = [w - d for d in range(t + 1, 2 * t + 1)]
        low = w - 2 * t - 1
        bad = [(u, cfg.classify(u)) for u in targets + [low] if cfg.classify(u) != 0]
        if bad:
            u, j = bad[0]
            raise RuleBMembershipViolation(
                f"rule (b) at w={w} needs exponent {u} in W_0, but it lies in W_{j}; config is not strict"
            )
        _take_one(state, w)
        for u in targets:
            _add(state, u, (1 << t) + 1)
        _add(state, low, 2)
        rule = RULE_B
    state.steps += 1
    if state.trace is not None:
        state.trace.append(SplitStep(rule, w))
    return state


def run_split(cfg: PartitionConfig, n: int, keep_trace: bool = False) -> SplitResult:
    """Shift then split to the fixpoint, consuming the largest eligible term first."""
    require_usable(cfg, Mode.CASE1, strict=True)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    n_exps = to_exponent_set(n)
    state = initial_shift(cfg, n_exps, keep_trace)
    win = 2 * cfg.t + 1
    heap = [-w for w in state.present if _eligible(state, w)]
    heapify(heap)
    while heap:
        w = -heappop(heap)
        if w not in state.terms or not _eligible(state, w):
            continue  # stale entry
        apply_split(state, w)
        # eligibility can only change for exponents in [w - 2t - 1, w + 2t + 1]:
        # new terms appear at or above w - 2t - 1, and removing w can free
        # exponents at most 2t + 1 above it
        lo = bisect_left(state.present, w - 2 * cfg.t - 1)
        hi = bisect_right(state.present, w + win)
        for u in state.present[lo:hi]:
            if _eligible(state, u):
                heappush(heap, -u)
    leftover = find_splittable(state)
    if leftover is not None:
        raise InvariantViolation(f"engine stopped with splittable exponent {leftover}")
    return _finish(cfg, n, n_exps, state)


def _finish(cfg: PartitionConfig, n: int, n_exps: tuple, state: SplitState) -> SplitResult:
    terms = tuple(sorted(state.terms.items()))
    s = sum(c for _, c in terms)
    gaps = []
    prev = 0
    for e, _ in terms:
        gaps.append(e - prev)
        prev = e
    max_gap = max(gaps) if gaps else 0
    win = 2 * cfg.t + 1
    if max_gap > win:
        raise InvariantViolation(f"gap {max_gap} exceeds 2t + 1 = {win} at the fixpoint")
    if state.max_multiplicity > (1 << cfg.t) + 1:
        raise InvariantViolation(f"multiplicity {state.max_multiplicity} exceeded 2^t + 1")
    guaranteed = n >= guarantee_threshold(cfg)
    if guaranteed:
        if s < cfg.h:
            raise InvariantViolation(f"n above threshold but only s={s} terms")
        if terms[-1][0] < cfg.h * win:
            raise InvariantViolation(f"n above threshold but top exponent {terms[-1][0]} < h(2t+1) = {cfg.h * win}")
    return SplitResult(
        n_exponents=n_exps,
        terms=terms,
        s=s,
        steps=state.steps,
        max_multiplicity=state.max_multiplicity,
        gap_profile=tuple(gaps),
        max_gap=max_gap,
        guaranteed=guaranteed,
        trace=tuple(state.trace) if state.trace is not None else None,
    )


def distribute(cfg: PartitionConfig, result: SplitResult) -> tuple:
    """Deal terms round-robin into h parts: sort descending with equal
    exponents adjacent, item k goes to part k mod h.  Copies of one exponent
    (at most 2^t + 1 <= h of them) land in distinct parts."""
    if result.s < cfg.h:
        raise TooFewTerms(result.s, cfg.h)
    parts: list[list[int]] = [[] for _ in range(cfg.h)]
    k = 0
    for e, c in sorted(result.terms, reverse=True):
        for _ in range(c):
            parts[k % cfg.h].append(e)
            k += 1
    out = []
    for p in parts:
        p.reverse()  # collected descending; parts want ascending
        for a, b in zip(p, p[1:]):
            if b <= a:
                raise InvariantViolation(f"duplicate exponent {b} inside one part")
        out.append(tuple(p))
    return tuple(out)


def digest_trace(trace) -> str:
    text = ";".join(f"{step.rule}:{step.exponent}" for step in trace)
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def represent_case1(cfg: PartitionConfig, n: int, keep_trace: bool = False) -> Certificate:
    """Full pipeline: shift, split, distribute, certify (all parts class 0)."""
    result = run_split(cfg, n, keep_trace)
    parts = distribute(cfg, result)
    digest = digest_trace(result.trace) if result.trace is not None else None
    return build(cfg, n, CASE1_TAG, [(0, p) for p in parts], trace_digest=digest)

"""Shared test helpers: independent reference implementations.

Everything in this module is deliberately written against the *definitions*
(walk the block sequence, enumerate tuples, replay steps one by one) rather
than reusing the package's optimized code paths, so that tests compare two
genuinely different routes to the same answer.
"""

from __future__ import annotations

from minbasis.numeral import multiset_value, to_exponent_set
from minbasis.partition import ArithmeticRule, Mode, PartitionConfig

# Reusable configurations -------------------------------------------------

CASE1_CFG = PartitionConfig(
    h=5, t=2, m_rule=ArithmeticRule(first=600, step=600), strict=True, mode=Mode.CASE1
)
CASE2_CFG = PartitionConfig(
    h=4, t=2, m_rule=ArithmeticRule(first=300, step=300), strict=True, mode=Mode.CASE2
)

# Small non-strict lab configurations (h, t, first, step chosen so that the
# class-0 window is dense and brute-force windows stay tiny).
LAB_CFGS = (
    PartitionConfig(h=4, t=2, m_rule=ArithmeticRule(first=2, step=3), strict=False),
    PartitionConfig(h=3, t=2, m_rule=ArithmeticRule(first=1, step=4), strict=False),
    PartitionConfig(h=2, t=1, m_rule=ArithmeticRule(first=2, step=2), strict=False),
)


def naive_classify(cfg: PartitionConfig, w: int) -> int:
    """Classify a position by walking the block sequence from the start."""
    if w < 0:
        raise ValueError("position must be nonnegative")
    if w <= cfg.m(1):
        return 0
    i = 1
    while True:
        lo = cfg.m(i) + 1
        hi = cfg.m(i) + cfg.t
        if lo <= w <= hi:
            return (i - 1) % (cfg.h - 1) + 1
        if w <= cfg.m(i + 1):
            return 0
        i += 1


def naive_members(cfg: PartitionConfig, limit: int) -> list[int]:
    """All basis elements in [1, limit], by definition: every binary exponent
    of the value falls in a single class of the partition."""
    out = []
    for n in range(1, limit + 1):
        classes = {naive_classify(cfg, e) for e in to_exponent_set(n)}
        if len(classes) == 1:
            out.append(n)
    return out


def naive_r_table(elems, limit: int, h: int) -> list[int]:
    """Count ordered h-tuples over ``elems`` summing to each n <= limit by
    explicit nested enumeration (recursion = h nested loops)."""
    table = [0] * (limit + 1)
    ordered = sorted(elems)

    def rec(depth: int, acc: int) -> None:
        if depth == h:
            table[acc] += 1
            return
        for a in ordered:
            if acc + a > limit:
                break
            rec(depth + 1, acc + a)

    rec(0, 0)
    if h > 0:
        table[0] = 0
    return table


def replay_trace(cfg: PartitionConfig, n: int, result) -> None:
    """Re-execute a split trace step by step, checking that every step
    conserves the represented value and only touches exponents that are
    actually present, and that the final state matches the reported terms."""
    t = cfg.t
    terms: dict[int, int] = {}
    for e in to_exponent_set(n):
        terms[e] = 1
    value = n
    for step in result.trace:
        w = step.exponent
        if step.rule == "shift":
            assert terms.get(w) == 1, f"shift source 2^{w} missing"
            del terms[w]
            terms[w - t] = terms.get(w - t, 0) + (1 << t)
            delta = -(1 << w) + (1 << t) * (1 << (w - t))
        elif step.rule == "a":
            assert terms.get(w, 0) >= 1, f"rule-a source 2^{w} missing"
            _consume(terms, w)
            terms[w - 1] = terms.get(w - 1, 0) + 2
            delta = -(1 << w) + 2 * (1 << (w - 1))
        elif step.rule == "b":
            assert terms.get(w, 0) >= 1, f"rule-b source 2^{w} missing"
            _consume(terms, w)
            add = 0
            for d in range(t + 1, 2 * t + 1):
                terms[w - d] = terms.get(w - d, 0) + ((1 << t) + 1)
                add += ((1 << t) + 1) * (1 << (w - d))
            low = w - 2 * t - 1
            terms[low] = terms.get(low, 0) + 2
            add += 2 * (1 << low)
            delta = -(1 << w) + add
        else:  # pragma: no cover - unknown rules are a test failure
            raise AssertionError(f"unknown rule {step.rule!r}")
        assert delta == 0, f"step {step} changed the value by {delta}"
        value += delta
    assert value == n
    assert terms == dict(result.terms)
    assert multiset_value(terms) == n


def _consume(terms: dict[int, int], w: int) -> None:
    if terms[w] == 1:
        del terms[w]
    else:
        terms[w] -= 1


def mitm_reachable(pair_sums, n: int) -> bool:
    """Meet-in-the-middle: n is an ordered 4-sum of elements iff it splits
    into two pair sums.  ``pair_sums`` is a boolean array indexed by value."""
    import numpy as np

    if n < 0 or n >= len(pair_sums) * 2:
        return False
    lo = max(0, n - (len(pair_sums) - 1))
    hi = min(n, len(pair_sums) - 1)
    left = pair_sums[lo : hi + 1]
    right = pair_sums[n - hi : n - lo + 1][::-1]
    return bool(np.any(left & right))


def pair_sum_table(elems, limit: int):
    """Boolean array S with S[v] = "v is a sum of two elements", v <= limit."""
    import numpy as np

    arr = np.asarray(sorted(elems), dtype=np.int64)
    sums = np.add.outer(arr, arr).ravel()
    sums = sums[sums <= limit]
    table = np.zeros(limit + 1, dtype=bool)
    table[sums] = True
    return table

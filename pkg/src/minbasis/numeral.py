"""Sparse binary numerals.

A positive integer n is handled throughout as its set of binary exponents
F_n (n = sum of 2^f over f in F_n, all f distinct).  Intermediate states of
the splitter are exponent multisets: unordered collections of exponents with
multiplicities, representing sum(mult * 2^e).  Inputs in the thousands of
bits must stay cheap, so conversions between int and exponent set go through
numpy byte views rather than per-bit big-integer arithmetic.

Exponent sets are plain tuples of strictly increasing non-negative ints.
Multisets are plain dicts exponent -> multiplicity >= 1.  Functions never
mutate their arguments.

``canonicalize`` reduces a multiset to the exponent set of its value using
only small-integer carry propagation.  It deliberately avoids big-int
arithmetic so that comparing it against ``multiset_value`` (one Python bigint
sum) exercises two independent routes to the same answer.
"""

from __future__ import annotations

import heapq
import sys
from typing import Iterable, Mapping

import numpy as np

from .errors import DecimalSizeError

Exponents = tuple  # strictly increasing tuple[int, ...]

# Values above this bit length are never rendered in decimal.
MAX_DECIMAL_BITS = 1 << 20

# Direct bit loop below this size; numpy byte path above.
_NUMPY_CUTOFF_BITS = 64


def _ensure_decimal_limit() -> None:
    # 2^20 bits is ~315653 decimal digits; CPython defaults to 4300.
    need = 400_000
    if sys.get_int_max_str_digits() < need:
        sys.set_int_max_str_digits(need)


def validate_exponents(exps: Iterable[int]) -> tuple:
    """Check strictly increasing non-negative ints; return as tuple.

    Raises ValueError naming the offending position.
    """
    out = tuple(exps)
    prev = -1
    for i, e in enumerate(out):
        if not isinstance(e, int) or isinstance(e, bool):
            raise ValueError(f"exponent at index {i} is not an int: {e!r}")
        if e < 0:
            raise ValueError(f"exponent at index {i} is negative: {e}")
        if e <= prev:
            raise ValueError(f"exponents not strictly increasing at index {i}: {prev} then {e}")
        prev = e
    return out


def to_exponent_set(n: int) -> tuple:
    """Binary exponents of n >= 0, strictly increasing. F_0 is empty."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return ()
    if n.bit_length() <= _NUMPY_CUTOFF_BITS:
        out = []
        e = 0
        while n:
            if n & 1:
                out.append(e)
            n >>= 1
            e += 1
        return tuple(out)
    raw = n.to_bytes((n.bit_length() + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return tuple(np.flatnonzero(bits).tolist())


def from_exponent_set(exps: Iterable[int]) -> int:
    """Value of an exponent set: sum of 2^e. Empty set gives 0."""
    exps = tuple(exps)
    if not exps:
        return 0
    top = max(exps)
    if top <= _NUMPY_CUTOFF_BITS and len(exps) <= 16:
        return sum(1 << e for e in exps)
    arr = np.zeros(((top + 8) // 8) * 8, dtype=np.uint8)
    arr[list(exps)] = 1
    packed = np.packbits(arr, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def multiset_value(mset: Mapping[int, int]) -> int:
    """Value of an exponent multiset via direct bigint summation."""
    total = 0
    for e, c in mset.items():
        if e < 0 or c < 1:
            raise ValueError(f"bad multiset entry {e}: {c}")
        total += c << e
    return total


def canonicalize(mset: Mapping[int, int]) -> tuple:
    """Exponent set of a multiset's value, by carry propagation only.

    Processes exponents in increasing order: an odd count emits the bit,
    half the count carries to the next exponent.  Never touches a bigint,
    so it is an independent route from multiset_value.
    """
    counts: dict[int, int] = {}
    heap: list[int] = []
    for e, c in mset.items():
        if e < 0 or c < 1:
            raise ValueError(f"bad multiset entry {e}: {c}")
        if e in counts:
            counts[e] += c
        else:
            counts[e] = c
            heapq.heappush(heap, e)
    out = []
    while heap:
        e = heapq.heappop(heap)
        c = counts.pop(e)
        if c & 1:
            out.append(e)
        carry = c >> 1
        if carry:
            if e + 1 in counts:
                counts[e + 1] += carry
            else:
                counts[e + 1] = carry
                heapq.heappush(heap, e + 1)
    return tuple(out)


def merge_multisets(*msets: Mapping[int, int]) -> dict:
    """Union with added multiplicities."""
    out: dict[int, int] = {}
    for m in msets:
        for e, c in m.items():
            out[e] = out.get(e, 0) + c
    return out


def exponents_as_multiset(exps: Iterable[int]) -> dict:
    return {e: 1 for e in exps}


def compare_exponent_sets(a: tuple, b: tuple) -> int:
    """Order by value without converting: highest differing exponent wins.

    Returns -1, 0, or 1.  For strictly increasing tuples this is exactly
    reverse-lexicographic order.
    """
    ra, rb = a[::-1], b[::-1]
    if ra == rb:
        return 0
    return -1 if ra < rb else 1


def format_exponents(exps: Iterable[int]) -> str:
    return "exp:[" + ",".join(str(e) for e in exps) + "]"


def parse_value_text(text: str) -> int:
    """Parse a value given as a decimal string or as exp:[e1,e2,...].

    Decimal inputs are capped at MAX_DECIMAL_BITS bits; larger values must
    use the exponent form.
    """
    text = text.strip()
    if text.startswith("exp:"):
        body = text[4:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed exponent list: {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return 0
        exps = validate_exponents(int(p) for p in inner.split(","))
        return from_exponent_set(exps)
    if not text or not text.lstrip("+").isdigit():
        raise ValueError(f"not a decimal value or exp:[...] form: {text!r}")
    # ~3.33 bits per digit; reject before CPython's own conversion limit bites
    if len(text) > 320_000:
        raise DecimalSizeError(
            f"decimal input of {len(text)} digits exceeds the {MAX_DECIMAL_BITS}-bit cap; use exp:[...]"
        )
    _ensure_decimal_limit()
    n = int(text)
    if n.bit_length() > MAX_DECIMAL_BITS:
        raise DecimalSizeError(
            f"decimal input of {n.bit_length()} bits exceeds the {MAX_DECIMAL_BITS}-bit cap; use exp:[...]"
        )
    return n


def decimal_if_small(n: int) -> str | None:
    """Decimal rendering for values at or under the cap, else None."""
    if n.bit_length() > MAX_DECIMAL_BITS:
        return None
    _ensure_decimal_limit()
    return str(n)

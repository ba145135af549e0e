"""Case 2 (h = 2^t): representing large n without the basis element 4.

Every n > m_2 gets an h-part representation from A \\ {4}, which shows that
only finitely many integers need 4 at all.  The subcase router looks at
F_n (binary exponents of n), how it meets W_0, and l = |F_n \\ W_0|:

  s22            F_n intersect W_0 is exactly {2}: shift everything else
                 down by t; a_0 = 4 + d, the rest h-1 copies of d, using
                 4 + (2^t) d = 4 + (n - 4).
  uniform_shift  F_n intersect W_0 empty: h copies of the shifted value
                 (h = 2^t makes the sum come out to n exactly).
  s211           l >= h-1: the outside exponents split into h-1 class-pure
                 parts (peel singletons off the biggest class group), a_0
                 keeps the inside exponents.
  s212           1 <= l <= h-2: keep inside as a_0 and the smaller outside
                 exponents as singletons; the largest outside exponent f_0
                 telescopes into 2^(f_0-1), ..., 2^(f_0-D), 2^(f_0-D).
  s213_*         F_n inside W_0 entirely: split the top exponent g_0 into a
                 telescoping chain; variants depend on whether n is a power
                 of two (k1), the remainder is 4 (chain_merge: fold the 4
                 into a chain term that sits in W_0), or anything else
                 (rest_ok: the remainder is itself a valid class-0 part).

paper_faithful=True reproduces the source construction's branch selection,
which for second-largest exponent g_1 = 2 builds a_0 = 2^(g_0-h+1) + (n - 2^(g_0)).
That a_0 mixes classes whenever g_0 - h + 1 lands outside W_0, in which case
PaperFormulaDivergence reports the impurity instead of emitting a bad
certificate; the default router never produces such a part.
"""

from __future__ import annotations

from .certificate import Certificate, build
from .errors import BelowGuarantee, NoMergeSlot, PaperFormulaDivergence
from .numeral import to_exponent_set
from .partition import Mode, PartitionConfig, require_usable

TAG_S211 = "s211"
TAG_S212 = "s212"
TAG_S213_K1 = "s213_k1"
TAG_S213_REST_OK = "s213_rest_ok"
TAG_S213_CHAIN_MERGE = "s213_chain_merge"
TAG_S22 = "s22"
TAG_UNIFORM_SHIFT = "uniform_shift"

ALL_TAGS = (TAG_S211, TAG_S212, TAG_S213_K1, TAG_S213_REST_OK, TAG_S213_CHAIN_MERGE, TAG_S22, TAG_UNIFORM_SHIFT)


def _inside_outside(cfg: PartitionConfig, exps: tuple) -> tuple:
    inside = tuple(f for f in exps if cfg.classify(f) == 0)
    outside = tuple(f for f in exps if cfg.classify(f) != 0)
    return inside, outside


def route(cfg: PartitionConfig, n: int) -> str:
    """Subcase tag for n, or BelowGuarantee when n <= m_2."""
    require_usable(cfg, Mode.CASE2, strict=True)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m2 = cfg.m(2)
    if n <= m2:
        raise BelowGuarantee(n.bit_length(), m2)
    exps = to_exponent_set(n)
    inside, outside = _inside_outside(cfg, exps)
    if inside == (2,):
        return TAG_S22
    if not inside:
        return TAG_UNIFORM_SHIFT
    l = len(outside)
    if l >= cfg.h - 1:
        return TAG_S211
    if l >= 1:
        return TAG_S212
    if len(exps) == 1:
        return TAG_S213_K1
    if exps[:-1] == (2,):
        return TAG_S213_CHAIN_MERGE
    return TAG_S213_REST_OK


def _expect_route(cfg: PartitionConfig, n: int, tags: tuple) -> str:
    tag = route(cfg, n)
    if tag not in tags:
        raise ValueError(f"n routes to {tag}, not one of {tags}")
    return tag


def build_uniform_shift(cfg: PartitionConfig, n: int) -> Certificate:
    _expect_route(cfg, n, (TAG_UNIFORM_SHIFT,))
    exps = to_exponent_set(n)
    shifted = tuple(f - cfg.t for f in exps)
    return build(cfg, n, TAG_UNIFORM_SHIFT, [(0, shifted)] * cfg.h)


def build_s22(cfg: PartitionConfig, n: int) -> Certificate:
    _expect_route(cfg, n, (TAG_S22,))
    exps = to_exponent_set(n)
    shifted = tuple(f - cfg.t for f in exps if f != 2)
    a0 = (2,) + shifted
    return build(cfg, n, TAG_S22, [(0, a0)] + [(0, shifted)] * (cfg.h - 1))


def build_s211(cfg: PartitionConfig, n: int) -> Certificate:
    _expect_route(cfg, n, (TAG_S211,))
    exps = to_exponent_set(n)
    inside, outside = _inside_outside(cfg, exps)
    by_class: dict[int, list[int]] = {}
    for f in outside:
        by_class.setdefault(cfg.classify(f), []).append(f)
    buckets = [(j, fs) for j, fs in sorted(by_class.items())]
    # peel the biggest bucket (tie: larger top exponent) until h-1 parts;
    # possible because |outside| >= h-1
    while len(buckets) < cfg.h - 1:
        pick = max(range(len(buckets)), key=lambda i: (len(buckets[i][1]), buckets[i][1][-1]))
        j, fs = buckets[pick]
        peeled = fs.pop()
        buckets.append((j, [peeled]))
    parts = [(0, inside)] + [(j, tuple(fs)) for j, fs in buckets]
    parts[1:] = sorted(parts[1:], key=lambda p: -p[1][-1])
    return build(cfg, n, TAG_S211, parts)


def build_s212(cfg: PartitionConfig, n: int) -> Certificate:
    _expect_route(cfg, n, (TAG_S212,))
    exps = to_exponent_set(n)
    inside, outside = _inside_outside(cfg, exps)
    f0 = outside[-1]
    keep = outside[:-1][::-1]  # descending singletons
    depth = cfg.h - 1 - len(outside)  # >= 1
    chain = [f0 - d for d in range(1, depth + 1)]
    chain.append(f0 - depth)  # 2^(f0-1) + ... + 2^(f0-D) + 2^(f0-D) = 2^f0
    parts = [(0, inside)]
    parts += [(cfg.classify(f), (f,)) for f in keep]
    parts += [(cfg.classify(u), (u,)) for u in chain]
    return build(cfg, n, TAG_S212, parts)


def build_s213(cfg: PartitionConfig, n: int, paper_faithful: bool = False) -> Certificate:
    tag = _expect_route(cfg, n, (TAG_S213_K1, TAG_S213_REST_OK, TAG_S213_CHAIN_MERGE))
    exps = to_exponent_set(n)
    g0 = exps[-1]
    if tag == TAG_S213_K1:
        chain = [g0 - 1 - i for i in range(cfg.h - 1)]
        chain.append(chain[-1])
        return build(cfg, n, tag, [(cfg.classify(u), (u,)) for u in chain])

    rest = exps[:-1]
    if paper_faithful:
        g1 = rest[-1]
        if g1 == 2:
            u = g0 - cfg.h + 1
            j = cfg.classify(u)
            if j != 0:
                raise PaperFormulaDivergence(
                    f"source formula puts exponent {u} (class W_{j}) into the class-0 part a_0",
                    branch="s213_g1_eq_2",
                    detail={
                        "n_exponents": list(exps),
                        "a0_exponents": sorted((*rest, u)),
                        "impure_exponent": u,
                        "actual_class": j,
                    },
                )
            a0 = (*rest, u)
            parts = [(0, a0)] + [(cfg.classify(g0 - i), (g0 - i,)) for i in range(1, cfg.h)]
            return build(cfg, n, tag, parts)
        tag = TAG_S213_REST_OK

    if tag == TAG_S213_CHAIN_MERGE:
        chain = [g0 - i for i in range(1, cfg.h)]
        chain.append(g0 - cfg.h + 1)
        merge_at = next((i for i, u in enumerate(chain) if cfg.classify(u) == 0), None)
        if merge_at is None:
            raise NoMergeSlot(f"no chain exponent in [{g0 - cfg.h + 1}, {g0 - 1}] lies in W_0")
        parts = []
        for i, u in enumerate(chain):
            if i == merge_at:
                parts.append((0, (2, u)))
            else:
                parts.append((cfg.classify(u), (u,)))
        return build(cfg, n, tag, parts)

    # rest_ok: the remainder is a class-0 part on its own
    chain = [g0 - i for i in range(1, cfg.h - 1)]
    chain.append(g0 - cfg.h + 2)
    parts = [(0, rest)] + [(cfg.classify(u), (u,)) for u in chain]
    return build(cfg, n, TAG_S213_REST_OK, parts)


def represent_avoiding_4(cfg: PartitionConfig, n: int, paper_faithful: bool = False) -> Certificate:
    """Route and build; the h parts avoid the element 4 entirely."""
    tag = route(cfg, n)
    if tag == TAG_UNIFORM_SHIFT:
        if paper_faithful:
            raise PaperFormulaDivergence(
                "F_n does not meet W_0; the source construction has no branch for this input",
                branch="uncovered_case",
                detail={"n_exponents": list(to_exponent_set(n))},
            )
        return build_uniform_shift(cfg, n)
    if tag == TAG_S22:
        return build_s22(cfg, n)
    if tag == TAG_S211:
        return build_s211(cfg, n)
    if tag == TAG_S212:
        return build_s212(cfg, n)
    return build_s213(cfg, n, paper_faithful=paper_faithful)

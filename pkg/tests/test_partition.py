import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from minbasis.errors import ConfigError, InvariantViolation, NotOutsideW0
from minbasis.partition import (
    ArithmeticRule,
    ExplicitRule,
    Mode,
    PartitionConfig,
    config_from_dict,
    config_to_dict,
    load_config,
    require_usable,
    validate_config,
)


def codes(violations):
    return {v.constraint for v in violations}


def test_case1_config_classify_frozen(case1_cfg):
    # blocks [600i+1, 600i+2], class ((i-1) mod 4) + 1
    assert case1_cfg.classify(0) == 0
    assert case1_cfg.classify(600) == 0
    assert case1_cfg.classify(601) == 1
    assert case1_cfg.classify(602) == 1
    assert case1_cfg.classify(603) == 0
    assert case1_cfg.classify(1201) == 2
    assert case1_cfg.classify(1801) == 3
    assert case1_cfg.classify(2401) == 4
    assert case1_cfg.classify(3001) == 1


def test_case2_config_classify_frozen(case2_cfg):
    # blocks [300i+1, 300i+2], class ((i-1) mod 3) + 1
    assert case2_cfg.classify(300) == 0
    assert case2_cfg.classify(301) == 1
    assert case2_cfg.classify(601) == 2
    assert case2_cfg.classify(901) == 3
    assert case2_cfg.classify(1201) == 1
    assert case2_cfg.classify(303) == 0


def test_block_class_cycles(case2_cfg):
    assert [case2_cfg.block_class(i) for i in range(1, 8)] == [1, 2, 3, 1, 2, 3, 1]


@given(st.integers(min_value=0, max_value=100_000))
@settings(max_examples=300, deadline=None)
def test_closed_form_matches_block_walk_case1(w):
    assert helpers.CASE1_CFG.classify(w) == helpers.naive_classify(helpers.CASE1_CFG, w)


@given(st.integers(min_value=0, max_value=20_000))
@settings(max_examples=150, deadline=None)
def test_closed_form_matches_block_walk_lab(w):
    for cfg in helpers.LAB_CFGS:
        assert cfg.classify(w) == helpers.naive_classify(cfg, w)


def test_explicit_rule_matches_equivalent_arithmetic():
    explicit = PartitionConfig(
        h=4,
        t=2,
        m_rule=ExplicitRule(values=(300, 600, 900), tail_step=300),
        strict=True,
        mode=Mode.CASE2,
    )
    assert validate_config(explicit) == []
    for w in range(0, 5000, 7):
        assert explicit.classify(w) == helpers.CASE2_CFG.classify(w)
    for i in range(1, 12):
        assert explicit.m(i) == 300 * i


def test_class_intervals_tile_the_prefix(case2_cfg):
    upto = 2000
    intervals = case2_cfg.class_intervals(upto)
    seen = {}
    for cls, spans in enumerate(intervals):
        for lo, hi in spans:
            assert lo <= hi
            for w in range(lo, hi + 1):
                assert w not in seen
                seen[w] = cls
    assert sorted(seen) == list(range(upto + 1))
    for w in range(upto + 1):
        assert seen[w] == case2_cfg.classify(w)


def test_w0_intervals_frozen(case1_cfg, case2_cfg):
    assert case1_cfg.w0_intervals(650) == [(0, 600), (603, 650)]
    assert case2_cfg.w0_intervals(910) == [
        (0, 300),
        (303, 600),
        (603, 900),
        (903, 910),
    ]


def test_shift_into_w0_frozen(case2_cfg):
    assert case2_cfg.shift_into_w0(301) == 299
    assert case2_cfg.shift_into_w0(602) == 600
    with pytest.raises(NotOutsideW0):
        case2_cfg.shift_into_w0(300)
    with pytest.raises(NotOutsideW0):
        case2_cfg.shift_into_w0(0)


@given(st.integers(min_value=0, max_value=50_000))
@settings(max_examples=300, deadline=None)
def test_shift_lemma_on_strict_config(w):
    # On a strict partition, any position outside class 0 lands in class 0
    # when moved down by t, and sits above the first block start.
    cfg = helpers.CASE2_CFG
    if cfg.classify(w) != 0:
        assert w > cfg.m(1)
        assert cfg.classify(w - cfg.t) == 0


def test_shift_into_w0_strict_postcondition_violation():
    # Mis-declared strict config whose blocks are nearly adjacent: shifting
    # down by t lands inside the previous block, and the helper detects that
    # the lemma's conclusion fails rather than returning a bad position.
    cfg = PartitionConfig(h=3, t=2, m_rule=ArithmeticRule(first=4, step=2), strict=True)
    assert validate_config(cfg) != []
    assert cfg.classify(8) == 2  # block 2 = [7, 8]
    assert cfg.classify(6) == 1  # block 1 = [5, 6]
    with pytest.raises(InvariantViolation):
        cfg.shift_into_w0(8)


def test_validate_config_violation_codes():
    assert codes(validate_config(PartitionConfig(h=1, t=2, m_rule=ArithmeticRule(10, 10)))) == {
        "h_range"
    }
    assert codes(validate_config(PartitionConfig(h=3, t=0, m_rule=ArithmeticRule(10, 10)))) == {
        "t_range"
    }
    assert "gap_at_least_t" in codes(
        validate_config(PartitionConfig(h=4, t=3, m_rule=ArithmeticRule(10, 2)))
    )
    assert "m_start" in codes(
        validate_config(PartitionConfig(h=4, t=2, m_rule=ArithmeticRule(-1, 5)))
    )
    assert "m_increasing" in codes(
        validate_config(
            PartitionConfig(h=4, t=2, m_rule=ExplicitRule(values=(10, 9), tail_step=5))
        )
    )


def test_validate_config_strict_codes():
    strict_small_m1 = PartitionConfig(
        h=5, t=2, m_rule=ArithmeticRule(100, 600), strict=True, mode=Mode.CASE1
    )
    assert "strict_m1" in codes(validate_config(strict_small_m1))
    strict_small_gap = PartitionConfig(
        h=5, t=2, m_rule=ArithmeticRule(600, 100), strict=True, mode=Mode.CASE1
    )
    assert "strict_gap" in codes(validate_config(strict_small_gap))
    strict_t1 = PartitionConfig(
        h=2, t=1, m_rule=ArithmeticRule(10**6, 10**6), strict=True
    )
    assert codes(validate_config(strict_t1)) == {"strict_t"}


def test_validate_config_mode_codes():
    # CASE1 needs h > 2^t; CASE2 needs h == 2^t.
    bad1 = PartitionConfig(h=4, t=2, m_rule=ArithmeticRule(300, 300), strict=True, mode=Mode.CASE1)
    assert "mode_case1_h" in codes(validate_config(bad1))
    bad2 = PartitionConfig(h=5, t=2, m_rule=ArithmeticRule(600, 600), strict=True, mode=Mode.CASE2)
    assert "mode_case2_h" in codes(validate_config(bad2))
    assert validate_config(helpers.CASE1_CFG) == []
    assert validate_config(helpers.CASE2_CFG) == []


def test_require_usable_raises_config_error(case1_cfg, case2_cfg):
    require_usable(case1_cfg, mode=Mode.CASE1, strict=True)
    with pytest.raises(ConfigError) as exc_info:
        require_usable(case1_cfg, mode=Mode.CASE2)
    assert any(v.constraint == "mode_mismatch" for v in exc_info.value.violations)

    lab = PartitionConfig(h=5, t=2, m_rule=ArithmeticRule(600, 600), mode=Mode.CASE1, strict=False)
    with pytest.raises(ConfigError) as exc_info:
        require_usable(lab, strict=True)
    assert any(v.constraint == "strict_violation" for v in exc_info.value.violations)

    broken = PartitionConfig(h=1, t=0, m_rule=ArithmeticRule(10, 10))
    with pytest.raises(ConfigError):
        require_usable(broken)


def test_config_dict_round_trip(case1_cfg, case2_cfg):
    for cfg in (case1_cfg, case2_cfg, *helpers.LAB_CFGS):
        data = config_to_dict(cfg)
        assert config_from_dict(data) == cfg
        assert config_from_dict(json.loads(json.dumps(data))) == cfg


def test_config_dict_explicit_rule_round_trip():
    cfg = PartitionConfig(
        h=3, t=2, m_rule=ExplicitRule(values=(10, 20, 35), tail_step=9)
    )
    assert config_from_dict(config_to_dict(cfg)) == cfg


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"h": 4, "t": 2},
        {"h": 4, "t": 2, "m_rule": {"kind": "mystery"}},
        {"h": 4, "t": 2, "m_rule": {"kind": "arithmetic", "first": 300}},
        {"h": 4, "t": 2, "m_rule": {"kind": "arithmetic", "first": 300, "step": 300}, "mode": "x"},
        {"h": "x", "t": 2, "m_rule": {"kind": "arithmetic", "first": 300, "step": 300}},
    ],
)
def test_config_from_dict_rejects_bad_input(data):
    with pytest.raises(ValueError):
        config_from_dict(data)


def test_load_config_from_file(tmp_path, case2_cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config_to_dict(case2_cfg)))
    assert load_config(path) == case2_cfg
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValueError):
        load_config(bad)


def test_m_rule_values():
    rule = ArithmeticRule(first=600, step=600)
    assert [rule.m(i) for i in range(1, 5)] == [600, 1200, 1800, 2400]
    assert rule.min_gap() == 600
    explicit = ExplicitRule(values=(10, 25, 45), tail_step=7)
    assert [explicit.m(i) for i in range(1, 6)] == [10, 25, 45, 52, 59]
    assert explicit.min_gap() == 7
    with pytest.raises(ValueError):
        rule.m(0)
    # a non-increasing rule is caught by validation, not by the rule object
    flat = PartitionConfig(h=3, t=2, m_rule=ArithmeticRule(first=600, step=0), strict=False)
    assert "m_increasing" in codes(validate_config(flat))

"""Representation certificates and their independent verifier.

A certificate claims n = a_0 + ... + a_{h-1} where each a_i is a basis
element of a declared class.  The verifier recomputes everything from the
embedded config using only exponent arithmetic: class membership per
exponent, and the sum via multiset merge plus carry canonicalization.  It
shares no code with the builders, so a builder bug cannot vouch for itself.

Serialized form (schema_version 1):

    {
      "schema_version": 1,
      "config": {...},
      "n": {"exp": [1, 5, 9], "dec": "546"},
      "case": "s212",
      "parts": [{"class": 0, "exp": [0, 2]}, ...],
      "trace_digest": "..."            # optional
    }

"n.dec" is included only for values at or under the decimal bit cap; "exp"
is always present and authoritative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CertificateFormatError, UnsupportedVersion
from .numeral import (
    canonicalize,
    decimal_if_small,
    exponents_as_multiset,
    from_exponent_set,
    merge_multisets,
    parse_value_text,
    to_exponent_set,
)
from .partition import Mode, PartitionConfig, config_from_dict, config_to_dict, validate_config

SCHEMA_VERSION = 1

CASE1_TAG = "case1"
AVOID4_TAGS = ("s211", "s212", "s213_k1", "s213_rest_ok", "s213_chain_merge", "s22", "uniform_shift")
CASE_TAGS = (CASE1_TAG,) + AVOID4_TAGS


@dataclass(frozen=True)
class Part:
    class_index: int
    exponents: tuple

    def value(self) -> int:
        return from_exponent_set(self.exponents)


@dataclass(frozen=True)
class Certificate:
    config: PartitionConfig
    n_exponents: tuple
    case: str
    parts: tuple
    schema_version: int = SCHEMA_VERSION
    trace_digest: str | None = None

    def n_value(self) -> int:
        return from_exponent_set(self.n_exponents)


@dataclass(frozen=True)
class CheckFailure:
    part: int | None  # index into parts, or None for whole-certificate checks
    constraint: str
    message: str


def build(cfg: PartitionConfig, n: int, case: str, parts, trace_digest: str | None = None) -> Certificate:
    """Assemble a certificate from (class_index, exponents) pairs."""
    return Certificate(
        config=cfg,
        n_exponents=to_exponent_set(n),
        case=case,
        parts=tuple(Part(class_index=c, exponents=tuple(e)) for c, e in parts),
        trace_digest=trace_digest,
    )


def verify(cert: Certificate) -> list:
    """All failed checks; an empty list means the certificate is valid."""
    fails: list[CheckFailure] = []
    if cert.schema_version != SCHEMA_VERSION:
        fails.append(CheckFailure(None, "schema_version", f"unsupported schema_version {cert.schema_version}"))
        return fails

    cfg = cert.config
    cfg_violations = validate_config(cfg)
    if cfg_violations:
        for v in cfg_violations:
            fails.append(CheckFailure(None, f"config.{v.constraint}", v.message))
        return fails

    if cert.case not in CASE_TAGS:
        fails.append(CheckFailure(None, "case_tag", f"unknown case tag {cert.case!r}"))
        return fails
    wanted_mode = Mode.CASE1 if cert.case == CASE1_TAG else Mode.CASE2
    if cfg.mode is not wanted_mode:
        fails.append(CheckFailure(None, "config.mode", f"case {cert.case} requires mode {wanted_mode.value}, config has {cfg.mode.value}"))
    if not cfg.strict:
        fails.append(CheckFailure(None, "config.strict", "certificates are only meaningful for strict configs"))

    if len(cert.parts) != cfg.h:
        fails.append(CheckFailure(None, "part_count", f"expected h={cfg.h} parts, got {len(cert.parts)}"))

    ok_parts = True
    for idx, part in enumerate(cert.parts):
        exps = part.exponents
        if not exps:
            fails.append(CheckFailure(idx, "part_nonempty", "part has no exponents (0 is not a basis element)"))
            ok_parts = False
            continue
        prev = -1
        shape_ok = True
        for e in exps:
            if not isinstance(e, int) or e < 0 or e <= prev:
                fails.append(CheckFailure(idx, "part_exponents", f"exponents must be strictly increasing and >= 0, got {list(exps)}"))
                shape_ok = False
                ok_parts = False
                break
            prev = e
        if not shape_ok:
            continue
        if not 0 <= part.class_index < cfg.h:
            fails.append(CheckFailure(idx, "class_range", f"class {part.class_index} out of range [0, {cfg.h})"))
            ok_parts = False
            continue
        for e in exps:
            actual = cfg.classify(e)
            if actual != part.class_index:
                fails.append(
                    CheckFailure(idx, "class_purity", f"exponent {e} lies in W_{actual}, part declares class {part.class_index}")
                )
                ok_parts = False
        if cert.case == CASE1_TAG and part.class_index != 0:
            fails.append(CheckFailure(idx, "case1_class0", f"case1 parts must all be class 0, got {part.class_index}"))
        if cert.case in AVOID4_TAGS and exps == (2,):
            fails.append(CheckFailure(idx, "avoids_four", "part equals 4, which avoid-4 representations must not use"))

    prev = -1
    for e in cert.n_exponents:
        if not isinstance(e, int) or e < 0 or e <= prev:
            fails.append(CheckFailure(None, "n_wellformed", f"n exponents must be strictly increasing and >= 0: {list(cert.n_exponents)}"))
            return fails
        prev = e
    if not cert.n_exponents:
        fails.append(CheckFailure(None, "n_wellformed", "n must be positive"))
        return fails

    if ok_parts and cert.parts:
        merged = merge_multisets(*(exponents_as_multiset(p.exponents) for p in cert.parts))
        total = canonicalize(merged)
        if total != cert.n_exponents:
            fails.append(
                CheckFailure(None, "sum_mismatch", f"parts sum to exp:{list(total)}, certificate claims exp:{list(cert.n_exponents)}")
            )
    return fails


def is_valid(cert: Certificate) -> bool:
    return not verify(cert)


def to_dict(cert: Certificate) -> dict:
    n_val = cert.n_value()
    n_obj: dict = {"exp": list(cert.n_exponents)}
    dec = decimal_if_small(n_val)
    if dec is not None:
        n_obj["dec"] = dec
    doc = {
        "schema_version": cert.schema_version,
        "config": config_to_dict(cert.config),
        "n": n_obj,
        "case": cert.case,
        "parts": [{"class": p.class_index, "exp": list(p.exponents)} for p in cert.parts],
    }
    if cert.trace_digest is not None:
        doc["trace_digest"] = cert.trace_digest
    return doc


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CertificateFormatError(message)


def _parse_exp_list(obj, where: str) -> tuple:
    _require(isinstance(obj, list), f"{where} must be a list of ints")
    for e in obj:
        _require(isinstance(e, int) and not isinstance(e, bool), f"{where} contains a non-int: {e!r}")
    return tuple(obj)


def from_dict(doc: dict) -> Certificate:
    _require(isinstance(doc, dict), "certificate must be a JSON object")
    if "schema_version" not in doc and isinstance(doc.get("certificate"), dict):
        doc = doc["certificate"]  # tolerate scan-record envelopes
    _require("schema_version" in doc, "missing field schema_version")
    version = doc["schema_version"]
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema_version {version!r} is not supported (expected {SCHEMA_VERSION})")
    for field in ("config", "n", "case", "parts"):
        _require(field in doc, f"missing field {field}")
    try:
        cfg = config_from_dict(doc["config"])
    except ValueError as exc:
        raise CertificateFormatError(f"bad config: {exc}") from None

    n_obj = doc["n"]
    _require(isinstance(n_obj, dict), "n must be an object with 'exp' and/or 'dec'")
    _require("exp" in n_obj or "dec" in n_obj, "n needs 'exp' or 'dec'")
    n_exps: tuple | None = None
    if "exp" in n_obj:
        n_exps = _parse_exp_list(n_obj["exp"], "n.exp")
    if "dec" in n_obj:
        _require(isinstance(n_obj["dec"], str), "n.dec must be a decimal string")
        try:
            dec_val = parse_value_text(n_obj["dec"])
        except ValueError as exc:
            raise CertificateFormatError(f"bad n.dec: {exc}") from None
        if n_exps is None:
            n_exps = to_exponent_set(dec_val)
        elif from_exponent_set(n_exps) != dec_val:
            raise CertificateFormatError("n.exp and n.dec disagree")

    _require(isinstance(doc["case"], str), "case must be a string")
    parts_obj = doc["parts"]
    _require(isinstance(parts_obj, list), "parts must be a list")
    parts = []
    for i, p in enumerate(parts_obj):
        _require(isinstance(p, dict), f"parts[{i}] must be an object")
        _require("class" in p and "exp" in p, f"parts[{i}] needs 'class' and 'exp'")
        _require(isinstance(p["class"], int) and not isinstance(p["class"], bool), f"parts[{i}].class must be an int")
        parts.append(Part(class_index=p["class"], exponents=_parse_exp_list(p["exp"], f"parts[{i}].exp")))

    digest = doc.get("trace_digest")
    if digest is not None:
        _require(isinstance(digest, str), "trace_digest must be a string")
    return Certificate(
        config=cfg,
        n_exponents=n_exps,
        case=doc["case"],
        parts=tuple(parts),
        schema_version=version,
        trace_digest=digest,
    )


def dumps(cert: Certificate, indent: int | None = 2) -> str:
    return json.dumps(to_dict(cert), indent=indent)


def loads(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not valid JSON: {exc}") from None
    return from_dict(doc)

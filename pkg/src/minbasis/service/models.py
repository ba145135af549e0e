"""Pydantic schemas shared by the HTTP service and the CLI.

CertificateModel mirrors the on-disk certificate format exactly (the same
dict round-trips through certificate.from_dict / to_dict), so a service
payload and a certificate file are interchangeable.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import certificate
from ..numeral import decimal_if_small, from_exponent_set, parse_value_text, validate_exponents
from ..partition import PartitionConfig, config_from_dict, config_to_dict


class MRuleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["arithmetic", "explicit"]
    first: int | None = None
    step: int | None = None
    values: list[int] | None = None
    tail_step: int | None = None

    @model_validator(mode="after")
    def _check_fields(self):
        if self.kind == "arithmetic":
            if self.first is None or self.step is None:
                raise ValueError("arithmetic m_rule needs 'first' and 'step'")
            if self.values is not None or self.tail_step is not None:
                raise ValueError("arithmetic m_rule takes no 'values'/'tail_step'")
        else:
            if self.values is None or self.tail_step is None:
                raise ValueError("explicit m_rule needs 'values' and 'tail_step'")
            if self.first is not None or self.step is not None:
                raise ValueError("explicit m_rule takes no 'first'/'step'")
        return self


class ConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    h: int
    t: int
    m_rule: MRuleModel
    strict: bool = True
    mode: Literal["case1", "case2", "generic_lab"] = "generic_lab"

    def to_core(self) -> PartitionConfig:
        return config_from_dict(self.model_dump(exclude_none=True))

    @classmethod
    def from_core(cls, cfg: PartitionConfig) -> "ConfigModel":
        return cls.model_validate(config_to_dict(cfg))


class ValueModel(BaseModel):
    """A non-negative integer as decimal text and/or exponent list."""

    model_config = ConfigDict(extra="forbid")

    dec: str | None = None
    exp: list[int] | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.dec is None and self.exp is None:
            raise ValueError("value needs 'dec' or 'exp'")
        if self.exp is not None:
            validate_exponents(self.exp)
        if self.dec is not None:
            if not self.dec.isdigit():
                raise ValueError(f"'dec' must be a decimal string, got {self.dec!r}")
            if self.exp is not None and parse_value_text(self.dec) != from_exponent_set(self.exp):
                raise ValueError("'dec' and 'exp' disagree")
        return self

    def to_int(self) -> int:
        if self.exp is not None:
            return from_exponent_set(self.exp)
        return parse_value_text(self.dec)

    @classmethod
    def from_int(cls, n: int) -> "ValueModel":
        from ..numeral import to_exponent_set

        return cls(exp=list(to_exponent_set(n)), dec=decimal_if_small(n))


class PartModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    class_index: int = Field(alias="class")
    exp: list[int]


class CertificateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: int
    config: ConfigModel
    n: ValueModel
    case: str
    parts: list[PartModel]
    trace_digest: str | None = None

    def to_core(self) -> certificate.Certificate:
        return certificate.from_dict(self.model_dump(by_alias=True, exclude_none=True))

    @classmethod
    def from_core(cls, cert: certificate.Certificate) -> "CertificateModel":
        return cls.model_validate(certificate.to_dict(cert))


class ViolationModel(BaseModel):
    constraint: str
    message: str


class CheckFailureModel(BaseModel):
    part: int | None
    constraint: str
    message: str


class ConfigCheckRequest(BaseModel):
    config: ConfigModel


class ConfigCheckResponse(BaseModel):
    valid: bool
    violations: list[ViolationModel]
    normalized: ConfigModel
    derived: dict


class ClassifyRequest(BaseModel):
    config: ConfigModel
    position: int | None = None
    element: ValueModel | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.position is None) == (self.element is None):
            raise ValueError("give exactly one of 'position' or 'element'")
        return self


class ClassifyResponse(BaseModel):
    kind: Literal["position", "element"]
    class_index: int | None
    in_basis: bool | None = None


class RepresentRequest(BaseModel):
    config: ConfigModel
    n: ValueModel
    paper_faithful: bool = False
    trace: bool = False


class RepresentResponse(BaseModel):
    case: str
    verified: bool
    certificate: CertificateModel


class VerifyRequest(BaseModel):
    certificate: CertificateModel


class VerifyResponse(BaseModel):
    valid: bool
    failures: list[CheckFailureModel]


class ScanRequest(BaseModel):
    config: ConfigModel
    start: int
    end: int
    paper_faithful: bool = False
    include_certificates: bool = True
    jobs: int = 1
    reproducible: bool = False

    @model_validator(mode="after")
    def _range(self):
        if self.start < 1:
            raise ValueError("'start' must be >= 1")
        if self.end < self.start:
            raise ValueError("'end' must be >= 'start'")
        if self.jobs < 1:
            raise ValueError("'jobs' must be >= 1")
        return self


class EnumerateRequest(BaseModel):
    config: ConfigModel
    N: int
    reproducible: bool = False


class RTableRequest(BaseModel):
    config: ConfigModel
    N: int
    h: int | None = None
    include_counts: bool | None = None  # default: only when N <= 4096
    reproducible: bool = False


class EWindowRequest(BaseModel):
    config: ConfigModel
    a: int
    N: int
    h: int | None = None
    reproducible: bool = False


class IntervalsModel(BaseModel):
    classes: list[list[tuple[int, int]]]


class AlternatingModel(BaseModel):
    h: int
    block_len: int


class TheoremARequest(BaseModel):
    t: int
    N: int
    samples: int = 20
    config: ConfigModel | None = None
    intervals: IntervalsModel | None = None
    alternating: AlternatingModel | None = None
    reproducible: bool = False

    @model_validator(mode="after")
    def _one_source(self):
        given = sum(x is not None for x in (self.config, self.intervals, self.alternating))
        if given != 1:
            raise ValueError("give exactly one of 'config', 'intervals', or 'alternating'")
        return self

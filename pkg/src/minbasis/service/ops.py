"""Operations behind the HTTP routes; the CLI calls these in-process.

Each op takes a request model and returns a response model (or yields JSON
records, for scans).  Domain failures raise DomainError subclasses; the app
and the CLI translate those to HTTP status / exit codes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import Iterator

from .. import avoid4, certificate, oracle, splitter
from ..basis import classify_element
from ..errors import ConfigError, DomainError
from ..partition import Mode, PartitionConfig, config_from_dict, validate_config
from ..partition import Violation as ConfigViolation
from .models import (
    CertificateModel,
    ClassifyRequest,
    ClassifyResponse,
    ConfigCheckRequest,
    ConfigCheckResponse,
    ConfigModel,
    EnumerateRequest,
    EWindowRequest,
    RepresentRequest,
    RepresentResponse,
    RTableRequest,
    ScanRequest,
    TheoremARequest,
    ValueModel,
    VerifyRequest,
    VerifyResponse,
    ViolationModel,
    CheckFailureModel,
)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _stamp(doc: dict, reproducible: bool) -> dict:
    if not reproducible:
        doc["generated_at"] = _now()
    return doc


def op_config_check(req: ConfigCheckRequest) -> ConfigCheckResponse:
    cfg = req.config.to_core()
    violations = validate_config(cfg)
    derived: dict = {}
    if not violations:
        derived = {
            "m_preview": [cfg.m(i) for i in range(1, 6)],
            "strict_bound": 1 << (cfg.h + 4),
            "two_pow_t": 1 << cfg.t,
        }
        if cfg.mode is Mode.CASE1:
            derived["case1_threshold"] = splitter.guarantee_threshold(cfg)
        if cfg.mode is Mode.CASE2:
            derived["m2"] = cfg.m(2)
    return ConfigCheckResponse(
        valid=not violations,
        violations=[ViolationModel(constraint=v.constraint, message=v.message) for v in violations],
        normalized=ConfigModel.from_core(cfg),
        derived=derived,
    )


def op_classify(req: ClassifyRequest) -> ClassifyResponse:
    cfg = req.config.to_core()
    _require_valid(cfg)
    if req.position is not None:
        return ClassifyResponse(kind="position", class_index=cfg.classify(req.position))
    j = classify_element(cfg, req.element.to_int())
    return ClassifyResponse(kind="element", class_index=j, in_basis=j is not None)


def _require_valid(cfg: PartitionConfig) -> None:
    violations = validate_config(cfg)
    if violations:
        raise ConfigError(violations)


def _represent(cfg: PartitionConfig, n: int, paper_faithful: bool, keep_trace: bool) -> certificate.Certificate:
    if cfg.mode is Mode.CASE1:
        return splitter.represent_case1(cfg, n, keep_trace=keep_trace)
    if cfg.mode is Mode.CASE2:
        return avoid4.represent_avoiding_4(cfg, n, paper_faithful=paper_faithful)
    raise ConfigError([ConfigViolation("mode_mismatch", "represent needs mode case1 or case2, not generic_lab")])


def op_represent(req: RepresentRequest) -> RepresentResponse:
    cfg = req.config.to_core()
    cert = _represent(cfg, req.n.to_int(), req.paper_faithful, req.trace)
    failures = certificate.verify(cert)
    if failures:
        from ..errors import InvariantViolation

        raise InvariantViolation(
            "built certificate failed verification: "
            + "; ".join(f"{f.constraint}: {f.message}" for f in failures)
        )
    return RepresentResponse(case=cert.case, verified=True, certificate=CertificateModel.from_core(cert))


def op_verify(req: VerifyRequest) -> VerifyResponse:
    cert = req.certificate.to_core()
    failures = certificate.verify(cert)
    return VerifyResponse(
        valid=not failures,
        failures=[CheckFailureModel(part=f.part, constraint=f.constraint, message=f.message) for f in failures],
    )


def _scan_one(cfg: PartitionConfig, n: int, paper_faithful: bool, include_cert: bool) -> dict:
    record: dict = {"n": n}
    try:
        cert = _represent(cfg, n, paper_faithful, keep_trace=False)
    except DomainError as exc:
        if exc.code in ("below_guarantee", "too_few_terms"):
            record["status"] = "below_guarantee"
        elif exc.code == "paper_formula_divergence":
            record["status"] = "divergence"
        else:
            record["status"] = "error"
        record["error"] = exc.code
        record["message"] = str(exc)
        return record
    failures = certificate.verify(cert)
    if failures:
        record["status"] = "error"
        record["error"] = "verification_failed"
        record["failures"] = [{"part": f.part, "constraint": f.constraint, "message": f.message} for f in failures]
        return record
    record["status"] = "ok"
    record["case"] = cert.case
    if include_cert:
        record["certificate"] = certificate.to_dict(cert)
    return record


def _scan_chunk(args: tuple) -> list:
    cfg_dict, ns, paper_faithful, include_cert = args
    cfg = config_from_dict(cfg_dict)
    return [_scan_one(cfg, n, paper_faithful, include_cert) for n in ns]


def op_scan(req: ScanRequest) -> Iterator[dict]:
    """Yields one record per n in [start, end], then a summary record."""
    cfg = req.config.to_core()
    _require_valid(cfg)
    ns = range(req.start, req.end + 1)
    counts = {"ok": 0, "below_guarantee": 0, "divergence": 0, "error": 0}

    def tally(record: dict) -> dict:
        counts[record["status"]] += 1
        return record

    if req.jobs == 1:
        for n in ns:
            yield tally(_scan_one(cfg, n, req.paper_faithful, req.include_certificates))
    else:
        cfg_dict = req.config.model_dump(exclude_none=True)
        chunk = max(64, len(ns) // (req.jobs * 8) or 1)
        batches = [
            (cfg_dict, list(ns[i : i + chunk]), req.paper_faithful, req.include_certificates)
            for i in range(0, len(ns), chunk)
        ]
        with ProcessPoolExecutor(max_workers=req.jobs) as pool:
            for records in pool.map(_scan_chunk, batches):
                for record in records:
                    yield tally(record)

    summary = {"total": len(ns), **counts}
    _stamp(summary, req.reproducible)
    yield {"summary": summary}


def _oracle_classifier(req) -> object:
    if getattr(req, "config", None) is not None:
        cfg = req.config.to_core()
        _require_valid(cfg)
        return cfg
    emax = req.N.bit_length() - 1
    if getattr(req, "intervals", None) is not None:
        classes = tuple(tuple(tuple(iv) for iv in ivs) for ivs in req.intervals.classes)
        cover = max(hi for ivs in classes for _, hi in ivs)
        if cover < emax:
            raise ValueError(f"intervals cover exponents up to {cover}, window needs {emax}")
        return oracle.IntervalPartition(classes=classes, cover=cover)
    alt = req.alternating
    return oracle.IntervalPartition.alternating(alt.h, alt.block_len, max(emax, 0))


def op_enumerate(req: EnumerateRequest) -> dict:
    part = _oracle_classifier(req)
    elems = oracle.enumerate_A(part, req.N)
    return _stamp({"N": req.N, "count": len(elems), "elements": elems}, req.reproducible)


def op_rtable(req: RTableRequest) -> dict:
    part = _oracle_classifier(req)
    report = oracle.r_h_table(part, req.N, req.h)
    include_counts = req.include_counts if req.include_counts is not None else req.N <= 4096
    doc = {
        "N": report.N,
        "h": report.h,
        "basis_size": report.basis_size,
        "gaps": list(report.gaps),
        "saturated": report.saturated,
    }
    if include_counts:
        doc["counts"] = list(report.counts)
    return _stamp(doc, req.reproducible)


def op_ewindow(req: EWindowRequest) -> dict:
    part = _oracle_classifier(req)
    report = oracle.e_window(part, req.a, req.N, req.h)
    return _stamp(
        {
            "a": report.a,
            "N": report.N,
            "h": report.h,
            "members": list(report.members),
            "count": len(report.members),
            "saturated": report.saturated,
        },
        req.reproducible,
    )


def op_theorem_a(req: TheoremARequest) -> dict:
    part = _oracle_classifier(req)
    report = oracle.theorem_a_spot_check(part, req.t, req.N, samples=req.samples)
    return _stamp(report, req.reproducible)

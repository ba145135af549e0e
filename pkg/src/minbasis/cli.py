"""Command line interface.

All output is JSON: single documents pretty-printed, scans as JSON lines.
Commands run in-process by default; --server URL sends the same request
models to a running service instead.

Exit codes:
  0  success
  1  verification failure (invalid certificate, failed self-check,
     source-formula divergence)
  2  usage, config, or input format error
  3  guarantee not applicable (below m_2, too few terms, refused parameter
     regime)
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import DomainError
from .service import ops
from .service.models import (
    AlternatingModel,
    CertificateModel,
    ClassifyRequest,
    ConfigCheckRequest,
    ConfigModel,
    EnumerateRequest,
    EWindowRequest,
    IntervalsModel,
    RepresentRequest,
    RTableRequest,
    ScanRequest,
    TheoremARequest,
    ValueModel,
    VerifyRequest,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NOT_APPLICABLE = 3

_EXIT_BY_CODE = {
    "below_guarantee": EXIT_NOT_APPLICABLE,
    "too_few_terms": EXIT_NOT_APPLICABLE,
    "parameter_mismatch": EXIT_NOT_APPLICABLE,
    "paper_formula_divergence": EXIT_VERIFY,
    "invariant_violation": EXIT_VERIFY,
    "verification_failed": EXIT_VERIFY,
    "rule_b_membership": EXIT_VERIFY,
    "no_merge_slot": EXIT_VERIFY,
}


def _exit_for_code(code: str) -> int:
    return _EXIT_BY_CODE.get(code, EXIT_USAGE)


def _print_doc(doc) -> None:
    print(json.dumps(doc, indent=2))


def _print_line(doc) -> None:
    print(json.dumps(doc, separators=(",", ":")))


def _load_json(path: str):
    if path == "-":
        return json.loads(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _config_model(path: str) -> ConfigModel:
    return ConfigModel.model_validate(_load_json(path))


def _value_model(text: str) -> ValueModel:
    text = text.strip()
    if text.startswith("exp:"):
        body = text[4:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed exponent list: {text!r}")
        inner = body[1:-1].strip()
        exps = [int(p) for p in inner.split(",")] if inner else []
        return ValueModel(exp=exps)
    return ValueModel(dec=text)


def _post(server: str, path: str, payload: dict):
    import httpx

    with httpx.Client(base_url=server, timeout=600.0) as client:
        resp = client.post(path, json=payload)
        try:
            doc = resp.json()
        except json.JSONDecodeError:
            doc = {"error": "bad_response", "status": resp.status_code, "text": resp.text[:500]}
        return resp.status_code, doc


def _remote_simple(server: str, path: str, req) -> int:
    status, doc = _post(server, path, req.model_dump(mode="json", by_alias=True, exclude_none=True))
    _print_doc(doc)
    if status == 200:
        return EXIT_OK
    if status == 400 and isinstance(doc, dict) and "error" in doc:
        return _exit_for_code(doc["error"])
    return EXIT_USAGE


def _cmd_config(args) -> int:
    req = ConfigCheckRequest(config=_config_model(args.config))
    if args.server:
        status, doc = _post(args.server, "/config/validate", req.model_dump(mode="json", exclude_none=True))
        if status != 200:
            _print_doc(doc)
            return EXIT_USAGE if status == 422 else _exit_for_code(doc.get("error", ""))
        valid = doc.get("valid", False)
    else:
        resp = ops.op_config_check(req)
        doc = resp.model_dump(mode="json", exclude_none=True)
        valid = resp.valid
    if args.subcommand == "validate":
        _print_doc({"valid": doc["valid"], "violations": doc["violations"]})
    else:
        _print_doc(doc)
    return EXIT_OK if valid else EXIT_USAGE


def _cmd_classify(args) -> int:
    req = ClassifyRequest(
        config=_config_model(args.config),
        position=args.position,
        element=_value_model(args.element) if args.element is not None else None,
    )
    if args.server:
        return _remote_simple(args.server, "/classify", req)
    _print_doc(ops.op_classify(req).model_dump(mode="json"))
    return EXIT_OK


def _cmd_represent(args) -> int:
    req = RepresentRequest(
        config=_config_model(args.config),
        n=_value_model(args.n),
        paper_faithful=args.paper_faithful,
        trace=args.trace,
    )
    if args.server:
        status, doc = _post(args.server, "/represent", req.model_dump(mode="json", by_alias=True, exclude_none=True))
        if status != 200:
            _print_doc(doc)
            return EXIT_USAGE if status == 422 else _exit_for_code(doc.get("error", ""))
        cert_doc = doc["certificate"]
    else:
        resp = ops.op_represent(req)
        cert_doc = resp.certificate.model_dump(mode="json", by_alias=True, exclude_none=True)
    text = json.dumps(cert_doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _print_doc({"written": args.out, "case": cert_doc["case"]})
    else:
        print(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    doc = _load_json(args.path)
    if isinstance(doc, dict) and "schema_version" not in doc and isinstance(doc.get("certificate"), dict):
        doc = doc["certificate"]
    req = VerifyRequest(certificate=CertificateModel.model_validate(doc))
    if args.server:
        status, out = _post(args.server, "/verify", req.model_dump(mode="json", by_alias=True, exclude_none=True))
        _print_doc(out)
        if status != 200:
            return EXIT_USAGE if status == 422 else _exit_for_code(out.get("error", ""))
        return EXIT_OK if out.get("valid") else EXIT_VERIFY
    resp = ops.op_verify(req)
    _print_doc(resp.model_dump(mode="json"))
    return EXIT_OK if resp.valid else EXIT_VERIFY


def _cmd_scan(args) -> int:
    req = ScanRequest(
        config=_config_model(args.config),
        start=args.start,
        end=args.end,
        paper_faithful=args.paper_faithful,
        include_certificates=not args.omit_certificates,
        jobs=args.jobs,
        reproducible=args.reproducible,
    )
    failed = 0
    if args.server:
        import httpx

        payload = req.model_dump(mode="json", exclude_none=True)
        with httpx.Client(base_url=args.server, timeout=None) as client:
            with client.stream("POST", "/scan", json=payload) as resp:
                if resp.status_code != 200:
                    resp.read()
                    doc = resp.json()
                    _print_doc(doc)
                    return EXIT_USAGE if resp.status_code == 422 else _exit_for_code(doc.get("error", ""))
                for line in resp.iter_lines():
                    if not line:
                        continue
                    print(line)
                    record = json.loads(line)
                    if record.get("status") in ("divergence", "error"):
                        failed += 1
    else:
        for record in ops.op_scan(req):
            _print_line(record)
            if record.get("status") in ("divergence", "error"):
                failed += 1
    return EXIT_VERIFY if failed else EXIT_OK


def _theorem_a_request(args) -> TheoremARequest:
    config = _config_model(args.config) if args.config else None
    intervals = None
    if args.intervals:
        intervals = IntervalsModel.model_validate(_load_json(args.intervals))
    alternating = None
    if args.alternating is not None:
        if args.h is None:
            raise ValueError("--alternating needs --h")
        alternating = AlternatingModel(h=args.h, block_len=args.alternating)
    return TheoremARequest(
        t=args.t,
        N=args.N,
        samples=args.samples,
        config=config,
        intervals=intervals,
        alternating=alternating,
        reproducible=args.reproducible,
    )


def _cmd_oracle(args) -> int:
    if args.subcommand == "enumerate":
        req = EnumerateRequest(config=_config_model(args.config), N=args.N, reproducible=args.reproducible)
        path, run = "/oracle/enumerate", ops.op_enumerate
    elif args.subcommand == "rtable":
        req = RTableRequest(
            config=_config_model(args.config),
            N=args.N,
            h=args.h,
            include_counts=True if args.include_counts else None,
            reproducible=args.reproducible,
        )
        path, run = "/oracle/rtable", ops.op_rtable
    elif args.subcommand == "ewindow":
        req = EWindowRequest(
            config=_config_model(args.config), a=args.a, N=args.N, h=args.h, reproducible=args.reproducible
        )
        path, run = "/oracle/ewindow", ops.op_ewindow
    else:
        req = _theorem_a_request(args)
        path, run = "/oracle/theorem-a", ops.op_theorem_a
    if args.server:
        return _remote_simple(args.server, path, req)
    _print_doc(run(req))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="minbasis",
        description="Minimal asymptotic bases: partition configs, representation certificates, window oracles.",
        epilog="Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 guarantee not applicable.",
    )
    p.add_argument("--server", metavar="URL", help="send the request to a running service instead of in-process")
    p.add_argument("--reproducible", action="store_true", help="omit timestamps for byte-identical reruns")
    sub = p.add_subparsers(dest="command", required=True)

    config_p = sub.add_parser("config", help="inspect or validate a partition config")
    config_sub = config_p.add_subparsers(dest="subcommand", required=True)
    for name in ("validate", "show"):
        cp = config_sub.add_parser(name)
        cp.add_argument("--config", required=True, help="path to a config JSON file")

    cl = sub.add_parser("classify", help="class of an exponent position or a basis element")
    cl.add_argument("--config", required=True)
    group = cl.add_mutually_exclusive_group(required=True)
    group.add_argument("--position", type=int, help="exponent position w")
    group.add_argument("--element", help="value, decimal or exp:[...]")

    rp = sub.add_parser("represent", help="build and verify a certificate for n")
    rp.add_argument("--config", required=True)
    rp.add_argument("--n", required=True, help="value, decimal or exp:[...]")
    rp.add_argument("--paper-faithful", action="store_true", help="use the source construction's exact branch formulas")
    rp.add_argument("--trace", action="store_true", help="embed a digest of the split trace")
    rp.add_argument("--out", help="write the certificate to this path")

    sc = sub.add_parser("scan", help="represent every n in a range; JSON lines plus a summary")
    sc.add_argument("--config", required=True)
    sc.add_argument("--from", dest="start", type=int, required=True)
    sc.add_argument("--to", dest="end", type=int, required=True)
    sc.add_argument("--paper-faithful", action="store_true")
    sc.add_argument("--jobs", type=int, default=1, help="worker processes")
    sc.add_argument("--omit-certificates", action="store_true", help="records carry status/case only")

    vf = sub.add_parser("verify", help="check a certificate file (or stdin)")
    vf.add_argument("path", nargs="?", default="-", help="certificate JSON path, - for stdin")

    orc = sub.add_parser("oracle", help="brute-force window checks")
    orc_sub = orc.add_subparsers(dest="subcommand", required=True)
    en = orc_sub.add_parser("enumerate", help="basis elements in [1, N]")
    en.add_argument("--config", required=True)
    en.add_argument("--N", type=int, required=True)
    rt = orc_sub.add_parser("rtable", help="r_h counts over [0, N]")
    rt.add_argument("--config", required=True)
    rt.add_argument("--N", type=int, required=True)
    rt.add_argument("--h", type=int)
    rt.add_argument("--include-counts", action="store_true")
    ew = orc_sub.add_parser("ewindow", help="window slice of E_a")
    ew.add_argument("--config", required=True)
    ew.add_argument("--a", type=int, required=True)
    ew.add_argument("--N", type=int, required=True)
    ew.add_argument("--h", type=int)
    ta = orc_sub.add_parser("theorem-a", help="finite-window minimality evidence")
    ta_src = ta.add_mutually_exclusive_group(required=True)
    ta_src.add_argument("--config")
    ta_src.add_argument("--intervals", help="JSON file: {\"classes\": [[[lo,hi],...],...]}")
    ta_src.add_argument("--alternating", type=int, metavar="BLOCK_LEN", help="alternating blocks; needs --h")
    ta.add_argument("--h", type=int)
    ta.add_argument("--t", type=int, required=True)
    ta.add_argument("--N", type=int, required=True)
    ta.add_argument("--samples", type=int, default=20)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8571)
    return p


_HANDLERS = {
    "config": _cmd_config,
    "classify": _cmd_classify,
    "represent": _cmd_represent,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValidationError as exc:
        _print_doc({"error": "invalid_request", "detail": json.loads(exc.json(include_url=False))})
        return EXIT_USAGE
    except DomainError as exc:
        _print_doc(exc.payload())
        return _exit_for_code(exc.code)
    except (ValueError, OSError) as exc:
        _print_doc({"error": "usage", "message": str(exc)})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

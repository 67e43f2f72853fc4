"""Command-line interface.

Subcommands: fdelta, doi, bscheck, certify, sweep.  Exit codes: 0 success,
2 validation error (bad input, bad config, bad file), 3 soundness failure
(certificate unsound, or a Birman-Solomyak residual out of contract).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .certificate import build_certificate, certificate_to_dict, verify_certificate
from .doi import bs_residual_bound, check_birman_solomyak, doi_apply, f_delta
from .errors import CertificateUnsoundError, ValidationError
from .functions import function_from_spec
from .linalg import eigh_symmetric, read_matrix, write_matrix
from .measures import materialize, read_kernel_operator
from .sweeps import emit_report, load_config, run_sweep


def _load_function(arg: str):
    if arg.lstrip().startswith("{"):
        try:
            spec = json.loads(arg)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"bad inline function JSON: {exc}") from exc
    else:
        try:
            with open(arg) as fh:
                spec = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read function spec {arg}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"function spec {arg} is not valid JSON: {exc}") from exc
    return function_from_spec(spec)


def _cmd_fdelta(args) -> int:
    f = _load_function(args.function)
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    result = f_delta(f, a, b)
    if args.out:
        write_matrix(args.out, result)
    else:
        print(_matrix_text(result), end="")
    return 0


def _matrix_text(m) -> str:
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def _cmd_doi(args) -> int:
    f = _load_function(args.function)
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    t = read_matrix(args.t)
    result = doi_apply(f, eigh_symmetric(a), eigh_symmetric(b), t)
    if args.out:
        write_matrix(args.out, result)
    else:
        print(_matrix_text(result), end="")
    return 0


def _cmd_bscheck(args) -> int:
    f = _load_function(args.function)
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    residual = check_birman_solomyak(f, a, b)
    bound = bs_residual_bound(a, b, f.lip)
    print(f"residual {residual!r}")
    print(f"contract {bound!r}")
    if residual > bound:
        print("FAIL: residual exceeds contract", file=sys.stderr)
        return 3
    print("OK")
    return 0


def _cmd_certify(args) -> int:
    kop = read_kernel_operator(args.input)
    n_values = [int(x) for x in args.n.split(",") if x.strip()]
    if not n_values or any(n < 1 for n in n_values):
        raise ValidationError(f"--n must be a comma-separated list of positive integers: {args.n!r}")
    records = []
    spectrum = None
    for n in n_values:
        cert = build_certificate(kop, n)
        if spectrum is None:
            spectrum = np.linalg.svd(materialize(kop), compute_uv=False)
        report = verify_certificate(kop, cert, spectrum=spectrum)
        record = certificate_to_dict(cert, include_vectors=args.include_vectors)
        record["verification"] = {
            "passed": report.passed,
            "singular_value": report.singular_value,
            "weak_quasinorm": report.weak_quasinorm,
            "norm_product": report.norm_product,
            "weak_ratio": report.weak_ratio,
        }
        records.append(record)
        print(f"n={n}: s_{cert.defect_rank} <= {cert.empirical_bound!r} "
              f"(observed {report.singular_value!r}) OK")
    payload = json.dumps({"certificates": records}, indent=2, sort_keys=True) + "\n"
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(payload)
        except OSError as exc:
            raise ValidationError(f"cannot write {args.out}: {exc}") from exc
    else:
        print(payload, end="")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out"] = args.out
    if args.format is not None:
        overrides["format"] = args.format
    if overrides:
        data = {name: getattr(cfg, name) for name in cfg.__dataclass_fields__}
        data.update(overrides)
        cfg = load_config(data)
    report = run_sweep(cfg)
    if cfg.out:
        emit_report(report, cfg.out, cfg.format)
        print(f"wrote {cfg.out}")
    else:
        print(json.dumps(report.summary, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liplab",
                                     description="Lipschitz perturbation laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fdelta", help="compute f(A) - f(B) from matrix files")
    p.add_argument("--function", required=True, help="function spec: inline JSON or a path")
    p.add_argument("a", help="matrix file for A")
    p.add_argument("b", help="matrix file for B")
    p.add_argument("--out", help="output matrix file (default: stdout)")
    p.set_defaults(func=_cmd_fdelta)

    p = sub.add_parser("doi", help="double operator integral of T against eigh(A), eigh(B)")
    p.add_argument("--function", required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("t")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_doi)

    p = sub.add_parser("bscheck", help="Birman-Solomyak identity residual check")
    p.add_argument("--function", required=True)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_bscheck)

    p = sub.add_parser("certify", help="build and verify weak-decay certificates")
    p.add_argument("--input", required=True, help="kernel operator file (MU/NU/FUNCTION)")
    p.add_argument("--n", required=True, help="comma-separated n values, e.g. 4,8,16")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.add_argument("--include-vectors", action="store_true",
                   help="include defect vectors in the certificate records")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("sweep", help="run an experiment sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help="override the config output path")
    p.add_argument("--format", choices=("csv", "json"), help="override the config format")
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificateUnsoundError as exc:
        print(f"unsound: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

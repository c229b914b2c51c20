"""Command-line entry point.

Every command prints one JSON document on stdout and a run manifest (one JSON
line) on stderr, or into ``--manifest FILE``.  Exit codes: 0 affirmative or
success, 1 negative verdict, 2 error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import circuit as circ
from . import hyperpf, nullcone, repaudit, torus
from .pit import PitConfig, PitFailure
from .pit import pit as run_pit
from .rational import format_rational, parse_rational

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunManifest:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    seed: int | None = None
    epsilon: str | None = None
    version: str = field(default_factory=_version)
    wall_clock: float = 0.0
    result_digest: str = ""


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _pit_config(args) -> PitConfig:
    return PitConfig(epsilon=parse_rational(args.epsilon), seed=args.seed, prime_bits=args.prime_bits)


# -- handlers: each returns (json document, exit code) ---------------------


def cmd_pit(args, manifest):
    manifest.inputs = [args.circuit]
    c = circ.circuit_from_json(_load_json(args.circuit))
    res = run_pit(c, _pit_config(args))
    return res.to_json(), EXIT_OK if res.is_zero else EXIT_NEGATIVE


def cmd_homog(args, manifest):
    manifest.inputs = [args.circuit]
    c = circ.circuit_from_json(_load_json(args.circuit))
    out = circ.homogeneous_components(c, args.rmax)
    if args.degree is not None:
        out = circ.component_output(out, args.rmax, args.output, args.degree)
    return circ.circuit_to_json(out), EXIT_OK


def cmd_match_decide(args, manifest):
    manifest.inputs = [args.instance] + ([args.encoding] if args.encoding else [])
    U = torus.MatchingInstance.from_json(_load_json(args.instance))
    if args.encoding:
        C = circ.circuit_from_json(_load_json(args.encoding))
    else:
        C = torus.reference_encoding(U.n)
    answer = torus.decide_matching_via_encoding(U, C, _pit_config(args))
    return {"answer": answer}, EXIT_OK if answer == "YES" else EXIT_NEGATIVE


def cmd_match_brute(args, manifest):
    manifest.inputs = [args.instance]
    U = torus.MatchingInstance.from_json(_load_json(args.instance))
    found = torus.find_matching(U)
    doc = {"answer": "YES" if found else "NO"}
    if found:
        doc["matching"] = [list(e) for e in found]
    return doc, EXIT_OK if found else EXIT_NEGATIVE


def cmd_match_mindeg(args, manifest):
    report = torus.verify_min_degree(args.n)
    return report.to_json(), EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_match_encode(args, manifest):
    return circ.circuit_to_json(torus.reference_encoding(args.n)), EXIT_OK


def cmd_match_tensor(args, manifest):
    manifest.inputs = [args.instance]
    U = torus.MatchingInstance.from_json(_load_json(args.instance))
    return torus.instance_to_tensor(U).to_json(), EXIT_OK


def cmd_nullcone(args, manifest):
    manifest.inputs = [args.tensor]
    T = torus.Tensor3.from_json(_load_json(args.tensor))
    verdict = nullcone.null_cone_membership(T)
    return verdict.to_json(), EXIT_OK if verdict.in_null_cone else EXIT_NEGATIVE


def cmd_hyperpf_eval(args, manifest):
    manifest.inputs = [args.tensor]
    p = hyperpf.SparseTensor.from_json(_load_json(args.tensor))
    return {"value": format_rational(hyperpf.hyperpfaffian_eval(p))}, EXIT_OK


def _matrix(doc) -> list[list[Fraction]]:
    if not isinstance(doc, list) or not all(isinstance(row, list) for row in doc):
        raise UsageError("matrix file must hold a list of rows")
    return [[parse_rational(v) for v in row] for row in doc]


def cmd_hyperpf_project(args, manifest):
    manifest.inputs = [args.matrix]
    X = _matrix(_load_json(args.matrix))
    if args.check:
        report = hyperpf.projection_identity_check(args.k, args.d, X)
        return report.to_json(), EXIT_OK if report.ok else EXIT_NEGATIVE
    return hyperpf.projection_point(args.k, args.d, X).to_json(), EXIT_OK


def cmd_repaudit_dim(args, manifest):
    dim = repaudit.invariant_dimension(args.N, args.m, args.d)
    return {"N": args.N, "m": args.m, "d": args.d, "dimension": dim}, EXIT_OK


# -- parser ----------------------------------------------------------------


def _randomness(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", default="1/128", help="error budget as an exact rational, e.g. 1/128")
    p.add_argument("--prime-bits", type=int, default=62)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="write the run manifest here instead of stderr")
    parser = argparse.ArgumentParser(prog="invtools", description="Computational invariant theory at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pit", parents=[common], help="identity test for a circuit over aux variables")
    p.add_argument("--circuit", required=True)
    _randomness(p)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("homog", parents=[common], help="homogeneous components in the main variables")
    p.add_argument("--circuit", required=True)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--degree", type=int, help="keep only this component")
    p.add_argument("--output", type=int, default=0, help="original output index used with --degree")
    p.set_defaults(func=cmd_homog)

    match = sub.add_parser("match", help="torus action / 3D matching").add_subparsers(dest="match_cmd", required=True)
    p = match.add_parser("decide", parents=[common])
    p.add_argument("--instance", required=True)
    p.add_argument("--encoding")
    _randomness(p)
    p.set_defaults(func=cmd_match_decide)
    p = match.add_parser("brute", parents=[common])
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_match_brute)
    p = match.add_parser("verify-mindeg", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_match_mindeg)
    p = match.add_parser("encode", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_match_encode)
    p = match.add_parser("tensor", parents=[common])
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_match_tensor)

    p = sub.add_parser("nullcone", parents=[common], help="Hilbert-Mumford null-cone membership")
    p.add_argument("--tensor", required=True)
    p.set_defaults(func=cmd_nullcone)

    hp = sub.add_parser("hyperpf", help="hyperpfaffian tools").add_subparsers(dest="hp_cmd", required=True)
    p = hp.add_parser("eval", parents=[common])
    p.add_argument("--tensor", required=True)
    p.set_defaults(func=cmd_hyperpf_eval)
    p = hp.add_parser("project", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_hyperpf_project)

    ra = sub.add_parser("repaudit", help="invariant dimensions by Lie-algebra kernels").add_subparsers(
        dest="ra_cmd", required=True
    )
    p = ra.add_parser("dim", parents=[common])
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_repaudit_dim)
    return parser


def _subcommand_name(args) -> str:
    parts = [args.command]
    for attr in ("match_cmd", "hp_cmd", "ra_cmd"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    manifest = RunManifest(_subcommand_name(args))
    if hasattr(args, "seed"):
        manifest.seed = args.seed
        manifest.epsilon = args.epsilon
    start = time.perf_counter()
    try:
        doc, code = args.func(args, manifest)
    except (UsageError, ValueError, KeyError, TypeError, circ.CircuitError, PitFailure) as exc:
        print(f"invtools: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = json.dumps(doc, separators=(",", ":"))
    sys.stdout.write(text + "\n")
    manifest.wall_clock = round(time.perf_counter() - start, 6)
    manifest.result_digest = hashlib.sha256(text.encode()).hexdigest()
    line = json.dumps({"manifest": asdict(manifest)}, separators=(",", ":"))
    if args.manifest:
        Path(args.manifest).write_text(line + "\n")
    else:
        print(line, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

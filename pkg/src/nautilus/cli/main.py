"""harness: the command-line front door.

    harness eval --policy <ref> --benchmark <ref> [--episodes N] [--seed S] [--max-steps T]
    harness registry <lookup|list|submit|verify|init-demo> ...
    harness smoke --benchmark <ref> [--tier L1 ...] [--seed S]
    harness train
    harness help

Each error class exits with a fixed code (see exitcodes.py); errors print
one line to stderr. NotFound errors include near-miss suggestions.
"""

import argparse
import sys

from ..contracts.base import ContractViolation
from ..contracts.mocks import ConfigInvalid
from ..registry.model import (
    Collision,
    InsufficientEvidence,
    LookupFailed,
    NotBenchmark,
    PreflightFailed,
    SchemaViolation,
)
from ..smoke.ladder import TIERS
from ..endpoints import UnsupportedSource
from . import exitcodes
from .environment import registry_dir, workspace_dir
from .eval_cmd import DEFAULT_EPISODES, DEFAULT_MAX_STEPS, EvalConfig, GateBlocked, run_eval
from .registry_cmd import cmd_init_demo, cmd_list, cmd_lookup, cmd_submit, cmd_verify, open_store
from .smoke_cmd import run_smoke
from .supervise import EndpointFailure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harness", description="robot policy evaluation harness")
    sub = parser.add_subparsers(dest="command")

    ev = sub.add_parser("eval", help="evaluate a policy on a benchmark")
    ev.add_argument("--policy", required=True, help="registry name or source URL")
    ev.add_argument("--benchmark", required=True, help="registry name or source URL")
    ev.add_argument("--episodes", type=int, default=DEFAULT_EPISODES)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    ev.add_argument(
        "--in-process",
        action="store_true",
        help="serve the policy from this process instead of a child process",
    )

    reg = sub.add_parser("registry", help="query and curate the benchmark registry")
    regsub = reg.add_subparsers(dest="verb")
    p = regsub.add_parser("lookup", help="resolve a name or URL to an entry")
    p.add_argument("query")
    p.add_argument("--kind", choices=("policy", "benchmark", "robot"))
    p = regsub.add_parser("list", help="list entries")
    p.add_argument("--kind", choices=("policy", "benchmark", "robot"))
    p = regsub.add_parser("submit", help="submit a new entry from a JSON document")
    p.add_argument("doc", help="path to the entry JSON")
    p = regsub.add_parser("verify", help="promote a benchmark using cross-run evidence")
    p.add_argument("name")
    p.add_argument("--evidence", required=True, help="path to a cross-run report JSON")
    p.add_argument("--image-digest", default=None)
    regsub.add_parser("init-demo", help="seed the registry with runnable demo entries")

    sm = sub.add_parser("smoke", help="run the smoke ladder against a benchmark")
    sm.add_argument("--benchmark", required=True)
    sm.add_argument("--tier", action="append", choices=TIERS, default=None)
    sm.add_argument("--seed", type=int, default=0)

    sub.add_parser("train", help="training dispatch (not implemented)")
    sub.add_parser("help", help="show this help")
    return parser


def _fail(message: str, code: int) -> int:
    print(f"harness: {message}", file=sys.stderr)
    return code


def _run_command(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.command in (None, "help"):
        parser.print_help()
        return exitcodes.OK

    if args.command == "train":
        print("train: not implemented in this build; eval and smoke are the supported verbs")
        return exitcodes.OK

    if args.command == "eval":
        config = EvalConfig(
            policy=args.policy,
            benchmark=args.benchmark,
            episodes=args.episodes,
            max_steps=args.max_steps,
            seed=args.seed,
            in_process=args.in_process,
        )
        outcome = run_eval(config, open_store(registry_dir()), workspace_dir())
        print(
            f"bucket={outcome.bucket} episodes={outcome.episodes}"
            f" success_rate={outcome.success_rate:.1f}%"
            f" median_ms={outcome.median_ms:.3f} p95_ms={outcome.p95_ms:.3f}"
        )
        return exitcodes.OK

    if args.command == "smoke":
        tiers = tuple(args.tier) if args.tier else None
        return run_smoke(
            open_store(registry_dir()),
            args.benchmark,
            tiers,
            args.seed,
            workspace_dir(),
        )

    if args.command == "registry":
        if args.verb == "lookup":
            return cmd_lookup(open_store(registry_dir()), args.query, args.kind)
        if args.verb == "list":
            return cmd_list(open_store(registry_dir()), args.kind)
        if args.verb == "submit":
            return cmd_submit(open_store(registry_dir()), args.doc)
        if args.verb == "verify":
            return cmd_verify(open_store(registry_dir()), args.name, args.evidence, args.image_digest)
        if args.verb == "init-demo":
            return cmd_init_demo(registry_dir())
        return _fail("registry needs a verb: lookup | list | submit | verify | init-demo", exitcodes.USAGE)

    return exitcodes.USAGE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return _run_command(parser, args)
    except LookupFailed as exc:
        # NotFound spells out near misses, Ambiguous the candidate names.
        return _fail(str(exc), exitcodes.LOOKUP_FAILED)
    except GateBlocked as exc:
        return _fail(str(exc), exitcodes.GATE_BLOCKED)
    except (EndpointFailure, UnsupportedSource, ConfigInvalid) as exc:
        return _fail(str(exc), exitcodes.ENDPOINT_FAILURE)
    except (SchemaViolation, ContractViolation) as exc:
        return _fail(str(exc), exitcodes.SCHEMA_VIOLATION)
    except Collision as exc:
        return _fail(str(exc), exitcodes.COLLISION)
    except PreflightFailed as exc:
        return _fail(str(exc), exitcodes.PREFLIGHT_FAILED)
    except NotBenchmark as exc:
        return _fail(str(exc), exitcodes.NOT_BENCHMARK)
    except InsufficientEvidence as exc:
        return _fail(str(exc), exitcodes.INSUFFICIENT_EVIDENCE)
    except KeyError as exc:
        return _fail(f"unknown entry {exc.args[0]!r}", exitcodes.LOOKUP_FAILED)
    except ValueError as exc:
        return _fail(str(exc), exitcodes.USAGE)


if __name__ == "__main__":
    sys.exit(main())

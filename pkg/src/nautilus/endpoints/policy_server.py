"""Serve a mock policy over the wire protocol, as a standalone process.

    python3 -m nautilus.endpoints.policy_server --action-dim 7 --kind random

Prints one line "PORT <n>" on stdout once the listener is bound (port 0
asks the OS for an ephemeral one), then serves until SIGTERM or SIGINT.
The supervising process reads that line to learn where to connect.
"""

import argparse
import signal
import sys
import threading

from ..contracts.mocks import POLICY_KINDS, mock_policy
from ..transport import PolicyServer, ServerMetadata


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python3 -m nautilus.endpoints.policy_server",
        description="serve a mock policy over the inference wire protocol",
    )
    parser.add_argument("--action-dim", type=int, required=True)
    parser.add_argument("--horizon", type=int, default=1)
    parser.add_argument("--kind", choices=POLICY_KINDS, default="random")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--port", type=int, default=0)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--name", default="mock-policy")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    policy = mock_policy(args.kind, action_dim=args.action_dim, horizon=args.horizon, seed=args.seed)
    metadata = ServerMetadata(
        action_dim=args.action_dim,
        policy_name=args.name,
        execute_steps=args.horizon,
    )
    server = PolicyServer(policy, metadata, host=args.host, port=args.port).start()
    print(f"PORT {server.port}", flush=True)

    stop = threading.Event()
    for signum in (signal.SIGTERM, signal.SIGINT):
        signal.signal(signum, lambda *_: stop.set())
    try:
        stop.wait()
    finally:
        server.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Stable process exit codes for the harness CLI.

Scripts branch on these numbers, so they are frozen: changing a value is a
breaking change. 0 is success, 2 is argparse's own usage-error code, 3-10
cover the error classes the commands can surface, and 20-23 report which
smoke tier failed.
"""

OK = 0
USAGE = 2

LOOKUP_FAILED = 3
GATE_BLOCKED = 4
ENDPOINT_FAILURE = 5
SCHEMA_VIOLATION = 6
COLLISION = 7
PREFLIGHT_FAILED = 8
NOT_BENCHMARK = 9
INSUFFICIENT_EVIDENCE = 10

SMOKE_L1 = 20
SMOKE_L2 = 21
SMOKE_L3_IL = 22
SMOKE_L3_RL = 23

SMOKE_TIER_CODES = {
    "L1": SMOKE_L1,
    "L2": SMOKE_L2,
    "L3_IL": SMOKE_L3_IL,
    "L3_RL": SMOKE_L3_RL,
}

"""Run the smoke ladder against a registered benchmark.

Exit code 0 means every selected tier passed; a failing tier maps to its
own code (20-23) so CI can tell a reset crash from a flat reward curve
without parsing output. The per-tier outcomes land in the run log.
"""

from ..registry.lookup import lookup
from ..registry.store import RegistryStore
from ..smoke.ladder import run_ladder
from ..endpoints import benchmark_from_entry
from ..workspace.runlog import RunEvent, append_log, now_iso
from .exitcodes import OK, SMOKE_TIER_CODES

SMOKE_TASK = "smoke"


def run_smoke(
    store: RegistryStore,
    benchmark_ref: str,
    tiers: tuple[str, ...] | None,
    seed: int,
    workspace_root,
    out=print,
) -> int:
    hit = lookup(store.snapshot(), benchmark_ref, kind="benchmark")
    env = benchmark_from_entry(hit.entry)
    report = run_ladder(env, spec=hit.entry.spec, seed=seed, tiers=tiers)

    for outcome in report.outcomes:
        event = RunEvent(
            timestamp=now_iso(),
            tool="smoke",
            subagent="orchestrator",
            command=f"tier {outcome.tier} on {hit.entry.name}",
            result_line=f"{outcome.status}" + (f" ({outcome.detail})" if outcome.detail else ""),
        )
        append_log(workspace_root, SMOKE_TASK, event)

    out(report.to_text())
    if report.passed:
        return OK
    return SMOKE_TIER_CODES[report.failing_tier]

"""
Compatibility gate, compiled adapters, and the smoke ladder
===========================================================

Compare a policy contract against a benchmark contract, compile the
adapter the comparison planned, run one adapted step, then put the
benchmark through the tiered smoke checks.
"""

import tempfile

from nautilus.contracts import benchmark_from_spec
from nautilus.gate import compare_specs, compile_adapter
from nautilus.registry import RegistryStore, lookup, seed_demo_registry
from nautilus.smoke import run_ladder

store = seed_demo_registry(tempfile.mkdtemp())
policy = lookup(store.snapshot(), "pi0-mock", kind="policy").entry.spec
bench_entry = lookup(store.snapshot(), "libero-mock", kind="benchmark").entry

# The gate sorts every pairing into one of three buckets. Native means
# run as-is; compatible_zero_shot means run through a compiled adapter;
# incompatible_action means do not run, with the blocking reasons named.
report = compare_specs(policy, bench_entry.spec)
print(f"bucket: {report.bucket}")
for app in report.plan.applications:
    print(f"  plan: {app.to_text()}")

# A pi0-style policy wants CHW float images and chunked actions; the
# benchmark serves HWC uint8 and steps one action at a time. The
# compiled pair closes exactly that gap, nothing more.
adapter = compile_adapter(report.plan, policy, bench_entry.spec)

env = benchmark_from_spec(bench_entry.spec, episode_length=10, success_threshold=5.0)
obs = env.reset(seed=0)
fed = adapter.obs_transform(obs)
img = fed["image"].to_numpy()
print(f"adapted image: dtype={img.dtype}, shape={img.shape}, max={img.max():.4f}")

# Action-side adaptation for this pairing is chunking, and chunking is
# the broker's job, not the transform's. The plan says what to build:
print(f"broker params (horizon, execute): {report.plan.chunk_params()}")

# The smoke ladder answers "is this benchmark healthy enough to trust
# a result from" in tier order: construction and shapes first, then
# reward signal, then the learning stage that matches the regime.
outcome = run_ladder(env, spec=bench_entry.spec, seed=0)
print()
print(outcome.to_text())
print(f"ladder passed: {outcome.passed}")

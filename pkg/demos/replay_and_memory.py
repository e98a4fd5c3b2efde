"""
Paced replay and operator memory
================================

A trial can be replayed against the wall clock at any rate without
changing a single output value. Across trials, each operator's
long-term trust coefficient is kept in a small JSON profile store.
"""

# %%
from pathlib import Path
import tempfile
import time

from attune import ARCHETYPES, default_task, estimate_trial, generate_trial
from attune.memory import ProfileStore
from attune.telemetry import Paced
from attune.traces import trace_csv

task = default_task()
meta, records = generate_trial(task, ARCHETYPES["Average"], seed=5)
short = records[:300]  # 30 s of telemetry

start = time.perf_counter()
fast, _ = estimate_trial(short, task)
unpaced_s = time.perf_counter() - start

start = time.perf_counter()
paced, _ = estimate_trial(short, task, pacing=Paced(20.0))
paced_s = time.perf_counter() - start
print(f"unpaced {unpaced_s:.3f} s, paced x20 {paced_s:.3f} s, identical: {trace_csv(fast) == trace_csv(paced)}")

# %%
# Reputation: one careless operator over five runs. Each finalized run
# scales the long-term coefficient by (1 + net incident sum).
store = ProfileStore(Path(tempfile.mkdtemp(prefix="attune-profiles-")))
for seed in range(5):
    meta, records = generate_trial(task, ARCHETYPES["BelowAverage"], seed, operator_id="rookie")
    _, engine = estimate_trial(records, task)
    profile = store.finalize("rookie", engine.summary(meta.trial_id))
    print(f"run {seed}: net={engine.net_incident_sum:+.3f}  ltcf={profile.ltcf:.3f}")

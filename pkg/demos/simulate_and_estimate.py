"""
Simulating a trial and estimating trust
=======================================

Generate one synthetic trial per operator archetype, write it to disk,
read it back and run the streaming trust engine over it.
"""

# %%
from pathlib import Path
import tempfile

from attune import ARCHETYPES, default_task, estimate_trial, generate_trial, read_trial, write_trial
from attune.traces import write_trace_svg

out = Path(tempfile.mkdtemp(prefix="attune-demo-"))
task = default_task()
print(f"arena {task.arena}, goals {task.goal_ids()}")

# %%
# One trial per archetype. The trial file is a JSON header plus one CSV
# line per 10 Hz record.
paths = {}
for name, arch in ARCHETYPES.items():
    meta, records = generate_trial(task, arch, seed=11)
    paths[name] = write_trial(meta, task, records, out / f"{name}.trial")
    print(f"{name:13s} {len(records):5d} records, {records[-1].t:6.1f} s")

# %%
# Estimation replays the file record by record. Samples only exist while
# the operator is teleoperating, so the idle prefix contributes nothing.
for name, path in paths.items():
    meta, task_read, stream = read_trial(path)
    samples, engine = estimate_trial(stream, task_read)
    svg = write_trace_svg(samples, out / f"{name}.svg", title=name)
    print(f"{name:13s} first sample t={samples[0].t:5.1f}  mean={engine.mean_trust:.3f}  "
          f"stcf={engine.state.stcf:+.3f}  incidents={dict(engine.incidents)}")

print(f"traces in {out}")

"""
Ranking a cohort of operators
=============================

Six operators, two per archetype, are ranked twice: by mean trust and by
task capability (collisions, then missed goals, then time). Kendall tau-b
scores how well the two orderings agree.
"""

# %%
import statistics

from attune import build_report, default_task, evaluate_trial, generate_cohort
from attune.simulator import cohort_seed_sets

task = default_task()
results = [evaluate_trial(meta, task, records) for meta, records in generate_cohort(task)]
rep = build_report(results)
print(rep.to_csv())
print(f"tau_b = {rep.agreement:.4f}")

# %%
# The fixture seeds are one draw. Repeating the experiment with fresh
# seed sets shows the spread of the agreement score.
taus = []
for seeds in cohort_seed_sets(20):
    cohort = [evaluate_trial(m, task, r) for m, r in generate_cohort(task, seeds)]
    taus.append(build_report(cohort).agreement)
print("tau_b over 20 seed sets:", " ".join(f"{t:.2f}" for t in taus))
print(f"median {statistics.median(taus):.4f}")

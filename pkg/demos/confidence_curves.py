"""
Confidence curves and fused trust
=================================

Each telemetry signal is squashed into a confidence in [0, 1] by a
logistic curve. This script tabulates the three curves and then shows how
the attention gate changes the fused trust.
"""

# %%
# The three default curves
import numpy as np

from attune import ATTENTION, INTENT, PERFORMANCE, ConfidenceVector, fuse, logistic

yaw = np.arange(0, 41, 4)
print("head yaw (deg)  conf_h")
for ha in yaw:
    print(f"{ha:14.0f}  {logistic(float(ha), ATTENTION):.4f}")

# %%
# Intent rises with the posterior on the next goal; performance falls
# as the motion error grows. Both cross 0.5 at the midpoint.
grid = np.linspace(0, 1, 11)
print("  x    conf_i  conf_e")
for x in grid:
    print(f"{x:4.1f}  {logistic(float(x), INTENT):.4f}  {logistic(float(x), PERFORMANCE):.4f}")

# %%
# Fusion: the same confidences weighted differently once the operator
# looks away from the screen.
cv = ConfidenceVector(0.9, 0.8, 0.7)
for ha in (10.0, 17.0, 17.5, 25.0):
    print(f"ha={ha:5.1f}  trust={fuse(cv, ha):.3f}")

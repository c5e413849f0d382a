"""
Checking the Monte Carlo average against exact enumeration
==========================================================

On a finite parameter grid the Gibbs average is a finite sum, so the Monte
Carlo estimate can be compared with the true value.  The standard error falls
like ``1 / sqrt(n)``.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from gibbsnet import Architecture, ArchitecturePool, ParamDistribution, RunConfig, TrainingSet
from gibbsnet.ensemble import convergence_curve
from gibbsnet.oracle import GridSpec, exact_average

# %%
grid = (-1.0, -0.5, 0.0, 0.5, 1.0)
neuron = Architecture("neuron", 2, [1])
ts = TrainingSet([[0.2, 0.1], [0.8, 0.4], [-0.5, 0.7], [0.6, -0.9], [-0.3, -0.6], [0.9, 0.9]],
                 [0, 1, 0, 1, 0, 1])
probes = np.array([[0.0, 0.0], [0.5, 0.5], [-0.7, 0.2], [0.3, -0.4], [1.0, -1.0]])

exact = exact_average(GridSpec(neuron, grid), ts, beta=1.0, k_c=0.0, x=probes)
print("exact values:", np.round(exact, 6))

# %%
cfg = RunConfig("gibbs", 1, ArchitecturePool.single(neuron), beta=1.0,
                distribution=ParamDistribution.grid(grid), master_seed=0)
schedule = [250, 1000, 4000, 16000, 64000]
rows = np.array(convergence_curve(ts, cfg, schedule, probes))

fig, ax = plt.subplots(1, 2, figsize=(11, 4))
for j in range(len(probes)):
    r = rows[rows[:, 1] == j]
    ax[0].errorbar(r[:, 0], r[:, 2] - exact[j], yerr=3 * r[:, 3], capsize=3, label=f"probe {j}")
    ax[1].loglog(r[:, 0], r[:, 3], marker="o")
ax[1].loglog(schedule, 0.5 / np.sqrt(schedule), "k--", label="1/sqrt(n)")
ax[0].axhline(0, color="k", lw=0.5)
ax[0].set_xscale("log")
ax[0].set_title("MC - exact, with 3 SE bars")
ax[1].set_title("standard error")
ax[0].legend()
ax[1].legend()
plt.show()

# %%
last = rows[rows[:, 0] == schedule[-1]]
z = (last[:, 2] - exact) / last[:, 3]
print("z-scores at n =", schedule[-1], np.round(z, 2))

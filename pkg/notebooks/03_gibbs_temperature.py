"""
Gibbs weights, temperature and architecture mixing
==================================================

Instead of rejecting networks with errors, weight every sampled network by
``exp(-beta * (errors + k))`` where ``k`` is the neuron count of its
architecture.  Raising ``beta`` moves the weight onto networks that make few
errors with few neurons.
"""

# %%
import math

import matplotlib.pyplot as plt
import numpy as np

from gibbsnet import Architecture, ArchitecturePool, RunConfig, build
from gibbsnet.data import holdout_split, TrainingSet
from gibbsnet.ensemble import accuracy, architecture_mass, mean_energy, reweight
from gibbsnet.oracle import GridSpec, exact_architecture_mass

# %%
rng = np.random.default_rng(3)
X = rng.uniform(-1, 1, size=(80, 2))
y = (X[:, 0] - X[:, 1] >= 0.1).astype(int)
flip = rng.random(80) < 0.05          # a little label noise
full = TrainingSet(X, np.where(flip, 1 - y, y))
test, train = holdout_split(full, 0.25, seed=0)

pool = ArchitecturePool.from_architectures(
    [Architecture("neuron", 2, [1]), Architecture("k2", 2, [2, 1]), Architecture("k4", 2, [4, 1])]
)
print("complexities:", pool.complexities)

base = build(train, RunConfig("mixed_arch", 50_000, pool, beta=0.0, master_seed=2))

# %%
# One sampled member set, reweighted at each temperature.
betas = [0, 0.25, 0.5, 1, 2, 4, 8, math.inf]
rows = []
for b in betas:
    e = reweight(base, b)
    m = architecture_mass(e)
    rows.append((b, accuracy(e, train), accuracy(e, test), mean_energy(e), m))
    print(f"beta={b:>5}: train {rows[-1][1]:.2f}  test {rows[-1][2]:.2f}  "
          f"<E> {rows[-1][3]:6.2f}  mass " + " ".join(f"{k}={v:.2f}" for k, v in m.items()))

# %%
fig, ax = plt.subplots(figsize=(6, 4))
finite = [r for r in rows if math.isfinite(r[0])]
for arch_id in ("neuron", "k2", "k4"):
    ax.plot([r[0] for r in finite], [r[4][arch_id] for r in finite], marker="o", label=arch_id)
ax.set_xscale("symlog", linthresh=0.25)
ax.set_xlabel("beta")
ax.set_ylabel("Gibbs weight mass")
ax.legend()
plt.show()

# %%
# The same masses can be computed exactly on a parameter grid.
grid = (-1.0, 0.0, 1.0)
small = TrainingSet([[0.2, 0.1], [0.8, 0.4], [-0.5, 0.7], [0.6, -0.9]], [0, 1, 0, 1])
specs = [(GridSpec(Architecture("neuron", 2, [1]), grid), 1.0),
         (GridSpec(Architecture("k2", 2, [2, 1]), grid), 3.0)]
for b in (0.0, 1.0, 10.0):
    print(b, exact_architecture_mass(specs, [0.5, 0.5], small, b))

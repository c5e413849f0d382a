"""
Averaging error-free random networks
====================================

Keep only the randomly drawn networks that classify every training point
correctly and average them.  The average reproduces the training labels
exactly and takes intermediate values away from the data.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from gibbsnet import (
    AcceptanceTooLow,
    Architecture,
    ArchitecturePool,
    RunConfig,
    TrainingSet,
    build,
)
from gibbsnet.ensemble import accuracy, evaluate_many

# %%
# Points in the square labelled by a slanted half-plane.
rng = np.random.default_rng(0)
X = rng.uniform(-1, 1, size=(50, 2))
ts = TrainingSet(X, (X[:, 0] + 0.5 * X[:, 1] >= 0.2).astype(int))

neuron = Architecture("neuron", 2, [1])
cfg = RunConfig("zero_error", n=300, pool=ArchitecturePool.single(neuron), master_seed=1)
ens = build(ts, cfg)
print(f"kept {len(ens)} networks, acceptance rate {ens.acceptance_rate:.2e}")

value, se = evaluate_many(ens, ts.X)
print("labels reproduced exactly:", np.array_equal(value, ts.y))

# %%
g = np.linspace(-1.5, 1.5, 200)
G = np.array(np.meshgrid(g, g, indexing="xy")).reshape(2, -1).T
v, s = evaluate_many(ens, G)
fig, ax = plt.subplots(1, 2, figsize=(10, 4))
im = ax[0].imshow(v.reshape(200, 200), origin="lower", extent=(-1.5, 1.5, -1.5, 1.5), cmap="RdBu_r")
ax[0].scatter(*ts.X.T, c=ts.y, cmap="RdBu_r", edgecolors="k")
ax[0].set_title("ensemble average")
fig.colorbar(im, ax=ax[0])
im = ax[1].imshow(s.reshape(200, 200), origin="lower", extent=(-1.5, 1.5, -1.5, 1.5))
ax[1].set_title("Monte Carlo standard error")
fig.colorbar(im, ax=ax[1])
plt.show()

# %%
# XOR cannot be solved by one neuron, so rejection never accepts anything.
xor = TrainingSet([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 1, 1, 0])
try:
    build(xor, RunConfig("zero_error", 1, ArchitecturePool.single(neuron), max_attempts=10**6))
except AcceptanceTooLow as exc:
    print("single neuron:", exc)

# Two hidden neurons are enough.
double = Architecture("double", 2, [2, 1])
ens = build(xor, RunConfig("zero_error", 200, ArchitecturePool.single(double)))
print(f"double layer: rate {ens.acceptance_rate:.2e}, training accuracy {accuracy(ens, xor):.0%}")
v, _ = evaluate_many(ens, [[0.5, 0.5], [0.5, 0.0], [2.0, 2.0]])
print("values off the training set:", np.round(v, 3))

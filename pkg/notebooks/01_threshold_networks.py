"""
Random threshold networks
=========================

A double-layer network of threshold neurons is the indicator of a union of
cells of a hyperplane arrangement.  Here we draw a few random networks and look
at the regions they switch on.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from gibbsnet import Architecture, ParamDistribution, SeedSpec, eval_neuron
from gibbsnet.network import layer_outputs
from gibbsnet.sampling import sample_params

# %%
# A single neuron fires on a closed half-space; the boundary itself counts as "on".
print(eval_neuron([1.0, 1.0], 1.0, [0.5, 0.5]))   # on the line -> 1
print(eval_neuron([1.0, 1.0], 1.0, [0.5, 0.49]))  # just below -> 0

# %%
# Three hidden neurons, one output neuron, standard normal weights.
arch = Architecture("k3", input_dim=2, layers=[3, 1])
dist = ParamDistribution.normal()

g = np.linspace(-3, 3, 300)
X = np.array(np.meshgrid(g, g, indexing="xy")).reshape(2, -1).T

fig, axes = plt.subplots(1, 4, figsize=(14, 3.5))
for ax, i in zip(axes, range(4)):
    p = sample_params(arch, dist, SeedSpec(master_seed=0, sample_index=i))
    hidden, out = layer_outputs(arch, p.flat()[None, :], X)
    ax.imshow(out[0, :, 0].reshape(300, 300), origin="lower", extent=(-3, 3, -3, 3),
              cmap="Greys", vmin=0, vmax=1)
    # first-layer hyperplanes w . x = theta
    for w, t in zip(p.weights[0], p.thresholds[0]):
        if abs(w[1]) > 1e-9:
            ax.plot(g, (t - w[0] * g) / w[1], lw=0.8)
    ax.set_xlim(-3, 3)
    ax.set_ylim(-3, 3)
    ax.set_title(f"sample {i}")
fig.suptitle("output = 1 (dark) on a union of arrangement cells")
plt.show()

# %%
# Every realised hidden code is one cell; the output layer decides which codes
# are switched on.
hidden_codes = np.unique(hidden[0].astype(int), axis=0)
print("hidden codes realised on the grid:\n", hidden_codes)

"""Sanity-check the analytic backward pass against finite differences.

Builds a couple of small sigmoid networks, fills them with random weights,
and compares every component of the analytic gradient with a central
finite-difference estimate.
"""

import numpy as np

from gols import Network

rng = np.random.default_rng(0)

for hidden in ([3], [4, 3]):
    net = Network(4, hidden, 3)
    params = rng.uniform(-0.5, 0.5, net.num_params)
    inputs = rng.normal(size=(8, 4))
    targets = np.eye(3)[rng.integers(0, 3, size=8)]

    analytic = net.gradient(params, inputs, targets)

    h = 1e-6
    numeric = np.empty_like(params)
    for i in range(params.size):
        hi, lo = params.copy(), params.copy()
        hi[i] += h
        lo[i] -= h
        numeric[i] = (net.loss(hi, inputs, targets) - net.loss(lo, inputs, targets)) / (2 * h)

    worst = np.max(np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1.0))
    print(f"{net}: {net.num_params} parameters, worst relative gradient error {worst:.3e}")

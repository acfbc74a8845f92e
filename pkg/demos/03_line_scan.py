"""Scan a fixed descent direction under different batch sizes.

Reproduces the line-scan experiment on the bundled iris data: freeze a
starting point and a descent direction whose deterministic minimizer sits at
alpha = 2.5, then walk a 0.1-step grid many times with fresh mini-batches
per node.  Sub-sampling the loss scatters spurious local minima over the
whole range, while the slope sign changes stay clustered near the true
minimizer, tighter for bigger batches.
"""

import warnings

import numpy as np

from gols import (
    BatchObjective,
    BatchSampler,
    DirectionalProbe,
    Network,
    builtin_dataset,
    estimate_ball,
    scaled_descent_direction,
    scan_line,
    split_3_1_1,
)

REPEATS = 50

ds = builtin_dataset("iris")
split = split_3_1_1(ds, seed=(0, 9))
net = Network(ds.num_features, [3], ds.class_count)
model = BatchObjective(net, ds.features[split.train], ds.one_hot()[split.train])
origin = net.init_params((0, 101, 0))
direction = scaled_descent_direction(model, origin, target_alpha=2.5)
rows = len(split.train)

print(f"{'batch':>6s} {'minima':>14s} {'sign changes':>14s} {'ball center':>12s} "
      f"{'ball eps':>9s}")
for size in (1, 10, 30, "full"):
    scans = []
    for rep in range(REPEATS):
        if size == "full":
            probe = DirectionalProbe(model, origin, direction, policy="full")
        else:
            sampler = BatchSampler(np.arange(rows), size, seed=(0, 303, size, rep))
            probe = DirectionalProbe(model, origin, direction,
                                     policy="resample", sampler=sampler)
        scans.append(scan_line(probe, batch_size=rows if size == "full" else size))
    minima = np.array([len(s.minima_alphas) for s in scans], float)
    changes = np.array([len(s.snngpp_alphas) for s in scans], float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        ball = estimate_ball(scans)
    print(f"{size!s:>6s} {minima.mean():7.2f} ± {minima.std():4.2f} "
          f"{changes.mean():7.2f} ± {changes.std():4.2f} {ball.center:12.3f} "
          f"{ball.epsilon:9.3f}")

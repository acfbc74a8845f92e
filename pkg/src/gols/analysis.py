"""Line scans along a frozen descent direction: minima, slope sign changes,
and the spread of the sign-change locations.

A scan walks a uniform step-size grid, recording the loss and the directional
derivative at every node under the probe's sampling policy (one fresh sample
per node when resampling).  Local minima are strict interior dips of the loss
samples; slope sign changes are counted between adjacent nodes where the
derivative turns from negative to non-negative, which is where a sub-sampled
descent direction bottoms out regardless of how noisy the loss values are.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from gols.linesearch import bisection_gols
from gols.probe import DirectionalProbe

__all__ = [
    "ScanResult",
    "BallEstimate",
    "scan_line",
    "count_local_minima",
    "count_snngpp",
    "estimate_ball",
    "write_scan_csv",
    "scaled_descent_direction",
]


@dataclass(eq=False)
class ScanResult:
    """Samples of F and F' on a strictly increasing step-size grid."""

    alphas: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    batch_size: int = 0
    minima_alphas: np.ndarray = field(default=None)
    snngpp_alphas: np.ndarray = field(default=None)

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.slopes = np.asarray(self.slopes, dtype=float)
        if not (len(self.alphas) == len(self.values) == len(self.slopes)):
            raise ValueError("grid, values, and slopes must have equal length")
        if np.any(np.diff(self.alphas) <= 0):
            raise ValueError("step-size grid must be strictly increasing")
        if self.minima_alphas is None:
            self.minima_alphas = _strict_minima(self.alphas, self.values)
        if self.snngpp_alphas is None:
            self.snngpp_alphas = _sign_changes(self.alphas, self.slopes)


@dataclass
class BallEstimate:
    """Half-width of the interval holding every detected sign change,
    centered on their mean location."""

    center: float
    epsilon: float


def scan_line(probe: DirectionalProbe, alpha_start=0.0, step=0.1, steps=100,
              batch_size=0) -> ScanResult:
    """Evaluate F and F' on ``steps + 1`` equally spaced nodes.

    Each node spends one loss and one gradient evaluation sharing a single
    sample draw, so a resampling probe sees one fresh batch per node.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    alphas = alpha_start + step * np.arange(steps + 1)
    values = np.empty_like(alphas)
    slopes = np.empty_like(alphas)
    for i, alpha in enumerate(alphas):
        values[i], slopes[i] = probe.value_and_deriv(alpha)
    return ScanResult(alphas, values, slopes, batch_size=batch_size)


def count_local_minima(scan: ScanResult):
    """Strict interior minima of the sampled loss: count and locations."""
    if len(scan.alphas) < 3:
        raise ValueError("need at least 3 grid nodes to detect minima")
    return len(scan.minima_alphas), scan.minima_alphas


def count_snngpp(scan: ScanResult):
    """Negative-to-non-negative slope transitions: count and interval
    midpoints."""
    if len(scan.alphas) < 2:
        raise ValueError("need at least 2 grid nodes to detect sign changes")
    return len(scan.snngpp_alphas), scan.snngpp_alphas


def estimate_ball(scans) -> BallEstimate:
    """Spread of detected sign-change locations across repeated scans.

    Scans without any detection are excluded with a warning; at least one
    scan must contribute.
    """
    locations = []
    for scan in scans:
        if len(scan.snngpp_alphas) == 0:
            warnings.warn("scan detected no slope sign change; excluded",
                          stacklevel=2)
            continue
        locations.append(scan.snngpp_alphas)
    if not locations:
        raise ValueError("no scan detected any slope sign change")
    points = np.concatenate(locations)
    center = float(points.mean())
    return BallEstimate(center=center, epsilon=float(np.max(np.abs(points - center))))


def write_scan_csv(path, scans) -> None:
    """Write repeated scans as rows of (alpha, f, fprime, batch_size,
    repeat_id)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "f", "fprime", "batch_size", "repeat_id"])
        for repeat_id, scan in enumerate(scans):
            for alpha, f, fp in zip(scan.alphas, scan.values, scan.slopes):
                writer.writerow([repr(float(alpha)), repr(float(f)),
                                 repr(float(fp)), scan.batch_size, repeat_id])


def scaled_descent_direction(model, origin, target_alpha=2.5, cap=1e7):
    """Steepest-descent direction rescaled so that the deterministic
    minimizer along it falls at ``target_alpha``.

    Resolves the sign change of the full-sample slope along ``-grad`` and
    scales the direction so repeated stochastic scans of a fixed grid have
    their reference solution at a known interior location.
    """
    g = model.grad(origin, None)
    gnorm = float(np.linalg.norm(g))
    if gnorm == 0.0:
        raise ValueError("gradient vanishes at the origin; no descent direction")
    probe = DirectionalProbe(model, origin, -g, policy="full")
    out = bisection_gols(probe, alpha_max=cap)
    if not 0 < out.alpha < cap:
        raise ValueError("no interior minimizer along the descent direction")
    return -g * (out.alpha / target_alpha)


def _strict_minima(alphas, values):
    v = values
    inner = (v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])
    return alphas[1:-1][inner]


def _sign_changes(alphas, slopes):
    neg_then_nonneg = (slopes[:-1] < 0) & (slopes[1:] >= 0)
    return 0.5 * (alphas[:-1] + alphas[1:])[neg_then_nonneg]

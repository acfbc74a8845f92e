import numpy as np
import pytest

from gols.probe import DirectionalProbe, SyntheticObjective


def make_1d_probe(func, grad, **probe_kwargs):
    """Probe with origin 0 and direction +1, so F(alpha) = func(alpha)."""
    model = SyntheticObjective(
        func=lambda x: float(func(x[0])),
        grad_func=lambda x: np.array([grad(x[0])]),
    )
    probe_kwargs.setdefault("policy", "full")
    return DirectionalProbe(model, np.zeros(1), np.ones(1), **probe_kwargs)


def make_quadratic_probe(distance=1.0):
    """Steepest-descent probe on 0.5*||x - c||^2 with ||x0 - c|| = distance.

    Closed forms: F(alpha) = 0.5 * distance**2 * (1 - alpha)**2 and
    F'(alpha) = distance**2 * (alpha - 1); the minimizer is alpha = 1.
    """
    center = np.array([0.6, 0.8]) * distance
    model = SyntheticObjective(
        func=lambda x: 0.5 * float(np.sum((x - center) ** 2)),
        grad_func=lambda x: x - center,
    )
    x0 = np.zeros(2)
    return DirectionalProbe(model, x0, -model.grad(x0), policy="full")


@pytest.fixture
def quadratic_probe():
    return make_quadratic_probe()

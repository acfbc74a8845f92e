"""Sigmoid multilayer perceptrons with mean squared classification error.

Networks have one or two fully connected hidden layers and logistic
activations on every node, hidden and output alike.  All operations are pure
functions of a flat parameter vector: a ``Network`` instance carries only the
architecture, never weights, so it can be shared freely across threads.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Network", "sigmoid"]

# Clamp bounds that keep activations strictly inside the open interval (0, 1)
# even when a pre-activation saturates in float64.
_SIG_LO = np.nextafter(0.0, 1.0)
_SIG_HI = np.nextafter(1.0, 0.0)


def sigmoid(z):
    """Numerically stable logistic function; never returns exactly 0 or 1."""
    z = np.asarray(z, dtype=float)
    t = np.exp(-np.abs(z))  # exponent <= 0, cannot overflow
    out = np.where(z >= 0.0, 1.0 / (1.0 + t), t / (1.0 + t))
    return np.clip(out, _SIG_LO, _SIG_HI)


class Network:
    """Fully connected sigmoid MLP with mean squared classification loss.

    The weight matrix of layer ``c`` has shape ``(fan_out, fan_in + 1)``;
    column 0 is the bias weight, fed by a constant 1 input.  Flat parameter
    vectors are laid out layer-major, row-major within each layer (C order).
    This ordering is frozen: :meth:`pack` and :meth:`unpack` are exact
    inverses.

    The batch loss is ``100 / (K * P) * sum((prediction - target)**2)`` over
    ``P`` rows and ``K`` output nodes.
    """

    def __init__(self, input_dim: int, hidden_dims, output_dim: int):
        hidden = tuple(int(m) for m in np.atleast_1d(hidden_dims))
        if not 1 <= len(hidden) <= 2:
            raise ValueError("hidden_dims must list one or two layer widths")
        dims = (int(input_dim),) + hidden + (int(output_dim),)
        if min(dims) < 1:
            raise ValueError("all layer widths must be positive")
        self.input_dim = dims[0]
        self.hidden_dims = hidden
        self.output_dim = dims[-1]
        self.weight_shapes = tuple(
            (dims[c + 1], dims[c] + 1) for c in range(len(dims) - 1)
        )
        self.num_params = sum(rows * cols for rows, cols in self.weight_shapes)

    def __repr__(self):
        dims = (self.input_dim,) + self.hidden_dims + (self.output_dim,)
        return f"Network({'-'.join(str(d) for d in dims)})"

    # -- parameter layout ---------------------------------------------------

    def init_params(self, seed) -> np.ndarray:
        """Uniform draws in [-0.1, 0.1] for every weight, biases included."""
        rng = np.random.default_rng(seed)
        return rng.uniform(-0.1, 0.1, size=self.num_params)

    def unpack(self, params: np.ndarray) -> list[np.ndarray]:
        """Views of the flat vector as per-layer weight matrices."""
        params = self._check_params(params)
        mats, start = [], 0
        for rows, cols in self.weight_shapes:
            stop = start + rows * cols
            mats.append(params[start:stop].reshape(rows, cols))
            start = stop
        return mats

    def pack(self, matrices) -> np.ndarray:
        """Flatten per-layer weight matrices back into a parameter vector."""
        mats = list(matrices)
        if len(mats) != len(self.weight_shapes):
            raise ValueError("wrong number of weight matrices")
        for mat, shape in zip(mats, self.weight_shapes):
            if np.shape(mat) != shape:
                raise ValueError(f"weight matrix shape {np.shape(mat)} != {shape}")
        return np.concatenate([np.ravel(m) for m in mats]).astype(float)

    # -- evaluation ---------------------------------------------------------

    def forward(self, params: np.ndarray, inputs: np.ndarray) -> np.ndarray:
        """Predictions for a batch, one row per sample, entries in (0, 1)."""
        inputs = self._check_inputs(inputs)
        a = inputs
        for w in self.unpack(params):
            a = sigmoid(a @ w[:, 1:].T + w[:, 0])
        return a

    def loss(self, params: np.ndarray, inputs: np.ndarray, targets: np.ndarray) -> float:
        inputs, targets = self._check_batch(inputs, targets)
        r = self.forward(params, inputs) - targets
        p, k = targets.shape
        return float(100.0 / (k * p) * np.sum(r * r))

    def gradient(self, params: np.ndarray, inputs: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """Analytic gradient of :meth:`loss`, flattened in pack order."""
        inputs, targets = self._check_batch(inputs, targets)
        mats = self.unpack(params)
        acts = [inputs]
        for w in mats:
            acts.append(sigmoid(acts[-1] @ w[:, 1:].T + w[:, 0]))
        p, k = targets.shape
        upstream = (200.0 / (k * p)) * (acts[-1] - targets)
        grads = [np.empty(shape) for shape in self.weight_shapes]
        for c in range(len(mats) - 1, -1, -1):
            a = acts[c + 1]
            delta = upstream * a * (1.0 - a)
            grads[c][:, 0] = delta.sum(axis=0)
            grads[c][:, 1:] = delta.T @ acts[c]
            upstream = delta @ mats[c][:, 1:]
        return self.pack(grads)

    # -- validation ---------------------------------------------------------

    def _check_params(self, params):
        params = np.asarray(params, dtype=float)
        if params.shape != (self.num_params,):
            raise ValueError(
                f"parameter vector has shape {params.shape}, "
                f"expected ({self.num_params},)"
            )
        return params

    def _check_inputs(self, inputs):
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim != 2 or inputs.shape[1] != self.input_dim:
            raise ValueError(
                f"inputs have shape {inputs.shape}, expected (P, {self.input_dim})"
            )
        return inputs

    def _check_batch(self, inputs, targets):
        inputs = self._check_inputs(inputs)
        targets = np.asarray(targets, dtype=float)
        if targets.ndim != 2 or targets.shape[1] != self.output_dim:
            raise ValueError(
                f"targets have shape {targets.shape}, expected (P, {self.output_dim})"
            )
        if targets.shape[0] != inputs.shape[0]:
            raise ValueError("inputs and targets disagree on batch size")
        if inputs.shape[0] < 1:
            raise ValueError("batch must contain at least one sample")
        return inputs, targets

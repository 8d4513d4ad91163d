"""Deterministic training loop and finite-difference gradient checking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigError, NonFiniteLoss

__all__ = ["TrainConfig", "train", "grad_check"]


@dataclass
class TrainConfig:
    """Training hyperparameters.

    Everything that affects the run (shuffle order, updates) is a pure
    function of the data, the model's initial parameters, and ``seed``,
    so repeated runs are bit-identical.
    """

    seed: int = 0
    learning_rate: float = 0.05
    epochs: int = 100
    batch_size: int = 1
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float | None = None

    def validate(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be at least 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be at least 1, got {self.batch_size}")
        if self.optimizer not in ("sgd", "adam"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise ConfigError(f"clip_norm must be positive, got {self.clip_norm}")


class _Sgd:
    def __init__(self, config: TrainConfig):
        self.lr = config.learning_rate

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        for name, p in params.items():
            p -= self.lr * grads[name]


class _Adam:
    def __init__(self, config: TrainConfig):
        self.lr = config.learning_rate
        self.b1 = config.beta1
        self.b2 = config.beta2
        self.eps = config.eps
        self.t = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        for name, p in params.items():
            g = grads[name]
            m = self.m.setdefault(name, np.zeros_like(p))
            v = self.v.setdefault(name, np.zeros_like(p))
            m[...] = self.b1 * m + (1 - self.b1) * g
            v[...] = self.b2 * v + (1 - self.b2) * g * g
            m_hat = m / (1 - self.b1**self.t)
            v_hat = v / (1 - self.b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def _clip(grads: dict[str, np.ndarray], max_norm: float) -> None:
    total = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale


def train(model, examples: Sequence, config: TrainConfig) -> list[float]:
    """Fit ``model`` in place and return the per-epoch mean loss curve.

    The model contract: ``params()``/``grads()`` return aligned name to
    array dicts, ``zero_grads()`` clears the buffers, and
    ``loss_and_grads(example)`` returns the example loss while adding its
    gradient into the buffers.

    Raises:
        ConfigError: Bad hyperparameters or an empty dataset.
        NonFiniteLoss: An epoch's mean loss left the finite range.
    """
    config.validate()
    if not examples:
        raise ConfigError("training data is empty")
    rng = np.random.default_rng(config.seed)
    optimizer = _Adam(config) if config.optimizer == "adam" else _Sgd(config)
    params = model.params()
    curve: list[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(examples))
        total = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            model.zero_grads()
            for idx in batch:
                total += model.loss_and_grads(examples[int(idx)])
            grads = model.grads()
            if len(batch) > 1:
                for g in grads.values():
                    g /= len(batch)
            if config.clip_norm is not None:
                _clip(grads, config.clip_norm)
            optimizer.step(params, grads)
        mean = total / len(examples)
        if not math.isfinite(mean):
            raise NonFiniteLoss(epoch, mean)
        curve.append(mean)
    return curve


def grad_check(
    model,
    example,
    epsilon: float = 1e-5,
    max_coords: int = 200,
    seed: int = 0,
) -> float:
    """Compare analytic gradients with central differences.

    Perturbs up to ``max_coords`` randomly chosen parameter coordinates
    by +-epsilon and returns the worst relative error
    ``|ga - gn| / max(1e-8, |ga| + |gn|)``.
    """
    model.zero_grads()
    model.loss_and_grads(example)
    analytic = {name: g.copy() for name, g in model.grads().items()}
    params = model.params()
    coords: list[tuple[str, int]] = []
    for name, p in params.items():
        coords.extend((name, i) for i in range(p.size))
    if len(coords) > max_coords:
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[int(i)] for i in picked]
    worst = 0.0
    for name, flat in coords:
        p = params[name].reshape(-1)
        original = p[flat]
        p[flat] = original + epsilon
        loss_plus = model.loss(example)
        p[flat] = original - epsilon
        loss_minus = model.loss(example)
        p[flat] = original
        numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
        ga = float(analytic[name].reshape(-1)[flat])
        rel = abs(ga - numeric) / max(1e-8, abs(ga) + abs(numeric))
        worst = max(worst, rel)
    return worst

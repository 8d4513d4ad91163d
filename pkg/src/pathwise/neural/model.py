"""Model plumbing shared by the sequence classifiers."""

from __future__ import annotations

import numpy as np

from .layers import Dense, glorot_uniform, softmax

__all__ = ["LayeredModel", "LinearClassifier", "softmax_cross_entropy", "sigmoid_bce"]


def softmax_cross_entropy(logits: np.ndarray, target: int) -> tuple[float, np.ndarray]:
    """Cross entropy of a softmax over ``logits`` against one target index.

    Computed through log-sum-exp so large logits stay finite. Returns the
    loss and its gradient with respect to the logits.
    """
    m = float(np.max(logits))
    lse = m + float(np.log(np.sum(np.exp(logits - m))))
    loss = lse - float(logits[target])
    dlogits = np.exp(logits - lse)
    dlogits[target] -= 1.0
    return loss, dlogits


def sigmoid_bce(logits: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean binary cross entropy over independent sigmoid outputs.

    Uses the softplus form ``max(x, 0) - x*y + log(1 + exp(-|x|))`` for
    stability. Returns the loss and its gradient with respect to logits.
    """
    per = np.maximum(logits, 0.0) - logits * targets + np.log1p(np.exp(-np.abs(logits)))
    loss = float(per.mean())
    probs = 1.0 / (1.0 + np.exp(-np.clip(logits, -500, 500)))
    dlogits = (probs - targets) / logits.size
    return loss, dlogits


class LayeredModel:
    """Base for models built from named layers.

    Subclasses call :meth:`register` for each layer; parameter and
    gradient dictionaries are then exposed with ``layer.param`` keys in
    registration order, which keeps checkpoint layouts stable.
    """

    def __init__(self) -> None:
        self._layers: dict[str, object] = {}

    def register(self, name: str, layer) -> None:
        self._layers[name] = layer

    def params(self) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {}
        for lname, layer in self._layers.items():
            for pname, arr in layer.params().items():
                out[f"{lname}.{pname}"] = arr
        return out

    def grads(self) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {}
        for lname, layer in self._layers.items():
            for pname, arr in layer.grads().items():
                out[f"{lname}.{pname}"] = arr
        return out

    def zero_grads(self) -> None:
        for layer in self._layers.values():
            layer.zero_grads()

    def load_params(self, values: dict[str, np.ndarray]) -> None:
        own = self.params()
        for name, arr in values.items():
            if name not in own:
                raise KeyError(f"unknown parameter {name!r}")
            if own[name].shape != arr.shape:
                raise ValueError(
                    f"parameter {name!r} expects shape {own[name].shape}, got {arr.shape}"
                )
            own[name][...] = arr


class LinearClassifier(LayeredModel):
    """Softmax regression over fixed-size feature vectors.

    Examples are ``(features, label)`` pairs. Small, but enough to sanity
    check the training loop and gradients end to end.
    """

    kind = "linear"

    def __init__(self, in_dim: int, classes: int, seed: int = 0):
        super().__init__()
        self.in_dim = in_dim
        self.classes = classes
        rng = np.random.default_rng(seed)
        self.dense = Dense(rng, in_dim, classes)
        self.register("dense", self.dense)

    def logits(self, features: np.ndarray) -> np.ndarray:
        return self.dense.forward(features)

    def predict(self, features: np.ndarray) -> int:
        return int(np.argmax(self.logits(features)))

    def probabilities(self, features: np.ndarray) -> np.ndarray:
        return softmax(self.logits(features))

    def loss(self, example) -> float:
        features, label = example
        value, _ = softmax_cross_entropy(self.logits(features), label)
        return value

    def loss_and_grads(self, example) -> float:
        features, label = example
        logits = self.logits(features)
        value, dlogits = softmax_cross_entropy(logits, label)
        self.dense.backward(features, dlogits)
        return value

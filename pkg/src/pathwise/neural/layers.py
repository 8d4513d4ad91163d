"""Neural building blocks with explicit forward and backward passes.

Everything is float64 numpy. Layers own their parameters and matching
gradient buffers; ``backward`` accumulates into the buffers so a batch
can sum gradients before an optimizer step.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "glorot_uniform",
    "sigmoid",
    "softmax",
    "Dense",
    "GruCell",
    "BiGru",
    "AdditiveAttention",
    "gru_step",
    "attend",
]


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Uniform init in +-sqrt(6 / (fan_in + fan_out))."""
    if len(shape) == 1:
        fan_in, fan_out = shape[0], 1
    else:
        fan_out, fan_in = shape
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, shape)


def sigmoid(x: np.ndarray) -> np.ndarray:
    # piecewise form avoids overflow for large negative inputs
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - np.max(x)
    e = np.exp(shifted)
    return e / e.sum()


class Dense:
    """Affine map ``y = W x + b`` over a vector or a stack of vectors."""

    def __init__(self, rng: np.random.Generator, in_dim: int, out_dim: int):
        self.w = glorot_uniform(rng, (out_dim, in_dim))
        self.b = np.zeros(out_dim)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim == 1:
            return self.w @ x + self.b
        return x @ self.w.T + self.b

    def backward(self, x: np.ndarray, dy: np.ndarray) -> np.ndarray:
        if x.ndim == 1:
            self.dw += np.outer(dy, x)
            self.db += dy
            return self.w.T @ dy
        self.dw += dy.T @ x
        self.db += dy.sum(axis=0)
        return dy @ self.w

    def params(self) -> dict[str, np.ndarray]:
        return {"w": self.w, "b": self.b}

    def grads(self) -> dict[str, np.ndarray]:
        return {"w": self.dw, "b": self.db}

    def zero_grads(self) -> None:
        self.dw[:] = 0.0
        self.db[:] = 0.0


class GruCell:
    """Gated recurrent cell.

    Update gate z, reset gate r, candidate c:
        z = sigmoid(Wz x + Uz h + bz)
        r = sigmoid(Wr x + Ur h + br)
        c = tanh(Wc x + Uc (r * h) + bc)
        h' = (1 - z) * h + z * c
    """

    def __init__(self, rng: np.random.Generator, in_dim: int, hidden: int):
        self.hidden = hidden
        self.wz = glorot_uniform(rng, (hidden, in_dim))
        self.uz = glorot_uniform(rng, (hidden, hidden))
        self.bz = np.zeros(hidden)
        self.wr = glorot_uniform(rng, (hidden, in_dim))
        self.ur = glorot_uniform(rng, (hidden, hidden))
        self.br = np.zeros(hidden)
        self.wc = glorot_uniform(rng, (hidden, in_dim))
        self.uc = glorot_uniform(rng, (hidden, hidden))
        self.bc = np.zeros(hidden)
        self._zero_buffers()

    def _zero_buffers(self) -> None:
        for name in ("wz", "uz", "bz", "wr", "ur", "br", "wc", "uc", "bc"):
            setattr(self, "d" + name, np.zeros_like(getattr(self, name)))

    def step(self, x: np.ndarray, h_prev: np.ndarray):
        z = sigmoid(self.wz @ x + self.uz @ h_prev + self.bz)
        r = sigmoid(self.wr @ x + self.ur @ h_prev + self.br)
        c = np.tanh(self.wc @ x + self.uc @ (r * h_prev) + self.bc)
        h = (1.0 - z) * h_prev + z * c
        cache = (x, h_prev, z, r, c)
        return h, cache

    def step_back(self, cache, dh: np.ndarray):
        x, h_prev, z, r, c = cache
        dz = dh * (c - h_prev)
        dc = dh * z
        dh_prev = dh * (1.0 - z)

        dac = dc * (1.0 - c * c)
        self.dwc += np.outer(dac, x)
        self.duc += np.outer(dac, r * h_prev)
        self.dbc += dac
        drh = self.uc.T @ dac
        dr = drh * h_prev
        dh_prev += drh * r

        daz = dz * z * (1.0 - z)
        dar = dr * r * (1.0 - r)
        self.dwz += np.outer(daz, x)
        self.duz += np.outer(daz, h_prev)
        self.dbz += daz
        self.dwr += np.outer(dar, x)
        self.dur += np.outer(dar, h_prev)
        self.dbr += dar
        dh_prev += self.uz.T @ daz + self.ur.T @ dar

        dx = self.wz.T @ daz + self.wr.T @ dar + self.wc.T @ dac
        return dx, dh_prev

    def params(self) -> dict[str, np.ndarray]:
        return {
            name: getattr(self, name)
            for name in ("wz", "uz", "bz", "wr", "ur", "br", "wc", "uc", "bc")
        }

    def grads(self) -> dict[str, np.ndarray]:
        return {
            name: getattr(self, "d" + name)
            for name in ("wz", "uz", "bz", "wr", "ur", "br", "wc", "uc", "bc")
        }

    def zero_grads(self) -> None:
        self._zero_buffers()


class BiGru:
    """Bidirectional GRU encoder.

    ``forward`` maps a (T, in_dim) sequence to (T, 2 * hidden) states:
    forward-direction and backward-direction hidden states concatenated
    per position.
    """

    def __init__(self, rng: np.random.Generator, in_dim: int, hidden: int):
        self.hidden = hidden
        self.fwd = GruCell(rng, in_dim, hidden)
        self.bwd = GruCell(rng, in_dim, hidden)

    def forward(self, xs: np.ndarray):
        t_len = xs.shape[0]
        states = np.zeros((t_len, 2 * self.hidden))
        caches_f = []
        caches_b: list = [None] * t_len
        h = np.zeros(self.hidden)
        for t in range(t_len):
            h, cache = self.fwd.step(xs[t], h)
            states[t, : self.hidden] = h
            caches_f.append(cache)
        h = np.zeros(self.hidden)
        for t in range(t_len - 1, -1, -1):
            h, cache = self.bwd.step(xs[t], h)
            states[t, self.hidden :] = h
            caches_b[t] = cache
        return states, (caches_f, caches_b)

    def backward(self, caches, dstates: np.ndarray) -> np.ndarray:
        caches_f, caches_b = caches
        t_len = dstates.shape[0]
        dxs = np.zeros((t_len, caches_f[0][0].shape[0]))
        dh = np.zeros(self.hidden)
        for t in range(t_len - 1, -1, -1):
            dx, dh = self.fwd.step_back(caches_f[t], dstates[t, : self.hidden] + dh)
            dxs[t] += dx
        dh = np.zeros(self.hidden)
        for t in range(t_len):
            dx, dh = self.bwd.step_back(caches_b[t], dstates[t, self.hidden :] + dh)
            dxs[t] += dx
        return dxs

    def params(self) -> dict[str, np.ndarray]:
        out = {f"fwd.{k}": v for k, v in self.fwd.params().items()}
        out.update({f"bwd.{k}": v for k, v in self.bwd.params().items()})
        return out

    def grads(self) -> dict[str, np.ndarray]:
        out = {f"fwd.{k}": v for k, v in self.fwd.grads().items()}
        out.update({f"bwd.{k}": v for k, v in self.bwd.grads().items()})
        return out

    def zero_grads(self) -> None:
        self.fwd.zero_grads()
        self.bwd.zero_grads()


class AdditiveAttention:
    """Additive attention pooling a state sequence into one context vector.

    Scores ``e_t = v . tanh(W s_t + Wq q + b)`` (the query term only when a
    query dimension was configured), softmax over t, context is the
    weighted sum of states.
    """

    def __init__(
        self,
        rng: np.random.Generator,
        state_dim: int,
        attn_dim: int,
        query_dim: int | None = None,
    ):
        self.w = glorot_uniform(rng, (attn_dim, state_dim))
        self.b = np.zeros(attn_dim)
        self.v = glorot_uniform(rng, (attn_dim,))
        self.wq = glorot_uniform(rng, (attn_dim, query_dim)) if query_dim else None
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self.dv = np.zeros_like(self.v)
        self.dwq = np.zeros_like(self.wq) if self.wq is not None else None

    def forward(self, states: np.ndarray, query: np.ndarray | None = None):
        pre = states @ self.w.T + self.b
        if query is not None:
            if self.wq is None:
                raise ValueError("attention was built without a query projection")
            pre = pre + self.wq @ query
        act = np.tanh(pre)
        scores = act @ self.v
        weights = softmax(scores)
        context = weights @ states
        cache = (states, query, act, weights)
        return context, weights, cache

    def backward(self, cache, dcontext: np.ndarray):
        states, query, act, weights = cache
        dstates = np.outer(weights, dcontext)
        dweights = states @ dcontext
        # softmax jacobian applied to the score gradient
        dscores = weights * (dweights - float(weights @ dweights))
        self.dv += act.T @ dscores
        dact = np.outer(dscores, self.v)
        dpre = dact * (1.0 - act * act)
        self.dw += dpre.T @ states
        self.db += dpre.sum(axis=0)
        dstates += dpre @ self.w
        dquery = None
        if query is not None:
            total = dpre.sum(axis=0)
            self.dwq += np.outer(total, query)
            dquery = self.wq.T @ total
        return dstates, dquery

    def params(self) -> dict[str, np.ndarray]:
        out = {"w": self.w, "b": self.b, "v": self.v}
        if self.wq is not None:
            out["wq"] = self.wq
        return out

    def grads(self) -> dict[str, np.ndarray]:
        out = {"w": self.dw, "b": self.db, "v": self.dv}
        if self.dwq is not None:
            out["wq"] = self.dwq
        return out

    def zero_grads(self) -> None:
        self.dw[:] = 0.0
        self.db[:] = 0.0
        self.dv[:] = 0.0
        if self.dwq is not None:
            self.dwq[:] = 0.0


def gru_step(cell: GruCell, x: np.ndarray, h_prev: np.ndarray) -> np.ndarray:
    """One recurrent step without bookkeeping, for inspection and tests."""
    h, _ = cell.step(x, h_prev)
    return h


def attend(
    attn: AdditiveAttention, states: np.ndarray, query: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Attention pooling without bookkeeping: (context, weights)."""
    context, weights, _ = attn.forward(states, query)
    return context, weights

"""Small fully-connected networks with hand-written backprop and Adam.

A model is an optional *encoder* MLP applied to the context vector (the
encoded neighbors), whose output is concatenated with the query encoding and
fed to a *head* MLP. Hidden layers use ReLU. The head ends in either

* a 2-way softmax over the output value (committee form), or
* a single sigmoid unit scoring a candidate (x, y) pair (anticipation form).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import ReprselError

MODEL_VERSION = 1
INIT_SCALE = 0.05


class ShapeMismatch(ReprselError, ValueError):
    pass


class DivergedLoss(ReprselError, FloatingPointError):
    pass


@dataclass
class NeuralModel:
    arch: str
    form: str  # "committee" | "anticipation"
    encoder: list[tuple[np.ndarray, np.ndarray]]
    head: list[tuple[np.ndarray, np.ndarray]]
    context_dim: int
    query_dim: int
    meta: dict = field(default_factory=dict)

    @classmethod
    def init(cls, arch: str, form: str, context_dim: int, query_dim: int, encoder_sizes: list[int],
             head_sizes: list[int], rng: np.random.Generator, meta: dict | None = None) -> "NeuralModel":
        out_dim = 2 if form == "committee" else 1
        q_extra = 0 if form == "committee" else 2

        def mlp(dims):
            return [(rng.uniform(-INIT_SCALE, INIT_SCALE, (a, b)), rng.uniform(-INIT_SCALE, INIT_SCALE, b))
                    for a, b in zip(dims[:-1], dims[1:])]

        encoder = mlp([context_dim, *encoder_sizes]) if encoder_sizes else []
        head_in = (encoder_sizes[-1] if encoder_sizes else context_dim) + query_dim + q_extra
        head = mlp([head_in, *head_sizes, out_dim])
        return cls(arch, form, encoder, head, context_dim, query_dim, dict(meta or {}))

    @property
    def params(self) -> list[np.ndarray]:
        return [p for layer in self.encoder + self.head for p in layer]

    def copy(self) -> "NeuralModel":
        return NeuralModel(self.arch, self.form, [(w.copy(), b.copy()) for w, b in self.encoder],
                           [(w.copy(), b.copy()) for w, b in self.head], self.context_dim, self.query_dim,
                           json.loads(json.dumps(self.meta)))

    # -- forward / backward -----------------------------------------------------------

    def _inputs(self, context: np.ndarray, query: np.ndarray, y: np.ndarray | None):
        context = np.atleast_2d(np.asarray(context, dtype=float))
        query = np.asarray(query, dtype=float).reshape(len(context), -1)
        if context.shape[1] != self.context_dim or query.shape[1] != self.query_dim:
            raise ShapeMismatch(f"expected context {self.context_dim} / query {self.query_dim}, "
                                f"got {context.shape[1]} / {query.shape[1]}")
        if self.form == "anticipation":
            if y is None:
                raise ShapeMismatch("anticipation form needs candidate outputs")
            query = np.hstack([query, np.eye(2)[np.asarray(y, dtype=int)]])
        return context, query

    def forward(self, context, query, y=None):
        """Returns (logits, cache) for a batch."""
        context, query = self._inputs(context, query, y)
        acts = [context]
        h = context
        for w, b in self.encoder:
            h = np.maximum(h @ w + b, 0.0)
            acts.append(h)
        z = np.hstack([h, query])
        head_acts = [z]
        for li, (w, b) in enumerate(self.head):
            z = z @ w + b
            if li < len(self.head) - 1:
                z = np.maximum(z, 0.0)
            head_acts.append(z)
        return z, (acts, head_acts)

    def predict(self, context, query, y=None) -> np.ndarray:
        """Committee: (B, 2) output distribution. Anticipation: (B,) probability of candidate ``y``."""
        logits, _ = self.forward(context, query, y)
        if self.form == "committee":
            return softmax(logits)
        return sigmoid(logits[:, 0])

    def loss_and_grads(self, context, query, target):
        """Mean loss and gradients (aligned with ``params``).

        ``target`` is the true output (committee) or ``(y, label)`` pairs
        (anticipation, label 1 for the real output and 0 for a negative sample).
        """
        if self.form == "committee":
            target = np.asarray(target, dtype=int)
            logits, (acts, head_acts) = self.forward(context, query)
            p = softmax(logits)
            B = len(p)
            loss = -np.mean(np.log(np.clip(p[np.arange(B), target], 1e-300, None)))
            dz = p.copy()
            dz[np.arange(B), target] -= 1.0
            dz /= B
        else:
            y, label = np.asarray(target, dtype=float).T
            logits, (acts, head_acts) = self.forward(context, query, y.astype(int))
            z = logits[:, 0]
            B = len(z)
            # numerically stable BCE with logits
            loss = np.mean(np.maximum(z, 0) - z * label + np.log1p(np.exp(-np.abs(z))))
            dz = ((sigmoid(z) - label) / B)[:, None]

        head_grads = []
        for li in range(len(self.head) - 1, -1, -1):
            w, _ = self.head[li]
            a_in = head_acts[li]
            head_grads.append((a_in.T @ dz, dz.sum(axis=0)))
            dz = dz @ w.T
            if li > 0:
                dz = dz * (head_acts[li] > 0)
        head_grads.reverse()

        enc_grads = []
        if self.encoder:
            dh = dz[:, :self.encoder[-1][0].shape[1]]
            for li in range(len(self.encoder) - 1, -1, -1):
                w, _ = self.encoder[li]
                dh = dh * (acts[li + 1] > 0)
                enc_grads.append((acts[li].T @ dh, dh.sum(axis=0)))
                dh = dh @ w.T
            enc_grads.reverse()
        grads = [g for layer in enc_grads + head_grads for g in layer]
        return float(loss), grads

    # -- serialization ------------------------------------------------------------------

    def to_json(self) -> dict:
        meta = dict(self.meta)
        meta.update(form=self.form, encoder_layers=len(self.encoder), context_dim=self.context_dim,
                    query_dim=self.query_dim)
        return {"arch": self.arch, "version": MODEL_VERSION,
                "layers": [{"w": w.tolist(), "b": b.tolist()} for w, b in self.encoder + self.head],
                "meta": meta}

    @classmethod
    def from_json(cls, obj: dict) -> "NeuralModel":
        if obj.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model version {obj.get('version')!r}")
        meta = dict(obj["meta"])
        n_enc = meta.pop("encoder_layers")
        form = meta.pop("form")
        cdim, qdim = meta.pop("context_dim"), meta.pop("query_dim")
        layers = [(np.array(l["w"], dtype=float), np.array(l["b"], dtype=float)) for l in obj["layers"]]
        return cls(obj["arch"], form, layers[:n_enc], layers[n_enc:], cdim, qdim, meta)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path: str | Path) -> "NeuralModel":
        return cls.from_json(json.loads(Path(path).read_text()))


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


class Adam:
    def __init__(self, params: list[np.ndarray], lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.params = params
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        c1 = 1 - self.beta1 ** self.t
        c2 = 1 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

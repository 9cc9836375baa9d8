from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from ..core import Example, ProgramSpace
from .encoding import encoder_for
from .nn import Adam, DivergedLoss, NeuralModel

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    samples: int = 20_000
    lr: float = 1e-4
    seed: int = 0
    form: str = "committee"
    batch_size: int = 32
    min_len: int = 5  # DFA string lengths
    max_len: int = 10
    log_every: int = 0


def init_model(space: ProgramSpace, config: TrainConfig, encoder=None) -> NeuralModel:
    encoder = encoder or _encoder(space, config)
    rng = np.random.default_rng(config.seed)
    meta = {"space": space.config(), "neighborhood": encoder.neighborhood, "train": asdict(config)}
    meta["train"].pop("log_every")
    return NeuralModel.init(encoder.arch, config.form, encoder.context_dim, encoder.query_dim,
                            list(encoder.encoder_sizes), list(encoder.head_sizes), rng, meta)


def _encoder(space, config: TrainConfig):
    if space.domain_id == "dfa":
        return encoder_for(space, max_len=config.max_len, min_len=config.min_len)
    return encoder_for(space)


def train_committee(space: ProgramSpace, config: TrainConfig | None = None) -> NeuralModel:
    """Train a committee (or anticipation) network on freshly sampled tasks.

    Deterministic for a fixed ``config.seed``, which seeds both the weight
    initialization and the sample stream.
    """
    config = config or TrainConfig()
    encoder = _encoder(space, config)
    model = init_model(space, config, encoder)
    data_rng = np.random.default_rng([config.seed, 1])
    opt = Adam(model.params, lr=config.lr)
    steps = math.ceil(config.samples / config.batch_size)
    done = 0
    running = None
    for step in range(steps):
        size = min(config.batch_size, config.samples - done)
        ctx, q, y = encoder.sample_batch(space, data_rng, size)
        done += size
        if model.form == "committee":
            loss, grads = model.loss_and_grads(ctx, q, y)
        else:
            # positive pair and its negative sample (binary outputs: the flipped label)
            ctx2, q2 = np.vstack([ctx, ctx]), np.vstack([q, q])
            target = np.column_stack([np.concatenate([y, 1 - y]), np.concatenate([np.ones(size), np.zeros(size)])])
            loss, grads = model.loss_and_grads(ctx2, q2, target)
        if not math.isfinite(loss):
            raise DivergedLoss(f"loss became {loss} at step {step}")
        opt.step(grads)
        running = loss if running is None else 0.99 * running + 0.01 * loss
        if config.log_every and (step + 1) % config.log_every == 0:
            log.info("step %d/%d loss %.4f", step + 1, steps, running)
    model.meta["final_loss"] = running
    return model


class NeuralPredictor:
    """Anticipation probabilities from a trained network and its domain encoder."""

    def __init__(self, model: NeuralModel, encoder):
        self.model = model
        self.encoder = encoder

    @classmethod
    def for_space(cls, model: NeuralModel, space: ProgramSpace) -> "NeuralPredictor":
        train = model.meta.get("train", {})
        if space.domain_id == "dfa":
            enc = encoder_for(space, max_len=train.get("max_len", 10), min_len=train.get("min_len", 5))
        else:
            enc = encoder_for(space)
        return cls(model, enc)

    def probabilities(self, subset: Sequence[Example], candidates: Sequence[Example]) -> np.ndarray:
        if not len(candidates):
            return np.zeros(0)
        ctx, q = self.encoder.encode(subset, [e.input for e in candidates])
        ys = np.array([int(e.output) for e in candidates])
        if self.model.form == "committee":
            return self.model.predict(ctx, q)[np.arange(len(ys)), ys]
        return self.model.predict(ctx, q, ys)


def committee_predict(model: NeuralModel, encoder, neighbors: Sequence[Example], x) -> np.ndarray:
    """Output distribution over (False, True) at ``x`` given its neighbors."""
    ctx, q = encoder.encode(neighbors, [x])
    return model.predict(ctx, q)[0]


def anticipation_predict(model: NeuralModel, encoder, neighbors: Sequence[Example], x, y) -> float:
    ctx, q = encoder.encode(neighbors, [x])
    return float(model.predict(ctx, q, np.array([int(y)]))[0])

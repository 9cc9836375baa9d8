from __future__ import annotations

from .encoding import DfaEncoder, DrawEncoder, OrderingEncoder, encoder_for
from .exact import ExactPosterior, UnsatisfiableSubset, exact_predict
from .nn import Adam, DivergedLoss, NeuralModel, ShapeMismatch
from .training import (NeuralPredictor, TrainConfig, anticipation_predict, committee_predict, init_model,
                       train_committee)

__all__ = [
    "Adam", "DfaEncoder", "DivergedLoss", "DrawEncoder", "ExactPosterior", "NeuralModel", "NeuralPredictor",
    "OrderingEncoder", "ShapeMismatch", "TrainConfig", "UnsatisfiableSubset", "anticipation_predict",
    "committee_predict", "encoder_for", "exact_predict", "init_model", "train_committee",
]

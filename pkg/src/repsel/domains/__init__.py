from __future__ import annotations

from .dfa import DfaSpace, nb_dfa, random_strings
from .drawing import DrawingGrammar, DrawingSpace, DrawProgram, Line, Square, nb_draw, sampled_grid
from .ordering import OrderingSpace, nb_ordering, relation_grid

__all__ = [
    "DfaSpace", "DrawingGrammar", "DrawingSpace", "DrawProgram", "Line", "OrderingSpace", "Square",
    "nb_dfa", "nb_draw", "nb_ordering", "random_strings", "relation_grid", "sampled_grid",
    "space_from_config",
]


def space_from_config(cfg: dict):
    """Build a space from its JSON config, e.g. ``{"domain": "dfa", "num_states": 6}``."""
    domain = cfg["domain"]
    if domain == "ordering":
        return OrderingSpace(n=int(cfg.get("n", 10)))
    if domain == "dfa":
        return DfaSpace(num_states=int(cfg.get("num_states", 6)))
    if domain == "drawing":
        g = cfg.get("grammar")
        if cfg.get("paper_scale"):
            grammar = DrawingGrammar.wide()
        elif g:
            grammar = DrawingGrammar(
                loop_counts=tuple(g["loop_counts"]), offsets=tuple(g["offsets"]),
                square_sizes=tuple(g["square_sizes"]), line_lengths=tuple(g["line_lengths"]),
                conditions=tuple(tuple(c) for c in g["conditions"]))
        else:
            grammar = DrawingGrammar()
        default = 32 if cfg.get("paper_scale") else 16
        return DrawingSpace(width=int(cfg.get("width", default)), height=int(cfg.get("height", default)),
                            grammar=grammar)
    raise ValueError(f"unknown domain {domain!r}")

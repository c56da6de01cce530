"""RAES protocol: simulation, analysis and compressed encoding."""

from ._core import (
    ConvergenceError,
    DecodeError,
    GenerationFailure,
    Graph,
    InvalidParameter,
    PreconditionError,
    RaesError,
    Run,
    SizeLimitError,
    Tape,
    circulant,
    complete,
    complete_bipartite,
    decode,
    encode,
    expansion,
    fresh_tape,
    random_regular,
    run,
    second_eigenvalue,
    termination_round_bound,
)

__all__ = [
    "ConvergenceError",
    "DecodeError",
    "GenerationFailure",
    "Graph",
    "InvalidParameter",
    "PreconditionError",
    "RaesError",
    "Run",
    "SizeLimitError",
    "Tape",
    "circulant",
    "complete",
    "complete_bipartite",
    "decode",
    "encode",
    "expansion",
    "fresh_tape",
    "random_regular",
    "run",
    "second_eigenvalue",
    "termination_round_bound",
]

"""
Parallel Module
===============

Deterministic data-parallel propagation: counter-keyed random streams, balanced
contiguous shards and index-ordered reductions.
"""

from .streams import PropagationNoise, RandomStreams, StreamPurpose
from .sharding import (
    PropagationResult,
    ShardPlan,
    partition,
    propagate_shards,
    reduce_ensemble,
)

__all__ = [
    "PropagationNoise",
    "RandomStreams",
    "StreamPurpose",
    "PropagationResult",
    "ShardPlan",
    "partition",
    "propagate_shards",
    "reduce_ensemble",
]

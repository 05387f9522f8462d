"""Parameter sets for the 4-coloring and 6-coloring pipelines."""

from __future__ import annotations

import math
from dataclasses import dataclass

from localcolor.errors import InputError


@dataclass(frozen=True)
class PartitionParams:
    cycle_len_max: int
    deg_threshold: int
    collect_radius: int
    iteration_factor: int

    def __post_init__(self):
        if self.collect_radius < self.cycle_len_max // 2 + 1:
            raise InputError("collect_radius must be at least cycle_len_max // 2 + 1")

    def iterations(self, n: int) -> int:
        return 1 + self.iteration_factor * math.ceil(math.log2(n)) if n > 1 else 1


@dataclass(frozen=True)
class Preset:
    name: str
    partition: PartitionParams
    palette: int  # final colors
    phase2_palette: int  # colors for the low-degree classes
    super_palette: int  # colors for the cycle-key super-graph
    pair_radius: int  # startup collection of (key, sync color) pairs
    color_radius: int  # collection radius when coloring a cycle

    @property
    def max_key_len(self) -> int:
        return self.partition.cycle_len_max


FOUR = Preset(
    name="4col",
    partition=PartitionParams(cycle_len_max=4, deg_threshold=4, collect_radius=3, iteration_factor=70),
    palette=4,
    phase2_palette=5,
    super_palette=4**5,
    pair_radius=2,
    color_radius=3,
)

SIX = Preset(
    name="6col",
    partition=PartitionParams(cycle_len_max=10, deg_threshold=6, collect_radius=6, iteration_factor=700),
    palette=6,
    phase2_palette=7,
    super_palette=6**11,
    pair_radius=5,
    color_radius=11,
)

PRESETS = {"4col": FOUR, "6col": SIX}


def get_preset(name) -> Preset:
    if isinstance(name, Preset):
        return name
    try:
        return PRESETS[name]
    except KeyError:
        raise InputError(f"unknown preset {name!r}; choose 4col or 6col") from None

"""The full coloring pipeline: partition, synchronization colors, final colors."""

from __future__ import annotations

from dataclasses import dataclass, field

from localcolor.engine import RoundTrace, concat_traces
from localcolor.finalcolor import FinalColorProgram, run_final
from localcolor.graph import Graph, is_proper
from localcolor.partition import PartitionOutput, PartitionProgram, run_partition, shrinkage_from_labels
from localcolor.presets import Preset, get_preset
from localcolor.synccolor import SyncProgram, build_super_graph, run_sync


@dataclass
class ColoringResult:
    preset: Preset
    colors: dict
    partition: dict
    phi: dict
    traces: dict
    shrinkage: list = field(default_factory=list)

    @property
    def labels(self) -> dict:
        return {v: o.label for v, o in self.partition.items()}

    @property
    def keys(self) -> dict:
        return {v: o.key for v, o in self.partition.items()}

    @property
    def trace(self) -> RoundTrace:
        return concat_traces([self.traces["partition"], self.traces["sync"], self.traces["final"]])

    @property
    def rounds(self) -> int:
        return sum(t.rounds_used for t in self.traces.values())

    @property
    def colors_used(self) -> int:
        return len(set(self.colors.values()))

    def worst_shrink(self) -> float:
        return max((b / a for a, b in self.shrinkage if a), default=0.0)

    def super_graph_degrees(self, g: Graph) -> dict:
        """Maximum super-graph degree per level."""
        labels, keys = self.labels, self.keys
        levels = sorted({lv for lv, ph in labels.values() if ph == 1})
        return {lv: build_super_graph(g, lv, labels, keys).max_degree() for lv in levels}


def color_graph(g: Graph, preset="4col", *, strict: bool = False, measure_bits: bool = True) -> ColoringResult:
    preset = get_preset(preset)
    part, t1 = run_partition(g, preset.partition, strict=strict, measure_bits=measure_bits)
    labels = {v: o.label for v, o in part.items()}
    keys = {v: o.key for v, o in part.items()}
    phi, t2 = run_sync(g, labels, keys, preset, strict=strict, measure_bits=measure_bits)
    colors, t3 = run_final(g, labels, keys, phi, preset, strict=strict, measure_bits=measure_bits)
    return ColoringResult(
        preset,
        colors,
        part,
        phi,
        {"partition": t1, "sync": t2, "final": t3},
        shrinkage_from_labels(part),
    )


def round_budget(preset, n: int) -> int:
    """Rounds the three fixed schedules take on an n-vertex graph."""
    preset = get_preset(preset)
    if n == 0:
        return 0
    return (
        PartitionProgram(preset.partition, n).end
        + SyncProgram(preset, n).end
        + FinalColorProgram(preset, n).end
    )


def check_result(g: Graph, result: ColoringResult):
    return is_proper(g, result.colors, require_total=True, palette=result.preset.palette)


__all__ = ["ColoringResult", "PartitionOutput", "check_result", "color_graph", "round_budget"]

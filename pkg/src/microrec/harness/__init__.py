"""Experiment orchestration: configuration grid, synthetic corpora, runner,
reports and the command-line interface."""

from .grid import ConfigGrid, default_grid_spec, expand_grid, parse_grid_file, smoke_grid_spec
from .synth import SynthSpec, generate_synthetic

__all__ = [
    "ConfigGrid",
    "default_grid_spec",
    "expand_grid",
    "parse_grid_file",
    "smoke_grid_spec",
    "SynthSpec",
    "generate_synthetic",
]

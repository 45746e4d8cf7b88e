"""Bundled example grids: unknots, trefoils, figure-eight, Hopf link, and
split unions, as .grid files next to this module."""
from __future__ import annotations

import functools
from importlib import resources

from ..grids import GridDiagram, parse_grid


def corpus_names() -> list[str]:
    root = resources.files(__package__)
    return sorted(
        entry.name[: -len(".grid")]
        for entry in root.iterdir()
        if entry.name.endswith(".grid")
    )


def corpus_text(name: str) -> str:
    return (resources.files(__package__) / f"{name}.grid").read_text()


@functools.cache
def corpus_grid(name: str) -> GridDiagram:
    return parse_grid(corpus_text(name))


def corpus_grids() -> dict[str, GridDiagram]:
    return {name: corpus_grid(name) for name in corpus_names()}

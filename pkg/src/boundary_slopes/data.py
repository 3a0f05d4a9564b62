"""Access to the shipped triangulations, curves, index lists and edge tables."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .degeneration import read_index_file
from .gluing import parse_edge_table
from .peripheral import parse_curves
from .triangulation import Triangulation, apply_delta, parse_relabeling, parse_triangulation

TRIANGULATIONS = ("l", "k5", "k11", "k13", "j2", "j4", "j6", "j8")


def read_text(filename: str) -> str:
    return resources.files(__package__).joinpath("data", filename).read_text(encoding="utf-8")


def _delta_base(text: str) -> str:
    for line in text.splitlines():
        key, _, value = line.lstrip("# ").partition(":")
        if line.startswith("#") and key.strip() == "base":
            return value.strip()
    raise ValueError("delta file has no '# base: <name>' line")


@lru_cache(maxsize=None)
def triangulation(name: str) -> Triangulation:
    """Load ``name`` (e.g. ``"k5"``, ``"j8"``), resolving delta files against their base."""
    try:
        return parse_triangulation(read_text(f"{name}.tri"))
    except FileNotFoundError:
        pass
    text = read_text(f"{name}.delta")
    return apply_delta(triangulation(_delta_base(text)), text)


def curves(name: str):
    return parse_curves(read_text(f"{name}.curves"))


def indices(name: str):
    return read_index_file(read_text(f"{name}.idx"))


def edge_table(name: str):
    return parse_edge_table(read_text(f"{name}.edges"))


def relabeling(name: str) -> list[int] | None:
    """Tet renumbering that takes ``name``'s gluing table to its curve/index numbering.

    Delta members inherit the renumbering of their base; tets beyond it keep
    their numbers.  ``None`` if the tables and the curve data already agree.
    """
    try:
        return parse_relabeling(read_text(f"{name}.relabel"))
    except FileNotFoundError:
        pass
    try:
        base = _delta_base(read_text(f"{name}.delta"))
    except FileNotFoundError:
        return None
    perm = relabeling(base)
    if perm is None:
        return None
    return perm + list(range(len(perm), triangulation(name).size))

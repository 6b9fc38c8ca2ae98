"""Milnor-type invariants of knotted objects from combinatorial cut-diagrams."""

from .diagram import CutDiagram, cdj_dumps, cdj_load, cdj_loads, validate
from .gauss import GaussDiagram, parse_gauss, to_cut_diagram
from .milnor import InvariantComputer, invariant_table, nonrepeated_table
from .spun import spun

__all__ = [
    "CutDiagram",
    "GaussDiagram",
    "InvariantComputer",
    "cdj_dumps",
    "cdj_load",
    "cdj_loads",
    "invariant_table",
    "nonrepeated_table",
    "parse_gauss",
    "spun",
    "to_cut_diagram",
    "validate",
]

__version__ = "0.1.0"

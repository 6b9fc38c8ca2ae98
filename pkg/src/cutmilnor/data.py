"""Access to the bundled example diagrams."""

from __future__ import annotations

from importlib.resources import files

from .diagram import CutDiagram, cdj_loads
from .gauss import GaussDiagram, parse_gauss

CDJ_EXAMPLES = (
    "bead",
    "borromeilhan",
    "wm_0",
    "wm_1",
    "wm_2",
    "wm_3",
    "wm_4",
    "s3",
)

GAUSS_EXAMPLES = (
    "hopf",
    "trefoil",
    "borromean",
    "milnor_link_3",
    "milnor_link_4",
    "milnor_link_5",
)


def example_text(name: str) -> str:
    suffix = ".cdj" if name in CDJ_EXAMPLES else ".gauss"
    return files("cutmilnor").joinpath(f"data/{name}{suffix}").read_text(encoding="utf-8")


def load_cdj(name: str) -> CutDiagram:
    if name not in CDJ_EXAMPLES:
        raise KeyError(f"no bundled CDJ example {name!r}")
    return cdj_loads(example_text(name))


def load_gauss(name: str) -> GaussDiagram:
    if name not in GAUSS_EXAMPLES:
        raise KeyError(f"no bundled Gauss example {name!r}")
    return parse_gauss(example_text(name))

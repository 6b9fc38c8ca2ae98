"""The combinatorial rotation construction for presented cut-diagrams.

Rotating a presented diagram keeps regions and walls verbatim. Each closed
component gains one extra trivial loop (the rotation direction avoids all
walls); components with boundary close up into spheres, losing their arc
data. Provenance records which surface type each component becomes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Component, CutDiagram, require_valid


@dataclass
class SpunResult:
    diagram: CutDiagram
    provenance: dict[int, str]


def spun(d: CutDiagram) -> SpunResult:
    require_valid(d)
    provenance: dict[int, str] = {}
    comps = []
    for comp in d.components:
        if comp.closed:
            loops = list(comp.loops) + [tuple()]
            h1 = list(comp.h1_basis) + [len(loops) - 1]
            if d.dimension == 1 and len(comp.loops) == 1:
                provenance[comp.index] = "torus"
            else:
                provenance[comp.index] = "circle product"
            comps.append(
                Component(
                    index=comp.index,
                    regions=list(comp.regions),
                    base_region=comp.base_region,
                    closed=True,
                    boundary_count=0,
                    boundary_region={},
                    loops=loops,
                    arcs=[],
                    h1_basis=h1,
                    name=comp.name,
                )
            )
        else:
            provenance[comp.index] = "sphere"
            comps.append(
                Component(
                    index=comp.index,
                    regions=list(comp.regions),
                    base_region=comp.base_region,
                    closed=True,
                    boundary_count=0,
                    boundary_region={},
                    loops=[],
                    arcs=[],
                    h1_basis=[],
                    name=comp.name,
                )
            )
    dim = d.dimension + 1 if isinstance(d.dimension, int) else d.dimension
    return SpunResult(CutDiagram(comps, list(d.walls), dim), provenance)

"""Combinatorial cut-diagram model, validation, path words, road networks.

A diagram is a disjoint union of components (1-based indices), each with a
set of named regions and a base region. Walls live on a host component,
join two of its regions, and carry a label which is any region of the
diagram. Paths are step sequences ``(wall_id, dir)``: direction +1 crosses
from ``from`` to ``to``, direction -1 the other way, and each crossing
contributes the letter ``label^dir`` to the path's word.

The on-disk form is the CDJ format, a JSON document with fixed key order:

    {"dimension": 2,
     "components": [{"index": 1, "name": ..., "closed": true,
                     "boundary_count": 0, "regions": [...],
                     "base_region": ..., "boundary_region": {"1": ...},
                     "loops": [[["w1", 1], ...], ...],
                     "arcs": [{"boundary": 1, "steps": [...]}, ...],
                     "h1_basis": [0, 1]}, ...],
     "walls": [{"id": "w1", "host": 1, "from": "A", "to": "B",
                "label": "C"}, ...]}

Emission is canonical: parsing a CDJ file and emitting it again is
byte-identical.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .words import Alphabet, FreeWord, exponent_sum, invert, multiply, reduce

Step = tuple[str, int]


class DiagramError(ValueError):
    pass


class CDJError(ValueError):
    pass


@dataclass(frozen=True)
class Wall:
    id: str
    host: int
    frm: str
    to: str
    label: str
    selfsingular: bool = False


@dataclass(frozen=True)
class ArcPath:
    boundary: int
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class CrossingPath:
    """A loop based at the component's base region, or an arc to a boundary point."""

    component: int
    kind: str  # "loop" | "arc"
    steps: tuple[Step, ...]
    boundary: int = 0


@dataclass
class Component:
    index: int
    regions: list[str]
    base_region: str
    closed: bool = True
    boundary_count: int = 0
    boundary_region: dict[int, str] = field(default_factory=dict)
    loops: list[tuple[Step, ...]] = field(default_factory=list)
    arcs: list[ArcPath] = field(default_factory=list)
    h1_basis: list[int] = field(default_factory=list)
    name: str = ""

    def loop_path(self, j: int) -> CrossingPath:
        return CrossingPath(self.index, "loop", tuple(self.loops[j]))

    def arc_path(self, j: int) -> CrossingPath:
        arc = self.arcs[j]
        return CrossingPath(self.index, "arc", tuple(arc.steps), arc.boundary)


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def render(self) -> str:
        lines = []
        for p in self.problems:
            lines.append(f"violation: {p}")
        for n in self.notes:
            lines.append(f"note: {n}")
        if not self.problems:
            lines.insert(0, "valid")
        return "\n".join(lines)


class CutDiagram:
    def __init__(self, components: list[Component], walls: list[Wall], dimension=2):
        self.dimension = dimension
        self.components = components
        self.walls = walls
        self.wall_by_id = {w.id: w for w in walls}
        self.region_component: dict[str, int] = {}
        for comp in components:
            for r in comp.regions:
                self.region_component.setdefault(r, comp.index)
        self._alphabet: Optional[Alphabet] = None

    @property
    def ell(self) -> int:
        return len(self.components)

    def component(self, i: int) -> Component:
        return self.components[i - 1]

    @property
    def alphabet(self) -> Alphabet:
        """Region alphabet, components in index order, regions in declared order."""
        if self._alphabet is None:
            names, comps = [], []
            for comp in self.components:
                for r in comp.regions:
                    names.append(r)
                    comps.append(comp.index)
            self._alphabet = Alphabet(names, comps)
        return self._alphabet

    def base_symbols(self) -> dict[int, int]:
        return {c.index: self.alphabet.id(c.base_region) for c in self.components}

    def has_selfsingular(self) -> bool:
        return any(w.selfsingular for w in self.walls)

    def all_longitude_paths(self) -> list[CrossingPath]:
        paths = []
        for comp in self.components:
            for j in range(len(comp.loops)):
                paths.append(comp.loop_path(j))
            for j in range(len(comp.arcs)):
                paths.append(comp.arc_path(j))
        return paths


def step_move(d: CutDiagram, step: Step) -> tuple[str, str, str, int]:
    """Resolve one step to (region_before, region_after, label, exponent)."""
    wid, direction = step
    wall = d.wall_by_id.get(wid)
    if wall is None:
        raise DiagramError(f"unknown wall {wid!r}")
    if direction == 1:
        return wall.frm, wall.to, wall.label, 1
    if direction == -1:
        return wall.to, wall.frm, wall.label, -1
    raise DiagramError(f"step direction must be +1 or -1, got {direction}")


def trace_path(d: CutDiagram, start: str, steps: Iterable[Step]) -> str:
    """Follow steps from ``start``; raises on a chaining discontinuity."""
    at = start
    for k, step in enumerate(steps):
        frm, to, _, _ = step_move(d, step)
        if frm != at:
            raise DiagramError(
                f"path discontinuity at step {k}: at region {at!r} but wall "
                f"{step[0]!r} is crossed from {frm!r}"
            )
        at = to
    return at


def validate(d: CutDiagram) -> ValidationReport:
    """Check every structural invariant; report all failures with location."""
    rep = ValidationReport()
    seen_regions: set[str] = set()
    indices = [c.index for c in d.components]
    if indices != list(range(1, len(indices) + 1)):
        rep.problems.append(f"component indices {indices} are not contiguous 1..{len(indices)}")

    for comp in d.components:
        where = f"component {comp.index}"
        if not comp.regions:
            rep.problems.append(f"{where}: no regions")
            continue
        for r in comp.regions:
            if r in seen_regions:
                rep.problems.append(f"{where}: duplicate region name {r!r}")
            seen_regions.add(r)
        if comp.base_region not in comp.regions:
            rep.problems.append(f"{where}: base region {comp.base_region!r} not on component")
        if comp.closed != (comp.boundary_count == 0):
            rep.problems.append(
                f"{where}: closed flag inconsistent with boundary_count {comp.boundary_count}"
            )
        expected_keys = set(range(1, comp.boundary_count)) if comp.boundary_count else set()
        if set(comp.boundary_region) != expected_keys:
            rep.problems.append(
                f"{where}: boundary_region keys {sorted(comp.boundary_region)} "
                f"should be {sorted(expected_keys)}"
            )
        for j, r in comp.boundary_region.items():
            if r not in comp.regions:
                rep.problems.append(f"{where}: boundary region {r!r} (index {j}) not on component")
        if comp.arcs and comp.boundary_count < 2:
            rep.problems.append(f"{where}: arc system requires boundary_count >= 2")
        for j in comp.h1_basis:
            if not 0 <= j < len(comp.loops):
                rep.problems.append(f"{where}: h1_basis entry {j} is not a loop index")

    wall_ids: set[str] = set()
    for w in d.walls:
        where = f"wall {w.id!r}"
        if w.id in wall_ids:
            rep.problems.append(f"{where}: duplicate id")
        wall_ids.add(w.id)
        if not 1 <= w.host <= len(d.components):
            rep.problems.append(f"{where}: host component {w.host} does not exist")
            continue
        host = d.component(w.host)
        for side, r in (("from", w.frm), ("to", w.to)):
            if r not in host.regions:
                rep.problems.append(f"{where}: {side} region {r!r} not on host component {w.host}")
        if w.label not in d.region_component:
            rep.problems.append(f"{where}: label region {w.label!r} does not exist")

    if rep.problems:
        return rep

    for comp in d.components:
        for j, steps in enumerate(comp.loops):
            where = f"component {comp.index} loop {j}"
            try:
                end = trace_path(d, comp.base_region, steps)
            except DiagramError as e:
                rep.problems.append(f"{where}: {e}")
                continue
            if end != comp.base_region:
                rep.problems.append(f"{where}: ends at {end!r}, not at base region")
        for j, arc in enumerate(comp.arcs):
            where = f"component {comp.index} arc {j}"
            if arc.boundary not in comp.boundary_region:
                rep.problems.append(f"{where}: target boundary index {arc.boundary} undeclared")
                continue
            try:
                end = trace_path(d, comp.base_region, arc.steps)
            except DiagramError as e:
                rep.problems.append(f"{where}: {e}")
                continue
            target = comp.boundary_region[arc.boundary]
            if end != target:
                rep.problems.append(f"{where}: ends at {end!r}, expected {target!r}")

    for comp in d.components:
        if comp.loops:
            rep.notes.append(
                f"component {comp.index}: loop system with {len(comp.loops)} loops is "
                "taken on trust as a generating system of the component's loops"
            )
    if d.has_selfsingular():
        rep.notes.append(
            "diagram carries terminal self-singular walls; only invariants with "
            "pairwise distinct component indices are meaningful"
        )
    return rep


def require_valid(d: CutDiagram) -> None:
    rep = validate(d)
    if not rep.ok:
        raise DiagramError("invalid diagram:\n" + "\n".join(rep.problems))


def raw_word(d: CutDiagram, path: CrossingPath) -> FreeWord:
    """Letter sequence label^dir along the path, freely reduced."""
    ab = d.alphabet
    start = d.component(path.component).base_region
    trace_path(d, start, path.steps)
    letters = []
    for step in path.steps:
        _, _, label, e = step_move(d, step)
        letters.append((ab.id(label), e))
    return reduce(FreeWord(letters))


def normalized_word(d: CutDiagram, path: CrossingPath) -> FreeWord:
    """Raw word with a base-meridian prefix cancelling same-component exponents."""
    ab = d.alphabet
    raw = raw_word(d, path)
    own = [s for s, _ in raw if ab.component(s) == path.component]
    s_total = exponent_sum(raw, own)
    start_sym = ab.id(d.component(path.component).base_region)
    prefix = FreeWord([(start_sym, -1 if s_total > 0 else 1)] * abs(s_total))
    return multiply(prefix, raw)


def reverse_steps(steps: Iterable[Step]) -> tuple[Step, ...]:
    return tuple((wid, -direction) for wid, direction in reversed(list(steps)))


def _adjacency(d: CutDiagram, comp: Component) -> dict[str, list[tuple[str, Step]]]:
    adj: dict[str, list[tuple[str, Step]]] = {r: [] for r in comp.regions}
    for w in d.walls:
        if w.host != comp.index:
            continue
        adj[w.frm].append((w.to, (w.id, 1)))
        adj[w.to].append((w.frm, (w.id, -1)))
    for lst in adj.values():
        lst.sort(key=lambda item: (item[0], item[1][0], item[1][1]))
    return adj


def region_route(d: CutDiagram, comp: Component, frm: str, to: str) -> tuple[Step, ...]:
    """Some step path from ``frm`` to ``to`` within the component's wall graph."""
    adj = _adjacency(d, comp)
    prev: dict[str, tuple[str, Step]] = {frm: ("", ("", 0))}
    queue = [frm]
    while queue:
        at = queue.pop(0)
        if at == to:
            break
        for nxt, step in adj[at]:
            if nxt not in prev:
                prev[nxt] = (at, step)
                queue.append(nxt)
    if to not in prev:
        raise DiagramError(
            f"component {comp.index}: region {to!r} unreachable from {frm!r}"
        )
    steps = []
    at = to
    while at != frm:
        back, step = prev[at]
        steps.append(step)
        at = back
    return tuple(reversed(steps))


def road_network(d: CutDiagram, seed: int | None = None) -> dict[str, FreeWord]:
    """Spanning-tree roads: region name -> word of the tree path from the base.

    Deterministic breadth-first order by default; a seed randomizes the
    spanning tree while keeping the result reproducible for that seed.
    """
    ab = d.alphabet
    rng = random.Random(seed) if seed is not None else None
    roads: dict[str, FreeWord] = {}
    for comp in d.components:
        adj = _adjacency(d, comp)
        words: dict[str, FreeWord] = {comp.base_region: FreeWord()}
        frontier = [comp.base_region]
        while frontier:
            if rng is None:
                at = frontier.pop(0)
                edges = adj[at]
            else:
                at = frontier.pop(rng.randrange(len(frontier)))
                edges = list(adj[at])
                rng.shuffle(edges)
            for nxt, step in edges:
                if nxt in words:
                    continue
                _, _, label, e = step_move(d, step)
                words[nxt] = multiply(words[at], FreeWord([(ab.id(label), e)]))
                frontier.append(nxt)
        missing = [r for r in comp.regions if r not in words]
        if missing:
            raise DiagramError(
                f"component {comp.index}: regions {missing} unreachable from base "
                f"{comp.base_region!r}; the wall-adjacency graph is disconnected"
            )
        roads.update(words)
    return roads


def wirtinger_presentation(d: CutDiagram):
    """Presentation on all regions with one relator B^-1 C^-1 A C per wall."""
    from .chen import Presentation

    require_valid(d)
    ab = d.alphabet
    relators = []
    provenance = []
    for w in d.walls:
        a, b, c = ab.id(w.frm), ab.id(w.to), ab.id(w.label)
        relators.append(reduce(FreeWord([(b, -1), (c, -1), (a, 1), (c, 1)])))
        provenance.append(f"wall {w.id}")
    return Presentation(
        alphabet=ab,
        generators=list(ab.names),
        relators=relators,
        provenance=provenance,
        markers=["wirtinger"],
    )


def with_base_regions(
    d: CutDiagram, new_bases: dict[int, str], transport: bool = True
) -> CutDiagram:
    """Rebase closed components, conjugating their loops along a connecting route.

    Components with boundary keep their marked base region: the meridian of a
    bounded component is pinned by its marked boundary point.
    """
    comps = []
    for comp in d.components:
        b = new_bases.get(comp.index)
        if b is None or b == comp.base_region:
            comps.append(comp)
            continue
        if not comp.closed:
            raise DiagramError(
                f"component {comp.index} has boundary; its base region is fixed"
            )
        if b not in comp.regions:
            raise DiagramError(f"region {b!r} is not on component {comp.index}")
        route = region_route(d, comp, b, comp.base_region)
        if transport:
            loops = [route + tuple(steps) + reverse_steps(route) for steps in comp.loops]
        else:
            loops = list(comp.loops)
        comps.append(
            Component(
                index=comp.index,
                regions=list(comp.regions),
                base_region=b,
                closed=comp.closed,
                boundary_count=comp.boundary_count,
                boundary_region=dict(comp.boundary_region),
                loops=loops,
                arcs=list(comp.arcs),
                h1_basis=list(comp.h1_basis),
                name=comp.name,
            )
        )
    return CutDiagram(comps, list(d.walls), d.dimension)


# ---------------------------------------------------------------------------
# CDJ serialization


def _steps_from_json(raw, where: str) -> tuple[Step, ...]:
    steps = []
    if not isinstance(raw, list):
        raise CDJError(f"{where}: steps must be a list")
    for k, item in enumerate(raw):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not isinstance(item[0], str)
            or item[1] not in (1, -1)
        ):
            raise CDJError(f"{where}: step {k} must be [wall_id, 1|-1]")
        steps.append((item[0], item[1]))
    return tuple(steps)


def cdj_loads(text: str) -> CutDiagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CDJError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise CDJError("top level must be an object")
    for key in ("components", "walls"):
        if key not in doc or not isinstance(doc[key], list):
            raise CDJError(f"missing or malformed {key!r} array")
    comps = []
    for k, c in enumerate(doc["components"]):
        where = f"components[{k}]"
        if not isinstance(c, dict):
            raise CDJError(f"{where}: must be an object")
        try:
            index = c["index"]
            regions = c["regions"]
            base = c["base_region"]
        except KeyError as e:
            raise CDJError(f"{where}: missing field {e.args[0]!r}") from None
        if not isinstance(regions, list) or not all(isinstance(r, str) for r in regions):
            raise CDJError(f"{where}: regions must be a list of names")
        boundary_region = {}
        for jk, r in (c.get("boundary_region") or {}).items():
            try:
                boundary_region[int(jk)] = r
            except ValueError:
                raise CDJError(f"{where}: boundary_region key {jk!r} is not an integer") from None
        loops = [
            _steps_from_json(steps, f"{where}.loops[{j}]")
            for j, steps in enumerate(c.get("loops") or [])
        ]
        arcs = []
        for j, a in enumerate(c.get("arcs") or []):
            if not isinstance(a, dict) or "boundary" not in a or "steps" not in a:
                raise CDJError(f"{where}.arcs[{j}]: need boundary and steps")
            arcs.append(
                ArcPath(int(a["boundary"]), _steps_from_json(a["steps"], f"{where}.arcs[{j}]"))
            )
        comps.append(
            Component(
                index=int(index),
                regions=list(regions),
                base_region=base,
                closed=bool(c.get("closed", True)),
                boundary_count=int(c.get("boundary_count", 0)),
                boundary_region=boundary_region,
                loops=loops,
                arcs=arcs,
                h1_basis=[int(x) for x in (c.get("h1_basis") or [])],
                name=str(c.get("name", f"component {index}")),
            )
        )
    walls = []
    for k, w in enumerate(doc["walls"]):
        where = f"walls[{k}]"
        if not isinstance(w, dict):
            raise CDJError(f"{where}: must be an object")
        try:
            walls.append(
                Wall(
                    id=str(w["id"]),
                    host=int(w["host"]),
                    frm=str(w["from"]),
                    to=str(w["to"]),
                    label=str(w["label"]),
                    selfsingular=bool(w.get("selfsingular", False)),
                )
            )
        except KeyError as e:
            raise CDJError(f"{where}: missing field {e.args[0]!r}") from None
    return CutDiagram(comps, walls, doc.get("dimension", 2))


def cdj_dumps(d: CutDiagram) -> str:
    """Canonical CDJ text: fixed key order, so emit(parse(emit(x))) == emit(x)."""
    comps = []
    for c in d.components:
        comps.append(
            {
                "index": c.index,
                "name": c.name or f"component {c.index}",
                "closed": c.closed,
                "boundary_count": c.boundary_count,
                "regions": list(c.regions),
                "base_region": c.base_region,
                "boundary_region": {str(j): c.boundary_region[j] for j in sorted(c.boundary_region)},
                "loops": [[[wid, direction] for wid, direction in steps] for steps in c.loops],
                "arcs": [
                    {"boundary": a.boundary, "steps": [[wid, dr] for wid, dr in a.steps]}
                    for a in c.arcs
                ],
                "h1_basis": list(c.h1_basis),
            }
        )
    walls = []
    for w in d.walls:
        item = {"id": w.id, "host": w.host, "from": w.frm, "to": w.to, "label": w.label}
        if w.selfsingular:
            item["selfsingular"] = True
        walls.append(item)
    doc = {"dimension": d.dimension, "components": comps, "walls": walls}
    return json.dumps(doc, indent=2) + "\n"


def cdj_load(path) -> CutDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return cdj_loads(fh.read())


def cdj_dump(d: CutDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(cdj_dumps(d))

"""Gauss codes for classical and welded links/tangles, and the move engine.

Text dialect: one chunk per component, chunks separated by ``/`` or by
newlines. A chunk is a whitespace-separated list of tokens ``O<k><sign>`` /
``U<k><sign>``; a leading ``|`` marks an interval (tangle strand) component.
Lines starting with ``#`` are comments. Every crossing label must occur
exactly once as O (the over passage, the arrow tail) and once as U (the
under passage, the arrow head), with equal signs.

Only head positions matter for the cut-diagram translation: heads cut a
component into regions, and the label of the wall at a head is the region
of the opposite component containing the tail. Exchanging two adjacent
tails therefore never changes the translation.
"""

from __future__ import annotations

import random
import re
from bisect import bisect_right
from dataclasses import dataclass, field

from .diagram import ArcPath, Component, CutDiagram, Wall


class GaussError(ValueError):
    pass


@dataclass
class GaussComponent:
    kind: str  # "circle" | "interval"
    slots: list[tuple[int, str]] = field(default_factory=list)  # (arrow id, "T"|"H")


@dataclass
class GaussDiagram:
    components: list[GaussComponent]
    signs: dict[int, int] = field(default_factory=dict)

    def copy(self) -> "GaussDiagram":
        return GaussDiagram(
            [GaussComponent(c.kind, list(c.slots)) for c in self.components],
            dict(self.signs),
        )

    def crossings(self) -> int:
        return len(self.signs)

    def endpoint(self, arrow: int, kind: str) -> tuple[int, int]:
        for ci, comp in enumerate(self.components):
            for p, (a, k) in enumerate(comp.slots):
                if a == arrow and k == kind:
                    return ci, p
        raise GaussError(f"arrow {arrow} has no {kind} endpoint")

    def fresh_id(self) -> int:
        return max(self.signs, default=0) + 1


def check(g: GaussDiagram) -> None:
    seen: dict[int, set[str]] = {}
    for comp in g.components:
        if comp.kind not in ("circle", "interval"):
            raise GaussError(f"bad component kind {comp.kind!r}")
        for a, k in comp.slots:
            seen.setdefault(a, set())
            if k in seen[a]:
                raise GaussError(f"crossing {a}: repeated {k} endpoint")
            seen[a].add(k)
    for a, kinds in seen.items():
        if kinds != {"T", "H"}:
            raise GaussError(f"crossing {a}: dangling endpoint (has {sorted(kinds)})")
        if a not in g.signs:
            raise GaussError(f"crossing {a}: no sign recorded")
    for a in g.signs:
        if a not in seen:
            raise GaussError(f"crossing {a}: sign without endpoints")


_TOKEN = re.compile(r"^([OU])(\d+)([+-])$")


def parse_gauss(text: str) -> GaussDiagram:
    components: list[GaussComponent] = []
    signs: dict[int, tuple[int, int, int]] = {}  # label -> (sign, line, col) at O
    heads: dict[int, tuple[int, int, int]] = {}
    chunks: list[list[tuple[str, int, int]]] = []
    current: list[tuple[str, int, int]] = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if line.strip().startswith("#"):
            continue
        stripped = line.strip()
        col = 1
        for piece in re.split(r"(\s+|/)", line):
            if piece == "/":
                chunks.append(current)
                current = []
            elif piece and not piece.isspace():
                current.append((piece, ln, col))
            col += len(piece)
        if stripped:
            chunks.append(current)
            current = []
    if current:
        chunks.append(current)
    chunks = [c for c in chunks if c]
    for chunk in chunks:
        kind = "circle"
        toks = list(chunk)
        if toks and toks[0][0] == "|":
            kind = "interval"
            toks = toks[1:]
        elif toks and toks[0][0].startswith("|"):
            kind = "interval"
            toks[0] = (toks[0][0][1:], toks[0][1], toks[0][2] + 1)
        comp = GaussComponent(kind)
        for tok, ln, col in toks:
            m = _TOKEN.match(tok)
            if not m:
                raise GaussError(f"line {ln} col {col}: malformed token {tok!r}")
            ou, label, sgn = m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1
            store = signs if ou == "O" else heads
            if label in store:
                raise GaussError(
                    f"line {ln} col {col}: crossing {label} already has an "
                    f"{'over' if ou == 'O' else 'under'} passage"
                )
            store[label] = (sgn, ln, col)
            comp.slots.append((label, "T" if ou == "O" else "H"))
        components.append(comp)
    result_signs: dict[int, int] = {}
    for label, (sgn, ln, col) in signs.items():
        if label not in heads:
            raise GaussError(f"line {ln} col {col}: crossing {label} has no under passage")
        if heads[label][0] != sgn:
            raise GaussError(
                f"line {ln} col {col}: crossing {label} sign mismatch between O and U"
            )
        result_signs[label] = sgn
    for label, (_, ln, col) in heads.items():
        if label not in signs:
            raise GaussError(f"line {ln} col {col}: crossing {label} has no over passage")
    g = GaussDiagram(components, result_signs)
    check(g)
    return g


def render_gauss(g: GaussDiagram) -> str:
    chunks = []
    for comp in g.components:
        toks = []
        if comp.kind == "interval":
            toks.append("|")
        for a, k in comp.slots:
            sgn = "+" if g.signs[a] > 0 else "-"
            toks.append(("O" if k == "T" else "U") + str(a) + sgn)
        chunks.append(" ".join(toks) if toks else ("|" if comp.kind == "interval" else ""))
    return " / ".join(chunks) + "\n"


# ---------------------------------------------------------------------------
# translation to cut-diagrams


def _region_name(ci: int, k: int) -> str:
    return f"r{ci}_{k}"


def to_cut_diagram(g: GaussDiagram) -> CutDiagram:
    """Heads cut each component into regions; one wall per head.

    Circles get their full traversal as the single declared loop (and
    homology basis); intervals get the full traversal as the arc to their
    far endpoint.
    """
    check(g)
    head_positions: list[list[int]] = []
    for comp in g.components:
        head_positions.append([p for p, (_, k) in enumerate(comp.slots) if k == "H"])

    def region_count(ci: int) -> int:
        m = len(head_positions[ci])
        if g.components[ci].kind == "circle":
            return max(m, 1)
        return m + 1

    def region_of_position(ci: int, p: int) -> int:
        hs = head_positions[ci]
        if g.components[ci].kind == "circle":
            if not hs:
                return 0
            return (bisect_right(hs, p) - 1) % len(hs)
        return bisect_right(hs, p)

    components = []
    walls = []
    for ci, comp in enumerate(g.components):
        index = ci + 1
        hs = head_positions[ci]
        nreg = region_count(ci)
        regions = [_region_name(index, k) for k in range(nreg)]
        if comp.kind == "circle":
            base = regions[len(hs) - 1] if hs else regions[0]
            steps = []
            for k, p in enumerate(hs):
                arrow = comp.slots[p][0]
                sign = g.signs[arrow]
                prev_r = regions[(k - 1) % len(hs)]
                cur_r = regions[k]
                wid = f"x{arrow}"
                if sign > 0:
                    walls.append(Wall(wid, index, prev_r, cur_r, ""))
                else:
                    walls.append(Wall(wid, index, cur_r, prev_r, ""))
                steps.append((wid, sign))
            components.append(
                Component(
                    index=index,
                    regions=regions,
                    base_region=base,
                    closed=True,
                    boundary_count=0,
                    loops=[tuple(steps)],
                    h1_basis=[0],
                    name=f"circle {index}",
                )
            )
        else:
            base = regions[0]
            steps = []
            for k, p in enumerate(hs):
                arrow = comp.slots[p][0]
                sign = g.signs[arrow]
                wid = f"x{arrow}"
                if sign > 0:
                    walls.append(Wall(wid, index, regions[k], regions[k + 1], ""))
                else:
                    walls.append(Wall(wid, index, regions[k + 1], regions[k], ""))
                steps.append((wid, sign))
            components.append(
                Component(
                    index=index,
                    regions=regions,
                    base_region=base,
                    closed=False,
                    boundary_count=2,
                    boundary_region={1: regions[-1]},
                    arcs=[ArcPath(1, tuple(steps))],
                    name=f"strand {index}",
                )
            )
    # second pass: wall labels come from tail positions
    labeled = []
    for w in walls:
        arrow = int(w.id[1:])
        tg = None
        for cj, comp in enumerate(g.components):
            for p, (a, k) in enumerate(comp.slots):
                if a == arrow and k == "T":
                    tg = (cj, p)
        assert tg is not None
        cj, p = tg
        label = _region_name(cj + 1, region_of_position(cj, p))
        labeled.append(Wall(w.id, w.host, w.frm, w.to, label))
    return CutDiagram(components, labeled, dimension=1)


def linking_matrix(g: GaussDiagram) -> list[list[int]]:
    """Half-sum of inter-component crossing signs; the classical oracle."""
    check(g)
    for comp in g.components:
        if comp.kind != "circle":
            raise GaussError("linking matrix needs closed (circle) components")
    n = len(g.components)
    comp_of_end: dict[tuple[int, str], int] = {}
    for ci, comp in enumerate(g.components):
        for a, k in comp.slots:
            comp_of_end[(a, k)] = ci
    lk = [[0] * n for _ in range(n)]
    for a, sgn in g.signs.items():
        i = comp_of_end[(a, "T")]
        j = comp_of_end[(a, "H")]
        if i != j:
            lk[i][j] += sgn
            lk[j][i] += sgn
    for i in range(n):
        for j in range(n):
            if lk[i][j] % 2 != 0:
                raise GaussError(
                    f"odd inter-component crossing sum between {i + 1} and {j + 1}; "
                    "not a classical diagram"
                )
            lk[i][j] //= 2
    return lk


# ---------------------------------------------------------------------------
# moves


MOVE_KINDS = ("R1", "R2", "R3", "TailCommute", "SelfVirtualization")


def _next_pos(comp: GaussComponent, p: int) -> int | None:
    if p + 1 < len(comp.slots):
        return p + 1
    return 0 if comp.kind == "circle" and len(comp.slots) > 1 else None


def _ordered_adjacent_pairs(g: GaussDiagram):
    for ci, comp in enumerate(g.components):
        for p in range(len(comp.slots)):
            q = _next_pos(comp, p)
            if q is not None and q != p:
                yield ci, p, q


def _adjacent(g: GaussDiagram, e1: tuple[int, int], e2: tuple[int, int]) -> bool:
    (c1, p1), (c2, p2) = e1, e2
    if c1 != c2:
        return False
    comp = g.components[c1]
    return _next_pos(comp, p1) == p2 or _next_pos(comp, p2) == p1


def _delete_slots(g: GaussDiagram, doomed: list[tuple[int, int]]) -> None:
    by_comp: dict[int, list[int]] = {}
    for ci, p in doomed:
        by_comp.setdefault(ci, []).append(p)
    for ci, ps in by_comp.items():
        for p in sorted(ps, reverse=True):
            del g.components[ci].slots[p]


class MoveError(ValueError):
    pass


def apply_move(g: GaussDiagram, kind: str, location: dict) -> GaussDiagram:
    """Rewrite the diagram by one local move; raises MoveError on pattern mismatch."""
    if kind not in MOVE_KINDS:
        raise MoveError(f"unknown move kind {kind!r}")
    out = g.copy()
    if kind == "R1":
        _apply_r1(out, location)
    elif kind == "R2":
        _apply_r2(out, location)
    elif kind == "R3":
        _apply_r3(out, location)
    elif kind == "TailCommute":
        _apply_tail_commute(out, location)
    else:
        _apply_self_virtualization(out, location)
    check(out)
    return out


def _apply_r1(g: GaussDiagram, loc: dict) -> None:
    op = loc.get("op", "delete")
    if op == "delete":
        a = loc["arrow"]
        if a not in g.signs:
            raise MoveError(f"no crossing {a}")
        t = g.endpoint(a, "T")
        h = g.endpoint(a, "H")
        if not _adjacent(g, t, h):
            raise MoveError(f"crossing {a}: endpoints are not an adjacent kink pair")
        _delete_slots(g, [t, h])
        del g.signs[a]
    elif op == "insert":
        ci, p = loc["component"], loc["position"]
        sign = loc.get("sign", 1)
        order = loc.get("order", "TH")
        comp = g.components[ci]
        if not 0 <= p <= len(comp.slots):
            raise MoveError(f"position {p} out of range")
        a = g.fresh_id()
        pair = [(a, "T"), (a, "H")] if order == "TH" else [(a, "H"), (a, "T")]
        comp.slots[p:p] = pair
        g.signs[a] = sign
    else:
        raise MoveError(f"R1: unknown op {op!r}")


def _apply_r2(g: GaussDiagram, loc: dict) -> None:
    op = loc.get("op", "delete")
    if op == "delete":
        a, b = loc["arrows"]
        for x in (a, b):
            if x not in g.signs:
                raise MoveError(f"no crossing {x}")
        if g.signs[a] != -g.signs[b]:
            raise MoveError("R2 pair needs opposite signs")
        ta, tb = g.endpoint(a, "T"), g.endpoint(b, "T")
        ha, hb = g.endpoint(a, "H"), g.endpoint(b, "H")
        if not (_adjacent(g, ta, tb) and _adjacent(g, ha, hb)):
            raise MoveError("R2 pair needs adjacent tails and adjacent heads")
        _delete_slots(g, [ta, tb, ha, hb])
        del g.signs[a]
        del g.signs[b]
    elif op == "insert":
        (ci, p) = loc["over"]
        (cj, q) = loc["under"]
        sign = loc.get("sign", 1)
        flip = bool(loc.get("flip", False))
        a, b = g.fresh_id(), g.fresh_id() + 1
        over_pair = [(a, "T"), (b, "T")]
        under_pair = [(a, "H"), (b, "H")] if not flip else [(b, "H"), (a, "H")]
        if ci == cj:
            comp = g.components[ci]
            if not (0 <= p <= len(comp.slots) and 0 <= q <= len(comp.slots)):
                raise MoveError("insertion position out of range")
            first, second = sorted([(p, over_pair), (q, under_pair)], key=lambda t: t[0], reverse=True)
            comp.slots[first[0]:first[0]] = first[1]
            comp.slots[second[0]:second[0]] = second[1]
        else:
            for (ck, pos, pair) in ((ci, p, over_pair), (cj, q, under_pair)):
                comp = g.components[ck]
                if not 0 <= pos <= len(comp.slots):
                    raise MoveError("insertion position out of range")
                comp.slots[pos:pos] = pair
        g.signs[a] = sign
        g.signs[b] = -sign
    else:
        raise MoveError(f"R2: unknown op {op!r}")


def _r3_roles(g: GaussDiagram, arrows: tuple[int, int, int]):
    """Find the (A, B, C) role assignment of a slide triangle, if any.

    A and B share adjacent tails on the top strand, the head of A is
    adjacent to the tail of C on the middle strand, and the heads of B and
    C are adjacent on the bottom strand.
    """
    import itertools as it

    for A, B, C in it.permutations(arrows):
        tA, tB, tC = (g.endpoint(x, "T") for x in (A, B, C))
        hA, hB, hC = (g.endpoint(x, "H") for x in (A, B, C))
        if _adjacent(g, tA, tB) and _adjacent(g, hA, tC) and _adjacent(g, hB, hC):
            yield (A, B, C), (tA, tB, hA, tC, hB, hC)


def _pair_order_bit(g: GaussDiagram, first: tuple[int, int], second: tuple[int, int]) -> int:
    """0 when ``first`` immediately precedes ``second`` along the strand."""
    comp = g.components[first[0]]
    return 0 if _next_pos(comp, first[1]) == second[1] else 1


def _apply_r3(g: GaussDiagram, loc: dict) -> None:
    arrows = tuple(loc["arrows"])
    if len(set(arrows)) != 3:
        raise MoveError("R3 needs three distinct crossings")
    for x in arrows:
        if x not in g.signs:
            raise MoveError(f"no crossing {x}")
    for (A, B, C), ends in _r3_roles(g, arrows):
        tA, tB, hA, tC, hB, hC = ends
        oX = _pair_order_bit(g, tA, tB)
        oY = _pair_order_bit(g, hA, tC)
        oZ = _pair_order_bit(g, hB, hC)
        want = (
            (-1) ** (oX + oY),
            (-1) ** (oX + oZ),
            (-1) ** (oY + oZ),
        )
        have = (g.signs[A], g.signs[B], g.signs[C])
        if have == want or have == tuple(-w for w in want):
            for e1, e2 in ((tA, tB), (hA, tC), (hB, hC)):
                c1, p1 = e1
                c2, p2 = e2
                slots = g.components[c1].slots
                slots[p1], slots[p2] = slots[p2], slots[p1]
            return
    raise MoveError(f"crossings {arrows} do not form a slide-compatible triangle")


def _apply_tail_commute(g: GaussDiagram, loc: dict) -> None:
    ci, p = loc["component"], loc["position"]
    comp = g.components[ci]
    q = _next_pos(comp, p)
    if q is None:
        raise MoveError("no adjacent slot")
    if comp.slots[p][1] != "T" or comp.slots[q][1] != "T":
        raise MoveError("tail commute needs two adjacent tails")
    comp.slots[p], comp.slots[q] = comp.slots[q], comp.slots[p]


def _apply_self_virtualization(g: GaussDiagram, loc: dict) -> None:
    a = loc["arrow"]
    if a not in g.signs:
        raise MoveError(f"no crossing {a}")
    t = g.endpoint(a, "T")
    h = g.endpoint(a, "H")
    if t[0] != h[0]:
        raise MoveError("self-virtualization needs a crossing of one component with itself")
    _delete_slots(g, [t, h])
    del g.signs[a]


# -- pattern scans ----------------------------------------------------------


def find_r1_deletes(g: GaussDiagram) -> list[dict]:
    out = []
    for a in sorted(g.signs):
        t, h = g.endpoint(a, "T"), g.endpoint(a, "H")
        if _adjacent(g, t, h):
            out.append({"op": "delete", "arrow": a})
    return out


def find_r2_deletes(g: GaussDiagram) -> list[dict]:
    out = []
    seen = set()
    for ci, p, q in _ordered_adjacent_pairs(g):
        comp = g.components[ci]
        (a, ka), (b, kb) = comp.slots[p], comp.slots[q]
        if ka != "T" or kb != "T" or a == b:
            continue
        if g.signs[a] != -g.signs[b]:
            continue
        if _adjacent(g, g.endpoint(a, "H"), g.endpoint(b, "H")):
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                out.append({"op": "delete", "arrows": sorted((a, b))})
    return out


def find_r3_moves(g: GaussDiagram) -> list[dict]:
    out = []
    seen = set()
    tails_adj = []
    for ci, p, q in _ordered_adjacent_pairs(g):
        comp = g.components[ci]
        (a, ka), (b, kb) = comp.slots[p], comp.slots[q]
        if ka == "T" and kb == "T" and a != b:
            tails_adj.append((a, b))
    for a, b in tails_adj:
        for A, B in ((a, b), (b, a)):
            hA = g.endpoint(A, "H")
            cA, pA = hA
            comp = g.components[cA]
            for neigh in (_next_pos(comp, pA), _prev_pos(comp, pA)):
                if neigh is None:
                    continue
                C, kC = comp.slots[neigh]
                if kC != "T" or C in (A, B):
                    continue
                if not _adjacent(g, g.endpoint(B, "H"), g.endpoint(C, "H")):
                    continue
                key = frozenset((A, B, C))
                if key in seen:
                    continue
                try:
                    _apply_r3(g.copy(), {"arrows": (A, B, C)})
                except MoveError:
                    continue
                seen.add(key)
                out.append({"arrows": tuple(sorted((A, B, C)))})
    return out


def _prev_pos(comp: GaussComponent, p: int) -> int | None:
    if p - 1 >= 0:
        return p - 1
    return len(comp.slots) - 1 if comp.kind == "circle" and len(comp.slots) > 1 else None


def find_tail_commutes(g: GaussDiagram) -> list[dict]:
    out = []
    for ci, p, q in _ordered_adjacent_pairs(g):
        comp = g.components[ci]
        if comp.slots[p][1] == "T" and comp.slots[q][1] == "T":
            out.append({"component": ci, "position": p})
    return out


def find_self_virtualizations(g: GaussDiagram) -> list[dict]:
    out = []
    for a in sorted(g.signs):
        if g.endpoint(a, "T")[0] == g.endpoint(a, "H")[0]:
            out.append({"arrow": a})
    return out


# ---------------------------------------------------------------------------
# randomized diagrams and move sequences


def braid_closure(word: list[int], strands: int) -> GaussDiagram:
    """Gauss diagram of the closure of a braid word (sigma_i = i, inverse = -i)."""
    if strands < 1:
        raise GaussError("need at least one strand")
    events: list[list[tuple[int, str]]] = [[] for _ in range(strands)]
    perm = list(range(strands))
    signs: dict[int, int] = {}
    for idx, letter in enumerate(word, start=1):
        i = abs(letter) - 1
        if not 0 <= i < strands - 1:
            raise GaussError(f"braid letter {letter} out of range for {strands} strands")
        sgn = 1 if letter > 0 else -1
        sa, sb = perm[i], perm[i + 1]
        over, under = (sa, sb) if letter > 0 else (sb, sa)
        events[over].append((idx, "T"))
        events[under].append((idx, "H"))
        signs[idx] = sgn
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    succ = {}
    for pos, strand in enumerate(perm):
        succ[strand] = pos  # strand ends at pos; the strand starting there follows
    comps = []
    used = set()
    for start in range(strands):
        if start in used:
            continue
        slots: list[tuple[int, str]] = []
        s = start
        while s not in used:
            used.add(s)
            slots.extend(events[s])
            s = succ[s]
        comps.append(GaussComponent("circle", slots))
    return GaussDiagram(comps, signs)


def random_diagram(ell: int, n: int, seed: int) -> GaussDiagram:
    """Closure of a random braid with exactly ``ell`` components, <= n crossings."""
    rng = random.Random(seed)
    if ell < 1:
        raise GaussError("need at least one component")
    if n == 0:
        return GaussDiagram([GaussComponent("circle") for _ in range(ell)], {})
    for _ in range(10000):
        strands = max(2, ell + rng.choice([0, 0, 1]))
        length = rng.randint(1, n)
        word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(length)]
        g = braid_closure(word, strands)
        if len(g.components) == ell and g.crossings() <= n:
            return g
    return GaussDiagram([GaussComponent("circle") for _ in range(ell)], {})


def random_move_sequence(
    g: GaussDiagram, k: int, seed: int, allow_selfvirt: bool = False
) -> GaussDiagram:
    """Apply k randomly chosen pattern-matching moves; deterministic per seed."""
    rng = random.Random(seed)
    out = g.copy()
    for _ in range(k):
        total_slots = sum(len(c.slots) for c in out.components)
        actions: list[tuple[str, dict]] = []
        for loc in find_r1_deletes(out):
            actions.append(("R1", loc))
        for loc in find_r2_deletes(out):
            actions.append(("R2", loc))
        for loc in find_r3_moves(out):
            actions.append(("R3", loc))
        for loc in find_tail_commutes(out):
            actions.append(("TailCommute", loc))
        if allow_selfvirt:
            for loc in find_self_virtualizations(out):
                actions.append(("SelfVirtualization", loc))
        if total_slots < 40:
            ci = rng.randrange(len(out.components))
            p = rng.randint(0, len(out.components[ci].slots))
            actions.append(
                ("R1", {"op": "insert", "component": ci, "position": p,
                        "sign": rng.choice([1, -1]), "order": rng.choice(["TH", "HT"])})
            )
            cj = rng.randrange(len(out.components))
            q = rng.randint(0, len(out.components[cj].slots))
            actions.append(
                ("R2", {"op": "insert", "over": [ci, p], "under": [cj, q],
                        "sign": rng.choice([1, -1]), "flip": rng.choice([False, True])})
            )
        if not actions:
            break
        kind, loc = actions[rng.randrange(len(actions))]
        out = apply_move(out, kind, loc)
    return out

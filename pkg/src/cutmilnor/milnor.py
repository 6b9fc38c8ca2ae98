"""Invariant extraction: gcd indeterminacies, loop/arc invariants, maps, kernels.

All values are exact integers. For a sequence written ``Ii`` the final index
``i`` names the component whose longitudes are read; the coefficient indices
``I`` select a monomial in the Magnus expansion of the longitude image under
the Chen rewriting.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from . import intlin, magnus
from .chen import ChenContext, eta_series, eta_word, make_context
from .diagram import CrossingPath, CutDiagram, normalized_word, require_valid
from .words import FreeWord

Seq = tuple[int, ...]


class SequenceTooLong(ValueError):
    pass


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class Residue:
    """Integer class mod ``modulus`` (0 means the integers themselves)."""

    signed: int
    modulus: int

    @property
    def value(self) -> int:
        return self.signed % self.modulus if self.modulus else self.signed

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Residue)
            and self.modulus == other.modulus
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.value, self.modulus))

    def render(self) -> str:
        if self.modulus:
            return f"{self.value} mod {self.modulus}"
        return str(self.signed)


@dataclass
class MilnorMapMatrix:
    """Values of one Milnor map on the declared homology basis loops."""

    sequence: Seq
    component: int
    modulus: int
    basis: list[int]
    values: list[int]

    def normalized(self) -> list[int]:
        if self.modulus:
            return [v % self.modulus for v in self.values]
        return list(self.values)

    def evaluate(self, coefficients: list[int]) -> Residue:
        if len(coefficients) != len(self.values):
            raise InvariantError("coefficient vector does not match the basis")
        total = sum(a * v for a, v in zip(coefficients, self.values))
        return Residue(total, self.modulus)


@dataclass
class Record:
    sequence: Seq
    m: int
    delta: int
    nu: int
    mu: dict[str, int] = field(default_factory=dict)
    arcs: dict[int, Residue] = field(default_factory=dict)


@dataclass
class InvariantTable:
    ell: int
    max_len: int
    mode: str
    nonrepeated: bool
    knot_shortcut: bool
    records: dict[Seq, Record]
    maps: dict[Seq, MilnorMapMatrix]

    def nu(self, seq: Seq) -> int:
        return self.records[tuple(seq)].nu

    def mu_bar(self, seq: Seq) -> Residue:
        """Map value on the first basis loop; the classical single number."""
        m = self.maps.get(tuple(seq))
        if m is None or not m.values:
            raise InvariantError(f"no homology basis declared for sequence {seq}")
        return Residue(m.values[0], m.modulus)

    def summary(self) -> dict:
        """Canonical value dictionary used for invariance comparisons."""
        out = {
            "nu": {_seq_str(s): r.nu for s, r in self.records.items()},
            "delta": {_seq_str(s): r.delta for s, r in self.records.items()},
            "maps": {
                _seq_str(s): {"modulus": m.modulus, "values": m.normalized()}
                for s, m in self.maps.items()
            },
            "arcs": {
                f"{_seq_str(s[:-1])};{s[-1]}{j}": [res.value, res.modulus]
                for s, r in self.records.items()
                for j, res in r.arcs.items()
            },
        }
        return out

    def render_text(self) -> str:
        lines = [
            f"invariant table: {self.ell} components, sequences up to length "
            f"{self.max_len}, mode {self.mode}"
        ]
        if self.knot_shortcut:
            lines.append("single component: all loop invariants vanish (rerun with --force to compute)")
        if self.nonrepeated:
            lines.append("restricted to sequences with pairwise distinct indices")
        for seq in sorted(self.records, key=lambda s: (len(s), s)):
            r = self.records[seq]
            line = f"seq {_seq_str(seq)}  m {r.m}  delta {r.delta}  nu {r.nu}"
            if r.mu:
                mus = " ".join(f"{k}={v}" for k, v in sorted(r.mu.items()))
                line += f"  mu[{mus}]"
            lines.append(line)
            for j in sorted(r.arcs):
                lines.append(f"  arc {_seq_str(seq[:-1])};{seq[-1]}{j} = {r.arcs[j].render()}")
            mp = self.maps.get(seq)
            if mp is not None:
                lines.append(
                    f"  map {_seq_str(seq)} modulus {mp.modulus} values {mp.values}"
                )
        return "\n".join(lines)

    def to_json(self) -> dict:
        recs = []
        for seq in sorted(self.records, key=lambda s: (len(s), s)):
            r = self.records[seq]
            recs.append(
                {
                    "sequence": _seq_str(seq),
                    "m": r.m,
                    "delta": r.delta,
                    "nu": r.nu,
                    "mu": dict(sorted(r.mu.items())),
                    "arcs": {
                        str(j): [res.value, res.modulus] for j, res in sorted(r.arcs.items())
                    },
                }
            )
        maps = [
            {
                "sequence": _seq_str(s),
                "component": m.component,
                "modulus": m.modulus,
                "basis": m.basis,
                "values": m.values,
            }
            for s, m in sorted(self.maps.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]
        return {
            "components": self.ell,
            "max_len": self.max_len,
            "mode": self.mode,
            "nonrepeated": self.nonrepeated,
            "knot_shortcut": self.knot_shortcut,
            "records": recs,
            "maps": maps,
        }


def _seq_str(seq: Seq) -> str:
    return "".join(str(j) for j in seq)


def _gcd_all(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, abs(v))
    return g


def deletion_closure(seq: Seq) -> set[Seq]:
    """Sequences reachable by deleting at least one index, then rotating."""
    out: set[Seq] = set()
    n = len(seq)
    for keep in itertools.product((0, 1), repeat=n):
        if all(keep) or not any(keep):
            continue
        sub = tuple(x for x, k in zip(seq, keep) if k)
        for r in range(len(sub)):
            out.add(sub[r:] + sub[:r])
    return out


class InvariantComputer:
    """Shared state for one diagram: Chen context plus memoized gcd tables."""

    def __init__(
        self,
        d: CutDiagram,
        max_len: int = 4,
        mode: str = "series",
        q: int | None = None,
        roads: dict[str, FreeWord] | None = None,
        seed: int | None = None,
        nonrepeated: bool = False,
        force: bool = False,
    ):
        require_valid(d)
        if max_len < 1:
            raise InvariantError("max_len must be >= 1")
        if mode not in ("series", "word"):
            raise InvariantError(f"unknown mode {mode!r}")
        self.d = d
        self.ell = d.ell
        self.max_len = max_len
        self.mode = mode
        self.nonrepeated = bool(nonrepeated) or d.has_selfsingular()
        self.force = force
        self.knot_shortcut = self.ell == 1 and not force
        if q is None:
            q = self.ell if self.nonrepeated else max_len + 1
            q = max(q, 2)
        self.qmax = max(1, max_len - 1)
        self.ctx: ChenContext = make_context(d, q, roads=roads, seed=seed)
        self._series: dict[tuple, magnus.Series] = {}
        self._m: dict[Seq, int] = {}
        self._delta: dict[Seq, int] = {}

    # -- longitude Magnus data ------------------------------------------------

    def path_series(self, path: CrossingPath) -> magnus.Series:
        w = normalized_word(self.d, path)
        if self.mode == "series":
            return eta_series(self.ctx, w, self.qmax)
        word = eta_word(self.ctx, w)
        assignment = {
            self.ctx.base_symbol(i): magnus.generator_series(i, 1, self.qmax, self.ell)
            for i in range(1, self.ell + 1)
        }
        return magnus.evaluate_word(word, assignment, self.qmax, self.ell)

    def _loop_series(self, i: int, j: int) -> magnus.Series:
        key = ("loop", i, j)
        if key not in self._series:
            self._series[key] = self.path_series(self.d.component(i).loop_path(j))
        return self._series[key]

    def _arc_series(self, i: int, j: int) -> magnus.Series:
        key = ("arc", i, j)
        if key not in self._series:
            self._series[key] = self.path_series(self.d.component(i).arc_path(j))
        return self._series[key]

    def mu_loop(self, I: Seq, i: int, j: int) -> int:
        return magnus.coefficient(self._loop_series(i, j), I)

    # -- gcd towers -----------------------------------------------------------

    def m(self, seq: Seq) -> int:
        seq = tuple(seq)
        if len(seq) <= 1:
            return 0
        if self.knot_shortcut:
            return 0
        cached = self._m.get(seq)
        if cached is not None:
            return cached
        i = seq[-1]
        I = seq[:-1]
        if len(I) > self.qmax:
            raise SequenceTooLong(
                f"sequence {_seq_str(seq)} needs coefficients of degree {len(I)}; "
                f"table was built for max_len {self.max_len}"
            )
        comp = self.d.component(i)
        value = _gcd_all(self.mu_loop(I, i, j) for j in range(len(comp.loops)))
        self._m[seq] = value
        return value

    def delta(self, seq: Seq) -> int:
        seq = tuple(seq)
        cached = self._delta.get(seq)
        if cached is not None:
            return cached
        value = _gcd_all(self.m(j) for j in deletion_closure(seq))
        self._delta[seq] = value
        return value

    def nu(self, seq: Seq) -> int:
        seq = tuple(seq)
        return math.gcd(self.delta(seq), self.m(seq))

    # -- residues, maps, arcs ---------------------------------------------------

    def milnor_number(self, path: CrossingPath, I: Seq) -> Residue:
        I = tuple(I)
        if len(I) + 1 > self.ctx.q:
            raise SequenceTooLong(
                f"sequence of length {len(I)} needs nilpotency class >= {len(I) + 1}, "
                f"context has q={self.ctx.q}"
            )
        if len(I) > self.qmax:
            raise SequenceTooLong(
                f"coefficient degree {len(I)} exceeds the table truncation {self.qmax}"
            )
        value = magnus.coefficient(self.path_series(path), I)
        return Residue(value, self.delta(I + (path.component,)))

    def nu_arc(self, I: Seq, i: int, j: int) -> Residue:
        comp = self.d.component(i)
        arc_index = None
        for k, arc in enumerate(comp.arcs):
            if arc.boundary == j:
                arc_index = k
                break
        if arc_index is None:
            raise InvariantError(f"component {i} has no arc to boundary point {j}")
        value = magnus.coefficient(self._arc_series(i, arc_index), tuple(I))
        return Residue(value, self.nu(tuple(I) + (i,)))

    def milnor_map(self, seq: Seq) -> MilnorMapMatrix:
        seq = tuple(seq)
        i = seq[-1]
        comp = self.d.component(i)
        if not comp.h1_basis:
            raise InvariantError(f"component {i} declares no homology basis")
        I = seq[:-1]
        modulus = self.delta(seq)
        values = [self.mu_loop(I, i, b) for b in comp.h1_basis]
        return MilnorMapMatrix(seq, i, modulus, list(comp.h1_basis), values)

    # -- the full table ---------------------------------------------------------

    def _sequences(self):
        max_len = self.max_len
        if self.nonrepeated:
            max_len = min(max_len, self.ell)
        for k in range(1, max_len + 1):
            for seq in itertools.product(range(1, self.ell + 1), repeat=k):
                if self.nonrepeated and (len(set(seq)) != len(seq) or k < 2):
                    continue
                yield seq

    def table(self) -> InvariantTable:
        records: dict[Seq, Record] = {}
        maps: dict[Seq, MilnorMapMatrix] = {}
        for seq in self._sequences():
            i = seq[-1]
            I = seq[:-1]
            comp = self.d.component(i)
            rec = Record(seq, self.m(seq), self.delta(seq), self.nu(seq))
            # length-1 sequences have an empty coefficient index and carry no data
            if not self.knot_shortcut and I:
                for j in range(len(comp.loops)):
                    rec.mu[f"loop{i}.{j}"] = self.mu_loop(I, i, j)
                for arc in comp.arcs:
                    rec.arcs[arc.boundary] = self.nu_arc(I, i, arc.boundary)
                if comp.h1_basis:
                    maps[seq] = self.milnor_map(seq)
            records[seq] = rec
        return InvariantTable(
            ell=self.ell,
            max_len=self.max_len,
            mode=self.mode,
            nonrepeated=self.nonrepeated,
            knot_shortcut=self.knot_shortcut,
            records=records,
            maps=maps,
        )


def invariant_table(d: CutDiagram, max_len: int = 4, **kw) -> InvariantTable:
    return InvariantComputer(d, max_len=max_len, **kw).table()


def nonrepeated_table(d: CutDiagram, max_len: int | None = None, **kw) -> InvariantTable:
    if max_len is None:
        max_len = d.ell
    return InvariantComputer(d, max_len=max_len, nonrepeated=True, **kw).table()


# ---------------------------------------------------------------------------
# free kernels


@dataclass
class FreeKernelResult:
    component: int
    rank: int
    basis: list[list[int]]
    per_map: dict[str, list[list[int]]]


def free_kernel(maps: list[MilnorMapMatrix]) -> FreeKernelResult:
    """Rank and basis of the intersection of the maps' free kernels.

    Each free kernel is the saturation of {x : <values, x> = 0 mod modulus}.
    A map with a positive modulus constrains nothing after saturation (its
    kernel lattice has full rank); maps to the integers contribute the
    honest kernel of their value row.
    """
    if not maps:
        raise InvariantError("need at least one map")
    comp = maps[0].component
    dim = len(maps[0].basis)
    for m in maps:
        if m.component != comp or m.basis != maps[0].basis:
            raise InvariantError("maps must share one component and homology basis")
    per_map: dict[str, list[list[int]]] = {}
    rows = []
    for m in maps:
        if m.modulus == 0 and any(m.values):
            ker = intlin.right_kernel([list(m.values)], cols=dim)
        else:
            ker = [list(r) for r in intlin._identity(dim)]
        per_map[_seq_str(m.sequence)] = ker
        if m.modulus == 0 and any(m.values):
            rows.append(list(m.values))
    if rows:
        basis = intlin.right_kernel(rows, cols=dim)
    else:
        basis = [list(r) for r in intlin._identity(dim)]
    return FreeKernelResult(comp, len(basis), basis, per_map)

"""Chen homomorphisms and nilpotent / reduced presentations.

The homomorphism eta_q rewrites any word in the region generators into a
word in the base meridians R_1..R_ell:

    eta_1(R)     = R_i                     (R a region of component i)
    eta_{q+1}(R) = R_i conjugated by eta_q(v_R)

with v_R the word of the road from the component basepoint to R. Two
evaluation modes are provided: full word rewriting (exponential in q, kept
behind a depth guard) and direct evaluation of the Magnus series of the
image, which is what the invariant extraction uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import magnus
from .diagram import (
    CutDiagram,
    normalized_word,
    require_valid,
    road_network,
)
from .words import Alphabet, FreeWord, commutator, conjugate, letter, multiply, reduce

WORD_MODE_MAX_Q = 6


class DepthGuardError(RuntimeError):
    """Raised when word-mode rewriting is requested beyond the depth guard."""


@dataclass
class ChenContext:
    """Diagram plus the choices the rewriting depends on: roads and class q."""

    diagram: CutDiagram
    q: int
    roads: dict[str, FreeWord]
    _word_cache: dict[tuple[int, int], FreeWord] = field(default_factory=dict, repr=False)
    _series_cache: dict[tuple[int, int, int], magnus.Series] = field(
        default_factory=dict, repr=False
    )

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("nilpotency class q must be >= 1")
        missing = [r for r in self.diagram.alphabet.names if r not in self.roads]
        if missing:
            raise ValueError(f"road network misses regions {missing}")

    @property
    def alphabet(self) -> Alphabet:
        return self.diagram.alphabet

    @property
    def ell(self) -> int:
        return self.diagram.ell

    def base_symbol(self, i: int) -> int:
        return self.alphabet.id(self.diagram.component(i).base_region)

    def meridian_names(self) -> list[str]:
        return [self.diagram.component(i).base_region for i in range(1, self.ell + 1)]


def make_context(
    d: CutDiagram,
    q: int,
    roads: dict[str, FreeWord] | None = None,
    seed: int | None = None,
) -> ChenContext:
    require_valid(d)
    if roads is None:
        roads = road_network(d, seed=seed)
    return ChenContext(diagram=d, q=q, roads=roads)


# ---------------------------------------------------------------------------
# word mode


def _eta_letter_word(ctx: ChenContext, sym: int, level: int) -> FreeWord:
    key = (sym, level)
    cached = ctx._word_cache.get(key)
    if cached is not None:
        return cached
    ab = ctx.alphabet
    comp = ab.component(sym)
    base = ctx.base_symbol(comp)
    if sym == base or level <= 1:
        out = letter(base)
    else:
        v = ctx.roads[ab.name(sym)]
        out = conjugate(letter(base), _eta_word_at(ctx, v, level - 1))
    ctx._word_cache[key] = out
    return out


def _eta_word_at(ctx: ChenContext, w: FreeWord, level: int) -> FreeWord:
    from .words import invert as winv

    parts = []
    for s, e in w:
        img = _eta_letter_word(ctx, s, level)
        parts.append(img if e == 1 else winv(img))
    return multiply(*parts) if parts else FreeWord()


def eta_word(ctx: ChenContext, w: FreeWord, max_q: int = WORD_MODE_MAX_Q) -> FreeWord:
    """eta_q(w) as a reduced word in the base meridians; word mode.

    Word lengths grow exponentially with q, so this refuses q beyond
    ``max_q``; pass a larger bound explicitly to override.
    """
    if ctx.q > max_q:
        raise DepthGuardError(
            f"word-mode rewriting at q={ctx.q} exceeds the guard ({max_q}); "
            "use series mode or raise the bound explicitly"
        )
    return reduce(_eta_word_at(ctx, w, ctx.q))


# ---------------------------------------------------------------------------
# series mode


def _eta_letter_series(ctx: ChenContext, sym: int, level: int, qmax: int) -> magnus.Series:
    key = (sym, level, qmax)
    cached = ctx._series_cache.get(key)
    if cached is not None:
        return cached
    ab = ctx.alphabet
    comp = ab.component(sym)
    base = ctx.base_symbol(comp)
    if sym == base or level <= 1:
        out = magnus.generator_series(comp, 1, qmax, ctx.ell)
    else:
        v = ctx.roads[ab.name(sym)]
        u = _eta_series_at(ctx, v, level - 1, qmax)
        gen = magnus.generator_series(comp, 1, qmax, ctx.ell)
        out = magnus.mul(magnus.mul(magnus.inverse(u), gen), u)
    ctx._series_cache[key] = out
    return out


def _eta_series_at(ctx: ChenContext, w: FreeWord, level: int, qmax: int) -> magnus.Series:
    acc = magnus.one(qmax, ctx.ell)
    for s, e in w:
        img = _eta_letter_series(ctx, s, level, qmax)
        acc = magnus.mul(acc, img if e == 1 else magnus.inverse(img))
    return acc


def eta_series(ctx: ChenContext, w: FreeWord, qmax: int) -> magnus.Series:
    """Magnus series of eta_q(w), truncated at qmax, without word blowup."""
    if qmax < 1:
        raise ValueError("qmax must be >= 1")
    return _eta_series_at(ctx, w, ctx.q, qmax)


def eta_series_equals_word_mode(ctx: ChenContext, w: FreeWord, qmax: int) -> bool:
    """Cross-check of the two evaluation modes; used by tests and selftest."""
    direct = eta_series(ctx, w, qmax)
    word = eta_word(ctx, w)
    assignment = {
        ctx.base_symbol(i): magnus.generator_series(i, 1, qmax, ctx.ell)
        for i in range(1, ctx.ell + 1)
    }
    return direct == magnus.evaluate_word(word, assignment, qmax, ctx.ell)


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    alphabet: Alphabet
    generators: list[str]
    relators: list[FreeWord]
    provenance: list[str] = field(default_factory=list)
    markers: list[str] = field(default_factory=list)

    def render(self) -> str:
        """GAP-style one-liner; symbolic relator families appear as markers."""
        gens = ", ".join(self.generators)
        items = list(self.markers)
        for rel in self.relators:
            items.append(gap_word(self.alphabet, rel))
        return f"< {gens} | {', '.join(items)} >"

    def structured(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [gap_word(self.alphabet, r) for r in self.relators],
            "markers": list(self.markers),
            "provenance": list(self.provenance),
        }


def gap_word(ab: Alphabet, w: FreeWord) -> str:
    if not w:
        return "1"
    toks = []
    for s, e in w:
        toks.append(ab.name(s) if e == 1 else f"{ab.name(s)}^-1")
    return "*".join(toks)


def _meridian_alphabet(ctx: ChenContext) -> Alphabet:
    names = ctx.meridian_names()
    return Alphabet(names, list(range(1, len(names) + 1)))


def _translate_to_meridians(ctx: ChenContext, w: FreeWord, target: Alphabet) -> FreeWord:
    ab = ctx.alphabet
    out = []
    for s, e in w:
        out.append((target.id(ab.name(s)), e))
    return FreeWord(out)


def longitude_relators(ctx: ChenContext) -> tuple[Alphabet, list[FreeWord], list[str]]:
    """Relators [R_i, eta_q(w)] for every loop in every loop system."""
    target = _meridian_alphabet(ctx)
    relators, provenance = [], []
    for comp in ctx.diagram.components:
        base = letter(target.id(comp.base_region))
        for j in range(len(comp.loops)):
            w = normalized_word(ctx.diagram, comp.loop_path(j))
            image = eta_word(ctx, w)
            image = _translate_to_meridians(ctx, image, target)
            rel = reduce(commutator(base, image))
            if not rel:
                continue
            relators.append(rel)
            provenance.append(f"longitude commutator: component {comp.index} loop {j}")
    return target, relators, provenance


def nilpotent_presentation(ctx: ChenContext) -> Presentation:
    """Presentation of the class-q nilpotent quotient on the base meridians.

    The q-th lower-central term is kept symbolic (marker ``F_q``); explicit
    relators are the meridian/longitude commutators.
    """
    target, relators, provenance = longitude_relators(ctx)
    return Presentation(
        alphabet=target,
        generators=list(target.names),
        relators=relators,
        provenance=provenance,
        markers=[f"F_{ctx.q}"],
    )


def reduced_presentation(ctx: ChenContext) -> Presentation:
    """Reduced-quotient presentation; needs q at least the component count."""
    if ctx.q < ctx.ell:
        raise ValueError(
            f"reduced presentation needs q >= {ctx.ell} (number of components), got {ctx.q}"
        )
    target, relators, provenance = longitude_relators(ctx)
    markers = ["[Ri, Ri^g] for all i and all g"]
    return Presentation(
        alphabet=target,
        generators=list(target.names),
        relators=relators,
        provenance=provenance,
        markers=markers,
    )

"""Reduced-size reruns of the property suites, for the ``selftest`` command.

Each suite mirrors one family of checks from the test suite at a size that
finishes in seconds; the goal is a quick in-the-field sanity run, not a
replacement for pytest.
"""

from __future__ import annotations

import itertools
import random
import time

from . import data, magnus
from .chen import eta_series, eta_series_equals_word_mode, eta_word, make_context
from .diagram import road_network, with_base_regions
from .gauss import (
    linking_matrix,
    random_diagram,
    random_move_sequence,
    to_cut_diagram,
)
from .milnor import invariant_table, nonrepeated_table
from .words import FreeWord, exponent_sum, invert, multiply, reduce as wreduce


def _random_word(rng: random.Random, nsyms: int, maxlen: int = 10) -> FreeWord:
    n = rng.randint(0, maxlen)
    return FreeWord([(rng.randrange(nsyms), rng.choice([1, -1])) for _ in range(n)])


def _suite_words(rng: random.Random) -> bool:
    for _ in range(100):
        w = _random_word(rng, 4)
        r = wreduce(w)
        if wreduce(r) != r:
            return False
        if multiply(r, invert(r)) != FreeWord():
            return False
        u, v = _random_word(rng, 4), _random_word(rng, 4)
        if exponent_sum(multiply(u, v), {0, 2}) != exponent_sum(u, {0, 2}) + exponent_sum(
            v, {0, 2}
        ):
            return False
    return True


def _suite_magnus(rng: random.Random) -> bool:
    nv = 3
    assignment = {s: magnus.generator_series(s + 1, 1, 4, nv) for s in range(nv)}
    for _ in range(30):
        u, v = _random_word(rng, nv, 6), _random_word(rng, nv, 6)
        lhs = magnus.evaluate_word(multiply(u, v), assignment, 4, nv)
        rhs = magnus.mul(
            magnus.evaluate_word(u, assignment, 4, nv),
            magnus.evaluate_word(v, assignment, 4, nv),
        )
        if lhs != rhs:
            return False
        w = _random_word(rng, nv, 6)
        if magnus.evaluate_word(w, assignment, 4, nv) != magnus.evaluate_word(
            wreduce(w), assignment, 4, nv
        ):
            return False
    return True


def _suite_chen(rng: random.Random) -> bool:
    for name in ("bead", "borromeilhan"):
        d = data.load_cdj(name)
        ab = d.alphabet
        for _ in range(15):
            w = wreduce(_random_word(rng, len(ab), 6))
            for q in (2, 3):
                ctx = make_context(d, q)
                ew = eta_word(ctx, w)
                if eta_word(ctx, ew) != ew:
                    return False
                qm = max(1, q - 1)
                if eta_series(make_context(d, q + 1), w, qm) != eta_series(ctx, w, qm):
                    return False
                if not eta_series_equals_word_mode(ctx, w, 3):
                    return False
    return True


def _suite_modes(rng: random.Random) -> bool:
    for name in data.CDJ_EXAMPLES:
        d = data.load_cdj(name)
        a = invariant_table(d, max_len=3, mode="series").summary()
        b = invariant_table(d, max_len=3, mode="word").summary()
        if a != b:
            return False
    return True


def _suite_linking(rng: random.Random) -> bool:
    for trial in range(30):
        ell = 2 + trial % 2
        g = random_diagram(ell, 7, seed=rng.randrange(10**6))
        lk = linking_matrix(g)
        t = invariant_table(to_cut_diagram(g), max_len=2)
        for i in range(1, ell + 1):
            for j in range(1, ell + 1):
                if i != j and t.mu_bar((j, i)).signed != lk[i - 1][j - 1]:
                    return False
    return True


def _suite_moves(rng: random.Random) -> bool:
    for trial in range(12):
        g = random_diagram(2 + trial % 2, 7, seed=rng.randrange(10**6))
        before = invariant_table(to_cut_diagram(g), max_len=3).summary()
        g2 = random_move_sequence(g, 4, seed=rng.randrange(10**6))
        after = invariant_table(to_cut_diagram(g2), max_len=3).summary()
        if before != after:
            return False
        nb = nonrepeated_table(to_cut_diagram(g)).summary()
        g3 = random_move_sequence(g, 4, seed=rng.randrange(10**6), allow_selfvirt=True)
        na = nonrepeated_table(to_cut_diagram(g3)).summary()
        if nb != na:
            return False
    return True


def _suite_choices(rng: random.Random) -> bool:
    for name in ("bead", "s3"):
        d = data.load_cdj(name)
        ref = invariant_table(d, max_len=3).summary()
        for _ in range(3):
            roads = road_network(d, seed=rng.randrange(10**6))
            if invariant_table(d, max_len=3, roads=roads).summary() != ref:
                return False
        for comp in d.components:
            for region in comp.regions:
                if region == comp.base_region:
                    continue
                moved = with_base_regions(d, {comp.index: region})
                if invariant_table(moved, max_len=3).summary() != ref:
                    return False
    return True


def _suite_examples(rng: random.Random) -> bool:
    bead = invariant_table(data.load_cdj("bead"), max_len=3)
    if not (bead.records[(1, 2, 3)].nu == bead.records[(2, 1, 3)].nu == 1):
        return False
    if any(bead.records[s].nu for s in itertools.product((1, 2, 3), repeat=2)):
        return False
    from .milnor import InvariantComputer, free_kernel

    borro = InvariantComputer(data.load_cdj("borromeilhan"), max_len=3)
    if borro.nu_arc((1, 2), 3, 1).signed != 1 or borro.nu_arc((2, 1), 3, 1).signed != -1:
        return False
    s3 = InvariantComputer(data.load_cdj("s3"), max_len=2)
    fk = free_kernel([s3.milnor_map((1, 3)), s3.milnor_map((2, 3))])
    if fk.rank != 0:
        return False
    seen = set()
    for m in range(5):
        t = invariant_table(data.load_cdj(f"wm_{m}"), max_len=4)
        pair = (t.records[(2, 2, 1, 1)].nu, t.records[(2, 1, 2, 1)].nu)
        if pair[0] != m or pair in seen:
            return False
        seen.add(pair)
    return True


SUITES = [
    ("free-word algebra", _suite_words),
    ("magnus expansion", _suite_magnus),
    ("chen rewriting", _suite_chen),
    ("word/series mode agreement", _suite_modes),
    ("linking-number oracle", _suite_linking),
    ("move invariance", _suite_moves),
    ("road and basepoint independence", _suite_choices),
    ("bundled example values", _suite_examples),
]


def run(seed: int = 2024, verbose: bool = False) -> bool:
    rng = random.Random(seed)
    all_ok = True
    for name, fn in SUITES:
        t0 = time.time()
        ok = fn(rng)
        all_ok = all_ok and ok
        if verbose:
            status = "PASS" if ok else "FAIL"
            print(f"{status} {name} ({time.time() - t0:.2f}s)")
    if verbose:
        print("selftest", "passed" if all_ok else "FAILED")
    return all_ok

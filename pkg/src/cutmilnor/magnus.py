"""Degree-truncated noncommutative integer power series and Magnus expansions.

A series lives in Z<<X_1,...,X_n>> truncated above ``qmax``. Monomials are
tuples of variable indices (1-based), so ``(1, 2)`` is X1*X2 and ``()`` is
the unit monomial. Coefficients are Python ints, hence arbitrary precision.
Zero coefficients are never stored. The truncation degree is part of the
value and binary operations refuse to mix different truncations.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .words import FreeWord, invert as word_invert

Monomial = tuple[int, ...]


class TruncationMismatch(ValueError):
    pass


class SeriesError(ValueError):
    pass


class Series:
    """Sparse truncated series: ``coeffs`` maps monomials to nonzero ints."""

    __slots__ = ("qmax", "nvars", "coeffs")

    def __init__(self, qmax: int, nvars: int, coeffs: Mapping[Monomial, int] | None = None):
        if qmax < 1:
            raise SeriesError("truncation degree must be >= 1")
        if nvars < 0:
            raise SeriesError("need a nonnegative variable count")
        self.qmax = qmax
        self.nvars = nvars
        clean: dict[Monomial, int] = {}
        for mono, c in (coeffs or {}).items():
            if c == 0 or len(mono) > qmax:
                continue
            for j in mono:
                if not 1 <= j <= nvars:
                    raise SeriesError(f"variable index {j} out of range 1..{nvars}")
            clean[tuple(mono)] = c
        self.coeffs = clean

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Series)
            and self.qmax == other.qmax
            and self.nvars == other.nvars
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"Series(qmax={self.qmax}, {render(self)!r})"

    def constant(self) -> int:
        return self.coeffs.get((), 0)


def _match(a: Series, b: Series) -> None:
    if a.qmax != b.qmax:
        raise TruncationMismatch(f"truncation degrees differ: {a.qmax} vs {b.qmax}")
    if a.nvars != b.nvars:
        raise TruncationMismatch(f"variable counts differ: {a.nvars} vs {b.nvars}")


def one(qmax: int, nvars: int) -> Series:
    return Series(qmax, nvars, {(): 1})


def zero(qmax: int, nvars: int) -> Series:
    return Series(qmax, nvars, {})


def add(a: Series, b: Series) -> Series:
    _match(a, b)
    coeffs = dict(a.coeffs)
    for mono, c in b.coeffs.items():
        v = coeffs.get(mono, 0) + c
        if v:
            coeffs[mono] = v
        else:
            coeffs.pop(mono, None)
    return Series(a.qmax, a.nvars, coeffs)


def neg(a: Series) -> Series:
    return Series(a.qmax, a.nvars, {m: -c for m, c in a.coeffs.items()})


def sub(a: Series, b: Series) -> Series:
    return add(a, neg(b))


def mul(a: Series, b: Series) -> Series:
    _match(a, b)
    qmax = a.qmax
    coeffs: dict[Monomial, int] = {}
    for m1, c1 in a.coeffs.items():
        room = qmax - len(m1)
        for m2, c2 in b.coeffs.items():
            if len(m2) > room:
                continue
            mono = m1 + m2
            v = coeffs.get(mono, 0) + c1 * c2
            if v:
                coeffs[mono] = v
            else:
                coeffs.pop(mono, None)
    return Series(a.qmax, a.nvars, coeffs)


def inverse(a: Series) -> Series:
    """Multiplicative inverse up to truncation; requires constant coefficient 1."""
    if a.constant() != 1:
        raise SeriesError("inverse needs constant coefficient 1")
    # 1/(1 - n) = sum n^k with n = 1 - a, which has no constant term.
    n = sub(one(a.qmax, a.nvars), a)
    acc = one(a.qmax, a.nvars)
    term = one(a.qmax, a.nvars)
    for _ in range(a.qmax):
        term = mul(term, n)
        if not term.coeffs:
            break
        acc = add(acc, term)
    return acc


def generator_series(i: int, sign: int, qmax: int, nvars: int) -> Series:
    """Magnus image of a generator: 1 + X_i, or its geometric-series inverse."""
    if not 1 <= i <= nvars:
        raise SeriesError(f"generator index {i} out of range 1..{nvars}")
    if sign == 1:
        return Series(qmax, nvars, {(): 1, (i,): 1})
    if sign == -1:
        return Series(
            qmax, nvars, {tuple([i] * k): (-1) ** k for k in range(qmax + 1)}
        )
    raise SeriesError("sign must be +1 or -1")


def evaluate_word(
    w: FreeWord, assignment: Mapping[int, Series], qmax: int, nvars: int
) -> Series:
    """Ordered product of per-letter series; exponent -1 takes the series inverse."""
    acc = one(qmax, nvars)
    inverses: dict[int, Series] = {}
    for s, e in w:
        if s not in assignment:
            raise SeriesError(f"symbol {s} has no assigned series")
        img = assignment[s]
        if img.qmax != qmax or img.nvars != nvars:
            raise TruncationMismatch("assigned series does not match requested truncation")
        if e == 1:
            acc = mul(acc, img)
        else:
            if s not in inverses:
                if img.constant() != 1:
                    raise SeriesError("inverse letters need series with constant term 1")
                inverses[s] = inverse(img)
            acc = mul(acc, inverses[s])
    return acc


def magnus_expansion(w: FreeWord, component_of: Mapping[int, int], qmax: int, nvars: int) -> Series:
    """Expansion with each symbol sent to 1 + X_c, c the symbol's component."""
    assignment = {
        s: generator_series(component_of[s], 1, qmax, nvars)
        for s, _ in w
        if s in component_of
    }
    return evaluate_word(w, assignment, qmax, nvars)


def coefficient(s: Series, index_sequence: Iterable[int]) -> int:
    mono = tuple(index_sequence)
    if len(mono) > s.qmax:
        raise SeriesError(
            f"sequence length {len(mono)} exceeds truncation degree {s.qmax}"
        )
    return s.coeffs.get(mono, 0)


def lcs_degree(s: Series) -> int:
    """Smallest degree >= 1 carrying a nonzero coefficient, else qmax + 1.

    For a Magnus expansion E(w) this is the largest q with w a candidate
    member of the q-th lower-central-series term, capped by the truncation.
    """
    if s.constant() != 1:
        raise SeriesError("lcs_degree needs constant coefficient 1")
    degrees = [len(m) for m in s.coeffs if m]
    return min(degrees) if degrees else s.qmax + 1


def render(s: Series) -> str:
    """Exact text form, monomials in degree-then-lexicographic order."""
    if not s.coeffs:
        return "0"
    parts = []
    for mono in sorted(s.coeffs, key=lambda m: (len(m), m)):
        c = s.coeffs[mono]
        name = "".join(f"X{j}" for j in mono) if mono else "1"
        if mono and abs(c) == 1:
            body = name
        elif mono:
            body = f"{abs(c)}*{name}"
        else:
            body = str(abs(c))
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def word_and_inverse_cancel(w: FreeWord, qmax: int, nvars: int,
                            assignment: Mapping[int, Series]) -> bool:
    """Check E(w) * E(w^-1) == 1 up to truncation; test helper."""
    ew = evaluate_word(w, assignment, qmax, nvars)
    ewi = evaluate_word(word_invert(w), assignment, qmax, nvars)
    return mul(ew, ewi) == one(qmax, nvars)

"""Free-group words over a finite symbol alphabet.

A word is a sequence of letters (symbol, exponent) with exponent +1 or -1.
Symbols are interned as small integers; an Alphabet owns the display names
and assigns each symbol to a component (1-based index).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class AlphabetError(ValueError):
    pass


class WordError(ValueError):
    pass


class Alphabet:
    """Ordered symbol table: name <-> interned id, plus a component index per symbol."""

    def __init__(self, names: Sequence[str], components: Sequence[int]):
        names = list(names)
        components = list(components)
        if len(set(names)) != len(names):
            raise AlphabetError("duplicate symbol names")
        if len(components) != len(names):
            raise AlphabetError("need one component index per symbol")
        for c in components:
            if not isinstance(c, int) or c < 1:
                raise AlphabetError(f"component index must be a positive integer, got {c!r}")
        self.names = names
        self.components = components
        self._ids = {name: k for k, name in enumerate(names)}
        self.ell = max(components, default=0)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Alphabet)
            and self.names == other.names
            and self.components == other.components
        )

    def id(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise AlphabetError(f"unknown symbol {name!r}") from None

    def name(self, sym: int) -> str:
        self._check_sym(sym)
        return self.names[sym]

    def component(self, sym: int) -> int:
        self._check_sym(sym)
        return self.components[sym]

    def component_symbols(self, i: int) -> list[int]:
        return [k for k, c in enumerate(self.components) if c == i]

    def _check_sym(self, sym: int) -> None:
        if not 0 <= sym < len(self.names):
            raise AlphabetError(f"symbol id {sym} not in alphabet of size {len(self.names)}")

    def word(self, text: str) -> "FreeWord":
        """Parse a whitespace-separated word like ``A B^-1 A``."""
        letters = []
        for tok in text.split():
            if tok.endswith("^-1"):
                letters.append((self.id(tok[:-3]), -1))
            elif "^" in tok:
                raise WordError(f"bad token {tok!r}: only ^-1 is allowed")
            else:
                letters.append((self.id(tok), 1))
        return FreeWord(letters)

    def render(self, w: "FreeWord") -> str:
        """Format a word as whitespace-separated ``name`` / ``name^-1`` tokens."""
        return " ".join(
            self.name(s) if e == 1 else self.name(s) + "^-1" for s, e in w
        )


class FreeWord:
    """Immutable letter sequence; construct through :func:`reduce` and friends."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        letters = tuple((int(s), int(e)) for s, e in letters)
        for s, e in letters:
            if e not in (1, -1):
                raise WordError(f"letter exponent must be +1 or -1, got {e}")
            if s < 0:
                raise WordError(f"negative symbol id {s}")
        self.letters = letters

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        if not self.letters:
            return "FreeWord()"
        body = " ".join(f"{s}" if e == 1 else f"{s}^-1" for s, e in self.letters)
        return f"FreeWord[{body}]"


EMPTY = FreeWord()


def reduce(w: FreeWord) -> FreeWord:
    """Freely reduce: cancel adjacent (s,+1)(s,-1) and (s,-1)(s,+1) pairs."""
    out: list[tuple[int, int]] = []
    for s, e in w:
        if out and out[-1][0] == s and out[-1][1] == -e:
            out.pop()
        else:
            out.append((s, e))
    return FreeWord(out)


def multiply(*words: FreeWord) -> FreeWord:
    """Concatenate and reduce."""
    letters: list[tuple[int, int]] = []
    for w in words:
        for s, e in w:
            if letters and letters[-1][0] == s and letters[-1][1] == -e:
                letters.pop()
            else:
                letters.append((s, e))
    return FreeWord(letters)


def invert(w: FreeWord) -> FreeWord:
    return FreeWord((s, -e) for s, e in reversed(w.letters))


def conjugate(a: FreeWord, b: FreeWord) -> FreeWord:
    """a conjugated by b, i.e. b^-1 a b."""
    return multiply(invert(b), a, b)


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    """[a, b] = a^-1 b^-1 a b."""
    return multiply(invert(a), invert(b), a, b)


def power(w: FreeWord, n: int) -> FreeWord:
    if n < 0:
        return power(invert(w), -n)
    out = EMPTY
    for _ in range(n):
        out = multiply(out, w)
    return out


def letter(sym: int, exp: int = 1) -> FreeWord:
    return FreeWord([(sym, exp)])


def exponent_sum(w: FreeWord, symbols: Iterable[int] | None = None) -> int:
    """Sum of exponents over letters whose symbol is in ``symbols`` (all if None)."""
    if symbols is None:
        return sum(e for _, e in w)
    sset = set(symbols)
    return sum(e for s, e in w if s in sset)


def substitute(w: FreeWord, images: dict[int, FreeWord]) -> FreeWord:
    """Apply the homomorphism sending each symbol to its image word; reduce."""
    parts = []
    for s, e in w:
        img = images[s]
        parts.append(img if e == 1 else invert(img))
    return multiply(*parts)


def check_alphabet(w: FreeWord, alphabet: Alphabet) -> None:
    """Raise AlphabetError when a letter of ``w`` is not interned in ``alphabet``."""
    for s, _ in w:
        alphabet._check_sym(s)

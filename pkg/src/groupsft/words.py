"""Free-group words over a named generator alphabet.

A :class:`Word` is an immutable sequence of :class:`Letter` values.  Words are
freely reduced on construction; :meth:`Word.raw` keeps an unreduced form for the
few places (parsing, substitution logs) that need one.

Text syntax: whitespace-separated tokens ``name``, ``name^-1`` or ``name^k``;
the empty word is written ``1``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from math import gcd
from typing import NamedTuple

from .errors import MissingRule, UnknownGenerator, WordSyntaxError

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^([+-]?\d+))?\Z")


def check_generator_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValueError(f"invalid generator name: {name!r}")
    return name


class Letter(NamedTuple):
    gen: str
    sign: int  # +1 or -1

    def inverse(self) -> Letter:
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return self.gen if self.sign > 0 else f"{self.gen}^-1"


def letters_of(generators: Iterable[str]) -> tuple[Letter, ...]:
    """Letters in canonical order ``s1, s1^-1, s2, s2^-1, ...``."""
    out = []
    for g in generators:
        out.append(Letter(g, 1))
        out.append(Letter(g, -1))
    return tuple(out)


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for x in letters:
        if stack and stack[-1].gen == x.gen and stack[-1].sign == -x.sign:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class Word:
    """An element of the free group on some set of named generators."""

    __slots__ = ("letters", "_reduced", "_hash")

    def __init__(self, letters: Iterable[Letter | tuple[str, int]] = ()):
        self.letters = _free_reduce(Letter(*x) for x in letters)
        self._reduced = True
        self._hash = None

    @classmethod
    def raw(cls, letters: Iterable[Letter | tuple[str, int]]) -> Word:
        w = cls.__new__(cls)
        w.letters = tuple(Letter(*x) for x in letters)
        w._reduced = False
        w._hash = None
        return w

    @classmethod
    def _trusted(cls, letters: tuple[Letter, ...]) -> Word:
        w = cls.__new__(cls)
        w.letters = letters
        w._reduced = True
        w._hash = None
        return w

    @classmethod
    def gen(cls, name: str, power: int = 1) -> Word:
        sign = 1 if power > 0 else -1
        return cls._trusted((Letter(name, sign),) * abs(power))

    @classmethod
    def parse(cls, text: str) -> Word:
        return parse_word(text)

    # -- structure --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    @property
    def is_reduced(self) -> bool:
        return self._reduced or _free_reduce(self.letters) == self.letters

    def reduced(self) -> Word:
        return self if self._reduced else Word(self.letters)

    def generators(self) -> set[str]:
        return {x.gen for x in self.letters}

    # -- group operations -------------------------------------------------

    def __mul__(self, other: Word) -> Word:
        if not isinstance(other, Word):
            return NotImplemented
        if not (self._reduced and other._reduced):
            return Word(self.letters + other.letters)
        a, b = self.letters, other.letters
        i, n, la = 0, min(len(a), len(b)), len(a)
        while i < n and a[la - 1 - i].gen == b[i].gen and a[la - 1 - i].sign == -b[i].sign:
            i += 1
        return Word._trusted(a[: la - i] + b[i:])

    def inverse(self) -> Word:
        inv = tuple(Letter(x.gen, -x.sign) for x in reversed(self.letters))
        if self._reduced:
            return Word._trusted(inv)
        return Word.raw(inv)

    __invert__ = inverse

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** -n
        out = Word()
        base = self.reduced()
        for _ in range(n):
            out = out * base
        return out

    # -- comparison -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    out: list[str] = []
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        power = (j - i) * letters[i].sign
        out.append(letters[i].gen if power == 1 else f"{letters[i].gen}^{power}")
        i = j
    return " ".join(out)


def parse_word(text: str, *, reduce_: bool = True) -> Word:
    """Parse ``a b^-1 c^2``.  ``1`` (alone or as a token) is the identity."""
    letters: list[Letter] = []
    col = 0
    for tok in text.split():
        col = text.index(tok, col)
        if tok == "1":
            col += 1
            continue
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise WordSyntaxError(f"bad token {tok!r}", column=col + 1)
        power = int(m.group(2)) if m.group(2) is not None else 1
        if power == 0:
            raise WordSyntaxError(f"zero exponent in {tok!r}", column=col + 1)
        sign = 1 if power > 0 else -1
        letters.extend([Letter(m.group(1), sign)] * abs(power))
        col += len(tok)
    return Word(letters) if reduce_ else Word.raw(letters)


# -- operations ---------------------------------------------------------------


def reduce(w: Word) -> Word:
    return w.reduced()


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, u)`` with ``core`` cyclically reduced and ``w = u core u^-1``."""
    letters = w.letters
    peeled: list[Letter] = []
    # unreduced input: peel one outer pair at a time, reducing the core in between
    while True:
        if len(letters) >= 2 and letters[0].gen == letters[-1].gen and letters[0].sign == -letters[-1].sign:
            peeled.append(letters[0])
            letters = _free_reduce(letters[1:-1])
        elif not w._reduced and _free_reduce(letters) != letters:
            letters = _free_reduce(letters)
        else:
            break
    return Word._trusted(letters), Word(peeled)


def is_cyclically_reduced(w: Word) -> bool:
    if not w.is_reduced:
        return False
    x = w.letters
    return len(x) < 2 or not (x[0].gen == x[-1].gen and x[0].sign == -x[-1].sign)


def occurrence_counts(w: Word, c: str) -> tuple[int, int]:
    """Raw counts ``(#c, #c^-1)`` in the letters of ``w`` as stored."""
    return w.letters.count(Letter(c, 1)), w.letters.count(Letter(c, -1))


def exponent_sum(w: Word, c: str) -> int:
    pos, neg = occurrence_counts(w, c)
    return pos - neg


def abelianization_vector(w: Word, alphabet: Sequence[str]) -> tuple[int, ...]:
    unknown = w.generators() - set(alphabet)
    if unknown:
        raise UnknownGenerator(sorted(unknown)[0])
    return tuple(exponent_sum(w, s) for s in alphabet)


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def substitute(w: Word, rules: Mapping[str, Word], *, reduce_: bool = True) -> Word:
    """Replace each ``s`` by ``rules[s]`` and each ``s^-1`` by its inverse."""
    out: list[Letter] = []
    for x in w.letters:
        try:
            image = rules[x.gen]
        except KeyError:
            raise MissingRule(x.gen) from None
        out.extend(image.letters if x.sign > 0 else image.inverse().letters)
    return Word(out) if reduce_ else Word.raw(out)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return u * v * u.inverse() * v.inverse()


def cyclic_conjugates(w: Word) -> list[Word]:
    x = w.letters
    return [Word._trusted(x[i:] + x[:i]) for i in range(len(x))] if x else [w]


def split_at_generator(w: Word, gen: str) -> Word | None:
    """If ``gen`` occurs exactly once in ``w``, write a cyclic conjugate of
    ``w`` or of ``w^-1`` as ``gen · rest`` and return ``rest``; else ``None``."""
    hits = [i for i, x in enumerate(w.letters) if x.gen == gen]
    if len(hits) != 1:
        return None
    i = hits[0]
    x = w.letters
    rot = x[i:] + x[:i]
    if rot[0].sign < 0:
        rot = tuple(Letter(y.gen, -y.sign) for y in reversed(rot))
        rot = rot[-1:] + rot[:-1]
    return Word(rot[1:])

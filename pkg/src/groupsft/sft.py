"""Patterns, subshifts of finite type and configurations.

Two kinds of configuration are supported:

* :class:`BallConfig` colors (part of) a finite ball.  Checks on it are
  windowed: they can refute membership in an SFT but never prove it.
* :class:`QuotientConfig` colors the cosets of a finite-index subgroup ``K``;
  it stands for the configuration ``y(g) = color(K g)`` on the whole group, so
  checks on it are exact.
"""

from __future__ import annotations

import json
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple

from .errors import DuplicateSupportPoint, PatternError
from .groups.ball import Ball
from .groups.cosets import CosetTable
from .groups.models import GroupModel, model_from_spec
from .words import Word, parse_word

SFT_FORMAT = "sft/1"

Symbol = Hashable


class ProductLetter(NamedTuple):
    base: Any
    coset: int

    def __str__(self) -> str:
        return f"({self.base},{self.coset})"


def symbol_to_json(s: Symbol):
    if isinstance(s, ProductLetter):
        return [symbol_to_json(s.base), s.coset]
    return s


def symbol_from_json(v) -> Symbol:
    if isinstance(v, list):
        return ProductLetter(symbol_from_json(v[0]), int(v[1]))
    return v


class Match(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Pattern:
    support: tuple[Word, ...]
    colors: tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(w.reduced() for w in self.support))
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.support) != len(self.colors):
            raise PatternError("support and colors differ in length")
        if len(set(self.support)) != len(self.support):
            raise DuplicateSupportPoint(f"repeated support word in {self}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Word | str, Symbol]]) -> Pattern:
        sup, col = [], []
        for w, c in pairs:
            sup.append(parse_word(w) if isinstance(w, str) else w)
            col.append(c)
        return cls(tuple(sup), tuple(col))

    def items(self):
        return zip(self.support, self.colors)

    def __len__(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{w} -> {c}" for w, c in self.items()) + "}"


def check_pattern(model: GroupModel, p: Pattern) -> None:
    for w in p.support:
        model.check(w)
    for i in range(len(p.support)):
        for j in range(i + 1, len(p.support)):
            if model.equal(p.support[i], p.support[j]):
                raise DuplicateSupportPoint(
                    f"support points {p.support[i]} and {p.support[j]} are equal in the group"
                )


@dataclass(frozen=True)
class Sft:
    alphabet: tuple[Symbol, ...]
    forbidden: tuple[Pattern, ...]
    model: GroupModel
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        if not self.alphabet:
            raise PatternError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise PatternError("alphabet letters must be distinct")
        letters = set(self.alphabet)
        for p in self.forbidden:
            bad = [c for c in p.colors if c not in letters]
            if bad:
                raise PatternError(f"pattern {p} uses colors {bad} outside the alphabet")
            check_pattern(self.model, p)

    # -- file format -------------------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"format": SFT_FORMAT}
        if self.provenance is not None:
            d["provenance"] = self.provenance
        d["model"] = self.model.spec()
        d["alphabet"] = [symbol_to_json(a) for a in self.alphabet]
        d["forbidden"] = [[[str(w), symbol_to_json(c)] for w, c in p.items()] for p in self.forbidden]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Sft:
        if d.get("format") != SFT_FORMAT:
            raise PatternError(f"not an SFT file (format {d.get('format')!r})")
        return cls(
            tuple(symbol_from_json(a) for a in d["alphabet"]),
            tuple(
                Pattern.from_pairs((parse_word(w), symbol_from_json(c)) for w, c in pat)
                for pat in d["forbidden"]
            ),
            model_from_spec(d["model"]),
            d.get("provenance"),
        )

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Sft:
        return cls.from_dict(json.loads(text))


# -- configurations ----------------------------------------------------------------


@dataclass(frozen=True)
class BallConfig:
    ball: Ball
    colors: tuple[Symbol | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.colors) != len(self.ball):
            raise ValueError("one color slot per ball element is required")

    @classmethod
    def from_function(cls, ball: Ball, f) -> BallConfig:
        return cls(ball, tuple(f(w) for w in ball.words))

    @classmethod
    def constant(cls, ball: Ball, c: Symbol) -> BallConfig:
        return cls(ball, (c,) * len(ball))

    def at(self, w: Word) -> Symbol | None:
        i = self.ball.find(w)
        return None if i is None else self.colors[i]

    @property
    def is_total(self) -> bool:
        return all(c is not None for c in self.colors)

    def agrees_with(self, other: BallConfig) -> bool:
        """True if no position is colored differently by the two (same ball)."""
        return all(a is None or b is None or a == b for a, b in zip(self.colors, other.colors))

    def check_alphabet(self, alphabet: Sequence[Symbol]) -> None:
        allowed = set(alphabet)
        bad = {c for c in self.colors if c is not None and c not in allowed}
        if bad:
            raise PatternError(f"colors {sorted(map(str, bad))} are outside the alphabet")


@dataclass(frozen=True)
class QuotientConfig:
    """The configuration ``g -> colors[coset(g) - 1]``, fixed by the subgroup of ``table``."""

    table: CosetTable
    colors: tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.colors) != self.table.index or any(c is None for c in self.colors):
            raise ValueError("a quotient configuration colors every coset")

    def at(self, w: Word) -> Symbol:
        return self.colors[self.table.coset_of(w) - 1]

    def to_ball(self, ball: Ball) -> BallConfig:
        return BallConfig(ball, tuple(self.at(w) for w in ball.words))


@dataclass(frozen=True)
class OrbitStabilizerReport:
    """Result of scanning short group elements for shifts that fix a configuration.

    With ``exact`` False (ball configurations) a listed element only agrees
    with the configuration on the overlap of the window, a necessary
    condition for fixing it.  ``distinct_translates_found`` counts translates
    that pairwise disagree somewhere, a lower bound on the orbit size.
    """

    distinct_translates_found: int
    stabilizing_elements: tuple[Word, ...]
    radius_checked: int
    exact: bool = False

    @property
    def semantics(self) -> str:
        return "exact" if self.exact else "necessary-condition"


# -- shift action and matching -----------------------------------------------------


def shift(model: GroupModel, g: Word, c: BallConfig) -> BallConfig:
    """``(g . c)(h) = c(g^-1 h)``; cells whose preimage leaves the ball are uncolored."""
    ball = c.ball
    ginv = g.inverse()
    out = []
    for w in ball.words:
        j = ball.find(ginv * w)
        out.append(None if j is None else c.colors[j])
    return BallConfig(ball, tuple(out))


def appears(model: GroupModel, p: Pattern, c: BallConfig, at: Word) -> Match:
    """Whether ``p`` occurs with its identity point at ``at``.

    A definite mismatch anywhere gives NO; otherwise any cell outside the ball
    or uncolored gives UNKNOWN.
    """
    unknown = False
    for q, col in p.items():
        j = c.ball.find(at * q)
        if j is None or c.colors[j] is None:
            unknown = True
        elif c.colors[j] != col:
            return Match.NO
    return Match.UNKNOWN if unknown else Match.YES


def placements(s: Sft, ball: Ball) -> list[tuple[int, int, tuple[int, ...]]]:
    """All ``(pattern index, anchor index, cells)`` whose support lies inside ``ball``."""
    out = []
    for a, w in enumerate(ball.words):
        for pi, p in enumerate(s.forbidden):
            cells = []
            for q in p.support:
                j = ball.find(w * q)
                if j is None:
                    break
                cells.append(j)
            else:
                out.append((pi, a, tuple(cells)))
    return out


def violations(s: Sft, c: BallConfig, *, compiled=None) -> list[tuple[Pattern, Word]]:
    """Every occurrence of a forbidden pattern visible inside the ball.

    Ordered by anchor (ball order), then by pattern index.
    """
    out = []
    for pi, a, cells in compiled if compiled is not None else placements(s, c.ball):
        p = s.forbidden[pi]
        if all(c.colors[j] == col for j, col in zip(cells, p.colors)):
            out.append((p, c.ball.words[a]))
    return out


def quotient_placements(s: Sft, table: CosetTable) -> list[tuple[int, int, tuple[int, ...], tuple[Symbol, ...]]]:
    """``(pattern index, anchor coset, cosets, colors)`` for every pattern and anchor coset.

    Repeated cosets are merged; a placement demanding two colors on one coset
    can never match and is dropped.
    """
    out = []
    for i in range(1, table.index + 1):
        for pi, p in enumerate(s.forbidden):
            need: dict[int, Symbol] = {}
            ok = True
            for q, col in p.items():
                j = table.trace(q, i)
                if need.setdefault(j, col) != col:
                    ok = False
                    break
            if ok:
                out.append((pi, i, tuple(need), tuple(need.values())))
    return out


def _check_same_group(s: Sft, table: CosetTable) -> None:
    if tuple(table.presentation.generators) != tuple(s.model.generators):
        raise PatternError(
            f"coset table generators {table.presentation.generators} differ from the SFT's "
            f"{s.model.generators}"
        )


def quotient_violations(s: Sft, q: QuotientConfig) -> list[tuple[Pattern, int]]:
    """Exact: empty iff the periodic configuration induced by ``q`` lies in the SFT."""
    _check_same_group(s, q.table)
    out = []
    for pi, i, cosets, cols in quotient_placements(s, q.table):
        if all(q.colors[j - 1] == c for j, c in zip(cosets, cols)):
            out.append((s.forbidden[pi], i))
    return out


# -- exact periodicity of quotient configurations -------------------------------------


def _pair_orbit(table: CosetTable, a: int, b: int):
    seen = {(a, b)}
    stack = [(a, b)]
    cols = table.action
    while stack:
        x, y = stack.pop()
        for col in cols:
            pair = (col[x - 1], col[y - 1])
            if pair not in seen:
                seen.add(pair)
                stack.append(pair)
    return seen


def _cosets_equivalent(q: QuotientConfig, a: int, b: int) -> bool:
    """Whether ``g -> color(a g)`` and ``g -> color(b g)`` coincide on the whole group."""
    return all(q.colors[x - 1] == q.colors[y - 1] for x, y in _pair_orbit(q.table, a, b))


def quotient_fixed_by(q: QuotientConfig, g: Word) -> bool:
    """Exact test of ``g . y = y`` for the configuration ``y`` induced by ``q``."""
    return _cosets_equivalent(q, 1, q.table.coset_of(g.inverse()))


def quotient_orbit_size(q: QuotientConfig) -> int:
    """Exact size of the shift orbit of the configuration induced by ``q``."""
    classes: list[int] = []
    for j in range(1, q.table.index + 1):
        if not any(_cosets_equivalent(q, c, j) for c in classes):
            classes.append(j)
    return len(classes)

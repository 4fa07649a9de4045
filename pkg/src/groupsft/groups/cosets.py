"""Right coset tables: Todd-Coxeter enumeration, decomposition, serialization."""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from ..errors import BudgetExceeded, GroupSftError
from ..presentations import Presentation, parse_presentation
from ..words import Letter, Word, exponent_sum, letters_of, parse_word
from .models import GroupModel

TABLE_FORMAT = "coset-table/1"


@dataclass(frozen=True)
class CosetTable:
    """Right action of a group on the right cosets ``H g_1, ..., H g_k``.

    Cosets are numbered from 1, coset 1 is ``H`` itself and ``g_1`` is the
    empty word.  ``action[j][i - 1]`` is the coset ``(H g_i) x`` for the j-th
    letter ``x`` in ``letters_of(presentation.generators)``.
    """

    presentation: Presentation
    subgroup: tuple[Word, ...]
    action: tuple[tuple[int, ...], ...]
    representatives: tuple[Word, ...]

    @property
    def letters(self) -> tuple[Letter, ...]:
        return letters_of(self.presentation.generators)

    @property
    def index(self) -> int:
        return len(self.representatives)

    def _col(self, x: Letter) -> int:
        g = self.presentation.generators.index(x.gen)
        return 2 * g + (0 if x.sign > 0 else 1)

    def act(self, coset: int, x: Letter) -> int:
        return self.action[self._col(x)][coset - 1]

    def trace(self, w: Word, start: int = 1) -> int:
        c = start
        for x in w.letters:
            c = self.action[self._col(x)][c - 1]
        return c

    def coset_of(self, w: Word) -> int:
        return self.trace(w, 1)

    def representative(self, i: int) -> Word:
        return self.representatives[i - 1]

    def validate(self) -> None:
        k = self.index
        if not self.representatives or self.representatives[0]:
            raise GroupSftError("first representative must be the identity")
        for j, col in enumerate(self.action):
            if sorted(col) != list(range(1, k + 1)):
                raise GroupSftError(f"letter {self.letters[j]} does not act as a permutation")
            inv = self.action[j ^ 1]
            if any(inv[col[i] - 1] != i + 1 for i in range(k)):
                raise GroupSftError(f"letter {self.letters[j]} and its inverse disagree")
        for r in self.presentation.relators:
            for i in range(1, k + 1):
                if self.trace(r, i) != i:
                    raise GroupSftError(f"relator {r} moves coset {i}")
        for h in self.subgroup:
            if self.coset_of(h) != 1:
                raise GroupSftError(f"subgroup generator {h} moves coset 1")
        for i, g in enumerate(self.representatives, 1):
            if self.coset_of(g) != i:
                raise GroupSftError(f"representative {g} is not in coset {i}")

    # -- serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": TABLE_FORMAT,
            "presentation": str(self.presentation),
            "subgroup": [str(w) for w in self.subgroup],
            "representatives": [str(w) for w in self.representatives],
            "action": {str(x): list(col) for x, col in zip(self.letters, self.action)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> CosetTable:
        if d.get("format") != TABLE_FORMAT:
            raise GroupSftError(f"not a coset table (format {d.get('format')!r})")
        p = parse_presentation(d["presentation"])
        action = tuple(tuple(int(c) for c in d["action"][str(x)]) for x in letters_of(p.generators))
        t = cls(
            p,
            tuple(parse_word(w) for w in d["subgroup"]),
            action,
            tuple(parse_word(w) for w in d["representatives"]),
        )
        t.validate()
        return t

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CosetTable:
        return cls.from_dict(json.loads(text))


class _Enumerator:
    """HLT coset enumeration with union-find coincidence handling."""

    def __init__(self, ncols: int, max_cosets: int):
        self.ncols = ncols
        self.table: list[list[int | None]] = [[None] * ncols]
        self.parent = [0]
        self.live = 1
        self.max_cosets = max_cosets
        self.max_defined = 64 * max_cosets + 1024

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets or len(self.table) >= self.max_defined:
            raise BudgetExceeded(self.max_cosets, f"coset enumeration did not close within {self.max_cosets} cosets")
        n = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(n)
        self.live += 1
        self.table[c][x] = n
        self.table[n][x ^ 1] = c

    def merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = self.table[g][x]
                if d is None:
                    continue
                self.table[g][x] = None
                if self.table[d][x ^ 1] == g:
                    self.table[d][x ^ 1] = None
                mu, nu = self.rep(g), self.rep(d)
                if self.table[mu][x] is not None:
                    self.merge(nu, self.table[mu][x], queue)
                elif self.table[nu][x ^ 1] is not None:
                    self.merge(mu, self.table[nu][x ^ 1], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][x ^ 1] = mu

    def scan_and_fill(self, c: int, w: Sequence[int]) -> None:
        t = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] is not None:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][w[j] ^ 1] is not None:
                b = t[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])


def todd_coxeter(p: Presentation, subgroup_gens: Sequence[Word], max_cosets: int = 10_000) -> CosetTable:
    """Enumerate the right cosets of ``<subgroup_gens>`` in ``p``.

    Raises BudgetExceeded if the table does not close with at most
    ``max_cosets`` live cosets (the index may be infinite).
    """
    letters = letters_of(p.generators)
    col = {x: j for j, x in enumerate(letters)}
    for h in subgroup_gens:
        extra = h.generators() - set(p.generators)
        if extra:
            raise GroupSftError(f"subgroup generator {h} uses unknown generators {sorted(extra)}")

    def enc(w: Word) -> list[int]:
        return [col[x] for x in w.reduced().letters]

    rels = [enc(r) for r in p.relators if r.reduced()]
    subs = [enc(h) for h in subgroup_gens]
    e = _Enumerator(len(letters), max_cosets)
    for h in subs:
        e.scan_and_fill(0, h)
    c = 0
    while c < len(e.table):
        for r in rels:
            if not e.alive(c):
                break
            e.scan_and_fill(c, r)
        if e.alive(c):
            for x in range(len(letters)):
                if e.table[c][x] is None:
                    e.define(c, x)
        c += 1

    # canonical renumbering: BFS from coset 1 in letter order gives shortlex-least representatives
    number = {0: 1}
    reps = [Word()]
    order = [0]
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for x in range(len(letters)):
            b = e.rep(e.table[a][x])
            if b not in number:
                number[b] = len(order) + 1
                order.append(b)
                reps.append(reps[number[a] - 1] * Word((letters[x],)))
                queue.append(b)
    action = tuple(tuple(number[e.rep(e.table[a][x])] for a in order) for x in range(len(letters)))
    table = CosetTable(p, tuple(w.reduced() for w in subgroup_gens), action, tuple(reps))
    table.validate()
    return table


def schreier_generators(t: CosetTable) -> tuple[Word, ...]:
    """Generators ``g_i x (g_{i.x})^-1`` of the subgroup, trivial ones dropped."""
    out: list[Word] = []
    seen = set()
    for i in range(1, t.index + 1):
        for x in t.letters[::2]:
            w = t.representative(i) * Word((x,)) * t.representative(t.act(i, x)).inverse()
            if w and w not in seen and w.inverse() not in seen:
                seen.add(w)
                out.append(w)
    return tuple(out)


def coset_decompose(t: CosetTable, model: GroupModel, g: Word) -> tuple[Word, int]:
    """Factor ``g = h g_i`` with ``h`` in the subgroup; returns ``(h, i)``."""
    i = t.coset_of(g)
    return model.normal_form(g * t.representative(i).inverse()), i


def conjugate_generator(t: CosetTable, a: Word, i: int) -> Word:
    """``g_i^-1 a g_i`` as a reduced word."""
    g = t.representative(i)
    return g.inverse() * a.reduced() * g


@dataclass(frozen=True)
class HomCertificate:
    generator: str
    relator_sums: tuple[int, ...]

    @property
    def valid(self) -> bool:
        return all(s == 0 for s in self.relator_sums)

    def __bool__(self) -> bool:
        return self.valid


def exponent_hom_check(p: Presentation, c: str) -> HomCertificate:
    """Exponent sum at ``c`` descends to a homomorphism ``G -> Z`` iff every relator has sum 0."""
    return HomCertificate(c, tuple(exponent_sum(r, c) for r in p.relators))

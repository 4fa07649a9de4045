"""Finite balls in Cayley graphs."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence

from ..errors import ModelFailure
from ..words import Letter, Word, letters_of
from .models import GroupModel


class Ball:
    """Elements at word distance <= ``radius`` from the identity, in BFS order.

    ``words[i]`` is the shortlex-first geodesic reaching element ``i``;
    ``elements[i]`` is the model normal form of that word.  Edges follow the
    right Cayley graph: ``neighbor(i, x)`` is ``g_i x`` or None if outside.
    """

    def __init__(self, model: GroupModel, generators: Sequence[str], radius: int):
        self.model = model
        self.generators = tuple(generators)
        self.radius = radius
        self.letters: tuple[Letter, ...] = letters_of(self.generators)
        self.elements: list[Word] = []
        self.words: list[Word] = []
        self.distance: list[int] = []
        self._index: dict = {}
        self._buckets: dict = defaultdict(list)
        self.adjacency: list[tuple[int | None, ...]] = []

    def __len__(self) -> int:
        return len(self.elements)

    def _add(self, word: Word, dist: int) -> int:
        nf = self.model.normal_form(word)
        i = len(self.elements)
        self.elements.append(nf)
        self.words.append(word)
        self.distance.append(dist)
        if self.model.canonical:
            self._index[nf] = i
        else:
            self._buckets[self.model.invariant(word)].append(i)
        return i

    def find(self, w: Word) -> int | None:
        """Index of the element represented by ``w``, or None if outside the ball."""
        if self.model.canonical:
            return self._index.get(self.model.normal_form(w))
        for j in self._buckets.get(self.model.invariant(w), ()):
            if self.model.equal(self.elements[j], w):
                return j
        return None

    def neighbor(self, i: int, x: Letter) -> int | None:
        return self.adjacency[i][self.letters.index(x)]

    def __repr__(self) -> str:
        return f"Ball(radius={self.radius}, size={len(self)})"


def build_ball(model: GroupModel, gens: Sequence[str] | None = None, radius: int = 0) -> Ball:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    gens = tuple(model.generators if gens is None else gens)
    try:
        b = Ball(model, gens, radius)
        b._add(Word(), 0)
        frontier = [0]
        for d in range(1, radius + 1):
            nxt = []
            for i in frontier:
                for x in b.letters:
                    w = b.words[i] * Word((x,))
                    if b.find(w) is None:
                        nxt.append(b._add(w, d))
            frontier = nxt
        b.adjacency = [tuple(b.find(b.words[i] * Word((x,))) for x in b.letters) for i in range(len(b))]
    except ModelFailure:
        raise
    except Exception as exc:
        raise ModelFailure(f"model {model!r} failed while building a ball: {exc}") from exc
    return b

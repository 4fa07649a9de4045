"""Moving SFTs from a subgroup ``H`` to a supergroup ``G``, and lifting configurations.

The free extension keeps the alphabet and reads the forbidden patterns of
``H`` inside ``G``.  The right extension (finite index only) uses the product
alphabet ``A x [k]``: the second coordinate names the right coset ``H g_i`` a
cell belongs to, and the first coordinate carries a configuration of the
original SFT along that coset.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field

from .errors import (
    AlphabetMismatch,
    DecompositionFailure,
    MissingRule,
    PreconditionViolated,
    PropagationContradiction,
    SupportOutsideSubgroup,
)
from .groups.ball import Ball, build_ball
from .groups.cosets import CosetTable, conjugate_generator, todd_coxeter
from .groups.models import DirectWithCyclic, GroupModel, SemidirectFreeByCyclic, model_from_spec
from .presentations import Presentation
from .sft import BallConfig, Pattern, ProductLetter, QuotientConfig, Sft
from .words import Word, commutator, parse_word, substitute

EMBEDDING_FORMAT = "embedding/1"


@dataclass(frozen=True)
class Embedding:
    """A subgroup ``H`` of ``supergroup`` given by images of ``H``'s generators.

    ``generators`` maps each generator name of ``H`` to a word of ``G``; the
    images form the generating set ``S_H``.  ``table`` is the right coset
    table of ``H`` in ``G``, required for the right extension.  ``subgroup``
    is a model of ``H`` itself, needed only where configurations on ``H``
    are built or read.
    """

    supergroup: GroupModel
    generators: Mapping[str, Word]
    table: CosetTable | None = None
    subgroup: GroupModel | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", {k: v.reduced() for k, v in self.generators.items()})
        for w in self.generators.values():
            self.supergroup.check(w)
        if self.subgroup is not None and tuple(self.subgroup.generators) != tuple(self.generators):
            raise PreconditionViolated(
                f"subgroup model generators {self.subgroup.generators} do not match "
                f"the embedded generators {tuple(self.generators)}"
            )
        if self.table is not None:
            t = self.table
            if tuple(t.presentation.generators) != tuple(self.supergroup.generators):
                raise PreconditionViolated("coset table is not over the supergroup's generators")
            for name, w in self.generators.items():
                if t.coset_of(w) != 1:
                    raise PreconditionViolated(f"subgroup generator {name} = {w} does not fix coset 1")
            if set(t.subgroup) != set(self.subgroup_gens):
                raise PreconditionViolated("coset table was enumerated for a different subgroup")

    @classmethod
    def with_coset_table(cls, supergroup: GroupModel, generators: Mapping[str, Word],
                         subgroup: GroupModel | None = None, max_cosets: int = 10_000) -> Embedding:
        gens = {k: v.reduced() for k, v in generators.items()}
        t = todd_coxeter(supergroup.presentation(), list(gens.values()), max_cosets)
        return cls(supergroup, gens, t, subgroup)

    @property
    def subgroup_gens(self) -> tuple[Word, ...]:
        return tuple(self.generators.values())

    @property
    def index(self) -> int:
        if self.table is None:
            raise PreconditionViolated("no coset table: the index is unknown")
        return self.table.index

    def image(self, w: Word) -> Word:
        """The word of ``G`` obtained by substituting the generator images into ``w``."""
        try:
            return substitute(w, self.generators)
        except MissingRule as exc:
            raise SupportOutsideSubgroup(
                f"{w} uses {exc.generator}, which is not a generator of the subgroup"
            ) from None

    def to_dict(self) -> dict:
        return {
            "format": EMBEDDING_FORMAT,
            "subgroup_model": None if self.subgroup is None else self.subgroup.spec(),
            "supergroup_model": self.supergroup.spec(),
            "generators": {k: str(v) for k, v in self.generators.items()},
            "coset_table": None if self.table is None else self.table.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Embedding:
        if d.get("format") != EMBEDDING_FORMAT:
            raise PreconditionViolated(f"not an embedding file (format {d.get('format')!r})")
        sub = d.get("subgroup_model")
        table = d.get("coset_table")
        return cls(
            model_from_spec(d["supergroup_model"]),
            {k: parse_word(v) for k, v in d["generators"].items()},
            None if table is None else CosetTable.from_dict(table),
            None if sub is None else model_from_spec(sub),
        )

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Embedding:
        return cls.from_dict(json.loads(text))


def _check_source(x_sft: Sft, e: Embedding) -> None:
    missing = set(x_sft.model.generators) - set(e.generators)
    if missing:
        raise SupportOutsideSubgroup(f"generators {sorted(missing)} of the SFT's group have no image")


# -- the two extensions ----------------------------------------------------------------


def free_extension(x_sft: Sft, e: Embedding) -> Sft:
    """Same alphabet, same forbidden patterns, supports read as elements of ``G``."""
    _check_source(x_sft, e)
    forbidden = [Pattern(tuple(e.image(q) for q in p.support), p.colors) for p in x_sft.forbidden]
    prov = {
        "construction": "free",
        "subgroup_generators": {k: str(v) for k, v in e.generators.items()},
        "patterns": len(forbidden),
    }
    return Sft(x_sft.alphabet, tuple(forbidden), e.supergroup, prov)


def right_extension(x_sft: Sft, e: Embedding) -> Sft:
    """The SFT over ``A x [k]`` built from the coset table of ``H`` in ``G``.

    Type (1) patterns forbid leaving a coset label along a conjugated
    generator ``a_i = g_i^-1 a g_i``; type (2) patterns are the original
    forbidden patterns conjugated into each coset and tagged with its index.
    """
    if e.table is None:
        raise PreconditionViolated("the right extension needs a coset table (finite index)")
    _check_source(x_sft, e)
    t = e.table
    k = t.index
    alphabet = tuple(ProductLetter(c, i) for c in x_sft.alphabet for i in range(1, k + 1))
    conj = {name: [conjugate_generator(t, w, i) for i in range(1, k + 1)] for name, w in e.generators.items()}

    type1 = []
    for name in e.generators:
        for c1 in x_sft.alphabet:
            for c2 in x_sft.alphabet:
                for i in range(1, k + 1):
                    a_i = conj[name][i - 1]
                    for j in range(1, k + 1):
                        if j != i:
                            type1.append(Pattern((Word(), a_i), (ProductLetter(c1, i), ProductLetter(c2, j))))
    type2 = []
    for p in x_sft.forbidden:
        images = [e.image(q) for q in p.support]
        for i in range(1, k + 1):
            g = t.representative(i)
            type2.append(
                Pattern(tuple(g.inverse() * q * g for q in images), tuple(ProductLetter(c, i) for c in p.colors))
            )
    prov = {
        "construction": "right",
        "subgroup_generators": {k_: str(v) for k_, v in e.generators.items()},
        "index": k,
        "representatives": [str(g) for g in t.representatives],
        "conjugated_generators": {name: [str(w) for w in ws] for name, ws in conj.items()},
        "type1": len(type1),
        "type2": len(type2),
    }
    return Sft(alphabet, tuple(type1 + type2), e.supergroup, prov)


def coset_index_sft(s: Sft) -> Sft:
    """The type (1) constraints of a right extension seen on the coset labels alone.

    Type (1) patterns forbid every pair of first coordinates, so a coloring
    passes them iff its second-coordinate projection passes this SFT over
    the alphabet ``1..k``.
    """
    k, conj = _right_extension_data(s)
    forbidden = [
        Pattern((Word(), parse_word(ws[i - 1])), (i, j))
        for ws in conj.values()
        for i in range(1, k + 1)
        for j in range(1, k + 1)
        if j != i
    ]
    return Sft(tuple(range(1, k + 1)), tuple(forbidden), s.model, {"construction": "coset-index", "index": k})


def _right_extension_data(s: Sft) -> tuple[int, dict[str, list[str]]]:
    prov = s.provenance or {}
    if prov.get("construction") != "right":
        raise PreconditionViolated("expected an SFT produced by right_extension")
    return int(prov["index"]), dict(prov["conjugated_generators"])


# -- configuration lifts -----------------------------------------------------------------


def product_lift(x: BallConfig, k: int, *, generator: str = "z", radius: int | None = None) -> BallConfig:
    """``x^(g, i) = x(g)`` on a ball of ``H x Z/k``; cells whose ``H`` part leaves ``x``'s ball stay uncolored."""
    model = DirectWithCyclic(x.ball.model, k, generator)
    ball = build_ball(model, radius=x.ball.radius if radius is None else radius)
    out = []
    for w in ball.words:
        h, _ = model.split(w)
        out.append(x.at(h))
    return BallConfig(ball, tuple(out))


def product_lift_quotient(x: QuotientConfig, k: int, *, generator: str = "z",
                          max_cosets: int = 10_000) -> QuotientConfig:
    """Exact form of :func:`product_lift` for ``x`` periodic under ``K``: periodic under ``K x {0}``."""
    base = x.table.presentation
    if generator in base.generators:
        raise ValueError(f"{generator} clashes with a generator of H")
    z = Word.gen(generator)
    rels = list(base.relators) + [z ** k] + [commutator(Word.gen(s), z) for s in base.generators]
    p = Presentation(base.generators + (generator,), tuple(rels))
    t = todd_coxeter(p, list(x.table.subgroup), max_cosets)
    colors = tuple(x.at(Word(l for l in w.letters if l.gen != generator)) for w in t.representatives)
    return QuotientConfig(t, colors)


def _subgroup_model(e: Embedding) -> GroupModel:
    if e.subgroup is None:
        raise PreconditionViolated("this operation needs a model of the subgroup")
    return e.subgroup


def periodic_right_lift(x: QuotientConfig | BallConfig, e: Embedding, *, radius: int | None = None,
                        strict: bool = True, max_cosets: int = 10_000) -> QuotientConfig | BallConfig:
    """``y(h g_i) = (x(h), i)``.

    For a QuotientConfig periodic under ``K <= H`` the result is the exact
    configuration on ``G``, periodic under ``K``.  For a BallConfig the result
    colors a ball of ``G``; with ``strict`` every cell must decompose as
    ``h g_i`` with ``h`` in ``x``'s ball, otherwise DecompositionFailure.
    """
    if e.table is None:
        raise PreconditionViolated("lifting along the right extension needs a coset table")
    t = e.table
    if isinstance(x, QuotientConfig):
        if tuple(x.table.presentation.generators) != tuple(e.generators):
            raise PreconditionViolated("the quotient configuration is not over the subgroup's generators")
        k_gens = [e.image(w) for w in x.table.subgroup]
        tk = todd_coxeter(t.presentation, k_gens, max_cosets)
        # the cosets K h (h in H) sit inside K\G; find where each one landed
        where: dict[int, int] = {}
        for j, u in enumerate(x.table.representatives, 1):
            where[tk.coset_of(e.image(u))] = j
        colors = []
        for c, w in enumerate(tk.representatives, 1):
            i = t.coset_of(w)
            hc = tk.trace(t.representative(i).inverse(), c)
            if hc not in where:
                raise DecompositionFailure(f"coset {c} of K in G does not decompose through H")
            colors.append(ProductLetter(x.colors[where[hc] - 1], i))
        return QuotientConfig(tk, tuple(colors))

    ball = build_ball(e.supergroup, radius=x.ball.radius if radius is None else radius)
    out: list = [None] * len(ball)
    for h, col in zip(x.ball.words, x.colors):
        if col is None:
            continue
        hg = e.image(h)
        for i in range(1, t.index + 1):
            j = ball.find(hg * t.representative(i))
            if j is not None:
                out[j] = ProductLetter(col, i)
    if strict:
        missing = [str(ball.words[j]) for j, c in enumerate(out) if c is None]
        if missing:
            raise DecompositionFailure(
                f"{len(missing)} cells (first {missing[0]}) are not h g_i with h colored in the input ball"
            )
    return BallConfig(ball, tuple(out))


def _first(c) -> object:
    if c is None:
        return None
    if not isinstance(c, ProductLetter):
        raise AlphabetMismatch(f"color {c!r} is not a product letter")
    return c.base


def coset_restriction(y: BallConfig | QuotientConfig, e: Embedding, i: int, *,
                      ball: Ball | None = None, table: CosetTable | None = None) -> BallConfig | QuotientConfig:
    """``x(h) = pi_1(y(h g_i))``.

    For a BallConfig the result lives on ``ball`` (default: the ball of ``H``
    with ``y``'s radius); cells whose image leaves ``y``'s ball stay
    uncolored.  For a QuotientConfig pass ``table``, the coset table of the
    period subgroup inside ``H``; the result is exact.
    """
    if e.table is None:
        raise PreconditionViolated("coset restriction needs a coset table")
    if not 1 <= i <= e.table.index:
        raise ValueError(f"coset index {i} out of range 1..{e.table.index}")
    g = e.table.representative(i)
    if isinstance(y, QuotientConfig):
        if table is None:
            raise PreconditionViolated("pass the coset table of the period subgroup in H")
        return QuotientConfig(table, tuple(_first(y.at(e.image(u) * g)) for u in table.representatives))
    if ball is None:
        ball = build_ball(_subgroup_model(e), radius=y.ball.radius)
    return BallConfig(ball, tuple(_first(y.at(e.image(h) * g)) for h in ball.words))


def cyclic_lift(x: BallConfig, model: SemidirectFreeByCyclic, a: Word | None = None,
                *, radius: int | None = None) -> BallConfig:
    """``x^(a^i h) = x(h)`` on a ball of the free-by-cyclic group ``model``."""
    if a is not None and a.reduced() != Word.gen(model.t):
        raise PreconditionViolated(f"{a} is not the transversal generator {model.t}")
    if set(x.ball.model.generators) != set(model.free):
        raise PreconditionViolated("x must live on the free factor of the model")
    ball = build_ball(model, radius=x.ball.radius if radius is None else radius)
    return BallConfig(ball, tuple(x.at(model.decompose(w)[1]) for w in ball.words))


# -- coset label propagation -------------------------------------------------------------


@dataclass(frozen=True)
class CosetClosure:
    """Possible coset labels of every ball cell after propagation."""

    ball: Ball
    domains: tuple[frozenset[int], ...]

    @property
    def labels(self) -> tuple[int | None, ...]:
        return tuple(next(iter(d)) if len(d) == 1 else None for d in self.domains)

    def label(self, w: Word) -> int | None:
        j = self.ball.find(w)
        return None if j is None else self.labels[j]


@dataclass
class _Reason:
    cell: int
    text: str
    parent: int | None = field(default=None)


def coset_color_closure(s: Sft, c: BallConfig) -> CosetClosure:
    """Propagate coset labels through the type (1) constraints of a right extension.

    The constraint for ``a`` and ``i`` reads: if ``g`` is labeled ``i`` then
    so is ``g a_i``.  Labels are propagated to arc consistency inside the
    ball; an emptied domain raises PropagationContradiction whose ``path``
    lists the cells and steps that forced it.
    """
    k, conj = _right_extension_data(s)
    ball = c.ball
    n = len(ball)
    full = frozenset(range(1, k + 1))
    dom: list[frozenset[int]] = []
    why: list[_Reason | None] = []
    for j, col in enumerate(c.colors):
        if col is None:
            dom.append(full)
            why.append(None)
        else:
            if not isinstance(col, ProductLetter):
                raise AlphabetMismatch(f"color {col!r} is not a product letter")
            dom.append(frozenset({col.coset}))
            why.append(_Reason(j, f"{ball.words[j]} is colored with coset label {col.coset}"))

    # edges (g, i, g a_i, name) inside the ball, indexed by both endpoints
    words = {name: [parse_word(w) for w in ws] for name, ws in conj.items()}
    edges = []
    touching: list[list[int]] = [[] for _ in range(n)]
    for g in range(n):
        for name, ws in words.items():
            for i in range(1, k + 1):
                h = ball.find(ball.words[g] * ws[i - 1])
                if h is not None and h != g:
                    touching[g].append(len(edges))
                    touching[h].append(len(edges))
                    edges.append((g, i, h, name))

    def path_to(j: int) -> list[tuple[Word, str]]:
        out = []
        seen = set()
        while j is not None and j not in seen and why[j] is not None:
            seen.add(j)
            out.append((ball.words[j], why[j].text))
            j = why[j].parent
        return out[::-1]

    def shrink(j: int, new: frozenset[int], reason: _Reason) -> bool:
        if new == dom[j]:
            return False
        dom[j] = new
        why[j] = reason
        if not new:
            path = path_to(j)
            raise PropagationContradiction(
                f"no coset label is possible at {ball.words[j]}", path
            )
        return True

    queue = deque(range(len(edges)))
    queued = [True] * len(edges)
    while queue:
        ei = queue.popleft()
        queued[ei] = False
        g, i, h, name = edges[ei]
        changed = []
        if i not in dom[h] and i in dom[g]:
            text = f"{ball.words[g]} cannot be {i}: its {name}_{i} neighbor {ball.words[h]} excludes {i}"
            if shrink(g, dom[g] - {i}, _Reason(g, text, h)):
                changed.append(g)
        if dom[g] == {i} and dom[h] != dom[h] & {i}:
            text = f"{ball.words[h]} is {i}: reached from {ball.words[g]} along {name}_{i}"
            if shrink(h, dom[h] & {i}, _Reason(h, text, g)):
                changed.append(h)
        for j in changed:
            for other in touching[j]:
                if not queued[other]:
                    queued[other] = True
                    queue.append(other)
    return CosetClosure(ball, tuple(dom))

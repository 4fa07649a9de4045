"""Group presentations, Tietze moves and one-relator rewriting.

The central routine is :func:`magnus_moldavansky`: starting from a one-relator
presentation on at least three generators it either exhibits a generator
missing from the relator (a free-product splitting, hence infinitely many
ends) or rewrites the presentation until some generator occurring in the
relator has exponent sum zero.  Every rewrite is recorded as a replayable
sequence of :class:`TietzeStep` values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce as _fold
from typing import Iterable, Sequence, Union

from .citations import Citation, cite
from .errors import (
    GeneratorAbsentFromRelator,
    InapplicableStep,
    PreconditionViolated,
    WordSyntaxError,
)
from .words import (
    Word,
    check_generator_name,
    commutator,
    cyclic_conjugates,
    cyclic_reduce,
    exponent_sum,
    is_cyclically_reduced,
    parse_word,
    split_at_generator,
    substitute,
)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        for g in self.generators:
            check_generator_name(g)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generator names in {self.generators}")
        known = set(self.generators)
        for r in self.relators:
            extra = r.generators() - known
            if extra:
                raise ValueError(f"relator {r} uses unlisted generator(s) {sorted(extra)}")

    @classmethod
    def parse(cls, text: str) -> Presentation:
        return parse_presentation(text)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def is_normalized(self) -> bool:
        return all(is_cyclically_reduced(r) for r in self.relators)

    def __str__(self) -> str:
        gens = " ".join(self.generators)
        rels = " , ".join(str(r) for r in self.relators)
        left = f"< {gens} |" if gens else "< |"
        return f"{left} {rels} >" if rels else f"{left} >"


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a b c | a b c , a^2 b >``; ``#`` starts a comment."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)

    def where(offset: int) -> tuple[int, int]:
        line = clean.count("\n", 0, offset) + 1
        col = offset - (clean.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def fail(msg: str, offset: int):
        line, col = where(offset)
        raise WordSyntaxError(msg, line, col)

    start = clean.find("<")
    if start < 0 or clean[:start].strip():
        fail("expected '<'", start if start >= 0 else len(clean) - len(clean.lstrip()))
    bar = clean.find("|", start)
    if bar < 0:
        fail("expected '|'", len(clean))
    end = clean.find(">", bar)
    if end < 0:
        fail("expected '>'", len(clean))
    if clean[end + 1 :].strip():
        fail("trailing characters after '>'", end + 1 + (len(clean[end + 1 :]) - len(clean[end + 1 :].lstrip())))

    gens: list[str] = []
    for m in re.finditer(r"[^\s,]+", clean[start + 1 : bar]):
        name = m.group()
        try:
            check_generator_name(name)
        except ValueError:
            fail(f"invalid generator name {name!r}", start + 1 + m.start())
        if name in gens:
            fail(f"duplicate generator {name!r}", start + 1 + m.start())
        gens.append(name)

    relators: list[Word] = []
    body = clean[bar + 1 : end]
    if body.strip():
        pos = bar + 1
        for chunk in body.split(","):
            if not chunk.strip():
                fail("empty relator between commas", pos)
            try:
                w = parse_word(chunk)
            except WordSyntaxError as exc:
                fail(str(exc).split(": ", 1)[1], pos + exc.column - 1)
            unknown = w.generators() - set(gens)
            if unknown:
                name = sorted(unknown)[0]
                fail(f"relator uses unlisted generator {name!r}", pos + chunk.find(name))
            relators.append(w)
            pos += len(chunk) + 1
    return Presentation(tuple(gens), tuple(relators))


def surface_presentation(genus: int) -> Presentation:
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    gens: list[str] = []
    rel = Word()
    for i in range(1, genus + 1):
        a, b = f"a{i}", f"b{i}"
        gens += [a, b]
        rel = rel * commutator(Word.gen(a), Word.gen(b))
    return Presentation(tuple(gens), (rel,) if genus else ())


# -- Tietze moves -------------------------------------------------------------


class StepKind(str, Enum):
    ADD_RELATOR = "AddRelator"
    REMOVE_RELATOR = "RemoveRelator"
    ADD_GENERATOR = "AddGenerator"
    REMOVE_GENERATOR = "RemoveGenerator"
    # bookkeeping markers, not among the four classical moves
    INVERT_GENERATOR = "InvertGenerator*"
    CYCLIC_REDUCE = "CyclicReduce*"


@dataclass(frozen=True)
class TietzeStep:
    """One replayable move.

    ``word`` is the relator involved (add/remove relator, cyclic reduce), the
    defining word ``w`` of a new generator ``s = w``, or the defining relator
    used to eliminate a generator.
    """

    kind: StepKind
    generator: str | None = None
    word: Word | None = None
    unchecked: bool = False
    retain_definition: bool = False

    def __str__(self) -> str:
        k = self.kind.value
        if self.kind is StepKind.ADD_GENERATOR:
            return f"{k} {self.generator} = {self.word}"
        if self.kind is StepKind.REMOVE_GENERATOR:
            extra = " (definition kept)" if self.retain_definition else ""
            return f"{k} {self.generator} via {self.word}{extra}"
        if self.kind is StepKind.INVERT_GENERATOR:
            return f"{k} {self.generator} -> {self.generator}^-1"
        flag = " [unchecked]" if self.unchecked else ""
        return f"{k} {self.word}{flag}"

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.generator is not None:
            d["generator"] = self.generator
        if self.word is not None:
            d["word"] = str(self.word)
        if self.unchecked:
            d["unchecked"] = True
        if self.retain_definition:
            d["retain_definition"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TietzeStep:
        word = d.get("word")
        return cls(
            StepKind(d["kind"]),
            d.get("generator"),
            parse_word(word, reduce_=False) if word is not None else None,
            bool(d.get("unchecked", False)),
            bool(d.get("retain_definition", False)),
        )


def _same_cyclic_word(u: Word, v: Word) -> bool:
    cu = cyclic_reduce(u)[0]
    cv = cyclic_reduce(v)[0]
    if len(cu) != len(cv):
        return False
    return cv in cyclic_conjugates(cu) or cv.inverse() in cyclic_conjugates(cu)


def _find_relator(p: Presentation, w: Word) -> int:
    target = w.reduced()
    for i, r in enumerate(p.relators):
        if r.reduced() == target:
            return i
    raise InapplicableStep(f"relator {w} is not in {p}")


def apply_tietze(p: Presentation, step: TietzeStep) -> Presentation:
    kind = step.kind
    gens, rels = list(p.generators), list(p.relators)

    if kind is StepKind.ADD_RELATOR:
        w = step.word
        if w is None:
            raise InapplicableStep("AddRelator needs a word")
        if w.generators() - set(gens):
            raise InapplicableStep(f"AddRelator word {w} uses unknown generators")
        if w.reduced() and not step.unchecked:
            raise InapplicableStep(
                f"AddRelator {w}: not freely trivial; pass unchecked=True to assert it is a consequence"
            )
        return Presentation(p.generators, tuple(rels + [w.reduced()]))

    if kind is StepKind.REMOVE_RELATOR:
        i = _find_relator(p, step.word)
        r = rels[i]
        others = rels[:i] + rels[i + 1 :]
        redundant = not r.reduced() or any(_same_cyclic_word(r, o) for o in others)
        if not redundant and not step.unchecked:
            raise InapplicableStep(f"RemoveRelator {step.word}: not syntactically redundant")
        return Presentation(p.generators, tuple(others))

    if kind is StepKind.ADD_GENERATOR:
        s, w = step.generator, step.word
        if s is None or w is None:
            raise InapplicableStep("AddGenerator needs a name and a defining word")
        if s in gens:
            raise InapplicableStep(f"AddGenerator: {s} already present")
        if w.generators() - set(gens):
            raise InapplicableStep(f"AddGenerator: defining word {w} uses unknown generators")
        return Presentation(tuple(gens + [s]), tuple(rels + [Word.gen(s) * w.reduced().inverse()]))

    if kind is StepKind.REMOVE_GENERATOR:
        s = step.generator
        if s not in gens:
            raise InapplicableStep(f"RemoveGenerator: {s} not a generator")
        i = _find_relator(p, step.word)
        rest = split_at_generator(rels[i], s)
        if rest is None:
            raise InapplicableStep(f"RemoveGenerator: {s} does not occur exactly once in {rels[i]}")
        rules = {g: Word.gen(g) for g in gens}
        rules[s] = rest.inverse()
        new_rels = []
        for j, r in enumerate(rels):
            if j == i and not step.retain_definition:
                continue
            new_rels.append(substitute(r, rules))
        gens.remove(s)
        for r in new_rels:
            if s in r.generators():
                raise InapplicableStep(f"RemoveGenerator: {s} survives in {r}")
        return Presentation(tuple(gens), tuple(new_rels))

    if kind is StepKind.INVERT_GENERATOR:
        s = step.generator
        if s not in gens:
            raise InapplicableStep(f"InvertGenerator: {s} not a generator")
        rules = {g: Word.gen(g) for g in gens}
        rules[s] = Word.gen(s, -1)
        return Presentation(p.generators, tuple(substitute(r, rules) for r in rels))

    if kind is StepKind.CYCLIC_REDUCE:
        i = _find_relator(p, step.word)
        rels[i] = cyclic_reduce(rels[i])[0]
        return Presentation(p.generators, tuple(rels))

    raise InapplicableStep(f"unknown step kind {kind}")


def replay(p: Presentation, log: Iterable[TietzeStep]) -> Presentation:
    return _fold(apply_tietze, log, p)


# -- one-relator rewriting ----------------------------------------------------


@dataclass(frozen=True)
class FreeProductSplit:
    absent_generator: str
    remaining: Presentation
    presentation: Presentation  # presentation in which the absence was seen
    log: tuple[TietzeStep, ...] = ()
    iterations: int = 0

    is_witness = False


@dataclass(frozen=True)
class Witness:
    presentation: Presentation
    zero_generator: str
    log: tuple[TietzeStep, ...] = ()
    iterations: int = 0
    measures: tuple[int, ...] = ()  # sum of |exponent sums| before each substitution round

    is_witness = True

    @property
    def relator(self) -> Word:
        return self.presentation.relators[0]


RewriteOutcome = Union[FreeProductSplit, Witness]

ORDER_NOTE = (
    "each round checks for an absent generator before checking for a zero exponent sum"
)


def _check_one_relator(p: Presentation) -> None:
    if len(p.relators) != 1:
        raise PreconditionViolated(f"expected exactly one relator, got {len(p.relators)}")
    if len(p.generators) < 3:
        raise PreconditionViolated(f"expected at least 3 generators, got {len(p.generators)}")
    if not cyclic_reduce(p.relators[0])[0]:
        raise PreconditionViolated("relator is trivial after cyclic reduction")


def _fresh_names(n: int, used: set[str]) -> list[str]:
    k = 1
    while True:
        suffix = "" if k == 1 else f"_{k}"
        names = [f"t{i}{suffix}" for i in range(1, n + 1)]
        if used.isdisjoint(names):
            return names
        k += 1


def magnus_moldavansky(p: Presentation) -> RewriteOutcome:
    _check_one_relator(p)
    cur = p
    log: list[TietzeStep] = []
    used = set(p.generators)
    measures: list[int] = []
    rounds = 0

    def do(step: TietzeStep) -> None:
        nonlocal cur
        cur = apply_tietze(cur, step)
        log.append(step)

    while True:
        r = cur.relators[0]
        core, _ = cyclic_reduce(r)
        if core != r or not r.is_reduced:
            do(TietzeStep(StepKind.CYCLIC_REDUCE, word=r))
            r = cur.relators[0]
        # the substitution is a free-group automorphism, so this can only fire on input
        assert r, "relator became trivial"
        gens = cur.generators
        present = r.generators()
        absent = [s for s in gens if s not in present]
        if absent:
            s = absent[0]
            remaining = Presentation(tuple(g for g in gens if g != s), (r,))
            return FreeProductSplit(s, remaining, cur, tuple(log), rounds)
        sums = {s: exponent_sum(r, s) for s in gens}
        zero = [s for s in gens if sums[s] == 0]
        if zero:
            return Witness(cur, zero[0], tuple(log), rounds, tuple(measures))

        measures.append(sum(abs(v) for v in sums.values()))
        for s in gens:
            if sums[s] < 0:
                do(TietzeStep(StepKind.INVERT_GENERATOR, generator=s))
        ordered = sorted(range(len(gens)), key=lambda i: (abs(sums[gens[i]]), i))
        s_ = [gens[i] for i in ordered]
        n = len(s_)
        t_ = _fresh_names(n, used)
        used.update(t_)

        definitions = [Word.gen(s_[0]) * Word.gen(s_[-1])] + [Word.gen(s) for s in s_[1:]]
        for t, w in zip(t_, definitions):
            do(TietzeStep(StepKind.ADD_GENERATOR, generator=t, word=w))
        def_relators = [Word.gen(t) * w.inverse() for t, w in zip(t_, definitions)]
        for s, d in zip(s_, def_relators):
            do(TietzeStep(StepKind.REMOVE_GENERATOR, generator=s, word=d, retain_definition=True))
        final = {s: Word.gen(t) for s, t in zip(s_, t_)}
        final[s_[0]] = Word.gen(t_[0]) * Word.gen(t_[-1], -1)
        final.update({t: Word.gen(t) for t in t_})
        for d in def_relators:
            do(TietzeStep(StepKind.REMOVE_RELATOR, word=substitute(d, final, reduce_=False)))
        rounds += 1


# -- analysis -------------------------------------------------------------------


@dataclass(frozen=True)
class InfiniteEnds:
    split: FreeProductSplit
    citations: tuple[Citation, ...] = field(
        default_factory=lambda: tuple(cite("free-product-ends", "ends-free-subgroup", "infinite-ends",
                                           "free-groups-not-rigid", "free-extension-weak"))
    )
    note: str = ORDER_NOTE

    kind = "infinite-ends"


@dataclass(frozen=True)
class ZeroExponent:
    witness: Witness
    generator: str
    free_subgroup: tuple[str, ...]
    relator_exponent_sum: int
    citations: tuple[Citation, ...] = field(
        default_factory=lambda: tuple(cite("freiheitssatz", "free-groups-not-rigid",
                                           "free-extension-weak", "barbieri-criterion"))
    )
    note: str = ORDER_NOTE

    kind = "zero-exponent"

    @property
    def presentation(self) -> Presentation:
        return self.witness.presentation


NonRigidityCertificate = Union[InfiniteEnds, ZeroExponent]


def freiheitssatz_subgroup(p: Presentation, s: str) -> list[str]:
    """Generators of the subgroup that the Freiheitssatz asserts is free.

    Freeness is taken on the authority of the cited theorem; nothing here checks it.
    """
    if len(p.relators) != 1:
        raise PreconditionViolated("Freiheitssatz needs a one-relator presentation")
    r = p.relators[0]
    if not is_cyclically_reduced(r):
        raise PreconditionViolated(f"relator {r} is not cyclically reduced")
    if s not in r.generators():
        raise GeneratorAbsentFromRelator(f"{s} does not occur in {r}")
    return [g for g in p.generators if g != s]


def analyze_one_relator(p: Presentation) -> NonRigidityCertificate:
    outcome = magnus_moldavansky(p)
    if isinstance(outcome, FreeProductSplit):
        return InfiniteEnds(outcome)
    t = outcome.zero_generator
    wp = outcome.presentation
    return ZeroExponent(
        witness=outcome,
        generator=t,
        free_subgroup=tuple(freiheitssatz_subgroup(wp, t)),
        relator_exponent_sum=exponent_sum(wp.relators[0], t),
    )


# -- quasi-planar classification ----------------------------------------------


@dataclass(frozen=True)
class Free:
    rank: int


@dataclass(frozen=True)
class Surface:
    genus: int


@dataclass(frozen=True)
class FactorList:
    """``G`` is (virtually, if ``finite_index_supergroup``) the free product of ``factors``."""

    factors: tuple[Free | Surface, ...]
    finite_index_supergroup: bool = False
    torsion_free: bool = True

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a factor list needs at least one factor")
        for f in self.factors:
            n = f.rank if isinstance(f, Free) else f.genus
            if n < 0:
                raise ValueError(f"negative parameter in {f}")


@dataclass(frozen=True)
class Verdict:
    rigid: bool
    branch: str
    reason: str
    citations: tuple[Citation, ...] = ()

    def __str__(self) -> str:
        head = "PeriodicallyRigid" if self.rigid else "NotPeriodicallyRigid"
        return f"{head} [{self.branch}]: {self.reason}"


def classify_quasiplanar(f: FactorList) -> Verdict:
    nontrivial = [x for x in f.factors if (x.rank if isinstance(x, Free) else x.genus) > 0]
    surfaces = [x for x in nontrivial if isinstance(x, Surface)]
    qp = cite("quasi-planar-structure")

    if not surfaces:
        total = sum(x.rank for x in nontrivial)
        if total <= 1:
            return Verdict(True, "virtually-free",
                           f"free factors of total rank {total}: the group is virtually cyclic",
                           tuple(qp + cite("virtually-z2-rigid")))
        return Verdict(False, "virtually-free",
                       f"free factors of total rank {total}: F2 subgroup and infinitely many ends",
                       tuple(qp + cite("free-groups-not-rigid", "free-extension-weak", "infinite-ends")))

    if len(nontrivial) >= 2:
        return Verdict(False, "free-product",
                       f"{len(nontrivial)} nontrivial factors including a surface group: "
                       "F2 subgroup and infinitely many ends",
                       tuple(qp + cite("free-product-f2", "free-groups-not-rigid",
                                       "free-extension-weak", "free-product-ends", "infinite-ends")))

    (s,) = surfaces
    if s.genus == 1:
        if f.finite_index_supergroup and not f.torsion_free:
            return Verdict(False, "z2",
                           "virtually Z^2 with torsion: a torsion-free finite-index Z^2 forces non-rigidity",
                           tuple(qp + cite("torsion-not-rigid", "surface-strongly-aperiodic")))
        return Verdict(True, "z2", "torsion-free virtually Z^2",
                       tuple(qp + cite("virtually-z2-rigid")))
    via = " and heredity to finite-index subgroups" if f.finite_index_supergroup else ""
    return Verdict(False, "one-relator",
                   f"surface group of genus {s.genus} >= 2: one-relator rewriting{via}",
                   tuple(qp + cite("freiheitssatz", "free-groups-not-rigid", "barbieri-criterion")))


def parse_factor_list(items: Sequence[str], *, finite_index_supergroup=False, torsion_free=True) -> FactorList:
    """Parse tokens like ``F2`` or ``S1`` (free of rank 2, surface of genus 1)."""
    out: list[Free | Surface] = []
    for tok in items:
        m = re.fullmatch(r"([FS])(\d+)", tok.strip())
        if not m:
            raise ValueError(f"bad factor {tok!r}; expected F<rank> or S<genus>")
        n = int(m.group(2))
        out.append(Free(n) if m.group(1) == "F" else Surface(n))
    return FactorList(tuple(out), finite_index_supergroup, torsion_free)

"""Computation backends for the groups SFTs live on.

Every element is represented by a :class:`~groupsft.words.Word`.  A backend
supplies ``normal_form`` and ``equal``; for backends with ``canonical = True``
normal forms are unique, so they can be used as dictionary keys.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Hashable, Mapping, Sequence

from ..errors import ModelFailure, UnknownGenerator
from ..presentations import Presentation, parse_presentation
from ..words import (
    Letter,
    Word,
    abelianization_vector,
    check_generator_name,
    commutator,
    letters_of,
    parse_word,
    split_at_generator,
    substitute,
)
from .dehn import _dehn, check_small_cancellation


class GroupModel(ABC):
    canonical = True

    def __init__(self, generators: Sequence[str]):
        gens = tuple(check_generator_name(g) for g in generators)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names {gens}")
        self.generators = gens
        self._known = frozenset(gens)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return letters_of(self.generators)

    @property
    def identity(self) -> Word:
        return Word()

    def check(self, w: Word) -> None:
        extra = w.generators() - self._known
        if extra:
            raise UnknownGenerator(sorted(extra)[0])

    @abstractmethod
    def normal_form(self, w: Word) -> Word: ...

    def multiply(self, u: Word, v: Word) -> Word:
        return self.normal_form(u * v)

    def inverse(self, u: Word) -> Word:
        return self.normal_form(u.inverse())

    def equal(self, u: Word, v: Word) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def is_identity(self, w: Word) -> bool:
        return self.equal(w, Word())

    def invariant(self, w: Word) -> Hashable:
        """A value equal on equal elements; the normal form when canonical."""
        return self.normal_form(w)

    @abstractmethod
    def presentation(self) -> Presentation: ...

    @abstractmethod
    def spec(self) -> dict: ...

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec()

    def __hash__(self):
        return hash(repr(self.spec()))

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()})"


class FreeGroup(GroupModel):
    def normal_form(self, w: Word) -> Word:
        self.check(w)
        return w.reduced()

    def presentation(self) -> Presentation:
        return Presentation(self.generators, ())

    def spec(self) -> dict:
        return {"name": "free", "generators": list(self.generators)}


class FreeAbelian(GroupModel):
    """``Z^d`` with normal form ``s1^e1 s2^e2 ...`` in generator order."""

    def normal_form(self, w: Word) -> Word:
        self.check(w)
        out = Word()
        for s, e in zip(self.generators, abelianization_vector(w, self.generators)):
            if e:
                out = out * Word.gen(s, e)
        return out

    def vector(self, w: Word) -> tuple[int, ...]:
        return abelianization_vector(w, self.generators)

    def presentation(self) -> Presentation:
        g = self.generators
        rels = [commutator(Word.gen(g[i]), Word.gen(g[j])) for i in range(len(g)) for j in range(i + 1, len(g))]
        return Presentation(g, tuple(rels))

    def spec(self) -> dict:
        return {"name": "free_abelian", "generators": list(self.generators)}


class DirectWithCyclic(GroupModel):
    """``H x Z/k`` with a central generator of order ``k``; normal form ``h z^m``, ``0 <= m < k``."""

    def __init__(self, base: GroupModel, k: int, generator: str = "z"):
        if k < 1:
            raise ValueError("cyclic order must be positive")
        if generator in base.generators:
            raise ValueError(f"{generator} clashes with a base generator")
        super().__init__(base.generators + (generator,))
        self.base, self.k, self.z = base, k, generator
        self.canonical = base.canonical

    def split(self, w: Word) -> tuple[Word, int]:
        self.check(w)
        m = sum(x.sign for x in w.letters if x.gen == self.z) % self.k
        return Word(x for x in w.letters if x.gen != self.z), m

    def normal_form(self, w: Word) -> Word:
        h, m = self.split(w)
        return self.base.normal_form(h) * Word.gen(self.z, m)

    def equal(self, u: Word, v: Word) -> bool:
        hu, mu = self.split(u)
        hv, mv = self.split(v)
        return mu == mv and self.base.equal(hu, hv)

    def invariant(self, w: Word) -> Hashable:
        h, m = self.split(w)
        return self.base.invariant(h), m

    def presentation(self) -> Presentation:
        bp = self.base.presentation()
        z = Word.gen(self.z)
        rels = list(bp.relators) + [z ** self.k] + [commutator(Word.gen(s), z) for s in self.base.generators]
        return Presentation(self.generators, tuple(rels))

    def spec(self) -> dict:
        return {"name": "direct_cyclic", "base": self.base.spec(), "order": self.k, "generator": self.z}


class SemidirectFreeByCyclic(GroupModel):
    """``F_k ⋊ Z`` where the transversal ``t`` acts by ``t^-1 x t = phi(x)``.

    Normal form is ``t^i h`` with ``h`` a reduced word in the free factor.
    """

    def __init__(self, free_generators: Sequence[str], transversal: str,
                 automorphism: Mapping[str, Word], inverse: Mapping[str, Word] | None = None):
        free = tuple(free_generators)
        if transversal in free:
            raise ValueError("transversal generator must not be a free generator")
        super().__init__((transversal,) + free)
        self.free, self.t = free, transversal
        self.phi = {x: automorphism[x].reduced() for x in free}
        if inverse is None:
            inverse = _invert_signed_permutation(self.phi)
        self.phi_inv = {x: inverse[x].reduced() for x in free}
        ident = {x: Word.gen(x) for x in free}
        for x in free:
            if self.phi[x].generators() - set(free) or self.phi_inv[x].generators() - set(free):
                raise ValueError("automorphism images must be words in the free generators")
            if substitute(self.phi[x], self.phi_inv) != ident[x] or substitute(self.phi_inv[x], self.phi) != ident[x]:
                raise ValueError("automorphism and inverse do not compose to the identity")

    def decompose(self, w: Word) -> tuple[int, Word]:
        self.check(w)
        i, h = 0, Word()
        for x in w.letters:
            if x.gen == self.t:
                h = substitute(h, self.phi if x.sign > 0 else self.phi_inv)
                i += x.sign
            else:
                h = h * Word((x,))
        return i, h

    def normal_form(self, w: Word) -> Word:
        i, h = self.decompose(w)
        return Word.gen(self.t, i) * h

    def presentation(self) -> Presentation:
        t = Word.gen(self.t)
        rels = [t.inverse() * Word.gen(x) * t * self.phi[x].inverse() for x in self.free]
        return Presentation(self.generators, tuple(rels))

    def spec(self) -> dict:
        return {
            "name": "free_by_cyclic",
            "free": list(self.free),
            "transversal": self.t,
            "automorphism": {x: str(w) for x, w in self.phi.items()},
            "inverse": {x: str(w) for x, w in self.phi_inv.items()},
        }


def _invert_signed_permutation(phi: Mapping[str, Word]) -> dict[str, Word]:
    inv: dict[str, Word] = {}
    for x, w in phi.items():
        if len(w) != 1:
            raise ValueError("give the inverse automorphism explicitly (not a signed permutation)")
        y = w.letters[0]
        inv[y.gen] = Word.gen(x, y.sign)
    if set(inv) != set(phi):
        raise ValueError("automorphism is not a signed permutation of the generators")
    return inv


class OneRelatorFree(GroupModel):
    """``<S | r>`` where some generator ``s`` occurs exactly once in ``r``.

    Eliminating ``s`` shows the group is free on ``S - {s}``; normal forms are
    reduced words over the remaining generators.
    """

    def __init__(self, presentation: Presentation, eliminate: str | None = None):
        super().__init__(presentation.generators)
        if len(presentation.relators) != 1:
            raise ModelFailure("OneRelatorFree needs exactly one relator")
        r = presentation.relators[0]
        candidates = [eliminate] if eliminate else list(presentation.generators)
        for s in candidates:
            rest = split_at_generator(r, s)
            if rest is not None:
                break
        else:
            raise ModelFailure(f"no generator occurs exactly once in {r}")
        self.pres, self.eliminated = presentation, s
        self.rules = {g: Word.gen(g) for g in presentation.generators}
        self.rules[s] = rest.inverse()

    def normal_form(self, w: Word) -> Word:
        self.check(w)
        return substitute(w, self.rules)

    def presentation(self) -> Presentation:
        return self.pres

    def spec(self) -> dict:
        return {"name": "one_relator_free", "presentation": str(self.pres), "eliminate": self.eliminated}


class DehnHyperbolic(GroupModel):
    """One-relator C'(1/6) groups (e.g. surface groups of genus >= 2).

    Dehn-reduced words are not unique, so ``canonical`` is False: ``equal`` is
    exact, ``normal_form`` only returns a Dehn-reduced representative.
    """

    canonical = False

    def __init__(self, presentation: Presentation):
        super().__init__(presentation.generators)
        self.pres = presentation
        self.relator = check_small_cancellation(presentation)
        self._zero_sum = not any(abelianization_vector(self.relator, self.generators))

    def normal_form(self, w: Word) -> Word:
        self.check(w)
        return _dehn(self.relator, w)

    def equal(self, u: Word, v: Word) -> bool:
        self.check(u)
        self.check(v)
        return not _dehn(self.relator, u * v.inverse())

    def invariant(self, w: Word) -> Hashable:
        if self._zero_sum:
            return abelianization_vector(w, self.generators)
        return ()

    def presentation(self) -> Presentation:
        return self.pres

    def spec(self) -> dict:
        return {"name": "dehn", "presentation": str(self.pres)}


def model_for_presentation(p: Presentation) -> GroupModel:
    """Pick a backend that solves the word problem for ``p``, or raise ModelFailure."""
    if not p.relators:
        return FreeGroup(p.generators)
    if len(p.relators) == 1:
        try:
            return OneRelatorFree(p)
        except ModelFailure:
            pass
        try:
            return DehnHyperbolic(p)
        except Exception as exc:
            raise ModelFailure(f"no supported backend for {p}: {exc}") from exc
    raise ModelFailure(f"no supported backend for {p}; supply a model explicitly")


def model_from_spec(spec: Mapping) -> GroupModel:
    name = spec.get("name")
    if name == "free":
        return FreeGroup(spec["generators"])
    if name == "free_abelian":
        return FreeAbelian(spec["generators"])
    if name == "direct_cyclic":
        return DirectWithCyclic(model_from_spec(spec["base"]), int(spec["order"]), spec.get("generator", "z"))
    if name == "free_by_cyclic":
        inv = spec.get("inverse")
        return SemidirectFreeByCyclic(
            spec["free"], spec["transversal"],
            {x: parse_word(w) for x, w in spec["automorphism"].items()},
            {x: parse_word(w) for x, w in inv.items()} if inv is not None else None,
        )
    if name == "one_relator_free":
        return OneRelatorFree(parse_presentation(spec["presentation"]), spec.get("eliminate"))
    if name == "dehn":
        return DehnHyperbolic(parse_presentation(spec["presentation"]))
    raise ModelFailure(f"unknown group model {name!r}")

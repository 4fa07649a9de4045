"""Finite evidence about SFTs: ball tiling, periodic-point search, stabilizers, certificates.

All searches share one backtracking solver with forward checking.  Cells are
tried in a fixed order and colors in alphabet order, so the first solution is
the lexicographically least one and results are reproducible.
"""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .citations import CITATIONS, Citation, cite
from .errors import BudgetExceeded, GroupSftError, PreconditionViolated
from .extensions import Embedding, free_extension
from .groups.ball import Ball, build_ball
from .groups.cosets import CosetTable, exponent_hom_check, schreier_generators, todd_coxeter
from .groups.models import FreeGroup, GroupModel, model_for_presentation, model_from_spec
from .presentations import (
    InfiniteEnds,
    Presentation,
    TietzeStep,
    ZeroExponent,
    analyze_one_relator,
    parse_presentation,
    replay,
)
from .sft import (
    BallConfig,
    OrbitStabilizerReport,
    QuotientConfig,
    Sft,
    _check_same_group,
    placements,
    quotient_fixed_by,
    quotient_orbit_size,
    quotient_placements,
    shift,
    symbol_from_json,
    symbol_to_json,
    violations,
)
from .words import Letter, Word, commutator, exponent_sum, letters_of, parse_word

# -- solver --------------------------------------------------------------------------------


class _Search:
    """Colorings of ``n`` cells by ``k`` colors avoiding forbidden cell/color tuples.

    ``constraints`` holds ``(cells, colors)`` pairs with distinct cells;
    a coloring is rejected if it agrees with some pair on all its cells.
    """

    def __init__(self, n: int, k: int, constraints: Sequence[tuple[Sequence[int], Sequence[int]]]):
        self.n, self.k = n, k
        self.cons = [(tuple(c), tuple(v)) for c, v in constraints]
        self.by_cell: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.infeasible = False
        self.start = [(1 << k) - 1] * n
        for ci, (cells, cols) in enumerate(self.cons):
            if not cells:
                self.infeasible = True
            elif len(cells) == 1:
                self.start[cells[0]] &= ~(1 << cols[0])
            else:
                for pos, cell in enumerate(cells):
                    self.by_cell[cell].append((ci, pos))
        if any(d == 0 for d in self.start):
            self.infeasible = True
        self.nodes = 0

    def _assign(self, v: int, c: int, val: list[int], dom: list[int], trail: list[tuple[int, int]]) -> bool:
        for ci, pos in self.by_cell[v]:
            cells, cols = self.cons[ci]
            if cols[pos] != c:
                continue
            open_cell = -1
            live = True
            for cell, col in zip(cells, cols):
                x = val[cell]
                if x < 0:
                    if open_cell >= 0:
                        live = False  # two open cells: nothing to infer yet
                        break
                    open_cell, need = cell, col
                elif x != col:
                    live = False
                    break
            if not live:
                continue
            if open_cell < 0:
                return False
            bit = 1 << need
            if dom[open_cell] & bit:
                trail.append((open_cell, dom[open_cell]))
                dom[open_cell] &= ~bit
                if not dom[open_cell]:
                    return False
        return True

    def solutions(self, budget: int) -> Iterator[tuple[int, ...]]:
        """Yield every admissible coloring in lexicographic order.

        Raises BudgetExceeded once more than ``budget`` assignments were tried.
        """
        if self.infeasible:
            return
        n, k = self.n, self.k
        if n == 0:
            yield ()
            return
        val = [-1] * n
        dom = list(self.start)
        trail: list[tuple[int, int]] = []
        marks = [0] * n
        nxt = [0] * n
        d = 0

        def undo(depth: int) -> None:
            mark = marks[depth]
            while len(trail) > mark:
                cell, old = trail.pop()
                dom[cell] = old
            val[depth] = -1

        while d >= 0:
            if d == n:
                yield tuple(val)
                d = n - 1
                undo(d)
                continue
            found = False
            c = nxt[d]
            while c < k:
                if dom[d] >> c & 1:
                    self.nodes += 1
                    if self.nodes > budget:
                        raise BudgetExceeded(budget, f"search exceeded {budget} nodes")
                    marks[d] = len(trail)
                    val[d] = c
                    if self._assign(d, c, val, dom, trail):
                        found = True
                        break
                    undo(d)
                c += 1
            if found:
                nxt[d] = c + 1
                d += 1
                if d < n:
                    nxt[d] = 0
            else:
                nxt[d] = 0
                d -= 1
                if d >= 0:
                    undo(d)


def _ball_search(s: Sft, b: Ball) -> _Search:
    if b.model.generators != s.model.generators:
        raise PreconditionViolated("the ball is not over the SFT's group")
    color = {a: i for i, a in enumerate(s.alphabet)}
    cons = [(cells, [color[c] for c in s.forbidden[pi].colors]) for pi, _, cells in placements(s, b)]
    return _Search(len(b), len(s.alphabet), cons)


def _quotient_search(s: Sft, t: CosetTable) -> _Search:
    _check_same_group(s, t)
    color = {a: i for i, a in enumerate(s.alphabet)}
    cons = {(tuple(j - 1 for j in cosets), tuple(color[c] for c in cols))
            for _, _, cosets, cols in quotient_placements(s, t)}
    return _Search(t.index, len(s.alphabet), sorted(cons))


# -- tiling ----------------------------------------------------------------------------------


class Outcome(str, Enum):
    SATISFIABLE = "satisfiable"
    UNSATISFIABLE = "unsatisfiable"
    FOUND = "found"
    NONE_UP_TO_QUOTIENT = "none-up-to-quotient"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class TileResult:
    outcome: Outcome
    config: BallConfig | None
    nodes_explored: int

    @property
    def satisfiable(self) -> bool:
        return self.outcome is Outcome.SATISFIABLE


def tile_ball(s: Sft, b: Ball, node_budget: int = 100_000) -> TileResult:
    """Find the lexicographically first coloring of ``b`` with no visible violation.

    UNSATISFIABLE proves the SFT empty; SATISFIABLE is evidence only.
    """
    search = _ball_search(s, b)
    try:
        for sol in search.solutions(node_budget):
            cfg = BallConfig(b, tuple(s.alphabet[i] for i in sol))
            return TileResult(Outcome.SATISFIABLE, cfg, search.nodes)
    except BudgetExceeded:
        return TileResult(Outcome.BUDGET_EXCEEDED, None, search.nodes)
    return TileResult(Outcome.UNSATISFIABLE, None, search.nodes)


def all_tilings(s: Sft, b: Ball, node_budget: int = 1_000_000) -> Iterator[BallConfig]:
    """Every admissible coloring of ``b``, in lexicographic order."""
    for sol in _ball_search(s, b).solutions(node_budget):
        yield BallConfig(b, tuple(s.alphabet[i] for i in sol))


# -- periodic points ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicSearchResult:
    outcome: Outcome
    config: QuotientConfig | None
    quotient: int | None  # position of the table that produced the witness
    nodes_explored: int
    searched: tuple[int, ...] = ()  # indices of the quotients searched exhaustively

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND


def search_strongly_periodic(s: Sft, quotients: Sequence[CosetTable],
                             node_budget: int = 100_000) -> PeriodicSearchResult:
    """Look for a configuration of ``s`` factoring through one of ``quotients``.

    Quotients are tried in order; the budget is shared.  NONE_UP_TO_QUOTIENT
    means every supplied coset space was searched exhaustively.
    """
    nodes = 0
    done = []
    for qi, t in enumerate(quotients):
        search = _quotient_search(s, t)
        try:
            for sol in search.solutions(node_budget - nodes):
                cfg = QuotientConfig(t, tuple(s.alphabet[i] for i in sol))
                return PeriodicSearchResult(Outcome.FOUND, cfg, qi, nodes + search.nodes, tuple(done))
        except BudgetExceeded:
            return PeriodicSearchResult(Outcome.BUDGET_EXCEEDED, None, None, nodes + search.nodes, tuple(done))
        nodes += search.nodes
        done.append(qi)
    return PeriodicSearchResult(Outcome.NONE_UP_TO_QUOTIENT, None, None, nodes, tuple(done))


def periodic_points(s: Sft, t: CosetTable, node_budget: int = 1_000_000) -> Iterator[QuotientConfig]:
    """Every coloring of the coset space of ``t`` that is a point of ``s``."""
    for sol in _quotient_search(s, t).solutions(node_budget):
        yield QuotientConfig(t, tuple(s.alphabet[i] for i in sol))


def abelian_quotient_table(p: Presentation, modulus: int, max_cosets: int = 10_000) -> CosetTable:
    """Coset table of the kernel of ``G -> H_1(G; Z/modulus)``."""
    gens = [Word.gen(g) for g in p.generators]
    rels = list(p.relators) + [g ** modulus for g in gens]
    rels += [commutator(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    t = todd_coxeter(Presentation(p.generators, tuple(rels)), [], max_cosets)
    table = CosetTable(p, (), t.action, t.representatives)
    return CosetTable(p, schreier_generators(table), t.action, t.representatives)


# -- stabilizers ---------------------------------------------------------------------------------


def stabilizer_scan(model: GroupModel, c: BallConfig | QuotientConfig, max_len: int) -> OrbitStabilizerReport:
    """Nontrivial elements of length <= ``max_len`` that fix ``c``, and a lower bound on its orbit.

    Ball configurations give necessary-condition answers (agreement on the
    overlap of the window); quotient configurations are decided exactly.
    """
    ball = build_ball(model, radius=max_len)
    if isinstance(c, QuotientConfig):
        fixed = tuple(g for g in ball.words[1:] if quotient_fixed_by(c, g))
        return OrbitStabilizerReport(quotient_orbit_size(c), fixed, max_len, exact=True)
    fixed = []
    kept: list[BallConfig] = [c]
    for g in ball.words[1:]:
        moved = shift(model, g, c)
        if c.agrees_with(moved) and any(x is not None for x in moved.colors):
            fixed.append(g)
        if all(not k.agrees_with(moved) for k in kept):
            kept.append(moved)
    return OrbitStabilizerReport(len(kept), tuple(fixed), c.ball.radius, exact=False)


# -- exponent-sum certificate --------------------------------------------------------------------


@dataclass(frozen=True)
class BarbieriCheck:
    """Checked ``|g c^n g^-1|_c = n`` for every reduced ``g`` with ``|g| <= bound`` and ``1 <= n <= bound``."""

    generator: str
    bound: int
    cases: int
    failures: tuple[tuple[str, int], ...]

    @property
    def valid(self) -> bool:
        return not self.failures


def reduced_words(generators: Sequence[str], max_len: int) -> Iterator[Word]:
    """All freely reduced words of length <= ``max_len``, shortest first."""
    letters = letters_of(generators)
    layer = [()]
    yield Word()
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                if not w or w[-1] != x.inverse():
                    nxt.append(w + (x,))
        for w in nxt:
            yield Word._trusted(w)
        layer = nxt


def barbieri_instance_check(p: Presentation, c: str, bound: int) -> BarbieriCheck:
    cases = 0
    failures = []
    pos, neg = Letter(c, 1), Letter(c, -1)
    powers = [Word.gen(c, n).letters for n in range(1, bound + 1)]
    for g in reduced_words(p.generators, bound):
        gl, gi = g.letters, g.inverse().letters
        for n, cn in enumerate(powers, 1):
            cases += 1
            # free reduction cancels letters in inverse pairs, so counting the
            # unreduced concatenation gives the exponent sum of the product
            seq = gl + cn + gi
            if seq.count(pos) - seq.count(neg) != n:
                failures.append((str(g), n))
    return BarbieriCheck(c, bound, cases, tuple(failures))


# -- certificates --------------------------------------------------------------------------------


@dataclass(frozen=True)
class Fact:
    key: str
    statement: str
    holds: bool = True
    data: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"key": self.key, "statement": self.statement, "holds": self.holds, "data": self.data}


@dataclass(frozen=True)
class CertificateReport:
    kind: str
    presentation: str
    conclusion: str
    proved: tuple[Fact, ...]
    cited: tuple[Citation, ...]
    evidence: tuple[Fact, ...]
    parameters: dict = field(default_factory=dict, compare=False)

    @property
    def all_proved(self) -> bool:
        return all(f.holds for f in self.proved)

    def fact(self, key: str) -> Fact:
        for f in self.proved + self.evidence:
            if f.key == key:
                return f
        raise KeyError(key)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "presentation": self.presentation,
            "conclusion": self.conclusion,
            "parameters": self.parameters,
            "proved": [f.to_dict() for f in self.proved],
            "cited": [c.to_dict() for c in self.cited],
            "evidence": [f.to_dict() for f in self.evidence],
        }

    def to_text(self) -> str:
        lines = [f"certificate: {self.kind}", f"presentation: {self.presentation}",
                 f"conclusion: {self.conclusion}", "", "PROVED"]
        lines += [f"  [{'ok' if f.holds else 'FAILED'}] {f.key}: {f.statement}" for f in self.proved]
        lines += ["", "CITED"]
        lines += [f"  [{c.key}] {c.source}: {c.statement}" for c in self.cited]
        lines += ["", "EVIDENCE"]
        lines += [f"  [{f.key}] {f.statement}" for f in self.evidence]
        return "\n".join(lines) + "\n"


def _plug_embedding(plug: Sft, model: GroupModel, free_gens: Sequence[str]) -> Embedding:
    if not isinstance(plug.model, FreeGroup):
        raise PreconditionViolated("the plug SFT must live on a free group")
    names = plug.model.generators
    if len(names) > len(free_gens):
        raise PreconditionViolated(
            f"plug SFT has rank {len(names)} but the free subgroup only has rank {len(free_gens)}"
        )
    return Embedding(model, {x: Word.gen(s) for x, s in zip(names, free_gens)})


def _staged(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GroupSftError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise


def check_theorem15_pipeline(p: Presentation, plug_sft: Sft, quotients: Sequence[CosetTable] | None = None,
                             radius: int = 3, *, barbieri_bound: int | None = None,
                             model: GroupModel | None = None, node_budget: int = 200_000) -> CertificateReport:
    """Certify that a one-relator group with >= 3 generators is not periodically rigid.

    Machine-checked identities go to PROVED, results taken from the
    literature to CITED, and budgeted searches to EVIDENCE.  With no
    ``quotients`` supplied the mod-2 abelianization quotient is searched.
    """
    cert = _staged("rewrite", analyze_one_relator, p)
    params = {"radius": radius, "barbieri_bound": radius if barbieri_bound is None else barbieri_bound,
              "node_budget": node_budget}
    log = [s.to_dict() for s in getattr(cert, "witness", getattr(cert, "split", None)).log]
    if isinstance(cert, InfiniteEnds):
        split = cert.split
        r = split.presentation.relators[0]
        proved = (
            Fact("replay", "the rewriting log replays to the presentation that exposed the absent generator",
                 replay(p, split.log) == split.presentation,
                 {"log": log, "result": str(split.presentation)}),
            Fact("absent-generator", f"{split.absent_generator} does not occur in the relator {r}",
                 split.absent_generator not in r.generators(),
                 {"generator": split.absent_generator, "relator": str(r)}),
            Fact("free-product",
                 f"the group is Z * {split.remaining}, a free product of two nontrivial groups "
                 f"({len(split.remaining.generators)} generators, one relator)",
                 len(split.remaining.generators) >= 2, {"remaining": str(split.remaining)}),
        )
        return CertificateReport(
            "infinite-ends", str(p),
            "the group has infinitely many ends, so it contains F2 and carries an SFT that is weakly "
            "but not strongly aperiodic; it is not periodically rigid",
            proved, tuple(cert.citations),
            (Fact("order", cert.note, True),),
            params,
        )

    assert isinstance(cert, ZeroExponent)
    wp, c = cert.presentation, cert.generator
    g_model = model if model is not None else _staged("model", model_for_presentation, wp)
    if tuple(g_model.generators) != tuple(wp.generators):
        raise PreconditionViolated(f"model generators {g_model.generators} differ from {wp.generators}")
    hom = exponent_hom_check(wp, c)
    emb = _staged("extension", _plug_embedding, plug_sft, g_model, cert.free_subgroup)
    ext = _staged("extension", free_extension, plug_sft, emb)
    bound = params["barbieri_bound"]
    bar = _staged("barbieri", barbieri_instance_check, wp, c, bound)
    ball = _staged("tiling", build_ball, g_model, radius=radius)
    tile = _staged("tiling", tile_ball, ext, ball, node_budget)
    if quotients is None:
        quotients = [_staged("quotients", abelian_quotient_table, wp, 2)]
    periodic = _staged("periodic-search", search_strongly_periodic, ext, quotients, node_budget)

    proved = [
        Fact("replay", f"the rewriting log replays from the input to {wp}", replay(p, cert.witness.log) == wp,
             {"input": str(p), "log": log, "result": str(wp)}),
        Fact("homomorphism",
             f"every relator has exponent sum 0 at {c}, so the exponent sum at {c} is a homomorphism to Z",
             hom.valid, {"presentation": str(wp), "generator": c, "relator_sums": list(hom.relator_sums)}),
        Fact("occurs", f"{c} occurs in the cyclically reduced relator, so the other generators "
                       f"{', '.join(cert.free_subgroup)} generate a free subgroup",
             c in wp.relators[0].generators(), {"free_subgroup": list(cert.free_subgroup)}),
        Fact("subgroup-sums", f"every generator of the free subgroup has exponent sum 0 at {c}",
             all(exponent_sum(Word.gen(s), c) == 0 for s in cert.free_subgroup)),
        Fact("barbieri-instance",
             f"|g {c}^n g^-1|_{c} = n for all {bar.cases} pairs with |g| <= {bound}, 1 <= n <= {bound}; "
             f"so no conjugate of a positive power of {c} lies in the free subgroup",
             bar.valid, {"generator": c, "bound": bound, "cases": bar.cases}),
        Fact("pattern-counts",
             f"the free extension keeps the alphabet ({len(ext.alphabet)} letters) and all "
             f"{len(ext.forbidden)} forbidden patterns",
             len(ext.forbidden) == len(plug_sft.forbidden) and ext.alphabet == plug_sft.alphabet,
             {"plug": plug_sft.to_dict(), "embedding": {k: str(v) for k, v in emb.generators.items()},
              "patterns": len(ext.forbidden), "alphabet": len(ext.alphabet)}),
    ]
    tiling_data = {"model": g_model.spec(), "radius": radius, "nodes": tile.nodes_explored,
                   "outcome": tile.outcome.value}
    if tile.config is not None:
        tiling_data["colors"] = [symbol_to_json(x) for x in tile.config.colors]
    proved.append(Fact(
        "tiling",
        f"the ball of radius {radius} ({len(ball)} elements) has a coloring with no forbidden pattern"
        if tile.satisfiable else f"ball of radius {radius}: {tile.outcome.value}",
        tile.satisfiable, tiling_data,
    ))

    evidence = [
        Fact("nonempty", "a tileable ball is consistent with, but does not prove, nonemptiness of the extension",
             tile.satisfiable),
    ]
    if periodic.found:
        statement = (f"a strongly periodic point exists over quotient {periodic.quotient} "
                     f"(index {periodic.config.table.index}): this plug is not weakly aperiodic, so the "
                     f"weak aperiodicity part of the conclusion needs a plug with the cited property")
    elif periodic.outcome is Outcome.NONE_UP_TO_QUOTIENT:
        statement = f"no strongly periodic point over the {len(quotients)} supplied quotient(s)"
    else:
        statement = f"periodic search stopped after {periodic.nodes_explored} nodes"
    evidence.append(Fact("periodic-search", statement, True,
                         {"outcome": periodic.outcome.value, "indices": [t.index for t in quotients],
                          "nodes": periodic.nodes_explored}))
    evidence.append(Fact("order", cert.note, True))

    cited = list(cert.citations)
    return CertificateReport(
        "zero-exponent", str(p),
        f"with a weakly aperiodic plug on F2, the free extension along <{', '.join(cert.free_subgroup)}> is "
        f"weakly aperiodic but not strongly aperiodic; the group is not periodically rigid",
        tuple(proved), tuple(cited), tuple(evidence), params,
    )


def recheck_certificate(report: dict) -> dict[str, bool]:
    """Re-derive every PROVED fact of a serialized report from its recorded data alone."""
    facts = {f["key"]: f for f in report["proved"]}
    out: dict[str, bool] = {}
    if report["kind"] == "infinite-ends":
        d = facts["absent-generator"]["data"]
        out["absent-generator"] = d["generator"] not in parse_word(d["relator"]).generators()
        rem = parse_presentation(facts["free-product"]["data"]["remaining"])
        out["free-product"] = len(rem.generators) >= 2
        d = facts["replay"]["data"]
        steps = [TietzeStep.from_dict(s) for s in d["log"]]
        out["replay"] = replay(parse_presentation(report["presentation"]), steps) == parse_presentation(d["result"])
        return out

    d = facts["replay"]["data"]
    wp = parse_presentation(d["result"])
    steps = [TietzeStep.from_dict(s) for s in d["log"]]
    out["replay"] = replay(parse_presentation(d["input"]), steps) == wp

    d = facts["homomorphism"]["data"]
    c = d["generator"]
    out["homomorphism"] = all(exponent_sum(r, c) == 0 for r in wp.relators)

    free = facts["occurs"]["data"]["free_subgroup"]
    out["occurs"] = c in wp.relators[0].generators() and sorted(free + [c]) == sorted(wp.generators)
    out["subgroup-sums"] = all(exponent_sum(Word.gen(s), c) == 0 for s in free)

    d = facts["barbieri-instance"]["data"]
    bar = barbieri_instance_check(wp, d["generator"], d["bound"])
    out["barbieri-instance"] = bar.valid and bar.cases == d["cases"]

    d = facts["pattern-counts"]["data"]
    plug = Sft.from_dict(d["plug"])
    t = facts["tiling"]["data"]
    model = model_from_spec(t["model"])
    emb = Embedding(model, {k: parse_word(v) for k, v in d["embedding"].items()})
    ext = free_extension(plug, emb)
    out["pattern-counts"] = len(ext.forbidden) == d["patterns"] == len(plug.forbidden)

    ball = build_ball(model, radius=t["radius"])
    colors = t.get("colors")
    if colors is None or len(colors) != len(ball):
        out["tiling"] = False
    else:
        cfg = BallConfig(ball, tuple(symbol_from_json(x) for x in colors))
        out["tiling"] = cfg.is_total and not violations(ext, cfg)
    return out


def report_citation_keys(report: dict) -> list[str]:
    return [c["key"] for c in report["cited"] if c["key"] in CITATIONS]


def dumps_report(report: CertificateReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"


__all__ = [
    "Outcome", "TileResult", "tile_ball", "all_tilings", "PeriodicSearchResult", "search_strongly_periodic",
    "periodic_points", "abelian_quotient_table", "stabilizer_scan", "BarbieriCheck", "reduced_words",
    "barbieri_instance_check", "Fact", "CertificateReport", "check_theorem15_pipeline",
    "recheck_certificate", "report_citation_keys", "dumps_report", "cite",
]

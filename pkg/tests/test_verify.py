import copy
import itertools
import json

import pytest

from conftest import DATA, golden_mean, z_difference
from groupsft.errors import BudgetExceeded, PreconditionViolated
from groupsft.extensions import product_lift, product_lift_quotient
from groupsft.groups import FreeAbelian, FreeGroup, build_ball, todd_coxeter
from groupsft.presentations import parse_presentation, surface_presentation
from groupsft.sft import BallConfig, Pattern, QuotientConfig, Sft, quotient_violations, violations
from groupsft.verify import (
    Outcome,
    abelian_quotient_table,
    all_tilings,
    barbieri_instance_check,
    check_theorem15_pipeline,
    periodic_points,
    recheck_certificate,
    reduced_words,
    search_strongly_periodic,
    stabilizer_scan,
    tile_ball,
)
from groupsft.words import Word, parse_word

W = parse_word
Z = parse_presentation("< a | >")
Z2 = parse_presentation("< a b | a b a^-1 b^-1 >")


def plug():
    return Sft.from_text((DATA / "plug_f2.sft").read_text())


def empty_on_z():
    # 0 must be followed by 1 and 1 must be followed by 1, but 1 must be preceded by 0
    pats = [Pattern.from_pairs([("1", 0), ("a", 0)]), Pattern.from_pairs([("1", 1), ("a", 0)]),
            Pattern.from_pairs([("1", 1), ("a", 1)])]
    return Sft((0, 1), tuple(pats), FreeGroup(["a"]))


# -- tiling ----------------------------------------------------------------------------------


def test_tile_examples():
    s = golden_mean()
    r = tile_ball(s, build_ball(s.model, radius=2))
    assert r.satisfiable and r.config.colors == (0,) * 13
    r = tile_ball(empty_on_z(), build_ball(FreeGroup(["a"]), radius=1))
    assert r.outcome is Outcome.UNSATISFIABLE and r.config is None


def test_tile_budget():
    s = Sft((0, 1), (), FreeAbelian(["a", "b"]))
    r = tile_ball(s, build_ball(s.model, radius=3), node_budget=5)
    assert r.outcome is Outcome.BUDGET_EXCEEDED


def test_tile_rejects_foreign_ball():
    with pytest.raises(PreconditionViolated):
        tile_ball(golden_mean(), build_ball(FreeGroup(["x"]), radius=1))


def test_tile_is_deterministic_and_valid():
    s = z_difference()
    b = build_ball(s.model, radius=4)
    first = tile_ball(s, b)
    assert first == tile_ball(s, b)
    assert violations(s, first.config) == []
    assert first.config.at(Word()) == 0


def test_tiling_is_monotone_in_the_radius():
    # unsatisfiable at radius r stays unsatisfiable at every larger radius
    s = empty_on_z()
    results = [tile_ball(s, build_ball(s.model, radius=r)).satisfiable for r in range(5)]
    assert results == sorted(results, reverse=True)
    assert results[0] and not results[-1]


def test_all_tilings_match_brute_force():
    s = golden_mean()
    b = build_ball(s.model, radius=1)
    brute = [c for c in itertools.product((0, 1), repeat=len(b)) if not violations(s, BallConfig(b, c))]
    assert [t.colors for t in all_tilings(s, b)] == brute


def test_all_tilings_budget():
    s = Sft((0, 1), (), FreeAbelian(["a", "b"]))
    with pytest.raises(BudgetExceeded):
        list(all_tilings(s, build_ball(s.model, radius=2), node_budget=10))


# -- periodic points -----------------------------------------------------------------------------


def test_search_examples():
    s = z_difference()
    t1 = todd_coxeter(Z, [W("a")])
    t2 = todd_coxeter(Z, [W("a^2")])
    r = search_strongly_periodic(s, [t1])
    assert r.outcome is Outcome.NONE_UP_TO_QUOTIENT and r.searched == (0,)
    r = search_strongly_periodic(s, [t1, t2])
    assert r.found and r.quotient == 1 and r.config.colors == (0, 1)
    assert quotient_violations(s, r.config) == []


def test_periodic_points_match_brute_force():
    for s, p in [(z_difference(), Z), (golden_mean(), Z2)]:
        gens = [Word.gen(g) for g in p.generators]
        for k in range(1, 4):
            t = todd_coxeter(p, [g ** k for g in gens])
            brute = [c for c in itertools.product(s.alphabet, repeat=t.index)
                     if not quotient_violations(s, QuotientConfig(t, c))]
            assert [q.colors for q in periodic_points(s, t)] == brute


def test_abelian_quotient_table():
    t = abelian_quotient_table(surface_presentation(2), 2)
    assert t.index == 16
    t.validate()
    assert abelian_quotient_table(Z2, 3).index == 9


# -- stabilizers ---------------------------------------------------------------------------------


def test_stabilizer_scan_on_quotient_configs():
    t = todd_coxeter(Z, [W("a^2")])
    rep = stabilizer_scan(FreeGroup(["a"]), QuotientConfig(t, (0, 1)), 3)
    assert rep.exact and rep.semantics == "exact"
    assert rep.distinct_translates_found == 2
    assert W("a^2") in rep.stabilizing_elements and W("a") not in rep.stabilizing_elements

    q = product_lift_quotient(QuotientConfig(t, (0, 1)), 3)
    m = FreeGroup(["a", "z"])  # words only; the scan is decided on the coset table
    rep = stabilizer_scan(m, q, 2)
    assert W("z") in rep.stabilizing_elements and W("z^-1") in rep.stabilizing_elements


def test_stabilizer_scan_on_windows():
    ball = build_ball(FreeGroup(["a"]), radius=4)
    x = BallConfig.from_function(ball, lambda w: sum(x.sign for x in w) % 2)
    rep = stabilizer_scan(ball.model, x, 2)
    assert not rep.exact and rep.semantics == "necessary-condition"
    assert W("a") not in rep.stabilizing_elements
    assert W("a^2") in rep.stabilizing_elements
    y = product_lift(BallConfig.from_function(build_ball(FreeAbelian(["a", "b"]), radius=2),
                                              lambda w: sum(x.sign for x in w) % 2), 2)
    assert W("z") in stabilizer_scan(y.ball.model, y, 1).stabilizing_elements


# -- exponent sums -------------------------------------------------------------------------------


def test_reduced_words_count():
    assert sum(1 for _ in reduced_words(["a", "b"], 3)) == 1 + 4 + 12 + 36


def test_barbieri_instance():
    r = barbieri_instance_check(parse_presentation("< t1 t2 t3 | t1 t3^-1 t2 t3 >"), "t3", 3)
    assert r.valid and r.cases == (1 + 6 + 30 + 150) * 3


# -- certificates --------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def abc_report():
    return check_theorem15_pipeline(parse_presentation("< a b c | a b c >"), plug(), radius=2)


def test_pipeline_zero_exponent(abc_report):
    r = abc_report
    assert r.kind == "zero-exponent" and r.all_proved
    assert [f.key for f in r.proved] == ["replay", "homomorphism", "occurs", "subgroup-sums",
                                         "barbieri-instance", "pattern-counts", "tiling"]
    assert [f.key for f in r.evidence] == ["nonempty", "periodic-search", "order"]
    assert {c.key for c in r.cited} >= {"freiheitssatz", "free-groups-not-rigid"}
    text = r.to_text()
    assert text.index("PROVED") < text.index("CITED") < text.index("EVIDENCE")


def test_pipeline_split():
    r = check_theorem15_pipeline(parse_presentation("< a b c | a b a^-1 b^-1 >"), plug())
    assert r.kind == "infinite-ends" and r.all_proved
    assert all(recheck_certificate(r.to_dict()).values())


def test_recheck_accepts_the_report(abc_report):
    d = json.loads(json.dumps(abc_report.to_dict()))
    checked = recheck_certificate(d)
    assert set(checked) == {f.key for f in abc_report.proved}
    assert all(checked.values())


@pytest.mark.parametrize("tamper", ["relator", "colors", "bound", "log"])
def test_recheck_detects_tampering(abc_report, tamper):
    d = copy.deepcopy(abc_report.to_dict())
    facts = {f["key"]: f for f in d["proved"]}
    if tamper == "relator":
        facts["replay"]["data"]["result"] = "< t1 t2 t3 | t1 t3 t2 t3 >"
    elif tamper == "colors":
        colors = facts["tiling"]["data"]["colors"]
        facts["tiling"]["data"]["colors"] = [colors[0]] * len(colors)
    elif tamper == "bound":
        facts["barbieri-instance"]["data"]["cases"] += 1
    else:
        facts["replay"]["data"]["log"] = facts["replay"]["data"]["log"][:-1]
    assert not all(recheck_certificate(d).values())


def test_pipeline_rejects_oversized_plug():
    big = Sft((0, 1), (), FreeGroup(["x", "y", "z", "w"]))
    with pytest.raises(PreconditionViolated) as err:
        check_theorem15_pipeline(parse_presentation("< a b c | a b c >"), big)
    assert err.value.stage == "extension"

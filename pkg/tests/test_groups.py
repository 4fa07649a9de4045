import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from groupsft.errors import BudgetExceeded, GroupSftError, ModelFailure, SmallCancellationViolated
from groupsft.groups import (
    CosetTable,
    DehnHyperbolic,
    DirectWithCyclic,
    FreeAbelian,
    FreeGroup,
    OneRelatorFree,
    SemidirectFreeByCyclic,
    build_ball,
    check_small_cancellation,
    conjugate_generator,
    coset_decompose,
    dehn_reduce,
    exponent_hom_check,
    model_for_presentation,
    model_from_spec,
    schreier_generators,
    todd_coxeter,
)
from groupsft.presentations import parse_presentation, surface_presentation
from groupsft.words import Letter, Word, letters_of, parse_word

W = parse_word
P = parse_presentation
KLEIN = P("< a b | a b a b^-1 >")
Z2 = P("< a b | a b a^-1 b^-1 >")


def klein_model():
    # b^-1 a b = a^-1
    return SemidirectFreeByCyclic(["a"], "b", {"a": W("a^-1")})


# -- models ---------------------------------------------------------------------------------


def test_free_abelian_normal_form():
    m = FreeAbelian(["a", "b"])
    assert m.normal_form(W("b a b^-1 a")) == W("a^2")
    assert m.equal(W("a b"), W("b a"))
    assert m.vector(W("a b^-2")) == (1, -2)


def test_direct_with_cyclic():
    m = DirectWithCyclic(FreeAbelian(["a", "b"]), 3)
    assert m.normal_form(W("z a z b z")) == W("a b")
    assert m.split(W("z^2 a z")) == (W("a"), 0)
    assert m.normal_form(W("z^-1")) == W("z^2")
    assert not m.equal(W("z"), Word())


def test_free_by_cyclic_klein_bottle():
    m = klein_model()
    assert m.decompose(W("a b")) == (1, W("a^-1"))
    assert m.is_identity(KLEIN.relators[0])
    assert m.normal_form(W("b a b^-1")) == W("a^-1")
    assert model_from_spec(m.spec()) == m


def test_one_relator_free():
    m = OneRelatorFree(P("< t1 t2 t3 | t1 t3^-1 t2 t3 >"))
    assert m.eliminated == "t1"
    assert m.is_identity(W("t1 t3^-1 t2 t3"))
    assert m.normal_form(W("t1")) == W("t3^-1 t2^-1 t3")


def test_dehn_examples():
    p = surface_presentation(2)
    r = p.relators[0]
    assert dehn_reduce(p, r) == Word()
    u = W("a1 b2^-1 a2")
    assert dehn_reduce(p, u * r * u.inverse() * W("b1") * r.inverse() * W("b1^-1")) == Word()
    assert dehn_reduce(p, W("a1")) == W("a1")
    m = DehnHyperbolic(p)
    assert not m.canonical
    assert m.equal(W("a1 b1"), W("b2 a2 b2^-1 a2^-1 b1 a1"))
    assert not m.equal(W("a1 b1"), W("b1 a1"))


def test_small_cancellation_rejects_torus():
    with pytest.raises(SmallCancellationViolated):
        check_small_cancellation(Z2)


def test_model_for_presentation():
    assert isinstance(model_for_presentation(P("< a b | >")), FreeGroup)
    assert isinstance(model_for_presentation(P("< a b c | a b c >")), OneRelatorFree)
    assert isinstance(model_for_presentation(surface_presentation(2)), DehnHyperbolic)
    with pytest.raises(ModelFailure):
        model_for_presentation(P("< a b | a^2 , b^3 >"))


MODELS = [
    FreeGroup(["a", "b"]),
    FreeAbelian(["a", "b"]),
    DirectWithCyclic(FreeAbelian(["a", "b"]), 2),
    klein_model(),
    OneRelatorFree(P("< a b c | a b c >")),
    DehnHyperbolic(surface_presentation(2)),
]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec()["name"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_model_axioms(model, data):
    letter = st.builds(Letter, st.sampled_from(model.generators), st.sampled_from([1, -1]))
    word = st.lists(letter, max_size=10).map(Word)
    u, v, w = data.draw(word), data.draw(word), data.draw(word)
    nf = model.normal_form(u)
    assert model.equal(model.normal_form(nf), nf)
    assert model.equal(u, nf)
    assert model.equal(model.multiply(model.multiply(u, v), w), model.multiply(u, model.multiply(v, w)))
    assert model.is_identity(model.multiply(u, model.inverse(u)))
    if model.canonical:
        assert model.equal(u, v) == (model.normal_form(u) == model.normal_form(v))
    for r in model.presentation().relators:
        assert model.is_identity(u * r * u.inverse())


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec()["name"])
def test_model_spec_round_trip(model):
    assert model_from_spec(model.spec()) == model


# -- balls ---------------------------------------------------------------------------------


def _brute_force_free_ball(n, radius):
    letters = letters_of([f"x{i}" for i in range(n)])
    seen = set()
    for length in range(radius + 1):
        for combo in itertools.product(letters, repeat=length):
            seen.add(Word(combo))
    return len(seen)


@pytest.mark.parametrize("n, radius", [(1, 4), (2, 3), (3, 2)])
def test_free_ball_matches_brute_force(n, radius):
    ball = build_ball(FreeGroup([f"x{i}" for i in range(n)]), radius=radius)
    assert len(ball) == _brute_force_free_ball(n, radius)
    for d in range(1, radius + 1):
        assert ball.distance.count(d) == 2 * n * (2 * n - 1) ** (d - 1)


def test_ball_examples():
    assert len(build_ball(FreeAbelian(["a", "b"]), radius=1)) == 5
    assert len(build_ball(FreeGroup(["a", "b"]), radius=2)) == 17
    assert len(build_ball(FreeGroup(["a", "b"]), radius=0)) == 1
    for r in range(5):
        assert len(build_ball(FreeAbelian(["a", "b"]), radius=r)) == 2 * r * r + 2 * r + 1


def test_surface_ball_has_no_collisions_below_half_the_relator():
    # the relator has length 8, so words of length <= 3 are pairwise distinct
    ball = build_ball(DehnHyperbolic(surface_presentation(2)), radius=3)
    assert len(ball) == _brute_force_free_ball(4, 2) + 8 * 7 * 7


def test_ball_structure():
    ball = build_ball(klein_model(), radius=3)
    m = ball.model
    assert ball.words[0] == Word()
    for i, j in itertools.combinations(range(len(ball)), 2):
        assert not m.equal(ball.words[i], ball.words[j])
    for i, w in enumerate(ball.words):
        assert len(w) == ball.distance[i]
        for x in ball.letters:
            j = ball.neighbor(i, x)
            if j is not None:
                assert m.equal(ball.words[j], w * Word((x,)))


# -- coset tables ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p, subgroup, golden",
    [
        (KLEIN, ["a", "b^2"], "klein_a_b2.ct"),
        (Z2, ["a^2", "b"], "z2_a2_b.ct"),
        (Z2, ["a", "b"], "z2_index1.ct"),
        (KLEIN, ["a", "b"], "klein_index1.ct"),
    ],
)
def test_todd_coxeter_matches_golden_tables(p, subgroup, golden):
    expected = CosetTable.from_text((GOLDEN / golden).read_text())
    t = todd_coxeter(p, [W(s) for s in subgroup])
    assert t == expected
    assert CosetTable.from_text(t.to_text()) == t
    t.validate()


def test_todd_coxeter_finite_groups():
    s3 = P("< a b | a^3 , b^2 , a b a b >")
    assert todd_coxeter(s3, []).index == 6
    assert todd_coxeter(s3, [W("a")]).index == 2
    a5 = P("< a b | a^2 , b^3 , a b a b a b a b a b >")
    assert todd_coxeter(a5, []).index == 60


def test_todd_coxeter_budget():
    with pytest.raises(BudgetExceeded):
        todd_coxeter(P("< a | >"), [], max_cosets=50)


def test_table_validation_rejects_broken_tables():
    d = CosetTable.from_text((GOLDEN / "z2_a2_b.ct").read_text()).to_dict()
    d["action"]["b"] = [2, 1]
    with pytest.raises(GroupSftError):
        CosetTable.from_dict(d)


def test_schreier_generators_regenerate_the_subgroup():
    t = todd_coxeter(KLEIN, [W("a"), W("b^2")])
    again = todd_coxeter(KLEIN, list(schreier_generators(t)))
    assert again.action == t.action


def test_coset_decompose():
    t = todd_coxeter(Z2, [W("a^2"), W("b")])
    m = FreeAbelian(["a", "b"])
    assert coset_decompose(t, m, Word()) == (Word(), 1)
    assert coset_decompose(t, m, W("a")) == (Word(), 2)
    for g in build_ball(m, radius=3).words:
        h, i = coset_decompose(t, m, g)
        assert t.coset_of(h) == 1
        assert m.equal(m.multiply(h, t.representative(i)), g)


def test_conjugate_generator():
    t = todd_coxeter(Z2, [W("a^2"), W("b")])
    assert conjugate_generator(t, W("a^2"), 1) == W("a^2")
    assert FreeAbelian(["a", "b"]).equal(conjugate_generator(t, W("a^2"), 2), W("a^2"))
    f2 = todd_coxeter(P("< a b | >"), [W("a"), W("b^2"), W("b a b^-1")])
    assert f2.representatives == (Word(), W("b"))
    assert conjugate_generator(f2, W("a"), 2) == W("b^-1 a b")


def test_exponent_hom_check():
    assert exponent_hom_check(P("< t1 t2 t3 | t1 t3^-1 t2 t3 >"), "t3").valid
    assert exponent_hom_check(surface_presentation(2), "a1").valid
    cert = exponent_hom_check(P("< a b c | a b c >"), "c")
    assert not cert.valid and cert.relator_sums == (1,)

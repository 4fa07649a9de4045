import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, golden_mean, z_difference
from groupsft.errors import DuplicateSupportPoint, PatternError
from groupsft.groups import FreeAbelian, FreeGroup, build_ball, todd_coxeter
from groupsft.presentations import parse_presentation
from groupsft.sft import (
    BallConfig,
    Match,
    Pattern,
    ProductLetter,
    QuotientConfig,
    Sft,
    appears,
    quotient_fixed_by,
    quotient_orbit_size,
    quotient_violations,
    shift,
    violations,
)
from groupsft.words import Word, parse_word

W = parse_word
Z = parse_presentation("< a | >")
Z2 = parse_presentation("< a b | a b a^-1 b^-1 >")


def parity(w):
    return sum(x.sign for x in w) % 2


def test_pattern_rejects_duplicates():
    with pytest.raises(DuplicateSupportPoint):
        Pattern.from_pairs([("a b", 0), ("a b", 1)])
    with pytest.raises(DuplicateSupportPoint):
        Sft((0, 1), (Pattern.from_pairs([("a b", 0), ("b a", 1)]),), FreeAbelian(["a", "b"]))
    # distinct in the free group
    Sft((0, 1), (Pattern.from_pairs([("a b", 0), ("b a", 1)]),), FreeGroup(["a", "b"]))


def test_sft_validation():
    with pytest.raises(PatternError):
        Sft((), (), FreeGroup(["a"]))
    with pytest.raises(PatternError):
        Sft((0, 0), (), FreeGroup(["a"]))
    with pytest.raises(PatternError):
        Sft((0, 1), (Pattern.from_pairs([("1", 2)]),), FreeGroup(["a"]))


@pytest.mark.parametrize("name", ["golden_mean_z2.sft", "z_difference.sft", "plug_f2.sft"])
def test_sft_files_round_trip_bit_exact(name):
    text = (DATA / name).read_text()
    s = Sft.from_text(text)
    assert s.to_text() == text
    assert Sft.from_dict(s.to_dict()) == s


def test_product_letters_serialize():
    s = Sft((ProductLetter(0, 1), ProductLetter(0, 2)), (Pattern.from_pairs([("1", ProductLetter(0, 2))]),),
            FreeGroup(["a"]))
    again = Sft.from_text(s.to_text())
    assert again == s and isinstance(again.alphabet[0], ProductLetter)
    assert str(again.alphabet[1]) == "(0,2)"


def test_golden_mean_file_matches_fixture():
    assert Sft.from_text((DATA / "golden_mean_z2.sft").read_text()) == golden_mean()


def test_shift_examples():
    ball = build_ball(FreeGroup(["a"]), radius=2)
    c = BallConfig.from_function(ball, lambda w: sum(x.sign for x in w))
    moved = shift(ball.model, W("a"), c)
    assert moved.at(W("a")) == 0
    assert moved.at(W("a^2")) == 1
    assert moved.at(W("a^-2")) is None


def test_appears_precedence():
    ball = build_ball(FreeGroup(["a"]), radius=1)
    c = BallConfig.from_function(ball, parity)
    p = Pattern.from_pairs([("1", 1), ("a", 1)])
    assert appears(ball.model, p, c, Word()) is Match.NO
    assert appears(ball.model, p, c, W("a")) is Match.UNKNOWN
    # a definite mismatch beats the unknown cell a^2
    assert appears(ball.model, Pattern.from_pairs([("1", 0), ("a", 0)]), c, W("a")) is Match.NO
    assert appears(ball.model, Pattern.from_pairs([("1", 1), ("a^-1", 0)]), c, W("a")) is Match.YES


def test_violations_examples():
    s = golden_mean()
    ball = build_ball(s.model, radius=1)
    c = BallConfig.from_function(ball, lambda w: 1 if w in (Word(), W("a")) else 0)
    assert violations(s, c) == [(s.forbidden[0], Word())]
    assert violations(s, BallConfig.constant(ball, 0)) == []
    checker = BallConfig.from_function(build_ball(s.model, radius=3), parity)
    assert violations(s, checker) == []


def _oracle_violations(s, c):
    """Brute force through the group model, independent of ball lookups."""
    m, words = s.model, c.ball.words
    found = []
    for w in words:
        for p in s.forbidden:
            hits = []
            for q, col in p.items():
                target = m.multiply(w, q)
                idx = [i for i, v in enumerate(words) if m.equal(v, target)]
                hits.append(bool(idx) and c.colors[idx[0]] == col)
            if all(hits):
                found.append((p, w))
    return found


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([0, 1]), min_size=13, max_size=13))
def test_violations_match_oracle(colors):
    s = golden_mean()
    c = BallConfig(build_ball(s.model, radius=2), tuple(colors))
    assert violations(s, c) == _oracle_violations(s, c)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([0, 1, None]), min_size=13, max_size=13), st.integers(0, 12), st.integers(0, 12))
def test_shift_composes(colors, i, j):
    ball = build_ball(FreeAbelian(["a", "b"]), radius=2)
    m = ball.model
    c = BallConfig(ball, tuple(colors))
    g, h = ball.words[i], ball.words[j]
    once = shift(m, m.multiply(g, h), c)
    twice = shift(m, g, shift(m, h, c))
    assert once.agrees_with(twice)
    assert shift(m, Word(), c) == c


def test_quotient_violations_examples():
    s = z_difference()
    t2 = todd_coxeter(Z, [W("a^2")])
    assert quotient_violations(s, QuotientConfig(t2, (0, 1))) == []
    assert quotient_violations(s, QuotientConfig(t2, (1, 1))) == [(s.forbidden[1], 1), (s.forbidden[1], 2)]
    t1 = todd_coxeter(Z, [W("a")])
    assert len(quotient_violations(s, QuotientConfig(t1, (0,)))) == 1


def test_quotient_violations_reject_foreign_tables():
    t = todd_coxeter(parse_presentation("< x | >"), [W("x^2")])
    with pytest.raises(PatternError):
        quotient_violations(z_difference(), QuotientConfig(t, (0, 1)))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_quotient_violations_agree_with_large_windows(k):
    s = z_difference()
    t = todd_coxeter(Z, [W(f"a^{k}")])
    ball = build_ball(s.model, radius=6)
    for colors in itertools.product((0, 1), repeat=k):
        q = QuotientConfig(t, colors)
        assert bool(quotient_violations(s, q)) == bool(violations(s, q.to_ball(ball)))


def test_quotient_periodicity():
    t = todd_coxeter(Z2, [W("a^2"), W("b^2"), W("a b")])
    assert t.index == 2
    checker = QuotientConfig(t, (0, 1))
    assert quotient_fixed_by(checker, W("a b"))
    assert not quotient_fixed_by(checker, W("a"))
    assert quotient_orbit_size(checker) == 2
    assert quotient_orbit_size(QuotientConfig(t, (0, 0))) == 1
    # a table finer than the configuration's true period
    t4 = todd_coxeter(Z, [W("a^4")])
    # cosets come in shortlex order: 1, a, a^-1, a^2
    q = QuotientConfig(t4, (0, 1, 1, 0))
    assert quotient_orbit_size(q) == 2
    assert quotient_fixed_by(q, W("a^2"))


def test_appears_trivial_cases():
    ball = build_ball(FreeGroup(["a"]), radius=1)
    c = BallConfig.from_function(ball, parity)
    for w in ball.words:
        assert appears(ball.model, Pattern((), ()), c, w) is Match.YES
    assert appears(ball.model, Pattern.from_pairs([("1", 1)]), c, W("a")) is Match.YES

import random

import pytest

from treegroups import (
    Ball,
    EntryBudgetExceeded,
    WordCapExceeded,
    alternation_check,
    compose,
    enumerate_ball,
    growth_series,
    inverse,
    level_stabilizer_member,
    trivial,
)
from oracles import brute_ball

# Ball sizes frozen from the all-words oracle.
GAMMA_G = {0: 1, 3: 3, 5: 5, 8: 11, 10: 16, 12: 23, 16: 43, 20: 77, 30: 280}
GAMMA_H = {0: 1, 3: 3, 6: 7, 10: 16, 12: 24, 20: 83, 30: 325}
GAMMA_I = {0: 1, 3: 2, 6: 4, 10: 12, 12: 22, 20: 89}
GAMMA_I_EXT = {**GAMMA_I, 24: 176, 35: 1139}


def _check_gamma(ball, frozen):
    ball.extend(max(frozen))
    for r, n in frozen.items():
        assert ball.gamma(r) == n, (r, ball.gamma(r), n)


def test_growth_G(ball_G):
    _check_gamma(ball_G, GAMMA_G)


def test_growth_H(ball_H):
    _check_gamma(ball_H, GAMMA_H)


def test_growth_I_standard(ball_I_std):
    _check_gamma(ball_I_std, GAMMA_I)


def test_growth_I_extended(ball_I):
    # extended letters are priced so that lengths agree with the standard set
    _check_gamma(ball_I, GAMMA_I_EXT)


@pytest.mark.parametrize("name", ["G", "H", "I"])
def test_oracle_equivalence_small(name, request):
    group = request.getfixturevalue(name)
    ball = Ball(group, group.standard_generators)
    ball.extend(10)
    reference = brute_ball(group, 10, group.standard_generators)
    settled = dict(ball.items(10))
    assert set(settled) == set(reference)
    for elem, (weight, words) in reference.items():
        assert settled[elem] == weight
        assert ball.geodesic_words(elem) == words


def test_oracle_equivalence_extended(I, ball_I):
    ball_I.extend(12)
    reference = brute_ball(I, 12)
    settled = dict(ball_I.items(12))
    assert set(settled) == set(reference)
    for elem, (weight, words) in reference.items():
        assert settled[elem] == weight
        assert ball_I.geodesic_words(elem) == words


def test_zero_length_iff_trivial(ball_G, G):
    ball_G.extend(12)
    for elem, length in ball_G.items(12):
        assert (length == 0) == trivial(elem)


def test_length_symmetric_and_triangle(ball_G, G):
    ball_G.extend(16)
    rng = random.Random(3)
    elems = [e for e, d in ball_G.items(8)]
    for elem in elems:
        assert ball_G.length_of(inverse(elem)) == ball_G.length_of(elem)
    for _ in range(30):
        u, v = rng.choice(elems), rng.choice(elems)
        lu, lv = ball_G.length_of(u), ball_G.length_of(v)
        assert ball_G.length_of(compose(u, v), bound=lu + lv) <= lu + lv


def test_geodesic_words_price_correctly(ball_H, H):
    ball_H.extend(14)
    weights = H.weights()
    for elem, length in ball_H.items(14):
        words = ball_H.geodesic_words(elem)
        assert words
        for names in words:
            assert sum(weights[n] for n in names) == length
            assert trivial(compose(H.metric_element(names), inverse(elem)))
        assert ball_H.a_geodesic_word(elem) in words


def test_word_cap(ball_G, G):
    ball_G.extend(12)
    doubled = G.element("σcσc")  # two geodesic spellings
    assert len(ball_G.geodesic_words(doubled)) == 2
    with pytest.raises(WordCapExceeded):
        ball_G.geodesic_words(doubled, cap=1)


def test_entry_budget(G):
    ball = Ball(G, G.standard_generators, entry_budget=5)
    with pytest.raises(EntryBudgetExceeded):
        ball.extend(12)


def test_length_of_extends_on_demand(G):
    ball = Ball(G, G.standard_generators)
    assert ball.length_of(G.element("σaσb")) == 15
    fresh = Ball(G, G.standard_generators)
    with pytest.raises(RuntimeError):
        fresh.length_of(G.element("σaσb"), bound=3)


def test_enumerate_ball_and_series(G):
    ball = enumerate_ball(G, 10, generators=G.standard_generators)
    assert ball.gamma(10) == GAMMA_G[10]
    series = growth_series(G, 10, generators=G.standard_generators)
    assert series.samples[0] == (0, 1)
    assert series.samples[-1] == (10, GAMMA_G[10])
    rates = series.rates()
    assert rates[-1][2] == pytest.approx(16 ** 0.1)


def test_level_stabilizer(G, I):
    assert not level_stabilizer_member(G.element("σ"), 1)
    assert level_stabilizer_member(G.element("a"), 1)
    assert not level_stabilizer_member(G.element("a"), 2)  # left section is σ
    assert level_stabilizer_member(G.element(""), 5)
    assert level_stabilizer_member(I.element("ab"), 1)


def test_alternation_holds_for_G(ball_G):
    report = alternation_check(ball_G, radius=30)
    assert report["passed"], report["failures"][:3]


def test_alternation_fails_for_I_standard(ball_I_std):
    report = alternation_check(ball_I_std, radius=8)
    assert not report["passed"]
    failing = {f["element"] for f in report["failures"]}
    assert "ab" in failing  # no geodesic over σ, a, b alternates


def test_alternation_holds_for_I_extended(ball_I):
    report = alternation_check(ball_I, radius=40)
    assert report["passed"], report["failures"][:3]


def test_settle_order_deterministic(G):
    first = [e.word for e, _ in enumerate_ball(G, 14).items(14)]
    second = [e.word for e, _ in enumerate_ball(G, 14).items(14)]
    assert first == second

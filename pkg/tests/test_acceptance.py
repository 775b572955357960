"""Acceptance checks, one test per criterion.

Run with `pytest -v tests/test_acceptance.py` to get one pass/fail line per
criterion.  Each test also prints its own verdict line for -s runs.  Exact
equality throughout; runtime ceilings are asserted where stated.
"""

import time
from fractions import Fraction
from itertools import product

import pytest

from treegroups import (
    Ball,
    activity,
    bad_strings_census,
    bad_word_bound,
    builtin,
    compose,
    count_bad_elements,
    element_order,
    equal,
    reduction_factor_H,
    sections,
    trivial,
    verify_extended_table,
    verify_good_letter_bound,
    verify_patterns,
    verify_reduction_G,
)
from oracles import brute_ball


class _Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc == (None, None, None):
            assert self.elapsed < self.limit, \
                f"ran {self.elapsed:.2f}s, stated limit {self.limit}s"


def _verdict(name, ok, detail=""):
    print(f"criterion {name}: {'PASS' if ok else 'FAIL'}"
          + (f" ({detail})" if detail else ""))


def test_criterion_01_structure_lemmas(G, H, I):
    with _Clock(1.0):
        one, a, b, c = (G.element(w) for w in ("", "a", "b", "c"))
        klein = [one, a, b, c]
        closed = all(
            any(equal(compose(x, y), z) for z in klein)
            for x in klein for y in klein)
        squares = all(trivial(compose(x, x)) for x in klein)
        ab_is_c = equal(compose(a, b), c)
        distinct = len(set(klein)) == 4

        order_H_sb = element_order(H.element("σb")) == 4
        order_H_sa = element_order(H.element("σa")) == 8
        sc = H.element("σab")
        power = H.element("")
        sc_never_one = True
        for _ in range(64):
            power = compose(power, sc)
            if trivial(power):
                sc_never_one = False
                break

        order_I_sb = element_order(I.element("σb")) == 4
        order_I_sa = element_order(I.element("σa")) == 8
        order_I_ab = element_order(I.element("ab")) == 8

    ok = (closed and squares and ab_is_c and distinct and order_H_sb
          and order_H_sa and sc_never_one and order_I_sb and order_I_sa
          and order_I_ab)
    _verdict("1 structure lemmas", ok)
    assert ok


def test_criterion_02_extended_table(I):
    with _Clock(1.0):
        report = verify_extended_table(I)
    ok = (report["passed"] and len(report["rows"]) == 16
          and all(r["passed"] for r in report["rows"])
          and report["a8_equals_b8"])
    _verdict("2 extended table of I", ok,
             f"16 rows, a8 = b8: {report['a8_equals_b8']}")
    assert ok


def test_criterion_03_reduction_G():
    with _Clock(60.0):
        report = verify_reduction_G(40)
    by_word = {w["word"]: w for w in report["witnesses"]}
    ok = (report["passed"]
          and report["violations"] == []
          and by_word["σaσb"]["length"] == 15
          and by_word["σaσb"]["parts_length_sum"] == 13
          and by_word["σaσa"]["length"] == 16
          and by_word["σaσa"]["parts_length_sum"] == 14)
    _verdict("3 reduction for G", ok,
             f"{report['checked']} even elements through radius 40")
    assert ok


def test_criterion_04_good_bad_letters(I, ball_I):
    with _Clock(1.0):
        report = verify_good_letter_bound(I, ball=ball_I)
    ok = (report["passed"]
          and report["bad_letters"] == ["a", "a2", "b2", "b3"]
          and report["worst_good_ratio"] == Fraction(29, 31)
          and report["worst_good_letter"] == "b7")
    _verdict("4 good/bad classification", ok,
             f"bad = {report['bad_letters']}, worst {report['worst_good_ratio']}")
    assert ok


def test_criterion_05_templates(I):
    with _Clock(10.0):
        report = verify_patterns(I)
        fams = report["families"]
        sizes = {fam: len(entries) for fam, entries in fams.items()}
        all_hold = all(e["holds"] for entries in fams.values()
                       for e in entries)
        # the twelve template words: four A, four B, two C, two D
        a_pairs = {(e["instance"][0], e["instance"][2]) for e in fams["A"]}
        b_pairs = {(e["instance"][0], e["instance"][2]) for e in fams["B"]}
        twelve = (
            a_pairs == {("a", "a"), ("a", "a2"), ("b2", "a"), ("b2", "a2")}
            and b_pairs == {("a2", "b2"), ("a2", "b3"),
                            ("b3", "b2"), ("b3", "b3")}
            and len({e["template"] for e in fams["C"] if not e["mirror"]}) == 2
            and len({e["template"] for e in fams["D"]}) == 2
        )
        # every box slot ranges over all four bad letters
        full_boxes = (
            {e["instance"][1] for e in fams["A"]}
            == {e["instance"][1] for e in fams["B"]}
            == {"a", "a2", "b2", "b3"}
            and {e["boxes"] for e in fams["C"]
                 if not e["mirror"] and e["template"] == 0}
            == set(product(("a", "a2", "b2", "b3"), repeat=2))
        )
    ok = (report["passed"] and all_hold and twelve and full_boxes
          and sizes == {"P1": 4, "P2": 4, "A": 16, "B": 16,
                        "C": 64, "D": 128})
    _verdict("5 split templates", ok, f"{report['checks']} symbolic checks")
    assert ok


def test_criterion_06_bad_strings_census():
    with _Clock(60.0):
        census = bad_strings_census(40)
    counts = dict(census.counts)
    period = census.period_structure
    bounded = max(counts.values()) == census.bound_observed == 196
    tail_stable = all(counts[k] in (128, 144) for k in range(8, 41))
    four = set(period["interior_pairs"]) == {
        ("a", "b3"), ("a2", "a2"), ("b2", "b2"), ("b3", "a")}
    ok = bounded and tail_stable and four and period["holds"]
    _verdict("6 census of block-free words", ok,
             f"bound {census.bound_observed}, period mod 8: {period['holds']}")
    assert ok


def test_criterion_07_oracle_equivalence(G, H, I):
    with _Clock(300.0):
        jobs = [(G, G.standard_generators), (H, H.standard_generators),
                (I, I.standard_generators), (I, I.extended_generators)]
        ok = True
        sizes = []
        for group, gens in jobs:
            reference = brute_ball(group, 12, gens)
            ball = Ball(group, gens)
            ball.extend(12)
            settled = dict(ball.items(12))
            ok &= set(settled) == set(reference)
            ok &= all(settled[e] == w for e, (w, _) in reference.items())
            ok &= all(ball.geodesic_words(e) == words
                      for e, (_, words) in reference.items())
            sizes.append(len(reference))
    _verdict("7 oracle equivalence", ok, f"ball sizes {sizes}")
    assert ok


def test_criterion_08_self_replication_H(H):
    with _Clock(1.0):
        sc = H.element("σab")      # σc with c = ab
        cs = H.element("abσ")
        sc2 = compose(sc, sc)
        left, right = sections(sc2)
        base = (activity(sc2) == 0 and equal(left, cs) and equal(right, sc))
        ok = base
        for n in range(1, 9):
            lhs = H.element("")
            for _ in range(2 * n):
                lhs = compose(lhs, sc)
            want_left = H.element("")
            want_right = H.element("")
            for _ in range(n):
                want_left = compose(want_left, cs)
                want_right = compose(want_right, sc)
            l, r = sections(lhs)
            ok &= (activity(lhs) == 0 and equal(l, want_left)
                   and equal(r, want_right))
    _verdict("8 self-replication of σc", ok)
    assert ok


def test_criterion_09a_eta_value():
    got = reduction_factor_H(1)
    ok = got == Fraction(10, 11)
    _verdict("9a eta(1) = 10/11", ok,
             f"got {got}; (6 + e)/(6 + 2e) equals 10/11 at e = 2/3, not 1")
    assert ok, f"reduction factor at 1 is {got}, criterion demands 10/11"


def test_criterion_09b_bad_word_bound(H):
    got = bad_word_bound(H, 10, Fraction(1, 10))
    ok = got == 60
    _verdict("9b bad-word bound", ok, f"bound(H, 10, 1/10) = {got}")
    assert ok


def test_criterion_09c_counts_within_bounds(H, I, ball_H, ball_I):
    census = bad_strings_census(24)
    ok = True
    tested = []
    for radius, eps in ((18, Fraction(1, 10)), (24, Fraction(1, 2)),
                        (30, Fraction(1, 10)), (30, Fraction(1, 4))):
        report = count_bad_elements(H, radius, eps, ball=ball_H)
        ok &= report["passed"]
        tested.append(("H", radius, str(eps),
                       report["count"], report["bound"]))
    for radius, eps in ((20, Fraction(1, 10)), (30, Fraction(1, 10)),
                        (30, Fraction(1, 5))):
        report = count_bad_elements(I, radius, eps, ball=ball_I,
                                    census=census)
        ok &= report["passed"]
        tested.append(("I", radius, str(eps),
                       report["count"], report["bound"]))
    _verdict("9c bad-element counts", ok,
             "; ".join(f"{g} r={r} eps={e}: {c} <= {b}"
                       for g, r, e, c, b in tested))
    assert ok

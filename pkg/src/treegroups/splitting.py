"""Splitting elements into level sections and the contraction bookkeeping.

An element that fixes the tree down to depth d splits into its 2^d sections
at that depth.  The injection g -> (sections) never loses much length: for
the built-in weighted sets the two first-level sections of an inactive g
satisfy  L(g_L) + L(g_R) <= L(g) + L(σ),  and for G the bound sharpens to
L(g_L) + L(g_R) <= (7/8) L(g) + 3, which is what verify_reduction_G checks
element by element.  For I the per-letter version of the same bookkeeping is
verify_good_letter_bound: a letter of the extended alphabet is good when its
sections lose length strictly, and the worst good letter only reaches 29/31
of its ceiling.

check_contraction_criterion packages the hypothesis that makes these bounds
yield subexponential growth: at radius r, at least a proportion p of the
depth-d stabilizer members of the ball must split with total section length
at most eta * r + shift for some eta < 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .group_defs import builtin
from .metric import Ball, level_stabilizer_member
from .tree_automorphism import Element, activity

GOOD_LETTER_SLACK = 3  # L(σ): the per-letter ceiling is L(σ) + L(letter)


@dataclass
class SplitResult:
    parts: tuple            # sections at the split depth, left to right
    input_length: int
    parts_length_sum: int


def _section_words(table, word, depth):
    level = [table.reduce(word)]
    for _ in range(depth):
        nxt = []
        for w in level:
            left, right, _ = table.pair(w)
            nxt.append(left)
            nxt.append(right)
        level = nxt
    return level


def split(elem, depth, ball):
    """Sections of a depth-d stabilizer member, with true lengths.

    The ball supplies lengths and is grown as needed; section lengths are
    bounded by pricing their letters, so growth stays modest.
    """
    if depth < 1:
        raise ValueError("split depth must be at least 1")
    if not level_stabilizer_member(elem, depth):
        raise ValueError("element does not stabilize the tree to that depth")
    table = elem.table
    words = _section_words(table, elem.letters, depth)
    parts = tuple(Element(table, w) for w in words)
    total = 0
    for part in parts:
        total += ball.length_of(part)
    return SplitResult(parts, ball.length_of(elem), total)


def verify_reduction_G(radius=40, *, ball=None):
    """Check 8 (L(g_L) + L(g_R)) <= 7 L(g) + 24 for every even g with
    L(g) <= radius, and record the named extreme splits."""
    if ball is None:
        G = builtin("G")
        ball = Ball(G, G.standard_generators)
    elif ball.group.name != "G":
        raise ValueError("the 7/8 reduction is a statement about G")
    ball.extend(radius)
    checked = 0
    violations = []
    max_sum_by_length = {}
    for elem, length in list(ball.items(radius)):
        if activity(elem):
            continue
        res = split(elem, 1, ball)
        checked += 1
        s = res.parts_length_sum
        if 8 * s > 7 * length + 24:
            violations.append({"element": elem.word, "length": length,
                               "parts_length_sum": s})
        if s > max_sum_by_length.get(length, -1):
            max_sum_by_length[length] = s
    witnesses = []
    for word in ("σaσb", "σaσa"):
        elem = ball.group.element(word)
        res = split(elem, 1, ball)
        witnesses.append({
            "word": word,
            "length": res.input_length,
            "parts_length_sum": res.parts_length_sum,
        })
    return {
        "passed": not violations and checked > 0,
        "radius": radius,
        "checked": checked,
        "violations": violations,
        "max_sum_by_length": dict(sorted(max_sum_by_length.items())),
        "witnesses": witnesses,
    }


def good_by_nature(group, name, ball=None):
    """Is the named letter of I's alphabet strictly shrunk by sectioning?

    Strictly shrunk means L(g_L) + L(g_R) < L(σ) + L(g) with all lengths
    taken in the group, not read off the spellings.
    """
    report = verify_good_letter_bound(group, ball=ball, _only=name)
    return report["letters"][name]["good"]


def verify_good_letter_bound(group, *, ball=None, _only=None):
    """Classify I's extended alphabet by the section-length test.

    Checks that every letter satisfies the ceiling
    L(g_L) + L(g_R) <= L(σ) + L(g), identifies the letters that fail to be
    strict (the bad letters), and computes the worst ratio among the good
    ones, which the splitting argument needs to be 29/31, at the letter b7.
    """
    if group.name != "I":
        raise ValueError("the good-letter bound is a statement about I")
    if ball is None:
        ball = Ball(group)
    letters = {}
    bad = []
    worst = Fraction(0)
    worst_name = None
    for gen in group.extended_generators:
        if gen.name == "σ":
            continue
        if _only is not None and gen.name != _only:
            continue
        elem = group.element(gen.word)
        length = ball.length_of(elem, bound=gen.weight)
        left, right = _section_words(group.table, elem.letters, 1)
        parts_sum = (ball.length_of(Element(group.table, left))
                     + ball.length_of(Element(group.table, right)))
        ceiling = GOOD_LETTER_SLACK + length
        good = parts_sum < ceiling
        letters[gen.name] = {
            "length": length,
            "parts_sum": parts_sum,
            "ceiling": ceiling,
            "good": good,
        }
        if not good:
            bad.append(gen.name)
        else:
            ratio = Fraction(parts_sum, ceiling)
            if ratio > worst:
                worst = ratio
                worst_name = gen.name
    persistence = all(v["parts_sum"] <= v["ceiling"] for v in letters.values())
    report = {
        "letters": letters,
        "bad_letters": sorted(bad),
        "worst_good_ratio": worst,
        "worst_good_letter": worst_name,
        "persistence": persistence,
    }
    if _only is None:
        report["passed"] = (
            persistence
            and sorted(bad) == ["a", "a2", "b2", "b3"]
            and worst == Fraction(29, 31)
            and worst_name == "b7"
        )
    return report


@dataclass
class ContractionCertificate:
    """Observed outcome of the splitting hypothesis at one radius.

    The hypothesis: among elements of length <= radius that stabilize the
    tree to the given depth, the proportion whose sections have total length
    at most eta * radius + shift is at least p.  When that holds at every
    radius with eta < 1, the growth of the group is subexponential.
    """

    group: str
    depth: int
    eta: Fraction
    p: Fraction
    shift: Fraction
    radius: int
    checked: int
    satisfying: int
    proportion_observed: Fraction
    passed: bool


def check_contraction_criterion(group, *, depth, eta, p, shift, radius,
                                ball=None, generators=None):
    """Measure the splitting hypothesis on an actual ball."""
    eta = Fraction(eta)
    p = Fraction(p)
    shift = Fraction(shift)
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if shift < 0:
        raise ValueError("shift must be nonnegative")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if ball is None:
        ball = Ball(group, generators)
    ball.extend(radius)
    checked = 0
    satisfying = 0
    threshold = eta * radius + shift
    for elem, _length in list(ball.items(radius)):
        if not level_stabilizer_member(elem, depth):
            continue
        checked += 1
        res = split(elem, depth, ball)
        if res.parts_length_sum <= threshold:
            satisfying += 1
    if checked == 0:
        raise ValueError("no stabilizer members inside the probed radius")
    proportion = Fraction(satisfying, checked)
    return ContractionCertificate(
        group=group.name, depth=depth, eta=eta, p=p, shift=shift,
        radius=radius, checked=checked, satisfying=satisfying,
        proportion_observed=proportion, passed=proportion >= p,
    )

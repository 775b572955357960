"""Alternating words, good blocks, and the counting of bad elements.

Minimum-length words over the weighted generating sets alternate between σ
and the other letters, so a word is described by its letter sequence plus
two flags saying whether it starts and ends with σ.  A letter is good by
nature when sectioning shrinks it strictly (see splitting); for I exactly
a, a2, b2, b3 fail this.  A bad letter can still be good by position: the
good-block templates below describe neighbourhoods that are guaranteed to
produce a good letter within two further splits, and every letter lying in
a matched block counts as good.

The template list has fourteen entries.  Templates are closed under
inversion so that censusing words free of good blocks cannot cheat by
reading a blocked word backwards: the two anchored length-4 C templates
come with their inverses (same family, C).  bad_strings_census enumerates,
for each k, all alternating words in the bad letters with k letters and no
good block; their number stays bounded, the possible adjacent pairs away
from the ends collapse to four, and letters repeat with period eight.  This
bound is the constant that turns the bad-word count into a bad-element
count in count_bad_elements.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .metric import (
    Ball,
    DEFAULT_WORD_CAP,
    level_stabilizer_member,
    swap_generator_names,
    word_alternates,
)
from .tree_automorphism import Element, activity, equal, sections

# letters of I's extended alphabet that sectioning does not shrink strictly;
# derived, and rechecked against splitting.verify_good_letter_bound in tests
BAD_LETTERS = ("a", "a2", "b2", "b3")
_BAD = frozenset(BAD_LETTERS)

# letters of H's alphabet that sectioning shrinks strictly (c only breaks even)
GOOD_LETTERS_H = frozenset({"a", "b"})

# (family, slots, needs leading σ, needs trailing σ); a slot is the set of
# letters allowed at that position.  Two boxes of the same template vary
# independently.
_TEMPLATES = (
    ("A", (frozenset({"a", "b2"}), _BAD, frozenset({"a", "a2"})), False, False),
    ("B", (frozenset({"a2", "b3"}), _BAD, frozenset({"b2", "b3"})), False, False),
    ("C", (_BAD, frozenset({"b2"}), _BAD, frozenset({"b3"})), True, False),
    ("C", (frozenset({"b2"}), _BAD, frozenset({"b3"}), _BAD), False, True),
    ("C", (frozenset({"b3"}), _BAD, frozenset({"a2"}), _BAD), False, True),
    ("C", (_BAD, frozenset({"b3"}), _BAD, frozenset({"a2"})), True, False),
    ("D", (_BAD, frozenset({"a2"}), _BAD, frozenset({"a"}), _BAD), False, False),
    ("D", (_BAD, frozenset({"a"}), _BAD, frozenset({"b2"}), _BAD), False, False),
)


@dataclass(frozen=True)
class AlternatingWord:
    """A word alternating between σ and other letters.

    letters holds the non-σ letters as metric generator names; the flags
    say whether a σ precedes the first and follows the last of them.
    """

    starts_with_swap: bool
    ends_with_swap: bool
    letters: tuple

    def swap_count(self):
        m = len(self.letters)
        if m == 0:
            return 1 if (self.starts_with_swap or self.ends_with_swap) else 0
        return m - 1 + int(self.starts_with_swap) + int(self.ends_with_swap)

    def is_even(self):
        return self.swap_count() % 2 == 0

    def expand(self, group):
        """The word over the table letters, as an Element."""
        pieces = []
        if self.starts_with_swap:
            pieces.append("σ")
        for i, name in enumerate(self.letters):
            if i:
                pieces.append("σ")
            pieces.append(group.by_name[name].word)
        if self.letters and self.ends_with_swap:
            pieces.append("σ")
        return group.element("".join(pieces))

    def display(self):
        body = "σ".join(self.letters)
        if self.starts_with_swap:
            body = "σ" + body
        if self.letters and self.ends_with_swap:
            body = body + "σ"
        return body or ("σ" if self.swap_count() else "1")


@dataclass(frozen=True)
class PatternMatch:
    pattern_id: str
    position: int      # index of the first matched letter
    witness: tuple


def _non_swap_generators(group):
    table = group.table
    return [g for g in group.extended_generators
            if table.activity_of(table.encode(g.word)) == 0]


def alternating_form(group, elem):
    """Parse a table word into an alternating word over the metric names.

    Maximal σ-free runs must equal single metric generators; a run that is
    none of them raises ValueError.
    """
    table = group.table
    word = table.reduce(elem.letters if isinstance(elem, Element)
                        else table.encode(elem))
    swap = table.index["σ"]
    runs = []
    cur = []
    starts = bool(word) and word[0] == swap
    ends = bool(word) and word[-1] == swap
    for x in word:
        if x == swap:
            if cur:
                runs.append(tuple(cur))
                cur = []
        else:
            cur.append(x)
    if cur:
        runs.append(tuple(cur))
    candidates = _non_swap_generators(group)
    names = []
    for run in runs:
        run_el = Element(table, run)
        for gen in candidates:
            if equal(run_el, group.element(gen.word)):
                names.append(gen.name)
                break
        else:
            raise ValueError(
                f"run {table.decode(run)!r} is not a single metric letter")
    return AlternatingWord(starts, ends, tuple(names))


def alternating_from_names(names, swap_names=frozenset({"σ"})):
    """Alternating word from a spelling that alternates; None otherwise."""
    if not word_alternates(names, swap_names):
        return None
    letters = tuple(n for n in names if n not in swap_names)
    if not letters:
        return AlternatingWord(bool(names), bool(names), ())
    starts = bool(names) and names[0] in swap_names
    ends = bool(names) and names[-1] in swap_names
    return AlternatingWord(starts, ends, letters)


def find_good_blocks(word):
    """All template matches in an alternating word, overlaps included."""
    letters = word.letters
    m = len(letters)
    out = []
    for family, slots, lead, trail in _TEMPLATES:
        span = len(slots)
        for i in range(m - span + 1):
            if not all(letters[i + t] in slots[t] for t in range(span)):
                continue
            if lead and not (i > 0 or word.starts_with_swap):
                continue
            last = i + span - 1
            if trail and not (last < m - 1 or word.ends_with_swap):
                continue
            out.append(PatternMatch(family, i, tuple(letters[i:i + span])))
    out.sort(key=lambda mt: (mt.position, mt.pattern_id, len(mt.witness)))
    return out


def good_letter_indices(group, word):
    """Indices of letters that are good by nature or by position."""
    if group.name == "H":
        return frozenset(
            i for i, n in enumerate(word.letters) if n in GOOD_LETTERS_H)
    if group.name != "I":
        raise ValueError(f"no goodness notion recorded for {group.name!r}")
    good = set(i for i, n in enumerate(word.letters) if n not in _BAD)
    for match in find_good_blocks(word):
        good.update(range(match.position, match.position + len(match.witness)))
    return frozenset(good)


def classify_word(group, word, epsilon):
    """Label an alternating word "good" or "bad" for the given epsilon.

    Bad means at most epsilon * m of the m letters are good; the empty
    letter sequence counts as good.
    """
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 1:
        raise ValueError("epsilon must lie in [0, 1]")
    m = len(word.letters)
    if m == 0:
        return "good"
    good = len(good_letter_indices(group, word))
    return "bad" if good <= epsilon * m else "good"


def reduction_factor_H(epsilon):
    """Contraction factor for one split of an even alternating H word whose
    share of {a, b} letters is at least epsilon.

    The worst mix is a-letters at the guaranteed share and c-letters
    elsewhere: (4 eps + (2 - eps) 3) / (5 eps + (2 - eps) 3), which
    simplifies to (6 + eps) / (6 + 2 eps).
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    return (6 + epsilon) / (6 + 2 * epsilon)


# ---------------------------------------------------------------------------
# template verification


def _flanked_letter_shape(group, elem, middle):
    """Does elem read  X σ middle σ Y  with X, Y single dihedral letters or
    empty?  This is the shape the A and B templates promise after one split."""
    try:
        alt = alternating_form(group, elem)
    except ValueError:
        return False
    letters = alt.letters
    for i, name in enumerate(letters):
        if name != middle:
            continue
        if (i > 0 or alt.starts_with_swap) and \
           (i < len(letters) - 1 or alt.ends_with_swap):
            before = letters[:i]
            after = letters[i + 1:]
            if len(before) <= 1 and len(after) <= 1:
                return True
    return False


def _full_span_match(word, family):
    return any(m.pattern_id == family and m.position == 0
               and len(m.witness) == len(word.letters)
               for m in find_good_blocks(word))


def verify_patterns(group):
    """Recheck, by the word problem alone, what each template guarantees.

    P1/P2: the elementary substitutions behind the templates.
    A/B:   one split yields a σ-flanked good letter (b, resp. a3).
    C:     one split yields a word that is itself an A instance; the two
           unanchored C templates land in a pinned two-element set.
    D:     one split yields b σ x σ b with x in {a2, b2}, whose own left
           section is the good letter a3.
    """
    if group.name != "I":
        raise ValueError("the good-block templates belong to group I")
    el = group.element
    families = {}
    ok = True

    def record(fam, entry):
        families.setdefault(fam, []).append(entry)

    sigma_b_sigma = el("σbσ")
    a3 = el("aba")
    for box in BAD_LETTERS:
        w = AlternatingWord(False, False, ("a", box, "a")).expand(group)
        left, right = sections(w)
        holds = activity(w) == 0 and equal(left, sigma_b_sigma)
        ok &= holds
        record("P1", {"box": box, "left": left.word, "holds": holds})

        w = AlternatingWord(False, False, ("b", box, "b")).expand(group)
        left, right = sections(w)
        holds = activity(w) == 0 and equal(left, a3)
        ok &= holds
        record("P2", {"box": box, "left": left.word, "holds": holds})

    for x, box, y in product(("a", "b2"), BAD_LETTERS, ("a", "a2")):
        w = AlternatingWord(False, False, (x, box, y)).expand(group)
        left, _ = sections(w)
        holds = activity(w) == 0 and _flanked_letter_shape(group, left, "b")
        ok &= holds
        record("A", {"instance": (x, box, y), "left": left.word, "holds": holds})

    for x, box, y in product(("a2", "b3"), BAD_LETTERS, ("b2", "b3")):
        w = AlternatingWord(False, False, (x, box, y)).expand(group)
        left, _ = sections(w)
        holds = activity(w) == 0 and _flanked_letter_shape(group, left, "a3")
        ok &= holds
        record("B", {"instance": (x, box, y), "left": left.word, "holds": holds})

    c_targets = (el("baσbaσa"), el("aσbaσab"))  # b2 σ b2 σ a and a σ b2 σ a2
    c_templates = (
        (True, False, lambda b1, b2: (b1, "b2", b2, "b3"), False),
        (False, True, lambda b1, b2: ("b2", b1, "b3", b2), False),
        (False, True, lambda b1, b2: ("b3", b1, "a2", b2), True),
        (True, False, lambda b1, b2: (b1, "b3", b2, "a2"), True),
    )
    for ti, (starts, ends, make, mirror) in enumerate(c_templates):
        for b1, b2 in product(BAD_LETTERS, repeat=2):
            word = AlternatingWord(starts, ends, make(b1, b2))
            w = word.expand(group)
            left, _ = sections(w)
            lands = False
            try:
                lands = _full_span_match(alternating_form(group, left), "A")
            except ValueError:
                lands = False
            holds = activity(w) == 0 and lands
            if not mirror:
                holds = holds and any(equal(left, t) for t in c_targets)
            ok &= holds
            record("C", {
                "template": ti, "mirror": mirror, "boxes": (b1, b2),
                "word": word.display(), "left": left.word, "holds": holds,
            })

    d_targets = (el("bσabσb"), el("bσbaσb"))  # b σ a2 σ b and b σ b2 σ b
    d_templates = (
        lambda b1, b2, b3: (b1, "a2", b2, "a", b3),
        lambda b1, b2, b3: (b1, "a", b2, "b2", b3),
    )
    for ti, make in enumerate(d_templates):
        for b1, b2, b3 in product(BAD_LETTERS, repeat=3):
            word = AlternatingWord(False, False, make(b1, b2, b3))
            w = word.expand(group)
            _, right = sections(w)
            hit = next((t for t in d_targets if equal(right, t)), None)
            second_good = False
            if hit is not None:
                deeper_left, _ = sections(hit)
                second_good = equal(deeper_left, a3)
            holds = activity(w) == 0 and hit is not None and second_good
            ok &= holds
            record("D", {
                "template": ti, "boxes": (b1, b2, b3),
                "word": word.display(), "right": right.word, "holds": holds,
            })

    return {"passed": bool(ok), "families": families,
            "checks": sum(len(v) for v in families.values())}


# ---------------------------------------------------------------------------
# censusing words without good blocks


def _prefix_blocked(letters, start_flag, j):
    """Did appending letters[j] complete a match?  Trailing-σ templates are
    judged one letter late, when the σ between j-1 and j is real."""
    for _family, slots, lead, trail in _TEMPLATES:
        span = len(slots)
        i = j - span + (0 if trail else 1)
        if i < 0:
            continue
        if lead and not (i > 0 or start_flag):
            continue
        if all(letters[i + t] in slots[t] for t in range(span)):
            return True
    return False


def _end_blocked(letters, start_flag):
    """Matches that exist only because the word ends with σ."""
    k = len(letters)
    for _family, slots, lead, trail in _TEMPLATES:
        if not trail:
            continue
        span = len(slots)
        i = k - span
        if i < 0:
            continue
        if lead and not (i > 0 or start_flag):
            continue
        if all(letters[i + t] in slots[t] for t in range(span)):
            return True
    return False


def _census_shard(max_k, start_flag, first_letter):
    """Survivor letter sequences by length, prefix-pruned."""
    survivors = {k: [] for k in range(1, max_k + 1)}
    letters = [first_letter]

    def rec(j):
        survivors[j + 1].append(tuple(letters))
        if j + 1 == max_k:
            return
        for x in BAD_LETTERS:
            letters.append(x)
            if not _prefix_blocked(letters, start_flag, j + 1):
                rec(j + 1)
            letters.pop()

    if not _prefix_blocked(letters, start_flag, 0):
        rec(0)
    return start_flag, survivors


@dataclass
class BadStringCensus:
    counts: tuple            # (k, number of surviving alternating words)
    bound_observed: int
    period_structure: dict
    survivors_at_max: tuple  # (starts, letters, ends) triples at k = max


def bad_strings_census(max_k, *, threads=1):
    """Enumerate alternating all-bad words with no good block, for k letters
    up to max_k, counting the four σ-boundary variants separately."""
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    shards = [(max_k, s, x) for s in (False, True) for x in BAD_LETTERS]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda args: _census_shard(*args), shards))
    else:
        results = [_census_shard(*args) for args in shards]

    counts = {k: 0 for k in range(1, max_k + 1)}
    survivors_at_max = []
    for start_flag, survivors in results:
        for k, seqs in survivors.items():
            for seq in seqs:
                blocked_end = _end_blocked(list(seq), start_flag)
                counts[k] += 1 + (0 if blocked_end else 1)
                if k == max_k:
                    survivors_at_max.append((start_flag, seq, False))
                    if not blocked_end:
                        survivors_at_max.append((start_flag, seq, True))
    survivors_at_max.sort()
    period = _period_structure([seq for _s, seq, _e in survivors_at_max], max_k)
    count_list = tuple(sorted(counts.items()))
    return BadStringCensus(
        counts=count_list,
        bound_observed=max(counts.values()),
        period_structure=period,
        survivors_at_max=tuple(survivors_at_max),
    )


def _period_structure(seqs, k):
    """Mod-8 letter repetition and the surviving separated pairs.

    The templates constrain letters two apart (x σ box σ y), so the pair
    census looks at positions (i, i + 2).  Both analyses allow bounded
    disturbances near the ends and report the offsets they needed.
    """
    seqs = sorted(set(seqs))
    best = None
    for total in range(0, 19):
        for head in range(0, min(total, 9) + 1):
            tail = total - head
            if tail > 9 or head + tail + 8 > k:
                continue
            if all(seq[i] == seq[i + 8]
                   for seq in seqs for i in range(head, k - tail - 8)):
                best = (head, tail)
                break
        if best:
            break

    def separated_pairs(offset):
        pairs = set()
        for seq in seqs:
            for i in range(offset, k - offset - 2):
                pairs.add((seq[i], seq[i + 2]))
        return frozenset(pairs)

    stable_offset = None
    stable_pairs = frozenset()
    for off in range(0, min(9, k // 2)):
        cur = separated_pairs(off)
        if cur == separated_pairs(off + 1):
            stable_offset = off
            stable_pairs = cur
            break
    return {
        "period": 8,
        "holds": best is not None,
        "head_offset": best[0] if best else None,
        "tail_offset": best[1] if best else None,
        "interior_pair_offset": stable_offset,
        "interior_pairs": stable_pairs,
    }


# ---------------------------------------------------------------------------
# counting bad elements against the closed-form bound


_COUNT_LEVEL = {"H": 1, "I": 3}


def max_letter_count(group, radius):
    """Largest number of non-σ letters an alternating word of length
    <= radius can have: the cheapest letter plus its σ dominate the rest."""
    table = group.table
    sigma_w = min(g.weight for g in group.extended_generators
                  if table.activity_of(table.encode(g.word)))
    cheapest = min(g.weight for g in _non_swap_generators(group))
    return max(0, (radius + sigma_w) // (cheapest + sigma_w))


def bad_word_bound(group, n, epsilon, *, census_bound=None):
    """Closed-form bound on the number of bad alternating words with n
    letters; for I the census bound on block-free stretches is required."""
    epsilon = Fraction(epsilon)
    k = math.floor(epsilon * n)
    if group.name == "H":
        return 2 * math.comb(n, k) * 3 ** k
    if group.name == "I":
        if census_bound is None:
            raise ValueError("the bound for I needs a census bound")
        count_gens = len(_non_swap_generators(group))  # 15
        return 2 * math.comb(n, k) * count_gens ** k * census_bound ** (1 + k)
    raise ValueError(f"no bad-word bound recorded for {group.name!r}")


def count_bad_elements(group, radius, epsilon, *, ball=None,
                       census=None, census_max_k=24,
                       word_cap=DEFAULT_WORD_CAP, threads=1):
    """Count epsilon-bad elements in the ball and compare with the bound.

    An element of the relevant stabilizer is epsilon-bad when every one of
    its alternating geodesic spellings is epsilon-bad.  For I the bound
    needs the census constant, computed on demand.
    """
    epsilon = Fraction(epsilon)
    level = _COUNT_LEVEL.get(group.name)
    if level is None:
        raise ValueError(f"no bad-element count recorded for {group.name!r}")
    if ball is None:
        gens = (group.standard_generators if group.name == "H"
                else group.extended_generators)
        ball = Ball(group, gens)
    ball.extend(radius)
    swaps = swap_generator_names(ball)
    count = 0
    bad = []
    anomalies = []
    for elem, length in ball.items(radius):
        if not level_stabilizer_member(elem, level):
            continue
        words = ball.geodesic_words(elem, cap=word_cap)
        alts = [alternating_from_names(w, swaps) for w in words]
        alts = [w for w in alts if w is not None]
        if not alts:
            anomalies.append({"element": elem.word, "length": length})
            continue
        if all(classify_word(group, w, epsilon) == "bad" for w in alts):
            count += 1
            bad.append({"element": elem.word, "length": length})
    census_bound = None
    if group.name == "I":
        if census is None:
            census = bad_strings_census(census_max_k, threads=threads)
        census_bound = census.bound_observed
    m_max = max_letter_count(group, radius)
    bound = sum(
        bad_word_bound(group, n, epsilon, census_bound=census_bound)
        for n in range(0, m_max + 1))
    return {
        "group": group.name,
        "level": level,
        "radius": radius,
        "epsilon": epsilon,
        "count": count,
        "bound": bound,
        "max_letters": m_max,
        "census_bound": census_bound,
        "bad_elements": bad,
        "anomalies": anomalies,
        "passed": count <= bound and not anomalies,
    }

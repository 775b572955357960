"""The built-in groups G, H, I with their weighted generating sets.

All three act on the rooted binary tree through the recursions

    G:  a = (σ, b)   b = (σ, c)   c = (1, a)        σ = swap
    H:  a = (σ, b)   b = (1, a)
    I:  a = (σ, b)   b = (a, 1)

with every letter an involution.  Word length is measured against a weighted
generating set chosen per group; for I a second, extended set consisting of σ
and the fifteen nontrivial elements of the dihedral subgroup generated by a
and b is the set the length arguments actually run over.

verify_structure_lemmas and verify_extended_table recheck, by the word
problem alone, the finite facts those length arguments rest on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .tree_automorphism import (
    Element,
    RecursionTable,
    activity,
    compose,
    equal,
    load_recursion_spec,
    sections,
    trivial,
)

ORDER_CUTOFF = 256

# name -> positive integer length of that generator
WeightAssignment = dict


@dataclass(frozen=True)
class MetricGenerator:
    """A metric generator: a name, its spelling over table letters, a weight."""

    name: str
    word: str
    weight: int


class NamedGroup:
    """A recursion table together with its weighted generating sets.

    standard_generators: the defining letters with their weights
    extended_generators: the set used for length arguments; equals the
        standard set except for I, where it adjoins the dihedral alphabet
    section_claims: name -> (left, right) spellings of the expected
        first-level sections, the data verify_extended_table checks
    """

    def __init__(self, name, table, standard_generators,
                 extended_generators=None, section_claims=None):
        self.name = name
        self.table = table
        self.standard_generators = tuple(standard_generators)
        self.extended_generators = (
            tuple(extended_generators) if extended_generators is not None
            else self.standard_generators)
        self.section_claims = dict(section_claims or {})
        self.by_name = {g.name: g for g in self.extended_generators}
        for g in self.standard_generators:
            self.by_name.setdefault(g.name, g)

    def weights(self, generators=None) -> WeightAssignment:
        gens = self.extended_generators if generators is None else generators
        return {g.name: g.weight for g in gens}

    def element(self, word=()):
        """Element from a word over the table letters."""
        return Element(self.table, word)

    def metric_element(self, names):
        """Element from a sequence of metric generator names."""
        word = []
        for n in names:
            word.append(self.by_name[n].word)
        return Element(self.table, "".join(word))

    def __repr__(self):
        return f"NamedGroup({self.name})"


def _dihedral_spelling(first, length):
    return "".join(("ab" if first == "a" else "ba")[i % 2] for i in range(length))


def _group_G():
    table = RecursionTable(
        ("σ", "a", "b", "c"),
        {"σ": 1, "a": 0, "b": 0, "c": 0},
        {"σ": ("1", "1"), "a": ("σ", "b"), "b": ("σ", "c"), "c": ("1", "a")},
    ).validate()
    gens = (
        MetricGenerator("σ", "σ", 3),
        MetricGenerator("a", "a", 5),
        MetricGenerator("b", "b", 4),
        MetricGenerator("c", "c", 3),
    )
    return NamedGroup("G", table, gens)


def _group_H():
    table = RecursionTable(
        ("σ", "a", "b"),
        {"σ": 1, "a": 0, "b": 0},
        {"σ": ("1", "1"), "a": ("σ", "b"), "b": ("1", "a")},
    ).validate()
    # c = ab is its own generator of the metric, cheaper than its spelling
    gens = (
        MetricGenerator("σ", "σ", 3),
        MetricGenerator("a", "a", 5),
        MetricGenerator("b", "b", 4),
        MetricGenerator("c", "ab", 3),
    )
    return NamedGroup("H", table, gens)


def _group_I():
    table = RecursionTable(
        ("σ", "a", "b"),
        {"σ": 1, "a": 0, "b": 0},
        {"σ": ("1", "1"), "a": ("σ", "b"), "b": ("a", "1")},
    ).validate()
    standard = (
        MetricGenerator("σ", "σ", 3),
        MetricGenerator("a", "a", 4),
        MetricGenerator("b", "b", 4),
    )
    extended = [MetricGenerator("σ", "σ", 3)]
    claims = {}
    # the dihedral alphabet: alternating words in a, b of length i, weight 4i
    for i in range(1, 9):
        name = "a" if i == 1 else f"a{i}"
        extended.append(MetricGenerator(name, _dihedral_spelling("a", i), 4 * i))
    for i in range(1, 8):
        name = "b" if i == 1 else f"b{i}"
        extended.append(MetricGenerator(name, _dihedral_spelling("b", i), 4 * i))
    claims["a"] = ("σ", "b")
    claims["a2"] = ("σa", "b")
    claims["a3"] = ("σaσ", "1")
    claims["a4"] = ("σaσa", "1")
    claims["a5"] = ("σaσaσ", "b")
    claims["a6"] = ("σaσaσa", "b")
    claims["a7"] = ("σaσaσaσ", "1")
    claims["a8"] = ("σaσaσa" + "σa", "1")
    claims["b"] = ("a", "1")
    claims["b2"] = ("aσ", "b")
    claims["b3"] = ("aσa", "b")
    claims["b4"] = ("aσaσ", "1")
    claims["b5"] = ("aσaσa", "1")
    claims["b6"] = ("aσaσaσ", "b")
    claims["b7"] = ("aσaσaσa", "b")
    claims["b8"] = ("aσaσaσaσ", "1")
    return NamedGroup("I", table, standard, tuple(extended), claims)


_BUILTIN = {"G": _group_G, "H": _group_H, "I": _group_I}


@lru_cache(maxsize=None)
def builtin(name):
    """Built-in group by name; instances are shared so caches accumulate."""
    try:
        make = _BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown builtin group {name!r}") from None
    return make()


def load_group(path, *, weights=None):
    """Group from a recursion file; every letter gets weight 1 by default."""
    table = load_recursion_spec(path)
    weights = weights or {}
    gens = tuple(
        MetricGenerator(g, g, int(weights.get(g, 1))) for g in table.generators
    )
    return NamedGroup(str(path), table, gens)


def element_order(el, cutoff=ORDER_CUTOFF):
    """Smallest k <= cutoff with el^k trivial, or None when the cutoff hits."""
    acc = el
    for k in range(1, cutoff + 1):
        if trivial(acc):
            return k
        acc = compose(acc, el)
    return None


def _dihedral_word_of(group, name):
    return group.element(group.by_name[name].word)


def verify_extended_table(group):
    """Recheck the claimed sections of the dihedral alphabet of I.

    Every row must be inactive with exactly the listed sections, the
    length-8 words from both ends must agree, and the sixteen rows must
    yield fifteen distinct nontrivial elements.
    """
    if group.name != "I":
        raise ValueError("the extended table belongs to group I")
    rows = []
    ok = True
    elements = {}
    for name, (left_claim, right_claim) in group.section_claims.items():
        if name == "b8":
            word = _dihedral_spelling("b", 8)
        else:
            word = group.by_name[name].word
        el = group.element(word)
        left, right = sections(el)
        good = (
            activity(el) == 0
            and equal(left, group.element(left_claim))
            and equal(right, group.element(right_claim))
        )
        rows.append({"name": name, "word": word, "passed": good})
        elements[name] = el
        ok = ok and good
    same_tail = equal(elements["a8"], elements["b8"])
    distinct = len(set(elements.values())) == 15
    nontrivial = all(not trivial(el) for el in elements.values())
    return {
        "passed": ok and same_tail and distinct and nontrivial,
        "rows": rows,
        "a8_equals_b8": same_tail,
        "fifteen_distinct_nontrivial": distinct and nontrivial,
    }


def _check(name, passed, **detail):
    entry = {"name": name, "passed": bool(passed)}
    entry.update(detail)
    return entry


def verify_structure_lemmas(group):
    """Recheck the finite group facts each length argument leans on."""
    checks = []
    el = group.element
    if group.name == "G":
        a, b, c = el("a"), el("b"), el("c")
        checks.append(_check(
            "letters_involutive",
            all(trivial(el(x + x)) for x in "σabc")))
        checks.append(_check(
            "klein_four",
            equal(a * b, c) and equal(b * c, a) and equal(c * a, b)
            and equal(a * b, b * a)
            and not trivial(a) and not equal(a, b) and not equal(b, c)
            and not equal(a, c)))
    elif group.name == "H":
        a, b = el("a"), el("b")
        c = el("ab")
        checks.append(_check(
            "letters_involutive",
            all(trivial(el(x + x)) for x in "σab")))
        checks.append(_check(
            "klein_four",
            equal(a * b, b * a) and trivial(c * c)
            and not trivial(c) and not equal(c, a) and not equal(c, b)
            and not equal(a, b)))
        checks.append(_check(
            "c_self_similar",
            activity(c) == 0
            and equal(sections(c)[0], el("σ")) and equal(sections(c)[1], c)))
        checks.append(_check("order_sigma_b", element_order(el("σb")) == 4,
                             order=element_order(el("σb"))))
        checks.append(_check("order_sigma_a", element_order(el("σa")) == 8,
                             order=element_order(el("σa"))))
        sc = el("σab")
        sq = compose(sc, sc)
        checks.append(_check(
            "sigma_c_squares_to_swapped_pair",
            activity(sq) == 0
            and equal(sections(sq)[0], el("abσ"))
            and equal(sections(sq)[1], sc)))
        checks.append(_check(
            "sigma_c_order_exceeds_cutoff",
            element_order(sc) is None, cutoff=ORDER_CUTOFF))
    elif group.name == "I":
        checks.append(_check(
            "letters_involutive",
            all(trivial(el(x + x)) for x in "σab")))
        checks.append(_check("order_sigma_b", element_order(el("σb")) == 4,
                             order=element_order(el("σb"))))
        checks.append(_check("order_sigma_a", element_order(el("σa")) == 8,
                             order=element_order(el("σa"))))
        checks.append(_check("order_a_b", element_order(el("ab")) == 8,
                             order=element_order(el("ab"))))
    else:
        raise ValueError(f"no structure lemmas recorded for {group.name!r}")
    return {"passed": all(c["passed"] for c in checks), "checks": checks}

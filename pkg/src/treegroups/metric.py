"""Weighted word metrics: balls, growth counts, geodesic spellings.

A Ball runs Dijkstra over the right Cayley graph of a group with respect to
a weighted generating set.  Weights are positive integers, so a bucket queue
settles elements in order of length and every tight geodesic predecessor of
an element is known by the time the element itself settles.  Balls grow on
demand and keep everything they have settled, so one ball per group and
generating set is enough for a whole session.

Iteration over a ball follows discovery order, which is determined by the
generator order alone; nothing here depends on hash ordering, so runs are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree_automorphism import BudgetExceeded, Element

DEFAULT_ENTRY_BUDGET = 4_000_000
DEFAULT_WORD_CAP = 1_000_000


class EntryBudgetExceeded(BudgetExceeded):
    pass


class WordCapExceeded(BudgetExceeded):
    pass


class _Node:
    __slots__ = ("dist", "preds", "settled")

    def __init__(self, dist, preds):
        self.dist = dist
        self.preds = preds
        self.settled = False


class Ball:
    """Closed ball of a weighted word metric, grown on demand.

    entries map group elements to their length and to the list of
    (predecessor, generator index) pairs realising it; the list is complete
    once the element is settled.
    """

    def __init__(self, group, generators=None, *,
                 entry_budget=DEFAULT_ENTRY_BUDGET):
        self.group = group
        self.generators = (tuple(generators) if generators is not None
                           else group.extended_generators)
        self.table = group.table
        self.entry_budget = entry_budget
        self._steps = []
        for i, g in enumerate(self.generators):
            if g.weight <= 0 or g.weight != int(g.weight):
                raise ValueError("generator weights must be positive integers")
            self._steps.append((i, self.table.encode(g.word), g.weight))
        # weight of a table letter, for crude upper bounds on lengths
        self.letter_weight = {}
        for i, w, wt in self._steps:
            if len(w) == 1:
                old = self.letter_weight.get(w[0])
                if old is None or wt < old:
                    self.letter_weight[w[0]] = wt
        self.identity = Element(self.table)
        self._nodes = {self.identity: _Node(0, [])}
        self._order = []                     # settle order
        self._buckets = {0: [self.identity]}
        self._next = 0
        self.radius = -1
        self._count_by_length = {}
        self._word_memo = {}

    def extend(self, radius):
        """Settle every element of length <= radius."""
        if radius <= self.radius:
            return self
        nodes = self._nodes
        buckets = self._buckets
        while self._next <= radius:
            d = self._next
            for u in buckets.pop(d, ()):
                node = nodes[u]
                if node.settled or node.dist != d:
                    continue
                node.settled = True
                self._order.append(u)
                self._count_by_length[d] = self._count_by_length.get(d, 0) + 1
                base = u.letters
                for gi, gword, wt in self._steps:
                    nd = d + wt
                    v = Element(self.table, self.table.reduce(base + gword))
                    vn = nodes.get(v)
                    if vn is None:
                        if len(nodes) >= self.entry_budget:
                            raise EntryBudgetExceeded(
                                f"ball exceeded {self.entry_budget} entries "
                                f"(settled through length {d})")
                        nodes[v] = _Node(nd, [(u, gi)])
                        buckets.setdefault(nd, []).append(v)
                    elif nd < vn.dist:
                        vn.dist = nd
                        vn.preds = [(u, gi)]
                        buckets.setdefault(nd, []).append(v)
                    elif nd == vn.dist and not vn.settled:
                        vn.preds.append((u, gi))
            self._next += 1
        self.radius = radius
        return self

    def __contains__(self, elem):
        node = self._nodes.get(elem)
        return node is not None and node.settled

    def items(self, max_length=None):
        """Settled (element, length) pairs in discovery order."""
        limit = self.radius if max_length is None else min(max_length, self.radius)
        for elem in self._order:
            d = self._nodes[elem].dist
            if d <= limit:
                yield elem, d

    def gamma(self, radius=None):
        """Number of elements of length <= radius."""
        radius = self.radius if radius is None else radius
        self.extend(radius)
        return sum(n for d, n in self._count_by_length.items() if d <= radius)

    def length_of(self, elem, *, bound=None):
        """True length of an element, growing the ball as needed.

        bound must dominate the length; by default the letters of the
        element's word are priced individually.
        """
        node = self._nodes.get(elem)
        if node is not None and node.settled:
            return node.dist
        if bound is None:
            bound = self.word_weight(elem.letters)
        self.extend(bound)
        node = self._nodes.get(elem)
        if node is None or not node.settled:
            raise RuntimeError("length bound was not an upper bound")
        return node.dist

    def word_weight(self, letters):
        total = 0
        for x in self.table.reduce(letters):
            try:
                total += self.letter_weight[x]
            except KeyError:
                raise ValueError(
                    f"letter {self.table.generators[x]!r} has no weight "
                    f"in this generating set") from None
        return total

    def predecessors(self, elem):
        node = self._nodes.get(elem)
        if node is None or not node.settled:
            raise KeyError("element is not settled in this ball")
        return [(u, self.generators[gi].name) for u, gi in node.preds]

    def geodesic_words(self, elem, *, cap=DEFAULT_WORD_CAP):
        """The complete set of minimum-length spellings of a settled element.

        Words are tuples of generator names.  Raises WordCapExceeded when a
        single element has more than cap spellings.
        """
        node = self._nodes.get(elem)
        if node is None or not node.settled:
            raise KeyError("element is not settled in this ball")
        # the shared memo holds uncapped sets; honour a custom cap freshly
        memo = self._word_memo if cap == DEFAULT_WORD_CAP else {}
        names = [g.name for g in self.generators]

        def rec(v, vn):
            got = memo.get(v)
            if got is not None:
                return got
            if vn.dist == 0:
                result = frozenset({()})
            else:
                acc = set()
                for u, gi in vn.preds:
                    tail = names[gi]
                    for w in rec(u, self._nodes[u]):
                        acc.add(w + (tail,))
                        if len(acc) > cap:
                            raise WordCapExceeded(
                                f"more than {cap} geodesic words")
                result = frozenset(acc)
            memo[v] = result
            return result

        return rec(elem, node)

    def a_geodesic_word(self, elem):
        """One canonical geodesic spelling.

        Deterministic: ties are broken by generator declaration order from
        the last letter backwards.
        """
        node = self._nodes.get(elem)
        if node is None or not node.settled:
            raise KeyError("element is not settled in this ball")
        out = []
        while node.dist:
            u, gi = min(node.preds, key=lambda p: (p[1], self._nodes[p[0]].dist))
            out.append(self.generators[gi].name)
            node = self._nodes[u]
        return tuple(reversed(out))


@dataclass
class GrowthSeries:
    """Ball sizes of a group at radii 0..max, with display-only rate floats."""

    group: str
    generator_names: tuple
    samples: tuple  # (radius, ball size)

    def rates(self):
        out = []
        for r, n in self.samples:
            out.append((r, n, float(n) ** (1.0 / r) if r else float(n)))
        return out


def enumerate_ball(group, radius, *, generators=None,
                   entry_budget=DEFAULT_ENTRY_BUDGET):
    """A settled ball of the given radius."""
    ball = Ball(group, generators, entry_budget=entry_budget)
    return ball.extend(radius)


def growth_series(group, max_radius, *, step=1, generators=None, ball=None):
    if ball is None:
        ball = Ball(group, generators)
    ball.extend(max_radius)
    samples = tuple((r, ball.gamma(r)) for r in range(0, max_radius + 1, step))
    return GrowthSeries(group.name, tuple(g.name for g in ball.generators),
                        samples)


def level_stabilizer_member(elem, level):
    """Does the element fix the tree pointwise down to the given depth?"""
    table = elem.table

    def rec(word, d):
        if table.activity_of(word):
            return False
        if d <= 1:
            return True
        left, right, _ = table.pair(word)
        return rec(left, d - 1) and rec(right, d - 1)

    if level <= 0:
        return True
    return rec(table.reduce(elem.letters), level)


def word_alternates(names, swap_names):
    """No two adjacent swap letters and no two adjacent non-swap letters."""
    for x, y in zip(names, names[1:]):
        if (x in swap_names) == (y in swap_names):
            return False
    return True


def swap_generator_names(ball):
    """Names of generators that move the top level."""
    table = ball.table
    return frozenset(
        g.name for g in ball.generators
        if table.activity_of(table.encode(g.word))
    )


def alternation_check(ball, *, radius=None, cap=DEFAULT_WORD_CAP):
    """Does every element admit a geodesic spelling that alternates between
    the active letters and the rest?  Returns the failures if not."""
    radius = ball.radius if radius is None else radius
    ball.extend(radius)
    swaps = swap_generator_names(ball)
    failures = []
    checked = 0
    for elem, length in ball.items(radius):
        checked += 1
        words = ball.geodesic_words(elem, cap=cap)
        if not any(word_alternates(w, swaps) for w in words):
            failures.append({
                "element": elem.word,
                "length": length,
                "words": sorted(words)[:4],
            })
    return {"passed": not failures, "checked": checked, "failures": failures}

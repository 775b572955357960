"""Tree automorphisms presented by wreath recursions on the rooted binary tree.

Vertices of the tree are finite strings over {L, R}.  A recursion table
assigns to each generator letter x a root activity e_x (1 = swap the two
subtrees) and a pair of section words (x_L, x_R) over the same letters.
Words multiply left to right: w = x1 x2 ... xn is the product "x1 first".
Sections of a product obey

    (g h)_L = g_L h_L,   (g h)_R = g_R h_R        if g is inactive,
    (g h)_L = g_L h_R,   (g h)_R = g_R h_L        if g is active,

and activities add mod 2.  Folding a word through this rule yields its
first-level decomposition without ever building the product tree.

Triviality is decided by closing a word under taking sections: an element is
trivial iff no word in the closure carries the swap activity.  The closure is
finite for the built-in tables; a state budget guards against tables where it
is not.  Equality of elements reduces to triviality, and a fixed-depth
portrait fingerprint gives a hash that equal elements share, so elements can
be used directly as dictionary keys.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_STATE_BUDGET = 100_000
PORTRAIT_HASH_DEPTH = 8


class BudgetExceeded(RuntimeError):
    """A configured search budget ran out before the computation finished."""


class StateBudgetExceeded(BudgetExceeded):
    pass


class RecursionTable:
    """Generator letters with their root activities and section words.

    generators: letter names; built-ins use single characters
    activity:   name -> 0 or 1
    sections:   name -> (left word, right word)
    inverses:   name -> word for the letter's inverse; defaults to the letter
                itself.  Declarations, including the involution default, are
                verified at construction and a wrong one raises ValueError.

    Words are given as strings parsed greedily into the longest declared
    names, or as sequences of names.  "1" and "" denote the empty word.
    Internally words are tuples of letter indices.
    """

    def __init__(self, generators, activity, sections, inverses=None, *,
                 state_budget=DEFAULT_STATE_BUDGET):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        if not self.generators:
            raise ValueError("a table needs at least one generator")
        self.index = {g: i for i, g in enumerate(self.generators)}
        self._names_by_len = sorted(self.generators, key=len, reverse=True)
        self.state_budget = state_budget
        self.act = tuple(int(activity[g]) for g in self.generators)
        self.sec = tuple(
            (self.encode(sections[g][0]), self.encode(sections[g][1]))
            for g in self.generators
        )
        declared = dict(inverses) if inverses else {}
        self.inv = tuple(
            self.encode(declared[g]) if g in declared else (self.index[g],)
            for g in self.generators
        )
        self._pair = {}
        self._triv = {}
        self._key = {}
        # Verify the inverse declarations before free cancellation trusts
        # them; while inv_letter is all None, reduce() cannot cancel, so the
        # closure walk below cannot be fooled by a wrong declaration.
        self.inv_letter = (None,) * len(self.generators)
        for i, w in enumerate(self.inv):
            if not self.trivial_word((i,) + w):
                raise ValueError(
                    f"declared inverse of {self.generators[i]!r} "
                    "is not an inverse")
        self._pair.clear()
        self._triv.clear()
        # single-letter inverses drive free reduction
        self.inv_letter = tuple(w[0] if len(w) == 1 else None for w in self.inv)

    def encode(self, word):
        """Word as a tuple of letter indices."""
        if isinstance(word, tuple) and (not word or isinstance(word[0], int)):
            return word
        if isinstance(word, str):
            if word in ("", "1"):
                return ()
            out = []
            i = 0
            while i < len(word):
                if word[i] == " ":
                    i += 1
                    continue
                for name in self._names_by_len:
                    if word.startswith(name, i):
                        out.append(self.index[name])
                        i += len(name)
                        break
                else:
                    raise ValueError(f"unknown letter at {word[i:]!r}")
            return tuple(out)
        return tuple(self.index[x] if not isinstance(x, int) else x for x in word)

    def decode(self, word):
        return "".join(self.generators[x] for x in word)

    def reduce(self, word):
        """Freely reduce: cancel adjacent letter-inverse pairs only."""
        out = []
        for x in word:
            if out and self.inv_letter[out[-1]] == x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def invert(self, word):
        out = []
        for x in reversed(word):
            out.extend(self.inv[x])
        return tuple(out)

    def activity_of(self, word):
        e = 0
        for x in word:
            e ^= self.act[x]
        return e

    def pair(self, word):
        """First-level data (left section, right section, activity) of a word.

        Sections come back freely reduced; the result is memoised on the
        reduced input.
        """
        word = self.reduce(word)
        hit = self._pair.get(word)
        if hit is None:
            left = []
            right = []
            e = 0
            for x in word:
                xl, xr = self.sec[x]
                if e:
                    left.extend(xr)
                    right.extend(xl)
                else:
                    left.extend(xl)
                    right.extend(xr)
                e ^= self.act[x]
            hit = (self.reduce(left), self.reduce(right), e)
            self._pair[word] = hit
        return hit

    def trivial_word(self, word):
        """Does the word represent the identity automorphism?

        Walks the closure of the word under sections; the element is trivial
        iff every member of the closure is inactive.  Verdicts for all words
        met along the way are cached.
        """
        word = self.reduce(word)
        if not word:
            return True
        cache = self._triv
        known = cache.get(word)
        if known is not None:
            return known
        seen = set()
        stack = [word]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            known = cache.get(u)
            if known is True:
                continue
            if known is False or self.activity_of(u):
                cache[u] = False
                cache[word] = False
                return False
            seen.add(u)
            if len(seen) > self.state_budget:
                raise StateBudgetExceeded(
                    f"section closure exceeded {self.state_budget} states")
            left, right, _ = self.pair(u)
            if left:
                stack.append(left)
            if right:
                stack.append(right)
        # the closure is section-closed and activity-free, hence trivial
        for u in seen:
            cache[u] = True
        return True

    def portrait_key(self, word, depth=PORTRAIT_HASH_DEPTH):
        """Activity bitmap of the portrait to the given depth, preorder."""
        word = self.reduce(word)
        hit = self._key.get((word, depth))
        if hit is None:
            bit = b"\x01" if self.activity_of(word) else b"\x00"
            if depth == 0:
                hit = bit
            else:
                left, right, _ = self.pair(word)
                hit = bit + self.portrait_key(left, depth - 1) \
                          + self.portrait_key(right, depth - 1)
            self._key[(word, depth)] = hit
        return hit

    def validate(self):
        """Recheck the inverse declarations; construction already did."""
        for i, g in enumerate(self.generators):
            if not self.trivial_word((i,) + self.inv[i]):
                raise ValueError(f"declared inverse of {g!r} is not an inverse")
        return self


class Element:
    """A tree automorphism carried as a word over a table's letters.

    Equality and hashing follow the group element, not the spelling: the
    hash comes from the depth-8 portrait and colliding candidates are
    settled by the word problem.  Elements of different tables never
    compare equal.
    """

    __slots__ = ("table", "letters", "_hash")

    def __init__(self, table, word=()):
        self.table = table
        self.letters = table.encode(word)
        self._hash = None

    @property
    def word(self):
        return self.table.decode(self.letters)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"Element({self.word!r})"

    def __eq__(self, other):
        if not isinstance(other, Element) or other.table is not self.table:
            return NotImplemented
        return self.table.trivial_word(
            self.letters + self.table.invert(other.letters))

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.table.portrait_key(self.letters))
            self._hash = h
        return h


@dataclass(frozen=True)
class Portrait:
    """Activities of an automorphism down to a fixed depth.

    activities[d] lists the 2^d activities of the depth-d vertices, left to
    right.
    """

    depth: int
    activities: tuple

    def key(self):
        return self.activities


def _same_table(a, b):
    if a.table is not b.table:
        raise ValueError("elements come from different tables")


def compose(a, b):
    """Product ab; the word of the result is the concatenation of spellings."""
    _same_table(a, b)
    return Element(a.table, a.letters + b.letters)


def inverse(a):
    return Element(a.table, a.table.invert(a.letters))


def activity(a):
    return a.table.activity_of(a.letters)


def sections(a):
    left, right, _ = a.table.pair(a.letters)
    return Element(a.table, left), Element(a.table, right)


def trivial(a):
    return a.table.trivial_word(a.letters)


def equal(a, b):
    _same_table(a, b)
    return a.table.trivial_word(a.letters + a.table.invert(b.letters))


def portrait(a, depth):
    table = a.table
    level = [table.reduce(a.letters)]
    out = []
    for d in range(depth + 1):
        out.append(tuple(table.activity_of(w) for w in level))
        if d < depth:
            nxt = []
            for w in level:
                left, right, _ = table.pair(w)
                nxt.append(left)
                nxt.append(right)
            level = nxt
    return Portrait(depth, tuple(out))


def act(a, vertex):
    """Image of a vertex, a string over {L, R}."""
    table = a.table
    w = table.reduce(a.letters)
    out = []
    for ch in vertex:
        if ch not in "LR":
            raise ValueError(f"vertex letters must be L or R, got {ch!r}")
        left, right, e = table.pair(w)
        bit = 0 if ch == "L" else 1
        out.append("LR"[bit ^ e])
        w = left if bit == 0 else right
    return "".join(out)


def parse_recursion_spec(text, *, state_budget=DEFAULT_STATE_BUDGET):
    """Build a validated table from its text form.

    One line per generator:   name = (leftWord, rightWord) [swap]
    Optional inverse lines:   inverse name = word
    Words are letter sequences without separators, 1 is the empty word,
    # starts a comment.
    """
    decls = []
    invs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("inverse "):
            name, eq, word = line[len("inverse "):].partition("=")
            if not eq:
                raise ValueError(f"line {lineno}: expected '='")
            invs[name.strip()] = word.strip()
            continue
        name, eq, rhs = line.partition("=")
        if not eq:
            raise ValueError(f"line {lineno}: expected '='")
        name = name.strip()
        rhs = rhs.strip()
        swap = 0
        if rhs.endswith("swap"):
            swap = 1
            rhs = rhs[: -len("swap")].rstrip()
        if not (rhs.startswith("(") and rhs.endswith(")")):
            raise ValueError(f"line {lineno}: expected (left, right) after '='")
        left, comma, right = rhs[1:-1].partition(",")
        if not comma:
            raise ValueError(f"line {lineno}: expected two section words")
        decls.append((name, left.strip(), right.strip(), swap))
    if not decls:
        raise ValueError("no generators declared")
    names = [d[0] for d in decls]
    table = RecursionTable(
        names,
        {d[0]: d[3] for d in decls},
        {d[0]: (d[1], d[2]) for d in decls},
        inverses=invs or None,
        state_budget=state_budget,
    )
    return table.validate()


def load_recursion_spec(path, *, state_budget=DEFAULT_STATE_BUDGET):
    with open(path, encoding="utf-8") as fh:
        return parse_recursion_spec(fh.read(), state_budget=state_budget)

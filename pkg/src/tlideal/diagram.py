"""
Canonical Temperley-Lieb diagrams.

An (m, n)-diagram has m points on the top edge and n on the bottom edge. Points are numbered in a single array:
top points 0..m-1 from left to right, then bottom points m..m+n-1 from left to right. ``match[i]`` is the partner
of point i. Walking the boundary of the rectangle (top left to right, then bottom right to left) the pairing must
be a balanced bracket sequence, which is exactly the non-crossing condition.

Diagrams are interned: constructing the same pairing twice returns the same object, so diagrams can be compared
and hashed by identity, which keeps sparse morphism dictionaries fast.
"""
from __future__ import annotations

import functools
import math
import threading
from typing import Iterator, Sequence

from .errors import BadParameter, DomainMismatch, ParityError


def catalan(n: int) -> int:
    """
    >>> [catalan(n) for n in range(9)]
    [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    """
    return math.comb(2 * n, n) // (n + 1)


def hom_dimension(m: int, n: int) -> int:
    """Dimension of Hom(m, n): Catalan((m+n)/2) when m+n is even, else 0."""
    if m < 0 or n < 0:
        raise BadParameter("object labels are non-negative")
    return 0 if (m + n) % 2 else catalan((m + n) // 2)


def _walk_position(i: int, top: int, bot: int) -> int:
    return i if i < top else top + (bot - 1 - (i - top))


def is_valid_matching(top: int, bot: int, match: Sequence[int]) -> bool:
    """True if ``match`` is a fixed-point-free involution whose boundary walk is a balanced bracket sequence."""
    size = top + bot
    if len(match) != size or size % 2:
        return False
    for i, j in enumerate(match):
        if not (0 <= j < size) or j == i or match[j] != i:
            return False
    walk = [0] * size
    for i in range(size):
        walk[_walk_position(i, top, bot)] = _walk_position(match[i], top, bot)
    stack = []
    for p in range(size):
        q = walk[p]
        if p < q:
            stack.append(q)
        elif not stack or stack.pop() != p:
            return False
    return True


class Diagram:
    """An interned (top, bot) Temperley-Lieb diagram; equality is identity."""

    __slots__ = ("top", "bot", "match", "__weakref__")

    _table: dict[tuple[int, int, tuple[int, ...]], Diagram] = {}
    _lock = threading.Lock()

    def __new__(cls, top: int, bot: int, match: Sequence[int]):
        key = (top, bot, tuple(match))
        found = cls._table.get(key)
        if found is not None:
            return found
        if top < 0 or bot < 0:
            raise BadParameter("diagram sizes must be non-negative")
        if (top + bot) % 2:
            raise ParityError(f"no ({top},{bot}) diagrams: top + bot is odd")
        if not is_valid_matching(top, bot, key[2]):
            raise BadParameter(f"not a non-crossing perfect matching: {key}")
        with cls._lock:
            found = cls._table.get(key)
            if found is None:
                found = object.__new__(cls)
                object.__setattr__(found, "top", top)
                object.__setattr__(found, "bot", bot)
                object.__setattr__(found, "match", key[2])
                cls._table[key] = found
        return found

    def __setattr__(self, name, value):
        raise AttributeError("Diagram is immutable")

    def __reduce__(self):
        return (Diagram, (self.top, self.bot, self.match))

    def sort_key(self) -> tuple:
        return (self.top, self.bot, self.match)

    def __lt__(self, other: Diagram) -> bool:
        return self.sort_key() < other.sort_key()

    def through_strands(self) -> int:
        return sum(1 for i in range(self.top) if self.match[i] >= self.top)

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.match) if i < j]

    def to_json(self) -> dict:
        return {"top": self.top, "bot": self.bot, "match": list(self.match)}

    @classmethod
    def from_json(cls, data: dict) -> Diagram:
        return cls(int(data["top"]), int(data["bot"]), [int(x) for x in data["match"]])

    def __repr__(self) -> str:
        return f"Diagram({self.top}, {self.bot}, {list(self.match)})"


# ---------------------------------------------------------------------------------------------------------------------
# Basic diagrams


def identity(n: int) -> Diagram:
    return Diagram(n, n, [i + n for i in range(n)] + list(range(n)))


def cap() -> Diagram:
    """The Hom(0, 2) diagram: two bottom points paired."""
    return Diagram(0, 2, [1, 0])


def cup() -> Diagram:
    """The Hom(2, 0) diagram: two top points paired."""
    return Diagram(2, 0, [1, 0])


def generator(i: int, n: int) -> Diagram:
    """The TL generator e_i in T_n (1 <= i <= n-1): joins strands i and i+1 at the top and at the bottom."""
    if not 1 <= i <= n - 1:
        raise BadParameter(f"e_{i} is not defined in T_{n}")
    match = [k + n for k in range(n)] + list(range(n))
    a, b = i - 1, i
    match[a], match[b] = b, a
    match[n + a], match[n + b] = n + b, n + a
    return Diagram(n, n, match)


def basic_diagram(kind: str, *params: int) -> Diagram:
    """Dispatch helper: ``basic_diagram("identity", 3)``, ``("cap")``, ``("cup")``, ``("e", i, n)``."""
    if kind == "identity":
        return identity(*params)
    if kind == "cap":
        return cap()
    if kind == "cup":
        return cup()
    if kind in ("e", "generator"):
        return generator(*params)
    raise BadParameter(f"unknown basic diagram {kind!r}")


# ---------------------------------------------------------------------------------------------------------------------
# Composition, tensor, transpose


_compose_cache: dict[tuple[Diagram, Diagram], tuple[Diagram, int]] = {}


def compose_diagrams(b: Diagram, a: Diagram) -> tuple[Diagram, int]:
    """
    Stack ``a`` (on top, in Hom(l, m)) over ``b`` (below, in Hom(m, n)). Returns the reduced (l, n)-diagram and the
    number of closed loops removed.
    """
    key = (b, a)
    hit = _compose_cache.get(key)
    if hit is not None:
        return hit
    if a.bot != b.top:
        raise DomainMismatch(f"cannot compose ({b.top},{b.bot}) after ({a.top},{a.bot})")
    lt, mid, nb = a.top, a.bot, b.bot
    am, bm = a.match, b.match
    out = [-1] * (lt + nb)
    seen = [False] * mid

    # Outer points of the result: a's top points keep their index, b's bottom points shift by lt.
    for start in range(lt + nb):
        if out[start] >= 0:
            continue
        if start < lt:
            j, in_a = am[start], True
        else:
            j, in_a = bm[mid + start - lt], False
        while True:
            if in_a:
                if j < lt:
                    end = j
                    break
                k = j - lt
                seen[k] = True
                j, in_a = bm[k], False
            else:
                if j >= mid:
                    end = lt + j - mid
                    break
                seen[j] = True
                j, in_a = am[lt + j], True
        out[start], out[end] = end, start

    loops = 0
    for k in range(mid):
        if seen[k]:
            continue
        loops += 1
        # Alternate b's pairing and a's pairing around the closed loop.
        while not seen[k]:
            seen[k] = True
            k2 = bm[k]
            seen[k2] = True
            k = am[lt + k2] - lt

    result = (Diagram(lt, nb, out), loops)
    _compose_cache[key] = result
    return result


def tensor_diagrams(a: Diagram, b: Diagram) -> Diagram:
    """Horizontal juxtaposition, ``a`` on the left."""
    top, bot = a.top + b.top, a.bot + b.bot

    def pos_a(i: int) -> int:
        return i if i < a.top else top + (i - a.top)

    def pos_b(i: int) -> int:
        return a.top + i if i < b.top else top + a.bot + (i - b.top)

    match = [0] * (top + bot)
    for i, j in enumerate(a.match):
        match[pos_a(i)] = pos_a(j)
    for i, j in enumerate(b.match):
        match[pos_b(i)] = pos_b(j)
    return Diagram(top, bot, match)


def transpose_diagram(a: Diagram) -> Diagram:
    """Flip top and bottom, preserving left-right order."""
    m, n = a.top, a.bot

    def pos(i: int) -> int:
        return n + i if i < m else i - m

    match = [0] * (m + n)
    for i, j in enumerate(a.match):
        match[pos(i)] = pos(j)
    return Diagram(n, m, match)


def closure_loops(a: Diagram) -> int:
    """Number of closed components when top point i of an (n, n)-diagram is joined to bottom point i."""
    if a.top != a.bot:
        raise DomainMismatch("closure is only defined on (n, n) diagrams")
    n = a.top
    seen = [False] * (2 * n)
    loops = 0
    for s in range(n):
        if seen[s]:
            continue
        loops += 1
        i = s
        while not seen[i]:
            seen[i] = True
            j = a.match[i]
            seen[j] = True
            i = j + n if j < n else j - n
    return loops


# ---------------------------------------------------------------------------------------------------------------------
# Enumeration


def _balanced_matchings(size: int) -> Iterator[list[int]]:
    walk = [-1] * size

    def place(i: int, pairs: int):
        if pairs == 0:
            yield
            return
        for inner in range(pairs):
            j = i + 1 + 2 * inner
            walk[i], walk[j] = j, i
            for _ in place(i + 1, inner):
                for _ in place(j + 1, pairs - inner - 1):
                    yield

    for _ in place(0, size // 2):
        yield list(walk)


@functools.lru_cache(maxsize=None)
def enumerate_diagrams(m: int, n: int) -> tuple[Diagram, ...]:
    """All (m, n)-diagrams in lexicographic order of their match arrays."""
    if m < 0 or n < 0:
        raise BadParameter("object labels are non-negative")
    if (m + n) % 2:
        return ()
    size = m + n
    index_of = [p if p < m else m + (n - 1 - (p - m)) for p in range(size)]
    matches = []
    for walk in _balanced_matchings(size):
        match = [0] * size
        for p, q in enumerate(walk):
            match[index_of[p]] = index_of[q]
        matches.append(tuple(match))
    matches.sort()
    return tuple(Diagram(m, n, mt) for mt in matches)


@functools.lru_cache(maxsize=None)
def diagram_index(m: int, n: int) -> dict[Diagram, int]:
    """Position of each diagram in ``enumerate_diagrams(m, n)``."""
    return {x: i for i, x in enumerate(enumerate_diagrams(m, n))}

"""
Two-row Young diagrams, the Bratteli diagram of the tower T_0 ⊂ T_1 ⊂ ..., and the path idempotents.

A path of length n is recorded by its width sequence w_0 = 1, w_1, ..., w_n with |w_{i+1} - w_i| = 1 and w_i >= 1,
where the width of a two-row diagram [l1, l2] is l1 - l2 + 1.

Path idempotents are built along the tower with a split rule. Given p for a path ending at λ' (predecessor λ''),
put a = p ⊗ 1 and x = a·e_n·a. Then x² = ([w(λ')]/[w(λ'')])·x, so q = ([w(λ'')]/[w(λ')])·x is an idempotent with
trace [w(λ'')]; it is assigned to the extension whose width returns to w(λ''), and a - q to the other extension.
"""
from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
import threading
from pathlib import Path
from typing import Iterator

from .errors import BadParameter, NotEvaluable
from .exactscalar import GENERIC, Ring, quantum_integer
from .morphism import (
    Morphism,
    compose,
    generator_morphism,
    identity_morphism,
    tensor,
)


@dataclasses.dataclass(frozen=True, order=True)
class YoungDiagram:
    """A Young diagram with at most two rows."""

    l1: int = 0
    l2: int = 0

    def __post_init__(self):
        if self.l2 < 0 or self.l1 < self.l2:
            raise BadParameter(f"[{self.l1},{self.l2}] is not a two-row Young diagram")

    @classmethod
    def from_width(cls, n: int, w: int) -> YoungDiagram:
        if w < 1 or w > n + 1 or (n + 1 - w) % 2:
            raise BadParameter(f"no diagram of size {n} and width {w}")
        return cls((n + w - 1) // 2, (n - w + 1) // 2)

    @property
    def size(self) -> int:
        return self.l1 + self.l2

    @property
    def width(self) -> int:
        return self.l1 - self.l2 + 1

    def label(self) -> str:
        return f"{self.l1},{self.l2}"

    def __str__(self) -> str:
        if self.size == 0:
            return "∅"
        return f"[{self.l1}]" if self.l2 == 0 else f"[{self.l1},{self.l2}]"


EMPTY = YoungDiagram(0, 0)


def young_successors(lam: YoungDiagram) -> list[YoungDiagram]:
    """Diagrams obtained from λ by adding one box (first row first)."""
    out = [YoungDiagram(lam.l1 + 1, lam.l2)]
    if lam.l2 < lam.l1:
        out.append(YoungDiagram(lam.l1, lam.l2 + 1))
    return out


def count_tableaux(lam: YoungDiagram) -> int:
    """f_λ, the number of standard tableaux of shape λ: C(n, λ2) - C(n, λ2 - 1)."""
    n = lam.size
    return math.comb(n, lam.l2) - (math.comb(n, lam.l2 - 1) if lam.l2 >= 1 else 0)


def diagrams_of_size(n: int) -> list[YoungDiagram]:
    """Two-row diagrams with n boxes, ordered by increasing width."""
    return [YoungDiagram.from_width(n, w) for w in range(1 + n % 2, n + 2, 2)]


@dataclasses.dataclass(frozen=True, order=True)
class BratteliPath:
    """A path from ∅ in the Bratteli diagram, i.e. a standard two-row tableau, stored as its width sequence."""

    widths: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.widths)
        object.__setattr__(self, "widths", w)
        if not w or w[0] != 1:
            raise BadParameter("a Bratteli path starts at the empty diagram (width 1)")
        for a, b in zip(w, w[1:]):
            if abs(a - b) != 1 or b < 1:
                raise BadParameter(f"invalid width sequence {w}")

    @classmethod
    def from_shapes(cls, shapes: list[YoungDiagram]) -> BratteliPath:
        for i, lam in enumerate(shapes):
            if lam.size != i:
                raise BadParameter("the i-th shape of a path must have i boxes")
        return cls(tuple(lam.width for lam in shapes))

    @classmethod
    def parse(cls, text: str) -> BratteliPath:
        return cls(tuple(int(x) for x in text.split("-")))

    @property
    def length(self) -> int:
        return len(self.widths) - 1

    @property
    def shapes(self) -> list[YoungDiagram]:
        return [YoungDiagram.from_width(i, w) for i, w in enumerate(self.widths)]

    @property
    def endpoint(self) -> YoungDiagram:
        return YoungDiagram.from_width(self.length, self.widths[-1])

    def parent(self) -> BratteliPath:
        return BratteliPath(self.widths[:-1])

    def extend(self, w: int) -> BratteliPath:
        return BratteliPath(self.widths + (w,))

    def extensions(self) -> list[BratteliPath]:
        w = self.widths[-1]
        return [self.extend(w + 1)] + ([self.extend(w - 1)] if w > 1 else [])

    @property
    def name(self) -> str:
        return "-".join(str(w) for w in self.widths)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.shapes) + ")"


def single_row_path(n: int) -> BratteliPath:
    return BratteliPath(tuple(range(1, n + 2)))


def paths_of_length(n: int) -> list[BratteliPath]:
    """All Bratteli paths of length n, in lexicographic order of width sequences."""
    out = []

    def walk(ws: list[int]):
        if len(ws) == n + 1:
            out.append(BratteliPath(tuple(ws)))
            return
        w = ws[-1]
        for nxt in (w - 1, w + 1):
            if nxt >= 1:
                ws.append(nxt)
                walk(ws)
                ws.pop()

    walk([1])
    return out


def paths_to(lam: YoungDiagram) -> list[BratteliPath]:
    return [t for t in paths_of_length(lam.size) if t.widths[-1] == lam.width]


@dataclasses.dataclass
class BratteliGraph:
    levels: list[list[YoungDiagram]]
    edges: list[tuple[YoungDiagram, YoungDiagram]]

    def dimension(self, level: int) -> int:
        return sum(count_tableaux(lam) ** 2 for lam in self.levels[level])

    def to_dot(self) -> str:
        def node(lam: YoungDiagram) -> str:
            return f'"{lam.label()}"'

        lines = ["digraph bratteli {", "  rankdir=TB;"]
        for k, level in enumerate(self.levels):
            names = " ".join(node(lam) for lam in level)
            lines.append(f"  {{ rank=same; {names} }}  // level {k}")
        for lam in (lam for level in self.levels for lam in level):
            lines.append(f'  {node(lam)} [label="{lam.label()}"];')
        for a, b in self.edges:
            lines.append(f"  {node(a)} -> {node(b)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "levels": [
                [{"lambda": [lam.l1, lam.l2], "f": count_tableaux(lam)} for lam in level] for level in self.levels
            ],
            "edges": [[[a.l1, a.l2], [b.l1, b.l2]] for a, b in self.edges],
        }


def bratteli_graph(n: int) -> BratteliGraph:
    if n < 0:
        raise BadParameter("number of levels must be non-negative")
    levels = [diagrams_of_size(k) for k in range(n + 1)]
    edges = [(lam, mu) for level in levels[:-1] for lam in level for mu in young_successors(lam)]
    return BratteliGraph(levels, edges)


# ---------------------------------------------------------------------------------------------------------------------
# Idempotent cache


def default_cache_dir() -> Path:
    env = os.environ.get("TL_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "tl-ideal-lab"


class IdempotentCache:
    """
    In-memory cache of generic path idempotents, optionally backed by one JSON file per path
    (``p_<widths>.json``) in a directory. File writes are atomic (write to a temp file, then rename).
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else None
        self._memory: dict[tuple[int, ...], Morphism] = {}
        self._lock = threading.Lock()

    def filename(self, path: BratteliPath) -> Path | None:
        return None if self.directory is None else self.directory / f"p_{path.name}.json"

    def get(self, path: BratteliPath) -> Morphism | None:
        hit = self._memory.get(path.widths)
        if hit is not None:
            return hit
        fn = self.filename(path)
        if fn is not None and fn.exists():
            with open(fn) as fh:
                value = Morphism.from_json(json.load(fh))
            with self._lock:
                return self._memory.setdefault(path.widths, value)
        return None

    def put(self, path: BratteliPath, value: Morphism) -> Morphism:
        with self._lock:
            value = self._memory.setdefault(path.widths, value)
        fn = self.filename(path)
        if fn is not None and not fn.exists():
            fn.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=fn.parent, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w") as fh:
                json.dump(value.to_json(), fh, sort_keys=True)
            os.replace(tmp, fn)
        return value

    def entries(self) -> list[Path]:
        if self.directory is None or not self.directory.exists():
            return []
        return sorted(self.directory.glob("p_*.json"))

    def clear(self) -> int:
        removed = 0
        for fn in self.entries():
            fn.unlink()
            removed += 1
        with self._lock:
            self._memory.clear()
        return removed


_default_cache = IdempotentCache()


def get_cache() -> IdempotentCache:
    return _default_cache


def set_cache(cache: IdempotentCache) -> IdempotentCache:
    global _default_cache
    _default_cache = cache
    return cache


# ---------------------------------------------------------------------------------------------------------------------
# Path idempotents


def _specialize(a: Morphism, ring: Ring) -> Morphism:
    if ring.is_generic:
        return a
    from .rootspec import evaluate_morphism

    return evaluate_morphism(a, ring.ell)


def path_idempotent(path: BratteliPath, ring: Ring = GENERIC, cache: IdempotentCache | None = None) -> Morphism:
    """The minimal idempotent p_t of T_n attached to a Bratteli path t of length n."""
    if not ring.is_generic:
        return _specialize(path_idempotent(path, GENERIC, cache), ring)
    cache = cache if cache is not None else _default_cache
    hit = cache.get(path)
    if hit is not None:
        return hit

    n = path.length
    if n <= 1:
        return cache.put(path, identity_morphism(n))

    parent = path.parent()
    a = tensor(path_idempotent(parent, GENERIC, cache), identity_morphism(1))
    w_prev = parent.widths[-1]
    if w_prev == 1:
        # [k,k] has a single successor
        return cache.put(path, a)

    w_back = parent.widths[-2]
    e = generator_morphism(n - 1, n)
    x = compose(compose(a, e), a)
    q = x.scale(quantum_integer(w_back) / quantum_integer(w_prev))
    value = q if path.widths[-1] == w_back else a - q
    return cache.put(path, value)


def jones_wenzl(n: int, ring: Ring = GENERIC, cache: IdempotentCache | None = None) -> Morphism:
    """JW_n, the path idempotent of the single-row tableau [n]; evaluable at ell only for n <= ell - 1."""
    if n < 0:
        raise BadParameter("JW_n needs n >= 0")
    if not ring.is_generic and n >= ring.ell:
        raise NotEvaluable(f"JW_{n} has a pole at tau for ell={ring.ell}")
    return path_idempotent(single_row_path(n), ring, cache)


def central_idempotent(lam: YoungDiagram, ring: Ring = GENERIC, cache: IdempotentCache | None = None) -> Morphism:
    """z_λ = Σ p_t over the paths t ending at λ."""
    total = Morphism.zero(lam.size, lam.size)
    for t in paths_to(lam):
        total = total + path_idempotent(t, GENERIC, cache)
    return _specialize(total, ring)


def iter_path_idempotents(n: int, cache: IdempotentCache | None = None) -> Iterator[tuple[BratteliPath, Morphism]]:
    for t in paths_of_length(n):
        yield t, path_idempotent(t, GENERIC, cache)

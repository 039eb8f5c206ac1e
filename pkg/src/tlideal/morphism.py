"""
Morphisms of the Temperley-Lieb category: finite linear combinations of diagrams over a scalar ring.

Composition follows the stacking rule: each pair of diagrams contributes ``d^r`` times the reduced diagram, where r
is the number of closed loops removed. The ring is either the generic field Q(t) or a cyclotomic specialization;
mixing the two is an error, never a coercion.
"""
from __future__ import annotations

import functools
import random
from typing import Iterable, Mapping, Sequence

from .diagram import (
    Diagram,
    cap,
    closure_loops,
    compose_diagrams,
    cup,
    diagram_index,
    enumerate_diagrams,
    generator,
    identity,
    tensor_diagrams,
    transpose_diagram,
)
from .errors import (
    DivisionByZero,
    DomainMismatch,
    NotMinimal,
    ParityError,
    PreconditionFailed,
    RingMismatch,
)
from .exactscalar import GENERIC, Ring, ring_from_json


class Morphism:
    """
    An element of Hom(dom, cod): a sparse map from (dom, cod)-diagrams to nonzero scalars.

    ``b @ a`` is the composite "first a, then b"; ``a.tensor(b)`` places ``a`` to the left of ``b``.
    """

    __slots__ = ("dom", "cod", "ring", "terms")

    def __init__(self, dom: int, cod: int, ring: Ring = GENERIC, terms: Mapping[Diagram, object] | None = None):
        self.dom, self.cod, self.ring = dom, cod, ring
        clean = {}
        for x, c in (terms or {}).items():
            if x.top != dom or x.bot != cod:
                raise DomainMismatch(f"diagram {x} does not lie in Hom({dom},{cod})")
            c = ring.coerce(c)
            if c:
                clean[x] = clean[x] + c if x in clean else c
        self.terms = {x: c for x, c in clean.items() if c}

    @classmethod
    def _raw(cls, dom: int, cod: int, ring: Ring, terms: dict) -> Morphism:
        m = object.__new__(cls)
        m.dom, m.cod, m.ring, m.terms = dom, cod, ring, terms
        return m

    # -- constructors --------------------------------------------------------------------------------------------------

    @classmethod
    def zero(cls, dom: int, cod: int, ring: Ring = GENERIC) -> Morphism:
        return cls._raw(dom, cod, ring, {})

    @classmethod
    def from_diagram(cls, x: Diagram, ring: Ring = GENERIC, coeff=1) -> Morphism:
        return cls(x.top, x.bot, ring, {x: coeff})

    @classmethod
    def from_vector(cls, dom: int, cod: int, ring: Ring, vec: Sequence) -> Morphism:
        basis = enumerate_diagrams(dom, cod)
        if len(vec) != len(basis):
            raise DomainMismatch(f"vector of length {len(vec)} does not fit Hom({dom},{cod})")
        return cls._raw(dom, cod, ring, {x: ring.coerce(c) for x, c in zip(basis, vec) if c})

    # -- linear structure ----------------------------------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, x: Diagram):
        return self.terms.get(x, self.ring.zero())

    def _check_same_space(self, other: Morphism) -> None:
        if self.ring is not other.ring:
            raise RingMismatch(f"cannot combine morphisms over {self.ring} and {other.ring}")
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise DomainMismatch(f"Hom({self.dom},{self.cod}) vs Hom({other.dom},{other.cod})")

    def __add__(self, other: Morphism) -> Morphism:
        if not isinstance(other, Morphism):
            return NotImplemented
        self._check_same_space(other)
        terms = dict(self.terms)
        for x, c in other.terms.items():
            if x in terms:
                s = terms[x] + c
                if s:
                    terms[x] = s
                else:
                    del terms[x]
            else:
                terms[x] = c
        return Morphism._raw(self.dom, self.cod, self.ring, terms)

    def __neg__(self) -> Morphism:
        return Morphism._raw(self.dom, self.cod, self.ring, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other: Morphism) -> Morphism:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> Morphism:
        s = self.ring.coerce(s)
        if not s:
            return Morphism.zero(self.dom, self.cod, self.ring)
        return Morphism._raw(self.dom, self.cod, self.ring, {x: s * c for x, c in self.terms.items()})

    def __mul__(self, s) -> Morphism:
        if isinstance(s, Morphism):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: Morphism) -> Morphism:
        return compose(self, other)

    def tensor(self, other: Morphism) -> Morphism:
        return tensor(self, other)

    def transpose(self) -> Morphism:
        return Morphism._raw(self.cod, self.dom, self.ring, {transpose_diagram(x): c for x, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.ring is other.ring
            and self.dom == other.dom
            and self.cod == other.cod
            and self.terms == other.terms
        )

    __hash__ = None

    # -- conversions ---------------------------------------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Diagram, object]]:
        index = diagram_index(self.dom, self.cod)
        return sorted(self.terms.items(), key=lambda kv: index[kv[0]])

    def to_vector(self) -> list:
        zero = self.ring.zero()
        vec = [zero] * len(enumerate_diagrams(self.dom, self.cod))
        index = diagram_index(self.dom, self.cod)
        for x, c in self.terms.items():
            vec[index[x]] = c
        return vec

    def to_json(self) -> dict:
        return {
            "dom": self.dom,
            "cod": self.cod,
            "ring": self.ring.to_json(),
            "terms": [{"diagram": x.to_json(), "coeff": c.to_json()} for x, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict) -> Morphism:
        ring = ring_from_json(data["ring"])
        terms = {}
        for t in data["terms"]:
            x = Diagram.from_json(t["diagram"])
            terms[x] = ring.scalar_from_json(t["coeff"])
        return cls(int(data["dom"]), int(data["cod"]), ring, terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})·{list(x.match)}" for x, c in self.sorted_terms()) or "0"
        return f"Morphism({self.dom}->{self.cod}, {self.ring}: {body})"


# ---------------------------------------------------------------------------------------------------------------------
# Basic morphisms


def identity_morphism(n: int, ring: Ring = GENERIC) -> Morphism:
    return Morphism.from_diagram(identity(n), ring)


def generator_morphism(i: int, n: int, ring: Ring = GENERIC) -> Morphism:
    return Morphism.from_diagram(generator(i, n), ring)


def cap_morphism(ring: Ring = GENERIC) -> Morphism:
    return Morphism.from_diagram(cap(), ring)


def cup_morphism(ring: Ring = GENERIC) -> Morphism:
    return Morphism.from_diagram(cup(), ring)


def scalar_morphism(s, ring: Ring = GENERIC) -> Morphism:
    return Morphism(0, 0, ring, {identity(0): s})


# ---------------------------------------------------------------------------------------------------------------------
# Composition and tensor


def _check_ring(a: Morphism, b: Morphism) -> Ring:
    if a.ring is not b.ring:
        raise RingMismatch(f"cannot combine morphisms over {a.ring} and {b.ring}")
    return a.ring


def compose(b: Morphism, a: Morphism) -> Morphism:
    """The composite b∘a (a first); each diagram pair contributes d^loops times the reduced diagram."""
    ring = _check_ring(a, b)
    if a.cod != b.dom:
        raise DomainMismatch(f"cannot compose Hom({b.dom},{b.cod}) after Hom({a.dom},{a.cod})")
    grouped: dict[tuple[Diagram, int], object] = {}
    for y, cb in b.terms.items():
        for x, ca in a.terms.items():
            key = compose_diagrams(y, x)
            v = cb * ca
            grouped[key] = grouped[key] + v if key in grouped else v
    terms: dict[Diagram, object] = {}
    for (z, r), v in grouped.items():
        if r:
            v = v * ring.d_pow(r)
        terms[z] = terms[z] + v if z in terms else v
    return Morphism._raw(a.dom, b.cod, ring, {z: v for z, v in terms.items() if v})


def compose_all(*morphisms: Morphism) -> Morphism:
    """compose_all(c, b, a) = c∘b∘a."""
    return functools.reduce(compose, morphisms)


def tensor(a: Morphism, b: Morphism) -> Morphism:
    ring = _check_ring(a, b)
    terms = {}
    for x, ca in a.terms.items():
        for y, cb in b.terms.items():
            z = tensor_diagrams(x, y)
            v = ca * cb
            terms[z] = terms[z] + v if z in terms else v
    return Morphism._raw(a.dom + b.dom, a.cod + b.cod, ring, {z: v for z, v in terms.items() if v})


def tensor_power(a: Morphism, k: int) -> Morphism:
    result = identity_morphism(0, a.ring)
    for _ in range(k):
        result = tensor(result, a)
    return result


# ---------------------------------------------------------------------------------------------------------------------
# Trace and conditional expectations


def trace(a: Morphism):
    """Markov trace: close every strand, each closed loop contributes a factor d."""
    if a.dom != a.cod:
        raise DomainMismatch("trace is defined on endomorphisms only")
    total = a.ring.zero()
    for x, c in a.terms.items():
        total = total + c * a.ring.d_pow(closure_loops(x))
    return total


@functools.lru_cache(maxsize=None)
def _close_last_strand(x: Diagram) -> tuple[Diagram, int]:
    n = x.top - 1
    lower = tensor_diagrams(identity(n), cup())
    upper = tensor_diagrams(identity(n), cap())
    middle = tensor_diagrams(x, identity(1))
    y, r1 = compose_diagrams(middle, upper)
    z, r2 = compose_diagrams(lower, y)
    return z, r1 + r2


def cond_expect(a: Morphism) -> Morphism:
    """ε_n : T_{n+1} -> T_n, (1_n ⊗ ∪)∘(a ⊗ 1)∘(1_n ⊗ ∩): closes only the last strand."""
    if a.dom != a.cod or a.dom < 1:
        raise DomainMismatch("conditional expectation needs an endomorphism of n+1 >= 1 strands")
    ring = a.ring
    terms: dict[Diagram, object] = {}
    for x, c in a.terms.items():
        z, r = _close_last_strand(x)
        v = c * ring.d_pow(r) if r else c
        terms[z] = terms[z] + v if z in terms else v
    return Morphism._raw(a.dom - 1, a.dom - 1, ring, {z: v for z, v in terms.items() if v})


def cond_expect_chain(a: Morphism, n: int) -> Morphism:
    """ε_{n,k} = ε_n ∘ ε_{n+1} ∘ ... ∘ ε_{k-1} for a in T_k."""
    if a.dom != a.cod:
        raise DomainMismatch("conditional expectation needs an endomorphism")
    if not 0 <= n <= a.dom:
        raise DomainMismatch(f"cannot reduce T_{a.dom} to T_{n}")
    while a.dom > n:
        a = cond_expect(a)
    return a


# ---------------------------------------------------------------------------------------------------------------------
# Padding embeddings into T_max(dom, cod) and their left inverses


def _padding(dom: int, cod: int) -> int:
    if (dom + cod) % 2:
        raise ParityError(f"Hom({dom},{cod}) is zero: parity mismatch")
    return abs(cod - dom) // 2


def pad_embed(a: Morphism, target: int | None = None) -> Morphism:
    """
    Embed Hom(dom, cod) into T_M, M = max(dom, cod): ``a ⊗ ∪^k`` if dom < cod, ``a ⊗ ∩^k`` if dom > cod.
    """
    k = _padding(a.dom, a.cod)
    big = max(a.dom, a.cod)
    if target is not None and target != big:
        raise DomainMismatch(f"Hom({a.dom},{a.cod}) embeds into T_{big}, not T_{target}")
    if k == 0:
        return a
    pad = cup_morphism(a.ring) if a.dom < a.cod else cap_morphism(a.ring)
    return tensor(a, tensor_power(pad, k))


def pad_retract(y: Morphism, dom: int, cod: int) -> Morphism:
    """Left inverse of ``pad_embed``: maps T_M back onto Hom(dom, cod), including the d^{-k} factor."""
    k = _padding(dom, cod)
    big = max(dom, cod)
    if y.dom != big or y.cod != big:
        raise DomainMismatch(f"expected an element of T_{big}")
    if k == 0:
        return y
    ring = y.ring
    scale = ring.d_pow(k).inverse()
    if dom < cod:
        closer = tensor(identity_morphism(dom, ring), tensor_power(cap_morphism(ring), k))
        return compose(y, closer).scale(scale)
    closer = tensor(identity_morphism(cod, ring), tensor_power(cup_morphism(ring), k))
    return compose(closer, y).scale(scale)


# ---------------------------------------------------------------------------------------------------------------------
# Minimal idempotent reduction


def reduce_to_multiple(f: Morphism, p: Morphism):
    """
    For f in T_{n+m} compressed by p ⊗ 1_m (p a minimal idempotent of T_n), return γ = Tr(f) / Tr(p) after checking
    that ε_{n,n+m}(f) = γ·p.
    """
    _check_ring(f, p)
    if p.dom != p.cod or f.dom != f.cod or f.dom < p.dom:
        raise DomainMismatch("need f in T_{n+m} and p in T_n")
    n, m = p.dom, f.dom - p.dom
    if f.is_zero():
        return f.ring.zero()
    pe = tensor(p, identity_morphism(m, f.ring))
    if compose(compose(pe, f), pe) != f:
        raise PreconditionFailed("(p ⊗ 1_m)·f·(p ⊗ 1_m) != f")
    trp = trace(p)
    if not trp:
        raise DivisionByZero("Tr(p) = 0")
    gamma = trace(f) / trp
    if cond_expect_chain(f, n) != p.scale(gamma):
        raise NotMinimal("ε(f) is not a multiple of p")
    return gamma


# ---------------------------------------------------------------------------------------------------------------------
# Random morphisms


def random_morphism(
    dom: int,
    cod: int,
    ring: Ring,
    rng: random.Random,
    nterms: int | None = None,
    coeffs: Iterable[int] = (-2, -1, 0, 1, 2),
) -> Morphism:
    """A seeded pseudo-random morphism with integer coefficients; ``nterms=None`` uses every diagram."""
    basis = enumerate_diagrams(dom, cod)
    coeffs = list(coeffs)
    chosen = basis if nterms is None or nterms >= len(basis) else rng.sample(basis, nterms)
    return Morphism(dom, cod, ring, {x: rng.choice(coeffs) for x in chosen})

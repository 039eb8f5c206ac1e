"""
Gram pairings, negligible morphisms, truncated tensor ideals and the verification sweeps built on them.

Truncated ideals. The sandwiches u∘(g ⊗ 1_j)∘v with u, v diagrams are planar pictures with one box (holding g)
whose left side touches the left wall of the rectangle. Such a picture is the same thing as a diagram
Z ∈ Hom(a + m, b + n) (g ∈ Hom(a, b)): the first a top points of Z are glued to the top legs of the box (right to
left) and the first b bottom points to its bottom legs (right to left). The j strands to the right of the box are the
through strands of Z, so

    S_j = span{ Ψ_Z(g) : Z ∈ Hom(a + m, b + n), through(Z) <= j }

and S_j is constant once j reaches min(a + m, b + n). ``ideal_truncation`` walks j upward over this finite
generating set, records the dimension at each j, and reports where the sequence stabilizes.
"""
from __future__ import annotations

import concurrent.futures
import dataclasses
import os
import random
from collections import defaultdict

from .diagram import Diagram, diagram_index, enumerate_diagrams, hom_dimension
from .errors import (
    BadParameter,
    DomainMismatch,
    ParityError,
    PreconditionFailed,
    VerificationFailed,
    NotStabilized,
)
from .exactscalar import GENERIC, Cyclo, Ring
from .linalg import Subspace, exact_rank, generic_rank_certificate, kernel_basis
from .morphism import (
    Morphism,
    compose,
    identity_morphism,
    pad_embed,
    pad_retract,
    random_morphism,
    tensor,
    trace,
)

# ---------------------------------------------------------------------------------------------------------------------
# Gram pairing


def _as_ring(ring_or_ell) -> Ring:
    if isinstance(ring_or_ell, Ring):
        return ring_or_ell
    if ring_or_ell is None or ring_or_ell == "generic":
        return GENERIC
    return Cyclo(int(ring_or_ell))


def pairing_loops(x: Diagram, y: Diagram) -> int:
    """Number of closed loops of Tr(transpose(x) ∘ y): cycles of the union of the two matchings."""
    if (x.top, x.bot) != (y.top, y.bot):
        raise DomainMismatch("pairing needs diagrams in the same Hom space")
    size = x.top + x.bot
    seen = [False] * size
    loops = 0
    xm, ym = x.match, y.match
    for s in range(size):
        if seen[s]:
            continue
        loops += 1
        i = s
        while not seen[i]:
            seen[i] = True
            j = xm[i]
            seen[j] = True
            i = ym[j]
    return loops


@dataclasses.dataclass
class GramMatrix:
    """entry[i][j] = Tr(transpose(x_i) ∘ x_j) = d^{loops[i][j]} over the diagram basis x_0, x_1, ... of Hom(m, n)."""

    m: int
    n: int
    ring: Ring
    loops: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.loops)

    @property
    def entries(self) -> list[list]:
        return [[self.ring.d_pow(e) for e in row] for row in self.loops]

    def rank(self) -> int:
        return exact_rank(self.entries, self.ring)

    def to_json(self, with_entries: bool = True) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "ring": self.ring.to_json(),
            "size": self.size,
            "basis": [x.to_json() for x in enumerate_diagrams(self.m, self.n)],
            "loop_exponents": self.loops,
        }
        if with_entries:
            out["entries"] = [[c.to_json() for c in row] for row in self.entries]
        return out


def gram_matrix(m: int, n: int, ring=GENERIC) -> GramMatrix:
    if (m + n) % 2:
        raise ParityError(f"Hom({m},{n}) is zero: m + n is odd")
    basis = enumerate_diagrams(m, n)
    size = len(basis)
    loops = [[0] * size for _ in range(size)]
    for i, x in enumerate(basis):
        for j in range(i, size):
            loops[i][j] = loops[j][i] = pairing_loops(x, basis[j])
    return GramMatrix(m, n, _as_ring(ring), loops)


def negligible_basis(m: int, n: int, ring=GENERIC) -> Subspace:
    """Neg(m, n): the kernel of the Gram pairing on Hom(m, n), as a canonical echelon subspace."""
    g = gram_matrix(m, n, ring)
    return kernel_basis(g.entries, g.ring, ambient=(m, n))


def certify_generic_gram(m: int, n: int, seed: int = 0, points: int = 2) -> dict:
    """Full-rank certificate for the generic Gram matrix from ranks at seeded rational values of t."""
    g = gram_matrix(m, n, GENERIC)
    ranks = generic_rank_certificate(g.entries, seed, points)
    return {"m": m, "n": n, "size": g.size, "ranks": ranks, "full_rank": max(ranks) == g.size, "seed": seed}


# ---------------------------------------------------------------------------------------------------------------------
# Truncated ideals


_glue_cache: dict[tuple[Diagram, Diagram], tuple[Diagram, int]] = {}


def wall_glue(z: Diagram, x: Diagram) -> tuple[Diagram, int]:
    """
    Glue the box diagram x ∈ Hom(a, b) into Z ∈ Hom(a + m, b + n) (box on the left wall); returns the resulting
    (m, n)-diagram and the number of closed loops.
    """
    key = (z, x)
    hit = _glue_cache.get(key)
    if hit is not None:
        return hit
    a, b = x.top, x.bot
    m, n = z.top - a, z.bot - b
    if m < 0 or n < 0:
        raise DomainMismatch("box does not fit into the tangle")
    zt = z.top

    def inner(p: int) -> bool:
        return p < a or zt <= p < zt + b

    def through_box(p: int) -> int:
        i = a - 1 - p if p < a else a + (b - 1 - (p - zt))
        i2 = x.match[i]
        return a - 1 - i2 if i2 < a else zt + (b - 1 - (i2 - a))

    def outer_index(p: int) -> int:
        return p - a if p < zt else m + (p - zt - b)

    zm = z.match
    seen = [False] * (zt + z.bot)
    out = [-1] * (m + n)
    for s in range(zt + z.bot):
        if inner(s) or out[outer_index(s)] >= 0:
            continue
        p = zm[s]
        while inner(p):
            seen[p] = True
            q = through_box(p)
            seen[q] = True
            p = zm[q]
        i, j = outer_index(s), outer_index(p)
        out[i], out[j] = j, i
    loops = 0
    for s in range(zt + z.bot):
        if not inner(s) or seen[s]:
            continue
        loops += 1
        p = s
        while not seen[p]:
            seen[p] = True
            q = through_box(p)
            seen[q] = True
            p = zm[q]
    result = (Diagram(m, n, out), loops)
    _glue_cache[key] = result
    return result


def wall_tangle(z: Diagram, g: Morphism) -> Morphism:
    """Ψ_Z(g): the morphism obtained by placing g in the box of the tangle Z."""
    ring = g.ring
    m, n = z.top - g.dom, z.bot - g.cod
    terms: dict[Diagram, object] = {}
    for x, c in g.terms.items():
        y, r = wall_glue(z, x)
        v = c * ring.d_pow(r) if r else c
        terms[y] = terms[y] + v if y in terms else v
    return Morphism._raw(m, n, ring, {y: v for y, v in terms.items() if v})


def sandwich(u: Diagram, g: Morphism, j: int, v: Diagram) -> Morphism:
    """The literal sandwich u ∘ (g ⊗ 1_j) ∘ v."""
    ring = g.ring
    mid = tensor(g, identity_morphism(j, ring))
    return compose(Morphism.from_diagram(u, ring), compose(mid, Morphism.from_diagram(v, ring)))


@dataclasses.dataclass
class TruncationReport:
    m: int
    n: int
    subspace: Subspace
    dims_by_j: dict[int, int]
    stabilized_at: int
    complete: bool

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "dim": self.subspace.dim,
            "dims_by_j": {str(j): d for j, d in sorted(self.dims_by_j.items())},
            "stabilized_at": self.stabilized_at,
            "complete": self.complete,
        }


def _row_key(vec: dict) -> tuple:
    return tuple(sorted((j, hash(c)) for j, c in vec.items()))


def ideal_truncation_report(
    g: Morphism, m: int, n: int, j_max: int | None = None, strict: bool = True
) -> TruncationReport:
    """
    Spans the wall tangles of g with at most j through strands, j = j0, j0 + 2, ... With ``strict`` a cap that stops
    while the dimension is still growing raises NotStabilized; without it the partial span S_{j_max} is returned.
    """
    a, b = g.dom, g.cod
    if (m + n) % 2 or (a + m + b + n) % 2:
        raise ParityError(f"no sandwich of Hom({a},{b}) lands in Hom({m},{n})")
    ring = g.ring
    ncols = hom_dimension(m, n)
    index = diagram_index(m, n)
    by_through: dict[int, list[Diagram]] = defaultdict(list)
    for z in enumerate_diagrams(a + m, b + n):
        by_through[z.through_strands()].append(z)
    j_top = min(a + m, b + n)
    j0 = (a + m) % 2
    last = j_top if j_max is None else min(j_max, j_top)

    space = Subspace.zero(ring, ncols, ambient=(m, n))
    seen: set[tuple] = set()
    dims: dict[int, int] = {}
    for j in range(j0, last + 1, 2):
        rows = []
        for z in by_through.get(j, ()):
            t = wall_tangle(z, g)
            if t.is_zero():
                continue
            vec = {index[y]: c for y, c in t.terms.items()}
            key = _row_key(vec)
            if key in seen:
                continue
            seen.add(key)
            rows.append(vec)
        if rows:
            space = space + Subspace.span(rows, ring, ncols, ambient=(m, n))
        dims[j] = space.dim
    complete = last == j_top
    if complete:
        # no tangle has more than j_top through strands, so the next admissible j adds nothing
        dims[j_top + 2] = space.dim
    elif strict and (len(dims) < 2 or dims[last] != dims.get(last - 2)):
        raise NotStabilized(f"ideal dimension in Hom({m},{n}) still growing at j = {last}: {dims}")
    final = space.dim
    stabilized = min(j for j, d in dims.items() if d == final)
    return TruncationReport(m, n, space, dims, stabilized, complete)


def ideal_truncation(g: Morphism, m: int, n: int, j_max: int | None = None) -> Subspace:
    """
    J ∩ Hom(m, n) for the tensor ideal J generated by g, computed as the span of all u∘(g ⊗ 1_j)∘v (u, v diagrams)
    for j up to stabilization.
    """
    return ideal_truncation_report(g, m, n, j_max).subspace


def brute_force_truncation(g: Morphism, m: int, n: int, j: int) -> Subspace:
    """S_j by literally composing u∘(g ⊗ 1_j)∘v over every pair of diagrams (small cases only)."""
    ring = g.ring
    index = diagram_index(m, n)
    rows = []
    for v in enumerate_diagrams(m, g.dom + j):
        for u in enumerate_diagrams(g.cod + j, n):
            s = sandwich(u, g, j, v)
            rows.append({index[y]: c for y, c in s.terms.items()})
    return Subspace.span(rows, ring, hom_dimension(m, n), ambient=(m, n))


# ---------------------------------------------------------------------------------------------------------------------
# Verification sweeps


def _jw_at(ell: int) -> Morphism:
    from .rootspec import evaluate_morphism
    from .tower import jones_wenzl

    return evaluate_morphism(jones_wenzl(ell - 1), ell)


def _cell_seed(seed: int, m: int, n: int) -> int:
    return seed * 1_000_003 + m * 1009 + n


def _vector(a: Morphism) -> dict:
    index = diagram_index(a.dom, a.cod)
    return {index[x]: c for x, c in a.terms.items()}


def padding_certificate(small: Subspace, big: Subspace) -> bool:
    """embed(J(m, n)) ⊆ J(M, M) and retract(J(M, M)) ⊆ J(m, n), M = max(m, n)."""
    m, n = small.ambient
    for a in small.morphisms():
        if not big.contains(_vector(pad_embed(a))):
            return False
    for y in big.morphisms():
        if not small.contains(_vector(pad_retract(y, m, n))):
            return False
    return True


def find_partner(a: Morphism) -> Diagram | None:
    """A diagram b ∈ Hom(cod, dom) with Tr(b ∘ a) != 0, or None if a is negligible."""
    ring = a.ring
    for b in enumerate_diagrams(a.cod, a.dom):
        if trace(compose(Morphism.from_diagram(b, ring), a)):
            return b
    return None


def _random_in(space: Subspace, rng: random.Random) -> Morphism:
    m, n = space.ambient
    ring = space.ring
    total = Morphism.zero(m, n, ring)
    for row in space.morphisms():
        c = rng.choice((-2, -1, 1, 2))
        total = total + row.scale(ring.coerce(c))
    return total


def _random_diagram(m: int, n: int, rng: random.Random) -> Diagram:
    return rng.choice(enumerate_diagrams(m, n))


def _uniqueness_samples(neg: Subspace, rng: random.Random, samples: int) -> tuple[int, Morphism | None]:
    """Random non-negligible a: each must have a partner diagram b with Tr(b∘a) != 0."""
    m, n = neg.ambient
    done = 0
    for _ in range(samples * 4):
        if done == samples:
            break
        a = random_morphism(m, n, neg.ring, rng)
        if a.is_zero() or neg.contains(_vector(a)):
            continue
        done += 1
        if find_partner(a) is None:
            return done, a
    return done, None


def _closure_samples(
    neg: Subspace, ell: int, N: int, rng: random.Random, samples: int, products: int, neg_of
) -> Morphism | None:
    """Random negligible a: random sandwiches u∘(a ⊗ 1_j)∘v must stay negligible."""
    if neg.dim == 0:
        return None
    m, n = neg.ambient
    for _ in range(samples):
        a = _random_in(neg, rng)
        for _ in range(products):
            j = rng.randint(0, 2)
            top = m + j
            bottom = n + j
            p = rng.choice([q for q in range(0, N + 1) if (q + top) % 2 == 0])
            r = rng.choice([q for q in range(0, N + 1) if (q + bottom) % 2 == 0])
            v = _random_diagram(p, top, rng)
            u = _random_diagram(bottom, r, rng)
            s = sandwich(u, a, j, v)
            if not neg_of(p, r).contains(_vector(s)):
                return s
    return None


def verify_cell(
    ell: int,
    m: int,
    n: int,
    N: int,
    seed: int = 0,
    samples: int = 0,
    closure_samples: int = 0,
    products: int = 0,
    generator: Morphism | None = None,
) -> dict:
    """One (m, n) cell of the main-theorem sweep."""
    ring = Cyclo(ell)
    g = generator if generator is not None else _jw_at(ell)
    neg = negligible_basis(m, n, ring)
    trunc = ideal_truncation_report(g, m, n)
    ideal = trunc.subspace
    equal = ideal.issubset(neg) and neg.issubset(ideal)
    cell_seed = _cell_seed(seed, m, n)
    rng = random.Random(cell_seed)
    counterexample = None
    sampled, bad = _uniqueness_samples(neg, rng, samples) if samples else (0, None)
    if bad is not None:
        counterexample = bad
    neg_cache: dict[tuple[int, int], Subspace] = {(m, n): neg}

    def neg_of(p: int, r: int) -> Subspace:
        if (p, r) not in neg_cache:
            neg_cache[(p, r)] = negligible_basis(p, r, ring)
        return neg_cache[(p, r)]

    if closure_samples and counterexample is None:
        counterexample = _closure_samples(neg, ell, N, rng, closure_samples, products, neg_of)
    return {
        "m": m,
        "n": n,
        "neg_dim": neg.dim,
        "ideal_dim": ideal.dim,
        "equal": equal and counterexample is None,
        "seed": cell_seed,
        "stabilized_at": trunc.stabilized_at,
        "samples": sampled,
        "_counterexample": counterexample,
        "_ideal": ideal,
    }


def _cell_worker(args):
    ell, m, n, N, seed, samples, closure, products, certify = args
    out = verify_cell(ell, m, n, N, seed, samples, closure, products)
    ideal = out.pop("_ideal")
    big = max(m, n)
    if certify and m != n and big <= N:
        ok = padding_certificate(ideal, ideal_truncation(_jw_at(ell), big, big))
        out["padding_closed"] = ok
        if not ok:
            out["equal"] = False
    ce = out.pop("_counterexample")
    out["_counterexample"] = None if ce is None else ce.to_json()
    return out


def _default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _sweep(ell: int, cells: list[tuple[int, int]], N: int, seed: int, samples: int, closure: int, products: int,
           jobs: int | None, certify_padding: bool) -> tuple[list[dict], list]:
    jobs = _default_jobs() if jobs is None else max(1, jobs)
    tasks = [(ell, m, n, N, seed, samples, closure, products) for m, n in cells]
    failures = []
    if jobs == 1 or len(tasks) == 1:
        results = [verify_cell(*t) for t in tasks]
        ideals = {(r["m"], r["n"]): r.pop("_ideal") for r in results}
        for r in results:
            ce = r.pop("_counterexample")
            r["_counterexample"] = None if ce is None else ce.to_json()
        if certify_padding:
            for r in results:
                m, n = r["m"], r["n"]
                big = max(m, n)
                if (big, big) in ideals and m != n:
                    ok = padding_certificate(ideals[(m, n)], ideals[(big, big)])
                    r["padding_closed"] = ok
                    if not ok:
                        r["equal"] = False
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            # each worker certifies its own padding against a recomputed J(M, M)
            results = list(pool.map(_cell_worker, [t + (certify_padding,) for t in tasks]))
    for r in results:
        ce = r.pop("_counterexample")
        if not r["equal"]:
            failures.append((r, ce))
    return results, failures


def verify_main_theorem(
    ell: int,
    N: int,
    seed: int = 0,
    samples: int = 2,
    closure_samples: int = 2,
    products: int = 5,
    jobs: int | None = 1,
    certify_padding: bool = True,
    raise_on_fail: bool = True,
) -> dict:
    """
    For every cell m, n <= N with m + n even: the truncated ideal generated by JW_{ell-1}(tau) equals Neg(m, n) by
    double inclusion, sampled non-negligible morphisms have a trace partner, and sampled negligible morphisms stay
    negligible under random sandwiches.
    """
    if ell < 3:
        raise BadParameter("ell must be >= 3")
    if N < ell - 1:
        raise PreconditionFailed(f"N must be at least ell - 1 = {ell - 1}")
    cells = [(m, n) for m in range(N + 1) for n in range(N + 1) if (m + n) % 2 == 0]
    results, failures = _sweep(ell, cells, N, seed, samples, closure_samples, products, jobs, certify_padding)
    report = {"ell": ell, "N": N, "cells": results, "verdict": "FAIL" if failures else "PASS"}
    if failures and raise_on_fail:
        cell, ce = failures[0]
        exc = VerificationFailed(f"cell ({cell['m']},{cell['n']}) failed", counterexample=ce)
        exc.report = report
        raise exc
    return report


def verify_even_subcategory(
    ell: int,
    N: int,
    seed: int = 0,
    samples: int = 2,
    closure_samples: int = 0,
    products: int = 0,
    jobs: int | None = 1,
    raise_on_fail: bool = True,
) -> dict:
    """The same sweep restricted to even objects; for odd ell the generator JW_{ell-1}(tau) is itself even."""
    if ell % 2 == 0:
        raise PreconditionFailed("the even subcategory statement needs ell odd")
    if ell < 3:
        raise BadParameter("ell must be >= 3")
    cells = [(m, n) for m in range(0, N + 1, 2) for n in range(0, N + 1, 2)]
    results, failures = _sweep(ell, cells, N, seed, samples, closure_samples, products, jobs, True)
    report = {"ell": ell, "N": N, "even_only": True, "cells": results, "verdict": "FAIL" if failures else "PASS"}
    if failures and raise_on_fail:
        cell, ce = failures[0]
        exc = VerificationFailed(f"cell ({cell['m']},{cell['n']}) failed", counterexample=ce)
        exc.report = report
        raise exc
    return report


def generic_sweep(N: int) -> dict:
    """Generic parameter: Neg(m, n) = 0 in every cell m, n <= N."""
    cells = []
    for m in range(N + 1):
        for n in range(N + 1):
            if (m + n) % 2 == 0:
                neg = negligible_basis(m, n, GENERIC)
                cells.append({"m": m, "n": n, "neg_dim": neg.dim})
    return {"ring": "generic", "N": N, "cells": cells, "verdict": "PASS" if all(c["neg_dim"] == 0 for c in cells)
            else "FAIL"}


# ---------------------------------------------------------------------------------------------------------------------
# Constancy of dimension


def compressed_dim(e: Morphism, f: Morphism, diagrams, m: int, n: int) -> int:
    """dim span{ e ∘ x ∘ f : x in diagrams } for x ∈ Hom(m, n), e ∈ T_n, f ∈ T_m."""
    if e.dom != n or f.cod != m:
        raise DomainMismatch("need e in T_n and f in T_m")
    ring = e.ring
    index = diagram_index(m, n)
    ncols = hom_dimension(m, n)
    rows = []
    for x in diagrams:
        y = compose(e, compose(Morphism.from_diagram(x, ring), f))
        dense = [ring.zero()] * ncols
        for z, c in y.terms.items():
            dense[index[z]] = c
        rows.append(dense)
    if not rows:
        return 0
    return exact_rank(rows, ring)


def constancy_check(e: Morphism, f: Morphism, diagrams, ell: int, raise_on_fail: bool = True) -> dict:
    """dim over Q(t) of e A f equals dim over Q(tau) of e(tau) A(tau) f(tau)."""
    from .rootspec import evaluate_morphism

    if not (e.ring.is_generic and f.ring.is_generic):
        raise PreconditionFailed("e and f must be generic (evaluable) idempotents")
    diagrams = list(diagrams)
    m, n = f.dom, e.dom
    for x in diagrams:
        if (x.top, x.bot) != (m, n):
            raise DomainMismatch(f"diagram {x} is not in Hom({m},{n})")
    for p in (e, f):
        if compose(p, p) != p:
            raise PreconditionFailed("e and f must be idempotents")
    e_t, f_t = evaluate_morphism(e, ell), evaluate_morphism(f, ell)
    generic = compressed_dim(e, f, diagrams, m, n)
    special = compressed_dim(e_t, f_t, diagrams, m, n)
    report = {"ell": ell, "m": m, "n": n, "diagrams": len(diagrams), "generic_dim": generic,
              "specialized_dim": special, "equal": generic == special}
    if generic != special and raise_on_fail:
        raise VerificationFailed(f"dimension drops from {generic} to {special}", counterexample=report)
    return report

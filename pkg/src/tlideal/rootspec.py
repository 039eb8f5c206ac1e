"""
Structure of the tower at a root of unity tau = exp(i pi / ell).

A two-row diagram is critical when its width is divisible by ell; critical lines sit at widths m*ell. Every path in
the Bratteli diagram is assigned to one block:

* if the endpoint is critical, to the central idempotent of that endpoint;
* if the path never touches a critical line, to its endpoint (necessarily left of the first line);
* otherwise look at the last critical line m*ell the path touches. If the endpoint lies to the right of it the block
  is the endpoint; if it lies to the left, the block is the reflection of the endpoint in that line.

Summing the path idempotents of a block gives an idempotent with no pole at tau.
"""
from __future__ import annotations

import dataclasses
from collections import defaultdict

from .errors import BadParameter, CriticalDiagram, NoPartner, NotEvaluable
from .exactscalar import Cyclo, specialize
from .morphism import Morphism, identity_morphism
from .tower import (
    BratteliPath,
    IdempotentCache,
    YoungDiagram,
    diagrams_of_size,
    path_idempotent,
    paths_of_length,
)


def _check_ell(ell: int) -> None:
    if not isinstance(ell, int) or ell < 3:
        raise BadParameter(f"ell must be an integer >= 3, got {ell!r}")


@dataclasses.dataclass(frozen=True)
class CriticalGeometry:
    diagram: YoungDiagram
    ell: int
    width: int
    is_critical: bool
    nearest_left_line: int | None  # m with m*ell < width nearest to it; None left of the first line

    def partner(self, m: int) -> YoungDiagram:
        """Reflection of the diagram in the critical line m*ell, when it is a valid non-critical diagram."""
        return reflect(self.diagram, self.ell, m)

    def to_json(self) -> dict:
        return {
            "lambda": [self.diagram.l1, self.diagram.l2],
            "ell": self.ell,
            "width": self.width,
            "is_critical": self.is_critical,
            "nearest_left_line": self.nearest_left_line,
        }


def critical_geometry(lam: YoungDiagram, ell: int) -> CriticalGeometry:
    _check_ell(ell)
    w = lam.width
    critical = w % ell == 0
    if critical:
        left = w // ell - 1 or None
    else:
        left = w // ell or None
    return CriticalGeometry(lam, ell, w, critical, left)


def reflect(lam: YoungDiagram, ell: int, m: int) -> YoungDiagram:
    """The diagram of the same size whose width is 2*m*ell - w(λ)."""
    _check_ell(ell)
    w = lam.width
    if m < 1:
        raise NoPartner(f"there is no critical line with index {m}")
    if w % ell == 0:
        raise NoPartner(f"{lam} is critical for ell={ell}")
    if abs(w - m * ell) >= ell:
        raise NoPartner(f"{lam} is not adjacent to the critical line {m * ell}")
    w2 = 2 * m * ell - w
    n = lam.size
    if w2 < 1 or w2 > n + 1:
        raise NoPartner(f"the reflection of {lam} in the line {m * ell} is not a diagram of size {n}")
    return YoungDiagram.from_width(n, w2)


def path_block(path: BratteliPath, ell: int) -> tuple[str, YoungDiagram]:
    """("critical", λ) or ("left", λ): the block whose idempotent contains p_path."""
    _check_ell(ell)
    ws = path.widths
    n = path.length
    w = ws[-1]
    if w % ell == 0:
        return "critical", path.endpoint
    hits = [x for x in ws if x % ell == 0]
    if not hits:
        return "left", path.endpoint
    line = hits[-1]
    if w > line:
        return "left", path.endpoint
    return "left", YoungDiagram.from_width(n, 2 * line - w)


def block_paths(n: int, ell: int) -> dict[tuple[str, YoungDiagram], list[BratteliPath]]:
    out: dict[tuple[str, YoungDiagram], list[BratteliPath]] = defaultdict(list)
    for t in paths_of_length(n):
        out[path_block(t, ell)].append(t)
    return dict(out)


def _sum_paths(n: int, paths: list[BratteliPath], cache: IdempotentCache | None) -> Morphism:
    total = Morphism.zero(n, n)
    for t in paths:
        total = total + path_idempotent(t, cache=cache)
    return total


def z_left(lam: YoungDiagram, ell: int, cache: IdempotentCache | None = None) -> Morphism:
    """The generic idempotent z_λ^L for a non-critical λ; it has no pole at tau."""
    geo = critical_geometry(lam, ell)
    if geo.is_critical:
        raise CriticalDiagram(f"{lam} is critical for ell={ell}")
    n = lam.size
    owned = block_paths(n, ell).get(("left", lam), [])
    return _sum_paths(n, owned, cache)


def z_critical(lam: YoungDiagram, ell: int, cache: IdempotentCache | None = None) -> Morphism:
    """The generic central idempotent z_λ of a critical λ (also evaluable at tau)."""
    if not critical_geometry(lam, ell).is_critical:
        raise BadParameter(f"{lam} is not critical for ell={ell}")
    n = lam.size
    return _sum_paths(n, block_paths(n, ell).get(("critical", lam), []), cache)


def z_reg_nil(n: int, ell: int, cache: IdempotentCache | None = None) -> tuple[Morphism, Morphism]:
    """(z_reg, z_nil) in T_n: z_reg sums the paths staying strictly left of the first critical line."""
    _check_ell(ell)
    regular = [t for t in paths_of_length(n) if max(t.widths) < ell]
    z_reg = _sum_paths(n, regular, cache)
    return z_reg, identity_morphism(n) - z_reg


def evaluate_morphism(a: Morphism, ell: int) -> Morphism:
    """Coefficient-wise evaluation at tau; NotEvaluable names the first offending diagram."""
    if not a.ring.is_generic:
        if a.ring.ell == ell:
            return a
        raise BadParameter(f"cannot evaluate a morphism over {a.ring} at ell={ell}")
    ring = Cyclo(ell)
    terms = {}
    for x, c in a.sorted_terms():
        try:
            v = specialize(c, ell)
        except NotEvaluable as exc:
            raise NotEvaluable(f"coefficient of {x} is not evaluable: {exc}", diagram=x) from None
        if v:
            terms[x] = v
    return Morphism._raw(a.dom, a.cod, ring, terms)


def is_evaluable_morphism(a: Morphism, ell: int) -> bool:
    try:
        evaluate_morphism(a, ell)
    except NotEvaluable:
        return False
    return True


def block_report(n: int, ell: int, cache: IdempotentCache | None = None, check: bool = True) -> dict:
    """JSON-ready list of the blocks of T_n at ell, in order of increasing width."""
    _check_ell(ell)
    groups = block_paths(n, ell)
    blocks = []
    for lam in diagrams_of_size(n):
        kind = "critical" if lam.width % ell == 0 else "left"
        paths = groups.get((kind, lam), [])
        entry = {"lambda": [lam.l1, lam.l2], "kind": kind, "path_count": len(paths)}
        if check:
            entry["evaluable"] = is_evaluable_morphism(_sum_paths(n, paths, cache), ell)
        blocks.append(entry)
    return {"n": n, "ell": ell, "blocks": blocks}

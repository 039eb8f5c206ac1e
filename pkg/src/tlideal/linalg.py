"""
Exact linear algebra over Q(t) and over Q(tau) = Q[t]/Phi_{2 ell}.

Two independent routes are provided and cross-checked in the tests:

* a fast route: vectors over Q(tau) are expanded over Q (the span of tau^i * v, 0 <= i < D, D = phi(2 ell)) and
  row-reduced with flint's ``fmpq_mat.rref``. The K-rank is the Q-rank divided by D and the K-echelon rows are the
  Q-echelon rows whose pivot sits at the tau^0 slot of a column. When every entry is rational the expansion is
  skipped altogether. Generic ranks use a fraction-free (Bareiss) elimination over Z[t].
* a plain route: Gauss-Jordan elimination written against the field operations of the scalar type.

Subspaces are stored by their reduced row echelon basis, which is canonical.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import DomainMismatch, RingMismatch
from .exactscalar import GENERIC, CycloScalar, Ring, Scalar, _cyclotomic, _to_fmpq

# ---------------------------------------------------------------------------------------------------------------------
# Plain route


def gauss_jordan(rows: Sequence[Sequence], zero) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field; pivots are chosen as the first nonzero entry in order."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c] if not hasattr(mat[r][c], "inverse") else mat[r][c].inverse()
        mat[r] = [x * inv if x else zero for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b if b else a for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def gauss_jordan_kernel(rows: Sequence[Sequence], zero, one) -> list[list]:
    """Right kernel basis (one vector per free column) from the reduced echelon form."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = gauss_jordan(rows, zero)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------------------------------------------------
# Fraction-free elimination over Z[t]


def bareiss_rank(mat: Sequence[Sequence[flint.fmpz_poly]]) -> int:
    """Rank of a matrix over Z[t] by one-step fraction-free elimination (every division is exact)."""
    a = [list(r) for r in mat]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = flint.fmpz_poly([1])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) // prev
            row_i[c] = flint.fmpz_poly([])
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def _scalar_rows_to_zpoly(rows: Sequence[Sequence[Scalar]]) -> list[list[flint.fmpz_poly]]:
    """Scale each row of a Q(t) matrix by a nonzero element so that it lands in Z[t]."""
    out = []
    for row in rows:
        den = flint.fmpq_poly([1])
        for x in row:
            if x and x._den.degree() > 0:
                den = den * (x._den // den.gcd(x._den))
        low = min((x._shift for x in row if x), default=0)
        polys = []
        for x in row:
            if not x:
                polys.append(flint.fmpq_poly([]))
                continue
            p = (x._num * den) // x._den
            polys.append(p.left_shift(x._shift - low))
        common = 1
        for p in polys:
            for c in p.coeffs():
                q = flint.fmpq(c).q
                common = common * q // _gcd(common, q)
        out.append([flint.fmpz_poly([int(c * common) for c in p.coeffs()]) for p in polys])
    return out


def _gcd(a, b) -> int:
    a, b = int(a), int(b)
    while b:
        a, b = b, a % b
    return abs(a)


def evaluate_scalar(x: Scalar, t0) -> flint.fmpq:
    """x(t0) for a rational t0 that is not a pole."""
    t0 = _to_fmpq(t0)
    return x._num(t0) / x._den(t0) * t0 ** x._shift


def generic_rank_certificate(rows: Sequence[Sequence[Scalar]], seed: int, points: int = 2) -> list[int]:
    """
    Ranks of the matrix specialized at ``points`` seeded random rational values of t. Specialization cannot increase
    rank, so any value equal to the number of columns certifies full generic rank.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(points):
        t0 = Fraction(rng.randint(2, 97), rng.randint(1, 97))
        nr, nc = len(rows), len(rows[0]) if rows else 0
        m = flint.fmpq_mat(nr, nc, [evaluate_scalar(x, t0) for row in rows for x in row])
        out.append(m.rank())
    return out


# ---------------------------------------------------------------------------------------------------------------------
# Fast route over Q(tau)


def _is_rational(c: CycloScalar) -> bool:
    return c._poly.degree() <= 0


class _Expander:
    """Q-expansion of vectors over Q(tau): column j becomes the D columns (j, 0..D-1)."""

    def __init__(self, ell: int):
        self.ell = ell
        self.phi = _cyclotomic(2 * ell)
        self.D = self.phi.degree()

    def coeff_vectors(self, c: CycloScalar) -> list[list]:
        """Coefficient vectors of tau^k * c for k = 0..D-1."""
        D = self.D
        out = []
        p = c._poly
        for _ in range(D):
            cs = p.coeffs()
            out.append(cs + [0] * (D - len(cs)))
            p = p.left_shift(1) % self.phi
        return out

    def expand(self, rows: Iterable[dict[int, CycloScalar]], ncols: int) -> list:
        D = self.D
        width = ncols * D
        flat: list = []
        for row in rows:
            block = [[0] * width for _ in range(D)]
            for j, c in row.items():
                for k, vec in enumerate(self.coeff_vectors(c)):
                    block[k][j * D:(j + 1) * D] = vec
            for b in block:
                flat.extend(b)
        return flat

    def contract(self, qrow: Sequence, ncols: int) -> list[CycloScalar]:
        D = self.D
        return [CycloScalar._raw(self.ell, flint.fmpq_poly(list(qrow[j * D:(j + 1) * D]))) for j in range(ncols)]


def _rref_flat(flat: list, nrows: int, ncols: int) -> tuple[list, int]:
    if nrows == 0:
        return [], 0
    m = flint.fmpq_mat(nrows, ncols, flat)
    red, rank = m.rref()
    return red.entries()[: rank * ncols], rank


def _first_nonzero(row: Sequence) -> int:
    for i, x in enumerate(row):
        if x != 0:
            return i
    return -1


def cyclo_rref(
    rows: Iterable[dict[int, CycloScalar]],
    ncols: int,
    ell: int,
    basis: list[dict[int, CycloScalar]] | None = None,
    chunk: int = 256,
) -> list[dict[int, CycloScalar]]:
    """
    Reduced row echelon basis (as sparse rows) of the Q(tau)-span of ``basis`` and ``rows``. Rows are consumed in
    chunks so memory stays bounded by the ambient dimension.
    """
    exp = _Expander(ell)
    current = list(basis or [])
    pending: list[dict[int, CycloScalar]] = []

    def flush():
        nonlocal current, pending
        if not pending:
            return
        block = current + pending
        pending = []
        if all(_is_rational(c) for r in block for c in r.values()):
            flat = []
            for r in block:
                dense = [0] * ncols
                for j, c in r.items():
                    dense[j] = c._poly[0]
                flat.extend(dense)
            red, rank = _rref_flat(flat, len(block), ncols)
            current = []
            for i in range(rank):
                qrow = red[i * ncols:(i + 1) * ncols]
                current.append(
                    {j: CycloScalar._raw(ell, flint.fmpq_poly([x])) for j, x in enumerate(qrow) if x != 0}
                )
            return
        D = exp.D
        width = ncols * D
        red, rank = _rref_flat(exp.expand(block, ncols), len(block) * D, width)
        current = []
        for i in range(rank):
            qrow = red[i * width:(i + 1) * width]
            if _first_nonzero(qrow) % D == 0:
                dense = exp.contract(qrow, ncols)
                current.append({j: c for j, c in enumerate(dense) if c})

    for r in rows:
        if r:
            pending.append(r)
            if len(pending) >= chunk:
                flush()
                if len(current) == ncols:
                    pending = []
                    return current
    flush()
    return current


# ---------------------------------------------------------------------------------------------------------------------
# Subspaces


def _sparse(vec, ring: Ring) -> dict:
    if isinstance(vec, dict):
        return {j: ring.coerce(c) for j, c in vec.items() if c}
    return {j: ring.coerce(c) for j, c in enumerate(vec) if c}


def _pivot(row: dict) -> int:
    return min(row)


class Subspace:
    """
    A subspace of K^ncols (K = Q(t) or Q(tau)) stored by its reduced row echelon basis. ``ambient`` optionally records
    the Hom space (m, n) whose diagram basis indexes the coordinates.
    """

    __slots__ = ("ring", "ncols", "rows", "ambient")

    def __init__(self, ring: Ring, ncols: int, rows: list[dict], ambient: tuple[int, int] | None = None):
        self.ring, self.ncols, self.ambient = ring, ncols, ambient
        self.rows = sorted(rows, key=_pivot)

    @classmethod
    def span(cls, vectors: Iterable, ring: Ring, ncols: int, ambient=None, chunk: int = 256) -> Subspace:
        sparse = (_sparse(v, ring) for v in vectors)
        if ring.is_generic:
            dense = []
            for s in sparse:
                if s:
                    row = [ring.zero()] * ncols
                    for j, c in s.items():
                        row[j] = c
                    dense.append(row)
            red, _ = gauss_jordan(dense, ring.zero())
            return cls(ring, ncols, [{j: c for j, c in enumerate(r) if c} for r in red], ambient)
        return cls(ring, ncols, cyclo_rref(sparse, ncols, ring.ell, chunk=chunk), ambient)

    @classmethod
    def zero(cls, ring: Ring, ncols: int, ambient=None) -> Subspace:
        return cls(ring, ncols, [], ambient)

    @classmethod
    def full(cls, ring: Ring, ncols: int, ambient=None) -> Subspace:
        return cls(ring, ncols, [{j: ring.one()} for j in range(ncols)], ambient)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return [_pivot(r) for r in self.rows]

    def dense_rows(self) -> list[list]:
        out = []
        for r in self.rows:
            row = [self.ring.zero()] * self.ncols
            for j, c in r.items():
                row[j] = c
            out.append(row)
        return out

    def _check(self, other: Subspace) -> None:
        if self.ring is not other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.ncols != other.ncols:
            raise DomainMismatch("subspaces live in different ambient spaces")

    def reduce(self, vec) -> dict:
        """Remainder of ``vec`` after elimination against the echelon basis (zero iff vec is in the span)."""
        v = _sparse(vec, self.ring)
        for row in self.rows:
            p = _pivot(row)
            c = v.get(p)
            if c:
                for j, x in row.items():
                    y = v.get(j, self.ring.zero()) - c * x
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
        return v

    def contains(self, vec) -> bool:
        if hasattr(vec, "to_vector"):
            vec = vec.to_vector()
        return not self.reduce(vec)

    def issubset(self, other: Subspace) -> bool:
        self._check(other)
        if self.dim > other.dim:
            return False
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other: Subspace) -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.issubset(other) and other.issubset(self)

    __hash__ = None

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        if self.ring.is_generic:
            return Subspace.span(self.rows + other.rows, self.ring, self.ncols, self.ambient)
        rows = cyclo_rref(other.rows, self.ncols, self.ring.ell, basis=self.rows)
        return Subspace(self.ring, self.ncols, rows, self.ambient)

    def morphisms(self) -> list:
        from .morphism import Morphism

        if self.ambient is None:
            raise DomainMismatch("subspace has no Hom-space ambient")
        m, n = self.ambient
        return [Morphism.from_vector(m, n, self.ring, row) for row in self.dense_rows()]

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "ncols": self.ncols,
            "ambient": list(self.ambient) if self.ambient else None,
            "dim": self.dim,
            "pivots": self.pivots,
            "rows": [[[j, c.to_json()] for j, c in sorted(r.items())] for r in self.rows],
        }

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ncols={self.ncols}, ring={self.ring})"


# ---------------------------------------------------------------------------------------------------------------------
# Rank and kernel of matrices


def exact_rank(mat: Sequence[Sequence], ring: Ring = GENERIC) -> int:
    """Exact rank over the fraction field of the ring."""
    if not mat or not mat[0]:
        return 0
    if ring.is_generic:
        return bareiss_rank(_scalar_rows_to_zpoly([[ring.coerce(x) for x in r] for r in mat]))
    return len(cyclo_rref((_sparse(r, ring) for r in mat), len(mat[0]), ring.ell))


def kernel_basis(mat: Sequence[Sequence], ring: Ring = GENERIC, ambient=None) -> Subspace:
    """Right kernel {v : M v = 0} as a canonical echelon subspace."""
    if not mat:
        raise DomainMismatch("empty matrix")
    ncols = len(mat[0])
    zero, one = ring.zero(), ring.one()
    if ring.is_generic:
        if exact_rank(mat, ring) == ncols:
            return Subspace.zero(ring, ncols, ambient)
        kern = gauss_jordan_kernel([[ring.coerce(x) for x in r] for r in mat], zero, one)
        return Subspace.span(kern, ring, ncols, ambient)
    red = cyclo_rref((_sparse(r, ring) for r in mat), ncols, ring.ell)
    pivots = {_pivot(r): r for r in red}
    kern = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: one}
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                v[p] = -c
        kern.append(v)
    return Subspace.span(kern, ring, ncols, ambient)


__all__ = [
    "Subspace",
    "bareiss_rank",
    "cyclo_rref",
    "evaluate_scalar",
    "exact_rank",
    "gauss_jordan",
    "gauss_jordan_kernel",
    "generic_rank_certificate",
    "kernel_basis",
]

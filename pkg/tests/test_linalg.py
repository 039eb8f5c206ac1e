import random

from hypothesis import given
from hypothesis import strategies as st

from tlideal.exactscalar import GENERIC, Cyclo, CycloScalar, Scalar
from tlideal.ideal import gram_matrix
from tlideal.linalg import (
    Subspace,
    bareiss_rank,
    cyclo_rref,
    exact_rank,
    gauss_jordan,
    generic_rank_certificate,
    kernel_basis,
    _scalar_rows_to_zpoly,
)

d = Scalar.d()


def _cyclo_matrix(ell, rank, nrows, ncols, rng):
    ring = Cyclo(ell)
    tau = CycloScalar.tau(ell)
    basis = [[sum((tau**k * rng.randint(-2, 2) for k in range(3)), ring.zero()) for _ in range(ncols)]
             for _ in range(rank)]
    rows = []
    for _ in range(nrows):
        coeffs = [rng.randint(-2, 2) for _ in range(rank)]
        rows.append([sum((c * b[j] for c, b in zip(coeffs, basis)), ring.zero()) for j in range(ncols)])
    return ring, rows


def test_identity_rank():
    one, zero = Scalar(1), Scalar(0)
    eye = [[one if i == j else zero for j in range(5)] for i in range(5)]
    assert exact_rank(eye) == 5
    assert exact_rank([[CycloScalar(3, [1 if i == j else 0]) for j in range(5)] for i in range(5)], Cyclo(3)) == 5


def test_gram_examples():
    g = gram_matrix(2, 2, GENERIC)
    assert g.entries == [[d * d, d], [d, d * d]]
    assert exact_rank(g.entries) == 2
    g3 = gram_matrix(2, 2, Cyclo(3))
    assert exact_rank(g3.entries, Cyclo(3)) == 1
    ker = kernel_basis(g3.entries, Cyclo(3))
    assert ker.dim == 1 and ker.dense_rows() == [[Cyclo(3).one(), -Cyclo(3).one()]]


def test_fast_route_matches_plain_route():
    rng = random.Random(13)
    for ell in (3, 4, 5, 7):
        for rank in range(0, 5):
            ring, rows = _cyclo_matrix(ell, rank, 6, 7, rng)
            plain, pivots = gauss_jordan(rows, ring.zero())
            fast = cyclo_rref(({j: c for j, c in enumerate(r) if c} for r in rows), 7, ell)
            dense = [[r.get(j, ring.zero()) for j in range(7)] for r in fast]
            assert dense == plain
            assert len(plain) <= rank


def test_generic_bareiss_matches_gauss_jordan():
    for m, n in [(2, 2), (3, 3), (4, 4), (2, 4), (1, 5)]:
        rows = gram_matrix(m, n, GENERIC).entries
        red, _ = gauss_jordan(rows, Scalar(0))
        assert bareiss_rank(_scalar_rows_to_zpoly(rows)) == len(red)


def test_rank_certificate_is_a_lower_bound():
    rows = gram_matrix(3, 3, GENERIC).entries
    ranks = generic_rank_certificate(rows, seed=1)
    assert len(ranks) == 2 and all(r <= exact_rank(rows) for r in ranks) and max(ranks) == 5
    assert generic_rank_certificate(rows, seed=1) == ranks


def test_subspace_operations():
    ring = Cyclo(5)
    a = Subspace.span([[1, 0, 0], [0, 1, 1]], ring, 3)
    b = Subspace.span([[1, 1, 1]], ring, 3)
    assert b <= a and not a <= b
    assert a + b == a
    assert (b + Subspace.span([[0, 0, 1]], ring, 3)).dim == 2
    assert Subspace.full(ring, 3) == a + Subspace.span([[0, 0, 1]], ring, 3)
    assert Subspace.zero(ring, 3).dim == 0


@given(st.lists(st.lists(st.integers(-2, 2), min_size=4, max_size=4), min_size=1, max_size=5),
       st.sampled_from([3, 4, 5]))
def test_echelon_basis_is_canonical(rows, ell):
    ring = Cyclo(ell)
    s = Subspace.span(rows, ring, 4)
    again = Subspace.span(list(reversed(s.dense_rows())) + rows, ring, 4)
    assert s.dense_rows() == again.dense_rows()
    for r in rows:
        assert s.contains(r)
    ker = kernel_basis(rows, ring)
    assert ker.dim + s.dim == 4
    for v in ker.dense_rows():
        for r in rows:
            assert sum((ring.coerce(x) * y for x, y in zip(r, v)), ring.zero()) == 0

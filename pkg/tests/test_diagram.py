import itertools
import random

import pytest

from tlideal.diagram import (
    Diagram,
    cap,
    catalan,
    closure_loops,
    compose_diagrams,
    cup,
    enumerate_diagrams,
    generator,
    identity,
    is_valid_matching,
    tensor_diagrams,
    transpose_diagram,
)
from tlideal.errors import BadParameter, DomainMismatch, ParityError


def test_basic_diagrams():
    assert identity(3).match == (3, 4, 5, 0, 1, 2)
    assert generator(1, 2).match == (1, 0, 3, 2)
    assert cup() == Diagram(2, 0, [1, 0])
    assert cap() == Diagram(0, 2, [1, 0])
    with pytest.raises(BadParameter):
        generator(3, 3)


def test_interning_and_validation():
    assert Diagram(1, 1, [1, 0]) is identity(1)
    with pytest.raises(BadParameter):
        Diagram(2, 2, [3, 2, 1, 0])  # crossing pairing
    with pytest.raises(ParityError):
        Diagram(1, 2, [1, 0, 0])
    assert not is_valid_matching(0, 4, [2, 3, 0, 1])


def test_compose_examples():
    assert compose_diagrams(cup(), cap()) == (identity(0), 1)
    e = generator(1, 2)
    assert compose_diagrams(e, e) == (e, 1)
    for n in range(5):
        for a in enumerate_diagrams(n, n):
            assert compose_diagrams(identity(n), a) == (a, 0)
    with pytest.raises(DomainMismatch):
        compose_diagrams(identity(2), identity(3))


def test_tensor_examples():
    assert tensor_diagrams(identity(1), identity(1)) == identity(2)
    assert tensor_diagrams(cap(), cap()) == Diagram(0, 4, [1, 0, 3, 2])
    assert tensor_diagrams(generator(1, 2), identity(1)) == generator(1, 3)


def test_transpose():
    assert transpose_diagram(cap()) == cup()
    for n in range(4):
        assert transpose_diagram(identity(n)) == identity(n)
    for x in enumerate_diagrams(5, 7):
        y = transpose_diagram(x)
        assert (y.top, y.bot) == (7, 5)
        assert transpose_diagram(y) == x


@pytest.mark.parametrize("m,n,count", [(1, 1, 1), (3, 3, 5), (2, 3, 0)])
def test_enumeration_examples(m, n, count):
    assert len(enumerate_diagrams(m, n)) == count


def test_enumeration_is_sorted_and_unique():
    for m, n in [(2, 2), (3, 5), (4, 4)]:
        ds = enumerate_diagrams(m, n)
        assert [x.match for x in ds] == sorted(x.match for x in ds)
        assert len(set(ds)) == len(ds)
    assert enumerate_diagrams(2, 2) == (generator(1, 2), identity(2))


def test_catalan_counts():
    assert [len(enumerate_diagrams(n, n)) for n in range(9)] == [1, 1, 2, 5, 14, 42, 132, 429, 1430]
    assert [catalan(n) for n in range(9)] == [1, 1, 2, 5, 14, 42, 132, 429, 1430]


def test_enumeration_matches_brute_force():
    for m, n in [(2, 2), (1, 3), (3, 3), (0, 6)]:
        size = m + n
        brute = []
        for perm in itertools.permutations(range(size)):
            if all(perm[perm[i]] == i and perm[i] != i for i in range(size)) and is_valid_matching(m, n, perm):
                brute.append(perm)
        assert sorted(set(brute)) == [x.match for x in enumerate_diagrams(m, n)]


def _compose3(c, b, a):
    ba, r1 = compose_diagrams(b, a)
    left, r2 = compose_diagrams(c, ba)
    cb, s1 = compose_diagrams(c, b)
    right, s2 = compose_diagrams(cb, a)
    return (left, r1 + r2), (right, s1 + s2)


def test_associativity_exhaustive_t3():
    basis = enumerate_diagrams(3, 3)
    for a, b, c in itertools.product(basis, repeat=3):
        left, right = _compose3(c, b, a)
        assert left == right


def test_associativity_random():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 6)
        a, b, c = (rng.choice(enumerate_diagrams(n, n)) for _ in range(3))
        left, right = _compose3(c, b, a)
        assert left == right


def test_interchange_and_antihomomorphism():
    rng = random.Random(3)
    for _ in range(200):
        p, q = rng.randint(1, 3), rng.randint(1, 3)
        a, b = (rng.choice(enumerate_diagrams(p, p)) for _ in range(2))
        a2, b2 = (rng.choice(enumerate_diagrams(q, q)) for _ in range(2))
        lhs, r = compose_diagrams(tensor_diagrams(b, b2), tensor_diagrams(a, a2))
        x, r1 = compose_diagrams(b, a)
        y, r2 = compose_diagrams(b2, a2)
        assert (lhs, r) == (tensor_diagrams(x, y), r1 + r2)
        ta, tb = transpose_diagram(a), transpose_diagram(b)
        z, s = compose_diagrams(ta, tb)
        assert (z, s) == (transpose_diagram(x), r1)


def test_closure_loops():
    assert closure_loops(identity(3)) == 3
    assert closure_loops(generator(1, 2)) == 1

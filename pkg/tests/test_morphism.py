import random

import pytest

from tlideal.diagram import enumerate_diagrams
from tlideal.errors import DivisionByZero, DomainMismatch, NotMinimal, ParityError, PreconditionFailed, RingMismatch
from tlideal.exactscalar import GENERIC, Cyclo, Scalar, quantum_integer
from tlideal.morphism import (
    Morphism,
    cap_morphism,
    compose,
    compose_all,
    cond_expect,
    cond_expect_chain,
    cup_morphism,
    generator_morphism,
    identity_morphism,
    pad_embed,
    pad_retract,
    random_morphism,
    reduce_to_multiple,
    scalar_morphism,
    tensor,
    trace,
)
from tlideal.tower import jones_wenzl

d = Scalar.d()


def e(i, n, ring=GENERIC):
    return generator_morphism(i, n, ring)


def test_linear_ops():
    rng = random.Random(0)
    a = random_morphism(2, 4, GENERIC, rng)
    assert a + Morphism.zero(2, 4) == a
    assert (a + a.scale(-1)).is_zero()
    s1, s2 = d, Scalar(3)
    assert a.scale(s1 + s2) == a.scale(s1) + a.scale(s2)
    with pytest.raises(DomainMismatch):
        a + Morphism.zero(4, 2)
    with pytest.raises(RingMismatch):
        a + Morphism.zero(2, 4, Cyclo(3))


def test_compose_examples():
    assert compose(cup_morphism(), cap_morphism()) == scalar_morphism(d)
    assert compose(e(1, 2), e(1, 2)) == e(1, 2).scale(d)
    assert compose_all(e(1, 3), e(2, 3), e(1, 3)) == e(1, 3)
    with pytest.raises(DomainMismatch):
        compose(e(1, 2), e(1, 3))


def test_compose_in_cyclo_ring_uses_specialized_loop():
    ring = Cyclo(3)
    assert compose(e(1, 2, ring), e(1, 2, ring)) == e(1, 2, ring)


def test_tensor_examples():
    rng = random.Random(1)
    a = random_morphism(3, 1, GENERIC, rng)
    assert tensor(a, identity_morphism(0)) == a
    assert tensor(identity_morphism(2), identity_morphism(3)) == identity_morphism(5)
    assert tensor(e(1, 2), identity_morphism(1)) == e(1, 3)


def test_trace_examples():
    assert trace(identity_morphism(2)) == d * d
    assert trace(e(1, 2)) == d
    assert trace(jones_wenzl(2)) == d * d - 1 == quantum_integer(3)


def test_cond_expect_examples():
    for n in range(4):
        assert cond_expect(identity_morphism(n + 1)) == identity_morphism(n).scale(d)
    assert cond_expect(e(1, 2)) == identity_morphism(1)
    for x in enumerate_diagrams(3, 3):
        a = Morphism.from_diagram(x)
        assert cond_expect_chain(a, 0) == scalar_morphism(trace(a))
    assert cond_expect_chain(e(1, 2), 2) == e(1, 2)
    assert cond_expect_chain(e(1, 2), 0) == scalar_morphism(d)
    for n in range(5):
        assert cond_expect_chain(identity_morphism(n), 0) == scalar_morphism(d**n)


def test_trace_of_cond_expect():
    rng = random.Random(5)
    for n in range(4):
        a = random_morphism(n + 1, n + 1, GENERIC, rng)
        assert trace(a) == trace(cond_expect(a))


def test_padding_examples():
    one = identity_morphism(1)
    assert pad_embed(one) == one and pad_retract(one, 1, 1) == one
    c = cap_morphism()
    assert pad_retract(pad_embed(c), 0, 2) == c
    for x in enumerate_diagrams(1, 3):
        a = Morphism.from_diagram(x)
        assert pad_retract(pad_embed(a, 3), 1, 3) == a
    for x in enumerate_diagrams(4, 2):
        a = Morphism.from_diagram(x)
        assert pad_retract(pad_embed(a), 4, 2) == a
    with pytest.raises(ParityError):
        pad_retract(identity_morphism(3), 1, 2)
    with pytest.raises(DomainMismatch):
        pad_embed(c, target=4)


def test_reduce_to_multiple_examples():
    p = jones_wenzl(2)
    assert reduce_to_multiple(tensor(p, identity_morphism(1)), p) == d
    one = identity_morphism(1)
    f = compose_all(tensor(one, one), e(1, 2), tensor(one, one))
    assert reduce_to_multiple(f, one) == 1
    assert reduce_to_multiple(Morphism.zero(3, 3), p) == 0


def test_reduce_to_multiple_errors():
    p = jones_wenzl(2)
    with pytest.raises(PreconditionFailed):
        reduce_to_multiple(e(1, 3), p)
    # 1_2 is not minimal: ε(e_1 ⊗ 1) = d·e_1 is not a multiple of 1_2
    q = identity_morphism(2)
    f = e(1, 3)
    with pytest.raises(NotMinimal):
        reduce_to_multiple(f, q)
    ring = Cyclo(3)
    from tlideal.rootspec import evaluate_morphism

    p3 = evaluate_morphism(jones_wenzl(2), 3)
    with pytest.raises(DivisionByZero):
        reduce_to_multiple(tensor(p3, identity_morphism(1, ring)), p3)


def test_trace_symmetry_rectangular():
    rng = random.Random(11)
    for m in range(0, 5):
        for n in range(m % 2, 5, 2):
            a = random_morphism(n, m, GENERIC, rng, nterms=3)
            b = random_morphism(m, n, GENERIC, rng, nterms=3)
            assert trace(compose(a, b)) == trace(compose(b, a))


def test_interchange_and_tower_homomorphism():
    rng = random.Random(2)
    for _ in range(20):
        a, c = (random_morphism(2, 2, GENERIC, rng) for _ in range(2))
        b, dd = (random_morphism(3, 3, GENERIC, rng, nterms=2) for _ in range(2))
        assert compose(tensor(a, b), tensor(c, dd)) == tensor(compose(a, c), compose(b, dd))
        one = identity_morphism(2)
        assert tensor(compose(a, c), one) == compose(tensor(a, one), tensor(c, one))


def test_partial_trace_module_property():
    rng = random.Random(4)
    for n in range(1, 4):
        a = random_morphism(n + 1, n + 1, GENERIC, rng, nterms=4)
        b = random_morphism(n, n, GENERIC, rng, nterms=3)
        lhs = trace(compose(a, tensor(b, identity_morphism(1))))
        assert lhs == trace(compose(cond_expect(a), b))


def test_json_round_trip():
    a = jones_wenzl(3)
    assert Morphism.from_json(a.to_json()) == a
    assert [t["diagram"]["match"] for t in a.to_json()["terms"]] == sorted(
        t["diagram"]["match"] for t in a.to_json()["terms"]
    )

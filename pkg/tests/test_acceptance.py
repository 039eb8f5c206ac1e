"""Acceptance criteria 1-12; each test prints one PASS/FAIL line (collected again in the terminal summary)."""
import itertools
import json
import random
import subprocess
import sys
import time

import pytest

from tlideal.diagram import (
    catalan,
    compose_diagrams,
    enumerate_diagrams,
    tensor_diagrams,
)
from tlideal.exactscalar import GENERIC, Cyclo, Scalar, quantum_integer
from tlideal.ideal import (
    certify_generic_gram,
    compressed_dim,
    constancy_check,
    gram_matrix,
    negligible_basis,
    verify_even_subcategory,
    verify_main_theorem,
)
from tlideal.linalg import exact_rank
from tlideal.morphism import (
    Morphism,
    compose,
    cond_expect_chain,
    generator_morphism,
    identity_morphism,
    random_morphism,
    scalar_morphism,
    tensor,
    trace,
)
from tlideal.rootspec import NoPartner, evaluate_morphism, reflect, z_critical, z_left, z_reg_nil
from tlideal.tower import (
    central_idempotent,
    count_tableaux,
    diagrams_of_size,
    jones_wenzl,
    path_idempotent,
    paths_of_length,
)

d = Scalar.d()
SEED = 20260


def test_c01_dimension_law(criterion):
    with criterion(1, "|Hom(m,n)| = Catalan((m+n)/2), m+n <= 16"):
        start = time.perf_counter()
        for total in range(0, 17, 2):
            for m in range(total + 1):
                assert len(enumerate_diagrams(m, total - m)) == catalan(total // 2)
        assert time.perf_counter() - start < 10


def test_c02_diagram_calculus(criterion):
    with criterion(2, "associativity and interchange (exhaustive T_3, 10^4 random triples up to T_6)"):
        def assoc(a, b, c):
            ba, r1 = compose_diagrams(b, a)
            x, r2 = compose_diagrams(c, ba)
            cb, s1 = compose_diagrams(c, b)
            y, s2 = compose_diagrams(cb, a)
            return (x, r1 + r2) == (y, s1 + s2)

        t3 = enumerate_diagrams(3, 3)
        assert all(assoc(a, b, c) for a, b, c in itertools.product(t3, repeat=3))
        rng = random.Random(SEED)
        for _ in range(10_000):
            n = rng.randint(1, 6)
            basis = enumerate_diagrams(n, n)
            a, b, c = rng.choice(basis), rng.choice(basis), rng.choice(basis)
            assert assoc(a, b, c)
            p = rng.randint(0, n)
            q = n - p
            a1, b1 = rng.choice(enumerate_diagrams(p, p)), rng.choice(enumerate_diagrams(p, p))
            a2, b2 = rng.choice(enumerate_diagrams(q, q)), rng.choice(enumerate_diagrams(q, q))
            lhs, r = compose_diagrams(tensor_diagrams(b1, b2), tensor_diagrams(a1, a2))
            x, r1 = compose_diagrams(b1, a1)
            y, r2 = compose_diagrams(b2, a2)
            assert (lhs, r) == (tensor_diagrams(x, y), r1 + r2)


def test_c03_trace_suite(criterion):
    with criterion(3, "Tr(ab) = Tr(ba) incl. rectangular, Tr = iterated expectation, Tr(1_n) = d^n, n <= 5"):
        rng = random.Random(SEED + 3)
        for m in range(6):
            for n in range(m % 2, 6, 2):
                for _ in range(4):
                    a = random_morphism(m, n, GENERIC, rng, nterms=3)
                    b = random_morphism(n, m, GENERIC, rng, nterms=3)
                    assert trace(compose(b, a)) == trace(compose(a, b))
        for n in range(6):
            assert trace(identity_morphism(n)) == d**n
            for x in enumerate_diagrams(n, n):
                a = Morphism.from_diagram(x)
                assert cond_expect_chain(a, 0) == scalar_morphism(trace(a))


def test_c04_expectation_of_compressed_morphisms(criterion):
    with criterion(4, "eps(f) = (Tr f / Tr p) p for f in (p x 1_m) T (p x 1_m), 100+ instances, n+m <= 6"):
        rng = random.Random(SEED + 4)
        count = 0
        while count < 120:
            total = rng.randint(1, 6)
            n = rng.randint(0, total - 1)
            m = total - n
            path = rng.choice(paths_of_length(n))
            p = path_idempotent(path)
            pm = tensor(p, identity_morphism(m))
            x = random_morphism(total, total, GENERIC, rng, nterms=rng.randint(1, 4))
            f = compose(pm, compose(x, pm))
            if f.is_zero():
                continue
            assert cond_expect_chain(f, n) == p.scale(trace(f) / trace(p))
            count += 1


def test_c05_idempotent_suite(criterion):
    with criterion(5, "path idempotents: orthogonality, branching, sum 1, centrality, traces, f_lambda^2"):
        one = identity_morphism(1)
        for n in range(6):
            paths = paths_of_length(n)
            ps = {t: path_idempotent(t) for t in paths}
            total = Morphism.zero(n, n)
            for i, t in enumerate(paths):
                p = ps[t]
                total = total + p
                assert compose(p, p) == p
                for s in paths[i + 1:]:
                    assert compose(p, ps[s]).is_zero()
                ext = Morphism.zero(n + 1, n + 1)
                for s in t.extensions():
                    ext = ext + path_idempotent(s)
                assert tensor(p, one) == ext
            assert total == identity_morphism(n)
            diagrams = enumerate_diagrams(n, n)
            for lam in diagrams_of_size(n):
                z = central_idempotent(lam)
                for i in range(1, n):
                    e = generator_morphism(i, n)
                    assert compose(z, e) == compose(e, z)
                assert compressed_dim(z, z, diagrams, n, n) == count_tableaux(lam) ** 2
        for n in range(7):
            for t in paths_of_length(n):
                assert trace(path_idempotent(t)) == quantum_integer(t.widths[-1])


def _reflections_in_one_line(lam, mu, ell):
    for m in range(1, 4):
        try:
            if reflect(lam, ell, m) == mu:
                return True
        except NoPartner:
            pass
    return False


def test_c06_root_of_unity_suite(criterion):
    with criterion(6, "partition of unity at tau, z_reg/z_nil, evaluability, support condition"):
        for ell in (3, 4, 5):
            ring = Cyclo(ell)
            for n in range(7):
                blocks = []
                for lam in diagrams_of_size(n):
                    z = z_critical(lam, ell) if lam.width % ell == 0 else z_left(lam, ell)
                    blocks.append((lam, evaluate_morphism(z, ell)))
                total = Morphism.zero(n, n, ring)
                for i, (_, z) in enumerate(blocks):
                    total = total + z
                    assert compose(z, z) == z
                    for _, w in blocks[i + 1:]:
                        assert compose(z, w).is_zero() and compose(w, z).is_zero()
                assert total == identity_morphism(n, ring)
                reg, nil = (evaluate_morphism(x, ell) for x in z_reg_nil(n, ell))
                assert compose(reg, reg) == reg and compose(nil, nil) == nil
                assert compose(reg, nil).is_zero() and reg + nil == identity_morphism(n, ring)
                if ell == 3 and n <= 5:
                    left = [(lam, z) for lam, z in blocks if lam.width % ell]
                    xs = [Morphism.from_diagram(x, ring) for x in enumerate_diagrams(n, n)]
                    for (lam, a), (mu, b) in itertools.product(left, repeat=2):
                        if lam != mu and not _reflections_in_one_line(lam, mu, ell):
                            assert all(compose(compose(a, x), b).is_zero() for x in xs)


MAIN_RUNS = [(3, 7), (4, 6), (5, 6)]
_reports: dict = {}


def _main_report(ell, N):
    if (ell, N) not in _reports:
        _reports[(ell, N)] = verify_main_theorem(ell, N, seed=0, samples=2, closure_samples=2, products=5)
    return _reports[(ell, N)]


def test_c07_main_theorem(criterion):
    with criterion(7, "Neg = ideal of JW_(ell-1)(tau) for (3,7), (4,6), (5,6) by double inclusion"):
        for ell, N in MAIN_RUNS:
            rep = _main_report(ell, N)
            assert rep["verdict"] == "PASS"
            assert all(c["equal"] and c["neg_dim"] == c["ideal_dim"] for c in rep["cells"])
        table = {(c["m"], c["n"]): c["neg_dim"] for c in _main_report(3, 7)["cells"]}
        assert [table[(n, n)] for n in range(1, 5)] == [0, 1, 4, 13]
        neg = negligible_basis(2, 2, 3)
        assert neg.dim == 1 and neg.contains(evaluate_morphism(jones_wenzl(2), 3))


def test_c08_genericity(criterion):
    with criterion(8, "generic Gram full rank (exact n <= 5, certificate n = 6, 7), Neg = 0 for m, n <= 5"):
        for n in range(6):
            assert exact_rank(gram_matrix(n, n).entries) == catalan(n)
        for n in (6, 7):
            assert certify_generic_gram(n, n, seed=SEED)["full_rank"]
        for m in range(6):
            for n in range(m % 2, 6, 2):
                assert negligible_basis(m, n, GENERIC).dim == 0


def test_c09_uniqueness_sampling(criterion):
    with criterion(9, "100 non-negligible samples have trace partners; 100 negligible stay inside under 50 products"):
        rep = verify_main_theorem(3, 5, seed=SEED, samples=100, closure_samples=100, products=50)
        assert rep["verdict"] == "PASS"
        assert all(c["samples"] == 100 for c in rep["cells"])


def test_c10_even_subcategory(criterion):
    with criterion(10, "even-restricted ideal of JW_(ell-1)(tau) = even Neg at ell = 3 (<= 6), ell = 5 (<= 4)"):
        for ell, N in ((3, 6), (5, 4)):
            rep = verify_even_subcategory(ell, N)
            assert rep["verdict"] == "PASS" and all(c["m"] % 2 == 0 == c["n"] % 2 for c in rep["cells"])


def test_c11_constancy(criterion):
    with criterion(11, "dim e A f over Q(t) = dim over Q(tau), 20+ seeded instances"):
        rng = random.Random(SEED + 11)
        pool = {}
        for ell in (3, 4, 5):
            for n in range(1, 5):
                cands = [identity_morphism(n), z_reg_nil(n, ell)[0]]
                if n <= ell - 1:
                    cands.append(jones_wenzl(n))
                cands += [z_left(lam, ell) for lam in diagrams_of_size(n) if lam.width % ell]
                pool[(ell, n)] = [c for c in cands if not c.is_zero()]
        done = 0
        while done < 30:
            ell = rng.choice((3, 4, 5))
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            if (m + n) % 2:
                continue
            e, f = rng.choice(pool[(ell, n)]), rng.choice(pool[(ell, m)])
            basis = enumerate_diagrams(m, n)
            subset = rng.sample(basis, rng.randint(1, len(basis)))
            rep = constancy_check(e, f, subset, ell)
            assert rep["equal"]
            done += 1


def test_c12_determinism(criterion, tmp_path):
    with criterion(12, "repeating criterion 7 with the same seed gives byte-identical JSON"):
        for ell, N in MAIN_RUNS:
            expected = json.dumps(_main_report(ell, N), sort_keys=True, indent=2) + "\n"
            argv = [sys.executable, "-m", "tlideal.cli", "verify", "--ell", str(ell), "--max-n", str(N),
                    "--seed", "0", "--samples", "2", "--out", "json"]
            env = {"TL_CACHE_DIR": str(tmp_path / f"c{ell}"), "PATH": ""}
            out = subprocess.run(argv, capture_output=True, env=env, check=True).stdout.decode()
            assert out == expected


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))

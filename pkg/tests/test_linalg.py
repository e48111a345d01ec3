import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conleymorse.complex import build_complex
from conleymorse.errors import NotClosed, NotNested, NotSimplicial, NotSubpair
from conleymorse.linalg import (
    betti_by_rank,
    induced_inclusion_map,
    induced_simplicial_map,
    inverse,
    kernel,
    matmul,
    rank,
    relative_homology,
)
from helpers import random_complex, random_field
from oracles import cone_betti, mod_rank

PRIMES = (2, 3, 5, 7)


def interval():
    return build_complex([(0, 1)])


def circle():
    return build_complex([(0, 1), (1, 2), (0, 2)])


def nonzero(b):
    return {k: v for k, v in b.items() if v}


def random_closed_pair(rng, K):
    P = K.closure(s for s in K.all if rng.random() < 0.6)
    E = K.closure(s for s in P if rng.random() < 0.3)
    return P, E


def test_rank_examples():
    assert rank(np.eye(2, dtype=int), 2) == 2
    assert rank(np.zeros((3, 4), dtype=int), 2) == 0
    assert rank([[1, 1], [1, 1]], 2) == 1
    assert rank(np.zeros((0, 3), dtype=int), 5) == 0


def test_relative_homology_examples():
    K = interval()
    a, b, ab = K.id_of((0,)), K.id_of((1,)), K.id_of((0, 1))
    assert nonzero(relative_homology(K, {a, b, ab}, {b}, 2).betti) == {}
    T = build_complex([(0, 1, 2)])
    top = T.id_of((0, 1, 2))
    assert nonzero(relative_homology(T, T.all, T.all - {top}, 2).betti) == {2: 1}
    C = circle()
    assert nonzero(relative_homology(C, C.all, (), 2).betti) == {0: 1, 1: 1}


def test_relative_homology_errors():
    K = interval()
    with pytest.raises(NotClosed):
        relative_homology(K, {K.id_of((0, 1))}, ())
    with pytest.raises(NotNested):
        relative_homology(K, {K.id_of((0,))}, {K.id_of((1,))})


def test_inclusion_examples():
    K = interval()
    a, b, ab = K.id_of((0,)), K.id_of((1,)), K.id_of((0, 1))
    for k in (0, 1):
        M = induced_inclusion_map(K, (K.all, ()), (K.all, ()), k)
        assert np.array_equal(M, np.eye(M.shape[0], dtype=int))
    assert induced_inclusion_map(K, ((), ()), ({a, b, ab}, {b}), 0).shape == (0, 0)
    assert induced_inclusion_map(K, ((), ()), (K.all, ()), 0).shape == (1, 0)
    assert induced_inclusion_map(K, ({b}, ()), (K.all, ()), 0).tolist() == [[1]]
    with pytest.raises(NotSubpair):
        induced_inclusion_map(K, (K.all, ()), ({b}, ()), 0)


def test_simplicial_examples():
    C = circle()
    for k in (0, 1):
        M = induced_simplicial_map(C, C, {0: 0, 1: 1, 2: 2}, k)
        assert np.array_equal(M, np.eye(1, dtype=int))
    K = interval()
    pt = build_complex([(0,)])
    assert induced_simplicial_map(K, pt, {0: 0, 1: 0}, 0).tolist() == [[1]]
    assert induced_simplicial_map(K, pt, {0: 0, 1: 0}, 1).shape == (0, 0)
    for p in (2, 3):
        assert induced_simplicial_map(C, C, {0: 1, 1: 2, 2: 0}, 1, p).tolist() == [[1]]
    assert induced_simplicial_map(C, C, {0: 1, 1: 0, 2: 2}, 1, 3).tolist() == [[2]]
    with pytest.raises(NotSimplicial):
        induced_simplicial_map(build_complex([(0, 1, 2)]), C, {0: 0, 1: 1, 2: 2}, 0)


@given(st.integers(0, 10**6), st.sampled_from(PRIMES))
def test_three_homology_routes_agree(seed, p):
    rng = random.Random(seed)
    K = random_complex(rng, max_size=20, max_vertices=6)
    P, E = random_closed_pair(rng, K)
    h = relative_homology(K, P, E, p)
    assert nonzero(h.betti) == nonzero(betti_by_rank(K, P, E, p)) == cone_betti(K, P, E, p)


@given(st.integers(0, 10**6))
def test_empty_e_is_absolute_homology(seed):
    rng = random.Random(seed)
    K = random_complex(rng, max_size=20, max_vertices=6)
    P = K.closure(s for s in K.all if rng.random() < 0.6)
    sub = build_complex([K.simplices[s] for s in P]) if P else None
    b = nonzero(relative_homology(K, P, (), 2).betti)
    assert b == (nonzero(relative_homology(sub, sub.all, (), 2).betti) if sub else {})


@given(st.integers(0, 10**6))
def test_excision_on_multivectors(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    f = random_field(rng, K)
    for V in f.vectors:
        cl, mo = K.closure(V), K.mouth(V)
        for p in (2, 3):
            assert nonzero(relative_homology(K, cl, mo, p).betti) == cone_betti(K, cl, mo, p)


@given(st.integers(0, 10**6), st.sampled_from(PRIMES))
def test_inclusion_functoriality(seed, p):
    rng = random.Random(seed)
    K = random_complex(rng, max_size=20, max_vertices=6)
    P3, E3 = random_closed_pair(rng, K)
    P2 = K.closure(s for s in P3 if rng.random() < 0.7)
    E2 = K.closure(s for s in E3 & P2 if rng.random() < 0.7)
    P1 = K.closure(s for s in P2 if rng.random() < 0.7)
    E1 = K.closure(s for s in E2 & P1 if rng.random() < 0.7)
    for k in range(K.dim + 1):
        M12 = induced_inclusion_map(K, (P1, E1), (P2, E2), k, p)
        M23 = induced_inclusion_map(K, (P2, E2), (P3, E3), k, p)
        M13 = induced_inclusion_map(K, (P1, E1), (P3, E3), k, p)
        assert np.array_equal(matmul(M23, M12, p), M13)


@given(st.integers(0, 10**6), st.sampled_from(PRIMES))
def test_rank_invariant_under_invertible_ops(seed, p):
    rng = random.Random(seed)
    r, c = rng.randint(1, 6), rng.randint(1, 6)
    M = np.array([[rng.randrange(p) for _ in range(c)] for _ in range(r)])
    expected = mod_rank(M.tolist(), c, p)
    assert rank(M, p) == expected
    L = np.eye(r, dtype=np.int64)
    for _ in range(5):
        i, j = rng.sample(range(r), 2) if r > 1 else (0, 0)
        if i != j:
            L[i] = (L[i] + rng.randrange(p) * L[j]) % p
    L[0] = L[0] * rng.randrange(1, p) % p
    assert np.array_equal(matmul(inverse(L, p), L, p), np.eye(r, dtype=np.int64))
    assert rank(matmul(L, M, p), p) == expected


@given(st.integers(0, 10**6), st.sampled_from(PRIMES))
def test_kernel_is_null_space(seed, p):
    rng = random.Random(seed)
    r, c = rng.randint(0, 5), rng.randint(1, 6)
    M = np.array([[rng.randrange(p) for _ in range(c)] for _ in range(r)], dtype=np.int64).reshape(r, c)
    Z = kernel(M, p)
    assert Z.shape == (c, c - (mod_rank(M.tolist(), c, p) if r else 0))
    assert not matmul(M, Z, p).any()
    assert rank(Z, p) == Z.shape[1]

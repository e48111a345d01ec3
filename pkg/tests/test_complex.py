import random

import pytest
from hypothesis import given, strategies as st

from conleymorse.complex import build_complex, closure, is_convex, mouth
from conleymorse.errors import DuplicateSimplex, EmptyInput
from helpers import random_complex, random_field
from oracles import brute_convex


def tri():
    return build_complex([(0, 1, 2)])


def test_explicit_closed_input():
    K = build_complex([(0,), (1,), (0, 1)])
    assert K.simplices == ((0,), (1,), (0, 1))


def test_face_completion_triangle():
    K = tri()
    assert len(K) == 7
    assert [K.dim_of[s] for s in range(7)] == [0, 0, 0, 1, 1, 1, 2]


def test_hollow_circle_has_no_triangle():
    K = build_complex([(0, 1), (1, 2), (0, 2)])
    assert len(K) == 6 and K.dim == 1


def test_ids_ordered_by_dim_then_lex():
    K = build_complex([(2, 3), (0, 1, 2)])
    assert list(K.simplices) == sorted(K.simplices, key=lambda s: (len(s), s))


def test_build_errors():
    with pytest.raises(EmptyInput):
        build_complex([])
    with pytest.raises(DuplicateSimplex):
        build_complex([(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        build_complex([(0, 0)])
    with pytest.raises(ValueError):
        build_complex([(-1, 2)])


def test_faces_cofaces_consistent():
    K = build_complex([(0, 1, 2), (2, 3)])
    for t in range(len(K)):
        for s in K.faces[t]:
            assert t in K.cofaces[s]
    for s in range(len(K)):
        for t in K.cofaces[s]:
            assert s in K.faces[t]


def test_closure_examples():
    K = build_complex([(0, 1)])
    ab = K.id_of((0, 1))
    assert closure(K, {ab}) == K.all
    assert closure(K, set()) == frozenset()
    T = tri()
    assert closure(T, {T.id_of((0, 1, 2))}) == T.all


def test_mouth_examples():
    K = build_complex([(0, 1)])
    a, b, ab = K.id_of((0,)), K.id_of((1,)), K.id_of((0, 1))
    assert mouth(K, {a, ab}) == {b}
    T = tri()
    assert mouth(T, {T.id_of((0, 1, 2))}) == T.all - {T.id_of((0, 1, 2))}
    assert mouth(K, {a}) == frozenset()


def test_convex_examples():
    K = build_complex([(0, 1)])
    assert is_convex(K, {K.id_of((0,)), K.id_of((0, 1))})
    T = tri()
    A = {T.id_of((0,)), T.id_of((0, 1, 2))}
    assert not is_convex(T, A)
    assert not brute_convex(T, A)
    assert T.convexity_witness(A) == T.id_of((0, 1))


@given(st.integers(0, 10**6))
def test_closure_idempotent_extensive(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    A = frozenset(s for s in K.all if rng.random() < 0.4)
    cl = K.closure(A)
    assert A <= cl and K.closure(cl) == cl and K.is_closed(cl)
    assert is_convex(K, cl)
    mo = K.mouth(A)
    assert not (mo & A) and (mo | A) == cl


@given(st.integers(0, 10**6))
def test_convexity_matches_brute_force(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    A = frozenset(s for s in K.all if rng.random() < 0.5)
    assert K.is_convex(A) == brute_convex(K, A)


@given(st.integers(0, 10**6))
def test_mouth_of_multivector_is_closed(seed):
    rng = random.Random(seed)
    K = random_complex(rng)
    f = random_field(rng, K)
    for V in f.vectors:
        assert K.is_closed(K.mouth(V))

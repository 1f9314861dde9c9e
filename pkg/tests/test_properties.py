"""Randomized structural invariants (driven by hypothesis)."""

from hypothesis import given, settings
from hypothesis import strategies as st

from qflag.cartan import kostant_dim, preset, verma_character
from qflag.coordring import CoordRing
from qflag.enveloping import UAlgebra

A2 = preset("A2")
RING = CoordRing(UAlgebra(A2))

words = st.lists(st.integers(0, 1), min_size=0, max_size=5).map(tuple)
weights = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=50, deadline=None)
@given(words, weights, weights)
def test_form_weyl_invariance_random(word, lam, mu):
    assert A2.pair_ww(A2.weyl_act(word, lam), A2.weyl_act(word, mu)) \
        == A2.pair_ww(lam, mu)


@settings(max_examples=30, deadline=None)
@given(words, words)
def test_weyl_canonicalization_is_a_congruence(w1, w2):
    lhs = A2.weyl_canonical(tuple(w1) + tuple(w2))
    rhs = A2.weyl_canonical(A2.weyl_canonical(w1) + A2.weyl_canonical(w2))
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(st.tuples(st.integers(0, 2), st.integers(0, 2)),
       st.tuples(st.integers(0, 2), st.integers(0, 2)))
def test_verma_coefficients_are_partition_counts(lam, gamma):
    ch = verma_character(A2, lam, gamma)
    assert ch.coeff(A2.weight_sub_root(lam, gamma)) == kostant_dim(A2, gamma)


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 1))
def test_ring_bilinearity(ca, cb, pick):
    basis1 = RING.grade_basis((1, 0))
    z = RING.grade_basis((0, 1))[pick]
    a = basis1[1].scale(A2.scalar(ca))
    b = basis1[1].scale(A2.scalar(cb))
    lhs = RING.mult(a + b, z)
    rhs = RING.mult(a, z) + RING.mult(b, z)
    assert lhs.gamma == rhs.gamma and lhs.vec == rhs.vec
    lhs2 = RING.mult(z, a + b)
    rhs2 = RING.mult(z, a) + RING.mult(z, b)
    assert lhs2.gamma == rhs2.gamma and lhs2.vec == rhs2.vec


@settings(max_examples=20, deadline=None)
@given(words, st.integers(0, 2))
def test_braid_weight_transport_random_words(word, pick):
    from qflag import linalg as la
    from qflag.weightmod import braid_word, simple
    mod = simple(RING.algebra, (1, 0))
    tw = braid_word(mod, word)
    col = pick
    tgt = A2.weyl_act(A2.weyl_canonical(word), mod.index_weights[col])
    for row in range(mod.dim):
        if not tw[row][col].is_zero():
            assert mod.index_weights[row] == tgt

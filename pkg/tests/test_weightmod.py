import pytest

from qflag import linalg as la
from qflag.cartan import kostant_dim, verma_character, weyl_character
from qflag.errors import DominanceError, SideMismatchError, TruncationError
from qflag.weightmod import (braid_on_module, braid_word,
                             check_module_relations, restricted_dual, simple,
                             tensor, transpose_braid, verma, weight_to_root)


def test_verma_character_and_relations(alg1):
    mod = verma(alg1, (0,), (3,))
    assert mod.character() == verma_character(alg1.datum, (0,), (3,))
    assert check_module_relations(mod) == []


def test_verma_depth_zero(alg1):
    mod = verma(alg1, (5,), (0,))
    assert mod.dim == 1 and mod.index_weights == [(5,)]


def test_verma_singular_action(alg1):
    # e(f v_0) evaluates the commutator at the trivial character: zero
    mod = verma(alg1, (0,), (2,))
    v = mod.basis_vector(mod.distinguished["highest"])
    fv = mod.apply(alg1.f(0), v)
    efv = mod.apply(alg1.e(0), fv)
    assert all(c.is_zero() for c in efv)


def test_right_verma(alg2):
    mod = verma(alg2, (1, 0), (2, 2), side="right")
    assert mod.side == "right"
    assert check_module_relations(mod) == []
    assert mod.character() == verma_character(alg2.datum, (1, 0), (2, 2))


def test_simple_examples(alg1, alg2):
    triv = simple(alg1, (0,))
    assert triv.dim == 1
    for n in range(1, 7):
        mod = simple(alg1, (n,))
        assert mod.dim == n + 1
        assert all(mod.weight_dim(w) == 1 for w in mod.weights())
    adj = simple(alg2, (1, 1))
    assert adj.dim == 8
    with pytest.raises(DominanceError):
        simple(alg1, (-2,))


def test_simple_matches_weyl_character(alg2):
    for lam in [(1, 0), (0, 2), (2, 1)]:
        assert simple(alg2, lam).character() == \
            weyl_character(alg2.datum, lam)


def test_simple_highest_vector_singular(alg2):
    mod = simple(alg2, (1, 1))
    v = mod.basis_vector(mod.distinguished["highest"])
    for i in range(2):
        assert all(c.is_zero() for c in mod.apply(alg2.e(i), v))


def test_restricted_dual(alg1):
    mod = simple(alg1, (2,))
    dual = restricted_dual(mod)
    assert dual.side == "right"
    assert dual.character() == mod.character()
    double = restricted_dual(dual)
    for key in mod.gen:
        assert la.mat_eq(double.gen[key], mod.gen[key])
    assert check_module_relations(dual) == []
    triv = simple(alg1, (0,))
    assert restricted_dual(triv).dim == 1


def test_dual_of_truncated_verma(alg1):
    mod = verma(alg1, (1,), (3,))
    dual = restricted_dual(mod)
    assert dual.character() == mod.character()
    assert check_module_relations(dual) == []


def test_dual_verma_construction(alg1):
    # the left module dual to the right Verma: same character, a vector
    # generating it freely under the raising half, relations exact
    right = verma(alg1, (2,), (3,), side="right")
    dual = restricted_dual(right)
    assert dual.side == "left"
    assert dual.character() == verma_character(alg1.datum, (2,), (3,))
    assert check_module_relations(dual) == []
    # the raising generators act injectively below the top (cofree shape)
    e = dual.gen[("e", 0)]
    for col in range(dual.dim):
        if dual.index_weights[col] == (2,):
            continue
        assert any(not e[r][col].is_zero() for r in range(dual.dim))


def test_tensor(alg1):
    v = simple(alg1, (1,))
    triv = simple(alg1, (0,))
    unit = tensor(triv, v)
    assert unit.character() == v.character()
    vv = tensor(v, v)
    assert vv.character() == v.character() * v.character()
    assert vv.character() == simple(alg1, (2,)).character() \
        + simple(alg1, (0,)).character()
    assert check_module_relations(vv) == []
    # weight of highest (x) highest is the sum
    assert vv.index_weights[0] == (2,)
    with pytest.raises(SideMismatchError):
        tensor(v, restricted_dual(v))


def test_braid_examples(alg1):
    triv = simple(alg1, (0,))
    assert la.mat_eq(braid_on_module(triv, 0), la.identity(1, alg1.datum.l0))
    v = simple(alg1, (1,))
    t = braid_on_module(v, 0)
    hw = v.distinguished["highest"]
    img = la.mat_vec(t, v.basis_vector(hw))
    # v_w goes to a nonzero multiple of f v_w
    low = v.weight_indices((-1,))[0]
    assert not img[low].is_zero()
    assert img[hw].is_zero()
    tinv = braid_on_module(v, 0, inverse=True)
    assert la.mat_eq(la.mat_mul(t, tinv), la.identity(2, alg1.datum.l0))


def test_braid_weight_transport(alg2):
    mod = simple(alg2, (1, 0))
    d = alg2.datum
    for w in d.all_weyl_words():
        tw = braid_word(mod, w)
        for col in range(mod.dim):
            tgt = d.weyl_act(w, mod.index_weights[col])
            for row in range(mod.dim):
                if not tw[row][col].is_zero():
                    assert mod.index_weights[row] == tgt


def test_braid_word_reduced_independence(alg2):
    mod = simple(alg2, (1, 0))
    assert la.mat_eq(braid_word(mod, (0, 1, 0)), braid_word(mod, (1, 0, 1)))
    assert la.mat_eq(braid_word(mod, ()), la.identity(mod.dim, alg2.datum.l0))


def test_braid_refuses_truncated(alg1):
    mod = verma(alg1, (0,), (2,))
    with pytest.raises(TruncationError):
        braid_on_module(mod, 0)


def test_transpose_braid_round_trip(alg1):
    vr = restricted_dual(simple(alg1, (2,)))
    t = transpose_braid(vr, (0,))
    tinv = transpose_braid(vr, (0,), inverse=True)
    assert la.mat_eq(la.mat_mul(t, tinv), la.identity(vr.dim, alg1.datum.l0))


def test_transpose_braid_pairing_convention(alg1):
    # <tT(v), v*> = <v, T(v*)> against the dual simple module
    v = simple(alg1, (1,))
    vr = restricted_dual(v)
    t_mod = braid_word(v, (0,))
    t_dual = transpose_braid(vr, (0,))
    assert la.mat_eq(t_dual, la.transpose(t_mod))


def test_sufficiently_large_bijectivity(alg1):
    # the plus/minus degree piece maps onto deep weight spaces once the
    # highest weight clears the drop
    d = alg1.datum
    for gamma in [(1,), (2,), (3,)]:
        for n in range(gamma[0], 7):
            mod = simple(alg1, (n,))
            assert mod.weight_dim(d.weight_sub_root((n,), gamma)) \
                == kostant_dim(d, gamma)


def test_w_action_on_tensor_highest_line(alg2):
    # T_w^{-1}(ell (x) v) = T_w^{-1}(ell) (x) T_w^{-1}(v) for ell highest
    d = alg2.datum
    ell_mod = simple(alg2, (1, 0))
    v_mod = simple(alg2, (0, 1))
    big = tensor(ell_mod, v_mod)
    w0 = d.longest_word()
    t_big = braid_word(big, w0, inverse=True)
    t_ell = braid_word(ell_mod, w0, inverse=True)
    t_v = braid_word(v_mod, w0, inverse=True)
    ell = ell_mod.basis_vector(ell_mod.distinguished["highest"])
    ell_img = la.mat_vec(t_ell, ell)
    for b in range(v_mod.dim):
        vec = big.zero_vector()
        for a in range(ell_mod.dim):
            vec[a * v_mod.dim + b] = ell[a]
        lhs = la.mat_vec(t_big, vec)
        v_img = la.mat_vec(t_v, v_mod.basis_vector(b))
        rhs = big.zero_vector()
        for a in range(ell_mod.dim):
            for bb in range(v_mod.dim):
                rhs[a * v_mod.dim + bb] = ell_img[a] * v_img[bb]
        assert lhs == rhs


def test_module_json_description(alg2):
    mod = simple(alg2, (1, 0))
    desc = mod.describe()
    assert desc["dim"] == 3
    assert desc["weights"]["[1,0]"] == 1
    assert "highest" in desc["distinguished"]


def test_weight_to_root(a2):
    assert weight_to_root(a2, (2, -1)) == (1, 0)
    assert weight_to_root(a2, (1, 0)) is None

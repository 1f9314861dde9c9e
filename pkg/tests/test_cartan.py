from fractions import Fraction

import pytest

from qflag.cartan import CharacterPoly, kostant_dim, preset, verma_character, \
    weyl_character
from qflag.errors import DominanceError, ParseError


def test_presets_and_l0(a1, a2, g2):
    assert a1.l0 == 2 and a2.l0 == 3
    assert preset("B2").l0 == 1 and g2.l0 == 1
    assert preset("C2").cartan == preset("B2").cartan
    with pytest.raises(ParseError):
        preset("E8")


def test_bilinear_form_examples(a1, a2):
    alpha = a1.alpha(0)
    assert a1.pair_ww(alpha, alpha) == Fraction(2)
    assert a1.pair_ww((1,), (1,)) == Fraction(1, 2)
    assert a2.pair_ww((1, 0), (0, 1)) == Fraction(1, 3)


def test_form_is_weyl_invariant(a2):
    for w in a2.all_weyl_words():
        for lam in [(1, 0), (2, -1), (1, 1)]:
            for mu in [(0, 1), (-1, 2)]:
                assert a2.pair_ww(a2.weyl_act(w, lam), a2.weyl_act(w, mu)) \
                    == a2.pair_ww(lam, mu)


def test_weyl_act_examples(a1, a2):
    assert a1.weyl_act((), (5,)) == (5,)
    assert a1.weyl_act((0,), (0,), shifted=True) == (-2,)
    assert a2.weyl_act(a2.longest_word(), (1, 0)) == (0, -1)


def test_weyl_group_structure(a2, g2):
    assert len(a2.weyl_elements()) == 6
    assert len(g2.weyl_elements()) == 12
    assert a2.weyl_canonical((0, 1, 0)) == a2.weyl_canonical((1, 0, 1))
    assert a2.weyl_length((0, 0)) == 0
    # length equals the number of positive roots sent negative
    for w in a2.all_weyl_words():
        neg = 0
        for gamma in a2.positive_roots():
            img = a2.weyl_act(w, a2.root_to_weight(gamma))
            coords = [img[i] for i in range(2)]
            # negative root iff all alpha-coordinates of the image <= 0
            from qflag.weightmod import weight_to_root
            g = weight_to_root(a2, img)
            if all(c <= 0 for c in g):
                neg += 1
        assert neg == len(w)


def test_positive_roots(a2, g2):
    assert set(a2.positive_roots()) == {(1, 0), (0, 1), (1, 1)}
    assert len(g2.positive_roots()) == 6
    assert len(preset("B2").positive_roots()) == 4


def test_weyl_character_examples(a1, a2):
    assert weyl_character(a1, (0,)).terms == {(0,): 1}
    assert weyl_character(a1, (2,)).terms == {(2,): 1, (0,): 1, (-2,): 1}
    assert weyl_character(a2, (1, 0)).terms == {
        (1, 0): 1, (-1, 1): 1, (0, -1): 1}
    with pytest.raises(DominanceError):
        weyl_character(a1, (-1,))


def test_weyl_character_sl2_dimensions(a1):
    for n in range(7):
        ch = weyl_character(a1, (n,))
        assert len(ch.terms) == n + 1
        assert all(c == 1 for c in ch.terms.values())


def test_weyl_character_weyl_invariant(a2):
    ch = weyl_character(a2, (1, 1))
    for w in a2.all_weyl_words():
        assert ch.weyl_image(w) == ch


def test_kostant_examples(a2):
    assert kostant_dim(a2, (0, 0)) == 1
    assert kostant_dim(a2, (1, 1)) == 2
    assert kostant_dim(a2, (2, 1)) == 2


def test_verma_character(a1, a2):
    ch = verma_character(a1, (3,), (3,))
    assert [ch.coeff(a1.weight_sub_root((3,), (k,))) for k in range(4)] \
        == [1, 1, 1, 1]
    ch2 = verma_character(a2, (0, 0), (1, 1))
    assert ch2.coeff(a2.weight_sub_root((0, 0), (1, 1))) == 2
    assert verma_character(a1, (5,), (0,)).terms == {(5,): 1}


def test_verma_character_matches_kostant(a2):
    ch = verma_character(a2, (0, 0), (2, 2))
    for g in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)]:
        assert ch.coeff(a2.weight_sub_root((0, 0), g)) == kostant_dim(a2, g)


def test_weight_grammar(a2):
    assert a2.parse_weight("[1,-2]") == (1, -2)
    assert a2.parse_root("<1,0>") == (1, 0)
    assert a2.weight_str((1, -2)) == "[1,-2]"
    with pytest.raises(ParseError):
        a2.parse_weight("(1,2)")


def test_character_arithmetic(a1):
    e0 = CharacterPoly.monomial(a1, (0,))
    e2 = CharacterPoly.monomial(a1, (2,))
    assert (e0 + e2) * e2 == CharacterPoly(a1, {(2,): 1, (4,): 1})
    assert (e2 - e2).terms == {}

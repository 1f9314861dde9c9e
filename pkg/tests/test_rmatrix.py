import pytest

from qflag import linalg as la
from qflag.errors import BorelError, TruncationError
from qflag.rmatrix import (DrinfeldPairing, hexagon_check, kappa_matrix,
                           r_operator, xi_operator)
from qflag.weightmod import module_map_commutes, simple, tensor, verma


def test_pairing_generator_values(alg1, pairing1):
    d = alg1.datum
    expected = (alg1.qi(0, -1) - alg1.qi(0)).inverse()
    assert pairing1.pair(alg1.e(0), alg1.f(0)) == expected
    assert pairing1.pair(alg1.k((1,)), alg1.k((1,))) == \
        d.q_power(-d.pair_ww((1,), (1,)))
    assert pairing1.pair(alg1.k((2,)), alg1.f(0)).is_zero()
    assert pairing1.pair(alg1.e(0), alg1.k((2,))).is_zero()


def test_pairing_rejects_wrong_borel(alg1, pairing1):
    with pytest.raises(BorelError):
        pairing1.pair(alg1.f(0), alg1.f(0))
    with pytest.raises(BorelError):
        pairing1.pair(alg1.e(0), alg1.e(0))


def test_pairing_coproduct_axiom_oracle(alg2, pairing2):
    # (x, y1 y2) = (Delta(x), y1 (x) y2), evaluated through the coproduct
    x = alg2.e_word((0, 1))
    y1, y2 = alg2.f(0), alg2.f(1)
    lhs = pairing2.pair(x, y1 * y2)
    rhs = alg2.datum.zero()
    for (m0, m1), c in alg2.coproduct(x).terms.items():
        rhs = rhs + c * pairing2.pair(alg2.mono_element(m0), y1) \
            * pairing2.pair(alg2.mono_element(m1), y2)
    assert lhs == rhs
    # independent expansion for the two-letter instance (e1e2, f1f2)
    base = (alg2.qi(0, -1) - alg2.qi(0)).inverse()
    assert pairing2.pair_words((0, 1), (0, 1)) == base * base


def test_pairing_mirror_axiom(alg2, pairing2):
    # (x1 x2, y) = (x2 (x) x1, Delta(y))
    x1, x2 = alg2.e(0), alg2.e(1)
    y = alg2.f(0) * alg2.f(1)
    lhs = pairing2.pair(x1 * x2, y)
    rhs = alg2.datum.zero()
    for (m0, m1), c in alg2.coproduct(y).terms.items():
        rhs = rhs + c * pairing2.pair(x2, alg2.mono_element(m0)) \
            * pairing2.pair(x1, alg2.mono_element(m1))
    assert lhs == rhs


def test_pairing_nondegenerate(alg1, alg2, pairing1, pairing2):
    for beta in [(1,), (2,), (3,), (4,)]:
        mat = pairing1.table(beta)
        la.inverse(mat)  # raises if singular
    for beta in [(1, 0), (1, 1), (2, 1), (2, 2), (3, 1)]:
        mat = pairing2.table(beta)
        la.inverse(mat)


def test_xi_examples(alg1, alg2, pairing1, pairing2):
    assert pairing1.xi_element((0,))[0][2].is_one()
    [(x, y, c)] = pairing1.xi_element((1,))
    assert c == alg1.qi(0, -1) - alg1.qi(0)
    assert x == alg1.e(0) and y == alg1.f(0)
    # inverse-transpose of the pairing table at a 2x2 degree
    table = pairing2.table((1, 1))
    coeffs = pairing2.xi_coefficients((1, 1))
    assert la.mat_eq(la.mat_mul(la.transpose(coeffs), table),
                     la.identity(2, alg2.datum.l0))


def test_canonical_element_property(alg2, pairing2):
    # contracting Xi_beta against (x, .) reproduces x
    beta = (1, 1)
    words = alg2.basis(beta).free_words
    for wx in words:
        acc = {w: alg2.datum.zero() for w in words}
        for x, y, c in pairing2.xi_element(beta):
            val = pairing2.pair(alg2.e_word(wx), y)
            for (fw, lam, ew), cx in x.terms.items():
                acc[ew] = acc[ew] + c * val * cx
        for w in words:
            expected = alg2.datum.one() if w == wx else alg2.datum.zero()
            assert acc[w] == expected


def test_r_trivial_factor(alg1, pairing1):
    triv = simple(alg1, (0,))
    v = simple(alg1, (2,))
    rc = r_operator(pairing1, triv, v, "R-check")
    assert la.mat_eq(rc.matrix, la.identity(v.dim, alg1.datum.l0))


def test_r_on_fundamental_square(alg1, pairing1):
    v = simple(alg1, (1,))
    r = r_operator(pairing1, v, v, "R")
    d = alg1.datum
    off_diag = [(i, j) for i in range(4) for j in range(4)
                if i != j and not r.matrix[i][j].is_zero()]
    assert off_diag == [(1, 2)]
    # independent oracle: solve the intertwiner system directly
    vv = r.source
    rows = []
    rhs = []

    def add_eq(mat_l, mat_r):
        # unknown M: M mat_l = mat_r M entrywise -> linear in M's entries
        n = 4
        for a in range(n):
            for b in range(n):
                row = [d.zero() for _ in range(n * n)]
                for k in range(n):
                    row[a * n + k] = row[a * n + k] + mat_l[k][b]
                    row[k * n + b] = row[k * n + b] - mat_r[a][k]
                rows.append(row)
                rhs.append(d.zero())

    flip = la.zeros(4, 4, d.l0)
    one = d.one()
    for a in range(2):
        for b in range(2):
            flip[b * 2 + a][a * 2 + b] = one
    add_eq(vv.gen[("e", 0)], vv.gen[("e", 0)])
    add_eq(vv.gen[("f", 0)], vv.gen[("f", 0)])
    # triangular normalization: on v_top (x) w the operator is
    # q^{-(top, wt w)} flip
    kap = kappa_matrix(v, v)
    for b in range(2):
        col = 0 * 2 + b
        for arow in range(4):
            row = [d.zero() for _ in range(16)]
            row[arow * 4 + col] = one
            rows.append(row)
            expected = kap[col][col].inverse() if arow == b * 2 + 0 \
                else d.zero()
            rhs.append(expected)
    sol = la.solve(rows, rhs)
    assert sol is not None
    rcheck = r_operator(pairing1, v, v, "R-check").matrix
    oracle = [[sol[a * 4 + b] for b in range(4)] for a in range(4)]
    assert la.mat_eq(oracle, rcheck)


def test_r_inverse_formula(alg1, alg2, pairing1, pairing2):
    for alg, pairing, lam in [(alg1, pairing1, (1,)), (alg2, pairing2, (1, 0))]:
        v = simple(alg, lam)
        r = r_operator(pairing, v, v, "R")
        rinv = r_operator(pairing, v, v, "R-inverse")
        ident = la.identity(v.dim * v.dim, alg.datum.l0)
        assert la.mat_eq(la.mat_mul(r.matrix, rinv.matrix), ident)
        assert la.mat_eq(la.mat_mul(rinv.matrix, r.matrix), ident)


def test_rcheck_is_module_map(alg2, pairing2):
    v1 = simple(alg2, (1, 0))
    v2 = simple(alg2, (0, 1))
    rc = r_operator(pairing2, v1, v2, "R-check")
    assert module_map_commutes(rc.source, rc.target, rc.matrix)


def test_hexagons(alg1, alg2, pairing1, pairing2):
    v = simple(alg1, (1,))
    assert hexagon_check(pairing1, v, v, v)["pass"]
    triv = simple(alg1, (0,))
    assert hexagon_check(pairing1, triv, v, v)["pass"]
    v1 = simple(alg2, (1, 0))
    v2 = simple(alg2, (0, 1))
    assert hexagon_check(pairing2, v1, v1, v2)["pass"]


def test_naturality_under_projection(alg1, ring1, pairing1):
    # (p (x) id) R = R (p (x) id) for the product projection
    # p: V(w) (x) V(w) -> V(2w) built from coordinate multiplication
    d = alg1.datum
    v = simple(alg1, (1,))
    v2 = simple(alg1, (2,))
    tgt = ring1.module((2,))
    cols = []
    for a in range(v.dim):
        for b in range(v.dim):
            pa = ring1.slice_element(ring1.module((1,)), a)
            pb = ring1.slice_element(ring1.module((1,)), b)
            cols.append(ring1.embed_full(tgt, ring1.mult(pa, pb)))
    p = la.from_columns(cols, d.l0)
    # p must be a module map before it can be natural
    assert module_map_commutes(tensor(v, v), v2, p)
    r_big = r_operator(pairing1, tensor(v, v), v, "R").matrix
    r_2v = r_operator(pairing1, v2, v, "R").matrix
    ident = la.identity(v.dim, d.l0)
    lhs = la.mat_mul(la.kron(p, ident), r_big)
    rhs = la.mat_mul(r_2v, la.kron(p, ident))
    assert la.mat_eq(lhs, rhs)


def test_r_refuses_truncated(alg1, pairing1):
    t = verma(alg1, (1,), (2,))
    v = simple(alg1, (1,))
    with pytest.raises(TruncationError):
        r_operator(pairing1, t, v, "R")


def test_pairing_tables_concurrent(alg2):
    import threading
    pairing = DrinfeldPairing(alg2)
    results = []
    errors = []

    def worker():
        try:
            results.append(pairing.xi_coefficients((1, 1)))
            results.append(pairing.table((2, 1)))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert all(la.mat_eq(r, results[0]) for r in results[::2])

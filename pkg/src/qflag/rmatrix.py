"""The Drinfeld pairing, canonical elements, and R-operators.

The pairing is computed by structural recursion on the plus-side word via
the coproduct axiom (x1 x2, y) = (x2 (x) x1, Delta(y)).  Per degree the
pairing matrix is inverted to produce the canonical element; R-operators
on tensor products of exact modules assemble the finitely many
contributing degrees into exact block matrices.
"""

from __future__ import annotations

from threading import RLock
from typing import Dict, List, Tuple

from . import linalg
from .cartan import RootSum, Weight
from .enveloping import UAlgebra, UElement, _content
from .errors import BorelError, QflagError, TruncationError
from .linalg import Matrix
from .scalars import QScalar
from .weightmod import WeightModule, tensor, weight_to_root


class DrinfeldPairing:
    """Pairing tables between U^+ and U^- degree pieces."""

    def __init__(self, algebra: UAlgebra):
        self.algebra = algebra
        self.datum = algebra.datum
        self._lock = RLock()
        self._word_cache: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], QScalar] = {}
        self._tables: Dict[RootSum, Matrix] = {}
        self._xi: Dict[RootSum, Matrix] = {}

    # -- word-level recursion ----------------------------------------------------

    def pair_words(self, eword: Tuple[int, ...],
                   fword: Tuple[int, ...]) -> QScalar:
        """(e_{i1}...e_{in}, f_{j1}...f_{jn}) via the coproduct recursion."""
        datum = self.datum
        if _content(eword, datum.rank) != _content(fword, datum.rank):
            return datum.zero()
        if not eword:
            return datum.one()
        key = (eword, fword)
        with self._lock:
            hit = self._word_cache.get(key)
        if hit is not None:
            return hit
        i, rest = eword[0], eword[1:]
        out = datum.zero()
        base = (self.algebra.qi(i, -1) - self.algebra.qi(i)).inverse()
        for t, j in enumerate(fword):
            if j != i:
                continue
            pre = fword[:t]
            scal = datum.one()
            if pre:
                gamma = _content(pre, datum.rank)
                scal = datum.q_pair(datum.root_to_weight(gamma), datum.alpha(i))
            sub = self.pair_words(rest, pre + fword[t + 1:])
            out = out + scal * base * sub
        with self._lock:
            self._word_cache[key] = out
        return out

    def pair(self, x: UElement, y: UElement) -> QScalar:
        """The full pairing U^{>=0} x U^{<=0} -> F."""
        datum = self.datum
        out = datum.zero()
        for (fx, lamx, ex), cx in x.terms.items():
            if fx:
                raise BorelError("first argument must lie in U^{>=0}")
            for (fy, lamy, ey), cy in y.terms.items():
                if ey:
                    raise BorelError("second argument must lie in U^{<=0}")
                # (k_lam x', y' k_mu) = q^{-(lam, mu - deg y')} (x', y')
                gamma = datum.root_to_weight(_content(fy, datum.rank))
                tw = datum.q_pair(tuple(-a for a in lamx),
                                  datum.weight_sub(lamy, gamma))
                out = out + cx * cy * tw * self.pair_words(ex, fy)
        return out

    # -- tables and canonical elements --------------------------------------------

    def table(self, beta: RootSum) -> Matrix:
        beta = tuple(beta)
        with self._lock:
            hit = self._tables.get(beta)
        if hit is not None:
            return hit
        words = self.algebra.basis(beta).free_words
        mat = [[self.pair_words(ew, fw) for fw in words] for ew in words]
        with self._lock:
            self._tables[beta] = mat
        return mat

    def xi_coefficients(self, beta: RootSum) -> Matrix:
        """Coefficient matrix C of Xi_beta = sum C[a][b] x_a (x) y_b, the
        inverse transpose of the pairing table."""
        beta = tuple(beta)
        with self._lock:
            hit = self._xi.get(beta)
        if hit is not None:
            return hit
        mat = self.table(beta)
        if not mat:
            out: Matrix = []
        else:
            try:
                out = linalg.transpose(linalg.inverse(mat))
            except ArithmeticError as exc:
                raise QflagError(
                    f"pairing matrix singular at degree {beta}") from exc
        with self._lock:
            self._xi[beta] = out
        return out

    def xi_element(self, beta: RootSum) -> List[Tuple[UElement, UElement, QScalar]]:
        """Xi_beta as a list of (x_a, y_b, coefficient) triples."""
        beta = tuple(beta)
        alg = self.algebra
        if not any(beta):
            return [(alg.one(), alg.one(), self.datum.one())]
        words = alg.basis(beta).free_words
        coeffs = self.xi_coefficients(beta)
        out = []
        for a, wa in enumerate(words):
            for b, wb in enumerate(words):
                c = coeffs[a][b]
                if not c.is_zero():
                    out.append((alg.e_word(wa), alg.f_word(wb), c))
        return out

    def inverse_components(self, beta: RootSum) -> List[Tuple[UElement, UElement]]:
        """The degree-beta summands x_p (x) y_p of
        sum_beta q^{(beta,beta)} (1 (x) k_beta)(S (x) id)(Xi_beta)."""
        alg = self.algebra
        datum = self.datum
        beta = tuple(beta)
        tw = datum.q_power(datum.root_pair(beta, beta))
        kbeta = alg.k(datum.root_to_weight(beta))
        out = []
        for x, y, c in self.xi_element(beta):
            out.append((alg.antipode(x).scale(tw * c), kbeta * y))
        return out


def contributing_degrees(datum, m1: WeightModule, m2: WeightModule) -> List[RootSum]:
    """Degrees beta for which Xi_beta can act on m1 (x) m2: the plus leg
    raises weights of m1, so beta must connect two weights of m1."""
    ws = set(m1.index_weights)
    out = set()
    for w1 in ws:
        for w2 in ws:
            g = weight_to_root(datum, datum.weight_sub(w2, w1))
            if g is not None and all(c >= 0 for c in g):
                out.add(g)
    return sorted(out, key=lambda g: (sum(g), g))


class ROperator:
    """An exact operator on (or between) tensor product carriers."""

    def __init__(self, source: WeightModule, target: WeightModule,
                 matrix: Matrix, flavor: str):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.flavor = flavor

    def describe(self) -> dict:
        return {
            "flavor": self.flavor,
            "source": self.source.name,
            "target": self.target.name,
            "matrix": [[x.to_str() for x in row] for row in self.matrix],
            "labels": list(self.source.labels),
        }


def kappa_matrix(m1: WeightModule, m2: WeightModule) -> Matrix:
    datum = m1.datum
    n1, n2 = m1.dim, m2.dim
    out = linalg.zeros(n1 * n2, n1 * n2, datum.l0)
    for a in range(n1):
        for b in range(n2):
            idx = a * n2 + b
            out[idx][idx] = datum.q_pair(m1.index_weights[a],
                                         m2.index_weights[b])
    return out


def _flip_matrix(m1: WeightModule, m2: WeightModule) -> Matrix:
    """Permutation matrix of v (x) v' -> v' (x) v from m1 (x) m2 to m2 (x) m1."""
    datum = m1.datum
    n1, n2 = m1.dim, m2.dim
    out = linalg.zeros(n1 * n2, n1 * n2, datum.l0)
    one = datum.one()
    for a in range(n1):
        for b in range(n2):
            out[b * n1 + a][a * n2 + b] = one
    return out


def xi_operator(pairing: DrinfeldPairing, m1: WeightModule,
                m2: WeightModule) -> Matrix:
    """sum_beta q^{(beta,beta)} (k_beta^{-1} (x) k_beta) Xi_beta on m1 (x) m2."""
    datum = pairing.datum
    alg = pairing.algebra
    n = m1.dim * m2.dim
    out = linalg.identity(n, datum.l0)  # beta = 0 term
    for beta in contributing_degrees(datum, m1, m2):
        if not any(beta):
            continue
        tw = datum.q_power(datum.root_pair(beta, beta))
        kb = datum.root_to_weight(beta)
        kminus = alg.k(tuple(-x for x in kb))
        kplus = alg.k(kb)
        for x, y, c in pairing.xi_element(beta):
            left = m1.act(kminus * x)
            right = m2.act(kplus * y)
            out = linalg.mat_add(out, linalg.mat_scale(
                linalg.kron(left, right), tw * c))
    return out


def r_inverse_matrix(pairing: DrinfeldPairing, m1: WeightModule,
                     m2: WeightModule) -> Matrix:
    """The closed-form inverse: (sum_beta q^{(beta,beta)}(1 (x) k_beta)
    (S (x) id)(Xi_beta)) o kappa."""
    datum = pairing.datum
    n = m1.dim * m2.dim
    acc = linalg.identity(n, datum.l0)
    for beta in contributing_degrees(datum, m1, m2):
        if not any(beta):
            continue
        for x, y in pairing.inverse_components(beta):
            acc = linalg.mat_add(acc, linalg.kron(m1.act(x), m2.act(y)))
    return linalg.mat_mul(acc, kappa_matrix(m1, m2))


def r_operator(pairing: DrinfeldPairing, m1: WeightModule, m2: WeightModule,
               flavor: str = "R") -> ROperator:
    """R, R-inverse, R-check (the flip composed with R) or kappa."""
    if not (m1.exact and m2.exact):
        raise TruncationError("R-operators require exact finite modules")
    if m1.side != "left" or m2.side != "left":
        raise QflagError("R-operators act on left modules")
    carrier = tensor(m1, m2)
    if flavor == "kappa":
        return ROperator(carrier, carrier, kappa_matrix(m1, m2), flavor)
    if flavor == "R":
        mat = linalg.mat_mul(linalg.inverse(kappa_matrix(m1, m2)),
                             xi_operator(pairing, m1, m2))
        return ROperator(carrier, carrier, mat, flavor)
    if flavor == "R-inverse":
        return ROperator(carrier, carrier,
                         r_inverse_matrix(pairing, m1, m2), flavor)
    if flavor == "R-check":
        r = r_operator(pairing, m1, m2, "R")
        mat = linalg.mat_mul(_flip_matrix(m1, m2), r.matrix)
        return ROperator(carrier, tensor(m2, m1), mat, flavor)
    raise ValueError(f"unknown flavor {flavor!r}")


def hexagon_check(pairing: DrinfeldPairing, m1: WeightModule,
                  m2: WeightModule, m3: WeightModule) -> dict:
    """(Rcheck_{V,V''} (x) id) o (id (x) Rcheck_{V',V''}) == Rcheck_{VxV',V''}."""
    datum = pairing.datum
    r23 = r_operator(pairing, m2, m3, "R-check").matrix
    r13 = r_operator(pairing, m1, m3, "R-check").matrix
    id1 = linalg.identity(m1.dim, datum.l0)
    id2 = linalg.identity(m2.dim, datum.l0)
    step1 = linalg.kron(id1, r23)
    step2 = linalg.kron(r13, id2)
    lhs = linalg.mat_mul(step2, step1)
    m12 = tensor(m1, m2)
    rhs = r_operator(pairing, m12, m3, "R-check").matrix
    mismatch = linalg.first_mismatch(lhs, rhs)
    report = {
        "instance": f"{m1.name} (x) {m2.name} (x) {m3.name}",
        "pass": mismatch is None,
    }
    if mismatch is not None:
        i, j, a, b = mismatch
        report["counterexample"] = {
            "row": i, "col": j, "lhs": a.to_str(), "rhs": b.to_str()}
    return report

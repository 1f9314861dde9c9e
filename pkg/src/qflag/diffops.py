"""q-differential operators on a graded truncation of the coordinate ring.

Operators are realized degreewise-exactly as block matrices on a window of
grades; equality of operators is equality of realizations wherever both
sides stay inside the window.  On top sit the generator relations, the
left/right multiplication exchange through canonical elements, braid
conjugation, the transpose representation on the plus part of the algebra,
and the center with its Harish-Chandra image.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .cartan import CartanDatum, RootSum, Weight
from .coordring import CoordElement, CoordRing
from .enveloping import UAlgebra, UElement
from .errors import QflagError
from .linalg import Matrix, Vector
from .rmatrix import DrinfeldPairing
from .scalars import QScalar, exp_t_coefficient
from .weightmod import WeightModule, braid_on_module, weight_to_root


def _grade_box(datum: CartanDatum, cutoff: Weight) -> List[Weight]:
    out = []

    def rec(prefix, i):
        if i == datum.rank:
            out.append(tuple(prefix))
            return
        for c in range(cutoff[i] + 1):
            rec(prefix + [c], i + 1)

    rec([], 0)
    return sorted(out, key=lambda w: (sum(w), w))


class DWindow:
    """A finite grade window carrying exact operator realizations."""

    def __init__(self, ring: CoordRing, pairing: DrinfeldPairing,
                 cutoff: Weight):
        self.ring = ring
        self.pairing = pairing
        self.algebra = ring.algebra
        self.datum = ring.datum
        self.cutoff = tuple(cutoff)
        self.grades = _grade_box(self.datum, self.cutoff)
        self.grade_set = set(self.grades)
        for g in self.grades:
            ring.module(g)

    def module(self, g: Weight) -> WeightModule:
        return self.ring.module(tuple(g))

    # -- primitive operators ---------------------------------------------------

    def op_zero(self, grade: Weight) -> "DOperator":
        blocks = {}
        for g in self.grades:
            tgt = self.datum.weight_add(g, grade)
            if tgt in self.grade_set:
                blocks[g] = linalg.zeros(self.module(tgt).dim,
                                         self.module(g).dim, self.datum.l0)
            else:
                blocks[g] = None
        return DOperator(self, tuple(grade), blocks)

    def op_identity(self) -> "DOperator":
        blocks = {g: linalg.identity(self.module(g).dim, self.datum.l0)
                  for g in self.grades}
        return DOperator(self, self.datum.zero_weight, blocks)

    def op_left(self, phi: CoordElement) -> "DOperator":
        blocks = {}
        for g in self.grades:
            tgt = self.datum.weight_add(g, phi.grade)
            blocks[g] = (self.ring.full_mult_matrix(g, phi, "left")
                         if tgt in self.grade_set else None)
        return DOperator(self, phi.grade, blocks)

    def op_right(self, phi: CoordElement) -> "DOperator":
        blocks = {}
        for g in self.grades:
            tgt = self.datum.weight_add(g, phi.grade)
            blocks[g] = (self.ring.full_mult_matrix(g, phi, "right")
                         if tgt in self.grade_set else None)
        return DOperator(self, phi.grade, blocks)

    def op_partial(self, u: UElement) -> "DOperator":
        blocks = {g: self.module(g).act(u) for g in self.grades}
        return DOperator(self, self.datum.zero_weight, blocks)

    def op_sigma(self, lam: Weight) -> "DOperator":
        blocks = {}
        for g in self.grades:
            c = self.datum.q_pair(lam, g)
            blocks[g] = linalg.mat_scale(
                linalg.identity(self.module(g).dim, self.datum.l0), c)
        return DOperator(self, self.datum.zero_weight, blocks)

    def braid_blocks(self, i: int, inverse: bool = False) -> Dict[Weight, Matrix]:
        key = ("braid", i, inverse)
        cache = getattr(self, "_braid_cache", None)
        if cache is None:
            cache = {}
            self._braid_cache = cache
        hit = cache.get(key)
        if hit is None:
            hit = {g: braid_on_module(self.module(g), i, inverse=inverse)
                   for g in self.grades}
            cache[key] = hit
        return hit


class DOperator:
    """Degreewise realization of a graded operator on the window."""

    __slots__ = ("window", "grade", "blocks")

    def __init__(self, window: DWindow, grade: Weight,
                 blocks: Dict[Weight, Optional[Matrix]]):
        self.window = window
        self.grade = tuple(grade)
        self.blocks = blocks

    def __add__(self, other: "DOperator") -> "DOperator":
        if self.grade != other.grade:
            raise ValueError("grade mismatch in operator sum")
        blocks = {}
        for g in self.window.grades:
            a, b = self.blocks.get(g), other.blocks.get(g)
            blocks[g] = None if a is None or b is None else linalg.mat_add(a, b)
        return DOperator(self.window, self.grade, blocks)

    def __sub__(self, other: "DOperator") -> "DOperator":
        return self + other.scale(-self.window.datum.one())

    def scale(self, c: QScalar) -> "DOperator":
        return DOperator(self.window, self.grade, {
            g: None if m is None else linalg.mat_scale(m, c)
            for g, m in self.blocks.items()})

    def compose(self, other: "DOperator") -> "DOperator":
        """self o other (apply other first)."""
        datum = self.window.datum
        grade = datum.weight_add(self.grade, other.grade)
        blocks: Dict[Weight, Optional[Matrix]] = {}
        for g in self.window.grades:
            m2 = other.blocks.get(g)
            mid = datum.weight_add(g, other.grade)
            m1 = self.blocks.get(mid) if mid in self.window.grade_set else None
            blocks[g] = None if m1 is None or m2 is None \
                else linalg.mat_mul(m1, m2)
        return DOperator(self.window, grade, blocks)

    def equals(self, other: "DOperator") -> Tuple[bool, Optional[dict]]:
        """Compare on every grade where both realizations are defined."""
        if self.grade != other.grade:
            return False, {"reason": "grade mismatch"}
        compared = 0
        for g in self.window.grades:
            a, b = self.blocks.get(g), other.blocks.get(g)
            if a is None or b is None:
                continue
            compared += 1
            mm = linalg.first_mismatch(a, b)
            if mm is not None:
                i, j, x, y = mm
                mod = self.window.module(g)
                tgt = self.window.datum.weight_add(g, self.grade)
                tmod = self.window.module(tgt)
                return False, {
                    "grade": self.window.datum.weight_str(g),
                    "input": mod.labels[j],
                    "output": tmod.labels[i],
                    "lhs": x.to_str(), "rhs": y.to_str()}
        if compared == 0:
            return False, {"reason": "no common window grades"}
        return True, None


# ---------------------------------------------------------------------------
# generator relations
# ---------------------------------------------------------------------------

def sweedler_pairs(algebra: UAlgebra, u: UElement) -> List[Tuple[UElement, UElement]]:
    delta = algebra.coproduct(u, 1)
    out = []
    for (m0, m1), c in delta.terms.items():
        out.append((algebra.mono_element(m0).scale(c),
                    algebra.mono_element(m1)))
    return out


def relations_check(window: DWindow, corrupt: bool = False) -> dict:
    """All six generator relations plus the antipode-twisted exchange, as
    exact matrix identities on the window."""
    ring = window.ring
    alg = window.algebra
    datum = window.datum
    results = []

    def record(name: str, lhs: DOperator, rhs: DOperator):
        ok, cex = lhs.equals(rhs)
        entry = {"instance": name, "pass": ok}
        if cex:
            entry["counterexample"] = cex
        results.append(entry)

    small = [g for g in window.grades if any(g)]
    probes = [datum.fundamental(i) for i in range(datum.rank)] + [datum.rho]
    corrupt_twist = datum.q_power(
        __import__("fractions").Fraction(1, datum.l0)) if corrupt \
        else datum.one()

    def sigma(lam):
        op = window.op_sigma(lam)
        if corrupt:
            return op.scale(corrupt_twist)
        return op

    # comm1: left multiplications compose
    for g1 in small:
        for g2 in small:
            if datum.weight_add(g1, g2) not in window.grade_set:
                continue
            for phi in ring.grade_basis(g1)[:2]:
                for psi in ring.grade_basis(g2)[:2]:
                    record(
                        f"comm1 l_phi l_psi {datum.weight_str(g1)}"
                        f"{datum.weight_str(g2)}",
                        window.op_left(phi).compose(window.op_left(psi)),
                        window.op_left(ring.mult(phi, psi)))
    # comm2: sigma additive
    for lam in probes:
        for mu in probes:
            record(f"comm2 sigma {lam}+{mu}",
                   sigma(lam).compose(sigma(mu)),
                   sigma(datum.weight_add(lam, mu)))
    # comm3: partial multiplicative
    gens = [alg.e(i) for i in range(datum.rank)] + \
           [alg.f(i) for i in range(datum.rank)] + \
           [alg.k(datum.fundamental(0))]
    for a in gens[:3]:
        for b in gens[:3]:
            record("comm3 partial(uv)",
                   window.op_partial(a).compose(window.op_partial(b)),
                   window.op_partial(a * b))
    # comm4: sigma vs left multiplication
    for lam in probes:
        for g in small:
            phi = ring.grade_basis(g)[0]
            record(f"comm4 sigma{lam} l_phi{datum.weight_str(g)}",
                   sigma(lam).compose(window.op_left(phi)),
                   window.op_left(phi).compose(sigma(lam)).scale(
                       datum.q_pair(lam, g)))
    # comm5: sigma central among partials
    for u in gens:
        record("comm5 sigma partial",
               sigma(datum.rho).compose(window.op_partial(u)),
               window.op_partial(u).compose(sigma(datum.rho)))
    # comm6 and the antipode-twisted exchange, for generators of U
    for u in [alg.e(i) for i in range(datum.rank)] + \
             [alg.f(i) for i in range(datum.rank)] + \
             [alg.k(datum.rho)]:
        for g in small:
            for phi in ring.grade_basis(g):
                rhs = window.op_zero(g)
                for u0, u1 in sweedler_pairs(alg, u):
                    act = ring.u_action(u0, phi)
                    rhs = rhs + window.op_left(act).compose(
                        window.op_partial(u1))
                record(f"comm6 {u.to_str()[:12]} {datum.weight_str(g)}",
                       window.op_partial(u).compose(window.op_left(phi)),
                       rhs)
                rhs2 = window.op_zero(g)
                for u0, u1 in sweedler_pairs(alg, u):
                    tw = ring.u_action(alg.antipode(u0, inverse=True), phi)
                    rhs2 = rhs2 + window.op_partial(u1).compose(
                        window.op_left(tw))
                record(f"exchange {u.to_str()[:12]} {datum.weight_str(g)}",
                       window.op_left(phi).compose(window.op_partial(u)),
                       rhs2)
    passed = all(r["pass"] for r in results)
    return {"suite": "relations", "pass": passed, "results": results}


# ---------------------------------------------------------------------------
# right multiplication through the canonical elements
# ---------------------------------------------------------------------------

def lemma_rl_check(window: DWindow, psi: CoordElement) -> dict:
    """r_psi as a finite sum of l-partial-sigma compositions, and the
    mirrored expansion of l_psi, both exactly on the window."""
    ring = window.ring
    datum = window.datum
    alg = window.algebra
    pairing = window.pairing
    mu = psi.grade
    eta = psi.weight
    results = []

    # r_psi = sum_p l_{x_p psi} partial_{y_p k_eta} sigma_{-mu}
    rhs = window.op_zero(mu)
    k_eta = alg.k(eta)
    for beta in _sub_box(psi.gamma):
        for x_p, y_p in pairing.inverse_components(beta):
            act = ring.u_action(x_p, psi)
            if act.is_zero():
                continue
            rhs = rhs + window.op_left(act).compose(
                window.op_partial(y_p * k_eta))
    rhs = rhs.compose(window.op_sigma(tuple(-x for x in mu)))
    ok, cex = window.op_right(psi).equals(rhs)
    entry = {"instance": f"rl1 psi{psi.describe()['weight']}", "pass": ok}
    if cex:
        entry["counterexample"] = cex
    results.append(entry)

    # l_psi = sum_p r_{y_p psi} partial_{x_p k_eta} sigma_{-mu}
    rhs2 = window.op_zero(mu)
    fac = ring.factory(mu)
    betas = sorted({tuple(a - b for a, b in zip(target, psi.gamma))
                    for target in fac.drops
                    if all(a >= b for a, b in zip(target, psi.gamma))},
                   key=lambda g: (sum(g), g))
    for beta in betas:
        for x_p, y_p in pairing.inverse_components(beta):
            act = ring.u_action(y_p, psi)
            if act.is_zero():
                continue
            rhs2 = rhs2 + window.op_right(act).compose(
                window.op_partial(x_p * k_eta))
    rhs2 = rhs2.compose(window.op_sigma(tuple(-x for x in mu)))
    ok2, cex2 = window.op_left(psi).equals(rhs2)
    entry2 = {"instance": f"rl2 psi{psi.describe()['weight']}", "pass": ok2}
    if cex2:
        entry2["counterexample"] = cex2
    results.append(entry2)
    return {"suite": "lemma-rl", "pass": ok and ok2, "results": results}


def _sub_box(gamma: RootSum) -> List[RootSum]:
    out = []

    def rec(prefix, i):
        if i == len(gamma):
            out.append(tuple(prefix))
            return
        for c in range(gamma[i] + 1):
            rec(prefix + [c], i + 1)

    rec([], 0)
    return sorted(out, key=lambda g: (sum(g), g))


# ---------------------------------------------------------------------------
# braid conjugation
# ---------------------------------------------------------------------------

def z_conjugate(window: DWindow, i: int, d: DOperator) -> DOperator:
    """Z_{s_i}(d) = T_i^{-1} o d o T_i, blockwise on the window."""
    t = window.braid_blocks(i)
    tinv = window.braid_blocks(i, inverse=True)
    datum = window.datum
    blocks: Dict[Weight, Optional[Matrix]] = {}
    for g in window.grades:
        m = d.blocks.get(g)
        tgt = datum.weight_add(g, d.grade)
        if m is None or tgt not in window.grade_set:
            blocks[g] = None
        else:
            blocks[g] = linalg.mat_mul(
                tinv[tgt], linalg.mat_mul(m, t[g]))
    return DOperator(window, d.grade, blocks)


def _exp_tensor_components(alg: UAlgebra, i: int,
                           bound: int) -> List[Tuple[UElement, UElement]]:
    """Components b_p (x) a_p of exp_{q_i^{-1}}(-(q_i - q_i^{-1}) f_i (x) e_i)
    up to nilpotency order ``bound``."""
    datum = alg.datum
    out = []
    scale = -(alg.qi(i) - alg.qi(i, -1))
    for n in range(bound + 1):
        c = exp_t_coefficient(n, -datum.d(i), datum.l0) * (scale ** n)
        out.append((alg.f_word((i,) * n).scale(c), alg.e_word((i,) * n)))
    return out


def z_w_check(window: DWindow, i: int) -> dict:
    """Z_{s_i} fixes sigma, transports partials along the braid
    automorphism, and expands left multiplications through the
    two-factor exponential; extremal elements move between Ore sets."""
    ring = window.ring
    alg = window.algebra
    datum = window.datum
    results = []

    def record(name, lhs, rhs):
        ok, cex = lhs.equals(rhs)
        entry = {"instance": name, "pass": ok}
        if cex:
            entry["counterexample"] = cex
        results.append(entry)

    record("Z(sigma_rho) = sigma_rho",
           z_conjugate(window, i, window.op_sigma(datum.rho)),
           window.op_sigma(datum.rho))
    for u in [alg.e(j) for j in range(datum.rank)] + \
             [alg.f(j) for j in range(datum.rank)] + [alg.k(datum.rho)]:
        record(f"Z(partial {u.to_str()[:10]})",
               z_conjugate(window, i, window.op_partial(u)),
               window.op_partial(alg.braid_on_element(i, u, inverse=True)))
    bound = max(sum(weight_to_root(datum, datum.weight_sub(
        g, datum.weyl_act(datum.longest_word(), g))) or (0,))
        for g in window.grades) + 1
    comps = _exp_tensor_components(alg, i, bound)
    for g in window.grades:
        if not any(g):
            continue
        for phi in ring.grade_basis(g):
            rhs = window.op_zero(g)
            tphi = _apply_braid_to_element(window, i, phi, inverse=True)
            for b_p, a_p in comps:
                act = ring.u_action(b_p, tphi)
                if act.is_zero():
                    continue
                rhs = rhs + window.op_left(act).compose(window.op_partial(a_p))
            record(f"Z(l_phi) {datum.weight_str(g)} wt "
                   f"{datum.weight_str(phi.weight)}",
                   z_conjugate(window, i, window.op_left(phi)), rhs)
    passed = all(r["pass"] for r in results)
    return {"suite": "zw", "i": i, "pass": passed, "results": results}


def _apply_braid_to_element(window: DWindow, i: int, phi: CoordElement,
                            inverse: bool = False) -> CoordElement:
    """T_i^{+-1} of a homogeneous coordinate element (the image is again
    homogeneous, at the reflected weight)."""
    ring = window.ring
    datum = window.datum
    mod = window.module(phi.grade)
    mat = window.braid_blocks(i, inverse=inverse)[tuple(phi.grade)]
    vec = linalg.mat_vec(mat, ring.embed_full(mod, phi))
    target = datum.weyl_act((i,), phi.weight)
    g = weight_to_root(datum, datum.weight_sub(phi.grade, target))
    out = [datum.zero()] * ring.factory(phi.grade).slice_dim(g)
    for idx, c in enumerate(vec):
        if c.is_zero():
            continue
        if mod.index_weights[idx] != target:
            raise QflagError("braid image is not weight-homogeneous")
        for (gg, r), slot in mod.slot.items():
            if slot == idx:
                out[r] = c
    return CoordElement(ring, phi.grade, g, out)


def extremal_transport_check(window: DWindow, word: Sequence[int],
                             i: int, lam: Weight) -> dict:
    """For w alpha_i positive: Z_{s_i}(l_{c^w_lam}) is left multiplication
    by an extremal element of the shifted Ore set."""
    ring = window.ring
    datum = window.datum
    word = datum.weyl_canonical(word)
    alpha_i_img = datum.weyl_act(word, datum.alpha(i))
    gr = weight_to_root(datum, alpha_i_img)
    positive = gr is not None and all(c >= 0 for c in gr) and any(gr)
    c_w = ring.extremal(word, lam)
    z_img = z_conjugate(window, i, window.op_left(c_w))
    t_img = _apply_braid_to_element(window, i, c_w, inverse=True)
    ok_formula, cex = z_img.equals(window.op_left(t_img))
    ws = datum.weyl_canonical(tuple(word) + (i,))
    c_ws = ring.extremal(ws, lam)
    collinear = _collinear(t_img.vec, c_ws.vec) and t_img.gamma == c_ws.gamma
    return {
        "instance": f"w={list(word)} i={i} lam={datum.weight_str(lam)}",
        "w_alpha_i_positive": positive,
        "conjugate_is_left_mult": ok_formula,
        "lands_in_shifted_ore_set": collinear if positive else None,
        "pass": ok_formula and (not positive or collinear),
    }


def _collinear(a: Vector, b: Vector) -> bool:
    ratio = None
    for x, y in zip(a, b):
        if x.is_zero() != y.is_zero():
            return False
        if not x.is_zero():
            r = x / y
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True

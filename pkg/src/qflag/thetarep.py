"""The transpose representation of degree-zero localized operators on the
plus part of the algebra.

Every degree-zero operator on the localized ring acts on each localized
graded piece; identifying the graded dual of that piece with the plus part
turns the operator into an endomorphism family indexed by probe weights.
The formula route builds the family from right multiplications, torus
conjugations and the two pairing-defined convolution operators; the direct
route transposes the honest action on a stabilized fraction model.  Both
are exact and must agree entrywise."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .cartan import RootSum, Weight, kostant_dim
from .coordring import CoordElement, CoordRing
from .enveloping import UAlgebra, _content
from .errors import QflagError
from .linalg import Matrix, Vector
from .rmatrix import DrinfeldPairing
from .scalars import QScalar


class UPlusTruncation:
    """Basis bookkeeping for the plus part up to a height cap."""

    def __init__(self, algebra: UAlgebra, depth_ht: int):
        self.algebra = algebra
        self.datum = algebra.datum
        self.depth_ht = depth_ht
        self.degrees: List[RootSum] = [
            g for g in _degrees_up_to(self.datum.rank, depth_ht)]
        self.words: Dict[RootSum, List[Tuple[int, ...]]] = {
            g: algebra.basis(g).free_words for g in self.degrees}
        self.offsets: Dict[RootSum, int] = {}
        n = 0
        for g in self.degrees:
            self.offsets[g] = n
            n += len(self.words[g])
        self.dim = n

    def index(self, gamma: RootSum, word: Tuple[int, ...]) -> int:
        return self.offsets[gamma] + self.words[gamma].index(word)

    def zero_matrix(self) -> Matrix:
        return linalg.zeros(self.dim, self.dim, self.datum.l0)

    def reduce_into(self, mat: Matrix, col: int, gamma: RootSum,
                    coords: Dict[Tuple[int, ...], QScalar]) -> None:
        off = self.offsets[gamma]
        pos = {w: i for i, w in enumerate(self.words[gamma])}
        for w, c in coords.items():
            mat[off + pos[w]][col] = mat[off + pos[w]][col] + c


def _degrees_up_to(rank: int, ht: int) -> List[RootSum]:
    out = []

    def rec(prefix, i, left):
        if i == rank:
            out.append(tuple(prefix))
            return
        for c in range(left + 1):
            rec(prefix + [c], i + 1, left - c)

    rec([], 0, ht)
    return sorted(out, key=lambda g: (sum(g), g))


class ThetaFormula:
    """The generator images built from the displayed structural operators."""

    def __init__(self, trunc: UPlusTruncation, pairing: DrinfeldPairing):
        self.trunc = trunc
        self.pairing = pairing
        self.algebra = trunc.algebra
        self.datum = trunc.datum

    # -- structural operators on the plus part ------------------------------------

    def m_right(self, i: int) -> Matrix:
        """Right multiplication by the i-th raising generator."""
        trunc = self.trunc
        alg = self.algebra
        out = trunc.zero_matrix()
        ai = self.datum.alpha_root(i)
        for g in trunc.degrees:
            gp = tuple(a + b for a, b in zip(g, ai))
            if gp not in trunc.offsets:
                continue
            for w in trunc.words[g]:
                col = trunc.index(g, w)
                red = alg.basis(gp).reduce_word(w + (i,))
                trunc.reduce_into(out, col, gp, red)
        return out

    def n_conj(self, mu: Weight) -> Matrix:
        """Torus conjugation u -> k_mu u k_mu^{-1}: diagonal q^{(mu, deg)}."""
        trunc = self.trunc
        out = trunc.zero_matrix()
        for g in trunc.degrees:
            c = self.datum.q_pair(mu, self.datum.root_to_weight(g))
            for w in trunc.words[g]:
                idx = trunc.index(g, w)
                out[idx][idx] = c
        return out

    def _phi_value(self, i: int, eword: Tuple[int, ...],
                   gamma: RootSum) -> QScalar:
        """The pairing-defined functional of index i on a plus-part word."""
        if gamma != self.datum.alpha_root(i):
            return self.datum.zero()
        return self.pairing.pair_words(eword, (i,))

    def p_conv(self, i: int) -> Matrix:
        """u -> sum phi_i(u_(0)) u_(1) (the functional eats the k-stripped
        first coproduct leg)."""
        trunc = self.trunc
        alg = self.algebra
        out = trunc.zero_matrix()
        ai = self.datum.alpha_root(i)
        for g in trunc.degrees:
            gp = tuple(a - b for a, b in zip(g, ai))
            if any(c < 0 for c in gp):
                continue
            for w in trunc.words[g]:
                col = trunc.index(g, w)
                delta = alg.coproduct(alg.e_word(w), 1)
                acc: Dict[Tuple[int, ...], QScalar] = {}
                for (m0, m1), c in delta.terms.items():
                    ew0 = m0[2]
                    val = self._phi_value(i, ew0, _content(ew0, self.datum.rank))
                    if val.is_zero():
                        continue
                    ew1 = m1[2]
                    s = acc.get(ew1)
                    v = c * val
                    acc[ew1] = v if s is None else s + v
                trunc.reduce_into(out, col, gp,
                                  {w1: c for w1, c in acc.items()
                                   if not c.is_zero()})
        return out

    def q_conv(self, i: int) -> Matrix:
        """u -> sum phi_i(u_(1)) k^{-1}-shifted u_(0)."""
        trunc = self.trunc
        alg = self.algebra
        out = trunc.zero_matrix()
        ai = self.datum.alpha_root(i)
        for g in trunc.degrees:
            gp = tuple(a - b for a, b in zip(g, ai))
            if any(c < 0 for c in gp):
                continue
            for w in trunc.words[g]:
                col = trunc.index(g, w)
                delta = alg.coproduct(alg.e_word(w), 1)
                acc: Dict[Tuple[int, ...], QScalar] = {}
                for (m0, m1), c in delta.terms.items():
                    ew1 = m1[2]
                    val = self._phi_value(i, ew1, _content(ew1, self.datum.rank))
                    if val.is_zero():
                        continue
                    # m0 = k_{deg ew1} * (plus-part word); the shift cancels
                    ew0 = m0[2]
                    s = acc.get(ew0)
                    v = c * val
                    acc[ew0] = v if s is None else s + v
                trunc.reduce_into(out, col, gp,
                                  {w0: c for w0, c in acc.items()
                                   if not c.is_zero()})
        return out

    # -- generator images -----------------------------------------------------------

    def theta(self, probe: Weight, kind: str, arg) -> Matrix:
        """Theta_probe of sigma_mu, partial_{e_i}, partial_{f_i} or
        partial_{k_mu} per the displayed formulas."""
        datum = self.datum
        ident = linalg.identity(self.trunc.dim, datum.l0)
        if kind == "sigma":
            return linalg.mat_scale(ident, datum.q_pair(arg, probe))
        if kind == "de":
            return self.m_right(arg)
        if kind == "dk":
            return linalg.mat_scale(self.n_conj(tuple(-x for x in arg)),
                                    datum.q_pair(arg, probe))
        if kind == "df":
            i = arg
            ai = datum.alpha(i)
            t1 = linalg.mat_scale(
                linalg.mat_mul(self.p_conv(i), self.n_conj(ai)),
                datum.q_power(-datum.pair_ww(ai, ai))
                * datum.q_pair(tuple(-x for x in ai), probe))
            t2 = linalg.mat_scale(self.q_conv(i), datum.q_pair(ai, probe))
            return linalg.mat_sub(t1, t2)
        raise ValueError(f"unknown generator kind {kind!r}")


class ThetaDirect:
    """Transpose action computed on the stabilized fraction model of a
    localized graded piece."""

    def __init__(self, ring: CoordRing, trunc: UPlusTruncation,
                 probe: Weight, max_level: int = 8):
        self.ring = ring
        self.trunc = trunc
        self.datum = ring.datum
        self.probe = tuple(probe)
        self.level = self._stabilize(max_level)
        self._gram_inv: Dict[RootSum, Matrix] = {}
        self._ore: Dict[int, tuple] = {}

    def _stabilize(self, max_level: int) -> Weight:
        datum = self.datum
        mu = datum.zero_weight
        for _ in range(max_level + 1):
            grade = datum.weight_add(self.probe, mu)
            if datum.is_dominant(grade):
                fac = self.ring.factory(grade)
                if all(fac.slice_dim(g) == kostant_dim(datum, g)
                       for g in self.trunc.degrees) and \
                        all(self._gram_ok(grade, g)
                            for g in self.trunc.degrees):
                    return mu
            mu = datum.weight_add(mu, datum.rho)
        raise QflagError(
            f"no stabilization level for probe {self.probe} within "
            f"{max_level} steps")

    def _gram_ok(self, grade: Weight, gamma: RootSum) -> bool:
        mat, _w, d = self.ring.eval_solver(grade, gamma)
        if d == 0:
            return len(self.trunc.words[gamma]) == 0
        return len(mat) == d and linalg.rank(mat) == d

    # -- fraction bookkeeping ----------------------------------------------------

    def model_basis(self, gamma: RootSum) -> List[Tuple[Weight, CoordElement]]:
        """The drop-gamma slice at the base level, as left fractions
        (denominator grade, numerator)."""
        grade = self.datum.weight_add(self.probe, self.level)
        return [(self.level, phi)
                for phi in self.ring.slice_basis(grade, gamma)]

    def functional_vector(self, frac: Tuple[Weight, CoordElement]) -> Vector:
        """<theta(c_mu^{-1} psi), x_b> over the plus-part basis at the
        matching degree: q^{-(mu, gamma)} times the evaluations of psi."""
        mu, psi = frac
        tw = self.datum.q_pair(
            tuple(-x for x in mu),
            self.datum.root_to_weight(psi.gamma))
        return [tw * v for v in self.ring.evaluations(psi)]

    def act_k(self, nu: Weight, frac) -> Tuple[Weight, CoordElement]:
        mu, psi = frac
        res = self.ring.u_action(self.ring.algebra.k(nu), psi)
        c = self.datum.q_pair(tuple(-x for x in nu), mu)
        return (mu, res.scale(c))

    def act_e(self, i: int, frac) -> Tuple[Weight, CoordElement]:
        mu, psi = frac
        res = self.ring.u_action(self.ring.algebra.e(i), psi)
        c = self.datum.q_pair(tuple(-x for x in self.datum.alpha(i)), mu)
        return (mu, res.scale(c))

    def _ore_data(self, i: int):
        hit = self._ore.get(i)
        if hit is not None or i in self._ore:
            return hit
        datum = self.datum
        mu = self.level
        c_mu = self.ring.extremal((), mu)
        f_c = self.ring.u_action(self.ring.algebra.f(i), c_mu)
        if f_c.is_zero():
            out = None
        else:
            t, chi = self.ring.ore_witness(f_c, (), mu, side="left")
            out = (t.grade, chi)
        self._ore[i] = out
        return out

    def act_f(self, i: int, frac) -> Tuple[Weight, CoordElement]:
        """partial_{f_i}(c_mu^{-1} psi) = c_mu^{-1}(f_i psi)
        - q^{(alpha_i, mu - eta)} c_{mu+nu}^{-1}(chi psi), via the left Ore
        witness t (f_i c_mu) = chi c_mu with t = c_nu."""
        datum = self.datum
        alg = self.ring.algebra
        mu, psi = frac
        eta = psi.weight
        first = self.ring.u_action(alg.f(i), psi)
        ore = self._ore_data(i)
        if ore is None:
            return (mu, first)
        nu, chi = ore
        c_nu = self.ring.extremal((), nu)
        lifted = self.ring.mult(c_nu, first)
        tw = datum.q_pair(datum.alpha(i), datum.weight_sub(mu, eta))
        second = self.ring.mult(chi, psi).scale(tw)
        return (datum.weight_add(mu, nu), lifted - second)

    # -- transposed matrices ------------------------------------------------------

    def gram_inverse(self, gamma: RootSum) -> Matrix:
        gamma = tuple(gamma)
        hit = self._gram_inv.get(gamma)
        if hit is None:
            rows = [self.functional_vector(fr) for fr in self.model_basis(gamma)]
            hit = linalg.inverse(rows)
            self._gram_inv[gamma] = hit
        return hit

    def theta(self, kind: str, arg) -> Matrix:
        """The transpose matrix on the full plus-part truncation, computed
        from <phi_a, Theta(d)(x_b)> = <d(phi_a), x_b>."""
        datum = self.datum
        trunc = self.trunc
        out = trunc.zero_matrix()
        if kind == "sigma":
            c = datum.q_pair(arg, self.probe)
            for idx in range(trunc.dim):
                out[idx][idx] = c
            return out
        # Theta(de_i) raises the plus-part degree, Theta(df_i) lowers it
        shift = {"de": datum.alpha_root(arg) if kind == "de" else None,
                 "df": tuple(-x for x in datum.alpha_root(arg))
                 if kind == "df" else None,
                 "dk": datum.zero_root}[kind]
        act = {"de": lambda fr: self.act_e(arg, fr),
               "df": lambda fr: self.act_f(arg, fr),
               "dk": lambda fr: self.act_k(arg, fr)}[kind]
        for g in trunc.degrees:
            # target degree of Theta(d) on U^+_g
            tgt = tuple(a + b for a, b in zip(g, shift))
            if any(c < 0 for c in tgt) or tgt not in trunc.offsets:
                continue
            basis = self.model_basis(tgt)
            if not basis:
                continue
            vals = []
            for fr in basis:
                image = act(fr)
                fv = self.functional_vector(image)
                # restrict to the source degree g
                if image[1].gamma != g:
                    raise QflagError("fraction action landed at an "
                                     "unexpected drop")
                vals.append(fv)
            ginv = self.gram_inverse(tgt)
            block = linalg.mat_mul(ginv, vals)
            goff, toff = trunc.offsets[g], trunc.offsets[tgt]
            for r in range(len(block)):
                for cidx in range(len(block[0])):
                    out[toff + r][goff + cidx] = block[r][cidx]
        return out


def theta_build(ring: CoordRing, pairing: DrinfeldPairing, depth_ht: int,
                probes: Sequence[Weight], max_level: int = 8) -> dict:
    """Build the generator family both ways and compare exactly."""
    alg = ring.algebra
    datum = ring.datum
    trunc = UPlusTruncation(alg, depth_ht)
    formula = ThetaFormula(trunc, pairing)
    results = []
    gens: List[Tuple[str, object]] = []
    for i in range(datum.rank):
        gens.append(("de", i))
        gens.append(("df", i))
    gens.append(("dk", datum.rho))
    gens.append(("sigma", datum.rho))
    for probe in probes:
        direct = ThetaDirect(ring, trunc, probe, max_level=max_level)
        for kind, arg in gens:
            mf = formula.theta(tuple(probe), kind, arg)
            md = direct.theta(kind, arg)
            ok, cex = _compare(trunc, kind, mf, md)
            entry = {
                "instance": f"probe {datum.weight_str(tuple(probe))} "
                            f"{kind}({arg})",
                "pass": ok,
            }
            if cex:
                entry["counterexample"] = cex
            results.append(entry)
    return {"suite": "theta", "depth": depth_ht,
            "pass": all(r["pass"] for r in results), "results": results}


def _compare(trunc: UPlusTruncation, kind: str, mf: Matrix,
             md: Matrix) -> Tuple[bool, Optional[dict]]:
    """Compare entrywise; at boundary degrees of the truncation both
    routes produce the same truncated zero blocks."""
    datum = trunc.datum
    for g in trunc.degrees:
        goff = trunc.offsets[g]
        for cidx, w in enumerate(trunc.words[g]):
            col = goff + cidx
            for row in range(trunc.dim):
                if mf[row][col] != md[row][col]:
                    return False, {
                        "degree": datum.root_str(g), "word": list(w),
                        "row": row,
                        "formula": mf[row][col].to_str(),
                        "direct": md[row][col].to_str()}
    return True, None


def theta_faithfulness_probe(ring: CoordRing, pairing: DrinfeldPairing,
                             depth_ht: int, probes: Sequence[Weight],
                             span: Sequence[Sequence[Tuple[str, object]]]) -> dict:
    """Rank certificate: stack the formula-built family over the probes and
    measure the joint rank against the span size (linear independence on
    the window, not a proof of injectivity)."""
    alg = ring.algebra
    trunc = UPlusTruncation(alg, depth_ht)
    formula = ThetaFormula(trunc, pairing)
    rows: List[Vector] = []
    for word in span:
        vec: Vector = []
        for probe in probes:
            mat = linalg.identity(trunc.dim, ring.datum.l0)
            # op-algebra: Theta(d1 d2) = Theta(d2) Theta(d1)
            for kind, arg in word:
                mat = linalg.mat_mul(formula.theta(tuple(probe), kind, arg),
                                     mat)
            for r in mat:
                vec.extend(r)
        rows.append(vec)
    rk = linalg.rank(rows) if rows else 0
    return {
        "suite": "theta-faithfulness",
        "span_size": len(span),
        "rank": rk,
        "probes": [ring.datum.weight_str(tuple(p)) for p in probes],
        "depth": depth_ht,
        "pass": rk == len(span),
        "note": "finite-window linear-independence certificate only",
    }

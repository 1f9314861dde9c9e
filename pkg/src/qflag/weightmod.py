"""Weight modules with exact generator matrices.

Verma modules are truncated to a weight-drop window; simple modules are
built weight space by weight space as quotients of the Verma by the radical
of the contravariant form (the anti-automorphism swapping E and F), so a
module can be constructed only down to the drop actually needed.  Missing
weight spaces are flagged as either genuinely zero or truncated away, which
lets relation checks restrict themselves to the exact region.
"""

from __future__ import annotations

from fractions import Fraction
from threading import RLock
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import linalg
from .cartan import CartanDatum, CharacterPoly, RootSum, Weight, weyl_character
from .enveloping import UAlgebra, UElement, _content
from .errors import DominanceError, QflagError, SideMismatchError, TruncationError
from .linalg import Matrix, Vector
from .scalars import QScalar, exp_t_coefficient


class WeightModule:
    """A weight-graded left or right module given by generator matrices."""

    def __init__(self, algebra: UAlgebra, side: str,
                 index_weights: List[Weight],
                 gen: Dict[Tuple[str, int], Matrix],
                 missing_exact: Callable[[Weight], bool],
                 exact: bool,
                 labels: Optional[List[str]] = None,
                 distinguished: Optional[Dict[str, int]] = None,
                 name: str = "module"):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.algebra = algebra
        self.datum = algebra.datum
        self.side = side
        self.index_weights = list(index_weights)
        self.gen = gen
        self.missing_exact = missing_exact
        self.exact = exact
        self.labels = labels or [f"b{i}" for i in range(len(index_weights))]
        self.distinguished = distinguished or {}
        self.name = name
        self._weight_set = set(self.index_weights)

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.index_weights)

    def weights(self) -> List[Weight]:
        return sorted(self._weight_set)

    def weight_indices(self, w: Weight) -> List[int]:
        w = tuple(w)
        return [i for i, x in enumerate(self.index_weights) if x == w]

    def weight_dim(self, w: Weight) -> int:
        return len(self.weight_indices(w))

    def character(self) -> CharacterPoly:
        terms: Dict[Weight, int] = {}
        for w in self.index_weights:
            terms[w] = terms.get(w, 0) + 1
        return CharacterPoly(self.datum, terms)

    def zero_vector(self) -> Vector:
        return [self.datum.zero() for _ in range(self.dim)]

    def basis_vector(self, i: int) -> Vector:
        v = self.zero_vector()
        v[i] = self.datum.one()
        return v

    # -- actions -------------------------------------------------------------

    def k_matrix(self, lam: Sequence[int]) -> Matrix:
        n = self.dim
        out = linalg.zeros(n, n, self.datum.l0)
        for i, w in enumerate(self.index_weights):
            out[i][i] = self.datum.q_pair(lam, w)
        return out

    def gen_matrix(self, kind: str, i: int) -> Matrix:
        return self.gen[(kind, i)]

    def letter_matrix(self, letter) -> Matrix:
        kind, v = letter
        if kind == "k":
            return self.k_matrix(v)
        return self.gen[(kind, v)]

    def word_matrix(self, word) -> Matrix:
        """Matrix of a raw letter word acting on this module.  For a left
        module the word l1...ln acts by l1(l2(...(ln v))); for a right
        module v.(l1...ln) applies l1 first."""
        out = linalg.identity(self.dim, self.datum.l0)
        if self.side == "left":
            for letter in reversed(word):
                out = linalg.mat_mul(self.letter_matrix(letter), out)
        else:
            for letter in word:
                out = linalg.mat_mul(self.letter_matrix(letter), out)
        return out

    def act(self, u: UElement) -> Matrix:
        """Matrix of u (left action) or of right multiplication by u."""
        n = self.dim
        out = linalg.zeros(n, n, self.datum.l0)
        for (fw, lam, ew), c in u.terms.items():
            word = self.algebra.monomial_word(fw, lam, ew)
            m = self.word_matrix(word)
            out = linalg.mat_add(out, linalg.mat_scale(m, c))
        return out

    def apply(self, u: UElement, v: Vector) -> Vector:
        return linalg.mat_vec(self.act(u), v)

    # -- exactness bookkeeping --------------------------------------------------

    def step_delta(self, kind: str, i: int) -> Weight:
        """Weight shift on this module of one generator letter."""
        a = self.datum.alpha(i)
        if self.side == "left":
            return a if kind == "e" else tuple(-x for x in a)
        return tuple(-x for x in a) if kind == "e" else a

    def path_valid(self, start: Weight, word) -> bool:
        """True when applying the raw word to a vector of the given weight
        never passes through a truncated-away weight space."""
        w = tuple(start)
        letters = reversed(word) if self.side == "left" else word
        for kind, v in letters:
            if kind == "k":
                continue
            w = self.datum.weight_add(w, self.step_delta(kind, v))
            if w not in self._weight_set and not self.missing_exact(w):
                return False
        return True

    # -- reporting -------------------------------------------------------------

    def describe(self) -> dict:
        ch = self.character()
        return {
            "name": self.name,
            "side": self.side,
            "dim": self.dim,
            "weights": {self.datum.weight_str(w): self.weight_dim(w)
                        for w in self.weights()},
            "exact": self.exact,
            "distinguished": {k: self.labels[v]
                              for k, v in self.distinguished.items()},
        }

    def __repr__(self) -> str:
        return f"WeightModule({self.name}, side={self.side}, dim={self.dim})"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _drop_candidates(datum: CartanDatum, depth: RootSum) -> List[RootSum]:
    out = []

    def rec(prefix, i):
        if i == datum.rank:
            out.append(tuple(prefix))
            return
        for c in range(depth[i] + 1):
            rec(prefix + [c], i + 1)

    rec([], 0)
    return sorted(out, key=lambda g: (sum(g), g))


def verma(algebra: UAlgebra, lam: Weight, depth: RootSum,
          side: str = "left") -> WeightModule:
    """Verma module truncated to weight drops gamma <= depth componentwise."""
    datum = algebra.datum
    lam = tuple(lam)
    depth = tuple(depth)
    drops = _drop_candidates(datum, depth)
    index_weights: List[Weight] = []
    labels: List[str] = []
    slots: Dict[Tuple[RootSum, Tuple[int, ...]], int] = {}
    for g in drops:
        for w in algebra.basis(g).free_words:
            slots[(g, w)] = len(index_weights)
            index_weights.append(datum.weight_sub_root(lam, g))
            tag = "".join(str(i + 1) for i in w)
            labels.append(("f" + tag if tag else "v") + "@" + datum.weight_str(
                index_weights[-1]))
    n = len(index_weights)
    gen: Dict[Tuple[str, int], Matrix] = {}
    zero = datum.zero()
    for i in range(datum.rank):
        fm = linalg.zeros(n, n, datum.l0)
        em = linalg.zeros(n, n, datum.l0)
        for g in drops:
            basis = algebra.basis(g)
            for w in basis.free_words:
                col = slots[(g, w)]
                if side == "left":
                    gp = tuple(a + b for a, b in zip(g, datum.alpha_root(i)))
                    if all(x <= d for x, d in zip(gp, depth)):
                        for wb, c in algebra.basis(gp).reduce_word((i,) + w).items():
                            fm[slots[(gp, wb)]][col] = c
                    word = (("e", i),) + tuple(("f", j) for j in w)
                    for (fw, nu, ew), c in algebra.normal_form_word(word).items():
                        if ew:
                            continue
                        val = c * datum.q_pair(lam, nu)
                        gm = _content(fw, datum.rank)
                        em[slots[(gm, fw)]][col] = em[slots[(gm, fw)]][col] + val
                else:
                    gp = tuple(a + b for a, b in zip(g, datum.alpha_root(i)))
                    if all(x <= d for x, d in zip(gp, depth)):
                        for wb, c in algebra.basis(gp).reduce_word(w + (i,)).items():
                            em[slots[(gp, wb)]][col] = c
                    word = tuple(("e", j) for j in w) + (("f", i),)
                    for (fw, nu, ew), c in algebra.normal_form_word(word).items():
                        if fw:
                            continue
                        val = c * datum.q_pair(lam, nu)
                        gm = _content(ew, datum.rank)
                        fm[slots[(gm, ew)]][col] = fm[slots[(gm, ew)]][col] + val
        gen[("f", i)] = fm
        gen[("e", i)] = em

    def missing_exact(w: Weight) -> bool:
        g = datum.weight_sub(lam, w)
        gr = weight_to_root(datum, g)
        if gr is None:
            return True
        if any(c < 0 for c in gr):
            return True  # above the highest weight: genuinely zero
        return False     # below the truncation window

    mod = WeightModule(algebra, side, index_weights, gen, missing_exact,
                       exact=False, labels=labels,
                       distinguished={"highest": 0},
                       name=f"T{'r' if side == 'right' else ''}"
                            f"({datum.weight_str(lam)})|{depth}")
    mod.highest_weight = lam
    mod.depth = depth
    return mod


def weight_to_root(datum: CartanDatum, w: Weight) -> Optional[RootSum]:
    """Express a weight in simple-root coordinates if it lies in the root
    lattice; None otherwise.  Coordinates may be negative."""
    n = datum.rank
    aug = [[Fraction(datum.cartan[j][i]) for i in range(n)] + [Fraction(w[j])]
           for j in range(n)]
    for c in range(n):
        pr = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if pr is None:
            return None
        aug[c], aug[pr] = aug[pr], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    coords = [aug[r][n] for r in range(n)]
    if any(x.denominator != 1 for x in coords):
        return None
    return tuple(int(x) for x in coords)


class SimpleFactory:
    """Per-weight-space construction of the simple module V(lam)."""

    def __init__(self, algebra: UAlgebra, lam: Weight):
        datum = algebra.datum
        lam = tuple(lam)
        if not datum.is_dominant(lam):
            raise DominanceError(f"{lam} is not dominant")
        self.algebra = algebra
        self.datum = datum
        self.lam = lam
        self.char = weyl_character(datum, lam)
        w0 = datum.longest_word()
        low = datum.weyl_act(w0, lam)
        full = weight_to_root(datum, datum.weight_sub(lam, low))
        assert full is not None
        self.full_depth_ht = sum(full)
        self.drops: Dict[RootSum, int] = {}
        for w in self.char.terms:
            g = weight_to_root(datum, datum.weight_sub(lam, w))
            assert g is not None and all(c >= 0 for c in g)
            self.drops[g] = self.char.terms[w]
        self._lock = RLock()
        self._slices: Dict[RootSum, dict] = {}
        self._steps: Dict[tuple, Optional[Matrix]] = {}

    def _free_estep(self, gamma: RootSum, i: int) -> Matrix:
        """Raising action on the free (pre-quotient) drop-gamma space, with
        the torus tail evaluated at the highest weight.  Single-letter
        straightening only, so this stays cheap at large drops."""
        key = ("free-e", tuple(gamma), i)
        with self._lock:
            hit = self._steps.get(key)
        if hit is not None:
            return hit
        alg, datum, lam = self.algebra, self.datum, self.lam
        src = alg.basis(gamma).free_words
        gm = tuple(a - b for a, b in zip(gamma, datum.alpha_root(i)))
        tgt = {w: r for r, w in enumerate(alg.basis(gm).free_words)} \
            if all(c >= 0 for c in gm) else {}
        out = linalg.zeros(len(tgt), len(src), datum.l0)
        for col, w in enumerate(src):
            word = (("e", i),) + tuple(("f", j) for j in w)
            for (fw, nu, ew), c in alg.normal_form_word(word).items():
                if ew:
                    continue
                out[tgt[fw]][col] = out[tgt[fw]][col] + \
                    c * datum.q_pair(lam, nu)
        with self._lock:
            self._steps[key] = out
        return out

    def slice(self, gamma: RootSum) -> Optional[dict]:
        """Class data of the weight space at drop gamma, or None if zero.
        Memoized under a lock so concurrent readers see one table."""
        gamma = tuple(gamma)
        if gamma not in self.drops:
            return None
        with self._lock:
            hit = self._slices.get(gamma)
        if hit is not None:
            return hit
        alg, datum, lam = self.algebra, self.datum, self.lam
        basis = alg.basis(gamma)
        words = basis.free_words
        m = len(words)
        # contravariant Gram: row a is the top coefficient of the raising
        # word of a applied across the free space, built by row propagation
        gram = []
        for wa in words:
            drop = datum.zero_root
            row = [datum.one()]
            for i in wa:
                drop = tuple(x + y for x, y in
                             zip(drop, datum.alpha_root(i)))
                step = self._free_estep(drop, i)
                row = [linalg.row_dot(row, linalg.column(step, c))
                       for c in range(len(step[0]) if step else 0)]
            gram.append(row)
        ech, pivots = linalg.rref(gram)
        if len(pivots) != self.drops[gamma]:
            raise QflagError(
                f"contravariant-form rank {len(pivots)} at drop {gamma} "
                f"!= Weyl character dimension {self.drops[gamma]}")
        # class coordinates of the b-th basis word = column b of the echelon
        reduce_cols = [[ech[r][b] for r in range(len(pivots))]
                       for b in range(m)]
        data = {
            "gamma": gamma,
            "words": words,
            "pivots": pivots,          # representative word positions
            "reduce_cols": reduce_cols,
        }
        with self._lock:
            self._slices[gamma] = data
        return data

    def reduce_uminus(self, gamma: RootSum,
                      coords: Dict[Tuple[int, ...], QScalar]) -> Optional[Vector]:
        """Class coordinates of a U^-_{-gamma} element given in free-word
        coordinates; None when the weight space is zero."""
        data = self.slice(gamma)
        if data is None:
            return None
        pos = {w: i for i, w in enumerate(data["words"])}
        out = [self.datum.zero() for _ in data["pivots"]]
        for w, c in coords.items():
            col = data["reduce_cols"][pos[w]]
            for r, x in enumerate(col):
                if not x.is_zero():
                    out[r] = out[r] + c * x
        return out

    def slice_dim(self, gamma: RootSum) -> int:
        data = self.slice(gamma)
        return 0 if data is None else len(data["pivots"])

    def f_step(self, gamma: RootSum, i: int) -> Optional[Matrix]:
        """Matrix of f_i from the drop-gamma slice to drop gamma+alpha_i."""
        gamma = tuple(gamma)
        key = ("f", gamma, i)
        with self._lock:
            if key in self._steps:
                return self._steps[key]
        datum, alg = self.datum, self.algebra
        src = self.slice(gamma)
        gp = tuple(a + b for a, b in zip(gamma, datum.alpha_root(i)))
        out: Optional[Matrix] = None
        if src is not None and gp in self.drops:
            cols = []
            for prep in src["pivots"]:
                wrep = src["words"][prep]
                red = alg.basis(gp).reduce_word((i,) + wrep)
                cols.append(self.reduce_uminus(gp, red))
            out = linalg.from_columns(cols, datum.l0)
        with self._lock:
            self._steps[key] = out
        return out

    def e_step(self, gamma: RootSum, i: int) -> Optional[Matrix]:
        """Matrix of e_i from the drop-gamma slice to drop gamma-alpha_i."""
        gamma = tuple(gamma)
        key = ("e", gamma, i)
        with self._lock:
            if key in self._steps:
                return self._steps[key]
        datum, alg = self.datum, self.algebra
        src = self.slice(gamma)
        gm = tuple(a - b for a, b in zip(gamma, datum.alpha_root(i)))
        out: Optional[Matrix] = None
        if src is not None and all(c >= 0 for c in gm) and gm in self.drops:
            cols = []
            for prep in src["pivots"]:
                wrep = src["words"][prep]
                word = (("e", i),) + tuple(("f", j) for j in wrep)
                acc: Dict[Tuple[int, ...], QScalar] = {}
                for (fw, nu, ew), c in alg.normal_form_word(word).items():
                    if ew:
                        continue
                    v = c * datum.q_pair(self.lam, nu)
                    s = acc.get(fw)
                    acc[fw] = v if s is None else s + v
                cols.append(self.reduce_uminus(gm, acc))
            out = linalg.from_columns(cols, datum.l0)
        with self._lock:
            self._steps[key] = out
        return out

    def apply_eword(self, gamma: RootSum, vec: Vector,
                    eword: Tuple[int, ...]) -> Optional[Tuple[RootSum, Vector]]:
        """Apply e_{i1}...e_{im} (innermost letter first) to a slice vector."""
        datum = self.datum
        g = tuple(gamma)
        v = list(vec)
        for i in reversed(eword):
            m = self.e_step(g, i)
            if m is None:
                return None
            g = tuple(a - b for a, b in zip(g, datum.alpha_root(i)))
            v = linalg.mat_vec(m, v)
        return g, v

    def top_coefficient(self, gamma: RootSum, vec: Vector,
                        eword: Tuple[int, ...]) -> QScalar:
        """<v*_lam, e_word . v> for a drop-gamma slice vector."""
        res = self.apply_eword(gamma, vec, eword)
        if res is None:
            return self.datum.zero()
        g, v = res
        if any(g):
            return self.datum.zero()
        return v[0]

    def build(self, max_drop_ht: Optional[int] = None) -> WeightModule:
        datum, alg, lam = self.datum, self.algebra, self.lam
        cap = self.full_depth_ht if max_drop_ht is None else min(
            max_drop_ht, self.full_depth_ht)
        drops = sorted((g for g in self.drops if sum(g) <= cap),
                       key=lambda g: (sum(g), g))
        full = cap >= self.full_depth_ht
        index_weights: List[Weight] = []
        labels: List[str] = []
        slot: Dict[Tuple[RootSum, int], int] = {}
        for g in drops:
            data = self.slice(g)
            for r in range(len(data["pivots"])):
                slot[(g, r)] = len(index_weights)
                w = datum.weight_sub_root(lam, g)
                index_weights.append(w)
                labels.append(f"v{datum.weight_str(w)}#{r}")
        n = len(index_weights)
        gen: Dict[Tuple[str, int], Matrix] = {}
        for i in range(datum.rank):
            fm = linalg.zeros(n, n, datum.l0)
            em = linalg.zeros(n, n, datum.l0)
            for g in drops:
                data = self.slice(g)
                nloc = len(data["pivots"])
                gp = tuple(a + b for a, b in zip(g, datum.alpha_root(i)))
                step = self.f_step(g, i)
                if step is not None and sum(gp) <= cap:
                    for r in range(nloc):
                        for rr in range(len(step)):
                            fm[slot[(gp, rr)]][slot[(g, r)]] = step[rr][r]
                gm = tuple(a - b for a, b in zip(g, datum.alpha_root(i)))
                estep = self.e_step(g, i)
                if estep is not None:
                    for r in range(nloc):
                        for rr in range(len(estep)):
                            em[slot[(gm, rr)]][slot[(g, r)]] = estep[rr][r]
            gen[("f", i)] = fm
            gen[("e", i)] = em

        char = self.char

        def missing_exact(w: Weight) -> bool:
            g = weight_to_root(datum, datum.weight_sub(lam, w))
            if g is None or any(c < 0 for c in g):
                return True
            if g not in self.drops:
                return True        # zero weight space of the simple module
            return sum(g) <= cap   # inside cap but absent => genuinely zero

        mod = WeightModule(alg, "left", index_weights, gen, missing_exact,
                           exact=full, labels=labels,
                           distinguished={"highest": 0},
                           name=f"V({datum.weight_str(lam)})"
                                + ("" if full else f"|ht<={cap}"))
        mod.highest_weight = lam
        mod.factory = self
        mod.slot = dict(slot)
        return mod


def simple(algebra: UAlgebra, lam: Weight,
           max_drop_ht: Optional[int] = None) -> WeightModule:
    return SimpleFactory(algebra, lam).build(max_drop_ht)


def trivial(algebra: UAlgebra, side: str = "left") -> WeightModule:
    return simple(algebra, algebra.datum.zero_weight) if side == "left" \
        else restricted_dual(simple(algebra, algebra.datum.zero_weight))


def restricted_dual(mod: WeightModule) -> WeightModule:
    """The graded dual on the opposite side, with the pairing convention
    <v* h, v> = <v*, h v> (and its mirror for right modules)."""
    gen = {key: linalg.transpose(m) for key, m in mod.gen.items()}
    side = "right" if mod.side == "left" else "left"
    dual = WeightModule(mod.algebra, side, list(mod.index_weights), gen,
                        mod.missing_exact, exact=mod.exact,
                        labels=[lb + "*" for lb in mod.labels],
                        distinguished=dict(mod.distinguished),
                        name=mod.name + "*")
    dual.dual_of = mod
    if hasattr(mod, "highest_weight"):
        dual.highest_weight = mod.highest_weight
    return dual


def tensor(m1: WeightModule, m2: WeightModule) -> WeightModule:
    """Tensor product with the coproduct twist."""
    if m1.side != m2.side:
        raise SideMismatchError("tensor factors must share a side")
    alg = m1.algebra
    datum = alg.datum
    n1, n2 = m1.dim, m2.dim
    index_weights = []
    labels = []
    for a in range(n1):
        for b in range(n2):
            index_weights.append(datum.weight_add(m1.index_weights[a],
                                                  m2.index_weights[b]))
            labels.append(f"{m1.labels[a]}(x){m2.labels[b]}")
    gen: Dict[Tuple[str, int], Matrix] = {}
    for i in range(datum.rank):
        e1, f1 = m1.gen[("e", i)], m1.gen[("f", i)]
        e2, f2 = m2.gen[("e", i)], m2.gen[("f", i)]
        k1 = m1.k_matrix(datum.alpha(i))
        k2inv = m2.k_matrix(tuple(-x for x in datum.alpha(i)))
        id1 = linalg.identity(n1, datum.l0)
        id2 = linalg.identity(n2, datum.l0)
        # same block shapes on either side: for right modules the gen
        # matrices already encode right actions and Delta applies legwise
        gen[("e", i)] = linalg.mat_add(linalg.kron(e1, id2),
                                       linalg.kron(k1, e2))
        gen[("f", i)] = linalg.mat_add(linalg.kron(f1, k2inv),
                                       linalg.kron(id1, f2))

    def missing_exact(w: Weight) -> bool:
        if m1.exact and m2.exact:
            return True
        return False

    mod = WeightModule(alg, m1.side, index_weights, gen, missing_exact,
                       exact=m1.exact and m2.exact, labels=labels,
                       name=f"({m1.name})(x)({m2.name})")
    mod.factors = (m1, m2)
    return mod


# ---------------------------------------------------------------------------
# braid operators on modules
# ---------------------------------------------------------------------------

def _exp_matrix(mod: WeightModule, x: UElement, t_scale: int) -> Matrix:
    """exp_t of the action of x, with t = q**t_scale; terminates by
    nilpotence."""
    datum = mod.datum
    m = mod.act(x)
    out = linalg.identity(mod.dim, datum.l0)
    power = linalg.identity(mod.dim, datum.l0)
    n = 0
    while True:
        n += 1
        power = linalg.mat_mul(m, power)
        if linalg.is_zero_matrix(power):
            break
        if n > mod.dim + 2:
            raise TruncationError("exponential series does not terminate; "
                                  "module is not exact")
        coeff = exp_t_coefficient(n, t_scale, datum.l0)
        out = linalg.mat_add(out, linalg.mat_scale(power, coeff))
    return out


def braid_on_module(mod: WeightModule, i: int,
                    inverse: bool = False) -> Matrix:
    """The braid operator T_i on a finite-dimensional exact module; both
    triple-exponential forms are computed and must agree.  Memoized on the
    module (the exponentials dominate everything else at larger ranks)."""
    if not mod.exact:
        raise TruncationError("braid operators require an exact module")
    if mod.side != "left":
        raise SideMismatchError("braid_on_module acts on left modules; use "
                                "transpose_braid for right modules")
    cache = getattr(mod, "_braid_cache", None)
    if cache is None:
        cache = {}
        mod._braid_cache = cache
    hit = cache.get((i, inverse))
    if hit is not None:
        return hit
    alg = mod.algebra
    datum = mod.datum
    di = datum.d(i)
    qi = datum.q_power(di)
    # H_i: diagonal q_i^{m(m+1)/2} with m = (weight, alpha_i^vee)
    h = linalg.zeros(mod.dim, mod.dim, datum.l0)
    for a, w in enumerate(mod.index_weights):
        mcoef = w[i]
        h[a][a] = datum.q_power(Fraction(di * mcoef * (mcoef + 1), 2))
    e_i, f_i = alg.e(i), alg.f(i)
    ki, kiv = alg.k_alpha(i, 1), alg.k_alpha(i, -1)
    form1 = linalg.mat_mul(
        _exp_matrix(mod, (ki * f_i).scale(qi), -di),
        linalg.mat_mul(
            _exp_matrix(mod, -e_i, -di),
            linalg.mat_mul(
                _exp_matrix(mod, (kiv * f_i).scale(qi.inverse()), -di), h)))
    form2 = linalg.mat_mul(
        _exp_matrix(mod, -(kiv * e_i).scale(qi), -di),
        linalg.mat_mul(
            _exp_matrix(mod, f_i, -di),
            linalg.mat_mul(
                _exp_matrix(mod, -(ki * e_i).scale(qi.inverse()), -di), h)))
    if not linalg.mat_eq(form1, form2):
        raise QflagError("the two triple-exponential forms of T_i disagree")
    out = linalg.inverse(form1) if inverse else form1
    cache[(i, inverse)] = out
    return out


def braid_word(mod: WeightModule, word: Sequence[int],
               inverse: bool = False) -> Matrix:
    """T_w along the canonical reduced word of w."""
    red = mod.datum.weyl_canonical(word)
    out = linalg.identity(mod.dim, mod.datum.l0)
    if not inverse:
        # T_w = T_{i1} ... T_{in}: rightmost factor acts first
        for i in red:
            out = linalg.mat_mul(out, braid_on_module(mod, i))
    else:
        for i in reversed(red):
            out = linalg.mat_mul(out, braid_on_module(mod, i, inverse=True))
    return out


def transpose_braid(mod: WeightModule, word: Sequence[int],
                    inverse: bool = False) -> Matrix:
    """The operator on a right module V defined by pairing against T_w on
    the dual left module: <tT_w(v), v*> = <v, T_w(v*)>."""
    if mod.side != "right":
        raise SideMismatchError("transpose_braid acts on right modules")
    dual = restricted_dual(mod)  # left module with the transposed matrices
    return linalg.transpose(braid_word(dual, word, inverse=inverse))


# ---------------------------------------------------------------------------
# relation checking
# ---------------------------------------------------------------------------

def defining_relations(algebra: UAlgebra):
    """The defining relations as lists of (coefficient, raw word) pairs
    summing to zero, keeping the monomial paths for validity tests."""
    datum = algebra.datum
    rels = []
    one = datum.one()
    for lam, mu in [(datum.fundamental(0), datum.fundamental(datum.rank - 1)),
                    (datum.alpha(0), datum.rho)]:
        rels.append((f"k{lam}k{mu}=k(sum)", [
            (one, (("k", lam), ("k", mu))),
            (-one, (("k", datum.weight_add(lam, mu)),)),
        ]))
    for i in range(datum.rank):
        ai = datum.alpha(i)
        for lam in [datum.fundamental(j) for j in range(datum.rank)]:
            rels.append((f"k{lam}e{i}", [
                (one, (("k", lam), ("e", i))),
                (-datum.q_pair(lam, ai), (("e", i), ("k", lam))),
            ]))
            rels.append((f"k{lam}f{i}", [
                (one, (("k", lam), ("f", i))),
                (-datum.q_pair(tuple(-x for x in lam), ai),
                 (("f", i), ("k", lam))),
            ]))
        for j in range(datum.rank):
            terms = [(one, (("e", i), ("f", j))),
                     (-one, (("f", j), ("e", i)))]
            if i == j:
                c = (algebra.qi(i) - algebra.qi(i, -1)).inverse()
                terms.append((-c, (("k", ai),)))
                terms.append((c, (("k", tuple(-x for x in ai)),)))
            rels.append((f"[e{i},f{j}]", terms))
            if i != j:
                words, coeffs = algebra.serre_elements()[(i, j)]
                rels.append((f"serreE({i},{j})",
                             [(c, tuple(("e", l) for l in w))
                              for w, c in zip(words, coeffs)]))
                rels.append((f"serreF({i},{j})",
                             [(c, tuple(("f", l) for l in w))
                              for w, c in zip(words, coeffs)]))
    return rels


def check_module_relations(mod: WeightModule) -> List[str]:
    """Verify the defining relations as matrix identities on the exact
    region of the module; returns a list of failure descriptions."""
    failures = []
    datum = mod.datum
    for name, terms in defining_relations(mod.algebra):
        mats = [(c, mod.word_matrix(w)) for c, w in terms]
        for col in range(mod.dim):
            wt = mod.index_weights[col]
            if not all(mod.path_valid(wt, w) for _c, w in terms):
                continue
            acc = [datum.zero() for _ in range(mod.dim)]
            for c, m in mats:
                for r in range(mod.dim):
                    if not m[r][col].is_zero():
                        acc[r] = acc[r] + c * m[r][col]
            for r, x in enumerate(acc):
                if not x.is_zero():
                    failures.append(
                        f"{mod.name}: relation {name} fails at basis "
                        f"{mod.labels[col]} -> {mod.labels[r]}: {x.to_str()}")
                    break
    return failures


def module_map_commutes(source: WeightModule, target: WeightModule,
                        matrix: Matrix) -> bool:
    """Check that a linear map intertwines all generator actions."""
    datum = source.datum
    gens = [("e", i) for i in range(datum.rank)] + \
           [("f", i) for i in range(datum.rank)]
    for key in gens:
        lhs = linalg.mat_mul(matrix, source.gen[key])
        rhs = linalg.mat_mul(target.gen[key], matrix)
        if not linalg.mat_eq(lhs, rhs):
            return False
    for lam in [datum.fundamental(j) for j in range(datum.rank)]:
        lhs = linalg.mat_mul(matrix, source.k_matrix(lam))
        rhs = linalg.mat_mul(target.k_matrix(lam), matrix)
        if not linalg.mat_eq(lhs, rhs):
            return False
    return True

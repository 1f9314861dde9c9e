"""Root systems of finite type (rank <= 2 presets, extensible by Cartan
matrix), the weight lattice, the Weyl group, and formal characters.

Weights are integer tuples in the fundamental-weight basis, root sums are
nonnegative integer tuples in the simple-root basis.  The bilinear form is
normalized so short simple roots have squared length 2; the root-of-q
denominator l0 is the minimal positive integer clearing all (Lambda,Lambda)
pairings.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import lcm
from threading import RLock
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DominanceError, ParseError, QflagError
from .scalars import QScalar

Weight = Tuple[int, ...]     # fundamental-weight coordinates
RootSum = Tuple[int, ...]    # simple-root coordinates, >= 0 entrywise
WeylWord = Tuple[int, ...]   # simple-reflection indices, 0-based

_PRESETS: Dict[str, Tuple[Tuple[Tuple[int, ...], ...]]] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "G2": ((2, -1), (-3, 2)),
}

DEFAULT_MAX_HEIGHT = 8


def _env_max_height() -> int:
    raw = os.environ.get("QFLAG_MAX_HEIGHT")
    if raw is None:
        return DEFAULT_MAX_HEIGHT
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_HEIGHT


class CartanDatum:
    """A finite-type Cartan matrix with symmetrizers, bilinear form and l0."""

    def __init__(self, cartan_matrix: Sequence[Sequence[int]],
                 name: str = "custom", max_height: Optional[int] = None):
        a = tuple(tuple(int(x) for x in row) for row in cartan_matrix)
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("Cartan matrix must be square")
        for i in range(n):
            if a[i][i] != 2:
                raise ValueError("diagonal entries must equal 2")
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise ValueError("off-diagonal entries must be <= 0")
                if i != j and (a[i][j] == 0) != (a[j][i] == 0):
                    raise ValueError("matrix not symmetrizable")
        self.name = name
        self.rank = n
        self.cartan = a
        self.symmetrizers = _minimal_symmetrizers(a)
        self._check_finite_type()
        # (omega_i, omega_j) table; l0 clears all of them
        inv = _rational_inverse(a)
        self._omega_pair = tuple(
            tuple(inv[j][i] * self.symmetrizers[j] for j in range(n))
            for i in range(n))
        den = 1
        for row in self._omega_pair:
            for x in row:
                den = lcm(den, x.denominator)
        self.l0 = den
        self.max_height = max_height if max_height is not None else _env_max_height()
        self._lock = RLock()
        self._weyl: Optional[Dict[Tuple[Tuple[int, ...], ...], WeylWord]] = None

    # -- element constructors -------------------------------------------------

    def weight(self, *coords: int) -> Weight:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise ValueError("wrong number of weight coordinates")
        return tuple(int(c) for c in coords)

    def root_sum(self, *coords: int) -> RootSum:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise ValueError("wrong number of root coordinates")
        out = tuple(int(c) for c in coords)
        if any(c < 0 for c in out):
            raise ValueError("root sums have nonnegative coordinates")
        return out

    @property
    def zero_weight(self) -> Weight:
        return (0,) * self.rank

    @property
    def zero_root(self) -> RootSum:
        return (0,) * self.rank

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    def fundamental(self, i: int) -> Weight:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def alpha(self, i: int) -> Weight:
        """Simple root alpha_i in fundamental-weight coordinates."""
        return tuple(self.cartan[j][i] for j in range(self.rank))

    def alpha_root(self, i: int) -> RootSum:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def root_to_weight(self, gamma: Sequence[int]) -> Weight:
        return tuple(sum(self.cartan[j][i] * gamma[i] for i in range(self.rank))
                     for j in range(self.rank))

    def weight_sub_root(self, lam: Weight, gamma: Sequence[int]) -> Weight:
        g = self.root_to_weight(gamma)
        return tuple(a - b for a, b in zip(lam, g))

    def weight_add(self, a: Weight, b: Weight) -> Weight:
        return tuple(x + y for x, y in zip(a, b))

    def weight_sub(self, a: Weight, b: Weight) -> Weight:
        return tuple(x - y for x, y in zip(a, b))

    def weight_neg(self, a: Weight) -> Weight:
        return tuple(-x for x in a)

    def is_dominant(self, lam: Weight) -> bool:
        return all(c >= 0 for c in lam)

    def height(self, gamma: Sequence[int]) -> int:
        return sum(gamma)

    # -- bilinear form -----------------------------------------------------

    def pair_ww(self, lam: Sequence[int], mu: Sequence[int]) -> Fraction:
        """(lam, mu) for two weights in fundamental coordinates."""
        out = Fraction(0)
        for i, a in enumerate(lam):
            if not a:
                continue
            for j, b in enumerate(mu):
                if b:
                    out += Fraction(a * b) * self._omega_pair[i][j]
        return out

    def pair_wr(self, lam: Sequence[int], gamma: Sequence[int]) -> Fraction:
        """(lam, gamma) for a weight and a root-lattice element: integral
        multiple of 1/1? -- in general a Fraction in (1/l0)Z."""
        return self.pair_ww(lam, self.root_to_weight(gamma))

    def d(self, i: int) -> int:
        return self.symmetrizers[i]

    def root_pair(self, gamma: Sequence[int], delta: Sequence[int]) -> Fraction:
        return self.pair_ww(self.root_to_weight(gamma), self.root_to_weight(delta))

    def q_power(self, exp) -> QScalar:
        return QScalar.q_power(exp, self.l0)

    def q_pair(self, lam: Sequence[int], mu: Sequence[int]) -> QScalar:
        """q**(lam,mu) for weights in fundamental coordinates."""
        return QScalar.q_power(self.pair_ww(lam, mu), self.l0)

    def one(self) -> QScalar:
        return QScalar.one(self.l0)

    def zero(self) -> QScalar:
        return QScalar.zero(self.l0)

    def scalar(self, n: int) -> QScalar:
        return QScalar.integer(n, self.l0)

    # -- Weyl group ------------------------------------------------------------

    def _simple_reflection_matrix(self, i: int) -> Tuple[Tuple[int, ...], ...]:
        n = self.rank
        alpha_i = self.alpha(i)
        rows = []
        for j in range(n):
            row = [1 if j == k else 0 for k in range(n)]
            # s_i(omega_k) = omega_k - delta_{ik} alpha_i
            row = [row[k] - (alpha_i[j] if k == i else 0) for k in range(n)]
            rows.append(tuple(row))
        return tuple(rows)

    def _apply_matrix(self, m, lam: Sequence[int]) -> Weight:
        return tuple(sum(m[j][k] * lam[k] for k in range(self.rank))
                     for j in range(self.rank))

    def reflect(self, i: int, lam: Sequence[int]) -> Weight:
        alpha_i = self.alpha(i)
        c = lam[i]
        return tuple(x - c * a for x, a in zip(lam, alpha_i))

    def weyl_act(self, word: Sequence[int], lam: Sequence[int],
                 shifted: bool = False) -> Weight:
        """Apply w = s_{i1}...s_{ik} to lam; shifted uses w(lam+rho)-rho."""
        v = tuple(lam)
        if shifted:
            v = self.weight_add(v, self.rho)
        for i in reversed(list(word)):
            v = self.reflect(i, v)
        if shifted:
            v = self.weight_sub(v, self.rho)
        return v

    def weyl_elements(self) -> Dict[Tuple[Tuple[int, ...], ...], WeylWord]:
        """Matrix (on weight coords) -> canonical reduced word, via BFS."""
        with self._lock:
            if self._weyl is not None:
                return self._weyl
            n = self.rank
            ident = tuple(tuple(1 if i == j else 0 for j in range(n))
                          for i in range(n))
            out: Dict[Tuple[Tuple[int, ...], ...], WeylWord] = {ident: ()}
            frontier = [ident]
            gens = [self._simple_reflection_matrix(i) for i in range(n)]
            while frontier:
                nxt = []
                for m in frontier:
                    w = out[m]
                    for i in range(n):
                        # right multiply: (w s_i) acts by m @ s_i
                        prod = tuple(
                            tuple(sum(m[r][k] * gens[i][k][c] for k in range(n))
                                  for c in range(n))
                            for r in range(n))
                        if prod not in out:
                            out[prod] = w + (i,)
                            nxt.append(prod)
                frontier = nxt
                if len(out) > 10000:
                    raise QflagError("Weyl group too large; not finite type?")
            self._weyl = out
            return out

    def weyl_canonical(self, word: Sequence[int]) -> WeylWord:
        """Canonical reduced word of the element represented by ``word``."""
        m = self._word_matrix(word)
        return self.weyl_elements()[m]

    def _word_matrix(self, word: Sequence[int]):
        n = self.rank
        m = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        gens = [self._simple_reflection_matrix(i) for i in range(n)]
        for i in word:
            g = gens[i]
            m = tuple(tuple(sum(m[r][k] * g[k][c] for k in range(n))
                            for c in range(n)) for r in range(n))
        return m

    def weyl_length(self, word: Sequence[int]) -> int:
        return len(self.weyl_canonical(word))

    def longest_word(self) -> WeylWord:
        elems = self.weyl_elements()
        return max(elems.values(), key=lambda w: (len(w), w))

    def all_weyl_words(self) -> List[WeylWord]:
        return sorted(self.weyl_elements().values(), key=lambda w: (len(w), w))

    def weyl_det(self, word: Sequence[int]) -> int:
        return -1 if self.weyl_length(word) % 2 else 1

    # -- roots -------------------------------------------------------------

    def positive_roots(self) -> List[RootSum]:
        """All positive roots in simple-root coordinates, sorted by height."""
        return list(self._positive_roots_cached())

    @lru_cache(maxsize=None)
    def _positive_roots_cached(self) -> Tuple[RootSum, ...]:
        found = set()
        frontier = [self.alpha_root(i) for i in range(self.rank)]
        allr = set()
        while frontier:
            nxt = []
            for g in frontier:
                if g in allr:
                    continue
                allr.add(g)
                wt = self.root_to_weight(g)
                for i in range(self.rank):
                    r = self.reflect(i, wt)
                    # convert back to root coordinates: gamma' = gamma - wt_i*alpha_i
                    gg = list(g)
                    gg[i] -= wt[i]
                    gg = tuple(gg)
                    if gg not in allr:
                        nxt.append(gg)
            frontier = nxt
        pos = sorted((g for g in allr if all(c >= 0 for c in g) and any(g)),
                     key=lambda g: (sum(g), g))
        return tuple(pos)

    def _check_finite_type(self) -> None:
        # positive definiteness of the symmetrized matrix, rank <= 4 suffices
        n = self.rank
        sym = [[Fraction(self.symmetrizers[i] * self.cartan[i][j])
                for j in range(n)] for i in range(n)]
        for k in range(1, n + 1):
            if _det([row[:k] for row in sym[:k]]) <= 0:
                raise ValueError("Cartan matrix is not of finite type")

    # -- rendering -------------------------------------------------------------

    def weight_str(self, lam: Weight) -> str:
        return "[" + ",".join(str(c) for c in lam) + "]"

    def root_str(self, gamma: RootSum) -> str:
        return "<" + ",".join(str(c) for c in gamma) + ">"

    def parse_weight(self, text: str) -> Weight:
        t = text.strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise ParseError(f"weight must look like [a,b]: {text!r}")
        return self.weight(*[int(x) for x in t[1:-1].split(",")])

    def parse_root(self, text: str) -> RootSum:
        t = text.strip()
        if not (t.startswith("<") and t.endswith(">")):
            raise ParseError(f"root sum must look like <a,b>: {text!r}")
        return self.root_sum(*[int(x) for x in t[1:-1].split(",")])

    def describe(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "cartan_matrix": [list(r) for r in self.cartan],
            "symmetrizers": list(self.symmetrizers),
            "l0": self.l0,
            "positive_roots": [self.root_str(g) for g in self.positive_roots()],
            "weyl_order": len(self.weyl_elements()),
        }

    def __repr__(self) -> str:
        return f"CartanDatum({self.name}, rank={self.rank}, l0={self.l0})"


def _det(m) -> Fraction:
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    out = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = Fraction(m[0][j]) * _det(minor)
        out += term if j % 2 == 0 else -term
    return out


def _rational_inverse(a) -> List[List[Fraction]]:
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        pr = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[pr] = aug[pr], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _minimal_symmetrizers(a) -> Tuple[int, ...]:
    n = len(a)
    # d_i a_ij = d_j a_ji with minimal positive integers
    d = [Fraction(1)] * n
    fixed = [False] * n
    d[0] = Fraction(1)
    fixed[0] = True
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if a[i][j] and fixed[i] and not fixed[j]:
                    d[j] = d[i] * Fraction(a[i][j], a[j][i])
                    fixed[j] = True
                    changed = True
    if not all(fixed):
        # disconnected diagram: remaining components start at 1
        for i in range(n):
            if not fixed[i]:
                d[i] = Fraction(1)
                fixed[i] = True
    den = 1
    for x in d:
        den = lcm(den, x.denominator)
    ints = [x * den for x in d]
    g = 0
    for x in ints:
        g = gcd_int(g, int(x))
    return tuple(int(x) // g for x in ints)


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


def preset(name: str, max_height: Optional[int] = None) -> CartanDatum:
    key = name.upper()
    if key == "C2":
        key = "B2"  # same abstract datum up to relabeling at rank 2
    if key not in _PRESETS:
        raise ParseError(f"unknown preset {name!r}; use A1, A2, B2/C2 or G2")
    return CartanDatum(_PRESETS[key], name=key, max_height=max_height)


# ---------------------------------------------------------------------------
# formal characters
# ---------------------------------------------------------------------------

class CharacterPoly:
    """Finitely supported integer-valued function on the weight lattice."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: CartanDatum, terms: Optional[Dict[Weight, int]] = None):
        self.datum = datum
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, datum: CartanDatum, lam: Weight, c: int = 1) -> "CharacterPoly":
        return cls(datum, {tuple(lam): c})

    def __add__(self, other: "CharacterPoly") -> "CharacterPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return CharacterPoly(self.datum, out)

    def __sub__(self, other: "CharacterPoly") -> "CharacterPoly":
        return self + other.scale(-1)

    def scale(self, c: int) -> "CharacterPoly":
        return CharacterPoly(self.datum, {w: c * k for w, k in self.terms.items()})

    def __mul__(self, other: "CharacterPoly") -> "CharacterPoly":
        out: Dict[Weight, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = tuple(a + b for a, b in zip(w1, w2))
                s = out.get(w, 0) + c1 * c2
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return CharacterPoly(self.datum, out)

    def coeff(self, lam: Weight) -> int:
        return self.terms.get(tuple(lam), 0)

    def weyl_image(self, word: Sequence[int]) -> "CharacterPoly":
        return CharacterPoly(self.datum, {
            self.datum.weyl_act(word, w): c for w, c in self.terms.items()})

    def total(self) -> int:
        return sum(self.terms.values())

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CharacterPoly)
                and self.terms == other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            parts.append(f"{c}*e{self.datum.weight_str(w)}")
        return " + ".join(parts)

    def describe(self) -> dict:
        return {self.datum.weight_str(w): c for w, c in sorted(self.terms.items())}


def kostant_dim(datum: CartanDatum, gamma: RootSum) -> int:
    """Number of multisets of positive roots summing to gamma."""
    gamma = tuple(gamma)
    if any(c < 0 for c in gamma):
        raise ValueError("gamma must lie in Q^+")
    roots = datum.positive_roots()

    @lru_cache(maxsize=None)
    def count(rest: RootSum, idx: int) -> int:
        if not any(rest):
            return 1
        if idx >= len(roots):
            return 0
        total = 0
        r = roots[idx]
        cur = rest
        while True:
            total += count(cur, idx + 1)
            nxt = tuple(a - b for a, b in zip(cur, r))
            if any(c < 0 for c in nxt):
                break
            cur = nxt
        return total

    return count(gamma, 0)


def verma_character(datum: CartanDatum, lam: Weight, depth: RootSum) -> CharacterPoly:
    """Truncation of e^lam / prod_{alpha>0} (1 - e^-alpha) to drops <= depth
    (componentwise in simple-root coordinates)."""
    depth = tuple(depth)
    # expand prod (1 + e^-a + e^-2a + ...) over Q^+ coordinates <= depth
    series: Dict[RootSum, int] = {datum.zero_root: 1}
    for alpha in datum.positive_roots():
        new: Dict[RootSum, int] = {}
        for g, c in series.items():
            k = 0
            while True:
                gg = tuple(a + k * b for a, b in zip(g, alpha))
                if any(x > d for x, d in zip(gg, depth)):
                    break
                new[gg] = new.get(gg, 0) + c
                k += 1
        series = new
    terms = {datum.weight_sub_root(lam, g): c for g, c in series.items()}
    return CharacterPoly(datum, terms)


def weyl_character(datum: CartanDatum, lam: Weight) -> CharacterPoly:
    """Character of the simple module of highest weight lam via the
    alternating-sum formula, with exact long division by the Weyl
    denominator (zero remainder asserted)."""
    lam = tuple(lam)
    if not datum.is_dominant(lam):
        raise DominanceError(f"{lam} is not dominant")
    num = CharacterPoly(datum)
    for word in datum.all_weyl_words():
        w_lam = datum.weyl_act(word, lam, shifted=True)
        num = num + CharacterPoly.monomial(datum, w_lam, datum.weyl_det(word))
    den = CharacterPoly.monomial(datum, datum.zero_weight, 1)
    for alpha in datum.positive_roots():
        den = den * (CharacterPoly.monomial(datum, datum.zero_weight, 1)
                     - CharacterPoly.monomial(
                         datum, datum.weight_neg(datum.root_to_weight(alpha)), 1))

    def order_key(w: Weight):
        return (datum.pair_ww(w, datum.rho), w)

    quot: Dict[Weight, int] = {}
    rem = num
    guard = 0
    while rem.terms:
        guard += 1
        if guard > 100000:
            raise QflagError("character division did not terminate")
        lead = max(rem.terms, key=order_key)
        c = rem.terms[lead]
        quot[lead] = quot.get(lead, 0) + c
        rem = rem - CharacterPoly.monomial(datum, lead, c) * den
    return CharacterPoly(datum, quot)

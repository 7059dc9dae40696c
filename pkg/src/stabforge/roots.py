"""Root systems of the simple types with their Weyl reflection actions.

Conventions, fixed once for the whole package:

* Simple roots are numbered as in Bourbaki's plates (B has a short last root,
  C a long last root, G2 a short first root, the E branch node is number 2).
* ``cartan[i][j]`` is the value of the root ``alpha_j`` on the coroot
  ``alpha_i``-check, i.e. 2(a_i, a_j)/(a_i, a_i).
* Roots are stored as integer coordinate tuples in the simple-root basis,
  which keeps every reflection matrix integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

VALID_RANKS = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (3, None),
               "E": (6, 8), "F": (4, 4), "G": (2, 2)}

ROOT_COUNTS = {"A": lambda l: l * (l + 1), "B": lambda l: 2 * l * l,
               "C": lambda l: 2 * l * l, "D": lambda l: 2 * l * (l - 1),
               "E": lambda l: {6: 72, 7: 126, 8: 240}[l],
               "F": lambda l: 48, "G": lambda l: 12}


class InvalidType(ValueError):
    pass


def cartan_matrix(label: str, rank: int) -> List[List[int]]:
    l = rank
    a = [[2 if i == j else 0 for j in range(l)] for i in range(l)]

    def edge(i, j, vij=-1, vji=-1):
        a[i][j] = vij
        a[j][i] = vji

    if label in ("A", "B", "C"):
        for i in range(l - 1):
            edge(i, i + 1)
        if label == "B" and l >= 2:
            # short last root: <a_{l-1}, a_l^vee> = -2
            edge(l - 2, l - 1, -1, -2)
        if label == "C" and l >= 2:
            edge(l - 2, l - 1, -2, -1)
    elif label == "D":
        for i in range(l - 2):
            edge(i, i + 1)
        edge(l - 3, l - 1)
    elif label == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: l - 1]
        for u, v in zip(chain, chain[1:]):
            edge(u, v)
        edge(1, 3)
    elif label == "F":
        edge(0, 1)
        edge(1, 2, -1, -2)
        edge(2, 3)
    elif label == "G":
        edge(0, 1, -3, -1)
    return a


def _symmetrizer(cartan: List[List[int]]) -> List[int]:
    """Integers d_i with d_i * cartan[i][j] symmetric; short roots get 1."""
    l = len(cartan)
    d = [None] * l
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if i != j and cartan[i][j] != 0 and d[j] is None:
                d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                stack.append(j)
    scale = min(x for x in d)
    d = [x / scale for x in d]
    assert all(x.denominator == 1 for x in d)
    return [int(x) for x in d]


@dataclass(frozen=True)
class RootSystem:
    label: str
    rank: int
    cartan: Tuple[Tuple[int, ...], ...]
    simple_roots: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Tuple[int, ...], ...]  # sorted by height, then lex
    reflections: Tuple[Tuple[Tuple[int, ...], ...], ...]  # on root coordinates
    root_norms: Tuple[int, ...]  # d_i, squared length relative to short roots

    @property
    def all_roots(self) -> Tuple[Tuple[int, ...], ...]:
        return self.positive_roots + tuple(tuple(-x for x in r) for r in self.positive_roots)

    @property
    def n_roots(self) -> int:
        return 2 * len(self.positive_roots)

    @property
    def coxeter_number(self) -> int:
        return self.n_roots // self.rank

    def pairing(self, root: Sequence[int], i: int) -> int:
        """<root, alpha_i-check>."""
        return sum(self.cartan[i][j] * root[j] for j in range(self.rank))

    def weight_coords(self, root: Sequence[int]) -> Tuple[int, ...]:
        """Coordinates of a root in the fundamental-weight basis."""
        return tuple(self.pairing(root, i) for i in range(self.rank))

    def height(self, root: Sequence[int]) -> int:
        return sum(root)

    def is_root(self, v: Sequence[int]) -> bool:
        t = tuple(v)
        return t in self._root_set()

    @lru_cache(maxsize=None)
    def _root_set(self):
        return frozenset(self.all_roots)

    def root_norm(self, root: Sequence[int]) -> int:
        """Squared length relative to the short roots (1, 2 or 3)."""
        n = self.inner(root, root)
        assert n % 2 == 0
        return n // 2

    def inner(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Symmetrized pairing: equals 2(x, y) with short roots of norm 1."""
        return sum(self.root_norms[i] * self.cartan[i][j] * x[j] * y[i]
                   for i in range(self.rank) for j in range(self.rank))

    def coroot(self, root: Sequence[int]) -> Tuple[int, ...]:
        """Coroot coordinates (in the simple-coroot basis) of any root."""
        d = self.root_norm(root)
        out = []
        for i in range(self.rank):
            c = Fraction(root[i] * self.root_norms[i], d)
            assert c.denominator == 1
            out.append(int(c))
        return tuple(out)

    def coroot_reflections(self) -> List[List[List[int]]]:
        """Simple reflections acting on simple-coroot coordinates."""
        l = self.rank
        mats = []
        for i in range(l):
            m = [[1 if r == c else 0 for c in range(l)] for r in range(l)]
            for j in range(l):
                m[i][j] -= self.cartan[j][i]
            mats.append(m)
        return mats

    def fundamental_weights(self) -> List[List[Fraction]]:
        """lambda_i in simple-root coordinates: columns of the inverse Cartan."""
        l = self.rank
        aug = [[Fraction(self.cartan[i][j]) for j in range(l)] + [Fraction(int(i == k)) for k in range(l)]
               for i in range(l)]
        for c in range(l):
            piv = next(r for r in range(c, l) if aug[r][c] != 0)
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [x * inv for x in aug[c]]
            for r in range(l):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        inv_rows = [row[l:] for row in aug]  # cartan^{-1}
        return [[inv_rows[j][i] for j in range(l)] for i in range(l)]


def build_root_system(label: str, rank: int) -> RootSystem:
    """Enumerate the root system by the standard root-string construction."""
    lo, hi = VALID_RANKS.get(label, (None, None))
    if lo is None or rank < lo or (hi is not None and rank > hi):
        raise InvalidType(f"no simple type {label}{rank}")
    cartan = cartan_matrix(label, rank)
    l = rank
    simple = [tuple(1 if j == i else 0 for j in range(l)) for i in range(l)]
    known = set(simple)
    by_height: Dict[int, List[Tuple[int, ...]]] = {1: list(simple)}
    h = 1
    while by_height.get(h):
        nxt: List[Tuple[int, ...]] = []
        for beta in by_height[h]:
            for i in range(l):
                # length of the alpha_i-string below beta
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if all(x == 0 for x in down):
                        break  # beta is alpha_i itself
                    if tuple(down) in known:
                        p += 1
                    else:
                        break
                pairing = sum(cartan[i][j] * beta[j] for j in range(l))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    t = tuple(up)
                    if t not in known:
                        known.add(t)
                        nxt.append(t)
        if nxt:
            by_height[h + 1] = sorted(set(nxt))
        h += 1
    positive = tuple(r for hh in sorted(by_height) for r in sorted(by_height[hh]))
    assert 2 * len(positive) == ROOT_COUNTS[label](rank), (label, rank, len(positive))
    reflections = []
    for i in range(l):
        m = [[1 if r == c else 0 for c in range(l)] for r in range(l)]
        for j in range(l):
            m[i][j] -= cartan[i][j]
        reflections.append(tuple(tuple(row) for row in m))
    return RootSystem(
        label=label,
        rank=rank,
        cartan=tuple(tuple(row) for row in cartan),
        simple_roots=tuple(simple),
        positive_roots=positive,
        reflections=tuple(reflections),
        root_norms=tuple(_symmetrizer(cartan)),
    )


def reflect(matrix, vec):
    return tuple(sum(matrix[r][c] * vec[c] for c in range(len(vec))) for r in range(len(matrix)))


def torsion_and_bad_primes(datum: RootSystem) -> Tuple[frozenset, frozenset]:
    """Torsion primes and primes that are not very good for the type.

    Low-rank coincidences follow the classification: B2 behaves like C2 and
    D3 like A3.
    """
    label, l = datum.label, datum.rank
    if label == "B" and l == 2:
        label = "C"
    if label == "D" and l == 3:
        label, l = "A", 3

    def prime_divisors(n):
        out = set()
        d = 2
        while d * d <= n:
            while n % d == 0:
                out.add(d)
                n //= d
            d += 1
        if n > 1:
            out.add(n)
        return out

    if label == "A":
        return frozenset(), frozenset(prime_divisors(l + 1))
    if label in ("B", "D"):
        return frozenset({2}), frozenset({2})
    if label == "C":
        return frozenset(), frozenset({2})
    if label == "E" and l in (6, 7):
        return frozenset({2, 3}), frozenset({2, 3})
    if label == "F":
        return frozenset({2, 3}), frozenset({2, 3})
    if label == "E" and l == 8:
        return frozenset({2, 3, 5}), frozenset({2, 3, 5})
    if label == "G":
        return frozenset({2}), frozenset({2, 3})
    raise InvalidType(label)


def invariant_degree_sequence(datum: RootSystem) -> Tuple[int, ...]:
    """Degrees of the fundamental Weyl-invariant polynomials.

    Computed from the root system itself: the counts of positive roots at
    each height form a partition whose conjugate is the exponent multiset,
    and each degree is an exponent plus one.  The per-degree invariant
    dimension scan (see invariants.weyl_invariant_dimension) reproduces these
    degrees and is cross-checked in the test suite.
    """
    heights: Dict[int, int] = {}
    for r in datum.positive_roots:
        h = sum(r)
        heights[h] = heights.get(h, 0) + 1
    counts = [heights[h] for h in sorted(heights)]
    exponents = []
    for i in range(1, datum.rank + 1):
        exponents.append(sum(1 for c in counts if c >= i))
    degrees = tuple(sorted(m + 1 for m in exponents))
    assert degrees[0] == 2 and degrees[-1] == datum.coxeter_number
    return degrees


def degrees_series_counts(degrees: Sequence[int], through: int) -> List[int]:
    """Coefficients of prod 1/(1 - t^d) for d in degrees, up to t^through."""
    coeff = [0] * (through + 1)
    coeff[0] = 1
    for d in degrees:
        for k in range(d, through + 1):
            coeff[k] += coeff[k - d]
    return coeff


def root_system_summary(datum: RootSystem) -> dict:
    torsion, nvg = torsion_and_bad_primes(datum)
    return {
        "label": datum.label,
        "rank": datum.rank,
        "cartan": [list(r) for r in datum.cartan],
        "n_roots": datum.n_roots,
        "coxeter": datum.coxeter_number,
        "torsion_primes": sorted(torsion),
        "not_very_good": sorted(nvg),
        "degrees": list(invariant_degree_sequence(datum)),
    }

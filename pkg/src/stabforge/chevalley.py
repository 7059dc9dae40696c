"""Integral structure constants of the simple Lie algebras.

Basis: root vectors for the positive roots (in height-then-lex order), the
coroot basis h_1..h_l of the Cartan subalgebra, then root vectors for the
negative roots mirroring the positive order.  Signs are resolved by the
extraspecial-pair scheme: for each non-simple positive root g the minimal
pair (xi, eta) with xi + eta = g gets a positive constant, and every other
constant follows from the standard antisymmetry, reflection and four-root
identities.  The Jacobi identity is asserted wholesale in the test suite,
which would expose any sign drift.

Constants satisfy |N(a, b)| = p + 1 with p the length of the a-string
through b going down, [e_a, e_-a] = h_(a-check), and [h_i, e_a] = <a, a_i-check> e_a.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .roots import RootSystem, build_root_system

Vec = Tuple[int, ...]


def _neg(v: Vec) -> Vec:
    return tuple(-x for x in v)


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


class _ConstantTable:
    """N(a, b) for all root pairs with a + b a root."""

    def __init__(self, datum: RootSystem):
        self.datum = datum
        self.pos_index = {r: i for i, r in enumerate(datum.positive_roots)}
        self.roots = set(datum.all_roots)
        self.extraspecial: Dict[Vec, Tuple[Vec, Vec]] = {}
        self._special: Dict[Tuple[Vec, Vec], int] = {}
        self._build()

    def _string_down(self, a: Vec, b: Vec) -> int:
        # greatest p with b - p*a a root
        p = 0
        cur = b
        while True:
            cur = _sub(cur, a)
            if cur in self.roots:
                p += 1
            else:
                return p

    def _order(self, a: Vec) -> int:
        return self.pos_index[a]

    def _build(self):
        datum = self.datum
        for gamma in datum.positive_roots:
            if sum(gamma) == 1:
                continue
            for xi in datum.positive_roots:  # already height-lex sorted
                eta = _sub(gamma, xi)
                if eta in self.roots and sum(eta) > 0:
                    self.extraspecial[gamma] = (xi, eta)
                    break
            xi, eta = self.extraspecial[gamma]
            self._special[(xi, eta)] = self._string_down(xi, eta) + 1
        # remaining special pairs, by increasing height of the sum
        for gamma in datum.positive_roots:
            if sum(gamma) == 1:
                continue
            xi, eta = self.extraspecial[gamma]
            for a in datum.positive_roots:
                b = _sub(gamma, a)
                if b not in self.roots or sum(b) <= 0:
                    continue
                if self._order(a) >= self._order(b):
                    continue
                if (a, b) in self._special:
                    continue
                self._special[(a, b)] = self._solve_special(a, b, xi, eta, gamma)

    def _solve_special(self, a: Vec, b: Vec, xi: Vec, eta: Vec, gamma: Vec) -> int:
        nm = self.datum.root_norm
        t2 = Fraction(0)
        d1 = _sub(b, xi)
        if d1 in self.roots:
            t2 = Fraction(self.n(b, _neg(xi)) * self.n(a, _neg(eta)), nm(d1))
        t3 = Fraction(0)
        d2 = _sub(a, xi)
        if d2 in self.roots:
            t3 = Fraction(self.n(_neg(xi), a) * self.n(b, _neg(eta)), nm(d2))
        val = Fraction(nm(gamma)) * (t2 + t3) / self._special[(xi, eta)]
        assert val.denominator == 1, (a, b, val)
        n = int(val)
        p = self._string_down(a, b)
        assert abs(n) == p + 1, (a, b, n, p)
        return n

    def n(self, a: Vec, b: Vec) -> int:
        """Structure constant N(a, b); requires a + b to be a root."""
        s = _add(a, b)
        assert s in self.roots
        a_pos = sum(a) > 0
        b_pos = sum(b) > 0
        if a_pos and b_pos:
            if self._order(a) > self._order(b):
                return -self.n(b, a)
            return self._special[(a, b)]
        if not a_pos and not b_pos:
            return -self.n(_neg(a), _neg(b))
        if not a_pos:  # arrange a > 0 > b
            return -self.n(b, a)
        nm = self.datum.root_norm
        if sum(s) > 0:
            # x > 0 > y with x + y positive: reduce to the positive pair (-y, x+y)
            val = Fraction(-nm(s) * self.n(_neg(b), s), nm(a))
        else:
            val = Fraction(-1) * self.n(_neg(a), _neg(b))
        assert Fraction(val).denominator == 1, (a, b, val)
        return int(val)


@dataclass
class ChevalleyAlgebra:
    datum: RootSystem
    brackets: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]]  # i < j only

    @property
    def dim(self) -> int:
        return self.datum.n_roots + self.datum.rank

    @property
    def npos(self) -> int:
        return len(self.datum.positive_roots)

    def basis_labels(self) -> List[str]:
        pos = [f"e[{','.join(map(str, r))}]" for r in self.datum.positive_roots]
        car = [f"h{i + 1}" for i in range(self.datum.rank)]
        neg = [f"e[{','.join(map(str, _neg(r)))}]" for r in self.datum.positive_roots]
        return pos + car + neg

    def root_of_index(self, k: int) -> Optional[Vec]:
        npos = self.npos
        if k < npos:
            return self.datum.positive_roots[k]
        if k < npos + self.datum.rank:
            return None
        return _neg(self.datum.positive_roots[k - npos - self.datum.rank])

    def index_of_root(self, r: Vec) -> int:
        npos = self.npos
        if sum(r) > 0:
            return self.datum.positive_roots.index(r)
        return npos + self.datum.rank + self.datum.positive_roots.index(_neg(r))

    def cartan_index(self, i: int) -> int:
        return self.npos + i

    def simple_indices(self) -> List[Tuple[int, int, int]]:
        """(e_i, f_i, h_i) basis indices for each simple root."""
        out = []
        for i, alpha in enumerate(self.datum.simple_roots):
            out.append((self.index_of_root(alpha), self.index_of_root(_neg(alpha)), self.cartan_index(i)))
        return out

    def bracket_basis(self, i: int, j: int) -> Tuple[Tuple[int, int], ...]:
        if i == j:
            return ()
        if i < j:
            return self.brackets.get((i, j), ())
        return tuple((k, -c) for k, c in self.brackets.get((j, i), ()))

    def bracket_vectors(self, x: Dict[int, Fraction], y: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """Bracket of two coordinate vectors (sparse dicts over the rationals)."""
        out: Dict[int, Fraction] = {}
        for i, ci in x.items():
            for j, cj in y.items():
                for k, c in self.bracket_basis(i, j):
                    v = out.get(k, Fraction(0)) + Fraction(ci) * Fraction(cj) * c
                    if v:
                        out[k] = v
                    elif k in out:
                        del out[k]
        return out

    def weight_of_index(self, k: int) -> Vec:
        r = self.root_of_index(k)
        if r is None:
            return (0,) * self.datum.rank
        return self.datum.weight_coords(r)

    def killing_gram(self) -> List[List[int]]:
        """Gram matrix of the trace form of the adjoint action on the basis."""
        n = self.dim
        ad = [self._ad_columns(i) for i in range(n)]
        gram = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                tr = 0
                for k in range(n):
                    # coefficient of b_k in [b_i, [b_j, b_k]]
                    for m, c1 in ad[j][k]:
                        for k2, c2 in ad[i][m]:
                            if k2 == k:
                                tr += c1 * c2
                gram[i][j] = gram[j][i] = tr
        return gram

    def _ad_columns(self, i: int):
        return [self.bracket_basis(i, k) for k in range(self.dim)]


def build_chevalley(datum: RootSystem, cache_dir: Optional[str] = None) -> ChevalleyAlgebra:
    """Structure constants for the given root system, cached as JSON if asked."""
    if cache_dir:
        path = os.path.join(cache_dir, f"{datum.label}{datum.rank}.chev.json")
        if os.path.exists(path):
            with open(path) as fh:
                return _algebra_from_json(json.load(fh), datum)
    table = _ConstantTable(datum)
    npos = len(datum.positive_roots)
    rank = datum.rank
    alg = ChevalleyAlgebra(datum=datum, brackets={})
    br = alg.brackets

    def put(i, j, entries):
        entries = tuple((k, c) for k, c in entries if c)
        if not entries:
            return
        if i > j:
            i, j = j, i
            entries = tuple((k, -c) for k, c in entries)
        br[(i, j)] = entries

    all_roots = list(datum.all_roots)
    roots_set = set(all_roots)
    for ai, a in enumerate(all_roots):
        ia = alg.index_of_root(a)
        for b in all_roots[ai + 1 :]:
            ib = alg.index_of_root(b)
            s = _add(a, b)
            if all(x == 0 for x in s):
                # [e_a, e_-a] = h_(a-check), positive root first
                pos = a if sum(a) > 0 else b
                sign = 1 if sum(a) > 0 else -1
                cor = datum.coroot(pos)
                put(ia, ib, [(alg.cartan_index(i), sign * c) for i, c in enumerate(cor)])
            elif s in roots_set:
                put(ia, ib, [(alg.index_of_root(s), table.n(a, b))])
    for i in range(rank):
        hi = alg.cartan_index(i)
        for r in all_roots:
            ir = alg.index_of_root(r)
            c = datum.pairing(r, i)
            if c:
                put(hi, ir, [(ir, c)])
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(algebra_to_json(alg), fh)
    return alg


def algebra_to_json(alg: ChevalleyAlgebra) -> dict:
    return {
        "label": alg.datum.label,
        "rank": alg.datum.rank,
        "brackets": [[i, j, [[k, c] for k, c in entries]] for (i, j), entries in sorted(alg.brackets.items())],
    }


def _algebra_from_json(data: dict, datum: RootSystem) -> ChevalleyAlgebra:
    assert data["label"] == datum.label and data["rank"] == datum.rank
    br = {(i, j): tuple((k, c) for k, c in entries) for i, j, entries in data["brackets"]}
    return ChevalleyAlgebra(datum=datum, brackets=br)


def load_or_build(label: str, rank: int, cache_dir: Optional[str] = None) -> ChevalleyAlgebra:
    return build_chevalley(build_root_system(label, rank), cache_dir=cache_dir)


def jacobi_defect(alg: ChevalleyAlgebra, i: int, j: int, k: int) -> Dict[int, int]:
    """[[i,j],k] + [[j,k],i] + [[k,i],j] as a sparse vector; empty iff Jacobi holds."""
    out: Dict[int, int] = {}

    def acc(pair_bracket, other, sign):
        for m, c in pair_bracket:
            for t, c2 in alg.bracket_basis(m, other):
                v = out.get(t, 0) + sign * c * c2
                if v:
                    out[t] = v
                elif t in out:
                    del out[t]

    acc(alg.bracket_basis(i, j), k, 1)
    acc(alg.bracket_basis(j, k), i, 1)
    acc(alg.bracket_basis(k, i), j, 1)
    return out

"""Representations of the Chevalley algebras with exact generator matrices.

A Representation stores the e_i / f_i action matrices over its field, the
integral weight of each basis vector (pairings with the simple coroots), and
one-parameter unipotent subgroups x_{+-a_i}(t) as polynomial matrices in t.
The h_i matrices are diagonal on the weight basis by construction.

Everything is first built over the rationals on an integral lattice; finite
characteristic versions are obtained by reducing that lattice.  Divided
powers of the nilpotent generators are asserted integral before any
reduction, which is what makes the reduced one-parameter subgroups the right
group elements in small characteristic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .chevalley import ChevalleyAlgebra, load_or_build
from .fields import ExtensionField, PrimeField, QQ, Rationals, field_from_json, field_to_json
from .roots import InvalidType


class FieldMismatch(ValueError):
    pass


class TwistInCharZero(ValueError):
    pass


class ClosureFailure(ValueError):
    pass


class TooLarge(ValueError):
    pass


# --- small dense matrix helpers over a field ---------------------------------


def mat_zero(n, m, fld):
    return [[fld.zero] * m for _ in range(n)]


def mat_identity(n, fld):
    out = mat_zero(n, n, fld)
    for i in range(n):
        out[i][i] = fld.one
    return out


def mat_mul(a, b, fld):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = mat_zero(n, m, fld)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            av = arow[t]
            if av == fld.zero:
                continue
            brow = b[t]
            for j in range(m):
                bv = brow[j]
                if bv != fld.zero:
                    orow[j] = fld.add(orow[j], fld.mul(av, bv))
    return out


def mat_vec(a, v, fld):
    out = [fld.zero] * len(a)
    for i, row in enumerate(a):
        acc = fld.zero
        for j, x in enumerate(row):
            if x != fld.zero and v[j] != fld.zero:
                acc = fld.add(acc, fld.mul(x, v[j]))
        out[i] = acc
    return out


def mat_add(a, b, fld):
    return [[fld.add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mat_sub(a, b, fld):
    return [[fld.sub(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mat_scale(a, c, fld):
    return [[fld.mul(c, x) for x in row] for row in a]


def mat_commutator(a, b, fld):
    return mat_sub(mat_mul(a, b, fld), mat_mul(b, a, fld), fld)


def mat_is_zero(a, fld):
    return all(x == fld.zero for row in a for x in row)


def mat_eq(a, b, fld):
    return mat_is_zero(mat_sub(a, b, fld), fld)


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_coerce(a, fld):
    return [[fld.coerce(x) for x in row] for row in a]


# --- the representation type ---------------------------------------------------

Matrix = List[List[object]]
UniPoly = Dict[int, Matrix]  # t-power -> coefficient matrix; power 0 is the identity


@dataclass
class Representation:
    algebra: ChevalleyAlgebra
    field: object
    dim: int
    e: List[Matrix]
    f: List[Matrix]
    weights: List[Tuple[int, ...]]
    unipotents: Dict[Tuple[int, int], UniPoly]
    gram: Optional[Matrix] = None  # contravariant form, rational lattice reps only
    label: str = ""
    _basis_actions: Dict[int, Matrix] = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.algebra.datum.rank

    def h(self, i: int) -> Matrix:
        fld = self.field
        out = mat_zero(self.dim, self.dim, fld)
        for k, w in enumerate(self.weights):
            out[k][k] = fld.coerce(w[i])
        return out

    def h_matrices(self) -> List[Matrix]:
        return [self.h(i) for i in range(self.rank)]

    def unipotent(self, i: int, sign: int) -> UniPoly:
        return self.unipotents[(i, sign)]

    def one_param_families(self) -> List[UniPoly]:
        return [self.unipotents[(i, s)] for i in range(self.rank) for s in (1, -1)]

    def basis_action(self, k: int) -> Matrix:
        """Action of the k-th Chevalley basis element, via iterated brackets."""
        if k in self._basis_actions:
            return self._basis_actions[k]
        alg = self.algebra
        fld = self.field
        npos = alg.npos
        simple = {tuple(r): i for i, r in enumerate(alg.datum.simple_roots)}
        root = alg.root_of_index(k)
        if root is None:
            m = self.h(k - npos)
        else:
            neg = sum(root) < 0
            base = tuple(-x for x in root) if neg else root
            if base in simple:
                i = simple[base]
                m = self.f[i] if neg else self.e[i]
            else:
                datum = alg.datum
                roots = set(datum.all_roots)
                for i, alpha in enumerate(datum.simple_roots):
                    beta = tuple(b - a for b, a in zip(base, alpha))
                    if beta in roots and sum(beta) > 0:
                        break
                else:
                    raise RuntimeError("positive root with no simple summand")
                ia, ib = alg.index_of_root(alpha), alg.index_of_root(beta)
                n_const = dict(alg.bracket_basis(ia, ib))[alg.index_of_root(base)]
                if neg:
                    # [e_-a, e_-b] = -N(a, b) e_-(a+b)
                    a_mat = self.basis_action(alg.index_of_root(tuple(-x for x in alpha)))
                    b_mat = self.basis_action(alg.index_of_root(tuple(-x for x in beta)))
                    coeff = -n_const
                else:
                    a_mat = self.basis_action(ia)
                    b_mat = self.basis_action(ib)
                    coeff = n_const
                inv = fld.inv(fld.coerce(coeff))
                m = mat_scale(mat_commutator(a_mat, b_mat, fld), inv, fld)
        self._basis_actions[k] = m
        return m

    def element_action(self, coords: Dict[int, object]) -> Matrix:
        fld = self.field
        out = mat_zero(self.dim, self.dim, fld)
        for k, c in coords.items():
            c = fld.coerce(c)
            if c != fld.zero:
                out = mat_add(out, mat_scale(self.basis_action(k), c, fld), fld)
        return out

    def precompute_basis_actions(self):
        """Force all Chevalley basis actions; call on the rational model before
        reducing, so derived representations inherit them even where a
        structure constant would not be invertible."""
        for k in range(self.algebra.dim):
            self.basis_action(k)

    def validate(self):
        """Serre-style matrix identities and nilpotency; raises on any failure."""
        fld = self.field
        cartan = self.algebra.datum.cartan
        hs = self.h_matrices()
        zero = mat_zero(self.dim, self.dim, fld)
        for i in range(self.rank):
            for j in range(self.rank):
                comm = mat_commutator(self.e[i], self.f[j], fld)
                expect = hs[i] if i == j else zero
                assert mat_eq(comm, expect, fld), (self.label, "e/f", i, j)
                comm = mat_commutator(hs[i], self.e[j], fld)
                assert mat_eq(comm, mat_scale(self.e[j], fld.coerce(cartan[i][j]), fld), fld)
                comm = mat_commutator(hs[i], self.f[j], fld)
                assert mat_eq(comm, mat_scale(self.f[j], fld.coerce(-cartan[i][j]), fld), fld)
        for m in self.e + self.f:
            power = m
            for _ in range(self.dim + 1):
                if mat_is_zero(power, fld):
                    break
                power = mat_mul(power, m, fld)
            assert mat_is_zero(power, fld), (self.label, "generator not nilpotent")
        for (i, s), uni in self.unipotents.items():
            assert mat_eq(uni[0], mat_identity(self.dim, fld), fld)
            gen = self.e[i] if s > 0 else self.f[i]
            one = uni.get(1, zero)
            assert mat_eq(one, gen, fld), (self.label, "unipotent derivative", i, s)


def exp_nilpotent(n: Matrix, fld, require_integral: bool = True) -> UniPoly:
    """exp(t n) as {power: matrix}; raises if any divided power is non-integral."""
    dim = len(n)
    out: UniPoly = {0: mat_identity(dim, fld)}
    power = [row[:] for row in n]
    k = 1
    while not mat_is_zero(power, fld):
        if k > dim + 1:
            raise ValueError("matrix is not nilpotent")
        coeff = fld.coerce(Fraction(1, factorial(k)))
        term = mat_scale(power, coeff, fld)
        if require_integral:
            for row in term:
                for x in row:
                    assert Fraction(x).denominator == 1, "non-integral divided power"
        out[k] = term
        power = mat_mul(power, n, fld)
        k += 1
    return out


def _attach_unipotents(rep: Representation, require_integral: bool = True):
    for i in range(rep.rank):
        rep.unipotents[(i, 1)] = exp_nilpotent(rep.e[i], rep.field, require_integral)
        rep.unipotents[(i, -1)] = exp_nilpotent(rep.f[i], rep.field, require_integral)


def _uni_map(uni: UniPoly, fn, fld) -> UniPoly:
    out = {}
    for k, m in uni.items():
        mm = fn(m)
        if k == 0 or not mat_is_zero(mm, fld):
            out[k] = mm
    return out


# --- constructions over the rationals ------------------------------------------


def adjoint_rep(alg: ChevalleyAlgebra, fld=QQ) -> Representation:
    """The algebra acting on itself; weights are the roots plus rank zeros."""
    n = alg.dim
    base = QQ

    def action_matrix(gen_index):
        m = mat_zero(n, n, base)
        for k in range(n):
            for t, c in alg.bracket_basis(gen_index, k):
                m[t][k] = base.coerce(c)
        return m

    e_mats, f_mats = [], []
    for (ei, fi, _hi) in alg.simple_indices():
        e_mats.append(action_matrix(ei))
        f_mats.append(action_matrix(fi))
    weights = [alg.weight_of_index(k) for k in range(n)]
    rep = Representation(alg, base, n, e_mats, f_mats, weights, {},
                         label=f"adjoint({alg.datum.label}{alg.datum.rank})")
    for k in range(n):
        rep._basis_actions[k] = action_matrix(k)
    _attach_unipotents(rep)
    return reduce_rep(rep, fld)


def natural_rep(label: str, rank: int, fld=QQ, precompute_actions: bool = False) -> Representation:
    """Defining representation of a classical type, split form.

    Basis order v_1..v_n, (v_0 for odd orthogonal), v_-n..v_-1; the bilinear
    form pairs v_i with v_-i along the antidiagonal (middle entry 2 in the
    odd orthogonal case, which is what keeps the lattice divided-power
    stable).
    """
    if label not in "ABCD":
        raise InvalidType("natural representation exists for classical types only")
    alg = load_or_build(label, rank)
    base = QQ
    if label == "A":
        n = rank + 1
        e_mats, f_mats = [], []
        for i in range(rank):
            em = mat_zero(n, n, base)
            fm = mat_zero(n, n, base)
            em[i][i + 1] = base.one
            fm[i + 1][i] = base.one
            e_mats.append(em)
            f_mats.append(fm)
        weights = [tuple((1 if k == i else 0) - (1 if k == i + 1 else 0) for i in range(rank))
                   for k in range(n)]
        rep = Representation(alg, base, n, e_mats, f_mats, weights, {}, label=f"natural(A{rank})")
        _attach_unipotents(rep)
        if precompute_actions:
            rep.precompute_basis_actions()
        return reduce_rep(rep, fld)

    n = 2 * rank + (1 if label == "B" else 0)

    def pos(k):  # signed basis index -> position
        if k > 0:
            return k - 1
        if k == 0:
            return rank
        return n + k

    def pairing_vector(k):
        e_vec = [0] * rank
        if k != 0:
            e_vec[abs(k) - 1] = 1 if k > 0 else -1
        head = [e_vec[i] - e_vec[i + 1] for i in range(rank - 1)]
        if label == "B":
            tail = 2 * e_vec[rank - 1]
        elif label == "C":
            tail = e_vec[rank - 1]
        else:
            tail = e_vec[rank - 2] + e_vec[rank - 1]
        return tuple(head + [tail])

    def entries_for(i):
        # (row, col, value) triples in signed indices, for e_i and f_i
        if i < rank - 1:
            a, b = i + 1, i + 2
            e_entries = [(a, b, 1), (-b, -a, -1)]
            f_entries = [(b, a, 1), (-a, -b, -1)]
        elif label == "C":
            e_entries = [(rank, -rank, 1)]
            f_entries = [(-rank, rank, 1)]
        elif label == "D":
            a, b = rank - 1, rank
            e_entries = [(a, -b, 1), (b, -a, -1)]
            f_entries = [(-b, a, 1), (-a, b, -1)]
        else:  # B short root
            e_entries = [(0, -rank, 1), (rank, 0, 2)]
            f_entries = [(0, rank, 1), (-rank, 0, 2)]
        return e_entries, f_entries

    e_mats, f_mats = [], []
    for i in range(rank):
        em = mat_zero(n, n, base)
        fm = mat_zero(n, n, base)
        e_entries, f_entries = entries_for(i)
        for r, c, v in e_entries:
            em[pos(r)][pos(c)] = base.coerce(v)
        for r, c, v in f_entries:
            fm[pos(r)][pos(c)] = base.coerce(v)
        e_mats.append(em)
        f_mats.append(fm)
    order = list(range(1, rank + 1)) + ([0] if label == "B" else []) + list(range(-rank, 0))
    weights = [pairing_vector(k) for k in order]
    rep = Representation(alg, base, n, e_mats, f_mats, weights, {}, label=f"natural({label}{rank})")
    _attach_unipotents(rep)
    if precompute_actions:
        rep.precompute_basis_actions()
    return reduce_rep(rep, fld)


def invariant_bilinear_gram(label: str, rank: int):
    """Gram matrix (over QQ) preserved by the natural representation.

    Antidiagonal pairing of v_i with v_-i; alternating for C.  The odd
    orthogonal middle entry is -2: the sign matches the generator matrices
    chosen above and the factor 2 keeps the lattice divided-power stable.
    """
    n = 2 * rank + (1 if label == "B" else 0)
    g = mat_zero(n, n, QQ)
    for i in range(1, rank + 1):
        a = i - 1
        b = n - i
        if label == "C":
            g[a][b] = QQ.coerce(1)
            g[b][a] = QQ.coerce(-1)
        else:
            g[a][b] = QQ.coerce(1)
            g[b][a] = QQ.coerce(1)
    if label == "B":
        g[rank][rank] = QQ.coerce(-2)
    return g


# --- spin constructions ----------------------------------------------------------


def _subset_sign(subset: Tuple[int, ...], i: int) -> int:
    return -1 if sum(1 for s in subset if s < i) % 2 else 1


def spin_basis(nq: int) -> List[Tuple[int, ...]]:
    out = []
    for code in range(1 << nq):
        out.append(tuple(i + 1 for i in range(nq) if code >> i & 1))
    out.sort()
    return out


def half_spin_rep(label: str, rank: int, fld=QQ, chirality: str = "+",
                  precompute_actions: bool = False) -> Representation:
    """Spin module of B_n (dim 2^n) or a half-spin module of D_n (dim 2^(n-1)).

    Built on the exterior algebra of a maximal isotropic subspace: basis
    vectors are subsets S of {1..n}, creation and annihilation operators
    supply the root vectors, and the weight of S is half the signed sum of
    the eps_i, written integrally in simple-coroot pairings.
    """
    if label == "B":
        if rank < 2:
            raise InvalidType("spin module needs rank >= 2")
    elif label == "D":
        if rank < 3:
            raise InvalidType("half-spin module needs rank >= 3")
        if chirality not in ("+", "-"):
            raise InvalidType("chirality must be '+' or '-'")
    else:
        raise InvalidType("spin modules exist for types B and D")
    alg = load_or_build(label, rank)
    base = QQ
    all_subsets = spin_basis(rank)
    if label == "D":
        want = rank % 2 if chirality == "+" else (rank - 1) % 2
        subsets = [s for s in all_subsets if len(s) % 2 == want]
    else:
        subsets = all_subsets
    index = {s: k for k, s in enumerate(subsets)}
    n = len(subsets)

    def weight(s):
        half = [Fraction(1, 2) if k in s else Fraction(-1, 2) for k in range(1, rank + 1)]
        head = [half[i] - half[i + 1] for i in range(rank - 1)]
        if label == "B":
            tail = 2 * half[rank - 1]
        else:
            tail = half[rank - 2] + half[rank - 1]
        out = []
        for x in head + [tail]:
            assert Fraction(x).denominator == 1
            out.append(int(x))
        return tuple(out)

    def create(i, s):
        if i in s:
            return None
        t = tuple(sorted(set(s) | {i}))
        return t, _subset_sign(s, i)

    def annihilate(i, s):
        if i not in s:
            return None
        t = tuple(x for x in s if x != i)
        return t, _subset_sign(t, i)

    def op_matrix(step):
        m = mat_zero(n, n, base)
        for s, k in index.items():
            res = step(s)
            if res is not None:
                tgt, sign = res
                if tgt in index:
                    m[index[tgt]][k] = base.add(m[index[tgt]][k], base.coerce(sign))
        return m

    def chain2(first, second):
        def step(s):
            r1 = first(s)
            if r1 is None:
                return None
            mid, sg1 = r1
            r2 = second(mid)
            if r2 is None:
                return None
            tgt, sg2 = r2
            return tgt, sg1 * sg2
        return step

    e_mats, f_mats = [], []
    for i in range(1, rank):
        e_mats.append(op_matrix(chain2(lambda s, i=i: annihilate(i + 1, s), lambda s, i=i: create(i, s))))
        f_mats.append(op_matrix(chain2(lambda s, i=i: annihilate(i, s), lambda s, i=i: create(i + 1, s))))
    if label == "B":
        e_mats.append(op_matrix(lambda s: create(rank, s)))
        f_mats.append(op_matrix(lambda s: annihilate(rank, s)))
    else:
        e_mats.append(op_matrix(chain2(lambda s: create(rank, s), lambda s: create(rank - 1, s))))
        f_mats.append(op_matrix(chain2(lambda s: annihilate(rank - 1, s), lambda s: annihilate(rank, s))))
    weights = [weight(s) for s in subsets]
    tag = "spin" if label == "B" else f"halfspin{chirality}"
    rep = Representation(alg, base, n, e_mats, f_mats, weights, {}, label=f"{tag}({label}{rank})")
    _attach_unipotents(rep)
    if precompute_actions:
        rep.precompute_basis_actions()
    return reduce_rep(rep, fld)


# --- field change, subspaces, quotients -----------------------------------------


def reduce_rep(rep: Representation, fld) -> Representation:
    """Base change QQ -> GF(p) (or GF(p) -> GF(p^e)); identity if same field."""
    if fld == rep.field:
        return rep
    if isinstance(rep.field, Rationals):
        pass
    elif (isinstance(fld, ExtensionField) and isinstance(rep.field, PrimeField)
          and fld.p == rep.field.p):
        pass
    else:
        raise FieldMismatch(f"cannot move from {rep.field} to {fld}")
    out = Representation(
        rep.algebra, fld, rep.dim,
        [mat_coerce(m, fld) for m in rep.e],
        [mat_coerce(m, fld) for m in rep.f],
        list(rep.weights),
        {key: _uni_map(uni, lambda m: mat_coerce(m, fld), fld) for key, uni in rep.unipotents.items()},
        gram=mat_coerce(rep.gram, fld) if rep.gram is not None else None,
        label=rep.label + f"@{fld!r}",
    )
    for k, m in rep._basis_actions.items():
        out._basis_actions[k] = mat_coerce(m, fld)
    return out


def _rref(rows, fld):
    """Reduced row echelon form; returns (rows, pivot_cols)."""
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if work[i][c] != fld.zero), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = fld.inv(work[r][c])
        work[r] = [fld.mul(inv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != fld.zero:
                fc = work[i][c]
                work[i] = [fld.sub(a, fld.mul(fc, b)) for a, b in zip(work[i], work[r])]
        piv.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], piv


def _assert_weight_homogeneous(rows, weights, fld):
    for row in rows:
        wts = {weights[k] for k, x in enumerate(row) if x != fld.zero}
        assert len(wts) <= 1, "rows must be weight-homogeneous"


def sub_rep(rep: Representation, span_rows: Sequence[Sequence], label: str = "") -> Representation:
    """Restriction to an invariant subspace spanned by weight-homogeneous rows."""
    fld = rep.field
    _assert_weight_homogeneous(span_rows, rep.weights, fld)
    basis, piv = _rref(span_rows, fld)
    dim = len(basis)

    def restrict(m):
        out = mat_zero(dim, dim, fld)
        for j, brow in enumerate(basis):
            img = mat_vec(m, brow, fld)
            for i, pc in enumerate(piv):
                out[i][j] = img[pc]
            recon = [fld.zero] * rep.dim
            for i, brow2 in enumerate(basis):
                c2 = out[i][j]
                if c2 != fld.zero:
                    recon = [fld.add(a, fld.mul(c2, b)) for a, b in zip(recon, brow2)]
            assert recon == img, "subspace is not invariant under the action"
        return out

    weights = [next(rep.weights[k] for k, x in enumerate(row) if x != fld.zero) for row in basis]
    out = Representation(
        rep.algebra, fld, dim,
        [restrict(m) for m in rep.e],
        [restrict(m) for m in rep.f],
        weights, {},
        label=label or rep.label + ".sub",
    )
    for key, uni in rep.unipotents.items():
        out.unipotents[key] = _uni_map(uni, restrict, fld)
    for k, m in rep._basis_actions.items():
        out._basis_actions[k] = restrict(m)
    if rep.gram is not None:
        g = rep.gram
        gb = [mat_vec(g, brow, fld) for brow in basis]  # rows g . b_j
        out.gram = [[_dot(basis[i], gb[j], fld) for j in range(dim)] for i in range(dim)]
    return out


def _dot(u, v, fld):
    acc = fld.zero
    for x, y in zip(u, v):
        if x != fld.zero and y != fld.zero:
            acc = fld.add(acc, fld.mul(x, y))
    return acc


def quotient_rep(rep: Representation, kill_rows: Sequence[Sequence], label: str = "") -> Representation:
    """Quotient by an invariant subspace spanned by weight-homogeneous rows."""
    fld = rep.field
    _assert_weight_homogeneous(kill_rows, rep.weights, fld)
    sub_basis, piv = _rref(kill_rows, fld)
    piv_set = set(piv)
    keep = [c for c in range(rep.dim) if c not in piv_set]
    dim = len(keep)

    def project(vec):
        out = list(vec)
        for i, pc in enumerate(piv):
            c = out[pc]
            if c != fld.zero:
                out = [fld.sub(a, fld.mul(c, b)) for a, b in zip(out, sub_basis[i])]
        return [out[c] for c in keep]

    def check_stable(m):
        for brow in sub_basis:
            img = mat_vec(m, brow, fld)
            assert all(x == fld.zero for x in project(img)), "subspace not stable; quotient ill-defined"

    def induce(m):
        check_stable(m)
        out = mat_zero(dim, dim, fld)
        for j, src in enumerate(keep):
            col = [m[r][src] for r in range(rep.dim)]
            proj = project(col)
            for i in range(dim):
                out[i][j] = proj[i]
        return out

    weights = [rep.weights[c] for c in keep]
    out = Representation(
        rep.algebra, fld, dim,
        [induce(m) for m in rep.e],
        [induce(m) for m in rep.f],
        weights, {},
        label=label or rep.label + ".quo",
    )
    for key, uni in rep.unipotents.items():
        out.unipotents[key] = _uni_map(uni, induce, fld)
    for k, m in rep._basis_actions.items():
        out._basis_actions[k] = induce(m)
    return out


def joint_kernel(mats: Sequence[Matrix], fld, dim: int) -> List[List[object]]:
    """Common kernel of the given matrices, as reduced echelon rows."""
    from .linalg import SparseMatrix, kernel_basis

    triples = []
    row_off = 0
    for m in mats:
        for r in range(dim):
            for c in range(dim):
                if m[r][c] != fld.zero:
                    triples.append((row_off + r, c, m[r][c]))
        row_off += dim
    sm = SparseMatrix.from_triples(max(row_off, 1), dim, fld, triples)
    vecs = kernel_basis(sm)
    if not vecs:
        return []
    rows, _ = _rref([list(v) for v in vecs], fld)
    return rows


def center_rows(rep: Representation) -> List[List[object]]:
    """Vectors killed by every generator; weight-homogeneous by construction."""
    mats = list(rep.e) + list(rep.f) + rep.h_matrices()
    rows = joint_kernel(mats, rep.field, rep.dim)
    return _split_by_weight(rows, rep)


def _split_by_weight(rows, rep):
    fld = rep.field
    homog = []
    for row in rows:
        blocks: Dict[Tuple[int, ...], List[object]] = {}
        for k, x in enumerate(row):
            if x != fld.zero:
                blocks.setdefault(rep.weights[k], [fld.zero] * rep.dim)[k] = x
        if len(blocks) == 1:
            homog.append(row)
        else:
            homog.extend(blocks.values())
    return homog


def invariant_functionals(rep: Representation) -> List[List[object]]:
    """Invariant linear functionals (joint kernel of the transposed action)."""
    fld = rep.field
    mats = ([mat_transpose(m) for m in rep.e] + [mat_transpose(m) for m in rep.f]
            + [mat_transpose(m) for m in rep.h_matrices()])
    return joint_kernel(mats, fld, rep.dim)


def trace_zero_rep(rep: Representation) -> Representation:
    """Kernel of the unique invariant functional."""
    fld = rep.field
    funcs = invariant_functionals(rep)
    if len(funcs) != 1:
        raise ValueError(f"expected one invariant functional, found {len(funcs)}")
    phi = funcs[0]
    support_weights = {rep.weights[k] for k, x in enumerate(phi) if x != fld.zero}
    assert len(support_weights) == 1, "invariant functional must be weight-homogeneous"
    from .linalg import SparseMatrix, kernel_basis

    sm = SparseMatrix.from_triples(1, rep.dim, fld,
                                   [(0, c, v) for c, v in enumerate(phi) if v != fld.zero])
    rows = [list(v) for v in kernel_basis(sm)]
    return sub_rep(rep, _split_by_weight(rows, rep), label=rep.label + ".trace0")


def mod_scalars_rep(rep: Representation) -> Representation:
    """Quotient by the joint kernel of the action (the central vectors)."""
    rows = center_rows(rep)
    if not rows:
        raise ValueError("no central vectors to quotient by")
    return quotient_rep(rep, rows, label=rep.label + ".modscalars")


# --- functors --------------------------------------------------------------------


def _kron(a, b, fld):
    na, nb = len(a), len(b)
    out = mat_zero(na * nb, na * nb, fld)
    for i in range(na):
        for j in range(na):
            if a[i][j] == fld.zero:
                continue
            for r in range(nb):
                for c in range(nb):
                    if b[r][c] != fld.zero:
                        out[i * nb + r][j * nb + c] = fld.mul(a[i][j], b[r][c])
    return out


def tensor_rep(r1: Representation, r2: Representation) -> Representation:
    if r1.field != r2.field:
        raise FieldMismatch("tensor factors live over different fields")
    if r1.algebra.datum != r2.algebra.datum:
        raise FieldMismatch("tensor factors of different algebras")
    fld = r1.field
    n1, n2 = r1.dim, r2.dim
    id1, id2 = mat_identity(n1, fld), mat_identity(n2, fld)
    e_mats = [mat_add(_kron(r1.e[i], id2, fld), _kron(id1, r2.e[i], fld), fld) for i in range(r1.rank)]
    f_mats = [mat_add(_kron(r1.f[i], id2, fld), _kron(id1, r2.f[i], fld), fld) for i in range(r1.rank)]
    weights = [tuple(a + b for a, b in zip(w1, w2)) for w1 in r1.weights for w2 in r2.weights]
    unis = {}
    for key in r1.unipotents:
        out: UniPoly = {}
        for k1, m1 in r1.unipotents[key].items():
            for k2, m2 in r2.unipotents[key].items():
                prod = _kron(m1, m2, fld)
                k = k1 + k2
                out[k] = mat_add(out[k], prod, fld) if k in out else prod
        unis[key] = {k: m for k, m in out.items() if k == 0 or not mat_is_zero(m, fld)}
    out = Representation(r1.algebra, fld, n1 * n2, e_mats, f_mats, weights, unis,
                         label=f"({r1.label})*({r2.label})")
    full = r1.algebra.dim
    if len(r1._basis_actions) == full and len(r2._basis_actions) == full:
        for k in range(full):
            out._basis_actions[k] = mat_add(_kron(r1._basis_actions[k], id2, fld),
                                            _kron(id1, r2._basis_actions[k], fld), fld)
    return out


def dual_rep(rep: Representation) -> Representation:
    fld = rep.field
    neg_t = lambda m: mat_scale(mat_transpose(m), fld.coerce(-1), fld)
    e_mats = [neg_t(m) for m in rep.e]
    f_mats = [neg_t(m) for m in rep.f]
    weights = [tuple(-x for x in w) for w in rep.weights]
    unis = {}
    for key, uni in rep.unipotents.items():
        # contragredient of x(t) = exp(tN) is exp(-tN)^T
        unis[key] = {k: mat_scale(mat_transpose(m), fld.coerce((-1) ** k), fld) for k, m in uni.items()}
    out = Representation(rep.algebra, fld, rep.dim, e_mats, f_mats, weights, unis,
                         label=f"dual({rep.label})")
    if len(rep._basis_actions) == rep.algebra.dim:
        for k, m in rep._basis_actions.items():
            out._basis_actions[k] = neg_t(m)
    return out


def sym_rep(rep: Representation, d: int) -> Representation:
    """Symmetric power on degree-d monomials in the basis vectors."""
    from .poly import monomial_basis

    fld = rep.field
    monos = monomial_basis(rep.dim, d)
    index = {m: k for k, m in enumerate(monos)}
    n = len(monos)

    def induce(m):
        out = mat_zero(n, n, fld)
        for k, mono in enumerate(monos):
            for posn, mult in enumerate(mono):
                if mult == 0:
                    continue
                for tgt in range(rep.dim):
                    c = m[tgt][posn]
                    if c == fld.zero:
                        continue
                    newm = list(mono)
                    newm[posn] -= 1
                    newm[tgt] += 1
                    row = index[tuple(newm)]
                    out[row][k] = fld.add(out[row][k], fld.mul(fld.coerce(mult), c))
        return out

    weights = [tuple(sum(mult * rep.weights[posn][i] for posn, mult in enumerate(mono))
                     for i in range(rep.rank)) for mono in monos]
    out = Representation(rep.algebra, fld, n,
                         [induce(m) for m in rep.e],
                         [induce(m) for m in rep.f],
                         weights, {}, label=f"sym{d}({rep.label})")
    for key, uni in rep.unipotents.items():
        out.unipotents[key] = _sym_unipotent(uni, monos, index, rep, fld)
    if len(rep._basis_actions) == rep.algebra.dim:
        for k, m in rep._basis_actions.items():
            out._basis_actions[k] = induce(m)
    return out


def _collect(dst, key, val, fld):
    cur = dst.get(key)
    if cur is None:
        dst[key] = val
    else:
        s = fld.add(cur, val)
        if s == fld.zero:
            del dst[key]
        else:
            dst[key] = s


def _sym_unipotent(uni: UniPoly, monos, index, rep, fld) -> UniPoly:
    n = len(monos)
    out: UniPoly = {}
    for k, mono in enumerate(monos):
        partial = {(0, (0,) * rep.dim): fld.one}
        for posn, mult in enumerate(mono):
            for _ in range(mult):
                nxt: Dict[Tuple[int, Tuple[int, ...]], object] = {}
                for (tp, acc), coeff in partial.items():
                    for gp, gm in uni.items():
                        for tgt in range(rep.dim):
                            c = gm[tgt][posn]
                            if c == fld.zero:
                                continue
                            newacc = list(acc)
                            newacc[tgt] += 1
                            _collect(nxt, (tp + gp, tuple(newacc)), fld.mul(coeff, c), fld)
                partial = nxt
        for (tp, acc), coeff in partial.items():
            if tp not in out:
                out[tp] = mat_zero(n, n, fld)
            row = index[acc]
            out[tp][row][k] = fld.add(out[tp][row][k], coeff)
    return {k: m for k, m in out.items() if k == 0 or not mat_is_zero(m, fld)}


def wedge_rep(rep: Representation, d: int) -> Representation:
    """Exterior power on sorted d-subsets of the basis."""
    fld = rep.field
    subsets = list(combinations(range(rep.dim), d))
    index = {s: k for k, s in enumerate(subsets)}
    n = len(subsets)

    def sort_sign(seq):
        arr = list(seq)
        sign = 1
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    sign = -sign
        return tuple(arr), sign

    def induce(m):
        out = mat_zero(n, n, fld)
        for k, subset in enumerate(subsets):
            for slot in range(d):
                src = subset[slot]
                for tgt in range(rep.dim):
                    c = m[tgt][src]
                    if c == fld.zero or (tgt != src and tgt in subset):
                        continue
                    seq = list(subset)
                    seq[slot] = tgt
                    if len(set(seq)) < d:
                        continue
                    srt, sign = sort_sign(seq)
                    row = index[srt]
                    out[row][k] = fld.add(out[row][k], fld.mul(fld.coerce(sign), c))
        return out

    weights = [tuple(sum(rep.weights[i][j] for i in s) for j in range(rep.rank)) for s in subsets]
    out = Representation(rep.algebra, fld, n,
                         [induce(m) for m in rep.e],
                         [induce(m) for m in rep.f],
                         weights, {}, label=f"wedge{d}({rep.label})")
    for key, uni in rep.unipotents.items():
        out.unipotents[key] = _wedge_unipotent(uni, subsets, index, rep, fld)
    if len(rep._basis_actions) == rep.algebra.dim:
        for k, m in rep._basis_actions.items():
            out._basis_actions[k] = induce(m)
    return out


def _wedge_unipotent(uni: UniPoly, subsets, index, rep, fld) -> UniPoly:
    n = len(subsets)
    out: UniPoly = {}
    for k, subset in enumerate(subsets):
        partial = {(0, ()): fld.one}
        for src in subset:
            nxt: Dict[Tuple[int, Tuple[int, ...]], object] = {}
            for (tp, chosen), coeff in partial.items():
                for gp, gm in uni.items():
                    for tgt in range(rep.dim):
                        c = gm[tgt][src]
                        if c == fld.zero or tgt in chosen:
                            continue
                        _collect(nxt, (tp + gp, chosen + (tgt,)), fld.mul(coeff, c), fld)
            partial = nxt
        for (tp, chosen), coeff in partial.items():
            arr = list(chosen)
            sign = 1
            for i in range(len(arr)):
                for j in range(len(arr) - 1 - i):
                    if arr[j] > arr[j + 1]:
                        arr[j], arr[j + 1] = arr[j + 1], arr[j]
                        sign = -sign
            row = index[tuple(arr)]
            if tp not in out:
                out[tp] = mat_zero(n, n, fld)
            out[tp][row][k] = fld.add(out[tp][row][k], fld.mul(fld.coerce(sign), coeff))
    return {k: m for k, m in out.items() if k == 0 or not mat_is_zero(m, fld)}


def frobenius_twist(rep: Representation, e: int = 1) -> Representation:
    """Entrywise p^e power of the group action; the Lie action vanishes."""
    fld = rep.field
    if not isinstance(fld, PrimeField):
        raise TwistInCharZero("Frobenius twist needs prime characteristic")
    q = fld.p**e
    zero = mat_zero(rep.dim, rep.dim, fld)
    weights = [tuple(q * x for x in w) for w in rep.weights]
    unis = {}
    for key, uni in rep.unipotents.items():
        # entries are p-th powers (identity on GF(p)); t-degrees scale by p^e
        unis[key] = {k * q: [row[:] for row in m] for k, m in uni.items()}
    out = Representation(rep.algebra, fld, rep.dim,
                         [zero for _ in rep.e], [zero for _ in rep.f],
                         weights, unis, label=f"twist{e}({rep.label})")
    for k in range(rep.algebra.dim):
        out._basis_actions[k] = zero
    return out


# --- subalgebras -----------------------------------------------------------------


@dataclass
class SubalgebraSpec:
    ambient: ChevalleyAlgebra
    elements: List[Dict[int, Fraction]]  # Chevalley-basis coordinate vectors
    description: str = ""

    def check_closure(self, fld=QQ):
        """Assert bracket closure of the span, over the given coefficient field.

        Closure can genuinely depend on the characteristic (structure
        constants divisible by p vanish there), so the check runs over the
        field that the restriction will act over.
        """
        from .linalg import SparseMatrix, rank

        dim = self.ambient.dim
        rows = [[fld.coerce(vec.get(k, 0)) for k in range(dim)] for vec in self.elements]
        base_rank = rank(SparseMatrix.from_dense(rows, fld)) if rows else 0
        for a in self.elements:
            for b in self.elements:
                br = self.ambient.bracket_vectors(a, b)
                if not br:
                    continue
                ext = rows + [[fld.coerce(br.get(k, 0)) for k in range(dim)]]
                if rank(SparseMatrix.from_dense(ext, fld)) != base_rank:
                    raise ClosureFailure(self.description or "subalgebra not bracket-closed")


def restrict_rep(rep: Representation, spec: SubalgebraSpec) -> List[Matrix]:
    """Action matrices of the subalgebra elements on the representation space."""
    if spec.ambient.datum != rep.algebra.datum:
        raise FieldMismatch("subalgebra of a different ambient algebra")
    spec.check_closure(rep.field)
    return [rep.element_action(vec) for vec in spec.elements]


# --- save / load -----------------------------------------------------------------


def rep_to_json(rep: Representation) -> dict:
    def mat_triples(m):
        fld = rep.field
        return [[r, c, fld.scalar_str(m[r][c])]
                for r in range(rep.dim) for c in range(rep.dim) if m[r][c] != fld.zero]

    return {
        "schema": 1,
        "type": rep.algebra.datum.label,
        "rank": rep.algebra.datum.rank,
        "field": field_to_json(rep.field),
        "dim": rep.dim,
        "label": rep.label,
        "generators": {"e": [mat_triples(m) for m in rep.e],
                       "f": [mat_triples(m) for m in rep.f]},
        "weights": [list(w) for w in rep.weights],
    }


def rep_from_json(data: dict) -> Representation:
    fld = field_from_json(data["field"])
    alg = load_or_build(data["type"], data["rank"])
    dim = data["dim"]

    def parse_scalar(s):
        if isinstance(fld, ExtensionField):
            return tuple(int(x) for x in s.split(","))
        return fld.coerce(s)

    def from_triples(triples):
        m = mat_zero(dim, dim, fld)
        for r, c, v in triples:
            m[r][c] = parse_scalar(v)
        return m

    rep = Representation(
        alg, fld, dim,
        [from_triples(t) for t in data["generators"]["e"]],
        [from_triples(t) for t in data["generators"]["f"]],
        [tuple(w) for w in data["weights"]],
        {},
        label=data.get("label", ""),
    )
    try:
        _attach_unipotents(rep, require_integral=isinstance(fld, Rationals))
    except ZeroDivisionError:
        pass  # characteristic too small for direct exponentials; rebuild from a lattice model
    return rep


def save_rep(rep: Representation, path: str):
    with open(path, "w") as fh:
        json.dump(rep_to_json(rep), fh, sort_keys=True)


def load_rep(path: str) -> Representation:
    with open(path) as fh:
        return rep_from_json(json.load(fh))

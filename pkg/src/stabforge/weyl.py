"""Highest-weight modules: rational construction, integral lattice, reduction.

The characteristic-zero module for a dominant weight is built by breadth-first
lowering from a highest-weight vector.  A vector at depth c (meaning lowered
c_i times along alpha_i) is recorded through its images under the raising
operators e_j, and a candidate combination vanishes exactly when all those
images do; that criterion prunes linear dependencies level by level without
ever fixing coordinates in advance.

The divided-power closure of the highest-weight line is then computed as a
Hermite normal form lattice, giving a basis on which all generator matrices,
their divided powers, and the contravariant form are integral.  Reduction
modulo p and the quotient by the radical of the form produce the irreducible
head.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .chevalley import ChevalleyAlgebra
from .fields import PrimeField, QQ, Rationals
from .linalg import hermite_normal_form
from .reps import (
    Representation,
    TooLarge,
    _attach_unipotents,
    _rref,
    _split_by_weight,
    mat_identity,
    mat_is_zero,
    mat_mul,
    mat_scale,
    mat_vec,
    mat_zero,
    quotient_rep,
    reduce_rep,
)

DIM_GUARD = 2000


def weyl_dim(datum, highest: Sequence[int]) -> int:
    """Dimension of the highest-weight module over the rationals."""
    total = Fraction(1)
    for alpha in datum.positive_roots:
        cor = datum.coroot(alpha)
        num = sum((h + 1) * c for h, c in zip(highest, cor))
        den = sum(cor)
        total *= Fraction(num, den)
    assert total.denominator == 1
    return int(total)


def weyl_module(alg: ChevalleyAlgebra, highest: Sequence[int], fld=QQ,
                precompute_actions: bool = False) -> Representation:
    """Highest-weight module on a divided-power-stable integral basis.

    highest is given in fundamental-weight coordinates (nonnegative integers).
    Raises TooLarge when the dimension formula exceeds the guard rail.
    """
    datum = alg.datum
    rank = datum.rank
    highest = tuple(int(x) for x in highest)
    if any(x < 0 for x in highest):
        raise ValueError("highest weight must be dominant")
    predicted = weyl_dim(datum, highest)
    if predicted > DIM_GUARD:
        raise TooLarge(f"dimension {predicted} exceeds guard rail {DIM_GUARD}")
    cartan = datum.cartan

    def pairing(depth, i):
        return highest[i] - sum(cartan[i][k] * depth[k] for k in range(rank))

    # per-depth state
    counts: Dict[Tuple[int, ...], int] = {(0,) * rank: 1}
    e_img: Dict[Tuple[int, ...], List[List[List[Fraction]]]] = {(0,) * rank: [[[] for _ in range(rank)]]}
    f_mat: Dict[Tuple[Tuple[int, ...], int], List[List[Fraction]]] = {}
    level = 1
    total = 1
    while True:
        # depths at this level reachable from a populated parent
        frontier = set()
        for d, cnt in counts.items():
            if sum(d) == level - 1 and cnt:
                for i in range(rank):
                    frontier.add(tuple(x + (1 if k == i else 0) for k, x in enumerate(d)))
        frontier = sorted(frontier)
        new_any = False
        for depth in frontier:
            parents = [i for i in range(rank)
                       if depth[i] > 0 and counts.get(_dec(depth, i), 0) > 0]
            if not parents:
                continue
            img_dims = [counts.get(_dec(depth, j), 0) for j in range(rank)]
            offsets = [0] * rank
            acc = 0
            for j in range(rank):
                offsets[j] = acc
                acc += img_dims[j]
            width = acc
            candidates = []  # (i, m) labels
            rows = []
            for i in parents:
                parent = _dec(depth, i)
                for m in range(counts[parent]):
                    row = [Fraction(0)] * width
                    for j in range(rank):
                        tgt_depth = _dec(depth, j)
                        if counts.get(tgt_depth, 0) == 0:
                            continue
                        # e_j f_i (parent_m) = f_i e_j (parent_m) + [i==j] <wt, a_i> parent_m
                        vec = [Fraction(0)] * counts[tgt_depth]
                        parent_e = e_img[parent][m][j] if sum(parent) and counts.get(_dec(parent, j), 0) else []
                        if parent_e:
                            fm = f_mat.get((_dec(parent, j), i))
                            if fm is not None:
                                for a, coeff in enumerate(parent_e):
                                    if coeff:
                                        for b in range(len(vec)):
                                            vec[b] += coeff * fm[b][a]
                        if i == j:
                            vec[m] += pairing(parent, i)
                        for b, x in enumerate(vec):
                            row[offsets[j] + b] = x
                    candidates.append((i, m))
                    rows.append(row)
            # independent candidates span the new weight space
            basis_rows, piv, expansions = _rref_with_expansion(rows)
            cnt = len(basis_rows)
            if cnt == 0:
                continue
            new_any = True
            counts[depth] = cnt
            total += cnt
            if total > DIM_GUARD + 1:
                raise TooLarge("construction exceeded the dimension guard rail")
            # e-images of the new basis vectors, sliced from the stacked rows
            e_list = []
            for b in range(cnt):
                per_j = []
                row = basis_rows[b]
                for j in range(rank):
                    per_j.append([row[offsets[j] + t] for t in range(img_dims[j])])
                e_list.append(per_j)
            e_img[depth] = e_list
            # f matrices from each parent into this depth
            for i in parents:
                parent = _dec(depth, i)
                fm = [[Fraction(0)] * counts[parent] for _ in range(cnt)]
                for cand_idx, (ii, m) in enumerate(candidates):
                    if ii != i:
                        continue
                    for b in range(cnt):
                        fm[b][m] = expansions[cand_idx][b]
                f_mat[(parent, i)] = fm
        if not new_any:
            break
        level += 1
    assert total == predicted, (total, predicted)

    # global ordering: depths sorted by (level, lex), then slot
    depths = sorted(counts, key=lambda d: (sum(d), d))
    offset = {}
    acc = 0
    for d in depths:
        offset[d] = acc
        acc += counts[d]
    n = acc
    base = QQ
    e_mats = [mat_zero(n, n, base) for _ in range(rank)]
    f_mats = [mat_zero(n, n, base) for _ in range(rank)]
    for d in depths:
        for m in range(counts[d]):
            col = offset[d] + m
            for j in range(rank):
                up = _dec(d, j)
                if d[j] > 0 and counts.get(up, 0):
                    for b, c in enumerate(e_img[d][m][j]):
                        if c:
                            e_mats[j][offset[up] + b][col] = c
        for i in range(rank):
            fm = f_mat.get((d, i))
            if fm is None:
                continue
            down = tuple(x + (1 if k == i else 0) for k, x in enumerate(d))
            for m in range(counts[d]):
                for b in range(counts[down]):
                    c = fm[b][m]
                    if c:
                        f_mats[i][offset[down] + b][offset[d] + m] = c
    weights = []
    for d in depths:
        w = tuple(pairing(d, i) for i in range(rank))
        weights.extend([w] * counts[d])
    rep = Representation(alg, base, n, e_mats, f_mats, weights, {},
                         label=f"weyl({alg.datum.label}{alg.datum.rank};{','.join(map(str, highest))})")
    _to_integral_lattice(rep)
    rep.gram = _contravariant_gram(rep)
    _attach_unipotents(rep)
    if precompute_actions:
        rep.precompute_basis_actions()
    if not isinstance(fld, Rationals):
        rep = reduce_rep(rep, fld)
    return rep


def _dec(depth, i):
    return tuple(x - (1 if k == i else 0) for k, x in enumerate(depth))


def _rref_with_expansion(rows):
    """Echelonize, keeping for every input row its expansion in the row basis.

    Returns (basis_rows, pivot_cols, expansions): basis rows are the first
    linearly independent input rows, unnormalized, and each input row equals
    sum_b expansions[r][b] * basis_rows[b].
    """
    basis: List[List[Fraction]] = []
    piv: List[int] = []
    work: List[Tuple[List[Fraction], List[Fraction]]] = []  # (unit-pivot vector, combo over basis)
    expansions: List[List[Fraction]] = []
    nbasis_bound = len(rows)
    for row in rows:
        vec = [Fraction(x) for x in row]
        combo = [Fraction(0)] * nbasis_bound  # coefficients over basis rows so far
        for (rvec, rcombo), p in zip(work, piv):
            c = vec[p]
            if c:
                vec = [a - c * b for a, b in zip(vec, rvec)]
                combo = [a + c * b for a, b in zip(combo, rcombo)]
        nz = next((k for k, x in enumerate(vec) if x), None)
        if nz is None:
            expansions.append(combo)
            continue
        # new independent row: row = vec + sum combo*basis, and vec defines the pivot
        idx = len(basis)
        basis.append([Fraction(x) for x in row])
        inv = 1 / vec[nz]
        # unit-pivot reduced form of the new basis row, and its combo over basis:
        # basis_idx = row, so reduced(row) = inv * (row - sum combo*basis) in echelon
        rcombo = [-inv * c for c in combo]
        rcombo[idx] = inv
        work.append(([inv * x for x in vec], rcombo))
        piv.append(nz)
        exp = [Fraction(0)] * nbasis_bound
        exp[idx] = Fraction(1)
        expansions.append(exp)
    cut = [[e[b] for b in range(len(basis))] for e in expansions]
    return basis, piv, cut


def divided_power_matrices(m, fld, max_check=None):
    """m^k / k! for k = 1.. until zero."""
    out = []
    power = [row[:] for row in m]
    k = 1
    while not mat_is_zero(power, fld):
        out.append(mat_scale(power, fld.coerce(Fraction(1, factorial(k))), fld))
        power = mat_mul(power, m, fld)
        k += 1
        if max_check and k > max_check:
            raise ValueError("not nilpotent")
    return out


def _to_integral_lattice(rep: Representation):
    """Rebase onto the divided-power closure of the highest-weight line."""
    n = rep.dim
    fld = rep.field
    divided = []
    for m in rep.f + rep.e:
        divided.extend(divided_power_matrices(m, fld, max_check=n + 2))
    rows = [[Fraction(1) if j == 0 else Fraction(0) for j in range(n)]]
    prev_key = None
    for _ in range(60):
        new_rows = list(rows)
        for mat in divided:
            for r in rows:
                img = mat_vec(mat, r, fld)
                if any(img):
                    new_rows.append(img)
        hnf = _rational_hnf(new_rows)
        key = tuple(tuple(x) for x in hnf)
        if key == prev_key:
            break
        prev_key = key
        rows = [list(r) for r in hnf]
    else:
        raise RuntimeError("lattice closure did not stabilize")
    assert len(rows) == n, "lattice does not have full rank"
    # change of basis: columns of b are the new basis vectors
    b = [[rows[j][i] for j in range(n)] for i in range(n)]
    binv = _invert(b)
    conj = lambda m: mat_mul(binv, mat_mul(m, b, fld), fld)
    rep.e = [conj(m) for m in rep.e]
    rep.f = [conj(m) for m in rep.f]
    for m in rep.e + rep.f:
        for x in (x for row in m for x in row):
            assert Fraction(x).denominator == 1, "lattice basis not integral"
    new_weights = []
    for r in rows:
        wts = {rep.weights[k] for k, x in enumerate(r) if x}
        assert len(wts) == 1, "lattice basis vector mixes weights"
        new_weights.append(wts.pop())
    rep.weights = new_weights
    rep._basis_actions.clear()


def _rational_hnf(rows):
    den = 1
    for r in rows:
        for x in r:
            fx = Fraction(x)
            if fx.denominator != 1:
                den = den * fx.denominator // _gcd(den, fx.denominator)
    scaled = [[int(Fraction(x) * den) for x in r] for r in rows]
    hnf = hermite_normal_form(scaled)
    return [[Fraction(x, den) for x in r] for r in hnf]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _invert(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(1 if k == i else 0) for k in range(n)]
           for i in range(n)]
    for c in range(n):
        pr = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _contravariant_gram(rep: Representation):
    """Symmetric form with <v+, v+> = 1 and <f_i x, y> = <x, e_i y>.

    Solved block by block down the weight poset: the values on a block are
    pinned by pairings of f_i-images of the blocks directly above it, whose
    Gram values are already known.
    """
    n = rep.dim
    by_weight: Dict[Tuple[int, ...], List[int]] = {}
    for k, w in enumerate(rep.weights):
        by_weight.setdefault(w, []).append(k)
    lam = rep.weights[0]
    cartan = rep.algebra.datum.cartan
    cart_inv = _invert([[Fraction(x) for x in row] for row in cartan])

    def depth_of(w):
        diff = [Fraction(a - b) for a, b in zip(lam, w)]
        coords = [sum(cart_inv[i][j] * diff[j] for j in range(len(diff))) for i in range(len(diff))]
        assert all(c.denominator == 1 and c >= 0 for c in coords), "weight outside the cone"
        return (int(sum(coords)), w)

    order = sorted(by_weight, key=depth_of)
    gram = [[Fraction(0)] * n for _ in range(n)]
    gram[0][0] = Fraction(1)
    assert by_weight[order[0]] == [0], "highest-weight vector is not the first basis vector"
    for w in order[1:]:
        block = by_weight[w]
        # <f_i z, y> = <z, e_i y>, with z running over the block at w + a_i
        mat_rows, rhs_rows = [], []
        for i in range(rep.rank):
            wa = tuple(a + cartan[t][i] for t, a in enumerate(w))
            parent = by_weight.get(wa)
            if not parent:
                continue
            for z in parent:
                col = [Fraction(rep.f[i][x][z]) for x in block]  # f_i z in block coords
                if not any(col):
                    continue
                vals = [sum(gram[z][zz] * Fraction(rep.e[i][zz][y]) for zz in parent)
                        for y in block]
                mat_rows.append(col)
                rhs_rows.append(vals)
        sol = _solve_linear_system(mat_rows, rhs_rows, len(block))
        for a in range(len(block)):
            for b in range(len(block)):
                gram[block[a]][block[b]] = sol[a][b]
    for r in range(n):
        for c in range(n):
            assert gram[r][c] == gram[c][r], "contravariant form not symmetric"
            assert gram[r][c].denominator == 1, "contravariant form not integral on the lattice"
    return gram


def _solve_linear_system(mat_rows, rhs_rows, m):
    """Solve A X = B for X (m x m), rows of A are coefficient vectors."""
    aug = [list(map(Fraction, r)) + list(map(Fraction, rhs)) for r, rhs in zip(mat_rows, rhs_rows)]
    ncols = m
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    assert len(piv) == m, "contravariant system is underdetermined"
    sol = [[Fraction(0)] * m for _ in range(m)]
    for i, c in enumerate(piv):
        for b in range(m):
            sol[c][b] = aug[i][ncols + b]
    return sol


def irreducible_head(rep_p: Representation) -> Representation:
    """Quotient by the radical of the contravariant form (reduction of a lattice)."""
    if not isinstance(rep_p.field, PrimeField):
        raise ValueError("irreducible head applies to prime-field reductions")
    if rep_p.gram is None:
        raise ValueError("representation carries no contravariant form")
    from .linalg import SparseMatrix, kernel_basis

    fld = rep_p.field
    n = rep_p.dim
    triples = [(r, c, rep_p.gram[r][c]) for r in range(n) for c in range(n)
               if rep_p.gram[r][c] != fld.zero]
    sm = SparseMatrix.from_triples(max(n, 1), n, fld, triples)
    radical = [list(v) for v in kernel_basis(sm)]
    if not radical:
        return rep_p
    return quotient_rep(rep_p, _split_by_weight(radical, rep_p), label=rep_p.label + ".head")

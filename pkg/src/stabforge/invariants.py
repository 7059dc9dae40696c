"""Per-degree invariant spaces, infinitesimal stabilizers, orbit dimensions,
and Weyl-invariant polynomials on the Cartan subalgebra.

Invariance conditions come in two modes:

* lie: a polynomial is killed by the derivation action of every generator
  matrix; torus conditions reduce to a congruence on monomial weights (exact
  vanishing in characteristic zero, vanishing mod p otherwise).
* group: a polynomial is fixed by the one-parameter subgroups x_{+-a_i}(t)
  with t treated as a formal variable, together with exact integral weight
  zero for the torus.  Collecting coefficients of every power of t makes the
  fixed-point condition a finite exact linear system in every characteristic;
  no sampling of t values and no field extensions are needed, and the kernel
  computed is the fixed space of the group scheme generated by those
  subgroups and the split torus.

Rational answers are certified by reduction modulo independent primes;
rational bases are recovered by CRT plus rational reconstruction and then
verified exactly, so a reconstruction failure can never produce a wrong
basis, only a retry.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import modp
from .fields import ExtensionField, PrimeField, QQ, Rationals
from .linalg import (
    NoConsensus,
    SparseMatrix,
    kernel_primes,
    rank as sparse_rank,
    random_primes,
    reconstruct_vector,
)
from .poly import SparsePoly, derivation_action, grevlex_key, monomial_basis, substitute_linear
from .reps import Representation, UniPoly, mat_vec


class FieldTooSmall(ValueError):
    """Raised when explicit t-sampling is requested over a too-small field."""


@dataclass
class InvariantReport:
    rep_label: str
    mode: str
    field_desc: str
    degrees: Dict[int, int]  # degree -> dimension
    bases: Dict[int, List[SparsePoly]] = dc_field(default_factory=dict)
    primes_used: List[int] = dc_field(default_factory=list)
    samples_used: int = 0
    caveat: str = ("group mode reports invariants of the subgroup scheme generated by "
                   "the listed one-parameter subgroups and the split torus")

    def to_json(self) -> dict:
        return {
            "rep": self.rep_label,
            "mode": self.mode,
            "field": self.field_desc,
            "degrees": [{"degree": d, "dimension": self.degrees[d]} for d in sorted(self.degrees)],
            "primes_used": list(self.primes_used),
            "caveat": self.caveat if self.mode == "group" else "",
        }


@dataclass
class StabilizerReport:
    poly_desc: str
    nvars: int
    degree: int
    stabilizer_dim: int
    basis: List[List[List[Fraction]]]
    contains_scalars: bool
    primes_used: List[int]

    def to_json(self) -> dict:
        return {
            "poly": self.poly_desc,
            "nvars": self.nvars,
            "degree": self.degree,
            "stabilizer_dim": self.stabilizer_dim,
            "contains_scalars": self.contains_scalars,
            "primes_used": list(self.primes_used),
        }


# --- condition assembly -----------------------------------------------------


def _monomials_for_mode(nvars, d, weights, mode, char):
    """Monomial stratum on which invariants can live."""
    if mode == "group" or char == 0:
        return monomial_basis(nvars, d, weights=weights, target=(0,) * len(weights[0]))
    # lie mode, characteristic p: torus conditions only see weights mod p
    monos = monomial_basis(nvars, d)
    keep = []
    for m in monos:
        tot = [0] * len(weights[0])
        for pos, k in enumerate(m):
            if k:
                for i, w in enumerate(weights[pos]):
                    tot[i] += k * w
        if all(t % char == 0 for t in tot):
            keep.append(m)
    return keep


def _derivation_block(matrix, monos, nvars) -> List[Tuple[Tuple, int, int]]:
    """Triples (target_key, col, coeff) of the derivation condition, integer entries."""
    entries = []
    for col, mono in enumerate(monos):
        for pos, k in enumerate(mono):
            if k == 0:
                continue
            row = matrix[pos]
            for j in range(nvars):
                ci = row[j]
                if ci == 0:
                    continue
                new = list(mono)
                new[pos] -= 1
                new[j] += 1
                entries.append((tuple(new), col, k * ci))
    return entries


def _substitution_terms(uni: UniPoly, mono, nvars):
    """(t-power, monomial) -> integer coefficient of the image of mono under x(t)."""
    # per-variable linear forms: var pos -> list of (tpow, j, coeff)
    partial: Dict[Tuple[int, Tuple[int, ...]], int] = {(0, (0,) * nvars): 1}
    for pos, k in enumerate(mono):
        if k == 0:
            continue
        form = []
        for tp, m in uni.items():
            for j in range(nvars):
                c = m[pos][j]
                ci = int(c)
                if ci:
                    form.append((tp, j, ci))
        for _ in range(k):
            nxt: Dict[Tuple[int, Tuple[int, ...]], int] = {}
            for (tp0, acc), coeff in partial.items():
                for tp, j, ci in form:
                    newacc = list(acc)
                    newacc[j] += 1
                    key = (tp0 + tp, tuple(newacc))
                    v = nxt.get(key, 0) + coeff * ci
                    if v:
                        nxt[key] = v
                    elif key in nxt:
                        del nxt[key]
            partial = nxt
    return partial


def _group_block(uni: UniPoly, monos, nvars) -> List[Tuple[Tuple, int, int]]:
    """Triples for the fixed-point condition of one unipotent family."""
    entries = []
    moved = set()
    ident_rows = {}
    for tp, m in uni.items():
        if tp == 0:
            continue
        for pos in range(nvars):
            if any(int(x) for x in m[pos]):
                moved.add(pos)
    for col, mono in enumerate(monos):
        if not any(mono[pos] for pos in moved):
            continue  # monomial fixed by this family
        terms = _substitution_terms(uni, mono, nvars)
        terms[(0, tuple(mono))] = terms.get((0, tuple(mono)), 0) - 1
        for (tp, tm), c in terms.items():
            if c:
                entries.append(((tp, tm), col, c))
    return entries


def _entries_to_sparse_rows(entries, ncols) -> modp.SparseRows:
    row_index: Dict[Tuple, int] = {}
    rows, cols, vals = [], [], []
    for key, col, c in entries:
        r = row_index.setdefault(key, len(row_index))
        rows.append(r)
        cols.append(col)
        vals.append(c)
    return modp.SparseRows(len(row_index), ncols, rows, cols, vals)


def _int_matrix(m):
    out = []
    for row in m:
        out.append([int(Fraction(x)) if isinstance(x, Fraction) else int(x) for x in row])
    return out


def condition_blocks(sources, monos, nvars, mode) -> List[modp.SparseRows]:
    """One SparseRows block per generator/family, integer entries."""
    blocks = []
    for src in sources:
        if mode == "lie":
            entries = _derivation_block(_int_matrix(src), monos, nvars)
        else:
            uni = {tp: _int_matrix(m) for tp, m in src.items()}
            entries = _group_block(uni, monos, nvars)
        blocks.append(_entries_to_sparse_rows(entries, len(monos)))
    return blocks


# --- kernel evaluation over the various fields --------------------------------


def _kernel_dim_and_basis_modp(blocks, ncols, p, want_basis):
    basis = modp.kernel_of_blocks(blocks, ncols, p)
    if not want_basis:
        return basis.shape[1], None
    # canonical form: reduced echelon rows of the kernel, in grevlex column order
    if basis.shape[1] == 0:
        return 0, np.zeros((0, ncols), dtype=np.int64)
    rows = basis.T % p
    work = rows.astype(np.float64) if p < modp.FAST_PRIME_BOUND else rows.astype(np.int64)
    if p < modp.FAST_PRIME_BOUND:
        rank, piv = modp.ref_mod(work, p)
        # back-eliminate to full rref for canonicality
        work = work[:rank]
        for i in range(rank - 1, -1, -1):
            c = piv[i]
            for r in range(i):
                f = work[r, c]
                if f:
                    work[r] = np.mod(work[r] - f * work[i], p)
        return rank, work.astype(np.int64)
    # big prime: plain rref
    from .fields import PrimeField as PF
    from .linalg import SparseMatrix as SM, kernel_basis as kb

    raise NotImplementedError("canonical bases only on small-prime path")


def _exact_weight_zero_check(vec_poly: SparsePoly, sources, mode) -> bool:
    for src in sources:
        if mode == "lie":
            rows = [[QQ.coerce(x) for x in row] for row in src]
            if not derivation_action(rows, vec_poly).is_zero():
                return False
        else:
            if not _group_fixed_exact(src, vec_poly):
                return False
    return True


def _group_fixed_exact(uni: UniPoly, f: SparsePoly) -> bool:
    """f(x(t) v) = f(v) with t formal, checked exactly over the rationals."""
    n = f.nvars
    total: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}
    for mono, coeff in f.terms.items():
        terms = _substitution_terms({tp: _int_matrix(m) for tp, m in uni.items()}, mono, n)
        for key, c in terms.items():
            v = total.get(key, Fraction(0)) + Fraction(coeff) * c
            if v:
                total[key] = v
            elif key in total:
                del total[key]
    for mono, coeff in f.terms.items():
        key = (0, tuple(mono))
        v = total.get(key, Fraction(0)) - Fraction(coeff)
        if v:
            total[key] = v
        elif key in total:
            del total[key]
    return not total


def invariant_kernel(sources, monos, nvars, mode, fld, want_basis=False, seed=0,
                     n_primes=2, max_retries=3):
    """Dimension (and optionally an exact basis) of the invariant stratum.

    Returns (dim, basis_vectors, primes_used): basis vectors are coefficient
    lists over fld aligned with monos.
    """
    blocks = condition_blocks(sources, monos, nvars, mode)
    ncols = len(monos)
    if isinstance(fld, PrimeField):
        if fld.p < modp.FAST_PRIME_BOUND:
            dim, rows = _kernel_dim_and_basis_modp(blocks, ncols, fld.p, want_basis)
            basis = [list(map(int, r)) for r in rows] if want_basis and rows is not None else None
            return dim, basis, [fld.p]
        # large prime: stack into one sparse matrix
        triples = []
        off = 0
        for b in blocks:
            for r, c, v in zip(b.rows, b.cols, b.vals):
                triples.append((off + int(r), int(c), int(v) % fld.p))
            off += b.nrows
        sm = SparseMatrix.from_triples(max(off, 1), ncols, fld, [t for t in triples if t[2]])
        from .linalg import kernel_basis as kb

        vecs = kb(sm)
        return len(vecs), ([list(v) for v in vecs] if want_basis else None), [fld.p]
    if not isinstance(fld, Rationals):
        raise ValueError("invariant kernels run over the rationals or prime fields")
    # rationals: modular consensus, optional reconstruction
    avoid: set = set()
    for attempt in range(max_retries):
        primes = kernel_primes(n_primes, seed + 13 * attempt, avoid=avoid)
        results = [_kernel_dim_and_basis_modp(blocks, ncols, p, want_basis) for p in primes]
        dims = {r[0] for r in results}
        if len(dims) != 1:
            avoid.update(primes)
            continue
        dim = dims.pop()
        if not want_basis:
            return dim, None, primes
        if dim == 0:
            return 0, [], primes
        rec = reconstruct_vector([np.concatenate(list(res[1])) for res in results], primes)
        if rec is None:
            avoid.update(primes)
            n_primes += 1
            continue
        flat = rec
        basis = []
        ok = True
        for i in range(dim):
            coeffs = flat[i * ncols:(i + 1) * ncols]
            poly = SparsePoly.from_coeff_vector(coeffs, monos, nvars, QQ)
            if not _exact_weight_zero_check(poly, sources, mode):
                ok = False
                break
            basis.append([Fraction(c) for c in coeffs])
        if ok:
            return dim, basis, primes
        avoid.update(primes)
        n_primes += 1
    raise NoConsensus("invariant kernel: no stable result across prime retries")


# --- public operations -----------------------------------------------------------


def invariant_space(rep: Representation, d: int, mode: str = "lie", want_basis: bool = False,
                    seed: int = 0, n_primes: int = 2):
    """Dimension (and optional basis) of degree-d invariants of the representation.

    Only the weight-zero monomial stratum enters the kernel: nonzero-weight
    monomials cannot appear in an invariant because the torus acts on them
    nontrivially (exactly in group mode and characteristic zero, mod p in lie
    mode).
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if mode not in ("lie", "group"):
        raise ValueError("mode is 'lie' or 'group'")
    fld = rep.field
    char = 0 if isinstance(fld, Rationals) else fld.characteristic
    monos = _monomials_for_mode(rep.dim, d, rep.weights, mode, char)
    if mode == "lie":
        sources = list(rep.e) + list(rep.f)
    else:
        sources = rep.one_param_families()
    if not monos:
        return 0, [], []
    dim, basis, primes = invariant_kernel(sources, monos, rep.dim, mode, fld,
                                          want_basis=want_basis, seed=seed, n_primes=n_primes)
    polys = []
    if want_basis and basis:
        for vec in basis:
            polys.append(SparsePoly.from_coeff_vector(vec, monos, rep.dim, fld))
    return dim, polys, primes


def invariant_report(rep: Representation, degrees: Iterable[int], mode: str = "lie",
                     want_basis: bool = False, seed: int = 0) -> InvariantReport:
    report = InvariantReport(rep_label=rep.label, mode=mode, field_desc=repr(rep.field), degrees={})
    for d in degrees:
        dim, polys, primes = invariant_space(rep, d, mode, want_basis=want_basis, seed=seed)
        report.degrees[d] = dim
        if want_basis:
            report.bases[d] = polys
        for p in primes:
            if p not in report.primes_used:
                report.primes_used.append(p)
    return report


def stabilizer_algebra(f: SparsePoly, seed: int = 0, want_basis: bool = True) -> StabilizerReport:
    """Lie algebra of the stabilizer of f inside all n-by-n matrices.

    The kernel of X -> (derivation of f along X), an exact linear computation;
    over the rationals the dimension is certified modulo two primes and the
    basis matrices are reconstructed and verified exactly.
    """
    assert f.is_homogeneous() and not f.is_zero() and f.degree() >= 1, "need homogeneous nonconstant f"
    n = f.nvars
    fld = f.field
    d = f.degree()
    target_monos = monomial_basis(n, d)
    tindex = {m: i for i, m in enumerate(target_monos)}
    # column (a, b) = coefficients of (d f / d x_a) * x_b
    entries = []
    for (a, b) in [(a, b) for a in range(n) for b in range(n)]:
        col = a * n + b
        for mono, coeff in f.terms.items():
            if mono[a] == 0:
                continue
            new = list(mono)
            new[a] -= 1
            new[b] += 1
            entries.append((tindex[tuple(new)], col, Fraction(coeff) * mono[a]))
    if isinstance(fld, Rationals):
        primes = kernel_primes(2, seed)
        dims = []
        kernels = []
        for p in primes:
            rows, cols, vals = [], [], []
            for r, c, v in entries:
                vv = int(v) % p if v.denominator == 1 else (v.numerator % p) * pow(v.denominator % p, -1, p) % p
                if vv:
                    rows.append(r)
                    cols.append(c)
                    vals.append(vv)
            blk = modp.SparseRows(len(target_monos), n * n, rows, cols, vals)
            basis = modp.kernel_of_blocks([blk], n * n, p)
            dims.append(basis.shape[1])
            kernels.append(basis)
        if len(set(dims)) != 1:
            raise NoConsensus(f"stabilizer dims disagree: {dims}")
        dim = dims[0]
        basis_mats = []
        if want_basis and dim:
            # canonicalize and reconstruct
            canon = []
            for basis, p in zip(kernels, primes):
                rows = basis.T % p
                work = rows.astype(np.float64)
                rank, piv = modp.ref_mod(work, p)
                work = work[:rank]
                for i in range(rank - 1, -1, -1):
                    c = piv[i]
                    for r in range(i):
                        fct = work[r, c]
                        if fct:
                            work[r] = np.mod(work[r] - fct * work[i], p)
                canon.append(work)
            rec = reconstruct_vector([c.reshape(-1) for c in canon], primes)
            assert rec is not None, "stabilizer basis reconstruction failed"
            for i in range(dim):
                flat = rec[i * n * n:(i + 1) * n * n]
                mat = [[flat[r * n + c] for c in range(n)] for r in range(n)]
                rows_q = [[QQ.coerce(x) for x in row] for row in mat]
                assert derivation_action(rows_q, f).is_zero(), "reconstructed matrix not in stabilizer"
                basis_mats.append(mat)
    else:
        p = fld.p
        rows, cols, vals = [], [], []
        for r, c, v in entries:
            vv = fld.coerce(v)
            if vv:
                rows.append(r)
                cols.append(c)
                vals.append(vv)
        blk = modp.SparseRows(len(target_monos), n * n, rows, cols, vals)
        basis = modp.kernel_of_blocks([blk], n * n, p)
        dim = basis.shape[1]
        primes = [p]
        basis_mats = []
        if want_basis:
            for j in range(dim):
                flat = basis[:, j]
                mat = [[int(flat[r * n + c]) for c in range(n)] for r in range(n)]
                rows_f = [[fld.coerce(x) for x in row] for row in mat]
                assert derivation_action(rows_f, f).is_zero()
                basis_mats.append(mat)
    # scalars lie in the stabilizer iff the characteristic divides deg f
    ident = [[fld.one if i == j else fld.zero for j in range(n)] for i in range(n)]
    scalars_in = derivation_action(ident, f).is_zero()
    char = 0 if isinstance(fld, Rationals) else fld.characteristic
    assert scalars_in == (char != 0 and d % char == 0), "scalar criterion violated"
    return StabilizerReport(
        poly_desc=f"degree-{d} form in {n} variables",
        nvars=n, degree=d, stabilizer_dim=dim,
        basis=basis_mats, contains_scalars=scalars_in, primes_used=list(primes),
    )


def orbit_dim(rep: Representation, v: Sequence) -> int:
    """Rank of the algebra-action map at v: dim of the infinitesimal orbit."""
    fld = rep.field
    vec = [fld.coerce(x) for x in v]
    cols = []
    for k in range(rep.algebra.dim):
        cols.append(mat_vec(rep.basis_action(k), vec, fld))
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(rep.dim)]
    if isinstance(fld, Rationals):
        from .linalg import rational_rank

        r, _ = rational_rank(SparseMatrix.from_dense(rows, fld))
        return r
    return sparse_rank(SparseMatrix.from_dense(rows, fld))


def generic_invariant_dim(rep: Representation, samples: int = 3, seed: int = 0,
                          bound: int = 10) -> Tuple[int, int, int]:
    """dim V minus the maximal orbit dimension over random points.

    Random coordinates are drawn from -bound..bound (or the whole field in
    finite characteristic).  Upper semicontinuity makes the max over samples
    the generic value with overwhelming probability; the sample count doubles
    (up to 24) until at least three draws agree on the maximum.

    Returns (invariant_dimension, hits, samples_used).
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    fld = rep.field
    if isinstance(fld, PrimeField) and fld.p <= 10**6:
        raise ValueError("prime field too small for generic sampling; use an extension")
    rng = random.Random(seed)

    def draw():
        if isinstance(fld, Rationals):
            return [QQ.coerce(rng.randint(-bound, bound)) for _ in range(rep.dim)]
        if isinstance(fld, ExtensionField):
            return [fld.from_int(rng.randrange(fld.size)) for _ in range(rep.dim)]
        return [rng.randrange(fld.p) for _ in range(rep.dim)]

    ranks: List[int] = []
    while True:
        while len(ranks) < samples:
            ranks.append(orbit_dim(rep, draw()))
        best = max(ranks)
        hits = ranks.count(best)
        if hits >= 3 or samples >= 24:
            return rep.dim - best, hits, samples
        samples = min(2 * samples, 24)


@dataclass
class SubgroupAction:
    """A subgroup's data on an ambient representation space, for comparisons."""

    label: str
    lie_matrices: List  # matrices over the rep's field
    weights: List[Tuple[int, ...]]  # integral subgroup weights per basis index
    unipotents: List[UniPoly] = dc_field(default_factory=list)  # one-parameter families


def subgroup_invariant_space(sub: SubgroupAction, dim: int, fld, d: int, mode: str,
                             want_basis: bool = False, seed: int = 0):
    char = 0 if isinstance(fld, Rationals) else fld.characteristic
    monos = _monomials_for_mode(dim, d, sub.weights, mode, char)
    if not monos:
        return 0, [], []
    sources = sub.lie_matrices if mode == "lie" else sub.unipotents
    return invariant_kernel(sources, monos, dim, mode, fld, want_basis=want_basis, seed=seed)


def compare_invariants(rep: Representation, sub: SubgroupAction, degrees: Iterable[int],
                       mode: str = "lie", seed: int = 0) -> dict:
    """Per-degree invariant dimensions of the full group and a subgroup.

    Returns {"degrees": [...], "ambient": dims, "subgroup": dims, "equal": flags}.
    """
    degs = sorted(degrees)
    amb, subd = [], []
    for d in degs:
        a, _, _ = invariant_space(rep, d, mode, seed=seed)
        s, _, _ = subgroup_invariant_space(sub, rep.dim, rep.field, d, mode, seed=seed)
        amb.append(a)
        subd.append(s)
    return {
        "degrees": degs,
        "ambient": amb,
        "subgroup": subd,
        "equal": [x == y for x, y in zip(amb, subd)],
        "ambient_label": rep.label,
        "subgroup_label": sub.label,
    }


def chevalley_restriction(f: SparsePoly, rep: Representation) -> SparsePoly:
    """Restrict a polynomial on the adjoint space to the Cartan coordinates."""
    from .poly import DimensionMismatch

    alg = rep.algebra
    if f.nvars != alg.dim:
        raise DimensionMismatch("polynomial does not live on the adjoint space")
    npos, rank = alg.npos, alg.datum.rank
    out = SparsePoly.zero(rank, f.field)
    for mono, c in f.terms.items():
        if any(mono[k] for k in range(npos)) or any(mono[npos + rank:]):
            continue
        out._add_term(tuple(mono[npos + i] for i in range(rank)), c)
    return out


def weyl_reflection_matrices(datum, fld):
    return [[[fld.coerce(x) for x in row] for row in m] for m in datum.coroot_reflections()]


def is_weyl_invariant(f: SparsePoly, datum) -> bool:
    for m in weyl_reflection_matrices(datum, f.field):
        if not substitute_linear(f, m).sub(f).is_zero():
            return False
    return True


def weyl_invariant_space(datum, d: int, fld=QQ, want_basis: bool = False, seed: int = 0,
                         n_primes: int = 2):
    """Invariant degree-d polynomials on the Cartan under the simple reflections.

    Over the rationals, basis vectors are content-reduced to indivisible
    integral representatives.  Returns (dim, polys, primes_used).
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    rank = datum.rank
    monos = monomial_basis(rank, d)
    index = {m: i for i, m in enumerate(monos)}
    blocks = []
    refl = datum.coroot_reflections()
    for m in refl:
        entries = []
        uni_like = [[int(x) for x in row] for row in m]
        for col, mono in enumerate(monos):
            img = _monomial_substitution(uni_like, mono, rank)
            img[tuple(mono)] = img.get(tuple(mono), 0) - 1
            for tm, c in img.items():
                if c:
                    entries.append((tm, col, c))
        blocks.append(_entries_to_sparse_rows(entries, len(monos)))
    if isinstance(fld, PrimeField):
        dim, rows = _kernel_dim_and_basis_modp(blocks, len(monos), fld.p, want_basis)
        polys = []
        if want_basis and rows is not None:
            for r in rows:
                polys.append(SparsePoly.from_coeff_vector([int(x) for x in r], monos, rank, fld))
        return dim, polys, [fld.p]
    assert isinstance(fld, Rationals)
    avoid: set = set()
    for attempt in range(4):
        primes = kernel_primes(n_primes, seed + 11 * attempt, avoid=avoid)
        results = [_kernel_dim_and_basis_modp(blocks, len(monos), p, want_basis) for p in primes]
        dims = {r[0] for r in results}
        if len(dims) == 1:
            dim = dims.pop()
            if not want_basis:
                return dim, [], primes
            if dim == 0:
                return 0, [], primes
            rec = reconstruct_vector([np.concatenate(list(res[1])) for res in results], primes)
            if rec is not None:
                polys = []
                ok = True
                for i in range(dim):
                    coeffs = rec[i * len(monos):(i + 1) * len(monos)]
                    poly = SparsePoly.from_coeff_vector(coeffs, monos, rank, QQ).primitive_part()
                    if not is_weyl_invariant(poly, datum):
                        ok = False
                        break
                    polys.append(poly)
                if ok:
                    return dim, polys, primes
        avoid.update(primes)
        n_primes += 1
    raise NoConsensus("weyl invariant space: no stable result")


def _monomial_substitution(matrix_rows, mono, nvars) -> Dict[Tuple[int, ...], int]:
    """Image of a monomial under an integer substitution matrix."""
    partial: Dict[Tuple[int, ...], int] = {(0,) * nvars: 1}
    for pos, k in enumerate(mono):
        if k == 0:
            continue
        form = [(j, matrix_rows[pos][j]) for j in range(nvars) if matrix_rows[pos][j]]
        for _ in range(k):
            nxt: Dict[Tuple[int, ...], int] = {}
            for acc, coeff in partial.items():
                for j, ci in form:
                    newacc = list(acc)
                    newacc[j] += 1
                    key = tuple(newacc)
                    v = nxt.get(key, 0) + coeff * ci
                    if v:
                        nxt[key] = v
                    elif key in nxt:
                        del nxt[key]
            partial = nxt
    return partial


def weyl_invariant_dimension(datum, d: int, fld=QQ, seed: int = 0) -> int:
    dim, _, _ = weyl_invariant_space(datum, d, fld, want_basis=False, seed=seed)
    return dim


def degree_sequence_by_scan(datum, fld=QQ, seed: int = 0) -> Tuple[int, ...]:
    """Generator degrees recovered from per-degree invariant dimensions.

    Independent of the exponent computation in the root module: scans degrees
    up to the Coxeter number and records where the invariant dimension first
    exceeds the count generated by products of lower-degree generators.
    """
    found: List[int] = []
    coxeter = datum.coxeter_number
    for d in range(2, coxeter + 1):
        dim = weyl_invariant_dimension(datum, d, fld, seed=seed)
        from .roots import degrees_series_counts

        predicted = degrees_series_counts(found, d)[d]
        for _ in range(dim - predicted):
            found.append(d)
        if len(found) == datum.rank:
            break
    return tuple(found)

"""Sparse exact linear algebra over the rationals and finite fields.

Kernels and ranks here are exact: over a finite field by direct elimination
(numpy-backed for prime fields, generic elimination otherwise), over the
rationals either by exact fraction arithmetic or by reduction modulo several
independent primes with a consensus check.  Rational kernel bases can be
recovered from modular ones by rational reconstruction and are then verified
exactly, so reconstruction failures cannot produce wrong answers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from . import modp
from .fields import ExtensionField, PrimeField, QQ, Rationals, is_prime

DENSE_COLUMN_CUTOFF = 200  # below this, skip Markowitz and eliminate densely


class NoConsensus(Exception):
    """Modular ranks disagreed; the caller should retry with fresh primes."""


@dataclass
class SparseMatrix:
    """Immutable-by-convention sparse matrix over a declared scalar field."""

    nrows: int
    ncols: int
    field: object
    entries: Dict[Tuple[int, int], object] = field(default_factory=dict)

    @classmethod
    def from_triples(cls, nrows, ncols, fld, triples):
        entries = {}
        for r, c, v in triples:
            v = fld.coerce(v)
            if v != fld.zero:
                if (r, c) in entries:
                    raise ValueError(f"duplicate coordinate {(r, c)}")
                entries[(r, c)] = v
        return cls(nrows, ncols, fld, entries)

    @classmethod
    def from_dense(cls, rows, fld):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = fld.coerce(v)
                if v != fld.zero:
                    entries[(i, j)] = v
        return cls(nrows, ncols, fld, entries)

    @classmethod
    def identity(cls, n, fld):
        return cls(n, n, fld, {(i, i): fld.one for i in range(n)})

    def to_dense(self):
        z = self.field.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def matvec(self, vec):
        fld = self.field
        out = [fld.zero] * self.nrows
        for (r, c), v in self.entries.items():
            out[r] = fld.add(out[r], fld.mul(v, vec[c]))
        return out

    def transpose(self):
        return SparseMatrix(
            self.ncols, self.nrows, self.field, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def validate(self):
        fld = self.field
        for (r, c), v in self.entries.items():
            assert 0 <= r < self.nrows and 0 <= c < self.ncols
            assert v != fld.zero, "stored zero scalar"
            assert fld.coerce(v) == v


def _eliminate_generic(rows: List[Dict[int, object]], ncols: int, fld, markowitz: bool = True):
    """Sparse elimination over any field; rows are {col: value} dicts, destroyed.

    Pivot choice is Markowitz-style (minimize fill estimate) above the dense
    cutoff and plain first-column order below it; either way the result is a
    deterministic echelon list of (pivot_col, row) pairs.
    """
    col_count: Dict[int, int] = {}
    for row in rows:
        for c in row:
            col_count[c] = col_count.get(c, 0) + 1
    active = [r for r in rows if r]
    done: List[Tuple[int, Dict[int, object]]] = []
    while active:
        if markowitz:
            # cheapest pivot: minimize (row fill) * (column fill)
            best = None
            for ri, row in enumerate(active):
                rl = len(row)
                for c in row:
                    score = (rl - 1) * (col_count[c] - 1)
                    if best is None or score < best[0] or (score == best[0] and (ri, c) < best[1:]):
                        best = (score, ri, c)
                if best is not None and best[0] == 0:
                    break
        else:
            pc = min(c for row in active for c in row)
            ri = next(i for i, row in enumerate(active) if pc in row)
            best = (0, ri, pc)
        _, ri, pc = best
        prow = active.pop(ri)
        inv = fld.inv(prow[pc])
        prow = {c: fld.mul(inv, v) for c, v in prow.items()}
        for c in prow:
            col_count[c] -= 1
        nxt = []
        for row in active:
            if pc in row:
                f = row.pop(pc)
                col_count[pc] -= 1
                for c, v in prow.items():
                    if c == pc:
                        continue
                    w = fld.sub(row.get(c, fld.zero), fld.mul(f, v))
                    if c in row:
                        if w == fld.zero:
                            del row[c]
                            col_count[c] -= 1
                        else:
                            row[c] = w
                    elif w != fld.zero:
                        row[c] = w
                        col_count[c] = col_count.get(c, 0) + 1
            if row:
                nxt.append(row)
        active = nxt
        done.append((pc, prow))
    return done


def _kernel_from_echelon(done, ncols, fld):
    piv_cols = [pc for pc, _ in done]
    piv_set = set(piv_cols)
    free = [c for c in range(ncols) if c not in piv_set]
    # back-substitute in reverse pivot order
    basis = []
    for f in free:
        vec = [fld.zero] * ncols
        vec[f] = fld.one
        for pc, prow in reversed(done):
            acc = fld.zero
            for c, v in prow.items():
                if c != pc and vec[c] != fld.zero:
                    acc = fld.add(acc, fld.mul(v, vec[c]))
            vec[pc] = fld.neg(acc)
        basis.append(tuple(vec))
    return basis


def kernel_basis(m: SparseMatrix) -> List[tuple]:
    """Basis of the right null space of m; exact over m's field.

    The basis is the echelon-form one (unit vector in each free column),
    deterministic for a given matrix.
    """
    fld = m.field
    if isinstance(fld, PrimeField) and fld.p < 2**31:
        rows = np.zeros((max(m.nrows, 1), m.ncols), dtype=np.int64)
        for (r, c), v in m.entries.items():
            rows[r, c] = v
        basis = modp.kernel_any(rows, fld.p)
        return [tuple(int(x) for x in basis[:, j]) for j in range(basis.shape[1])]
    row_dicts: List[Dict[int, object]] = [dict() for _ in range(m.nrows)]
    for (r, c), v in m.entries.items():
        row_dicts[r][c] = v
    done = _eliminate_generic(row_dicts, m.ncols, fld, markowitz=m.ncols >= DENSE_COLUMN_CUTOFF)
    return _kernel_from_echelon(done, m.ncols, fld)


def rank(m: SparseMatrix) -> int:
    fld = m.field
    if isinstance(fld, PrimeField) and fld.p < 2**31:
        rows = np.zeros((max(m.nrows, 1), m.ncols), dtype=np.int64)
        for (r, c), v in m.entries.items():
            rows[r, c] = v
        return modp.rank_any(rows, fld.p)
    if isinstance(fld, ExtensionField) and fld.p < 2**22:
        return _extension_rank(m)
    row_dicts: List[Dict[int, object]] = [dict() for _ in range(m.nrows)]
    for (r, c), v in m.entries.items():
        row_dicts[r][c] = v
    return len(_eliminate_generic(row_dicts, m.ncols, fld))


def _extension_rank(m: SparseMatrix) -> int:
    """Rank over GF(p^e) via the companion-matrix expansion over GF(p).

    Each scalar becomes the e x e matrix of multiplication by it, so the
    expanded GF(p) rank is exactly e times the GF(p^e) rank.
    """
    fld = m.field
    e, p = fld.e, fld.p
    # powers x^j reduced: multiplication table columns
    basis_pows = []
    cur = fld.one
    x = fld.from_int(p) if e > 1 else fld.one
    for _ in range(e):
        basis_pows.append(cur)
        cur = fld.mul(cur, x)
    big = np.zeros((max(m.nrows, 1) * e, m.ncols * e), dtype=np.int64)
    for (r, c), v in m.entries.items():
        for j in range(e):
            col_val = fld.mul(v, basis_pows[j])
            for i in range(e):
                big[r * e + i, c * e + j] = col_val[i]
    rk = modp.rank_any(big, p)
    assert rk % e == 0
    return rk // e


def gaussian_kernel_dense(rows: Sequence[Sequence], fld) -> List[tuple]:
    """Plain dense Gaussian elimination kernel; the independent oracle."""
    work = [[fld.coerce(v) for v in row] for row in rows]
    ncols = len(work[0]) if work else 0
    piv = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(work)):
            if work[i][c] != fld.zero:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        inv = fld.inv(work[r][c])
        work[r] = [fld.mul(inv, v) for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != fld.zero:
                f = work[i][c]
                work[i] = [fld.sub(a, fld.mul(f, b)) for a, b in zip(work[i], work[r])]
        piv.append(c)
        r += 1
    piv_set = set(piv)
    free = [c for c in range(ncols) if c not in piv_set]
    basis = []
    for f in free:
        vec = [fld.zero] * ncols
        vec[f] = fld.one
        for i, pc in enumerate(piv):
            vec[pc] = fld.neg(work[i][f])
        basis.append(tuple(vec))
    return basis


# --- rationals via primes ---------------------------------------------------


def random_primes(count: int, seed: int, lo: int = 2**30, hi: int = 2**31, avoid=()) -> List[int]:
    """Deterministic sample of distinct primes in [lo, hi)."""
    rng = random.Random(seed)
    found: List[int] = []
    avoid = set(avoid)
    while len(found) < count:
        cand = rng.randrange(lo | 1, hi, 2)
        if cand not in avoid and cand not in found and is_prime(cand):
            found.append(cand)
    return found


def kernel_primes(count: int, seed: int, avoid=()) -> List[int]:
    # moduli small enough for the BLAS-exact elimination regime
    return random_primes(count, seed, lo=2**21, hi=2**22 - 1, avoid=avoid)


def _reduce_mod(m: SparseMatrix, p: int) -> np.ndarray:
    """Integer rows of m reduced mod p; raises ZeroDivisionError on bad denominators."""
    rows = np.zeros((max(m.nrows, 1), m.ncols), dtype=np.int64)
    for (r, c), v in m.entries.items():
        v = Fraction(v)
        den = v.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator hits prime {p}")
        rows[r, c] = v.numerator % p * pow(den, -1, p) % p
    return rows


def rank_multi_prime(m: SparseMatrix, primes: Sequence[int]) -> int:
    """Consensus rank of a rational matrix across reductions mod each prime.

    The rational rank dominates every modular rank, with equality away from
    finitely many primes, so agreement across the given list is reported as
    the rank.  Disagreement raises NoConsensus.  A prime dividing some entry's
    denominator is replaced deterministically.
    """
    if len(primes) < 2:
        raise ValueError("need at least 2 primes")
    ranks = []
    used = []
    for p in primes:
        q = p
        while True:
            try:
                rows = _reduce_mod(m, q)
                break
            except ZeroDivisionError:
                q = random_primes(1, seed=q, avoid=set(used) | set(primes))[0]
        used.append(q)
        ranks.append(modp.rank_any(rows, q))
    if len(set(ranks)) != 1:
        raise NoConsensus(f"modular ranks disagree: {dict(zip(used, ranks))}")
    return ranks[0]


def rational_rank(m: SparseMatrix, seed: int = 0, tries: int = 3) -> Tuple[int, List[int]]:
    """Rank over the rationals by two-prime consensus, retrying unlucky primes."""
    avoid: set = set()
    for t in range(tries):
        primes = random_primes(2, seed + 7 * t, avoid=avoid)
        try:
            return rank_multi_prime(m, primes), primes
        except NoConsensus:
            avoid.update(primes)
    raise NoConsensus("no agreement after retries")


# --- rational reconstruction -------------------------------------------------


def rational_reconstruction(residue: int, modulus: int) -> Fraction | None:
    """Recover a/b from a*b^-1 mod modulus with |a|, b <= sqrt(modulus/2)."""
    bound = int((modulus // 2) ** 0.5)
    r0, r1 = modulus, residue % modulus
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Tuple[int, int]:
    """Combine residues modulo coprime moduli."""
    m = m1 * m2
    x = (r1 * m2 * pow(m2, -1, m1) + r2 * m1 * pow(m1, -1, m2)) % m
    return x, m


def reconstruct_vector(residue_vectors: Sequence[Sequence[int]], primes: Sequence[int]):
    """Componentwise CRT + rational reconstruction; None if any entry fails."""
    out = []
    n = len(residue_vectors[0])
    for i in range(n):
        r, m = int(residue_vectors[0][i]), primes[0]
        for vec, p in zip(residue_vectors[1:], primes[1:]):
            r, m = crt_pair(r, m, int(vec[i]), p)
        f = rational_reconstruction(r, m)
        if f is None:
            return None
        out.append(f)
    return out


# --- integer lattice tools ---------------------------------------------------


def hermite_normal_form(rows: Iterable[Sequence[int]]) -> List[List[int]]:
    """Row HNF of an integer matrix: nonzero rows, positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    result: List[List[int]] = []
    for col in range(ncols):
        # gcd-reduce all rows sharing this column until one survives
        while True:
            nz = sorted((i for i, r in enumerate(work) if r[col] != 0), key=lambda i: abs(work[i][col]))
            if len(nz) <= 1:
                break
            i0 = nz[0]
            base = work[i0]
            for i in nz[1:]:
                q = work[i][col] // base[col]
                work[i] = [a - q * b for a, b in zip(work[i], base)]
            work = [r for r in work if any(r)]
        nz = [i for i, r in enumerate(work) if r[col] != 0]
        if not nz:
            continue
        pivot = work.pop(nz[0])
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        for done in result:
            q = done[col] // pivot[col]
            if q:
                done[:] = [a - q * b for a, b in zip(done, pivot)]
        result.append(pivot)
        if not work:
            break
    return result


def lattice_discriminant(hnf_rows: List[List[int]]) -> int:
    """Product of pivot entries of an HNF basis; index data for closure checks."""
    d = 1
    for row in hnf_rows:
        lead = next(x for x in row if x)
        d *= abs(lead)
    return d

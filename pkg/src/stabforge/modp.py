"""Vectorized exact linear algebra modulo a prime.

Two regimes:

* ``p < 2**22``: matrices live in float64 arrays with integer values in
  [0, p).  Block updates go through BLAS dgemm; products are accumulated over
  inner-dimension chunks short enough that every intermediate stays below
  2**53, so all arithmetic is exact.  np.mod on integer-valued float64 is
  exact (fmod).
* larger p (up to 2**31): int64 arrays with one rank-one update per pivot;
  each product stays below 2**62.

Row-echelon form uses lazily flushed panels: pending eliminations accumulate
in a rank-k buffer and are applied with one dgemm per panel.
"""

from __future__ import annotations

import numpy as np

FAST_PRIME_BOUND = 1 << 22  # exclusive upper bound for the float64/BLAS regime
_PANEL = 64


def _chunk_len(p: int) -> int:
    # max inner length of a float64 dot product that cannot reach 2**53
    return max(1, (1 << 53) // ((p - 1) * (p - 1)))


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) % p for float64 integer-valued arrays, p < 2**22."""
    k = a.shape[1]
    step = _chunk_len(p)
    out = np.zeros((a.shape[0], b.shape[1]))
    for s in range(0, k, step):
        out += a[:, s : s + step] @ b[s : s + step]
        np.mod(out, p, out=out)
    return out


def ref_mod(a: np.ndarray, p: int):
    """In-place row echelon form of a mod p (float64 regime).

    Returns (rank, pivot_cols).  Rows 0..rank-1 end up with unit pivots in
    strictly increasing columns; entries below pivots are zero, entries above
    are untouched.
    """
    m, n = a.shape
    if m == 0 or n == 0:
        return 0, []
    np.mod(a, p, out=a)
    pend_l: list[np.ndarray] = []  # m-vectors, multiplier columns
    pend_u: list[np.ndarray] = []  # n-vectors, pivot rows
    piv_cols: list[int] = []
    r = 0

    def flush():
        nonlocal pend_l, pend_u
        if not pend_l:
            return
        pl = np.stack(pend_l, axis=1)
        pu = np.stack(pend_u, axis=0)
        delta = matmul_mod(pl, pu, p)
        a[...] = np.mod(a - delta, p)
        pend_l, pend_u = [], []

    for c in range(n):
        if r == m:
            break
        col = a[:, c].copy()
        if pend_l:
            pl = np.stack(pend_l, axis=1)
            pu_c = np.array([u[c] for u in pend_u])
            col = np.mod(col - matmul_mod(pl, pu_c[:, None], p)[:, 0], p)
        nz = np.nonzero(col[r:])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
            for l in pend_l:
                l[r], l[pr] = l[pr], l[r]
            col[r], col[pr] = col[pr], col[r]
        # materialize and normalize the pivot row
        row = a[r].copy()
        if pend_l:
            pl_r = np.array([l[r] for l in pend_l])
            pu = np.stack(pend_u, axis=0)
            row = np.mod(row - matmul_mod(pl_r[None, :], pu, p)[0], p)
        inv = pow(int(col[r]), -1, p)
        row = np.mod(row * inv, p)
        row[c] = 1.0
        a[r] = row
        for l in pend_l:  # row r is now fully corrected; stop pending updates to it
            l[r] = 0.0
        mult = col.copy()
        mult[: r + 1] = 0.0
        pend_l.append(mult)
        pend_u.append(row)
        piv_cols.append(c)
        r += 1
        if len(pend_l) >= _PANEL:
            flush()
    flush()
    if r < m:
        a[r:] = 0.0
    return r, piv_cols


def kernel_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis of a mod p as an (ncols x k) float64 matrix, unit free part.

    Basis vectors are the standard echelon-form generators: one per free
    column, with a 1 in that column; deterministic given a.
    """
    m, n = a.shape
    work = np.array(a, dtype=np.float64, copy=True)
    rank, piv = ref_mod(work, p)
    piv_set = set(piv)
    free = [j for j in range(n) if j not in piv_set]
    k = len(free)
    basis = np.zeros((n, k))
    if k == 0:
        return basis
    for idx, f in enumerate(free):
        basis[f, idx] = 1.0
    if rank == 0:
        return basis
    rmat = work[:rank][:, piv]  # unit upper triangular
    cmat = work[:rank][:, free]  # rank x k
    sol = np.zeros((rank, k))
    blk = _PANEL
    start = ((rank - 1) // blk) * blk
    for b0 in range(start, -1, -blk):
        b1 = min(b0 + blk, rank)
        rhs = cmat[b0:b1].copy()
        if b1 < rank:
            rhs = np.mod(rhs + matmul_mod(rmat[b0:b1, b1:], sol[b1:], p), p)
        for i in range(b1 - 1 - b0, -1, -1):
            acc = rhs[i]
            if i + 1 < b1 - b0:
                acc = np.mod(acc + matmul_mod(rmat[b0 + i, b0 + i + 1 : b1][None, :], sol[b0 + i + 1 : b1], p)[0], p)
            sol[b0 + i] = np.mod(-acc, p)
    for i, pc in enumerate(piv):
        basis[pc] = sol[i]
    return basis


def rank_mod(a: np.ndarray, p: int) -> int:
    work = np.array(a, dtype=np.float64, copy=True)
    rank, _ = ref_mod(work, p)
    return rank


def rank_mod_big(a: np.ndarray, p: int) -> int:
    """Rank mod p for p up to 2**31; int64 arithmetic, rank-one updates."""
    work = np.array(a, dtype=np.int64, copy=True) % p
    m, n = work.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(work[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        inv = pow(int(work[r, c]), -1, p)
        work[r] = work[r] * inv % p
        rows = np.nonzero(work[r + 1 :, c])[0] + r + 1
        if rows.size:
            work[rows] = (work[rows] - np.outer(work[rows, c], work[r])) % p
        r += 1
    return r


def kernel_mod_big(a: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis mod p for p up to 2**31 (int64 regime, RREF)."""
    work = np.array(a, dtype=np.int64, copy=True) % p
    m, n = work.shape
    r = 0
    piv = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(work[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        inv = pow(int(work[r, c]), -1, p)
        work[r] = work[r] * inv % p
        rows = np.nonzero(work[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            work[rows] = (work[rows] - np.outer(work[rows, c], work[r])) % p
        piv.append(c)
        r += 1
    piv_set = set(piv)
    free = [j for j in range(n) if j not in piv_set]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        basis[f, idx] = 1
        for i, pc in enumerate(piv):
            basis[pc, idx] = -work[i, f] % p
    return basis


def kernel_any(a: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis mod any prime p < 2**31, as int64 in [0, p)."""
    if p < FAST_PRIME_BOUND:
        return kernel_mod(np.asarray(a, dtype=np.float64), p).astype(np.int64)
    return kernel_mod_big(np.asarray(a, dtype=np.int64), p)


def rank_any(a: np.ndarray, p: int) -> int:
    if p < FAST_PRIME_BOUND:
        return rank_mod(np.asarray(a, dtype=np.float64), p)
    return rank_mod_big(np.asarray(a, dtype=np.int64), p)


class SparseRows:
    """COO rows of a condition block; multiplies against a dense basis mod p."""

    def __init__(self, nrows: int, ncols: int, rows, cols, vals):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.vals = np.asarray(vals, dtype=np.int64)

    def apply_mod(self, k: np.ndarray, p: int) -> np.ndarray:
        """(self @ k) % p with k an (ncols x d) float64 basis, exact."""
        d = k.shape[1]
        out = np.zeros((self.nrows, d))
        if self.vals.size == 0:
            return out
        vals = self.vals % p
        step = max(1, (1 << 53) // ((p - 1) * (p - 1)) // 2)
        order = np.argsort(self.cols, kind="stable")
        rows, cols, vals = self.rows[order], self.cols[order], vals[order]
        # process column-chunks so each row accumulates few enough terms
        col_edges = np.searchsorted(cols, np.arange(0, self.ncols + step, step))
        piece = max(1, (1 << 24) // max(1, d))  # keep temporaries ~128 MB max
        for i in range(len(col_edges) - 1):
            lo, hi = int(col_edges[i]), int(col_edges[i + 1])
            if lo == hi:
                continue
            for s in range(lo, hi, piece):
                e = min(s + piece, hi)
                contrib = vals[s:e, None] * k[cols[s:e]]
                np.add.at(out, rows[s:e], contrib)
            np.mod(out, p, out=out)
        return out

    def to_dense_mod(self, p: int) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols))
        np.add.at(out, (self.rows, self.cols), self.vals % p)
        return np.mod(out, p)


def kernel_of_blocks(blocks, ncols: int, p: int) -> np.ndarray:
    """Common kernel of a sequence of SparseRows condition blocks, mod p.

    Intersects iteratively: the running kernel basis K shrinks after each
    block, so later (often larger) blocks act on a much smaller space.
    Returns an (ncols x k) int64 basis.
    """
    k_basis = None
    for blk in blocks:
        if blk.nrows == 0:
            continue
        if k_basis is None:
            mat = blk.to_dense_mod(p)
            k_basis = kernel_mod(mat, p)
        else:
            if k_basis.shape[1] == 0:
                break
            mat = blk.apply_mod(k_basis, p)
            coeff = kernel_mod(mat, p)
            k_basis = matmul_mod(k_basis, coeff, p)
    if k_basis is None:
        k_basis = np.eye(ncols)
    return k_basis.astype(np.int64)

"""Sparse multivariate polynomials on a representation space.

Exponent vectors are tuples of length nvars; terms map exponent vectors to
nonzero scalars of a declared field.  Canonical listings use graded reverse
lexicographic order so kernels and emitted files are deterministic.

The directional derivative, the derivation action of a matrix, and linear
substitution are the only ring operations the rest of the package needs;
general products exist for building comparison polynomials in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class DimensionMismatch(ValueError):
    pass


def grevlex_key(exps: Sequence[int]):
    """Sort key: ascending order of this key lists monomials in descending grevlex."""
    return (-sum(exps), tuple(reversed(exps)))


@dataclass
class SparsePoly:
    nvars: int
    field: object
    terms: Dict[Tuple[int, ...], object] = field(default_factory=dict)

    @classmethod
    def zero(cls, nvars, fld):
        return cls(nvars, fld, {})

    @classmethod
    def monomial(cls, nvars, fld, exps, coeff=1):
        c = fld.coerce(coeff)
        if c == fld.zero:
            return cls.zero(nvars, fld)
        return cls(nvars, fld, {tuple(exps): c})

    @classmethod
    def variable(cls, nvars, fld, i):
        return cls.monomial(nvars, fld, tuple(1 if j == i else 0 for j in range(nvars)))

    @classmethod
    def from_coeff_vector(cls, vec, monomials, nvars, fld):
        terms = {}
        for c, m in zip(vec, monomials):
            c = fld.coerce(c)
            if c != fld.zero:
                terms[tuple(m)] = c
        return cls(nvars, fld, terms)

    def copy(self):
        return SparsePoly(self.nvars, self.field, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def _add_term(self, exps, coeff):
        fld = self.field
        cur = self.terms.get(exps)
        if cur is None:
            if coeff != fld.zero:
                self.terms[exps] = coeff
        else:
            s = fld.add(cur, coeff)
            if s == fld.zero:
                del self.terms[exps]
            else:
                self.terms[exps] = s

    def add(self, other: "SparsePoly") -> "SparsePoly":
        out = self.copy()
        for e, c in other.terms.items():
            out._add_term(e, c)
        return out

    def scale(self, c) -> "SparsePoly":
        fld = self.field
        c = fld.coerce(c)
        if c == fld.zero:
            return SparsePoly.zero(self.nvars, fld)
        return SparsePoly(self.nvars, fld, {e: fld.mul(c, v) for e, v in self.terms.items()})

    def sub(self, other: "SparsePoly") -> "SparsePoly":
        return self.add(other.scale(-1))

    def mul(self, other: "SparsePoly") -> "SparsePoly":
        fld = self.field
        out = SparsePoly.zero(self.nvars, fld)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out._add_term(tuple(a + b for a, b in zip(e1, e2)), fld.mul(c1, c2))
        return out

    def pow(self, n: int) -> "SparsePoly":
        out = SparsePoly.monomial(self.nvars, self.field, (0,) * self.nvars)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    def evaluate(self, point):
        fld = self.field
        total = fld.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                for _ in range(k):
                    v = fld.mul(v, x)
            total = fld.add(total, v)
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: grevlex_key(ec[0]))

    def content(self) -> Fraction:
        """gcd of coefficients over the rationals (positive; 0 for the zero poly)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            c = Fraction(c)
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_part(self) -> "SparsePoly":
        """Indivisible integral representative: divide by the content, fix sign."""
        c = self.content()
        if c == 0:
            return self.copy()
        out = self.scale(1 / c)
        lead = out.sorted_terms()[0][1]
        if lead < 0:
            out = out.scale(-1)
        return out

    def coeff_vector(self, monomials):
        z = self.field.zero
        return [self.terms.get(tuple(m), z) for m in monomials]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def directional_derivative(f: SparsePoly) -> SparsePoly:
    """Bilinear expansion f1(v, v') on doubled variables.

    Variables 0..n-1 are the v block, n..2n-1 the v' block; the result is the
    t-coefficient of f(v + t v') and is linear in the primed block.
    """
    n = f.nvars
    fld = f.field
    out = SparsePoly.zero(2 * n, fld)
    for e, c in f.terms.items():
        for m, k in enumerate(e):
            if k == 0:
                continue
            new = list(e) + [0] * n
            new[m] -= 1
            new[n + m] += 1
            out._add_term(tuple(new), fld.mul(c, fld.coerce(k)))
    return out


def derivation_action(x_rows, f: SparsePoly) -> SparsePoly:
    """f1(v, Xv): the derivation of f along the matrix X (rows over f's field)."""
    n = f.nvars
    if len(x_rows) != n or (n and len(x_rows[0]) != n):
        raise DimensionMismatch("matrix size does not match variable count")
    fld = f.field
    out = SparsePoly.zero(n, fld)
    for e, c in f.terms.items():
        for m, k in enumerate(e):
            if k == 0:
                continue
            base = fld.mul(c, fld.coerce(k))
            row = x_rows[m]
            for j in range(n):
                if row[j] == fld.zero:
                    continue
                new = list(e)
                new[m] -= 1
                new[j] += 1
                out._add_term(tuple(new), fld.mul(base, row[j]))
    return out


def substitute_linear(f: SparsePoly, g_rows) -> SparsePoly:
    """f(g v): substitute x_k -> sum_j g[k][j] x_j."""
    n = f.nvars
    if len(g_rows) != n or (n and len(g_rows[0]) != n):
        raise DimensionMismatch("matrix size does not match variable count")
    fld = f.field
    # linear forms as sparse dicts, skipping identity rows
    forms = []
    for k in range(n):
        form = {j: g_rows[k][j] for j in range(n) if g_rows[k][j] != fld.zero}
        forms.append(form)
    out = SparsePoly.zero(n, fld)
    cache: Dict[Tuple[int, int], Dict[Tuple[int, ...], object]] = {}

    def form_power(k, e):
        key = (k, e)
        if key in cache:
            return cache[key]
        if e == 0:
            res = {(0,) * n: fld.one}
        else:
            prev = form_power(k, e - 1)
            res: Dict[Tuple[int, ...], object] = {}
            for mono, c in prev.items():
                for j, gj in forms[k].items():
                    new = list(mono)
                    new[j] += 1
                    newt = tuple(new)
                    add = fld.mul(c, gj)
                    cur = res.get(newt)
                    if cur is None:
                        res[newt] = add
                    else:
                        s = fld.add(cur, add)
                        if s == fld.zero:
                            del res[newt]
                        else:
                            res[newt] = s
        cache[key] = res
        return res

    for e, c in f.terms.items():
        partial = {(0,) * n: c}
        for k, ek in enumerate(e):
            if ek == 0:
                continue
            fp = form_power(k, ek)
            nxt: Dict[Tuple[int, ...], object] = {}
            for m1, c1 in partial.items():
                for m2, c2 in fp.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    add = fld.mul(c1, c2)
                    cur = nxt.get(mono)
                    if cur is None:
                        nxt[mono] = add
                    else:
                        s = fld.add(cur, add)
                        if s == fld.zero:
                            del nxt[mono]
                        else:
                            nxt[mono] = s
            partial = nxt
        for mono, cc in partial.items():
            out._add_term(mono, cc)
    return out


def monomial_basis(nvars: int, d: int, weights: Optional[Sequence[Sequence[int]]] = None,
                   target: Optional[Sequence[int]] = None) -> List[Tuple[int, ...]]:
    """All exponent vectors of total degree d, in descending grevlex order.

    With weights given (one integer vector per variable), only monomials whose
    weight sum equals target are kept; the search prunes on componentwise
    reachable weight ranges, which is what makes weight-zero strata of large
    spaces enumerable.
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    out: List[Tuple[int, ...]] = []
    if weights is None:
        def rec_plain(i, remaining, prefix):
            if i == nvars - 1:
                out.append(tuple(prefix + [remaining]))
                return
            for k in range(remaining, -1, -1):
                rec_plain(i + 1, remaining - k, prefix + [k])
        if nvars == 0:
            return [()] if d == 0 else []
        rec_plain(0, d, [])
        out.sort(key=grevlex_key)
        return out
    wlen = len(weights[0]) if weights else 0
    tgt = tuple(target) if target is not None else (0,) * wlen
    # suffix componentwise min/max of weights
    suf_min = [[0] * wlen for _ in range(nvars + 1)]
    suf_max = [[0] * wlen for _ in range(nvars + 1)]
    for i in range(nvars - 1, -1, -1):
        for c in range(wlen):
            suf_min[i][c] = min(weights[i][c], suf_min[i + 1][c]) if i < nvars - 1 else weights[i][c]
            suf_max[i][c] = max(weights[i][c], suf_max[i + 1][c]) if i < nvars - 1 else weights[i][c]

    def rec(i, remaining, acc, prefix):
        if remaining == 0:
            if acc == list(tgt):
                out.append(tuple(prefix + [0] * (nvars - i)))
            return
        if i == nvars:
            return
        for c in range(wlen):
            need = tgt[c] - acc[c]
            if need < remaining * suf_min[i][c] or need > remaining * suf_max[i][c]:
                return
        w = weights[i]
        for k in range(remaining, -1, -1):
            rec(i + 1, remaining - k, [a + k * wc for a, wc in zip(acc, w)], prefix + [k])

    rec(0, d, [0] * wlen, [])
    out.sort(key=grevlex_key)
    return out


# --- text format --------------------------------------------------------------


def poly_to_text(f: SparsePoly) -> str:
    lines = []
    for e, c in f.sorted_terms():
        if isinstance(c, tuple):
            coeff = ",".join(str(x) for x in c)
        else:
            coeff = str(Fraction(c)) if not isinstance(c, int) else str(c)
        lines.append(f"{coeff} : " + " ".join(str(x) for x in e))
    return "\n".join(lines) + "\n"


def poly_from_text(text: str, nvars: int, fld) -> SparsePoly:
    """One term per line, ``coeff : e1 e2 ... en``; blanks and # comments skipped."""
    out = SparsePoly.zero(nvars, fld)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'coeff : exponents'")
        coeff_s, exps_s = line.split(":", 1)
        exps = tuple(int(x) for x in exps_s.split())
        if len(exps) != nvars:
            raise ValueError(f"line {lineno}: expected {nvars} exponents, got {len(exps)}")
        if any(x < 0 for x in exps):
            raise ValueError(f"line {lineno}: negative exponent")
        out._add_term(exps, fld.coerce(coeff_s.strip()))
    return out

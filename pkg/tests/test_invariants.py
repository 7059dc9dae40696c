import random
from fractions import Fraction

import pytest

from stabforge.chevalley import load_or_build
from stabforge.fields import PrimeField, QQ
from stabforge.invariants import (
    SubgroupAction,
    chevalley_restriction,
    compare_invariants,
    degree_sequence_by_scan,
    generic_invariant_dim,
    invariant_space,
    is_weyl_invariant,
    orbit_dim,
    stabilizer_algebra,
    weyl_invariant_dimension,
    weyl_invariant_space,
)
from stabforge.poly import SparsePoly, derivation_action, monomial_basis
from stabforge.reps import adjoint_rep, half_spin_rep, natural_rep
from stabforge.roots import build_root_system, degrees_series_counts, invariant_degree_sequence
from stabforge.weyl import irreducible_head, weyl_module

GF2, GF3 = PrimeField(2), PrimeField(3)


def test_sl3_adjoint_invariant_dims():
    rep = adjoint_rep(load_or_build("A", 2))
    dims = [invariant_space(rep, d)[0] for d in (2, 3, 4)]
    assert dims == [1, 1, 1]


def test_g2_seven_dim_quadric():
    rep = weyl_module(load_or_build("G", 2), (1, 0))
    dim, polys, _ = invariant_space(rep, 2, want_basis=True)
    assert dim == 1
    f = polys[0]
    for g in rep.e + rep.f:
        rows = [[QQ.coerce(x) for x in r] for r in g]
        assert derivation_action(rows, f).is_zero()


def test_g2_char2_head_has_no_group_invariant_quadric():
    rep = irreducible_head(weyl_module(load_or_build("G", 2), (1, 0), GF2))
    assert rep.dim == 6
    dim, _, _ = invariant_space(rep, 2, mode="group")
    assert dim == 0


def test_lie_vs_group_gap_sl2_char2():
    # degree-2: lie invariants are the squares (2-dim), group invariants vanish
    rep = natural_rep("A", 1, GF2)
    lie_dim, _, _ = invariant_space(rep, 2, mode="lie")
    grp_dim, _, _ = invariant_space(rep, 2, mode="group")
    assert lie_dim == 2
    assert grp_dim == 0
    assert lie_dim > grp_dim


def test_group_mode_char0_matches_lie():
    rep = adjoint_rep(load_or_build("A", 2))
    for d in (2, 3):
        assert invariant_space(rep, d, "lie")[0] == invariant_space(rep, d, "group")[0]


def test_stabilizer_sum_of_squares():
    n = 4
    f = SparsePoly.zero(n, QQ)
    for i in range(n):
        e = [0] * n
        e[i] = 2
        f = f.add(SparsePoly.monomial(n, QQ, e))
    rep = stabilizer_algebra(f)
    assert rep.stabilizer_dim == n * (n - 1) // 2
    assert not rep.contains_scalars


def test_stabilizer_det2():
    # det = x0 x3 - x1 x2 on 2x2 matrices
    f = SparsePoly(4, QQ, {(1, 0, 0, 1): Fraction(1), (0, 1, 1, 0): Fraction(-1)})
    rep = stabilizer_algebra(f)
    assert rep.stabilizer_dim == 6


def _char_poly_cubic_on_traceless_symmetric(r):
    """Degree-3 coefficient of char(S) on trace-zero symmetric r x r matrices.

    Coordinates: s_11..s_(r-1)(r-1) then s_ij (i<j), with s_rr = -sum of the
    others; the coefficient is the sum of principal 3x3 minors, an independent
    construction used as the stabilizer oracle input.
    """
    from itertools import combinations

    nvars = (r - 1) + r * (r - 1) // 2
    diag_idx = {i: i for i in range(r - 1)}
    off_idx = {}
    pos = r - 1
    for i in range(r):
        for j in range(i + 1, r):
            off_idx[(i, j)] = pos
            pos += 1

    def entry_vec(i, j):
        # entry (i, j) as a linear form: list of (var, coeff)
        if i == j:
            if i < r - 1:
                return [(diag_idx[i], 1)]
            return [(diag_idx[k], -1) for k in range(r - 1)]
        a, b = min(i, j), max(i, j)
        return [(off_idx[(a, b)], 1)]

    f = SparsePoly.zero(nvars, QQ)
    # explicit 3x3 principal-minor determinant expansion
    for rows in combinations(range(r), 3):
        i, j, k = rows
        terms = [
            ([(i, i), (j, j), (k, k)], 1), ([(i, j), (j, k), (k, i)], 1), ([(i, k), (j, i), (k, j)], 1),
            ([(i, k), (j, j), (k, i)], -1), ([(i, i), (j, k), (k, j)], -1), ([(i, j), (j, i), (k, k)], -1),
        ]
        for ent, sign in terms:
            prod = SparsePoly.monomial(nvars, QQ, (0,) * nvars, sign)
            for (a, b) in ent:
                lin = SparsePoly.zero(nvars, QQ)
                for var, c in entry_vec(a, b):
                    ev = [0] * nvars
                    ev[var] = 1
                    lin = lin.add(SparsePoly.monomial(nvars, QQ, ev, c))
                prod = prod.mul(lin)
            f = f.add(prod)
    return f


def test_stabilizer_so5_cubic_on_14_vars():
    f = _char_poly_cubic_on_traceless_symmetric(5)
    assert f.nvars == 14 and f.degree() == 3
    rep = stabilizer_algebra(f)
    assert rep.stabilizer_dim == 10


def test_orbit_dims_sl2():
    rep = natural_rep("A", 1)
    assert orbit_dim(rep, [1, 0]) == 2
    assert orbit_dim(rep, [0, 0]) == 0


def test_orbit_dim_sl3_regular():
    rep = adjoint_rep(load_or_build("A", 2))
    # h_1 = diag(1,-1,0): distinct eigenvalues, so the centralizer is the Cartan
    alg = rep.algebra
    v = [0] * rep.dim
    v[alg.cartan_index(0)] = 1
    assert orbit_dim(rep, v) == 6
    # a non-regular semisimple element has a bigger centralizer
    w = [0] * rep.dim
    w[alg.cartan_index(0)] = 1
    w[alg.cartan_index(1)] = 2  # diag(1,1,-2)
    assert orbit_dim(rep, w) == 4


def test_rank_nullity_orbit_identity():
    rng = random.Random(3)
    rep = adjoint_rep(load_or_build("A", 2))
    from stabforge.linalg import SparseMatrix, gaussian_kernel_dense
    from stabforge.reps import mat_vec

    for _ in range(5):
        v = [QQ.coerce(rng.randint(-5, 5)) for _ in range(rep.dim)]
        cols = [mat_vec(rep.basis_action(k), v, QQ) for k in range(rep.algebra.dim)]
        rows = [[cols[c][r] for c in range(len(cols))] for r in range(rep.dim)]
        nullity = len(gaussian_kernel_dense(rows, QQ))
        assert orbit_dim(rep, v) + nullity == rep.algebra.dim


@pytest.mark.parametrize("n,expect", [(2, 1), (3, 2)])
def test_generic_invariant_dim_sln(n, expect):
    rep = adjoint_rep(load_or_build("A", n - 1))
    val, hits, _ = generic_invariant_dim(rep, seed=1)
    assert val == expect
    assert hits >= 3


def test_generic_invariant_dim_half_spins():
    d5 = half_spin_rep("D", 5)
    assert generic_invariant_dim(d5, seed=2)[0] == 0
    d6 = half_spin_rep("D", 6)
    assert generic_invariant_dim(d6, seed=3)[0] == 1


def test_compare_invariants_cartan_has_more():
    rep = adjoint_rep(load_or_build("A", 2))
    sub = SubgroupAction(
        label="maximal torus",
        lie_matrices=rep.h_matrices(),
        weights=rep.weights,
    )
    out = compare_invariants(rep, sub, [2], mode="lie")
    assert out["ambient"] == [1]
    assert out["subgroup"][0] > 1
    assert out["equal"] == [False]


def test_chevalley_restriction_sl2_killing():
    rep = adjoint_rep(load_or_build("A", 1))
    _, polys, _ = invariant_space(rep, 2, want_basis=True)
    restricted = chevalley_restriction(polys[0], rep)
    assert restricted.nvars == 1
    assert set(restricted.terms) == {(2,)}


def test_chevalley_restriction_sl3_cubic():
    rep = adjoint_rep(load_or_build("A", 2))
    _, polys, _ = invariant_space(rep, 3, want_basis=True)
    restricted = chevalley_restriction(polys[0], rep)
    assert not restricted.is_zero()
    assert is_weyl_invariant(restricted, rep.algebra.datum)
    zero = chevalley_restriction(SparsePoly.zero(rep.algebra.dim, QQ), rep)
    assert zero.is_zero()


def test_weyl_invariant_space_a2():
    datum = build_root_system("A", 2)
    for d, expect in ((2, 1), (3, 1)):
        dim, polys, _ = weyl_invariant_space(datum, d, want_basis=True)
        assert dim == expect
        assert all(is_weyl_invariant(p, datum) for p in polys)
        # indivisible integral representatives
        for p in polys:
            assert p.content() == 1


@pytest.mark.parametrize("key", [("A", 1), ("A", 2), ("B", 2), ("G", 2), ("D", 4)])
def test_degree_scan_matches_exponent_route(key):
    datum = build_root_system(*key)
    assert degree_sequence_by_scan(datum) == invariant_degree_sequence(datum)


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("G", 2), ("D", 4), ("F", 4)])
def test_weyl_dims_match_series_through_degree_8(key):
    datum = build_root_system(*key)
    degrees = invariant_degree_sequence(datum)
    series = degrees_series_counts(degrees, 8)
    for d in range(1, 9):
        assert weyl_invariant_dimension(datum, d) == series[d], (key, d)


def test_weyl_invariants_small_prime_fields():
    datum = build_root_system("A", 2)
    for p in (2, 3, 5):
        dim, _, _ = weyl_invariant_space(datum, 2, PrimeField(p))
        assert dim >= 1

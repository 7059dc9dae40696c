import random
from fractions import Fraction

import pytest

from stabforge.chevalley import load_or_build
from stabforge.fields import PrimeField, QQ
from stabforge.reps import (
    ClosureFailure,
    FieldMismatch,
    InvalidType,
    Representation,
    SubalgebraSpec,
    TwistInCharZero,
    adjoint_rep,
    dual_rep,
    exp_nilpotent,
    frobenius_twist,
    half_spin_rep,
    invariant_bilinear_gram,
    load_rep,
    mat_add,
    mat_commutator,
    mat_eq,
    mat_identity,
    mat_is_zero,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_transpose,
    mat_zero,
    mod_scalars_rep,
    natural_rep,
    reduce_rep,
    restrict_rep,
    save_rep,
    sym_rep,
    tensor_rep,
    trace_zero_rep,
    wedge_rep,
)

GF2, GF3 = PrimeField(2), PrimeField(3)


def test_natural_a1():
    rep = natural_rep("A", 1)
    rep.validate()
    assert rep.dim == 2
    assert rep.e[0][0][1] == 1 and rep.e[0][1][0] == 0


@pytest.mark.parametrize("key", [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)])
def test_natural_validates(key):
    rep = natural_rep(*key)
    rep.validate()
    label, rank = key
    expect = {"A": rank + 1, "B": 2 * rank + 1, "C": 2 * rank, "D": 2 * rank}[label]
    assert rep.dim == expect


def test_natural_rejects_exceptional():
    with pytest.raises(InvalidType):
        natural_rep("G", 2)


@pytest.mark.parametrize("label,rank", [("B", 2), ("B", 3), ("C", 3), ("D", 4)])
def test_natural_preserves_form(label, rank):
    rep = natural_rep(label, rank)
    g = invariant_bilinear_gram(label, rank)
    for m in rep.e + rep.f + rep.h_matrices():
        lhs = mat_add(mat_mul(mat_transpose(m), g, QQ), mat_mul(g, m, QQ), QQ)
        assert mat_is_zero(lhs, QQ), (label, rank)


def test_adjoint_a1_eigenvalues():
    alg = load_or_build("A", 1)
    rep = adjoint_rep(alg)
    rep.validate()
    assert rep.dim == 3
    h = rep.h(0)
    diag = sorted(h[i][i] for i in range(3))
    assert diag == [-2, 0, 2]


def test_adjoint_bracket_compatibility():
    # ad([x, y]) = [ad x, ad y] on all basis pairs, rank <= 2 exhaustively
    for key in (("A", 2), ("B", 2)):
        alg = load_or_build(*key)
        rep = adjoint_rep(alg)
        n = alg.dim
        for i in range(n):
            mi = rep.basis_action(i)
            for j in range(i + 1, n):
                mj = rep.basis_action(j)
                lhs = mat_commutator(mi, mj, QQ)
                rhs = mat_zero(n, n, QQ)
                for k, c in alg.bracket_basis(i, j):
                    rhs = mat_add(rhs, mat_scale(rep.basis_action(k), QQ.coerce(c), QQ), QQ)
                assert mat_eq(lhs, rhs, QQ), (key, i, j)


def test_adjoint_e8_zero_weight_space():
    alg = load_or_build("E", 8)
    rep = adjoint_rep(alg)
    assert rep.dim == 248
    zero = sum(1 for w in rep.weights if all(x == 0 for x in w))
    assert zero == 8


def test_adjoint_a3_mod2_radical():
    alg = load_or_build("A", 3)
    rep = adjoint_rep(alg, GF2)
    from stabforge.reps import center_rows

    rows = center_rows(rep)
    assert len(rows) == 1  # scalars survive inside sl_4 at characteristic 2


@pytest.mark.parametrize("key,dim", [(("B", 3), 8), (("B", 4), 16), (("D", 5), 16), (("D", 6), 32)])
def test_spin_dims_and_serre(key, dim):
    label, rank = key
    rep = half_spin_rep(label, rank)
    rep.validate()
    assert rep.dim == dim


def test_half_spin_chiralities_differ():
    plus = half_spin_rep("D", 4, chirality="+")
    minus = half_spin_rep("D", 4, chirality="-")
    assert plus.dim == minus.dim == 8
    assert sorted(plus.weights) != sorted(minus.weights)


def test_unipotent_additivity():
    # x(s) x(t) = x(s+t) as polynomial identity, on three sampled reps
    reps = [natural_rep("C", 3), half_spin_rep("B", 3), adjoint_rep(load_or_build("A", 2))]
    for rep in reps:
        for (i, s), uni in rep.unipotents.items():
            deg = max(uni)
            # evaluate at symbolic split: coefficient of s^a t^b in x(s)x(t) equals
            # binomial convolution of x(s+t)
            for a in range(deg + 1):
                for b in range(deg + 1):
                    if a + b > deg:
                        ma = uni.get(a)
                        mb = uni.get(b)
                        if ma is not None and mb is not None:
                            assert mat_is_zero(mat_mul(ma, mb, rep.field), rep.field)
                        continue
                    lhs = mat_mul(uni.get(a, mat_zero(rep.dim, rep.dim, rep.field)),
                                  uni.get(b, mat_zero(rep.dim, rep.dim, rep.field)), rep.field)
                    from math import comb

                    target = uni.get(a + b, mat_zero(rep.dim, rep.dim, rep.field))
                    rhs = mat_scale(target, rep.field.coerce(comb(a + b, a)), rep.field)
                    assert mat_eq(lhs, rhs, rep.field), (rep.label, i, s, a, b)


def test_functor_dimension_laws():
    from math import comb

    rep = natural_rep("A", 3)  # dim 4
    for d in (2, 3):
        assert sym_rep(rep, d).dim == comb(4 + d - 1, d)
        assert wedge_rep(rep, d).dim == comb(4, d)


def test_wedge2_a3_is_6dim_and_valid():
    rep = wedge_rep(natural_rep("A", 3), 2)
    rep.validate()
    assert rep.dim == 6


def test_sym2_b2_trace_zero():
    rep = sym_rep(natural_rep("B", 2), 2)
    rep.validate()
    assert rep.dim == 15
    cut = trace_zero_rep(rep)
    cut.validate()
    assert cut.dim == 14


def test_tensor_and_dual():
    r1 = natural_rep("A", 1)
    t = tensor_rep(r1, dual_rep(r1))
    t.validate()
    assert t.dim == 4
    with pytest.raises(FieldMismatch):
        tensor_rep(r1, natural_rep("A", 1, GF2))


def test_twist_requires_char_p():
    with pytest.raises(TwistInCharZero):
        frobenius_twist(natural_rep("A", 1))


def test_twist_tensor_4dim():
    base = natural_rep("A", 1, GF2)
    tw = frobenius_twist(base, 1)
    tw.validate()
    prod = tensor_rep(base, tw)
    prod.validate()
    assert prod.dim == 4
    assert all(mat_is_zero(m, GF2) for m in tw.e + tw.f)
    # group generator of the twist has only t^2 powers
    assert set(tw.unipotents[(0, 1)]) == {0, 2}
    # weights scale by p
    assert sorted(tw.weights) == [(-2,), (2,)]


def test_mod_scalars_sl4_char2():
    rep = adjoint_rep(load_or_build("A", 3), GF2)
    bar = mod_scalars_rep(rep)
    bar.validate()
    assert bar.dim == 14


def test_restrict_rep_short_roots_g2():
    # short roots of G2 close up only in characteristic 3 (their sum constants
    # carry a factor 3); over GF(3) they restrict to an sl_3 copy
    alg = load_or_build("G", 2)
    datum = alg.datum
    short = [r for r in datum.all_roots if datum.root_norm(r) == 1]
    elements = [{alg.index_of_root(r): Fraction(1)} for r in short]
    b1 = datum.simple_roots[0]
    b2 = tuple(a + b for a, b in zip(datum.simple_roots[0], datum.simple_roots[1]))
    for beta in (b1, b2):
        cor = datum.coroot(beta)
        elements.append({alg.cartan_index(i): Fraction(c) for i, c in enumerate(cor) if c})
    spec = SubalgebraSpec(alg, elements, "short-root subalgebra")
    rep3 = adjoint_rep(alg, GF3)
    mats = restrict_rep(rep3, spec)
    assert len(mats) == 8
    with pytest.raises(ClosureFailure):
        restrict_rep(adjoint_rep(alg), spec)  # over the rationals it is not closed


def test_closure_failure():
    alg = load_or_build("A", 2)
    rep = adjoint_rep(alg)
    bad = SubalgebraSpec(alg, [{0: Fraction(1)}, {1: Fraction(1)}], "not closed")
    with pytest.raises(ClosureFailure):
        restrict_rep(rep, bad)


def test_rep_save_load_round_trip(tmp_path):
    rep = natural_rep("C", 3)
    path = str(tmp_path / "c3.rep.json")
    save_rep(rep, path)
    back = load_rep(path)
    assert back.dim == rep.dim
    assert back.weights == rep.weights
    for m1, m2 in zip(rep.e + rep.f, back.e + back.f):
        assert mat_eq(m1, m2, QQ)


def test_exp_nilpotent_rejects_nonintegral():
    bad = [[QQ.zero, QQ.one, QQ.zero], [QQ.zero, QQ.zero, QQ.one], [QQ.zero, QQ.zero, QQ.zero]]
    # n^2/2 has a 1/2 entry
    with pytest.raises(AssertionError):
        exp_nilpotent(bad, QQ, require_integral=True)
    ok = exp_nilpotent(bad, QQ, require_integral=False)
    assert set(ok) == {0, 1, 2}

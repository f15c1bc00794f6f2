import json
import random
from collections import Counter
from fractions import Fraction
from math import lcm

import pytest

from slicetorsion.cyclotomic import Cyclotomic, RootOfUnity
from slicetorsion.errors import ClosureBudgetExceeded, SizeMismatch
from slicetorsion.laurent import LaurentMatrix, LaurentPoly, laurent_det
from slicetorsion.monomial_rep import (FreeWord, MonomialMatrix, MonomialRep, bing_fig8_rep, det_group,
                                       eigenvalues, evaluate_word, load_rep, mono_inv, mono_mul,
                                       permutation_closure, verify_p_group)

from conftest import random_monomial

SIXTEENTHS = [Fraction(j, 16) for j in (0, 1, 3, 4, 8, 9, 11, 12)]


def dense_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Cyclotomic.zero(a[0][0].conductor))
             for j in range(n)] for i in range(n)]


def as_cyc(c, n):
    if isinstance(c, Cyclotomic):
        return c.promote(n)
    return Cyclotomic.from_rational(c, n)


def charpoly_coeffs(M, n):
    """Coefficients of det(x I - M) via laurent_det on the dense matrix."""
    k = M.size
    dense = M.dense(n)
    x = LaurentPoly.var(1, 1)
    rows = [[(x if i == j else LaurentPoly.zero(1)) - LaurentPoly.constant(dense[i][j], 1)
             for j in range(k)] for i in range(k)]
    lo, coeffs = laurent_det(LaurentMatrix(rows, 1)).univariate_coefficients()
    assert lo == 0
    return coeffs


def test_fixture_matches_builtin(fixture_path):
    assert load_rep(fixture_path).generators == bing_fig8_rep().generators
    data = json.loads(fixture_path.read_text())
    assert data["conductor"] == 8 and data["size"] == 8
    assert data["generators"][0]["perm"] == [2, 3, 4, 1, 6, 7, 8, 5]


def test_json_round_trip():
    rep = bing_fig8_rep()
    again = MonomialRep.from_json(json.loads(json.dumps(rep.to_json())))
    assert again.generators == rep.generators and again.conductor == rep.conductor


def test_mono_mul_examples(rng):
    m = random_monomial(rng, 5, 8)
    assert mono_mul(MonomialMatrix.identity(5), m) == m
    a = MonomialMatrix.diagonal([RootOfUnity(1, 8), RootOfUnity(3, 4)])
    b = MonomialMatrix.diagonal([RootOfUnity(1, 4), RootOfUnity(1, 2)])
    assert mono_mul(a, b) == MonomialMatrix.diagonal([RootOfUnity(3, 8), RootOfUnity(1, 4)])
    with pytest.raises(SizeMismatch):
        mono_mul(a, MonomialMatrix.identity(3))


def test_mono_mul_matches_dense_on_fixture():
    x, y = bing_fig8_rep().generators
    for a, b in [(x, y), (y, x), (x, x), (mono_inv(x), y)]:
        assert mono_mul(a, b).dense(8) == dense_mul(a.dense(8), b.dense(8))
    ident = MonomialMatrix.identity(8).dense(8)
    assert dense_mul(x.dense(8), mono_inv(x).dense(8)) == ident


def test_mono_mul_matches_dense_random(rng):
    for _ in range(20):
        k, n = rng.randint(1, 5), rng.choice([1, 2, 4, 8, 16])
        a, b = random_monomial(rng, k, n), random_monomial(rng, k, n)
        assert mono_mul(a, b).dense(n) == dense_mul(a.dense(n), b.dense(n))


def test_associativity_and_inverse(rng):
    for _ in range(100):
        k, n = rng.randint(1, 8), rng.choice([1, 2, 3, 4, 8, 16])
        a, b, c = (random_monomial(rng, k, n) for _ in range(3))
        assert mono_mul(mono_mul(a, b), c) == mono_mul(a, mono_mul(b, c))
        ident = MonomialMatrix.identity(k)
        assert mono_mul(a, mono_inv(a)) == ident
        assert mono_mul(mono_inv(a), a) == ident


def test_word_evaluation_examples():
    rep = bing_fig8_rep()
    assert evaluate_word(rep, FreeWord()) == MonomialMatrix.identity(8)
    assert evaluate_word(rep, "x1X1") == MonomialMatrix.identity(8)
    comm = evaluate_word(rep, "[x,y]")
    assert [z.turn for z in eigenvalues(comm)] == SIXTEENTHS
    with pytest.raises(SizeMismatch):
        evaluate_word(rep, "x3")


def test_word_parser():
    w = FreeWord.parse("[x1,x2]")
    assert w == FreeWord.parse("x y X Y") == FreeWord.from_signed([1, 2, -1, -2])
    assert str(w) == "x1x2X1X2"
    assert FreeWord.parse("[[x,y],x3]") == FreeWord.commutator(w, FreeWord.from_signed([3]))
    assert w.exponent_sums(2) == [0, 0]
    assert FreeWord.parse("x1x1X2").exponent_sums(3) == [2, -1, 0]
    with pytest.raises(ValueError):
        FreeWord.parse("[x1,x2")


def test_eigenvalue_examples():
    assert eigenvalues(MonomialMatrix.identity(4)) == [RootOfUnity(0, 1)] * 4
    # 3-cycle with product zeta_8: cube roots of zeta_8
    m = MonomialMatrix([1, 2, 0], [RootOfUnity(1, 8), RootOfUnity(0, 1), RootOfUnity(0, 1)])
    assert [z.turn for z in eigenvalues(m)] == [Fraction(1, 24), Fraction(9, 24), Fraction(17, 24)]


def test_eigenvalues_against_charpoly(rng):
    for _ in range(30):
        k, n = rng.randint(1, 5), rng.choice([1, 2, 4, 8])
        M = random_monomial(rng, k, n)
        zs = eigenvalues(M)
        N = lcm(n, *(z.denominator for z in zs))
        expected = LaurentPoly.one(1)
        x = LaurentPoly.var(1, 1)
        for z in zs:
            expected = expected * (x - LaurentPoly.constant(z.to_cyclotomic(N), 1))
        lo, want = expected.univariate_coefficients()
        got = charpoly_coeffs(M, n)
        assert [as_cyc(c, N) for c in got] == [as_cyc(c, N) for c in want]


def test_eigenvalue_product_is_det(rng):
    for _ in range(100):
        k, n = rng.randint(1, 8), rng.choice([1, 2, 3, 4, 8, 16])
        M = random_monomial(rng, k, n)
        prod = RootOfUnity(0, 1)
        for z in eigenvalues(M):
            prod = prod * z
        assert prod == M.det()


def test_eigenvalues_conjugation_invariant(rng):
    for _ in range(50):
        k, n = rng.randint(1, 8), rng.choice([2, 4, 8, 16])
        M = random_monomial(rng, k, n)
        perm = list(range(k))
        rng.shuffle(perm)
        P = MonomialMatrix.permutation(perm)
        conj = mono_mul(mono_mul(P, M), mono_inv(P))
        assert Counter(eigenvalues(conj)) == Counter(eigenvalues(M))


def test_p_group_examples():
    cert = verify_p_group(bing_fig8_rep(), 2)
    assert cert.is_p_group
    assert cert.perm_group_order <= 128 and cert.perm_group_order & (cert.perm_group_order - 1) == 0
    assert verify_p_group(MonomialRep.trivial(2), 3).is_p_group
    bad = MonomialRep([MonomialMatrix.diagonal([RootOfUnity(1, 3), RootOfUnity(0, 1)])])
    cert = verify_p_group(bad, 2)
    assert not cert.is_p_group and "3" in cert.reason
    swap3 = MonomialRep([MonomialMatrix.permutation([1, 2, 0])])
    assert not verify_p_group(swap3, 2).is_p_group
    assert verify_p_group(swap3, 3).is_p_group


def test_closure_budget():
    with pytest.raises(ClosureBudgetExceeded):
        permutation_closure([(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)], budget=100)


def test_p_group_orders_of_words():
    rep = bing_fig8_rep()
    cert = verify_p_group(rep, 2)
    bound = cert.order_bound
    rng = random.Random(7)
    for _ in range(200):
        word = FreeWord.from_signed([rng.choice([1, 2, -1, -2]) for _ in range(rng.randint(0, 12))])
        g = evaluate_word(rep, word)
        order = g.order()
        assert order & (order - 1) == 0
        assert bound % order == 0
        # repeated squaring up to the certificate bound reaches the identity
        h = g
        e = 1
        while e < bound:
            h = mono_mul(h, h)
            e *= 2
        assert h.is_identity()


def test_det_group_examples():
    triv = det_group(MonomialRep.trivial(2))
    assert triv.order == 1 and triv.real_units == (1,)
    assert det_group(bing_fig8_rep()).real_units == (1, -1)
    single = MonomialRep([MonomialMatrix.diagonal([RootOfUnity(1, 8)])])
    d = det_group(single)
    assert d.order == 8
    assert RootOfUnity(3, 8) in d and RootOfUnity(1, 16) not in d


def test_det_matches_dense(rng):
    for _ in range(20):
        k, n = rng.randint(1, 5), rng.choice([2, 4, 8])
        M = random_monomial(rng, k, n)
        lead = charpoly_coeffs(M, n)[0]  # (-1)^k det
        want = M.det().to_cyclotomic(n) * (-1) ** k
        assert as_cyc(lead, n) == want

import json
import random

import pytest

from slicetorsion.cyclotomic import RootOfUnity
from slicetorsion.errors import DimensionMismatch, InadmissiblePsi, InvalidSeifert
from slicetorsion.laurent import LaurentMatrix, LaurentPoly, RationalFunction, laurent_det
from slicetorsion.monomial_rep import MonomialMatrix, MonomialRep, bing_fig8_rep, det_group
from slicetorsion.normtest import MEMBER, NOT_MEMBER, UNDECIDED
from slicetorsion.satellite import alexander_from_seifert
from slicetorsion.torsion import (BoundarySeifertMatrix, PsiMap, boundary_torsion, build_twisted_matrix,
                                  constant_norm_class, dense_one_minus, fox_milnor_search, one_minus_det,
                                  random_block_unimodular, random_boundary_seifert, random_metabolic_seifert,
                                  random_psi, rank_of_link, ratio_norm_class, slice_consequence_check,
                                  unlink_torsion, validate_seifert)

from conftest import random_monomial

TREFOIL = [[-1, 1], [0, -1]]
FIG8 = [[1, 1], [0, -1]]
t = LaurentPoly.var(1, 1)
t1, t2 = LaurentPoly.var(1, 2), LaurentPoly.var(2, 2)
ONE1 = LaurentPoly.one(1)


def small_two_group_rep():
    """A 2-dimensional rep over Z[i] through a 2-group."""
    x = MonomialMatrix([1, 0], [RootOfUnity(1, 4), RootOfUnity(0, 1)])
    y = MonomialMatrix.diagonal([RootOfUnity(1, 2), RootOfUnity(1, 4)])
    return MonomialRep([x, y], conductor=4)


def test_validate_examples():
    assert validate_seifert(BoundarySeifertMatrix.empty(2)) == []
    assert validate_seifert(BoundarySeifertMatrix.knot(TREFOIL)) == []
    A = random_boundary_seifert(2, [2, 2], random.Random(1))
    blocks = [[[list(r) for r in b] for b in row] for row in A.blocks]
    blocks[0][1][0][0] += 1
    problems = validate_seifert(BoundarySeifertMatrix(blocks, [2, 2]))
    assert any("A_12" in p for p in problems)
    odd = BoundarySeifertMatrix.knot([[1]])
    assert any("odd" in p for p in validate_seifert(odd))


def test_random_seifert_is_valid():
    rng = random.Random(2)
    for _ in range(30):
        A = random_boundary_seifert(rng.randint(1, 3), [2 * rng.randint(0, 2) for _ in range(3)], rng)
        assert validate_seifert(A) == []
        M = random_metabolic_seifert(2, [rng.randint(1, 2), rng.randint(0, 2)], rng)
        assert validate_seifert(M) == []


def test_build_examples():
    triv = MonomialRep.trivial(1)
    M = build_twisted_matrix(BoundarySeifertMatrix.knot(TREFOIL), triv, PsiMap.identity(1))
    assert M == LaurentMatrix([[t - 1, -t], [ONE1, t - 1]], 1)
    M = build_twisted_matrix(BoundarySeifertMatrix.knot(FIG8), triv, PsiMap.identity(1))
    assert M == LaurentMatrix([[1 - t, -t], [ONE1, t - 1]], 1)
    M = build_twisted_matrix(BoundarySeifertMatrix.empty(2), MonomialRep.trivial(2), PsiMap.identity(2))
    assert M.shape == (0, 0)


def test_build_rejects_bad_input():
    with pytest.raises(InvalidSeifert):
        build_twisted_matrix(BoundarySeifertMatrix.knot([[1, 0], [0, 1]]), MonomialRep.trivial(1),
                             PsiMap.identity(1))
    with pytest.raises(DimensionMismatch):
        build_twisted_matrix(BoundarySeifertMatrix.empty(2), MonomialRep.trivial(1), PsiMap.identity(2))
    with pytest.raises(InadmissiblePsi):
        build_twisted_matrix(BoundarySeifertMatrix.empty(2), MonomialRep.trivial(2), PsiMap([[1, 0]]))


def test_psi_admissibility():
    assert PsiMap.identity(3).violations() == []
    assert PsiMap.total(3).violations() == []
    assert PsiMap([[2, 0], [0, 1]]).violations()
    assert PsiMap([[1, 0], [0, 0]]).violations()
    assert PsiMap([[2, 3]]).violations() == []
    rng = random.Random(3)
    for _ in range(20):
        m = rng.randint(1, 4)
        psi = random_psi(m, rng.randint(1, m), rng)
        assert not psi.violations()
        assert PsiMap.from_json(json.loads(json.dumps(psi.to_json()))).matrix == psi.matrix


def test_seifert_json_round_trip():
    A = random_boundary_seifert(3, [2, 0, 4], random.Random(4))
    B = BoundarySeifertMatrix.from_json(json.loads(json.dumps(A.to_json())))
    assert B.full() == A.full() and B.sizes == A.sizes


def test_rank_examples():
    assert rank_of_link(BoundarySeifertMatrix.empty(2), MonomialRep.trivial(2), PsiMap.identity(2)) == 1
    assert rank_of_link(BoundarySeifertMatrix.knot(TREFOIL), MonomialRep.trivial(1), PsiMap.identity(1)) == 0
    rep = bing_fig8_rep()
    rng = random.Random(5)
    for _ in range(5):
        A = random_boundary_seifert(2, [2, 2], rng)
        assert rank_of_link(A, rep, PsiMap.identity(2)) == rep.k * (2 - 1)


def test_boundary_torsion_knots():
    triv, psi = MonomialRep.trivial(1), PsiMap.identity(1)
    tre = boundary_torsion(BoundarySeifertMatrix.knot(TREFOIL), triv, psi)
    assert tre.value.same_representative(RationalFunction(t * t - t + 1, 1 - t))
    fig = boundary_torsion(BoundarySeifertMatrix.knot(FIG8), triv, psi)
    assert fig.value.same_representative(RationalFunction(-(t * t - 3 * t + 1), 1 - t))
    for B in (TREFOIL, FIG8):
        delta = alexander_from_seifert(B).as_laurent()
        value = boundary_torsion(BoundarySeifertMatrix.knot(B), triv, psi).value
        assert value == RationalFunction(delta, 1 - t) or value == RationalFunction(-delta, 1 - t)


def test_unlink_examples():
    triv2 = MonomialRep.trivial(2)
    u = unlink_torsion(2, triv2, PsiMap.identity(2))
    assert u.value.same_representative(RationalFunction(LaurentPoly.one(2), (1 - t1) * (1 - t2)))
    u1 = unlink_torsion(1, MonomialRep.trivial(1), PsiMap.identity(1))
    assert u1.value.same_representative(RationalFunction(ONE1, 1 - t))
    b = boundary_torsion(BoundarySeifertMatrix.empty(2), triv2, PsiMap.identity(2))
    assert b.value.same_representative(u.value)


def test_unlink_fixture_denominator():
    rep = bing_fig8_rep()
    u = unlink_torsion(2, rep, PsiMap.identity(2))
    dx = laurent_det(dense_one_minus(rep.generators[0], (1, 0), 8, 2))
    dy = laurent_det(dense_one_minus(rep.generators[1], (0, 1), 8, 2))
    assert u.value.same_representative(RationalFunction(LaurentPoly.one(2), dx * dy))
    b = boundary_torsion(BoundarySeifertMatrix.empty(2), rep, PsiMap.identity(2))
    assert b.value.same_representative(u.value)


def test_one_minus_det_closed_form():
    rng = random.Random(6)
    for _ in range(30):
        k, n = rng.randint(1, 6), rng.choice([1, 2, 4, 8])
        g = random_monomial(rng, k, n)
        h = (rng.randint(-2, 2), rng.randint(1, 2))
        assert one_minus_det(g, h, n, 2) == laurent_det(dense_one_minus(g, h, n, 2))


@pytest.mark.parametrize("rep_name", ["trivial", "small"])
def test_basis_change_invariance(rep_name):
    rng = random.Random(7)
    rep = MonomialRep.trivial(2) if rep_name == "trivial" else small_two_group_rep()
    for _ in range(15):
        sizes = [2 * rng.randint(0, 2), 2 * rng.randint(1, 2)]
        A = random_boundary_seifert(2, sizes, rng)
        psi = random_psi(2, rng.randint(1, 2), rng)
        before = boundary_torsion(A, rep, psi).value
        P = random_block_unimodular(sizes, rng)
        after = boundary_torsion(A.congruence(P), rep, psi).value
        assert after.num == before.num and after.den == before.den


def test_basis_change_invariance_fixture():
    rng = random.Random(8)
    rep = bing_fig8_rep()
    A = random_boundary_seifert(2, [2, 2], rng)
    psi = PsiMap.total(2)
    before = boundary_torsion(A, rep, psi).value
    after = boundary_torsion(A.congruence(random_block_unimodular([2, 2], rng)), rep, psi).value
    assert after.num == before.num and after.den == before.den


def test_nonvanishing_for_p_group_reps():
    from slicetorsion.laurent import det_is_nonzero
    rng = random.Random(9)
    rep = bing_fig8_rep()
    for _ in range(10):
        A = random_boundary_seifert(2, [2, 2], rng)
        assert det_is_nonzero(build_twisted_matrix(A, rep, PsiMap.identity(2)))


def test_slice_check_examples():
    triv, psi = MonomialRep.trivial(1), PsiMap.identity(1)
    u = unlink_torsion(1, triv, psi)
    assert slice_consequence_check(u, triv, psi, 1).status == MEMBER
    fig = boundary_torsion(BoundarySeifertMatrix.knot(FIG8), triv, psi)
    check = slice_consequence_check(fig, triv, psi, 1)
    assert check.status == NOT_MEMBER
    rep = bing_fig8_rep()
    check = ratio_norm_class(LaurentPoly.constant(2115, 2), rep, det_group(rep))
    assert check.status == NOT_MEMBER
    assert check.certificate["norm_test"]["obstruction"] == {"prime": 47, "multiplicity": 1}
    assert ratio_norm_class(LaurentPoly.monomial((3, -1), -45), rep).status == MEMBER


def test_fox_milnor_search():
    assert fox_milnor_search(t * t - 3 * t + 1) is None
    assert fox_milnor_search(t * t - t + 1) is None
    # 6_1 has Delta = (2t - 1)(2 - t) up to units
    sign, shift, f = fox_milnor_search(-2 * t * t + 5 * t - 2)
    g = LaurentPoly.from_univariate(f)
    assert g * g.bar() * sign == (-2 * t * t + 5 * t - 2) * LaurentPoly.monomial((-shift,))
    assert fox_milnor_search(LaurentPoly.constant(9, 1))[2] in ([3], [-3])


def test_constant_norm_class_by_conductor():
    assert constant_norm_class(9, 1).status == MEMBER
    assert constant_norm_class(-4, 1).status == MEMBER
    assert constant_norm_class(2, 1).status == NOT_MEMBER
    assert constant_norm_class(2115, 8).status == NOT_MEMBER
    assert constant_norm_class(5, 4).status == MEMBER
    assert constant_norm_class(2, 3).status == UNDECIDED


def test_metabolic_never_not_member():
    rng = random.Random(10)
    triv1 = MonomialRep.trivial(1)
    for _ in range(15):
        A = random_metabolic_seifert(1, [rng.randint(1, 2)], rng)
        psi = PsiMap.identity(1)
        check = slice_consequence_check(boundary_torsion(A, triv1, psi), triv1, psi, 1)
        assert check.status == MEMBER
    for _ in range(10):
        A = random_metabolic_seifert(2, [1, rng.randint(0, 1)], rng)
        rep = small_two_group_rep() if rng.random() < 0.5 else MonomialRep.trivial(2)
        psi = PsiMap.total(2)
        check = slice_consequence_check(boundary_torsion(A, rep, psi), rep, psi, 2)
        assert check.status != NOT_MEMBER

"""
Twisted torsion of boundary links from a boundary link Seifert matrix.

Given blocks A_ij (size r_i x r_j), a monomial representation alpha of the free
group on x_1..x_m and an admissible psi: Z^m -> H, the matrix
(alpha (x) psi)(A^t - A T) is obtained by replacing each scalar entry c of A^t
with c * I_k and each entry -c t_i of -A T with -c * alpha(x_i) * psi(t_i).
Its determinant divided by prod_i det(I - alpha(x_i) psi(t_i)) is the torsion,
defined up to +-d h times norms.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .cyclotomic import Cyclotomic, RootOfUnity
from .errors import DimensionMismatch, InadmissiblePsi, InputError, InvalidSeifert, RankTooLarge
from .laurent import LaurentMatrix, LaurentPoly, RationalFunction, laurent_det, laurent_rank
from .monomial_rep import det_group
from .normtest import (MEMBER, NOT_MEMBER, UNDECIDED, NormVerdict, two_squares, factorize, quadruple,
                       rational_norm_class)


def int_det(rows):
    """Exact integer determinant (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class BoundarySeifertMatrix:
    """An m x m array of integer blocks A_ij of size r_i x r_j."""

    def __init__(self, blocks, sizes=None):
        m = len(blocks)
        if any(len(row) != m for row in blocks):
            raise InputError("blocks must form an m x m array")
        if sizes is None:
            sizes = [len(blocks[i][i]) for i in range(m)]
        self.m = m
        self.sizes = [int(s) for s in sizes]
        self.blocks = [[[[int(v) for v in r] for r in blocks[i][j]] for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(m):
                b = self.blocks[i][j]
                if len(b) != self.sizes[i] or any(len(r) != self.sizes[j] for r in b):
                    if self.sizes[i] == 0 or self.sizes[j] == 0:
                        self.blocks[i][j] = [[] for _ in range(self.sizes[i])]
                        continue
                    raise DimensionMismatch(f"block ({i + 1},{j + 1}) is not {self.sizes[i]}x{self.sizes[j]}")

    @classmethod
    def from_full(cls, full, sizes):
        offs = list(itertools.accumulate([0] + list(sizes)))
        blocks = [[[row[offs[j]:offs[j + 1]] for row in full[offs[i]:offs[i + 1]]]
                   for j in range(len(sizes))] for i in range(len(sizes))]
        return cls(blocks, sizes)

    @classmethod
    def empty(cls, m):
        return cls([[[] for _ in range(m)] for _ in range(m)], [0] * m)

    @classmethod
    def knot(cls, B):
        return cls([[B]], [len(B)])

    @property
    def size(self):
        return sum(self.sizes)

    def component_of(self):
        """Component index (0-based) of every row of the assembled matrix."""
        return [i for i, r in enumerate(self.sizes) for _ in range(r)]

    def full(self):
        rows = []
        for i in range(self.m):
            for a in range(self.sizes[i]):
                row = []
                for j in range(self.m):
                    row.extend(self.blocks[i][j][a])
                rows.append(row)
        return rows

    def congruence(self, P):
        """P A P^t for an integer matrix P of the assembled size."""
        A = self.full()
        n = len(A)
        PA = [[sum(P[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        out = [[sum(PA[i][k] * P[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        return BoundarySeifertMatrix.from_full(out, self.sizes)

    def to_json(self):
        return {"m": self.m, "sizes": self.sizes, "blocks": self.blocks}

    @classmethod
    def from_json(cls, data):
        try:
            blocks = data["blocks"]
            m = int(data.get("m", len(blocks)))
            if len(blocks) != m:
                raise InputError(f"declared m={m} but {len(blocks)} block rows")
            return cls(blocks, data.get("sizes"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad Seifert data: {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def validate_seifert(A):
    """Violations of the boundary Seifert matrix conventions (empty when valid)."""
    problems = []
    for i, r in enumerate(A.sizes):
        if r % 2:
            problems.append(f"block size r_{i + 1} = {r} is odd")
    for i in range(A.m):
        for j in range(i + 1, A.m):
            bij, bji = A.blocks[i][j], A.blocks[j][i]
            if [list(c) for c in zip(*bji)] != [list(r) for r in bij] and A.sizes[i] and A.sizes[j]:
                problems.append(f"A_{i + 1}{j + 1} != A_{j + 1}{i + 1}^t")
    full = A.full()
    skew = [[full[a][b] - full[b][a] for b in range(len(full))] for a in range(len(full))]
    d = int_det(skew)
    if d not in (1, -1):
        problems.append(f"det(A - A^t) = {d}, expected +-1")
    return problems


class PsiMap:
    """psi: Z^m -> H = Z^r as an r x m integer matrix; column i is psi(t_i)."""

    def __init__(self, matrix):
        self.matrix = [[int(v) for v in row] for row in matrix]
        if not self.matrix or not self.matrix[0]:
            raise InadmissiblePsi("H must be a nontrivial free abelian group")
        if any(len(r) != len(self.matrix[0]) for r in self.matrix):
            raise InputError("ragged psi matrix")

    @classmethod
    def identity(cls, m):
        return cls([[int(i == j) for j in range(m)] for i in range(m)])

    @classmethod
    def total(cls, m):
        """All meridians to the single generator t."""
        return cls([[1] * m])

    @property
    def rank(self):
        return len(self.matrix)

    @property
    def m(self):
        return len(self.matrix[0])

    def column(self, i):
        """Exponent vector of psi(t_i), i counted from 0."""
        return tuple(row[i] for row in self.matrix)

    def monomial(self, i):
        return LaurentPoly.monomial(self.column(i))

    def apply(self, vector):
        return [sum(a * b for a, b in zip(row, vector)) for row in self.matrix]

    def elementary_divisors(self):
        snf = smith_normal_form(Matrix(self.matrix), domain=ZZ)
        return [abs(int(snf[i, i])) for i in range(min(snf.shape))]

    def violations(self):
        out = []
        for i in range(self.m):
            if not any(self.column(i)):
                out.append(f"psi(t_{i + 1}) is trivial")
        if self.rank > self.m or any(d != 1 for d in self.elementary_divisors()):
            out.append("psi is not onto H")
        return out

    def check(self):
        problems = self.violations()
        if problems:
            raise InadmissiblePsi("; ".join(problems))

    def to_json(self):
        return {"rank": self.rank, "matrix": self.matrix}

    @classmethod
    def from_json(cls, data):
        try:
            psi = cls(data["matrix"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad psi data: {exc}") from exc
        if "rank" in data and int(data["rank"]) != psi.rank:
            raise InputError(f"declared rank {data['rank']} but matrix has {psi.rank} rows")
        return psi

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def random_psi(m, rank, rng, bound=2):
    """Random admissible epimorphism Z^m -> Z^rank (rank <= m)."""
    while True:
        psi = PsiMap([[rng.randint(-bound, bound) for _ in range(m)] for _ in range(rank)])
        if not psi.violations():
            return psi


def root_coefficient(z, conductor):
    """Coefficient for a root of unity: a plain int when real, else Cyclotomic."""
    if z.denominator == 1:
        return 1
    if z.denominator == 2:
        return -1
    return z.to_cyclotomic(conductor)


def _check_inputs(A, rep, psi):
    if rep.m != A.m:
        raise DimensionMismatch(f"rep has {rep.m} generators but the link has {A.m} components")
    if psi.m != A.m:
        raise DimensionMismatch(f"psi has {psi.m} columns but the link has {A.m} components")
    problems = validate_seifert(A)
    if problems:
        raise InvalidSeifert("; ".join(problems))
    psi.check()


def build_twisted_matrix(A, rep, psi):
    _check_inputs(A, rep, psi)
    k, r = rep.k, psi.rank
    full = A.full()
    comp = A.component_of()
    n = len(full)
    zero = LaurentPoly(r)
    rows = [[zero] * (n * k) for _ in range(n * k)]
    for a in range(n):
        for b in range(n):
            # scalar part from A^t
            c = full[b][a]
            if c:
                for p in range(k):
                    rows[a * k + p][b * k + p] = rows[a * k + p][b * k + p] + c
            # -A[a][b] * alpha(x_i) * psi(t_i) with i the component of column b
            c = full[a][b]
            if c:
                i = comp[b]
                g = rep.generators[i]
                h = psi.column(i)
                for col, (row, z) in enumerate(zip(g.perm, g.diag)):
                    term = LaurentPoly.monomial(h, root_coefficient(z, rep.conductor) * (-c))
                    rows[a * k + row][b * k + col] = rows[a * k + row][b * k + col] + term
    return LaurentMatrix(rows, r)


def one_minus_det(g, h, conductor, nvars):
    """det(I - g * t^h) for a monomial matrix g: prod over cycles of (1 - lam t^(l h))."""
    result = LaurentPoly.one(nvars)
    for cols, lam in g.cycles():
        ell = len(cols)
        e = tuple(ell * x for x in h)
        result = result * (LaurentPoly.one(nvars) - LaurentPoly.monomial(e, root_coefficient(lam, conductor)))
    return result


def dense_one_minus(g, h, conductor, nvars):
    """The matrix I - g * t^h itself (used to cross-check ``one_minus_det``)."""
    k = g.size
    rows = [[LaurentPoly(nvars) for _ in range(k)] for _ in range(k)]
    for i in range(k):
        rows[i][i] = LaurentPoly.one(nvars)
    for col, (row, z) in enumerate(zip(g.perm, g.diag)):
        rows[row][col] = rows[row][col] - LaurentPoly.monomial(h, root_coefficient(z, conductor))
    return LaurentMatrix(rows, nvars)


def rank_of_link(A, rep, psi):
    M = build_twisted_matrix(A, rep, psi)
    k, m = rep.k, A.m
    n = k * A.size
    return k * m - k + n - laurent_rank(M)


@dataclass
class TorsionClass:
    """A torsion value with its indeterminacy +- d h N(Q(H))."""
    value: RationalFunction
    det_group: object
    rank_h: int
    conductor: int = 1
    determinant: LaurentPoly | None = None

    def ambiguity(self):
        return {"sign": True, "monomials": self.rank_h, "det_group": self.det_group.to_json(), "norms": True}

    def to_json(self):
        return {"value": self.value.to_json(), "display": str(self.value), "ambiguity": self.ambiguity()}


def _unlink_denominator(rep, psi):
    den = LaurentPoly.one(psi.rank)
    for i, g in enumerate(rep.generators):
        den = den * one_minus_det(g, psi.column(i), rep.conductor, psi.rank)
    return den


def boundary_torsion(A, rep, psi):
    M = build_twisted_matrix(A, rep, psi)
    num = laurent_det(M)
    if not num:
        raise RankTooLarge("det((alpha x psi)(A^t - AT)) = 0, so rank exceeds k(m-1)")
    value = RationalFunction(num, _unlink_denominator(rep, psi)).canonical()
    return TorsionClass(value, det_group(rep), psi.rank, rep.conductor, num)


def unlink_torsion(m, rep, psi):
    if rep.m != m or psi.m != m:
        raise DimensionMismatch("rep, psi and m disagree")
    psi.check()
    value = RationalFunction(LaurentPoly.one(psi.rank), _unlink_denominator(rep, psi)).canonical()
    return TorsionClass(value, det_group(rep), psi.rank, rep.conductor)


# norm-class verdicts

@dataclass
class SliceCheck:
    status: str
    ratio: object
    certificate: dict

    def to_json(self):
        ratio = self.ratio.to_json() if hasattr(self.ratio, "to_json") else self.ratio
        return {"status": self.status, "ratio": ratio, "ratio_display": str(self.ratio),
                "certificate": self.certificate}


def _split_root_times_rational(c, order):
    """Write c = u * r with u a root of unity in mu_order and r rational, if possible."""
    if not isinstance(c, Cyclotomic):
        return RootOfUnity(0), Fraction(c)
    for j in range(order):
        u = RootOfUnity(j, order)
        r = (c / u.to_cyclotomic(order) if c.conductor % order == 0
             else c.promote(lcm(c.conductor, order)) / u.to_cyclotomic(lcm(c.conductor, order)))
        q = r.as_rational()
        if q is not None:
            return u, q
    return None


def constant_norm_class(value, conductor, real_units=(1, -1)):
    """Norm-class verdict for a rational constant over the coefficient field Q(zeta_conductor).

    Q(zeta_8) is decided by the hermitian-square test, Q(i) by sums of two
    squares, and over Q itself the norms are the +-squares.
    """
    value = Fraction(value)
    if conductor <= 2:
        ok = (value > 0 or -1 in real_units) and _is_square(abs(value))
        return NormVerdict(MEMBER if ok else NOT_MEMBER, value,
                           reason="over Q the hermitian squares are the rational squares")
    if 8 % conductor:
        return NormVerdict(UNDECIDED, value, reason=f"no norm test for conductor {conductor}")
    if conductor == 4:
        return _gaussian_norm_class(value, real_units)
    return rational_norm_class(value, real_units)


def _gaussian_norm_class(value, real_units):
    """Over Q(i) the hermitian squares are sums of two squares."""
    if value < 0 and -1 not in real_units:
        return NormVerdict(NOT_MEMBER, value, reason="negative target but hermitian squares are positive")
    den = value.denominator
    factors = factorize(abs(value.numerator) * den)
    q = Cyclotomic.one(4)
    for p in sorted(factors):
        mult = factors[p]
        if mult % 2:
            if p % 4 == 3:
                return NormVerdict(NOT_MEMBER, value, obstruction=(p, mult), factorization=factors,
                                   reason=f"{p} = 3 mod 4 divides to odd multiplicity {mult}")
            a, b = two_squares(p)
            q = q * Cyclotomic(4, [a, b])
        q = q * p ** (mult // 2)
    quad = quadruple(q.promote(8))
    verdict = NormVerdict(MEMBER, value, witness=quad, scale=den, factorization=factors,
                          reason="sum of two squares")
    verdict.verify()
    return verdict


def _is_square(q):
    return isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def fox_milnor_search(p, budget=10**6):
    """Search f in Z[t] with p = +-t^l f(t) f(1/t).

    The central coefficient of f(t)f(1/t) is the sum of squares of the
    coefficients of f, which bounds the search.  Returns (sign, shift, f) or None.
    """
    lo, coeffs = p.univariate_coefficients()
    if any(Fraction(c).denominator != 1 for c in coeffs):
        raise ValueError("integer coefficients expected")
    coeffs = [int(c) for c in coeffs]
    span = len(coeffs) - 1
    if span % 2:
        return None
    deg = span // 2
    mid = coeffs[deg]
    if mid == 0:
        return None
    sign = 1 if mid > 0 else -1
    target = [sign * c for c in coeffs]
    total = abs(mid)
    count = 0
    for f in _vectors_with_norm(deg + 1, total):
        count += 1
        if count > budget:
            raise RuntimeError("Fox-Milnor search budget exceeded")
        if f[0] == 0 or f[-1] == 0 or f[0] < 0:
            continue
        prod = [0] * (2 * deg + 1)
        for i, a in enumerate(f):
            for j, b in enumerate(f):
                prod[i - j + deg] += a * b
        if prod == target:
            return sign, lo + deg, list(f)
    return None


def _vectors_with_norm(length, total):
    if length == 0:
        if total == 0:
            yield ()
        return
    s = isqrt(total)
    for a in range(-s, s + 1):
        for rest in _vectors_with_norm(length - 1, total - a * a):
            yield (a,) + rest


def ratio_norm_class(ratio, rep, dgroup=None):
    """Decide membership of a Laurent polynomial ratio in +-det(alpha) H N(Q(H)).

    Decided cases: monomials (rational or root-of-unity coefficient) and, over
    Q in one variable, the Fox-Milnor form +-t^l f(t) f(1/t).
    """
    dgroup = dgroup or det_group(rep)
    cond = rep.conductor
    if ratio.is_monomial():
        (e, c), = ratio.terms.items()
        order = lcm(dgroup.order, 2)
        split = _split_root_times_rational(c, order)
        if split is None:
            return SliceCheck(UNDECIDED, ratio, {"reason": "monomial coefficient is not a det-group unit times a rational"})
        u, r = split
        if abs(r) == 1:
            return SliceCheck(MEMBER, ratio, {"reason": "ratio is +-d h", "unit": u.to_json(), "monomial": list(e)})
        verdict = constant_norm_class(r, cond)
        cert = {"unit": u.to_json(), "monomial": list(e), "rational_part": str(r), "norm_test": verdict.to_json()}
        return SliceCheck(verdict.status, ratio, cert)
    if ratio.nvars == 1 and cond <= 2:
        found = fox_milnor_search(ratio)
        if found is None:
            return SliceCheck(NOT_MEMBER, ratio, {
                "reason": "no f in Z[t] with ratio = +-t^l f(t) f(1/t)",
                "method": "exhaustive search over f with sum of squared coefficients = |central coefficient|"})
        sign, shift, f = found
        return SliceCheck(MEMBER, ratio, {"reason": "Fox-Milnor factorization", "sign": sign,
                                          "shift": shift, "f": f})
    return SliceCheck(UNDECIDED, ratio, {"reason": "membership of a non-monomial ratio is not decided"})


def slice_consequence_check(torsion, rep, psi, m):
    """Compare a boundary torsion with the unlink value (necessary for boundary slice)."""
    unlink = unlink_torsion(m, rep, psi)
    ratio = (torsion.value / unlink.value).simplify()
    poly = ratio.as_laurent()
    if poly is None:
        return SliceCheck(UNDECIDED, ratio, {"reason": "ratio is not a Laurent polynomial"})
    return ratio_norm_class(poly, rep, torsion.det_group)


# random matrices for property checks

def random_boundary_seifert(m, sizes, rng, bound=3):
    """Random valid boundary Seifert matrix with A_ii - A_ii^t the standard symplectic form."""
    blocks = [[None] * m for _ in range(m)]
    for i in range(m):
        r = sizes[i]
        blk = [[0] * r for _ in range(r)]
        for a in range(r):
            for b in range(a, r):
                up = 1 if (b == a + 1 and a % 2 == 0) else 0
                v = rng.randint(-bound, bound - up)
                blk[a][b] = v + up
                blk[b][a] = v
        blocks[i][i] = blk
        for j in range(i + 1, m):
            blk = [[rng.randint(-bound, bound) for _ in range(sizes[j])] for _ in range(r)]
            blocks[i][j] = blk
            blocks[j][i] = [list(c) for c in zip(*blk)] if blk and blk[0] else [[] for _ in range(sizes[j])]
    return BoundarySeifertMatrix(blocks, sizes)


def random_metabolic_seifert(m, genera, rng, bound=3):
    """Boundary Seifert matrix vanishing on the span of the first g_i basis vectors of each block."""
    sizes = [2 * g for g in genera]
    offs = list(itertools.accumulate([0] + sizes))
    n = offs[-1]
    half = set()
    for i, g in enumerate(genera):
        half.update(range(offs[i], offs[i] + g))
    A = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            if a in half and b in half:
                continue
            v = rng.randint(-bound, bound)
            A[a][b] = v
            A[b][a] = v
    # A - A^t: pair the i-th half vector with the i-th complementary vector
    for i, g in enumerate(genera):
        for j in range(g):
            a, b = offs[i] + j, offs[i] + g + j
            A[a][b] = A[b][a] + 1
    return BoundarySeifertMatrix.from_full(A, sizes)


def random_block_unimodular(sizes, rng, steps=4, bound=2):
    """Block-diagonal integer matrix with det = +-1 built from elementary moves."""
    offs = list(itertools.accumulate([0] + list(sizes)))
    n = offs[-1]
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, r in enumerate(sizes):
        if r == 0:
            continue
        for _ in range(steps):
            a, b = rng.sample(range(offs[i], offs[i + 1]), 2) if r > 1 else (offs[i], offs[i])
            kind = rng.random()
            if kind < 0.2:
                P[a] = [-v for v in P[a]]
            elif kind < 0.3 and a != b:
                P[a], P[b] = P[b], P[a]
            elif a != b:
                c = rng.randint(-bound, bound)
                P[a] = [x + c * y for x, y in zip(P[a], P[b])]
    return P

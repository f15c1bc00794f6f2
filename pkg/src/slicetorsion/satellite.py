"""
Satellite torsion factor prod Delta_K(z_i) over the eigenvalues of alpha(axis),
and the Bing double sliceness obstruction built on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .cyclotomic import Cyclotomic
from .errors import CrossCheckMismatch, InadmissiblePsi, InvalidSeifert, NotPGroup, RankJumps, SizeMismatch
from .laurent import LaurentMatrix, LaurentPoly, laurent_det
from .monomial_rep import FreeWord, MonomialMatrix, eigenvalues, evaluate_word, det_group, verify_p_group
from .normtest import NOT_MEMBER, rational_norm_class
from .torsion import int_det

NOT_SLICE = "NOT_SLICE"
INCONCLUSIVE = "INCONCLUSIVE"
UNSUPPORTED = "UNSUPPORTED"


class AlexanderPoly:
    """Integer Laurent polynomial up to +-t^l, stored with lowest exponent 0 and
    positive lowest coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise ValueError("the Alexander polynomial is nonzero")
        if coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_laurent(cls, p):
        _, coeffs = p.univariate_coefficients()
        return cls(coeffs)

    def as_laurent(self):
        return LaurentPoly.from_univariate(list(self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, AlexanderPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"AlexanderPoly({list(self.coeffs)})"

    def __str__(self):
        return str(self.as_laurent())

    def __call__(self, z):
        return eval_at_root(self, z)


def check_knot_seifert(B):
    n = len(B)
    if any(len(r) != n for r in B):
        raise InvalidSeifert("Seifert matrix must be square")
    if n % 2:
        raise InvalidSeifert(f"Seifert matrix has odd size {n}")
    d = int_det([[B[i][j] - B[j][i] for j in range(n)] for i in range(n)])
    if d not in (1, -1):
        raise InvalidSeifert(f"det(B - B^t) = {d}, expected +-1")


def alexander_from_seifert(B):
    """det(B^t - t B), normalized."""
    check_knot_seifert(B)
    n = len(B)
    if n == 0:
        return AlexanderPoly([1])
    t = LaurentPoly.var(1, 1)
    rows = [[LaurentPoly.constant(B[j][i], 1) - t * B[i][j] for j in range(n)] for i in range(n)]
    return AlexanderPoly.from_laurent(laurent_det(LaurentMatrix(rows, 1)))


KNOTS = {
    "unknot": [],
    "trefoil": [[-1, 1], [0, -1]],
    "fig8": [[1, 1], [0, -1]],
}


def builtin_knot(name):
    """(Seifert matrix, Alexander polynomial) of a built-in knot."""
    aliases = {"4_1": "fig8", "figure-eight": "fig8", "3_1": "trefoil", "0_1": "unknot"}
    name = aliases.get(name, name)
    if name not in KNOTS:
        raise KeyError(f"unknown knot {name!r}; known: {sorted(KNOTS)}")
    B = KNOTS[name]
    return B, alexander_from_seifert(B)


def eval_at_root(delta, z):
    """Delta(z) as an element of Q(zeta_N), N = order of z."""
    n = z.denominator
    total = Cyclotomic.zero(n)
    for j, c in enumerate(delta.coeffs):
        if c:
            total = total + Cyclotomic.zeta(n, j * z.numerator) * c
    return total


def _dense_poly_at_matrix(delta, M, conductor):
    """sum_j c_j M^j as a dense matrix over Q(zeta_conductor)."""
    k = M.size
    acc = [[Cyclotomic.zero(conductor) for _ in range(k)] for _ in range(k)]
    power = MonomialMatrix.identity(k)
    for c in delta.coeffs:
        if c:
            for col, (row, z) in enumerate(zip(power.perm, power.diag)):
                acc[row][col] = acc[row][col] + z.to_cyclotomic(conductor) * c
        power = power @ M
    return acc


def dense_det(rows):
    """Determinant of a dense matrix of Cyclotomic entries (Bareiss over the field)."""
    if not rows:
        return Cyclotomic.one()
    return laurent_det(LaurentMatrix(rows, 0)).constant_term()


@dataclass
class SatelliteFactor:
    axis: FreeWord
    eigenvalues: list
    values: list
    product: Cyclotomic
    dense_check: Cyclotomic

    def to_json(self):
        q = self.product.as_rational()
        return {
            "axis": str(self.axis),
            "eigenvalues": [z.to_json() for z in self.eigenvalues],
            "values": [v.to_json() for v in self.values],
            "product": self.product.to_json(),
            "product_rational": None if q is None else str(q),
            "dense_determinant": self.dense_check.to_json(),
        }


def satellite_factor(rep, axis, delta, psi=None):
    """prod_i Delta(z_i) over the eigenvalues z_i of alpha(axis).

    Raises RankJumps if some Delta(z_i) vanishes.  The product is cross-checked
    against det(Delta(alpha(axis))) computed densely.
    """
    if isinstance(axis, str):
        axis = FreeWord.parse(axis)
    if axis.max_generator() > rep.m:
        raise SizeMismatch(f"axis uses x{axis.max_generator()} but the rep has {rep.m} generators")
    if psi is not None:
        image = psi.apply(axis.exponent_sums(rep.m))
        if any(image):
            raise InadmissiblePsi(f"psi(axis) = {image} is not zero")
    M = evaluate_word(rep, axis)
    zs = eigenvalues(M)
    values = [eval_at_root(delta, z) for z in zs]
    zeros = [z for z, v in zip(zs, values) if not v]
    if zeros:
        raise RankJumps(f"Delta vanishes at eigenvalues {[str(z.turn) for z in zeros]}")
    n = lcm(1, *(z.denominator for z in zs))
    product = Cyclotomic.one(n)
    for v in values:
        product = product * v.promote(n)
    check = dense_det(_dense_poly_at_matrix(delta, M, rep.conductor))
    if check != product:
        raise CrossCheckMismatch(f"eigenvalue product {product} != dense determinant {check}")
    return SatelliteFactor(axis, zs, values, product, check)


@dataclass
class BingVerdict:
    status: str
    p: int
    eigenvalues: list = field(default_factory=list)
    product: Cyclotomic | None = None
    certificate: dict = field(default_factory=dict)

    def to_json(self):
        q = self.product.as_rational() if self.product is not None else None
        return {
            "status": self.status,
            "p": self.p,
            "eigenvalues": [z.to_json() for z in self.eigenvalues],
            "eigenvalue_turns": [str(z.turn) for z in self.eigenvalues],
            "product": self.product.to_json() if self.product is not None else None,
            "product_rational": None if q is None else str(q),
            "certificate": self.certificate,
        }


def bing_double_obstruction(delta, rep, p=2):
    """Decide the twisted-torsion obstruction to the Bing double of K being slice.

    The axis is the commutator [x1, x2], which every psi kills.
    """
    if rep.m != 2:
        raise SizeMismatch("a Bing double has two components")
    cert = verify_p_group(rep, p)
    if not cert.is_p_group:
        raise NotPGroup(cert.reason)
    axis = FreeWord.parse("[x1,x2]")
    dgroup = det_group(rep)
    base = {"p_group": cert.to_json(), "det_group": dgroup.to_json(), "axis": str(axis)}
    zs = eigenvalues(evaluate_word(rep, axis))
    try:
        factor = satellite_factor(rep, axis, delta)
    except RankJumps as exc:
        base["reason"] = f"rank changes: {exc}"
        return BingVerdict(NOT_SLICE, p, zs, None, base)
    q = factor.product.as_rational()
    base["dense_determinant"] = factor.dense_check.to_json()
    if q is None:
        base["reason"] = "product is not rational; no norm test applied"
        return BingVerdict(INCONCLUSIVE, p, zs, factor.product, base)
    if 8 % rep.conductor:
        base["reason"] = f"norm test requires a base ring inside Z[zeta_8], not conductor {rep.conductor}"
        return BingVerdict(UNSUPPORTED, p, zs, factor.product, base)
    # the torsion is defined up to +-d, so the sign is always absorbed
    verdict = rational_norm_class(q, real_units=(1, -1))
    base["norm_test"] = verdict.to_json()
    if verdict.status == NOT_MEMBER:
        prime, mult = verdict.obstruction
        base["reason"] = (f"{q} = +-d q conj(q) would force {prime} (multiplicity {mult}) "
                          f"to be a norm in Z[zeta_8]")
        return BingVerdict(NOT_SLICE, p, zs, factor.product, base)
    base["reason"] = "product is a norm class; the obstruction vanishes"
    return BingVerdict(INCONCLUSIVE, p, zs, factor.product, base)

"""
Deciding whether a rational number is +-d * q * conj(q) with q in Q(zeta_8).

For q = a + b z + c z^2 + d z^3 (z = zeta_8) one has

    q * conj(q) = (a^2 + b^2 + c^2 + d^2) + (a(b - d) + c(b + d)) * sqrt(2).

So an integer n is a hermitian square of an element of Z[zeta_8] exactly when
some integer quadruple has a^2+b^2+c^2+d^2 = n and vanishing sqrt(2)-part.
Summing q*conj(q) over the two real embeddings of Q(sqrt 2) gives
2(a^2+b^2+c^2+d^2) = 2n, hence |a|, |b|, |c|, |d| <= sqrt(n) and the search
below is exhaustive.

Since Z[zeta_8] is a UFD, a positive integer is such a norm iff every prime
dividing it to odd multiplicity is one, and witnesses multiply.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from sympy import isprime

from .cyclotomic import Cyclotomic
from .errors import FactorizationBudgetExceeded, SearchBudgetExceeded

MEMBER = "MEMBER"
NOT_MEMBER = "NOT_MEMBER"
UNDECIDED = "UNDECIDED"

DEFAULT_TRIAL_BOUND = 10**7
DEFAULT_SEARCH_BUDGET = 10**7


def search_budget():
    """Pair budget for the quadruple search (TORSION_SEARCH_BUDGET overrides)."""
    raw = os.environ.get("TORSION_SEARCH_BUDGET")
    return int(raw) if raw else DEFAULT_SEARCH_BUDGET


def hermitian_form(a, b, c, d):
    """(rational part, sqrt(2) part) of q*conj(q) for q = a + b z + c z^2 + d z^3."""
    return a * a + b * b + c * c + d * d, a * (b - d) + c * (b + d)


def element(quad):
    return Cyclotomic(8, list(quad))


def hermitian_square(q):
    return q * q.conjugate()


def quadruple(q):
    """Power-basis coefficients of an element of Z[zeta_8]."""
    if q.conductor != 8 or not q.is_integral:
        raise ValueError("expected an element of Z[zeta_8]")
    return tuple(int(c) for c in q.coefficients)


def represent_as_hermitian_square(n, budget=None):
    """Find (a, b, c, d) with q*conj(q) == n, or None if no such quadruple exists.

    Enumerates (a, c); the sqrt(2)-part b(a+c) + d(c-a) = 0 then pins (b, d) to
    a multiple of ((c-a), -(a+c))/g, and the norm equation fixes the multiple.
    """
    if n < 1:
        raise ValueError("n must be positive")
    budget = search_budget() if budget is None else budget
    s = isqrt(n)
    if (2 * s + 1) ** 2 > 4 * budget:
        raise SearchBudgetExceeded(f"search for n={n} exceeds budget {budget}")
    for a in _signed_range(s):
        for c in _signed_range(isqrt(n - a * a)):
            rest = n - a * a - c * c
            u, v = a + c, c - a
            if u == 0 and v == 0:
                b = two_squares(rest)
                if b is not None:
                    return _verified((a, b[0], c, b[1]), n)
                continue
            g = gcd(u, v)
            # b^2 + d^2 = k^2 (u^2 + v^2) / g^2
            step = (u * u + v * v) // (g * g)
            if rest % step:
                continue
            k = isqrt(rest // step)
            if k * k * step != rest:
                continue
            return _verified((a, k * v // g, c, -k * u // g), n)
    return None


def _signed_range(s):
    yield 0
    for x in range(1, s + 1):
        yield x
        yield -x


def two_squares(n):
    for b in range(isqrt(n) + 1):
        d2 = n - b * b
        d = isqrt(d2)
        if d * d == d2:
            return b, d
    return None


def _verified(quad, n):
    assert hermitian_form(*quad) == (n, 0)
    assert hermitian_square(element(quad)) == n
    return quad


def factorize(n, trial_bound=DEFAULT_TRIAL_BOUND):
    """Prime factorization of a positive integer by trial division.

    The cofactor left after trial division must be 1 or prime.
    """
    factors = {}
    p = 2
    while p * p <= n and p <= trial_bound:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        if not isprime(n):
            raise FactorizationBudgetExceeded(
                f"composite cofactor {n} has no factor below {trial_bound}")
        factors[n] = factors.get(n, 0) + 1
    return factors


@dataclass
class NormVerdict:
    status: str
    target: Fraction
    witness: tuple | None = None        # (a, b, c, d) of an integral q
    scale: int = 1                      # q*conj(q) == |target| * scale^2
    obstruction: tuple | None = None    # (prime, multiplicity)
    factorization: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def member(self):
        return {MEMBER: True, NOT_MEMBER: False}.get(self.status)

    def verify(self):
        """Re-check the certificate exactly; returns True or raises AssertionError."""
        if self.status == MEMBER and self.witness is not None:
            lhs = hermitian_square(element(self.witness))
            assert lhs == abs(self.target) * self.scale**2, "witness does not multiply out"
        if self.obstruction is not None:
            p, mult = self.obstruction
            assert mult % 2 == 1 and self.factorization.get(p) == mult
            assert represent_as_hermitian_square(p) is None
        return True

    def to_json(self):
        return {
            "status": self.status,
            "target": str(self.target),
            "witness": list(self.witness) if self.witness is not None else None,
            "scale": self.scale,
            "obstruction": ({"prime": self.obstruction[0], "multiplicity": self.obstruction[1]}
                            if self.obstruction else None),
            "factorization": {str(p): e for p, e in sorted(self.factorization.items())},
            "reason": self.reason,
        }


def rational_norm_class(x, real_units=(1, -1), conductor=8, trial_bound=DEFAULT_TRIAL_BOUND):
    """Is x = u * q * conj(q) with u in ``real_units`` and q in Q(zeta_8)?"""
    x = Fraction(x)
    if x == 0:
        raise ValueError("x must be nonzero")
    if conductor != 8:
        return NormVerdict(UNDECIDED, x, reason=f"norm classes decided only for conductor 8, not {conductor}")
    if x < 0 and -1 not in real_units:
        return NormVerdict(NOT_MEMBER, x, reason="negative target but hermitian squares are positive")
    # |x| = (p/q) = (p*q) / q^2
    den = x.denominator
    n = abs(x.numerator) * den
    factors = factorize(n, trial_bound)
    witness = Cyclotomic.one(8)
    for p in sorted(factors):
        mult = factors[p]
        if mult % 2:
            quad = represent_as_hermitian_square(p)
            if quad is None:
                return NormVerdict(NOT_MEMBER, x, obstruction=(p, mult), factorization=factors,
                                   reason=f"{p} divides to odd multiplicity {mult} and is not a norm in Z[zeta_8]")
            witness = witness * element(quad)
        witness = witness * p ** (mult // 2)
    verdict = NormVerdict(MEMBER, x, witness=quadruple(witness), scale=den, factorization=factors)
    verdict.verify()
    return verdict


def is_rational_square(x):
    x = abs(Fraction(x))
    return isqrt(x.numerator) ** 2 == x.numerator and isqrt(x.denominator) ** 2 == x.denominator

"""
Exact arithmetic in cyclotomic rings Z[zeta_n] and fields Q(zeta_n).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(n)-1) and
every result is reduced modulo the n-th cyclotomic polynomial.  Internally a
value is an integer numerator vector over one positive common denominator,
which keeps multiplication on plain ints.

    >>> z = Cyclotomic.zeta(8)
    >>> z**4
    Cyclotomic(8, [-1, 0, 0, 0])
    >>> z.conjugate()
    Cyclotomic(8, [0, 0, 0, -1])
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational

from .errors import ConductorMismatch, NotDivisible, NotDivisor


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def euler_phi(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_monic(num, den):
    """Divide integer polynomials (ascending coefficients), ``den`` monic."""
    num = list(num)
    dl = len(den) - 1
    if len(num) <= dl:
        return [0], num
    quot = [0] * (len(num) - dl)
    for i in range(len(num) - 1, dl - 1, -1):
        c = num[i]
        if c:
            quot[i - dl] = c
            for j in range(dl + 1):
                num[i - dl + j] -= c * den[j]
    return quot, num[:dl]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, lowest degree first.

    Obtained by exact division of x^n - 1 by Phi_d for every proper divisor d.

    >>> cyclotomic_polynomial(8)
    (1, 0, 0, 0, 1)
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
        assert not any(rem)
    return tuple(poly)


def _reduce(coeffs, n):
    """Reduce an integer coefficient list modulo Phi_n, returning length phi(n)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    a = list(coeffs)
    if len(a) < deg:
        return a + [0] * (deg - len(a))
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    a[base + j] -= c * phi[j]
    return a[:deg]


@lru_cache(maxsize=None)
def _zeta_power(n, k):
    k %= n
    return tuple(_reduce([0] * k + [1], n))


def _solve_rational(matrix, rhs):
    """Solve matrix . x = rhs exactly over Q; None when inconsistent.

    ``matrix`` is a list of rows.  Free variables are set to zero.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(aug[i][cols] for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][cols]
    return x


class RootOfUnity:
    """exp(2 pi i num/den), kept as a reduced fraction of a full turn."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        numerator %= denominator
        g = gcd(numerator, denominator)
        if numerator == 0:
            numerator, denominator = 0, 1
        else:
            numerator //= g
            denominator //= g
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    def __setattr__(self, name, value):
        raise AttributeError("RootOfUnity is immutable")

    @classmethod
    def from_turn(cls, turn):
        turn = Fraction(turn)
        return cls(turn.numerator, turn.denominator)

    @property
    def turn(self):
        return Fraction(self.numerator, self.denominator)

    @property
    def order(self):
        return self.denominator

    def __mul__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity.from_turn(self.turn + other.turn)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e):
        return RootOfUnity.from_turn(self.turn * e)

    def inverse(self):
        return RootOfUnity(-self.numerator, self.denominator)

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return (self.numerator, self.denominator) == (other.numerator, other.denominator)
        return NotImplemented

    def __hash__(self):
        return hash(("RootOfUnity", self.numerator, self.denominator))

    def __lt__(self, other):
        return self.turn < other.turn

    def __repr__(self):
        return f"RootOfUnity({self.numerator}, {self.denominator})"

    def __complex__(self):
        return cmath.exp(2j * cmath.pi * self.numerator / self.denominator)

    def to_cyclotomic(self, conductor=None):
        n = self.denominator if conductor is None else conductor
        if n % self.denominator:
            raise NotDivisor(f"order {self.denominator} does not divide {n}")
        return Cyclotomic.zeta(n, self.numerator * (n // self.denominator))

    def to_json(self):
        return {"num": self.numerator, "den": self.denominator}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["num"]), int(data["den"]))


class Cyclotomic:
    """An element of Q(zeta_n) in the power basis."""

    __slots__ = ("conductor", "_num", "_den", "_hash")

    def __init__(self, conductor, coeffs=(), _raw=None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        if _raw is not None:
            num, den = _raw
        else:
            fr = [Fraction(c) for c in coeffs]
            den = lcm(*(f.denominator for f in fr)) if fr else 1
            num = [f.numerator * (den // f.denominator) for f in fr]
            num = _reduce(num, conductor)
        g = gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _make(cls, conductor, num, den=1):
        if den < 0:
            num = [-c for c in num]
            den = -den
        return cls(conductor, _raw=(num, den))

    # constructors

    @classmethod
    def zeta(cls, n, k=1):
        return cls._make(n, list(_zeta_power(n, k)))

    @classmethod
    def from_rational(cls, q, n=1):
        q = Fraction(q)
        num = [0] * euler_phi(n)
        num[0] = q.numerator
        return cls._make(n, num, q.denominator)

    @classmethod
    def zero(cls, n=1):
        return cls.from_rational(0, n)

    @classmethod
    def one(cls, n=1):
        return cls.from_rational(1, n)

    # accessors

    @property
    def coefficients(self):
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def is_integral(self):
        """True when the element lies in Z[zeta_n] (the power basis is integral)."""
        return self._den == 1

    @property
    def degree(self):
        return len(self._num)

    def __bool__(self):
        return any(self._num)

    def is_zero(self):
        return not any(self._num)

    def as_rational(self):
        if any(self._num[1:]):
            return None
        return Fraction(self._num[0], self._den)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.conductor != self.conductor:
                if other.as_rational() is not None:
                    return Cyclotomic.from_rational(other.as_rational(), self.conductor)
                if self.as_rational() is not None:
                    return other
                raise ConductorMismatch(
                    f"conductors {self.conductor} and {other.conductor} differ; promote first")
            return other
        if isinstance(other, (int, Rational)):
            return Cyclotomic.from_rational(other, self.conductor)
        return None

    def _lift(self, other):
        """Return (self', other') in a shared conductor, or (None, None)."""
        o = self._coerce(other)
        if o is None:
            return None, None
        if o.conductor != self.conductor:
            return Cyclotomic.from_rational(self.as_rational(), o.conductor), o
        return self, o

    def __add__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        d = lcm(a._den, b._den)
        fa, fb = d // a._den, d // b._den
        return Cyclotomic._make(a.conductor, [x * fa + y * fb for x, y in zip(a._num, b._num)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._make(self.conductor, [-c for c in self._num], self._den)

    def __sub__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            q = Fraction(other)
            return Cyclotomic._make(self.conductor, [c * q.numerator for c in self._num],
                                    self._den * q.denominator)
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        an, bn = a._num, b._num
        prod = [0] * (len(an) + len(bn) - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic._make(a.conductor, _reduce(prod, a.conductor), a._den * b._den)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.one(self.conductor)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        """The complex conjugate, zeta -> zeta^-1."""
        n = self.conductor
        out = [0] * n
        for j, c in enumerate(self._num):
            if c:
                out[(-j) % n] += c
        return Cyclotomic._make(n, _reduce(out, n), self._den)

    def multiplication_matrix(self):
        """Rational matrix of x -> self*x in the power basis (columns = images)."""
        n = self.conductor
        cols = []
        for j in range(euler_phi(n)):
            cols.append((self * Cyclotomic.zeta(n, j)).coefficients)
        return [list(row) for row in zip(*cols)]

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        rhs = [1] + [0] * (euler_phi(n) - 1)
        sol = _solve_rational(self.multiplication_matrix(), rhs)
        return Cyclotomic(n, sol)

    def __truediv__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        q = b.as_rational()
        if q is not None:
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return a * (1 / q)
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        return b / a

    def exact_div(self, other):
        """Quotient in Z[zeta_n]; raises NotDivisible if it is not integral.

        For non-integral operands this is plain field division.
        """
        q = self / other
        b = self._coerce(other)
        if self.is_integral and b.is_integral and not q.is_integral:
            raise NotDivisible(f"{other!r} does not divide {self!r} in Z[zeta_{q.conductor}]")
        return q

    # conductor changes

    def promote(self, m):
        """The same number written in conductor m (a multiple of the current one)."""
        n = self.conductor
        if m % n:
            raise NotDivisor(f"conductor {n} does not divide {m}")
        if m == n:
            return self
        step = m // n
        out = [0] * max(1, (len(self._num) - 1) * step + 1)
        for j, c in enumerate(self._num):
            out[j * step] += c
        return Cyclotomic._make(m, _reduce(out, m), self._den)

    def demote(self, n):
        """Express self in conductor n if it lies in Q(zeta_n); otherwise None."""
        m = self.conductor
        if m % n:
            raise NotDivisor(f"conductor {n} does not divide {m}")
        if m == n:
            return self
        images = [Cyclotomic.zeta(n, j).promote(m).coefficients for j in range(euler_phi(n))]
        matrix = [list(row) for row in zip(*images)]
        sol = _solve_rational(matrix, self.coefficients)
        if sol is None:
            return None
        return Cyclotomic(n, sol)

    def minimal_conductor(self):
        """Smallest divisor of the conductor whose field contains self."""
        for d in divisors(self.conductor):
            if d % 4 == 2:
                continue  # Q(zeta_d) = Q(zeta_{d/2}) for these
            if self.demote(d) is not None:
                return d
        return self.conductor

    # comparison and display

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            if other.conductor == self.conductor:
                return self._num == other._num and self._den == other._den
            m = lcm(self.conductor, other.conductor)
            return self.promote(m) == other.promote(m)
        if isinstance(other, (int, Rational)):
            return self.as_rational() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            q = self.as_rational()
            self._hash = hash(q) if q is not None else hash((self.conductor, self._num, self._den))
        return self._hash

    def __repr__(self):
        coeffs = [str(c) for c in self.coefficients]
        return f"Cyclotomic({self.conductor}, [{', '.join(coeffs)}])"

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return body if self.conductor <= 2 else f"{body} [z=zeta_{self.conductor}]"

    def embeddings(self):
        """Complex values at every primitive n-th root of unity (diagnostics only)."""
        n = self.conductor
        vals = []
        for k in range(1, n + 1):
            if gcd(k, n) != 1:
                continue
            w = cmath.exp(2j * cmath.pi * k / n)
            vals.append(sum(float(c) * w**j for j, c in enumerate(self.coefficients)))
        return vals

    def __complex__(self):
        w = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(float(c) * w**j for j, c in enumerate(self.coefficients))

    def to_json(self):
        return {"conductor": self.conductor, "coeffs": [_frac_str(c) for c in self.coefficients]}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["conductor"]), [Fraction(c) for c in data["coeffs"]])


def _frac_str(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def common_conductor(values):
    """Promote a collection of Cyclotomic/rational values to their lcm conductor."""
    n = 1
    for v in values:
        if isinstance(v, Cyclotomic):
            n = lcm(n, v.conductor)
    out = []
    for v in values:
        if isinstance(v, Cyclotomic):
            out.append(v.promote(n))
        else:
            out.append(Cyclotomic.from_rational(v, n))
    return n, out

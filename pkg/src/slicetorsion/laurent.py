"""
Sparse multivariable Laurent polynomials over Z, Q or Q(zeta_n), their
fractions, the bar involution, and exact determinant / rank of matrices with
Laurent polynomial entries.
"""

from __future__ import annotations

import heapq
import itertools
import random
from fractions import Fraction
from math import lcm
from numbers import Rational

from sympy import isprime, primefactors

from .cyclotomic import Cyclotomic, _frac_str, _reduce, euler_phi
from .errors import DimensionMismatch, InternalDivisibilityFailure, NotDivisible


def _cdiv(x, y):
    """Field division of coefficients; rationals stay ints when integral."""
    if isinstance(x, Cyclotomic) or isinstance(y, Cyclotomic):
        if not isinstance(x, Cyclotomic):
            return Cyclotomic.from_rational(x, y.conductor) / y
        return x / y
    q = Fraction(x) / Fraction(y)
    return q.numerator if q.denominator == 1 else q


def _coeff_to_json(c):
    if isinstance(c, Cyclotomic):
        return c.to_json()
    return _frac_str(c)


def _coeff_from_json(data):
    if isinstance(data, dict):
        c = Cyclotomic.from_json(data)
        return c
    if isinstance(data, int):
        return data
    q = Fraction(data)
    return q.numerator if q.denominator == 1 else q


def _lexmax(keys):
    return max(keys)


class LaurentPoly:
    """A Laurent polynomial in ``nvars`` variables t_1..t_r.

    ``terms`` maps exponent tuples to nonzero coefficients; the empty map is 0.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionMismatch(f"exponent {e} has length {len(e)}, expected {nvars}")
                if c:
                    clean[e] = c
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars):
        return cls.constant(1, nvars)

    @classmethod
    def monomial(cls, exponent, coeff=1):
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coeff})

    @classmethod
    def var(cls, i, nvars):
        """t_i, with i counted from 1."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} outside 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def from_univariate(cls, coeffs, low=0):
        """c_0 t^low + c_1 t^(low+1) + ... in one variable."""
        return cls(1, {(low + j,): c for j, c in enumerate(coeffs)})

    # structure

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def __len__(self):
        return len(self.terms)

    def min_exponents(self):
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self):
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.terms))

    def lex_min(self):
        return min(self.terms)

    def shift(self, e):
        """Multiply by the monomial t^e."""
        return LaurentPoly(self.nvars, {tuple(a + b for a, b in zip(k, e)): c for k, c in self.terms.items()})

    def map_coeffs(self, f):
        return LaurentPoly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def degree_span(self, i):
        lo, hi = self.min_exponents()[i - 1], self.max_exponents()[i - 1]
        return hi - lo

    # arithmetic

    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _wrap(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Rational, Cyclotomic)):
            return LaurentPoly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return LaurentPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Cyclotomic)):
            if not other:
                return LaurentPoly(self.nvars)
            return LaurentPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        fast = _mul_integral_cyclotomic(self, other)
        if fast is not None:
            return fast
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                if e in out:
                    out[e] = out[e] + v
                else:
                    out[e] = v
        return LaurentPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial(tuple(-x for x in e), _cdiv(1, c)) ** (-n)
        result = LaurentPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bar(self):
        """t^e -> t^-e with every coefficient conjugated."""
        return LaurentPoly(self.nvars, {tuple(-x for x in e): c.conjugate() for e, c in self.terms.items()})

    def exact_div(self, other):
        """The Laurent polynomial q with q * other == self; NotDivisible otherwise."""
        if isinstance(other, (int, Rational, Cyclotomic)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return LaurentPoly(self.nvars, {e: _cdiv(c, other) for e, c in self.terms.items()})
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return LaurentPoly(self.nvars)
        if len(other.terms) == 1:
            (e, c), = other.terms.items()
            return LaurentPoly(self.nvars, {tuple(a - b for a, b in zip(k, e)): _cdiv(v, c)
                                            for k, v in self.terms.items()})
        # the quotient's exponents lie in the box [min(a)-min(b), max(a)-max(b)]
        lo = tuple(a - b for a, b in zip(self.min_exponents(), other.min_exponents()))
        hi = tuple(a - b for a, b in zip(self.max_exponents(), other.max_exponents()))
        if any(l > h for l, h in zip(lo, hi)):
            raise NotDivisible("Newton polytope of divisor does not fit")
        lead_e = _lexmax(other.terms)
        lead_c = other.terms[lead_e]
        fast = _div_integral_cyclotomic(self, other, lead_e, lo, hi)
        if fast is not None:
            return fast
        if isinstance(lead_c, Cyclotomic):
            inv = lead_c.inverse()
            divide = lambda x: x * inv  # noqa: E731
        else:
            divide = lambda x: _cdiv(x, lead_c)  # noqa: E731
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = _lexmax(rem)
            qe = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < l or x > h for x, l, h in zip(qe, lo, hi)):
                raise NotDivisible("nonzero remainder")
            qc = divide(rem[e])
            quot[qe] = qc
            for be, bc in other.terms.items():
                k = tuple(a + b for a, b in zip(qe, be))
                v = rem.get(k, 0) - qc * bc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPoly(self.nvars, quot)

    def divides(self, other):
        try:
            other.exact_div(self)
        except NotDivisible:
            return False
        return True

    # evaluation

    def evaluate(self, point):
        """Substitute values (ints, Fractions or Cyclotomic) for t_1..t_r."""
        point = list(point)
        if len(point) != self.nvars:
            raise DimensionMismatch("wrong number of values")
        powers = [{} for _ in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for i, x in enumerate(e):
                if x:
                    if x not in powers[i]:
                        powers[i][x] = _power(point[i], x)
                    v = v * powers[i][x]
            total = total + v
        return total

    def __call__(self, *point):
        return self.evaluate(point)

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational, Cyclotomic)):
            return self.terms == LaurentPoly.constant(other, self.nvars).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["t"] if self.nvars == 1 else [f"t{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
            cs = f"({c})" if isinstance(c, Cyclotomic) and c.as_rational() is None else str(
                c.as_rational() if isinstance(c, Cyclotomic) else c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"{cs}*{mono}")
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")

    def univariate_coefficients(self):
        """(lowest exponent, dense coefficient list) for one-variable polys."""
        if self.nvars != 1:
            raise DimensionMismatch("not univariate")
        if not self.terms:
            return 0, []
        lo, hi = self.min_exponents()[0], self.max_exponents()[0]
        return lo, [self.terms.get((j,), 0) for j in range(lo, hi + 1)]

    def to_json(self):
        return [{"exp": list(e), "coeff": _coeff_to_json(self.terms[e])} for e in sorted(self.terms)]

    @classmethod
    def from_json(cls, data, nvars=None):
        if not data:
            if nvars is None:
                raise DimensionMismatch("cannot infer variable count of an empty polynomial")
            return cls(nvars)
        r = len(data[0]["exp"]) if nvars is None else nvars
        return cls(r, {tuple(t["exp"]): _coeff_from_json(t["coeff"]) for t in data})


def _integral_vectors(p, n):
    """Power-basis integer vectors of the coefficients of p in conductor n, or None."""
    phi = euler_phi(n)
    out = {}
    for e, c in p.terms.items():
        if isinstance(c, Cyclotomic):
            if c.conductor != n or c._den != 1:
                return None
            out[e] = c._num
        elif isinstance(c, int):
            out[e] = (c,) + (0,) * (phi - 1)
        else:
            return None
    return out


def _mul_integral_cyclotomic(a, b):
    """Product of two polynomials over Z[zeta_n], reducing mod Phi_n once per term.

    Returns None unless some coefficient is a Cyclotomic and all coefficients
    are integral in one common conductor.
    """
    n = None
    for c in itertools.chain(a.terms.values(), b.terms.values()):
        if isinstance(c, Cyclotomic):
            if n is None:
                n = c.conductor
            elif c.conductor != n:
                return None
    if n is None or n <= 2:
        return None
    va, vb = _integral_vectors(a, n), _integral_vectors(b, n)
    if va is None or vb is None:
        return None
    width = 2 * euler_phi(n) - 1
    sparse_b = [(e2, [(j, yj) for j, yj in enumerate(y) if yj]) for e2, y in vb.items()]
    acc = {}
    for e1, x in va.items():
        nx = [(i, xi) for i, xi in enumerate(x) if xi]
        for e2, ny in sparse_b:
            e = tuple(u + v for u, v in zip(e1, e2))
            row = acc.get(e)
            if row is None:
                row = acc[e] = [0] * width
            for i, xi in nx:
                for j, yj in ny:
                    row[i + j] += xi * yj
    terms = {}
    for e, row in acc.items():
        red = _reduce(row, n)
        if any(red):
            terms[e] = Cyclotomic._make(n, red)
    return LaurentPoly(a.nvars, terms)


def _vmul(x, y, n):
    prod = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                if yj:
                    prod[i + j] += xi * yj
    return _reduce(prod, n)


def _div_integral_cyclotomic(a, b, lead_e, lo, hi):
    """Long division over Z[zeta_n] on raw integer vectors (None if not applicable).

    Used only when every quotient coefficient turns out integral, which is the
    case for the exact divisions inside Bareiss elimination.
    """
    c = b.terms[lead_e]
    if not isinstance(c, Cyclotomic):
        return None
    n = c.conductor
    if n <= 2:
        return None
    va, vb = _integral_vectors(a, n), _integral_vectors(b, n)
    if va is None or vb is None:
        return None
    inv = c.inverse()
    inv_num, inv_den = inv._num, inv._den
    rem = {e: list(v) for e, v in va.items()}
    heap = [tuple(-x for x in e) for e in rem]
    heapq.heapify(heap)
    quot = {}
    while heap:
        e = tuple(-x for x in heapq.heappop(heap))
        r = rem.get(e)
        if r is None or not any(r):
            rem.pop(e, None)
            continue
        qe = tuple(x - y for x, y in zip(e, lead_e))
        if any(x < l or x > h for x, l, h in zip(qe, lo, hi)):
            raise NotDivisible("nonzero remainder")
        q = _vmul(r, inv_num, n)
        if any(x % inv_den for x in q):
            return None
        q = [x // inv_den for x in q]
        quot[qe] = q
        for be, bv in vb.items():
            k = tuple(x + y for x, y in zip(qe, be))
            sub = _vmul(q, bv, n)
            cur = rem.get(k)
            if cur is None:
                rem[k] = [-x for x in sub]
                heapq.heappush(heap, tuple(-x for x in k))
            else:
                for i, x in enumerate(sub):
                    cur[i] -= x
        rem.pop(e, None)
    return LaurentPoly(a.nvars, {e: Cyclotomic._make(n, q) for e, q in quot.items()})


def _power(x, e):
    if e >= 0:
        return x ** e
    if isinstance(x, Cyclotomic):
        return x.inverse() ** (-e)
    return Fraction(1, 1) / Fraction(x) ** (-e)


class RationalFunction:
    """numerator / denominator in the fraction field of a Laurent ring."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = LaurentPoly.one(num.nvars)
        if not den:
            raise ZeroDivisionError("zero denominator")
        num._check(den)
        self.num = num
        self.den = den

    @property
    def nvars(self):
        return self.num.nvars

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction equality is by cross-multiplication; not hashable")

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            other = RationalFunction(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            other = RationalFunction(other)
        if not other.num:
            raise ZeroDivisionError("division by zero")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inverse(self):
        return RationalFunction(self.den, self.num)

    def bar(self):
        return RationalFunction(self.num.bar(), self.den.bar())

    def simplify(self):
        """Cancel the denominator when it divides the numerator exactly."""
        if self.den.is_monomial():
            return RationalFunction(self.num.exact_div(self.den))
        try:
            return RationalFunction(self.num.exact_div(self.den))
        except NotDivisible:
            return self

    def as_laurent(self):
        """The Laurent polynomial this equals, or None."""
        s = self.simplify()
        return s.num if s.den == LaurentPoly.one(self.nvars) else None

    def canonical(self):
        """Representative modulo +-t^h: each of num, den shifted so its lex-smallest
        exponent is 0, and signs fixed so those lowest coefficients have positive
        rational part when they are rational."""
        num, den = self.num, self.den
        out = []
        for p in (num, den):
            if p:
                low = p.lex_min()
                p = p.shift(tuple(-x for x in low))
                c = p.terms[(0,) * p.nvars]
                q = c.as_rational() if isinstance(c, Cyclotomic) else c
                if q is not None and q < 0:
                    p = -p
            out.append(p)
        return RationalFunction(out[0], out[1])

    def same_representative(self, other):
        a, b = self.canonical(), other.canonical()
        return a.num == b.num and a.den == b.den

    def evaluate(self, point):
        d = self.den.evaluate(point)
        n = self.num.evaluate(point)
        return _cdiv(n, d)

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __str__(self):
        if self.den == LaurentPoly.one(self.nvars):
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def to_json(self):
        return {"nvars": self.nvars, "numerator": self.num.to_json(), "denominator": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        r = data["nvars"]
        return cls(LaurentPoly.from_json(data["numerator"], r), LaurentPoly.from_json(data["denominator"], r))


# matrices

class LaurentMatrix:
    """A rectangular matrix with LaurentPoly entries in a fixed number of variables."""

    def __init__(self, rows, nvars=None):
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged matrix")
        if nvars is None:
            if not rows or not rows[0]:
                raise DimensionMismatch("variable count needed for an empty matrix")
            nvars = next(e.nvars for e in rows[0] if isinstance(e, LaurentPoly))
        self.nvars = nvars
        self.rows = [[e if isinstance(e, LaurentPoly) else LaurentPoly.constant(e, nvars) for e in r]
                     for r in rows]
        for r in self.rows:
            for e in r:
                if e.nvars != nvars:
                    raise DimensionMismatch("entries use different variable counts")

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.shape == other.shape and self.rows == other.rows

    def transpose(self):
        return LaurentMatrix([list(c) for c in zip(*self.rows)], self.nvars)

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise DimensionMismatch("inner dimensions differ")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                s = LaurentPoly(self.nvars)
                for t in range(k):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a and b:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return LaurentMatrix(out, self.nvars)

    def bar(self):
        return LaurentMatrix([[e.bar() for e in r] for r in self.rows], self.nvars)

    def evaluate(self, point):
        return [[e.evaluate(point) for e in r] for r in self.rows]

    def __repr__(self):
        return "LaurentMatrix([" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "])"


def laurent_det(M):
    """Determinant by fraction-free Bareiss elimination.

    Each row is first multiplied by a monomial so all entries are honest
    polynomials; the monomial factor is restored at the end.
    """
    n, m = M.shape
    if n != m:
        raise DimensionMismatch(f"determinant of a {n}x{m} matrix")
    r = M.nvars
    if n == 0:
        return LaurentPoly.one(r)
    shift = [0] * r
    rows = []
    for row in M.rows:
        nz = [e for e in row if e]
        if not nz:
            return LaurentPoly(r)
        low = [min(e.min_exponents()[i] for e in nz) for i in range(r)]
        shift = [a + b for a, b in zip(shift, low)]
        neg = tuple(-x for x in low)
        rows.append([e.shift(neg) if e else e for e in row])
    sign = 1
    prev = LaurentPoly.one(r)
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if rows[i][k]]
        if not candidates:
            return LaurentPoly(r)
        piv = min(candidates, key=lambda i: len(rows[i][k].terms))
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            for j in range(k + 1, n):
                v = rows[i][j] * pk
                if rik and rows[k][j]:
                    v = v - rik * rows[k][j]
                if v and k > 0:
                    try:
                        v = v.exact_div(prev)
                    except NotDivisible as exc:
                        raise InternalDivisibilityFailure(f"Bareiss step {k} not exact") from exc
                rows[i][j] = v
            rows[i][k] = LaurentPoly(r)
        prev = pk
    det = rows[n - 1][n - 1]
    if sign < 0:
        det = -det
    return det.shift(tuple(shift))


# rank

def _find_prime(n, start=2**61):
    """A prime p = 1 mod n (and > start) together with a primitive n-th root mod p."""
    j = start // n + 1
    while True:
        p = n * j + 1
        if isprime(p):
            break
        j += 1
    qs = primefactors(n) if n > 1 else []
    g = 2
    while True:
        w = pow(g, (p - 1) // n, p)
        if all(pow(w, n // q, p) != 1 for q in qs):
            return p, w
        g += 1


class _ModPMap:
    """Ring homomorphism Z[zeta_n][t^+-1] -> F_p with zeta -> w, t_i -> point_i."""

    def __init__(self, conductor, nvars, rng):
        self.p, self.w = _find_prime(conductor)
        self.conductor = conductor
        self.point = [rng.randrange(2, self.p - 1) for _ in range(nvars)]
        self.inv_point = [pow(x, -1, self.p) for x in self.point]

    def coeff(self, c):
        p = self.p
        if isinstance(c, Cyclotomic):
            if self.conductor % c.conductor:
                raise ValueError("conductor not covered")
            w = pow(self.w, self.conductor // c.conductor, p)
            num = sum(int(x) * pow(w, j, p) for j, x in enumerate(c._num)) % p
            if c._den % p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return num * pow(c._den, -1, p) % p
        q = Fraction(c)
        if q.denominator % p == 0:
            raise ZeroDivisionError("denominator divisible by p")
        return q.numerator * pow(q.denominator, -1, p) % p

    def poly(self, f):
        p = self.p
        total = 0
        for e, c in f.terms.items():
            v = self.coeff(c)
            for x, a, ai in zip(e, self.point, self.inv_point):
                if x > 0:
                    v = v * pow(a, x, p) % p
                elif x < 0:
                    v = v * pow(ai, -x, p) % p
            total += v
        return total % p


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _matrix_conductor(M):
    n = 1
    for row in M.rows:
        for e in row:
            for c in e.terms.values():
                if isinstance(c, Cyclotomic):
                    n = lcm(n, c.conductor)
    return n


def specialized_rank(M, seed=0):
    """Rank of the image of M under a random homomorphism to a prime field.

    This is a lower bound for the rank over the fraction field.
    """
    phi = _ModPMap(_matrix_conductor(M), M.nvars, random.Random(seed))
    try:
        image = [[phi.poly(e) for e in row] for row in M.rows]
    except ZeroDivisionError:
        return 0
    return _rank_mod_p(image, phi.p)


def symbolic_rank(M):
    """Rank over the fraction field by fraction-free elimination with full pivot search."""
    rows = [list(r) for r in M.rows]
    n, m = M.shape
    prev = LaurentPoly.one(M.nvars)
    rank = 0
    cols = list(range(m))
    while rank < min(n, m):
        best = None
        for i in range(rank, n):
            for jj in range(rank, m):
                e = rows[i][cols[jj]]
                if e and (best is None or len(e.terms) < best[0]):
                    best = (len(e.terms), i, jj)
        if best is None:
            break
        _, i, jj = best
        rows[rank], rows[i] = rows[i], rows[rank]
        cols[rank], cols[jj] = cols[jj], cols[rank]
        pk = rows[rank][cols[rank]]
        for i in range(rank + 1, n):
            rik = rows[i][cols[rank]]
            for jj in range(rank + 1, m):
                j = cols[jj]
                v = rows[i][j] * pk
                if rik and rows[rank][j]:
                    v = v - rik * rows[rank][j]
                if v and rank > 0:
                    try:
                        v = v.exact_div(prev)
                    except NotDivisible as exc:
                        raise InternalDivisibilityFailure("rank elimination not exact") from exc
                rows[i][j] = v
            rows[i][cols[rank]] = LaurentPoly(M.nvars)
        prev = pk
        rank += 1
    return rank


def laurent_rank(M, seed=0):
    """Rank over the fraction field of the Laurent ring.

    A full-rank random specialization certifies full rank at once; otherwise the
    symbolic elimination decides.
    """
    n, m = M.shape
    if n == 0 or m == 0:
        return 0
    if specialized_rank(M, seed) == min(n, m):
        return min(n, m)
    return symbolic_rank(M)


def det_is_nonzero(M, seed=0):
    n, m = M.shape
    if n != m:
        raise DimensionMismatch("not square")
    return laurent_rank(M, seed) == n


def identity_matrix(k, nvars):
    one, zero = LaurentPoly.one(nvars), LaurentPoly(nvars)
    return LaurentMatrix([[one if i == j else zero for j in range(k)] for i in range(k)], nvars)

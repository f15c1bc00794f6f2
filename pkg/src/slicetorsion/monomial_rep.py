"""
Monomial (permutation times diagonal) matrices over roots of unity, free-group
words, and representations of free groups by such matrices.

Convention: column ``c`` of a MonomialMatrix has its single nonzero entry
``diag[c]`` in row ``perm[c]``.  Indices are 0-based internally and 1-based in
the JSON file format.
"""

from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass
from math import lcm
from pathlib import Path

from .cyclotomic import Cyclotomic, RootOfUnity
from .errors import ClosureBudgetExceeded, InputError, SizeMismatch

DEFAULT_CLOSURE_BUDGET = 10**6


class MonomialMatrix:
    __slots__ = ("perm", "diag")

    def __init__(self, perm, diag):
        perm = tuple(int(p) for p in perm)
        diag = tuple(d if isinstance(d, RootOfUnity) else RootOfUnity.from_turn(d) for d in diag)
        if len(perm) != len(diag):
            raise SizeMismatch("perm and diag lengths differ")
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
        self.perm = perm
        self.diag = diag

    @classmethod
    def identity(cls, k):
        return cls(range(k), [RootOfUnity(0)] * k)

    @classmethod
    def diagonal(cls, entries):
        return cls(range(len(entries)), entries)

    @classmethod
    def permutation(cls, perm):
        return cls(perm, [RootOfUnity(0)] * len(perm))

    @property
    def size(self):
        return len(self.perm)

    def __eq__(self, other):
        if not isinstance(other, MonomialMatrix):
            return NotImplemented
        return self.perm == other.perm and self.diag == other.diag

    def __hash__(self):
        return hash((self.perm, self.diag))

    def __repr__(self):
        entries = ", ".join(f"{p}:{d.numerator}/{d.denominator}" for p, d in zip(self.perm, self.diag))
        return f"MonomialMatrix([{entries}])"

    def __matmul__(self, other):
        return mono_mul(self, other)

    def is_identity(self):
        return all(p == i for i, p in enumerate(self.perm)) and all(d.numerator == 0 for d in self.diag)

    @property
    def conductor(self):
        return lcm(1, *(d.denominator for d in self.diag))

    def cycles(self):
        """Cycles of the permutation part as (column list, product of diagonal entries)."""
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cols, prod = [], RootOfUnity(0)
            c = start
            while not seen[c]:
                seen[c] = True
                cols.append(c)
                prod = prod * self.diag[c]
                c = self.perm[c]
            out.append((cols, prod))
        return out

    def sign(self):
        return -1 if (self.size - len(self.cycles())) % 2 else 1

    def det(self):
        """Determinant as a root of unity: sign(perm) * prod(diag)."""
        d = RootOfUnity(0)
        for x in self.diag:
            d = d * x
        if self.sign() < 0:
            d = d * RootOfUnity(1, 2)
        return d

    def order(self):
        """Multiplicative order: lcm over cycles of length * order(cycle product)."""
        return lcm(1, *(len(cols) * prod.order for cols, prod in self.cycles()))

    def power(self, e):
        result = MonomialMatrix.identity(self.size)
        base = self if e >= 0 else mono_inv(self)
        e = abs(e)
        while e:
            if e & 1:
                result = mono_mul(result, base)
            base = mono_mul(base, base)
            e >>= 1
        return result

    def dense(self, conductor=None):
        """Dense matrix (list of rows) of Cyclotomic entries."""
        n = conductor or self.conductor
        k = self.size
        zero = Cyclotomic.zero(n)
        rows = [[zero] * k for _ in range(k)]
        for c, (r, d) in enumerate(zip(self.perm, self.diag)):
            rows[r][c] = d.to_cyclotomic(n)
        return rows

    def to_json(self):
        return {"perm": [p + 1 for p in self.perm], "diag": [d.to_json() for d in self.diag]}

    @classmethod
    def from_json(cls, data):
        return cls([int(p) - 1 for p in data["perm"]], [RootOfUnity.from_json(d) for d in data["diag"]])


def mono_mul(a, b):
    if a.size != b.size:
        raise SizeMismatch(f"sizes {a.size} and {b.size}")
    # (ab) e_c = b_c * a_{pb(c)} e_{pa(pb(c))}
    perm = [a.perm[b.perm[c]] for c in range(b.size)]
    diag = [b.diag[c] * a.diag[b.perm[c]] for c in range(b.size)]
    return MonomialMatrix(perm, diag)


def mono_inv(a):
    k = a.size
    perm = [0] * k
    diag = [None] * k
    for c in range(k):
        perm[a.perm[c]] = c
        diag[a.perm[c]] = a.diag[c].inverse()
    return MonomialMatrix(perm, diag)


def eigenvalues(m):
    """Eigenvalue multiset of a monomial matrix, sorted by turn.

    A cycle of length l whose diagonal product is lam contributes the l
    l-th roots of lam.
    """
    out = []
    for cols, prod in m.cycles():
        ell = len(cols)
        for j in range(ell):
            out.append(RootOfUnity(prod.numerator + prod.denominator * j, prod.denominator * ell))
    return sorted(out, key=lambda z: z.turn)


# Free-group words

class FreeWord:
    """A word in x_1..x_m as a tuple of (generator index, +-1)."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        norm = []
        for g, e in letters:
            if e not in (1, -1) or g < 1:
                raise ValueError(f"bad letter {(g, e)}")
            norm.append((int(g), int(e)))
        self.letters = tuple(norm)

    @classmethod
    def from_signed(cls, indices):
        """``[1, 2, -1, -2]`` is x1 x2 x1^-1 x2^-1."""
        return cls((abs(i), 1 if i > 0 else -1) for i in indices)

    @classmethod
    def parse(cls, text):
        return _WordParser(text).parse()

    @classmethod
    def commutator(cls, a, b):
        return a * b * a.inverse() * b.inverse()

    def __mul__(self, other):
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord((g, -e) for g, e in reversed(self.letters))

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def max_generator(self):
        return max((g for g, _ in self.letters), default=0)

    def exponent_sums(self, m):
        sums = [0] * m
        for g, e in self.letters:
            sums[g - 1] += e
        return sums

    def signed(self):
        return [g * e for g, e in self.letters]

    def __str__(self):
        return "".join(f"x{g}" if e > 0 else f"X{g}" for g, e in self.letters) or "1"

    def __repr__(self):
        return f"FreeWord({self!s})"


class _WordParser:
    # x1 / X1 generators, x y X Y shorthand for generators 1, 2, [a,b] commutators
    _token = re.compile(r"\s*(?:([xX])(\d+)|([xyXY])|(\[)|(\])|(,))")

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _peek(self):
        m = self._token.match(self.text, self.pos)
        return m

    def parse(self):
        w = self._sequence()
        if self.text[self.pos:].strip():
            raise InputError(f"unexpected input at {self.pos} in {self.text!r}")
        return w

    def _sequence(self):
        w = FreeWord()
        while True:
            m = self._peek()
            if m is None or m.group(5) or m.group(6):
                return w
            self.pos = m.end()
            if m.group(1):
                g = int(m.group(2))
                w = w * FreeWord([(g, 1 if m.group(1) == "x" else -1)])
            elif m.group(3):
                ch = m.group(3)
                w = w * FreeWord([(1 if ch in "xX" else 2, 1 if ch.islower() else -1)])
            else:
                a = self._sequence()
                self._expect(6)
                b = self._sequence()
                self._expect(5)
                w = w * FreeWord.commutator(a, b)

    def _expect(self, group):
        m = self._peek()
        if m is None or not m.group(group):
            raise InputError(f"malformed word {self.text!r} at {self.pos}")
        self.pos = m.end()


# Representations

class MonomialRep:
    """Images of free generators x_1..x_m as monomial matrices of common size k."""

    def __init__(self, generators, conductor=None):
        generators = list(generators)
        if not generators:
            raise ValueError("need at least one generator")
        k = generators[0].size
        if any(g.size != k for g in generators):
            raise SizeMismatch("generator sizes differ")
        self.generators = generators
        base = lcm(1, *(g.conductor for g in generators))
        if conductor is not None:
            if conductor % base:
                raise InputError(f"declared conductor {conductor} is not a multiple of {base}")
            base = conductor
        self.conductor = base

    @property
    def m(self):
        return len(self.generators)

    @property
    def k(self):
        return self.generators[0].size

    @classmethod
    def trivial(cls, m, k=1):
        return cls([MonomialMatrix.identity(k) for _ in range(m)])

    def __call__(self, word):
        return evaluate_word(self, word)

    def __repr__(self):
        return f"MonomialRep(m={self.m}, k={self.k}, conductor={self.conductor})"

    def to_json(self):
        return {"size": self.k, "conductor": self.conductor,
                "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data):
        try:
            gens = [MonomialMatrix.from_json(g) for g in data["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad representation data: {exc}") from exc
        if "size" in data and any(g.size != int(data["size"]) for g in gens):
            raise SizeMismatch("generator size differs from declared size")
        return cls(gens, data.get("conductor"))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def evaluate_word(rep, word):
    if isinstance(word, str):
        word = FreeWord.parse(word)
    if word.max_generator() > rep.m:
        raise SizeMismatch(f"word uses x{word.max_generator()} but rep has {rep.m} generators")
    inverses = {}
    result = MonomialMatrix.identity(rep.k)
    for g, e in word.letters:
        mat = rep.generators[g - 1]
        if e < 0:
            if g not in inverses:
                inverses[g] = mono_inv(mat)
            mat = inverses[g]
        result = mono_mul(result, mat)
    return result


def _is_power_of(n, p):
    while n % p == 0 and n > 1:
        n //= p
    return n == 1


@dataclass(frozen=True)
class PGroupCertificate:
    p: int
    is_p_group: bool
    perm_group_order: int
    max_diag_order: int
    size: int
    reason: str = ""

    @property
    def order_bound(self):
        """Upper bound on the order of the generated matrix group."""
        return self.perm_group_order * self.max_diag_order ** self.size

    def to_json(self):
        return {"p": self.p, "is_p_group": self.is_p_group,
                "perm_group_order": self.perm_group_order,
                "max_diag_order": self.max_diag_order, "reason": self.reason}


def permutation_closure(perms, budget=DEFAULT_CLOSURE_BUDGET):
    """All elements of the group generated by ``perms`` (tuples), by BFS."""
    perms = [tuple(p) for p in perms]
    k = len(perms[0]) if perms else 0
    ident = tuple(range(k))
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in perms:
            h = tuple(s[g[c]] for c in range(k))
            if h not in seen:
                seen.add(h)
                if len(seen) > budget:
                    raise ClosureBudgetExceeded(f"permutation closure exceeds {budget} elements")
                queue.append(h)
    return seen


def verify_p_group(rep, p, budget=DEFAULT_CLOSURE_BUDGET):
    """Check that rep factors through a p-group.

    Sufficient and necessary for a monomial rep: the permutation parts generate
    a group of p-power order and every diagonal entry has p-power order.
    """
    order = len(permutation_closure([g.perm for g in rep.generators], budget))
    max_diag = max(d.order for g in rep.generators for d in g.diag)
    reasons = []
    if not _is_power_of(order, p):
        reasons.append(f"permutation group order {order} is not a power of {p}")
    bad = sorted({d.order for g in rep.generators for d in g.diag if not _is_power_of(d.order, p)})
    if bad:
        reasons.append(f"diagonal entries of order {bad} are not {p}-power roots of unity")
    return PGroupCertificate(p, not reasons, order, max_diag, rep.k, "; ".join(reasons))


@dataclass(frozen=True)
class DetGroup:
    """The cyclic group of roots of unity generated by the generator determinants."""
    order: int
    generator: RootOfUnity

    @property
    def real_units(self):
        return (1, -1) if self.order % 2 == 0 else (1,)

    def __contains__(self, z):
        return self.order % z.order == 0

    def to_json(self):
        return {"order": self.order, "generator": self.generator.to_json(),
                "real_intersection": list(self.real_units)}


def det_group(rep):
    order = lcm(1, *(g.det().order for g in rep.generators))
    return DetGroup(order, RootOfUnity(1, order))


def eigenvalue_counter(m):
    return Counter(eigenvalues(m))


def load_rep(path):
    return MonomialRep.load(Path(path))


def bing_fig8_rep():
    """The 8-dimensional rep over Z[zeta_8] used for the Bing double of 4_1."""
    x = MonomialMatrix(
        [1, 2, 3, 0, 5, 6, 7, 4],
        [RootOfUnity(j, 8) for j in (0, 0, 6, 1, 4, 0, 5, 1)],
    )
    y = MonomialMatrix(
        [4, 7, 6, 5, 0, 3, 2, 1],
        [RootOfUnity(j, 8) for j in (2, 4, 3, 1, 1, 7, 3, 6)],
    )
    return MonomialRep([x, y], conductor=8)


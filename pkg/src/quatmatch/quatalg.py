"""Rational quaternion algebras (a,b | Q): elements, norms, local invariants.

An algebra is presented by structure constants (a, b): i^2 = a, j^2 = b,
ij = -ji = k.  The reduced norm is the quadratic form

    nrd(x0 + x1 i + x2 j + x3 k) = x0^2 - a x1^2 - b x2^2 + ab x3^2,

the reduced trace is 2 x0, and conjugation negates the pure part.  The
bilinear form used everywhere is (x, y) = trd(x * conj(y)), so that
(x, x) = 2 nrd(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import OO, hilbert_symbol


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def ramified_places(a: int, b: int):
    """(finite ramified primes, True if the real place ramifies)."""
    primes = set(_prime_factors(2 * abs(a) * abs(b)))
    finite = sorted(p for p in primes if hilbert_symbol(a, b, p) == -1)
    return finite, hilbert_symbol(a, b, OO) == -1


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")

    @property
    def ramified_primes(self):
        return _ram_cache(self.a, self.b)[0]

    @property
    def ramified_at_infinity(self) -> bool:
        return _ram_cache(self.a, self.b)[1]

    @property
    def discriminant(self) -> int:
        return math.prod(self.ramified_primes)

    @property
    def is_definite(self) -> bool:
        return self.ramified_at_infinity

    def element(self, x0, x1=0, x2=0, x3=0) -> "QuatElement":
        return QuatElement(self, (Fraction(x0), Fraction(x1),
                                  Fraction(x2), Fraction(x3)))

    def one(self) -> "QuatElement":
        return self.element(1)

    def basis(self):
        return (self.element(1), self.element(0, 1),
                self.element(0, 0, 1), self.element(0, 0, 0, 1))

    def local_ramified_model(self, p: int) -> "RamifiedModel":
        if p not in self.ramified_primes:
            raise ValueError("%d does not divide the discriminant %d"
                             % (p, self.discriminant))
        return ramified_model(p)

    def __repr__(self):
        return "QuaternionAlgebra(a=%d, b=%d)" % (self.a, self.b)


@lru_cache(maxsize=None)
def _ram_cache(a, b):
    finite, inf = ramified_places(a, b)
    return tuple(finite), inf


@dataclass(frozen=True)
class QuatElement:
    algebra: QuaternionAlgebra
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(Fraction(c) for c in self.coords))
        if len(self.coords) != 4:
            raise ValueError("quaternion elements have 4 coordinates")

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        self._check(other)
        return QuatElement(self.algebra,
                           tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return QuatElement(self.algebra,
                           tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuatElement(self.algebra,
                               tuple(x * other for x in self.coords))
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return QuatElement(self.algebra, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def conjugate(self) -> "QuatElement":
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def reduced_trace(self) -> Fraction:
        return 2 * self.coords[0]

    def reduced_norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def pairing(self, other) -> Fraction:
        """(x, y) = trd(x * conj(y)); satisfies (x, x) = 2 nrd(x)."""
        return (self * other.conjugate()).reduced_trace()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def reduced_norm(x: QuatElement) -> Fraction:
    return x.reduced_norm()


def reduced_trace(x: QuatElement) -> Fraction:
    return x.reduced_trace()


def conjugate(x: QuatElement) -> QuatElement:
    return x.conjugate()


# ---------------------------------------------------------------------------
# construction from a target discriminant

def _candidate_values(bound: int, definite: bool):
    """Structure-constant candidates ordered by magnitude (positives first)."""
    out = [-1]
    for v in range(2, bound + 1):
        if definite:
            out.append(-v)
        else:
            out.append(v)
            out.append(-v)
    return out


def construct_algebra(D: int) -> QuaternionAlgebra:
    """The quaternion algebra over Q ramified exactly at the primes of D.

    D must be squarefree.  The real place ramifies iff D has an odd number
    of prime factors; in that case the returned constants are negative so
    the norm form is positive definite.  The search over candidate pairs is
    deterministic (magnitude-lexicographic), so the result is reproducible.
    """
    if D < 1 or not is_squarefree(D):
        raise ValueError("discriminant must be a squarefree positive integer")
    if D == 1:
        return QuaternionAlgebra(1, 1)
    target = tuple(_prime_factors(D))
    definite = len(target) % 2 == 1
    for bound in (50, 200, 1000):
        values = _candidate_values(bound, definite)
        for a in values:
            for b in values:
                finite, inf = _ram_cache(a, b)
                if finite == target and inf == definite:
                    return QuaternionAlgebra(a, b)
    raise ArithmeticError("no structure constants found for D=%d" % D)


# ---------------------------------------------------------------------------
# the local division algebra at a ramified prime

@dataclass(frozen=True)
class RamifiedModel:
    """Local model of the p-adic division quaternion algebra.

    The unramified quadratic extension is generated by u with
    u^2 = t*u - n, where x^2 - t x + n is irreducible mod p and (t, n) is
    the lexicographically least such pair.  A uniformizer pi satisfies
    pi^2 = p and pi * r = conj(r) * pi for r in the quadratic subfield.
    Elements are written alpha + beta*pi with alpha, beta = (x + y*u).
    """
    p: int
    t: int
    n: int

    def d_value(self, k: int, l: int) -> int:
        """Norm-form value k^2 + k*l*t + l^2*n of k + l*u."""
        return k * k + k * l * self.t + l * l * self.n

    def quad_mul(self, x, y):
        """(x1 + x2 u)(y1 + y2 u) in coordinates, using u^2 = t*u - n."""
        x1, x2 = x
        y1, y2 = y
        return (x1 * y1 - self.n * x2 * y2,
                x1 * y2 + x2 * y1 + self.t * x2 * y2)

    def quad_conj(self, x):
        x1, x2 = x
        return (x1 + self.t * x2, -x2)

    def quad_norm(self, x):
        x1, x2 = x
        return x1 * x1 + self.t * x1 * x2 + self.n * x2 * x2

    def mul(self, x, y):
        """Product of (alpha, beta) pairs: alpha,beta are coordinate 2-tuples."""
        ax, bx = x
        ay, by = y
        alpha = tuple(u + self.p * v for u, v in
                      zip(self.quad_mul(ax, ay),
                          self.quad_mul(bx, self.quad_conj(by))))
        beta = tuple(u + v for u, v in
                     zip(self.quad_mul(ax, by),
                         self.quad_mul(bx, self.quad_conj(ay))))
        return (alpha, beta)

    def involution(self, x):
        ax, bx = x
        return (self.quad_conj(ax), tuple(-c for c in bx))

    def nrd(self, x):
        ax, bx = x
        return self.quad_norm(ax) - self.p * self.quad_norm(bx)


@lru_cache(maxsize=None)
def ramified_model(p: int) -> RamifiedModel:
    for t in range(p):
        for n in range(p):
            if all((x * x - t * x + n) % p for x in range(p)):
                return RamifiedModel(p, t, n)
    raise ArithmeticError("no irreducible quadratic mod %d" % p)

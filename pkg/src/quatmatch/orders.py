"""Rank-4 lattices and orders in a rational quaternion algebra.

A lattice is stored by a canonical pair (den, mat): `mat` is the row
Hermite normal form of an integer 4x4 matrix and the basis vectors are the
rows of mat/den in the coordinates 1, i, j, k of the ambient algebra.  The
canonical form makes equality, hashing and serialization deterministic.

The Gram matrix is taken with respect to (x, y) = trd(x * conj(y)), whose
determinant equals the square of the reduced discriminant; a maximal order
of B(D) has |det| = D^2 and an Eichler order of level N has |det| = (DN)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .matrices import congruence_kernel, det4, hnf_rows, rat_inverse
from .quatalg import QuatElement, QuaternionAlgebra


def _prime_power_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _canonical_den_mat(rows):
    """Canonical (den, HNF matrix) for the lattice spanned by Fraction rows."""
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    mat = [[int(x * den) for x in row] for row in rows]
    mat = hnf_rows(mat)
    if len(mat) != 4:
        raise ValueError("lattice is not of full rank 4")
    g = den
    for row in mat:
        for x in row:
            g = math.gcd(g, abs(x))
    if g > 1:
        den //= g
        mat = [[x // g for x in row] for row in mat]
    return den, tuple(tuple(row) for row in mat)


@dataclass(frozen=True)
class OrderLattice:
    algebra: QuaternionAlgebra
    den: int
    mat: tuple
    # (D, N) tag set by eichler_order; informative only, not part of identity
    level: tuple | None = field(default=None, compare=False)

    # -- construction ---------------------------------------------------------
    @staticmethod
    def from_rows(algebra, rows, level=None) -> "OrderLattice":
        frac_rows = [[Fraction(x) for x in row] for row in rows]
        den, mat = _canonical_den_mat(frac_rows)
        return OrderLattice(algebra, den, mat, level)

    @staticmethod
    def from_elements(elements, level=None) -> "OrderLattice":
        algebra = elements[0].algebra
        return OrderLattice.from_rows(algebra, [e.coords for e in elements], level)

    # -- basic data -----------------------------------------------------------
    def basis_rows(self):
        return [[Fraction(x, self.den) for x in row] for row in self.mat]

    def basis(self):
        return [QuatElement(self.algebra, tuple(row)) for row in self.basis_rows()]

    def gram(self):
        """Matrix of (x, y) = trd(x conj(y)) on the basis."""
        bas = self.basis()
        return [[bas[r].pairing(bas[s]) for s in range(4)] for r in range(4)]

    def q_gram(self):
        """Matrix A with nrd(sum c_r b_r) = c A c^T; A = gram / 2."""
        return [[x / 2 for x in row] for row in self.gram()]

    def gram_det(self) -> Fraction:
        return det4(self.gram())

    def contains(self, x: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def coordinates(self, x: QuatElement):
        """Coordinates of x with respect to the lattice basis (Fractions)."""
        inv = _basis_inverse(self)
        return [sum(Fraction(x.coords[k]) * inv[k][r] for k in range(4))
                for r in range(4)]

    def is_order(self) -> bool:
        bas = self.basis()
        if not self.contains(self.algebra.one()):
            return False
        for u in bas:
            if u.reduced_trace().denominator != 1:
                return False
            if u.reduced_norm().denominator != 1:
                return False
        return all(self.contains(u * v) for u in bas for v in bas)

    def is_even_integral(self) -> bool:
        """nrd takes integer values on the lattice (checked on sums of pairs)."""
        bas = self.basis()
        for r in range(4):
            if bas[r].reduced_norm().denominator != 1:
                return False
            for s in range(r + 1, 4):
                if (bas[r] + bas[s]).reduced_norm().denominator != 1:
                    return False
        return True

    # -- serialization ---------------------------------------------------------
    def to_text(self) -> str:
        cells = " ".join(str(x) for row in self.mat for x in row)
        return "%d %s" % (self.den, cells)

    @staticmethod
    def from_text(algebra, text, level=None) -> "OrderLattice":
        parts = [int(x) for x in text.split()]
        if len(parts) != 17:
            raise ValueError("malformed lattice text")
        den = parts[0]
        rows = [[Fraction(parts[1 + 4 * r + c], den) for c in range(4)]
                for r in range(4)]
        return OrderLattice.from_rows(algebra, rows, level)

    def sort_key(self):
        return (self.den,) + self.mat


def _basis_inverse(lat: OrderLattice):
    key = (lat.algebra, lat.den, lat.mat)
    inv = _INme_cache.get(key)
    if inv is None:
        inv = rat_inverse(lat.basis_rows())
        _INme_cache[key] = inv
    return inv


_INme_cache: dict = {}


# ---------------------------------------------------------------------------
# lattice operations

def lattice_sum(a: OrderLattice, b: OrderLattice) -> OrderLattice:
    return OrderLattice.from_rows(a.algebra, a.basis_rows() + b.basis_rows())


def lattice_product(a: OrderLattice, b: OrderLattice) -> OrderLattice:
    """Lattice spanned by all products x*y, x in a, y in b."""
    rows = []
    for u in a.basis():
        for v in b.basis():
            rows.append((u * v).coords)
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    mat = hnf_rows([[int(x * den) for x in row] for row in rows])
    return OrderLattice.from_rows(a.algebra,
                                  [[Fraction(x, den) for x in row] for row in mat])


def conjugate_lattice(a: OrderLattice) -> OrderLattice:
    return OrderLattice.from_elements([x.conjugate() for x in a.basis()])


def scale_lattice(a: OrderLattice, c) -> OrderLattice:
    c = Fraction(c)
    return OrderLattice.from_rows(a.algebra,
                                  [[x * c for x in row] for row in a.basis_rows()])


def dual_lattice(lat: OrderLattice) -> OrderLattice:
    """Dual with respect to (x, y) = trd(x conj(y))."""
    gram = lat.gram()
    det = det4(gram)
    if det == 0:
        raise ValueError("degenerate Gram matrix")
    ginv = rat_inverse(gram)
    rows = lat.basis_rows()
    dual_rows = [[sum(ginv[r][k] * rows[k][c] for k in range(4)) for c in range(4)]
                 for r in range(4)]
    return OrderLattice.from_rows(lat.algebra, dual_rows)


def dual_index(lat: OrderLattice) -> Fraction:
    """[L_dual : L] as a positive rational; equals |det gram| when integral."""
    return abs(lat.gram_det())


def index_in(sub: OrderLattice, sup: OrderLattice) -> Fraction:
    """Index [sup : sub] (a positive rational for commensurable lattices)."""
    det_sub = det4(sub.basis_rows())
    det_sup = det4(sup.basis_rows())
    return abs(Fraction(det_sub) / Fraction(det_sup))


# ---------------------------------------------------------------------------
# multiplication tables (for finite-ring computations inside an order)

def multiplication_table(order: OrderLattice):
    """T[r][s] = integer coordinates of b_r * b_s in the order's basis."""
    bas = order.basis()
    table = []
    for u in bas:
        row = []
        for v in bas:
            coords = order.coordinates(u * v)
            if any(c.denominator != 1 for c in coords):
                raise ValueError("lattice is not closed under multiplication")
            row.append(tuple(int(c) for c in coords))
        table.append(row)
    return table


def _vec_mul(table, x, y, mod):
    out = [0, 0, 0, 0]
    for r in range(4):
        xr = x[r]
        if xr:
            for s in range(4):
                ys = y[s]
                if ys:
                    t = table[r][s]
                    f = xr * ys
                    out[0] += f * t[0]
                    out[1] += f * t[1]
                    out[2] += f * t[2]
                    out[3] += f * t[3]
    return tuple(c % mod for c in out)


# ---------------------------------------------------------------------------
# maximal orders

def standard_order(algebra: QuaternionAlgebra) -> OrderLattice:
    return OrderLattice.from_elements(list(algebra.basis()))


def _multiplicative_closure(algebra, rows, max_rounds=24):
    """Smallest multiplicatively closed lattice containing the given rows.

    Returns None if closure does not stabilise quickly or the result has a
    non-integral Gram (the candidate generates no order).
    """
    lat = OrderLattice.from_rows(algebra, rows)
    for _ in range(max_rounds):
        closed = lattice_product(lat, lat)
        merged = lattice_sum(lat, closed)
        if merged == lat:
            return lat
        lat = merged
        bas = lat.basis()
        if any(x.reduced_trace().denominator != 1
               or x.reduced_norm().denominator != 1 for x in bas):
            return None
    return None


def maximal_order(algebra: QuaternionAlgebra) -> OrderLattice:
    """A maximal order, produced by saturating Z<1,i,j,k> prime by prime.

    Termination certificate: the Gram determinant of the result equals D^2,
    the square of the algebra's discriminant, and multiplicative closure
    plus integrality are verified on the way out.
    """
    target = algebra.discriminant ** 2
    lat = standard_order(algebra)
    current = abs(lat.gram_det())
    while current > target:
        excess = Fraction(current, target)
        assert excess.denominator == 1
        primes = [p for p, _ in _prime_power_factors(int(excess))]
        enlarged = False
        for p in primes:
            bigger = _enlarge_at(algebra, lat, p)
            if bigger is not None:
                lat = bigger
                current = abs(lat.gram_det())
                enlarged = True
                break
        if not enlarged:
            raise ArithmeticError("saturation failure at discriminant %s" % current)
    if current != target or not lat.is_order():
        raise ArithmeticError("maximal order certificate failed")
    return OrderLattice(lat.algebra, lat.den, lat.mat,
                        level=(algebra.discriminant, 1))


def _enlarge_at(algebra, lat, p):
    """One enlargement step: adjoin an integral element of (1/p)L, close up."""
    bas = lat.basis()
    import itertools
    for coeffs in itertools.product(range(p), repeat=4):
        if not any(coeffs):
            continue
        num = QuatElement(algebra, (0, 0, 0, 0))
        for c, b in zip(coeffs, bas):
            if c:
                num = num + b * c
        x = num * Fraction(1, p)
        if x.reduced_trace().denominator != 1:
            continue
        if x.reduced_norm().denominator != 1:
            continue
        if lat.contains(x):
            continue
        closed = _multiplicative_closure(algebra, lat.basis_rows() + [list(x.coords)])
        if closed is None:
            continue
        if abs(closed.gram_det()) < abs(lat.gram_det()) and closed.is_order():
            return closed
    return None


# ---------------------------------------------------------------------------
# local splitting O/p^k O  ~  2x2 matrices over Z/p^k

@dataclass(frozen=True)
class SplitFrame:
    """Matrix-unit frame for O/p^k O at a prime p not dividing the discriminant.

    e[i][j] are coordinate vectors (in the order's basis, mod p^k) satisfying
    the sixteen matrix-unit relations; `coord(x, i, j)` extracts the (i, j)
    matrix entry of a coordinate vector x, so `coord(x, 1, 0)` is the
    lower-left entry used by the Eichler congruence.
    """
    order: OrderLattice
    p: int
    k: int
    units: tuple  # ((e11, e12), (e21, e22)) coordinate 4-tuples
    functionals: tuple  # functionals[i][j][s] = coord of b_s at entry (i,j)

    @property
    def modulus(self):
        return self.p ** self.k

    def coord(self, xvec, i, j):
        f = self.functionals[i][j]
        return sum(f[s] * xvec[s] for s in range(4)) % self.modulus


def _order_one_coords(order):
    one = order.coordinates(order.algebra.one())
    if any(c.denominator != 1 for c in one):
        raise ValueError("order does not contain 1")
    return tuple(int(c) for c in one)


def _trd_vector(order):
    return tuple(int(b.reduced_trace()) for b in order.basis())


def local_splitting(order: OrderLattice, p: int, k: int = 1) -> SplitFrame:
    """Split O/p^k O as 2x2 matrices over Z/p^k (requires p unramified).

    The idempotent is found by exhaustive search mod p (deterministic,
    lexicographic), lifted by the Newton step e <- 3e^2 - 2e^3, then
    completed to a matrix-unit frame; all sixteen relations are verified.
    """
    if p in order.algebra.ramified_primes:
        raise ValueError("algebra is ramified at %d: no splitting" % p)
    table = multiplication_table(order)
    one = _order_one_coords(order)
    modulus = p ** k

    e = None
    import itertools
    for cand in itertools.product(range(p), repeat=4):
        if not any(cand):
            continue
        if all((a - b) % p == 0 for a, b in zip(cand, one)):
            continue
        sq = _vec_mul(table, cand, cand, p)
        if sq == tuple(c % p for c in cand):
            e = cand
            break
    if e is None:
        raise ArithmeticError("no nontrivial idempotent mod %d" % p)

    m = p
    while m < modulus:
        m = min(m * m, modulus)
        sq = _vec_mul(table, e, e, m)
        cube = _vec_mul(table, sq, e, m)
        e = tuple((3 * sq[t] - 2 * cube[t]) % m for t in range(4))
    assert _vec_mul(table, e, e, modulus) == tuple(c % modulus for c in e)

    f = tuple((one[t] - e[t]) % modulus for t in range(4))  # complementary idempotent
    bas_vecs = [tuple(int(v == s) for v in range(4)) for s in range(4)]

    def sandwich(left, mid, right):
        return _vec_mul(table, _vec_mul(table, left, mid, modulus), right, modulus)

    e12 = next((v for v in (sandwich(e, b, f) for b in bas_vecs)
                if any(c % p for c in v)), None)
    e21raw = next((v for v in (sandwich(f, b, e) for b in bas_vecs)
                   if any(c % p for c in v)), None)
    if e12 is None or e21raw is None:
        raise ArithmeticError("failed to build off-diagonal matrix units")
    prod = _vec_mul(table, e12, e21raw, modulus)
    # prod = lambda * e with lambda a unit
    idx = next(t for t in range(4) if e[t] % p)
    lam = (prod[idx] * pow(e[idx], -1, modulus)) % modulus
    if lam % p == 0 or any((prod[t] - lam * e[t]) % modulus for t in range(4)):
        raise ArithmeticError("off-diagonal pairing degenerate")
    lam_inv = pow(lam, -1, modulus)
    e21 = tuple((lam_inv * c) % modulus for c in e21raw)

    units = ((e, e12), (e21, f))
    for i in range(2):
        for j in range(2):
            for r in range(2):
                for s in range(2):
                    expect = units[i][s] if j == r else (0, 0, 0, 0)
                    got = _vec_mul(table, units[i][j], units[r][s], modulus)
                    if got != tuple(c % modulus for c in expect):
                        raise ArithmeticError("matrix-unit relations failed")
    if tuple((units[0][0][t] + units[1][1][t]) % modulus for t in range(4)) \
            != tuple(c % modulus for c in one):
        raise ArithmeticError("idempotents do not sum to 1")

    # entry functionals: coord (i,j) of x equals trd(e_ji * x)
    trd_vec = _trd_vector(order)
    functionals = []
    for i in range(2):
        row = []
        for j in range(2):
            eji = units[j][i]
            f_entry = []
            for s in range(4):
                prod_v = _vec_mul(table, eji, bas_vecs[s], modulus)
                f_entry.append(sum(prod_v[t] * trd_vec[t] for t in range(4)) % modulus)
            row.append(tuple(f_entry))
        functionals.append(tuple(row))
    return SplitFrame(order, p, k, units, tuple(functionals))


# ---------------------------------------------------------------------------
# Eichler orders

def eichler_order(omax: OrderLattice, N: int) -> OrderLattice:
    """The level-N Eichler suborder of a maximal order.

    At each prime power p^k || N the suborder is cut out by the congruence
    "lower-left matrix entry = 0 mod p^k" through a splitting of O/p^k O;
    the result has index N in the maximal order and Gram determinant (DN)^2.
    """
    algebra = omax.algebra
    D = algebra.discriminant
    if math.gcd(N, D) != 1:
        raise ValueError("level must be coprime to the discriminant")
    if N < 1:
        raise ValueError("level must be positive")
    coords_mat = [[1 if r == s else 0 for s in range(4)] for r in range(4)]
    for p, k in _prime_power_factors(N):
        frame = local_splitting(omax, p, k)
        mod = p ** k
        cond = []
        for row in coords_mat:
            val = frame.coord(tuple(row), 1, 0)
            cond.append(val % mod)
        kern = congruence_kernel([cond], mod)
        coords_mat = [[sum(kern[r][t] * coords_mat[t][s] for t in range(4))
                       for s in range(4)] for r in range(4)]
    base = omax.basis_rows()
    rows = [[sum(Fraction(coords_mat[r][t]) * base[t][c] for t in range(4))
             for c in range(4)] for r in range(4)]
    result = OrderLattice.from_rows(algebra, rows, level=(D, N))
    if index_in(result, omax) != N:
        raise ArithmeticError("Eichler order has wrong index")
    if not result.is_order() or not result.is_even_integral():
        raise ArithmeticError("Eichler order certificate failed")
    if abs(result.gram_det()) != (D * N) ** 2:
        raise ArithmeticError("Eichler order has wrong discriminant")
    return result

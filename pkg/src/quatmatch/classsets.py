"""Definite side: ideal class sets, vector counts, theta series, genus averages.

Pipeline:

* `ideal_class_set` enumerates right-ideal classes of a definite Eichler
  order by p-neighbor traversal; completeness is certified by the exact
  mass identity  sum 1/w_i = D N/12 * prod_{p|D}(1-1/p) * prod_{p|N}(1+1/p).
* Pair lattices J*conj(I), with the reduced norm scaled by 1/(nrd I nrd J),
  realise the genus of the order.  The genus average r_{D,N}(m) is the
  automorphism-weighted average of representation numbers over the distinct
  isometry classes of those lattices.
* All vector counting is exact lattice-point enumeration with rational
  Cholesky data (no floating point anywhere).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .matrices import congruence_kernel, det4
from .orders import (
    OrderLattice,
    conjugate_lattice,
    eichler_order,
    index_in,
    lattice_product,
    local_splitting,
    maximal_order,
    scale_lattice,
)
from .quatalg import QuaternionAlgebra, construct_algebra


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


def mass_formula(D: int, N: int) -> Fraction:
    """Exact mass D*N/12 * prod_{p|D}(1 - 1/p) * prod_{p|N}(1 + 1/p)."""
    mass = Fraction(D * N, 12)
    for p in _prime_factors(D):
        mass *= Fraction(p - 1, p)
    for p in _prime_factors(N):
        mass *= Fraction(p + 1, p)
    return mass


# ---------------------------------------------------------------------------
# exact vector enumeration (rational Cholesky, ellipsoid pruning)

def _as_qgram(lattice_or_gram):
    if isinstance(lattice_or_gram, OrderLattice):
        return lattice_or_gram.q_gram()
    return [[Fraction(x) for x in row] for row in lattice_or_gram]


def _ldl(qgram):
    """Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2, exact."""
    a = [[Fraction(qgram[i][j] + qgram[j][i], 2) for j in range(4)] for i in range(4)]
    d = [Fraction(0)] * 4
    u = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        val = a[i][i] - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if val <= 0:
            raise ValueError("form is not positive definite")
        d[i] = val
        for j in range(i + 1, 4):
            aij = a[i][j] - sum(d[k] * u[k][i] * u[k][j] for k in range(i))
            u[i][j] = aij / val
    return d, u


def _enumerate(qgram, mmax, leaf):
    """Call leaf(value, coords) for every x in Z^4 with Q(x) <= mmax."""
    d, u = _ldl(qgram)
    x = [0, 0, 0, 0]

    def rec(i, used):
        rem = mmax - used
        off = sum(u[i][j] * x[j] for j in range(i + 1, 4)) if i < 3 else Fraction(0)
        # integer bound: |x_i + off| <= sqrt(rem / d_i), with exact filtering
        q = rem / d[i]
        s_hi = math.isqrt(int(q)) + 1
        on, od = off.numerator, off.denominator
        dn, dd = d[i].numerator, d[i].denominator
        rn, rd = rem.numerator, rem.denominator
        rhs = rn * dd * od * od * rd  # compare dn*(xi*od+on)^2 * rd^2 <= rhs? no:
        # t = dn*(xi*od+on)^2 / (dd*od^2);  t <= rem  <=>  dn*(xi*od+on)^2 * rd <= rn*dd*od^2
        rhs = rn * dd * od * od
        lo = math.ceil(-off - s_hi)
        hi = math.floor(-off + s_hi)
        den_t = dd * od * od
        for xi in range(lo, hi + 1):
            w = xi * od + on
            lhs = dn * w * w
            if lhs * rd > rhs:
                continue
            t = Fraction(lhs, den_t)
            x[i] = xi
            if i == 0:
                leaf(used + t, x)
            else:
                rec(i - 1, used + t)
        x[i] = 0

    rec(3, Fraction(0))


def theta_counts(lattice_or_gram, mmax: int):
    """[r(0), r(1), ..., r(mmax)] for an integral positive definite form."""
    qgram = _as_qgram(lattice_or_gram)
    counts = [0] * (mmax + 1)

    def leaf(value, _x):
        if value.denominator == 1:
            v = int(value)
            if v <= mmax:
                counts[v] += 1

    _enumerate(qgram, Fraction(mmax), leaf)
    return counts


def count_vectors(lattice_or_gram, m: int) -> int:
    """Number of lattice vectors of norm exactly m (exact enumeration)."""
    if m < 0:
        return 0
    qgram = _as_qgram(lattice_or_gram)
    total = 0

    def leaf(value, _x):
        nonlocal total
        if value == m:
            total += 1

    _enumerate(qgram, Fraction(m), leaf)
    return total


def list_vectors(lattice_or_gram, m: int):
    """All coordinate vectors of norm exactly m."""
    qgram = _as_qgram(lattice_or_gram)
    out = []

    def leaf(value, xvec):
        if value == m:
            out.append(tuple(xvec))

    _enumerate(qgram, Fraction(m), leaf)
    return out


# ---------------------------------------------------------------------------
# lattice reduction + isometry testing (exact, rank 4)

def _gram_bilinear(qgram):
    return [[qgram[i][j] + qgram[j][i] for j in range(4)] for i in range(4)]


def lll_reduce_qgram(qgram):
    """LLL-reduce the form (delta = 3/4); returns (new qgram, transform U)."""
    g = [[Fraction(qgram[i][j] + qgram[j][i], 2) for j in range(4)] for i in range(4)]
    u_mat = [[1 if i == j else 0 for j in range(4)] for i in range(4)]

    def inner(i, j):
        return sum(u_mat[i][a] * g[a][b] * u_mat[j][b] for a in range(4) for b in range(4))

    k = 1
    guard = 0
    while k < 4 and guard < 500:
        guard += 1
        # size-reduce row k against rows < k via Gram-Schmidt coefficients
        bstar = _gso(u_mat, g)
        for j in range(k - 1, -1, -1):
            mu = bstar[1][k][j]
            if abs(mu) > Fraction(1, 2):
                r = _round_half(mu)
                u_mat[k] = [a - r * b for a, b in zip(u_mat[k], u_mat[j])]
                bstar = _gso(u_mat, g)
        bnorm, mu = bstar
        if bnorm[k] >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * bnorm[k - 1]:
            k += 1
        else:
            u_mat[k], u_mat[k - 1] = u_mat[k - 1], u_mat[k]
            k = max(k - 1, 1)
    new = [[sum(u_mat[i][a] * g[a][b] * u_mat[j][b]
                for a in range(4) for b in range(4)) for j in range(4)]
           for i in range(4)]
    return new, u_mat


def _round_half(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _gso(u_mat, g):
    """GSO norms and mu coefficients of the rows of u_mat w.r.t. the form g."""
    def dot(i, j):
        return sum(u_mat[i][a] * g[a][b] * u_mat[j][b]
                   for a in range(4) for b in range(4))

    mu = [[Fraction(0)] * 4 for _ in range(4)]
    bnorm = [Fraction(0)] * 4
    for i in range(4):
        bnorm[i] = dot(i, i)
        for j in range(i):
            mu[i][j] = (dot(i, j) - sum(mu[i][t] * mu[j][t] * bnorm[t]
                                        for t in range(j))) / bnorm[j]
            bnorm[i] -= mu[i][j] ** 2 * bnorm[j]
    return bnorm, mu


def _isometry_search(qA, qB, count_all):
    """Isometries (Z^4, qB) -> (Z^4, qA)... mapped as images of qA's basis in qB.

    Returns the number of isometries if count_all, else True/False for
    existence.  An isometry is a unimodular integer matrix U with
    U * bil(qB) * U^T = bil(qA).
    """
    bilA = _gram_bilinear(qA)
    bilB = _gram_bilinear(qB)
    diag_norms = [qA[i][i] for i in range(4)]
    cand = []
    for i in range(4):
        n = diag_norms[i]
        if n.denominator != 1:
            return 0 if count_all else False
        cand.append(list_vectors(qB, int(n)))
    order = sorted(range(4), key=lambda i: len(cand[i]))
    twoqB = [[qB[i][j] + qB[j][i] for j in range(4)] for i in range(4)]

    def bilin(v, w):
        return sum(v[a] * twoqB[a][b] * w[b] for a in range(4) for b in range(4))

    placed = {}
    count = 0
    found = False

    def rec(depth):
        nonlocal count, found
        if found and not count_all:
            return
        if depth == 4:
            umat = [placed[i] for i in range(4)]
            if abs(det4([list(r) for r in umat])) == 1:
                count += 1
                found = True
            return
        i = order[depth]
        for v in cand[i]:
            ok = True
            for j in placed:
                if bilin(v, placed[j]) != bilA[i][j]:
                    ok = False
                    break
            if ok:
                placed[i] = v
                rec(depth + 1)
                del placed[i]
                if found and not count_all:
                    return

    rec(0)
    return count if count_all else found


def isometric(qA, qB) -> bool:
    """Exact isometry test for two integral positive definite forms."""
    ra, _ = lll_reduce_qgram(qA)
    rb, _ = lll_reduce_qgram(qB)
    qa = [[Fraction(x) for x in row] for row in ra]
    qb = [[Fraction(x) for x in row] for row in rb]
    if det4(qa) != det4(qb):
        return False
    return bool(_isometry_search(qa, qb, count_all=False))


def automorphism_count(qgram) -> int:
    """Order of the full isometry group of the form (improper maps included)."""
    red, _ = lll_reduce_qgram(qgram)
    q = [[Fraction(x) for x in row] for row in red]
    return _isometry_search(q, q, count_all=True)


# ---------------------------------------------------------------------------
# right ideals

@dataclass(frozen=True)
class RightIdeal:
    lattice: OrderLattice
    right_order: OrderLattice
    nrd: Fraction

    def sort_key(self):
        return (self.nrd, self.lattice.sort_key())


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def ideal_reduced_norm(lattice: OrderLattice) -> Fraction:
    """Positive generator of the fractional ideal generated by nrd on the lattice."""
    qg = lattice.q_gram()
    g = Fraction(0)
    for i in range(4):
        g = _frac_gcd(g, qg[i][i])
        for j in range(i + 1, 4):
            g = _frac_gcd(g, qg[i][j] + qg[j][i])
    return g


def make_right_ideal(lattice: OrderLattice, right_order: OrderLattice) -> RightIdeal:
    nrd = ideal_reduced_norm(lattice)
    D, N = right_order.level
    expected = nrd ** 4 * (D * N) ** 2
    if abs(lattice.gram_det()) != expected:
        raise ArithmeticError("ideal norm/Gram scaling is inconsistent")
    return RightIdeal(lattice, right_order, nrd)


def left_order(ideal: RightIdeal) -> OrderLattice:
    """The left order (1/nrd I) * I * conj(I) of a locally principal ideal."""
    prod = lattice_product(ideal.lattice, conjugate_lattice(ideal.lattice))
    ol = scale_lattice(prod, Fraction(1, ideal.nrd))
    if not ol.is_order():
        raise ArithmeticError("left order computation failed")
    return ol


def unit_weight(order: OrderLattice) -> int:
    """|units|/2 = half the number of norm-1 vectors of a definite order."""
    if not order.algebra.is_definite:
        raise ValueError("unit weights require a definite algebra")
    n = count_vectors(order, 1)
    if n % 2:
        raise ArithmeticError("unit count must be even")
    return n // 2


_FRAME_CACHE: dict = {}


def _frame_mod_p(order: OrderLattice, p: int):
    key = (order.algebra, order.den, order.mat, p)
    frame = _FRAME_CACHE.get(key)
    if frame is None:
        frame = local_splitting(order, p, 1)
        _FRAME_CACHE[key] = frame
    return frame


def p_neighbors(ideal: RightIdeal, p: int):
    """The p+1 right sub-ideals of index p^2, one per line of the residue module."""
    order = ideal.right_order
    D, N = order.level
    if D * N % p == 0:
        raise ValueError("neighbor prime must be coprime to the level data")
    frame = _frame_mod_p(order, p)
    bas_rows = ideal.lattice.basis_rows()
    coords = []
    for row in bas_rows:
        x = order.coordinates(order.algebra.element(*row))
        coords.append(tuple(int(c) for c in x))
    entries = [[frame.coord(c, i, j) for c in coords] for i in range(2) for j in range(2)]
    c11, c12, c21, c22 = entries
    out = []
    lines = [(1, t) for t in range(p)] + [(0, 1)]
    for w1, w2 in lines:
        # column space of the residue matrix inside the line spanned by (w1, w2)
        v1 = [(c11[r] * w2 - c21[r] * w1) % p for r in range(4)]
        v2 = [(c12[r] * w2 - c22[r] * w1) % p for r in range(4)]
        kern = congruence_kernel([v1, v2], p)
        rows = [[sum(Fraction(kern[r][t]) * bas_rows[t][c] for t in range(4))
                 for c in range(4)] for r in range(4)]
        sub = OrderLattice.from_rows(order.algebra, rows)
        if index_in(sub, ideal.lattice) != p * p:
            raise ArithmeticError("neighbor does not have index p^2")
        out.append(make_right_ideal(sub, order))
    return out


def pair_lattice(ii: RightIdeal, jj: RightIdeal) -> OrderLattice:
    """The lattice J * conj(I) (unscaled); carries nrd/(nrd I * nrd J)."""
    return lattice_product(jj.lattice, conjugate_lattice(ii.lattice))


def pair_q_gram(ii: RightIdeal, jj: RightIdeal):
    """Integral normalized Q-Gram of the pair lattice Hom-style form."""
    prod = pair_lattice(ii, jj)
    scale = Fraction(1, ii.nrd * jj.nrd)
    qg = [[x * scale for x in row] for row in prod.q_gram()]
    for i in range(4):
        if qg[i][i].denominator != 1:
            raise ArithmeticError("pair lattice normalization is not integral")
        for j in range(4):
            if (qg[i][j] + qg[j][i]).denominator != 1:
                raise ArithmeticError("pair lattice bilinear form is not integral")
    return qg


def ideals_equivalent(a: RightIdeal, b: RightIdeal) -> bool:
    """True iff a = x*b for some invertible x (minimum-vector criterion)."""
    if a.right_order != b.right_order:
        raise ValueError("ideals must share their right order")
    qg = pair_q_gram(a, b)
    return count_vectors(qg, 1) > 0


# ---------------------------------------------------------------------------
# class sets

class IdealClassSet:
    """Complete set of right-ideal class representatives with unit weights."""

    def __init__(self, order, representatives, weights, mass):
        self.order = order
        self.representatives = list(representatives)
        self.weights = list(weights)
        self.mass = mass
        self.D, self.N = order.level
        self._genus = None

    @property
    def class_number(self) -> int:
        return len(self.representatives)

    def genus(self):
        if self._genus is None:
            self._genus = _build_genus(self)
        return self._genus

    def __repr__(self):
        return ("IdealClassSet(D=%d, N=%d, H=%d, weights=%r)"
                % (self.D, self.N, self.class_number, self.weights))


def _smallest_primes_coprime(n: int):
    p = 2
    while True:
        if n % p:
            yield p
        p += 1
        while any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
            p += 1


def ideal_class_set(order: OrderLattice, cache=None, traversal_prime=None) -> IdealClassSet:
    """Enumerate the right-ideal classes of a definite Eichler order.

    Traversal: p-neighbors at the smallest prime coprime to D*N (escalating
    if a traversal stalls).  The exact mass identity certifies completeness;
    overshooting it raises, signalling an arithmetic bug.
    """
    if not order.algebra.is_definite:
        raise ValueError("class sets require a definite algebra")
    if order.level is None:
        raise ValueError("order has no level data; build it via maximal_order/eichler_order")
    D, N = order.level
    if cache is not None:
        hit = cache.load(order)
        if hit is not None:
            return hit
    mass = mass_formula(D, N)
    root = make_right_ideal(
        OrderLattice.from_rows(order.algebra, order.basis_rows()), order)
    reps = [root]
    weights = [unit_weight(order)]
    acc = Fraction(1, weights[0])
    if acc > mass:
        raise ArithmeticError("mass certificate exceeded at the first class")

    prime_iter = _smallest_primes_coprime(D * N)
    p = traversal_prime
    if p is None:
        p = next(prime_iter)
    elif D * N % p == 0:
        raise ValueError("traversal prime must be coprime to D*N")
    frontier = list(reps)
    stalls = 0
    while acc != mass:
        new = []
        for ideal in frontier:
            for nb in p_neighbors(ideal, p):
                if any(ideals_equivalent(nb, r) for r in reps):
                    continue
                w = unit_weight(left_order(nb))
                reps.append(nb)
                weights.append(w)
                new.append(nb)
                acc += Fraction(1, w)
                if acc > mass:
                    raise ArithmeticError("mass certificate exceeded during traversal")
        if acc == mass:
            break
        if not new:
            stalls += 1
            if stalls > 8:
                raise ArithmeticError("class set traversal failed to meet the mass")
            p = next(prime_iter)
            while D * N % p == 0:
                p = next(prime_iter)
            frontier = list(reps)
        else:
            frontier = new

    paired = sorted(zip(reps, weights), key=lambda t: t[0].sort_key())
    reps = [r for r, _ in paired]
    weights = [w for _, w in paired]
    cs = IdealClassSet(order, reps, weights, mass)
    if cache is not None:
        cache.store(cs)
    return cs


# ---------------------------------------------------------------------------
# the genus and its averages

class GenusClass:
    """One isometry class in the genus, with its automorphism count."""

    def __init__(self, qgram, aut):
        self.qgram = qgram
        self.aut = aut
        self._theta = [1]

    def theta(self, mmax: int):
        if mmax >= len(self._theta):
            self._theta = theta_counts(self.qgram, mmax)
        return self._theta[:mmax + 1]


def genus_lattices(cs: IdealClassSet):
    """All pair Q-Grams indexed by (i, j); diagonal entries are left orders."""
    out = {}
    for i, a in enumerate(cs.representatives):
        for j, b in enumerate(cs.representatives):
            out[(i, j)] = pair_q_gram(a, b)
    return out


def _build_genus(cs: IdealClassSet):
    classes = []
    fingerprints = []
    for (_i, _j), qg in sorted(genus_lattices(cs).items()):
        fp = tuple(theta_counts(qg, 6))
        matched = False
        for cls, known_fp in zip(classes, fingerprints):
            if fp == known_fp and isometric(qg, cls.qgram):
                matched = True
                break
        if not matched:
            classes.append(GenusClass(qg, automorphism_count(qg)))
            fingerprints.append(fp)
    return classes


def genus_theta(cs: IdealClassSet, mmax: int):
    """Exact genus-averaged theta coefficients [1, r(1), ..., r(mmax)]."""
    classes = cs.genus()
    total_mass = sum(Fraction(1, c.aut) for c in classes)
    out = []
    thetas = [c.theta(mmax) for c in classes]
    for m in range(mmax + 1):
        s = sum(Fraction(th[m], c.aut) for th, c in zip(thetas, classes))
        out.append(s / total_mass)
    return out


def genus_average(cs: IdealClassSet, m: int) -> Fraction:
    """The genus-averaged representation number r_{D,N}(m)."""
    return genus_theta(cs, m)[m]


def pair_weighted_average(cs: IdealClassSet, m: int) -> Fraction:
    """Average of pair-lattice counts with unit weights 1/(w_i w_j).

    Agrees with `genus_average` whenever the pair family hits each genus
    class with automorphism-proportional multiplicity; compared against the
    honest average in the test suite.
    """
    total = Fraction(0)
    mass2 = Fraction(0)
    for i, a in enumerate(cs.representatives):
        for j, b in enumerate(cs.representatives):
            w = Fraction(1, cs.weights[i] * cs.weights[j])
            total += w * count_vectors(pair_q_gram(a, b), m)
            mass2 += w
    return total / mass2


# ---------------------------------------------------------------------------
# Kneser neighbors of a quadratic lattice (genus-closure certification)

def kneser_neighbors(qgram, p: int):
    """All p-neighbors of the integral lattice (Z^4, qgram) at an odd prime p.

    Returns one Q-Gram per isotropic-mod-p line; every neighbor lies in the
    genus of the input, so closure of a claimed set of genus classes under
    this map certifies that no class is missing from the reachable part.
    """
    if p == 2:
        raise ValueError("use an odd neighbor prime")
    A = [[Fraction(x) for x in row] for row in qgram]

    def q_val(v):
        val = sum(A[i][j] * v[i] * v[j] for i in range(4) for j in range(4))
        assert val.denominator == 1
        return int(val)

    def b_val(v, w):
        val = sum((A[i][j] + A[j][i]) * v[i] * w[j]
                  for i in range(4) for j in range(4))
        assert val.denominator == 1
        return int(val)

    out = []
    seen = set()
    import itertools
    for v in itertools.product(range(p), repeat=4):
        if not any(v):
            continue
        first = next(x for x in v if x)
        inv = pow(first, -1, p)
        line = tuple((x * inv) % p for x in v)
        if line in seen:
            continue
        seen.add(line)
        v = list(v)
        if q_val(v) % p:
            continue
        if q_val(v) % (p * p):
            target = (-(q_val(v) // p)) % p
            for w in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
                bw = b_val(v, w) % p
                if bw:
                    t = (target * pow(bw, -1, p)) % p
                    v = [v[i] + p * t * w[i] for i in range(4)]
                    break
        assert q_val(v) % (p * p) == 0
        cond = [b_val([1 if i == r else 0 for i in range(4)], v) % p
                for r in range(4)]
        kern = congruence_kernel([cond], p)
        rows = [[Fraction(x) for x in row] for row in kern]
        rows.append([Fraction(vi, p) for vi in v])
        from .matrices import hnf_rows
        mat = hnf_rows([[int(x * p) for x in row] for row in rows])
        if len(mat) != 4:
            raise ArithmeticError("neighbor lattice is degenerate")
        u = [[Fraction(x, p) for x in row] for row in mat]
        nb = [[sum(u[i][a] * Fraction(A[a][b] + A[b][a], 2) * u[j][b]
                   for a in range(4) for b in range(4)) for j in range(4)]
              for i in range(4)]
        out.append(nb)
    return out


def genus_closed_under_neighbors(cs: IdealClassSet, p: int) -> bool:
    """Check that the computed genus classes absorb all their p-neighbors."""
    classes = cs.genus()
    for cls in classes:
        for nb in kneser_neighbors(cls.qgram, p):
            if not any(isometric(nb, other.qgram) for other in classes):
                return False
    return True


def theta_qexpansion(lattice_or_classset, m_max: int):
    """Theta coefficients: plain counts for a lattice, averages for a genus."""
    if isinstance(lattice_or_classset, IdealClassSet):
        return genus_theta(lattice_or_classset, m_max)
    return theta_counts(lattice_or_classset, m_max)


def class_set_for(D: int, N: int, cache=None, traversal_prime=None) -> IdealClassSet:
    """Convenience: build the class set of an Eichler order of level N in B(D)."""
    alg = construct_algebra(D)
    omax = maximal_order(alg)
    order = eichler_order(omax, N)
    return ideal_class_set(order, cache=cache, traversal_prime=traversal_prime)


# ---------------------------------------------------------------------------
# the on-disk class-set cache

class ClassSetCache:
    """Directory cache of computed class sets, keyed by (D, N).

    Entries are plain text with a version header.  Loaded entries are
    re-verified (right-order stability, unit weights, mass identity);
    anything inconsistent or unparsable is recomputed, never trusted.
    Writes are atomic (temp file + rename), so concurrent readers see
    either the old or the new entry.
    """

    HEADER = "quatmatch-classset-v1"

    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, D, N):
        return os.path.join(self.directory, "classset_D%d_N%d.txt" % (D, N))

    def store(self, cs: IdealClassSet):
        lines = [self.HEADER]
        lines.append("algebra %d %d" % (cs.order.algebra.a, cs.order.algebra.b))
        lines.append("level %d %d" % (cs.D, cs.N))
        lines.append("order %s" % cs.order.to_text())
        lines.append("mass %s" % cs.mass)
        lines.append("count %d" % cs.class_number)
        for ideal, w in zip(cs.representatives, cs.weights):
            lines.append("ideal %s ; %s ; %d"
                         % (ideal.nrd, ideal.lattice.to_text(), w))
        path = self._path(cs.D, cs.N)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)

    def load(self, order: OrderLattice):
        D, N = order.level
        path = self._path(D, N)
        if not os.path.exists(path):
            return None
        try:
            return self._parse_and_verify(order, path)
        except (ValueError, ArithmeticError, OSError, ZeroDivisionError,
                KeyError, IndexError):
            return None

    def _parse_and_verify(self, order, path):
        with open(path, encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or lines[0] != self.HEADER:
            raise ValueError("bad header")
        fields = dict()
        ideals = []
        for ln in lines[1:]:
            key, _, rest = ln.partition(" ")
            if key == "ideal":
                ideals.append(rest)
            else:
                fields[key] = rest
        a, b = (int(x) for x in fields["algebra"].split())
        if QuaternionAlgebra(a, b) != order.algebra:
            raise ValueError("algebra mismatch")
        D, N = (int(x) for x in fields["level"].split())
        if (D, N) != order.level:
            raise ValueError("level mismatch")
        if OrderLattice.from_text(order.algebra, fields["order"]) != order:
            raise ValueError("order mismatch")
        mass = Fraction(fields["mass"])
        if mass != mass_formula(D, N):
            raise ValueError("stored mass disagrees with the formula")
        count = int(fields["count"])
        if count != len(ideals):
            raise ValueError("class count mismatch")
        reps = []
        weights = []
        acc = Fraction(0)
        for entry in ideals:
            nrd_text, lat_text, w_text = (t.strip() for t in entry.split(";"))
            lat = OrderLattice.from_text(order.algebra, lat_text)
            ideal = make_right_ideal(lat, order)
            if ideal.nrd != Fraction(nrd_text):
                raise ValueError("stored norm mismatch")
            bas_o = order.basis()
            for u in ideal.lattice.basis():
                for v in bas_o:
                    if not ideal.lattice.contains(u * v):
                        raise ValueError("stored lattice is not a right ideal")
            w = unit_weight(left_order(ideal))
            if w != int(w_text):
                raise ValueError("stored weight mismatch")
            reps.append(ideal)
            weights.append(w)
            acc += Fraction(1, w)
        if acc != mass:
            raise ValueError("stored classes fail the mass certificate")
        return IdealClassSet(order, reps, weights, mass)

"""Local Weil-representation computations at a finite prime, in exact arithmetic.

The three standard local quadratic spaces are the 2x2 matrix algebra with
its maximal lattice, the same algebra with the level lattice (lower-left
entry divisible by p), and the division quaternion algebra with its maximal
order.  Schwartz functions are rational combinations of indicator functions
of dual cosets mu + L; the group action is generated by

    n(b):  multiply the mu-coset coefficient by psi(b * Q(mu))
    m(a):  permute cosets by x -> a*x (unit a)
    w:     finite Fourier transform over L_dual / L, scaled by gamma * vol(L)

with vol(L) = [L_dual : L]^(-1/2) and the Weil index gamma = +1 for the
split spaces and -1 for the ramified one.  The section value lambda(phi)(g)
is (omega(g) phi)(0).

Character convention: psi_p(x) = e(-frac_p(x)) (see `exactnum`); the
`psi_sign` knob on a space flips it for convention-independence checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import CyclotomicNumber, additive_character, zeta
from .quatalg import ramified_model

IDENTITY = ()
W = (("w",),)


def wn(i: int):
    """The group word w * n(i)."""
    return (("w",), ("n", i))


@dataclass(frozen=True)
class LocalQuadSpace:
    p: int
    kind: str              # "split-maximal" | "split-level" | "ramified"
    qgram: tuple           # 4x4 Fractions; Q(v) = v qgram v^T
    dual_gens: tuple       # (v_I, v_J) spanning L_dual/L, or None if self-dual
    dual_index: int
    gamma: int
    psi_sign: int = -1

    @property
    def vol(self) -> Fraction:
        root = math.isqrt(self.dual_index)
        if root * root != self.dual_index:
            raise ArithmeticError("dual index is not a perfect square")
        return Fraction(1, root)

    def labels(self):
        if self.dual_gens is None:
            return [(0, 0)]
        return [(i, j) for i in range(self.p) for j in range(self.p)]

    def coset_vector(self, label):
        i, j = label
        if self.dual_gens is None:
            if (i, j) != (0, 0):
                raise ValueError("self-dual lattice has a single coset")
            return (Fraction(0),) * 4
        vi, vj = self.dual_gens
        return tuple(i * a + j * b for a, b in zip(vi, vj))

    def q(self, v) -> Fraction:
        return sum(self.qgram[r][s] * v[r] * v[s] for r in range(4) for s in range(4))

    def bilin(self, v, w) -> Fraction:
        return sum((self.qgram[r][s] + self.qgram[s][r]) * v[r] * w[s]
                   for r in range(4) for s in range(4))

    def psi(self, x) -> CyclotomicNumber:
        x = Fraction(x)
        return additive_character(self.p, x if self.psi_sign == -1 else -x)


def split_maximal_space(p: int, gamma: int = 1, psi_sign: int = -1) -> LocalQuadSpace:
    """2x2 matrices over Z_p with Q = det, coordinates (x11, x12, x21, x22)."""
    h = Fraction(1, 2)
    qg = ((0, 0, 0, h), (0, 0, -h, 0), (0, -h, 0, 0), (h, 0, 0, 0))
    qg = tuple(tuple(Fraction(x) for x in row) for row in qg)
    return LocalQuadSpace(p, "split-maximal", qg, None, 1, gamma, psi_sign)


def split_level_space(p: int, gamma: int = 1, psi_sign: int = -1) -> LocalQuadSpace:
    """The level lattice (lower-left entry in pZ_p), basis E11, E12, p*E21, E22.

    Q(y) = y1 y4 - p y2 y3; the dual cosets are mu_{i,j} = [[0, j/p],[i, 0]].
    """
    h = Fraction(1, 2)
    qg = ((0, 0, 0, h), (0, 0, -h * p, 0), (0, -h * p, 0, 0), (h, 0, 0, 0))
    qg = tuple(tuple(Fraction(x) for x in row) for row in qg)
    vi = (Fraction(0), Fraction(0), Fraction(1, p), Fraction(0))
    vj = (Fraction(0), Fraction(1, p), Fraction(0), Fraction(0))
    return LocalQuadSpace(p, "split-level", qg, (vi, vj), p * p, gamma, psi_sign)


def ramified_space(p: int, gamma: int = -1, psi_sign: int = -1) -> LocalQuadSpace:
    """Maximal order of the division quaternion algebra at p.

    Coordinates (a1, a2, b1, b2) stand for (a1 + a2 u) + (b1 + b2 u) pi with
    u generating the unramified quadratic extension and pi^2 = p; then
    Q = N(alpha) - p N(beta).  Dual cosets are mu_{i,j} = (i + j u)/pi.
    """
    model = ramified_model(p)
    t, n = model.t, model.n
    h = Fraction(1, 2)
    qg = (
        (Fraction(1), h * t, 0, 0),
        (h * t, Fraction(n), 0, 0),
        (0, 0, Fraction(-p), -h * t * p),
        (0, 0, -h * t * p, Fraction(-n * p)),
    )
    qg = tuple(tuple(Fraction(x) for x in row) for row in qg)
    vi = (Fraction(0), Fraction(0), Fraction(1, p), Fraction(0))
    vj = (Fraction(0), Fraction(0), Fraction(0), Fraction(1, p))
    return LocalQuadSpace(p, "ramified", qg, (vi, vj), p * p, gamma, psi_sign)


# ---------------------------------------------------------------------------
# Schwartz combinations and the group action

@dataclass(frozen=True)
class SchwartzCombo:
    """Finite combination sum_label coeff * char(mu_label + L)."""
    space: LocalQuadSpace
    terms: tuple  # sorted tuple of (label, coefficient)

    @staticmethod
    def from_dict(space, data) -> "SchwartzCombo":
        items = tuple(sorted((lab, c) for lab, c in data.items()
                             if not _is_zero(c)))
        return SchwartzCombo(space, items)

    def as_dict(self):
        return dict(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SchwartzCombo):
            return NotImplemented
        if self.space != other.space:
            return False
        a, b = self.as_dict(), other.as_dict()
        for lab in set(a) | set(b):
            if not _values_equal(a.get(lab, 0), b.get(lab, 0)):
                return False
        return True

    def __hash__(self):
        return hash((self.space, self.terms))

    def scaled(self, c) -> "SchwartzCombo":
        return SchwartzCombo.from_dict(
            self.space, {lab: v * c for lab, v in self.terms})

    def __add__(self, other):
        if self.space != other.space:
            raise ValueError("combos live on different spaces")
        out = self.as_dict()
        for lab, v in other.terms:
            out[lab] = out.get(lab, Fraction(0)) + v
        return SchwartzCombo.from_dict(self.space, out)


def _is_zero(c):
    if isinstance(c, CyclotomicNumber):
        return c.is_zero()
    return c == 0


def _values_equal(a, b):
    return (a == b) is True


def char_lattice(space: LocalQuadSpace) -> SchwartzCombo:
    """char(L): the zero coset with coefficient 1."""
    return SchwartzCombo.from_dict(space, {(0, 0): Fraction(1)})


def char_dual(space: LocalQuadSpace) -> SchwartzCombo:
    """char(L_dual): every coset with coefficient 1."""
    return SchwartzCombo.from_dict(space,
                                   {lab: Fraction(1) for lab in space.labels()})


def coset_char(space: LocalQuadSpace, i: int, j: int) -> SchwartzCombo:
    """char(mu_{i,j} + L)."""
    if space.dual_gens is None and (i, j) != (0, 0):
        raise ValueError("self-dual lattice has only the zero coset")
    return SchwartzCombo.from_dict(space,
                                   {(i % space.p, j % space.p): Fraction(1)})


def weil_act(word, combo: SchwartzCombo) -> SchwartzCombo:
    """Apply a generator word: ("n", b), ("m", a), ("w",) or ("nminus", c)."""
    space = combo.space
    kind = word[0]
    if kind == "n":
        b = int(word[1])
        out = {lab: v * space.psi(b * space.q(space.coset_vector(lab)))
               for lab, v in combo.terms}
        return SchwartzCombo.from_dict(space, out)
    if kind == "m":
        a = int(word[1])
        if math.gcd(a, space.p) != 1:
            raise ValueError("m(a) is implemented for units a only")
        out = {}
        for (i, j), v in combo.terms:
            lab = ((a * i) % space.p, (a * j) % space.p)
            out[lab] = out.get(lab, Fraction(0)) + v
        return SchwartzCombo.from_dict(space, out)
    if kind == "w":
        factor = space.vol
        data = combo.as_dict()
        out = {}
        for nu in space.labels():
            nu_vec = space.coset_vector(nu)
            total = Fraction(0)
            for mu, v in data.items():
                total = total + v * space.psi(space.bilin(nu_vec,
                                                          space.coset_vector(mu)))
            total = total * factor * space.gamma
            if not _is_zero(total):
                out[nu] = total
        return SchwartzCombo.from_dict(space, out)
    if kind == "nminus":
        c = int(word[1])
        # n_-(c) = w^{-1} n(-c) w and w^{-1} = w m(-1)
        step = weil_act(("w",), combo)
        step = weil_act(("n", -c), step)
        step = weil_act(("m", -1), step)
        return weil_act(("w",), step)
    raise ValueError("unknown generator word %r" % (word,))


def lambda_eval(combo: SchwartzCombo, g) -> CyclotomicNumber:
    """lambda(phi)(g) = (omega(g) phi)(0) for a word tuple g = (g1, g2, ...)."""
    space = combo.space
    current = combo
    words = list(g)
    while len(words) > 1:
        current = weil_act(words.pop(), current)
    if len(words) == 1 and words[0][0] == "w":
        # only the zero-coset output coefficient is needed
        total = Fraction(0)
        for _lab, v in current.terms:
            total = total + v
        value = total * space.vol * space.gamma
    else:
        if words:
            current = weil_act(words[0], current)
        value = current.as_dict().get((0, 0), Fraction(0))
    if isinstance(value, CyclotomicNumber):
        return value
    return CyclotomicNumber.from_rational(value)


def lambda_eval_bruteforce(combo: SchwartzCombo, i: int) -> CyclotomicNumber:
    """lambda(phi)(w n(i)) as a raw character sum over (mu + L)/pL.

    Independent of `weil_act`; used as a cross-check.  The sum runs over
    p^4 residue points per coset.
    """
    space = combo.space
    p = space.p
    total = CyclotomicNumber.from_rational(0)
    for lab, coeff in combo.terms:
        mu = space.coset_vector(lab)
        coset_sum = CyclotomicNumber.from_rational(0)
        for r0 in range(p):
            for r1 in range(p):
                for r2 in range(p):
                    for r3 in range(p):
                        x = (mu[0] + r0, mu[1] + r1, mu[2] + r2, mu[3] + r3)
                        coset_sum = coset_sum + space.psi(i * space.q(x))
        total = total + coset_sum * coeff
    return total * Fraction(space.gamma) * space.vol * Fraction(1, p ** 4)


# ---------------------------------------------------------------------------
# invariance and the matching statements

_LEVELS = ("K0", "K0plus", "K")


def _generator_words(space, level):
    p = space.p
    if level == "K0":
        ns = [("n", b) for b in range(1, p)]
        nms = [("nminus", p * t) for t in range(1, p)]
    elif level == "K0plus":
        ns = [("n", p * b) for b in range(1, p)]
        nms = [("nminus", c) for c in range(1, p)]
    elif level == "K":
        ns = [("n", p * b) for b in range(1, p)]
        nms = [("nminus", p * t) for t in range(1, p)]
    else:
        raise ValueError("level must be one of %r" % (_LEVELS,))
    return ns + nms


def verify_k_invariance(combo: SchwartzCombo, level: str) -> bool:
    """True iff every listed generator of the level group fixes the combo."""
    for word in _generator_words(combo.space, level):
        if weil_act(word, combo) != combo:
            return False
    return True


def verify_prop_3_1(p: int, gamma_split: int = 1, gamma_ram: int = -1,
                    psi_sign: int = -1) -> bool:
    """Both local matchings between the division order and the split lattices.

    (1) char(L_ram) against (-2/(p-1)) char(L0) + ((p+1)/(p-1)) char(L1);
    (2) char(L_ram_dual) against (2p/(p-1)) char(L0) - ((p+1)/(p-1)) char(L1_dual);
    equality of all lambda-values on the transversal {1, w}, exact.
    """
    sp0 = split_maximal_space(p, gamma_split, psi_sign)
    sp1 = split_level_space(p, gamma_split, psi_sign)
    ra = ramified_space(p, gamma_ram, psi_sign)

    phi_ra = char_lattice(ra)
    phi_ra_dual = char_dual(ra)
    phi0 = char_lattice(sp0)
    phi1 = char_lattice(sp1)
    phi2 = char_dual(sp1)

    c_minus = Fraction(-2, p - 1)
    c_plus = Fraction(p + 1, p - 1)
    for g in (IDENTITY, W):
        lhs = lambda_eval(phi_ra, g)
        rhs = lambda_eval(phi0, g) * c_minus + lambda_eval(phi1, g) * c_plus
        if lhs != rhs:
            return False
        lhs = lambda_eval(phi_ra_dual, g)
        rhs = (lambda_eval(phi0, g) * Fraction(2 * p, p - 1)
               - lambda_eval(phi2, g) * c_plus)
        if lhs != rhs:
            return False
    return True


def _cyc_det(mat):
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = CyclotomicNumber.from_rational(0)
    sign = 1
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        total = total + mat[0][j] * _cyc_det(minor) * sign
        sign = -sign
    return total


def lambda_value_matrix(p: int, psi_sign: int = -1):
    """Rows: sections lambda(phi0), lambda(phi_{1,j}); columns: {1, w n(i)}."""
    sp0 = split_maximal_space(p, 1, psi_sign)
    sp1 = split_level_space(p, 1, psi_sign)
    transversal = [IDENTITY] + [wn(i) for i in range(p)]
    rows = [[lambda_eval(char_lattice(sp0), g) for g in transversal]]
    for j in range(p):
        phi = coset_char(sp1, 1, j)
        rows.append([lambda_eval(phi, g) for g in transversal])
    return rows


def verify_basis_lemma(p: int, psi_sign: int = -1) -> bool:
    """The p+1 sections are a basis and coset sections depend only on ab mod p."""
    rows = lambda_value_matrix(p, psi_sign)
    det = _cyc_det(rows)
    if det == 0:
        return False
    sp1 = split_level_space(p, 1, psi_sign)
    transversal = [IDENTITY] + [wn(i) for i in range(p)]
    values = {}
    for a in range(p):
        for b in range(p):
            if (a, b) == (0, 0):
                continue
            vals = tuple(lambda_eval(coset_char(sp1, a, b), g)
                         for g in transversal)
            key = (a * b) % p
            if key in values:
                if values[key] != vals:
                    return False
            else:
                values[key] = vals
    return True


_CRAMER_CACHE: dict = {}


def _cramer_data(p: int, psi_sign: int):
    """det(A) and the cofactor matrix of A = (p * lambda(phi_{1,j})(w n(i)))."""
    key = (p, psi_sign)
    data = _CRAMER_CACHE.get(key)
    if data is None:
        sp1 = split_level_space(p, 1, psi_sign)
        amat = [[lambda_eval(coset_char(sp1, 1, j), wn(i)) * p for j in range(p)]
                for i in range(p)]
        det_a = _cyc_det(amat)
        cof = [[None] * p for _ in range(p)]
        for i in range(p):
            for j in range(p):
                minor = [[amat[r][s] for s in range(p) if s != j]
                         for r in range(p) if r != i]
                sign = -1 if (i + j) % 2 else 1
                cof[i][j] = (_cyc_det(minor) if p > 1 else
                             CyclotomicNumber.from_rational(1)) * sign
        data = (amat, det_a, cof)
        _CRAMER_CACHE[key] = data
    return data


def match_coefficients(p: int, k: int, l: int, psi_sign: int = -1):
    """Rational coefficients expressing the (k,l) division-order coset section
    in the split coset sections, solved by Cramer's rule and by the inverse
    discrete Fourier transform; both must agree.

    The result is a 0/-1 vector with its single -1 at j = d_{k,l} mod p,
    where d_{k,l} is the norm-form value of the residue label.
    """
    if (k % p, l % p) == (0, 0):
        raise ValueError("the zero coset has no matching of this shape")
    ra = ramified_space(p, -1, psi_sign)
    phi_kl = coset_char(ra, k, l)
    target = [lambda_eval(phi_kl, wn(i)) for i in range(p)]

    # both sides scaled by p: basis matrix entries are roots of unity
    _amat, det_a, cof = _cramer_data(p, psi_sign)
    tvec = [target[i] * p for i in range(p)]
    cramer = []
    for j in range(p):
        # cofactor expansion of det(A with column j replaced by tvec)
        dj = CyclotomicNumber.from_rational(0)
        for i in range(p):
            dj = dj + tvec[i] * cof[i][j]
        cramer.append(dj / det_a)

    # inverse DFT: A^{ -1} = (1/p) * conj(A) for A = (e(ij/p))
    sign = -psi_sign  # amat[i][j] = e(sign * ij / p)
    idft = []
    for j in range(p):
        s = CyclotomicNumber.from_rational(0)
        for i in range(p):
            s = s + zeta(p, (-sign * i * j) % p) * tvec[i]
        idft.append(s * Fraction(1, p))

    if cramer != idft:
        raise ArithmeticError("Cramer and inverse-DFT solutions disagree")
    out = []
    for c in cramer:
        if not c.is_rational:
            raise ArithmeticError("matching coefficient is not rational: %s" % c)
        out.append(c.rational_value())

    # structural check: a single -1 at the norm-form residue of the label
    model = ramified_model(p)
    d = model.d_value(k, l) % p
    expected = [Fraction(-1) if j == d else Fraction(0) for j in range(p)]
    if out != expected:
        raise ArithmeticError("matching coefficients have unexpected shape: %r" % out)
    return out


def lambda_table_text(p: int) -> str:
    """Human-readable table of the standard lambda-values and matchings."""
    lines = []
    ra = ramified_space(p)
    sp0 = split_maximal_space(p)
    sp1 = split_level_space(p)
    lines.append("lambda values at prime p = %d (columns: 1, w)" % p)
    for name, combo in (("char(L_ram)      ", char_lattice(ra)),
                        ("char(L_ram_dual) ", char_dual(ra)),
                        ("char(L0)         ", char_lattice(sp0)),
                        ("char(L1)         ", char_lattice(sp1)),
                        ("char(L1_dual)    ", char_dual(sp1))):
        vals = [str(lambda_eval(combo, g)) for g in (IDENTITY, W)]
        lines.append("  %s : %s" % (name, ", ".join(vals)))
    lines.append("matching weights: -2/(p-1) = %s, (p+1)/(p-1) = %s"
                 % (Fraction(-2, p - 1), Fraction(p + 1, p - 1)))
    lines.append("prop-3.1 matchings hold: %s" % verify_prop_3_1(p))
    model = ramified_model(p)
    lines.append("division-order residue parameters (t, n) = (%d, %d)"
                 % (model.t, model.n))
    for k in range(p):
        for l in range(p):
            if (k, l) == (0, 0):
                continue
            coeffs = match_coefficients(p, k, l)
            nz = [(j, c) for j, c in enumerate(coeffs) if c]
            lines.append("  coset (%d,%d): d = %d, coefficients %s"
                         % (k, l, model.d_value(k, l) % p, nz))
    return "\n".join(lines)

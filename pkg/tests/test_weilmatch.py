from fractions import Fraction

import pytest

from quatmatch.exactnum import CyclotomicNumber, zeta
from quatmatch.quatalg import ramified_model
from quatmatch.weilmatch import (
    IDENTITY,
    W,
    char_dual,
    char_lattice,
    coset_char,
    lambda_eval,
    lambda_eval_bruteforce,
    lambda_table_text,
    match_coefficients,
    ramified_space,
    split_level_space,
    split_maximal_space,
    verify_basis_lemma,
    verify_k_invariance,
    verify_prop_3_1,
    weil_act,
    wn,
)


def test_space_volumes_and_indices():
    for p in (2, 3, 5):
        sp0 = split_maximal_space(p)
        sp1 = split_level_space(p)
        ra = ramified_space(p)
        assert sp0.dual_index == 1 and sp0.vol == 1
        assert sp1.dual_index == p * p and sp1.vol == Fraction(1, p)
        assert ra.dual_index == p * p and ra.vol == Fraction(1, p)
        for space in (sp0, sp1, ra):
            assert space.vol ** 2 * space.dual_index == 1
        assert sp0.gamma == -ra.gamma == 1


def test_coset_norms():
    p = 5
    sp1 = split_level_space(p)
    ra = ramified_space(p)
    model = ramified_model(p)
    for i in range(p):
        for j in range(p):
            v = sp1.coset_vector((i, j))
            assert sp1.q(v) == Fraction(-i * j, p)
            w_vec = ra.coset_vector((i, j))
            assert (ra.q(w_vec) + Fraction(model.d_value(i, j), p)).denominator == 1


def test_standard_lambda_values():
    for p in (2, 3, 5, 7):
        ra = ramified_space(p)
        sp0 = split_maximal_space(p)
        sp1 = split_level_space(p)
        assert lambda_eval(char_lattice(ra), IDENTITY) == 1
        assert lambda_eval(char_lattice(ra), W) == Fraction(-1, p)
        assert lambda_eval(char_dual(ra), IDENTITY) == 1
        assert lambda_eval(char_dual(ra), W) == -p
        assert lambda_eval(char_lattice(sp0), W) == 1
        assert lambda_eval(char_lattice(sp1), W) == Fraction(1, p)
        assert lambda_eval(char_dual(sp1), W) == p


def test_coset_lambda_values():
    for p in (2, 3, 5):
        sp1 = split_level_space(p)
        ra = ramified_space(p)
        model = ramified_model(p)
        for a in range(p):
            for b in range(p):
                if (a, b) == (0, 0):
                    continue
                phi = coset_char(sp1, a, b)
                assert lambda_eval(phi, IDENTITY) == 0
                for i in range(p):
                    assert lambda_eval(phi, wn(i)) == \
                        zeta(p, a * b * i % p) * Fraction(1, p)
                phi_ra = coset_char(ra, a, b)
                d = model.d_value(a, b)
                for i in range(p):
                    assert lambda_eval(phi_ra, wn(i)) == \
                        zeta(p, i * d % p) * Fraction(-1, p)


def test_lambda_bruteforce_cross_check():
    for p in (2, 3):
        for space_fn in (split_level_space, ramified_space):
            space = space_fn(p)
            combos = [char_lattice(space), char_dual(space),
                      coset_char(space, 1, 0), coset_char(space, 1, 1)]
            for combo in combos:
                for i in range(p):
                    assert lambda_eval_bruteforce(combo, i) == \
                        lambda_eval(combo, wn(i))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_prop_3_1(p):
    assert verify_prop_3_1(p)


def test_prop_3_1_gamma_sensitivity():
    # flipping the Weil index assignment must break the matching
    assert not verify_prop_3_1(3, gamma_ram=1)
    assert not verify_prop_3_1(5, gamma_split=-1)


def test_prop_3_1_psi_convention_independent():
    for p in (2, 3, 5):
        assert verify_prop_3_1(p, psi_sign=1)


def test_fourier_inversion():
    for p in (2, 3, 5):
        for space in (split_maximal_space(p), split_level_space(p),
                      ramified_space(p)):
            phi = char_lattice(space)
            assert weil_act(("w",), weil_act(("w",), phi)) == phi


def test_n_action_trivial_on_integral_lattice():
    for p in (2, 3):
        space = split_level_space(p)
        phi = char_lattice(space)
        for b in range(1, p + 1):
            assert weil_act(("n", b), phi) == phi


def test_k_invariance():
    for p in (2, 3):
        ra = ramified_space(p)
        sp0 = split_maximal_space(p)
        sp1 = split_level_space(p)
        for combo in (char_lattice(ra), char_lattice(sp0), char_lattice(sp1)):
            assert verify_k_invariance(combo, "K0")
        for combo in (char_dual(ra), char_dual(sp1)):
            assert verify_k_invariance(combo, "K0plus")
            assert not verify_k_invariance(combo, "K0")
        for a in range(p):
            for b in range(p):
                if (a, b) == (0, 0):
                    continue
                assert verify_k_invariance(coset_char(ra, a, b), "K")
                assert verify_k_invariance(coset_char(sp1, a, b), "K")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_basis_lemma(p):
    assert verify_basis_lemma(p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_match_coefficients(p):
    model = ramified_model(p)
    sp1 = split_level_space(p)
    ra = ramified_space(p)
    for k in range(p):
        for l in range(p):
            if (k, l) == (0, 0):
                continue
            coeffs = match_coefficients(p, k, l)
            d = model.d_value(k, l) % p
            assert coeffs[d] == -1
            assert sum(1 for c in coeffs if c) == 1
            # the matching identity holds on the whole transversal, g = 1 included
            phi_ra = coset_char(ra, k, l)
            for g in [IDENTITY] + [wn(i) for i in range(p)]:
                lhs = lambda_eval(phi_ra, g)
                rhs = CyclotomicNumber.from_rational(0)
                for j, cj in enumerate(coeffs):
                    if cj:
                        rhs = rhs + lambda_eval(coset_char(sp1, 1, j), g) * cj
                assert lhs == rhs


def test_match_coefficients_rejects_zero_coset():
    with pytest.raises(ValueError):
        match_coefficients(3, 0, 0)


def test_m_action_requires_unit():
    space = split_level_space(3)
    with pytest.raises(ValueError):
        weil_act(("m", 3), char_lattice(space))


def test_lambda_table_text_smoke():
    text = lambda_table_text(3)
    assert "prop-3.1 matchings hold: True" in text
    assert "coset (1,1)" in text

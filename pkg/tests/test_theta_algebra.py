# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from fractions import Fraction
from itertools import product
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from thetaplane.coefficient_ring import G_I, ExactScalar, GaussianRational, PhaseWord, ThetaMatrix
from thetaplane.errors import SignatureMismatchError
from thetaplane.theta_algebra import (
    AlgebraSignature,
    Element,
    Mode,
    MultiIndex,
    close,
    decay_check,
    degree,
    evaluate,
    generator,
    hermitian_test,
    homogeneous_part,
    indices_of_degree,
    linear,
    monomial_mul,
    mul,
    mul_homogeneous,
    mul_rewrite,
    star,
    star_phase,
    truncate,
)
from tests.strategies import elements, monomials, signatures


def lam(sig: AlgebraSignature, k: int, l: int, e: int = 1) -> ExactScalar:
    if k < l:
        k, l, e = l, k, -e
    return ExactScalar.phase(PhaseWord.from_exponents(sig.n, {(k, l): e}))


def phase_element(sig: AlgebraSignature, scalar: ExactScalar) -> Element:
    return Element.constant(sig, scalar)


class TestSignature:
    def test_exact_drops_theta(self):
        sig = AlgebraSignature(2, 4, Mode.EXACT, ThetaMatrix.zero(2))
        assert sig.theta is None

    def test_numeric_needs_theta(self):
        with pytest.raises(ValueError, match="theta"):
            AlgebraSignature(2, 4, Mode.NUMERIC)

    def test_bad_m(self):
        with pytest.raises(ValueError, match="m must be"):
            AlgebraSignature(2, 6)

    def test_from_m(self):
        assert AlgebraSignature.from_m(5) == AlgebraSignature(2, 5)
        assert AlgebraSignature.from_m(5).has_x
        assert not AlgebraSignature.from_m(4).has_x


class TestRelations:
    def test_z_relation(self, sig2):
        z1, z2 = generator(sig2, "z", 1), generator(sig2, "z", 2)
        assert mul(z2, z1) == phase_element(sig2, lam(sig2, 2, 1)) * mul(z1, z2)

    def test_zb_relation(self, sig2):
        zb1, zb2 = generator(sig2, "zb", 1), generator(sig2, "zb", 2)
        assert mul(zb2, zb1) == phase_element(sig2, lam(sig2, 2, 1)) * mul(zb1, zb2)

    def test_zb_z_relation(self, sig2):
        z1, zb2 = generator(sig2, "z", 1), generator(sig2, "zb", 2)
        # zb_p z_q = λ_{q,p} z_q zb_p
        assert mul(zb2, z1) == phase_element(sig2, lam(sig2, 1, 2)) * mul(z1, zb2)

    def test_same_index_commutes(self, sig2):
        z1, zb1 = generator(sig2, "z", 1), generator(sig2, "zb", 1)
        assert mul(zb1, z1) == mul(z1, zb1)

    def test_x_is_central(self, sig2_odd):
        x = generator(sig2_odd, "x")
        for name, k in product(("z", "zb"), (1, 2)):
            g = generator(sig2_odd, name, k)
            assert mul(x, g) == mul(g, x)

    def test_x_hermitian(self, sig2_odd):
        x = generator(sig2_odd, "x")
        assert star(x) == x
        assert hermitian_test(x)

    def test_x_missing_for_even_m(self, sig2):
        with pytest.raises(SignatureMismatchError):
            generator(sig2, "x")

    def test_star_of_z_is_zb(self, sig2):
        assert star(generator(sig2, "z", 2)) == generator(sig2, "zb", 2)

    def test_normal_form_example(self, sig2):
        a = mul(generator(sig2, "zb", 2), generator(sig2, "z", 1))
        assert a.terms[0][0] == MultiIndex((1, 0), (0, 1))
        assert a.terms[0][1] == lam(sig2, 2, 1, -1)


class TestMonomialMul:
    def test_identity(self):
        a = MultiIndex((2, 1), (0, 3))
        word, idx = monomial_mul(MultiIndex.unit(2), a)
        assert word.is_identity()
        assert idx == a

    def test_star_phase(self):
        idx = MultiIndex((1, 1), (0, 0))
        # (z1 z2)* = zb2 zb1 = λ_{2,1} zb1 zb2
        assert star_phase(idx).exponents == {(2, 1): 1}


@pytest.mark.parametrize("odd", [False, True])
class TestMultiplicationOracle:
    @settings(max_examples=1000)
    @given(st.data())
    def test_monomials_match_rewriting(self, odd, data):
        sig = data.draw(signatures(max_n=4, odd=odd))
        a, b = data.draw(monomials(sig)), data.draw(monomials(sig))
        assert mul(a, b) == mul_rewrite(a, b)

    @settings(max_examples=200)
    @given(st.data())
    def test_elements_match_rewriting(self, odd, data):
        sig = data.draw(signatures(max_n=3, odd=odd))
        a, b = data.draw(elements(sig)), data.draw(elements(sig))
        assert mul(a, b) == mul_rewrite(a, b)


@pytest.mark.parametrize("odd", [False, True])
class TestRingAxioms:
    @settings(max_examples=200)
    @given(st.data())
    def test_associativity(self, odd, data):
        sig = data.draw(signatures(max_n=3, odd=odd))
        a, b, c = (data.draw(elements(sig, max_terms=3, max_degree=3)) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))

    @settings(max_examples=200)
    @given(st.data())
    def test_distributivity(self, odd, data):
        sig = data.draw(signatures(max_n=3, odd=odd))
        a, b, c = (data.draw(elements(sig, max_terms=3, max_degree=3)) for _ in range(3))
        assert mul(a, b + c) == mul(a, b) + mul(a, c)
        assert mul(a + b, c) == mul(a, c) + mul(b, c)

    @settings(max_examples=200)
    @given(st.data())
    def test_star_anti_involution(self, odd, data):
        sig = data.draw(signatures(max_n=3, odd=odd))
        a, b = data.draw(elements(sig)), data.draw(elements(sig))
        assert star(star(a)) == a
        assert star(mul(a, b)) == mul(star(b), star(a))
        assert star(a + b) == star(a) + star(b)


class TestRingIdentities:
    @given(st.data())
    def test_additive_inverse(self, data):
        sig = data.draw(signatures(max_n=3))
        a = data.draw(elements(sig))
        assert (a - a).is_zero()
        assert a + (-a) == Element.zero(sig)

    def test_unit(self, sig2_odd):
        a = generator(sig2_odd, "z", 1) + generator(sig2_odd, "x")
        one = Element.one(sig2_odd)
        assert mul(one, a) == a
        assert mul(a, one) == a


class TestSplittingInvariance:
    @pytest.mark.parametrize("n", [2, 3])
    def test_every_split_gives_the_same_product(self, n):
        sig = AlgebraSignature(n, 2 * n)
        for M in product(range(4), repeat=n):
            weight = PhaseWord.from_exponents(
                n, {(r, s): M[r - 1] * M[s - 1] for r in range(2, n + 1) for s in range(1, r)}
            )
            expected = Element.from_map(sig, {MultiIndex(M, M): ExactScalar.phase(weight)})
            for p in product(*(range(m + 1) for m in M)):
                q = tuple(m - a for m, a in zip(M, p, strict=True))
                a = Element.monomial(sig, p, q)
                assert mul(a, star(a)) == expected, (M, p)


class TestGrading:
    def test_degree(self, sig2_odd):
        a = Element.monomial(sig2_odd, (1, 0), (0, 2), t=1) + Element.one(sig2_odd)
        assert degree(a) == 4
        assert degree(Element.zero(sig2_odd)) == -1

    def test_truncate(self, sig2):
        z1 = generator(sig2, "z", 1)
        a = Element.one(sig2) + z1 + mul(z1, z1)
        assert truncate(a, 1) == Element.one(sig2) + z1
        assert homogeneous_part(a, 2) == mul(z1, z1)

    def test_truncate_negative(self, sig2):
        with pytest.raises(ValueError, match="truncation degree"):
            truncate(Element.one(sig2), -1)

    @given(st.data())
    def test_truncated_product(self, data):
        sig = data.draw(signatures(max_n=2))
        a, b = data.draw(elements(sig)), data.draw(elements(sig))
        D = data.draw(st.integers(0, 5))
        assert mul(a, b, max_degree=D) == truncate(mul(a, b), D)
        assert mul_homogeneous(a, b, D) == homogeneous_part(mul(a, b), D)

    def test_indices_of_degree_count(self, sig2, sig2_odd):
        # C(d + slots - 1, slots - 1)
        assert len(indices_of_degree(sig2, 2)) == 10
        assert len(indices_of_degree(sig2_odd, 2)) == 15
        assert indices_of_degree(sig2, 0) == [MultiIndex.unit(2)]
        assert all(idx.degree == 3 for idx in indices_of_degree(sig2_odd, 3))


class TestLinear:
    def test_scale(self, sig2):
        z1 = generator(sig2, "z", 1)
        assert linear("scale", z1, G_I) == Element.monomial(sig2, (1, 0), coeff=G_I)
        assert linear("scale", z1, 0).is_zero()

    def test_unknown_op(self, sig2):
        with pytest.raises(ValueError, match="op must be"):
            linear("mul", Element.one(sig2), Element.one(sig2))

    def test_signature_mismatch(self, sig2, sig3):
        with pytest.raises(SignatureMismatchError):
            linear("add", Element.one(sig2), Element.one(sig3))
        with pytest.raises(SignatureMismatchError):
            mul(Element.one(sig2), Element.one(sig3))


class TestNumericMode:
    def test_commutative_limit(self):
        rng = np.random.default_rng(7)
        sig = AlgebraSignature(2, 4, Mode.NUMERIC, ThetaMatrix.zero(2))
        for _ in range(100):
            terms_a = {
                (int(a), int(b), int(c), int(d)): complex(*rng.normal(size=2))
                for a, b, c, d in rng.integers(0, 3, size=(3, 4))
            }
            terms_b = {
                (int(a), int(b), int(c), int(d)): complex(*rng.normal(size=2))
                for a, b, c, d in rng.integers(0, 3, size=(3, 4))
            }
            A = Element.from_map(sig, {MultiIndex(k[:2], k[2:]): v for k, v in terms_a.items()})
            B = Element.from_map(sig, {MultiIndex(k[:2], k[2:]): v for k, v in terms_b.items()})
            expected: dict[MultiIndex, complex] = {}
            for ka, va in terms_a.items():
                for kb, vb in terms_b.items():
                    key = tuple(x + y for x, y in zip(ka, kb, strict=True))
                    idx = MultiIndex(key[:2], key[2:])
                    expected[idx] = expected.get(idx, 0) + va * vb
            got = mul(A, B)
            for idx, value in expected.items():
                assert got.coefficient(idx).value == pytest.approx(value, abs=1e-12)

    def test_numeric_relation(self, sig2_numeric):
        z1, z2 = generator(sig2_numeric, "z", 1), generator(sig2_numeric, "z", 2)
        # θ_{2,1} = π/2
        assert close(mul(z2, z1), linear("scale", mul(z1, z2), 1j))

    def test_evaluate_matches_numeric_product(self, sig2, theta2, sig2_numeric):
        a = generator(sig2, "zb", 2) + Element.monomial(sig2, (1, 0), (0, 1), coeff=GaussianRational(Fraction(1, 2)))
        b = generator(sig2, "z", 1) + generator(sig2, "z", 2)
        exact = evaluate(mul(a, b), theta2)
        numeric = mul(evaluate(a, theta2), evaluate(b, theta2))
        assert exact.sig == sig2_numeric
        assert close(exact, numeric, 1e-12)

    def test_hermitian_numeric(self, sig2_numeric):
        z1 = generator(sig2_numeric, "z", 1)
        assert hermitian_test(z1 + star(z1))
        assert not hermitian_test(z1)

    def test_close_tolerance(self, sig2_numeric):
        a = Element.constant(sig2_numeric, 1.0)
        b = Element.constant(sig2_numeric, 1.0 + 1e-12)
        assert close(a, b, 1e-9)
        assert not close(a, b, 0.0)


class TestDecay:
    def test_weights(self, sig2, theta2):
        a = Element.monomial(sig2, (2, 0), coeff=GaussianRational(Fraction(1, 100)))
        # (1 + 4)^2 * 0.01 = 0.25
        assert decay_check(a, 2, 1, theta2)
        assert not decay_check(a, 2, Fraction(1, 5), theta2)

    def test_x_exponent_counts(self, sig2_odd):
        th = ThetaMatrix.zero(2)
        a = Element.monomial(sig2_odd, (0, 0), t=3)
        # 1 + 9 = 10
        assert decay_check(a, 1, 11, th)
        assert not decay_check(a, 1, 10, th)

    def test_large_r(self, sig1):
        z1 = generator(sig1, "z", 1)
        th = ThetaMatrix.zero(1)
        # 2^1100 does not fit in a float
        assert not decay_check(z1, 1100, Fraction(10), th)
        assert decay_check(Element.one(sig1), 1100, Fraction(2), th)

    def test_exact_needs_theta(self, sig2):
        with pytest.raises(ValueError, match="theta"):
            decay_check(Element.one(sig2), 1, 1)

    def test_invalid_arguments(self, sig2_numeric):
        with pytest.raises(ValueError, match="r must be"):
            decay_check(Element.one(sig2_numeric), 0, 1)
        with pytest.raises(ValueError, match="C must be"):
            decay_check(Element.one(sig2_numeric), 1, 0)

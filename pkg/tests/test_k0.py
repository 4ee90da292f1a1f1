# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

from fractions import Fraction
import pytest
from thetaplane.errors import DiagonalizationError, NotAProjectorError
from thetaplane.k0 import K0Class, equivalent, k0_arith, k0_class
from thetaplane.matrix_algebra import AlgMatrix, JetContext, direct_sum
from thetaplane.projector_tools import cayley_unitary, conjugate_constant, make_test_projector, trivialize
from thetaplane.scalar_matrix import ScalarMatrix
from thetaplane.theta_algebra import Element, generator


class TestK0Class:
    def test_arithmetic(self):
        assert K0Class(1) + K0Class(2) == K0Class(3)
        assert K0Class(2) - K0Class(2) == K0Class(0)
        assert -K0Class(3) == K0Class(-3)
        assert int(K0Class(4)) == 4
        assert str(K0Class(-1)) == "-1"

    def test_k0_arith(self):
        assert k0_arith("add", K0Class(1), K0Class(2)) == K0Class(3)
        assert k0_arith("sub", K0Class(5), K0Class(5)) == K0Class(0)
        with pytest.raises(ValueError, match="op must be"):
            k0_arith("mul", K0Class(1), K0Class(1))


class TestK0:
    def test_diag(self, e2):
        assert k0_class(e2, JetContext(2)) == K0Class(1)

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_identity(self, sig2, N):
        assert k0_class(AlgMatrix.identity(sig2, N), JetContext(2)) == K0Class(N)

    def test_generated_rank(self):
        P, _ = make_test_projector(0, 2, 3, 2, 2)
        assert k0_class(P, JetContext(2)) == K0Class(2)

    def test_not_a_projector(self, sig2):
        P = AlgMatrix.diagonal(sig2, [generator(sig2, "z", 1)])
        with pytest.raises(NotAProjectorError):
            k0_class(P, JetContext(2))

    def test_equivalent(self, sig2):
        ctx = JetContext(2)
        P = AlgMatrix.diagonal(sig2, [Element.one(sig2), Element.zero(sig2)])
        Q = AlgMatrix.diagonal(sig2, [Element.zero(sig2), Element.one(sig2)])
        assert equivalent(P, P, ctx)
        assert equivalent(P, Q, ctx)
        assert not equivalent(P, AlgMatrix.identity(sig2, 2), ctx)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_additive_under_direct_sum(self, seed):
        ctx = JetContext(2)
        P, _ = make_test_projector(seed, 2, 2, 1, 2)
        Q, _ = make_test_projector(seed + 10, 2, 1, 1, 2)
        total = k0_class(direct_sum(P, Q), ctx)
        assert total == k0_arith("add", k0_class(P, ctx), k0_class(Q, ctx))
        assert total == K0Class(2)

    @pytest.mark.parametrize("seed", [0, 1])
    def test_invariant_under_constant_unitaries(self, seed):
        ctx = JetContext(2)
        P, _ = make_test_projector(seed, 2, 2, 1, 2)
        expected = k0_class(P, ctx)
        assert k0_class(conjugate_constant(P, ScalarMatrix.permutation([1, 0])), ctx) == expected
        assert k0_class(conjugate_constant(P, cayley_unitary(seed, 2)), ctx) == expected

    def test_equivalent_to_standard_projector(self, sig2):
        ctx = JetContext(2)
        P, _ = make_test_projector(3, 2, 2, 1, 2)
        assert equivalent(P, AlgMatrix.standard_projector(sig2, 2, 1), ctx)


class TestK0WithoutExactUnitary:
    # rank-1 averaging projector: its range vector has norm^2 1/3, no unit rescaling in Q(i)
    @pytest.fixture
    def averaging(self, sig2) -> AlgMatrix:
        return AlgMatrix.from_constants(sig2, [[Fraction(1, 3)] * 3] * 3)

    def test_trivialize_has_no_exact_unitary(self, averaging):
        with pytest.raises(DiagonalizationError):
            trivialize(averaging, JetContext(2))

    def test_class_from_scalar_rank(self, averaging):
        assert k0_class(averaging, JetContext(2)) == K0Class(1)

    def test_equivalent(self, sig2, averaging):
        ctx = JetContext(2)
        assert equivalent(averaging, AlgMatrix.standard_projector(sig2, 3, 1), ctx)
        assert not equivalent(averaging, AlgMatrix.standard_projector(sig2, 3, 2), ctx)

    def test_direct_sum(self, averaging, e2):
        assert k0_class(direct_sum(averaging, e2), JetContext(2)) == K0Class(2)

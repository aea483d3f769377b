"""Bracket of (n-1)-forms: golden values, slot rules, verifier sweeps.

The sweep verifiers evaluate decomposed residuals; every decomposition rule
used there is re-derived here against the direct defining formulas on
randomized inputs, so a drift between the fast path and the definitions
cannot pass the suite.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from nambu.algebroid import (
    FormalWedge,
    _SweepBasis,
    anchor_residual,
    exact_forms_residual,
    fbracket_prime,
    function_slot1_residual,
    function_slot2_residual,
    lbracket,
    leibniz_residual,
    phi,
    sharp_d_residual,
    skew_defect,
    verify_anchor_morphism,
    verify_characterization,
    verify_leibniz_identity,
    verify_phi_morphism,
    verify_sharp_d_identity,
)
from nambu.errors import ArityError, DegreeError, OrderError
from nambu.exterior import (
    Form,
    Multivector,
    contract_vec,
    differential,
    ext_d,
    lie_form,
    lie_mv,
    pair,
    wedge,
)
from nambu.poly import Polynomial
from nambu.structure import JetBasisConfig, NambuStructure, sharp

from conftest import random_form, random_polynomial


def x(m, i):
    return Polynomial.variable(m, i)


def dx(m, *indices):
    return Form.basis(m, indices)


def dd(m, *indices):
    return Multivector.basis(m, indices)


class TestBracketValues:
    def test_golden_scaled_r3(self, scaled_r3):
        # frozen by direct expansion: d alpha = 0 and the Lie term rescales
        assert lbracket(scaled_r3, dx(3, 1, 2), dx(3, 2, 3)) == dx(3, 2, 3)

    def test_constant_closed_inputs_vanish(self, volume_r3):
        assert lbracket(volume_r3, dx(3, 1, 2), dx(3, 2, 3)).is_zero()

    def test_skew_counterexample_pair(self, normal_r4):
        alpha = dx(4, 3, 4)
        beta = x(4, 1) * dx(4, 1, 2)
        assert lbracket(normal_r4, alpha, beta).is_zero()
        assert lbracket(normal_r4, beta, alpha) == dx(4, 1, 4)
        assert skew_defect(normal_r4, alpha, beta) == dx(4, 1, 4)

    def test_skew_defect_doubles_on_diagonal(self, rng, scaled_r3):
        alpha = random_form(rng, 3, 2)
        assert skew_defect(scaled_r3, alpha, alpha) == lbracket(
            scaled_r3, alpha, alpha
        ) * Fraction(2)

    def test_skew_defect_sweeps_to_zero_when_order_is_top(self, rng, volume_r3, scaled_r3):
        # order n = m: the bracket is skew; includes nonconstant tensors
        for structure in (volume_r3, scaled_r3):
            for _ in range(6):
                alpha = random_form(rng, 3, 2)
                beta = random_form(rng, 3, 2)
                assert skew_defect(structure, alpha, beta).is_zero()

    def test_bilinearity(self, rng, normal_r4):
        a1 = random_form(rng, 4, 2)
        a2 = random_form(rng, 4, 2)
        b = random_form(rng, 4, 2)
        scale = Fraction(3, 2)
        lhs = lbracket(normal_r4, a1 + a2 * scale, b)
        rhs = lbracket(normal_r4, a1, b) + lbracket(normal_r4, a2, b) * scale
        assert lhs == rhs
        lhs = lbracket(normal_r4, b, a1 + a2 * scale)
        rhs = lbracket(normal_r4, b, a1) + lbracket(normal_r4, b, a2) * scale
        assert lhs == rhs

    def test_order_guard(self):
        poisson = NambuStructure(2, 2, dd(2, 1, 2))
        with pytest.raises(OrderError):
            lbracket(poisson, dx(2, 1), dx(2, 2))

    def test_degree_guard(self, scaled_r3):
        with pytest.raises(DegreeError):
            lbracket(scaled_r3, dx(3, 1), dx(3, 1, 2))


class TestSlotRules:
    """The two function-slot rules hold for any n-vector, exactly."""

    def test_slot2_rule_random(self, rng, scaled_r3, sum_r6):
        for structure in (scaled_r3, sum_r6):
            m = structure.m
            for _ in range(6):
                alpha = random_form(rng, m, 2)
                beta = random_form(rng, m, 2)
                f = random_polynomial(rng, m)
                assert function_slot2_residual(structure, alpha, f, beta).is_zero()

    def test_slot1_rule_random(self, rng, scaled_r3, sum_r6):
        for structure in (scaled_r3, sum_r6):
            m = structure.m
            for _ in range(6):
                alpha = random_form(rng, m, 2)
                beta = random_form(rng, m, 2)
                f = random_polynomial(rng, m)
                assert function_slot1_residual(structure, f, alpha, beta).is_zero()

    def test_constant_function_slot2(self, rng, scaled_r3):
        alpha = random_form(rng, 3, 2)
        beta = random_form(rng, 3, 2)
        c = Polynomial.constant(3, 5)
        assert lbracket(scaled_r3, alpha, beta * c) == lbracket(scaled_r3, alpha, beta) * c

    def test_slot1_frozen_example(self, volume_r3):
        # [[x1 a, b]] with a = dx2^dx3, b = dx1^dx2: both routes give zero
        alpha = dx(3, 2, 3)
        beta = dx(3, 1, 2)
        assert lbracket(volume_r3, alpha * x(3, 1), beta).is_zero()
        direct = lbracket(volume_r3, alpha, beta) * x(3, 1) - contract_vec(
            sharp(volume_r3, alpha), wedge(differential(x(3, 1)), beta)
        )
        assert direct.is_zero()


class TestDecompositionsAgainstDirect:
    """Each fast-path evaluation must equal the direct defining formula."""

    def test_anchor_pair_decomposition(self, rng, scaled_r3, sum_r6, normal_r4):
        for structure in (scaled_r3, sum_r6, normal_r4):
            basis = _SweepBasis(structure, 3)
            from nambu.algebroid import _anchor_pair_residual

            for _ in range(10):
                g = rng.randrange(len(basis.monomials))
                left = rng.choice(basis.index_sets)
                right = rng.choice(basis.index_sets)
                core = anchor_residual(
                    structure, Form.basis(structure.m, left), Form.basis(structure.m, right)
                )
                fast = _anchor_pair_residual(basis, g, left, right, core)
                direct = anchor_residual(
                    structure, basis.form(g, left), Form.basis(structure.m, right)
                )
                assert fast == direct

    def test_anchor_second_slot_linearity(self, rng, scaled_r3, sum_r6):
        for structure in (scaled_r3, sum_r6):
            m = structure.m
            for _ in range(5):
                alpha = random_form(rng, m, 2)
                beta = random_form(rng, m, 2)
                g = random_polynomial(rng, m)
                assert anchor_residual(structure, alpha, beta * g) == anchor_residual(
                    structure, alpha, beta
                ) * g

    def test_sharp_d_decomposition(self, rng, scaled_r3, sum_r6, normal_r4):
        from nambu.algebroid import _SharpDSweep

        for structure in (scaled_r3, sum_r6, normal_r4):
            basis = _SweepBasis(structure, 3)
            sweep = _SharpDSweep(basis)
            for _ in range(10):
                f = rng.randrange(len(basis.monomials))
                g = rng.randrange(len(basis.monomials))
                left = rng.choice(basis.index_sets)
                right = rng.choice(basis.index_sets)
                fast = sweep.residual(f, left, g, right)
                direct = sharp_d_residual(
                    structure, basis.form(f, left), basis.form(g, right)
                )
                assert fast == direct

    def test_leibniz_factorization(self, rng, scaled_r3, sum_r6, normal_r4):
        # residual(a,b,c) = lie_form(A(a,b), c) - (-1)^n S(a,b) c, any tensor
        for structure in (scaled_r3, sum_r6, normal_r4):
            m, n = structure.m, structure.n
            sign = -1 if n % 2 else 1
            for _ in range(5):
                alpha = random_form(rng, m, n - 1)
                beta = random_form(rng, m, n - 1)
                gamma = random_form(rng, m, n - 1)
                anchor = anchor_residual(structure, alpha, beta)
                scalar = sharp_d_residual(structure, alpha, beta)
                predicted = lie_form(anchor, gamma) - (gamma * scalar) * sign
                assert leibniz_residual(structure, alpha, beta, gamma) == predicted


class TestVerifiers:
    def test_anchor_passes_on_nambu_fixtures(self, scaled_r3, volume_r3, normal_r4):
        for structure in (scaled_r3, volume_r3, normal_r4):
            report = verify_anchor_morphism(structure)
            assert report.passed

    def test_anchor_fails_on_r6(self, sum_r6):
        report = verify_anchor_morphism(sum_r6, JetBasisConfig(max_degree=2))
        assert not report.passed
        from nambu.textio import parse_form

        alpha = parse_form(report.counterexample.inputs[0], 6, 2)
        beta = parse_form(report.counterexample.inputs[1], 6, 2)
        assert not anchor_residual(sum_r6, alpha, beta).is_zero()

    def test_sharp_d_passes_on_nambu_fixtures(self, scaled_r3, volume_r3, normal_r4):
        for structure in (scaled_r3, volume_r3, normal_r4):
            assert verify_sharp_d_identity(structure).passed

    def test_sharp_d_fails_on_r6(self, sum_r6):
        report = verify_sharp_d_identity(sum_r6, JetBasisConfig(max_degree=2))
        assert not report.passed

    def test_leibniz_passes_on_nambu_fixtures(self, scaled_r3, volume_r3, normal_r4):
        for structure in (scaled_r3, volume_r3, normal_r4):
            assert verify_leibniz_identity(structure).passed

    def test_leibniz_fails_on_r6_with_certified_triple(self, sum_r6):
        report = verify_leibniz_identity(sum_r6, JetBasisConfig(max_degree=2))
        assert not report.passed
        from nambu.textio import parse_form

        forms = [parse_form(t, 6, 2) for t in report.counterexample.inputs]
        assert not leibniz_residual(sum_r6, *forms).is_zero()

    def test_characterization_passes(self, scaled_r3, volume_r3, normal_r4):
        for structure in (scaled_r3, volume_r3, normal_r4):
            assert verify_characterization(structure).passed

    def test_anchor_spot_instance(self, scaled_r3):
        # [x3 d3, x3 d1] = x3 d1 = sharp of [[dx1^dx2, dx2^dx3]]
        a = dx(3, 1, 2)
        b = dx(3, 2, 3)
        lhs = lie_mv(sharp(scaled_r3, a), sharp(scaled_r3, b))
        assert lhs == x(3, 3) * dd(3, 1)
        assert lhs == sharp(scaled_r3, lbracket(scaled_r3, a, b))

    def test_auxiliary_invariance_identity_on_jets(self, scaled_r3, volume_r3):
        # L_{sharp a} lam = (-1)^n <d a, lam> lam over the jet basis
        for structure in (scaled_r3, volume_r3):
            sign = -1 if structure.n % 2 else 1
            basis = _SweepBasis(structure, 2)
            for g, indices in basis.elements():
                alpha = basis.form(g, indices)
                lhs = lie_mv(sharp(structure, alpha), structure.nvector)
                rhs = structure.nvector * pair(ext_d(alpha), structure.nvector)
                assert lhs == rhs * sign


class TestExactFormsRule:
    def test_residual_vanishes_on_random_functions(self, rng, scaled_r3, sum_r6):
        # holds for any n-vector: both sides reduce to the same expansion
        for structure in (scaled_r3, sum_r6):
            m = structure.m
            for _ in range(5):
                fs = [random_polynomial(rng, m, 2, 3) for _ in range(2)]
                gs = [random_polynomial(rng, m, 2, 3) for _ in range(2)]
                assert exact_forms_residual(structure, fs, gs).is_zero()

    def test_frozen_instance(self, scaled_r3):
        # [[d(x1)^d(x2), d(x2)^d(x3)]] = d{x1,x2,x2}^dx3 + dx2^d{x1,x2,x3}
        #                              = dx2 ^ d(x3) rescaled by the bracket
        lhs = lbracket(scaled_r3, dx(3, 1, 2), dx(3, 2, 3))
        rhs = wedge(differential(Polynomial.zero(3)), dx(3, 3)) + wedge(
            dx(3, 2), differential(x(3, 3))
        )
        assert lhs == rhs


class TestFormalWedges:
    def test_phi_basic(self):
        elt = FormalWedge.single([x(3, 1), x(3, 2)])
        assert phi(elt) == dx(3, 1, 2)

    def test_phi_repeated_factor(self):
        elt = FormalWedge.single([x(3, 1), x(3, 1)])
        assert phi(elt).is_zero()

    def test_phi_product_rule(self):
        elt = FormalWedge.single([x(3, 1) * x(3, 2), x(3, 3)])
        expected = wedge(
            x(3, 2) * dx(3, 1) + x(3, 1) * dx(3, 2), dx(3, 3)
        )
        assert phi(elt) == expected

    def test_no_normalization_of_terms(self):
        a = FormalWedge.single([x(3, 1), x(3, 2)])
        b = FormalWedge.single([x(3, 2), x(3, 1)])
        # stored terms differ even though phi/evaluation identify them
        assert (a + b).terms != (b + a).terms or a.terms != b.terms
        assert phi(a) == -phi(b)

    def test_fbracket_repeated_inputs_vanish_under_phi(self, scaled_r3):
        elt = FormalWedge.single([x(3, 1), x(3, 2)])
        result = fbracket_prime(scaled_r3, elt, elt)
        # {x1,x2,x1} = 0 and {x1,x2,x2} = 0 termwise
        assert phi(result).is_zero()
        for _, factors in result.terms:
            assert any(f.is_zero() for f in factors)

    def test_fbracket_constant_entries(self, scaled_r3):
        elt = FormalWedge.single([Polynomial.one(3), Polynomial.constant(3, 2)])
        result = fbracket_prime(scaled_r3, elt, elt)
        assert phi(result).is_zero()

    def test_phi_intertwines_brackets_random(self, rng, scaled_r3, normal_r4):
        for structure in (scaled_r3, normal_r4):
            m = structure.m
            for _ in range(5):
                left = FormalWedge.single(
                    [random_polynomial(rng, m, 2, 3) for _ in range(2)]
                )
                right = FormalWedge.single(
                    [random_polynomial(rng, m, 2, 3) for _ in range(2)]
                )
                lhs = phi(fbracket_prime(structure, left, right))
                rhs = lbracket(structure, phi(left), phi(right))
                assert lhs == rhs

    def test_phi_morphism_sweeps(self, scaled_r3, volume_r3):
        for structure in (scaled_r3, volume_r3):
            assert verify_phi_morphism(structure, JetBasisConfig(max_degree=2)).passed

    def test_arity_guard(self, scaled_r3):
        with pytest.raises(ArityError):
            fbracket_prime(
                scaled_r3,
                FormalWedge.single([x(3, 1)]),
                FormalWedge.single([x(3, 1)]),
            )

#include <gtest/gtest.h>

#include "oddsym/poisson.hpp"
#include "oddsym/random.hpp"

using namespace oddsym;

namespace {

CotangentChart darboux_chart(std::size_t pairs) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(even_var("x" + std::to_string(i)));
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(odd_var("xi" + std::to_string(i)));
    return CotangentChart(VariableTable::make(vars));
}

OddPoissonStructure darboux_pi(std::size_t pairs) {
    auto chart = darboux_chart(pairs);
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < pairs; ++i) p.emplace_back(i, pairs + i);
    return OddPoissonStructure::darboux(chart, p);
}

CotangentChart kk_chart(std::size_t n) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back(Variable{"th" + std::to_string(i), Parity::Odd, 1, Role::Coordinate});
    return CotangentChart(VariableTable::make(vars, true));
}

// Oracle: explicit second-order formula in the components of pi,
//   {f,g} = sum_{ij} (-1)^{|f|+|zi|+|zj|+|zj|(|f|+|zi|)} (dR_pj dR_pi pi) (dL_zi f)(dL_zj g).
SuperPolynomial component_oracle(const OddPoissonStructure& pi, const SuperPolynomial& f, const SuperPolynomial& g) {
    const auto& ch = pi.chart();
    const auto& t = *ch.base();
    Parity pf = f.parity_or(Parity::Even);
    SuperPolynomial r(ch.base());
    for (std::size_t i = 0; i < ch.dimension(); ++i)
        for (std::size_t j = 0; j < ch.dimension(); ++j) {
            auto c = ch.zero_section(poly_right_deriv(ch.momentum(j), poly_right_deriv(ch.momentum(i), pi.pi())));
            if (c.is_zero()) continue;
            int e = as_int(pf) + as_int(t.parity(i)) + as_int(t.parity(j)) + as_int(t.parity(j)) * (as_int(pf) + as_int(t.parity(i)));
            r += Rational((e & 1) ? -1 : 1) * c * poly_deriv(i, f) * poly_deriv(j, g);
        }
    return r;
}

}  // namespace

TEST(Poisson, CanonicalBracketExamples) {
    auto ch = CotangentChart(VariableTable::make({even_var("x")}));
    auto x = SuperPolynomial::variable(ch.full(), 0), p = SuperPolynomial::variable(ch.full(), 1);
    EXPECT_EQ(canonical_bracket(ch, x, p), SuperPolynomial::constant(ch.full(), 1));
    EXPECT_EQ(canonical_bracket(ch, x * x, p), Rational(2) * x);
    EXPECT_EQ(canonical_bracket(ch, p, x), SuperPolynomial::constant(ch.full(), -1));
}

TEST(Poisson, OddCoordinateMomentumPairing) {
    auto ch = CotangentChart(VariableTable::make({odd_var("t")}));
    auto t = SuperPolynomial::variable(ch.full(), 0), p = SuperPolynomial::variable(ch.full(), 1);
    EXPECT_EQ(canonical_bracket(ch, t, p), SuperPolynomial::constant(ch.full(), 1));
    EXPECT_EQ(canonical_bracket(ch, p, t), SuperPolynomial::constant(ch.full(), 1));
}

TEST(Poisson, DarbouxOddBracket) {
    auto pi = darboux_pi(1);
    auto x = SuperPolynomial::variable(pi.base(), "x1"), xi = SuperPolynomial::variable(pi.base(), "xi1");
    EXPECT_EQ(odd_bracket(pi, x, xi), SuperPolynomial::constant(pi.base(), 1));
    EXPECT_EQ(odd_bracket(pi, xi, x), SuperPolynomial::constant(pi.base(), -1));
    EXPECT_TRUE(odd_bracket(pi, x, x).is_zero());
    EXPECT_TRUE(jacobi_check(pi).ok);
}

TEST(Poisson, KirillovKostantBracketMatchesConstants) {
    for (auto c : {LieStructureConstants::sl2(), LieStructureConstants::sl2_split(), LieStructureConstants::heisenberg()}) {
        auto pi = OddPoissonStructure::kirillov_kostant(kk_chart(3), c);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                SuperPolynomial want(pi.base());
                for (std::size_t k = 0; k < 3; ++k) want += c.at(i, j, k) * SuperPolynomial::variable(pi.base(), k);
                auto ti = SuperPolynomial::variable(pi.base(), i), tj = SuperPolynomial::variable(pi.base(), j);
                EXPECT_EQ(odd_bracket(pi, ti, tj), want);
                EXPECT_EQ(component_oracle(pi, ti, tj), want);
            }
        EXPECT_TRUE(jacobi_check(pi).ok);
    }
}

TEST(Poisson, RescalingTheThirdComponentKeepsJacobi) {
    // In dimension 3 the Jacobiator is J(e1,e2,e3); changing c^3_{12} adds a
    // multiple of [e3,e3] = 0 to it, so this perturbation is still a Lie algebra.
    auto c = LieStructureConstants::sl2();
    c.set(0, 1, 2, 2);
    EXPECT_TRUE(c.satisfies_jacobi());
    EXPECT_TRUE(jacobi_check(OddPoissonStructure::kirillov_kostant(kk_chart(3), c)).ok);
}

TEST(Poisson, PerturbedConstantsFailJacobi) {
    auto c = LieStructureConstants::sl2();
    c.set(0, 1, 0, 1);
    EXPECT_FALSE(c.satisfies_jacobi());
    auto pi = OddPoissonStructure::kirillov_kostant(kk_chart(3), c);
    auto r = jacobi_check(pi);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.witness.is_zero());
    auto triple = find_jacobi_violation(pi);
    ASSERT_TRUE(triple.has_value());
    EXPECT_FALSE(triple->defect.is_zero());
}

TEST(Poisson, HamiltonianFields) {
    auto pi = darboux_pi(1);
    auto x = SuperPolynomial::variable(pi.base(), "x1");
    auto X = hamiltonian_field(pi, x);
    EXPECT_EQ(X.parity, Parity::Odd);
    EXPECT_TRUE(X.components[0].is_zero());
    EXPECT_EQ(X.components[1], SuperPolynomial::constant(pi.base(), 1));
    auto Z = hamiltonian_field(pi, SuperPolynomial::constant(pi.base(), 5));
    for (const auto& c : Z.components) EXPECT_TRUE(c.is_zero());

    auto c = LieStructureConstants::sl2();
    auto kk = OddPoissonStructure::kirillov_kostant(kk_chart(3), c);
    for (std::size_t i = 0; i < 3; ++i) {
        auto Xi = hamiltonian_field(kk, SuperPolynomial::variable(kk.base(), i));
        EXPECT_EQ(Xi.parity, Parity::Even);
        for (std::size_t j = 0; j < 3; ++j) {
            SuperPolynomial want(kk.base());
            for (std::size_t k = 0; k < 3; ++k) want += c.at(i, j, k) * SuperPolynomial::variable(kk.base(), k);
            EXPECT_EQ(Xi.components[j], want);
        }
    }
}

TEST(Poisson, MomentumDependenceRejected) {
    auto pi = darboux_pi(1);
    auto p = SuperPolynomial::variable(pi.chart().full(), pi.chart().momentum(0));
    auto x = pi.chart().lift(SuperPolynomial::variable(pi.base(), 0));
    EXPECT_THROW(odd_bracket(pi, p, x), DomainError);
}

TEST(Poisson, StructureValidation) {
    auto ch = darboux_chart(1);
    auto x = SuperPolynomial::variable(ch.full(), 0);
    EXPECT_THROW(OddPoissonStructure(ch, x), ParityError);
    auto pxi = SuperPolynomial::variable(ch.full(), ch.momentum(1));
    EXPECT_THROW(OddPoissonStructure(ch, pxi), DomainError);
    EXPECT_THROW((OddPoissonStructure::from_brackets(ch, {{{0, 0}, SuperPolynomial::constant(ch.base(), 1)}})), ParityError);
}

TEST(Poisson, MasterEquationExamples) {
    auto ch = kk_chart(3);
    OddPoissonStructure zero(ch, SuperPolynomial(ch.full()));
    auto Q0 = HomogeneousVectorField::zero(ch.base(), Parity::Odd);
    EXPECT_TRUE(master_equation_expand(zero, Q0, SuperPolynomial(ch.base())).all_zero());

    auto t = ch.base();
    auto phi = SuperPolynomial::variable(t, 0) * SuperPolynomial::variable(t, 1) * SuperPolynomial::variable(t, 2);
    EXPECT_TRUE(master_equation_expand(zero, Q0, phi).all_zero());
}

TEST(Poisson, MasterEquationKirillovKostantWithChevalleyEilenberg) {
    auto ch = kk_chart(3);
    auto c = LieStructureConstants::sl2();
    auto pi = OddPoissonStructure::kirillov_kostant(ch, c);
    auto Q = chevalley_eilenberg_field(ch.base(), c);
    // Trivial cobracket: Q = 0.
    auto trivial = master_equation_expand(pi, HomogeneousVectorField::zero(ch.base(), Parity::Odd), SuperPolynomial(ch.base()));
    EXPECT_TRUE(trivial.all_zero());

    // Q built from the same constants encodes the cobracket dual to the
    // bracket; for sl2 that is not a 1-cocycle, and the p_t^1 coefficient
    // records the failure of L_Q pi = 0.
    auto exp = master_equation_expand(pi, Q, SuperPolynomial(ch.base()));
    EXPECT_TRUE(exp.by_power[0].is_zero());
    EXPECT_FALSE(exp.by_power[1].is_zero());
    for (unsigned k = 2; k < exp.by_power.size(); ++k) EXPECT_TRUE(exp.by_power[k].is_zero());
    EXPECT_EQ(to_string(exp.by_power[1]), "-2*th1*th2*p_th1*p_th2 - 2*th1*th3*p_th1*p_th3 - 2*th2*th3*p_th2*p_th3");

    // Abelian constants: Q vanishes and everything is zero.
    auto ab = LieStructureConstants::abelian(3);
    auto pa = OddPoissonStructure::kirillov_kostant(ch, ab);
    EXPECT_TRUE(master_equation_expand(pa, chevalley_eilenberg_field(ch.base(), ab), SuperPolynomial(ch.base())).all_zero());
}

TEST(Poisson, MasterEquationBialgebroidTerm) {
    // With phi = 0 the p_t^1 coefficient is 2 {pi, Q^i p_i}.
    auto ch = kk_chart(3);
    Sampler rng(31);
    auto pi = OddPoissonStructure::kirillov_kostant(ch, LieStructureConstants::heisenberg());
    for (int k = 0; k < 10; ++k) {
        auto Q = HomogeneousVectorField::zero(ch.base(), Parity::Odd);
        for (std::size_t i = 0; i < 3; ++i) Q.components[i] = rng.polynomial(ch.base(), 2, 2, Parity::Even).filter([](const Monomial& m) { return m.total_degree() == 2; });
        auto exp = master_equation_expand(pi, Q, SuperPolynomial(ch.base()));
        auto want = Rational(2) * canonical_bracket(ch, pi.pi(), Q.as_linear_function(ch));
        EXPECT_EQ(exp.by_power[1], want);
    }
}

TEST(Poisson, MasterEquationDegreeViolation) {
    auto ch = kk_chart(3);
    OddPoissonStructure zero(ch, SuperPolynomial(ch.full()));
    auto Q0 = HomogeneousVectorField::zero(ch.base(), Parity::Odd);
    EXPECT_THROW(master_equation_expand(zero, Q0, SuperPolynomial::variable(ch.base(), 0)), DomainError);
}

TEST(PoissonProperty, CanonicalBracketAxioms) {
    auto base = VariableTable::make({even_var("x"), even_var("y"), odd_var("a"), odd_var("b")});
    CotangentChart ch(base);
    Sampler rng(17);
    for (int k = 0; k < 150; ++k) {
        auto pF = rng.parity(), pG = rng.parity();
        auto F = rng.polynomial(ch.full(), 3, 3, pF), G = rng.polynomial(ch.full(), 3, 3, pG), H = rng.polynomial(ch.full(), 3, 3);
        ASSERT_EQ(canonical_bracket(ch, F, G), Rational(-koszul(pF, pG)) * canonical_bracket(ch, G, F));
        ASSERT_EQ(canonical_bracket(ch, F, G * H),
                  canonical_bracket(ch, F, G) * H + Rational(koszul(pF, pG)) * (G * canonical_bracket(ch, F, H)));
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            auto z = SuperPolynomial::variable(ch.full(), ch.coordinate(i));
            auto zj = SuperPolynomial::variable(ch.full(), ch.coordinate(j));
            auto p = SuperPolynomial::variable(ch.full(), ch.momentum(j));
            auto pi_ = SuperPolynomial::variable(ch.full(), ch.momentum(i));
            EXPECT_EQ(canonical_bracket(ch, z, p), SuperPolynomial::constant(ch.full(), i == j ? 1 : 0));
            EXPECT_TRUE(canonical_bracket(ch, z, zj).is_zero());
            EXPECT_TRUE(canonical_bracket(ch, pi_, p).is_zero());
        }
}

TEST(PoissonProperty, CanonicalBracketJacobi) {
    auto base = VariableTable::make({even_var("x"), odd_var("a"), odd_var("b")});
    CotangentChart ch(base);
    Sampler rng(19);
    for (int k = 0; k < 80; ++k) {
        auto pF = rng.parity(), pG = rng.parity(), pH = rng.parity();
        auto F = rng.polynomial(ch.full(), 3, 2, pF), G = rng.polynomial(ch.full(), 3, 2, pG), H = rng.polynomial(ch.full(), 3, 2, pH);
        auto lhs = canonical_bracket(ch, F, canonical_bracket(ch, G, H));
        auto rhs = canonical_bracket(ch, canonical_bracket(ch, F, G), H) +
                   Rational(koszul(pF, pG)) * canonical_bracket(ch, G, canonical_bracket(ch, F, H));
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(PoissonProperty, OddBracketAxiomsForJacobiStructures) {
    std::vector<OddPoissonStructure> structures = {
        darboux_pi(2),
        OddPoissonStructure::kirillov_kostant(kk_chart(3), LieStructureConstants::sl2()),
        OddPoissonStructure::kirillov_kostant(kk_chart(3), LieStructureConstants::heisenberg()),
    };
    Sampler rng(23);
    for (const auto& pi : structures) {
        ASSERT_TRUE(jacobi_check(pi).ok);
        for (int k = 0; k < 60; ++k) {
            auto pf = rng.parity(), pg = rng.parity();
            auto f = rng.polynomial(pi.base(), 3, 3, pf), g = rng.polynomial(pi.base(), 3, 3, pg), h = rng.polynomial(pi.base(), 3, 3);
            auto fg = odd_bracket(pi, f, g);
            ASSERT_EQ(fg, component_oracle(pi, f, g));
            if (!fg.is_zero()) ASSERT_EQ(fg.parity(), pf + pg + Parity::Odd);
            ASSERT_EQ(fg, Rational(-koszul(pf + Parity::Odd, pg + Parity::Odd)) * odd_bracket(pi, g, f));
            ASSERT_EQ(odd_bracket(pi, f, g * h),
                      fg * h + Rational(koszul(pf + Parity::Odd, pg)) * (g * odd_bracket(pi, f, h)));
            ASSERT_TRUE(odd_jacobiator(pi, f, g, h.even_part()).is_zero());
            ASSERT_TRUE(odd_jacobiator(pi, f, g, h.odd_part()).is_zero());
        }
    }
}

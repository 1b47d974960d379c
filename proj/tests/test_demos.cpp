#include <gtest/gtest.h>

#include "oddsym/demos.hpp"
#include "oddsym/random.hpp"

using namespace oddsym;

namespace {

// Structure constants in the basis e'_i = sum_a T(a, i) e_a.
LieStructureConstants change_basis(const LieStructureConstants& c, const QMatrix& T) {
    const std::size_t n = c.dim;
    QMatrix Ti = inverse(T);
    LieStructureConstants out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Rational v = 0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        for (std::size_t m = 0; m < n; ++m) v += T(a, i) * T(b, j) * c.at(a, b, m) * Ti(k, m);
                out.at(i, j, k) = v;
            }
    return out;
}

LieStructureConstants gl2() {
    LieStructureConstants c(4);
    auto s = LieStructureConstants::sl2_split();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) c.at(i, j, k) = s.at(i, j, k);
    return c;
}

// [h, a] = a, [h, b] = -b, [a, b] = z: the oscillator algebra.
LieStructureConstants oscillator() {
    LieStructureConstants c(4);
    c.set(0, 1, 1, 1);
    c.set(0, 2, 2, -1);
    c.set(1, 2, 3, 1);
    return c;
}

void expect_line(const DemoReport& r, const std::string& name, bool ok) {
    const auto* l = r.find(name);
    ASSERT_NE(l, nullptr) << name;
    EXPECT_EQ(l->ok, ok) << r.str();
}

}  // namespace

TEST(CrossedProduct, StandardLieAlgebras) {
    for (const auto& c : {LieStructureConstants::sl2(), LieStructureConstants::sl2_split(), LieStructureConstants::heisenberg(),
                          LieStructureConstants::abelian(2), gl2(), oscillator()}) {
        auto r = crossed_product_verify(c, 10, 3);
        EXPECT_TRUE(r.ok()) << r.str();
    }
}

TEST(CrossedProduct, RandomBasesOfLieAlgebras) {
    Sampler rng(13);
    for (int t = 0; t < 4; ++t) {
        auto base = t % 2 ? oscillator() : LieStructureConstants::sl2();
        auto c = change_basis(base, rng.invertible(base.dim));
        ASSERT_TRUE(c.satisfies_jacobi());
        auto r = crossed_product_verify(c, 5, 7);
        EXPECT_TRUE(r.ok()) << r.str();
    }
}

TEST(CrossedProduct, PerturbedConstantsFailWithWitness) {
    auto c = LieStructureConstants::sl2();
    c.set(0, 1, 0, 1);
    ASSERT_FALSE(c.satisfies_jacobi());
    auto r = crossed_product_verify(c);
    EXPECT_FALSE(r.ok());
    expect_line(r, "d^2 = 0", false);
    expect_line(r, "d^2 = 0 exactly when the Jacobi identity holds", true);
    expect_line(r, "d(th_i) = e_i", true);
    EXPECT_FALSE(r.find("d^2 = 0")->detail.empty());
    EXPECT_NE(r.str().find("FAIL"), std::string::npos);
}

TEST(FormsModel, DeRhamSquaresToZero) {
    Sampler rng(2);
    FormsModel m(3);
    for (int t = 0; t < 30; ++t) {
        auto w = rng.polynomial(m.table(), 4, 4);
        EXPECT_TRUE(m.d(m.d(w)).is_zero());
        EXPECT_EQ(m.d_operator().apply(w), m.d(w));
    }
}

TEST(FormsModel, CartanFormulaForLieDerivative) {
    // independent check of lie_derivative: L_v = [d, i_v] for a vector field v
    Sampler rng(5);
    ContractionRepresentation rep(2);
    const auto& fm = rep.forms();
    const auto& ch = rep.chart();
    for (int t = 0; t < 6; ++t) {
        std::vector<SuperPolynomial> v;
        SuperPolynomial fv(ch.table());
        for (std::size_t i = 0; i < 2; ++i) {
            auto c = rng.polynomial(ch.table(), 2, 2, Parity::Even, ch.xs());
            fv += c * SuperPolynomial::variable(ch.table(), ch.xi(i));
            std::vector<SuperPolynomial> img;
            for (std::size_t j = 0; j < ch.table()->size(); ++j)
                img.push_back(j < 2 ? SuperPolynomial::variable(fm.table(), fm.x(j)) : SuperPolynomial(fm.table()));
            v.push_back(Substitution(ch.table(), fm.table(), img)(c));
        }
        auto cartan = supercommutator(fm.d_operator(), rep.contraction(fv));
        for (const auto& w : fm.spanning_set(2)) EXPECT_EQ(cartan.apply(w), fm.lie_derivative(v, w));
    }
}

TEST(ContractionRepresentation, EquationOneShadow) {
    for (std::size_t n = 1; n <= 2; ++n) {
        auto r = contraction_rep_check(n, 3, 12, 9);
        EXPECT_TRUE(r.ok()) << r.str();
    }
}

TEST(ContractionRepresentation, ThreeDimensionsSmallDegree) {
    auto r = contraction_rep_check(3, 1, 4, 2);
    EXPECT_TRUE(r.ok()) << r.str();
}

TEST(ContractionRepresentation, Examples) {
    auto r = contraction_rep_check(1, 2, 2, 1);
    expect_line(r, "f = d/dx, g = x d/dx gives d/dx", true);
    // functions commute: [i_x, [d, i_x]] = i_{x,x} = 0
    ContractionRepresentation rep(1);
    auto x = SuperPolynomial::variable(rep.chart().table(), 0);
    auto lhs = supercommutator(rep.contraction(x), supercommutator(rep.forms().d_operator(), rep.contraction(x)));
    EXPECT_TRUE(lhs.body().is_zero());
}

TEST(ContractionRepresentation, DimensionLimit) {
    EXPECT_THROW(ContractionRepresentation(4), DomainError);
    EXPECT_THROW(ContractionRepresentation(0), DomainError);
}

TEST(OddFourier, OneVariable) {
    OddFourier F(1);
    const auto& fm = F.forms();
    const auto& ch = F.chart();
    auto xi = SuperPolynomial::variable(ch.table(), ch.xi(0));
    EXPECT_EQ(F.forward(SuperPolynomial::constant(fm.table(), Rational(1))), xi);
    EXPECT_EQ(F.forward(SuperPolynomial::variable(fm.table(), fm.dx(0))), SuperPolynomial::constant(ch.table(), Rational(1)));
    EXPECT_EQ(odd_fourier(F, FourierDirection::SemidensitiesToForms, xi), SuperPolynomial::constant(fm.table(), Rational(1)));
}

TEST(OddFourier, IntertwinesAndInverts) {
    for (std::size_t n = 1; n <= 2; ++n) {
        auto r = fourier_check(n, 100, 4, 11, 6);
        EXPECT_TRUE(r.ok()) << r.str();
    }
}

TEST(OddFourier, ThreeVariables) {
    auto r = fourier_check(3, 20, 3, 4, 2);
    EXPECT_TRUE(r.ok()) << r.str();
}

TEST(OddFourier, WrongChartShape) {
    OddFourier F(1), G(2);
    EXPECT_THROW(F.forward(SuperPolynomial::constant(G.forms().table(), Rational(1))), StructuralError);
    EXPECT_THROW(F.backward(SuperPolynomial::constant(F.forms().table(), Rational(1))), StructuralError);
    EXPECT_THROW(OddFourier(0), StructuralError);
}

TEST(PairGroupoid, OneDimensional) {
    auto r = pair_groupoid_demo(1, 2, 2);
    EXPECT_TRUE(r.ok()) << r.str();
}

TEST(PairGroupoid, TwoDimensional) {
    auto r = pair_groupoid_demo(2, 2, 1);
    EXPECT_TRUE(r.ok()) << r.str();
}

TEST(PairGroupoid, KernelsComposeLikeOperators) {
    PairGroupoid G(1);
    const auto& X = G.space();
    Sampler rng(21);
    for (int t = 0; t < 10; ++t) {
        DiffOperator P = DiffOperator::multiplication(rng.polynomial(X.table(), 1, 2, Parity::Even)) *
                         DiffOperator::partial(X.table(), static_cast<std::size_t>(rng.uniform_int(0, 1)));
        DiffOperator Q = DiffOperator::multiplication(rng.polynomial(X.table(), 2, 2, Parity::Odd));
        EXPECT_EQ(G.convolve(G.kernel(P), G.kernel(Q)), G.kernel(P * Q));
    }
}

TEST(PairGroupoid, FiltrationOfGenerators) {
    PairGroupoid G(1);
    const auto& alg = G.algebra();
    EXPECT_EQ(G.filtration_degree(G.unit()), 0u);
    EXPECT_EQ(G.filtration_degree(G.image(alg.coordinate(0))), 0u);
    EXPECT_EQ(G.filtration_degree(G.image(alg.dsym(0))), 1u);
    EXPECT_EQ(G.filtration_degree(G.image(alg.dsym(1))), 1u);
    EXPECT_EQ(G.filtration_degree(G.image(alg.mul(alg.dsym(0), alg.dsym(1)))), 2u);
}

TEST(PairGroupoid, DimensionLimit) { EXPECT_THROW(PairGroupoid(3), DomainError); }

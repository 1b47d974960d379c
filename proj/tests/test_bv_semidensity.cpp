#include <gtest/gtest.h>

#include "oddsym/bv/semidensity.hpp"
#include "oddsym/random.hpp"

using namespace oddsym;

namespace {

Rational double_factorial_odd(unsigned k) {  // (k-1)!! for even k
    Rational r = 1;
    for (unsigned j = 1; j < k; j += 2) r *= j;
    return r;
}

// Oracle: integral against exp(-sum x_i^2), with the common pi^{n/2} dropped;
// odd variables are integrated xi_1 first.
Rational gauss_integral(const DarbouxChart& chart, const SuperPolynomial& h) {
    auto top = berezin_integrate(chart.xis(), h);
    Rational total = 0;
    for (const auto& [m, c] : top.terms()) {
        Rational v = c;
        for (std::size_t i = 0; i < chart.pairs() && sgn(v) != 0; ++i) {
            unsigned k = m[chart.x(i)];
            if (k & 1) {
                v = 0;
            } else {
                v *= double_factorial_odd(k) / Rational(Integer(1) << (k / 2));
            }
        }
        total += v;
    }
    return total;
}

// P acting on q * exp(-x^2) equals (conj(P) q) * exp(-x^2): D(x) -> D(x) - 2x.
DiffOperator conjugate_by_gaussian(const DarbouxChart& chart, const DiffOperator& P) {
    const auto& base = chart.table();
    const std::size_t n = base->size();
    DiffOperator r(base);
    for (const auto& [m, c] : P.body().terms()) {
        Monomial g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = m[i];
        DiffOperator term = DiffOperator::multiplication(SuperPolynomial::monomial(base, g, c));
        for (std::size_t v = 0; v < n; ++v)
            for (unsigned k = 0; k < m[n + v]; ++k) {
                DiffOperator f = DiffOperator::partial(base, v);
                if (!base->is_odd(v))
                    f = f - DiffOperator::multiplication(SuperPolynomial::variable(base, v) * Rational(2));
                term = term * f;
            }
        r = r + term;
    }
    return r;
}

}  // namespace

TEST(BvLaplacian, OnSimpleCoefficients) {
    auto ch = DarbouxChart::standard(1);
    auto x = SuperPolynomial::variable(ch.table(), "x");
    auto xi = SuperPolynomial::variable(ch.table(), "xi");
    EXPECT_EQ(bv_delta(ch, x * xi), SuperPolynomial::constant(ch.table(), 1));
    EXPECT_EQ(bv_delta(ch, xi * x * x), x * Rational(2));
    EXPECT_TRUE(bv_delta(ch, x * x).is_zero());
    auto bar = ch.bar();
    EXPECT_EQ(bv_delta(bar, x * xi), SuperPolynomial::constant(ch.table(), -1));
}

TEST(BvLaplacian, SquaresToZeroOnRandomCoefficients) {
    Sampler rng(11);
    for (std::size_t pairs = 1; pairs <= 3; ++pairs) {
        auto ch = DarbouxChart::standard(pairs);
        for (int k = 0; k < 60; ++k) {
            auto s = rng.polynomial(ch.table(), 5, 6);
            EXPECT_TRUE(bv_delta(ch, bv_delta(ch, s)).is_zero()) << to_string(s);
        }
        auto D = DiffOperator::bv_laplacian(ch);
        EXPECT_TRUE((D * D).body().is_zero());
    }
}

TEST(DiffOperator, ApplyMatchesComposition) {
    Sampler rng(3);
    auto ch = DarbouxChart::standard(2);
    auto dbl = DiffOperator(ch.table()).doubled();
    for (int k = 0; k < 40; ++k) {
        auto P = DiffOperator::from_body(ch.table(), rng.polynomial(dbl, 3, 3));
        auto Q = DiffOperator::from_body(ch.table(), rng.polynomial(dbl, 3, 3));
        auto s = rng.polynomial(ch.table(), 4, 4);
        EXPECT_EQ((P * Q).apply(s), P.apply(Q.apply(s)));
    }
}

TEST(FormalAdjoint, Examples) {
    auto ch = DarbouxChart::standard(1);
    const auto& t = ch.table();
    auto dx = DiffOperator::partial(t, 0);
    auto dxi = DiffOperator::partial(t, 1);
    EXPECT_EQ(formal_adjoint(dx), dx * Rational(-1));
    EXPECT_EQ(formal_adjoint(dxi), dxi * Rational(-1));
    auto x = DiffOperator::multiplication(SuperPolynomial::variable(t, "x"));
    EXPECT_EQ(formal_adjoint(x), x);
    // (x d/dx)* = -d/dx x = -x d/dx - 1
    auto xdx = x * dx;
    EXPECT_EQ(formal_adjoint(xdx), (xdx + DiffOperator::multiplication(SuperPolynomial::constant(t, 1))) * Rational(-1));
    for (std::size_t n = 1; n <= 3; ++n) {
        auto c = DarbouxChart::standard(n);
        auto D = DiffOperator::bv_laplacian(c);
        EXPECT_EQ(formal_adjoint(D), D);
        EXPECT_EQ(formal_adjoint(DiffOperator::bv_laplacian(c.bar())), DiffOperator::bv_laplacian(c.bar()));
    }
}

TEST(FormalAdjoint, IsAnInvolution) {
    Sampler rng(5);
    auto ch = DarbouxChart::standard(2);
    auto dbl = DiffOperator(ch.table()).doubled();
    for (int k = 0; k < 40; ++k) {
        auto P = DiffOperator::from_body(ch.table(), rng.polynomial(dbl, 4, 4));
        EXPECT_EQ(formal_adjoint(formal_adjoint(P)), P);
    }
}

TEST(FormalAdjoint, AgreesWithGaussianPairing) {
    Sampler rng(17);
    for (std::size_t n = 1; n <= 2; ++n) {
        auto ch = DarbouxChart::standard(n);
        auto dbl = DiffOperator(ch.table()).doubled();
        for (int k = 0; k < 50; ++k) {
            Parity pp = rng.parity(), pa = rng.parity();
            auto P = DiffOperator::from_body(ch.table(), rng.polynomial(dbl, 3, 3, pp));
            auto alpha = rng.polynomial(ch.table(), 3, 3, pa);
            auto beta = rng.polynomial(ch.table(), 3, 3);
            Rational lhs = gauss_integral(ch, P.apply(alpha) * beta);
            Rational rhs = gauss_integral(ch, alpha * conjugate_by_gaussian(ch, formal_adjoint(P)).apply(beta));
            EXPECT_EQ(lhs, rhs * Rational(koszul(pp, pa))) << P.str();
        }
    }
}

TEST(LieDerivative, CommutatorWithMultiplication) {
    Sampler rng(23);
    for (std::size_t n = 1; n <= 2; ++n) {
        auto ch = DarbouxChart::standard(n);
        for (int k = 0; k < 100; ++k) {
            Parity pf = rng.parity();
            auto f = rng.polynomial(ch.table(), 4, 3, pf);
            auto s = rng.polynomial(ch.table(), 4, 4);
            auto lhs = bv_delta(ch, f * s) - f * bv_delta(ch, s) * Rational(pf == Parity::Odd ? -1 : 1);
            EXPECT_EQ(lhs, lie_derivative_semidensity(ch, f, s)) << to_string(f) << " | " << to_string(s);
        }
    }
}

TEST(LieDerivative, CoordinateExample) {
    auto ch = DarbouxChart::standard(1);
    auto x = SuperPolynomial::variable(ch.table(), "x");
    auto xi = SuperPolynomial::variable(ch.table(), "xi");
    auto s = x * x * xi + x;
    // [Delta, x] s = d s / d xi
    EXPECT_EQ(lie_derivative_semidensity(ch, x, s), poly_deriv(1, s));
}

TEST(DarbouxTransform, ScalingHasConstantRoot) {
    auto ch = DarbouxChart::standard(1);
    const auto& t = ch.table();
    auto phi = Substitution::from_map(t, t, {{"x", SuperPolynomial::variable(t, "x") * Rational(2)},
                                             {"xi", SuperPolynomial::variable(t, "xi") * Rational(1, 2)}});
    EXPECT_EQ(berezinian(ch, phi), SuperPolynomial::constant(t, 4));
    EXPECT_EQ(darboux_transform(ch, phi, SuperPolynomial::constant(t, 1)), SuperPolynomial::constant(t, 2));
    auto flip = linear_block_map(ch, QMatrix(1, 1, {-3}));
    EXPECT_EQ(darboux_transform(ch, flip, SuperPolynomial::variable(t, "x")), SuperPolynomial::variable(t, "x") * Rational(-9));
}

TEST(DarbouxTransform, RejectsNonSymplecticMaps) {
    auto ch = DarbouxChart::standard(1);
    const auto& t = ch.table();
    auto phi = Substitution::from_map(t, t, {{"x", SuperPolynomial::variable(t, "x") * Rational(2)}});
    EXPECT_THROW(darboux_transform(ch, phi, SuperPolynomial::constant(t, 1)), ContractError);
}

TEST(DarbouxTransform, RootErrors) {
    auto ch = DarbouxChart::standard(1);
    const auto& t = ch.table();
    EXPECT_THROW(detail::sqrt_unit(SuperPolynomial::constant(t, 2)), UnsupportedMapError);
    EXPECT_THROW(detail::sqrt_unit(SuperPolynomial::constant(t, -4)), UnsupportedMapError);
    EXPECT_THROW(detail::sqrt_unit(SuperPolynomial::variable(t, "x") + SuperPolynomial::constant(t, 1)), UnsupportedMapError);
    EXPECT_THROW(detail::invert_unit(SuperPolynomial::variable(t, "x") + SuperPolynomial::constant(t, 1)), SingularityError);
    auto u = SuperPolynomial::constant(t, 9) + SuperPolynomial::variable(t, "x") * SuperPolynomial::variable(t, "xi");
    auto r = detail::sqrt_unit(u);
    EXPECT_EQ(r * r, u);
    EXPECT_EQ(detail::invert_unit(u) * u, SuperPolynomial::constant(t, 1));
}

TEST(DarbouxTransform, CommutesWithLaplacian) {
    Sampler rng(31);
    std::vector<std::pair<DarbouxChart, Substitution>> maps;
    auto c1 = DarbouxChart::standard(1);
    auto c2 = DarbouxChart::standard(2);
    auto c3 = DarbouxChart::standard(3);
    auto v = [](const DarbouxChart& c, const char* n) { return SuperPolynomial::variable(c.table(), n); };
    maps.emplace_back(c1, linear_block_map(c1, QMatrix(1, 1, {Rational(5, 2)})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {1, 2, 0, 1})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {0, 1, 1, 0})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {2, 1, 1, 1})));
    maps.emplace_back(c2, hamiltonian_flow(c2, v(c2, "x2") * v(c2, "x2") * v(c2, "xi1")));
    maps.emplace_back(c2, hamiltonian_flow(c2, v(c2, "x1") * v(c2, "x1") * v(c2, "x1") * v(c2, "xi2") * Rational(-1, 3)));
    maps.emplace_back(c3, hamiltonian_flow(c3, v(c3, "xi1") * v(c3, "xi2") * v(c3, "xi3")));
    maps.emplace_back(c3, hamiltonian_flow(c3, v(c3, "x1") * v(c3, "xi1") * v(c3, "xi2") * v(c3, "xi3")));
    maps.emplace_back(c3, hamiltonian_flow(c3, (v(c3, "x2") + v(c3, "x1") * v(c3, "x3")) * v(c3, "xi1") * v(c3, "xi2") * v(c3, "xi3")));
    for (const auto& [ch, phi] : maps) {
        for (int k = 0; k < 15; ++k) {
            auto s = rng.polynomial(ch.table(), 4, 5);
            auto lhs = bv_delta(ch, darboux_transform(ch, phi, s));
            auto rhs = darboux_transform(ch, phi, bv_delta(ch, s));
            EXPECT_EQ(lhs, rhs) << "s = " << to_string(s);
        }
    }
}

TEST(DarbouxTransform, FlowOfEvenFunctionIsRejected) {
    auto ch = DarbouxChart::standard(1);
    EXPECT_THROW(hamiltonian_flow(ch, SuperPolynomial::variable(ch.table(), "x")), ParityError);
}

#include <gtest/gtest.h>

#include <algorithm>

#include "oddsym/polynomial.hpp"
#include "oddsym/random.hpp"

using namespace oddsym;

namespace {

TablePtr small_table() {
    return VariableTable::make({even_var("x"), even_var("y"), odd_var("t1"), odd_var("t2"), odd_var("t3")});
}

// Oracle: a product of generators written as a word, sorted by bubble sort
// with explicit transposition signs.
SuperPolynomial word_oracle(const TablePtr& t, std::vector<std::size_t> letters) {
    int sign = 1;
    for (std::size_t i = 0; i < letters.size(); ++i)
        for (std::size_t j = 0; j + 1 < letters.size() - i; ++j)
            if (letters[j] > letters[j + 1]) {
                if (t->is_odd(letters[j]) && t->is_odd(letters[j + 1])) sign = -sign;
                std::swap(letters[j], letters[j + 1]);
            }
    Monomial m(t->size());
    for (auto l : letters) {
        if (t->is_odd(l) && m[l]) return SuperPolynomial(t);
        ++m[l];
    }
    return SuperPolynomial::monomial(t, m, sign);
}

// Oracle: integrate the innermost odd letter by moving it to the front of a
// word through explicit adjacent transpositions.
Rational berezin_word_oracle(const TablePtr& t, std::vector<std::size_t> word, const std::vector<std::size_t>& order) {
    int sign = 1;
    for (auto v : order) {
        auto it = std::find(word.begin(), word.end(), v);
        if (it == word.end()) return 0;
        for (auto jt = word.begin(); jt != it; ++jt)
            if (t->is_odd(*jt)) sign = -sign;
        word.erase(it);
    }
    return word.empty() ? Rational(sign) : Rational(0);
}

}  // namespace

TEST(GradedCore, OddTranspositionSign) {
    auto t = small_table();
    auto t1 = SuperPolynomial::variable(t, "t1"), t2 = SuperPolynomial::variable(t, "t2");
    EXPECT_EQ(t2 * t1, -(t1 * t2));
    EXPECT_EQ(to_string(t2 * t1), "-t1*t2");
    EXPECT_TRUE((t1 * t1).is_zero());
}

TEST(GradedCore, NilpotentCrossTermsCancel) {
    auto t = small_table();
    auto x = SuperPolynomial::variable(t, "x");
    auto tt = SuperPolynomial::variable(t, "t1") * SuperPolynomial::variable(t, "t2");
    EXPECT_EQ((x + tt) * (x - tt), x * x);
}

TEST(GradedCore, LeftDerivativeExamples) {
    auto t = small_table();
    auto x = SuperPolynomial::variable(t, "x");
    auto t1 = SuperPolynomial::variable(t, "t1"), t2 = SuperPolynomial::variable(t, "t2");
    EXPECT_EQ(poly_deriv("t1", t1 * t2), t2);
    EXPECT_EQ(poly_deriv("t2", t1 * t2), -t1);
    EXPECT_EQ(poly_deriv("x", x * x * t1), Rational(2) * x * t1);
    EXPECT_THROW(poly_deriv("nope", x), StructuralError);
}

TEST(GradedCore, BerezinExamples) {
    auto t = small_table();
    auto t1 = SuperPolynomial::variable(t, "t1"), t2 = SuperPolynomial::variable(t, "t2");
    EXPECT_EQ(berezin_integrate("t1", t1), SuperPolynomial::constant(t, 1));
    EXPECT_TRUE(berezin_integrate("t1", SuperPolynomial::constant(t, 1)).is_zero());
    auto v = berezin_integrate(std::vector<std::size_t>{t->index("t1"), t->index("t2")}, t1 * t2);
    EXPECT_EQ(v, SuperPolynomial::constant(t, 1));
    EXPECT_EQ(v.constant_term(), berezin_word_oracle(t, {2, 3}, {2, 3}));
    EXPECT_THROW(berezin_integrate("x", t1), StructuralError);
}

TEST(GradedCore, BerezinMatchesPermutationOracle) {
    auto t = small_table();
    std::vector<std::vector<std::size_t>> words = {{2, 3, 4}, {4, 3, 2}, {3, 2, 4}, {4, 2, 3}, {2, 4, 3}, {3, 4, 2}};
    std::vector<std::vector<std::size_t>> orders = words;
    for (const auto& w : words)
        for (const auto& o : orders) {
            auto p = SuperPolynomial::word(t, w);
            EXPECT_EQ(berezin_integrate(o, p).constant_term(), berezin_word_oracle(t, w, o));
        }
}

TEST(GradedCore, SubstitutionExamples) {
    auto t = small_table();
    auto x = SuperPolynomial::variable(t, "x");
    auto tt = SuperPolynomial::variable(t, "t1") * SuperPolynomial::variable(t, "t2");
    EXPECT_EQ(substitute(Substitution::identity(t), x * x), x * x);
    auto s = Substitution::from_map(t, t, {{"x", x + tt}});
    EXPECT_EQ(s(x * x), x * x + Rational(2) * x * tt);
    EXPECT_THROW(Substitution::from_map(t, t, {{"t1", x}}), ParityError);
    EXPECT_THROW(Substitution::from_map(t, t, {{"w", x}}), StructuralError);
}

TEST(GradedCore, MismatchedTablesRejected) {
    auto a = SuperPolynomial::variable(small_table(), "x");
    auto b = SuperPolynomial::variable(VariableTable::make({even_var("x")}), "x");
    EXPECT_THROW(a * b, StructuralError);
}

TEST(GradedCore, TableInvariants) {
    EXPECT_THROW(VariableTable::make({even_var("x"), odd_var("x")}), StructuralError);
    EXPECT_THROW(VariableTable::make({Variable{"x", Parity::Even, 1, Role::Coordinate}}, true), ParityError);
}

TEST(GradedCoreProperty, WordProductMatchesOracle) {
    auto t = small_table();
    Sampler rng(11);
    for (int k = 0; k < 300; ++k) {
        std::vector<std::size_t> w;
        int len = rng.uniform_int(0, 6);
        for (int i = 0; i < len; ++i) w.push_back(static_cast<std::size_t>(rng.uniform_int(0, 4)));
        EXPECT_EQ(SuperPolynomial::word(t, w), word_oracle(t, w));
    }
}

TEST(GradedCoreProperty, AlgebraAxioms) {
    auto t = VariableTable::make(
        {even_var("x"), even_var("y"), even_var("z"), odd_var("a"), odd_var("b"), odd_var("c"), odd_var("e")});
    Sampler rng(7);
    for (int k = 0; k < 200; ++k) {
        auto pa = rng.parity(), pb = rng.parity();
        auto a = rng.polynomial(t, 5, 4, pa), b = rng.polynomial(t, 5, 4, pb), c = rng.polynomial(t, 5, 4);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * b, Rational(koszul(pa, pb)) * (b * a));
        std::size_t v = static_cast<std::size_t>(rng.uniform_int(0, 6));
        std::size_t w = static_cast<std::size_t>(rng.uniform_int(0, 6));
        // graded Leibniz
        auto lhs = poly_deriv(v, a * c);
        auto rhs = poly_deriv(v, a) * c + Rational(koszul(t->parity(v), pa)) * (a * poly_deriv(v, c));
        ASSERT_EQ(lhs, rhs);
        if (v != w) {
            ASSERT_EQ(poly_deriv(v, poly_deriv(w, c)),
                      Rational(koszul(t->parity(v), t->parity(w))) * poly_deriv(w, poly_deriv(v, c)));
        } else if (t->is_odd(v)) {
            ASSERT_TRUE(poly_deriv(v, poly_deriv(v, c)).is_zero());
        }
        if (t->is_odd(v)) ASSERT_TRUE(berezin_integrate(v, poly_deriv(v, c)).is_zero());
        ASSERT_EQ(a, a.even_part() + a.odd_part());
    }
}

TEST(GradedCoreProperty, RightDerivativeRelation) {
    auto t = small_table();
    Sampler rng(5);
    for (int k = 0; k < 200; ++k) {
        auto p = rng.parity();
        auto a = rng.polynomial(t, 4, 4, p);
        for (std::size_t v = 0; v < t->size(); ++v) {
            // dR_v a = (-1)^{|v|(|a|+1)} dL_v a
            int s = koszul(t->parity(v), p + Parity::Odd);
            ASSERT_EQ(poly_right_deriv(v, a), Rational(s) * poly_deriv(v, a));
        }
    }
}

TEST(GradedCoreProperty, SubstitutionComposes) {
    auto t = small_table();
    Sampler rng(3);
    for (int k = 0; k < 100; ++k) {
        std::vector<SuperPolynomial> i1, i2;
        for (std::size_t v = 0; v < t->size(); ++v) {
            i1.push_back(rng.polynomial(t, 2, 2, t->parity(v)));
            i2.push_back(rng.polynomial(t, 2, 2, t->parity(v)));
        }
        Substitution sigma(t, t, i1), tau(t, t, i2);
        auto a = rng.polynomial(t, 3, 3);
        ASSERT_EQ(sigma.after(tau)(a), sigma(tau(a)));
    }
}

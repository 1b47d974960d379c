#include <gtest/gtest.h>

#include "oddsym/io.hpp"
#include "oddsym/random.hpp"
#include "test_helpers.hpp"

using namespace oddsym;

namespace {

std::string data(const std::string& f) { return std::string(ODDSYM_TEST_DATA) + "/" + f; }

Rational cval(const std::string& s) { return constant_value(parse_expression(s)); }

std::string parse_error_of(const std::string& text) {
    try {
        parse_definition_text(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

TablePtr small_table() { return VariableTable::make({even_var("x"), odd_var("t1"), odd_var("t2")}); }

}  // namespace

TEST(Expression, Precedence) {
    EXPECT_EQ(cval("1 + 2*3^2"), 19);
    EXPECT_EQ(cval("-2^2"), -4);
    EXPECT_EQ(cval("(-2)^2"), 4);
    EXPECT_EQ(cval("3/4 - 1/4"), Rational(1, 2));
    EXPECT_EQ(cval("2 3"), 6);
    EXPECT_EQ(cval("1 - 2 - 3"), -4);
    EXPECT_EQ(cval("12/4/3"), 1);
    EXPECT_EQ(cval("2^(3)"), 8);
    EXPECT_EQ(cval("7^0"), 1);
}

TEST(Expression, SyntaxErrorsCarryColumn) {
    for (const char* bad : {"1 +", "(1", "1 $", "", "x^", "x^y", "delta x", "2^99999"}) {
        EXPECT_THROW(parse_expression(bad), ParseError) << bad;
    }
    try {
        parse_expression("1 + )");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
    }
    EXPECT_THROW(cval("1/0"), ParseError);
    EXPECT_THROW(cval("1/(2-2)"), ParseError);
    EXPECT_THROW(cval("x"), ParseError);
}

TEST(Expression, Polynomials) {
    auto t = small_table();
    auto x = SuperPolynomial::variable(t, 0), t1 = SuperPolynomial::variable(t, 1), t2 = SuperPolynomial::variable(t, 2);
    EXPECT_EQ(evaluate_polynomial(t, parse_expression("t2*t1")), t1 * t2 * Rational(-1));
    EXPECT_TRUE(evaluate_polynomial(t, parse_expression("t1 t1")).is_zero());
    EXPECT_EQ(evaluate_polynomial(t, parse_expression("(x + t1 t2)*(x - t1 t2)")), x * x);
    EXPECT_EQ(evaluate_polynomial(t, parse_expression("x^3/2 - 1")), x * x * x * Rational(1, 2) - SuperPolynomial::constant(t, 1));
    try {
        evaluate_polynomial(t, parse_expression("x + y"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("'y'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos);
    }
    EXPECT_THROW(evaluate_polynomial(t, parse_expression("d(x)")), ParseError);
    EXPECT_THROW(evaluate_polynomial(t, parse_expression("delta(x)")), ParseError);
    EXPECT_THROW(evaluate_polynomial(t, parse_expression("exp(-x^2)")), ParseError);
}

TEST(Expression, RenderingRoundTrip) {
    Sampler rng(3);
    auto t = small_table();
    for (int i = 0; i < 50; ++i) {
        auto p = rng.polynomial(t, 4, 4);
        EXPECT_EQ(evaluate_polynomial(t, parse_expression(to_string(p))), p) << to_string(p);
    }
}

TEST(Expression, DeformedProductsAreNormalised) {
    auto f = read_definition_file(data("darboux.def"));
    DeformedAlgebra alg(f.poisson());
    ASSERT_TRUE(f.expression);
    auto v = evaluate_deformed(alg, *f.expression);
    // d(xi) x = x d(xi) - {x, xi}
    EXPECT_EQ(v, alg.coordinate(0) * alg.dsym(1) - alg.constant(1));
    EXPECT_EQ(alg.render(v), "x * d(xi) - 1");
    EXPECT_EQ(evaluate_deformed(alg, parse_expression("d(x xi)")), alg.d(alg.mul(alg.coordinate(0), alg.coordinate(1))));
    EXPECT_TRUE(evaluate_deformed(alg, parse_expression("d(d(x^2 xi))")).is_zero());
}

TEST(Expression, DeformedRenderingRoundTrip) {
    for (const char* file : {"darboux.def", "sl2.def"}) {
        auto f = read_definition_file(data(file));
        DeformedAlgebra alg(f.poisson());
        Sampler rng(8);
        for (int i = 0; i < 40; ++i) {
            auto a = alg.random_element(rng, 3, 4);
            EXPECT_EQ(evaluate_deformed(alg, parse_expression(alg.render(a))), a) << alg.render(a);
        }
    }
}

TEST(Expression, Distributions) {
    auto f = read_definition_file(data("lagrangian.def"));
    auto ch = f.darboux_chart();
    auto v = evaluate_distribution(ch, *f.expression);
    QMatrix row(1, 2), Q(2, 2);
    row(0, 0) = 1;
    row(0, 1) = 1;
    Q(0, 0) = 1;
    Q(1, 1) = 1;
    Q(0, 1) = Rational(1, 2);
    Q(1, 0) = Rational(1, 2);
    auto one = SuperPolynomial::constant(ch.table(), 1);
    auto want = DistributionalSemidensity::delta(ch, row, one) * DistributionalSemidensity::gaussian(ch, Q, one);
    EXPECT_EQ(v, want);

    EXPECT_EQ(evaluate_distribution(ch, parse_expression("delta'(x1)")),
              DistributionalSemidensity::raw(ch, RawDistributionTerm{QMatrix(1, 2, {1, 0}), {1}, one, QMatrix(2, 2)}));
    EXPECT_EQ(evaluate_distribution(ch, parse_expression("delta^(2)(2 x1)")),
              DistributionalSemidensity::raw(ch, RawDistributionTerm{QMatrix(1, 2, {2, 0}), {2}, one, QMatrix(2, 2)}));
    EXPECT_EQ(evaluate_distribution(ch, parse_expression("x1 * delta(x1)")).is_zero(), true);

    for (const char* bad : {"exp(x1)", "exp(-x1^3)", "exp(-xi1 xi2)", "delta(x1^2)", "delta(xi1)", "delta(0)", "d(x1)", "delta(x1) delta(2 x1)"}) {
        EXPECT_ANY_THROW(evaluate_distribution(ch, parse_expression(bad))) << bad;
    }
    EXPECT_THROW(evaluate_distribution(ch, parse_expression("exp(x1)")), ParseError);
}

TEST(Expression, DistributionRenderingRoundTrip) {
    auto ch = DarbouxChart::standard(2);
    auto e = parse_expression("(1 + x1 xi2) delta(x1 - 2 x2) * exp(-(x1^2 + x2^2)) + xi1 xi2 * exp(-(3 x1^2 + x1 x2 + x2^2))");
    auto d = evaluate_distribution(ch, e);
    for (const auto& s : {d, d.derivative_x(0), d.derivative_x(1).derivative_x(1), bv_delta(d)}) {
        EXPECT_EQ(evaluate_distribution(ch, parse_expression(s.render())), s) << s.render();
    }
}

TEST(DefinitionFile, LieSection) {
    auto f = read_definition_file(data("sl2.def"));
    ASSERT_TRUE(f.lie);
    EXPECT_EQ(f.lie->c, LieStructureConstants::sl2().c);
    EXPECT_TRUE(f.graded);
    EXPECT_EQ(f.poisson().pi(), testing_helpers::kk_pi(LieStructureConstants::sl2()).pi());
    EXPECT_TRUE(jacobi_check(f.poisson()).ok);

    auto h = read_definition_file(data("heisenberg.def"));
    EXPECT_EQ(h.base()->size(), 3u);
    EXPECT_EQ(h.lie->c, LieStructureConstants::heisenberg().c);

    auto named = parse_definition_text("[variables]\na: odd\nb: odd\n[lie]\nc[b,a]^a = 2\n");
    EXPECT_EQ(named.lie->at(0, 1, 0), -2);
    EXPECT_EQ(named.lie->at(1, 0, 0), 2);
}

TEST(DefinitionFile, PoissonSection) {
    auto p = read_definition_file(data("perturbed.def"));
    EXPECT_FALSE(p.graded);
    auto pi = p.poisson();
    EXPECT_FALSE(jacobi_check(pi).ok);
    EXPECT_EQ(to_string(pi.pi()), to_string(testing_helpers::kk_pi(testing_helpers::perturbed_sl2()).pi()));

    auto d = read_definition_file(data("darboux.def"));
    EXPECT_EQ(d.poisson().coordinate_bracket(0, 1), SuperPolynomial::constant(d.base(), 1));

    auto none = parse_definition_text("[variables]\nx: even\n");
    EXPECT_TRUE(none.poisson().is_zero());
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\n[poisson]\n{x,y} = 1\n").poisson(), ParseError);
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\n[poisson]\n{x,x} = 1\n{x,x} = 1\n").poisson(), ParseError);
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\ny: even\n[poisson]\n{x,y} = 1\n").poisson(), ParityError);
}

TEST(DefinitionFile, MalformedInputs) {
    EXPECT_THROW(read_definition_file(data("malformed.def")), ParseError);
    EXPECT_NE(parse_error_of("[variables]\nth1: odd\n\n[poisson]\n\n{th1,th2 = th1\n").find("line 6"), std::string::npos);
    EXPECT_THROW(read_definition_file(data("does-not-exist.def")), ParseError);
    const char* bad[] = {
        "x: even\n",
        "[vars]\nx: even\n",
        "[variables]\nx: even\n[variables]\ny: even\n",
        "[variables]\nx: even\nx: odd\n",
        "[variables]\nx: bosonic\n",
        "[variables]\nx: even, 1\n",
        "[variables]\nx: even, two\n",
        "[variables]\nx: even, 0\ny: odd\n",
        "[variables]\n2x: even\n",
        "[variables]\nx even\n",
        "[poisson]\nx = 1\n",
        "[poisson]\n{x} = 1\n",
        "[poisson]\n{x,y} = (1\n",
        "[lie]\nc[1,2]3 = 1\n",
        "[lie]\nc[1,2]^3 = x\n",
        "[lie]\nc[0,1]^1 = 1\n",
        "[lie]\nc[1,1]^1 = 1\n",
        "[lie]\nc[1,2]^1 = 1\nc[2,1]^1 = 1\n",
        "[variables]\na: odd\n[lie]\nc[1,2]^1 = 1\n",
        "[variables]\nx: even\n[lie]\n[poisson]\n{x,x} = 0\n",
        "[lagrangian]\nL even 1, 0\n",
        "[lagrangian]\nL sideways: 1\n",
        "[lagrangian]\nL orientation: 2\n",
        "[lagrangian]\nsplit: 1, 1\n",
        "[lagrangian]\nsplit: 1, -1, 1\n",
        "[expression]\nx +\n",
    };
    for (const char* text : bad) EXPECT_FALSE(parse_error_of(text).empty()) << text;
}

TEST(DefinitionFile, CommentsAndMultilineExpression) {
    auto f = parse_definition_text("# header\n[variables] ; trailing\nx: even # the coordinate\n[expression]\nx +\n  2 x\n");
    ASSERT_TRUE(f.expression);
    EXPECT_EQ(evaluate_polynomial(f.base(), *f.expression), SuperPolynomial::variable(f.base(), 0) * Rational(3));
}

TEST(DefinitionFile, DarbouxCharts) {
    auto d = read_definition_file(data("darboux.def")).darboux_chart();
    EXPECT_EQ(d.pairs(), 1u);
    EXPECT_EQ(d.sign(0), 1);
    auto m = parse_definition_text("[variables]\nx: even\ny: even\nxi: odd\neta: odd\n[poisson]\n{y,eta} = -1\n").darboux_chart();
    EXPECT_EQ(m.signs(), (std::vector<int>{1, -1}));
    EXPECT_EQ(m.xi_name(1), "eta");
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\n").darboux_chart(), DomainError);
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\nxi: odd\n[poisson]\n{x,xi} = 2\n").darboux_chart(), DomainError);
    EXPECT_THROW(parse_definition_text("[variables]\nx: even\nxi: odd\n[poisson]\n{x,xi} = x\n").darboux_chart(), DomainError);
    EXPECT_THROW(read_definition_file(data("sl2.def")).darboux_chart(), DomainError);
}

TEST(DefinitionFile, Lagrangians) {
    auto f = read_definition_file(data("lagrangian.def"));
    auto ch = f.darboux_chart();
    auto L = f.lagrangian("L", ch);
    LinearLagrangian ref(ch, QMatrix(2, 1, {1, -1}));
    EXPECT_TRUE(L.same_subspace(ref));
    EXPECT_EQ(L.orientation_relative_to(ref), -1);
    EXPECT_EQ(delta_L(L), delta_L(ref) * Rational(-1));
    EXPECT_THROW(f.lagrangian("M", ch), ParseError);

    auto g = read_definition_file(data("nonlagrangian.def"));
    EXPECT_THROW(g.lagrangian("L", g.darboux_chart()), ContractError);

    auto rows = parse_definition_text("[variables]\nx1: even\nx2: even\nxi1: odd\nxi2: odd\n[lagrangian]\neven: 1, 0, 0\n");
    EXPECT_THROW(rows.lagrangian("L", rows.darboux_chart()), ParseError);
    auto mixed = parse_definition_text("[variables]\nx1: even\nxi1: odd\n[lagrangian]\neven: 1\nform: x1\n");
    EXPECT_THROW(mixed.lagrangian("L", mixed.darboux_chart()), ParseError);
    auto curved = parse_definition_text("[variables]\nx1: even\nxi1: odd\n[lagrangian]\nform: x1^2\n");
    EXPECT_THROW(curved.lagrangian("L", curved.darboux_chart()), ParseError);
    auto gens = parse_definition_text("[variables]\nx1: even\nx2: even\nxi1: odd\nxi2: odd\n[lagrangian]\neven: 1, 1\nodd: 1, -1\n");
    EXPECT_TRUE(gens.lagrangian("L", gens.darboux_chart()).is_lagrangian());
}

TEST(DefinitionFile, RelationsCompose) {
    auto f = read_definition_file(data("compose.def"));
    auto [c1, c2] = f.relation_charts();
    EXPECT_EQ(c1.signs(), (std::vector<int>{-1, 1}));
    auto K1 = f.lagrangian("K1", c1), K2 = f.lagrangian("K2", c2);
    EXPECT_TRUE(K2.same_subspace(LinearLagrangian(c2, QMatrix(2, 1, {1, 3}))));
    auto L = compose_relations(K1, K2, 1);
    EXPECT_TRUE(L.same_subspace(LinearLagrangian(L.chart(), QMatrix(2, 1, {1, 6}))));
    EXPECT_EQ(compose(delta_L(K1), delta_L(K2), 1), delta_L(L));

    auto n = read_definition_file(data("nontransversal.def"));
    auto [d1, d2] = n.relation_charts();
    EXPECT_THROW(compose_relations(n.lagrangian("K1", d1), n.lagrangian("K2", d2), 1), TransversalityError);
    EXPECT_THROW(read_definition_file(data("lagrangian.def")).relation_charts(), ParseError);
}

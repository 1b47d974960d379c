#pragma once

/**
 * @file verify.hpp
 * @brief Randomized verification suites shared by the acceptance runner and
 *        the command-line tool.
 *
 * Each suite returns a SuiteResult: pass/fail, how many instances were
 * checked, and on failure a witness. Randomness comes from the seed in
 * SuiteOptions; zero sample counts mean the suite default.
 */

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oddsym/bv/lagrangian.hpp"
#include "oddsym/deformed.hpp"
#include "oddsym/demos.hpp"

namespace oddsym {

struct SuiteOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    unsigned max_degree = 0;

    std::size_t samples_or(std::size_t d) const { return samples ? samples : d; }
    unsigned degree_or(unsigned d) const { return max_degree ? max_degree : d; }
};

struct SuiteResult {
    bool ok = true;
    std::size_t checked = 0;
    std::string detail;

    void fail(std::string witness) {
        if (!ok) return;
        ok = false;
        detail = std::move(witness);
    }
};

namespace verify_detail {

inline QMatrix random_basis(Sampler& rng, std::size_t n, std::size_t k) {
    return k == 0 ? QMatrix(n, 0) : rng.full_column_rank(n, k);
}

inline QMatrix random_positive_definite(Sampler& rng, std::size_t n) {
    QMatrix B = rng.invertible(n);
    QMatrix Q = B.transpose() * B;
    for (std::size_t i = 0; i < n; ++i) Q(i, i) += Rational(1, 2);
    return Q;
}

inline CotangentChart chart_of(std::vector<Variable> vars, bool graded = false) {
    return CotangentChart(VariableTable::make(std::move(vars), graded));
}

inline OddPoissonStructure darboux_structure(std::size_t pairs) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(even_var(pairs == 1 ? "x" : "x" + std::to_string(i)));
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(odd_var(pairs == 1 ? "xi" : "xi" + std::to_string(i)));
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < pairs; ++i) p.emplace_back(i, pairs + i);
    return OddPoissonStructure::darboux(chart_of(vars), p);
}

inline OddPoissonStructure kk_structure(const LieStructureConstants& c) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= c.dim; ++i) vars.push_back(odd_var("th" + std::to_string(i)));
    return OddPoissonStructure::kirillov_kostant(chart_of(vars), c);
}

inline SuperPolynomial var(const DarbouxChart& c, const char* name) { return SuperPolynomial::variable(c.table(), name); }

}  // namespace verify_detail

/// sl2 with [e1, e2] = e1 + e3: fails Jacobi.
inline LieStructureConstants perturbed_sl2() {
    auto c = LieStructureConstants::sl2();
    c.set(0, 1, 0, 1);
    return c;
}

// ---- BV Laplacian --------------------------------------------------------

/// Delta^2 s = 0 on random semidensities over 1..3 pairs.
inline SuiteResult check_delta_squared(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t samples = o.samples_or(200);
    const unsigned deg = o.degree_or(5);
    for (std::size_t k = 0; k < samples && r.ok; ++k) {
        auto ch = DarbouxChart::standard(1 + k % 3);
        auto s = rng.polynomial(ch.table(), deg, 6);
        auto dd = bv_delta(ch, bv_delta(ch, s));
        ++r.checked;
        if (!dd.is_zero()) r.fail("Delta^2 s = " + to_string(dd) + " for s = " + to_string(s));
    }
    for (std::size_t n = 1; n <= 3 && r.ok; ++n) {
        auto D = DiffOperator::bv_laplacian(DarbouxChart::standard(n));
        ++r.checked;
        if (!(D * D).body().is_zero()) r.fail("Delta * Delta = " + (D * D).str() + " as an operator");
    }
    return r;
}

/// formal_adjoint(Delta) = Delta, plus (Delta a, b) = (-1)^{|a|} (a, Delta b)
/// for Gaussian-weighted a.
inline SuiteResult check_self_adjoint(const SuiteOptions& o = {}) {
    SuiteResult r;
    for (std::size_t n = 1; n <= 3 && r.ok; ++n)
        for (int sign : {1, -1}) {
            auto D = DiffOperator::bv_laplacian(DarbouxChart::standard(n, "", sign));
            ++r.checked;
            if (!(formal_adjoint(D) == D)) r.fail("formal_adjoint(Delta) = " + formal_adjoint(D).str());
        }
    Sampler rng(o.seed);
    const std::size_t samples = o.samples_or(40);
    for (std::size_t t = 0; t < samples && r.ok; ++t) {
        auto ch = DarbouxChart::standard(1 + t % 2);
        Parity pa = rng.parity();
        auto a = DistributionalSemidensity::gaussian(ch, verify_detail::random_positive_definite(rng, ch.pairs()),
                                                     rng.polynomial(ch.table(), 3, 3, pa));
        auto b = DistributionalSemidensity::polynomial(ch, rng.polynomial(ch.table(), 3, 3));
        auto lhs = pairing(bv_delta(a), b), rhs = pairing(a, bv_delta(b)) * Rational(pa == Parity::Odd ? -1 : 1);
        ++r.checked;
        if (!(lhs == rhs)) r.fail("(Delta a, b) = " + lhs.str() + " but (a, Delta b) gives " + rhs.str() + " for a = " + a.render());
    }
    return r;
}

/// [Delta, f] = L_{X_f} as operators, sampled on random semidensities.
inline SuiteResult check_lie_derivative(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t samples = o.samples_or(200);
    const unsigned deg = o.degree_or(4);
    for (std::size_t k = 0; k < samples && r.ok; ++k) {
        auto ch = DarbouxChart::standard(1 + k % 2);
        Parity pf = rng.parity();
        auto f = rng.polynomial(ch.table(), deg, 3, pf);
        auto s = rng.polynomial(ch.table(), deg, 4);
        auto D = DiffOperator::bv_laplacian(ch);
        auto F = DiffOperator::multiplication(f);
        auto comm = D * F - F * D * Rational(pf == Parity::Odd ? -1 : 1);
        auto lhs = comm.apply(s), rhs = lie_derivative_semidensity(ch, f, s);
        ++r.checked;
        if (!(lhs == rhs)) r.fail("[Delta, f] s = " + to_string(lhs) + " but L_{X_f} s = " + to_string(rhs) + " for f = " + to_string(f) + ", s = " + to_string(s));
    }
    return r;
}

/// The catalog of symplectomorphisms on <= 2 pairs used for invariance.
inline std::vector<std::pair<DarbouxChart, Substitution>> darboux_map_catalog() {
    using verify_detail::var;
    std::vector<std::pair<DarbouxChart, Substitution>> maps;
    auto c1 = DarbouxChart::standard(1);
    auto c2 = DarbouxChart::standard(2);
    maps.emplace_back(c1, linear_block_map(c1, QMatrix(1, 1, {Rational(5, 2)})));
    maps.emplace_back(c1, linear_block_map(c1, QMatrix(1, 1, {-3})));
    maps.emplace_back(c1, hamiltonian_flow(c1, var(c1, "xi") * Rational(2)));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {1, 2, 0, 1})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {0, 1, 1, 0})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {2, 1, 1, 1})));
    maps.emplace_back(c2, linear_block_map(c2, QMatrix(2, 2, {-1, 0, 3, Rational(1, 2)})));
    maps.emplace_back(c2, hamiltonian_flow(c2, var(c2, "x2") * var(c2, "xi1")));
    maps.emplace_back(c2, hamiltonian_flow(c2, var(c2, "x2") * var(c2, "x2") * var(c2, "xi1")));
    maps.emplace_back(c2, hamiltonian_flow(c2, var(c2, "x1") * var(c2, "x1") * var(c2, "x1") * var(c2, "xi2") * Rational(-1, 3)));
    maps.emplace_back(c2, hamiltonian_flow(c2, (var(c2, "x2") * var(c2, "x2") * var(c2, "x2") + var(c2, "x2")) * var(c2, "xi1")));
    maps.emplace_back(c2, hamiltonian_flow(c2, var(c2, "xi1") - var(c2, "x1") * var(c2, "xi2")));
    return maps;
}

/// Delta commutes with darboux_transform for every catalog map.
inline SuiteResult check_darboux_invariance(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t per_map = o.samples_or(15);
    const unsigned deg = o.degree_or(4);
    for (const auto& [ch, phi] : darboux_map_catalog()) {
        for (std::size_t k = 0; k < per_map && r.ok; ++k) {
            auto s = rng.polynomial(ch.table(), deg, 5);
            auto lhs = bv_delta(ch, darboux_transform(ch, phi, s));
            auto rhs = darboux_transform(ch, phi, bv_delta(ch, s));
            ++r.checked;
            if (!(lhs == rhs)) r.fail("Delta(phi* s) = " + to_string(lhs) + " but phi*(Delta s) = " + to_string(rhs) + " for s = " + to_string(s));
        }
    }
    return r;
}

// ---- Lagrangians and composition ----------------------------------------

/// Delta delta_L = 0 and pivot/random adapted frames agree, in (2|2), (3|3).
inline SuiteResult check_lagrangian_deltas(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t samples = o.samples_or(100);
    for (std::size_t t = 0; t < samples && r.ok; ++t) {
        std::size_t n = 2 + t % 2;
        std::vector<int> signs(n);
        for (auto& s : signs) s = rng.coin() ? 1 : -1;
        auto ch = DarbouxChart::standard(n);
        std::vector<std::string> xs, xis;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(ch.x_name(i));
            xis.push_back(ch.xi_name(i));
        }
        DarbouxChart sc(xs, xis, signs);
        std::size_t k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
        LinearLagrangian L(sc, verify_detail::random_basis(rng, n, k), rng.coin() ? 1 : -1);
        auto d = delta_L(L);
        auto dd = bv_delta(d);
        auto alt = delta_L(L, FrameCompletion::Random, o.seed * 1000003 + t);
        ++r.checked;
        if (!dd.is_zero()) r.fail("Delta delta_L = " + dd.render() + " for L = " + L.str());
        else if (!(alt == d)) r.fail("frames disagree for L = " + L.str() + ": " + d.render() + " vs " + alt.render());
    }
    return r;
}

/// compose(delta_L1, delta_L2) = delta_{L1 o L2} on random transversal pairs.
inline SuiteResult check_functoriality(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t want = o.samples_or(100);
    for (std::size_t t = 0; t < 20 * want && r.checked < want && r.ok; ++t) {
        std::size_t n1 = rng.uniform_int(0, 2), n2 = rng.uniform_int(1, 2), n3 = rng.uniform_int(0, 2);
        auto Y1 = DarbouxChart::standard(n1, "a"), Y2 = DarbouxChart::standard(n2, "b"), Y3 = DarbouxChart::standard(n3, "c");
        auto C1 = DarbouxChart::product(Y1, Y2, true), C2 = DarbouxChart::product(Y2, Y3, true);
        std::size_t k1 = rng.uniform_int(0, static_cast<int>(n1 + n2)), k2 = rng.uniform_int(0, static_cast<int>(n2 + n3));
        LinearLagrangian L1(C1, verify_detail::random_basis(rng, n1 + n2, k1), rng.coin() ? 1 : -1);
        LinearLagrangian L2(C2, verify_detail::random_basis(rng, n2 + n3, k2), rng.coin() ? 1 : -1);
        LinearLagrangian L;
        try {
            L = compose_relations(L1, L2, n2);
        } catch (const TransversalityError&) {
            continue;
        }
        auto lhs = compose(delta_L(L1), delta_L(L2), n2), rhs = delta_L(L);
        ++r.checked;
        if (!(lhs == rhs)) {
            std::string c = lhs == rhs * Rational(-1) ? " (constant -1)" : "";
            r.fail("compose(delta_L1, delta_L2) = " + lhs.render() + " but delta_L = " + rhs.render() + c + " for L1 = " +
                   L1.str() + ", L2 = " + L2.str());
        }
    }
    if (r.ok && r.checked < want) r.fail("only " + std::to_string(r.checked) + " transversal pairs found");
    return r;
}

/// (delta_L, beta) is unchanged when L moves by a shear, for Delta-closed
/// Gaussian beta, in (1|1) and (2|2).
inline SuiteResult check_bv_invariance(const SuiteOptions& o = {}) {
    SuiteResult r;
    Sampler rng(o.seed);
    const std::size_t want = o.samples_or(12);
    for (std::size_t t = 0; t < 40 * want && r.checked < want && r.ok; ++t) {
        std::size_t n = t % 2 ? 2 : 1;
        auto ch = DarbouxChart::standard(n);
        std::size_t k = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n)));
        // beta: pullback of prod_{i<k} exp(-a_i y_i^2) prod_{i>=k} eta_i along y = A x
        QMatrix A = rng.invertible(n);
        QMatrix D(n, n);
        for (std::size_t i = 0; i < k; ++i) D(i, i) = rng.rational(3, 2, true) * rng.rational(3, 2, true);
        QMatrix Ai = inverse(A).transpose();
        SuperPolynomial odd = SuperPolynomial::constant(ch.table(), 1);
        for (std::size_t i = k; i < n; ++i) {
            SuperPolynomial eta(ch.table());
            for (std::size_t j = 0; j < n; ++j)
                if (sgn(Ai(i, j)) != 0) eta += SuperPolynomial::variable(ch.table(), ch.xi(j)) * Ai(i, j);
            odd = odd * eta;
        }
        auto beta = DistributionalSemidensity::gaussian(ch, A.transpose() * D * A, odd);
        if (!bv_delta(beta).is_zero()) {
            r.fail("test density is not Delta-closed: " + beta.render());
            break;
        }
        LinearLagrangian L(ch, verify_detail::random_basis(rng, n, k));
        QMatrix S = QMatrix::identity(n);
        if (n == 2) {
            S(1, 0) = rng.rational(3, 2, true);
        } else {
            S(0, 0) = abs(rng.rational(3, 2, true));
        }
        // the straight path from 1 to S must keep the Gaussian decaying on L
        if (k == 1 && sgn((A * L.even_basis())(0, 0)) != sgn((A * S * L.even_basis())(0, 0))) continue;
        ScalarValue before, after;
        try {
            before = pairing(delta_L(L), beta);
            after = pairing(delta_L(L.transformed(S)), beta);
        } catch (const DivergenceError&) {
            continue;
        }
        if (before.is_zero()) continue;
        ++r.checked;
        if (!(before == after)) r.fail("(delta_L, beta) = " + before.str() + " but " + after.str() + " after the shear " + S.str() + ", L = " + L.str());
    }
    if (r.ok && r.checked < want) r.fail("only " + std::to_string(r.checked) + " nondegenerate triples found");
    return r;
}

// ---- deformed forms -------------------------------------------------------

/// [f, d g] = {f, g} on random functions and all coordinate pairs; then
/// consistency_check (associativity on random triples, d^2 = 0).
inline SuiteResult check_deformation(const OddPoissonStructure& pi, const SuiteOptions& o = {}) {
    SuiteResult r;
    DeformedAlgebra alg(pi);
    Sampler rng(o.seed);
    const std::size_t n = alg.dimension();
    const std::size_t samples = o.samples_or(200);
    const unsigned deg = o.degree_or(2);
    auto eq1 = [&](const DeformedElement& f, const DeformedElement& g) {
        for (Parity pf : {Parity::Even, Parity::Odd})
            for (Parity pg : {Parity::Even, Parity::Odd}) {
                auto fp = f.part(pf), gp = g.part(pg);
                if (fp.is_zero() || gp.is_zero()) continue;
                auto dg = alg.d(gp);
                auto lhs = alg.mul(fp, dg) - alg.mul(dg, fp) * Rational(koszul(pf, pg + Parity::Odd));
                auto want = alg.embed(odd_bracket(pi, alg.restrict_function(fp), alg.restrict_function(gp)));
                ++r.checked;
                if (!(lhs == want)) {
                    r.fail("[f, dg] = " + alg.render(lhs) + " but {f, g} = " + alg.render(want) + " for f = " + alg.render(fp) +
                           ", g = " + alg.render(gp));
                    return false;
                }
            }
        return true;
    };
    for (std::size_t i = 0; i < n && r.ok; ++i)
        for (std::size_t j = 0; j < n && r.ok; ++j) eq1(alg.coordinate(i), alg.coordinate(j));
    for (std::size_t k = 0; k < samples / 4 && r.ok; ++k) eq1(alg.random_function(rng, deg + 1), alg.random_function(rng, deg + 1));
    if (!r.ok) return r;
    auto c = alg.consistency_check(samples, o.seed, deg);
    r.checked += c.checked;
    if (!c.ok) r.fail(c.witness->description);
    return r;
}

struct NamedStructure {
    std::string name;
    OddPoissonStructure pi;
};

inline std::vector<NamedStructure> jacobi_catalog() {
    using namespace verify_detail;
    return {{"Darboux (1|1)", darboux_structure(1)},
            {"Darboux (2|2)", darboux_structure(2)},
            {"Kirillov-Kostant sl2", kk_structure(LieStructureConstants::sl2())},
            {"Heisenberg", kk_structure(LieStructureConstants::heisenberg())},
            {"abelian", kk_structure(LieStructureConstants::abelian(3))}};
}

/// Every catalog structure passes, and the perturbed sl2 structure fails
/// with a witness.
inline SuiteResult check_deformations(const SuiteOptions& o = {}, std::ostream* log = nullptr) {
    SuiteResult r;
    for (const auto& s : jacobi_catalog()) {
        auto one = check_deformation(s.pi, o);
        r.checked += one.checked;
        if (log) *log << "  " << s.name << ": " << (one.ok ? "pass" : "FAIL") << " (" << one.checked << " checks)\n";
        if (!one.ok) {
            r.fail(s.name + ": " + one.detail);
            return r;
        }
    }
    auto bad = check_deformation(verify_detail::kk_structure(perturbed_sl2()), o);
    if (log) *log << "  perturbed sl2: " << (bad.ok ? "pass" : "FAIL") << (bad.ok ? "" : ", witness: " + bad.detail) << "\n";
    if (bad.ok) r.fail("perturbed sl2 structure was not detected");
    else if (bad.detail.empty()) r.fail("perturbed sl2 failed without a witness");
    else r.detail = "perturbed sl2 rejected: " + bad.detail;
    return r;
}

/// Gr Omega_pi has the dimensions of Omega(X) for structures on at most
/// 2 even + 2 odd coordinates.
inline SuiteResult check_gr_dimensions(const SuiteOptions& o = {}) {
    using namespace verify_detail;
    SuiteResult r;
    const unsigned coord = o.degree_or(4);
    std::vector<NamedStructure> structures = {{"Darboux (1|1)", darboux_structure(1)}, {"Darboux (2|2)", darboux_structure(2)}};
    {
        auto chart = chart_of({even_var("x1"), even_var("x2"), odd_var("t1"), odd_var("t2")});
        structures.push_back({"{x1,t1} = x1, {x2,t2} = 1",
                              OddPoissonStructure::from_brackets(chart, {{{0, 2}, SuperPolynomial::variable(chart.base(), 0)},
                                                                         {{1, 3}, SuperPolynomial::constant(chart.base(), 1)}})});
        LieStructureConstants aff(2);
        aff.set(0, 1, 1, 1);
        structures.push_back({"Kirillov-Kostant aff(1)", kk_structure(aff)});
        auto mixed = chart_of({even_var("x"), odd_var("t1"), odd_var("t2")});
        auto x = SuperPolynomial::variable(mixed.base(), 0);
        structures.push_back({"{x,t1} = x^2", OddPoissonStructure::from_brackets(mixed, {{{0, 1}, x * x}})});
    }
    for (const auto& s : structures) {
        if (!jacobi_check(s.pi).ok) {
            r.fail(s.name + " does not satisfy Jacobi");
            return r;
        }
        DeformedAlgebra alg(s.pi);
        for (unsigned k = 0; k <= 3; ++k) {
            auto rep = gr_dimension_check(alg, coord, k);
            ++r.checked;
            if (!rep.ok()) {
                r.fail(s.name + ": filtration " + std::to_string(k) + " has rank " + std::to_string(rep.rank) + ", expected " +
                       rep.expected.get_str());
                return r;
            }
        }
    }
    return r;
}

// ---- demos ------------------------------------------------------------------

inline SuiteResult from_report(const DemoReport& rep) {
    SuiteResult r;
    r.checked = rep.lines.size();
    for (const auto& l : rep.lines)
        if (!l.ok) r.fail(l.name + ": " + l.detail);
    return r;
}

inline SuiteResult check_crossed_product(const SuiteOptions& o = {}) {
    return from_report(crossed_product_verify(LieStructureConstants::sl2(), o.samples_or(20), o.seed));
}

inline SuiteResult check_fourier(const SuiteOptions& o = {}) {
    SuiteResult r;
    for (std::size_t n = 1; n <= 2 && r.ok; ++n) {
        auto one = from_report(fourier_check(n, o.samples_or(100), o.degree_or(4), o.seed, 6));
        r.checked += one.checked;
        if (!one.ok) r.fail("n = " + std::to_string(n) + ": " + one.detail);
    }
    return r;
}

inline SuiteResult check_pair_groupoid(const SuiteOptions& = {}) { return from_report(pair_groupoid_demo(1, 2, 2)); }

// ---- the acceptance list ---------------------------------------------------

struct Criterion {
    int id;
    std::string title;
    std::function<SuiteResult(const SuiteOptions&)> run;
};

inline std::vector<Criterion> acceptance_criteria() {
    return {
        {1, "Delta^2 = 0 on random semidensities", [](const SuiteOptions& o) { return check_delta_squared(o); }},
        {2, "formal adjoint of Delta is Delta", [](const SuiteOptions& o) { return check_self_adjoint(o); }},
        {3, "[Delta, f] = L_{X_f}", [](const SuiteOptions& o) { return check_lie_derivative(o); }},
        {4, "Delta commutes with Darboux transforms", [](const SuiteOptions& o) { return check_darboux_invariance(o); }},
        {5, "delta_L is closed and frame independent", [](const SuiteOptions& o) { return check_lagrangian_deltas(o); }},
        {6, "functoriality with constant 1", [](const SuiteOptions& o) { return check_functoriality(o); }},
        {7, "[f, dg] = {f, g}, associativity, d^2 = 0; perturbed pi rejected",
         [](const SuiteOptions& o) { return check_deformations(o); }},
        {8, "Gr Omega_pi has the dimensions of Omega(X)", [](const SuiteOptions& o) { return check_gr_dimensions(o); }},
        {9, "sl2 crossed product relations", [](const SuiteOptions& o) { return check_crossed_product(o); }},
        {10, "odd Fourier transform intertwines d and Delta", [](const SuiteOptions& o) { return check_fourier(o); }},
        {11, "BV invariance of the pairing", [](const SuiteOptions& o) { return check_bv_invariance(o); }},
        {12, "pair groupoid convolution algebra ~ Omega_pi", [](const SuiteOptions& o) { return check_pair_groupoid(o); }},
    };
}

struct TimedResult {
    SuiteResult result;
    double seconds = 0;
};

inline TimedResult run_timed(const Criterion& c, const SuiteOptions& o) {
    auto t0 = std::chrono::steady_clock::now();
    TimedResult t;
    try {
        t.result = c.run(o);
    } catch (const std::exception& e) {
        t.result.fail(std::string("exception: ") + e.what());
    }
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return t;
}

}  // namespace oddsym

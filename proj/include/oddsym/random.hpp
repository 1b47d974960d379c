#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators for random polynomials, matrices and rationals.
 *
 * Used by the verification suites and the property tests. Everything is
 * driven by one std::mt19937_64 so a seed reproduces a whole run.
 */

#include <optional>
#include <random>
#include <vector>

#include "oddsym/linalg.hpp"
#include "oddsym/polynomial.hpp"

namespace oddsym {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 20240607) : rng_(seed) {}

    std::mt19937_64& engine() { return rng_; }

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    /// Small rational with numerator in [-range, range] and denominator in
    /// {1, .., max_den}; nonzero if requested.
    Rational rational(int range = 3, int max_den = 2, bool nonzero = false) {
        for (;;) {
            int n = uniform_int(-range, range);
            if (nonzero && n == 0) continue;
            int d = uniform_int(1, max_den);
            return make_rational(n, d);
        }
    }

    /// Random monomial of total degree at most `max_degree`, restricted to
    /// the variables in `vars` (all table variables if empty).
    Monomial monomial(const VariableTable& t, unsigned max_degree, const std::vector<std::size_t>& vars = {}) {
        Monomial m(t.size());
        std::vector<std::size_t> pool = vars;
        if (pool.empty())
            for (std::size_t i = 0; i < t.size(); ++i) pool.push_back(i);
        if (pool.empty()) return m;
        unsigned deg = static_cast<unsigned>(uniform_int(0, static_cast<int>(max_degree)));
        for (unsigned k = 0; k < deg; ++k) {
            auto v = pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))];
            if (t.is_odd(v)) {
                m[v] = 1;
            } else {
                ++m[v];
            }
        }
        return m;
    }

    /// Random polynomial with up to `max_terms` terms. If `parity` is given
    /// the result is homogeneous of that parity.
    SuperPolynomial polynomial(const TablePtr& t, unsigned max_degree, int max_terms = 4,
                               std::optional<Parity> parity = std::nullopt, const std::vector<std::size_t>& vars = {}) {
        SuperPolynomial p(t);
        int terms = uniform_int(1, max_terms);
        for (int k = 0; k < terms * 4 && static_cast<int>(p.size()) < terms; ++k) {
            Monomial m = monomial(*t, max_degree, vars);
            if (parity && monomial_parity(m, *t) != *parity) continue;
            p.add_term(m, rational(3, 2, true));
        }
        return p;
    }

    Parity parity() { return coin() ? Parity::Odd : Parity::Even; }

    QMatrix matrix(std::size_t r, std::size_t c, int range = 2) {
        QMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform_int(-range, range);
        return m;
    }

    /// Random invertible integer matrix.
    QMatrix invertible(std::size_t n, int range = 2) {
        for (;;) {
            auto m = matrix(n, n, range);
            if (sgn(det(m)) != 0) return m;
        }
    }

    /// Random matrix of full column rank (rows >= cols).
    QMatrix full_column_rank(std::size_t r, std::size_t c, int range = 2) {
        for (;;) {
            auto m = matrix(r, c, range);
            if (rank(m) == c) return m;
        }
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace oddsym

#pragma once

/**
 * @file distribution.hpp
 * @brief Distributional semidensities: polynomial prefactors times
 *        derivatives of delta functions of even linear forms, times a Gaussian.
 *
 * A raw term P * prod_a delta^{(alpha_a)}(M_a x) * exp(-x^T Q x) is brought to
 * canonical form by
 *   1. row reducing the forms, G M = R, so that
 *      delta^{(alpha)}(M x) = |det G| prod_a (sum_b G_ba d/dw_b)^{alpha_a} delta(w), w = R x;
 *   2. eliminating the pivot variables: x_{p_b} = w_b - sum_f R_bf x_f;
 *   3. expanding exp(-(q - q0)) to the order of the delta derivatives, where q0
 *      is the Gaussian restricted to the free variables;
 *   4. removing powers of w with w^g delta^{(b)}(w) = (-1)^|g| b!/(b-g)! delta^{(b-g)}(w).
 * Canonical data is keyed by (R, q0); each key maps delta multi-indices to
 * prefactors free of pivot variables. Odd delta factors are plain linear odd
 * factors inside the prefactor.
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/bv/chart.hpp"
#include "oddsym/bv/scalar.hpp"
#include "oddsym/linalg.hpp"

namespace oddsym {

using DeltaIndex = std::vector<unsigned>;

struct DistributionKey {
    QMatrix forms;  // r x n, reduced row echelon
    QMatrix gauss;  // n x n symmetric, zero on pivot rows and columns

    bool operator<(const DistributionKey& o) const {
        if (forms == o.forms) return gauss < o.gauss;
        return forms < o.forms;
    }
    bool operator==(const DistributionKey& o) const { return forms == o.forms && gauss == o.gauss; }
};

/// P * prod delta^{(alpha_a)}(forms_a . x) * exp(-x^T gauss x)
struct RawDistributionTerm {
    QMatrix forms;
    DeltaIndex alpha;
    SuperPolynomial prefactor;
    QMatrix gauss;
};

namespace detail {

struct ReducedTerm {
    QMatrix forms;
    std::vector<std::size_t> pivots;
    QMatrix gauss;
    std::map<DeltaIndex, SuperPolynomial> parts;
};

inline QMatrix symmetrize(const QMatrix& q) {
    QMatrix s(q.rows(), q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j) s(i, j) = (q(i, j) + q(j, i)) / 2;
    return s;
}

/// x^T Q x over the even variables of the chart, restricted to the pairs
/// (i, j) for which `keep(i, j)` holds.
template <typename Keep>
SuperPolynomial quadratic_polynomial(const DarbouxChart& chart, const QMatrix& q, Keep keep) {
    const auto& t = chart.table();
    SuperPolynomial r(t);
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = 0; j < q.cols(); ++j) {
            if (sgn(q(i, j)) == 0 || !keep(i, j)) continue;
            r += SuperPolynomial::variable(t, chart.x(i)) * SuperPolynomial::variable(t, chart.x(j)) * q(i, j);
        }
    return r;
}

inline ReducedTerm reduce(const DarbouxChart& chart, const RawDistributionTerm& raw,
                          const std::vector<std::size_t>& priority = {}) {
    const std::size_t n = chart.pairs();
    const auto& t = chart.table();
    ReducedTerm out;
    QMatrix Q = raw.gauss.rows() == n ? symmetrize(raw.gauss) : QMatrix(n, n);
    if (raw.forms.rows() == 0) {
        out.forms = QMatrix(0, n);
        out.gauss = Q;
        if (!raw.prefactor.is_zero()) out.parts.emplace(DeltaIndex{}, raw.prefactor);
        return out;
    }
    const std::size_t r = raw.forms.rows();
    if (raw.forms.cols() != n) throw StructuralError("distribution: form has the wrong number of entries");
    if (raw.alpha.size() != r) throw StructuralError("distribution: derivative orders do not match the forms");
    auto e = rref(raw.forms, priority);
    if (e.rank() < r) throw WavefrontError("distribution: delta factors on linearly dependent forms");
    const QMatrix& G = e.transform;
    const QMatrix& R = e.reduced;
    out.forms = R;
    out.pivots = e.pivots;
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;

    // step 1: prod_a (sum_b G_ba d_b)^{alpha_a}
    std::map<DeltaIndex, Rational> expansion{{DeltaIndex(r, 0), abs(det(G))}};
    for (std::size_t a = 0; a < r; ++a)
        for (unsigned k = 0; k < raw.alpha[a]; ++k) {
            std::map<DeltaIndex, Rational> next;
            for (const auto& [beta, c] : expansion)
                for (std::size_t b = 0; b < r; ++b) {
                    if (sgn(G(b, a)) == 0) continue;
                    DeltaIndex nb = beta;
                    ++nb[b];
                    next[nb] += c * G(b, a);
                }
            std::erase_if(next, [](const auto& kv) { return sgn(kv.second) == 0; });
            expansion = std::move(next);
        }
    unsigned order = 0;
    for (auto a : raw.alpha) order += a;

    // step 2: x_p -> w - sum_f R_bf x_f, with w stored in the slot of x_p
    std::vector<SuperPolynomial> images;
    for (std::size_t v = 0; v < t->size(); ++v) images.push_back(SuperPolynomial::variable(t, v));
    QMatrix T = QMatrix::identity(n);
    for (std::size_t b = 0; b < r; ++b) {
        const std::size_t p = e.pivots[b];
        for (std::size_t f = 0; f < n; ++f) {
            if (is_pivot[f] || sgn(R(b, f)) == 0) continue;
            images[chart.x(p)] -= SuperPolynomial::variable(t, chart.x(f)) * R(b, f);
            T(p, f) = -R(b, f);
        }
    }
    Substitution sub(t, t, images);
    QMatrix Qs = T.transpose() * Q * T;
    QMatrix q0 = Qs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (is_pivot[i] || is_pivot[j]) q0(i, j) = 0;
    out.gauss = q0;

    // step 3: exp(-(q - q0)) up to order `order` in the pivot variables
    auto pivot_degree = [&](const Monomial& m) {
        unsigned d = 0;
        for (auto p : e.pivots) d += m[chart.x(p)];
        return d;
    };
    auto truncate = [&](const SuperPolynomial& a) {
        return a.filter([&](const Monomial& m) { return pivot_degree(m) <= order; });
    };
    SuperPolynomial rest = quadratic_polynomial(chart, Qs, [&](std::size_t i, std::size_t j) {
        return is_pivot[i] || is_pivot[j];
    });
    SuperPolynomial weight = SuperPolynomial::constant(t, 1), power = weight;
    for (unsigned k = 1; k <= order && !rest.is_zero(); ++k) {
        power = truncate(power * rest * Rational(-1, k));
        if (power.is_zero()) break;
        weight += power;
    }
    SuperPolynomial body = truncate(sub(raw.prefactor) * weight);

    // step 4: w^g delta^{(b)}(w)
    for (const auto& [beta, c] : expansion)
        for (const auto& [m, k] : body.terms()) {
            DeltaIndex nb = beta;
            Rational coef = c * k;
            bool vanish = false;
            Monomial rest_m = m;
            for (std::size_t b = 0; b < r && !vanish; ++b) {
                unsigned g = m[chart.x(e.pivots[b])];
                if (g > beta[b]) {
                    vanish = true;
                    break;
                }
                coef *= falling_factorial(beta[b], g);
                if (g & 1) coef = -coef;
                nb[b] = beta[b] - g;
                rest_m[chart.x(e.pivots[b])] = 0;
            }
            if (vanish) continue;
            auto [it, ins] = out.parts.emplace(nb, SuperPolynomial(t));
            it->second.add_term(rest_m, coef);
        }
    std::erase_if(out.parts, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

/// Gaussian moments E[u^a] for covariance S, by the Wick recursion
/// E[u_i u^b] = sum_j S_ij d/du_j E[u^b].
class WickMoments {
public:
    explicit WickMoments(QMatrix cov) : cov_(std::move(cov)) {}

    Rational operator()(const std::vector<unsigned>& a) {
        auto it = memo_.find(a);
        if (it != memo_.end()) return it->second;
        std::size_t i = 0;
        while (i < a.size() && a[i] == 0) ++i;
        Rational r = 0;
        if (i == a.size()) {
            r = 1;
        } else {
            auto rest = a;
            --rest[i];
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (rest[j] == 0 || sgn(cov_(i, j)) == 0) continue;
                auto d = rest;
                --d[j];
                r += cov_(i, j) * Rational(rest[j]) * (*this)(d);
            }
        }
        memo_.emplace(a, r);
        return r;
    }

private:
    QMatrix cov_;
    std::map<std::vector<unsigned>, Rational> memo_;
};

inline bool positive_definite(const QMatrix& q) {
    for (std::size_t k = 1; k <= q.rows(); ++k) {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        if (sgn(det(q.select_rows(idx).select_cols(idx))) <= 0) return false;
    }
    return true;
}

}  // namespace detail

class DistributionalSemidensity {
public:
    using Parts = std::map<DeltaIndex, SuperPolynomial>;

    DistributionalSemidensity() = default;
    explicit DistributionalSemidensity(DarbouxChart chart) : chart_(std::move(chart)) {}

    static DistributionalSemidensity polynomial(const DarbouxChart& chart, const SuperPolynomial& p) {
        DistributionalSemidensity d(chart);
        d.add(RawDistributionTerm{QMatrix(0, chart.pairs()), {}, p, QMatrix(chart.pairs(), chart.pairs())});
        return d;
    }

    /// P * prod_a delta(forms_a . x)
    static DistributionalSemidensity delta(const DarbouxChart& chart, const QMatrix& forms, const SuperPolynomial& p) {
        DistributionalSemidensity d(chart);
        d.add(RawDistributionTerm{forms, DeltaIndex(forms.rows(), 0), p, QMatrix(chart.pairs(), chart.pairs())});
        return d;
    }

    /// P * exp(-x^T Q x)
    static DistributionalSemidensity gaussian(const DarbouxChart& chart, const QMatrix& q, const SuperPolynomial& p) {
        DistributionalSemidensity d(chart);
        d.add(RawDistributionTerm{QMatrix(0, chart.pairs()), {}, p, q});
        return d;
    }

    static DistributionalSemidensity raw(const DarbouxChart& chart, const RawDistributionTerm& term) {
        DistributionalSemidensity d(chart);
        d.add(term);
        return d;
    }

    void add(const RawDistributionTerm& term) {
        require_same_table(term.prefactor.table(), chart_.table(), "distribution prefactor");
        auto red = detail::reduce(chart_, term);
        add_reduced(std::move(red));
    }

    const DarbouxChart& chart() const { return chart_; }
    const std::map<DistributionKey, Parts>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// True when there are no delta factors and no Gaussian weight.
    bool is_polynomial() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first.forms.rows() == 0 && terms_.begin()->first.gauss.is_zero());
    }
    SuperPolynomial polynomial_part() const {
        for (const auto& [k, parts] : terms_)
            if (k.forms.rows() == 0 && k.gauss.is_zero()) return parts.begin()->second;
        return SuperPolynomial(chart_.table());
    }

    /// Highest total delta-derivative order.
    unsigned derivative_order() const {
        unsigned o = 0;
        for (const auto& [k, parts] : terms_)
            for (const auto& [beta, p] : parts) o = std::max(o, std::accumulate(beta.begin(), beta.end(), 0u));
        return o;
    }

    std::optional<Parity> parity() const {
        std::optional<Parity> out;
        for (const auto& [k, parts] : terms_)
            for (const auto& [beta, p] : parts) {
                auto q = p.parity();
                if (!q || (out && *out != *q)) return std::nullopt;
                out = q;
            }
        return out;
    }

    DistributionalSemidensity part(Parity want) const {
        DistributionalSemidensity d(chart_);
        for (const auto& [k, parts] : terms_)
            for (const auto& [beta, p] : parts) {
                auto q = p.part(want);
                if (!q.is_zero()) d.terms_[k].emplace(beta, q);
            }
        return d;
    }

    DistributionalSemidensity& operator+=(const DistributionalSemidensity& o) {
        require_same_chart(o, "distribution sum");
        for (const auto& [k, parts] : o.terms_)
            for (const auto& [beta, p] : parts) accumulate(k, beta, p);
        return *this;
    }
    friend DistributionalSemidensity operator+(DistributionalSemidensity a, const DistributionalSemidensity& b) {
        return a += b;
    }
    friend DistributionalSemidensity operator*(DistributionalSemidensity a, const Rational& s) {
        if (sgn(s) == 0) return DistributionalSemidensity(a.chart_);
        for (auto& [k, parts] : a.terms_)
            for (auto& [beta, p] : parts) p *= s;
        return a;
    }
    friend DistributionalSemidensity operator-(const DistributionalSemidensity& a, const DistributionalSemidensity& b) {
        return a + b * Rational(-1);
    }

    /// Product; delta forms of the two factors must be jointly independent.
    friend DistributionalSemidensity operator*(const DistributionalSemidensity& a, const DistributionalSemidensity& b) {
        a.require_same_chart(b, "distribution product");
        DistributionalSemidensity r(a.chart_);
        for (const auto& [ka, pa] : a.terms_)
            for (const auto& [kb, pb] : b.terms_) {
                QMatrix forms = QMatrix::vstack(ka.forms, kb.forms);
                QMatrix gauss = ka.gauss + kb.gauss;
                for (const auto& [ba, fa] : pa)
                    for (const auto& [bb, fb] : pb) {
                        DeltaIndex alpha = ba;
                        alpha.insert(alpha.end(), bb.begin(), bb.end());
                        r.add(RawDistributionTerm{forms, alpha, fa * fb, gauss});
                    }
            }
        return r;
    }

    /// Polynomial times distribution (polynomial on the left).
    friend DistributionalSemidensity operator*(const SuperPolynomial& p, const DistributionalSemidensity& a) {
        return polynomial(a.chart_, p) * a;
    }

    /// d/dx_i: Leibniz over prefactor, delta factors and Gaussian.
    DistributionalSemidensity derivative_x(std::size_t i) const {
        DistributionalSemidensity r(chart_);
        const auto& t = chart_.table();
        const std::size_t n = chart_.pairs();
        for (const auto& [k, parts] : terms_) {
            SuperPolynomial dq(t);
            for (std::size_t j = 0; j < n; ++j)
                if (sgn(k.gauss(i, j)) != 0)
                    dq += SuperPolynomial::variable(t, chart_.x(j)) * (Rational(-2) * k.gauss(i, j));
            for (const auto& [beta, p] : parts) {
                r.add(RawDistributionTerm{k.forms, beta, poly_deriv(chart_.x(i), p) + dq * p, k.gauss});
                for (std::size_t a = 0; a < k.forms.rows(); ++a) {
                    if (sgn(k.forms(a, i)) == 0) continue;
                    DeltaIndex nb = beta;
                    ++nb[a];
                    r.add(RawDistributionTerm{k.forms, nb, p * k.forms(a, i), k.gauss});
                }
            }
        }
        return r;
    }

    /// d/dxi_i (left); only the prefactor depends on odd variables.
    DistributionalSemidensity derivative_xi(std::size_t i) const {
        DistributionalSemidensity r(chart_);
        for (const auto& [k, parts] : terms_)
            for (const auto& [beta, p] : parts) {
                auto d = poly_deriv(chart_.xi(i), p);
                if (!d.is_zero()) r.accumulate(k, beta, d);
            }
        return r;
    }

    bool operator==(const DistributionalSemidensity& o) const { return chart_ == o.chart_ && terms_ == o.terms_; }

    /// `P * delta'(l1) delta(l2) * exp(-q)` per term, joined by " + ".
    std::string render() const {
        if (terms_.empty()) return "0";
        std::string out;
        const auto& t = chart_.table();
        for (const auto& [k, parts] : terms_) {
            std::string deltas_base;
            std::vector<std::string> forms;
            for (std::size_t a = 0; a < k.forms.rows(); ++a) {
                SuperPolynomial l(t);
                for (std::size_t j = 0; j < chart_.pairs(); ++j)
                    if (sgn(k.forms(a, j)) != 0) l += SuperPolynomial::variable(t, chart_.x(j)) * k.forms(a, j);
                forms.push_back(to_string(l));
            }
            std::string gauss;
            if (!k.gauss.is_zero()) {
                gauss = "exp(-(" + to_string(detail::quadratic_polynomial(chart_, k.gauss, [](auto, auto) { return true; })) + "))";
            }
            for (const auto& [beta, p] : parts) {
                const bool factors = !forms.empty() || !gauss.empty();
                const bool unit = factors && p == SuperPolynomial::constant(t, Rational(1));
                std::string term = unit ? "" : to_string(p);
                if (p.size() > 1 && factors) term = "(" + term + ")";
                if (!forms.empty()) {
                    if (!unit) term += " *";
                    for (std::size_t a = 0; a < forms.size(); ++a) {
                        std::string name = "delta";
                        if (beta[a] >= 1 && beta[a] <= 3) {
                            name += std::string(beta[a], '\'');
                        } else if (beta[a] > 3) {
                            name += "^(" + std::to_string(beta[a]) + ")";
                        }
                        term += (term.empty() ? "" : " ") + name + "(" + forms[a] + ")";
                    }
                }
                if (!gauss.empty()) term += (term.empty() ? "" : " * ") + gauss;
                out += out.empty() ? term : " + " + term;
            }
        }
        return out;
    }

private:
    void require_same_chart(const DistributionalSemidensity& o, const char* what) const {
        if (!(chart_ == o.chart_)) throw StructuralError(std::string(what) + ": charts differ");
    }

    void accumulate(const DistributionKey& k, const DeltaIndex& beta, const SuperPolynomial& p) {
        auto& parts = terms_[k];
        auto [it, ins] = parts.emplace(beta, p);
        if (!ins) {
            it->second += p;
            if (it->second.is_zero()) parts.erase(it);
        }
        if (parts.empty()) terms_.erase(k);
    }

    void add_reduced(detail::ReducedTerm red) {
        DistributionKey key{std::move(red.forms), std::move(red.gauss)};
        for (auto& [beta, p] : red.parts) accumulate(key, beta, p);
    }

    DarbouxChart chart_;
    std::map<DistributionKey, Parts> terms_;
};

/// Delta = sum_i eps_i d/dx_i d/dxi_i on distributional semidensities.
inline DistributionalSemidensity bv_delta(const DistributionalSemidensity& s) {
    const auto& ch = s.chart();
    DistributionalSemidensity r(ch);
    for (std::size_t i = 0; i < ch.pairs(); ++i) {
        auto t = s.derivative_xi(i).derivative_x(i);
        r += ch.sign(i) > 0 ? t : t * Rational(-1);
    }
    return r;
}

/// Moves a distribution to another chart; pair i goes to pair pair_map[i].
/// Target pairs not hit are absent from the result.
inline DistributionalSemidensity transport(const DistributionalSemidensity& s, const DarbouxChart& target,
                                           const std::vector<std::size_t>& pair_map) {
    const auto& src = s.chart();
    const std::size_t n = src.pairs(), m = target.pairs();
    if (pair_map.size() != n) throw StructuralError("transport: wrong pair map size");
    std::vector<SuperPolynomial> images(src.table()->size(), SuperPolynomial(target.table()));
    for (std::size_t i = 0; i < n; ++i) {
        if (pair_map[i] >= m) throw StructuralError("transport: pair index out of range");
        images[src.x(i)] = SuperPolynomial::variable(target.table(), target.x(pair_map[i]));
        images[src.xi(i)] = SuperPolynomial::variable(target.table(), target.xi(pair_map[i]));
    }
    Substitution sub(src.table(), target.table(), images);
    DistributionalSemidensity r(target);
    for (const auto& [k, parts] : s.terms()) {
        QMatrix forms(k.forms.rows(), m), gauss(m, m);
        for (std::size_t a = 0; a < k.forms.rows(); ++a)
            for (std::size_t j = 0; j < n; ++j) forms(a, pair_map[j]) = k.forms(a, j);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) gauss(pair_map[i], pair_map[j]) = k.gauss(i, j);
        for (const auto& [beta, p] : parts) r.add(RawDistributionTerm{forms, beta, sub(p), gauss});
    }
    return r;
}

/// Integrates over the pairs in `pairs` (odd variables innermost first in
/// the given order, then even variables against delta factors). Every even
/// variable integrated must be pinned by a delta factor; otherwise
/// CompositionUndefinedError.
inline DistributionalSemidensity integrate_pinned(const DistributionalSemidensity& s,
                                                  const std::vector<std::size_t>& pairs) {
    const auto& ch = s.chart();
    const std::size_t n = ch.pairs();
    std::vector<bool> integrated(n, false);
    std::vector<std::size_t> priority, odd_order;
    for (auto p : pairs) {
        integrated[p] = true;
        priority.push_back(p);
        odd_order.push_back(ch.xi(p));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!integrated[i]) priority.push_back(i);
    DistributionalSemidensity r(ch);
    for (const auto& [k, parts] : s.terms())
        for (const auto& [beta, p] : parts) {
            auto body = berezin_integrate(odd_order, p);
            if (body.is_zero()) continue;
            auto red = detail::reduce(ch, RawDistributionTerm{k.forms, beta, body, k.gauss}, priority);
            std::vector<bool> pinned(n, false);
            std::vector<std::size_t> keep_rows;
            for (std::size_t b = 0; b < red.pivots.size(); ++b) {
                if (integrated[red.pivots[b]]) {
                    pinned[red.pivots[b]] = true;
                } else {
                    keep_rows.push_back(b);
                }
            }
            for (auto p2 : pairs)
                if (!pinned[p2]) {
                    throw CompositionUndefinedError("integration over '" + ch.x_name(p2) +
                                                    "' is not pinned by a delta factor");
                }
            QMatrix forms = red.forms.select_rows(keep_rows);
            for (const auto& [b2, q] : red.parts) {
                bool survives = true;
                DeltaIndex nb;
                for (std::size_t b = 0; b < red.pivots.size(); ++b) {
                    if (integrated[red.pivots[b]]) {
                        survives &= b2[b] == 0;
                    } else {
                        nb.push_back(b2[b]);
                    }
                }
                if (survives) r.add(RawDistributionTerm{forms, nb, q, red.gauss});
            }
        }
    return r;
}

/// Integral of a distribution over the whole chart: odd variables xi_1
/// innermost first, then delta-pinned directions, then a Gaussian integral
/// over the remaining ones.
inline ScalarValue integrate_all(const DistributionalSemidensity& s) {
    const auto& ch = s.chart();
    const std::size_t n = ch.pairs();
    ScalarValue total;
    for (const auto& [k, parts] : s.terms()) {
        std::vector<bool> pivot(n, false);
        for (std::size_t a = 0; a < k.forms.rows(); ++a)
            for (std::size_t j = 0; j < n; ++j)
                if (sgn(k.forms(a, j)) != 0) {
                    pivot[j] = true;
                    break;
                }
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < n; ++j)
            if (!pivot[j]) free.push_back(j);
        QMatrix qf = k.gauss.select_rows(free).select_cols(free);
        std::optional<detail::WickMoments> wick;
        Rational d = 1;
        for (const auto& [beta, p] : parts) {
            if (std::any_of(beta.begin(), beta.end(), [](unsigned b) { return b != 0; })) continue;
            auto body = berezin_integrate(ch.xis(), p);
            if (body.is_zero()) continue;
            if (!free.empty() && !wick) {
                if (!detail::positive_definite(qf)) {
                    throw DivergenceError("integral diverges along '" + ch.x_name(free.front()) + "'");
                }
                d = det(qf);
                wick.emplace(Rational(1, 2) * inverse(qf));
            }
            Rational e = 0;
            for (const auto& [m, c] : body.terms()) {
                std::vector<unsigned> a;
                for (auto j : free) a.push_back(m[ch.x(j)]);
                e += c * (free.empty() ? Rational(1) : (*wick)(a));
            }
            total += ScalarValue::make(e, static_cast<int>(free.size()), 1 / d);
        }
    }
    return total;
}

/// (alpha, beta) = int alpha beta.
inline ScalarValue pairing(const DistributionalSemidensity& a, const DistributionalSemidensity& b) {
    return integrate_all(a * b);
}

}  // namespace oddsym

#pragma once

/**
 * @file deformed.hpp
 * @brief Normal forms in the filtered deformation Omega_pi(X) of differential forms.
 *
 * Elements live over the table [z_1..z_n, d(z_1)..d(z_n)] where d(z) has
 * parity |z|+1. Because every coordinate precedes every d-symbol in table
 * order, a canonical monomial of that table *is* the normal word
 * (function part) * (ascending d-word), and the leading part of an element
 * is literally an element of Omega(X).
 *
 * Rewriting uses two rule families:
 *   d(g) f = (-1)^{|f|(|g|+1)} (f d(g) - {f,g})          (functions left)
 *   d(z_b) d(z_a) = (-1)^{|dz_a||dz_b|} d(z_a) d(z_b) + d{z_b,z_a}   (b > a)
 * with d(z_a)^2 = 1/2 d{z_a,z_a} for odd d(z_a). Each recursive call acts on
 * a strictly shorter d-word, so normalization terminates for any pi; only
 * associativity and d^2 = 0 depend on Jacobi.
 */

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/poisson.hpp"
#include "oddsym/random.hpp"

namespace oddsym {

using DeformedElement = SuperPolynomial;

struct GrSymbol {
    unsigned degree = 0;
    SuperPolynomial leading;  // element of Omega(X) over the forms table
};

struct ConsistencyWitness {
    std::string kind;  // "associativity" or "d^2"
    std::vector<DeformedElement> inputs;
    DeformedElement defect;
    std::string description;
};

struct ConsistencyResult {
    bool ok = true;
    std::size_t checked = 0;
    std::optional<ConsistencyWitness> witness;
};

class DeformedAlgebra {
public:
    explicit DeformedAlgebra(OddPoissonStructure pi, std::size_t step_budget = 5'000'000)
        : pi_(std::move(pi)), budget_(step_budget) {
        const auto& base = *pi_.base();
        n_ = base.size();
        std::vector<Variable> vars = base.variables();
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& z = base[i];
            vars.push_back(Variable{"d(" + z.name + ")", z.parity + Parity::Odd, z.degree + 1, Role::DSymbol});
        }
        forms_ = VariableTable::make(std::move(vars), base.graded());
        brackets_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) brackets_[i * n_ + j] = embed(pi_.coordinate_bracket(i, j));
    }

    DeformedAlgebra(const DeformedAlgebra&) = delete;
    DeformedAlgebra& operator=(const DeformedAlgebra&) = delete;

    const OddPoissonStructure& pi() const { return pi_; }
    const TablePtr& forms() const { return forms_; }
    const TablePtr& base() const { return pi_.base(); }
    std::size_t dimension() const { return n_; }
    std::size_t dsym_index(std::size_t i) const { return n_ + i; }

    // ---- construction ----------------------------------------------------

    DeformedElement zero() const { return DeformedElement(forms_); }
    DeformedElement constant(const Rational& c) const { return SuperPolynomial::constant(forms_, c); }
    DeformedElement coordinate(std::size_t i) const { return SuperPolynomial::variable(forms_, i); }
    DeformedElement dsym(std::size_t i) const { return SuperPolynomial::variable(forms_, dsym_index(i)); }

    /// A function on X viewed in F^0.
    DeformedElement embed(const SuperPolynomial& f) const {
        if (same_table(f.table(), forms_)) {
            if (!is_function(f)) throw DomainError("expected a function (no d-symbols)");
            return f;
        }
        require_same_table(f.table(), pi_.base(), "embedding into the deformed algebra");
        SuperPolynomial r(forms_);
        for (const auto& [m, c] : f.terms()) {
            Monomial out(forms_->size());
            for (std::size_t i = 0; i < n_; ++i) out[i] = m[i];
            r.add_term(out, c);
        }
        return r;
    }

    /// The F^0 part, as a function on X.
    SuperPolynomial restrict_function(const DeformedElement& a) const {
        SuperPolynomial r(pi_.base());
        for (const auto& [m, c] : a.terms()) {
            if (filtration_of(m) != 0) continue;
            Monomial out(n_);
            for (std::size_t i = 0; i < n_; ++i) out[i] = m[i];
            r.add_term(out, c);
        }
        return r;
    }

    bool is_function(const DeformedElement& a) const {
        for (const auto& [m, c] : a.terms())
            if (filtration_of(m) != 0) return false;
        return true;
    }

    // ---- structure -------------------------------------------------------

    unsigned filtration_of(const Monomial& m) const {
        unsigned k = 0;
        for (std::size_t i = 0; i < n_; ++i) k += m[n_ + i];
        return k;
    }

    unsigned filtration_degree(const DeformedElement& a) const {
        unsigned k = 0;
        for (const auto& [m, c] : a.terms()) k = std::max(k, filtration_of(m));
        return k;
    }

    GrSymbol gr_symbol(const DeformedElement& a) const {
        check(a);
        if (a.is_zero()) throw DomainError("gr_symbol of zero");
        unsigned k = filtration_degree(a);
        return GrSymbol{k, a.filter([&](const Monomial& m) { return filtration_of(m) == k; })};
    }

    // ---- operations ------------------------------------------------------

    DeformedElement mul(const DeformedElement& a, const DeformedElement& b) const {
        check(a);
        check(b);
        StepCounter steps(*this);
        DeformedElement r(forms_);
        for (const auto& [mb, cb] : b.terms()) {
            auto [gb, eb] = split(mb);
            for (const auto& [ma, ca] : a.terms()) {
                auto [ga, ea] = split(ma);
                // ga * (ea * gb) * eb
                DeformedElement mid = word_times_function(ea, gb, steps);
                mid = element_times_word(mid, eb, steps);
                r += (SuperPolynomial::monomial(forms_, ga, ca * cb)) * mid;
            }
        }
        return r;
    }

    DeformedElement d(const DeformedElement& a) const {
        check(a);
        StepCounter steps(*this);
        DeformedElement r(forms_);
        for (const auto& [m, c] : a.terms()) {
            auto [g, e] = split(m);
            DeformedElement dg = differential_of_function(g, steps);
            if (dg.is_zero()) continue;
            r += element_times_word(dg, e, steps) * c;
        }
        return r;
    }

    /// Supercommutator [a, b] = ab - (-1)^{|a||b|} ba for homogeneous a, b.
    DeformedElement commutator(const DeformedElement& a, const DeformedElement& b) const {
        Parity pa = a.parity_or(Parity::Even), pb = b.parity_or(Parity::Even);
        return mul(a, b) - mul(b, a) * Rational(koszul(pa, pb));
    }

    /// Product of a list of elements, left to right.
    DeformedElement product(const std::vector<DeformedElement>& xs) const {
        DeformedElement r = constant(1);
        for (const auto& x : xs) r = mul(r, x);
        return r;
    }

    /// Evaluates a word of generators: index i < n means z_i, i >= n means d(z_{i-n}).
    DeformedElement word(const std::vector<std::size_t>& letters) const {
        DeformedElement r = constant(1);
        for (auto l : letters) r = mul(r, SuperPolynomial::variable(forms_, l));
        return r;
    }

    // ---- consistency -----------------------------------------------------

    /// Associativity on all generator triples and on `samples` random
    /// triples, plus d^2 = 0 on generators, generator products and random
    /// elements. Stops at the first failure.
    ConsistencyResult consistency_check(std::size_t samples, std::uint64_t seed, unsigned max_degree = 2) const {
        ConsistencyResult res;
        const std::size_t g = 2 * n_;
        auto gen = [&](std::size_t i) { return SuperPolynomial::variable(forms_, i); };
        auto assoc = [&](const DeformedElement& a, const DeformedElement& b, const DeformedElement& c) {
            ++res.checked;
            auto lhs = mul(mul(a, b), c), rhs = mul(a, mul(b, c));
            if (lhs == rhs) return true;
            res.ok = false;
            res.witness = ConsistencyWitness{"associativity", {a, b, c}, lhs - rhs,
                                             "(ab)c - a(bc) = " + render(lhs - rhs) + " for a = " + render(a) +
                                                 ", b = " + render(b) + ", c = " + render(c)};
            return false;
        };
        auto dsq = [&](const DeformedElement& a) {
            ++res.checked;
            auto dd = d(d(a));
            if (dd.is_zero()) return true;
            res.ok = false;
            res.witness = ConsistencyWitness{"d^2", {a}, dd, "d(d(a)) = " + render(dd) + " for a = " + render(a)};
            return false;
        };
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j)
                for (std::size_t k = 0; k < g; ++k)
                    if (!assoc(gen(i), gen(j), gen(k))) return res;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!dsq(gen(i))) return res;
            for (std::size_t j = 0; j < n_; ++j)
                if (!dsq(gen(i) * gen(j))) return res;
        }
        Sampler rng(seed);
        for (std::size_t s = 0; s < samples; ++s) {
            auto a = random_element(rng, max_degree, 2), b = random_element(rng, max_degree, 2),
                 c = random_element(rng, max_degree, 2);
            if (!assoc(a, b, c)) return res;
            if (!dsq(random_element(rng, max_degree + 1, 3))) return res;
        }
        return res;
    }

    /// Random element with at most `max_degree` total letters per term.
    DeformedElement random_element(Sampler& rng, unsigned max_degree, int max_terms = 3) const {
        return rng.polynomial(forms_, max_degree, max_terms, rng.parity());
    }

    /// Random function on X embedded in F^0.
    DeformedElement random_function(Sampler& rng, unsigned max_degree, int max_terms = 3) const {
        std::vector<std::size_t> zs;
        for (std::size_t i = 0; i < n_; ++i) zs.push_back(i);
        return rng.polynomial(forms_, max_degree, max_terms, rng.parity(), zs);
    }

    // ---- rendering -------------------------------------------------------

    /// `coef * d(z1)^e1 d(z2) ...`, highest filtration first, then monomial order.
    std::string render(const DeformedElement& a) const {
        if (a.is_zero()) return "0";
        std::vector<std::pair<const Monomial*, const Rational*>> terms;
        for (const auto& [m, c] : a.terms()) terms.emplace_back(&m, &c);
        std::stable_sort(terms.begin(), terms.end(), [&](const auto& x, const auto& y) {
            return filtration_of(*x.first) > filtration_of(*y.first);
        });
        std::string out;
        bool first = true;
        for (const auto& [mp, cp] : terms) {
            const auto& m = *mp;
            Rational mag = abs(*cp);
            bool neg = sgn(*cp) < 0;
            out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
            first = false;
            std::string fpart, dpart;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!m[i]) continue;
                if (!fpart.empty()) fpart += '*';
                fpart += (*forms_)[i].name;
                if (m[i] > 1) fpart += '^' + std::to_string(m[i]);
            }
            for (std::size_t i = 0; i < n_; ++i) {
                if (!m[n_ + i]) continue;
                if (!dpart.empty()) dpart += ' ';
                dpart += (*forms_)[n_ + i].name;
                if (m[n_ + i] > 1) dpart += '^' + std::to_string(m[n_ + i]);
            }
            std::string coef;
            if (mag != 1 || (fpart.empty() && dpart.empty())) coef = to_string(mag);
            if (!fpart.empty()) coef = coef.empty() ? fpart : coef + '*' + fpart;
            if (dpart.empty()) {
                out += coef;
            } else if (coef.empty()) {
                out += dpart;
            } else {
                out += coef + " * " + dpart;
            }
        }
        return out;
    }

    std::size_t steps_used() const { return total_steps_.load(); }

private:
    struct StepCounter {
        const DeformedAlgebra& alg;
        std::size_t n = 0;
        explicit StepCounter(const DeformedAlgebra& a) : alg(a) {}
        ~StepCounter() { alg.total_steps_ += n; }
        void tick() {
            if (++n > alg.budget_) {
                throw ConsistencyError("normal-ordering exceeded its step budget of " + std::to_string(alg.budget_));
            }
        }
    };

    struct MonoPairLess {
        bool operator()(const std::pair<Monomial, Monomial>& a, const std::pair<Monomial, Monomial>& b) const {
            if (a.first.exps != b.first.exps) return a.first.exps < b.first.exps;
            return a.second.exps < b.second.exps;
        }
    };
    struct MonoIdxLess {
        bool operator()(const std::pair<Monomial, std::size_t>& a, const std::pair<Monomial, std::size_t>& b) const {
            if (a.first.exps != b.first.exps) return a.first.exps < b.first.exps;
            return a.second < b.second;
        }
    };
    struct MonoLess {
        bool operator()(const Monomial& a, const Monomial& b) const { return a.exps < b.exps; }
    };

    void check(const DeformedElement& a) const {
        if (!a.table()) return;
        require_same_table(a.table(), forms_, "deformed algebra element");
    }

    /// Splits a forms monomial into (function part, d-word), both over the
    /// forms table; the product of the two is the monomial with sign +1.
    std::pair<Monomial, Monomial> split(const Monomial& m) const {
        Monomial g(forms_->size()), e(forms_->size());
        for (std::size_t i = 0; i < n_; ++i) {
            g[i] = m[i];
            e[n_ + i] = m[n_ + i];
        }
        return {g, e};
    }

    /// Highest d-symbol letter of a nonempty d-word.
    std::optional<std::size_t> last_letter(const Monomial& e) const {
        for (std::size_t i = n_; i-- > 0;)
            if (e[n_ + i]) return i;
        return std::nullopt;
    }

    /// {h, z_a} = sum_i dR_{z_i} h * {z_i, z_a}.
    SuperPolynomial bracket_with_coordinate(const Monomial& h, std::size_t a) const {
        auto hp = SuperPolynomial::monomial(forms_, h);
        SuperPolynomial r(forms_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!h[i]) continue;
            const auto& b = brackets_[i * n_ + a];
            if (b.is_zero()) continue;
            r += poly_right_deriv(i, hp) * b;
        }
        return r;
    }

    /// Normal form of E * h for a d-word E and a function monomial h.
    DeformedElement word_times_function(const Monomial& e, const Monomial& h, StepCounter& steps) const {
        if (h.is_one()) return SuperPolynomial::monomial(forms_, e);
        auto last = last_letter(e);
        if (!last) return SuperPolynomial::monomial(forms_, h);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = wf_cache_.find({e, h});
            if (it != wf_cache_.end()) return it->second;
        }
        steps.tick();
        const std::size_t a = *last;
        Monomial rest = e;
        --rest[n_ + a];
        const Parity ph = monomial_parity(h, *forms_);
        // d(z_a) h = s (h d(z_a) - {h, z_a}),  s = (-1)^{|h|(|z_a|+1)}
        const Rational s = koszul(ph, pi_.base()->parity(a) + Parity::Odd);
        DeformedElement r(forms_);
        DeformedElement head = word_times_function(rest, h, steps);
        r += right_times_letter(head, a, steps) * s;
        SuperPolynomial br = bracket_with_coordinate(h, a);
        for (const auto& [m, c] : br.terms()) r -= word_times_function(rest, m, steps) * Rational(s * c);
        std::lock_guard<std::mutex> lock(mu_);
        wf_cache_.emplace(std::make_pair(e, h), r);
        return r;
    }

    /// Normal form of X * d(z_a) for a normal-form element X.
    DeformedElement right_times_letter(const DeformedElement& x, std::size_t a, StepCounter& steps) const {
        DeformedElement r(forms_);
        for (const auto& [m, c] : x.terms()) {
            auto [g, e] = split(m);
            r += SuperPolynomial::monomial(forms_, g, c) * word_times_letter(e, a, steps);
        }
        return r;
    }

    /// Normal form of X * E for a d-word E.
    DeformedElement element_times_word(DeformedElement x, const Monomial& e, StepCounter& steps) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (unsigned k = 0; k < e[n_ + i]; ++k) x = right_times_letter(x, i, steps);
        return x;
    }

    /// Normal form of E * d(z_a) for a d-word E.
    DeformedElement word_times_letter(const Monomial& e, std::size_t a, StepCounter& steps) const {
        auto last = last_letter(e);
        const std::size_t da = n_ + a;
        if (!last || *last < a) {
            Monomial out = e;
            out[da] = 1;
            return SuperPolynomial::monomial(forms_, out);
        }
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = wl_cache_.find({e, a});
            if (it != wl_cache_.end()) return it->second;
        }
        steps.tick();
        DeformedElement r(forms_);
        const std::size_t b = *last;
        Monomial rest = e;
        --rest[n_ + b];
        if (b == a) {
            if (!forms_->is_odd(da)) {
                Monomial out = e;
                ++out[da];
                r = SuperPolynomial::monomial(forms_, out);
            } else {
                // d(z_a) d(z_a) = 1/2 d{z_a, z_a}
                auto dz = differential_of_function_poly(brackets_[a * n_ + a], steps);
                r = times_element(rest, dz, steps) * Rational(1, 2);
            }
        } else {
            // d(z_b) d(z_a) = (-1)^{|dz_a||dz_b|} d(z_a) d(z_b) + d{z_b, z_a}
            const Rational s = koszul(forms_->parity(da), forms_->parity(n_ + b));
            DeformedElement head = word_times_letter(rest, a, steps);
            r += right_times_letter(head, b, steps) * s;
            auto dz = differential_of_function_poly(brackets_[b * n_ + a], steps);
            r += times_element(rest, dz, steps);
        }
        std::lock_guard<std::mutex> lock(mu_);
        wl_cache_.emplace(std::make_pair(e, a), r);
        return r;
    }

    /// Normal form of E * Y for a d-word E and a normal-form element Y.
    DeformedElement times_element(const Monomial& e, const DeformedElement& y, StepCounter& steps) const {
        DeformedElement r(forms_);
        for (const auto& [m, c] : y.terms()) {
            auto [g, f] = split(m);
            r += element_times_word(word_times_function(e, g, steps), f, steps) * c;
        }
        return r;
    }

    DeformedElement differential_of_function_poly(const SuperPolynomial& g, StepCounter& steps) const {
        DeformedElement r(forms_);
        for (const auto& [m, c] : g.terms()) r += differential_of_function(m, steps) * c;
        return r;
    }

    /// d of a function monomial: sum over letters of
    /// (-1)^{|prefix|} prefix * (d(z_k) * suffix).
    DeformedElement differential_of_function(const Monomial& g, StepCounter& steps) const {
        if (g.is_one()) return zero();
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = d_cache_.find(g);
            if (it != d_cache_.end()) return it->second;
        }
        steps.tick();
        std::vector<std::size_t> letters;
        for (std::size_t i = 0; i < n_; ++i)
            for (unsigned k = 0; k < g[i]; ++k) letters.push_back(i);
        DeformedElement r(forms_);
        Monomial prefix(forms_->size());
        int prefix_odd = 0;
        for (std::size_t k = 0; k < letters.size(); ++k) {
            Monomial suffix(forms_->size());
            for (std::size_t j = k + 1; j < letters.size(); ++j) ++suffix[letters[j]];
            Monomial dz(forms_->size());
            dz[n_ + letters[k]] = 1;
            auto tail = word_times_function(dz, suffix, steps);
            Rational s = (prefix_odd & 1) ? -1 : 1;
            r += SuperPolynomial::monomial(forms_, prefix, s) * tail;
            ++prefix[letters[k]];
            if (forms_->is_odd(letters[k])) ++prefix_odd;
        }
        std::lock_guard<std::mutex> lock(mu_);
        d_cache_.emplace(g, r);
        return r;
    }

    OddPoissonStructure pi_;
    std::size_t n_ = 0;
    TablePtr forms_;
    std::vector<SuperPolynomial> brackets_;
    std::size_t budget_;

    mutable std::mutex mu_;
    mutable std::map<std::pair<Monomial, Monomial>, DeformedElement, MonoPairLess> wf_cache_;
    mutable std::map<std::pair<Monomial, std::size_t>, DeformedElement, MonoIdxLess> wl_cache_;
    mutable std::map<Monomial, DeformedElement, MonoLess> d_cache_;
    mutable std::atomic<std::size_t> total_steps_{0};
};

/// Free functions mirroring the operation names.
inline DeformedElement nf_mul(const DeformedAlgebra& alg, const DeformedElement& a, const DeformedElement& b) {
    return alg.mul(a, b);
}
inline DeformedElement nf_d(const DeformedAlgebra& alg, const DeformedElement& a) { return alg.d(a); }
inline GrSymbol gr_symbol(const DeformedAlgebra& alg, const DeformedElement& a) { return alg.gr_symbol(a); }

/// Number of monomials of Omega(X) with coordinate degree <= max_coord_degree
/// and exactly `form_degree` d-symbols, counted combinatorially.
inline Integer free_form_count(const VariableTable& base, unsigned max_coord_degree, unsigned form_degree) {
    // Generating polynomial in (u = coordinate degree, v = form degree):
    // even z: 1/(1-u), odd z: (1+u); d of even z is odd: (1+v); d of odd z: 1/(1-v).
    const unsigned U = max_coord_degree, V = form_degree;
    std::vector<std::vector<Integer>> poly(U + 1, std::vector<Integer>(V + 1, 0));
    poly[0][0] = 1;
    auto mult = [&](bool along_u, bool geometric) {
        auto old = poly;
        for (unsigned i = 0; i <= U; ++i)
            for (unsigned j = 0; j <= V; ++j) {
                Integer s = 0;
                unsigned cap = along_u ? i : j;
                unsigned maxk = geometric ? cap : std::min(cap, 1u);
                for (unsigned k = 0; k <= maxk; ++k) s += along_u ? old[i - k][j] : old[i][j - k];
                poly[i][j] = s;
            }
    };
    for (std::size_t i = 0; i < base.size(); ++i) {
        bool odd = base.is_odd(i);
        mult(true, !odd);
        mult(false, odd);
    }
    Integer total = 0;
    for (unsigned i = 0; i <= U; ++i) total += poly[i][V];
    return total;
}

struct GrDimensionReport {
    unsigned coord_degree = 0, form_degree = 0;
    Integer expected = 0;
    std::size_t rank = 0;
    bool ok() const { return Integer(static_cast<unsigned long>(rank)) == expected; }
};

/// For each monomial of Omega(X) in the window, evaluates a scrambled word
/// (d-symbols first, in descending order, then coordinates in descending
/// order) in Omega_pi, takes leading symbols, and returns their rank.
inline GrDimensionReport gr_dimension_check(const DeformedAlgebra& alg, unsigned max_coord_degree, unsigned form_degree) {
    const auto& forms = *alg.forms();
    const std::size_t n = alg.dimension();
    std::vector<Monomial> basis;
    std::function<void(std::size_t, Monomial&, unsigned, unsigned)> rec = [&](std::size_t v, Monomial& m, unsigned cdeg,
                                                                               unsigned fdeg) {
        if (v == forms.size()) {
            if (fdeg == form_degree) basis.push_back(m);
            return;
        }
        const bool is_d = v >= n;
        unsigned cap = forms.is_odd(v) ? 1u : (is_d ? form_degree - fdeg : max_coord_degree - cdeg);
        if (is_d) cap = std::min(cap, form_degree - fdeg);
        else cap = std::min(cap, max_coord_degree - cdeg);
        for (unsigned e = 0; e <= cap; ++e) {
            m[v] = static_cast<std::uint16_t>(e);
            rec(v + 1, m, cdeg + (is_d ? 0 : e), fdeg + (is_d ? e : 0));
        }
        m[v] = 0;
    };
    Monomial m(forms.size());
    rec(0, m, 0, 0);

    std::map<Monomial, std::size_t, std::function<bool(const Monomial&, const Monomial&)>> column(
        [](const Monomial& a, const Monomial& b) { return a.exps < b.exps; });
    std::vector<SuperPolynomial> leading;
    for (const auto& b : basis) {
        std::vector<std::size_t> letters;
        for (std::size_t i = forms.size(); i-- > n;)
            for (unsigned k = 0; k < b[i]; ++k) letters.push_back(i);
        for (std::size_t i = n; i-- > 0;)
            for (unsigned k = 0; k < b[i]; ++k) letters.push_back(i);
        auto w = alg.word(letters);
        if (w.is_zero()) continue;
        auto g = alg.gr_symbol(w);
        if (g.degree != form_degree) continue;
        leading.push_back(g.leading);
        for (const auto& [lm, c] : g.leading.terms()) column.emplace(lm, column.size());
    }
    QMatrix mat(leading.size(), column.size());
    for (std::size_t r = 0; r < leading.size(); ++r)
        for (const auto& [lm, c] : leading[r].terms()) mat(r, column.at(lm)) = c;
    GrDimensionReport rep;
    rep.coord_degree = max_coord_degree;
    rep.form_degree = form_degree;
    rep.expected = free_form_count(*alg.base(), max_coord_degree, form_degree);
    rep.rank = leading.empty() ? 0 : rank(mat);
    return rep;
}

}  // namespace oddsym

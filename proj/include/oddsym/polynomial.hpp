#pragma once

/**
 * @file polynomial.hpp
 * @brief Free graded-commutative polynomial algebra over the rationals.
 *
 * A SuperPolynomial is a finite map from canonical monomials to nonzero
 * rationals. A monomial stores one exponent per table variable; exponents of
 * odd variables are 0 or 1 and the odd factors are understood to be written
 * in ascending table order. Every product re-sorts odd factors and picks up
 * the sign of the sorting permutation.
 *
 * Derivatives are left derivatives: an odd variable is commuted to the front
 * before it is removed. Berezin integration uses the same convention, so
 * that the integral of theta over d theta is 1.
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/errors.hpp"
#include "oddsym/rational.hpp"
#include "oddsym/variable_table.hpp"

namespace oddsym {

struct Monomial {
    std::vector<std::uint16_t> exps;

    Monomial() = default;
    explicit Monomial(std::size_t n) : exps(n, 0) {}

    std::size_t size() const { return exps.size(); }
    std::uint16_t operator[](std::size_t i) const { return exps[i]; }
    std::uint16_t& operator[](std::size_t i) { return exps[i]; }

    unsigned total_degree() const {
        unsigned d = 0;
        for (auto e : exps) d += e;
        return d;
    }
    bool is_one() const {
        return std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; });
    }

    bool operator==(const Monomial&) const = default;
};

/// Graded order: lower total degree first, then the monomial with the larger
/// exponent of the earliest table variable.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.exps > b.exps;
    }
};

inline Parity monomial_parity(const Monomial& m, const VariableTable& t) {
    int p = 0;
    for (auto i : t.odd_indices()) p ^= (m[i] & 1);
    return parity_of(p);
}

/// Number of odd factors of `m` with table index strictly greater than `i`.
inline int odd_after(const Monomial& m, const VariableTable& t, std::size_t i) {
    int c = 0;
    for (auto j : t.odd_indices())
        if (j > i && m[j]) ++c;
    return c;
}

inline int odd_before(const Monomial& m, const VariableTable& t, std::size_t i) {
    int c = 0;
    for (auto j : t.odd_indices()) {
        if (j >= i) break;
        if (m[j]) ++c;
    }
    return c;
}

/// Product of canonical monomials. Returns 0 when an odd factor repeats,
/// otherwise the sign of the sorting permutation.
inline int multiply_monomials(const Monomial& a, const Monomial& b, const VariableTable& t, Monomial& out) {
    out = a;
    int swaps = 0;
    const auto& odd = t.odd_indices();
    // For every odd factor of b, count the odd factors of a it has to pass.
    int a_odd_above = 0;
    for (auto j : odd) a_odd_above += a[j];
    for (auto j : odd) {
        if (a[j]) --a_odd_above;
        if (b[j]) {
            if (a[j]) return 0;
            swaps += a_odd_above;
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<std::uint16_t>(a[i] + b[i]);
    return (swaps & 1) ? -1 : 1;
}

class SuperPolynomial {
public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    SuperPolynomial() = default;
    explicit SuperPolynomial(TablePtr table) : table_(std::move(table)) {}

    static SuperPolynomial constant(TablePtr table, const Rational& c) {
        SuperPolynomial p(table);
        p.add_term(Monomial(p.table_->size()), c);
        return p;
    }
    static SuperPolynomial variable(TablePtr table, std::size_t index) {
        if (index >= table->size()) throw StructuralError("variable index out of range");
        SuperPolynomial p(table);
        Monomial m(table->size());
        m[index] = 1;
        p.add_term(m, 1);
        return p;
    }
    static SuperPolynomial variable(TablePtr table, const std::string& name) {
        auto i = table->index(name);
        return variable(std::move(table), i);
    }
    static SuperPolynomial monomial(TablePtr table, Monomial m, const Rational& c = 1) {
        SuperPolynomial p(std::move(table));
        p.add_term(std::move(m), c);
        return p;
    }

    /// Product of generators in the given (possibly unsorted) order.
    static SuperPolynomial word(TablePtr table, const std::vector<std::size_t>& letters, const Rational& c = 1) {
        SuperPolynomial p = constant(table, c);
        for (auto l : letters) p = p * variable(table, l);
        return p;
    }

    const TablePtr& table() const { return table_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& m, const Rational& c) {
        if (is_zero_rational(c)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (is_zero_rational(it->second)) terms_.erase(it);
        }
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const {
        if (!table_) return 0;
        return coefficient(Monomial(table_->size()));
    }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }

    SuperPolynomial& operator+=(const SuperPolynomial& o) {
        adopt_table(o, "polynomial addition");
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SuperPolynomial& operator-=(const SuperPolynomial& o) {
        adopt_table(o, "polynomial subtraction");
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    SuperPolynomial& operator*=(const Rational& s) {
        if (is_zero_rational(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
    friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }
    friend SuperPolynomial operator-(SuperPolynomial a) { return a *= Rational(-1); }
    friend SuperPolynomial operator*(SuperPolynomial a, const Rational& s) { return a *= s; }
    friend SuperPolynomial operator*(const Rational& s, SuperPolynomial a) { return a *= s; }

    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
        require_same_table(a.table_, b.table_, "polynomial product");
        SuperPolynomial r(a.table_);
        Monomial out;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                int s = multiply_monomials(ma, mb, *a.table_, out);
                if (s == 0) continue;
                Rational c = ca * cb;
                if (s < 0) c = -c;
                r.add_term(out, c);
            }
        }
        return r;
    }

    bool operator==(const SuperPolynomial& o) const {
        if (terms_.empty() && o.terms_.empty()) return true;
        return same_table(table_, o.table_) && terms_ == o.terms_;
    }

    /// Parity of the unique homogeneous component, or nullopt for zero or
    /// inhomogeneous elements.
    std::optional<Parity> parity() const {
        std::optional<Parity> p;
        for (const auto& [m, c] : terms_) {
            Parity q = monomial_parity(m, *table_);
            if (p && *p != q) return std::nullopt;
            p = q;
        }
        return p;
    }

    bool is_homogeneous() const { return terms_.empty() || parity().has_value(); }

    /// Parity for a homogeneous element; zero counts as `fallback`.
    Parity parity_or(Parity fallback) const {
        if (terms_.empty()) return fallback;
        auto p = parity();
        if (!p) throw ParityError("element is not parity-homogeneous");
        return *p;
    }

    SuperPolynomial part(Parity want) const {
        SuperPolynomial r(table_);
        for (const auto& [m, c] : terms_)
            if (monomial_parity(m, *table_) == want) r.terms_.emplace(m, c);
        return r;
    }
    SuperPolynomial even_part() const { return part(Parity::Even); }
    SuperPolynomial odd_part() const { return part(Parity::Odd); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    /// True iff no term involves any of the listed variables.
    bool free_of(const std::vector<std::size_t>& vars) const {
        for (const auto& [m, c] : terms_)
            for (auto v : vars)
                if (m[v]) return false;
        return true;
    }

    template <class F>
    SuperPolynomial filter(F&& keep) const {
        SuperPolynomial r(table_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) r.terms_.emplace(m, c);
        return r;
    }

private:
    static bool is_zero_rational(const Rational& c) { return sgn(c) == 0; }

    void adopt_table(const SuperPolynomial& o, const char* what) {
        if (!table_) {
            table_ = o.table_;
            return;
        }
        if (!o.table_) return;
        require_same_table(table_, o.table_, what);
    }

    TablePtr table_;
    TermMap terms_;
};

inline SuperPolynomial poly_mul(const SuperPolynomial& a, const SuperPolynomial& b) { return a * b; }

/// Left derivative with respect to variable `v`.
inline SuperPolynomial poly_deriv(std::size_t v, const SuperPolynomial& a) {
    const auto& t = *a.table();
    if (v >= t.size()) throw StructuralError("derivative: variable index out of range");
    SuperPolynomial r(a.table());
    const bool odd = t.is_odd(v);
    for (const auto& [m, c] : a.terms()) {
        if (!m[v]) continue;
        Monomial out = m;
        if (odd) {
            out[v] = 0;
            r.add_term(out, (odd_before(m, t, v) & 1) ? Rational(-c) : c);
        } else {
            out[v] = static_cast<std::uint16_t>(m[v] - 1);
            r.add_term(out, c * m[v]);
        }
    }
    return r;
}

inline SuperPolynomial poly_deriv(const std::string& v, const SuperPolynomial& a) {
    return poly_deriv(a.table()->index(v), a);
}

/// Right derivative: the factor is commuted to the far right before removal.
inline SuperPolynomial poly_right_deriv(std::size_t v, const SuperPolynomial& a) {
    const auto& t = *a.table();
    if (v >= t.size()) throw StructuralError("derivative: variable index out of range");
    if (!t.is_odd(v)) return poly_deriv(v, a);
    SuperPolynomial r(a.table());
    for (const auto& [m, c] : a.terms()) {
        if (!m[v]) continue;
        Monomial out = m;
        out[v] = 0;
        r.add_term(out, (odd_after(m, t, v) & 1) ? Rational(-c) : c);
    }
    return r;
}

/// Berezin integral over one odd variable; agrees with the left derivative.
inline SuperPolynomial berezin_integrate(std::size_t v, const SuperPolynomial& a) {
    if (!a.table()->is_odd(v)) {
        throw StructuralError("Berezin integration over even variable '" + (*a.table())[v].name + "'");
    }
    return poly_deriv(v, a);
}

inline SuperPolynomial berezin_integrate(const std::string& v, const SuperPolynomial& a) {
    return berezin_integrate(a.table()->index(v), a);
}

/// Iterated integral; `order` lists the variables innermost first.
inline SuperPolynomial berezin_integrate(const std::vector<std::size_t>& order, SuperPolynomial a) {
    for (auto v : order) a = berezin_integrate(v, a);
    return a;
}

/// Algebra homomorphism determined by images of the source generators.
class Substitution {
public:
    Substitution(TablePtr source, TablePtr target, std::vector<SuperPolynomial> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        if (images_.size() != source_->size()) throw StructuralError("substitution: wrong number of images");
        for (std::size_t i = 0; i < images_.size(); ++i) {
            auto& img = images_[i];
            if (!img.table()) img = SuperPolynomial(target_);
            require_same_table(img.table(), target_, "substitution image");
            if (img.is_zero()) continue;
            auto p = img.parity();
            if (!p || *p != source_->parity(i)) {
                throw ParityError("substitution: image of '" + (*source_)[i].name + "' has the wrong parity");
            }
        }
    }

    /// Generators not named in `map` go to the target generator of the same
    /// name.
    static Substitution from_map(TablePtr source, TablePtr target,
                                 const std::map<std::string, SuperPolynomial>& map) {
        for (const auto& [name, img] : map) source->index(name);
        std::vector<SuperPolynomial> images;
        images.reserve(source->size());
        for (std::size_t i = 0; i < source->size(); ++i) {
            const auto& name = (*source)[i].name;
            auto it = map.find(name);
            if (it != map.end()) {
                images.push_back(it->second);
            } else {
                auto j = target->find(name);
                if (!j) throw StructuralError("substitution: no image for '" + name + "'");
                images.push_back(SuperPolynomial::variable(target, *j));
            }
        }
        return Substitution(std::move(source), std::move(target), std::move(images));
    }

    static Substitution identity(TablePtr table) { return from_map(table, table, {}); }

    const TablePtr& source() const { return source_; }
    const TablePtr& target() const { return target_; }
    const SuperPolynomial& image(std::size_t i) const { return images_[i]; }
    const std::vector<SuperPolynomial>& images() const { return images_; }

    SuperPolynomial operator()(const SuperPolynomial& a) const {
        require_same_table(a.table(), source_, "substitution argument");
        SuperPolynomial r(target_);
        std::map<std::pair<std::size_t, unsigned>, SuperPolynomial> powers;
        auto power = [&](std::size_t v, unsigned e) -> const SuperPolynomial& {
            auto key = std::make_pair(v, e);
            auto it = powers.find(key);
            if (it != powers.end()) return it->second;
            SuperPolynomial p = SuperPolynomial::constant(target_, 1);
            for (unsigned k = 0; k < e; ++k) p = p * images_[v];
            return powers.emplace(key, std::move(p)).first->second;
        };
        for (const auto& [m, c] : a.terms()) {
            SuperPolynomial term = SuperPolynomial::constant(target_, c);
            for (std::size_t v = 0; v < m.size() && !term.is_zero(); ++v)
                if (m[v]) term = term * power(v, m[v]);
            r += term;
        }
        return r;
    }

    /// (this after inner): apply `inner` first.
    Substitution after(const Substitution& inner) const {
        require_same_table(inner.target_, source_, "substitution composition");
        std::vector<SuperPolynomial> imgs;
        imgs.reserve(inner.images_.size());
        for (const auto& img : inner.images_) imgs.push_back((*this)(img));
        return Substitution(inner.source_, target_, std::move(imgs));
    }

private:
    TablePtr source_;
    TablePtr target_;
    std::vector<SuperPolynomial> images_;
};

inline SuperPolynomial substitute(const Substitution& s, const SuperPolynomial& a) { return s(a); }

/// Moves a polynomial between tables by variable name. Variables absent from
/// the target are an error unless `drop_missing` is set, in which case terms
/// containing them are discarded.
inline SuperPolynomial rename_into(const SuperPolynomial& a, const TablePtr& target, bool drop_missing = false) {
    const auto& src = *a.table();
    std::vector<std::optional<std::size_t>> map(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) map[i] = target->find(src[i].name);
    SuperPolynomial r(target);
    for (const auto& [m, c] : a.terms()) {
        Monomial out(target->size());
        bool keep = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (!map[i]) {
                if (!drop_missing) throw StructuralError("variable '" + src[i].name + "' missing from target table");
                keep = false;
                break;
            }
            out[*map[i]] = m[i];
        }
        if (!keep) continue;
        // Odd factors keep their relative order only if the index map is
        // monotone on them; otherwise re-sort through a word product.
        std::vector<std::size_t> letters;
        bool monotone = true;
        std::size_t last = 0;
        bool first = true;
        for (auto i : src.odd_indices()) {
            if (!m[i]) continue;
            if (!first && *map[i] < last) monotone = false;
            last = *map[i];
            first = false;
            letters.push_back(*map[i]);
        }
        if (monotone) {
            r.add_term(out, c);
        } else {
            Monomial even_only = out;
            for (auto l : letters) even_only[l] = 0;
            r += SuperPolynomial::monomial(target, even_only, c) * SuperPolynomial::word(target, letters);
        }
    }
    return r;
}

inline std::string monomial_to_string(const Monomial& m, const VariableTable& t) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += '*';
        s += t[i].name;
        if (m[i] > 1) s += '^' + std::to_string(m[i]);
    }
    return s;
}

/// Canonical rendering: terms in monomial order, coefficients as p/q.
inline std::string to_string(const SuperPolynomial& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        Rational mag = abs(c);
        bool neg = sgn(c) < 0;
        if (first) {
            if (neg) out += '-';
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string mono = monomial_to_string(m, *a.table());
        if (mono.empty()) {
            out += to_string(mag);
        } else {
            if (mag != 1) out += to_string(mag) + '*';
            out += mono;
        }
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const SuperPolynomial& a) { return os << to_string(a); }

}  // namespace oddsym

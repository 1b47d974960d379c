#pragma once

/**
 * @file scalar.hpp
 * @brief Exact values of Gaussian integrals: finite sums of c * pi^{k/2} * sqrt(r).
 *
 * A single monomial c * pi^{k/2} * sqrt(r) is not closed under addition when
 * terms with different numbers of free Gaussian directions meet, so a
 * ScalarValue is a canonical sum over (k, r) with r a squarefree positive
 * integer.
 */

#include <map>
#include <string>
#include <utility>

#include "oddsym/rational.hpp"

namespace oddsym {

namespace detail {

/// n = s^2 * f with f squarefree; returns (s, f). Trial division.
inline std::pair<Integer, Integer> square_split(Integer n) {
    if (n <= 0) throw DomainError("square_split: nonpositive argument");
    Integer s = 1, f = 1;
    for (Integer p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / 2; ++i) s *= p;
        if (e & 1) f *= p;
    }
    f *= n;
    return {s, f};
}

}  // namespace detail

class ScalarValue {
public:
    using Key = std::pair<int, Integer>;  // (power of sqrt(pi), squarefree radicand)

    ScalarValue() = default;
    explicit ScalarValue(const Rational& c) { add(c, 0, Rational(1)); }

    /// c * pi^{k/2} * sqrt(r) for a positive rational r.
    static ScalarValue make(const Rational& c, int half_pi_power, const Rational& radicand) {
        ScalarValue v;
        v.add(c, half_pi_power, radicand);
        return v;
    }

    void add(const Rational& c, int half_pi_power, const Rational& radicand) {
        if (sgn(c) == 0) return;
        if (sgn(radicand) <= 0) throw DomainError("ScalarValue: radicand must be positive");
        // sqrt(p/q) = sqrt(p q) / q
        Integer p = radicand.get_num(), q = radicand.get_den();
        auto [s, f] = detail::square_split(p * q);
        Rational coef = c * Rational(s) / Rational(q);
        Key key{half_pi_power, f};
        auto [it, inserted] = terms_.emplace(key, coef);
        if (!inserted) {
            it->second += coef;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    ScalarValue& operator+=(const ScalarValue& o) {
        for (const auto& [k, c] : o.terms_) add(c, k.first, Rational(k.second));
        return *this;
    }
    friend ScalarValue operator+(ScalarValue a, const ScalarValue& b) { return a += b; }
    friend ScalarValue operator-(ScalarValue a) {
        for (auto& [k, c] : a.terms_) c = -c;
        return a;
    }
    friend ScalarValue operator-(ScalarValue a, const ScalarValue& b) { return a += -b; }
    friend ScalarValue operator*(ScalarValue a, const Rational& s) {
        if (sgn(s) == 0) return ScalarValue();
        for (auto& [k, c] : a.terms_) c *= s;
        return a;
    }
    friend ScalarValue operator*(const ScalarValue& a, const ScalarValue& b) {
        ScalarValue r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add(ca * cb, ka.first + kb.first, Rational(ka.second * kb.second));
        return r;
    }

    bool operator==(const ScalarValue& o) const { return terms_ == o.terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// The rational value when no pi powers or radicals are present.
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, Integer(1)});
    }
    Rational rational_part() const {
        auto it = terms_.find(Key{0, Integer(1)});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }

    /// e.g. "3/2*pi^(1/2)*sqrt(2) + 1".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            Rational mag = abs(c);
            bool neg = sgn(c) < 0;
            out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
            first = false;
            std::string factors;
            if (k.first != 0) {
                if (k.first % 2 == 0) {
                    factors = k.first == 2 ? "pi" : "pi^" + std::to_string(k.first / 2);
                } else {
                    factors = "pi^(" + std::to_string(k.first) + "/2)";
                }
            }
            if (k.second != 1) {
                if (!factors.empty()) factors += '*';
                factors += "sqrt(" + k.second.get_str() + ")";
            }
            if (factors.empty()) {
                out += to_string(mag);
            } else {
                out += mag == 1 ? factors : to_string(mag) + "*" + factors;
            }
        }
        return out;
    }

private:
    std::map<Key, Rational> terms_;
};

}  // namespace oddsym

#pragma once

/**
 * @file chart.hpp
 * @brief Darboux charts of linear odd symplectic spaces and their products.
 *
 * Variables are laid out as [x_1..x_n, xi_1..xi_n]. Pair i carries a sign
 * eps_i so that the symplectic form is sum_i eps_i dx_i dxi_i; a barred
 * factor flips its signs. Delta = sum_i eps_i d/dx_i d/dxi_i.
 */

#include <string>
#include <utility>
#include <vector>

#include "oddsym/poisson.hpp"

namespace oddsym {

class DarbouxChart {
public:
    DarbouxChart() = default;

    DarbouxChart(std::vector<std::string> x_names, std::vector<std::string> xi_names, std::vector<int> signs = {})
        : signs_(std::move(signs)) {
        if (x_names.size() != xi_names.size()) throw StructuralError("Darboux chart: unequal even and odd counts");
        n_ = x_names.size();
        if (signs_.empty()) signs_.assign(n_, 1);
        if (signs_.size() != n_) throw StructuralError("Darboux chart: wrong number of signs");
        for (int s : signs_)
            if (s != 1 && s != -1) throw StructuralError("Darboux chart: signs must be +1 or -1");
        std::vector<Variable> vars;
        for (auto& n : x_names) vars.push_back(even_var(n));
        for (auto& n : xi_names) vars.push_back(odd_var(n));
        table_ = VariableTable::make(std::move(vars));
    }

    /// x, xi for n = 1; x1..xn, xi1..xin otherwise; `suffix` is appended.
    static DarbouxChart standard(std::size_t n, const std::string& suffix = "", int sign = 1) {
        std::vector<std::string> xs, xis;
        for (std::size_t i = 1; i <= n; ++i) {
            std::string k = n == 1 ? "" : std::to_string(i);
            xs.push_back("x" + k + suffix);
            xis.push_back("xi" + k + suffix);
        }
        return DarbouxChart(xs, xis, std::vector<int>(n, sign));
    }

    /// A x B (or Abar x B when `bar_first`). Names are primed on the right
    /// factor while they clash.
    static DarbouxChart product(const DarbouxChart& a, const DarbouxChart& b, bool bar_first) {
        std::vector<std::string> xs, xis;
        std::vector<int> signs;
        for (std::size_t i = 0; i < a.n_; ++i) {
            xs.push_back(a.x_name(i));
            xis.push_back(a.xi_name(i));
            signs.push_back(bar_first ? -a.signs_[i] : a.signs_[i]);
        }
        auto taken = [&](const std::string& s) {
            for (auto& t : xs)
                if (t == s) return true;
            for (auto& t : xis)
                if (t == s) return true;
            return false;
        };
        std::string prime;
        for (;;) {
            bool clash = false;
            for (std::size_t i = 0; i < b.n_; ++i)
                clash |= taken(b.x_name(i) + prime) || taken(b.xi_name(i) + prime);
            if (!clash) break;
            prime += "'";
        }
        for (std::size_t i = 0; i < b.n_; ++i) {
            xs.push_back(b.x_name(i) + prime);
            xis.push_back(b.xi_name(i) + prime);
            signs.push_back(b.signs_[i]);
        }
        return DarbouxChart(xs, xis, signs);
    }

    /// Pairs [begin, begin + count) as a chart of their own.
    DarbouxChart slice(std::size_t begin, std::size_t count) const {
        if (begin + count > n_) throw StructuralError("Darboux chart: slice out of range");
        std::vector<std::string> xs, xis;
        std::vector<int> signs;
        for (std::size_t i = begin; i < begin + count; ++i) {
            xs.push_back(x_name(i));
            xis.push_back(xi_name(i));
            signs.push_back(signs_[i]);
        }
        return DarbouxChart(xs, xis, signs);
    }

    /// Same variables with all signs flipped.
    DarbouxChart bar() const {
        DarbouxChart c = *this;
        for (auto& s : c.signs_) s = -s;
        return c;
    }

    std::size_t pairs() const { return n_; }
    const TablePtr& table() const { return table_; }
    std::size_t x(std::size_t i) const { return i; }
    std::size_t xi(std::size_t i) const { return n_ + i; }
    int sign(std::size_t i) const { return signs_[i]; }
    const std::vector<int>& signs() const { return signs_; }
    const std::string& x_name(std::size_t i) const { return (*table_)[i].name; }
    const std::string& xi_name(std::size_t i) const { return (*table_)[n_ + i].name; }

    std::vector<std::size_t> xs() const {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < n_; ++i) v.push_back(i);
        return v;
    }
    std::vector<std::size_t> xis() const {
        std::vector<std::size_t> v;
        for (std::size_t i = 0; i < n_; ++i) v.push_back(n_ + i);
        return v;
    }

    /// Odd Poisson structure with {x_i, xi_i} = eps_i.
    OddPoissonStructure poisson() const {
        CotangentChart ch(table_);
        std::vector<std::pair<std::size_t, std::size_t>> p;
        for (std::size_t i = 0; i < n_; ++i) p.emplace_back(i, n_ + i);
        return OddPoissonStructure::darboux(ch, p, signs_);
    }

    bool operator==(const DarbouxChart& o) const { return same_table(table_, o.table_) && signs_ == o.signs_; }

private:
    std::size_t n_ = 0;
    std::vector<int> signs_;
    TablePtr table_;
};

/// Delta on polynomial coefficients.
inline SuperPolynomial bv_delta(const DarbouxChart& chart, const SuperPolynomial& s) {
    require_same_table(s.table(), chart.table(), "BV operator");
    SuperPolynomial r(chart.table());
    for (std::size_t i = 0; i < chart.pairs(); ++i) {
        auto t = poly_deriv(chart.x(i), poly_deriv(chart.xi(i), s));
        if (chart.sign(i) > 0)
            r += t;
        else
            r -= t;
    }
    return r;
}

}  // namespace oddsym

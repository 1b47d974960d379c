#pragma once

/**
 * @file io.hpp
 * @brief Definition files and the expression language.
 *
 * A definition file is sectioned plain text:
 *
 *   [variables]      name: even|odd[, degree]
 *   [poisson]        {zi, zj} = <polynomial>
 *   [lie]            c[i, j]^k = <rational>      (i, j, k: 1-based or names)
 *   [lagrangian]     [name] even|odd: r1, r2, ...   basis rows
 *                    [name] form: <linear form>     defining forms
 *                    [name] orientation: +1|-1
 *                    split: n1, n2, n3              pair counts for compose
 *   [expression]     <expression>, may span lines
 *
 * `#` and `;` start comments. Expressions use rationals, + - * / ^,
 * juxtaposition as a product, d(expr), delta(l), delta'(l), delta^(k)(l) and
 * exp(-q). Syntax errors and references to undeclared names raise ParseError
 * carrying line and column.
 */

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/bv/lagrangian.hpp"
#include "oddsym/deformed.hpp"

namespace oddsym {

// ---- expressions -----------------------------------------------------------

struct Expr {
    enum class Kind { Number, Symbol, Sum, Product, Negate, Quotient, Power, Differential, Delta, Exp };
    Kind kind = Kind::Number;
    Rational value;
    std::string name;
    unsigned order = 0;  // exponent for Power, derivative order for Delta
    std::vector<Expr> args;
    std::size_t line = 0, column = 0;
};

namespace detail {

inline std::string where(std::size_t line, std::size_t column) {
    std::string s;
    if (line) s = "line " + std::to_string(line) + ", ";
    return s + "column " + std::to_string(column);
}

[[noreturn]] inline void fail_at(const Expr& e, const std::string& msg) {
    throw ParseError(where(e.line, e.column) + ": " + msg);
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class ExprParser {
public:
    ExprParser(const std::string& text, std::size_t line, std::size_t column0)
        : s_(text), line_(line), col0_(column0) {}

    Expr parse() {
        skip();
        if (pos_ == s_.size()) fail("empty expression");
        Expr e = sum();
        skip();
        if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where(line_, col0_ + pos_ + 1) + ": " + msg); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    Expr node(Expr::Kind k, std::size_t at) const {
        Expr e;
        e.kind = k;
        e.line = line_;
        e.column = col0_ + at + 1;
        return e;
    }

    Expr sum() {
        skip();
        std::size_t at = pos_;
        Expr acc = product();
        for (;;) {
            skip();
            if (pos_ == s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) return acc;
            bool minus = s_[pos_++] == '-';
            skip();
            std::size_t at2 = pos_;
            Expr rhs = product();
            if (minus) {
                Expr n = node(Expr::Kind::Negate, at2);
                n.args.push_back(std::move(rhs));
                rhs = std::move(n);
            }
            if (acc.kind != Expr::Kind::Sum) {
                Expr s = node(Expr::Kind::Sum, at);
                s.args.push_back(std::move(acc));
                acc = std::move(s);
            }
            acc.args.push_back(std::move(rhs));
        }
    }

    bool starts_factor() {
        skip();
        if (pos_ == s_.size()) return false;
        char c = s_[pos_];
        return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '(';
    }

    Expr product() {
        skip();
        std::size_t at = pos_;
        Expr acc = unary();
        for (;;) {
            skip();
            bool quotient = false;
            if (eat('*')) {
            } else if (eat('/')) {
                quotient = true;
            } else if (!starts_factor()) {
                return acc;
            }
            Expr rhs = unary();
            if (quotient) {
                Expr q = node(Expr::Kind::Quotient, at);
                q.args.push_back(std::move(acc));
                q.args.push_back(std::move(rhs));
                acc = std::move(q);
                continue;
            }
            if (acc.kind != Expr::Kind::Product) {
                Expr p = node(Expr::Kind::Product, at);
                p.args.push_back(std::move(acc));
                acc = std::move(p);
            }
            acc.args.push_back(std::move(rhs));
        }
    }

    Expr unary() {
        skip();
        std::size_t at = pos_;
        if (eat('-')) {
            Expr n = node(Expr::Kind::Negate, at);
            n.args.push_back(unary());
            return n;
        }
        if (eat('+')) return unary();
        return power();
    }

    unsigned integer() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected a nonnegative integer");
        if (pos_ - b > 4) fail("exponent too large");
        return static_cast<unsigned>(std::stoul(s_.substr(b, pos_ - b)));
    }

    Expr power() {
        skip();
        std::size_t at = pos_;
        Expr base = primary();
        if (!eat('^')) return base;
        Expr p = node(Expr::Kind::Power, at);
        if (eat('(')) {
            p.order = integer();
            expect(')');
        } else {
            p.order = integer();
        }
        p.args.push_back(std::move(base));
        return p;
    }

    Expr call_argument() {
        expect('(');
        Expr a = sum();
        expect(')');
        return a;
    }

    Expr primary() {
        skip();
        if (pos_ == s_.size()) fail("unexpected end of expression");
        std::size_t at = pos_;
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Expr e = node(Expr::Kind::Number, at);
            e.value = Rational(mpz_class(s_.substr(at, pos_ - at)));
            return e;
        }
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            expect(')');
            return e;
        }
        if (!ident_start(c)) fail(std::string("unexpected '") + c + "'");
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        std::string id = s_.substr(at, pos_ - at);
        skip();
        bool call = pos_ < s_.size() && s_[pos_] == '(';
        if (id == "d" && call) {
            Expr e = node(Expr::Kind::Differential, at);
            e.args.push_back(call_argument());
            return e;
        }
        if (id == "exp" && call) {
            Expr e = node(Expr::Kind::Exp, at);
            e.args.push_back(call_argument());
            return e;
        }
        if (id.rfind("delta", 0) == 0 && id.find_first_not_of('\'', 5) == std::string::npos) {
            Expr e = node(Expr::Kind::Delta, at);
            e.order = static_cast<unsigned>(id.size() - 5);
            if (e.order == 0 && pos_ < s_.size() && s_[pos_] == '^') {
                ++pos_;
                expect('(');
                e.order = integer();
                expect(')');
            }
            skip();
            if (pos_ == s_.size() || s_[pos_] != '(') fail("delta needs an argument");
            e.args.push_back(call_argument());
            return e;
        }
        Expr e = node(Expr::Kind::Symbol, at);
        e.name = id;
        return e;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_, col0_;
};

}  // namespace detail

/// Parses `text`; `line` and `column` locate it in an enclosing file (line 0: none).
inline Expr parse_expression(const std::string& text, std::size_t line = 0, std::size_t column = 0) {
    return detail::ExprParser(text, line, column).parse();
}

/// Evaluates e with the value type and leaf rules supplied by `sem`.
template <class Semantics>
typename Semantics::Value evaluate(const Expr& e, const Semantics& sem);

/// Constant rational expressions (quotients, powers, signs).
inline Rational constant_value(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return e.value;
        case Expr::Kind::Negate:
            return -constant_value(e.args[0]);
        case Expr::Kind::Sum: {
            Rational s = 0;
            for (const auto& a : e.args) s += constant_value(a);
            return s;
        }
        case Expr::Kind::Product: {
            Rational s = 1;
            for (const auto& a : e.args) s *= constant_value(a);
            return s;
        }
        case Expr::Kind::Quotient: {
            Rational den = constant_value(e.args[1]);
            if (sgn(den) == 0) detail::fail_at(e.args[1], "division by zero");
            return constant_value(e.args[0]) / den;
        }
        case Expr::Kind::Power: {
            Rational b = constant_value(e.args[0]), r = 1;
            for (unsigned k = 0; k < e.order; ++k) r *= b;
            return r;
        }
        default:
            break;
    }
    detail::fail_at(e, "expected a rational constant");
}

namespace detail {

template <class Semantics>
typename Semantics::Value evaluate_node(const Expr& e, const Semantics& sem) {
    using V = typename Semantics::Value;
    switch (e.kind) {
        case Expr::Kind::Number:
            return sem.constant(e.value);
        case Expr::Kind::Symbol:
            return sem.symbol(e);
        case Expr::Kind::Negate:
            return sem.scale(evaluate(e.args[0], sem), Rational(-1));
        case Expr::Kind::Sum: {
            V acc = evaluate(e.args[0], sem);
            for (std::size_t i = 1; i < e.args.size(); ++i) acc = sem.add(acc, evaluate(e.args[i], sem));
            return acc;
        }
        case Expr::Kind::Product: {
            V acc = evaluate(e.args[0], sem);
            for (std::size_t i = 1; i < e.args.size(); ++i) acc = sem.mul(acc, evaluate(e.args[i], sem));
            return acc;
        }
        case Expr::Kind::Quotient: {
            Rational den = constant_value(e.args[1]);
            if (sgn(den) == 0) fail_at(e.args[1], "division by zero");
            return sem.scale(evaluate(e.args[0], sem), 1 / den);
        }
        case Expr::Kind::Power: {
            V base = evaluate(e.args[0], sem);
            V acc = sem.constant(Rational(1));
            for (unsigned k = 0; k < e.order; ++k) acc = sem.mul(acc, base);
            return acc;
        }
        case Expr::Kind::Differential:
            return sem.differential(e);
        case Expr::Kind::Delta:
            return sem.delta(e);
        case Expr::Kind::Exp:
            return sem.exponential(e);
    }
    fail_at(e, "unsupported expression");
}

}  // namespace detail

template <class Semantics>
typename Semantics::Value evaluate(const Expr& e, const Semantics& sem) {
    return detail::evaluate_node(e, sem);
}

/// Plain polynomials over a table.
struct PolynomialSemantics {
    using Value = SuperPolynomial;
    TablePtr table;

    Value constant(const Rational& c) const { return SuperPolynomial::constant(table, c); }
    Value symbol(const Expr& e) const {
        auto i = table->find(e.name);
        if (!i) detail::fail_at(e, "unknown variable '" + e.name + "'");
        return SuperPolynomial::variable(table, *i);
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value scale(const Value& a, const Rational& c) const { return a * c; }
    Value differential(const Expr& e) const { detail::fail_at(e, "d(...) is not allowed in a polynomial"); }
    Value delta(const Expr& e) const { detail::fail_at(e, "delta(...) is not allowed in a polynomial"); }
    Value exponential(const Expr& e) const { detail::fail_at(e, "exp(...) is not allowed in a polynomial"); }
};

inline SuperPolynomial evaluate_polynomial(const TablePtr& table, const Expr& e) {
    return evaluate(e, PolynomialSemantics{table});
}

/// Elements of Omega_pi: products are normal-form products, d is nf_d.
struct DeformedSemantics {
    using Value = DeformedElement;
    const DeformedAlgebra* alg;

    Value constant(const Rational& c) const { return alg->constant(c); }
    Value symbol(const Expr& e) const {
        auto i = alg->base()->find(e.name);
        if (!i) detail::fail_at(e, "unknown variable '" + e.name + "'");
        return alg->coordinate(*i);
    }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value mul(const Value& a, const Value& b) const { return alg->mul(a, b); }
    Value scale(const Value& a, const Rational& c) const { return a * c; }
    Value differential(const Expr& e) const { return alg->d(evaluate(e.args[0], *this)); }
    Value delta(const Expr& e) const { detail::fail_at(e, "delta(...) is not allowed in Omega_pi"); }
    Value exponential(const Expr& e) const { detail::fail_at(e, "exp(...) is not allowed in Omega_pi"); }
};

inline DeformedElement evaluate_deformed(const DeformedAlgebra& alg, const Expr& e) {
    return evaluate(e, DeformedSemantics{&alg});
}

/// Linear form sum_j l_j x_j as a row; anything else is a parse error.
inline QMatrix linear_form_row(const DarbouxChart& chart, const SuperPolynomial& p, const Expr& where) {
    QMatrix row(1, chart.pairs());
    for (const auto& [m, c] : p.terms()) {
        std::optional<std::size_t> hit;
        unsigned deg = 0;
        for (std::size_t v = 0; v < m.size(); ++v) {
            deg += m[v];
            if (m[v]) hit = v;
        }
        if (deg != 1 || *hit >= chart.pairs()) detail::fail_at(where, "expected a linear form in the even coordinates");
        row(0, *hit) = c;
    }
    return row;
}

/// Semidensities with delta factors and Gaussians on a Darboux chart.
struct DistributionSemantics {
    using Value = DistributionalSemidensity;
    const DarbouxChart* chart;

    Value poly(const SuperPolynomial& p) const { return DistributionalSemidensity::polynomial(*chart, p); }
    Value constant(const Rational& c) const { return poly(SuperPolynomial::constant(chart->table(), c)); }
    Value symbol(const Expr& e) const { return poly(PolynomialSemantics{chart->table()}.symbol(e)); }
    Value add(const Value& a, const Value& b) const { return a + b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value scale(const Value& a, const Rational& c) const { return a * c; }
    Value differential(const Expr& e) const { detail::fail_at(e, "d(...) is not allowed in a semidensity"); }
    Value delta(const Expr& e) const {
        auto l = evaluate_polynomial(chart->table(), e.args[0]);
        QMatrix row = linear_form_row(*chart, l, e.args[0]);
        if (row.is_zero()) detail::fail_at(e.args[0], "delta of the zero form");
        return DistributionalSemidensity::raw(
            *chart, RawDistributionTerm{row, DeltaIndex{e.order}, SuperPolynomial::constant(chart->table(), Rational(1)),
                                        QMatrix(chart->pairs(), chart->pairs())});
    }
    /// exp(-q) with q a quadratic form in the even coordinates.
    Value exponential(const Expr& e) const {
        auto q = evaluate_polynomial(chart->table(), e.args[0]) * Rational(-1);
        const std::size_t n = chart->pairs();
        QMatrix Q(n, n);
        for (const auto& [m, c] : q.terms()) {
            std::vector<std::size_t> idx;
            unsigned deg = 0;
            for (std::size_t v = 0; v < m.size(); ++v) {
                deg += m[v];
                for (unsigned k = 0; k < m[v]; ++k) idx.push_back(v);
            }
            if (deg != 2 || idx[1] >= n) detail::fail_at(e.args[0], "exp needs minus a quadratic form in the even coordinates");
            if (idx[0] == idx[1]) {
                Q(idx[0], idx[0]) = c;
            } else {
                Q(idx[0], idx[1]) = c / 2;
                Q(idx[1], idx[0]) = c / 2;
            }
        }
        return DistributionalSemidensity::gaussian(*chart, Q, SuperPolynomial::constant(chart->table(), Rational(1)));
    }
};

inline DistributionalSemidensity evaluate_distribution(const DarbouxChart& chart, const Expr& e) {
    return evaluate(e, DistributionSemantics{&chart});
}

// ---- definition files ------------------------------------------------------

struct BracketEntry {
    std::string left, right;
    Expr value;
    std::size_t line = 0;
};

struct LagrangianSpec {
    std::string name;
    std::vector<std::vector<Rational>> even_rows, odd_rows;
    std::vector<Expr> forms;
    int orientation = 1;
    std::size_t line = 0;
};

class DefinitionFile {
public:
    std::vector<Variable> variables;
    bool graded = false;
    std::vector<BracketEntry> brackets;
    std::optional<LieStructureConstants> lie;
    std::vector<LagrangianSpec> lagrangians;
    std::vector<std::size_t> split;
    std::optional<Expr> expression;

    /// The declared variables (for [lie] without [variables]: odd th1..thn).
    TablePtr base() const {
        if (variables.empty() && lie) {
            std::vector<Variable> vs;
            for (std::size_t i = 1; i <= lie->dim; ++i) vs.push_back(odd_var("th" + std::to_string(i)));
            return VariableTable::make(std::move(vs));
        }
        return VariableTable::make(variables, graded);
    }

    bool has_poisson() const { return lie.has_value() || !brackets.empty(); }

    /// From [lie] (Kirillov-Kostant) or [poisson] entries; zero if neither.
    OddPoissonStructure poisson() const {
        CotangentChart chart(base());
        if (lie) return OddPoissonStructure::kirillov_kostant(chart, *lie);
        std::map<std::pair<std::size_t, std::size_t>, SuperPolynomial> b;
        const auto& t = *chart.base();
        for (const auto& e : brackets) {
            auto i = index_of(t, e.left, e), j = index_of(t, e.right, e);
            auto v = evaluate_polynomial(chart.base(), e.value);
            auto [it, fresh] = b.emplace(std::make_pair(i, j), v);
            if (!fresh) throw ParseError("line " + std::to_string(e.line) + ": bracket {" + e.left + "," + e.right + "} given twice");
        }
        return OddPoissonStructure::from_brackets(chart, b);
    }

    /// Even variables paired with odd ones in declaration order; the pair
    /// signs come from constant brackets {x_i, xi_i} = +-1 (default +1).
    DarbouxChart darboux_chart() const {
        std::vector<std::string> xs, xis;
        for (const auto& v : variables) (v.parity == Parity::Even ? xs : xis).push_back(v.name);
        if (xs.size() != xis.size()) {
            throw DomainError("variables do not form Darboux pairs: " + std::to_string(xs.size()) + " even, " +
                              std::to_string(xis.size()) + " odd");
        }
        if (lie) throw DomainError("a [lie] section does not define a Darboux chart");
        std::vector<int> signs(xs.size(), 1);
        auto pos = [](const std::vector<std::string>& names, const std::string& s) -> std::optional<std::size_t> {
            for (std::size_t i = 0; i < names.size(); ++i)
                if (names[i] == s) return i;
            return std::nullopt;
        };
        auto t = base();
        for (const auto& e : brackets) {
            auto v = evaluate_polynomial(t, e.value);
            if (v.is_zero()) continue;
            auto a = pos(xs, e.left), b = pos(xis, e.right);
            if (!a || !b || *a != *b || !v.is_constant() || (v.constant_term() != 1 && v.constant_term() != -1)) {
                throw DomainError("line " + std::to_string(e.line) + ": bracket {" + e.left + "," + e.right +
                                  "} is not in Darboux form");
            }
            signs[*a] = v.constant_term() > 0 ? 1 : -1;
        }
        return DarbouxChart(xs, xis, signs);
    }

    /// Charts Y1bar x Y2 and Y2bar x Y3 of the two relations of a `split`.
    std::pair<DarbouxChart, DarbouxChart> relation_charts() const {
        if (split.size() != 3) throw ParseError("composition needs 'split: n1, n2, n3' in [lagrangian]");
        auto all = darboux_chart();
        if (split[0] + split[1] + split[2] != all.pairs()) {
            throw ParseError("split does not add up to the " + std::to_string(all.pairs()) + " declared pairs");
        }
        auto y1 = all.slice(0, split[0]), y2 = all.slice(split[0], split[1]), y3 = all.slice(split[0] + split[1], split[2]);
        return {DarbouxChart::product(y1, y2, true), DarbouxChart::product(y2, y3, true)};
    }

    const LagrangianSpec& lagrangian_spec(const std::string& name) const {
        for (const auto& l : lagrangians)
            if (l.name == name) return l;
        throw ParseError("no Lagrangian named '" + name + "'");
    }

    /// The named Lagrangian in `chart` (rows and forms refer to its pairs).
    LinearLagrangian lagrangian(const std::string& name, const DarbouxChart& chart) const {
        const auto& spec = lagrangian_spec(name);
        const std::size_t n = chart.pairs();
        auto columns = [&](const std::vector<std::vector<Rational>>& rows) {
            QMatrix m(n, rows.size());
            for (std::size_t c = 0; c < rows.size(); ++c) {
                if (rows[c].size() != n) {
                    throw ParseError("line " + std::to_string(spec.line) + ": Lagrangian '" + name + "' row has " +
                                     std::to_string(rows[c].size()) + " entries, expected " + std::to_string(n));
                }
                for (std::size_t i = 0; i < n; ++i) m(i, c) = rows[c][i];
            }
            return m;
        };
        std::size_t kinds = (spec.even_rows.empty() && spec.odd_rows.empty() ? 0 : 1) + (spec.forms.empty() ? 0 : 1);
        if (kinds > 1) throw ParseError("line " + std::to_string(spec.line) + ": Lagrangian '" + name + "' mixes rows and forms");
        LinearLagrangian L;
        if (!spec.forms.empty()) {
            QMatrix F(0, n);
            for (const auto& f : spec.forms)
                F = QMatrix::vstack(F, linear_form_row(chart, evaluate_polynomial(chart.table(), f), f));
            if (rank(F) != F.rows()) throw ContractError("Lagrangian '" + name + "': defining forms are dependent");
            L = LinearLagrangian::from_even_forms(chart, F);
        } else if (!spec.odd_rows.empty()) {
            L = LinearLagrangian::from_generators(chart, columns(spec.even_rows), columns(spec.odd_rows));
        } else {
            L = LinearLagrangian(chart, columns(spec.even_rows));
        }
        return spec.orientation < 0 ? L.reoriented() : L;
    }

private:
    static std::size_t index_of(const VariableTable& t, const std::string& name, const BracketEntry& e) {
        auto i = t.find(name);
        if (!i) throw ParseError("line " + std::to_string(e.line) + ": unknown variable '" + name + "'");
        return *i;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

class DefinitionParser {
public:
    DefinitionFile run(std::istream& in) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            std::string text = raw.substr(0, raw.find_first_of("#;"));
            std::string t = trim(text);
            if (t.empty()) continue;
            if (t.front() == '[' && t.back() == ']') {
                open_section(trim(t.substr(1, t.size() - 2)));
                continue;
            }
            col_ = text.find(t) + 1;
            if (section_.empty()) fail("content outside of a section");
            if (section_ == "variables") variable(t);
            else if (section_ == "poisson") bracket(t);
            else if (section_ == "lie") structure_constant(t);
            else if (section_ == "lagrangian") lagrangian(t);
            else if (section_ == "expression") {
                if (expr_text_.empty()) {
                    expr_line_ = line_;
                    expr_col_ = col_ - 1;
                } else {
                    expr_text_ += ' ';
                }
                expr_text_ += t;
            }
        }
        finish();
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("line " + std::to_string(line_) + ": " + msg); }

    void open_section(const std::string& name) {
        static const char* known[] = {"variables", "poisson", "lie", "lagrangian", "expression"};
        bool ok = false;
        for (auto k : known) ok |= name == k;
        if (!ok) fail("unknown section [" + name + "]");
        for (const auto& s : seen_)
            if (s == name) fail("section [" + name + "] appears twice");
        seen_.push_back(name);
        section_ = name;
    }

    Expr expr_at(const std::string& t, const std::string& piece) const {
        auto off = t.find(piece);
        return parse_expression(piece, line_, col_ - 1 + (off == std::string::npos ? 0 : off));
    }

    void variable(const std::string& t) {
        auto colon = t.find(':');
        if (colon == std::string::npos) fail("expected 'name: parity[, degree]'");
        std::string name = trim(t.substr(0, colon));
        if (!is_identifier(name)) fail("invalid variable name '" + name + "'");
        auto parts = split_on(t.substr(colon + 1), ',');
        if (parts.size() > 2) fail("too many fields for variable '" + name + "'");
        Variable v;
        v.name = name;
        if (parts[0] == "even") v.parity = Parity::Even;
        else if (parts[0] == "odd") v.parity = Parity::Odd;
        else fail("parity must be 'even' or 'odd', got '" + parts[0] + "'");
        v.degree = v.parity == Parity::Odd ? 1 : 0;
        if (parts.size() == 2) {
            try {
                std::size_t used = 0;
                v.degree = std::stoi(parts[1], &used);
                if (used != parts[1].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail("degree must be an integer, got '" + parts[1] + "'");
            }
            if (parity_of(v.degree) != v.parity) fail("degree of '" + name + "' does not match its parity");
            ++degrees_;
        }
        for (const auto& w : out_.variables)
            if (w.name == name) fail("variable '" + name + "' declared twice");
        out_.variables.push_back(v);
    }

    void bracket(const std::string& t) {
        auto close = t.find('}');
        auto eq = t.find('=', close == std::string::npos ? 0 : close);
        if (t.front() != '{' || close == std::string::npos || eq == std::string::npos) fail("expected '{a,b} = polynomial'");
        auto names = split_on(t.substr(1, close - 1), ',');
        if (names.size() != 2 || !is_identifier(names[0]) || !is_identifier(names[1])) fail("expected two variable names in braces");
        if (trim(t.substr(close + 1, eq - close - 1)) != "") fail("expected '=' after the bracket");
        std::string rhs = trim(t.substr(eq + 1));
        out_.brackets.push_back(BracketEntry{names[0], names[1], expr_at(t, rhs), line_});
    }

    void structure_constant(const std::string& t) {
        // c[i,j]^k = value
        auto open = t.find('['), close = t.find(']'), caret = t.find('^'), eq = t.find('=');
        if (t.rfind("c", 0) != 0 || trim(t.substr(1, open - 1)) != "" || open == std::string::npos ||
            close == std::string::npos || caret == std::string::npos || eq == std::string::npos || !(open < close && close < caret && caret < eq)) {
            fail("expected 'c[i,j]^k = rational'");
        }
        auto ij = split_on(t.substr(open + 1, close - open - 1), ',');
        if (ij.size() != 2) fail("expected two lower indices");
        lie_entries_.push_back({ij[0], ij[1], trim(t.substr(caret + 1, eq - caret - 1)),
                                constant_value(expr_at(t, trim(t.substr(eq + 1)))), line_});
    }

    void lagrangian(const std::string& t) {
        auto colon = t.find(':');
        if (colon == std::string::npos) fail("expected '[name] kind: values'");
        std::istringstream head(t.substr(0, colon));
        std::vector<std::string> words;
        for (std::string w; head >> w;) words.push_back(w);
        if (words.empty() || words.size() > 2) fail("expected '[name] kind: values'");
        std::string key = words.back(), name = words.size() == 2 ? words[0] : "L";
        std::string rest = trim(t.substr(colon + 1));
        if (key == "split") {
            if (words.size() != 1) fail("split takes no name");
            if (!out_.split.empty()) fail("split given twice");
            for (const auto& p : split_on(rest, ',')) {
                Rational v = constant_value(expr_at(t, p));
                if (v.get_den() != 1 || sgn(v) < 0) fail("split entries must be nonnegative integers");
                out_.split.push_back(v.get_num().get_ui());
            }
            if (out_.split.size() != 3) fail("split needs three pair counts");
            return;
        }
        if (!is_identifier(name)) fail("invalid Lagrangian name '" + name + "'");
        LagrangianSpec* spec = nullptr;
        for (auto& l : out_.lagrangians)
            if (l.name == name) spec = &l;
        if (!spec) {
            out_.lagrangians.push_back(LagrangianSpec{name, {}, {}, {}, 1, line_});
            spec = &out_.lagrangians.back();
        }
        if (key == "even" || key == "odd") {
            std::vector<Rational> row;
            if (rest.empty()) fail("empty row");
            for (const auto& p : split_on(rest, ',')) row.push_back(constant_value(expr_at(t, p)));
            (key == "even" ? spec->even_rows : spec->odd_rows).push_back(std::move(row));
        } else if (key == "form") {
            spec->forms.push_back(expr_at(t, rest));
        } else if (key == "orientation") {
            Rational v = constant_value(expr_at(t, rest));
            if (v != 1 && v != -1) fail("orientation must be +1 or -1");
            spec->orientation = v > 0 ? 1 : -1;
        } else {
            fail("unknown Lagrangian entry '" + key + "'");
        }
    }

    std::size_t lie_index(const std::string& s) const {
        for (std::size_t i = 0; i < out_.variables.size(); ++i)
            if (out_.variables[i].name == s) return i;
        try {
            std::size_t used = 0;
            long v = std::stol(s, &used);
            if (used == s.size() && v >= 1) return static_cast<std::size_t>(v - 1);
        } catch (const std::exception&) {
        }
        throw ParseError("line " + std::to_string(current_entry_line_) + ": bad structure-constant index '" + s + "'");
    }

    void finish() {
        if (degrees_ != 0 && degrees_ != out_.variables.size()) {
            throw ParseError("either every variable declares a degree or none does");
        }
        out_.graded = degrees_ != 0 && !out_.variables.empty();
        auto seen = [&](const char* s) { return std::find(seen_.begin(), seen_.end(), s) != seen_.end(); };
        if (seen("lie") && seen("poisson")) throw ParseError("[lie] and [poisson] are mutually exclusive");
        if (seen("lie")) {
            std::vector<std::array<std::size_t, 3>> idx;
            std::size_t dim = out_.variables.size();
            for (const auto& e : lie_entries_) {
                current_entry_line_ = e.line;
                std::array<std::size_t, 3> a{lie_index(e.i), lie_index(e.j), lie_index(e.k)};
                for (auto v : a) dim = std::max(dim, v + 1);
                idx.push_back(a);
            }
            if (!out_.variables.empty() && dim != out_.variables.size()) {
                throw ParseError("structure-constant index out of range for " + std::to_string(out_.variables.size()) + " variables");
            }
            LieStructureConstants c(dim);
            std::map<std::array<std::size_t, 3>, Rational> given;
            for (std::size_t e = 0; e < idx.size(); ++e) {
                auto [i, j, k] = idx[e];
                const Rational& v = lie_entries_[e].value;
                if (i == j) {
                    if (sgn(v) != 0) throw ParseError("line " + std::to_string(lie_entries_[e].line) + ": c[i,i]^k must vanish");
                    continue;
                }
                auto key = i < j ? std::array<std::size_t, 3>{i, j, k} : std::array<std::size_t, 3>{j, i, k};
                Rational canon = i < j ? v : Rational(-v);
                auto [it, fresh] = given.emplace(key, canon);
                if (!fresh && it->second != canon) {
                    throw ParseError("line " + std::to_string(lie_entries_[e].line) + ": conflicts with an earlier entry");
                }
                c.set(key[0], key[1], key[2], canon);
            }
            out_.lie = c;
        }
        if (!expr_text_.empty()) out_.expression = parse_expression(expr_text_, expr_line_, expr_col_);
        try {
            (void)out_.base();
        } catch (const StructuralError& e) {
            throw ParseError(e.what());
        }
    }

    struct LieEntry {
        std::string i, j, k;
        Rational value;
        std::size_t line;
    };

    DefinitionFile out_;
    std::vector<std::string> seen_;
    std::string section_;
    std::size_t line_ = 0, col_ = 1, degrees_ = 0;
    std::vector<LieEntry> lie_entries_;
    std::size_t current_entry_line_ = 0;
    std::string expr_text_;
    std::size_t expr_line_ = 0, expr_col_ = 0;
};

}  // namespace detail

inline DefinitionFile parse_definition(std::istream& in) { return detail::DefinitionParser().run(in); }

inline DefinitionFile parse_definition_text(const std::string& text) {
    std::istringstream in(text);
    return parse_definition(in);
}

inline DefinitionFile read_definition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_definition(in);
}

}  // namespace oddsym

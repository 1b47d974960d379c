#pragma once

/**
 * @file semidensity.hpp
 * @brief Polynomial semidensities on a Darboux chart: differential operators,
 *        formal adjoints, Lie derivatives and coordinate changes.
 *
 * A semidensity phi * sqrt(D) is stored through its coefficient phi; the
 * chart's reference semidensity is implicit. Differential operators are
 * normal-ordered (coefficients left) polynomials over the doubled table
 * [z..., D(z)...], where D(z) has the parity of z. Derivatives are left
 * derivatives and supercommute, so the D-part is itself a free
 * graded-commutative monomial.
 */

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/bv/chart.hpp"
#include "oddsym/linalg.hpp"
#include "oddsym/poisson.hpp"

namespace oddsym {

struct Semidensity {
    DarbouxChart chart;
    SuperPolynomial coefficient;
};

class DiffOperator {
public:
    explicit DiffOperator(TablePtr base) : base_(std::move(base)) {
        n_ = base_->size();
        std::vector<Variable> vars = base_->variables();
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& z = (*base_)[i];
            vars.push_back(Variable{"D(" + z.name + ")", z.parity, -z.degree, Role::Auxiliary});
        }
        doubled_ = VariableTable::make(std::move(vars), base_->graded());
        body_ = SuperPolynomial(doubled_);
    }

    static DiffOperator multiplication(const SuperPolynomial& c) {
        DiffOperator op(c.table());
        for (const auto& [m, k] : c.terms()) {
            Monomial out(op.doubled_->size());
            for (std::size_t i = 0; i < op.n_; ++i) out[i] = m[i];
            op.body_.add_term(out, k);
        }
        return op;
    }

    static DiffOperator partial(TablePtr base, std::size_t i) {
        DiffOperator op(std::move(base));
        op.body_ = SuperPolynomial::variable(op.doubled_, op.n_ + i);
        return op;
    }

    /// sum_i eps_i D(x_i) D(xi_i)
    static DiffOperator bv_laplacian(const DarbouxChart& chart) {
        DiffOperator op(chart.table());
        for (std::size_t i = 0; i < chart.pairs(); ++i) {
            auto t = SuperPolynomial::variable(op.doubled_, op.n_ + chart.x(i)) *
                     SuperPolynomial::variable(op.doubled_, op.n_ + chart.xi(i));
            op.body_ += t * Rational(chart.sign(i));
        }
        return op;
    }

    /// Raw normal-ordered data; `body` must live over doubled().
    static DiffOperator from_body(TablePtr base, const SuperPolynomial& body) {
        DiffOperator op(std::move(base));
        require_same_table(body.table(), op.doubled_, "differential operator body");
        op.body_ = body;
        return op;
    }

    const TablePtr& base() const { return base_; }
    const TablePtr& doubled() const { return doubled_; }
    const SuperPolynomial& body() const { return body_; }
    std::size_t order() const {
        unsigned k = 0;
        for (const auto& [m, c] : body_.terms()) k = std::max(k, derivative_count(m));
        return k;
    }

    std::optional<Parity> parity() const { return body_.parity(); }

    /// Applies the operator to a coefficient function.
    SuperPolynomial apply(const SuperPolynomial& s) const {
        require_same_table(s.table(), base_, "differential operator argument");
        SuperPolynomial r(base_);
        for (const auto& [m, c] : body_.terms()) {
            SuperPolynomial t = s;
            for (std::size_t i = n_; i-- > 0 && !t.is_zero();)
                for (unsigned k = 0; k < m[n_ + i]; ++k) t = poly_deriv(i, t);
            Monomial coef(n_);
            for (std::size_t i = 0; i < n_; ++i) coef[i] = m[i];
            r += SuperPolynomial::monomial(base_, coef, c) * t;
        }
        return r;
    }

    friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) {
        a.body_ += b.body_;
        return a;
    }
    friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) {
        a.body_ -= b.body_;
        return a;
    }
    friend DiffOperator operator*(DiffOperator a, const Rational& s) {
        a.body_ *= s;
        return a;
    }

    /// Composition a o b, normal ordered.
    friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
        require_same_table(a.base_, b.base_, "operator composition");
        DiffOperator r(a.base_);
        for (const auto& [mb, cb] : b.body_.terms()) {
            auto [gb, eb] = a.split(mb);
            for (const auto& [ma, ca] : a.body_.terms()) {
                auto [ga, ea] = a.split(ma);
                auto mid = a.word_times_function(ea, SuperPolynomial::monomial(a.doubled_, gb));
                r.body_ += SuperPolynomial::monomial(a.doubled_, ga, ca * cb) * mid * SuperPolynomial::monomial(a.doubled_, eb);
            }
        }
        return r;
    }

    bool operator==(const DiffOperator& o) const { return same_table(base_, o.base_) && body_ == o.body_; }

    /// Formal adjoint for the pairing int alpha beta, with the convention
    /// (P alpha, beta) = (-1)^{|P||alpha|} (alpha, P* beta):
    /// multiplication operators are self-adjoint, every partial derivative
    /// maps to minus itself, and (PQ)* = (-1)^{|P||Q|} Q* P*.
    DiffOperator adjoint() const {
        DiffOperator r(base_);
        for (const auto& [m, c] : body_.terms()) {
            auto [g, e] = split(m);
            Parity pg = monomial_parity(g, *doubled_), pe = monomial_parity(e, *doubled_);
            int sign = koszul(pg, pe) * ((derivative_count(m) & 1) ? -1 : 1);
            auto t = word_times_function(e, SuperPolynomial::monomial(doubled_, g));
            r.body_ += t * Rational(sign * c);
        }
        return r;
    }

    std::string str() const { return to_string(body_); }

private:
    unsigned derivative_count(const Monomial& m) const {
        unsigned k = 0;
        for (std::size_t i = 0; i < n_; ++i) k += m[n_ + i];
        return k;
    }

    std::pair<Monomial, Monomial> split(const Monomial& m) const {
        Monomial g(doubled_->size()), e(doubled_->size());
        for (std::size_t i = 0; i < n_; ++i) {
            g[i] = m[i];
            e[n_ + i] = m[n_ + i];
        }
        return {g, e};
    }

    /// E h normal ordered, for a D-word E and a function h over the doubled table.
    SuperPolynomial word_times_function(const Monomial& e, const SuperPolynomial& h) const {
        std::optional<std::size_t> last;
        for (std::size_t i = n_; i-- > 0;)
            if (e[n_ + i]) {
                last = i;
                break;
            }
        if (!last || h.is_zero()) return SuperPolynomial::monomial(doubled_, e) * h;
        const std::size_t v = *last;
        Monomial rest = e;
        --rest[n_ + v];
        // D_v h = (d_v h) + (-1)^{|v||h|} h D_v, termwise in h
        SuperPolynomial r(doubled_);
        auto dv = SuperPolynomial::variable(doubled_, n_ + v);
        r += word_times_function(rest, poly_deriv(v, h));
        for (Parity p : {Parity::Even, Parity::Odd}) {
            auto hp = h.part(p);
            if (hp.is_zero()) continue;
            r += word_times_function(rest, hp) * dv * Rational(koszul(base_->parity(v), p));
        }
        return r;
    }

    TablePtr base_, doubled_;
    std::size_t n_ = 0;
    SuperPolynomial body_;
};

inline DiffOperator formal_adjoint(const DiffOperator& op) { return op.adjoint(); }

/// Graded divergence sum_a (-1)^{|a|(|X|+1)} dL_a X^a.
inline SuperPolynomial semidensity_divergence(const HomogeneousVectorField& X) {
    SuperPolynomial r(X.base);
    for (std::size_t a = 0; a < X.components.size(); ++a) {
        auto t = poly_deriv(a, X.components[a]);
        r += t * Rational(koszul(X.base->parity(a), X.parity + Parity::Odd));
    }
    return r;
}

/// L_X (phi sqrt D) = (X(phi) + 1/2 div(X) phi) sqrt D for X = X_f, taken
/// with an extra (-1)^{|f|} so that L_{X_f} = [Delta, f] with the bracket
/// convention of odd_bracket (X_f(g) = {f, g}).
inline SuperPolynomial lie_derivative_semidensity(const DarbouxChart& chart, const SuperPolynomial& f,
                                                  const SuperPolynomial& s) {
    require_same_table(f.table(), chart.table(), "Lie derivative");
    auto pi = chart.poisson();
    SuperPolynomial r(chart.table());
    for (Parity p : {Parity::Even, Parity::Odd}) {
        auto fp = f.part(p);
        if (fp.is_zero()) continue;
        auto X = hamiltonian_field(pi, fp);
        auto l = X.apply(s) + semidensity_divergence(X) * s * Rational(1, 2);
        r += p == Parity::Odd ? -l : l;
    }
    return r;
}

// ---- polynomial matrices ------------------------------------------------

namespace detail {

using PolyMatrix = std::vector<std::vector<SuperPolynomial>>;

/// Determinant of a square matrix of even (mutually commuting) entries by
/// permutation expansion.
inline SuperPolynomial poly_det(const PolyMatrix& m, const TablePtr& t) {
    const std::size_t n = m.size();
    if (n == 0) return SuperPolynomial::constant(t, 1);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SuperPolynomial r(t);
    do {
        int inv = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        SuperPolynomial term = SuperPolynomial::constant(t, (inv & 1) ? -1 : 1);
        for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term = term * m[i][perm[i]];
        r += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return r;
}

inline PolyMatrix poly_minor(const PolyMatrix& m, std::size_t row, std::size_t col) {
    PolyMatrix r;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == row) continue;
        std::vector<SuperPolynomial> line;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (j != col) line.push_back(m[i][j]);
        r.push_back(std::move(line));
    }
    return r;
}

/// Inverse of an element c + N with c a nonzero constant and N nilpotent.
inline SuperPolynomial invert_unit(const SuperPolynomial& u) {
    const auto& t = *u.table();
    Rational c = u.constant_term();
    SuperPolynomial nil = u - SuperPolynomial::constant(u.table(), c);
    for (const auto& [m, k] : nil.terms()) {
        bool has_odd = false;
        for (auto i : t.odd_indices()) has_odd |= m[i] != 0;
        if (!has_odd) throw SingularityError("element is not invertible over the polynomial ring");
    }
    if (sgn(c) == 0) throw SingularityError("element with zero body is not invertible");
    SuperPolynomial x = nil * Rational(1 / c);
    SuperPolynomial sum = SuperPolynomial::constant(u.table(), 1), power = SuperPolynomial::constant(u.table(), 1);
    for (;;) {
        power = power * x * Rational(-1);
        if (power.is_zero()) break;
        sum += power;
    }
    return sum * Rational(1 / c);
}

/// Exact square root of c + N (c a positive square rational, N nilpotent),
/// with positive body.
inline SuperPolynomial sqrt_unit(const SuperPolynomial& u) {
    const auto& t = *u.table();
    Rational c = u.constant_term();
    SuperPolynomial nil = u - SuperPolynomial::constant(u.table(), c);
    for (const auto& [m, k] : nil.terms()) {
        bool has_odd = false;
        for (auto i : t.odd_indices()) has_odd |= m[i] != 0;
        if (!has_odd) throw UnsupportedMapError("Berezinian has a non-constant body; no polynomial square root");
    }
    if (sgn(c) <= 0) throw UnsupportedMapError("Berezinian body is not positive");
    Integer num = c.get_num(), den = c.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
        throw UnsupportedMapError("Berezinian body " + c.get_str() + " is not a rational square");
    }
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational root(rn, rd);
    // sqrt(1 + x) = sum binom(1/2, k) x^k
    SuperPolynomial x = nil * Rational(1 / c);
    SuperPolynomial sum = SuperPolynomial::constant(u.table(), 1), power = SuperPolynomial::constant(u.table(), 1);
    Rational binom = 1;
    for (unsigned k = 1;; ++k) {
        power = power * x;
        if (power.is_zero()) break;
        binom *= (Rational(1, 2) - Rational(k - 1)) / Rational(k);
        sum += power * binom;
    }
    return sum * root;
}

}  // namespace detail

/// Berezinian of the Jacobian J^a_b = dR Phi^a / dz^b of a map given by its
/// images; block formula det(A - B D^{-1} C) / det D.
inline SuperPolynomial berezinian(const DarbouxChart& chart, const Substitution& phi) {
    const auto& t = chart.table();
    require_same_table(phi.source(), t, "Berezinian");
    require_same_table(phi.target(), t, "Berezinian");
    const std::size_t n = chart.pairs();
    detail::PolyMatrix A(n), B(n), C(n), D(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            A[a].push_back(poly_right_deriv(chart.x(b), phi.image(chart.x(a))));
            B[a].push_back(poly_right_deriv(chart.xi(b), phi.image(chart.x(a))));
            C[a].push_back(poly_right_deriv(chart.x(b), phi.image(chart.xi(a))));
            D[a].push_back(poly_right_deriv(chart.xi(b), phi.image(chart.xi(a))));
        }
    SuperPolynomial detD = detail::poly_det(D, t);
    SuperPolynomial invDetD = detail::invert_unit(detD);
    // adj(D)_{ij} = (-1)^{i+j} det minor(D, j, i)
    detail::PolyMatrix Dinv(n, std::vector<SuperPolynomial>(n, SuperPolynomial(t)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto cof = n == 1 ? SuperPolynomial::constant(t, 1) : detail::poly_det(detail::poly_minor(D, j, i), t);
            Dinv[i][j] = cof * invDetD * Rational(((i + j) & 1) ? -1 : 1);
        }
    detail::PolyMatrix S = A;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            SuperPolynomial acc(t);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) acc += B[i][k] * Dinv[k][l] * C[l][j];
            S[i][j] -= acc;
        }
    return detail::poly_det(S, t) * invDetD;
}

/// Checks {Phi(u), Phi(v)} = Phi({u, v}) on all coordinate pairs.
inline void require_symplectomorphism(const DarbouxChart& chart, const Substitution& phi) {
    auto pi = chart.poisson();
    const auto& t = chart.table();
    for (std::size_t a = 0; a < t->size(); ++a)
        for (std::size_t b = 0; b < t->size(); ++b) {
            auto lhs = odd_bracket(pi, phi.image(a), phi.image(b));
            auto rhs = phi(odd_bracket(pi, SuperPolynomial::variable(t, a), SuperPolynomial::variable(t, b)));
            if (!(lhs == rhs)) {
                throw ContractError("map does not preserve the bracket {" + (*t)[a].name + "," + (*t)[b].name + "}");
            }
        }
}

/// exp(X_f) acting on the coordinates, for an odd f whose Hamiltonian field
/// is locally nilpotent on generators (cotangent lifts of shears, pure-xi
/// Hamiltonians).
inline Substitution hamiltonian_flow(const DarbouxChart& chart, const SuperPolynomial& f, unsigned max_steps = 32) {
    const auto& t = chart.table();
    auto fp = f.parity();
    if (!f.is_zero() && (!fp || *fp != Parity::Odd)) {
        throw ParityError("Hamiltonian flow needs an odd generating function");
    }
    auto X = hamiltonian_field(chart.poisson(), f);
    std::vector<SuperPolynomial> images;
    for (std::size_t a = 0; a < t->size(); ++a) {
        SuperPolynomial term = SuperPolynomial::variable(t, a), sum = term;
        unsigned k = 1;
        for (; k <= max_steps; ++k) {
            term = X.apply(term) * Rational(1, k);
            if (term.is_zero()) break;
            sum += term;
        }
        if (k > max_steps) throw UnsupportedMapError("Hamiltonian flow does not terminate on " + (*t)[a].name);
        images.push_back(std::move(sum));
    }
    return Substitution(t, t, std::move(images));
}

/// x -> A x, xi -> A^{-T} xi.
inline Substitution linear_block_map(const DarbouxChart& chart, const QMatrix& A) {
    const std::size_t n = chart.pairs();
    if (A.rows() != n || A.cols() != n) throw StructuralError("linear block map: size mismatch");
    QMatrix B = inverse(A).transpose();
    const auto& t = chart.table();
    std::vector<SuperPolynomial> images(t->size(), SuperPolynomial(t));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            images[chart.x(i)] += SuperPolynomial::variable(t, chart.x(j)) * A(i, j);
            images[chart.xi(i)] += SuperPolynomial::variable(t, chart.xi(j)) * B(i, j);
        }
    return Substitution(t, t, std::move(images));
}

/// Pullback of a semidensity: phi -> (phi o Phi) * sqrt(Ber J_Phi).
inline SuperPolynomial darboux_transform(const DarbouxChart& chart, const Substitution& phi, const SuperPolynomial& s) {
    require_same_table(s.table(), chart.table(), "Darboux transform");
    require_symplectomorphism(chart, phi);
    auto root = detail::sqrt_unit(berezinian(chart, phi));
    return phi(s) * root;
}

}  // namespace oddsym

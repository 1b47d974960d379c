#pragma once

/**
 * @file lagrangian.hpp
 * @brief Linear Lagrangian subspaces and relations, their delta semidensities,
 *        and composition of morphisms by integration over the middle factor.
 *
 * A linear Lagrangian L in a Darboux chart with n pairs splits as L0 + L1,
 * L0 a k-dimensional subspace of the x-directions and L1 its annihilator in
 * the xi-directions under <v, u> = sum_i eps_i v^i u_i. L is stored through an
 * ordered basis V of L0; the order fixes the orientation of delta_L.
 *
 * delta_L comes from an adapted frame: with W = [V | U] invertible and
 * A = W^{-1}, the linear symplectomorphism x = W y, xi = E W^{-T} E eta
 * (E = diag(eps)) maps L to {y_a = 0 (a > k), eta_a = 0 (a <= k)}, and
 *   delta_L = sigma |det A| prod_{a>k} delta((A x)_a) prod_{a<=k} eps_a lambda_{v_a}(xi),
 * lambda_v(xi) = sum_i eps_i v^i xi_i and sigma the orientation sign. The
 * result does not depend on U.
 */

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/bv/distribution.hpp"
#include "oddsym/random.hpp"

namespace oddsym {

class LinearLagrangian {
public:
    LinearLagrangian() = default;

    /// L0 spanned by the columns of `even_basis` (n x k, full column rank).
    LinearLagrangian(DarbouxChart chart, QMatrix even_basis, int orientation = 1)
        : chart_(std::move(chart)), basis_(std::move(even_basis)), sign_(orientation < 0 ? -1 : 1) {
        const std::size_t n = chart_.pairs();
        if (basis_.rows() != n && !(basis_.cols() == 0)) {
            throw StructuralError("Lagrangian: basis vectors have the wrong length");
        }
        if (basis_.cols() == 0) basis_ = QMatrix(n, 0);
        if (rank(basis_) != basis_.cols()) throw ContractError("Lagrangian: even basis is linearly dependent");
    }

    /// L0 = common kernel of the rows of `forms`.
    static LinearLagrangian from_even_forms(const DarbouxChart& chart, const QMatrix& forms) {
        if (forms.rows() == 0) return LinearLagrangian(chart, QMatrix::identity(chart.pairs()));
        if (forms.cols() != chart.pairs()) throw StructuralError("Lagrangian: defining form has the wrong length");
        return LinearLagrangian(chart, kernel(forms));
    }

    /// Even generators V and odd generators U (as xi-component columns);
    /// checks L = L^perp.
    static LinearLagrangian from_generators(const DarbouxChart& chart, const QMatrix& even, const QMatrix& odd) {
        const std::size_t n = chart.pairs();
        QMatrix V = even.cols() == 0 ? QMatrix(n, 0) : even;
        QMatrix U = odd.cols() == 0 ? QMatrix(n, 0) : odd;
        if (V.rows() != n || U.rows() != n) throw StructuralError("Lagrangian: generator has the wrong length");
        std::size_t rv = rank(V), ru = rank(U);
        for (std::size_t a = 0; a < V.cols(); ++a)
            for (std::size_t b = 0; b < U.cols(); ++b) {
                Rational s = 0;
                for (std::size_t i = 0; i < n; ++i) s += chart.sign(i) * V(i, a) * U(i, b);
                if (sgn(s) != 0) throw ContractError("Lagrangian: generators are not isotropic");
            }
        if (rv + ru != n) {
            throw ContractError("Lagrangian: dimensions " + std::to_string(rv) + "|" + std::to_string(ru) +
                                " are not maximal in " + std::to_string(n) + "|" + std::to_string(n));
        }
        auto e = rref(V.transpose());
        std::vector<std::size_t> keep;
        for (std::size_t r = 0; r < e.rank(); ++r) keep.push_back(r);
        return LinearLagrangian(chart, rv == V.cols() ? V : e.reduced.transpose());
    }

    /// Graph {(x, S x)} of x -> S x, xi -> S^{-T} xi in Ybar x Y.
    static LinearLagrangian graph(const DarbouxChart& product_chart, const QMatrix& S) {
        const std::size_t n = S.rows();
        if (S.cols() != n || product_chart.pairs() != 2 * n) throw StructuralError("graph: size mismatch");
        return LinearLagrangian(product_chart, QMatrix::vstack(QMatrix::identity(n), S));
    }

    const DarbouxChart& chart() const { return chart_; }
    const QMatrix& even_basis() const { return basis_; }
    /// Extra orientation sign; the orientation is sign * [basis].
    int orientation_sign() const { return sign_; }
    std::size_t even_dimension() const { return basis_.cols(); }

    /// Basis of L1 (xi-components).
    QMatrix odd_basis() const {
        const std::size_t n = chart_.pairs();
        if (basis_.cols() == 0) return QMatrix::identity(n);
        QMatrix VtE = basis_.transpose();
        for (std::size_t a = 0; a < VtE.rows(); ++a)
            for (std::size_t i = 0; i < n; ++i) VtE(a, i) *= chart_.sign(i);
        return kernel(VtE);
    }

    /// Rows spanning the even forms vanishing on L0.
    QMatrix even_forms() const {
        if (basis_.cols() == 0) return QMatrix::identity(chart_.pairs());
        return kernel(basis_.transpose()).transpose();
    }

    bool same_subspace(const LinearLagrangian& o) const {
        return chart_ == o.chart_ && basis_.cols() == o.basis_.cols() &&
               rank(QMatrix::hstack(basis_, o.basis_)) == basis_.cols();
    }

    /// +1 / -1 comparing the orientation with another basis of the same L0.
    int orientation_relative_to(const LinearLagrangian& o) const {
        if (!same_subspace(o)) throw DomainError("orientation: different subspaces");
        int s = sign_ * o.sign_;
        if (basis_.cols() == 0) return s;
        auto N = solve(o.basis_, basis_);  // basis = o.basis * N
        return sgn(det(*N)) > 0 ? s : -s;
    }

    LinearLagrangian reoriented() const { return LinearLagrangian(chart_, basis_, -sign_); }

    /// Checks L = L^perp by ranks and isotropy.
    bool is_lagrangian() const {
        const std::size_t n = chart_.pairs();
        QMatrix U = odd_basis();
        if (rank(basis_) + rank(U) != n) return false;
        for (std::size_t a = 0; a < basis_.cols(); ++a)
            for (std::size_t b = 0; b < U.cols(); ++b) {
                Rational s = 0;
                for (std::size_t i = 0; i < n; ++i) s += chart_.sign(i) * basis_(i, a) * U(i, b);
                if (sgn(s) != 0) return false;
            }
        return true;
    }

    /// Image under x -> S x, xi -> S^{-T} xi (basis transported).
    LinearLagrangian transformed(const QMatrix& S) const { return LinearLagrangian(chart_, S * basis_, sign_); }

    std::string str() const { return "span" + basis_.transpose().str(); }

private:
    DarbouxChart chart_;
    QMatrix basis_;
    int sign_ = 1;
};

enum class FrameCompletion { Pivot, Random };

/// delta_L from an adapted frame; `Random` draws both a complement and an
/// orientation-preserving change of basis of L0.
inline DistributionalSemidensity delta_L(const LinearLagrangian& L, FrameCompletion how = FrameCompletion::Pivot,
                                         std::uint64_t seed = 1) {
    const auto& ch = L.chart();
    const std::size_t n = ch.pairs(), k = L.even_dimension();
    QMatrix V = L.even_basis();
    QMatrix U(n, n - k);
    if (how == FrameCompletion::Pivot) {
        std::vector<bool> used(n, false);
        if (k > 0)
            for (auto p : rref(V.transpose()).pivots) used[p] = true;
        std::size_t c = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) U(i, c++) = 1;
    } else {
        Sampler rng(seed);
        if (k > 0) {
            QMatrix N = rng.invertible(k);
            if (sgn(det(N)) < 0)
                for (std::size_t i = 0; i < k; ++i) N(i, 0) = -N(i, 0);
            V = V * N;
        }
        for (;;) {
            U = rng.matrix(n, n - k, 3);
            if (sgn(det(QMatrix::hstack(V, U))) != 0) break;
        }
    }
    QMatrix W = QMatrix::hstack(V, U);
    QMatrix A = inverse(W);
    const auto& t = ch.table();
    SuperPolynomial odd = SuperPolynomial::constant(t, abs(det(A)) * L.orientation_sign());
    for (std::size_t a = 0; a < k; ++a) {
        SuperPolynomial lam(t);
        for (std::size_t i = 0; i < n; ++i)
            if (sgn(V(i, a)) != 0) lam += SuperPolynomial::variable(t, ch.xi(i)) * Rational(ch.sign(i) * ch.sign(a) * V(i, a));
        odd = odd * lam;
    }
    std::vector<std::size_t> rows;
    for (std::size_t a = k; a < n; ++a) rows.push_back(a);
    return DistributionalSemidensity::delta(ch, A.select_rows(rows), odd);
}

/// Chart of the composite Ybar1 x Y3 from charts of Ybar1 x Y2 and Ybar2 x Y3.
inline DarbouxChart composite_chart(const DarbouxChart& c1, const DarbouxChart& c2, std::size_t middle) {
    if (middle > c1.pairs() || middle > c2.pairs()) throw StructuralError("composite chart: middle factor too large");
    return DarbouxChart::product(c1.slice(0, c1.pairs() - middle), c2.slice(middle, c2.pairs() - middle), false);
}

namespace detail {
/// Product of the first k pair signs; matches the odd factors of delta_L.
inline int leading_signs(const DarbouxChart& c, std::size_t k) {
    int s = 1;
    for (std::size_t a = 0; a < k && a < c.pairs(); ++a) s *= c.sign(a);
    return s;
}
}  // namespace detail

/// Dimension-dependent part of the composite orientation, normalised so that
/// composing the delta semidensities reproduces the composite's one exactly.
inline int composite_sign(const DarbouxChart& c1, const DarbouxChart& c2, const DarbouxChart& c3, std::size_t n2,
                          std::size_t k1, std::size_t k2, std::size_t d) {
    int s = (n2 * (k2 + 1)) % 2 ? -1 : 1;
    return s * detail::leading_signs(c1, k1) * detail::leading_signs(c2, k2) * detail::leading_signs(c3, d);
}

/// Set-theoretic composite of L1 in Ybar1 x Y2 and L2 in Ybar2 x Y3 (the
/// middle factor has `middle` pairs). The composite basis is the projection
/// of a kernel basis K of [V1|Y2, -V2|Y2], oriented so that det[K | G] > 0
/// for any G with [V1|Y2, -V2|Y2] G = 1.
inline LinearLagrangian compose_relations(const LinearLagrangian& L1, const LinearLagrangian& L2, std::size_t middle) {
    const auto& c1 = L1.chart();
    const auto& c2 = L2.chart();
    const std::size_t n2 = middle;
    if (n2 > c1.pairs() || n2 > c2.pairs()) throw StructuralError("compose_relations: middle factor too large");
    const std::size_t n1 = c1.pairs() - n2, n3 = c2.pairs() - n2;
    for (std::size_t i = 0; i < n2; ++i)
        if (c1.sign(n1 + i) != -c2.sign(i)) {
            throw StructuralError("compose_relations: middle factors do not carry opposite forms");
        }
    auto rows = [](std::size_t b, std::size_t c) {
        std::vector<std::size_t> r(c);
        for (std::size_t i = 0; i < c; ++i) r[i] = b + i;
        return r;
    };
    const QMatrix& V1 = L1.even_basis();
    const QMatrix& V2 = L2.even_basis();
    const std::size_t k1 = V1.cols(), k2 = V2.cols();
    QMatrix M = QMatrix::hstack(V1.select_rows(rows(n1, n2)), Rational(-1) * V2.select_rows(rows(0, n2)));
    if (M.cols() == 0) M = QMatrix(n2, 0);
    std::size_t even_rank = n2 == 0 ? 0 : rank(M);
    if (even_rank != n2) {
        throw TransversalityError("relations are not transversal: even middle rank " + std::to_string(even_rank) +
                                  " < " + std::to_string(n2));
    }
    QMatrix U1 = L1.odd_basis(), U2 = L2.odd_basis();
    QMatrix Mo = QMatrix::hstack(U1.select_rows(rows(n1, n2)), Rational(-1) * U2.select_rows(rows(0, n2)));
    std::size_t odd_rank = n2 == 0 ? 0 : rank(Mo);
    if (odd_rank != n2) {
        throw TransversalityError("relations are not transversal: odd middle rank " + std::to_string(odd_rank) + " < " +
                                  std::to_string(n2));
    }
    auto chart = composite_chart(c1, c2, n2);
    QMatrix K = n2 == 0 ? QMatrix::identity(k1 + k2) : kernel(M);
    const std::size_t d = K.cols();
    QMatrix P(n1 + n3, d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t a = 0; a < k1; ++a) P(i, c) += V1(i, a) * K(a, c);
        for (std::size_t i = 0; i < n3; ++i)
            for (std::size_t b = 0; b < k2; ++b) P(n1 + i, c) += V2(n2 + i, b) * K(k1 + b, c);
    }
    int sign = L1.orientation_sign() * L2.orientation_sign() * composite_sign(c1, c2, chart, n2, k1, k2, d);
    if (n2 > 0) {
        QMatrix Mt = M.transpose();
        QMatrix G = Mt * inverse(M * Mt);
        if (sgn(det(QMatrix::hstack(K, G))) < 0) sign = -sign;
    }
    if (d > 0 && rank(P) != d) throw TransversalityError("relations are not transversal: composite projection degenerates");
    LinearLagrangian out(chart, d == 0 ? QMatrix(n1 + n3, 0) : P, sign);
    if (!out.is_lagrangian()) throw ContractError("composite relation is not Lagrangian");
    return out;
}

/// Composition of morphisms: K1 on Ybar1 x Y2, K2 on Ybar2 x Y3, result on
/// Ybar1 x Y3, given by (-1)^{|K1| n2} int_{Y2} K1 K2.
inline DistributionalSemidensity compose(const DistributionalSemidensity& K1, const DistributionalSemidensity& K2,
                                         std::size_t middle) {
    const auto& c1 = K1.chart();
    const auto& c2 = K2.chart();
    const std::size_t n2 = middle;
    if (n2 > c1.pairs() || n2 > c2.pairs()) throw StructuralError("compose: middle factor too large");
    const std::size_t n1 = c1.pairs() - n2, n3 = c2.pairs() - n2;
    for (std::size_t i = 0; i < n2; ++i)
        if (c1.sign(n1 + i) != -c2.sign(i)) throw StructuralError("compose: middle factors do not carry opposite forms");
    // working chart [Y1, Y2, Y3] with fresh names for the middle
    std::vector<std::string> xs, xis;
    std::vector<int> signs;
    for (std::size_t i = 0; i < n1; ++i) {
        xs.push_back(c1.x_name(i));
        xis.push_back(c1.xi_name(i));
        signs.push_back(c1.sign(i));
    }
    for (std::size_t i = 0; i < n2; ++i) {
        xs.push_back("#m" + std::to_string(i));
        xis.push_back("#mxi" + std::to_string(i));
        signs.push_back(c1.sign(n1 + i));
    }
    auto result_chart = composite_chart(c1, c2, n2);
    for (std::size_t i = 0; i < n3; ++i) {
        xs.push_back(result_chart.x_name(n1 + i));
        xis.push_back(result_chart.xi_name(n1 + i));
        signs.push_back(c2.sign(n2 + i));
    }
    DarbouxChart work(xs, xis, signs);
    std::vector<std::size_t> map1(n1 + n2), map2(n2 + n3);
    std::iota(map1.begin(), map1.end(), std::size_t{0});
    std::iota(map2.begin(), map2.end(), n1);
    DistributionalSemidensity k1 = transport(K1.part(Parity::Even), work, map1);
    DistributionalSemidensity k1o = transport(K1.part(Parity::Odd), work, map1);
    k1 += (n2 & 1) ? k1o * Rational(-1) : k1o;
    DistributionalSemidensity k2 = transport(K2, work, map2);
    std::vector<std::size_t> mid(n2);
    std::iota(mid.begin(), mid.end(), n1);
    DistributionalSemidensity prod(work);
    try {
        prod = k1 * k2;
    } catch (const WavefrontError& e) {
        throw CompositionUndefinedError(std::string("composition undefined: ") + e.what());
    }
    auto integrated = integrate_pinned(prod, mid);
    // back to the composite chart
    std::vector<SuperPolynomial> images(work.table()->size(), SuperPolynomial(result_chart.table()));
    DistributionalSemidensity out(result_chart);
    for (std::size_t i = 0; i < n1 + n3; ++i) {
        std::size_t w = i < n1 ? i : i + n2;
        images[work.x(w)] = SuperPolynomial::variable(result_chart.table(), result_chart.x(i));
        images[work.xi(w)] = SuperPolynomial::variable(result_chart.table(), result_chart.xi(i));
    }
    Substitution sub(work.table(), result_chart.table(), images);
    for (const auto& [k, parts] : integrated.terms()) {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < n1 + n3; ++i) cols.push_back(i < n1 ? i : i + n2);
        QMatrix forms = k.forms.select_cols(cols);
        QMatrix gauss = k.gauss.select_rows(cols).select_cols(cols);
        for (const auto& [beta, p] : parts) out.add(RawDistributionTerm{forms, beta, sub(p), gauss});
    }
    return out;
}

/// Transpose of a relation: swaps the two factors of Ybar1 x Y2 and flips all
/// signs, giving a relation in Ybar2 x Y1.
inline DarbouxChart transposed_chart(const DarbouxChart& c, std::size_t first) {
    return DarbouxChart::product(c.slice(first, c.pairs() - first), c.slice(0, first), false).bar();
}

inline LinearLagrangian transpose(const LinearLagrangian& L, std::size_t first) {
    const auto& c = L.chart();
    const std::size_t n = c.pairs(), second = n - first;
    auto chart = transposed_chart(c, first);
    const QMatrix& V = L.even_basis();
    QMatrix W(n, V.cols());
    for (std::size_t a = 0; a < V.cols(); ++a) {
        for (std::size_t i = 0; i < second; ++i) W(i, a) = V(first + i, a);
        for (std::size_t i = 0; i < first; ++i) W(second + i, a) = V(i, a);
    }
    return LinearLagrangian(chart, W);
}

inline DistributionalSemidensity transpose(const DistributionalSemidensity& K, std::size_t first) {
    const auto& c = K.chart();
    const std::size_t n = c.pairs(), second = n - first;
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) map[i] = i < first ? second + i : i - first;
    return transport(K, transposed_chart(c, first), map);
}

}  // namespace oddsym

#pragma once

/**
 * @file demos.hpp
 * @brief Worked examples as executable checks: the crossed product for a Lie
 *        algebra, operators on differential forms, the odd Fourier transform
 *        and the pair-groupoid convolution algebra.
 */

#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/bv/lagrangian.hpp"
#include "oddsym/bv/semidensity.hpp"
#include "oddsym/deformed.hpp"

namespace oddsym {

struct CheckLine {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct DemoReport {
    std::string title;
    std::vector<CheckLine> lines;

    void add(std::string name, bool ok, std::string detail = {}) {
        lines.push_back(CheckLine{std::move(name), ok, std::move(detail)});
    }
    bool ok() const {
        for (const auto& l : lines)
            if (!l.ok) return false;
        return true;
    }
    const CheckLine* find(const std::string& name) const {
        for (const auto& l : lines)
            if (l.name == name) return &l;
        return nullptr;
    }
    std::string str() const {
        std::ostringstream os;
        os << title << "\n";
        for (const auto& l : lines) {
            os << "  [" << (l.ok ? "pass" : "FAIL") << "] " << l.name;
            if (!l.detail.empty()) os << ": " << l.detail;
            os << "\n";
        }
        return os.str();
    }
};

/// Graded commutator of differential operators with homogeneous parity.
inline DiffOperator supercommutator(const DiffOperator& a, const DiffOperator& b) {
    Parity pa = a.parity().value_or(Parity::Even), pb = b.parity().value_or(Parity::Even);
    return a * b - b * a * Rational(koszul(pa, pb));
}

// ---- crossed product ------------------------------------------------------

/// Omega_pi of Pi g* for the Kirillov-Kostant structure of `c`: theta_i are
/// the odd coordinates, e_i = d(theta_i).
inline DemoReport crossed_product_verify(const LieStructureConstants& c, std::size_t samples = 20,
                                         std::uint64_t seed = 1) {
    c.validate();
    const std::size_t n = c.dim;
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back(Variable{"th" + std::to_string(i), Parity::Odd, 1, Role::Coordinate});
    CotangentChart chart(VariableTable::make(vars, true));
    DeformedAlgebra alg(OddPoissonStructure::kirillov_kostant(chart, c));
    auto th = [&](std::size_t i) { return alg.coordinate(i); };
    auto e = [&](std::size_t i) { return alg.dsym(i); };
    auto lin = [&](std::size_t i, std::size_t j, const std::function<DeformedElement(std::size_t)>& gen) {
        DeformedElement r = alg.zero();
        for (std::size_t k = 0; k < n; ++k)
            if (sgn(c.at(i, j, k)) != 0) r += gen(k) * c.at(i, j, k);
        return r;
    };

    DemoReport rep;
    rep.title = "crossed product of the enveloping algebra with the exterior algebra (dim " + std::to_string(n) + ")";

    std::string w;
    for (std::size_t i = 0; i < n && w.empty(); ++i)
        for (std::size_t j = 0; j < n && w.empty(); ++j) {
            auto lhs = alg.mul(e(i), e(j)) - alg.mul(e(j), e(i));
            auto rhs = lin(i, j, e);
            if (!(lhs == rhs)) w = "e" + std::to_string(i + 1) + " e" + std::to_string(j + 1) + " - e" +
                                   std::to_string(j + 1) + " e" + std::to_string(i + 1) + " = " + alg.render(lhs) +
                                   ", expected " + alg.render(rhs);
        }
    rep.add("enveloping relations e_i e_j - e_j e_i = c^k_ij e_k", w.empty(), w);

    w.clear();
    for (std::size_t i = 0; i < n && w.empty(); ++i)
        for (std::size_t j = 0; j < n && w.empty(); ++j) {
            auto lhs = alg.commutator(e(i), th(j));
            auto rhs = lin(i, j, th);
            if (!(lhs == rhs)) w = "[e" + std::to_string(i + 1) + ", th" + std::to_string(j + 1) + "] = " +
                                   alg.render(lhs) + ", expected " + alg.render(rhs);
        }
    rep.add("cross relations [e_i, th_j] = c^k_ij th_k", w.empty(), w);

    w.clear();
    for (std::size_t i = 0; i < n && w.empty(); ++i) {
        auto d = alg.d(th(i));
        if (!(d == e(i))) w = "d(th" + std::to_string(i + 1) + ") = " + alg.render(d);
    }
    rep.add("d(th_i) = e_i", w.empty(), w);

    w.clear();
    std::vector<DeformedElement> probes;
    for (std::size_t i = 0; i < n; ++i) {
        probes.push_back(th(i));
        probes.push_back(e(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            probes.push_back(alg.mul(th(i), th(j)));
            for (std::size_t k = j + 1; k < n; ++k) probes.push_back(alg.product({th(i), th(j), th(k)}));
        }
    }
    Sampler rng(seed);
    for (std::size_t s = 0; s < samples; ++s) probes.push_back(alg.random_element(rng, 3, 3));
    for (const auto& p : probes) {
        auto dd = alg.d(alg.d(p));
        if (!dd.is_zero()) {
            w = "d(d(" + alg.render(p) + ")) = " + alg.render(dd);
            break;
        }
    }
    const bool jacobi = c.satisfies_jacobi();
    rep.add("d^2 = 0", w.empty(), w);
    rep.add("d^2 = 0 exactly when the Jacobi identity holds", w.empty() == jacobi,
            jacobi ? "Jacobi holds" : "Jacobi fails");

    if (jacobi) {
        w.clear();
        for (unsigned k = 0; k <= 2 && w.empty(); ++k) {
            auto g = gr_dimension_check(alg, static_cast<unsigned>(std::min<std::size_t>(n, 3)), k);
            if (!g.ok()) w = "filtration " + std::to_string(k) + ": rank " + std::to_string(g.rank) + ", expected " +
                             g.expected.get_str();
        }
        rep.add("associated graded is free on th_i and e_i", w.empty(), w);
    }
    return rep;
}

// ---- differential forms -----------------------------------------------------

/// Polynomial differential forms on R^n: variables x_i (even), dx_i (odd).
class FormsModel {
public:
    explicit FormsModel(std::size_t n) : n_(n) {
        std::vector<Variable> vars;
        for (std::size_t i = 1; i <= n; ++i) vars.push_back(even_var(n == 1 ? "x" : "x" + std::to_string(i)));
        for (std::size_t i = 1; i <= n; ++i) vars.push_back(odd_var(n == 1 ? "dx" : "dx" + std::to_string(i)));
        table_ = VariableTable::make(std::move(vars));
    }

    std::size_t dimension() const { return n_; }
    const TablePtr& table() const { return table_; }
    std::size_t x(std::size_t i) const { return i; }
    std::size_t dx(std::size_t i) const { return n_ + i; }

    SuperPolynomial d(const SuperPolynomial& w) const {
        require_same_table(w.table(), table_, "de Rham differential");
        SuperPolynomial r(table_);
        for (std::size_t i = 0; i < n_; ++i) r += SuperPolynomial::variable(table_, dx(i)) * poly_deriv(x(i), w);
        return r;
    }

    DiffOperator d_operator() const {
        DiffOperator r(table_);
        for (std::size_t i = 0; i < n_; ++i)
            r = r + DiffOperator::multiplication(SuperPolynomial::variable(table_, dx(i))) * DiffOperator::partial(table_, x(i));
        return r;
    }

    /// L_v for v = sum v^i d/dx_i, as an even derivation: v^i d/dx_i + d(v^i) d/d(dx_i).
    SuperPolynomial lie_derivative(const std::vector<SuperPolynomial>& v, const SuperPolynomial& w) const {
        if (v.size() != n_) throw StructuralError("vector field has the wrong number of components");
        SuperPolynomial r(table_);
        for (std::size_t i = 0; i < n_; ++i) {
            r += v[i] * poly_deriv(x(i), w);
            r += d(v[i]) * poly_deriv(dx(i), w);
        }
        return r;
    }

    /// All monomials with coordinate degree <= `degree`.
    std::vector<SuperPolynomial> spanning_set(unsigned degree) const {
        std::vector<SuperPolynomial> out;
        Monomial m(table_->size());
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
            if (v == table_->size()) {
                out.push_back(SuperPolynomial::monomial(table_, m));
                return;
            }
            unsigned cap = v >= n_ ? 1u : left;
            for (unsigned k = 0; k <= cap; ++k) {
                m[v] = static_cast<std::uint16_t>(k);
                rec(v + 1, v >= n_ ? left : left - k);
            }
            m[v] = 0;
        };
        rec(0, degree);
        return out;
    }

private:
    std::size_t n_;
    TablePtr table_;
};

/// Multivector fields on R^n as functions on Pi T* R^n acting by contraction:
/// x_i -> x_i, xi_i -> d/d(dx_i); d-symbols act through [d, .].
class ContractionRepresentation {
public:
    explicit ContractionRepresentation(std::size_t n)
        : forms_(n), chart_(make_chart(n)), alg_(std::make_unique<DeformedAlgebra>(chart_.poisson())) {}

    const FormsModel& forms() const { return forms_; }
    const DarbouxChart& chart() const { return chart_; }
    const DeformedAlgebra& algebra() const { return *alg_; }

    DiffOperator generator(std::size_t v) const {
        const std::size_t n = chart_.pairs();
        if (v < n) return DiffOperator::multiplication(SuperPolynomial::variable(forms_.table(), forms_.x(v)));
        return DiffOperator::partial(forms_.table(), forms_.dx(v - n));
    }

    /// i_f for a multivector field f (a function on the chart).
    DiffOperator contraction(const SuperPolynomial& f) const {
        require_same_table(f.table(), chart_.table(), "contraction");
        DiffOperator r(forms_.table());
        for (const auto& [m, c] : f.terms()) {
            DiffOperator t = DiffOperator::multiplication(SuperPolynomial::constant(forms_.table(), c));
            for (std::size_t v = 0; v < m.size(); ++v)
                for (unsigned k = 0; k < m[v]; ++k) t = t * generator(v);
            r = r + t;
        }
        return r;
    }

    /// Image of an element of Omega_pi(Pi T* R^n).
    DiffOperator represent(const DeformedElement& a) const {
        const auto& alg = *alg_;
        const std::size_t dim = alg.dimension();
        const DiffOperator d = forms_.d_operator();
        DiffOperator r(forms_.table());
        for (const auto& [m, c] : a.terms()) {
            DiffOperator t = DiffOperator::multiplication(SuperPolynomial::constant(forms_.table(), c));
            for (std::size_t v = 0; v < dim; ++v)
                for (unsigned k = 0; k < m[v]; ++k) t = t * generator(v);
            for (std::size_t v = 0; v < dim; ++v)
                for (unsigned k = 0; k < m[dim + v]; ++k) t = t * supercommutator(d, generator(v));
            r = r + t;
        }
        return r;
    }

    /// Element of Omega_pi for a multivector field.
    DeformedElement embed(const SuperPolynomial& f) const { return alg_->embed(f); }

private:
    static DarbouxChart make_chart(std::size_t n) {
        if (n == 0 || n > 3) throw DomainError("contraction representation: dimension must be 1, 2 or 3");
        // {x, xi} = -1 makes [i_f, [d, i_g]] = i_{f,g}
        return DarbouxChart::standard(n, "", -1);
    }

    FormsModel forms_;
    DarbouxChart chart_;
    std::unique_ptr<DeformedAlgebra> alg_;
};

inline bool same_on_forms(const DiffOperator& a, const DiffOperator& b, const std::vector<SuperPolynomial>& span,
                          std::string* witness = nullptr) {
    for (const auto& w : span) {
        auto l = a.apply(w), r = b.apply(w);
        if (!(l == r)) {
            if (witness) *witness = "on " + to_string(w) + ": " + to_string(l) + " vs " + to_string(r);
            return false;
        }
    }
    return true;
}

inline DemoReport contraction_rep_check(std::size_t n, unsigned degree, std::size_t samples = 20,
                                        std::uint64_t seed = 1) {
    ContractionRepresentation rep(n);
    const auto& ch = rep.chart();
    const auto& alg = rep.algebra();
    const auto span = rep.forms().spanning_set(degree);
    const DiffOperator d = rep.forms().d_operator();
    DemoReport out;
    out.title = "multivector fields acting on differential forms on R^" + std::to_string(n);

    auto eq1 = [&](const SuperPolynomial& f, const SuperPolynomial& g, std::string* w) {
        auto lhs = supercommutator(rep.contraction(f), supercommutator(d, rep.contraction(g)));
        auto rhs = rep.contraction(odd_bracket(ch.poisson(), f, g));
        return same_on_forms(lhs, rhs, span, w);
    };

    std::string w;
    bool ok = true;
    const auto& t = ch.table();
    for (std::size_t a = 0; a < t->size() && ok; ++a)
        for (std::size_t b = 0; b < t->size() && ok; ++b)
            ok = eq1(SuperPolynomial::variable(t, a), SuperPolynomial::variable(t, b), &w);
    out.add("[i_f, [d, i_g]] = i_{f,g} on coordinates", ok, w);

    Sampler rng(seed);
    ok = true;
    w.clear();
    for (std::size_t s = 0; s < samples && ok; ++s) {
        auto f = rng.polynomial(t, degree, 3, rng.parity());
        auto g = rng.polynomial(t, degree, 3, rng.parity());
        ok = eq1(f, g, &w);
        if (!ok) w = "f = " + to_string(f) + ", g = " + to_string(g) + "; " + w;
    }
    out.add("[i_f, [d, i_g]] = i_{f,g} on random multivector fields", ok, w);

    ok = true;
    w.clear();
    for (std::size_t s = 0; s < samples && ok; ++s) {
        auto a = alg.random_element(rng, 2, 2), b = alg.random_element(rng, 2, 2);
        ok = same_on_forms(rep.represent(alg.mul(a, b)), rep.represent(a) * rep.represent(b), span, &w);
        if (ok) ok = same_on_forms(rep.represent(alg.d(a)), supercommutator(d, rep.represent(a)), span, &w);
        if (!ok) w = "a = " + alg.render(a) + ", b = " + alg.render(b) + "; " + w;
    }
    out.add("representation respects products and d", ok, w);

    if (n == 1) {
        // f = d/dx, g = x d/dx: Schouten bracket d/dx
        auto xi = SuperPolynomial::variable(t, ch.xi(0));
        auto g = SuperPolynomial::variable(t, ch.x(0)) * xi;
        auto br = odd_bracket(ch.poisson(), xi, g);
        std::string w2;
        bool ok2 = eq1(xi, g, &w2) && br == xi;
        out.add("f = d/dx, g = x d/dx gives d/dx", ok2, ok2 ? "" : "bracket " + to_string(br) + " " + w2);
    }
    return out;
}

// ---- odd Fourier transform ------------------------------------------------

/// Fibrewise Fourier transform between forms on R^n (x, dx) and semidensities
/// on Pi T* R^n (x, xi): w -> int w exp(sum xi_i dx_i) D(dx), the odd
/// integrals taken from the right so that d/dxi passes through them.
class OddFourier {
public:
    explicit OddFourier(std::size_t n) : forms_(n), chart_(DarbouxChart::standard(n)) {
        if (n == 0) throw StructuralError("odd Fourier transform needs at least one pair");
        std::vector<Variable> vars;
        for (std::size_t i = 0; i < n; ++i) vars.push_back((*forms_.table())[forms_.x(i)]);
        for (std::size_t i = 0; i < n; ++i) vars.push_back((*forms_.table())[forms_.dx(i)]);
        for (std::size_t i = 0; i < n; ++i) vars.push_back((*chart_.table())[chart_.xi(i)]);
        joint_ = VariableTable::make(std::move(vars));
        kernel_ = SuperPolynomial::constant(joint_, Rational(1));
        for (std::size_t i = 0; i < n; ++i) {
            auto f = SuperPolynomial::constant(joint_, Rational(1)) +
                     SuperPolynomial::variable(joint_, 2 * n + i) * SuperPolynomial::variable(joint_, n + i);
            kernel_ = kernel_ * f;
        }
        std::vector<SuperPolynomial> from_forms, from_chart, to_forms, to_chart;
        for (std::size_t v = 0; v < 2 * n; ++v) from_forms.push_back(SuperPolynomial::variable(joint_, v));
        for (std::size_t i = 0; i < n; ++i) from_chart.push_back(SuperPolynomial::variable(joint_, i));
        for (std::size_t i = 0; i < n; ++i) from_chart.push_back(SuperPolynomial::variable(joint_, 2 * n + i));
        for (std::size_t v = 0; v < 3 * n; ++v) {
            to_forms.push_back(v < 2 * n ? SuperPolynomial::variable(forms_.table(), v) : SuperPolynomial(forms_.table()));
            if (v < n) to_chart.push_back(SuperPolynomial::variable(chart_.table(), chart_.x(v)));
            else if (v < 2 * n) to_chart.push_back(SuperPolynomial(chart_.table()));
            else to_chart.push_back(SuperPolynomial::variable(chart_.table(), chart_.xi(v - 2 * n)));
        }
        in_forms_ = std::make_shared<Substitution>(forms_.table(), joint_, from_forms);
        in_chart_ = std::make_shared<Substitution>(chart_.table(), joint_, from_chart);
        out_forms_ = std::make_shared<Substitution>(joint_, forms_.table(), to_forms);
        out_chart_ = std::make_shared<Substitution>(joint_, chart_.table(), to_chart);
        for (std::size_t i = 0; i < n; ++i) dx_order_.push_back(n + i);
        for (std::size_t i = 0; i < n; ++i) xi_order_.push_back(2 * n + i);
        // normalise so that F(1) = xi_1 ... xi_n
        auto one = (*out_chart_)(right_integrate(dx_order_, kernel_));
        SuperPolynomial top = SuperPolynomial::constant(chart_.table(), Rational(1));
        for (std::size_t i = 0; i < n; ++i) top = top * SuperPolynomial::variable(chart_.table(), chart_.xi(i));
        if (one == top * Rational(-1)) kernel_ *= Rational(-1);
    }

    const FormsModel& forms() const { return forms_; }
    const DarbouxChart& chart() const { return chart_; }

    /// Forms to semidensities; F(1) = xi_1 ... xi_n.
    SuperPolynomial forward(const SuperPolynomial& w) const {
        if (!same_table(w.table(), forms_.table())) throw StructuralError("odd Fourier: expected a form on R^n");
        return (*out_chart_)(right_integrate(dx_order_, (*in_forms_)(w) * kernel_));
    }

    /// Semidensities to forms with the same kernel, integrating over xi.
    SuperPolynomial backward(const SuperPolynomial& s) const {
        if (!same_table(s.table(), chart_.table())) throw StructuralError("odd Fourier: expected a semidensity on Pi T* R^n");
        return (*out_forms_)(right_integrate(xi_order_, (*in_chart_)(s) * kernel_));
    }

    /// backward(forward(w)) = inversion_sign(k) w for w of form degree k.
    int inversion_sign(unsigned k) const {
        const std::size_t n = chart_.pairs();
        return ((n * (n - 1) / 2 + k) % 2) ? -1 : 1;
    }

private:
    static SuperPolynomial right_integrate(const std::vector<std::size_t>& order, SuperPolynomial a) {
        for (auto v : order) a = poly_right_deriv(v, a);
        return a;
    }

    FormsModel forms_;
    DarbouxChart chart_;
    TablePtr joint_;
    SuperPolynomial kernel_;
    std::shared_ptr<Substitution> in_forms_, in_chart_, out_forms_, out_chart_;
    std::vector<std::size_t> dx_order_, xi_order_;
};

enum class FourierDirection { FormsToSemidensities, SemidensitiesToForms };

inline SuperPolynomial odd_fourier(const OddFourier& F, FourierDirection dir, const SuperPolynomial& s) {
    return dir == FourierDirection::FormsToSemidensities ? F.forward(s) : F.backward(s);
}

inline unsigned form_degree(const FormsModel& m, const Monomial& mono) {
    unsigned k = 0;
    for (std::size_t i = 0; i < m.dimension(); ++i) k += mono[m.dx(i)];
    return k;
}

inline DemoReport fourier_check(std::size_t n, std::size_t samples, unsigned degree, std::uint64_t seed,
                                std::size_t fields = 6) {
    OddFourier F(n);
    const auto& fm = F.forms();
    const auto& ch = F.chart();
    DemoReport out;
    out.title = "odd Fourier transform on R^" + std::to_string(n);

    SuperPolynomial top = SuperPolynomial::constant(ch.table(), Rational(1));
    for (std::size_t i = 0; i < n; ++i) top = top * SuperPolynomial::variable(ch.table(), ch.xi(i));
    auto f1 = F.forward(SuperPolynomial::constant(fm.table(), Rational(1)));
    out.add("F(1) = xi_1 ... xi_n", f1 == top, to_string(f1));

    Sampler rng(seed);
    std::string w;
    for (std::size_t s = 0; s < samples && w.empty(); ++s) {
        auto om = rng.polynomial(fm.table(), degree, 4);
        auto lhs = F.forward(fm.d(om)), rhs = bv_delta(ch, F.forward(om));
        if (!(lhs == rhs)) w = "w = " + to_string(om) + ": F(dw) = " + to_string(lhs) + ", Delta F(w) = " + to_string(rhs);
    }
    out.add("F(d w) = Delta F(w)", w.empty(), w);

    w.clear();
    for (std::size_t s = 0; s < samples && w.empty(); ++s) {
        auto om = rng.polynomial(fm.table(), degree, 4);
        auto back = F.backward(F.forward(om));
        SuperPolynomial want(fm.table());
        for (const auto& [m, c] : om.terms())
            want.add_term(m, c * F.inversion_sign(form_degree(fm, m)));
        if (!(back == want)) w = "w = " + to_string(om) + " comes back as " + to_string(back);
    }
    out.add("backward(forward(w)) = +-w with the documented sign", w.empty(), w);

    // Cartan shadow: F(L_v w) = [Delta, f_v] F(w) for f_v = sum v^i xi_i
    w.clear();
    const auto span = fm.spanning_set(3);
    for (std::size_t s = 0; s < fields && w.empty(); ++s) {
        std::vector<SuperPolynomial> v, vc;
        for (std::size_t i = 0; i < n; ++i) {
            unsigned deg = s % 2 ? 2u : 1u;
            auto c = rng.polynomial(fm.table(), deg, 2, Parity::Even, [&] {
                std::vector<std::size_t> xs;
                for (std::size_t j = 0; j < n; ++j) xs.push_back(fm.x(j));
                return xs;
            }());
            v.push_back(c);
            std::vector<SuperPolynomial> img;
            for (std::size_t j = 0; j < fm.table()->size(); ++j)
                img.push_back(j < n ? SuperPolynomial::variable(ch.table(), ch.x(j)) : SuperPolynomial(ch.table()));
            vc.push_back(Substitution(fm.table(), ch.table(), img)(c));
        }
        SuperPolynomial fv(ch.table());
        for (std::size_t i = 0; i < n; ++i) fv += vc[i] * SuperPolynomial::variable(ch.table(), ch.xi(i));
        for (const auto& om : span) {
            auto lhs = F.forward(fm.lie_derivative(v, om));
            auto fo = F.forward(om);
            auto rhs = bv_delta(ch, fv * fo) + fv * bv_delta(ch, fo);
            if (!(lhs == rhs)) {
                w = "f_v = " + to_string(fv) + ", w = " + to_string(om) + ": " + to_string(lhs) + " vs " + to_string(rhs);
                break;
            }
        }
    }
    out.add("Cartan shadow F(L_v w) = [Delta, f_v] F(w)", w.empty(), w);
    return out;
}

// ---- pair groupoid ------------------------------------------------------------

/// Kernels on Xbar x X supported on the diagonal, X = Pi T* R^n, composed by
/// integration over the middle factor. Omega_pi(X) maps in by
/// f -> kernel of multiplication by f, d(z) -> kernel of [-Delta, z]; the
/// sign makes [f, dg] = {f, g} with {x, xi} = 1.
class PairGroupoid {
public:
    explicit PairGroupoid(std::size_t n)
        : x_(DarbouxChart::standard(n)), y_(DarbouxChart::product(x_, x_, true)),
          alg_(std::make_unique<DeformedAlgebra>(x_.poisson())) {
        if (n == 0 || n > 2) throw DomainError("pair groupoid demo: n must be 1 or 2");
        diag_ = delta_L(LinearLagrangian::graph(y_, QMatrix::identity(n)));
        std::vector<SuperPolynomial> lo;
        for (std::size_t v = 0; v < x_.table()->size(); ++v) {
            std::size_t p = v < n ? v : v - n;
            bool odd = v >= n;
            lo.push_back(SuperPolynomial::variable(y_.table(), odd ? y_.xi(p) : y_.x(p)));
        }
        first_ = std::make_shared<Substitution>(x_.table(), y_.table(), lo);
    }

    const DarbouxChart& space() const { return x_; }
    const DarbouxChart& groupoid() const { return y_; }
    const DeformedAlgebra& algebra() const { return *alg_; }
    const DistributionalSemidensity& unit() const { return diag_; }

    /// P applied to delta_diag in the first factor; compose(K_P, K_Q) = K_{PQ}.
    DistributionalSemidensity kernel(const DiffOperator& P) const {
        const std::size_t n = x_.pairs();
        const std::size_t m = x_.table()->size();
        DistributionalSemidensity r(y_);
        for (const auto& [mono, c] : P.body().terms()) {
            DistributionalSemidensity t = diag_;
            for (std::size_t v = m; v-- > 0;)
                for (unsigned k = 0; k < mono[m + v]; ++k)
                    t = v < n ? t.derivative_x(v) : t.derivative_xi(v - n);
            Monomial coef(m);
            for (std::size_t v = 0; v < m; ++v) coef[v] = mono[v];
            r += (*first_)(SuperPolynomial::monomial(x_.table(), coef, c)) * t;
        }
        return r;
    }

    /// Convolution K1 * K2.
    DistributionalSemidensity convolve(const DistributionalSemidensity& a, const DistributionalSemidensity& b) const {
        return compose(a, b, x_.pairs());
    }

    DiffOperator operator_of(const DeformedElement& a) const {
        const auto& alg = *alg_;
        const std::size_t dim = alg.dimension();
        const DiffOperator delta = DiffOperator::bv_laplacian(x_) * Rational(-1);
        DiffOperator r(x_.table());
        for (const auto& [m, c] : a.terms()) {
            DiffOperator t = DiffOperator::multiplication(SuperPolynomial::constant(x_.table(), c));
            for (std::size_t v = 0; v < dim; ++v)
                for (unsigned k = 0; k < m[v]; ++k)
                    t = t * DiffOperator::multiplication(SuperPolynomial::variable(x_.table(), v));
            for (std::size_t v = 0; v < dim; ++v)
                for (unsigned k = 0; k < m[dim + v]; ++k)
                    t = t * supercommutator(delta, DiffOperator::multiplication(SuperPolynomial::variable(x_.table(), v)));
            r = r + t;
        }
        return r;
    }

    DistributionalSemidensity image(const DeformedElement& a) const { return kernel(operator_of(a)); }

    /// Convolution-side differential: graded commutator with the kernel of
    /// -Delta. Kernels carry the parity of their operator shifted by n.
    DistributionalSemidensity differential(const DistributionalSemidensity& k) const {
        auto kd = kernel(DiffOperator::bv_laplacian(x_) * Rational(-1));
        Parity p = k.parity().value_or(Parity::Even);
        if (x_.pairs() % 2) p = p + Parity::Odd;
        return convolve(kd, k) - convolve(k, kd) * Rational(koszul(Parity::Odd, p));
    }

    /// Filtration degree: delta-derivative order plus the defect of the
    /// degree in u = xi - xi' from n, maximised over terms.
    unsigned filtration_degree(const DistributionalSemidensity& k) const {
        const std::size_t n = x_.pairs();
        std::vector<SuperPolynomial> img;
        for (std::size_t v = 0; v < y_.table()->size(); ++v) img.push_back(SuperPolynomial::variable(y_.table(), v));
        // xi -> u + xi' where u reuses the slot of xi
        for (std::size_t i = 0; i < n; ++i) img[y_.xi(i)] = img[y_.xi(i)] + SuperPolynomial::variable(y_.table(), y_.xi(n + i));
        Substitution to_u(y_.table(), y_.table(), img);
        unsigned best = 0;
        for (const auto& [key, parts] : k.terms())
            for (const auto& [beta, p] : parts) {
                unsigned order = 0;
                for (auto b : beta) order += b;
                auto q = to_u(p);
                for (const auto& [m, c] : q.terms()) {
                    unsigned ud = 0;
                    for (std::size_t i = 0; i < n; ++i) ud += m[y_.xi(i)];
                    best = std::max(best, order + static_cast<unsigned>(n) - std::min<unsigned>(ud, static_cast<unsigned>(n)));
                }
            }
        return best;
    }

private:
    DarbouxChart x_, y_;
    std::unique_ptr<DeformedAlgebra> alg_;
    DistributionalSemidensity diag_;
    std::shared_ptr<Substitution> first_;
};

/// All normal words with coordinate degree <= `coord` and filtration <= `filt`.
inline std::vector<DeformedElement> normal_words(const DeformedAlgebra& alg, unsigned coord, unsigned filt) {
    const auto& t = *alg.forms();
    const std::size_t n = alg.dimension();
    std::vector<DeformedElement> out;
    Monomial m(t.size());
    std::function<void(std::size_t, unsigned, unsigned)> rec = [&](std::size_t v, unsigned c, unsigned f) {
        if (v == t.size()) {
            out.push_back(SuperPolynomial::monomial(alg.forms(), m));
            return;
        }
        const bool is_d = v >= n;
        unsigned cap = is_d ? filt - f : coord - c;
        if (t.is_odd(v)) cap = std::min(cap, 1u);
        for (unsigned k = 0; k <= cap; ++k) {
            m[v] = static_cast<std::uint16_t>(k);
            rec(v + 1, c + (is_d ? 0 : k), f + (is_d ? k : 0));
        }
        m[v] = 0;
    };
    rec(0, 0, 0);
    return out;
}

inline DemoReport pair_groupoid_demo(std::size_t n, unsigned max_filtration = 2, unsigned coord_degree = 1) {
    PairGroupoid G(n);
    const auto& alg = G.algebra();
    const auto& X = G.space();
    DemoReport out;
    out.title = "convolution algebra of the pair groupoid of Pi T* R^" + std::to_string(n);

    auto u = G.unit();
    out.add("delta_diag * delta_diag = delta_diag", G.convolve(u, u) == u);
    out.add("delta_diag is the image of 1", G.image(alg.constant(1)) == u);

    // first-derivative kernel after coordinate kernel
    {
        auto dxi = G.image(alg.dsym(X.xi(0)));
        auto x = G.image(alg.coordinate(X.x(0)));
        auto lhs = G.convolve(dxi, x);
        auto want = alg.mul(alg.dsym(X.xi(0)), alg.coordinate(X.x(0)));
        out.add("kernel(d xi) * kernel(x) = image of " + alg.render(want), lhs == G.image(want), lhs.render());
    }

    const auto words = normal_words(alg, coord_degree, max_filtration);
    std::vector<DeformedElement> gens;
    for (std::size_t v = 0; v < alg.forms()->size(); ++v) gens.push_back(SuperPolynomial::variable(alg.forms(), v));

    std::string w;
    for (const auto& a : gens) {
        for (const auto& b : words) {
            if (alg.filtration_degree(a) + alg.filtration_degree(b) > max_filtration) continue;
            auto lhs = G.convolve(G.image(a), G.image(b));
            auto rhs = G.image(alg.mul(a, b));
            if (!(lhs == rhs)) {
                w = "a = " + alg.render(a) + ", b = " + alg.render(b) + ": " + lhs.render() + " vs " + rhs.render();
                break;
            }
        }
        if (!w.empty()) break;
    }
    out.add("products of generators with normal words match", w.empty(), w);

    w.clear();
    for (std::size_t i = 0; i < alg.dimension() && w.empty(); ++i)
        for (std::size_t j = 0; j < alg.dimension() && w.empty(); ++j) {
            auto f = G.image(alg.coordinate(i)), dg = G.image(alg.dsym(j));
            Parity pf = alg.coordinate(i).parity_or(Parity::Even), pd = alg.dsym(j).parity_or(Parity::Even);
            auto lhs = G.convolve(f, dg) - G.convolve(dg, f) * Rational(koszul(pf, pd));
            auto rhs = G.image(alg.embed(alg.pi().coordinate_bracket(i, j)));
            if (!(lhs == rhs)) w = "f = " + alg.render(alg.coordinate(i)) + ", g = " + alg.render(alg.coordinate(j)) +
                                   ": " + lhs.render() + " vs " + rhs.render();
        }
    out.add("[f, dg] = {f, g} on the convolution side", w.empty(), w);

    w.clear();
    for (const auto& a : words) {
        if (alg.filtration_degree(a) >= max_filtration) continue;
        auto lhs = G.differential(G.image(a));
        auto rhs = G.image(alg.d(a));
        if (!(lhs == rhs)) {
            w = "a = " + alg.render(a) + ": " + lhs.render() + " vs " + rhs.render();
            break;
        }
    }
    out.add("differentials correspond", w.empty(), w);

    w.clear();
    for (const auto& a : words) {
        if (a.is_zero()) continue;
        auto k = G.image(a);
        if (G.filtration_degree(k) != alg.filtration_degree(a)) {
            w = alg.render(a) + " has kernel degree " + std::to_string(G.filtration_degree(k));
            break;
        }
    }
    out.add("filtration degrees agree", w.empty(), w);

    w.clear();
    for (const auto& a : words)
        for (const auto& b : words) {
            if (!w.empty()) break;
            unsigned fa = alg.filtration_degree(a), fb = alg.filtration_degree(b);
            if (fa + fb > max_filtration) continue;
            // only when the leading symbols do not annihilate each other
            if ((alg.gr_symbol(a).leading * alg.gr_symbol(b).leading).is_zero()) continue;
            auto k = G.convolve(G.image(a), G.image(b));
            if (G.filtration_degree(k) != fa + fb) w = alg.render(a) + " * " + alg.render(b);
        }
    out.add("filtration is additive on leading terms", w.empty(), w);

    // injectivity: images of the normal words are linearly independent
    {
        std::map<std::string, std::size_t> cols;
        std::vector<std::vector<std::pair<std::string, Rational>>> rows;
        for (const auto& a : words) {
            auto k = G.image(a);
            std::vector<std::pair<std::string, Rational>> row;
            for (const auto& [key, parts] : k.terms())
                for (const auto& [beta, p] : parts)
                    for (const auto& [m, c] : p.terms()) {
                        std::ostringstream id;
                        id << key.forms.str() << "|" << key.gauss.str() << "|";
                        for (auto b : beta) id << b << ",";
                        id << "|" << to_string(SuperPolynomial::monomial(p.table(), m));
                        row.emplace_back(id.str(), c);
                        cols.emplace(id.str(), cols.size());
                    }
            rows.push_back(std::move(row));
        }
        QMatrix M(rows.size(), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (const auto& [id, c] : rows[r]) M(r, cols.at(id)) += c;
        std::size_t rk = rows.empty() ? 0 : rank(M);
        out.add("isomorphism is injective on normal words", rk == rows.size(),
                std::to_string(rk) + " of " + std::to_string(rows.size()));
    }
    return out;
}

}  // namespace oddsym

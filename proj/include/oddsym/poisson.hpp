#pragma once

/**
 * @file poisson.hpp
 * @brief Odd Poisson structures as odd quadratic functions on T*X.
 *
 * The canonical even bracket on T*X is the one forced by
 *   {z^i, p_j} = delta^i_j,  {z,z} = {p,p} = 0,
 * graded antisymmetry and the graded Leibniz rule. In components
 *
 *   {F, G} = sum_i  dR_{z_i} F * dL_{p_i} G  -  (-1)^{|z_i|} dR_{p_i} F * dL_{z_i} G.
 *
 * The odd bracket of functions on X is the derived bracket
 *   {f, g}_pi = (-1)^{|f|} {{pi, f}, g} restricted to p = 0.
 * Everything else (graded symmetry, odd Leibniz, Jacobi) is tested rather
 * than assumed.
 */

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oddsym/polynomial.hpp"

namespace oddsym {

/// Base coordinates z^i together with conjugate momenta p_i.
class CotangentChart {
public:
    explicit CotangentChart(TablePtr base, std::string momentum_prefix = "p_") : base_(std::move(base)) {
        std::vector<Variable> vars = base_->variables();
        const std::size_t n = base_->size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& z = (*base_)[i];
            vars.push_back(Variable{momentum_prefix + z.name, z.parity, -z.degree, Role::Momentum});
        }
        full_ = VariableTable::make(std::move(vars), base_->graded());
    }

    const TablePtr& base() const { return base_; }
    const TablePtr& full() const { return full_; }
    std::size_t dimension() const { return base_->size(); }
    std::size_t coordinate(std::size_t i) const { return i; }
    std::size_t momentum(std::size_t i) const { return base_->size() + i; }

    std::vector<std::size_t> momenta() const {
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < dimension(); ++i) m.push_back(momentum(i));
        return m;
    }

    /// Function on X viewed on T*X.
    SuperPolynomial lift(const SuperPolynomial& f) const {
        if (same_table(f.table(), full_)) return f;
        require_same_table(f.table(), base_, "cotangent lift");
        SuperPolynomial r(full_);
        for (const auto& [m, c] : f.terms()) {
            Monomial out(full_->size());
            for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i];
            r.add_term(out, c);
        }
        return r;
    }

    /// Restriction to the zero section p = 0.
    SuperPolynomial zero_section(const SuperPolynomial& F) const {
        require_same_table(F.table(), full_, "zero-section restriction");
        SuperPolynomial r(base_);
        const std::size_t n = base_->size();
        for (const auto& [m, c] : F.terms()) {
            bool has_p = false;
            for (std::size_t i = n; i < m.size(); ++i) has_p |= m[i] != 0;
            if (has_p) continue;
            Monomial out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = m[i];
            r.add_term(out, c);
        }
        return r;
    }

    /// Rejects elements that depend on the momenta.
    SuperPolynomial require_function(const SuperPolynomial& f, const char* what) const {
        if (same_table(f.table(), base_)) return f;
        require_same_table(f.table(), full_, what);
        if (!f.free_of(momenta())) throw DomainError(std::string(what) + ": argument depends on momenta");
        return zero_section(f);
    }

    bool operator==(const CotangentChart& o) const { return same_table(full_, o.full_); }

private:
    TablePtr base_;
    TablePtr full_;
};

inline SuperPolynomial canonical_bracket(const CotangentChart& chart, const SuperPolynomial& F,
                                         const SuperPolynomial& G) {
    require_same_table(F.table(), chart.full(), "canonical bracket");
    require_same_table(G.table(), chart.full(), "canonical bracket");
    SuperPolynomial r(chart.full());
    const auto& t = *chart.full();
    for (std::size_t i = 0; i < chart.dimension(); ++i) {
        const std::size_t z = chart.coordinate(i), p = chart.momentum(i);
        auto dpG = poly_deriv(p, G);
        if (!dpG.is_zero()) {
            auto dzF = poly_right_deriv(z, F);
            if (!dzF.is_zero()) r += dzF * dpG;
        }
        auto dzG = poly_deriv(z, G);
        if (!dzG.is_zero()) {
            auto dpF = poly_right_deriv(p, F);
            if (!dpF.is_zero()) {
                auto term = dpF * dzG;
                if (t.is_odd(z))
                    r += term;
                else
                    r -= term;
            }
        }
    }
    return r;
}

/// A vector field sum_i X^i d/dz^i on X, with X^i functions on X.
struct HomogeneousVectorField {
    TablePtr base;
    std::vector<SuperPolynomial> components;
    Parity parity = Parity::Even;

    static HomogeneousVectorField zero(TablePtr base, Parity parity) {
        HomogeneousVectorField v{base, {}, parity};
        for (std::size_t i = 0; i < base->size(); ++i) v.components.emplace_back(base);
        return v;
    }

    void validate() const {
        if (components.size() != base->size()) throw StructuralError("vector field: wrong number of components");
        for (std::size_t i = 0; i < components.size(); ++i) {
            require_same_table(components[i].table(), base, "vector field component");
            if (components[i].is_zero()) continue;
            auto p = components[i].parity();
            if (!p || *p != parity + base->parity(i)) {
                throw ParityError("vector field component along '" + (*base)[i].name + "' has the wrong parity");
            }
        }
    }

    /// X(g) = sum_i X^i * dL_i g.
    SuperPolynomial apply(const SuperPolynomial& g) const {
        SuperPolynomial r(base);
        for (std::size_t i = 0; i < components.size(); ++i)
            if (!components[i].is_zero()) r += components[i] * poly_deriv(i, g);
        return r;
    }

    /// Quadratic-in-momenta packaging sum_i X^i p_i on T*X.
    SuperPolynomial as_linear_function(const CotangentChart& chart) const {
        SuperPolynomial r(chart.full());
        for (std::size_t i = 0; i < components.size(); ++i)
            r += chart.lift(components[i]) * SuperPolynomial::variable(chart.full(), chart.momentum(i));
        return r;
    }

    bool operator==(const HomogeneousVectorField& o) const {
        return same_table(base, o.base) && components == o.components;
    }
};

/// Structure constants c^k_{ij} of a (not necessarily Lie) bracket on an
/// n-dimensional space; only the antisymmetry is enforced.
struct LieStructureConstants {
    std::size_t dim = 0;
    std::vector<Rational> c;  // c[(i*dim + j)*dim + k] = c^k_{ij}

    explicit LieStructureConstants(std::size_t n = 0) : dim(n), c(n * n * n, Rational(0)) {}

    Rational& at(std::size_t i, std::size_t j, std::size_t k) { return c[(i * dim + j) * dim + k]; }
    const Rational& at(std::size_t i, std::size_t j, std::size_t k) const { return c[(i * dim + j) * dim + k]; }

    /// Sets c^k_{ij} and c^k_{ji} = -c^k_{ij}.
    void set(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
        if (i == j && sgn(v) != 0) throw DomainError("structure constants: c^k_{ii} must vanish");
        at(i, j, k) = v;
        at(j, i, k) = -v;
    }

    void validate() const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    if (at(i, j, k) != -at(j, i, k)) throw DomainError("structure constants are not antisymmetric");
    }

    /// Jacobiator sum over cyclic (i,j,k) of [[e_i,e_j],e_k], component l.
    bool satisfies_jacobi() const {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    for (std::size_t l = 0; l < dim; ++l) {
                        Rational s = 0;
                        for (std::size_t m = 0; m < dim; ++m) {
                            s += at(i, j, m) * at(m, k, l);
                            s += at(j, k, m) * at(m, i, l);
                            s += at(k, i, m) * at(m, j, l);
                        }
                        if (sgn(s) != 0) return false;
                    }
        return true;
    }

    static LieStructureConstants abelian(std::size_t n) { return LieStructureConstants(n); }

    /// [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 (the real form so(3) ~ su(2) of sl2).
    static LieStructureConstants sl2() {
        LieStructureConstants c(3);
        c.set(0, 1, 2, 1);
        c.set(1, 2, 0, 1);
        c.set(2, 0, 1, 1);
        return c;
    }

    /// Split basis h, e, f: [h,e]=2e, [h,f]=-2f, [e,f]=h.
    static LieStructureConstants sl2_split() {
        LieStructureConstants c(3);
        c.set(0, 1, 1, 2);
        c.set(0, 2, 2, -2);
        c.set(1, 2, 0, 1);
        return c;
    }

    /// [e1,e2]=e3, everything else zero.
    static LieStructureConstants heisenberg() {
        LieStructureConstants c(3);
        c.set(0, 1, 2, 1);
        return c;
    }
};

class OddPoissonStructure {
public:
    /// Validates: pi odd, homogeneous quadratic in momenta, and (if given)
    /// of the declared total degree.
    OddPoissonStructure(CotangentChart chart, SuperPolynomial pi, std::optional<int> declared_degree = std::nullopt)
        : chart_(std::move(chart)), pi_(std::move(pi)) {
        if (!pi_.table()) pi_ = SuperPolynomial(chart_.full());
        require_same_table(pi_.table(), chart_.full(), "odd Poisson structure");
        if (!pi_.is_zero()) {
            auto p = pi_.parity();
            if (!p || *p != Parity::Odd) throw ParityError("odd Poisson structure must be parity-odd");
        }
        const auto moms = chart_.momenta();
        const auto& t = *chart_.full();
        for (const auto& [m, c] : pi_.terms()) {
            unsigned pdeg = 0;
            for (auto i : moms) pdeg += m[i];
            if (pdeg != 2) throw DomainError("odd Poisson structure must be quadratic in momenta");
            if (declared_degree && t.graded()) {
                int d = 0;
                for (std::size_t i = 0; i < m.size(); ++i) d += t[i].degree * m[i];
                if (d != *declared_degree) {
                    throw DomainError("odd Poisson structure has degree " + std::to_string(d) + ", expected " +
                                      std::to_string(*declared_degree));
                }
            }
        }
        compute_components();
    }

    /// Builds pi from prescribed brackets {z^i, z^j} (i <= j suffices; the
    /// other order follows from graded symmetry and is cross-checked).
    static OddPoissonStructure from_brackets(const CotangentChart& chart,
                                             const std::map<std::pair<std::size_t, std::size_t>, SuperPolynomial>& b,
                                             std::optional<int> declared_degree = std::nullopt) {
        const auto& base = *chart.base();
        const std::size_t n = chart.dimension();
        std::map<std::pair<std::size_t, std::size_t>, SuperPolynomial> upper;
        for (const auto& [key, val] : b) {
            auto [i, j] = key;
            if (i >= n || j >= n) throw StructuralError("bracket entry refers to unknown coordinate");
            SuperPolynomial v = chart.require_function(val, "bracket entry");
            if (!v.is_zero()) {
                auto p = v.parity();
                Parity want = base.parity(i) + base.parity(j) + Parity::Odd;
                if (!p || *p != want) {
                    throw ParityError("bracket {" + base[i].name + "," + base[j].name + "} has the wrong parity");
                }
            }
            if (i > j) {
                // {z_j, z_i} = -(-1)^{(|z_i|+1)(|z_j|+1)} {z_i, z_j}
                int s = -koszul(base.parity(i) + Parity::Odd, base.parity(j) + Parity::Odd);
                v *= Rational(s);
                std::swap(i, j);
            }
            auto [it, inserted] = upper.emplace(std::make_pair(i, j), v);
            if (!inserted && !(it->second == v)) {
                throw DomainError("bracket entries for {" + base[i].name + "," + base[j].name +
                                  "} are inconsistent with graded symmetry");
            }
        }
        SuperPolynomial pi(chart.full());
        for (const auto& [key, val] : upper) {
            if (val.is_zero()) continue;
            auto [a, bb] = key;
            auto pp = SuperPolynomial::variable(chart.full(), chart.momentum(a)) *
                      SuperPolynomial::variable(chart.full(), chart.momentum(bb));
            if (pp.is_zero()) throw DomainError("bracket {" + base[a].name + "," + base[a].name + "} of an odd coordinate with itself must vanish");
            Rational s = unit_bracket(chart, pp, a, bb);
            if (sgn(s) == 0) throw DomainError("cannot realize bracket entry");
            pi += chart.lift(val) * pp * Rational(1 / s);
        }
        OddPoissonStructure result(chart, pi, declared_degree);
        for (const auto& [key, val] : upper) {
            if (!(result.coordinate_bracket(key.first, key.second) == val)) {
                throw DomainError("bracket data is not realizable by a quadratic function");
            }
        }
        return result;
    }

    /// Kirillov-Kostant structure on Pi g*: {theta_i, theta_j} = sum_k c^k_{ij} theta_k.
    static OddPoissonStructure kirillov_kostant(const CotangentChart& chart, const LieStructureConstants& c) {
        c.validate();
        if (chart.dimension() != c.dim) throw StructuralError("Kirillov-Kostant: dimension mismatch");
        for (std::size_t i = 0; i < c.dim; ++i)
            if (!chart.base()->is_odd(i)) throw ParityError("Kirillov-Kostant coordinates must be odd");
        std::map<std::pair<std::size_t, std::size_t>, SuperPolynomial> b;
        for (std::size_t i = 0; i < c.dim; ++i)
            for (std::size_t j = i + 1; j < c.dim; ++j) {
                SuperPolynomial v(chart.base());
                for (std::size_t k = 0; k < c.dim; ++k)
                    if (sgn(c.at(i, j, k)) != 0) v += SuperPolynomial::variable(chart.base(), k) * c.at(i, j, k);
                b.emplace(std::make_pair(i, j), v);
            }
        return from_brackets(chart, b, chart.base()->graded() ? std::optional<int>(-1) : std::nullopt);
    }

    /// Darboux structure for pairs (x_i, xi_i): {x_i, xi_i} = signs[i].
    static OddPoissonStructure darboux(const CotangentChart& chart, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                       const std::vector<int>& signs = {}) {
        std::map<std::pair<std::size_t, std::size_t>, SuperPolynomial> b;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            int s = signs.empty() ? 1 : signs[k];
            b.emplace(pairs[k], SuperPolynomial::constant(chart.base(), s));
        }
        return from_brackets(chart, b);
    }

    const CotangentChart& chart() const { return chart_; }
    const SuperPolynomial& pi() const { return pi_; }
    const TablePtr& base() const { return chart_.base(); }

    /// {z^i, z^j}_pi.
    const SuperPolynomial& coordinate_bracket(std::size_t i, std::size_t j) const {
        return components_[i * chart_.dimension() + j];
    }

    bool is_zero() const { return pi_.is_zero(); }

private:
    static Rational unit_bracket(const CotangentChart& chart, const SuperPolynomial& pp, std::size_t a, std::size_t b) {
        auto za = SuperPolynomial::variable(chart.full(), chart.coordinate(a));
        auto zb = SuperPolynomial::variable(chart.full(), chart.coordinate(b));
        auto v = chart.zero_section(canonical_bracket(chart, canonical_bracket(chart, pp, za), zb));
        if (!v.is_constant()) throw DomainError("unexpected non-constant unit bracket");
        return chart.base()->is_odd(a) ? Rational(-v.constant_term()) : v.constant_term();
    }

    void compute_components() {
        const std::size_t n = chart_.dimension();
        components_.clear();
        components_.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            auto h = canonical_bracket(chart_, pi_, SuperPolynomial::variable(chart_.full(), chart_.coordinate(i)));
            if (chart_.base()->is_odd(i)) h *= Rational(-1);
            for (std::size_t j = 0; j < n; ++j) {
                auto zj = SuperPolynomial::variable(chart_.full(), chart_.coordinate(j));
                components_.push_back(chart_.zero_section(canonical_bracket(chart_, h, zj)));
            }
        }
    }

    CotangentChart chart_;
    SuperPolynomial pi_;
    std::vector<SuperPolynomial> components_;
};

/// Derived bracket (-1)^{|f|} {{pi, f}, g}|_{p=0} of functions on X.
///
/// The bare derived bracket is graded symmetric with sign (-1)^{|f||g|}; the
/// extra (-1)^{|f|} turns it into the shifted convention
/// {f,g} = -(-1)^{(|f|+1)(|g|+1)} {g,f} without touching Leibniz in g.
/// Inhomogeneous f is split into parity parts.
inline SuperPolynomial odd_bracket(const OddPoissonStructure& pi, const SuperPolynomial& f, const SuperPolynomial& g) {
    const auto& chart = pi.chart();
    auto fb = chart.require_function(f, "odd bracket");
    auto G = chart.lift(chart.require_function(g, "odd bracket"));
    auto derived = [&](const SuperPolynomial& h) {
        return chart.zero_section(canonical_bracket(chart, canonical_bracket(chart, pi.pi(), chart.lift(h)), G));
    };
    auto r = derived(fb.even_part());
    r -= derived(fb.odd_part());
    return r;
}

struct JacobiResult {
    bool ok = true;
    SuperPolynomial witness;  // {pi, pi} when nonzero
};

inline JacobiResult jacobi_check(const OddPoissonStructure& pi) {
    auto w = canonical_bracket(pi.chart(), pi.pi(), pi.pi());
    return JacobiResult{w.is_zero(), w};
}

/// X_f with components X_f^i = {f, z^i}_pi; parity |f| + 1.
inline HomogeneousVectorField hamiltonian_field(const OddPoissonStructure& pi, const SuperPolynomial& f) {
    auto fb = pi.chart().require_function(f, "Hamiltonian field");
    Parity p = fb.parity_or(Parity::Even) + Parity::Odd;
    auto X = HomogeneousVectorField::zero(pi.base(), p);
    for (std::size_t i = 0; i < pi.chart().dimension(); ++i)
        X.components[i] = odd_bracket(pi, fb, SuperPolynomial::variable(pi.base(), i));
    return X;
}

/// A triple (z_i, z_j, z_k) of coordinates on which the odd Jacobi identity
/// {f,{g,h}} = {{f,g},h} + (-1)^{(|f|+1)(|g|+1)} {g,{f,h}} fails.
struct JacobiTriple {
    std::size_t i = 0, j = 0, k = 0;
    SuperPolynomial defect;
};

inline SuperPolynomial odd_jacobiator(const OddPoissonStructure& pi, const SuperPolynomial& f, const SuperPolynomial& g,
                                      const SuperPolynomial& h) {
    Parity pf = f.parity_or(Parity::Even), pg = g.parity_or(Parity::Even);
    auto lhs = odd_bracket(pi, f, odd_bracket(pi, g, h));
    auto rhs = odd_bracket(pi, odd_bracket(pi, f, g), h) +
               odd_bracket(pi, g, odd_bracket(pi, f, h)) * Rational(koszul(pf + Parity::Odd, pg + Parity::Odd));
    return lhs - rhs;
}

inline std::optional<JacobiTriple> find_jacobi_violation(const OddPoissonStructure& pi) {
    const std::size_t n = pi.chart().dimension();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                auto d = odd_jacobiator(pi, SuperPolynomial::variable(pi.base(), i), SuperPolynomial::variable(pi.base(), j),
                                        SuperPolynomial::variable(pi.base(), k));
                if (!d.is_zero()) return JacobiTriple{i, j, k, d};
            }
    return std::nullopt;
}

/// Result of expanding {pi~, pi~} for pi~ = pi + Q^i p_i p_t + phi p_t^2.
struct MasterEquationExpansion {
    CotangentChart extended;               // X x R[2] with coordinates (z, t; p, p_t)
    std::vector<SuperPolynomial> by_power;  // coefficient of p_t^k, k = 0..4, as functions on T*X
    bool all_zero() const {
        for (const auto& c : by_power)
            if (!c.is_zero()) return false;
        return true;
    }
};

inline MasterEquationExpansion master_equation_expand(const OddPoissonStructure& pi, const HomogeneousVectorField& Q,
                                                      const SuperPolynomial& phi_in) {
    const auto& chart = pi.chart();
    const auto& base = pi.base();
    if (!same_table(Q.base, base)) throw StructuralError("master equation: Q lives on a different base");
    Q.validate();
    bool q_zero = true;
    for (const auto& c : Q.components) q_zero &= c.is_zero();
    if (!q_zero && Q.parity != Parity::Odd) throw ParityError("master equation: Q must be odd");
    auto phi = chart.require_function(phi_in, "master equation potential");
    if (!phi.is_zero() && phi.parity() != Parity::Odd) throw ParityError("master equation: phi must be odd");
    if (base->graded()) {
        auto check_degree = [&](const SuperPolynomial& f, int want, const char* what) {
            for (const auto& [m, c] : f.terms()) {
                int d = 0;
                for (std::size_t i = 0; i < m.size(); ++i) d += (*base)[i].degree * m[i];
                if (d != want) throw DomainError(std::string("master equation: ") + what + " has the wrong degree");
            }
        };
        check_degree(phi, 3, "phi");
        for (std::size_t i = 0; i < Q.components.size(); ++i) check_degree(Q.components[i], 1 + (*base)[i].degree, "Q");
    }

    // Extended base: z..., t (even, degree 2).
    std::vector<Variable> vars = base->variables();
    std::string tname = "t";
    while (base->find(tname)) tname += "'";
    vars.push_back(Variable{tname, Parity::Even, 2, Role::FormalTime});
    auto ext_base = VariableTable::make(vars, base->graded());
    CotangentChart ext(ext_base);
    const std::size_t n = base->size();

    auto into_ext = [&](const SuperPolynomial& F) {
        // F lives on chart.full(): (z_0..z_{n-1}, p_0..p_{n-1}).
        SuperPolynomial r(ext.full());
        for (const auto& [m, c] : F.terms()) {
            Monomial out(ext.full()->size());
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = m[i];
                out[ext.momentum(i)] = m[chart.momentum(i)];
            }
            r.add_term(out, c);
        }
        return r;
    };

    auto pt = SuperPolynomial::variable(ext.full(), ext.momentum(n));
    SuperPolynomial tilde = into_ext(pi.pi());
    tilde += into_ext(Q.as_linear_function(chart)) * pt;
    tilde += into_ext(chart.lift(phi)) * pt * pt;
    auto w = canonical_bracket(ext, tilde, tilde);

    MasterEquationExpansion out{ext, {}};
    for (unsigned k = 0; k <= 4; ++k) {
        SuperPolynomial coeff(chart.full());
        for (const auto& [m, c] : w.terms()) {
            if (m[ext.momentum(n)] != k) continue;
            if (m[n] != 0) throw DomainError("master equation: unexpected dependence on t");
            Monomial o(chart.full()->size());
            for (std::size_t i = 0; i < n; ++i) {
                o[i] = m[i];
                o[chart.momentum(i)] = m[ext.momentum(i)];
            }
            coeff.add_term(o, c);
        }
        out.by_power.push_back(coeff);
    }
    return out;
}

/// Chevalley-Eilenberg type field Q^k = 1/2 sum_{ij} c^k_{ij} z_i z_j on the
/// same odd coordinates.
inline HomogeneousVectorField chevalley_eilenberg_field(const TablePtr& base, const LieStructureConstants& c) {
    auto Q = HomogeneousVectorField::zero(base, Parity::Odd);
    for (std::size_t k = 0; k < c.dim; ++k)
        for (std::size_t i = 0; i < c.dim; ++i)
            for (std::size_t j = 0; j < c.dim; ++j)
                if (sgn(c.at(i, j, k)) != 0)
                    Q.components[k] += SuperPolynomial::variable(base, i) * SuperPolynomial::variable(base, j) *
                                       Rational(c.at(i, j, k) / 2);
    return Q;
}

}  // namespace oddsym

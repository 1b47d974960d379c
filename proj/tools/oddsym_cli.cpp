// oddsym: command-line entry points for the verification suites.
//
// Exit codes: 0 success, 1 a verification failed (witness printed),
// 2 parse error, 3 mathematical domain error.

#include <algorithm>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oddsym/io.hpp"
#include "oddsym/verify.hpp"

using namespace oddsym;

namespace {

enum Exit { Ok = 0, VerificationFailed = 1, ParseFailure = 2, DomainFailure = 3 };

struct Common {
    SuiteOptions suite;
    std::string file, expr, report = "text";
    std::size_t dimension = 0;
};

DefinitionFile load(const Common& c, bool required = true) {
    if (c.file.empty()) {
        if (required) throw ParseError("this command needs --file");
        return {};
    }
    return read_definition_file(c.file);
}

std::optional<Expr> expression_of(const Common& c, const DefinitionFile& f) {
    if (!c.expr.empty()) return parse_expression(c.expr);
    return f.expression;
}

bool has_distribution_nodes(const Expr& e) {
    if (e.kind == Expr::Kind::Delta || e.kind == Expr::Kind::Exp) return true;
    for (const auto& a : e.args)
        if (has_distribution_nodes(a)) return true;
    return false;
}

int print_suite(const std::string& name, const SuiteResult& r) {
    std::cout << (r.ok ? "PASS " : "FAIL ") << name << " (" << r.checked << " checks)\n";
    if (!r.detail.empty()) std::cout << "  " << (r.ok ? "" : "witness: ") << r.detail << "\n";
    return r.ok ? Ok : VerificationFailed;
}

int print_report(const DemoReport& rep) {
    std::cout << rep.str();
    return rep.ok() ? Ok : VerificationFailed;
}

int cmd_normalize(const Common& c) {
    auto f = load(c, c.expr.empty());
    auto e = expression_of(c, f);
    if (!e) throw ParseError("no expression: give --expr or an [expression] section");
    if (has_distribution_nodes(*e)) {
        auto ch = f.darboux_chart();
        std::cout << evaluate_distribution(ch, *e).render() << "\n";
        return Ok;
    }
    DeformedAlgebra alg(f.poisson());
    std::cout << alg.render(evaluate_deformed(alg, *e)) << "\n";
    return Ok;
}

int cmd_check_poisson(const Common& c) {
    auto f = load(c);
    auto pi = f.poisson();
    auto j = jacobi_check(pi);
    std::cout << "pi = " << to_string(pi.pi()) << "\n";
    if (j.ok) {
        std::cout << "PASS Jacobi identity: {pi, pi} = 0\n";
        return Ok;
    }
    std::cout << "FAIL Jacobi identity\n  witness: {pi, pi} = " << to_string(j.witness) << "\n";
    if (auto t = find_jacobi_violation(pi)) {
        const auto& b = *pi.base();
        std::cout << "  on coordinates (" << b[t->i].name << ", " << b[t->j].name << ", " << b[t->k].name
                  << "): jacobiator = " << to_string(t->defect) << "\n";
    }
    return VerificationFailed;
}

int cmd_check_deformation(const Common& c) {
    if (c.file.empty()) {
        std::ostringstream log;
        auto r = check_deformations(c.suite, &log);
        std::cout << log.str();
        return print_suite("catalog structures pass and the perturbed structure is rejected", r);
    }
    auto f = load(c);
    auto r = check_deformation(f.poisson(), c.suite);
    return print_suite("[f, dg] = {f, g}, associativity and d^2 = 0", r);
}

int cmd_bv_verify(const Common& c) {
    int rc = Ok;
    if (!c.file.empty()) {
        auto f = load(c);
        auto ch = f.darboux_chart();
        for (const auto& spec : f.lagrangians) {
            auto L = f.lagrangian(spec.name, ch);
            auto d = delta_L(L);
            std::cout << "delta_" << spec.name << " = " << d.render() << "\n";
            SuiteResult r;
            r.checked = 2;
            if (!bv_delta(d).is_zero()) r.fail("Delta delta_L = " + bv_delta(d).render());
            else if (!(delta_L(L, FrameCompletion::Random, c.suite.seed) == d)) r.fail("adapted frames disagree");
            rc = std::max(rc, print_suite("Delta delta_" + spec.name + " = 0, frame independent", r));
        }
        if (auto e = expression_of(c, f)) {
            auto s = evaluate_distribution(ch, *e);
            std::cout << "s = " << s.render() << "\nDelta s = " << bv_delta(s).render() << "\n";
            for (const auto& spec : f.lagrangians) {
                std::cout << "(delta_" << spec.name << ", s) = ";
                try {
                    std::cout << pairing(delta_L(f.lagrangian(spec.name, ch)), s).str() << "\n";
                } catch (const DomainError& e) {
                    // a product of distributions may be undefined; not a failure of the file
                    std::cout << "undefined (" << e.what() << ")\n";
                }
            }
        }
        return rc;
    }
    for (const auto& cr : acceptance_criteria()) {
        if (cr.id > 6 && cr.id != 11) continue;
        auto t = run_timed(cr, c.suite);
        rc = std::max(rc, print_suite(cr.title, t.result));
    }
    return rc;
}

int cmd_compose(const Common& c) {
    auto f = load(c);
    if (f.lagrangians.size() != 2) throw ParseError("compose needs exactly two Lagrangians in [lagrangian]");
    auto [c1, c2] = f.relation_charts();
    const auto& n1 = f.lagrangians[0].name;
    const auto& n2 = f.lagrangians[1].name;
    auto K1 = f.lagrangian(n1, c1), K2 = f.lagrangian(n2, c2);
    auto L = compose_relations(K1, K2, f.split[1]);
    auto lhs = compose(delta_L(K1), delta_L(K2), f.split[1]);
    auto rhs = delta_L(L);
    std::cout << n1 << " = " << K1.str() << "\n" << n2 << " = " << K2.str() << "\n";
    std::cout << n1 << " o " << n2 << " = " << L.str() << (L.orientation_sign() < 0 ? " (reversed orientation)" : "") << "\n";
    std::cout << "delta_" << n1 << " = " << delta_L(K1).render() << "\n";
    std::cout << "delta_" << n2 << " = " << delta_L(K2).render() << "\n";
    std::cout << "composite of deltas = " << lhs.render() << "\n";
    std::cout << "delta of composite  = " << rhs.render() << "\n";
    SuiteResult r;
    r.checked = 1;
    if (!(lhs == rhs)) r.fail("compose(delta_" + n1 + ", delta_" + n2 + ") - delta_{" + n1 + " o " + n2 + "} = " + (lhs - rhs).render());
    return print_suite("functoriality with constant 1", r);
}

int cmd_crossed_product(const Common& c) {
    LieStructureConstants lie = LieStructureConstants::sl2();
    if (!c.file.empty()) {
        auto f = load(c);
        if (!f.lie) throw ParseError("crossed-product needs a [lie] section");
        lie = *f.lie;
    }
    return print_report(crossed_product_verify(lie, c.suite.samples_or(20), c.suite.seed));
}

int cmd_groupoid(const Common& c) {
    std::size_t n = c.dimension ? c.dimension : 1;
    return print_report(pair_groupoid_demo(n, c.suite.degree_or(2), n == 1 ? 2 : 1));
}

int cmd_fourier(const Common& c) {
    int rc = Ok;
    std::vector<std::size_t> dims = c.dimension ? std::vector<std::size_t>{c.dimension} : std::vector<std::size_t>{1, 2};
    for (auto n : dims) rc = std::max(rc, print_report(fourier_check(n, c.suite.samples_or(100), c.suite.degree_or(4), c.suite.seed, 6)));
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oddsym: odd symplectic and BV verification tools"};
    app.require_subcommand(1);
    Common c;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.suite.seed, "seed for randomized suites")->capture_default_str();
        sub->add_option("--samples", c.suite.samples, "number of random samples (0: suite default)");
        sub->add_option("--max-degree", c.suite.max_degree, "degree cap for random inputs (0: suite default)");
        sub->add_option("--file", c.file, "definition file");
        sub->add_option("--expr", c.expr, "expression (overrides [expression])");
        sub->add_option("--report", c.report, "report format")->check(CLI::IsMember({"text"}))->capture_default_str();
        return sub;
    };
    std::map<CLI::App*, std::function<int(const Common&)>> handlers;
    auto add = [&](const char* name, const char* help, std::function<int(const Common&)> fn) {
        auto* sub = common(app.add_subcommand(name, help));
        handlers[sub] = std::move(fn);
        return sub;
    };
    add("normalize", "print the normal form of an expression", cmd_normalize);
    add("check-poisson", "check the Jacobi identity {pi, pi} = 0", cmd_check_poisson);
    add("check-deformation", "check [f, dg] = {f, g}, associativity and d^2 = 0", cmd_check_deformation);
    add("bv-verify", "BV Laplacian and delta_L suites", cmd_bv_verify);
    add("compose", "compose two Lagrangian relations and their delta densities", cmd_compose);
    add("crossed-product", "Lie algebra crossed product relations", cmd_crossed_product);
    add("demo-groupoid", "pair groupoid convolution algebra", cmd_groupoid)
        ->add_option("--dimension", c.dimension, "n = 1 or 2")
        ->check(CLI::Range(1, 2));
    add("fourier-check", "odd Fourier transform checks", cmd_fourier)
        ->add_option("--dimension", c.dimension, "n = 1, 2 or 3")
        ->check(CLI::Range(1, 3));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : ParseFailure;
    }
    try {
        for (auto& [sub, fn] : handlers)
            if (sub->parsed()) return fn(c);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    } catch (const StructuralError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return ParseFailure;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return DomainFailure;
    }
    return Ok;
}

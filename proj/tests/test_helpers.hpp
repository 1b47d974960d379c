#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oddsym/poisson.hpp"

namespace testing_helpers {

using namespace oddsym;

inline CotangentChart darboux_chart(std::size_t pairs) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(even_var(pairs == 1 ? "x" : "x" + std::to_string(i)));
    for (std::size_t i = 1; i <= pairs; ++i) vars.push_back(odd_var(pairs == 1 ? "xi" : "xi" + std::to_string(i)));
    return CotangentChart(VariableTable::make(vars));
}

inline OddPoissonStructure darboux_pi(std::size_t pairs) {
    auto chart = darboux_chart(pairs);
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < pairs; ++i) p.emplace_back(i, pairs + i);
    return OddPoissonStructure::darboux(chart, p);
}

inline CotangentChart kk_chart(std::size_t n) {
    std::vector<Variable> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back(Variable{"th" + std::to_string(i), Parity::Odd, 1, Role::Coordinate});
    return CotangentChart(VariableTable::make(vars, true));
}

inline OddPoissonStructure kk_pi(const LieStructureConstants& c) {
    return OddPoissonStructure::kirillov_kostant(kk_chart(c.dim), c);
}

/// sl2 with one constant changed so that Jacobi fails.
inline LieStructureConstants perturbed_sl2() {
    auto c = LieStructureConstants::sl2();
    c.set(0, 1, 0, 1);
    return c;
}

}  // namespace testing_helpers

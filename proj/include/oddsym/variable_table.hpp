#pragma once

/**
 * @file variable_table.hpp
 * @brief Ordered, immutable declarations of even/odd generators.
 *
 * Every polynomial carries a shared pointer to the table it lives over. The
 * order of the table is the monomial order: odd factors of a monomial are
 * kept sorted by table index, and printing follows the same order.
 */

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oddsym/errors.hpp"

namespace oddsym {

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
    return static_cast<Parity>(static_cast<int>(a) ^ static_cast<int>(b));
}
inline int as_int(Parity p) { return static_cast<int>(p); }
inline Parity parity_of(int p) { return (p & 1) ? Parity::Odd : Parity::Even; }
/// (-1)^(a*b) for parities.
inline int koszul(Parity a, Parity b) { return (as_int(a) & as_int(b)) ? -1 : 1; }

enum class Role : std::uint8_t { Coordinate, Momentum, DSymbol, FormalTime, Auxiliary };

struct Variable {
    std::string name;
    Parity parity = Parity::Even;
    int degree = 0;
    Role role = Role::Coordinate;

    bool operator==(const Variable&) const = default;
};

class VariableTable;
using TablePtr = std::shared_ptr<const VariableTable>;

class VariableTable {
public:
    /// `graded` declares that the degrees are meaningful; then parity must
    /// agree with degree mod 2 for every variable.
    static TablePtr make(std::vector<Variable> vars, bool graded = false) {
        return TablePtr(new VariableTable(std::move(vars), graded));
    }

    std::size_t size() const { return vars_.size(); }
    const Variable& operator[](std::size_t i) const { return vars_[i]; }
    const std::vector<Variable>& variables() const { return vars_; }
    bool graded() const { return graded_; }

    Parity parity(std::size_t i) const { return vars_[i].parity; }
    bool is_odd(std::size_t i) const { return vars_[i].parity == Parity::Odd; }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index(const std::string& name) const {
        auto i = find(name);
        if (!i) throw StructuralError("unknown variable '" + name + "'");
        return *i;
    }

    const std::vector<std::size_t>& odd_indices() const { return odd_; }

    bool operator==(const VariableTable& o) const {
        return graded_ == o.graded_ && vars_ == o.vars_;
    }

private:
    VariableTable(std::vector<Variable> vars, bool graded) : vars_(std::move(vars)), graded_(graded) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const auto& v = vars_[i];
            if (v.name.empty()) throw StructuralError("variable with empty name");
            if (!index_.emplace(v.name, i).second) {
                throw StructuralError("duplicate variable name '" + v.name + "'");
            }
            if (graded_ && parity_of(v.degree) != v.parity) {
                throw ParityError("variable '" + v.name + "' has degree " + std::to_string(v.degree) +
                                  " inconsistent with its parity");
            }
            if (v.parity == Parity::Odd) odd_.push_back(i);
        }
    }

    std::vector<Variable> vars_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> odd_;
    bool graded_ = false;
};

inline bool same_table(const TablePtr& a, const TablePtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_table(const TablePtr& a, const TablePtr& b, const char* what) {
    if (!same_table(a, b)) throw StructuralError(std::string(what) + ": variable tables differ");
}

/// Convenience constructors for the common cases.
inline Variable even_var(std::string name, Role role = Role::Coordinate) {
    return Variable{std::move(name), Parity::Even, 0, role};
}
inline Variable odd_var(std::string name, Role role = Role::Coordinate) {
    return Variable{std::move(name), Parity::Odd, 1, role};
}

}  // namespace oddsym

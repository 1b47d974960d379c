#pragma once

/**
 * @file linalg.hpp
 * @brief Dense exact-rational matrices: reduced row echelon form, rank,
 *        determinant, inverse, kernel.
 *
 * All rank conditions in the library (Lagrangian, transversality, wavefront
 * independence) go through `rref`; nothing here uses a tolerance.
 */

#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oddsym/errors.hpp"
#include "oddsym/rational.hpp"

namespace oddsym {

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
    QMatrix(std::size_t rows, std::size_t cols, std::initializer_list<Rational> values) : QMatrix(rows, cols) {
        if (values.size() != rows * cols) throw StructuralError("QMatrix: wrong number of entries");
        std::size_t i = 0;
        for (const auto& v : values) data_[i++] = v;
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator<(const QMatrix& o) const {
        if (rows_ != o.rows_) return rows_ < o.rows_;
        if (cols_ != o.cols_) return cols_ < o.cols_;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            int c = cmp(data_[i], o.data_[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (sgn(v) != 0) return false;
        return true;
    }

    QMatrix transpose() const {
        QMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    QMatrix row(std::size_t r) const {
        QMatrix m(1, cols_);
        for (std::size_t c = 0; c < cols_; ++c) m(0, c) = (*this)(r, c);
        return m;
    }
    QMatrix col(std::size_t c) const {
        QMatrix m(rows_, 1);
        for (std::size_t r = 0; r < rows_; ++r) m(r, 0) = (*this)(r, c);
        return m;
    }

    QMatrix select_rows(const std::vector<std::size_t>& idx) const {
        QMatrix m(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(idx[i], c);
        return m;
    }
    QMatrix select_cols(const std::vector<std::size_t>& idx) const {
        QMatrix m(rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t i = 0; i < idx.size(); ++i) m(r, i) = (*this)(r, idx[i]);
        return m;
    }

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b) {
        if (a.cols_ != b.rows_) throw StructuralError("QMatrix product: shape mismatch");
        QMatrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& aik = a(i, k);
                if (sgn(aik) == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }
    friend QMatrix operator+(QMatrix a, const QMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructuralError("QMatrix sum: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend QMatrix operator-(QMatrix a, const QMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructuralError("QMatrix difference: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend QMatrix operator*(const Rational& s, QMatrix a) {
        for (auto& v : a.data_) v *= s;
        return a;
    }

    /// [A | B]
    static QMatrix hstack(const QMatrix& a, const QMatrix& b) {
        if (a.rows_ != b.rows_ && !a.empty() && !b.empty()) throw StructuralError("hstack: row mismatch");
        std::size_t rows = std::max(a.rows_, b.rows_);
        QMatrix m(rows, a.cols_ + b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
        for (std::size_t r = 0; r < b.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c) m(r, a.cols_ + c) = b(r, c);
        return m;
    }
    static QMatrix vstack(const QMatrix& a, const QMatrix& b) {
        if (a.cols_ != b.cols_ && !a.empty() && !b.empty()) throw StructuralError("vstack: column mismatch");
        std::size_t cols = std::max(a.cols_, b.cols_);
        QMatrix m(a.rows_ + b.rows_, cols);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
        for (std::size_t r = 0; r < b.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c) m(a.rows_ + r, c) = b(r, c);
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r) os << "; ";
            for (std::size_t c = 0; c < cols_; ++c) {
                if (c) os << ' ';
                os << (*this)(r, c).get_str();
            }
        }
        os << ']';
        return os.str();
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

struct RowEchelon {
    QMatrix reduced;                  // R, zero rows removed
    QMatrix transform;                // G with G * M = R (rank x rows(M))
    std::vector<std::size_t> pivots;  // pivot column of each row of R
    std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form. `priority` lists the columns in the order in
/// which they are eligible as pivots (defaults to natural order); rows of the
/// result are sorted by that order.
inline RowEchelon rref(const QMatrix& m, std::vector<std::size_t> priority = {}) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (priority.empty()) {
        priority.resize(cols);
        std::iota(priority.begin(), priority.end(), std::size_t{0});
    }
    QMatrix a = m;
    QMatrix g = QMatrix::identity(rows);
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t pc = 0; pc < priority.size() && r < rows; ++pc) {
        std::size_t c = priority[pc];
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (sgn(a(i, c)) != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        if (sel != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(sel, j));
            for (std::size_t j = 0; j < rows; ++j) std::swap(g(r, j), g(sel, j));
        }
        Rational inv = 1 / a(r, c);
        for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
        for (std::size_t j = 0; j < rows; ++j) g(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(a(i, c)) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
            for (std::size_t j = 0; j < rows; ++j) g(i, j) -= f * g(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    RowEchelon out;
    std::vector<std::size_t> keep(r);
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    out.reduced = a.select_rows(keep);
    out.transform = g.select_rows(keep);
    out.pivots = std::move(pivots);
    return out;
}

inline std::size_t rank(const QMatrix& m) { return rref(m).rank(); }

inline Rational det(const QMatrix& m) {
    if (m.rows() != m.cols()) throw StructuralError("det: matrix not square");
    const std::size_t n = m.rows();
    QMatrix a = m;
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (sgn(a(i, c)) != 0) {
                sel = i;
                break;
            }
        if (sel == n) return 0;
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(sel, j));
            d = -d;
        }
        d *= a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a(i, c)) == 0) continue;
            Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
        }
    }
    return d;
}

inline QMatrix inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) throw StructuralError("inverse: matrix not square");
    if (m.rows() == 0) return QMatrix(0, 0);
    auto e = rref(QMatrix::hstack(m, QMatrix::identity(m.rows())));
    const std::size_t n = m.rows();
    if (e.rank() < n || e.pivots[n - 1] >= n) throw SingularityError("inverse: matrix is singular");
    std::vector<std::size_t> right(n);
    std::iota(right.begin(), right.end(), n);
    return e.reduced.select_cols(right);
}

/// Columns spanning {v : M v = 0}.
inline QMatrix kernel(const QMatrix& m) {
    auto e = rref(m);
    const std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) free.push_back(c);
    QMatrix k(cols, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        k(free[f], f) = 1;
        for (std::size_t r = 0; r < e.rank(); ++r) k(e.pivots[r], f) = -e.reduced(r, free[f]);
    }
    return k;
}

/// One solution X of M X = B, or nullopt if inconsistent.
inline std::optional<QMatrix> solve(const QMatrix& m, const QMatrix& b) {
    auto e = rref(QMatrix::hstack(m, b));
    for (auto p : e.pivots)
        if (p >= m.cols()) return std::nullopt;
    QMatrix x(m.cols(), b.cols());
    for (std::size_t r = 0; r < e.rank(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, m.cols() + j);
    return x;
}

}  // namespace oddsym

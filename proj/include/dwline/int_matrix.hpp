#pragma once

// Integer matrices, Smith normal form, and linear systems M x = b with the
// right-hand side and the unknowns in Q/Z.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dwline/error.hpp"
#include "dwline/qz.hpp"

namespace dwline {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionError("IntMatrix: ragged initializer");
            for (long long v : row) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("IntMatrix: product dimension mismatch");
        IntMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    // Elementary operations used by the Smith reduction.
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
        if (k == 0) return;
        for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
    }
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
        if (k == 0) return;
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }
    void negate_row(std::size_t r) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
    }
    void negate_col(std::size_t c) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Fraction-free (Bareiss) determinant of a square matrix.
inline Integer determinant(IntMatrix m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

/// M = U * S * V with U, V unimodular and S diagonal, s_1 | s_2 | ... , s_i >= 0.
/// Also carries the inverses, so that U^-1 * M * V^-1 = S.
struct SmithDecomposition {
    IntMatrix U, S, V;
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;

    std::vector<Integer> invariant_factors() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < rank; ++i) out.push_back(S(i, i));
        return out;
    }
};

inline SmithDecomposition smith_decompose(const IntMatrix& m) {
    const std::size_t R = m.rows(), C = m.cols();
    IntMatrix S = m;
    IntMatrix P = IntMatrix::identity(R), P_inv = IntMatrix::identity(R);
    IntMatrix Q = IntMatrix::identity(C), Q_inv = IntMatrix::identity(C);

    // Each elementary operation is applied to S and mirrored into the transforms,
    // keeping S = P * m * Q and P_inv, Q_inv as exact inverses.
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
        S.add_row_multiple(dst, src, k);
        P.add_row_multiple(dst, src, k);
        P_inv.add_col_multiple(src, dst, -k);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& k) {
        S.add_col_multiple(dst, src, k);
        Q.add_col_multiple(dst, src, k);
        Q_inv.add_row_multiple(src, dst, -k);
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        S.swap_rows(a, b);
        P.swap_rows(a, b);
        P_inv.swap_cols(a, b);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        S.swap_cols(a, b);
        Q.swap_cols(a, b);
        Q_inv.swap_rows(a, b);
    };
    auto row_negate = [&](std::size_t r) {
        S.negate_row(r);
        P.negate_row(r);
        P_inv.negate_col(r);
    };

    std::size_t t = 0;
    for (; t < std::min(R, C); ++t) {
        // Smallest nonzero entry of the trailing block goes to (t, t).
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j)
                if (S(i, j) != 0 && (!best || abs(S(i, j)) < abs(S(best->first, best->second)))) best = {{i, j}};
        if (!best) break;
        row_swap(t, best->first);
        col_swap(t, best->second);

        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (S(i, t) == 0) continue;
                row_add(i, t, -(S(i, t) / S(t, t)));
                if (S(i, t) != 0) {
                    dirty = true;
                    if (abs(S(i, t)) < abs(S(t, t))) row_swap(t, i);
                }
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (S(t, j) == 0) continue;
                col_add(j, t, -(S(t, j) / S(t, t)));
                if (S(t, j) != 0) {
                    dirty = true;
                    if (abs(S(t, j)) < abs(S(t, t))) col_swap(t, j);
                }
            }
            if (dirty) continue;
            // Divisibility: fold a row with a non-multiple entry into row t.
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < R && !offending; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        offending = i;
                        break;
                    }
            if (!offending) break;
            row_add(t, *offending, 1);
        }
        if (S(t, t) < 0) row_negate(t);
    }
    return SmithDecomposition{P_inv, S, Q_inv, P, Q, t};
}

/// An integer combination of equations whose left side vanishes and whose
/// right side does not: proof that M x = b has no solution in Q/Z.
struct Certificate {
    std::vector<std::pair<std::size_t, Integer>> weights;  // (equation index, weight)
    QZ residual;
};

struct SolveResult {
    std::optional<std::vector<QZ>> solution;
    std::optional<Certificate> certificate;

    bool solvable() const { return solution.has_value(); }
};

/// A sparse system of integer equations over Q/Z. Rows are added one at a time;
/// solve() runs Gauss-Jordan elimination on unit pivots and hands the residual
/// rows (no unit coefficient left) to a dense Smith reduction.
class LinearSystem {
public:
    using Entry = std::pair<std::size_t, Integer>;
    using SparseVec = std::vector<Entry>;

    explicit LinearSystem(std::size_t unknowns) : cols_(unknowns) {}

    std::size_t unknowns() const { return cols_; }
    std::size_t equations() const { return rows_.size(); }

    /// Adds sum_j coef_j x_j = rhs. Duplicate columns are summed.
    void add_equation(std::vector<Entry> entries, const QZ& rhs) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        SparseVec row;
        for (auto& [c, v] : entries) {
            if (c >= cols_) throw DimensionError("LinearSystem: column index out of range");
            if (!row.empty() && row.back().first == c)
                row.back().second += v;
            else
                row.emplace_back(c, std::move(v));
            if (row.back().second == 0) row.pop_back();
        }
        rows_.push_back(std::move(row));
        rhs_.push_back(rhs);
    }

    SolveResult solve() const {
        auto result = run(false);
        if (!result.solvable()) result = run(true);
        return result;
    }

private:
    struct Row {
        SparseVec e;
        QZ rhs;
        SparseVec combo;
    };

    static SparseVec axpy(const SparseVec& x, const Integer& k, const SparseVec& y) {
        // x + k*y
        SparseVec out;
        out.reserve(x.size() + y.size());
        std::size_t i = 0, j = 0;
        while (i < x.size() || j < y.size()) {
            if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
                out.push_back(x[i++]);
            } else if (i == x.size() || y[j].first < x[i].first) {
                out.emplace_back(y[j].first, k * y[j].second);
                ++j;
            } else {
                Integer v = x[i].second + k * y[j].second;
                if (v != 0) out.emplace_back(x[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    }

    static const Integer* find(const SparseVec& v, std::size_t col) {
        auto it = std::lower_bound(v.begin(), v.end(), col, [](const Entry& e, std::size_t c) { return e.first < c; });
        return (it != v.end() && it->first == col) ? &it->second : nullptr;
    }

    static void subtract(Row& r, const Integer& k, const Row& p, bool track) {
        r.e = axpy(r.e, -k, p.e);
        r.rhs -= p.rhs.scaled(k);
        if (track) r.combo = axpy(r.combo, -k, p.combo);
    }

    SolveResult run(bool track) const {
        std::vector<Row> pivots;
        std::vector<std::size_t> pivot_col;
        std::vector<long> pivot_of(cols_, -1);
        std::vector<std::vector<std::size_t>> occurs(cols_);
        std::vector<Row> deferred;

        auto reduce = [&](Row& r) {
            std::vector<std::pair<std::size_t, Integer>> hits;
            for (const auto& [c, v] : r.e)
                if (pivot_of[c] >= 0) hits.emplace_back(static_cast<std::size_t>(pivot_of[c]), v);
            for (const auto& [p, v] : hits) subtract(r, v, pivots[p], track);
        };
        auto infeasible = [&](const Row& r) {
            SolveResult out;
            out.certificate = Certificate{{r.combo.begin(), r.combo.end()}, r.rhs};
            return out;
        };

        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Row r{rows_[i], rhs_[i], {}};
            if (track) r.combo = {{i, Integer(1)}};
            reduce(r);
            if (r.e.empty()) {
                if (!r.rhs.is_zero()) return infeasible(r);
                continue;
            }
            auto unit = std::find_if(r.e.begin(), r.e.end(), [](const Entry& e) { return abs(e.second) == 1; });
            if (unit == r.e.end()) {
                deferred.push_back(std::move(r));
                continue;
            }
            const std::size_t c = unit->first;
            if (unit->second < 0) {
                for (auto& [col, v] : r.e) v = -v;
                r.rhs = -r.rhs;
                for (auto& [row, v] : r.combo) v = -v;
            }
            // Keep the pivot rows in reduced form: clear column c from all of them.
            for (std::size_t p : occurs[c]) {
                const Integer* coef = find(pivots[p].e, c);
                if (!coef) continue;
                const Integer k = *coef;
                subtract(pivots[p], k, r, track);
                for (const auto& [col, v] : r.e)
                    if (col != c) occurs[col].push_back(p);
            }
            occurs[c].clear();
            const std::size_t idx = pivots.size();
            for (const auto& [col, v] : r.e)
                if (col != c) occurs[col].push_back(idx);
            pivot_of[c] = static_cast<long>(idx);
            pivot_col.push_back(c);
            pivots.push_back(std::move(r));
        }

        // Residual rows now involve only non-pivot columns.
        std::vector<Row> rest;
        for (auto& r : deferred) {
            reduce(r);
            if (r.e.empty()) {
                if (!r.rhs.is_zero()) return infeasible(r);
                continue;
            }
            rest.push_back(std::move(r));
        }

        std::vector<QZ> x(cols_);
        if (!rest.empty()) {
            std::vector<std::size_t> free_cols;
            for (const auto& r : rest)
                for (const auto& [c, v] : r.e) free_cols.push_back(c);
            std::sort(free_cols.begin(), free_cols.end());
            free_cols.erase(std::unique(free_cols.begin(), free_cols.end()), free_cols.end());

            IntMatrix dense(rest.size(), free_cols.size());
            for (std::size_t i = 0; i < rest.size(); ++i)
                for (const auto& [c, v] : rest[i].e) {
                    const auto j = static_cast<std::size_t>(std::lower_bound(free_cols.begin(), free_cols.end(), c) - free_cols.begin());
                    dense(i, j) = v;
                }
            const SmithDecomposition snf = smith_decompose(dense);
            // y = V x solves S y = U^-1 b.
            std::vector<QZ> y(free_cols.size());
            for (std::size_t i = 0; i < rest.size(); ++i) {
                QZ bi;
                for (std::size_t k = 0; k < rest.size(); ++k) bi += rest[k].rhs.scaled(snf.U_inv(i, k));
                if (i < snf.rank) {
                    y[i] = bi.divided(snf.S(i, i));
                } else if (!bi.is_zero()) {
                    Row cert{{}, bi, {}};
                    if (track)
                        for (std::size_t k = 0; k < rest.size(); ++k) cert.combo = axpy(cert.combo, snf.U_inv(i, k), rest[k].combo);
                    return infeasible(cert);
                }
            }
            for (std::size_t j = 0; j < free_cols.size(); ++j) {
                QZ v;
                for (std::size_t k = 0; k < free_cols.size(); ++k) v += y[k].scaled(snf.V_inv(j, k));
                x[free_cols[j]] = v;
            }
        }
        for (std::size_t p = 0; p < pivots.size(); ++p) {
            QZ v = pivots[p].rhs;
            for (const auto& [c, coef] : pivots[p].e)
                if (c != pivot_col[p]) v -= x[c].scaled(coef);
            x[pivot_col[p]] = v;
        }
        SolveResult out;
        out.solution = std::move(x);
        return out;
    }

    std::size_t cols_;
    std::vector<SparseVec> rows_;
    std::vector<QZ> rhs_;
};

/// Solves M x = b in Q/Z. Any valid solution is returned; otherwise a certificate.
inline SolveResult smith_solve(const IntMatrix& m, const std::vector<QZ>& b) {
    if (m.rows() != b.size())
        throw DimensionError("smith_solve: matrix has " + std::to_string(m.rows()) + " rows but b has " + std::to_string(b.size()) + " entries");
    LinearSystem sys(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<LinearSystem::Entry> row;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) row.emplace_back(j, m(i, j));
        sys.add_equation(std::move(row), b[i]);
    }
    return sys.solve();
}

/// M x evaluated in Q/Z.
inline std::vector<QZ> multiply(const IntMatrix& m, const std::vector<QZ>& x) {
    if (m.cols() != x.size()) throw DimensionError("apply: dimension mismatch");
    std::vector<QZ> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) out[i] += x[j].scaled(m(i, j));
    return out;
}

}  // namespace dwline

#include <gtest/gtest.h>

#include <random>

#include "dwline/int_matrix.hpp"

using namespace dwline;

TEST(SmithSolve, ScalarHalf) {
    const auto r = smith_solve(IntMatrix{{2}}, {QZ(1, 2)});
    ASSERT_TRUE(r.solvable());
    EXPECT_EQ(multiply(IntMatrix{{2}}, *r.solution), std::vector<QZ>{QZ(1, 2)});
}

TEST(SmithSolve, ZeroMatrixNoSolution) {
    const auto r = smith_solve(IntMatrix{{0}}, {QZ(1, 2)});
    EXPECT_FALSE(r.solvable());
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(r.certificate->residual, QZ(1, 2));
}

TEST(SmithSolve, Diagonal) {
    const IntMatrix m{{2, 0}, {0, 3}};
    const std::vector<QZ> b{QZ(1, 2), QZ(1, 3)};
    const auto r = smith_solve(m, b);
    ASSERT_TRUE(r.solvable());
    EXPECT_EQ(multiply(m, *r.solution), b);
}

TEST(SmithSolve, DimensionMismatch) { EXPECT_THROW(smith_solve(IntMatrix{{1, 2}}, {QZ(), QZ()}), DimensionError); }

TEST(SmithSolve, InconsistentDependentRows) {
    // x + y = 1/2 and 2x + 2y = 1/3 contradict: 2*(row0) - row1 gives 0 = 2/3.
    const IntMatrix m{{1, 1}, {2, 2}};
    const auto r = smith_solve(m, {QZ(1, 2), QZ(1, 3)});
    ASSERT_FALSE(r.solvable());
    QZ combo;
    std::vector<Integer> lhs(2);
    const std::vector<QZ> b{QZ(1, 2), QZ(1, 3)};
    for (const auto& [row, w] : r.certificate->weights) {
        combo += b[row].scaled(w);
        for (std::size_t c = 0; c < 2; ++c) lhs[c] += w * m(row, c);
    }
    EXPECT_EQ(lhs, (std::vector<Integer>{0, 0}));
    EXPECT_EQ(combo, r.certificate->residual);
    EXPECT_FALSE(combo.is_zero());
}

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long long bound) {
    std::uniform_int_distribution<long long> d(-bound, bound);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

Integer abs_det(const IntMatrix& m) {
    Integer d = determinant(m);
    return d < 0 ? Integer(-d) : d;
}

}  // namespace

TEST(Smith, DecompositionPropertiesOnRandomMatrices) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        const IntMatrix m = random_matrix(rng, r, c, trial % 3 == 0 ? 2 : 9);
        const auto snf = smith_decompose(m);
        EXPECT_EQ(snf.U * snf.S * snf.V, m);
        EXPECT_EQ(abs_det(snf.U), Integer(1));
        EXPECT_EQ(abs_det(snf.V), Integer(1));
        EXPECT_EQ(snf.U * snf.U_inv, IntMatrix::identity(r));
        EXPECT_EQ(snf.V * snf.V_inv, IntMatrix::identity(c));
        const auto f = snf.invariant_factors();
        ASSERT_EQ(f.size(), snf.rank);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j || i >= snf.rank) EXPECT_EQ(snf.S(i, j), 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_GT(f[i], 0);
            if (i + 1 < f.size()) EXPECT_EQ(f[i + 1] % f[i], 0);
        }
    }
}

TEST(Smith, KnownInvariantFactors) {
    const auto snf = smith_decompose(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    EXPECT_EQ(snf.invariant_factors(), (std::vector<Integer>{2, 6, 12}));
}

TEST(SmithSolve, RandomSystemsAgreeWithConstruction) {
    // Build b = M x0 for random x0: always solvable, and every returned
    // solution must reproduce b exactly.
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::int64_t> num(0, 59), den(1, 12);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        const IntMatrix m = random_matrix(rng, r, c, 6);
        std::vector<QZ> x0(c);
        for (auto& v : x0) v = QZ(num(rng), den(rng));
        const auto b = multiply(m, x0);
        const auto res = smith_solve(m, b);
        ASSERT_TRUE(res.solvable());
        EXPECT_EQ(multiply(m, *res.solution), b);
    }
}

TEST(LinearSystem, SparseMatchesDense) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> num(0, 11);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 5;
        const IntMatrix m = random_matrix(rng, r, c, 3);
        std::vector<QZ> b(r);
        for (auto& v : b) v = QZ(num(rng), 12);
        LinearSystem sys(c);
        for (std::size_t i = 0; i < r; ++i) {
            std::vector<LinearSystem::Entry> row;
            for (std::size_t j = 0; j < c; ++j) row.emplace_back(j, m(i, j));
            sys.add_equation(row, b[i]);
        }
        const auto sparse = sys.solve();
        // Over Q/Z (divisible) both solvers must reach the same verdict.
        const auto dense = smith_solve(m, b);
        EXPECT_EQ(sparse.solvable(), dense.solvable());
        if (sparse.solvable()) EXPECT_EQ(multiply(m, *sparse.solution), b);
        else {
            QZ combo;
            std::vector<Integer> lhs(c);
            for (const auto& [row, w] : sparse.certificate->weights) {
                combo += b[row].scaled(w);
                for (std::size_t j = 0; j < c; ++j) lhs[j] += w * m(row, j);
            }
            EXPECT_EQ(lhs, std::vector<Integer>(c));
            EXPECT_EQ(combo, sparse.certificate->residual);
            EXPECT_FALSE(combo.is_zero());
        }
    }
}

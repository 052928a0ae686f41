#include <gtest/gtest.h>

#include <nehari/factorize.hpp>

#include "test_helpers.hpp"

using namespace nehari;
using namespace nehari::testing;

namespace
{

/// Oracle determinant: explicit sum over permutations.
Complex permutation_determinant(const CMatrix& m)
{
    const Index n = m.rows();
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        perm[static_cast<std::size_t>(i)] = i;
    }
    Complex total = 0.0;
    do
    {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
        {
            for (int j = i + 1; j < n; ++j)
            {
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)])
                {
                    ++inversions;
                }
            }
        }
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i)
        {
            prod *= m(i, perm[static_cast<std::size_t>(i)]);
        }
        total += (inversions % 2 == 0 ? 1.0 : -1.0) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return n == 0 ? Complex(1.0) : total;
}

MatrixSymbol column(std::initializer_list<std::pair<int, std::vector<Complex>>> terms, Index n)
{
    MatrixSymbol c(n, 1);
    for (const auto& [k, v] : terms)
    {
        CMatrix m(n, 1);
        for (Index i = 0; i < n; ++i)
        {
            m(i, 0) = v[static_cast<std::size_t>(i)];
        }
        c.add_to_coeff(k, m);
    }
    return c.trimmed(0.0);
}

double max_unitarity_residual(const MatrixSymbol& v, long grid = 512)
{
    const CircleGrid g = CircleGrid::for_symbol(v, grid);
    double worst = 0.0;
    for (long t = 0; t < g.size(); ++t)
    {
        const CMatrix x = direct_value(v, g.point(t));
        worst = std::max(worst, (x.adjoint() * x - CMatrix::Identity(x.cols(), x.cols())).norm());
    }
    return worst;
}

} // namespace

TEST(AssociatedVector, Examples)
{
    const CVector a1 = associated_vector((CMatrix(2, 1) << 1.0, 0.0).finished());
    EXPECT_EQ(a1(0), Complex(0.0));
    EXPECT_EQ(a1(1), Complex(1.0));

    CMatrix id(3, 2);
    id << 1, 0, 0, 1, 0, 0;
    const CVector a2 = associated_vector(id);
    EXPECT_EQ(a2(0), Complex(0.0));
    EXPECT_EQ(a2(1), Complex(0.0));
    EXPECT_EQ(std::abs(a2(2)), 1.0);

    EXPECT_THROW(associated_vector(CMatrix::Zero(3, 3)), ConfigurationError);
}

TEST(AssociatedVector, MatchesPermutationMinorsAndAnnihilates)
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial)
    {
        const Index r = 1 + trial % 5;
        const CMatrix a = random_matrix(rng, r + 1, r);
        const CVector alpha = associated_vector(a);
        EXPECT_LT((a.transpose() * alpha).norm(), 1e-12);
        for (Index i = 0; i <= r; ++i)
        {
            CMatrix minor(r, r);
            Index row = 0;
            for (Index k = 0; k <= r; ++k)
            {
                if (k != i)
                {
                    minor.row(row++) = a.row(k);
                }
            }
            const Complex expected = (i % 2 == 0 ? -1.0 : 1.0) * permutation_determinant(minor);
            EXPECT_LT(std::abs(alpha(i) - expected), 1e-12);
        }
    }
}

TEST(StackedInnerFactor, ConstantColumns)
{
    const CircleGrid g(256);
    const auto f1 = stacked_inner_factor({column({{0, {1.0, 0.0}}}, 2)}, g);
    EXPECT_EQ(f1.rank, 1);
    EXPECT_LT((f1.upsilon - column({{0, {1.0, 0.0}}}, 2)).max_abs_coeff(), 1e-12);

    const auto f2 = stacked_inner_factor(
        {column({{0, {1.0, 0.0}}}, 2), column({{0, {0.0, 1.0}}}, 2)}, g);
    EXPECT_EQ(f2.rank, 2);
    EXPECT_LT(f2.upsilon.hi(), 1);
    const CMatrix u = f2.upsilon.coeff(0);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(StackedInnerFactor, ShiftedColumnKeepsInnerPart)
{
    // the smallest invariant subspace containing (z, 0)^t is (z, 0)^t H^2
    const auto f = stacked_inner_factor({column({{1, {1.0, 0.0}}}, 2)}, CircleGrid(256));
    EXPECT_EQ(f.rank, 1);
    EXPECT_LT((f.upsilon - column({{1, {1.0, 0.0}}}, 2)).max_abs_coeff(), 1e-10);
    EXPECT_LT(f.inner_residual, 1e-8);
    EXPECT_LT(f.column_residual, 1e-8);
    EXPECT_FALSE(f.co_outer);

    // oracle: direct span at low degree; (z,0)^t * q spans exactly the
    // coefficient vectors with zero constant term and zero second entry
    const MatrixSymbol y = f.upsilon;
    for (int k = 0; k < 4; ++k)
    {
        const auto img = multiply(y, MatrixSymbol::scalar({{k, 1.0}}));
        EXPECT_EQ(img.coeff(0).norm(), 0.0);
        EXPECT_LT(std::abs(img.coeff(k + 1)(1, 0)), 1e-12);
    }
}

TEST(StackedInnerFactor, OuterColumnNormalized)
{
    const auto f = stacked_inner_factor({column({{0, {1.0, 0.0}}, {1, {0.0, 1.0}}}, 2)},
                                        CircleGrid(256));
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_LT((f.upsilon - column({{0, {r, 0.0}}, {1, {0.0, r}}}, 2)).max_abs_coeff(), 1e-10);
    EXPECT_TRUE(f.co_outer);
}

TEST(StackedInnerFactor, BlaschkeInnerPartOfColumn)
{
    // f = (z - a) * (1, 2)^t / sqrt(5): inner factor b_a (1, 2)^t / sqrt(5)
    const Complex a(0.4, 0.1);
    const auto f = stacked_inner_factor(
        {column({{0, {-a, -2.0 * a}}, {1, {1.0, 2.0}}}, 2)}, CircleGrid(1024));
    EXPECT_EQ(f.rank, 1);
    EXPECT_LT(f.inner_residual, 1e-8);
    EXPECT_LT(f.column_residual, 1e-6);
    const CircleGrid g(64);
    for (long t = 0; t < g.size(); ++t)
    {
        const Complex zeta = g.point(t);
        const Complex b = (zeta - a) / (1.0 - std::conj(a) * zeta);
        const CMatrix v = f.upsilon.value_at(zeta);
        // same direction up to a constant phase: |<v, u>| = 1 with u = b (1,2)/sqrt5
        const Complex ip = std::conj(b) * (v(0, 0) + 2.0 * v(1, 0)) / std::sqrt(5.0);
        EXPECT_NEAR(std::abs(ip), 1.0, 1e-8);
    }
}

TEST(StackedInnerFactor, RandomInputsProperties)
{
    std::mt19937 rng(23);
    const CircleGrid g(512);
    for (int trial = 0; trial < 2; ++trial)
    {
        std::vector<MatrixSymbol> cols = {random_symbol(rng, 3, 1, 0, 2),
                                          random_symbol(rng, 3, 1, 0, 1)};
        const auto f = stacked_inner_factor(cols, g);
        EXPECT_EQ(f.rank, 2);
        EXPECT_LT(f.inner_residual, 1e-8);
        EXPECT_LT(f.column_residual, 1e-6);
    }
}

TEST(StackedInnerFactor, CoOuterRegression)
{
    // co-outer inputs: (1, z, 0)^t and (0, 1, z)^t generate a co-outer inner factor
    const auto f = stacked_inner_factor(
        {column({{0, {1.0, 0.0, 0.0}}, {1, {0.0, 1.0, 0.0}}}, 3),
         column({{0, {0.0, 1.0, 0.0}}, {1, {0.0, 0.0, 1.0}}}, 3)},
        CircleGrid(512));
    EXPECT_EQ(f.rank, 2);
    EXPECT_TRUE(f.co_outer);
    EXPECT_LT(f.inner_residual, 1e-8);
}

TEST(StackedInnerFactor, Errors)
{
    EXPECT_THROW(stacked_inner_factor({}, CircleGrid(64)), DegenerateInputError);
    EXPECT_THROW(stacked_inner_factor({MatrixSymbol(2, 1)}, CircleGrid(64)), DegenerateInputError);
}

TEST(BalancedCompletion, ConstantUnitColumn)
{
    const auto c = balanced_completion(column({{0, {1.0, 0.0}}}, 2), CircleGrid(256));
    ASSERT_EQ(c.theta.cols(), 1);
    EXPECT_LT((c.theta - column({{0, {0.0, 1.0}}}, 2)).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.V.coeff(0) - CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(BalancedCompletion, ThematicExample)
{
    const double r = 1.0 / std::sqrt(2.0);
    const auto y = column({{0, {r, 0.0}}, {1, {0.0, r}}}, 2);
    const auto c = balanced_completion(y, CircleGrid(256));
    // Theta = (-z, 1)^t / sqrt2 up to a constant phase
    const auto expected = column({{0, {0.0, r}}, {1, {-r, 0.0}}}, 2);
    const Complex phase = c.theta.coeff(0)(1, 0) / r;
    EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
    EXPECT_LT((c.theta - phase * expected).max_abs_coeff(), 1e-12);
    EXPECT_LT(max_unitarity_residual(c.V), 1e-12);
    EXPECT_LT(c.g_residual, 1e-12);
    EXPECT_LT(c.g_range_residual, 1e-10);
}

TEST(BalancedCompletion, ConstantUnitaryColumns)
{
    std::mt19937 rng(29);
    const CMatrix q = random_unitary(rng, 3);
    const auto c = balanced_completion(MatrixSymbol::constant(q.leftCols(2)), CircleGrid(128));
    ASSERT_EQ(c.theta.cols(), 1);
    // Y^t Theta = 0 forces Theta to be parallel to conj(q_2)
    const Complex ip = (q.col(2).transpose() * c.theta.coeff(0))(0, 0);
    EXPECT_NEAR(std::abs(ip), 1.0, 1e-12);
    EXPECT_LT(max_unitarity_residual(c.V), 1e-12);
}

TEST(BalancedCompletion, InnerWithBlaschkeEntries)
{
    // Y = (z, 0, 1)^t / sqrt2 times a constant unitary mix
    std::mt19937 rng(31);
    const CMatrix q = random_unitary(rng, 3);
    const double r = 1.0 / std::sqrt(2.0);
    const auto y = column({{0, {0.0, 0.0, r}}, {1, {r, 0.0, 0.0}}}, 3).constant_times(q);
    const auto c = balanced_completion(y, CircleGrid(256));
    EXPECT_LT(max_unitarity_residual(c.V), 1e-10);
    EXPECT_LT(c.theta_antianalytic, 1e-10);
    EXPECT_LT(c.g_residual, 1e-10);
    EXPECT_LT(c.g_range_residual, 1e-8);
    EXPECT_GT(c.theta_min_singular, 1.0 - 1e-8);
}

TEST(BalancedCompletion, RejectsNonInnerInput)
{
    EXPECT_THROW(balanced_completion(column({{0, {1.0, 1.0}}}, 2), CircleGrid(64)),
                 FactorizationError);
}

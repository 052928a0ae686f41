#include <gtest/gtest.h>

#include <nehari/hankel.hpp>

#include "test_helpers.hpp"

using namespace nehari;
using namespace nehari::testing;

namespace
{

/// ||H f|| computed through symbol arithmetic: l2 norm of P_-(S f).
double hankel_image_norm(const MatrixSymbol& s, const MatrixSymbol& f)
{
    return riesz_project(multiply(s, f), Part::antianalytic).coefficient_norm();
}

} // namespace

TEST(TruncatedMatrices, BlockStructure)
{
    std::mt19937 rng(2);
    const auto s = random_symbol(rng, 2, 3, -3, 2);
    const auto h = truncated_hankel(s, 4);
    ASSERT_EQ(h.matrix.rows(), 8);
    ASSERT_EQ(h.matrix.cols(), 12);
    for (int j = 0; j < 4; ++j)
    {
        for (int k = 0; k < 4; ++k)
        {
            EXPECT_EQ((h.matrix.block(2 * j, 3 * k, 2, 3) - s.coeff(-j - k - 1)).norm(), 0.0);
        }
    }
    const auto t = truncated_toeplitz(s, 4);
    for (int j = 0; j < 4; ++j)
    {
        for (int k = 0; k < 4; ++k)
        {
            EXPECT_EQ((t.matrix.block(2 * j, 3 * k, 2, 3) - s.coeff(j - k)).norm(), 0.0);
        }
    }
}

TEST(HankelNorm, Zbar)
{
    const auto p = hankel_norm_and_schmidt(zbar(), 1);
    EXPECT_NEAR(p.norm, 1.0, 1e-15);
    EXPECT_LT((p.f - cst(1.0)).max_abs_coeff(), 1e-15);
    EXPECT_LT((p.g - cst(1.0)).max_abs_coeff(), 1e-15);
    EXPECT_EQ(p.multiplicity, 1);
}

TEST(HankelNorm, TwoByTwoHankel)
{
    const auto s = MatrixSymbol::scalar({{-1, 1.0}, {-2, 0.5}});
    // oracle: eigenvalues of [[1, 1/2], [1/2, 0]]
    Eigen::Matrix2d h;
    h << 1.0, 0.5, 0.5, 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const double expected = es.eigenvalues().cwiseAbs().maxCoeff();
    EXPECT_NEAR(expected, (1.0 + std::sqrt(2.0)) / 2.0, 1e-15);
    const auto p = hankel_norm_and_schmidt(s, 2);
    EXPECT_NEAR(p.norm, expected, 1e-13);
    EXPECT_NEAR(hankel_image_norm(s, p.f) / p.f.coefficient_norm(), p.norm, 1e-12);
    EXPECT_LT(p.g_antianalytic, 1e-12);
}

TEST(HankelNorm, BlockDiagonal)
{
    const auto s = MatrixSymbol::diagonal({zbar(), 0.5 * zbar()});
    const auto p = hankel_norm_and_schmidt(s, 4);
    EXPECT_NEAR(p.norm, 1.0, 1e-14);
    EXPECT_EQ(p.multiplicity, 1);
    EXPECT_LT((p.f - MatrixSymbol::constant((CMatrix(2, 1) << 1.0, 0.0).finished())).max_abs_coeff(),
              1e-14);
}

TEST(HankelNorm, AnalyticSymbolHasZeroNorm)
{
    const auto p = hankel_norm_and_schmidt(z(), 4);
    EXPECT_EQ(p.norm, 0.0);
    EXPECT_TRUE(p.f.is_zero());
}

TEST(HankelNorm, DegreeBelowBandIsRejected)
{
    EXPECT_THROW(hankel_norm_and_schmidt(zbar(3), 2), ConfigurationError);
}

TEST(HankelNorm, RandomSymbolsProperties)
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 8; ++trial)
    {
        const auto s = random_symbol(rng, 2, 3, -3, 2);
        const auto p = hankel_norm_and_schmidt(s, 3);
        // doubling N leaves the norm unchanged (finite rank)
        EXPECT_NEAR(hankel_norm_and_schmidt(s, 6).norm, p.norm, 1e-12);
        // ||H_S|| <= ||S||_inf
        EXPECT_LE(p.norm, brute_sup_norm(s) + 1e-9);
        EXPECT_NEAR(hankel_image_norm(s, p.f) / p.f.coefficient_norm(), p.norm, 1e-9);
        EXPECT_LT(p.g_antianalytic, 1e-8);
        // g is a maximizing vector of H_{S^t}
        const auto st = transpose_symbol(s);
        EXPECT_NEAR(hankel_image_norm(st, p.g) / p.g.coefficient_norm(), p.norm, 1e-9);
    }
}

TEST(MaximizingSubspace, Dimensions)
{
    EXPECT_EQ(maximizing_subspace(MatrixSymbol::diagonal({zbar(), zbar()}), 2).size(), 2u);
    EXPECT_EQ(maximizing_subspace(zbar(), 1).size(), 1u);
    EXPECT_EQ(maximizing_subspace(MatrixSymbol::diagonal({zbar(), 0.5 * zbar()}), 2).size(), 1u);
    EXPECT_EQ(maximizing_subspace(zbar(2), 4).size(), 2u);
    EXPECT_THROW(maximizing_subspace(z(), 2), DegenerateInputError);
}

TEST(ToeplitzKernel, Examples)
{
    const auto k1 = toeplitz_kernel(zbar(), 3);
    ASSERT_EQ(k1.size(), 1u);
    EXPECT_LT((k1[0] - cst(1.0)).max_abs_coeff(), 1e-14);

    EXPECT_TRUE(toeplitz_kernel(z(), 3).empty());

    const auto k2 = toeplitz_kernel(MatrixSymbol::diagonal({zbar(), zbar()}), 2);
    ASSERT_EQ(k2.size(), 2u);
    for (const auto& f : k2)
    {
        EXPECT_EQ(f.hi(), 0);
    }

    EXPECT_EQ(toeplitz_kernel(zbar(3), 5).size(), 3u);
}

TEST(ToeplitzKernel, MembersAreAnnihilated)
{
    std::mt19937 rng(31);
    for (int trial = 0; trial < 5; ++trial)
    {
        // z-bar^3 times a random analytic 2x2 of degree 1 has a kernel
        const auto s = multiply(MatrixSymbol::diagonal({zbar(3), zbar(3)}),
                                random_symbol(rng, 2, 2, 0, 1));
        const auto basis = toeplitz_kernel(s, 4);
        EXPECT_FALSE(basis.empty());
        for (const auto& f : basis)
        {
            EXPECT_NEAR(f.coefficient_norm(), 1.0, 1e-12);
            EXPECT_LT(riesz_project(multiply(s, f), Part::analytic).coefficient_norm(), 1e-7);
        }
    }
}

TEST(ToeplitzKernel, ScalarLawOnUnimodularCorpus)
{
    const CircleGrid g(256);
    const std::vector<MatrixSymbol> corpus = {zbar(), zbar(2), z(), z(3), cst(1.0)};
    for (const auto& u : corpus)
    {
        const bool has_kernel = !toeplitz_kernel(u, 6).empty();
        EXPECT_EQ(has_kernel, winding_number(u, g) < 0);
    }
}

TEST(EssentialNorm, BandLimitedIsZero)
{
    EXPECT_EQ(essential_norm_estimate(zbar()).value, 0.0);
    EXPECT_EQ(essential_norm_estimate(MatrixSymbol::identity(2)).value, 0.0);
    EXPECT_FALSE(essential_norm_estimate(zbar()).note.empty());
}

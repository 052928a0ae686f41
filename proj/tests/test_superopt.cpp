#include <gtest/gtest.h>

#include <nehari/superopt.hpp>

#include "test_helpers.hpp"

using namespace nehari;
using namespace nehari::testing;

namespace
{

/// Oracle: largest eigenvalue modulus of the finite Hankel matrix of a
/// scalar antianalytic polynomial, from the real symmetric eigensolver.
double scalar_hankel_norm_oracle(const std::vector<double>& coeffs)
{
    const auto n = static_cast<Index>(coeffs.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j)
    {
        for (Index k = 0; j + k < n; ++k)
        {
            h(j, k) = coeffs[static_cast<std::size_t>(j + k)];
        }
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().cwiseAbs().maxCoeff();
}

/// Pointwise singular values of Phi - F by direct summation.
std::vector<RVector> direct_profile(const MatrixSymbol& e, long points)
{
    std::vector<RVector> out;
    for (long t = 0; t < points; ++t)
    {
        const Complex zeta = std::polar(1.0, 2.0 * std::numbers::pi * (t + 0.37) / points);
        out.push_back(Eigen::JacobiSVD<CMatrix>(direct_value(e, zeta)).singularValues());
    }
    return out;
}

} // namespace

TEST(Superopt, ZbarHasZeroApproximant)
{
    const auto rep = superopt_factorize(zbar());
    ASSERT_EQ(rep.t.size(), 1u);
    EXPECT_NEAR(rep.t[0], 1.0, 1e-12);
    EXPECT_LT(rep.F.max_abs_coeff(), 1e-10);
    ASSERT_EQ(rep.blocks.size(), 1u);
    const auto& b = rep.blocks[0];
    EXPECT_TRUE(b.scalar_path);
    EXPECT_LT(b.u_unimodularity, 1e-10);
    EXPECT_LT(b.u_formula_residual, 1e-8);
    EXPECT_LT(b.u_winding, 0);
    EXPECT_NEAR(b.U_hankel_norm, 1.0, 1e-10);
}

TEST(Superopt, DiagonalDistinctLevels)
{
    const auto phi = MatrixSymbol::diagonal({zbar(), 0.5 * zbar()});
    const auto rep = superopt_factorize(phi);
    ASSERT_EQ(rep.t.size(), 2u);
    EXPECT_NEAR(rep.t[0], 1.0, 1e-10);
    EXPECT_NEAR(rep.t[1], 0.5, 1e-10);
    EXPECT_EQ(rep.r, (std::vector<int>{1, 2}));
    EXPECT_LT(rep.F.max_abs_coeff(), 1e-8);
    EXPECT_FALSE(rep.partial);
    for (const double d : rep.level_deviation)
    {
        EXPECT_LT(d, 1e-8);
    }
}

TEST(Superopt, DiagonalEqualLevelsPeelTogether)
{
    const auto phi = MatrixSymbol::diagonal({zbar(), zbar()});
    const auto rep = superopt_factorize(phi);
    ASSERT_EQ(rep.blocks.size(), 1u);
    EXPECT_EQ(rep.blocks[0].r, 2);
    EXPECT_EQ(rep.t, (std::vector<double>{rep.t[0], rep.t[0]}));
    EXPECT_NEAR(rep.t[0], 1.0, 1e-10);
    EXPECT_LT(rep.F.max_abs_coeff(), 1e-8);
    EXPECT_LT(rep.blocks[0].U_unitarity, 1e-8);
}

TEST(Superopt, ScalarTwoTermMatchesEigenOracle)
{
    const auto phi = MatrixSymbol::scalar({{-1, 1.0}, {-2, 0.5}});
    const double oracle = scalar_hankel_norm_oracle({1.0, 0.5});
    const auto rep = superopt_factorize(phi);
    ASSERT_EQ(rep.t.size(), 1u);
    EXPECT_NEAR(rep.t[0], oracle, 1e-10);
    EXPECT_LT(rep.F_antianalytic, 1e-8);
    // |phi - F| is constant on the circle, checked off-grid
    for (const auto& s : direct_profile(phi - rep.F, 97))
    {
        EXPECT_NEAR(s(0), oracle, 1e-7);
    }
    const auto& b = rep.blocks[0];
    EXPECT_LT(b.u_formula_residual, 1e-7);
    EXPECT_LT(b.u_winding, 0);
}

TEST(Superopt, RankDeficientDiagonal)
{
    const auto phi = MatrixSymbol::diagonal({zbar(), cst(0.0)});
    const auto rep = superopt_factorize(phi);
    ASSERT_EQ(rep.t.size(), 2u);
    EXPECT_NEAR(rep.t[0], 1.0, 1e-10);
    EXPECT_NEAR(rep.t[1], 0.0, 1e-10);
    EXPECT_LT(rep.F.max_abs_coeff(), 1e-8);
}

TEST(Superopt, ZeroSymbol)
{
    const auto rep = superopt_factorize(MatrixSymbol(2, 2));
    EXPECT_TRUE(rep.blocks.empty());
    EXPECT_EQ(rep.t, (std::vector<double>{0.0, 0.0}));
    EXPECT_TRUE(rep.F.is_zero(1e-14));
}

TEST(Superopt, AnalyticPartIsRemoved)
{
    std::mt19937 rng(5);
    const auto analytic = random_symbol(rng, 2, 2, 0, 2);
    const auto phi = MatrixSymbol::diagonal({zbar(), 0.5 * zbar()}) + analytic;
    const auto rep = superopt_factorize(phi);
    ASSERT_EQ(rep.t.size(), 2u);
    EXPECT_NEAR(rep.t[0], 1.0, 1e-9);
    EXPECT_NEAR(rep.t[1], 0.5, 1e-9);
    EXPECT_LT((rep.F - analytic).max_abs_coeff(), 1e-7);
}

TEST(Superopt, DepthLimitedWithTailModel)
{
    const auto phi = MatrixSymbol::diagonal({cst(0.0), zbar(), 0.9 * zbar(), 0.8 * zbar()});
    SuperoptConfig cfg;
    cfg.depth = 3;
    cfg.tail = 0.8;
    const auto rep = superopt_factorize(phi, cfg);
    ASSERT_EQ(rep.sigma.size(), 3u);
    EXPECT_NEAR(rep.sigma[0], 1.0, 1e-9);
    EXPECT_NEAR(rep.sigma[1], 0.9, 1e-9);
    EXPECT_NEAR(rep.sigma[2], 0.8, 1e-9);
    EXPECT_EQ(rep.t_inf, 0.8);
    EXPECT_TRUE(rep.tail_model);
    EXPECT_LT(rep.F.max_abs_coeff(), 1e-7);
}

TEST(Superopt, RandomSymbolProperties)
{
    std::mt19937 rng(41);
    for (int trial = 0; trial < 2; ++trial)
    {
        const auto phi = random_symbol(rng, 2, 2, -2, 1);
        const auto rep = superopt_factorize(phi);
        ASSERT_EQ(rep.t.size(), 2u);
        // t_0 = ||H_Phi||, t decreasing
        EXPECT_NEAR(rep.t[0], hankel_norm(phi), 1e-9);
        EXPECT_GE(rep.t[0] + 1e-12, rep.t[1]);
        EXPECT_LT(rep.F_antianalytic, 1e-6);
        for (const auto& s : direct_profile(phi - rep.F, 61))
        {
            EXPECT_NEAR(s(0), rep.t[0], 1e-6);
            EXPECT_NEAR(s(1), rep.t[1], 1e-6);
        }
        for (const auto& b : rep.blocks)
        {
            EXPECT_LT(b.offdiag_residual, 1e-7);
            EXPECT_LT(b.V_unitarity, 1e-7);
            EXPECT_LT(b.W_unitarity, 1e-7);
        }
    }
}

TEST(Membership, AcceptsSuperoptimalAndRejectsPerturbation)
{
    const auto phi = MatrixSymbol::diagonal({zbar(), 0.5 * zbar()});
    const auto rep = superopt_factorize(phi);
    const auto ok = verify_superoptimal_membership(phi, rep.F, 2);
    EXPECT_TRUE(ok.member);
    EXPECT_EQ(ok.checked, 2);

    // F' = diag(0, 0.25): the first level is intact but t_1 changes
    const auto bad = MatrixSymbol::diagonal({cst(0.0), cst(0.25)});
    const auto first = verify_superoptimal_membership(phi, bad, 1);
    EXPECT_TRUE(first.member);
    EXPECT_FALSE(verify_superoptimal_membership(phi, bad, 2).member);

    // antianalytic F is never admissible
    EXPECT_FALSE(verify_superoptimal_membership(phi, MatrixSymbol::diagonal({zbar(), cst(0.0)}), 1)
                     .analytic);
}

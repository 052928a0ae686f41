#include <gtest/gtest.h>

#include <nehari/hankel.hpp>

#include "test_helpers.hpp"

using namespace nehari;
using namespace nehari::testing;

TEST(Riesz, ProjectionsPartitionSymbol)
{
    const auto s = MatrixSymbol::scalar({{-1, 1.0}, {1, 1.0}});
    const auto plus = riesz_project(s, Part::analytic);
    EXPECT_EQ(plus.coeff(0)(0, 0), Complex(0.0));
    EXPECT_EQ(plus.coeff(1)(0, 0), Complex(1.0));
    EXPECT_EQ(plus.coeff(-1)(0, 0), Complex(0.0));
    EXPECT_TRUE(riesz_project(cst(3.0), Part::antianalytic).is_zero());

    std::mt19937 rng(1);
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto r = random_symbol(rng, 2, 3, -4, 3);
        const auto sum = riesz_project(r, Part::analytic) + riesz_project(r, Part::antianalytic);
        EXPECT_EQ((sum - r).max_abs_coeff(), 0.0);
    }
}

TEST(OuterFactor, Monomial)
{
    const auto f = outer_factor(z(), CircleGrid(256));
    EXPECT_LT((f.inner - z()).max_abs_coeff(), 1e-12);
    EXPECT_LT((f.outer - cst(1.0)).max_abs_coeff(), 1e-12);
}

TEST(OuterFactor, Constant)
{
    const auto f = outer_factor(cst(2.0), CircleGrid(256));
    EXPECT_LT((f.inner - cst(1.0)).max_abs_coeff(), 1e-12);
    EXPECT_LT((f.outer - cst(2.0)).max_abs_coeff(), 1e-12);
}

TEST(OuterFactor, ZeroOutsideDiskIsOuter)
{
    const auto s = MatrixSymbol::scalar({{0, -2.0}, {1, 1.0}});
    const auto f = outer_factor(s, CircleGrid(1024));
    EXPECT_LT((f.inner - cst(1.0)).max_abs_coeff(), 1e-8);
    EXPECT_LT((f.outer - s).max_abs_coeff(), 1e-8);
    EXPECT_FALSE(f.ill_conditioned);
}

TEST(OuterFactor, ZeroInsideDiskGivesBlaschkeFactor)
{
    // z - 1/2 = [-(z - 1/2)/(1 - z/2)] * (z/2 - 1); the inner factor's
    // lowest Taylor coefficient is made positive
    const auto s = MatrixSymbol::scalar({{0, -0.5}, {1, 1.0}});
    const CircleGrid g(1024);
    const auto f = outer_factor(s, g);
    EXPECT_LT((f.outer - MatrixSymbol::scalar({{0, -1.0}, {1, 0.5}})).max_abs_coeff(), 1e-10);
    for (long t = 0; t < g.size(); t += 17)
    {
        const Complex zeta = g.point(t);
        const Complex expected = -(zeta - 0.5) / (1.0 - 0.5 * zeta);
        EXPECT_LT(std::abs(f.inner.value_at(zeta)(0, 0) - expected), 1e-10);
    }
    EXPECT_LT(f.reconstruction_residual, 1e-7);
    EXPECT_LT(f.unimodularity_residual, 1e-7);
}

TEST(OuterFactor, ReconstructsRandomNonvanishingSymbols)
{
    std::mt19937 rng(4);
    const CircleGrid g(1024);
    int tested = 0;
    while (tested < 5)
    {
        auto s = random_symbol(rng, 1, 1, -2, 2);
        s += cst(3.0);
        const auto vals = evaluate(s, g);
        double smallest = 1e9;
        for (const auto& v : vals)
        {
            smallest = std::min(smallest, std::abs(v(0, 0)));
        }
        if (smallest < 1e-3)
        {
            continue;
        }
        ++tested;
        const auto f = outer_factor(s, g);
        EXPECT_LT(f.reconstruction_residual, 1e-7);
        EXPECT_LT(f.unimodularity_residual, 1e-7);
    }
}

TEST(OuterFactor, ErrorsAndFlags)
{
    EXPECT_THROW(outer_factor(MatrixSymbol(1, 1), CircleGrid(64)), DegenerateInputError);
    // (1 + z)^8 vanishes to high order at -1: many points fall under a large floor
    MatrixSymbol p = cst(1.0);
    for (int i = 0; i < 8; ++i)
    {
        p = multiply(p, MatrixSymbol::scalar({{0, 1.0}, {1, 1.0}}));
    }
    const auto f = outer_factor(p, CircleGrid(256), 1.0);
    EXPECT_TRUE(f.ill_conditioned);
    EXPECT_GT(f.floored_fraction, 0.1);
}

TEST(Winding, Examples)
{
    const CircleGrid g(256);
    EXPECT_EQ(winding_number(zbar(), g), -1);
    EXPECT_EQ(winding_number(z(2), g), 2);
    EXPECT_EQ(winding_number(MatrixSymbol::scalar({{0, -2.0}, {1, 1.0}}), g), 0);
    EXPECT_THROW(winding_number(MatrixSymbol::scalar({{0, -1.0}, {1, 1.0}}), g),
                 DegenerateInputError);
}

TEST(Winding, AdditiveUnderProducts)
{
    std::mt19937 rng(8);
    const CircleGrid g(512);
    for (int trial = 0; trial < 6; ++trial)
    {
        // a z^k + small perturbation: winding k by Rouche
        std::uniform_int_distribution<int> kd(-3, 3);
        const int k1 = kd(rng);
        const int k2 = kd(rng);
        auto s1 = MatrixSymbol::scalar({{k1, 1.0}}) + 0.3 * random_symbol(rng, 1, 1, -1, 1);
        auto s2 = MatrixSymbol::scalar({{k2, 1.0}}) + 0.3 * random_symbol(rng, 1, 1, -1, 1);
        if (linf_norm(s1 - MatrixSymbol::scalar({{k1, 1.0}}), g) > 0.95 ||
            linf_norm(s2 - MatrixSymbol::scalar({{k2, 1.0}}), g) > 0.95)
        {
            continue;
        }
        EXPECT_EQ(winding_number(s1, g), k1);
        EXPECT_EQ(winding_number(multiply(s1, s2), g),
                  winding_number(s1, g) + winding_number(s2, g));
    }
}

TEST(ColumnInnerOuter, UnitColumn)
{
    MatrixSymbol f = MatrixSymbol::constant((CMatrix(2, 1) << 1.0, 0.0).finished());
    const auto c = column_inner_outer(f, CircleGrid(256));
    EXPECT_LT((c.theta - cst(1.0)).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.h - cst(1.0)).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.v - f).max_abs_coeff(), 1e-12);
}

TEST(ColumnInnerOuter, SharedZeroAtOrigin)
{
    MatrixSymbol f(2, 1, 1, 1);
    f.coeff_ref(1)(0, 0) = 1.0;
    const auto c = column_inner_outer(f, CircleGrid(256));
    EXPECT_LT((c.theta - z()).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.h - cst(1.0)).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.v - MatrixSymbol::constant((CMatrix(2, 1) << 1.0, 0.0).finished())).max_abs_coeff(),
              1e-12);
    EXPECT_LT(c.reconstruction_residual, 1e-12);
}

TEST(ColumnInnerOuter, ConstantNormColumn)
{
    MatrixSymbol f(2, 1, 0, 1);
    f.coeff_ref(0)(0, 0) = 1.0;
    f.coeff_ref(1)(1, 0) = 1.0;
    const auto c = column_inner_outer(f, CircleGrid(256));
    EXPECT_LT((c.theta - cst(1.0)).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.h - cst(std::sqrt(2.0))).max_abs_coeff(), 1e-12);
    EXPECT_LT((c.v - (1.0 / std::sqrt(2.0)) * f).max_abs_coeff(), 1e-12);
}

TEST(ColumnInnerOuter, RandomColumnsWithPlantedZero)
{
    std::mt19937 rng(12);
    const CircleGrid g(1024);
    for (int trial = 0; trial < 4; ++trial)
    {
        const auto base = random_symbol(rng, 3, 1, 0, 2);
        const Complex a(0.3, -0.2);
        const auto f = scalar_multiply(MatrixSymbol::scalar({{0, -a}, {1, 1.0}}), base);
        const auto c = column_inner_outer(f, g);
        ASSERT_EQ(c.common_zeros.size(), 1u);
        EXPECT_LT(std::abs(c.common_zeros[0] - a), 1e-8);
        EXPECT_LT(c.reconstruction_residual, 1e-7);
        EXPECT_LT(c.norm_residual, 1e-7);
        EXPECT_LT(c.antianalytic_residual, 1e-7);
    }
}

TEST(ColumnInnerOuter, Errors)
{
    EXPECT_THROW(column_inner_outer(MatrixSymbol(2, 1), CircleGrid(64)), DegenerateInputError);
    MatrixSymbol f(2, 1, -1, 0);
    f.coeff_ref(-1)(0, 0) = 1.0;
    EXPECT_THROW(column_inner_outer(f, CircleGrid(64)), ConfigurationError);
}

TEST(ScalarLaw, UnimodularNegativeWindingHasUnitHankelNorm)
{
    const CircleGrid g(512);
    for (int k = 1; k <= 3; ++k)
    {
        const auto u = zbar(k);
        EXPECT_LT(winding_number(u, g), 0);
        EXPECT_NEAR(hankel_norm(u), 1.0, 1e-12);
    }
    // z has winding +1 and Hankel norm 0
    EXPECT_NEAR(hankel_norm(z()), 0.0, 0.0);
}

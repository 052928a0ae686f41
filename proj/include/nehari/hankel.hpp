#pragma once

///
/// \file hankel.hpp
///
/// Truncated block Hankel / Toeplitz matrices of a MatrixSymbol, Hankel
/// norms with maximizing vectors, and polynomial Toeplitz kernels.
///
/// Polynomials f = sum_k f_k z^k (n x 1) are identified with the stacked
/// coefficient vector (f_0; f_1; ...).
///

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include <nehari/hardy.hpp>

namespace nehari
{

struct TruncatedHankel
{
    MatrixSymbol symbol;
    int degree = 0;
    /// block (j, k) = c_{-j-k-1}, 0 <= j, k < degree
    CMatrix matrix;
};

struct TruncatedToeplitz
{
    MatrixSymbol symbol;
    int degree = 0;
    /// block (j, k) = c_{j-k}
    CMatrix matrix;
};

inline TruncatedHankel truncated_hankel(const MatrixSymbol& s, int degree)
{
    if (degree < 1)
    {
        throw ConfigurationError("truncated_hankel: degree must be positive");
    }
    const Index m = s.rows();
    const Index n = s.cols();
    TruncatedHankel h{s, degree, CMatrix::Zero(degree * m, degree * n)};
    for (int j = 0; j < degree; ++j)
    {
        for (int k = 0; k < degree; ++k)
        {
            const int idx = -j - k - 1;
            if (idx >= s.lo() && idx <= s.hi())
            {
                h.matrix.block(j * m, k * n, m, n) = s.coeff_ref(idx);
            }
        }
    }
    return h;
}

inline TruncatedToeplitz truncated_toeplitz(const MatrixSymbol& s, int degree)
{
    if (degree < 1)
    {
        throw ConfigurationError("truncated_toeplitz: degree must be positive");
    }
    const Index m = s.rows();
    const Index n = s.cols();
    TruncatedToeplitz t{s, degree, CMatrix::Zero(degree * m, degree * n)};
    for (int j = 0; j < degree; ++j)
    {
        for (int k = 0; k < degree; ++k)
        {
            const int idx = j - k;
            if (idx >= s.lo() && idx <= s.hi())
            {
                t.matrix.block(j * m, k * n, m, n) = s.coeff_ref(idx);
            }
        }
    }
    return t;
}

/// Analytic column symbol from a stacked coefficient vector.
inline MatrixSymbol column_from_stack(const CVector& x, Index n, double trim_tol = 0.0)
{
    const auto blocks = static_cast<int>(x.size() / n);
    MatrixSymbol f(n, 1, 0, std::max(0, blocks - 1));
    for (int k = 0; k < blocks; ++k)
    {
        f.coeff_ref(k) = x.segment(k * n, n);
    }
    MatrixSymbol t = f.trimmed(trim_tol * x.cwiseAbs().maxCoeff());
    return t.is_zero() ? MatrixSymbol(n, 1) : t;
}

/// Stacked coefficients (f_0; ...; f_{blocks-1}) of an analytic column.
inline CVector stack_from_column(const MatrixSymbol& f, int blocks)
{
    const Index n = f.rows();
    CVector x = CVector::Zero(blocks * n);
    for (int k = std::max(0, f.lo()); k <= std::min(f.hi(), blocks - 1); ++k)
    {
        x.segment(k * n, n) = f.coeff_ref(k).col(0);
    }
    return x;
}

/// Singular values and vectors of a dense matrix, Jacobi for small sizes.
struct DenseSvd
{
    RVector s;
    CMatrix u;
    CMatrix v;
};

inline DenseSvd dense_svd(const CMatrix& a, bool full = false)
{
    DenseSvd out;
    const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                               : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (std::max(a.rows(), a.cols()) <= 256)
    {
        Eigen::JacobiSVD<CMatrix> svd(a, opts);
        out.s = svd.singularValues();
        out.u = svd.matrixU();
        out.v = svd.matrixV();
    }
    else
    {
        Eigen::BDCSVD<CMatrix> svd(a, opts);
        out.s = svd.singularValues();
        out.u = svd.matrixU();
        out.v = svd.matrixV();
    }
    return out;
}

/// Smallest Hankel degree that captures every antianalytic coefficient.
inline int minimal_hankel_degree(const MatrixSymbol& s) { return std::max(1, -s.lo()); }

struct SchmidtPair
{
    /// maximizing vector of H_S (n x 1, analytic)
    MatrixSymbol f;
    /// norm^{-1} z conj(H_S f): maximizing vector of H_{S^t} (m x 1)
    MatrixSymbol g;
    double norm = 0.0;
    /// number of Hankel singular values within mult_tol * norm of the top one
    int multiplicity = 0;
    /// ||H f|| / ||f|| - norm
    double ratio_residual = 0.0;
    /// l2 norm of the negative coefficients of z conj(H f) / norm
    double g_antianalytic = 0.0;
};

/// Partner g = sigma^{-1} z conj(H_S f) of a maximizing vector f.
inline MatrixSymbol schmidt_partner(const MatrixSymbol& s, const MatrixSymbol& f, double sigma,
                                    double* antianalytic = nullptr)
{
    const MatrixSymbol hf = riesz_project(multiply(s, f), Part::antianalytic);
    MatrixSymbol g = (1.0 / sigma) * conj_symbol(hf).shifted(-1);
    if (antianalytic != nullptr)
    {
        *antianalytic = antianalytic_norm(g);
    }
    return riesz_project(g, Part::analytic).trimmed(0.0);
}

namespace detail
{

/// Multiply by the unimodular constant that makes the largest-modulus
/// coefficient entry real positive.
inline CVector phase_normalized(CVector x)
{
    Index best = 0;
    x.cwiseAbs().maxCoeff(&best);
    if (std::abs(x(best)) > 0.0)
    {
        x *= std::conj(x(best)) / std::abs(x(best));
    }
    return x;
}

inline void require_degree(const MatrixSymbol& s, int degree, const char* who)
{
    if (degree < -s.lo())
    {
        throw ConfigurationError(std::string(who) + ": degree " + std::to_string(degree) +
                                 " below |lo| = " + std::to_string(-s.lo()));
    }
}

} // namespace detail

/// Hankel singular values (descending) at degree N.
inline RVector hankel_singular_values(const MatrixSymbol& s, int degree)
{
    if (s.lo() >= 0 || s.is_zero())
    {
        return RVector::Zero(1);
    }
    detail::require_degree(s, degree, "hankel_singular_values");
    return dense_svd(truncated_hankel(s, degree).matrix).s;
}

inline double hankel_norm(const MatrixSymbol& s)
{
    return hankel_singular_values(s, minimal_hankel_degree(s))(0);
}

/// Number of entries of the descending vector `s` within rel_tol * s(0) of s(0).
inline int count_top_multiplicity(const RVector& s, double rel_tol)
{
    if (s.size() == 0 || s(0) <= 0.0)
    {
        return 0;
    }
    int count = 0;
    while (count < s.size() && s(0) - s(count) <= rel_tol * s(0))
    {
        ++count;
    }
    return count;
}

///
/// ||H_S|| with a maximizing pair.  Returns norm 0 and empty symbols when S
/// is analytic.
///
inline SchmidtPair hankel_norm_and_schmidt(const MatrixSymbol& s, int degree,
                                           const Tolerances& tol = {})
{
    SchmidtPair p;
    if (s.lo() >= 0 || riesz_project(s, Part::antianalytic).is_zero())
    {
        p.f = MatrixSymbol(s.cols(), 1);
        p.g = MatrixSymbol(s.rows(), 1);
        return p;
    }
    detail::require_degree(s, degree, "hankel_norm_and_schmidt");
    const auto h = truncated_hankel(s, degree);
    const auto svd = dense_svd(h.matrix);
    p.norm = svd.s(0);
    p.multiplicity = count_top_multiplicity(svd.s, tol.mult_tol);
    const CVector x = detail::phase_normalized(svd.v.col(0));
    p.f = column_from_stack(x, s.cols(), 1e-14);
    p.ratio_residual = std::abs((h.matrix * x).norm() / x.norm() - p.norm);
    p.g = schmidt_partner(s, p.f, p.norm, &p.g_antianalytic);
    return p;
}

/// Orthonormal basis of the maximizing vectors of H_S (as analytic columns).
inline std::vector<MatrixSymbol> maximizing_subspace(const MatrixSymbol& s, int degree,
                                                     const Tolerances& tol = {})
{
    if (s.lo() >= 0 || riesz_project(s, Part::antianalytic).is_zero())
    {
        throw DegenerateInputError("maximizing_subspace: Hankel operator vanishes");
    }
    detail::require_degree(s, degree, "maximizing_subspace");
    const auto svd = dense_svd(truncated_hankel(s, degree).matrix);
    const int count = count_top_multiplicity(svd.s, tol.mult_tol);
    std::vector<MatrixSymbol> out;
    for (int i = 0; i < count; ++i)
    {
        out.push_back(column_from_stack(detail::phase_normalized(svd.v.col(i)), s.cols(), 1e-14));
    }
    return out;
}

///
/// Orthonormal basis of the polynomials f (n x 1, degree <= D) with
/// P_+(S f) = 0 within kernel_tol.  The check window N is raised to D + hi
/// so that every analytic coefficient of S f is tested.
///
inline std::vector<MatrixSymbol> toeplitz_kernel(const MatrixSymbol& s, int max_degree,
                                                 int window = 0, const Tolerances& tol = {})
{
    if (max_degree < 0)
    {
        throw ConfigurationError("toeplitz_kernel: negative degree bound");
    }
    const Index m = s.rows();
    const Index n = s.cols();
    const int top = std::max({window, max_degree + s.hi(), 0});
    CMatrix a = CMatrix::Zero((top + 1) * m, (max_degree + 1) * n);
    for (int i = 0; i <= top; ++i)
    {
        for (int k = 0; k <= max_degree; ++k)
        {
            const int idx = i - k;
            if (idx >= s.lo() && idx <= s.hi())
            {
                a.block(i * m, k * n, m, n) = s.coeff_ref(idx);
            }
        }
    }
    const auto svd = dense_svd(a, true);
    const double cut = tol.kernel_tol * std::max(1.0, svd.s.size() > 0 ? svd.s(0) : 0.0);
    Index rank = 0;
    while (rank < svd.s.size() && svd.s(rank) > cut)
    {
        ++rank;
    }
    std::vector<MatrixSymbol> out;
    for (Index c = rank; c < a.cols(); ++c)
    {
        out.push_back(column_from_stack(detail::phase_normalized(svd.v.col(c)), n, 1e-14));
    }
    return out;
}

struct EssentialNormEstimate
{
    double value = 0.0;
    std::string note;
};

/// Essential Hankel norm; zero for every band-limited symbol.
inline EssentialNormEstimate essential_norm_estimate(const MatrixSymbol& s)
{
    (void)s;
    return {0.0, "band-limited symbol: finite-rank Hankel operator, compact"};
}

} // namespace nehari

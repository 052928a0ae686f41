#pragma once

///
/// \file factorize.hpp
///
/// Inner factors of shift-invariant subspaces and balanced completions.
///
/// Both constructions reduce to one primitive: for a closed shift-invariant
/// subspace M = Y H^2 with Y inner, the projection of the reproducing kernel
/// k_lambda e_j onto M equals k_lambda Y Y(lambda)^* e_j.  Projections are
/// computed by least squares on polynomial truncations of M (or of its
/// orthogonal complement), and Y is read off with a fixed gauge.
///

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <nehari/hankel.hpp>

namespace nehari
{

///
/// Vector associated with an (r+1) x r matrix A:
/// alpha_i = (-1)^(i+1) det(A with row i deleted), 0-based i.
/// Satisfies A^t alpha = 0 (bilinear, no conjugation).
///
inline CVector associated_vector(const CMatrix& a)
{
    const Index r = a.cols();
    if (a.rows() != r + 1)
    {
        throw ConfigurationError("associated_vector: expected an (r+1) x r matrix");
    }
    CVector alpha(r + 1);
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
        const Complex det = r == 0 ? Complex(1.0) : minor.partialPivLu().determinant();
        alpha(i) = (i % 2 == 0 ? -1.0 : 1.0) * det;
    }
    return alpha;
}

struct InnerFactor
{
    /// n x d inner function generating the subspace
    MatrixSymbol upsilon;
    int rank = 0;
    /// point of the disk at which the gauge is fixed
    Complex gauge_point = 0.0;
    /// polynomial truncation degree at which the projection converged
    int projection_degree = 0;
    bool converged = false;
    /// max_t || Y^* Y - I ||
    double inner_residual = 0.0;
    /// max over inputs of || c - Y P_+(Y^* c) ||_2
    double column_residual = 0.0;
    /// band-fit energy dropped from Y
    double tail_energy = 0.0;
    /// outerness test of Y^t: max_k min_p || e_k - Y^t p ||_2 over deg p <= D
    double co_outer_residual = 0.0;
    int co_outer_degree = 0;
    bool co_outer = false;
};

struct BalancedCompletion
{
    MatrixSymbol upsilon;
    /// n x (n - r) inner complement
    MatrixSymbol theta;
    /// (Y, conj(Theta)), unitary-valued
    MatrixSymbol V;
    /// analytic certificate assembled from associated vectors
    MatrixSymbol G;
    std::vector<Index> pivot_rows;
    Complex gauge_point = 0.0;
    int projection_degree = 0;
    bool converged = false;
    double unitarity_residual = 0.0;
    double upsilon_antianalytic = 0.0;
    double theta_antianalytic = 0.0;
    double theta_tail = 0.0;
    /// max_t || Y^t G ||
    double g_residual = 0.0;
    /// max_t || (I - Theta Theta^*) G || / || G ||
    double g_range_residual = 0.0;
    double g_antianalytic = 0.0;
    /// min_t s_min(Theta(zeta_t)); necessary condition for left invertibility only
    double theta_min_singular = 0.0;
    double co_outer_residual = 0.0;
    int co_outer_degree = 0;
    bool co_outer = false;
};

namespace detail
{

/// Candidate gauge points, tried in order.
inline const std::vector<Complex>& gauge_points()
{
    static const std::vector<Complex> pts = {
        Complex(0.0, 0.0),   Complex(0.5, 0.0),  Complex(0.0, 0.5),  Complex(-0.5, 0.0),
        Complex(0.0, -0.5),  Complex(0.3, 0.3),  Complex(-0.3, 0.3), Complex(-0.3, -0.3),
        Complex(0.3, -0.3),  Complex(0.7, 0.0),  Complex(-0.7, 0.0)};
    return pts;
}

/// Coefficients of k_lambda e_j = sum_k conj(lambda)^k z^k e_j, degrees < blocks.
inline CVector kernel_stack(Complex lambda, Index j, Index n, int blocks)
{
    CVector x = CVector::Zero(blocks * n);
    Complex p = 1.0;
    for (int k = 0; k < blocks; ++k)
    {
        x(k * n + j) = p;
        p *= std::conj(lambda);
    }
    return x;
}

/// n x n symbol whose column j is (1 - conj(lambda) z) * (stacked polynomial j).
inline MatrixSymbol kernel_matrix_symbol(const CMatrix& stacks, Index n, Complex lambda)
{
    const auto blocks = static_cast<int>(stacks.rows() / n);
    MatrixSymbol out(n, stacks.cols(), 0, blocks);
    for (Index j = 0; j < stacks.cols(); ++j)
    {
        for (int k = 0; k < blocks; ++k)
        {
            const CVector c = stacks.col(j).segment(k * n, n);
            out.coeff_ref(k).col(j) += c;
            out.coeff_ref(k + 1).col(j) -= std::conj(lambda) * c;
        }
    }
    return out;
}

struct GaugedFactor
{
    MatrixSymbol factor;
    Complex lambda = 0.0;
    double min_eigenvalue = 0.0;
};

///
/// Given J = Y Y(lambda)^* (n x n symbol) with Y inner of rank d, return
/// Y C with C unitary fixed by: rows P of (Y C)(lambda) form a lower
/// triangular matrix with positive diagonal, P = first d column pivots of
/// J(lambda).
///
inline std::optional<GaugedFactor> gauge_fixed_factor(const MatrixSymbol& j, Complex lambda, int d,
                                                      double min_eig)
{
    CMatrix jl = j.value_at(lambda);
    jl = 0.5 * (jl + jl.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(jl);
    const RVector ev = es.eigenvalues();
    const Index n = jl.rows();
    const double dth = ev(n - d);
    const double next = n - d - 1 >= 0 ? ev(n - d - 1) : 0.0;
    if (dth < min_eig || next > 1e-3 * dth)
    {
        return std::nullopt;
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(jl);
    std::vector<Index> pivots;
    for (int i = 0; i < d; ++i)
    {
        pivots.push_back(qr.colsPermutation().indices()(i));
    }
    std::sort(pivots.begin(), pivots.end());
    MatrixSymbol jp(n, d, j.lo(), j.hi());
    CMatrix gram(d, d);
    for (int a = 0; a < d; ++a)
    {
        for (int k = j.lo(); k <= j.hi(); ++k)
        {
            jp.coeff_ref(k).col(a) = j.coeff_ref(k).col(pivots[static_cast<std::size_t>(a)]);
        }
        for (int b = 0; b < d; ++b)
        {
            gram(a, b) = jl(pivots[static_cast<std::size_t>(a)], pivots[static_cast<std::size_t>(b)]);
        }
    }
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
    {
        return std::nullopt;
    }
    // J_P (L^*)^{-1}
    const CMatrix lstar_inv = llt.matrixU().solve(CMatrix::Identity(d, d));
    return GaugedFactor{jp.times_constant(lstar_inv), lambda, dth};
}

/// Least-squares solver reused across many right-hand sides.
class RangeProjector
{
public:
    explicit RangeProjector(const CMatrix& range) : m_range(range), m_cod(range)
    {
        m_cod.setThreshold(1e-12);
    }

    /// Orthogonal projection of x onto the column span.
    CVector project(const CVector& x) const
    {
        if (m_range.cols() == 0)
        {
            return CVector::Zero(x.size());
        }
        return m_range * m_cod.solve(x);
    }

private:
    CMatrix m_range;
    Eigen::CompleteOrthogonalDecomposition<CMatrix> m_cod;
};

/// Band-fit a symbol sampled on its own grid back to an analytic symbol.
inline BandFit refit_analytic(const MatrixSymbol& s, long grid_size, double fit_tol)
{
    const CircleGrid g = CircleGrid::for_symbol(s, grid_size);
    FitOptions opts;
    opts.lo = 0;
    opts.tol = fit_tol;
    return fit_symbol(evaluate(s, g), g, opts);
}

/// max_t || Y(zeta_t)^* Y(zeta_t) - I ||
inline double isometry_residual(const MatrixSymbol& y, long grid_size)
{
    const CircleGrid g = CircleGrid::for_symbol(y, grid_size);
    double worst = 0.0;
    for (const auto& v : evaluate(y, g))
    {
        worst = std::max(worst,
                         spectral_norm(v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols())));
    }
    return worst;
}

/// Block Toeplitz matrix of multiplication by an analytic symbol a (p x q):
/// maps coefficients of x (q x 1, degree < in_blocks) to those of a x.
inline CMatrix multiplication_matrix(const MatrixSymbol& a, int in_blocks)
{
    const int deg = std::max(0, a.hi());
    const int out_blocks = in_blocks + deg;
    CMatrix t = CMatrix::Zero(out_blocks * a.rows(), in_blocks * a.cols());
    for (int i = 0; i < out_blocks; ++i)
    {
        for (int k = 0; k < in_blocks; ++k)
        {
            const int idx = i - k;
            if (idx >= std::max(0, a.lo()) && idx <= a.hi())
            {
                t.block(i * a.rows(), k * a.cols(), a.rows(), a.cols()) = a.coeff_ref(idx);
            }
        }
    }
    return t;
}

/// Outerness test of y^t: max_k min_p || e_k - y^t p ||_2, deg p <= D.
inline double co_outer_residual(const MatrixSymbol& y, int degree)
{
    const MatrixSymbol yt = transpose_symbol(riesz_project(y, Part::analytic));
    const CMatrix t = multiplication_matrix(yt, degree + 1);
    if (t.cols() == 0)
    {
        return 0.0;
    }
    const RangeProjector proj(t);
    double worst = 0.0;
    for (Index k = 0; k < yt.rows(); ++k)
    {
        CVector e = CVector::Zero(t.rows());
        e(k) = 1.0;
        worst = std::max(worst, (e - proj.project(e)).norm());
    }
    return worst;
}

/// Pointwise rank of sampled data that is constant off at most 1% of points.
inline int almost_everywhere_rank(const GridFunction& vals, double rel_tol, const char* who)
{
    double global = 0.0;
    std::vector<RVector> svs;
    svs.reserve(vals.size());
    for (const auto& v : vals)
    {
        Eigen::JacobiSVD<CMatrix> svd(v);
        svs.push_back(svd.singularValues());
        if (svs.back().size() > 0)
        {
            global = std::max(global, svs.back()(0));
        }
    }
    std::vector<int> counts(static_cast<std::size_t>(vals.front().cols() + vals.front().rows() + 1), 0);
    for (const auto& s : svs)
    {
        int r = 0;
        while (r < s.size() && s(r) > rel_tol * global)
        {
            ++r;
        }
        ++counts[static_cast<std::size_t>(r)];
    }
    const auto best = std::max_element(counts.begin(), counts.end());
    const double off = 1.0 - static_cast<double>(*best) / static_cast<double>(vals.size());
    if (off > 0.01)
    {
        throw DegenerateInputError(std::string(who) + ": pointwise rank is not constant on " +
                                   std::to_string(100.0 * off) + "% of the grid");
    }
    return static_cast<int>(best - counts.begin());
}

struct ProjectionOutcome
{
    GaugedFactor gauged;
    int degree = 0;
    bool converged = false;
};

///
/// Shared driver: build_stacks(K, lambda) returns the n x n matrix of
/// stacked coefficient columns P(k_lambda e_j) for truncation K.  Doubles K
/// until the kernel matrix symbol stabilizes, then fixes the gauge.
///
template <class StackBuilder>
ProjectionOutcome converge_projection(StackBuilder&& build_stacks, Index n, int d, int k0,
                                      int kmax, const char* who)
{
    const auto& pts = gauge_points();
    std::optional<GaugedFactor> best;
    for (const Complex lambda : pts)
    {
        int k = k0;
        MatrixSymbol prev;
        bool have_prev = false;
        bool converged = false;
        MatrixSymbol j;
        while (true)
        {
            j = kernel_matrix_symbol(build_stacks(k, lambda), n, lambda);
            if (have_prev && (j - prev).max_abs_coeff() < 1e-11)
            {
                converged = true;
                break;
            }
            if (k >= kmax)
            {
                break;
            }
            prev = j;
            have_prev = true;
            k *= 2;
        }
        auto g = gauge_fixed_factor(j.trimmed(1e-15), lambda, d, 1e-8);
        if (!g)
        {
            continue;
        }
        if (g->min_eigenvalue > 1e-3)
        {
            return {*g, k, converged};
        }
        if (!best || g->min_eigenvalue > best->min_eigenvalue)
        {
            best = g;
        }
    }
    if (!best)
    {
        throw FactorizationError(std::string(who) + ": no gauge point with rank " +
                                 std::to_string(d));
    }
    return {*best, kmax, false};
}

} // namespace detail

///
/// Inner factor Y (n x d) of the smallest closed shift-invariant subspace
/// of H^2(C^n) containing the given analytic columns.
///
inline InnerFactor stacked_inner_factor(const std::vector<MatrixSymbol>& columns,
                                        const CircleGrid& grid, const Tolerances& tol = {},
                                        int co_outer_degree = 8)
{
    if (columns.empty())
    {
        throw DegenerateInputError("stacked_inner_factor: no columns");
    }
    const Index n = columns.front().rows();
    int p = 0;
    MatrixSymbol stacked(n, 0);
    for (const auto& c : columns)
    {
        if (c.rows() != n || c.cols() != 1)
        {
            throw ConfigurationError("stacked_inner_factor: columns must be n x 1");
        }
        if (antianalytic_norm(c) > 1e-12 * std::max(1.0, c.max_abs_coeff()))
        {
            throw ConfigurationError("stacked_inner_factor: columns must be analytic");
        }
        p = std::max(p, c.hi());
        stacked = stacked.cols() == 0 ? c : hstack(stacked, c);
    }
    if (stacked.is_zero())
    {
        throw DegenerateInputError("stacked_inner_factor: all columns vanish");
    }
    const MatrixSymbol f = riesz_project(stacked, Part::analytic);
    const CircleGrid g = CircleGrid::for_symbol(f, grid.size());
    const int d = detail::almost_everywhere_rank(evaluate(f, g), 1e-7, "stacked_inner_factor");

    const auto build = [&](int k, Complex lambda) {
        const CMatrix t = detail::multiplication_matrix(f, k);
        const detail::RangeProjector proj(t);
        const int blocks = static_cast<int>(t.rows() / n);
        CMatrix stacks(blocks * n, n);
        for (Index j = 0; j < n; ++j)
        {
            stacks.col(j) = proj.project(detail::kernel_stack(lambda, j, n, blocks));
        }
        return stacks;
    };
    const auto outcome = detail::converge_projection(build, n, d, std::max(16, 2 * p + 2), 256,
                                                     "stacked_inner_factor");

    InnerFactor out;
    const auto fit = detail::refit_analytic(outcome.gauged.factor, g.size(), tol.fit_tol);
    out.upsilon = fit.symbol;
    out.tail_energy = fit.tail_energy;
    out.rank = d;
    out.gauge_point = outcome.gauged.lambda;
    out.projection_degree = outcome.degree;
    out.converged = outcome.converged;
    out.inner_residual = detail::isometry_residual(out.upsilon, g.size());
    const MatrixSymbol ystar = adjoint_symbol(out.upsilon);
    for (const auto& c : columns)
    {
        const auto back = multiply(out.upsilon, riesz_project(multiply(ystar, c), Part::analytic));
        out.column_residual = std::max(out.column_residual, (c - back).coefficient_norm());
    }
    out.co_outer_degree = co_outer_degree;
    out.co_outer_residual = detail::co_outer_residual(out.upsilon, co_outer_degree);
    out.co_outer = out.co_outer_residual < 1e-6;
    return out;
}

///
/// Complete an inner n x r function Y to the unitary-valued V = (Y, conj(Theta))
/// with Theta inner: Theta H^2 = { g in H^2(C^n) : Y^t g = 0 }.
///
inline BalancedCompletion balanced_completion(const MatrixSymbol& upsilon, const CircleGrid& grid,
                                              const Tolerances& tol = {},
                                              int co_outer_degree = 8)
{
    const Index n = upsilon.rows();
    const Index r = upsilon.cols();
    if (r < 1 || n < r)
    {
        throw ConfigurationError("balanced_completion: expected n x r with 1 <= r <= n");
    }
    BalancedCompletion out;
    out.upsilon = upsilon;
    out.upsilon_antianalytic = antianalytic_norm(upsilon);
    const CircleGrid g = CircleGrid::for_symbol(upsilon, grid.size());
    const double inner_res = detail::isometry_residual(upsilon, g.size());
    if (inner_res > 1e-6 || out.upsilon_antianalytic > 1e-6)
    {
        throw FactorizationError("balanced_completion: input is not inner (residual " +
                                 std::to_string(std::max(inner_res, out.upsilon_antianalytic)) + ")");
    }
    const MatrixSymbol y = riesz_project(upsilon, Part::analytic);
    if (n == r)
    {
        out.theta = MatrixSymbol(n, 0);
        out.V = upsilon;
        out.G = MatrixSymbol(n, 0);
        out.unitarity_residual = inner_res;
        out.converged = true;
        out.theta_min_singular = 1.0;
        out.co_outer = true;
        return out;
    }
    const int deg = std::max(0, y.hi());

    // orthogonal complement of Theta H^2 is the closed range of T_{conj(Y)}
    const auto build = [&](int k, Complex lambda) {
        CMatrix t = CMatrix::Zero(k * n, k * r);
        for (int i = 0; i < k; ++i)
        {
            for (int jj = i; jj < std::min(k, i + deg + 1); ++jj)
            {
                t.block(i * n, jj * r, n, r) = y.coeff(jj - i).conjugate();
            }
        }
        const detail::RangeProjector proj(t);
        CMatrix stacks(k * n, n);
        for (Index j = 0; j < n; ++j)
        {
            const CVector e = detail::kernel_stack(lambda, j, n, k);
            stacks.col(j) = e - proj.project(e);
        }
        return stacks;
    };
    const auto outcome = detail::converge_projection(build, n, static_cast<int>(n - r),
                                                     std::max(16, 2 * deg + 2), 256,
                                                     "balanced_completion");
    const auto fit = detail::refit_analytic(outcome.gauged.factor, g.size(), tol.fit_tol);
    out.theta = fit.symbol;
    out.theta_tail = fit.tail_energy;
    out.theta_antianalytic = fit.antianalytic_energy;
    out.gauge_point = outcome.gauged.lambda;
    out.projection_degree = outcome.degree;
    out.converged = outcome.converged;
    out.V = hstack(upsilon, conj_symbol(out.theta));

    const CircleGrid vg = CircleGrid::for_symbol(out.V, g.size());
    const auto vv = evaluate(out.V, vg);
    for (const auto& v : vv)
    {
        out.unitarity_residual =
            std::max(out.unitarity_residual, spectral_norm(v.adjoint() * v - CMatrix::Identity(n, n)));
    }

    // pivot rows: column-pivoted QR on samples of Y^t
    const auto yv = evaluate(y, vg);
    const long samples = std::min<long>(16, vg.size());
    CMatrix stacked(r * samples, n);
    for (long s = 0; s < samples; ++s)
    {
        stacked.block(r * s, 0, r, n) =
            yv[static_cast<std::size_t>(s * vg.size() / samples)].transpose();
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(stacked);
    for (Index i = 0; i < r; ++i)
    {
        out.pivot_rows.push_back(qr.colsPermutation().indices()(i));
    }
    std::sort(out.pivot_rows.begin(), out.pivot_rows.end());
    std::vector<Index> others;
    for (Index k = 0; k < n; ++k)
    {
        if (std::find(out.pivot_rows.begin(), out.pivot_rows.end(), k) == out.pivot_rows.end())
        {
            others.push_back(k);
        }
    }

    // G column for row k: associated vector of (pivot rows; row k), pointwise
    const CircleGrid gg = CircleGrid::for_band(0, static_cast<int>(r + 1) * deg, vg.size());
    const auto ygv = evaluate(y, gg);
    GridFunction gvals(ygv.size(), CMatrix::Zero(n, n - r));
    for (std::size_t t = 0; t < ygv.size(); ++t)
    {
        for (std::size_t c = 0; c < others.size(); ++c)
        {
            CMatrix a(r + 1, r);
            for (Index i = 0; i < r; ++i)
            {
                a.row(i) = ygv[t].row(out.pivot_rows[static_cast<std::size_t>(i)]);
            }
            a.row(r) = ygv[t].row(others[c]);
            const CVector alpha = associated_vector(a);
            for (Index i = 0; i < r; ++i)
            {
                gvals[t](out.pivot_rows[static_cast<std::size_t>(i)], static_cast<Index>(c)) = alpha(i);
            }
            gvals[t](others[c], static_cast<Index>(c)) = alpha(r);
        }
    }
    FitOptions gfit;
    gfit.tol = tol.fit_tol;
    const auto gband = fit_symbol(gvals, gg, gfit);
    out.G = riesz_project(gband.symbol, Part::analytic);
    out.g_antianalytic = gband.antianalytic_energy;

    const CircleGrid cg = CircleGrid::for_band(0, std::max({out.G.hi(), out.theta.hi(), y.hi()}),
                                               vg.size());
    const auto gv = evaluate(out.G, cg);
    const auto tv = evaluate(out.theta, cg);
    const auto yv2 = evaluate(y, cg);
    out.theta_min_singular = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < gv.size(); ++t)
    {
        out.g_residual = std::max(out.g_residual, spectral_norm(yv2[t].transpose() * gv[t]));
        const double gn = spectral_norm(gv[t]);
        if (gn > 1e-8)
        {
            const CMatrix off = gv[t] - tv[t] * (tv[t].adjoint() * gv[t]);
            out.g_range_residual = std::max(out.g_range_residual, spectral_norm(off) / gn);
        }
        Eigen::JacobiSVD<CMatrix> svd(tv[t]);
        out.theta_min_singular =
            std::min(out.theta_min_singular, svd.singularValues()(svd.singularValues().size() - 1));
    }
    out.co_outer_degree = co_outer_degree;
    out.co_outer_residual = detail::co_outer_residual(out.theta, co_outer_degree);
    out.co_outer = out.co_outer_residual < 1e-6;
    if (out.unitarity_residual > 1e-6)
    {
        throw FactorizationError("balanced_completion: unitarity residual " +
                                 std::to_string(out.unitarity_residual) +
                                 " (is the input co-outer?)");
    }
    return out;
}

} // namespace nehari

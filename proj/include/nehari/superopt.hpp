#pragma once

///
/// \file superopt.hpp
///
/// Superoptimal approximation by successive thematic steps.  One step peels
/// the top level sigma of the residual:
///
///   Phi - F0 = W^* diag(sigma U, Psi) V^*,  V = (Y, conj(Theta)),  W^t = (Omega, conj(Xi)),
///
/// where Y, Omega are the inner factors generated by the maximizing vectors
/// of H_Phi and H_{Phi^t}.  Recursing on Psi and reassembling gives F with
/// s_j((Phi - F)(zeta)) = t_j on the circle.
///

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nehari/factorize.hpp>

namespace nehari
{

struct SuperoptConfig
{
    long grid = CircleGrid::default_size;
    /// Hankel truncation degree N (raised to |lo| when smaller)
    int degree = 16;
    /// number of levels to peel; 0 means min(rows, cols)
    int depth = 0;
    /// declared limit t_inf of the superoptimal singular values (tail model)
    std::optional<double> tail;
    Tolerances tol;
    /// degree bound for the co-outer tests of the inner factors
    int co_outer_degree = 8;
};

struct ThematicBlock
{
    double sigma = 0.0;
    /// superoptimal multiplicity (rank of the inner factor Y)
    int r = 0;
    /// number of Hankel singular values equal to sigma
    int hankel_multiplicity = 0;
    MatrixSymbol U;
    MatrixSymbol upsilon;
    MatrixSymbol theta;
    MatrixSymbol omega;
    MatrixSymbol xi;
    /// residual block of this step, (rows - r) x (cols - r)
    MatrixSymbol Psi;
    /// analytic correction used for this step
    MatrixSymbol F0;
    int F0_degree = 0;
    double F0_constraint_residual = 0.0;
    double offdiag_residual = 0.0;
    double reconstruction_residual = 0.0;
    double U_unitarity = 0.0;
    double U_hankel_norm = 0.0;
    double psi_sup_norm = 0.0;
    double psi_hankel_norm = 0.0;
    double V_unitarity = 0.0;
    double W_unitarity = 0.0;
    double theta_min_singular = 1.0;
    double xi_min_singular = 1.0;
    double essential_norm = 0.0;
    long grid_size = 0;
    /// scalar data of the r = 1 path: u = zbar conj(theta1 theta2) conj(h) / h
    bool scalar_path = false;
    MatrixSymbol theta1;
    MatrixSymbol theta2;
    MatrixSymbol h;
    double u_unimodularity = 0.0;
    double u_formula_residual = 0.0;
    int u_winding = 0;
};

struct SuperoptReport
{
    std::vector<double> t;
    std::vector<double> sigma;
    /// cumulative multiplicities r_1 < r_2 < ...
    std::vector<int> r;
    double t_inf = 0.0;
    bool tail_model = false;
    /// depth exhausted with a nonzero residual Hankel norm
    bool partial = false;
    std::vector<ThematicBlock> blocks;
    MatrixSymbol F;
    /// residual after the last analyzed level
    MatrixSymbol Psi;
    double psi_hankel_norm = 0.0;
    /// products of the complements mapping the final corner:
    /// Phi - F = ... + xi_total Psi_final theta_total^t
    MatrixSymbol xi_total;
    MatrixSymbol theta_total;
    /// max_t || (Phi - F) - W^* diag(...) V^* || after fitting F
    double reconstruction_residual = 0.0;
    /// negative-frequency energy of Phi - E (zero for an analytic F)
    double F_antianalytic = 0.0;
    double F_tail = 0.0;
    /// max_t ||(Phi - F)(zeta_t)||
    double error_sup_norm = 0.0;
    /// max_t |s_j((Phi - F)(zeta_t)) - t_j| for each listed t_j
    std::vector<double> level_deviation;
    long grid_size = 0;
    int hankel_degree = 0;
};

namespace detail
{

/// Coefficients of the analytic column P_+(S c) as a stacked vector of length blocks * rows.
inline CVector analytic_stack(const MatrixSymbol& s, const MatrixSymbol& c, int blocks)
{
    const MatrixSymbol p = riesz_project(multiply(s, c), Part::analytic);
    CVector x = CVector::Zero(blocks * s.rows());
    for (int k = std::max(0, p.lo()); k <= std::min(p.hi(), blocks - 1); ++k)
    {
        x.segment(k * s.rows(), s.rows()) = p.coeff_ref(k).col(0);
    }
    return x;
}

struct F0Solution
{
    MatrixSymbol F;
    int degree = 0;
    double residual = 0.0;
};

///
/// Minimum-norm analytic polynomial F of degree <= kf with
/// F f_i = P_+(Phi f_i) and F^t g_i = P_+(Phi^t g_i).  Every best
/// approximant satisfies these equations; any solution yields the same
/// leading block of W (Phi - F) V.
///
inline F0Solution solve_f0(const MatrixSymbol& phi, const std::vector<MatrixSymbol>& fs,
                           const std::vector<MatrixSymbol>& gs, int kf)
{
    const Index m = phi.rows();
    const Index n = phi.cols();
    const MatrixSymbol phit = transpose_symbol(phi);
    int fdeg = 0;
    for (const auto& f : fs)
    {
        fdeg = std::max(fdeg, f.hi());
    }
    for (const auto& g : gs)
    {
        fdeg = std::max(fdeg, g.hi());
    }
    const int blocks = kf + fdeg + 1;
    const Index unknowns = (kf + 1) * m * n;
    const auto idx = [&](int k, Index a, Index b) { return k * m * n + b * m + a; };
    const Index rows = static_cast<Index>(fs.size()) * blocks * m +
                       static_cast<Index>(gs.size()) * blocks * n;
    CMatrix a = CMatrix::Zero(rows, unknowns);
    CVector rhs = CVector::Zero(rows);
    Index row0 = 0;
    for (const auto& f : fs)
    {
        rhs.segment(row0, blocks * m) = analytic_stack(phi, f, blocks);
        for (int p = 0; p < blocks; ++p)
        {
            for (int k = 0; k <= std::min(p, kf); ++k)
            {
                const CMatrix fl = f.coeff(p - k);
                for (Index ai = 0; ai < m; ++ai)
                {
                    for (Index b = 0; b < n; ++b)
                    {
                        a(row0 + p * m + ai, idx(k, ai, b)) += fl(b, 0);
                    }
                }
            }
        }
        row0 += blocks * m;
    }
    for (const auto& g : gs)
    {
        rhs.segment(row0, blocks * n) = analytic_stack(phit, g, blocks);
        for (int p = 0; p < blocks; ++p)
        {
            for (int k = 0; k <= std::min(p, kf); ++k)
            {
                const CMatrix gl = g.coeff(p - k);
                for (Index b = 0; b < n; ++b)
                {
                    for (Index ai = 0; ai < m; ++ai)
                    {
                        a(row0 + p * n + b, idx(k, ai, b)) += gl(ai, 0);
                    }
                }
            }
        }
        row0 += blocks * n;
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a);
    cod.setThreshold(1e-12);
    const CVector x = cod.solve(rhs);
    F0Solution out;
    out.degree = kf;
    out.residual = (a * x - rhs).norm();
    MatrixSymbol F(m, n, 0, kf);
    for (int k = 0; k <= kf; ++k)
    {
        for (Index ai = 0; ai < m; ++ai)
        {
            for (Index b = 0; b < n; ++b)
            {
                F.coeff_ref(k)(ai, b) = x(idx(k, ai, b));
            }
        }
    }
    out.F = F.trimmed(1e-15 * std::max(1.0, F.max_abs_coeff()));
    if (out.F.is_zero())
    {
        out.F = MatrixSymbol(m, n);
    }
    return out;
}

/// Unitary factor of the polar decomposition.
inline CMatrix polar_unitary(const CMatrix& a)
{
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

/// V(zeta) = (Y, conj(Theta)) from samples.
inline CMatrix v_value(const CMatrix& y, const CMatrix& theta)
{
    CMatrix v(y.rows(), y.cols() + theta.cols());
    v << y, theta.conjugate();
    return v;
}

/// W(zeta) = (Omega, conj(Xi))^t from samples.
inline CMatrix w_value(const CMatrix& omega, const CMatrix& xi)
{
    CMatrix w(omega.cols() + xi.cols(), omega.rows());
    w << omega.transpose(), xi.adjoint();
    return w;
}

inline int band_width(const MatrixSymbol& s) { return s.hi() - s.lo(); }

inline double max_unitarity(const GridFunction& vals)
{
    double worst = 0.0;
    for (const auto& v : vals)
    {
        if (v.size() > 0)
        {
            worst = std::max(worst, spectral_norm(v.adjoint() * v -
                                                  CMatrix::Identity(v.cols(), v.cols())));
        }
    }
    return worst;
}

} // namespace detail

///
/// One thematic step on a symbol with nonzero Hankel operator.
///
inline ThematicBlock thematic_step(const MatrixSymbol& phi, const SuperoptConfig& cfg)
{
    const Index m = phi.rows();
    const Index n = phi.cols();
    const Tolerances& tol = cfg.tol;
    ThematicBlock blk;
    const int degree = std::max(cfg.degree, minimal_hankel_degree(phi));
    const auto svd = dense_svd(truncated_hankel(phi, degree).matrix);
    blk.sigma = svd.s(0);
    if (blk.sigma <= tol.stop_tol)
    {
        throw DegenerateInputError("thematic_step: Hankel operator vanishes");
    }
    blk.essential_norm = essential_norm_estimate(phi).value;
    blk.hankel_multiplicity = count_top_multiplicity(svd.s, tol.mult_tol);

    std::vector<MatrixSymbol> fs;
    std::vector<MatrixSymbol> gs;
    for (int i = 0; i < blk.hankel_multiplicity; ++i)
    {
        fs.push_back(column_from_stack(detail::phase_normalized(svd.v.col(i)), n, 1e-14));
        gs.push_back(schmidt_partner(phi, fs.back(), blk.sigma));
    }

    // analytic correction
    detail::F0Solution f0;
    for (int kf = 32; kf <= 128; kf *= 2)
    {
        f0 = detail::solve_f0(phi, fs, gs, kf);
        if (f0.residual < 1e-11 * std::max(1.0, blk.sigma))
        {
            break;
        }
    }
    blk.F0 = f0.F;
    blk.F0_degree = f0.degree;
    blk.F0_constraint_residual = f0.residual;

    const CircleGrid base = CircleGrid::for_symbol(phi, cfg.grid);
    const auto yf = stacked_inner_factor(fs, base, tol, cfg.co_outer_degree);
    const auto of = stacked_inner_factor(gs, base, tol, cfg.co_outer_degree);
    if (yf.rank != of.rank)
    {
        throw FactorizationError("thematic_step: inner factors of f and g have ranks " +
                                 std::to_string(yf.rank) + " and " + std::to_string(of.rank));
    }
    const int r = yf.rank;
    blk.r = r;
    MatrixSymbol upsilon = yf.upsilon;
    blk.omega = of.upsilon;
    if (r < n)
    {
        const auto c = balanced_completion(upsilon, base, tol, cfg.co_outer_degree);
        blk.theta = c.theta;
        blk.theta_min_singular = c.theta_min_singular;
    }
    else
    {
        blk.theta = MatrixSymbol(n, 0);
    }
    if (r < m)
    {
        const auto c = balanced_completion(blk.omega, base, tol, cfg.co_outer_degree);
        blk.xi = c.theta;
        blk.xi_min_singular = c.theta_min_singular;
    }
    else
    {
        blk.xi = MatrixSymbol(m, 0);
    }

    // working grid large enough for W (Phi - F0) V without aliasing
    const MatrixSymbol e = phi - blk.F0;
    const int width = detail::band_width(e) + 2 * std::max(detail::band_width(upsilon),
                                                           detail::band_width(blk.theta)) +
                      2 * std::max(detail::band_width(blk.omega), detail::band_width(blk.xi));
    const CircleGrid g(next_power_of_two(std::max(cfg.grid, 2L * width + 2)));
    blk.grid_size = g.size();
    const auto ev = evaluate(e, g);
    const auto yv = evaluate(upsilon, g);
    const auto tv = evaluate(blk.theta, g);
    const auto ov = evaluate(blk.omega, g);
    const auto xv = evaluate(blk.xi, g);

    GridFunction uv(ev.size());
    GridFunction pv(ev.size());
    GridFunction vv(ev.size());
    GridFunction wv(ev.size());
    for (std::size_t t = 0; t < ev.size(); ++t)
    {
        vv[t] = detail::v_value(yv[t], tv[t]);
        wv[t] = detail::w_value(ov[t], xv[t]);
        const CMatrix b = wv[t] * ev[t] * vv[t];
        uv[t] = b.topLeftCorner(r, r) / blk.sigma;
        pv[t] = b.bottomRightCorner(m - r, n - r);
        double off = 0.0;
        if (n > r)
        {
            off = std::max(off, spectral_norm(b.topRightCorner(r, n - r)));
        }
        if (m > r)
        {
            off = std::max(off, spectral_norm(b.bottomLeftCorner(m - r, r)));
        }
        blk.offdiag_residual = std::max(blk.offdiag_residual, off);
    }
    blk.V_unitarity = detail::max_unitarity(vv);
    blk.W_unitarity = detail::max_unitarity(wv);
    if (blk.offdiag_residual > 1e-6 * std::max(1.0, blk.sigma))
    {
        throw FactorizationError("thematic_step: off-diagonal blocks of W (Phi - F0) V do not vanish (" +
                                 std::to_string(blk.offdiag_residual) + ")");
    }

    // gauge: U(1) Hermitian positive semidefinite
    const CMatrix c = detail::polar_unitary(uv[0]).adjoint();
    for (auto& u : uv)
    {
        u = u * c;
    }
    upsilon = upsilon.times_constant(c);
    blk.upsilon = upsilon;

    FitOptions full;
    full.tol = std::max(tol.fit_tol, 1e-13);
    full.lo = e.lo() + std::min(blk.omega.lo(), -blk.xi.hi()) + std::min(upsilon.lo(), -blk.theta.hi());
    full.hi = e.hi() + std::max(blk.omega.hi(), -blk.xi.lo()) + std::max(upsilon.hi(), -blk.theta.lo());
    blk.U = fit_symbol(uv, g, full).symbol;
    blk.Psi = fit_symbol(pv, g, full).symbol;
    blk.U_unitarity = detail::max_unitarity(uv);
    blk.U_hankel_norm = hankel_norm(blk.U);
    blk.psi_sup_norm = sup_norm(pv);
    blk.psi_hankel_norm = (m > r && n > r) ? hankel_norm(blk.Psi) : 0.0;

    // reconstruction of Phi - F0 from the fitted blocks
    const auto ufit = evaluate(blk.U, g);
    const auto pfit = evaluate(blk.Psi, g);
    for (std::size_t t = 0; t < ev.size(); ++t)
    {
        CMatrix d = CMatrix::Zero(m, n);
        d.topLeftCorner(r, r) = blk.sigma * ufit[t];
        d.bottomRightCorner(m - r, n - r) = pfit[t];
        const CMatrix vt = detail::v_value(yv[t] * c, tv[t]);
        blk.reconstruction_residual = std::max(
            blk.reconstruction_residual, spectral_norm(ev[t] - wv[t].adjoint() * d * vt.adjoint()));
    }

    if (r == 1)
    {
        blk.scalar_path = true;
        const auto cf = column_inner_outer(fs.front(), base, tol);
        const auto cg = column_inner_outer(gs.front(), base, tol);
        blk.theta1 = cf.theta;
        blk.theta2 = cg.theta;
        blk.h = cf.h;
        const auto t1 = evaluate(cf.theta, g);
        const auto t2 = evaluate(cg.theta, g);
        const auto hv = evaluate(cf.h, g);
        std::vector<Complex> formula(ev.size());
        for (std::size_t t = 0; t < ev.size(); ++t)
        {
            const Complex zeta = g.point(static_cast<long>(t));
            formula[t] = std::conj(zeta * t1[t](0, 0) * t2[t](0, 0)) * std::conj(hv[t](0, 0)) /
                         hv[t](0, 0);
            blk.u_unimodularity =
                std::max(blk.u_unimodularity, std::abs(std::abs(ufit[t](0, 0)) - 1.0));
        }
        const Complex align = ufit[0](0, 0) / formula[0];
        for (std::size_t t = 0; t < ev.size(); ++t)
        {
            blk.u_formula_residual =
                std::max(blk.u_formula_residual, std::abs(align * formula[t] - ufit[t](0, 0)));
        }
        blk.u_winding = winding_number(blk.U, g);
    }
    return blk;
}

///
/// Peel up to `depth` levels and assemble an analytic F with
/// s_j((Phi - F)(zeta)) = t_j on the grid.
///
inline SuperoptReport superopt_factorize(const MatrixSymbol& phi, const SuperoptConfig& cfg = {})
{
    const Index m = phi.rows();
    const Index n = phi.cols();
    if (m == 0 || n == 0)
    {
        throw ConfigurationError("superopt_factorize: empty symbol");
    }
    const int depth = cfg.depth > 0 ? cfg.depth : static_cast<int>(std::min(m, n));
    SuperoptReport rep;
    rep.tail_model = cfg.tail.has_value();
    rep.hankel_degree = std::max(cfg.degree, minimal_hankel_degree(phi));

    MatrixSymbol current = phi;
    int consumed = 0;
    while (static_cast<int>(rep.blocks.size()) < depth && current.rows() > 0 && current.cols() > 0)
    {
        const double h = hankel_singular_values(
            current, std::max(cfg.degree, minimal_hankel_degree(current)))(0);
        if (h <= cfg.tol.stop_tol)
        {
            break;
        }
        rep.blocks.push_back(thematic_step(current, cfg));
        const auto& blk = rep.blocks.back();
        consumed += blk.r;
        rep.sigma.push_back(blk.sigma);
        rep.r.push_back(consumed);
        for (int i = 0; i < blk.r; ++i)
        {
            rep.t.push_back(blk.sigma);
        }
        current = blk.Psi;
    }
    rep.Psi = current;
    const bool corner = current.rows() > 0 && current.cols() > 0;
    rep.psi_hankel_norm = corner ? hankel_singular_values(
                                       current, std::max(cfg.degree, minimal_hankel_degree(current)))(0)
                                 : 0.0;
    rep.partial = corner && rep.psi_hankel_norm > cfg.tol.stop_tol;
    if (rep.tail_model)
    {
        rep.t_inf = *cfg.tail;
    }
    else if (!rep.partial)
    {
        const auto remaining = static_cast<std::size_t>(std::min(m, n)) - rep.t.size();
        for (std::size_t i = 0; i < remaining; ++i)
        {
            rep.t.push_back(rep.psi_hankel_norm);
        }
        rep.t_inf = remaining > 0 ? rep.psi_hankel_norm : 0.0;
    }

    // assemble E = Phi - F on a common grid
    long size = CircleGrid::for_symbol(phi, cfg.grid).size();
    for (const auto& b : rep.blocks)
    {
        size = std::max(size, b.grid_size);
    }
    size = std::max(size, CircleGrid::for_symbol(current, cfg.grid).size());
    const CircleGrid g(size);
    rep.grid_size = size;

    GridFunction err;
    if (corner)
    {
        const MatrixSymbol tail_part =
            rep.partial ? current : riesz_project(current, Part::antianalytic);
        err = evaluate(tail_part, g);
    }
    else
    {
        err.assign(static_cast<std::size_t>(size), CMatrix::Zero(current.rows(), current.cols()));
    }
    for (auto it = rep.blocks.rbegin(); it != rep.blocks.rend(); ++it)
    {
        const auto yv = evaluate(it->upsilon, g);
        const auto tv = evaluate(it->theta, g);
        const auto ov = evaluate(it->omega, g);
        const auto xv = evaluate(it->xi, g);
        const auto uv = evaluate(it->U, g);
        const Index bm = it->omega.rows();
        const Index bn = it->upsilon.rows();
        for (std::size_t t = 0; t < err.size(); ++t)
        {
            CMatrix d = CMatrix::Zero(bm, bn);
            d.topLeftCorner(it->r, it->r) = it->sigma * uv[t];
            d.bottomRightCorner(bm - it->r, bn - it->r) = err[t];
            err[t] = detail::w_value(ov[t], xv[t]).adjoint() * d *
                     detail::v_value(yv[t], tv[t]).adjoint();
        }
    }

    const auto phiv = evaluate(phi, g);
    GridFunction fv(err.size());
    for (std::size_t t = 0; t < err.size(); ++t)
    {
        fv[t] = phiv[t] - err[t];
    }
    FitOptions analytic;
    analytic.lo = 0;
    analytic.tol = std::max(cfg.tol.fit_tol, 1e-13);
    const auto ffit = fit_symbol(fv, g, analytic);
    rep.F = ffit.symbol;
    rep.F_antianalytic = ffit.antianalytic_energy;
    rep.F_tail = ffit.tail_energy;

    const CircleGrid cg = CircleGrid::for_band(std::min(phi.lo(), rep.F.lo()),
                                               std::max(phi.hi(), rep.F.hi()), size);
    const auto diff = evaluate(phi - rep.F, cg);
    const auto fitted = evaluate(rep.F, g);
    for (std::size_t t = 0; t < err.size(); ++t)
    {
        rep.reconstruction_residual =
            std::max(rep.reconstruction_residual, spectral_norm(phiv[t] - fitted[t] - err[t]));
    }
    const auto prof = singular_value_profile(diff);
    rep.level_deviation.assign(rep.t.size(), 0.0);
    for (Index t = 0; t < prof.rows(); ++t)
    {
        rep.error_sup_norm = std::max(rep.error_sup_norm, prof.cols() > 0 ? prof(t, 0) : 0.0);
        for (std::size_t j = 0; j < rep.t.size() && static_cast<Index>(j) < prof.cols(); ++j)
        {
            rep.level_deviation[j] = std::max(rep.level_deviation[j],
                                              std::abs(prof(t, static_cast<Index>(j)) - rep.t[j]));
        }
    }

    // complements of the final corner
    MatrixSymbol xi_tot = MatrixSymbol::identity(m);
    MatrixSymbol theta_tot = MatrixSymbol::identity(n);
    for (const auto& b : rep.blocks)
    {
        xi_tot = multiply(xi_tot, b.xi);
        theta_tot = multiply(theta_tot, b.theta);
    }
    rep.xi_total = xi_tot;
    rep.theta_total = theta_tot;
    return rep;
}

struct MembershipReport
{
    bool member = false;
    bool analytic = false;
    double F_antianalytic = 0.0;
    /// number of leading t_j checked (cumulative multiplicity at the depth)
    int checked = 0;
    std::vector<double> t;
    /// max_t |s_j((Phi - F)(zeta_t)) - t_j|
    std::vector<double> deviation;
    double tolerance = 0.0;
};

///
/// Necessary certificate for F in Omega_{d-1}: F analytic and
/// s_j((Phi - F)(zeta)) = t_j(Phi) pointwise for the leading t_j of the
/// first d levels.
///
inline MembershipReport verify_superoptimal_membership(const MatrixSymbol& phi,
                                                       const MatrixSymbol& f, int depth,
                                                       const SuperoptConfig& cfg = {})
{
    if (f.rows() != phi.rows() || f.cols() != phi.cols())
    {
        throw ConfigurationError("verify_superoptimal_membership: shape mismatch");
    }
    MembershipReport out;
    out.tolerance = cfg.tol.level_tol;
    out.F_antianalytic = antianalytic_norm(f);
    out.analytic = out.F_antianalytic <= cfg.tol.check_tol;

    SuperoptConfig c = cfg;
    c.depth = depth;
    const auto rep = superopt_factorize(phi, c);
    if (rep.r.empty())
    {
        out.checked = static_cast<int>(rep.t.size());
    }
    else
    {
        out.checked = rep.r[static_cast<std::size_t>(std::min<int>(depth, static_cast<int>(rep.r.size())) - 1)];
    }
    out.t.assign(rep.t.begin(), rep.t.begin() + out.checked);

    const MatrixSymbol diff = phi - f;
    const CircleGrid g = CircleGrid::for_symbol(diff, std::max(cfg.grid, rep.grid_size));
    const auto prof = singular_value_profile(evaluate(diff, g));
    out.deviation.assign(static_cast<std::size_t>(out.checked), 0.0);
    for (Index t = 0; t < prof.rows(); ++t)
    {
        for (int j = 0; j < out.checked; ++j)
        {
            out.deviation[static_cast<std::size_t>(j)] =
                std::max(out.deviation[static_cast<std::size_t>(j)],
                         std::abs(prof(t, j) - out.t[static_cast<std::size_t>(j)]));
        }
    }
    out.member = out.analytic;
    for (const double d : out.deviation)
    {
        out.member = out.member && d <= out.tolerance;
    }
    return out;
}

} // namespace nehari

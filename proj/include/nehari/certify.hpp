#pragma once

///
/// \file certify.hpp
///
/// Certificates for badly and very badly approximable symbols, uniqueness of
/// the zero best approximant for isometric symbols, and a uniqueness hint
/// for superoptimal approximants.  Kernel searches are bounded by the
/// polynomial degree D of Toeplitz-kernel candidates; negative verdicts that
/// depend on the search carry that bound.
///

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nehari/superopt.hpp>

namespace nehari
{

enum class Verdict
{
    pass,
    fail,
    inconclusive
};

inline const char* verdict_name(Verdict v)
{
    switch (v)
    {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    default:
        return "inconclusive";
    }
}

/// One numeric test inside a certificate.
struct Check
{
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool ok = false;
};

struct Certificate
{
    /// badly_approximable, condition_c, isometry_uniqueness or uniqueness_hint
    std::string kind;
    Verdict verdict = Verdict::inconclusive;
    /// human-readable verdict, including the search bound for search-dependent fails
    std::string label;
    std::vector<MatrixSymbol> witnesses;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    int search_degree = 0;
    long grid_size = 0;

    const Check* find(const std::string& name) const
    {
        for (const auto& c : checks)
        {
            if (c.name == name)
            {
                return &c;
            }
        }
        return nullptr;
    }
};

struct CertifyConfig
{
    long grid = CircleGrid::default_size;
    /// Hankel truncation degree for cross-checks
    int degree = 16;
    /// degree bound D of Toeplitz-kernel candidates
    int kernel_degree = 8;
    std::uint64_t seed = 1;
    /// random kernel combinations tried by the maximizing-vector search
    int random_trials = 16;
    /// declared t_inf; levels at or below it are not examined
    std::optional<double> tail;
    Tolerances tol;
    /// fraction of grid points allowed to lose rank (zeros of kernel functions)
    double rank_slack = 0.01;
    /// run superopt_factorize on condition (C) passes
    bool cross_check = true;

    SuperoptConfig superopt() const
    {
        SuperoptConfig c;
        c.grid = grid;
        c.degree = degree;
        c.tol = tol;
        c.tail = tail;
        return c;
    }
};

namespace detail
{

inline Check make_check(std::string name, double value, double tol, bool ok)
{
    return Check{std::move(name), value, tol, ok};
}

inline std::string search_label(const char* verdict, int degree)
{
    return std::string(verdict) + " (kernel search degree D=" + std::to_string(degree) + ")";
}

/// Kernel basis values: column c of entry t is basis[c](zeta_t).
inline GridFunction sample_basis(const std::vector<MatrixSymbol>& basis, Index n, const CircleGrid& g)
{
    GridFunction out(static_cast<std::size_t>(g.size()),
                     CMatrix::Zero(n, static_cast<Index>(basis.size())));
    for (std::size_t c = 0; c < basis.size(); ++c)
    {
        const auto v = evaluate(basis[c], g);
        for (std::size_t t = 0; t < v.size(); ++t)
        {
            out[t].col(static_cast<Index>(c)) = v[t].col(0);
        }
    }
    return out;
}

/// Orthonormal basis of the first d right singular vectors at every point.
inline GridFunction leading_right_subspace(const GridFunction& vals, const std::vector<Index>& dims)
{
    GridFunction out(vals.size());
    for (std::size_t t = 0; t < vals.size(); ++t)
    {
        Eigen::JacobiSVD<CMatrix> svd(vals[t], Eigen::ComputeFullV);
        out[t] = svd.matrixV().leftCols(dims[t]);
    }
    return out;
}

///
/// Coefficient vectors c with (I - P_t) B_t c = 0 at every point, where P_t
/// projects onto span(S_t).  Returned as an orthonormal basis (columns).
///
inline CMatrix constrained_combinations(const GridFunction& b, const GridFunction& s, double tol)
{
    const Index k = b.empty() ? 0 : b.front().cols();
    if (k == 0)
    {
        return CMatrix(0, 0);
    }
    CMatrix gram = CMatrix::Zero(k, k);
    for (std::size_t t = 0; t < b.size(); ++t)
    {
        const CMatrix r = b[t] - s[t] * (s[t].adjoint() * b[t]);
        gram.noalias() += r.adjoint() * r;
    }
    gram /= static_cast<double>(b.size());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    Index count = 0;
    while (count < k && es.eigenvalues()(count) <= tol * tol)
    {
        ++count;
    }
    return es.eigenvectors().leftCols(count);
}

inline MatrixSymbol combine(const std::vector<MatrixSymbol>& basis, const CVector& c)
{
    MatrixSymbol f(basis.front().rows(), 1);
    for (std::size_t i = 0; i < basis.size(); ++i)
    {
        f += c(static_cast<Index>(i)) * basis[i];
    }
    return f.trimmed(1e-14);
}

struct SpanCheck
{
    /// largest sine of principal angle between span g(zeta) and the target
    double max_angle = 0.0;
    /// fraction of points where the span has lower dimension than the target
    double deficient_fraction = 0.0;
};

/// Compare span{g_i(zeta_t)} with the target subspace S_t (orthonormal columns).
inline SpanCheck compare_spans(const GridFunction& gv, const GridFunction& s)
{
    SpanCheck out;
    long deficient = 0;
    for (std::size_t t = 0; t < gv.size(); ++t)
    {
        const Index d = s[t].cols();
        if (d == 0)
        {
            continue;
        }
        if (gv[t].cols() < d)
        {
            ++deficient;
            continue;
        }
        Eigen::JacobiSVD<CMatrix> svd(gv[t], Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        if (sv(0) <= 0.0 || sv(d - 1) < 1e-6 * sv(0))
        {
            ++deficient;
            continue;
        }
        const CMatrix q = svd.matrixU().leftCols(d);
        // range(q) inside range(S) and equal dimension: largest principal angle sine
        const CMatrix resid = q - s[t] * (s[t].adjoint() * q);
        out.max_angle = std::max(out.max_angle, spectral_norm(resid));
    }
    out.deficient_fraction = gv.empty() ? 0.0 : static_cast<double>(deficient) / static_cast<double>(gv.size());
    return out;
}

struct LevelData
{
    /// distinct constant singular values, descending
    std::vector<double> levels;
    /// number of singular values >= each level
    std::vector<Index> cumulative;
    /// max_j (max_t s_j - min_t s_j)
    double spread = 0.0;
};

inline LevelData constant_levels(const Eigen::MatrixXd& prof, const Tolerances& tol)
{
    LevelData out;
    if (prof.rows() == 0 || prof.cols() == 0)
    {
        return out;
    }
    for (Index j = 0; j < prof.cols(); ++j)
    {
        out.spread = std::max(out.spread, prof.col(j).maxCoeff() - prof.col(j).minCoeff());
    }
    const double scale = std::max(1.0, prof(0, 0));
    const double gap = std::max(tol.mult_tol, 10.0 * tol.const_tol) * scale;
    for (Index j = 0; j < prof.cols(); ++j)
    {
        const double v = prof(0, j);
        if (out.levels.empty() || out.levels.back() - v > gap)
        {
            out.levels.push_back(v);
            out.cumulative.push_back(j + 1);
        }
        else
        {
            out.cumulative.back() = j + 1;
        }
    }
    return out;
}

} // namespace detail

///
/// Badly approximable test: ||Phi(zeta)|| constant and a kernel function of
/// T_Phi whose values are maximizing vectors of Phi(zeta).
///
inline Certificate badly_approximable(const MatrixSymbol& phi, const CertifyConfig& cfg = {})
{
    Certificate cert;
    cert.kind = "badly_approximable";
    cert.search_degree = cfg.kernel_degree;
    const CircleGrid g = CircleGrid::for_symbol(phi, cfg.grid);
    cert.grid_size = g.size();
    const auto vals = evaluate(phi, g);
    const auto prof = singular_value_profile(vals);
    const double top = prof.size() > 0 ? prof.col(0).maxCoeff() : 0.0;
    const double spread = prof.size() > 0 ? top - prof.col(0).minCoeff() : 0.0;
    const double hnorm = hankel_norm(phi);
    cert.checks.push_back(detail::make_check("norm_constancy", spread, cfg.tol.const_tol,
                                             spread < cfg.tol.const_tol));
    const double gap = top - hnorm;
    cert.checks.push_back(detail::make_check("hankel_norm_gap", gap, 1e-6, std::abs(gap) <= 1e-6));

    if (top == 0.0)
    {
        cert.verdict = Verdict::pass;
        cert.label = "pass (zero symbol)";
        return cert;
    }
    if (!cert.checks[0].ok)
    {
        cert.verdict = Verdict::fail;
        cert.label = "fail (norm not constant)";
        cert.notes.push_back("band-limited symbols are admissible, so a non-constant norm rules out badly approximable");
        return cert;
    }
    if (gap > 1e-6)
    {
        cert.verdict = Verdict::fail;
        cert.label = "fail (Hankel norm below sup norm)";
        cert.notes.push_back("distance to H-infinity equals the Hankel norm, which is below ||Phi||_inf");
        return cert;
    }

    const auto basis = toeplitz_kernel(phi, cfg.kernel_degree, 0, cfg.tol);
    cert.checks.push_back(detail::make_check("kernel_dimension", static_cast<double>(basis.size()), 0.0,
                                             !basis.empty()));
    if (!basis.empty())
    {
        const auto bv = detail::sample_basis(basis, phi.cols(), g);
        std::vector<Index> dims(vals.size());
        for (std::size_t t = 0; t < vals.size(); ++t)
        {
            Index d = 1;
            while (d < prof.cols() && prof(static_cast<Index>(t), d) >= top * (1.0 - 1e-6))
            {
                ++d;
            }
            dims[t] = d;
        }
        const auto maxv = detail::leading_right_subspace(vals, dims);
        std::vector<CVector> candidates;
        const CMatrix comb = detail::constrained_combinations(bv, maxv, cfg.tol.angle_tol);
        for (Index c = 0; c < comb.cols(); ++c)
        {
            candidates.push_back(comb.col(c));
        }
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> nd;
        const auto k = static_cast<Index>(basis.size());
        for (Index c = 0; c < k; ++c)
        {
            candidates.push_back(CVector::Unit(k, c));
        }
        for (int trial = 0; trial < cfg.random_trials; ++trial)
        {
            CVector c(k);
            for (Index i = 0; i < k; ++i)
            {
                c(i) = Complex(nd(rng), nd(rng));
            }
            candidates.push_back(c.normalized());
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : candidates)
        {
            double worst = 0.0;
            for (std::size_t t = 0; t < vals.size(); ++t)
            {
                const CVector f = bv[t] * c;
                const double lhs = (vals[t] * f).norm();
                const double rhs = prof(static_cast<Index>(t), 0) * f.norm();
                worst = std::max(worst, std::abs(lhs - rhs));
            }
            if (worst < best)
            {
                best = worst;
            }
            if (worst <= cfg.tol.check_tol * std::max(1.0, top))
            {
                cert.witnesses.push_back(detail::combine(basis, c));
                break;
            }
        }
        cert.checks.push_back(detail::make_check("maximizing_witness", best,
                                                 cfg.tol.check_tol * std::max(1.0, top),
                                                 !cert.witnesses.empty()));
    }
    if (!cert.witnesses.empty())
    {
        cert.verdict = Verdict::pass;
        cert.label = "pass";
        return cert;
    }
    cert.verdict = Verdict::inconclusive;
    cert.label = detail::search_label("inconclusive", cfg.kernel_degree);
    cert.notes.push_back("no maximizing kernel function found within the degree bound");
    return cert;
}

///
/// Condition (C): singular values of Phi(zeta) constant and, for every level
/// above t_inf, the Schmidt subspaces spanned pointwise by kernel functions.
///
inline Certificate condition_c(const MatrixSymbol& phi, const CertifyConfig& cfg = {})
{
    Certificate cert;
    cert.kind = "condition_c";
    cert.search_degree = cfg.kernel_degree;
    const CircleGrid g = CircleGrid::for_symbol(phi, cfg.grid);
    cert.grid_size = g.size();
    const auto vals = evaluate(phi, g);
    const auto prof = singular_value_profile(vals);
    const auto lv = detail::constant_levels(prof, cfg.tol);
    cert.checks.push_back(detail::make_check("singular_value_constancy", lv.spread, cfg.tol.const_tol,
                                             lv.spread < cfg.tol.const_tol));
    if (!cert.checks.back().ok)
    {
        cert.verdict = Verdict::fail;
        cert.label = "fail (singular values not constant)";
        return cert;
    }
    const double t_inf = cfg.tail.value_or(0.0);
    const auto basis = toeplitz_kernel(phi, cfg.kernel_degree, 0, cfg.tol);
    const auto bv = detail::sample_basis(basis, phi.cols(), g);
    bool all_ok = true;
    for (std::size_t l = 0; l < lv.levels.size(); ++l)
    {
        const double sigma = lv.levels[l];
        if (sigma <= t_inf + cfg.tol.const_tol)
        {
            continue;
        }
        const std::vector<Index> dims(vals.size(), lv.cumulative[l]);
        const auto schmidt = detail::leading_right_subspace(vals, dims);
        const std::string tag = "level_" + std::to_string(l);
        std::vector<MatrixSymbol> found;
        detail::SpanCheck span;
        span.deficient_fraction = 1.0;
        if (!basis.empty())
        {
            const CMatrix comb = detail::constrained_combinations(bv, schmidt, cfg.tol.angle_tol);
            GridFunction gv(vals.size(), CMatrix::Zero(phi.cols(), comb.cols()));
            for (std::size_t t = 0; t < vals.size(); ++t)
            {
                gv[t] = bv[t] * comb;
            }
            span = detail::compare_spans(gv, schmidt);
            for (Index c = 0; c < comb.cols(); ++c)
            {
                found.push_back(detail::combine(basis, comb.col(c)));
            }
        }
        const bool ok = span.max_angle < cfg.tol.angle_tol && span.deficient_fraction <= cfg.rank_slack;
        cert.checks.push_back(detail::make_check(tag + "_sigma", sigma, 0.0, true));
        cert.checks.push_back(detail::make_check(tag + "_max_angle", span.max_angle, cfg.tol.angle_tol,
                                                 span.max_angle < cfg.tol.angle_tol));
        cert.checks.push_back(detail::make_check(tag + "_rank_deficient_fraction", span.deficient_fraction,
                                                 cfg.rank_slack, span.deficient_fraction <= cfg.rank_slack));
        if (ok)
        {
            cert.witnesses.insert(cert.witnesses.end(), found.begin(), found.end());
        }
        else
        {
            all_ok = false;
            cert.notes.push_back("level " + std::to_string(sigma) +
                                 ": Schmidt subspaces not spanned by kernel functions of degree <= " +
                                 std::to_string(cfg.kernel_degree));
        }
    }
    if (!all_ok)
    {
        cert.verdict = Verdict::fail;
        cert.label = detail::search_label("fail", cfg.kernel_degree);
        return cert;
    }
    cert.verdict = Verdict::pass;
    cert.label = "pass";
    if (cfg.cross_check)
    {
        const auto rep = superopt_factorize(phi, cfg.superopt());
        const double fnorm = linf_norm(rep.F, CircleGrid::for_symbol(rep.F, cfg.grid));
        cert.checks.push_back(detail::make_check("superopt_F_norm", fnorm, 1e-6, fnorm < 1e-6));
        if (fnorm >= 1e-6)
        {
            cert.verdict = Verdict::inconclusive;
            cert.label = "inconclusive (superoptimal approximant is not zero)";
        }
    }
    return cert;
}

///
/// Unique best approximant 0: Phi(zeta) isometric or co-isometric and the
/// kernel values span the orthogonal complement of Ker Phi(zeta).
///
inline Certificate isometry_uniqueness(const MatrixSymbol& phi, const CertifyConfig& cfg = {})
{
    Certificate cert;
    cert.kind = "isometry_uniqueness";
    cert.search_degree = cfg.kernel_degree;
    const CircleGrid g = CircleGrid::for_symbol(phi, cfg.grid);
    cert.grid_size = g.size();
    const auto vals = evaluate(phi, g);
    double iso = 0.0;
    double coiso = 0.0;
    for (const auto& v : vals)
    {
        iso = std::max(iso, spectral_norm(v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols())));
        coiso = std::max(coiso, spectral_norm(v * v.adjoint() - CMatrix::Identity(v.rows(), v.rows())));
    }
    const double tol = cfg.tol.check_tol;
    cert.checks.push_back(detail::make_check("isometry_residual", iso, tol, iso <= tol));
    cert.checks.push_back(detail::make_check("coisometry_residual", coiso, tol, coiso <= tol));
    if (iso > tol && coiso > tol)
    {
        cert.verdict = Verdict::fail;
        cert.label = "fail (neither isometric nor co-isometric)";
        return cert;
    }
    // (Ker Phi(zeta))^perp = row space of Phi(zeta): rank min(m, n) here
    const Index d = std::min(phi.rows(), phi.cols());
    const auto rowspace = detail::leading_right_subspace(vals, std::vector<Index>(vals.size(), d));
    const auto basis = toeplitz_kernel(phi, cfg.kernel_degree, 0, cfg.tol);
    cert.checks.push_back(detail::make_check("kernel_dimension", static_cast<double>(basis.size()), 0.0,
                                             !basis.empty()));
    detail::SpanCheck span;
    span.deficient_fraction = 1.0;
    if (!basis.empty())
    {
        const auto bv = detail::sample_basis(basis, phi.cols(), g);
        GridFunction projected(vals.size());
        for (std::size_t t = 0; t < vals.size(); ++t)
        {
            projected[t] = rowspace[t] * (rowspace[t].adjoint() * bv[t]);
        }
        span = detail::compare_spans(projected, rowspace);
        cert.witnesses = basis;
    }
    const bool ok = span.max_angle < cfg.tol.angle_tol && span.deficient_fraction <= cfg.rank_slack;
    cert.checks.push_back(detail::make_check("span_max_angle", span.max_angle, cfg.tol.angle_tol,
                                             span.max_angle < cfg.tol.angle_tol));
    cert.checks.push_back(detail::make_check("span_rank_deficient_fraction", span.deficient_fraction,
                                             cfg.rank_slack, span.deficient_fraction <= cfg.rank_slack));
    if (ok)
    {
        cert.verdict = Verdict::pass;
        cert.label = "pass";
        cert.notes.push_back("zero is the unique best approximant");
        return cert;
    }
    cert.witnesses.clear();
    cert.verdict = Verdict::fail;
    cert.label = detail::search_label("fail", cfg.kernel_degree);
    return cert;
}

///
/// Uniqueness of the superoptimal approximant.  Labels: UNIQUE,
/// NON-UNIQUE-LIKELY (a second approximant is exhibited in the final
/// corner) or INCONCLUSIVE.
///
inline Certificate uniqueness_hint(const SuperoptReport& rep, const MatrixSymbol& phi,
                                   const CertifyConfig& cfg = {})
{
    Certificate cert;
    cert.kind = "uniqueness_hint";
    cert.grid_size = rep.grid_size;
    const double t_inf = rep.t_inf;
    cert.checks.push_back(detail::make_check("t_inf", t_inf, cfg.tol.stop_tol, t_inf <= cfg.tol.stop_tol));
    cert.checks.push_back(detail::make_check("diameter_bound", 2.0 * t_inf, 0.0, true));
    const bool corner = rep.Psi.rows() > 0 && rep.Psi.cols() > 0;
    if (!rep.tail_model && !rep.partial && t_inf <= cfg.tol.stop_tol)
    {
        cert.verdict = Verdict::pass;
        cert.label = "UNIQUE";
        cert.notes.push_back("superoptimal singular values reach zero at finite size");
        return cert;
    }
    if (!corner)
    {
        cert.verdict = Verdict::pass;
        cert.label = "UNIQUE";
        cert.notes.push_back("Schmidt subspaces of the analyzed levels span the full space");
        return cert;
    }
    const CircleGrid g = CircleGrid::for_symbol(rep.Psi, std::max(cfg.grid, rep.grid_size));
    const double psi_norm = linf_norm(rep.Psi, g);
    const double room = t_inf - psi_norm;
    cert.checks.push_back(detail::make_check("corner_room", room, cfg.tol.level_tol, room > cfg.tol.level_tol));
    if (room <= cfg.tol.level_tol)
    {
        cert.verdict = Verdict::inconclusive;
        cert.label = "INCONCLUSIVE";
        return cert;
    }
    // F' = F - Xi X Theta^t with X = (room / 2) z e_11 keeps the corner below t_inf
    CMatrix e11 = CMatrix::Zero(rep.Psi.rows(), rep.Psi.cols());
    e11(0, 0) = 0.5 * room;
    const MatrixSymbol x = MatrixSymbol::monomial(e11, 1);
    const MatrixSymbol shift = multiply(multiply(rep.xi_total, x), transpose_symbol(rep.theta_total));
    const MatrixSymbol alt = rep.F - shift;
    const auto m = verify_superoptimal_membership(phi, alt, static_cast<int>(rep.sigma.size()), [&] {
        SuperoptConfig c = cfg.superopt();
        c.tail = t_inf;
        return c;
    }());
    const double dist = linf_norm(shift, CircleGrid::for_symbol(shift, cfg.grid));
    cert.checks.push_back(detail::make_check("witness_member", m.member ? 1.0 : 0.0, 0.0, m.member));
    cert.checks.push_back(detail::make_check("witness_distance", dist, cfg.tol.level_tol, dist > cfg.tol.level_tol));
    if (m.member && dist > cfg.tol.level_tol)
    {
        cert.verdict = Verdict::fail;
        cert.label = "NON-UNIQUE-LIKELY";
        cert.witnesses.push_back(alt);
        cert.notes.push_back("second approximant with the same analyzed levels found in the final corner");
        return cert;
    }
    cert.verdict = Verdict::inconclusive;
    cert.label = "INCONCLUSIVE";
    return cert;
}

} // namespace nehari

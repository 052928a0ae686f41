#pragma once

///
/// \file hardy.hpp
///
/// Scalar Hardy-space toolkit: Riesz projections, outer/inner factorization
/// via the discrete conjugate function, winding numbers and the
/// factorization f = theta * h * v of analytic column functions.
///

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <nehari/symbol.hpp>

namespace nehari
{

enum class Part
{
    analytic,
    antianalytic
};

/// P_+ (k >= 0) or P_- (k < 0).
inline MatrixSymbol riesz_project(const MatrixSymbol& s, Part part)
{
    const int lo = part == Part::analytic ? std::max(0, s.lo()) : s.lo();
    const int hi = part == Part::analytic ? s.hi() : std::min(-1, s.hi());
    if (lo > hi)
    {
        return MatrixSymbol(s.rows(), s.cols());
    }
    MatrixSymbol out(s.rows(), s.cols(), lo, hi);
    for (int k = lo; k <= hi; ++k)
    {
        out.coeff_ref(k) = s.coeff_ref(k);
    }
    return out;
}

/// l2 norm of the negative-index coefficients.
inline double antianalytic_norm(const MatrixSymbol& s)
{
    return riesz_project(s, Part::antianalytic).coefficient_norm();
}

struct ScalarFactorization
{
    MatrixSymbol inner;
    MatrixSymbol outer;
    /// highest stored index of the outer factor
    int degree = 0;
    /// coefficient energy dropped when band-fitting inner / outer
    double inner_tail = 0.0;
    double outer_tail = 0.0;
    /// negative-frequency energy of s / outer (zero when s is analytic)
    double inner_antianalytic = 0.0;
    /// max_t | inner * outer - s |
    double reconstruction_residual = 0.0;
    /// max_t | |inner| - 1 |
    double unimodularity_residual = 0.0;
    /// fraction of grid points where |s| fell under the floor
    double floored_fraction = 0.0;
    bool ill_conditioned = false;
};

namespace detail
{

/// Values of the outer function with modulus `modulus` (normalized so that
/// outer(0) > 0).  Also reports the fraction of floored samples.
inline std::vector<Complex> outer_from_modulus(const std::vector<double>& modulus, double floor,
                                               double* floored_fraction = nullptr)
{
    const long m = static_cast<long>(modulus.size());
    std::vector<Complex> logs(static_cast<std::size_t>(m));
    long floored = 0;
    for (long t = 0; t < m; ++t)
    {
        double a = modulus[static_cast<std::size_t>(t)];
        if (a < floor)
        {
            a = floor;
            ++floored;
        }
        logs[static_cast<std::size_t>(t)] = std::log(a);
    }
    if (floored_fraction != nullptr)
    {
        *floored_fraction = static_cast<double>(floored) / static_cast<double>(m);
    }
    auto freq = fft_forward(logs);
    // analytic completion of the real function log|s|: u + i*conj(u)
    std::vector<Complex> half(static_cast<std::size_t>(m), Complex(0.0));
    half[0] = freq[0].real() / static_cast<double>(m);
    for (long q = 1; q < m / 2; ++q)
    {
        half[static_cast<std::size_t>(q)] = 2.0 * freq[static_cast<std::size_t>(q)] /
                                            static_cast<double>(m);
    }
    half[static_cast<std::size_t>(m / 2)] = freq[static_cast<std::size_t>(m / 2)] /
                                            static_cast<double>(m);
    auto logh = fft_inverse_unscaled(half);
    std::vector<Complex> out(static_cast<std::size_t>(m));
    for (long t = 0; t < m; ++t)
    {
        out[static_cast<std::size_t>(t)] = std::exp(logh[static_cast<std::size_t>(t)]);
    }
    return out;
}

/// True when the Fourier coefficients of log max(|s|, floor) in the upper
/// half of the grid's frequency range are negligible.
inline bool log_modulus_resolved(const std::vector<double>& modulus, double floor)
{
    const long m = static_cast<long>(modulus.size());
    std::vector<Complex> logs(modulus.size());
    for (std::size_t t = 0; t < modulus.size(); ++t)
    {
        logs[t] = std::log(std::max(modulus[t], floor));
    }
    const auto freq = fft_forward(logs);
    double biggest = 0.0;
    double high = 0.0;
    for (long q = 0; q < m; ++q)
    {
        const double a = std::abs(freq[static_cast<std::size_t>(q)]);
        biggest = std::max(biggest, a);
        if (std::abs(bin_to_index(q, m)) >= m / 4)
        {
            high = std::max(high, a);
        }
    }
    return high <= 1e-13 * std::max(biggest, 1.0);
}

/// Smallest refinement of g (capped at 2^16 points) on which log|s| is resolved.
inline CircleGrid resolving_grid(const MatrixSymbol& s, CircleGrid g, double floor)
{
    constexpr long max_size = 1L << 16;
    while (g.size() < max_size)
    {
        const auto vals = evaluate(s, g);
        std::vector<double> mod(vals.size());
        for (std::size_t t = 0; t < vals.size(); ++t)
        {
            mod[t] = vals[t].norm();
        }
        if (log_modulus_resolved(mod, floor))
        {
            break;
        }
        g = g.refined();
    }
    return g;
}

inline GridFunction scalar_grid(const std::vector<Complex>& v)
{
    GridFunction out(v.size());
    for (std::size_t t = 0; t < v.size(); ++t)
    {
        out[t] = CMatrix::Constant(1, 1, v[t]);
    }
    return out;
}

/// Phase that makes the lowest-order significant Taylor coefficient of an
/// analytic scalar symbol real positive.
inline Complex leading_phase(const MatrixSymbol& s, double rel_tol = 1e-8)
{
    const double big = s.max_abs_coeff();
    for (int k = std::max(0, s.lo()); k <= s.hi(); ++k)
    {
        const Complex c = s.coeff_ref(k)(0, 0);
        if (std::abs(c) > rel_tol * big)
        {
            return c / std::abs(c);
        }
    }
    return Complex(1.0);
}

} // namespace detail

///
/// Inner-outer factorization of a nonvanishing scalar symbol on a grid.
/// The outer factor is exp of the analytic completion of log|s|; the inner
/// factor is s / outer, normalized so that its lowest-order Taylor
/// coefficient is real positive (the constant phase moves to the outer).
///
inline ScalarFactorization outer_factor(const MatrixSymbol& s, const CircleGrid& requested,
                                        double floor = 1e-9, double fit_tol = 1e-14)
{
    if (s.rows() != 1 || s.cols() != 1)
    {
        throw ConfigurationError("outer_factor: scalar symbol expected");
    }
    if (s.is_zero())
    {
        throw DegenerateInputError("outer_factor: symbol vanishes identically");
    }
    const CircleGrid g =
        detail::resolving_grid(s, CircleGrid::for_symbol(s, requested.size()), floor);
    const auto vals = evaluate(s, g);
    std::vector<double> mod(vals.size());
    for (std::size_t t = 0; t < vals.size(); ++t)
    {
        mod[t] = std::abs(vals[t](0, 0));
    }
    ScalarFactorization out;
    const auto outer_vals = detail::outer_from_modulus(mod, floor, &out.floored_fraction);
    out.ill_conditioned = out.floored_fraction > 0.1;

    std::vector<Complex> inner_vals(vals.size());
    for (std::size_t t = 0; t < vals.size(); ++t)
    {
        inner_vals[t] = vals[t](0, 0) / outer_vals[t];
    }
    FitOptions full;
    full.tol = fit_tol;
    FitOptions analytic = full;
    analytic.lo = 0;
    auto inner_fit = fit_symbol(detail::scalar_grid(inner_vals), g, full);
    auto outer_fit = fit_symbol(detail::scalar_grid(outer_vals), g, analytic);

    const Complex phase = detail::leading_phase(inner_fit.symbol);
    out.inner = std::conj(phase) * inner_fit.symbol;
    out.outer = phase * outer_fit.symbol;
    out.degree = out.outer.hi();
    out.inner_tail = inner_fit.tail_energy;
    out.outer_tail = outer_fit.tail_energy;
    out.inner_antianalytic = inner_fit.antianalytic_energy;

    const CircleGrid check = CircleGrid::for_band(
        std::min({out.inner.lo(), out.outer.lo(), s.lo()}),
        std::max({out.inner.hi(), out.outer.hi(), s.hi()}), g.size());
    const auto iv = evaluate(out.inner, check);
    const auto ov = evaluate(out.outer, check);
    const auto sv = evaluate(s, check);
    for (std::size_t t = 0; t < iv.size(); ++t)
    {
        out.reconstruction_residual =
            std::max(out.reconstruction_residual, std::abs(iv[t](0, 0) * ov[t](0, 0) - sv[t](0, 0)));
        out.unimodularity_residual =
            std::max(out.unimodularity_residual, std::abs(std::abs(iv[t](0, 0)) - 1.0));
    }
    return out;
}

///
/// Winding number of a nonvanishing scalar symbol about the origin: the sum
/// of wrapped argument increments along the grid divided by 2 pi.  The grid
/// is refined until the sum is within 0.1 of an integer and every increment
/// is below pi/2.
///
inline int winding_number(const MatrixSymbol& s, const CircleGrid& requested, double tol = 1e-9)
{
    if (s.rows() != 1 || s.cols() != 1)
    {
        throw ConfigurationError("winding_number: scalar symbol expected");
    }
    CircleGrid g = CircleGrid::for_symbol(s, requested.size());
    constexpr long max_size = 1L << 20;
    while (true)
    {
        const auto vals = evaluate(s, g);
        double total = 0.0;
        double biggest_step = 0.0;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < vals.size(); ++t)
        {
            const Complex a = vals[t](0, 0);
            const Complex b = vals[(t + 1) % vals.size()](0, 0);
            smallest = std::min(smallest, std::abs(a));
            const double step = std::arg(b / a);
            biggest_step = std::max(biggest_step, std::abs(step));
            total += step;
        }
        if (smallest <= tol)
        {
            throw DegenerateInputError("winding_number: symbol nearly vanishes on the grid");
        }
        const double turns = total / (2.0 * std::numbers::pi);
        const double rounded = std::round(turns);
        if (std::abs(turns - rounded) < 0.1 && biggest_step < std::numbers::pi / 2)
        {
            return static_cast<int>(rounded);
        }
        if (g.size() >= max_size)
        {
            throw DegenerateInputError("winding_number: argument increments did not resolve");
        }
        g = g.refined();
    }
}

namespace detail
{

/// Roots of the polynomial sum_k c[k] z^k (companion eigenvalues).
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c)
{
    int deg = static_cast<int>(c.size()) - 1;
    while (deg > 0 && c[static_cast<std::size_t>(deg)] == Complex(0.0))
    {
        --deg;
    }
    if (deg <= 0)
    {
        return {};
    }
    CMatrix companion = CMatrix::Zero(deg, deg);
    const Complex lead = c[static_cast<std::size_t>(deg)];
    for (int i = 0; i < deg; ++i)
    {
        companion(0, i) = -c[static_cast<std::size_t>(deg - 1 - i)] / lead;
        if (i + 1 < deg)
        {
            companion(i + 1, i) = 1.0;
        }
    }
    Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
    std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : std::arg(a) < std::arg(b);
    });
    return roots;
}

inline Complex polynomial_value(const std::vector<Complex>& c, Complex z)
{
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
    {
        acc = acc * z + *it;
    }
    return acc;
}

/// Divide by (z - a), discarding the remainder.
inline std::vector<Complex> deflate(const std::vector<Complex>& c, Complex a)
{
    if (c.size() <= 1)
    {
        return {Complex(0.0)};
    }
    std::vector<Complex> q(c.size() - 1);
    Complex carry = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;)
    {
        q[k] = carry;
        carry = c[k] + carry * a;
    }
    return q;
}

inline std::vector<Complex> trim_polynomial(std::vector<Complex> c, double rel_tol)
{
    double big = 0.0;
    for (auto v : c)
    {
        big = std::max(big, std::abs(v));
    }
    while (c.size() > 1 && std::abs(c.back()) <= rel_tol * big)
    {
        c.pop_back();
    }
    return c;
}

} // namespace detail

struct ColumnFactorization
{
    /// scalar inner factor (finite Blaschke product of the common zeros)
    MatrixSymbol theta;
    /// scalar outer factor with |h| = ||f||
    MatrixSymbol h;
    /// inner column with ||v(zeta)|| = 1
    MatrixSymbol v;
    std::vector<Complex> common_zeros;
    double norm_residual = 0.0;
    double antianalytic_residual = 0.0;
    double reconstruction_residual = 0.0;
    double tail_energy = 0.0;
};

///
/// f = theta * h * v for an analytic polynomial column f: theta collects the
/// zeros shared by all components inside the disk, h is the outer function
/// with modulus ||f(zeta)|| and v = f / (theta h).
///
inline ColumnFactorization column_inner_outer(const MatrixSymbol& f, const CircleGrid& requested,
                                              const Tolerances& tol = {})
{
    if (f.cols() != 1)
    {
        throw ConfigurationError("column_inner_outer: column symbol expected");
    }
    if (f.is_zero())
    {
        throw DegenerateInputError("column_inner_outer: f vanishes identically");
    }
    const double scale = f.max_abs_coeff();
    if (antianalytic_norm(f) > 1e-12 * scale)
    {
        throw ConfigurationError("column_inner_outer: f has negative Fourier coefficients");
    }
    const MatrixSymbol fa = riesz_project(f, Part::analytic);

    // polynomial components
    std::vector<std::vector<Complex>> comps;
    for (Index i = 0; i < fa.rows(); ++i)
    {
        std::vector<Complex> c(static_cast<std::size_t>(fa.hi() + 1), Complex(0.0));
        double big = 0.0;
        for (int k = 0; k <= fa.hi(); ++k)
        {
            c[static_cast<std::size_t>(k)] = fa.coeff(k)(i, 0);
            big = std::max(big, std::abs(c[static_cast<std::size_t>(k)]));
        }
        if (big > 1e-13 * scale)
        {
            comps.push_back(detail::trim_polynomial(std::move(c), 1e-13));
        }
    }

    ColumnFactorization out;
    bool found = true;
    while (found)
    {
        found = false;
        auto shortest = std::min_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
            return a.size() < b.size();
        });
        for (const Complex a : detail::polynomial_roots(*shortest))
        {
            if (std::abs(a) >= 1.0 - 1e-9)
            {
                continue;
            }
            bool common = true;
            for (const auto& c : comps)
            {
                double norm1 = 0.0;
                for (auto v : c)
                {
                    norm1 += std::abs(v);
                }
                if (std::abs(detail::polynomial_value(c, a)) > 1e-8 * norm1)
                {
                    common = false;
                    break;
                }
            }
            if (common)
            {
                out.common_zeros.push_back(a);
                for (auto& c : comps)
                {
                    c = detail::deflate(c, a);
                }
                found = true;
                break;
            }
        }
    }

    const CircleGrid g =
        detail::resolving_grid(fa, CircleGrid::for_symbol(fa, requested.size()), tol.floor);
    const auto fv = evaluate(fa, g);
    std::vector<Complex> theta_vals(fv.size(), Complex(1.0));
    std::vector<double> norms(fv.size());
    for (std::size_t t = 0; t < fv.size(); ++t)
    {
        const Complex z = g.point(static_cast<long>(t));
        for (const Complex a : out.common_zeros)
        {
            theta_vals[t] *= (z - a) / (1.0 - std::conj(a) * z);
        }
        norms[t] = fv[t].norm();
    }
    const auto h_vals = detail::outer_from_modulus(norms, tol.floor);

    FitOptions analytic;
    analytic.lo = 0;
    analytic.tol = tol.fit_tol;
    auto theta_fit = fit_symbol(detail::scalar_grid(theta_vals), g, analytic);
    const Complex phase = detail::leading_phase(theta_fit.symbol);
    out.theta = std::conj(phase) * theta_fit.symbol;
    auto h_fit = fit_symbol(detail::scalar_grid(h_vals), g, analytic);
    out.h = h_fit.symbol;

    GridFunction v_vals(fv.size());
    for (std::size_t t = 0; t < fv.size(); ++t)
    {
        v_vals[t] = fv[t] / (std::conj(phase) * theta_vals[t] * h_vals[t]);
        out.norm_residual = std::max(out.norm_residual, std::abs(v_vals[t].norm() - 1.0));
    }
    auto v_fit = fit_symbol(v_vals, g, analytic);
    out.v = v_fit.symbol;
    out.antianalytic_residual = v_fit.antianalytic_energy;
    out.tail_energy = theta_fit.tail_energy + h_fit.tail_energy + v_fit.tail_energy;

    const MatrixSymbol rebuilt = scalar_multiply(multiply(out.theta, out.h), out.v);
    const CircleGrid check = CircleGrid::for_band(std::min(rebuilt.lo(), fa.lo()),
                                                  std::max(rebuilt.hi(), fa.hi()), g.size());
    out.reconstruction_residual = sup_norm(pointwise_difference(evaluate(rebuilt, check),
                                                                evaluate(fa, check)));
    return out;
}

} // namespace nehari

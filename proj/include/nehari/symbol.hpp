#pragma once

///
/// \file symbol.hpp
///
/// Matrix trigonometric polynomials on the unit circle
///
///   S(z) = sum_{k=lo}^{hi} c_k z^k,   c_k in C^{rows x cols},
///
/// together with sampling on uniform circle grids, Laurent arithmetic and
/// grid-based norms.
///

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include <nehari/core.hpp>

namespace nehari
{

using Index = Eigen::Index;

class MatrixSymbol
{
public:
    /// Empty 0x0 symbol.
    MatrixSymbol() : MatrixSymbol(0, 0) {}

    /// Zero symbol of the given shape.
    MatrixSymbol(Index rows, Index cols) : MatrixSymbol(rows, cols, 0, 0) {}

    /// Zero symbol with coefficient storage for indices lo..hi.
    MatrixSymbol(Index rows, Index cols, int lo, int hi)
        : m_rows(rows), m_cols(cols), m_lo(lo), m_hi(hi)
    {
        if (rows < 0 || cols < 0)
        {
            throw ConfigurationError("MatrixSymbol: negative dimension");
        }
        if (hi < lo)
        {
            throw ConfigurationError("MatrixSymbol: hi < lo");
        }
        m_coeffs.assign(static_cast<std::size_t>(hi - lo + 1),
                        CMatrix::Zero(rows, cols));
    }

    static MatrixSymbol constant(const CMatrix& c)
    {
        MatrixSymbol s(c.rows(), c.cols());
        s.m_coeffs[0] = c;
        return s;
    }

    /// c * z^k
    static MatrixSymbol monomial(const CMatrix& c, int k)
    {
        MatrixSymbol s(c.rows(), c.cols(), k, k);
        s.m_coeffs[0] = c;
        return s;
    }

    /// Scalar Laurent polynomial from (index, value) pairs.
    static MatrixSymbol scalar(std::initializer_list<std::pair<int, Complex>> terms)
    {
        MatrixSymbol s(1, 1);
        for (const auto& [k, v] : terms)
        {
            s.add_to_coeff(k, CMatrix::Constant(1, 1, v));
        }
        return s.trimmed(0.0);
    }

    /// Diagonal symbol built from scalar symbols.
    static MatrixSymbol diagonal(const std::vector<MatrixSymbol>& entries)
    {
        const auto n = static_cast<Index>(entries.size());
        MatrixSymbol s(n, n);
        for (Index i = 0; i < n; ++i)
        {
            const auto& e = entries[static_cast<std::size_t>(i)];
            for (int k = e.lo(); k <= e.hi(); ++k)
            {
                CMatrix c = CMatrix::Zero(n, n);
                c(i, i) = e.coeff(k)(0, 0);
                s.add_to_coeff(k, c);
            }
        }
        return s.trimmed(0.0);
    }

    static MatrixSymbol identity(Index n)
    {
        return constant(CMatrix::Identity(n, n));
    }

    Index rows() const { return m_rows; }
    Index cols() const { return m_cols; }
    int lo() const { return m_lo; }
    int hi() const { return m_hi; }
    bool empty() const { return m_rows == 0 || m_cols == 0; }

    /// Coefficient c_k; zero outside the stored band.
    CMatrix coeff(int k) const
    {
        if (k < m_lo || k > m_hi)
        {
            return CMatrix::Zero(m_rows, m_cols);
        }
        return m_coeffs[static_cast<std::size_t>(k - m_lo)];
    }

    const CMatrix& coeff_ref(int k) const
    {
        return m_coeffs.at(static_cast<std::size_t>(k - m_lo));
    }

    CMatrix& coeff_ref(int k)
    {
        return m_coeffs.at(static_cast<std::size_t>(k - m_lo));
    }

    /// Extend the band (if needed) so that index k is stored.
    void reserve_index(int k)
    {
        if (k < m_lo)
        {
            m_coeffs.insert(m_coeffs.begin(), static_cast<std::size_t>(m_lo - k),
                            CMatrix::Zero(m_rows, m_cols));
            m_lo = k;
        }
        else if (k > m_hi)
        {
            m_coeffs.insert(m_coeffs.end(), static_cast<std::size_t>(k - m_hi),
                            CMatrix::Zero(m_rows, m_cols));
            m_hi = k;
        }
    }

    void set_coeff(int k, const CMatrix& c)
    {
        check_shape(c);
        reserve_index(k);
        coeff_ref(k) = c;
    }

    void add_to_coeff(int k, const CMatrix& c)
    {
        check_shape(c);
        reserve_index(k);
        coeff_ref(k) += c;
    }

    /// Drop leading/trailing coefficients whose largest entry is <= tol.
    MatrixSymbol trimmed(double tol) const
    {
        int a = m_lo;
        int b = m_hi;
        auto small = [&](int k) {
            const auto& c = coeff_ref(k);
            return c.size() == 0 || c.cwiseAbs().maxCoeff() <= tol;
        };
        while (a <= b && small(a))
        {
            ++a;
        }
        while (b >= a && small(b))
        {
            --b;
        }
        if (a > b)
        {
            return MatrixSymbol(m_rows, m_cols);
        }
        MatrixSymbol out(m_rows, m_cols, a, b);
        for (int k = a; k <= b; ++k)
        {
            out.coeff_ref(k) = coeff_ref(k);
        }
        return out;
    }

    /// l2 norm of the coefficient sequence (= L2 norm on the circle).
    double coefficient_norm() const
    {
        double acc = 0.0;
        for (const auto& c : m_coeffs)
        {
            acc += c.squaredNorm();
        }
        return std::sqrt(acc);
    }

    double max_abs_coeff() const
    {
        double m = 0.0;
        for (const auto& c : m_coeffs)
        {
            if (c.size() > 0)
            {
                m = std::max(m, c.cwiseAbs().maxCoeff());
            }
        }
        return m;
    }

    bool is_zero(double tol = 0.0) const { return max_abs_coeff() <= tol; }

    /// z^s * S
    MatrixSymbol shifted(int s) const
    {
        MatrixSymbol out(*this);
        out.m_lo += s;
        out.m_hi += s;
        return out;
    }

    /// Sub-block of every coefficient.
    MatrixSymbol block(Index r0, Index c0, Index nr, Index nc) const
    {
        MatrixSymbol out(nr, nc, m_lo, m_hi);
        for (int k = m_lo; k <= m_hi; ++k)
        {
            out.coeff_ref(k) = coeff_ref(k).block(r0, c0, nr, nc);
        }
        return out;
    }

    MatrixSymbol column(Index j) const { return block(0, j, m_rows, 1); }

    MatrixSymbol& operator+=(const MatrixSymbol& o)
    {
        check_same_shape(o);
        for (int k = o.lo(); k <= o.hi(); ++k)
        {
            add_to_coeff(k, o.coeff_ref(k));
        }
        return *this;
    }

    MatrixSymbol& operator-=(const MatrixSymbol& o)
    {
        check_same_shape(o);
        for (int k = o.lo(); k <= o.hi(); ++k)
        {
            add_to_coeff(k, -o.coeff_ref(k));
        }
        return *this;
    }

    MatrixSymbol& operator*=(Complex a)
    {
        for (auto& c : m_coeffs)
        {
            c *= a;
        }
        return *this;
    }

    /// Right multiplication by a constant matrix.
    MatrixSymbol times_constant(const CMatrix& c) const
    {
        if (c.rows() != m_cols)
        {
            throw ConfigurationError("MatrixSymbol::times_constant: shape mismatch");
        }
        MatrixSymbol out(m_rows, c.cols(), m_lo, m_hi);
        for (int k = m_lo; k <= m_hi; ++k)
        {
            out.coeff_ref(k) = coeff_ref(k) * c;
        }
        return out;
    }

    /// Left multiplication by a constant matrix.
    MatrixSymbol constant_times(const CMatrix& c) const
    {
        if (c.cols() != m_rows)
        {
            throw ConfigurationError("MatrixSymbol::constant_times: shape mismatch");
        }
        MatrixSymbol out(c.rows(), m_cols, m_lo, m_hi);
        for (int k = m_lo; k <= m_hi; ++k)
        {
            out.coeff_ref(k) = c * coeff_ref(k);
        }
        return out;
    }

    /// Exact pointwise value at zeta (Horner in zeta and 1/zeta).
    CMatrix value_at(Complex zeta) const
    {
        CMatrix acc = CMatrix::Zero(m_rows, m_cols);
        for (int k = m_hi; k >= m_lo; --k)
        {
            acc = acc * zeta + coeff_ref(k);
        }
        return acc * std::pow(zeta, m_lo);
    }

private:
    void check_shape(const CMatrix& c) const
    {
        if (c.rows() != m_rows || c.cols() != m_cols)
        {
            throw ConfigurationError("MatrixSymbol: coefficient shape mismatch");
        }
    }

    void check_same_shape(const MatrixSymbol& o) const
    {
        if (o.rows() != m_rows || o.cols() != m_cols)
        {
            throw ConfigurationError("MatrixSymbol: shape mismatch");
        }
    }

    Index m_rows;
    Index m_cols;
    int m_lo;
    int m_hi;
    std::vector<CMatrix> m_coeffs;
};

inline MatrixSymbol operator+(MatrixSymbol a, const MatrixSymbol& b)
{
    a += b;
    return a;
}

inline MatrixSymbol operator-(MatrixSymbol a, const MatrixSymbol& b)
{
    a -= b;
    return a;
}

inline MatrixSymbol operator*(Complex s, MatrixSymbol a)
{
    a *= s;
    return a;
}

inline MatrixSymbol operator-(MatrixSymbol a)
{
    a *= Complex(-1.0);
    return a;
}

/// Exact Laurent convolution; band [A.lo+B.lo, A.hi+B.hi].
inline MatrixSymbol multiply(const MatrixSymbol& a, const MatrixSymbol& b)
{
    if (a.cols() != b.rows())
    {
        throw ConfigurationError("multiply: A.cols != B.rows");
    }
    MatrixSymbol out(a.rows(), b.cols(), a.lo() + b.lo(), a.hi() + b.hi());
    for (int i = a.lo(); i <= a.hi(); ++i)
    {
        const auto& ai = a.coeff_ref(i);
        if (ai.size() == 0 || ai.isZero(0.0))
        {
            continue;
        }
        for (int j = b.lo(); j <= b.hi(); ++j)
        {
            out.coeff_ref(i + j).noalias() += ai * b.coeff_ref(j);
        }
    }
    return out;
}

inline MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b)
{
    return multiply(a, b);
}

/// Product of a 1x1 symbol with a symbol of any shape.
inline MatrixSymbol scalar_multiply(const MatrixSymbol& s, const MatrixSymbol& a)
{
    if (s.rows() != 1 || s.cols() != 1)
    {
        throw ConfigurationError("scalar_multiply: 1x1 symbol expected");
    }
    MatrixSymbol out(a.rows(), a.cols(), s.lo() + a.lo(), s.hi() + a.hi());
    for (int i = s.lo(); i <= s.hi(); ++i)
    {
        const Complex c = s.coeff_ref(i)(0, 0);
        if (c == Complex(0.0))
        {
            continue;
        }
        for (int j = a.lo(); j <= a.hi(); ++j)
        {
            out.coeff_ref(i + j) += c * a.coeff_ref(j);
        }
    }
    return out;
}

/// (S^*)_k = (S_{-k})^H
inline MatrixSymbol adjoint_symbol(const MatrixSymbol& s)
{
    MatrixSymbol out(s.cols(), s.rows(), -s.hi(), -s.lo());
    for (int k = s.lo(); k <= s.hi(); ++k)
    {
        out.coeff_ref(-k) = s.coeff_ref(k).adjoint();
    }
    return out;
}

inline MatrixSymbol transpose_symbol(const MatrixSymbol& s)
{
    MatrixSymbol out(s.cols(), s.rows(), s.lo(), s.hi());
    for (int k = s.lo(); k <= s.hi(); ++k)
    {
        out.coeff_ref(k) = s.coeff_ref(k).transpose();
    }
    return out;
}

/// Entrywise conjugate on the circle: conj(c z^k) = conj(c) z^{-k}.
inline MatrixSymbol conj_symbol(const MatrixSymbol& s)
{
    MatrixSymbol out(s.rows(), s.cols(), -s.hi(), -s.lo());
    for (int k = s.lo(); k <= s.hi(); ++k)
    {
        out.coeff_ref(-k) = s.coeff_ref(k).conjugate();
    }
    return out;
}

/// Horizontal concatenation (A | B); both must have the same row count.
inline MatrixSymbol hstack(const MatrixSymbol& a, const MatrixSymbol& b)
{
    if (a.rows() != b.rows())
    {
        throw ConfigurationError("hstack: row mismatch");
    }
    const int lo = std::min(a.lo(), b.lo());
    const int hi = std::max(a.hi(), b.hi());
    MatrixSymbol out(a.rows(), a.cols() + b.cols(), lo, hi);
    for (int k = lo; k <= hi; ++k)
    {
        out.coeff_ref(k) << a.coeff(k), b.coeff(k);
    }
    return out;
}

/// Uniform grid zeta_t = exp(2 pi i t / size) on the unit circle.
class CircleGrid
{
public:
    static constexpr long default_size = 1024;

    explicit CircleGrid(long size = default_size) : m_size(size)
    {
        if (!is_power_of_two(size) || size < 2)
        {
            throw ConfigurationError("CircleGrid: size must be a power of two >= 2");
        }
    }

    /// Smallest admissible size for a band [lo, hi] (no aliasing).
    static long required_size(int lo, int hi) { return 2L * (hi - lo) + 2; }

    /// Grid at least as fine as `requested` that satisfies the aliasing
    /// invariant for the band [lo, hi].
    static CircleGrid for_band(int lo, int hi, long requested = default_size)
    {
        return CircleGrid(next_power_of_two(
            std::max({requested, required_size(lo, hi), 2L})));
    }

    static CircleGrid for_symbol(const MatrixSymbol& s, long requested = default_size)
    {
        return for_band(s.lo(), s.hi(), requested);
    }

    long size() const { return m_size; }

    double angle(long t) const
    {
        return 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m_size);
    }

    Complex point(long t) const { return std::polar(1.0, angle(t)); }

    bool admits(const MatrixSymbol& s) const
    {
        return m_size >= required_size(s.lo(), s.hi());
    }

    CircleGrid refined() const { return CircleGrid(2 * m_size); }

private:
    long m_size;
};

/// Samples of a matrix function at the points of a CircleGrid.
using GridFunction = std::vector<CMatrix>;

namespace detail
{

inline std::vector<Complex> fft_inverse_unscaled(const std::vector<Complex>& spectrum)
{
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> out;
    fft.inv(out, spectrum);
    return out;
}

inline std::vector<Complex> fft_forward(const std::vector<Complex>& values)
{
    Eigen::FFT<double> fft;
    std::vector<Complex> out;
    fft.fwd(out, values);
    return out;
}

/// Fourier index represented by FFT bin q of a length-m transform.
inline int bin_to_index(long q, long m)
{
    return static_cast<int>(q < m / 2 ? q : q - m);
}

inline long index_to_bin(int k, long m)
{
    long q = k % m;
    return q < 0 ? q + m : q;
}

} // namespace detail

/// S(zeta_t) for every grid point.
inline GridFunction evaluate(const MatrixSymbol& s, const CircleGrid& g)
{
    if (!g.admits(s))
    {
        throw ConfigurationError("evaluate: grid of size " + std::to_string(g.size()) +
                                 " aliases band [" + std::to_string(s.lo()) + ", " +
                                 std::to_string(s.hi()) + "]");
    }
    const long m = g.size();
    GridFunction out(static_cast<std::size_t>(m), CMatrix::Zero(s.rows(), s.cols()));
    if (s.empty())
    {
        return out;
    }
    std::vector<Complex> spectrum(static_cast<std::size_t>(m));
    for (Index i = 0; i < s.rows(); ++i)
    {
        for (Index j = 0; j < s.cols(); ++j)
        {
            std::fill(spectrum.begin(), spectrum.end(), Complex(0.0));
            for (int k = s.lo(); k <= s.hi(); ++k)
            {
                spectrum[static_cast<std::size_t>(detail::index_to_bin(k, m))] +=
                    s.coeff_ref(k)(i, j);
            }
            const auto vals = detail::fft_inverse_unscaled(spectrum);
            for (long t = 0; t < m; ++t)
            {
                out[static_cast<std::size_t>(t)](i, j) = vals[static_cast<std::size_t>(t)];
            }
        }
    }
    return out;
}

struct FitOptions
{
    /// lowest / highest Fourier index kept (clamped to the grid's range)
    int lo = std::numeric_limits<int>::min();
    int hi = std::numeric_limits<int>::max();
    /// coefficients with max-abs <= tol * (largest coefficient) are trimmed
    /// from the band edges
    double tol = 1e-14;
};

struct BandFit
{
    MatrixSymbol symbol;
    /// l2 norm of all coefficients that were not kept
    double tail_energy = 0.0;
    /// l2 norm of the negative-index coefficients of the grid data
    double antianalytic_energy = 0.0;
};

///
/// Least-squares band fit of grid samples: discrete Fourier coefficients
/// restricted to [opts.lo, opts.hi] and trimmed at the band edges.
///
inline BandFit fit_symbol(const GridFunction& values, const CircleGrid& g,
                          const FitOptions& opts = {})
{
    const long m = g.size();
    if (static_cast<long>(values.size()) != m)
    {
        throw ConfigurationError("fit_symbol: sample count does not match grid");
    }
    const Index rows = values.front().rows();
    const Index cols = values.front().cols();
    const int kmin = std::max(opts.lo, detail::bin_to_index(m / 2, m));
    const int kmax = std::min(opts.hi, detail::bin_to_index(m / 2 - 1, m));

    std::vector<CMatrix> all(static_cast<std::size_t>(m), CMatrix::Zero(rows, cols));
    std::vector<Complex> samples(static_cast<std::size_t>(m));
    for (Index i = 0; i < rows; ++i)
    {
        for (Index j = 0; j < cols; ++j)
        {
            for (long t = 0; t < m; ++t)
            {
                samples[static_cast<std::size_t>(t)] = values[static_cast<std::size_t>(t)](i, j);
            }
            const auto freq = detail::fft_forward(samples);
            for (long q = 0; q < m; ++q)
            {
                all[static_cast<std::size_t>(q)](i, j) =
                    freq[static_cast<std::size_t>(q)] / static_cast<double>(m);
            }
        }
    }

    BandFit out;
    double anti = 0.0;
    double tail = 0.0;
    double biggest = 0.0;
    for (long q = 0; q < m; ++q)
    {
        const int k = detail::bin_to_index(q, m);
        const auto& c = all[static_cast<std::size_t>(q)];
        if (k < 0)
        {
            anti += c.squaredNorm();
        }
        if (k < kmin || k > kmax)
        {
            tail += c.squaredNorm();
        }
        else if (c.size() > 0)
        {
            biggest = std::max(biggest, c.cwiseAbs().maxCoeff());
        }
    }
    out.antianalytic_energy = std::sqrt(anti);

    if (kmin > kmax || rows == 0 || cols == 0)
    {
        out.symbol = MatrixSymbol(rows, cols);
        out.tail_energy = std::sqrt(tail);
        return out;
    }
    MatrixSymbol s(rows, cols, kmin, kmax);
    for (int k = kmin; k <= kmax; ++k)
    {
        s.coeff_ref(k) = all[static_cast<std::size_t>(detail::index_to_bin(k, m))];
    }
    const double cut = opts.tol * biggest;
    MatrixSymbol trimmed = s.trimmed(cut);
    const bool nothing_kept = trimmed.is_zero();
    for (int k = kmin; k <= kmax; ++k)
    {
        if (nothing_kept || k < trimmed.lo() || k > trimmed.hi())
        {
            tail += s.coeff_ref(k).squaredNorm();
        }
    }
    out.symbol = std::move(trimmed);
    out.tail_energy = std::sqrt(tail);
    return out;
}

/// Largest singular value of a (possibly empty) matrix.
inline double spectral_norm(const CMatrix& a)
{
    if (a.size() == 0)
    {
        return 0.0;
    }
    if (a.size() == 1)
    {
        return std::abs(a(0, 0));
    }
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

/// max_t ||values_t||
inline double sup_norm(const GridFunction& values)
{
    double m = 0.0;
    for (const auto& v : values)
    {
        m = std::max(m, spectral_norm(v));
    }
    return m;
}

/// Grid estimate of ||S||_{L^infty}; a lower bound, exact in the grid limit.
inline double linf_norm(const MatrixSymbol& s, const CircleGrid& g)
{
    return sup_norm(evaluate(s, g));
}

struct PointSvd
{
    /// descending singular values, length min(rows, cols)
    RVector s;
    /// left singular vectors (rows x rows)
    CMatrix u;
    /// right singular vectors / Schmidt vectors (cols x cols)
    CMatrix v;
};

inline PointSvd point_svd(const CMatrix& a)
{
    PointSvd p;
    if (a.size() == 0)
    {
        p.s = RVector::Zero(0);
        p.u = CMatrix::Identity(a.rows(), a.rows());
        p.v = CMatrix::Identity(a.cols(), a.cols());
        return p;
    }
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    p.s = svd.singularValues();
    p.u = svd.matrixU();
    p.v = svd.matrixV();
    return p;
}

inline std::vector<PointSvd> pointwise_svd(const GridFunction& values)
{
    std::vector<PointSvd> out;
    out.reserve(values.size());
    for (const auto& v : values)
    {
        out.push_back(point_svd(v));
    }
    return out;
}

inline std::vector<PointSvd> pointwise_svd(const MatrixSymbol& s, const CircleGrid& g)
{
    return pointwise_svd(evaluate(s, g));
}

/// Singular values only, one row per grid point.
inline Eigen::MatrixXd singular_value_profile(const GridFunction& values)
{
    if (values.empty())
    {
        return Eigen::MatrixXd(0, 0);
    }
    const Index k = std::min(values.front().rows(), values.front().cols());
    Eigen::MatrixXd out(static_cast<Index>(values.size()), k);
    for (std::size_t t = 0; t < values.size(); ++t)
    {
        if (k == 0)
        {
            continue;
        }
        Eigen::JacobiSVD<CMatrix> svd(values[t]);
        out.row(static_cast<Index>(t)) = svd.singularValues().transpose();
    }
    return out;
}

/// Pointwise product of two sampled functions.
inline GridFunction pointwise_product(const GridFunction& a, const GridFunction& b)
{
    GridFunction out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t)
    {
        out[t] = a[t] * b[t];
    }
    return out;
}

inline GridFunction pointwise_adjoint(const GridFunction& a)
{
    GridFunction out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t)
    {
        out[t] = a[t].adjoint();
    }
    return out;
}

inline GridFunction pointwise_difference(const GridFunction& a, const GridFunction& b)
{
    GridFunction out(a.size());
    for (std::size_t t = 0; t < a.size(); ++t)
    {
        out[t] = a[t] - b[t];
    }
    return out;
}

} // namespace nehari

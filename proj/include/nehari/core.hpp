#pragma once

///
/// \file core.hpp
///
/// Scalar/matrix aliases, error types and the tolerance bundle shared by all
/// modules.
///

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nehari
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: aliasing grids, out-of-range degrees, bad shapes.
class ConfigurationError : public Error
{
public:
    using Error::Error;
};

/// Input for which the requested object does not exist (zero symbol, ...).
class DegenerateInputError : public Error
{
public:
    using Error::Error;
};

/// A numerical construction whose certificate did not hold.
class FactorizationError : public Error
{
public:
    using Error::Error;
};

/// Malformed symbol / report file.
class ParseError : public Error
{
public:
    using Error::Error;
};

///
/// Tolerances used across the pipeline.  Defaults are tuned for symbols
/// normalized to unit sup-norm.
///
struct Tolerances
{
    /// relative gap under which Hankel singular values count as equal
    double mult_tol = 1e-8;
    /// absolute threshold for Toeplitz-kernel singular values
    double kernel_tol = 1e-8;
    /// principal-angle tolerance for subspace comparisons
    double angle_tol = 1e-6;
    /// pointwise constancy of norms / singular values
    double const_tol = 1e-7;
    /// residual Hankel norm under which the recursion stops
    double stop_tol = 1e-10;
    /// modulus floor used before taking logarithms
    double floor = 1e-9;
    /// relative coefficient size dropped when band-fitting grid data
    double fit_tol = 1e-14;
    /// generic certificate tolerance (unitarity, analyticity, ...)
    double check_tol = 1e-7;
    /// pointwise agreement of s_j((Phi - F)(zeta)) with t_j
    double level_tol = 1e-6;
};

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline long next_power_of_two(long n)
{
    long p = 1;
    while (p < n)
    {
        p <<= 1;
    }
    return p;
}

} // namespace nehari

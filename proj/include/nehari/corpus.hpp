#pragma once

///
/// \file corpus.hpp
///
/// Generators for the standard example symbols.
///

#include <vector>

#include <nehari/symbol.hpp>

namespace nehari::corpus
{

/// z-bar^k as a 1x1 symbol.
inline MatrixSymbol scalar_power(int k)
{
    if (k < 1)
    {
        throw ConfigurationError("scalar_power: k must be positive");
    }
    return MatrixSymbol::scalar({{-k, 1.0}});
}

///
/// diag(0, t_1 zbar^{k_1}, ..., t_d zbar^{k_d}): the leading zero entry is
/// the corner that survives once the listed levels are peeled.
///
inline MatrixSymbol diagonal_levels(const std::vector<double>& t, const std::vector<int>& powers = {})
{
    if (t.empty())
    {
        throw ConfigurationError("diagonal_levels: empty level list");
    }
    if (!powers.empty() && powers.size() != t.size())
    {
        throw ConfigurationError("diagonal_levels: powers and levels differ in length");
    }
    std::vector<MatrixSymbol> entries = {MatrixSymbol::scalar({{0, 0.0}})};
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        if (i > 0 && t[i] > t[i - 1])
        {
            throw ConfigurationError("diagonal_levels: levels must be nonincreasing");
        }
        const int k = powers.empty() ? 1 : powers[i];
        entries.push_back(t[i] * scalar_power(k));
    }
    return MatrixSymbol::diagonal(entries);
}

/// diag(zbar, 0): a symbol with infinitely many best approximants.
inline MatrixSymbol nonunique_pair()
{
    return MatrixSymbol::diagonal({scalar_power(1), MatrixSymbol::scalar({{0, 0.0}})});
}

} // namespace nehari::corpus

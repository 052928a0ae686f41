#pragma once

///
/// \file io.hpp
///
/// JSON serialization of symbols, superopt reports and certificates.
///
/// Symbol format:
///   {"rows": m, "cols": n, "terms": [{"k": int, "i": int, "j": int, "re": x, "im": y}, ...]}
/// Unlisted entries are zero; duplicate (k, i, j) keys are rejected.  Writers
/// emit terms sorted by (k, i, j) and skip exact zeros, so output is canonical.
///

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <json.hpp>

#include <nehari/certify.hpp>

namespace nehari
{

using Json = nlohmann::ordered_json;

inline Json symbol_to_json(const MatrixSymbol& s)
{
    Json j;
    j["rows"] = s.rows();
    j["cols"] = s.cols();
    Json terms = Json::array();
    for (int k = s.lo(); k <= s.hi(); ++k)
    {
        const auto& c = s.coeff_ref(k);
        for (Index i = 0; i < s.rows(); ++i)
        {
            for (Index jj = 0; jj < s.cols(); ++jj)
            {
                const Complex v = c(i, jj);
                if (v == Complex(0.0))
                {
                    continue;
                }
                Json t;
                t["k"] = k;
                t["i"] = i;
                t["j"] = jj;
                t["re"] = v.real();
                t["im"] = v.imag();
                terms.push_back(std::move(t));
            }
        }
    }
    j["terms"] = std::move(terms);
    return j;
}

namespace detail
{

inline long long json_integer(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
    {
        throw ParseError(where + ": missing field \"" + key + "\"");
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
    {
        throw ParseError(where + ": field \"" + key + "\" must be an integer");
    }
    return v.get<long long>();
}

inline double json_number(const Json& obj, const char* key, const std::string& where, bool required)
{
    if (!obj.contains(key))
    {
        if (required)
        {
            throw ParseError(where + ": missing field \"" + key + "\"");
        }
        return 0.0;
    }
    const auto& v = obj.at(key);
    if (!v.is_number())
    {
        throw ParseError(where + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

} // namespace detail

inline MatrixSymbol symbol_from_json(const Json& j)
{
    if (!j.is_object())
    {
        throw ParseError("symbol: top-level value must be an object");
    }
    const long long rows = detail::json_integer(j, "rows", "symbol");
    const long long cols = detail::json_integer(j, "cols", "symbol");
    if (rows <= 0 || cols <= 0)
    {
        throw ParseError("symbol: rows and cols must be positive");
    }
    if (!j.contains("terms") || !j.at("terms").is_array())
    {
        throw ParseError("symbol: field \"terms\" must be an array");
    }
    MatrixSymbol s(rows, cols);
    std::set<std::tuple<long long, long long, long long>> seen;
    const auto& terms = j.at("terms");
    for (std::size_t n = 0; n < terms.size(); ++n)
    {
        const std::string where = "symbol: terms[" + std::to_string(n) + "]";
        const auto& t = terms[n];
        if (!t.is_object())
        {
            throw ParseError(where + ": must be an object");
        }
        const long long k = detail::json_integer(t, "k", where);
        const long long i = detail::json_integer(t, "i", where);
        const long long jj = detail::json_integer(t, "j", where);
        if (i < 0 || i >= rows || jj < 0 || jj >= cols)
        {
            throw ParseError(where + ": entry (" + std::to_string(i) + ", " + std::to_string(jj) +
                             ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        if (k < -(1LL << 20) || k > (1LL << 20))
        {
            throw ParseError(where + ": Fourier index out of range");
        }
        if (!seen.insert({k, i, jj}).second)
        {
            throw ParseError(where + ": duplicate term (k=" + std::to_string(k) + ", i=" + std::to_string(i) +
                             ", j=" + std::to_string(jj) + ")");
        }
        const Complex v(detail::json_number(t, "re", where, true), detail::json_number(t, "im", where, false));
        CMatrix c = CMatrix::Zero(rows, cols);
        c(i, jj) = v;
        s.add_to_coeff(static_cast<int>(k), c);
    }
    return s.trimmed(0.0);
}

inline MatrixSymbol parse_symbol(const std::string& text)
{
    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ParseError(std::string("symbol: invalid JSON: ") + e.what());
    }
    return symbol_from_json(j);
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ParseError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigurationError("cannot write " + path);
    }
    out << text;
}

inline MatrixSymbol read_symbol_file(const std::string& path)
{
    try
    {
        return parse_symbol(read_text_file(path));
    }
    catch (const ParseError& e)
    {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_symbol_file(const std::string& path, const MatrixSymbol& s)
{
    write_text_file(path, dump_json(symbol_to_json(s)));
}

inline Json block_to_json(const ThematicBlock& b)
{
    Json j;
    j["sigma"] = b.sigma;
    j["r"] = b.r;
    j["hankel_multiplicity"] = b.hankel_multiplicity;
    j["U"] = symbol_to_json(b.U);
    j["Upsilon"] = symbol_to_json(b.upsilon);
    j["Theta"] = symbol_to_json(b.theta);
    j["Omega"] = symbol_to_json(b.omega);
    j["Xi"] = symbol_to_json(b.xi);
    j["Psi"] = symbol_to_json(b.Psi);
    j["F0_degree"] = b.F0_degree;
    Json d;
    d["F0_constraint_residual"] = b.F0_constraint_residual;
    d["offdiag_residual"] = b.offdiag_residual;
    d["reconstruction_residual"] = b.reconstruction_residual;
    d["U_unitarity"] = b.U_unitarity;
    d["U_hankel_norm"] = b.U_hankel_norm;
    d["V_unitarity"] = b.V_unitarity;
    d["W_unitarity"] = b.W_unitarity;
    d["psi_sup_norm"] = b.psi_sup_norm;
    d["psi_hankel_norm"] = b.psi_hankel_norm;
    d["theta_min_singular"] = b.theta_min_singular;
    d["xi_min_singular"] = b.xi_min_singular;
    d["essential_norm"] = b.essential_norm;
    d["grid_size"] = b.grid_size;
    j["diagnostics"] = std::move(d);
    if (b.scalar_path)
    {
        Json s;
        s["theta1"] = symbol_to_json(b.theta1);
        s["theta2"] = symbol_to_json(b.theta2);
        s["h"] = symbol_to_json(b.h);
        s["u_unimodularity"] = b.u_unimodularity;
        s["u_formula_residual"] = b.u_formula_residual;
        s["u_winding"] = b.u_winding;
        j["scalar_path"] = std::move(s);
    }
    return j;
}

inline Json report_to_json(const SuperoptReport& rep)
{
    Json j;
    j["t"] = rep.t;
    j["sigma"] = rep.sigma;
    j["r"] = rep.r;
    j["reconstruction_residual"] = rep.reconstruction_residual;
    Json blocks = Json::array();
    for (const auto& b : rep.blocks)
    {
        blocks.push_back(block_to_json(b));
    }
    j["blocks"] = std::move(blocks);
    j["F"] = symbol_to_json(rep.F);
    j["Psi"] = symbol_to_json(rep.Psi);
    j["t_inf"] = rep.t_inf;
    j["tail_model"] = rep.tail_model;
    j["partial"] = rep.partial;
    j["psi_hankel_norm"] = rep.psi_hankel_norm;
    j["F_antianalytic"] = rep.F_antianalytic;
    j["error_sup_norm"] = rep.error_sup_norm;
    j["level_deviation"] = rep.level_deviation;
    j["grid_size"] = rep.grid_size;
    j["hankel_degree"] = rep.hankel_degree;
    return j;
}

inline Json certificate_to_json(const Certificate& c)
{
    Json j;
    j["kind"] = c.kind;
    j["verdict"] = verdict_name(c.verdict);
    j["label"] = c.label;
    j["search_degree"] = c.search_degree;
    j["grid_size"] = c.grid_size;
    Json checks = Json::array();
    for (const auto& k : c.checks)
    {
        Json e;
        e["name"] = k.name;
        e["value"] = k.value;
        e["tol"] = k.tol;
        e["ok"] = k.ok;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    Json w = Json::array();
    for (const auto& s : c.witnesses)
    {
        w.push_back(symbol_to_json(s));
    }
    j["witnesses"] = std::move(w);
    j["notes"] = c.notes;
    return j;
}

} // namespace nehari

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nehari/nehari.hpp>

namespace
{

using namespace nehari;

/// Options shared by every pipeline subcommand.
struct RunConfig
{
    long grid = CircleGrid::default_size;
    int degree = 16;
    int kernel_degree = 8;
    int depth = 0;
    std::uint64_t seed = 1;
    std::optional<double> tail;
    Tolerances tol;
    std::string out;

    void validate() const
    {
        if (!is_power_of_two(grid))
        {
            throw ConfigurationError("--grid must be a power of two");
        }
        if (degree < 1 || kernel_degree < 0 || depth < 0)
        {
            throw ConfigurationError("--degree must be positive, --kernel-degree and --depth nonnegative");
        }
        for (const double t : {tol.mult_tol, tol.kernel_tol, tol.angle_tol, tol.const_tol, tol.stop_tol})
        {
            if (!(t > 0.0))
            {
                throw ConfigurationError("tolerances must be positive");
            }
        }
        if (tail && !(*tail >= 0.0))
        {
            throw ConfigurationError("--tail must be nonnegative");
        }
    }

    SuperoptConfig superopt() const
    {
        SuperoptConfig c;
        c.grid = grid;
        c.degree = degree;
        c.depth = depth;
        c.tail = tail;
        c.tol = tol;
        return c;
    }

    CertifyConfig certify() const
    {
        CertifyConfig c;
        c.grid = grid;
        c.degree = degree;
        c.kernel_degree = kernel_degree;
        c.seed = seed;
        c.tail = tail;
        c.tol = tol;
        return c;
    }
};

void add_run_options(CLI::App* app, RunConfig& cfg)
{
    app->add_option("--grid", cfg.grid, "grid size (power of two)");
    app->add_option("--degree", cfg.degree, "Hankel truncation degree N");
    app->add_option("--kernel-degree", cfg.kernel_degree, "degree bound D of kernel searches");
    app->add_option("--depth", cfg.depth, "levels to peel (0: min(rows, cols))");
    app->add_option("--seed", cfg.seed, "seed of randomized searches");
    app->add_option("--tail", cfg.tail, "declared limit t_inf (tail model)");
    app->add_option("--out", cfg.out, "output file (default: stdout)");
    app->add_option("--tol.mult_tol", cfg.tol.mult_tol);
    app->add_option("--tol.kernel_tol", cfg.tol.kernel_tol);
    app->add_option("--tol.angle_tol", cfg.tol.angle_tol);
    app->add_option("--tol.const_tol", cfg.tol.const_tol);
    app->add_option("--tol.stop_tol", cfg.tol.stop_tol);
}

void emit(const std::string& out, const std::string& text)
{
    if (out.empty())
    {
        std::cout << text;
    }
    else
    {
        write_text_file(out, text);
    }
}

std::string format_double(double v, int digits = 17)
{
    std::ostringstream ss;
    ss << std::setprecision(digits) << v;
    return ss.str();
}

void check_threads_env()
{
    const char* v = std::getenv("SUPEROPT_THREADS");
    if (v == nullptr)
    {
        return;
    }
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1)
    {
        throw ConfigurationError("SUPEROPT_THREADS must be a positive integer");
    }
}

int cmd_info(const std::string& path, const RunConfig& cfg)
{
    const auto s = read_symbol_file(path);
    const CircleGrid g = CircleGrid::for_symbol(s, cfg.grid);
    const auto prof = singular_value_profile(evaluate(s, g));
    std::ostringstream o;
    o << "shape: " << s.rows() << "x" << s.cols() << "\n";
    o << "band: [" << s.lo() << ", " << s.hi() << "]\n";
    o << "grid: " << g.size() << "\n";
    o << "sup_norm: " << format_double(prof.size() > 0 ? prof.col(0).maxCoeff() : 0.0, 12) << "\n";
    o << "hankel_norm: " << format_double(hankel_norm(s), 12) << "\n";
    for (Index j = 0; j < prof.cols(); ++j)
    {
        const double lo = prof.col(j).minCoeff();
        const double hi = prof.col(j).maxCoeff();
        o << "s" << j << ": min " << format_double(lo, 12) << " max " << format_double(hi, 12)
          << (hi - lo < cfg.tol.const_tol ? " (constant)" : "") << "\n";
    }
    std::cout << o.str();
    return 0;
}

void write_trace(const std::string& path, const MatrixSymbol& phi, const MatrixSymbol& f, long grid)
{
    const MatrixSymbol e = phi - f;
    const CircleGrid g = CircleGrid::for_band(std::min(phi.lo(), e.lo()), std::max(phi.hi(), e.hi()), grid);
    const auto sp = singular_value_profile(evaluate(phi, g));
    const auto se = singular_value_profile(evaluate(e, g));
    std::ostringstream o;
    o << "theta";
    for (Index j = 0; j < sp.cols(); ++j)
    {
        o << ",s" << j;
    }
    for (Index j = 0; j < se.cols(); ++j)
    {
        o << ",e" << j;
    }
    o << "\n";
    for (long t = 0; t < g.size(); ++t)
    {
        o << format_double(g.angle(t));
        for (Index j = 0; j < sp.cols(); ++j)
        {
            o << "," << format_double(sp(t, j));
        }
        for (Index j = 0; j < se.cols(); ++j)
        {
            o << "," << format_double(se(t, j));
        }
        o << "\n";
    }
    write_text_file(path, o.str());
}

int cmd_superopt(const std::string& path, const RunConfig& cfg, const std::string& trace)
{
    const auto s = read_symbol_file(path);
    const auto rep = superopt_factorize(s, cfg.superopt());
    emit(cfg.out, dump_json(report_to_json(rep)));
    if (!trace.empty())
    {
        write_trace(trace, s, rep.F, cfg.grid);
    }
    return 0;
}

int cmd_certify(const std::string& path, const RunConfig& cfg, const std::string& which)
{
    const auto s = read_symbol_file(path);
    Certificate c;
    if (which == "ba")
    {
        c = badly_approximable(s, cfg.certify());
    }
    else if (which == "vba")
    {
        c = condition_c(s, cfg.certify());
    }
    else
    {
        c = isometry_uniqueness(s, cfg.certify());
    }
    emit(cfg.out, dump_json(certificate_to_json(c)));
    switch (c.verdict)
    {
    case Verdict::pass:
        return 0;
    case Verdict::fail:
        return 2;
    default:
        return 3;
    }
}

int cmd_complete(const std::string& path, const RunConfig& cfg)
{
    const auto y = read_symbol_file(path);
    const auto c = balanced_completion(y, CircleGrid::for_symbol(y, cfg.grid), cfg.tol);
    Json j;
    j["V"] = symbol_to_json(c.V);
    j["Theta"] = symbol_to_json(c.theta);
    j["G"] = symbol_to_json(c.G);
    Json d;
    d["unitarity_residual"] = c.unitarity_residual;
    d["theta_antianalytic"] = c.theta_antianalytic;
    d["g_residual"] = c.g_residual;
    d["g_range_residual"] = c.g_range_residual;
    d["theta_min_singular"] = c.theta_min_singular;
    d["co_outer"] = c.co_outer;
    d["co_outer_degree"] = c.co_outer_degree;
    d["projection_degree"] = c.projection_degree;
    j["diagnostics"] = std::move(d);
    emit(cfg.out, dump_json(j));
    return 0;
}

int cmd_example(const std::string& name, const std::vector<double>& levels, int k, const std::string& out)
{
    MatrixSymbol s;
    if (name == "diag5")
    {
        s = corpus::diagonal_levels(levels);
    }
    else if (name == "scalar-bp")
    {
        s = corpus::scalar_power(k);
    }
    else
    {
        s = corpus::nonunique_pair();
    }
    emit(out, dump_json(symbol_to_json(s)));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Best and superoptimal analytic approximation of matrix symbols"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string path;
    std::string trace;
    std::string which;
    std::string example_name;
    std::vector<double> levels = {1.0, 0.9, 0.8};
    int power = 1;

    auto* info = app.add_subcommand("info", "summarize a symbol file");
    info->add_option("path", path, "symbol file")->required();
    add_run_options(info, cfg);

    auto* sup = app.add_subcommand("superopt", "superoptimal factorization report");
    sup->add_option("path", path, "symbol file")->required();
    sup->add_option("--trace-csv", trace, "per-point singular values of Phi and Phi - F");
    add_run_options(sup, cfg);

    auto* cert = app.add_subcommand("certify", "certificate (exit 0 pass, 2 fail, 3 inconclusive)");
    cert->add_option("path", path, "symbol file")->required();
    cert->add_option("--which", which, "ba | vba | iso")
        ->required()
        ->check(CLI::IsMember({"ba", "vba", "iso"}));
    add_run_options(cert, cfg);

    auto* comp = app.add_subcommand("complete", "balanced completion of an inner column block");
    comp->add_option("path", path, "symbol file (n x r inner)")->required();
    add_run_options(comp, cfg);

    auto* ex = app.add_subcommand("example", "write a corpus symbol");
    ex->add_option("name", example_name, "diag5 | scalar-bp | py-nonunique")
        ->required()
        ->check(CLI::IsMember({"diag5", "scalar-bp", "py-nonunique"}));
    ex->add_option("--levels", levels, "levels t_j for diag5")->delimiter(',');
    ex->add_option("--k", power, "power k for scalar-bp");
    ex->add_option("--out", cfg.out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        check_threads_env();
        cfg.validate();
        if (*info)
        {
            return cmd_info(path, cfg);
        }
        if (*sup)
        {
            return cmd_superopt(path, cfg, trace);
        }
        if (*cert)
        {
            return cmd_certify(path, cfg, which);
        }
        if (*comp)
        {
            return cmd_complete(path, cfg);
        }
        return cmd_example(example_name, levels, power, cfg.out);
    }
    catch (const nehari::Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include <iomanip>
#include <iostream>

#include <nehari/nehari.hpp>

using namespace nehari;

namespace
{

void show(const char* name, const MatrixSymbol& phi, const SuperoptConfig& cfg = {})
{
    const auto rep = superopt_factorize(phi, cfg);
    std::cout << name << "\n  t =";
    for (const double t : rep.t)
    {
        std::cout << " " << t;
    }
    std::cout << "\n  ||F||_inf = " << linf_norm(rep.F, CircleGrid::for_symbol(rep.F)) << "\n";
    std::cout << "  reconstruction residual = " << rep.reconstruction_residual << "\n";
    double dev = 0.0;
    for (const double d : rep.level_deviation)
    {
        dev = std::max(dev, d);
    }
    std::cout << "  max |s_j(Phi - F) - t_j| = " << dev << "\n";
    std::cout << "  uniqueness: " << uniqueness_hint(rep, phi, [&] {
        CertifyConfig c;
        c.tail = cfg.tail;
        return c;
    }()).label << "\n";
}

} // namespace

int main()
{
    std::cout << std::setprecision(10);
    show("zbar + zbar^2/2", MatrixSymbol::scalar({{-1, 1.0}, {-2, 0.5}}));
    show("diag(zbar, zbar/2)", MatrixSymbol::diagonal({MatrixSymbol::scalar({{-1, 1.0}}),
                                                       MatrixSymbol::scalar({{-1, 0.5}})}));
    show("diag(zbar, 0)", corpus::nonunique_pair());
    SuperoptConfig tail;
    tail.depth = 3;
    tail.tail = 0.8;
    show("diag(0, zbar, 0.9 zbar, 0.8 zbar), depth 3, tail 0.8", corpus::diagonal_levels({1.0, 0.9, 0.8}), tail);
    return 0;
}

// Walks through h0, h1 and the Riemann-Roch identity on a few fields, then
// a small ghost-space on Z/4.

#include "arcoh/arakelov.hpp"
#include "arcoh/ghost.hpp"

#include <cmath>
#include <cstdio>

int main()
{
    using namespace arcoh;

    for (long long d : {-1LL, -5LL, 5LL}) {
        const NumberField f = make_quadratic_field(d);
        ArakelovDivisor div{std::vector<PrimeExponent>{{2, 0, 1}}, std::vector<double>(f.places(), 0.3)};
        const auto rr = verify_riemann_roch(f, div, 1e-9);
        std::printf("%-14s deg D = %+.6f  h0(D) = %.10f  h0(K-D) = %.10f  delta = %.2e\n", f.name().c_str(),
                    degree(f, div), rr.h0_d.value, rr.h0_k_minus_d.value, rr.delta);
    }

    const NumberField q = make_rational_field();
    std::printf("\nQ, t -> h0(D_t), h1(D_t)\n");
    for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const auto d = ArakelovDivisor::at_infinity(q, {t});
        std::printf("  %+.1f  %.10f  %.10f\n", t, h0(q, d, 1e-10).value, h1(q, d, 1e-10).value);
    }

    const FiniteAbelianGroup z4({4});
    const GhostSpaceFirstKind s(z4, {1, 0.5, 0.5, 0.5});
    const std::size_t gen[] = {2};
    const auto sq = sub_quotient_first(s, gen);
    std::printf("\nZ/4 with u = (1, .5, .5, .5)\n");
    std::printf("  dim = %.6f, dim of quotient G/G_u = %.6f, log|G| = %.6f\n", dim_first(s),
                dim_second(quotient_by_ghost(s)), std::log(4.0));
    std::printf("  H = {0, 2}: dim H = %.6f, dim G/H = %.6f, v = (%.4f, %.4f)\n", sq.dim_sub, sq.dim_quotient,
                sq.v[0], sq.v[1]);
    const auto dual = dual_ghost(s);
    std::printf("  dual measure (%.4f, %.4f, %.4f, %.4f), dim %.6f\n", dual.mu()[0], dual.mu()[1], dual.mu()[2],
                dual.mu()[3], dim_second(dual));
    return 0;
}

// Little q-Jacobi polynomials as eigenvectors: lambda_{n,r} for M_n, mu_r for
// the second-order q-difference operator U, and the fixed-q limit operator.

#include <cmath>
#include <cstdio>

#include "qbd/qjacobi.hpp"

int main() {
    using namespace qbd;

    const QParam q(0.9);
    const JacobiWeight w(0.5, -0.3);
    const int n = 10;
    const DurrmeyerOperator M(OperatorSpec(n, q, w));

    std::printf("q = 0.9, (alpha, beta) = (0.5, -0.3), n = %d\n\n", n);
    std::printf("%3s %14s %14s %14s %12s\n", "r", "lambda_{n,r}", "sigma_r", "mu_r", "M residual");
    int status = 0;
    for (int r = 0; r <= 6; ++r) {
        const auto p = qjacobi_series(r, w, q).poly;
        const double lam = eigenvalue_lambda(n, r, w, q);
        const double res = max_coeff_rel_diff(M.apply_to_poly(p), p * lam);
        if (res > 1e-8)
            status = 1;
        std::printf("%3d %14.10f %14.10f %14.6f %12.3g\n", r, lam, spectral_sigma(r, w, q), eigenvalue_mu(r, w, q),
                    res);
    }

    std::printf("\nP_3 = ");
    const auto p3 = qjacobi_series(3, w, q).poly;
    for (int k = 0; k <= 3; ++k)
        std::printf("%s%.8f x^%d", k ? " + " : "", p3.coeff(k), k);
    std::printf("\nnorm nu_3 = %.12f\n", qjacobi_norm(3, w, q));

    // fixed q: M_n f approaches S_q f, not f
    auto f = [](double t) { return t * t; };
    const auto e = spectral_expand(f, 2, w, q);
    std::printf("\n%4s %16s\n", "n", "|M_n f - S_q f| at 0.5");
    for (int m : {5, 10, 20, 40, 80})
        std::printf("%4d %16.6g\n", m, std::abs(e.distance_to_limit(m)(0.5)));
    return status;
}

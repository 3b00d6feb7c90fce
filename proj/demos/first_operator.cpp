// Build one operator, look at its coefficients, compare the coefficient and
// kernel forms, and watch the endpoint variant interpolate.

#include <cmath>
#include <cstdio>

#include "qbd/durrmeyer.hpp"

int main() {
    using namespace qbd;

    const QParam q(0.5);
    const OperatorSpec spec(6, q, JacobiWeight(0.5, -0.3));
    const DurrmeyerOperator M(spec);
    const KernelForm K(spec);

    auto f = [](double t) { return std::sin(6.0 * t); };

    std::printf("coefficients of M f, f = sin 6t, n = 6, q = 0.5, (alpha, beta) = (0.5, -0.3)\n");
    const auto c = M.coefficients(f);
    for (std::size_t k = 0; k < c.size(); ++k)
        std::printf("  f_%zu = % .12f\n", k, c[k]);

    std::printf("\n%6s %16s %16s %12s\n", "x", "M f", "kernel", "difference");
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double x = i / 10.0;
        const double a = M.eval(f, x);
        const double b = K.eval(f, x);
        worst = std::max(worst, std::abs(a - b));
        std::printf("%6.2f %16.12f %16.12f %12.3g\n", x, a, b, a - b);
    }

    // exact image of a polynomial
    const Poly sq({0.0, 0.0, 1.0});
    const Poly img = M.apply_to_poly(sq);
    std::printf("\nM[x^2] = %.12f + %.12f x + %.12f x^2\n", img.coeff(0), img.coeff(1), img.coeff(2));

    const DurrmeyerOperator E(OperatorSpec(6, q, JacobiWeight(-1.0, -1.0)));
    auto g = [](double t) { return std::exp(t); };
    const auto ei = E.image(g);
    std::printf("\n(-1,-1): M e^x at 0 = %.17g (e^0 = 1), at 1 = %.17g (e = %.17g)\n", ei(0.0), ei(1.0), std::exp(1.0));

    return worst < 1e-9 && ei(0.0) == 1.0 && ei(1.0) == std::exp(1.0) ? 0 : 1;
}

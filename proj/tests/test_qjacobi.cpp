#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qbd/qjacobi.hpp"

using namespace qbd;

namespace {

const JacobiWeight kWeights[] = {JacobiWeight(0.0, 0.0), JacobiWeight(0.5, -0.3), JacobiWeight(2.0, 1.0)};

double gen_binomial(double a, int m) {
    return std::exp(std::lgamma(a + 1.0) - std::lgamma(m + 1.0) - std::lgamma(a - m + 1.0));
}

/// Classical Jacobi P_r^{(a,b)}(1 - 2x) = sum_k C(r+a, r-k) C(r+b, k) (-x)^k (1-x)^{r-k}.
Poly classical_jacobi(int r, double a, double b) {
    Poly s;
    for (int k = 0; k <= r; ++k) {
        Poly term = Poly::monomial(k, gen_binomial(r + a, r - k) * gen_binomial(r + b, k) * (k % 2 ? -1.0 : 1.0));
        for (int j = 0; j < r - k; ++j)
            term = term * Poly({1.0, -1.0});
        s += term;
    }
    return s;
}

/// U f from its defining quotient D_q(x^{a+1} (1 - q^{-b-1} x)_q^{b+1} (D_q f)(x/q)) / (x^a (1 - q^{-b} x)_q^b).
template <class F>
double u_operator_raw(const F& f, const JacobiWeight& w, QParam q, double x) {
    const double qv = q.value(), a = w.alpha(), b = w.beta();
    auto df_over_q = [&](double t) {
        const double s = t / qv;
        return (f(qv * s) - f(s)) / ((qv - 1.0) * s);
    };
    auto h = [&](double t) {
        return std::pow(t, a + 1.0) * q_pochhammer(std::pow(qv, -b - 1.0) * t, b + 1.0, q) * df_over_q(t);
    };
    return q_derivative(h, x, q) / (std::pow(x, a) * q_pochhammer(std::pow(qv, -b) * x, b, q));
}

double sup_on_grid(const Poly& p) {
    double m = 0.0;
    for (int i = 0; i <= 100; ++i)
        m = std::max(m, std::abs(p(i / 100.0)));
    return m;
}

} // namespace

TEST(Series, Examples) {
    const QParam q(0.6);
    EXPECT_EQ(qjacobi_series(0, JacobiWeight(0.5, -0.3), q).poly, Poly({1.0}));
    for (const auto& w : kWeights) {
        const double a = w.alpha(), b = w.beta();
        const auto p1 = qjacobi_series(1, w, q).poly;
        const double a0 = q_number(a + 1.0, q);
        EXPECT_NEAR(p1.coeff(0), a0, 1e-14);
        EXPECT_NEAR(p1.coeff(1), -std::pow(0.6, -1.0 - b) * q_number(a + b + 2.0, q), 1e-13);
        EXPECT_EQ(p1.degree(), 1);
    }
    EXPECT_THROW(qjacobi_series(-1, JacobiWeight(0, 0), q), DomainError);
    EXPECT_THROW(qjacobi_series(2, JacobiWeight(-1, -1), q), DomainError);
}

TEST(Series, DegreeAndNormalization) {
    for (const auto& w : kWeights)
        for (double qv : {0.3, 0.5, 0.9, 0.99})
            for (int r = 0; r <= 8; ++r) {
                const auto p = qjacobi_series(r, w, QParam(qv));
                EXPECT_EQ(p.poly.degree(), r);
                const double p0 = q_binomial_real(r + w.alpha(), r, QParam(qv));
                EXPECT_NEAR(p.poly(0.0), p0, 1e-10 * std::max(1.0, std::abs(p0)));
            }
}

TEST(Series, GramSchmidtOracle) {
    // Orthogonalize 1, x, x^2 under the form; P_2 must be proportional to the result.
    const JacobiWeight w(0, 0);
    const QParam q(0.5);
    const Poly e0({1.0});
    Poly e1({0.0, 1.0});
    e1 -= e0 * (inner_product(e1, e0, w, q) / inner_product(e0, e0, w, q));
    Poly e2({0.0, 0.0, 1.0});
    const Poly x2 = e2;
    e2 -= e0 * (inner_product(x2, e0, w, q) / inner_product(e0, e0, w, q));
    e2 -= e1 * (inner_product(x2, e1, w, q) / inner_product(e1, e1, w, q));
    const auto p2 = qjacobi_series(2, w, q).poly;
    const Poly scaled = e2 * (p2.coeff(2) / e2.coeff(2));
    EXPECT_LT(max_coeff_rel_diff(scaled, p2), 1e-10);
    EXPECT_LT(std::abs(inner_product(p2, e0, w, q)), 1e-10);
    EXPECT_LT(std::abs(inner_product(p2, e1, w, q)), 1e-10);
}

TEST(Rodrigues, MatchesSeries) {
    for (const auto& w : kWeights)
        for (double qv : {0.3, 0.5, 0.7, 0.9, 0.99})
            for (int r = 0; r <= 6; ++r) {
                const auto s = qjacobi_series(r, w, QParam(qv)).poly;
                const auto d = qjacobi_rodrigues(r, w, QParam(qv)).poly;
                EXPECT_LT(max_coeff_rel_diff(d, s), 1e-9) << r << ' ' << qv;
            }
}

TEST(Rodrigues, Examples) {
    EXPECT_EQ(qjacobi_rodrigues(0, JacobiWeight(2, 1), QParam(0.4)).poly, Poly({1.0}));
    const QParam q(0.7);
    const JacobiWeight w(0.5, -0.3);
    const auto s = qjacobi_series(3, w, q).poly;
    const auto d = qjacobi_rodrigues(3, w, q).poly;
    for (int k = 0; k <= 3; ++k)
        EXPECT_NEAR(d.coeff(k), s.coeff(k), 1e-12 * std::abs(s.coeff(k)));
    // A(0) = [r]! [r+a over r]
    EXPECT_NEAR(d(0.0) * q_factorial(3, q), q_factorial(3, q) * q_binomial_real(3.5, 3, q), 1e-12);
}

TEST(ClassicalLimit, ApproachesJacobi) {
    for (const auto& w : kWeights)
        for (int r = 1; r <= 4; ++r) {
            const Poly classical = classical_jacobi(r, w.alpha(), w.beta());
            double prev = INFINITY;
            for (int k = 2; k <= 5; ++k) {
                const auto p = qjacobi_series(r, w, QParam(1.0 - std::pow(10.0, -k))).poly;
                const double gap = max_coeff_rel_diff(p, classical);
                EXPECT_LT(gap, prev) << r << ' ' << k;
                prev = gap;
            }
            EXPECT_LT(prev, 1e-3);
        }
}

TEST(Orthogonality, OffDiagonalVanishes) {
    for (const auto& w : kWeights)
        for (double qv : {0.5, 0.9}) {
            const QParam q(qv);
            std::vector<Poly> ps;
            std::vector<double> nu;
            for (int r = 0; r <= 6; ++r) {
                ps.push_back(qjacobi_series(r, w, q).poly);
                nu.push_back(qjacobi_norm(r, w, q));
            }
            for (int r = 0; r <= 6; ++r)
                for (int s = r + 1; s <= 6; ++s) {
                    const double v = inner_product(ps[static_cast<std::size_t>(r)], ps[static_cast<std::size_t>(s)], w, q);
                    EXPECT_LT(std::abs(v), 1e-9 * nu[static_cast<std::size_t>(r)] * nu[static_cast<std::size_t>(s)])
                        << r << ' ' << s << ' ' << qv;
                }
        }
}

TEST(Norm, PositiveAndMass) {
    for (const auto& w : kWeights)
        for (double qv : {0.3, 0.9}) {
            const QParam q(qv);
            auto one = [](double) { return 1.0; };
            EXPECT_NEAR(qjacobi_norm(0, w, q), std::sqrt(inner_product(one, one, w, q)), 1e-15);
            for (int r = 0; r <= 8; ++r)
                EXPECT_GT(qjacobi_norm(r, w, q), 0.0);
        }
}

TEST(EigenvalueMu, Examples) {
    const JacobiWeight w(0, 0);
    EXPECT_EQ(eigenvalue_mu(0, w, QParam(0.5)), 0.0);
    EXPECT_NEAR(eigenvalue_mu(1, w, QParam(0.5)), -3.0, 1e-14);
    for (const auto& ww : kWeights)
        for (int r = 1; r <= 10; ++r)
            EXPECT_LT(eigenvalue_mu(r, ww, QParam(0.8)), 0.0);
}

TEST(UOperator, Examples) {
    const JacobiWeight w(0, 0);
    const QParam q(0.5);
    EXPECT_EQ(u_operator([](double) { return 4.0; }, w, q, 0.3), 0.0);
    // r = 1: [a+1](1-x) - q^{-b-1}[b+1] x
    EXPECT_NEAR(u_operator([](double t) { return t; }, w, q, 0.4), (1.0 - 0.4) - 2.0 * 0.4, 1e-14);
    EXPECT_THROW(u_operator([](double t) { return t; }, w, q, 0.0), DomainError);
}

TEST(UOperator, ExpandedFormMatchesDefinition) {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> dc(-1.0, 1.0);
    for (const auto& w : kWeights)
        for (double qv : {0.5, 0.8}) {
            const QParam q(qv);
            std::vector<double> c(5);
            for (double& v : c)
                v = dc(rng);
            const Poly p(c);
            for (double s : {0.2, 0.5, 0.9}) {
                const double x = s * std::pow(qv, w.beta() + 1.0);
                const double raw = u_operator_raw(p, w, q, x);
                EXPECT_NEAR(u_operator(p, w, q, x), raw, 1e-9 * (1.0 + std::abs(raw))) << x;
                EXPECT_NEAR(u_operator_poly(p, w, q)(x), raw, 1e-9 * (1.0 + std::abs(raw))) << x;
            }
        }
}

TEST(UOperator, EigenIdentity) {
    for (const auto& w : kWeights)
        for (double qv : {0.3, 0.5, 0.9, 0.99})
            for (int r = 0; r <= 6; ++r) {
                const QParam q(qv);
                const auto p = qjacobi_series(r, w, q);
                const double mu = eigenvalue_mu(r, w, q);
                for (int i = 1; i <= 21; ++i) {
                    const double x = i / 22.0;
                    EXPECT_LT(std::abs(u_operator(p, w, q, x) - mu * p(x)), 1e-8 * (1.0 + std::abs(mu)) * std::max(1.0, sup_on_grid(p.poly)))
                        << r << ' ' << qv << ' ' << x;
                }
            }
}

TEST(UOperator, DegreePreservation) {
    for (const auto& w : kWeights)
        for (int r = 0; r <= 8; ++r) {
            const QParam q(0.7);
            const Poly img = u_operator_poly(Poly::monomial(r), w, q);
            if (r == 0) {
                EXPECT_TRUE(img.is_zero());
                continue;
            }
            EXPECT_EQ(img.degree(), r);
            EXPECT_NEAR(img.coeff(r), eigenvalue_mu(r, w, q), 1e-10 * std::abs(eigenvalue_mu(r, w, q)));
        }
}

TEST(UOperator, SelfAdjoint) {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> dc(-1.0, 1.0);
    for (const auto& w : kWeights) {
        const QParam q(0.6);
        std::vector<double> a(4), b(4);
        for (double& v : a)
            v = dc(rng);
        for (double& v : b)
            v = dc(rng);
        const Poly f(a), g(b);
        const double lhs = inner_product(u_operator_poly(f, w, q), g, w, q);
        const double rhs = inner_product(f, u_operator_poly(g, w, q), w, q);
        EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST(UOperator, CommutesWithOperator) {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> dc(-1.0, 1.0);
    for (const auto& w : kWeights)
        for (int n = 1; n <= 6; ++n) {
            const QParam q(0.75);
            std::vector<double> c(static_cast<std::size_t>(n) + 1);
            for (double& v : c)
                v = dc(rng);
            const Poly f(c);
            const DurrmeyerOperator M(OperatorSpec(n, q, w));
            const Poly um = u_operator_poly(M.apply_to_poly(f), w, q);
            const Poly mu = M.apply_to_poly(u_operator_poly(f, w, q));
            for (int i = 1; i <= 20; ++i)
                EXPECT_LT(std::abs(um(i / 20.0) - mu(i / 20.0)), 1e-7);
        }
}

TEST(DerivativeRelation, Residuals) {
    EXPECT_LT(q_derivative_relation_check(1, JacobiWeight(0.5, -0.3), QParam(0.5)), 1e-12);
    EXPECT_LT(q_derivative_relation_check(4, JacobiWeight(0.2, 1.3), QParam(0.6)), 1e-9);
    for (const auto& w : kWeights)
        for (double qv : {0.3, 0.9})
            for (int r = 1; r <= 6; ++r)
                EXPECT_LT(q_derivative_relation_check(r, w, QParam(qv)), 1e-9);
    EXPECT_THROW(q_derivative_relation_check(0, JacobiWeight(0, 0), QParam(0.5)), DomainError);
}

TEST(DerivativeRelation, ScalingAtZero) {
    const JacobiWeight w(0.2, 1.3);
    const QParam q(0.6);
    const int r = 4;
    const auto lower = qjacobi_series(r - 1, JacobiWeight(1.2, 2.3), q).poly;
    const double factor = -std::pow(0.6, -1.3 - r) * q_number(r + 0.2 + 1.3 + 1.0, q);
    EXPECT_NEAR(factor * lower(0.0), factor * q_binomial_real(r - 1 + 1.2, r - 1, q), 1e-10 * std::abs(factor));
    const Poly lhs = qjacobi_series(r, w, q).poly.q_derivative(q).dilate(1.0 / 0.6);
    EXPECT_NEAR(lhs(0.0), factor * lower(0.0), 1e-9 * std::abs(factor * lower(0.0)));
}

TEST(Spectral, GapMatchesDifference) {
    for (const auto& w : kWeights)
        for (int n : {1, 5, 20})
            for (int r = 0; r <= 8; ++r) {
                const QParam q(0.7);
                const double direct = eigenvalue_lambda(n, r, w, q) - spectral_sigma(r, w, q);
                EXPECT_NEAR(spectral_gap(n, r, w, q), direct, 1e-14);
            }
}

TEST(Spectral, ExpansionOfBasisPolynomials) {
    const JacobiWeight w(0.5, -0.3);
    const QParam q(0.6);
    for (int s = 0; s <= 4; ++s) {
        const auto e = spectral_expand(qjacobi_series(s, w, q).poly, 5, w, q);
        for (int r = 0; r <= 5; ++r)
            EXPECT_NEAR(e.coeffs[static_cast<std::size_t>(r)], r == s ? 1.0 : 0.0, 1e-9);
        for (double nu : e.norms)
            EXPECT_GT(nu, 0.0);
    }
    const auto one = spectral_expand([](double) { return 1.0; }, 3, w, q);
    EXPECT_NEAR(one.coeffs[0], 1.0, 1e-12);
    for (int r = 1; r <= 3; ++r)
        EXPECT_NEAR(one.coeffs[static_cast<std::size_t>(r)], 0.0, 1e-12);
}

TEST(Spectral, ReconstructionMatchesOperator) {
    const JacobiWeight w(0, 0);
    const QParam q(0.5);
    const Poly sq({0, 0, 1});
    const auto e = spectral_expand(sq, 4, w, q);
    EXPECT_LT(max_coeff_diff(e.partial_sum(), sq), 1e-10);
    const Poly exact = DurrmeyerOperator(OperatorSpec(6, q, w)).apply_to_poly(sq);
    for (int i = 0; i <= 20; ++i)
        EXPECT_NEAR(e.operator_image(6)(i / 20.0), exact(i / 20.0), 1e-8);
    for (const auto& ww : kWeights) {
        const Poly cube({0.1, 0.0, -1.0, 1.0});
        const auto ec = spectral_expand(cube, 3, ww, QParam(0.8));
        const Poly ex = DurrmeyerOperator(OperatorSpec(5, QParam(0.8), ww)).apply_to_poly(cube);
        for (int i = 0; i <= 20; ++i)
            EXPECT_NEAR(ec.operator_image(5)(i / 20.0), ex(i / 20.0), 1e-8);
    }
}

TEST(Spectral, LimitCharacterization) {
    const JacobiWeight w(0, 0);
    const QParam q(0.5);
    const Poly c = spectral_limit([](double) { return 2.5; }, 4, w, q);
    for (int i = 0; i <= 10; ++i)
        EXPECT_NEAR(c(i / 10.0), 2.5, 1e-12);
    const Poly s = spectral_limit([](double t) { return t; }, 1, w, q);
    EXPECT_GT(sup_on_grid(s - Poly({0.0, 1.0})), 1e-3);
    EXPECT_THROW(spectral_expand([](double t) { return t; }, 2, JacobiWeight(-1, -1), q), DomainError);
}

TEST(Spectral, DistanceDecaysGeometrically) {
    const JacobiWeight w(0, 0);
    const QParam q(0.5);
    const auto e = spectral_expand([](double t) { return t * t; }, 2, w, q);
    std::vector<double> gaps;
    for (int n = 4; n <= 20; ++n) {
        const double g = sup_on_grid(e.distance_to_limit(n));
        // the direct difference agrees wherever it is still above roundoff
        const double direct = sup_on_grid(e.operator_image(n) - e.limit());
        EXPECT_NEAR(g, direct, 1e-14);
        gaps.push_back(g);
    }
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        const double ratio = gaps[i] / gaps[i - 1];
        EXPECT_GE(ratio, 0.25);
        EXPECT_LT(ratio, 1.0);
    }
}

TEST(Eigenvector, OperatorImageOfBasisPolynomials) {
    // Coefficients of P_r grow like q^{-r^2/2}; the check is well conditioned for q near 1.
    for (const auto& w : kWeights)
        for (double qv : {0.9, 0.99})
            for (int n : {1, 4, 16})
                for (int r = 0; r <= std::min(n, 6); ++r) {
                    const QParam q(qv);
                    const auto p = qjacobi_series(r, w, q).poly;
                    const Poly img = DurrmeyerOperator(OperatorSpec(n, q, w)).apply_to_poly(p);
                    EXPECT_LT(max_coeff_rel_diff(img, p * eigenvalue_lambda(n, r, w, q)), 1e-8) << n << ' ' << r;
                }
}

#pragma once

// Little q-Jacobi polynomials P_r with P_r(0) = [r+alpha over r]_q: the common
// eigenvectors of the Durrmeyer operators and of the q-Jacobi operator U_q.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qbd/durrmeyer.hpp"
#include "qbd/error.hpp"
#include "qbd/poly.hpp"
#include "qbd/qcore.hpp"

namespace qbd {

struct QJacobiPoly {
    int r;
    JacobiWeight weight;
    QParam q;
    Poly poly;

    double operator()(double x) const { return poly(x); }
};

namespace detail {

inline void require_regular(const JacobiWeight& w, const char* what) {
    if (!w.is_regular())
        throw DomainError(std::string(what) + " needs a regular weight (alpha, beta > -1)");
}

} // namespace detail

namespace detail {

inline long double q_number_ext(long double a, long double q) { return -std::expm1(a * std::log(q)) / (1.0L - q); }

} // namespace detail

/// Terminating 2phi1 series: a_0 = [r+alpha over r]_q,
/// a_{k+1}/a_k = -q^{-r-beta} ([r]-[k]) [k+r+alpha+beta+1] / ([k+1][k+alpha+1]).
/// The products run in extended precision so the coefficients come out nearly
/// correctly rounded; orthogonality residuals are very sensitive to them.
inline QJacobiPoly qjacobi_series(int r, const JacobiWeight& w, QParam q) {
    if (r < 0)
        throw DomainError("degree must be nonnegative");
    detail::require_regular(w, "qjacobi_series");
    using detail::q_number_ext;
    const long double a = w.alpha();
    const long double b = w.beta();
    const long double qv = q.value();
    const long double lead = -std::pow(qv, -r - b);
    std::vector<long double> c(static_cast<std::size_t>(r) + 1);
    c[0] = 1.0L;
    for (int i = 1; i <= r; ++i)
        c[0] *= q_number_ext(a + i, qv) / q_number_ext(i, qv);
    for (int k = 0; k < r; ++k)
        c[static_cast<std::size_t>(k) + 1] = c[static_cast<std::size_t>(k)] * lead *
                                             (q_number_ext(r, qv) - q_number_ext(k, qv)) *
                                             q_number_ext(k + r + a + b + 1.0L, qv) /
                                             (q_number_ext(k + 1, qv) * q_number_ext(k + a + 1.0L, qv));
    return {r, w, q, Poly(std::vector<double>(c.begin(), c.end()))};
}

/// Rodrigues-type closed form P_r = A / [r]! with
///   A(x) = sum_k (-1)^k [r over k] (Gamma_q(a+r+1)/Gamma_q(a+k+1)) (Gamma_q(b+r+1)/Gamma_q(b+r-k+1))
///          q^{c_k} x^k (1 - q^{k-b-r} x)_q^{r-k},   c_k = k(k + a - b - r + (k-1)/2).
inline QJacobiPoly qjacobi_rodrigues(int r, const JacobiWeight& w, QParam q) {
    if (r < 0)
        throw DomainError("degree must be nonnegative");
    detail::require_regular(w, "qjacobi_rodrigues");
    const double a = w.alpha();
    const double b = w.beta();
    const double qv = q.value();
    Poly A;
    for (int k = 0; k <= r; ++k) {
        const double kd = k;
        const double ck = kd * (kd + a - b - r + (kd - 1.0) / 2.0);
        double coef = q_binomial(r, k, q) * q_rising(a + k + 1.0, r - k, q) * q_rising(b + r - k + 1.0, k, q) *
                      std::pow(qv, ck);
        if (k % 2 == 1)
            coef = -coef;
        Poly term = Poly::monomial(k, coef);
        const double c0 = std::pow(qv, kd - b - r);
        double qj = 1.0;
        for (int j = 0; j < r - k; ++j) {
            term = term * Poly({1.0, -qj * c0});
            qj *= qv;
        }
        A += term;
    }
    return {r, w, q, A * (1.0 / q_factorial(r, q))};
}

/// mu_r = -q^{-beta-r} [r] [r+alpha+beta+1]
inline double eigenvalue_mu(int r, const JacobiWeight& w, QParam q) {
    if (r < 0)
        throw DomainError("degree must be nonnegative");
    return -std::pow(q.value(), -w.beta() - r) * q_number(r, q) * q_number(r + w.alpha() + w.beta() + 1.0, q);
}

/// U f(x) = (-q^{a-b}[b+1] x + [a+1](1 - q^{-b-1} x)) D_q f(x) + (1 - q^{-b-1} x)(x/q) (D_q^2 f)(x/q).
template <RealFunction F>
double u_operator(const F& f, const JacobiWeight& w, QParam q, double x) {
    if (x == 0.0)
        throw DomainError("u_operator is undefined at x = 0");
    const double qv = q.value();
    const double a = w.alpha();
    const double b = w.beta();
    const double y = x / qv;
    const double f_y = static_cast<double>(f(y));
    const double f_x = static_cast<double>(f(x));
    const double f_qx = static_cast<double>(f(qv * x));
    const double d_x = (f_qx - f_x) / ((qv - 1.0) * x);
    const double d_y = (f_x - f_y) / ((qv - 1.0) * y);
    const double d2_y = (d_x - d_y) / ((qv - 1.0) * y);
    const double tail = 1.0 - std::pow(qv, -b - 1.0) * x;
    return (-std::pow(qv, a - b) * q_number(b + 1.0, q) * x + q_number(a + 1.0, q) * tail) * d_x + tail * y * d2_y;
}

/// Exact U on polynomials:
/// U x^r = q^{1-r} [r] ([a+r] x^{r-1} (1-x) - q^{-b-1} [b+1] x^r).
inline Poly u_operator_poly(const Poly& p, const JacobiWeight& w, QParam q) {
    const double qv = q.value();
    const double a = w.alpha();
    const double b = w.beta();
    const double cb = std::pow(qv, -b - 1.0) * q_number(b + 1.0, q);
    std::vector<double> out(p.coeffs().size(), 0.0);
    for (int r = 1; r <= p.degree(); ++r) {
        const double s = p.coeff(r) * std::pow(qv, 1.0 - r) * q_number(r, q);
        const double ar = q_number(a + r, q);
        out[static_cast<std::size_t>(r) - 1] += s * ar;
        out[static_cast<std::size_t>(r)] -= s * (ar + cb);
    }
    return Poly(std::move(out));
}

/// nu_r = <P_r, P_r>^{1/2}
inline double qjacobi_norm(int r, const JacobiWeight& w, QParam q, const TailTolerance& tol = {}) {
    const auto p = qjacobi_series(r, w, q);
    const double v = inner_product(p.poly, p.poly, w, q, tol);
    if (!(v > 0.0))
        throw DomainError("q-Jacobi norm is not positive");
    return std::sqrt(v);
}

/// Normwise relative residual of (D_q P_r)(x/q) = -q^{-b-r}[r+a+b+1] P_{r-1}^{a+1,b+1}(x).
inline double q_derivative_relation_check(int r, const JacobiWeight& w, QParam q) {
    if (r < 1)
        throw DomainError("q_derivative_relation_check needs r >= 1");
    const double qv = q.value();
    const double a = w.alpha();
    const double b = w.beta();
    const Poly lhs = qjacobi_series(r, w, q).poly.q_derivative(q).dilate(1.0 / qv);
    const Poly rhs = qjacobi_series(r - 1, JacobiWeight(a + 1.0, b + 1.0), q).poly *
                     (-std::pow(qv, -b - r) * q_number(r + a + b + 1.0, q));
    return max_coeff_rel_diff(lhs, rhs);
}

/// sigma_r = q^{r(r+a+b+1)}, the limit of lambda_{n,r} as n grows.
inline double spectral_sigma(int r, const JacobiWeight& w, QParam q) {
    return std::pow(q.value(), r * (r + w.alpha() + w.beta() + 1.0));
}

/// lambda_{n,r} - sigma_r without cancellation.
inline double spectral_gap(int n, int r, const JacobiWeight& w, QParam q) {
    if (r > n)
        return -spectral_sigma(r, w, q);
    const double lq = std::log(q.value());
    const double s = w.alpha() + w.beta() + 2.0;
    double l = 0.0;
    for (int i = 0; i < r; ++i)
        l += std::log1p(-std::exp((n - i) * lq)) - std::log1p(-std::exp((n + s + i) * lq));
    return spectral_sigma(r, w, q) * std::expm1(l);
}

struct SpectralExpansion {
    int R;
    JacobiWeight weight;
    QParam q;
    std::vector<QJacobiPoly> polys;
    std::vector<double> coeffs; ///< <f, P_r> / nu_r^2
    std::vector<double> norms;  ///< nu_r

    /// sum_r w_r c_r P_r
    template <class W>
    Poly combine(W&& wr) const {
        Poly s;
        for (int r = 0; r <= R; ++r)
            s += polys[static_cast<std::size_t>(r)].poly * (wr(r) * coeffs[static_cast<std::size_t>(r)]);
        return s;
    }

    Poly partial_sum() const {
        return combine([](int) { return 1.0; });
    }
    Poly operator_image(int n) const {
        return combine([&](int r) { return eigenvalue_lambda(n, r, weight, q); });
    }
    Poly limit() const {
        return combine([&](int r) { return spectral_sigma(r, weight, q); });
    }
    /// M_n f - S_q f, through the eigenvalue gaps.
    Poly distance_to_limit(int n) const {
        return combine([&](int r) { return spectral_gap(n, r, weight, q); });
    }
};

template <RealFunction F>
SpectralExpansion spectral_expand(const F& f, int R, const JacobiWeight& w, QParam q, const TailTolerance& tol = {}) {
    if (R < 0)
        throw DomainError("degree cap must be nonnegative");
    detail::require_regular(w, "spectral_expand");
    SpectralExpansion e{R, w, q, {}, {}, {}};
    for (int r = 0; r <= R; ++r) {
        auto p = qjacobi_series(r, w, q);
        const double nu2 = inner_product(p.poly, p.poly, w, q, tol);
        if (!(nu2 > 0.0))
            throw DomainError("q-Jacobi norm is not positive");
        e.coeffs.push_back(inner_product(f, p.poly, w, q, tol) / nu2);
        e.norms.push_back(std::sqrt(nu2));
        e.polys.push_back(std::move(p));
    }
    return e;
}

/// Truncated S_q f = sum_{r<=R} q^{r(r+a+b+1)} <f, P_r> P_r / nu_r^2.
template <RealFunction F>
Poly spectral_limit(const F& f, int R, const JacobiWeight& w, QParam q, const TailTolerance& tol = {}) {
    return spectral_expand(f, R, w, q, tol).limit();
}

} // namespace qbd

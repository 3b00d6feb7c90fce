#pragma once

// q-calculus primitives: q-numbers, q-factorials and binomials, q-Pochhammer
// symbols, q-Gamma/Beta, Jackson integrals, q-derivatives and the Newton
// expansion of (x - t)^m on the q-shifted powers (x - t)_q^k.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "qbd/error.hpp"

namespace qbd {

/// Deformation parameter q, strictly inside (0, 1).
class QParam {
public:
    explicit QParam(double q) : q_(q) {
        if (!std::isfinite(q) || q <= 0.0 || q >= 1.0)
            throw DomainError("q must lie in the open interval (0,1), got " + std::to_string(q));
    }

    double value() const noexcept { return q_; }
    operator double() const noexcept { return q_; }

    /// q^a
    double pow(double a) const { return std::pow(q_, a); }

    friend bool operator==(const QParam&, const QParam&) = default;

private:
    double q_;
};

/// Truncation rule shared by every infinite q-product and q-series.
struct TailTolerance {
    double eps = 1e-14;
    std::size_t max_terms = 1'000'000;

    TailTolerance() = default;
    TailTolerance(double eps_, std::size_t max_terms_ = 1'000'000) : eps(eps_), max_terms(max_terms_) {
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw DomainError("tail tolerance eps must be positive");
        if (max_terms < 1)
            throw DomainError("tail tolerance max_terms must be at least 1");
    }
};

/// Target functions: pure maps double -> double.
template <class F>
concept RealFunction = std::invocable<const F&, double> &&
                       std::convertible_to<std::invoke_result_t<const F&, double>, double>;

using Function = std::function<double(double)>;

namespace detail {

inline bool is_nonneg_integer(double a) { return a >= 0.0 && a == std::floor(a) && a < 1e9; }

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw DomainError(std::string(what) + " is not finite");
}

} // namespace detail

/// [a]_q = (1 - q^a)/(1 - q).
inline double q_number(double a, QParam q) {
    detail::require_finite(a, "q_number argument");
    if (detail::is_nonneg_integer(a) && a <= 4096.0) {
        // 1 + q + ... + q^{a-1}, Horner form; exact on dyadic q
        double s = 0.0;
        for (int j = 0; j < static_cast<int>(a); ++j)
            s = s * q.value() + 1.0;
        return s;
    }
    return -std::expm1(a * std::log(q.value())) / (1.0 - q.value());
}

/// [n]_q! = [1]_q [2]_q ... [n]_q.
inline double q_factorial(int n, QParam q) {
    if (n < 0)
        throw DomainError("q_factorial of a negative integer");
    double r = 1.0;
    for (int k = 1; k <= n; ++k)
        r *= q_number(k, q);
    return r;
}

/// Gaussian binomial [n over k]_q, zero outside 0 <= k <= n.
inline double q_binomial(int n, int k, QParam q) {
    if (n < 0)
        throw DomainError("q_binomial with negative n");
    if (k < 0 || k > n)
        return 0.0;
    const int m = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= m; ++i)
        r *= q_number(n - m + i, q) / q_number(i, q);
    return r;
}

/// Generalised binomial [a over k]_q = [a][a-1]...[a-k+1] / [k]! for real a.
inline double q_binomial_real(double a, int k, QParam q) {
    if (k < 0)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r *= q_number(a - k + i, q) / q_number(i, q);
    return r;
}

/// q-rising product [a]_q [a+1]_q ... [a+m-1]_q = Γ_q(a+m)/Γ_q(a).
inline double q_rising(double a, int m, QParam q) {
    if (m < 0)
        throw DomainError("q_rising with negative length");
    double r = 1.0;
    for (int i = 0; i < m; ++i)
        r *= q_number(a + i, q);
    return r;
}

/// (1 - x)_q^a = prod_j (1 - q^j x) / prod_j (1 - q^{j+a} x).
///
/// Integer a >= 0 gives the finite product prod_{j<a} (1 - q^j x) without
/// truncation. Otherwise both products stop at the first J with
/// q^J |x| < eps; the ratio is accumulated factor by factor so that long
/// products near q -> 1 do not underflow.
inline double q_pochhammer(double x, double a, QParam q, const TailTolerance& tol = {}) {
    detail::require_finite(x, "q_pochhammer x");
    detail::require_finite(a, "q_pochhammer exponent");
    const double qv = q.value();
    if (detail::is_nonneg_integer(a)) {
        double r = 1.0;
        double qj = 1.0;
        for (long j = 0; j < static_cast<long>(a); ++j) {
            r *= 1.0 - qj * x;
            qj *= qv;
        }
        return r;
    }
    if (x == 0.0)
        return 1.0;
    const double qa = std::pow(qv, a);
    double r = 1.0;
    double qj = 1.0;
    std::size_t j = 0;
    while (qj * std::abs(x) >= tol.eps) {
        if (j >= tol.max_terms)
            throw ConvergenceError("q_pochhammer: product did not settle within max_terms");
        const double num = 1.0 - qj * x;
        const double den = 1.0 - qj * qa * x;
        if (num == 0.0 || den == 0.0)
            throw PoleError("q_pochhammer: zero factor in product");
        r *= num / den;
        qj *= qv;
        ++j;
    }
    return r;
}

/// Γ_q(a + 1) = (1 - q)_q^a / (1 - q)^a, the q-analogue of a!.
/// Equals q_factorial(a) for integer a >= 0.
inline double q_gamma(double a, QParam q, const TailTolerance& tol = {}) {
    if (a <= -1.0 && a == std::floor(a))
        throw DomainError("q_gamma: pole at a + 1 = " + std::to_string(a + 1.0));
    if (detail::is_nonneg_integer(a) && a <= 1024.0)
        return q_factorial(static_cast<int>(a), q);
    const double qv = q.value();
    return q_pochhammer(qv, a, q, tol) / std::pow(1.0 - qv, a);
}

/// log Γ_q(a + 1) for a > -1, where Γ_q(a + 1) > 0.
inline double q_lgamma(double a, QParam q, const TailTolerance& tol = {}) {
    if (!(a > -1.0))
        throw DomainError("q_lgamma requires a > -1");
    const double qv = q.value();
    const double lq = std::log(qv);
    double s = -a * std::log1p(-qv);
    if (detail::is_nonneg_integer(a)) {
        for (long j = 1; j <= static_cast<long>(a); ++j)
            s += std::log1p(-std::exp(j * lq));
        return s;
    }
    double qj = qv;
    const double qa = std::pow(qv, a);
    std::size_t j = 0;
    while (qj >= tol.eps) {
        if (j >= tol.max_terms)
            throw ConvergenceError("q_lgamma: product did not settle within max_terms");
        s += std::log1p(-qj) - std::log1p(-qj * qa);
        qj *= qv;
        ++j;
    }
    return s;
}

/// B_q(u, v) = Γ_q(u) Γ_q(v) / Γ_q(u + v).
inline double q_beta(double u, double v, QParam q, const TailTolerance& tol = {}) {
    if (!(u > 0.0) || !(v > 0.0))
        throw DomainError("q_beta requires positive arguments");
    return std::exp(q_lgamma(u - 1.0, q, tol) + q_lgamma(v - 1.0, q, tol) - q_lgamma(u + v - 1.0, q, tol));
}

/// Jackson integral a(1-q) sum_i q^i f(q^i a).
///
/// Stops at the first i where both the term magnitude and q^i fall below
/// eps; the second clause keeps integrands that blow up near 0 (slower than
/// q^{-i}) from being cut off early.
template <RealFunction F>
double jackson_integral(const F& f, double a, QParam q, const TailTolerance& tol = {}) {
    if (!(a > 0.0) || a > 1.0)
        throw DomainError("jackson_integral upper limit must lie in (0,1]");
    const double qv = q.value();
    const double scale = a * (1.0 - qv);
    double sum = 0.0;
    double qi = 1.0;
    for (std::size_t i = 0;; ++i) {
        if (i >= tol.max_terms)
            throw ConvergenceError("jackson_integral: series did not settle within max_terms");
        const double fv = static_cast<double>(f(qi * a));
        if (!std::isfinite(fv))
            throw DomainError("jackson_integral: integrand not finite at a Jackson node");
        const double term = scale * qi * fv;
        sum += term;
        if (std::abs(term) < tol.eps && qi < tol.eps)
            break;
        qi *= qv;
    }
    return sum;
}

/// D_q f(x) = (f(qx) - f(x)) / ((q - 1) x).
template <RealFunction F>
double q_derivative(const F& f, double x, QParam q) {
    if (x == 0.0)
        throw DomainError("q_derivative is undefined at x = 0");
    const double qv = q.value();
    return (static_cast<double>(f(qv * x)) - static_cast<double>(f(x))) / ((qv - 1.0) * x);
}

/// Coefficients d_{m,k}, k = 1..m, of
///   (x - t)^m = sum_k d_{m,k} (1 - q)^{m-k} x^{m-k} (x - t)_q^k,
/// where (x - t)_q^k = prod_{j<k} (x - q^j t).
struct NewtonExpansion {
    int m = 0;
    std::vector<double> d; ///< d[k] for k = 0..m, d[0] = 0

    double coeff(int k) const { return (k >= 1 && k <= m) ? d[static_cast<std::size_t>(k)] : 0.0; }
};

inline NewtonExpansion newton_expand(int m, QParam q) {
    if (m < 1)
        throw DomainError("newton_expand requires m >= 1");
    const double qv = q.value();
    std::vector<double> d{0.0, 1.0};
    for (int mm = 1; mm < m; ++mm) {
        std::vector<double> next(static_cast<std::size_t>(mm) + 2, 0.0);
        for (int k = 1; k <= mm; ++k)
            next[k] = std::pow(qv, -k) * (qv * d[k - 1] - q_number(k, q) * d[k]);
        next[mm + 1] = std::pow(qv, -mm) * d[mm];
        d = std::move(next);
    }
    return {m, std::move(d)};
}

/// (x - t)_q^k = prod_{j<k} (x - q^j t).
inline double q_shifted_power(double x, double t, int k, QParam q) {
    double r = 1.0;
    double qj = 1.0;
    for (int j = 0; j < k; ++j) {
        r *= x - qj * t;
        qj *= q.value();
    }
    return r;
}

} // namespace qbd

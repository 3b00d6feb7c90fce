#pragma once

// q-Bernstein-Durrmeyer operators with Jacobi weights,
//   M f(x) = sum_k <b_k, f> / <b_k, 1> b_k(x),
// in coefficient form, kernel form and exact polynomial form. The weight
// alpha = beta = -1 gives the endpoint-interpolating variant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qbd/error.hpp"
#include "qbd/poly.hpp"
#include "qbd/qbasis.hpp"
#include "qbd/qcore.hpp"

namespace qbd {

class JacobiWeight {
public:
    JacobiWeight(double alpha, double beta) : alpha_(alpha), beta_(beta) {
        const bool regular = alpha > -1.0 && beta > -1.0 && std::isfinite(alpha) && std::isfinite(beta);
        const bool endpoint = alpha == -1.0 && beta == -1.0;
        if (!regular && !endpoint)
            throw DomainError("Jacobi weight needs alpha, beta > -1 or alpha = beta = -1");
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// alpha = beta = -1
    bool is_endpoint() const noexcept { return alpha_ == -1.0; }
    bool is_regular() const noexcept { return !is_endpoint(); }

    friend bool operator==(const JacobiWeight&, const JacobiWeight&) = default;

private:
    double alpha_;
    double beta_;
};

struct OperatorSpec {
    int n;
    QParam q;
    JacobiWeight weight;
    TailTolerance tol;

    OperatorSpec(int n_, QParam q_, JacobiWeight w_, TailTolerance tol_ = {})
        : n(n_), q(q_), weight(w_), tol(tol_) {
        if (n < 1)
            throw DomainError("operator degree n must be at least 1");
    }
};

namespace detail {

/// Walks the Jackson nodes t_i = q^{i+beta+1} of the bilinear form together
/// with their weights q^{(a+1)(b+1)} (1-q) q^{i(a+1)} (1-q^{i+1})_q^b.
/// For the (-1,-1) weight the walk starts at i = 1 (node q, weight 1).
class NodeWalker {
public:
    NodeWalker(const JacobiWeight& w, QParam q, const TailTolerance& tol) : q_(q.value()) {
        if (w.is_endpoint()) {
            i_ = 1;
            qi_ = q_;
            node_ = q_;
            weight_ = 1.0;
            qa1_ = 1.0;
        } else {
            const double a = w.alpha();
            const double b = w.beta();
            node_ = std::pow(q_, b + 1.0);
            weight_ = std::pow(q_, (a + 1.0) * (b + 1.0)) * (1.0 - q_) * q_pochhammer(q_, b, q, tol);
            qa1_ = std::pow(q_, a + 1.0);
        }
    }

    std::size_t index() const noexcept { return i_; }
    double qi() const noexcept { return qi_; }
    double node() const noexcept { return node_; }
    double weight() const noexcept { return weight_; }

    void advance() {
        const double qi1 = qi_ * q_;
        weight_ *= qa1_ * (1.0 - node_) / (1.0 - qi1);
        node_ *= q_;
        qi_ = qi1;
        ++i_;
    }

private:
    double q_;
    std::size_t i_ = 0;
    double qi_ = 1.0;
    double node_ = 0.0;
    double weight_ = 0.0;
    double qa1_ = 0.0;
};

inline double checked_eval(double v, const char* where) {
    if (!std::isfinite(v))
        throw ConvergenceError(std::string(where) + ": non-finite value at a Jackson node (condition C(alpha) violated?)");
    return v;
}

/// lim_{t->1} h(t) / (1 - t) for h(1) = 0, by Neville extrapolation of
/// h(1 - s) / s to s = 0 on s = 2^{-2}, ..., 2^{-9}. Exact for polynomial h of degree <= 8.
template <class H>
double limit_over_one_minus_t(const H& h) {
    constexpr int m = 8;
    double s[m];
    double v[m];
    for (int j = 0; j < m; ++j) {
        s[j] = std::ldexp(1.0, -(j + 2));
        v[j] = h(1.0 - s[j]) / s[j];
    }
    for (int lvl = 1; lvl < m; ++lvl)
        for (int j = m - 1; j >= lvl; --j)
            v[j] = (s[j - lvl] * v[j] - s[j] * v[j - 1]) / (s[j - lvl] - s[j]);
    return v[m - 1];
}

} // namespace detail

/// <f, g> for the Jacobi weight. For (-1,-1) this is int_0^1 f g / (t(1-t)) d_qt
/// = (1-q) sum_{i>=0} f g (q^i) / (1 - q^i); it needs f g (1) = 0, and the i = 0
/// term is the continuous extension (1-q) lim_{t->1} f g (t) / (1 - t).
template <RealFunction F, RealFunction G>
double inner_product(const F& f, const G& g, const JacobiWeight& w, QParam q, const TailTolerance& tol = {}) {
    auto fg = [&](double t) { return static_cast<double>(f(t)) * static_cast<double>(g(t)); };
    double sum = 0.0;
    if (w.is_endpoint()) {
        if (fg(1.0) != 0.0)
            throw DomainError("inner product for (-1,-1) needs f(1) g(1) = 0");
        sum = (1.0 - q.value()) * detail::limit_over_one_minus_t(fg);
    }
    for (detail::NodeWalker it(w, q, tol);; it.advance()) {
        if (it.index() >= tol.max_terms)
            throw ConvergenceError("inner_product: series did not settle within max_terms");
        const double term = it.weight() * detail::checked_eval(fg(it.node()), "inner_product");
        sum += term;
        if ((std::abs(term) < tol.eps && it.qi() < tol.eps) || it.weight() == 0.0)
            break;
    }
    return sum;
}

/// sum_k c_k b_{n,k}(x)
struct BernsteinSum {
    BasisSpec basis;
    std::vector<double> coeffs;

    double operator()(double x) const {
        const auto b = bernstein_all(basis, x);
        double s = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k)
            s += coeffs[k] * b[k];
        return s;
    }
};

namespace detail {

/// Image of a polynomial of any degree under the (n, alpha, beta) operator, with
/// the argument shift q^{beta+1} applied (shift = true) or omitted.
///
/// Monomial means are E_k[t^m] = s^m prod_{i=1}^m [k+alpha+i] / [n+alpha+beta+1+i].
/// Since [k+alpha+i] = [alpha+i] + q^{alpha+i} [k], the coefficient is a polynomial
/// C([k]); written in Newton form on the nodes [0], [1], ... its image follows from
/// sum_k b_k(x) prod_{l<j} ([k] - [l]) = q^{j(j-1)/2} [n][n-1]...[n-j+1] x^j.
inline Poly operator_image(const Poly& p, int n, double alpha, double beta, QParam q, bool shift) {
    using real = long double;
    if (p.is_zero())
        return {};
    const real qv = q.value();
    const real lq = std::log(qv);
    auto qn = [&](real a) { return -std::expm1(a * lq) / (1.0L - qv); };
    const real s = shift ? std::pow(qv, static_cast<real>(beta) + 1.0L) : 1.0L;
    const int d = p.degree();

    // C(y) in monomial coefficients
    std::vector<real> c(static_cast<std::size_t>(d) + 1, 0.0L);
    std::vector<real> run{1.0L};
    real sm = 1.0L;
    for (int m = 0; m <= d; ++m) {
        if (m > 0) {
            const real den = qn(n + alpha + beta + 1.0L + m);
            const real lo = qn(alpha + m) / den;
            const real hi = std::pow(qv, static_cast<real>(alpha) + m) / den;
            std::vector<real> next(run.size() + 1, 0.0L);
            for (std::size_t i = 0; i < run.size(); ++i) {
                next[i] += run[i] * lo;
                next[i + 1] += run[i] * hi;
            }
            run = std::move(next);
            sm *= s;
        }
        for (std::size_t i = 0; i < run.size(); ++i)
            c[i] += run[i] * p.coeff(m) * sm;
    }

    // Newton coefficients by repeated synthetic division at y_l = [l]
    std::vector<real> e;
    for (int l = 0; !c.empty(); ++l) {
        const real y = qn(l);
        std::vector<real> quot(c.size() - 1);
        real acc = 0.0L;
        for (std::size_t i = c.size(); i-- > 0;) {
            acc = acc * y + c[i];
            if (i > 0)
                quot[i - 1] = acc;
        }
        e.push_back(acc);
        c = std::move(quot);
    }

    std::vector<double> out(e.size(), 0.0);
    real fall = 1.0L;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const real jj = static_cast<real>(j);
        if (j > 0)
            fall *= qn(n - jj + 1.0L);
        out[j] = static_cast<double>(e[j] * std::pow(qv, jj * (jj - 1.0L) / 2.0L) * fall);
    }
    return Poly(std::move(out));
}

} // namespace detail

class DurrmeyerOperator {
public:
    explicit DurrmeyerOperator(OperatorSpec spec) : spec_(std::move(spec)), basis_(spec_.n, spec_.q) {}

    const OperatorSpec& spec() const noexcept { return spec_; }
    const BasisSpec& basis() const noexcept { return basis_; }
    int n() const noexcept { return spec_.n; }
    QParam q() const noexcept { return spec_.q; }
    const JacobiWeight& weight() const noexcept { return spec_.weight; }

    /// f_k = <b_k, f> / <b_k, 1>, numerator and denominator summed in one loop.
    template <RealFunction F>
    std::vector<double> coefficients(const F& f) const {
        const int n = spec_.n;
        const auto& tol = spec_.tol;
        const bool endpoint = spec_.weight.is_endpoint();
        const int k_lo = endpoint ? 1 : 0;
        const int k_hi = endpoint ? n - 1 : n;

        double f0 = 0.0;
        double f1 = 0.0;
        if (endpoint) {
            f0 = endpoint_value(f, 0.0);
            f1 = endpoint_value(f, 1.0);
        }
        std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<double> den(static_cast<std::size_t>(n) + 1, 0.0);
        if (endpoint && k_lo <= k_hi) {
            // node t = 1: b_k(t) / (1 - t) extends continuously for k < n
            const double qv = spec_.q.value();
            for (int k = k_lo; k <= k_hi; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const double wb = (1.0 - qv) * q_binomial(n, k, spec_.q) * q_pochhammer(qv, n - k - 1, spec_.q);
                num[kk] += wb * f1;
                den[kk] += wb;
            }
        }
        if (k_lo <= k_hi) {
            for (detail::NodeWalker it(spec_.weight, spec_.q, tol);; it.advance()) {
                if (it.index() >= tol.max_terms)
                    throw ConvergenceError("coefficients: series did not settle within max_terms");
                const double t = it.node();
                const double w = it.weight();
                if (w == 0.0)
                    break;
                const double fv = detail::checked_eval(static_cast<double>(f(t)), "coefficients");
                const auto b = bernstein_all(basis_, t);
                bool small = it.qi() < tol.eps;
                for (int k = k_lo; k <= k_hi; ++k) {
                    const auto kk = static_cast<std::size_t>(k);
                    const double wb = w * b[kk];
                    num[kk] += wb * fv;
                    den[kk] += wb;
                    if (small && wb * (1.0 + std::abs(fv)) > tol.eps * den[kk])
                        small = false;
                }
                if (small)
                    break;
            }
        }

        std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
        for (int k = k_lo; k <= k_hi; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            c[kk] = num[kk] / den[kk];
        }
        if (endpoint) {
            c.front() = f0;
            c.back() = f1;
        }
        return c;
    }

    template <RealFunction F>
    BernsteinSum image(const F& f) const {
        return {basis_, coefficients(f)};
    }

    template <RealFunction F>
    double eval(const F& f, double x) const {
        check_x(x);
        return image(f)(x);
    }

    /// Exact image of a polynomial of degree <= n.
    Poly apply_to_poly(const Poly& p) const {
        if (p.degree() > spec_.n)
            throw DomainError("apply_to_poly: degree exceeds n");
        return detail::operator_image(p, spec_.n, spec_.weight.alpha(), spec_.weight.beta(), spec_.q, true);
    }

    /// T_{n,m}(x) = sum_k b_k(x) int t^{k+a} (1-qt)_q^{n-k+b} (x-t)^m d_qt / int t^{k+a} (1-qt)_q^{n-k+b} d_qt,
    /// evaluated through the Newton expansion of (x-t)^m.
    double moment_T(int m, double x) const {
        if (m < 0)
            throw DomainError("moment order must be nonnegative");
        check_x(x);
        if (m == 0)
            return 1.0;
        const double qv = spec_.q.value();
        const auto ne = newton_expand(m, spec_.q);
        double sum = 0.0;
        for (int k = 1; k <= m; ++k) {
            // (x - t)_q^k as a polynomial in t
            Poly shifted = Poly::constant(1.0);
            double qj = 1.0;
            for (int j = 0; j < k; ++j) {
                shifted = shifted * Poly({x, -qj});
                qj *= qv;
            }
            const Poly img = detail::operator_image(shifted, spec_.n, spec_.weight.alpha(), spec_.weight.beta(),
                                                    spec_.q, false);
            sum += ne.coeff(k) * std::pow(1.0 - qv, m - k) * std::pow(x, m - k) * img(x);
        }
        return sum;
    }

    /// M[(x - .)^m](x), the moments of the operator itself.
    double central_moment(int m, double x) const {
        if (m < 0)
            throw DomainError("moment order must be nonnegative");
        check_x(x);
        Poly p = Poly::constant(1.0);
        for (int i = 0; i < m; ++i)
            p = p * Poly({x, -1.0});
        return detail::operator_image(p, spec_.n, spec_.weight.alpha(), spec_.weight.beta(), spec_.q, true)(x);
    }

private:
    template <RealFunction F>
    static double endpoint_value(const F& f, double x) {
        const double v = static_cast<double>(f(x));
        if (!std::isfinite(v))
            throw DomainError("(-1,-1) weight needs f evaluable at " + std::to_string(x));
        return v;
    }

    static void check_x(double x) {
        if (!(x >= 0.0 && x <= 1.0))
            throw DomainError("x must lie in [0,1]");
    }

    OperatorSpec spec_;
    BasisSpec basis_;
};

/// Kernel representation M f(x) = sum_j Phi_j(x) f(q^{j+beta+1}) with
///   Phi_j(x) = u_j sum_k v_k b_k(q^{j+beta+1}) b_k(x),
///   u_j = (1-q) q^{j(alpha+1)} (1-q^{j+1})_q^beta,
///   1/v_k = q^{k(beta+1)} [n over k] B_q(k+alpha+1, n-k+beta+1).
/// For (-1,-1) only interior k enter; the endpoint terms f(0) b_0 + f(1) b_n are added
/// in kernel_eval.
class KernelForm {
public:
    explicit KernelForm(OperatorSpec spec) : spec_(std::move(spec)), basis_(spec_.n, spec_.q) {
        const int n = spec_.n;
        const double a = spec_.weight.alpha();
        const double b = spec_.weight.beta();
        const double qv = spec_.q.value();
        v_.assign(static_cast<std::size_t>(n) + 1, 0.0);
        for (int k = k_lo(); k <= k_hi(); ++k)
            v_[static_cast<std::size_t>(k)] =
                1.0 / (std::pow(qv, k * (b + 1.0)) * q_binomial(n, k, spec_.q) *
                       q_beta(k + a + 1.0, n - k + b + 1.0, spec_.q, spec_.tol));
        for (std::size_t j = 0;; ++j) {
            if (j >= spec_.tol.max_terms)
                throw ConvergenceError("kernel table did not settle within max_terms");
            rows_.push_back(compute_row(j));
            const double top = *std::max_element(rows_.back().begin(), rows_.back().end());
            if (std::pow(qv, static_cast<double>(j)) < spec_.tol.eps && top < spec_.tol.eps)
                break;
        }
    }

    const OperatorSpec& spec() const noexcept { return spec_; }
    std::size_t table_size() const noexcept { return rows_.size(); }

    /// Jackson node q^{j+beta+1} carrying Phi_j.
    double node(std::size_t j) const {
        return std::pow(spec_.q.value(), static_cast<double>(j) + spec_.weight.beta() + 1.0);
    }

    /// u_j v_k b_k(q^{j+beta+1}), k = 0..n.
    std::vector<double> row(std::size_t j) const { return j < rows_.size() ? rows_[j] : compute_row(j); }

    double phi(std::size_t j, double x) const {
        const auto r = row(j);
        const auto bx = bernstein_all(basis_, x);
        double s = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k)
            s += r[k] * bx[k];
        return s;
    }

    template <RealFunction F>
    double eval(const F& f, double x) const {
        if (!(x >= 0.0 && x <= 1.0))
            throw DomainError("x must lie in [0,1]");
        const auto bx = bernstein_all(basis_, x);
        const double qv = spec_.q.value();
        double sum = 0.0;
        for (std::size_t j = 0;; ++j) {
            if (j >= spec_.tol.max_terms)
                throw ConvergenceError("kernel_eval: series did not settle within max_terms");
            const auto r = row(j);
            const double fv = detail::checked_eval(static_cast<double>(f(node(j))), "kernel_eval");
            double phi = 0.0;
            for (std::size_t k = 0; k < r.size(); ++k)
                phi += r[k] * bx[k];
            sum += phi * fv;
            const double top = *std::max_element(r.begin(), r.end());
            if (j + 1 >= rows_.size() && std::pow(qv, static_cast<double>(j)) < spec_.tol.eps &&
                top * (1.0 + std::abs(fv)) < spec_.tol.eps)
                break;
            if (top == 0.0 && j + 1 >= rows_.size())
                break;
        }
        if (spec_.weight.is_endpoint()) {
            const double f0 = static_cast<double>(f(0.0));
            const double f1 = static_cast<double>(f(1.0));
            if (!std::isfinite(f0) || !std::isfinite(f1))
                throw DomainError("(-1,-1) weight needs f evaluable at 0 and 1");
            sum += f0 * bx.front() + f1 * bx.back();
        }
        return sum;
    }

private:
    int k_lo() const { return spec_.weight.is_endpoint() ? 1 : 0; }
    int k_hi() const { return spec_.weight.is_endpoint() ? spec_.n - 1 : spec_.n; }

    std::vector<double> compute_row(std::size_t j) const {
        const int n = spec_.n;
        const double a = spec_.weight.alpha();
        const double b = spec_.weight.beta();
        const double qv = spec_.q.value();
        const double jd = static_cast<double>(j);
        std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
        if (k_lo() > k_hi())
            return r;
        if (spec_.weight.is_endpoint() && j == 0) {
            // node 1: u_0 is infinite and b_k(1) = 0, use the product limit
            // (1-q) (1-q)_q^{n-k-1} / B_q(k, n-k)
            for (int k = k_lo(); k <= k_hi(); ++k)
                r[static_cast<std::size_t>(k)] = (1.0 - qv) * q_pochhammer(qv, n - k - 1, spec_.q) /
                                                  q_beta(k, n - k, spec_.q, spec_.tol);
            return r;
        }
        const double u = (1.0 - qv) * std::pow(qv, jd * (a + 1.0)) *
                         q_pochhammer(std::pow(qv, jd + 1.0), b, spec_.q, spec_.tol);
        const auto bs = bernstein_all(basis_, node(j));
        for (int k = k_lo(); k <= k_hi(); ++k) {
            const auto kk = static_cast<std::size_t>(k);
            r[kk] = u * v_[kk] * bs[kk];
        }
        return r;
    }

    OperatorSpec spec_;
    BasisSpec basis_;
    std::vector<double> v_;
    std::vector<std::vector<double>> rows_;
};

/// lambda_{n,r} = q^{r(r+a+b+1)} prod_{i<r} [n-i] / [n+a+b+2+i], zero for r > n.
inline double eigenvalue_lambda(int n, int r, const JacobiWeight& w, QParam q) {
    if (n < 1 || r < 0)
        throw DomainError("eigenvalue_lambda needs n >= 1 and r >= 0");
    if (r > n)
        return 0.0;
    const double s = w.alpha() + w.beta();
    double lam = std::pow(q.value(), r * (r + s + 1.0));
    for (int i = 0; i < r; ++i)
        lam *= q_number(n - i, q) / q_number(n + s + 2.0 + i, q);
    return lam;
}

/// D_q (M f)(x) computed as [n]/[n+a+b+2] q^{a+b+2} M_{n-1}^{a+1,b+1}(g)(qx),
/// g(t) = (D_q f)(t/q).
template <RealFunction F>
double q_derivative_of_image(const F& f, const OperatorSpec& spec, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("x must lie in [0,1]");
    const QParam q = spec.q;
    const double qv = q.value();
    const double a = spec.weight.alpha();
    const double b = spec.weight.beta();
    const JacobiWeight shifted(a + 1.0, b + 1.0);
    auto g = [&f, qv](double t) {
        const double s = t / qv;
        return (static_cast<double>(f(t)) - static_cast<double>(f(s))) / ((qv - 1.0) * s);
    };
    const double factor = q_number(spec.n, q) / q_number(spec.n + a + b + 2.0, q) * std::pow(qv, a + b + 2.0);
    if (spec.n == 1) {
        auto one = [](double) { return 1.0; };
        return factor * inner_product(one, g, shifted, q, spec.tol) / inner_product(one, one, shifted, q, spec.tol);
    }
    const DurrmeyerOperator lower(OperatorSpec(spec.n - 1, q, shifted, spec.tol));
    return factor * lower.eval(g, qv * x);
}

// Free-function entry points.

template <RealFunction F>
double durrmeyer_coeff(const F& f, const OperatorSpec& spec, int k) {
    if (k < 0 || k > spec.n)
        throw DomainError("coefficient index out of range");
    return DurrmeyerOperator(spec).coefficients(f)[static_cast<std::size_t>(k)];
}

template <RealFunction F>
double eval_operator(const F& f, const OperatorSpec& spec, double x) {
    return DurrmeyerOperator(spec).eval(f, x);
}

inline double kernel_phi(const OperatorSpec& spec, std::size_t j, double x) { return KernelForm(spec).phi(j, x); }

template <RealFunction F>
double kernel_eval(const F& f, const OperatorSpec& spec, double x) {
    return KernelForm(spec).eval(f, x);
}

inline Poly apply_to_poly(const Poly& p, const OperatorSpec& spec) { return DurrmeyerOperator(spec).apply_to_poly(p); }

inline double moment_T(const OperatorSpec& spec, int m, double x) { return DurrmeyerOperator(spec).moment_T(m, x); }

} // namespace qbd

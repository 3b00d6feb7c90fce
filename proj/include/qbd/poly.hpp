#pragma once

// Dense real polynomials in the monomial basis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "qbd/qcore.hpp"

namespace qbd {

class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<double> c) : c_(c) { normalize(); }
    explicit Poly(std::vector<double> c) : c_(std::move(c)) { normalize(); }

    static Poly constant(double v) { return Poly({v}); }
    static Poly monomial(int p, double coeff = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
        c.back() = coeff;
        return Poly(std::move(c));
    }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<double>& coeffs() const noexcept { return c_; }
    double coeff(int p) const { return (p >= 0 && p <= degree()) ? c_[static_cast<std::size_t>(p)] : 0.0; }

    /// Compensated Horner: as accurate as Horner in twice the working precision.
    double operator()(double x) const {
        double s = 0.0;
        double err = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            const double p = s * x;
            const double pe = std::fma(s, x, -p);
            const double t = p + *it;
            const double z = t - p;
            const double se = (p - (t - z)) + (*it - z);
            err = err * x + (pe + se);
            s = t;
        }
        return s + err;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), 0.0);
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        normalize();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += o * -1.0; }
    Poly& operator*=(double s) {
        for (double& v : c_)
            v *= s;
        normalize();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, double s) { return a *= s; }
    friend Poly operator*(double s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly&, const Poly&) = default;

    /// p(s x)
    Poly dilate(double s) const {
        std::vector<double> c = c_;
        double sp = 1.0;
        for (double& v : c) {
            v *= sp;
            sp *= s;
        }
        return Poly(std::move(c));
    }

    /// Exact D_q via D_q x^p = [p]_q x^{p-1}.
    Poly q_derivative(QParam q) const {
        if (c_.size() <= 1)
            return {};
        std::vector<double> c(c_.size() - 1);
        for (std::size_t p = 1; p < c_.size(); ++p)
            c[p - 1] = q_number(static_cast<double>(p), q) * c_[p];
        return Poly(std::move(c));
    }

    /// Classical derivative.
    Poly derivative() const {
        if (c_.size() <= 1)
            return {};
        std::vector<double> c(c_.size() - 1);
        for (std::size_t p = 1; p < c_.size(); ++p)
            c[p - 1] = static_cast<double>(p) * c_[p];
        return Poly(std::move(c));
    }

    /// Largest |coefficient|, 0 for the zero polynomial.
    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_)
            m = std::max(m, std::abs(v));
        return m;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0.0)
            c_.pop_back();
    }

    std::vector<double> c_;
};

/// max_p |a_p - b_p|
inline double max_coeff_diff(const Poly& a, const Poly& b) {
    const int d = std::max(a.degree(), b.degree());
    double m = 0.0;
    for (int p = 0; p <= d; ++p)
        m = std::max(m, std::abs(a.coeff(p) - b.coeff(p)));
    return m;
}

/// max_p |a_p - b_p| / max_p |b_p|
inline double max_coeff_rel_diff(const Poly& a, const Poly& b) {
    const double scale = b.max_abs_coeff();
    const double d = max_coeff_diff(a, b);
    return scale > 0.0 ? d / scale : d;
}

} // namespace qbd

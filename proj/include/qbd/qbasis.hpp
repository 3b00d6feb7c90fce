#pragma once

// q-Bernstein basis b_{n,k}(x) = [n over k]_q x^k (1 - x)_q^{n-k}, collocation
// matrices and sampled total-positivity checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qbd/error.hpp"
#include "qbd/qcore.hpp"

namespace qbd {

struct BasisSpec {
    int n;
    QParam q;

    BasisSpec(int n_, QParam q_) : n(n_), q(q_) {
        if (n < 0)
            throw DomainError("basis degree must be nonnegative");
    }
};

/// Strictly increasing nodes in [0,1].
class SortedNodes {
public:
    explicit SortedNodes(std::vector<double> nodes) : nodes_(std::move(nodes)) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double x = nodes_[i];
            if (!(x >= 0.0 && x <= 1.0))
                throw DomainError("node outside [0,1]");
            if (i > 0 && !(nodes_[i - 1] < x))
                throw DomainError("nodes must be strictly increasing");
        }
    }

    const std::vector<double>& values() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }

private:
    std::vector<double> nodes_;
};

inline double bernstein_basis(const BasisSpec& spec, int k, double x) {
    if (k < 0 || k > spec.n)
        throw DomainError("basis index out of range");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("basis argument outside [0,1]");
    return q_binomial(spec.n, k, spec.q) * std::pow(x, k) * q_pochhammer(x, spec.n - k, spec.q);
}

/// All n+1 basis values at x in O(n).
inline std::vector<double> bernstein_all(const BasisSpec& spec, double x) {
    const int n = spec.n;
    const double q = spec.q.value();
    const auto N = static_cast<std::size_t>(n) + 1;

    // tail[m] = (1 - x)_q^m
    std::vector<double> tail(N);
    tail[0] = 1.0;
    double qj = 1.0;
    for (std::size_t m = 1; m < N; ++m) {
        tail[m] = tail[m - 1] * (1.0 - qj * x);
        qj *= q;
    }

    // binomials are mirrored so that both ends are exactly 1
    std::vector<double> binom(N, 1.0);
    for (int k = 1; 2 * k <= n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        binom[kk] = binom[kk - 1] * q_number(n - k + 1, spec.q) / q_number(k, spec.q);
        binom[N - 1 - kk] = binom[kk];
    }

    std::vector<double> b(N);
    double xk = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
        b[k] = binom[k] * xk * tail[N - 1 - k];
        xk *= x;
    }
    return b;
}

/// Entry (i, j) = funcs[j](nodes[i]).
inline Eigen::MatrixXd collocation_matrix(const std::vector<Function>& funcs, const SortedNodes& nodes) {
    if (funcs.empty())
        throw DomainError("collocation_matrix needs at least one function");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(funcs.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < funcs.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = funcs[j](nodes[i]);
    return m;
}

struct MinorCheck {
    bool ok = true;
    std::vector<int> rows; ///< violating minor, empty when ok
    std::vector<int> cols;
    double det = 0.0;
    double min_det = 0.0; ///< smallest determinant seen
    std::size_t checked = 0;
};

namespace detail {

inline bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<std::size_t>(i)] < n - k + i) {
            ++c[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<int> first_combination(int k) {
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        c[static_cast<std::size_t>(i)] = i;
    return c;
}

} // namespace detail

/// Checks every square minor of order <= max_order against -tol_det.
inline MinorCheck all_minors_nonneg(const Eigen::MatrixXd& m, int max_order, double tol_det = 1e-10) {
    if (max_order < 1)
        throw DomainError("max_order must be at least 1");
    if (max_order > 4)
        throw CapabilityError("minor enumeration is limited to order 4");
    const int nr = static_cast<int>(m.rows());
    const int nc = static_cast<int>(m.cols());
    MinorCheck res;
    bool first = true;
    for (int r = 1; r <= std::min({max_order, nr, nc}); ++r) {
        auto rows = detail::first_combination(r);
        do {
            auto cols = detail::first_combination(r);
            do {
                Eigen::MatrixXd sub(r, r);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j)
                        sub(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
                const double d = sub.determinant();
                ++res.checked;
                if (first || d < res.min_det) {
                    res.min_det = d;
                    first = false;
                }
                if (d < -tol_det && res.ok) {
                    res.ok = false;
                    res.rows = rows;
                    res.cols = cols;
                    res.det = d;
                }
            } while (detail::next_combination(cols, nc));
        } while (detail::next_combination(rows, nr));
    }
    return res;
}

/// Strict sign alternations after deleting exact zeros.
inline int sign_changes(const std::vector<double>& values) {
    int count = 0;
    int last = 0;
    for (double v : values) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++count;
        last = s;
    }
    return count;
}

} // namespace qbd

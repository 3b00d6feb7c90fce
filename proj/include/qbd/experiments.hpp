#pragma once

// Experiment harness: named test functions, q_n sequences, convergence,
// Voronovskaya, derivative, shape and alpha -> -1 sweeps, and CSV/JSON tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qbd/durrmeyer.hpp"
#include "qbd/error.hpp"
#include "qbd/poly.hpp"
#include "qbd/qbasis.hpp"
#include "qbd/qcore.hpp"
#include "qbd/qjacobi.hpp"

namespace qbd {

// ---------------------------------------------------------------------------
// Function catalog

struct CatalogFunction {
    std::string id;
    Function f;
    Function df;
    Function d2f;
    bool endpoints = true;           ///< evaluable at 0 and 1
    std::optional<Poly> poly;        ///< exact form when polynomial
};

/// const, affine (2x-1), square, cube, absdev (|x-1/2|), sin6, powneg:p (x^{-p}).
inline CatalogFunction catalog_function(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string id = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto zero = [](double) { return 0.0; };
    if (id == "const")
        return {"const", [](double) { return 1.0; }, zero, zero, true, Poly({1.0})};
    if (id == "affine")
        return {"affine", [](double x) { return 2.0 * x - 1.0; }, [](double) { return 2.0; }, zero, true, Poly({-1.0, 2.0})};
    if (id == "square")
        return {"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }, [](double) { return 2.0; },
                true, Poly({0.0, 0.0, 1.0})};
    if (id == "cube")
        return {"cube", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
                [](double x) { return 6.0 * x; }, true, Poly({0.0, 0.0, 0.0, 1.0})};
    if (id == "absdev")
        return {"absdev", [](double x) { return std::abs(x - 0.5); },
                [](double x) { return x > 0.5 ? 1.0 : (x < 0.5 ? -1.0 : 0.0); }, zero, true, std::nullopt};
    if (id == "sin6")
        return {"sin6", [](double x) { return std::sin(6.0 * x); }, [](double x) { return 6.0 * std::cos(6.0 * x); },
                [](double x) { return -36.0 * std::sin(6.0 * x); }, true, std::nullopt};
    if (id == "powneg") {
        double p = 0.25;
        if (!arg.empty()) {
            try {
                p = std::stod(arg);
            } catch (const std::exception&) {
                throw ConfigError("powneg exponent is not a number: " + arg);
            }
        }
        if (!(p > 0.0) || !std::isfinite(p))
            throw ConfigError("powneg exponent must be positive");
        return {"powneg:" + arg, [p](double x) { return std::pow(x, -p); },
                [p](double x) { return -p * std::pow(x, -p - 1.0); },
                [p](double x) { return p * (p + 1.0) * std::pow(x, -p - 2.0); }, false, std::nullopt};
    }
    throw ConfigError("unknown function id: " + spec);
}

// ---------------------------------------------------------------------------
// q_n sequences

class QnSequence {
public:
    enum class Kind { one_minus_c_over_n, one_minus_n_pow_gamma, one_minus_inv_nlogn, constant_q };

    QnSequence(Kind kind, double param) : kind_(kind), param_(param) {
        if (!std::isfinite(param))
            throw ConfigError("sequence parameter must be finite");
        if ((kind == Kind::one_minus_c_over_n || kind == Kind::one_minus_n_pow_gamma) && !(param > 0.0))
            throw ConfigError("sequence parameter must be positive");
        if (kind == Kind::constant_q)
            check_range(param);
    }

    /// cn:c, pow:gamma, nlogn, const:q
    static QnSequence parse(const std::string& s) {
        const auto colon = s.find(':');
        const std::string kind = s.substr(0, colon);
        double v = 0.0;
        if (colon != std::string::npos) {
            try {
                std::size_t used = 0;
                v = std::stod(s.substr(colon + 1), &used);
                if (used != s.size() - colon - 1)
                    throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError("bad sequence parameter in '" + s + "'");
            }
        }
        if (kind == "cn" && colon != std::string::npos)
            return {Kind::one_minus_c_over_n, v};
        if (kind == "pow" && colon != std::string::npos)
            return {Kind::one_minus_n_pow_gamma, v};
        if (kind == "nlogn" && colon == std::string::npos)
            return {Kind::one_minus_inv_nlogn, 0.0};
        if (kind == "const" && colon != std::string::npos)
            return {Kind::constant_q, v};
        throw ConfigError("unknown q_n sequence '" + s + "' (expected cn:c, pow:g, nlogn or const:q)");
    }

    Kind kind() const noexcept { return kind_; }
    double param() const noexcept { return param_; }

    std::string str() const {
        char buf[64];
        switch (kind_) {
        case Kind::one_minus_c_over_n: std::snprintf(buf, sizeof buf, "cn:%.17g", param_); break;
        case Kind::one_minus_n_pow_gamma: std::snprintf(buf, sizeof buf, "pow:%.17g", param_); break;
        case Kind::one_minus_inv_nlogn: std::snprintf(buf, sizeof buf, "nlogn"); break;
        case Kind::constant_q: std::snprintf(buf, sizeof buf, "const:%.17g", param_); break;
        }
        return buf;
    }

    double value(int n) const {
        if (n < 2 && kind_ != Kind::constant_q)
            throw ConfigError("q_n sequences are defined for n >= 2");
        double q = 0.0;
        const double nd = n;
        switch (kind_) {
        case Kind::one_minus_c_over_n: q = 1.0 - param_ / nd; break;
        case Kind::one_minus_n_pow_gamma: q = 1.0 - std::pow(nd, -param_); break;
        case Kind::one_minus_inv_nlogn: q = 1.0 - 1.0 / (nd * std::log(nd)); break;
        case Kind::constant_q: q = param_; break;
        }
        check_range(q);
        return q;
    }

    /// Property S (1 - q_n < c/n eventually), decided from the sequence family.
    bool property_s() const {
        switch (kind_) {
        case Kind::one_minus_c_over_n: return true;
        case Kind::one_minus_n_pow_gamma: return param_ >= 1.0;
        case Kind::one_minus_inv_nlogn: return true;
        case Kind::constant_q: return false;
        }
        return false;
    }

private:
    static void check_range(double q) {
        if (!(q > 0.01 && q < 0.999999))
            throw ConfigError("q_n value outside (0.01, 0.999999)");
    }

    Kind kind_;
    double param_;
};

/// Sampled property flags over n = 10^2 .. 10^4: S from n(1 - q_n) staying within 2x of
/// its first value, P1 from [n]_{q_n}/n and P2 from q_n^n not dropping below half of theirs.
struct PropertyFlags {
    bool s = false;
    bool p1 = false;
    bool p2 = false;
    double c1 = 0.0; ///< min [n]_{q_n}/n over the samples
    double c2 = 0.0; ///< min q_n^n over the samples
};

inline PropertyFlags sampled_property_flags(const QnSequence& seq) {
    const int samples[] = {100, 215, 464, 1000, 2154};
    double s0 = 0.0, smax = 0.0, p10 = 0.0, p1min = 0.0, p20 = 0.0, p2min = 0.0;
    bool first = true;
    for (int n : samples) {
        const double q = seq.value(n);
        const double s = n * (1.0 - q);
        const double p1 = q_number(n, QParam(q)) / n;
        const double p2 = std::pow(q, n);
        if (first) {
            s0 = smax = s;
            p10 = p1min = p1;
            p20 = p2min = p2;
            first = false;
        }
        smax = std::max(smax, s);
        p1min = std::min(p1min, p1);
        p2min = std::min(p2min, p2);
    }
    return {smax <= 2.0 * s0, p1min >= 0.5 * p10, p2min >= 0.5 * p20, p1min, p2min};
}

inline double qn_value(const QnSequence& seq, int n) { return seq.value(n); }

// ---------------------------------------------------------------------------
// Grids and modulus

/// size points on [0,1], or the interior points 1/size, ..., (size-1)/size.
inline std::vector<double> make_grid(int size, bool interior) {
    if (size < 2)
        throw ConfigError("grid needs at least 2 points");
    std::vector<double> g;
    if (interior) {
        for (int i = 1; i < size; ++i)
            g.push_back(static_cast<double>(i) / size);
    } else {
        for (int i = 0; i < size; ++i)
            g.push_back(static_cast<double>(i) / (size - 1));
    }
    return g;
}

/// max |f(u) - f(v)| over grid pairs with |u - v| <= delta; a lower bound for omega(f, delta).
template <RealFunction F>
double empirical_modulus(const F& f, double delta, int grid_size, bool interior = false) {
    if (!(delta > 0.0))
        throw DomainError("modulus step must be positive");
    const auto g = make_grid(grid_size, interior);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        v[i] = static_cast<double>(f(g[i]));
    const double h = g[1] - g[0];
    const auto steps = static_cast<std::size_t>(std::floor(delta / h + 1e-9));
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size() && j - i <= steps; ++j)
            m = std::max(m, std::abs(v[i] - v[j]));
    return m;
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config; ///< ordered key/value pairs
    std::vector<std::string> headers;
    std::vector<std::vector<Cell>> rows;

    std::string config_string() const {
        std::string s;
        for (const auto& [k, v] : config) {
            if (!s.empty())
                s += ' ';
            s += k + '=' + v;
        }
        return s;
    }

    void add(std::vector<Cell> row) {
        if (row.size() != headers.size())
            throw Error("row width does not match headers");
        rows.push_back(std::move(row));
    }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + format_double(v[i]);
    return s;
}

inline std::string format_list(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

enum class Format { csv, json };

inline void write_csv(const Table& t, std::ostream& os) {
    os << "# qbd " << t.subcommand << ' ' << t.config_string() << '\n';
    for (std::size_t i = 0; i < t.headers.size(); ++i)
        os << (i ? "," : "") << t.headers[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>)
                        os << format_double(v);
                    else
                        os << v;
                },
                row[i]);
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    cfg["subcommand"] = t.subcommand;
    for (const auto& [k, v] : t.config)
        cfg[k] = v;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](const auto& v) { r[t.headers[i]] = v; }, row[i]);
        rows.push_back(std::move(r));
    }
    nlohmann::ordered_json j;
    j["config"] = std::move(cfg);
    j["rows"] = std::move(rows);
    return j;
}

inline void write_json(const Table& t, std::ostream& os) { os << to_json(t).dump(2) << '\n'; }

/// Writes to path, or to stdout when path is empty or "-".
inline void emit(const Table& t, Format format, const std::string& path, std::ostream& out = std::cout) {
    auto write = [&](std::ostream& os) {
        if (format == Format::csv)
            write_csv(t, os);
        else
            write_json(t, os);
    };
    if (path.empty() || path == "-") {
        write(out);
        out.flush();
        if (!out)
            throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open output file " + path);
    write(f);
    f.close();
    if (!f)
        throw IoError("failed writing output file " + path);
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
    JacobiWeight weight{0.0, 0.0};
    std::string fn = "square";
    std::vector<int> ns{4, 8, 16, 32};
    std::vector<double> xs{0.5};
    int grid = 101;
    QnSequence sequence{QnSequence::Kind::one_minus_c_over_n, 1.0};
    TailTolerance tol{};

    void validate() const {
        if (ns.empty())
            throw ConfigError("n list is empty");
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (ns[i] < 1)
                throw ConfigError("n must be at least 1");
            if (i > 0 && ns[i] <= ns[i - 1])
                throw ConfigError("n list must be strictly increasing");
        }
        for (double x : xs)
            if (!(x >= 0.0 && x <= 1.0))
                throw ConfigError("x values must lie in [0,1]");
        if (grid < 2)
            throw ConfigError("grid needs at least 2 points");
    }

    std::vector<std::pair<std::string, std::string>> describe() const {
        return {{"alpha", format_double(weight.alpha())},
                {"beta", format_double(weight.beta())},
                {"fn", fn},
                {"n", format_list(ns)},
                {"qn", sequence.str()},
                {"x", format_list(xs)},
                {"grid", std::to_string(grid)},
                {"tol", format_double(tol.eps)}};
    }
};

namespace detail {

/// Interior points only when the weight or f is singular at an endpoint.
inline std::vector<double> error_grid(const ExperimentConfig& cfg, const CatalogFunction& fn) {
    const bool singular = cfg.weight.alpha() < 0.0 || cfg.weight.beta() < 0.0 || !fn.endpoints;
    return make_grid(cfg.grid, singular);
}

inline std::string x_header(const char* prefix, double x) { return std::string(prefix) + "@" + format_double(x); }

} // namespace detail

/// Rows n, q_n, sup_error, err@x..., scaled_error, modulus, ratio, status.
inline Table convergence_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto fn = catalog_function(cfg.fn);
    Table t{"converge", cfg.describe(), {"n", "q_n", "sup_error"}, {}};
    for (double x : cfg.xs)
        t.headers.push_back(detail::x_header("err", x));
    for (const char* h : {"scaled_error", "modulus", "ratio", "status"})
        t.headers.emplace_back(h);

    const auto grid = detail::error_grid(cfg, fn);
    for (int n : cfg.ns) {
        const double qn = cfg.sequence.value(n);
        std::vector<Cell> row{static_cast<long long>(n), qn};
        try {
            const DurrmeyerOperator M(OperatorSpec(n, QParam(qn), cfg.weight, cfg.tol));
            const auto img = M.image(fn.f);
            double sup = 0.0;
            for (double x : grid)
                sup = std::max(sup, std::abs(img(x) - fn.f(x)));
            row.emplace_back(sup);
            for (double x : cfg.xs)
                row.emplace_back(std::abs(img(x) - fn.f(x)));
            const double qnum = q_number(n, QParam(qn));
            const double omega = empirical_modulus(fn.f, 1.0 / std::sqrt(qnum), 1001, !fn.endpoints);
            row.emplace_back(qnum * sup);
            row.emplace_back(omega);
            row.emplace_back(omega > 0.0 ? sup / omega : 0.0);
            row.emplace_back(std::string("ok"));
        } catch (const ConvergenceError&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            while (row.size() + 1 < t.headers.size())
                row.emplace_back(nan);
            row.emplace_back(std::string("diverged"));
        }
        t.add(std::move(row));
    }
    return t;
}

/// f'(x) ((alpha+1) - (alpha+beta+2) x) + x (1-x) f''(x)
inline double voronovskaya_limit(const CatalogFunction& fn, const JacobiWeight& w, double x) {
    const double a = w.alpha();
    const double b = w.beta();
    return fn.df(x) * ((a + 1.0) - (a + b + 2.0) * x) + x * (1.0 - x) * fn.d2f(x);
}

/// Rows n, q_n, x, value = [n](M f - f), limit, gap, nT1, T1_limit, nT2, T2_limit,
/// with T_m = M[(x - .)^m](x).
inline Table voronovskaya_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto fn = catalog_function(cfg.fn);
    for (double x : cfg.xs)
        if (x <= 0.0 || x >= 1.0)
            throw DomainError("Voronovskaya limit needs x in (0,1)");
    Table t{"voronovskaya",
            cfg.describe(),
            {"n", "q_n", "x", "value", "limit", "gap", "nT1", "T1_limit", "nT2", "T2_limit"},
            {}};
    const double a = cfg.weight.alpha();
    const double b = cfg.weight.beta();
    for (int n : cfg.ns) {
        const double qn = cfg.sequence.value(n);
        const DurrmeyerOperator M(OperatorSpec(n, QParam(qn), cfg.weight, cfg.tol));
        const auto img = M.image(fn.f);
        const double qnum = q_number(n, QParam(qn));
        for (double x : cfg.xs) {
            const double value = qnum * (img(x) - fn.f(x));
            const double limit = voronovskaya_limit(fn, cfg.weight, x);
            t.add({static_cast<long long>(n), qn, x, value, limit, std::abs(value - limit),
                   qnum * M.central_moment(1, x), (a + b + 2.0) * x - a - 1.0, qnum * M.central_moment(2, x),
                   2.0 * x * (1.0 - x)});
        }
    }
    return t;
}

/// Rows n, q_n, sup_error = sup |D_q (M f) - f'|, bound_term = [a+b+2]/[n] sup|f'|.
inline Table derivative_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto fn = catalog_function(cfg.fn);
    Table t{"derivative", cfg.describe(), {"n", "q_n", "sup_error", "bound_term"}, {}};
    std::vector<double> grid;
    for (double x : detail::error_grid(cfg, fn))
        if (x > 0.0)
            grid.push_back(x);
    double dsup = 0.0;
    for (double x : grid)
        dsup = std::max(dsup, std::abs(fn.df(x)));
    const double s = cfg.weight.alpha() + cfg.weight.beta() + 2.0;
    for (int n : cfg.ns) {
        const double qn = cfg.sequence.value(n);
        const QParam q(qn);
        const DurrmeyerOperator M(OperatorSpec(n, q, cfg.weight, cfg.tol));
        const auto img = M.image(fn.f);
        double sup = 0.0;
        for (double x : grid)
            sup = std::max(sup, std::abs(q_derivative(img, x, q) - fn.df(x)));
        t.add({static_cast<long long>(n), qn, sup, q_number(s, q) / q_number(n, q) * dsup});
    }
    return t;
}

struct ShapeSummary {
    double f_min_d1, img_min_d1, f_max_d1, img_max_d1;
    double f_min_d2, img_min_d2;
    int f_sign_changes, img_sign_changes;
};

template <RealFunction F, RealFunction G>
ShapeSummary shape_summary(const F& f, const G& img, const std::vector<double>& grid) {
    std::vector<double> fv, iv;
    for (double x : grid) {
        fv.push_back(static_cast<double>(f(x)));
        iv.push_back(static_cast<double>(img(x)));
    }
    ShapeSummary s{1e300, 1e300, -1e300, -1e300, 1e300, 1e300, sign_changes(fv), sign_changes(iv)};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        s.f_min_d1 = std::min(s.f_min_d1, fv[i] - fv[i - 1]);
        s.img_min_d1 = std::min(s.img_min_d1, iv[i] - iv[i - 1]);
        s.f_max_d1 = std::max(s.f_max_d1, fv[i] - fv[i - 1]);
        s.img_max_d1 = std::max(s.img_max_d1, iv[i] - iv[i - 1]);
    }
    for (std::size_t i = 2; i < grid.size(); ++i) {
        s.f_min_d2 = std::min(s.f_min_d2, fv[i] - 2.0 * fv[i - 1] + fv[i - 2]);
        s.img_min_d2 = std::min(s.img_min_d2, iv[i] - 2.0 * iv[i - 1] + iv[i - 2]);
    }
    return s;
}

/// Rows n, q_n, first/second difference extremes and sign-change counts of f and M f,
/// plus 0/1 flags for monotonicity, convexity and sign-change preservation.
inline Table shape_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto fn = catalog_function(cfg.fn);
    constexpr double tol = 1e-10;
    Table t{"shape",
            cfg.describe(),
            {"n", "q_n", "f_min_d1", "img_min_d1", "f_max_d1", "img_max_d1", "f_min_d2", "img_min_d2",
             "f_sign_changes", "img_sign_changes", "monotone_ok", "convex_ok", "sign_changes_ok"},
            {}};
    const auto grid = detail::error_grid(cfg, fn);
    for (int n : cfg.ns) {
        const double qn = cfg.sequence.value(n);
        const DurrmeyerOperator M(OperatorSpec(n, QParam(qn), cfg.weight, cfg.tol));
        const auto img = M.image(fn.f);
        const auto s = shape_summary(fn.f, img, grid);
        const bool inc = s.f_min_d1 >= 0.0;
        const bool dec = s.f_max_d1 <= 0.0;
        const bool mono_ok = (!inc || s.img_min_d1 >= -tol) && (!dec || s.img_max_d1 <= tol);
        const bool convex_ok = s.f_min_d2 < 0.0 || s.img_min_d2 >= -tol;
        const bool sc_ok = s.img_sign_changes <= s.f_sign_changes;
        t.add({static_cast<long long>(n), qn, s.f_min_d1, s.img_min_d1, s.f_max_d1, s.img_max_d1, s.f_min_d2,
               s.img_min_d2, static_cast<long long>(s.f_sign_changes), static_cast<long long>(s.img_sign_changes),
               static_cast<long long>(mono_ok), static_cast<long long>(convex_ok), static_cast<long long>(sc_ok)});
    }
    return t;
}

/// Rows alpha, gap = sup |M^{alpha,alpha} f - M^{-1,-1} f|, plus the endpoint errors of M^{-1,-1} f.
template <RealFunction F>
Table kantorovich_limit_experiment(const F& f, int n, QParam q, const std::vector<double>& alphas, int grid_size = 101,
                                   const TailTolerance& tol = {}) {
    Table t{"kantorovich", {}, {"alpha", "gap", "endpoint0_error", "endpoint1_error"}, {}};
    const DurrmeyerOperator K(OperatorSpec(n, q, JacobiWeight(-1.0, -1.0), tol));
    const auto ki = K.image(f);
    const auto grid = make_grid(grid_size, false);
    const double e0 = std::abs(ki(0.0) - static_cast<double>(f(0.0)));
    const double e1 = std::abs(ki(1.0) - static_cast<double>(f(1.0)));
    for (double a : alphas) {
        const DurrmeyerOperator M(OperatorSpec(n, q, JacobiWeight(a, a), tol));
        const auto mi = M.image(f);
        double gap = 0.0;
        for (double x : grid)
            gap = std::max(gap, std::abs(mi(x) - ki(x)));
        t.add({a, gap, e0, e1});
    }
    return t;
}

} // namespace qbd

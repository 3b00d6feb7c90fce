#pragma once

// The qbd command line: one subcommand per table, CSV or JSON output.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbd/durrmeyer.hpp"
#include "qbd/error.hpp"
#include "qbd/experiments.hpp"
#include "qbd/qjacobi.hpp"

namespace qbd::cli {

enum ExitCode : int { ok = 0, config_error = 1, convergence_error = 2, io_error = 3 };

namespace detail {

inline std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

inline double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
    }
}

inline std::vector<double> parse_doubles(const std::string& s, const char* what) {
    std::vector<double> v;
    for (const auto& item : split(s))
        v.push_back(parse_double(item, what));
    return v;
}

inline std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> v;
    for (const auto& item : split(s)) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError("bad n value '" + item + "'");
        }
    }
    return v;
}

struct Options {
    std::string n = "4";
    std::optional<double> q;
    std::optional<std::string> qn;
    double alpha = 0.0;
    double beta = 0.0;
    std::string fn = "square";
    std::optional<std::string> x;
    int grid = 101;
    double tol = 1e-14;
    std::string format = "csv";
    std::string out;
    int r = 6;
    int jmax = 8;
    std::string alphas = "-0.5,-0.9,-0.99";
};

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--n", o.n, "degree or comma list of degrees");
    sub->add_option("--q", o.q, "fixed q in (0,1)");
    sub->add_option("--qn", o.qn, "q_n sequence: cn:c, pow:g, nlogn, const:q");
    sub->add_option("--alpha", o.alpha, "Jacobi alpha");
    sub->add_option("--beta", o.beta, "Jacobi beta");
    sub->add_option("--fn", o.fn, "catalog function: const, affine, square, cube, absdev, sin6, powneg:p");
    sub->add_option("--x", o.x, "evaluation point or comma list");
    sub->add_option("--grid", o.grid, "uniform grid size");
    sub->add_option("--tol", o.tol, "tail tolerance");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output path (default stdout)");
}

inline QnSequence sequence_of(const Options& o, const char* fallback) {
    if (o.q && o.qn)
        throw ConfigError("--q and --qn are mutually exclusive");
    if (o.qn)
        return QnSequence::parse(*o.qn);
    if (o.q)
        return {QnSequence::Kind::constant_q, *o.q};
    return QnSequence::parse(fallback);
}

inline ExperimentConfig config_of(const Options& o, const char* fallback_seq) {
    ExperimentConfig cfg;
    try {
        cfg.weight = JacobiWeight(o.alpha, o.beta);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    catalog_function(o.fn);
    cfg.fn = o.fn;
    cfg.ns = parse_ints(o.n);
    cfg.xs = o.x ? parse_doubles(*o.x, "x") : std::vector<double>{0.5};
    cfg.grid = o.grid;
    cfg.sequence = sequence_of(o, fallback_seq);
    try {
        cfg.tol = TailTolerance(o.tol);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

/// Points from --x, otherwise the experiment grid.
inline std::vector<double> points_of(const Options& o, const ExperimentConfig& cfg) {
    if (o.x)
        return cfg.xs;
    return qbd::detail::error_grid(cfg, catalog_function(cfg.fn));
}

inline Table eval_table(const Options& o) {
    const auto cfg = config_of(o, "const:0.5");
    const auto fn = catalog_function(cfg.fn);
    Table t{"eval", cfg.describe(), {"n", "q", "x", "f", "Mf", "Mf_kernel"}, {}};
    const auto xs = points_of(o, cfg);
    for (int n : cfg.ns) {
        const double q = cfg.sequence.value(n);
        const OperatorSpec spec(n, QParam(q), cfg.weight, cfg.tol);
        const DurrmeyerOperator M(spec);
        const KernelForm K(spec);
        const auto img = M.image(fn.f);
        for (double x : xs)
            t.add({static_cast<long long>(n), q, x, fn.f(x), img(x), K.eval(fn.f, x)});
    }
    return t;
}

inline Table coeffs_table(const Options& o) {
    const auto cfg = config_of(o, "const:0.5");
    const auto fn = catalog_function(cfg.fn);
    Table t{"coeffs", cfg.describe(), {"n", "q", "k", "coeff"}, {}};
    for (int n : cfg.ns) {
        const double q = cfg.sequence.value(n);
        const auto c = DurrmeyerOperator(OperatorSpec(n, QParam(q), cfg.weight, cfg.tol)).coefficients(fn.f);
        for (std::size_t k = 0; k < c.size(); ++k)
            t.add({static_cast<long long>(n), q, static_cast<long long>(k), c[k]});
    }
    return t;
}

inline Table kernel_table(const Options& o) {
    if (o.jmax < 1)
        throw ConfigError("--jmax must be positive");
    const auto cfg = config_of(o, "const:0.5");
    auto desc = cfg.describe();
    desc.emplace_back("jmax", std::to_string(o.jmax));
    Table t{"kernel", desc, {"n", "q", "x", "j", "node", "phi"}, {}};
    for (int n : cfg.ns) {
        const double q = cfg.sequence.value(n);
        const KernelForm K(OperatorSpec(n, QParam(q), cfg.weight, cfg.tol));
        for (double x : cfg.xs)
            for (int j = 0; j < o.jmax; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                t.add({static_cast<long long>(n), q, x, static_cast<long long>(j), K.node(ju), K.phi(ju, x)});
            }
    }
    return t;
}

inline Table jacobi_table(const Options& o) {
    if (o.r < 0)
        throw ConfigError("--r must be nonnegative");
    const auto cfg = config_of(o, "const:0.5");
    if (cfg.sequence.kind() != QnSequence::Kind::constant_q)
        throw ConfigError("jacobi needs a fixed q");
    if (!cfg.weight.is_regular())
        throw ConfigError("jacobi needs alpha, beta > -1");
    const QParam q(cfg.sequence.param());
    auto desc = cfg.describe();
    desc.emplace_back("r", std::to_string(o.r));
    Table t{"jacobi", desc, {"r", "k", "series", "rodrigues", "mu"}, {}};
    for (int r = 0; r <= o.r; ++r) {
        const auto s = qjacobi_series(r, cfg.weight, q);
        const auto d = qjacobi_rodrigues(r, cfg.weight, q);
        const double mu = eigenvalue_mu(r, cfg.weight, q);
        for (int k = 0; k <= r; ++k)
            t.add({static_cast<long long>(r), static_cast<long long>(k), s.poly.coeff(k), d.poly.coeff(k), mu});
    }
    return t;
}

inline Table eigen_table(const Options& o) {
    if (o.r < 0)
        throw ConfigError("--r must be nonnegative");
    const auto cfg = config_of(o, "const:0.5");
    auto desc = cfg.describe();
    desc.emplace_back("r", std::to_string(o.r));
    Table t{"eigen", desc, {"n", "q", "r", "lambda", "mu", "sigma", "lambda_minus_sigma"}, {}};
    for (int n : cfg.ns) {
        const QParam q(cfg.sequence.value(n));
        for (int r = 0; r <= o.r; ++r)
            t.add({static_cast<long long>(n), q.value(), static_cast<long long>(r),
                   eigenvalue_lambda(n, r, cfg.weight, q), eigenvalue_mu(r, cfg.weight, q),
                   spectral_sigma(r, cfg.weight, q), spectral_gap(n, r, cfg.weight, q)});
    }
    return t;
}

inline Table kantorovich_table(const Options& o) {
    const auto cfg = config_of(o, "const:0.5");
    const auto fn = catalog_function(cfg.fn);
    if (!fn.endpoints)
        throw ConfigError("kantorovich needs a function defined on [0,1]");
    const auto alphas = parse_doubles(o.alphas, "alphas");
    for (double a : alphas)
        if (!(a > -1.0))
            throw ConfigError("alphas must exceed -1");
    auto desc = cfg.describe();
    desc.emplace_back("alphas", format_list(alphas));
    Table t{"kantorovich", desc, {"n", "q"}, {}};
    for (int n : cfg.ns) {
        const double q = cfg.sequence.value(n);
        auto sub = kantorovich_limit_experiment(fn.f, n, QParam(q), alphas, cfg.grid, cfg.tol);
        if (t.headers.size() == 2)
            t.headers.insert(t.headers.end(), sub.headers.begin(), sub.headers.end());
        for (auto& row : sub.rows) {
            row.insert(row.begin(), {static_cast<long long>(n), q});
            t.add(std::move(row));
        }
    }
    return t;
}

} // namespace detail

/// Runs the CLI; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"q-Bernstein-Durrmeyer operators with Jacobi weights", "qbd"};
    app.require_subcommand(1);
    detail::Options o;

    struct Entry {
        const char* name;
        const char* help;
        Table (*build)(const detail::Options&);
    };
    static const Entry entries[] = {
        {"eval", "operator image in coefficient and kernel form", detail::eval_table},
        {"coeffs", "operator coefficients f_k", detail::coeffs_table},
        {"kernel", "kernel functions Phi_j at x", detail::kernel_table},
        {"jacobi", "little q-Jacobi coefficients, series and Rodrigues forms", detail::jacobi_table},
        {"eigen", "eigenvalues lambda_{n,r}, mu_r and their limits", detail::eigen_table},
        {"converge", "uniform convergence sweep over n",
         [](const detail::Options& op) { return convergence_experiment(detail::config_of(op, "cn:1")); }},
        {"voronovskaya", "Voronovskaya limit sweep over n",
         [](const detail::Options& op) { return voronovskaya_experiment(detail::config_of(op, "cn:1")); }},
        {"derivative", "q-derivative of the image against f'",
         [](const detail::Options& op) { return derivative_experiment(detail::config_of(op, "cn:1")); }},
        {"shape", "monotonicity, convexity and sign changes",
         [](const detail::Options& op) { return shape_experiment(detail::config_of(op, "cn:1")); }},
        {"kantorovich", "alpha = beta -> -1 limit", detail::kantorovich_table},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        detail::add_common(sub, o);
        if (std::string(e.name) == "jacobi" || std::string(e.name) == "eigen")
            sub->add_option("--r", o.r, "largest degree");
        if (std::string(e.name) == "kernel")
            sub->add_option("--jmax", o.jmax, "number of kernel functions");
        if (std::string(e.name) == "kantorovich")
            sub->add_option("--alphas", o.alphas, "comma list of alpha = beta values");
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : config_error;
    }

    try {
        for (const auto& [sub, e] : subs) {
            if (!sub->parsed())
                continue;
            const Table t = e->build(o);
            emit(t, o.format == "json" ? Format::json : Format::csv, o.out, out);
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "qbd: config error: " << e.what() << '\n';
        return config_error;
    } catch (const DomainError& e) {
        err << "qbd: invalid input: " << e.what() << '\n';
        return config_error;
    } catch (const ConvergenceError& e) {
        err << "qbd: convergence error: " << e.what() << '\n';
        return convergence_error;
    } catch (const IoError& e) {
        err << "qbd: I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const Error& e) {
        err << "qbd: error: " << e.what() << '\n';
        return config_error;
    }
}

} // namespace qbd::cli

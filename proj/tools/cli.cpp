#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "softops/axiswise.hpp"
#include "softops/bench.hpp"
#include "softops/gradcheck.hpp"
#include "softops/manifold.hpp"

namespace {

using namespace softops;

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

// Usage or configuration problem detected by the CLI itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvOut {
public:
    explicit CsvOut(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw UsageError("cannot open '" + path + "' for writing");
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }
    bool to_stdout() const { return !file_; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os() << (i ? "," : "") << cells[i];
        os() << '\n';
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

Mode mode_arg(const std::string& s) {
    try {
        return parse_mode(s);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

Method method_arg(const std::string& s) {
    try {
        return parse_method(s);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

void require_combination(const std::string& op, Method m, Mode mode) {
    std::string why;
    if (!combination_valid(op, m, mode, &why))
        throw UsageError("invalid combination op=" + op + " method=" + name(m) + " mode=" + name(mode) +
                         " (supported-algorithm table): " + why);
}

// ---------------------------------------------------------------- gradcheck

struct GradcheckArgs {
    std::string filter = "*";
    double tol = 1e-4;
    std::uint64_t seed = 0;
    std::string mode;
    std::string out;
};

int cmd_gradcheck(const GradcheckArgs& a) {
    GradcheckOptions opt;
    opt.filter = a.filter;
    opt.tol = a.tol;
    opt.seed = a.seed;
    if (!a.mode.empty()) opt.mode = mode_arg(a.mode);
    std::vector<GradcheckResult> res;
    try {
        res = run_gradcheck(opt);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    CsvOut out(a.out);
    out.row({"op", "mode", "max_rel_err", "tol", "points", "rejected", "status"});
    int failed = 0;
    for (const auto& r : res) {
        failed += !r.pass;
        out.row({r.name, name(r.mode), num(r.max_rel_err), num(r.tol), std::to_string(r.points),
                 std::to_string(r.rejected), r.exempt ? "EXEMPT" : (r.pass ? "PASS" : "FAIL")});
    }
    std::cerr << "gradcheck: " << res.size() - std::size_t(failed) << "/" << res.size() << " passed\n";
    return failed ? kCheckFailed : kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::string op, method, mode = "smooth", preset, out;
    std::size_t n = 5;
    std::vector<double> taus;
    std::size_t k = 1;
    double q = 0.5;
    std::uint64_t seed = 0;
};

Vec<double> linspace(double a, double b, std::size_t m) {
    Vec<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = a + (b - a) * double(i) / double(m - 1);
    return v;
}

// Input index the hard op routes to output i; jacobian_diag is d y_i / d x_src(i).
std::size_t source_index(const std::string& op, const Vec<double>& x, std::size_t i, double q) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    if (op == "sort") return idx[i];
    if (op == "rank") return i;
    if (op == "max") return idx[n - 1];
    if (op == "min") return idx[0];
    if (op == "topk") return idx[n - 1 - i];
    if (op == "quantile") return idx[std::size_t(std::floor(q * double(n - 1)))];
    if (op == "median") return idx[std::size_t(std::floor(0.5 * double(n - 1)))];
    return i % n;  // arg ops: flattened matrix entry (r, c) pairs with x_c
}

int cmd_sweep(SweepArgs a) {
    Vec<double> base;
    Vec<double> grid;
    bool sweep_first = true;
    if (a.preset == "fig1") {
        a.op = "rank";
        a.method = "neuralsort";
        a.mode = "smooth";
        base = {0.0, -1.0, 0.5, 0.8, 2.0};
        if (a.taus.empty()) a.taus = {0.01, 0.1, 1.0};
        grid = linspace(-3.0, 3.0, 121);
    } else if (a.preset == "fig6") {
        a.op = "sort";
        a.method = "softsort";
        a.mode = "smooth";
        base = {0.3, 0.12, 0.95, 0.61, 0.47, 0.05};
        if (a.taus.empty())
            for (int e = -12; e <= 12; ++e) a.taus.push_back(std::pow(10.0, double(e) / 4.0));
        sweep_first = false;
    } else if (!a.preset.empty()) {
        throw UsageError("unknown preset '" + a.preset + "' (expected fig1 or fig6)");
    } else {
        if (a.op.empty()) throw UsageError("sweep: --op or --preset is required");
        if (a.n == 0) throw UsageError("sweep: --n must be >= 1");
        std::mt19937_64 rng(a.seed);
        std::normal_distribution<double> nd;
        base.resize(a.n);
        for (double& v : base) v = nd(rng);
        if (a.taus.empty()) a.taus = {0.1};
        grid = linspace(-3.0, 3.0, 61);
    }
    for (double t : a.taus)
        if (!(t > 0.0)) throw UsageError("sweep: every tau must be > 0");
    const Mode mode = mode_arg(a.mode);
    const Method method = a.method.empty() ? default_method(a.op) : method_arg(a.method);
    require_combination(a.op, method, mode);
    if (!sweep_first) grid = {base[0]};

    CsvOut out(a.out);
    out.row({"x_sweep_value", "tau", "output_index", "output_value", "jacobian_diag"});
    for (double tau : a.taus) {
        SoftConfig cfg;
        cfg.tau = tau;
        cfg.mode = mode;
        cfg.method = method;
        // the fig6 curves are drawn on raw values
        if (a.preset == "fig6") cfg.standardize = false;
        for (double x0 : grid) {
            Vec<double> x = base;
            x[0] = x0;
            try {
                Vec<double> y = apply_axiswise(a.op, x, cfg, a.k, a.q);
                Mat<double> J = jacobian([&](const Vec<Dual>& v) { return apply_axiswise(a.op, v, cfg, a.k, a.q); }, x);
                for (std::size_t i = 0; i < y.size(); ++i)
                    out.row({num(x0), num(tau), std::to_string(i), num(y[i]),
                             num(J(i, source_index(a.op, x, i, a.q)))});
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::NoConvergence) throw;
                throw UsageError(e.what());
            }
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<std::string> ops = {"sort"}, methods, modes = {"smooth"};
    std::vector<std::size_t> sizes = {64, 256, 1024};
    int reps = 5;
    double tau = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_bench(const BenchArgs& a) {
    BenchOptions opt;
    opt.ops = a.ops;
    opt.modes.clear();
    for (const auto& m : a.modes) opt.modes.push_back(mode_arg(m));
    for (const auto& m : a.methods)
        if (m != "hard") method_arg(m);
    for (const auto& op : a.ops) {
        const auto& all = axiswise_ops();
        if (std::find(all.begin(), all.end(), op) == all.end()) throw UsageError("bench: unknown op '" + op + "'");
    }
    opt.methods = a.methods;
    opt.sizes = a.sizes;
    opt.reps = a.reps;
    opt.tau = a.tau;
    opt.seed = a.seed;
    std::vector<BenchRow> rows;
    try {
        rows = run_bench(opt);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NoConvergence) throw;
        throw UsageError(e.what());
    }
    CsvOut out(a.out);
    out.row({"op", "method", "mode", "n", "median_forward_s", "median_jacobian_s", "peak_bytes_estimate"});
    for (const auto& r : rows)
        out.row({r.op, r.method, r.mode, std::to_string(r.n), num(r.median_forward_s), num(r.median_jacobian_s),
                 std::to_string(r.peak_bytes_estimate)});
    return kOk;
}

// ---------------------------------------------------------------- demo-manifold

struct DemoArgs {
    std::size_t n = 7;
    double tau = 0.1;
    std::string mode = "smooth", method;
    bool standardize = false;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_demo(const DemoArgs& a) {
    if (a.n < 5) throw UsageError("demo-manifold: --n must be >= 5");
    if (!(a.tau > 0.0)) throw UsageError("demo-manifold: --tau must be > 0");
    SoftConfig cfg;
    cfg.tau = a.tau;
    cfg.mode = mode_arg(a.mode);
    cfg.standardize = a.standardize;
    if (!a.method.empty()) cfg.method = method_arg(a.method);
    require_combination("argmax", cfg.method.value_or(default_method("argmax")), cfg.mode);

    std::mt19937_64 rng(a.seed);
    const Polygon poly = random_convex_polygon(a.n, rng);
    const ManifoldReport r = manifold_demo(poly, cfg);

    CsvOut out(a.out);
    std::ostream& rep = out.to_stdout() ? std::cerr : std::cout;
    auto idx = [](const std::array<std::size_t, 4>& v) {
        std::ostringstream s;
        s << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3];
        return s.str();
    };
    rep << "hard indices: " << idx(r.hard_index) << "\n"
        << "soft argmax:  " << idx(r.soft_index) << "\n"
        << "match: " << (r.match ? "yes" : "no") << "\n"
        << "zero-gradient vertices: hard " << r.zero_hard << ", soft " << r.zero_soft << " of " << a.n << "\n";
    out.row({"vertex", "x", "y", "grad_hard", "grad_soft", "zero_hard", "zero_soft"});
    for (std::size_t i = 0; i < a.n; ++i)
        out.row({std::to_string(i), num(poly.x[i]), num(poly.y[i]), num(r.grad_hard[i]), num(r.grad_soft[i]),
                 r.grad_hard[i] == 0.0 ? "1" : "0", std::fabs(r.grad_soft[i]) <= 1e-8 ? "1" : "0"});
    return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"softops: soft differentiable surrogates for hard operations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "softops 1.0");

    GradcheckArgs ga;
    auto* gc = app.add_subcommand("gradcheck", "Dual vs central-difference Jacobians for every registered op");
    gc->add_option("--filter,--op", ga.filter, "op-name glob, e.g. 'softsort.*'")->capture_default_str();
    gc->add_option("--tol", ga.tol, "relative tolerance (x10 for OT ops)")->capture_default_str();
    gc->add_option("--seed", ga.seed)->capture_default_str();
    gc->add_option("--mode", ga.mode, "restrict to one mode");
    gc->add_option("--out", ga.out, "CSV path (default stdout)");

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "output and Jacobian diagonal over an x grid and a tau list");
    sw->add_option("--op", sa.op);
    sw->add_option("--method", sa.method);
    sw->add_option("--mode", sa.mode)->capture_default_str();
    sw->add_option("--n", sa.n)->capture_default_str();
    sw->add_option("--tau", sa.taus, "comma-separated softness values")->delimiter(',');
    sw->add_option("--k", sa.k)->capture_default_str();
    sw->add_option("--q", sa.q)->capture_default_str();
    sw->add_option("--seed", sa.seed)->capture_default_str();
    sw->add_option("--preset", sa.preset, "fig1 (neuralsort rank) or fig6 (softsort sort vs tau)");
    sw->add_option("--out", sa.out);

    BenchArgs ba;
    auto* be = app.add_subcommand("bench", "forward and JVP timings with allocator peak bytes");
    be->add_option("--op", ba.ops)->delimiter(',')->capture_default_str();
    be->add_option("--method", ba.methods, "default: all valid methods plus hard")->delimiter(',');
    be->add_option("--mode", ba.modes)->delimiter(',')->capture_default_str();
    be->add_option("--sizes", ba.sizes)->delimiter(',')->capture_default_str();
    be->add_option("--reps", ba.reps)->capture_default_str();
    be->add_option("--tau", ba.tau)->capture_default_str();
    be->add_option("--seed", ba.seed)->capture_default_str();
    be->add_option("--out", ba.out);

    DemoArgs da;
    auto* dm = app.add_subcommand("demo-manifold", "hard vs soft four-point selection on a random convex polygon");
    dm->add_option("--n", da.n)->capture_default_str();
    dm->add_option("--tau", da.tau)->capture_default_str();
    dm->add_option("--mode", da.mode)->capture_default_str();
    dm->add_option("--method", da.method, "argmax method (default softsort)");
    dm->add_flag("--standardize", da.standardize, "standardize and squash the logits");
    dm->add_option("--seed", da.seed)->capture_default_str();
    dm->add_option("--out", da.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gc) return cmd_gradcheck(ga);
        if (*sw) return cmd_sweep(sa);
        if (*be) return cmd_bench(ba);
        if (*dm) return cmd_demo(da);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::NoConvergence ? kCheckFailed : kUsage;
    }
    return kUsage;
}

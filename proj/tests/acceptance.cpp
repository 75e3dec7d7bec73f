// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any gating criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "softops/axiswise.hpp"
#include "softops/bench.hpp"
#include "softops/bitonic.hpp"
#include "softops/elementwise.hpp"
#include "softops/gradcheck.hpp"
#include "softops/manifold.hpp"
#include "softops/otrank.hpp"
#include "softops/permusort.hpp"
#include "softops/simplex.hpp"
#include "softops/simplexsort.hpp"
#include "softops/solvers.hpp"
#include "softops/st_select.hpp"

using namespace softops;

namespace {

constexpr Mode kModes[] = {Mode::Smooth, Mode::C0, Mode::C1, Mode::C2};
constexpr Method kMethods[] = {Method::OT,           Method::SoftSort,   Method::NeuralSort,
                               Method::FastSoftSort, Method::SmoothSort, Method::Network};

int g_failed = 0;

void report(int id, bool pass, const std::string& detail, bool gating = true) {
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass && gating) ++g_failed;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

SoftConfig config(Mode m, double tau, bool standardize = true) {
    SoftConfig c;
    c.mode = m;
    c.tau = tau;
    c.standardize = standardize;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

void criterion_gradcheck() {
    auto t0 = std::chrono::steady_clock::now();
    auto res = run_gradcheck(GradcheckOptions{});
    const double dt = seconds_since(t0);
    int bad = 0, exempt = 0;
    std::string first;
    for (const auto& r : res) {
        exempt += r.exempt;
        if (!r.pass && !r.exempt) {
            if (!bad) first = " first=" + r.name + "/" + name(r.mode) + " err=" + sci(r.max_rel_err);
            ++bad;
        }
    }
    report(1, bad == 0 && dt < 300.0,
           std::to_string(res.size()) + " cases, " + std::to_string(bad) + " failing, " + std::to_string(exempt) +
               " exempt, runtime " + sci(dt) + " s" + first);
}

// ---------------------------------------------------------------- 2

// Hard reference in the flattened layout of apply_axiswise.
Vec<double> hard_reference(const std::string& op, const Vec<double>& x, std::size_t k, double q) {
    const std::size_t n = x.size();
    auto idx = oracle::hard_argsort(x);
    Vec<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = x[idx[i]];
    auto onehot = [&](std::size_t j) {
        Vec<double> p(n, 0.0);
        p[j] = 1.0;
        return p;
    };
    const double pos = q * double(n - 1);
    const std::size_t lo = std::size_t(std::floor(pos)), hi = std::size_t(std::ceil(pos));
    if (op == "sort") return s;
    if (op == "rank") return oracle::hard_rank(x);
    if (op == "max") return {s[n - 1]};
    if (op == "min") return {s[0]};
    if (op == "topk") {
        Vec<double> out;
        for (std::size_t r = 0; r < k; ++r) out.push_back(s[n - 1 - r]);
        return out;
    }
    if (op == "quantile") return {0.5 * (s[lo] + s[hi])};
    if (op == "median") return {n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2])};
    if (op == "argsort" || op == "argrank") {
        Vec<double> P(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (op == "argsort")
                P[i * n + idx[i]] = 1.0;
            else
                P[idx[i] * n + i] = 1.0;
        }
        return P;
    }
    if (op == "argmax") return onehot(idx[n - 1]);
    if (op == "argmin") return onehot(idx[0]);
    if (op == "argtopk") {
        Vec<double> out;
        for (std::size_t r = 0; r < k; ++r) {
            auto p = onehot(idx[n - 1 - r]);
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    }
    if (op == "argquantile") return onehot(idx[lo]);
    if (op == "argmedian") {
        Vec<double> p(n, 0.0);
        p[idx[(n - 1) / 2]] += 0.5;
        p[idx[n / 2]] += 0.5;
        return p;
    }
    return {};
}

void criterion_hard_limit() {
    const std::size_t k = 2;
    const double q = 0.3;
    int combos = 0, failed_combos = 0;
    long runs = 0, failed_runs = 0;
    double worst = 0.0;
    std::string worst_where;
    std::vector<std::string> failures;
    for (const std::string& op : axiswise_ops())
        for (Method m : kMethods)
            for (Mode mode : kModes) {
                if (!combination_valid(op, m, mode)) continue;
                ++combos;
                int fails = 0;
                double combo_worst = 0.0;
                for (std::size_t n : {4u, 8u, 16u, 32u})
                    for (int seed = 0; seed < 100; ++seed) {
                        std::mt19937_64 rng(std::uint64_t(seed) * 7919u + n);
                        Vec<double> x = oracle::distinct_values(rng, n);
                        SoftConfig cfg = config(mode, 1e-3);
                        cfg.method = m;
                        Vec<double> y = apply_axiswise(op, x, cfg, k, q);
                        Vec<double> h = hard_reference(op, x, k, q);
                        double err = y.size() == h.size() ? 0.0 : INFINITY;
                        for (std::size_t i = 0; i < y.size() && i < h.size(); ++i)
                            err = std::max(err, std::fabs(y[i] - h[i]));
                        if (!(err <= 1e-2)) ++fails;
                        combo_worst = std::max(combo_worst, std::isfinite(err) ? err : 1e300);
                        ++runs;
                    }
                if (combo_worst > worst) {
                    worst = combo_worst;
                    worst_where = op + "/" + name(m) + "/" + name(mode);
                }
                if (fails) {
                    ++failed_combos;
                    failed_runs += fails;
                    failures.push_back(op + "/" + name(m) + "/" + name(mode) + ":" + std::to_string(fails));
                }
            }
    std::string detail = std::to_string(combos) + " op/method/mode combinations x 4 sizes x 100 seeds, " +
                         std::to_string(failed_runs) + "/" + std::to_string(runs) + " runs over 1e-2, worst " +
                         sci(worst) + " at " + worst_where;
    for (std::size_t i = 0; i < failures.size() && i < 8; ++i) detail += (i ? " " : " failing: ") + failures[i];
    report(2, failed_combos == 0, detail);
}

// ---------------------------------------------------------------- 3

void criterion_stochasticity() {
    double row_err = 0.0, col_err = 0.0, rank_err = 0.0, sum_err = 0.0;
    int zero_columns = 0;
    std::map<std::string, double> rank_by;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    auto rows_of = [&](const Vec<double>& a, std::size_t n) {
        for (std::size_t r = 0; r * n < a.size(); ++r) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a[r * n + j];
            row_err = std::max(row_err, std::fabs(s - 1.0));
        }
    };
    auto cols_of = [&](const Mat<double>& P) {
        for (std::size_t j = 0; j < P.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < P.rows; ++i) s += P(i, j);
            col_err = std::max(col_err, std::fabs(s - 1.0));
        }
    };
    for (std::size_t n : {4u, 8u, 16u, 32u})
        for (double tau : {0.01, 0.1, 1.0})
            for (Mode mode : kModes)
                for (int rep = 0; rep < 5; ++rep) {
                    Vec<double> x(n);
                    for (double& v : x) v = nd(rng);
                    for (Method m : kMethods) {
                        SoftConfig cfg = config(mode, tau);
                        cfg.method = m;
                        for (const char* op : {"argsort", "argrank", "argmax", "argmin", "argtopk", "argquantile",
                                               "argmedian"})
                            if (combination_valid(op, m, mode)) rows_of(apply_axiswise(op, x, cfg, 3, 0.4), n);
                        if (combination_valid("rank", m, mode)) {
                            if (m == Method::OT || m == Method::FastSoftSort || m == Method::NeuralSort) {
                                Vec<double> r;
                                try {
                                    r = rank(x, cfg);
                                } catch (const Error&) {
                                    // exactly-zero argsort column (sparse modes): rejected by design
                                    ++zero_columns;
                                    continue;
                                }
                                double e = std::fabs(std::accumulate(r.begin(), r.end(), 0.0) -
                                                     double(n * (n + 1)) / 2.0);
                                rank_err = std::max(rank_err, e);
                                rank_by[name(m)] = std::max(rank_by[name(m)], e);
                            }
                        }
                        if (m == Method::FastSoftSort && combination_valid("sort", m, mode)) {
                            auto s = sort(x, cfg);
                            sum_err = std::max(sum_err, std::fabs(std::accumulate(s.begin(), s.end(), 0.0) -
                                                                  std::accumulate(x.begin(), x.end(), 0.0)));
                        }
                    }
                    cols_of(ot_argsort(x, config(mode, tau)));
                    cols_of(network_argsort(x, config(mode, tau)));
                }
    const bool pass = row_err <= 1e-6 && col_err <= 1e-6 && rank_err <= 1e-6 && sum_err <= 1e-9;
    std::string detail = "row " + sci(row_err) + ", column " + sci(col_err) + ", rank sum " + sci(rank_err) + " (";
    bool first = true;
    for (const auto& [k, v] : rank_by) {
        detail += (first ? "" : " ") + k + "=" + sci(v);
        first = false;
    }
    detail += "), fastsoftsort sum " + sci(sum_err) + "; " + std::to_string(zero_columns) +
              " neuralsort rank calls rejected for a zero column";
    report(3, pass, detail);
}

// ---------------------------------------------------------------- 4

// Independent n=2 closed forms, p1 = probability of the larger coordinate x.
double pair_closed_form(Mode m, double x, double tau) {
    if (m == Mode::Smooth) return 1.0 / (1.0 + std::exp(-x / tau));
    const double s = x / tau;
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    switch (m) {
        case Mode::C0: return 0.5 + s / 2.0;
        case Mode::C1: return std::pow(s + std::sqrt(2.0 - s * s), 2) / 4.0;
        default: {
            if (s == 0.0) return 0.5;
            const double a = std::fabs(s);
            const double t = -a * std::sinh(std::asinh(-2.0 / (s * s * a)) / 3.0);
            return std::pow(t + s / 2.0, 3);
        }
    }
}

void criterion_pair_reduction() {
    double proj_err = 0.0, ot_err = 0.0;
    const double tau = 0.3;
    for (Mode m : kModes)
        for (int i = 0; i <= 80; ++i) {
            const double x = -2.0 * tau + 4.0 * tau * i / 80.0;
            auto pr = project(Vec<double>{0.0, x}, config(m, tau));
            proj_err = std::max(proj_err, std::fabs(pr.probs[1] - pair_closed_form(m, x, tau)));
            const double scale = m == Mode::Smooth ? 1.0
                                 : m == Mode::C0   ? 0.5
                                 : m == Mode::C1   ? 1.0 / std::sqrt(2.0)
                                                   : 1.0 / std::cbrt(2.0);
            auto P = ot_argsort(Vec<double>{0.0, x}, config(m, tau, false));
            ot_err = std::max(ot_err, std::fabs(P(0, 0) - pair_closed_form(m, x, tau * scale)));
        }
    report(4, proj_err <= 1e-8 && ot_err <= 1e-5,
           "project max err " + sci(proj_err) + " (tol 1e-8), OT max err " + sci(ot_err) + " (tol 1e-5)");
}

// ---------------------------------------------------------------- 5

struct Sided {
    double d1_left, d1_right, d2_left, d2_right;
};

// Second-order one-sided differences of f at b.
Sided one_sided(const std::function<double(double)>& f, double b, double h1, double h2) {
    Sided s;
    s.d1_right = (-3.0 * f(b) + 4.0 * f(b + h1) - f(b + 2 * h1)) / (2 * h1);
    s.d1_left = (3.0 * f(b) - 4.0 * f(b - h1) + f(b - 2 * h1)) / (2 * h1);
    s.d2_right = (2.0 * f(b) - 5.0 * f(b + h2) + 4.0 * f(b + 2 * h2) - f(b + 3 * h2)) / (h2 * h2);
    s.d2_left = (2.0 * f(b) - 5.0 * f(b - h2) + 4.0 * f(b - 2 * h2) - f(b - 3 * h2)) / (h2 * h2);
    return s;
}

// Support entry point of x_0 in project([t, 0, 0.4]) under mode m.
double entry_boundary(Mode m, double tau) {
    auto p0 = [&](double t) { return project(Vec<double>{t, 0.0, 0.4}, config(m, tau)).probs[0]; };
    double lo = -10.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (p0(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

void criterion_smoothness_class() {
    const double tau = 1.0;
    struct Probe {
        std::string name;
        std::function<double(double)> f;
        double boundary;
    };
    auto probes = [&](Mode m) {
        SoftConfig c = config(m, tau);
        std::vector<Probe> ps;
        for (double b : {-5.0 * tau, 5.0 * tau}) {
            ps.push_back({"heaviside", [c](double x) { return heaviside(x, c); }, b});
            ps.push_back({"relu_gating", [c](double x) { return relu(x, c, ReluStyle::Gating); }, b});
            ps.push_back({"relu_integration", [c](double x) { return relu(x, c, ReluStyle::Integration); }, b});
        }
        for (double b : {-tau, tau})
            ps.push_back({"project2", [c](double x) { return project(Vec<double>{0.0, x}, c).probs[1]; }, b});
        const double t3 = entry_boundary(m, tau);
        for (std::size_t j = 0; j < 3; ++j)
            ps.push_back({"project3[" + std::to_string(j) + "]",
                          [c, j](double t) { return project(Vec<double>{t, 0.0, 0.4}, c).probs[j]; }, t3});
        return ps;
    };

    double c1_d1 = 0.0, c2_d1 = 0.0, c2_d2 = 0.0;
    for (const auto& p : probes(Mode::C1)) {
        auto s = one_sided(p.f, p.boundary, 1e-5, 1e-3);
        c1_d1 = std::max(c1_d1, std::fabs(s.d1_left - s.d1_right));
    }
    for (const auto& p : probes(Mode::C2)) {
        auto s = one_sided(p.f, p.boundary, 1e-5, 1e-3);
        c2_d1 = std::max(c2_d1, std::fabs(s.d1_left - s.d1_right));
        c2_d2 = std::max(c2_d2, std::fabs(s.d2_left - s.d2_right));
    }
    // The c0 jump of project3 sits on the entering coordinate, so take the
    // largest over its outputs; every other probe must jump on its own.
    // Integration relu is the antiderivative of the c0 Heaviside, so its
    // sharp class is C1 and the jump shows up in the second derivative.
    double c0_min = INFINITY, c0_p3 = 0.0, c0_int_jump2 = INFINITY;
    for (const auto& p : probes(Mode::C0)) {
        auto s = one_sided(p.f, p.boundary, 1e-5, 1e-3);
        const double j1 = std::fabs(s.d1_left - s.d1_right);
        if (p.name == "relu_integration")
            c0_int_jump2 = std::min(c0_int_jump2, std::fabs(s.d2_left - s.d2_right));
        else if (p.name.rfind("project3", 0) == 0)
            c0_p3 = std::max(c0_p3, j1);
        else
            c0_min = std::min(c0_min, j1);
    }
    c0_min = std::min(c0_min, c0_p3);
    const bool pass = c1_d1 <= 1e-3 && c2_d1 <= 1e-3 && c2_d2 <= 1e-2 && c0_min > 0.01 && c0_int_jump2 > 0.01;
    report(5, pass,
           "c1 d1 mismatch " + sci(c1_d1) + "; c2 d1 mismatch " + sci(c2_d1) + ", d2 mismatch " + sci(c2_d2) +
               "; c0 smallest d1 jump " + sci(c0_min) + ", integration relu d2 jump " + sci(c0_int_jump2));
}

// ---------------------------------------------------------------- 6

void criterion_ste_pitfall() {
    SoftConfig c = config(Mode::Smooth, 0.5);
    auto relu_st = st_scalar([](double v) { return std::max(v, 0.0); }, [&](const Dual& v) { return relu(v, c); });
    auto per_primitive = [&](const Vec<Dual>& v) { return Vec<Dual>{relu_st(v[0]) * relu_st(v[1])}; };
    auto composite = st([](const Vec<double>& v) { return Vec<double>{std::max(v[0], 0.0) * std::max(v[1], 0.0)}; },
                        [&](const Vec<Dual>& v) { return Vec<Dual>{relu(v[0], c) * relu(v[1], c)}; });
    bool zero = true;
    double min_norm = INFINITY;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            Vec<double> p{-1.0 + i / 9.0, -1.0 + j / 9.0};
            auto Jp = jacobian(per_primitive, p);
            auto Jc = jacobian(composite, p);
            zero = zero && Jp.a[0] == 0.0 && Jp.a[1] == 0.0;
            min_norm = std::min(min_norm, std::hypot(Jc.a[0], Jc.a[1]));
        }
    report(6, zero && min_norm > 1e-6,
           std::string("per-primitive gradient exactly zero on all 81 points: ") + (zero ? "yes" : "no") +
               ", smallest composite gradient norm " + sci(min_norm));
}

// ---------------------------------------------------------------- 7

void criterion_tau_infinity() {
    const Vec<double> x{0.3, 0.12, 0.95, 0.61, 0.47, 0.05};
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / 6.0;
    SoftConfig c = config(Mode::Smooth, 1e3, false);
    auto y = softsort_sort(x, c);
    auto J = jacobian([&](const Vec<Dual>& v) { return softsort_sort(v, c); }, x);
    double ev = 0.0, ej = 0.0;
    for (double v : y) ev = std::max(ev, std::fabs(v - mean));
    for (double v : J.a) ej = std::max(ej, std::fabs(v - 1.0 / 6.0));
    report(7, ev <= 1e-3 && ej <= 1e-3, "max |y - mean| " + sci(ev) + ", max |J - 1/6| " + sci(ej));
}

// ---------------------------------------------------------------- 8

void criterion_oracles() {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> U(0.1, 1.0);

    double proj = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 2 + rep % 19;
        Vec<double> x(n);
        for (double& v : x) v = nd(rng);
        for (Mode m : kModes)
            for (double tau : {0.05, 0.5, 2.0}) {
                auto p = project(x, config(m, tau)).probs;
                auto o = oracle::project_bisection(x, m, tau);
                for (std::size_t i = 0; i < n; ++i) proj = std::max(proj, std::fabs(p[i] - o[i]));
            }
    }

    double pav = 0.0;
    int pool_mismatch = 0, pav_cases = 0;
    for (const IsoLoss& loss : {IsoLoss::euclidean(), IsoLoss::logkl(), IsoLoss::pnorm(3.0), IsoLoss::pnorm(4.0)})
        for (int rep = 0; rep < 120; ++rep) {
            std::size_t n = 1 + rep % 8;
            Vec<double> y(n), w(n);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = nd(rng);
                w[i] = loss.kind == IsoLossKind::LogKL ? U(rng) : 0.5 * nd(rng);
            }
            for (Direction dir : {Direction::Decreasing, Direction::Increasing}) {
                auto v = pav_isotonic(y, dir, loss, &w);
                auto o = oracle::isotonic_bruteforce(y, w, loss, dir == Direction::Decreasing);
                ++pav_cases;
                for (std::size_t i = 0; i < n; ++i) pav = std::max(pav, std::fabs(v[i] - o[i]));
                for (std::size_t i = 0; i + 1 < n; ++i)
                    if ((v[i] == v[i + 1]) != (o[i] == o[i + 1])) {
                        ++pool_mismatch;
                        break;
                    }
            }
        }

    double perm = 0.0;
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t n = 2 + rep % 5;
        Vec<double> y(n), z(n), w(n);
        for (double& v : y) v = nd(rng);
        for (double& v : z) v = nd(rng);
        const double tau = 0.2 + 0.3 * (rep % 4);
        for (std::size_t i = 0; i < n; ++i) w[i] = y[i] / tau;
        auto p = permutahedron_project(y, z, tau, Mode::C0);
        auto o = oracle::permutahedron_qp(w, z);
        for (std::size_t i = 0; i < n; ++i) perm = std::max(perm, std::fabs(p[i] - o[i]));
    }

    double marg = 0.0;
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t n = 2 + rep % 12, m = 2 + (rep * 7) % 11;
        Mat<double> C(n, m);
        for (double& v : C.a) v = std::fabs(nd(rng));
        Vec<double> a(n), b(m);
        for (double& v : a) v = U(rng);
        for (double& v : b) v = U(rng);
        const double sa = std::accumulate(a.begin(), a.end(), 0.0), sb = std::accumulate(b.begin(), b.end(), 0.0);
        for (double& v : a) v /= sa;
        for (double& v : b) v /= sb;
        for (double tau : {0.01, 0.1, 1.0}) {
            auto G = sinkhorn(C, a, b, tau, SolverParams{});
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += G(i, j);
                marg = std::max(marg, std::fabs(s - a[i]));
            }
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += G(i, j);
                marg = std::max(marg, std::fabs(s - b[j]));
            }
        }
    }

    const bool pass = proj <= 1e-8 && pav <= 1e-10 && pool_mismatch == 0 && perm <= 1e-6 && marg <= 1e-6;
    report(8, pass,
           "projection vs bisection " + sci(proj) + "; PAV vs exhaustive " + sci(pav) + " with " +
               std::to_string(pool_mismatch) + "/" + std::to_string(pav_cases) + " pool mismatches; permutahedron " +
               "vs QP " + sci(perm) + "; Sinkhorn marginals " + sci(marg));
}

// ---------------------------------------------------------------- 9

void criterion_smoothsort_bounds() {
    std::mt19937_64 rng(9);
    bool lower_ok = true;
    double top = 0.0, gap = 0.0, sort_err = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rep % 15;
        auto z = oracle::distinct_values(rng, n, 1.0 / double(n));
        auto b = smooth_bounds(z, 1e-3);
        Vec<double> zd = z;
        std::sort(zd.rbegin(), zd.rend());
        double pre = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            pre += zd[k];
            lower_ok = lower_ok && b.b_tilde[k] >= pre;
            gap = std::max(gap, b.b_tilde[k] - pre);
        }
        top = std::max(top, std::fabs(b.b_tilde.back() - pre));

        if (n <= 16) {
            auto s = smoothsort_sort(z, config(Mode::Smooth, 1e-3));
            auto h = z;
            std::sort(h.begin(), h.end());
            for (std::size_t i = 0; i < n; ++i) sort_err = std::max(sort_err, std::fabs(s[i] - h[i]));
        }
    }
    report(9, lower_ok && top <= 1e-9 && gap <= 1e-2 && sort_err <= 5e-2,
           std::string("b~_k >= b_k: ") + (lower_ok ? "yes" : "no") + ", |b~_n - sum z| " + sci(top) +
               ", max gap " + sci(gap) + ", smoothsort vs hard sort " + sci(sort_err));
}

// ---------------------------------------------------------------- 10

void criterion_manifold() {
    int match = 0, hard_zero_cases = 0, soft_nonzero_cases = 0;
    double min_soft = INFINITY;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng{std::uint64_t(seed)};
        Polygon poly = random_convex_polygon(7, rng);
        auto sharp = manifold_demo(poly, config(Mode::Smooth, 0.01, false));
        match += sharp.match;
        hard_zero_cases += sharp.zero_hard >= 1;
        auto soft = manifold_demo(poly, config(Mode::Smooth, 0.1, false));
        bool all = true;
        for (double g : soft.grad_soft) {
            all = all && std::fabs(g) > 1e-8;
            min_soft = std::min(min_soft, std::fabs(g));
        }
        soft_nonzero_cases += all;
    }
    report(10, match >= 95 && hard_zero_cases == 100 && soft_nonzero_cases == 100,
           "index match " + std::to_string(match) + "/100 at tau=0.01; hard zero gradient in " +
               std::to_string(hard_zero_cases) + "/100; soft all nonzero in " + std::to_string(soft_nonzero_cases) +
               "/100 at tau=0.1 (smallest |g| " + sci(min_soft) + ")");
}

// ---------------------------------------------------------------- 11

void criterion_scaling() {
    BenchOptions o;
    o.ops = {"sort"};
    o.methods = {"softsort", "fastsoftsort"};
    o.sizes = {512, 2048};
    o.reps = 5;
    auto rows = run_bench(o);
    std::map<std::string, std::map<std::size_t, BenchRow>> by;
    for (const auto& r : rows) by[r.method][r.n] = r;
    const double tr = by["softsort"][2048].median_forward_s / by["softsort"][512].median_forward_s;
    const double pr =
        double(by["fastsoftsort"][2048].peak_bytes_estimate) / double(by["fastsoftsort"][512].peak_bytes_estimate);
    report(11, tr >= 8.0 && tr <= 32.0 && pr < 8.0,
           "softsort forward ratio " + sci(tr) + " (want [8, 32]), fastsoftsort peak ratio " + sci(pr) +
               " (want < 8); informational",
           false);
}

}  // namespace

// Optional arguments select criteria by number; default runs all.
int main(int argc, char** argv) {
    const std::vector<void (*)()> criteria = {
        criterion_gradcheck,      criterion_hard_limit, criterion_stochasticity, criterion_pair_reduction,
        criterion_smoothness_class, criterion_ste_pitfall, criterion_tau_infinity, criterion_oracles,
        criterion_smoothsort_bounds, criterion_manifold, criterion_scaling};
    std::vector<bool> run(criteria.size(), argc < 2);
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id >= 1 && id <= int(criteria.size())) run[std::size_t(id - 1)] = true;
    }
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i)
        if (run[i]) criteria[i]();
    std::printf("%d gating criteria failed, total %.1f s\n", g_failed, seconds_since(t0));
    return g_failed ? 1 : 0;
}

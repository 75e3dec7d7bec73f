#include "softops/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "softops/alloc_counter.hpp"
#include "softops/axiswise.hpp"

namespace softops {

template <class T>
Vec<T> hard_axiswise(const std::string& op, const Vec<T>& x, std::size_t k, double q) {
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "hard_axiswise: empty input");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    auto onehot = [&](std::size_t j) {
        Vec<T> p(n, T(0));
        p[j] = T(1);
        return p;
    };
    auto at = [&](double pos) { return x[idx[std::size_t(pos)]]; };
    const double pos = q * double(n - 1), mid = 0.5 * double(n - 1);

    if (op == "sort") {
        Vec<T> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = x[idx[i]];
        return s;
    }
    if (op == "rank") {
        Vec<T> r(n);
        for (std::size_t i = 0; i < n; ++i) r[idx[i]] = T(double(n - i));
        return r;
    }
    if (op == "max") return {x[idx[n - 1]]};
    if (op == "min") return {x[idx[0]]};
    if (op == "topk" || op == "argtopk") {
        if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "hard_axiswise: k must satisfy 1 <= k <= n");
        Vec<T> out;
        for (std::size_t i = 0; i < k; ++i) {
            if (op == "topk") {
                out.push_back(x[idx[n - 1 - i]]);
            } else {
                Vec<T> p = onehot(idx[n - 1 - i]);
                out.insert(out.end(), p.begin(), p.end());
            }
        }
        return out;
    }
    if (op == "quantile") return {(at(std::floor(pos)) + at(std::ceil(pos))) * 0.5};
    if (op == "median") {
        const double lo = std::floor(mid);
        return {at(lo) + (at(std::ceil(mid)) - at(lo)) * (mid - lo)};
    }
    if (op == "argsort" || op == "argrank") {
        // argrank row j is the one-hot of x_j's ascending position
        Vec<T> P(n * n, T(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (op == "argsort")
                P[i * n + idx[i]] = T(1);
            else
                P[idx[i] * n + i] = T(1);
        }
        return P;
    }
    if (op == "argmax") return onehot(idx[n - 1]);
    if (op == "argmin") return onehot(idx[0]);
    if (op == "argquantile") return onehot(idx[std::size_t(std::floor(pos))]);
    if (op == "argmedian") {
        Vec<T> p(n, T(0));
        p[idx[(n - 1) / 2]] += T(0.5);
        p[idx[n / 2]] += T(0.5);
        return p;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown axiswise op '" + op + "'");
}

template Vec<double> hard_axiswise(const std::string&, const Vec<double>&, std::size_t, double);
template Vec<Dual> hard_axiswise(const std::string&, const Vec<Dual>&, std::size_t, double);

namespace {

using Clock = std::chrono::steady_clock;

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <class F>
double seconds(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// f_double and f_dual are the same op on the two scalar types.
template <class FD, class FJ>
BenchRow measure(const Vec<double>& x, const Vec<double>& dir, int reps, FD f_double, FJ f_dual) {
    Vec<Dual> xd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xd[i] = Dual(x[i], dir[i]);
    std::vector<double> tf, tj;
    volatile double sink = 0.0;
    BenchRow row;
    for (int r = 0; r < reps; ++r) {
        tf.push_back(seconds([&] { sink = sink + f_double(x).front(); }));
        const std::size_t base = alloc::current_bytes();
        alloc::reset_peak();
        tj.push_back(seconds([&] { sink = sink + f_dual(xd).front().d; }));
        row.peak_bytes_estimate = std::max(row.peak_bytes_estimate, alloc::peak_bytes() - base);
    }
    row.median_forward_s = median_of(tf);
    row.median_jacobian_s = median_of(tj);
    return row;
}

constexpr Method kMethods[] = {Method::OT,           Method::SoftSort,   Method::NeuralSort,
                               Method::FastSoftSort, Method::SmoothSort, Method::Network};

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& opt) {
    if (opt.reps < 1) throw Error(ErrorKind::InvalidArgument, "bench: reps must be >= 1");
    for (std::size_t n : opt.sizes)
        if (n < 2 || n > kBenchMaxN)
            throw Error(ErrorKind::InvalidArgument,
                        "bench: sizes must lie in [2, " + std::to_string(kBenchMaxN) + "], got " + std::to_string(n));

    std::vector<BenchRow> rows;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    for (std::size_t n : opt.sizes) {
        Vec<double> x(n), dir(n);
        for (double& v : x) v = nd(rng);
        for (double& v : dir) v = nd(rng);
        for (const std::string& op : opt.ops) {
            const std::size_t k = std::min<std::size_t>(n, 4);
            std::vector<std::string> methods = opt.methods;
            const bool listed = !methods.empty();
            if (!listed) {
                methods.push_back("hard");
                for (Method m : kMethods) methods.emplace_back(name(m));
            }
            for (const std::string& ms : methods) {
                if (ms == "hard") {
                    BenchRow r = measure(
                        x, dir, opt.reps, [&](const Vec<double>& v) { return hard_axiswise(op, v, k); },
                        [&](const Vec<Dual>& v) { return hard_axiswise(op, v, k); });
                    r.op = op;
                    r.method = "hard";
                    r.mode = "-";
                    r.n = n;
                    rows.push_back(r);
                    continue;
                }
                const Method m = parse_method(ms);
                for (Mode mode : opt.modes) {
                    std::string why;
                    if (!combination_valid(op, m, mode, &why)) {
                        if (listed) throw Error(ErrorKind::Unsupported, why);
                        continue;
                    }
                    SoftConfig cfg;
                    cfg.tau = opt.tau;
                    cfg.mode = mode;
                    cfg.method = m;
                    BenchRow r = measure(
                        x, dir, opt.reps, [&](const Vec<double>& v) { return apply_axiswise(op, v, cfg, k); },
                        [&](const Vec<Dual>& v) { return apply_axiswise(op, v, cfg, k); });
                    r.op = op;
                    r.method = ms;
                    r.mode = name(mode);
                    r.n = n;
                    rows.push_back(r);
                }
            }
        }
    }
    return rows;
}

}  // namespace softops

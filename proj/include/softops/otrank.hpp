#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "softops/core.hpp"
#include "softops/solvers.hpp"

namespace softops {

template <class T>
struct SquashState {
    T mu = T(0);
    T s = T(1);
    bool applied = false;
};

enum class QuantileCombine { Lower, Upper, Midpoint, Interpolate };

const char* name(QuantileCombine c);
QuantileCombine parse_combine(const std::string& s);

// x -> sigmoid((x - mean) / std). With applied = false the input passes through.
template <class T>
std::pair<Vec<T>, SquashState<T>> standardize_squash(const Vec<T>& x, bool apply = true) {
    SquashState<T> st;
    st.applied = apply;
    if (!apply || x.empty()) return {x, st};
    const double n = double(x.size());
    T mu(0);
    for (const T& v : x) mu += v;
    mu /= n;
    T var(0);
    for (const T& v : x) var += (v - mu) * (v - mu);
    var /= n;
    T s = val(var) > 0.0 ? sqrt(var) : T(0);
    if (val(s) < 1e-12) s = T(1e-12);
    st.mu = mu;
    st.s = s;
    Vec<T> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = T(1) / (T(1) + exp(-(x[i] - mu) / s));
    return {out, st};
}

template <class T>
T unsquash_destandardize(const T& p, const SquashState<T>& st) {
    if (!st.applied) return p;
    T c = p;
    if (val(c) < 1e-12) c = T(1e-12);
    if (val(c) > 1.0 - 1e-12) c = T(1.0 - 1e-12);
    return log(c / (T(1) - c)) * st.s + st.mu;
}

template <class T>
Vec<T> unsquash_destandardize(const Vec<T>& y, const SquashState<T>& st) {
    Vec<T> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = unsquash_destandardize(y[i], st);
    return out;
}

struct OtSpec {
    Vec<double> a, b, y;
    double plan_scale = 1.0;
};

// Solver budget used by the OT operators.
SolverParams ot_solver_params();

namespace detail {

// Returns P = plan_scale * Gamma^T (m x n). Anchors with zero target mass are
// dropped before solving and come back as zero rows.
template <class T>
Mat<T> ot_scaled_plan(const Vec<T>& xs, const OtSpec& spec, const SoftConfig& cfg) {
    const std::size_t n = xs.size(), m = spec.y.size();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < m; ++j)
        if (spec.b[j] > 0.0) keep.push_back(j);
    Vec<double> b;
    for (std::size_t j : keep) b.push_back(spec.b[j]);
    Mat<T> C(n, keep.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < keep.size(); ++k) {
            T d = xs[i] - spec.y[keep[k]];
            C(i, k) = d * d;
        }
    const SolverParams params = ot_solver_params();
    Mat<T> G = cfg.mode == Mode::Smooth ? sinkhorn(C, spec.a, b, cfg.tau, params)
                                        : dual_ot_lbfgs(C, spec.a, b, cfg.tau, cfg.mode, params);
    Mat<T> P(m, n, T(0));
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) P(keep[k], i) = G(i, k) * spec.plan_scale;
    return P;
}

template <class T>
T row_dot(const Mat<T>& P, std::size_t r, const Vec<T>& x, bool gated = true) {
    T s(0);
    for (std::size_t j = 0; j < P.cols; ++j) s += (gated ? P(r, j) : T(val(P(r, j)))) * x[j];
    return s;
}

}  // namespace detail

// n x n soft permutation; row i is the soft index of the i-th smallest element.
template <class T>
Mat<T> ot_argsort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "ot_argsort: need n >= 2");
    OtSpec spec;
    spec.a.assign(n, 1.0 / double(n));
    spec.b.assign(n, 1.0 / double(n));
    spec.y.resize(n);
    for (std::size_t j = 0; j < n; ++j) spec.y[j] = double(j) / double(n - 1);
    spec.plan_scale = double(n);
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::ot_scaled_plan(xs, spec, cfg);
}

template <class T>
Vec<T> ot_sort(const Vec<T>& x, const SoftConfig& cfg) {
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    SoftConfig raw = cfg;
    raw.standardize = false;
    Mat<T> P = ot_argsort(xs, raw);
    if (!cfg.gated_grad) detach(P);
    return unsquash_destandardize(matvec(P, xs), st);
}

// Rank 1 goes to the largest element.
template <class T>
Vec<T> ot_rank(const Vec<T>& x, const SoftConfig& cfg) {
    Mat<T> P = ot_argsort(x, cfg);
    const std::size_t n = x.size();
    Vec<T> r(n, T(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[j] += P(i, j) * double(n - i);
    return r;
}

template <class T>
struct TopK {
    Vec<T> values;
    Mat<T> perm;  // k x n, row r is the soft index of the (r+1)-th largest
};

template <class T>
TopK<T> ot_topk(const Vec<T>& x, std::size_t k, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (k < 1 || k >= n)
        throw Error(ErrorKind::InvalidArgument,
                    "ot_topk: k must satisfy 1 <= k < n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    OtSpec spec;
    spec.a.assign(n, 1.0 / double(n));
    spec.b.assign(k + 1, 1.0 / double(n));
    spec.b[k] = double(n - k) / double(n);
    spec.y.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) spec.y[j] = double(k - j) / double(k);
    spec.plan_scale = double(n);
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Mat<T> P = detail::ot_scaled_plan(xs, spec, cfg);
    TopK<T> out;
    out.perm = Mat<T>(k, n);
    out.values.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < n; ++j) out.perm(r, j) = P(r, j);
        out.values[r] = unsquash_destandardize(detail::row_dot(P, r, xs, cfg.gated_grad), st);
    }
    return out;
}

template <class T>
T ot_max(const Vec<T>& x, const SoftConfig& cfg) {
    return ot_topk(x, 1, cfg).values[0];
}

template <class T>
T ot_min(const Vec<T>& x, const SoftConfig& cfg) {
    Vec<T> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    return -ot_max(neg, cfg);
}

inline std::size_t quantile_lower_index(double q, std::size_t n) {
    long k = long(std::floor(q * double(n - 1)));
    return std::size_t(std::clamp(k, 0L, long(n) - 2));
}

template <class T>
T ot_quantile(const Vec<T>& x, double q, const SoftConfig& cfg, QuantileCombine combine = QuantileCombine::Midpoint) {
    validate(cfg);
    const std::size_t n = x.size();
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidArgument, "ot_quantile: q must lie in [0, 1]");
    if (n < 4)
        throw Error(ErrorKind::InvalidArgument,
                    "ot_quantile: the 4-anchor construction needs n >= 4; use a sort-based quantile for n=" +
                        std::to_string(n));
    const std::size_t k = quantile_lower_index(q, n);
    OtSpec spec;
    spec.a.assign(n, 1.0 / double(n));
    spec.b = {double(k) / double(n), 1.0 / double(n), 1.0 / double(n), double(n - k - 2) / double(n)};
    spec.y = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    spec.plan_scale = double(n);
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Mat<T> P = detail::ot_scaled_plan(xs, spec, cfg);
    T lo = unsquash_destandardize(detail::row_dot(P, 1, xs, cfg.gated_grad), st);
    T hi = unsquash_destandardize(detail::row_dot(P, 2, xs, cfg.gated_grad), st);
    switch (combine) {
        case QuantileCombine::Lower: return lo;
        case QuantileCombine::Upper: return hi;
        case QuantileCombine::Midpoint: return (lo + hi) * 0.5;
        case QuantileCombine::Interpolate: {
            double frac = q * double(n - 1) - double(k);
            return lo + (hi - lo) * frac;
        }
    }
    return lo;
}

// Interpolate gives the middle element for odd n and the midpoint for even n.
template <class T>
T ot_median(const Vec<T>& x, const SoftConfig& cfg) {
    return ot_quantile(x, 0.5, cfg, QuantileCombine::Interpolate);
}

}  // namespace softops

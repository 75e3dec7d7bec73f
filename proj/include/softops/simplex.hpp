#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "softops/core.hpp"
#include "softops/sigmoid.hpp"

namespace softops {

template <class T>
struct ProjectionResult {
    Vec<T> probs;
    T nu = T(0);
    std::vector<std::size_t> support;
};

namespace detail {

// Unique real root of t^3 + p t + q = 0 for p >= 0; largest real root otherwise.
template <class T>
T depressed_cubic_root(const T& p, const T& q) {
    T disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    if (disc >= T(0)) {
        T sq = sqrt(disc);
        T w = q > T(0) ? T(-q / 2.0 - sq) : T(-q / 2.0 + sq);
        if (w == T(0)) return T(0);
        T u = cbrt(w);
        return u - p / (3.0 * u);
    }
    // three real roots
    T r = sqrt(-p / 3.0);
    T arg = (3.0 * q) / (2.0 * p) * sqrt(-3.0 / p);
    if (arg > T(1)) arg = T(1);
    if (arg < T(-1)) arg = T(-1);
    return 2.0 * r * cos(acos(arg) / 3.0);
}

inline std::vector<std::size_t> argsort_desc(const Vec<double>& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    return idx;
}

// Threshold for the top-k active set, or NaN when the k-set equation has no root.
inline double solve_nu(Mode m, double tau, double s1, double s2, double s3, std::size_t k) {
    const double kk = static_cast<double>(k);
    const double mean = s1 / kk;
    switch (m) {
        case Mode::C0: return (s1 - tau) / kk;
        case Mode::C1: {
            double ss = s2 - kk * mean * mean;
            double r = tau * tau - ss;
            if (r < 0.0) return std::numeric_limits<double>::quiet_NaN();
            return mean - std::sqrt(r / kk);
        }
        case Mode::C2: {
            double c2 = s2 - kk * mean * mean;
            double c3 = s3 - 3.0 * mean * s2 + 2.0 * kk * mean * mean * mean;
            double t = depressed_cubic_root(3.0 * c2 / kk, (c3 - tau * tau * tau) / kk);
            return mean - t;
        }
        default: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

template <class T>
T phi(Mode m, const T& t, double tau) {
    if (t <= T(0)) return T(0);
    T u = t / tau;
    switch (m) {
        case Mode::C0: return u;
        case Mode::C1: return u * u;
        case Mode::C2: return u * u * u;
        default: break;
    }
    return T(0);
}

}  // namespace detail

// Regularized argmax over the unit simplex.
template <class T>
ProjectionResult<T> project(const Vec<T>& x, const SoftConfig& cfg) {
    detail::check_tau(cfg.tau);
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "project: empty input");
    for (const T& xi : x)
        if (!isfinite(xi)) throw Error(ErrorKind::InvalidArgument, "project: non-finite input");
    const double tau = cfg.tau;
    ProjectionResult<T> res;
    res.probs.assign(n, T(0));

    if (cfg.mode == Mode::Smooth) {
        T mx = *std::max_element(x.begin(), x.end());
        T z(0);
        for (std::size_t i = 0; i < n; ++i) {
            res.probs[i] = exp((x[i] - mx) / tau);
            z += res.probs[i];
        }
        for (auto& p : res.probs) p /= z;
        res.nu = mx + tau * log(z);
        res.support.resize(n);
        std::iota(res.support.begin(), res.support.end(), 0);
        return res;
    }

    Vec<double> xv = values(x);
    auto order = detail::argsort_desc(xv);
    double s1 = 0, s2 = 0, s3 = 0;
    std::size_t kstar = 0;
    double best_violation = std::numeric_limits<double>::infinity();
    std::size_t best_k = n;
    for (std::size_t k = 1; k <= n; ++k) {
        double xi = xv[order[k - 1]];
        s1 += xi;
        s2 += xi * xi;
        s3 += xi * xi * xi;
        double nu = detail::solve_nu(cfg.mode, tau, s1, s2, s3, k);
        if (std::isnan(nu)) continue;
        double lo = xv[order[k - 1]] - nu;
        double hi = k < n ? xv[order[k]] - nu : -1.0;
        if (lo >= 0.0 && hi < 0.0) {
            kstar = k;
            break;
        }
        double viol = std::max(0.0, -lo) + std::max(0.0, hi);
        if (viol < best_violation) {
            best_violation = viol;
            best_k = k;
        }
    }
    if (kstar == 0) kstar = best_k;

    // Recompute nu on the active set with the generic scalar type.
    T t1(0);
    for (std::size_t k = 0; k < kstar; ++k) t1 += x[order[k]];
    const double kk = static_cast<double>(kstar);
    T mean = t1 / kk;
    T nu(0);
    if (cfg.mode == Mode::C0) {
        nu = (t1 - tau) / kk;
    } else {
        T c2(0), c3(0);
        for (std::size_t k = 0; k < kstar; ++k) {
            T d = x[order[k]] - mean;
            c2 += d * d;
            c3 += d * d * d;
        }
        if (cfg.mode == Mode::C1) {
            T r = tau * tau - c2;
            if (r < T(0)) r = T(0);
            nu = mean - sqrt(r / kk);
        } else {
            nu = mean - detail::depressed_cubic_root<T>(3.0 * c2 / kk, (c3 - tau * tau * tau) / kk);
        }
    }
    res.nu = nu;
    for (std::size_t k = 0; k < kstar; ++k) {
        std::size_t i = order[k];
        res.probs[i] = detail::phi<T>(cfg.mode, T(x[i] - nu), tau);
        if (res.probs[i] > T(0)) res.support.push_back(i);
    }
    std::sort(res.support.begin(), res.support.end());
    return res;
}

// p_1 of project([0, x]) in closed form.
double project_pair_closed_form(double x, const SoftConfig& cfg);

}  // namespace softops

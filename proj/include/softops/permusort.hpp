#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "softops/core.hpp"
#include "softops/otrank.hpp"
#include "softops/solvers.hpp"

namespace softops {

// Regularized projection of y / tau onto the permutahedron P(z).
//   c0      Euclidean
//   smooth  KL divergence, solved on z shifted to a positive base
//   c1, c2  p-norm with conjugate exponent q = 3, 4
template <class T>
Vec<T> permutahedron_project(const Vec<T>& y, const Vec<T>& z, double tau, Mode mode) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidConfig, "permutahedron_project: tau must be > 0");
    const std::size_t n = y.size();
    if (z.size() != n) throw Error(ErrorKind::ShapeMismatch, "permutahedron_project: y and z differ in length");
    if (n == 0) return {};

    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::stable_sort(sigma.begin(), sigma.end(), [&](std::size_t a, std::size_t b) { return val(y[a]) > val(y[b]); });
    Vec<T> zd = z;
    std::stable_sort(zd.begin(), zd.end(), [](const T& a, const T& b) { return val(a) > val(b); });

    T shift(0);
    if (mode == Mode::Smooth) shift = T(1) - zd[n - 1];
    Vec<T> s(n), w(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = y[sigma[k]] / tau;
        w[k] = zd[k] + shift;
    }

    IsoLoss loss = IsoLoss::euclidean();
    if (mode == Mode::Smooth) loss = IsoLoss::logkl();
    if (mode == Mode::C1) loss = IsoLoss::pnorm(3.0);
    if (mode == Mode::C2) loss = IsoLoss::pnorm(4.0);
    Vec<T> v = pav_isotonic(s, Direction::Decreasing, loss, &w);

    Vec<T> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        T d = s[k] - v[k];
        T p = d;
        switch (mode) {
            case Mode::C0: p = d; break;
            case Mode::Smooth: p = exp(d) - shift; break;
            case Mode::C1: p = d * fabs(d); break;
            case Mode::C2: p = d * d * d; break;
        }
        out[sigma[k]] = p;
    }
    return out;
}

// Ascending soft sort: projection of [1..n] onto P(x).
template <class T>
Vec<T> fastsoftsort_sort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "fastsoftsort_sort: empty input");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = T(double(i + 1));
    return unsquash_destandardize(permutahedron_project(w, xs, cfg.tau, cfg.mode), st);
}

// Projection of -x onto P([1..n]); rank 1 goes to the largest element.
template <class T>
Vec<T> fastsoftsort_rank(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "fastsoftsort_rank: empty input");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> neg(n), lab(n);
    for (std::size_t i = 0; i < n; ++i) {
        neg[i] = -xs[i];
        lab[i] = T(double(i + 1));
    }
    return permutahedron_project(neg, lab, cfg.tau, cfg.mode);
}

// ---------------------------------------------------------------- SmoothSort

struct SmoothBounds {
    Vec<double> b_tilde;  // b_tilde[k-1] = tau log e_k(exp(z / tau))
    double tau = 1.0;
};

SmoothBounds smooth_bounds(const Vec<double>& z, double tau);

struct SmoothSortInfo {
    Vec<double> beta;
    double dual_value = 0.0;
    double grad_inf = 0.0;
    int iters = 0;
};

// Entropic permutahedron LP with smoothed majorization bounds, solved in the dual.
// Output is ordered like y (largest y gets the largest entry).
Vec<double> smoothsort_project(const Vec<double>& y, const Vec<double>& z, double tau, SmoothSortInfo* info = nullptr);

Vec<double> smoothsort_sort_values(const Vec<double>& x, const SoftConfig& cfg);
Vec<double> smoothsort_rank_values(const Vec<double>& x, const SoftConfig& cfg);

namespace detail {

// Values at the double point; the tangent is a central difference along the
// input tangent direction (one JVP costs two extra solves).
template <class T, class F>
Vec<T> fd_forward(const Vec<T>& x, F&& f) {
    Vec<double> xv = values(x);
    Vec<double> y = f(xv);
    if constexpr (std::is_same_v<T, double>) {
        return y;
    } else {
        Vec<double> dir(x.size());
        double dmax = 0.0, xmax = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            dir[j] = tan_of(x[j]);
            dmax = std::max(dmax, std::fabs(dir[j]));
            xmax = std::max(xmax, std::fabs(xv[j]));
        }
        Vec<T> out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = T(y[i], 0.0);
        if (dmax == 0.0) return out;
        // one central difference along the tangent direction
        const double h = 1e-5 * (1.0 + xmax) / dmax;
        Vec<double> xp = xv, xm = xv;
        for (std::size_t j = 0; j < x.size(); ++j) {
            xp[j] += h * dir[j];
            xm[j] -= h * dir[j];
        }
        Vec<double> yp = f(xp), ym = f(xm);
        for (std::size_t i = 0; i < y.size(); ++i) out[i].d = (yp[i] - ym[i]) / (2.0 * h);
        return out;
    }
}

}  // namespace detail

template <class T>
Vec<T> smoothsort_sort(const Vec<T>& x, const SoftConfig& cfg) {
    return detail::fd_forward(x, [&](const Vec<double>& v) { return smoothsort_sort_values(v, cfg); });
}

template <class T>
Vec<T> smoothsort_rank(const Vec<T>& x, const SoftConfig& cfg) {
    return detail::fd_forward(x, [&](const Vec<double>& v) { return smoothsort_rank_values(v, cfg); });
}

}  // namespace softops

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "softops/core.hpp"
#include "softops/elementwise.hpp"
#include "softops/otrank.hpp"
#include "softops/simplex.hpp"

namespace softops {

namespace detail {

template <class T>
Vec<T> sorted_copy(const Vec<T>& x) {
    Vec<T> s = x;
    std::stable_sort(s.begin(), s.end(), [](const T& a, const T& b) { return val(a) < val(b); });
    return s;
}

// project(-|anchor - x|)
template <class T>
Vec<T> softsort_row(const T& anchor, const Vec<T>& xs, const SoftConfig& cfg) {
    Vec<T> c(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) c[j] = -fabs(anchor - xs[j]);
    return project(c, cfg).probs;
}

template <class T>
Mat<T> softsort_matrix(const Vec<T>& xs, const SoftConfig& cfg) {
    const std::size_t n = xs.size();
    Vec<T> s = sorted_copy(xs);
    Mat<T> P(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec<T> row = softsort_row(s[i], xs, cfg);
        for (std::size_t j = 0; j < n; ++j) P(i, j) = row[j];
    }
    return P;
}

template <class T>
Vec<T> neuralsort_row_sum(const Vec<T>& xs, const SoftConfig& cfg) {
    const std::size_t n = xs.size();
    Vec<T> r(n, T(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) r[i] += abs(T(xs[i] - xs[j]), cfg);
    return r;
}

// project(coef * x - A 1)
template <class T>
Vec<T> neuralsort_row(double coef, const Vec<T>& xs, const Vec<T>& a1, const SoftConfig& cfg) {
    Vec<T> c(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) c[j] = coef * xs[j] - a1[j];
    return project(c, cfg).probs;
}

template <class T>
Mat<T> neuralsort_matrix(const Vec<T>& xs, const SoftConfig& cfg) {
    const std::size_t n = xs.size();
    Vec<T> a1 = neuralsort_row_sum(xs, cfg);
    Mat<T> P(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec<T> row = neuralsort_row(2.0 * double(i + 1) - double(n) - 1.0, xs, a1, cfg);
        for (std::size_t j = 0; j < n; ++j) P(i, j) = row[j];
    }
    return P;
}

template <class T>
T apply_row(const Vec<T>& p, const Vec<T>& xs, const SquashState<T>& st, bool gated) {
    T s(0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        T w = p[j];
        if (!gated) w = T(val(w));
        s += w * xs[j];
    }
    return unsquash_destandardize(s, st);
}

template <class T>
Vec<T> apply_matrix(Mat<T> P, const Vec<T>& xs, const SquashState<T>& st, bool gated) {
    if (!gated) detach(P);
    return unsquash_destandardize(matvec(P, xs), st);
}

template <class T>
T combine_quantile(const T& lo, const T& hi, double frac, QuantileCombine c) {
    switch (c) {
        case QuantileCombine::Lower: return lo;
        case QuantileCombine::Upper: return hi;
        case QuantileCombine::Midpoint: return (lo + hi) * 0.5;
        case QuantileCombine::Interpolate: return lo + (hi - lo) * frac;
    }
    return lo;
}

inline void check_nonempty(std::size_t n, const char* op) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, std::string(op) + ": empty input");
}

inline void check_q(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile: q must lie in [0, 1]");
}

}  // namespace detail

// ---------------------------------------------------------------- SoftSort

// Row i is the soft index of the i-th smallest element.
template <class T>
Mat<T> softsort_argsort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_argsort");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::softsort_matrix(xs, cfg);
}

// Row i is a distribution over the ascending sorted positions of element i.
template <class T>
Mat<T> softsort_argrank(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_argrank");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    const std::size_t n = xs.size();
    Vec<T> s = detail::sorted_copy(xs);
    Mat<T> R(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec<T> row = detail::softsort_row(xs[i], s, cfg);
        for (std::size_t j = 0; j < n; ++j) R(i, j) = row[j];
    }
    return R;
}

template <class T>
Vec<T> softsort_sort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_sort");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::apply_matrix(detail::softsort_matrix(xs, cfg), xs, st, cfg.gated_grad);
}

template <class T>
Vec<T> softsort_rank(const Vec<T>& x, const SoftConfig& cfg) {
    Mat<T> R = softsort_argrank(x, cfg);
    const std::size_t n = x.size();
    Vec<T> r(n, T(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i] += R(i, j) * double(n - j);
    return r;
}

template <class T>
Vec<T> softsort_argmax(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_argmax");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return project(xs, cfg).probs;
}

template <class T>
Vec<T> softsort_argmin(const Vec<T>& x, const SoftConfig& cfg) {
    Vec<T> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    return softsort_argmax(neg, cfg);
}

template <class T>
T softsort_max(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_max");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::apply_row(project(xs, cfg).probs, xs, st, cfg.gated_grad);
}

template <class T>
T softsort_min(const Vec<T>& x, const SoftConfig& cfg) {
    Vec<T> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    return -softsort_max(neg, cfg);
}

// Rows r = 0..k-1 select the (r+1)-th largest element.
template <class T>
TopK<T> softsort_topk(const Vec<T>& x, std::size_t k, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "softsort_topk: k must satisfy 1 <= k <= n");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> s = detail::sorted_copy(xs);
    TopK<T> out;
    out.perm = Mat<T>(k, n);
    out.values.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        Vec<T> row = detail::softsort_row(s[n - 1 - r], xs, cfg);
        for (std::size_t j = 0; j < n; ++j) out.perm(r, j) = row[j];
        out.values[r] = detail::apply_row(row, xs, st, cfg.gated_grad);
    }
    return out;
}

template <class T>
T softsort_quantile(const Vec<T>& x, double q, const SoftConfig& cfg,
                    QuantileCombine combine = QuantileCombine::Midpoint) {
    validate(cfg);
    detail::check_nonempty(x.size(), "softsort_quantile");
    detail::check_q(q);
    const std::size_t n = x.size();
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> s = detail::sorted_copy(xs);
    const double pos = q * double(n - 1);
    const std::size_t lo = std::size_t(std::floor(pos)), hi = std::size_t(std::ceil(pos));
    T vlo = detail::apply_row(detail::softsort_row(s[lo], xs, cfg), xs, st, cfg.gated_grad);
    T vhi = detail::apply_row(detail::softsort_row(s[hi], xs, cfg), xs, st, cfg.gated_grad);
    return detail::combine_quantile(vlo, vhi, pos - double(lo), combine);
}

template <class T>
T softsort_median(const Vec<T>& x, const SoftConfig& cfg) {
    return softsort_quantile(x, 0.5, cfg, QuantileCombine::Interpolate);
}

// ---------------------------------------------------------------- NeuralSort

// Row i selects the i-th smallest element.
template <class T>
Mat<T> neuralsort_argsort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "neuralsort_argsort");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::neuralsort_matrix(xs, cfg);
}

namespace detail {

template <class T>
Vec<T> neuralsort_select(const Vec<T>& x, double coef, const SoftConfig& cfg, SquashState<T>* st_out = nullptr,
                         Vec<T>* xs_out = nullptr) {
    validate(cfg);
    check_nonempty(x.size(), "neuralsort");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> row = neuralsort_row(coef, xs, neuralsort_row_sum(xs, cfg), cfg);
    if (st_out) *st_out = st;
    if (xs_out) *xs_out = xs;
    return row;
}

// Row coefficient selecting the sorted position idx (0-based, ascending).
inline double neuralsort_coef(std::size_t idx, std::size_t n) { return 2.0 * double(idx) - double(n - 1); }

}  // namespace detail

template <class T>
Vec<T> neuralsort_argmax(const Vec<T>& x, const SoftConfig& cfg) {
    return detail::neuralsort_select(x, double(x.size()) - 1.0, cfg);
}

template <class T>
Vec<T> neuralsort_argmin(const Vec<T>& x, const SoftConfig& cfg) {
    return detail::neuralsort_select(x, -(double(x.size()) - 1.0), cfg);
}

// upper = true uses the ceiling index, otherwise the floor index.
template <class T>
Vec<T> neuralsort_argquantile(const Vec<T>& x, double q, const SoftConfig& cfg, bool upper) {
    detail::check_q(q);
    const std::size_t n = x.size();
    const double pos = q * double(n == 0 ? 0 : n - 1);
    const double idx = upper ? std::ceil(pos) : std::floor(pos);
    const double c = double(n) - 1.0 - 2.0 * idx;
    return detail::neuralsort_select(x, -c, cfg);
}

template <class T>
Vec<T> neuralsort_argmedian(const Vec<T>& x, const SoftConfig& cfg) {
    return detail::neuralsort_select(x, 0.0, cfg);
}

template <class T>
Vec<T> neuralsort_sort(const Vec<T>& x, const SoftConfig& cfg) {
    validate(cfg);
    detail::check_nonempty(x.size(), "neuralsort_sort");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    return detail::apply_matrix(detail::neuralsort_matrix(xs, cfg), xs, st, cfg.gated_grad);
}

// Column-normalized argsort matrix applied to the descending labels.
template <class T>
Vec<T> neuralsort_rank(const Vec<T>& x, const SoftConfig& cfg) {
    const std::size_t n = x.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "neuralsort_rank: need n >= 2");
    Mat<T> P = neuralsort_argsort(x, cfg);
    Vec<T> r(n, T(0));
    for (std::size_t j = 0; j < n; ++j) {
        T cs(0);
        for (std::size_t i = 0; i < n; ++i) cs += P(i, j);
        if (!(val(cs) > 0.0))
            throw Error(ErrorKind::InvalidArgument,
                        "neuralsort_rank: column " + std::to_string(j) +
                            " of the argsort matrix is zero and cannot be normalized (mode " + name(cfg.mode) +
                            ", tau " + fmt_sci(cfg.tau) + ")");
        for (std::size_t i = 0; i < n; ++i) r[j] += P(i, j) / cs * double(n - i);
    }
    return r;
}

template <class T>
T neuralsort_max(const Vec<T>& x, const SoftConfig& cfg) {
    SquashState<T> st;
    Vec<T> xs;
    Vec<T> p = detail::neuralsort_select(x, double(x.size()) - 1.0, cfg, &st, &xs);
    return detail::apply_row(p, xs, st, cfg.gated_grad);
}

template <class T>
T neuralsort_min(const Vec<T>& x, const SoftConfig& cfg) {
    SquashState<T> st;
    Vec<T> xs;
    Vec<T> p = detail::neuralsort_select(x, -(double(x.size()) - 1.0), cfg, &st, &xs);
    return detail::apply_row(p, xs, st, cfg.gated_grad);
}

template <class T>
TopK<T> neuralsort_topk(const Vec<T>& x, std::size_t k, const SoftConfig& cfg) {
    validate(cfg);
    const std::size_t n = x.size();
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "neuralsort_topk: k must satisfy 1 <= k <= n");
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> a1 = detail::neuralsort_row_sum(xs, cfg);
    TopK<T> out;
    out.perm = Mat<T>(k, n);
    out.values.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        Vec<T> row = detail::neuralsort_row(detail::neuralsort_coef(n - 1 - r, n), xs, a1, cfg);
        for (std::size_t j = 0; j < n; ++j) out.perm(r, j) = row[j];
        out.values[r] = detail::apply_row(row, xs, st, cfg.gated_grad);
    }
    return out;
}

template <class T>
T neuralsort_quantile(const Vec<T>& x, double q, const SoftConfig& cfg,
                      QuantileCombine combine = QuantileCombine::Midpoint) {
    validate(cfg);
    detail::check_q(q);
    detail::check_nonempty(x.size(), "neuralsort_quantile");
    const std::size_t n = x.size();
    const double pos = q * double(n - 1);
    auto [xs, st] = standardize_squash(x, cfg.standardize);
    Vec<T> a1 = detail::neuralsort_row_sum(xs, cfg);
    auto value_at = [&](double idx) {
        Vec<T> row = detail::neuralsort_row(-(double(n) - 1.0 - 2.0 * idx), xs, a1, cfg);
        return detail::apply_row(row, xs, st, cfg.gated_grad);
    };
    return detail::combine_quantile(value_at(std::floor(pos)), value_at(std::ceil(pos)), pos - std::floor(pos),
                                    combine);
}

template <class T>
T neuralsort_median(const Vec<T>& x, const SoftConfig& cfg) {
    return neuralsort_quantile(x, 0.5, cfg, QuantileCombine::Interpolate);
}

}  // namespace softops

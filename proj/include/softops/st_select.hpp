#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "softops/axiswise.hpp"
#include "softops/core.hpp"

namespace softops {

// ---------------------------------------------------------------- straight-through

// Value from hard, derivative from soft: sg(f(x)) + f_soft(x) - sg(f_soft(x)).
// hard maps Vec<double>; soft must accept Vec<Dual>.
template <class H, class S>
struct StFunction {
    H hard;
    S soft;

    Vec<double> operator()(const Vec<double>& x) const { return hard(x); }

    Vec<Dual> operator()(const Vec<Dual>& x) const {
        Vec<double> h = hard(values(x));
        Vec<Dual> s = soft(x);
        if (h.size() != s.size())
            throw Error(ErrorKind::ShapeMismatch, "st: hard returns " + std::to_string(h.size()) +
                                                      " outputs, soft returns " + std::to_string(s.size()));
        Vec<Dual> out(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) out[i] = Dual(h[i], s[i].d);
        return out;
    }
};

template <class H, class S>
StFunction<H, S> st(H hard, S soft) {
    return {std::move(hard), std::move(soft)};
}

// Scalar form; soft is called with a Dual.
template <class H, class S>
struct StScalar {
    H hard;
    S soft;
    double operator()(double x) const { return hard(x); }
    Dual operator()(const Dual& x) const { return Dual(hard(x.v), soft(x).d); }
};

template <class H, class S>
StScalar<H, S> st_scalar(H hard, S soft) {
    return {std::move(hard), std::move(soft)};
}

// ---------------------------------------------------------------- soft selection

namespace detail {

template <class T>
void check_soft_index(const Vec<T>& p, std::size_t n, const char* op) {
    if (p.size() != n)
        throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": soft index has length " + std::to_string(p.size()) +
                                                  ", expected " + std::to_string(n));
    double s = 0.0;
    for (const T& v : p) {
        if (val(v) < -1e-9 || val(v) > 1.0 + 1e-9)
            throw Error(ErrorKind::InvalidArgument, std::string(op) + ": soft index entry outside [0, 1]");
        s += val(v);
    }
    if (std::fabs(s - 1.0) > 1e-6) throw Error(ErrorKind::InvalidArgument, std::string(op) + ": soft index does not sum to 1");
}

template <class T>
void check_window(std::size_t starts, std::size_t n, std::size_t len, const char* op) {
    if (len == 0 || len > n)
        throw Error(ErrorKind::InvalidArgument, std::string(op) + ": window length " + std::to_string(len) +
                                                    " overruns a dimension of size " + std::to_string(n));
    if (starts > n - len + 1)
        throw Error(ErrorKind::InvalidArgument, std::string(op) + ": " + std::to_string(starts) +
                                                    " window starts overrun a dimension of size " + std::to_string(n));
    if (starts != n - len + 1)
        throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": expected " + std::to_string(n - len + 1) +
                                                  " window starts, got " + std::to_string(starts));
}

}  // namespace detail

// E_{j~p}[x_j]
template <class T>
T take(const Vec<T>& x, const Vec<T>& p) {
    detail::check_soft_index(p, x.size(), "take");
    T s(0);
    for (std::size_t j = 0; j < x.size(); ++j) s += p[j] * x[j];
    return s;
}

template <class T>
T dynamic_index_in_dim(const Vec<T>& x, const Vec<T>& p) {
    return take(x, p);
}

// One soft index per row of P.
template <class T>
Vec<T> take_along_axis(const Vec<T>& x, const Mat<T>& P) {
    if (P.cols != x.size()) throw Error(ErrorKind::ShapeMismatch, "take_along_axis: matrix width differs from x");
    Vec<T> out(P.rows);
    Vec<T> row(P.cols);
    for (std::size_t i = 0; i < P.rows; ++i) {
        for (std::size_t j = 0; j < P.cols; ++j) row[j] = P(i, j);
        out[i] = take(x, row);
    }
    return out;
}

// Elementwise mixture of the candidate arrays, weighted by p.
template <class T>
Vec<T> choose(const Vec<T>& p, const std::vector<Vec<T>>& choices) {
    detail::check_soft_index(p, choices.size(), "choose");
    const std::size_t m = choices.empty() ? 0 : choices[0].size();
    Vec<T> out(m, T(0));
    for (std::size_t k = 0; k < choices.size(); ++k) {
        if (choices[k].size() != m) throw Error(ErrorKind::ShapeMismatch, "choose: candidate arrays differ in length");
        for (std::size_t i = 0; i < m; ++i) out[i] += p[k] * choices[k][i];
    }
    return out;
}

// sum_s p_s x[s : s + len], with one probability per admissible start.
template <class T>
Vec<T> dynamic_slice_in_dim(const Vec<T>& x, const Vec<T>& p_start, std::size_t len) {
    detail::check_window<T>(p_start.size(), x.size(), len, "dynamic_slice_in_dim");
    detail::check_soft_index(p_start, p_start.size(), "dynamic_slice_in_dim");
    Vec<T> out(len, T(0));
    for (std::size_t s = 0; s < p_start.size(); ++s)
        for (std::size_t i = 0; i < len; ++i) out[i] += p_start[s] * x[s + i];
    return out;
}

// Independent soft starts along rows and columns.
template <class T>
Mat<T> dynamic_slice(const Mat<T>& x, const Vec<T>& p_row, const Vec<T>& p_col, std::size_t rows, std::size_t cols) {
    detail::check_window<T>(p_row.size(), x.rows, rows, "dynamic_slice");
    detail::check_window<T>(p_col.size(), x.cols, cols, "dynamic_slice");
    detail::check_soft_index(p_row, p_row.size(), "dynamic_slice");
    detail::check_soft_index(p_col, p_col.size(), "dynamic_slice");
    Mat<T> out(rows, cols);
    for (std::size_t s = 0; s < p_row.size(); ++s)
        for (std::size_t t = 0; t < p_col.size(); ++t) {
            T w = p_row[s] * p_col[t];
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) out(i, j) += w * x(s + i, t + j);
        }
    return out;
}

// ---------------------------------------------------------------- gating switch

// Axiswise value op whose permutation matrix is either differentiated (gated)
// or frozen (integration style).
struct GatedOp {
    std::string op;
    SoftConfig cfg;

    template <class T>
    Vec<T> operator()(const Vec<T>& x) const {
        if (op == "sort") return sort(x, cfg);
        if (op == "max") return {max(x, cfg)};
        if (op == "min") return {min(x, cfg)};
        return {median(x, cfg)};
    }
};

inline GatedOp gated_grad_switch(const std::string& op, SoftConfig cfg, bool gated) {
    if (op != "sort" && op != "max" && op != "min" && op != "median")
        throw Error(ErrorKind::InvalidArgument, "gated_grad_switch: op must be sort, max, min or median (got '" + op + "')");
    Method m = cfg.method.value_or(op == "max" || op == "min" ? Method::SoftSort : Method::NeuralSort);
    if (m == Method::FastSoftSort || m == Method::SmoothSort)
        throw Error(ErrorKind::Unsupported,
                    std::string("gated_grad_switch: ") + name(m) + " has no permutation matrix to freeze");
    cfg.method = m;
    cfg.gated_grad = gated;
    return {op, cfg};
}

// ---------------------------------------------------------------- safe math

inline constexpr double kDefaultGradMax = 1e6;

namespace detail {

inline double clamp_slope(double s, double gmax) {
    if (std::isnan(s)) return 0.0;
    return std::clamp(s, -gmax, gmax);
}

inline double with_slope(double, double value, double) { return value; }
inline Dual with_slope(const Dual& x, double value, double slope) { return Dual(value, slope * x.d); }

}  // namespace detail

template <class T>
T safe_sqrt(const T& x, double gmax = kDefaultGradMax) {
    const double v = val(x);
    if (v < 0.0) throw Error(ErrorKind::InvalidArgument, "safe_sqrt: negative argument");
    const double r = std::sqrt(v);
    return detail::with_slope(x, r, r > 0.0 ? detail::clamp_slope(0.5 / r, gmax) : gmax);
}

template <class T>
T safe_log(const T& x, double gmax = kDefaultGradMax) {
    const double v = val(x);
    if (v < 0.0) throw Error(ErrorKind::InvalidArgument, "safe_log: negative argument");
    return detail::with_slope(x, std::log(v), v > 0.0 ? detail::clamp_slope(1.0 / v, gmax) : gmax);
}

template <class T>
T safe_arcsin(const T& x, double gmax = kDefaultGradMax) {
    const double v = val(x);
    if (v < -1.0 || v > 1.0) throw Error(ErrorKind::InvalidArgument, "safe_arcsin: argument outside [-1, 1]");
    const double d = std::sqrt(1.0 - v * v);
    return detail::with_slope(x, std::asin(v), d > 0.0 ? detail::clamp_slope(1.0 / d, gmax) : gmax);
}

template <class T>
T safe_arccos(const T& x, double gmax = kDefaultGradMax) {
    const double v = val(x);
    if (v < -1.0 || v > 1.0) throw Error(ErrorKind::InvalidArgument, "safe_arccos: argument outside [-1, 1]");
    const double d = std::sqrt(1.0 - v * v);
    return detail::with_slope(x, std::acos(v), d > 0.0 ? detail::clamp_slope(-1.0 / d, gmax) : -gmax);
}

inline double safe_div(double a, double b, double = kDefaultGradMax) {
    if (b == 0.0) throw Error(ErrorKind::InvalidArgument, "safe_div: division by zero");
    return a / b;
}

inline Dual safe_div(const Dual& a, const Dual& b, double gmax = kDefaultGradMax) {
    const double q = safe_div(a.v, b.v);
    const double da = detail::clamp_slope(1.0 / b.v, gmax), db = detail::clamp_slope(-a.v / (b.v * b.v), gmax);
    return Dual(q, da * a.d + db * b.d);
}

// Euclidean norm; the gradient at the zero vector is taken to be zero.
template <class T>
T safe_norm(const Vec<T>& x, double gmax = kDefaultGradMax) {
    double s = 0.0;
    for (const T& v : x) s += val(v) * val(v);
    const double r = std::sqrt(s);
    if constexpr (std::is_same_v<T, double>) {
        return r;
    } else {
        double d = 0.0;
        if (r > 0.0)
            for (const T& v : x) d += detail::clamp_slope(v.v / r, gmax) * v.d;
        return Dual(r, d);
    }
}

}  // namespace softops

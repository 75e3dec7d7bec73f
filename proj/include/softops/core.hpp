#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace softops {

enum class Mode { Smooth, C0, C1, C2 };
enum class Method { OT, SoftSort, NeuralSort, FastSoftSort, SmoothSort, Network };

enum class ErrorKind { InvalidConfig, InvalidArgument, ShapeMismatch, NoConvergence, Unsupported };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct SoftConfig {
    double tau = 0.1;
    Mode mode = Mode::Smooth;
    std::optional<Method> method;  // unset: per-operation default
    bool standardize = true;
    bool gated_grad = true;
    int round_k = 3;
    double atol = 1e-8;
    double rtol = 1e-5;
};

inline std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Throws on tau <= 0, negative tolerances, round_k < 1, or SmoothSort outside smooth mode.
void validate(const SoftConfig& cfg);

const char* name(Mode m);
const char* name(Method m);
Mode parse_mode(const std::string& s);
Method parse_method(const std::string& s);

// Forward-mode dual number. Ordering and equality look at the value only.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value) {}
    constexpr Dual(double value, double tangent) : v(value), d(tangent) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) { *this = Dual(v / o.v, (d * o.v - v * o.d) / (o.v * o.v)); return *this; }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator+(const Dual& a) { return a; }

inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

inline Dual exp(const Dual& a) { double e = std::exp(a.v); return {e, e * a.d}; }
inline Dual expm1(const Dual& a) { return {std::expm1(a.v), std::exp(a.v) * a.d}; }
inline Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
inline Dual log1p(const Dual& a) { return {std::log1p(a.v), a.d / (1.0 + a.v)}; }
inline Dual sqrt(const Dual& a) { double s = std::sqrt(a.v); return {s, a.d / (2.0 * s)}; }
inline Dual cbrt(const Dual& a) { double c = std::cbrt(a.v); return {c, a.d / (3.0 * c * c)}; }
inline Dual pow(const Dual& a, double p) { return {std::pow(a.v, p), p * std::pow(a.v, p - 1.0) * a.d}; }
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual tanh(const Dual& a) { double t = std::tanh(a.v); return {t, (1.0 - t * t) * a.d}; }
inline Dual sinh(const Dual& a) { return {std::sinh(a.v), std::cosh(a.v) * a.d}; }
inline Dual cosh(const Dual& a) { return {std::cosh(a.v), std::sinh(a.v) * a.d}; }
inline Dual asinh(const Dual& a) { return {std::asinh(a.v), a.d / std::sqrt(a.v * a.v + 1.0)}; }
inline Dual asin(const Dual& a) { return {std::asin(a.v), a.d / std::sqrt(1.0 - a.v * a.v)}; }
inline Dual acos(const Dual& a) { return {std::acos(a.v), -a.d / std::sqrt(1.0 - a.v * a.v)}; }
inline Dual fabs(const Dual& a) { return a.v < 0 ? -a : a; }
inline Dual abs(const Dual& a) { return fabs(a); }
inline bool isfinite(const Dual& a) { return std::isfinite(a.v) && std::isfinite(a.d); }

// double overloads so unqualified calls in generic code resolve for both scalar types
inline double exp(double a) { return std::exp(a); }
inline double expm1(double a) { return std::expm1(a); }
inline double log(double a) { return std::log(a); }
inline double log1p(double a) { return std::log1p(a); }
inline double sqrt(double a) { return std::sqrt(a); }
inline double cbrt(double a) { return std::cbrt(a); }
inline double pow(double a, double p) { return std::pow(a, p); }
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }
inline double tanh(double a) { return std::tanh(a); }
inline double sinh(double a) { return std::sinh(a); }
inline double cosh(double a) { return std::cosh(a); }
inline double asinh(double a) { return std::asinh(a); }
inline double asin(double a) { return std::asin(a); }
inline double acos(double a) { return std::acos(a); }
inline double fabs(double a) { return std::fabs(a); }
inline double abs(double a) { return std::fabs(a); }
inline bool isfinite(double a) { return std::isfinite(a); }

inline double val(double x) { return x; }
inline double val(const Dual& x) { return x.v; }
inline double tan_of(double) { return 0.0; }
inline double tan_of(const Dual& x) { return x.d; }

template <class T>
using Vec = std::vector<T>;

template <class T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), a(r * c, fill) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
};

template <class T>
Mat<T> transpose(const Mat<T>& m) {
    Mat<T> t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

template <class T, class U>
auto matvec(const Mat<T>& m, const Vec<U>& x) {
    using R = decltype(T() * U());
    if (m.cols != x.size()) throw Error(ErrorKind::ShapeMismatch, "matvec: shape mismatch");
    Vec<R> y(m.rows, R(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        R s(0);
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
Mat<double> values(const Mat<T>& m) {
    Mat<double> out(m.rows, m.cols);
    for (std::size_t k = 0; k < m.a.size(); ++k) out.a[k] = val(m.a[k]);
    return out;
}

template <class T>
Vec<double> values(const Vec<T>& x) {
    Vec<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = val(x[k]);
    return out;
}

template <class T>
Vec<T> lift(const Vec<double>& x) {
    return Vec<T>(x.begin(), x.end());
}

// Zeroes tangents; a stop-gradient for forward mode.
inline void detach(Mat<double>&) {}
inline void detach(Mat<Dual>& m) {
    for (auto& v : m.a) v.d = 0.0;
}

struct SoftBool {
    double p = 0.5;
    bool valid() const { return p >= 0.0 && p <= 1.0; }
};

struct SoftIndex {
    Vec<double> probs;
    bool valid(double tol = 1e-9) const;
};

struct SoftPerm {
    Mat<double> mat;
    bool row_stochastic = true;
    bool col_stochastic = false;
    bool valid(double tol = 1e-6) const;
};

// Values copied, tangents zero.
Vec<Dual> dual_lift(const Vec<double>& x);

// Column j is the forward pass seeded with e_j.
template <class F>
Mat<double> jacobian(F&& f, const Vec<double>& x, std::optional<std::size_t> arity = std::nullopt) {
    if (arity && *arity != x.size())
        throw Error(ErrorKind::ShapeMismatch, "jacobian: f expects " + std::to_string(*arity) +
                                                  " inputs, got " + std::to_string(x.size()));
    Mat<double> J;
    for (std::size_t j = 0; j < x.size(); ++j) {
        Vec<Dual> xd = dual_lift(x);
        xd[j].d = 1.0;
        Vec<Dual> y = f(xd);
        if (j == 0) J = Mat<double>(y.size(), x.size());
        if (y.size() != J.rows) throw Error(ErrorKind::ShapeMismatch, "jacobian: output size changed between seeds");
        for (std::size_t i = 0; i < y.size(); ++i) J(i, j) = y[i].d;
    }
    return J;
}

// Central differences with h = rel_h * (1 + |x_j|).
template <class F>
Mat<double> fd_jacobian(F&& f, const Vec<double>& x, double rel_h = 1e-6) {
    Mat<double> J;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double h = rel_h * (1.0 + std::fabs(x[j]));
        Vec<double> xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Vec<double> yp = f(xp), ym = f(xm);
        if (j == 0) J = Mat<double>(yp.size(), x.size());
        for (std::size_t i = 0; i < yp.size(); ++i) J(i, j) = (yp[i] - ym[i]) / (2.0 * h);
    }
    return J;
}

}  // namespace softops

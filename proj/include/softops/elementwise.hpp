#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "softops/sigmoid.hpp"

namespace softops {

enum class ReluStyle { Integration, Gating };
enum class Cmp { Greater, GtrEqual, Less, LessEqual, Equal, NotEqual, IsClose };

template <class T>
T sign(const T& x, const SoftConfig& cfg) {
    return 2.0 * heaviside(x, cfg) - 1.0;
}

template <class T>
T abs(const T& x, const SoftConfig& cfg) {
    return sign(x, cfg) * x;
}

inline int effective_round_k(const SoftConfig& cfg) {
    int k = cfg.round_k;
    if (cfg.tau > 0.4) k = std::max(k, static_cast<int>(std::ceil(5.0 * cfg.tau)) + 1);
    return k;
}

template <class T>
T round(const T& x, const SoftConfig& cfg) {
    if (cfg.round_k < 1) throw Error(ErrorKind::InvalidConfig, "round_k must be >= 1");
    const int K = effective_round_k(cfg);
    const double fl = std::floor(val(x));
    T out(0);
    for (int j = -K; j <= K; ++j) {
        double k = fl + j;
        out += k * (heaviside(T(x - (k - 0.5)), cfg) - heaviside(T(x - (k + 0.5)), cfg));
    }
    return out;
}

template <class T>
T relu(const T& x, const SoftConfig& cfg, ReluStyle style = ReluStyle::Integration) {
    if (style == ReluStyle::Gating) return x * heaviside(x, cfg);
    detail::check_tau(cfg.tau);
    if (cfg.mode == Mode::Smooth) {
        T z = x / cfg.tau;
        T pos = z > T(0) ? z : T(0);
        return cfg.tau * (pos + log1p(exp(-fabs(z))));
    }
    const double w = 5.0 * cfg.tau;
    if (x <= T(-w)) return T(0);
    if (x >= T(w)) return x;
    return w * detail::g_poly_int<T>(cfg.mode, T(x / w));
}

template <class T>
T clip(const T& x, double a, double b, const SoftConfig& cfg, ReluStyle style = ReluStyle::Integration) {
    if (a > b) throw Error(ErrorKind::InvalidArgument, "clip: lower bound exceeds upper bound");
    return a + relu(T(x - a), cfg, style) - relu(T(x - b), cfg, style);
}

template <class T>
T compare(Cmp kind, const T& x, const T& y, const SoftConfig& cfg) {
    constexpr double eps = DBL_EPSILON;
    switch (kind) {
        case Cmp::Greater: return heaviside(T(x - y - eps), cfg);
        case Cmp::GtrEqual: return heaviside(T(x - y + eps), cfg);
        case Cmp::Less: return heaviside(T(y - x - eps), cfg);
        case Cmp::LessEqual: return heaviside(T(y - x + eps), cfg);
        case Cmp::Equal: return 2.0 * compare(Cmp::LessEqual, abs(T(x - y), cfg), T(0), cfg);
        case Cmp::NotEqual: return 1.0 - compare(Cmp::Equal, x, y, cfg);
        case Cmp::IsClose: {
            T tol = cfg.atol + cfg.rtol * abs(y, cfg);
            return 2.0 * compare(Cmp::LessEqual, abs(T(x - y), cfg), tol, cfg);
        }
    }
    return T(0);
}

template <class T> T greater(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::Greater, x, y, c); }
template <class T> T gtr_equal(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::GtrEqual, x, y, c); }
template <class T> T less(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::Less, x, y, c); }
template <class T> T less_equal(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::LessEqual, x, y, c); }
template <class T> T equal(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::Equal, x, y, c); }
template <class T> T not_equal(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::NotEqual, x, y, c); }
template <class T> T isclose(const T& x, const T& y, const SoftConfig& c) { return compare(Cmp::IsClose, x, y, c); }

}  // namespace softops

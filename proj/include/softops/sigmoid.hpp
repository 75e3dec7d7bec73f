#pragma once

#include "softops/core.hpp"

namespace softops {

namespace detail {

inline void check_tau(double tau) {
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidConfig, "tau must be > 0");
}

template <class T>
T logistic(const T& z) {
    if (z >= T(0)) return T(1) / (T(1) + exp(-z));
    T e = exp(z);
    return e / (T(1) + e);
}

// Interpolants on [-1, 1].
template <class T>
T g_poly(Mode m, const T& s) {
    switch (m) {
        case Mode::C0: return 0.5 + 0.5 * s;
        case Mode::C1: return 0.5 + s * (0.75 - 0.25 * s * s);
        case Mode::C2: {
            T s2 = s * s;
            return 0.5 + s * (15.0 / 16.0 + s2 * (-5.0 / 8.0 + s2 * (3.0 / 16.0)));
        }
        default: break;
    }
    return T(0.5);
}

inline double g_poly_grad(Mode m, double s) {
    switch (m) {
        case Mode::C0: return 0.5;
        case Mode::C1: return 0.75 - 0.75 * s * s;
        case Mode::C2: {
            double s2 = s * s;
            return 15.0 / 16.0 - 15.0 / 8.0 * s2 + 15.0 / 16.0 * s2 * s2;
        }
        default: break;
    }
    return 0.0;
}

// Antiderivative of g_poly from -1 to s.
template <class T>
T g_poly_int(Mode m, const T& s) {
    T s2 = s * s;
    switch (m) {
        case Mode::C0: return (s + 1.0) * (s + 1.0) / 4.0;
        case Mode::C1: return (s + 1.0) / 2.0 + 3.0 * (s2 - 1.0) / 8.0 - (s2 * s2 - 1.0) / 16.0;
        case Mode::C2:
            return (s + 1.0) / 2.0 + 15.0 * (s2 - 1.0) / 32.0 - 5.0 * (s2 * s2 - 1.0) / 32.0 +
                   (s2 * s2 * s2 - 1.0) / 32.0;
        default: break;
    }
    return T(0);
}

}  // namespace detail

// Soft Heaviside H_tau(x).
template <class T>
T heaviside(const T& x, const SoftConfig& cfg) {
    detail::check_tau(cfg.tau);
    if (cfg.mode == Mode::Smooth) return detail::logistic<T>(x / cfg.tau);
    T s = x / (5.0 * cfg.tau);
    if (s < T(-1)) return T(0);
    if (s > T(1)) return T(1);
    return detail::g_poly<T>(cfg.mode, s);
}

inline double heaviside_grad(double x, const SoftConfig& cfg) {
    detail::check_tau(cfg.tau);
    if (cfg.mode == Mode::Smooth) {
        double h = detail::logistic<double>(x / cfg.tau);
        return h * (1.0 - h) / cfg.tau;
    }
    double s = x / (5.0 * cfg.tau);
    if (s < -1.0 || s > 1.0) return 0.0;
    return detail::g_poly_grad(cfg.mode, s) / (5.0 * cfg.tau);
}

}  // namespace softops

#include "softops/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace softops {

namespace {

// Root of p^(1/3) - (1-p)^(1/3) = s on [0, 1].
double pair_c2_bisect(double s) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double h = std::cbrt(mid) - std::cbrt(1.0 - mid) - s;
        if (h < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double project_pair_closed_form(double x, const SoftConfig& cfg) {
    detail::check_tau(cfg.tau);
    const double s = x / cfg.tau;
    switch (cfg.mode) {
        case Mode::Smooth: return detail::logistic<double>(s);
        case Mode::C0: return std::clamp(0.5 + 0.5 * s, 0.0, 1.0);
        case Mode::C1: {
            if (s >= 1.0) return 1.0;
            if (s <= -1.0) return 0.0;
            double r = s + std::sqrt(2.0 - s * s);
            return r * r / 4.0;
        }
        case Mode::C2: {
            if (s >= 1.0) return 1.0;
            if (s <= -1.0) return 0.0;
            const double as = std::fabs(s);
            if (as < 1e-4) return pair_c2_bisect(s);
            double t = -as * std::sinh(std::asinh(-2.0 / (s * s * as)) / 3.0);
            double r = t + s / 2.0;
            return r * r * r;
        }
    }
    return 0.5;
}

}  // namespace softops

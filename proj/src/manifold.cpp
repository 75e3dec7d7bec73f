#include "softops/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace softops {

Polygon random_convex_polygon(std::size_t n, std::mt19937_64& rng) {
    if (n < 3) throw Error(ErrorKind::InvalidArgument, "random_convex_polygon: need at least 3 vertices");
    std::uniform_real_distribution<double> axis(0.5, 2.0), unit(0.0, 1.0), shift(-1.0, 1.0);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (;;) {
        const double ra = axis(rng), rb = axis(rng), rot = two_pi * unit(rng);
        const double cx = shift(rng), cy = shift(rng);
        std::vector<double> ang(n);
        for (double& a : ang) a = two_pi * unit(rng);
        std::sort(ang.begin(), ang.end());
        Polygon p;
        p.x.resize(n);
        p.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ex = ra * std::cos(ang[i]), ey = rb * std::sin(ang[i]);
            p.x[i] = cx + std::cos(rot) * ex - std::sin(rot) * ey;
            p.y[i] = cy + std::sin(rot) * ex + std::cos(rot) * ey;
        }
        // twice the area of each corner triangle; tiny means nearly collinear
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const std::size_t j = (i + 1) % n, k = (i + 2) % n;
            const double cr = (p.x[j] - p.x[i]) * (p.y[k] - p.y[i]) - (p.y[j] - p.y[i]) * (p.x[k] - p.x[i]);
            ok = cr > 1e-3;
        }
        if (ok) return p;
    }
}

namespace {

template <class T>
T mean_coordinate(const ManifoldSelection<T>& s) {
    T m(0);
    for (const auto& pt : s.points)
        for (const T& c : pt) m += c;
    return m / 12.0;
}

Vec<double> offset_gradient(const Polygon& poly, const SoftConfig& cfg, bool hard) {
    const std::size_t n = poly.x.size();
    Vec<Dual> py(poly.y.begin(), poly.y.end());
    Vec<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec<Dual> px(poly.x.begin(), poly.x.end());
        px[i].d = 1.0;
        g[i] = mean_coordinate(manifold_points(px, py, cfg, hard)).d;
    }
    return g;
}

std::size_t argmax_of(const Vec<double>& p) {
    return std::size_t(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

ManifoldReport manifold_demo(const Polygon& poly, const SoftConfig& cfg) {
    ManifoldReport r;
    auto h = manifold_points(poly.x, poly.y, cfg, true);
    auto s = manifold_points(poly.x, poly.y, cfg, false);
    r.match = true;
    for (int k = 0; k < 4; ++k) {
        r.hard_index[k] = argmax_of(h.index[k]);
        r.soft_index[k] = argmax_of(s.index[k]);
        r.match = r.match && r.hard_index[k] == r.soft_index[k];
    }
    r.grad_soft = offset_gradient(poly, cfg, false);
    r.grad_hard = offset_gradient(poly, cfg, true);
    for (double g : r.grad_soft) r.zero_soft += std::fabs(g) <= 1e-8;
    for (double g : r.grad_hard) r.zero_hard += g == 0.0;
    return r;
}

}  // namespace softops

#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "softops/axiswise.hpp"
#include "softops/elementwise.hpp"
#include "softops/st_select.hpp"

// Collision-manifold point selection on a planar polygon (z = 0, normal +z):
// pick four vertices spanning roughly the largest quadrilateral. The soft
// variant replaces every argmax by a SoftIndex and every |.| by its soft form.
namespace softops {

struct Polygon {
    Vec<double> x, y;  // counter-clockwise vertices
};

// Vertices on a random ellipse at sorted random angles; redrawn until no
// three consecutive vertices are nearly collinear.
Polygon random_convex_polygon(std::size_t n, std::mt19937_64& rng);

template <class T>
struct ManifoldSelection {
    std::array<Vec<T>, 4> index;               // SoftIndex per point (one-hot when hard)
    std::array<std::array<T, 3>, 4> points;   // selected coordinates
};

namespace detail {

template <class T>
Vec<T> hard_onehot(const Vec<T>& logits) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.size(); ++j)
        if (val(logits[j]) > val(logits[best])) best = j;
    Vec<T> p(logits.size(), T(0));
    p[best] = T(1);
    return p;
}

}  // namespace detail

// hard = true reproduces the crisp algorithm with the same arithmetic path, so
// a Dual pass gives its (piecewise constant index) gradient.
template <class T>
ManifoldSelection<T> manifold_points(const Vec<T>& px, const Vec<T>& py, const SoftConfig& cfg, bool hard) {
    const std::size_t n = px.size();
    if (n < 4 || py.size() != n) throw Error(ErrorKind::InvalidArgument, "manifold_points: need at least 4 vertices");
    auto select = [&](const Vec<T>& logits) { return hard ? detail::hard_onehot(logits) : argmax(logits, cfg); };
    auto mag = [&](const T& v) { return hard ? T(fabs(v)) : softops::abs(v, cfg); };
    ManifoldSelection<T> out;
    auto pick = [&](int k, const Vec<T>& logits) {
        out.index[k] = select(logits);
        out.points[k] = {dynamic_index_in_dim(px, out.index[k]), dynamic_index_in_dim(py, out.index[k]), T(0)};
    };

    // A: tie-breaker only, index 0 wins
    Vec<T> la(n);
    for (std::size_t j = 0; j < n; ++j) la[j] = T(-0.1 * double(j));
    pick(0, la);
    const T ax = out.points[0][0], ay = out.points[0][1];

    // B: farthest from A
    Vec<T> lb(n);
    for (std::size_t j = 0; j < n; ++j) lb[j] = (ax - px[j]) * (ax - px[j]) + (ay - py[j]) * (ay - py[j]);
    pick(1, lb);
    const T bx = out.points[1][0], by = out.points[1][1];

    // C: farthest from line AB; cross(n, v) = (-v_y, v_x, 0)
    const T abx = -(ay - by), aby = ax - bx;
    Vec<T> lc(n);
    for (std::size_t j = 0; j < n; ++j) lc[j] = mag((ax - px[j]) * abx + (ay - py[j]) * aby);
    pick(2, lc);
    const T cx = out.points[2][0], cy = out.points[2][1];

    // D: farthest from AC and BC
    const T acx = -(ay - cy), acy = ax - cx;
    const T bcx = -(by - cy), bcy = bx - cx;
    Vec<T> ld(n);
    for (std::size_t j = 0; j < n; ++j)
        ld[j] = mag((bx - px[j]) * bcx + (by - py[j]) * bcy) + mag((ax - px[j]) * acx + (ay - py[j]) * acy);
    pick(3, ld);
    return out;
}

struct ManifoldReport {
    std::array<std::size_t, 4> hard_index{};
    std::array<std::size_t, 4> soft_index{};  // argmax of each soft SoftIndex
    bool match = false;
    Vec<double> grad_soft;  // d mean(selected coordinates) / d x-offset of each vertex
    Vec<double> grad_hard;
    std::size_t zero_soft = 0;  // vertices with |g| <= 1e-8 (soft) or g == 0 (hard)
    std::size_t zero_hard = 0;
};

ManifoldReport manifold_demo(const Polygon& poly, const SoftConfig& cfg);

}  // namespace softops

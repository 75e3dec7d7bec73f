#include <cmath>
#include <random>

#include "doctest.h"
#include "softops/manifold.hpp"

using namespace softops;

namespace {

// Plain-double transcription of the crisp four-point selection.
std::array<std::size_t, 4> crisp(const Polygon& p) {
    const std::size_t n = p.x.size();
    auto best = [&](auto score) {
        std::size_t b = 0;
        for (std::size_t j = 1; j < n; ++j)
            if (score(j) > score(b)) b = j;
        return b;
    };
    const std::size_t a = best([](std::size_t j) { return -0.1 * double(j); });
    const double ax = p.x[a], ay = p.y[a];
    const std::size_t b = best([&](std::size_t j) { return std::pow(ax - p.x[j], 2) + std::pow(ay - p.y[j], 2); });
    const double bx = p.x[b], by = p.y[b];
    const std::size_t c =
        best([&](std::size_t j) { return std::fabs(-(ax - p.x[j]) * (ay - by) + (ay - p.y[j]) * (ax - bx)); });
    const double cx = p.x[c], cy = p.y[c];
    const std::size_t d = best([&](std::size_t j) {
        return std::fabs(-(bx - p.x[j]) * (by - cy) + (by - p.y[j]) * (bx - cx)) +
               std::fabs(-(ax - p.x[j]) * (ay - cy) + (ay - p.y[j]) * (ax - cx));
    });
    return {a, b, c, d};
}

}  // namespace

TEST_CASE("random polygons are convex and counter-clockwise") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        auto p = random_convex_polygon(7, rng);
        for (std::size_t i = 0; i < 7; ++i) {
            const std::size_t j = (i + 1) % 7, k = (i + 2) % 7;
            CHECK((p.x[j] - p.x[i]) * (p.y[k] - p.y[i]) - (p.y[j] - p.y[i]) * (p.x[k] - p.x[i]) > 0.0);
        }
    }
    CHECK_THROWS_AS(random_convex_polygon(2, rng), Error);
}

TEST_CASE("hard selection matches the crisp transcription") {
    std::mt19937_64 rng(2);
    SoftConfig c;
    for (int t = 0; t < 100; ++t) {
        auto p = random_convex_polygon(5 + t % 6, rng);
        auto r = manifold_demo(p, c);
        CHECK(r.hard_index == crisp(p));
        // hard gradient counts how often each vertex was picked, over 12 coordinates
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            double picks = 0;
            for (std::size_t k : r.hard_index) picks += k == i;
            CHECK(r.grad_hard[i] == doctest::Approx(picks / 12.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("soft selection: crisp limit and gradient vs finite differences") {
    std::mt19937_64 rng(3);
    auto p = random_convex_polygon(6, rng);
    SoftConfig c;
    c.standardize = false;
    c.tau = 1e-4;
    auto s = manifold_points(p.x, p.y, c, false);
    auto h = manifold_points(p.x, p.y, c, true);
    for (int k = 0; k < 4; ++k) {
        CHECK(s.points[k][0] == doctest::Approx(h.points[k][0]).epsilon(1e-6));
        CHECK(s.points[k][1] == doctest::Approx(h.points[k][1]).epsilon(1e-6));
    }

    c.tau = 0.3;
    auto r = manifold_demo(p, c);
    auto mean = [&](const Vec<double>& px) {
        auto q = manifold_points(px, p.y, c, false);
        double m = 0;
        for (const auto& pt : q.points)
            for (double v : pt) m += v;
        return m / 12.0;
    };
    for (std::size_t i = 0; i < 6; ++i) {
        Vec<double> xp = p.x, xm = p.x;
        xp[i] += 1e-6;
        xm[i] -= 1e-6;
        CHECK(r.grad_soft[i] == doctest::Approx((mean(xp) - mean(xm)) / 2e-6).epsilon(1e-5));
    }
    CHECK(r.zero_soft == 0);
}

TEST_CASE("too few vertices") {
    SoftConfig c;
    CHECK_THROWS_AS(manifold_points(Vec<double>{0, 1, 2}, Vec<double>{0, 1, 0}, c, false), Error);
}

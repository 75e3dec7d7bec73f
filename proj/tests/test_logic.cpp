#include <cmath>

#include "doctest.h"
#include "softops/elementwise.hpp"
#include "softops/logic.hpp"

using namespace softops;

TEST_CASE("all") {
    CHECK(all(Vec<double>{1, 1, 1}) == 1.0);
    CHECK(all(Vec<double>{0.5, 0.5}) == doctest::Approx(0.25));
    CHECK(all(Vec<double>{0.25, 1.0}, Aggregator::Geomean) == doctest::Approx(0.5));
    CHECK(all(Vec<double>{}) == 1.0);
    CHECK(all(Vec<double>{0.0, 0.8}, Aggregator::Geomean) == 0.0);
}

TEST_CASE("not, any, and, or, xor") {
    CHECK(logical_not(0.3) == doctest::Approx(0.7));
    CHECK(logical_xor(1.0, 0.0) == 1.0);
    CHECK(logical_xor(0.5, 0.5) == doctest::Approx(0.4375));
    Vec<double> ps{0.2, 0.7, 0.4};
    Vec<double> neg{0.8, 0.3, 0.6};
    CHECK(any(ps) == 1.0 - all(neg));
}

TEST_CASE("crisp truth tables") {
    for (double p : {0.0, 1.0})
        for (double q : {0.0, 1.0}) {
            bool P = p > 0.5, Q = q > 0.5;
            CHECK(logical_and(p, q) == double(P && Q));
            CHECK(logical_or(p, q) == double(P || Q));
            CHECK(logical_xor(p, q) == double(P != Q));
            CHECK(logical_not(p) == double(!P));
            CHECK(all(Vec<double>{p, q}, Aggregator::Geomean) == double(P && Q));
            CHECK(any(Vec<double>{p, q}, Aggregator::Geomean) == double(P || Q));
        }
}

TEST_CASE("all is monotone") {
    for (double a = 0.0; a <= 1.0; a += 0.1)
        for (double b = a; b <= 1.0; b += 0.1) {
            CHECK(all(Vec<double>{a, 0.6}) <= all(Vec<double>{b, 0.6}) + 1e-15);
            CHECK(all(Vec<double>{a, 0.6}, Aggregator::Geomean) <= all(Vec<double>{b, 0.6}, Aggregator::Geomean) + 1e-15);
        }
}

TEST_CASE("where") {
    CHECK(where(Vec<double>{1.0}, Vec<double>{3.0}, Vec<double>{-1.0})[0] == 3.0);
    CHECK(where(Vec<double>{0.5}, Vec<double>{2.0}, Vec<double>{0.0})[0] == 1.0);
    CHECK_THROWS_AS(where(Vec<double>{0.5, 0.5}, Vec<double>{2.0}, Vec<double>{0.0}), Error);
    SoftConfig c;
    c.tau = 1e-5;
    Vec<double> x{0.3, -2.0, 5.0}, y{1.0, -3.0, 4.0}, p(3);
    for (int i = 0; i < 3; ++i) p[i] = greater(x[i], y[i], c);
    auto z = where(p, x, y);
    for (int i = 0; i < 3; ++i) CHECK(z[i] == doctest::Approx(std::max(x[i], y[i])));
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "softops/core.hpp"

using namespace softops;

TEST_CASE("dual_lift copies values with zero tangents") {
    auto d = dual_lift({1.0, 2.0});
    CHECK(d[0].v == 1.0);
    CHECK(d[1].v == 2.0);
    CHECK(d[0].d == 0.0);
    CHECK(d[1].d == 0.0);
}

TEST_CASE("seeded tangents follow the chain and product rules") {
    auto d = dual_lift({3.0});
    d[0].d = 1.0;
    CHECK((d[0] * d[0]).d == doctest::Approx(6.0));
    auto e = dual_lift({1.0, 2.0});
    e[1].d = 1.0;
    CHECK((e[0] * e[1]).d == doctest::Approx(1.0));
}

TEST_CASE("comparisons act on the value only") {
    CHECK(Dual(1.0, 5.0) == Dual(1.0, -5.0));
    CHECK(Dual(1.0, 100.0) < Dual(2.0, 0.0));
}

TEST_CASE("jacobian of identity and sum") {
    auto id = [](const Vec<Dual>& x) { return x; };
    auto J = jacobian(id, {0.3, -1.0, 2.0});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(J(i, j) == (i == j ? 1.0 : 0.0));
    auto sum = [](const Vec<Dual>& x) {
        Dual s(0);
        for (auto& v : x) s += v;
        return Vec<Dual>{s};
    };
    auto Js = jacobian(sum, {1.0, 2.0, 3.0});
    CHECK(Js.rows == 1);
    for (std::size_t j = 0; j < 3; ++j) CHECK(Js(0, j) == 1.0);
}

TEST_CASE("jacobian rejects arity mismatch") {
    auto id = [](const Vec<Dual>& x) { return x; };
    CHECK_THROWS_AS(jacobian(id, {1.0, 2.0}, std::size_t(3)), Error);
}

TEST_CASE("unary primitives agree with central differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    struct Prim {
        const char* name;
        Dual (*fd)(const Dual&);
        double (*fv)(double);
    };
    Prim prims[] = {
        {"exp", [](const Dual& x) { return exp(x); }, [](double x) { return std::exp(x); }},
        {"log", [](const Dual& x) { return log(x); }, [](double x) { return std::log(x); }},
        {"sqrt", [](const Dual& x) { return sqrt(x); }, [](double x) { return std::sqrt(x); }},
        {"cbrt", [](const Dual& x) { return cbrt(x); }, [](double x) { return std::cbrt(x); }},
        {"log1p", [](const Dual& x) { return log1p(x); }, [](double x) { return std::log1p(x); }},
        {"sin", [](const Dual& x) { return sin(x); }, [](double x) { return std::sin(x); }},
        {"cos", [](const Dual& x) { return cos(x); }, [](double x) { return std::cos(x); }},
        {"tanh", [](const Dual& x) { return tanh(x); }, [](double x) { return std::tanh(x); }},
        {"sinh", [](const Dual& x) { return sinh(x); }, [](double x) { return std::sinh(x); }},
        {"asinh", [](const Dual& x) { return asinh(x); }, [](double x) { return std::asinh(x); }},
        {"asin", [](const Dual& x) { return asin(x); }, [](double x) { return std::asin(x); }},
        {"acos", [](const Dual& x) { return acos(x); }, [](double x) { return std::acos(x); }},
        {"pow2.5", [](const Dual& x) { return pow(x, 2.5); }, [](double x) { return std::pow(x, 2.5); }},
        {"recip", [](const Dual& x) { return Dual(1.0) / x; }, [](double x) { return 1.0 / x; }},
    };
    for (const auto& p : prims) {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            double x = U(rng);
            double h = 1e-5 * (1.0 + std::fabs(x));
            double fd = (p.fv(x + h) - p.fv(x - h)) / (2.0 * h);
            double ad = p.fd(Dual(x, 1.0)).d;
            worst = std::max(worst, std::fabs(ad - fd) / std::max(std::fabs(fd), 1e-12));
        }
        INFO(p.name);
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("SoftIndex and SoftPerm validity by summation") {
    SoftIndex si{{0.2, 0.3, 0.5}};
    CHECK(si.valid());
    si.probs[0] = 0.3;
    CHECK_FALSE(si.valid());
    SoftPerm sp;
    sp.mat = Mat<double>(2, 2, 0.5);
    sp.col_stochastic = true;
    CHECK(sp.valid());
}

TEST_CASE("config validation") {
    SoftConfig c;
    CHECK_NOTHROW(validate(c));
    c.tau = 0.0;
    CHECK_THROWS_AS(validate(c), Error);
    c.tau = 1.0;
    c.method = Method::SmoothSort;
    c.mode = Mode::C1;
    CHECK_THROWS_AS(validate(c), Error);
}

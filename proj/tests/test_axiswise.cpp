#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "softops/axiswise.hpp"

using namespace softops;

static const Method kMethods[] = {Method::OT, Method::SoftSort, Method::NeuralSort,
                                  Method::FastSoftSort, Method::SmoothSort, Method::Network};

TEST_CASE("defaults pick neuralsort and softsort") {
    Vec<double> x{0.5, -1.2, 2.0, 0.9, 0.1};
    SoftConfig c;
    c.tau = 0.2;
    auto s = sort(x, c), ns = neuralsort_sort(x, c);
    for (std::size_t i = 0; i < 5; ++i) CHECK(s[i] == ns[i]);
    CHECK(max(x, c) == softsort_max(x, c));
    CHECK(min(x, c) == softsort_min(x, c));
    CHECK(median(x, c) == neuralsort_median(x, c));
    auto a = argmax(x, c), sa = softsort_argmax(x, c);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == sa[i]);
}

TEST_CASE("every method reaches the hard answer") {
    std::mt19937_64 rng(6);
    for (Method m : kMethods)
        for (Mode mode : {Mode::Smooth, Mode::C0, Mode::C1, Mode::C2}) {
            if (!combination_valid("sort", m, mode)) continue;
            SoftConfig c;
            c.tau = 1e-3;
            c.mode = mode;
            c.method = m;
            auto x = oracle::distinct_values(rng, 8);
            auto hs = x;
            std::sort(hs.begin(), hs.end());
            INFO(name(m) << " " << name(mode));
            auto s = sort(x, c);
            for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(s[i] - hs[i]) <= 5e-2);
            CHECK(std::fabs(max(x, c) - hs[7]) <= 5e-2);
            CHECK(std::fabs(min(x, c) - hs[0]) <= 5e-2);
            CHECK(std::fabs(median(x, c) - 0.5 * (hs[3] + hs[4])) <= 5e-2);
            auto tk = topk(x, 3, c);
            for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(tk.values[i] - hs[7 - i]) <= 5e-2);
            if (combination_valid("rank", m, mode)) {
                auto r = rank(x, c);
                auto hr = oracle::hard_rank(x);
                for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(r[i] - hr[i]) <= 5e-2);
            }
            if (combination_valid("argmax", m, mode)) {
                auto idx = oracle::hard_argsort(x);
                CHECK(argmax(x, c)[idx[7]] >= 0.95);
                CHECK(argmin(x, c)[idx[0]] >= 0.95);
                auto P = argsort(x, c);
                for (std::size_t i = 0; i < 8; ++i) CHECK(P(i, idx[i]) >= 0.95);
            }
        }
}

TEST_CASE("unsupported combinations") {
    Vec<double> x{0.5, -1.2, 2.0, 0.9};
    SoftConfig c;
    c.method = Method::FastSoftSort;
    CHECK_THROWS_AS(argsort(x, c), Error);
    CHECK_THROWS_AS(argmax(x, c), Error);
    c.method = Method::Network;
    CHECK_THROWS_AS(rank(x, c), Error);
    std::string why;
    CHECK_FALSE(combination_valid("sort", Method::SmoothSort, Mode::C1, &why));
    CHECK(why.find("smooth mode") != std::string::npos);
    CHECK_FALSE(combination_valid("argsort", Method::FastSoftSort, Mode::C0, &why));
    CHECK_FALSE(combination_valid("rank", Method::Network, Mode::Smooth));
    CHECK_FALSE(combination_valid("frobnicate", Method::OT, Mode::Smooth));
    CHECK(combination_valid("argquantile", Method::NeuralSort, Mode::C2));
    CHECK(combination_valid("argrank", Method::SoftSort, Mode::Smooth));
}

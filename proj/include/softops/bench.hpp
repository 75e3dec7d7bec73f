#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softops/core.hpp"

namespace softops {

struct BenchOptions {
    std::vector<std::string> ops = {"sort"};
    std::vector<std::string> methods;  // empty: every method valid for the op, plus "hard"
    std::vector<Mode> modes = {Mode::Smooth};
    std::vector<std::size_t> sizes = {64, 256, 1024};
    int reps = 5;
    double tau = 0.1;
    std::uint64_t seed = 0;
};

// method == "hard" marks the std::sort-based baseline; its mode column is "-".
struct BenchRow {
    std::string op, method, mode;
    std::size_t n = 0;
    double median_forward_s = 0.0;
    double median_jacobian_s = 0.0;  // one forward-mode JVP pass
    std::size_t peak_bytes_estimate = 0;
};

inline constexpr std::size_t kBenchMaxN = 8192;

// Inputs are i.i.d. standard normal. Invalid (op, method, mode) triples are
// skipped when methods is empty and rejected (Unsupported) when listed.
std::vector<BenchRow> run_bench(const BenchOptions& opt);

// Hard reference of an axiswise op, same flattened layout as apply_axiswise.
template <class T>
Vec<T> hard_axiswise(const std::string& op, const Vec<T>& x, std::size_t k = 1, double q = 0.5);

}  // namespace softops

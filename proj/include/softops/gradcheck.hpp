#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "softops/core.hpp"

namespace softops {

enum class Sampler { Normal, Wide, Unit };

// One differentiable op at one mode, wrapped as a vector map.
struct OpCase {
    std::string name;  // "relu", "softsort.sort", ...
    Mode mode = Mode::Smooth;
    std::size_t dim = 0;
    double tau = 0.5;
    Sampler sampler = Sampler::Normal;
    bool solver_backed = false;  // FD noise follows solver tolerance
    bool fd_only = false;        // gradient is itself a finite difference
    bool piecewise = false;      // has kinks; sample points near them are rejected
    std::function<Vec<double>(const Vec<double>&)> f;
    std::function<Vec<Dual>(const Vec<Dual>&)> fdual;
};

const std::vector<OpCase>& op_registry();

bool glob_match(const std::string& pattern, const std::string& name);

struct GradcheckOptions {
    std::string filter = "*";
    double tol = 1e-4;
    std::uint64_t seed = 0;
    int points = 50;
    std::optional<Mode> mode;
};

struct GradcheckResult {
    std::string name;
    Mode mode = Mode::Smooth;
    double max_rel_err = 0.0;
    double tol = 0.0;  // effective tolerance (x10 for solver-backed ops)
    int points = 0;
    int rejected = 0;
    bool exempt = false;
    bool pass = false;
};

// Dual Jacobian vs central differences at random points. Throws
// InvalidArgument if the filter matches no op.
std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions& opt);

}  // namespace softops

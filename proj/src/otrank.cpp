#include "softops/otrank.hpp"

namespace softops {

const char* name(QuantileCombine c) {
    switch (c) {
        case QuantileCombine::Lower: return "lower";
        case QuantileCombine::Upper: return "upper";
        case QuantileCombine::Midpoint: return "midpoint";
        case QuantileCombine::Interpolate: return "interpolate";
    }
    return "?";
}

QuantileCombine parse_combine(const std::string& s) {
    if (s == "lower") return QuantileCombine::Lower;
    if (s == "upper") return QuantileCombine::Upper;
    if (s == "midpoint") return QuantileCombine::Midpoint;
    if (s == "interpolate") return QuantileCombine::Interpolate;
    throw Error(ErrorKind::InvalidArgument, "unknown quantile combine '" + s + "'");
}

SolverParams ot_solver_params() {
    SolverParams p;
    p.max_iter = 200000;
    p.tol = 1e-10;
    p.memory = 10;
    return p;
}

}  // namespace softops

#include "softops/core.hpp"

#include <cmath>

namespace softops {

void validate(const SoftConfig& cfg) {
    if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
        throw Error(ErrorKind::InvalidConfig, "tau must be a positive finite number, got " + std::to_string(cfg.tau));
    if (cfg.round_k < 1) throw Error(ErrorKind::InvalidConfig, "round_k must be >= 1");
    if (cfg.atol < 0.0 || cfg.rtol < 0.0) throw Error(ErrorKind::InvalidConfig, "atol/rtol must be nonnegative");
    if (cfg.method && *cfg.method == Method::SmoothSort && cfg.mode != Mode::Smooth)
        throw Error(ErrorKind::InvalidConfig,
                    std::string("smoothsort supports only mode=smooth (got ") + name(cfg.mode) + ")");
}

const char* name(Mode m) {
    switch (m) {
        case Mode::Smooth: return "smooth";
        case Mode::C0: return "c0";
        case Mode::C1: return "c1";
        case Mode::C2: return "c2";
    }
    return "?";
}

const char* name(Method m) {
    switch (m) {
        case Method::OT: return "ot";
        case Method::SoftSort: return "softsort";
        case Method::NeuralSort: return "neuralsort";
        case Method::FastSoftSort: return "fastsoftsort";
        case Method::SmoothSort: return "smoothsort";
        case Method::Network: return "network";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    if (s == "smooth") return Mode::Smooth;
    if (s == "c0") return Mode::C0;
    if (s == "c1") return Mode::C1;
    if (s == "c2") return Mode::C2;
    throw Error(ErrorKind::InvalidArgument, "unknown mode '" + s + "'");
}

Method parse_method(const std::string& s) {
    if (s == "ot") return Method::OT;
    if (s == "softsort") return Method::SoftSort;
    if (s == "neuralsort") return Method::NeuralSort;
    if (s == "fastsoftsort") return Method::FastSoftSort;
    if (s == "smoothsort") return Method::SmoothSort;
    if (s == "network" || s == "bitonic") return Method::Network;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

bool SoftIndex::valid(double tol) const {
    double s = 0.0;
    for (double p : probs) {
        if (p < 0.0 || p > 1.0) return false;
        s += p;
    }
    return !probs.empty() && std::fabs(s - 1.0) <= tol;
}

bool SoftPerm::valid(double tol) const {
    for (double v : mat.a)
        if (v < 0.0) return false;
    if (row_stochastic)
        for (std::size_t i = 0; i < mat.rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < mat.cols; ++j) s += mat(i, j);
            if (std::fabs(s - 1.0) > tol) return false;
        }
    if (col_stochastic)
        for (std::size_t j = 0; j < mat.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < mat.rows; ++i) s += mat(i, j);
            if (std::fabs(s - 1.0) > tol) return false;
        }
    return true;
}

Vec<Dual> dual_lift(const Vec<double>& x) {
    Vec<Dual> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = Dual(x[i], 0.0);
    return out;
}

}  // namespace softops

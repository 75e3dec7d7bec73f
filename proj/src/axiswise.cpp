#include "softops/axiswise.hpp"

#include <algorithm>
#include <array>

namespace softops {

namespace {

constexpr std::array<const char*, 7> kValueOps = {"sort", "rank", "max", "min", "topk", "quantile", "median"};
constexpr std::array<const char*, 7> kArgOps = {"argsort", "argrank", "argmax", "argmin", "argtopk", "argquantile",
                                                "argmedian"};

bool in(const std::string& op, const auto& list) {
    return std::find(list.begin(), list.end(), op) != list.end();
}

}  // namespace

Method default_method(const std::string& op) {
    if (op == "argmax" || op == "argmin" || op == "max" || op == "min" || op == "argrank") return Method::SoftSort;
    return Method::NeuralSort;
}

const std::vector<std::string>& axiswise_ops() {
    static const std::vector<std::string> ops = [] {
        std::vector<std::string> v;
        for (const char* op : kValueOps) v.emplace_back(op);
        for (const char* op : kArgOps) v.emplace_back(op);
        return v;
    }();
    return ops;
}

bool combination_valid(const std::string& op, Method method, Mode mode, std::string* reason) {
    auto fail = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    if (!in(op, kValueOps) && !in(op, kArgOps)) return fail("unknown axiswise op '" + op + "'");
    const std::string tag = std::string(name(method)) + "+" + name(mode);
    switch (method) {
        case Method::SmoothSort:
            if (mode != Mode::Smooth)
                return fail(tag + " is not in the supported-algorithm table: smoothsort exists only in smooth mode");
            [[fallthrough]];
        case Method::FastSoftSort:
            if (in(op, kArgOps))
                return fail(std::string(name(method)) + " is a value-space projection with no permutation matrix; " +
                            op + " is not in the supported-algorithm table");
            break;
        case Method::Network:
            if (op == "rank" || op == "argrank")
                return fail("network provides sort/argsort and selections derived from them, not " + op);
            break;
        case Method::OT:
        case Method::NeuralSort:
            if (op == "argrank") return fail(std::string(name(method)) + " does not provide argrank");
            break;
        case Method::SoftSort: break;
    }
    if (reason) reason->clear();
    return true;
}

}  // namespace softops

#pragma once

#include <string>
#include <vector>

#include "softops/bitonic.hpp"
#include "softops/otrank.hpp"
#include "softops/permusort.hpp"
#include "softops/simplexsort.hpp"

// Method-dispatching entry points. An unset cfg.method picks NeuralSort for
// sort/rank/quantile/median/topk and SoftSort for argmax/argmin/max/min.
namespace softops {

namespace detail {

inline Method method_or(const SoftConfig& cfg, Method fallback) { return cfg.method ? *cfg.method : fallback; }

[[noreturn]] inline void unsupported(const char* op, Method m, const char* why) {
    throw Error(ErrorKind::Unsupported, std::string(op) + ": method " + name(m) + " " + why);
}

inline constexpr const char* kNoArg = "has no permutation matrix (value-space projection)";
inline constexpr const char* kNoRank = "does not provide rank";

template <class T>
Vec<T> negate(const Vec<T>& x) {
    Vec<T> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
    return out;
}

template <class T>
Vec<T> permu_sort(const Vec<T>& x, const SoftConfig& cfg, Method m) {
    return m == Method::FastSoftSort ? fastsoftsort_sort(x, cfg) : smoothsort_sort(x, cfg);
}

}  // namespace detail

// True when the (op, method, mode) triple is listed as available.
bool combination_valid(const std::string& op, Method method, Mode mode, std::string* reason = nullptr);

// Method used when cfg.method is unset.
Method default_method(const std::string& op);

// Every op name accepted by apply_axiswise.
const std::vector<std::string>& axiswise_ops();

template <class T>
Vec<T> sort(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::NeuralSort);
    switch (m) {
        case Method::OT: return ot_sort(x, cfg);
        case Method::SoftSort: return softsort_sort(x, cfg);
        case Method::NeuralSort: return neuralsort_sort(x, cfg);
        case Method::FastSoftSort:
        case Method::SmoothSort: return detail::permu_sort(x, cfg, m);
        case Method::Network: return network_sort(x, cfg).values;
    }
    return {};
}

template <class T>
Mat<T> argsort(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::NeuralSort);
    switch (m) {
        case Method::OT: return ot_argsort(x, cfg);
        case Method::SoftSort: return softsort_argsort(x, cfg);
        case Method::NeuralSort: return neuralsort_argsort(x, cfg);
        case Method::Network: return network_sort(x, cfg).perm;
        default: detail::unsupported("argsort", m, detail::kNoArg);
    }
}

template <class T>
Vec<T> rank(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::NeuralSort);
    switch (m) {
        case Method::OT: return ot_rank(x, cfg);
        case Method::SoftSort: return softsort_rank(x, cfg);
        case Method::NeuralSort: return neuralsort_rank(x, cfg);
        case Method::FastSoftSort: return fastsoftsort_rank(x, cfg);
        case Method::SmoothSort: return smoothsort_rank(x, cfg);
        default: detail::unsupported("rank", m, detail::kNoRank);
    }
}

template <class T>
Vec<T> argmax(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::SoftSort);
    switch (m) {
        case Method::OT: {
            if (x.size() == 1) return Vec<T>{T(1)};
            auto tk = ot_topk(x, 1, cfg);
            return Vec<T>(tk.perm.a.begin(), tk.perm.a.end());
        }
        case Method::SoftSort: return softsort_argmax(x, cfg);
        case Method::NeuralSort: return neuralsort_argmax(x, cfg);
        case Method::Network: return network_argmax(x, cfg);
        default: detail::unsupported("argmax", m, detail::kNoArg);
    }
}

template <class T>
Vec<T> argmin(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::SoftSort);
    if (m == Method::NeuralSort) return neuralsort_argmin(x, cfg);
    if (m == Method::Network) return network_argmin(x, cfg);
    SoftConfig c = cfg;
    c.method = m;
    return argmax(detail::negate(x), c);
}

template <class T>
T max(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::SoftSort);
    switch (m) {
        case Method::OT: return x.size() == 1 ? x[0] : ot_max(x, cfg);
        case Method::SoftSort: return softsort_max(x, cfg);
        case Method::NeuralSort: return neuralsort_max(x, cfg);
        case Method::Network: return network_max(x, cfg);
        case Method::FastSoftSort:
        case Method::SmoothSort: return detail::permu_sort(x, cfg, m).back();
    }
    return T(0);
}

template <class T>
T min(const Vec<T>& x, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::SoftSort);
    switch (m) {
        case Method::OT: return x.size() == 1 ? x[0] : ot_min(x, cfg);
        case Method::SoftSort: return softsort_min(x, cfg);
        case Method::NeuralSort: return neuralsort_min(x, cfg);
        case Method::Network: return network_min(x, cfg);
        case Method::FastSoftSort:
        case Method::SmoothSort: return detail::permu_sort(x, cfg, m).front();
    }
    return T(0);
}

// For the permutahedron methods perm is left empty.
template <class T>
TopK<T> topk(const Vec<T>& x, std::size_t k, const SoftConfig& cfg) {
    Method m = detail::method_or(cfg, Method::NeuralSort);
    switch (m) {
        case Method::OT: return ot_topk(x, k, cfg);
        case Method::SoftSort: return softsort_topk(x, k, cfg);
        case Method::NeuralSort: return neuralsort_topk(x, k, cfg);
        case Method::Network: return network_topk(x, k, cfg);
        case Method::FastSoftSort:
        case Method::SmoothSort: {
            const std::size_t n = x.size();
            if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "topk: k must satisfy 1 <= k <= n");
            Vec<T> s = detail::permu_sort(x, cfg, m);
            TopK<T> out;
            for (std::size_t i = 0; i < k; ++i) out.values.push_back(s[n - 1 - i]);
            return out;
        }
    }
    return {};
}

template <class T>
T quantile(const Vec<T>& x, double q, const SoftConfig& cfg, QuantileCombine combine = QuantileCombine::Midpoint) {
    Method m = detail::method_or(cfg, Method::NeuralSort);
    switch (m) {
        case Method::OT: return ot_quantile(x, q, cfg, combine);
        case Method::SoftSort: return softsort_quantile(x, q, cfg, combine);
        case Method::NeuralSort: return neuralsort_quantile(x, q, cfg, combine);
        case Method::Network: return network_quantile(x, q, cfg, combine);
        case Method::FastSoftSort:
        case Method::SmoothSort: {
            detail::check_q(q);
            Vec<T> s = detail::permu_sort(x, cfg, m);
            const double pos = q * double(x.size() - 1);
            const std::size_t lo = std::size_t(std::floor(pos)), hi = std::size_t(std::ceil(pos));
            return detail::combine_quantile(s[lo], s[hi], pos - double(lo), combine);
        }
    }
    return T(0);
}

template <class T>
T median(const Vec<T>& x, const SoftConfig& cfg) {
    return quantile(x, 0.5, cfg, QuantileCombine::Interpolate);
}

namespace detail {

template <class T>
Vec<T> flat(const Mat<T>& m) {
    return m.a;
}

template <class T>
Vec<T> row(const Mat<T>& m, std::size_t r) {
    return Vec<T>(m.a.begin() + long(r * m.cols), m.a.begin() + long((r + 1) * m.cols));
}

}  // namespace detail

// Any axiswise op by name, flattened to a vector (matrices row-major). k is
// used by topk/argtopk, q by quantile/argquantile. Throws Unsupported with the
// table reason for combinations that are not available.
template <class T>
Vec<T> apply_axiswise(const std::string& op, const Vec<T>& x, SoftConfig cfg, std::size_t k = 1, double q = 0.5) {
    const Method m = cfg.method.value_or(default_method(op));
    std::string why;
    if (!combination_valid(op, m, cfg.mode, &why)) throw Error(ErrorKind::Unsupported, why);
    cfg.method = m;
    if (op == "sort") return sort(x, cfg);
    if (op == "rank") return rank(x, cfg);
    if (op == "max") return {max(x, cfg)};
    if (op == "min") return {min(x, cfg)};
    if (op == "topk") return topk(x, k, cfg).values;
    if (op == "quantile") return {quantile(x, q, cfg)};
    if (op == "median") return {median(x, cfg)};
    if (op == "argsort") return detail::flat(argsort(x, cfg));
    if (op == "argrank") return detail::flat(softsort_argrank(x, cfg));
    if (op == "argmax") return argmax(x, cfg);
    if (op == "argmin") return argmin(x, cfg);
    if (op == "argtopk") return detail::flat(topk(x, k, cfg).perm);
    // argquantile: soft index of the lower order statistic at q (n - 1).
    // argmedian: for even n, the average of the two middle rows, so that its
    // expectation is the interpolated median (both middles minimize sum |t - x_j|).
    if (op == "argquantile") {
        detail::check_q(q);
        if (m == Method::NeuralSort) return neuralsort_argquantile(x, q, cfg, false);
        return detail::row(argsort(x, cfg), std::size_t(std::floor(q * double(x.size() - 1))));
    }
    if (op == "argmedian") {
        if (m == Method::NeuralSort) return neuralsort_argmedian(x, cfg);
        Mat<T> P = argsort(x, cfg);
        const std::size_t n = x.size();
        Vec<T> lo = detail::row(P, (n - 1) / 2), hi = detail::row(P, n / 2);
        for (std::size_t j = 0; j < n; ++j) lo[j] = (lo[j] + hi[j]) * 0.5;
        return lo;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown axiswise op '" + op + "'");
}

}  // namespace softops

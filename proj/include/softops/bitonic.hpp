#pragma once

#include <algorithm>
#include <cmath>

#include "softops/core.hpp"
#include "softops/otrank.hpp"
#include "softops/sigmoid.hpp"
#include "softops/simplexsort.hpp"

namespace softops {

template <class T>
struct NetworkSortResult {
    Vec<T> values;  // ascending
    Mat<T> perm;    // values = perm * x; row i is the soft index of the i-th smallest
    double leaked = 0.0;      // largest mass a real output row received from padding
    double stage_err = 0.0;   // worst row/column sum error of P over all stages
    int stages = 0;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t N = 1;
    while (N < n) N <<= 1;
    return N;
}

// Soft bitonic sorting network. Comparisons run on the (optionally squashed)
// inputs; the same 2x2 mixes are applied to the raw values and to the rows of P.
// Inputs are padded to a power of two with sentinels that sort to the top.
template <class T>
NetworkSortResult<T> network_sort(const Vec<T>& x, const SoftConfig& cfg, bool check_stages = false) {
    validate(cfg);
    const std::size_t n = x.size();
    detail::check_nonempty(n, "network_sort");
    const Vec<T> xs = standardize_squash(x, cfg.standardize).first;
    const std::size_t N = next_pow2(n);

    auto sentinel = [&](const Vec<T>& v) {
        T lo = v[0], hi = v[0];
        for (const T& e : v) {
            if (e < lo) lo = e;
            if (e > hi) hi = e;
        }
        return hi + 10.0 * (hi - lo + 1.0);
    };
    Vec<T> a(N), v(N);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = xs[i];
        v[i] = x[i];
    }
    if (N > n) {
        T sa = sentinel(xs), sv = sentinel(x);
        for (std::size_t i = n; i < N; ++i) {
            a[i] = sa;
            v[i] = sv;
        }
    }
    Mat<T> P = Mat<T>::identity(N);

    NetworkSortResult<T> out;
    for (std::size_t k = 2; k <= N; k <<= 1)
        for (std::size_t j = k >> 1; j > 0; j >>= 1) {
            for (std::size_t i = 0; i < N; ++i) {
                const std::size_t l = i ^ j;
                if (l <= i) continue;
                const bool ascending = (i & k) == 0;
                // lo receives the soft min, hi the soft max
                const std::size_t lo = ascending ? i : l, hi = ascending ? l : i;
                T s = heaviside(T(a[lo] - a[hi]), cfg);
                T t = T(1) - s;
                T alo = t * a[lo] + s * a[hi], ahi = s * a[lo] + t * a[hi];
                T vlo = t * v[lo] + s * v[hi], vhi = s * v[lo] + t * v[hi];
                a[lo] = alo;
                a[hi] = ahi;
                v[lo] = vlo;
                v[hi] = vhi;
                for (std::size_t c = 0; c < N; ++c) {
                    T plo = P(lo, c), phi = P(hi, c);
                    P(lo, c) = t * plo + s * phi;
                    P(hi, c) = s * plo + t * phi;
                }
            }
            ++out.stages;
            if (check_stages) {
                for (std::size_t r = 0; r < N; ++r) {
                    double rs = 0.0, cs = 0.0;
                    for (std::size_t c = 0; c < N; ++c) {
                        rs += val(P(r, c));
                        cs += val(P(c, r));
                    }
                    out.stage_err = std::max({out.stage_err, std::fabs(rs - 1.0), std::fabs(cs - 1.0)});
                }
            }
        }

    out.perm = Mat<T>(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        double real = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            out.perm(r, c) = P(r, c);
            real += val(P(r, c));
        }
        out.leaked = std::max(out.leaked, 1.0 - real);
    }
    const bool renorm = out.leaked > 1e-9;
    if (renorm)
        for (std::size_t r = 0; r < n; ++r) {
            T s(0);
            for (std::size_t c = 0; c < n; ++c) s += out.perm(r, c);
            for (std::size_t c = 0; c < n; ++c) out.perm(r, c) = out.perm(r, c) / s;
        }
    if (renorm || !cfg.gated_grad) {
        Mat<T> Pv = out.perm;
        if (!cfg.gated_grad) detach(Pv);
        out.values = matvec(Pv, x);
    } else {
        out.values.assign(v.begin(), v.begin() + long(n));
    }
    return out;
}

template <class T>
Mat<T> network_argsort(const Vec<T>& x, const SoftConfig& cfg) {
    return network_sort(x, cfg).perm;
}

template <class T>
Vec<T> network_sort_values(const Vec<T>& x, const SoftConfig& cfg) {
    return network_sort(x, cfg).values;
}

template <class T>
Vec<T> network_argmax(const Vec<T>& x, const SoftConfig& cfg) {
    auto r = network_sort(x, cfg);
    Vec<T> p(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) p[j] = r.perm(x.size() - 1, j);
    return p;
}

template <class T>
Vec<T> network_argmin(const Vec<T>& x, const SoftConfig& cfg) {
    auto r = network_sort(x, cfg);
    Vec<T> p(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) p[j] = r.perm(0, j);
    return p;
}

template <class T>
T network_max(const Vec<T>& x, const SoftConfig& cfg) {
    return network_sort(x, cfg).values.back();
}

template <class T>
T network_min(const Vec<T>& x, const SoftConfig& cfg) {
    return network_sort(x, cfg).values.front();
}

template <class T>
TopK<T> network_topk(const Vec<T>& x, std::size_t k, const SoftConfig& cfg) {
    const std::size_t n = x.size();
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "network_topk: k must satisfy 1 <= k <= n");
    auto r = network_sort(x, cfg);
    TopK<T> out;
    out.perm = Mat<T>(k, n);
    out.values.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.values[i] = r.values[n - 1 - i];
        for (std::size_t j = 0; j < n; ++j) out.perm(i, j) = r.perm(n - 1 - i, j);
    }
    return out;
}

template <class T>
T network_quantile(const Vec<T>& x, double q, const SoftConfig& cfg,
                   QuantileCombine combine = QuantileCombine::Midpoint) {
    detail::check_q(q);
    auto r = network_sort(x, cfg);
    const double pos = q * double(x.size() - 1);
    const std::size_t lo = std::size_t(std::floor(pos)), hi = std::size_t(std::ceil(pos));
    return detail::combine_quantile(r.values[lo], r.values[hi], pos - double(lo), combine);
}

template <class T>
T network_median(const Vec<T>& x, const SoftConfig& cfg) {
    return network_quantile(x, 0.5, cfg, QuantileCombine::Interpolate);
}

}  // namespace softops

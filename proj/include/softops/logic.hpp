#pragma once

#include "softops/core.hpp"

namespace softops {

enum class Aggregator { Product, Geomean };

template <class T>
T logical_not(const T& p) {
    return 1.0 - p;
}

// Empty input gives 1.
template <class T>
T all(const Vec<T>& ps, Aggregator agg = Aggregator::Product) {
    T prod(1);
    for (const T& p : ps) prod *= p;
    if (agg == Aggregator::Product || ps.empty()) return prod;
    if (prod <= T(0)) return T(0);
    return exp(log(prod) / static_cast<double>(ps.size()));
}

template <class T>
T any(const Vec<T>& ps, Aggregator agg = Aggregator::Product) {
    Vec<T> neg(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) neg[i] = logical_not(ps[i]);
    return logical_not(all(neg, agg));
}

template <class T>
T logical_and(const T& p, const T& q) {
    return all(Vec<T>{p, q});
}

template <class T>
T logical_or(const T& p, const T& q) {
    return any(Vec<T>{p, q});
}

template <class T>
T logical_xor(const T& p, const T& q) {
    return logical_or(logical_and(p, logical_not(q)), logical_and(logical_not(p), q));
}

template <class T>
Vec<T> where(const Vec<T>& p, const Vec<T>& x, const Vec<T>& y) {
    if (p.size() != x.size() || x.size() != y.size())
        throw Error(ErrorKind::ShapeMismatch, "where: p, x and y must have the same length");
    Vec<T> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = p[i] * x[i] + (1.0 - p[i]) * y[i];
    return z;
}

}  // namespace softops

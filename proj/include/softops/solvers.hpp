#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

#include "softops/core.hpp"
#include "softops/simplex.hpp"

namespace softops {

struct SolverParams {
    int max_iter = 1000;
    double tol = 1e-9;
    int memory = 10;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iters)
        : Error(ErrorKind::NoConvergence, what), residual(residual), iters(iters) {}
    double residual;
    int iters;
};

// ---------------------------------------------------------------- L-BFGS

// Returns f(x) and writes the gradient into g.
using Objective = std::function<double(const Vec<double>& x, Vec<double>& g)>;

struct LbfgsResult {
    Vec<double> x;
    double f = 0.0;
    double grad_inf = 0.0;
    int iters = 0;
};

LbfgsResult lbfgs(const Objective& fun, Vec<double> x0, const SolverParams& params);

// ---------------------------------------------------------------- CG

using LinearOperator = std::function<Vec<double>(const Vec<double>&)>;

Vec<double> conjugate_gradient(const LinearOperator& A, const Vec<double>& b, const SolverParams& params);

// ---------------------------------------------------------------- dense solve

// Gaussian elimination with partial pivoting on values.
template <class T>
Vec<T> solve_dense(Mat<T> A, Vec<T> b) {
    const std::size_t n = A.rows;
    if (A.cols != n || b.size() != n) throw Error(ErrorKind::ShapeMismatch, "solve_dense: shape mismatch");
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(val(A(r, c))) > std::fabs(val(A(piv, c)))) piv = r;
        if (val(A(piv, c)) == 0.0) throw Error(ErrorKind::InvalidArgument, "solve_dense: singular matrix");
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(c, j), A(piv, j));
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            T f = A(r, c) / A(c, c);
            if (val(f) == 0.0 && tan_of(f) == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) A(r, j) -= f * A(c, j);
            b[r] -= f * b[c];
        }
    }
    Vec<T> x(n);
    for (std::size_t i = n; i-- > 0;) {
        T s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

// ---------------------------------------------------------------- Sinkhorn

struct SinkhornTrace {
    std::vector<double> taus;  // annealing schedule
    std::vector<int> iters;    // iterations spent at each stage
    std::vector<double> newton_steps;  // damped Newton polish at the final tau
    double residual = 0.0;
};

namespace detail {

template <class T>
T logsumexp(const Vec<T>& v) {
    T mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(val(mx))) return mx;
    T s(0);
    for (const T& x : v) s += exp(x - mx);
    return mx + log(s);
}

template <class T>
void sinkhorn_g_update(const Mat<T>& C, const Vec<T>& f, Vec<T>& g, const Vec<double>& logb, double tau) {
    const std::size_t n = C.rows, m = C.cols;
    Vec<T> buf(n);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) buf[i] = (f[i] - C(i, j)) / tau;
        g[j] = tau * (logb[j] - logsumexp(buf));
    }
}

template <class T>
void sinkhorn_f_update(const Mat<T>& C, Vec<T>& f, const Vec<T>& g, const Vec<double>& loga, double tau) {
    const std::size_t n = C.rows, m = C.cols;
    Vec<T> buf(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) buf[j] = (g[j] - C(i, j)) / tau;
        f[i] = tau * (loga[i] - logsumexp(buf));
    }
}

template <class T>
Mat<T> gibbs_plan(const Mat<T>& C, const Vec<T>& f, const Vec<T>& g, double tau) {
    Mat<T> G(C.rows, C.cols);
    for (std::size_t i = 0; i < C.rows; ++i)
        for (std::size_t j = 0; j < C.cols; ++j) G(i, j) = exp((f[i] + g[j] - C(i, j)) / tau);
    return G;
}

inline double row_residual(const Mat<double>& G, const Vec<double>& a) {
    double r = 0.0;
    for (std::size_t i = 0; i < G.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < G.cols; ++j) s += G(i, j);
        r = std::max(r, std::fabs(s - a[i]));
    }
    return r;
}

inline void check_marginals(const Vec<double>& a, const Vec<double>& b, std::size_t n, std::size_t m) {
    if (a.size() != n || b.size() != m) throw Error(ErrorKind::ShapeMismatch, "transport: marginal sizes do not match cost");
    auto check = [](const Vec<double>& v) {
        double s = 0.0;
        for (double x : v) {
            if (x < 0.0) throw Error(ErrorKind::InvalidArgument, "transport: negative marginal");
            s += x;
        }
        if (std::fabs(s - 1.0) > 1e-9) throw Error(ErrorKind::InvalidArgument, "transport: marginal does not sum to 1");
    };
    check(a);
    check(b);
}

}  // namespace detail

namespace detail {


inline double ot_q(Mode m) {
    switch (m) {
        case Mode::C0: return 2.0;
        case Mode::C1: return 3.0;
        case Mode::C2: return 4.0;
        default: break;
    }
    throw Error(ErrorKind::InvalidConfig, "dual OT requires mode c0, c1 or c2");
}

// Gamma entry and its derivative with respect to u = f_i + g_j - C_ij.
// q = 0 selects the entropic plan exp(u / tau).
template <class T>
void plan_entry(const T& u, double tau, double q, T& gamma, T& dgamma) {
    if (q == 0.0) {
        gamma = exp(u / tau);
        dgamma = gamma / tau;
        return;
    }
    if (u <= T(0)) {
        gamma = T(0);
        dgamma = T(0);
        return;
    }
    T r = u / tau;
    if (q == 2.0) {
        gamma = r;
        dgamma = T(1.0 / tau);
    } else if (q == 3.0) {
        gamma = r * r;
        dgamma = 2.0 * r / tau;
    } else {
        gamma = r * r * r;
        dgamma = 3.0 * r * r / tau;
    }
}

// Entries with u at roundoff level count as inactive (piecewise modes only).
template <class T>
double active_threshold(const Mat<T>& C) {
    double cmax = 1.0;
    for (const T& c : C.a) cmax = std::max(cmax, std::fabs(val(c)));
    return 1e-12 * cmax;
}

template <class T>
void plan_entry_cut(const T& u, double tau, double q, double thr, T& gamma, T& dgamma) {
    if (q != 0.0 && val(u) <= thr) {
        gamma = T(0);
        dgamma = T(0);
        return;
    }
    plan_entry(u, tau, q, gamma, dgamma);
}

// Newton steps on the dual optimality system with g_{m-1} held fixed. When the
// active support splits into several components, each component without
// column m-1 has a free shift (f + c, g - c); one of its potentials is pinned.
template <class T>
void dual_ot_newton(const Mat<T>& C, const Vec<double>& a, const Vec<double>& b, double tau, double q, Vec<T>& f,
                    Vec<T>& g, int steps, double scale = 1.0) {
    const std::size_t n = C.rows, m = C.cols, N = n + m - 1;
    const double thr = active_threshold(C);
    for (int s = 0; s < steps; ++s) {
        Mat<T> H(N, N);
        Vec<T> F(N, T(0));
        for (std::size_t i = 0; i < n; ++i) F[i] = T(-a[i]);
        for (std::size_t j = 0; j + 1 < m; ++j) F[n + j] = T(-b[j]);
        // union-find over rows 0..n-1 and columns n..n+m-1
        std::vector<std::size_t> parent(n + m);
        std::iota(parent.begin(), parent.end(), std::size_t(0));
        auto root = [&](std::size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        double dmax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                T gam, dg;
                plan_entry_cut(T(f[i] + g[j] - C(i, j)), tau, q, thr, gam, dg);
                if (val(dg) > 0.0) parent[root(i)] = root(n + j);
                F[i] += gam;
                H(i, i) += dg;
                if (j + 1 < m) {
                    F[n + j] += gam;
                    H(n + j, n + j) += dg;
                    H(i, n + j) += dg;
                    H(n + j, i) += dg;
                }
            }
        if (q != 0.0) {
            const std::size_t fixed = root(n + m - 1);
            std::vector<bool> pinned(n + m, false);
            pinned[fixed] = true;
            // prefer pinning a column potential, scanning columns first
            for (std::size_t v = n + m - 1; v-- > 0;) {
                const std::size_t node = v < m - 1 ? n + v : v - (m - 1);
                const std::size_t r = root(node);
                if (pinned[r]) continue;
                pinned[r] = true;
                const std::size_t k = node;  // variable index: rows 0..n-1, columns n..n+m-2
                for (std::size_t t = 0; t < N; ++t) {
                    H(k, t) = T(0);
                    H(t, k) = T(0);
                }
                H(k, k) = T(1);
                F[k] = T(0);
            }
        }
        for (std::size_t k = 0; k < N; ++k) dmax = std::max(dmax, val(H(k, k)));
        const double ridge = 1e-12 * std::max(dmax, 1.0);
        for (std::size_t k = 0; k < N; ++k) {
            H(k, k) += ridge;
            F[k] = -F[k];
        }
        Vec<T> step = solve_dense(H, F);
        for (std::size_t i = 0; i < n; ++i) f[i] += step[i] * scale;
        for (std::size_t j = 0; j + 1 < m; ++j) g[j] += step[n + j] * scale;
    }
}

}  // namespace detail

namespace detail {

template <class T>
T entropic_neg_dual(const Mat<T>& C, const Vec<double>& a, const Vec<double>& b, const Vec<T>& f, const Vec<T>& g,
                    double tau) {
    T s(0);
    for (std::size_t i = 0; i < C.rows; ++i) s -= a[i] * f[i];
    for (std::size_t j = 0; j < C.cols; ++j) s -= b[j] * g[j];
    for (std::size_t i = 0; i < C.rows; ++i)
        for (std::size_t j = 0; j < C.cols; ++j) s += tau * exp((f[i] + g[j] - C(i, j)) / tau);
    return s;
}

inline double marginal_residual(const Mat<double>& G, const Vec<double>& a, const Vec<double>& b) {
    return std::max(row_residual(G, a), row_residual(transpose(G), b));
}

}  // namespace detail

// Log-domain Sinkhorn with tau annealing, finished by damped Newton steps on the
// entropic dual when the final stage stalls. The trace records the schedule, the
// iteration counts and the Newton step lengths so that a second pass with another
// scalar type can replay exactly the same arithmetic.
inline Mat<double> sinkhorn_solve(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, double tau,
                                  const SolverParams& params, SinkhornTrace* trace = nullptr) {
    detail::check_marginals(a, b, C.rows, C.cols);
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidConfig, "sinkhorn: tau must be > 0");
    const std::size_t n = C.rows, m = C.cols;
    Vec<double> loga(n), logb(m);
    for (std::size_t i = 0; i < n; ++i) loga[i] = std::log(a[i]);
    for (std::size_t j = 0; j < m; ++j) logb[j] = std::log(b[j]);

    double cmax = 0.0;
    for (double c : C.a) cmax = std::max(cmax, std::fabs(c));
    std::vector<double> taus;
    for (double t = std::max(cmax, tau); t > tau; t *= 0.5) taus.push_back(t);
    taus.push_back(tau);

    Vec<double> f(n, 0.0), g(m, 0.0);
    SinkhornTrace tr;
    tr.taus = taus;
    int total = 0;
    double res = std::numeric_limits<double>::infinity();
    constexpr double kNewtonSwitch = 1e-6;
    constexpr int kStageCap = 5000;
    for (std::size_t s = 0; s < taus.size(); ++s) {
        const bool last = s + 1 == taus.size();
        const double stage_tol = last ? std::max(params.tol, kNewtonSwitch) : std::max(params.tol, 1e-3);
        int it = 0;
        while (true) {
            detail::sinkhorn_g_update(C, f, g, logb, taus[s]);
            detail::sinkhorn_f_update(C, f, g, loga, taus[s]);
            ++it;
            ++total;
            // f update makes rows exact; check the columns
            Mat<double> G = detail::gibbs_plan(C, f, g, taus[s]);
            res = detail::row_residual(transpose(G), b);
            // annealing stages are warm starts; a stall at the final stage is
            // handed to the Newton polish below, which decides convergence
            if (res <= stage_tol || it >= kStageCap || total >= params.max_iter) break;
        }
        tr.iters.push_back(it);
    }

    double cur = detail::entropic_neg_dual(C, a, b, f, g, tau);
    for (int k = 0; k < 100 && res > params.tol; ++k) {
        Vec<double> f1 = f, g1 = g;
        try {
            detail::dual_ot_newton(C, a, b, tau, 0.0, f1, g1, 1);
        } catch (const Error&) {
            break;
        }
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec<double> ft(n), gt(m);
            for (std::size_t i = 0; i < n; ++i) ft[i] = f[i] + step * (f1[i] - f[i]);
            for (std::size_t j = 0; j < m; ++j) gt[j] = g[j] + step * (g1[j] - g[j]);
            double vt = detail::entropic_neg_dual(C, a, b, ft, gt, tau);
            if (std::isfinite(vt) && vt <= cur + 1e-14 * std::max(1.0, std::fabs(cur))) {
                f = ft;
                g = gt;
                cur = vt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        tr.newton_steps.push_back(step);
        res = detail::marginal_residual(detail::gibbs_plan(C, f, g, tau), a, b);
    }
    if (res > params.tol)
        throw SolverError("sinkhorn: no convergence after " + std::to_string(total) + " iterations and " +
                              std::to_string(tr.newton_steps.size()) + " Newton steps (marginal residual " +
                              fmt_sci(res) + ")",
                          res, total);
    tr.residual = res;
    if (trace) *trace = tr;
    return detail::gibbs_plan(C, f, g, tau);
}

template <class T>
Mat<T> sinkhorn_replay(const Mat<T>& C, const Vec<double>& a, const Vec<double>& b, const SinkhornTrace& tr) {
    const std::size_t n = C.rows, m = C.cols;
    Vec<double> loga(n), logb(m);
    for (std::size_t i = 0; i < n; ++i) loga[i] = std::log(a[i]);
    for (std::size_t j = 0; j < m; ++j) logb[j] = std::log(b[j]);
    Vec<T> f(n, T(0)), g(m, T(0));
    for (std::size_t s = 0; s < tr.taus.size(); ++s)
        for (int it = 0; it < tr.iters[s]; ++it) {
            detail::sinkhorn_g_update(C, f, g, logb, tr.taus[s]);
            detail::sinkhorn_f_update(C, f, g, loga, tr.taus[s]);
        }
    for (double step : tr.newton_steps) detail::dual_ot_newton(C, a, b, tr.taus.back(), 0.0, f, g, 1, step);
    return detail::gibbs_plan(C, f, g, tr.taus.back());
}

// Entropic transport plan. Dual inputs are differentiated by unrolling the
// iteration count recorded from the converged double-precision solve.
template <class T>
Mat<T> sinkhorn(const Mat<T>& C, const Vec<double>& a, const Vec<double>& b, double tau, const SolverParams& params) {
    if constexpr (std::is_same_v<T, double>) {
        return sinkhorn_solve(C, a, b, tau, params);
    } else {
        SinkhornTrace tr;
        sinkhorn_solve(values(C), a, b, tau, params, &tr);
        return sinkhorn_replay(C, a, b, tr);
    }
}

// ---------------------------------------------------------------- dual OT

struct DualOtPotentials {
    Vec<double> f, g;
    double dual_value = 0.0;
    double residual = 0.0;
    int iters = 0;
};

// L-BFGS on the negated dual, followed by a damped Newton polish.
DualOtPotentials dual_ot_solve(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, double tau, Mode mode,
                               const SolverParams& params);

template <class T>
Mat<T> dual_ot_plan(const Mat<T>& C, const Vec<T>& f, const Vec<T>& g, double tau, double q) {
    Mat<T> G(C.rows, C.cols);
    const double thr = detail::active_threshold(C);
    for (std::size_t i = 0; i < C.rows; ++i)
        for (std::size_t j = 0; j < C.cols; ++j) {
            T dg;
            detail::plan_entry_cut(T(f[i] + g[j] - C(i, j)), tau, q, thr, G(i, j), dg);
        }
    return G;
}

// Transport plan for c0/c1/c2 regularization. Dual inputs are differentiated by
// unrolling two Newton steps on the optimality system from the converged potentials.
template <class T>
Mat<T> dual_ot_lbfgs(const Mat<T>& C, const Vec<double>& a, const Vec<double>& b, double tau, Mode mode,
                     const SolverParams& params) {
    const double q = detail::ot_q(mode);
    DualOtPotentials pot = dual_ot_solve(values(C), a, b, tau, mode, params);
    Vec<T> f = lift<T>(pot.f), g = lift<T>(pot.g);
    if constexpr (!std::is_same_v<T, double>) detail::dual_ot_newton(C, a, b, tau, q, f, g, 2);
    return dual_ot_plan(C, f, g, tau, q);
}

// Primal objective <C, G> + regularizer for the plan G.
double ot_primal_value(const Mat<double>& C, const Mat<double>& G, double tau, Mode mode);
double ot_dual_value(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, const Vec<double>& f,
                     const Vec<double>& g, double tau, Mode mode);

// ---------------------------------------------------------------- PAV

enum class Direction { Increasing, Decreasing };
enum class IsoLossKind { Euclidean, LogKL, PNorm };

struct IsoLoss {
    IsoLossKind kind = IsoLossKind::Euclidean;
    double q = 2.0;  // exponent of the p-norm loss, 3 or 4

    static IsoLoss euclidean() { return {IsoLossKind::Euclidean, 2.0}; }
    static IsoLoss logkl() { return {IsoLossKind::LogKL, 0.0}; }
    static IsoLoss pnorm(double q) {
        if (q != 3.0 && q != 4.0) throw Error(ErrorKind::InvalidArgument, "IsoLoss::pnorm: q must be 3 or 4");
        return {IsoLossKind::PNorm, q};
    }
};

// Per-element losses (all plus w_i * v):
//   euclidean  (v - y)^2 / 2
//   logkl      exp(y - v)            (w defaults to 1)
//   pnorm      |y - v|^q / q
double iso_element_loss(const IsoLoss& loss, double v, double y, double w);

namespace detail {

// Optimal common value of a pooled block.
template <class T>
T pool_value(const IsoLoss& loss, const Vec<T>& y, const Vec<T>& w, std::size_t lo, std::size_t hi) {
    const double k = static_cast<double>(hi - lo);
    T sy(0), sw(0);
    for (std::size_t i = lo; i < hi; ++i) {
        sy += y[i];
        sw += w[i];
    }
    switch (loss.kind) {
        case IsoLossKind::Euclidean: return (sy - sw) / k;
        case IsoLossKind::LogKL: {
            T mx = y[lo];
            for (std::size_t i = lo; i < hi; ++i) mx = std::max(mx, y[i]);
            T s(0);
            for (std::size_t i = lo; i < hi; ++i) s += exp(y[i] - mx);
            return mx + log(s) - log(sw);
        }
        case IsoLossKind::PNorm: {
            T mean = sy / k;
            if (loss.q == 4.0) {
                // sum (y_i - v)^3 = W, with t = mean - v
                T c2(0), c3(0);
                for (std::size_t i = lo; i < hi; ++i) {
                    T d = y[i] - mean;
                    c2 += d * d;
                    c3 += d * d * d;
                }
                return mean - depressed_cubic_root<T>(3.0 * c2 / k, (c3 - sw) / k);
            }
            // q == 3: sum (y_i - v)|y_i - v| = W, piecewise quadratic in v
            std::vector<std::size_t> idx;
            for (std::size_t i = lo; i < hi; ++i) idx.push_back(i);
            std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t r) { return y[p] < y[r]; });
            const double W = val(sw);
            auto F = [&](double v) {
                double s = 0.0;
                for (std::size_t i : idx) {
                    double d = val(y[i]) - v;
                    s += d * std::fabs(d);
                }
                return s - W;
            };
            // locate the bracket [y_(r-1), y_(r)] holding the root; F is decreasing
            std::size_t r = 0;
            while (r < idx.size() && F(val(y[idx[r]])) > 0.0) ++r;
            // elements idx[r..] are >= v (upper), idx[..r) are below; work in
            // d = y - mean to keep the quadratic's coefficients small
            T su(0), su2(0), sl(0), sl2(0);
            double nu = 0, nl = 0;
            for (std::size_t t = 0; t < idx.size(); ++t) {
                const T d = y[idx[t]] - mean;
                if (t >= r) {
                    su += d;
                    su2 += d * d;
                    nu += 1;
                } else {
                    sl += d;
                    sl2 += d * d;
                    nl += 1;
                }
            }
            // (nu - nl) t^2 - 2 (su - sl) t + (su2 - sl2) - W = 0, v = mean + t
            const double A = nu - nl;
            T B = -2.0 * (su - sl);
            T Cc = su2 - sl2 - sw;
            if (A == 0.0) return mean - Cc / B;
            T disc = B * B - 4.0 * A * Cc;
            if (disc < T(0)) disc = T(0);
            T sq = sqrt(disc);
            // stable pair of roots
            T qq = B < T(0) ? (sq - B) / 2.0 : -(B + sq) / 2.0;
            T r1 = mean + qq / A, r2 = qq == T(0) ? mean : mean + Cc / qq;
            double lo_v = r > 0 ? val(y[idx[r - 1]]) : -std::numeric_limits<double>::infinity();
            double hi_v = r < idx.size() ? val(y[idx[r]]) : std::numeric_limits<double>::infinity();
            auto dist = [&](double v) { return std::max(0.0, lo_v - v) + std::max(0.0, v - hi_v); };
            return dist(val(r1)) <= dist(val(r2)) ? r1 : r2;
        }
    }
    return T(0);
}

template <class T>
Vec<T> pav_decreasing(const IsoLoss& loss, const Vec<T>& y, const Vec<T>& w) {
    struct Block {
        std::size_t lo, hi;
        T v;
    };
    std::vector<Block> st;
    for (std::size_t i = 0; i < y.size(); ++i) {
        st.push_back({i, i + 1, pool_value(loss, y, w, i, i + 1)});
        while (st.size() > 1 && st[st.size() - 2].v < st.back().v) {
            Block b = st.back();
            st.pop_back();
            st.back().hi = b.hi;
            st.back().v = pool_value(loss, y, w, st.back().lo, st.back().hi);
        }
    }
    Vec<T> out(y.size());
    for (const auto& b : st)
        for (std::size_t i = b.lo; i < b.hi; ++i) out[i] = b.v;
    return out;
}

}  // namespace detail

// Isotonic regression under a separable convex loss with per-element linear weights w.
template <class T>
Vec<T> pav_isotonic(const Vec<T>& y, Direction dir, const IsoLoss& loss, const Vec<T>* w = nullptr) {
    const std::size_t n = y.size();
    if (n == 0) return {};
    Vec<T> ww(n, T(loss.kind == IsoLossKind::LogKL ? 1.0 : 0.0));
    if (w) {
        if (w->size() != n) throw Error(ErrorKind::ShapeMismatch, "pav_isotonic: weight size mismatch");
        ww = *w;
    }
    if (dir == Direction::Decreasing) return detail::pav_decreasing(loss, y, ww);
    Vec<T> yr(y.rbegin(), y.rend()), wr(ww.rbegin(), ww.rend());
    Vec<T> out = detail::pav_decreasing(loss, yr, wr);
    return Vec<T>(out.rbegin(), out.rend());
}

}  // namespace softops

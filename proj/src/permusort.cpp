#include "softops/permusort.hpp"

#include <limits>

namespace softops {

namespace {

double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Solves H x = r for a symmetric pentadiagonal H given by its three upper bands.
Vec<double> solve_penta(Vec<double> d0, Vec<double> d1, Vec<double> d2, Vec<double> r) {
    const std::size_t m = d0.size();
    // banded Cholesky, L has diagonal l0 and subdiagonals l1, l2
    Vec<double> l0(m), l1(m, 0.0), l2(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double a = d0[i];
        if (i >= 1) a -= l1[i - 1] * l1[i - 1];
        if (i >= 2) a -= l2[i - 2] * l2[i - 2];
        if (!(a > 0.0)) throw Error(ErrorKind::NoConvergence, "smoothsort: Hessian not positive definite");
        l0[i] = std::sqrt(a);
        if (i + 1 < m) {
            double b = d1[i];
            if (i >= 1) b -= l2[i - 1] * l1[i - 1];
            l1[i] = b / l0[i];
        }
        if (i + 2 < m) l2[i] = d2[i] / l0[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
        double s = r[i];
        if (i >= 1) s -= l1[i - 1] * r[i - 1];
        if (i >= 2) s -= l2[i - 2] * r[i - 2];
        r[i] = s / l0[i];
    }
    for (std::size_t k = m; k-- > 0;) {
        double s = r[k];
        if (k + 1 < m) s -= l1[k] * r[k + 1];
        if (k + 2 < m) s -= l2[k] * r[k + 2];
        r[k] = s / l0[k];
    }
    return r;
}

struct SmoothDual {
    Vec<double> dy, bt;  // dy_k = y_k - y_{k+1} (descending y), bt = smoothed bounds k = 1..n-1
    double c = 0.0, yn = 0.0, tau = 1.0;

    std::size_t m() const { return dy.size(); }

    double beta_at(const Vec<double>& b, long k) const {
        return (k < 0 || k >= long(m())) ? 0.0 : b[std::size_t(k)];
    }

    Vec<double> alpha(const Vec<double>& b) const {
        Vec<double> a(m());
        for (std::size_t k = 0; k < m(); ++k)
            a[k] = dy[k] + 2.0 * b[k] - beta_at(b, long(k) - 1) - beta_at(b, long(k) + 1);
        return a;
    }

    double value(const Vec<double>& b, Vec<double>* grad) const {
        const std::size_t M = m();
        Vec<double> a = alpha(b);
        double nu = yn - b[M - 1];
        double f = nu * c;
        Vec<double> ga(M);
        for (std::size_t k = 0; k < M; ++k) {
            double s = std::exp(-a[k] / tau), d = std::exp(-b[k] / tau);
            f += a[k] * bt[k] + tau * s + tau * d;
            ga[k] = bt[k] - s;
        }
        if (grad) {
            grad->assign(M, 0.0);
            for (std::size_t j = 0; j < M; ++j) {
                double g = 2.0 * ga[j] - std::exp(-b[j] / tau);
                if (j >= 1) g -= ga[j - 1];
                if (j + 1 < M) g -= ga[j + 1];
                (*grad)[j] = g;
            }
            (*grad)[M - 1] -= c;
        }
        return f;
    }

    // H = M^T diag(s / tau) M + diag(d / tau), M tridiagonal (2 on the diagonal, -1 off it).
    Vec<double> newton_step(const Vec<double>& b, const Vec<double>& grad) const {
        const std::size_t M = m();
        Vec<double> a = alpha(b), w(M), d0(M, 0.0), d1(M, 0.0), d2(M, 0.0);
        for (std::size_t k = 0; k < M; ++k) w[k] = std::exp(-a[k] / tau) / tau;
        for (std::size_t k = 0; k < M; ++k) {
            // row k of M has entries at columns k-1 (-1), k (2), k+1 (-1)
            const long cols[3] = {long(k) - 1, long(k), long(k) + 1};
            const double vals[3] = {-1.0, 2.0, -1.0};
            for (int p = 0; p < 3; ++p)
                for (int q = p; q < 3; ++q) {
                    if (cols[p] < 0 || cols[q] >= long(M)) continue;
                    double h = w[k] * vals[p] * vals[q];
                    std::size_t i = std::size_t(cols[p]), off = std::size_t(cols[q] - cols[p]);
                    if (off == 0) d0[i] += h;
                    else if (off == 1) d1[i] += h;
                    else d2[i] += h;
                }
        }
        double dmax = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            d0[j] += std::exp(-b[j] / tau) / tau;
            dmax = std::max(dmax, d0[j]);
        }
        for (std::size_t j = 0; j < M; ++j) d0[j] += 1e-14 * std::max(dmax, 1.0);
        Vec<double> r(M);
        for (std::size_t j = 0; j < M; ++j) r[j] = -grad[j];
        return solve_penta(d0, d1, d2, r);
    }
};

double inf_norm(const Vec<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void require_smooth(const SoftConfig& cfg, const char* op) {
    validate(cfg);
    if (cfg.mode != Mode::Smooth)
        throw Error(ErrorKind::Unsupported, std::string(op) + ": SmoothSort supports only mode=smooth (got " +
                                                name(cfg.mode) + ")");
}

}  // namespace

SmoothBounds smooth_bounds(const Vec<double>& z, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidConfig, "smooth_bounds: tau must be > 0");
    const std::size_t n = z.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "smooth_bounds: empty input");
    Vec<double> L(n + 1, -std::numeric_limits<double>::infinity());
    L[0] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = z[j] / tau;
        for (std::size_t k = j + 1; k >= 1; --k) L[k] = logaddexp(L[k], e + L[k - 1]);
    }
    // b_tilde = b + gap with gap = tau log e_k(...) - b >= 0; writing it this way
    // keeps b_tilde >= b exact in floating point
    Vec<double> zd = z;
    std::sort(zd.rbegin(), zd.rend());
    SmoothBounds out;
    out.tau = tau;
    out.b_tilde.resize(n);
    double b = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        b += zd[k - 1];
        double gap = k == n ? 0.0 : std::max(0.0, tau * L[k] - b);
        out.b_tilde[k - 1] = b + gap;
    }
    return out;
}

Vec<double> smoothsort_project(const Vec<double>& y, const Vec<double>& z, double tau, SmoothSortInfo* info) {
    const std::size_t n = y.size();
    if (z.size() != n) throw Error(ErrorKind::ShapeMismatch, "smoothsort: y and z differ in length");
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "smoothsort: empty input");
    if (n == 1) return z;

    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::stable_sort(sigma.begin(), sigma.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
    SmoothBounds sb = smooth_bounds(z, tau);

    SmoothDual D;
    D.tau = tau;
    D.c = sb.b_tilde[n - 1];
    D.yn = y[sigma[n - 1]];
    D.dy.resize(n - 1);
    D.bt.assign(sb.b_tilde.begin(), sb.b_tilde.end() - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) D.dy[k] = y[sigma[k]] - y[sigma[k + 1]];

    double scale = 1.0;
    for (double v : z) scale = std::max(scale, std::fabs(v));
    for (double v : y) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-12 * scale;

    SolverParams lp;
    lp.max_iter = 5000;
    lp.tol = tol;
    Objective obj = [&](const Vec<double>& b, Vec<double>& g) { return D.value(b, &g); };
    Vec<double> beta(n - 1, 1.0);
    LbfgsResult lr;
    try {
        lr = lbfgs(obj, beta, lp);
        beta = lr.x;
    } catch (const SolverError&) {
        // the Newton polish below takes over from the initial point
    }

    Vec<double> grad;
    double cur = D.value(beta, &grad);
    int newton = 0;
    for (; newton < 200 && inf_norm(grad) > tol; ++newton) {
        Vec<double> step = D.newton_step(beta, grad);
        double t = 1.0;
        bool ok = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec<double> trial(beta);
            for (std::size_t j = 0; j < trial.size(); ++j) trial[j] += t * step[j];
            Vec<double> gt;
            double vt = D.value(trial, &gt);
            if (std::isfinite(vt) && vt <= cur + 1e-4 * t * std::inner_product(grad.begin(), grad.end(), step.begin(), 0.0) +
                                                1e-15 * std::fabs(cur)) {
                beta = trial;
                cur = vt;
                grad = gt;
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break;
    }
    const double gi = inf_norm(grad);
    if (!(gi <= 1e3 * tol))
        throw SolverError("smoothsort: dual not converged (gradient inf-norm " + fmt_sci(gi) + ")", gi,
                          lr.iters + newton);
    if (info) {
        info->beta = beta;
        info->dual_value = cur;
        info->grad_inf = gi;
        info->iters = lr.iters + newton;
    }

    Vec<double> a = D.alpha(beta), r(n - 1), pd(n);
    for (std::size_t k = 0; k + 1 < n; ++k) r[k] = D.bt[k] - std::exp(-a[k] / tau);
    pd[0] = r[0];
    for (std::size_t k = 1; k + 1 < n; ++k) pd[k] = r[k] - r[k - 1];
    pd[n - 1] = D.c - r[n - 2];
    Vec<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[sigma[k]] = pd[k];
    return out;
}

Vec<double> smoothsort_sort_values(const Vec<double>& x, const SoftConfig& cfg) {
    require_smooth(cfg, "smoothsort_sort");
    Vec<double> lab(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lab[i] = double(i + 1);
    return smoothsort_project(lab, x, cfg.tau);
}

Vec<double> smoothsort_rank_values(const Vec<double>& x, const SoftConfig& cfg) {
    require_smooth(cfg, "smoothsort_rank");
    Vec<double> neg(x.size()), lab(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        neg[i] = -x[i];
        lab[i] = double(i + 1);
    }
    return smoothsort_project(neg, lab, cfg.tau);
}

}  // namespace softops

#include "softops/solvers.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace softops {

namespace {

double dot(const Vec<double>& a, const Vec<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(const Vec<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

struct LinePoint {
    double a, f, dphi;
    Vec<double> x, g;
};

enum class LsStatus { Ok, Failed, Unbounded };

struct LineSearch {
    const Objective& fun;
    const Vec<double>& x;
    const Vec<double>& d;
    double f0, dphi0;
    static constexpr double c1 = 1e-4, c2 = 0.9;

    LinePoint eval(double a) const {
        LinePoint p;
        p.a = a;
        p.x = x;
        for (std::size_t i = 0; i < x.size(); ++i) p.x[i] += a * d[i];
        p.g.assign(x.size(), 0.0);
        p.f = fun(p.x, p.g);
        p.dphi = dot(p.g, d);
        if (!std::isfinite(p.dphi)) p.f = std::numeric_limits<double>::infinity();
        return p;
    }

    bool armijo(const LinePoint& p) const { return p.f <= f0 + c1 * p.a * dphi0; }
    bool curvature(const LinePoint& p) const { return std::fabs(p.dphi) <= -c2 * dphi0; }

    LsStatus zoom(LinePoint lo, LinePoint hi, LinePoint& out) const {
        for (int it = 0; it < 80; ++it) {
            double a;
            double width = hi.a - lo.a;
            if (std::isfinite(hi.f)) {
                // quadratic through (lo.f, lo.dphi) and hi.f
                double denom = 2.0 * (hi.f - lo.f - lo.dphi * width);
                a = denom > 0.0 ? lo.a - lo.dphi * width * width / denom : lo.a + 0.5 * width;
            } else {
                a = lo.a + 0.5 * width;
            }
            double amin = std::min(lo.a, hi.a), amax = std::max(lo.a, hi.a), span = amax - amin;
            a = std::clamp(a, amin + 0.1 * span, amax - 0.1 * span);
            LinePoint p = eval(a);
            if (!armijo(p) || p.f >= lo.f) {
                hi = p;
            } else {
                if (curvature(p)) {
                    out = p;
                    return LsStatus::Ok;
                }
                if (p.dphi * (hi.a - lo.a) >= 0.0) hi = lo;
                lo = p;
            }
            if (std::fabs(hi.a - lo.a) < 1e-16 * std::max(1.0, std::fabs(lo.a))) break;
        }
        // accept a sufficient-decrease point even without the curvature condition
        if (lo.a > 0.0 && lo.f < f0) {
            out = lo;
            return LsStatus::Ok;
        }
        return LsStatus::Failed;
    }

    LsStatus run(double a_init, LinePoint& out) const {
        LinePoint prev{0.0, f0, dphi0, x, {}};
        double a = a_init;
        for (int it = 0; it < 200; ++it) {
            LinePoint p = eval(a);
            if (!std::isfinite(p.f)) {
                if (!(p.f < 0)) {
                    // overflow: retreat towards the last finite point
                    LinePoint hi = p;
                    return zoom(prev, hi, out);
                }
            }
            if (p.f < -1e100) return LsStatus::Unbounded;
            if (!armijo(p) || (it > 0 && p.f >= prev.f)) return zoom(prev, p, out);
            if (curvature(p)) {
                out = p;
                return LsStatus::Ok;
            }
            if (p.dphi >= 0.0) return zoom(p, prev, out);
            prev = p;
            a *= 2.0;
            if (a > 1e30) return LsStatus::Unbounded;
        }
        return LsStatus::Unbounded;
    }
};

struct LbfgsRun {
    LbfgsResult res;
    bool converged = false;
    std::string failure;
};

LbfgsRun lbfgs_run(const Objective& fun, Vec<double> x, const SolverParams& params) {
    const std::size_t n = x.size();
    Vec<double> g(n, 0.0);
    double f = fun(x, g);
    if (!std::isfinite(f) || !std::isfinite(inf_norm(g))) throw SolverError("lbfgs: non-finite objective at start", f, 0);
    struct Pair {
        Vec<double> s, y;
        double rho;
    };
    std::deque<Pair> hist;
    const std::size_t m = static_cast<std::size_t>(std::max(1, params.memory));
    LbfgsRun run;
    for (int k = 0; k < params.max_iter; ++k) {
        run.res = {x, f, inf_norm(g), k};
        if (run.res.grad_inf <= params.tol) {
            run.converged = true;
            return run;
        }
        // two-loop recursion
        Vec<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
        std::vector<double> alpha(hist.size());
        for (std::size_t h = hist.size(); h-- > 0;) {
            alpha[h] = hist[h].rho * dot(hist[h].s, d);
            for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[h] * hist[h].y[i];
        }
        if (!hist.empty()) {
            const auto& last = hist.back();
            double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (double& v : d) v *= gamma;
        }
        for (std::size_t h = 0; h < hist.size(); ++h) {
            double beta = hist[h].rho * dot(hist[h].y, d);
            for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[h] - beta) * hist[h].s[i];
        }
        double dphi0 = dot(g, d);
        if (!(dphi0 < 0.0)) {
            hist.clear();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            dphi0 = dot(g, d);
        }
        LineSearch ls{fun, x, d, f, dphi0};
        LinePoint p;
        LsStatus st = ls.run(1.0, p);
        if (st == LsStatus::Unbounded) throw SolverError("lbfgs: objective appears unbounded below", f, k);
        if (st == LsStatus::Failed) {
            if (!hist.empty()) {
                hist.clear();
                continue;
            }
            run.failure = "lbfgs: line search failed";
            return run;
        }
        Pair pr;
        pr.s.resize(n);
        pr.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            pr.s[i] = p.x[i] - x[i];
            pr.y[i] = p.g[i] - g[i];
        }
        double sy = dot(pr.s, pr.y);
        x = std::move(p.x);
        g = std::move(p.g);
        f = p.f;
        if (sy > 1e-300) {
            pr.rho = 1.0 / sy;
            hist.push_back(std::move(pr));
            if (hist.size() > m) hist.pop_front();
        }
    }
    run.res = {x, f, inf_norm(g), params.max_iter};
    run.converged = run.res.grad_inf <= params.tol;
    if (!run.converged) run.failure = "lbfgs: max_iter reached";
    return run;
}

}  // namespace

LbfgsResult lbfgs(const Objective& fun, Vec<double> x0, const SolverParams& params) {
    LbfgsRun run = lbfgs_run(fun, std::move(x0), params);
    if (!run.converged)
        throw SolverError(run.failure + " (gradient inf-norm " + fmt_sci(run.res.grad_inf) + ")",
                          run.res.grad_inf, run.res.iters);
    return run.res;
}

Vec<double> conjugate_gradient(const LinearOperator& A, const Vec<double>& b, const SolverParams& params) {
    const std::size_t n = b.size();
    Vec<double> x(n, 0.0), r = b, p = b;
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return x;
    double rr = dot(r, r);
    for (int k = 0; k < params.max_iter; ++k) {
        if (std::sqrt(rr) <= params.tol * bnorm) return x;
        Vec<double> Ap = A(p);
        if (Ap.size() != n) throw Error(ErrorKind::ShapeMismatch, "conjugate_gradient: operator changed size");
        double alpha = rr / dot(p, Ap);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rr_new = dot(r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    // final check against the true residual
    Vec<double> Ax = A(x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (Ax[i] - b[i]) * (Ax[i] - b[i]);
    res = std::sqrt(res);
    if (res <= params.tol * bnorm) return x;
    throw SolverError("conjugate_gradient: iteration cap reached (relative residual " + fmt_sci(res / bnorm) + ")",
                      res / bnorm, params.max_iter);
}

// ---------------------------------------------------------------- dual OT

namespace {

double conj_penalty(double u, double tau, double q) {
    if (u <= 0.0) return 0.0;
    return std::pow(tau, 1.0 - q) / q * std::pow(u, q);
}

double neg_dual(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, const Vec<double>& z, double tau,
                double q, Vec<double>* grad) {
    const std::size_t n = C.rows, m = C.cols;
    double obj = 0.0;
    if (grad) grad->assign(n + m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        obj -= z[i] * a[i];
        if (grad) (*grad)[i] -= a[i];
    }
    for (std::size_t j = 0; j < m; ++j) {
        obj -= z[n + j] * b[j];
        if (grad) (*grad)[n + j] -= b[j];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double u = z[i] + z[n + j] - C(i, j);
            if (u <= 0.0) continue;
            obj += conj_penalty(u, tau, q);
            if (grad) {
                double gam = std::pow(u / tau, q - 1.0);
                (*grad)[i] += gam;
                (*grad)[n + j] += gam;
            }
        }
    return obj;
}

}  // namespace

DualOtPotentials dual_ot_solve(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, double tau, Mode mode,
                               const SolverParams& params) {
    detail::check_marginals(a, b, C.rows, C.cols);
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidConfig, "dual OT: tau must be > 0");
    const double q = detail::ot_q(mode);
    const std::size_t n = C.rows, m = C.cols;
    Vec<double> z(n + m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double cmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) cmin = std::min(cmin, C(i, j));
        z[n + j] = cmin + tau;
    }
    Objective obj = [&](const Vec<double>& x, Vec<double>& g) { return neg_dual(C, a, b, x, tau, q, &g); };
    SolverParams lp = params;
    LbfgsRun run = lbfgs_run(obj, z, lp);
    z = run.res.x;

    // Newton polish: the dual is piecewise smooth, so a few safeguarded steps
    // remove the slow tail of the quasi-Newton iteration.
    Vec<double> f(z.begin(), z.begin() + n), g(z.begin() + n, z.end());
    Vec<double> grad;
    auto pack = [&](const Vec<double>& ff, const Vec<double>& gg) {
        Vec<double> zz(ff);
        zz.insert(zz.end(), gg.begin(), gg.end());
        return zz;
    };
    double cur = neg_dual(C, a, b, z, tau, q, &grad);
    const double target = std::min(params.tol, 1e-13);
    for (int s = 0; s < 60 && inf_norm(grad) > target; ++s) {
        Vec<double> f1 = f, g1 = g;
        try {
            detail::dual_ot_newton(C, a, b, tau, q, f1, g1, 1);
        } catch (const Error&) {
            break;
        }
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec<double> ft(n), gt(m);
            for (std::size_t i = 0; i < n; ++i) ft[i] = f[i] + step * (f1[i] - f[i]);
            for (std::size_t j = 0; j < m; ++j) gt[j] = g[j] + step * (g1[j] - g[j]);
            Vec<double> gr;
            double val_t = neg_dual(C, a, b, pack(ft, gt), tau, q, &gr);
            if (val_t <= cur + 1e-14 * std::max(1.0, std::fabs(cur))) {
                f = ft;
                g = gt;
                cur = val_t;
                grad = gr;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    DualOtPotentials out;
    out.f = f;
    out.g = g;
    out.dual_value = -cur;
    out.residual = inf_norm(grad);
    out.iters = run.res.iters;
    if (out.residual > 10.0 * params.tol)
        throw SolverError((run.failure.empty() ? std::string("dual OT: not converged") : run.failure) +
                              " (marginal residual " + fmt_sci(out.residual) + ")",
                          out.residual, out.iters);
    return out;
}

double ot_primal_value(const Mat<double>& C, const Mat<double>& G, double tau, Mode mode) {
    double s = 0.0;
    for (std::size_t k = 0; k < C.a.size(); ++k) {
        double gam = G.a[k];
        s += C.a[k] * gam;
        switch (mode) {
            case Mode::Smooth:
                if (gam > 0.0) s += tau * gam * (std::log(gam) - 1.0);
                break;
            case Mode::C0: s += tau * gam * gam / 2.0; break;
            case Mode::C1: s += tau * std::pow(gam, 1.5) / 1.5; break;
            case Mode::C2: s += tau * std::pow(gam, 4.0 / 3.0) / (4.0 / 3.0); break;
        }
    }
    return s;
}

double ot_dual_value(const Mat<double>& C, const Vec<double>& a, const Vec<double>& b, const Vec<double>& f,
                     const Vec<double>& g, double tau, Mode mode) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += f[i] * a[i];
    for (std::size_t j = 0; j < b.size(); ++j) s += g[j] * b[j];
    for (std::size_t i = 0; i < C.rows; ++i)
        for (std::size_t j = 0; j < C.cols; ++j) {
            double u = f[i] + g[j] - C(i, j);
            if (mode == Mode::Smooth)
                s -= tau * std::exp(u / tau);
            else
                s -= conj_penalty(u, tau, detail::ot_q(mode));
        }
    return s;
}

double iso_element_loss(const IsoLoss& loss, double v, double y, double w) {
    switch (loss.kind) {
        case IsoLossKind::Euclidean: return 0.5 * (v - y) * (v - y) + w * v;
        case IsoLossKind::LogKL: return std::exp(y - v) + w * v;
        case IsoLossKind::PNorm: return std::pow(std::fabs(y - v), loss.q) / loss.q + w * v;
    }
    return 0.0;
}

}  // namespace softops

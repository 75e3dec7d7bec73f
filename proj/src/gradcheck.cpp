#include "softops/gradcheck.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <random>

#include "softops/axiswise.hpp"
#include "softops/elementwise.hpp"
#include "softops/logic.hpp"
#include "softops/simplex.hpp"

namespace softops {

namespace {

constexpr Mode kModes[] = {Mode::Smooth, Mode::C0, Mode::C1, Mode::C2};
constexpr std::size_t kAxisN = 6;

template <class V>
using Elem = typename std::decay_t<V>::value_type;

struct Builder {
    std::vector<OpCase> ops;

    template <class F>
    void add(const std::string& name, Mode m, std::size_t dim, Sampler s, F fn, std::optional<Method> method = {},
             bool solver = false, bool fd_only = false, double tau = 0.5) {
        SoftConfig c;
        c.tau = tau;
        c.mode = m;
        c.method = method;
        OpCase op;
        op.name = name;
        op.mode = m;
        op.dim = dim;
        op.tau = tau;
        op.sampler = s;
        op.solver_backed = solver;
        op.fd_only = fd_only;
        op.piecewise = m != Mode::Smooth || (method && *method == Method::FastSoftSort);
        op.f = [fn, c](const Vec<double>& x) { return fn(x, c); };
        op.fdual = [fn, c](const Vec<Dual>& x) { return fn(x, c); };
        ops.push_back(std::move(op));
    }
};

template <class V, class G>
auto map(const V& x, G g) {
    V out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = g(x[i]);
    return out;
}

template <class V>
std::pair<V, V> halves(const V& x) {
    const std::size_t h = x.size() / 2;
    return {V(x.begin(), x.begin() + long(h)), V(x.begin() + long(h), x.end())};
}

void add_elementwise(Builder& b, Mode m) {
    b.add("heaviside", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return heaviside(v, c); });
    });
    b.add("sign", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return sign(v, c); });
    });
    b.add("abs", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return softops::abs(v, c); });
    });
    b.add("round", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return softops::round(v, c); });
    });
    b.add("relu", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return relu(v, c); });
    });
    b.add("relu_gating", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return relu(v, c, ReluStyle::Gating); });
    });
    b.add("clip", m, 4, Sampler::Wide, [](const auto& x, const SoftConfig& c) {
        return map(x, [&](const auto& v) { return clip(v, -1.0, 1.5, c); });
    });
    const std::pair<const char*, Cmp> cmps[] = {{"greater", Cmp::Greater}, {"gtr_equal", Cmp::GtrEqual},
                                                {"less", Cmp::Less},       {"less_equal", Cmp::LessEqual},
                                                {"equal", Cmp::Equal},     {"not_equal", Cmp::NotEqual},
                                                {"isclose", Cmp::IsClose}};
    for (auto [nm, kind] : cmps)
        b.add(nm, m, 8, Sampler::Wide, [kind](const auto& x, const SoftConfig& c) {
            auto [u, v] = halves(x);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = compare(kind, u[i], v[i], c);
            return u;
        });
    b.add("simplex.project", m, kAxisN, Sampler::Normal,
          [](const auto& x, const SoftConfig& c) { return project(x, c).probs; });
}

void add_logic(Builder& b) {
    // mode does not enter these; registered once under smooth
    b.add("logic.all", Mode::Smooth, 4, Sampler::Unit, [](const auto& x, const SoftConfig&) {
        return std::decay_t<decltype(x)>{all(x), all(x, Aggregator::Geomean)};
    });
    b.add("logic.any", Mode::Smooth, 4, Sampler::Unit, [](const auto& x, const SoftConfig&) {
        return std::decay_t<decltype(x)>{any(x), any(x, Aggregator::Geomean)};
    });
    b.add("logic.xor", Mode::Smooth, 2, Sampler::Unit, [](const auto& x, const SoftConfig&) {
        return std::decay_t<decltype(x)>{logical_xor(x[0], x[1]), logical_and(x[0], x[1]), logical_or(x[0], x[1])};
    });
    b.add("logic.where", Mode::Smooth, 6, Sampler::Unit, [](const auto& x, const SoftConfig&) {
        using V = std::decay_t<decltype(x)>;
        return where(V{x[0], x[1]}, V{x[2], x[3]}, V{x[4], x[5]});
    });
}

void add_axiswise(Builder& b, Method method, Mode m) {
    const std::string p = std::string(name(method)) + ".";
    const bool solver = method == Method::OT;
    auto add = [&](const std::string& op, auto fn) {
        if (combination_valid(op, method, m)) b.add(p + op, m, kAxisN, Sampler::Normal, fn, method, solver);
    };
    if (method == Method::SmoothSort) {
        if (m != Mode::Smooth) return;
        b.add(p + "sort", m, kAxisN, Sampler::Normal, [](const auto& x, const SoftConfig& c) { return sort(x, c); },
              method, false, true);
        b.add(p + "rank", m, kAxisN, Sampler::Normal, [](const auto& x, const SoftConfig& c) { return rank(x, c); },
              method, false, true);
        return;
    }
    add("sort", [](const auto& x, const SoftConfig& c) { return sort(x, c); });
    add("rank", [](const auto& x, const SoftConfig& c) { return rank(x, c); });
    add("argsort", [](const auto& x, const SoftConfig& c) { return argsort(x, c).a; });
    add("argmax", [](const auto& x, const SoftConfig& c) { return argmax(x, c); });
    add("argmin", [](const auto& x, const SoftConfig& c) { return argmin(x, c); });
    add("max", [](const auto& x, const SoftConfig& c) { return std::decay_t<decltype(x)>{max(x, c)}; });
    add("min", [](const auto& x, const SoftConfig& c) { return std::decay_t<decltype(x)>{min(x, c)}; });
    add("topk", [](const auto& x, const SoftConfig& c) {
        auto r = topk(x, 2, c);
        auto v = r.values;
        v.insert(v.end(), r.perm.a.begin(), r.perm.a.end());
        return v;
    });
    add("quantile", [](const auto& x, const SoftConfig& c) {
        return std::decay_t<decltype(x)>{quantile(x, 0.3, c, QuantileCombine::Interpolate)};
    });
    add("median", [](const auto& x, const SoftConfig& c) { return std::decay_t<decltype(x)>{median(x, c)}; });
    add("argrank", [](const auto& x, const SoftConfig& c) { return apply_axiswise("argrank", x, c); });
    add("argquantile", [](const auto& x, const SoftConfig& c) { return apply_axiswise("argquantile", x, c, 1, 0.3); });
    add("argmedian", [](const auto& x, const SoftConfig& c) { return apply_axiswise("argmedian", x, c); });
}

std::vector<OpCase> build_registry() {
    Builder b;
    for (Mode m : kModes) add_elementwise(b, m);
    add_logic(b);
    for (Method method : {Method::OT, Method::SoftSort, Method::NeuralSort, Method::FastSoftSort, Method::SmoothSort,
                          Method::Network})
        for (Mode m : kModes) add_axiswise(b, method, m);
    return std::move(b.ops);
}

Vec<double> sample(const OpCase& op, std::mt19937_64& rng) {
    Vec<double> x(op.dim);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> wide(-4.0, 4.0), unit(0.05, 0.95);
    for (auto& v : x) {
        switch (op.sampler) {
            case Sampler::Normal: v = nd(rng); break;
            case Sampler::Wide: v = wide(rng); break;
            case Sampler::Unit: v = unit(rng); break;
        }
    }
    return x;
}

double inf_norm(const Mat<double>& m) {
    double s = 0.0;
    for (double v : m.a) s = std::max(s, std::fabs(v));
    return s;
}

}  // namespace

const std::vector<OpCase>& op_registry() {
    static const std::vector<OpCase> reg = build_registry();
    return reg;
}

bool glob_match(const std::string& pattern, const std::string& name) {
    return fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions& opt) {
    std::vector<const OpCase*> todo;
    for (const OpCase& op : op_registry())
        if (glob_match(opt.filter, op.name) && (!opt.mode || *opt.mode == op.mode)) todo.push_back(&op);
    if (todo.empty()) throw Error(ErrorKind::InvalidArgument, "gradcheck: filter '" + opt.filter + "' matches no op");

    std::vector<GradcheckResult> out;
    std::uint64_t salt = 0;
    for (const OpCase* op : todo) {
        GradcheckResult r;
        r.name = op->name;
        r.mode = op->mode;
        r.tol = op->solver_backed ? 10.0 * opt.tol : opt.tol;
        if (op->fd_only) {
            r.exempt = true;
            r.pass = true;
            out.push_back(r);
            continue;
        }
        std::mt19937_64 rng(opt.seed * 1000003ULL + ++salt);
        const double kink = op->solver_backed ? 2e-4 : 2e-5;
        const int max_tries = 40 * opt.points;
        for (int tries = 0; r.points < opt.points && tries < max_tries; ++tries) {
            Vec<double> x = sample(*op, rng);
            Mat<double> J, F;
            bool reject = false;
            try {
                J = jacobian(op->fdual, x);
                Vec<double> y0 = op->f(x);
                F = Mat<double>(y0.size(), x.size());
                Mat<double> jump(y0.size(), x.size());
                for (std::size_t j = 0; j < x.size(); ++j) {
                    const double h = 1e-6 * (1.0 + std::fabs(x[j]));
                    Vec<double> xp = x, xm = x;
                    xp[j] += h;
                    xm[j] -= h;
                    Vec<double> yp = op->f(xp), ym = op->f(xm);
                    for (std::size_t i = 0; i < y0.size(); ++i) {
                        F(i, j) = (yp[i] - ym[i]) / (2.0 * h);
                        jump(i, j) = (yp[i] - 2.0 * y0[i] + ym[i]) / h;
                    }
                }
                const double scale = std::max(inf_norm(F), 1e-3);
                if (op->piecewise && inf_norm(jump) > kink * scale) reject = true;
                if (!reject) {
                    double d = 0.0;
                    for (std::size_t k = 0; k < J.a.size(); ++k) d = std::max(d, std::fabs(J.a[k] - F.a[k]));
                    r.max_rel_err = std::max(r.max_rel_err, d / scale);
                }
            } catch (const Error&) {
                reject = true;  // e.g. a zero column in neuralsort rank
            }
            if (reject) {
                ++r.rejected;
                continue;
            }
            ++r.points;
        }
        r.pass = r.points == opt.points && r.max_rel_err <= r.tol;
        out.push_back(r);
    }
    return out;
}

}  // namespace softops

#include "calib/optimize.hpp"

#include "calib/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace calib {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

void order_simplex(SimplexState& s) {
    std::vector<std::size_t> idx(s.values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
    SimplexState sorted;
    sorted.iteration = s.iteration;
    for (std::size_t i : idx) {
        sorted.vertices.push_back(std::move(s.vertices[i]));
        sorted.values.push_back(s.values[i]);
    }
    s = std::move(sorted);
}

std::vector<double> lerp_from(const std::vector<double>& origin, const std::vector<double>& toward,
                              double t) {
    std::vector<double> out(origin.size());
    for (std::size_t j = 0; j < origin.size(); ++j) out[j] = origin[j] + t * (toward[j] - origin[j]);
    return out;
}

// Non-finite objective values rank as worst.
double finite_or_inf(double v) { return std::isfinite(v) ? v : HUGE_VAL; }

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
    if (x0.empty()) throw ArgumentError("nelder_mead requires at least one dimension");
    const std::size_t d = x0.size();
    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return finite_or_inf(f(x));
    };

    const double f0 = f(x0);
    ++result.evaluations;
    if (!std::isfinite(f0)) throw ArgumentError("objective is not finite at the initial point");

    SimplexState s;
    s.vertices.push_back(x0);
    s.values.push_back(f0);
    for (std::size_t j = 0; j < d; ++j) {
        auto v = x0;
        v[j] = v[j] != 0.0 ? v[j] * 1.05 : 0.00025;
        s.values.push_back(eval(v));
        s.vertices.push_back(std::move(v));
    }
    order_simplex(s);

    while (true) {
        // Equal values can also mean the vertices straddle a minimum (e.g. a
        // symmetric bowl), so a flat simplex is only accepted when its
        // centroid is no better than the best vertex.
        bool flat = s.values.back() - s.values.front() < options.tol;
        std::vector<double> middle;
        double f_middle = 0.0;
        if (flat) {
            middle.assign(d, 0.0);
            for (const auto& v : s.vertices)
                for (std::size_t j = 0; j < d; ++j) middle[j] += v[j] / static_cast<double>(d + 1);
            f_middle = eval(middle);
            flat = !(f_middle < s.values.front() - options.tol);
        }
        if (flat) {
            result.converged = true;
            break;
        }
        if (s.iteration >= options.max_iter) break;
        ++s.iteration;

        if (!middle.empty()) {
            s.vertices.back() = std::move(middle);
            s.values.back() = f_middle;
            order_simplex(s);
            continue;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += s.vertices[i][j] / static_cast<double>(d);

        const auto& worst = s.vertices.back();
        auto xr = lerp_from(centroid, worst, -kReflect);
        const double fr = eval(xr);

        if (fr < s.values.front()) {
            auto xe = lerp_from(centroid, xr, kExpand);
            const double fe = eval(xe);
            if (fe < fr) {
                s.vertices.back() = std::move(xe);
                s.values.back() = fe;
            } else {
                s.vertices.back() = std::move(xr);
                s.values.back() = fr;
            }
        } else if (fr < s.values[d - 1]) {
            s.vertices.back() = std::move(xr);
            s.values.back() = fr;
        } else {
            bool accepted = false;
            if (fr < s.values.back()) {
                auto xc = lerp_from(centroid, xr, kContract);
                const double fc = eval(xc);
                if (fc <= fr) {
                    s.vertices.back() = std::move(xc);
                    s.values.back() = fc;
                    accepted = true;
                }
            } else {
                auto xc = lerp_from(centroid, worst, kContract);
                const double fc = eval(xc);
                if (fc < s.values.back()) {
                    s.vertices.back() = std::move(xc);
                    s.values.back() = fc;
                    accepted = true;
                }
            }
            if (!accepted) {
                for (std::size_t i = 1; i <= d; ++i) {
                    s.vertices[i] = lerp_from(s.vertices.front(), s.vertices[i], kShrink);
                    s.values[i] = eval(s.vertices[i]);
                }
            }
        }
        order_simplex(s);
    }

    result.point = s.vertices.front();
    result.value = s.values.front();
    result.iterations = s.iteration;
    return result;
}

void validate(const SgdConfig& cfg) {
    if (!(cfg.learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw ArgumentError("momentum must lie in [0,1)");
    if (cfg.iterations < 0) throw ArgumentError("iteration count must be non-negative");
}

std::vector<double> sgd_minimize(const ObjectiveWithGradient& f, std::vector<double> params0,
                                 const SgdConfig& cfg, const SgdObserver& observer) {
    validate(cfg);
    const std::size_t n = params0.size();
    std::vector<double> x = std::move(params0);
    std::vector<double> v(n, 0.0), probe(n), grad(n);
    const double mu = cfg.momentum;
    const double lr = cfg.learning_rate;

    for (int it = 0; it < cfg.iterations; ++it) {
        if (cfg.nesterov) {
            for (std::size_t j = 0; j < n; ++j) probe[j] = x[j] + mu * v[j];
        } else {
            probe = x;
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        const double loss = f(probe, grad);
        bool finite = std::isfinite(loss);
        for (double g : grad) finite = finite && std::isfinite(g);
        if (!finite)
            throw DivergenceError("loss diverged at iteration " + std::to_string(it) +
                                  " with learning rate " + std::to_string(lr));
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = mu * v[j] - lr * grad[j];
            x[j] += v[j];
        }
        if (observer) observer(it, loss);
    }
    return x;
}

double grad_check(const ObjectiveWithGradient& f, std::span<const double> point, double h) {
    const std::size_t n = point.size();
    std::vector<double> x(point.begin(), point.end());
    std::vector<double> analytic(n), scratch(n);
    f(x, analytic);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double saved = x[j];
        x[j] = saved + h;
        const double up = f(x, scratch);
        x[j] = saved - h;
        const double down = f(x, scratch);
        x[j] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[j]), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(analytic[j] - numeric) / denom);
    }
    return worst;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol,
                      int max_iter) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace calib

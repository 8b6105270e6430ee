#include "calib/error.hpp"
#include "calib/recalibration.hpp"

#include <cmath>

namespace calib {

namespace {

double nll_at(const LogitSet& val, double temperature) {
    double total = 0.0;
    for (std::size_t i = 0; i < val.n_points(); ++i) {
        const auto r = val.row(i);
        double m = r[0];
        for (double v : r) m = std::max(m, v);
        double s = 0.0;
        for (double v : r) s += std::exp((v - m) / temperature);
        total += std::log(s) - (r[val.label(i)] - m) / temperature;
    }
    return total / static_cast<double>(val.n_points());
}

constexpr double kScanLo = 0.05;
constexpr double kScanHi = 20.0;
constexpr int kScanPoints = 61;

}  // namespace

double temperature_objective(const LogitSet& val, double temperature, const TemperatureOptions& o) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) return HUGE_VAL;
    if (o.objective == TemperatureObjective::nll) return nll_at(val, temperature);
    return gce(softmax(val, temperature), o.metric).value;
}

TemperatureModel fit_temperature(const LogitSet& val, const TemperatureOptions& o) {
    if (o.objective == TemperatureObjective::gce) validate(o.metric);
    auto f = [&](std::span<const double> x) { return temperature_objective(val, std::exp(x[0]), o); };

    double start = 0.0;
    if (o.objective == TemperatureObjective::gce) {
        double best = HUGE_VAL;
        for (int j = 0; j < kScanPoints; ++j) {
            const double x = std::log(kScanLo) +
                             (std::log(kScanHi) - std::log(kScanLo)) * j / (kScanPoints - 1);
            const double v = f(std::span<const double>(&x, 1));
            if (v < best) {
                best = v;
                start = x;
            }
        }
    }

    const auto nm = nelder_mead(f, {start}, o.optimizer);
    TemperatureModel model{std::exp(nm.point[0]), nm.converged, nm.value};

    if (!nm.converged && o.objective == TemperatureObjective::nll) {
        const double x = golden_section([&](double lt) { return nll_at(val, std::exp(lt)); },
                                        std::log(0.01), std::log(100.0));
        const double v = nll_at(val, std::exp(x));
        if (v < model.objective_value) model = {std::exp(x), true, v};
    }
    return model;
}

PredictionSet apply_temperature(const TemperatureModel& model, const LogitSet& test) {
    return softmax(test, model.temperature);
}

}  // namespace calib

#include "calib/analysis.hpp"
#include "calib/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace calib {

namespace {

int sample_categorical(std::span<const double> probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (r < acc) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace

PredictionSet make_pathology(std::size_t n_wrong, double p_wrong, std::size_t n_right, double p_right) {
    for (double p : {p_wrong, p_right})
        if (!(p > 0.5 && p < 1.0)) throw ArgumentError("pathology probabilities must lie in (0.5, 1)");
    if (n_wrong + n_right == 0) throw ArgumentError("pathology fixture needs at least one point");
    const std::size_t n = n_wrong + n_right;
    Matrix probs(n, 2);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool wrong = i < n_wrong;
        const double p = wrong ? p_wrong : p_right;
        probs(i, 0) = p;
        probs(i, 1) = 1.0 - p;
        labels[i] = wrong ? 1 : 0;
    }
    return PredictionSet(std::move(probs), std::move(labels));
}

LogitSet synthetic_calibrated_logits(std::uint64_t seed, std::size_t n, std::size_t k, double scale,
                                    double distortion) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    Matrix z(n, k);
    std::vector<int> labels(n);
    std::vector<double> p(k);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = z.row(i);
        for (double& v : r) v = normal(rng);
        softmax_row(r, p);
        labels[i] = sample_categorical(p, rng);
        for (double& v : r) v *= distortion;
    }
    return LogitSet(std::move(z), std::move(labels));
}

LogitSet synthetic_classifier_logits(std::uint64_t seed, const RecalibrationFixtureOptions& o) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> cls(0, static_cast<int>(o.n_classes) - 1);
    const std::size_t k = o.n_classes;

    // Per-class signal strength and logit offset make the miscalibration
    // partly class-dependent.
    std::vector<double> signal(k), offset(k);
    for (std::size_t c = 0; c < k; ++c) {
        signal[c] = o.signal + 0.75 * normal(rng);
        offset[c] = 0.4 * normal(rng);
    }

    Matrix z(o.n_points, k);
    std::vector<int> labels(o.n_points);
    std::vector<double> truth(k), p(k);
    for (std::size_t i = 0; i < o.n_points; ++i) {
        const auto latent = static_cast<std::size_t>(cls(rng));
        for (std::size_t c = 0; c < k; ++c) truth[c] = normal(rng) + (c == latent ? signal[c] : 0.0);
        softmax_row(truth, p);
        labels[i] = sample_categorical(p, rng);
        auto r = z.row(i);
        for (std::size_t c = 0; c < k; ++c) r[c] = o.overconfidence * truth[c] + offset[c];
    }
    return LogitSet(std::move(z), std::move(labels));
}

std::vector<NamedPredictions> recalibration_suite(const LogitSet& val, std::uint64_t seed,
                                                  const RecalibrationFixtureOptions& o) {
    const auto [fit, eval] = split_validation(ModelOutputs::from_logits(val));
    struct Entry {
        std::string name;
        RecalibrationSpec spec;
    };
    auto make = [&](Method m) {
        RecalibrationSpec s;
        s.method = m;
        s.seed = seed;
        return s;
    };
    std::vector<Entry> entries{
        {"histogram", make(Method::histogram)},
        {"bootstrap-histogram", make(Method::bootstrap_histogram)},
        {"isotonic", make(Method::isotonic)},
        {"temperature-ece", make(Method::temperature)},
        {"temperature-nll", make(Method::temperature)},
        {"vector", make(Method::vector)},
        {"matrix", make(Method::matrix)},
        {"mlp", make(Method::mlp)},
    };
    entries[3].spec.objective = TemperatureObjective::gce;
    entries[3].spec.metric = named_metric("ECE", o.metric_bins);

    std::vector<NamedPredictions> out;
    for (const auto& e : entries) {
        const Recalibrator r = fit_recalibrator(e.spec, fit);
        out.push_back({e.name, r.apply(eval)});
    }
    return out;
}

}  // namespace calib

namespace calib {

PredictionSet heterogeneous_class_fixture(std::uint64_t seed, std::size_t n, std::size_t k, double shift) {
    if (k < 2) throw ArgumentError("heterogeneous fixture needs at least two classes");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cls(0, static_cast<int>(k) - 1);
    std::uniform_real_distribution<double> conf(0.45, 0.95);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix probs(n, k);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = cls(rng);
        const double s = conf(rng);
        const double class_shift = (c % 2 == 0 ? 1.0 : -1.0) * shift;
        const double p_correct = std::clamp(s + class_shift, 0.0, 1.0);
        auto r = probs.row(i);
        for (std::size_t j = 0; j < k; ++j) r[j] = (1.0 - s) / static_cast<double>(k - 1);
        r[static_cast<std::size_t>(c)] = s;
        if (u(rng) < p_correct) {
            labels[i] = c;
        } else {
            int other = cls(rng);
            while (other == c) other = cls(rng);
            labels[i] = other;
        }
    }
    return PredictionSet::renormalized(std::move(probs), std::move(labels));
}

LogitSet asymmetric_noise_logits(std::uint64_t seed, std::size_t n, std::size_t k, double flip_fraction,
                                 double scale) {
    const LogitSet base = synthetic_calibrated_logits(seed, n, k, scale, 1.0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> labels(base.labels().begin(), base.labels().end());
    for (std::size_t i = 0; i < n; ++i) {
        if (u(rng) >= flip_fraction) continue;
        const auto r = base.row(i);
        std::size_t low = 0;
        for (std::size_t c = 1; c < k; ++c)
            if (r[c] < r[low]) low = c;
        labels[i] = static_cast<int>(low);
    }
    return LogitSet(base.logits(), std::move(labels));
}

}  // namespace calib

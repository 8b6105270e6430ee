#include "calib/error.hpp"
#include "calib/recalibration.hpp"

#include <algorithm>
#include <numeric>

namespace calib {

std::vector<double> pava(std::span<const double> y, std::span<const double> weights) {
    if (!weights.empty() && weights.size() != y.size())
        throw ArgumentError("pava: weights and values differ in length");
    struct Block {
        double mean;
        double weight;
        std::size_t size;
    };
    std::vector<Block> stack;
    stack.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        Block cur{y[i], weights.empty() ? 1.0 : weights[i], 1};
        while (!stack.empty() && stack.back().mean >= cur.mean) {
            const Block& prev = stack.back();
            const double w = prev.weight + cur.weight;
            cur = {(prev.mean * prev.weight + cur.mean * cur.weight) / w, w, prev.size + cur.size};
            stack.pop_back();
        }
        stack.push_back(cur);
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const auto& b : stack) out.insert(out.end(), b.size, b.mean);
    return out;
}

double IsotonicModel::predict(double score) const noexcept {
    if (breakpoints.empty()) return 0.0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), score);
    if (it == breakpoints.begin()) return fitted_values.front();
    return fitted_values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

IsotonicModel fit_isotonic(std::span<const double> scores, std::span<const double> targets) {
    if (scores.size() != targets.size()) throw ArgumentError("isotonic: scores and targets differ in length");
    if (scores.empty()) throw ArgumentError("isotonic: need at least one point");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Equal scores must share one fitted value: collapse them first.
    IsotonicModel model;
    std::vector<double> means, weights;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double total = 0.0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) total += targets[order[j++]];
        model.breakpoints.push_back(scores[order[i]]);
        means.push_back(total / static_cast<double>(j - i));
        weights.push_back(static_cast<double>(j - i));
        i = j;
    }
    model.fitted_values = pava(means, weights);
    return model;
}

std::vector<IsotonicModel> fit_isotonic_multiclass(const PredictionSet& val) {
    const std::size_t n = val.n_points(), k = val.n_classes();
    std::vector<IsotonicModel> models;
    models.reserve(k);
    std::vector<double> scores(n), targets(n);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = val.row(i)[c];
            targets[i] = val.label(i) == static_cast<int>(c) ? 1.0 : 0.0;
        }
        models.push_back(fit_isotonic(scores, targets));
    }
    return models;
}

PredictionSet apply_isotonic_multiclass(std::span<const IsotonicModel> models, const PredictionSet& test) {
    const std::size_t n = test.n_points(), k = test.n_classes();
    if (models.size() != k)
        throw ArgumentError("isotonic: " + std::to_string(models.size()) + " models for " +
                            std::to_string(k) + " classes");
    Matrix probs(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        auto out = probs.row(i);
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            out[c] = std::clamp(models[c].predict(test.row(i)[c]), 0.0, 1.0);
            total += out[c];
        }
        for (std::size_t c = 0; c < k; ++c)
            out[c] = total > 0.0 ? out[c] / total : 1.0 / static_cast<double>(k);
    }
    return PredictionSet(std::move(probs), {test.labels().begin(), test.labels().end()});
}

}  // namespace calib

#include "calib/metrics.hpp"

#include "calib/error.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <utility>

namespace calib {

std::string_view to_string(Norm norm) noexcept { return norm == Norm::l1 ? "l1" : "l2"; }

Norm parse_norm(std::string_view text) {
    if (text == "l1" || text == "L1") return Norm::l1;
    if (text == "l2" || text == "L2") return Norm::l2;
    throw ArgumentError("unknown norm '" + std::string(text) + "'");
}

void validate(const GceConfig& cfg) {
    if (cfg.binning.n_bins < 1) throw ArgumentError("bin count must be at least 1");
    if (!(cfg.threshold >= 0.0 && cfg.threshold < 1.0))
        throw ArgumentError("threshold must lie in [0,1)");
}

namespace {

std::vector<ScoredPrediction> view_for(const PredictionSet& p, const GceConfig& cfg) {
    if (!cfg.max_probs) return full_prob_view(p, cfg.threshold);
    auto view = max_prob_view(p);
    if (cfg.threshold > 0.0) std::erase_if(view, [&](const auto& s) { return !(s.score > cfg.threshold); });
    return view;
}

double aggregate(std::span<const BinStats> bins, std::size_t n_pool, const GceConfig& cfg) {
    const double n = static_cast<double>(n_pool);
    double acc = 0.0;
    for (const auto& b : bins) {
        if (b.count == 0) continue;
        const double gap = b.accuracy - b.confidence;
        if (cfg.norm == Norm::l1) {
            acc += (static_cast<double>(b.count) / n) * std::abs(gap);
        } else if (cfg.l2_weighting == L2Weighting::weighted) {
            acc += (static_cast<double>(b.count) / n) * gap * gap;
        } else {
            acc += gap * gap;
        }
    }
    return cfg.norm == Norm::l1 ? acc : std::sqrt(acc);
}

}  // namespace

std::vector<PoolBins> gce_pools(const PredictionSet& p, const GceConfig& cfg) {
    validate(cfg);
    auto view = view_for(p, cfg);
    std::vector<PoolBins> pools;
    if (!cfg.class_conditional) {
        PoolBins pool;
        pool.n_predictions = view.size();
        pool.bins = bin_stats(view, cfg.binning);
        if (!view.empty()) pool.value = aggregate(pool.bins, view.size(), cfg);
        pools.push_back(std::move(pool));
        return pools;
    }
    std::vector<std::vector<ScoredPrediction>> by_class(p.n_classes());
    for (const auto& s : view) by_class[static_cast<std::size_t>(s.class_index)].push_back(s);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
        PoolBins pool;
        pool.class_index = static_cast<int>(k);
        pool.n_predictions = by_class[k].size();
        pool.bins = bin_stats(by_class[k], cfg.binning);
        if (!by_class[k].empty()) pool.value = aggregate(pool.bins, by_class[k].size(), cfg);
        pools.push_back(std::move(pool));
    }
    return pools;
}

CalibrationScore gce(const PredictionSet& p, const GceConfig& cfg) {
    const auto pools = gce_pools(p, cfg);
    CalibrationScore score;
    score.config = cfg;
    double total = 0.0;
    std::size_t occupied = 0;
    for (const auto& pool : pools) {
        if (cfg.class_conditional)
            score.per_class.push_back(pool.n_predictions > 0 ? std::optional(pool.value) : std::nullopt);
        if (pool.n_predictions == 0) continue;
        total += pool.value;
        ++occupied;
    }
    if (occupied == 0)
        throw EmptyMeasurementError("no predictions survive threshold " +
                                    std::to_string(cfg.threshold));
    score.value = total / static_cast<double>(occupied);
    return score;
}

int metric_index(const GceConfig& cfg) {
    int threshold_bit = 0;
    if (cfg.threshold == 0.0) {
        threshold_bit = 0;
    } else if (cfg.threshold == kGridThreshold) {
        threshold_bit = 1;
    } else {
        throw ArgumentError("threshold " + std::to_string(cfg.threshold) +
                            " is not on the metric grid {0.0, 0.01}");
    }
    return (cfg.binning.kind == BinKind::adaptive ? 16 : 0) + (cfg.max_probs ? 0 : 8) +
           (cfg.class_conditional ? 0 : 4) + threshold_bit * 2 + (cfg.norm == Norm::l2 ? 1 : 0);
}

GceConfig index_to_config(int index, int n_bins) {
    if (index < 0 || index >= kMetricCount)
        throw ArgumentError("metric index " + std::to_string(index) + " outside 0..31");
    GceConfig cfg;
    cfg.binning = {index & 16 ? BinKind::adaptive : BinKind::even, n_bins};
    cfg.max_probs = !(index & 8);
    cfg.class_conditional = !(index & 4);
    cfg.threshold = index & 2 ? kGridThreshold : 0.0;
    cfg.norm = index & 1 ? Norm::l2 : Norm::l1;
    return cfg;
}

std::string axis_tuple(const GceConfig& cfg) {
    char threshold[32];
    std::snprintf(threshold, sizeof threshold, "%g", cfg.threshold);
    std::string t = threshold;
    if (t.find('.') == std::string::npos && t.find('e') == std::string::npos) t += ".0";
    std::string out = "('";
    out += to_string(cfg.binning.kind);
    out += "', ";
    out += cfg.max_probs ? "True" : "False";
    out += ", ";
    out += cfg.class_conditional ? "True" : "False";
    out += ", " + t + ", '";
    out += to_string(cfg.norm);
    out += "')";
    return out;
}

namespace {

constexpr std::array<std::pair<std::string_view, int>, 6> kNamed{{
    {"ECE", 4}, {"CCECE", 0}, {"SCE", 8}, {"ACE", 24}, {"TACE", 26}, {"RMSCE", 21},
}};

}  // namespace

GceConfig named_metric(std::string_view name, int n_bins) {
    for (const auto& [label, index] : kNamed)
        if (label == name) return index_to_config(index, n_bins);
    throw ArgumentError("unknown metric '" + std::string(name) + "'");
}

std::vector<std::string> metric_names() {
    std::vector<std::string> out;
    for (const auto& entry : kNamed) out.emplace_back(entry.first);
    return out;
}

double brier_score(const PredictionSet& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.n_points(); ++i) {
        const auto r = p.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double target = static_cast<int>(k) == p.label(i) ? 1.0 : 0.0;
            total += (r[k] - target) * (r[k] - target);
        }
    }
    return total / static_cast<double>(p.n_points());
}

}  // namespace calib

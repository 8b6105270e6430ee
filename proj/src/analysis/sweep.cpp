#include "calib/analysis.hpp"
#include "calib/error.hpp"

#include <algorithm>
#include <numeric>

namespace calib {

namespace {

std::vector<std::pair<std::string, bool (*)(const GceConfig&)>> group_predicates() {
    return {
        {"binning=even", [](const GceConfig& c) { return c.binning.kind == BinKind::even; }},
        {"binning=adaptive", [](const GceConfig& c) { return c.binning.kind == BinKind::adaptive; }},
        {"max_probs=true", [](const GceConfig& c) { return c.max_probs; }},
        {"max_probs=false", [](const GceConfig& c) { return !c.max_probs; }},
        {"class_conditional=true", [](const GceConfig& c) { return c.class_conditional; }},
        {"class_conditional=false", [](const GceConfig& c) { return !c.class_conditional; }},
        {"threshold=0.01", [](const GceConfig& c) { return c.threshold > 0.0; }},
        {"threshold=0", [](const GceConfig& c) { return c.threshold == 0.0; }},
        {"norm=l1", [](const GceConfig& c) { return c.norm == Norm::l1; }},
        {"norm=l2", [](const GceConfig& c) { return c.norm == Norm::l2; }},
    };
}

double score_or_throw(const NamedPredictions& set, const GceConfig& cfg) {
    try {
        return gce(set.predictions, cfg).value;
    } catch (const EmptyMeasurementError& e) {
        throw EmptyMeasurementError("set '" + set.name + "', metric " + axis_tuple(cfg) + ": " + e.what());
    }
}

}  // namespace

std::vector<std::string> sweep_group_names() {
    std::vector<std::string> out;
    for (const auto& g : group_predicates()) out.push_back(g.first);
    return out;
}

std::vector<GceConfig> grid_configs(int n_bins) {
    std::vector<GceConfig> out;
    for (int i = 0; i < kMetricCount; ++i) out.push_back(index_to_config(i, n_bins));
    return out;
}

SweepResult bin_sensitivity_sweep(std::span<const NamedPredictions> sets, std::span<const int> bins,
                                  RankCorrelation variant) {
    if (sets.size() < 2) throw ArgumentError("bin sensitivity needs at least two recalibrated sets");
    if (bins.empty()) throw ArgumentError("bin sensitivity needs at least one bin count");
    for (int b : bins)
        if (b < 1) throw ArgumentError("bin counts must be positive");

    SweepResult result;
    result.bins.assign(bins.begin(), bins.end());
    result.variant = variant;
    for (const auto& s : sets) result.set_names.push_back(s.name);

    for (int m = 0; m < kMetricCount; ++m) {
        for (int b : bins) {
            SweepCell cell;
            cell.metric_index = m;
            cell.n_bins = b;
            const GceConfig cfg = index_to_config(m, b);
            for (const auto& s : sets) cell.scores.push_back(score_or_throw(s, cfg));
            cell.ranks = rank_scores(cell.scores);
            result.cells.push_back(std::move(cell));
        }
    }

    const std::size_t nb = bins.size();
    result.metric_correlation.assign(kMetricCount, 1.0);
    for (int m = 0; m < kMetricCount; ++m) {
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = a + 1; b < nb; ++b) {
                total += rank_correlation(result.cell(m, a).ranks, result.cell(m, b).ranks, variant);
                ++pairs;
            }
        if (pairs > 0) result.metric_correlation[m] = total / static_cast<double>(pairs);
    }

    for (const auto& [name, pred] : group_predicates()) {
        double total = 0.0;
        int count = 0;
        for (int m = 0; m < kMetricCount; ++m)
            if (pred(index_to_config(m))) {
                total += result.metric_correlation[m];
                ++count;
            }
        result.group_mean[name] = total / count;
    }
    return result;
}

RankTable rank_methods(std::span<const NamedPredictions> sets, std::span<const GceConfig> configs) {
    if (sets.size() < 2) throw ArgumentError("rank_methods needs at least two methods");
    RankTable t;
    for (const auto& s : sets) t.methods.push_back(s.name);
    for (const auto& cfg : configs) {
        t.configs.push_back(cfg);
        int index = -1;
        try {
            index = metric_index(cfg);
        } catch (const ArgumentError&) {
        }
        t.metric_indices.push_back(index);
        std::vector<double> scores;
        for (const auto& s : sets) scores.push_back(score_or_throw(s, cfg));
        std::vector<std::size_t> order(sets.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
        t.scores.push_back(std::move(scores));
        t.order.push_back(std::move(order));
    }
    return t;
}

std::vector<NormDisagreement> norm_disagreements(const RankTable& table) {
    std::vector<NormDisagreement> out;
    for (std::size_t a = 0; a < table.configs.size(); ++a) {
        if (table.configs[a].norm != Norm::l1) continue;
        for (std::size_t b = 0; b < table.configs.size(); ++b) {
            GceConfig other = table.configs[b];
            if (other.norm != Norm::l2) continue;
            other.norm = Norm::l1;
            other.l2_weighting = table.configs[a].l2_weighting;
            if (!(other == table.configs[a])) continue;
            const auto& top1 = table.methods[table.order[a].front()];
            const auto& top2 = table.methods[table.order[b].front()];
            if (top1 != top2) out.push_back({a, b, top1, top2});
        }
    }
    return out;
}

}  // namespace calib

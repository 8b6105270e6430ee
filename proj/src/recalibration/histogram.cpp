#include "calib/binning.hpp"
#include "calib/error.hpp"
#include "calib/recalibration.hpp"
#include "calib/recalibration_detail.hpp"

#include <algorithm>
#include <random>

namespace calib {

namespace {

struct BinTally {
    std::vector<double> correct;
    std::vector<std::size_t> count;

    explicit BinTally(std::size_t n) : correct(n, 0.0), count(n, 0) {}
};

// Per-table tallies: one table, or one per predicted class.
std::vector<BinTally> tally(const PredictionSet& val, const HistogramOptions& o) {
    const std::size_t tables = o.class_conditional ? val.n_classes() : 1;
    std::vector<BinTally> t(tables, BinTally(static_cast<std::size_t>(o.n_bins)));
    for (const auto& s : max_prob_view(val)) {
        auto& bins = t[o.class_conditional ? static_cast<std::size_t>(s.class_index) : 0];
        const std::size_t b = even_bin_index(s.score, o.n_bins);
        ++bins.count[b];
        bins.correct[b] += s.correct ? 1.0 : 0.0;
    }
    return t;
}

void fill_empty(std::vector<double>& values, const std::vector<bool>& occupied,
                std::span<const double> edges, EmptyBinFallback fallback) {
    const std::size_t n = values.size();
    for (std::size_t b = 0; b < n; ++b) {
        if (occupied[b]) continue;
        values[b] = 0.5 * (edges[b] + edges[b + 1]);
        if (fallback != EmptyBinFallback::nearest_occupied) continue;
        for (std::size_t dist = 1; dist < n; ++dist) {
            if (b >= dist && occupied[b - dist]) {
                values[b] = values[b - dist];
                break;
            }
            if (b + dist < n && occupied[b + dist]) {
                values[b] = values[b + dist];
                break;
            }
        }
    }
}

}  // namespace

PredictionSet bootstrap_resample(const PredictionSet& val, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, val.n_points() - 1);
    const std::size_t n = val.n_points(), k = val.n_classes();
    Matrix probs(n, k);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pick(rng);
        std::copy(val.row(j).begin(), val.row(j).end(), probs.row(i).begin());
        labels[i] = val.label(j);
    }
    return PredictionSet(std::move(probs), std::move(labels));
}

HistogramBinningModel fit_histogram_binning(const PredictionSet& val, const HistogramOptions& o) {
    if (o.n_bins < 1) throw ArgumentError("histogram binning needs at least one bin");
    if (o.bootstrap && *o.bootstrap < 1) throw ArgumentError("bootstrap resample count must be positive");

    HistogramBinningModel model;
    model.edges = even_edges(o.n_bins);
    model.class_conditional = o.class_conditional;
    const std::size_t tables = o.class_conditional ? val.n_classes() : 1;
    const std::size_t nb = static_cast<std::size_t>(o.n_bins);

    // Sum of per-resample bin accuracies and number of resamples occupying each bin.
    std::vector<std::vector<double>> acc_sum(tables, std::vector<double>(nb, 0.0));
    std::vector<std::vector<std::size_t>> hits(tables, std::vector<std::size_t>(nb, 0));
    auto accumulate = [&](const PredictionSet& sample) {
        const auto t = tally(sample, o);
        for (std::size_t c = 0; c < tables; ++c)
            for (std::size_t b = 0; b < nb; ++b)
                if (t[c].count[b] > 0) {
                    acc_sum[c][b] += t[c].correct[b] / static_cast<double>(t[c].count[b]);
                    ++hits[c][b];
                }
    };

    if (o.bootstrap) {
        std::mt19937_64 rng(o.seed);
        for (int r = 0; r < *o.bootstrap; ++r) accumulate(bootstrap_resample(val, rng));
    } else {
        accumulate(val);
    }

    model.tables.assign(tables, std::vector<double>(nb, 0.0));
    for (std::size_t c = 0; c < tables; ++c) {
        std::vector<bool> occupied(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            occupied[b] = hits[c][b] > 0;
            if (occupied[b]) model.tables[c][b] = acc_sum[c][b] / static_cast<double>(hits[c][b]);
        }
        fill_empty(model.tables[c], occupied, model.edges, o.fallback);
    }
    return model;
}

PredictionSet replace_top_probability(const PredictionSet& test, std::span<const double> new_top) {
    const std::size_t n = test.n_points(), k = test.n_classes();
    Matrix probs(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = test.row(i);
        const std::size_t top = argmax(r);
        const double v = std::clamp(new_top[i], 0.0, 1.0);
        const double rest = 1.0 - r[top];
        auto out = probs.row(i);
        for (std::size_t c = 0; c < k; ++c) {
            if (c == top) {
                out[c] = v;
            } else if (rest > 0.0) {
                out[c] = r[c] * (1.0 - v) / rest;
            } else {
                out[c] = (1.0 - v) / static_cast<double>(k - 1);
            }
        }
    }
    return PredictionSet::renormalized(std::move(probs), {test.labels().begin(), test.labels().end()});
}

PredictionSet apply_histogram_binning(const HistogramBinningModel& model, const PredictionSet& test) {
    const int n_bins = static_cast<int>(model.edges.size()) - 1;
    if (model.class_conditional && model.tables.size() != test.n_classes())
        throw ArgumentError("class-conditional histogram model was fitted for " +
                            std::to_string(model.tables.size()) + " classes");
    std::vector<double> top(test.n_points());
    for (std::size_t i = 0; i < test.n_points(); ++i) {
        const auto r = test.row(i);
        const std::size_t c = argmax(r);
        top[i] = model.table_for(c)[even_bin_index(r[c], n_bins)];
    }
    return replace_top_probability(test, top);
}

}  // namespace calib

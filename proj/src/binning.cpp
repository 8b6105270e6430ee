#include "calib/binning.hpp"

#include "calib/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace calib {

namespace {

void require_bins(int n_bins) {
    if (n_bins < 1) throw ArgumentError("bin count must be at least 1, got " + std::to_string(n_bins));
}

double edge(int k, int n_bins) noexcept {
    return static_cast<double>(k) / static_cast<double>(n_bins);
}

}  // namespace

std::string_view to_string(BinKind kind) noexcept {
    return kind == BinKind::even ? "even" : "adaptive";
}

BinKind parse_bin_kind(std::string_view text) {
    if (text == "even") return BinKind::even;
    if (text == "adaptive") return BinKind::adaptive;
    throw ArgumentError("unknown binning scheme '" + std::string(text) + "'");
}

std::vector<double> even_edges(int n_bins) {
    require_bins(n_bins);
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    for (int k = 0; k <= n_bins; ++k) edges[k] = edge(k, n_bins);
    return edges;
}

std::size_t even_bin_index(double score, int n_bins) noexcept {
    if (!(score > 0.0)) return 0;
    if (score >= 1.0) return static_cast<std::size_t>(n_bins - 1);
    int idx = static_cast<int>(std::floor(score * n_bins));
    // floor(score * B) can land one off the k/B edges; settle on the edges.
    if (idx > 0 && score < edge(idx, n_bins)) --idx;
    if (idx + 1 < n_bins && score >= edge(idx + 1, n_bins)) ++idx;
    return static_cast<std::size_t>(std::clamp(idx, 0, n_bins - 1));
}

AdaptivePartition adaptive_partition(std::span<const double> scores, int n_bins) {
    require_bins(n_bins);
    if (scores.empty()) throw ArgumentError("adaptive binning requires at least one score");
    const std::size_t n = scores.size();
    const std::size_t r = static_cast<std::size_t>(n_bins);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    AdaptivePartition part;
    part.counts.assign(r, n / r);
    for (std::size_t b = 0; b < n % r; ++b) ++part.counts[b];

    part.bin_of.assign(n, 0);
    part.edges.assign(r + 1, 1.0);
    part.edges.front() = 0.0;
    std::size_t pos = 0;
    for (std::size_t b = 0; b < r; ++b) {
        for (std::size_t j = 0; j < part.counts[b]; ++j) part.bin_of[order[pos + j]] = b;
        pos += part.counts[b];
        if (b + 1 < r && pos > 0 && pos < n)
            part.edges[b + 1] = 0.5 * (scores[order[pos - 1]] + scores[order[pos]]);
    }
    return part;
}

std::vector<double> adaptive_edges(std::span<const double> scores, int n_bins) {
    return adaptive_partition(scores, n_bins).edges;
}

std::vector<BinStats> bin_stats(std::span<const ScoredPrediction> preds, BinScheme scheme) {
    require_bins(scheme.n_bins);
    const std::size_t nb = static_cast<std::size_t>(scheme.n_bins);
    std::vector<BinStats> bins(nb);
    std::vector<double> correct(nb, 0.0), conf(nb, 0.0);

    std::vector<double> edges;
    if (scheme.kind == BinKind::even || preds.empty()) {
        edges = even_edges(scheme.n_bins);
        for (const auto& p : preds) {
            const std::size_t b = even_bin_index(p.score, scheme.n_bins);
            ++bins[b].count;
            correct[b] += p.correct ? 1.0 : 0.0;
            conf[b] += p.score;
        }
    } else {
        std::vector<double> scores(preds.size());
        for (std::size_t i = 0; i < preds.size(); ++i) scores[i] = preds[i].score;
        auto part = adaptive_partition(scores, scheme.n_bins);
        edges = std::move(part.edges);
        for (std::size_t i = 0; i < preds.size(); ++i) {
            const std::size_t b = part.bin_of[i];
            ++bins[b].count;
            correct[b] += preds[i].correct ? 1.0 : 0.0;
            conf[b] += preds[i].score;
        }
    }

    for (std::size_t b = 0; b < nb; ++b) {
        bins[b].lower = edges[b];
        bins[b].upper = edges[b + 1];
        if (bins[b].count > 0) {
            const double n = static_cast<double>(bins[b].count);
            bins[b].accuracy = correct[b] / n;
            bins[b].confidence = conf[b] / n;
        }
    }
    return bins;
}

}  // namespace calib

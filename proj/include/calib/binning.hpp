#pragma once

// Even and adaptive (equal-count) binning of scored predictions.

#include "calib/prediction.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace calib {

inline constexpr int kDefaultBins = 15;

enum class BinKind { even, adaptive };

std::string_view to_string(BinKind kind) noexcept;
BinKind parse_bin_kind(std::string_view text);

struct BinScheme {
    BinKind kind = BinKind::even;
    int n_bins = kDefaultBins;

    bool operator==(const BinScheme&) const = default;
};

// count == 0 means the bin is empty; accuracy and confidence are then 0.
struct BinStats {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double accuracy = 0.0;
    double confidence = 0.0;
};

// 0, 1/B, ..., 1. Bins are [lo, hi) except the last, which is [lo, 1].
std::vector<double> even_edges(int n_bins);

// Index of the even bin holding score; consistent with even_edges().
std::size_t even_bin_index(double score, int n_bins) noexcept;

// Equal-count partition of the scores. Order is ascending by score, ties by
// input position; the first (N mod R) bins take one extra element.
struct AdaptivePartition {
    std::vector<double> edges;         // n_bins + 1, first 0, last 1
    std::vector<std::size_t> bin_of;   // bin index per input position
    std::vector<std::size_t> counts;   // per bin
};

AdaptivePartition adaptive_partition(std::span<const double> scores, int n_bins);

// Edges of adaptive_partition(): midpoints between adjacent boundary scores.
std::vector<double> adaptive_edges(std::span<const double> scores, int n_bins);

std::vector<BinStats> bin_stats(std::span<const ScoredPrediction> preds, BinScheme scheme);

}  // namespace calib

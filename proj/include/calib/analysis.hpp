#pragma once

// Metric-consistency experiments: rank correlation of method orderings,
// bin-count sensitivity, per-metric rank tables, label-noise simulation,
// reliability-diagram data, and the synthetic fixtures they run on.

#include "calib/metrics.hpp"
#include "calib/prediction.hpp"
#include "calib/recalibrator.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace calib {

// ---------------------------------------------------------------------------
// Ranks

// ranks[i] is the 1-based rank of item i, lower score first; tied scores
// share the average of the positions they span.
struct RankVector {
    std::vector<double> ranks;

    std::size_t size() const noexcept { return ranks.size(); }
    bool operator==(const RankVector&) const = default;
};

RankVector rank_scores(std::span<const double> scores);

enum class RankCorrelation { spearman, footrule };

std::string_view to_string(RankCorrelation v) noexcept;
RankCorrelation parse_rank_correlation(std::string_view text);

// spearman: 1 - 6 sum d^2 / (n (n^2 - 1));  footrule: 1 - 6 sum |d| / (n (n^2 - 1)).
double rank_correlation(const RankVector& a, const RankVector& b,
                        RankCorrelation variant = RankCorrelation::spearman);

// ---------------------------------------------------------------------------
// Bin-count sensitivity

struct NamedPredictions {
    std::string name;
    PredictionSet predictions;
};

struct SweepCell {
    int metric_index = 0;
    int n_bins = 0;
    std::vector<double> scores;  // one per recalibrated set
    RankVector ranks;
};

struct SweepResult {
    std::vector<int> bins;
    std::vector<std::string> set_names;
    RankCorrelation variant = RankCorrelation::spearman;
    std::vector<SweepCell> cells;             // metric-major, bin-minor
    std::vector<double> metric_correlation;   // mean over bin pairs, per metric index
    std::map<std::string, double> group_mean; // e.g. "binning=adaptive"

    const SweepCell& cell(int metric_index, std::size_t bin_position) const {
        return cells[static_cast<std::size_t>(metric_index) * bins.size() + bin_position];
    }
};

inline const std::vector<int> kDefaultSweepBins{10, 20, 30, 40, 50};

// Axis groups reported by the sweep, in output order.
std::vector<std::string> sweep_group_names();

// Scores every set under every grid metric at every bin count, ranks the sets
// per (metric, bins) cell and averages rank correlation over all bin-count
// pairs. Group means average the per-metric correlations over the metrics
// sharing an axis value.
SweepResult bin_sensitivity_sweep(std::span<const NamedPredictions> recalibrated,
                                  std::span<const int> bins = kDefaultSweepBins,
                                  RankCorrelation variant = RankCorrelation::spearman);

// ---------------------------------------------------------------------------
// Recalibrator rank table

struct RankTable {
    std::vector<std::string> methods;
    std::vector<GceConfig> configs;
    std::vector<int> metric_indices;            // -1 for off-grid configs
    std::vector<std::vector<double>> scores;    // [config][method]
    std::vector<std::vector<std::size_t>> order; // [config][position] -> method index
};

// Ascending score per config; equal scores keep input order.
RankTable rank_methods(std::span<const NamedPredictions> recalibrated, std::span<const GceConfig> configs);

std::vector<GceConfig> grid_configs(int n_bins = kDefaultBins);

// Config pairs that differ only in the norm and disagree on the top method.
struct NormDisagreement {
    std::size_t l1_column = 0;
    std::size_t l2_column = 0;
    std::string l1_top;
    std::string l2_top;
};

std::vector<NormDisagreement> norm_disagreements(const RankTable& table);

// ---------------------------------------------------------------------------
// Label noise

struct NoiseOptions {
    std::size_t n_classes = 10;
    std::size_t dim = 64;
    std::size_t n_train = 6000;
    std::size_t n_test = 1000;
    double mean_radius = 4.0;
    int gd_iterations = 100;
    double learning_rate = 0.5;
    double omitted_threshold = 0.01;
    int n_bins = kDefaultBins;
};

struct NoiseLevelResult {
    double noise = 0.0;
    double accuracy = 0.0;
    double mean_max_confidence = 0.0;
    double ece = 0.0;
    double sce = 0.0;
    double ace = 0.0;
    double omitted_fraction = 0.0;
};

// 40 levels linearly spaced over [0, 0.05].
std::vector<double> default_noise_levels(int count = 40, double max_level = 0.05);

// One blob dataset per seed; at level q the first round(q * n_train) points
// of a fixed seeded permutation get a label drawn uniformly over all classes
// (possibly the true one). A multinomial logistic regression is retrained by
// full-batch gradient descent at every level and scored on the clean test set.
std::vector<NoiseLevelResult> label_noise_experiment(std::uint64_t seed, std::span<const double> levels,
                                                     const NoiseOptions& options = {});

// ---------------------------------------------------------------------------
// Reliability data and fixtures

// The pools and bins a gce score is computed from, without the empty check.
std::vector<PoolBins> reliability_data(const PredictionSet& p, const GceConfig& cfg);

// K = 2: n_wrong points at p_wrong labelled 1, then n_right at p_right labelled 0.
PredictionSet make_pathology(std::size_t n_wrong, double p_wrong, std::size_t n_right, double p_right);

// Logits z ~ N(0, scale^2) per entry with labels drawn from softmax(z), then
// multiplied by distortion (so the NLL-optimal temperature is `distortion`).
LogitSet synthetic_calibrated_logits(std::uint64_t seed, std::size_t n, std::size_t k, double scale = 2.0,
                                    double distortion = 1.0);

struct RecalibrationFixtureOptions {
    std::size_t n_points = 1000;  // validation size before the 50/50 split
    std::size_t n_classes = 10;
    double overconfidence = 3.0;
    double signal = 4.0;  // mean logit margin of the latent class before distortion
    int metric_bins = kDefaultBins;  // bin count inside the ECE temperature objective
};

// Overconfident classifier-like logits: class-dependent signal plus noise,
// labels from a softer distribution than the logits imply.
LogitSet synthetic_classifier_logits(std::uint64_t seed, const RecalibrationFixtureOptions& options = {});

// The eight recalibrators of the bin-sensitivity study fitted on the first
// half and applied to the second half: histogram, bootstrap-histogram,
// isotonic, temperature-ece, temperature-nll, vector, matrix, mlp.
std::vector<NamedPredictions> recalibration_suite(const LogitSet& val, std::uint64_t seed,
                                                  const RecalibrationFixtureOptions& options = {});

// Max-probability predictions whose accuracy at a given confidence depends on
// the predicted class: accuracy = clamp(confidence + class_shift[c]), shifts
// alternating in sign across classes.
PredictionSet heterogeneous_class_fixture(std::uint64_t seed, std::size_t n, std::size_t k = 4,
                                          double shift = 0.2);

// Calibrated logits (as synthetic_calibrated_logits) where a fraction of the
// labels is moved to the least likely class: confident mistakes the NLL
// punishes far harder than binned calibration error does.
LogitSet asymmetric_noise_logits(std::uint64_t seed, std::size_t n, std::size_t k = 5,
                                 double flip_fraction = 0.1, double scale = 3.0);

}  // namespace calib

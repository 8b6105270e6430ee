#pragma once

// Generalized calibration error: one engine over five axes (binning scheme,
// max-probability view, class conditionality, threshold, norm). The familiar
// metrics are fixed points of this space; see named_metric().

#include "calib/binning.hpp"
#include "calib/prediction.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace calib {

enum class Norm { l1, l2 };

// How the L2 norm combines bins. `weighted` is sqrt(sum_b (n_b/N)(acc-conf)^2);
// `unweighted` is sqrt(sum_b (acc-conf)^2) over non-empty bins.
enum class L2Weighting { weighted, unweighted };

std::string_view to_string(Norm norm) noexcept;
Norm parse_norm(std::string_view text);

struct GceConfig {
    BinScheme binning{};
    bool max_probs = true;
    bool class_conditional = false;
    double threshold = 0.0;
    Norm norm = Norm::l1;
    L2Weighting l2_weighting = L2Weighting::weighted;

    bool operator==(const GceConfig&) const = default;
};

inline constexpr int kMetricCount = 32;
inline constexpr double kGridThreshold = 0.01;

// Throws ArgumentError when the config is malformed (threshold outside [0,1),
// bin count < 1).
void validate(const GceConfig& cfg);

struct CalibrationScore {
    double value = 0.0;
    GceConfig config{};
    // Set for class-conditional configs: per-class score, nullopt for classes
    // that received no prediction.
    std::vector<std::optional<double>> per_class;
};

// Bins of one aggregation pool. class_index is -1 for the pooled
// (unconditional) case.
struct PoolBins {
    int class_index = -1;
    std::size_t n_predictions = 0;
    std::vector<BinStats> bins;
    double value = 0.0;
};

// Binned pools the score is computed from. Class-conditional configs return
// one pool per class, empty ones included (n_predictions == 0).
std::vector<PoolBins> gce_pools(const PredictionSet& p, const GceConfig& cfg);

// Throws EmptyMeasurementError when the threshold removes every prediction.
CalibrationScore gce(const PredictionSet& p, const GceConfig& cfg);

// Enumeration of the 32 grid metrics, outermost axis first: binning (even,
// adaptive), max_probs (true, false), class_conditional (true, false),
// threshold (0.0, 0.01), norm (l1, l2). Bin count is not part of the index.
int metric_index(const GceConfig& cfg);
GceConfig index_to_config(int index, int n_bins = kDefaultBins);

// ('even', True, True, 0.0, 'l1')
std::string axis_tuple(const GceConfig& cfg);

// ECE, CCECE, SCE, ACE, TACE, RMSCE (case-sensitive).
GceConfig named_metric(std::string_view name, int n_bins = kDefaultBins);
std::vector<std::string> metric_names();

double brier_score(const PredictionSet& p);

}  // namespace calib

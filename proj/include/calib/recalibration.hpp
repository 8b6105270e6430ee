#pragma once

// Post-hoc recalibrators. Each method is fitted on a validation set and then
// applied to held-out predictions; apply always returns a valid PredictionSet.

#include "calib/metrics.hpp"
#include "calib/optimize.hpp"
#include "calib/prediction.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace calib {

// ---------------------------------------------------------------------------
// Histogram binning

enum class EmptyBinFallback { bin_center, nearest_occupied };

struct HistogramOptions {
    int n_bins = 20;
    bool class_conditional = false;
    std::optional<int> bootstrap;  // number of resamples
    std::uint64_t seed = 0;
    EmptyBinFallback fallback = EmptyBinFallback::bin_center;
};

struct HistogramBinningModel {
    std::vector<double> edges;
    bool class_conditional = false;
    // One table when unconditional, one per predicted class otherwise.
    std::vector<std::vector<double>> tables;

    std::span<const double> table_for(std::size_t predicted_class) const noexcept {
        return class_conditional ? tables[predicted_class] : tables.front();
    }
};

HistogramBinningModel fit_histogram_binning(const PredictionSet& val, const HistogramOptions& options = {});

// The max-probability entry of each row is replaced by its bin value and the
// remaining mass is spread over the other classes in proportion to their
// original probabilities (uniformly when those were all zero).
PredictionSet apply_histogram_binning(const HistogramBinningModel& model, const PredictionSet& test);

// ---------------------------------------------------------------------------
// Isotonic regression

// Exact monotone (non-decreasing) least-squares fit of y with optional weights.
std::vector<double> pava(std::span<const double> y, std::span<const double> weights = {});

struct IsotonicModel {
    std::vector<double> breakpoints;    // sorted unique scores
    std::vector<double> fitted_values;  // non-decreasing, same length

    // Step function: value at the largest breakpoint <= score, clamped to the
    // first/last value outside the fitted range.
    double predict(double score) const noexcept;
};

IsotonicModel fit_isotonic(std::span<const double> scores, std::span<const double> targets);

// One-vs-rest models, one per class.
std::vector<IsotonicModel> fit_isotonic_multiclass(const PredictionSet& val);

// Maps each class probability through its model, then renormalizes rows;
// a row mapped to all zeros becomes uniform.
PredictionSet apply_isotonic_multiclass(std::span<const IsotonicModel> models, const PredictionSet& test);

// ---------------------------------------------------------------------------
// Temperature scaling

enum class TemperatureObjective { nll, gce };

struct TemperatureOptions {
    TemperatureObjective objective = TemperatureObjective::nll;
    GceConfig metric = named_metric("ECE");  // used by the gce objective
    NelderMeadOptions optimizer{};
};

struct TemperatureModel {
    double temperature = 1.0;
    bool converged = true;
    double objective_value = 0.0;
};

// Minimizes the objective over log T with Nelder-Mead. The NLL objective
// starts at T = 1; the calibration-error objective starts from the best point
// of a coarse log-spaced scan, since it is piecewise and not unimodal.
TemperatureModel fit_temperature(const LogitSet& val, const TemperatureOptions& options = {});

// Objective value of softmax(logits / T).
double temperature_objective(const LogitSet& val, double temperature, const TemperatureOptions& options);

PredictionSet apply_temperature(const TemperatureModel& model, const LogitSet& test);

// ---------------------------------------------------------------------------
// Affine logit scaling: Platt (scalar), vector (diagonal), matrix (full)

enum class AffineKind { platt, vector, matrix };

std::string_view to_string(AffineKind kind) noexcept;

struct AffineScalingModel {
    AffineKind kind = AffineKind::matrix;
    std::size_t n_classes = 0;
    std::vector<double> weight;  // 1, K, or K*K (row-major)
    std::vector<double> bias;    // 1 for Platt, K otherwise

    // Identity map: weight 1 / ones / identity, zero bias.
    static AffineScalingModel identity(AffineKind kind, std::size_t n_classes);

    std::vector<double> pack() const;
    void unpack(std::span<const double> params);
    std::size_t n_params() const noexcept { return weight.size() + bias.size(); }

    // Adjusted logits for one row. Binary Platt (K == 2) produces
    // [0, a*(z1 - z0) + b]; multiclass Platt produces a*z + b.
    void transform(std::span<const double> z, std::span<double> out) const noexcept;
};

// Mean NLL of softmax(transform(z)); writes d/dparams in pack() order into grad.
double affine_nll(const AffineScalingModel& model, const LogitSet& data, std::span<double> grad);

AffineScalingModel fit_affine_scaling(const LogitSet& val, AffineKind kind, const SgdConfig& sgd = {});

PredictionSet apply_affine(const AffineScalingModel& model, const LogitSet& test);

// ---------------------------------------------------------------------------
// Neural-network scaling: K -> 50 -> 50 -> 50 -> K, ReLU hidden layers

struct MlpLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weight;  // out x in, row-major
    std::vector<double> bias;    // out
};

struct MlpScalingModel {
    std::vector<MlpLayer> layers;

    static constexpr std::size_t kHidden = 50;
    static constexpr std::size_t kDepth = 3;

    // He-normal hidden layers, output layer with standard deviation
    // output_scale, zero biases. Deterministic given seed.
    static MlpScalingModel initialize(std::size_t n_classes, std::uint64_t seed,
                                      double output_scale = 0.01);

    std::size_t n_params() const noexcept;
    std::vector<double> pack() const;
    void unpack(std::span<const double> params);

    void forward(std::span<const double> z, std::span<double> out) const;
};

double mlp_nll(const MlpScalingModel& model, const LogitSet& data, std::span<double> grad);

struct MlpOptions {
    SgdConfig sgd{};
    double output_scale = 0.01;
};

MlpScalingModel fit_mlp_scaling(const LogitSet& val, std::uint64_t seed, const MlpOptions& options = {},
                                std::vector<double>* loss_history = nullptr);

PredictionSet apply_mlp(const MlpScalingModel& model, const LogitSet& test);

}  // namespace calib

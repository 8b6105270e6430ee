#pragma once

// Uniform front end over every recalibration method, plus JSON
// serialization of fitted models ({"method": ..., flat parameter arrays}).

#include "calib/recalibration.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace calib {

enum class Method {
    histogram,
    cc_histogram,
    bootstrap_histogram,
    isotonic,
    platt,
    temperature,
    vector,
    matrix,
    mlp,
};

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
std::vector<std::string> method_names();

// Scaling methods consume logits; binning and isotonic consume probabilities.
bool requires_logits(Method m) noexcept;

struct RecalibrationSpec {
    Method method = Method::temperature;
    TemperatureObjective objective = TemperatureObjective::nll;
    GceConfig metric = named_metric("ECE");  // temperature gce objective
    int histogram_bins = 20;
    int bootstrap_samples = 100;
    EmptyBinFallback fallback = EmptyBinFallback::bin_center;
    SgdConfig sgd{};
    std::uint64_t seed = 0;
};

// Predictions as supplied: probabilities always, logits when available.
struct ModelOutputs {
    PredictionSet probs;
    std::optional<LogitSet> logits;

    static ModelOutputs from_logits(LogitSet z);
    static ModelOutputs from_probs(PredictionSet p) { return {std::move(p), std::nullopt}; }

    std::size_t n_points() const noexcept { return probs.n_points(); }
};

ModelOutputs slice(const ModelOutputs& m, std::size_t begin, std::size_t end);
std::pair<ModelOutputs, ModelOutputs> split_validation(const ModelOutputs& m);

using RecalibratorModel = std::variant<HistogramBinningModel, std::vector<IsotonicModel>, TemperatureModel,
                                       AffineScalingModel, MlpScalingModel>;

struct Recalibrator {
    Method method = Method::temperature;
    std::string objective;  // "nll" or a metric tuple, temperature only
    RecalibratorModel model;

    PredictionSet apply(const ModelOutputs& test) const;
};

// Throws ArgumentError("logits required ...") when a scaling method is given
// probabilities only.
Recalibrator fit_recalibrator(const RecalibrationSpec& spec, const ModelOutputs& val);

nlohmann::json to_json(const Recalibrator& r);
Recalibrator recalibrator_from_json(const nlohmann::json& j);

}  // namespace calib

#pragma once

// Prediction CSV files and JSON run configuration.
//
// CSV layout: N rows of K numeric columns (probabilities, or logits when the
// caller says so) followed by an integer label column. An optional header
// row `p0,p1,...,label` is accepted and skipped.

#include "calib/error.hpp"
#include "calib/metrics.hpp"
#include "calib/recalibrator.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace calib {

class ParseError : public ValidationError {
public:
    ParseError(const std::string& source, std::size_t row, std::size_t column, const std::string& what);

    std::size_t row() const noexcept { return row_; }        // 1-based file line
    std::size_t column() const noexcept { return column_; }  // 1-based field

private:
    std::size_t row_;
    std::size_t column_;
};

struct PredictionTable {
    Matrix values;
    std::vector<int> labels;
    bool had_header = false;
};

PredictionTable read_prediction_table(std::istream& in, const std::string& source = "<input>");
PredictionTable read_prediction_table(const std::string& path);

// logits=false validates rows as probabilities; logits=true builds a LogitSet
// and derives probabilities by softmax.
ModelOutputs load_predictions(const std::string& path, bool logits);
ModelOutputs to_model_outputs(PredictionTable table, bool logits);

// 17 significant digits, shortest form that round-trips.
std::string format_double(double v);

void write_prediction_csv(std::ostream& out, const Matrix& values, std::span<const int> labels,
                          bool header = false);
void write_prediction_csv(std::ostream& out, const PredictionSet& p, bool header = false);
void write_prediction_csv(const std::string& path, const PredictionSet& p, bool header = false);

// Writes text to a file, or to stdout when path is "-".
void write_text_file(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// Run configuration

struct MetricSettings {
    std::optional<std::string> named;
    BinKind binning = BinKind::even;
    bool max_probs = true;
    bool class_conditional = false;
    double threshold = 0.0;
    Norm norm = Norm::l1;
    L2Weighting l2_weighting = L2Weighting::weighted;
    int bins = kDefaultBins;

    GceConfig to_config() const;
};

struct RunConfig {
    MetricSettings metric{};
    RecalibrationSpec recalibration{};
    std::string objective = "nll";  // "nll" or a metric name
    std::uint64_t seed = 0;
    std::string split = "first-half";
};

// Rejects unknown keys and wrongly typed values with ArgumentError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Config for a temperature objective name: "nll", or a metric name bound to
// the given bin count.
void apply_objective(RecalibrationSpec& spec, const std::string& objective, int bins);

}  // namespace calib

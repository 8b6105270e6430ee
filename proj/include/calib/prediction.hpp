#pragma once

// Prediction data model: probability and logit matrices with integer labels,
// plus the scored "views" every calibration metric bins over.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace calib {

inline constexpr double kRowSumTolerance = 1e-6;

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// N x K probabilities with labels in {0..K-1}. Construction validates.
class PredictionSet {
public:
    PredictionSet(Matrix probs, std::vector<int> labels);

    // Divides each row by its sum before validating. Rows must have a
    // positive finite sum; entries must be non-negative.
    static PredictionSet renormalized(Matrix probs, std::vector<int> labels);

    const Matrix& probs() const noexcept { return probs_; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::size_t n_points() const noexcept { return probs_.rows(); }
    std::size_t n_classes() const noexcept { return probs_.cols(); }

    std::span<const double> row(std::size_t i) const noexcept { return probs_.row(i); }
    int label(std::size_t i) const noexcept { return labels_[i]; }

    bool operator==(const PredictionSet&) const = default;

private:
    Matrix probs_;
    std::vector<int> labels_;
};

// N x K unbounded finite logits with labels.
class LogitSet {
public:
    LogitSet(Matrix logits, std::vector<int> labels);

    const Matrix& logits() const noexcept { return logits_; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::size_t n_points() const noexcept { return logits_.rows(); }
    std::size_t n_classes() const noexcept { return logits_.cols(); }

    std::span<const double> row(std::size_t i) const noexcept { return logits_.row(i); }
    int label(std::size_t i) const noexcept { return labels_[i]; }

    bool operator==(const LogitSet&) const = default;

private:
    Matrix logits_;
    std::vector<int> labels_;
};

struct ScoredPrediction {
    double score = 0.0;
    int class_index = 0;
    bool correct = false;
    std::size_t datapoint_index = 0;
};

// Numerically stable softmax of one row (max subtracted first).
void softmax_row(std::span<const double> logits, std::span<double> out) noexcept;

// Row-wise softmax; throws ValidationError on non-finite logits.
PredictionSet softmax(const LogitSet& logits);

// softmax(logits / temperature); temperature must be positive and finite.
PredictionSet softmax(const LogitSet& logits, double temperature);

// Lowest index among maximal entries.
std::size_t argmax(std::span<const double> row) noexcept;

// One entry per datapoint: the top-class probability.
std::vector<ScoredPrediction> max_prob_view(const PredictionSet& p);

// One entry per (datapoint, class) whose probability survives the threshold:
// score > threshold when threshold > 0; everything when threshold == 0.
std::vector<ScoredPrediction> full_prob_view(const PredictionSet& p, double threshold = 0.0);

// Positional split: first ceil(N/2) points, then the rest.
std::pair<PredictionSet, PredictionSet> split_validation(const PredictionSet& p);
std::pair<LogitSet, LogitSet> split_validation(const LogitSet& z);

// Rows [begin, end) of a set.
PredictionSet slice(const PredictionSet& p, std::size_t begin, std::size_t end);
LogitSet slice(const LogitSet& z, std::size_t begin, std::size_t end);

// Mean negative log-likelihood of the labels; probabilities are floored at
// 1e-300 before the log.
double negative_log_likelihood(const PredictionSet& p);

double accuracy(const PredictionSet& p);

}  // namespace calib

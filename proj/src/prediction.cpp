#include "calib/prediction.hpp"

#include "calib/error.hpp"
#include "calib/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace calib {

namespace {

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t cols) {
    if (labels.size() != rows)
        throw ValidationError("label count " + std::to_string(labels.size()) +
                              " does not match row count " + std::to_string(rows));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= cols)
            throw ValidationError("row " + std::to_string(i) + ": label " +
                                  std::to_string(labels[i]) + " outside 0.." +
                                  std::to_string(cols - 1));
    }
}

void check_shape(std::size_t rows, std::size_t cols) {
    if (rows < 1) throw ValidationError("prediction set must contain at least one point");
    if (cols < 2) throw ValidationError("prediction set must have at least two classes");
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw ValidationError("matrix data size " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(rows) + "x" +
                              std::to_string(cols));
}

PredictionSet::PredictionSet(Matrix probs, std::vector<int> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
    check_shape(probs_.rows(), probs_.cols());
    check_labels(labels_, probs_.rows(), probs_.cols());
    for (std::size_t i = 0; i < probs_.rows(); ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < probs_.cols(); ++k) {
            const double v = probs_(i, k);
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("row " + std::to_string(i) + ", column " +
                                      std::to_string(k) + ": probability " + std::to_string(v) +
                                      " outside [0,1]");
            total += v;
        }
        if (std::abs(total - 1.0) > kRowSumTolerance)
            throw ValidationError("row " + std::to_string(i) + ": probabilities sum to " +
                                  std::to_string(total));
    }
}

PredictionSet PredictionSet::renormalized(Matrix probs, std::vector<int> labels) {
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        auto r = probs.row(i);
        double total = 0.0;
        for (double v : r) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("row " + std::to_string(i) +
                                      ": cannot renormalize negative or non-finite entries");
            total += v;
        }
        if (!(total > 0.0))
            throw ValidationError("row " + std::to_string(i) + ": cannot renormalize a zero row");
        for (double& v : r) v /= total;
    }
    return PredictionSet(std::move(probs), std::move(labels));
}

LogitSet::LogitSet(Matrix logits, std::vector<int> labels)
    : logits_(std::move(logits)), labels_(std::move(labels)) {
    check_shape(logits_.rows(), logits_.cols());
    check_labels(labels_, logits_.rows(), logits_.cols());
    for (std::size_t i = 0; i < logits_.rows(); ++i)
        for (std::size_t k = 0; k < logits_.cols(); ++k)
            if (!std::isfinite(logits_(i, k)))
                throw ValidationError("row " + std::to_string(i) + ", column " +
                                      std::to_string(k) + ": logit is not finite");
}

void softmax_row(std::span<const double> logits, std::span<double> out) noexcept {
    const double m = simd::max_value(logits);
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        out[k] = std::exp(logits[k] - m);
        total += out[k];
    }
    const double inv = 1.0 / total;
    for (std::size_t k = 0; k < logits.size(); ++k) out[k] *= inv;
}

PredictionSet softmax(const LogitSet& z) { return softmax(z, 1.0); }

PredictionSet softmax(const LogitSet& z, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw ArgumentError("temperature must be positive and finite");
    const std::size_t n = z.n_points(), k = z.n_classes();
    Matrix probs(n, k);
    std::vector<double> scaled(k);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = z.row(i);
        for (std::size_t c = 0; c < k; ++c) scaled[c] = r[c] / temperature;
        softmax_row(scaled, probs.row(i));
    }
    return PredictionSet(std::move(probs), {z.labels().begin(), z.labels().end()});
}

std::size_t argmax(std::span<const double> row) noexcept {
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
        if (row[k] > row[best]) best = k;
    return best;
}

std::vector<ScoredPrediction> max_prob_view(const PredictionSet& p) {
    std::vector<ScoredPrediction> out;
    out.reserve(p.n_points());
    for (std::size_t i = 0; i < p.n_points(); ++i) {
        const auto r = p.row(i);
        const std::size_t top = argmax(r);
        out.push_back({r[top], static_cast<int>(top), static_cast<int>(top) == p.label(i), i});
    }
    return out;
}

std::vector<ScoredPrediction> full_prob_view(const PredictionSet& p, double threshold) {
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw ArgumentError("threshold must lie in [0,1)");
    std::vector<ScoredPrediction> out;
    out.reserve(p.n_points() * p.n_classes());
    for (std::size_t i = 0; i < p.n_points(); ++i) {
        const auto r = p.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (threshold > 0.0 && !(r[k] > threshold)) continue;
            out.push_back({r[k], static_cast<int>(k), static_cast<int>(k) == p.label(i), i});
        }
    }
    return out;
}

PredictionSet slice(const PredictionSet& p, std::size_t begin, std::size_t end) {
    const std::size_t k = p.n_classes();
    std::vector<double> data(p.probs().data().begin() + begin * k, p.probs().data().begin() + end * k);
    return PredictionSet(Matrix(end - begin, k, std::move(data)),
                         {p.labels().begin() + begin, p.labels().begin() + end});
}

LogitSet slice(const LogitSet& z, std::size_t begin, std::size_t end) {
    const std::size_t k = z.n_classes();
    std::vector<double> data(z.logits().data().begin() + begin * k,
                             z.logits().data().begin() + end * k);
    return LogitSet(Matrix(end - begin, k, std::move(data)),
                    {z.labels().begin() + begin, z.labels().begin() + end});
}

std::pair<PredictionSet, PredictionSet> split_validation(const PredictionSet& p) {
    if (p.n_points() < 2) throw ArgumentError("split_validation requires at least two points");
    const std::size_t half = (p.n_points() + 1) / 2;
    return {slice(p, 0, half), slice(p, half, p.n_points())};
}

std::pair<LogitSet, LogitSet> split_validation(const LogitSet& z) {
    if (z.n_points() < 2) throw ArgumentError("split_validation requires at least two points");
    const std::size_t half = (z.n_points() + 1) / 2;
    return {slice(z, 0, half), slice(z, half, z.n_points())};
}

double negative_log_likelihood(const PredictionSet& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.n_points(); ++i)
        total -= std::log(std::max(p.row(i)[p.label(i)], 1e-300));
    return total / static_cast<double>(p.n_points());
}

double accuracy(const PredictionSet& p) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < p.n_points(); ++i)
        hits += static_cast<int>(argmax(p.row(i))) == p.label(i);
    return static_cast<double>(hits) / static_cast<double>(p.n_points());
}

}  // namespace calib

#pragma once

// Building blocks shared by the recalibrators and their tests.

#include "calib/prediction.hpp"

#include <random>
#include <span>

namespace calib {

// N draws with replacement from val.
PredictionSet bootstrap_resample(const PredictionSet& val, std::mt19937_64& rng);

// Sets each row's argmax entry to new_top[i] and rescales the rest to keep
// the row sum at 1.
PredictionSet replace_top_probability(const PredictionSet& test, std::span<const double> new_top);

// Mean softmax NLL for adjusted logits u (N x K); grad_u receives
// (softmax(u) - onehot) / N when non-empty.
double softmax_nll(const Matrix& u, std::span<const int> labels, Matrix* grad_u);

}  // namespace calib

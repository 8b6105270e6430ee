#pragma once

// Derivative-free and first-order minimizers used by the recalibrators.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace calib {

using Objective = std::function<double(std::span<const double>)>;

// Returns the loss and writes the gradient into `grad` (same size as x).
using ObjectiveWithGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct NelderMeadOptions {
    double tol = 1e-8;  // on max - min of the simplex values
    int max_iter = 500;
};

struct SimplexState {
    std::vector<std::vector<double>> vertices;
    std::vector<double> values;
    int iteration = 0;
};

struct NelderMeadResult {
    std::vector<double> point;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. The initial
// simplex perturbs each coordinate of x0 by 5% (0.00025 when it is zero).
// Stops when the vertex values span less than tol and the simplex centroid
// does not improve on the best vertex by more than tol.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

struct SgdConfig {
    double learning_rate = 0.001;
    double momentum = 0.9;
    bool nesterov = true;
    int iterations = 1000;
};

void validate(const SgdConfig& cfg);

// Called after every step with (iteration, loss at the pre-step point).
using SgdObserver = std::function<void(int, double)>;

// Full-batch momentum SGD. With nesterov the gradient is taken at the
// look-ahead point x + mu*v:  v <- mu*v - lr*grad(x + mu*v);  x <- x + v.
// Without nesterov: v <- mu*v - lr*grad(x);  x <- x + v.
// Throws DivergenceError naming the iteration when the loss is not finite.
std::vector<double> sgd_minimize(const ObjectiveWithGradient& f, std::vector<double> params0,
                                 const SgdConfig& cfg, const SgdObserver& observer = {});

// Max over coordinates of |analytic - numeric| / max(|analytic|, |numeric|, 1e-8),
// numeric by central differences with step h.
double grad_check(const ObjectiveWithGradient& f, std::span<const double> point, double h = 1e-5);

// Golden-section minimization of a unimodal 1-D function on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-10, int max_iter = 200);

}  // namespace calib

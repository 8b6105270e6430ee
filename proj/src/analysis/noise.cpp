#include "calib/analysis.hpp"
#include "calib/error.hpp"
#include "calib/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace calib {

namespace {

struct Blobs {
    Matrix train_x, test_x;
    std::vector<int> train_y, test_y;
};

Blobs make_blobs(std::mt19937_64& rng, const NoiseOptions& o) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> cls(0, static_cast<int>(o.n_classes) - 1);

    Matrix means(o.n_classes, o.dim);
    for (std::size_t k = 0; k < o.n_classes; ++k) {
        auto m = means.row(k);
        for (double& v : m) v = normal(rng);
        const double norm = std::sqrt(simd::dot(m, m));
        for (double& v : m) v *= o.mean_radius / norm;
    }
    auto draw = [&](std::size_t n, Matrix& x, std::vector<int>& y) {
        x = Matrix(n, o.dim);
        y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = cls(rng);
            const auto m = means.row(static_cast<std::size_t>(y[i]));
            auto r = x.row(i);
            for (std::size_t d = 0; d < o.dim; ++d) r[d] = m[d] + normal(rng);
        }
    };
    Blobs b;
    draw(o.n_train, b.train_x, b.train_y);
    draw(o.n_test, b.test_x, b.test_y);
    return b;
}

struct SoftmaxRegression {
    Matrix weight;  // K x D
    std::vector<double> bias;

    void logits(std::span<const double> x, std::span<double> out) const {
        simd::gemv(weight.data(), weight.rows(), weight.cols(), x, bias, out);
    }
};

SoftmaxRegression train(const Matrix& x, std::span<const int> y, const NoiseOptions& o) {
    const std::size_t n = x.rows(), k = o.n_classes, d = o.dim;
    SoftmaxRegression model{Matrix(k, d), std::vector<double>(k, 0.0)};
    Matrix grad_w(k, d);
    std::vector<double> grad_b(k), u(k), p(k);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int it = 0; it < o.gd_iterations; ++it) {
        std::fill(grad_w.data().begin(), grad_w.data().end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x.row(i);
            model.logits(xi, u);
            softmax_row(u, p);
            for (std::size_t c = 0; c < k; ++c) {
                const double g = (p[c] - (static_cast<int>(c) == y[i] ? 1.0 : 0.0)) * inv_n;
                simd::axpy(g, xi, grad_w.row(c));
                grad_b[c] += g;
            }
        }
        simd::axpy(-o.learning_rate, grad_w.data(), model.weight.data());
        simd::axpy(-o.learning_rate, grad_b, model.bias);
    }
    return model;
}

}  // namespace

std::vector<double> default_noise_levels(int count, double max_level) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[i] = count == 1 ? 0.0 : max_level * i / (count - 1);
    return out;
}

std::vector<NoiseLevelResult> label_noise_experiment(std::uint64_t seed, std::span<const double> levels,
                                                     const NoiseOptions& o) {
    for (double q : levels)
        if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("noise levels must lie in [0,1]");
    if (o.n_classes < 2 || o.dim < 1 || o.n_train < 1 || o.n_test < 1)
        throw ArgumentError("label noise experiment needs at least two classes and non-empty splits");

    std::mt19937_64 rng(seed);
    const Blobs data = make_blobs(rng, o);

    // One corruption order and one replacement label per training point, shared
    // by all levels so higher levels corrupt a superset of lower ones.
    std::vector<std::size_t> order(o.n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> cls(0, static_cast<int>(o.n_classes) - 1);
    std::vector<int> replacement(o.n_train);
    for (int& r : replacement) r = cls(rng);

    std::vector<NoiseLevelResult> results;
    for (double q : levels) {
        std::vector<int> labels = data.train_y;
        const auto corrupted = static_cast<std::size_t>(std::llround(q * static_cast<double>(o.n_train)));
        for (std::size_t j = 0; j < corrupted; ++j) labels[order[j]] = replacement[order[j]];

        const SoftmaxRegression model = train(data.train_x, labels, o);

        Matrix probs(o.n_test, o.n_classes);
        std::vector<double> u(o.n_classes);
        for (std::size_t i = 0; i < o.n_test; ++i) {
            model.logits(data.test_x.row(i), u);
            softmax_row(u, probs.row(i));
        }
        const PredictionSet test(std::move(probs), data.test_y);

        NoiseLevelResult r;
        r.noise = q;
        r.accuracy = accuracy(test);
        std::size_t omitted = 0;
        double conf = 0.0;
        for (std::size_t i = 0; i < test.n_points(); ++i) {
            const auto row = test.row(i);
            const std::size_t top = argmax(row);
            conf += row[top];
            for (std::size_t c = 0; c < row.size(); ++c)
                if (c != top && row[c] > o.omitted_threshold) ++omitted;
        }
        r.mean_max_confidence = conf / static_cast<double>(test.n_points());
        r.omitted_fraction =
            static_cast<double>(omitted) / static_cast<double>(test.n_points() * (o.n_classes - 1));
        r.ece = gce(test, named_metric("ECE", o.n_bins)).value;
        r.sce = gce(test, named_metric("SCE", o.n_bins)).value;
        r.ace = gce(test, named_metric("ACE", o.n_bins)).value;
        results.push_back(r);
    }
    return results;
}

}  // namespace calib

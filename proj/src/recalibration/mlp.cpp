#include "calib/error.hpp"
#include "calib/recalibration.hpp"
#include "calib/recalibration_detail.hpp"
#include "calib/simd/kernels.hpp"

#include <cmath>
#include <random>

namespace calib {

MlpScalingModel MlpScalingModel::initialize(std::size_t n_classes, std::uint64_t seed, double output_scale) {
    MlpScalingModel m;
    std::mt19937_64 rng(seed);
    std::size_t in = n_classes;
    for (std::size_t l = 0; l <= kDepth; ++l) {
        const bool last = l == kDepth;
        MlpLayer layer;
        layer.in = in;
        layer.out = last ? n_classes : kHidden;
        const double stddev = last ? output_scale : std::sqrt(2.0 / static_cast<double>(in));
        std::normal_distribution<double> dist(0.0, stddev);
        layer.weight.resize(layer.out * layer.in);
        for (double& w : layer.weight) w = dist(rng);
        layer.bias.assign(layer.out, 0.0);
        in = layer.out;
        m.layers.push_back(std::move(layer));
    }
    return m;
}

std::size_t MlpScalingModel::n_params() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
}

std::vector<double> MlpScalingModel::pack() const {
    std::vector<double> out;
    out.reserve(n_params());
    for (const auto& l : layers) {
        out.insert(out.end(), l.weight.begin(), l.weight.end());
        out.insert(out.end(), l.bias.begin(), l.bias.end());
    }
    return out;
}

void MlpScalingModel::unpack(std::span<const double> params) {
    if (params.size() != n_params()) throw ArgumentError("mlp: parameter count mismatch");
    std::size_t pos = 0;
    for (auto& l : layers) {
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.weight.size(), l.weight.begin());
        pos += l.weight.size();
        std::copy_n(params.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.begin());
        pos += l.bias.size();
    }
}

void MlpScalingModel::forward(std::span<const double> z, std::span<double> out) const {
    std::vector<double> cur(z.begin(), z.end()), next;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        next.assign(layer.out, 0.0);
        simd::gemv(layer.weight, layer.out, layer.in, cur, layer.bias, next);
        if (l + 1 < layers.size())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), out.begin());
}

namespace {

void check_shape(const MlpScalingModel& model, const LogitSet& data) {
    if (model.layers.empty() || model.layers.front().in != data.n_classes() ||
        model.layers.back().out != data.n_classes())
        throw ArgumentError("mlp: model width does not match the number of classes");
}

}  // namespace

double mlp_nll(const MlpScalingModel& model, const LogitSet& data, std::span<double> grad) {
    check_shape(model, data);
    const std::size_t n = data.n_points();
    const std::size_t depth = model.layers.size();

    // acts[l] is the input to layer l (post-ReLU for l > 0).
    std::vector<Matrix> acts;
    acts.push_back(data.logits());
    for (std::size_t l = 0; l < depth; ++l) {
        const auto& layer = model.layers[l];
        Matrix next(n, layer.out);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = next.row(i);
            simd::gemv(layer.weight, layer.out, layer.in, acts[l].row(i), layer.bias, row);
            if (l + 1 < depth)
                for (double& v : row) v = v > 0.0 ? v : 0.0;
        }
        acts.push_back(std::move(next));
    }

    if (grad.empty()) return softmax_nll(acts.back(), data.labels(), nullptr);

    Matrix g(n, data.n_classes());
    const double loss = softmax_nll(acts.back(), data.labels(), &g);
    std::fill(grad.begin(), grad.end(), 0.0);

    std::vector<std::size_t> offset(depth);
    std::size_t pos = 0;
    for (std::size_t l = 0; l < depth; ++l) {
        offset[l] = pos;
        pos += model.layers[l].weight.size() + model.layers[l].bias.size();
    }

    for (std::size_t l = depth; l-- > 0;) {
        const auto& layer = model.layers[l];
        auto gw = grad.subspan(offset[l], layer.weight.size());
        auto gb = grad.subspan(offset[l] + layer.weight.size(), layer.bias.size());
        Matrix prev(l > 0 ? n : 0, layer.in);
        for (std::size_t i = 0; i < n; ++i) {
            const auto gi = g.row(i);
            const auto ai = acts[l].row(i);
            for (std::size_t o = 0; o < layer.out; ++o) {
                if (gi[o] == 0.0) continue;
                simd::axpy(gi[o], ai, gw.subspan(o * layer.in, layer.in));
                gb[o] += gi[o];
                if (l > 0)
                    simd::axpy(gi[o], std::span<const double>(layer.weight).subspan(o * layer.in, layer.in),
                               prev.row(i));
            }
            if (l > 0) {
                auto pi = prev.row(i);
                for (std::size_t j = 0; j < layer.in; ++j)
                    if (!(ai[j] > 0.0)) pi[j] = 0.0;
            }
        }
        if (l > 0) g = std::move(prev);
    }
    return loss;
}

MlpScalingModel fit_mlp_scaling(const LogitSet& val, std::uint64_t seed, const MlpOptions& options,
                                std::vector<double>* loss_history) {
    MlpScalingModel model = MlpScalingModel::initialize(val.n_classes(), seed, options.output_scale);
    MlpScalingModel work = model;
    auto objective = [&](std::span<const double> x, std::span<double> grad) {
        work.unpack(x);
        return mlp_nll(work, val, grad);
    };
    SgdObserver observer;
    if (loss_history) {
        loss_history->clear();
        observer = [&](int, double loss) { loss_history->push_back(loss); };
    }
    model.unpack(sgd_minimize(objective, model.pack(), options.sgd, observer));
    return model;
}

PredictionSet apply_mlp(const MlpScalingModel& model, const LogitSet& test) {
    check_shape(model, test);
    const std::size_t k = test.n_classes();
    Matrix probs(test.n_points(), k);
    std::vector<double> u(k);
    for (std::size_t i = 0; i < test.n_points(); ++i) {
        model.forward(test.row(i), u);
        softmax_row(u, probs.row(i));
    }
    return PredictionSet(std::move(probs), {test.labels().begin(), test.labels().end()});
}

}  // namespace calib

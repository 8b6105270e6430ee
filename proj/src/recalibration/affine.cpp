#include "calib/error.hpp"
#include "calib/recalibration.hpp"
#include "calib/recalibration_detail.hpp"
#include "calib/simd/kernels.hpp"

#include <cmath>

namespace calib {

double softmax_nll(const Matrix& u, std::span<const int> labels, Matrix* grad_u) {
    const std::size_t n = u.rows(), k = u.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> p(k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = u.row(i);
        const double m = simd::max_value(r);
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            p[c] = std::exp(r[c] - m);
            s += p[c];
        }
        const auto y = static_cast<std::size_t>(labels[i]);
        total += std::log(s) - (r[y] - m);
        if (grad_u) {
            auto g = grad_u->row(i);
            for (std::size_t c = 0; c < k; ++c) g[c] = (p[c] / s - (c == y ? 1.0 : 0.0)) * inv_n;
        }
    }
    return total * inv_n;
}

std::string_view to_string(AffineKind kind) noexcept {
    switch (kind) {
        case AffineKind::platt: return "platt";
        case AffineKind::vector: return "vector";
        case AffineKind::matrix: return "matrix";
    }
    return "unknown";
}

AffineScalingModel AffineScalingModel::identity(AffineKind kind, std::size_t k) {
    AffineScalingModel m;
    m.kind = kind;
    m.n_classes = k;
    switch (kind) {
        case AffineKind::platt:
            m.weight = {1.0};
            m.bias = {0.0};
            break;
        case AffineKind::vector:
            m.weight.assign(k, 1.0);
            m.bias.assign(k, 0.0);
            break;
        case AffineKind::matrix:
            m.weight.assign(k * k, 0.0);
            for (std::size_t c = 0; c < k; ++c) m.weight[c * k + c] = 1.0;
            m.bias.assign(k, 0.0);
            break;
    }
    return m;
}

std::vector<double> AffineScalingModel::pack() const {
    std::vector<double> out(weight);
    out.insert(out.end(), bias.begin(), bias.end());
    return out;
}

void AffineScalingModel::unpack(std::span<const double> params) {
    if (params.size() != n_params()) throw ArgumentError("affine: parameter count mismatch");
    std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(weight.size()), weight.begin());
    std::copy(params.begin() + static_cast<std::ptrdiff_t>(weight.size()), params.end(), bias.begin());
}

void AffineScalingModel::transform(std::span<const double> z, std::span<double> out) const noexcept {
    const std::size_t k = n_classes;
    switch (kind) {
        case AffineKind::platt:
            if (k == 2) {
                out[0] = 0.0;
                out[1] = weight[0] * (z[1] - z[0]) + bias[0];
            } else {
                for (std::size_t c = 0; c < k; ++c) out[c] = weight[0] * z[c] + bias[0];
            }
            break;
        case AffineKind::vector:
            for (std::size_t c = 0; c < k; ++c) out[c] = weight[c] * z[c] + bias[c];
            break;
        case AffineKind::matrix:
            simd::gemv(weight, k, k, z, bias, out);
            break;
    }
}

namespace {

void check_shape(const AffineScalingModel& model, const LogitSet& data) {
    if (data.n_classes() != model.n_classes)
        throw ArgumentError("affine model expects " + std::to_string(model.n_classes) +
                            " classes, data has " + std::to_string(data.n_classes()));
}

Matrix adjusted_logits(const AffineScalingModel& model, const LogitSet& data) {
    Matrix u(data.n_points(), data.n_classes());
    for (std::size_t i = 0; i < data.n_points(); ++i) model.transform(data.row(i), u.row(i));
    return u;
}

}  // namespace

double affine_nll(const AffineScalingModel& model, const LogitSet& data, std::span<double> grad) {
    check_shape(model, data);
    const std::size_t n = data.n_points(), k = data.n_classes();
    const Matrix u = adjusted_logits(model, data);
    if (grad.empty()) return softmax_nll(u, data.labels(), nullptr);

    Matrix gu(n, k);
    const double loss = softmax_nll(u, data.labels(), &gu);
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t nw = model.weight.size();
    auto gw = grad.first(nw);
    auto gb = grad.subspan(nw);

    for (std::size_t i = 0; i < n; ++i) {
        const auto z = data.row(i);
        const auto g = gu.row(i);
        switch (model.kind) {
            case AffineKind::platt:
                if (k == 2) {
                    gw[0] += g[1] * (z[1] - z[0]);
                    gb[0] += g[1];
                } else {
                    gw[0] += simd::dot(g, z);
                    gb[0] += simd::sum(g);
                }
                break;
            case AffineKind::vector:
                for (std::size_t c = 0; c < k; ++c) {
                    gw[c] += g[c] * z[c];
                    gb[c] += g[c];
                }
                break;
            case AffineKind::matrix:
                for (std::size_t c = 0; c < k; ++c) {
                    simd::axpy(g[c], z, gw.subspan(c * k, k));
                    gb[c] += g[c];
                }
                break;
        }
    }
    return loss;
}

AffineScalingModel fit_affine_scaling(const LogitSet& val, AffineKind kind, const SgdConfig& sgd) {
    AffineScalingModel model = AffineScalingModel::identity(kind, val.n_classes());
    AffineScalingModel work = model;
    auto objective = [&](std::span<const double> x, std::span<double> grad) {
        work.unpack(x);
        return affine_nll(work, val, grad);
    };
    model.unpack(sgd_minimize(objective, model.pack(), sgd));
    return model;
}

PredictionSet apply_affine(const AffineScalingModel& model, const LogitSet& test) {
    check_shape(model, test);
    const Matrix u = adjusted_logits(model, test);
    Matrix probs(test.n_points(), test.n_classes());
    for (std::size_t i = 0; i < test.n_points(); ++i) softmax_row(u.row(i), probs.row(i));
    return PredictionSet(std::move(probs), {test.labels().begin(), test.labels().end()});
}

}  // namespace calib

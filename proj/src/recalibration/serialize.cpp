#include "calib/error.hpp"
#include "calib/recalibrator.hpp"

#include <array>

namespace calib {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethods{{
    {Method::histogram, "histogram"},
    {Method::cc_histogram, "cc-histogram"},
    {Method::bootstrap_histogram, "bootstrap-histogram"},
    {Method::isotonic, "isotonic"},
    {Method::platt, "platt"},
    {Method::temperature, "temperature"},
    {Method::vector, "vector"},
    {Method::matrix, "matrix"},
    {Method::mlp, "mlp"},
}};

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};

const LogitSet& need_logits(const ModelOutputs& m, Method method) {
    if (!m.logits)
        throw ArgumentError("logits required: method '" + std::string(to_string(method)) +
                            "' rescales logits; pass logit input");
    return *m.logits;
}

std::string objective_label(const RecalibrationSpec& spec) {
    if (spec.objective == TemperatureObjective::nll) return "nll";
    return axis_tuple(spec.metric) + " bins=" + std::to_string(spec.metric.binning.n_bins);
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    for (const auto& [method, name] : kMethods)
        if (method == m) return name;
    return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
    for (const auto& [method, name] : kMethods)
        if (name == text) return method;
    return std::nullopt;
}

std::vector<std::string> method_names() {
    std::vector<std::string> out;
    for (const auto& entry : kMethods) out.emplace_back(entry.second);
    return out;
}

bool requires_logits(Method m) noexcept {
    switch (m) {
        case Method::platt:
        case Method::temperature:
        case Method::vector:
        case Method::matrix:
        case Method::mlp: return true;
        default: return false;
    }
}

ModelOutputs ModelOutputs::from_logits(LogitSet z) {
    PredictionSet p = softmax(z);
    return {std::move(p), std::move(z)};
}

ModelOutputs slice(const ModelOutputs& m, std::size_t begin, std::size_t end) {
    ModelOutputs out{slice(m.probs, begin, end), std::nullopt};
    if (m.logits) out.logits = slice(*m.logits, begin, end);
    return out;
}

std::pair<ModelOutputs, ModelOutputs> split_validation(const ModelOutputs& m) {
    if (m.n_points() < 2) throw ArgumentError("split_validation requires at least two points");
    const std::size_t half = (m.n_points() + 1) / 2;
    return {slice(m, 0, half), slice(m, half, m.n_points())};
}

Recalibrator fit_recalibrator(const RecalibrationSpec& spec, const ModelOutputs& val) {
    Recalibrator r;
    r.method = spec.method;
    HistogramOptions hist;
    hist.n_bins = spec.histogram_bins;
    hist.seed = spec.seed;
    hist.fallback = spec.fallback;
    switch (spec.method) {
        case Method::histogram:
            r.model = fit_histogram_binning(val.probs, hist);
            break;
        case Method::cc_histogram:
            hist.class_conditional = true;
            r.model = fit_histogram_binning(val.probs, hist);
            break;
        case Method::bootstrap_histogram:
            hist.bootstrap = spec.bootstrap_samples;
            r.model = fit_histogram_binning(val.probs, hist);
            break;
        case Method::isotonic:
            r.model = fit_isotonic_multiclass(val.probs);
            break;
        case Method::temperature: {
            TemperatureOptions t;
            t.objective = spec.objective;
            t.metric = spec.metric;
            r.model = fit_temperature(need_logits(val, spec.method), t);
            r.objective = objective_label(spec);
            break;
        }
        case Method::platt:
            r.model = fit_affine_scaling(need_logits(val, spec.method), AffineKind::platt, spec.sgd);
            break;
        case Method::vector:
            r.model = fit_affine_scaling(need_logits(val, spec.method), AffineKind::vector, spec.sgd);
            break;
        case Method::matrix:
            r.model = fit_affine_scaling(need_logits(val, spec.method), AffineKind::matrix, spec.sgd);
            break;
        case Method::mlp: {
            MlpOptions o;
            o.sgd = spec.sgd;
            r.model = fit_mlp_scaling(need_logits(val, spec.method), spec.seed, o);
            break;
        }
    }
    return r;
}

PredictionSet Recalibrator::apply(const ModelOutputs& test) const {
    return std::visit(
        overloaded{
            [&](const HistogramBinningModel& m) { return apply_histogram_binning(m, test.probs); },
            [&](const std::vector<IsotonicModel>& m) { return apply_isotonic_multiclass(m, test.probs); },
            [&](const TemperatureModel& m) { return apply_temperature(m, need_logits(test, method)); },
            [&](const AffineScalingModel& m) { return apply_affine(m, need_logits(test, method)); },
            [&](const MlpScalingModel& m) { return apply_mlp(m, need_logits(test, method)); },
        },
        model);
}

nlohmann::json to_json(const Recalibrator& r) {
    nlohmann::json j;
    j["method"] = std::string(to_string(r.method));
    std::visit(overloaded{
                   [&](const HistogramBinningModel& m) {
                       j["edges"] = m.edges;
                       j["class_conditional"] = m.class_conditional;
                       j["bin_values"] = m.tables;
                   },
                   [&](const std::vector<IsotonicModel>& models) {
                       auto arr = nlohmann::json::array();
                       for (const auto& m : models)
                           arr.push_back({{"breakpoints", m.breakpoints}, {"fitted_values", m.fitted_values}});
                       j["classes"] = std::move(arr);
                   },
                   [&](const TemperatureModel& m) {
                       j["temperature"] = m.temperature;
                       j["converged"] = m.converged;
                       j["objective_value"] = m.objective_value;
                       j["objective"] = r.objective;
                   },
                   [&](const AffineScalingModel& m) {
                       j["kind"] = std::string(to_string(m.kind));
                       j["n_classes"] = m.n_classes;
                       j["weight"] = m.weight;
                       j["bias"] = m.bias;
                   },
                   [&](const MlpScalingModel& m) {
                       auto arr = nlohmann::json::array();
                       for (const auto& l : m.layers)
                           arr.push_back({{"in", l.in}, {"out", l.out}, {"weight", l.weight}, {"bias", l.bias}});
                       j["layers"] = std::move(arr);
                   },
               },
               r.model);
    return j;
}

Recalibrator recalibrator_from_json(const nlohmann::json& j) {
    const auto method = parse_method(j.at("method").get<std::string>());
    if (!method) throw ArgumentError("unknown recalibration method in model document");
    Recalibrator r;
    r.method = *method;
    switch (*method) {
        case Method::histogram:
        case Method::cc_histogram:
        case Method::bootstrap_histogram: {
            HistogramBinningModel m;
            m.edges = j.at("edges").get<std::vector<double>>();
            m.class_conditional = j.at("class_conditional").get<bool>();
            m.tables = j.at("bin_values").get<std::vector<std::vector<double>>>();
            r.model = std::move(m);
            break;
        }
        case Method::isotonic: {
            std::vector<IsotonicModel> models;
            for (const auto& c : j.at("classes"))
                models.push_back({c.at("breakpoints").get<std::vector<double>>(),
                                  c.at("fitted_values").get<std::vector<double>>()});
            r.model = std::move(models);
            break;
        }
        case Method::temperature:
            r.model = TemperatureModel{j.at("temperature").get<double>(), j.at("converged").get<bool>(),
                                       j.at("objective_value").get<double>()};
            r.objective = j.value("objective", std::string("nll"));
            break;
        case Method::platt:
        case Method::vector:
        case Method::matrix: {
            AffineScalingModel m;
            m.kind = *method == Method::platt ? AffineKind::platt
                     : *method == Method::vector ? AffineKind::vector
                                                 : AffineKind::matrix;
            m.n_classes = j.at("n_classes").get<std::size_t>();
            m.weight = j.at("weight").get<std::vector<double>>();
            m.bias = j.at("bias").get<std::vector<double>>();
            r.model = std::move(m);
            break;
        }
        case Method::mlp: {
            MlpScalingModel m;
            for (const auto& l : j.at("layers"))
                m.layers.push_back({l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                                    l.at("weight").get<std::vector<double>>(),
                                    l.at("bias").get<std::vector<double>>()});
            r.model = std::move(m);
            break;
        }
    }
    return r;
}

}  // namespace calib

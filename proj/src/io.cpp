#include "calib/io.hpp"

#include "calib/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace calib {

ParseError::ParseError(const std::string& source, std::size_t row, std::size_t column, const std::string& what)
    : ValidationError(source + ": row " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
                      what),
      row_(row),
      column_(column) {}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_real(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_int(const std::string& s, int& v) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool looks_like_header(const std::vector<std::string>& fields) {
    double v;
    return !fields.empty() && !parse_real(fields.front(), v);
}

}  // namespace

PredictionTable read_prediction_table(std::istream& in, const std::string& source) {
    PredictionTable t;
    std::vector<double> values;
    std::size_t width = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (rows == 0 && !t.had_header && looks_like_header(fields)) {
            t.had_header = true;
            width = fields.size();
            continue;
        }
        if (width != 0 && fields.size() != width)
            throw ParseError(source, line_no, std::min(fields.size(), width) + 1,
                             "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        if (fields.size() < 3)
            throw ParseError(source, line_no, fields.size() + 1, "need at least two columns and a label");
        if (width == 0) width = fields.size();
        for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
            double v;
            if (!parse_real(fields[c], v) || !std::isfinite(v))
                throw ParseError(source, line_no, c + 1, "not a finite number: '" + fields[c] + "'");
            values.push_back(v);
        }
        int label;
        if (!parse_int(fields.back(), label))
            throw ParseError(source, line_no, fields.size(), "label is not an integer: '" + fields.back() + "'");
        t.labels.push_back(label);
        ++rows;
    }
    if (rows == 0) throw ParseError(source, line_no + 1, 1, "no data rows");
    t.values = Matrix(rows, width - 1, std::move(values));
    return t;
}

PredictionTable read_prediction_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return read_prediction_table(in, path);
}

ModelOutputs to_model_outputs(PredictionTable table, bool logits) {
    if (logits) return ModelOutputs::from_logits(LogitSet(std::move(table.values), std::move(table.labels)));
    return ModelOutputs::from_probs(PredictionSet(std::move(table.values), std::move(table.labels)));
}

ModelOutputs load_predictions(const std::string& path, bool logits) {
    return to_model_outputs(read_prediction_table(path), logits);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    return std::string(buf, ptr);
}

void write_prediction_csv(std::ostream& out, const Matrix& values, std::span<const int> labels, bool header) {
    if (header) {
        for (std::size_t c = 0; c < values.cols(); ++c) out << 'p' << c << ',';
        out << "label\n";
    }
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (double v : values.row(i)) out << format_double(v) << ',';
        out << labels[i] << '\n';
    }
}

void write_prediction_csv(std::ostream& out, const PredictionSet& p, bool header) {
    write_prediction_csv(out, p.probs(), p.labels(), header);
}

void write_prediction_csv(const std::string& path, const PredictionSet& p, bool header) {
    std::ostringstream s;
    write_prediction_csv(s, p, header);
    write_text_file(path, s.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << text;
}

GceConfig MetricSettings::to_config() const {
    GceConfig cfg;
    if (named) {
        cfg = named_metric(*named, bins);
    } else {
        cfg.binning = {binning, bins};
        cfg.max_probs = max_probs;
        cfg.class_conditional = class_conditional;
        cfg.threshold = threshold;
        cfg.norm = norm;
    }
    cfg.l2_weighting = l2_weighting;
    validate(cfg);
    return cfg;
}

namespace {

void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ArgumentError(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ArgumentError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_as(const nlohmann::json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ArgumentError("bad value for '" + std::string(key) + "' in " + where);
    }
}

EmptyBinFallback parse_fallback(const std::string& s) {
    if (s == "bin-center") return EmptyBinFallback::bin_center;
    if (s == "nearest-occupied") return EmptyBinFallback::nearest_occupied;
    throw ArgumentError("unknown empty-bin fallback '" + s + "'");
}

}  // namespace

void apply_objective(RecalibrationSpec& spec, const std::string& objective, int bins) {
    if (objective == "nll") {
        spec.objective = TemperatureObjective::nll;
        return;
    }
    spec.objective = TemperatureObjective::gce;
    spec.metric = named_metric(objective, bins);
}

RunConfig parse_run_config(const nlohmann::json& j) {
    RunConfig rc;
    reject_unknown(j, {"metric", "recalibration", "seed", "split"}, "run config");
    if (j.contains("seed")) rc.seed = get_as<std::uint64_t>(j, "seed", "run config");
    if (j.contains("split")) {
        rc.split = get_as<std::string>(j, "split", "run config");
        if (rc.split != "first-half") throw ArgumentError("unsupported split policy '" + rc.split + "'");
    }
    if (j.contains("metric")) {
        const auto& m = j.at("metric");
        const std::string w = "metric";
        reject_unknown(m, {"named", "binning", "max_probs", "class_conditional", "threshold", "norm", "bins",
                           "l2_weighting"},
                       w);
        auto& s = rc.metric;
        if (m.contains("named")) s.named = get_as<std::string>(m, "named", w);
        if (m.contains("binning")) s.binning = parse_bin_kind(get_as<std::string>(m, "binning", w));
        if (m.contains("max_probs")) s.max_probs = get_as<bool>(m, "max_probs", w);
        if (m.contains("class_conditional")) s.class_conditional = get_as<bool>(m, "class_conditional", w);
        if (m.contains("threshold")) s.threshold = get_as<double>(m, "threshold", w);
        if (m.contains("norm")) s.norm = parse_norm(get_as<std::string>(m, "norm", w));
        if (m.contains("bins")) s.bins = get_as<int>(m, "bins", w);
        if (m.contains("l2_weighting")) {
            const auto v = get_as<std::string>(m, "l2_weighting", w);
            if (v == "weighted") s.l2_weighting = L2Weighting::weighted;
            else if (v == "unweighted") s.l2_weighting = L2Weighting::unweighted;
            else throw ArgumentError("unknown l2_weighting '" + v + "'");
        }
        s.to_config();
    }
    if (j.contains("recalibration")) {
        const auto& r = j.at("recalibration");
        const std::string w = "recalibration";
        reject_unknown(r, {"method", "objective", "histogram_bins", "bootstrap_samples", "empty_bin_fallback",
                           "learning_rate", "momentum", "nesterov", "iterations"},
                       w);
        auto& spec = rc.recalibration;
        if (r.contains("method")) {
            const auto name = get_as<std::string>(r, "method", w);
            const auto m = parse_method(name);
            if (!m) throw ArgumentError("unknown recalibration method '" + name + "'");
            spec.method = *m;
        }
        if (r.contains("objective")) rc.objective = get_as<std::string>(r, "objective", w);
        if (r.contains("histogram_bins")) spec.histogram_bins = get_as<int>(r, "histogram_bins", w);
        if (r.contains("bootstrap_samples")) spec.bootstrap_samples = get_as<int>(r, "bootstrap_samples", w);
        if (r.contains("empty_bin_fallback"))
            spec.fallback = parse_fallback(get_as<std::string>(r, "empty_bin_fallback", w));
        if (r.contains("learning_rate")) spec.sgd.learning_rate = get_as<double>(r, "learning_rate", w);
        if (r.contains("momentum")) spec.sgd.momentum = get_as<double>(r, "momentum", w);
        if (r.contains("nesterov")) spec.sgd.nesterov = get_as<bool>(r, "nesterov", w);
        if (r.contains("iterations")) spec.sgd.iterations = get_as<int>(r, "iterations", w);
        validate(spec.sgd);
    }
    rc.recalibration.seed = rc.seed;
    apply_objective(rc.recalibration, rc.objective, rc.metric.bins);
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ArgumentError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace calib

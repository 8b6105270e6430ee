#include "report.hpp"

#include "calib/io.hpp"

#include <cstdio>
#include <sstream>

namespace calib::cli {

std::string short_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

nlohmann::json pools_json(const std::vector<PoolBins>& pools) {
    auto arr = nlohmann::json::array();
    for (const auto& p : pools) {
        nlohmann::json bins = nlohmann::json::array();
        for (const auto& b : p.bins)
            bins.push_back({{"lower", b.lower},
                            {"upper", b.upper},
                            {"count", b.count},
                            {"accuracy", b.accuracy},
                            {"confidence", b.confidence}});
        nlohmann::json entry{{"n_predictions", p.n_predictions}, {"bins", bins}};
        entry["class"] = p.class_index < 0 ? nlohmann::json(nullptr) : nlohmann::json(p.class_index);
        entry["value"] = p.n_predictions == 0 ? nlohmann::json(nullptr) : nlohmann::json(p.value);
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string pools_csv(const std::vector<PoolBins>& pools) {
    std::ostringstream s;
    s << "class,bin,lower,upper,count,accuracy,confidence,gap\n";
    for (const auto& p : pools) {
        for (std::size_t b = 0; b < p.bins.size(); ++b) {
            const auto& x = p.bins[b];
            s << (p.class_index < 0 ? std::string("all") : std::to_string(p.class_index)) << ',' << b << ','
              << format_double(x.lower) << ',' << format_double(x.upper) << ',' << x.count << ','
              << format_double(x.accuracy) << ',' << format_double(x.confidence) << ','
              << format_double(x.count ? std::abs(x.accuracy - x.confidence) : 0.0) << '\n';
        }
    }
    return s.str();
}

std::string sweep_cells_csv(const SweepResult& r) {
    std::ostringstream s;
    s << "metric_index,axes,bins,set,score,rank\n";
    for (const auto& cell : r.cells) {
        const auto axes = csv_field(axis_tuple(index_to_config(cell.metric_index)));
        for (std::size_t i = 0; i < cell.scores.size(); ++i)
            s << cell.metric_index << ',' << axes << ',' << cell.n_bins << ',' << r.set_names[i] << ','
              << format_double(cell.scores[i]) << ',' << format_double(cell.ranks.ranks[i]) << '\n';
    }
    return s.str();
}

std::string sweep_summary_csv(const SweepResult& r) {
    std::ostringstream s;
    s << "metric_index,axes,mean_rank_correlation\n";
    for (int m = 0; m < kMetricCount; ++m)
        s << m << ',' << csv_field(axis_tuple(index_to_config(m))) << ','
          << format_double(r.metric_correlation[m]) << '\n';
    return s.str();
}

nlohmann::json sweep_metadata(const SweepResult& r, std::uint64_t seed, const std::string& source) {
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& name : sweep_group_names()) groups[name] = r.group_mean.at(name);
    nlohmann::json configs = nlohmann::json::array();
    for (int m = 0; m < kMetricCount; ++m) configs.push_back(axis_tuple(index_to_config(m)));
    return {{"seed", seed},
            {"source", source},
            {"bins", r.bins},
            {"sets", r.set_names},
            {"rank_correlation", std::string(to_string(r.variant))},
            {"configs", configs},
            {"metric_correlation", r.metric_correlation},
            {"group_mean", groups}};
}

std::string rank_table_csv(const RankTable& t) {
    std::ostringstream s;
    s << "position";
    for (std::size_t c = 0; c < t.configs.size(); ++c)
        s << ',' << (t.metric_indices[c] >= 0 ? std::to_string(t.metric_indices[c]) : csv_field(axis_tuple(t.configs[c])));
    s << '\n';
    for (std::size_t pos = 0; pos < t.methods.size(); ++pos) {
        s << pos + 1;
        for (std::size_t c = 0; c < t.configs.size(); ++c) s << ',' << t.methods[t.order[c][pos]];
        s << '\n';
    }
    return s.str();
}

std::string rank_scores_csv(const RankTable& t) {
    std::ostringstream s;
    s << "metric_index,axes,bins,method,score\n";
    for (std::size_t c = 0; c < t.configs.size(); ++c)
        for (std::size_t m = 0; m < t.methods.size(); ++m)
            s << t.metric_indices[c] << ',' << csv_field(axis_tuple(t.configs[c])) << ','
              << t.configs[c].binning.n_bins << ',' << t.methods[m] << ',' << format_double(t.scores[c][m]) << '\n';
    return s.str();
}

std::string noise_csv(const std::vector<NoiseLevelResult>& rows) {
    std::ostringstream s;
    s << "noise,accuracy,mean_max_confidence,ece,sce,ace,omitted_fraction\n";
    for (const auto& r : rows)
        s << format_double(r.noise) << ',' << format_double(r.accuracy) << ','
          << format_double(r.mean_max_confidence) << ',' << format_double(r.ece) << ',' << format_double(r.sce)
          << ',' << format_double(r.ace) << ',' << format_double(r.omitted_fraction) << '\n';
    return s.str();
}

}  // namespace calib::cli

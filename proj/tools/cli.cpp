#include "cli.hpp"

#include "report.hpp"

#include "calib/analysis.hpp"
#include "calib/error.hpp"
#include "calib/io.hpp"
#include "calib/recalibrator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace calib::cli {

namespace {

// Options are bound to these structs, so they must outlive parsing.

struct MetricFlags {
    std::string named;
    std::string binning = "even";
    bool max_probs = true;
    bool class_conditional = false;
    double threshold = 0.0;
    std::string norm = "l1";
    bool l2_unweighted = false;
    int bins = kDefaultBins;

    CLI::Option* named_opt = nullptr;
    CLI::Option* binning_opt = nullptr;
    CLI::Option* max_probs_opt = nullptr;
    CLI::Option* cc_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
    CLI::Option* norm_opt = nullptr;
    CLI::Option* l2_opt = nullptr;
    CLI::Option* bins_opt = nullptr;

    void add_to(CLI::App& app) {
        named_opt = app.add_option("--named", named, "Named metric: ECE, CCECE, SCE, ACE, TACE, RMSCE "
                                                     "(overrides the axis flags)");
        binning_opt = app.add_option("--binning", binning, "Binning scheme: even or adaptive")
                          ->capture_default_str()
                          ->check(CLI::IsMember({"even", "adaptive"}));
        max_probs_opt = app.add_flag("--max-probs,!--no-max-probs", max_probs,
                                     "Score only the top probability of each row (default) or every class");
        cc_opt = app.add_flag("--class-conditional", class_conditional, "Average the score over classes");
        threshold_opt = app.add_option("--threshold", threshold,
                                       "Keep only probabilities strictly above this value (0 keeps all)")
                            ->capture_default_str();
        norm_opt = app.add_option("--norm", norm, "Aggregation norm: l1 or l2")
                       ->capture_default_str()
                       ->check(CLI::IsMember({"l1", "l2"}));
        l2_opt = app.add_flag("--l2-unweighted", l2_unweighted,
                              "L2 over non-empty bins without mass weighting");
        bins_opt = app.add_option("--bins", bins, "Number of bins")->capture_default_str();
    }

    // Applies only the flags given on the command line over `base`.
    MetricSettings resolve(MetricSettings base) const {
        if (named_opt->count()) base.named = named;
        if (binning_opt->count()) base.binning = parse_bin_kind(binning);
        if (max_probs_opt->count()) base.max_probs = max_probs;
        if (cc_opt->count()) base.class_conditional = class_conditional;
        if (threshold_opt->count()) base.threshold = threshold;
        if (norm_opt->count()) base.norm = parse_norm(norm);
        if (l2_opt->count()) base.l2_weighting = l2_unweighted ? L2Weighting::unweighted : L2Weighting::weighted;
        if (bins_opt->count()) base.bins = bins;
        return base;
    }
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::optional<RunConfig> maybe_config(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return load_run_config(path);
}

// ---------------------------------------------------------------------------
// measure

struct MeasureArgs {
    std::string input;
    bool logits = false;
    bool all32 = false;
    std::string format = "text";
    std::string output = "-";
    std::string config;
    MetricFlags metric;
};

void cmd_measure(const MeasureArgs& a, std::ostream& out) {
    const auto cfg_file = maybe_config(a.config);
    const auto settings = a.metric.resolve(cfg_file ? cfg_file->metric : MetricSettings{});
    const auto data = load_predictions(a.input, a.logits);
    const auto& p = data.probs;
    std::ostringstream s;

    if (a.all32) {
        nlohmann::json rows = nlohmann::json::array();
        if (a.format == "csv") s << "index,axes,bins,score\n";
        for (int i = 0; i < kMetricCount; ++i) {
            GceConfig cfg = index_to_config(i, settings.bins);
            cfg.l2_weighting = settings.l2_weighting;
            std::optional<double> v;
            try {
                v = gce(p, cfg).value;
            } catch (const EmptyMeasurementError&) {
            }
            const auto axes = axis_tuple(cfg);
            if (a.format == "csv") {
                s << i << ',' << csv_field(axes) << ',' << settings.bins << ',' << (v ? format_double(*v) : "")
                  << '\n';
            } else if (a.format == "json") {
                rows.push_back({{"index", i}, {"axes", axes}, {"bins", settings.bins},
                                {"score", v ? nlohmann::json(*v) : nlohmann::json(nullptr)}});
            } else {
                s << (i < 10 ? " " : "") << i << "  " << axes;
                s << std::string(axes.size() < 42 ? 42 - axes.size() : 1, ' ') << (v ? short_number(*v) : "empty")
                  << '\n';
            }
        }
        if (a.format == "json") s << json_text({{"n_points", p.n_points()}, {"n_classes", p.n_classes()},
                                                {"metrics", rows}});
        emit(out, a.output, s.str());
        return;
    }

    const GceConfig cfg = settings.to_config();
    const auto score = gce(p, cfg);
    const auto pools = gce_pools(p, cfg);
    int index = -1;
    try {
        index = metric_index(cfg);
    } catch (const ArgumentError&) {
    }
    if (a.format == "json") {
        nlohmann::json j{{"axes", axis_tuple(cfg)},
                         {"bins", cfg.binning.n_bins},
                         {"index", index < 0 ? nlohmann::json(nullptr) : nlohmann::json(index)},
                         {"l2_weighting", cfg.l2_weighting == L2Weighting::weighted ? "weighted" : "unweighted"},
                         {"score", score.value},
                         {"pools", pools_json(pools)}};
        if (settings.named) j["named"] = *settings.named;
        s << json_text(j);
    } else if (a.format == "csv") {
        s << "score," << format_double(score.value) << '\n' << pools_csv(pools);
    } else {
        s << "metric " << (settings.named ? *settings.named + " " : "") << axis_tuple(cfg)
          << " bins=" << cfg.binning.n_bins;
        if (index >= 0) s << " index=" << index;
        s << '\n' << "score " << short_number(score.value) << "\n\n";
        s << "class  bin  range              count  accuracy    confidence\n";
        for (const auto& pool : pools)
            for (const auto& b : pool.bins) {
                if (b.count == 0) continue;
                char line[160];
                std::snprintf(line, sizeof line, "%-6s %-4zu [%.4f, %.4f]  %-6zu %-11.6f %.6f\n",
                              pool.class_index < 0 ? "all" : std::to_string(pool.class_index).c_str(),
                              static_cast<std::size_t>(&b - pool.bins.data()), b.lower, b.upper, b.count,
                              b.accuracy, b.confidence);
                s << line;
            }
    }
    emit(out, a.output, s.str());
}

// ---------------------------------------------------------------------------
// recalibrate

struct RecalibrateArgs {
    std::string input;
    bool logits = false;
    std::string method;
    std::string objective = "nll";
    std::uint64_t seed = 0;
    std::string report_metric = "ECE";
    int bins = kDefaultBins;
    int histogram_bins = 20;
    int bootstrap_samples = 100;
    std::string fallback = "bin-center";
    int iterations = 1000;
    double learning_rate = 0.001;
    double momentum = 0.9;
    std::string output;
    std::string model;
    std::string format = "text";
    std::string config;

    CLI::Option* method_opt = nullptr;
    CLI::Option* objective_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* bins_opt = nullptr;
    CLI::Option* histogram_bins_opt = nullptr;
    CLI::Option* bootstrap_opt = nullptr;
    CLI::Option* fallback_opt = nullptr;
    CLI::Option* iterations_opt = nullptr;
    CLI::Option* lr_opt = nullptr;
    CLI::Option* momentum_opt = nullptr;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void cmd_recalibrate(const RecalibrateArgs& a, std::ostream& out) {
    RunConfig rc;
    if (!a.config.empty()) rc = load_run_config(a.config);
    RecalibrationSpec spec = rc.recalibration;
    std::string objective = rc.objective;
    int bins = rc.metric.bins;

    if (a.method_opt->count()) {
        const auto m = parse_method(a.method);
        if (!m) {
            std::string names;
            for (const auto& n : method_names()) names += (names.empty() ? "" : ", ") + n;
            throw UsageError("unknown method '" + a.method + "' (expected one of: " + names + ")");
        }
        spec.method = *m;
    } else if (a.config.empty()) {
        throw UsageError("--method is required");
    }
    if (a.objective_opt->count()) objective = a.objective;
    if (a.bins_opt->count()) bins = a.bins;
    spec.seed = a.seed_opt->count() ? a.seed : rc.seed;
    if (a.histogram_bins_opt->count()) spec.histogram_bins = a.histogram_bins;
    if (a.bootstrap_opt->count()) spec.bootstrap_samples = a.bootstrap_samples;
    if (a.fallback_opt->count())
        spec.fallback = a.fallback == "nearest-occupied" ? EmptyBinFallback::nearest_occupied
                                                         : EmptyBinFallback::bin_center;
    if (a.iterations_opt->count()) spec.sgd.iterations = a.iterations;
    if (a.lr_opt->count()) spec.sgd.learning_rate = a.learning_rate;
    if (a.momentum_opt->count()) spec.sgd.momentum = a.momentum;
    apply_objective(spec, objective, bins);

    const auto data = load_predictions(a.input, a.logits);
    const auto [fit, eval] = split_validation(data);
    const auto r = fit_recalibrator(spec, fit);
    const auto after = r.apply(eval);

    const GceConfig report = named_metric(a.report_metric, bins);
    const double before_score = gce(eval.probs, report).value;
    const double after_score = gce(after, report).value;
    const double before_nll = negative_log_likelihood(eval.probs);
    const double after_nll = negative_log_likelihood(after);

    if (!a.output.empty()) write_prediction_csv(a.output, after);
    const auto model_json = to_json(r);
    if (!a.model.empty()) emit(out, a.model, json_text(model_json));

    if (a.format == "json") {
        nlohmann::json j{{"method", std::string(to_string(r.method))},
                         {"seed", spec.seed},
                         {"fit_points", fit.n_points()},
                         {"eval_points", eval.n_points()},
                         {"metric", a.report_metric},
                         {"bins", bins},
                         {"before", {{"score", before_score}, {"nll", before_nll}}},
                         {"after", {{"score", after_score}, {"nll", after_nll}}}};
        if (const auto* t = std::get_if<TemperatureModel>(&r.model)) j["temperature"] = t->temperature;
        if (!r.objective.empty()) j["objective"] = r.objective;
        out << json_text(j);
        return;
    }
    out << "method " << to_string(r.method) << "  fit " << fit.n_points() << "  eval " << eval.n_points() << '\n';
    if (const auto* t = std::get_if<TemperatureModel>(&r.model)) {
        out << "objective " << r.objective << '\n';
        out << "temperature " << short_number(t->temperature) << (t->converged ? "" : " (not converged)") << '\n';
    }
    out << a.report_metric << " before " << short_number(before_score) << "  after " << short_number(after_score)
        << '\n';
    out << "NLL before " << short_number(before_nll) << "  after " << short_number(after_nll) << '\n';
}

// ---------------------------------------------------------------------------
// sweep-bins and rank-methods

struct SuiteArgs {
    std::uint64_t seed = 0;
    std::string logits;
    std::size_t n_points = 1000;
    std::size_t n_classes = 10;
};

void add_suite_flags(CLI::App& app, SuiteArgs& a) {
    app.add_option("--seed", a.seed, "Seed for the fixture and stochastic recalibrators")->capture_default_str();
    app.add_option("--logits", a.logits,
                   "Validation logits CSV; the methods are fitted on its first half and scored on the rest "
                   "(default: synthetic classifier fixture)");
    app.add_option("--n-points", a.n_points, "Synthetic fixture size")->capture_default_str();
    app.add_option("--classes", a.n_classes, "Synthetic fixture classes")->capture_default_str();
}

std::vector<NamedPredictions> build_suite(const SuiteArgs& a, std::string& source) {
    RecalibrationFixtureOptions opt;
    opt.n_points = a.n_points;
    opt.n_classes = a.n_classes;
    if (!a.logits.empty()) {
        const auto data = load_predictions(a.logits, true);
        source = a.logits;
        opt.n_classes = data.logits->n_classes();
        return recalibration_suite(*data.logits, a.seed, opt);
    }
    source = "synthetic-classifier";
    return recalibration_suite(synthetic_classifier_logits(a.seed, opt), a.seed, opt);
}

struct SweepArgs {
    SuiteArgs suite;
    std::vector<int> bins = kDefaultSweepBins;
    std::string variant = "spearman";
    std::string output = "-";
    std::string cells;
    std::string metadata;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
    std::string source;
    const auto sets = build_suite(a.suite, source);
    const auto r = bin_sensitivity_sweep(sets, a.bins, parse_rank_correlation(a.variant));
    emit(out, a.output, sweep_summary_csv(r));
    if (!a.cells.empty()) emit(out, a.cells, sweep_cells_csv(r));
    if (!a.metadata.empty()) emit(out, a.metadata, json_text(sweep_metadata(r, a.suite.seed, source)));
    if (a.output != "-") {
        for (const auto& g : sweep_group_names()) out << g << ' ' << short_number(r.group_mean.at(g)) << '\n';
    }
}

struct RankArgs {
    SuiteArgs suite;
    int bins = kDefaultBins;
    std::string output = "-";
    std::string scores;
    std::string metadata;
};

void cmd_rank(const RankArgs& a, std::ostream& out) {
    std::string source;
    const auto sets = build_suite(a.suite, source);
    const auto configs = grid_configs(a.bins);
    const auto t = rank_methods(sets, configs);
    emit(out, a.output, rank_table_csv(t));
    if (!a.scores.empty()) emit(out, a.scores, rank_scores_csv(t));
    const auto disagreements = norm_disagreements(t);
    if (!a.metadata.empty()) {
        nlohmann::json d = nlohmann::json::array();
        for (const auto& x : disagreements)
            d.push_back({{"l1_index", t.metric_indices[x.l1_column]},
                         {"l2_index", t.metric_indices[x.l2_column]},
                         {"l1_top", x.l1_top},
                         {"l2_top", x.l2_top}});
        nlohmann::json cfgs = nlohmann::json::array();
        for (const auto& c : configs) cfgs.push_back(axis_tuple(c));
        emit(out, a.metadata,
             json_text({{"seed", a.suite.seed}, {"source", source}, {"bins", a.bins}, {"methods", t.methods},
                        {"configs", cfgs}, {"norm_disagreements", d}}));
    }
    if (a.output != "-") {
        out << "top method per metric index:";
        for (std::size_t c = 0; c < t.configs.size(); ++c) out << ' ' << c << '=' << t.methods[t.order[c].front()];
        out << '\n' << disagreements.size() << " L1/L2 pairs disagree on the top method\n";
    }
}

// ---------------------------------------------------------------------------
// label-noise, reliability, pathology

struct NoiseArgs {
    std::uint64_t seed = 0;
    int levels = 40;
    double max_level = 0.05;
    std::string output = "-";
    std::string metadata;
};

void cmd_noise(const NoiseArgs& a, std::ostream& out) {
    const auto levels = default_noise_levels(a.levels, a.max_level);
    const NoiseOptions opt{};
    const auto rows = label_noise_experiment(a.seed, levels, opt);
    emit(out, a.output, noise_csv(rows));
    if (!a.metadata.empty()) {
        std::vector<double> omitted;
        for (const auto& r : rows) omitted.push_back(r.omitted_fraction);
        nlohmann::json j{{"seed", a.seed},
                         {"levels", levels},
                         {"classes", opt.n_classes},
                         {"dim", opt.dim},
                         {"train", opt.n_train},
                         {"test", opt.n_test},
                         {"gd_iterations", opt.gd_iterations},
                         {"learning_rate", opt.learning_rate},
                         {"omitted_threshold", opt.omitted_threshold}};
        if (rows.size() >= 2)
            j["omitted_rank_correlation"] = rank_correlation(rank_scores(levels), rank_scores(omitted));
        emit(out, a.metadata, json_text(j));
    }
}

struct ReliabilityArgs {
    std::string input;
    bool logits = false;
    std::string format = "csv";
    std::string output = "-";
    MetricFlags metric;
};

void cmd_reliability(const ReliabilityArgs& a, std::ostream& out) {
    const GceConfig cfg = a.metric.resolve({}).to_config();
    const auto data = load_predictions(a.input, a.logits);
    const auto pools = reliability_data(data.probs, cfg);
    if (a.format == "json")
        emit(out, a.output, json_text({{"axes", axis_tuple(cfg)}, {"bins", cfg.binning.n_bins},
                                       {"pools", pools_json(pools)}}));
    else
        emit(out, a.output, pools_csv(pools));
}

struct PathologyArgs {
    std::size_t n_wrong = 450;
    double p_wrong = 0.52;
    std::size_t n_right = 550;
    double p_right = 0.58;
    bool header = false;
    std::string output = "-";
};

void cmd_pathology(const PathologyArgs& a, std::ostream& out) {
    const auto p = make_pathology(a.n_wrong, a.p_wrong, a.n_right, a.p_right);
    std::ostringstream s;
    write_prediction_csv(s, p, a.header);
    emit(out, a.output, s.str());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Calibration error measurement and post-hoc recalibration"};
    app.name("calib");
    app.require_subcommand(1);
    app.fallthrough(false);

    std::function<void()> action;

    MeasureArgs measure;
    auto* m = app.add_subcommand("measure", "Score a prediction CSV under one calibration metric or all 32");
    m->add_option("file", measure.input, "Prediction CSV: K columns then an integer label")->required();
    m->add_flag("--logits", measure.logits, "Columns are logits (softmax is applied)");
    m->add_flag("--all-32", measure.all32, "Score every grid metric in index order (uses --bins only)");
    m->add_option("--format", measure.format, "text, csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "csv", "json"}));
    m->add_option("--output,-o", measure.output, "Report path, - for stdout")->capture_default_str();
    m->add_option("--config", measure.config, "JSON run config supplying metric defaults");
    measure.metric.add_to(*m);
    m->callback([&] { action = [&] { cmd_measure(measure, out); }; });

    RecalibrateArgs recal;
    auto* r = app.add_subcommand("recalibrate", "Fit a recalibrator on the first half and apply it to the second");
    r->add_option("file", recal.input, "Prediction CSV (probabilities, or logits with --logits)")->required();
    r->add_flag("--logits", recal.logits, "Columns are logits; required by the scaling methods");
    recal.method_opt = r->add_option("--method", recal.method,
                                     "histogram, cc-histogram, bootstrap-histogram, isotonic, platt, "
                                     "temperature, vector, matrix or mlp");
    recal.objective_opt = r->add_option("--objective", recal.objective,
                                        "Temperature objective: nll or a named metric")
                              ->capture_default_str();
    recal.seed_opt = r->add_option("--seed", recal.seed, "Seed for bootstrap and MLP initialization")
                         ->capture_default_str();
    r->add_option("--metric", recal.report_metric, "Named metric reported before and after")->capture_default_str();
    recal.bins_opt = r->add_option("--bins", recal.bins, "Bins of the reported and objective metrics")
                         ->capture_default_str();
    recal.histogram_bins_opt =
        r->add_option("--histogram-bins", recal.histogram_bins, "Bins of histogram binning")->capture_default_str();
    recal.bootstrap_opt = r->add_option("--bootstrap-samples", recal.bootstrap_samples, "Bootstrap resamples")
                              ->capture_default_str();
    recal.fallback_opt = r->add_option("--empty-bin-fallback", recal.fallback,
                                       "Value of empty histogram bins: bin-center or nearest-occupied")
                             ->capture_default_str()
                             ->check(CLI::IsMember({"bin-center", "nearest-occupied"}));
    recal.iterations_opt =
        r->add_option("--iterations", recal.iterations, "SGD iterations (scaling methods)")->capture_default_str();
    recal.lr_opt = r->add_option("--learning-rate", recal.learning_rate, "SGD learning rate")->capture_default_str();
    recal.momentum_opt = r->add_option("--momentum", recal.momentum, "Nesterov momentum")->capture_default_str();
    r->add_option("--output,-o", recal.output, "Write recalibrated second-half predictions to this CSV");
    r->add_option("--model", recal.model, "Write the fitted model as JSON");
    r->add_option("--format", recal.format, "Report format: text or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "json"}));
    r->add_option("--config", recal.config, "JSON run config; flags override it");
    r->callback([&] { action = [&] { cmd_recalibrate(recal, out); }; });

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep-bins", "Rank stability of recalibrators across bin counts, per metric");
    add_suite_flags(*sw, sweep.suite);
    sw->add_option("--bins", sweep.bins, "Bin counts to compare")->delimiter(',')->capture_default_str();
    sw->add_option("--rank-correlation", sweep.variant, "spearman or footrule")
        ->capture_default_str()
        ->check(CLI::IsMember({"spearman", "footrule"}));
    sw->add_option("--output,-o", sweep.output, "Per-metric mean correlation CSV, - for stdout")
        ->capture_default_str();
    sw->add_option("--cells", sweep.cells, "Per-cell scores and ranks CSV");
    sw->add_option("--metadata", sweep.metadata, "Run metadata JSON (bins, seed, group means)");
    sw->callback([&] { action = [&] { cmd_sweep(sweep, out); }; });

    RankArgs rank;
    auto* rk = app.add_subcommand("rank-methods", "Order the recalibrators under each of the 32 metrics");
    add_suite_flags(*rk, rank.suite);
    rk->add_option("--bins", rank.bins, "Bin count of every metric")->capture_default_str();
    rk->add_option("--output,-o", rank.output, "Rank table CSV (positions x metric index)")->capture_default_str();
    rk->add_option("--scores", rank.scores, "Raw scores CSV");
    rk->add_option("--metadata", rank.metadata, "Run metadata JSON, including L1/L2 disagreements");
    rk->callback([&] { action = [&] { cmd_rank(rank, out); }; });

    NoiseArgs noise;
    auto* nz = app.add_subcommand("label-noise", "Retrain a blob classifier under growing label noise");
    nz->add_option("--seed", noise.seed, "Dataset and corruption seed")->capture_default_str();
    nz->add_option("--levels", noise.levels, "Number of noise levels")->capture_default_str();
    nz->add_option("--max-level", noise.max_level, "Largest noise fraction")->capture_default_str();
    nz->add_option("--output,-o", noise.output, "Per-level CSV, - for stdout")->capture_default_str();
    nz->add_option("--metadata", noise.metadata, "Run metadata JSON");
    nz->callback([&] { action = [&] { cmd_noise(noise, out); }; });

    ReliabilityArgs rel;
    auto* rl = app.add_subcommand("reliability", "Export the per-bin statistics behind a metric");
    rl->add_option("file", rel.input, "Prediction CSV")->required();
    rl->add_flag("--logits", rel.logits, "Columns are logits");
    rl->add_option("--format", rel.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    rl->add_option("--output,-o", rel.output, "Output path, - for stdout")->capture_default_str();
    rel.metric.add_to(*rl);
    rl->callback([&] { action = [&] { cmd_reliability(rel, out); }; });

    PathologyArgs path;
    auto* pa = app.add_subcommand("pathology", "Write the two-cluster cancellation fixture as CSV");
    pa->add_option("--n-wrong", path.n_wrong, "Incorrect predictions")->capture_default_str();
    pa->add_option("--p-wrong", path.p_wrong, "Their confidence")->capture_default_str();
    pa->add_option("--n-right", path.n_right, "Correct predictions")->capture_default_str();
    pa->add_option("--p-right", path.p_right, "Their confidence")->capture_default_str();
    pa->add_flag("--header", path.header, "Write a p0,p1,label header row");
    pa->add_option("--output,-o", path.output, "Output path, - for stdout")->capture_default_str();
    pa->callback([&] { action = [&] { cmd_pathology(path, out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
}

}  // namespace calib::cli

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include "calib/analysis.hpp"
#include "calib/io.hpp"
#include "calib/metrics.hpp"
#include "calib/recalibration.hpp"
#include "oracle/brute_force_gce.hpp"
#include "oracle/isotonic_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace calib;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body, double limit_seconds = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0 && secs >= limit_seconds) {
        o.pass = false;
        o.detail += "; exceeded " + std::to_string(limit_seconds) + " s";
    }
    if (!o.pass) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " [" << timing << "] "
              << o.detail << std::endl;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome pathology() {
    const auto p = make_pathology(450, 0.52, 550, 0.58);
    const double coarse = gce(p, named_metric("ECE", 10)).value;
    const double fine = gce(p, named_metric("ECE", 50)).value;
    const double sce = gce(p, named_metric("SCE", 50)).value;
    const double ace = gce(p, named_metric("ACE", 50)).value;
    const bool ok = std::abs(coarse - 0.003) <= 1e-9 && fine >= 0.2 && sce >= 0.2 && ace >= 0.2;
    return {ok, "ECE(10)=" + fmt(coarse) + " ECE(50)=" + fmt(fine) + " SCE(50)=" + fmt(sce) + " ACE(50)=" + fmt(ace)};
}

Outcome index_fidelity() {
    const char* rows[kMetricCount] = {
        "('even', True, True, 0.0, 'l1')",       "('even', True, True, 0.0, 'l2')",
        "('even', True, True, 0.01, 'l1')",      "('even', True, True, 0.01, 'l2')",
        "('even', True, False, 0.0, 'l1')",      "('even', True, False, 0.0, 'l2')",
        "('even', True, False, 0.01, 'l1')",     "('even', True, False, 0.01, 'l2')",
        "('even', False, True, 0.0, 'l1')",      "('even', False, True, 0.0, 'l2')",
        "('even', False, True, 0.01, 'l1')",     "('even', False, True, 0.01, 'l2')",
        "('even', False, False, 0.0, 'l1')",     "('even', False, False, 0.0, 'l2')",
        "('even', False, False, 0.01, 'l1')",    "('even', False, False, 0.01, 'l2')",
        "('adaptive', True, True, 0.0, 'l1')",   "('adaptive', True, True, 0.0, 'l2')",
        "('adaptive', True, True, 0.01, 'l1')",  "('adaptive', True, True, 0.01, 'l2')",
        "('adaptive', True, False, 0.0, 'l1')",  "('adaptive', True, False, 0.0, 'l2')",
        "('adaptive', True, False, 0.01, 'l1')", "('adaptive', True, False, 0.01, 'l2')",
        "('adaptive', False, True, 0.0, 'l1')",  "('adaptive', False, True, 0.0, 'l2')",
        "('adaptive', False, True, 0.01, 'l1')", "('adaptive', False, True, 0.01, 'l2')",
        "('adaptive', False, False, 0.0, 'l1')", "('adaptive', False, False, 0.0, 'l2')",
        "('adaptive', False, False, 0.01, 'l1')", "('adaptive', False, False, 0.01, 'l2')",
    };
    int mismatches = 0;
    for (int i = 0; i < kMetricCount; ++i)
        if (axis_tuple(index_to_config(i)) != rows[i] || metric_index(index_to_config(i)) != i) ++mismatches;
    const std::pair<const char*, int> names[] = {{"ECE", 4}, {"CCECE", 0}, {"SCE", 8}, {"ACE", 24}, {"RMSCE", 21}};
    for (auto [name, idx] : names)
        if (metric_index(named_metric(name)) != idx) ++mismatches;
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over 32 rows and 5 names"};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(20240601);
    std::gamma_distribution<double> g(0.6, 1.0);
    double worst = 0.0;
    int mismatches = 0, compared = 0;
    for (int set = 0; set < 1000; ++set) {
        const std::size_t n = 1 + rng() % 50, k = 2 + rng() % 4;
        const int bins = 1 + static_cast<int>(rng() % 5);
        Matrix m(n, k);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (double& v : m.row(i)) v = g(rng) + 1e-12;
            y[i] = static_cast<int>(rng() % k);
        }
        const auto p = PredictionSet::renormalized(std::move(m), std::move(y));
        const std::vector<double> flat(p.probs().data().begin(), p.probs().data().end());
        const std::vector<int> labels(p.labels().begin(), p.labels().end());
        for (int i = 0; i < kMetricCount; ++i) {
            const auto cfg = index_to_config(i, bins);
            const double want =
                oracle::score(flat, labels, k,
                              {cfg.binning.kind == BinKind::adaptive, bins, cfg.max_probs, cfg.class_conditional,
                               cfg.threshold, cfg.norm == Norm::l2});
            ++compared;
            if (want < 0) {
                try {
                    gce(p, cfg);
                    ++mismatches;
                } catch (const EmptyMeasurementError&) {
                }
                continue;
            }
            const double diff = std::abs(gce(p, cfg).value - want);
            worst = std::max(worst, diff);
            if (!(diff <= 1e-10)) ++mismatches;
        }
    }
    return {mismatches == 0,
            std::to_string(compared) + " comparisons, " + std::to_string(mismatches) + " mismatches, max |diff| " +
                fmt(worst)};
}

Outcome pava_exhaustive() {
    double worst = 0.0;
    long instances = 0;
    bool monotone = true;
    for (int len = 1; len <= 6; ++len) {
        std::vector<int> digits(len, 0);
        while (true) {
            std::vector<double> y(len);
            for (int i = 0; i < len; ++i) y[i] = digits[i] / 10.0;
            const auto fit = pava(y);
            const auto want = oracle::isotonic_minmax(y);
            for (int i = 0; i < len; ++i) {
                worst = std::max(worst, std::abs(fit[i] - want[i]));
                if (i > 0 && fit[i] < fit[i - 1]) monotone = false;
            }
            ++instances;
            int pos = 0;
            while (pos < len && ++digits[pos] == 11) digits[pos++] = 0;
            if (pos == len) break;
        }
    }
    return {worst <= 1e-9 && monotone,
            std::to_string(instances) + " instances, max |diff| " + fmt(worst)};
}

LogitSet random_logits(std::uint64_t seed, std::size_t n, std::size_t k) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.5);
    Matrix z(n, k);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : z.row(i)) v = d(rng);
        y[i] = static_cast<int>(rng() % k);
    }
    return LogitSet(std::move(z), std::move(y));
}

template <class Model, class Nll>
double grad_error(Model model, const LogitSet& data, Nll nll) {
    const auto f = [&](std::span<const double> x, std::span<double> g) {
        Model m = model;
        m.unpack(x);
        return nll(m, data, g);
    };
    return grad_check(f, model.pack(), 1e-5);
}

Outcome gradient_checks() {
    double worst_vec = 0, worst_mat = 0, worst_mlp = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t k = 2 + seed % 4;
        const auto z = random_logits(500 + seed, 10, k);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> d(0.0, 0.3);
        auto jitter = [&](auto m) {
            auto p = m.pack();
            for (double& v : p) v += d(rng);
            m.unpack(p);
            return m;
        };
        worst_vec = std::max(worst_vec, grad_error(jitter(AffineScalingModel::identity(AffineKind::vector, k)), z, affine_nll));
        worst_mat = std::max(worst_mat, grad_error(jitter(AffineScalingModel::identity(AffineKind::matrix, k)), z, affine_nll));
        for (double scale : {0.01, 0.1})
            worst_mlp = std::max(worst_mlp, grad_error(MlpScalingModel::initialize(k, seed, scale), z, mlp_nll));
    }
    return {worst_vec < 1e-4 && worst_mat < 1e-4 && worst_mlp < 1e-3,
            "max rel err vector " + fmt(worst_vec) + ", matrix " + fmt(worst_mat) + ", mlp " + fmt(worst_mlp)};
}

Outcome temperature_recovery() {
    const auto z = synthetic_calibrated_logits(6, 10000, 5, 2.0, 2.0);
    const double t_nll = fit_temperature(z).temperature;

    TemperatureOptions gce_opt{TemperatureObjective::gce, named_metric("ECE"), {}};
    const double t_gce = fit_temperature(z, gce_opt).temperature;
    const int steps = 2000;
    const double lo = std::log(0.05), hi = std::log(20.0), step = (hi - lo) / steps;
    double best = 1e300, best_lt = lo;
    for (int i = 0; i <= steps; ++i) {
        const double lt = lo + step * i;
        const double v = temperature_objective(z, std::exp(lt), gce_opt);
        if (v < best) best = v, best_lt = lt;
    }
    const double grid_gap = std::abs(std::log(t_gce) - best_lt);

    const auto asym = asymmetric_noise_logits(6, 10000);
    const double a_nll = fit_temperature(asym).temperature;
    const double a_gce = fit_temperature(asym, gce_opt).temperature;

    const bool ok = t_nll >= 1.9 && t_nll <= 2.1 && grid_gap <= step + 1e-12 && std::abs(a_nll - a_gce) > 0.05;
    return {ok, "T_nll=" + fmt(t_nll) + " T_ece=" + fmt(t_gce) + " grid argmin T=" + fmt(std::exp(best_lt)) +
                    " (|dlogT|=" + fmt(grid_gap) + ", step " + fmt(step) + "); asymmetric T_nll=" + fmt(a_nll) +
                    " T_ece=" + fmt(a_gce)};
}

Outcome bin_sensitivity() {
    int agree = 0;
    double adaptive_sum = 0, even_sum = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto sets = recalibration_suite(synthetic_classifier_logits(seed), seed);
        const auto r = bin_sensitivity_sweep(sets);
        const double a = r.group_mean.at("binning=adaptive"), e = r.group_mean.at("binning=even");
        adaptive_sum += a;
        even_sum += e;
        if (a >= e) ++agree;
    }
    return {agree >= 14, std::to_string(agree) + "/20 seeds adaptive >= even; mean adaptive " +
                             fmt(adaptive_sum / 20) + ", even " + fmt(even_sum / 20)};
}

Outcome class_conditionality() {
    const auto p = heterogeneous_class_fixture(0, 20000);
    const auto [fit, eval] = split_validation(p);
    const auto out = apply_histogram_binning(fit_histogram_binning(fit), eval);
    const double ece = gce(out, named_metric("ECE")).value;
    const double cc = gce(out, named_metric("CCECE")).value;
    return {ece < cc, "histogram binning ECE " + fmt(ece) + " < class-conditional ECE " + fmt(cc)};
}

Outcome label_noise() {
    const auto levels = default_noise_levels();
    double worst = 1.0;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto rows = label_noise_experiment(seed, levels);
        std::vector<double> omitted;
        for (const auto& r : rows) omitted.push_back(r.omitted_fraction);
        const double rho = rank_correlation(rank_scores(levels), rank_scores(omitted));
        worst = std::min(worst, rho);
        per_seed += (per_seed.empty() ? "" : " ") + fmt(rho);
    }
    return {worst > 0.8, "spearman per seed: " + per_seed};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("calib_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string tool = CALIB_CLI_PATH;

    // Run 0 creates shared inputs; each command then runs into run1/ and run2/.
    fs::create_directories(root / "in");
    {
        std::ofstream f(root / "in" / "logits.csv");
        const auto z = synthetic_classifier_logits(3, {.n_points = 600, .n_classes = 5});
        write_prediction_csv(f, z.logits(), z.labels());
    }
    const std::string in = (root / "in").string();
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"pathology", "pathology -o {d}/pathology.csv"},
        {"measure", "measure " + in + "/logits.csv --logits --all-32 --format csv -o {d}/measure.csv"},
        {"measure-json", "measure " + in + "/logits.csv --logits --named TACE --format json -o {d}/measure.json"},
        {"reliability", "reliability " + in + "/logits.csv --logits --named ACE -o {d}/reliability.csv"},
        {"recalibrate-temperature", "recalibrate " + in + "/logits.csv --logits --method temperature --objective ECE "
                                    "--seed 5 -o {d}/t.csv --model {d}/t.json"},
        {"recalibrate-bootstrap", "recalibrate " + in + "/logits.csv --logits --method bootstrap-histogram --seed 5 "
                                  "-o {d}/b.csv --model {d}/b.json"},
        {"recalibrate-mlp", "recalibrate " + in + "/logits.csv --logits --method mlp --seed 5 -o {d}/m.csv "
                            "--model {d}/m.json"},
        {"recalibrate-matrix", "recalibrate " + in + "/logits.csv --logits --method matrix -o {d}/x.csv "
                               "--model {d}/x.json"},
        {"sweep-bins", "sweep-bins --seed 5 --n-points 400 -o {d}/sweep.csv --cells {d}/cells.csv "
                       "--metadata {d}/sweep.json"},
        {"rank-methods", "rank-methods --seed 5 --n-points 400 -o {d}/rank.csv --scores {d}/scores.csv "
                         "--metadata {d}/rank.json"},
        {"label-noise", "label-noise --seed 5 --levels 8 -o {d}/noise.csv --metadata {d}/noise.json"},
    };
    int failed = 0, compared = 0;
    std::string detail;
    for (int run = 1; run <= 2; ++run) {
        const fs::path dir = root / ("run" + std::to_string(run));
        fs::create_directories(dir);
        for (const auto& [name, args] : commands) {
            std::string cmd = args;
            for (std::size_t pos; (pos = cmd.find("{d}")) != std::string::npos;) cmd.replace(pos, 3, dir.string());
            const std::string full = "\"" + tool + "\" " + cmd + " > \"" + (dir / (name + ".stdout")).string() + "\"";
            if (std::system(full.c_str()) != 0) {
                ++failed;
                detail += " [" + name + " exited nonzero]";
            }
        }
    }
    for (const auto& entry : fs::directory_iterator(root / "run1")) {
        const auto other = root / "run2" / entry.path().filename();
        ++compared;
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            ++failed;
            detail += " [" + entry.path().filename().string() + " differs]";
        }
    }
    fs::remove_all(root);
    return {failed == 0 && compared > commands.size(),
            std::to_string(commands.size()) + " commands, " + std::to_string(compared) + " files compared" + detail};
}

}  // namespace

int main() {
    report(1, "pathology reproduction", pathology, 1.0);
    report(2, "metric-index fidelity", index_fidelity);
    report(3, "oracle equivalence", oracle_equivalence, 30.0);
    report(4, "PAVA correctness", pava_exhaustive);
    report(5, "gradient checks", gradient_checks);
    report(6, "temperature recovery", temperature_recovery);
    report(7, "bin-sensitivity direction", bin_sensitivity, 300.0);
    report(8, "class-conditionality gap", class_conditionality);
    report(9, "label-noise monotonicity", label_noise);
    report(10, "CLI determinism", cli_determinism);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}

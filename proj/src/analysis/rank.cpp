#include "calib/analysis.hpp"
#include "calib/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace calib {

RankVector rank_scores(std::span<const double> scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    RankVector r;
    r.ranks.assign(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of positions i+1..j
        for (std::size_t t = i; t < j; ++t) r.ranks[order[t]] = avg;
        i = j;
    }
    return r;
}

std::string_view to_string(RankCorrelation v) noexcept {
    return v == RankCorrelation::spearman ? "spearman" : "footrule";
}

RankCorrelation parse_rank_correlation(std::string_view text) {
    if (text == "spearman") return RankCorrelation::spearman;
    if (text == "footrule") return RankCorrelation::footrule;
    throw ArgumentError("unknown rank correlation '" + std::string(text) + "'");
}

double rank_correlation(const RankVector& a, const RankVector& b, RankCorrelation variant) {
    if (a.size() != b.size())
        throw ArgumentError("rank vectors differ in length: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
    const std::size_t n = a.size();
    if (n < 2) throw ArgumentError("rank correlation needs at least two items");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.ranks[i] - b.ranks[i];
        acc += variant == RankCorrelation::spearman ? d * d : std::abs(d);
    }
    const double dn = static_cast<double>(n);
    return 1.0 - 6.0 * acc / (dn * (dn * dn - 1.0));
}

}  // namespace calib

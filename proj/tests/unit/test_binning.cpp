#include "calib/binning.hpp"
#include "calib/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace calib;

namespace {

std::vector<ScoredPrediction> preds(std::initializer_list<std::pair<double, bool>> items) {
    std::vector<ScoredPrediction> out;
    std::size_t i = 0;
    for (auto [s, c] : items) out.push_back({s, 0, c, i++});
    return out;
}

}  // namespace

TEST_CASE("even edges") {
    auto e = even_edges(10);
    REQUIRE(e.size() == 11);
    for (int k = 0; k <= 10; ++k) CHECK(e[k] == doctest::Approx(k / 10.0));
    CHECK(even_edges(1) == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(even_edges(0), ArgumentError);
    CHECK(even_bin_index(1.0, 10) == 9);
    CHECK(even_bin_index(0.0, 10) == 0);
    CHECK(even_bin_index(0.3, 10) == 3);
    CHECK(even_bin_index(std::nextafter(0.3, 0.0), 10) == 2);
}

TEST_CASE("even_bin_index agrees with the edges for every representable boundary") {
    for (int b = 1; b <= 60; ++b) {
        const auto e = even_edges(b);
        for (int k = 0; k < b; ++k) {
            CHECK(even_bin_index(e[k], b) == static_cast<std::size_t>(k));
            const double below = std::nextafter(e[k + 1], 0.0);
            CHECK(even_bin_index(below, b) == static_cast<std::size_t>(k));
        }
    }
}

TEST_CASE("adaptive edges") {
    const std::vector<double> s{0.1, 0.2, 0.6, 0.7};
    auto part = adaptive_partition(s, 2);
    CHECK(part.counts == std::vector<std::size_t>{2, 2});
    CHECK(part.edges[1] == doctest::Approx(0.4));
    CHECK(part.edges.front() == 0.0);
    CHECK(part.edges.back() == 1.0);

    auto one = adaptive_partition(s, 1);
    CHECK(one.counts == std::vector<std::size_t>{4});

    const std::vector<double> ties{0.5, 0.5, 0.5, 0.5};
    auto t = adaptive_partition(ties, 2);
    CHECK(t.counts == std::vector<std::size_t>{2, 2});
    CHECK(t.bin_of == std::vector<std::size_t>{0, 0, 1, 1});

    CHECK_THROWS_AS(adaptive_edges(std::vector<double>{}, 3), ArgumentError);

    auto rem = adaptive_partition(std::vector<double>{0.9, 0.1, 0.5, 0.3, 0.7}, 3);
    CHECK(rem.counts == std::vector<std::size_t>{2, 2, 1});
    CHECK(rem.bin_of == std::vector<std::size_t>{2, 0, 1, 0, 1});
}

TEST_CASE("bin_stats: pathology bin") {
    std::vector<ScoredPrediction> p;
    for (int i = 0; i < 450; ++i) p.push_back({0.52, 0, false, p.size()});
    for (int i = 0; i < 550; ++i) p.push_back({0.58, 0, true, p.size()});
    auto bins = bin_stats(p, {BinKind::even, 10});
    CHECK(bins[5].count == 1000);
    CHECK(bins[5].accuracy == doctest::Approx(0.55).epsilon(1e-12));
    CHECK(bins[5].confidence == doctest::Approx(0.553).epsilon(1e-12));
    for (std::size_t b = 0; b < bins.size(); ++b)
        if (b != 5) CHECK(bins[b].count == 0);
}

TEST_CASE("bin_stats: empty and saturated bins") {
    auto empty = bin_stats(std::vector<ScoredPrediction>{}, {BinKind::even, 4});
    for (const auto& b : empty) {
        CHECK(b.count == 0);
        CHECK(b.accuracy == 0.0);
        CHECK(b.confidence == 0.0);
    }
    auto one = bin_stats(preds({{1.0, true}}), {BinKind::even, 10});
    CHECK(one[9].count == 1);
    CHECK(one[9].accuracy == 1.0);
    CHECK(one[9].confidence == 1.0);
}

TEST_CASE("property: counts, balance, containment and permutation invariance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 80;
        const int b = 1 + static_cast<int>(rng() % 25);
        std::vector<ScoredPrediction> p;
        for (std::size_t i = 0; i < n; ++i) {
            // mix of continuous scores and grid values that land on edges
            const double s = trial % 3 == 0 ? std::round(u(rng) * 20) / 20 : u(rng);
            p.push_back({s, 0, u(rng) < s, i});
        }
        for (BinKind kind : {BinKind::even, BinKind::adaptive}) {
            const auto bins = bin_stats(p, {kind, b});
            std::size_t total = 0, lo = n, hi = 0;
            for (const auto& s : bins) {
                total += s.count;
                lo = std::min(lo, s.count);
                hi = std::max(hi, s.count);
                CHECK(s.lower <= s.upper);
                if (s.count > 0) {
                    CHECK(s.confidence >= s.lower - 1e-12);
                    CHECK(s.confidence <= s.upper + 1e-12);
                }
            }
            CHECK(total == n);
            if (kind == BinKind::adaptive) CHECK(hi - lo <= 1);
        }

        // distinct scores: any permutation gives identical stats
        std::vector<ScoredPrediction> distinct;
        for (std::size_t i = 0; i < n; ++i) distinct.push_back({u(rng), 0, u(rng) < 0.5, i});
        auto shuffled = distinct;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (BinKind kind : {BinKind::even, BinKind::adaptive}) {
            const auto a = bin_stats(distinct, {kind, b});
            const auto c = bin_stats(shuffled, {kind, b});
            for (std::size_t j = 0; j < a.size(); ++j) {
                CHECK(a[j].count == c[j].count);
                CHECK(a[j].accuracy == doctest::Approx(c[j].accuracy).epsilon(1e-12));
                CHECK(a[j].confidence == doctest::Approx(c[j].confidence).epsilon(1e-12));
                CHECK(a[j].lower == c[j].lower);
            }
        }
    }
}

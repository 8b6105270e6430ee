#include "calib/error.hpp"
#include "calib/optimize.hpp"
#include "calib/prediction.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace calib;

TEST_CASE("nelder-mead on a one-dimensional quadratic") {
    const auto f = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0); };
    const auto r = nelder_mead(f, {1.0}, {1e-14, 500});
    CHECK(r.converged);
    CHECK(r.point[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("nelder-mead on a constant function stops at the start point") {
    int calls = 0;
    const auto f = [&](std::span<const double>) {
        ++calls;
        return 3.0;
    };
    const auto r = nelder_mead(f, {0.7, -1.0});
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.point == std::vector<double>{0.7, -1.0});
    CHECK(calls == 4);  // start, one perturbed vertex per coordinate, centroid
}

TEST_CASE("nelder-mead solves Rosenbrock from (-1.2, 1)") {
    const auto f = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto r = nelder_mead(f, {-1.2, 1.0}, {1e-16, 2000});
    CHECK(r.iterations <= 2000);
    CHECK(std::abs(r.point[0] - 1.0) < 1e-3);
    CHECK(std::abs(r.point[1] - 1.0) < 1e-3);
    CHECK(f(r.point) == doctest::Approx(r.value));
}

TEST_CASE("nelder-mead reports non-convergence at max_iter") {
    const auto f = [](std::span<const double> x) { return std::pow(x[0] - 100.0, 2); };
    const auto r = nelder_mead(f, {1.0}, {1e-30, 5});
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 5);
}

TEST_CASE("nelder-mead rejects a non-finite start") {
    const auto f = [](std::span<const double> x) { return std::log(x[0]); };
    CHECK_THROWS_AS(nelder_mead(f, {-1.0}), ArgumentError);
    CHECK_THROWS_AS(nelder_mead(f, {}), ArgumentError);
}

TEST_CASE("plain gradient descent decays a quadratic geometrically") {
    const auto f = [](std::span<const double> x, std::span<double> g) {
        g[0] = x[0];
        return 0.5 * x[0] * x[0];
    };
    SgdConfig cfg{0.1, 0.0, true, 1};
    std::vector<double> x{1.0};
    for (int step = 1; step <= 20; ++step) {
        x = sgd_minimize(f, x, cfg);
        CHECK(x[0] == doctest::Approx(std::pow(0.9, step)).epsilon(1e-12));
    }
}

TEST_CASE("zero iterations leave the parameters unchanged") {
    const auto f = [](std::span<const double> x, std::span<double> g) {
        g[0] = 1.0;
        return x[0];
    };
    CHECK(sgd_minimize(f, {0.25}, SgdConfig{0.1, 0.9, true, 0}) == std::vector<double>{0.25});
}

TEST_CASE("sgd matches a hand-rolled Nesterov loop") {
    // f(a, b) = (a - 3)^2 + 2 (b + 1)^2 + a b
    const auto grad_at = [](double a, double b, double& ga, double& gb) {
        ga = 2.0 * (a - 3.0) + b;
        gb = 4.0 * (b + 1.0) + a;
        return (a - 3.0) * (a - 3.0) + 2.0 * (b + 1.0) * (b + 1.0) + a * b;
    };
    const auto f = [&](std::span<const double> x, std::span<double> g) { return grad_at(x[0], x[1], g[0], g[1]); };

    for (bool nesterov : {true, false}) {
        const double lr = 0.05, mu = 0.9;
        double a = 0.5, b = -0.25, va = 0.0, vb = 0.0;
        for (int it = 0; it < 10; ++it) {
            double ga, gb;
            if (nesterov)
                grad_at(a + mu * va, b + mu * vb, ga, gb);
            else
                grad_at(a, b, ga, gb);
            va = mu * va - lr * ga;
            vb = mu * vb - lr * gb;
            a += va;
            b += vb;
        }
        const auto x = sgd_minimize(f, {0.5, -0.25}, SgdConfig{lr, mu, nesterov, 10});
        CHECK(std::abs(x[0] - a) < 1e-12);
        CHECK(std::abs(x[1] - b) < 1e-12);
    }
}

TEST_CASE("momentum zero makes nesterov identical to plain descent") {
    const auto f = [](std::span<const double> x, std::span<double> g) {
        g[0] = 4.0 * x[0] * x[0] * x[0];
        return std::pow(x[0], 4);
    };
    const auto a = sgd_minimize(f, {1.3}, SgdConfig{0.01, 0.0, true, 50});
    const auto b = sgd_minimize(f, {1.3}, SgdConfig{0.01, 0.0, false, 50});
    CHECK(a == b);
}

TEST_CASE("sgd observer sees every iteration and divergence is reported") {
    const auto f = [](std::span<const double> x, std::span<double> g) {
        g[0] = 2.0 * x[0];
        return x[0] * x[0];
    };
    std::vector<int> seen;
    sgd_minimize(f, {1.0}, SgdConfig{0.1, 0.9, true, 7}, [&](int it, double) { seen.push_back(it); });
    CHECK(seen == std::vector<int>{0, 1, 2, 3, 4, 5, 6});

    try {
        sgd_minimize(f, {1.0}, SgdConfig{1e200, 0.0, false, 10});
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("iteration") != std::string::npos);
        CHECK(msg.find("learning rate") != std::string::npos);
    }
    CHECK_THROWS_AS(sgd_minimize(f, {1.0}, SgdConfig{-1.0, 0.9, true, 1}), ArgumentError);
    CHECK_THROWS_AS(sgd_minimize(f, {1.0}, SgdConfig{0.1, 1.0, true, 1}), ArgumentError);
}

TEST_CASE("grad_check on linear, softmax-NLL and deliberately wrong gradients") {
    const auto linear = [](std::span<const double> x, std::span<double> g) {
        g[0] = 3.0;
        g[1] = -2.0;
        return 3.0 * x[0] - 2.0 * x[1] + 1.0;
    };
    const std::vector<double> p0{0.4, 1.7};
    CHECK(grad_check(linear, p0) < 1e-10);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> d(0.0, 2.0);
    const std::size_t k = 6;
    std::vector<double> z(k);
    for (double& v : z) v = d(rng);
    const int label = 2;
    const auto nll = [&](std::span<const double> x, std::span<double> g) {
        std::vector<double> p(k);
        softmax_row(x, p);
        for (std::size_t j = 0; j < k; ++j) g[j] = p[j] - (static_cast<int>(j) == label ? 1.0 : 0.0);
        return -std::log(p[label]);
    };
    CHECK(grad_check(nll, z, 1e-5) < 1e-4);

    const auto doubled = [&](std::span<const double> x, std::span<double> g) {
        const double v = nll(x, g);
        for (double& gi : g) gi *= 2.0;
        return v;
    };
    CHECK(grad_check(doubled, z, 1e-5) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("golden section finds a 1-D minimum") {
    const double x = golden_section([](double t) { return (t - 0.3) * (t - 0.3) + 1.0; }, -2.0, 4.0);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("property: optimizers are deterministic") {
    const auto f = [](std::span<const double> x) { return std::sin(3 * x[0]) + x[0] * x[0] + std::cos(x[1]) * x[1] * x[1]; };
    const auto a = nelder_mead(f, {0.3, 0.8});
    const auto b = nelder_mead(f, {0.3, 0.8});
    CHECK(a.point == b.point);
    CHECK(a.evaluations == b.evaluations);
}

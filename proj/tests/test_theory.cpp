#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "caperc/rng.hpp"
#include "caperc/theory.hpp"

using namespace caperc;
using namespace caperc::theory;
using Catch::Approx;

TEST_CASE("decay rate values") {
    CHECK(decay_rate(1.0) == 0.0);
    CHECK(decay_rate(0.5) == Approx(0.1931471805599453).epsilon(1e-14));
    CHECK(decay_rate(2.0) == Approx(0.3068528194400547).epsilon(1e-14));
    CHECK_THROWS_AS(decay_rate(0.0), std::domain_error);
    CHECK_THROWS_AS(decay_rate(-1.0), std::domain_error);
}

TEST_CASE("decay rate is strictly convex with minimum at one") {
    double prev = decay_rate(0.05);
    for (double t = 0.1; t <= 0.95; t += 0.05) {
        const double cur = decay_rate(t);
        CHECK(cur < prev);  // decreasing left of 1
        CHECK(cur > 0.0);
        prev = cur;
    }
    prev = decay_rate(1.0);
    for (double t = 1.05; t <= 3.0; t += 0.05) {
        const double cur = decay_rate(t);
        CHECK(cur > prev);  // increasing right of 1
        prev = cur;
    }
    for (double a = 0.2; a < 2.0; a += 0.3)
        for (double b = a + 0.4; b < 2.8; b += 0.3)
            CHECK(decay_rate((a + b) / 2.0) < (decay_rate(a) + decay_rate(b)) / 2.0);
}

TEST_CASE("expected tree count closed-form specializations") {
    // s=2, n=4, lambda=1: C(4,2) * 1 * (1/4) * (3/4)^4
    CHECK(expected_tree_count(4, 1.0, 2).value == Approx(0.474609375).epsilon(1e-12));
    // s=1 collapses to n (1 - lambda/n)^(n-1)
    const std::uint64_t n = 100000;
    const double direct = static_cast<double>(n) * std::pow(1.0 - 0.5 / n, double(n - 1));
    CHECK(expected_tree_count(n, 0.5, 1).value == Approx(direct).epsilon(1e-10));
    CHECK(expected_tree_count(n, 0.5, 1).value == Approx(60653.293444737865).epsilon(1e-9));

    CHECK_THROWS_AS(expected_tree_count(10, 0.5, 0), std::domain_error);
    CHECK_THROWS_AS(expected_tree_count(10, 0.5, 11), std::domain_error);
    CHECK_THROWS_AS(expected_tree_count(10, 12.0, 2), std::domain_error);
}

TEST_CASE("log-space evaluation matches direct products for small n") {
    for (std::uint64_t n : {5ull, 12ull, 20ull, 30ull}) {
        for (double lambda : {0.4, 1.0, 2.5}) {
            for (std::uint64_t s = 1; s <= n; ++s) {
                // direct evaluation: exact integer binomial, pow for the rest
                double choose = 1.0;
                for (std::uint64_t i = 0; i < s; ++i)
                    choose = choose * static_cast<double>(n - i) / static_cast<double>(i + 1);
                const double p = lambda / static_cast<double>(n);
                const double expo = static_cast<double>(s * (n - s)) +
                                    static_cast<double>((s - 1) * (s - 2)) / 2.0;
                const double direct = choose * std::pow(static_cast<double>(s), double(s) - 2.0) *
                                      std::pow(p, double(s) - 1.0) * std::pow(1.0 - p, expo);
                CHECK(expected_tree_count(n, lambda, s).value ==
                      Approx(direct).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("expected tree counts cannot exceed the vertex budget") {
    const std::uint64_t n = 1000;
    double mass = 0.0;
    for (std::uint64_t s = 1; s <= 200; ++s)
        mass += static_cast<double>(s) * expected_tree_count(n, 0.5, s).value;
    CHECK(mass <= static_cast<double>(n));
}

TEST_CASE("asymptotic tree count agrees with the exact formula for large s") {
    // within 2% already at s=10, n=1e5
    const double exact10 = expected_tree_count(100000, 0.5, 10).value;
    const double asym10 = asymptotic_tree_count(1e5, 0.5, 10).value;
    CHECK(std::abs(asym10 / exact10 - 1.0) < 0.02);
    // within 1% by s=50 at n=1e8, and the ratio keeps approaching 1
    double prev_gap = 1e9;
    for (double s : {10.0, 20.0, 30.0, 50.0}) {
        const double exact = expected_tree_count(100000000, 0.5, static_cast<std::uint64_t>(s)).value;
        const double asym = asymptotic_tree_count(1e8, 0.5, s).value;
        const double gap = std::abs(asym / exact - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.01);
}

TEST_CASE("asymptotic tree count direct values") {
    const double e = std::exp(1.0);
    CHECK(asymptotic_tree_count(e, 0.5, 1).value == Approx(1.7879352577708445).epsilon(1e-12));
    // linear in n
    CHECK(asymptotic_tree_count(2000.0, 0.3, 7).value ==
          Approx(2.0 * asymptotic_tree_count(1000.0, 0.3, 7).value).epsilon(1e-12));
    CHECK_THROWS_AS(asymptotic_tree_count(10.0, 1.5, 2), std::domain_error);
}

TEST_CASE("tree size cutoff") {
    CHECK(tree_size_cutoff(1000000, 0.5, 0.0) == Approx(37.54147873529954).epsilon(1e-12));
    CHECK(tree_size_cutoff(1000000, 0.5, 1.0) ==
          Approx(tree_size_cutoff(1000000, 0.5, 0.0) - 1.0).epsilon(1e-12));
    CHECK(tree_size_cutoff(100000, 0.5, 0.0) < tree_size_cutoff(1000000, 0.5, 0.0));
    CHECK(tree_size_cutoff(1000000, 0.5, 0.0) < tree_size_cutoff(10000000, 0.5, 0.0));
    CHECK_THROWS_AS(tree_size_cutoff(2, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(tree_size_cutoff(100, 1.2, 0.0), std::domain_error);
}

TEST_CASE("black count bound") {
    CHECK(black_count_bound(1000, 1.0 / 1000.0) == Approx(0.5).epsilon(1e-12));
    CHECK(black_count_bound(1000000, 0.05) == Approx(2.3058653605207224).epsilon(1e-12));
    // n -> n^2 doubles the bound
    CHECK(black_count_bound(1000000, 0.05) ==
          Approx(0.5 * black_count_bound(1000000000000ull, 0.05)).epsilon(1e-12));
    CHECK_THROWS_AS(black_count_bound(10, 1.0), std::domain_error);
    CHECK_THROWS_AS(black_count_bound(10, 0.0), std::domain_error);
}

TEST_CASE("dominant component size") {
    CHECK(dominant_component_size(5.0, 0.05, 0.5) == Approx(23.056626532466804).epsilon(1e-12));
    // q -> 1 drives the peak to M
    CHECK(dominant_component_size(7.0, 0.999999, 0.5) == Approx(7.0).margin(1e-4));
    Rng rng(31);
    for (int it = 0; it < 50; ++it) {
        const double m = 1.0 + 20.0 * rng.next_unit();
        const double q = 0.01 + 0.98 * rng.next_unit();
        const double lambda = 0.05 + 0.9 * rng.next_unit();
        CHECK(dominant_component_size(m, q, lambda) >= m);
    }
    CHECK_THROWS_AS(dominant_component_size(0.5, 0.1, 0.5), std::domain_error);
}

TEST_CASE("chernoff bound") {
    CHECK(chernoff_bound(0.0, 0.5) == 2.0);
    CHECK(chernoff_bound(300.0, 0.1) == Approx(0.7357588823428847).epsilon(1e-12));
    CHECK_THROWS_AS(chernoff_bound(10.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(chernoff_bound(10.0, 1.0), std::domain_error);
}

TEST_CASE("chernoff bound dominates empirical binomial deviations") {
    // Binomial(1e4, 0.3) via 1e4 Monte Carlo samples, delta = 0.05
    const std::uint64_t trials = 10000, draws = 10000;
    const double p = 0.3, delta = 0.05;
    const double mu = static_cast<double>(draws) * p;
    Rng rng(37);
    std::uint64_t deviant = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t x = 0;
        for (std::uint64_t i = 0; i < draws; ++i) x += rng.bernoulli(p);
        if (std::abs(static_cast<double>(x) - mu) >= delta * mu) ++deviant;
    }
    const double freq = static_cast<double>(deviant) / static_cast<double>(trials);
    CHECK(freq <= chernoff_bound(mu, delta));
}

TEST_CASE("regime classification matches the phase diagram") {
    CHECK(classify_regime(ModelParams(100, {2.0, 1.5})).regime == Regime::supercritical);
    CHECK(classify_regime(ModelParams(100, {1.2, 0.5})).regime == Regime::intermediate);
    CHECK(classify_regime(ModelParams(100, {0.4, 0.4})).regime == Regime::subcritical);

    // exactly on the window: lambda_star_max = 1
    const auto window = classify_regime(ModelParams(100, {1.0, 0.5}));
    CHECK(window.regime == Regime::critical_window);
    CHECK(window.zeta == Approx(0.0).margin(1e-12));

    // lambda_star straddling 1 from below with star_second >= 1 is open
    const auto open = classify_regime(ModelParams(100, {2.0, 0.5, 0.5}));
    CHECK(open.regime == Regime::unclassified);
}

TEST_CASE("classification ignores the order of intensities") {
    const auto a = classify_regime(ModelParams(100, {1.2, 0.5}));
    const auto b = classify_regime(ModelParams(100, {0.5, 1.2}));
    CHECK(a.regime == b.regime);
    CHECK(a.star_max == b.star_max);
}

TEST_CASE("predicted max CA scale") {
    RegimeLabel sub;
    sub.regime = Regime::subcritical;
    sub.k = 3;
    const auto bounded = predicted_max_ca_scale(sub, 100000);
    CHECK(bounded.kind == ScaleKind::bounded);
    CHECK(bounded.value == 3.0);
    CHECK(bounded.constant_known);

    RegimeLabel window;
    window.regime = Regime::critical_window;
    window.zeta = 1.0 / std::log(1e6);
    const auto w = predicted_max_ca_scale(window, 1000000);
    CHECK(w.kind == ScaleKind::explicit_value);
    CHECK(w.value == Approx(5.261464353591485).epsilon(1e-12));
    CHECK(w.constant_known);
    // increasing in n at fixed zeta
    CHECK(predicted_max_ca_scale(window, 10000000).value > w.value);

    RegimeLabel inter;
    inter.regime = Regime::intermediate;
    const auto i = predicted_max_ca_scale(inter, 1000000);
    CHECK(i.kind == ScaleKind::logarithmic);
    CHECK_FALSE(i.constant_known);

    RegimeLabel open;
    open.regime = Regime::unclassified;
    CHECK_THROWS_AS(predicted_max_ca_scale(open, 100), std::invalid_argument);

    RegimeLabel degenerate;
    degenerate.regime = Regime::critical_window;
    degenerate.zeta = 0.0;
    CHECK_THROWS_AS(predicted_max_ca_scale(degenerate, 100), std::domain_error);
}

TEST_CASE("giant size estimate") {
    const double lambda = 1.0 + std::pow(10.0, -1.5);
    const auto est = giant_size_estimate(1000000, lambda);
    CHECK(est.value == Approx(63245.553203367585).epsilon(1e-12));

    const auto doubled = giant_size_estimate(1000000, 1.0 + 2.0 * std::pow(10.0, -1.5));
    CHECK(doubled.value == Approx(2.0 * est.value).epsilon(1e-12));

    CHECK_FALSE(giant_size_estimate(100, 1.0000001).within_validity);
    CHECK(giant_size_estimate(1000000, 1.1).within_validity);
    CHECK_THROWS_AS(giant_size_estimate(100, 1.0), std::domain_error);
}

TEST_CASE("deleted-colors intensity") {
    const ModelParams p(100, {1.0, 0.5, 0.3});
    CHECK(lambda_subset_star(p, ColorSet::none(3)) == p.lambda_total);
    CHECK(lambda_subset_star(p, ColorSet::all(3)) == 0.0);
    CHECK(lambda_subset_star(p, ColorSet(3, {1, 3})) == Approx(0.5).epsilon(1e-14));
    for (int c = 1; c <= 3; ++c)
        CHECK(lambda_subset_star(p, ColorSet(3, {c})) ==
              Approx(p.lambda_star[static_cast<std::size_t>(c - 1)]).epsilon(1e-14));
}

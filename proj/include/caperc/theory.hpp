#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "caperc/model.hpp"

namespace caperc::theory {

/// Value carried in log space; `value` underflows to zero when exp does.
struct LogValue {
    double log_value;
    double value;
};

inline LogValue make_log_value(double log_value) {
    return LogValue{log_value, std::exp(log_value)};
}

/// Large-deviations rate t - 1 - ln t; strictly convex, zero only at t = 1.
/// Governs the exponential decay of subcritical component counts.
inline double decay_rate(double t) {
    if (!(t > 0.0)) throw std::domain_error("decay_rate: t must be positive");
    return t - 1.0 - std::log(t);
}

/// Exact expected number of tree components of size s in G(n, lambda/n):
/// C(n,s) * s^(s-2) * (lambda/n)^(s-1) * (1-lambda/n)^(s(n-s)+(s-1)(s-2)/2),
/// evaluated in log space via lgamma.
inline LogValue expected_tree_count(std::uint64_t n, double lambda, std::uint64_t s) {
    if (s < 1 || s > n) throw std::domain_error("expected_tree_count: need 1 <= s <= n");
    if (!(lambda > 0.0) || !(lambda < static_cast<double>(n)))
        throw std::domain_error("expected_tree_count: need 0 < lambda < n");
    const double nd = static_cast<double>(n);
    const double sd = static_cast<double>(s);
    const double log_choose =
        std::lgamma(nd + 1.0) - std::lgamma(sd + 1.0) - std::lgamma(nd - sd + 1.0);
    const double exponent =
        static_cast<double>(s * (n - s)) + static_cast<double>((s - 1) * (s - 2)) / 2.0;
    const double lv = log_choose + (sd - 2.0) * std::log(sd) +
                      (sd - 1.0) * (std::log(lambda) - std::log(nd)) +
                      exponent * std::log1p(-lambda / nd);
    return make_log_value(lv);
}

/// Large-s form of the expected tree count: n * e^(-I_lambda * s) / (lambda * sqrt(2 pi s^5)).
inline LogValue asymptotic_tree_count(double n, double lambda, double s) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::domain_error("asymptotic_tree_count: need lambda in (0,1)");
    if (!(s >= 1.0)) throw std::domain_error("asymptotic_tree_count: need s >= 1");
    if (!(n > 0.0)) throw std::domain_error("asymptotic_tree_count: need n > 0");
    const double lv = std::log(n) - decay_rate(lambda) * s - std::log(lambda) -
                      0.5 * std::log(2.0 * std::numbers::pi * std::pow(s, 5.0));
    return make_log_value(lv);
}

/// Size cutoff above which trees stop appearing:
/// (ln n - (5/2) ln ln n) / I_lambda - omega. Real-valued; callers floor it.
inline double tree_size_cutoff(std::uint64_t n, double lambda, double omega) {
    if (n < 3) throw std::domain_error("tree_size_cutoff: need n >= 3");
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::domain_error("tree_size_cutoff: need lambda in (0,1)");
    if (!(omega >= 0.0)) throw std::domain_error("tree_size_cutoff: need omega >= 0");
    const double ln_n = std::log(static_cast<double>(n));
    return (ln_n - 2.5 * std::log(ln_n)) / decay_rate(lambda) - omega;
}

/// Bound on black vertices inside near-maximal components: ln n / (2 ln(1/q)).
inline double black_count_bound(std::uint64_t n, double q) {
    if (n < 2) throw std::domain_error("black_count_bound: need n >= 2");
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("black_count_bound: need q in (0,1)");
    return std::log(static_cast<double>(n)) / (2.0 * std::log(1.0 / q));
}

/// Component size dominating the count of components with >= M black
/// vertices: M / (1 - (1-q) e^(-I_lambda)).
inline double dominant_component_size(double m, double q, double lambda) {
    if (!(m >= 1.0)) throw std::domain_error("dominant_component_size: need M >= 1");
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("dominant_component_size: need q in (0,1)");
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw std::domain_error("dominant_component_size: need lambda in (0,1)");
    return m / (1.0 - (1.0 - q) * std::exp(-decay_rate(lambda)));
}

/// Binomial concentration bound: P(|X - mu| >= delta mu) <= 2 e^(-delta^2 mu / 3).
inline double chernoff_bound(double mu, double delta) {
    if (!(mu >= 0.0)) throw std::domain_error("chernoff_bound: need mu >= 0");
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::domain_error("chernoff_bound: need delta in (0,1)");
    return 2.0 * std::exp(-delta * delta * mu / 3.0);
}

enum class Regime { supercritical, intermediate, subcritical, critical_window, unclassified };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::supercritical: return "supercritical";
        case Regime::intermediate: return "intermediate";
        case Regime::subcritical: return "subcritical";
        case Regime::critical_window: return "critical-window";
        case Regime::unclassified: return "unclassified";
    }
    return "?";
}

/// Regime label together with the deciding intensities
/// (smallest, second-largest, largest of the lambda-star vector).
struct RegimeLabel {
    Regime regime = Regime::unclassified;
    double zeta = 0.0;  // star_max - 1; the window width when regime == critical_window
    int k = 0;
    double star_min = 0.0;
    double star_second = 0.0;
    double star_max = 0.0;
};

/// First-matching classification over the lambda-star order statistics:
/// supercritical (star_min > 1), intermediate (star_max > 1 > star_second),
/// subcritical (star_max < 1), critical window (|star_max - 1| <= tolerance
/// and star_second < 1), otherwise unclassified.
inline RegimeLabel classify_regime(const ModelParams& params, double window_tolerance = 1e-6) {
    RegimeLabel out;
    out.k = params.k;
    out.star_min = params.lambda_star.front();
    out.star_second = params.lambda_star[static_cast<std::size_t>(params.k - 2)];
    out.star_max = params.lambda_star.back();
    out.zeta = out.star_max - 1.0;
    if (out.star_min > 1.0)
        out.regime = Regime::supercritical;
    else if (out.star_max > 1.0 && out.star_second < 1.0)
        out.regime = Regime::intermediate;
    else if (out.star_max < 1.0)
        out.regime = Regime::subcritical;
    else if (std::abs(out.star_max - 1.0) <= window_tolerance && out.star_second < 1.0)
        out.regime = Regime::critical_window;
    else
        out.regime = Regime::unclassified;
    return out;
}

enum class ScaleKind { linear, logarithmic, bounded, explicit_value };

/// Predicted order of the largest CA-component. For the linear and
/// logarithmic regimes the leading constant is not available in closed
/// form, so `constant_known` is false and `value` is the bare scale.
struct ScalePrediction {
    ScaleKind kind;
    double value;
    bool constant_known;
};

inline ScalePrediction predicted_max_ca_scale(const RegimeLabel& label, std::uint64_t n) {
    const double ln_n = std::log(static_cast<double>(n));
    switch (label.regime) {
        case Regime::supercritical:
            return {ScaleKind::linear, static_cast<double>(n), false};
        case Regime::intermediate:
            return {ScaleKind::logarithmic, ln_n, false};
        case Regime::subcritical:
            return {ScaleKind::bounded, static_cast<double>(label.k), true};
        case Regime::critical_window: {
            if (!(label.zeta > 0.0))
                throw std::domain_error("predicted_max_ca_scale: window requires zeta > 0");
            return {ScaleKind::explicit_value, ln_n / std::log(1.0 / label.zeta), true};
        }
        case Regime::unclassified:
            break;
    }
    throw std::invalid_argument("predicted_max_ca_scale: unclassified regime");
}

/// Barely supercritical giant size 2 (lambda - 1) n; valid for
/// n^(-1/3) << lambda - 1 << 1, flagged when lambda - 1 is outside
/// [5 n^(-1/3), 0.2].
struct GiantEstimate {
    double value;
    bool within_validity;
};

inline GiantEstimate giant_size_estimate(std::uint64_t n, double lambda) {
    if (!(lambda > 1.0)) throw std::domain_error("giant_size_estimate: need lambda > 1");
    const double excess = lambda - 1.0;
    const double lo = 5.0 * std::pow(static_cast<double>(n), -1.0 / 3.0);
    return {2.0 * excess * static_cast<double>(n), excess >= lo && excess <= 0.2};
}

/// Deleted-colors intensity for a color subset: Lambda - sum_{i in I} lambda_i.
inline double lambda_subset_star(const ModelParams& params, const ColorSet& I) {
    if (I.k() != params.k) throw std::invalid_argument("lambda_subset_star: color set width != k");
    double sum = 0.0;
    for (int c = 1; c <= params.k; ++c)
        if (I.contains(c)) sum += params.lambdas[static_cast<std::size_t>(c - 1)];
    return params.lambda_total - sum;
}

}  // namespace caperc::theory

// caperc — sample k-layer random graphs, compute color-avoiding components,
// evaluate closed-form predictors, and run the named experiment presets.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "caperc/caperc.hpp"
#include "caperc/selftest.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_verdict = 3;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

// Counts accept scientific notation ("1e6").
std::vector<std::uint64_t> parse_count_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (double v : parse_double_list(text)) {
        if (!(v >= 1.0) || v > 4.0e9) throw std::invalid_argument("count out of range");
        out.push_back(static_cast<std::uint64_t>(std::llround(v)));
    }
    return out;
}

std::vector<int> parse_color_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) out.push_back(static_cast<int>(std::llround(v)));
    return out;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

int cmd_sample(const std::string& n_text, const std::string& lambda_text, std::uint64_t seed,
               const std::string& out_path) {
    const auto ns = parse_count_list(n_text);
    if (ns.size() != 1) throw std::invalid_argument("sample: --n takes a single value");
    const caperc::ModelParams params(ns.front(), parse_double_list(lambda_text));
    const caperc::ColoredMultigraph g = caperc::sample_model(params, seed);
    if (out_path.empty() || out_path == "-") {
        caperc::write_edgelist(g, std::cout);
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path);
        caperc::write_edgelist(g, f);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// ca
// ---------------------------------------------------------------------------

int cmd_ca(const std::string& in_path, const std::string& out_path,
           const std::string& census_path) {
    caperc::ColoredMultigraph g = [&] {
        if (in_path.empty() || in_path == "-") return caperc::read_edgelist(std::cin);
        std::ifstream f(in_path);
        if (!f) throw std::runtime_error("cannot open " + in_path);
        return caperc::read_edgelist(f);
    }();

    const caperc::CaPartition p = caperc::ca_partition(g);
    if (out_path.empty() || out_path == "-") {
        caperc::write_ca_partition_csv(p, std::cout);
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open " + out_path);
        caperc::write_ca_partition_csv(p, f);
    }

    if (!census_path.empty()) {
        const caperc::CaCensus c = caperc::ca_census(p, g.k());
        caperc::csv::Table t;
        t.header = {"stat_kind", "key", "value"};
        for (const auto& [s, count] : c.size_hist) t.add_row({std::string("ca_size_hist"), s, count});
        for (const auto& [l, count] : c.small_counts)
            t.add_row({std::string("ca_n"), static_cast<std::uint64_t>(l), count});
        t.add_row({std::string("max_ca_size"), std::string(), c.max_ca_size});
        std::ofstream f(census_path);
        if (!f) throw std::runtime_error("cannot open " + census_path);
        caperc::csv::emit_csv(t, f);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// theory
// ---------------------------------------------------------------------------

struct TheoryArgs {
    std::optional<double> t, lambda, s, omega, q, m, mu, delta, window_tolerance;
    std::optional<std::string> n_text, lambda_list, colors;
};

double need(const std::optional<double>& v, const char* flag) {
    if (!v) throw std::invalid_argument(std::string("missing required flag ") + flag);
    return *v;
}

std::uint64_t need_n(const TheoryArgs& a) {
    if (!a.n_text) throw std::invalid_argument("missing required flag --n");
    const auto ns = parse_count_list(*a.n_text);
    if (ns.size() != 1) throw std::invalid_argument("--n takes a single value");
    return ns.front();
}

int cmd_theory(const std::string& predictor, const TheoryArgs& a) {
    namespace th = caperc::theory;
    json j;
    j["name"] = predictor;
    json inputs;
    json warnings = json::array();
    j["log_value"] = nullptr;

    if (predictor == "rate-I") {
        const double t = need(a.t, "--t");
        inputs["t"] = t;
        j["value"] = th::decay_rate(t);
    } else if (predictor == "expected-tree-count") {
        const std::uint64_t n = need_n(a);
        const double lambda = need(a.lambda, "--lambda");
        const double s = need(a.s, "--s");
        inputs = {{"n", n}, {"lambda", lambda}, {"s", s}};
        const th::LogValue v = th::expected_tree_count(n, lambda, static_cast<std::uint64_t>(s));
        j["value"] = v.value;
        j["log_value"] = v.log_value;
    } else if (predictor == "asymptotic-tree-count") {
        const std::uint64_t n = need_n(a);
        const double lambda = need(a.lambda, "--lambda");
        const double s = need(a.s, "--s");
        inputs = {{"n", n}, {"lambda", lambda}, {"s", s}};
        const th::LogValue v = th::asymptotic_tree_count(static_cast<double>(n), lambda, s);
        j["value"] = v.value;
        j["log_value"] = v.log_value;
    } else if (predictor == "tree-size-cutoff") {
        const std::uint64_t n = need_n(a);
        const double lambda = need(a.lambda, "--lambda");
        const double omega = a.omega.value_or(1.0);
        inputs = {{"n", n}, {"lambda", lambda}, {"omega", omega}};
        j["value"] = th::tree_size_cutoff(n, lambda, omega);
    } else if (predictor == "black-count-bound") {
        const std::uint64_t n = need_n(a);
        const double q = need(a.q, "--q");
        inputs = {{"n", n}, {"q", q}};
        j["value"] = th::black_count_bound(n, q);
    } else if (predictor == "dominant-component-size") {
        const double m = need(a.m, "--m");
        const double q = need(a.q, "--q");
        const double lambda = need(a.lambda, "--lambda");
        inputs = {{"m", m}, {"q", q}, {"lambda", lambda}};
        j["value"] = th::dominant_component_size(m, q, lambda);
    } else if (predictor == "chernoff-bound") {
        const double mu = need(a.mu, "--mu");
        const double delta = need(a.delta, "--delta");
        inputs = {{"mu", mu}, {"delta", delta}};
        j["value"] = th::chernoff_bound(mu, delta);
    } else if (predictor == "giant-size") {
        const std::uint64_t n = need_n(a);
        const double lambda = need(a.lambda, "--lambda");
        inputs = {{"n", n}, {"lambda", lambda}};
        const th::GiantEstimate est = th::giant_size_estimate(n, lambda);
        j["value"] = est.value;
        if (!est.within_validity)
            warnings.push_back("lambda - 1 is outside the validity window [5 n^(-1/3), 0.2]");
    } else if (predictor == "classify" || predictor == "predicted-max-ca") {
        if (!a.lambda_list) throw std::invalid_argument("missing required flag --lambdas");
        const std::uint64_t n = a.n_text ? need_n(a) : 1000000;
        const caperc::ModelParams params(n, parse_double_list(*a.lambda_list));
        inputs = {{"n", n}, {"lambdas", params.lambdas}};
        const th::RegimeLabel label =
            th::classify_regime(params, a.window_tolerance.value_or(1e-6));
        j["regime"] = th::regime_name(label.regime);
        j["lambda_star"] = params.lambda_star;
        j["zeta"] = label.zeta;
        if (predictor == "classify") {
            j["value"] = th::regime_name(label.regime);
        } else {
            const th::ScalePrediction pred = th::predicted_max_ca_scale(label, n);
            j["value"] = pred.value;
            j["constant_known"] = pred.constant_known;
            switch (pred.kind) {
                case th::ScaleKind::linear: j["scale_kind"] = "linear"; break;
                case th::ScaleKind::logarithmic: j["scale_kind"] = "logarithmic"; break;
                case th::ScaleKind::bounded: j["scale_kind"] = "bounded"; break;
                case th::ScaleKind::explicit_value: j["scale_kind"] = "explicit"; break;
            }
            if (!pred.constant_known)
                warnings.push_back("leading constant has no closed form; value is the bare scale");
        }
    } else if (predictor == "lambda-star") {
        if (!a.lambda_list) throw std::invalid_argument("missing required flag --lambdas");
        const std::uint64_t n = a.n_text ? need_n(a) : 1000000;
        const caperc::ModelParams params(n, parse_double_list(*a.lambda_list));
        caperc::ColorSet I = caperc::ColorSet::none(params.k);
        if (a.colors)
            for (int c : parse_color_list(*a.colors)) I = caperc::ColorSet::from_mask(
                params.k, I.mask() | (std::uint64_t{1} << (c - 1)));
        inputs = {{"lambdas", params.lambdas}, {"colors", I.to_string()}};
        j["value"] = th::lambda_subset_star(params, I);
    } else {
        throw CLI::ValidationError("theory", "unknown predictor '" + predictor + "'");
    }

    j["inputs"] = inputs;
    j["validity_warnings"] = warnings;
    std::cout << j.dump(2) << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunFlags {
    std::string preset;
    std::optional<std::string> n_text, lambda_text, zeta_text;
    std::optional<std::uint32_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<double> lambda_rest, q, exponent, omega;
    std::optional<std::uint64_t> min_size;
    std::string out_dir;
    std::string config_path;
    bool quiet = false;
};

json preset_defaults(const std::string& preset) {
    json d;
    d["trials"] = 30;
    d["seed"] = 1;
    d["workers"] = 1;
    if (preset == "regime-scaling") {
        d["lambdas"] = {1.3, 0.4};
        d["n_grid"] = {10000, 30000, 100000};
    } else if (preset == "critical-window") {
        d["zeta"] = "inv-log";
        d["lambda_rest"] = 0.5;
        d["n_grid"] = {100000, 1000000, 4000000};
        d["ratio_lo"] = 0.5;
        d["ratio_hi"] = 1.6;
        d["quantile_growth_limit"] = 1.0;
    } else if (preset == "tree-census") {
        d["lambda"] = 0.5;
        d["n"] = 100000;
        d["trials"] = 100;
        d["omega"] = 1.0;
        d["s_check"] = 10;
        d["rel_tol"] = 0.05;
        d["size_bound_slack"] = 32;
        d["cyclic_median_limit"] = 20.0;
    } else if (preset == "black-threshold") {
        d["lambda"] = 0.5;
        d["q"] = 0.05;
        d["n_grid"] = {100000, 1000000, 10000000};
        d["ratio_lo"] = 0.5;
        d["ratio_hi"] = 1.8;
    } else if (preset == "poisson-small-components") {
        d["lambdas"] = {0.4, 0.4};
        d["n"] = 100000;
        d["trials"] = 500;
        d["dispersion_lo"] = 0.7;
        d["dispersion_hi"] = 1.3;
        d["corr_limit"] = 0.15;
        d["aas_fraction"] = 0.95;
    } else if (preset == "giant-lln") {
        d["exponent"] = 0.25;
        d["n_grid"] = {100000, 1000000};
        d["band_lo"] = 1.6;
        d["band_hi"] = 2.4;
    } else if (preset == "intersection-structure") {
        d["zeta"] = "inv-log";
        d["lambda_rest"] = 0.5;
        d["n"] = 1000000;
        d["trials"] = 20;
        d["min_size"] = 4;
        d["zero_fraction"] = 0.9;
    } else {
        throw CLI::ValidationError("run", "unknown preset '" + preset + "'");
    }
    return d;
}

caperc::experiments::ZetaRule parse_zeta_rule(const json& cfg, double& fixed_zeta) {
    const json& z = cfg.at("zeta");
    if (z.is_string()) {
        const std::string s = z.get<std::string>();
        if (s == "inv-log") return caperc::experiments::ZetaRule::inv_log;
        if (s == "inv-sqrt") return caperc::experiments::ZetaRule::inv_sqrt;
        fixed_zeta = std::stod(s);
        return caperc::experiments::ZetaRule::fixed;
    }
    fixed_zeta = z.get<double>();
    return caperc::experiments::ZetaRule::fixed;
}

std::vector<std::uint64_t> grid_from(const json& cfg) {
    std::vector<std::uint64_t> grid;
    for (const auto& v : cfg.at("n_grid")) grid.push_back(v.get<std::uint64_t>());
    return grid;
}

caperc::experiments::PresetOutput dispatch_preset(const std::string& preset, const json& cfg) {
    namespace ex = caperc::experiments;
    if (preset == "regime-scaling") {
        ex::RegimeScalingConfig c;
        c.lambdas = cfg.at("lambdas").get<std::vector<double>>();
        c.n_grid = grid_from(cfg);
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        if (cfg.contains("spread_linear")) c.spread_linear = cfg["spread_linear"].get<double>();
        if (cfg.contains("spread_log")) c.spread_log = cfg["spread_log"].get<double>();
        if (cfg.contains("aas_fraction")) c.aas_fraction = cfg["aas_fraction"].get<double>();
        return ex::exp_regime_scaling(c);
    }
    if (preset == "critical-window") {
        ex::CriticalWindowConfig c;
        c.zeta_rule = parse_zeta_rule(cfg, c.fixed_zeta);
        c.lambda_rest = cfg.at("lambda_rest").get<double>();
        c.n_grid = grid_from(cfg);
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.ratio_lo = cfg.at("ratio_lo").get<double>();
        c.ratio_hi = cfg.at("ratio_hi").get<double>();
        c.quantile_growth_limit = cfg.at("quantile_growth_limit").get<double>();
        return ex::exp_critical_window(c);
    }
    if (preset == "tree-census") {
        ex::TreeCensusConfig c;
        c.lambda = cfg.at("lambda").get<double>();
        c.n = cfg.at("n").get<std::uint64_t>();
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.omega = cfg.at("omega").get<double>();
        c.s_check = cfg.at("s_check").get<std::uint64_t>();
        c.rel_tol = cfg.at("rel_tol").get<double>();
        c.size_bound_slack = cfg.at("size_bound_slack").get<std::uint64_t>();
        if (cfg.contains("max_size_bound") && !cfg["max_size_bound"].is_null())
            c.max_size_bound = cfg["max_size_bound"].get<std::uint64_t>();
        c.cyclic_median_limit = cfg.at("cyclic_median_limit").get<double>();
        return ex::exp_tree_census(c);
    }
    if (preset == "black-threshold") {
        ex::BlackThresholdConfig c;
        c.lambda = cfg.at("lambda").get<double>();
        c.q = cfg.at("q").get<double>();
        c.n_grid = grid_from(cfg);
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.ratio_lo = cfg.at("ratio_lo").get<double>();
        c.ratio_hi = cfg.at("ratio_hi").get<double>();
        return ex::exp_black_threshold(c);
    }
    if (preset == "poisson-small-components") {
        ex::PoissonSmallComponentsConfig c;
        c.lambdas = cfg.at("lambdas").get<std::vector<double>>();
        c.n = cfg.at("n").get<std::uint64_t>();
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.dispersion_lo = cfg.at("dispersion_lo").get<double>();
        c.dispersion_hi = cfg.at("dispersion_hi").get<double>();
        c.corr_limit = cfg.at("corr_limit").get<double>();
        c.aas_fraction = cfg.at("aas_fraction").get<double>();
        return ex::exp_poisson_small_components(c);
    }
    if (preset == "giant-lln") {
        ex::GiantLlnConfig c;
        c.exponent = cfg.at("exponent").get<double>();
        c.n_grid = grid_from(cfg);
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.band_lo = cfg.at("band_lo").get<double>();
        c.band_hi = cfg.at("band_hi").get<double>();
        return ex::exp_giant_lln(c);
    }
    if (preset == "intersection-structure") {
        ex::IntersectionStructureConfig c;
        c.zeta_rule = parse_zeta_rule(cfg, c.fixed_zeta);
        c.lambda_rest = cfg.at("lambda_rest").get<double>();
        c.n = cfg.at("n").get<std::uint64_t>();
        c.trials = cfg.at("trials").get<std::uint32_t>();
        c.master_seed = cfg.at("seed").get<std::uint64_t>();
        c.workers = cfg.at("workers").get<unsigned>();
        c.min_size = cfg.at("min_size").get<std::uint64_t>();
        c.zero_fraction = cfg.at("zero_fraction").get<double>();
        return ex::exp_intersection_structure(c);
    }
    throw CLI::ValidationError("run", "unknown preset '" + preset + "'");
}

int cmd_run(const RunFlags& flags) {
    json cfg = preset_defaults(flags.preset);

    // precedence: flags > config file > defaults
    if (!flags.config_path.empty()) {
        std::ifstream f(flags.config_path);
        if (!f) throw std::runtime_error("cannot open config " + flags.config_path);
        json file_cfg = json::parse(f);
        cfg.update(file_cfg);
    }
    const bool single_n = flags.preset == "tree-census" ||
                          flags.preset == "poisson-small-components" ||
                          flags.preset == "intersection-structure";
    if (flags.n_text) {
        const auto ns = parse_count_list(*flags.n_text);
        if (single_n) {
            if (ns.size() != 1)
                throw std::invalid_argument("run " + flags.preset + ": --n takes a single value");
            cfg["n"] = ns.front();
        } else {
            cfg["n_grid"] = ns;
        }
    }
    if (flags.lambda_text) {
        const auto ls = parse_double_list(*flags.lambda_text);
        if (cfg.contains("lambdas")) {
            cfg["lambdas"] = ls;
        } else {
            if (ls.size() != 1)
                throw std::invalid_argument("run " + flags.preset + ": --lambda takes a single value");
            cfg["lambda"] = ls.front();
        }
    }
    if (flags.zeta_text) cfg["zeta"] = *flags.zeta_text;
    if (flags.trials) cfg["trials"] = *flags.trials;
    if (flags.seed) cfg["seed"] = *flags.seed;
    if (flags.workers) cfg["workers"] = *flags.workers;
    if (flags.lambda_rest) cfg["lambda_rest"] = *flags.lambda_rest;
    if (flags.q) cfg["q"] = *flags.q;
    if (flags.exponent) cfg["exponent"] = *flags.exponent;
    if (flags.omega) cfg["omega"] = *flags.omega;
    if (flags.min_size) cfg["min_size"] = *flags.min_size;

    caperc::experiments::PresetOutput out = dispatch_preset(flags.preset, cfg);
    out.manifest["effective_config"] = cfg;

    const std::string dir = flags.out_dir.empty() ? "caperc-out-" + flags.preset : flags.out_dir;
    caperc::experiments::write_outputs(out, dir);

    if (!flags.quiet) {
        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& v : out.verdict_rows)
            std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.claim << ": observed " << v.observed
                      << " (tolerance " << v.tolerance << ")\n";
        std::cout << (out.all_pass() ? "all verdicts passed" : "some verdicts FAILED")
                  << "; outputs in " << dir << "\n";
    }
    return out.all_pass() ? exit_ok : exit_verdict;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(std::uint64_t instances, std::uint64_t edge_instances, std::uint64_t seed) {
    const auto oracle = caperc::selftest::oracle_equivalence_check(instances, seed);
    std::cout << "oracle equivalence: " << oracle.checked << " instances, " << oracle.mismatches
              << " mismatches";
    if (oracle.mismatches > 0) std::cout << " (first: " << oracle.first_failure << ")";
    std::cout << "\n";

    const auto mono = caperc::selftest::edge_monotonicity_check(edge_instances, seed);
    std::cout << "edge monotonicity: " << mono.checked << " instances (" << mono.skipped
              << " skipped), " << mono.violations << " violations";
    if (mono.violations > 0) std::cout << " (first: " << mono.first_failure << ")";
    std::cout << "\n";

    return (oracle.mismatches == 0 && mono.violations == 0) ? exit_ok : exit_verdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"color-avoiding percolation toolkit"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "sample the k-layer model, emit an edge list");
    std::string sample_n, sample_lambda, sample_out;
    std::uint64_t sample_seed = 1;
    sample->add_option("--n", sample_n, "vertex count (scientific notation ok)")->required();
    sample->add_option("--lambda", sample_lambda, "comma-separated intensities, one per color")
        ->required();
    sample->add_option("--seed", sample_seed, "graph seed");
    sample->add_option("--out", sample_out, "output path (default stdout)");
    int sample_k = 0;
    sample->add_option("--k", sample_k, "color count (checked against --lambda when given)");

    // ca
    auto* ca = app.add_subcommand("ca", "read an edge list, emit the CA partition and census");
    std::string ca_in, ca_out, ca_census_path;
    ca->add_option("--in", ca_in, "input edge list (default stdin)");
    ca->add_option("--out", ca_out, "partition CSV path (default stdout)");
    ca->add_option("--census", ca_census_path, "also write the CA census CSV here");

    // theory
    auto* theory = app.add_subcommand("theory", "print a closed-form predictor as JSON");
    std::string predictor;
    theory->add_option("predictor", predictor, "predictor name")->required();
    TheoryArgs targs;
    theory->add_option("--t", targs.t);
    theory->add_option("--lambda", targs.lambda);
    theory->add_option("--s", targs.s);
    theory->add_option("--omega", targs.omega);
    theory->add_option("--q", targs.q);
    theory->add_option("--m", targs.m);
    theory->add_option("--mu", targs.mu);
    theory->add_option("--delta", targs.delta);
    theory->add_option("--window-tolerance", targs.window_tolerance);
    theory->add_option("--n", targs.n_text);
    theory->add_option("--lambdas", targs.lambda_list);
    theory->add_option("--colors", targs.colors);

    // run
    auto* run = app.add_subcommand("run", "run an experiment preset");
    RunFlags rflags;
    run->add_option("preset", rflags.preset,
                    "regime-scaling | critical-window | tree-census | black-threshold | "
                    "poisson-small-components | giant-lln | intersection-structure")
        ->required();
    run->add_option("--n", rflags.n_text,
                    "n grid, comma-separated (single value for single-n presets)");
    run->add_option("--lambda", rflags.lambda_text, "intensity list (or single intensity)");
    run->add_option("--zeta", rflags.zeta_text, "inv-log | inv-sqrt | <number>");
    run->add_option("--trials", rflags.trials);
    run->add_option("--seed", rflags.seed);
    run->add_option("--workers", rflags.workers);
    run->add_option("--lambda-rest", rflags.lambda_rest);
    run->add_option("--q", rflags.q);
    run->add_option("--exponent", rflags.exponent);
    run->add_option("--omega", rflags.omega);
    run->add_option("--min-size", rflags.min_size);
    run->add_option("--out", rflags.out_dir, "output directory");
    run->add_option("--config", rflags.config_path, "JSON config file (flags take precedence)");
    run->add_flag("--quiet", rflags.quiet, "suppress the verdict summary");

    // verify
    auto* verify = app.add_subcommand("verify", "oracle-equivalence and monotonicity self-test");
    std::uint64_t verify_instances = 1000, verify_edges = 500, verify_seed = 1;
    verify->add_option("--instances", verify_instances, "oracle-equivalence instance count");
    verify->add_option("--edge-instances", verify_edges, "monotonicity instance count");
    verify->add_option("--seed", verify_seed, "self-test seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (sample->parsed()) {
            if (sample_k != 0) {
                const auto ls = parse_double_list(sample_lambda);
                if (static_cast<int>(ls.size()) != sample_k)
                    throw std::invalid_argument("sample: --k disagrees with --lambda length");
            }
            return cmd_sample(sample_n, sample_lambda, sample_seed, sample_out);
        }
        if (ca->parsed()) return cmd_ca(ca_in, ca_out, ca_census_path);
        if (theory->parsed()) return cmd_theory(predictor, targs);
        if (run->parsed()) return cmd_run(rflags);
        if (verify->parsed()) return cmd_verify(verify_instances, verify_edges, verify_seed);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }
    return exit_usage;
}

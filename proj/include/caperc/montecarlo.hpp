#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "caperc/census.hpp"
#include "caperc/connectivity.hpp"
#include "caperc/model.hpp"
#include "caperc/rng.hpp"
#include "caperc/version.hpp"

namespace caperc {

/// Which statistics a trial computes. View censuses run on the union view
/// of the given color sets; the black threshold runs on `black_view`.
struct MetricsRequest {
    bool ca = false;
    std::vector<ColorSet> view_census;
    std::optional<double> black_q;
    ColorSet black_view;
    bool intersection_check = false;
    std::uint64_t intersection_min_size = 4;
};

struct TrialSpec {
    ModelParams params;
    MetricsRequest metrics;
    std::uint64_t master_seed = 0;
    std::uint32_t trial_count = 1;
};

struct TrialResult {
    std::uint32_t trial_index = 0;
    std::uint64_t graph_seed = 0;
    std::uint64_t black_seed = 0;  // 0 when no black coloring was drawn
    std::map<std::string, double> scalars;
    std::map<std::string, std::map<std::uint64_t, std::uint64_t>> hists;

    friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Short deterministic tag naming a union view in metric keys: "g1", "g1-3".
inline std::string view_tag(const ColorSet& I) {
    std::string tag = "g";
    bool first = true;
    for (int c : I.colors()) {
        if (!first) tag += '-';
        tag += std::to_string(c);
        first = false;
    }
    return tag;
}

namespace detail {

inline std::pair<std::uint64_t, std::uint64_t> largest_two_sizes(
    const std::map<std::uint64_t, std::uint64_t>& size_hist) {
    std::uint64_t largest = 0, second = 0;
    for (auto it = size_hist.rbegin(); it != size_hist.rend(); ++it) {
        if (largest == 0) {
            largest = it->first;
            if (it->second >= 2) {
                second = it->first;
                break;
            }
        } else {
            second = it->first;
            break;
        }
    }
    return {largest, second};
}

}  // namespace detail

inline TrialResult run_single_trial(const TrialSpec& spec, std::uint32_t trial_index) {
    const auto& req = spec.metrics;
    TrialResult r;
    r.trial_index = trial_index;
    r.graph_seed = derive_seed(spec.master_seed, trial_index, seed_tag::graph);
    const ColoredMultigraph g = sample_model(spec.params, r.graph_seed);
    const std::uint64_t n = g.n();

    std::optional<CaPartition> cap;
    if (req.ca || req.intersection_check) cap = ca_partition(g);

    if (req.ca) {
        const CaCensus cc = ca_census(*cap, g.k());
        r.scalars["max_ca"] = static_cast<double>(cc.max_ca_size);
        for (const auto& [l, count] : cc.small_counts)
            r.scalars["ca_n" + std::to_string(l)] = static_cast<double>(count);
        std::map<std::uint64_t, std::uint64_t> hist(cc.size_hist.begin(), cc.size_hist.end());
        r.hists["ca_size"] = std::move(hist);
    }

    // labelings computed per distinct view, shared with the black threshold
    std::map<std::uint64_t, Labeling> view_labels;
    auto labeling_of_view = [&](const ColorSet& I, const std::vector<Edge>& edges) -> const Labeling& {
        auto it = view_labels.find(I.mask());
        if (it == view_labels.end())
            it = view_labels.emplace(I.mask(), components(n, std::span<const Edge>(edges))).first;
        return it->second;
    };

    for (const ColorSet& I : req.view_census) {
        const std::vector<Edge> edges = layer_union_view(g, I);
        const Labeling& lab = labeling_of_view(I, edges);
        const ComponentCensus c = census(lab, edges);
        const std::string tag = view_tag(I);
        const auto [largest, second] = detail::largest_two_sizes(c.size_hist);
        r.scalars[tag + "_max"] = static_cast<double>(largest);
        r.scalars[tag + "_second"] = static_cast<double>(second);
        r.scalars[tag + "_cyclic_components"] = static_cast<double>(c.cyclic_components);
        r.scalars[tag + "_cyclic_vertices"] = static_cast<double>(c.cyclic_vertices);
        r.hists[tag + "_size"] = c.size_hist;
        r.hists[tag + "_trees"] = c.tree_counts;
    }

    if (req.black_q) {
        r.black_seed = derive_seed(spec.master_seed, trial_index, seed_tag::black);
        const BlackColoring marks = black_coloring(n, *req.black_q, r.black_seed);
        const std::vector<Edge> edges = layer_union_view(g, req.black_view);
        const Labeling& lab = labeling_of_view(req.black_view, edges);
        const BlackThreshold bt = black_threshold(lab, marks);
        r.scalars["black_max_s"] = static_cast<double>(bt.max_s);
        r.hists["black_z"] = bt.z;
    }

    if (req.intersection_check) {
        const int k = g.k();
        const Labeling lab_last_layer = components(n, g.layer(k));         // G_k alone
        const Labeling& lab_comp = cap->source_labels[static_cast<std::size_t>(k - 1)];  // G^k

        std::vector<std::uint32_t> comp_size(n, 0);
        for (std::uint64_t v = 0; v < n; ++v) ++comp_size[lab_comp.comp_id[v]];
        Vertex giant_rep = 0;
        std::uint32_t giant_size = 0;
        for (std::uint64_t v = 0; v < n; ++v)
            if (lab_comp.comp_id[v] == v && comp_size[v] > giant_size) {
                giant_size = comp_size[v];
                giant_rep = static_cast<Vertex>(v);
            }

        std::vector<std::uint32_t> ca_size(n, 0);
        for (std::uint64_t v = 0; v < n; ++v) ++ca_size[cap->labeling.comp_id[v]];

        // per CA-component flags: 1 = checked, 2 = split in G_k, 4 = outside giant of G^k
        std::vector<std::uint8_t> flags(n, 0);
        for (std::uint64_t v = 0; v < n; ++v) {
            const Vertex rep = cap->labeling.comp_id[v];
            if (ca_size[rep] < req.intersection_min_size) continue;
            flags[rep] |= 1;
            if (!lab_last_layer.same(static_cast<Vertex>(v), rep)) flags[rep] |= 2;
            if (lab_comp.comp_id[v] != giant_rep) flags[rep] |= 4;
        }
        std::uint64_t checked = 0, split = 0, outside = 0;
        for (std::uint64_t v = 0; v < n; ++v) {
            if (!(flags[v] & 1)) continue;
            ++checked;
            if (flags[v] & 2) ++split;
            if (flags[v] & 4) ++outside;
        }
        r.scalars["ca_checked"] = static_cast<double>(checked);
        r.scalars["ca_split_gk"] = static_cast<double>(split);
        r.scalars["ca_outside_giant"] = static_cast<double>(outside);
    }

    return r;
}

/// Runs T trials on a worker pool. Trial t depends only on (spec, t), so
/// the result list is identical for any worker count. Any trial failure
/// aborts the run with the trial index attached.
inline std::vector<TrialResult> run_trials(const TrialSpec& spec, unsigned workers = 1) {
    if (spec.trial_count < 1) throw std::invalid_argument("run_trials: trial_count must be >= 1");
    if (workers < 1) throw std::invalid_argument("run_trials: workers must be >= 1");
    const std::uint32_t trials = spec.trial_count;
    std::vector<TrialResult> results(trials);

    if (workers == 1 || trials == 1) {
        for (std::uint32_t t = 0; t < trials; ++t) results[t] = run_single_trial(spec, t);
        return results;
    }

    std::atomic<std::uint32_t> next{0};
    std::mutex err_mutex;
    std::uint32_t err_trial = trials;
    std::string err_message;
    auto worker = [&] {
        while (true) {
            const std::uint32_t t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                results[t] = run_single_trial(spec, t);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (t < err_trial) {
                    err_trial = t;
                    err_message = e.what();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(workers, trials);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err_trial < trials)
        throw std::runtime_error("trial " + std::to_string(err_trial) + ": " + err_message);
    return results;
}

/// Cross-trial summary for one scalar metric. Quantiles use the
/// nearest-rank rule: the q% quantile of N sorted values is the value at
/// rank ceil(q N / 100), 1-based.
struct MetricStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double sd = 0.0;  // unbiased; 0 with sd_defined=false when count == 1
    bool sd_defined = false;
    double min = 0.0;
    double max = 0.0;
    double q01 = 0.0, q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0, q99 = 0.0;
};

struct Aggregate {
    std::uint64_t trial_count = 0;
    std::map<std::string, MetricStats> scalars;
    std::map<std::string, std::map<std::uint64_t, std::uint64_t>> pooled_hists;
};

inline double nearest_rank_quantile(const std::vector<double>& sorted, double q_percent) {
    const std::uint64_t n = sorted.size();
    std::uint64_t rank =
        static_cast<std::uint64_t>(std::ceil(q_percent / 100.0 * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

inline MetricStats compute_stats(std::vector<double> vals) {
    if (vals.empty()) throw std::invalid_argument("compute_stats: empty input");
    std::sort(vals.begin(), vals.end());
    MetricStats st;
    st.count = vals.size();
    double sum = 0.0;
    for (double v : vals) sum += v;
    st.mean = sum / static_cast<double>(st.count);
    if (st.count > 1) {
        double ss = 0.0;
        for (double v : vals) ss += (v - st.mean) * (v - st.mean);
        st.sd = std::sqrt(ss / static_cast<double>(st.count - 1));
        st.sd_defined = true;
    }
    st.min = vals.front();
    st.max = vals.back();
    st.q01 = nearest_rank_quantile(vals, 1);
    st.q05 = nearest_rank_quantile(vals, 5);
    st.q25 = nearest_rank_quantile(vals, 25);
    st.q50 = nearest_rank_quantile(vals, 50);
    st.q75 = nearest_rank_quantile(vals, 75);
    st.q95 = nearest_rank_quantile(vals, 95);
    st.q99 = nearest_rank_quantile(vals, 99);
    return st;
}

inline Aggregate aggregate(std::span<const TrialResult> results) {
    if (results.empty()) throw std::invalid_argument("aggregate: empty input");
    Aggregate out;
    out.trial_count = results.size();

    std::map<std::string, std::vector<double>> values;
    for (const TrialResult& r : results)
        for (const auto& [name, v] : r.scalars) values[name].push_back(v);
    for (auto& [name, vals] : values) {
        if (vals.size() != results.size())
            throw std::invalid_argument("aggregate: metric '" + name + "' missing in some trials");
        out.scalars[name] = compute_stats(std::move(vals));
    }

    for (const TrialResult& r : results)
        for (const auto& [name, hist] : r.hists) {
            auto& pooled = out.pooled_hists[name];
            for (const auto& [key, count] : hist) pooled[key] += count;
        }
    return out;
}

/// Reproducibility manifest: parameter echo, software version, master seed,
/// per-trial stream seeds, wall time.
inline nlohmann::json manifest_json(const TrialSpec& spec, std::span<const TrialResult> results,
                                    double wall_seconds) {
    nlohmann::json j;
    j["software_version"] = version;
    j["master_seed"] = spec.master_seed;
    j["trial_count"] = spec.trial_count;
    j["params"] = {{"n", spec.params.n},
                   {"k", spec.params.k},
                   {"lambdas", spec.params.lambdas},
                   {"lambda_total", spec.params.lambda_total},
                   {"lambda_star", spec.params.lambda_star}};
    nlohmann::json metrics;
    metrics["ca"] = spec.metrics.ca;
    std::vector<std::string> views;
    for (const auto& I : spec.metrics.view_census) views.push_back(I.to_string());
    metrics["view_census"] = views;
    if (spec.metrics.black_q) {
        metrics["black_q"] = *spec.metrics.black_q;
        metrics["black_view"] = spec.metrics.black_view.to_string();
    }
    metrics["intersection_check"] = spec.metrics.intersection_check;
    if (spec.metrics.intersection_check)
        metrics["intersection_min_size"] = spec.metrics.intersection_min_size;
    j["metrics"] = metrics;
    nlohmann::json trials = nlohmann::json::array();
    for (const TrialResult& r : results) {
        nlohmann::json t;
        t["index"] = r.trial_index;
        t["graph_seed"] = r.graph_seed;
        if (r.black_seed != 0) t["black_seed"] = r.black_seed;
        trials.push_back(t);
    }
    j["trials"] = trials;
    j["wall_time_seconds"] = wall_seconds;
    return j;
}

}  // namespace caperc

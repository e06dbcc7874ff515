#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "caperc/connectivity.hpp"
#include "caperc/model.hpp"
#include "caperc/rng.hpp"

namespace caperc {

/// Per-component statistics of a plain graph: size histogram, tree counts
/// (components with exactly size-1 edges), and cyclic-component totals.
struct ComponentCensus {
    std::map<std::uint64_t, std::uint64_t> size_hist;   // size -> #components
    std::uint64_t max_size = 0;
    std::map<std::uint64_t, std::uint64_t> tree_counts;  // size -> #tree components
    std::uint64_t cyclic_components = 0;
    std::uint64_t cyclic_vertices = 0;
};

inline ComponentCensus census(const Labeling& labeling, std::span<const Edge> edges) {
    const std::uint64_t n = labeling.size();
    std::vector<std::uint32_t> size_of(n, 0);
    std::vector<std::uint32_t> edges_of(n, 0);
    for (std::uint64_t v = 0; v < n; ++v) ++size_of[labeling.comp_id[v]];
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("census: endpoint out of range");
        if (labeling.comp_id[e.u] != labeling.comp_id[e.v])
            throw std::invalid_argument("census: edge crosses components, labeling inconsistent");
        ++edges_of[labeling.comp_id[e.u]];
    }
    ComponentCensus out;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (labeling.comp_id[v] != v) continue;  // representatives only
        const std::uint64_t s = size_of[v];
        const std::uint64_t m = edges_of[v];
        ++out.size_hist[s];
        if (s > out.max_size) out.max_size = s;
        if (m == s - 1) {
            ++out.tree_counts[s];
        } else {
            ++out.cyclic_components;
            out.cyclic_vertices += s;
        }
    }
    return out;
}

/// CA-component statistics: size histogram, maximum size, and the counts
/// N_l of CA-components of size exactly l for l = 2..k.
struct CaCensus {
    std::map<std::uint64_t, std::uint64_t> size_hist;
    std::uint64_t max_ca_size = 0;
    std::map<int, std::uint64_t> small_counts;  // l -> N_l, l in 2..k
};

inline CaCensus ca_census(const CaPartition& p, int k) {
    const std::uint64_t n = p.labeling.size();
    std::vector<std::uint32_t> size_of(n, 0);
    for (std::uint64_t v = 0; v < n; ++v) ++size_of[p.labeling.comp_id[v]];
    CaCensus out;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (p.labeling.comp_id[v] != v) continue;
        const std::uint64_t s = size_of[v];
        ++out.size_hist[s];
        if (s > out.max_ca_size) out.max_ca_size = s;
    }
    for (int l = 2; l <= k; ++l) {
        auto it = out.size_hist.find(static_cast<std::uint64_t>(l));
        out.small_counts[l] = (it == out.size_hist.end()) ? 0 : it->second;
    }
    return out;
}

/// I.i.d. Bernoulli(q) vertex marks, drawn from a stream disjoint from
/// graph sampling so marks and graph are independent by construction.
struct BlackColoring {
    double q = 0.0;
    std::uint64_t seed = 0;
    std::vector<bool> black;

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (bool b : black) c += b;
        return c;
    }
};

inline BlackColoring black_coloring(std::uint64_t n, double q, std::uint64_t seed) {
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("black_coloring: q must be in (0,1]");
    BlackColoring out;
    out.q = q;
    out.seed = seed;
    out.black.resize(n);
    Rng rng(seed);
    for (std::uint64_t v = 0; v < n; ++v) out.black[v] = rng.bernoulli(q);
    return out;
}

/// Z_s = number of components holding at least s black vertices, for
/// s = 1..max_s; max_s is the largest black count over components.
struct BlackThreshold {
    std::uint64_t max_s = 0;
    std::map<std::uint64_t, std::uint64_t> z;  // s -> Z_s, non-increasing in s
};

inline BlackThreshold black_threshold(const Labeling& labeling, const BlackColoring& blacks) {
    const std::uint64_t n = labeling.size();
    if (blacks.black.size() != n) throw std::invalid_argument("black_threshold: size mismatch");
    std::vector<std::uint32_t> black_of(n, 0);
    for (std::uint64_t v = 0; v < n; ++v)
        if (blacks.black[v]) ++black_of[labeling.comp_id[v]];
    // histogram of per-component black counts, then suffix sums
    std::map<std::uint64_t, std::uint64_t> count_hist;
    BlackThreshold out;
    for (std::uint64_t v = 0; v < n; ++v) {
        if (labeling.comp_id[v] != v) continue;
        const std::uint64_t b = black_of[v];
        if (b == 0) continue;
        ++count_hist[b];
        if (b > out.max_s) out.max_s = b;
    }
    std::uint64_t running = 0;
    for (auto it = count_hist.rbegin(); it != count_hist.rend(); ++it) {
        running += it->second;
        out.z[it->first] = running;
    }
    // fill gaps so z is defined (and non-increasing) on 1..max_s
    std::uint64_t prev = 0;
    for (std::uint64_t s = out.max_s; s >= 1; --s) {
        auto it = out.z.find(s);
        if (it == out.z.end())
            out.z[s] = prev;
        else
            prev = it->second;
    }
    return out;
}

}  // namespace caperc

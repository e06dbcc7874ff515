#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "caperc/census.hpp"
#include "caperc/connectivity.hpp"
#include "caperc/model.hpp"
#include "caperc/rng.hpp"

namespace caperc::selftest {

// Random small instances: n in 1..max_n, k in {2,3,4}, per-layer edge
// probability drawn from {0.1, ..., 0.9}.
inline ColoredMultigraph random_instance(Rng& rng, std::uint64_t max_n, std::uint64_t seed) {
    const std::uint64_t n = 1 + rng.next_u64() % max_n;
    const int k = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<double> lambdas;
    for (int i = 0; i < k; ++i) {
        const double p = 0.1 * static_cast<double>(1 + rng.next_u64() % 9);
        lambdas.push_back(p * static_cast<double>(n));
    }
    return sample_model(ModelParams(n, std::move(lambdas)), seed);
}

struct OracleReport {
    std::uint64_t checked = 0;
    std::uint64_t mismatches = 0;
    std::string first_failure;
};

/// ca_partition against the transitive-closure oracle on random instances.
inline OracleReport oracle_equivalence_check(std::uint64_t instances, std::uint64_t master_seed,
                                             std::uint64_t max_n = 12) {
    OracleReport report;
    Rng gen(derive_seed(master_seed, 0, 0x73656c66ULL));
    for (std::uint64_t i = 0; i < instances; ++i) {
        const std::uint64_t graph_seed = derive_seed(master_seed, i + 1, 0x6f7261636cULL);
        const ColoredMultigraph g = random_instance(gen, max_n, graph_seed);
        ++report.checked;
        const CaPartition fast = ca_partition(g);
        const CaPartition slow = ca_oracle(g);
        if (fast.labeling != slow.labeling) {
            ++report.mismatches;
            if (report.first_failure.empty())
                report.first_failure = "instance " + std::to_string(i) + " (n=" +
                                       std::to_string(g.n()) + ", k=" + std::to_string(g.k()) + ")";
        }
    }
    return report;
}

struct MonotonicityReport {
    std::uint64_t checked = 0;
    std::uint64_t skipped = 0;  // instances where every layer was complete
    std::uint64_t violations = 0;
    std::string first_failure;
};

/// Adding one edge of any color must never increase the CA-component count.
/// Draws fresh instances until `instances` of them had an edge to add.
inline MonotonicityReport edge_monotonicity_check(std::uint64_t instances,
                                                  std::uint64_t master_seed,
                                                  std::uint64_t max_n = 12) {
    MonotonicityReport report;
    Rng gen(derive_seed(master_seed, 0, 0x6d6f6e6fULL));
    for (std::uint64_t i = 0; report.checked < instances; ++i) {
        const std::uint64_t graph_seed = derive_seed(master_seed, i + 1, 0x6d6f6e6fULL);
        const ColoredMultigraph g = random_instance(gen, max_n, graph_seed);
        if (g.n() < 2) {
            ++report.skipped;
            continue;
        }
        // pick a random color whose layer is not complete, then a missing pair
        const std::uint64_t pairs = g.n() * (g.n() - 1) / 2;
        int color = 0;
        {
            const int offset = static_cast<int>(gen.next_u64() % static_cast<std::uint64_t>(g.k()));
            for (int i = 0; i < g.k(); ++i) {
                const int c = 1 + (offset + i) % g.k();
                if (g.layer(c).size() < pairs) {
                    color = c;
                    break;
                }
            }
        }
        if (color == 0) {  // every layer complete: nothing to add
            ++report.skipped;
            continue;
        }
        Edge extra{0, 0};
        bool found = false;
        while (!found) {
            Vertex u = static_cast<Vertex>(gen.next_u64() % g.n());
            Vertex v = static_cast<Vertex>(gen.next_u64() % g.n());
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            const auto layer = g.layer(color);
            if (!std::binary_search(layer.begin(), layer.end(), Edge{u, v})) {
                extra = Edge{u, v};
                found = true;
            }
        }
        std::vector<std::vector<Edge>> layers;
        for (int c = 1; c <= g.k(); ++c) {
            auto span = g.layer(c);
            layers.emplace_back(span.begin(), span.end());
        }
        layers[static_cast<std::size_t>(color - 1)].push_back(extra);
        const ColoredMultigraph augmented(g.n(), std::move(layers));

        ++report.checked;
        const std::uint64_t before = ca_partition(g).labeling.component_count();
        const std::uint64_t after = ca_partition(augmented).labeling.component_count();
        if (after > before) {
            ++report.violations;
            if (report.first_failure.empty())
                report.first_failure = "instance " + std::to_string(i) + " (n=" +
                                       std::to_string(g.n()) + ", k=" + std::to_string(g.k()) +
                                       ", +edge " + std::to_string(extra.u) + "-" +
                                       std::to_string(extra.v) + " color " +
                                       std::to_string(color) + ")";
        }
    }
    return report;
}

}  // namespace caperc::selftest

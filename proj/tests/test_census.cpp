#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "caperc/census.hpp"
#include "caperc/selftest.hpp"

using namespace caperc;

namespace {

// Independent cycle detector: DFS back-edge search per component.
std::set<Vertex> cyclic_component_reps(std::uint64_t n, const std::vector<Edge>& edges,
                                       const Labeling& lab) {
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::set<Vertex> cyclic;
    std::vector<int> state(n, 0);
    std::vector<Vertex> par(n, 0);
    for (Vertex start = 0; start < n; ++start) {
        if (state[start] != 0) continue;
        state[start] = 1;
        par[start] = start;
        std::vector<Vertex> dfs{start};
        while (!dfs.empty()) {
            const Vertex u = dfs.back();
            dfs.pop_back();
            for (Vertex w : adj[u]) {
                if (state[w] == 0) {
                    state[w] = 1;
                    par[w] = u;
                    dfs.push_back(w);
                } else if (w != par[u]) {
                    cyclic.insert(lab.comp_id[u]);
                }
            }
        }
    }
    return cyclic;
}

}  // namespace

TEST_CASE("census on hand examples") {
    SECTION("isolated vertices are size-1 trees") {
        const Labeling lab = components(3, {});
        const ComponentCensus c = census(lab, {});
        CHECK(c.size_hist == std::map<std::uint64_t, std::uint64_t>{{1, 3}});
        CHECK(c.tree_counts == std::map<std::uint64_t, std::uint64_t>{{1, 3}});
        CHECK(c.cyclic_components == 0);
        CHECK(c.max_size == 1);
    }
    SECTION("a triangle is cyclic") {
        const std::vector<Edge> edges{Edge{0, 1}, Edge{1, 2}, Edge{0, 2}};
        const Labeling lab = components(3, std::span<const Edge>(edges));
        const ComponentCensus c = census(lab, edges);
        CHECK(c.size_hist == std::map<std::uint64_t, std::uint64_t>{{3, 1}});
        CHECK(c.tree_counts.empty());
        CHECK(c.cyclic_components == 1);
        CHECK(c.cyclic_vertices == 3);
    }
    SECTION("mixed forest") {
        const std::vector<Edge> edges{Edge{0, 1}, Edge{1, 2}, Edge{3, 4}};
        const Labeling lab = components(6, std::span<const Edge>(edges));
        const ComponentCensus c = census(lab, edges);
        CHECK(c.size_hist == std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}, {3, 1}});
        CHECK(c.tree_counts == std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}, {3, 1}});
        CHECK(c.max_size == 3);
    }
}

TEST_CASE("census rejects labelings inconsistent with the edges") {
    const Labeling lab = components(4, {});
    CHECK_THROWS_AS(census(lab, std::vector<Edge>{Edge{0, 1}}), std::invalid_argument);
}

TEST_CASE("census conserves mass and matches a DFS cycle check") {
    Rng rng(19);
    for (int it = 0; it < 40; ++it) {
        const std::uint64_t n = 10 + rng.next_u64() % 190;
        const double lambda = 0.3 + 0.1 * static_cast<double>(rng.next_u64() % 12);
        const auto g =
            sample_model(ModelParams(n, {lambda, 0.2}), 4000 + static_cast<std::uint64_t>(it));
        const std::vector<Edge> edges = layer_union_view(g, ColorSet(2, {1}));
        const Labeling lab = components(n, std::span<const Edge>(edges));
        const ComponentCensus c = census(lab, edges);

        std::uint64_t mass = 0;
        for (const auto& [s, cnt] : c.size_hist) mass += s * cnt;
        CHECK(mass == n);
        for (const auto& [s, cnt] : c.tree_counts) CHECK(cnt <= c.size_hist.at(s));

        std::uint64_t non_tree = 0;
        for (const auto& [s, cnt] : c.size_hist) {
            const auto it2 = c.tree_counts.find(s);
            non_tree += cnt - (it2 == c.tree_counts.end() ? 0 : it2->second);
        }
        CHECK(non_tree == c.cyclic_components);

        const auto cyclic = cyclic_component_reps(n, edges, lab);
        CHECK(cyclic.size() == c.cyclic_components);
    }
}

TEST_CASE("ca census on hand examples") {
    SECTION("all singletons") {
        CaPartition p;
        p.labeling = components(4, {});
        const CaCensus c = ca_census(p, 2);
        CHECK(c.max_ca_size == 1);
        CHECK(c.small_counts.at(2) == 0);
    }
    SECTION("one class of size five") {
        CaPartition p;
        p.labeling.comp_id = {0, 0, 0, 0, 0};
        const CaCensus c = ca_census(p, 2);
        CHECK(c.max_ca_size == 5);
        CHECK(c.small_counts.at(2) == 0);
    }
    SECTION("sizes 2, 3, 1 with k = 3") {
        CaPartition p;
        p.labeling.comp_id = {0, 0, 2, 2, 2, 5};
        const CaCensus c = ca_census(p, 3);
        CHECK(c.small_counts.at(2) == 1);
        CHECK(c.small_counts.at(3) == 1);
        CHECK(c.max_ca_size == 3);
    }
}

TEST_CASE("black coloring basics") {
    CHECK_THROWS_AS(black_coloring(5, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(black_coloring(5, 1.5, 1), std::invalid_argument);

    const BlackColoring all = black_coloring(50, 1.0, 9);
    CHECK(all.count() == 50);

    const BlackColoring a = black_coloring(1000, 0.3, 42);
    const BlackColoring b = black_coloring(1000, 0.3, 42);
    CHECK(a.black == b.black);

    const std::uint64_t n = 1000000;
    const BlackColoring big = black_coloring(n, 0.5, 7);
    const double sigma = std::sqrt(static_cast<double>(n) * 0.25);
    CHECK(std::abs(static_cast<double>(big.count()) - 500000.0) < 5.0 * sigma);
}

TEST_CASE("black threshold on hand examples") {
    SECTION("no black vertices") {
        const Labeling lab = components(4, {});
        BlackColoring marks;
        marks.q = 0.5;
        marks.black.assign(4, false);
        const BlackThreshold bt = black_threshold(lab, marks);
        CHECK(bt.max_s == 0);
        CHECK(bt.z.empty());
    }
    SECTION("one fully black component") {
        const std::vector<Edge> edges{Edge{0, 1}, Edge{1, 2}};
        const Labeling lab = components(3, std::span<const Edge>(edges));
        BlackColoring marks;
        marks.q = 1.0;
        marks.black.assign(3, true);
        const BlackThreshold bt = black_threshold(lab, marks);
        CHECK(bt.max_s == 3);
        CHECK(bt.z == std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}, {3, 1}});
    }
    SECTION("two components, blacks 0, 2, 3") {
        const std::vector<Edge> edges{Edge{0, 1}, Edge{2, 3}, Edge{3, 4}};
        const Labeling lab = components(5, std::span<const Edge>(edges));
        BlackColoring marks;
        marks.q = 0.5;
        marks.black = {true, false, true, true, false};
        const BlackThreshold bt = black_threshold(lab, marks);
        CHECK(bt.max_s == 2);
        CHECK(bt.z == std::map<std::uint64_t, std::uint64_t>{{1, 2}, {2, 1}});
    }
}

TEST_CASE("cyclic components hold O(1) vertices per subcritical trial") {
    // lambda = 0.5 at n = 1e6: median cyclic vertex count over trials stays tiny
    std::vector<std::uint64_t> counts;
    for (std::uint64_t t = 0; t < 15; ++t) {
        const auto g = sample_model(ModelParams(1000000, {0.5, 1e-9}), derive_seed(88, t, 1));
        const auto edges = layer_union_view(g, ColorSet(2, {1}));
        const auto lab = components(g.n(), std::span<const Edge>(edges));
        counts.push_back(census(lab, edges).cyclic_vertices);
    }
    std::sort(counts.begin(), counts.end());
    CHECK(counts[counts.size() / 2] <= 20);
}

TEST_CASE("black threshold is monotone with a sharp maximum") {
    Rng rng(23);
    for (int it = 0; it < 30; ++it) {
        const std::uint64_t n = 20 + rng.next_u64() % 400;
        const auto g =
            sample_model(ModelParams(n, {0.8, 0.1}), 6000 + static_cast<std::uint64_t>(it));
        const std::vector<Edge> edges = layer_union_view(g, ColorSet(2, {1}));
        const Labeling lab = components(n, std::span<const Edge>(edges));
        const BlackColoring marks = black_coloring(n, 0.4, 6100 + static_cast<std::uint64_t>(it));
        const BlackThreshold bt = black_threshold(lab, marks);
        if (bt.max_s == 0) {
            CHECK(bt.z.empty());
            continue;
        }
        CHECK(bt.z.at(bt.max_s) >= 1);
        CHECK(bt.z.count(bt.max_s + 1) == 0);
        std::uint64_t prev = ~std::uint64_t{0};
        for (std::uint64_t s = 1; s <= bt.max_s; ++s) {
            REQUIRE(bt.z.count(s) == 1);
            CHECK(bt.z.at(s) <= prev);
            prev = bt.z.at(s);
        }
    }
}

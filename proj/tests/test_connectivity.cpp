#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include "caperc/connectivity.hpp"
#include "caperc/model.hpp"
#include "caperc/selftest.hpp"

using namespace caperc;

TEST_CASE("components on hand examples") {
    CHECK(components(4, {}).comp_id == std::vector<Vertex>{0, 1, 2, 3});
    CHECK(components(4, {Edge{0, 1}, Edge{2, 3}}).comp_id == std::vector<Vertex>{0, 0, 2, 2});
    CHECK(components(5, {Edge{0, 4}, Edge{4, 2}, Edge{1, 3}}).comp_id ==
          std::vector<Vertex>{0, 1, 0, 1, 0});
}

TEST_CASE("components rejects out-of-range endpoints") {
    CHECK_THROWS_AS(components(3, {Edge{0, 5}}), std::invalid_argument);
}

TEST_CASE("labeling invariants hold on random instances") {
    Rng rng(11);
    for (int it = 0; it < 100; ++it) {
        const auto g = selftest::random_instance(rng, 30, 100 + static_cast<std::uint64_t>(it));
        const Labeling lab = ca_partition(g).labeling;
        for (Vertex v = 0; v < g.n(); ++v) {
            CHECK(lab.comp_id[v] <= v);
            CHECK(lab.comp_id[lab.comp_id[v]] == lab.comp_id[v]);
        }
    }
}

TEST_CASE("ca partition on hand examples") {
    SECTION("two layers whose deletions disagree give singletons") {
        const ColoredMultigraph g(4, {{Edge{0, 1}, Edge{2, 3}}, {Edge{1, 2}}});
        const CaPartition p = ca_partition(g);
        CHECK(p.labeling.comp_id == std::vector<Vertex>{0, 1, 2, 3});
    }
    SECTION("the same edge in both layers connects its endpoints") {
        const ColoredMultigraph g(2, {{Edge{0, 1}}, {Edge{0, 1}}});
        CHECK(ca_partition(g).labeling.comp_id == std::vector<Vertex>{0, 0});
    }
    SECTION("complete layers give one class") {
        std::vector<Edge> complete;
        const std::uint64_t n = 6;
        for (Vertex u = 0; u + 1 < n; ++u)
            for (Vertex v = u + 1; v < n; ++v) complete.push_back(Edge{u, v});
        const ColoredMultigraph g(n, {complete, complete, complete});
        const Labeling lab = ca_partition(g).labeling;
        CHECK(lab.component_count() == 1);
        CHECK(lab.comp_id == std::vector<Vertex>(n, 0));
    }
}

TEST_CASE("single-color graphs are rejected") {
    const ColoredMultigraph g(3, {{Edge{0, 1}}});
    CHECK_THROWS_AS(ca_partition(g), std::invalid_argument);
    CHECK_THROWS_AS(ca_oracle(g), std::invalid_argument);
}

TEST_CASE("oracle basics") {
    const ColoredMultigraph one(1, {{}, {}});
    CHECK(ca_oracle(one).labeling.comp_id == std::vector<Vertex>{0});

    const ColoredMultigraph empty(3, {{}, {}});
    CHECK(ca_oracle(empty).labeling.comp_id == std::vector<Vertex>{0, 1, 2});

    const ColoredMultigraph big(70, std::vector<std::vector<Edge>>{{}, {}});
    CHECK_THROWS_AS(ca_oracle(big), std::invalid_argument);
    CHECK_THROWS_AS(ca_oracle(empty, 100), std::invalid_argument);
}

TEST_CASE("ca partition equals the oracle on random instances") {
    const auto report = selftest::oracle_equivalence_check(300, 2024);
    CHECK(report.checked == 300);
    CHECK(report.mismatches == 0);
}

TEST_CASE("ca partition refines every color-deleted partition") {
    Rng rng(13);
    for (int it = 0; it < 60; ++it) {
        const auto g = selftest::random_instance(rng, 25, 500 + static_cast<std::uint64_t>(it));
        const CaPartition p = ca_partition(g);
        for (Vertex u = 0; u < g.n(); ++u)
            for (Vertex v = u + 1; v < g.n(); ++v)
                if (p.labeling.same(u, v))
                    for (const Labeling& src : p.source_labels) CHECK(src.same(u, v));
    }
}

TEST_CASE("adding an edge never increases the CA-component count") {
    const auto report = selftest::edge_monotonicity_check(150, 99);
    CHECK(report.violations == 0);
    CHECK(report.checked > 100);
}

TEST_CASE("relabeling vertices permutes the partition") {
    Rng rng(17);
    for (int it = 0; it < 40; ++it) {
        const auto g = selftest::random_instance(rng, 15, 700 + static_cast<std::uint64_t>(it));
        const std::uint64_t n = g.n();
        std::vector<Vertex> perm(n);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        for (std::uint64_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.next_u64() % i]);

        std::vector<std::vector<Edge>> layers;
        for (int c = 1; c <= g.k(); ++c) {
            std::vector<Edge> mapped;
            for (const Edge& e : g.layer(c)) {
                Vertex a = perm[e.u], b = perm[e.v];
                if (a > b) std::swap(a, b);
                mapped.push_back(Edge{a, b});
            }
            layers.push_back(std::move(mapped));
        }
        const ColoredMultigraph h(n, std::move(layers));

        const Labeling lg = ca_partition(g).labeling;
        const Labeling lh = ca_partition(h).labeling;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                CHECK(lg.same(u, v) == lh.same(perm[u], perm[v]));
    }
}

TEST_CASE("partition csv has the documented columns") {
    const ColoredMultigraph g(2, {{Edge{0, 1}}, {Edge{0, 1}}});
    std::ostringstream out;
    write_ca_partition_csv(ca_partition(g), out);
    CHECK(out.str() ==
          "vertex,ca_comp_id,comp_id_minus_1,comp_id_minus_2\n0,0,0,0\n1,0,0,0\n");
}

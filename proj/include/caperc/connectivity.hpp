#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "caperc/model.hpp"

namespace caperc {

/// Canonical vertex partition: comp_id[v] is the smallest vertex index in
/// v's component, so representatives are fixed points and comp_id[v] <= v.
struct Labeling {
    std::vector<Vertex> comp_id;

    std::uint64_t size() const { return comp_id.size(); }
    bool same(Vertex u, Vertex v) const { return comp_id[u] == comp_id[v]; }

    std::uint64_t component_count() const {
        std::uint64_t c = 0;
        for (std::size_t v = 0; v < comp_id.size(); ++v)
            if (comp_id[v] == v) ++c;
        return c;
    }

    friend bool operator==(const Labeling&, const Labeling&) = default;
};

/// Union by size with full path compression. Static graphs only.
class UnionFind {
public:
    explicit UnionFind(std::uint64_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), Vertex{0});
    }

    Vertex find(Vertex v) {
        Vertex root = v;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[v] != root) {
            Vertex next = parent_[v];
            parent_[v] = root;
            v = next;
        }
        return root;
    }

    void unite(Vertex a, Vertex b) {
        Vertex ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
    }

    // Min-vertex canonical labeling: scanning v ascending, the first vertex
    // seen per root is the component minimum.
    Labeling to_labeling() {
        const std::uint64_t n = parent_.size();
        constexpr Vertex unseen = ~Vertex{0};
        std::vector<Vertex> min_rep(n, unseen);
        Labeling lab;
        lab.comp_id.resize(n);
        for (std::uint64_t v = 0; v < n; ++v) {
            Vertex r = find(static_cast<Vertex>(v));
            if (min_rep[r] == unseen) min_rep[r] = static_cast<Vertex>(v);
            lab.comp_id[v] = min_rep[r];
        }
        return lab;
    }

private:
    std::vector<Vertex> parent_;
    std::vector<Vertex> size_;
};

/// Connected components of an edge sequence over n vertices.
inline Labeling components(std::uint64_t n, std::span<const Edge> edges) {
    UnionFind uf(n);
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("components: endpoint out of range");
        uf.unite(e.u, e.v);
    }
    return uf.to_labeling();
}

inline Labeling components(std::uint64_t n, std::initializer_list<Edge> edges) {
    return components(n, std::span<const Edge>(edges.begin(), edges.size()));
}

/// Components of G^color (all layers except one), feeding layers straight
/// into union-find; no union view is materialized.
inline Labeling components_excluding(const ColoredMultigraph& g, int excluded_color) {
    UnionFind uf(g.n());
    for (int c = 1; c <= g.k(); ++c) {
        if (c == excluded_color) continue;
        for (const Edge& e : g.layer(c)) uf.unite(e.u, e.v);
    }
    return uf.to_labeling();
}

/// The color-avoiding partition together with the k color-deleted
/// labelings it refines (source_labels[i-1] = components of G^i).
struct CaPartition {
    Labeling labeling;
    std::vector<Labeling> source_labels;
};

namespace detail {

// Meet (common refinement) of two canonical labelings: sort (pair of
// labels, vertex) and relabel runs by their minimum vertex. Sorting keeps
// the result deterministic and canonical; ties inside a run are ordered by
// vertex, so the run head is the minimum.
inline std::vector<Vertex> meet_labels(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    const std::uint64_t n = a.size();
    std::vector<std::pair<std::uint64_t, Vertex>> keys(n);
    for (std::uint64_t v = 0; v < n; ++v)
        keys[v] = {(static_cast<std::uint64_t>(a[v]) << 32) | b[v], static_cast<Vertex>(v)};
    std::sort(keys.begin(), keys.end());
    std::vector<Vertex> out(n);
    std::uint64_t i = 0;
    while (i < n) {
        std::uint64_t j = i;
        const Vertex rep = keys[i].second;
        while (j < n && keys[j].first == keys[i].first) {
            out[keys[j].second] = rep;
            ++j;
        }
        i = j;
    }
    return out;
}

}  // namespace detail

/// CA-components: u ~ v iff they are connected in every color-deleted
/// graph G^i. Computed as the meet of the k per-color partitions.
inline CaPartition ca_partition(const ColoredMultigraph& g) {
    if (g.k() < 2) throw std::invalid_argument("ca_partition: need at least 2 colors");
    CaPartition out;
    out.source_labels.reserve(static_cast<std::size_t>(g.k()));
    for (int i = 1; i <= g.k(); ++i) out.source_labels.push_back(components_excluding(g, i));
    std::vector<Vertex> cur = out.source_labels.front().comp_id;
    for (int i = 1; i < g.k(); ++i)
        cur = detail::meet_labels(cur, out.source_labels[static_cast<std::size_t>(i)].comp_id);
    out.labeling = Labeling{std::move(cur)};
    return out;
}

/// Independent brute-force re-implementation of ca_partition for n <= cap
/// (cap <= 64): per-color Boolean transitive closure over bitmask rows,
/// AND-ed across colors, checked to be an equivalence relation.
inline CaPartition ca_oracle(const ColoredMultigraph& g, std::uint64_t cap = 64) {
    if (cap > 64) throw std::invalid_argument("ca_oracle: cap exceeds 64");
    if (g.n() > cap) throw std::invalid_argument("ca_oracle: n exceeds cap");
    if (g.k() < 2) throw std::invalid_argument("ca_oracle: need at least 2 colors");
    const std::uint64_t n = g.n();

    auto closure = [n](std::vector<std::uint64_t> reach) {
        for (std::uint64_t mid = 0; mid < n; ++mid)
            for (std::uint64_t u = 0; u < n; ++u)
                if ((reach[u] >> mid) & 1) reach[u] |= reach[mid];
        return reach;
    };
    auto to_labeling = [n](const std::vector<std::uint64_t>& reach) {
        Labeling lab;
        lab.comp_id.resize(n);
        for (std::uint64_t v = 0; v < n; ++v)
            lab.comp_id[v] = static_cast<Vertex>(std::countr_zero(reach[v]));
        return lab;
    };

    std::vector<std::uint64_t> ca_reach(n, ~std::uint64_t{0});
    if (n < 64) std::fill(ca_reach.begin(), ca_reach.end(), (std::uint64_t{1} << n) - 1);

    CaPartition out;
    for (int i = 1; i <= g.k(); ++i) {
        std::vector<std::uint64_t> reach(n, 0);
        for (std::uint64_t v = 0; v < n; ++v) reach[v] = std::uint64_t{1} << v;
        for (int c = 1; c <= g.k(); ++c) {
            if (c == i) continue;
            for (const Edge& e : g.layer(c)) {
                reach[e.u] |= std::uint64_t{1} << e.v;
                reach[e.v] |= std::uint64_t{1} << e.u;
            }
        }
        reach = closure(reach);
        out.source_labels.push_back(to_labeling(reach));
        for (std::uint64_t v = 0; v < n; ++v) ca_reach[v] &= reach[v];
    }

    // the intersection must be an equivalence relation
    for (std::uint64_t u = 0; u < n; ++u) {
        if (!((ca_reach[u] >> u) & 1)) throw std::logic_error("ca_oracle: relation not reflexive");
        for (std::uint64_t v = 0; v < n; ++v)
            if ((ca_reach[u] >> v) & 1) {
                if (ca_reach[v] != ca_reach[u])
                    throw std::logic_error("ca_oracle: relation not transitive/symmetric");
            }
    }
    out.labeling = to_labeling(ca_reach);
    return out;
}

/// Partition CSV: vertex, ca_comp_id, comp_id_minus_1..comp_id_minus_k.
inline void write_ca_partition_csv(const CaPartition& p, std::ostream& out) {
    out << "vertex,ca_comp_id";
    for (std::size_t i = 1; i <= p.source_labels.size(); ++i) out << ",comp_id_minus_" << i;
    out << "\n";
    for (std::uint64_t v = 0; v < p.labeling.size(); ++v) {
        out << v << ',' << p.labeling.comp_id[v];
        for (const Labeling& l : p.source_labels) out << ',' << l.comp_id[v];
        out << "\n";
    }
}

}  // namespace caperc

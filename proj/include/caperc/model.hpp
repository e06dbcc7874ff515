#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "caperc/rng.hpp"

namespace caperc {

using Vertex = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Model parameters: n vertices, k >= 2 colors, per-color intensities
/// lambda_1 >= ... >= lambda_k (sorted on construction). Layer i of the
/// model is an independent G(n, lambda_i / n).
struct ModelParams {
    std::uint64_t n = 0;
    int k = 0;
    std::vector<double> lambdas;      // non-increasing
    double lambda_total = 0.0;        // sum of lambdas, index-ascending order
    std::vector<double> lambda_star;  // lambda_total - lambdas[i], non-decreasing

    ModelParams() = default;

    ModelParams(std::uint64_t n_, std::vector<double> lambdas_) : n(n_), lambdas(std::move(lambdas_)) {
        if (n == 0) throw std::invalid_argument("ModelParams: n must be positive");
        if (n > 0xffffffffULL) throw std::invalid_argument("ModelParams: n exceeds 2^32-1");
        k = static_cast<int>(lambdas.size());
        if (k < 2) throw std::invalid_argument("ModelParams: need at least 2 colors");
        for (double l : lambdas) {
            if (!(l > 0.0) || !std::isfinite(l))
                throw std::invalid_argument("ModelParams: every lambda must be a positive finite real");
        }
        std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
        for (double l : lambdas) lambda_total += l;
        lambda_star.resize(lambdas.size());
        for (std::size_t i = 0; i < lambdas.size(); ++i) lambda_star[i] = lambda_total - lambdas[i];
    }
};

/// Subset of the color set {1..k}, k <= 64, stored as a bitmask.
class ColorSet {
public:
    ColorSet() = default;

    ColorSet(int k, std::initializer_list<int> colors) : k_(check_k(k)) {
        for (int c : colors) {
            if (c < 1 || c > k_) throw std::invalid_argument("ColorSet: color out of range");
            mask_ |= std::uint64_t{1} << (c - 1);
        }
    }

    static ColorSet none(int k) { return ColorSet(check_k(k), std::uint64_t{0}); }

    static ColorSet all(int k) {
        check_k(k);
        std::uint64_t m = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
        return ColorSet(k, m);
    }

    static ColorSet from_mask(int k, std::uint64_t mask) {
        check_k(k);
        if (k < 64 && (mask >> k) != 0) throw std::invalid_argument("ColorSet: mask wider than k");
        return ColorSet(k, mask);
    }

    int k() const { return k_; }
    std::uint64_t mask() const { return mask_; }
    bool contains(int color) const { return color >= 1 && color <= k_ && ((mask_ >> (color - 1)) & 1); }
    bool empty() const { return mask_ == 0; }
    int count() const { return static_cast<int>(__builtin_popcountll(mask_)); }

    ColorSet complement() const { return from_mask(k_, all(k_).mask_ ^ mask_); }

    std::vector<int> colors() const {
        std::vector<int> out;
        for (int c = 1; c <= k_; ++c)
            if (contains(c)) out.push_back(c);
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        for (int c : colors()) {
            if (s.size() > 1) s += ',';
            s += std::to_string(c);
        }
        return s + "}";
    }

    friend bool operator==(const ColorSet&, const ColorSet&) = default;

private:
    ColorSet(int k, std::uint64_t mask) : k_(k), mask_(mask) {}

    static int check_k(int k) {
        if (k < 0 || k > 64) throw std::invalid_argument("ColorSet: k must be in [0,64]");
        return k;
    }

    int k_ = 0;
    std::uint64_t mask_ = 0;
};

/// k simple edge layers over a shared vertex set {0..n-1}. Each layer is
/// kept sorted lexicographically with no duplicates; the same pair may
/// appear in several layers. Immutable after construction.
class ColoredMultigraph {
public:
    ColoredMultigraph(std::uint64_t n, std::vector<std::vector<Edge>> layers)
        : n_(n), layers_(std::move(layers)) {
        if (n_ > 0xffffffffULL) throw std::invalid_argument("graph: n exceeds 2^32-1");
        for (auto& layer : layers_) {
            if (!std::is_sorted(layer.begin(), layer.end())) std::sort(layer.begin(), layer.end());
            for (std::size_t i = 0; i < layer.size(); ++i) {
                const Edge& e = layer[i];
                if (e.u >= e.v) throw std::invalid_argument("graph: edge must have u < v");
                if (e.v >= n_) throw std::invalid_argument("graph: vertex out of range");
                if (i > 0 && layer[i - 1] == e)
                    throw std::invalid_argument("graph: duplicate edge within a layer");
            }
        }
    }

    std::uint64_t n() const { return n_; }
    int k() const { return static_cast<int>(layers_.size()); }
    std::span<const Edge> layer(int color) const {  // color is 1-based
        if (color < 1 || color > k()) throw std::invalid_argument("graph: color out of range");
        return layers_[static_cast<std::size_t>(color - 1)];
    }
    std::uint64_t edge_count() const {
        std::uint64_t m = 0;
        for (const auto& l : layers_) m += l.size();
        return m;
    }

    friend bool operator==(const ColoredMultigraph&, const ColoredMultigraph&) = default;

private:
    std::uint64_t n_;
    std::vector<std::vector<Edge>> layers_;
};

namespace detail {

// Map a linear index t in [0, n(n-1)/2) to the t-th pair (u,v), u < v,
// in lexicographic order. Row offsets S(r) = r(2n-1-r)/2; the float guess
// is corrected by exact integer comparisons.
inline Edge pair_at(std::uint64_t n, std::uint64_t t) {
    auto row_start = [n](std::uint64_t r) { return r * (2 * n - 1 - r) / 2; };
    const double nn = static_cast<double>(2 * n - 1);
    double disc = nn * nn - 8.0 * static_cast<double>(t);
    std::uint64_t u = static_cast<std::uint64_t>(
        std::max(0.0, std::floor((nn - std::sqrt(std::max(disc, 0.0))) / 2.0)));
    if (u > n - 2) u = n - 2;
    while (row_start(u + 1) <= t) ++u;
    while (row_start(u) > t) --u;
    std::uint64_t v = u + 1 + (t - row_start(u));
    return Edge{static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

// G(n,p) edge sampler in expected O(n + m): geometric jumps over the
// lexicographic pair order (Batagelj-Brandes), jump length by inverse CDF.
inline std::vector<Edge> sample_er_edges(std::uint64_t n, double p, Rng rng) {
    std::vector<Edge> edges;
    if (n < 2 || p <= 0.0) return edges;
    const std::uint64_t total = n * (n - 1) / 2;
    if (p >= 1.0) {
        edges.reserve(total);
        for (std::uint64_t t = 0; t < total; ++t) edges.push_back(pair_at(n, t));
        return edges;
    }
    edges.reserve(static_cast<std::size_t>(p * static_cast<double>(total) * 1.05) + 16);
    const double log1mp = std::log1p(-p);
    std::uint64_t pos = 0;
    while (pos < total) {
        const double u = rng.next_unit();
        const double jump = std::floor(std::log1p(-u) / log1mp);
        if (!(jump < static_cast<double>(total - pos))) break;
        pos += static_cast<std::uint64_t>(jump);
        if (pos >= total) break;
        edges.push_back(pair_at(n, pos));
        ++pos;
    }
    return edges;
}

}  // namespace detail

/// Draw the k-layer model: layer i is an independent G(n, lambda_i/n).
/// Layer i uses the sub-stream derive_seed(seed, 0, i), so identical
/// (params, seed) give a bit-identical graph and resampling one layer
/// cannot disturb another.
inline ColoredMultigraph sample_model(const ModelParams& params, std::uint64_t seed) {
    for (double l : params.lambdas)
        if (l > static_cast<double>(params.n))
            throw std::invalid_argument("sample_model: lambda exceeds n (edge probability > 1)");
    std::vector<std::vector<Edge>> layers;
    layers.reserve(static_cast<std::size_t>(params.k));
    for (int i = 1; i <= params.k; ++i) {
        const double p = params.lambdas[static_cast<std::size_t>(i - 1)] / static_cast<double>(params.n);
        layers.push_back(detail::sample_er_edges(
            params.n, p, Rng(derive_seed(seed, 0, static_cast<std::uint64_t>(i)))));
    }
    return ColoredMultigraph(params.n, std::move(layers));
}

/// Edge set of G_I (union of the layers in I), deduplicated and sorted.
inline std::vector<Edge> layer_union_view(const ColoredMultigraph& g, const ColorSet& I) {
    if (I.k() != g.k()) throw std::invalid_argument("layer_union_view: color set width != k");
    std::vector<Edge> out;
    int count = I.count();
    if (count == 0) return out;
    if (count == 1) {
        auto span = g.layer(I.colors().front());
        return std::vector<Edge>(span.begin(), span.end());
    }
    for (int c : I.colors()) {
        auto span = g.layer(c);
        out.insert(out.end(), span.begin(), span.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Edge set of G^I (union of the layers outside I).
inline std::vector<Edge> layer_complement_view(const ColoredMultigraph& g, const ColorSet& I) {
    return layer_union_view(g, I.complement());
}

}  // namespace caperc

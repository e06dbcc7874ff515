#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "caperc/model.hpp"

namespace caperc {

/// Parse/serialization failure carrying the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::uint64_t line)
        : std::runtime_error(what + ", line " + std::to_string(line)), line_(line) {}
    std::uint64_t line() const { return line_; }

private:
    std::uint64_t line_;
};

// Edge-list text format (ASCII, LF):
//   caperc-v1 n=<n> k=<k>
//   <color> <u> <v>        one per edge, u < v, sorted by (color, u, v)
// Vertices are 0-based. write followed by read is a bit-exact round trip.

inline void write_edgelist(const ColoredMultigraph& g, std::ostream& out) {
    out << "caperc-v1 n=" << g.n() << " k=" << g.k() << "\n";
    for (int c = 1; c <= g.k(); ++c)
        for (const Edge& e : g.layer(c)) out << c << ' ' << e.u << ' ' << e.v << "\n";
    if (!out) throw std::runtime_error("write_edgelist: stream failure");
}

namespace detail {

inline bool parse_u64(std::string_view token, std::uint64_t& value) {
    if (token.empty()) return false;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && ptr == token.data() + token.size();
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

inline ColoredMultigraph read_edgelist(std::istream& in) {
    std::string line;
    std::uint64_t lineno = 1;
    if (!std::getline(in, line)) throw parse_error("malformed header: empty input", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::uint64_t n = 0, k = 0;
    {
        auto tokens = detail::split_ws(line);
        bool ok = tokens.size() == 3 && tokens[0] == "caperc-v1" &&
                  tokens[1].substr(0, 2) == "n=" && tokens[2].substr(0, 2) == "k=" &&
                  detail::parse_u64(tokens[1].substr(2), n) && detail::parse_u64(tokens[2].substr(2), k);
        if (!ok) throw parse_error("malformed header", 1);
        if (n == 0 || n > 0xffffffffULL) throw parse_error("malformed header: bad n", 1);
        if (k == 0 || k > 64) throw parse_error("malformed header: bad k", 1);
    }

    std::vector<std::vector<Edge>> layers(k);
    std::vector<std::unordered_set<std::uint64_t>> seen(k);

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tokens = detail::split_ws(line);
        if (tokens.empty()) throw parse_error("malformed edge line", lineno);
        std::uint64_t c = 0, u = 0, v = 0;
        if (tokens.size() != 3 || !detail::parse_u64(tokens[0], c) ||
            !detail::parse_u64(tokens[1], u) || !detail::parse_u64(tokens[2], v))
            throw parse_error("malformed edge line", lineno);
        if (c < 1 || c > k) throw parse_error("color out of range", lineno);
        if (u >= n || v >= n) throw parse_error("vertex out of range", lineno);
        if (u >= v) throw parse_error("edge must have u < v", lineno);
        if (!seen[c - 1].insert((u << 32) | v).second)
            throw parse_error("duplicate edge within layer " + std::to_string(c), lineno);
        layers[c - 1].push_back(Edge{static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }

    return ColoredMultigraph(n, std::move(layers));
}

}  // namespace caperc

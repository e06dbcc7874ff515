#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "caperc/edgelist.hpp"
#include "caperc/model.hpp"
#include "caperc/rng.hpp"

using namespace caperc;

namespace {

std::string serialize(const ColoredMultigraph& g) {
    std::ostringstream out;
    write_edgelist(g, out);
    return out.str();
}

ColoredMultigraph parse(const std::string& text) {
    std::istringstream in(text);
    return read_edgelist(in);
}

}  // namespace

TEST_CASE("empty graph round-trips through a header-only file") {
    const ColoredMultigraph g(3, {{}, {}});
    const std::string text = serialize(g);
    CHECK(text == "caperc-v1 n=3 k=2\n");
    CHECK(parse(text) == g);
}

TEST_CASE("small fixture round-trips bit-exactly") {
    const ColoredMultigraph g(3, {{Edge{0, 1}}, {Edge{0, 1}, Edge{1, 2}}});
    const std::string text = serialize(g);
    CHECK(text == "caperc-v1 n=3 k=2\n1 0 1\n2 0 1\n2 1 2\n");
    const ColoredMultigraph back = parse(text);
    CHECK(back == g);
    CHECK(serialize(back) == text);
}

TEST_CASE("sampled graphs round-trip bit-exactly") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
        const std::uint64_t n = 2 + rng.next_u64() % 40;
        const int k = 2 + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> lambdas;
        for (int i = 0; i < k; ++i) lambdas.push_back(1.0 + 0.1 * static_cast<double>(i));
        const auto g = sample_model(ModelParams(n, lambdas), 900 + static_cast<std::uint64_t>(it));
        const std::string text = serialize(g);
        CHECK(parse(text) == g);
        CHECK(serialize(parse(text)) == text);
    }
}

TEST_CASE("vertex out of range is reported with its line") {
    const std::string text = "caperc-v1 n=4 k=2\n1 0 1\n1 5 2\n";
    try {
        parse(text);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        // u >= v is checked after range, so the range error fires first
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
}

TEST_CASE("malformed inputs are rejected with line numbers") {
    CHECK_THROWS_AS(parse(""), parse_error);
    CHECK_THROWS_AS(parse("nonsense\n"), parse_error);
    CHECK_THROWS_AS(parse("caperc-v1 n=0 k=2\n"), parse_error);
    CHECK_THROWS_AS(parse("caperc-v1 n=3 k=2\n1 0\n"), parse_error);
    CHECK_THROWS_AS(parse("caperc-v1 n=3 k=2\n1 0 x\n"), parse_error);

    try {
        parse("caperc-v1 n=3 k=2\n1 1 0\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("u < v") != std::string::npos);
    }
    try {
        parse("caperc-v1 n=3 k=2\n3 0 1\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("color out of range") != std::string::npos);
    }
    try {
        parse("caperc-v1 n=3 k=2\n1 0 1\n1 0 1\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("edges may arrive out of order but duplicates stay rejected") {
    const auto g = parse("caperc-v1 n=4 k=1\n1 2 3\n1 0 1\n");
    CHECK(g.layer(1)[0] == Edge{0, 1});
    CHECK(g.layer(1)[1] == Edge{2, 3});
}

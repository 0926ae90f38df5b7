#include <doctest.h>

#include <sstream>

#include "dirtopo/config.hpp"
#include "dirtopo/graph.hpp"

using namespace dirtopo;

TEST_CASE("digraph files round trip") {
    const Digraph g(4, {{0, 1}, {2, 3}, {1, 0}});
    std::ostringstream out;
    write_digraph(g, out);
    CHECK(out.str() == "n 4\n0 1\n1 0\n2 3\n");
    std::istringstream in(out.str());
    CHECK(read_digraph(in) == g);
}

TEST_CASE("graph parse failures carry line numbers") {
    {
        std::istringstream in("0 1\n");
        CHECK_THROWS_AS(read_digraph(in), ParseError);
    }
    {
        std::istringstream in("n 3\n0\n");
        CHECK_THROWS_AS(read_digraph(in), ParseError);
    }
    {
        std::istringstream in("n 2\n0 5\n");
        CHECK_THROWS_AS(read_digraph(in), IndexOutOfRange);
    }
    {
        std::istringstream in("n 2\n1 1\n");
        CHECK_THROWS_AS(read_digraph(in), std::invalid_argument);
    }
}

TEST_CASE("config files parse sections, lists, and comments") {
    const std::string text =
        "# benchmark setup\n"
        "[experiment]\n"
        "profile = desk\n"
        "out = runs  # trailing comment\n"
        "\n"
        "[snr]\n"
        "grid = -5 0 5\n"
        "[train]\n"
        "epochs = 40\n"
        "lr = 0.003\n"
        "resume = false\n";
    const Config config = Config::parse_text(text);
    CHECK(config.get_string("experiment", "profile", "") == "desk");
    CHECK(config.get_string("experiment", "out", "") == "runs");
    CHECK(config.get_doubles("snr", "grid", {}) == std::vector<double>{-5.0, 0.0, 5.0});
    CHECK(config.get_int("train", "epochs", 0) == 40);
    CHECK(config.get_double("train", "lr", 0.0) == doctest::Approx(0.003));
    CHECK(config.get_bool("train", "resume", true) == false);
    CHECK(config.get_int("train", "batch", 32) == 32);  // fallback
}

TEST_CASE("config value errors name the field") {
    const Config config = Config::parse_text("[train]\nepochs = soon\n");
    try {
        config.get_int("train", "epochs", 0);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("[train] epochs") != std::string::npos);
    }
    CHECK_THROWS_AS(Config::parse_text("[broken\nk = v\n"), ParseError);
    CHECK_THROWS_AS(Config::parse_text("just text\n"), ParseError);
}

TEST_CASE("config hashing is stable and sensitive") {
    const std::string a = "[x]\nk = 1\n";
    const std::string b = "[x]\nk = 2\n";
    CHECK(fnv1a_hash(a) == fnv1a_hash(a));
    CHECK(fnv1a_hash(a) != fnv1a_hash(b));
    CHECK(hash_hex(fnv1a_hash(a)).size() == 16);
}

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "dirtopo/complex.hpp"

using namespace dirtopo;

namespace {

bool same_complex(const DirectedSimplicialComplex& a, const DirectedSimplicialComplex& b) {
    if (a.dim() != b.dim()) return false;
    for (int d = 0; d <= a.dim(); ++d) {
        if (a.simplices(d) != b.simplices(d)) return false;
    }
    return true;
}

/// Independent oracle: all non-empty ordered subtuples by position bitmask.
std::vector<Tuple> subtuples_oracle(const Tuple& t) {
    std::vector<Tuple> out;
    for (std::uint32_t mask = 1; mask < (1u << t.size()); ++mask) {
        Tuple sub;
        for (std::size_t p = 0; p < t.size(); ++p) {
            if (mask & (1u << p)) sub.push_back(t[p]);
        }
        out.push_back(sub);
    }
    return out;
}

DirectedSimplicialComplex random_complex(std::mt19937_64& rng) {
    const std::size_t n = 3 + rng() % 5;
    std::vector<Tuple> generators;
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t g = 0; g < count; ++g) {
        std::vector<VertexId> pool(n);
        for (std::size_t v = 0; v < n; ++v) pool[v] = static_cast<VertexId>(v);
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t len = 1 + rng() % std::min<std::size_t>(4, n);
        generators.emplace_back(pool.begin(), pool.begin() + len);
    }
    return build_complex(generators);
}

}  // namespace

TEST_CASE("closure of a single directed triangle") {
    const auto k = build_complex({{0, 1, 2}});
    CHECK(k.per_dim_counts() == std::vector<std::size_t>{3, 3, 1});
    CHECK(k.contains({0, 1}));
    CHECK(k.contains({0, 2}));
    CHECK(k.contains({1, 2}));
    CHECK(k.contains({0, 1, 2}));
    CHECK_FALSE(k.contains({1, 0}));
}

TEST_CASE("closure of a single directed edge") {
    const auto k = build_complex({{0, 1}});
    CHECK(k.per_dim_counts() == std::vector<std::size_t>{2, 1});
    CHECK(k.contains({0}));
    CHECK(k.contains({1}));
    CHECK(k.contains({0, 1}));
}

TEST_CASE("closure inserts ordered subtuples that were not generators") {
    const auto k = build_complex({{0, 1, 2}, {0, 2, 3}});
    CHECK(k.contains({0, 3}));
    // Full set equality against the bitmask oracle.
    std::set<Tuple> expected;
    for (const Tuple& gen : {Tuple{0, 1, 2}, Tuple{0, 2, 3}}) {
        for (const Tuple& sub : subtuples_oracle(gen)) expected.insert(sub);
    }
    std::set<Tuple> got;
    for (int d = 0; d <= k.dim(); ++d) {
        for (const Tuple& t : k.simplices(d)) got.insert(t);
    }
    CHECK(got == expected);
}

TEST_CASE("vertex ids compact to a dense range preserving relative order") {
    const auto k = build_complex({{5, 9}, {2, 5}});
    CHECK(k.vertex_count() == 3);
    CHECK(k.contains({1, 2}));  // 5 -> 1, 9 -> 2
    CHECK(k.contains({0, 1}));  // 2 -> 0, 5 -> 1
}

TEST_CASE("generators with repeated vertices are rejected") {
    CHECK_THROWS_AS(build_complex({{0, 1, 0}}), DuplicateVertexInTuple);
    CHECK_THROWS_AS(build_complex({{2, 2}}), DuplicateVertexInTuple);
}

TEST_CASE("face maps omit the chosen vertex and clamp beyond the dimension") {
    const auto k = build_complex({{0, 1, 2}, {1, 2, 3}});
    const SimplexId tri = k.id_of({0, 1, 2});
    CHECK(k.tuple(face_map(k, tri, 0)) == Tuple{1, 2});
    CHECK(k.tuple(face_map(k, k.id_of({1, 2, 3}), 2)) == Tuple{1, 2});

    const auto edge = build_complex({{0, 1}});
    CHECK(edge.tuple(face_map(edge, edge.id_of({0, 1}), 5)) == Tuple{0});
    CHECK_THROWS_AS(face_map(edge, edge.id_of({0}), 0), ZeroDimensional);
}

TEST_CASE("every facet of a stored simplex is stored") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        const auto k = random_complex(rng);
        for (int d = 1; d <= k.dim(); ++d) {
            for (std::uint32_t s = 0; s < k.size(d); ++s) {
                for (int i = 0; i <= d; ++i) {
                    CHECK(k.contains(face_tuple(k.tuple({d, s}), i)));
                }
            }
        }
    }
}

TEST_CASE("simplicial identity d_i d_j = d_{j-1} d_i for i < j") {
    std::mt19937_64 rng(11);
    int checks = 0;
    while (checks < 2000) {
        const auto k = random_complex(rng);
        for (int d = 2; d <= k.dim(); ++d) {
            for (std::uint32_t s = 0; s < k.size(d); ++s) {
                const Tuple& t = k.tuple({d, s});
                for (int i = 0; i < d; ++i) {
                    for (int j = i + 1; j <= d; ++j) {
                        CHECK(face_tuple(face_tuple(t, j), i) ==
                              face_tuple(face_tuple(t, i), j - 1));
                        ++checks;
                    }
                }
            }
        }
    }
}

TEST_CASE("skeleton keeps exactly the low dimensions") {
    const auto k = build_complex({{0, 1, 2}});
    const auto graph = skeleton(k, 1);
    CHECK(graph.per_dim_counts() == std::vector<std::size_t>{3, 3});
    const auto verts = skeleton(k, 0);
    CHECK(verts.per_dim_counts() == std::vector<std::size_t>{3});
    CHECK(same_complex(skeleton(k, 5), k));
}

TEST_CASE("per-dimension counts") {
    CHECK(build_complex({{0, 1, 2}}).per_dim_counts() == std::vector<std::size_t>{3, 3, 1});
    CHECK(build_complex({}).per_dim_counts().empty());
}

TEST_CASE("closure is idempotent") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 20; ++round) {
        const auto k = random_complex(rng);
        std::vector<Tuple> all;
        for (int d = 0; d <= k.dim(); ++d) {
            for (const Tuple& t : k.simplices(d)) all.push_back(t);
        }
        CHECK(same_complex(build_complex(all), k));
    }
}

TEST_CASE("serialization round trip preserves simplex ids") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 10; ++round) {
        const auto k = random_complex(rng);
        std::ostringstream out;
        write_complex(k, out);
        std::istringstream in(out.str());
        const auto restored = read_complex(in);
        REQUIRE(same_complex(restored, k));
        for (int d = 0; d <= k.dim(); ++d) {
            for (const Tuple& t : k.simplices(d)) {
                CHECK(restored.id_of(t) == k.id_of(t));
            }
        }
    }
}

TEST_CASE("global ids are a bijection") {
    const auto k = build_complex({{0, 1, 2}, {2, 3}});
    for (std::size_t g = 0; g < k.total_size(); ++g) {
        CHECK(k.global_id(k.from_global(g)) == g);
    }
}

TEST_CASE("complex files with defects are rejected with a line number") {
    {
        std::istringstream in("0 1\n");
        CHECK_THROWS_AS(read_complex(in), ParseError);
    }
    {
        std::istringstream in("dims 1\n0 x\n");
        CHECK_THROWS_AS(read_complex(in), ParseError);
    }
    {
        std::istringstream in("dims 3\n0\n1\n0 1\n");
        CHECK_THROWS_AS(read_complex(in), ParseError);  // declared dim is wrong
    }
}

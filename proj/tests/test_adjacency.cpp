#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/flag_lift.hpp"

using namespace dirtopo;

namespace {

bool is_subsequence(const Tuple& needle, const Tuple& haystack) {
    std::size_t p = 0;
    for (VertexId v : haystack) {
        if (p < needle.size() && needle[p] == v) ++p;
    }
    return p == needle.size();
}

/// Direct transcription of the defining conditions, quantifying kappa over
/// every stored simplex of the target dimension. Self-pairs excluded.
std::set<Witness> relation_oracle(const DirectedSimplicialComplex& k, int dim, Direction dir,
                                  int gap, int i, int j) {
    std::set<Witness> out;
    const auto& simplices = k.simplices(dim);
    int kappa_dim;
    if (dir == Direction::down) {
        kappa_dim = gap > dim ? 0 : dim - gap;
    } else {
        kappa_dim = gap > k.dim() - dim ? k.dim() : dim + gap;
    }
    for (std::uint32_t s = 0; s < simplices.size(); ++s) {
        for (std::uint32_t t = 0; t < simplices.size(); ++t) {
            if (s == t) continue;
            for (std::uint32_t c = 0; c < k.size(kappa_dim); ++c) {
                const Tuple& kappa = k.simplices(kappa_dim)[c];
                bool related = false;
                if (dir == Direction::down) {
                    related = is_subsequence(kappa, face_tuple(simplices[s], i)) &&
                              is_subsequence(kappa, face_tuple(simplices[t], j));
                } else if (kappa_dim > dim) {
                    related = is_subsequence(simplices[s], face_tuple(kappa, i)) &&
                              is_subsequence(simplices[t], face_tuple(kappa, j));
                }
                if (related) out.insert({s, t, SimplexId{kappa_dim, c}});
            }
        }
    }
    return out;
}

Digraph random_digraph(std::mt19937_64& rng, std::size_t n, double p) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = 0; v < n; ++v) {
            if (u != v && coin(rng) < p) edges.emplace_back(u, v);
        }
    }
    return Digraph(n, std::move(edges));
}

}  // namespace

TEST_CASE("two triangles sharing an edge are down (1,0,2)-adjacent through it") {
    const auto k = build_complex({{0, 1, 2}, {1, 2, 3}});
    const auto rel = lower_adjacency(k, 2, 1, 0, 2);
    const SimplexId sigma = k.id_of({0, 1, 2});
    const SimplexId tau = k.id_of({1, 2, 3});
    const SimplexId kappa = k.id_of({1, 2});
    bool found = false;
    for (const Witness& w : rel.witnesses()) {
        if (w.src == sigma.index && w.dst == tau.index) {
            CHECK(w.kappa == kappa);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("edge down adjacencies read as source/target sharing") {
    // 0 -> 1 -> 2 and 0 -> 2 so several sharing patterns exist.
    const auto k = build_complex({{0, 1}, {1, 2}, {0, 2}});

    // (0,1): tau's source is sigma's target.
    const auto head_to_tail = lower_adjacency(k, 1, 1, 0, 1);
    const SimplexId e01 = k.id_of({0, 1});
    const SimplexId e12 = k.id_of({1, 2});
    bool found = false;
    for (const Witness& w : head_to_tail.witnesses()) {
        if (w.src == e01.index && w.dst == e12.index) {
            CHECK(k.tuple(w.kappa) == Tuple{1});
            found = true;
        }
    }
    CHECK(found);

    // (0,0): shared target.
    const auto shared_target = lower_adjacency(k, 1, 1, 0, 0);
    const SimplexId e02 = k.id_of({0, 2});
    found = false;
    for (const Witness& w : shared_target.witnesses()) {
        if (w.src == e02.index && w.dst == e12.index) {
            CHECK(k.tuple(w.kappa) == Tuple{2});
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("edges of a triangle are upper adjacent through it") {
    const auto k = build_complex({{0, 1, 2}});
    const auto rel = upper_adjacency(k, 1, 1, 2, 0);
    // d_2 keeps (0,1); d_0 keeps (1,2).
    REQUIRE(rel.witnesses().size() == 1);
    const Witness& w = rel.witnesses().front();
    CHECK(k.tuple({1, w.src}) == Tuple{0, 1});
    CHECK(k.tuple({1, w.dst}) == Tuple{1, 2});
    CHECK(k.tuple(w.kappa) == Tuple{0, 1, 2});
}

TEST_CASE("node upper adjacencies recover in- and out-neighborhoods") {
    std::mt19937_64 rng(3);
    const Digraph g = random_digraph(rng, 6, 0.4);
    const auto lift = lift_directed_flag(g, 1);
    const auto in_rel = upper_adjacency(lift, 0, 1, 0, 1);
    const auto out_rel = upper_adjacency(lift, 0, 1, 1, 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::set<VertexId> in_seen, out_seen;
        for (const Witness& w : in_rel.row(v)) in_seen.insert(lift.tuple({0, w.dst})[0]);
        for (const Witness& w : out_rel.row(v)) out_seen.insert(lift.tuple({0, w.dst})[0]);
        const auto& in_expect = g.in_neighbors(v);
        const auto& out_expect = g.out_neighbors(v);
        CHECK(in_seen == std::set<VertexId>(in_expect.begin(), in_expect.end()));
        CHECK(out_seen == std::set<VertexId>(out_expect.begin(), out_expect.end()));
    }
}

TEST_CASE("upper relation is empty when no higher simplices exist") {
    const auto k = build_complex({{0, 1}, {1, 2}});
    CHECK(upper_adjacency(k, 1, 1, 0, 1).witnesses().empty());
}

TEST_CASE("relations match the containment oracle for several gaps") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 12; ++round) {
        const Digraph g = random_digraph(rng, 5, 0.55);
        const auto lift = lift_directed_flag(g, 3);
        for (int dim = 1; dim <= std::min(2, lift.dim()); ++dim) {
            for (int gap = 1; gap <= 3; ++gap) {
                for (int i = 0; i <= dim; ++i) {
                    for (int j = 0; j <= dim; ++j) {
                        const auto rel = lower_adjacency(lift, dim, gap, i, j);
                        const auto expected =
                            relation_oracle(lift, dim, Direction::down, gap, i, j);
                        CHECK(std::set<Witness>(rel.witnesses().begin(), rel.witnesses().end()) ==
                              expected);
                    }
                }
                for (int i = 0; i <= dim + gap; ++i) {
                    for (int j = 0; j <= dim + gap; ++j) {
                        const auto rel = upper_adjacency(lift, dim, gap, i, j);
                        const auto expected = relation_oracle(lift, dim, Direction::up, gap, i, j);
                        CHECK(std::set<Witness>(rel.witnesses().begin(), rel.witnesses().end()) ==
                              expected);
                    }
                }
            }
        }
    }
}

TEST_CASE("down witnesses at gap one equal the i-th facet") {
    std::mt19937_64 rng(41);
    const Digraph g = random_digraph(rng, 6, 0.5);
    const auto lift = lift_directed_flag(g, 2);
    for (int dim = 1; dim <= lift.dim(); ++dim) {
        for (int i = 0; i <= dim; ++i) {
            for (int j = 0; j <= dim; ++j) {
                const auto rel = lower_adjacency(lift, dim, 1, i, j);
                for (const Witness& w : rel.witnesses()) {
                    CHECK(lift.tuple(w.kappa) == face_tuple(lift.tuple({dim, w.src}), i));
                }
            }
        }
    }
}

TEST_CASE("face index bounds are enforced") {
    const auto k = build_complex({{0, 1, 2}});
    CHECK_THROWS_AS(lower_adjacency(k, 2, 1, 3, 0), IndexOutOfRange);
    CHECK_THROWS_AS(lower_adjacency(k, 2, 1, 0, -1), IndexOutOfRange);
    CHECK_THROWS_AS(upper_adjacency(k, 1, 1, 3, 0), IndexOutOfRange);
}

TEST_CASE("boundary lists facets in face-map order") {
    const auto k = build_complex({{0, 1, 2}});
    const auto facets = boundary(k, k.id_of({0, 1, 2}));
    REQUIRE(facets.size() == 3);
    CHECK(k.tuple(facets[0]) == Tuple{1, 2});
    CHECK(k.tuple(facets[1]) == Tuple{0, 2});
    CHECK(k.tuple(facets[2]) == Tuple{0, 1});
    CHECK_THROWS_AS(boundary(k, k.id_of({0})), ZeroDimensional);
}

TEST_CASE("coboundary scans the simplices one dimension up") {
    const auto k = build_complex({{0, 1, 2}, {1, 2, 3}});
    const auto up = coboundary(k, k.id_of({1, 2}));
    std::set<Tuple> got;
    for (SimplexId id : up) got.insert(k.tuple(id));
    // Oracle: scan every triangle's facet list.
    std::set<Tuple> expected;
    for (const Tuple& t : k.simplices(2)) {
        for (int i = 0; i <= 2; ++i) {
            if (face_tuple(t, i) == Tuple{1, 2}) expected.insert(t);
        }
    }
    CHECK(got == expected);
    CHECK(expected == std::set<Tuple>{{0, 1, 2}, {1, 2, 3}});
    CHECK(coboundary(k, k.id_of({0, 1, 2})).empty());
}

TEST_CASE("boundary and coboundary are dual") {
    std::mt19937_64 rng(43);
    const Digraph g = random_digraph(rng, 6, 0.5);
    const auto lift = lift_directed_flag(g, 2);
    for (int d = 1; d <= lift.dim(); ++d) {
        for (std::uint32_t s = 0; s < lift.size(d); ++s) {
            for (SimplexId f : boundary(lift, {d, s})) {
                const auto up = coboundary(lift, f);
                CHECK(std::find(up.begin(), up.end(), SimplexId{d, s}) != up.end());
            }
        }
    }
}

TEST_CASE("reachability walks simplicial paths") {
    // Strip of equidirected triangles: (i, i+1, i+2) in a path-power digraph.
    const std::size_t n = 6;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    for (VertexId v = 0; v + 2 < n; ++v) edges.emplace_back(v, v + 2);
    const auto lift = lift_directed_flag(Digraph(n, std::move(edges)), 2);
    REQUIRE(lift.size(2) == n - 2);

    const auto rel = lower_adjacency(lift, 2, 1, 0, 2);
    const std::uint32_t first = lift.id_of({0, 1, 2}).index;
    CHECK(reachable(rel, first, 0) == std::vector<std::uint32_t>{first});

    // One step: exactly the relation row plus the start.
    std::set<std::uint32_t> row;
    for (const Witness& w : rel.row(first)) row.insert(w.dst);
    auto one = reachable(rel, first, 1);
    std::set<std::uint32_t> one_set(one.begin(), one.end());
    one_set.erase(first);
    CHECK(one_set == row);

    // The chain grows one triangle per step and spans everything eventually.
    for (std::size_t steps = 0; steps <= n - 2; ++steps) {
        CHECK(reachable(rel, first, steps).size() == std::min<std::size_t>(steps + 1, n - 2));
    }
}

TEST_CASE("head-to-tail operator of a directed cycle is a cyclic permutation") {
    const std::size_t m = 7;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 0; v < m; ++v) edges.emplace_back(v, static_cast<VertexId>((v + 1) % m));
    const auto lift = lift_directed_flag(Digraph(m, std::move(edges)), 2);
    const auto op = to_operator(lower_adjacency(lift, 1, 1, 0, 1));
    REQUIRE(op.rows == m);
    std::set<std::uint32_t> columns;
    for (std::size_t r = 0; r < m; ++r) {
        REQUIRE(op.row_ptr[r + 1] - op.row_ptr[r] == 1);  // one successor each
        CHECK(op.val[op.row_ptr[r]] == 1.0);
        columns.insert(op.col[op.row_ptr[r]]);
        // The successor edge starts where this edge ends.
        const Tuple& src = lift.simplices(1)[r];
        const Tuple& dst = lift.simplices(1)[op.col[op.row_ptr[r]]];
        CHECK(src[1] == dst[0]);
    }
    CHECK(columns.size() == m);  // permutation: every column hit once
}

TEST_CASE("operators of symmetric-index specs are symmetric") {
    std::mt19937_64 rng(47);
    const Digraph g = random_digraph(rng, 6, 0.5);
    const auto lift = lift_directed_flag(g, 2);
    for (int i = 0; i <= 1; ++i) {
        const auto op = to_operator(lower_adjacency(lift, 1, 1, i, i));
        CHECK(op == op.transpose());
    }
    CHECK(to_operator(upper_adjacency(build_complex({{0, 1}}), 1, 1, 0, 1)).nnz() == 0);
}

TEST_CASE("transpose law relates (i,j) and (j,i)") {
    std::mt19937_64 rng(53);
    for (int round = 0; round < 10; ++round) {
        const Digraph g = random_digraph(rng, 6, 0.5);
        const auto lift = lift_directed_flag(g, 2);
        for (int dim = 0; dim <= std::min(2, lift.dim()); ++dim) {
            for (int i = 0; i <= std::min(2, dim); ++i) {
                for (int j = 0; j <= std::min(2, dim); ++j) {
                    if (dim >= 1) {
                        CHECK(to_operator(lower_adjacency(lift, dim, 1, i, j)) ==
                              to_operator(lower_adjacency(lift, dim, 1, j, i)).transpose());
                    }
                }
            }
            for (int i = 0; i <= std::min(2, dim + 1); ++i) {
                for (int j = 0; j <= std::min(2, dim + 1); ++j) {
                    CHECK(to_operator(upper_adjacency(lift, dim, 1, i, j)) ==
                          to_operator(upper_adjacency(lift, dim, 1, j, i)).transpose());
                }
            }
        }
    }
}

TEST_CASE("the union of down relations on a symmetrized complex is facet sharing") {
    std::mt19937_64 rng(59);
    for (int round = 0; round < 8; ++round) {
        const Digraph g = random_digraph(rng, 6, 0.5);
        const auto sym = symmetrize(lift_directed_flag(g, 2));
        for (int dim = 1; dim <= sym.dim(); ++dim) {
            const auto got = undirected_lower_operator(sym, dim);
            // Oracle: sigma and tau share some facet.
            std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> expected;
            const auto& simplices = sym.simplices(dim);
            for (std::uint32_t s = 0; s < simplices.size(); ++s) {
                for (std::uint32_t t = 0; t < simplices.size(); ++t) {
                    if (s == t) continue;
                    bool shares = false;
                    for (int i = 0; i <= dim && !shares; ++i) {
                        for (int j = 0; j <= dim && !shares; ++j) {
                            shares = face_tuple(simplices[s], i) == face_tuple(simplices[t], j);
                        }
                    }
                    if (shares) expected.emplace_back(s, t, 1.0);
                }
            }
            CHECK(got == CsrMatrix::from_triplets(simplices.size(), simplices.size(),
                                                  std::move(expected)));
        }
    }
}

TEST_CASE("relation export is a plain coordinate list") {
    const auto k = build_complex({{0, 1, 2}});
    std::ostringstream out;
    write_relation(upper_adjacency(k, 1, 1, 2, 0), out);
    CHECK(out.str() == "1 1 2 0 up\n0 2 2 0\n");
}

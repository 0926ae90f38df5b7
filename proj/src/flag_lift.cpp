#include "dirtopo/flag_lift.hpp"

#include <algorithm>

#include "dirtopo/errors.hpp"

namespace dirtopo {

namespace {

std::vector<VertexId> sorted_intersection(const std::vector<VertexId>& a,
                                          const std::vector<VertexId>& b) {
    std::vector<VertexId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct Frontier {
    Tuple clique;
    std::vector<VertexId> candidates;  // vertices that extend the clique
};

}  // namespace

DirectedSimplicialComplex lift_directed_flag(const Digraph& g, int max_dim) {
    if (max_dim < 1) throw std::invalid_argument("max_dim must be at least 1");

    std::vector<std::vector<Tuple>> by_dim(2);
    by_dim[0].reserve(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        by_dim[0].push_back({static_cast<VertexId>(v)});

    // An ordered clique extends only by common out-neighbors of all its
    // vertices, and every ordered (k+1)-clique arises exactly once from its
    // length-k prefix.
    std::vector<Frontier> frontier;
    frontier.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) {
        by_dim[1].push_back({u, v});
        if (max_dim >= 2)
            frontier.push_back({{u, v}, sorted_intersection(g.out_neighbors(u), g.out_neighbors(v))});
    }

    for (int d = 2; d <= max_dim && !frontier.empty(); ++d) {
        by_dim.resize(d + 1);
        std::vector<Frontier> next;
        for (const Frontier& f : frontier) {
            for (VertexId v : f.candidates) {
                Tuple extended = f.clique;
                extended.push_back(v);
                if (d < max_dim)
                    next.push_back({extended, sorted_intersection(f.candidates, g.out_neighbors(v))});
                by_dim[d].push_back(std::move(extended));
            }
        }
        frontier = std::move(next);
    }

    return DirectedSimplicialComplex::from_closed(std::move(by_dim));
}

DirectedSimplicialComplex lift_undirected_flag(const UndirectedGraph& g, int max_dim) {
    if (max_dim < 1) throw std::invalid_argument("max_dim must be at least 1");

    std::vector<std::vector<Tuple>> by_dim(2);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        by_dim[0].push_back({static_cast<VertexId>(v)});

    // Cliques are enumerated in ascending vertex order, so candidates are
    // common neighbors greater than the last member.
    std::vector<Frontier> frontier;
    for (auto [u, v] : g.edges()) {
        by_dim[1].push_back({u, v});
        if (max_dim >= 2) {
            auto common = sorted_intersection(g.neighbors(u), g.neighbors(v));
            common.erase(std::remove_if(common.begin(), common.end(),
                                        [v = v](VertexId w) { return w <= v; }),
                         common.end());
            frontier.push_back({{u, v}, std::move(common)});
        }
    }

    for (int d = 2; d <= max_dim && !frontier.empty(); ++d) {
        by_dim.resize(d + 1);
        std::vector<Frontier> next;
        for (const Frontier& f : frontier) {
            for (VertexId v : f.candidates) {
                Tuple extended = f.clique;
                extended.push_back(v);
                if (d < max_dim) {
                    auto common = sorted_intersection(f.candidates, g.neighbors(v));
                    common.erase(std::remove_if(common.begin(), common.end(),
                                                [v](VertexId w) { return w <= v; }),
                                 common.end());
                    next.push_back({extended, std::move(common)});
                }
                by_dim[d].push_back(std::move(extended));
            }
        }
        frontier = std::move(next);
    }

    return DirectedSimplicialComplex::from_closed(std::move(by_dim));
}

DirectedSimplicialComplex symmetrize(const DirectedSimplicialComplex& complex) {
    std::vector<Tuple> sorted_tuples;
    sorted_tuples.reserve(complex.total_size());
    for (int d = 0; d <= complex.dim(); ++d) {
        for (const Tuple& t : complex.simplices(d)) {
            Tuple s = t;
            std::sort(s.begin(), s.end());
            sorted_tuples.push_back(std::move(s));
        }
    }
    return build_complex(sorted_tuples);
}

}  // namespace dirtopo

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dirtopo/complex.hpp"

namespace dirtopo {

/// Simple digraph: dense vertex ids 0..n-1, deduplicated edge set, no
/// self-loops. Edges are kept sorted for reproducible iteration.
class Digraph {
  public:
    Digraph() = default;
    Digraph(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges);

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

    bool has_edge(VertexId u, VertexId v) const;
    const std::vector<VertexId>& out_neighbors(VertexId u) const { return out_[u]; }
    const std::vector<VertexId>& in_neighbors(VertexId u) const { return in_[u]; }

    friend bool operator==(const Digraph&, const Digraph&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<std::pair<VertexId, VertexId>> edges_;
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::vector<VertexId>> in_;
};

/// Undirected graph with the same storage conventions; each edge is stored
/// once as an ordered (min,max) pair.
class UndirectedGraph {
  public:
    UndirectedGraph() = default;
    UndirectedGraph(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges);

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

    bool has_edge(VertexId u, VertexId v) const;
    const std::vector<VertexId>& neighbors(VertexId u) const { return adj_[u]; }

  private:
    std::size_t n_ = 0;
    std::vector<std::pair<VertexId, VertexId>> edges_;
    std::vector<std::vector<VertexId>> adj_;
};

/// Digraph text format: "n <num_vertices>" header, then one "u v" line per
/// directed edge. The same format serves undirected graphs, each edge listed
/// once in either orientation.
void write_digraph(const Digraph& g, std::ostream& out);
Digraph read_digraph(std::istream& in);
Digraph load_digraph(const std::string& path);
void save_digraph(const Digraph& g, const std::string& path);

UndirectedGraph read_undirected(std::istream& in);
UndirectedGraph load_undirected(const std::string& path);

/// The circulant digraph on n vertices with edges v -> v+s (mod n) for every
/// step s in the connection set.
Digraph circulant(std::size_t n, const std::vector<std::uint32_t>& steps);

}  // namespace dirtopo

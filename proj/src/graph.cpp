#include "dirtopo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dirtopo/errors.hpp"

namespace dirtopo {

Digraph::Digraph(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) : n_(n) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop " + std::to_string(u));
        if (u >= n || v >= n) throw IndexOutOfRange("edge endpoint exceeds vertex count");
    }
    edges_ = std::move(edges);
    out_.assign(n_, {});
    in_.assign(n_, {});
    for (auto [u, v] : edges_) {
        out_[u].push_back(v);
        in_[v].push_back(u);
    }
    for (auto& nb : out_) std::sort(nb.begin(), nb.end());
    for (auto& nb : in_) std::sort(nb.begin(), nb.end());
}

bool Digraph::has_edge(VertexId u, VertexId v) const {
    if (u >= n_) return false;
    return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

UndirectedGraph::UndirectedGraph(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges)
    : n_(n) {
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop " + std::to_string(u));
        if (u >= n || v >= n) throw IndexOutOfRange("edge endpoint exceeds vertex count");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    adj_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool UndirectedGraph::has_edge(VertexId u, VertexId v) const {
    if (u >= n_) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

namespace {

std::pair<std::size_t, std::vector<std::pair<VertexId, VertexId>>> parse_edge_list(
    std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0;
    bool have_header = false;
    std::vector<std::pair<VertexId, VertexId>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            long declared = -1;
            ls >> tag >> declared;
            if (tag != "n" || declared < 0) throw ParseError("expected header 'n <count>'", line_no);
            n = static_cast<std::size_t>(declared);
            have_header = true;
            continue;
        }
        long u = -1, v = -1;
        ls >> u >> v;
        if (ls.fail() || u < 0 || v < 0) throw ParseError("expected edge line 'u v'", line_no);
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
    if (!have_header) throw ParseError("missing 'n' header", line_no);
    return {n, std::move(edges)};
}

}  // namespace

void write_digraph(const Digraph& g, std::ostream& out) {
    out << "n " << g.vertex_count() << "\n";
    for (auto [u, v] : g.edges()) out << u << ' ' << v << "\n";
}

Digraph read_digraph(std::istream& in) {
    auto [n, edges] = parse_edge_list(in);
    return Digraph(n, std::move(edges));
}

Digraph load_digraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_digraph(in);
}

void save_digraph(const Digraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_digraph(g, out);
}

UndirectedGraph read_undirected(std::istream& in) {
    auto [n, edges] = parse_edge_list(in);
    return UndirectedGraph(n, std::move(edges));
}

UndirectedGraph load_undirected(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_undirected(in);
}

Digraph circulant(std::size_t n, const std::vector<std::uint32_t>& steps) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (std::uint32_t s : steps) {
        if (s == 0 || s >= n) throw std::invalid_argument("circulant step must be in 1..n-1");
        for (std::size_t v = 0; v < n; ++v) {
            edges.emplace_back(static_cast<VertexId>(v),
                               static_cast<VertexId>((v + s) % n));
        }
    }
    return Digraph(n, std::move(edges));
}

}  // namespace dirtopo

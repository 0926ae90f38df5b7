#include "dirtopo/adjacency.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

namespace dirtopo {

AdjacencyRelation::AdjacencyRelation(AdjacencySpec spec, int dim, int kappa_dim, std::size_t count,
                                     std::vector<Witness> witnesses)
    : spec_(spec), dim_(dim), kappa_dim_(kappa_dim), count_(count), witnesses_(std::move(witnesses)) {
    std::sort(witnesses_.begin(), witnesses_.end());
    witnesses_.erase(std::unique(witnesses_.begin(), witnesses_.end()), witnesses_.end());
    row_ptr_.assign(count_ + 1, 0);
    for (const Witness& w : witnesses_) ++row_ptr_[w.src + 1];
    for (std::size_t r = 0; r < count_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

namespace {

/// Ids of stored simplices of the given length that are subsequences of t.
std::vector<SimplexId> stored_subsequences(const DirectedSimplicialComplex& complex,
                                           const Tuple& t, std::size_t len) {
    std::vector<SimplexId> out;
    if (len == 0 || len > t.size()) return out;
    // Walk all position combinations in lexicographic order.
    std::vector<std::size_t> pos(len);
    for (std::size_t p = 0; p < len; ++p) pos[p] = p;
    while (true) {
        Tuple sub;
        sub.reserve(len);
        for (std::size_t p : pos) sub.push_back(t[p]);
        if (auto id = complex.find(sub)) out.push_back(*id);
        // advance combination
        std::size_t p = len;
        while (p > 0) {
            --p;
            if (pos[p] + (len - p) < t.size()) {
                ++pos[p];
                for (std::size_t q = p + 1; q < len; ++q) pos[q] = pos[q - 1] + 1;
                break;
            }
            if (p == 0) return out;
        }
        if (len == 0) return out;
    }
}

void check_face_index(int idx, int bound, const char* name) {
    if (idx < 0 || idx > bound) {
        throw IndexOutOfRange(std::string(name) + " index " + std::to_string(idx) +
                              " exceeds bound " + std::to_string(bound));
    }
}

}  // namespace

AdjacencyRelation lower_adjacency(const DirectedSimplicialComplex& complex, int dim, int k, int i,
                                  int j) {
    if (dim < 1) throw std::invalid_argument("lower adjacency requires dim >= 1");
    if (k < 1) throw std::invalid_argument("adjacency gap k must be >= 1");
    check_face_index(i, dim, "face map i");
    check_face_index(j, dim, "face map j");

    const int kappa_dim = k > dim ? 0 : dim - k;
    const std::size_t count = complex.size(dim);
    const auto& simplices = complex.simplices(dim);
    std::vector<Witness> witnesses;

    if (kappa_dim == dim - 1) {
        // kappa has the facet dimension, so containment forces
        // d_i(sigma) = kappa = d_j(tau).
        std::unordered_map<Tuple, std::vector<std::uint32_t>, TupleHash> by_dj;
        for (std::uint32_t t = 0; t < count; ++t) {
            by_dj[face_tuple(simplices[t], j)].push_back(t);
        }
        for (std::uint32_t s = 0; s < count; ++s) {
            Tuple kappa = face_tuple(simplices[s], i);
            auto it = by_dj.find(kappa);
            if (it == by_dj.end()) continue;
            const SimplexId kappa_id = complex.id_of(kappa);
            for (std::uint32_t t : it->second) {
                if (t != s) witnesses.push_back({s, t, kappa_id});
            }
        }
    } else {
        std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> srcs, dsts;
        for (std::uint32_t s = 0; s < count; ++s) {
            for (SimplexId kappa :
                 stored_subsequences(complex, face_tuple(simplices[s], i), kappa_dim + 1))
                srcs[kappa.index].push_back(s);
            for (SimplexId kappa :
                 stored_subsequences(complex, face_tuple(simplices[s], j), kappa_dim + 1))
                dsts[kappa.index].push_back(s);
        }
        for (const auto& [kappa_index, ss] : srcs) {
            auto it = dsts.find(kappa_index);
            if (it == dsts.end()) continue;
            const SimplexId kappa_id{kappa_dim, kappa_index};
            for (std::uint32_t s : ss) {
                for (std::uint32_t t : it->second) {
                    if (t != s) witnesses.push_back({s, t, kappa_id});
                }
            }
        }
    }
    return AdjacencyRelation({Direction::down, k, i, j}, dim, kappa_dim, count,
                             std::move(witnesses));
}

AdjacencyRelation upper_adjacency(const DirectedSimplicialComplex& complex, int dim, int k, int i,
                                  int j) {
    if (dim < 0) throw std::invalid_argument("upper adjacency requires dim >= 0");
    if (k < 1) throw std::invalid_argument("adjacency gap k must be >= 1");
    // Face maps act on kappa; bounds follow the nominal kappa dimension
    // dim+k, and larger-than-dimension indices on a clamped kappa fall into
    // the remove-last branch of the face map.
    check_face_index(i, dim + k, "face map i");
    check_face_index(j, dim + k, "face map j");

    const int kappa_dim = k > complex.dim() - dim ? complex.dim() : dim + k;
    const std::size_t count = complex.size(dim);
    std::vector<Witness> witnesses;

    if (kappa_dim == dim + 1) {
        for (std::uint32_t c = 0; c < complex.size(kappa_dim); ++c) {
            const SimplexId kappa_id{kappa_dim, c};
            const Tuple& kappa = complex.tuple(kappa_id);
            const SimplexId s = complex.id_of(face_tuple(kappa, i));
            const SimplexId t = complex.id_of(face_tuple(kappa, j));
            if (s != t) witnesses.push_back({s.index, t.index, kappa_id});
        }
    } else if (kappa_dim > dim) {
        for (std::uint32_t c = 0; c < complex.size(kappa_dim); ++c) {
            const SimplexId kappa_id{kappa_dim, c};
            const Tuple& kappa = complex.tuple(kappa_id);
            const auto ss = stored_subsequences(complex, face_tuple(kappa, i), dim + 1);
            const auto ts = stored_subsequences(complex, face_tuple(kappa, j), dim + 1);
            for (SimplexId s : ss) {
                for (SimplexId t : ts) {
                    if (s != t) witnesses.push_back({s.index, t.index, kappa_id});
                }
            }
        }
    }
    // kappa_dim <= dim leaves no room for sigma inside a facet of kappa.
    return AdjacencyRelation({Direction::up, k, i, j}, dim, kappa_dim, count, std::move(witnesses));
}

AdjacencyRelation make_relation(const DirectedSimplicialComplex& complex, int dim,
                                const AdjacencySpec& spec) {
    return spec.direction == Direction::down
               ? lower_adjacency(complex, dim, spec.k, spec.i, spec.j)
               : upper_adjacency(complex, dim, spec.k, spec.i, spec.j);
}

std::vector<SimplexId> boundary(const DirectedSimplicialComplex& complex, SimplexId id) {
    const Tuple& t = complex.tuple(id);
    if (id.dim < 1) throw ZeroDimensional("a 0-simplex has no facets");
    std::vector<SimplexId> out;
    for (int i = 0; i <= id.dim; ++i) {
        SimplexId facet = complex.id_of(face_tuple(t, i));
        if (std::find(out.begin(), out.end(), facet) == out.end()) out.push_back(facet);
    }
    return out;
}

std::vector<SimplexId> coboundary(const DirectedSimplicialComplex& complex, SimplexId id) {
    std::vector<SimplexId> out;
    const int up = id.dim + 1;
    const Tuple& target = complex.tuple(id);
    for (std::uint32_t c = 0; c < complex.size(up); ++c) {
        const Tuple& t = complex.simplices(up)[c];
        for (int i = 0; i <= up; ++i) {
            if (face_tuple(t, i) == target) {
                out.push_back({up, c});
                break;
            }
        }
    }
    return out;
}

std::vector<std::uint32_t> reachable(const AdjacencyRelation& rel, std::uint32_t src,
                                     std::size_t steps) {
    if (src >= rel.count()) throw IndexOutOfRange("source simplex index out of range");
    std::set<std::uint32_t> seen{src};
    std::vector<std::uint32_t> frontier{src};
    for (std::size_t step = 0; step < steps && !frontier.empty(); ++step) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t s : frontier) {
            for (const Witness& w : rel.row(s)) {
                if (seen.insert(w.dst).second) next.push_back(w.dst);
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

CsrMatrix to_operator(const AdjacencyRelation& rel) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const Witness& w : rel.witnesses()) pairs.emplace(w.src, w.dst);
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    t.reserve(pairs.size());
    for (auto [r, c] : pairs) t.emplace_back(r, c, 1.0);
    return CsrMatrix::from_triplets(rel.count(), rel.count(), std::move(t));
}

CsrMatrix counts_operator(const AdjacencyRelation& rel) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    t.reserve(rel.witnesses().size());
    for (const Witness& w : rel.witnesses()) t.emplace_back(w.src, w.dst, 1.0);
    return CsrMatrix::from_triplets(rel.count(), rel.count(), std::move(t));
}

CsrMatrix kappa_operator(const AdjacencyRelation& rel, const DirectedSimplicialComplex& complex) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    t.reserve(rel.witnesses().size());
    for (const Witness& w : rel.witnesses()) t.emplace_back(w.src, w.kappa.index, 1.0);
    return CsrMatrix::from_triplets(rel.count(), complex.size(rel.kappa_dim()), std::move(t));
}

CsrMatrix undirected_lower_operator(const DirectedSimplicialComplex& complex, int dim) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (int i = 0; i <= dim; ++i) {
        for (int j = 0; j <= dim; ++j) {
            const AdjacencyRelation rel = lower_adjacency(complex, dim, 1, i, j);
            for (const Witness& w : rel.witnesses()) pairs.emplace(w.src, w.dst);
        }
    }
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    for (auto [r, c] : pairs) t.emplace_back(r, c, 1.0);
    return CsrMatrix::from_triplets(complex.size(dim), complex.size(dim), std::move(t));
}

void write_relation(const AdjacencyRelation& rel, std::ostream& out) {
    out << rel.dim() << ' ' << rel.spec().k << ' ' << rel.spec().i << ' ' << rel.spec().j << ' '
        << (rel.spec().direction == Direction::down ? "down" : "up") << "\n";
    for (const Witness& w : rel.witnesses()) {
        out << w.src << ' ' << w.dst << ' ' << w.kappa.dim << ' ' << w.kappa.index << "\n";
    }
}

}  // namespace dirtopo

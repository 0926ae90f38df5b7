#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dirtopo/complex.hpp"
#include "dirtopo/matrix.hpp"

namespace dirtopo {

enum class Direction { down, up };

/// Names one directed adjacency: direction, dimension gap k, and the ordered
/// face-map index pair (i, j).
struct AdjacencySpec {
    Direction direction = Direction::down;
    int k = 1;
    int i = 0;
    int j = 0;

    friend bool operator==(const AdjacencySpec&, const AdjacencySpec&) = default;
};

/// One realization of an adjacency between same-dimension simplices: src and
/// dst index into the relation's dimension, kappa is the shared simplex.
struct Witness {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    SimplexId kappa;

    friend bool operator==(const Witness&, const Witness&) = default;
    friend auto operator<=>(const Witness&, const Witness&) = default;
};

/// A directed relation between the simplices of one dimension, stored as the
/// full witness list (message functions need kappa, and one ordered pair may
/// be witnessed by several kappas). Witnesses are sorted by (src, dst,
/// kappa), with row offsets for per-source access.
class AdjacencyRelation {
  public:
    AdjacencyRelation() = default;
    AdjacencyRelation(AdjacencySpec spec, int dim, int kappa_dim, std::size_t count,
                      std::vector<Witness> witnesses);

    const AdjacencySpec& spec() const { return spec_; }
    int dim() const { return dim_; }
    int kappa_dim() const { return kappa_dim_; }
    std::size_t count() const { return count_; }
    const std::vector<Witness>& witnesses() const { return witnesses_; }

    std::span<const Witness> row(std::uint32_t src) const {
        return {witnesses_.data() + row_ptr_[src], witnesses_.data() + row_ptr_[src + 1]};
    }

  private:
    AdjacencySpec spec_;
    int dim_ = 0;
    int kappa_dim_ = 0;
    std::size_t count_ = 0;
    std::vector<Witness> witnesses_;
    std::vector<std::size_t> row_ptr_;
};

/// (sigma, tau) related iff some stored kappa of dimension dim-k (clamped to
/// 0 when k > dim) is an ordered subtuple of both d_i(sigma) and d_j(tau).
/// For k = 1 this degenerates to d_i(sigma) = kappa = d_j(tau). Self-pairs
/// are excluded.
AdjacencyRelation lower_adjacency(const DirectedSimplicialComplex& complex, int dim, int k, int i,
                                  int j);

/// (sigma, tau) related iff some stored kappa of dimension dim+k (clamped to
/// dim(K) when k exceeds dim(K)-dim) has sigma an ordered subtuple of
/// d_i(kappa) and tau of d_j(kappa). For k = 1: sigma = d_i(kappa) and
/// tau = d_j(kappa). Self-pairs are excluded.
AdjacencyRelation upper_adjacency(const DirectedSimplicialComplex& complex, int dim, int k, int i,
                                  int j);

AdjacencyRelation make_relation(const DirectedSimplicialComplex& complex, int dim,
                                const AdjacencySpec& spec);

/// The facets d_i(sigma) for i = 0..dim(sigma), deduplicated, in face-map
/// order.
std::vector<SimplexId> boundary(const DirectedSimplicialComplex& complex, SimplexId id);

/// All stored simplices having sigma as a facet.
std::vector<SimplexId> coboundary(const DirectedSimplicialComplex& complex, SimplexId id);

/// Simplices connected to src by a simplicial path of length <= steps along
/// the relation (src itself counts as reachable by the empty path). Sorted.
std::vector<std::uint32_t> reachable(const AdjacencyRelation& rel, std::uint32_t src,
                                     std::size_t steps);

/// Boolean operator of the relation: entry (src, dst) is 1 iff at least one
/// witness exists. Row order is the canonical SimplexId order.
CsrMatrix to_operator(const AdjacencyRelation& rel);

/// Like to_operator but entries count witnesses (message passing sums one
/// message per witness).
CsrMatrix counts_operator(const AdjacencyRelation& rel);

/// |Sigma_dim| x |Sigma_kappa_dim| matrix counting, per (src, kappa), the
/// witnesses through kappa; right-multiplied against kappa-level signals.
CsrMatrix kappa_operator(const AdjacencyRelation& rel, const DirectedSimplicialComplex& complex);

/// Union over all i,j <= dim of the boolean lower (1,i,j) operators; on a
/// symmetrized complex this is the standard undirected lower adjacency.
CsrMatrix undirected_lower_operator(const DirectedSimplicialComplex& complex, int dim);

/// Coordinate-list text export: "dim k i j dir" header then one
/// "src dst kappa_dim kappa_index" line per witness, canonical order.
void write_relation(const AdjacencyRelation& rel, std::ostream& out);

}  // namespace dirtopo

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dirtopo/errors.hpp"

namespace dirtopo {

using VertexId = std::uint32_t;

/// An ordered tuple of distinct vertices. A tuple of length k+1 represents a
/// directed k-simplex.
using Tuple = std::vector<VertexId>;

struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (VertexId v : t) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// Identifies a simplex by dimension and rank in the canonical
/// (lexicographic) order of that dimension.
struct SimplexId {
    int dim = 0;
    std::uint32_t index = 0;

    friend bool operator==(const SimplexId&, const SimplexId&) = default;
    friend auto operator<=>(const SimplexId&, const SimplexId&) = default;
};

/// Applies the face map d_i at the tuple level: removes the vertex at
/// position i, or the last vertex when i >= dim. Throws ZeroDimensional for
/// single-vertex tuples.
Tuple face_tuple(const Tuple& t, int i);

/// A set of directed simplices closed under taking non-empty ordered
/// subtuples (subsequences). Immutable once constructed; per-dimension
/// simplex lists are sorted lexicographically so SimplexId assignment is
/// reproducible across runs.
class DirectedSimplicialComplex {
  public:
    DirectedSimplicialComplex() = default;

    std::size_t vertex_count() const { return by_dim_.empty() ? 0 : by_dim_[0].size(); }

    /// Maximal simplex dimension; -1 for the empty complex.
    int dim() const { return static_cast<int>(by_dim_.size()) - 1; }

    std::size_t size(int d) const {
        if (d < 0 || d >= static_cast<int>(by_dim_.size())) return 0;
        return by_dim_[d].size();
    }

    std::size_t total_size() const { return total_; }

    const std::vector<Tuple>& simplices(int d) const {
        static const std::vector<Tuple> kEmpty;
        if (d < 0 || d >= static_cast<int>(by_dim_.size())) return kEmpty;
        return by_dim_[d];
    }

    const Tuple& tuple(SimplexId id) const;

    std::optional<SimplexId> find(const Tuple& t) const;

    /// Like find(), but throws IndexOutOfRange when the tuple is absent.
    SimplexId id_of(const Tuple& t) const;

    bool contains(const Tuple& t) const { return find(t).has_value(); }

    /// counts[d] = number of d-simplices; empty for the empty complex.
    std::vector<std::size_t> per_dim_counts() const;

    /// Flat index over all simplices, dimensions ascending then canonical
    /// order within a dimension.
    std::size_t global_id(SimplexId id) const;
    SimplexId from_global(std::size_t g) const;

    /// Construction from per-dimension tuple lists that are already closed
    /// under subtuples with dense vertex ids. Sorts and indexes; validates
    /// closure.
    static DirectedSimplicialComplex from_closed(std::vector<std::vector<Tuple>> by_dim);

    friend DirectedSimplicialComplex build_complex(const std::vector<Tuple>& generators);

  private:
    void reindex();

    std::vector<std::vector<Tuple>> by_dim_;
    std::unordered_map<Tuple, SimplexId, TupleHash> lookup_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

/// Builds the smallest directed simplicial complex containing every
/// generator: inserts all non-empty ordered subtuples, deduplicates, and
/// compacts vertex ids to 0..|V|-1 preserving their relative order.
DirectedSimplicialComplex build_complex(const std::vector<Tuple>& generators);

/// Face map on stored simplices. The result is guaranteed present by the
/// inclusivity property.
SimplexId face_map(const DirectedSimplicialComplex& complex, SimplexId id, int i);

/// The subcomplex of simplices with dimension <= k.
DirectedSimplicialComplex skeleton(const DirectedSimplicialComplex& complex, int k);

/// Line-oriented text format: "dims D" header (D = complex dimension, -1
/// when empty), then one whitespace-separated vertex tuple per line,
/// dimensions ascending, lexicographic within a dimension.
void write_complex(const DirectedSimplicialComplex& complex, std::ostream& out);
DirectedSimplicialComplex read_complex(std::istream& in);

void save_complex(const DirectedSimplicialComplex& complex, const std::string& path);
DirectedSimplicialComplex load_complex(const std::string& path);

}  // namespace dirtopo

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dirtopo/complex.hpp"
#include "dirtopo/graph.hpp"

namespace dirtopo {

/// full: hash of (own, boundary tuple, coboundary multiset, per-(i,j) down
/// pair multisets, per-(i,j) up pair multisets). reduced: hash of (own,
/// boundary tuple, per-(i,j) up pair multisets); it induces the same final
/// partition, possibly after more rounds.
enum class RefineVariant { full, reduced };

struct RefineOptions {
    RefineVariant variant = RefineVariant::full;
    /// Negative means refine until the per-dimension color counts are stable
    /// for one full round.
    int max_rounds = -1;
    /// Start from color = dimension instead of the uniform color 0.
    bool dim_tagged_init = false;
};

using ColorHistogram = std::map<std::uint32_t, std::size_t>;

/// Per-dimension multiset of stable colors. Colors are compacted by sorted
/// signature rank each round, which makes the histogram invariant under
/// vertex relabeling.
struct StableHistogram {
    std::vector<ColorHistogram> per_dim;

    friend bool operator==(const StableHistogram&, const StableHistogram&) = default;
};

struct RefineResult {
    /// Final color per simplex, indexed by global id, re-indexed 0..C-1.
    std::vector<std::uint32_t> colors;
    StableHistogram histogram;
    int rounds = 0;
    /// colors after every round; per_round.front() is the initial coloring.
    std::vector<std::vector<std::uint32_t>> per_round;
};

RefineResult dswl_refine(const DirectedSimplicialComplex& complex, RefineOptions options = {});

/// Refines both complexes in one shared color namespace so the returned
/// histograms are directly comparable.
std::pair<RefineResult, RefineResult> dswl_refine_joint(const DirectedSimplicialComplex& a,
                                                        const DirectedSimplicialComplex& b,
                                                        RefineOptions options = {});

/// Directed 1-WL on digraph nodes: hash of (own color, in-neighbor color
/// multiset, out-neighbor color multiset).
RefineResult dwl_refine(const Digraph& g);
std::pair<RefineResult, RefineResult> dwl_refine_joint(const Digraph& a, const Digraph& b);

enum class Verdict { distinguished, not_distinguished };

/// D-SWL verdict on a complex pair: distinguished iff the jointly refined
/// per-dimension stable histograms differ.
Verdict distinguish(const DirectedSimplicialComplex& a, const DirectedSimplicialComplex& b,
                    RefineOptions options = {});

Verdict dwl_distinguish(const Digraph& a, const Digraph& b);

/// Groups global simplex ids by final color, classes sorted canonically.
/// Two refinements induce the same partition iff these are equal.
std::vector<std::vector<std::size_t>> partition_classes(const std::vector<std::uint32_t>& colors);

struct CounterexamplePair {
    Digraph first;
    Digraph second;
};

/// Searches for a digraph pair with equal D-WL stable histograms whose
/// directed flag lifts D-SWL tells apart: exhaustive over tiny sizes,
/// circulant connection-set pairs next, then seeded random pairs within the
/// trial budget.
std::optional<CounterexamplePair> find_counterexample(int n_max, int trials, std::uint64_t seed);

}  // namespace dirtopo

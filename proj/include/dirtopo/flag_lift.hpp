#pragma once

#include "dirtopo/complex.hpp"
#include "dirtopo/graph.hpp"

namespace dirtopo {

/// Directed flag complex of a digraph: the k-simplices are the ordered
/// (k+1)-cliques, i.e. tuples (v_1,...,v_{k+1}) with a directed edge
/// (v_i,v_j) for every i < j. Dimensions above max_dim are not materialized.
DirectedSimplicialComplex lift_directed_flag(const Digraph& g, int max_dim = 2);

/// Flag complex of an undirected graph, stored in the directed container:
/// each (k+1)-clique appears once under its ascending vertex order.
DirectedSimplicialComplex lift_undirected_flag(const UndirectedGraph& g, int max_dim = 2);

/// Disregards vertex order: every simplex is replaced by its sorted-vertex
/// representative and duplicates collapse. Idempotent.
DirectedSimplicialComplex symmetrize(const DirectedSimplicialComplex& complex);

}  // namespace dirtopo

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dirtopo/complex.hpp"
#include "dirtopo/graph.hpp"
#include "dirtopo/matrix.hpp"

namespace dirtopo {

struct SbmSpec {
    std::size_t nodes = 70;
    std::size_t communities = 10;
    double p_in = 0.9;
    double p_out = 0.01;
    bool directed = true;
    std::uint64_t seed = 0;
};

/// Samples each unordered pair with the intra/inter probability of its
/// endpoints' communities. Nodes are split into equal contiguous blocks.
UndirectedGraph gen_sbm_undirected(const SbmSpec& spec);

/// Samples the undirected model, then orients every edge uniformly at
/// random, keeping directed and undirected datasets density-matched.
Digraph gen_sbm_directed(const SbmSpec& spec);

std::size_t community_of(const SbmSpec& spec, VertexId v);

/// Edge classes over the lift's 1-simplices: intra-community edges carry the
/// shared community id; all inter-community edges share the extra class
/// `communities`, for communities+1 partitions total.
std::vector<int> edge_labels(const DirectedSimplicialComplex& lift, const SbmSpec& spec);

/// The diffusion operator: the boolean (1,0,1) lower-adjacency matrix in the
/// directed case, the symmetric union lower adjacency otherwise.
CsrMatrix diffusion_operator(const DirectedSimplicialComplex& lift, bool directed);

struct SignalSample {
    Matrix x;  // |edges| x 1, post diffusion and noise
    int label = 0;
    double snr_db = 0.0;
    int t = 0;  // realized diffusion order
    /// Which edges were spiked; provenance for validation, not serialized.
    std::vector<std::uint32_t> spiked;
};

/// x <- op^t x by repeated application; t = 0 returns x unchanged.
Matrix diffuse(const CsrMatrix& op, Matrix x, int t);

struct SignalGenSpec {
    std::size_t count = 1000;
    std::size_t spike_edges = 5;
    /// Infinity disables noise.
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

/// Per sample: base signal N(0, 1/N_edges), a uniformly chosen source
/// partition whose edges receive a shared N(0,1) spike, diffusion x' = S^t x
/// with t = min(100, round(|T|)), T Student-t(10), then white noise scaled so
/// the realized SNR matches the target exactly. Each sample derives its own
/// seed from (seed, index); the noise draw comes last so an infinite-SNR run
/// reproduces the clean signals bit for bit.
std::vector<SignalSample> gen_signals(const DirectedSimplicialComplex& lift, bool directed,
                                      const std::vector<int>& labels, int num_partitions,
                                      const SignalGenSpec& spec);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Stratified by label with cumulative rounding per stratum; deterministic
/// for a fixed seed.
SplitIndices split(const std::vector<int>& labels, std::array<double, 3> ratios,
                   std::uint64_t seed);

/// Binary dataset file: header (edge count, feature count, sample count,
/// snr_db, seed, mode) followed by per-sample records of little-endian
/// doubles.
void save_dataset(const std::vector<SignalSample>& samples, std::size_t n_edges, double snr_db,
                  std::uint64_t seed, bool directed, const std::string& path);
std::vector<SignalSample> load_dataset(const std::string& path);

void save_labels_csv(const std::vector<SignalSample>& samples, const std::string& path);

}  // namespace dirtopo

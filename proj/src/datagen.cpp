#include "dirtopo/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/errors.hpp"

namespace dirtopo {

namespace {

void validate_spec(const SbmSpec& spec) {
    if (spec.communities == 0 || spec.nodes % spec.communities != 0)
        throw std::invalid_argument("node count must divide evenly into communities");
    if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0)
        throw std::invalid_argument("edge probabilities must lie in [0,1]");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::size_t community_of(const SbmSpec& spec, VertexId v) {
    return v / (spec.nodes / spec.communities);
}

UndirectedGraph gen_sbm_undirected(const SbmSpec& spec) {
    validate_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId u = 0; u < spec.nodes; ++u) {
        for (VertexId v = u + 1; v < spec.nodes; ++v) {
            const double p = community_of(spec, u) == community_of(spec, v) ? spec.p_in : spec.p_out;
            if (coin(rng) < p) edges.emplace_back(u, v);
        }
    }
    return UndirectedGraph(spec.nodes, std::move(edges));
}

Digraph gen_sbm_directed(const SbmSpec& spec) {
    validate_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId u = 0; u < spec.nodes; ++u) {
        for (VertexId v = u + 1; v < spec.nodes; ++v) {
            const double p = community_of(spec, u) == community_of(spec, v) ? spec.p_in : spec.p_out;
            if (coin(rng) < p) {
                if (coin(rng) < 0.5) {
                    edges.emplace_back(u, v);
                } else {
                    edges.emplace_back(v, u);
                }
            }
        }
    }
    return Digraph(spec.nodes, std::move(edges));
}

std::vector<int> edge_labels(const DirectedSimplicialComplex& lift, const SbmSpec& spec) {
    std::vector<int> labels;
    labels.reserve(lift.size(1));
    for (const Tuple& e : lift.simplices(1)) {
        const std::size_t cu = community_of(spec, e[0]);
        const std::size_t cv = community_of(spec, e[1]);
        labels.push_back(cu == cv ? static_cast<int>(cu) : static_cast<int>(spec.communities));
    }
    return labels;
}

CsrMatrix diffusion_operator(const DirectedSimplicialComplex& lift, bool directed) {
    if (directed) return to_operator(lower_adjacency(lift, 1, 1, 0, 1));
    return undirected_lower_operator(lift, 1);
}

Matrix diffuse(const CsrMatrix& op, Matrix x, int t) {
    if (t < 0) throw std::invalid_argument("diffusion order must be non-negative");
    for (int step = 0; step < t; ++step) x = op.apply(x);
    return x;
}

std::vector<SignalSample> gen_signals(const DirectedSimplicialComplex& lift, bool directed,
                                      const std::vector<int>& labels, int num_partitions,
                                      const SignalGenSpec& spec) {
    const std::size_t n_edges = lift.size(1);
    if (labels.size() != n_edges) throw ShapeMismatch("label count differs from edge count");
    if (n_edges == 0) throw EmptyCommunity("the lift has no edges");

    std::vector<std::vector<std::size_t>> partition_edges(num_partitions);
    for (std::size_t e = 0; e < n_edges; ++e) {
        if (labels[e] < 0 || labels[e] >= num_partitions)
            throw std::invalid_argument("edge label outside partition range");
        partition_edges[labels[e]].push_back(e);
    }
    for (int p = 0; p < num_partitions; ++p) {
        if (partition_edges[p].empty())
            throw EmptyCommunity("partition " + std::to_string(p) + " has no edges");
    }

    const CsrMatrix op = diffusion_operator(lift, directed);
    std::vector<SignalSample> samples;
    samples.reserve(spec.count);

    for (std::size_t idx = 0; idx < spec.count; ++idx) {
        std::mt19937_64 rng(splitmix64(spec.seed ^ (0x51ed2701u + idx * 0x9e3779b97f4a7c15ull)));
        std::normal_distribution<double> base(0.0, std::sqrt(1.0 / static_cast<double>(n_edges)));
        std::normal_distribution<double> unit(0.0, 1.0);

        SignalSample sample;
        sample.snr_db = spec.snr_db;
        sample.x = Matrix(n_edges, 1);
        for (std::size_t e = 0; e < n_edges; ++e) sample.x.data[e] = base(rng);

        sample.label = static_cast<int>(rng() % static_cast<std::uint64_t>(num_partitions));
        const double alpha = unit(rng);
        std::vector<std::size_t> pool = partition_edges[sample.label];
        const std::size_t spikes = std::min(spec.spike_edges, pool.size());
        for (std::size_t s = 0; s < spikes; ++s) {
            const std::size_t pick = s + rng() % (pool.size() - s);
            std::swap(pool[s], pool[pick]);
            sample.x.data[pool[s]] += alpha;
            sample.spiked.push_back(static_cast<std::uint32_t>(pool[s]));
        }

        std::student_t_distribution<double> order_dist(10.0);
        const double draw = order_dist(rng);
        sample.t = static_cast<int>(std::min(100.0, std::round(std::abs(draw))));
        sample.x = diffuse(op, std::move(sample.x), sample.t);

        if (std::isfinite(spec.snr_db)) {
            Matrix noise(n_edges, 1);
            for (std::size_t e = 0; e < n_edges; ++e) noise.data[e] = unit(rng);
            double p_signal = 0.0, p_noise = 0.0;
            for (double v : sample.x.data) p_signal += v * v;
            for (double v : noise.data) p_noise += v * v;
            if (p_signal > 0.0 && p_noise > 0.0) {
                const double target_noise = p_signal / std::pow(10.0, spec.snr_db / 10.0);
                const double scale = std::sqrt(target_noise / p_noise);
                for (std::size_t e = 0; e < n_edges; ++e)
                    sample.x.data[e] += scale * noise.data[e];
            }
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

SplitIndices split(const std::vector<int>& labels, std::array<double, 3> ratios,
                   std::uint64_t seed) {
    const double total = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");

    std::map<int, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < labels.size(); ++i) strata[labels[i]].push_back(i);

    SplitIndices out;
    std::mt19937_64 rng(seed);
    for (auto& [label, members] : strata) {
        std::shuffle(members.begin(), members.end(), rng);
        const std::size_t m = members.size();
        const std::size_t n_train = static_cast<std::size_t>(std::llround(ratios[0] * m));
        const std::size_t n_val =
            static_cast<std::size_t>(std::llround((ratios[0] + ratios[1]) * m)) - n_train;
        for (std::size_t i = 0; i < m; ++i) {
            if (i < n_train) {
                out.train.push_back(members[i]);
            } else if (i < n_train + n_val) {
                out.val.push_back(members[i]);
            } else {
                out.test.push_back(members[i]);
            }
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("truncated dataset file");
    return value;
}

constexpr std::uint32_t kDatasetMagic = 0x53445444;  // "DTDS"
constexpr std::uint32_t kDatasetVersion = 1;

}  // namespace

void save_dataset(const std::vector<SignalSample>& samples, std::size_t n_edges, double snr_db,
                  std::uint64_t seed, bool directed, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_pod(out, kDatasetMagic);
    write_pod(out, kDatasetVersion);
    write_pod<std::uint64_t>(out, n_edges);
    write_pod<std::uint64_t>(out, 1);  // feature count
    write_pod<std::uint64_t>(out, samples.size());
    write_pod<double>(out, snr_db);
    write_pod<std::uint64_t>(out, seed);
    write_pod<std::uint8_t>(out, directed ? 1 : 0);
    for (int i = 0; i < 7; ++i) write_pod<std::uint8_t>(out, 0);
    for (const SignalSample& s : samples) {
        if (s.x.rows != n_edges || s.x.cols != 1)
            throw ShapeMismatch("sample shape differs from the dataset header");
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.label));
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.t));
        out.write(reinterpret_cast<const char*>(s.x.data.data()),
                  static_cast<std::streamsize>(n_edges * sizeof(double)));
    }
}

std::vector<SignalSample> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (read_pod<std::uint32_t>(in) != kDatasetMagic)
        throw std::runtime_error("not a dataset file: " + path);
    if (read_pod<std::uint32_t>(in) != kDatasetVersion)
        throw std::runtime_error("unsupported dataset version");
    const auto n_edges = read_pod<std::uint64_t>(in);
    const auto features = read_pod<std::uint64_t>(in);
    if (features != 1) throw std::runtime_error("unsupported feature count");
    const auto count = read_pod<std::uint64_t>(in);
    const double snr_db = read_pod<double>(in);
    read_pod<std::uint64_t>(in);  // seed, informational
    read_pod<std::uint8_t>(in);   // mode, informational
    for (int i = 0; i < 7; ++i) read_pod<std::uint8_t>(in);
    std::vector<SignalSample> samples;
    samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        SignalSample s;
        s.snr_db = snr_db;
        s.label = static_cast<int>(read_pod<std::uint32_t>(in));
        s.t = static_cast<int>(read_pod<std::uint32_t>(in));
        s.x = Matrix(n_edges, 1);
        in.read(reinterpret_cast<char*>(s.x.data.data()),
                static_cast<std::streamsize>(n_edges * sizeof(double)));
        if (!in) throw std::runtime_error("truncated dataset file");
        samples.push_back(std::move(s));
    }
    return samples;
}

void save_labels_csv(const std::vector<SignalSample>& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "index,label\n";
    for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << samples[i].label << "\n";
}

}  // namespace dirtopo

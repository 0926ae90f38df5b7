#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/datagen.hpp"
#include "dirtopo/flag_lift.hpp"

using namespace dirtopo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SbmSpec small_spec(std::uint64_t seed) {
    SbmSpec spec;
    spec.nodes = 30;
    spec.communities = 10;
    spec.directed = true;
    spec.seed = seed;
    return spec;
}

double power(const Matrix& x) {
    double p = 0.0;
    for (double v : x.data) p += v * v;
    return p / static_cast<double>(x.data.size());
}

}  // namespace

TEST_CASE("intra-community edge counts track the stated probability") {
    // Expected undirected intra edges per community: C(7,2) * 0.9 = 18.9.
    SbmSpec spec;
    spec.nodes = 70;
    spec.communities = 10;
    double total = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        spec.seed = 1000 + s;
        const UndirectedGraph g = gen_sbm_undirected(spec);
        std::size_t intra = 0;
        for (auto [u, v] : g.edges()) {
            if (community_of(spec, u) == community_of(spec, v)) ++intra;
        }
        total += static_cast<double>(intra) / 10.0;
    }
    const double mean = total / seeds;
    CHECK(mean > 18.9 * 0.9);
    CHECK(mean < 18.9 * 1.1);
}

TEST_CASE("degenerate probabilities and fixed seeds behave") {
    SbmSpec spec = small_spec(5);
    spec.p_in = 0.0;
    spec.p_out = 0.0;
    CHECK(gen_sbm_undirected(spec).edge_count() == 0);
    CHECK(gen_sbm_directed(spec).edge_count() == 0);

    SbmSpec again = small_spec(5);
    CHECK(gen_sbm_directed(again).edges() == gen_sbm_directed(again).edges());
    SbmSpec bad = small_spec(1);
    bad.communities = 7;  // 30 % 7 != 0
    CHECK_THROWS_AS(gen_sbm_directed(bad), std::invalid_argument);
}

TEST_CASE("edge labels split intra communities from the shared inter class") {
    const SbmSpec spec = small_spec(11);
    const Digraph g = gen_sbm_directed(spec);
    const auto lift = lift_directed_flag(g, 1);
    const auto labels = edge_labels(lift, spec);
    REQUIRE(labels.size() == lift.size(1));
    for (std::size_t e = 0; e < labels.size(); ++e) {
        const Tuple& t = lift.simplices(1)[e];
        if (community_of(spec, t[0]) == community_of(spec, t[1])) {
            CHECK(labels[e] == static_cast<int>(community_of(spec, t[0])));
        } else {
            CHECK(labels[e] == 10);
        }
    }
}

TEST_CASE("the diffusion operator matches the adjacency module bit for bit") {
    const SbmSpec spec = small_spec(13);
    const auto lift = lift_directed_flag(gen_sbm_directed(spec), 2);
    CHECK(diffusion_operator(lift, true) == to_operator(lower_adjacency(lift, 1, 1, 0, 1)));

    const auto ulift = lift_undirected_flag(gen_sbm_undirected(spec), 2);
    const CsrMatrix s = diffusion_operator(ulift, false);
    CHECK(s == s.transpose());
    CHECK(s == undirected_lower_operator(ulift, 1));
}

TEST_CASE("diffusion order zero is the identity") {
    const auto lift = lift_directed_flag(gen_sbm_directed(small_spec(17)), 1);
    const CsrMatrix op = diffusion_operator(lift, true);
    Matrix x(lift.size(1), 1);
    for (std::size_t e = 0; e < x.data.size(); ++e) x.data[e] = std::sin(double(e));
    CHECK(diffuse(op, x, 0).data == x.data);
    CHECK(diffuse(op, x, 1).data == op.apply(x).data);
}

TEST_CASE("signal generation is seeded, labeled, and power-accurate") {
    const SbmSpec sbm = small_spec(19);
    const auto lift = lift_directed_flag(gen_sbm_directed(sbm), 2);
    const auto labels = edge_labels(lift, sbm);

    SignalGenSpec clean_spec;
    clean_spec.count = 60;
    clean_spec.spike_edges = 3;
    clean_spec.snr_db = kInf;
    clean_spec.seed = 101;
    const auto clean = gen_signals(lift, true, labels, 11, clean_spec);

    SignalGenSpec noisy_spec = clean_spec;
    noisy_spec.snr_db = 3.0;
    const auto noisy = gen_signals(lift, true, labels, 11, noisy_spec);

    REQUIRE(clean.size() == noisy.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
        // The clean run shares every draw before the noise step.
        CHECK(clean[i].label == noisy[i].label);
        CHECK(clean[i].t == noisy[i].t);

        // Label consistency: every spiked edge belongs to the labeled partition.
        for (std::uint32_t e : clean[i].spiked) CHECK(labels[e] == clean[i].label);

        // Power accounting: the realized SNR matches the target.
        Matrix noise(clean[i].x.rows, 1);
        for (std::size_t e = 0; e < noise.data.size(); ++e)
            noise.data[e] = noisy[i].x.data[e] - clean[i].x.data[e];
        const double p_signal = power(clean[i].x);
        const double p_noise = power(noise);
        if (p_signal > 0.0 && p_noise > 0.0) {
            const double snr = 10.0 * std::log10(p_signal / p_noise);
            CHECK(std::abs(snr - 3.0) < 0.1);
        }
    }

    // Determinism.
    const auto repeat = gen_signals(lift, true, labels, 11, noisy_spec);
    for (std::size_t i = 0; i < repeat.size(); ++i) CHECK(repeat[i].x.data == noisy[i].x.data);
}

TEST_CASE("empty partitions are reported") {
    // p_out = 0 leaves the inter-community class empty.
    SbmSpec spec = small_spec(23);
    spec.p_out = 0.0;
    const auto lift = lift_directed_flag(gen_sbm_directed(spec), 1);
    const auto labels = edge_labels(lift, spec);
    SignalGenSpec gen;
    gen.count = 1;
    CHECK_THROWS_AS(gen_signals(lift, true, labels, 11, gen), EmptyCommunity);
}

TEST_CASE("stratified split respects ratios per class") {
    std::vector<int> labels;
    for (int i = 0; i < 1000; ++i) labels.push_back(i % 10);
    const auto idx = split(labels, {0.8, 0.1, 0.1}, 7);
    CHECK(idx.train.size() == 800);
    CHECK(idx.val.size() == 100);
    CHECK(idx.test.size() == 100);

    // Per-class proportions within one sample.
    std::map<int, int> train_per_class;
    for (std::size_t i : idx.train) ++train_per_class[labels[i]];
    for (auto [label, count] : train_per_class) CHECK(std::abs(count - 80) <= 1);

    const auto again = split(labels, {0.8, 0.1, 0.1}, 7);
    CHECK(again.train == idx.train);
    CHECK(again.val == idx.val);
    CHECK(again.test == idx.test);

    CHECK_THROWS_AS(split(labels, {0.5, 0.1, 0.1}, 7), std::invalid_argument);
}

TEST_CASE("dataset files round trip") {
    const SbmSpec sbm = small_spec(29);
    const auto lift = lift_directed_flag(gen_sbm_directed(sbm), 2);
    const auto labels = edge_labels(lift, sbm);
    SignalGenSpec gen;
    gen.count = 8;
    gen.snr_db = 2.0;
    gen.seed = 3;
    const auto samples = gen_signals(lift, true, labels, 11, gen);

    const std::string path = "dataset_roundtrip.bin";
    save_dataset(samples, lift.size(1), 2.0, 3, true, path);
    const auto restored = load_dataset(path);
    std::remove(path.c_str());
    REQUIRE(restored.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(restored[i].label == samples[i].label);
        CHECK(restored[i].t == samples[i].t);
        CHECK(restored[i].x.data == samples[i].x.data);
    }
}

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dirtopo/config.hpp"
#include "dirtopo/dswl.hpp"

namespace dirtopo {

/// The canonical digraph pair separating the node-level and simplicial
/// tests: both are 2-in/2-out regular on six vertices, but only the first
/// lift contains directed triangles.
CounterexamplePair counterexample_fixture();

struct ExpressivitySettings {
    int seeds = 5;
    int layers = 1;
    std::size_t width = 16;
    int epochs = 400;
    double lr = 1e-2;
};

struct ExpressivityResult {
    std::vector<double> dirgnn_per_seed;
    std::vector<double> dirsnn_per_seed;
    double dirgnn_mean = 0.0;
    double dirsnn_mean = 0.0;
};

/// Trains Dir-GNN on the fixture digraphs (constant node features) and
/// Dir-SNN on their directed flag lifts (constant simplex features, four
/// lower relations plus the (1,2,0)-upper one) and reports two-class
/// discrimination accuracy.
ExpressivityResult run_expressivity(const ExpressivitySettings& settings);

struct BenchProfile {
    std::string name = "desk";
    bool directed = true;
    std::size_t nodes = 30;
    std::size_t communities = 10;
    double p_in = 0.9;
    double p_out = 0.01;
    std::size_t signals = 200;
    std::size_t spike_edges = 5;
    std::vector<double> snr_grid = {-5.0, 0.0, 5.0};
    std::vector<std::uint64_t> seeds = {1, 2};
    std::vector<long> grid_layers = {1, 2};
    std::vector<long> grid_widths = {16, 32};
    int epochs = 60;
    double lr = 3e-3;
    std::size_t batch = 32;
    std::array<double, 3> ratios = {0.8, 0.1, 0.1};

    static BenchProfile desk();
    static BenchProfile paper();
};

/// Profile resolution: the [experiment] profile key picks the base, every
/// other key overrides one field.
BenchProfile profile_from_config(const Config& config);

struct BenchCell {
    std::string model;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    long layers = 0;
    long width = 0;
    double val_accuracy = 0.0;
    double test_accuracy = 0.0;
    bool selected = false;
    double wall_ms = 0.0;
};

struct BenchResult {
    std::vector<BenchCell> cells;  // every grid cell of every (model, snr, seed)
    /// model -> snr -> test accuracies of the selected cells across seeds
    std::vector<std::string> models;
};

/// Runs the source-localization benchmark: one shared dataset per
/// (snr, seed), a grid search per model selected on validation accuracy
/// (ties: fewer parameters, then fewer layers), then test accuracy.
/// Writes results.csv, plot.csv, runs.csv, and archives the config.
BenchResult run_bench(const BenchProfile& profile, const Config& config,
                      const std::string& out_dir, bool dry_run, std::ostream& log);

double mean_accuracy(const BenchResult& result, const std::string& model, double snr_db);

}  // namespace dirtopo

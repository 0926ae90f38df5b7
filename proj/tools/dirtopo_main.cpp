#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/complex.hpp"
#include "dirtopo/datagen.hpp"
#include "dirtopo/dswl.hpp"
#include "dirtopo/experiments.hpp"
#include "dirtopo/flag_lift.hpp"
#include "dirtopo/graph.hpp"

namespace {

using nlohmann::json;

std::string counts_line(const dirtopo::DirectedSimplicialComplex& complex) {
    std::ostringstream oss;
    const auto counts = complex.per_dim_counts();
    for (std::size_t d = 0; d < counts.size(); ++d) {
        if (d) oss << ' ';
        oss << d << ':' << counts[d];
    }
    return oss.str();
}

json histogram_json(const dirtopo::StableHistogram& hist) {
    json dims = json::array();
    for (const auto& dim_hist : hist.per_dim) {
        json entries = json::array();
        for (const auto& [color, count] : dim_hist) entries.push_back({color, count});
        dims.push_back(entries);
    }
    return dims;
}

int run_lift(const std::string& graph_file, bool directed, int max_dim,
             const std::string& out_file) {
    dirtopo::DirectedSimplicialComplex complex;
    if (directed) {
        complex = dirtopo::lift_directed_flag(dirtopo::load_digraph(graph_file), max_dim);
    } else {
        complex = dirtopo::lift_undirected_flag(dirtopo::load_undirected(graph_file), max_dim);
    }
    dirtopo::save_complex(complex, out_file);
    std::cout << counts_line(complex) << "\n";
    return 0;
}

int run_adjacency(const std::string& complex_file, int dim, const std::string& direction, int k,
                  int i, int j, const std::string& out_file) {
    const auto complex = dirtopo::load_complex(complex_file);
    dirtopo::AdjacencySpec spec;
    spec.k = k;
    spec.i = i;
    spec.j = j;
    if (direction == "down") {
        spec.direction = dirtopo::Direction::down;
    } else if (direction == "up") {
        spec.direction = dirtopo::Direction::up;
    } else {
        throw dirtopo::ConfigError("--direction must be 'down' or 'up'");
    }
    const auto rel = dirtopo::make_relation(complex, dim, spec);
    if (out_file.empty()) {
        dirtopo::write_relation(rel, std::cout);
    } else {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot open " + out_file + " for writing");
        dirtopo::write_relation(rel, out);
    }
    std::cerr << rel.witnesses().size() << " witnesses\n";
    return 0;
}

int run_dswl(const std::string& file_a, const std::string& file_b, const std::string& variant,
             int max_rounds) {
    dirtopo::RefineOptions options;
    if (variant == "full") {
        options.variant = dirtopo::RefineVariant::full;
    } else if (variant == "reduced") {
        options.variant = dirtopo::RefineVariant::reduced;
    } else {
        throw dirtopo::ConfigError("--variant must be 'full' or 'reduced'");
    }
    options.max_rounds = max_rounds;
    const auto a = dirtopo::load_complex(file_a);
    const auto b = dirtopo::load_complex(file_b);
    auto [ra, rb] = dirtopo::dswl_refine_joint(a, b, options);
    json out;
    out["variant"] = variant;
    out["rounds"] = ra.rounds;
    out["verdict"] =
        ra.histogram == rb.histogram ? "not-distinguished" : "distinguished";
    out["histograms"]["a"] = histogram_json(ra.histogram);
    out["histograms"]["b"] = histogram_json(rb.histogram);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_expressivity(int seeds, int layers, std::size_t width, int epochs, double lr,
                     const std::string& out_file) {
    dirtopo::ExpressivitySettings settings;
    settings.seeds = seeds;
    settings.layers = layers;
    settings.width = width;
    settings.epochs = epochs;
    settings.lr = lr;
    const auto result = dirtopo::run_expressivity(settings);
    std::cout << "model,mean_accuracy\n";
    std::cout << "dirgnn," << result.dirgnn_mean << "\n";
    std::cout << "dirsnn," << result.dirsnn_mean << "\n";
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot open " + out_file + " for writing");
        out << "model,seed,accuracy\n";
        for (std::size_t s = 0; s < result.dirgnn_per_seed.size(); ++s)
            out << "dirgnn," << s << ',' << result.dirgnn_per_seed[s] << "\n";
        for (std::size_t s = 0; s < result.dirsnn_per_seed.size(); ++s)
            out << "dirsnn," << s << ',' << result.dirsnn_per_seed[s] << "\n";
    }
    return 0;
}

int run_bench(const std::string& config_file, const std::string& profile_override,
              const std::string& out_override, long seed_override, bool dry_run) {
    dirtopo::Config config = dirtopo::Config::load(config_file);
    dirtopo::BenchProfile profile = dirtopo::profile_from_config(config);
    if (!profile_override.empty()) {
        std::string text = config.text() + "\n[experiment]\nprofile = " + profile_override + "\n";
        config = dirtopo::Config::parse_text(text);
        profile = dirtopo::profile_from_config(config);
    }
    if (seed_override >= 0) profile.seeds = {static_cast<std::uint64_t>(seed_override)};
    std::string out_dir = out_override;
    if (out_dir.empty()) out_dir = config.get_string("experiment", "out", "bench_out");
    dirtopo::run_bench(profile, config, out_dir, dry_run, std::cout);
    return 0;
}

int run_datagen(std::size_t nodes, std::size_t communities, double p_in, double p_out,
                std::size_t signals, std::size_t spikes, double snr_db, std::uint64_t seed,
                bool directed, const std::string& out_prefix) {
    dirtopo::SbmSpec sbm;
    sbm.nodes = nodes;
    sbm.communities = communities;
    sbm.p_in = p_in;
    sbm.p_out = p_out;
    sbm.directed = directed;
    sbm.seed = seed;
    dirtopo::DirectedSimplicialComplex lift;
    if (directed) {
        lift = dirtopo::lift_directed_flag(dirtopo::gen_sbm_directed(sbm), 2);
    } else {
        lift = dirtopo::lift_undirected_flag(dirtopo::gen_sbm_undirected(sbm), 2);
    }
    const auto labels = dirtopo::edge_labels(lift, sbm);
    dirtopo::SignalGenSpec gen;
    gen.count = signals;
    gen.spike_edges = spikes;
    gen.snr_db = snr_db;
    gen.seed = seed;
    const auto samples = dirtopo::gen_signals(lift, directed, labels,
                                              static_cast<int>(communities) + 1, gen);
    dirtopo::save_complex(lift, out_prefix + ".complex");
    dirtopo::save_dataset(samples, lift.size(1), snr_db, seed, directed, out_prefix + ".bin");
    dirtopo::save_labels_csv(samples, out_prefix + "_labels.csv");
    std::cout << "edges=" << lift.size(1) << " samples=" << samples.size() << " snr_db=" << snr_db
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directed simplicial complexes: lifting, adjacency operators, isomorphism "
                 "tests, and message-passing experiments"};
    app.require_subcommand(1);

    // lift
    auto* lift = app.add_subcommand("lift", "lift a graph file to its flag complex");
    std::string lift_graph, lift_out;
    bool lift_directed = true;
    int lift_max_dim = 2;
    lift->add_option("graph", lift_graph, "graph file ('n <count>' header, 'u v' edge lines)")
        ->required();
    lift->add_flag("--directed,!--undirected", lift_directed, "interpret edges as directed");
    lift->add_option("--max-dim", lift_max_dim, "largest simplex dimension to materialize");
    lift->add_option("--out", lift_out, "output complex file")->required();

    // adjacency
    auto* adjacency = app.add_subcommand("adjacency", "export a (k,i,j)-adjacency relation");
    std::string adj_complex, adj_direction = "down", adj_out;
    int adj_dim = 1, adj_k = 1, adj_i = 0, adj_j = 0;
    adjacency->add_option("complex", adj_complex, "complex file")->required();
    adjacency->add_option("--dim", adj_dim, "simplex dimension the relation lives on");
    adjacency->add_option("--direction", adj_direction, "down or up");
    adjacency->add_option("--k", adj_k, "dimension gap");
    adjacency->add_option("--i", adj_i, "face map index applied to the source side");
    adjacency->add_option("--j", adj_j, "face map index applied to the target side");
    adjacency->add_option("--out", adj_out, "output file (stdout when omitted)");

    // dswl
    auto* dswl = app.add_subcommand("dswl", "compare two complexes with the simplicial test");
    std::string dswl_a, dswl_b, dswl_variant = "full";
    int dswl_max_rounds = -1;
    dswl->add_option("complex_a", dswl_a)->required();
    dswl->add_option("complex_b", dswl_b)->required();
    dswl->add_option("--variant", dswl_variant, "full or reduced update rule");
    dswl->add_option("--max-rounds", dswl_max_rounds, "cap on refinement rounds (-1: none)");

    // expressivity
    auto* expr = app.add_subcommand("expressivity",
                                    "two-class discrimination on the counterexample pair");
    int expr_seeds = 5, expr_layers = 1, expr_epochs = 400;
    std::size_t expr_width = 16;
    double expr_lr = 1e-2;
    std::string expr_out;
    expr->add_option("--seeds", expr_seeds, "number of training seeds");
    expr->add_option("--layers", expr_layers);
    expr->add_option("--width", expr_width);
    expr->add_option("--epochs", expr_epochs);
    expr->add_option("--lr", expr_lr);
    expr->add_option("--out", expr_out, "per-seed accuracies CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "source-localization benchmark over an SNR grid");
    std::string bench_config, bench_profile, bench_out;
    long bench_seed = -1;
    bool bench_dry = false;
    bench->add_option("config", bench_config, "config file")->required();
    bench->add_option("--profile", bench_profile, "desk or paper");
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--seed", bench_seed, "run a single seed");
    bench->add_flag("--dry-run", bench_dry, "print the planned run matrix and exit");

    // datagen
    auto* dgen = app.add_subcommand("datagen", "generate an SBM diffusion dataset");
    std::size_t dg_nodes = 70, dg_comm = 10, dg_signals = 1000, dg_spikes = 5;
    double dg_pin = 0.9, dg_pout = 0.01, dg_snr = 0.0;
    std::uint64_t dg_seed = 0;
    bool dg_directed = true;
    std::string dg_out = "dataset";
    dgen->add_option("--nodes", dg_nodes);
    dgen->add_option("--communities", dg_comm);
    dgen->add_option("--p-in", dg_pin);
    dgen->add_option("--p-out", dg_pout);
    dgen->add_option("--signals", dg_signals);
    dgen->add_option("--spike-edges", dg_spikes);
    dgen->add_option("--snr", dg_snr, "target SNR in dB (inf disables noise)");
    dgen->add_option("--seed", dg_seed);
    dgen->add_flag("--directed,!--undirected", dg_directed);
    dgen->add_option("--out", dg_out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(lift))
            return run_lift(lift_graph, lift_directed, lift_max_dim, lift_out);
        if (app.got_subcommand(adjacency))
            return run_adjacency(adj_complex, adj_dim, adj_direction, adj_k, adj_i, adj_j, adj_out);
        if (app.got_subcommand(dswl)) return run_dswl(dswl_a, dswl_b, dswl_variant, dswl_max_rounds);
        if (app.got_subcommand(expr))
            return run_expressivity(expr_seeds, expr_layers, expr_width, expr_epochs, expr_lr,
                                    expr_out);
        if (app.got_subcommand(bench))
            return run_bench(bench_config, bench_profile, bench_out, bench_seed, bench_dry);
        if (app.got_subcommand(dgen))
            return run_datagen(dg_nodes, dg_comm, dg_pin, dg_pout, dg_signals, dg_spikes, dg_snr,
                               dg_seed, dg_directed, dg_out);
    } catch (const dirtopo::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dirtopo::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

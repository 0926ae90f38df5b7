#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/complex.hpp"
#include "dirtopo/matrix.hpp"

namespace dirtopo {

/// Feature matrix over the simplices of one dimension, rows in canonical
/// SimplexId order.
struct SignalTensor {
    int dim = 0;
    Matrix values;
};

enum class Nonlinearity { relu, identity };

/// One message-passing layer over a working dimension: a set of directed
/// same-dimension adjacencies, optional boundary/coboundary incidences, and
/// an optional kappa term feeding the shared simplex's features into each
/// message.
struct LayerSpec {
    std::vector<AdjacencySpec> relations;
    bool use_boundary = false;
    bool use_coboundary = false;
    bool use_kappa = false;
    std::size_t in_features = 1;
    std::size_t out_features = 16;
    Nonlinearity nonlinearity = Nonlinearity::relu;
};

struct ModelSpec {
    int working_dim = 1;
    std::vector<LayerSpec> layers;
    /// Feature widths of the static lower/upper-dimension inputs; 0 when the
    /// model never reads them.
    std::size_t lower_features = 0;
    std::size_t upper_features = 0;
    /// Hidden widths of the post-pooling MLP head.
    std::vector<std::size_t> head_hidden;
    std::size_t classes = 2;
    std::uint64_t seed = 0;
};

struct LayerParams {
    Matrix w_self;
    std::vector<Matrix> w_rel;    // one per relation
    std::vector<Matrix> w_kappa;  // one per relation when use_kappa
    Matrix w_boundary;            // empty when unused
    Matrix w_coboundary;
    Matrix bias;  // 1 x out
};

struct Parameters {
    std::vector<LayerParams> layers;
    std::vector<Matrix> head_w;
    std::vector<Matrix> head_b;
};

/// Visits every parameter tensor in a fixed order (the checkpoint, the
/// optimizer state, and gradient flattening all rely on the same order).
void for_each_tensor(Parameters& params, const std::function<void(const std::string&, Matrix&)>& fn);
void for_each_tensor(const Parameters& params,
                     const std::function<void(const std::string&, const Matrix&)>& fn);

/// Message-passing operators materialized for one complex.
struct CompiledLayer {
    std::vector<CsrMatrix> rel_ops;    // witness-count operators, one per relation
    std::vector<CsrMatrix> kappa_ops;  // per relation when use_kappa
    /// Per kappa operator: whether the shared simplex lives one dimension
    /// below (down relations) or above (up relations) the working dimension.
    std::vector<std::uint8_t> kappa_from_lower;
    CsrMatrix boundary_op;   // |S_d| x |S_{d-1}|
    CsrMatrix coboundary_op; // |S_d| x |S_{d+1}|
};

struct CompiledModel {
    ModelSpec spec;
    std::size_t working_count = 0;
    std::size_t lower_count = 0;
    std::size_t upper_count = 0;
    std::vector<CompiledLayer> layers;
};

/// Resolves every relation of every layer against the complex.
CompiledModel compile_model(const DirectedSimplicialComplex& complex, const ModelSpec& spec);

/// Variant taking pre-built same-dimension operators per layer (used by the
/// undirected-SNN and GCN baselines whose operators are not single
/// (k,i,j)-relations). Incidence and kappa terms are unavailable here.
CompiledModel compile_model_ops(const ModelSpec& spec, std::size_t working_count,
                                std::vector<std::vector<CsrMatrix>> rel_ops_per_layer);

/// Facet incidence: rows are d-simplices, columns their (d-1)-facets.
CsrMatrix boundary_operator(const DirectedSimplicialComplex& complex, int dim);
/// Transposed incidence against the (d+1)-simplices.
CsrMatrix coboundary_operator(const DirectedSimplicialComplex& complex, int dim);

/// Symmetric-normalized node operator D^{-1/2} (A + I) D^{-1/2} over the
/// undirected support of the complex's 1-skeleton.
CsrMatrix gcn_normalized_operator(const DirectedSimplicialComplex& complex);

/// Projects edge signals onto nodes: each node receives the sum of the
/// features of its incident edges.
Matrix project_edges_to_nodes(const DirectedSimplicialComplex& complex, const Matrix& edge_feats);

struct ModelInputs {
    SignalTensor x;
    std::optional<SignalTensor> lower;
    std::optional<SignalTensor> upper;
};

/// Uniform fan-in initialization from the model seed; biases start at zero.
Parameters init_parameters(const CompiledModel& model, std::uint64_t seed);

/// One layer: x' = nonlinearity(x W_self + sum_r Op_r x W_r [+ kappa terms]
/// [+ B x_lower W_B] [+ C x_upper W_C] + bias), one message per witness.
Matrix layer_forward(const CompiledLayer& layer, const LayerSpec& spec, const LayerParams& params,
                     const Matrix& x, const Matrix* x_lower = nullptr,
                     const Matrix* x_upper = nullptr);

/// Stacked layers on the working dimension, column-wise max pool over
/// simplices, then the MLP head; returns 1 x classes logits.
Matrix model_forward(const CompiledModel& model, const Parameters& params,
                     const ModelInputs& inputs);

double cross_entropy(const Matrix& logits, int label);

/// Loss and full analytic gradient for one labeled sample.
std::pair<double, Parameters> model_backward(const CompiledModel& model, const Parameters& params,
                                             const ModelInputs& inputs, int label);

/// Max relative error (unit-floored denominator) between analytic gradients
/// and central finite differences over a seeded 5% parameter subsample.
double grad_check(const CompiledModel& model, const Parameters& params, const ModelInputs& inputs,
                  int label, double epsilon, std::uint64_t seed = 17);

struct Sample {
    SignalTensor x;
    int label = 0;
};

struct TrainHyper {
    double lr = 1e-3;
    int epochs = 100;
    std::size_t batch = 32;
    std::uint64_t seed = 0;
    /// Stop once training accuracy reaches this level; > 1 disables.
    double stop_at_train_accuracy = 2.0;
};

struct MetricsRow {
    int epoch = 0;
    std::string split;
    double loss = 0.0;
    double accuracy = 0.0;
};

struct TrainResult {
    Parameters params;
    std::vector<MetricsRow> trace;
};

Parameters zeros_like(const Parameters& params);
void add_parameters(Parameters& acc, const Parameters& inc);
void scale_parameters(Parameters& params, double s);
std::size_t parameter_count(const Parameters& params);

/// Adam with the standard decay constants (0.9, 0.999, eps 1e-8).
struct AdamState {
    Parameters m;
    Parameters v;
    long step = 0;
};

AdamState init_adam(const Parameters& params);
void adam_step(Parameters& params, const Parameters& grads, AdamState& state, double lr);

/// Adam on mean cross-entropy. Deterministic for a fixed seed: shuffling,
/// init, and batch reduction order are all seed-derived.
TrainResult train(const CompiledModel& model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainHyper& hyper);

double evaluate_accuracy(const CompiledModel& model, const Parameters& params,
                         const std::vector<Sample>& set);
double evaluate_loss(const CompiledModel& model, const Parameters& params,
                     const std::vector<Sample>& set);

int predict(const CompiledModel& model, const Parameters& params, const Sample& sample);

/// Versioned binary checkpoint: shape table + little-endian doubles.
void save_parameters(const Parameters& params, const std::string& path);
Parameters load_parameters(const std::string& path);

void write_metrics_csv(const std::vector<MetricsRow>& trace, const std::string& path);

/// Edge-level Dir-SNN over the four directed lower adjacencies (optionally
/// plus the (1,2,0)-upper adjacency through triangles).
ModelSpec dirsnn_edge_spec(int layers, std::size_t width, std::size_t classes, bool with_upper,
                           std::uint64_t seed);

/// Undirected convolutional SNN on the union lower adjacency of edges.
CompiledModel build_snn_edge_model(const DirectedSimplicialComplex& complex, int layers,
                                   std::size_t width, std::size_t classes, std::uint64_t seed);

/// Dir-GNN on nodes: separate in- and out-neighbor aggregation via the
/// (1,0,1)- and (1,1,0)-upper adjacencies.
CompiledModel build_dirgnn_node_model(const DirectedSimplicialComplex& complex, int layers,
                                      std::size_t width, std::size_t classes, std::uint64_t seed);

/// GCN on nodes with the symmetric normalized operator.
CompiledModel build_gcn_node_model(const DirectedSimplicialComplex& complex, int layers,
                                   std::size_t width, std::size_t classes, std::uint64_t seed);

}  // namespace dirtopo

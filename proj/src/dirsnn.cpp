#include "dirtopo/dirsnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace dirtopo {

namespace {

template <typename Params, typename Fn>
void visit_tensors(Params& params, Fn&& fn) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& layer = params.layers[l];
        const std::string prefix = "layer" + std::to_string(l) + ".";
        fn(prefix + "w_self", layer.w_self);
        for (std::size_t r = 0; r < layer.w_rel.size(); ++r)
            fn(prefix + "w_rel" + std::to_string(r), layer.w_rel[r]);
        for (std::size_t r = 0; r < layer.w_kappa.size(); ++r)
            fn(prefix + "w_kappa" + std::to_string(r), layer.w_kappa[r]);
        if (layer.w_boundary.rows > 0) fn(prefix + "w_boundary", layer.w_boundary);
        if (layer.w_coboundary.rows > 0) fn(prefix + "w_coboundary", layer.w_coboundary);
        fn(prefix + "bias", layer.bias);
    }
    for (std::size_t h = 0; h < params.head_w.size(); ++h) {
        fn("head.w" + std::to_string(h), params.head_w[h]);
        fn("head.b" + std::to_string(h), params.head_b[h]);
    }
}

void validate_model(const CompiledModel& model) {
    const ModelSpec& spec = model.spec;
    if (spec.layers.empty()) throw ShapeMismatch("model needs at least one layer");
    if (spec.classes < 2) throw ShapeMismatch("model needs at least two classes");
    if (spec.layers.size() != model.layers.size())
        throw ShapeMismatch("layer spec/operator count mismatch");
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        if (model.layers[l].rel_ops.empty() && !ls.use_boundary && !ls.use_coboundary)
            throw ShapeMismatch("layer " + std::to_string(l) +
                                " enables no relation or incidence");
        if (l > 0 && ls.in_features != spec.layers[l - 1].out_features)
            throw ShapeMismatch("layer widths do not chain at layer " + std::to_string(l));
        if (ls.in_features == 0 || ls.out_features == 0)
            throw ShapeMismatch("zero feature width");
    }
}

}  // namespace

void for_each_tensor(Parameters& params,
                     const std::function<void(const std::string&, Matrix&)>& fn) {
    visit_tensors(params, fn);
}

void for_each_tensor(const Parameters& params,
                     const std::function<void(const std::string&, const Matrix&)>& fn) {
    visit_tensors(params, fn);
}

CsrMatrix boundary_operator(const DirectedSimplicialComplex& complex, int dim) {
    if (dim < 1) throw std::invalid_argument("boundary operator requires dim >= 1");
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    for (std::uint32_t s = 0; s < complex.size(dim); ++s) {
        for (SimplexId f : boundary(complex, {dim, s})) t.emplace_back(s, f.index, 1.0);
    }
    return CsrMatrix::from_triplets(complex.size(dim), complex.size(dim - 1), std::move(t));
}

CsrMatrix coboundary_operator(const DirectedSimplicialComplex& complex, int dim) {
    if (dim + 1 > complex.dim()) {
        return CsrMatrix(complex.size(dim), 0);
    }
    return boundary_operator(complex, dim + 1).transpose();
}

CsrMatrix gcn_normalized_operator(const DirectedSimplicialComplex& complex) {
    const std::size_t n = complex.size(0);
    std::set<std::pair<std::uint32_t, std::uint32_t>> support;
    for (const Tuple& e : complex.simplices(1)) {
        support.emplace(std::min(e[0], e[1]), std::max(e[0], e[1]));
    }
    std::vector<double> degree(n, 1.0);  // self-loop included
    for (auto [u, v] : support) {
        degree[u] += 1.0;
        degree[v] += 1.0;
    }
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> t;
    for (std::uint32_t v = 0; v < n; ++v) t.emplace_back(v, v, 1.0 / degree[v]);
    for (auto [u, v] : support) {
        const double w = 1.0 / std::sqrt(degree[u] * degree[v]);
        t.emplace_back(u, v, w);
        t.emplace_back(v, u, w);
    }
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

Matrix project_edges_to_nodes(const DirectedSimplicialComplex& complex, const Matrix& edge_feats) {
    return boundary_operator(complex, 1).apply_transpose(edge_feats);
}

CompiledModel compile_model(const DirectedSimplicialComplex& complex, const ModelSpec& spec) {
    CompiledModel model;
    model.spec = spec;
    const int d = spec.working_dim;
    model.working_count = complex.size(d);
    model.lower_count = d >= 1 ? complex.size(d - 1) : 0;
    model.upper_count = complex.size(d + 1);
    for (const LayerSpec& ls : spec.layers) {
        CompiledLayer layer;
        for (const AdjacencySpec& rel_spec : ls.relations) {
            const AdjacencyRelation rel = make_relation(complex, d, rel_spec);
            layer.rel_ops.push_back(counts_operator(rel));
            if (ls.use_kappa) {
                if (rel_spec.k != 1)
                    throw std::invalid_argument(
                        "kappa features are wired to the adjacent dimensions, so use_kappa "
                        "requires k = 1");
                layer.kappa_ops.push_back(kappa_operator(rel, complex));
                layer.kappa_from_lower.push_back(rel_spec.direction == Direction::down ? 1 : 0);
            }
        }
        if (ls.use_boundary) {
            if (d < 1) throw std::invalid_argument("boundary messages need working_dim >= 1");
            layer.boundary_op = boundary_operator(complex, d);
        }
        if (ls.use_coboundary) layer.coboundary_op = coboundary_operator(complex, d);
        model.layers.push_back(std::move(layer));
    }
    validate_model(model);
    return model;
}

CompiledModel compile_model_ops(const ModelSpec& spec, std::size_t working_count,
                                std::vector<std::vector<CsrMatrix>> rel_ops_per_layer) {
    if (rel_ops_per_layer.size() != spec.layers.size())
        throw ShapeMismatch("operator list / layer count mismatch");
    CompiledModel model;
    model.spec = spec;
    model.working_count = working_count;
    for (auto& ops : rel_ops_per_layer) {
        for (const CsrMatrix& op : ops) {
            if (op.rows != working_count || op.cols != working_count)
                throw ShapeMismatch("operator shape does not match the working dimension");
        }
        CompiledLayer layer;
        layer.rel_ops = std::move(ops);
        model.layers.push_back(std::move(layer));
    }
    validate_model(model);
    return model;
}

Parameters init_parameters(const CompiledModel& model, std::uint64_t seed) {
    const ModelSpec& spec = model.spec;
    Parameters params;
    params.layers.resize(spec.layers.size());
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        LayerParams& lp = params.layers[l];
        lp.w_self = Matrix(ls.in_features, ls.out_features);
        lp.w_rel.assign(model.layers[l].rel_ops.size(), Matrix(ls.in_features, ls.out_features));
        if (ls.use_kappa) {
            lp.w_kappa.clear();
            for (std::uint8_t from_lower : model.layers[l].kappa_from_lower) {
                const std::size_t width = from_lower ? spec.lower_features : spec.upper_features;
                if (width == 0)
                    throw ShapeMismatch("kappa features requested but adjacent width is zero");
                lp.w_kappa.emplace_back(width, ls.out_features);
            }
        }
        if (ls.use_boundary) {
            if (spec.lower_features == 0)
                throw ShapeMismatch("boundary messages requested but lower_features is zero");
            lp.w_boundary = Matrix(spec.lower_features, ls.out_features);
        }
        if (ls.use_coboundary) {
            if (spec.upper_features == 0)
                throw ShapeMismatch("coboundary messages requested but upper_features is zero");
            lp.w_coboundary = Matrix(spec.upper_features, ls.out_features);
        }
        lp.bias = Matrix(1, ls.out_features);
    }
    std::size_t width = spec.layers.back().out_features;
    for (std::size_t h : spec.head_hidden) {
        params.head_w.emplace_back(width, h);
        params.head_b.emplace_back(1, h);
        width = h;
    }
    params.head_w.emplace_back(width, spec.classes);
    params.head_b.emplace_back(1, spec.classes);

    std::mt19937_64 rng(seed);
    for_each_tensor(params, [&rng](const std::string& name, Matrix& m) {
        const bool is_bias = name.find("bias") != std::string::npos ||
                             name.find("head.b") != std::string::npos;
        if (is_bias) return;  // biases start at zero
        const double scale = 1.0 / std::sqrt(static_cast<double>(m.rows));
        std::uniform_real_distribution<double> dist(-scale, scale);
        for (double& x : m.data) x = dist(rng);
    });
    return params;
}

namespace {

struct LayerCache {
    Matrix x_in;
    std::vector<Matrix> rel_msgs;    // Op_r * x_in
    std::vector<Matrix> kappa_msgs;  // KOp_r * x_adj
    Matrix boundary_msg;
    Matrix coboundary_msg;
    Matrix pre;
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    Matrix h_last;
    std::vector<std::size_t> argmax;
    Matrix pooled;
    std::vector<Matrix> head_in;
    std::vector<Matrix> head_pre;
    Matrix logits;
};

Matrix layer_forward_cached(const CompiledLayer& layer, const LayerSpec& spec,
                            const LayerParams& params, const Matrix& x, const Matrix* x_lower,
                            const Matrix* x_upper, LayerCache* cache) {
    if (x.cols != spec.in_features) throw ShapeMismatch("input feature width mismatch");
    Matrix pre = matmul(x, params.w_self);
    add_row_inplace(pre, params.bias);
    for (std::size_t r = 0; r < layer.rel_ops.size(); ++r) {
        if (layer.rel_ops[r].cols != x.rows)
            throw ShapeMismatch("relation operator does not match signal row count");
        Matrix msg = layer.rel_ops[r].apply(x);
        add_inplace(pre, matmul(msg, params.w_rel[r]));
        if (cache) cache->rel_msgs.push_back(std::move(msg));
    }
    if (spec.use_kappa) {
        for (std::size_t r = 0; r < layer.kappa_ops.size(); ++r) {
            const Matrix* adj = layer.kappa_from_lower[r] ? x_lower : x_upper;
            if (!adj) throw ShapeMismatch("kappa term needs the adjacent-dimension signal");
            Matrix msg = layer.kappa_ops[r].apply(*adj);
            add_inplace(pre, matmul(msg, params.w_kappa[r]));
            if (cache) cache->kappa_msgs.push_back(std::move(msg));
        }
    }
    if (spec.use_boundary) {
        if (!x_lower) throw ShapeMismatch("boundary messages need the lower-dimension signal");
        Matrix msg = layer.boundary_op.apply(*x_lower);
        add_inplace(pre, matmul(msg, params.w_boundary));
        if (cache) cache->boundary_msg = std::move(msg);
    }
    if (spec.use_coboundary) {
        if (!x_upper) throw ShapeMismatch("coboundary messages need the upper-dimension signal");
        Matrix msg = layer.coboundary_op.apply(*x_upper);
        add_inplace(pre, matmul(msg, params.w_coboundary));
        if (cache) cache->coboundary_msg = std::move(msg);
    }
    if (cache) {
        cache->x_in = x;
        cache->pre = pre;
    }
    if (spec.nonlinearity == Nonlinearity::relu) relu_inplace(pre);
    return pre;
}

ForwardCache forward_cached(const CompiledModel& model, const Parameters& params,
                            const ModelInputs& inputs, bool keep) {
    if (inputs.x.dim != model.spec.working_dim)
        throw ShapeMismatch("input tensor lives on the wrong dimension");
    if (inputs.x.values.rows != model.working_count)
        throw ShapeMismatch("input row count differs from the working dimension size");
    const Matrix* x_lower = inputs.lower ? &inputs.lower->values : nullptr;
    const Matrix* x_upper = inputs.upper ? &inputs.upper->values : nullptr;

    ForwardCache cache;
    if (keep) cache.layers.resize(model.layers.size());
    Matrix h = inputs.x.values;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        h = layer_forward_cached(model.layers[l], model.spec.layers[l], params.layers[l], h,
                                 x_lower, x_upper, keep ? &cache.layers[l] : nullptr);
    }
    cache.h_last = h;

    const std::size_t width = model.spec.layers.back().out_features;
    cache.pooled = Matrix(1, width);
    cache.argmax.assign(width, 0);
    for (std::size_t c = 0; c < width; ++c) {
        double best = 0.0;  // empty working dimension pools to zero
        std::size_t best_row = 0;
        for (std::size_t r = 0; r < h.rows; ++r) {
            const double v = h.at(r, c);
            if (r == 0 || v > best) {
                best = v;
                best_row = r;
            }
        }
        cache.pooled.at(0, c) = h.rows == 0 ? 0.0 : best;
        cache.argmax[c] = best_row;
    }

    Matrix z = cache.pooled;
    for (std::size_t hidx = 0; hidx < params.head_w.size(); ++hidx) {
        if (keep) cache.head_in.push_back(z);
        Matrix pre = matmul(z, params.head_w[hidx]);
        add_row_inplace(pre, params.head_b[hidx]);
        const bool is_hidden = hidx + 1 < params.head_w.size();
        if (keep) cache.head_pre.push_back(pre);
        if (is_hidden) relu_inplace(pre);
        z = std::move(pre);
    }
    cache.logits = z;
    return cache;
}

}  // namespace

Matrix layer_forward(const CompiledLayer& layer, const LayerSpec& spec, const LayerParams& params,
                     const Matrix& x, const Matrix* x_lower, const Matrix* x_upper) {
    return layer_forward_cached(layer, spec, params, x, x_lower, x_upper, nullptr);
}

Matrix model_forward(const CompiledModel& model, const Parameters& params,
                     const ModelInputs& inputs) {
    return forward_cached(model, params, inputs, false).logits;
}

double cross_entropy(const Matrix& logits, int label) {
    if (logits.rows != 1 || label < 0 || static_cast<std::size_t>(label) >= logits.cols)
        throw ShapeMismatch("bad logits shape or label");
    double max_logit = logits.data[0];
    for (double v : logits.data) max_logit = std::max(max_logit, v);
    double denom = 0.0;
    for (double v : logits.data) denom += std::exp(v - max_logit);
    return -(logits.data[label] - max_logit - std::log(denom));
}

namespace {

Matrix softmax_grad(const Matrix& logits, int label) {
    Matrix grad(1, logits.cols);
    double max_logit = logits.data[0];
    for (double v : logits.data) max_logit = std::max(max_logit, v);
    double denom = 0.0;
    for (double v : logits.data) denom += std::exp(v - max_logit);
    for (std::size_t c = 0; c < logits.cols; ++c)
        grad.data[c] = std::exp(logits.data[c] - max_logit) / denom;
    grad.data[label] -= 1.0;
    return grad;
}

Matrix colsum(const Matrix& m) {
    Matrix out(1, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) out.data[c] += m.at(r, c);
    }
    return out;
}

}  // namespace

Parameters zeros_like(const Parameters& params) {
    Parameters z = params;
    for_each_tensor(z,
                    [](const std::string&, Matrix& m) { std::fill(m.data.begin(), m.data.end(), 0.0); });
    return z;
}

void add_parameters(Parameters& acc, const Parameters& inc) {
    std::vector<Matrix*> a;
    std::vector<const Matrix*> b;
    for_each_tensor(acc, [&](const std::string&, Matrix& m) { a.push_back(&m); });
    for_each_tensor(inc, [&](const std::string&, const Matrix& m) { b.push_back(&m); });
    if (a.size() != b.size()) throw ShapeMismatch("parameter structures differ");
    for (std::size_t t = 0; t < a.size(); ++t) add_inplace(*a[t], *b[t]);
}

void scale_parameters(Parameters& params, double s) {
    for_each_tensor(params, [s](const std::string&, Matrix& m) { scale_inplace(m, s); });
}

std::size_t parameter_count(const Parameters& params) {
    std::size_t total = 0;
    for_each_tensor(params,
                    [&total](const std::string&, const Matrix& m) { total += m.data.size(); });
    return total;
}

std::pair<double, Parameters> model_backward(const CompiledModel& model, const Parameters& params,
                                             const ModelInputs& inputs, int label) {
    ForwardCache cache = forward_cached(model, params, inputs, true);
    const double loss = cross_entropy(cache.logits, label);
    Parameters grads = zeros_like(params);

    // Head.
    Matrix delta = softmax_grad(cache.logits, label);
    for (std::size_t h = params.head_w.size(); h-- > 0;) {
        if (h + 1 < params.head_w.size()) relu_backward_inplace(delta, cache.head_pre[h]);
        add_inplace(grads.head_b[h], delta);
        add_inplace(grads.head_w[h], matmul_tn(cache.head_in[h], delta));
        delta = matmul_nt(delta, params.head_w[h]);
    }

    // Max-pool routes each column's gradient to its argmax row.
    Matrix dh(cache.h_last.rows, cache.h_last.cols);
    if (cache.h_last.rows > 0) {
        for (std::size_t c = 0; c < dh.cols; ++c) dh.at(cache.argmax[c], c) = delta.data[c];
    }

    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const LayerSpec& ls = model.spec.layers[l];
        const LayerParams& lp = params.layers[l];
        LayerParams& lg = grads.layers[l];
        LayerCache& lc = cache.layers[l];

        if (ls.nonlinearity == Nonlinearity::relu) relu_backward_inplace(dh, lc.pre);
        add_inplace(lg.bias, colsum(dh));
        add_inplace(lg.w_self, matmul_tn(lc.x_in, dh));
        Matrix dx = matmul_nt(dh, lp.w_self);
        for (std::size_t r = 0; r < model.layers[l].rel_ops.size(); ++r) {
            add_inplace(lg.w_rel[r], matmul_tn(lc.rel_msgs[r], dh));
            add_inplace(dx, model.layers[l].rel_ops[r].apply_transpose(matmul_nt(dh, lp.w_rel[r])));
        }
        // kappa/boundary/coboundary read static inputs, so gradient stops at
        // their weights.
        for (std::size_t r = 0; r < lc.kappa_msgs.size(); ++r)
            add_inplace(lg.w_kappa[r], matmul_tn(lc.kappa_msgs[r], dh));
        if (ls.use_boundary) add_inplace(lg.w_boundary, matmul_tn(lc.boundary_msg, dh));
        if (ls.use_coboundary) add_inplace(lg.w_coboundary, matmul_tn(lc.coboundary_msg, dh));
        dh = std::move(dx);
    }
    return {loss, std::move(grads)};
}

double grad_check(const CompiledModel& model, const Parameters& params, const ModelInputs& inputs,
                  int label, double epsilon, std::uint64_t seed) {
    if (epsilon < 1e-7 || epsilon > 1e-4)
        throw std::invalid_argument("epsilon must lie in [1e-7, 1e-4]");
    auto [loss, grads] = model_backward(model, params, inputs, label);
    (void)loss;

    std::vector<Matrix*> tensors;
    Parameters mutable_params = params;
    for_each_tensor(mutable_params, [&](const std::string&, Matrix& m) { tensors.push_back(&m); });
    std::vector<Matrix*> grad_tensors;
    for_each_tensor(grads, [&](const std::string&, Matrix& m) { grad_tensors.push_back(&m); });

    std::size_t total = 0;
    for (Matrix* m : tensors) total += m->data.size();
    const std::size_t samples = std::max<std::size_t>(1, total / 20);
    std::mt19937_64 rng(seed);
    std::set<std::size_t> chosen;
    while (chosen.size() < std::min(samples, total)) chosen.insert(rng() % total);

    double max_rel = 0.0;
    for (std::size_t flat : chosen) {
        std::size_t t = 0, offset = flat;
        while (offset >= tensors[t]->data.size()) {
            offset -= tensors[t]->data.size();
            ++t;
        }
        double& slot = tensors[t]->data[offset];
        const double saved = slot;
        slot = saved + epsilon;
        const double up = cross_entropy(model_forward(model, mutable_params, inputs), label);
        slot = saved - epsilon;
        const double down = cross_entropy(model_forward(model, mutable_params, inputs), label);
        slot = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        const double analytic = grad_tensors[t]->data[offset];
        const double denom = std::max({1.0, std::abs(numeric), std::abs(analytic)});
        max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
    }
    return max_rel;
}

int predict(const CompiledModel& model, const Parameters& params, const Sample& sample) {
    const Matrix logits = model_forward(model, params, {sample.x, std::nullopt, std::nullopt});
    return static_cast<int>(
        std::max_element(logits.data.begin(), logits.data.end()) - logits.data.begin());
}

double evaluate_accuracy(const CompiledModel& model, const Parameters& params,
                         const std::vector<Sample>& set) {
    if (set.empty()) return 0.0;
    std::size_t hits = 0;
    for (const Sample& s : set) hits += predict(model, params, s) == s.label ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(set.size());
}

double evaluate_loss(const CompiledModel& model, const Parameters& params,
                     const std::vector<Sample>& set) {
    if (set.empty()) return 0.0;
    double total = 0.0;
    for (const Sample& s : set)
        total += cross_entropy(model_forward(model, params, {s.x, std::nullopt, std::nullopt}),
                               s.label);
    return total / static_cast<double>(set.size());
}

AdamState init_adam(const Parameters& params) {
    return AdamState{zeros_like(params), zeros_like(params), 0};
}

void adam_step(Parameters& params, const Parameters& grads, AdamState& state, double lr) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    ++state.step;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));

    std::vector<Matrix*> p, m, v;
    std::vector<const Matrix*> g;
    for_each_tensor(params, [&](const std::string&, Matrix& t) { p.push_back(&t); });
    for_each_tensor(grads, [&](const std::string&, const Matrix& t) { g.push_back(&t); });
    for_each_tensor(state.m, [&](const std::string&, Matrix& t) { m.push_back(&t); });
    for_each_tensor(state.v, [&](const std::string&, Matrix& t) { v.push_back(&t); });

    for (std::size_t t = 0; t < p.size(); ++t) {
        for (std::size_t i = 0; i < p[t]->data.size(); ++i) {
            const double grad = g[t]->data[i];
            double& mi = m[t]->data[i];
            double& vi = v[t]->data[i];
            mi = kBeta1 * mi + (1.0 - kBeta1) * grad;
            vi = kBeta2 * vi + (1.0 - kBeta2) * grad * grad;
            const double mhat = mi / bc1;
            const double vhat = vi / bc2;
            p[t]->data[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
        }
    }
}

TrainResult train(const CompiledModel& model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainHyper& hyper) {
    for (const Sample& s : train_set) {
        if (s.label < 0 || static_cast<std::size_t>(s.label) >= model.spec.classes)
            throw std::invalid_argument("label outside 0..classes-1");
    }
    TrainResult result;
    result.params = init_parameters(model, hyper.seed);
    AdamState state = init_adam(result.params);

    std::mt19937_64 rng(hyper.seed ^ 0x5bf0a8f2c69e3d71ull);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch = std::max<std::size_t>(1, hyper.batch);

    for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(order.size(), start + batch);
            Parameters grads = zeros_like(result.params);
            double batch_loss = 0.0;
            for (std::size_t p = start; p < end; ++p) {
                const Sample& s = train_set[order[p]];
                auto [loss, sample_grads] =
                    model_backward(model, result.params, {s.x, std::nullopt, std::nullopt}, s.label);
                batch_loss += loss;
                add_parameters(grads, sample_grads);
            }
            if (!std::isfinite(batch_loss))
                throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch));
            scale_parameters(grads, 1.0 / static_cast<double>(end - start));
            adam_step(result.params, grads, state, hyper.lr);
        }
        const double train_loss = evaluate_loss(model, result.params, train_set);
        const double train_acc = evaluate_accuracy(model, result.params, train_set);
        result.trace.push_back({epoch, "train", train_loss, train_acc});
        if (!val_set.empty()) {
            result.trace.push_back({epoch, "val", evaluate_loss(model, result.params, val_set),
                                    evaluate_accuracy(model, result.params, val_set)});
        }
        if (!std::isfinite(train_loss))
            throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch));
        if (train_acc >= hyper.stop_at_train_accuracy) break;
    }
    return result;
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
    if (!in) throw std::runtime_error("truncated checkpoint");
    return value;
}

void write_matrix(std::ostream& out, const Matrix& m) {
    write_pod<std::uint64_t>(out, m.rows);
    write_pod<std::uint64_t>(out, m.cols);
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

Matrix read_matrix(std::istream& in) {
    const auto rows = read_pod<std::uint64_t>(in);
    const auto cols = read_pod<std::uint64_t>(in);
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated checkpoint");
    return m;
}

constexpr std::uint32_t kCheckpointMagic = 0x4e4e5344;  // "DSNN"
constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

void save_parameters(const Parameters& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_pod(out, kCheckpointMagic);
    write_pod(out, kCheckpointVersion);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.layers.size()));
    for (const LayerParams& lp : params.layers) {
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(lp.w_rel.size()));
        write_pod<std::uint8_t>(out, lp.w_kappa.empty() ? 0 : 1);
        write_pod<std::uint8_t>(out, lp.w_boundary.rows > 0 ? 1 : 0);
        write_pod<std::uint8_t>(out, lp.w_coboundary.rows > 0 ? 1 : 0);
        write_pod<std::uint8_t>(out, 0);
        write_matrix(out, lp.w_self);
        for (const Matrix& m : lp.w_rel) write_matrix(out, m);
        for (const Matrix& m : lp.w_kappa) write_matrix(out, m);
        if (lp.w_boundary.rows > 0) write_matrix(out, lp.w_boundary);
        if (lp.w_coboundary.rows > 0) write_matrix(out, lp.w_coboundary);
        write_matrix(out, lp.bias);
    }
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.head_w.size()));
    for (std::size_t h = 0; h < params.head_w.size(); ++h) {
        write_matrix(out, params.head_w[h]);
        write_matrix(out, params.head_b[h]);
    }
}

Parameters load_parameters(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (read_pod<std::uint32_t>(in) != kCheckpointMagic)
        throw std::runtime_error("not a parameter checkpoint: " + path);
    if (read_pod<std::uint32_t>(in) != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version");
    Parameters params;
    const auto n_layers = read_pod<std::uint32_t>(in);
    params.layers.resize(n_layers);
    for (LayerParams& lp : params.layers) {
        const auto n_rel = read_pod<std::uint32_t>(in);
        const bool has_kappa = read_pod<std::uint8_t>(in) != 0;
        const bool has_boundary = read_pod<std::uint8_t>(in) != 0;
        const bool has_coboundary = read_pod<std::uint8_t>(in) != 0;
        read_pod<std::uint8_t>(in);
        lp.w_self = read_matrix(in);
        for (std::uint32_t r = 0; r < n_rel; ++r) lp.w_rel.push_back(read_matrix(in));
        if (has_kappa) {
            for (std::uint32_t r = 0; r < n_rel; ++r) lp.w_kappa.push_back(read_matrix(in));
        }
        if (has_boundary) lp.w_boundary = read_matrix(in);
        if (has_coboundary) lp.w_coboundary = read_matrix(in);
        lp.bias = read_matrix(in);
    }
    const auto n_head = read_pod<std::uint32_t>(in);
    for (std::uint32_t h = 0; h < n_head; ++h) {
        params.head_w.push_back(read_matrix(in));
        params.head_b.push_back(read_matrix(in));
    }
    return params;
}

void write_metrics_csv(const std::vector<MetricsRow>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "epoch,split,loss,accuracy\n";
    out.precision(17);
    for (const MetricsRow& row : trace) {
        out << row.epoch << ',' << row.split << ',' << row.loss << ',' << row.accuracy << "\n";
    }
}

ModelSpec dirsnn_edge_spec(int layers, std::size_t width, std::size_t classes, bool with_upper,
                           std::uint64_t seed) {
    ModelSpec spec;
    spec.working_dim = 1;
    spec.classes = classes;
    spec.seed = seed;
    spec.head_hidden = {width};
    std::vector<AdjacencySpec> relations = {
        {Direction::down, 1, 0, 0},
        {Direction::down, 1, 0, 1},
        {Direction::down, 1, 1, 0},
        {Direction::down, 1, 1, 1},
    };
    if (with_upper) relations.push_back({Direction::up, 1, 2, 0});
    for (int l = 0; l < layers; ++l) {
        LayerSpec ls;
        ls.relations = relations;
        ls.in_features = l == 0 ? 1 : width;
        ls.out_features = width;
        ls.nonlinearity = Nonlinearity::relu;
        spec.layers.push_back(ls);
    }
    return spec;
}

namespace {

ModelSpec node_spec(int layers, std::size_t width, std::size_t classes, std::uint64_t seed,
                    std::vector<AdjacencySpec> relations) {
    ModelSpec spec;
    spec.working_dim = 0;
    spec.classes = classes;
    spec.seed = seed;
    spec.head_hidden = {width};
    for (int l = 0; l < layers; ++l) {
        LayerSpec ls;
        ls.relations = relations;
        ls.in_features = l == 0 ? 1 : width;
        ls.out_features = width;
        ls.nonlinearity = Nonlinearity::relu;
        spec.layers.push_back(ls);
    }
    return spec;
}

}  // namespace

CompiledModel build_snn_edge_model(const DirectedSimplicialComplex& complex, int layers,
                                   std::size_t width, std::size_t classes, std::uint64_t seed) {
    ModelSpec spec;
    spec.working_dim = 1;
    spec.classes = classes;
    spec.seed = seed;
    spec.head_hidden = {width};
    for (int l = 0; l < layers; ++l) {
        LayerSpec ls;
        ls.in_features = l == 0 ? 1 : width;
        ls.out_features = width;
        ls.nonlinearity = Nonlinearity::relu;
        spec.layers.push_back(ls);
    }
    const CsrMatrix op = undirected_lower_operator(complex, 1);
    std::vector<std::vector<CsrMatrix>> ops(layers, {op});
    return compile_model_ops(spec, complex.size(1), std::move(ops));
}

CompiledModel build_dirgnn_node_model(const DirectedSimplicialComplex& complex, int layers,
                                      std::size_t width, std::size_t classes, std::uint64_t seed) {
    return compile_model(complex, node_spec(layers, width, classes, seed,
                                            {{Direction::up, 1, 0, 1}, {Direction::up, 1, 1, 0}}));
}

CompiledModel build_gcn_node_model(const DirectedSimplicialComplex& complex, int layers,
                                   std::size_t width, std::size_t classes, std::uint64_t seed) {
    ModelSpec spec = node_spec(layers, width, classes, seed, {});
    const CsrMatrix op = gcn_normalized_operator(complex);
    std::vector<std::vector<CsrMatrix>> ops(layers, {op});
    return compile_model_ops(spec, complex.size(0), std::move(ops));
}

}  // namespace dirtopo

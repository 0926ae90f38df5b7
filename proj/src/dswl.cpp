#include "dirtopo/dswl.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "dirtopo/adjacency.hpp"
#include "dirtopo/flag_lift.hpp"

namespace dirtopo {

namespace {

using GlobalId = std::size_t;
using TauKappa = std::pair<GlobalId, GlobalId>;

/// Per-simplex neighborhood structure, precomputed once per refinement. All
/// ids are global over the workspace (one complex, or two offset ones).
struct SimplexView {
    int dim = 0;
    std::vector<GlobalId> boundary;  // face-map order; empty for 0-simplices
    std::vector<GlobalId> coboundary;
    std::vector<std::vector<TauKappa>> down_sections;  // (i,j) in row-major order, i,j <= dim
    std::vector<std::vector<TauKappa>> up_sections;    // i,j <= dim+1
};

void append_views(const DirectedSimplicialComplex& complex, GlobalId offset,
                  std::vector<SimplexView>& views) {
    const GlobalId base = views.size();
    (void)offset;
    for (int d = 0; d <= complex.dim(); ++d) {
        for (std::uint32_t idx = 0; idx < complex.size(d); ++idx) {
            SimplexView view;
            view.dim = d;
            if (d >= 1) {
                const SimplexId id{d, idx};
                for (SimplexId f : boundary(complex, id))
                    view.boundary.push_back(base + complex.global_id(f));
            }
            view.down_sections.resize(d >= 1 ? (d + 1) * (d + 1) : 0);
            view.up_sections.resize((d + 2) * (d + 2));
            views.push_back(std::move(view));
        }
    }
    // Coboundaries: each simplex collects the simplices it is a facet of.
    for (int d = 1; d <= complex.dim(); ++d) {
        for (std::uint32_t idx = 0; idx < complex.size(d); ++idx) {
            const SimplexId id{d, idx};
            const GlobalId self = base + complex.global_id(id);
            for (SimplexId f : boundary(complex, id))
                views[base + complex.global_id(f)].coboundary.push_back(self);
        }
    }
    // Same-dimension adjacency sections with k = 1.
    for (int d = 0; d <= complex.dim(); ++d) {
        const GlobalId dim_base = base + (d > 0 ? complex.global_id({d, 0}) : 0);
        if (d >= 1) {
            for (int i = 0; i <= d; ++i) {
                for (int j = 0; j <= d; ++j) {
                    const auto rel = lower_adjacency(complex, d, 1, i, j);
                    const std::size_t section = i * (d + 1) + j;
                    for (const Witness& w : rel.witnesses()) {
                        views[dim_base + w.src].down_sections[section].emplace_back(
                            dim_base + w.dst, base + complex.global_id(w.kappa));
                    }
                }
            }
        }
        for (int i = 0; i <= d + 1; ++i) {
            for (int j = 0; j <= d + 1; ++j) {
                const auto rel = upper_adjacency(complex, d, 1, i, j);
                const std::size_t section = i * (d + 2) + j;
                for (const Witness& w : rel.witnesses()) {
                    views[dim_base + w.src].up_sections[section].emplace_back(
                        dim_base + w.dst, base + complex.global_id(w.kappa));
                }
            }
        }
    }
}

using Signature = std::vector<std::uint64_t>;

void push_color_pairs(Signature& sig, const std::vector<TauKappa>& section,
                      const std::vector<std::uint32_t>& colors) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(section.size());
    for (auto [tau, kappa] : section) pairs.emplace_back(colors[tau], colors[kappa]);
    std::sort(pairs.begin(), pairs.end());
    sig.push_back(pairs.size());
    for (auto [a, b] : pairs) {
        sig.push_back(a);
        sig.push_back(b);
    }
}

Signature make_signature(const SimplexView& view, const std::vector<std::uint32_t>& colors,
                         GlobalId self, RefineVariant variant) {
    Signature sig;
    sig.push_back(colors[self]);
    // The boundary arity (dim+1, or 0 for vertices) makes signatures of
    // different dimensions distinct, so the encoding stays injective.
    sig.push_back(view.boundary.size());
    for (GlobalId f : view.boundary) sig.push_back(colors[f]);
    if (variant == RefineVariant::full) {
        std::vector<std::uint32_t> cob;
        cob.reserve(view.coboundary.size());
        for (GlobalId c : view.coboundary) cob.push_back(colors[c]);
        std::sort(cob.begin(), cob.end());
        sig.push_back(cob.size());
        for (std::uint32_t c : cob) sig.push_back(c);
        for (const auto& section : view.down_sections) push_color_pairs(sig, section, colors);
    }
    for (const auto& section : view.up_sections) push_color_pairs(sig, section, colors);
    return sig;
}

struct RefineOutcome {
    std::vector<std::uint32_t> colors;
    int rounds = 0;
    std::vector<std::vector<std::uint32_t>> per_round;
};

/// Shared refinement driver. New colors are assigned by sorted-signature
/// rank, so the result is canonical: independent of vertex labeling and
/// directly comparable across the complexes in one workspace.
RefineOutcome refine_views(const std::vector<SimplexView>& views, RefineOptions options) {
    RefineOutcome out;
    out.colors.assign(views.size(), 0);
    if (options.dim_tagged_init) {
        for (GlobalId s = 0; s < views.size(); ++s)
            out.colors[s] = static_cast<std::uint32_t>(views[s].dim);
    }
    out.per_round.push_back(out.colors);
    if (views.empty()) return out;

    std::size_t distinct = std::set<std::uint32_t>(out.colors.begin(), out.colors.end()).size();
    const int hard_cap = static_cast<int>(views.size()) + 1;
    const int cap = options.max_rounds >= 0 ? std::min(options.max_rounds, hard_cap) : hard_cap;

    for (int round = 0; round < cap; ++round) {
        std::map<Signature, std::vector<GlobalId>> classes;
        for (GlobalId s = 0; s < views.size(); ++s) {
            classes[make_signature(views[s], out.colors, s, options.variant)].push_back(s);
        }
        std::uint32_t next = 0;
        for (const auto& [sig, members] : classes) {
            for (GlobalId s : members) out.colors[s] = next;
            ++next;
        }
        out.rounds = round + 1;
        out.per_round.push_back(out.colors);
        if (classes.size() == distinct) break;  // partition is stable from here on
        distinct = classes.size();
    }
    return out;
}

StableHistogram histogram_for(const DirectedSimplicialComplex& complex, GlobalId base,
                              const std::vector<std::uint32_t>& colors) {
    StableHistogram hist;
    hist.per_dim.resize(complex.dim() + 1);
    for (GlobalId g = 0; g < complex.total_size(); ++g) {
        const SimplexId id = complex.from_global(g);
        ++hist.per_dim[id.dim][colors[base + g]];
    }
    return hist;
}

RefineResult result_slice(const DirectedSimplicialComplex& complex, GlobalId base,
                          const RefineOutcome& outcome) {
    RefineResult res;
    res.rounds = outcome.rounds;
    res.colors.assign(outcome.colors.begin() + base,
                      outcome.colors.begin() + base + complex.total_size());
    for (const auto& round : outcome.per_round) {
        res.per_round.emplace_back(round.begin() + base, round.begin() + base + complex.total_size());
    }
    res.histogram = histogram_for(complex, base, outcome.colors);
    return res;
}

}  // namespace

RefineResult dswl_refine(const DirectedSimplicialComplex& complex, RefineOptions options) {
    std::vector<SimplexView> views;
    append_views(complex, 0, views);
    return result_slice(complex, 0, refine_views(views, options));
}

std::pair<RefineResult, RefineResult> dswl_refine_joint(const DirectedSimplicialComplex& a,
                                                        const DirectedSimplicialComplex& b,
                                                        RefineOptions options) {
    std::vector<SimplexView> views;
    append_views(a, 0, views);
    append_views(b, a.total_size(), views);
    const RefineOutcome outcome = refine_views(views, options);
    return {result_slice(a, 0, outcome), result_slice(b, a.total_size(), outcome)};
}

namespace {

struct NodeView {
    std::vector<GlobalId> in;
    std::vector<GlobalId> out;
};

void append_node_views(const Digraph& g, std::vector<NodeView>& views) {
    const GlobalId base = views.size();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        NodeView view;
        for (VertexId u : g.in_neighbors(static_cast<VertexId>(v))) view.in.push_back(base + u);
        for (VertexId u : g.out_neighbors(static_cast<VertexId>(v))) view.out.push_back(base + u);
        views.push_back(std::move(view));
    }
}

RefineOutcome dwl_refine_views(const std::vector<NodeView>& views) {
    RefineOutcome out;
    out.colors.assign(views.size(), 0);
    out.per_round.push_back(out.colors);
    if (views.empty()) return out;
    std::size_t distinct = 1;
    const int cap = static_cast<int>(views.size()) + 1;
    for (int round = 0; round < cap; ++round) {
        std::map<Signature, std::vector<GlobalId>> classes;
        for (GlobalId v = 0; v < views.size(); ++v) {
            Signature sig;
            sig.push_back(out.colors[v]);
            std::vector<std::uint32_t> in, outn;
            for (GlobalId u : views[v].in) in.push_back(out.colors[u]);
            for (GlobalId u : views[v].out) outn.push_back(out.colors[u]);
            std::sort(in.begin(), in.end());
            std::sort(outn.begin(), outn.end());
            sig.push_back(in.size());
            for (std::uint32_t c : in) sig.push_back(c);
            sig.push_back(outn.size());
            for (std::uint32_t c : outn) sig.push_back(c);
            classes[sig].push_back(v);
        }
        std::uint32_t next = 0;
        for (const auto& [sig, members] : classes) {
            for (GlobalId v : members) out.colors[v] = next;
            ++next;
        }
        out.rounds = round + 1;
        out.per_round.push_back(out.colors);
        if (classes.size() == distinct) break;
        distinct = classes.size();
    }
    return out;
}

RefineResult dwl_result_slice(const Digraph& g, GlobalId base, const RefineOutcome& outcome) {
    RefineResult res;
    res.rounds = outcome.rounds;
    res.colors.assign(outcome.colors.begin() + base,
                      outcome.colors.begin() + base + g.vertex_count());
    for (const auto& round : outcome.per_round) {
        res.per_round.emplace_back(round.begin() + base, round.begin() + base + g.vertex_count());
    }
    res.histogram.per_dim.resize(1);
    for (std::uint32_t c : res.colors) ++res.histogram.per_dim[0][c];
    return res;
}

}  // namespace

RefineResult dwl_refine(const Digraph& g) {
    std::vector<NodeView> views;
    append_node_views(g, views);
    return dwl_result_slice(g, 0, dwl_refine_views(views));
}

std::pair<RefineResult, RefineResult> dwl_refine_joint(const Digraph& a, const Digraph& b) {
    std::vector<NodeView> views;
    append_node_views(a, views);
    append_node_views(b, views);
    const RefineOutcome outcome = dwl_refine_views(views);
    return {dwl_result_slice(a, 0, outcome), dwl_result_slice(b, a.vertex_count(), outcome)};
}

Verdict distinguish(const DirectedSimplicialComplex& a, const DirectedSimplicialComplex& b,
                    RefineOptions options) {
    auto [ra, rb] = dswl_refine_joint(a, b, options);
    return ra.histogram == rb.histogram ? Verdict::not_distinguished : Verdict::distinguished;
}

Verdict dwl_distinguish(const Digraph& a, const Digraph& b) {
    auto [ra, rb] = dwl_refine_joint(a, b);
    return ra.histogram == rb.histogram ? Verdict::not_distinguished : Verdict::distinguished;
}

std::vector<std::vector<std::size_t>> partition_classes(const std::vector<std::uint32_t>& colors) {
    std::map<std::uint32_t, std::vector<std::size_t>> by_color;
    for (std::size_t s = 0; s < colors.size(); ++s) by_color[colors[s]].push_back(s);
    std::vector<std::vector<std::size_t>> classes;
    classes.reserve(by_color.size());
    for (auto& [color, members] : by_color) classes.push_back(std::move(members));
    std::sort(classes.begin(), classes.end());
    return classes;
}

namespace {

bool counterexample_qualifies(const Digraph& a, const Digraph& b) {
    if (dwl_distinguish(a, b) == Verdict::distinguished) return false;
    return distinguish(lift_directed_flag(a, 2), lift_directed_flag(b, 2)) ==
           Verdict::distinguished;
}

std::vector<std::pair<VertexId, VertexId>> ordered_pairs(int n) {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u != v) pairs.emplace_back(u, v);
        }
    }
    return pairs;
}

Digraph digraph_from_mask(int n, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                          std::uint64_t mask) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (mask & (1ull << p)) edges.push_back(pairs[p]);
    }
    return Digraph(n, std::move(edges));
}

std::vector<std::vector<std::uint32_t>> subsets_of_size(int universe_max, int size) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> current;
    // universe is {1..universe_max}
    auto rec = [&](auto&& self, std::uint32_t from) -> void {
        if (static_cast<int>(current.size()) == size) {
            out.push_back(current);
            return;
        }
        for (std::uint32_t s = from; s <= static_cast<std::uint32_t>(universe_max); ++s) {
            current.push_back(s);
            self(self, s + 1);
            current.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

}  // namespace

std::optional<CounterexamplePair> find_counterexample(int n_max, int trials, std::uint64_t seed) {
    if (n_max < 1 || n_max > 8)
        throw std::invalid_argument("counterexample search supports 1 <= n_max <= 8");

    // Exhaustive sweep over all digraph pairs at tiny sizes.
    for (int n = 2; n <= std::min(n_max, 3); ++n) {
        const auto pairs = ordered_pairs(n);
        const std::uint64_t limit = 1ull << pairs.size();
        for (std::uint64_t m1 = 0; m1 < limit; ++m1) {
            const Digraph g1 = digraph_from_mask(n, pairs, m1);
            for (std::uint64_t m2 = m1 + 1; m2 < limit; ++m2) {
                const Digraph g2 = digraph_from_mask(n, pairs, m2);
                if (counterexample_qualifies(g1, g2)) return CounterexamplePair{g1, g2};
            }
        }
    }

    // Circulant digraphs are degree-regular, so D-WL never separates two
    // connection sets of equal size; lifted triangle structure often does.
    for (int n = 4; n <= n_max; ++n) {
        for (int size = 1; size <= n - 2; ++size) {
            const auto sets = subsets_of_size(n - 1, size);
            for (std::size_t a = 0; a < sets.size(); ++a) {
                for (std::size_t b = a + 1; b < sets.size(); ++b) {
                    const Digraph g1 = circulant(n, sets[a]);
                    const Digraph g2 = circulant(n, sets[b]);
                    if (counterexample_qualifies(g1, g2)) return CounterexamplePair{g1, g2};
                }
            }
        }
    }

    // Randomized fallback within the trial budget.
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials && n_max >= 4; ++trial) {
        const int n = 4 + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - 3));
        const auto pairs = ordered_pairs(n);
        const Digraph g1 = digraph_from_mask(n, pairs, rng());
        const Digraph g2 = digraph_from_mask(n, pairs, rng());
        if (counterexample_qualifies(g1, g2)) return CounterexamplePair{g1, g2};
    }
    return std::nullopt;
}

}  // namespace dirtopo

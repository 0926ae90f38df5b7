#include "dirtopo/complex.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace dirtopo {

Tuple face_tuple(const Tuple& t, int i) {
    const int k = static_cast<int>(t.size()) - 1;
    if (k < 1) throw ZeroDimensional("face map undefined on a 0-simplex");
    if (i < 0) throw IndexOutOfRange("face map index must be non-negative");
    const int drop = i < k ? i : k;  // i >= k removes the last vertex
    Tuple out;
    out.reserve(t.size() - 1);
    for (int p = 0; p <= k; ++p) {
        if (p != drop) out.push_back(t[p]);
    }
    return out;
}

const Tuple& DirectedSimplicialComplex::tuple(SimplexId id) const {
    if (id.dim < 0 || id.dim >= static_cast<int>(by_dim_.size()) ||
        id.index >= by_dim_[id.dim].size()) {
        throw IndexOutOfRange("no simplex with dim " + std::to_string(id.dim) + " index " +
                              std::to_string(id.index));
    }
    return by_dim_[id.dim][id.index];
}

std::optional<SimplexId> DirectedSimplicialComplex::find(const Tuple& t) const {
    auto it = lookup_.find(t);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

SimplexId DirectedSimplicialComplex::id_of(const Tuple& t) const {
    auto id = find(t);
    if (!id) {
        std::ostringstream oss;
        oss << "tuple (";
        for (std::size_t p = 0; p < t.size(); ++p) oss << (p ? "," : "") << t[p];
        oss << ") is not a simplex of this complex";
        throw IndexOutOfRange(oss.str());
    }
    return *id;
}

std::vector<std::size_t> DirectedSimplicialComplex::per_dim_counts() const {
    std::vector<std::size_t> counts(by_dim_.size());
    for (std::size_t d = 0; d < by_dim_.size(); ++d) counts[d] = by_dim_[d].size();
    return counts;
}

std::size_t DirectedSimplicialComplex::global_id(SimplexId id) const {
    if (id.dim < 0 || id.dim >= static_cast<int>(by_dim_.size()) ||
        id.index >= by_dim_[id.dim].size()) {
        throw IndexOutOfRange("bad simplex id");
    }
    return offsets_[id.dim] + id.index;
}

SimplexId DirectedSimplicialComplex::from_global(std::size_t g) const {
    if (g >= total_) throw IndexOutOfRange("global id out of range");
    int d = 0;
    while (d + 1 < static_cast<int>(offsets_.size()) && offsets_[d + 1] <= g) ++d;
    return SimplexId{d, static_cast<std::uint32_t>(g - offsets_[d])};
}

void DirectedSimplicialComplex::reindex() {
    while (!by_dim_.empty() && by_dim_.back().empty()) by_dim_.pop_back();
    lookup_.clear();
    offsets_.assign(by_dim_.size(), 0);
    total_ = 0;
    for (std::size_t d = 0; d < by_dim_.size(); ++d) {
        std::sort(by_dim_[d].begin(), by_dim_[d].end());
        offsets_[d] = total_;
        total_ += by_dim_[d].size();
        for (std::size_t i = 0; i < by_dim_[d].size(); ++i) {
            auto [it, fresh] = lookup_.emplace(
                by_dim_[d][i], SimplexId{static_cast<int>(d), static_cast<std::uint32_t>(i)});
            if (!fresh) throw std::invalid_argument("duplicate simplex tuple");
        }
    }
}

DirectedSimplicialComplex DirectedSimplicialComplex::from_closed(
    std::vector<std::vector<Tuple>> by_dim) {
    DirectedSimplicialComplex complex;
    complex.by_dim_ = std::move(by_dim);
    complex.reindex();
    // Closure check: every facet of every stored simplex must be stored.
    for (int d = 1; d <= complex.dim(); ++d) {
        for (const Tuple& t : complex.by_dim_[d]) {
            if (t.size() != static_cast<std::size_t>(d) + 1)
                throw std::invalid_argument("tuple stored under the wrong dimension");
            for (int i = 0; i <= d; ++i) {
                if (!complex.contains(face_tuple(t, i)))
                    throw std::invalid_argument("simplex list is not closed under subtuples");
            }
        }
    }
    return complex;
}

namespace {

void check_no_repeats(const Tuple& t) {
    Tuple sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        std::ostringstream oss;
        oss << "tuple (";
        for (std::size_t p = 0; p < t.size(); ++p) oss << (p ? "," : "") << t[p];
        oss << ") repeats a vertex";
        throw DuplicateVertexInTuple(oss.str());
    }
}

}  // namespace

DirectedSimplicialComplex build_complex(const std::vector<Tuple>& generators) {
    constexpr std::size_t kMaxTupleLength = 24;  // subtuple enumeration is 2^length
    std::unordered_set<Tuple, TupleHash> closed;
    for (const Tuple& gen : generators) {
        if (gen.empty()) throw std::invalid_argument("generator tuple must be non-empty");
        if (gen.size() > kMaxTupleLength)
            throw std::invalid_argument("generator tuple longer than supported");
        check_no_repeats(gen);
        const std::size_t m = gen.size();
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            Tuple sub;
            for (std::size_t p = 0; p < m; ++p) {
                if (mask & (1u << p)) sub.push_back(gen[p]);
            }
            closed.insert(std::move(sub));
        }
    }

    // Compact vertex ids to 0..|V|-1 preserving relative order.
    std::map<VertexId, VertexId> remap;
    for (const Tuple& t : closed) {
        for (VertexId v : t) remap.emplace(v, 0);
    }
    VertexId next = 0;
    for (auto& [v, compact] : remap) compact = next++;

    DirectedSimplicialComplex complex;
    for (const Tuple& t : closed) {
        const int d = static_cast<int>(t.size()) - 1;
        if (d >= static_cast<int>(complex.by_dim_.size())) complex.by_dim_.resize(d + 1);
        Tuple mapped;
        mapped.reserve(t.size());
        for (VertexId v : t) mapped.push_back(remap.at(v));
        complex.by_dim_[d].push_back(std::move(mapped));
    }
    complex.reindex();
    return complex;
}

SimplexId face_map(const DirectedSimplicialComplex& complex, SimplexId id, int i) {
    return complex.id_of(face_tuple(complex.tuple(id), i));
}

DirectedSimplicialComplex skeleton(const DirectedSimplicialComplex& complex, int k) {
    if (k < 0) throw IndexOutOfRange("skeleton dimension must be non-negative");
    std::vector<std::vector<Tuple>> kept;
    for (int d = 0; d <= complex.dim() && d <= k; ++d) kept.push_back(complex.simplices(d));
    return DirectedSimplicialComplex::from_closed(std::move(kept));
}

void write_complex(const DirectedSimplicialComplex& complex, std::ostream& out) {
    out << "dims " << complex.dim() << "\n";
    for (int d = 0; d <= complex.dim(); ++d) {
        for (const Tuple& t : complex.simplices(d)) {
            for (std::size_t p = 0; p < t.size(); ++p) {
                if (p) out << ' ';
                out << t[p];
            }
            out << "\n";
        }
    }
}

DirectedSimplicialComplex read_complex(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    long declared_dim = 0;
    bool have_header = false;
    std::vector<Tuple> tuples;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (!have_header) {
            std::string tag;
            ls >> tag;
            if (tag != "dims" || !(ls >> declared_dim))
                throw ParseError("expected header 'dims D'", line_no);
            have_header = true;
            continue;
        }
        Tuple t;
        long v = 0;
        while (ls >> v) {
            if (v < 0) throw ParseError("negative vertex id", line_no);
            t.push_back(static_cast<VertexId>(v));
        }
        if (!ls.eof()) throw ParseError("malformed simplex line", line_no);
        if (t.empty()) throw ParseError("empty simplex line", line_no);
        tuples.push_back(std::move(t));
    }
    if (!have_header) throw ParseError("missing 'dims' header", line_no);
    DirectedSimplicialComplex complex = build_complex(tuples);
    if (complex.dim() != static_cast<int>(declared_dim))
        throw ParseError("declared dimension does not match the listed simplices", line_no);
    return complex;
}

void save_complex(const DirectedSimplicialComplex& complex, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_complex(complex, out);
}

DirectedSimplicialComplex load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_complex(in);
}

}  // namespace dirtopo

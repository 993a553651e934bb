// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/graph.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

#include "scarkit/errors.hpp"

namespace scarkit {

ClassSet ClassSet::parse(const std::string& text) {
    if (text == "all") return all();
    ClassSet out;
    if (text.empty() || text == "none") return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (!item.empty()) out.insert(parse_barrier_class(item));
    }
    return out;
}

HilbertGraph::HilbertGraph(std::shared_ptr<const SectorBasis> basis, std::vector<GraphEdge> edges)
    : basis_(std::move(basis)), edges_(std::move(edges)) {
    if (!basis_) throw DomainError("graph needs a sector basis");
    const std::size_t n = basis_->size();
    parity_.resize(n);
    for (std::size_t v = 0; v < n; ++v) parity_[v] = chiral_parity(basis_->state(v));

    offsets_.assign(n + 1, 0);
    for (const GraphEdge& e : edges_) {
        if (e.a >= e.b || e.b >= static_cast<Eigen::Index>(n)) throw DomainError("graph edge must satisfy a < b < n");
        ++offsets_[static_cast<std::size_t>(e.a) + 1];
        ++offsets_[static_cast<std::size_t>(e.b) + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    incident_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        incident_[fill[static_cast<std::size_t>(edges_[id].a)]++] = id;
        incident_[fill[static_cast<std::size_t>(edges_[id].b)]++] = id;
    }
}

std::vector<std::size_t> HilbertGraph::incident(Eigen::Index v) const {
    const auto i = static_cast<std::size_t>(v);
    return {incident_.begin() + static_cast<std::ptrdiff_t>(offsets_.at(i)),
            incident_.begin() + static_cast<std::ptrdiff_t>(offsets_.at(i + 1))};
}

std::size_t HilbertGraph::degree(Eigen::Index v) const {
    const auto i = static_cast<std::size_t>(v);
    return offsets_.at(i + 1) - offsets_.at(i);
}

Eigen::Index HilbertGraph::other(std::size_t e, Eigen::Index v) const {
    const GraphEdge& edge = edges_.at(e);
    return edge.a == v ? edge.b : edge.a;
}

std::array<std::size_t, 3> HilbertGraph::class_histogram() const {
    std::array<std::size_t, 3> h{};
    for (const GraphEdge& e : edges_) ++h[static_cast<std::size_t>(e.barrier)];
    return h;
}

std::size_t HilbertGraph::same_parity_edges() const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [&](const GraphEdge& e) {
        return parity_[static_cast<std::size_t>(e.a)] == parity_[static_cast<std::size_t>(e.b)];
    }));
}

HilbertGraph build_graph(std::shared_ptr<const SectorBasis> basis) {
    if (!basis) throw DomainError("graph needs a sector basis");
    std::vector<GraphEdge> edges;
    const int L = basis->sites();
    for (std::size_t a = 0; a < basis->size(); ++a) {
        const FockState s = basis->state(a);
        for (int j = 1; j < L; ++j) {
            const auto barrier = hop_barrier(s, j);
            if (!barrier) continue;
            const FockState t = s.occupation(j) ? s.moved(j, j + 1) : s.moved(j + 1, j);
            const auto b = static_cast<Eigen::Index>(*basis->find(t));
            if (b > static_cast<Eigen::Index>(a)) edges.push_back({static_cast<Eigen::Index>(a), b, *barrier, j});
        }
    }
    return {std::move(basis), std::move(edges)};
}

std::size_t Components::largest() const noexcept {
    return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

Components components(const HilbertGraph& graph, ClassSet allowed) {
    const auto n = static_cast<std::size_t>(graph.vertex_count());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const GraphEdge& e : graph.edges()) {
        if (!allowed.contains(e.barrier)) continue;
        std::size_t ra = find(static_cast<std::size_t>(e.a));
        std::size_t rb = find(static_cast<std::size_t>(e.b));
        if (ra == rb) continue;
        if (rb < ra) std::swap(ra, rb);
        parent[rb] = ra;  // root is always the smallest vertex index
    }
    Components out;
    out.label.resize(n);
    std::vector<std::size_t> root_label(n, n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t r = find(v);
        if (root_label[r] == n) {
            root_label[r] = out.sizes.size();
            out.sizes.push_back(0);
        }
        out.label[v] = root_label[r];
        ++out.sizes[root_label[r]];
    }
    return out;
}

namespace {

FockState from_runs(int L, std::initializer_list<std::pair<int, int>> runs) {
    Word bits = 0;
    int len = 0;
    for (auto [value, count] : runs) {
        for (int i = 0; i < count; ++i) bits = (bits << 1) | static_cast<Word>(value);
        len += count;
    }
    if (len != L) throw std::logic_error("tower state has the wrong length");
    return {bits, L};
}

}  // namespace

Tower::Tower(int sites) : sites_(sites) {
    if (sites < 4 || sites % 2 != 0 || sites > kMaxSites)
        throw DomainError("the tower needs L = 2N with N >= 2, got L = " + std::to_string(sites));
    const int N = sites / 2;
    pinnacle_ = from_runs(sites, {{1, N}, {0, N}});
    for (int q = N; q >= 2; --q) eaves_.push_back(te_h(q));
    eaves_.push_back(te_p(1));
    for (int q = 2; q <= N; ++q) eaves_.push_back(te_p(q));
}

FockState Tower::te_p(int q) const {
    const int N = sites_ / 2;
    if (q < 1 || q > N) throw DomainError("te_p index q must lie in [1, N]");
    return from_runs(sites_, {{1, N - 1}, {0, q}, {1, 1}, {0, N - q}});
}

FockState Tower::te_h(int q) const {
    const int N = sites_ / 2;
    if (q < 1 || q > N) throw DomainError("te_h index q must lie in [1, N]");
    return from_runs(sites_, {{1, N - q}, {0, 1}, {1, q}, {0, N - 1}});
}

std::vector<FockState> Tower::ordered_states() const {
    std::vector<FockState> out = eaves_;
    out.push_back(pinnacle_);
    return out;
}

std::vector<std::string> Tower::labels() const {
    const int N = sites_ / 2;
    std::vector<std::string> out;
    for (int q = N; q >= 2; --q) out.push_back("te_h" + std::to_string(q));
    out.emplace_back("te1");
    for (int q = 2; q <= N; ++q) out.push_back("te_p" + std::to_string(q));
    out.emplace_back("tp");
    return out;
}

bool Tower::contains(const FockState& s) const {
    return s == pinnacle_ || std::find(eaves_.begin(), eaves_.end(), s) != eaves_.end();
}

std::vector<Eigen::Index> Tower::indices(const SectorBasis& basis) const {
    if (basis.sites() != sites_ || basis.particles() != sites_ / 2)
        throw DomainError("tower needs the half-filled sector of the same chain length");
    std::vector<Eigen::Index> out;
    for (const FockState& s : ordered_states()) out.push_back(static_cast<Eigen::Index>(*basis.find(s)));
    return out;
}

Tower tower_states(int sites) { return Tower(sites); }

Eigen::MatrixXcd spta_matrix(const HamiltonianMatrix& h, const Tower& tower) {
    const std::vector<Eigen::Index> idx = tower.indices(*h.basis);
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = h.entries.coeff(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    return m;
}

std::string to_dot(const HilbertGraph& graph) {
    const SectorBasis& basis = *graph.basis();
    std::optional<Tower> tower;
    if (basis.sites() >= 4 && basis.sites() % 2 == 0 && basis.particles() == basis.sites() / 2)
        tower.emplace(basis.sites());
    std::ostringstream out;
    out << "graph hilbert {\n  node [fontname=\"monospace\"];\n";
    for (Eigen::Index v = 0; v < graph.vertex_count(); ++v) {
        const FockState s = basis.state(static_cast<std::size_t>(v));
        out << "  n" << v << " [label=\"" << s.to_string() << "\", shape="
            << (graph.parity(v) > 0 ? "circle, fillcolor=black, fontcolor=white" : "circle, fillcolor=grey")
            << ", style=filled";
        if (tower && tower->contains(s)) out << ", penwidth=3, color=blue";
        out << "];\n";
    }
    for (const GraphEdge& e : graph.edges()) {
        // |g-U| solid red, g dashed yellow, g+U dotted green.
        const char* style = e.barrier == BarrierClass::GMinusU ? "solid, color=red"
                            : e.barrier == BarrierClass::G ? "dashed, color=gold" : "dotted, color=green";
        out << "  n" << e.a << " -- n" << e.b << " [style=" << style << ", label=\"" << to_string(e.barrier)
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace scarkit

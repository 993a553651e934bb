// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

// scarkit: command-line front end for the driven tilted-chain toolkit.
//
// Every option can come from the command line, a `key = value` config file
// or a SCARKIT_<NAME> environment variable, in that order of precedence.
// Each run writes its artifacts plus a manifest.json into --out.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include "cli_support.hpp"
#include "scarkit/dynamics.hpp"
#include "scarkit/errors.hpp"
#include "scarkit/fock_basis.hpp"
#include "scarkit/graph.hpp"
#include "scarkit/hamiltonian.hpp"
#include "scarkit/observables.hpp"
#include "scarkit/resonance.hpp"
#include "scarkit/spectral.hpp"

using namespace scarkit;
using namespace scarkit::cli;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
    // model
    int L = 8;
    int N = -1;
    std::string family;
    double u_over_g = kNaN;
    double g_over_omega = kNaN;
    double g = 50.0;
    double u = 0.5;
    // run control
    std::string out = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    long dense_threshold = kDefaultDenseThreshold;
    long propagator_threshold = PropagatorOptions{}.dense_threshold;
    bool svg = false;
    // command specific
    std::string kind;
    std::string solver = "auto";
    std::string emit = "both";
    std::string classes = "g-U,g";
    std::string initial = "tp";
    std::string model = "effective";
    long cycles = -1;  ///< -1 selects the command default
    long stride = 10;
    bool fft = false;
    std::string U_range = "0.5:80:160";
    std::string g_range = "0.5:80:160";
    double omega = 20.0;
    int list_families = -1;
    bool scan = false;
    std::string figure;
    std::string scale = "desk";
    std::vector<int> sizes;
};

// ---------------------------------------------------------------------------
// Model resolution

struct Model {
    ModelParams params;
    std::optional<ResonantFamily> family;
    int L = 0;
    int N = 0;

    [[nodiscard]] std::shared_ptr<const SectorBasis> basis() const { return std::make_shared<const SectorBasis>(L, N); }
    [[nodiscard]] bool resonant() const noexcept { return family.has_value(); }
};

ResonantFamily parse_family(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("family", "expected k1,k2,branch, got '" + text + "'");
    try {
        return resonant_family(std::stoi(parts[0]), std::stoi(parts[1]), parse_branch(parts[2]));
    } catch (const std::exception& e) {
        throw ConfigError("family", e.what());
    }
}

Model resolve_model(const Options& o, int L) {
    Model m;
    m.L = L;
    m.N = o.N >= 0 ? o.N : L / 2;
    if (L < 1 || L > 30) throw ConfigError("L", "must lie in [1, 30]");
    if (m.N > L) throw ConfigError("N", "exceeds L");
    const bool raw = !std::isnan(o.u_over_g) || !std::isnan(o.g_over_omega);
    if (raw && !o.family.empty()) throw ConfigError("family", "cannot be combined with U-over-g / g-over-omega");
    if (raw) {
        if (std::isnan(o.u_over_g)) throw ConfigError("U-over-g", "required together with g-over-omega");
        if (std::isnan(o.g_over_omega)) throw ConfigError("g-over-omega", "required together with U-over-g");
        if (!(o.g_over_omega > 0)) throw ConfigError("g-over-omega", "must be positive");
        m.params.U = o.u_over_g * o.g;
        m.params.g = o.g;
        m.params.u = o.u;
        m.params.omega = o.g / o.g_over_omega;
        m.family = detect_family(m.params);
    } else {
        const ResonantFamily f = parse_family(o.family.empty() ? "0,0,+" : o.family);
        m.params = f.params(o.g, o.u);
        m.family = f;
    }
    try {
        m.params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(o.g <= 0 ? "g" : (o.u < 0 ? "u" : "U-over-g"), e.what());
    }
    return m;
}

json params_json(const Model& m) {
    json j{{"L", m.L},
           {"N", m.N},
           {"J", m.params.J},
           {"U", round15(m.params.U)},
           {"g", round15(m.params.g)},
           {"omega", round15(m.params.omega)},
           {"u", round15(m.params.u)},
           {"T", round15(m.params.period())}};
    if (m.family)
        j["family"] = {{"k1", m.family->k1},
                       {"k2", m.family->k2},
                       {"branch", to_string(m.family->branch)},
                       {"U_over_g", std::to_string(m.family->u_over_g_numerator()) + "/" +
                                        std::to_string(m.family->u_over_g_denominator())},
                       {"g_over_omega", m.family->g_over_omega}};
    return j;
}

HamiltonianMatrix effective_hamiltonian(const Model& m, const std::shared_ptr<const SectorBasis>& b) {
    return m.family ? build_effective_resonant(m.params, *m.family, b) : build_effective_general(m.params, b);
}

std::optional<Tower> tower_for(const Model& m) {
    if (m.L % 2 != 0 || m.L < 4 || m.N != m.L / 2) return std::nullopt;
    return Tower(m.L);
}

FockState resolve_initial(const std::string& text, const Model& m, std::uint64_t seed) {
    const auto tower = tower_for(m);
    try {
        if (text == "tp") return domain_wall_state(m.L, m.N);
        if (text == "random") {
            if (!tower) throw DomainError("random initial states need a half-filled chain with even L >= 4");
            return random_nontower_states(SectorBasis(m.L, m.N), *tower, 1, seed).front();
        }
        if (text == "te1" || text.rfind("te_p", 0) == 0 || text.rfind("te_h", 0) == 0) {
            if (!tower) throw DomainError("tower states need a half-filled chain with even L >= 4");
            if (text == "te1") return tower->te_p(1);
            const int q = std::stoi(text.substr(4));
            return text[3] == 'p' ? tower->te_p(q) : tower->te_h(q);
        }
        const FockState f = FockState::from_string(text);
        if (f.length() != m.L || f.particles() != m.N)
            throw DomainError("state " + text + " is not in the (L, N) sector");
        return f;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("initial", e.what());
    }
}

AxisRange parse_range(const std::string& key, const std::string& text) {
    AxisRange r;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.steps, &extra) != 3 || r.steps < 1 || r.lo <= 0 ||
        r.hi < r.lo)
        throw ConfigError(key, "expected lo:hi:steps with 0 < lo <= hi, got '" + text + "'");
    return r;
}

DiagonalizeOptions diag_options(const Options& o) {
    DiagonalizeOptions d;
    d.dense_threshold = o.dense_threshold;
    return d;
}

PropagatorOptions propagator_options(const Options& o) {
    PropagatorOptions p;
    p.dense_threshold = o.propagator_threshold;
    return p;
}

/// Chiral SVD route on the resonant model, generic Hermitian solver otherwise.
bool use_chiral(const Options& o, const Model& m) {
    if (o.solver == "chiral") {
        if (!m.resonant()) throw ConfigError("solver", "the chiral solver needs resonant parameters");
        return true;
    }
    if (o.solver == "generic") return false;
    if (o.solver != "auto") throw ConfigError("solver", "expected auto, chiral or generic");
    return m.resonant();
}

// ---------------------------------------------------------------------------
// Shared row builders

std::vector<CsvRow> series_rows(const std::vector<const std::vector<double>*>& columns) {
    std::vector<CsvRow> rows;
    const std::size_t n = columns.front()->size();
    for (std::size_t k = 0; k < n; ++k) {
        CsvRow r{std::to_string(k)};
        for (const auto* c : columns) r.push_back(num((*c)[k]));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<double> indices(std::size_t n, double scale = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) * scale;
    return x;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_basis(const Options& o, Artifacts& out, json& result) {
    const Model m = resolve_model(o, o.L);
    const SectorBasis b(m.L, m.N);
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const FockState s = b.state(i);
        rows.push_back({std::to_string(i), s.to_string(), std::to_string(dipole_moment(s)),
                        std::to_string(chiral_parity(s))});
    }
    out.csv("basis.csv", {"index", "state", "dipole", "parity"}, rows);
    const ChiralSplit split = subspace_dims(b);
    result["dimension"] = b.size();
    result["n_plus"] = split.n_plus;
    result["n_minus"] = split.n_minus;
    result["difference"] = split.difference();
    if (m.L == 2 * m.N) result["difference_formula"] = dim_difference_formula(m.N);
}

void cmd_hamiltonian(const Options& o, Artifacts& out, json& result) {
    const Model m = resolve_model(o, o.L);
    const auto b = m.basis();
    const std::string kind = o.kind.empty() ? (m.resonant() ? "resonant" : "general") : o.kind;
    HamiltonianMatrix h;
    if (kind == "onsite") h = build_onsite(b, m.params);
    else if (kind == "hop") h = build_hop_operator(b, m.params);
    else if (kind == "half1") h = build_half_period(m.params, 1, b);
    else if (kind == "half2") h = build_half_period(m.params, 2, b);
    else if (kind == "general") h = build_effective_general(m.params, b);
    else if (kind == "resonant") {
        if (!m.family) throw ConfigError("kind", "resonant needs parameters on a resonant family");
        h = build_effective_resonant(m.params, *m.family, b);
    } else
        throw ConfigError("kind", "expected onsite, hop, half1, half2, general or resonant");
    std::vector<CsvRow> rows;
    for (Eigen::Index c = 0; c < h.entries.outerSize(); ++c)
        for (SparseMatrixC::InnerIterator it(h.entries, c); it; ++it)
            rows.push_back({std::to_string(it.row()), std::to_string(it.col()),
                            b->state(static_cast<std::size_t>(it.row())).to_string(),
                            b->state(static_cast<std::size_t>(it.col())).to_string(), num(it.value().real()),
                            num(it.value().imag())});
    out.csv("hamiltonian.csv", {"row", "col", "row_state", "col_state", "re", "im"}, rows);
    result["kind"] = kind;
    result["dimension"] = h.dimension();
    result["nonzeros"] = rows.size();
    result["hermiticity_defect"] = round15(h.hermiticity_defect());
    result["chiral_anticommutator"] = round15(chiral_anticommutator_norm(h));
}

json ratio_json(const AmplitudeRatio& r) {
    json a = json::array();
    const char* names[] = {"g-U", "g", "g+U"};
    for (std::size_t i = 0; i < 3; ++i)
        a.push_back({{"process", names[i]},
                     {"ratio", std::isfinite(r.ratio[i]) ? json(round15(r.ratio[i])) : json("inf")},
                     {"divergent", r.divergent[i]}});
    return a;
}

void cmd_resonance(const Options& o, Artifacts& out, json& result) {
    if (o.scan) {
        const auto rows = scan_ratio_grid(parse_range("U-range", o.U_range), parse_range("g-range", o.g_range),
                                          o.omega, o.u);
        std::vector<CsvRow> csv;
        for (const RatioRow& r : rows)
            csv.push_back({num(r.U), num(r.g), num(r.r.ratio[0]), num(r.r.ratio[1]), num(r.r.ratio[2]),
                           std::to_string(r.r.divergent[0]), std::to_string(r.r.divergent[1]),
                           std::to_string(r.r.divergent[2])});
        out.csv("ratio_grid.csv", {"U", "g", "r1", "r2", "r3", "divergent1", "divergent2", "divergent3"}, csv);
        result["grid_points"] = rows.size();
        result["omega"] = o.omega;
        return;
    }
    if (o.list_families >= 0) {
        std::vector<CsvRow> csv;
        for (int k2 = 0; k2 <= o.list_families; ++k2)
            for (int k1 = 0; k1 <= o.list_families; ++k1)
                for (Branch br : {Branch::Plus, Branch::Minus}) {
                    if (br == Branch::Minus && k2 <= k1) continue;
                    const ResonantFamily f = resonant_family(k1, k2, br);
                    csv.push_back({std::to_string(k1), std::to_string(k2), to_string(br),
                                   std::to_string(f.u_over_g_numerator()) + "/" +
                                       std::to_string(f.u_over_g_denominator()),
                                   num(f.u_over_g()), std::to_string(f.g_over_omega), std::to_string(f.k3)});
                }
        out.csv("families.csv", {"k1", "k2", "branch", "U_over_g", "U_over_g_value", "g_over_omega", "k3"}, csv);
        result["families"] = csv.size();
    }
    const Model m = resolve_model(o, o.L);
    const ModelParams& p = m.params;
    const double barriers[3] = {p.g - p.U, p.g, p.g + p.U};
    json procs = ratio_json(amplitude_ratio(p));
    for (std::size_t i = 0; i < 3; ++i) {
        procs[i]["barrier"] = round15(barriers[i]);
        procs[i]["folded"] = round15(fold(std::abs(barriers[i]), p.omega));
        procs[i]["resonant"] = is_resonant(barriers[i], p.omega);
    }
    result["processes"] = procs;
    result["fully_resonant"] = m.resonant();
}

void cmd_spectrum(const Options& o, Artifacts& out, json& result) {
    const Model m = resolve_model(o, o.L);
    const auto b = m.basis();
    const HamiltonianMatrix h = effective_hamiltonian(m, b);
    auto report = [&](const auto& s) {
        const ZeroModes z = zero_modes(s);
        std::vector<bool> zero(static_cast<std::size_t>(s.dimension()), false);
        for (Eigen::Index i : z.indices) zero[static_cast<std::size_t>(i)] = true;
        std::vector<CsvRow> rows;
        for (Eigen::Index i = 0; i < s.dimension(); ++i)
            rows.push_back({std::to_string(i), num(s.quasienergies()(i)), zero[static_cast<std::size_t>(i)] ? "1" : "0"});
        out.csv("spectrum.csv", {"index", "quasienergy", "zero_mode"}, rows);
        const GapRatioStats r = gap_ratio_stats(s);
        result["dimension"] = s.dimension();
        result["zero_modes"] = z.indices.size();
        result["zero_tolerance"] = round15(z.tolerance);
        result["tolerance_sensitive"] = z.tolerance_sensitive;
        result["mean_gap_ratio"] = r.ratios.empty() ? json(nullptr) : json(round15(r.mean));
        result["gap_ratio_count"] = r.ratios.size();
        result["coe_reference"] = round15(r.coe_reference);
        result["poisson_reference"] = round15(r.poisson_reference);
        result["mirror_defect"] = round15(mirror_symmetry_defect(s.quasienergies()));
        if (o.svg) {
            std::vector<double> eps(s.quasienergies().data(), s.quasienergies().data() + s.dimension());
            out.line_chart("spectrum.svg", "Quasienergies", "index", "quasienergy",
                           {{"eps", indices(eps.size()), eps}});
        }
    };
    if (use_chiral(o, m)) {
        result["solver"] = "chiral";
        report(diagonalize_chiral(h, diag_options(o)));
    } else {
        result["solver"] = "generic";
        report(diagonalize(h, diag_options(o)));
    }
}

void cmd_graph(const Options& o, Artifacts& out, json& result) {
    const Model m = resolve_model(o, o.L);
    const auto b = m.basis();
    const HilbertGraph g = build_graph(b);
    if (o.emit != "dot" && o.emit != "csv" && o.emit != "both") throw ConfigError("emit", "expected dot, csv or both");
    if (o.emit != "csv") out.text("graph.dot", to_dot(g));
    if (o.emit != "dot") {
        std::vector<CsvRow> rows;
        for (const GraphEdge& e : g.edges())
            rows.push_back({std::to_string(e.a), std::to_string(e.b), b->state(static_cast<std::size_t>(e.a)).to_string(),
                            b->state(static_cast<std::size_t>(e.b)).to_string(), to_string(e.barrier),
                            std::to_string(e.bond)});
        out.csv("edges.csv", {"a", "b", "state_a", "state_b", "barrier", "bond"}, rows);
    }
    ClassSet allowed;
    try {
        allowed = ClassSet::parse(o.classes);
    } catch (const std::exception& e) {
        throw ConfigError("classes", e.what());
    }
    const auto hist = g.class_histogram();
    const Components all = components(g, ClassSet::all());
    const Components some = components(g, allowed);
    result["vertices"] = g.vertex_count();
    result["edges"] = g.edges().size();
    result["edges_by_class"] = {{"g-U", hist[0]}, {"g", hist[1]}, {"g+U", hist[2]}};
    result["bipartite"] = g.same_parity_edges() == 0;
    result["components"] = all.count();
    result["restricted_classes"] = o.classes;
    result["restricted_components"] = some.count();
    result["restricted_largest"] = some.largest();
    if (const auto tower = tower_for(m)) {
        const auto tp = static_cast<std::size_t>(*b->find(tower->pinnacle()));
        result["pinnacle_degree"] = g.degree(static_cast<Eigen::Index>(tp));
        result["pinnacle_restricted_component"] = some.sizes[some.label[tp]];
        result["tower"] = tower->labels();
    }
}

template <typename Scalar>
void write_eigenstates(const Spectrum<Scalar>& s, const FockState& f, Artifacts& out, const std::string& prefix,
                       json& result) {
    // Without a kernel weight on f (odd N) there is no scar state to flag.
    const double p0 = zero_projection(s, f);
    const std::optional<ScarSummary> scar = p0 > 1e-12 ? std::optional(scar_summary(s, f)) : std::nullopt;
    const Eigen::VectorXd ee = eigenstate_entanglement(s);
    const Eigen::VectorXd ie = eigenstate_shannon(s);
    const auto table = overlap_table(s, f);
    const ZeroModes z = zero_modes(s);
    std::vector<bool> zero(static_cast<std::size_t>(s.dimension()), false);
    for (Eigen::Index i : z.indices) zero[static_cast<std::size_t>(i)] = true;

    std::vector<CsvRow> ee_rows, ie_rows, ov_rows;
    for (Eigen::Index a = 0; a < s.dimension(); ++a) {
        const std::string eps = num(s.quasienergies()(a));
        const std::string z01 = zero[static_cast<std::size_t>(a)] ? "1" : "0";
        ee_rows.push_back({"eigenstate", eps, num(ee(a)), z01});
        ie_rows.push_back({"eigenstate", eps, num(ie(a)), z01});
        ov_rows.push_back({"eigenstate", eps, num(table[static_cast<std::size_t>(a)].weight), z01});
    }
    if (scar) {
        ee_rows.push_back({"scar", "0", num(scar->entanglement), "1"});
        ie_rows.push_back({"scar", "0", num(scar->shannon), "1"});
        ov_rows.push_back({"scar", "0", num(scar->overlap), "1"});
    }
    out.csv(prefix + "ee.csv", {"kind", "quasienergy", "S_EE", "zero_mode"}, ee_rows);
    out.csv(prefix + "ie.csv", {"kind", "quasienergy", "S_IE", "zero_mode"}, ie_rows);
    out.csv(prefix + "overlap.csv", {"kind", "quasienergy", "overlap", "zero_mode"}, ov_rows);

    std::vector<CsvRow> agg;
    for (const OverlapRow& r : overlap_table(s, f, true))
        agg.push_back({num(r.quasienergy), num(r.weight), std::to_string(r.multiplicity)});
    out.csv(prefix + "overlap_clusters.csv", {"quasienergy", "weight", "multiplicity"}, agg);

    result["initial"] = f.to_string();
    result["P0"] = round15(p0);
    if (scar) {
        result["overlap_s0"] = round15(scar->overlap);
        result["S_EE_s0"] = round15(scar->entanglement);
        result["S_IE_s0"] = round15(scar->shannon);
    }
    result["page_value"] = round15(page_value(s.basis()->sites()));
    result["coe_ie_reference"] = round15(coe_ie_reference(static_cast<double>(s.dimension())));
    result["zero_modes"] = z.indices.size();
    result["ee_central_band_median"] = round15(central_band_median(s, ee, 0.2));
    result["ie_central_band_median"] = round15(central_band_median(s, ie, 0.2));
    if (out.svg()) {
        std::vector<double> eps(s.quasienergies().data(), s.quasienergies().data() + s.dimension());
        out.line_chart(prefix + "ee.svg", "Eigenstate entanglement", "quasienergy", "S_EE",
                       {{"S_EE", eps, std::vector<double>(ee.data(), ee.data() + ee.size())}});
    }
}

void cmd_scar(const Options& o, Artifacts& out, json& result) {
    const Model m = resolve_model(o, o.L);
    if (!m.family) throw ConfigError("family", "the scar state needs fully resonant parameters");
    const FockState f = resolve_initial(o.initial, m, o.seed);
    const RealGaugeSpectrum s =
        diagonalize_chiral(build_effective_resonant(m.params, *m.family, m.basis()), diag_options(o));
    write_eigenstates(s, f, out, "", result);
    if (o.initial == "tp") result["P0_tp"] = result["P0"];
}

struct Trajectory {
    std::vector<double> fidelity, tower, entanglement;
};

template <typename Scalar>
Trajectory effective_trajectory(const Spectrum<Scalar>& s, const FockState& f, const std::optional<Tower>& tower,
                                long cycles, long stride) {
    const EffectiveEvolution<Scalar> evo(s, basis_state(s.basis(), f).amplitudes);
    Trajectory t;
    t.fidelity = evo.fidelity(cycles).values;
    if (tower) t.tower = evo.probability_on(tower->indices(*s.basis()), cycles).values;
    if (stride > 0) t.entanglement = evo.entanglement(EntanglementCut(s.basis(), s.basis()->sites() / 2), cycles, stride).values;
    return t;
}

Trajectory full_trajectory(const FloquetPropagator& prop, const FockState& f, const std::optional<Tower>& tower,
                           long cycles, long stride) {
    const auto& b = prop.basis();
    const StateVector psi0 = basis_state(b, f);
    const std::vector<Eigen::Index> rows = tower ? tower->indices(*b) : std::vector<Eigen::Index>{};
    const EntanglementCut cut(b, b->sites() / 2);
    Trajectory t;
    t.fidelity.assign(static_cast<std::size_t>(cycles + 1), kNaN);
    if (tower) t.tower.assign(t.fidelity.size(), kNaN);
    if (stride > 0) t.entanglement.assign(t.fidelity.size(), kNaN);
    prop.evolve(psi0.amplitudes, cycles, [&](long k, const Eigen::VectorXcd& psi) {
        const auto i = static_cast<std::size_t>(k);
        t.fidelity[i] = std::norm(psi0.amplitudes.dot(psi));
        if (tower) {
            double p = 0.0;
            for (Eigen::Index r : rows) p += std::norm(psi(r));
            t.tower[i] = p;
        }
        if (stride > 0 && k % stride == 0) t.entanglement[i] = cut.entropy(psi);
    });
    return t;
}

Trajectory run_dynamics(const Options& o, const Model& m, const std::string& model, const FockState& f, long cycles) {
    const auto tower = tower_for(m);
    if (model == "effective") {
        const auto b = m.basis();
        const HamiltonianMatrix h = effective_hamiltonian(m, b);
        if (use_chiral(o, m)) return effective_trajectory(diagonalize_chiral(h, diag_options(o)), f, tower, cycles, o.stride);
        return effective_trajectory(diagonalize(h, diag_options(o)), f, tower, cycles, o.stride);
    }
    if (model == "full") return full_trajectory(FloquetPropagator(m.params, m.basis(), propagator_options(o)), f, tower, cycles, o.stride);
    if (model == "spta") {
        if (!m.family) throw ConfigError("model", "spta needs fully resonant parameters");
        if (!tower) throw ConfigError("model", "spta needs a half-filled chain with even L >= 4");
        if (f != tower->pinnacle()) throw ConfigError("initial", "spta evolves the pinnacle state tp only");
        Trajectory t;
        t.fidelity = spta_fidelity(m.params, *m.family, m.L, cycles).values;
        return t;
    }
    throw ConfigError("model", "expected effective, full or spta");
}

void write_trajectory(Artifacts& out, const std::string& name, const Trajectory& t) {
    CsvRow header{"k", "fidelity"};
    std::vector<const std::vector<double>*> cols{&t.fidelity};
    if (!t.tower.empty()) {
        header.push_back("tower_probability");
        cols.push_back(&t.tower);
    }
    if (!t.entanglement.empty()) {
        header.push_back("entanglement");
        cols.push_back(&t.entanglement);
    }
    out.csv(name, header, series_rows(cols));
}

void write_fta(Artifacts& out, const std::string& name, const std::vector<std::pair<std::string, const std::vector<double>*>>& series) {
    std::vector<AmplitudeSpectrum> spectra;
    CsvRow header{"bin", "frequency"};
    for (const auto& [label, s] : series) {
        spectra.push_back(fta(*s));
        header.push_back(label);
    }
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < spectra.front().frequency.size(); ++i) {
        CsvRow r{std::to_string(i + 1), num(spectra.front().frequency[i])};
        for (const AmplitudeSpectrum& a : spectra) r.push_back(i < a.amplitude.size() ? num(a.amplitude[i]) : "");
        rows.push_back(std::move(r));
    }
    out.csv(name, header, rows);
}

long cycles_or(const Options& o, long fallback) {
    if (o.cycles == -1) return fallback;
    if (o.cycles < 0) throw ConfigError("cycles", "must be non-negative");
    return o.cycles;
}

void cmd_dynamics(Options o, Artifacts& out, json& result) {
    o.cycles = cycles_or(o, 1000);
    const Model m = resolve_model(o, o.L);
    const FockState f = resolve_initial(o.initial, m, o.seed);
    const Trajectory t = run_dynamics(o, m, o.model, f, o.cycles);
    write_trajectory(out, "dynamics.csv", t);
    if (o.fft) {
        std::vector<std::pair<std::string, const std::vector<double>*>> s{{"fidelity", &t.fidelity}};
        if (!t.tower.empty()) s.emplace_back("tower_probability", &t.tower);
        write_fta(out, "fta.csv", s);
    }
    out.line_chart("dynamics.svg", "Fidelity from " + f.to_string(), "k", "F(k)",
                   {{"F", indices(t.fidelity.size()), t.fidelity}});
    result["model"] = o.model;
    result["initial"] = f.to_string();
    result["cycles"] = o.cycles;
    result["rows"] = t.fidelity.size();
    result["mean_fidelity"] = round15(window_mean(t.fidelity, 0, static_cast<long>(t.fidelity.size()) - 1));
}

void cmd_compare(Options o, Artifacts& out, json& result) {
    o.cycles = cycles_or(o, 1000);
    Options eff = o;
    eff.stride = 0;
    const Model m = resolve_model(o, o.L);
    const FockState f = resolve_initial(o.initial, m, o.seed);
    const Trajectory full = run_dynamics(eff, m, "full", f, o.cycles);
    const Trajectory effective = run_dynamics(eff, m, "effective", f, o.cycles);
    std::vector<double> diff(full.fidelity.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < diff.size(); ++k) {
        diff[k] = std::abs(full.fidelity[k] - effective.fidelity[k]);
        worst = std::max(worst, diff[k]);
    }
    out.csv("compare.csv", {"k", "F_full", "F_effective", "abs_diff"},
            series_rows({&full.fidelity, &effective.fidelity, &diff}));
    out.line_chart("compare.svg", "Full versus effective fidelity", "k", "F(k)",
                   {{"full", indices(diff.size()), full.fidelity}, {"effective", indices(diff.size()), effective.fidelity}});
    result["initial"] = f.to_string();
    result["cycles"] = o.cycles;
    result["max_abs_diff"] = round15(worst);
}

// ---------------------------------------------------------------------------
// Figure reproduction

std::vector<int> figure_sizes(const Options& o, std::vector<int> desk, std::vector<int> paper) {
    if (!o.sizes.empty()) return o.sizes;
    if (o.scale == "desk") return desk;
    if (o.scale == "paper") return paper;
    throw ConfigError("scale", "expected desk or paper");
}

void require_ed(const Options& o, int L) {
    const auto dim = static_cast<long>(binomial(L, L / 2));
    if (dim > o.dense_threshold)
        throw CapabilityError("L=" + std::to_string(L) + " needs dense diagonalization of dimension " + std::to_string(dim) +
                              " above the threshold " + std::to_string(o.dense_threshold));
}

void fig2(const Options& o, Artifacts& out, json& result) {
    const auto sizes = figure_sizes(o, {16, 14}, {16, 18});
    for (int L : sizes) require_ed(o, L);
    for (int L : sizes) {
        const Model m = resolve_model(o, L);
        if (!m.family) throw ConfigError("family", "fig2 needs fully resonant parameters");
        const RealGaugeSpectrum s =
            diagonalize_chiral(build_effective_resonant(m.params, *m.family, m.basis()), diag_options(o));
        json sub;
        write_eigenstates(s, domain_wall_state(L, L / 2), out, "fig2_L" + std::to_string(L) + "_", sub);
        result["L" + std::to_string(L)] = sub;
    }
}

void fig3(const Options& o, Artifacts& out, json& result) {
    const auto sizes = figure_sizes(o, {16, 14}, {16, 18});
    for (int L : sizes) require_ed(o, L);
    const long cycles = cycles_or(o, 4096);
    const std::size_t runs = 10;
    for (int L : sizes) {
        const Model m = resolve_model(o, L);
        const auto b = m.basis();
        const auto tower = tower_for(m);
        if (!m.family || !tower) throw ConfigError("L", "fig3 needs even L >= 4 on a resonant family");
        const RealGaugeSpectrum s = diagonalize_chiral(build_effective_resonant(m.params, *m.family, b), diag_options(o));
        const std::string tag = "fig3_L" + std::to_string(L) + "_";
        json sub;
        std::vector<Series> chart;
        for (const auto& [label, f] : std::vector<std::pair<std::string, FockState>>{
                 {"tp", tower->pinnacle()}, {"te_p2", tower->te_p(2)}}) {
            const Trajectory t = effective_trajectory(s, f, tower, cycles, o.stride);
            write_trajectory(out, tag + label + ".csv", t);
            chart.push_back({label, indices(t.fidelity.size()), t.fidelity});
        }
        std::vector<TimeSeries> fid, pt, ee;
        for (const FockState& f : random_nontower_states(*b, *tower, runs, o.seed)) {
            const Trajectory t = effective_trajectory(s, f, tower, cycles, o.stride);
            auto series = [](const std::vector<double>& v) {
                TimeSeries ts;
                ts.values = v;
                return ts;
            };
            fid.push_back(series(t.fidelity));
            pt.push_back(series(t.tower));
            ee.push_back(series(t.entanglement));
        }
        const SeriesBand bf = aggregate(fid), bp = aggregate(pt);
        CsvRow header{"k", "fidelity", "fidelity_sd", "tower_probability", "tower_probability_sd"};
        std::vector<const std::vector<double>*> cols{&bf.mean, &bf.sd, &bp.mean, &bp.sd};
        SeriesBand be;
        if (o.stride > 0) {
            be = aggregate(ee);
            header.insert(header.end(), {"entanglement", "entanglement_sd"});
            cols.insert(cols.end(), {&be.mean, &be.sd});
        }
        out.csv(tag + "random.csv", header, series_rows(cols));
        chart.push_back({"random (mean)", indices(bf.mean.size()), bf.mean});
        out.line_chart(tag + "fidelity.svg", "Fidelity, L=" + std::to_string(L), "k", "F(k)", chart);
        const double p0 = zero_projection(s, tower->pinnacle());
        sub["P0_tp_squared"] = round15(p0 * p0);
        sub["random_runs"] = runs;
        result["L" + std::to_string(L)] = sub;
    }
}

void fig4(const Options& o, Artifacts& out, json& result) {
    const auto sizes = figure_sizes(o, {16, 14}, {16, 18});
    for (int L : sizes) require_ed(o, L);
    for (int L : sizes) {
        const Model m = resolve_model(o, L);
        const auto tower = tower_for(m);
        if (!m.family || !tower) throw ConfigError("L", "fig4 needs even L >= 4 on a resonant family");
        const RealGaugeSpectrum s =
            diagonalize_chiral(build_effective_resonant(m.params, *m.family, m.basis()), diag_options(o));
        const FockState tp = tower->pinnacle();
        const long cycles = cycles_or(o, 4096);
        const Trajectory t = effective_trajectory(s, tp, tower, cycles, 0);
        const std::vector<double> spta = spta_fidelity(m.params, *m.family, L, cycles).values;
        const std::string tag = "fig4_L" + std::to_string(L) + "_";
        write_fta(out, tag + "fta.csv", {{"fidelity", &t.fidelity}, {"tower_probability", &t.tower}, {"spta_fidelity", &spta}});
        const AmplitudeSpectrum grid = fta(t.fidelity);
        const int multiple = (L / 2) % 2 == 0 ? 1 : 2;
        json sub;
        sub["frequency_multiple"] = multiple;
        json lines = json::array();
        const auto peaks = overlap_frequency_peaks(s, tp, grid, multiple);
        for (std::size_t i = 0; i < std::min<std::size_t>(peaks.size(), 2); ++i)
            lines.push_back({{"quasienergy", round15(peaks[i].quasienergy)},
                             {"frequency", round15(multiple * peaks[i].quasienergy * s.period())},
                             {"weight", round15(peaks[i].weight)}});
        sub["overlap_lines"] = lines;
        json fft_peaks = json::array();
        for (std::size_t i : grid.peaks(4)) fft_peaks.push_back(round15(grid.frequency[i]));
        sub["fidelity_peaks"] = fft_peaks;
        result["L" + std::to_string(L)] = sub;
        if (out.svg())
            out.line_chart(tag + "fta.svg", "Fourier amplitude, L=" + std::to_string(L), "frequency (rad/cycle)", "FTA",
                           {{"F", grid.frequency, grid.amplitude}});
    }
}

void fig5(const Options& o, Artifacts& out, json& result) {
    const auto sizes = figure_sizes(o, {12, 14}, {16, 18});
    for (int L : sizes) {
        const auto dim = static_cast<long>(binomial(L, L / 2));
        if (dim > o.propagator_threshold)
            throw CapabilityError("L=" + std::to_string(L) + " needs a dense period propagator of dimension " +
                                  std::to_string(dim) + " above the threshold " + std::to_string(o.propagator_threshold));
    }
    for (int L : sizes) {
        json sub;
        std::vector<Series> chart;
        for (double g : {15.0, 30.0, 50.0}) {
            Options og = o;
            og.g = g;
            og.stride = 0;
            const Model m = resolve_model(og, L);
            const FockState tp = domain_wall_state(L, L / 2);
            const long cycles = std::lround(50 * g);
            const Trajectory full = run_dynamics(og, m, "full", tp, cycles);
            const Trajectory eff = run_dynamics(og, m, "effective", tp, cycles);
            const std::vector<double> kg = indices(full.fidelity.size(), 1.0 / g);
            double worst = 0.0;
            for (std::size_t k = 0; k < kg.size(); ++k) worst = std::max(worst, std::abs(full.fidelity[k] - eff.fidelity[k]));
            std::vector<CsvRow> rows;
            for (std::size_t k = 0; k < kg.size(); ++k)
                rows.push_back({std::to_string(k), num(kg[k]), num(full.fidelity[k]), num(eff.fidelity[k])});
            const std::string gtag = std::to_string(static_cast<int>(g));
            out.csv("fig5_L" + std::to_string(L) + "_g" + gtag + ".csv", {"k", "k_over_g", "F_full", "F_effective"}, rows);
            sub["g" + gtag] = {{"cycles", cycles}, {"max_abs_diff", round15(worst)}};
            chart.push_back({"full g=" + gtag, kg, full.fidelity});
            if (g == 50.0) chart.push_back({"effective", kg, eff.fidelity});
        }
        out.line_chart("fig5_L" + std::to_string(L) + ".svg", "Full versus effective, L=" + std::to_string(L), "k/g",
                       "F(k)", chart);
        result["L" + std::to_string(L)] = sub;
    }
}

void fig6(const Options& o, Artifacts& out, json& result) {
    const AxisRange U = parse_range("U-range", o.U_range), g = parse_range("g-range", o.g_range);
    const auto rows = scan_ratio_grid(U, g, o.omega, o.u);
    for (int i = 0; i < 3; ++i) {
        std::vector<CsvRow> csv;
        std::vector<double> cells(rows.size(), kNaN);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const RatioRow& row = rows[r];
            const auto ui = static_cast<std::size_t>(i);
            csv.push_back({num(row.U), num(row.g), num(row.r.ratio[ui]), row.r.divergent[ui] ? "1" : "0"});
            // rows are U-major; the heat map puts g on x and U on y
            cells[r] = row.r.divergent[ui] ? kNaN : row.r.ratio[ui];
        }
        const std::string name = "fig6_r" + std::to_string(i + 1);
        out.csv(name + ".csv", {"U", "g", "ratio", "divergent"}, csv);
        out.heat_map(name + ".svg", "|J/dE| process " + std::to_string(i + 1), g.steps, U.steps, cells);
    }
    // Cut at U = 40.
    std::vector<CsvRow> cut;
    std::vector<Series> chart(3);
    const char* names[] = {"r1", "r2", "r3"};
    for (int i = 0; i < 3; ++i) chart[static_cast<std::size_t>(i)].name = names[i];
    for (const RatioRow& row : scan_ratio_grid({40, 40, 1}, {g.lo, g.hi, 4 * g.steps}, o.omega, o.u)) {
        CsvRow r{num(row.g)};
        for (std::size_t i = 0; i < 3; ++i) {
            const double v = row.r.divergent[i] ? kNaN : row.r.ratio[i];
            r.push_back(num(v));
            chart[i].x.push_back(row.g);
            chart[i].y.push_back(v);
        }
        cut.push_back(std::move(r));
    }
    out.csv("fig6_cut_U40.csv", {"g", "r1", "r2", "r3"}, cut);
    out.line_chart("fig6_cut_U40.svg", "Ratios along U = 40", "g", "|J/dE|", chart);
    result["grid_points"] = rows.size();
    result["omega"] = o.omega;
}

void cmd_reproduce(Options o, Artifacts& out, json& result) {
    result["figure"] = o.figure;
    result["scale"] = o.scale;
    if (o.scale != "desk" && o.scale != "paper") throw ConfigError("scale", "expected desk or paper");
    if (o.figure == "fig2") fig2(o, out, result);
    else if (o.figure == "fig3") fig3(o, out, result);
    else if (o.figure == "fig4") fig4(o, out, result);
    else if (o.figure == "fig5") fig5(o, out, result);
    else if (o.figure == "fig6") fig6(o, out, result);
    else throw ConfigError("figure", "expected fig2, fig3, fig4, fig5 or fig6");
}

// ---------------------------------------------------------------------------
// Command-line wiring

std::string env_name(const std::string& flag) {
    std::string s = "SCARKIT_";
    for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

template <typename T>
CLI::Option* add(CLI::App& app, const std::string& name, T& var, const std::string& help) {
    return app.add_option("--" + name, var, help)->envname(env_name(name));
}

CLI::Option* add_flag(CLI::App& app, const std::string& name, bool& var, const std::string& help) {
    return app.add_flag("--" + name, var, help)->envname(env_name(name));
}

struct Command {
    CLI::App* app;
    std::function<void(const Options&, Artifacts&, json&)> run;
};

void run_reproduce(const Options& o, Artifacts& out, json& result) { cmd_reproduce(o, out, result); }

int run(const std::vector<std::string>& argv_in) {
    Options o;
    CLI::App app{"scarkit: Floquet scars in the driven tilted chain (J = 1)"};
    app.set_version_flag("--version", SCARKIT_VERSION);
    app.set_config("--config", "", "Read options from a key = value file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(0, 1);
    std::string replay;
    app.add_option("--replay", replay, "Re-run the command recorded in a manifest.json");

    add(app, "L", o.L, "Chain length");
    add(app, "N", o.N, "Particle number (default L/2)");
    add(app, "family", o.family, "Resonant family k1,k2,branch (default 0,0,+)");
    add(app, "U-over-g", o.u_over_g, "U/g, raw parameter input");
    add(app, "g-over-omega", o.g_over_omega, "g/omega, raw parameter input");
    add(app, "g", o.g, "Tilt g");
    add(app, "u", o.u, "Drive amplitude u");
    add(app, "out", o.out, "Output directory");
    add(app, "seed", o.seed, "Seed for random initial states");
    add(app, "threads", o.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    add(app, "dense-threshold", o.dense_threshold, "Largest dimension for dense diagonalization");
    add(app, "propagator-threshold", o.propagator_threshold, "Largest dimension for a dense period propagator");
    add_flag(app, "svg", o.svg, "Also write SVG renderings");
    add(app, "kind", o.kind, "hamiltonian: onsite|hop|half1|half2|general|resonant");
    add(app, "solver", o.solver, "auto|chiral|generic");
    add(app, "emit", o.emit, "graph: dot|csv|both");
    add(app, "classes", o.classes, "graph: barrier classes kept for the component count");
    add(app, "initial", o.initial, "tp, te1, te_p<q>, te_h<q>, random or an occupation string");
    add(app, "model", o.model, "dynamics: effective|full|spta");
    add(app, "cycles", o.cycles, "Driving cycles");
    add(app, "stride", o.stride, "Entanglement every this many cycles (0 disables)");
    add_flag(app, "fft", o.fft, "dynamics: write Fourier amplitudes");
    add(app, "U-range", o.U_range, "resonance scan: lo:hi:steps");
    add(app, "g-range", o.g_range, "resonance scan: lo:hi:steps");
    add(app, "omega", o.omega, "resonance scan and fig6: drive frequency");
    add(app, "list-families", o.list_families, "resonance: list families with k1, k2 up to this value");
    add_flag(app, "scan", o.scan, "resonance: scan the ratio grid");
    add(app, "scale", o.scale, "reproduce: desk|paper");
    add(app, "sizes", o.sizes, "reproduce: override the chain lengths")->delimiter(',');

    std::vector<Command> commands{
        {app.add_subcommand("basis", "Enumerate a fixed-N sector"), cmd_basis},
        {app.add_subcommand("hamiltonian", "Write a Hamiltonian as sparse entries"), cmd_hamiltonian},
        {app.add_subcommand("resonance", "Resonance conditions and amplitude ratios"), cmd_resonance},
        {app.add_subcommand("spectrum", "Quasienergies, zero modes and gap ratios"), cmd_spectrum},
        {app.add_subcommand("graph", "Fock-space graph, components and DOT output"), cmd_graph},
        {app.add_subcommand("scar", "Zero-energy scar state and eigenstate entropies"), cmd_scar},
        {app.add_subcommand("dynamics", "Stroboscopic fidelity, tower weight and entanglement"), cmd_dynamics},
        {app.add_subcommand("compare", "Full versus effective fidelity"), cmd_compare},
        {app.add_subcommand("reproduce", "Regenerate the data behind one figure"), run_reproduce},
    };
    for (Command& c : commands) c.app->fallthrough();
    CLI::App* reproduce = commands.back().app;
    reproduce->add_option("figure", o.figure, "fig2|fig3|fig4|fig5|fig6")->required();
    reproduce->add_option("scale", o.scale, "desk|paper");

    std::vector<std::string> args(argv_in.rbegin(), argv_in.rend());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "scarkit: " << e.what() << "\n";
        return 2;
    }

    if (!replay.empty()) {
        std::ifstream in(replay);
        if (!in) {
            std::cerr << "scarkit: replay: cannot read " << replay << "\n";
            return 2;
        }
        json manifest;
        try {
            manifest = json::parse(in);
            auto recorded = manifest.at("argv").get<std::vector<std::string>>();
            // An explicit --out redirects the replayed artifacts.
            if (app.get_option("--out")->count() > 0) {
                std::vector<std::string> kept;
                for (std::size_t i = 0; i < recorded.size(); ++i) {
                    if (recorded[i] == "--out") {
                        ++i;
                        continue;
                    }
                    if (recorded[i].rfind("--out=", 0) == 0) continue;
                    kept.push_back(recorded[i]);
                }
                kept.insert(kept.end(), {"--out", o.out});
                recorded = std::move(kept);
            }
            return run(recorded);
        } catch (const json::exception& e) {
            std::cerr << "scarkit: replay: " << e.what() << "\n";
            return 2;
        }
    }

    const Command* chosen = nullptr;
    for (const Command& c : commands)
        if (c.app->parsed()) chosen = &c;
    if (chosen == nullptr) {
        std::cout << app.help();
        return 2;
    }

    Eigen::setNbThreads(o.threads);
    try {
        Artifacts out(o.out, o.svg);
        json result;
        chosen->run(o, out, result);
        json manifest{{"tool", "scarkit"},
                      {"version", SCARKIT_VERSION},
                      {"command", chosen->app->get_name()},
                      {"argv", argv_in},
                      {"seed", o.seed},
                      {"threads", o.threads},
                      {"result", result}};
        if (chosen->app->get_name() != "resonance" || !o.scan) {
            try {
                manifest["parameters"] = params_json(resolve_model(o, o.L));
            } catch (const ConfigError&) {
            }
        }
        manifest["artifacts"] = out.written();
        out.json("manifest.json", manifest);
        std::cout << result.dump(2) << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "scarkit: config error: " << e.what() << "\n";
        return 2;
    } catch (const CapabilityError& e) {
        std::cerr << "scarkit: capability error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "scarkit: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "scarkit: error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}

// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks.  One PASS/FAIL line per criterion.
// Desk mode covers L <= 14; --extended adds the L = 16 checks.

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scarkit/dynamics.hpp"
#include "scarkit/errors.hpp"
#include "scarkit/fock_basis.hpp"
#include "scarkit/graph.hpp"
#include "scarkit/hamiltonian.hpp"
#include "scarkit/observables.hpp"
#include "scarkit/resonance.hpp"
#include "scarkit/spectral.hpp"

using namespace scarkit;

namespace {

const ResonantFamily kFamily = resonant_family(0, 0, Branch::Plus);  // U/g = 2, g = omega
constexpr double kTilt = 50.0;
constexpr double kDrive = 0.5;

ModelParams base_params() { return kFamily.params(kTilt, kDrive); }

std::shared_ptr<const SectorBasis> half_filled(int L) { return std::make_shared<const SectorBasis>(L, L / 2); }

HamiltonianMatrix resonant_h(int L) { return build_effective_resonant(base_params(), kFamily, half_filled(L)); }

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

class Log {
public:
    void detail(const std::string& line) { details_.push_back(line); }
    void fail(const std::string& line) {
        ok_ = false;
        details_.push_back("FAILED " + line);
    }
    void check(bool cond, const std::string& line) { cond ? detail(line) : fail(line); }
    [[nodiscard]] bool ok() const { return ok_; }
    [[nodiscard]] const std::vector<std::string>& details() const { return details_; }

private:
    bool ok_ = true;
    std::vector<std::string> details_;
};

// Spectra shared by several criteria.
struct Cache {
    std::map<int, RealGaugeSpectrum> chiral;
    std::map<int, ComplexSpectrum> generic;

    const RealGaugeSpectrum& at(int L) {
        auto it = chiral.find(L);
        if (it == chiral.end()) it = chiral.emplace(L, diagonalize_chiral(resonant_h(L))).first;
        return it->second;
    }
    const ComplexSpectrum& generic_at(int L) {
        auto it = generic.find(L);
        if (it == generic.end()) it = generic.emplace(L, diagonalize(resonant_h(L))).first;
        return it->second;
    }
};

// ---------------------------------------------------------------------------

void zero_mode_counts(Cache& cache, bool extended, Log& log) {
    std::map<int, std::size_t> expected{{4, 2}, {6, 0}, {8, 6}, {10, 0}, {12, 20}, {14, 0}};
    if (extended) expected[16] = 70;
    for (const auto& [L, want] : expected) {
        const ZeroModes z = zero_modes(cache.at(L));
        log.check(z.indices.size() == want && !z.tolerance_sensitive,
                  fmt("L=%d zero modes %zu (expected %zu)%s", L, z.indices.size(), want,
                      z.tolerance_sensitive ? " tolerance-sensitive" : ""));
    }
}

void chiral_structure(Cache& cache, Log& log) {
    for (int L = 4; L <= 12; L += 2) {
        const HamiltonianMatrix h = resonant_h(L);
        const double anti = chiral_anticommutator_norm(h);
        const ComplexSpectrum& s = cache.generic_at(L);
        const double mirror = mirror_symmetry_defect(s.quasienergies());
        const KernelParityReport k = kernel_parity_report(s);
        log.check(anti == 0.0 && mirror < 1e-10 && k.rank_in_smaller == 0,
                  fmt("L=%d |CH+HC|=%.1e mirror %.1e kernel %ld rank in smaller sector %ld", L, anti, mirror,
                      static_cast<long>(k.kernel_size), static_cast<long>(k.rank_in_smaller)));
    }
}

void sector_counting(Log& log) {
    for (int N = 1; N <= 10; ++N) {
        const int L = 2 * N;
        const SectorBasis b(L, N);
        const ChiralSplit counted = subspace_dims(b);
        const ChiralSplit formula = subspace_dims_formula(N);
        bool ok = counted == formula && counted.difference() == dim_difference_formula(N);
        std::string extra;
        if (N % 2 == 0) {
            const bool larger = chiral_parity(domain_wall_state(L, N)) == counted.larger_sector;
            ok = ok && larger && pinnacle_in_larger_sector(L);
            extra = larger ? " pinnacle in larger sector" : " pinnacle NOT in larger sector";
        }
        log.check(ok, fmt("L=%d N+=%llu N-=%llu diff=%llu%s", L, static_cast<unsigned long long>(counted.n_plus),
                          static_cast<unsigned long long>(counted.n_minus),
                          static_cast<unsigned long long>(counted.difference()), extra.c_str()));
    }
}

void scar_locality(Cache& cache, bool extended, Log& log) {
    for (int L : {8, 12}) {
        const RealGaugeSpectrum& s = cache.at(L);
        const FockState tp = domain_wall_state(L, L / 2);
        const ScarSummary scar = scar_summary(s, tp);
        const auto table = overlap_table(s, tp);
        const std::set<Eigen::Index> kernel(s.zero_indices().begin(), s.zero_indices().end());
        double thermal = 0.0;
        long count = 0;
        for (Eigen::Index a = 0; a < s.dimension(); ++a) {
            if (kernel.count(a) != 0) continue;
            thermal += table[static_cast<std::size_t>(a)].weight;
            ++count;
        }
        thermal /= static_cast<double>(count);
        log.check(scar.overlap >= 10 * thermal,
                  fmt("L=%d |<tp|s0>|^2=%.4f mean thermal overlap %.3e ratio %.1f", L, scar.overlap, thermal,
                      scar.overlap / thermal));
    }
    if (!extended) return;
    const RealGaugeSpectrum& s = cache.at(16);
    const ScarSummary scar = scar_summary(s, domain_wall_state(16, 8));
    log.check(std::abs(scar.p0 - 0.74) <= 0.02, fmt("L=16 P0=%.4f (0.74 +- 0.02)", scar.p0));
    const double band = central_band_median(s, eigenstate_entanglement(s), 0.2);
    log.check(scar.entanglement <= band - 1.5,
              fmt("L=16 S_EE(s0)=%.3f central band median %.3f", scar.entanglement, band));
    log.check(scar.shannon <= scar.coe_ie - 1.5,
              fmt("L=16 S_IE(s0)=%.3f ln(0.48 D)=%.3f", scar.shannon, scar.coe_ie));
}

void gap_statistics(Cache& cache, bool extended, Log& log) {
    const double r12 = gap_ratio_stats(cache.at(12)).mean;
    log.check(r12 >= 0.47 && r12 <= 0.56, fmt("L=12 mean r=%.4f in [0.47, 0.56]", r12));
    if (!extended) return;
    const double r16 = gap_ratio_stats(cache.at(16)).mean;
    log.check(std::abs(r16 - 0.53) <= 0.02, fmt("L=16 mean r=%.4f (0.53 +- 0.02)", r16));
}

void closed_form_fidelity(Cache& cache, Log& log) {
    for (int L : {8, 12}) {
        const RealGaugeSpectrum& chiral = cache.at(L);
        const ComplexSpectrum& generic = cache.generic_at(L);
        const Tower tower(L);
        std::vector<FockState> starts{tower.pinnacle(), tower.te_p(2)};
        const auto extra = random_nontower_states(*chiral.basis(), tower, 1, 2026);
        starts.insert(starts.end(), extra.begin(), extra.end());
        for (const FockState& f : starts) {
            const TimeSeries closed = analytic_fidelity(chiral, f, 256);
            const TimeSeries direct =
                EffectiveEvolution<std::complex<double>>(generic, basis_state(generic.basis(), f).amplitudes)
                    .fidelity(256);
            double worst = 0.0;
            for (std::size_t k = 0; k < closed.size(); ++k)
                worst = std::max(worst, std::abs(closed.values[k] - direct.values[k]));
            log.check(worst < 1e-8, fmt("L=%d from %s max deviation %.2e", L, f.to_string().c_str(), worst));
        }
    }
}

TimeSeries pinnacle_fidelity(const RealGaugeSpectrum& s, long cycles) {
    const FockState tp = domain_wall_state(s.basis()->sites(), s.basis()->particles());
    return EffectiveEvolution<double>(s, basis_state(s.basis(), tp).amplitudes).fidelity(cycles);
}

void plateau(Cache& cache, int L, Log& log) {
    const RealGaugeSpectrum& s = cache.at(L);
    const double p0 = zero_projection(s, domain_wall_state(L, L / 2));
    const TimeSeries f = pinnacle_fidelity(s, 4096);
    const double mean = window_mean(f.values, 500, 4096);
    const double slope = window_slope(f.values, 500, 4096);
    log.check(std::abs(mean - p0 * p0) <= 0.05 && std::abs(slope) < 1e-5,
              fmt("L=%d mean F[500,4096]=%.4f P0^2=%.4f slope %.2e", L, mean, p0 * p0, slope));
}

constexpr long kOddCycles = 8192;

void revivals(Cache& cache, Log& log) {
    const TimeSeries f = pinnacle_fidelity(cache.at(14), kOddCycles);
    const AmplitudeSpectrum a = fta(f);
    const auto top = a.peaks(1);
    if (top.empty()) {
        log.fail("L=14 no Fourier peak");
        return;
    }
    const double period = 2 * std::numbers::pi / a.frequency[top[0]];
    const auto peaks = revival_peaks(f.values, std::lround(period / 2));
    if (peaks.size() < 10) {
        log.fail(fmt("L=14 only %zu revivals in %ld cycles", peaks.size(), kOddCycles));
        return;
    }
    const double ratio = peaks[0].value / peaks[9].value;
    log.check(ratio > 1.5, fmt("L=14 revival period %.0f, first peak %.4f at k=%ld, tenth %.4f at k=%ld, ratio %.2f",
                               period, peaks[0].value, peaks[0].k, peaks[9].value, peaks[9].k, ratio));
}

void fourier_odd(Cache& cache, Log& log) {
    const RealGaugeSpectrum& s = cache.at(14);
    const FockState tp = domain_wall_state(14, 7);
    const AmplitudeSpectrum a = fta(pinnacle_fidelity(s, kOddCycles));
    const auto top = a.peaks(1);
    const auto levels = overlap_frequency_peaks(s, tp, a, 2);
    if (top.empty() || levels.empty()) {
        log.fail("L=14 no peaks");
        return;
    }
    const long fft_bin = static_cast<long>(top[0]) + 1;
    log.check(std::abs(fft_bin - levels[0].bin) <= 1,
              fmt("L=14 dominant Fourier bin %ld, 2|eps~ T| bin %ld (eps~=%.4f)", fft_bin, levels[0].bin,
                  levels[0].quasienergy));
}

void fourier_even(Cache& cache, Log& log) {
    const RealGaugeSpectrum& s = cache.at(16);
    const FockState tp = domain_wall_state(16, 8);
    const AmplitudeSpectrum a = fta(pinnacle_fidelity(s, 4096));
    const auto top = a.peaks(2);
    const auto levels = overlap_frequency_peaks(s, tp, a, 1);
    if (top.size() < 2 || levels.size() < 2) {
        log.fail("L=16 fewer than two peaks");
        return;
    }
    std::vector<long> fft_bins{static_cast<long>(top[0]) + 1, static_cast<long>(top[1]) + 1};
    std::vector<LevelPeak> lv{levels[0], levels[1]};
    std::sort(fft_bins.begin(), fft_bins.end());
    std::sort(lv.begin(), lv.end(), [](const LevelPeak& x, const LevelPeak& y) { return x.bin < y.bin; });
    for (int i = 0; i < 2; ++i)
        log.check(std::abs(fft_bins[static_cast<std::size_t>(i)] - lv[static_cast<std::size_t>(i)].bin) <= 1,
                  fmt("L=16 Fourier bin %ld vs |eps~_%d T| bin %ld (eps~=%.4f)", fft_bins[static_cast<std::size_t>(i)],
                      i + 1, lv[static_cast<std::size_t>(i)].bin, lv[static_cast<std::size_t>(i)].quasienergy));
    const double ref[2] = {0.064, 0.15};
    for (int i = 0; i < 2; ++i) {
        const double e = lv[static_cast<std::size_t>(i)].quasienergy;
        log.check(std::abs(e - ref[i]) <= 0.1 * ref[i], fmt("L=16 eps~_%d=%.4f vs %.3f +- 10%%", i + 1, e, ref[i]));
    }
    const AmplitudeSpectrum spta = fta(spta_fidelity(base_params(), kFamily, 16, 4096));
    const auto spta_top = spta.peaks(1);
    if (spta_top.empty()) {
        log.fail("L=16 no tower-approximation peak");
        return;
    }
    const long spta_bin = static_cast<long>(spta_top[0]) + 1;
    log.check(std::abs(spta_bin - fft_bins[1]) <= 1,
              fmt("L=16 tower-approximation bin %ld vs high-frequency bin %ld", spta_bin, fft_bins[1]));
}

void full_vs_effective(Log& log) {
    const int L = 12;
    const auto b = half_filled(L);
    const FockState tp = domain_wall_state(L, L / 2);
    const StateVector psi0 = basis_state(b, tp);
    std::vector<double> worst;
    for (double g : {15.0, 30.0}) {
        const ModelParams p = kFamily.params(g, kDrive);
        const long cycles = std::lround(50 * g);
        const TimeSeries full = full_fidelity(FloquetPropagator(p, b), psi0, cycles);
        const RealGaugeSpectrum s = diagonalize_chiral(build_effective_resonant(p, kFamily, b));
        const TimeSeries eff = EffectiveEvolution<double>(s, psi0.amplitudes).fidelity(cycles);
        double w = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k) w = std::max(w, std::abs(full.values[k] - eff.values[k]));
        worst.push_back(w);
        log.detail(fmt("g=%.0f over %ld cycles max |F_full - F_eff| = %.4f", g, cycles, w));
    }
    log.check(worst[1] < worst[0], "deviation shrinks as g grows");
}

void resonance_landscape(Log& log) {
    const double omega = 20.0;
    const AxisRange axis{0.5, 80.0, 160};
    const auto rows = scan_ratio_grid(axis, axis, omega, kDrive);
    const double step = (axis.hi - axis.lo) / (axis.steps - 1);
    // Distance of |delta| to the nearest resonant barrier (0 or odd multiple of omega).
    auto ridge_distance = [&](double delta) {
        const double x = std::abs(delta);
        return std::min(x, std::abs(x - omega * (2 * std::floor(x / (2 * omega)) + 1)));
    };
    long flags = 0, off_ridge = 0, stray = 0, large = 0;
    double worst = 0.0;
    for (const RatioRow& row : rows) {
        const double barrier[3] = {row.g - row.U, row.g, row.g + row.U};
        for (int i = 0; i < 3; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double d = ridge_distance(barrier[i]);
            if (row.r.divergent[ui]) {
                ++flags;
                if (d > step / 2) ++stray;
            } else if (d >= 0.45 * omega) {
                ++off_ridge;
                worst = std::max(worst, row.r.ratio[ui]);
                if (row.r.ratio[ui] >= 0.1) ++large;
            }
        }
    }
    log.check(stray == 0, fmt("%ld divergence flags, %ld off their ridge", flags, stray));
    log.check(large == 0, fmt("%ld off-ridge ratios, max %.4f", off_ridge, worst));
}

void graph_structure(Log& log) {
    const int L = 6;
    const auto b = half_filled(L);
    const HilbertGraph g = build_graph(b);
    log.check(g.same_parity_edges() == 0, fmt("L=6 graph %zu edges, bipartite", g.edges().size()));
    const Tower tower(L);
    const auto tp = static_cast<Eigen::Index>(*b->find(tower.pinnacle()));
    const auto inc = g.incident(tp);
    log.check(inc.size() == 1 && g.edges()[inc[0]].barrier == BarrierClass::GPlusU,
              fmt("pinnacle degree %zu via %s", inc.size(),
                  inc.empty() ? "none" : to_string(g.edges()[inc[0]].barrier).c_str()));

    const auto idx = tower.indices(*b);
    const std::set<Eigen::Index> members(idx.begin(), idx.end());
    long internal = 0;
    for (const GraphEdge& e : g.edges())
        if (members.count(e.a) != 0 && members.count(e.b) != 0) ++internal;
    // A connected graph on V vertices with V - 1 edges is a tree.
    std::vector<Eigen::Index> stack{idx.front()};
    std::set<Eigen::Index> seen{idx.front()};
    while (!stack.empty()) {
        const Eigen::Index v = stack.back();
        stack.pop_back();
        for (std::size_t e : g.incident(v)) {
            const Eigen::Index w = g.other(e, v);
            if (members.count(w) != 0 && seen.insert(w).second) stack.push_back(w);
        }
    }
    log.check(idx.size() == static_cast<std::size_t>(L) && tower.eaves().size() == static_cast<std::size_t>(L - 1) &&
                  internal == L - 1 && seen.size() == idx.size(),
              fmt("tower %zu vertices, %zu eaves, %ld internal edges, connected %s", idx.size(), tower.eaves().size(),
                  internal, seen.size() == idx.size() ? "yes" : "no"));

    const Components c = components(g, ClassSet{BarrierClass::GMinusU, BarrierClass::G});
    const std::size_t label = c.label[static_cast<std::size_t>(tp)];
    log.check(c.sizes[label] == 1, fmt("without g+U edges the pinnacle component has size %zu", c.sizes[label]));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scarkit acceptance checks"};
    bool extended = false;
    std::vector<int> only;
    app.add_flag("--extended", extended, "Include the L=16 checks (several minutes, ~3 GB)");
    app.add_option("--only", only, "Run only these criteria (comma separated)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    Cache cache;
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Log&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "zero-mode counts", [&](Log& l) { zero_mode_counts(cache, extended, l); }},
        {2, "chiral structure", [&](Log& l) { chiral_structure(cache, l); }},
        {3, "chiral sector counting", [&](Log& l) { sector_counting(l); }},
        {4, "scar locality", [&](Log& l) { scar_locality(cache, extended, l); }},
        {5, "gap-ratio statistics", [&](Log& l) { gap_statistics(cache, extended, l); }},
        {6, "closed-form fidelity", [&](Log& l) { closed_form_fidelity(cache, l); }},
        {7, "fidelity plateau and revivals",
         [&](Log& l) {
             plateau(cache, 12, l);
             if (extended) plateau(cache, 16, l);
             revivals(cache, l);
         }},
        {8, "Fourier peaks",
         [&](Log& l) {
             fourier_odd(cache, l);
             if (extended) fourier_even(cache, l);
         }},
        {9, "full versus effective model", [&](Log& l) { full_vs_effective(l); }},
        {10, "resonance landscape", [&](Log& l) { resonance_landscape(l); }},
        {11, "graph and tower structure", [&](Log& l) { graph_structure(l); }},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Log log;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(log);
        } catch (const std::exception& e) {
            log.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %-30s %s  (%.1f s)\n", c.id, c.title, log.ok() ? "PASS" : "FAIL", secs);
        for (const std::string& d : log.details()) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        if (!log.ok()) ++failures;
    }
    std::printf("%s: %d failing criteria (%s tier)\n", failures == 0 ? "PASS" : "FAIL", failures,
                extended ? "extended" : "desk");
    return failures == 0 ? 0 : 1;
}

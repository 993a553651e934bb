// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dynamics.hpp
 * @brief Stroboscopic evolution, fidelity analysis and Fourier amplitudes.
 *
 * Cycle k means time kT.  The effective model evolves in its eigenbasis;
 * the full square-wave model applies exp(-i H2 T/2) exp(-i H1 T/2) once per
 * cycle, either as a precomputed dense matrix or through Lanczos exponential
 * actions.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scarkit/graph.hpp"
#include "scarkit/hamiltonian.hpp"
#include "scarkit/observables.hpp"
#include "scarkit/spectral.hpp"

namespace scarkit {

struct TimeSeries {
    std::string label;
    std::vector<double> values;  ///< index = driving cycle k
    ModelParams params;
    std::string initial;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Evolution of one initial state under the eigen-decomposed effective model.
template <typename Scalar>
class EffectiveEvolution {
public:
    EffectiveEvolution(const Spectrum<Scalar>& spectrum, const Eigen::VectorXcd& psi0);

    [[nodiscard]] const Eigen::VectorXcd& coefficients() const noexcept { return coefficients_; }
    /// psi(k) = sum_alpha c_alpha e^{-i eps_alpha k T} |psi_alpha>.
    [[nodiscard]] Eigen::VectorXcd state(long k) const;
    /// <psi0|psi(k)>.
    [[nodiscard]] std::complex<double> return_amplitude(long k) const;

    /// F(k) for k = 0..cycles.
    [[nodiscard]] TimeSeries fidelity(long cycles) const;
    /// Probability on the given basis rows, e.g. the tower.
    [[nodiscard]] TimeSeries probability_on(const std::vector<Eigen::Index>& rows, long cycles) const;
    /// S_EE every `stride` cycles (entries with k % stride != 0 are NaN).
    [[nodiscard]] TimeSeries entanglement(const EntanglementCut& cut, long cycles, long stride = 1) const;

private:
    [[nodiscard]] Eigen::VectorXcd phased(long k) const;
    /// Gauge-frame coefficients at k0, k0 + step, ..., one column each.
    [[nodiscard]] Eigen::MatrixXcd phased_block(long k0, long count, long step) const;

    const Spectrum<Scalar>* spectrum_;
    Eigen::VectorXcd coefficients_;
};

/// psi(0..cycles) under the effective model.  Memory grows as D (cycles + 1).
template <typename Scalar>
[[nodiscard]] std::vector<StateVector> evolve_effective(const Spectrum<Scalar>& spectrum, const StateVector& psi0,
                                                        long cycles);

struct PropagatorOptions {
    /// Dense half-period propagators up to this dimension, Lanczos above.
    Eigen::Index dense_threshold = 4000;
    /// Refuse larger sectors altogether.
    Eigen::Index max_dimension = Eigen::Index{1} << 24;
    double krylov_tolerance = 1e-10;
    int krylov_dimension = 40;
};

/// exp(-i H t) v by Lanczos with adaptive substeps; error per call below `tolerance` (estimate).
[[nodiscard]] Eigen::VectorXcd krylov_expmv(const SparseMatrixC& h, const Eigen::VectorXcd& v, double t,
                                            double tolerance = 1e-10, int dimension = 40);

/// One-period propagator of the square-wave driven chain.
class FloquetPropagator {
public:
    FloquetPropagator(const ModelParams& params, std::shared_ptr<const SectorBasis> basis,
                      const PropagatorOptions& options = {});

    [[nodiscard]] bool dense() const noexcept { return dense_; }
    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
    [[nodiscard]] const std::shared_ptr<const SectorBasis>& basis() const noexcept { return basis_; }
    /// Dense one-period matrix (empty on the Krylov path).
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return period_; }

    [[nodiscard]] Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;

    /// Calls observe(k, psi(k)) for k = 0..cycles.
    void evolve(const Eigen::VectorXcd& psi0, long cycles,
                const std::function<void(long, const Eigen::VectorXcd&)>& observe) const;

private:
    ModelParams params_;
    std::shared_ptr<const SectorBasis> basis_;
    PropagatorOptions options_;
    bool dense_ = false;
    Eigen::MatrixXcd period_;
    SparseMatrixC h1_, h2_;
};

[[nodiscard]] std::vector<StateVector> evolve_full(const FloquetPropagator& propagator, const StateVector& psi0,
                                                   long cycles);
[[nodiscard]] TimeSeries full_fidelity(const FloquetPropagator& propagator, const StateVector& psi0, long cycles);

/// |<psi0|psi(k)>|^2 over a stored state sequence.
[[nodiscard]] TimeSeries fidelity_series(const std::vector<StateVector>& states, const StateVector& reference);
[[nodiscard]] TimeSeries ee_series(const std::vector<StateVector>& states, int cut = 0);
[[nodiscard]] TimeSeries tower_probability_series(const std::vector<StateVector>& states, const Tower& tower);

/**
 * Closed-form fidelity from a Fock state using the chiral pairing of
 * weights at +eps and -eps:
 *   F = P0^2 + 4 P0 sum_a w_a cos(e_a kT)
 *         + 2 sum_{a,b} w_a w_b [cos((e_a + e_b) kT) + cos((e_a - e_b) kT)]
 * over positive levels, degenerate levels merged within 1e-9.  The double
 * sum is evaluated literally, so the cost is (levels)^2 per cycle.
 */
template <typename Scalar>
[[nodiscard]] TimeSeries analytic_fidelity(const Spectrum<Scalar>& spectrum, const FockState& f, long cycles);

struct AmplitudeSpectrum {
    std::vector<double> frequency;  ///< radians per driving cycle, bins m = 1..n/2
    std::vector<double> amplitude;  ///< normalized to a maximum of 1
    double bin_width = 0.0;         ///< 2 pi / n

    /// Local maxima ordered by decreasing amplitude.
    [[nodiscard]] std::vector<std::size_t> peaks(std::size_t count = 8, double min_amplitude = 0.0) const;
    /// Bin index (>= 1) of a frequency in rad per cycle.
    [[nodiscard]] long bin_of(double frequency_rad) const;
};

/// Rectangular-window DFT amplitude with the zero-frequency bin removed.  Needs >= 64 samples.
[[nodiscard]] AmplitudeSpectrum fta(const std::vector<double>& series);
[[nodiscard]] AmplitudeSpectrum fta(const TimeSeries& series);

struct Peak {
    long k = 0;
    double value = 0.0;
};

/// Samples that are the maximum within +-half_window and exceed both neighbours.
[[nodiscard]] std::vector<Peak> revival_peaks(const std::vector<double>& series, long half_window);

/// A cluster of levels on the Fourier grid, weighted by |<f|psi_alpha>|^2.
struct LevelPeak {
    long bin = 0;              ///< grid bin of multiple * eps * T
    double weight = 0.0;       ///< overlap weight in that bin
    double quasienergy = 0.0;  ///< weight-averaged eps over the bin and its two neighbours
};

/**
 * Bins the positive quasienergies at frequency `multiple` * eps * T on the
 * grid of `grid`, weighting each by its overlap with f, and returns the
 * local maxima by decreasing weight.  Use multiple = 1 for a kernel-dominated
 * fidelity and 2 when the fidelity oscillates at level sums.
 */
template <typename Scalar>
[[nodiscard]] std::vector<LevelPeak> overlap_frequency_peaks(const Spectrum<Scalar>& spectrum, const FockState& f,
                                                             const AmplitudeSpectrum& grid, int multiple = 1);

/// Tower-restricted resonant Hamiltonian built straight from the tower states.
[[nodiscard]] Eigen::MatrixXcd spta_hamiltonian(const ModelParams& params, const ResonantFamily& family, int sites);

/// Pinnacle fidelity under a tower matrix whose last row is the pinnacle.
[[nodiscard]] TimeSeries spta_fidelity(const Eigen::MatrixXcd& spta, double period, long cycles);
[[nodiscard]] TimeSeries spta_fidelity(const ModelParams& params, const ResonantFamily& family, int sites,
                                       long cycles);

/// `count` distinct basis states outside the tower, drawn with mt19937_64(seed).
[[nodiscard]] std::vector<FockState> random_nontower_states(const SectorBasis& basis, const Tower& tower,
                                                            std::size_t count, std::uint64_t seed);

struct SeriesBand {
    std::vector<double> mean;
    std::vector<double> sd;  ///< population standard deviation
};

[[nodiscard]] SeriesBand aggregate(const std::vector<TimeSeries>& runs);

/// Mean over cycles [from, to] inclusive.
[[nodiscard]] double window_mean(const std::vector<double>& series, long from, long to);
/// Least-squares slope per cycle over [from, to] inclusive.
[[nodiscard]] double window_slope(const std::vector<double>& series, long from, long to);

}  // namespace scarkit

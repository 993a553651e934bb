// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "scarkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <type_traits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "scarkit/errors.hpp"

namespace scarkit {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

}  // namespace

// ---------------------------------------------------------------------------
// Effective model

template <typename Scalar>
EffectiveEvolution<Scalar>::EffectiveEvolution(const Spectrum<Scalar>& spectrum, const Eigen::VectorXcd& psi0)
    : spectrum_(&spectrum), coefficients_(spectrum.to_eigenbasis(psi0)) {
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw DomainError("initial state must be normalized");
}

template <typename Scalar>
Eigen::VectorXcd EffectiveEvolution<Scalar>::phased(long k) const {
    const Eigen::VectorXd& eps = spectrum_->quasienergies();
    const double t = static_cast<double>(k) * spectrum_->period();
    Eigen::VectorXcd c(coefficients_.size());
    for (Eigen::Index a = 0; a < c.size(); ++a) c(a) = coefficients_(a) * std::polar(1.0, -eps(a) * t);
    return c;
}

template <typename Scalar>
Eigen::VectorXcd EffectiveEvolution<Scalar>::state(long k) const {
    return spectrum_->from_eigenbasis(phased(k));
}

template <typename Scalar>
std::complex<double> EffectiveEvolution<Scalar>::return_amplitude(long k) const {
    const Eigen::VectorXd& eps = spectrum_->quasienergies();
    const double t = static_cast<double>(k) * spectrum_->period();
    std::complex<double> acc = 0.0;
    for (Eigen::Index a = 0; a < coefficients_.size(); ++a)
        acc += std::norm(coefficients_(a)) * std::polar(1.0, -eps(a) * t);
    return acc;
}

template <typename Scalar>
TimeSeries EffectiveEvolution<Scalar>::fidelity(long cycles) const {
    TimeSeries s;
    s.label = "F";
    s.values.reserve(static_cast<std::size_t>(cycles) + 1);
    for (long k = 0; k <= cycles; ++k) s.values.push_back(std::norm(return_amplitude(k)));
    return s;
}

template <typename Scalar>
Eigen::MatrixXcd EffectiveEvolution<Scalar>::phased_block(long k0, long count, long step) const {
    const Eigen::VectorXd& eps = spectrum_->quasienergies();
    const Eigen::VectorXcd c = spectrum_->column_phase().cwiseProduct(coefficients_);
    Eigen::MatrixXcd block(c.size(), count);
    for (long j = 0; j < count; ++j) {
        const double t = static_cast<double>(k0 + j * step) * spectrum_->period();
        for (Eigen::Index a = 0; a < c.size(); ++a) block(a, j) = c(a) * std::polar(1.0, -eps(a) * t);
    }
    return block;
}

namespace {

// Gauge-frame rows times a block of gauge-frame coefficients.
template <typename Matrix>
Eigen::MatrixXcd gauge_product(const Matrix& rows, const Eigen::MatrixXcd& block) {
    if constexpr (std::is_same_v<typename Matrix::Scalar, double>) {
        const Eigen::MatrixXd re = rows * block.real(), im = rows * block.imag();
        Eigen::MatrixXcd out(re.rows(), re.cols());
        out.real() = re;
        out.imag() = im;
        return out;
    } else {
        return rows * block;
    }
}

constexpr long kBlock = 64;

}  // namespace

template <typename Scalar>
TimeSeries EffectiveEvolution<Scalar>::probability_on(const std::vector<Eigen::Index>& rows, long cycles) const {
    TimeSeries s;
    s.label = "P_t";
    s.values.reserve(static_cast<std::size_t>(cycles) + 1);
    // Row phases are unimodular and drop out of the weights.
    using Matrix = typename Spectrum<Scalar>::Matrix;
    Matrix sub(static_cast<Eigen::Index>(rows.size()), spectrum_->dimension());
    for (std::size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = spectrum_->gauge_vectors().row(rows[i]);
    for (long k0 = 0; k0 <= cycles; k0 += kBlock) {
        const long count = std::min(kBlock, cycles + 1 - k0);
        const Eigen::MatrixXcd amp = gauge_product(sub, phased_block(k0, count, 1));
        for (long j = 0; j < count; ++j) s.values.push_back(amp.col(j).squaredNorm());
    }
    return s;
}

template <typename Scalar>
TimeSeries EffectiveEvolution<Scalar>::entanglement(const EntanglementCut& cut, long cycles, long stride) const {
    if (stride < 1) throw DomainError("stride must be positive");
    TimeSeries s;
    s.label = "S_EE";
    s.values.assign(static_cast<std::size_t>(cycles) + 1, std::numeric_limits<double>::quiet_NaN());
    const long samples = cycles / stride + 1;
    for (long j0 = 0; j0 < samples; j0 += kBlock) {
        const long count = std::min(kBlock, samples - j0);
        Eigen::MatrixXcd psi = gauge_product(spectrum_->gauge_vectors(), phased_block(j0 * stride, count, stride));
        for (long j = 0; j < count; ++j) {
            Eigen::VectorXcd v = spectrum_->row_phase().cwiseProduct(psi.col(j));
            v /= v.norm();
            s.values[static_cast<std::size_t>((j0 + j) * stride)] = cut.entropy(v);
        }
    }
    return s;
}

template class EffectiveEvolution<double>;
template class EffectiveEvolution<std::complex<double>>;

template <typename Scalar>
std::vector<StateVector> evolve_effective(const Spectrum<Scalar>& spectrum, const StateVector& psi0, long cycles) {
    if (psi0.basis && !(*psi0.basis == *spectrum.basis())) throw DomainError("initial state lives on another basis");
    const EffectiveEvolution<Scalar> evo(spectrum, psi0.amplitudes);
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(cycles) + 1);
    out.push_back({spectrum.basis(), psi0.amplitudes});
    for (long k = 1; k <= cycles; ++k) out.push_back({spectrum.basis(), evo.state(k)});
    return out;
}

template std::vector<StateVector> evolve_effective(const Spectrum<double>&, const StateVector&, long);
template std::vector<StateVector> evolve_effective(const Spectrum<std::complex<double>>&, const StateVector&, long);

// ---------------------------------------------------------------------------
// Full driven model

Eigen::VectorXcd krylov_expmv(const SparseMatrixC& h, const Eigen::VectorXcd& v, double t, double tolerance,
                              int dimension) {
    const Eigen::Index n = v.size();
    if (h.rows() != n || h.cols() != n) throw DomainError("krylov_expmv: dimension mismatch");
    Eigen::VectorXcd w = v;
    if (t == 0.0 || n == 0) return w;
    const int m_max = static_cast<int>(std::min<Eigen::Index>(dimension, n));
    double remaining = t;
    double tau = t;
    while (remaining > 0.0) {
        const double beta = w.norm();
        if (beta == 0.0) return w;
        Eigen::MatrixXcd V(n, m_max + 1);
        Eigen::VectorXd alpha(m_max), off(m_max);
        V.col(0) = w / beta;
        int m = m_max;
        bool exact = false;
        for (int j = 0; j < m_max; ++j) {
            Eigen::VectorXcd z = h * V.col(j);
            alpha(j) = V.col(j).dot(z).real();
            z -= alpha(j) * V.col(j);
            if (j > 0) z -= off(j - 1) * V.col(j - 1);
            for (int i = 0; i <= j; ++i) z -= V.col(i).dot(z) * V.col(i);  // full reorthogonalization
            off(j) = z.norm();
            if (off(j) <= 1e-13 * (std::abs(alpha(j)) + 1.0)) {
                m = j + 1;
                exact = true;
                break;
            }
            V.col(j + 1) = z / off(j);
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = alpha(j);
            if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = off(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        const Eigen::MatrixXd& q = eig.eigenvectors();
        Eigen::VectorXcd y;
        tau = std::min(tau, remaining);
        while (true) {
            Eigen::VectorXcd phase(m);
            for (int i = 0; i < m; ++i) phase(i) = std::polar(q(0, i), -eig.eigenvalues()(i) * tau);
            y = q.cast<std::complex<double>>() * phase;
            const double err = exact ? 0.0 : beta * off(m - 1) * std::abs(y(m - 1));
            if (err <= tolerance * tau / t || tau < 1e-14 * t) break;
            tau *= 0.5;
        }
        w = beta * (V.leftCols(m) * y);
        remaining -= tau;
        if (remaining <= 1e-15 * t) break;
        tau *= 1.5;
    }
    return w;
}

FloquetPropagator::FloquetPropagator(const ModelParams& params, std::shared_ptr<const SectorBasis> basis,
                                     const PropagatorOptions& options)
    : params_(params), basis_(std::move(basis)), options_(options) {
    params_.validate();
    const auto n = static_cast<Eigen::Index>(basis_->size());
    if (n > options_.max_dimension)
        throw CapabilityError("full-model evolution at dimension " + std::to_string(n) + " exceeds the limit " +
                              std::to_string(options_.max_dimension));
    h1_ = build_half_period(params_, 1, basis_).entries;
    h2_ = build_half_period(params_, 2, basis_).entries;
    dense_ = n <= options_.dense_threshold;
    if (!dense_) return;
    const double half = params_.period() / 2.0;
    auto half_step = [&](const SparseMatrixC& h) {
        // Both half-period Hamiltonians are real symmetric.
        const Eigen::MatrixXd real = Eigen::MatrixXcd(h).real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(real);
        Eigen::VectorXcd phase(n);
        for (Eigen::Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, -eig.eigenvalues()(i) * half);
        const Eigen::MatrixXcd v = eig.eigenvectors().cast<std::complex<double>>();
        return Eigen::MatrixXcd(v * phase.asDiagonal() * v.transpose());
    };
    const Eigen::MatrixXcd u1 = half_step(h1_);
    const Eigen::MatrixXcd u2 = half_step(h2_);
    period_ = u2 * u1;
}

Eigen::VectorXcd FloquetPropagator::apply(const Eigen::VectorXcd& psi) const {
    if (dense_) return period_ * psi;
    const double half = params_.period() / 2.0;
    const Eigen::VectorXcd mid =
        krylov_expmv(h1_, psi, half, options_.krylov_tolerance, options_.krylov_dimension);
    return krylov_expmv(h2_, mid, half, options_.krylov_tolerance, options_.krylov_dimension);
}

void FloquetPropagator::evolve(const Eigen::VectorXcd& psi0, long cycles,
                               const std::function<void(long, const Eigen::VectorXcd&)>& observe) const {
    if (psi0.size() != static_cast<Eigen::Index>(basis_->size()))
        throw DomainError("initial state dimension does not match the basis");
    Eigen::VectorXcd psi = psi0;
    observe(0, psi);
    for (long k = 1; k <= cycles; ++k) {
        psi = apply(psi);
        observe(k, psi);
    }
}

std::vector<StateVector> evolve_full(const FloquetPropagator& propagator, const StateVector& psi0, long cycles) {
    psi0.require_normalized();
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(cycles) + 1);
    propagator.evolve(psi0.amplitudes, cycles,
                      [&](long, const Eigen::VectorXcd& psi) { out.push_back({propagator.basis(), psi}); });
    return out;
}

TimeSeries full_fidelity(const FloquetPropagator& propagator, const StateVector& psi0, long cycles) {
    psi0.require_normalized();
    TimeSeries s;
    s.label = "F";
    s.params = propagator.params();
    propagator.evolve(psi0.amplitudes, cycles, [&](long, const Eigen::VectorXcd& psi) {
        s.values.push_back(std::norm(psi0.amplitudes.dot(psi)));
    });
    return s;
}

TimeSeries fidelity_series(const std::vector<StateVector>& states, const StateVector& reference) {
    TimeSeries s;
    s.label = "F";
    for (const StateVector& st : states) s.values.push_back(std::norm(reference.amplitudes.dot(st.amplitudes)));
    return s;
}

TimeSeries ee_series(const std::vector<StateVector>& states, int cut) {
    TimeSeries s;
    s.label = "S_EE";
    if (states.empty()) return s;
    const int c = cut > 0 ? cut : states.front().basis->sites() / 2;
    const EntanglementCut ec(states.front().basis, c);
    for (const StateVector& st : states) s.values.push_back(ec.entropy(st.amplitudes / st.norm()));
    return s;
}

TimeSeries tower_probability_series(const std::vector<StateVector>& states, const Tower& tower) {
    TimeSeries s;
    s.label = "P_t";
    if (states.empty()) return s;
    const std::vector<Eigen::Index> rows = tower.indices(*states.front().basis);
    for (const StateVector& st : states) {
        double p = 0.0;
        for (Eigen::Index r : rows) p += std::norm(st.amplitudes(r));
        s.values.push_back(p);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Closed-form fidelity

template <typename Scalar>
TimeSeries analytic_fidelity(const Spectrum<Scalar>& spectrum, const FockState& f, long cycles) {
    const auto at = spectrum.basis()->find(f);
    if (!at) throw DomainError("Fock state " + f.to_string() + " is not in the spectrum basis");
    const auto n0 = static_cast<Eigen::Index>(*at);
    const double p0 = zero_projection(spectrum, f);
    const double tol = spectrum.default_zero_tolerance();
    const Eigen::VectorXd& eps = spectrum.quasienergies();

    std::vector<double> level, weight;
    double start = 0.0;
    for (Eigen::Index a = 0; a < spectrum.dimension(); ++a) {
        if (!(eps(a) > tol)) continue;
        const double w = spectrum.weight(n0, a);
        if (!level.empty() && eps(a) - start <= kDegeneracyWidth) {
            weight.back() += w;
            continue;
        }
        start = eps(a);
        level.push_back(eps(a));
        weight.push_back(w);
    }

    const double T = spectrum.period();
    TimeSeries s;
    s.label = "F_analytic";
    s.initial = f.to_string();
    s.values.reserve(static_cast<std::size_t>(cycles) + 1);
    const std::size_t m = level.size();
    for (long k = 0; k <= cycles; ++k) {
        const double kt = static_cast<double>(k) * T;
        double single = 0.0, pairs = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            single += weight[a] * std::cos(level[a] * kt);
            for (std::size_t b = 0; b < m; ++b)
                pairs += weight[a] * weight[b] *
                         (std::cos((level[a] + level[b]) * kt) + std::cos((level[a] - level[b]) * kt));
        }
        s.values.push_back(p0 * p0 + 4.0 * p0 * single + 2.0 * pairs);
    }
    return s;
}

template TimeSeries analytic_fidelity(const Spectrum<double>&, const FockState&, long);
template TimeSeries analytic_fidelity(const Spectrum<std::complex<double>>&, const FockState&, long);

// ---------------------------------------------------------------------------
// Fourier analysis

AmplitudeSpectrum fta(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 64) throw DomainError("Fourier analysis needs at least 64 samples");
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out;
    fft.fwd(out, series);
    AmplitudeSpectrum spec;
    spec.bin_width = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t m = 1; m <= n / 2; ++m) {
        spec.frequency.push_back(spec.bin_width * static_cast<double>(m));
        spec.amplitude.push_back(std::abs(out[m]));
    }
    const double peak = *std::max_element(spec.amplitude.begin(), spec.amplitude.end());
    if (peak > 0)
        for (double& a : spec.amplitude) a /= peak;
    return spec;
}

AmplitudeSpectrum fta(const TimeSeries& series) { return fta(series.values); }

std::vector<std::size_t> AmplitudeSpectrum::peaks(std::size_t count, double min_amplitude) const {
    std::vector<std::size_t> found;
    const std::size_t n = amplitude.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = i == 0 || amplitude[i] > amplitude[i - 1];
        const bool right = i + 1 == n || amplitude[i] >= amplitude[i + 1];
        if (left && right && amplitude[i] >= min_amplitude) found.push_back(i);
    }
    std::stable_sort(found.begin(), found.end(),
                     [&](std::size_t a, std::size_t b) { return amplitude[a] > amplitude[b]; });
    if (found.size() > count) found.resize(count);
    return found;
}

long AmplitudeSpectrum::bin_of(double frequency_rad) const {
    return std::lround(std::abs(frequency_rad) / bin_width);
}

std::vector<Peak> revival_peaks(const std::vector<double>& series, long half_window) {
    std::vector<Peak> out;
    const auto n = static_cast<long>(series.size());
    for (long k = 1; k + 1 < n; ++k) {
        const double v = series[static_cast<std::size_t>(k)];
        if (!(v > series[static_cast<std::size_t>(k - 1)] && v >= series[static_cast<std::size_t>(k + 1)])) continue;
        const long lo = std::max(0L, k - half_window);
        const long hi = std::min(n - 1, k + half_window);
        bool is_max = true;
        for (long i = lo; i <= hi && is_max; ++i) is_max = series[static_cast<std::size_t>(i)] <= v;
        if (is_max) out.push_back({k, v});
    }
    return out;
}

template <typename Scalar>
std::vector<LevelPeak> overlap_frequency_peaks(const Spectrum<Scalar>& spectrum, const FockState& f,
                                               const AmplitudeSpectrum& grid, int multiple) {
    if (multiple < 1) throw DomainError("frequency multiple must be positive");
    const double tol = spectrum.default_zero_tolerance();
    const double period = spectrum.period();
    std::map<long, std::pair<double, double>> bins;  // bin -> (weight, weight * eps)
    for (const OverlapRow& row : overlap_table(spectrum, f, true)) {
        if (row.quasienergy <= tol) continue;
        auto& slot = bins[grid.bin_of(multiple * row.quasienergy * period)];
        slot.first += row.weight;
        slot.second += row.weight * row.quasienergy;
    }
    auto weight = [&](long b) {
        const auto it = bins.find(b);
        return it == bins.end() ? 0.0 : it->second.first;
    };
    std::vector<LevelPeak> out;
    for (const auto& [b, w] : bins) {
        if (!(w.first > weight(b - 1) && w.first >= weight(b + 1))) continue;
        double sw = 0.0, swe = 0.0;
        for (long n = b - 1; n <= b + 1; ++n) {
            const auto it = bins.find(n);
            if (it == bins.end()) continue;
            sw += it->second.first;
            swe += it->second.second;
        }
        out.push_back({b, w.first, swe / sw});
    }
    std::stable_sort(out.begin(), out.end(), [](const LevelPeak& a, const LevelPeak& b) { return a.weight > b.weight; });
    return out;
}

template std::vector<LevelPeak> overlap_frequency_peaks(const Spectrum<double>&, const FockState&,
                                                        const AmplitudeSpectrum&, int);
template std::vector<LevelPeak> overlap_frequency_peaks(const Spectrum<std::complex<double>>&, const FockState&,
                                                        const AmplitudeSpectrum&, int);

// ---------------------------------------------------------------------------
// Tower approximation

Eigen::MatrixXcd spta_hamiltonian(const ModelParams& params, const ResonantFamily& family, int sites) {
    const Tower tower(sites);
    const ResonantAmplitudes a = resonant_amplitudes(params, family);
    const std::vector<FockState> states = tower.ordered_states();
    const auto n = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = resonant_element(states[static_cast<std::size_t>(r)], states[static_cast<std::size_t>(c)], a);
    return m;
}

TimeSeries spta_fidelity(const Eigen::MatrixXcd& spta, double period, long cycles) {
    if (spta.rows() == 0 || spta.rows() != spta.cols()) throw DomainError("tower matrix must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(spta);
    const Eigen::Index p = spta.rows() - 1;
    TimeSeries s;
    s.label = "F_spta";
    s.initial = "tp";
    for (long k = 0; k <= cycles; ++k) {
        std::complex<double> acc = 0.0;
        for (Eigen::Index a = 0; a < spta.rows(); ++a)
            acc += std::norm(eig.eigenvectors()(p, a)) *
                   std::polar(1.0, -eig.eigenvalues()(a) * period * static_cast<double>(k));
        s.values.push_back(std::norm(acc));
    }
    return s;
}

TimeSeries spta_fidelity(const ModelParams& params, const ResonantFamily& family, int sites, long cycles) {
    TimeSeries s = spta_fidelity(spta_hamiltonian(params, family, sites), params.period(), cycles);
    s.params = params;
    return s;
}

// ---------------------------------------------------------------------------
// Sampling and aggregation

std::vector<FockState> random_nontower_states(const SectorBasis& basis, const Tower& tower, std::size_t count,
                                              std::uint64_t seed) {
    std::vector<std::size_t> pool;
    for (std::size_t a = 0; a < basis.size(); ++a)
        if (!tower.contains(basis.state(a))) pool.push_back(a);
    if (count > pool.size())
        throw DomainError("cannot draw " + std::to_string(count) + " distinct states from " +
                          std::to_string(pool.size()) + " non-tower states");
    std::mt19937_64 rng(seed);
    std::vector<FockState> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
        out.push_back(basis.state(pool[i]));
    }
    return out;
}

SeriesBand aggregate(const std::vector<TimeSeries>& runs) {
    SeriesBand band;
    if (runs.empty()) return band;
    const std::size_t n = runs.front().size();
    for (const TimeSeries& r : runs)
        if (r.size() != n) throw DomainError("series lengths differ");
    band.mean.assign(n, 0.0);
    band.sd.assign(n, 0.0);
    const auto count = static_cast<double>(runs.size());
    for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0, sq = 0.0;
        for (const TimeSeries& r : runs) {
            sum += r.values[k];
            sq += r.values[k] * r.values[k];
        }
        band.mean[k] = sum / count;
        band.sd[k] = std::sqrt(std::max(0.0, sq / count - band.mean[k] * band.mean[k]));
    }
    return band;
}

double window_mean(const std::vector<double>& series, long from, long to) {
    if (from < 0 || to < from || to >= static_cast<long>(series.size())) throw DomainError("window outside series");
    double sum = 0.0;
    for (long k = from; k <= to; ++k) sum += series[static_cast<std::size_t>(k)];
    return sum / static_cast<double>(to - from + 1);
}

double window_slope(const std::vector<double>& series, long from, long to) {
    if (from < 0 || to <= from || to >= static_cast<long>(series.size())) throw DomainError("window outside series");
    const double xm = 0.5 * static_cast<double>(from + to);
    const double ym = window_mean(series, from, to);
    double sxy = 0.0, sxx = 0.0;
    for (long k = from; k <= to; ++k) {
        const double dx = static_cast<double>(k) - xm;
        sxy += dx * (series[static_cast<std::size_t>(k)] - ym);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace scarkit

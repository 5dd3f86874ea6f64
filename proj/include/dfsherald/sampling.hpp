#ifndef DFSHERALD_SAMPLING_HPP
#define DFSHERALD_SAMPLING_HPP

// Random draws for sweeps and property tests.

#include <Eigen/Dense>

#include <random>

#include "dfsherald/dfs_code.hpp"

namespace dfs {

using Rng = std::mt19937_64;

inline Complex random_gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

/// Haar-uniform U(2): QR of a complex Ginibre matrix with R's diagonal phases removed.
inline Eigen::Matrix2cd random_haar_unitary(Rng& rng) {
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = random_gaussian_complex(rng);
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline CollectiveUnitary random_collective(Rng& rng) { return CollectiveUnitary(random_haar_unitary(rng)); }

/// Uniform point on the unit sphere of C^3.
inline Coefficients3 random_unit3(Rng& rng) {
  Coefficients3 v;
  for (auto& x : v) x = random_gaussian_complex(rng);
  const double n = std::sqrt(squared_norm(v));
  for (auto& x : v) x /= n;
  return v;
}

/// Unit vector whose first entry is real and positive (decompose's gauge).
inline Coefficients3 random_gauge_row(Rng& rng) {
  Coefficients3 v = random_unit3(rng);
  const Complex p = std::conj(v[0]) / std::abs(v[0]);
  for (auto& x : v) x *= p;
  return v;
}

/// Normalized qubit amplitudes (alpha, beta).
inline std::pair<Complex, Complex> random_qubit(Rng& rng) {
  Complex a = random_gaussian_complex(rng), b = random_gaussian_complex(rng);
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

/// Random superposition of up to `terms` occupation patterns with `photons`
/// photons spread over the registry's modes.
inline FockState random_state(const RegistryPtr& reg, int photons, int terms, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, reg->size() - 1);
  FockState::Terms t;
  for (int i = 0; i < terms; ++i) {
    OccupationKey k;
    for (int p = 0; p < photons; ++p) {
      const auto m = pick(rng);
      k.set(m, k.get(m) + 1);
    }
    t[k] += random_gaussian_complex(rng);
  }
  return FockState(reg, std::move(t)).normalized();
}

struct NoiseSweepStats {
  int samples = 0;
  /// max |nu_out - e^{ia} nu_in| with one global phase per sample (shared gauge row).
  double max_nu_error = 0.0;
  /// max | |nu_out_Q| - |nu_in_Q| | with an independent gauge row per block.
  double max_nu_modulus_error = 0.0;
  /// max | ||omega'_Q|| - 1 | over evolved blocks with nu_Q != 0.
  double max_omega_norm_error = 0.0;
  double max_block_leakage = 0.0;
  /// max entrywise |A_Q - A_1| over Q.
  double max_gauge_mismatch = 0.0;
  double max_residual = 0.0;
};

/// Phase a minimizing |b - e^{ia} a| is arg(<a|b>); returns the remaining distance.
inline double distance_up_to_phase(const Coefficients3& a, const Coefficients3& b) {
  Complex overlap{};
  for (int q = 0; q < 3; ++q) overlap += std::conj(a[q]) * b[q];
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1, 0};
  double err = 0;
  for (int q = 0; q < 3; ++q) err = std::max(err, std::abs(b[q] - phase * a[q]));
  return err;
}

/// Collective-noise sweep; sample i draws from an engine seeded with seed + i.
inline NoiseSweepStats noise_sweep(int samples, std::uint64_t seed, const LogicalBasis& basis) {
  NoiseSweepStats st;
  st.samples = samples;
  for (int i = 0; i < samples; ++i) {
    Rng rng(seed + static_cast<std::uint64_t>(i));
    const CollectiveUnitary u = random_collective(rng);
    const Coefficients3 nu = random_unit3(rng);

    const Coefficients3 shared = random_gauge_row(rng);
    const GaugeRows shared_rows{shared, shared, shared};
    const auto out = decompose(apply_collective(encode(nu, shared_rows, basis), u, basis.rails), basis);
    st.max_nu_error = std::max(st.max_nu_error, distance_up_to_phase(nu, out.nu));
    st.max_residual = std::max(st.max_residual, out.residual);

    const GaugeRows rows{random_gauge_row(rng), random_gauge_row(rng), random_gauge_row(rng)};
    const auto out2 = decompose(apply_collective(encode(nu, rows, basis), u, basis.rails), basis);
    for (int q = 0; q < 3; ++q) {
      st.max_nu_modulus_error = std::max(st.max_nu_modulus_error, std::abs(std::abs(out2.nu[q]) - std::abs(nu[q])));
      st.max_omega_norm_error = std::max(st.max_omega_norm_error, std::abs(std::sqrt(squared_norm(out2.omega[q])) - 1.0));
    }
    st.max_residual = std::max(st.max_residual, out2.residual);

    const Eigen::Matrix3cd a1 = gauge_matrix(u, 1, basis);
    for (int q = 0; q < 3; ++q) {
      st.max_block_leakage = std::max(st.max_block_leakage, block_leakage(u, q, basis));
      if (q != 1) st.max_gauge_mismatch = std::max(st.max_gauge_mismatch, (gauge_matrix(u, q, basis) - a1).cwiseAbs().maxCoeff());
    }
  }
  return st;
}

}  // namespace dfs

#endif  // DFSHERALD_SAMPLING_HPP

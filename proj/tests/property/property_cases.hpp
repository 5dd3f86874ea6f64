#ifndef DFSHERALD_TESTS_PROPERTY_CASES_HPP
#define DFSHERALD_TESTS_PROPERTY_CASES_HPP

// Randomized property cases shared by the unit tests and the acceptance run.
// Case i draws from an engine seeded with seed + i.

#include <algorithm>
#include <string>

#include "dfsherald/circuit.hpp"
#include "dfsherald/detection.hpp"
#include "dfsherald/dfs_code.hpp"
#include "dfsherald/sampling.hpp"

namespace property {

using namespace dfs;

struct CaseResult {
  double unitarity_error = 0.0;
  double norm_error = 0.0;
  bool photon_number_kept = true;
  double enumeration_error = 0.0;
  double conditional_norm_error = 0.0;
  double round_trip_error = 0.0;
  double hermiticity_error = 0.0;
  double linearity_error = 0.0;
};

struct SuiteResult {
  int cases = 0;
  CaseResult worst;
  int photon_number_failures = 0;
};

inline OpticalElement random_two_rail(Rng& rng, const std::string& a, const std::string& b, const std::string& c,
                                      const std::string& d) {
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return make_hv_pbs(a, b, c, d, angle(rng));
    case 1: return make_fs_pbs(a, b, c, d, angle(rng));
    default: return make_bs_5050(a, b, c, d);
  }
}

inline OpticalElement random_one_rail(Rng& rng, const std::string& r) {
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return make_pol_rotation(r, angle(rng));
    case 1: return make_phase(r, angle(rng));
    case 2: return make_sigma_x_plate(r);
    default: return make_pol_unitary(r, random_haar_unitary(rng));
  }
}

/// Six rails: inputs r0, r1; two beam-splitter layers r0,r1 -> r2,r3 -> r4,r5
/// with single-rail elements in between. Detectors sit on r4 and r5.
inline Circuit random_circuit(Rng& rng) {
  std::vector<OpticalElement> el;
  el.push_back(random_one_rail(rng, "r0"));
  el.push_back(random_two_rail(rng, "r0", "r1", "r2", "r3"));
  el.push_back(random_one_rail(rng, "r2"));
  el.push_back(random_one_rail(rng, "r3"));
  el.push_back(random_two_rail(rng, "r2", "r3", "r4", "r5"));
  el.push_back(random_one_rail(rng, "r5"));
  return Circuit({"r0", "r1", "r2", "r3", "r4", "r5"}, std::move(el), {"r4", "r5"});
}

inline double unitarity_error(const OpticalElement& e) {
  const auto& u = e.matrix();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

inline CaseResult run_case(std::uint64_t seed, const LogicalBasis& basis) {
  Rng rng(seed);
  CaseResult r;
  const Circuit c = random_circuit(rng);
  for (const auto& e : c.elements()) r.unitarity_error = std::max(r.unitarity_error, unitarity_error(e));

  const int photons = std::uniform_int_distribution<int>(1, 4)(rng);
  const auto input_reg = make_registry({"r0", "r1"});
  const FockState x = embed(random_state(input_reg, photons, 5, rng), c.registry());
  const FockState y = embed(random_state(input_reg, photons, 5, rng), c.registry());
  const FockState out = run(c, x);
  r.norm_error = std::abs(out.norm() - 1.0);
  r.photon_number_kept = out.photon_number() == photons;

  std::vector<DetectorSpec> det;
  for (const auto& rail : c.detectors())
    det.push_back({rail, std::bernoulli_distribution(0.5)(rng) ? MeasurementBasis::HV : MeasurementBasis::FS});
  const auto outcomes = enumerate_outcomes(out, det);
  r.enumeration_error = std::abs(total_probability(outcomes) - 1.0);
  for (const auto& o : outcomes) r.conditional_norm_error = std::max(r.conditional_norm_error, std::abs(o.conditional.norm() - 1.0));

  const Complex a = random_gaussian_complex(rng), b = random_gaussian_complex(rng);
  const FockState lhs = run(c, x.scaled(a) + y.scaled(b));
  const FockState rhs = out.scaled(a) + run(c, y).scaled(b);
  r.linearity_error = (lhs - rhs).norm();
  r.hermiticity_error = std::abs(inner_product(x, y) - std::conj(inner_product(y, x)));

  const Coefficients3 nu = random_unit3(rng);
  const GaugeRows omega{random_gauge_row(rng), random_gauge_row(rng), random_gauge_row(rng)};
  const auto d = decompose(encode(nu, omega, basis), basis);
  for (int q = 0; q < 3; ++q) {
    r.round_trip_error = std::max(r.round_trip_error, std::abs(d.nu[q] - nu[q]));
    for (int k = 0; k < 3; ++k) r.round_trip_error = std::max(r.round_trip_error, std::abs(d.omega[q][k] - omega[q][k]));
  }
  r.round_trip_error = std::max(r.round_trip_error, d.residual);
  return r;
}

inline SuiteResult run_suite(int cases, std::uint64_t seed) {
  const LogicalBasis basis = logical_basis({"q1", "q2", "q3", "q4"});
  SuiteResult s;
  s.cases = cases;
  for (int i = 0; i < cases; ++i) {
    const CaseResult r = run_case(seed + static_cast<std::uint64_t>(i), basis);
    auto& w = s.worst;
    w.unitarity_error = std::max(w.unitarity_error, r.unitarity_error);
    w.norm_error = std::max(w.norm_error, r.norm_error);
    w.enumeration_error = std::max(w.enumeration_error, r.enumeration_error);
    w.conditional_norm_error = std::max(w.conditional_norm_error, r.conditional_norm_error);
    w.round_trip_error = std::max(w.round_trip_error, r.round_trip_error);
    w.hermiticity_error = std::max(w.hermiticity_error, r.hermiticity_error);
    w.linearity_error = std::max(w.linearity_error, r.linearity_error);
    if (!r.photon_number_kept) ++s.photon_number_failures;
  }
  return s;
}

}  // namespace property

#endif  // DFSHERALD_TESTS_PROPERTY_CASES_HPP

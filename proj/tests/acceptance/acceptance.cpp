// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dfsherald/dfsherald.hpp"
#include "oracle/dense_qubits.hpp"
#include "property/property_cases.hpp"

using namespace dfs;

namespace {

struct Check {
  std::string detail;
  bool ok = true;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void at_most(double value, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.3e > %.0e", what.c_str(), value, tol);
    require(value <= tol, buf);
  }
};

const DetectionOutcome* find_outcome(const std::vector<DetectionOutcome>& os, const DetectionPattern& p) {
  for (const auto& o : os)
    if (o.pattern.to_string() == p.to_string()) return &o;
  return nullptr;
}

Check parity_check() {
  Check c;
  Rng rng(101);
  double worst_p = 0, worst_f = 0, worst_rej = 0;
  for (int i = 0; i < 20; ++i) {
    const auto [a, b] = random_qubit(rng);
    const auto os = parity_check_run(a, b);
    const auto* f = find_outcome(os, parity_check_pattern(true));
    const auto* s = find_outcome(os, parity_check_pattern(false));
    if (!f || !s) {
      c.require(false, "missing single-click outcome");
      return c;
    }
    worst_p = std::max({worst_p, std::abs(f->probability - 0.25), std::abs(s->probability - 0.25)});
    const auto reg = f->conditional.registry_ptr();
    worst_f = std::max({worst_f, 1 - fidelity(f->conditional, qubit_photon(reg, "d", a, b)),
                        1 - fidelity(s->conditional, qubit_photon(reg, "d", -a, b))});
    worst_rej = std::max(worst_rej, std::abs(total_probability(os) - f->probability - s->probability - 0.5));
  }
  c.at_most(worst_p, 1e-10, "max |P - 1/4|");
  c.at_most(worst_f, 1e-10, "max 1 - F");
  c.at_most(worst_rej, 1e-10, "max |rejected - 1/2|");
  return c;
}

Check joint_phase() {
  Check c;
  Rng rng(202);
  double worst_p = 0, worst_f = 0;
  for (int i = 0; i < 20; ++i) {
    const auto q1 = random_qubit(rng), q2 = random_qubit(rng);
    const auto os = joint_phase_run(q1, q2);
    const auto* ff = find_outcome(os, joint_phase_pattern(true));
    const auto* ss = find_outcome(os, joint_phase_pattern(false));
    if (!ff || !ss) {
      c.require(false, "missing (F,F) or (S,S) outcome");
      return c;
    }
    const double rejected = total_probability(os) - ff->probability - ss->probability;
    worst_p = std::max({worst_p, std::abs(ff->probability - 1.0 / 16), std::abs(ss->probability - 1.0 / 16),
                        std::abs(rejected - 7.0 / 8)});
    // chi2 = (sz x sz) chi1 on the output rails o2, o3.
    const FockState chi1 = restrict_to_rails(ff->conditional, {"o2", "o3"});
    const FockState chi2 = restrict_to_rails(ss->conditional, {"o2", "o3"});
    worst_f = std::max(worst_f, 1 - fidelity(chi2, apply_sigma_z(apply_sigma_z(chi1, "o2"), "o3")));
  }
  c.at_most(worst_p, 1e-10, "max probability error");
  c.at_most(worst_f, 1e-10, "max 1 - F(chi2, sz sz chi1)");
  return c;
}

Check hnsg_grid() {
  Check c;
  double worst_p = 0, worst_f = 0;
  for (double th : {0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2})
    for (double ph : {0.0, kPi / 3, kPi, 3 * kPi / 2}) {
      const auto r = hnsg_run(HnsgConfig::qubit(th, ph));
      worst_p = std::max({worst_p, std::abs(r.accept_probability - 1.0 / 32), std::abs(r.mirror_probability - 1.0 / 32)});
      worst_f = std::max({worst_f, 1 - r.target_fidelity, 1 - r.mirror_fidelity});
    }
  c.at_most(worst_p, 1e-10, "max |P - 1/32|");
  c.at_most(worst_f, 1e-10, "max 1 - F");
  return c;
}

Check qutrit_zero() {
  Check c;
  const auto r = hnsg_run(HnsgConfig::zero_state());
  const auto b = logical_basis(r.conditional.registry_ptr(), hnsg_code_rails());
  c.at_most(std::abs(r.accept_probability - 1.0 / 32), 1e-10, "|P - 1/32|");
  c.at_most(1 - fidelity(r.conditional, b.at(0, 2)), 1e-10, "1 - F(|0_L^2>)");
  return c;
}

Check basis_integrity() {
  Check c;
  const CodeRails rails{"q1", "q2", "q3", "q4"};
  const auto b = logical_basis(rails);
  double gram = 0;
  for (int q = 0; q < 3; ++q)
    for (int k = 1; k <= 3; ++k)
      for (int qp = 0; qp < 3; ++qp)
        for (int kp = 1; kp <= 3; ++kp)
          gram = std::max(gram, std::abs(inner_product(b.at(q, k), b.at(qp, kp)) - (q == qp && k == kp ? 1.0 : 0.0)));
  c.at_most(gram, 1e-12, "max |G - I|");

  // Both sides read into dense vectors so the comparison is entrywise.
  const auto dense = [&](const FockState& s) { return oracle::from_fock(s, rails); };
  const auto eq8 = dense(apply_sigma_z(apply_sigma_z(b.at(2, 2), "q2"), "q3"));
  c.at_most((dense(b.at(1, 2)) - eq8).cwiseAbs().maxCoeff(), 1e-12, "max |1_L^2 - (sz)2(sz)3 2_L^2|");

  const auto plus = (b.at(1, 2) + b.at(2, 2)).scaled(std::sqrt(0.5));
  const auto eq19 = dense(apply_sigma_x(apply_sigma_x(plus, "q1"), "q4"));
  c.at_most((dense(b.at(0, 2)) - eq19).cwiseAbs().maxCoeff(), 1e-12, "max |0_L^2 - (sx)1(sx)4 (1_L^2+2_L^2)/sqrt2|");
  return c;
}

Check dfs_protection() {
  Check c;
  const CodeRails rails{"q1", "q2", "q3", "q4"};
  const auto b = logical_basis(rails);
  const auto signs = zero_block_signs(detail::raw_logical_basis(b.registry, rails));
  c.require(signs == (std::array<int, 3>{1, 1, 1}), "zero-block sign calibration is not trivial");

  // Block confinement straight from dense Kronecker products.
  const auto ref = oracle::code_states();
  double dense_leak = 0;
  Rng rng(303);
  for (int i = 0; i < 100; ++i) {
    const oracle::Mat16 big = oracle::kron4(random_haar_unitary(rng));
    for (int q = 0; q < 3; ++q) {
      Eigen::Matrix<Complex, 16, 16> proj = Eigen::Matrix<Complex, 16, 16>::Zero();
      for (const auto& v : ref[q]) proj += v * v.adjoint();
      const Eigen::Matrix<Complex, 16, 16> leak = (Eigen::Matrix<Complex, 16, 16>::Identity() - proj) * big * proj;
      dense_leak = std::max(dense_leak, leak.norm());
    }
  }
  c.at_most(dense_leak, 1e-10, "max ||(I-P_Q) U4 P_Q||");

  const auto st = noise_sweep(100, 404, b);
  c.at_most(st.max_block_leakage, 1e-10, "max block leakage");
  c.at_most(st.max_gauge_mismatch, 1e-10, "max |A_Q - A_1|");
  c.at_most(st.max_nu_error, 1e-9, "max nu error up to global phase");
  c.at_most(st.max_omega_norm_error, 1e-10, "max | ||omega_Q|| - 1 |");
  return c;
}

Check decoder() {
  Check c;
  const Circuit d = decoder_build();
  PatternTable table;
  try {
    table = calibrate_decoder(d);
  } catch (const DecoderCalibrationError& e) {
    c.require(false, e.what());
    return c;
  }
  c.require(table.support == reference_click_table(), "click supports differ from the reference table");
  for (const auto& s : table.singlet) c.require(!table.triplet.count(s), "singlet and triplet supports overlap");

  double worst_sum = 0;
  for (auto which : {PairInput::VV, PairInput::HH, PairInput::PsiPlus, PairInput::PsiMinus})
    worst_sum = std::max(worst_sum, std::abs(total_probability(enumerate_outcomes(
                                                 run(d, reference_pair_state(which, d.registry())), decoder_detectors())) -
                                             1.0));

  const auto b = logical_basis(d.registry(), hnsg_code_rails());
  const DecoderLabel expected[3] = {DecoderLabel::ZERO, DecoderLabel::ONE, DecoderLabel::TWO};
  Rng rng(505);
  double worst_miss = 0;
  for (int i = 0; i < 200; ++i) {
    const int q = i % 3;
    const auto k = std::uniform_int_distribution<int>(1, 3)(rng);
    const FockState s = apply_collective(b.at(q, k), random_collective(rng), hnsg_code_rails());
    const auto results = decoder_classify(s, d, table);
    double total = 0, hit = 0;
    for (const auto& r : results) {
      total += r.probability;
      if (r.verdict.label == expected[q]) hit += r.probability;
    }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    worst_miss = std::max(worst_miss, 1.0 - hit);
  }
  c.at_most(worst_miss, 1e-10, "max 1 - P(correct label)");
  c.at_most(worst_sum, 1e-10, "max |sum p - 1|");
  return c;
}

Check properties() {
  Check c;
  const auto s = property::run_suite(500, 606);
  c.at_most(s.worst.unitarity_error, 1e-12, "unitarity");
  c.at_most(s.worst.norm_error, 1e-10, "norm conservation");
  c.require(s.photon_number_failures == 0, "photon number changed");
  c.at_most(s.worst.enumeration_error, 1e-10, "enumeration completeness");
  c.at_most(s.worst.round_trip_error, 1e-10, "decompose(encode) round trip");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<Check()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "parity check", 1.0, parity_check},
      {2, "joint phase", 0.0, joint_phase},
      {3, "HNSG grid", 5.0, hnsg_grid},
      {4, "qutrit zero", 0.0, qutrit_zero},
      {5, "basis integrity", 0.0, basis_integrity},
      {6, "DFS protection", 0.0, dfs_protection},
      {7, "decoder", 0.0, decoder},
      {8, "property suites", 30.0, properties},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.body();
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.time_limit > 0 && secs >= cr.time_limit) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "runtime %.2f s >= %.0f s", secs, cr.time_limit);
      c.require(false, buf);
    }
    std::printf("[%s] criterion %d: %-16s %7.3f s%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                c.ok ? "" : "  ", c.detail.c_str());
    if (!c.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

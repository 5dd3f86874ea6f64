#ifndef DFSHERALD_PROTOCOLS_HPP
#define DFSHERALD_PROTOCOLS_HPP

// The three optical networks: the PJF parity check used as a probabilistic
// controlled-sigma_z, the heralded noiseless-subsystem generator (HNSG), and
// the two-half logical-state decoder.

#include <algorithm>
#include <array>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dfsherald/circuit.hpp"
#include "dfsherald/detection.hpp"
#include "dfsherald/dfs_code.hpp"

namespace dfs {

inline constexpr double kPi = std::numbers::pi;

inline DetectionPattern make_pattern(std::vector<RailCount> counts) { return DetectionPattern{std::move(counts)}; }

// ---------------------------------------------------------------------------
// Parity check: ancilla |F> on rail a, target on rail b. The HV-PBS sends the
// ancilla's H and the target's V to rail c, read in the F/S basis; rail d is
// the output.

inline Circuit parity_check_build() {
  return Circuit({"a", "b", "c", "d"}, {make_hv_pbs("a", "b", "c", "d")}, {"c"});
}

inline std::vector<DetectorSpec> parity_check_detectors() { return {{"c", MeasurementBasis::FS}}; }

/// One photon at the analysis detector: F (first) or S (second).
inline DetectionPattern parity_check_pattern(bool f_click) {
  return make_pattern({{"c", MeasurementBasis::FS, f_click ? 1 : 0, f_click ? 0 : 1}});
}

inline void require_normalized_qubit(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) throw CircuitError("qubit is not normalized");
}

inline std::vector<DetectionOutcome> parity_check_run(Complex alpha, Complex beta) {
  require_normalized_qubit(alpha, beta);
  const Circuit c = parity_check_build();
  const FockState in = build_input({{SinglePart{SinglePol::F, "a"}, QubitPart{alpha, beta, "b"}}}, c.registry());
  return enumerate_outcomes(run(c, in), parity_check_detectors());
}

// ---------------------------------------------------------------------------
// Joint phase: two parity checks side by side. Ancillas on m2, m5, targets on
// m3, m4; analysis rails a3, a4; outputs o2, o3.

namespace detail {

inline std::vector<OpticalElement> joint_phase_elements() {
  return {make_hv_pbs("m2", "m3", "a3", "o2"), make_hv_pbs("m5", "m4", "a4", "o3")};
}

}  // namespace detail

inline Circuit joint_phase_build() {
  return Circuit({"m2", "m3", "m4", "m5", "a3", "a4", "o2", "o3"}, detail::joint_phase_elements(), {"a3", "a4"});
}

inline std::vector<DetectorSpec> joint_phase_detectors() {
  return {{"a3", MeasurementBasis::FS}, {"a4", MeasurementBasis::FS}};
}

/// One photon on each analysis rail, both F or both S.
inline DetectionPattern joint_phase_pattern(bool both_f) {
  const int f = both_f ? 1 : 0;
  return make_pattern({{"a3", MeasurementBasis::FS, f, 1 - f}, {"a4", MeasurementBasis::FS, f, 1 - f}});
}

inline std::vector<DetectionOutcome> joint_phase_run(std::pair<Complex, Complex> q1, std::pair<Complex, Complex> q2) {
  require_normalized_qubit(q1.first, q1.second);
  require_normalized_qubit(q2.first, q2.second);
  const Circuit c = joint_phase_build();
  const FockState in = build_input({{QubitPart{q1.first, q1.second, "m3"}, QubitPart{q2.first, q2.second, "m4"},
                                     SinglePart{SinglePol::F, "m2"}, SinglePart{SinglePol::F, "m5"}}},
                                   c.registry());
  return enumerate_outcomes(run(c, in), joint_phase_detectors());
}

// ---------------------------------------------------------------------------
// HNSG. Bell pairs psi-(m1, m3) and psi+(m4, m6), |F> ancillas on m2, m5.
// The joint phase stage feeds a3, a4 into the central FS-PBS (outputs e1, e2)
// after V(phi) on a4. U(theta) sits on e2. e1 is split by an HV-PBS into
// d1 (H) / d3 (V); e2 by an FS-PBS into d2 (F) / d4 (S). m1 and m6 carry
// straight through to o1 and o4.

struct HnsgConfig {
  double theta = 0.0;
  double phi = 0.0;
  bool qutrit_zero = false;

  static HnsgConfig qubit(double theta, double phi) { return {theta, phi, false}; }
  static HnsgConfig zero_state() { return {kPi / 4, 0.0, true}; }
};

inline const std::vector<std::string>& hnsg_output_rails() {
  static const std::vector<std::string> rails{"o1", "o2", "o3", "o4"};
  return rails;
}

inline CodeRails hnsg_code_rails() { return {"o1", "o2", "o3", "o4"}; }

inline Circuit hnsg_build(HnsgConfig cfg) {
  if (cfg.qutrit_zero) cfg = HnsgConfig::zero_state();
  std::vector<std::string> rails{"m1", "m2", "m3", "m4", "m5", "m6", "a3", "a4", "e1", "e2", "n1", "n2",
                                 "d1", "d2", "d3", "d4", "o1", "o2", "o3", "o4"};
  std::vector<OpticalElement> el;
  if (cfg.qutrit_zero) {
    el.push_back(make_sigma_x_plate("m1"));
    el.push_back(make_sigma_x_plate("m6"));
  }
  el.push_back(make_propagate("m1", "o1"));
  el.push_back(make_propagate("m6", "o4"));
  for (auto& e : detail::joint_phase_elements()) el.push_back(std::move(e));
  el.push_back(make_phase("a4", cfg.phi));
  el.push_back(make_fs_pbs("a3", "a4", "e1", "e2"));
  el.push_back(make_pol_rotation("e2", cfg.theta));
  // n1, n2 are the empty second input ports of the analysis splitters.
  el.push_back(make_hv_pbs("e1", "n1", "d1", "d3"));
  el.push_back(make_fs_pbs("e2", "n2", "d2", "d4"));
  return Circuit(std::move(rails), std::move(el), {"d1", "d2", "d3", "d4"});
}

inline std::vector<DetectorSpec> hnsg_detectors() {
  return {{"d1", MeasurementBasis::HV}, {"d2", MeasurementBasis::FS}, {"d3", MeasurementBasis::HV},
          {"d4", MeasurementBasis::FS}};
}

/// |F_d2>|H_d1>|vac_d3>|vac_d4>.
inline DetectionPattern hnsg_accept_pattern() {
  return make_pattern({{"d1", MeasurementBasis::HV, 1, 0},
                       {"d2", MeasurementBasis::FS, 1, 0},
                       {"d3", MeasurementBasis::HV, 0, 0},
                       {"d4", MeasurementBasis::FS, 0, 0}});
}

/// |F_d2>|V_d3>, heralding the sign-flipped superposition.
inline DetectionPattern hnsg_mirror_pattern() {
  return make_pattern({{"d1", MeasurementBasis::HV, 0, 0},
                       {"d2", MeasurementBasis::FS, 1, 0},
                       {"d3", MeasurementBasis::HV, 0, 1},
                       {"d4", MeasurementBasis::FS, 0, 0}});
}

inline FockState hnsg_input(const Circuit& c) {
  return build_input({{BellPart{BellKind::PsiMinus, "m1", "m3"}, BellPart{BellKind::PsiPlus, "m4", "m6"},
                       SinglePart{SinglePol::F, "m2"}, SinglePart{SinglePol::F, "m5"}}},
                     c.registry());
}

/// cos(theta)|2_L^2> + sign e^{i phi} sin(theta)|1_L^2>, or |0_L^2> for the qutrit-zero setting.
inline FockState hnsg_target(const HnsgConfig& cfg, const LogicalBasis& basis, double sign = 1.0) {
  if (cfg.qutrit_zero) return basis.at(0, 2);
  return basis.at(2, 2).scaled(std::cos(cfg.theta)) +
         basis.at(1, 2).scaled(sign * std::polar(1.0, cfg.phi) * std::sin(cfg.theta));
}

struct HeraldReport {
  HnsgConfig config;
  double accept_probability = 0.0;
  /// Heralded state on o1..o4.
  FockState conditional;
  double target_fidelity = 0.0;
  double mirror_probability = 0.0;
  double mirror_fidelity = 0.0;
  std::vector<DetectionOutcome> all_outcomes;
};

inline HeraldReport hnsg_run(const HnsgConfig& requested) {
  const HnsgConfig cfg = requested.qutrit_zero ? HnsgConfig::zero_state() : requested;
  const Circuit c = hnsg_build(cfg);
  const FockState out = run(c, hnsg_input(c));
  const auto outcomes = enumerate_outcomes(out, hnsg_detectors());
  const DetectionOutcome accepted = herald(out, hnsg_accept_pattern());
  const DetectionOutcome mirrored = herald(out, hnsg_mirror_pattern());

  const LogicalBasis basis = logical_basis(c.registry(), hnsg_code_rails());
  const FockState conditional = restrict_to_rails(accepted.conditional, hnsg_output_rails());
  return HeraldReport{
      cfg,
      accepted.probability,
      conditional,
      fidelity(hnsg_target(cfg, basis), accepted.conditional),
      mirrored.probability,
      cfg.qutrit_zero ? 0.0 : fidelity(hnsg_target(cfg, basis, -1.0), mirrored.conditional),
      outcomes,
  };
}

// ---------------------------------------------------------------------------
// Decoder. Each half: HV-PBS (inputs x, y -> p, q), 50/50 BS (p, q -> r, s),
// then an HV-PBS on each arm: r -> D1 (V) / D2 (H), s -> D3 (H) / D4 (V).

namespace detail {

inline void decoder_half(const std::string& x, const std::string& y, const std::string& prefix,
                         std::vector<std::string>& rails, std::vector<OpticalElement>& el,
                         std::vector<std::string>& detectors) {
  const std::string p = prefix + "p", q = prefix + "q", r = prefix + "r", s = prefix + "s";
  const std::string nr = prefix + "nr", ns = prefix + "ns";
  const std::string d1 = prefix + "1", d2 = prefix + "2", d3 = prefix + "3", d4 = prefix + "4";
  for (const auto& n : {p, q, r, s, nr, ns, d1, d2, d3, d4}) rails.push_back(n);
  el.push_back(make_hv_pbs(x, y, p, q));
  el.push_back(make_bs_5050(p, q, r, s));
  el.push_back(make_hv_pbs(r, nr, d2, d1));
  el.push_back(make_hv_pbs(s, ns, d3, d4));
  for (const auto& d : {d1, d2, d3, d4}) detectors.push_back(d);
}

}  // namespace detail

inline Circuit decoder_build() {
  std::vector<std::string> rails{"o1", "o2", "o3", "o4"};
  std::vector<OpticalElement> el;
  std::vector<std::string> det;
  detail::decoder_half("o1", "o2", "t", rails, el, det);
  detail::decoder_half("o3", "o4", "b", rails, el, det);
  return Circuit(std::move(rails), std::move(el), std::move(det));
}

inline std::vector<DetectorSpec> decoder_detectors() {
  std::vector<DetectorSpec> d;
  for (const char* prefix : {"t", "b"})
    for (int i = 1; i <= 4; ++i) d.push_back({prefix + std::to_string(i), MeasurementBasis::HV});
  return d;
}

/// Sorted detector numbers (1..4) that clicked on one half, one entry per photon.
using ClickList = std::vector<int>;

inline ClickList half_clicks(const DetectionPattern& p, const std::string& prefix) {
  ClickList out;
  for (int i = 1; i <= 4; ++i) {
    const auto& c = p.at(prefix + std::to_string(i));
    for (int n = 0; n < c.total(); ++n) out.push_back(i);
  }
  return out;
}

inline std::string click_string(const ClickList& c, const std::string& prefix) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + prefix + std::to_string(c[i]);
  return s + ")";
}

enum class PairInput { VV, HH, PsiPlus, PsiMinus };

inline const char* to_string(PairInput p) {
  switch (p) {
    case PairInput::VV: return "VV";
    case PairInput::HH: return "HH";
    case PairInput::PsiPlus: return "psi+";
    case PairInput::PsiMinus: return "psi-";
  }
  return "?";
}

/// Click supports of the four reference pair states on one decoder half,
/// together with the derived singlet/triplet split.
struct PatternTable {
  std::map<PairInput, std::set<ClickList>> support;
  std::set<ClickList> singlet;
  std::set<ClickList> triplet;
  /// Detector relabeling (computed index -> printed index) that maps the
  /// computed supports onto the reference table; identity when conventions agree.
  std::array<int, 4> relabel{1, 2, 3, 4};
};

/// Expected click supports on the top half, per reference input.
inline std::map<PairInput, std::set<ClickList>> reference_click_table() {
  return {{PairInput::PsiMinus, {{1, 2}, {3, 4}}},
          {PairInput::VV, {{1, 1}, {4, 4}}},
          {PairInput::HH, {{2, 2}, {3, 3}}},
          {PairInput::PsiPlus, {{1, 3}, {2, 4}}}};
}

class DecoderCalibrationError : public FockError {
 public:
  using FockError::FockError;
};

inline FockState reference_pair_state(PairInput which, const RegistryPtr& reg) {
  switch (which) {
    case PairInput::VV: return add_photon(add_photon(vacuum(reg), "o1", Pol::V), "o2", Pol::V);
    case PairInput::HH: return add_photon(add_photon(vacuum(reg), "o1", Pol::H), "o2", Pol::H);
    case PairInput::PsiPlus: return bell_pair(reg, BellKind::PsiPlus, "o1", "o2");
    case PairInput::PsiMinus: return bell_pair(reg, BellKind::PsiMinus, "o1", "o2");
  }
  throw DecoderCalibrationError("unknown reference input");
}

/// Runs the reference inputs through the top half and checks the partition:
/// singlet clicks are cross-detector coincidences disjoint from every triplet
/// click, VV and HH give same-detector doubles.
inline PatternTable calibrate_decoder(const Circuit& decoder) {
  PatternTable t;
  for (auto which : {PairInput::VV, PairInput::HH, PairInput::PsiPlus, PairInput::PsiMinus}) {
    const FockState in = reference_pair_state(which, decoder.registry());
    for (const auto& o : enumerate_outcomes(run(decoder, in), decoder_detectors()))
      t.support[which].insert(half_clicks(o.pattern, "t"));
  }
  t.singlet = t.support[PairInput::PsiMinus];
  for (auto which : {PairInput::VV, PairInput::HH, PairInput::PsiPlus})
    t.triplet.insert(t.support[which].begin(), t.support[which].end());

  for (const auto& c : t.singlet) {
    if (c.size() != 2 || c[0] == c[1]) throw DecoderCalibrationError("singlet click is not a cross-pair coincidence");
    if (t.triplet.count(c)) throw DecoderCalibrationError("singlet and triplet clicks overlap");
  }
  for (auto which : {PairInput::VV, PairInput::HH})
    for (const auto& c : t.support[which])
      if (c.size() != 2 || c[0] != c[1]) throw DecoderCalibrationError("VV/HH click is not a same-detector double");

  const auto ref = reference_click_table();
  std::array<int, 4> perm{1, 2, 3, 4};
  do {
    bool ok = true;
    for (const auto& [which, clicks] : t.support) {
      std::set<ClickList> mapped;
      for (auto c : clicks) {
        for (auto& x : c) x = perm[x - 1];
        std::sort(c.begin(), c.end());
        mapped.insert(c);
      }
      ok = ok && mapped == ref.at(which);
    }
    if (ok) {
      t.relabel = perm;
      return t;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  throw DecoderCalibrationError("computed click table is not a relabeling of the reference table");
}

enum class DecoderLabel { ZERO, ONE, TWO, REJECT };

inline const char* to_string(DecoderLabel l) {
  switch (l) {
    case DecoderLabel::ZERO: return "ZERO";
    case DecoderLabel::ONE: return "ONE";
    case DecoderLabel::TWO: return "TWO";
    case DecoderLabel::REJECT: return "REJECT";
  }
  return "?";
}

struct DecoderVerdict {
  DecoderLabel label = DecoderLabel::REJECT;
  ClickList top;
  ClickList bottom;
};

inline DecoderLabel classify_clicks(const PatternTable& t, const ClickList& top, const ClickList& bottom) {
  const bool top_s = t.singlet.count(top), top_t = t.triplet.count(top);
  const bool bot_s = t.singlet.count(bottom), bot_t = t.triplet.count(bottom);
  if (top_t && bot_s) return DecoderLabel::ONE;
  if (top_s && bot_t) return DecoderLabel::TWO;
  if (top_t && bot_t) return DecoderLabel::ZERO;
  return DecoderLabel::REJECT;
}

struct DecoderResult {
  DecoderVerdict verdict;
  double probability = 0.0;
};

/// Classifies every decoder outcome for a four-photon state on o1..o4.
inline std::vector<DecoderResult> decoder_classify(const FockState& state, const Circuit& decoder,
                                                   const PatternTable& table) {
  require_one_photon_per_rail(state, hnsg_code_rails());
  const FockState out = run(decoder, restrict_to_rails(state, hnsg_output_rails()));
  std::vector<DecoderResult> results;
  for (const auto& o : enumerate_outcomes(out, decoder_detectors())) {
    DecoderVerdict v{DecoderLabel::REJECT, half_clicks(o.pattern, "t"), half_clicks(o.pattern, "b")};
    v.label = classify_clicks(table, v.top, v.bottom);
    results.push_back({v, o.probability});
  }
  return results;
}

inline std::vector<DecoderResult> decoder_classify(const FockState& state) {
  const Circuit d = decoder_build();
  return decoder_classify(state, d, calibrate_decoder(d));
}

inline std::map<DecoderLabel, double> verdict_totals(const std::vector<DecoderResult>& results) {
  std::map<DecoderLabel, double> m;
  for (const auto& r : results) m[r.verdict.label] += r.probability;
  return m;
}

}  // namespace dfs

#endif  // DFSHERALD_PROTOCOLS_HPP

#ifndef DFSHERALD_DETECTION_HPP
#define DFSHERALD_DETECTION_HPP

// Photon-number-resolving detection: exhaustive outcome enumeration and heralding.

#include <map>
#include <string>
#include <vector>

#include "dfsherald/elements.hpp"
#include "dfsherald/fock.hpp"

namespace dfs {

enum class MeasurementBasis { HV, FS };

inline const char* to_string(MeasurementBasis b) { return b == MeasurementBasis::HV ? "HV" : "FS"; }

struct DetectorSpec {
  std::string rail;
  MeasurementBasis basis = MeasurementBasis::HV;
};

/// Photon counts on one detector rail; `first` counts H (or F), `second` V (or S).
struct RailCount {
  std::string rail;
  MeasurementBasis basis = MeasurementBasis::HV;
  int first = 0;
  int second = 0;

  int total() const { return first + second; }
  bool operator==(const RailCount&) const = default;
  auto operator<=>(const RailCount&) const = default;
};

struct DetectionPattern {
  std::vector<RailCount> counts;

  int total() const {
    int n = 0;
    for (const auto& c : counts) n += c.total();
    return n;
  }

  const RailCount& at(const std::string& rail) const {
    for (const auto& c : counts)
      if (c.rail == rail) return c;
    throw UnknownMode("pattern has no detector rail '" + rail + "'");
  }

  std::string to_string() const {
    std::string out;
    for (const auto& c : counts) {
      if (!out.empty()) out += " ";
      const bool hv = c.basis == MeasurementBasis::HV;
      out += c.rail + ":" + std::to_string(c.first) + (hv ? "H" : "F") + std::to_string(c.second) + (hv ? "V" : "S");
    }
    return out;
  }

  bool operator==(const DetectionPattern&) const = default;
  auto operator<=>(const DetectionPattern&) const = default;
};

struct DetectionOutcome {
  DetectionPattern pattern;
  double probability = 0.0;
  /// Normalized post-measurement state; detector rails are left empty.
  FockState conditional;
};

class ZeroProbabilityHerald : public FockError {
 public:
  using FockError::FockError;
};

/// Rotates FS-basis detector rails so their H/V slots hold F/S amplitudes.
inline FockState to_measurement_basis(const FockState& state, const std::vector<DetectorSpec>& detectors) {
  FockState s = state;
  for (const auto& d : detectors) {
    if (d.basis != MeasurementBasis::FS) continue;
    s = apply_element(s, make_pol_unitary(d.rail, fs_to_hv().adjoint()));
  }
  return s;
}

namespace detail {

struct DetectorModes {
  std::vector<std::size_t> first, second;
};

inline DetectorModes detector_modes(const ModeRegistry& reg, const std::vector<DetectorSpec>& detectors) {
  DetectorModes m;
  for (const auto& d : detectors) {
    m.first.push_back(reg.index(d.rail, Pol::H));
    m.second.push_back(reg.index(d.rail, Pol::V));
  }
  return m;
}

}  // namespace detail

/// All detection patterns with non-zero probability, in pattern order.
/// Probabilities sum to the squared norm of `state`.
inline std::vector<DetectionOutcome> enumerate_outcomes(const FockState& state,
                                                        const std::vector<DetectorSpec>& detectors) {
  const FockState rotated = to_measurement_basis(state, detectors);
  const auto modes = detail::detector_modes(rotated.registry(), detectors);

  std::map<DetectionPattern, FockState::Terms> groups;
  for (const auto& [key, amp] : rotated.terms()) {
    DetectionPattern p;
    OccupationKey rest = key;
    for (std::size_t i = 0; i < detectors.size(); ++i) {
      p.counts.push_back({detectors[i].rail, detectors[i].basis, key.get(modes.first[i]), key.get(modes.second[i])});
      rest.set(modes.first[i], 0);
      rest.set(modes.second[i], 0);
    }
    groups[p][rest] += amp;
  }

  std::vector<DetectionOutcome> out;
  out.reserve(groups.size());
  for (auto& [pattern, terms] : groups) {
    FockState projected(rotated.registry_ptr(), std::move(terms), rotated.photon_cap());
    const double p = projected.norm_squared();
    if (p == 0.0) continue;
    out.push_back({pattern, p, projected.scaled(1.0 / std::sqrt(p))});
  }
  return out;
}

/// Projects onto one pattern. Throws ZeroProbabilityHerald if it cannot occur.
inline DetectionOutcome herald(const FockState& state, const DetectionPattern& pattern) {
  std::vector<DetectorSpec> detectors;
  for (const auto& c : pattern.counts) {
    if (c.first < 0 || c.second < 0) throw FockError("negative photon count in pattern");
    detectors.push_back({c.rail, c.basis});
  }
  const FockState rotated = to_measurement_basis(state, detectors);
  const auto modes = detail::detector_modes(rotated.registry(), detectors);

  FockState::Terms terms;
  for (const auto& [key, amp] : rotated.terms()) {
    bool match = true;
    OccupationKey rest = key;
    for (std::size_t i = 0; i < detectors.size() && match; ++i) {
      match = key.get(modes.first[i]) == pattern.counts[i].first && key.get(modes.second[i]) == pattern.counts[i].second;
      rest.set(modes.first[i], 0);
      rest.set(modes.second[i], 0);
    }
    if (match) terms[rest] += amp;
  }
  FockState projected(rotated.registry_ptr(), std::move(terms), rotated.photon_cap());
  const double p = projected.norm_squared();
  if (p < kPruneThreshold * kPruneThreshold)
    throw ZeroProbabilityHerald("pattern {" + pattern.to_string() + "} has zero probability");
  return {pattern, p, projected.scaled(1.0 / std::sqrt(p))};
}

/// Probability of `pattern` within an enumerated list (0 if absent).
inline double probability_of(const std::vector<DetectionOutcome>& outcomes, const DetectionPattern& pattern) {
  for (const auto& o : outcomes)
    if (o.pattern == pattern) return o.probability;
  return 0.0;
}

inline double total_probability(const std::vector<DetectionOutcome>& outcomes) {
  double s = 0;
  for (const auto& o : outcomes) s += o.probability;
  return s;
}

}  // namespace dfs

#endif  // DFSHERALD_DETECTION_HPP

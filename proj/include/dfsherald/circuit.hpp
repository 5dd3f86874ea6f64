#ifndef DFSHERALD_CIRCUIT_HPP
#define DFSHERALD_CIRCUIT_HPP

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dfsherald/elements.hpp"
#include "dfsherald/fock.hpp"

namespace dfs {

class CircuitError : public FockError {
 public:
  using FockError::FockError;
};

/// Declarative feed-forward optical network: rails, an ordered element list,
/// and the rails read by photon-number-resolving detectors.
class Circuit {
 public:
  Circuit(std::vector<std::string> rails, std::vector<OpticalElement> elements, std::vector<std::string> detectors)
      : rails_(std::move(rails)),
        elements_(std::move(elements)),
        detectors_(std::move(detectors)),
        registry_(make_registry(rails_)) {
    validate();
  }

  const std::vector<std::string>& rails() const { return rails_; }
  const std::vector<OpticalElement>& elements() const { return elements_; }
  const std::vector<std::string>& detectors() const { return detectors_; }
  const RegistryPtr& registry() const { return registry_; }

 private:
  void validate() const {
    for (const auto& e : elements_) {
      for (const auto& m : e.in_modes())
        if (!registry_->has_rail(m.rail)) throw CircuitError("element rail '" + m.rail + "' not registered");
      for (const auto& m : e.out_modes())
        if (!registry_->has_rail(m.rail)) throw CircuitError("element rail '" + m.rail + "' not registered");
    }
    std::set<std::string> seen;
    for (const auto& d : detectors_) {
      if (!registry_->has_rail(d)) throw CircuitError("detector rail '" + d + "' not registered");
      if (!seen.insert(d).second) throw CircuitError("detector rail '" + d + "' listed twice");
    }
    // Photons that reach a detector rail never get routed elsewhere.
    for (const auto& e : elements_) {
      const auto outs = e.output_rails();
      for (const auto& r : e.input_rails())
        if (seen.count(r) && std::find(outs.begin(), outs.end(), r) == outs.end())
          throw CircuitError("detector rail '" + r + "' feeds element " + to_string(e.kind()));
    }
  }

  std::vector<std::string> rails_;
  std::vector<OpticalElement> elements_;
  std::vector<std::string> detectors_;
  RegistryPtr registry_;
};

enum class BellKind { PsiMinus, PsiPlus, PhiMinus, PhiPlus };
enum class SinglePol { H, V, F, S };

/// Bell pair on (first, second): psi+- = (|VH> +- |HV>)/sqrt2, phi+- = (|HH> +- |VV>)/sqrt2.
struct BellPart {
  BellKind kind;
  std::string first;
  std::string second;
};

struct SinglePart {
  SinglePol pol;
  std::string rail;
};

/// alpha|H> + beta|V> on one rail.
struct QubitPart {
  Complex alpha;
  Complex beta;
  std::string rail;
};

using InputPart = std::variant<BellPart, SinglePart, QubitPart>;

struct InputSpec {
  std::vector<InputPart> parts;
};

inline FockState qubit_photon(RegistryPtr reg, const std::string& rail, Complex alpha, Complex beta) {
  const auto v = vacuum(reg);
  FockState::Terms terms;
  if (alpha != Complex{}) terms.emplace(add_photon(v, rail, Pol::H).terms().begin()->first, alpha);
  if (beta != Complex{}) terms.emplace(add_photon(v, rail, Pol::V).terms().begin()->first, beta);
  return FockState(reg, std::move(terms));
}

inline FockState single_photon(RegistryPtr reg, const std::string& rail, SinglePol pol) {
  const double s = std::numbers::sqrt2 / 2;
  switch (pol) {
    case SinglePol::H: return qubit_photon(std::move(reg), rail, 1.0, 0.0);
    case SinglePol::V: return qubit_photon(std::move(reg), rail, 0.0, 1.0);
    case SinglePol::F: return qubit_photon(std::move(reg), rail, s, s);
    case SinglePol::S: return qubit_photon(std::move(reg), rail, -s, s);
  }
  throw CircuitError("unknown polarization");
}

inline FockState bell_pair(RegistryPtr reg, BellKind kind, const std::string& first, const std::string& second) {
  if (first == second) throw OverlappingRails("Bell pair needs two distinct rails");
  const auto v = vacuum(reg);
  auto pair = [&](Pol p1, Pol p2) { return add_photon(add_photon(v, first, p1), second, p2); };
  const double s = std::numbers::sqrt2 / 2;
  switch (kind) {
    case BellKind::PsiMinus: return (pair(Pol::V, Pol::H) - pair(Pol::H, Pol::V)).scaled(s);
    case BellKind::PsiPlus: return (pair(Pol::V, Pol::H) + pair(Pol::H, Pol::V)).scaled(s);
    case BellKind::PhiMinus: return (pair(Pol::H, Pol::H) - pair(Pol::V, Pol::V)).scaled(s);
    case BellKind::PhiPlus: return (pair(Pol::H, Pol::H) + pair(Pol::V, Pol::V)).scaled(s);
  }
  throw CircuitError("unknown Bell state");
}

/// Normalized product state described by `spec`.
inline FockState build_input(const InputSpec& spec, RegistryPtr reg) {
  std::set<std::string> used;
  auto claim = [&](const std::string& rail) {
    if (!reg->has_rail(rail)) throw UnknownMode("input rail '" + rail + "' not registered");
    if (!used.insert(rail).second) throw OverlappingRails("input parts collide on rail '" + rail + "'");
  };
  FockState state = vacuum(reg);
  for (const auto& part : spec.parts) {
    FockState piece = std::visit(
        [&](const auto& p) -> FockState {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, BellPart>) {
            claim(p.first);
            claim(p.second);
            return bell_pair(reg, p.kind, p.first, p.second);
          } else if constexpr (std::is_same_v<T, SinglePart>) {
            claim(p.rail);
            return single_photon(reg, p.rail, p.pol);
          } else {
            claim(p.rail);
            if (std::abs(std::norm(p.alpha) + std::norm(p.beta) - 1.0) > 1e-10)
              throw CircuitError("qubit input on rail '" + p.rail + "' is not normalized");
            return qubit_photon(reg, p.rail, p.alpha, p.beta);
          }
        },
        part);
    state = tensor(state, piece);
  }
  return state;
}

struct RunOptions {
  double prune_threshold = kPruneThreshold;
};

/// Applies every element in order.
inline FockState run(const Circuit& c, const FockState& input, const RunOptions& opts = {}) {
  FockState s = input.registry_ptr() == c.registry() ? input : embed(input, c.registry());
  for (const auto& e : c.elements()) s = apply_element(s, e, opts.prune_threshold);
  return s;
}

}  // namespace dfs

#endif  // DFSHERALD_CIRCUIT_HPP

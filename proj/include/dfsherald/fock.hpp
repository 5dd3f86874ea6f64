#ifndef DFSHERALD_FOCK_HPP
#define DFSHERALD_FOCK_HPP

// Sparse multi-photon Fock states over polarization-resolved spatial rails.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dfs {

using Complex = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-12;
inline constexpr int kDefaultPhotonCap = 8;
inline constexpr std::size_t kMaxModes = 64;
inline constexpr int kMaxCount = 15;

class FockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhotonCapExceeded : public FockError {
 public:
  using FockError::FockError;
};

class RegistryMismatch : public FockError {
 public:
  using FockError::FockError;
};

class UnknownMode : public FockError {
 public:
  using FockError::FockError;
};

class OverlappingRails : public FockError {
 public:
  using FockError::FockError;
};

enum class Pol : std::uint8_t { H = 0, V = 1 };

inline const char* to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

inline Pol pol_from_string(const std::string& s) {
  if (s == "H") return Pol::H;
  if (s == "V") return Pol::V;
  throw FockError("unknown polarization '" + s + "'");
}

struct ModeIndex {
  std::string rail;
  Pol pol = Pol::H;

  bool operator==(const ModeIndex&) const = default;
};

/// Ordered table of (rail, polarization) modes. Indices are dense and never
/// change once assigned; modes can only be appended.
class ModeRegistry {
 public:
  ModeRegistry() = default;

  /// Registers both polarizations of every rail, H before V.
  explicit ModeRegistry(const std::vector<std::string>& rails) {
    for (const auto& r : rails) add_rail(r);
  }

  void add_rail(const std::string& rail) {
    if (has_rail(rail)) throw FockError("rail '" + rail + "' registered twice");
    add_mode({rail, Pol::H});
    add_mode({rail, Pol::V});
  }

  std::size_t add_mode(const ModeIndex& m) {
    if (find(m.rail, m.pol)) throw FockError("mode " + m.rail + to_string(m.pol) + " registered twice");
    if (modes_.size() >= kMaxModes) throw FockError("mode registry is limited to 64 modes");
    modes_.push_back(m);
    lookup_[key(m.rail, m.pol)] = modes_.size() - 1;
    return modes_.size() - 1;
  }

  std::size_t size() const { return modes_.size(); }
  const ModeIndex& mode(std::size_t i) const { return modes_.at(i); }
  const std::vector<ModeIndex>& modes() const { return modes_; }

  std::optional<std::size_t> find(const std::string& rail, Pol pol) const {
    auto it = lookup_.find(key(rail, pol));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index(const std::string& rail, Pol pol) const {
    auto i = find(rail, pol);
    if (!i) throw UnknownMode("mode " + rail + to_string(pol) + " is not registered");
    return *i;
  }

  bool has_rail(const std::string& rail) const {
    return find(rail, Pol::H).has_value() || find(rail, Pol::V).has_value();
  }

  /// Distinct rails in order of first appearance.
  std::vector<std::string> rails() const {
    std::vector<std::string> out;
    for (const auto& m : modes_)
      if (std::find(out.begin(), out.end(), m.rail) == out.end()) out.push_back(m.rail);
    return out;
  }

  bool operator==(const ModeRegistry& o) const { return modes_ == o.modes_; }

 private:
  static std::string key(const std::string& rail, Pol pol) {
    return rail + (pol == Pol::H ? "\x01H" : "\x01V");
  }

  std::vector<ModeIndex> modes_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

inline RegistryPtr make_registry(const std::vector<std::string>& rails) {
  return std::make_shared<const ModeRegistry>(rails);
}

/// Occupation numbers packed four bits per mode.
class OccupationKey {
 public:
  int get(std::size_t mode) const {
    return static_cast<int>((words_[mode / 16] >> (4 * (mode % 16))) & 0xFu);
  }

  void set(std::size_t mode, int count) {
    if (count < 0 || count > kMaxCount) throw PhotonCapExceeded("occupation out of range");
    const auto shift = 4 * (mode % 16);
    auto& w = words_[mode / 16];
    w = (w & ~(std::uint64_t{0xF} << shift)) | (static_cast<std::uint64_t>(count) << shift);
  }

  int total() const {
    int n = 0;
    for (auto w : words_)
      for (; w; w >>= 4) n += static_cast<int>(w & 0xFu);
    return n;
  }

  std::vector<int> to_vector(std::size_t n_modes) const {
    std::vector<int> out(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) out[i] = get(i);
    return out;
  }

  static OccupationKey from_vector(const std::vector<int>& counts) {
    if (counts.size() > kMaxModes) throw FockError("occupation vector longer than 64 modes");
    OccupationKey k;
    for (std::size_t i = 0; i < counts.size(); ++i) k.set(i, counts[i]);
    return k;
  }

  auto operator<=>(const OccupationKey&) const = default;
  bool operator==(const OccupationKey&) const = default;

 private:
  std::array<std::uint64_t, kMaxModes / 16> words_{};
};

/// Immutable sparse superposition of occupation-number basis states.
class FockState {
 public:
  using Terms = std::map<OccupationKey, Complex>;

  explicit FockState(RegistryPtr registry, Terms terms = {}, int photon_cap = kDefaultPhotonCap)
      : registry_(std::move(registry)), terms_(std::move(terms)), photon_cap_(photon_cap) {
    if (!registry_) throw FockError("null mode registry");
    for (const auto& [k, a] : terms_)
      if (k.total() > photon_cap_) throw PhotonCapExceeded("term exceeds photon cap");
  }

  const ModeRegistry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  const Terms& terms() const { return terms_; }
  int photon_cap() const { return photon_cap_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Complex amplitude(const OccupationKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Complex{} : it->second;
  }

  double norm_squared() const {
    double s = 0;
    for (const auto& [k, a] : terms_) s += std::norm(a);
    return s;
  }

  double norm() const { return std::sqrt(norm_squared()); }

  bool is_normalized(double tol = 1e-10) const { return std::abs(norm_squared() - 1.0) < tol; }

  /// Common total photon number of all terms, if there is one.
  std::optional<int> photon_number() const {
    std::optional<int> n;
    for (const auto& [k, a] : terms_) {
      const int t = k.total();
      if (n && *n != t) return std::nullopt;
      n = t;
    }
    return n;
  }

  FockState scaled(Complex factor) const {
    Terms t = terms_;
    for (auto& [k, a] : t) a *= factor;
    return FockState(registry_, std::move(t), photon_cap_);
  }

  FockState normalized() const {
    const double n = norm();
    if (n == 0.0) throw FockError("cannot normalize the zero vector");
    return scaled(1.0 / n);
  }

  friend FockState operator*(Complex c, const FockState& s) { return s.scaled(c); }
  friend FockState operator*(const FockState& s, Complex c) { return s.scaled(c); }

  friend FockState operator+(const FockState& a, const FockState& b) {
    a.require_same_registry(b);
    Terms t = a.terms_;
    for (const auto& [k, amp] : b.terms_) t[k] += amp;
    return FockState(a.registry_, std::move(t), std::max(a.photon_cap_, b.photon_cap_));
  }

  friend FockState operator-(const FockState& a, const FockState& b) { return a + b.scaled(-1.0); }

  void require_same_registry(const FockState& other) const {
    if (registry_ != other.registry_ && !(*registry_ == *other.registry_))
      throw RegistryMismatch("states live on different mode registries");
  }

  std::string debug_string() const {
    std::string out;
    for (const auto& [k, a] : terms_) {
      out += "(" + std::to_string(a.real()) + "," + std::to_string(a.imag()) + ")|";
      bool first = true;
      for (std::size_t i = 0; i < registry_->size(); ++i) {
        const int n = k.get(i);
        if (!n) continue;
        if (!first) out += " ";
        first = false;
        const auto& m = registry_->mode(i);
        out += m.rail + to_string(m.pol);
        if (n > 1) out += "^" + std::to_string(n);
      }
      out += "> ";
    }
    return out;
  }

 private:
  RegistryPtr registry_;
  Terms terms_;
  int photon_cap_;
};

inline FockState vacuum(RegistryPtr registry, int photon_cap = kDefaultPhotonCap) {
  if (!registry || registry->size() == 0) throw FockError("vacuum needs a non-empty registry");
  FockState::Terms t;
  t[OccupationKey{}] = Complex{1.0, 0.0};
  return FockState(std::move(registry), std::move(t), photon_cap);
}

/// Applies the creation operator of `mode` (bosonic sqrt(n+1) factor). Not renormalized.
inline FockState add_photon(const FockState& state, std::size_t mode) {
  if (mode >= state.registry().size()) throw UnknownMode("mode index out of range");
  FockState::Terms out;
  for (const auto& [k, a] : state.terms()) {
    if (k.total() + 1 > state.photon_cap()) throw PhotonCapExceeded("photon cap exceeded");
    const int n = k.get(mode);
    OccupationKey nk = k;
    nk.set(mode, n + 1);
    out[nk] += a * std::sqrt(static_cast<double>(n + 1));
  }
  return FockState(state.registry_ptr(), std::move(out), state.photon_cap());
}

inline FockState add_photon(const FockState& state, const std::string& rail, Pol pol) {
  return add_photon(state, state.registry().index(rail, pol));
}

inline std::set<std::string> occupied_rails(const FockState& s) {
  std::set<std::string> out;
  for (const auto& [k, a] : s.terms())
    for (std::size_t i = 0; i < s.registry().size(); ++i)
      if (k.get(i)) out.insert(s.registry().mode(i).rail);
  return out;
}

/// Product of states occupying disjoint rails of one registry.
inline FockState tensor(const FockState& a, const FockState& b) {
  a.require_same_registry(b);
  const auto ra = occupied_rails(a);
  for (const auto& r : occupied_rails(b))
    if (ra.count(r)) throw OverlappingRails("tensor operands both occupy rail '" + r + "'");
  const auto n_modes = a.registry().size();
  const int cap = std::max(a.photon_cap(), b.photon_cap());
  FockState::Terms out;
  for (const auto& [ka, xa] : a.terms())
    for (const auto& [kb, xb] : b.terms()) {
      OccupationKey k = ka;
      for (std::size_t i = 0; i < n_modes; ++i)
        if (int n = kb.get(i)) k.set(i, n);
      if (k.total() > cap) throw PhotonCapExceeded("photon cap exceeded");
      out[k] += xa * xb;
    }
  return FockState(a.registry_ptr(), std::move(out), cap);
}

/// <a|b>, conjugate-linear in a.
inline Complex inner_product(const FockState& a, const FockState& b) {
  a.require_same_registry(b);
  Complex s{};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, x] : small.terms()) {
    const Complex y = large.amplitude(k);
    if (y == Complex{}) continue;
    s += (&small == &a) ? std::conj(x) * y : std::conj(y) * x;
  }
  return s;
}

/// |<a|b>|^2 / (<a|a><b|b>).
inline double fidelity(const FockState& a, const FockState& b) {
  const double na = a.norm_squared(), nb = b.norm_squared();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::norm(inner_product(a, b)) / (na * nb);
}

inline FockState prune(const FockState& state, double threshold = kPruneThreshold) {
  if (threshold < 0) throw FockError("prune threshold must be non-negative");
  FockState::Terms out;
  for (const auto& [k, a] : state.terms())
    if (std::abs(a) >= threshold) out.emplace_hint(out.end(), k, a);
  return FockState(state.registry_ptr(), std::move(out), state.photon_cap());
}

/// Re-expresses a state on another registry, matching modes by (rail, polarization).
/// Every occupied mode must exist in the target.
inline FockState embed(const FockState& state, RegistryPtr target) {
  const auto& src = state.registry();
  std::vector<std::size_t> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto j = target->find(src.mode(i).rail, src.mode(i).pol);
    map[i] = j ? *j : kMaxModes;
  }
  FockState::Terms out;
  for (const auto& [k, a] : state.terms()) {
    OccupationKey nk;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const int n = k.get(i);
      if (!n) continue;
      if (map[i] == kMaxModes)
        throw UnknownMode("mode " + src.mode(i).rail + to_string(src.mode(i).pol) +
                          " missing from target registry");
      nk.set(map[i], n);
    }
    out[nk] += a;
  }
  return FockState(std::move(target), std::move(out), state.photon_cap());
}

/// Drops every rail not in `rails`; those rails must be empty in every term.
inline FockState restrict_to_rails(const FockState& state, const std::vector<std::string>& rails) {
  for (const auto& r : occupied_rails(state))
    if (std::find(rails.begin(), rails.end(), r) == rails.end())
      throw FockError("cannot restrict: rail '" + r + "' is occupied");
  return embed(state, make_registry(rails));
}

}  // namespace dfs

#endif  // DFSHERALD_FOCK_HPP

#ifndef DFSHERALD_ELEMENTS_HPP
#define DFSHERALD_ELEMENTS_HPP

// Passive linear-optical elements as unitaries on mode creation operators.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dfsherald/fock.hpp"

namespace dfs {

enum class ElementKind { HV_PBS, FS_PBS, BS_5050, POL_ROT, PHASE, HALF_WAVE_X, POL_UNITARY, PROPAGATE };

inline const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::HV_PBS: return "HV_PBS";
    case ElementKind::FS_PBS: return "FS_PBS";
    case ElementKind::BS_5050: return "BS_5050";
    case ElementKind::POL_ROT: return "POL_ROT";
    case ElementKind::PHASE: return "PHASE";
    case ElementKind::HALF_WAVE_X: return "HALF_WAVE_X";
    case ElementKind::POL_UNITARY: return "POL_UNITARY";
    case ElementKind::PROPAGATE: return "PROPAGATE";
  }
  return "?";
}

inline ElementKind element_kind_from_string(const std::string& s) {
  for (auto k : {ElementKind::HV_PBS, ElementKind::FS_PBS, ElementKind::BS_5050, ElementKind::POL_ROT,
                 ElementKind::PHASE, ElementKind::HALF_WAVE_X, ElementKind::POL_UNITARY,
                 ElementKind::PROPAGATE})
    if (s == to_string(k)) return k;
  throw FockError("unknown element kind '" + s + "'");
}

class ElementError : public FockError {
 public:
  using FockError::FockError;
};

/// Change of basis from {F, S} coordinates to {H, V} coordinates:
/// F = (H + V)/sqrt2, S = (V - H)/sqrt2.
inline Eigen::Matrix2cd fs_to_hv() {
  const double r = std::numbers::sqrt2 / 2;
  Eigen::Matrix2cd c;
  c << r, -r, r, r;
  return c;
}

/// A unitary acting on single-photon amplitudes: photon in in_modes[i] goes to
/// sum_j matrix(j, i) out_modes[j]. Creation operators transform the same way.
class OpticalElement {
 public:
  OpticalElement(ElementKind kind, std::vector<std::string> rails, std::map<std::string, double> params,
                 std::vector<ModeIndex> in_modes, std::vector<ModeIndex> out_modes, Eigen::MatrixXcd matrix)
      : kind_(kind),
        rails_(std::move(rails)),
        params_(std::move(params)),
        in_modes_(std::move(in_modes)),
        out_modes_(std::move(out_modes)),
        matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(in_modes_.size());
    if (static_cast<Eigen::Index>(out_modes_.size()) != n || matrix_.rows() != n || matrix_.cols() != n)
      throw ElementError("element mode lists and matrix dimension disagree");
    const double dev = (matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > 1e-12) throw ElementError(std::string(to_string(kind_)) + " matrix is not unitary");
  }

  ElementKind kind() const { return kind_; }
  const std::vector<std::string>& rails() const { return rails_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<ModeIndex>& in_modes() const { return in_modes_; }
  const std::vector<ModeIndex>& out_modes() const { return out_modes_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  std::vector<std::string> input_rails() const { return distinct_rails(in_modes_); }
  std::vector<std::string> output_rails() const { return distinct_rails(out_modes_); }

 private:
  static std::vector<std::string> distinct_rails(const std::vector<ModeIndex>& modes) {
    std::vector<std::string> out;
    for (const auto& m : modes)
      if (std::find(out.begin(), out.end(), m.rail) == out.end()) out.push_back(m.rail);
    return out;
  }

  ElementKind kind_;
  std::vector<std::string> rails_;
  std::map<std::string, double> params_;
  std::vector<ModeIndex> in_modes_;
  std::vector<ModeIndex> out_modes_;
  Eigen::MatrixXcd matrix_;
};

namespace detail {

inline void require_distinct(const std::vector<std::string>& rails) {
  for (std::size_t i = 0; i < rails.size(); ++i)
    for (std::size_t j = i + 1; j < rails.size(); ++j)
      if (rails[i] == rails[j]) throw ElementError("duplicate rail '" + rails[i] + "'");
}

inline std::vector<ModeIndex> hv_modes(const std::string& a, const std::string& b) {
  return {{a, Pol::H}, {a, Pol::V}, {b, Pol::H}, {b, Pol::V}};
}

inline OpticalElement single_rail(ElementKind kind, const std::string& rail, std::map<std::string, double> params,
                                  const Eigen::Matrix2cd& u) {
  std::vector<ModeIndex> m{{rail, Pol::H}, {rail, Pol::V}};
  return OpticalElement(kind, {rail}, std::move(params), m, m, u);
}

/// Two-rail polarization router. `route` is 4x4 in per-rail {first, second}
/// coordinates; `basis` maps those coordinates to {H, V} on every rail.
inline OpticalElement two_rail(ElementKind kind, const std::vector<std::string>& rails,
                               std::map<std::string, double> params, const Eigen::Matrix4cd& route,
                               const Eigen::Matrix2cd& basis) {
  require_distinct(rails);
  Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
  b.block<2, 2>(0, 0) = basis;
  b.block<2, 2>(2, 2) = basis;
  Eigen::MatrixXcd u = b * route * b.adjoint();
  return OpticalElement(kind, rails, std::move(params), hv_modes(rails[0], rails[1]), hv_modes(rails[2], rails[3]),
                        u);
}

/// First polarization transmits (a->c, b->d), second reflects (a->d, b->c) with factor r.
inline Eigen::Matrix4cd pbs_routing(Complex r) {
  // coordinates: in {a1, a2, b1, b2}, out {c1, c2, d1, d2}
  Eigen::Matrix4cd p = Eigen::Matrix4cd::Zero();
  p(0, 0) = 1.0;  // a1 -> c1
  p(3, 1) = r;    // a2 -> d2
  p(2, 2) = 1.0;  // b1 -> d1
  p(1, 3) = r;    // b2 -> c2
  return p;
}

}  // namespace detail

/// Polarizing beam splitter: H transmits (a->c, b->d), V reflects (a->d, b->c)
/// picking up exp(i*reflection_phase).
inline OpticalElement make_hv_pbs(const std::string& a, const std::string& b, const std::string& c,
                                  const std::string& d, double reflection_phase = 0.0) {
  return detail::two_rail(ElementKind::HV_PBS, {a, b, c, d}, {{"reflection_phase", reflection_phase}},
                          detail::pbs_routing(std::polar(1.0, reflection_phase)), Eigen::Matrix2cd::Identity());
}

/// Same routing in the {F, S} basis: F transmits, S reflects.
inline OpticalElement make_fs_pbs(const std::string& a, const std::string& b, const std::string& c,
                                  const std::string& d, double reflection_phase = 0.0) {
  return detail::two_rail(ElementKind::FS_PBS, {a, b, c, d}, {{"reflection_phase", reflection_phase}},
                          detail::pbs_routing(std::polar(1.0, reflection_phase)), fs_to_hv());
}

/// Polarization-insensitive 50/50 splitter, symmetric convention:
/// a -> (c + i d)/sqrt2, b -> (i c + d)/sqrt2.
inline OpticalElement make_bs_5050(const std::string& a, const std::string& b, const std::string& c,
                                   const std::string& d) {
  const double s = std::numbers::sqrt2 / 2;
  const Complex t{s, 0}, r{0, s};
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  for (int p = 0; p < 2; ++p) {
    u(p, p) = t;          // a -> c
    u(2 + p, p) = r;      // a -> d
    u(p, 2 + p) = r;      // b -> c
    u(2 + p, 2 + p) = t;  // b -> d
  }
  return detail::two_rail(ElementKind::BS_5050, {a, b, c, d}, {}, u, Eigen::Matrix2cd::Identity());
}

/// F -> cos(theta) F - sin(theta) S,  S -> sin(theta) F + cos(theta) S.
inline OpticalElement make_pol_rotation(const std::string& rail, double theta) {
  Eigen::Matrix2cd r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  const auto c = fs_to_hv();
  return detail::single_rail(ElementKind::POL_ROT, rail, {{"theta", theta}}, c * r * c.adjoint());
}

/// diag(1, exp(i phi)) in the {F, S} basis.
inline OpticalElement make_phase(const std::string& rail, double phi) {
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, phi);
  const auto c = fs_to_hv();
  return detail::single_rail(ElementKind::PHASE, rail, {{"phi", phi}}, c * d * c.adjoint());
}

/// H <-> V.
inline OpticalElement make_sigma_x_plate(const std::string& rail) {
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  return detail::single_rail(ElementKind::HALF_WAVE_X, rail, {}, x);
}

/// Arbitrary polarization unitary in the {H, V} basis (column = image of H, V).
inline OpticalElement make_pol_unitary(const std::string& rail, const Eigen::Matrix2cd& u) {
  std::map<std::string, double> p;
  const char* names[2][2] = {{"u00", "u01"}, {"u10", "u11"}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      p[std::string(names[i][j]) + "_re"] = u(i, j).real();
      p[std::string(names[i][j]) + "_im"] = u(i, j).imag();
    }
  return detail::single_rail(ElementKind::POL_UNITARY, rail, std::move(p), u);
}

/// Free propagation of both polarizations from one rail to another.
inline OpticalElement make_propagate(const std::string& from, const std::string& to) {
  detail::require_distinct({from, to});
  return OpticalElement(ElementKind::PROPAGATE, {from, to}, {}, {{from, Pol::H}, {from, Pol::V}},
                        {{to, Pol::H}, {to, Pol::V}}, Eigen::Matrix2cd::Identity());
}

/// Rebuilds an element from its serialized (kind, rails, params) triple.
inline OpticalElement make_element(ElementKind kind, const std::vector<std::string>& rails,
                                   const std::map<std::string, double>& params) {
  auto param = [&](const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  };
  auto need = [&](std::size_t n) {
    if (rails.size() != n)
      throw ElementError(std::string(to_string(kind)) + " needs " + std::to_string(n) + " rails");
  };
  switch (kind) {
    case ElementKind::HV_PBS:
      need(4);
      return make_hv_pbs(rails[0], rails[1], rails[2], rails[3], param("reflection_phase", 0.0));
    case ElementKind::FS_PBS:
      need(4);
      return make_fs_pbs(rails[0], rails[1], rails[2], rails[3], param("reflection_phase", 0.0));
    case ElementKind::BS_5050:
      need(4);
      return make_bs_5050(rails[0], rails[1], rails[2], rails[3]);
    case ElementKind::POL_ROT:
      need(1);
      return make_pol_rotation(rails[0], param("theta", 0.0));
    case ElementKind::PHASE:
      need(1);
      return make_phase(rails[0], param("phi", 0.0));
    case ElementKind::HALF_WAVE_X:
      need(1);
      return make_sigma_x_plate(rails[0]);
    case ElementKind::POL_UNITARY: {
      need(1);
      Eigen::Matrix2cd u;
      u << Complex{param("u00_re", 1), param("u00_im", 0)}, Complex{param("u01_re", 0), param("u01_im", 0)},
          Complex{param("u10_re", 0), param("u10_im", 0)}, Complex{param("u11_re", 1), param("u11_im", 0)};
      return make_pol_unitary(rails[0], u);
    }
    case ElementKind::PROPAGATE:
      need(2);
      return make_propagate(rails[0], rails[1]);
  }
  throw ElementError("unhandled element kind");
}

namespace detail {

inline double sqrt_factorial_ratio(int from, int to) {
  double r = 1.0;
  for (int k = from + 1; k <= to; ++k) r *= k;
  return std::sqrt(r);
}

}  // namespace detail

/// Substitutes a_in^dag -> sum_j U(j, in) a_out_j^dag in every term, then prunes.
inline FockState apply_element(const FockState& state, const OpticalElement& e,
                               double prune_threshold = kPruneThreshold) {
  const auto& reg = state.registry();
  const auto n = e.in_modes().size();
  std::vector<std::size_t> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = reg.index(e.in_modes()[i].rail, e.in_modes()[i].pol);
    out[i] = reg.index(e.out_modes()[i].rail, e.out_modes()[i].pol);
  }
  const auto& u = e.matrix();

  // Monomials over the element's output modes.
  using Monomial = std::array<std::uint8_t, 8>;
  if (n > 8) throw ElementError("elements act on at most 8 modes");

  FockState::Terms result;
  std::map<Monomial, Complex> poly, next;
  for (const auto& [key, amp] : state.terms()) {
    OccupationKey base = key;
    double inv_norm = 1.0;
    poly.clear();
    poly[Monomial{}] = amp;
    for (std::size_t i = 0; i < n; ++i) {
      const int count = key.get(in[i]);
      base.set(in[i], 0);
      for (int c = 1; c <= count; ++c) {
        inv_norm *= c;
        next.clear();
        for (const auto& [mono, coef] : poly)
          for (std::size_t j = 0; j < n; ++j) {
            const Complex uji = u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            if (uji == Complex{}) continue;
            Monomial m = mono;
            ++m[j];
            next[m] += coef * uji;
          }
        poly.swap(next);
      }
    }
    const double scale = 1.0 / std::sqrt(inv_norm);
    for (const auto& [mono, coef] : poly) {
      OccupationKey k = base;
      double factor = scale;
      for (std::size_t j = 0; j < n; ++j) {
        if (!mono[j]) continue;
        const int before = k.get(out[j]);
        const int after = before + mono[j];
        if (after > kMaxCount) throw PhotonCapExceeded("mode occupation overflow");
        factor *= detail::sqrt_factorial_ratio(before, after);
        k.set(out[j], after);
      }
      result[k] += coef * factor;
    }
  }
  return prune(FockState(state.registry_ptr(), std::move(result), state.photon_cap()), prune_threshold);
}

}  // namespace dfs

#endif  // DFSHERALD_ELEMENTS_HPP

#ifndef DFSHERALD_SERIALIZATION_HPP
#define DFSHERALD_SERIALIZATION_HPP

// JSON forms of states, circuits, outcome lists and reports.

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "dfsherald/circuit.hpp"
#include "dfsherald/detection.hpp"
#include "dfsherald/dfs_code.hpp"
#include "dfsherald/protocols.hpp"

namespace dfs {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "dfs-herald/1";

class FormatError : public FockError {
 public:
  using FockError::FockError;
};

inline json complex_to_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

inline Complex complex_from_json(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

// --- states ----------------------------------------------------------------

inline json state_to_json(const FockState& s) {
  json modes = json::array();
  for (const auto& m : s.registry().modes()) modes.push_back({{"rail", m.rail}, {"pol", to_string(m.pol)}});
  json terms = json::array();
  const auto n = s.registry().size();
  for (const auto& [k, a] : s.terms())
    terms.push_back({{"occ", k.to_vector(n)}, {"re", a.real()}, {"im", a.imag()}});
  return json{{"modes", modes}, {"terms", terms}};
}

inline FockState state_from_json(const json& j) {
  try {
    auto reg = std::make_shared<ModeRegistry>();
    for (const auto& m : j.at("modes")) reg->add_mode({m.at("rail").get<std::string>(), pol_from_string(m.at("pol"))});
    FockState::Terms terms;
    for (const auto& t : j.at("terms")) {
      const auto occ = t.at("occ").get<std::vector<int>>();
      if (occ.size() != reg->size()) throw FormatError("occupation vector length differs from mode count");
      for (int c : occ)
        if (c < 0) throw FormatError("negative occupation");
      terms[OccupationKey::from_vector(occ)] += Complex{t.at("re").get<double>(), t.at("im").get<double>()};
    }
    return FockState(std::move(reg), std::move(terms));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed state JSON: ") + e.what());
  }
}

// --- circuits --------------------------------------------------------------

inline json circuit_to_json(const Circuit& c) {
  json elements = json::array();
  for (const auto& e : c.elements()) {
    json params = json::object();
    for (const auto& [k, v] : e.params()) params[k] = v;
    elements.push_back({{"kind", to_string(e.kind())}, {"rails", e.rails()}, {"params", params}});
  }
  return json{{"rails", c.rails()}, {"elements", elements}, {"detectors", c.detectors()}};
}

inline Circuit circuit_from_json(const json& j) {
  try {
    std::vector<OpticalElement> el;
    for (const auto& e : j.at("elements")) {
      std::map<std::string, double> params;
      if (e.contains("params"))
        for (const auto& [k, v] : e.at("params").items()) params[k] = v.get<double>();
      el.push_back(make_element(element_kind_from_string(e.at("kind")), e.at("rails").get<std::vector<std::string>>(),
                                params));
    }
    return Circuit(j.at("rails").get<std::vector<std::string>>(), std::move(el),
                   j.at("detectors").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed circuit JSON: ") + e.what());
  }
}

// --- detection -------------------------------------------------------------

inline json pattern_to_json(const DetectionPattern& p) {
  json j = json::object();
  for (const auto& c : p.counts) {
    const bool hv = c.basis == MeasurementBasis::HV;
    j[c.rail] = {{"basis", to_string(c.basis)}, {hv ? "H" : "F", c.first}, {hv ? "V" : "S", c.second}};
  }
  return j;
}

/// Conditional states are written on their occupied rails only.
inline json compact_state_to_json(const FockState& s) {
  const auto rails = occupied_rails(s);
  if (rails.empty()) return state_to_json(s);
  return state_to_json(restrict_to_rails(s, {rails.begin(), rails.end()}));
}

inline json outcomes_to_json(const std::vector<DetectionOutcome>& outcomes) {
  json list = json::array();
  for (const auto& o : outcomes)
    list.push_back(
        {{"pattern", pattern_to_json(o.pattern)}, {"prob", o.probability}, {"state_ref", compact_state_to_json(o.conditional)}});
  return list;
}

// --- reports ---------------------------------------------------------------

inline json herald_report_to_json(const HeraldReport& r) {
  return json{
      {"config", {{"theta", r.config.theta}, {"phi", r.config.phi}, {"qutrit_zero", r.config.qutrit_zero}}},
      {"accept_pattern", pattern_to_json(hnsg_accept_pattern())},
      {"accept_probability", r.accept_probability},
      {"target_fidelity", r.target_fidelity},
      {"conditional", state_to_json(r.conditional)},
      {"mirror_pattern", pattern_to_json(hnsg_mirror_pattern())},
      {"mirror_probability", r.mirror_probability},
      {"mirror_fidelity", r.mirror_fidelity},
      {"all_outcomes", outcomes_to_json(r.all_outcomes)},
  };
}

inline json clicks_to_json(const ClickList& c, const std::string& prefix) {
  json j = json::array();
  for (int d : c) j.push_back(prefix + std::to_string(d));
  return j;
}

inline json pattern_table_to_json(const PatternTable& t) {
  json support = json::object();
  for (const auto& [which, clicks] : t.support) {
    json list = json::array();
    for (const auto& c : clicks) list.push_back(clicks_to_json(c, "t"));
    support[to_string(which)] = list;
  }
  return json{{"support", support}, {"relabel", t.relabel}};
}

inline json decoder_results_to_json(const std::vector<DecoderResult>& results, const PatternTable& table) {
  json list = json::array();
  for (const auto& r : results)
    list.push_back({{"label", to_string(r.verdict.label)},
                    {"top", clicks_to_json(r.verdict.top, "t")},
                    {"bottom", clicks_to_json(r.verdict.bottom, "b")},
                    {"prob", r.probability}});
  json totals = json::object();
  for (const auto& [label, p] : verdict_totals(results)) totals[to_string(label)] = p;
  return json{{"pattern_table", pattern_table_to_json(table)}, {"verdicts", list}, {"totals", totals}};
}

inline json decomposition_to_json(const LogicalDecomposition& d) {
  json nu = json::array(), omega = json::array();
  for (const auto& x : d.nu) nu.push_back(complex_to_json(x));
  for (const auto& row : d.omega) {
    json r = json::array();
    for (const auto& x : row) r.push_back(complex_to_json(x));
    omega.push_back(r);
  }
  return json{{"nu", nu}, {"omega", omega}, {"residual", d.residual}};
}

// --- files -----------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

}  // namespace dfs

#endif  // DFSHERALD_SERIALIZATION_HPP

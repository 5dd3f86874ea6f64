#ifndef DFSHERALD_CLI_HPP
#define DFSHERALD_CLI_HPP

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dfsherald/protocols.hpp"
#include "dfsherald/sampling.hpp"
#include "dfsherald/serialization.hpp"

namespace dfs::cli {

inline constexpr std::uint64_t kDefaultSeed = 20130;

enum ExitCode : int { kOk = 0, kZeroProbability = 1, kUsage = 2 };

struct CommandConfig {
  double theta = 0.0;
  double phi = 0.0;
  double alpha_re = 1.0, alpha_im = 0.0, beta_re = 0.0, beta_im = 0.0;
  double alpha2_re = 1.0, alpha2_im = 0.0, beta2_re = 0.0, beta2_im = 0.0;
  int samples = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string input;
  std::string output;
  int logical = -1;
  bool qutrit_zero = false;
  bool json = false;
  bool list = false;
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

inline std::string fmt(Complex c) { return fmt(c.real()) + (c.imag() < 0 ? "-" : "+") + fmt(std::abs(c.imag())) + "i"; }

inline json header(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

inline void outcome_lines(std::ostream& os, const std::vector<DetectionOutcome>& outcomes) {
  for (const auto& o : outcomes) os << "  " << o.pattern.to_string() << "  p=" << fmt(o.probability) << "\n";
}

struct Report {
  json doc;
  std::string text;
};

inline Report herald(const CommandConfig& c) {
  const HnsgConfig cfg = c.qutrit_zero ? HnsgConfig::zero_state() : HnsgConfig::qubit(c.theta, c.phi);
  const HeraldReport r = hnsg_run(cfg);
  json doc = header("herald");
  doc.update(herald_report_to_json(r));
  std::ostringstream os;
  os << "HNSG theta=" << fmt(r.config.theta) << " phi=" << fmt(r.config.phi)
     << (r.config.qutrit_zero ? " (qutrit zero)" : "") << "\n"
     << "accept pattern    " << hnsg_accept_pattern().to_string() << "\n"
     << "accept probability " << fmt(r.accept_probability) << "\n"
     << "target fidelity    " << fmt(r.target_fidelity) << "\n"
     << "mirror probability " << fmt(r.mirror_probability) << "  fidelity " << fmt(r.mirror_fidelity) << "\n"
     << "outcomes           " << r.all_outcomes.size() << "\n";
  return {doc, os.str()};
}

inline Report parity_check(const CommandConfig& c) {
  const Complex a{c.alpha_re, c.alpha_im}, b{c.beta_re, c.beta_im};
  const auto outcomes = parity_check_run(a, b);
  const double pf = probability_of(outcomes, parity_check_pattern(true));
  const double ps = probability_of(outcomes, parity_check_pattern(false));
  json doc = header("parity-check");
  doc["alpha"] = complex_to_json(a);
  doc["beta"] = complex_to_json(b);
  doc["p_f"] = pf;
  doc["p_s"] = ps;
  doc["rejected"] = total_probability(outcomes) - pf - ps;
  doc["outcomes"] = outcomes_to_json(outcomes);
  std::ostringstream os;
  os << "parity check alpha=" << fmt(a) << " beta=" << fmt(b) << "\n"
     << "P(F)=" << fmt(pf) << " P(S)=" << fmt(ps) << " rejected=" << fmt(doc["rejected"].get<double>()) << "\n";
  outcome_lines(os, outcomes);
  return {doc, os.str()};
}

inline Report joint_phase(const CommandConfig& c) {
  const std::pair<Complex, Complex> q1{{c.alpha_re, c.alpha_im}, {c.beta_re, c.beta_im}};
  const std::pair<Complex, Complex> q2{{c.alpha2_re, c.alpha2_im}, {c.beta2_re, c.beta2_im}};
  const auto outcomes = joint_phase_run(q1, q2);
  const double pff = probability_of(outcomes, joint_phase_pattern(true));
  const double pss = probability_of(outcomes, joint_phase_pattern(false));
  json doc = header("joint-phase");
  doc["p_ff"] = pff;
  doc["p_ss"] = pss;
  doc["rejected"] = total_probability(outcomes) - pff - pss;
  doc["outcomes"] = outcomes_to_json(outcomes);
  std::ostringstream os;
  os << "joint phase P(F,F)=" << fmt(pff) << " P(S,S)=" << fmt(pss)
     << " rejected=" << fmt(doc["rejected"].get<double>()) << "\n";
  outcome_lines(os, outcomes);
  return {doc, os.str()};
}

inline Report decode(const CommandConfig& c) {
  std::optional<FockState> state;
  if (!c.input.empty()) {
    state = state_from_json(read_json_file(c.input));
    if (!state->is_normalized(1e-8)) throw FormatError("input state is not normalized");
  } else if (c.logical >= 0) {
    state = logical_basis(hnsg_code_rails()).at(c.logical, 2);
  } else {
    throw CLI::ValidationError("decode", "needs --input or --logical");
  }
  const Circuit decoder = decoder_build();
  const PatternTable table = calibrate_decoder(decoder);
  const auto results = decoder_classify(*state, decoder, table);
  json doc = header("decode");
  doc.update(decoder_results_to_json(results, table));
  std::ostringstream os;
  os << "decoder pattern table:\n";
  for (const auto& [which, clicks] : table.support) {
    os << "  " << to_string(which) << " ->";
    for (const auto& cl : clicks) os << " " << click_string(cl, "t");
    os << "\n";
  }
  for (const auto& [label, p] : verdict_totals(results)) os << to_string(label) << " " << fmt(p) << "\n";
  return {doc, os.str()};
}

inline Report noise_sweep_report(const CommandConfig& c) {
  if (c.samples <= 0) throw CLI::ValidationError("--samples", "must be positive");
  const auto st = noise_sweep(c.samples, c.seed, logical_basis(hnsg_code_rails()));
  json doc = header("noise-sweep");
  doc["samples"] = st.samples;
  doc["seed"] = c.seed;
  doc["max_nu_error"] = st.max_nu_error;
  doc["max_nu_modulus_error"] = st.max_nu_modulus_error;
  doc["max_omega_norm_error"] = st.max_omega_norm_error;
  doc["max_block_leakage"] = st.max_block_leakage;
  doc["max_gauge_mismatch"] = st.max_gauge_mismatch;
  doc["max_residual"] = st.max_residual;
  std::ostringstream os;
  os << "collective noise sweep: " << st.samples << " samples, seed " << c.seed << "\n"
     << "max |nu_out - nu_in| (global phase) " << fmt(st.max_nu_error) << "\n"
     << "max ||nu_Q| change| (per-block gauge) " << fmt(st.max_nu_modulus_error) << "\n"
     << "max omega norm error " << fmt(st.max_omega_norm_error) << "\n"
     << "max block leakage    " << fmt(st.max_block_leakage) << "\n"
     << "max |A_Q - A_1|      " << fmt(st.max_gauge_mismatch) << "\n";
  return {doc, os.str()};
}

inline Report basis(const CommandConfig& c) {
  const LogicalBasis b = logical_basis(hnsg_code_rails());
  double off = 0, diag = 0;
  for (int q = 0; q < 3; ++q)
    for (int k = 1; k <= 3; ++k)
      for (int qp = 0; qp < 3; ++qp)
        for (int kp = 1; kp <= 3; ++kp) {
          const Complex g = inner_product(b.at(q, k), b.at(qp, kp));
          if (q == qp && k == kp)
            diag = std::max(diag, std::abs(g - 1.0));
          else
            off = std::max(off, std::abs(g));
        }
  json doc = header("basis");
  doc["max_offdiag"] = off;
  doc["max_diag_error"] = diag;
  std::ostringstream os;
  if (c.list) {
    json states = json::array();
    for (int q = 0; q < 3; ++q)
      for (int k = 1; k <= 3; ++k) {
        states.push_back({{"Q", q}, {"k", k}, {"state", state_to_json(b.at(q, k))}});
        os << "|" << q << "_L^" << k << ">  " << b.at(q, k).debug_string() << "\n";
      }
    doc["states"] = states;
  }
  os << "Gram matrix: max off-diagonal " << fmt(off) << ", max diagonal error " << fmt(diag) << "\n";
  return {doc, os.str()};
}

}  // namespace detail

/// Runs one command. Reports go to `out` (or --output), diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandConfig c;
  CLI::App app{"Heralded DFS photonic state generator and decoder simulator", "dfs_herald"};
  app.require_subcommand(1);
  app.add_flag("--json", c.json, "emit the machine-readable JSON report");
  app.add_option("--output", c.output, "write the report to this file instead of stdout");

  auto* herald = app.add_subcommand("herald", "run the HNSG and herald on |F_d2>|H_d1>|vac_d3>|vac_d4>");
  herald->add_option("--theta", c.theta, "polarization rotation angle (radians)");
  herald->add_option("--phi", c.phi, "phase shifter angle (radians)");
  herald->add_flag("--qutrit-zero", c.qutrit_zero, "insert sigma_x plates on m1, m6 and herald |0_L^2>");

  auto qubit_opts = [&](CLI::App* s) {
    s->add_option("--alpha-re", c.alpha_re);
    s->add_option("--alpha-im", c.alpha_im);
    s->add_option("--beta-re", c.beta_re);
    s->add_option("--beta-im", c.beta_im);
  };
  auto* parity = app.add_subcommand("parity-check", "single PJF gadget on alpha|H> + beta|V>");
  qubit_opts(parity);
  auto* joint = app.add_subcommand("joint-phase", "two PJF gadgets, accept (F,F) or (S,S)");
  qubit_opts(joint);
  joint->add_option("--alpha2-re", c.alpha2_re);
  joint->add_option("--alpha2-im", c.alpha2_im);
  joint->add_option("--beta2-re", c.beta2_re);
  joint->add_option("--beta2-im", c.beta2_im);

  auto* decode = app.add_subcommand("decode", "classify a four-photon state on o1..o4 with the decoder");
  decode->add_option("--input", c.input, "state file (JSON)");
  decode->add_option("--logical", c.logical, "decode |Q_L^2> for Q in {0,1,2}")->check(CLI::Range(0, 2));

  auto* sweep = app.add_subcommand("noise-sweep", "random collective channels on random encoded states");
  sweep->add_option("--samples", c.samples);
  sweep->add_option("--seed", c.seed);

  auto* basis = app.add_subcommand("basis", "the nine DFS basis states and their Gram matrix");
  basis->add_flag("--list", c.list, "print every basis state");

  for (auto* s : {herald, parity, joint, decode, sweep, basis}) s->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    detail::Report r;
    if (*herald) r = detail::herald(c);
    else if (*parity) r = detail::parity_check(c);
    else if (*joint) r = detail::joint_phase(c);
    else if (*decode) r = detail::decode(c);
    else if (*sweep) r = detail::noise_sweep_report(c);
    else r = detail::basis(c);

    const std::string text = c.json ? r.doc.dump(2) + "\n" : r.text;
    if (c.output.empty())
      out << text;
    else
      write_text_file(c.output, text);
    return kOk;
  } catch (const ZeroProbabilityHerald& e) {
    err << "error: " << e.what() << "\n";
    return kZeroProbability;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FockError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace dfs::cli

#endif  // DFSHERALD_CLI_HPP

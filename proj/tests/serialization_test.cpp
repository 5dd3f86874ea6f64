#include "dfsherald/serialization.hpp"

#include <gtest/gtest.h>

#include "dfsherald/sampling.hpp"

using namespace dfs;

TEST(StateJson, round_trip_is_exact) {
  Rng rng(23);
  auto reg = make_registry({"a", "b", "c"});
  for (int i = 0; i < 10; ++i) {
    const auto s = random_state(reg, 3, 6, rng);
    const auto text = state_to_json(s).dump();
    const auto back = state_from_json(json::parse(text));
    EXPECT_EQ(back.terms(), s.terms());
    EXPECT_EQ(back.registry().modes().size(), s.registry().modes().size());
    EXPECT_EQ(state_to_json(back).dump(), text);
  }
}

TEST(StateJson, layout) {
  auto reg = make_registry({"r"});
  const auto j = state_to_json(qubit_photon(reg, "r", 1.0, 0.0));
  EXPECT_EQ(j.dump(), R"({"modes":[{"rail":"r","pol":"H"},{"rail":"r","pol":"V"}],"terms":[{"occ":[1,0],"re":1.0,"im":0.0}]})");
}

TEST(StateJson, malformed_inputs) {
  EXPECT_THROW(state_from_json(json::parse(R"({"terms":[]})")), FormatError);
  EXPECT_THROW(state_from_json(json::parse(R"({"modes":[{"rail":"r","pol":"H"}],"terms":[{"occ":[1,0],"re":1,"im":0}]})")),
               FormatError);
  EXPECT_THROW(state_from_json(json::parse(R"({"modes":[{"rail":"r","pol":"H"}],"terms":[{"occ":[-1],"re":1,"im":0}]})")),
               FormatError);
  EXPECT_THROW(state_from_json(json::parse(R"({"modes":[{"rail":"r","pol":"Q"}],"terms":[]})")), FockError);
  EXPECT_THROW(state_from_json(json::parse(R"({"modes":[{"rail":"r","pol":"H"}],"terms":[{"occ":[1],"re":"x","im":0}]})")),
               FormatError);
}

TEST(CircuitJson, round_trip_preserves_behavior) {
  const Circuit c = hnsg_build(HnsgConfig::qubit(0.3, 1.2));
  const auto text = circuit_to_json(c).dump();
  const Circuit back = circuit_from_json(json::parse(text));
  EXPECT_EQ(circuit_to_json(back).dump(), text);
  EXPECT_EQ(back.detectors(), c.detectors());
  const auto a = run(c, hnsg_input(c)), b = run(back, hnsg_input(back));
  EXPECT_EQ(a.terms(), b.terms());
}

TEST(CircuitJson, malformed_inputs) {
  EXPECT_THROW(circuit_from_json(json::parse(R"({"rails":["a"],"elements":[]})")), FormatError);
  EXPECT_THROW(circuit_from_json(json::parse(R"({"rails":["a"],"elements":[{"kind":"WARP","rails":["a"]}],"detectors":[]})")),
               FockError);
  EXPECT_THROW(circuit_from_json(json::parse(R"({"rails":["a"],"elements":[{"kind":"PHASE","rails":["a"],"params":{"phi":"x"}}],"detectors":[]})")),
               FormatError);
}

TEST(ReportJson, herald_report_fields) {
  const auto j = herald_report_to_json(hnsg_run(HnsgConfig::qubit(0, 0)));
  EXPECT_NEAR(j.at("accept_probability").get<double>(), 0.03125, 1e-12);
  EXPECT_NEAR(j.at("target_fidelity").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j.at("accept_pattern").at("d2").at("F"), 1);
  EXPECT_EQ(j.at("accept_pattern").at("d1").at("H"), 1);
  double total = 0;
  for (const auto& o : j.at("all_outcomes")) {
    ASSERT_TRUE(o.contains("pattern") && o.contains("prob") && o.contains("state_ref"));
    total += o.at("prob").get<double>();
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_NO_THROW(state_from_json(j.at("conditional")));
}

TEST(ReportJson, decoder_results) {
  const Circuit d = decoder_build();
  const auto table = calibrate_decoder(d);
  const auto j = decoder_results_to_json(decoder_classify(logical_basis(hnsg_code_rails()).at(1, 2), d, table), table);
  EXPECT_NEAR(j.at("totals").at("ONE").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j.at("pattern_table").at("support").at("psi-").dump(), R"([["t1","t2"],["t3","t4"]])");
}

TEST(Files, missing_and_malformed) {
  EXPECT_THROW(read_json_file("/nonexistent/state.json"), FormatError);
  const std::string path = testing::TempDir() + "bad.json";
  write_text_file(path, "{not json");
  EXPECT_THROW(read_json_file(path), FormatError);
}

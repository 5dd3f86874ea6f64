// Heralds cos(theta)|2_L> + e^{i phi} sin(theta)|1_L>, exposes it to a random
// collective channel, and reads it back with the decoder.

#include <iostream>

#include "dfsherald/dfsherald.hpp"

int main() {
  using namespace dfs;
  const HeraldReport r = hnsg_run(HnsgConfig::qubit(kPi / 3, kPi / 2));
  std::cout << "accept probability " << r.accept_probability << ", fidelity " << r.target_fidelity << "\n";

  const LogicalBasis basis = logical_basis(r.conditional.registry_ptr(), hnsg_code_rails());
  const auto before = decompose(r.conditional, basis);

  Rng rng(1);
  const FockState noisy = apply_collective(r.conditional, random_collective(rng), basis.rails);
  const auto after = decompose(noisy, basis);
  for (int q = 0; q < 3; ++q)
    std::cout << "|nu_" << q << "| " << std::abs(before.nu[q]) << " -> " << std::abs(after.nu[q]) << "\n";

  for (const auto& [label, p] : verdict_totals(decoder_classify(noisy)))
    std::cout << to_string(label) << " " << p << "\n";
}

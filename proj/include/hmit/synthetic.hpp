#pragma once

#include <string>
#include <vector>

#include "hmit/dataset.hpp"

namespace hmit {

// Deterministic desk-scale stand-ins for the four benchmark tables (heart
// 270x14, tictac 958x10, car 1728x7, crx 690x16). Rows are drawn from a
// fixed-seed latent-state model that plants association structure: most
// attributes peak on a per-state value, two "pin" attributes jointly identify
// the state, and one attribute is the XOR of a state bit with an independent
// coin attribute, so rules that predict it always need the coin in the
// antecedent. Same name, same dataset, every time.
Dataset make_benchmark(const std::string& name);

const std::vector<std::string>& benchmark_names();

}  // namespace hmit

#pragma once

#include "hmit/dataset.hpp"

namespace hmit {

enum class BinStrategy { equal_width, equal_frequency };

// Replaces every known continuous value with its bin index and records the
// edges in the attribute schema. Bin b covers [edge[b], edge[b+1]), the last
// bin is closed on the right. Categorical attributes pass through untouched;
// missing cells stay missing. Equal-frequency edges are deduplicated, so a
// skewed column can end up with fewer than the requested bins. A constant
// (or all-missing) column gets a single bin.
Dataset discretize(const Dataset& ds, int bins, BinStrategy strategy);

// Bin index of v under the edges above; clamped into [0, bins-1] so every
// finite value maps somewhere (values outside the observed range land in the
// first or last bin).
int32_t bin_of(double v, const std::vector<double>& edges);

// Midpoint of bin b, the value a rule consequent on a continuous attribute
// stands for.
double bin_midpoint(int32_t b, const std::vector<double>& edges);

}  // namespace hmit

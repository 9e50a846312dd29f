#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "hmit/dataset.hpp"

namespace hmit {

struct MaskedCell {
    uint32_t row = 0;
    uint32_t attr = 0;
    Cell original;  // ground truth
};

struct CorruptionMask {
    std::vector<MaskedCell> cells;  // sorted by (row, attr), pairwise distinct
    uint64_t seed = 0;
    double rate = 0.0;

    bool contains(uint32_t row, uint32_t attr) const;
};

// Sets exactly floor(rate * |eligible|) known cells to missing, chosen
// uniformly without replacement by a seeded generator. Eligible cells are
// the known cells of non-protected attributes (the class attribute is
// protected by default). Every row keeps at least one known non-class cell;
// draws that would violate that are discarded deterministically and redrawn.
// Throws InfeasibleRateError when the rate cannot be met under that
// constraint.
std::pair<Dataset, CorruptionMask> inject_missing(const Dataset& ds, double rate, uint64_t seed,
                                                  bool protect_class = true);

// Writes the ground truth back; restore(corrupt(ds)) == ds.
Dataset restore(const Dataset& corrupted, const CorruptionMask& mask);

// Mask file: {"seed", "rate", "masked": [{"row", "attr", "value"}]}; values
// are category tokens or numbers.
void save_mask(const CorruptionMask& mask, const Dataset& context,
               const std::filesystem::path& path);
CorruptionMask load_mask(const std::filesystem::path& path, const Dataset& context);

}  // namespace hmit

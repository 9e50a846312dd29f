#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hmit/dataset.hpp"

namespace hmit {

// Dense bijection between (attribute, token) pairs and item ids. Ids are
// attribute-major and contiguous per attribute: item = first(attr) + token.
// Covers every declared category and every bin, observed or not.
class ItemCodebook {
public:
    // The dataset must be fully discretized (every continuous attribute
    // carries bin_edges).
    static ItemCodebook build(const Dataset& ds);

    int32_t encode(size_t attr, int32_t token) const {
        return first_[attr] + token;
    }
    std::pair<size_t, int32_t> decode(int32_t item) const {
        size_t attr = item_attr_[item];
        return {attr, item - first_[attr]};
    }
    size_t attribute_of(int32_t item) const { return item_attr_[item]; }

    int32_t item_count() const { return first_.back(); }
    size_t attribute_count() const { return first_.size() - 1; }
    int32_t first_item(size_t attr) const { return first_[attr]; }
    int32_t token_count(size_t attr) const { return first_[attr + 1] - first_[attr]; }

    bool operator==(const ItemCodebook& o) const { return first_ == o.first_; }

private:
    std::vector<int32_t> first_;      // attribute_count()+1 prefix sums
    std::vector<uint32_t> item_attr_;  // item -> attribute
};

// One sorted item-id set per row: the ids of the row's known cells. Missing
// cells contribute nothing, so a transaction holds at most one item per
// attribute.
std::vector<std::vector<int32_t>> to_transactions(const Dataset& ds, const ItemCodebook& cb);

}  // namespace hmit

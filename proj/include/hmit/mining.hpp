#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hmit/codebook.hpp"

namespace hmit {

struct Itemset {
    std::vector<int32_t> items;  // strictly ascending
    int64_t support_count = 0;   // exact number of containing transactions

    bool operator==(const Itemset& o) const {
        return items == o.items && support_count == o.support_count;
    }
};

struct AssociationRule {
    Itemset antecedent;          // items plus the antecedent's own support
    int32_t consequent = -1;     // single item, attribute disjoint from antecedent
    int64_t support_count = 0;   // support of antecedent U {consequent}
    double confidence = 0.0;     // support_count / antecedent.support_count
};

struct MiningParams {
    double min_sup = 0.02;   // fraction of transactions, (0, 1]
    double min_conf = 0.6;   // (0, 1]
    int max_itemset_len = 0; // 0 = unbounded; safety valve for low supports

    void validate() const;
};

// Count form of min_sup: the smallest c with c >= min_sup * n.
int64_t support_threshold(double min_sup, size_t n_transactions);

// All itemsets with support_count >= support_threshold(min_sup, n), mined
// depth-first over per-item transaction bitsets (intersection + popcount).
// Candidates mixing two items of one attribute are pruned; they cannot occur
// in a transaction. Output is sorted lexicographically by item list and is
// downward closed.
std::vector<Itemset> mine_frequent(const std::vector<std::vector<int32_t>>& transactions,
                                   const MiningParams& params, const ItemCodebook& cb);

// Single-consequent rules from a downward-closed frequent list: for every
// itemset Z with |Z| >= 2 and every c in Z on an attribute absent from
// Z \ {c}, emit (Z \ {c}) -> c iff its confidence meets min_conf. Sorted by
// (consequent, antecedent). Throws ClosureViolationError when an antecedent's
// support is not in the list.
std::vector<AssociationRule> generate_rules(const std::vector<Itemset>& frequent,
                                            const MiningParams& params, const ItemCodebook& cb);

// Rule indices bucketed by the consequent's attribute, input order preserved.
using RuleIndex = std::vector<std::vector<uint32_t>>;
RuleIndex index_by_consequent(const std::vector<AssociationRule>& rules, const ItemCodebook& cb);

// One rule per line: "a,b => c  sup=<int> conf=<6-decimal>".
void dump_rules(const std::vector<AssociationRule>& rules, std::ostream& out);

}  // namespace hmit

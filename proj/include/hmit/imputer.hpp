#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hmit/discretize.hpp"
#include "hmit/mining.hpp"

namespace hmit {

enum class Matching { partial, full };
enum class PDenominator { antecedent, known_attributes };

struct HmitConfig {
    MiningParams mining;
    // Partial-matching threshold: a rule fires when at least this fraction
    // of it matches the observation (see PDenominator for what "fraction"
    // divides by). At p = 1.0 with the antecedent denominator, partial and
    // full matching coincide.
    double p = 0.8;
    Matching matching = Matching::partial;
    int k = 10;  // kNN fallback neighbourhood size
    // antecedent: |A and K| / |A| (default; short rules can still fire).
    // known_attributes: |A and K| / |K|, the literal reading of the
    // partial-matching definition.
    PDenominator p_denominator = PDenominator::antecedent;
    int bins = 5;
    BinStrategy bin_strategy = BinStrategy::equal_frequency;
    bool rules_enabled = true;  // false = plain kNN imputation

    void validate() const;
};

double match_fraction(const AssociationRule& rule, std::span<const int32_t> known_items,
                      PDenominator mode);

struct FiredEntry {
    uint32_t rule;    // index into the mined rule list
    double fraction;  // the match fraction that admitted it
};

struct FiredSet {
    uint32_t row = 0;
    uint32_t attr = 0;
    std::vector<FiredEntry> entries;  // input rule order

    bool empty() const { return entries.empty(); }
};

// Runs the fired-set criterion over one attribute's rule bucket. Partial
// matching keeps rules with match_fraction >= p; full matching keeps exact
// antecedent containment. Comparisons are exact (no epsilon), so the set
// shrinks monotonically as p grows.
FiredSet fire_rules(const std::vector<AssociationRule>& rules,
                    std::span<const uint32_t> rules_for_attr,
                    std::span<const int32_t> known_items, const HmitConfig& cfg, uint32_t row = 0,
                    uint32_t attr = 0);

// Mode of the fired consequents; ties broken by larger summed confidence,
// then larger summed support, then smaller item id. Throws on an empty set.
int32_t aggregate_categorical(const FiredSet& f, const std::vector<AssociationRule>& rules);

// Median of the fired consequents' bin midpoints (mean of the two middle
// values when even). Throws on an empty set.
double aggregate_continuous(const FiredSet& f, const std::vector<AssociationRule>& rules,
                            const std::vector<double>& bin_edges, const ItemCodebook& cb);

// kNN fallback on the raw corrupted dataset. Distance is an overlap metric
// over all non-class attributes: categorical pairs contribute 0/1, continuous
// pairs |x-y|/range clamped to [0,1], any pair with a missing side 1. Donors
// are rows with the target attribute known, ranked by (distance, row index);
// categorical targets take the majority vote (ties by summed inverse rank,
// then token order), continuous targets the mean of the donors' raw values.
// Empty optional = no donors.
std::optional<Cell> knn_impute(size_t row, size_t attr, const Dataset& ds, const HmitConfig& cfg);

enum class ImputeMethod { rule, knn, global_fallback };
const char* to_string(ImputeMethod m);

struct ImputationOutcome {
    uint32_t row = 0;
    uint32_t attr = 0;
    Cell value;
    ImputeMethod method = ImputeMethod::knn;
    uint32_t fired_count = 0;  // > 0 iff method == rule
    double elapsed_us = 0.0;
};

// Mining artifacts shared by every cell of one imputation pass (and reusable
// across matching modes in benchmarks: firing depends on the config, the
// mined rules do not).
struct PreparedRules {
    Dataset discretized;
    ItemCodebook codebook;
    std::vector<std::vector<int32_t>> known_items;  // per row
    std::vector<AssociationRule> rules;
    RuleIndex rules_by_attr;
    double mine_ms = 0.0;
    // Antecedents as item bitmasks so firing a rule is a handful of
    // popcounts instead of a list intersection.
    size_t mask_words = 0;
    std::vector<uint64_t> rule_masks;  // rules.size() * mask_words
};

PreparedRules prepare_rules(const Dataset& corrupted, const HmitConfig& cfg);

struct ImputeResult {
    Dataset imputed;
    std::vector<ImputationOutcome> outcomes;  // row-major cell order
    std::vector<std::vector<double>> bin_edges;  // per attribute; empty if categorical
    size_t rule_count = 0;
    double mine_ms = 0.0;
    double impute_ms = 0.0;
};

// The full hybrid pass: mine once, then for every missing cell fire rules
// (mode/median aggregation) and fall back to kNN, then to the attribute's
// global mode/mean. Firing and distances read only originally-known cells,
// so the outcome is independent of cell order.
ImputeResult impute_all(const Dataset& corrupted, const HmitConfig& cfg);
ImputeResult impute_prepared(const Dataset& corrupted, const PreparedRules& prep,
                             const HmitConfig& cfg);

// Outcome log: one JSON record per line.
void write_outcome_log(const ImputeResult& result, const Dataset& context, std::ostream& out);

}  // namespace hmit

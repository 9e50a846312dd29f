#include "hmit/imputer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <json.hpp>

namespace hmit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void HmitConfig::validate() const {
    mining.validate();
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must be in (0, 1]");
    if (k < 1) throw InvalidArgument("k must be >= 1");
    if (bins < 1) throw InvalidArgument("bins must be >= 1");
}

const char* to_string(ImputeMethod m) {
    switch (m) {
        case ImputeMethod::rule: return "rule";
        case ImputeMethod::knn: return "knn";
        case ImputeMethod::global_fallback: return "global_fallback";
    }
    return "?";
}

double match_fraction(const AssociationRule& rule, std::span<const int32_t> known_items,
                      PDenominator mode) {
    if (rule.antecedent.items.empty())
        throw InvalidArgument("match fraction undefined for an empty antecedent");
    if (known_items.empty()) return 0.0;
    // both sides sorted ascending
    size_t matched = 0, i = 0, j = 0;
    const auto& ante = rule.antecedent.items;
    while (i < ante.size() && j < known_items.size()) {
        if (ante[i] == known_items[j]) {
            ++matched;
            ++i;
            ++j;
        } else if (ante[i] < known_items[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    size_t denom = mode == PDenominator::antecedent ? ante.size() : known_items.size();
    return static_cast<double>(matched) / static_cast<double>(denom);
}

FiredSet fire_rules(const std::vector<AssociationRule>& rules,
                    std::span<const uint32_t> rules_for_attr,
                    std::span<const int32_t> known_items, const HmitConfig& cfg, uint32_t row,
                    uint32_t attr) {
    FiredSet fired;
    fired.row = row;
    fired.attr = attr;
    for (uint32_t idx : rules_for_attr) {
        const AssociationRule& r = rules[idx];
        if (cfg.matching == Matching::full) {
            // containment criterion: the whole antecedent is known
            double frac = match_fraction(r, known_items, PDenominator::antecedent);
            if (frac == 1.0) fired.entries.push_back({idx, frac});
        } else {
            double frac = match_fraction(r, known_items, cfg.p_denominator);
            if (frac >= cfg.p) fired.entries.push_back({idx, frac});
        }
    }
    return fired;
}

int32_t aggregate_categorical(const FiredSet& f, const std::vector<AssociationRule>& rules) {
    if (f.empty()) throw EmptyFiredSetError("cannot aggregate an empty fired set");
    struct Tally {
        int64_t count = 0;
        double conf_sum = 0.0;
        int64_t sup_sum = 0;
    };
    std::map<int32_t, Tally> tallies;  // ordered: smallest item id wins final ties
    for (const FiredEntry& e : f.entries) {
        const AssociationRule& r = rules[e.rule];
        Tally& t = tallies[r.consequent];
        ++t.count;
        t.conf_sum += r.confidence;
        t.sup_sum += r.support_count;
    }
    int32_t best = -1;
    Tally best_t;
    for (const auto& [item, t] : tallies) {
        bool better = best == -1 || t.count > best_t.count ||
                      (t.count == best_t.count && t.conf_sum > best_t.conf_sum) ||
                      (t.count == best_t.count && t.conf_sum == best_t.conf_sum &&
                       t.sup_sum > best_t.sup_sum);
        if (better) {
            best = item;
            best_t = t;
        }
    }
    return best;
}

double aggregate_continuous(const FiredSet& f, const std::vector<AssociationRule>& rules,
                            const std::vector<double>& bin_edges, const ItemCodebook& cb) {
    if (f.empty()) throw EmptyFiredSetError("cannot aggregate an empty fired set");
    std::vector<double> midpoints;
    midpoints.reserve(f.entries.size());
    for (const FiredEntry& e : f.entries) {
        auto [attr, bin] = cb.decode(rules[e.rule].consequent);
        (void)attr;
        midpoints.push_back(bin_midpoint(bin, bin_edges));
    }
    std::sort(midpoints.begin(), midpoints.end());
    size_t n = midpoints.size();
    if (n % 2 == 1) return midpoints[n / 2];
    return (midpoints[n / 2 - 1] + midpoints[n / 2]) / 2.0;
}

namespace {

// Per-pass context for the overlap distance: continuous ranges over the
// observed (known) values and the class exclusion.
struct KnnContext {
    std::vector<double> lo, range;
    std::vector<bool> skip;  // class attributes

    static KnnContext build(const Dataset& ds) {
        KnnContext ctx;
        size_t n = ds.attr_count();
        ctx.lo.assign(n, 0.0);
        ctx.range.assign(n, 0.0);
        ctx.skip.assign(n, false);
        for (size_t a = 0; a < n; ++a) {
            ctx.skip[a] = ds.attribute(a).is_class;
            if (ds.attribute(a).kind != AttrKind::continuous) continue;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (size_t r = 0; r < ds.rows(); ++r) {
                const Cell& c = ds.cell(r, a);
                if (c.is_missing()) continue;
                lo = std::min(lo, c.value());
                hi = std::max(hi, c.value());
            }
            if (lo <= hi) {
                ctx.lo[a] = lo;
                ctx.range[a] = hi - lo;
            }
        }
        return ctx;
    }
};

double overlap_distance(const Dataset& ds, const KnnContext& ctx, size_t row_a, size_t row_b) {
    double d = 0.0;
    for (size_t a = 0; a < ds.attr_count(); ++a) {
        if (ctx.skip[a]) continue;
        const Cell& x = ds.cell(row_a, a);
        const Cell& y = ds.cell(row_b, a);
        if (x.is_missing() || y.is_missing()) {
            d += 1.0;
        } else if (ds.attribute(a).kind == AttrKind::categorical) {
            d += x.token_index() == y.token_index() ? 0.0 : 1.0;
        } else if (ctx.range[a] > 0.0) {
            d += std::min(std::abs(x.value() - y.value()) / ctx.range[a], 1.0);
        } else {
            d += x.value() == y.value() ? 0.0 : 1.0;
        }
    }
    return d;
}

std::optional<Cell> knn_impute_ctx(size_t row, size_t attr, const Dataset& ds,
                                   const KnnContext& ctx, const HmitConfig& cfg) {
    struct Donor {
        double dist;
        size_t row;
    };
    std::vector<Donor> donors;
    donors.reserve(ds.rows());
    for (size_t r = 0; r < ds.rows(); ++r) {
        if (r == row || ds.cell(r, attr).is_missing()) continue;
        donors.push_back({overlap_distance(ds, ctx, row, r), r});
    }
    if (donors.empty()) return std::nullopt;

    auto closer = [](const Donor& a, const Donor& b) {
        return a.dist != b.dist ? a.dist < b.dist : a.row < b.row;
    };
    size_t k = std::min<size_t>(static_cast<size_t>(cfg.k), donors.size());
    std::partial_sort(donors.begin(), donors.begin() + static_cast<ptrdiff_t>(k), donors.end(),
                      closer);
    donors.resize(k);

    if (ds.attribute(attr).kind == AttrKind::continuous) {
        double sum = 0.0;
        for (const Donor& d : donors) sum += ds.cell(d.row, attr).value();
        return Cell::number(sum / static_cast<double>(donors.size()));
    }

    struct Vote {
        int64_t count = 0;
        double inv_rank = 0.0;
    };
    std::map<int32_t, Vote> votes;  // ordered: token order breaks final ties
    for (size_t rank = 0; rank < donors.size(); ++rank) {
        Vote& v = votes[ds.cell(donors[rank].row, attr).token_index()];
        ++v.count;
        v.inv_rank += 1.0 / static_cast<double>(rank + 1);
    }
    int32_t best = -1;
    Vote best_v;
    for (const auto& [token, v] : votes) {
        bool better = best == -1 || v.count > best_v.count ||
                      (v.count == best_v.count && v.inv_rank > best_v.inv_rank);
        if (better) {
            best = token;
            best_v = v;
        }
    }
    return Cell::token(best);
}

}  // namespace

std::optional<Cell> knn_impute(size_t row, size_t attr, const Dataset& ds, const HmitConfig& cfg) {
    cfg.validate();
    KnnContext ctx = KnnContext::build(ds);
    return knn_impute_ctx(row, attr, ds, ctx, cfg);
}

PreparedRules prepare_rules(const Dataset& corrupted, const HmitConfig& cfg) {
    cfg.validate();
    auto start = Clock::now();
    PreparedRules prep;
    prep.discretized = discretize(corrupted, cfg.bins, cfg.bin_strategy);
    prep.codebook = ItemCodebook::build(prep.discretized);
    prep.known_items = to_transactions(prep.discretized, prep.codebook);
    if (cfg.rules_enabled) {
        auto frequent = mine_frequent(prep.known_items, cfg.mining, prep.codebook);
        prep.rules = generate_rules(frequent, cfg.mining, prep.codebook);
        prep.rules_by_attr = index_by_consequent(prep.rules, prep.codebook);
    } else {
        prep.rules_by_attr.assign(corrupted.attr_count(), {});
    }
    prep.mask_words = (static_cast<size_t>(prep.codebook.item_count()) + 63) / 64;
    prep.rule_masks.assign(prep.rules.size() * prep.mask_words, 0);
    for (size_t i = 0; i < prep.rules.size(); ++i) {
        uint64_t* mask = prep.rule_masks.data() + i * prep.mask_words;
        for (int32_t item : prep.rules[i].antecedent.items)
            mask[item >> 6] |= 1ULL << (item & 63);
    }
    prep.mine_ms = ms_since(start);
    return prep;
}

namespace {

// Equivalent to fire_rules, evaluated over bitmasks.
FiredSet fire_rules_masked(const PreparedRules& prep, std::span<const uint64_t> row_mask,
                           size_t known_count, const HmitConfig& cfg, uint32_t row,
                           uint32_t attr) {
    FiredSet fired;
    fired.row = row;
    fired.attr = attr;
    for (uint32_t idx : prep.rules_by_attr[attr]) {
        const uint64_t* mask = prep.rule_masks.data() + idx * prep.mask_words;
        size_t matched = 0;
        for (size_t w = 0; w < prep.mask_words; ++w)
            matched += static_cast<size_t>(__builtin_popcountll(mask[w] & row_mask[w]));
        size_t ante_len = prep.rules[idx].antecedent.items.size();
        if (cfg.matching == Matching::full) {
            if (matched == ante_len) fired.entries.push_back({idx, 1.0});
            continue;
        }
        size_t denom = cfg.p_denominator == PDenominator::antecedent ? ante_len : known_count;
        if (denom == 0) continue;
        double frac = static_cast<double>(matched) / static_cast<double>(denom);
        if (frac >= cfg.p) fired.entries.push_back({idx, frac});
    }
    return fired;
}

}  // namespace

namespace {

// Whole-attribute fallbacks when kNN has no donors: mode of the known
// categorical cells, mean of the known continuous ones.
Cell global_fallback_value(const Dataset& ds, size_t attr) {
    const AttributeSchema& s = ds.attribute(attr);
    if (s.kind == AttrKind::continuous) {
        double sum = 0.0;
        size_t n = 0;
        for (size_t r = 0; r < ds.rows(); ++r) {
            const Cell& c = ds.cell(r, attr);
            if (!c.is_missing()) {
                sum += c.value();
                ++n;
            }
        }
        return Cell::number(n ? sum / static_cast<double>(n) : 0.0);
    }
    std::vector<int64_t> counts(s.categories.size(), 0);
    for (size_t r = 0; r < ds.rows(); ++r) {
        const Cell& c = ds.cell(r, attr);
        if (!c.is_missing()) ++counts[c.token_index()];
    }
    int32_t best = 0;
    for (size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[best]) best = static_cast<int32_t>(i);
    return Cell::token(best);
}

}  // namespace

ImputeResult impute_prepared(const Dataset& corrupted, const PreparedRules& prep,
                             const HmitConfig& cfg) {
    cfg.validate();
    ImputeResult result;
    result.imputed = corrupted;
    result.rule_count = prep.rules.size();
    result.mine_ms = prep.mine_ms;
    result.bin_edges.resize(corrupted.attr_count());
    for (size_t a = 0; a < corrupted.attr_count(); ++a)
        result.bin_edges[a] = prep.discretized.attribute(a).bin_edges;

    KnnContext knn_ctx = KnnContext::build(corrupted);
    std::vector<std::optional<Cell>> global_cache(corrupted.attr_count());

    auto impute_start = Clock::now();
    std::vector<uint64_t> row_mask(prep.mask_words);
    for (size_t r = 0; r < corrupted.rows(); ++r) {
        std::fill(row_mask.begin(), row_mask.end(), 0);
        for (int32_t item : prep.known_items[r]) row_mask[item >> 6] |= 1ULL << (item & 63);
        for (size_t a = 0; a < corrupted.attr_count(); ++a) {
            if (!corrupted.cell(r, a).is_missing()) continue;
            auto cell_start = Clock::now();
            ImputationOutcome outcome;
            outcome.row = static_cast<uint32_t>(r);
            outcome.attr = static_cast<uint32_t>(a);

            FiredSet fired = fire_rules_masked(prep, row_mask, prep.known_items[r].size(), cfg,
                                               outcome.row, outcome.attr);
            if (!fired.empty()) {
                outcome.method = ImputeMethod::rule;
                outcome.fired_count = static_cast<uint32_t>(fired.entries.size());
                if (corrupted.attribute(a).kind == AttrKind::categorical) {
                    int32_t item = aggregate_categorical(fired, prep.rules);
                    outcome.value = Cell::token(prep.codebook.decode(item).second);
                } else {
                    outcome.value = Cell::number(aggregate_continuous(
                        fired, prep.rules, prep.discretized.attribute(a).bin_edges,
                        prep.codebook));
                }
            } else if (auto knn = knn_impute_ctx(r, a, corrupted, knn_ctx, cfg)) {
                outcome.method = ImputeMethod::knn;
                outcome.value = *knn;
            } else {
                outcome.method = ImputeMethod::global_fallback;
                if (!global_cache[a]) global_cache[a] = global_fallback_value(corrupted, a);
                outcome.value = *global_cache[a];
            }

            result.imputed.cell(r, a) = outcome.value;
            outcome.elapsed_us = ms_since(cell_start) * 1000.0;
            result.outcomes.push_back(std::move(outcome));
        }
    }
    result.impute_ms = ms_since(impute_start);
    return result;
}

ImputeResult impute_all(const Dataset& corrupted, const HmitConfig& cfg) {
    PreparedRules prep = prepare_rules(corrupted, cfg);
    return impute_prepared(corrupted, prep, cfg);
}

void write_outcome_log(const ImputeResult& result, const Dataset& context, std::ostream& out) {
    for (const ImputationOutcome& o : result.outcomes) {
        nlohmann::ordered_json j;
        j["row"] = o.row;
        j["attribute"] = o.attr;
        j["method"] = to_string(o.method);
        if (context.attribute(o.attr).kind == AttrKind::continuous)
            j["value"] = o.value.value();
        else
            j["value"] = context.attribute(o.attr).categories.at(o.value.token_index());
        j["fired_count"] = o.fired_count;
        j["elapsed_us"] = o.elapsed_us;
        out << j.dump() << "\n";
    }
}

}  // namespace hmit

// Brute-force reference implementations the fast paths are checked against.
// Deliberately naive and independent of the library internals: itemset
// supports come from rescanning transactions, kNN from a full sort.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hmit/codebook.hpp"
#include "hmit/dataset.hpp"
#include "hmit/mining.hpp"
#include "hmit/rng.hpp"

namespace oracle {

// Every itemset (over the whole item space, <= ~16 items) whose support
// meets ceil(min_sup * n), sorted lexicographically by item list.
inline std::vector<hmit::Itemset> brute_force_frequent(
    const std::vector<std::vector<int32_t>>& transactions, double min_sup, int32_t n_items) {
    std::vector<uint32_t> tx_masks;
    tx_masks.reserve(transactions.size());
    for (const auto& tx : transactions) {
        uint32_t m = 0;
        for (int32_t item : tx) m |= 1u << item;
        tx_masks.push_back(m);
    }
    auto need = static_cast<int64_t>(
        std::ceil(min_sup * static_cast<double>(transactions.size()) - 1e-9));
    if (need < 1) need = 1;

    std::vector<hmit::Itemset> out;
    for (uint32_t mask = 1; mask < (1u << n_items); ++mask) {
        int64_t support = 0;
        for (uint32_t tm : tx_masks)
            if ((tm & mask) == mask) ++support;
        if (support < need) continue;
        hmit::Itemset s;
        for (int32_t i = 0; i < n_items; ++i)
            if (mask & (1u << i)) s.items.push_back(i);
        s.support_count = support;
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(),
              [](const hmit::Itemset& a, const hmit::Itemset& b) { return a.items < b.items; });
    return out;
}

struct BruteRule {
    std::vector<int32_t> antecedent;
    int32_t consequent;
    int64_t ante_support;
    int64_t support;
    double confidence;
};

// All single-consequent rules meeting min_conf, from brute-force supports.
inline std::vector<BruteRule> brute_force_rules(
    const std::vector<std::vector<int32_t>>& transactions, double min_sup, double min_conf,
    int32_t n_items, const hmit::ItemCodebook& cb) {
    auto frequent = brute_force_frequent(transactions, min_sup, n_items);
    std::map<std::vector<int32_t>, int64_t> support;
    for (const auto& s : frequent) support[s.items] = s.support_count;

    std::vector<BruteRule> rules;
    for (const auto& z : frequent) {
        if (z.items.size() < 2) continue;
        for (size_t ci = 0; ci < z.items.size(); ++ci) {
            BruteRule r;
            r.consequent = z.items[ci];
            for (size_t i = 0; i < z.items.size(); ++i)
                if (i != ci) r.antecedent.push_back(z.items[i]);
            bool clash = false;
            for (int32_t a : r.antecedent)
                if (cb.attribute_of(a) == cb.attribute_of(r.consequent)) clash = true;
            if (clash) continue;
            r.ante_support = support.at(r.antecedent);
            r.support = z.support_count;
            r.confidence = static_cast<double>(r.support) / static_cast<double>(r.ante_support);
            if (r.confidence < min_conf) continue;
            rules.push_back(std::move(r));
        }
    }
    std::sort(rules.begin(), rules.end(), [](const BruteRule& a, const BruteRule& b) {
        if (a.consequent != b.consequent) return a.consequent < b.consequent;
        return a.antecedent < b.antecedent;
    });
    return rules;
}

// Exhaustive-sort kNN reference with the same contract as knn_impute.
inline std::optional<hmit::Cell> brute_force_knn(size_t row, size_t attr, const hmit::Dataset& ds,
                                                 int k) {
    using hmit::AttrKind;
    const size_t n_attrs = ds.attr_count();
    std::vector<double> lo(n_attrs, 0), hi(n_attrs, 0);
    std::vector<bool> seen(n_attrs, false);
    for (size_t a = 0; a < n_attrs; ++a) {
        if (ds.attribute(a).kind != AttrKind::continuous) continue;
        for (size_t r = 0; r < ds.rows(); ++r) {
            const hmit::Cell& c = ds.cell(r, a);
            if (c.is_missing()) continue;
            if (!seen[a]) {
                lo[a] = hi[a] = c.value();
                seen[a] = true;
            } else {
                lo[a] = std::min(lo[a], c.value());
                hi[a] = std::max(hi[a], c.value());
            }
        }
    }

    auto distance = [&](size_t ra, size_t rb) {
        double d = 0;
        for (size_t a = 0; a < n_attrs; ++a) {
            if (ds.attribute(a).is_class) continue;
            const hmit::Cell& x = ds.cell(ra, a);
            const hmit::Cell& y = ds.cell(rb, a);
            if (x.is_missing() || y.is_missing()) {
                d += 1;
            } else if (ds.attribute(a).kind == AttrKind::categorical) {
                d += x.token_index() == y.token_index() ? 0 : 1;
            } else {
                double range = hi[a] - lo[a];
                if (range > 0)
                    d += std::min(std::abs(x.value() - y.value()) / range, 1.0);
                else
                    d += x.value() == y.value() ? 0 : 1;
            }
        }
        return d;
    };

    std::vector<std::pair<double, size_t>> donors;
    for (size_t r = 0; r < ds.rows(); ++r)
        if (r != row && !ds.cell(r, attr).is_missing()) donors.push_back({distance(row, r), r});
    if (donors.empty()) return std::nullopt;
    std::sort(donors.begin(), donors.end());
    if (donors.size() > static_cast<size_t>(k)) donors.resize(k);

    if (ds.attribute(attr).kind == AttrKind::continuous) {
        double sum = 0;
        for (auto& [d, r] : donors) sum += ds.cell(r, attr).value();
        return hmit::Cell::number(sum / static_cast<double>(donors.size()));
    }
    std::map<int32_t, std::pair<int64_t, double>> votes;  // token -> (count, inv rank sum)
    for (size_t rank = 0; rank < donors.size(); ++rank) {
        auto& v = votes[ds.cell(donors[rank].second, attr).token_index()];
        v.first += 1;
        v.second += 1.0 / static_cast<double>(rank + 1);
    }
    int32_t best = votes.begin()->first;
    auto best_v = votes.begin()->second;
    for (const auto& [tok, v] : votes) {
        if (v.first > best_v.first ||
            (v.first == best_v.first && v.second > best_v.second)) {
            best = tok;
            best_v = v;
        }
    }
    return hmit::Cell::token(best);
}

// Random categorical dataset with planted co-occurrence and missing holes;
// the item space stays small enough for exhaustive enumeration.
inline hmit::Dataset random_dataset(hmit::Rng& rng, size_t max_rows = 200) {
    using namespace hmit;
    // 4 attributes x 3 categories = 12 items
    std::vector<AttributeSchema> schema;
    for (int a = 0; a < 4; ++a) {
        AttributeSchema s;
        s.name = "a" + std::to_string(a);
        s.kind = AttrKind::categorical;
        s.categories = {"u", "v", "w"};
        schema.push_back(s);
    }
    schema.back().is_class = true;
    size_t rows = 20 + rng.below(max_rows - 19);
    Dataset ds(schema, rows);
    for (size_t r = 0; r < rows; ++r) {
        int latent = static_cast<int>(rng.below(3));
        for (size_t a = 0; a < 4; ++a) {
            if (rng.chance(0.15)) continue;  // missing
            int tok = rng.chance(0.3) ? static_cast<int>(rng.below(3)) : latent;
            ds.cell(r, a) = Cell::token(tok);
        }
    }
    return ds;
}

// Mixed-kind dataset for kNN checks.
inline hmit::Dataset random_mixed_dataset(hmit::Rng& rng, size_t rows) {
    using namespace hmit;
    std::vector<AttributeSchema> schema;
    AttributeSchema c0;
    c0.name = "n0";
    c0.kind = AttrKind::continuous;
    schema.push_back(c0);
    AttributeSchema c1;
    c1.name = "c1";
    c1.kind = AttrKind::categorical;
    c1.categories = {"p", "q", "r", "s"};
    schema.push_back(c1);
    AttributeSchema c2;
    c2.name = "n2";
    c2.kind = AttrKind::continuous;
    schema.push_back(c2);
    AttributeSchema c3;
    c3.name = "c3";
    c3.kind = AttrKind::categorical;
    c3.categories = {"yes", "no"};
    c3.is_class = true;
    schema.push_back(c3);

    Dataset ds(schema, rows);
    for (size_t r = 0; r < rows; ++r) {
        int latent = static_cast<int>(rng.below(4));
        if (!rng.chance(0.2)) ds.cell(r, 0) = Cell::number(latent * 2.0 + rng.normal());
        if (!rng.chance(0.2)) ds.cell(r, 1) = Cell::token(rng.chance(0.25) ? static_cast<int>(rng.below(4)) : latent);
        if (!rng.chance(0.2)) ds.cell(r, 2) = Cell::number(rng.uniform() * 10.0);
        ds.cell(r, 3) = Cell::token(latent % 2);
    }
    return ds;
}

}  // namespace oracle

#include "hmit/mining.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "hmit/errors.hpp"

namespace hmit {

void MiningParams::validate() const {
    if (!(min_sup > 0.0 && min_sup <= 1.0)) throw InvalidArgument("min_sup must be in (0, 1]");
    if (!(min_conf > 0.0 && min_conf <= 1.0)) throw InvalidArgument("min_conf must be in (0, 1]");
    if (max_itemset_len < 0) throw InvalidArgument("max_itemset_len must be >= 0");
}

int64_t support_threshold(double min_sup, size_t n_transactions) {
    // the 1e-9 slack absorbs cases like 0.1 * 200 evaluating to 20.0000000000004
    double t = min_sup * static_cast<double>(n_transactions);
    auto c = static_cast<int64_t>(std::ceil(t - 1e-9));
    return std::max<int64_t>(c, 1);
}

namespace {

// Vertical representation: one transaction bitset per item.
class TidSet {
public:
    explicit TidSet(size_t words) : words_(words, 0) {}

    void set(size_t tid) { words_[tid >> 6] |= (1ULL << (tid & 63)); }

    int64_t count() const {
        int64_t n = 0;
        for (uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    // this AND other -> out; returns the population count of the result
    int64_t intersect_into(const TidSet& other, TidSet& out) const {
        int64_t n = 0;
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i] & other.words_[i];
            out.words_[i] = w;
            n += std::popcount(w);
        }
        return n;
    }

    size_t word_count() const { return words_.size(); }

private:
    std::vector<uint64_t> words_;
};

struct Node {
    int32_t item;
    TidSet tids;
    int64_t support;
};

struct Miner {
    int64_t threshold;
    size_t max_len;  // 0 = unbounded
    const ItemCodebook& cb;
    std::vector<Itemset> out;

    void expand(std::vector<int32_t>& prefix, const std::vector<Node>& siblings) {
        for (size_t i = 0; i < siblings.size(); ++i) {
            const Node& node = siblings[i];
            prefix.push_back(node.item);
            out.push_back({prefix, node.support});

            if (max_len == 0 || prefix.size() < max_len) {
                std::vector<Node> children;
                for (size_t j = i + 1; j < siblings.size(); ++j) {
                    const Node& cand = siblings[j];
                    if (cb.attribute_of(cand.item) == cb.attribute_of(node.item)) continue;
                    TidSet tids(node.tids.word_count());
                    int64_t sup = node.tids.intersect_into(cand.tids, tids);
                    if (sup >= threshold) children.push_back({cand.item, std::move(tids), sup});
                }
                if (!children.empty()) expand(prefix, children);
            }
            prefix.pop_back();
        }
    }
};

}  // namespace

std::vector<Itemset> mine_frequent(const std::vector<std::vector<int32_t>>& transactions,
                                   const MiningParams& params, const ItemCodebook& cb) {
    params.validate();
    if (transactions.empty()) return {};

    const size_t n_items = static_cast<size_t>(cb.item_count());
    const size_t words = (transactions.size() + 63) / 64;
    std::vector<TidSet> columns(n_items, TidSet(words));
    for (size_t t = 0; t < transactions.size(); ++t) {
        for (int32_t item : transactions[t]) {
            if (item < 0 || static_cast<size_t>(item) >= n_items)
                throw CodebookMissError("transaction " + std::to_string(t) +
                                        " holds item outside the codebook");
            columns[item].set(t);
        }
    }

    Miner miner{support_threshold(params.min_sup, transactions.size()),
                static_cast<size_t>(params.max_itemset_len), cb, {}};
    std::vector<Node> roots;
    for (size_t item = 0; item < n_items; ++item) {
        int64_t sup = columns[item].count();
        if (sup >= miner.threshold)
            roots.push_back({static_cast<int32_t>(item), std::move(columns[item]), sup});
    }
    std::vector<int32_t> prefix;
    miner.expand(prefix, roots);
    return std::move(miner.out);
}

namespace {

struct ItemsKey {
    const std::vector<int32_t>* items;
    bool operator==(const ItemsKey& o) const { return *items == *o.items; }
};

struct ItemsKeyHash {
    size_t operator()(const ItemsKey& k) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (int32_t v : *k.items) {
            h ^= static_cast<uint64_t>(static_cast<uint32_t>(v));
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h);
    }
};

}  // namespace

std::vector<AssociationRule> generate_rules(const std::vector<Itemset>& frequent,
                                            const MiningParams& params, const ItemCodebook& cb) {
    params.validate();
    std::unordered_map<ItemsKey, int64_t, ItemsKeyHash> support;
    support.reserve(frequent.size() * 2);
    for (const Itemset& s : frequent) support[{&s.items}] = s.support_count;

    std::vector<AssociationRule> rules;
    std::vector<int32_t> antecedent;
    for (const Itemset& z : frequent) {
        if (z.items.size() < 2) continue;
        for (size_t ci = 0; ci < z.items.size(); ++ci) {
            int32_t c = z.items[ci];
            antecedent.clear();
            for (size_t i = 0; i < z.items.size(); ++i)
                if (i != ci) antecedent.push_back(z.items[i]);

            // useless for imputation: the consequent's value would already be known
            bool attr_clash = false;
            for (int32_t a : antecedent)
                if (cb.attribute_of(a) == cb.attribute_of(c)) attr_clash = true;
            if (attr_clash) continue;

            auto it = support.find({&antecedent});
            if (it == support.end())
                throw ClosureViolationError("antecedent support missing from frequent list");
            int64_t ante_sup = it->second;
            double conf = static_cast<double>(z.support_count) / static_cast<double>(ante_sup);
            if (conf < params.min_conf) continue;

            AssociationRule r;
            r.antecedent.items = antecedent;
            r.antecedent.support_count = ante_sup;
            r.consequent = c;
            r.support_count = z.support_count;
            r.confidence = conf;
            rules.push_back(std::move(r));
        }
    }
    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
        if (a.consequent != b.consequent) return a.consequent < b.consequent;
        return a.antecedent.items < b.antecedent.items;
    });
    return rules;
}

RuleIndex index_by_consequent(const std::vector<AssociationRule>& rules, const ItemCodebook& cb) {
    RuleIndex index(cb.attribute_count());
    for (size_t i = 0; i < rules.size(); ++i)
        index[cb.attribute_of(rules[i].consequent)].push_back(static_cast<uint32_t>(i));
    return index;
}

void dump_rules(const std::vector<AssociationRule>& rules, std::ostream& out) {
    char buf[64];
    for (const AssociationRule& r : rules) {
        for (size_t i = 0; i < r.antecedent.items.size(); ++i) {
            if (i) out << ",";
            out << r.antecedent.items[i];
        }
        std::snprintf(buf, sizeof(buf), " => %d  sup=%lld conf=%.6f", r.consequent,
                      static_cast<long long>(r.support_count), r.confidence);
        out << buf << "\n";
    }
}

}  // namespace hmit

#include "hmit/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "hmit/rng.hpp"

namespace hmit {

bool CorruptionMask::contains(uint32_t row, uint32_t attr) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), std::make_pair(row, attr),
                               [](const MaskedCell& c, const std::pair<uint32_t, uint32_t>& k) {
                                   return std::make_pair(c.row, c.attr) < k;
                               });
    return it != cells.end() && it->row == row && it->attr == attr;
}

std::pair<Dataset, CorruptionMask> inject_missing(const Dataset& ds, double rate, uint64_t seed,
                                                  bool protect_class) {
    if (!(rate >= 0.0 && rate < 1.0)) throw InvalidArgument("rate must be in [0, 1)");
    ds.check();

    const auto class_attr = ds.class_attribute();
    auto is_protected = [&](size_t a) { return protect_class && class_attr && a == *class_attr; };
    auto is_non_class = [&](size_t a) { return !class_attr || a != *class_attr; };

    struct Candidate {
        uint32_t row, attr;
    };
    std::vector<Candidate> pool;
    std::vector<uint32_t> known_non_class(ds.rows(), 0);
    for (size_t r = 0; r < ds.rows(); ++r) {
        for (size_t a = 0; a < ds.attr_count(); ++a) {
            if (ds.cell(r, a).is_missing()) continue;
            if (is_non_class(a)) ++known_non_class[r];
            if (!is_protected(a))
                pool.push_back({static_cast<uint32_t>(r), static_cast<uint32_t>(a)});
        }
    }

    const auto target = static_cast<size_t>(std::floor(rate * static_cast<double>(pool.size())));

    CorruptionMask mask;
    mask.seed = seed;
    mask.rate = rate;
    Dataset out = ds;

    Rng rng(derive_seed(seed, "inject_missing"));
    std::vector<uint32_t> remaining = known_non_class;
    while (mask.cells.size() < target) {
        if (pool.empty())
            throw InfeasibleRateError(
                "rate " + format_double(rate) +
                " cannot be met while keeping one known non-class cell per row");
        size_t pick = static_cast<size_t>(rng.below(pool.size()));
        Candidate c = pool[pick];
        // swap-remove either way: the cell is masked or permanently locked
        pool[pick] = pool.back();
        pool.pop_back();
        if (is_non_class(c.attr) && remaining[c.row] <= 1) continue;  // would empty the row
        if (is_non_class(c.attr)) --remaining[c.row];
        mask.cells.push_back({c.row, c.attr, out.cell(c.row, c.attr)});
        out.cell(c.row, c.attr) = Cell::missing();
    }

    std::sort(mask.cells.begin(), mask.cells.end(), [](const MaskedCell& a, const MaskedCell& b) {
        return std::make_pair(a.row, a.attr) < std::make_pair(b.row, b.attr);
    });
    return {std::move(out), std::move(mask)};
}

Dataset restore(const Dataset& corrupted, const CorruptionMask& mask) {
    Dataset out = corrupted;
    for (const MaskedCell& m : mask.cells) out.cell(m.row, m.attr) = m.original;
    return out;
}

void save_mask(const CorruptionMask& mask, const Dataset& context,
               const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["seed"] = mask.seed;
    j["rate"] = mask.rate;
    auto arr = nlohmann::ordered_json::array();
    for (const MaskedCell& m : mask.cells) {
        nlohmann::ordered_json e;
        e["row"] = m.row;
        e["attr"] = m.attr;
        if (context.attribute(m.attr).kind == AttrKind::continuous)
            e["value"] = m.original.value();
        else
            e["value"] = context.attribute(m.attr).categories.at(m.original.token_index());
        arr.push_back(std::move(e));
    }
    j["masked"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

CorruptionMask load_mask(const std::filesystem::path& path, const Dataset& context) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    CorruptionMask mask;
    mask.seed = j.value("seed", 0ULL);
    mask.rate = j.value("rate", 0.0);
    for (const auto& e : j.at("masked")) {
        MaskedCell m;
        m.row = e.at("row").get<uint32_t>();
        m.attr = e.at("attr").get<uint32_t>();
        if (m.attr >= context.attr_count())
            throw ParseError(path.string() + ": attribute index out of range");
        const AttributeSchema& s = context.attribute(m.attr);
        if (s.kind == AttrKind::continuous) {
            m.original = Cell::number(e.at("value").get<double>());
        } else {
            int32_t idx = s.category_index(e.at("value").get<std::string>());
            if (idx < 0)
                throw ParseError(path.string() + ": unknown category for attribute '" + s.name + "'");
            m.original = Cell::token(idx);
        }
        mask.cells.push_back(std::move(m));
    }
    std::sort(mask.cells.begin(), mask.cells.end(), [](const MaskedCell& a, const MaskedCell& b) {
        return std::make_pair(a.row, a.attr) < std::make_pair(b.row, b.attr);
    });
    return mask;
}

}  // namespace hmit

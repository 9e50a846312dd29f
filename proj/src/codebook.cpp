#include "hmit/codebook.hpp"

namespace hmit {

ItemCodebook ItemCodebook::build(const Dataset& ds) {
    ItemCodebook cb;
    cb.first_.resize(ds.attr_count() + 1, 0);
    for (size_t a = 0; a < ds.attr_count(); ++a) {
        const AttributeSchema& s = ds.attribute(a);
        int32_t tokens;
        if (s.kind == AttrKind::categorical) {
            tokens = static_cast<int32_t>(s.categories.size());
        } else {
            if (s.bin_edges.size() < 2)
                throw InvalidArgument("attribute '" + s.name +
                                      "' is continuous but not discretized");
            tokens = static_cast<int32_t>(s.bin_edges.size()) - 1;
        }
        cb.first_[a + 1] = cb.first_[a] + tokens;
    }
    cb.item_attr_.resize(cb.first_.back());
    for (size_t a = 0; a < ds.attr_count(); ++a)
        for (int32_t i = cb.first_[a]; i < cb.first_[a + 1]; ++i)
            cb.item_attr_[i] = static_cast<uint32_t>(a);
    return cb;
}

std::vector<std::vector<int32_t>> to_transactions(const Dataset& ds, const ItemCodebook& cb) {
    if (cb.attribute_count() != ds.attr_count())
        throw CodebookMissError("codebook built for a different schema");
    std::vector<std::vector<int32_t>> out(ds.rows());
    for (size_t r = 0; r < ds.rows(); ++r) {
        auto& tx = out[r];
        tx.reserve(ds.attr_count());
        for (size_t a = 0; a < ds.attr_count(); ++a) {
            const Cell& c = ds.cell(r, a);
            if (c.is_missing()) continue;
            if (!c.is_token())
                throw CodebookMissError("row " + std::to_string(r) + ", attribute '" +
                                        ds.attribute(a).name + "': raw continuous cell (discretize first)");
            int32_t tok = c.token_index();
            if (tok < 0 || tok >= cb.token_count(a))
                throw CodebookMissError("row " + std::to_string(r) + ", attribute '" +
                                        ds.attribute(a).name + "': token " + std::to_string(tok) +
                                        " not in codebook");
            tx.push_back(cb.encode(a, tok));
        }
        // attribute-major ids and ascending attribute iteration: already sorted
    }
    return out;
}

}  // namespace hmit

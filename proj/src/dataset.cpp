#include "hmit/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace hmit {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::string Dataset::cell_text(size_t row, size_t attr) const {
    const Cell& c = cell(row, attr);
    if (c.is_missing()) return "?";
    const AttributeSchema& s = schema_[attr];
    if (c.is_number()) return format_double(c.value());
    int32_t t = c.token_index();
    if (s.kind == AttrKind::categorical) {
        if (t < 0 || static_cast<size_t>(t) >= s.categories.size())
            return "<bad-token:" + std::to_string(t) + ">";
        return s.categories[t];
    }
    return "bin" + std::to_string(t);  // discretized continuous
}

void Dataset::check() const {
    size_t n_class = 0;
    for (size_t a = 0; a < schema_.size(); ++a) {
        const AttributeSchema& s = schema_[a];
        if (s.is_class) ++n_class;
        if (s.kind == AttrKind::categorical) {
            for (size_t i = 0; i < s.categories.size(); ++i)
                for (size_t j = i + 1; j < s.categories.size(); ++j)
                    if (s.categories[i] == s.categories[j])
                        throw InvalidArgument("attribute '" + s.name +
                                              "': duplicate category '" + s.categories[i] + "'");
        }
        for (size_t i = 1; i < s.bin_edges.size(); ++i)
            if (!(s.bin_edges[i - 1] < s.bin_edges[i]))
                throw InvalidArgument("attribute '" + s.name + "': bin edges not ascending");
    }
    if (n_class > 1) throw InvalidArgument("more than one class attribute");

    for (size_t r = 0; r < rows_; ++r) {
        for (size_t a = 0; a < schema_.size(); ++a) {
            const Cell& c = cell(r, a);
            const AttributeSchema& s = schema_[a];
            if (c.is_missing()) continue;
            if (s.kind == AttrKind::categorical) {
                if (!c.is_token() || c.token_index() < 0 ||
                    static_cast<size_t>(c.token_index()) >= s.categories.size())
                    throw InvalidArgument("row " + std::to_string(r) + ", attribute '" + s.name +
                                          "': categorical cell out of range");
            } else if (c.is_number()) {
                if (!std::isfinite(c.value()))
                    throw InvalidArgument("row " + std::to_string(r) + ", attribute '" + s.name +
                                          "': non-finite value");
            } else {
                // token cell on a continuous attribute: must be a valid bin
                size_t bins = s.bin_edges.empty() ? 0 : s.bin_edges.size() - 1;
                if (c.token_index() < 0 || static_cast<size_t>(c.token_index()) >= bins)
                    throw InvalidArgument("row " + std::to_string(r) + ", attribute '" + s.name +
                                          "': bin index out of range");
            }
        }
    }
}

bool Dataset::schema_equal(const Dataset& o) const {
    if (schema_.size() != o.schema_.size()) return false;
    for (size_t a = 0; a < schema_.size(); ++a) {
        const AttributeSchema& x = schema_[a];
        const AttributeSchema& y = o.schema_[a];
        if (x.name != y.name || x.kind != y.kind || x.is_class != y.is_class ||
            x.categories != y.categories || x.bin_edges != y.bin_edges)
            return false;
    }
    return true;
}

bool Dataset::same_content(const Dataset& o) const {
    if (rows_ != o.rows() || schema_.size() != o.attr_count()) return false;
    for (size_t a = 0; a < schema_.size(); ++a) {
        const AttributeSchema& x = schema_[a];
        const AttributeSchema& y = o.attribute(a);
        if (x.name != y.name || x.kind != y.kind || x.is_class != y.is_class) return false;
    }
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t a = 0; a < schema_.size(); ++a) {
            const Cell& x = cell(r, a);
            const Cell& y = o.cell(r, a);
            if (x.is_missing() != y.is_missing()) return false;
            if (x.is_missing()) continue;
            if (schema_[a].kind == AttrKind::continuous) {
                if (!x.is_number() || !y.is_number() || x.value() != y.value()) return false;
            } else {
                if (cell_text(r, a) != o.cell_text(r, a)) return false;
            }
        }
    }
    return true;
}

}  // namespace hmit

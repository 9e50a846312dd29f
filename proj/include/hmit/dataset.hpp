#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmit/errors.hpp"

namespace hmit {

enum class AttrKind { categorical, continuous };

struct AttributeSchema {
    std::string name;
    AttrKind kind = AttrKind::categorical;
    bool is_class = false;
    // Continuous only, set by discretize(): strictly ascending, bins+1 entries.
    std::vector<double> bin_edges;
    // Categorical only: distinct tokens in declaration order.
    std::vector<std::string> categories;

    int32_t category_index(const std::string& token) const {
        for (size_t i = 0; i < categories.size(); ++i)
            if (categories[i] == token) return static_cast<int32_t>(i);
        return -1;
    }
};

// One grid cell: missing, a token index (category or bin), or a real value.
// The owning attribute's schema says how to read a token index.
class Cell {
public:
    Cell() = default;

    static Cell missing() { return Cell(); }
    static Cell token(int32_t index) {
        Cell c;
        c.tag_ = Tag::token;
        c.token_ = index;
        return c;
    }
    static Cell number(double v) {
        Cell c;
        c.tag_ = Tag::number;
        c.num_ = v;
        return c;
    }

    bool is_missing() const { return tag_ == Tag::missing; }
    bool is_token() const { return tag_ == Tag::token; }
    bool is_number() const { return tag_ == Tag::number; }

    int32_t token_index() const {
        assert(tag_ == Tag::token);
        return token_;
    }
    double value() const {
        assert(tag_ == Tag::number);
        return num_;
    }

    bool operator==(const Cell& o) const {
        if (tag_ != o.tag_) return false;
        switch (tag_) {
            case Tag::missing: return true;
            case Tag::token: return token_ == o.token_;
            case Tag::number: return num_ == o.num_;
        }
        return false;
    }

private:
    enum class Tag : uint8_t { missing, token, number };
    Tag tag_ = Tag::missing;
    int32_t token_ = -1;
    double num_ = 0.0;
};

// Rectangular row-major grid of cells plus per-attribute schema.
// Immutable in normal use after construction; operations that change data
// (corruption, discretization, imputation) return new datasets.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<AttributeSchema> schema, size_t rows)
        : schema_(std::move(schema)), rows_(rows), cells_(rows * schema_.size()) {}

    size_t rows() const { return rows_; }
    size_t attr_count() const { return schema_.size(); }

    const AttributeSchema& attribute(size_t a) const { return schema_[a]; }
    AttributeSchema& attribute(size_t a) { return schema_[a]; }
    const std::vector<AttributeSchema>& schema() const { return schema_; }

    Cell& cell(size_t row, size_t attr) {
        assert(row < rows_ && attr < schema_.size());
        return cells_[row * schema_.size() + attr];
    }
    const Cell& cell(size_t row, size_t attr) const {
        assert(row < rows_ && attr < schema_.size());
        return cells_[row * schema_.size() + attr];
    }

    std::optional<size_t> class_attribute() const {
        for (size_t a = 0; a < schema_.size(); ++a)
            if (schema_[a].is_class) return a;
        return std::nullopt;
    }

    // Human-readable form of a cell (category name, bin label, number, or "?").
    std::string cell_text(size_t row, size_t attr) const;

    size_t missing_count() const {
        size_t n = 0;
        for (const Cell& c : cells_)
            if (c.is_missing()) ++n;
        return n;
    }

    // Validates the invariants: known categorical values index into the
    // attribute's categories, known continuous values are finite, at most
    // one class attribute, bin_edges strictly ascending. Throws on violation.
    void check() const;

    // Structural equality: identical schema (including category order) and
    // identical cells.
    bool operator==(const Dataset& o) const {
        return rows_ == o.rows_ && schema_equal(o) && cells_ == o.cells_;
    }

    // Equality up to category re-indexing: same shape, names, kinds, class
    // flags, and every cell carries the same token text / value. Two loads
    // of the same CSV through different category orderings compare equal.
    bool same_content(const Dataset& o) const;

    std::string provenance;

private:
    bool schema_equal(const Dataset& o) const;

    std::vector<AttributeSchema> schema_;
    size_t rows_ = 0;
    std::vector<Cell> cells_;
};

// Number formatting used across CSV/ARFF/JSON output: shortest string that
// parses back to the same double.
std::string format_double(double v);

}  // namespace hmit

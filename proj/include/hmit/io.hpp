#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hmit/dataset.hpp"

namespace hmit {

enum class TableFormat { csv, arff };

enum class HeaderMode { automatic, yes, no };

struct LoadOptions {
    // CSV only. In automatic mode the first row is treated as a header iff
    // all of its tokens are non-numeric, non-missing and pairwise distinct,
    // and at least one token never reappears in its own column.
    HeaderMode header = HeaderMode::automatic;
    // Kinds/names/class flags to impose instead of inferring them.
    // Categories listed in a hint define the category order; observed
    // tokens outside a hinted category list are a parse error.
    std::vector<AttributeSchema> schema_hint;
};

// Parses CSV or the @attribute/@data ARFF subset. '?' and empty fields are
// missing. Without a hint an attribute is continuous iff every non-missing
// token parses as a number; the last column is the class by default.
Dataset load_table(std::istream& source, TableFormat format, const LoadOptions& opts = {});
Dataset load_table_file(const std::filesystem::path& path, TableFormat format,
                        const LoadOptions& opts = {});

// Infers the format from the file extension (.arff -> ARFF, else CSV).
TableFormat format_from_path(const std::filesystem::path& path);

void save_table(const Dataset& ds, std::ostream& out, TableFormat format, bool header = true);
void save_table_file(const Dataset& ds, const std::filesystem::path& path, TableFormat format,
                     bool header = true);

// Schema-hint file: JSON array of {"name", "kind": "categorical"|"continuous",
// "is_class"?, "categories"?}.
std::vector<AttributeSchema> load_schema_hint(const std::filesystem::path& path);

}  // namespace hmit

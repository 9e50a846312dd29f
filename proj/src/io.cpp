#include "hmit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hmit {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_missing_token(const std::string& t) { return t.empty() || t == "?"; }

bool parse_number(const std::string& t, double& out) {
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;  // from_chars rejects a leading plus
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool is_numeric_token(const std::string& t) {
    double v;
    return parse_number(t, v);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

struct RawTable {
    std::vector<std::string> names;  // empty if no header
    std::vector<std::vector<std::string>> rows;
    size_t width = 0;
    // ARFF declarations; unused for CSV.
    std::vector<AttrKind> arff_kinds;
    std::vector<std::vector<std::string>> arff_categories;
};

bool looks_like_header(const RawTable& t) {
    if (t.rows.empty()) return false;
    const auto& first = t.rows.front();
    for (const std::string& tok : first)
        if (is_missing_token(tok) || is_numeric_token(tok)) return false;
    for (size_t i = 0; i < first.size(); ++i)
        for (size_t j = i + 1; j < first.size(); ++j)
            if (first[i] == first[j]) return false;
    // at least one token that never reappears in its own column
    for (size_t a = 0; a < t.width; ++a) {
        bool reappears = false;
        for (size_t r = 1; r < t.rows.size() && !reappears; ++r)
            if (t.rows[r][a] == first[a]) reappears = true;
        if (!reappears) return true;
    }
    return false;
}

RawTable read_csv(std::istream& in, HeaderMode header) {
    RawTable t;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (t.rows.empty() && t.names.empty()) {
            t.width = fields.size();
        } else if (fields.size() != t.width) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.width) + " fields, got " +
                             std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    bool use_header = header == HeaderMode::yes || (header == HeaderMode::automatic && looks_like_header(t));
    if (use_header) {
        if (t.rows.empty()) throw EmptyDatasetError("input has a header but no data rows");
        t.names = t.rows.front();
        t.rows.erase(t.rows.begin());
    }
    return t;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

RawTable read_arff(std::istream& in) {
    RawTable t;
    std::string line;
    size_t line_no = 0;
    bool in_data = false;
    std::vector<AttrKind> kinds;
    std::vector<std::vector<std::string>> declared_cats;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '%') continue;
        if (!in_data && s[0] == '@') {
            std::string l = lower(s);
            if (l.rfind("@relation", 0) == 0) continue;
            if (l.rfind("@data", 0) == 0) {
                in_data = true;
                continue;
            }
            if (l.rfind("@attribute", 0) == 0) {
                std::string rest = trim(s.substr(std::string("@attribute").size()));
                // name is either quoted or runs to the first whitespace
                std::string name;
                size_t pos = 0;
                if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
                    char q = rest[0];
                    size_t end = rest.find(q, 1);
                    if (end == std::string::npos)
                        throw ParseError("line " + std::to_string(line_no) + ": unterminated attribute name");
                    name = rest.substr(1, end - 1);
                    pos = end + 1;
                } else {
                    while (pos < rest.size() && !std::isspace(static_cast<unsigned char>(rest[pos]))) ++pos;
                    name = rest.substr(0, pos);
                }
                std::string type = trim(rest.substr(pos));
                t.names.push_back(name);
                if (!type.empty() && type[0] == '{') {
                    size_t close = type.find('}');
                    if (close == std::string::npos)
                        throw ParseError("line " + std::to_string(line_no) + ": unterminated category list");
                    std::vector<std::string> cats;
                    for (std::string& c : split_csv_line(type.substr(1, close - 1))) {
                        if (c.size() >= 2 && (c.front() == '\'' || c.front() == '"') && c.back() == c.front())
                            c = c.substr(1, c.size() - 2);
                        cats.push_back(c);
                    }
                    kinds.push_back(AttrKind::categorical);
                    declared_cats.push_back(std::move(cats));
                } else {
                    std::string lt = lower(type);
                    if (lt != "numeric" && lt != "real" && lt != "integer")
                        throw ParseError("line " + std::to_string(line_no) + ": unsupported attribute type '" +
                                         type + "'");
                    kinds.push_back(AttrKind::continuous);
                    declared_cats.emplace_back();
                }
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": unrecognized directive");
        }
        if (!in_data)
            throw ParseError("line " + std::to_string(line_no) + ": data before @data section");
        auto fields = split_csv_line(s);
        for (std::string& f : fields)
            if (f.size() >= 2 && (f.front() == '\'' || f.front() == '"') && f.back() == f.front())
                f = f.substr(1, f.size() - 2);
        if (fields.size() != t.names.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.names.size()) + " fields, got " +
                             std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.names.empty()) throw EmptyDatasetError("no @attribute declarations");
    t.width = t.names.size();
    t.arff_kinds = std::move(kinds);
    t.arff_categories = std::move(declared_cats);
    return t;
}

Dataset build_dataset(RawTable& t, const LoadOptions& opts, bool from_arff) {
    if (t.rows.empty()) throw EmptyDatasetError("empty input");
    const size_t n_attrs = t.width;
    const size_t n_rows = t.rows.size();

    std::vector<AttributeSchema> schema(n_attrs);
    for (size_t a = 0; a < n_attrs; ++a) {
        if (!t.names.empty())
            schema[a].name = t.names[a];
        else
            schema[a].name = "attr" + std::to_string(a);
    }

    const bool hinted = !opts.schema_hint.empty();
    if (hinted && opts.schema_hint.size() != n_attrs)
        throw ParseError("schema hint has " + std::to_string(opts.schema_hint.size()) +
                         " attributes, data has " + std::to_string(n_attrs));

    // decide kinds
    for (size_t a = 0; a < n_attrs; ++a) {
        if (hinted) {
            const AttributeSchema& h = opts.schema_hint[a];
            if (!h.name.empty()) schema[a].name = h.name;
            schema[a].kind = h.kind;
            schema[a].categories = h.categories;
        } else if (from_arff) {
            schema[a].kind = t.arff_kinds[a];
            schema[a].categories = t.arff_categories[a];
        } else {
            bool all_numeric = true;
            bool any_known = false;
            for (const auto& row : t.rows) {
                if (is_missing_token(row[a])) continue;
                any_known = true;
                if (!is_numeric_token(row[a])) {
                    all_numeric = false;
                    break;
                }
            }
            schema[a].kind = (any_known && all_numeric) ? AttrKind::continuous : AttrKind::categorical;
        }
    }

    // class flag: hint wins, else last column
    bool any_class_hint = false;
    if (hinted)
        for (const auto& h : opts.schema_hint)
            if (h.is_class) any_class_hint = true;
    if (any_class_hint) {
        for (size_t a = 0; a < n_attrs; ++a) schema[a].is_class = opts.schema_hint[a].is_class;
    } else {
        schema[n_attrs - 1].is_class = true;
    }

    Dataset ds(schema, n_rows);
    // category interning; hinted/declared categories are closed sets
    std::vector<std::map<std::string, int32_t>> cat_index(n_attrs);
    std::vector<bool> closed(n_attrs, false);
    for (size_t a = 0; a < n_attrs; ++a) {
        for (size_t i = 0; i < ds.attribute(a).categories.size(); ++i)
            cat_index[a][ds.attribute(a).categories[i]] = static_cast<int32_t>(i);
        if (!ds.attribute(a).categories.empty()) closed[a] = true;
    }

    for (size_t r = 0; r < n_rows; ++r) {
        for (size_t a = 0; a < n_attrs; ++a) {
            const std::string& tok = t.rows[r][a];
            if (is_missing_token(tok)) continue;
            if (ds.attribute(a).kind == AttrKind::continuous) {
                double v;
                if (!parse_number(tok, v))
                    throw ParseError("row " + std::to_string(r + 1) + ", attribute '" +
                                     ds.attribute(a).name + "': non-numeric token '" + tok + "'");
                ds.cell(r, a) = Cell::number(v);
            } else {
                auto it = cat_index[a].find(tok);
                int32_t idx;
                if (it == cat_index[a].end()) {
                    if (closed[a])
                        throw ParseError("row " + std::to_string(r + 1) + ", attribute '" +
                                         ds.attribute(a).name + "': token '" + tok +
                                         "' not in declared categories");
                    idx = static_cast<int32_t>(ds.attribute(a).categories.size());
                    ds.attribute(a).categories.push_back(tok);
                    cat_index[a][tok] = idx;
                } else {
                    idx = it->second;
                }
                ds.cell(r, a) = Cell::token(idx);
            }
        }
    }
    ds.check();
    return ds;
}

}  // namespace

Dataset load_table(std::istream& source, TableFormat format, const LoadOptions& opts) {
    if (format == TableFormat::csv) {
        RawTable t = read_csv(source, opts.header);
        return build_dataset(t, opts, false);
    }
    RawTable t = read_arff(source);
    return build_dataset(t, opts, true);
}

Dataset load_table_file(const std::filesystem::path& path, TableFormat format,
                        const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    Dataset ds = load_table(in, format, opts);
    ds.provenance = path.string();
    return ds;
}

TableFormat format_from_path(const std::filesystem::path& path) {
    return lower(path.extension().string()) == ".arff" ? TableFormat::arff : TableFormat::csv;
}

void save_table(const Dataset& ds, std::ostream& out, TableFormat format, bool header) {
    if (format == TableFormat::arff) {
        std::string rel = ds.provenance.empty() ? "dataset" : ds.provenance;
        for (char& c : rel)
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') c = '_';
        out << "@relation " << rel << "\n\n";
        for (size_t a = 0; a < ds.attr_count(); ++a) {
            const AttributeSchema& s = ds.attribute(a);
            out << "@attribute " << s.name << " ";
            if (s.kind == AttrKind::continuous) {
                out << "numeric";
            } else {
                out << "{";
                for (size_t i = 0; i < s.categories.size(); ++i) {
                    if (i) out << ",";
                    out << s.categories[i];
                }
                out << "}";
            }
            out << "\n";
        }
        out << "\n@data\n";
    } else if (header) {
        for (size_t a = 0; a < ds.attr_count(); ++a) {
            if (a) out << ",";
            out << ds.attribute(a).name;
        }
        out << "\n";
    }
    for (size_t r = 0; r < ds.rows(); ++r) {
        for (size_t a = 0; a < ds.attr_count(); ++a) {
            if (a) out << ",";
            out << ds.cell_text(r, a);
        }
        out << "\n";
    }
}

void save_table_file(const Dataset& ds, const std::filesystem::path& path, TableFormat format,
                     bool header) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    save_table(ds, out, format, header);
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<AttributeSchema> load_schema_hint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_array()) throw ParseError(path.string() + ": expected a JSON array");
    std::vector<AttributeSchema> hint;
    for (const auto& item : j) {
        AttributeSchema s;
        s.name = item.value("name", "");
        std::string kind = item.value("kind", "categorical");
        if (kind == "continuous")
            s.kind = AttrKind::continuous;
        else if (kind == "categorical")
            s.kind = AttrKind::categorical;
        else
            throw ParseError(path.string() + ": unknown kind '" + kind + "'");
        s.is_class = item.value("is_class", false);
        if (item.contains("categories"))
            s.categories = item["categories"].get<std::vector<std::string>>();
        hint.push_back(std::move(s));
    }
    return hint;
}

}  // namespace hmit
